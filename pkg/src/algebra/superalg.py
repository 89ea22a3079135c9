"""Matrix realizations of sl(m,n) and C(m) = osp(2|2m-2) with their root data."""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from algebra.exactnum import (
    CoordinateSolver,
    Subspace,
    Vector,
    add_scaled,
    from_rows,
    kernel,
    scalar,
)
from errors import DimensionMismatchError, MixedParityError, OutOfScopeError

logger = logging.getLogger(__name__)

Weight = Tuple[object, ...]


class SuperMatrix:
    """A square matrix with a ``(p|q)`` block structure and sparse rational entries."""

    __slots__ = ("p", "q", "entries")

    def __init__(self, p: int, q: int, entries: Optional[Mapping[Tuple[int, int], object]] = None):
        self.p, self.q = p, q
        n = p + q
        clean = {}
        for (i, j), x in (entries or {}).items():
            if not (0 <= i < n and 0 <= j < n):
                raise DimensionMismatchError(f"entry ({i},{j}) outside a {n}x{n} matrix")
            x = scalar(x)
            if x:
                clean[(i, j)] = x
        self.entries: Dict[Tuple[int, int], object] = clean

    @classmethod
    def unit(cls, p: int, q: int, a: int, b: int) -> "SuperMatrix":
        return cls(p, q, {(a, b): 1})

    @classmethod
    def diagonal(cls, p: int, q: int, values: Sequence[object]) -> "SuperMatrix":
        return cls(p, q, {(i, i): x for i, x in enumerate(values)})

    @property
    def size(self) -> int:
        return self.p + self.q

    def _odd_position(self, i: int, j: int) -> bool:
        return (i < self.p) != (j < self.p)

    @property
    def parity(self) -> Optional[int]:
        """0 or 1 for homogeneous matrices (the zero matrix is even), ``None`` if mixed."""
        kinds = {self._odd_position(i, j) for i, j in self.entries}
        if len(kinds) > 1:
            return None
        return 1 if kinds == {True} else 0

    def is_zero(self) -> bool:
        return not self.entries

    def _same_shape(self, other: "SuperMatrix") -> None:
        if (self.p, self.q) != (other.p, other.q):
            raise DimensionMismatchError(
                f"block sizes ({self.p}|{self.q}) and ({other.p}|{other.q}) differ"
            )

    def __add__(self, other: "SuperMatrix") -> "SuperMatrix":
        self._same_shape(other)
        out = dict(self.entries)
        for k, x in other.entries.items():
            out[k] = out.get(k, QQ.zero) + x
        return SuperMatrix(self.p, self.q, out)

    def __neg__(self) -> "SuperMatrix":
        return SuperMatrix(self.p, self.q, {k: -x for k, x in self.entries.items()})

    def __sub__(self, other: "SuperMatrix") -> "SuperMatrix":
        return self + (-other)

    def scaled(self, c) -> "SuperMatrix":
        c = scalar(c)
        return SuperMatrix(self.p, self.q, {k: c * x for k, x in self.entries.items()})

    def __matmul__(self, other: "SuperMatrix") -> "SuperMatrix":
        self._same_shape(other)
        rows: Dict[int, Dict[int, object]] = {}
        for (k, j), y in other.entries.items():
            rows.setdefault(k, {})[j] = y
        out: Dict[Tuple[int, int], object] = {}
        for (i, k), x in self.entries.items():
            for j, y in rows.get(k, {}).items():
                out[(i, j)] = out.get((i, j), QQ.zero) + x * y
        return SuperMatrix(self.p, self.q, out)

    def supertrace(self):
        s = QQ.zero
        for (i, j), x in self.entries.items():
            if i == j:
                s += x if i < self.p else -x
        return s

    def supertranspose(self) -> "SuperMatrix":
        """``(A B; C D) -> (A^t C^t; -B^t D^t)``."""
        out = {}
        for (i, j), x in self.entries.items():
            out[(j, i)] = -x if i < self.p <= j else x
        return SuperMatrix(self.p, self.q, out)

    def diagonal_entries(self) -> List[object]:
        return [self.entries.get((i, i), QQ.zero) for i in range(self.size)]

    def flat(self) -> Vector:
        n = self.size
        return {i * n + j: x for (i, j), x in self.entries.items()}

    @classmethod
    def from_flat(cls, p: int, q: int, v: Mapping[int, object]) -> "SuperMatrix":
        n = p + q
        return cls(p, q, {divmod(k, n): x for k, x in v.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SuperMatrix)
            and (self.p, self.q) == (other.p, other.q)
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.p, self.q, frozenset(self.entries.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{i},{j}:{x}" for (i, j), x in sorted(self.entries.items()))
        return f"SuperMatrix(({self.p}|{self.q}) {{{body}}})"


def superbracket(x: SuperMatrix, y: SuperMatrix) -> SuperMatrix:
    """``xy - (-1)^{|x||y|} yx`` on homogeneous matrices."""
    px, py = x.parity, y.parity
    if px is None or py is None:
        raise MixedParityError("superbracket needs homogeneous arguments")
    xy, yx = x @ y, y @ x
    return xy + yx if px and py else xy - yx


def invariant_form(x: SuperMatrix, y: SuperMatrix):
    """``str(xy)``."""
    return (x @ y).supertrace()


@dataclass(frozen=True)
class RootDatum:
    simple: Tuple[Weight, ...]
    even_positive: Tuple[Weight, ...]
    odd_positive: Tuple[Weight, ...]
    gram: Tuple[Tuple[object, ...], ...]
    root_spaces: Dict[Weight, List[SuperMatrix]]

    def form(self, a: Sequence[object], b: Sequence[object]):
        return sum(
            (a[i] * self.gram[i][i] * b[i] for i in range(len(a)) if a[i] and b[i]),
            QQ.zero,
        )


@dataclass(frozen=True)
class ZGrading:
    minus: Subspace
    zero: Subspace
    plus: Subspace
    minus_indices: Tuple[int, ...]
    zero_indices: Tuple[int, ...]
    plus_indices: Tuple[int, ...]


def _root_name(root: Weight, names: Sequence[str]) -> str:
    parts = []
    for c, name in zip(root, names):
        if not c:
            continue
        c = int(c) if c.denominator == 1 else c
        if c == 1:
            parts.append(f"+{name}")
        elif c == -1:
            parts.append(f"-{name}")
        else:
            parts.append(f"{c:+}{name}" if isinstance(c, int) else f"+({c}){name}")
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text


class SuperAlgebra:
    """A matrix Lie superalgebra with a weight basis: Cartan elements first, then root vectors.

    Basis coordinates are solved through pivot entries of the flattened matrices.
    Weights are coordinate tuples in the epsilon/delta basis of the dual Cartan.
    """

    def __init__(
        self,
        kind: str,
        m: int,
        n: Optional[int],
        p: int,
        q: int,
        cartan_basis: Sequence[SuperMatrix],
        cartan_labels: Sequence[str],
        root_vectors: Mapping[Weight, SuperMatrix],
        coord_index: Sequence[int],
        coord_names: Sequence[str],
        gram: Sequence[Sequence[object]],
        simple_roots: Sequence[Weight],
        ss_cartan: Sequence[int],
    ):
        self.kind, self.m, self.n, self.p, self.q = kind, m, n, p, q
        self.coord_index = tuple(coord_index)
        self.coord_names = tuple(coord_names)
        self.gram = tuple(tuple(scalar(x) for x in row) for row in gram)
        self.simple_roots = tuple(tuple(scalar(x) for x in r) for r in simple_roots)

        roots = sorted(root_vectors)
        self.basis: List[SuperMatrix] = list(cartan_basis) + [root_vectors[r] for r in roots]
        self.cartan: Tuple[int, ...] = tuple(range(len(cartan_basis)))
        self.ss_cartan: Tuple[int, ...] = tuple(ss_cartan)
        zero = tuple(QQ.zero for _ in coord_index)
        self.weights: List[Weight] = [zero] * len(cartan_basis) + roots
        self.roots: Dict[Weight, int] = {r: len(cartan_basis) + k for k, r in enumerate(roots)}
        self.parities: List[int] = [x.parity for x in self.basis]
        self.labels: List[str] = list(cartan_labels) + [self._root_label(r) for r in roots]
        self.indices: Tuple[int, ...] = tuple(range(len(self.basis)))

        size = p + q
        self._solver = CoordinateSolver([x.flat() for x in self.basis], size * size)
        self._brackets: Dict[Tuple[int, int], Vector] = {}
        self._views: Dict[str, "SubalgebraView"] = {}

        self._simple_solver = CoordinateSolver(
            [{a: x for a, x in enumerate(r) if x} for r in self.simple_roots], len(coord_index)
        )
        self.positive = frozenset(i for r, i in self.roots.items() if self._is_positive(r))
        self.raising: Tuple[int, ...] = tuple(self.roots[a] for a in self.simple_roots)
        self.lowering: Tuple[int, ...] = tuple(
            self.roots[tuple(-x for x in a)] for a in self.simple_roots
        )

        self._cartan_matrix = [
            [self.basis[h].diagonal_entries()[c] for c in self.coord_index] for h in self.cartan
        ]
        rows = [{a: x for a, x in enumerate(r) if x} for r in self._cartan_matrix]
        if kind == "sl":
            rows.append({a: QQ.one for a in range(len(coord_index))})
        self._weight_inverse = from_rows(rows, len(coord_index)).inv()

        self.degrees: List[int] = [0] * len(self.basis)
        for r, i in self.roots.items():
            if self.parities[i]:
                self.degrees[i] = 1 if i in self.positive else -1
        self.z = _center_of_even_part(self)
        self.z_coords = self.coordinates(self.z)
        self._split_solver = CoordinateSolver(
            [self._diag_vector(self.basis[h]) for h in self.ss_cartan]
            + [self._diag_vector(self.z)],
            size,
        )

    @property
    def name(self) -> str:
        return f"sl({self.m},{self.n})" if self.kind == "sl" else f"C({self.m})"

    def descriptor(self) -> Dict[str, object]:
        if self.kind == "sl":
            return {"type": "sl", "m": self.m, "n": self.n}
        return {"type": "C", "m": self.m}

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def generators(self) -> Tuple[int, ...]:
        return self.raising + self.lowering + self.cartan

    def _root_label(self, root: Weight) -> str:
        if self.kind == "sl":
            a = next(k for k, x in enumerate(root) if x == 1)
            b = next(k for k, x in enumerate(root) if x == -1)
            return f"E{a + 1}{b + 1}"
        return f"x[{_root_name(root, self.coord_names)}]"

    def _diag_vector(self, h: SuperMatrix) -> Vector:
        return {i: x for i, x in enumerate(h.diagonal_entries()) if x}

    def _is_positive(self, root: Weight) -> bool:
        coords = self._simple_solver.coordinates({a: x for a, x in enumerate(root) if x})
        return all(c > 0 for c in coords.values())

    def simple_coordinates(self, root: Weight) -> Vector:
        return self._simple_solver.coordinates({a: x for a, x in enumerate(root) if x})

    def height(self, root: Weight):
        return sum(self.simple_coordinates(root).values(), QQ.zero)

    def parity(self, i: int) -> int:
        return self.parities[i]

    def weight(self, i: int) -> Weight:
        return self.weights[i]

    def degree(self, i: int) -> int:
        return self.degrees[i]

    def label(self, i: int) -> str:
        return self.labels[i]

    def coordinates(self, x: SuperMatrix) -> Vector:
        return self._solver.coordinates(x.flat())

    def element(self, coords: Mapping[int, object]) -> SuperMatrix:
        flat: Vector = {}
        for i, c in coords.items():
            add_scaled(flat, self.basis[i].flat(), scalar(c))
        return SuperMatrix.from_flat(self.p, self.q, flat)

    def bracket(self, i: int, j: int) -> Vector:
        key = (i, j)
        if key not in self._brackets:
            self._brackets[key] = self.coordinates(superbracket(self.basis[i], self.basis[j]))
        return self._brackets[key]

    def bracket_coords(self, u: Mapping[int, object], v: Mapping[int, object]) -> Vector:
        out: Vector = {}
        for i, a in u.items():
            for j, b in v.items():
                add_scaled(out, self.bracket(i, j), a * b)
        return out

    def form(self, i: int, j: int):
        return invariant_form(self.basis[i], self.basis[j])

    def pair(self, weight: Sequence[object], i: int):
        """Value of a weight on the Cartan basis element ``i``."""
        row = self._cartan_matrix[self.cartan.index(i)]
        return sum((w * h for w, h in zip(weight, row) if w and h), QQ.zero)

    def cartan_values(self, weight: Sequence[object]) -> List[object]:
        return [self.pair(weight, h) for h in self.cartan]

    def canonical(self, weight: Sequence[object]) -> Weight:
        """Representative fixed by the pairing with the supertrace direction (sl only)."""
        w = [scalar(x) for x in weight]
        if self.kind != "sl":
            return tuple(w)
        shift = sum(w, QQ.zero) / QQ(self.m - self.n)
        u = [QQ.one] * self.m + [-QQ.one] * self.n
        return tuple(x - shift * y for x, y in zip(w, u))

    def weight_from_values(self, values: Sequence[object]) -> Weight:
        """Weight with the given values on ``self.cartan``."""
        vals = [scalar(v) for v in values]
        if self.kind == "sl":
            vals.append(QQ.zero)
        out = []
        for a in range(len(self.coord_index)):
            row = self._weight_inverse.get(a, {})
            out.append(sum((x * vals[k] for k, x in row.items()), QQ.zero))
        return tuple(out)

    def weight_from_ss_values(self, ss_values: Sequence[object], z_value=0) -> Weight:
        """Weight with given values on the semisimple Cartan and ``z_value`` on ``z``."""
        ss_values = [scalar(v) for v in ss_values]
        z_value = scalar(z_value)
        values = []
        for h in self.cartan:
            coords, c = self.even_split(h)
            v = c * z_value
            for k, x in coords.items():
                v += x * ss_values[self.ss_cartan.index(k)]
            values.append(v)
        return self.weight_from_values(values)

    def restrict_ss(self, weight: Sequence[object]) -> Weight:
        """Same values on the semisimple Cartan, value 0 on ``z``."""
        return self.weight_from_ss_values([self.pair(weight, h) for h in self.ss_cartan], 0)

    def z_value(self, weight: Sequence[object]):
        return sum((c * self.pair(weight, h) for h, c in self.z_coords.items()), QQ.zero)

    def even_split(self, i: int) -> Tuple[Vector, object]:
        """Write an even basis element as (semisimple part, coefficient of ``z``)."""
        if self.parities[i]:
            raise MixedParityError(f"{self.labels[i]} is odd")
        if i not in self.cartan:
            return {i: QQ.one}, QQ.zero
        coords = self._split_solver.coordinates(self._diag_vector(self.basis[i]))
        z_pos = len(self.ss_cartan)
        ss = {self.ss_cartan[k]: x for k, x in coords.items() if k != z_pos}
        return ss, coords.get(z_pos, QQ.zero)

    def coroot(self, root: Weight) -> Vector:
        """Cartan coordinates of ``h`` in ``[e_root, e_-root]`` scaled so that ``root(h) = 2``."""
        e = self.roots[root]
        f = self.roots[tuple(-x for x in root)]
        h = self.bracket(e, f)
        value = sum((c * self.pair(root, k) for k, c in h.items()), QQ.zero)
        if not value:
            raise OutOfScopeError(f"root {root} is isotropic")
        return {k: c * QQ(2) / value for k, c in h.items()}

    def even_positive_roots(self) -> List[Weight]:
        return sorted(
            r for r, i in self.roots.items() if i in self.positive and not self.parities[i]
        )

    ss_positive_roots = even_positive_roots

    def ss_simple_roots(self) -> List[Weight]:
        return [a for a, i in zip(self.simple_roots, self.raising) if not self.parities[i]]

    def even_part(self) -> "SubalgebraView":
        if "even" in self._views:
            return self._views["even"]
        even = [i for i in self.indices if not self.parities[i]]
        ss_simple = self.ss_simple_roots()
        view = SubalgebraView(
            self,
            f"{self.name}_0",
            even,
            self.cartan,
            tuple(self.roots[a] for a in ss_simple),
            tuple(self.roots[tuple(-x for x in a)] for a in ss_simple),
        )
        return self._views.setdefault("even", view)

    def ss_part(self) -> "SubalgebraView":
        if "ss" in self._views:
            return self._views["ss"]
        ss = [i for i in self.indices if not self.parities[i] and i not in self.cartan]
        ss = list(self.ss_cartan) + ss
        ss_simple = self.ss_simple_roots()
        view = SubalgebraView(
            self,
            f"{self.name}_ss",
            ss,
            self.ss_cartan,
            tuple(self.roots[a] for a in ss_simple),
            tuple(self.roots[tuple(-x for x in a)] for a in ss_simple),
        )
        return self._views.setdefault("ss", view)

    def degree_part(self, d: int) -> "SubalgebraView":
        if d != 0:
            raise OutOfScopeError("only the degree-zero part is a subalgebra view")
        return self.even_part()

    def __repr__(self) -> str:
        return f"SuperAlgebra({self.name}, dim={self.dim})"


class SubalgebraView:
    """A subalgebra spanned by some basis elements of a parent, keeping the parent's indices."""

    def __init__(self, parent, name, indices, cartan, raising, lowering):
        self.parent = parent
        self.name = name
        self.indices = tuple(indices)
        self.cartan = tuple(cartan)
        self.raising = tuple(raising)
        self.lowering = tuple(lowering)

    @property
    def dim(self) -> int:
        return len(self.indices)

    @property
    def generators(self) -> Tuple[int, ...]:
        return self.raising + self.lowering + self.cartan

    def parity(self, i: int) -> int:
        return self.parent.parity(i)

    def weight(self, i: int) -> Weight:
        return self.parent.weight(i)

    def degree(self, i: int) -> int:
        return self.parent.degree(i)

    def label(self, i: int) -> str:
        return self.parent.label(i)

    def bracket(self, i: int, j: int) -> Vector:
        return self.parent.bracket(i, j)

    def pair(self, weight, i: int):
        return self.parent.pair(weight, i)

    def even_split(self, i: int):
        return self.parent.even_split(i)

    def __repr__(self) -> str:
        return f"SubalgebraView({self.name}, dim={self.dim})"


def _center_of_even_part(A: SuperAlgebra) -> SuperMatrix:
    even = [i for i in A.indices if not A.parities[i]]
    # columns: even basis elements; rows: coordinates of [x, e] for every even e
    rows: Dict[int, Dict[int, object]] = {}
    for col, i in enumerate(even):
        for r, e in enumerate(even):
            for k, c in A.bracket(i, e).items():
                rows.setdefault(r * A.dim + k, {})[col] = c
    size = len(even) * A.dim
    M = from_rows([rows.get(k, {}) for k in range(size)], len(even))
    K = kernel(M)
    if K.dim != 1:
        raise OutOfScopeError(f"even part of {A.name} has a {K.dim}-dimensional center")
    z = A.element({even[k]: c for k, c in K.basis[0].items()})
    if A.kind == "sl":
        factor = QQ(A.n) / z.entries[(0, 0)]
    else:
        plus = next(i for i in A.indices if A.degrees[i] == 1)
        image = A.coordinates(superbracket(z, A.basis[plus]))
        factor = QQ.one / image[plus]
    return z.scaled(factor)


@lru_cache(maxsize=None)
def build_sl(m: int, n: int) -> SuperAlgebra:
    """sl(m,n) on the basis ``h_1..h_{m+n-1}`` followed by the matrix units ``E_ab``."""
    if m < 1 or n < 1:
        raise OutOfScopeError("sl(m,n) needs m >= 1 and n >= 1")
    if m == n:
        raise OutOfScopeError(f"A(n,n) out of scope: sl({m},{n}) is not simple")
    size = m + n

    def sign(i: int) -> int:
        return 1 if i < m else -1

    cartan, labels = [], []
    for i in range(size - 1):
        # h_i = E_ii - (-1)^{[i]+[i+1]} E_{i+1,i+1}
        cartan.append(SuperMatrix(m, n, {(i, i): 1, (i + 1, i + 1): -sign(i) * sign(i + 1)}))
        labels.append(f"h{i + 1}")
    roots = {}
    for a, b in product(range(size), repeat=2):
        if a != b:
            r = [QQ.zero] * size
            r[a], r[b] = QQ.one, -QQ.one
            roots[tuple(r)] = SuperMatrix.unit(m, n, a, b)
    simple = []
    for a in range(size - 1):
        r = [0] * size
        r[a], r[a + 1] = 1, -1
        simple.append(tuple(r))
    names = [f"ε{i + 1}" for i in range(m)] + [f"δ{j + 1}" for j in range(n)]
    gram = [[(sign(a) if a == b else 0) for b in range(size)] for a in range(size)]
    algebra = SuperAlgebra(
        "sl",
        m,
        n,
        m,
        n,
        cartan,
        labels,
        roots,
        range(size),
        names,
        gram,
        simple,
        [i for i in range(size - 1) if i != m - 1],
    )
    logger.debug("built %s of dimension %d", algebra.name, algebra.dim)
    return algebra


def osp_form(m: int) -> SuperMatrix:
    """``B = diag(G, J)``, ``G = [[0,1],[1,0]]``, ``J = [[0,I],[-I,0]]`` on the (2|2m-2) blocks."""
    k = m - 1
    entries = {(0, 1): 1, (1, 0): 1}
    for i in range(k):
        entries[(2 + i, 2 + k + i)] = 1
        entries[(2 + k + i, 2 + i)] = -1
    return SuperMatrix(2, 2 * k, entries)


def osp_constraint(X: SuperMatrix, B: SuperMatrix) -> SuperMatrix:
    return X.supertranspose() @ B + B @ X


@lru_cache(maxsize=None)
def build_c(m: int) -> SuperAlgebra:
    """C(m) = osp(2|2m-2): the kernel of ``X^st B + B X = 0`` inside gl(2|2m-2)."""
    if m < 3:
        raise OutOfScopeError(f"C(m) needs m >= 3, got {m}")
    k = m - 1
    p, q = 2, 2 * k
    size = p + q
    B = osp_form(m)

    # weight of each diagonal index in (ε, δ_1..δ_k) coordinates
    def w(a: int) -> List[object]:
        out = [QQ.zero] * m
        if a == 0:
            out[0] = QQ.one
        elif a == 1:
            out[0] = -QQ.one
        elif a < 2 + k:
            out[a - 1] = QQ.one
        else:
            out[a - 1 - k] = -QQ.one
        return out

    groups: Dict[Weight, List[Tuple[int, int]]] = {}
    for a, b in product(range(size), repeat=2):
        if a != b:
            r = tuple(x - y for x, y in zip(w(a), w(b)))
            groups.setdefault(r, []).append((a, b))
    roots = {}
    for r, positions in groups.items():
        cols = [osp_constraint(SuperMatrix.unit(p, q, a, b), B).flat() for a, b in positions]
        rows: Dict[int, Dict[int, object]] = {}
        for c, col in enumerate(cols):
            for idx, x in col.items():
                rows.setdefault(idx, {})[c] = x
        M = from_rows(list(rows.values()), len(positions))
        K = kernel(M)
        if K.dim == 0:
            continue
        if K.dim != 1:
            raise OutOfScopeError(f"root space {r} of C({m}) has dimension {K.dim}")
        roots[r] = SuperMatrix(p, q, {positions[c]: x for c, x in K.basis[0].items()})

    cartan = [SuperMatrix(p, q, {(0, 0): 1, (1, 1): -1})]
    labels = ["z"]
    for i in range(k):
        cartan.append(SuperMatrix(p, q, {(2 + i, 2 + i): 1, (2 + k + i, 2 + k + i): -1}))
        labels.append(f"h{i + 1}")
    simple = [tuple([1, -1] + [0] * (k - 1))]
    for i in range(k - 1):
        r = [0] * m
        r[1 + i], r[2 + i] = 1, -1
        simple.append(tuple(r))
    simple.append(tuple([0] * k + [2]))
    names = ["ε"] + [f"δ{i + 1}" for i in range(k)]
    gram = [[(0 if a != b else (1 if a == 0 else -1)) for b in range(m)] for a in range(m)]
    algebra = SuperAlgebra(
        "C",
        m,
        None,
        p,
        q,
        cartan,
        labels,
        roots,
        [0] + [2 + i for i in range(k)],
        names,
        gram,
        simple,
        range(1, m),
    )
    logger.debug("built %s of dimension %d", algebra.name, algebra.dim)
    return algebra


def build(descriptor: Mapping[str, object]) -> SuperAlgebra:
    """Build from ``{"type": "sl", "m": 2, "n": 1}`` or ``{"type": "C", "m": 3}``."""
    kind = descriptor.get("type")
    try:
        if kind == "sl":
            return build_sl(int(descriptor["m"]), int(descriptor["n"]))
        if kind == "C":
            return build_c(int(descriptor["m"]))
    except (KeyError, TypeError) as exc:
        raise OutOfScopeError(f"incomplete algebra descriptor {dict(descriptor)}") from exc
    raise OutOfScopeError(f"unsupported algebra type {kind!r}")


def root_datum(A: SuperAlgebra) -> RootDatum:
    spaces = {r: [A.basis[i]] for r, i in A.roots.items()}
    even = tuple(
        r for r in sorted(A.roots) if A.roots[r] in A.positive and not A.parities[A.roots[r]]
    )
    odd = tuple(r for r in sorted(A.roots) if A.roots[r] in A.positive and A.parities[A.roots[r]])
    return RootDatum(A.simple_roots, even, odd, A.gram, spaces)


def z_center(A: SuperAlgebra) -> SuperMatrix:
    return A.z


def triangular(A: SuperAlgebra) -> Tuple[Subspace, Subspace, Subspace, ZGrading]:
    """``(n-, h, n+, Z-grading)`` as coordinate subspaces of the algebra basis."""
    n_minus = Subspace.coordinate(A.dim, [i for i in A.roots.values() if i not in A.positive])
    h = Subspace.coordinate(A.dim, A.cartan)
    n_plus = Subspace.coordinate(A.dim, sorted(A.positive))
    by_degree = {d: tuple(i for i in A.indices if A.degrees[i] == d) for d in (-1, 0, 1)}
    grading = ZGrading(
        Subspace.coordinate(A.dim, by_degree[-1]),
        Subspace.coordinate(A.dim, by_degree[0]),
        Subspace.coordinate(A.dim, by_degree[1]),
        by_degree[-1],
        by_degree[0],
        by_degree[1],
    )
    return n_minus, h, n_plus, grading
