"""Exact rational scalars and the sparse linear-algebra kernel.

Scalars are elements of sympy's ``QQ`` domain and matrices are sympy ``SDM``
dict-of-dicts matrices over ``QQ``. Vectors are plain ``{index: scalar}`` dicts
with no stored zeros; a set of vectors is handled as the rows of a matrix.
"""

import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.matrices.sdm import SDM

from errors import DimensionMismatchError

logger = logging.getLogger(__name__)

Vector = Dict[int, object]
ScalarLike = Union[int, str, Fraction, object]


def scalar(value: ScalarLike):
    """Parse ``value`` (int, ``"3/2"``, Fraction or a QQ element) into ``QQ``."""
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, str):
        value = Fraction(value.strip())
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if QQ.of_type(value):
        return value
    return QQ.convert(value)


def fmt(value) -> str:
    """Render a scalar as ``"n"`` or ``"n/d"``."""
    q = scalar(value)
    num, den = int(q.numerator), int(q.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def vector(values: Union[Mapping[int, object], Sequence[object]]) -> Vector:
    """Normalize a dense list or a sparse mapping into a sparse vector."""
    items = values.items() if isinstance(values, Mapping) else enumerate(values)
    out = {}
    for i, v in items:
        q = scalar(v)
        if q:
            out[i] = q
    return out


def add_scaled(target: Vector, source: Mapping[int, object], factor=None) -> Vector:
    """In-place ``target += factor * source``; returns ``target``."""
    for j, v in source.items():
        delta = v if factor is None else factor * v
        new = target.get(j, QQ.zero) + delta
        if new:
            target[j] = new
        else:
            target.pop(j, None)
    return target


def scale(v: Mapping[int, object], factor) -> Vector:
    if not factor:
        return {}
    return {j: factor * c for j, c in v.items()}


def matrix(entries: Mapping, shape: Tuple[int, int]) -> SDM:
    """Build a sparse matrix from ``{(i, j): x}`` or ``{i: {j: x}}``."""
    dod: Dict[int, Dict[int, object]] = {}
    for key, value in entries.items():
        if isinstance(key, tuple):
            i, j = key
            q = scalar(value)
            if q:
                dod.setdefault(i, {})[j] = q
        else:
            row = {j: scalar(x) for j, x in value.items()}
            row = {j: x for j, x in row.items() if x}
            if row:
                dod[key] = row
    return SDM(dod, shape, QQ)


def zeros(rows: int, cols: int) -> SDM:
    return SDM.zeros((rows, cols), QQ)


def identity(n: int) -> SDM:
    return SDM.eye((n, n), QQ)


def from_rows(rows: Sequence[Mapping[int, object]], ncols: int) -> SDM:
    return SDM({i: dict(r) for i, r in enumerate(rows) if r}, (len(rows), ncols), QQ)


def rows_of(M: SDM) -> List[Vector]:
    return [dict(M.get(i, {})) for i in range(M.shape[0])]


def act(M: SDM, v: Mapping[int, object]) -> Vector:
    """Matrix-vector product ``M @ v`` on sparse vectors."""
    out = {}
    keys = v.keys()
    for i, row in M.items():
        s = QQ.zero
        for j in row.keys() & keys:
            s += row[j] * v[j]
        if s:
            out[i] = s
    return out


def combine(terms: Iterable[Tuple[object, SDM]], shape: Tuple[int, int]) -> SDM:
    """Return ``sum(c * M)`` over ``(c, M)`` pairs."""
    out = SDM.zeros(shape, QQ)
    for c, M in terms:
        if c:
            out = out + M.mul(c)
    return out


def equal(A: SDM, B: SDM) -> bool:
    return A.shape == B.shape and (A - B).is_zero_matrix()


def rref(M: SDM) -> Tuple[SDM, int]:
    """Reduced row-echelon form and rank."""
    R, pivots = M.rref()
    return R, len(pivots)


def rank(M: SDM) -> int:
    return rref(M)[1]


def is_nilpotent(M: SDM) -> bool:
    n = M.shape[0]
    P, k = M, 1
    while k < n and not P.is_zero_matrix():
        P = P.matmul(P)
        k *= 2
    return P.is_zero_matrix()


class Subspace:
    """A subspace of ``QQ^n`` held as the canonical RREF of a spanning set.

    Rows are kept keyed by pivot column, each normalized to a leading 1 with
    zeros in every other pivot column.
    """

    __slots__ = ("ambient", "_rows")

    def __init__(self, ambient: int, rows: Optional[Mapping[int, Vector]] = None):
        self.ambient = ambient
        self._rows: Dict[int, Vector] = dict(rows or {})

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, {i: {i: QQ.one} for i in range(n)})

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        return cls(n, {i: {i: QQ.one} for i in indices})

    @classmethod
    def span(cls, n: int, vectors: Iterable[Mapping[int, object]]) -> "Subspace":
        S = cls(n)
        for v in vectors:
            S._insert(vector(v))
        return S

    @classmethod
    def from_matrix(cls, M: SDM) -> "Subspace":
        R, pivots = M.rref()
        return cls(M.shape[1], {p: dict(R[i]) for i, p in enumerate(pivots)})

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> List[int]:
        return sorted(self._rows)

    @property
    def basis(self) -> List[Vector]:
        return [dict(self._rows[p]) for p in sorted(self._rows)]

    def matrix(self) -> SDM:
        return from_rows(self.basis, self.ambient)

    def copy(self) -> "Subspace":
        return Subspace(self.ambient, {p: dict(r) for p, r in self._rows.items()})

    def _check(self, v: Mapping[int, object]) -> None:
        if any(not 0 <= j < self.ambient for j in v):
            raise DimensionMismatchError(
                f"vector index out of range for ambient dimension {self.ambient}"
            )

    def reduce(self, v: Mapping[int, object]) -> Vector:
        """Residual of ``v`` after clearing every pivot column."""
        self._check(v)
        r = dict(v)
        for p in [p for p in r if p in self._rows]:
            c = r.get(p)
            if c:
                add_scaled(r, self._rows[p], -c)
        return r

    def coordinates(self, v: Mapping[int, object]) -> Optional[List[object]]:
        """Coefficients of ``v`` on :attr:`basis`, or ``None`` if outside the span."""
        if self.reduce(v):
            return None
        return [v.get(p, QQ.zero) for p in sorted(self._rows)]

    def _insert(self, v: Mapping[int, object]) -> Optional[Vector]:
        r = self.reduce(v)
        if not r:
            return None
        p = min(r)
        r = scale(r, QQ.one / r[p])
        for row in self._rows.values():
            c = row.get(p)
            if c:
                add_scaled(row, r, -c)
        self._rows[p] = r
        return r

    def extended(self, vectors: Iterable[Mapping[int, object]]) -> "Subspace":
        S = self.copy()
        for v in vectors:
            S._insert(vector(v))
        return S

    def annihilator(self) -> SDM:
        """Rows ``c`` with ``c . v = 0`` for every ``v`` in the subspace."""
        if not self._rows:
            return identity(self.ambient)
        N, _ = self.matrix().nullspace()
        return N

    def __contains__(self, v) -> bool:
        return contains(self, v)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient == other.ambient
            and self._rows == other._rows
        )

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


def kernel(M: SDM) -> Subspace:
    """Null space ``{v : M v = 0}``."""
    ncols = M.shape[1]
    if M.is_zero_matrix():
        return Subspace.full(ncols)
    N, _ = M.nullspace()
    return Subspace.span(ncols, rows_of(N))


def contains(S: Subspace, v) -> bool:
    v = vector(v)
    if v and max(v) >= S.ambient:
        raise DimensionMismatchError(
            f"vector of length {max(v) + 1} against ambient dimension {S.ambient}"
        )
    return not S.reduce(v)


def intersect(S: Subspace, T: Subspace) -> Subspace:
    if S.ambient != T.ambient:
        raise DimensionMismatchError("subspaces live in different ambient spaces")
    return kernel(S.annihilator().vstack(T.annihilator()))


def solve_in(S: Subspace, v) -> List[object]:
    """Coordinates of ``v`` on the RREF basis of ``S``; raises if ``v`` is outside."""
    coords = S.coordinates(vector(v))
    if coords is None:
        raise DimensionMismatchError("vector is not in the subspace")
    return coords


class CoordinateSolver:
    """Coordinates on a fixed (not echelon) basis via pivot columns and one inverse."""

    def __init__(self, basis: Sequence[Mapping[int, object]], ambient: int):
        self.size = len(basis)
        self.ambient = ambient
        B = from_rows(basis, ambient)
        _, pivots = B.rref()
        if len(pivots) != self.size:
            raise DimensionMismatchError("basis vectors are linearly dependent")
        self._pivots = list(pivots)
        self._basis = [dict(b) for b in basis]
        if self.size:
            self._inverse = B.extract(list(range(self.size)), self._pivots).inv()
        else:
            self._inverse = None

    def coordinates(self, v: Mapping[int, object], check: bool = True) -> Vector:
        if not self.size:
            if check and v:
                raise DimensionMismatchError("vector is not in the span of the basis")
            return {}
        row = {k: v[p] for k, p in enumerate(self._pivots) if v.get(p)}
        if not row:
            coords: Vector = {}
        else:
            x = SDM({0: row}, (1, self.size), QQ).matmul(self._inverse)
            coords = dict(x.get(0, {}))
        if check:
            residual = dict(v)
            for k, c in coords.items():
                add_scaled(residual, self._basis[k], -c)
            if residual:
                raise DimensionMismatchError("vector is not in the span of the basis")
        return coords


def _blocks(n: int, grading: Optional[Sequence[object]]) -> Dict[object, List[int]]:
    if grading is None:
        return {None: list(range(n))}
    if len(grading) != n:
        raise DimensionMismatchError("grading length differs from ambient dimension")
    blocks: Dict[object, List[int]] = {}
    for i, key in enumerate(grading):
        blocks.setdefault(key, []).append(i)
    return blocks


def _check_square(generators: Sequence[SDM], n: int) -> None:
    for g in generators:
        if g.shape != (n, n):
            raise DimensionMismatchError(f"generator of shape {g.shape} on a {n}-dim space")


def largest_invariant_subspace(
    ambient: Subspace,
    generators: Sequence[SDM],
    grading: Optional[Sequence[object]] = None,
) -> Subspace:
    """Largest ``W`` inside ``ambient`` with ``g W`` contained in ``W`` for every generator.

    ``W`` is tracked through its annihilator: a constraint row ``c`` on ``W``
    adds ``c g`` for each generator until the rank stops growing. When a
    ``grading`` (one key per coordinate) is given, ``ambient`` must be a sum of
    its graded pieces and every generator must map each block into one block;
    the iteration then runs block by block.
    """
    n = ambient.ambient
    _check_square(generators, n)
    blocks = _blocks(n, grading)
    position = {}
    for key, coords in blocks.items():
        for local, i in enumerate(coords):
            position[i] = (key, local)

    # pieces[key] lists (target block, submatrix) with rows in target, cols in key
    pieces: Dict[object, List[Tuple[object, SDM]]] = {key: [] for key in blocks}
    for g in generators:
        split: Dict[Tuple[object, object], Dict[int, Dict[int, object]]] = {}
        for i, row in g.items():
            tkey, tloc = position[i]
            for j, x in row.items():
                skey, sloc = position[j]
                split.setdefault((tkey, skey), {}).setdefault(tloc, {})[sloc] = x
        for (tkey, skey), dod in split.items():
            shape = (len(blocks[tkey]), len(blocks[skey]))
            pieces[skey].append((tkey, SDM(dod, shape, QQ)))

    constraints: Dict[object, SDM] = {}
    ranks: Dict[object, int] = {}
    local_rows: Dict[object, List[Vector]] = {key: [] for key in blocks}
    for v in ambient.basis:
        key = position[min(v)][0]
        local_rows[key].append({position[j][1]: x for j, x in v.items()})
    for key, coords in blocks.items():
        size = len(coords)
        if local_rows[key]:
            N, _ = from_rows(local_rows[key], size).nullspace()
        else:
            N = identity(size)
        R, r = rref(N)
        constraints[key], ranks[key] = R, r

    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        for skey in blocks:
            size = len(blocks[skey])
            if ranks[skey] == size:
                continue
            stack = [constraints[skey]]
            for tkey, piece in pieces[skey]:
                if ranks[tkey]:
                    stack.append(constraints[tkey].matmul(piece))
            if len(stack) == 1:
                continue
            R, r = rref(stack[0].vstack(*stack[1:]))
            if r > ranks[skey]:
                changed = True
                constraints[skey], ranks[skey] = R, r
    logger.debug("invariant subspace fixpoint stabilized after %d rounds", rounds)

    out = Subspace(n)
    for key, coords in blocks.items():
        if ranks[key] == len(coords):
            continue
        K = kernel(constraints[key])
        for v in K.basis:
            out._insert({coords[j]: x for j, x in v.items()})
    return out


def span_closure(
    vectors: Iterable[Mapping[int, object]],
    generators: Sequence[SDM],
    ambient: int,
    grading: Optional[Sequence[object]] = None,
    target: Optional[Mapping[int, object]] = None,
) -> Subspace:
    """Smallest subspace containing ``vectors`` and stable under every generator.

    With a ``grading`` the generators must include enough operators to separate
    the graded components (a Cartan subalgebra does); each image is split into
    its graded parts. If ``target`` is given the search stops once it is reached.
    """
    _check_square(generators, ambient)
    transposed = [g.transpose() for g in generators]
    key_of = (lambda j: None) if grading is None else (lambda j: grading[j])
    spaces: Dict[object, Subspace] = {}
    queue: List[Vector] = []

    def push(v: Mapping[int, object]) -> None:
        parts: Dict[object, Vector] = {}
        for j, x in v.items():
            parts.setdefault(key_of(j), {})[j] = x
        for key, part in parts.items():
            space = spaces.setdefault(key, Subspace(ambient))
            added = space._insert(part)
            if added is not None:
                queue.append(dict(added))

    target_vec = vector(target) if target is not None else None
    for v in vectors:
        push(vector(v))
    while queue:
        if target_vec is not None and _reached(spaces, target_vec, key_of):
            break
        v = queue.pop()
        for gT in transposed:
            image: Vector = {}
            for j, x in v.items():
                col = gT.get(j)
                if col:
                    add_scaled(image, col, x)
            if image:
                push(image)

    out = Subspace(ambient)
    for space in spaces.values():
        out._rows.update(space._rows)
    return out


def _reached(spaces, v: Vector, key_of) -> bool:
    parts: Dict[object, Vector] = {}
    for j, x in v.items():
        parts.setdefault(key_of(j), {})[j] = x
    return all(key in spaces and not spaces[key].reduce(p) for key, p in parts.items())


def quotient_basis(N: Subspace) -> List[int]:
    """Coordinates whose unit vectors form a basis of a complement of ``N``."""
    pivots = set(N.pivots)
    return [j for j in range(N.ambient) if j not in pivots]


def reduce_mod(N: Subspace, v: Mapping[int, object], keep: Sequence[int]) -> Vector:
    """Coordinates of ``v + N`` on the unit vectors ``keep`` (see :func:`quotient_basis`)."""
    r = N.reduce(v)
    index = {j: k for k, j in enumerate(keep)}
    return {index[j]: x for j, x in r.items()}
