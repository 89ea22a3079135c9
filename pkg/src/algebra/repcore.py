"""Finite-dimensional weight modules: highest-weight, tensor, Kac-induced and quotients."""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices.sdm import SDM

from algebra import exactnum
from algebra.exactnum import Subspace, Vector, fmt, scalar
from errors import (
    DimensionMismatchError,
    NotCyclicError,
    NotDominantError,
    OutOfScopeError,
)

logger = logging.getLogger(__name__)

Weight = Tuple[object, ...]


def make_weight(values: Sequence[object]) -> Weight:
    return tuple(scalar(v) for v in values)


def add_weights(*weights: Sequence[object]) -> Weight:
    out = [QQ.zero] * len(weights[0])
    for w in weights:
        if len(w) != len(out):
            raise DimensionMismatchError("weights of different lengths")
        for a, x in enumerate(w):
            out[a] += x
    return tuple(out)


def weight_to_json(weight: Sequence[object]) -> List[str]:
    return [fmt(x) for x in weight]


@dataclass(frozen=True)
class WeightModule:
    """A module with a weight basis and one action matrix per basis element of the acting algebra.

    ``actions[i][row][col]`` is the coefficient of basis vector ``row`` in ``x_i . v_col``.
    """

    algebra: object
    weights: Tuple[Weight, ...]
    parities: Tuple[int, ...]
    actions: Dict[int, SDM]
    labels: Tuple[str, ...]
    top: int = 0
    name: str = field(default="", compare=False)

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def generator_actions(self) -> List[SDM]:
        return [self.actions[i] for i in self.algebra.generators]

    def act(self, i: int, v: Mapping[int, object]) -> Vector:
        return exactnum.act(self.actions[i], v)

    def action_of(self, coords: Mapping[int, object]) -> SDM:
        """Action of the algebra element with the given basis coordinates."""
        return exactnum.combine(
            ((c, self.actions[i]) for i, c in coords.items()), (self.dim, self.dim)
        )

    def __repr__(self) -> str:
        label = self.name or "WeightModule"
        return f"{label}(dim={self.dim}, algebra={self.algebra!r})"


@dataclass(frozen=True)
class DominantWeight:
    """A weight with its certificate: the values on the semisimple simple coroots."""

    weight: Weight
    pairings: Tuple[int, ...]

    @classmethod
    def certify(cls, algebra, weight: Sequence[object]) -> "DominantWeight":
        weight = make_weight(weight)
        if len(weight) != len(algebra.coord_index):
            raise DimensionMismatchError(
                f"weight of length {len(weight)} for {algebra.name} "
                f"(expected {len(algebra.coord_index)})"
            )
        pairings = []
        for alpha in algebra.ss_simple_roots():
            value = _on_coroot(algebra, weight, alpha)
            if value.denominator != 1 or value < 0:
                raise NotDominantError(
                    f"weight {weight_to_json(weight)} pairs to {fmt(value)} with the coroot of "
                    f"{weight_to_json(alpha)}"
                )
            pairings.append(int(value))
        return cls(algebra.canonical(weight), tuple(pairings))


def _on_coroot(algebra, weight: Sequence[object], root: Sequence[object]):
    h = algebra.coroot(tuple(root))
    return sum((c * algebra.pair(weight, k) for k, c in h.items()), QQ.zero)


def _algebra_of(gss):
    return getattr(gss, "parent", gss)


def weyl_dimension(algebra, weight: Sequence[object]) -> int:
    """Weyl dimension formula for the semisimple part, from coroot pairings only."""
    positive = algebra.ss_positive_roots()
    rho = [QQ.zero] * len(algebra.coord_index)
    for beta in positive:
        for a, x in enumerate(beta):
            rho[a] += x / 2
    out = QQ.one
    for beta in positive:
        r = _on_coroot(algebra, rho, beta)
        out *= (_on_coroot(algebra, weight, beta) + r) / r
    return int(out)


class _TruncatedVerma:
    """PBW monomials in the negative even root vectors, truncated above a fixed height."""

    def __init__(self, algebra, weight: Weight, depth: int):
        self.algebra = algebra
        self.top = weight
        self.depth = depth
        self.ys = sorted(
            i
            for r, i in algebra.roots.items()
            if not algebra.parities[i] and i not in algebra.positive
        )
        self.position = {i: k for k, i in enumerate(self.ys)}
        self.heights = [int(-algebra.height(algebra.weights[i])) for i in self.ys]
        self.monomials: List[Tuple[int, ...]] = []
        self._enumerate((), 0, 0)
        self.index = {m: k for k, m in enumerate(self.monomials)}
        self._act: Dict[Tuple[int, Tuple[int, ...]], Dict[Tuple[int, ...], object]] = {}
        self._mult: Dict[Tuple[int, Tuple[int, ...]], Dict[Tuple[int, ...], object]] = {}

    def _enumerate(self, mono: Tuple[int, ...], start: int, height: int) -> None:
        self.monomials.append(mono)
        for k in range(start, len(self.ys)):
            if height + self.heights[k] <= self.depth:
                self._enumerate(mono + (k,), k, height + self.heights[k])

    def height(self, mono: Tuple[int, ...]) -> int:
        return sum(self.heights[k] for k in mono)

    def weight(self, mono: Tuple[int, ...]) -> Weight:
        return add_weights(self.top, *(self.algebra.weights[self.ys[k]] for k in mono))

    def left_mult(self, k: int, mono: Tuple[int, ...]) -> Dict[Tuple[int, ...], object]:
        """``y_k * mono`` rewritten in sorted PBW order (with truncation)."""
        if self.height(mono) + self.heights[k] > self.depth:
            return {}
        key = (k, mono)
        if key in self._mult:
            return self._mult[key]
        if not mono or k <= mono[0]:
            out = {(k,) + mono: QQ.one}
        else:
            # y_k y_i R = y_i (y_k R) + [y_k, y_i] R
            i, rest = mono[0], mono[1:]
            out: Dict[Tuple[int, ...], object] = {}
            for m, c in self.left_mult(k, rest).items():
                _accumulate(out, self.left_mult(i, m), c)
            commutator = self.algebra.bracket(self.ys[k], self.ys[i])
            for b, c in commutator.items():
                _accumulate(out, self.act(b, rest), c)
        self._mult[key] = out
        return out

    def act(self, b: int, mono: Tuple[int, ...]) -> Dict[Tuple[int, ...], object]:
        """Action of the algebra basis element ``b`` on ``mono . v_top``."""
        key = (b, mono)
        if key in self._act:
            return self._act[key]
        A = self.algebra
        if b in self.position:
            out = dict(self.left_mult(self.position[b], mono))
        elif not mono:
            if b in A.cartan:
                value = A.pair(self.top, b)
                out = {(): value} if value else {}
            else:
                out = {}
        else:
            # x y_j R = y_j (x R) + [x, y_j] R
            j, rest = mono[0], mono[1:]
            out = {}
            for m, c in self.act(b, rest).items():
                _accumulate(out, self.left_mult(j, m), c)
            for b2, c in A.bracket(b, self.ys[j]).items():
                _accumulate(out, self.act(b2, rest), c)
        self._act[key] = out
        return out

    def matrix(self, b: int) -> SDM:
        n = len(self.monomials)
        rows: Dict[int, Dict[int, object]] = {}
        for col, mono in enumerate(self.monomials):
            for m, c in self.act(b, mono).items():
                rows.setdefault(self.index[m], {})[col] = c
        return SDM(rows, (n, n), QQ)


def _accumulate(target: Dict, source: Mapping, factor) -> None:
    for k, v in source.items():
        x = target.get(k, QQ.zero) + factor * v
        if x:
            target[k] = x
        else:
            target.pop(k, None)


def hw_module_ss(gss, weight) -> WeightModule:
    """Irreducible finite-dimensional module of the semisimple part with the given highest weight.

    ``gss`` is the algebra or its semisimple view; ``weight`` a weight sequence or a
    :class:`DominantWeight`. The value of ``weight`` on ``z`` is ignored.
    """
    algebra = _algebra_of(gss)
    if not isinstance(weight, DominantWeight):
        weight = DominantWeight.certify(algebra, weight)
    top = algebra.restrict_ss(weight.weight)
    view = algebra.ss_part()
    depth = sum(int(_on_coroot(algebra, top, b)) for b in algebra.ss_positive_roots()) + 1
    verma = _TruncatedVerma(algebra, top, depth)
    logger.debug(
        "truncated Verma for %s at %s: depth %d, %d monomials",
        view.name,
        weight_to_json(top),
        depth,
        len(verma.monomials),
    )
    actions = {i: verma.matrix(i) for i in view.indices}
    labels = []
    for mono in verma.monomials:
        word = "".join(algebra.label(verma.ys[k]) for k in mono)
        labels.append(f"{word}v" if word else "v")
    M = WeightModule(
        view,
        tuple(algebra.canonical(verma.weight(m)) for m in verma.monomials),
        tuple(0 for _ in verma.monomials),
        actions,
        tuple(labels),
        0,
    )
    return irreducible_quotient(M, 0)


def extend_by_center(M: WeightModule, z_value) -> WeightModule:
    """Extend a module of the semisimple part to the even part, with ``z`` acting by ``z_value``."""
    algebra = _algebra_of(M.algebra)
    even = algebra.even_part()
    z_value = scalar(z_value)
    identity = exactnum.identity(M.dim)
    actions = {}
    for i in even.indices:
        ss, c = algebra.even_split(i)
        terms = [(x, M.actions[k]) for k, x in ss.items()]
        terms.append((c * z_value, identity))
        actions[i] = exactnum.combine(terms, (M.dim, M.dim))
    weights = []
    for w in M.weights:
        values = []
        for h in algebra.cartan:
            ss, c = algebra.even_split(h)
            values.append(sum((x * algebra.pair(w, k) for k, x in ss.items()), c * z_value))
        weights.append(algebra.weight_from_values(values))
    return WeightModule(even, tuple(weights), M.parities, actions, M.labels, M.top)


def tensor_through(
    algebra,
    modules: Sequence[WeightModule],
    factor_action: Callable[[int, int], SDM],
) -> WeightModule:
    dims = [M.dim for M in modules]
    size = 1
    for d in dims:
        size *= d
    strides = [1] * len(dims)
    for k in range(len(dims) - 2, -1, -1):
        strides[k] = strides[k + 1] * dims[k + 1]

    def digits(flat: int) -> List[int]:
        return [(flat // strides[k]) % dims[k] for k in range(len(dims))]

    basis = [digits(f) for f in range(size)]
    # parity of all slots before slot k
    prefix = [
        [sum(modules[l].parities[b[l]] for l in range(k)) % 2 for k in range(len(dims))]
        for b in basis
    ]
    actions = {}
    for i in algebra.indices:
        parity = algebra.parity(i)
        columns = [factor_action(k, i).transpose() for k in range(len(modules))]
        rows: Dict[int, Dict[int, object]] = {}
        for flat, b in enumerate(basis):
            for k, col in enumerate(columns):
                entries = col.get(b[k])
                if not entries:
                    continue
                sign = -1 if parity and prefix[flat][k] else 1
                for target, x in entries.items():
                    t = flat + (target - b[k]) * strides[k]
                    row = rows.setdefault(t, {})
                    value = row.get(flat, QQ.zero) + sign * x
                    if value:
                        row[flat] = value
                    else:
                        row.pop(flat)
        actions[i] = SDM({r: v for r, v in rows.items() if v}, (size, size), QQ)
    weights = tuple(
        add_weights(*(modules[k].weights[b[k]] for k in range(len(dims)))) for b in basis
    )
    parities = tuple(sum(modules[k].parities[b[k]] for k in range(len(dims))) % 2 for b in basis)
    labels = tuple("⊗".join(modules[k].labels[b[k]] for k in range(len(dims))) for b in basis)
    top = sum(M.top * s for M, s in zip(modules, strides))
    return WeightModule(algebra, weights, parities, actions, labels, top)


def tensor(modules: Sequence[WeightModule]) -> WeightModule:
    """Tensor product with the Koszul sign on odd generators."""
    if not modules:
        raise DimensionMismatchError("tensor product of no modules")
    algebra = modules[0].algebra
    if any(M.algebra is not algebra for M in modules):
        raise DimensionMismatchError("tensor factors act through different algebras")
    return tensor_through(algebra, modules, lambda k, i: modules[k].actions[i])


def _wedge(sequence: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    """Sign and sorted form of ``y_{s1} ^ ... ^ y_{sk}``; sign 0 on repeats."""
    items = list(sequence)
    if len(set(items)) != len(items):
        return 0, ()
    sign = 1
    for a in range(len(items)):
        for b in range(a + 1, len(items)):
            if items[a] > items[b]:
                sign = -sign
    return sign, tuple(sorted(items))


class _KacAction:
    def __init__(self, algebra, V0: WeightModule):
        self.algebra = algebra
        self.V0 = V0
        self.minus = [i for i in algebra.indices if algebra.degree(i) == -1]
        self.position = {i: k for k, i in enumerate(self.minus)}
        self._even: Dict[Tuple[int, Tuple[int, ...], int], Dict] = {}
        self._columns = {x: A.transpose() for x, A in V0.actions.items()}

    def minus_coords(self, coords: Vector) -> Dict[int, object]:
        return {self.position[i]: c for i, c in coords.items()}

    def lower(self, j: int, subset: Tuple[int, ...], v: int) -> Dict:
        sign, wedge = _wedge((j,) + subset)
        return {(wedge, v): QQ(sign)} if sign else {}

    def even(self, x: int, subset: Tuple[int, ...], v: int) -> Dict:
        key = (x, subset, v)
        if key in self._even:
            return self._even[key]
        out: Dict = {}
        for pos, s in enumerate(subset):
            image = self.minus_coords(self.algebra.bracket(x, self.minus[s]))
            for t, c in image.items():
                sign, wedge = _wedge(subset[:pos] + (t,) + subset[pos + 1 :])
                if sign:
                    _accumulate(out, {(wedge, v): QQ.one}, sign * c)
        column = self._columns[x].get(v, {})
        for w, c in column.items():
            _accumulate(out, {(subset, w): QQ.one}, c)
        self._even[key] = out
        return out

    def act_element(self, coords: Vector, subset: Tuple[int, ...], v: int) -> Dict:
        out: Dict = {}
        for b, c in coords.items():
            _accumulate(out, self.act(b, subset, v), c)
        return out

    def raising(self, e: int, subset: Tuple[int, ...], v: int) -> Dict:
        out: Dict = {}
        for pos, s in enumerate(subset):
            g = self.algebra.bracket(e, self.minus[s])
            inner = self.act_element(g, subset[pos + 1 :], v)
            sign0 = -1 if pos % 2 else 1
            for (rest, w), c in inner.items():
                sign, wedge = _wedge(subset[:pos] + rest)
                if sign:
                    _accumulate(out, {(wedge, w): QQ.one}, sign0 * sign * c)
        return out

    def act(self, x: int, subset: Tuple[int, ...], v: int) -> Dict:
        degree = self.algebra.degree(x)
        if degree == -1:
            return self.lower(self.position[x], subset, v)
        if degree == 0:
            return self.even(x, subset, v)
        return self.raising(x, subset, v)


def _subsets(n: int) -> List[Tuple[int, ...]]:
    out = [()]
    for k in range(n):
        out += [s + (k,) for s in out]
    return sorted(out, key=lambda s: (len(s), s))


def kac_module(algebra, V0: WeightModule) -> WeightModule:
    """Module induced from the degree-zero module ``V0`` with the degree +1 part acting by zero.

    The underlying space is the exterior algebra on the degree -1 part tensored with ``V0``.
    """
    kac = _KacAction(algebra, V0)
    basis = [(s, v) for s in _subsets(len(kac.minus)) for v in range(V0.dim)]
    index = {b: k for k, b in enumerate(basis)}
    n = len(basis)
    actions = {}
    for x in algebra.indices:
        rows: Dict[int, Dict[int, object]] = {}
        for col, (s, v) in enumerate(basis):
            for target, c in kac.act(x, s, v).items():
                rows.setdefault(index[target], {})[col] = c
        actions[x] = SDM(rows, (n, n), QQ)
    weights = tuple(
        add_weights(V0.weights[v], *(algebra.weight(kac.minus[k]) for k in s)) for s, v in basis
    )
    parities = tuple((len(s) + V0.parities[v]) % 2 for s, v in basis)
    labels = tuple(
        "".join(algebra.label(kac.minus[k]) for k in s) + ("⊗" if s else "") + V0.labels[v]
        for s, v in basis
    )
    logger.debug("Kac module of dimension %d = 2^%d * %d", n, len(kac.minus), V0.dim)
    return WeightModule(algebra, weights, parities, actions, labels, index[((), V0.top)])


def quotient(M: WeightModule, N: Subspace) -> WeightModule:
    """``M / N`` on the unit vectors of the non-pivot coordinates of ``N``."""
    keep = exactnum.quotient_basis(N)
    n = len(keep)
    actions = {}
    for i, A in M.actions.items():
        columns = A.transpose()
        rows: Dict[int, Dict[int, object]] = {}
        for col, j in enumerate(keep):
            image = exactnum.reduce_mod(N, dict(columns.get(j, {})), keep)
            for r, x in image.items():
                rows.setdefault(r, {})[col] = x
        actions[i] = SDM(rows, (n, n), QQ)
    if M.top not in keep:
        raise NotCyclicError("the generating vector lies in the submodule", [])
    return WeightModule(
        M.algebra,
        tuple(M.weights[j] for j in keep),
        tuple(M.parities[j] for j in keep),
        actions,
        tuple(M.labels[j] for j in keep),
        keep.index(M.top),
        M.name,
    )


def cyclic_closure(M: WeightModule, v: int, target: Optional[Vector] = None) -> Subspace:
    return exactnum.span_closure(
        [{v: QQ.one}], M.generator_actions, M.dim, grading=M.weights, target=target
    )


def irreducible_quotient(M: WeightModule, top: Optional[int] = None) -> WeightModule:
    """The unique irreducible quotient of a module generated by the weight vector ``top``."""
    top = M.top if top is None else top
    closure = cyclic_closure(M, top)
    if closure.dim < M.dim:
        reached = Counter(M.weights[p] for p in closure.pivots)
        deficient = sorted(
            (w for w, k in weight_multiplicities(M).items() if reached[w] < k), key=_weight_key
        )
        raise NotCyclicError(
            f"vector {M.labels[top]} generates {closure.dim} of {M.dim} dimensions",
            [weight_to_json(w) for w in deficient],
        )
    top_weight = M.weights[top]
    multiplicity = sum(1 for w in M.weights if w == top_weight)
    if multiplicity != 1:
        raise OutOfScopeError(f"generating weight has multiplicity {multiplicity}")
    ambient = Subspace.coordinate(M.dim, [j for j, w in enumerate(M.weights) if w != top_weight])
    N = exactnum.largest_invariant_subspace(ambient, M.generator_actions, grading=M.weights)
    logger.debug("maximal submodule of dimension %d in a %d-dimensional module", N.dim, M.dim)
    generated = WeightModule(M.algebra, M.weights, M.parities, M.actions, M.labels, top, M.name)
    return quotient(generated, N) if N.dim else generated


def _weight_key(w: Weight):
    return tuple(w)


def weight_multiplicities(M: WeightModule) -> Dict[Weight, int]:
    return dict(Counter(M.weights))


def even_root_indices(algebra) -> List[int]:
    zero = None
    out = []
    for i in algebra.indices:
        w = algebra.weight(i)
        if zero is None:
            zero = tuple(QQ.zero for _ in w)
        if not algebra.parity(i) and w != zero:
            out.append(i)
    return out


def is_integrable(M: WeightModule) -> bool:
    """Every even root vector acts nilpotently."""
    return all(exactnum.is_nilpotent(M.actions[i]) for i in even_root_indices(M.algebra))


def highest_weight_vectors(M: WeightModule) -> Subspace:
    """Common kernel of the raising generators."""
    raising = [M.actions[i] for i in M.algebra.raising]
    if not raising:
        return Subspace.full(M.dim)
    return exactnum.kernel(raising[0].vstack(*raising[1:]) if len(raising) > 1 else raising[0])


def is_irreducible(M: WeightModule) -> bool:
    """A one-dimensional singular space whose vector generates the whole module."""
    if M.dim == 0:
        return False
    singular = highest_weight_vectors(M)
    if singular.dim != 1:
        return False
    closure = exactnum.span_closure(
        singular.basis, M.generator_actions, M.dim, grading=M.weights
    )
    return closure.dim == M.dim


def direct_sum(M: WeightModule, N: WeightModule) -> WeightModule:
    if M.algebra is not N.algebra:
        raise DimensionMismatchError("summands act through different algebras")
    n = M.dim + N.dim
    actions = {}
    for i in M.actions:
        rows = {r: dict(row) for r, row in M.actions[i].items()}
        for r, row in N.actions[i].items():
            rows[r + M.dim] = {c + M.dim: x for c, x in row.items()}
        actions[i] = SDM(rows, (n, n), QQ)
    return WeightModule(
        M.algebra,
        M.weights + N.weights,
        M.parities + N.parities,
        actions,
        M.labels + N.labels,
        M.top,
    )


def check_bracket_soundness(M: WeightModule, pairs=None) -> List[str]:
    """Violations of ``rho([x,y]) = rho(x)rho(y) -/+ rho(y)rho(x)`` and of the Cartan weights.

    ``pairs`` defaults to all pairs of generators.
    """
    algebra = M.algebra
    violations = []
    for h in algebra.cartan:
        A = M.actions[h]
        for j, w in enumerate(M.weights):
            expected = algebra.pair(w, h)
            column = {r: row[j] for r, row in A.items() if j in row}
            if column != ({j: expected} if expected else {}):
                violations.append(f"{algebra.label(h)} is not diagonal by weight on {M.labels[j]}")
                break
    if pairs is None:
        gens = list(algebra.generators)
        pairs = [(x, y) for a, x in enumerate(gens) for y in gens[a:]]
    for x, y in pairs:
        X, Y = M.actions[x], M.actions[y]
        XY, YX = X.matmul(Y), Y.matmul(X)
        supercommutator = XY + YX if algebra.parity(x) and algebra.parity(y) else XY - YX
        if not exactnum.equal(M.action_of(algebra.bracket(x, y)), supercommutator):
            violations.append(f"[{algebra.label(x)}, {algebra.label(y)}]")
    return violations
