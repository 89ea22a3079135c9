"""Co-finite ideals of the Laurent ring, quotients g (x) L/I, evaluation and loop modules."""

import logging
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from sympy import Poly, Symbol
from sympy.polys.domains import QQ
from sympy.polys.matrices.sdm import SDM

from algebra import exactnum, repcore
from algebra.exactnum import Subspace, Vector, add_scaled, fmt, scalar
from algebra.superalg import SubalgebraView
from errors import (
    CyclotomicExtensionError,
    DimensionMismatchError,
    OutOfScopeError,
    WindowTooSmallError,
)

logger = logging.getLogger(__name__)

t = Symbol("t")


class LaurentPoly:
    """A finitely supported map ``degree -> coefficient``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[Mapping[int, object]] = None):
        self.coeffs: Dict[int, object] = {
            int(m): q for m, q in ((m, scalar(c)) for m, c in (coeffs or {}).items()) if q
        }

    @classmethod
    def monomial(cls, m: int, c=1) -> "LaurentPoly":
        return cls({m: c})

    @classmethod
    def from_poly(cls, p: Poly, shift: int = 0) -> "LaurentPoly":
        coeffs = p.all_coeffs()[::-1]
        return cls({k + shift: QQ.from_sympy(c) for k, c in enumerate(coeffs)})

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, QQ.zero) + c
        return LaurentPoly(out)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: Dict[int, object] = {}
        for m, c in self.coeffs.items():
            for n, d in other.coeffs.items():
                out[m + n] = out.get(m + n, QQ.zero) + c * d
        return LaurentPoly(out)

    def __call__(self, a):
        a = scalar(a)
        return sum((c * a**m for m, c in self.coeffs.items()), QQ.zero)

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self) -> str:
        terms = " + ".join(f"{fmt(c)}*t^{m}" for m, c in sorted(self.coeffs.items()))
        return f"LaurentPoly({terms or '0'})"


@dataclass(frozen=True)
class IdealSpec:
    """``I = (P)`` with ``P(t) = prod (t - a_j)^{b_j}``, stored by roots and multiplicities."""

    points: Tuple[object, ...]
    mults: Tuple[int, ...]

    def __post_init__(self):
        points = tuple(scalar(a) for a in self.points)
        mults = tuple(int(b) for b in self.mults)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "mults", mults)
        if not points:
            raise OutOfScopeError("an ideal needs at least one point")
        if len(points) != len(mults):
            raise DimensionMismatchError(f"{len(points)} points but {len(mults)} multiplicities")
        if any(not a for a in points):
            raise OutOfScopeError("ideals with a zero root are not handled")
        if len(set(points)) != len(points):
            raise OutOfScopeError("ideal points must be pairwise distinct")
        if any(b < 1 for b in mults):
            raise OutOfScopeError("multiplicities must be positive")

    @classmethod
    def radical_at(cls, points: Sequence[object]) -> "IdealSpec":
        return cls(tuple(points), tuple(1 for _ in points))

    @property
    def theta(self) -> int:
        return sum(self.mults)

    @property
    def is_radical(self) -> bool:
        return all(b == 1 for b in self.mults)

    def radical(self) -> "IdealSpec":
        return IdealSpec.radical_at(self.points)

    @property
    def poly(self) -> Poly:
        p = Poly(1, t, domain=QQ)
        for a, b in zip(self.points, self.mults):
            p = p * Poly(t - QQ.to_sympy(a), t, domain=QQ) ** b
        return p

    @property
    def coefficients(self) -> Tuple[object, ...]:
        """``c_0, ..., c_theta`` with ``c_theta = 1``."""
        return tuple(QQ.from_sympy(c) for c in self.poly.all_coeffs()[::-1])

    def reduce(self, m: int) -> Vector:
        """Coordinates of ``t^m mod P`` on ``1, t, ..., t^{theta-1}``."""
        return _reduce(self, int(m))

    def reduce_poly(self, f: LaurentPoly) -> Vector:
        out: Vector = {}
        for m, c in f.coeffs.items():
            add_scaled(out, self.reduce(m), c)
        return out

    def to_json(self) -> Dict[str, List]:
        return {"points": [fmt(a) for a in self.points], "mults": list(self.mults)}

    def __repr__(self) -> str:
        factors = "".join(
            f"(t-{fmt(a)})" + (f"^{b}" if b > 1 else "") for a, b in zip(self.points, self.mults)
        )
        return f"IdealSpec({factors})"


@lru_cache(maxsize=4096)
def _reduce(ideal: IdealSpec, m: int) -> Vector:
    P = ideal.poly
    if 0 <= m < ideal.theta:
        return {m: QQ.one}
    base = Poly(t, t, domain=QQ)
    if m < 0:
        base = base.invert(P)
    r = Poly(1, t, domain=QQ)
    power, e = base.rem(P), abs(m)
    while e:
        if e & 1:
            r = (r * power).rem(P)
        power = (power * power).rem(P)
        e >>= 1
    return {k: QQ.from_sympy(c) for k, c in enumerate(r.all_coeffs()[::-1]) if c}


def reduce_laurent(ideal: IdealSpec, m: int) -> Vector:
    return ideal.reduce(m)


def derived_poly(ideal: IdealSpec) -> LaurentPoly:
    """``P'(t) = prod (t - a_j)`` over the distinct points."""
    return LaurentPoly.from_poly(ideal.radical().poly)


class QuotientAlgebra:
    """``g (x) L/I`` on the basis ``x (x) t^s``, ``0 <= s < theta``, index ``s * dim g + x``."""

    def __init__(self, base, ideal: IdealSpec):
        self.base = base
        self.ideal = ideal
        self.theta = ideal.theta
        self.d = base.dim
        self.indices: Tuple[int, ...] = tuple(range(self.theta * self.d))
        self.cartan: Tuple[int, ...] = tuple(base.cartan)
        self.raising = tuple(s * self.d + x for s in range(self.theta) for x in base.raising)
        self.lowering = tuple(s * self.d + x for s in range(self.theta) for x in base.lowering)
        self.loop_cartan = tuple(
            s * self.d + h for s in range(1, self.theta) for h in base.cartan
        )
        self._brackets: Dict[Tuple[int, int], Vector] = {}
        self._lock = threading.Lock()
        self._zero_part: Optional[SubalgebraView] = None

    @property
    def name(self) -> str:
        return f"{self.base.name}⊗L/{self.ideal!r}"

    @property
    def dim(self) -> int:
        return len(self.indices)

    @property
    def generators(self) -> Tuple[int, ...]:
        return self.raising + self.lowering + self.cartan + self.loop_cartan

    def split(self, i: int) -> Tuple[int, int]:
        """``(x, s)`` for the index of ``x (x) t^s``."""
        s, x = divmod(i, self.d)
        return x, s

    def index(self, x: int, s: int) -> int:
        return s * self.d + x

    def parity(self, i: int) -> int:
        return self.base.parity(i % self.d)

    def weight(self, i: int):
        return self.base.weight(i % self.d)

    def degree(self, i: int) -> int:
        return self.base.degree(i % self.d)

    def label(self, i: int) -> str:
        x, s = self.split(i)
        return f"{self.base.label(x)}⊗t^{s}" if s else self.base.label(x)

    def pair(self, weight, i: int):
        return self.base.pair(weight, i)

    def element(self, x: int, f: LaurentPoly) -> Vector:
        """Coordinates of ``x (x) f mod I``."""
        return {self.index(x, s): c for s, c in self.ideal.reduce_poly(f).items()}

    def bracket(self, i: int, j: int) -> Vector:
        key = (i, j)
        cached = self._brackets.get(key)
        if cached is not None:
            return cached
        x, s = self.split(i)
        y, u = self.split(j)
        out: Vector = {}
        reduction = self.ideal.reduce(s + u)
        for k, c in self.base.bracket(x, y).items():
            for q, e in reduction.items():
                out[q * self.d + k] = c * e
        with self._lock:
            self._brackets[key] = out
        return out

    def even_split(self, i: int):
        x, s = self.split(i)
        ss, c = self.base.even_split(x)
        return {self.index(k, s): v for k, v in ss.items()}, c

    def degree_part(self, d: int) -> SubalgebraView:
        if d != 0:
            raise OutOfScopeError("only the degree-zero part is a subalgebra view")
        if self._zero_part is not None:
            return self._zero_part
        even_raising = [e for e in self.raising if not self.parity(e)]
        even_lowering = [f for f in self.lowering if not self.parity(f)]
        self._zero_part = SubalgebraView(
            self,
            f"({self.name})_0",
            [i for i in self.indices if self.degree(i) == 0],
            self.cartan,
            even_raising,
            even_lowering,
        )
        return self._zero_part

    def crt_image(self, i: int) -> Dict[Tuple[int, int], object]:
        """Image of ``x (x) t^s`` in the direct sum of copies of ``g``: ``{(j, x): a_j^s}``."""
        if not self.ideal.is_radical:
            raise OutOfScopeError("the Chinese-remainder splitting needs a radical ideal")
        x, s = self.split(i)
        return {(j, x): a**s for j, a in enumerate(self.ideal.points)}

    def __repr__(self) -> str:
        return f"QuotientAlgebra({self.name}, dim={self.dim})"


@lru_cache(maxsize=None)
def quotient_algebra(base, ideal: IdealSpec) -> QuotientAlgebra:
    return QuotientAlgebra(base, ideal)


def full_module(algebra, weight) -> repcore.WeightModule:
    """Finite-dimensional irreducible module of the full superalgebra of highest weight ``weight``.

    Built as the irreducible quotient of the Kac module over the even part's module.
    """
    dominant = repcore.DominantWeight.certify(algebra, weight)
    ss = repcore.hw_module_ss(algebra, dominant)
    V0 = repcore.extend_by_center(ss, algebra.z_value(dominant.weight))
    return repcore.irreducible_quotient(repcore.kac_module(algebra, V0))


def evaluation_module(algebra, lambdas: Sequence, points: Sequence[object]) -> repcore.WeightModule:
    """``V(lambda_1) (x) ... (x) V(lambda_K)``, ``x (x) t^s`` acting as ``sum_j a_j^s rho_j(x)``."""
    if len(lambdas) != len(points):
        raise DimensionMismatchError(f"{len(lambdas)} weights but {len(points)} points")
    ideal = IdealSpec.radical_at(points)
    Q = quotient_algebra(algebra, ideal)
    factors = [full_module(algebra, lam) for lam in lambdas]
    powers = [[a**s for s in range(Q.theta)] for a in ideal.points]

    def factor_action(k: int, i: int) -> SDM:
        x, s = Q.split(i)
        return factors[k].actions[x].mul(powers[k][s])

    M = repcore.tensor_through(Q, factors, factor_action)
    logger.debug("evaluation module over %s of dimension %d", Q.name, M.dim)
    return repcore.WeightModule(
        Q, M.weights, M.parities, M.actions, M.labels, M.top, name="EvaluationModule"
    )


def _supercommutator(X: SDM, Y: SDM, both_odd: bool) -> SDM:
    XY, YX = X.matmul(Y), Y.matmul(X)
    return XY + YX if both_odd else XY - YX


class LoopAction:
    """``rho(x (x) t^m)`` for every ``m >= 0``, read off a module of ``g (x) L/I``.

    Degrees below ``theta`` are the module's own matrices. Higher degrees are generated by
    brackets with degree one: ``[h (x) t, x (x) t^m] = alpha(h) x (x) t^{m+1}`` for root
    vectors, and ``[e (x) t, f (x) t^m] = [e, f] (x) t^{m+1}`` for the Cartan part. Nothing
    above degree one is reduced modulo ``I``.
    """

    def __init__(self, M: repcore.WeightModule):
        Q = M.algebra
        base = Q.base
        self.module = M
        self.base = base
        self._cartan = set(base.cartan)
        self._cache: Dict[Tuple[int, int], SDM] = {}
        for x in base.indices:
            for s in range(Q.theta):
                self._cache[(x, s)] = M.actions[Q.index(x, s)]
            if Q.theta == 1:
                one = {Q.index(x, q): c for q, c in Q.ideal.reduce(1).items()}
                self._cache[(x, 1)] = M.action_of(one)
        self._root_pivot = {x: self._pivot(x) for x in base.indices if x not in self._cartan}
        self._cartan_pairs = self._cartan_brackets()

    def _pivot(self, x: int) -> Tuple[int, object]:
        weight = self.base.weight(x)
        for h in self.base.cartan:
            value = self.base.pair(weight, h)
            if value:
                return h, value
        raise OutOfScopeError(f"{self.base.label(x)} has weight zero on the Cartan part")

    def _cartan_brackets(self) -> Dict[int, List[Tuple[object, int, int]]]:
        pairs, brackets = [], []
        span = Subspace(self.base.dim)
        for e in self.base.raising:
            for f in self.base.lowering:
                b = self.base.bracket(e, f)
                if b and set(b) <= self._cartan and not exactnum.contains(span, b):
                    span = span.extended([b])
                    pairs.append((e, f))
                    brackets.append(b)
        solver = exactnum.CoordinateSolver(brackets, self.base.dim)
        out = {}
        for h in self.base.cartan:
            coords = solver.coordinates({h: QQ.one})
            out[h] = [(c, *pairs[k]) for k, c in coords.items()]
        return out

    def action(self, x: int, m: int) -> SDM:
        if m < 0:
            raise OutOfScopeError("the loop action is generated in non-negative degrees")
        cached = self._cache.get((x, m))
        if cached is not None:
            return cached
        for k in range(2, m + 1):
            if (x, k) not in self._cache:
                self._cache[(x, k)] = self._generate(x, k)
        return self._cache[(x, m)]

    def _generate(self, x: int, m: int) -> SDM:
        if x in self._cartan:
            total = exactnum.zeros(self.module.dim, self.module.dim)
            for c, e, f in self._cartan_pairs[x]:
                both_odd = bool(self.base.parity(e) and self.base.parity(f))
                total = total + _supercommutator(
                    self.action(e, 1), self.action(f, m - 1), both_odd
                ).mul(c)
            return total
        h, value = self._root_pivot[x]
        return _supercommutator(self.action(h, 1), self.action(x, m - 1), False).mul(
            QQ.one / value
        )

    def polynomial(self, x: int, coefficients: Sequence[object], shift: int = 0) -> SDM:
        """``rho(x (x) f(t) t^shift)`` for ``f`` given by low-to-high coefficients."""
        return exactnum.combine(
            ((c, self.action(x, i + shift)) for i, c in enumerate(coefficients) if c),
            (self.module.dim, self.module.dim),
        )


def psi_from(algebra, lambdas: Sequence, points: Sequence[object]) -> Callable[[int, int], object]:
    """``psi(h (x) t^m) = sum_j a_j^m lambda_j(h)`` for a Cartan index ``h``."""
    lambdas = [repcore.make_weight(lam) for lam in lambdas]
    points = [scalar(a) for a in points]

    def psi(h: int, m: int):
        return sum(
            (a**m * algebra.pair(lam, h) for lam, a in zip(lambdas, points)), QQ.zero
        )

    return psi


def _largest_period(values: Callable[[int], Sequence[object]], support: int, order: int) -> int:
    """Largest ``r <= support`` with the sequence vanishing off multiples of ``r``.

    ``order`` bounds the order of a linear recurrence satisfied along every residue class.
    """
    for r in range(max(support, 1), 0, -1):
        if all(
            not any(values(rho + r * k))
            for rho in range(1, r)
            for k in range(order)
        ):
            if r > 2:
                raise CyclotomicExtensionError(
                    f"period {r} needs a primitive {r}-th root of unity (cyclotomic extension)"
                )
            return r
    return 1


def detect_period(algebra, lambdas: Sequence, points: Sequence[object]) -> int:
    """The integer ``r`` of the image of ``psi``; 0 exactly when every weight is 0."""
    psi = psi_from(algebra, lambdas, points)
    support = sum(
        1 for lam in lambdas if any(algebra.pair(lam, h) for h in algebra.cartan)
    )
    if not support:
        return 0
    return _largest_period(lambda m: [psi(h, m) for h in algebra.cartan], support, support)


def combined_period(algebra, lambdas: Sequence, points: Sequence[object], tau) -> int:
    """Period of (psi on the semisimple Cartan) together with the ``z``-data ``tau``."""
    psi = psi_from(algebra, lambdas, points)
    support = sum(
        1 for lam in lambdas if any(algebra.pair(lam, h) for h in algebra.ss_cartan)
    )
    tau_nonzero = any(tau.window)
    if not support and not tau_nonzero:
        return 0
    order = max(support, tau.ideal.theta if tau_nonzero else 0)

    def values(m: int):
        return [psi(h, m) for h in algebra.ss_cartan] + [tau[m]]

    return _largest_period(values, order, order)


class GradedLoopModule:
    """``V (x) L`` with ``x(m) w(s) = (x(m) w)(s+m)`` and ``d w(s) = (s+b) w(s)``.

    ``x(m)`` acts on ``V`` through ``x (x) (t^m mod I)``. Operators and window
    matrices are built on demand and cached.
    """

    def __init__(self, carrier: repcore.WeightModule, offset=0):
        if not isinstance(carrier.algebra, QuotientAlgebra):
            raise OutOfScopeError("a graded loop module needs a module of g ⊗ L/I")
        self.carrier = carrier
        self.algebra: QuotientAlgebra = carrier.algebra
        self.offset = scalar(offset)
        self._operators: Dict[Tuple[int, int], SDM] = {}
        self._lock = threading.Lock()

    @property
    def base(self):
        return self.algebra.base

    @property
    def dim(self) -> int:
        return self.carrier.dim

    def shifted(self, a) -> "GradedLoopModule":
        """Same module with every ``d``-eigenvalue moved by ``a``."""
        out = GradedLoopModule(self.carrier, self.offset + scalar(a))
        out._operators = self._operators
        out._lock = self._lock
        return out

    def operator(self, x: int, m: int) -> SDM:
        """Action of ``x(m)`` on ``V`` for a basis index ``x`` of the base algebra."""
        key = (x, m)
        with self._lock:
            cached = self._operators.get(key)
        if cached is not None:
            return cached
        M = self.carrier.action_of(self.algebra.element(x, LaurentPoly.monomial(m)))
        with self._lock:
            self._operators.setdefault(key, M)
        return M

    def d_eigenvalue(self, s: int):
        return s + self.offset

    def slice_weights(self, s: int) -> List[Tuple[object, object]]:
        d = self.d_eigenvalue(s)
        return [(w, d) for w in self.carrier.weights]

    def slice_character(self, s: int) -> Dict[Tuple[object, object], int]:
        out: Dict[Tuple[object, object], int] = {}
        for key in self.slice_weights(s):
            out[key] = out.get(key, 0) + 1
        return out

    def window_index(self, s: int, j: int, lo: int) -> int:
        return (s - lo) * self.dim + j

    def window_grading(self, lo: int, hi: int) -> List[Tuple[object, int]]:
        return [(w, s) for s in range(lo, hi + 1) for w in self.carrier.weights]

    def window_matrix(self, x: int, m: int, lo: int, hi: int) -> SDM:
        """``x(m)`` on slices ``lo..hi``; images leaving the window are dropped."""
        n = (hi - lo + 1) * self.dim
        op = self.operator(x, m)
        rows: Dict[int, Dict[int, object]] = {}
        for s in range(lo, hi + 1):
            target = s + m
            if not lo <= target <= hi:
                continue
            for r, row in op.items():
                out = rows.setdefault(self.window_index(target, r, lo), {})
                for c, v in row.items():
                    out[self.window_index(s, c, lo)] = v
        return SDM(rows, (n, n), QQ)

    def window_generators(self, lo: int, hi: int) -> List[SDM]:
        span = hi - lo
        return [
            self.window_matrix(x, m, lo, hi)
            for x in self.base.generators
            for m in range(-span, span + 1)
        ]

    def __repr__(self) -> str:
        return f"GradedLoopModule(dim V={self.dim}, offset={fmt(self.offset)})"


def loop_module(V: repcore.WeightModule, b=0) -> GradedLoopModule:
    return GradedLoopModule(V, b)


@dataclass
class LoopComponent:
    """The graded submodule ``U(G) v(i)`` on a degree window."""

    index: int
    space: Subspace
    window: Tuple[int, int]
    slice_dims: Dict[int, int] = field(default_factory=dict)
    irreducible: bool = False

    def to_dict(self) -> Dict[str, object]:
        return {
            "index": self.index,
            "slice_dims": {str(s): d for s, d in sorted(self.slice_dims.items())},
            "irreducible": self.irreducible,
        }


def _slice_dims(space: Subspace, module: GradedLoopModule, lo: int, hi: int) -> Dict[int, int]:
    dims = {s: 0 for s in range(lo, hi + 1)}
    for p in space.pivots:
        dims[lo + p // module.dim] += 1
    return dims


def decompose_loop(
    Vhat: GradedLoopModule,
    v: Optional[int] = None,
    r: int = 1,
    window: Tuple[int, int] = (-2, 2),
) -> List[LoopComponent]:
    """Split the window of ``V (x) L`` into the cyclic components generated by ``v(i)``.

    Components are ``i = 0..r-1`` for ``r >= 1``; for ``r = 0`` there is one per degree
    of the window. Raises :class:`WindowTooSmallError` when a slice is not exhausted.
    """
    lo, hi = window
    if lo > 0 or hi < max(r - 1, 0) or lo > hi:
        raise WindowTooSmallError(f"window {lo}..{hi} does not contain the degrees 0..{r - 1}")
    v = Vhat.carrier.top if v is None else v
    generators = Vhat.window_generators(lo, hi)
    grading = Vhat.window_grading(lo, hi)
    n = (hi - lo + 1) * Vhat.dim
    starts = list(range(r)) if r >= 1 else list(range(lo, hi + 1))
    components = []
    for i in starts:
        start = {Vhat.window_index(i, v, lo): QQ.one}
        space = exactnum.span_closure([start], generators, n, grading=grading)
        components.append(
            LoopComponent(i, space, (lo, hi), _slice_dims(space, Vhat, lo, hi))
        )
        logger.debug("component %d spans %d dimensions of the window", i, space.dim)

    for s in range(lo, hi + 1):
        total = sum(c.slice_dims[s] for c in components)
        union = Subspace(n)
        for c in components:
            union = union.extended(
                b for b in c.space.basis if lo + min(b) // Vhat.dim == s
            )
        if total != Vhat.dim or union.dim != Vhat.dim:
            raise WindowTooSmallError(
                f"slice {s}: components give {total} dimensions ({union.dim} independent) "
                f"of {Vhat.dim}; enlarge the window"
            )

    for c in components:
        target = {Vhat.window_index(c.index, v, lo): QQ.one}
        c.irreducible = all(
            target in exactnum.span_closure(
                [b], generators, n, grading=grading, target=target
            )
            for b in _spot_vectors(c.space, Vhat.dim)
        )
    return components


def _spot_vectors(space: Subspace, dim: int) -> List[Vector]:
    """One basis vector of the component in every slice it meets."""
    seen = set()
    out = []
    for b in space.basis:
        s = min(b) // dim
        if s not in seen:
            seen.add(s)
            out.append(b)
    return out
