"""Modules twisted by a z-sequence tau: V0(psi, tau), the induced module and its top quotient."""

import logging
import threading
from dataclasses import dataclass, field
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from algebra import exactnum, repcore
from algebra.exactnum import fmt, scalar
from algebra.loopeval import (
    GradedLoopModule,
    IdealSpec,
    combined_period,
    detect_period,
    quotient_algebra,
)
from algebra.recurrence import berlekamp_massey
from errors import DimensionMismatchError, PermutationBoundError

logger = logging.getLogger(__name__)

MAX_PERMUTATION_POINTS = 8


class TauSeq:
    """A two-sided solution of ``sum_i c_i tau_{i+m} = 0`` fixed by ``tau_0..tau_{theta-1}``."""

    def __init__(self, ideal: IdealSpec, window: Sequence[object]):
        window = tuple(scalar(x) for x in window)
        if len(window) != ideal.theta:
            raise DimensionMismatchError(
                f"tau window has {len(window)} values but the ideal has degree {ideal.theta}"
            )
        self.ideal = ideal
        self.window = window
        self._c = ideal.coefficients
        self._values: Dict[int, object] = dict(enumerate(window))
        self._lo, self._hi = 0, ideal.theta - 1
        self._lock = threading.Lock()

    def __getitem__(self, s: int):
        return tau_extend(self, s)

    def values(self, lo: int, hi: int) -> List[object]:
        return [self[s] for s in range(lo, hi + 1)]

    def is_zero(self) -> bool:
        return not any(self.window)

    def _extend_to(self, s: int) -> None:
        c, theta = self._c, self.ideal.theta
        while self._hi < s:
            m = self._hi + 1 - theta
            self._values[self._hi + 1] = -sum(
                (c[i] * self._values[i + m] for i in range(theta)), QQ.zero
            )
            self._hi += 1
        while self._lo > s:
            m = self._lo - 1
            self._values[m] = -sum(
                (c[i] * self._values[i + m] for i in range(1, theta + 1)), QQ.zero
            ) / c[0]
            self._lo -= 1

    def to_json(self) -> Dict[str, object]:
        return {"ideal": self.ideal.to_json(), "window": [fmt(x) for x in self.window]}

    def __eq__(self, other) -> bool:
        if not isinstance(other, TauSeq):
            return NotImplemented
        return self.ideal == other.ideal and self.window == other.window

    def __hash__(self) -> int:
        return hash((self.ideal, self.window))

    def __repr__(self) -> str:
        return f"TauSeq({self.ideal!r}, window=[{', '.join(fmt(x) for x in self.window)}])"


def tau_extend(tau: TauSeq, s: int):
    s = int(s)
    with tau._lock:
        if not tau._lo <= s <= tau._hi:
            tau._extend_to(s)
        return tau._values[s]


def tau_from_eval(
    algebra, lambdas: Sequence, points: Sequence[object], zetas: Optional[Sequence[object]] = None
) -> TauSeq:
    """``tau_s = sum_j a_j^s zeta_j`` over the radical ideal; ``zeta_j`` defaults to lambda_j(z)."""
    ideal = IdealSpec.radical_at(points)
    if zetas is None:
        zetas = [algebra.z_value(repcore.make_weight(lam)) for lam in lambdas]
    zetas = [scalar(z) for z in zetas]
    window = [
        sum((a**s * z for a, z in zip(ideal.points, zetas)), QQ.zero) for s in range(ideal.theta)
    ]
    return TauSeq(ideal, window)


def is_evaluation(tau: TauSeq) -> bool:
    """Whether ``tau`` also solves the recurrence of the radical of its ideal."""
    c = tau.ideal.radical().coefficients
    k = len(c) - 1
    return all(
        not sum((c[i] * tau[i + m] for i in range(k + 1)), QQ.zero)
        for m in range(tau.ideal.theta)
    )


def tau_space_basis(ideal: IdealSpec) -> List[TauSeq]:
    return [
        TauSeq(ideal, [QQ.one if i == k else QQ.zero for i in range(ideal.theta)])
        for k in range(ideal.theta)
    ]


def minimal_polynomial(tau: TauSeq) -> List[object]:
    """Coefficients (low to high) of the minimal recurrence ``Q(t)`` of the sequence."""
    return berlekamp_massey(tau.values(0, 2 * tau.ideal.theta - 1))


@dataclass(frozen=True)
class TauModuleSpec:
    """The data of ``V-hat(phi, tau)``: semisimple weights at points, multiplicities, tau, ``b``."""

    algebra: object
    lambdas: Tuple[repcore.Weight, ...]
    points: Tuple[object, ...]
    mults: Tuple[int, ...]
    tau: TauSeq
    offset: object = QQ.zero
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not len(self.lambdas) == len(self.points) == len(self.mults):
            raise DimensionMismatchError(
                f"{len(self.lambdas)} weights, {len(self.points)} points, "
                f"{len(self.mults)} multiplicities"
            )
        lambdas = tuple(
            self.algebra.restrict_ss(repcore.DominantWeight.certify(self.algebra, lam).weight)
            for lam in self.lambdas
        )
        object.__setattr__(self, "lambdas", lambdas)
        object.__setattr__(self, "points", tuple(scalar(a) for a in self.points))
        object.__setattr__(self, "mults", tuple(int(b) for b in self.mults))
        object.__setattr__(self, "offset", scalar(self.offset))
        if self.tau.ideal != self.ideal:
            raise DimensionMismatchError(f"tau lives over {self.tau.ideal!r}, not {self.ideal!r}")

    @property
    def ideal(self) -> IdealSpec:
        return IdealSpec(self.points, self.mults)

    @property
    def K(self) -> int:
        return len(self.points)

    def support(self) -> List[Tuple[repcore.Weight, object]]:
        """``(lambda_j, a_j)`` for the nonzero weights."""
        return [(lam, a) for lam, a in zip(self.lambdas, self.points) if any(lam)]

    def psi_period(self) -> int:
        return detect_period(self.algebra, self.lambdas, self.points)

    def period(self) -> int:
        return combined_period(self.algebra, self.lambdas, self.points, self.tau)


def twist(spec: TauModuleSpec, kappa) -> TauModuleSpec:
    """``(a, tau) -> (kappa a, kappa^i tau_i)``."""
    kappa = scalar(kappa)
    points = tuple(kappa * a for a in spec.points)
    ideal = IdealSpec(points, spec.mults)
    tau = TauSeq(ideal, [kappa**i * x for i, x in enumerate(spec.tau.window)])
    return TauModuleSpec(spec.algebra, spec.lambdas, points, spec.mults, tau, spec.offset)


@dataclass
class VhatModule:
    """``V(psi, tau)`` with its graded wrapper; ``top`` is ``w(0)``."""

    carrier: repcore.WeightModule
    graded: GradedLoopModule
    ideal: IdealSpec
    induced_dim: int
    warnings: List[str] = field(default_factory=list)

    @property
    def top(self) -> int:
        return self.carrier.top

    @property
    def dim(self) -> int:
        return self.carrier.dim


def _grading_warnings(spec: TauModuleSpec) -> List[str]:
    r = spec.psi_period()
    if r < 2:
        return []
    bad = [s for s in range(r * spec.ideal.theta) if s % r and spec.tau[s]]
    if not bad:
        return []
    message = f"tau_{bad[0]} = {fmt(spec.tau[bad[0]])} is nonzero but r = {r} does not divide it"
    logger.warning(message)
    return [message]


def build_v0(spec: TauModuleSpec) -> repcore.WeightModule:
    """Degree-zero module: ``x_ss (x) t^s`` acts by ``sum_j a_j^s rho_j``, ``z (x) t^s`` by tau."""
    A = spec.algebra
    Q = quotient_algebra(A, spec.ideal)
    zero_part = Q.degree_part(0)
    factors = [repcore.hw_module_ss(A, lam) for lam in spec.lambdas]
    powers = [[a**s for s in range(Q.theta)] for a in spec.points]
    splits = {i: Q.base.even_split(Q.split(i)[0]) for i in zero_part.indices}

    def factor_action(k: int, i: int):
        x, s = Q.split(i)
        ss, _ = splits[i]
        return factors[k].action_of(ss).mul(powers[k][s])

    S = repcore.tensor_through(zero_part, factors, factor_action)
    identity = exactnum.identity(S.dim)
    actions = {}
    for i in zero_part.indices:
        x, s = Q.split(i)
        c = splits[i][1] * spec.tau[s]
        actions[i] = S.actions[i] + identity.mul(c) if c else S.actions[i]
    weights = []
    for w in S.weights:
        values = []
        for h in A.cartan:
            ss, c = A.even_split(h)
            values.append(sum((x * A.pair(w, k) for k, x in ss.items()), c * spec.tau[0]))
        weights.append(A.weight_from_values(values))
    return repcore.WeightModule(
        zero_part, tuple(weights), S.parities, actions, S.labels, S.top, name="V0"
    )


def induce_and_reduce(spec: TauModuleSpec) -> VhatModule:
    """``V(psi, tau)``: the irreducible quotient of the module induced from :func:`build_v0`."""
    warnings = _grading_warnings(spec)
    Q = quotient_algebra(spec.algebra, spec.ideal)
    V0 = build_v0(spec)
    M = repcore.kac_module(Q, V0)
    V = repcore.irreducible_quotient(M, M.top)
    logger.debug("induced module of dimension %d reduces to %d", M.dim, V.dim)
    V = repcore.WeightModule(Q, V.weights, V.parities, V.actions, V.labels, V.top, "V(psi,tau)")
    return VhatModule(V, GradedLoopModule(V, spec.offset), spec.ideal, M.dim, warnings)


def _check_bound(*specs: TauModuleSpec) -> None:
    for spec in specs:
        if len(spec.support()) > MAX_PERMUTATION_POINTS:
            raise PermutationBoundError(
                f"{len(spec.support())} points exceed the permutation search bound "
                f"{MAX_PERMUTATION_POINTS}"
            )


def _same_algebra(s1: TauModuleSpec, s2: TauModuleSpec) -> None:
    if s1.algebra is not s2.algebra:
        raise DimensionMismatchError(f"{s1.algebra!r} and {s2.algebra!r} differ")


def _tau_agree(tau1: TauSeq, tau2: TauSeq, scale=None) -> bool:
    n = tau1.ideal.theta + tau2.ideal.theta
    for i in range(n):
        expected = tau1[i] if scale is None else scale**i * tau1[i]
        if tau2[i] != expected:
            return False
    return True


def iso_check_Gprime(s1: TauModuleSpec, s2: TauModuleSpec) -> bool:
    """Isomorphism without the degree operator: equal tau, same (lambda, a) up to reordering."""
    _same_algebra(s1, s2)
    _check_bound(s1, s2)
    if not _tau_agree(s1.tau, s2.tau):
        return False
    sup1, sup2 = s1.support(), s2.support()
    if len(sup1) != len(sup2):
        return False
    return any(
        all(sup2[k] == sup1[j] for k, j in enumerate(sigma))
        for sigma in permutations(range(len(sup1)))
    )


def _kappa_candidates(s1: TauModuleSpec, s2: TauModuleSpec) -> List[object]:
    out = []
    for a in s1.points:
        for b in s2.points:
            kappa = b / a
            if kappa not in out:
                out.append(kappa)
    return out


def _offsets_match(b1, b2, r: int) -> bool:
    diff = b2 - b1
    if diff.denominator != 1:
        return False
    return r == 0 or int(diff) % r == 0


def iso_check_G(s1: TauModuleSpec, s2: TauModuleSpec) -> Optional[Tuple[object, Tuple[int, ...]]]:
    """A witness ``(kappa, sigma)`` for an isomorphism of the graded modules, or None.

    ``sigma`` maps positions of the second spec's nonzero weights to those of the first:
    ``lambda'_k = lambda_{sigma(k)}`` and ``a'_k = kappa * a_{sigma(k)}``.
    """
    _same_algebra(s1, s2)
    _check_bound(s1, s2)
    r1, r2 = s1.period(), s2.period()
    if r1 == 0 or r2 == 0:
        if r1 == r2 == 0 and s1.offset == s2.offset:
            return QQ.one, ()
        return None
    if r1 != r2:
        return None
    sup1, sup2 = s1.support(), s2.support()
    if len(sup1) != len(sup2):
        return None
    if not _offsets_match(s1.offset, s2.offset, r1):
        return None
    if sup1:
        candidates = []
        for sigma in permutations(range(len(sup1))):
            if any(sup2[k][0] != sup1[j][0] for k, j in enumerate(sigma)):
                continue
            kappa = sup2[0][1] / sup1[sigma[0]][1]
            if all(sup2[k][1] == kappa * sup1[j][1] for k, j in enumerate(sigma)):
                candidates.append((kappa, tuple(sigma)))
    else:
        candidates = [(kappa, ()) for kappa in _kappa_candidates(s1, s2)]
    for kappa, sigma in candidates:
        if _tau_agree(s1.tau, s2.tau, kappa):
            return kappa, sigma
    return None
