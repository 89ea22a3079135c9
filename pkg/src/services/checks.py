"""Checks - executable instance checks on constructed algebras and modules."""

import logging
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Union

from sympy.polys.domains import QQ

from algebra import exactnum, repcore
from algebra.exactnum import Subspace, Vector, add_scaled, fmt
from algebra.loopeval import (
    GradedLoopModule,
    IdealSpec,
    LaurentPoly,
    LoopAction,
    QuotientAlgebra,
    decompose_loop,
)
from algebra.recurrence import berlekamp_massey, rational_roots
from algebra.taumod import (
    TauModuleSpec,
    TauSeq,
    induce_and_reduce,
    is_evaluation,
    iso_check_Gprime,
)
from errors import ExtractionError, SuperloopError

logger = logging.getLogger(__name__)


@dataclass
class CheckReport:
    """Outcome of one check on one instance; a failure carries a witness."""

    name: str
    instance: str
    passed: bool
    witness: Any = None
    elapsed: float = 0.0
    control: bool = False
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def expected(self) -> bool:
        """Negative controls are expected to fail."""
        return self.passed != self.control

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "instance": self.instance,
            "passed": self.passed,
            "witness": self.witness,
            "elapsed": round(self.elapsed, 4),
            "control": self.control,
            "expected": self.expected,
            "details": self.details,
        }


def run_check(name: str, instance: str, control: bool, body: Callable[[], Dict[str, Any]]):
    start_time = time.time()
    try:
        outcome = body()
    except SuperloopError as exc:
        outcome = {"passed": False, "witness": {"error": type(exc).__name__, "message": str(exc)}}
    return CheckReport(
        name=name,
        instance=instance,
        passed=outcome["passed"],
        witness=outcome.get("witness"),
        elapsed=time.time() - start_time,
        control=control,
        details=outcome.get("details", {}),
    )


def _scalar_on(M: repcore.WeightModule, coords: Mapping[int, object], v: int):
    """Scalar by which an element acts on a vector spanning its own weight space."""
    image = exactnum.act(M.action_of(coords), {v: QQ.one})
    if any(j != v for j in image):
        raise ExtractionError(f"{M.labels[v]} is not an eigenvector")
    return image.get(v, QQ.zero)


def super_jacobi_violations(algebra, bracket=None, limit: int = 1) -> List[List[str]]:
    """Basis triples breaking ``[x,[y,w]] = [[x,y],w] + (-1)^{|x||y|}[y,[x,w]]``."""
    bracket = bracket or algebra.bracket

    def on(u: Mapping[int, object], v: Mapping[int, object]) -> Vector:
        out: Vector = {}
        for i, a in u.items():
            for j, b in v.items():
                add_scaled(out, bracket(i, j), a * b)
        return out

    found = []
    for x, y, w in product(algebra.indices, repeat=3):
        ex, ey, ew = {x: QQ.one}, {y: QQ.one}, {w: QQ.one}
        left = on(ex, on(ey, ew))
        right = on(on(ex, ey), ew)
        sign = -1 if algebra.parity(x) and algebra.parity(y) else 1
        add_scaled(right, on(ey, on(ex, ew)), QQ(sign))
        if left != right:
            found.append([algebra.label(x), algebra.label(y), algebra.label(w)])
            if len(found) >= limit:
                break
    return found


def corrupted_bracket(algebra, i: int, j: int, delta: Mapping[int, object]):
    """``algebra.bracket`` with ``delta`` added to ``[x_i, x_j]`` (a negative-control fixture)."""

    def bracket(a: int, b: int) -> Vector:
        out = dict(algebra.bracket(a, b))
        if (a, b) == (i, j):
            add_scaled(out, delta)
        return out

    return bracket


def check_super_jacobi(algebra, instance: str = "", bracket=None, control: bool = False):
    def body():
        bad = super_jacobi_violations(algebra, bracket)
        return {
            "passed": not bad,
            "witness": bad[0] if bad else None,
            "details": {"dim": algebra.dim},
        }

    return run_check("super_jacobi", instance or algebra.name, control, body)


def check_bracket_soundness(M: repcore.WeightModule, instance: str = "", control: bool = False):
    def body():
        bad = repcore.check_bracket_soundness(M)
        return {"passed": not bad, "witness": bad[:3] or None, "details": {"dim": M.dim}}

    return run_check("bracket_soundness", instance, control, body)


def check_integrable(M: repcore.WeightModule, instance: str = "", control: bool = False):
    def body():
        return {"passed": repcore.is_integrable(M), "details": {"dim": M.dim}}

    return run_check("integrable", instance, control, body)


def check_odd_nilpotency(
    M: repcore.WeightModule, v: Optional[int] = None, instance: str = "", control: bool = False
):
    """Smallest ``k`` with every length-``k`` product of odd lowering operators killing ``v``."""

    def body():
        top = M.top if v is None else v
        lowering = [M.actions[i] for i in M.algebra.indices if M.algebra.degree(i) == -1]
        layer = Subspace.span(M.dim, [{top: QQ.one}])
        for k in range(1, M.dim + 2):
            images = [exactnum.act(A, b) for A in lowering for b in layer.basis]
            layer = Subspace.span(M.dim, [w for w in images if w])
            if not layer.dim:
                return {"passed": True, "details": {"k": k}}
        return {"passed": False, "witness": {"surviving_dim": layer.dim}}

    return run_check("odd_nilpotency", instance, control, body)


def check_hw_exists(M: repcore.WeightModule, instance: str = "", control: bool = False):
    """Common kernel of the raising generators is one line, spanned by a weight vector."""

    def body():
        singular = repcore.highest_weight_vectors(M)
        if singular.dim != 1:
            return {"passed": False, "witness": {"kernel_dim": singular.dim}}
        (vector,) = singular.basis
        weights = {M.weights[j] for j in vector}
        return {
            "passed": len(weights) == 1,
            "witness": None if len(weights) == 1 else {"weights": len(weights)},
            "details": {"vector": [M.labels[j] for j in sorted(vector)]},
        }

    return run_check("hw_exists", instance, control, body)


def _t0_generators(target, window):
    if isinstance(target, GradedLoopModule):
        lo, hi = window
        span = hi - lo
        gens = [
            target.window_matrix(h, m, lo, hi)
            for h in target.base.cartan
            for m in range(-span, span + 1)
        ]
        return gens, (hi - lo + 1) * target.dim
    algebra = target.algebra
    loop = getattr(algebra, "loop_cartan", ())
    gens = [target.actions[i] for i in tuple(algebra.cartan) + tuple(loop)]
    return gens, target.dim


def check_T0_irreducible(
    target,
    v: Optional[Mapping[int, object]] = None,
    window=(-2, 2),
    instance: str = "",
    control: bool = False,
):
    """The orbit of ``v`` under the loop Cartan part is spanned by vectors regenerating ``v``.

    ``target`` is a module of ``g (x) L/I`` or a graded loop module (then on ``window``).
    """

    def body():
        gens, n = _t0_generators(target, window)
        if v is not None:
            start = dict(v)
        elif isinstance(target, GradedLoopModule):
            start = {target.window_index(0, target.carrier.top, window[0]): QQ.one}
        else:
            start = {target.top: QQ.one}
        orbit = exactnum.span_closure([start], gens, n)
        for b in orbit.basis:
            if start not in exactnum.span_closure([b], gens, n, target=start):
                return {
                    "passed": False,
                    "witness": {"vector": sorted(b)},
                    "details": {"orbit_dim": orbit.dim},
                }
        return {"passed": True, "details": {"orbit_dim": orbit.dim}}

    return run_check("T0_irreducible", instance, control, body)


def annihilator_witness(
    M: repcore.WeightModule, ideal: IdealSpec, shifts: Optional[Iterable[int]] = None
) -> Optional[Dict[str, Any]]:
    """First ``x (x) P(t) t^s`` (``P`` generating ``ideal``) acting nonzero on ``M``.

    The loop action is generated from the module's own matrices, see :class:`LoopAction`.
    ``shifts`` defaults to ``0 .. theta - 1``, ``theta`` the degree of the ideal of ``M``.
    """
    algebra: QuotientAlgebra = M.algebra
    loop = LoopAction(M)
    coefficients = ideal.coefficients
    for s in range(algebra.theta) if shifts is None else shifts:
        for x in algebra.base.indices:
            A = loop.polynomial(x, coefficients, s)
            for r, row in A.items():
                for c, value in row.items():
                    return {
                        "element": f"{algebra.base.label(x)}⊗P(t)t^{s}",
                        "entry": [M.labels[r], M.labels[c]],
                        "value": fmt(value),
                    }
    return None


def check_annihilator(
    M: repcore.WeightModule,
    ideal: Optional[IdealSpec] = None,
    instance: str = "",
    control: bool = False,
):
    """``g (x) I`` acts by zero; ``ideal`` defaults to the one the module is built over."""

    def body():
        target = ideal or M.algebra.ideal
        witness = annihilator_witness(M, target)
        return {
            "passed": witness is None,
            "witness": witness,
            "details": {"ideal": target.to_json()},
        }

    return run_check("annihilator", instance, control, body)


def check_evaluation_criterion(spec: TauModuleSpec, instance: str = "", control: bool = False):
    """``is_evaluation(tau)`` agrees with ``g (x) I'`` annihilating ``V(psi, tau)``."""

    def body():
        V = induce_and_reduce(spec).carrier
        evaluation = is_evaluation(spec.tau)
        witness = annihilator_witness(V, spec.ideal.radical())
        return {
            "passed": evaluation == (witness is None),
            "witness": None if evaluation == (witness is None) else witness,
            "details": {"evaluation": evaluation, "nonzero_action": witness},
        }

    return run_check("evaluation_criterion", instance, control, body)


def check_loop_decomposition(
    Vhat: GradedLoopModule, r: int, window=(-2, 2), instance: str = "", control: bool = False
):
    """``r`` components that exhaust every slice; component ``i`` is component 0 moved by ``i``."""

    def body():
        components = decompose_loop(Vhat, Vhat.carrier.top, r, window)
        expected = r if r >= 1 else window[1] - window[0] + 1
        lo, hi = window
        shifted_ok = all(
            c.slice_dims[s] == components[0].slice_dims[s - c.index]
            for c in components
            for s in range(lo, hi + 1)
            if lo <= s - c.index <= hi and r >= 1
        )
        passed = len(components) == expected and shifted_ok and all(
            c.irreducible for c in components
        )
        return {
            "passed": passed,
            "witness": None if passed else [c.to_dict() for c in components],
            "details": {"components": [c.to_dict() for c in components]},
        }

    return run_check("loop_decomposition", instance, control, body)


@dataclass
class ExtractedData:
    lambdas: List[repcore.Weight]
    points: List[object]
    mults: List[int]
    tau_window: List[object]


def _vandermonde(points: Sequence[object], values: Sequence[object]) -> List[object]:
    """Solve ``sum_j a_j^m x_j = values[m]`` for ``m < len(points)``."""
    n = len(points)
    rows = [{j: a**m for j, a in enumerate(points)} for m in range(n)]
    inverse = exactnum.from_rows(rows, n).inv()
    return [
        sum((x * values[k] for k, x in inverse.get(j, {}).items()), QQ.zero) for j in range(n)
    ]


def extract_highest_weight_data(M: repcore.WeightModule) -> ExtractedData:
    """Read ``psi`` on the semisimple Cartan and ``tau`` off the loop Cartan on the top vector."""
    Q: QuotientAlgebra = M.algebra
    A = Q.base
    v = M.top
    n = 2 * Q.theta + 2

    def sequence(coords: Mapping[int, object]) -> List[object]:
        return [
            _scalar_on(
                M,
                {
                    k: c * x
                    for h, c in coords.items()
                    for k, x in Q.element(h, LaurentPoly.monomial(m)).items()
                },
                v,
            )
            for m in range(n)
        ]

    psi = {h: sequence({h: QQ.one}) for h in A.ss_cartan}
    tau = sequence(A.z_coords)

    psi_points: List[object] = []
    for values in psi.values():
        charpoly = berlekamp_massey(values)
        found = rational_roots(charpoly)
        if sum(found.values()) != len(charpoly) - 1:
            raise ExtractionError("a psi sequence has irrational characteristic roots")
        psi_points += [a for a in found if a not in psi_points]
    psi_points.sort()

    tau_poly = berlekamp_massey(tau)
    tau_roots = rational_roots(tau_poly)
    if sum(tau_roots.values()) != len(tau_poly) - 1:
        raise ExtractionError("the z-sequence has irrational characteristic roots")

    points = sorted(set(psi_points) | set(tau_roots))
    if not points:
        zero = tuple(QQ.zero for _ in A.coord_index)
        return ExtractedData([zero], [QQ.one], [1], [QQ.zero])
    mults = [max(1 if a in psi_points else 0, tau_roots.get(a, 0)) for a in points]

    values_at = {a: [QQ.zero] * len(A.ss_cartan) for a in points}
    if psi_points:
        for k, h in enumerate(A.ss_cartan):
            for a, x in zip(psi_points, _vandermonde(psi_points, psi[h])):
                values_at[a][k] = x
    lambdas = [A.weight_from_ss_values(values_at[a], 0) for a in points]
    theta = sum(mults)
    return ExtractedData(lambdas, points, mults, tau[:theta])


def rebuild_spec(algebra, data: ExtractedData, offset=0) -> TauModuleSpec:
    ideal = IdealSpec(tuple(data.points), tuple(data.mults))
    return TauModuleSpec(
        algebra,
        tuple(data.lambdas),
        tuple(data.points),
        tuple(data.mults),
        TauSeq(ideal, data.tau_window),
        offset,
    )


def check_main_theorem_instance(
    M: repcore.WeightModule,
    offset=0,
    expected: Optional[TauModuleSpec] = None,
    instance: str = "",
    control: bool = False,
):
    """Recover ``(lambda, a, tau, b)`` from ``M``, rebuild ``V(psi, tau)`` and compare."""

    def body():
        data = extract_highest_weight_data(M)
        spec = rebuild_spec(M.algebra.base, data, offset)
        rebuilt = induce_and_reduce(spec).carrier
        same_weights = repcore.weight_multiplicities(rebuilt) == repcore.weight_multiplicities(M)
        matches = expected is None or iso_check_Gprime(spec, expected)
        details = {
            "points": [fmt(a) for a in data.points],
            "mults": data.mults,
            "lambda": [repcore.weight_to_json(w) for w in data.lambdas],
            "tau_window": [fmt(x) for x in data.tau_window],
            "dim": M.dim,
            "rebuilt_dim": rebuilt.dim,
        }
        passed = rebuilt.dim == M.dim and same_weights and matches
        witness = None
        if not passed:
            witness = {"dims": [M.dim, rebuilt.dim], "weights_match": same_weights,
                       "spec_match": matches}
        return {"passed": passed, "witness": witness, "details": details}

    return run_check("main_theorem", instance, control, body)


def check_evaluation_kernel(M: repcore.WeightModule, instance: str = "", control: bool = False):
    """``x (x) P'(t) t^s`` is zero on an evaluation module for ``0 <= s < K``, ``K`` the points."""

    def body():
        ideal = M.algebra.ideal
        points = len(ideal.points)
        witness = annihilator_witness(M, ideal.radical(), range(points))
        return {"passed": witness is None, "witness": witness, "details": {"K": points}}

    return run_check("evaluation_kernel", instance, control, body)


def check_period(
    period: Callable[[], int], expected: int, instance: str = "", control: bool = False
):
    def body():
        r = period()
        return {
            "passed": r == expected,
            "witness": None if r == expected else {"r": r},
            "details": {"r": r},
        }

    return run_check("period", instance, control, body)


def check_offset_shift(
    Vhat: GradedLoopModule, a=1, window=(-2, 2), instance: str = "", control: bool = False
):
    """Slice characters of the module with offset ``b + a`` are those for ``b`` moved by ``a``."""

    def body():
        moved = Vhat.shifted(a)
        shift = exactnum.scalar(a)
        for s in range(window[0], window[1] + 1):
            expected = {(w, d + shift): k for (w, d), k in Vhat.slice_character(s).items()}
            if moved.slice_character(s) != expected:
                return {"passed": False, "witness": {"slice": s}}
        return {"passed": True, "details": {"shift": fmt(shift)}}

    return run_check("offset_shift", instance, control, body)


def summarize(reports: Iterable[Union[CheckReport, Mapping[str, Any]]]) -> Dict[str, int]:
    """Count totals; ``failed`` only counts unexpected outcomes."""
    summary = {"total": 0, "passed": 0, "failed": 0, "controls": 0}
    for report in reports:
        if isinstance(report, CheckReport):
            report = report.to_dict()
        summary["total"] += 1
        if report.get("control"):
            summary["controls"] += 1
        if report.get("expected"):
            summary["passed"] += 1
        else:
            summary["failed"] += 1
    return summary
