"""Verification suites - which checks run on which instance, with their negative controls."""

import logging
from typing import Callable, Dict, List

from sympy.polys.domains import QQ

from algebra import repcore, superalg
from algebra.exactnum import fmt
from algebra.taumod import TauModuleSpec, TauSeq, induce_and_reduce, is_evaluation, iso_check_G
from errors import SuperloopError
from services import checks
from services.checks import CheckReport
from services.specfile import Instance, IsoPair, to_tau_spec

logger = logging.getLogger(__name__)

STRUCTURE_ALGEBRAS = (
    {"type": "sl", "m": 2, "n": 1},
    {"type": "sl", "m": 3, "n": 1},
    {"type": "C", "m": 3},
)


def algebra_job_name(descriptor: Dict[str, object]) -> str:
    return f"algebra/{superalg.build(descriptor).name}"


def algebra_checks(descriptor: Dict[str, object]) -> List[CheckReport]:
    """Super-Jacobi on every basis triple, plus a corrupted copy that must fail."""
    algebra = superalg.build(descriptor)
    name = algebra_job_name(descriptor)
    reports = [checks.check_super_jacobi(algebra, name)]
    if descriptor == STRUCTURE_ALGEBRAS[0]:
        e, f = algebra.raising[0], algebra.lowering[0]
        bad = checks.corrupted_bracket(algebra, e, f, {algebra.cartan[0]: QQ.one})
        reports.append(checks.check_super_jacobi(algebra, name, bracket=bad, control=True))
    return reports


def structure_suite(inst: Instance) -> List[CheckReport]:
    name = inst.spec.name
    M = inst.module
    return [
        checks.check_bracket_soundness(M, name),
        checks.check_integrable(M, name),
        checks.check_hw_exists(M, name),
        checks.check_odd_nilpotency(M, instance=name),
    ]


def evaluation_suite(inst: Instance) -> List[CheckReport]:
    if inst.spec.kind != "evaluation":
        return []
    name = inst.spec.name
    M = inst.module
    return [
        checks.check_annihilator(M, instance=name),
        checks.check_evaluation_kernel(M, name),
        checks.check_T0_irreducible(M, instance=name),
    ]


def loop_suite(inst: Instance) -> List[CheckReport]:
    if inst.spec.kind != "loop":
        return []
    name = inst.spec.name
    window = inst.spec.window
    reports = []
    if "r" in inst.spec.expect:
        reports.append(checks.check_period(lambda: inst.period, int(inst.spec.expect["r"]), name))
    reports.append(checks.check_loop_decomposition(inst.graded, inst.period, window, name))
    reports.append(checks.check_offset_shift(inst.graded, 1, window, name))
    reports.append(checks.check_T0_irreducible(inst.graded, window=window, instance=name))
    return reports


def _other_tau(spec: TauModuleSpec) -> TauModuleSpec:
    window = [x + 1 for x in spec.tau.window]
    return TauModuleSpec(
        spec.algebra, spec.lambdas, spec.points, spec.mults, TauSeq(spec.ideal, window), spec.offset
    )


def tau_suite(inst: Instance) -> List[CheckReport]:
    if inst.spec.kind != "tau":
        return []
    name = inst.spec.name
    M = inst.module
    spec = inst.tau_spec
    reports = [
        checks.check_annihilator(M, instance=name),
        checks.check_evaluation_criterion(spec, name),
        checks.check_T0_irreducible(M, instance=name),
    ]
    if "evaluation" in inst.spec.expect:
        expected = bool(inst.spec.expect["evaluation"])
        reports.append(
            CheckReport(
                "is_evaluation",
                name,
                is_evaluation(spec.tau) == expected,
                details={"evaluation": is_evaluation(spec.tau)},
            )
        )
    if not is_evaluation(spec.tau):
        reports.append(
            checks.check_annihilator(M, spec.ideal.radical(), name, control=True)
        )
    other = induce_and_reduce(_other_tau(spec)).carrier
    summed = repcore.direct_sum(M, other)
    v = {M.top: QQ.one, M.dim + other.top: QQ.one}
    reports.append(checks.check_T0_irreducible(summed, v, instance=name, control=True))
    return reports


def classification_suite(inst: Instance) -> List[CheckReport]:
    name = inst.spec.name
    expected = inst.tau_spec or to_tau_spec(inst.spec)
    reports = [checks.check_main_theorem_instance(inst.module, inst.spec.offset, expected, name)]
    if "dim" in inst.spec.expect:
        dim = int(inst.spec.expect["dim"])
        reports.append(
            CheckReport(
                "dimension",
                name,
                inst.module.dim == dim,
                None if inst.module.dim == dim else {"dim": inst.module.dim},
            )
        )
    return reports


def iso_suite(pair: IsoPair) -> List[CheckReport]:
    """One verdict per pair; pairs expected to be non-isomorphic are controls."""
    expect_iso = bool(pair.expect.get("iso", True))

    def body():
        left, right = to_tau_spec(pair.left), to_tau_spec(pair.right)
        witness = iso_check_G(left, right)
        details = {"iso": witness is not None}
        passed = witness is not None
        if witness is not None:
            kappa, sigma = witness
            details.update({"kappa": fmt(kappa), "sigma": list(sigma)})
            if "kappa" in pair.expect:
                passed = fmt(kappa) == str(pair.expect["kappa"])
        return {"passed": passed, "details": details, "witness": None if passed else details}

    return [checks.run_check("iso", pair.name, not expect_iso, body)]


SUITES: Dict[str, Callable[[Instance], List[CheckReport]]] = {
    "structure": structure_suite,
    "evaluation": evaluation_suite,
    "loop": loop_suite,
    "tau": tau_suite,
    "classification": classification_suite,
}
SUITE_NAMES = tuple(SUITES) + ("iso",)


def run_suite(suite: str, inst: Instance) -> List[CheckReport]:
    try:
        return SUITES[suite](inst)
    except SuperloopError as exc:
        logger.warning("suite %s aborted on %s: %s", suite, inst.spec.name, exc)
        return [
            CheckReport(
                suite,
                inst.spec.name,
                False,
                {"error": type(exc).__name__, "message": str(exc)},
            )
        ]
