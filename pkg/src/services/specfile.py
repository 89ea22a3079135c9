"""Spec files - the v1 JSON schema for algebras, modules and isomorphism pairs."""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

from algebra import superalg
from algebra.exactnum import fmt, scalar
from algebra.loopeval import (
    GradedLoopModule,
    IdealSpec,
    detect_period,
    evaluation_module,
    loop_module,
)
from algebra.repcore import WeightModule, make_weight, weight_to_json
from algebra.taumod import TauModuleSpec, TauSeq, induce_and_reduce, tau_from_eval
from errors import SpecFileError, SuperloopError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "v1"
KINDS = ("evaluation", "tau", "loop")
DEFAULT_WINDOW = (-2, 2)


def parse_window(text: Union[str, List[int], Tuple[int, int]]) -> Tuple[int, int]:
    """``"LO..HI"`` (or a two-element list) into a degree window."""
    try:
        if isinstance(text, str):
            lo, hi = (int(part) for part in text.split(".."))
        else:
            lo, hi = (int(part) for part in text)
    except (TypeError, ValueError) as exc:
        raise SpecFileError(f"window {text!r} is not of the form LO..HI") from exc
    if lo > hi:
        raise SpecFileError(f"window {text!r} is empty")
    return lo, hi


def _scalars(values: Any, key: str) -> Tuple[object, ...]:
    if not isinstance(values, list):
        raise SpecFileError(f"{key!r} must be a list")
    try:
        return tuple(scalar(x) for x in values)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SpecFileError(f"{key!r} holds a value that is not an exact rational") from exc


@dataclass
class SpecFile:
    """One module instance: algebra descriptor, module kind, data and output options."""

    algebra: Dict[str, Any]
    kind: str
    lambdas: Tuple[Tuple[object, ...], ...]
    points: Tuple[object, ...]
    mults: Tuple[int, ...] = ()
    tau_window: Optional[Tuple[object, ...]] = None
    offset: object = 0
    window: Tuple[int, int] = DEFAULT_WINDOW
    format: str = "json"
    name: str = ""
    suites: Tuple[str, ...] = ()
    control: bool = False
    expect: Dict[str, Any] = field(default_factory=dict)
    source: Optional[Path] = None

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], source: Optional[Path] = None) -> "SpecFile":
        if not isinstance(data, Mapping):
            raise SpecFileError("a spec file holds one JSON object")
        if data.get("version") != SCHEMA_VERSION:
            raise SpecFileError(f"schema version must be {SCHEMA_VERSION!r}")
        for key in ("algebra", "lambda", "a"):
            if key not in data:
                raise SpecFileError(f"missing field {key!r}")
        kind = data.get("kind", "evaluation")
        if kind not in KINDS:
            raise SpecFileError(f"module kind {kind!r} is not one of {', '.join(KINDS)}")
        if not isinstance(data["lambda"], list):
            raise SpecFileError("'lambda' must be a list of weights")
        lambdas = tuple(_scalars(w, "lambda") for w in data["lambda"])
        points = _scalars(data["a"], "a")
        mults = tuple(int(b) for b in data.get("mults", [1] * len(points)))
        tau_window = data.get("tau_window")
        if kind == "tau" and tau_window is None:
            raise SpecFileError("a tau module needs 'tau_window'")
        fmt_name = data.get("format", "json")
        if fmt_name not in ("json", "text"):
            raise SpecFileError(f"format {fmt_name!r} is not json or text")
        try:
            offset = scalar(data.get("b_offset", 0))
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise SpecFileError("'b_offset' is not an exact rational") from exc
        return cls(
            algebra=dict(data["algebra"]),
            kind=kind,
            lambdas=lambdas,
            points=points,
            mults=mults,
            tau_window=None if tau_window is None else _scalars(tau_window, "tau_window"),
            offset=offset,
            window=parse_window(data.get("window", "-2..2")),
            format=fmt_name,
            name=data.get("name") or (source.stem if source else ""),
            suites=tuple(data.get("suites", ())),
            control=bool(data.get("control", False)),
            expect=dict(data.get("expect", {})),
            source=source,
        )

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "version": SCHEMA_VERSION,
            "name": self.name,
            "algebra": self.algebra,
            "kind": self.kind,
            "lambda": [weight_to_json(w) for w in self.lambdas],
            "a": [fmt(a) for a in self.points],
            "mults": list(self.mults),
            "b_offset": fmt(self.offset),
            "window": f"{self.window[0]}..{self.window[1]}",
        }
        if self.tau_window is not None:
            out["tau_window"] = [fmt(x) for x in self.tau_window]
        return out

    def digest_source(self) -> str:
        """Canonical JSON of the spec, the key of its cached results."""
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)


def load(path: Union[str, Path]) -> Union[SpecFile, "IsoPair"]:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecFileError(f"{path}: {exc}") from exc
    if isinstance(data, Mapping) and "left" in data:
        return IsoPair.from_dict(data, path)
    return SpecFile.from_dict(data, path)


def load_spec(path: Union[str, Path]) -> SpecFile:
    spec = load(path)
    if not isinstance(spec, SpecFile):
        raise SpecFileError(f"{path} is an isomorphism pair, not a module spec")
    return spec


@dataclass
class IsoPair:
    """Two tau-module specs and the expected verdict of the isomorphism check."""

    left: SpecFile
    right: SpecFile
    name: str = ""
    expect: Dict[str, Any] = field(default_factory=dict)
    control: bool = False
    source: Optional[Path] = None

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], source: Optional[Path] = None) -> "IsoPair":
        if data.get("version") != SCHEMA_VERSION:
            raise SpecFileError(f"schema version must be {SCHEMA_VERSION!r}")
        if "right" not in data:
            raise SpecFileError("an isomorphism pair needs 'left' and 'right'")
        sides = []
        for key in ("left", "right"):
            side = dict(data[key])
            side.setdefault("version", SCHEMA_VERSION)
            sides.append(SpecFile.from_dict(side, source))
        return cls(
            sides[0],
            sides[1],
            data.get("name") or (source.stem if source else ""),
            dict(data.get("expect", {})),
            bool(data.get("control", False)),
            source,
        )

    def digest_source(self) -> str:
        return json.dumps(
            {"left": self.left.to_dict(), "right": self.right.to_dict()}, sort_keys=True
        )


def build_algebra(descriptor: Mapping[str, Any]):
    try:
        return superalg.build(descriptor)
    except SuperloopError:
        raise
    except (TypeError, ValueError) as exc:
        raise SpecFileError(f"invalid algebra descriptor {dict(descriptor)}") from exc


def to_tau_spec(spec: SpecFile) -> TauModuleSpec:
    """The tau-module data of a spec; evaluation and loop specs get ``tau`` from ``lambda(z)``."""
    algebra = build_algebra(spec.algebra)
    weights = [make_weight(w) for w in spec.lambdas]
    if spec.tau_window is None:
        if any(b != 1 for b in spec.mults):
            raise SpecFileError("multiplicities above 1 need an explicit 'tau_window'")
        tau = tau_from_eval(algebra, weights, spec.points)
    else:
        tau = TauSeq(IdealSpec(spec.points, spec.mults), spec.tau_window)
    return TauModuleSpec(
        algebra, tuple(weights), spec.points, spec.mults, tau, spec.offset, spec.name
    )


@dataclass
class Instance:
    """A built module together with everything the checks and the dump need."""

    spec: SpecFile
    algebra: Any
    module: WeightModule
    graded: GradedLoopModule
    period: int
    tau_spec: Optional[TauModuleSpec] = None
    induced_dim: Optional[int] = None
    warnings: List[str] = field(default_factory=list)


def build_instance(spec: SpecFile) -> Instance:
    algebra = build_algebra(spec.algebra)
    logger.debug("building %s module %s over %s", spec.kind, spec.name, algebra.name)
    if spec.kind == "tau":
        tau_spec = to_tau_spec(spec)
        vhat = induce_and_reduce(tau_spec)
        return Instance(
            spec,
            algebra,
            vhat.carrier,
            vhat.graded,
            tau_spec.period(),
            tau_spec,
            vhat.induced_dim,
            list(vhat.warnings),
        )
    if any(b != 1 for b in spec.mults):
        raise SpecFileError(f"{spec.kind} modules live over radical ideals; use kind 'tau'")
    weights = [make_weight(w) for w in spec.lambdas]
    module = evaluation_module(algebra, weights, spec.points)
    return Instance(
        spec,
        algebra,
        module,
        loop_module(module, spec.offset),
        detect_period(algebra, weights, spec.points),
    )
