"""
Run configuration, report assembly and the command implementations behind main.py
"""

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from ball_integration import SphereSampling
from bloch_analysis import CheckResult, probe_image_ball, sweep_points, verify_lemma1, verify_lemma2
from config import CONFIG, TOOL_VERSION, ConfigError
from fourier_expansion import expand, load_function_spec, reconstruct, split_main_constant, value_at_origin
from monogenic_basis import basis_dump, basis_indices_upto
from utils import canonical_json, fraction_to_json, to_fraction, write_json
from verification_suites import VerificationProcessor

logger = logging.getLogger(__name__)

COMMANDS = ("basis", "verify", "bloch", "expand", "probe")


@dataclass
class RunConfig:
    command: str
    degree_max: int = CONFIG["degree_max"]
    radius: Fraction = CONFIG["radius"]
    seed: int = CONFIG["seed"]
    sphere_points: int = CONFIG["sphere_points"]
    pointwise_samples: int = CONFIG["pointwise_samples"]
    lemma_functions: int = CONFIG["lemma_functions"]
    lemma_degree: int = CONFIG["lemma_degree_max"]
    lemma_directions: int = CONFIG["lemma_directions"]
    fourier_functions: int = CONFIG["fourier_functions"]
    probe_functions: int = CONFIG["probe_functions"]
    probe_boundary_samples: int = CONFIG["probe_boundary_samples"]
    out: Optional[str] = None
    fn_spec: Optional[str] = None
    include_timing: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        try:
            self.radius = to_fraction(self.radius)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"invalid radius {self.radius!r}: {e}")
        if self.radius <= 0:
            raise ConfigError(f"radius must be positive, got {self.radius}")
        if not 0 <= self.degree_max <= CONFIG["basis_degree_cap"]:
            raise ConfigError(f"degree_max must lie in 0..{CONFIG['basis_degree_cap']}, got {self.degree_max}")
        if not 0 <= self.lemma_degree < CONFIG["basis_degree_cap"]:
            raise ConfigError(f"lemma degree must lie in 0..{CONFIG['basis_degree_cap'] - 1}")
        for name in ("sphere_points", "pointwise_samples", "lemma_directions", "probe_boundary_samples"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        for name in ("lemma_functions", "fourier_functions", "probe_functions"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")

    def sampling(self) -> SphereSampling:
        return SphereSampling(points=self.sphere_points, seed=self.seed)

    def to_json(self) -> Dict[str, Any]:
        # the output path is left out so reports written to different files stay identical
        return {
            "command": self.command,
            "degree_max": self.degree_max,
            "radius": fraction_to_json(self.radius),
            "seed": self.seed,
            "sphere_points": self.sphere_points,
            "pointwise_samples": self.pointwise_samples,
            "lemma_functions": self.lemma_functions,
            "lemma_degree": self.lemma_degree,
            "lemma_directions": self.lemma_directions,
            "fourier_functions": self.fourier_functions,
            "probe_functions": self.probe_functions,
            "probe_boundary_samples": self.probe_boundary_samples,
            "fn_spec": self.fn_spec,
        }


@dataclass
class RunReport:
    config: RunConfig
    results: List[CheckResult] = field(default_factory=list)
    extra: Dict[str, Any] = field(default_factory=dict)
    timing: Optional[float] = None

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results if not r.informational)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def failed_checks(self) -> List[str]:
        return [r.check for r in self.results if not r.passed and not r.informational]

    def to_json(self) -> Dict[str, Any]:
        data = {
            "tool_version": TOOL_VERSION,
            "config": self.config.to_json(),
            "results": [r.to_json() for r in self.results],
            "pass": self.passed,
        }
        data.update(self.extra)
        if self.timing is not None:
            data["timing_seconds"] = self.timing
        return data

    def to_text(self) -> str:
        return canonical_json(self.to_json())


def _timed(cfg: RunConfig, report: RunReport, started: float) -> RunReport:
    if cfg.include_timing:
        report.timing = round(time.perf_counter() - started, 3)
    return report


def write_report(report: RunReport, out: Optional[str]) -> Optional[Path]:
    if not out:
        return None
    path = write_json(out, report.to_json())
    logger.info(f"Report written to {path}")
    return path


def cmd_basis_emit(cfg: RunConfig) -> List[Path]:
    """One JSON dump per basis element of degree <= degree_max"""
    out_dir = Path(cfg.out or "basis")
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for idx in basis_indices_upto(cfg.degree_max):
        path = out_dir / f"basis_{idx.family}_{idx.n}_{idx.m}.json"
        write_json(path, basis_dump(idx, cfg.radius))
        written.append(path)
    logger.info(f"Wrote {len(written)} basis elements to {out_dir}")
    return written


def _function_checks(cfg: RunConfig, sampling: SphereSampling) -> List[CheckResult]:
    f, radius = load_function_spec(cfg.fn_spec)
    r = float(radius)
    pts = sweep_points([r * rho for rho in CONFIG["lemma_radii"]], cfg.lemma_directions)
    return [verify_lemma1(f, radius, pts, sampling), verify_lemma2(f, radius, pts, sampling)]


def cmd_verify_all(cfg: RunConfig) -> RunReport:
    started = time.perf_counter()
    processor = VerificationProcessor(cfg.sampling())
    results = processor.verify_all(
        cfg.degree_max, cfg.seed, radius=cfg.radius,
        pointwise_samples=cfg.pointwise_samples,
        fourier_functions=cfg.fourier_functions,
        lemma_functions=cfg.lemma_functions,
        lemma_degree=cfg.lemma_degree,
        lemma_directions=cfg.lemma_directions,
    )
    if cfg.fn_spec:
        results += _function_checks(cfg, processor.sampling)
    return _timed(cfg, RunReport(cfg, results), started)


def cmd_bloch(cfg: RunConfig) -> RunReport:
    started = time.perf_counter()
    processor = VerificationProcessor(cfg.sampling())
    results = processor.constants_suite()
    if cfg.fn_spec:
        results.append(_single_probe(cfg, processor.sampling))
    else:
        results.append(processor.probe_suite(cfg.seed, cfg.probe_functions,
                                             boundary_samples=cfg.probe_boundary_samples))
    results.append(processor.counterexample_suite(cfg.probe_boundary_samples))
    return _timed(cfg, RunReport(cfg, results), started)


def _single_probe(cfg: RunConfig, sampling: SphereSampling) -> CheckResult:
    f, _ = load_function_spec(cfg.fn_spec)
    probe = probe_image_ball(f, sampling, cfg.probe_boundary_samples)
    return CheckResult(check="image_ball_probe", params={"fn_spec": cfg.fn_spec},
                       records=[probe.to_json()], passed=probe.status != "bound_violated",
                       worst_slack=probe.slack if probe.status in ("bound_holds", "bound_violated") else None,
                       details={"status": probe.status})


def cmd_probe(cfg: RunConfig) -> RunReport:
    started = time.perf_counter()
    sampling = cfg.sampling()
    if cfg.fn_spec:
        results = [_single_probe(cfg, sampling)]
    else:
        results = [VerificationProcessor(sampling).probe_suite(
            cfg.seed, cfg.probe_functions, boundary_samples=cfg.probe_boundary_samples)]
    return _timed(cfg, RunReport(cfg, results), started)


def cmd_expand(cfg: RunConfig) -> RunReport:
    """Fourier coefficients of the function in --fn, with its orthogonal split and f(0)"""
    if not cfg.fn_spec:
        raise ConfigError("expand needs a function spec (--fn)")
    started = time.perf_counter()
    f, radius = load_function_spec(cfg.fn_spec)
    c = expand(f, radius)
    main, constant = split_main_constant(c)
    origin = value_at_origin(c)
    direct = f.evaluate_many(np.zeros((1, 3)))[0]
    origin_error = float(np.max(np.abs(np.array(origin.components, dtype=float) - direct)))
    results = [
        CheckResult(check="expand_round_trip", passed=reconstruct(c) == f),
        CheckResult(check="value_at_origin", passed=origin_error <= 1e-12, details={"error": origin_error}),
    ]
    extra = {
        "expansion": c.to_json(),
        "main_part": [idx.label() for idx in main.indices()],
        "constant_part": [idx.label() for idx in constant.indices()],
        "value_at_origin": [float(v) for v in origin.components],
    }
    return _timed(cfg, RunReport(cfg, results, extra), started)


COMMAND_HANDLERS = {
    "verify": cmd_verify_all,
    "bloch": cmd_bloch,
    "expand": cmd_expand,
    "probe": cmd_probe,
}
