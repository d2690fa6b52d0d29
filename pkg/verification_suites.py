"""
Batch verification suites for the monogenic basis, the Fourier machinery and the Bloch estimates
"""

import logging
from collections import Counter
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from tqdm import tqdm

from ball_integration import SphereSampling, golden_sphere_points, inner_product
from bloch_analysis import (
    CheckResult, bloch_constants, planar_counterexamples, probe_image_ball,
    random_grid_set, random_monogenic_set, random_normalized_function, series_closed_form_check,
    sweep_points, verify_lemma1, verify_lemma2,
)
from config import CONFIG
from fourier_expansion import (
    coefficient_from_derivative, derivative_series, expand, norm_sq_sum, primitive_series,
    reconstruct, split_main_constant, value_at_origin,
)
from harmonic_basis import check_harmonicity, check_homogeneity, check_parity, solid_harmonic_indices
from monogenic_basis import (
    basis_indices_upto, basis_poly, check_derivative_relation,
    check_hyperholomorphic_constant, check_monogenic, check_norm_closed_form, check_orthogonality,
    check_pointwise_bound, check_primitive, dimension_check, pointwise_bound_constant,
)
from poly_algebra import (
    factorization_holds, hypercomplex_derivative, is_monogenic, kernel_agreement,
    random_apoly, riesz_residual,
)
from utils import fraction_to_json, to_fraction

logger = logging.getLogger(__name__)


def _item_result(check: str, items: List[Dict[str, Any]], params: Dict[str, Any]) -> CheckResult:
    counts = Counter("pass" if item["pass"] else "fail" for item in items)
    return CheckResult(check=check, params=params, records=items,
                       passed=counts["fail"] == 0, details=dict(counts))


class VerificationProcessor:
    def __init__(self, sampling: Optional[SphereSampling] = None):
        self.sampling = sampling or SphereSampling()
        self.results: List[CheckResult] = []

    def _run_items(self, check: str, labels: Sequence[Any], fn, params: Dict[str, Any]) -> CheckResult:
        """Apply fn to every item, recording failures and exceptions per item"""
        items = []
        for label in labels:
            try:
                ok = bool(fn(label))
                items.append({"item": str(label), "pass": ok})
            except Exception as e:
                logger.error(f"{check}: {label} raised {e}")
                items.append({"item": str(label), "pass": False, "error": str(e)})
        result = _item_result(check, items, params)
        if not result.passed:
            logger.warning(f"{check}: {result.details.get('fail', 0)} item(s) failed")
        return result

    def operator_suite(self, seed: int, samples: int = 20, degree: int = 5) -> List[CheckResult]:
        """Factorization, Riesz equivalence and two-sided kernels on random and basis polynomials"""
        rng = np.random.default_rng(seed)
        polys = [random_apoly(rng, degree) for _ in range(samples)]
        polys += [basis_poly(idx) for idx in basis_indices_upto(2)]
        params = {"samples": len(polys), "degree": degree, "seed": seed}
        labels = list(range(len(polys)))
        return [
            self._run_items("operator_factorization", labels, lambda k: factorization_holds(polys[k]), params),
            self._run_items("riesz_equivalence", labels,
                            lambda k: is_monogenic(polys[k]) == (not any(riesz_residual(polys[k]))), params),
            self._run_items("two_sided_kernel", labels, lambda k: kernel_agreement([polys[k]]), params),
        ]

    def harmonic_suite(self, degree_max: int) -> List[CheckResult]:
        indices = [idx for l in range(degree_max + 2) for idx in solid_harmonic_indices(l)]
        labels = [f"{idx.kind}_{idx.l}^{idx.m}" for idx in indices]
        lookup = dict(zip(labels, indices))
        params = {"l_max": degree_max + 1}
        return [
            self._run_items("harmonicity", labels, lambda s: check_harmonicity(lookup[s]), params),
            self._run_items("homogeneity", labels, lambda s: check_homogeneity(lookup[s]), params),
            self._run_items("parity", labels, lambda s: check_parity(lookup[s]), params),
        ]

    def basis_suite(self, degree_max: int, r: Any = 1) -> List[CheckResult]:
        """Exact identities of the solid spherical monogenics up to degree_max"""
        indices = basis_indices_upto(degree_max)
        lookup = {idx.label(): idx for idx in indices}
        labels = list(lookup)
        params = {"degree_max": degree_max, "radius": fraction_to_json(to_fraction(r))}
        logger.info(f"Running exact basis suite on {len(indices)} elements")
        with_partner = [s for s in labels if lookup[s].n >= 1 and not lookup[s].is_constant]
        up_to_cap = [s for s in labels if lookup[s].n < CONFIG["basis_degree_cap"]]

        results = [
            self._run_items("basis_monogenic", labels, lambda s: check_monogenic(lookup[s]), params),
            self._run_items("basis_norm_closed_form", labels, lambda s: check_norm_closed_form(lookup[s], r), params),
            self._run_items("basis_derivative_relation", with_partner,
                            lambda s: check_derivative_relation(lookup[s]), params),
            self._run_items("basis_hyperholomorphic_constants", labels,
                            lambda s: check_hyperholomorphic_constant(lookup[s]), params),
            self._run_items("basis_primitive", up_to_cap, lambda s: check_primitive(lookup[s]), params),
            self._run_items("basis_dimension", list(range(degree_max + 1)), dimension_check, params),
        ]
        failures = check_orthogonality(degree_max, r)
        pairs = len(indices) * (len(indices) - 1) // 2
        results.append(CheckResult(
            check="basis_orthogonality", params=dict(params, pairs=pairs),
            records=[{"pair": [a.label(), b.label()], "pass": False} for a, b in failures],
            passed=not failures, details={"pass": pairs - len(failures), "fail": len(failures)},
        ))
        return results

    def pointwise_bound_suite(self, degree_max: int, samples: int = CONFIG["pointwise_samples"]) -> CheckResult:
        """|X_n^m(x)| <= C_n^m |x|^n on the unit sphere"""
        pts = golden_sphere_points(samples, 1.0)
        records = []
        for idx in tqdm(basis_indices_upto(degree_max), desc="pointwise bounds", leave=False):
            slack = check_pointwise_bound(idx, pts)
            tolerance = 1e-12 * max(1.0, pointwise_bound_constant(idx))
            records.append({"item": idx.label(), "slack": slack, "pass": slack >= -tolerance})
        worst = min(rec["slack"] for rec in records)
        tight = next(rec["slack"] for rec in records if rec["item"] == "X_0^0")
        return CheckResult(check="pointwise_bound", params={"degree_max": degree_max, "samples": samples},
                           records=records, passed=all(rec["pass"] for rec in records),
                           worst_slack=worst, details={"constant_element_slack": tight})

    def lemma_suite(self, seed: int, functions: int = CONFIG["lemma_functions"],
                    degree: int = CONFIG["lemma_degree_max"], radii: Sequence[float] = CONFIG["lemma_radii"],
                    directions: int = CONFIG["lemma_directions"]) -> List[CheckResult]:
        """Both derivative estimates over seeded random monogenic polynomials at r = 1

        Records hold the worst sample of each function.
        """
        rng = np.random.default_rng(seed)
        pts = sweep_points(radii, directions)
        checks = {"lemma1_primitive_estimate": verify_lemma1, "lemma2_derivative_estimate": verify_lemma2}
        worst = {name: [] for name in checks}
        errors = Counter()
        for k in tqdm(range(functions), desc="lemma sweep", leave=False):
            c = random_monogenic_set(rng, degree)
            for name, verify in checks.items():
                try:
                    result = verify(c, 1, pts, self.sampling)
                    worst[name].append(min(result.records, key=lambda rec: rec.slack))
                except Exception as e:
                    logger.error(f"{name} failed on function {k}: {e}")
                    errors[name] += 1
        params = {"functions": functions, "degree": degree, "radius": 1, "seed": seed,
                  "radii": list(radii), "directions": directions}
        out = []
        for name, records in worst.items():
            result = CheckResult.from_records(name, records, params)
            if errors[name]:
                result.passed = False
                result.details["errors"] = errors[name]
            out.append(result)
        return out

    def fourier_suite(self, seed: int, degree_max: int,
                      functions: int = CONFIG["fourier_functions"]) -> List[CheckResult]:
        rng = np.random.default_rng(seed)
        items = {name: [] for name in ("fourier_round_trip", "fourier_parseval", "fourier_value_at_origin",
                                       "fourier_split", "fourier_term_derivative", "fourier_primitive_round_trip",
                                       "fourier_coefficient_relations")}
        for k in tqdm(range(functions), desc="fourier", leave=False):
            source = random_grid_set(rng, degree_max)
            f = reconstruct(source)
            try:
                c = expand(f, 1, degree_max)
                items["fourier_round_trip"].append(
                    {"item": k, "pass": c.weights == source.weights and reconstruct(c) == f,
                     "max_coefficient_error": max((abs(c.coefficients.get(i, 0.0) - v)
                                                   for i, v in source.coefficients.items()), default=0.0)})

                exact = inner_product(f, f, 1).to_float()
                parseval = norm_sq_sum(c)
                rel = abs(exact - parseval) / exact if exact else abs(parseval)
                items["fourier_parseval"].append({"item": k, "pass": rel <= 1e-10, "relative_error": rel})

                origin = np.array(value_at_origin(c).components, dtype=float)
                direct = f.evaluate_many(np.zeros((1, 3)))[0]
                err = float(np.max(np.abs(origin - direct)))
                items["fourier_value_at_origin"].append({"item": k, "pass": err <= 1e-12, "error": err})

                main, constant = split_main_constant(c)
                g, h = reconstruct(main), reconstruct(constant)
                items["fourier_split"].append(
                    {"item": k, "pass": inner_product(g, h, 1).is_zero() and hypercomplex_derivative(h).is_zero()})

                items["fourier_term_derivative"].append(
                    {"item": k, "pass": reconstruct(derivative_series(c)) == hypercomplex_derivative(f)})
                items["fourier_primitive_round_trip"].append(
                    {"item": k, "pass": derivative_series(primitive_series(c)).weights == c.weights})

                worst_rel = 0.0
                for idx, coefficient in c.coefficients.items():
                    if idx.n < 2 or idx.is_constant:
                        continue
                    recovered = coefficient_from_derivative(f, idx, 1)
                    worst_rel = max(worst_rel, abs(recovered - coefficient) / max(abs(coefficient), 1e-300))
                items["fourier_coefficient_relations"].append(
                    {"item": k, "pass": worst_rel <= 1e-9, "relative_error": worst_rel})
            except Exception as e:
                logger.error(f"Fourier checks failed on function {k}: {e}")
                for records in items.values():
                    records.append({"item": k, "pass": False, "error": str(e)})
        params = {"functions": functions, "degree_max": degree_max, "seed": seed}
        return [_item_result(name, records, params) for name, records in items.items()]

    def series_suite(self, values: Sequence[float] = (0.1, 0.5, 0.9)) -> CheckResult:
        records = []
        for t in values:
            partial, closed = series_closed_form_check(t)
            rel = abs(partial - closed) / abs(closed) if closed else abs(partial)
            records.append({"t": t, "partial_sum": partial, "closed_form": closed,
                            "relative_error": rel, "pass": rel <= 1e-10})
        return CheckResult(check="series_closed_form", params={"t": list(values)}, records=records,
                           passed=all(rec["pass"] for rec in records))

    def constants_suite(self) -> List[CheckResult]:
        report = bloch_constants()
        data = report.to_json()
        records = [{"item": name, "pass": ok} for name, ok in sorted(report.assertions().items())]
        return [
            CheckResult(check="g_analysis_and_constants", params={"radius": 1, "digits": report.digits},
                        records=records, passed=report.passed, details=data),
            CheckResult(check="quoted_simplified_bounds", informational=True,
                        passed=report.exceeds_quoted_image_ball_bound and report.exceeds_quoted_bloch_bound,
                        details=data["informational"]),
        ]

    def probe_suite(self, seed: int, functions: int = CONFIG["probe_functions"],
                    degree: int = CONFIG["probe_degree_max"],
                    boundary_samples: int = CONFIG["probe_boundary_samples"]) -> CheckResult:
        """Image-ball probe over seeded random normalised functions"""
        rng = np.random.default_rng(seed)
        records = []
        statuses = Counter()
        for k in tqdm(range(functions), desc="image-ball probes", leave=False):
            try:
                probe = probe_image_ball(random_normalized_function(rng, degree), self.sampling, boundary_samples)
                statuses[probe.status] += 1
                records.append(dict(probe.to_json(), item=k))
            except Exception as e:
                logger.error(f"Probe {k} failed: {e}")
                statuses["error"] += 1
                records.append({"item": k, "status": "error", "error": str(e)})
        checked = [rec for rec in records if rec["status"] in ("bound_holds", "bound_violated")]
        return CheckResult(
            check="image_ball_probe", params={"functions": functions, "degree": degree, "seed": seed,
                                              "boundary_samples": boundary_samples},
            records=records,
            passed=statuses["bound_violated"] == 0 and statuses["error"] == 0 and statuses["degenerate"] == 0,
            worst_slack=min((rec["slack"] for rec in checked), default=None),
            details=dict(statuses),
        )

    def counterexample_suite(self, boundary_samples: int = CONFIG["probe_boundary_samples"]) -> CheckResult:
        """Planar monogenic maps, reported without failing the run"""
        records = []
        for name, f in planar_counterexamples():
            probe = probe_image_ball(f, self.sampling, boundary_samples)
            records.append(dict(probe.to_json(), function=name))
        return CheckResult(check="planar_counterexamples", records=records, informational=True,
                           passed=all(rec["status"] == "bound_holds" for rec in records))

    def verify_all(self, degree_max: int, seed: int, **sweep) -> List[CheckResult]:
        """Every assertable suite, in a fixed order"""
        results: List[CheckResult] = []
        results += self.operator_suite(seed)
        results += self.harmonic_suite(degree_max)
        results += self.basis_suite(degree_max, sweep.get("radius", 1))
        results.append(self.pointwise_bound_suite(degree_max, sweep.get("pointwise_samples", CONFIG["pointwise_samples"])))
        results += self.fourier_suite(seed, degree_max, sweep.get("fourier_functions", CONFIG["fourier_functions"]))
        results += self.lemma_suite(seed, sweep.get("lemma_functions", CONFIG["lemma_functions"]),
                                    sweep.get("lemma_degree", CONFIG["lemma_degree_max"]),
                                    directions=sweep.get("lemma_directions", CONFIG["lemma_directions"]))
        results.append(self.series_suite())
        results += self.constants_suite()
        self.results = results
        summary = Counter("pass" if r.passed else ("info" if r.informational else "fail") for r in results)
        logger.info(f"Verification finished: {dict(summary)}")
        return results


# Global instance for use across the application
verification_processor = VerificationProcessor()
