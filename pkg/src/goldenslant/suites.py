"""Verification suites: turn a scenario config into a deterministic report.

Suites run in the fixed order structure -> identities -> extrinsic ->
slant -> curvature.  Each suite result separates two kinds of content:

* hard checks whose failure fails the suite (axioms, definitional splits,
  internal consistency between independent evaluation routes), and
* findings: claims the toolkit probes rather than assumes (the
  phi-commutation family for the space-form tensor, the anti-invariant
  shape-operator claim, the unnormalized reference cosine).  Findings carry
  ``conforms`` flags and never flip the exit code by themselves.

Reports are plain dictionaries of numbers, classifications, certificates
and flags, rendered as sorted JSON so identical (config, seed) pairs give
byte-identical output.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from . import __version__
from . import exactlin as xl
from .config import ANGLE_FORMULA_UNNORMALIZED, ScenarioConfig, Tolerances
from .errors import GoldenslantError
from .extrinsic import (
    anti_invariant_shape_vanishing,
    gauss_split_residual,
    invariant_connection_check,
    second_fundamental_form,
)
from .quadrat import QuadRat
from .slant import classify, exact_slant_data, reference_cosine
from .spaceform import (
    SpaceFormModel,
    antisymmetry_residual,
    bianchi_residual,
    curvature_commutation_checks,
    nabla_identities_certificate,
    non_semi_symmetry_probe,
    pair_symmetry_residual,
    r_dot_s_closed_form_gap,
    ricci_agreement,
    ricci_phi_checks,
    rs_corollary_residual,
    rs_phi_propositions,
)
from .structures import (
    GoldenStructure,
    golden_eigendecomp,
    golden_from_product,
    product_from_golden,
    verify_golden,
)
from .submanifold import (
    exact_frame,
    exact_identity_residuals,
    exact_induced_operators,
    frame_at,
    induced_operators,
    invariance_test,
    structural_identity_residuals,
)

NONVANISHING_THRESHOLD = 1e-6


def _fl(x) -> float:
    return float(x)


def run_structure_suite(structure: GoldenStructure, tol: Tolerances) -> dict:
    report = verify_golden(structure.phi, structure.metric, tol.tol_struct)
    aps = product_from_golden(structure, tol.tol_struct)
    back = golden_from_product(aps, tol.tol_struct)
    if structure.backend == "exact":
        roundtrip = _fl(xl.max_abs(xl.sub(back.phi, structure.phi)))
    else:
        roundtrip = _fl(np.abs(back.phi_float - structure.phi_float).max())
    basis_psi, basis_neg = golden_eigendecomp(structure)
    if structure.backend == "exact":
        dims = [len(basis_psi[0]) if basis_psi and basis_psi[0] else 0,
                len(basis_neg[0]) if basis_neg and basis_neg[0] else 0]
    else:
        dims = [int(basis_psi.shape[1]), int(basis_neg.shape[1])]
    passed = report.passed and roundtrip <= tol.tol_struct and sum(dims) == structure.n
    return {
        "pass": passed,
        "backend": report.backend,
        "residuals": {
            "structure_equation": report.residual_structure,
            "self_adjoint": report.residual_self_adjoint,
            "metric_compat": report.residual_compat,
            "product_roundtrip": roundtrip,
        },
        "exact_zero": report.exact_zero,
        "eigenspace_dims": dims,
    }


def run_identities_suite(cfg: ScenarioConfig, structure: GoldenStructure,
                         tol: Tolerances, seed: int) -> dict:
    imm = cfg.build_immersion()
    metric = structure.metric
    worst: dict[str, float] = {}
    gram = 0.0
    points = imm.sample_spec.points()
    for i, point in enumerate(points):
        frame = frame_at(imm, point, metric)
        gram = max(gram, frame.gram_residual())
        ops = induced_operators(frame, structure.to_float())
        rep = structural_identity_residuals(ops, frame, structure.to_float(),
                                            seed=seed + i, tol_frame=tol.tol_frame)
        for key, value in rep.residuals.items():
            worst[key] = max(worst.get(key, 0.0), value)
    result = {
        "points": len(points),
        "residuals": worst,
        "frame_gram": gram,
    }
    passed = max(worst.values()) <= tol.tol_frame and gram <= 1e-10
    ef = exact_frame(imm, structure.metric) if structure.backend == "exact" else None
    if ef is not None:
        eops = exact_induced_operators(ef, structure)
        exact = exact_identity_residuals(eops)
        all_zero = all(not v for v in exact.values())
        result["exact"] = {
            "available": True,
            "all_zero": all_zero,
            "residuals": {k: _fl(v) for k, v in exact.items()},
        }
        passed = passed and all_zero
    else:
        result["exact"] = {"available": False}
    result["pass"] = passed
    return result


def run_extrinsic_suite(cfg: ScenarioConfig, structure: GoldenStructure,
                        tol: Tolerances) -> dict:
    imm = cfg.build_immersion()
    fstructure = structure.to_float()
    metric = fstructure.metric
    points = imm.sample_spec.points()
    r_tan = r_nor = h_sym = 0.0
    kinds: list[str] = []
    for point in points:
        rt, rn = gauss_split_residual(imm, point, fstructure)
        r_tan, r_nor = max(r_tan, rt), max(r_nor, rn)
        sff = second_fundamental_form(imm, point, metric)
        h_sym = max(h_sym, _fl(np.abs(sff.h - sff.h.transpose(1, 0, 2)).max()))
        ops = induced_operators(sff.frame, fstructure)
        kinds.append(invariance_test(ops, tol.tol_class).kind)
    kind = kinds[0] if len(set(kinds)) == 1 else "mixed"
    result: dict[str, Any] = {
        "points": len(points),
        "classification": kind,
        "residuals": {
            "gauss_tangential": r_tan,
            "gauss_normal": r_nor,
            "h_symmetry": h_sym,
        },
    }
    passed = max(r_tan, r_nor, h_sym) <= tol.tol_frame
    findings: dict[str, Any] = {}
    if kind == "invariant":
        r_par = r_wei = 0.0
        for point in points:
            a, b = invariant_connection_check(imm, point, fstructure, tol.tol_class)
            r_par, r_wei = max(r_par, a), max(r_wei, b)
        result["residuals"]["invariant_parallel"] = r_par
        result["residuals"]["invariant_weingarten"] = r_wei
        passed = passed and max(r_par, r_wei) <= tol.tol_frame
    elif kind == "anti_invariant":
        probe = 0.0
        for point in points:
            probe = max(probe, anti_invariant_shape_vanishing(imm, point, fstructure,
                                                              tol.tol_class))
        findings["shape_operator_max"] = probe
        findings["shape_vanishing_conforms"] = probe <= tol.tol_frame
    result["findings"] = findings
    result["pass"] = passed
    return result


def run_slant_suite(cfg: ScenarioConfig, structure: GoldenStructure,
                    tol: Tolerances, seed: int) -> dict:
    imm = cfg.build_immersion()
    fstructure = structure.to_float()
    report = classify(imm, fstructure, seed=seed, tol_angle=tol.tol_angle,
                      tol_class=tol.tol_class, tol_frame=tol.tol_frame)
    first_point = imm.sample_spec.points()[0]
    frame = frame_at(imm, first_point, fstructure.metric)
    ops = induced_operators(frame, fstructure)
    # The variant formula is not scale-invariant, so feed it the raw tangent.
    raw_e1 = frame.tangent_coords(frame.raw_tangents[:, 0])
    ref = reference_cosine(ops, raw_e1)
    flags = {
        "reference_mismatch": abs(abs(ref) - report.cos_theta) > tol.tol_angle,
        "reference_invalid": abs(ref) > 1.0 + 1e-12,
    }
    result: dict[str, Any] = {
        "classification": report.classification,
        "theta": report.theta,
        "cos_theta": report.cos_theta,
        "lambda": report.lam,
        "sin_sq": report.k,
        "angle_spread": report.angle_spread,
        "residuals": dict(report.residuals),
        "reference_cosine": ref,
        "angle_formula": cfg.angle_formula,
        "flags": flags,
    }
    passed = True
    if report.residuals:
        passed = max(report.residuals.values()) <= tol.tol_frame
    if cfg.angle_formula == ANGLE_FORMULA_UNNORMALIZED:
        # The requested cosine variant must at least be a valid cosine.
        passed = passed and not flags["reference_invalid"]
    ef = exact_frame(imm, structure.metric) if structure.backend == "exact" else None
    if ef is not None:
        eops = exact_induced_operators(ef, structure)
        data = exact_slant_data(eops)
        exact_result = {
            "available": True,
            "is_slant": bool(data["is_slant"]),
            "lambda": str(data["lambda"]),
            "lambda_float": _fl(data["lambda"]),
            "residuals": {
                k: _fl(data[k])
                for k in ("characterization", "lemma_p", "lemma_q",
                          "tq_lambda_form", "tq_block_form")
            },
        }
        result["exact"] = exact_result
        if data["is_slant"]:
            passed = passed and all(v == 0.0 for v in exact_result["residuals"].values())
    else:
        result["exact"] = {"available": False}
    result["pass"] = passed
    return result


def run_curvature_suite(cfg: ScenarioConfig, tol: Tolerances) -> dict:
    sf = cfg.spaceform
    model = SpaceFormModel.build(cfg.dim, sf.p, sf.c_p, sf.c_q)
    trials, seed = sf.trials, sf.seed
    identities = {
        "ricci_framesum_vs_closed": ricci_agreement(model, trials, seed),
        "bianchi": bianchi_residual(model, trials, seed),
        "pair_symmetry": pair_symmetry_residual(model, trials, seed),
        "antisymmetry": antisymmetry_residual(model, trials, seed),
    }
    ricci_phi = {
        "framesum": ricci_phi_checks(model, trials, seed, path="framesum"),
        "closed": ricci_phi_checks(model, trials, seed, path="closed"),
    }
    passed = (identities["ricci_framesum_vs_closed"] <= tol.tol_frame
              and identities["bianchi"] <= 1e-10
              and identities["pair_symmetry"] <= 1e-10
              and identities["antisymmetry"] <= 1e-10
              and all(v <= tol.tol_frame for path in ricci_phi.values()
                      for v in path.values()))
    commutation = curvature_commutation_checks(model, trials, seed)
    corollary = rs_corollary_residual(model, trials, seed)
    rs_props = rs_phi_propositions(model, trials, seed)
    gap = r_dot_s_closed_form_gap(model, trials, seed)
    probe = non_semi_symmetry_probe(model, trials, seed)
    findings = {
        "commutation": commutation,
        "commutation_conforms": max(commutation.values()) <= tol.tol_frame,
        "rs_corollary": corollary,
        "rs_corollary_conforms": corollary <= tol.tol_frame,
        "rs_phi_propositions": rs_props,
        "rs_phi_conforms": max(rs_props.values()) <= 1e-8,
        "rs_closed_form_gap": gap,
        "rs_closed_form_conforms": gap <= tol.tol_frame,
        "non_semi_symmetry_probe": probe,
        "non_semi_symmetry_nonvanishing": probe > NONVANISHING_THRESHOLD,
    }
    cert = nabla_identities_certificate(model)
    return {
        "pass": passed,
        "model": {"n": model.n, "p": model.p, "c_p": model.c_p, "c_q": model.c_q,
                  "trace_phi": model.trace_phi, "trials": trials, "seed": seed},
        "identities": identities,
        "ricci_phi": ricci_phi,
        "findings": findings,
        "certificate": {
            "certified": cert.certified,
            "coeff_a": cert.coeff_a,
            "coeff_b": cert.coeff_b,
            "ricci_g_coeff": cert.ricci_g_coeff,
            "ricci_phi_coeff": cert.ricci_phi_coeff,
            "statements": list(cert.statements),
        },
    }


def run_scenario(cfg: ScenarioConfig, seed: int | None = None,
                 backend: str = "auto") -> dict:
    """Execute the requested suites and assemble the report dictionary."""
    tol = cfg.tolerances
    seed = cfg.seed if seed is None else seed
    report: dict[str, Any] = {
        "meta": {
            "tool": "goldenslant",
            "versions": {"goldenslant": __version__, "numpy": np.__version__},
            "seed": seed,
            "backend": backend,
            "tolerances": tol.as_dict(),
        },
        "suites": {},
    }
    structure: GoldenStructure | None = None
    build_error: str | None = None
    try:
        structure = cfg.build_structure()
        if backend == "float":
            structure = structure.to_float()
    except GoldenslantError as exc:
        build_error = f"{type(exc).__name__}: {exc}"

    for suite in cfg.suites:
        if build_error is not None and suite != "curvature":
            report["suites"][suite] = {"pass": False, "error": build_error}
            continue
        try:
            if suite == "structure":
                report["suites"][suite] = run_structure_suite(structure, tol)
            elif suite == "identities":
                report["suites"][suite] = run_identities_suite(cfg, structure, tol, seed)
            elif suite == "extrinsic":
                report["suites"][suite] = run_extrinsic_suite(cfg, structure, tol)
            elif suite == "slant":
                report["suites"][suite] = run_slant_suite(cfg, structure, tol, seed)
            elif suite == "curvature":
                report["suites"][suite] = run_curvature_suite(cfg, tol)
        except GoldenslantError as exc:
            report["suites"][suite] = {"pass": False,
                                       "error": f"{type(exc).__name__}: {exc}"}
    report["overall_pass"] = all(s.get("pass", False) for s in report["suites"].values())
    return report


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, QuadRat):
        return str(value)
    return value


def render_report(report: dict) -> str:
    """Deterministic text form of a report (sorted keys, stable floats)."""
    return json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"
