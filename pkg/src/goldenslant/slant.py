"""Slant angle, submanifold classification and the slant identity suite.

The angle between ``phi X`` and the tangent space has cosine
``|g(phi X, PX)| / (|PX| |phi X|)``; a submanifold is slant when that angle
is direction- and point-independent.  Slantness is equivalent to the
operator identity ``P^2 = lambda (P + I)`` on tangent vectors with
``lambda = cos^2(theta)``, which also pins the companion identities

    g(PX, PY) = cos^2(theta) (g(X, Y) + g(X, PY))
    g(QX, QY) = sin^2(theta) (g(X, Y) + g(PX, Y))
    tQ = (1 - lambda) (P + I) = -P^2 + P + I

checked here both in floating point along sampled frames and exactly over
Q(sqrt5) for affine immersions.

One reference formula for a worked slant family omits the ``|X|``
normalization from the cosine; :func:`reference_cosine` computes that
variant so reports can flag the discrepancy (its magnitude exceeds 1 for
steep members of the family) without guessing intent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import exactlin as xl
from .errors import LambdaZero, NotSlant, ZeroVector
from .quadrat import QuadRat
from .structures import GoldenStructure
from .submanifold import (
    DEFAULT_TOL_CLASS,
    DEFAULT_TOL_FRAME,
    ExactInducedOperators,
    ImmersionSpec,
    InducedOperators,
    SampleSpec,
    TangentFrame,
    frame_at,
    induced_operators,
)

DEFAULT_TOL_ANGLE = 1e-6

INVARIANT = "invariant"
ANTI_INVARIANT = "anti_invariant"
PROPER_SLANT = "proper_slant"
NON_SLANT = "non_slant"
_SLANT_KINDS = (INVARIANT, ANTI_INVARIANT, PROPER_SLANT)


@dataclass(frozen=True)
class SlantReport:
    """Classification plus the angle data and identity residuals backing it."""

    classification: str
    theta: float
    lam: float  # cos^2 theta
    k: float  # sin^2 theta
    angle_spread: float
    residuals: dict[str, float] = field(default_factory=dict)

    @property
    def cos_theta(self) -> float:
        return math.sqrt(max(self.lam, 0.0))

    def is_slant(self) -> bool:
        return self.classification in _SLANT_KINDS


def _angle_from_ops(ops: InducedOperators, x: np.ndarray, tol_class: float) -> float:
    # Because g(phi X, PX) = |PX|^2, the defining arccos equals
    # atan2(|QX|, |PX|), which stays accurate where arccos degenerates.
    px = ops.p @ x
    qx = ops.q @ x if ops.q.size else np.zeros(0)
    pn = float(np.linalg.norm(px))
    qn = float(np.linalg.norm(qx))
    if pn == 0.0 and qn == 0.0:
        raise ZeroVector("phi X vanished; structure cannot be golden")
    if pn <= tol_class * math.hypot(pn, qn):
        return math.pi / 2
    return math.atan2(qn, pn)


def slant_angle_at(frame: TangentFrame, ops: InducedOperators, x: Sequence[float],
                   tol_class: float = DEFAULT_TOL_CLASS) -> float:
    """Angle between ``phi X`` and the tangent space, ``X`` in tangent-frame coordinates."""
    vec = np.asarray(x, dtype=float)
    if vec.shape != (frame.m,):
        raise ZeroVector(f"direction must have {frame.m} tangent coordinates")
    if not np.linalg.norm(vec):
        raise ZeroVector("slant angle of the zero vector is undefined")
    return _angle_from_ops(ops, vec, tol_class)


def reference_cosine(ops: InducedOperators, x: Sequence[float]) -> float:
    """Signed cosine variant g(phi X, X)/|phi X| that skips the |X| factor.

    Not scale-invariant: it matches the definitional cosine only for unit
    ``X``, so callers reproducing the flagged reference value must pass the
    raw (unnormalized) tangent coordinates.
    """
    vec = np.asarray(x, dtype=float)
    px = ops.p @ vec
    qx = ops.q @ vec if ops.q.size else np.zeros(0)
    phin = math.sqrt(float(px @ px) + float(qx @ qx))
    if phin == 0.0:
        raise ZeroVector("phi X vanished")
    return float(px @ vec) / phin


def classify(imm: ImmersionSpec, structure: GoldenStructure,
             samples: SampleSpec | None = None, directions: int = 20, seed: int = 0,
             tol_angle: float = DEFAULT_TOL_ANGLE, tol_class: float = DEFAULT_TOL_CLASS,
             tol_frame: float = DEFAULT_TOL_FRAME, trials: int = 100) -> SlantReport:
    """Sample the slant angle over a grid and a direction set, then classify.

    The angle spread (max - min over all samples) decides slantness; the
    mean angle then separates invariant, anti-invariant and proper slant.
    For slant results the characterization, the P/Q product identities and
    the tQ identity are evaluated along every sampled frame and their worst
    residuals attached to the report.
    """
    spec = samples or imm.sample_spec
    rng = np.random.default_rng(seed)
    angles: list[float] = []
    ops_per_point: list[InducedOperators] = []
    for point in spec.points():
        frame = frame_at(imm, point, structure.metric)
        ops = induced_operators(frame, structure)
        ops_per_point.append(ops)
        dirs = [np.eye(imm.m)[i] for i in range(imm.m)]
        for _ in range(directions):
            d = rng.standard_normal(imm.m)
            d /= np.linalg.norm(d)
            dirs.append(d)
        angles.extend(_angle_from_ops(ops, d, tol_class) for d in dirs)
    theta = float(np.mean(angles))
    spread = float(max(angles) - min(angles))
    if spread <= tol_angle:
        if theta <= tol_angle:
            kind = INVARIANT
        elif math.pi / 2 - theta <= tol_angle:
            kind = ANTI_INVARIANT
        else:
            kind = PROPER_SLANT
    else:
        kind = NON_SLANT
    lam = math.cos(theta) ** 2
    report = SlantReport(
        classification=kind,
        theta=theta,
        lam=lam,
        k=1.0 - lam,
        angle_spread=spread,
    )
    if not report.is_slant():
        return report
    residuals: dict[str, float] = {}
    for i, ops in enumerate(ops_per_point):
        residuals["characterization"] = max(
            residuals.get("characterization", 0.0),
            characterization_residual(ops, report, seed=seed + i),
        )
        lemma_p, lemma_q = lemma_pq_identities(ops, report, trials=trials, seed=seed + i)
        residuals["lemma_p"] = max(residuals.get("lemma_p", 0.0), lemma_p)
        residuals["lemma_q"] = max(residuals.get("lemma_q", 0.0), lemma_q)
        residuals["tq"] = max(residuals.get("tq", 0.0), tq_identity_residual(ops, report))
        if kind != ANTI_INVARIANT:
            residuals["corollary"] = max(
                residuals.get("corollary", 0.0),
                corollary_residual(ops, report, seed=seed + i),
            )
    return replace(report, residuals=residuals)


def _require_slant(report: SlantReport) -> None:
    if not report.is_slant():
        raise NotSlant(f"classification is {report.classification}")


def characterization_residual(ops: InducedOperators, report: SlantReport,
                              trials: int = 20, seed: int = 0) -> float:
    """Worst residual of ``P^2 = lambda (P + I)``, operator and quadratic form."""
    _require_slant(report)
    p, lam = ops.p, report.lam
    m = p.shape[0]
    worst = float(np.abs(p @ p - lam * (p + np.eye(m))).max())
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        x = rng.standard_normal(m)
        worst = max(worst, abs(float(x @ (p @ (p @ x)) - lam * (x @ x + x @ (p @ x)))))
    return worst


def corollary_residual(ops: InducedOperators, report: SlantReport,
                       trials: int = 20, seed: int = 0) -> float:
    """Quadratic-form residual of ``phi^2 = P^2 / lambda`` on tangent vectors."""
    _require_slant(report)
    if report.classification == ANTI_INVARIANT or report.lam <= 0.0:
        raise LambdaZero("corollary needs lambda > 0 (not anti-invariant)")
    p, lam = ops.p, report.lam
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        x = rng.standard_normal(p.shape[0])
        phi2 = float(x @ (p @ x) + x @ x)  # g(phi^2 X, X) = g(PX, X) + g(X, X)
        worst = max(worst, abs(phi2 - float(x @ (p @ (p @ x))) / lam))
    return worst


def lemma_pq_identities(ops: InducedOperators, report: SlantReport,
                        trials: int = 100, seed: int = 0) -> tuple[float, float]:
    """Residuals of the cos^2 and sin^2 product identities over random pairs."""
    _require_slant(report)
    p, q = ops.p, ops.q
    lam, k = report.lam, report.k
    rng = np.random.default_rng(seed)
    worst_p = worst_q = 0.0
    for _ in range(trials):
        x, y = rng.standard_normal((2, p.shape[0]))
        px, py = p @ x, p @ y
        worst_p = max(worst_p, abs(float(px @ py - lam * (x @ y + x @ py))))
        qq = float((q @ x) @ (q @ y)) if q.size else 0.0
        worst_q = max(worst_q, abs(qq - k * float(x @ y + px @ y)))
    return worst_p, worst_q


def tq_identity_residual(ops: InducedOperators, report: SlantReport) -> float:
    """Worst residual of ``tQ = (1 - lambda)(P + I)`` and ``tQ = -P^2 + P + I``."""
    _require_slant(report)
    p = ops.p
    m = p.shape[0]
    tq = ops.t @ ops.q if ops.q.size else np.zeros((m, m))
    eye = np.eye(m)
    r1 = float(np.abs(tq - (1.0 - report.lam) * (p + eye)).max())
    r2 = float(np.abs(tq + p @ p - p - eye).max())
    return max(r1, r2)


# ---------------------------------------------------------------------------
# exact route


def exact_lambda_candidates(eops: ExactInducedOperators) -> list[QuadRat]:
    """cos^2(theta) per raw basis direction: |P e_i|^2 / |phi e_i|^2, exactly."""
    p = eops.p
    gt = eops.frame.gram_tangent
    m = len(p)
    out = []
    for i in range(m):
        x = [QuadRat(1 if j == i else 0) for j in range(m)]
        px = xl.matvec(p, x)
        num = _bilinear(px, gt, px)
        den = _bilinear(x, gt, x) + _bilinear(px, gt, x)
        out.append(num / den)
    return out


def _bilinear(u, gram, v) -> QuadRat:
    total = QuadRat(0)
    for i, row in enumerate(gram):
        for j, gij in enumerate(row):
            total = total + u[i] * gij * v[j]
    return total


def exact_characterization_residual(eops: ExactInducedOperators, lam: QuadRat) -> QuadRat:
    p = eops.p
    m = len(p)
    target = xl.scale(lam, xl.add(p, xl.identity(m)))
    return xl.max_abs(xl.sub(xl.matmul(p, p), target))


def exact_lemma_residuals(eops: ExactInducedOperators,
                          lam: QuadRat) -> tuple[QuadRat, QuadRat]:
    p, q = eops.p, eops.q
    gt, gn = eops.frame.gram_tangent, eops.frame.gram_normal
    pt = xl.transpose(p)
    kos = xl.sub(
        xl.matmul(pt, xl.matmul(gt, p)),
        xl.scale(lam, xl.add(gt, xl.matmul(gt, p))),
    )
    sin2 = QuadRat(1) - lam
    sin_part = xl.sub(
        xl.matmul(xl.transpose(q), xl.matmul(gn, q)),
        xl.scale(sin2, xl.add(gt, xl.matmul(pt, gt))),
    )
    return xl.max_abs(kos), xl.max_abs(sin_part)


def exact_tq_residuals(eops: ExactInducedOperators, lam: QuadRat) -> tuple[QuadRat, QuadRat]:
    p = eops.p
    m = len(p)
    eye = xl.identity(m)
    tq = xl.matmul(eops.t, eops.q)
    r1 = xl.max_abs(xl.sub(tq, xl.scale(QuadRat(1) - lam, xl.add(p, eye))))
    r2 = xl.max_abs(xl.sub(xl.add(tq, xl.matmul(p, p)), xl.add(p, eye)))
    return r1, r2


def exact_slant_data(eops: ExactInducedOperators) -> dict:
    """Exact slant certificate: lambda candidates plus all identity residuals.

    The immersion is exactly slant iff the lambda candidates agree and the
    characterization residual is zero; the remaining residuals are then
    forced to zero and double-check the arithmetic.
    """
    candidates = exact_lambda_candidates(eops)
    lam = candidates[0]
    uniform = all(c == lam for c in candidates)
    char = exact_characterization_residual(eops, lam)
    lemma_p, lemma_q = exact_lemma_residuals(eops, lam)
    tq1, tq2 = exact_tq_residuals(eops, lam)
    return {
        "lambda": lam,
        "lambda_uniform": uniform,
        "is_slant": uniform and not char,
        "characterization": char,
        "lemma_p": lemma_p,
        "lemma_q": lemma_q,
        "tq_lambda_form": tq1,
        "tq_block_form": tq2,
    }
