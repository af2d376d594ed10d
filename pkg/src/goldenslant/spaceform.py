"""Algebraic point-model of a locally golden product space form.

The model fixes an inner-product space with a constant golden structure
and evaluates the closed-form curvature tensor

    R(X,Y)Z = A {g(Y,Z)X - g(X,Z)Y + g(phiY,Z)phiX - g(phiX,Z)phiY}
            + B {g(phiY,Z)X - g(phiX,Z)Y + g(Y,Z)phiX - g(X,Z)phiY}

with A = -((1-psi) c_p - psi c_q) / (2 sqrt5) and
B = -((1-psi) c_p + psi c_q) / 4, together with its Ricci contraction and
the derivation action R.S.  Every statement about these tensors is
pointwise multilinear algebra, so checks are direct evaluations over
seeded random tuples.

The commutation of R(X,Y) with phi and its corollaries are genuinely open
probes here: for B != 0 this tensor does NOT commute with phi (which is
exactly what makes the R.S derivation action nonvanishing), so those
checks report conformance findings instead of assuming the claims.
Covariant-derivative statements are certified structurally: every
coefficient in R and S is a point-independent constant, so nabla R and
nabla S vanish identically and both sides of their phi-identities are 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .quadrat import PSI, QuadRat
from .structures import GoldenStructure, golden_eigendecomp

_PSI = float(PSI)
_SQRT5 = math.sqrt(5.0)


@dataclass(frozen=True)
class SpaceFormModel:
    """Constant-coefficient model with sectional curvatures (c_p, c_q)."""

    n: int
    p: int
    c_p: float
    c_q: float
    structure: GoldenStructure
    frame: np.ndarray  # columns: g-orthonormal frame E_1..E_n
    psi: QuadRat = PSI

    @classmethod
    def build(cls, n: int, p: int, c_p: float, c_q: float) -> SpaceFormModel:
        """Diagonal model: psi on the first p axes, 1 - psi on the rest."""
        from .structures import Metric

        phi = np.diag([_PSI] * p + [1.0 - _PSI] * (n - p))
        structure = GoldenStructure(phi, Metric.euclidean(n, backend="float"))
        return cls(n=n, p=p, c_p=float(c_p), c_q=float(c_q), structure=structure,
                   frame=np.eye(n))

    @classmethod
    def from_structure(cls, structure: GoldenStructure, c_p: float,
                       c_q: float) -> SpaceFormModel:
        s = structure.to_float()
        basis_psi, basis_neg = golden_eigendecomp(s)
        frame = np.hstack([basis_psi, basis_neg])
        return cls(n=s.n, p=basis_psi.shape[1], c_p=float(c_p), c_q=float(c_q),
                   structure=s, frame=frame)

    @property
    def phi(self) -> np.ndarray:
        return self.structure.phi_float

    @property
    def g(self) -> np.ndarray:
        return self.structure.metric.matrix

    @property
    def trace_phi(self) -> float:
        return float(np.trace(self.phi))

    @property
    def coeff_a(self) -> float:
        return -((1.0 - _PSI) * self.c_p - _PSI * self.c_q) / (2.0 * _SQRT5)

    @property
    def coeff_b(self) -> float:
        return -((1.0 - _PSI) * self.c_p + _PSI * self.c_q) / 4.0

    @property
    def ricci_g_coeff(self) -> float:
        """Coefficient of g(Y, Z) in the closed-form Ricci tensor."""
        return self.coeff_a * (self.n - 2) + self.coeff_b * self.trace_phi

    @property
    def ricci_phi_coeff(self) -> float:
        """Coefficient of g(phi Y, Z) in the closed-form Ricci tensor."""
        return self.coeff_a * (self.trace_phi - 1.0) + self.coeff_b * (self.n - 2)

    def _rng_vectors(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return rng.standard_normal((count, self.n))


def curvature(model: SpaceFormModel, x: np.ndarray, y: np.ndarray,
              z: np.ndarray) -> np.ndarray:
    """R(X, Y)Z of the space-form model."""
    for v in (x, y, z):
        if np.shape(v) != (model.n,):
            raise DimensionMismatch(f"expected vectors of length {model.n}")
    g, phi = model.g, model.phi
    px, py = phi @ x, phi @ y
    gyz, gxz = y @ g @ z, x @ g @ z
    gpyz, gpxz = py @ g @ z, px @ g @ z
    return (model.coeff_a * (gyz * x - gxz * y + gpyz * px - gpxz * py)
            + model.coeff_b * (gpyz * x - gpxz * y + gyz * px - gxz * py))


def ricci_framesum(model: SpaceFormModel, y: np.ndarray, z: np.ndarray) -> float:
    """S(Y, Z) as the frame contraction sum_i g(R(E_i, Y)Z, E_i)."""
    g = model.g
    return float(sum(
        curvature(model, e, y, z) @ g @ e for e in model.frame.T
    ))


def ricci_closed(model: SpaceFormModel, y: np.ndarray, z: np.ndarray) -> float:
    """S(Y, Z) in closed form from the two constant coefficients."""
    g = model.g
    return model.ricci_g_coeff * float(y @ g @ z) \
        + model.ricci_phi_coeff * float((model.phi @ y) @ g @ z)


def _ricci(model: SpaceFormModel, path: str):
    return ricci_framesum if path == "framesum" else ricci_closed


def ricci_agreement(model: SpaceFormModel, trials: int = 100, seed: int = 0) -> float:
    """Worst |framesum - closed| over random pairs (the two must coincide)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        y, z = model._rng_vectors(rng, 2)
        worst = max(worst, abs(ricci_framesum(model, y, z) - ricci_closed(model, y, z)))
    return worst


def curvature_commutation_checks(model: SpaceFormModel, trials: int = 100,
                                 seed: int = 0) -> dict[str, float]:
    """Max residuals of the five phi-commutation statements for R.

    These hold for curvature tensors of metrics with parallel golden
    structures; for this model's closed-form tensor they fail whenever the
    mixed coefficient B is nonzero, so treat the output as a finding.
    """
    rng = np.random.default_rng(seed)
    g, phi = model.g, model.phi
    res = {k: 0.0 for k in ("phi_argument", "first_slots", "both_slots",
                            "form_both_phi", "form_swap")}
    for _ in range(trials):
        x, y, z, w = model._rng_vectors(rng, 4)
        rz = curvature(model, x, y, z)
        res["phi_argument"] = max(
            res["phi_argument"],
            float(np.abs(curvature(model, x, y, phi @ z) - phi @ rz).max()),
        )
        res["first_slots"] = max(
            res["first_slots"],
            float(np.abs(curvature(model, phi @ x, y, z) - curvature(model, x, phi @ y, z)).max()),
        )
        res["both_slots"] = max(
            res["both_slots"],
            float(np.abs(curvature(model, phi @ x, phi @ y, z)
                         - curvature(model, phi @ x, y, z) - rz).max()),
        )
        rpz = curvature(model, x, y, phi @ z)
        res["form_both_phi"] = max(
            res["form_both_phi"],
            abs(float(rpz @ g @ (phi @ w)) - float(rz @ g @ (phi @ w)) - float(rz @ g @ w)),
        )
        res["form_swap"] = max(
            res["form_swap"],
            abs(float(rpz @ g @ w) - float(rz @ g @ (phi @ w))),
        )
    return res


def ricci_phi_checks(model: SpaceFormModel, trials: int = 100, seed: int = 0,
                     path: str = "framesum") -> dict[str, float]:
    """Max residuals of the four phi-identities of the Ricci tensor."""
    s = _ricci(model, path)
    rng = np.random.default_rng(seed)
    phi = model.phi
    res = {k: 0.0 for k in ("phi_sq_left", "phi_sq_right", "phi_both", "phi_swap")}
    for _ in range(trials):
        x, y = model._rng_vectors(rng, 2)
        px, py = phi @ x, phi @ y
        res["phi_sq_left"] = max(
            res["phi_sq_left"],
            abs(s(model, phi @ px, y) - s(model, px, y) - s(model, x, y)),
        )
        res["phi_sq_right"] = max(
            res["phi_sq_right"],
            abs(s(model, x, phi @ py) - s(model, x, py) - s(model, x, y)),
        )
        res["phi_both"] = max(
            res["phi_both"],
            abs(s(model, px, py) - s(model, px, y) - s(model, x, y)),
        )
        res["phi_swap"] = max(res["phi_swap"], abs(s(model, px, y) - s(model, py, x)))
    return res


def r_dot_s(model: SpaceFormModel, x: np.ndarray, y: np.ndarray, z: np.ndarray,
            w: np.ndarray, path: str = "closed") -> float:
    """Derivation action (R(X,Y).S)(Z,W) = -S(R(X,Y)Z, W) - S(Z, R(X,Y)W)."""
    s = _ricci(model, path)
    rz = curvature(model, x, y, z)
    rw = curvature(model, x, y, w)
    return -s(model, rz, w) - s(model, z, rw)


def r_dot_s_closed_form(model: SpaceFormModel, x: np.ndarray, y: np.ndarray,
                        z: np.ndarray, w: np.ndarray) -> float:
    """The claimed product shape -2 beta g(R(X,Y)W, phi Z) of the derivation action."""
    rw = curvature(model, x, y, w)
    return -2.0 * model.ricci_phi_coeff * float(rw @ model.g @ (model.phi @ z))


def r_dot_s_closed_form_gap(model: SpaceFormModel, trials: int = 100,
                            seed: int = 0) -> float:
    """Worst |definitional - claimed closed form| of R.S over random tuples."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        x, y, z, w = model._rng_vectors(rng, 4)
        worst = max(worst, abs(r_dot_s(model, x, y, z, w)
                               - r_dot_s_closed_form(model, x, y, z, w)))
    return worst


def non_semi_symmetry_probe(model: SpaceFormModel, trials: int = 100,
                            seed: int = 0) -> float:
    """max |(R(X,Y).S)(Z,W)|; a value above threshold certifies R.S != 0."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        x, y, z, w = model._rng_vectors(rng, 4)
        worst = max(worst, abs(r_dot_s(model, x, y, z, w)))
    return worst


def rs_corollary_residual(model: SpaceFormModel, trials: int = 100,
                          seed: int = 0) -> float:
    """max |(R(phi X, Y).S)(phi Z, W)| over random tuples (claimed to vanish)."""
    rng = np.random.default_rng(seed)
    phi = model.phi
    worst = 0.0
    for _ in range(trials):
        x, y, z, w = model._rng_vectors(rng, 4)
        worst = max(worst, abs(r_dot_s(model, phi @ x, y, phi @ z, w)))
    return worst


def rs_phi_propositions(model: SpaceFormModel, trials: int = 100,
                        seed: int = 0) -> dict[str, float]:
    """Max residuals of the two phi-expansion identities of R.S (findings)."""
    rng = np.random.default_rng(seed)
    phi = model.phi
    res = {"arguments": 0.0, "values": 0.0}
    for _ in range(trials):
        x1, x2, x, y = model._rng_vectors(rng, 4)
        px1, px2 = phi @ x1, phi @ x2
        res["arguments"] = max(
            res["arguments"],
            abs(r_dot_s(model, px1, px2, x, y) - r_dot_s(model, px1, x2, x, y)
                - r_dot_s(model, x1, x2, x, y)),
        )
        res["values"] = max(
            res["values"],
            abs(r_dot_s(model, x1, x2, phi @ x, phi @ y)
                - r_dot_s(model, x1, x2, phi @ x, y) - r_dot_s(model, x1, x2, x, y)),
        )
    return res


def bianchi_residual(model: SpaceFormModel, trials: int = 100, seed: int = 0) -> float:
    """First Bianchi identity R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        x, y, z = model._rng_vectors(rng, 3)
        total = (curvature(model, x, y, z) + curvature(model, y, z, x)
                 + curvature(model, z, x, y))
        worst = max(worst, float(np.abs(total).max()))
    return worst


def pair_symmetry_residual(model: SpaceFormModel, trials: int = 100,
                           seed: int = 0) -> float:
    """Pair symmetry g(R(X,Y)Z, W) = g(R(Z,W)X, Y)."""
    rng = np.random.default_rng(seed)
    g = model.g
    worst = 0.0
    for _ in range(trials):
        x, y, z, w = model._rng_vectors(rng, 4)
        worst = max(worst, abs(float(curvature(model, x, y, z) @ g @ w)
                               - float(curvature(model, z, w, x) @ g @ y)))
    return worst


def antisymmetry_residual(model: SpaceFormModel, trials: int = 100,
                          seed: int = 0) -> float:
    """Antisymmetry R(X,Y)Z = -R(Y,X)Z."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        x, y, z = model._rng_vectors(rng, 3)
        worst = max(worst, float(np.abs(curvature(model, x, y, z)
                                        + curvature(model, y, x, z)).max()))
    return worst


@dataclass(frozen=True)
class NablaCertificate:
    """Structural certificate that nabla R and nabla S vanish in this model.

    All four displayed constants are point-independent, and phi and g are
    constant matrices, so every covariant derivative of R and S is
    identically zero; the phi-identities for nabla R and nabla S then hold
    as 0 = 0.  No numerical residual is involved.
    """

    coeff_a: float
    coeff_b: float
    ricci_g_coeff: float
    ricci_phi_coeff: float
    statements: tuple[str, ...]
    certified: bool = True


def nabla_identities_certificate(model: SpaceFormModel) -> NablaCertificate:
    return NablaCertificate(
        coeff_a=model.coeff_a,
        coeff_b=model.coeff_b,
        ricci_g_coeff=model.ricci_g_coeff,
        ricci_phi_coeff=model.ricci_phi_coeff,
        statements=(
            "curvature coefficients A, B are constants and phi, g are constant,"
            " so nabla R = 0 and (nabla R)(X,Y)phiZ = phi (nabla R)(X,Y)Z holds as 0 = 0",
            "Ricci coefficients are constants, so nabla S = 0 and"
            " (nabla S)(phiX, Y) = (nabla S)(X, phiY) holds as 0 = 0",
        ),
    )
