"""Tangent/normal frames along an immersion and the induced operators.

For a submanifold of a golden Riemannian manifold, applying ``phi`` to
tangent and normal vectors and splitting the results orthogonally yields
four operators: ``P`` (tangent -> tangent), ``Q`` (tangent -> normal),
``t`` (normal -> tangent) and ``s`` (normal -> normal).  Because
``phi**2 = phi + I``, the block decomposition forces

    P^2 = P + I - tQ        Q = QP + sQ
    s^2 = s + I - Qt        t = Pt + ts

together with self-adjointness of ``P`` and the metric split
``g(PX,PY) + g(QX,QY) = g(X,Y) + g(PX,Y)``.

Operators are expressed in orthonormal frames, so plain transposes realize
metric adjoints.  Affine immersions with coefficients in Q(sqrt5) get a
parallel exact route in the raw (non-orthonormal) tangent basis, where the
same identities hold as statements about exact zeros.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import exactlin as xl
from .errors import DimensionMismatch, RankDeficient
from .expr import Expr, hessians, jacobian, parse
from .quadrat import QuadRat
from .structures import GoldenStructure, Metric, is_exact

DEFAULT_TOL_FRAME = 1e-9
DEFAULT_TOL_CLASS = 1e-7
_RANK_TOL = 1e-8


@dataclass(frozen=True)
class SampleSpec:
    """Evaluation grid: per-parameter (lo, hi, count) plus explicit points."""

    grid: tuple[tuple[float, float, int], ...]
    extra_points: tuple[tuple[float, ...], ...] = ()

    @classmethod
    def default(cls, m: int) -> SampleSpec:
        return cls(grid=tuple((-1.0, 1.0, 3) for _ in range(m)))

    def points(self) -> list[tuple[float, ...]]:
        axes = [np.linspace(lo, hi, count) for lo, hi, count in self.grid]
        pts = [tuple(float(x) for x in combo) for combo in itertools.product(*axes)]
        pts.extend(tuple(float(x) for x in p) for p in self.extra_points)
        return pts


@dataclass(frozen=True)
class ImmersionSpec:
    """Parametric map from an m-dimensional domain into n-dimensional space."""

    params: tuple[str, ...]
    components: tuple[Expr, ...]
    sample_spec: SampleSpec = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.sample_spec is None:
            object.__setattr__(self, "sample_spec", SampleSpec.default(self.m))
        if self.m >= self.n:
            raise DimensionMismatch(
                f"immersion needs fewer parameters ({self.m}) than ambient dimensions ({self.n})"
            )

    @classmethod
    def from_strings(cls, params: Sequence[str], components: Sequence[str],
                     sample_spec: SampleSpec | None = None) -> ImmersionSpec:
        exprs = tuple(parse(text, params) for text in components)
        return cls(tuple(params), exprs, sample_spec)

    @property
    def m(self) -> int:
        return len(self.params)

    @property
    def n(self) -> int:
        return len(self.components)

    def jacobian(self, point: Sequence[float]) -> np.ndarray:
        return jacobian(self.components, point)

    def hessians(self, point: Sequence[float]) -> np.ndarray:
        return hessians(self.components, point)

    def affine_exact(self) -> xl.QMat | None:
        """Exact constant Jacobian (n x m over Q(sqrt5)) for affine immersions."""
        rows = []
        for comp in self.components:
            form = comp.affine_exact()
            if form is None:
                return None
            rows.append(form[1])
        return rows


@dataclass(frozen=True)
class TangentFrame:
    """Orthonormal tangent and normal frames at one parameter point."""

    point: tuple[float, ...]
    raw_tangents: np.ndarray  # n x m Jacobian columns
    tangent_onb: np.ndarray  # n x m
    normal_onb: np.ndarray  # n x (n - m)
    metric: Metric

    @property
    def m(self) -> int:
        return self.tangent_onb.shape[1]

    @property
    def n(self) -> int:
        return self.tangent_onb.shape[0]

    def gram_residual(self) -> float:
        """Deviation of the combined frame from g-orthonormality."""
        full = np.hstack([self.tangent_onb, self.normal_onb])
        return float(np.abs(full.T @ self.metric.matrix @ full - np.eye(self.n)).max())

    def tangent_coords(self, ambient: np.ndarray) -> np.ndarray:
        return self.tangent_onb.T @ self.metric.matrix @ ambient

    def normal_coords(self, ambient: np.ndarray) -> np.ndarray:
        return self.normal_onb.T @ self.metric.matrix @ ambient


def _orthonormalize(columns: np.ndarray, metric: Metric,
                    against: list[np.ndarray]) -> list[np.ndarray]:
    """Modified Gram-Schmidt in the metric, with one re-orthogonalization pass."""
    out: list[np.ndarray] = []
    for col in columns.T:
        w = col.astype(float).copy()
        for _ in range(2):
            for b in itertools.chain(against, out):
                w -= metric.inner(b, w) * b
        nrm = metric.norm(w)
        if nrm < _RANK_TOL:
            raise RankDeficient("vector collapsed during orthonormalization")
        out.append(w / nrm)
    return out


def _complete_to_basis(tangent: list[np.ndarray], metric: Metric, n: int) -> list[np.ndarray]:
    """Greedy completion of the tangent frame to an ambient g-orthonormal basis."""
    normals: list[np.ndarray] = []
    for _ in range(n - len(tangent)):
        best, best_norm = None, -1.0
        for i in range(n):
            w = np.zeros(n)
            w[i] = 1.0
            for _ in range(2):
                for b in itertools.chain(tangent, normals):
                    w -= metric.inner(b, w) * b
            nrm = metric.norm(w)
            if nrm > best_norm:
                best, best_norm = w, nrm
        if best is None or best_norm < _RANK_TOL:
            raise RankDeficient("could not complete the normal frame")
        normals.append(best / best_norm)
    return normals


def frame_at(imm: ImmersionSpec, point: Sequence[float], metric: Metric) -> TangentFrame:
    """Orthonormal tangent/normal frames of ``imm`` at ``point``."""
    if metric.n != imm.n:
        raise DimensionMismatch("metric dimension does not match the ambient space")
    jac = imm.jacobian(point)
    smallest = np.linalg.svd(jac, compute_uv=False).min()
    if smallest < _RANK_TOL:
        raise RankDeficient(f"Jacobian smallest singular value {smallest:.3e} at {tuple(point)}")
    fmetric = metric.to_float()
    tangent = _orthonormalize(jac, fmetric, against=[])
    normal = _complete_to_basis(tangent, fmetric, imm.n)
    return TangentFrame(
        point=tuple(float(x) for x in point),
        raw_tangents=jac,
        tangent_onb=np.column_stack(tangent),
        normal_onb=np.column_stack(normal) if normal else np.zeros((imm.n, 0)),
        metric=fmetric,
    )


@dataclass(frozen=True)
class InducedOperators:
    """Matrices of P, Q, t, s in the orthonormal frames of ``frame``."""

    p: np.ndarray  # m x m
    q: np.ndarray  # (n-m) x m
    t: np.ndarray  # m x (n-m)
    s: np.ndarray  # (n-m) x (n-m)
    frame: TangentFrame

    @property
    def m(self) -> int:
        return self.p.shape[0]


def induced_operators(frame: TangentFrame, structure: GoldenStructure) -> InducedOperators:
    """Project ``phi`` through the frames of ``frame``."""
    if structure.n != frame.n:
        raise DimensionMismatch("structure and frame ambient dimensions differ")
    phi = structure.phi_float
    g = frame.metric.matrix
    tb, nb = frame.tangent_onb, frame.normal_onb
    return InducedOperators(
        p=tb.T @ g @ phi @ tb,
        q=nb.T @ g @ phi @ tb,
        t=tb.T @ g @ phi @ nb,
        s=nb.T @ g @ phi @ nb,
        frame=frame,
    )


@dataclass(frozen=True)
class IdentityReport:
    residuals: dict[str, float]
    passed: bool

    def max_residual(self) -> float:
        return max(self.residuals.values())


def structural_identity_residuals(ops: InducedOperators, frame: TangentFrame,
                                  structure: GoldenStructure, trials: int = 20,
                                  seed: int = 0,
                                  tol_frame: float = DEFAULT_TOL_FRAME) -> IdentityReport:
    """Residuals of the four block identities, self-adjointness and the metric split.

    The matrix identities are checked entrywise; the two metric identities
    are additionally sampled on ``trials`` random tangent pairs.  The
    reassembly residuals confirm that ``phi X`` recombines from the
    operator blocks in ambient coordinates.
    """
    p, q, t, s = ops.p, ops.q, ops.t, ops.s
    m = p.shape[0]
    k = s.shape[0]
    res = {
        "p_squared": float(np.abs(p @ p - p - np.eye(m) + t @ q).max()),
        "q_projection": float(np.abs(q - q @ p - s @ q).max()),
        "s_squared": float(np.abs(s @ s - s - np.eye(k) + q @ t).max()) if k else 0.0,
        "t_projection": float(np.abs(t - p @ t - t @ s).max()) if k else 0.0,
    }
    adj = float(np.abs(p - p.T).max())
    split = float(np.abs(p.T @ p + q.T @ q - np.eye(m) - p.T).max())
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        x, y = rng.standard_normal((2, m))
        adj = max(adj, abs(float((p @ x) @ y - x @ (p @ y))))
        split = max(
            split,
            abs(float((p @ x) @ (p @ y) + (q @ x) @ (q @ y) - x @ y - (p @ x) @ y)),
        )
    res["p_self_adjoint"] = adj
    res["metric_split"] = split

    phi = structure.phi_float
    tb, nb = frame.tangent_onb, frame.normal_onb
    res["reassembly_tangent"] = float(np.abs(phi @ tb - tb @ p - nb @ q).max())
    res["reassembly_normal"] = float(np.abs(phi @ nb - tb @ t - nb @ s).max()) if k else 0.0
    return IdentityReport(residuals=res, passed=max(res.values()) <= tol_frame)


@dataclass(frozen=True)
class InvarianceResult:
    """Classification of a tangent space under phi, with the induced-structure check."""

    kind: str  # invariant | anti_invariant | neither
    q_max: float
    p_max: float
    induced_golden_residual: float | None = None
    induced_self_adjoint_residual: float | None = None


def invariance_test(ops: InducedOperators,
                    tol_class: float = DEFAULT_TOL_CLASS) -> InvarianceResult:
    """invariant iff Q vanishes, anti-invariant iff P vanishes.

    When the invariant branch fires, the induced pair ``(P, g)`` must itself
    be a golden structure; its residuals are recorded so the equivalence is
    verified rather than assumed.
    """
    q_max = float(np.abs(ops.q).max()) if ops.q.size else 0.0
    p_max = float(np.abs(ops.p).max())
    if q_max <= tol_class:
        m = ops.m
        golden = float(np.abs(ops.p @ ops.p - ops.p - np.eye(m)).max())
        selfadj = float(np.abs(ops.p - ops.p.T).max())
        return InvarianceResult("invariant", q_max, p_max, golden, selfadj)
    if p_max <= tol_class:
        return InvarianceResult("anti_invariant", q_max, p_max)
    return InvarianceResult("neither", q_max, p_max)


# ---------------------------------------------------------------------------
# exact route for affine immersions


@dataclass(frozen=True)
class ExactFrame:
    """Raw tangent basis and exact g-orthogonal normal complement."""

    tangent: xl.QMat  # n x m constant Jacobian
    normal: xl.QMat  # n x (n - m)
    gram_tangent: xl.QMat
    gram_normal: xl.QMat
    metric: Metric


@dataclass(frozen=True)
class ExactInducedOperators:
    """P, Q, t, s over Q(sqrt5) in the raw tangent / complement bases."""

    p: xl.QMat
    q: xl.QMat
    t: xl.QMat
    s: xl.QMat
    frame: ExactFrame


def exact_frame(imm: ImmersionSpec, metric: Metric) -> ExactFrame | None:
    """Exact frame data, or None when the immersion or metric is not exact."""
    if metric.backend != "exact":
        return None
    jac = imm.affine_exact()
    if jac is None:
        return None
    g = metric.entries
    et_g = xl.matmul(xl.transpose(jac), g)
    normal_vectors = xl.kernel_basis(et_g)
    if len(normal_vectors) != imm.n - imm.m:
        return None  # exact Jacobian is rank deficient
    normal = xl.from_columns(normal_vectors)
    gram_t = xl.matmul(et_g, jac)
    gram_n = xl.matmul(xl.transpose(normal), xl.matmul(g, normal))
    return ExactFrame(jac, normal, gram_t, gram_n, metric)


def exact_induced_operators(frame: ExactFrame,
                            structure: GoldenStructure) -> ExactInducedOperators:
    """Block coordinates of phi in the basis [tangent | normal], exactly."""
    if not is_exact(structure.phi):
        raise DimensionMismatch("exact induced operators need an exact structure")
    n = len(frame.tangent)
    m = len(frame.tangent[0])
    basis = [frame.tangent[i] + frame.normal[i] for i in range(n)]
    coords = xl.solve(basis, xl.matmul(structure.phi, basis))
    return ExactInducedOperators(
        p=[row[:m] for row in coords[:m]],
        q=[row[:m] for row in coords[m:]],
        t=[row[m:] for row in coords[:m]],
        s=[row[m:] for row in coords[m:]],
        frame=frame,
    )


def exact_identity_residuals(ops: ExactInducedOperators) -> dict[str, QuadRat]:
    """The structural identities as exact max-abs residuals (all must be 0)."""
    p, q, t, s = ops.p, ops.q, ops.t, ops.s
    m = len(p)
    gt, gn = ops.frame.gram_tangent, ops.frame.gram_normal
    eye = xl.identity(m)
    eye_n = xl.identity(len(s))
    res = {
        "p_squared": xl.max_abs(xl.sub(xl.add(xl.matmul(p, p), xl.matmul(t, q)), xl.add(p, eye))),
        "q_projection": xl.max_abs(xl.sub(q, xl.add(xl.matmul(q, p), xl.matmul(s, q)))),
        "s_squared": xl.max_abs(
            xl.sub(xl.add(xl.matmul(s, s), xl.matmul(q, t)), xl.add(s, eye_n))
        ),
        "t_projection": xl.max_abs(xl.sub(t, xl.add(xl.matmul(p, t), xl.matmul(t, s)))),
        "p_self_adjoint": xl.max_abs(
            xl.sub(xl.matmul(xl.transpose(p), gt), xl.matmul(gt, p))
        ),
        "metric_split": xl.max_abs(
            xl.sub(
                xl.add(
                    xl.matmul(xl.transpose(p), xl.matmul(gt, p)),
                    xl.matmul(xl.transpose(q), xl.matmul(gn, q)),
                ),
                xl.add(gt, xl.matmul(gt, p)),
            )
        ),
    }
    return res
