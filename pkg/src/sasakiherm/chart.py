"""Finite-difference oracle on explicit sphere charts.

Builds the canonical (or D-homothetically deformed) Sasakian structure
of an odd unit sphere in stereographic coordinates, assembles the
product Hermitian structure as genuine coordinate fields, and
differentiates everything with central stencils: Christoffel symbols,
curvature, the Nijenhuis tensor, and the covariant derivative of the
complex structure all come out of first principles here, with no input
from the closed-form engine.  :func:`compare_with_algebraic` transports
the finite-difference tensors into the structure-adapted frame and
reports max-norm deviations from the closed-form model.

Conventions: the ambient complex structure pairs coordinates
``(x_0, x_1), (x_2, x_3), ...``; the Reeb field is minus its action on
the position vector, which makes ``nabla_X xi = -phi X`` hold with the
signs used across the package.  The exterior derivative of a 1-form is
taken with the factor one-half, ``d eta(X, Y) = (X eta(Y) - Y eta(X)) / 2``
for commuting fields, under which the contact identity
``d eta(X, Y) = g(X, phi Y)`` holds on the unit sphere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ChartDomainError, InvalidParameterError
from .product import HermitianParams, ProductHermitianModel
from .tensors import adapted_frame

# Numerical domain guard: beyond this radius the conformal factor is so
# small that stencil arithmetic loses all significant digits.
_MAX_CHART_RADIUS = 1.0e6


# ---------------------------------------------------------------------------
# stencil differentiation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StencilConfig:
    """Central-difference configuration for all field derivatives."""

    step: float = 1e-3
    order: int = 4
    richardson: bool = True

    def __post_init__(self):
        if self.step <= 0.0:
            raise InvalidParameterError(f"stencil step must be positive, got {self.step}")
        if self.order not in (2, 4):
            raise InvalidParameterError(f"stencil order must be 2 or 4, got {self.order}")


def _central(f: Callable, u: np.ndarray, axis: int, h: float, order: int) -> np.ndarray:
    e = np.zeros_like(u)
    e[axis] = h
    if order == 2:
        return (np.asarray(f(u + e)) - np.asarray(f(u - e))) / (2.0 * h)
    return (
        -np.asarray(f(u + 2.0 * e))
        + 8.0 * np.asarray(f(u + e))
        - 8.0 * np.asarray(f(u - e))
        + np.asarray(f(u - 2.0 * e))
    ) / (12.0 * h)


def partial_derivatives(f: Callable, u: np.ndarray, cfg: StencilConfig) -> np.ndarray:
    """All first partials of an array-valued field.

    Returns ``out[i] = d f / d u_i``; with ``richardson`` the stencil is
    evaluated at ``h`` and ``h/2`` and extrapolated one order higher.
    """
    u = np.asarray(u, dtype=float)
    f0 = np.asarray(f(u))
    out = np.zeros((u.size,) + f0.shape)
    gain = 2.0 ** cfg.order
    for i in range(u.size):
        d1 = _central(f, u, i, cfg.step, cfg.order)
        if cfg.richardson:
            d2 = _central(f, u, i, cfg.step / 2.0, cfg.order)
            out[i] = (gain * d2 - d1) / (gain - 1.0)
        else:
            out[i] = d1
    return out


# ---------------------------------------------------------------------------
# stereographic charts and Sasakian fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SphereChart:
    """Stereographic chart of the unit sphere in an even ambient dimension.

    ``pole`` (default: the last coordinate axis) is where the chart
    origin lands; ``direction=-1`` picks the antipodal chart.  The
    chart covers the whole sphere except the point opposite the origin
    image, which sits at infinite chart radius.
    """

    ambient_dim: int
    pole: np.ndarray | None = None
    direction: int = 1

    def __post_init__(self):
        if self.ambient_dim % 2 != 0 or self.ambient_dim < 4:
            raise InvalidParameterError(
                f"ambient dimension must be even and >= 4, got {self.ambient_dim}"
            )
        if self.direction not in (1, -1):
            raise InvalidParameterError(f"direction must be +1 or -1, got {self.direction}")
        if self.pole is not None:
            pole = np.asarray(self.pole, dtype=float)
            if pole.shape != (self.ambient_dim,) or abs(pole @ pole - 1.0) > 1e-12:
                raise InvalidParameterError("pole must be a unit ambient vector")
            pole = np.ascontiguousarray(pole)
            pole.setflags(write=False)
            object.__setattr__(self, "pole", pole)

    @property
    def dim(self) -> int:
        return self.ambient_dim - 1


def _check_coords(chart: SphereChart, u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (chart.dim,):
        raise ChartDomainError(f"expected {chart.dim} coordinates, got shape {u.shape}")
    if not np.all(np.isfinite(u)) or float(u @ u) > _MAX_CHART_RADIUS**2:
        raise ChartDomainError("coordinates too close to the projection singularity")
    return u


def _ambient_rotation(chart: SphereChart) -> np.ndarray:
    """Orthogonal map sending the last axis to the chart pole (Householder)."""
    n = chart.ambient_dim
    if chart.pole is None:
        return np.eye(n)
    last = np.zeros(n)
    last[-1] = 1.0
    v = last - chart.pole
    vv = float(v @ v)
    if vv < 1e-30:
        return np.eye(n)
    return np.eye(n) - 2.0 * np.outer(v, v) / vv


def embed(chart: SphereChart, u: np.ndarray) -> np.ndarray:
    """Chart point mapped onto the unit sphere in ambient coordinates."""
    u = _check_coords(chart, u)
    r2 = float(u @ u)
    raw = np.concatenate([2.0 * u, [chart.direction * (1.0 - r2)]]) / (1.0 + r2)
    return _ambient_rotation(chart) @ raw


def embed_jacobian(chart: SphereChart, u: np.ndarray) -> np.ndarray:
    """Analytic Jacobian of :func:`embed`, shape (ambient_dim, dim)."""
    u = _check_coords(chart, u)
    n = chart.dim
    r2 = float(u @ u)
    s = 1.0 + r2
    jac = np.zeros((n + 1, n))
    jac[:n, :] = 2.0 * np.eye(n) / s - 4.0 * np.outer(u, u) / s**2
    jac[n, :] = -4.0 * chart.direction * u / s**2
    return _ambient_rotation(chart) @ jac


def pullback_round_metric(chart: SphereChart, u: np.ndarray) -> np.ndarray:
    """Round metric in stereographic coordinates: ``(2 / (1 + |u|^2))^2 I``."""
    u = _check_coords(chart, u)
    factor = 2.0 / (1.0 + float(u @ u))
    return factor * factor * np.eye(chart.dim)


def _ambient_complex_structure(ambient_dim: int) -> np.ndarray:
    j0 = np.zeros((ambient_dim, ambient_dim))
    for k in range(ambient_dim // 2):
        j0[2 * k + 1, 2 * k] = 1.0
        j0[2 * k, 2 * k + 1] = -1.0
    return j0


@dataclass(frozen=True)
class SasakianChartFields:
    """Pointwise Sasakian data in chart coordinates."""

    metric: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    phi: np.ndarray


def canonical_sasakian_fields(chart: SphereChart, u: np.ndarray) -> SasakianChartFields:
    """Canonical Sasakian structure of the unit sphere at a chart point.

    The Reeb field is minus the ambient complex structure applied to
    the position; ``phi`` is the tangential projection of the ambient
    complex structure; ``eta`` is the metric dual of the Reeb field.
    """
    u = _check_coords(chart, u)
    x = embed(chart, u)
    jac = embed_jacobian(chart, u)
    metric = pullback_round_metric(chart, u)
    j0 = _ambient_complex_structure(chart.ambient_dim)
    xi_ambient = -(j0 @ x)
    eta = jac.T @ xi_ambient
    xi = np.linalg.solve(metric, eta)
    phi = np.linalg.solve(metric, jac.T @ (j0 @ jac))
    return SasakianChartFields(metric=metric, xi=xi, eta=eta, phi=phi)


@dataclass(frozen=True)
class FactorChart:
    """A sphere chart together with a D-homothetic deformation parameter.

    ``alpha = 1`` is the round structure; other values produce the
    Sasakian space form with ``c = 4 / alpha - 3`` as honest coordinate
    fields, deformed pointwise from the canonical ones.
    """

    chart: SphereChart
    alpha: float = 1.0

    def __post_init__(self):
        if self.alpha <= 0.0:
            raise InvalidParameterError(f"deformation parameter must be positive, got {self.alpha}")

    @property
    def dim(self) -> int:
        return self.chart.dim

    def fields(self, u: np.ndarray) -> SasakianChartFields:
        raw = canonical_sasakian_fields(self.chart, u)
        if self.alpha == 1.0:
            return raw
        a = self.alpha
        metric = a * raw.metric + a * (a - 1.0) * np.outer(raw.eta, raw.eta)
        return SasakianChartFields(
            metric=metric, xi=raw.xi / a, eta=a * raw.eta, phi=raw.phi
        )

    def metric_at(self, u: np.ndarray) -> np.ndarray:
        """Metric field value without the phi/xi solves (stencil fast path)."""
        u = _check_coords(self.chart, u)
        metric = pullback_round_metric(self.chart, u)
        if self.alpha == 1.0:
            return metric
        x = embed(self.chart, u)
        jac = embed_jacobian(self.chart, u)
        j0 = _ambient_complex_structure(self.chart.ambient_dim)
        eta = jac.T @ (-(j0 @ x))
        a = self.alpha
        return a * metric + a * (a - 1.0) * np.outer(eta, eta)

    def metric_field(self) -> Callable[[np.ndarray], np.ndarray]:
        return self.metric_at


# ---------------------------------------------------------------------------
# finite-difference geometry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSample:
    """Everything the stencils produce for one metric field at one point."""

    coords: np.ndarray
    metric: np.ndarray
    metric_derivs: np.ndarray
    christoffels: np.ndarray
    curvature: np.ndarray


def christoffels_first_kind_fd(
    metric_field: Callable, u: np.ndarray, cfg: StencilConfig
) -> np.ndarray:
    """``Gamma_{ij,k} = (d_i g_jk + d_j g_ik - d_k g_ij) / 2`` by stencils."""
    dg = partial_derivatives(metric_field, u, cfg)
    return 0.5 * (
        np.einsum("ijk->ijk", dg) + np.einsum("jik->ijk", dg) - np.einsum("kij->ijk", dg)
    )


def christoffels_fd(metric_field: Callable, u: np.ndarray, cfg: StencilConfig) -> np.ndarray:
    """Second-kind symbols ``Gamma^k_{ij}``, indexed ``[k, i, j]``."""
    first = christoffels_first_kind_fd(metric_field, u, cfg)
    ginv = np.linalg.inv(metric_field(u))
    return np.einsum("kl,ijl->kij", ginv, first)


def riemann_fd(metric_field: Callable, u: np.ndarray, cfg: StencilConfig) -> np.ndarray:
    """Fully covariant curvature of a metric field by nested stencils.

    Returns ``R[i, j, k, l] = g(R(d_i, d_j) d_k, d_l)`` in the package
    sign convention; the unit sphere comes out with sectional curvature
    plus one.
    """
    u = np.asarray(u, dtype=float)
    gamma_field = lambda v: christoffels_fd(metric_field, v, cfg)
    gamma = gamma_field(u)
    dgamma = partial_derivatives(gamma_field, u, cfg)  # [d, m, j, k] = d_d Gamma^m_{jk}
    r_up = (
        np.einsum("imjk->mijk", dgamma)
        - np.einsum("jmik->mijk", dgamma)
        + np.einsum("mil,ljk->mijk", gamma, gamma)
        - np.einsum("mjl,lik->mijk", gamma, gamma)
    )
    return np.einsum("lm,mijk->ijkl", metric_field(u), r_up)


def ricci_fd(metric_field: Callable, u: np.ndarray, cfg: StencilConfig) -> np.ndarray:
    """Ricci form of a metric field: coordinate trace of :func:`riemann_fd`."""
    r4 = riemann_fd(metric_field, u, cfg)
    ginv = np.linalg.inv(metric_field(u))
    return np.einsum("il,ijkl->jk", ginv, r4)


def field_sample(metric_field: Callable, u: np.ndarray, cfg: StencilConfig) -> FieldSample:
    """Bundle metric, derivatives, symbols, and curvature at one point."""
    u = np.asarray(u, dtype=float)
    return FieldSample(
        coords=u,
        metric=np.asarray(metric_field(u), dtype=float),
        metric_derivs=partial_derivatives(metric_field, u, cfg),
        christoffels=christoffels_fd(metric_field, u, cfg),
        curvature=riemann_fd(metric_field, u, cfg),
    )


def nijenhuis_fd(j_field: Callable, u: np.ndarray, cfg: StencilConfig) -> np.ndarray:
    """Nijenhuis tensor of an almost complex structure field.

    For coordinate fields the brackets reduce to derivatives of the
    structure matrix:
    ``N^m_{ij} = J^k_i d_k J^m_j - J^k_j d_k J^m_i
    + J^m_k d_j J^k_i - J^m_k d_i J^k_j``.
    Vanishing of the result (to stencil accuracy) certifies
    integrability from first principles.
    """
    j = np.asarray(j_field(u), dtype=float)
    dj = partial_derivatives(j_field, u, cfg)  # [d, m, j] = d_d J^m_j
    return (
        np.einsum("ki,kmj->mij", j, dj)
        - np.einsum("kj,kmi->mij", j, dj)
        + np.einsum("mk,jki->mij", j, dj)
        - np.einsum("mk,ikj->mij", j, dj)
    )


# ---------------------------------------------------------------------------
# product structure as coordinate fields
# ---------------------------------------------------------------------------


def product_field_functions(
    factor_chart: FactorChart,
    factor_chart_prime: FactorChart,
    params: HermitianParams,
) -> tuple[Callable, Callable]:
    """Coordinate-field closures ``(g_bar(u), J_bar(u))`` on the product chart."""
    m = factor_chart.dim
    a, b = params.a, params.b

    def metric_fn(u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        f1 = factor_chart.fields(u[:m])
        f2 = factor_chart_prime.fields(u[m:])
        dim = m + factor_chart_prime.dim
        g_bar = np.zeros((dim, dim))
        g_bar[:m, :m] = f1.metric
        g_bar[m:, m:] = f2.metric + (a * a + b * b - 1.0) * np.outer(f2.eta, f2.eta)
        mixed = a * np.outer(f1.eta, f2.eta)
        g_bar[:m, m:] = mixed
        g_bar[m:, :m] = mixed.T
        return g_bar

    def j_fn(u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        f1 = factor_chart.fields(u[:m])
        f2 = factor_chart_prime.fields(u[m:])
        dim = m + factor_chart_prime.dim
        j = np.zeros((dim, dim))
        j[:m, :m] = f1.phi - (a / b) * np.outer(f1.xi, f1.eta)
        j[m:, :m] = (1.0 / b) * np.outer(f2.xi, f1.eta)
        j[:m, m:] = -((a * a + b * b) / b) * np.outer(f1.xi, f2.eta)
        j[m:, m:] = f2.phi + (a / b) * np.outer(f2.xi, f2.eta)
        return j

    return metric_fn, j_fn


def product_structure_fields(
    factor_chart: FactorChart,
    factor_chart_prime: FactorChart,
    params: HermitianParams,
    coords: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Point values of the product metric and complex structure fields."""
    metric_fn, j_fn = product_field_functions(factor_chart, factor_chart_prime, params)
    return metric_fn(coords), j_fn(coords)


def sample_chart_points(
    rng: np.random.Generator, dim: int, radius: float = 0.8, count: int = 1
) -> np.ndarray:
    """Uniform sample points in a chart ball, rows are points."""
    directions = rng.normal(size=(count, dim))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = radius * rng.uniform(size=(count, 1)) ** (1.0 / dim)
    return directions * radii


# ---------------------------------------------------------------------------
# comparison against the closed-form engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OracleComparison:
    """Max-norm deviations between stencil tensors and the closed-form model.

    Curvature-level quantities (``riemann``, ``ricci``, ``ricci_star``)
    carry two stencil applications; the connection blocks, the covariant
    derivative of the complex structure, and the integrability residual
    carry one.
    """

    riemann: float
    ricci: float
    ricci_star: float
    connection: float
    nabla_j: float
    integrability: float

    def as_dict(self) -> dict[str, float]:
        return {
            "riemann": self.riemann,
            "ricci": self.ricci,
            "ricci_star": self.ricci_star,
            "connection": self.connection,
            "nabla_j": self.nabla_j,
            "integrability": self.integrability,
        }


def _product_adapted_frame(
    factor_chart: FactorChart, factor_chart_prime: FactorChart, coords: np.ndarray
) -> np.ndarray:
    """Block frame matching the closed-form basis ordering at a chart point."""
    m = factor_chart.dim
    f1 = factor_chart.fields(coords[:m])
    f2 = factor_chart_prime.fields(coords[m:])
    frame1 = adapted_frame(f1.metric, f1.phi, f1.xi)
    frame2 = adapted_frame(f2.metric, f2.phi, f2.xi)
    dim = m + factor_chart_prime.dim
    frame = np.zeros((dim, dim))
    frame[:m, :m] = frame1
    frame[m:, m:] = frame2
    return frame


def _connection_block_prediction(
    factor_chart: FactorChart,
    factor_chart_prime: FactorChart,
    params: HermitianParams,
    coords: np.ndarray,
    cfg: StencilConfig,
) -> np.ndarray:
    """First-kind product symbols predicted from factor data alone.

    Every block of ``g_bar(nabla_X Y, Z)`` for coordinate fields drawn
    from the factors reduces to factor Christoffel symbols, Reeb
    covectors, and ``g(phi ., .)`` pairings; this assembles that
    prediction so the stencil symbols of the product metric can be
    checked against it.
    """
    a, b = params.a, params.b
    m = factor_chart.dim
    mp = factor_chart_prime.dim
    dim = m + mp
    f1 = factor_chart.fields(coords[:m])
    f2 = factor_chart_prime.fields(coords[m:])
    gamma1 = christoffels_first_kind_fd(factor_chart.metric_field(), coords[:m], cfg)
    gamma2 = christoffels_first_kind_fd(factor_chart_prime.metric_field(), coords[m:], cfg)
    # eta(nabla_X Y) = xi^k Gamma_{ij,k}
    reeb_of_nabla1 = np.einsum("ijk,k->ij", gamma1, f1.xi)
    reeb_of_nabla2 = np.einsum("ijk,k->ij", gamma2, f2.xi)
    gphi1 = f1.phi.T @ f1.metric
    gphi2 = f2.phi.T @ f2.metric
    k = a * a + b * b - 1.0

    pred = np.zeros((dim, dim, dim))
    s1, s2 = slice(0, m), slice(m, dim)
    pred[s1, s1, s1] = gamma1
    pred[s2, s1, s1] = -a * np.einsum("x,yz->xyz", f2.eta, gphi1)
    pred[s1, s2, s1] = -a * np.einsum("y,xz->xyz", f2.eta, gphi1)
    pred[s1, s1, s2] = a * np.einsum("xy,z->xyz", reeb_of_nabla1, f2.eta)
    pred[s2, s2, s1] = a * np.einsum("xy,z->xyz", reeb_of_nabla2, f1.eta)
    pred[s2, s1, s2] = -a * np.einsum("y,xz->xyz", f1.eta, gphi2)
    pred[s1, s2, s2] = -a * np.einsum("x,yz->xyz", f1.eta, gphi2)
    pred[s2, s2, s2] = gamma2 + k * (
        np.einsum("xy,z->xyz", reeb_of_nabla2, f2.eta)
        - np.einsum("x,yz->xyz", f2.eta, gphi2)
        - np.einsum("y,xz->xyz", f2.eta, gphi2)
    )
    return pred


def compare_with_algebraic(
    factor_chart: FactorChart,
    factor_chart_prime: FactorChart,
    params: HermitianParams,
    model: ProductHermitianModel,
    coords: np.ndarray,
    cfg: StencilConfig | None = None,
) -> OracleComparison:
    """Stencil-differentiate the product fields and compare to the model.

    The curvature, Ricci, star-Ricci, and covariant derivative of the
    complex structure are transported into the structure-adapted frame
    at the chart point, where homogeneity makes them directly
    comparable entry-by-entry with the closed-form tensors.  Connection
    blocks and the integrability residual are checked in coordinates.
    """
    cfg = cfg or StencilConfig()
    coords = np.asarray(coords, dtype=float)
    metric_fn, j_fn = product_field_functions(factor_chart, factor_chart_prime, params)

    g_bar = metric_fn(coords)
    j_bar = j_fn(coords)
    ginv = np.linalg.inv(g_bar)

    r4 = riemann_fd(metric_fn, coords, cfg)
    ricci = np.einsum("il,ijkl->jk", ginv, r4)
    ricci_star = np.einsum("kl,mk,ny,xmnl->xy", ginv, j_bar, j_bar, r4)

    gamma_first = christoffels_first_kind_fd(metric_fn, coords, cfg)
    gamma = np.einsum("kl,ijl->kij", ginv, gamma_first)
    dj = partial_derivatives(j_fn, coords, cfg)
    nabla_j = (
        np.einsum("zm,xmy->xyz", g_bar, dj)
        + np.einsum("my,xmz->xyz", j_bar, gamma_first)
        - np.einsum("zm,ml,lxy->xyz", g_bar, j_bar, gamma)
    )
    twisted = np.einsum("ux,vy,uvz->xyz", j_bar, j_bar, nabla_j)
    integrability = float(np.abs(nabla_j - twisted).max())

    frame = _product_adapted_frame(factor_chart, factor_chart_prime, coords)
    r4_frame = np.einsum("ia,jb,kc,ld,ijkl->abcd", frame, frame, frame, frame, r4)
    ricci_frame = frame.T @ ricci @ frame
    ricci_star_frame = frame.T @ ricci_star @ frame
    nabla_j_frame = np.einsum("ia,jb,kc,ijk->abc", frame, frame, frame, nabla_j)

    prediction = _connection_block_prediction(
        factor_chart, factor_chart_prime, params, coords, cfg
    )
    return OracleComparison(
        riemann=float(np.abs(r4_frame - model.riemann_bar).max()),
        ricci=float(np.abs(ricci_frame - model.ricci_bar).max()),
        ricci_star=float(np.abs(ricci_star_frame - model.ricci_star_bar).max()),
        connection=float(np.abs(gamma_first - prediction).max()),
        nabla_j=float(np.abs(nabla_j_frame - model.nabla_j).max()),
        integrability=integrability,
    )
