"""Dense pointwise tensor algebra over a single tangent space.

All objects are plain numpy float arrays expressed in a fixed frame:
vectors and covectors have shape ``(n,)``, bilinear forms and
endomorphisms ``(n, n)``, and fully covariant rank-4 tensors
``(n, n, n, n)`` with index order ``T[x, y, z, w]``.  Curvature-role
tensors follow the sign convention ``R(X, Y, Z, W) = <R(X, Y)Z, W>``
with ``R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y]``.
"""

from __future__ import annotations

import numpy as np

from .errors import IndefiniteMetricError, SingularMetricError

# Closed-form algebra is expected to hold to this precision; wider,
# configurable tolerances apply only to finite-difference comparisons.
ALGEBRAIC_TOL = 1e-12


def symmetrize(form: np.ndarray) -> np.ndarray:
    """Exactly symmetric part of a square matrix."""
    return 0.5 * (form + form.T)


def require_spd(metric: np.ndarray, name: str = "metric") -> None:
    """Raise unless ``metric`` is symmetric positive definite.

    Distinguishes a numerically singular metric from an indefinite one
    so callers can report the right failure.
    """
    m = np.asarray(metric, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise SingularMetricError(f"{name} must be square, got shape {m.shape}")
    if not np.allclose(m, m.T, rtol=0.0, atol=1e-10 * max(1.0, np.abs(m).max())):
        raise SingularMetricError(f"{name} is not symmetric")
    eigvals = np.linalg.eigvalsh(symmetrize(m))
    scale = max(1.0, float(np.abs(eigvals).max()))
    if eigvals.min() < -1e-10 * scale:
        raise IndefiniteMetricError(f"{name} is indefinite (min eigenvalue {eigvals.min():g})")
    if eigvals.min() <= 1e-13 * scale:
        raise SingularMetricError(f"{name} is singular (min eigenvalue {eigvals.min():g})")


def contract_trace(
    tensor: np.ndarray, metric: np.ndarray, slots: tuple[int, int] = (1, 2)
) -> np.ndarray:
    """Metric trace of a rank-4 tensor over two of its slots.

    Equivalent to feeding both named slots the vectors of any
    ``metric``-orthonormal frame and summing; the remaining two slots
    keep their original order.  The default ``slots=(1, 2)`` turns a
    curvature tensor into its Ricci form.
    """
    t = np.asarray(tensor, dtype=float)
    if t.ndim != 4:
        raise ValueError(f"expected a rank-4 tensor, got ndim={t.ndim}")
    i, j = slots
    if i == j or not all(0 <= k < 4 for k in (i, j)):
        raise ValueError(f"slots must be two distinct indices in 0..3, got {slots}")
    require_spd(metric)
    ginv = np.linalg.inv(metric)
    subs = list("abcd")
    subs[i] = "i"
    subs[j] = "j"
    out = "".join(s for s in subs if s not in "ij")
    return np.einsum(f"ij,{''.join(subs)}->{out}", ginv, t)


def orthonormal_frame(metric: np.ndarray) -> np.ndarray:
    """Gram-Schmidt the standard basis into a metric-orthonormal frame.

    Returns a matrix ``F`` whose columns are the frame vectors, so that
    ``F.T @ metric @ F`` is the identity.  Raises if the metric is not
    symmetric positive definite (Gram-Schmidt certifies definiteness on
    the way: every pivot norm must be strictly positive).
    """
    g = np.asarray(metric, dtype=float)
    n = g.shape[0]
    if g.shape != (n, n):
        raise SingularMetricError(f"metric must be square, got shape {g.shape}")
    if not np.allclose(g, g.T, rtol=0.0, atol=1e-10 * max(1.0, np.abs(g).max())):
        raise SingularMetricError("metric is not symmetric")
    scale = max(1.0, float(np.abs(g).max()))
    cols = []
    for k in range(n):
        v = np.zeros(n)
        v[k] = 1.0
        for w in cols:
            v = v - (w @ g @ v) * w
        norm2 = float(v @ g @ v)
        if norm2 < -1e-10 * scale:
            raise IndefiniteMetricError(f"metric is indefinite (pivot {k} has norm^2 {norm2:g})")
        if norm2 <= 1e-13 * scale:
            raise SingularMetricError(f"metric is singular (pivot {k} has norm^2 {norm2:g})")
        cols.append(v / np.sqrt(norm2))
    return np.column_stack(cols)


def adapted_frame(metric: np.ndarray, phi: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """Structure-adapted orthonormal frame for an almost contact metric triple.

    Returns a matrix whose columns are ``[v_1, phi v_1, ..., v_n, phi v_n, xi^]``
    where ``xi^`` is the normalized Reeb vector and each pair spans a
    phi-invariant plane orthogonal to everything built before it.  Relies
    on the compatibility ``g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)``,
    which makes ``phi v`` automatically unit and orthogonal to the
    previously accepted vectors.
    """
    g = np.asarray(metric, dtype=float)
    n = g.shape[0]
    if n % 2 == 0:
        raise ValueError(f"adapted frames need odd dimension, got {n}")
    xi_norm2 = float(xi @ g @ xi)
    if xi_norm2 <= 0.0:
        raise IndefiniteMetricError("Reeb vector has nonpositive norm")
    xi_hat = xi / np.sqrt(xi_norm2)
    cols: list[np.ndarray] = []

    def reject(v: np.ndarray) -> np.ndarray:
        v = v - (xi_hat @ g @ v) * xi_hat
        for w in cols:
            v = v - (w @ g @ v) * w
        return v

    k = 0
    while len(cols) < n - 1:
        if k >= n:
            raise SingularMetricError("could not complete an adapted frame")
        v = reject(np.eye(n)[:, k])
        k += 1
        norm2 = float(v @ g @ v)
        if norm2 <= 1e-12:
            continue
        v = v / np.sqrt(norm2)
        cols.append(v)
        w = reject(phi @ v)
        w_norm2 = float(w @ g @ w)
        if w_norm2 <= 1e-12:
            raise SingularMetricError("phi-partner of a frame vector degenerated")
        cols.append(w / np.sqrt(w_norm2))
    cols.append(xi_hat)
    return np.column_stack(cols)


def raise_index(form: np.ndarray, metric: np.ndarray) -> np.ndarray:
    """Endomorphism ``Q`` with ``metric(Q X, Y) = form(X, Y)`` for all X, Y."""
    require_spd(metric)
    f = np.asarray(form, dtype=float)
    return np.linalg.solve(metric, f.T)


def curvature_symmetry_residuals(tensor: np.ndarray) -> dict[str, float]:
    """Max-norm residuals of the four algebraic curvature symmetries.

    Checks antisymmetry in the first and second index pairs, symmetry
    under exchange of the pairs, and the first Bianchi identity.
    """
    t = np.asarray(tensor, dtype=float)
    return {
        "first_pair_antisymmetry": float(np.abs(t + np.einsum("yxzw->xyzw", t)).max()),
        "second_pair_antisymmetry": float(np.abs(t + np.einsum("xywz->xyzw", t)).max()),
        "pair_symmetry": float(np.abs(t - np.einsum("zwxy->xyzw", t)).max()),
        "first_bianchi": float(
            np.abs(t + np.einsum("yzxw->xyzw", t) + np.einsum("zxyw->xyzw", t)).max()
        ),
    }


def star_ricci_from_curvature(
    tensor: np.ndarray, j: np.ndarray, metric: np.ndarray
) -> np.ndarray:
    """Star-Ricci form from its trace definition.

    Computes ``rho*(X, Y) = tr(Z -> R(X, J Z) J Y)`` directly from the
    covariant curvature tensor; serves as the independent cross-check of
    any closed-form star-Ricci expression.
    """
    require_spd(metric)
    ginv = np.linalg.inv(metric)
    return np.einsum("kl,mk,ny,xmnl->xy", ginv, j, j, tensor)


def sectional_curvature(
    tensor: np.ndarray, metric: np.ndarray, x: np.ndarray, y: np.ndarray
) -> float:
    """Sectional curvature of the plane spanned by two vectors."""
    num = float(np.einsum("xyzw,x,y,z,w->", tensor, x, y, y, x))
    den = float((x @ metric @ x) * (y @ metric @ y) - (x @ metric @ y) ** 2)
    if abs(den) < 1e-14:
        raise ValueError("vectors do not span a plane")
    return num / den
