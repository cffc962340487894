"""The manifold of biorthogonal matrix pairs (x, y) with x @ y = I.

Provides the point and tangent types, the tangent-space projection (a
generalized Sylvester solve decoupled by two SVDs), an exponential-map
retraction that is feasible by construction, and the flat product space
used by the penalty baseline. All values are immutable once constructed.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, InvalidTangentError, OffManifoldError, NumericalError
from .linalg import as_matrix, fro_inner, fro_norm, mat_exp, require_same_shape, require_square, svd
from .rng import make_rng

# Rounding in n x n products accumulates roughly linearly in n.
FEAS_TOL_PER_DIM = 1e-9
TAN_TOL_PER_DIM = 1e-9


def default_feas_tol(n: int) -> float:
    return FEAS_TOL_PER_DIM * n


def default_tan_tol(n: int) -> float:
    return TAN_TOL_PER_DIM * n


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=np.float64)
    out.setflags(write=False)
    return out


def _same_point(p, q) -> bool:
    return p is q or (np.array_equal(p.x, q.x) and np.array_equal(p.y, q.y))


def is_on_manifold(x, y, tol) -> tuple[bool, float]:
    """Feasibility test: returns (within tolerance, fro_norm(x @ y - I))."""
    x = require_square(as_matrix(x, "x"), "x")
    y = as_matrix(y, "y")
    require_same_shape(x, y)
    err = fro_norm(x @ y - np.eye(x.shape[0]))
    return err <= tol, err


class BiorthPoint:
    """A pair (x, y) of square matrices with x @ y = I within `feas_tol`.

    Arrays are copied and marked read-only; points are safe to share.
    """

    __slots__ = ("x", "y", "feas_tol")

    def __init__(self, x, y, feas_tol=None):
        x = require_square(as_matrix(x, "x"), "x")
        y = as_matrix(y, "y")
        require_same_shape(x, y)
        n = x.shape[0]
        if feas_tol is None:
            feas_tol = default_feas_tol(n)
        ok, err = is_on_manifold(x, y, feas_tol)
        if not ok:
            raise OffManifoldError(
                f"pair is not biorthogonal: fro_norm(x @ y - I) = {err:.3e} "
                f"exceeds tolerance {feas_tol:.3e}"
            )
        object.__setattr__(self, "x", _frozen(x))
        object.__setattr__(self, "y", _frozen(y))
        object.__setattr__(self, "feas_tol", float(feas_tol))

    def __setattr__(self, name, value):
        raise AttributeError("BiorthPoint is immutable")

    @property
    def n(self) -> int:
        return self.x.shape[0]

    def feasibility_error(self) -> float:
        return fro_norm(self.x @ self.y - np.eye(self.n))

    def __repr__(self):
        return f"BiorthPoint(n={self.n}, feas_err={self.feasibility_error():.2e})"


def identity_point(n: int, feas_tol=None) -> BiorthPoint:
    return BiorthPoint(np.eye(n), np.eye(n), feas_tol=feas_tol)


class TangentPair:
    """Tangent vector (u, v) at `base`: base.x @ v + u @ base.y = 0.

    The base point is stored so that cross-base arithmetic is rejected
    instead of silently re-projected. Linear combinations of tangents at
    the same base stay tangent and are supported through `+`, `-` and
    scalar `*`.
    """

    __slots__ = ("u", "v", "base")

    def __init__(self, u, v, base: BiorthPoint, tan_tol=None):
        u = require_square(as_matrix(u, "u"), "u")
        v = as_matrix(v, "v")
        require_same_shape(u, v)
        if u.shape != base.x.shape:
            raise DimensionError(
                f"tangent shape {u.shape} does not match base point n={base.n}"
            )
        if tan_tol is None:
            tan_tol = default_tan_tol(base.n)
        resid = fro_norm(base.x @ v + u @ base.y)
        if resid > tan_tol:
            raise InvalidTangentError(
                f"pair is not tangent at the base point: fro_norm(x0 @ v + u @ y0) "
                f"= {resid:.3e} exceeds tolerance {tan_tol:.3e}"
            )
        object.__setattr__(self, "u", _frozen(u))
        object.__setattr__(self, "v", _frozen(v))
        object.__setattr__(self, "base", base)

    def __setattr__(self, name, value):
        raise AttributeError("TangentPair is immutable")

    def norm(self) -> float:
        return float(np.sqrt(fro_inner(self.u, self.u) + fro_inner(self.v, self.v)))

    def as_ambient(self) -> "AmbientPair":
        return AmbientPair(self.u, self.v)

    def _require_same_base(self, other):
        if not _same_point(self.base, other.base):
            raise InvalidTangentError("tangent vectors have different base points")

    def __add__(self, other):
        self._require_same_base(other)
        return TangentPair(self.u + other.u, self.v + other.v, self.base)

    def __sub__(self, other):
        self._require_same_base(other)
        return TangentPair(self.u - other.u, self.v - other.v, self.base)

    def __neg__(self):
        return TangentPair(-self.u, -self.v, self.base)

    def __mul__(self, s):
        s = float(s)
        return TangentPair(s * self.u, s * self.v, self.base)

    __rmul__ = __mul__

    def __repr__(self):
        return f"TangentPair(n={self.base.n}, norm={self.norm():.2e})"


class AmbientPair:
    """An unconstrained pair (phi, psi) of square matrices of equal size.

    Carrier for Euclidean gradients and for projection inputs; also the
    tangent type of the flat product space. Supports the same linear
    arithmetic as TangentPair.
    """

    __slots__ = ("phi", "psi")

    def __init__(self, phi, psi):
        phi = require_square(as_matrix(phi, "phi"), "phi")
        psi = as_matrix(psi, "psi")
        require_same_shape(phi, psi)
        object.__setattr__(self, "phi", _frozen(phi))
        object.__setattr__(self, "psi", _frozen(psi))

    def __setattr__(self, name, value):
        raise AttributeError("AmbientPair is immutable")

    @property
    def n(self) -> int:
        return self.phi.shape[0]

    def norm(self) -> float:
        return float(np.sqrt(fro_inner(self.phi, self.phi) + fro_inner(self.psi, self.psi)))

    def __add__(self, other):
        return AmbientPair(self.phi + other.phi, self.psi + other.psi)

    def __sub__(self, other):
        return AmbientPair(self.phi - other.phi, self.psi - other.psi)

    def __neg__(self):
        return AmbientPair(-self.phi, -self.psi)

    def __mul__(self, s):
        s = float(s)
        return AmbientPair(s * self.phi, s * self.psi)

    __rmul__ = __mul__

    def __repr__(self):
        return f"AmbientPair(n={self.n}, norm={self.norm():.2e})"


class EuclideanPoint:
    """Unconstrained point (x, y) in the flat product space of matrix pairs."""

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        x = require_square(as_matrix(x, "x"), "x")
        y = as_matrix(y, "y")
        require_same_shape(x, y)
        object.__setattr__(self, "x", _frozen(x))
        object.__setattr__(self, "y", _frozen(y))

    def __setattr__(self, name, value):
        raise AttributeError("EuclideanPoint is immutable")

    @property
    def n(self) -> int:
        return self.x.shape[0]

    def __repr__(self):
        return f"EuclideanPoint(n={self.n})"


def pair_product(a, b):
    """Group product (a1, a2) * (b1, b2) = (a1 @ b1, b2 @ a2).

    Note the reversed order in the second component. Accepts BiorthPoints
    or plain (x, y) tuples; returns a BiorthPoint when both inputs are
    BiorthPoints (the product of biorthogonal pairs is biorthogonal).
    """
    a1, a2 = (a.x, a.y) if isinstance(a, BiorthPoint) else (as_matrix(a[0]), as_matrix(a[1]))
    b1, b2 = (b.x, b.y) if isinstance(b, BiorthPoint) else (as_matrix(b[0]), as_matrix(b[1]))
    if a1.shape != b1.shape or a2.shape != b2.shape or a1.shape != a2.shape:
        raise DimensionError(
            f"pair_product operands must share one square shape, got "
            f"{a1.shape}, {a2.shape}, {b1.shape}, {b2.shape}"
        )
    first = a1 @ b1
    second = b2 @ a2
    if isinstance(a, BiorthPoint) and isinstance(b, BiorthPoint):
        return BiorthPoint(first, second, feas_tol=max(a.feas_tol, b.feas_tol))
    return first, second


def pair_inverse(p: BiorthPoint) -> BiorthPoint:
    """Group inverse: swap the two legs."""
    return BiorthPoint(p.y, p.x, feas_tol=p.feas_tol)


def project_tangent(p: BiorthPoint, a: AmbientPair, tan_tol=None) -> TangentPair:
    """Orthogonal projection of an ambient pair onto the tangent space at `p`.

    Returns the minimizer (X, Y) of ``|X - phi|_F^2 + |Y - psi|_F^2`` subject
    to ``x0 @ Y + X @ y0 = 0``. Shifting by (phi, psi) turns the constraint
    into a generalized Sylvester equation

        x0 @ Yt + Xt @ y0 = C,      C = -(x0 @ psi) - (phi @ y0),

    which two SVDs ``x0 = Ux Sx Vx^T`` and ``y0 = Uy Sy Vy^T`` decouple into
    independent scalar problems: with alpha = diag(Sx), beta = diag(Sy) and
    Ch = Ux^T C Vy, the minimum-norm solution of

        alpha_i * Yh_ij + Xh_ij * beta_j = Ch_ij

    is Xh_ij = Ch_ij * beta_j / (alpha_i^2 + beta_j^2) and
    Yh_ij = Ch_ij * alpha_i / (alpha_i^2 + beta_j^2). Rotating back and
    undoing the shift gives the projection. The result is invariant to the
    ordering/sign conventions of the SVD factors.
    """
    if not isinstance(a, AmbientPair):
        a = AmbientPair(*a)
    if a.phi.shape != p.x.shape:
        raise DimensionError(
            f"ambient pair shape {a.phi.shape} does not match point n={p.n}"
        )
    dx = svd(p.x)
    dy = svd(p.y)
    # Singular values are strictly positive for any invertible base pair.
    denom = dx.s[:, None] ** 2 + dy.s[None, :] ** 2
    if denom.min() < 1e-300:
        raise NumericalError(
            "singular base pair: a squared singular value sum underflowed"
        )
    c = -(p.x @ a.psi) - (a.phi @ p.y)
    ch = dx.u.T @ c @ dy.v
    xh = ch * dy.s[None, :] / denom
    yh = ch * dx.s[:, None] / denom
    xt = dx.u @ xh @ dy.u.T
    yt = dx.v @ yh @ dy.v.T
    return TangentPair(a.phi + xt, a.psi + yt, p, tan_tol=tan_tol)


def retract(p: BiorthPoint, t: TangentPair) -> BiorthPoint:
    """Exponential-map retraction of tangent `t` at `p`.

    Translates the tangent to the identity, exponentiates, and translates
    back: with W = y0 @ u the new point is (x0 @ e^W, e^-W @ y0). The
    product of the two legs is x0 @ y0 up to rounding, so feasibility is
    preserved by construction, and the map agrees with (x0 + u, y0 + v) to
    first order.
    """
    if not _same_point(t.base, p):
        raise InvalidTangentError("tangent is based at a different point")
    w = p.y @ t.u
    e = mat_exp(w)
    e_inv = mat_exp(-w)
    return BiorthPoint(p.x @ e, e_inv @ p.y, feas_tol=p.feas_tol)


def metric(p, t1, t2) -> float:
    """Ambient Frobenius inner product of two tangents at the same point."""
    if isinstance(t1, TangentPair) or isinstance(t2, TangentPair):
        if not (isinstance(t1, TangentPair) and isinstance(t2, TangentPair)):
            raise InvalidTangentError("cannot mix tangent and ambient pairs in the metric")
        t1._require_same_base(t2)
        if not _same_point(t1.base, p):
            raise InvalidTangentError("tangents are not based at the given point")
        return fro_inner(t1.u, t2.u) + fro_inner(t1.v, t2.v)
    return fro_inner(t1.phi, t2.phi) + fro_inner(t1.psi, t2.psi)


def random_point(seed, n: int, scale: float, feas_tol=None) -> BiorthPoint:
    """Seeded random point (e^{scale G}, e^{-scale G}) with G standard Gaussian."""
    return _random_point(make_rng(seed), n, scale, feas_tol=feas_tol)


def _random_point(rng, n, scale, feas_tol=None) -> BiorthPoint:
    if n < 1:
        raise DimensionError(f"n must be >= 1, got {n}")
    if scale < 0:
        raise ValueError(f"scale must be >= 0, got {scale}")
    if scale == 0:
        return identity_point(n, feas_tol=feas_tol)
    g = scale * rng.standard_normal((n, n))
    return BiorthPoint(mat_exp(g), mat_exp(-g), feas_tol=feas_tol)


def random_tangent(seed, p: BiorthPoint, scale: float) -> TangentPair:
    """Seeded random tangent at `p`, scaled to norm `scale`.

    Draws Gaussian u and completes it with the unique v = -y0 @ u @ y0
    satisfying the tangent constraint at a feasible base point.
    """
    return _random_tangent(make_rng(seed), p, scale)


def _random_tangent(rng, p, scale) -> TangentPair:
    if scale < 0:
        raise ValueError(f"scale must be >= 0, got {scale}")
    n = p.n
    if scale == 0:
        z = np.zeros((n, n))
        return TangentPair(z, z, p)
    u = rng.standard_normal((n, n))
    v = -(p.y @ u @ p.y)
    nrm = np.sqrt(np.sum(u * u) + np.sum(v * v))
    s = scale / nrm
    return TangentPair(s * u, s * v, p)


class BiorthogonalManifold:
    """Manifold interface bundle for pairs (x, y) with x @ y = I."""

    def __init__(self, n: int, feas_tol=None, tan_tol=None):
        if n < 1:
            raise DimensionError(f"n must be >= 1, got {n}")
        self.n = n
        self.feas_tol = default_feas_tol(n) if feas_tol is None else float(feas_tol)
        self.tan_tol = default_tan_tol(n) if tan_tol is None else float(tan_tol)

    @property
    def dim(self) -> int:
        return self.n * self.n

    def check_point(self, p):
        ok, err = is_on_manifold(p.x, p.y, self.feas_tol)
        if not ok:
            raise OffManifoldError(
                f"point violates feasibility: {err:.3e} > {self.feas_tol:.3e}"
            )

    def identity(self) -> BiorthPoint:
        return identity_point(self.n, feas_tol=self.feas_tol)

    def project(self, p, a) -> TangentPair:
        return project_tangent(p, a, tan_tol=self.tan_tol)

    def retract(self, p, t) -> BiorthPoint:
        return retract(p, t)

    def metric(self, p, t1, t2) -> float:
        return metric(p, t1, t2)

    def transport(self, p, t) -> TangentPair:
        """Carry a tangent to the tangent space at `p` by projection."""
        return self.project(p, t.as_ambient())

    def random_point(self, seed, scale=0.5) -> BiorthPoint:
        return random_point(seed, self.n, scale, feas_tol=self.feas_tol)

    def random_tangent(self, seed, p, scale=1.0) -> TangentPair:
        return random_tangent(seed, p, scale)

    def feasibility_error(self, p) -> float:
        return is_on_manifold(p.x, p.y, np.inf)[1]

    def zero_tangent(self, p) -> TangentPair:
        z = np.zeros((self.n, self.n))
        return TangentPair(z, z, p)


class EuclideanManifold:
    """The flat product space of matrix pairs, used by the penalty baseline.

    Projection is the identity, retraction is addition, and the metric is
    the ambient Frobenius inner product. `feasibility_error` still reports
    fro_norm(x @ y - I) as a diagnostic; nothing enforces it.
    """

    def __init__(self, n: int):
        if n < 1:
            raise DimensionError(f"n must be >= 1, got {n}")
        self.n = n

    @property
    def dim(self) -> int:
        return 2 * self.n * self.n

    def check_point(self, p):
        pass

    def identity(self) -> EuclideanPoint:
        return EuclideanPoint(np.eye(self.n), np.eye(self.n))

    def project(self, p, a) -> AmbientPair:
        if not isinstance(a, AmbientPair):
            a = AmbientPair(*a)
        return a

    def retract(self, p, t) -> EuclideanPoint:
        return EuclideanPoint(p.x + t.phi, p.y + t.psi)

    def metric(self, p, t1, t2) -> float:
        return fro_inner(t1.phi, t2.phi) + fro_inner(t1.psi, t2.psi)

    def transport(self, p, t) -> AmbientPair:
        return t

    def random_point(self, seed, scale=0.5) -> EuclideanPoint:
        rng = make_rng(seed)
        n = self.n
        return EuclideanPoint(
            np.eye(n) + scale * rng.standard_normal((n, n)),
            np.eye(n) + scale * rng.standard_normal((n, n)),
        )

    def random_tangent(self, seed, p, scale=1.0) -> AmbientPair:
        if scale < 0:
            raise ValueError(f"scale must be >= 0, got {scale}")
        n = self.n
        if scale == 0:
            return self.zero_tangent(p)
        rng = make_rng(seed)
        t = AmbientPair(rng.standard_normal((n, n)), rng.standard_normal((n, n)))
        return (scale / t.norm()) * t

    def feasibility_error(self, p) -> float:
        return is_on_manifold(p.x, p.y, np.inf)[1]

    def zero_tangent(self, p) -> AmbientPair:
        z = np.zeros((self.n, self.n))
        return AmbientPair(z, z)
