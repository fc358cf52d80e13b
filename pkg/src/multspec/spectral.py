"""Spectral samples, distribution functionals and range/cluster statistics."""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la

from .errors import DomainError

__all__ = [
    "SpectralSample",
    "DistributionReport",
    "RangeMembershipReport",
    "sigma_mean",
    "schatten_norm",
    "distribution_compare",
    "range_membership",
    "cluster_outliers",
    "attraction_order",
    "svd_threshold_split",
    "MEMBER_THRESHOLD",
    "ATTRACTION_TOL",
]

MEMBER_THRESHOLD = 0.01
ATTRACTION_TOL = 1e-3


@dataclass(frozen=True, eq=False)
class SpectralSample:
    """Eigenvalues or singular values of one matrix.

    ``order`` is the matrix dimension ``d_n`` (number of block rows for block
    matrices, so ``len(values) == order * block_size``).  ``grid`` optionally
    binds each value to a point of ``Q^d``.  ``normal`` records whether the
    source matrix is known to be normal (Hermitian, circulant).
    """

    values: np.ndarray
    kind: str
    order: int
    grid: np.ndarray | None = None
    normal: bool | None = None
    block_size: int = 1
    source: str = field(default="")

    def __post_init__(self):
        if self.kind not in ("eigen", "singular"):
            raise DomainError(f"unknown sample kind {self.kind!r}")
        vals = np.asarray(self.values).ravel()
        if self.kind == "singular":
            if np.iscomplexobj(vals):
                if np.any(vals.imag != 0):
                    raise DomainError("singular values must be real")
                vals = vals.real
            if np.any(vals < 0):
                raise DomainError("singular values must be nonnegative")
        if vals.size != self.order * self.block_size:
            raise DomainError(
                f"{vals.size} values for order {self.order} and block size {self.block_size}")
        object.__setattr__(self, "values", vals)
        if self.grid is not None:
            grid = np.asarray(self.grid, dtype=float)
            if grid.ndim == 1:
                grid = grid[:, None]
            if grid.shape[0] != vals.size:
                raise DomainError("grid and values differ in length")
            object.__setattr__(self, "grid", grid)

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class DistributionReport:
    test_function_id: str
    empirical_mean: complex
    integral_value: complex
    abs_error: float
    order: int
    kind: str = "eigen"
    non_normal: bool = False

    def to_dict(self):
        def num(z):
            z = complex(z)
            return z.real if z.imag == 0 else {"re": z.real, "im": z.imag}

        return {
            "test_function": self.test_function_id,
            "empirical_mean": num(self.empirical_mean),
            "integral_value": num(self.integral_value),
            "abs_error": float(self.abs_error),
            "order": int(self.order),
            "kind": self.kind,
            "non_normal_flag": bool(self.non_normal),
        }


@dataclass(frozen=True)
class RangeMembershipReport:
    point: complex
    radius: float
    fraction_inside: float
    verdict: str

    def to_dict(self):
        z = complex(self.point)
        return {
            "point": {"re": z.real, "im": z.imag},
            "eps": float(self.radius),
            "fraction_inside": float(self.fraction_inside),
            "verdict": self.verdict,
        }


def _test_name(F):
    return getattr(F, "name", None) or getattr(F, "__name__", "F")


def _apply(F, z):
    out = np.asarray(F(z))
    return np.broadcast_to(out, np.shape(z))


def sigma_mean(sample, F):
    """``(1/d_n) sum_j F(value_j)``, the empirical side of a distribution relation."""
    if len(sample) == 0:
        raise DomainError("empty spectral sample")
    vals = _apply(F, sample.values)
    m = vals.mean()
    return m.real if np.isrealobj(vals) or np.all(np.imag(vals) == 0) else m


def schatten_norm(sample, p):
    """Schatten ``p`` norm from singular values; ``p = inf`` is the spectral norm."""
    if sample.kind != "singular":
        raise DomainError("schatten_norm needs a singular-value sample")
    if not p >= 1:
        raise DomainError(f"Schatten p must be >= 1, got {p}")
    s = sample.values
    if s.size == 0:
        return 0.0
    if math.isinf(p):
        return float(s.max())
    top = s.max()
    if top == 0:
        return 0.0
    # scale to avoid overflow for large p
    return float(top * np.sum((s / top) ** p) ** (1.0 / p))


def _midpoint_grid(d, m):
    nodes = -np.pi + (np.arange(m) + 0.5) * (2 * np.pi / m)
    return np.meshgrid(*([nodes] * d), indexing="ij")


def distribution_compare(sample, symbol, F, quad_points=None):
    """Compare ``Sigma(F, A_n)`` with the integral mean of ``F`` over the symbol.

    Singular samples use ``F(|f|)``; eigen samples use ``F(f)``.  Block symbols
    use ``(1/l) tr F(.)`` with ``l = min(p, q)``, i.e. the mean of ``F`` over
    the eigen/singular values of the symbol value.  The integral is the
    composite midpoint rule with ``quad_points`` nodes per level (default 4096
    for one level, 256 per level otherwise).
    """
    if quad_points is None:
        quad_points = 4096 if symbol.d == 1 else 256
    if quad_points < 2:
        raise DomainError(f"quad_points must be >= 2, got {quad_points}")
    empirical = sigma_mean(sample, F)

    vals = np.asarray(symbol(*_midpoint_grid(symbol.d, quad_points)))
    if symbol.is_block:
        mats = vals.reshape((-1,) + symbol.block_dims)
        if sample.kind == "singular":
            pts = np.linalg.svd(mats, compute_uv=False)
        else:
            if symbol.block_dims[0] != symbol.block_dims[1]:
                raise DomainError("eigen distribution needs square block symbols")
            pts = np.linalg.eigvals(mats)
        integral = _apply(F, pts).mean()
    else:
        pts = np.abs(vals) if sample.kind == "singular" else vals
        integral = _apply(F, pts).mean()
    if np.iscomplexobj(integral) and np.imag(integral) == 0:
        integral = integral.real
    non_normal = sample.kind == "eigen" and not sample.normal
    return DistributionReport(
        test_function_id=_test_name(F),
        empirical_mean=empirical,
        integral_value=integral,
        abs_error=float(abs(empirical - integral)),
        order=sample.order,
        kind=sample.kind,
        non_normal=non_normal,
    )


def range_membership(sample, s, eps, threshold=MEMBER_THRESHOLD):
    """Fraction of values in the open disk ``D(s, eps)`` and a verdict.

    ``member_within_eps`` when the fraction is at least ``threshold``,
    ``excluded`` when it is at most ``threshold / 10``.
    """
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if not 0 < threshold < 1:
        raise DomainError(f"threshold must lie in (0, 1), got {threshold}")
    if len(sample) == 0:
        raise DomainError("empty spectral sample")
    inside = np.count_nonzero(np.abs(sample.values - s) < eps)
    frac = inside / len(sample)
    if frac >= threshold:
        verdict = "member_within_eps"
    elif frac <= threshold / 10:
        verdict = "excluded"
    else:
        verdict = "inconclusive"
    return RangeMembershipReport(complex(s), float(eps), frac, verdict)


def _dist_to_set(z, S):
    """Distance from each ``z`` to a union of points and real intervals ``(a, b)``."""
    dist = np.full(z.shape, np.inf)
    for item in S:
        if isinstance(item, tuple) and len(item) == 2:
            a, b = sorted(map(float, item))
            nearest = np.clip(z.real, a, b)
            dist = np.minimum(dist, np.abs(z - nearest))
        else:
            dist = np.minimum(dist, np.abs(z - complex(item)))
    return dist


def cluster_outliers(sample, S, eps):
    """Number of values outside ``D(S, eps)``, the eps-neighbourhood of ``S``.

    ``S`` mixes points (complex numbers) and real intervals given as ``(a, b)``
    tuples.
    """
    S = list(S) if not np.isscalar(S) else [S]
    if not S:
        raise DomainError("cluster set must be non-empty")
    z = np.asarray(sample.values, dtype=complex)
    return int(np.count_nonzero(_dist_to_set(z, S) >= eps))


def attraction_order(samples, s, tol=ATTRACTION_TOL):
    """Estimate the attraction order of ``s`` from spectra of increasing size.

    Each spectrum is sorted by distance to ``s``.  Index ``r`` counts as
    attracted when its distance is strictly decreasing over the list or already
    below ``tol`` in the last sample.  Returns the largest ``r`` such that
    ``1..r`` are all attracted (0 when none is), or ``math.inf`` when every
    tracked index is.
    """
    samples = list(samples)
    if len(samples) < 3:
        raise DomainError("attraction_order needs at least 3 samples")
    orders = [len(smp) for smp in samples]
    if any(b <= a for a, b in zip(orders, orders[1:])):
        raise DomainError("samples must have strictly increasing order")
    tracked = min(orders)
    dist = np.array([np.sort(np.abs(smp.values - s))[:tracked] for smp in samples])
    decreasing = np.all(np.diff(dist, axis=0) < 0, axis=0)
    attracted = decreasing | (dist[-1] < tol)
    if attracted.all():
        return math.inf
    return int(np.argmin(attracted))


def svd_threshold_split(A, eps):
    """Split ``A = L + R`` with ``||L|| <= eps`` and ``rank R = #{sigma_j > eps}``."""
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    A = np.asarray(A)
    U, s, Vh = la.svd(A, full_matrices=False)
    big = s > eps
    R = (U[:, big] * s[big]) @ Vh[big]
    L = (U[:, ~big] * s[~big]) @ Vh[~big]
    return L, R
