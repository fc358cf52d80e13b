"""Multipliers, weights, periodic symbols and their Fourier coefficients.

A multiplier ``phi`` lives on ``[-1, 1]^d``; after the substitution
``x_k = cos(s_k)`` it becomes the ``2*pi``-periodic symbol
``f(s) = pi^d * phi(cos s_1, ..., cos s_d)`` which is even in every variable.
All coefficient arrays carry two trailing block axes ``(p, q)``, so the
scalar case is simply ``p = q = 1``.
"""

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError

__all__ = [
    "MultiplierSpec",
    "WeightSpec",
    "SymbolSpec",
    "FourierCoeffTable",
    "CHEBYSHEV1",
    "CHEBYSHEV2",
    "pullback_multiplier",
    "fourier_coefficients",
    "fourier_sum_eval",
    "cesaro_sum_eval",
    "as_multi_index",
    "weight_factors",
]


def as_multi_index(n, d=None):
    """Normalize an int or sequence of ints to a tuple of positive ints."""
    if np.isscalar(n):
        n = (int(n),) * (d or 1)
    n = tuple(int(k) for k in n)
    if d is not None and len(n) != d:
        raise DomainError(f"multi-index {n} has {len(n)} levels, expected {d}")
    if not n or any(k < 1 for k in n):
        raise DomainError(f"invalid multi-index {n}")
    return n


def _shape_values(out, shape, p, q):
    """Broadcast raw callable output to ``shape`` (+ ``(p, q)`` for blocks)."""
    out = np.asarray(out)
    if p == 1 and q == 1:
        if out.shape[len(shape):] == (1, 1):
            out = out.reshape(out.shape[:len(shape)])
        return np.broadcast_to(out, shape)
    return np.broadcast_to(out, tuple(shape) + (p, q))


@dataclass(frozen=True)
class MultiplierSpec:
    """A function on ``[-1, 1]^d`` with scalar or ``p x q`` matrix values.

    ``evaluate`` receives ``d`` broadcastable arrays and returns values of the
    broadcast shape, with two extra trailing axes for block multipliers.
    """

    evaluate: Callable
    dims: tuple = (1, 1, 1)
    integrability: str = "bounded"
    name: str = "phi"

    def __post_init__(self):
        d, p, q = self.dims
        if d < 1 or p < 1 or q < 1:
            raise DomainError(f"invalid multiplier dims {self.dims}")
        if self.integrability not in ("bounded", "integrable"):
            raise DomainError(f"unknown integrability class {self.integrability!r}")

    @property
    def d(self):
        return self.dims[0]

    @property
    def block_dims(self):
        return self.dims[1], self.dims[2]

    @property
    def is_block(self):
        return self.dims[1:] != (1, 1)

    def __call__(self, *x):
        if len(x) != self.d:
            raise DomainError(f"{self.name} expects {self.d} coordinates, got {len(x)}")
        x = np.broadcast_arrays(*[np.asarray(xi, dtype=float) for xi in x])
        return _shape_values(self.evaluate(*x), x[0].shape, *self.block_dims)

    def entry(self, s, t):
        """The scalar multiplier in block position ``(s, t)``."""
        if not self.is_block:
            return self
        return MultiplierSpec(
            lambda *x: self(*x)[..., s, t],
            dims=(self.d, 1, 1),
            integrability=self.integrability,
            name=f"{self.name}[{s},{t}]",
        )


@dataclass(frozen=True)
class WeightSpec:
    """A univariate weight on ``(-1, 1)``; products of these give separable weights."""

    kind: str
    w: Callable | None = None
    name: str | None = None

    def __post_init__(self):
        if self.kind not in ("chebyshev1", "chebyshev2", "custom"):
            raise DomainError(f"unknown weight kind {self.kind!r}")
        if self.kind == "custom" and self.w is None:
            raise DomainError("custom weight needs a callable w")

    @property
    def label(self):
        return self.name or self.kind

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.kind == "chebyshev1":
                return 1.0 / np.sqrt(1.0 - x * x)
            if self.kind == "chebyshev2":
                return np.sqrt(1.0 - x * x)
            return np.broadcast_to(np.asarray(self.w(x), dtype=float), x.shape)

    def density(self, s):
        """``w(cos s) * |sin s|``: the weight seen on the periodic side."""
        s = np.asarray(s, dtype=float)
        if self.kind == "chebyshev1":
            return np.ones_like(s)
        if self.kind == "chebyshev2":
            return np.sin(s) ** 2
        return self(np.cos(s)) * np.abs(np.sin(s))


CHEBYSHEV1 = WeightSpec("chebyshev1")
CHEBYSHEV2 = WeightSpec("chebyshev2")


def weight_factors(weight, d):
    """Expand a weight (or a sequence of per-level weights) to ``d`` factors."""
    if isinstance(weight, WeightSpec):
        return (weight,) * d
    weight = tuple(weight)
    if len(weight) != d:
        raise DomainError(f"{len(weight)} weight factors for {d} levels")
    return weight


@dataclass(frozen=True)
class SymbolSpec:
    """A ``2*pi``-periodic function on ``Q^d``, ``Q = (-pi, pi)``.

    When ``table`` is set the symbol is an exact trigonometric polynomial and
    coefficient computations bypass quadrature.
    """

    evaluate: Callable
    dims: tuple = (1, 1, 1)
    parity: str = "none"
    name: str = "f"
    table: "FourierCoeffTable | None" = field(default=None, repr=False)

    @property
    def d(self):
        return self.dims[0]

    @property
    def block_dims(self):
        return self.dims[1], self.dims[2]

    @property
    def is_block(self):
        return self.dims[1:] != (1, 1)

    def __call__(self, *s):
        if len(s) != self.d:
            raise DomainError(f"{self.name} expects {self.d} coordinates, got {len(s)}")
        s = np.broadcast_arrays(*[np.asarray(si, dtype=float) for si in s])
        return _shape_values(self.evaluate(*s), s[0].shape, *self.block_dims)

    @classmethod
    def from_table(cls, table, name="f", parity=None):
        if parity is None:
            parity = "even_in_each_variable" if table.is_even() else "none"

        def evaluate(*s):
            pts = np.stack([np.ravel(si) for si in s], axis=-1)
            vals = fourier_sum_eval(table, table.radius, pts)
            return vals.reshape(np.shape(s[0]) + vals.shape[1:])

        return cls(evaluate, dims=(table.d,) + table.block_dims, parity=parity,
                   name=name, table=table)


def pullback_multiplier(phi, weight=CHEBYSHEV1):
    """Return ``(f, f_tilde)`` for a multiplier and a separable weight.

    ``f(s) = pi^d phi(cos s)`` and ``f_tilde(s) = f(s) * prod_k w_k(cos s_k)|sin s_k|``.
    The absolute value extends ``f_tilde`` evenly from ``(0, pi)^d``.
    """
    d = phi.d
    factors = weight_factors(weight, d)
    scale = np.pi ** d

    def f(*s):
        return scale * phi(*[np.cos(sk) for sk in s])

    def f_tilde(*s):
        val = f(*s)
        dens = np.ones(np.shape(val)[: np.ndim(s[0])])
        for wk, sk in zip(factors, s):
            dens = dens * wk.density(sk)
        if phi.is_block:
            dens = dens[..., None, None]
        return val * dens

    dims = phi.dims
    even = "even_in_each_variable"
    return (
        SymbolSpec(f, dims=dims, parity=even, name=f"pi^{d}*{phi.name}(cos s)"),
        SymbolSpec(f_tilde, dims=dims, parity=even,
                   name=f"pi^{d}*{phi.name}(cos s)*w(cos s)|sin s|"),
    )


class FourierCoeffTable:
    """Fourier coefficients ``f_j`` for ``|j_k| <= radius_k``.

    ``coeffs`` has shape ``(2 r_1 + 1, ..., 2 r_d + 1, p, q)`` and stores
    ``f_j`` at ``coeffs[j + r]``.
    """

    def __init__(self, coeffs, radius):
        coeffs = np.asarray(coeffs)
        radius = tuple(int(r) for r in radius)
        d = len(radius)
        if coeffs.ndim != d + 2:
            raise DomainError(f"coefficient array of rank {coeffs.ndim} for {d} levels")
        if coeffs.shape[:d] != tuple(2 * r + 1 for r in radius):
            raise DomainError(f"coefficient shape {coeffs.shape} does not match radius {radius}")
        if not np.all(np.isfinite(coeffs)):
            raise DomainError("non-finite Fourier coefficient")
        coeffs = coeffs.copy()
        coeffs.setflags(write=False)
        self.coeffs = coeffs
        self.radius = radius

    @property
    def d(self):
        return len(self.radius)

    @property
    def block_dims(self):
        return self.coeffs.shape[-2:]

    @property
    def is_block(self):
        return self.block_dims != (1, 1)

    def __repr__(self):
        return f"FourierCoeffTable(radius={self.radius}, block_dims={self.block_dims})"

    def _index(self, j):
        j = (j,) if np.isscalar(j) else tuple(j)
        if len(j) != self.d:
            raise DomainError(f"index {j} has wrong number of levels")
        if any(abs(jk) > rk for jk, rk in zip(j, self.radius)):
            raise DomainError(f"coefficient {j} not stored (radius {self.radius})")
        return tuple(jk + rk for jk, rk in zip(j, self.radius))

    def __getitem__(self, j):
        val = self.coeffs[self._index(j)]
        return val[0, 0] if not self.is_block else val

    def covers(self, radius):
        return all(r <= own for r, own in zip(radius, self.radius))

    def with_radius(self, radius):
        """Truncate or zero-pad to a new radius (padding assumes vanishing coefficients)."""
        radius = as_multi_index(radius, self.d) if np.isscalar(radius) else tuple(radius)
        out = np.zeros(tuple(2 * r + 1 for r in radius) + self.block_dims, dtype=self.coeffs.dtype)
        src, dst = [], []
        for r_old, r_new in zip(self.radius, radius):
            m = min(r_old, r_new)
            src.append(slice(r_old - m, r_old + m + 1))
            dst.append(slice(r_new - m, r_new + m + 1))
        out[tuple(dst)] = self.coeffs[tuple(src)]
        return FourierCoeffTable(out, radius)

    def is_even(self, tol=1e-12):
        """True when ``f_j == f_{-j}`` under every sign flip of coordinates."""
        for axis in range(self.d):
            if not np.allclose(self.coeffs, np.flip(self.coeffs, axis=axis), atol=tol, rtol=0):
                return False
        return True

    def __neg__(self):
        return FourierCoeffTable(-self.coeffs, self.radius)

    def entry(self, s, t):
        return FourierCoeffTable(self.coeffs[..., s:s + 1, t:t + 1], self.radius)

    @classmethod
    def from_dict(cls, entries, block_dims=(1, 1), even=False):
        """Build an exact table from ``{index: value}``.

        Integer keys are allowed for one level.  With ``even=True`` every
        index is mirrored under all coordinate sign flips.
        """
        items = {((k,) if np.isscalar(k) else tuple(k)): v for k, v in entries.items()}
        d = len(next(iter(items)))
        radius = tuple(max(abs(k[i]) for k in items) for i in range(d))
        dtype = complex if any(np.iscomplexobj(v) for v in items.values()) else float
        out = np.zeros(tuple(2 * r + 1 for r in radius) + tuple(block_dims), dtype=dtype)
        flips = list(itertools.product((1, -1), repeat=d)) if even else [(1,) * d]
        for k, v in items.items():
            for signs in flips:
                idx = tuple(sg * a + r for sg, a, r in zip(signs, k, radius))
                out[idx] = np.reshape(v, block_dims)
        return cls(out, radius)


def fourier_coefficients(symbol, order, oversample=8, tail=False, extra=0, refine=False):
    """Fourier coefficients of ``symbol`` for a section of order ``order``.

    Stores ``|j_k| <= n_k - 1``, or ``|j_k| <= 2 n_k - 2`` with ``tail``, plus
    ``extra`` further indices per level.  Coefficients are computed by the
    midpoint rule with ``oversample * 2 * (radius + 1)`` nodes per level, which
    is exact for trigonometric polynomials of degree below the node count minus
    the radius.  Symbols carrying an exact table skip quadrature.

    ``refine`` adds one Richardson step (rules with ``m`` and ``2m`` nodes
    combined as ``(4 c_2m - c_m) / 3``).  Symbols such as ``w(cos s)|sin s|``
    have kinks at cell boundaries, where the midpoint error is a series in
    even powers of the step; the step lifts it from ``O(h^2)`` to ``O(h^4)``
    and keeps exactness for trigonometric polynomials.
    """
    if oversample < 2:
        raise DomainError(f"oversample must be >= 2, got {oversample}")
    n = as_multi_index(order, symbol.d)
    radius = tuple((2 * nk - 2 if tail else nk - 1) + extra for nk in n)
    if symbol.table is not None:
        return symbol.table.with_radius(radius)

    if refine:
        coarse = fourier_coefficients(symbol, order, oversample, tail, extra)
        fine = fourier_coefficients(symbol, order, 2 * oversample, tail, extra)
        return FourierCoeffTable((4 * fine.coeffs - coarse.coeffs) / 3, radius)

    sizes = [oversample * 2 * (r + 1) for r in radius]
    nodes = [-np.pi + (np.arange(m) + 0.5) * (2 * np.pi / m) for m in sizes]
    grids = np.meshgrid(*nodes, indexing="ij")
    vals = np.asarray(symbol(*grids))
    p, q = symbol.block_dims
    vals = vals.reshape(tuple(sizes) + (p, q))
    axes = tuple(range(symbol.d))
    spec = np.fft.fftn(vals, axes=axes) / np.prod(sizes)

    out = spec
    for k, (m, r) in enumerate(zip(sizes, radius)):
        j = np.arange(-r, r + 1)
        h = 2 * np.pi / m
        phase = np.exp(1j * j * (np.pi - h / 2))
        out = np.take(out, j % m, axis=k)
        shape = [1] * out.ndim
        shape[k] = j.size
        out = out * phase.reshape(shape)
    if symbol.parity == "even_in_each_variable":
        # enforce f_j == f_{-j} exactly so that sections come out symmetric
        for k in range(symbol.d):
            out = 0.5 * (out + np.flip(out, axis=k))
        if np.isrealobj(vals):
            out = out.real
    return FourierCoeffTable(out, radius)


def _points(points, d):
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 0:
        pts = pts.reshape(1, 1)
    elif pts.ndim == 1:
        pts = pts[:, None] if d == 1 else pts[None, :]
    if pts.shape[1] != d:
        raise DomainError(f"points have {pts.shape[1]} coordinates, expected {d}")
    return pts


def _weighted_sum(table, degree, points, weights_fn):
    d = table.d
    q = as_multi_index(degree, d) if not np.isscalar(degree) else (int(degree),) * d
    if any(qk < 0 for qk in q):
        raise DomainError(f"negative degree {degree}")
    if not table.covers(q):
        raise DomainError(f"table radius {table.radius} does not cover degree {q}")
    pts = _points(points, d)
    sub = table.with_radius(q).coeffs
    for k, qk in enumerate(q):
        shape = [1] * sub.ndim
        shape[k] = 2 * qk + 1
        sub = sub * weights_fn(np.arange(-qk, qk + 1), qk).reshape(shape)
    acc = np.einsum("mj,j...->m...", np.exp(1j * np.outer(pts[:, 0], np.arange(-q[0], q[0] + 1))), sub)
    for k in range(1, d):
        e = np.exp(1j * np.outer(pts[:, k], np.arange(-q[k], q[k] + 1)))
        acc = np.einsum("mj,mj...->m...", e, acc)
    return acc[..., 0, 0] if not table.is_block else acc


def fourier_sum_eval(table, degree, points):
    """Partial Fourier sum ``sum_{|j_k| <= q_k} f_j exp(i <j, x>)`` at each point."""
    return _weighted_sum(table, degree, points, lambda j, q: np.ones(j.shape))


def cesaro_sum_eval(table, degree, points):
    """Cesaro (Fejer) mean of degree ``q``: weights ``1 - |j|/(q + 1)`` per level."""
    return _weighted_sum(table, degree, points, lambda j, q: 1.0 - np.abs(j) / (q + 1.0))
