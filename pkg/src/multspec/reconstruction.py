"""Reconstruction of a multiplier from the spectrum of its finite section.

Both algorithms untransform the section to the first-kind Chebyshev form,
take a Frobenius-optimal circulant approximation, read its eigenvalues off the
FFT together with their grid points ``x_j = 2 pi j / n`` and divide out
``pi^d prod_k w_k(cos x_j) |sin x_j|``.  The second algorithm first peels the
Hankel part from the anti-diagonals so the closed-form optimal circulant of a
Toeplitz matrix can be used.
"""

from dataclasses import dataclass, field

import numpy as np

from .circulant import optimal_circulant_general, optimal_circulant_toeplitz
from .errors import DegenerateWeightError, DomainError
from .sections import FiniteSection, split_blocks, untransform
from .spectral import SpectralSample
from .structured import (
    _dense_to_blocks,
    circulant_symbol_values,
    fourier_grid,
    toeplitz_from_coeffs,
)
from .symbols import CHEBYSHEV1, FourierCoeffTable, as_multi_index, weight_factors

__all__ = [
    "ReconstructionResult",
    "BlockReconstruction",
    "GUARD_TOL",
    "algorithm1",
    "algorithm2",
    "recover_toeplitz",
    "divide_out_weight",
    "reconstruct_block",
    "coefficient_decay",
]

GUARD_TOL = 1e-3


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    """Reconstructed symbol and multiplier values on the Fourier grid.

    ``phi_values`` is NaN at ``excluded_points``; ``residuals`` likewise.
    Block results keep two trailing ``(p, q)`` axes.
    """

    grid: np.ndarray
    f_values: np.ndarray
    phi_values: np.ndarray
    excluded_points: np.ndarray
    algorithm: str
    residuals: np.ndarray | None = None
    order: tuple = ()
    extra: dict = field(default_factory=dict)

    @property
    def included(self):
        mask = np.ones(len(self.grid), dtype=bool)
        mask[self.excluded_points] = False
        return mask

    @property
    def max_residual(self):
        if self.residuals is None:
            return None
        return float(np.max(self.residuals[self.included]))

    @property
    def mean_residual(self):
        if self.residuals is None:
            return None
        return float(np.mean(self.residuals[self.included]))

    def summary(self):
        out = {
            "algorithm": self.algorithm,
            "n": list(self.order),
            "points": int(len(self.grid)),
            "excluded": int(len(self.excluded_points)),
            "max_residual": self.max_residual,
            "mean_residual": self.mean_residual,
        }
        out.update(self.extra)
        return out


def _real_if_close(a, tol=1e-12):
    a = np.asarray(a)
    if np.iscomplexobj(a) and np.all(np.abs(a.imag) <= tol * max(1.0, np.abs(a).max(initial=0))):
        return a.real
    return a


def divide_out_weight(f_values, grid, weight=CHEBYSHEV1, guard_tol=GUARD_TOL):
    """Divide by ``pi^d prod_k w_k(cos x_k)|sin x_k|`` where it is safely nonzero.

    Points whose denominator falls below ``guard_tol`` times the grid maximum
    are excluded (NaN in the output).
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim == 1:
        grid = grid[:, None]
    d = grid.shape[1]
    denom = np.full(len(grid), np.pi ** d)
    for k, wk in enumerate(weight_factors(weight, d)):
        denom = denom * wk.density(grid[:, k])
    denom = np.where(np.isfinite(denom), denom, 0.0)
    top = np.abs(denom).max(initial=0)
    keep = (np.abs(denom) >= guard_tol * top) & (top > 0)
    if not keep.any():
        raise DegenerateWeightError("weight denominator vanishes on the whole grid")
    f_values = np.asarray(f_values)
    shape = (-1,) + (1,) * (f_values.ndim - 1)
    phi = np.full(f_values.shape, np.nan, dtype=np.result_type(f_values, float))
    phi[keep] = f_values[keep] / denom[keep].reshape(shape)
    return phi, np.flatnonzero(~keep)


def _division_weight(section):
    # classical sections carry the symbol pi^d phi(cos s) directly
    return section.weight if section.basis_factor is not None else CHEBYSHEV1


def _finish(section, C, algorithm, reference, guard_tol, extra=None):
    p, q = section.block_dims
    vals = circulant_symbol_values(C)
    N = int(np.prod(section.order))
    grid = fourier_grid(section.order)
    f_vals = _real_if_close(vals.reshape(N, p, q))
    if p == 1 and q == 1:
        f_vals = f_vals[:, 0, 0]
    phi_vals, excluded = divide_out_weight(f_vals, grid, _division_weight(section), guard_tol)
    residuals = None
    if reference is not None:
        ref = np.asarray(reference(*[np.cos(grid[:, k]) for k in range(grid.shape[1])]))
        residuals = np.abs(phi_vals - ref)
    return ReconstructionResult(
        grid=grid,
        f_values=f_vals,
        phi_values=phi_vals,
        excluded_points=excluded,
        algorithm=algorithm,
        residuals=residuals,
        order=tuple(section.order),
        extra=extra or {},
    )


def algorithm1(section, reference=None, guard_tol=GUARD_TOL):
    """Optimal circulant of the untransformed section, eigenvalues by FFT.

    ``reference`` (a multiplier) adds per-point residuals ``|phi_rec - phi|``.
    """
    X = untransform(section)
    C = optimal_circulant_general(X, order=section.order, block_dims=section.block_dims)
    return _finish(section, C, "direct", reference, guard_tol)


def _antidiagonal_operator(nk):
    """``E[k, i, j] = 1`` when ``i + j == 2 nk - 2 - k``."""
    k = np.arange(nk)[:, None, None]
    i = np.arange(nk)[None, :, None]
    j = np.arange(nk)[None, None, :]
    return (i + j == 2 * nk - 2 - k).astype(float)


def _peel(S, axis):
    """Invert the anti-diagonal sums along one level, ignoring tail coefficients."""
    S = np.moveaxis(S, axis, 0)
    out = np.empty_like(S)
    out[0] = S[0]
    running = [np.zeros_like(S[0]), np.zeros_like(S[0])]
    for k in range(1, S.shape[0]):
        par = k % 2
        corr = 2 * running[par] + (out[0] if par == 0 else 0)
        out[k] = (S[k] - corr) / 2
        running[par] = running[par] + out[k]
    return np.moveaxis(out, 0, axis)


def recover_toeplitz(X, n, block_dims=(1, 1)):
    """Estimate ``T_n(f)`` from ``X = T_n(f) + H_n(f)`` for an even symbol.

    Sums over the anti-diagonals ``i + j = 2n - 2 - k`` (levelwise) are peeled
    from the corner inward: ``f_0`` from ``k = 0``, then each ``f_k`` after
    removing the already estimated ``f_m`` with ``m < k`` of the same parity.
    Each estimate carries an error made of tail coefficients with index at
    least ``2n - 2 - k``, so the recovery is exact when ``f_m = 0`` for
    ``m >= n - 1``.
    """
    X = np.asarray(X)
    p, q = block_dims
    if X.ndim != 2 or X.shape[0] * q != X.shape[1] * p:
        raise DomainError(f"matrix of shape {X.shape} is not square")
    n = as_multi_index(n)
    if int(np.prod(n)) * p != X.shape[0]:
        raise DomainError(f"order {n} does not match matrix of shape {X.shape}")
    d = len(n)
    arr = _dense_to_blocks(X, n, p, q)
    # interleave to (i1, j1, ..., id, jd, a, b)
    perm = [ax for k in range(d) for ax in (k, d + k)] + [2 * d, 2 * d + 1]
    cur = arr.transpose(perm)
    for k, nk in enumerate(n):
        cur = np.tensordot(_antidiagonal_operator(nk), cur, axes=([1, 2], [k, k + 1]))
        cur = np.moveaxis(cur, 0, k)
    fhat = cur
    for k in range(d):
        fhat = _peel(fhat, k)
    # mirror to an even table with radius n - 1
    coeffs = fhat
    for k, nk in enumerate(n):
        coeffs = np.take(coeffs, np.abs(np.arange(-(nk - 1), nk)), axis=k)
    table = FourierCoeffTable(coeffs, tuple(nk - 1 for nk in n))
    return toeplitz_from_coeffs(table, n), table


def coefficient_decay(table):
    """Ratio of the largest upper-half coefficient to the largest coefficient.

    A cheap smoothness indicator for the peeled table: small values suggest
    fast coefficient decay, the regime where the peeled estimate is safe.
    """
    c = np.abs(table.coeffs)
    top = c.max(initial=0)
    if top == 0:
        return 0.0
    tail = c.copy()
    for k, r in enumerate(table.radius):
        idx = np.abs(np.arange(-r, r + 1)) < (r + 1) / 2
        shape = [1] * c.ndim
        shape[k] = 2 * r + 1
        tail = tail * ~idx.reshape(shape)
    return float(tail.max(initial=0) / top)


def algorithm2(section, reference=None, guard_tol=GUARD_TOL):
    """Like :func:`algorithm1` after replacing the section by its peeled Toeplitz part."""
    X = untransform(section)
    if section.convention == "chebyshev2":
        raise DomainError("Hankel peeling expects a first-kind (shift 0) section")
    T_est, table = recover_toeplitz(X, section.order, section.block_dims)
    C = optimal_circulant_toeplitz(T_est)
    extra = {"coefficient_decay": coefficient_decay(table)}
    res = _finish(section, C, "hankel_peeled", reference, guard_tol, extra)
    return res


@dataclass(frozen=True, eq=False)
class BlockReconstruction:
    """Entrywise reconstructions of a block section plus per-point singular values."""

    entries: list
    phi_blocks: np.ndarray
    singular_sample: SpectralSample
    grid: np.ndarray
    excluded_points: np.ndarray

    def max_residual(self):
        res = [e.max_residual for row in self.entries for e in row]
        if any(r is None for r in res):
            return None
        return max(res)


def reconstruct_block(section, reference=None, algorithm=1, guard_tol=GUARD_TOL):
    """Reconstruct every entry ``phi_{s,t}`` from its scalar sub-section.

    Also assembles the reconstructed ``p x q`` block at every kept grid point
    and returns its singular values as a sample, for range tests on ``|phi|``.
    """
    p, q = section.block_dims
    run = {1: algorithm1, 2: algorithm2}.get(int(algorithm))
    if run is None:
        raise DomainError(f"unknown algorithm {algorithm!r}")
    subs = split_blocks(section.matrix, p, q)
    entries = []
    for s in range(p):
        row = []
        for t in range(q):
            sub = FiniteSection(
                matrix=subs[s][t],
                order=section.order,
                weight=section.weight,
                multiplier_id=f"{section.multiplier_id}[{s},{t}]",
                convention=section.convention,
                basis_factor=section.basis_factor,
            )
            ref = reference.entry(s, t) if reference is not None else None
            row.append(run(sub, reference=ref, guard_tol=guard_tol))
        entries.append(row)
    grid = entries[0][0].grid
    excluded = entries[0][0].excluded_points
    blocks = np.stack([np.stack([e.phi_values for e in row], axis=-1) for row in entries], axis=-2)
    keep = entries[0][0].included
    svals = np.linalg.svd(blocks[keep], compute_uv=False)
    sample = SpectralSample(svals.ravel(), "singular", int(keep.sum()),
                            grid=np.repeat(grid[keep], min(p, q), axis=0),
                            block_size=min(p, q), source="block reconstruction")
    return BlockReconstruction(entries, blocks, sample, grid, excluded)
