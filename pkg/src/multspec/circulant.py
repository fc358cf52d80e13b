"""Strang and Frobenius-optimal circulant approximations."""

import itertools

import numpy as np

from .errors import DomainError
from .structured import CirculantMatrix, ToeplitzMatrix, _dense_to_blocks, dense
from .symbols import as_multi_index

__all__ = [
    "strang_circulant",
    "optimal_circulant_toeplitz",
    "optimal_circulant_general",
    "optimal_circulant",
]


def _strang_level(nk):
    """Coefficient index and mask for each first-column position of one level."""
    m = np.arange(nk)
    half = nk // 2
    if nk % 2:
        return np.where(m <= half, m, m - nk), np.ones(nk, dtype=bool)
    idx = np.where(m < half, m, m - nk)
    mask = m != half
    # the middle diagonal is left empty at even n
    return np.where(mask, idx, 0), mask


def strang_circulant(T):
    """Circulant copying the central diagonals of ``T`` levelwise.

    Position ``m`` of the first column holds ``f_m`` for ``m < n/2`` and
    ``f_{m-n}`` for ``m > n/2``.  At even ``n`` the wrap-around diagonal
    ``m = n/2`` is set to zero, so the eigenvalues are exactly the Fourier sum
    of degree ``ceil(n/2) - 1`` at the grid.
    """
    if not isinstance(T, ToeplitzMatrix):
        raise DomainError("strang_circulant needs a ToeplitzMatrix")
    n = T.order
    d = len(n)
    table = T.coeffs
    idx, mask = [], np.ones(n, dtype=bool)
    for k, nk in enumerate(n):
        ik, mk = _strang_level(nk)
        shape = [1] * d
        shape[k] = nk
        idx.append(ik.reshape(shape) + table.radius[k])
        mask = mask & mk.reshape(shape)
    col = table.coeffs[tuple(idx)] * mask[..., None, None]
    return CirculantMatrix(n, col)


def optimal_circulant_toeplitz(T):
    """Frobenius-optimal circulant of a Toeplitz matrix in closed form.

    ``a_m = ((n - m) f_m + m f_{m-n}) / n`` on every level, i.e. the tensor
    product of the one-level weights.
    """
    if not isinstance(T, ToeplitzMatrix):
        raise DomainError("optimal_circulant_toeplitz needs a ToeplitzMatrix")
    n = T.order
    d = len(n)
    table = T.coeffs
    col = 0
    options = []
    for k, nk in enumerate(n):
        m = np.arange(nk)
        shape = [1] * d
        shape[k] = nk
        r = table.radius[k]
        # m = 0 has weight 0 on the wrapped branch; clip keeps the index legal
        options.append([
            (m + r, (nk - m) / nk, shape),
            (np.clip(m - nk, -r, r) + r, m / nk, shape),
        ])
    for combo in itertools.product(*options):
        idx = tuple(ik.reshape(shape) for ik, _, shape in combo)
        weight = np.ones(n)
        for _, wk, shape in combo:
            weight = weight * wk.reshape(shape)
        col = col + table.coeffs[idx] * weight[..., None, None]
    return CirculantMatrix(n, col)


def optimal_circulant_general(A, order=None, block_dims=(1, 1)):
    """Frobenius-optimal circulant of an arbitrary square (block) matrix.

    Averages the wrapped diagonals: ``a_k = (1/N) sum_j A_{(j + k) mod n, j}``
    with multi-index arithmetic levelwise and whole ``p x q`` blocks averaged.
    """
    A = dense(A)
    p, q = block_dims
    if A.ndim != 2 or A.shape[0] * q != A.shape[1] * p or A.shape[0] % p:
        raise DomainError(f"matrix of shape {A.shape} is not square in blocks {block_dims}")
    N = A.shape[0] // p
    n = as_multi_index(order if order is not None else N)
    if int(np.prod(n)) != N:
        raise DomainError(f"order {n} incompatible with {N} block rows")
    d = len(n)
    arr = _dense_to_blocks(A, n, p, q)
    rows, cols = [], []
    for k, nk in enumerate(n):
        shift = np.arange(nk)
        j = np.arange(nk)
        shape_k = [1] * (2 * d)
        shape_k[k] = nk
        shape_j = [1] * (2 * d)
        shape_j[d + k] = nk
        rows.append((shift.reshape(shape_k) + j.reshape(shape_j)) % nk)
        cols.append(j.reshape(shape_j))
    gathered = arr[tuple(rows) + tuple(cols)]
    col = gathered.mean(axis=tuple(range(d, 2 * d)))
    return CirculantMatrix(n, col)


def optimal_circulant(A, order=None, block_dims=None):
    """Dispatch: closed form for Toeplitz input, diagonal averaging otherwise."""
    if isinstance(A, ToeplitzMatrix):
        return optimal_circulant_toeplitz(A)
    if block_dims is None:
        block_dims = getattr(A, "block_dims", (1, 1))
    if order is None:
        order = getattr(A, "order", None)
    return optimal_circulant_general(A, order=order, block_dims=block_dims)
