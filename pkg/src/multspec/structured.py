"""Multilevel block Toeplitz, Hankel and circulant matrices.

Dense layout is "multi-index outer, block inner": the row of block entry
``(i, a)`` is ``flat(i) * p + a`` with ``flat`` the C-order flattening of the
multi-index ``i``.  Toeplitz entries are ``T_n(f)[i, j] = f_{i-j}``, the
orientation under which the optimal circulant of ``T_n(f)`` has first column
``((n - k) f_k + k f_{k-n}) / n`` and eigenvalues given by Cesaro sums at the
grid ``x_j = 2 pi j / n``.  Sections of even symbols do not depend on it.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .errors import DomainError, ResourceError
from .spectral import SpectralSample
from .symbols import FourierCoeffTable, as_multi_index

__all__ = [
    "DENSE_CAP",
    "ToeplitzMatrix",
    "HankelMatrix",
    "CirculantMatrix",
    "toeplitz_from_coeffs",
    "hankel_from_coeffs",
    "circulant_from_first_column",
    "circulant_eigenvalues",
    "circulant_symbol_values",
    "fourier_grid",
    "dense",
    "matvec",
    "eigen_decompose",
    "singular_values",
]

DENSE_CAP = 4096


def _check_cap(rows, cols, cap):
    cap = DENSE_CAP if cap is None else cap
    if max(rows, cols) > cap:
        raise ResourceError(f"dense size {rows}x{cols} exceeds cap {cap}")


def _blocks_to_dense(arr, n, p, q):
    """``arr[i1, j1, ..., id, jd, a, b]`` -> ``(N p) x (N q)`` dense matrix."""
    d = len(n)
    rows = [2 * k for k in range(d)]
    cols = [2 * k + 1 for k in range(d)]
    arr = arr.transpose(rows + [2 * d] + cols + [2 * d + 1])
    N = int(np.prod(n))
    return arr.reshape(N * p, N * q)


def _dense_to_blocks(A, n, p, q):
    """Inverse of :func:`_blocks_to_dense`, as ``arr[i..., j..., a, b]``."""
    d = len(n)
    arr = np.asarray(A).reshape(tuple(n) + (p,) + tuple(n) + (q,))
    return arr.transpose(list(range(d)) + list(range(d + 1, 2 * d + 1)) + [d, 2 * d + 1])


def _gather(table, index_mats):
    """Look up ``f_c`` for per-level index matrices ``c_k(i_k, j_k)``."""
    d = len(index_mats)
    idx = []
    for k, (mat, r) in enumerate(zip(index_mats, table.radius)):
        if np.abs(mat).max(initial=0) > r:
            raise DomainError(
                f"coefficient index {int(np.abs(mat).max())} needed at level {k}, table radius {r}")
        shape = [1] * (2 * d)
        shape[2 * k], shape[2 * k + 1] = mat.shape
        idx.append((mat + r).reshape(shape))
    return table.coeffs[tuple(idx)]


def _level_index(nk, kind, shift=0):
    i = np.arange(nk)[:, None]
    j = np.arange(nk)[None, :]
    if kind == "toeplitz":
        return i - j
    return i + j + shift


@dataclass(frozen=True, eq=False)
class ToeplitzMatrix:
    order: tuple
    coeffs: FourierCoeffTable

    @property
    def block_dims(self):
        return self.coeffs.block_dims

    @property
    def shape(self):
        N = int(np.prod(self.order))
        return N * self.block_dims[0], N * self.block_dims[1]

    def level_kinds(self):
        return ("toeplitz",) * len(self.order)

    def shifts(self):
        return (0,) * len(self.order)


@dataclass(frozen=True, eq=False)
class HankelMatrix:
    """Entries ``f_{i+j+shift}`` on the levels flagged in ``levels``.

    Levels not flagged follow the Toeplitz rule, which gives the mixed
    Toeplitz/Hankel tensor terms of multivariate cosine-basis sections.
    """

    order: tuple
    coeffs: FourierCoeffTable
    shift: int = 0
    levels: tuple = None

    def __post_init__(self):
        if self.levels is None:
            object.__setattr__(self, "levels", (True,) * len(self.order))

    @property
    def block_dims(self):
        return self.coeffs.block_dims

    @property
    def shape(self):
        N = int(np.prod(self.order))
        return N * self.block_dims[0], N * self.block_dims[1]

    def level_kinds(self):
        return tuple("hankel" if h else "toeplitz" for h in self.levels)

    def shifts(self):
        return tuple(self.shift if h else 0 for h in self.levels)


@dataclass(frozen=True, eq=False)
class CirculantMatrix:
    """Multilevel block circulant with entries ``a_{(k - j) mod n}`` levelwise.

    ``first_column`` has shape ``(n_1, ..., n_d, p, q)``.
    """

    order: tuple
    first_column: np.ndarray

    def __post_init__(self):
        fc = np.asarray(self.first_column)
        d = len(self.order)
        if fc.ndim == d:
            fc = fc[..., None, None]
        if fc.shape[:d] != tuple(self.order) or fc.ndim != d + 2:
            raise DomainError(f"first column shape {fc.shape} does not match order {self.order}")
        fc = fc.copy()
        fc.setflags(write=False)
        object.__setattr__(self, "first_column", fc)

    @property
    def block_dims(self):
        return self.first_column.shape[-2:]

    @property
    def shape(self):
        N = int(np.prod(self.order))
        return N * self.block_dims[0], N * self.block_dims[1]

    def __add__(self, other):
        return CirculantMatrix(self.order, self.first_column + other.first_column)

    def __sub__(self, other):
        return CirculantMatrix(self.order, self.first_column - other.first_column)

    def __mul__(self, c):
        return CirculantMatrix(self.order, c * self.first_column)

    __rmul__ = __mul__


def toeplitz_from_coeffs(coeffs, n, block_dims=None):
    """Toeplitz matrix ``{f_{i-j}}`` of order ``n``; needs ``|j_k| <= n_k - 1`` stored."""
    n = as_multi_index(n, coeffs.d)
    if block_dims is not None and tuple(block_dims) != tuple(coeffs.block_dims):
        raise DomainError(f"block dims {block_dims} do not match table {coeffs.block_dims}")
    if not coeffs.covers(tuple(k - 1 for k in n)):
        raise DomainError(f"table radius {coeffs.radius} too small for order {n}")
    return ToeplitzMatrix(n, coeffs)


def hankel_from_coeffs(coeffs, n, shift=0, block_dims=None, levels=None):
    """Hankel matrix ``{f_{i+j+shift}}``; needs indices up to ``2 n_k - 2 + shift``."""
    n = as_multi_index(n, coeffs.d)
    if shift < 0:
        raise DomainError("Hankel shift must be nonnegative")
    if block_dims is not None and tuple(block_dims) != tuple(coeffs.block_dims):
        raise DomainError(f"block dims {block_dims} do not match table {coeffs.block_dims}")
    H = HankelMatrix(n, coeffs, shift, None if levels is None else tuple(bool(x) for x in levels))
    need = tuple(2 * k - 2 + shift if kind == "hankel" else k - 1
                 for k, kind in zip(n, H.level_kinds()))
    if not coeffs.covers(need):
        raise DomainError(f"table radius {coeffs.radius} too small, need {need}")
    return H


def circulant_from_first_column(first_column, order=None):
    fc = np.asarray(first_column)
    if order is None:
        order = fc.shape if fc.ndim <= 1 else fc.shape[:-2]
        order = (fc.size,) if fc.ndim == 1 else tuple(order)
    return CirculantMatrix(as_multi_index(order), fc)


def fourier_grid(n):
    """Grid points ``x_j = 2 pi j / n`` levelwise, C-order, shape ``(N, d)``."""
    axes = [2 * np.pi * np.arange(k) / k for k in n]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def circulant_symbol_values(C):
    """Values ``sum_k a_k exp(i <x_j, k>)`` at the Fourier grid, shape ``(n..., p, q)``."""
    axes = tuple(range(len(C.order)))
    N = int(np.prod(C.order))
    return np.fft.ifftn(C.first_column, axes=axes) * N


def circulant_eigenvalues(C, kind=None):
    """Spectrum of a circulant via FFT, each value bound to its grid point.

    Scalar circulants give eigenvalues (``kind="eigen"``) or their moduli
    (``kind="singular"``).  Block circulants are handled per grid point: the
    block value is decomposed densely, eigenvalues by default when square,
    singular values otherwise.
    """
    p, q = C.block_dims
    if kind is None:
        kind = "eigen" if p == q else "singular"
    if kind == "eigen" and p != q:
        raise DomainError("eigenvalues of a rectangular block circulant")
    vals = circulant_symbol_values(C)
    N = int(np.prod(C.order))
    grid = fourier_grid(C.order)
    mats = vals.reshape(N, p, q)
    if p == 1 and q == 1:
        out = mats[:, 0, 0]
        if kind == "singular":
            out = np.abs(out)
        elif np.allclose(out.imag, 0, atol=1e-13 * max(1.0, np.abs(out).max())):
            out = out.real
        block = 1
    else:
        if kind == "eigen":
            out = np.linalg.eigvals(mats)
        else:
            out = np.linalg.svd(mats, compute_uv=False)
        block = out.shape[1]
        out = out.ravel()
        grid = np.repeat(grid, block, axis=0)
    return SpectralSample(out, kind, N, grid=grid, normal=True, block_size=block,
                          source="circulant")


def dense(A, cap=None):
    """Materialize a structured matrix, or pass a dense array through."""
    if isinstance(A, np.ndarray):
        return A
    rows, cols = A.shape
    _check_cap(rows, cols, cap)
    n = A.order
    p, q = A.block_dims
    if isinstance(A, CirculantMatrix):
        mats = [(np.arange(k)[:, None] - np.arange(k)[None, :]) % k for k in n]
        d = len(n)
        idx = []
        for k, mat in enumerate(mats):
            shape = [1] * (2 * d)
            shape[2 * k], shape[2 * k + 1] = mat.shape
            idx.append(mat.reshape(shape))
        return _blocks_to_dense(A.first_column[tuple(idx)], n, p, q)
    mats = [_level_index(k, kind, s) for k, kind, s in zip(n, A.level_kinds(), A.shifts())]
    return _blocks_to_dense(_gather(A.coeffs, mats), n, p, q)


def _conv_kernel(A):
    """Kernel ``g[m]``, ``m = i - j'`` in ``[-(n-1), n-1]``, with Hankel levels flipped."""
    kernel = A.coeffs.coeffs
    for k, (nk, kind, s, r) in enumerate(zip(A.order, A.level_kinds(), A.shifts(), A.coeffs.radius)):
        m = np.arange(-(nk - 1), nk)
        c = m if kind == "toeplitz" else m + nk - 1 + s
        kernel = np.take(kernel, c + r, axis=k)
    return kernel


def matvec(A, v):
    """Product ``A @ v`` without forming ``A`` (FFT convolution on every level)."""
    if isinstance(A, np.ndarray):
        return A @ v
    n = tuple(A.order)
    d = len(n)
    p, q = A.block_dims
    v = np.asarray(v)
    if v.shape[0] != A.shape[1]:
        raise DomainError(f"vector of length {v.shape[0]} for matrix of shape {A.shape}")
    vb = v.reshape(n + (q,))
    axes = tuple(range(d))
    if isinstance(A, CirculantMatrix):
        fa = np.fft.fftn(A.first_column, axes=axes)
        fv = np.fft.fftn(vb, axes=axes)
        y = np.fft.ifftn(np.einsum("...ab,...b->...a", fa, fv), axes=axes)
    else:
        for k, kind in enumerate(A.level_kinds()):
            if kind == "hankel":
                vb = np.flip(vb, axis=k)
        g = _conv_kernel(A)
        size = tuple(2 * k for k in n)
        # circulant embedding: kernel index m sits at position m mod 2n
        emb = np.zeros(size + (p, q), dtype=g.dtype)
        for k, nk in enumerate(n):
            g = np.moveaxis(g, k, 0)
            g = np.concatenate([g[nk - 1:], np.zeros((1,) + g.shape[1:], g.dtype), g[:nk - 1]])
            g = np.moveaxis(g, 0, k)
        emb[...] = g
        fv = np.fft.fftn(vb, s=size, axes=axes)
        y = np.fft.ifftn(np.einsum("...ab,...b->...a", np.fft.fftn(emb, axes=axes), fv), axes=axes)
        y = y[tuple(slice(0, k) for k in n)]
    if not (np.iscomplexobj(v) or np.iscomplexobj(A.coeffs.coeffs if not isinstance(A, CirculantMatrix) else A.first_column)):
        y = y.real
    return y.reshape(-1)


def _sort_eigen(vals):
    vals = np.asarray(vals)
    order = np.lexsort((np.imag(vals), np.real(vals)))
    return vals[order]


def eigen_decompose(A, hermitian=False):
    """Eigenvalues of a dense square matrix, sorted by real then imaginary part."""
    A = dense(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"eigenvalues of non-square matrix {A.shape}")
    if hermitian:
        vals = la.eigvalsh(A)
    else:
        vals = _sort_eigen(la.eigvals(A))
        if np.all(vals.imag == 0):
            vals = vals.real
    return SpectralSample(vals, "eigen", A.shape[0], normal=True if hermitian else None,
                          source="dense")


def singular_values(A):
    """Singular values of a dense matrix in descending order."""
    A = dense(A)
    return SpectralSample(la.svdvals(A), "singular", min(A.shape), source="dense")
