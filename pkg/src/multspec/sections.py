"""Finite sections of multiplication operators.

Inner products are taken over the periodic side, ``<u, v> = int_{Q^d}
u(cos s) v(cos s) prod_k w_k(cos s_k) |sin s_k| ds``, which is twice the
usual integral over ``[-1, 1]`` per level.  With the unnormalized Chebyshev
basis ``cos(j arccos x)`` this gives the classical splitting
``M_n[phi] = T_n(f) + H_n(f)`` with ``f(s) = pi^d phi(cos s)``; with an
orthonormal basis the section of ``phi = 1`` is the identity.
"""

import itertools
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .errors import ConditioningError, DomainError, UnsupportedError
from .structured import dense, hankel_from_coeffs, toeplitz_from_coeffs
from .symbols import (
    CHEBYSHEV1,
    CHEBYSHEV2,
    SymbolSpec,
    as_multi_index,
    fourier_coefficients,
    pullback_multiplier,
    weight_factors,
)

__all__ = [
    "FiniteSection",
    "section_cheb1",
    "section_cheb2",
    "section_general",
    "basis_change_matrix",
    "untransform",
    "split_blocks",
]


@dataclass(frozen=True, eq=False)
class FiniteSection:
    """Dense section ``M_n[phi]`` plus the data needed to invert the pipeline.

    ``convention`` is ``"chebyshev1"`` or ``"chebyshev2"`` for the
    unnormalized classical bases and ``"orthonormal"`` for sections built
    through ``basis_factor``.  ``decomposition`` holds ``(T, hankel_terms)``
    with ``matrix == dense(T) + sum(dense(H) for H in hankel_terms)``.
    """

    matrix: np.ndarray
    order: tuple
    weight: object
    multiplier_id: str
    convention: str
    block_dims: tuple = (1, 1)
    decomposition: tuple | None = None
    basis_factor: np.ndarray | None = None
    tilde_matrix: np.ndarray | None = None
    table: object = None

    @property
    def d(self):
        return len(self.order)

    @property
    def symbol_scale(self):
        """Factor between the spectral symbol and ``phi(cos s)``."""
        return np.pi ** self.d if self.convention != "orthonormal" else 1.0

    def is_hermitian(self, tol=1e-10):
        A = self.matrix
        return A.shape[0] == A.shape[1] and np.abs(A - A.conj().T).max(initial=0) <= tol

    def sidecar(self):
        return {
            "multiplier": self.multiplier_id,
            "weight": [w.label for w in weight_factors(self.weight, self.d)],
            "n": list(self.order),
            "block": list(self.block_dims),
            "convention": self.convention,
            "rows": int(self.matrix.shape[0]),
            "cols": int(self.matrix.shape[1]),
        }


def _tensor_sections(table, n):
    """``T_n(f)`` and every mixed Toeplitz/Hankel term of the cosine-basis section."""
    d = len(n)
    T = toeplitz_from_coeffs(table, n)
    terms = []
    for levels in itertools.product((False, True), repeat=d):
        if any(levels):
            terms.append(hankel_from_coeffs(table, n, shift=0, levels=levels))
    return T, tuple(terms)


def _assemble(T, terms, cap=None):
    out = dense(T, cap)
    for H in terms:
        out = out + dense(H, cap)
    return out


def _phi_name(phi):
    return getattr(phi, "name", "phi")


def section_cheb1(phi, n, oversample=8, table=None, cap=None):
    """Section in the unnormalized first-kind Chebyshev basis.

    Returns ``T_n(f) + H_n(f)`` for ``f = pi^d phi(cos .)``; for ``d > 1`` the
    Hankel part is the sum of all terms mixing Toeplitz and Hankel levels.
    ``table`` overrides the quadrature with precomputed coefficients (radius
    at least ``2 n_k - 2``).
    """
    d = phi.d if table is None else table.d
    n = as_multi_index(n, d)
    if table is None:
        f, _ = pullback_multiplier(phi, CHEBYSHEV1)
        table = fourier_coefficients(f, n, oversample=oversample, tail=True)
    T, terms = _tensor_sections(table, n)
    return FiniteSection(
        matrix=_assemble(T, terms, cap),
        order=n,
        weight=CHEBYSHEV1,
        multiplier_id=_phi_name(phi) if phi is not None else "table",
        convention="chebyshev1",
        block_dims=tuple(table.block_dims),
        decomposition=(T, terms),
        table=table,
    )


def section_cheb2(phi, n, oversample=8, cap=None):
    """Section in the second-kind basis ``sin((j+1) s) / sin s``.

    Entries are ``f_{|i-j|} - f_{i+j+2}``: a Toeplitz part minus the Hankel
    matrix with shift 2.  One level only.
    """
    if phi.d != 1:
        raise UnsupportedError("second-kind sections are implemented for one level only")
    n = as_multi_index(n, 1)
    f, _ = pullback_multiplier(phi, CHEBYSHEV1)
    table = fourier_coefficients(f, n, oversample=oversample, tail=True, extra=2)
    T = toeplitz_from_coeffs(table, n)
    H = hankel_from_coeffs(-table, n, shift=2)
    return FiniteSection(
        matrix=dense(T, cap) + dense(H, cap),
        order=n,
        weight=CHEBYSHEV2,
        multiplier_id=_phi_name(phi),
        convention="chebyshev2",
        block_dims=tuple(table.block_dims),
        decomposition=(T, (H,)),
        table=table,
    )


def _gram(weight, nk, oversample):
    """Gram matrix of the unnormalized first-kind Chebyshev vector under ``weight``."""
    sym = SymbolSpec(lambda s: np.pi * weight.density(s), parity="even_in_each_variable",
                     name=f"gram[{weight.label}]")
    table = fourier_coefficients(sym, nk, oversample=oversample, tail=True, refine=True)
    T, terms = _tensor_sections(table, (nk,))
    return _assemble(T, terms)


def basis_change_matrix(weight, n, oversample=16):
    """Lower-triangular ``L_n`` with ``L_n G_n L_n^H = I``.

    ``G_n`` is the Gram matrix of the Chebyshev vector ``(T_0, ..., T_{n-1})``
    under ``weight``; ``L_n`` is the inverse of its lower Cholesky factor, so
    row ``j`` holds the Chebyshev expansion of the ``j``-th orthonormal
    polynomial.  Separable weights give the Kronecker product of the levels.
    """
    n = as_multi_index(n)
    L = np.ones((1, 1))
    for wk, nk in zip(weight_factors(weight, len(n)), n):
        G = _gram(wk, nk, oversample)
        try:
            C = la.cholesky(G, lower=True)
        except la.LinAlgError as exc:
            raise ConditioningError(f"Gram matrix for {wk.label} is not positive definite") from exc
        diag = np.abs(np.diag(C))
        if diag.min() <= 1e-13 * diag.max():
            raise ConditioningError(f"Gram matrix for {wk.label} is numerically singular")
        Lk = la.solve_triangular(C, np.eye(nk), lower=True)
        L = np.kron(L, Lk)
    return L


def _expand(L, p):
    return L if p == 1 else np.kron(L, np.eye(p))


def section_general(phi, weight, n, oversample=16, cap=None):
    """Section in the orthonormal polynomial basis of a separable weight.

    Builds ``M~_n`` for ``phi~ = phi w sqrt(1 - x^2)`` in the first-kind
    Chebyshev basis and returns ``L_n M~_n L_n^H``.  The Gram matrix and
    ``M~_n`` share one refined quadrature rule, so ``phi = 1`` gives the
    identity to round-off.
    """
    n = as_multi_index(n, phi.d)
    factors = weight_factors(weight, phi.d)
    _, f_tilde = pullback_multiplier(phi, factors)
    table = fourier_coefficients(f_tilde, n, oversample=oversample, tail=True, refine=True)
    T, terms = _tensor_sections(table, n)
    tilde = _assemble(T, terms, cap)
    L = basis_change_matrix(factors, n, oversample=oversample)
    p, q = phi.block_dims
    M = _expand(L, p) @ tilde @ _expand(L, q).conj().T
    return FiniteSection(
        matrix=M,
        order=n,
        weight=factors[0] if len(set(factors)) == 1 else factors,
        multiplier_id=_phi_name(phi),
        convention="orthonormal",
        block_dims=(p, q),
        decomposition=None,
        basis_factor=L,
        tilde_matrix=tilde,
        table=table,
    )


def untransform(section):
    """``X_n = L_n^{-1} M_n L_n^{-H}`` via two triangular solves (``M_n`` if no factor)."""
    if section.basis_factor is None:
        return section.matrix
    L = section.basis_factor
    diag = np.abs(np.diag(L))
    if diag.min(initial=np.inf) <= 1e-14 * diag.max(initial=0):
        raise ConditioningError("basis factor is singular")
    p, q = section.block_dims
    Y = la.solve_triangular(_expand(L, p), section.matrix, lower=True)
    X = la.solve_triangular(_expand(L, q), Y.conj().T, lower=True).conj().T
    return X


def split_blocks(matrix, p, q):
    """Scalar sub-matrices ``matrix[s::p, t::q]`` for every block entry ``(s, t)``."""
    if matrix.shape[0] % p or matrix.shape[1] % q:
        raise DomainError(f"matrix {matrix.shape} not divisible into {p}x{q} blocks")
    return [[matrix[s::p, t::q] for t in range(q)] for s in range(p)]
