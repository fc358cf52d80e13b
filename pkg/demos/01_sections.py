# %% [markdown]
# # Finite sections of a multiplication operator
#
# Multiplying by phi(x) on [-1, 1] and testing against an orthonormal
# polynomial basis gives a matrix.  Under the first-kind Chebyshev weight the
# matrix splits into a Toeplitz part plus a Hankel part built from the Fourier
# coefficients of f(s) = pi * phi(cos s).

# %%
import numpy as np

from multspec import (
    CHEBYSHEV1,
    CHEBYSHEV2,
    MultiplierSpec,
    WeightSpec,
    basis_change_matrix,
    dense,
    hankel_from_coeffs,
    section_cheb1,
    section_cheb2,
    section_general,
    toeplitz_from_coeffs,
)

np.set_printoptions(precision=4, suppress=True, linewidth=110)

x_sq = MultiplierSpec(lambda x: x ** 2, name="x^2")
sec = section_cheb1(x_sq, 6)
print(sec.matrix / np.pi)

# %% [markdown]
# The same matrix rebuilt from its coefficient table.

# %%
T = dense(toeplitz_from_coeffs(sec.table.with_radius((5,)), 6))
H = dense(hankel_from_coeffs(sec.table.with_radius((10,)), 6))
print("reassembly error:", np.abs(T + H - sec.matrix).max())

# %% [markdown]
# Second-kind weight: the Hankel term is shifted by two and subtracted.

# %%
print(section_cheb2(x_sq, 5).matrix / np.pi)

# %% [markdown]
# Any other weight goes through a Gram matrix and its Cholesky factor.  For
# the constant (Legendre) weight the basis change turns the section of the
# constant function into the identity.

# %%
legendre = WeightSpec("custom", w=lambda x: np.ones_like(x), name="legendre")
L = basis_change_matrix(legendre, 5)
print(L)
one = MultiplierSpec(lambda x: np.ones_like(x), name="1")
print("||section(1) - I|| =", np.abs(section_general(one, legendre, 8).matrix - np.eye(8)).max())

# %% [markdown]
# Two variables: the section is multilevel, one Toeplitz or Hankel factor per level.

# %%
xy = MultiplierSpec(lambda x, y: x * y, dims=(2, 1, 1))
print(section_cheb1(xy, (3, 3)).matrix.shape)
