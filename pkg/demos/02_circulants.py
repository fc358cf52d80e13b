# %% [markdown]
# # Circulant approximations
#
# A Toeplitz matrix is close to a circulant one, and circulants diagonalize
# with the FFT.  The Strang circulant copies the central diagonals; the
# Frobenius-optimal circulant averages the wrapped diagonals and its
# eigenvalues are Cesaro means of the symbol.

# %%
import numpy as np

from multspec import (
    FourierCoeffTable,
    circulant_eigenvalues,
    dense,
    optimal_circulant_general,
    optimal_circulant_toeplitz,
    range_membership,
    strang_circulant,
    toeplitz_from_coeffs,
)


def table(entries, radius):
    return FourierCoeffTable.from_dict(entries).with_radius((radius,))


n = 16
pi_cos = table({1: np.pi / 2, -1: np.pi / 2}, n - 1)
T = toeplitz_from_coeffs(pi_cos, n)
x = 2 * np.pi * np.arange(n) / n

for name, C in (("strang", strang_circulant(T)), ("optimal", optimal_circulant_toeplitz(T))):
    lam = circulant_eigenvalues(C).values
    print(f"{name:8s} max |lambda_j - pi cos x_j| = {np.abs(lam - np.pi * np.cos(x)).max():.4f}")

# %% [markdown]
# The optimal circulant loses a factor (1 - 1/n): the error decays like 1/n.

# %%
for n in (32, 64, 128, 256):
    C = optimal_circulant_toeplitz(toeplitz_from_coeffs(pi_cos.with_radius((n - 1,)), n))
    x = 2 * np.pi * np.arange(n) / n
    print(n, np.abs(circulant_eigenvalues(C).values - np.pi * np.cos(x)).max() * n / np.pi)

# %% [markdown]
# Diagonal averaging works for any square matrix and agrees with the closed form.

# %%
print(np.abs(dense(optimal_circulant_general(dense(T))) - dense(optimal_circulant_toeplitz(T))).max())

# %% [markdown]
# Complex symbols behave differently.  T_n(e^{is}) is a nilpotent shift, so
# every eigenvalue is zero, while its optimal circulant has eigenvalues on a
# circle of radius 1 - 1/n, which is where the symbol lives.

# %%
n = 64
shift = toeplitz_from_coeffs(table({1: 1.0 + 0j}, n - 1), n)
print("max |eig T_n| =", np.abs(np.linalg.eigvals(dense(shift))).max())
lam = circulant_eigenvalues(optimal_circulant_toeplitz(shift))
print("radii:", np.unique(np.round(np.abs(lam.values), 12)))
print(range_membership(lam, 1.0, 0.1).verdict)
