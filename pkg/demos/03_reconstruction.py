# %% [markdown]
# # Reading a multiplier back off its section
#
# The direct algorithm untransforms the section, takes its optimal circulant
# and divides the FFT eigenvalues by the weight.  The peeled variant first
# strips the Hankel part from the anti-diagonals.

# %%
import numpy as np

from multspec import (
    CHEBYSHEV2,
    MultiplierSpec,
    WeightSpec,
    algorithm1,
    algorithm2,
    reconstruct_block,
    section_cheb1,
    section_general,
)

x = MultiplierSpec(lambda x: x, name="x")
x_sq = MultiplierSpec(lambda x: x ** 2, name="x^2")

print(" n   direct(x)  peeled(x)  direct(x^2)")
for n in (16, 32, 64, 128):
    r = [algorithm1(section_cheb1(x, n), x).max_residual,
         algorithm2(section_cheb1(x, n), x).max_residual,
         algorithm1(section_cheb1(x_sq, n), x_sq).max_residual]
    print(f"{n:3d}  {r[0]:.2e}   {r[1]:.2e}   {r[2]:.2e}")

# %% [markdown]
# For phi = x the Hankel corner fills in exactly what the diagonal average
# loses, so the direct route is exact up to round-off.  The peeled route keeps
# the 1/n Cesaro loss.  On x^2 the direct residual is 5/(4n).
#
# Other weights: points where the weight density vanishes are excluded
# rather than divided by a tiny number.

# %%
res = algorithm1(section_general(x, CHEBYSHEV2, 32), x)
print(res.summary())
legendre = WeightSpec("custom", w=lambda t: np.ones_like(t), name="legendre")
print(algorithm1(section_general(x_sq, legendre, 64), x_sq).max_residual)

# %% [markdown]
# A step function converges slowly near the jump; the decay indicator of the
# peeled table flags it.

# %%
step = MultiplierSpec(np.sign, name="sign")
r = algorithm2(section_cheb1(step, 64), step)
print("coefficient decay:", r.extra["coefficient_decay"], " median residual:", np.median(r.residuals))

# %% [markdown]
# Two variables and a 2x2 block multiplier.

# %%
xy = MultiplierSpec(lambda a, b: a * b + a ** 2, dims=(2, 1, 1))
print("d = 2:", algorithm1(section_cheb1(xy, (16, 16)), xy).max_residual)


def diag1x(t):
    out = np.zeros(np.shape(t) + (2, 2))
    out[..., 0, 0] = 1
    out[..., 1, 1] = t
    return out


B = MultiplierSpec(diag1x, dims=(1, 2, 2))
br = reconstruct_block(section_cheb1(B, 32), B)
print("block:", br.max_residual())
print(br.singular_sample.values.reshape(-1, 2)[:4])
