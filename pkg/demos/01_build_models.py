"""
Building curvature models
=========================

One tangent space, one curvature scale c, and a family of anticommuting
structure operators determine the whole curvature tensor.  This script
builds each supported family and prints the derived constants.
"""

from fractions import Fraction

from crosscurv.models import build_model, model_constants, reference_constants

print("family    n   tau  lambda  scalar   |R|^2   |R|^2 closed form")
for family, m, nkw in [("sphere", 0, 5), ("sphere", 0, 8),
                       ("complex", 2, None), ("complex", 3, None),
                       ("quaternionic", 1, None), ("quaternionic", 2, None),
                       ("octonionic", 2, None)]:
    model = build_model(family, m, 1.0, n=nkw)
    k = model_constants(model)
    closed = "same" if k["claimed_matches_direct"] else \
        f"{k['R_norm2_closed_claimed']:.0f} (differs)"
    print(f"{model.label:<9} {model.n:>2}  {model.tau:>3}  {model.lam:>6.0f}"
          f"  {model.s:>6.0f}  {model.R_norm2:>6.0f}   {closed}")

# The displayed closed form overshoots the direct contraction by exactly
# 16 c^2 n tau (tau - 1), so it is only correct for tau <= 1.
print()
print("closed-form gap for hp2:",
      model_constants(build_model("quaternionic", 2, 1.0))["R_norm2_closed_claimed"]
      - build_model("quaternionic", 2, 1.0).R_norm2,
      "= 16 * 8 * 3 * 2")

# ratio |R|^2 / lambda^2 three ways: printed table, closed form, contraction
print()
print("model   table     closed    direct")
for tag, family, m in [("cp2", "complex", 2), ("cp3", "complex", 3),
                       ("hp1", "quaternionic", 1), ("hp2", "quaternionic", 2),
                       ("op2", "octonionic", 2)]:
    ref = reference_constants(family, m)
    print(f"{tag}     {str(ref['ratio_table']):<9}"
          f" {str(ref['ratio_closed_form']):<9}"
          f" {str(ref['ratio_derived'])}")

# negative scale gives the non-compact dual; no spectral reference data
dual = build_model("quaternionic", 2, -1.0)
kd = model_constants(dual)
print()
print(f"dual {dual.label}: lambda = {dual.lam:.0f}, scalar = {dual.s:.0f},"
      f" mu = {kd['mu']} ({kd['mu_note']})")

# everything scales covariantly in c
half = build_model("complex", 2, 0.5)
print(f"cp2 at c = 1/2: lambda = {half.lam}, |R|^2 = {half.R_norm2}"
      f" (quarter of the unit-scale value)")
