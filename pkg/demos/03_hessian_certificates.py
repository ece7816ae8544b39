# Stability certificates for the trace-free remainder form.

import numpy as np

from crosscurv.models import build_model
from crosscurv.hessian import (assemble_tt_remainder, conformal_value,
                               hp_scale, min_eigen_tt, stability_verdict)

for family, m, nkw in [("sphere", 0, 5), ("complex", 2, None),
                       ("complex", 3, None), ("quaternionic", 2, None),
                       ("octonionic", 2, None)]:
    model = build_model(family, m, 1.0, n=nkw)
    qf = assemble_tt_remainder(model)
    cert = min_eigen_tt(qf, samples=100_000, seed=0)
    print(f"{model.label:<8} dim {qf.dim:>3}: min eig {cert.eig_min:>8.2f},"
          f" sampled Rayleigh {cert.rayleigh_min:>8.2f},"
          f" agree to {abs(cert.eig_min - cert.rayleigh_min):.1e}")

print()
for family, m, nkw in [("sphere", 0, 5), ("complex", 2, None),
                       ("quaternionic", 2, None), ("octonionic", 2, None)]:
    model = build_model(family, m, 1.0, n=nkw)
    sr = stability_verdict(model, samples=100_000)
    conf = sr.conformal.get("claimed")
    print(f"{model.label:<8} {sr.tt_verdict:<36} conformal value {conf}")
    for note in (*sr.verdict_flags, *sr.discrepancy_notes):
        print(f"         note: {note}")

# negative minimal eigenvalue does not certify instability by itself: the
# dropped derivative terms are nonnegative and can absorb it.  The verdict
# string says so.

# exponent p only rescales the fiberwise certificate
model = build_model("complex", 3, 1.0)
s2 = stability_verdict(model, p=2, samples=20_000)
s4 = stability_verdict(model, p=4, samples=20_000)
print()
print(f"cp3 epsilon at p=2: {s2.epsilon:.3f}, at p=4: {s4.epsilon:.3f},"
      f" ratio {s4.epsilon / s2.epsilon:.1f}"
      f" = (p/2)|R|^(p-2) = {hp_scale(4, model.R_norm2):.1f}")
