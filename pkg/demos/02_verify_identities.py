# Frame-rule audit and the numeric identity catalog.
#
# The audit checks the curvature entries a fixed adapted frame must show;
# the catalog re-tests each displayed algebraic identity with random
# seeded inputs and reports a residual.

from crosscurv.models import build_model, frame_rule_audit
from crosscurv.ledger import identity_catalog, verify_identity_numeric

models = {
    "cp2": build_model("complex", 2, 1.0),
    "hp2": build_model("quaternionic", 2, 1.0),
    "op2": build_model("octonionic", 2, 1.0),
}

for label, model in models.items():
    audit = frame_rule_audit(model)
    bad = {k: v for k, v in audit.residuals.items() if v > 1e-12}
    print(f"{label}: {len(audit.residuals)} frame rules,"
          f" violations: {bad or 'none'}")
# two_slot_invariance fails at exactly 4|c| whenever tau >= 3: swapping a
# single structure into two slots leaves a defect built from the other
# structures, and it only vanishes when there are none (tau <= 1 case).
# two_slot_defect is the exact version of the rule and holds everywhere.

print()
cat = identity_catalog()
print(f"{'identity':<28} tier      cp2        hp2        op2")
for name, info in sorted(cat.items()):
    cells = []
    for model in models.values():
        out = verify_identity_numeric(name, model, trials=20, seed=0)
        cells.append(f"{out['outcome']:<4} {out['residual']:.0e}")
    print(f"{name:<28} {info.tier:<8} {cells[0]}  {cells[1]}  {cells[2]}")

# compose-ricci-trace is the interesting row: its displayed inner weight
# 1/2 only works on the sphere, while weight 1 works on every family.
print()
for label, model in models.items():
    out = verify_identity_numeric("compose-ricci-trace", model,
                                  trials=20, seed=0)
    corrected = out.get("details", {}).get("residual_corrected")
    print(f"{label}: displayed weight residual {out['residual']:.2e},"
          f" corrected weight residual {corrected:.2e}")
