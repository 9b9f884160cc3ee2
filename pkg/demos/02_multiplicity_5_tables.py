"""Recompute the yes/no tables for 5-points mixed with lower multiplicities.

Each row is (c5, c4, c3, c2) general points of P^3; "yes" means good
postulation in degree d.
"""

# %%
from postulate.survey import run_tables

rows = run_tables()

# %%
print(f"{'case':24s} {'expected':>8s} {'got':>4s}  rank/target")
for row in rows:
    rec = row.record
    target = min(rec.N, rec.deg)
    print(f"{row.label:24s} {'yes' if row.expected_good else 'no':>8s} "
          f"{'yes' if rec.good else 'no':>4s}  {rec.rank}/{target}")

# %%
mismatches = [r.label for r in rows if not r.matches]
print("all rows match" if not mismatches else f"mismatches: {mismatches}")

# %%
# The defect counts independent unexpected surfaces of degree d.
worst = max(rows, key=lambda r: r.record.defect)
print("largest defect:", worst.label, worst.record.defect)
