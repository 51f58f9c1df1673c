"""Small timing sweep over attribute counts.

Shows the expected shape: keygen, encapsulate, tkgen, and transform
scale linearly with the attribute count while retrieve stays flat (the
user-side cost after outsourcing is one target-group exponentiation
regardless of the policy size).  Use more reps and the full 5..60 grid
for publication-quality numbers: `poabe bench`.
"""

from poabe.harness import bench

report = bench(grid=(5, 10, 15, 20), reps=5, seed=0)
print(report.to_table())
r5 = report.mean("retrieve", 5)
r20 = report.mean("retrieve", 20)
print(f"retrieve at n=20 vs n=5: {r20 / r5:.2f}x (flat)")
t5 = report.mean("transform", 5)
t20 = report.mean("transform", 20)
print(f"transform at n=20 vs n=5: {t20 / t5:.2f}x (linear growth)")
