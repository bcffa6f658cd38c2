"""Fit a shipped decile income table and rank the three families.

Reads the Finland-2008-like upper-limit sample, transforms it to
cumulative log-log points, fits each family, and reproduces the
classic income-distribution figure: data points plus the winning
Fermi-Dirac curve.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from econotherm import evaluate, parse_table, select_model, to_cumulative

HERE = Path(__file__).parent
OUT = HERE / "output"
OUT.mkdir(exist_ok=True)

table = parse_table(HERE.parent / "data" / "finland_2008_upper.csv")
print(f"table: {table.label()}, {len(table.values)} deciles in {table.currency}")
print("incomes:", ", ".join(f"{v:,.0f}" for v in table.values))

points = to_cumulative(table)
ranked = select_model(points)
print("\nfamily ranking by R^2:")
for fr in ranked:
    if fr.error:
        print(f"  {fr.family.value}: failed ({fr.error})")
    else:
        p = fr.params
        print(
            f"  {fr.family.value}: R^2 = {fr.r_squared:.6f}"
            f"   T={p.T:.4f} mu={p.mu:.4f} c={p.c:.4f}"
            f"   ({fr.iterations} iterations, {fr.termination.value})"
        )

best = ranked[0]
fig, ax = plt.subplots(figsize=(7, 5))
ax.plot(points.x, points.y, "o", label="decile data")
dense = np.linspace(points.x[0] - 0.3, points.x[-1] + 0.15, 300)
ax.plot(dense, evaluate(best.family, best.params, dense), "-",
        label=f"{best.family.name} fit (R^2 = {best.r_squared:.4f})")
ax.set_xlabel("ln income")
ax.set_ylabel("ln cumulative percent of population")
ax.set_title(f"{table.country} {table.year}: upper limit on income by decile")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "income_fit.png", dpi=120)
print(f"\nfigure saved to {OUT / 'income_fit.png'}")
