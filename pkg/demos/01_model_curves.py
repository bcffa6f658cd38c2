"""The three candidate curves on log-log cumulative axes.

Plots Fermi-Dirac, Bose-Einstein and Boltzmann-Gibbs for one parameter
set, shows the Fermi-Dirac landmarks (left asymptote c, midpoint value
c/2 at x = mu), and checks the +-1 denominator ordering numerically.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from econotherm import ModelFamily, ModelParams, evaluate

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

params = ModelParams(T=0.4, mu=10.3, c=4.6)
print(f"parameters: T={params.T}, mu={params.mu}, c={params.c}")
print(f"Fermi-Dirac value at x=mu: {evaluate('fd', params, params.mu):.4f} (= c/2 = {params.c / 2})")
print(f"left asymptote (x = mu - 20T): {evaluate('fd', params, params.mu - 20 * params.T):.6f} (= c)")

x = np.linspace(8.5, 12.0, 400)
fig, ax = plt.subplots(figsize=(7, 5))
for family, style in [("fd", "-"), ("be", "--"), ("bg", ":")]:
    xx = x[np.abs(x - params.mu) > 0.02] if family == "be" else x
    y = evaluate(family, params, xx)
    keep = (y > 0) & (y < 8)  # BE diverges at its pole; keep the plot readable
    ax.plot(xx[keep], y[keep], style, label=ModelFamily.coerce(family).name)
ax.axhline(params.c, color="grey", lw=0.6)
ax.axhline(params.c / 2, color="grey", lw=0.6, ls="--")
ax.axvline(params.mu, color="grey", lw=0.6, ls="--")
ax.set_xlabel("x = ln income")
ax.set_ylabel("y = ln cumulative percent")
ax.set_title("Candidate distribution families (log-log cumulative axes)")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "model_curves.png", dpi=120)
print(f"figure saved to {OUT / 'model_curves.png'}")

# right of the midpoint the denominators order the families: BE > BG > FD
xs = np.linspace(params.mu + 0.1, params.mu + 3.0, 40)
y_fd = evaluate("fd", params, xs)
y_be = evaluate("be", params, xs)
y_bg = evaluate("bg", params, xs)
assert np.all(y_be > y_bg) and np.all(y_bg > y_fd)
print("ordering check for x > mu: BE > BG > FD holds on the sampled grid")
