"""Contrast per-query error scaling of the routed and parity readouts.

Injects independent bit flips at every gate site and measures the failure
fraction over random basis queries.  The routed readout only exposes the
polylog-sized active path, while the parity readout and the naive scan
expose a surface that grows with the table, which the fitted exponents
make visible.  Writes the sweep to demos/noise_scaling.csv for plotting.
"""
from pathlib import Path

from qramwb.noise import fit_points, fit_scaling, scaling_sweep, write_sweep_csv

P = 1e-3
NS = (8, 16, 32, 64, 128, 256, 512)
TRIALS = 20_000
SEEDS = range(3)

all_rows = []
for kind, model in [
    ("bucket_brigade", "power_in_logN"),
    ("bad_readout_bb", "power_in_N"),
    ("unary", "power_in_N"),
]:
    estimates = scaling_sweep(kind, NS, P, TRIALS, SEEDS)
    all_rows.extend(estimates)
    line = "  ".join(f"{e.n}:{e.estimate:.3f}" for e in estimates)
    fit = fit_scaling(fit_points(estimates), model)
    print(f"{kind}")
    print(f"  infidelity by N: {line}")
    print(
        f"  {model} fit: exponent {fit.exponent:.2f} "
        f"(stderr {fit.stderr:.2f}), r^2 {fit.r_squared:.3f}"
    )
    print()

out = Path(__file__).parent / "noise_scaling.csv"
write_sweep_csv(out, all_rows)
print(f"wrote {out}")
print("render it with the plot frontend, e.g.:")
print("  node frontend/dist/plotkit.js --input demos/noise_scaling.csv \\")
print("       --builder bucket_brigade --x N --y infidelity \\")
print("       --fit power_in_logN --out bb_scaling.svg")
