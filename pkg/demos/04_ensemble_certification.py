"""Seeded Monte Carlo ensemble against the expected-potential bound.

A miniature of the full certification run: 20 replicates from one
near-singular 8x8 start, empirical mean potential versus the closed-form
curve at every recorded step, plus the stopping-time tally.
"""

import numpy as np

from pairorth import generate, inflection, run_ensemble
from pairorth.generators import GeneratorSpec

A0, achieved = generate(
    GeneratorSpec("near_singular", n=8, field="real", seed=7, eta=1e-6)
)
print(f"start: phi0 = {achieved.phi:.3f} (threshold {inflection(8):.3f}), "
      f"kappa0 = {achieved.kappa:.3e}")

stats = run_ensemble(
    A0, steps=4000, kind="uniform", replicates=20, base_seed=42, metrics_stride=200
)

print(f"\n{'t':>6} {'mean phi':>12} {'min':>10} {'max':>10} {'bound':>10} {'exceed':>7}")
for k, t in enumerate(stats.t):
    print(
        f"{t:6d} {stats.mean_phi[k]:12.4e} {stats.min_phi[k]:10.2e} "
        f"{stats.max_phi[k]:10.2e} {stats.bound[k]:10.4f} {str(bool(stats.exceed[k])):>7}"
    )

ts = [t for t in stats.t_stars if t is not None]
print(f"\nstopping times across replicates: min {min(ts)}, "
      f"mean {np.mean(ts):.0f}, max {max(ts)}")
print(f"phi rises beyond the 1e-10 slack: {stats.monotonicity_violations} "
      f"steps across all replicates (expected behavior for n >= 3)")
print("\nthe empirical mean collapses orders of magnitude below the bound:")
print("the closed-form curve constrains the true expectation, not the typical run.")
