"""Estimate the mean-square convergence order of the jump-adapted scheme.

Run from the repository root:

    python demos/05_convergence_order.py

For each step size the script integrates a batch of independent noisy
paths, evaluates the closed-form solution at the end time on the same
paths, and fits a log-log line through the root-mean-square errors. The
demo uses a reduced batch so it finishes in a few seconds; the CLI's
converge command runs the full-size study.
"""

import numpy as np

import symplevy as sl


def cell_seed(seed, dt_index, sample_index):
    return int(np.random.SeedSequence([seed, dt_index, sample_index]).generate_state(1, np.uint64)[0])


def main():
    params = sl.KuboParams(alpha=0.1, beta=0.1)
    system = sl.kubo_system(params)
    start = sl.PhaseState([0.0], [1.0])
    T = 10.0
    samples = 40
    dts = [0.08, 0.04, 0.02, 0.01]

    errors = []
    for i, dt in enumerate(dts):
        controls = sl.StepControls(dt=dt)
        diffs = np.empty((samples, 2))
        for j in range(samples):
            spec = sl.LevyPathSpec(rate=5.0, mark_sigma=0.2, seed=cell_seed(0, i, j))
            path = sl.sample_path(spec, T)
            traj = sl.integrate_pathwise(system, start, 0.0, T, path, controls)
            exact = sl.kubo_exact(params, start, T, sl.increment(path, 1, 0.0, T))
            diffs[j] = [traj.ps[-1, 0] - exact.p[0], traj.qs[-1, 0] - exact.q[0]]
        errors.append(sl.ms_error(diffs))
        print(f"dt = {dt:<6g} rms end-state error = {errors[-1]:.4e}")

    fit = sl.estimate_order(dts, errors)
    print(f"\nfitted order {fit.slope:.3f} (log-log residual {fit.residual:.3f})")
    print(f"distance to an exact half-order law: {sl.reference_residual(fit):.3f}")
    print("(full-size study: symplevy converge --svg)")


if __name__ == "__main__":
    main()
