"""Track the monitored Hamiltonian along both schemes over a long run.

Run from the repository root:

    python demos/04_energy_drift.py

For the oscillator the exact monitored energy H = (P^2 + Q^2) / 2 is a
pathwise invariant. The semi-implicit scheme keeps H oscillating in a
narrow band around 0.5; the explicit scheme obeys the exact recursion
H_{j+1} = (1 + a_j^2) H_j and therefore can only grow.
"""

import numpy as np

import symplevy as sl


def main():
    params = sl.KuboParams(alpha=0.1, beta=0.1)
    system = sl.kubo_system(params)
    start = sl.PhaseState([0.0], [1.0])
    T = 200.0
    controls = sl.StepControls(dt=0.08)
    path = sl.sample_path(sl.LevyPathSpec(rate=5.0, mark_sigma=0.2, seed=1), T)

    sym = sl.integrate_fixed_grid(system, "symplectic", start, 0.0, T, path, controls)
    exp = sl.integrate_fixed_grid(system, "explicit", start, 0.0, T, path, controls)

    h_sym = sl.hamiltonian_series(system, sym)
    h_exp = sl.hamiltonian_series(system, exp)
    print(f"symplectic H stays in [{h_sym[:, 1].min():.4f}, {h_sym[:, 1].max():.4f}]")
    print(f"explicit H climbs from {h_exp[0, 1]:.4f} to {h_exp[-1, 1]:.4f}")

    dls = sl.grid_increments(path, 1, exp.times)
    a = params.alpha * np.diff(exp.times) + params.beta * dls
    predicted = 0.5 * np.cumprod(np.concatenate([[1.0], 1.0 + a * a]))
    defect = np.max(np.abs(h_exp[:, 1] - predicted) / predicted)
    print(f"explicit growth matches the step recursion to {defect:.2e} relative")

    band = np.abs(h_sym[:, 1] - 0.5)
    print(f"symplectic |H - 0.5| never exceeds {band.max():.4f} on this path")
    print("(the CLI writes the full series: symplevy hamiltonian --svg)")


if __name__ == "__main__":
    main()
