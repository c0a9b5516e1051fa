"""Resolve single jumps through the auxiliary flow and measure accuracy.

Run from the repository root:

    python demos/02_jump_flow.py

Each jump of the driving noise is applied by integrating an auxiliary
ODE for unit time instead of adding the increment linearly. On the Kubo
oscillator that flow is exactly a rotation by beta * R, which gives a
closed form to measure against. The table shows the fourth-order decay
of the flow error as the substep count doubles.
"""

import math

import numpy as np

import symplevy as sl


def flow_error(system, params, state, mark, substeps):
    got = sl.jump_flow(system, state, np.array([mark]), substeps)
    want = sl.kubo_jump_closed_form(params, state, mark)
    return math.hypot(got.p[0] - want.p[0], got.q[0] - want.q[0])


def main():
    params = sl.KuboParams(alpha=0.1, beta=0.1)
    system = sl.kubo_system(params)
    state = sl.PhaseState([0.0], [1.0])

    mark = 2.0
    rotated = sl.jump_flow(system, state, np.array([mark]), sl.DEFAULT_SUBSTEPS)
    angle = params.beta * mark
    print(
        f"one jump with mark {mark}: (0, 1) -> ({rotated.p[0]:+.6f}, {rotated.q[0]:+.6f}), "
        f"a rotation by beta*R = {angle:.2f} rad"
    )
    radius = math.hypot(rotated.p[0], rotated.q[0])
    print(f"the flow preserves the radius: |state| = {radius:.12f}")

    print("\nsubstep refinement at mark R = 2.5*pi (a quarter-turn rotation):")
    big = 2.5 * math.pi
    errors = []
    substeps = [2, 4, 8, 16, 32, 64]
    for s in substeps:
        errors.append(flow_error(system, params, state, big, s))
        print(f"  substeps {s:3d}: error {errors[-1]:.3e}")
    slope = np.polyfit(np.log([1.0 / s for s in substeps]), np.log(errors), 1)[0]
    print(f"log-log slope {slope:.3f} (a classical fourth-order one-step rule)")

    draws = np.random.default_rng(7).normal(0.0, 0.2, size=500)
    worst = max(flow_error(system, params, state, float(r), 16) for r in draws)
    print(
        f"\nat the mark scale the noise model produces (sigma = 0.2), the default "
        f"16 substeps leave at most {worst:.2e} error over 500 draws"
    )


if __name__ == "__main__":
    main()
