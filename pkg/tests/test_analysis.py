"""Tests for error metrics, order fitting, and symplecticity checks."""

import csv
import math

import numpy as np
import pytest

import symplevy as sl
from symplevy.analysis import FD_STEP
from symplevy.errors import DomainError


KUBO = sl.KuboParams(alpha=0.1, beta=0.1)


def kubo():
    return sl.kubo_system(KUBO)


class TestMsError:
    def test_zero_differences(self):
        assert sl.ms_error(np.zeros((10, 2))) == 0.0

    def test_single_vector_is_its_norm(self):
        assert sl.ms_error([[3.0, 4.0]]) == pytest.approx(5.0, abs=1e-15)

    def test_averages_squared_norms(self):
        value = sl.ms_error([[1.0, 0.0], [0.0, 0.0]])
        assert value == pytest.approx(math.sqrt(0.5), abs=1e-15)

    def test_sample_order_is_irrelevant(self):
        rng = np.random.default_rng(5)
        diffs = rng.normal(size=(40, 2))
        shuffled = diffs[rng.permutation(40)]
        assert sl.ms_error(diffs) == pytest.approx(sl.ms_error(shuffled), rel=1e-15)

    def test_scales_linearly(self):
        rng = np.random.default_rng(6)
        diffs = rng.normal(size=(25, 2))
        assert sl.ms_error(3.0 * diffs) == pytest.approx(3.0 * sl.ms_error(diffs), rel=1e-14)

    def test_rejects_empty_and_non_finite(self):
        with pytest.raises(DomainError):
            sl.ms_error(np.zeros((0, 2)))
        with pytest.raises(DomainError):
            sl.ms_error([[1.0, float("nan")]])


class TestEstimateOrder:
    def test_recovers_planted_half_order(self):
        dts = np.array([0.08, 0.04, 0.02, 0.01, 0.005])
        errors = 0.7 * dts ** 0.5
        fit = sl.estimate_order(dts, errors)
        assert fit.slope == pytest.approx(0.5, abs=1e-12)
        assert fit.intercept == pytest.approx(math.log(0.7), abs=1e-12)
        assert fit.residual < 1e-12

    def test_recovers_planted_first_order(self):
        dts = np.array([0.2, 0.1, 0.05, 0.025])
        errors = 1.3 * dts
        fit = sl.estimate_order(dts, errors)
        assert fit.slope == pytest.approx(1.0, abs=1e-12)

    def test_constant_errors_give_zero_slope(self):
        dts = np.array([0.1, 0.05, 0.025])
        fit = sl.estimate_order(dts, [2e-3, 2e-3, 2e-3])
        assert fit.slope == pytest.approx(0.0, abs=1e-12)

    def test_requires_three_positive_points(self):
        with pytest.raises(DomainError):
            sl.estimate_order([0.1, 0.05], [1e-2, 5e-3])
        with pytest.raises(DomainError):
            sl.estimate_order([0.1, 0.05, 0.025], [1e-2, 0.0, 1e-3])
        with pytest.raises(DomainError):
            sl.estimate_order([0.1, -0.05, 0.025], [1e-2, 5e-3, 1e-3])
        with pytest.raises(DomainError):
            sl.estimate_order([0.1, 0.05, 0.025], [1e-2, 5e-3])

    def test_result_records_inputs(self):
        dts = [0.1, 0.05, 0.025]
        errors = [1e-2, 5e-3, 2.5e-3]
        fit = sl.estimate_order(dts, errors)
        assert np.allclose(fit.dts, dts)
        assert np.allclose(fit.errors, errors)


class TestReferenceResidual:
    def test_exact_half_order_data_has_zero_residual(self):
        dts = np.array([0.08, 0.04, 0.02, 0.01])
        fit = sl.estimate_order(dts, 0.9 * dts ** 0.5)
        assert sl.reference_residual(fit, slope=0.5) < 1e-13

    def test_measures_minimax_gap_to_prescribed_slope(self):
        # For errors = dt the centered values against slope 0.5 are
        # 0.5 log dt, so the best constant leaves half the spread.
        dts = np.array([0.4, 0.2, 0.1, 0.05])
        fit = sl.estimate_order(dts, dts.copy())
        expected = 0.25 * (math.log(0.4) - math.log(0.05))
        assert sl.reference_residual(fit, slope=0.5) == pytest.approx(expected, rel=1e-12)

    def test_default_slope_is_half(self):
        dts = np.array([0.08, 0.04, 0.02, 0.01])
        fit = sl.estimate_order(dts, 0.9 * dts ** 0.5)
        assert sl.reference_residual(fit) == sl.reference_residual(fit, slope=0.5)


class TestHamiltonianSeries:
    def test_constant_energy_on_exact_rotation(self):
        times = np.linspace(0.0, 10.0, 50)
        states = [sl.kubo_exact(KUBO, sl.PhaseState([0.0], [1.0]), t, 0.0) for t in times]
        traj = sl.Trajectory(
            times=times,
            ps=[s.p for s in states],
            qs=[s.q for s in states],
            scheme_tag="exact",
        )
        series = sl.hamiltonian_series(kubo(), traj)
        assert series.shape == (50, 2)
        assert np.array_equal(series[:, 0], times)
        assert np.allclose(series[:, 1], 0.5, atol=1e-13)

    def test_indexed_hamiltonian_selects_channel(self):
        traj = sl.Trajectory(times=[0.0], ps=[[2.0]], qs=[[1.0]], scheme_tag="x")
        # H_0 = alpha (P^2 + Q^2) / 2 and H_1 = beta (P^2 + Q^2) / 2.
        series0 = sl.hamiltonian_series(kubo(), traj, r=0)
        series1 = sl.hamiltonian_series(kubo(), traj, r=1)
        assert series0[0, 1] == pytest.approx(0.1 * 2.5, abs=1e-15)
        assert series1[0, 1] == pytest.approx(0.1 * 2.5, abs=1e-15)

    def test_monitored_energy_grows_along_explicit_run(self):
        path = sl.LevyPath(
            spec=sl.LevyPathSpec(rate=0.0, mark_sigma=0.0), horizon=20.0, events=()
        )
        traj = sl.integrate_fixed_grid(
            kubo(), "explicit", sl.PhaseState([0.0], [1.0]), 0.0, 20.0, path,
            sl.StepControls(dt=0.08),
        )
        series = sl.hamiltonian_series(kubo(), traj)
        assert np.all(np.diff(series[:, 1]) > 0)


class TestOneStepJacobian:
    def test_zero_step_gives_identity(self):
        controls = sl.StepControls(dt=0.1)
        state = sl.PhaseState([0.4], [-0.2])
        for scheme in ("symplectic", "explicit"):
            jac = sl.one_step_jacobian(kubo(), scheme, state, 0.0, np.zeros(1), controls)
            assert np.allclose(jac, np.eye(2), atol=1e-9)

    def test_symplectic_jacobian_matches_linear_map(self):
        # With a = alpha dt + beta dL the map is linear, so finite
        # differences recover ((1, -a), (a, 1 - a^2)) to roundoff.
        controls = sl.StepControls(dt=0.08)
        dl = np.array([0.3])
        a = KUBO.alpha * 0.08 + KUBO.beta * 0.3
        jac = sl.one_step_jacobian(
            kubo(), "symplectic", sl.PhaseState([0.2], [0.7]), 0.08, dl, controls
        )
        expected = np.array([[1.0, -a], [a, 1.0 - a * a]])
        assert np.allclose(jac, expected, atol=1e-9)
        assert np.linalg.det(jac) == pytest.approx(1.0, abs=1e-8)

    def test_explicit_jacobian_matches_linear_map(self):
        controls = sl.StepControls(dt=0.08)
        dl = np.array([0.3])
        a = KUBO.alpha * 0.08 + KUBO.beta * 0.3
        jac = sl.one_step_jacobian(
            kubo(), "explicit", sl.PhaseState([0.2], [0.7]), 0.08, dl, controls
        )
        expected = np.array([[1.0, -a], [a, 1.0]])
        assert np.allclose(jac, expected, atol=1e-9)
        assert np.linalg.det(jac) == pytest.approx(1.0 + a * a, abs=1e-8)

    def test_step_size_parameter_is_used(self):
        controls = sl.StepControls(dt=0.08)
        jac_default = sl.one_step_jacobian(
            kubo(), "symplectic", sl.PhaseState([0.2], [0.7]), 0.08, np.zeros(1), controls
        )
        jac_wide = sl.one_step_jacobian(
            kubo(), "symplectic", sl.PhaseState([0.2], [0.7]), 0.08, np.zeros(1), controls,
            step=1e-4,
        )
        assert np.allclose(jac_default, jac_wide, atol=1e-8)
        assert FD_STEP == 1e-6


class TestSymplecticDefect:
    def test_identity_has_zero_defect(self):
        assert sl.symplectic_defect(np.eye(2)) == 0.0

    def test_rotation_is_symplectic(self):
        theta = 0.83
        rot = np.array(
            [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]]
        )
        assert sl.symplectic_defect(rot) < 1e-14

    def test_pure_stretch_has_unit_defect(self):
        assert sl.symplectic_defect(np.diag([2.0, 1.0])) == pytest.approx(1.0, rel=1e-12)

    def test_rejects_odd_dimension(self):
        with pytest.raises(DomainError):
            sl.symplectic_defect(np.eye(3))

    def test_symplectic_steps_have_small_defect_everywhere(self):
        controls = sl.StepControls(dt=0.08)
        rng = np.random.default_rng(9)
        worst = 0.0
        for _ in range(50):
            state = sl.PhaseState([rng.uniform(-2, 2)], [rng.uniform(-2, 2)])
            dt = rng.uniform(0.0, 0.1)
            dl = np.array([rng.uniform(-1, 1)])
            jac = sl.one_step_jacobian(kubo(), "symplectic", state, dt, dl, controls)
            worst = max(worst, sl.symplectic_defect(jac))
        assert worst < 1e-6

    def test_explicit_steps_violate_the_structure(self):
        controls = sl.StepControls(dt=0.08)
        jac = sl.one_step_jacobian(
            kubo(), "explicit", sl.PhaseState([0.0], [1.0]), 0.08, np.array([0.9]), controls
        )
        # a = 0.098 gives a defect near a^2, far above discretization noise.
        assert sl.symplectic_defect(jac) > 1e-3


class TestOrderFitCsv:
    def test_file_layout(self, tmp_path):
        dts = np.array([0.08, 0.04, 0.02, 0.01])
        fit = sl.estimate_order(dts, 0.9 * dts ** 0.5)
        out = tmp_path / "fit.csv"
        sl.write_order_fit_csv(fit, out)
        with open(out, newline="") as handle:
            rows = list(csv.reader(handle))
        assert rows[0] == ["dt", "ms_error", "log_dt", "log_error"]
        assert len(rows) == 1 + len(dts) + 2
        for i in range(len(dts)):
            assert float(rows[1 + i][0]) == dts[i]
            assert float(rows[1 + i][1]) == fit.errors[i]
            assert float(rows[1 + i][2]) == pytest.approx(math.log(dts[i]), rel=1e-15)
            assert float(rows[1 + i][3]) == pytest.approx(math.log(fit.errors[i]), rel=1e-15)
        assert rows[-2] == ["slope", "intercept", "residual"]
        tail = [float(x) for x in rows[-1]]
        assert tail[0] == pytest.approx(fit.slope, rel=1e-15)
        assert tail[1] == pytest.approx(fit.intercept, rel=1e-15)
        assert tail[2] == pytest.approx(fit.residual, rel=1e-15, abs=1e-300)
