"""Tests for machine construction, Heisenberg-picture verification, and transport."""

import numpy as np
import pytest

from obsclone.classes import ClassKind, ObservableClass, sample_members
from obsclone.linalg import (
    SIGMA0,
    SIGMA1,
    SIGMA2,
    SIGMA3,
    QubitState,
    dagger,
    frob,
    partial_trace,
    tensor,
)
from obsclone.machines import (
    CNOT,
    PAULI_FLIP,
    CloningMachine,
    SingularAngleError,
    VerificationReport,
    axis_rotation,
    cnot_machine,
    commuting_machine,
    covariant_transport,
    entangling_kernel,
    heisenberg_lift,
    lift_defect,
    machine_from_dict,
    machine_to_dict,
    nccm_residual,
    one_param_machine,
    output_state,
    phase_covariant_machine,
    report_to_dict,
    t_machine,
    verify_approximate,
    verify_exact,
)
from obsclone.pauli import Observable, commutes, decompose
from support import (
    expm_oracle,
    random_observable,
    random_state,
    random_su2,
    random_unitary,
)

S1 = Observable(np.array([0.0, 1.0, 0.0, 0.0]))
S2 = Observable(np.array([0.0, 0.0, 1.0, 0.0]))
S3 = Observable(np.array([0.0, 0.0, 0.0, 1.0]))


def test_cnot_matrix_is_the_signal_controlled_flip():
    expected = np.array(
        [
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 0, 1],
            [0, 0, 1, 0],
        ],
        dtype=complex,
    )
    assert np.array_equal(CNOT, expected)


def test_pauli_flip_exchanges_sigma1_and_sigma2():
    assert np.allclose(dagger(PAULI_FLIP) @ SIGMA1 @ PAULI_FLIP, SIGMA2, atol=1e-15)
    assert np.allclose(dagger(PAULI_FLIP) @ SIGMA2 @ PAULI_FLIP, SIGMA1, atol=1e-15)


class TestHeisenbergLift:
    def test_cnot_lifts(self):
        probe = QubitState.ket0()
        assert np.allclose(heisenberg_lift(CNOT, probe, S3, 1).coeffs, S3.coeffs, atol=1e-14)
        assert np.allclose(heisenberg_lift(CNOT, probe, S3, 2).coeffs, S3.coeffs, atol=1e-14)
        assert np.allclose(heisenberg_lift(CNOT, probe, S1, 1).coeffs, 0.0, atol=1e-14)

    def test_duality_with_schroedinger_picture(self, rng):
        """tr[rho L] must equal the mean of the branch observable on the output."""
        for _ in range(25):
            u = random_unitary(rng, 4)
            probe = random_state(rng)
            state = random_state(rng)
            x = random_observable(rng)
            branch = int(rng.integers(1, 3))
            lift = heisenberg_lift(u, probe, x, branch)
            joint = u @ tensor(state.density, probe.density) @ dagger(u)
            m = tensor(x.matrix, SIGMA0) if branch == 1 else tensor(SIGMA0, x.matrix)
            lhs = np.trace(state.density @ lift.matrix).real
            rhs = np.trace(joint @ m).real
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_lift_is_linear_in_the_observable(self, rng):
        u = random_unitary(rng, 4)
        probe = random_state(rng)
        a = random_observable(rng)
        b = random_observable(rng)
        both = Observable(0.3 * a.coeffs - 1.7 * b.coeffs)
        la = heisenberg_lift(u, probe, a, 1).coeffs
        lb = heisenberg_lift(u, probe, b, 1).coeffs
        lab = heisenberg_lift(u, probe, both, 1).coeffs
        assert np.allclose(lab, 0.3 * la - 1.7 * lb, atol=1e-12)

    def test_rejects_bad_branch_and_non_unitary(self):
        with pytest.raises(ValueError):
            heisenberg_lift(CNOT, QubitState.ket0(), S3, 3)
        with pytest.raises(ValueError):
            heisenberg_lift(np.eye(4) * 2.0, QubitState.ket0(), S3, 1)


def test_lift_defect_matches_dense_frobenius_norm(rng):
    for _ in range(20):
        lift = random_observable(rng)
        gen = random_observable(rng)
        gain = float(rng.uniform(0.5, 3.0))
        got = lift_defect(lift, gen, gain)
        residual = (
            (lift.coeffs[0] - gen.coeffs[0]) * SIGMA0
            + (gain * lift.coeffs[1] - gen.coeffs[1]) * SIGMA1
            + (gain * lift.coeffs[2] - gen.coeffs[2]) * SIGMA2
            + (gain * lift.coeffs[3] - gen.coeffs[3]) * SIGMA3
        )
        assert got == pytest.approx(frob(residual), abs=1e-13)


def test_cloning_machine_validation():
    cls = ObservableClass(ClassKind.ONE_PARAM, (S3,))
    with pytest.raises(ValueError):
        CloningMachine(np.eye(4) * 1.5, QubitState.ket0(), cls)
    with pytest.raises(ValueError):
        CloningMachine(CNOT, QubitState.ket0(), cls, gains=(1.0, 0.0))
    with pytest.raises(ValueError):
        CloningMachine(CNOT, QubitState.ket0(), cls, gains=(1.0, np.inf))


def test_verification_report_consistency_is_enforced():
    with pytest.raises(ValueError):
        VerificationReport(((0.0, 0.5),), 0.1, (1.0, 1.0), True, 1e-10)
    with pytest.raises(ValueError):
        VerificationReport(((0.0, 0.5),), 0.5, (1.0, 1.0), True, 1e-10)


def test_cnot_machine_verifies_exactly():
    report = verify_exact(cnot_machine(), tol=1e-10)
    assert report.passed
    assert report.max_defect < 1e-14
    assert report.gains_used == (1.0, 1.0)
    assert len(report.per_generator_defects) == 1


def test_cnot_unitary_cannot_clone_the_transverse_pair():
    wrong = CloningMachine(
        CNOT,
        QubitState.ket0(),
        ObservableClass(ClassKind.TWO_PARAM_NONCOMMUTING, (S1, S2)),
    )
    report = verify_exact(wrong, tol=1e-10)
    assert not report.passed
    # The lift maps sigma_1 to zero, so the defect is a full Frobenius norm.
    assert report.max_defect >= 1.0


def test_one_param_machine_clones_random_observables(rng):
    for _ in range(30):
        a = random_observable(rng, min_axis=0.05)
        machine = one_param_machine(a)
        assert machine.observables.kind is ClassKind.ONE_PARAM
        assert np.array_equal(machine.probe.bloch, [0.0, 0.0, 1.0])
        assert verify_exact(machine, tol=1e-10).passed


def test_commuting_machine_clones_both_generators(rng):
    for _ in range(30):
        a = random_observable(rng, min_axis=0.05)
        b0 = float(rng.uniform(0.5, 2.0))
        b3 = float(rng.uniform(-2.0, -0.5))
        machine = commuting_machine(a, b0, b3)
        assert machine.observables.kind is ClassKind.TWO_PARAM_COMMUTING
        partner = machine.observables.generators[1]
        assert commutes(a, partner)
        assert verify_exact(machine, tol=1e-10).passed


def test_commuting_machine_on_the_bloch_axis_keeps_the_cnot_unitary():
    machine = commuting_machine(S3, 1.0, 1.0)
    assert np.allclose(machine.unitary, CNOT, atol=1e-14)
    coeffs = np.stack([g.coeffs for g in machine.observables.generators])
    assert np.allclose(coeffs, [[0, 0, 0, 1], [1, 0, 0, 1]], atol=1e-12)
    assert verify_exact(machine, tol=1e-12).passed


def test_commuting_machine_rejects_collapsed_span():
    a = Observable(np.array([0.3, 0.0, 0.0, 0.4]))
    with pytest.raises(ValueError):
        commuting_machine(a, 0.6, 0.8)


class TestAxisRotation:
    def test_carries_sigma3_onto_the_bloch_axis(self, rng):
        for _ in range(40):
            a = random_observable(rng, min_axis=0.01)
            w = axis_rotation(a)
            axis = a.bloch / np.linalg.norm(a.bloch)
            target = axis[0] * SIGMA1 + axis[1] * SIGMA2 + axis[2] * SIGMA3
            assert np.allclose(dagger(w) @ SIGMA3 @ w, target, atol=1e-12)

    def test_handles_negative_axis_observables(self, rng):
        a = Observable(np.array([0.0, 0.1, 0.1, -5.0]))
        w = axis_rotation(a)
        axis = a.bloch / np.linalg.norm(a.bloch)
        target = axis[0] * SIGMA1 + axis[1] * SIGMA2 + axis[2] * SIGMA3
        assert np.allclose(dagger(w) @ SIGMA3 @ w, target, atol=1e-12)

    def test_equatorial_axis_rotates_by_a_quarter_turn(self):
        w = axis_rotation(S1)
        expected = np.cos(np.pi / 4) * SIGMA0 + 1j * np.sin(np.pi / 4) * SIGMA2
        assert np.allclose(w, expected, atol=1e-15)
        assert np.allclose(dagger(w) @ SIGMA3 @ w, SIGMA1, atol=1e-15)

    def test_aligned_axis_needs_no_rotation(self):
        assert np.array_equal(axis_rotation(Observable(np.array([0.2, 0, 0, 3.0]))), SIGMA0)

    def test_anti_aligned_axis_gets_a_half_turn(self):
        w = axis_rotation(Observable(np.array([0.0, 0, 0, -1.0])))
        assert np.allclose(w, 1j * SIGMA1, atol=1e-15)
        assert np.allclose(dagger(w) @ SIGMA3 @ w, -SIGMA3, atol=1e-15)

    def test_rejects_observable_without_axis(self):
        with pytest.raises(ValueError):
            axis_rotation(Observable(np.array([1.0, 0, 0, 0])))


def test_entangling_kernel_matches_expm(rng):
    for _ in range(20):
        t1, t2, t3 = rng.uniform(-3.0, 3.0, 3)
        h = 0.5 * (
            t1 * tensor(SIGMA1, SIGMA1)
            + t2 * tensor(SIGMA2, SIGMA2)
            + t3 * tensor(SIGMA3, SIGMA3)
        )
        assert np.allclose(entangling_kernel(t1, t2, t3), expm_oracle(h), atol=1e-13)


def test_entangling_kernel_at_zero_is_identity():
    assert np.allclose(entangling_kernel(0.0, 0.0, 0.0), np.eye(4), atol=1e-15)


class TestTMachine:
    @pytest.mark.parametrize("theta", [np.pi / 6, np.pi / 4, np.pi / 3, 1.0, 0.2])
    def test_verifies_with_reciprocal_gains(self, theta):
        machine = t_machine(theta)
        assert machine.gains == pytest.approx((1.0 / np.cos(theta), 1.0 / np.sin(theta)))
        report = verify_approximate(machine, tol=1e-10)
        assert report.passed

    def test_lift_values_are_the_shrunk_generators(self):
        theta = 0.8
        machine = t_machine(theta)
        l11 = heisenberg_lift(machine.unitary, machine.probe, S1, 1)
        l22 = heisenberg_lift(machine.unitary, machine.probe, S2, 2)
        assert np.allclose(l11.coeffs, [0, np.cos(theta), 0, 0], atol=1e-13)
        assert np.allclose(l22.coeffs, [0, 0, np.sin(theta), 0], atol=1e-13)

    def test_means_rescale_on_real_states(self, rng):
        theta = 0.6
        machine = t_machine(theta)
        for _ in range(10):
            state = random_state(rng)
            joint = output_state(machine, state).matrix
            mean1 = np.trace(joint @ tensor(S1.matrix, SIGMA0)).real
            assert mean1 == pytest.approx(np.cos(theta) * state.bloch[0], abs=1e-12)
            mean2 = np.trace(joint @ tensor(SIGMA0, S2.matrix)).real
            assert mean2 == pytest.approx(np.sin(theta) * state.bloch[1], abs=1e-12)

    def test_fails_exact_verification(self):
        report = verify_exact(t_machine(np.pi / 4), tol=1e-10)
        assert not report.passed
        assert report.max_defect > 0.1

    @pytest.mark.parametrize("theta", [0.0, np.pi / 2, 1e-9, np.pi])
    def test_singular_angles_are_rejected(self, theta):
        with pytest.raises(SingularAngleError):
            t_machine(theta)


def test_verify_approximate_needs_gains():
    with pytest.raises(ValueError):
        verify_approximate(cnot_machine())


class TestNccmResidual:
    def test_stated_solution_zeroes_the_system(self):
        for theta in np.linspace(0.1, np.pi / 2 - 0.1, 20):
            r = nccm_residual(
                theta / 2.0, -theta / 2.0, 0.0, 1.0 / np.cos(theta), 1.0 / np.sin(theta)
            )
            assert r < 1e-10

    def test_identity_kernel_leaves_both_probe_conditions_unmet(self):
        assert nccm_residual(0.0, 0.0, 0.0, 1.0, 1.0) == pytest.approx(2.0 * np.sqrt(2.0), abs=1e-12)

    def test_residual_is_positive_off_solution(self):
        assert nccm_residual(0.3, 0.3, 0.1, 1.2, 1.2) > 0.1

    def test_residual_is_continuous_in_the_angles(self, rng):
        for _ in range(10):
            args = np.concatenate([rng.uniform(-1.5, 1.5, 3), rng.uniform(1.0, 3.0, 2)])
            base = nccm_residual(*args)
            for k in range(3):
                bumped = args.copy()
                bumped[k] += 1e-6
                assert abs(nccm_residual(*bumped) - base) < 1e-4


def test_phase_covariant_machine_matrix_structure():
    theta = 0.5
    c, s = np.cos(theta), np.sin(theta)
    expected = np.array(
        [
            [1, 0, 0, 0],
            [0, c, s, 0],
            [0, -s, c, 0],
            [0, 0, 0, 1],
        ],
        dtype=complex,
    )
    assert np.allclose(phase_covariant_machine(theta).unitary, expected, atol=1e-15)


@pytest.mark.parametrize("theta", [np.pi / 6, np.pi / 4, 1.0])
def test_phase_covariant_machine_verifies_like_t_machine(theta):
    pc = phase_covariant_machine(theta)
    tm = t_machine(theta)
    assert pc.gains == tm.gains
    assert verify_approximate(pc, tol=1e-10).passed
    for gen in (S1, S2):
        for branch in (1, 2):
            lp = heisenberg_lift(pc.unitary, pc.probe, gen, branch)
            lt = heisenberg_lift(tm.unitary, tm.probe, gen, branch)
            assert np.allclose(lp.coeffs, lt.coeffs, atol=1e-13)


def test_phase_covariant_machine_fixes_the_pole_and_shrinks_the_equator():
    machine = phase_covariant_machine(np.pi / 4)
    pole = output_state(machine, QubitState.ket0())
    assert np.allclose(partial_trace(pole, 1).bloch, [0.0, 0.0, 1.0], atol=1e-14)
    assert np.allclose(partial_trace(pole, 2).bloch, [0.0, 0.0, 1.0], atol=1e-14)

    plus = output_state(machine, QubitState(np.array([1.0, 0.0, 0.0])))
    mean = np.trace(plus.matrix @ tensor(SIGMA1, SIGMA0)).real
    assert mean == pytest.approx(np.cos(np.pi / 4), abs=1e-14)


class TestCovariantTransport:
    def test_identity_transport_changes_nothing(self):
        machine = cnot_machine()
        moved = covariant_transport(machine, SIGMA0)
        assert np.allclose(moved.unitary, machine.unitary, atol=1e-15)
        assert np.array_equal(moved.probe.bloch, machine.probe.bloch)
        gens = [g.coeffs for g in moved.observables.generators]
        assert np.allclose(gens, [g.coeffs for g in machine.observables.generators], atol=1e-15)

    def test_exact_machines_keep_zero_defect(self, rng):
        machine = one_param_machine(random_observable(rng, min_axis=0.1))
        for _ in range(10):
            moved = covariant_transport(machine, random_su2(rng))
            assert verify_exact(moved, tol=1e-10).passed

    def test_defects_are_invariant_for_any_machine(self, rng):
        cls = ObservableClass(ClassKind.TWO_PARAM_NONCOMMUTING, (S1, S2))
        machine = CloningMachine(random_unitary(rng, 4), random_state(rng), cls)
        base = verify_exact(machine, tol=np.inf).max_defect
        for _ in range(10):
            moved = covariant_transport(machine, random_su2(rng))
            assert verify_exact(moved, tol=np.inf).max_defect == pytest.approx(base, abs=1e-10)

    def test_gains_probe_and_kind_ride_along(self, rng):
        machine = t_machine(0.7)
        moved = covariant_transport(machine, random_su2(rng))
        assert moved.gains == machine.gains
        assert np.array_equal(moved.probe.bloch, machine.probe.bloch)
        assert moved.observables.kind is machine.observables.kind
        assert verify_approximate(moved, tol=1e-10).passed

    def test_rejects_non_unitary_transport(self):
        with pytest.raises(ValueError):
            covariant_transport(cnot_machine(), np.array([[1.0, 0.0], [0.0, 2.0]]))


def test_output_state_matches_dense_evolution(rng):
    machine = t_machine(0.9)
    state = random_state(rng)
    joint = output_state(machine, state).matrix
    expected = machine.unitary @ tensor(state.density, machine.probe.density) @ dagger(machine.unitary)
    assert np.allclose(joint, expected, atol=1e-14)


def test_cnot_dephases_the_signal_in_the_transverse_plane():
    plus = QubitState(np.array([1.0, 0.0, 0.0]))
    joint = output_state(cnot_machine(), plus)
    assert np.allclose(partial_trace(joint, 1).bloch, 0.0, atol=1e-14)


def test_passing_machines_pass_on_every_member_of_the_span(rng):
    for machine in (commuting_machine(random_observable(rng, min_axis=0.1), 0.9, -1.3),
                    one_param_machine(random_observable(rng, min_axis=0.1))):
        gen_defect = verify_exact(machine, tol=1e-10).max_defect
        for member in sample_members(machine.observables, 100, seed=11):
            for branch in (1, 2):
                lifted = heisenberg_lift(machine.unitary, machine.probe, member, branch)
                defect = lift_defect(lifted, member)
                assert defect < max(10.0 * gen_defect, 1e-12)


def test_defect_of_probe_mixture_never_beats_both_endpoints(rng):
    """Each defect is a norm of an expression affine in the probe, so it is
    convex along any probe segment: interior probes cannot exceed the
    worse endpoint."""
    cls = ObservableClass(ClassKind.ONE_PARAM, (S3,))
    for u in (CNOT, random_unitary(rng, 4)):
        ends = []
        for z in (1.0, -1.0):
            m = CloningMachine(u, QubitState(np.array([0.0, 0.0, z])), cls)
            ends.append(verify_exact(m, tol=np.inf).max_defect)
        for lam in np.linspace(0.0, 1.0, 9):
            z = lam * 1.0 + (1.0 - lam) * -1.0
            m = CloningMachine(u, QubitState(np.array([0.0, 0.0, z])), cls)
            mid = verify_exact(m, tol=np.inf).max_defect
            assert mid <= max(ends) + 1e-10


def test_machine_dict_round_trip():
    machine = t_machine(1.1)
    data = machine_to_dict(machine)
    back = machine_from_dict(data)
    assert np.allclose(back.unitary, machine.unitary, atol=1e-15)
    assert np.array_equal(back.probe.bloch, machine.probe.bloch)
    assert back.gains == machine.gains
    assert back.observables.kind is machine.observables.kind


def test_machine_dict_round_trip_without_gains():
    machine = cnot_machine()
    back = machine_from_dict(machine_to_dict(machine))
    assert back.gains is None
    assert np.allclose(back.unitary, machine.unitary, atol=1e-15)


def test_machine_from_dict_rejects_malformed_documents():
    with pytest.raises(ValueError):
        machine_from_dict({"unitary": [[1.0]]})
    with pytest.raises(ValueError):
        machine_from_dict(None)


def test_report_to_dict_fields():
    report = verify_exact(cnot_machine(), tol=1e-10)
    data = report_to_dict(report)
    assert data["passed"] is True
    assert data["tolerance"] == 1e-10
    assert data["gains_used"] == [1.0, 1.0]
    assert len(data["per_generator_defects"]) == 1
