from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from buscluster.lattice import LatticeSpec
from buscluster.qubus import (
    BETA_DEFAULT,
    BETA_SQ_CPHASE,
    BusReset,
    CondDisplacement,
    HybridState,
    P,
    PreconditionError,
    Quadrature,
    X,
    apply_cdisp,
    apply_sequence,
    apply_z_frame,
    entangling_phase,
    extract_diagonal_unitary,
    fidelity,
    ideal_graph_state,
    init_register,
    is_bus_disentangled,
    is_cphase_equivalent,
    verify_cluster_state,
    z_values,
)
from conftest import fock_displacement

PI4 = math.pi / 4


def gate_ops(q1, q2, beta=BETA_DEFAULT):
    # +p q1, -x q2, -p q1, +x q2
    return [
        CondDisplacement(q1, P, 1, beta),
        CondDisplacement(q2, X, -1, beta),
        CondDisplacement(q1, P, -1, beta),
        CondDisplacement(q2, X, 1, beta),
    ]


def chained_ops():
    # two chained gates on (0,1) and (1,2), six displacements
    return [
        CondDisplacement(0, X),
        CondDisplacement(1, P),
        CondDisplacement(0, X, -1),
        CondDisplacement(2, X, -1),
        CondDisplacement(1, P, -1),
        CondDisplacement(2, X),
    ]


def zz(key, i, j):
    return (1 - 2 * int(key[i])) * (1 - 2 * int(key[j]))


class TestQuadrature:
    def test_two_values(self):
        assert set(Quadrature) == {X, P}

    def test_opposite(self):
        assert X.opposite is P and P.opposite is X

    def test_step_axes(self):
        assert CondDisplacement(0, X).step == pytest.approx(complex(BETA_DEFAULT, 0))
        assert CondDisplacement(0, P, -1).step == pytest.approx(complex(0, -BETA_DEFAULT))

    @pytest.mark.parametrize("kw", [{"sign": 0}, {"sign": 2}, {"magnitude": 0.0}, {"magnitude": -1.0}, {"qubit": -1}])
    def test_rejects_bad_fields(self, kw):
        args = {"qubit": 0, "quad": X} | kw
        with pytest.raises(ValueError):
            CondDisplacement(**args)


class TestInitRegister:
    def test_one_qubit(self):
        s = init_register(1)
        br = s.branches()
        assert set(br) == {"0", "1"}
        for amp, alpha in br.values():
            assert amp == pytest.approx(1 / math.sqrt(2))
            assert alpha == 0

    def test_two_qubits(self):
        s = init_register(2)
        assert np.allclose(s.amps, 0.5)
        assert np.all(s.alpha == 0)

    def test_norm(self):
        assert abs(init_register(3).norm() - 1) < 1e-12

    def test_zero_qubits_rejected(self):
        with pytest.raises(ValueError):
            init_register(0)

    def test_state_is_read_only(self):
        s = init_register(2)
        with pytest.raises(ValueError):
            s.amps[0] = 1.0

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            HybridState(2, np.zeros(3, complex), np.zeros((1, 4), complex))


class TestApplyCdisp:
    def test_first_displacement_no_phase(self):
        s0 = init_register(1)
        s1 = apply_cdisp(s0, CondDisplacement(0, X))
        br = s1.branches()
        assert br["0"][1] == pytest.approx(BETA_DEFAULT)
        assert br["1"][1] == pytest.approx(-BETA_DEFAULT)
        assert np.allclose(s1.amps, s0.amps)

    def test_momentum_is_imaginary(self):
        s1 = apply_cdisp(init_register(1), CondDisplacement(0, P))
        assert s1.branches()["0"][1] == pytest.approx(1j * BETA_DEFAULT)

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            apply_cdisp(init_register(2), CondDisplacement(2, X))
        with pytest.raises(IndexError):
            apply_cdisp(init_register(2), CondDisplacement(0, X, bus=1))

    def test_input_unchanged(self):
        s0 = init_register(2)
        apply_sequence(s0, gate_ops(0, 1))
        assert np.all(s0.alpha == 0) and np.allclose(s0.amps, 0.5)

    def test_z_values(self):
        assert list(z_values(2, 0)) == [1, -1, 1, -1]
        assert list(z_values(2, 1)) == [1, 1, -1, -1]

    def test_matches_fock_space_product(self):
        # branch phases against explicit displacement operators on a truncated oscillator
        ops = gate_ops(0, 1)
        out = apply_sequence(init_register(2), ops)
        dim = 60
        vac = np.zeros(dim, complex)
        vac[0] = 1
        for i, key in enumerate(["00", "10", "01", "11"]):
            idx = int(key[::-1], 2)
            z = [1 - 2 * int(c) for c in key]
            psi = vac
            for op in ops:
                psi = fock_displacement(op.step * z[op.qubit], dim) @ psi
            ratio = np.vdot(vac, psi)
            assert abs(abs(ratio) - 1) < 1e-9
            expected = np.angle(ratio)
            got = np.angle(out.amps[idx] / 0.5)
            assert abs(np.angle(np.exp(1j * (got - expected)))) < 1e-9


class TestDisentangled:
    def test_fresh(self):
        assert is_bus_disentangled(init_register(3))

    def test_after_first_op(self):
        s = apply_sequence(init_register(2), gate_ops(0, 1)[:1])
        assert not is_bus_disentangled(s)

    def test_after_loop(self):
        s = apply_sequence(init_register(2), gate_ops(0, 1))
        assert is_bus_disentangled(s)
        assert np.max(np.abs(s.alpha)) <= 1e-9


class TestBusReset:
    def test_reset_clean_bus(self):
        s = apply_sequence(init_register(2), gate_ops(0, 1) + [BusReset(0)] + gate_ops(0, 1))
        assert is_bus_disentangled(s)

    def test_reset_entangled_bus_refused(self):
        with pytest.raises(PreconditionError):
            apply_sequence(init_register(2), gate_ops(0, 1)[:2] + [BusReset(0)])

    def test_two_buses_independent(self):
        ops = [CondDisplacement(q.qubit, q.quad, q.sign, q.magnitude, bus=1) for q in gate_ops(1, 2)]
        s0 = init_register(3, n_buses=2)
        s1 = apply_sequence(s0, gate_ops(0, 1) + ops)
        ph = extract_diagonal_unitary(s0, s1)
        for key, v in ph.items():
            assert v == pytest.approx(math.remainder(PI4 * (zz(key, 0, 1) + zz(key, 1, 2)), 2 * math.pi), abs=1e-9)


class TestExtractDiagonal:
    def test_identity(self):
        s = init_register(2)
        assert all(v == 0 for v in extract_diagonal_unitary(s, s).values())

    def test_cphase_loop(self):
        s0 = init_register(2)
        ph = extract_diagonal_unitary(s0, apply_sequence(s0, gate_ops(0, 1)))
        assert ph["00"] == pytest.approx(PI4, abs=1e-12)
        assert ph["01"] == pytest.approx(-PI4, abs=1e-12)
        assert ph["10"] == pytest.approx(-PI4, abs=1e-12)
        assert ph["11"] == pytest.approx(PI4, abs=1e-12)

    def test_half_area(self):
        s0 = init_register(2)
        ph = extract_diagonal_unitary(s0, apply_sequence(s0, gate_ops(0, 1, math.sqrt(math.pi / 16))))
        for key, v in ph.items():
            assert v == pytest.approx(math.pi / 8 * zz(key, 0, 1), abs=1e-12)

    def test_entangled_bus_refused(self):
        s0 = init_register(2)
        with pytest.raises(PreconditionError):
            extract_diagonal_unitary(s0, apply_sequence(s0, gate_ops(0, 1)[:1]))

    def test_zero_amplitude_is_undefined(self):
        amps = np.array([1, 0, 0, 0], complex)
        s = HybridState(2, amps, np.zeros((1, 4), complex))
        ph = extract_diagonal_unitary(s, s)
        assert ph["00"] == 0 and ph["10"] is None

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            extract_diagonal_unitary(init_register(1), init_register(2))


class TestCphaseEquivalent:
    def test_quarter_phases(self):
        assert is_cphase_equivalent({"00": PI4, "01": -PI4, "10": -PI4, "11": PI4})

    def test_identity(self):
        assert not is_cphase_equivalent({"00": 0.0, "01": 0.0, "10": 0.0, "11": 0.0})

    def test_half_strength(self):
        e = math.pi / 8
        assert not is_cphase_equivalent({"00": e, "01": -e, "10": -e, "11": e})

    def test_negative_pi_counts(self):
        assert is_cphase_equivalent({"00": 0.0, "01": 0.0, "10": 0.0, "11": -math.pi})

    def test_incomplete(self):
        with pytest.raises(ValueError):
            is_cphase_equivalent({"00": 0.0, "01": 0.0})
        with pytest.raises(ValueError):
            entangling_phase({"00": 0.0, "01": None, "10": 0.0, "11": 0.0})


class TestVerifyCluster:
    def test_pair_from_loop(self):
        s = apply_sequence(init_register(2), gate_ops(0, 1))
        rep = verify_cluster_state(s, LatticeSpec(1, 2), [-PI4, -PI4])
        assert rep.passed
        assert rep.stabilizer_values == pytest.approx([1.0, 1.0], abs=1e-12)

    def test_pair_without_frame_fails(self):
        s = apply_sequence(init_register(2), gate_ops(0, 1))
        assert not verify_cluster_state(s, LatticeSpec(1, 2)).passed

    def test_ideal_square(self):
        lat = LatticeSpec(2, 2)
        amps = ideal_graph_state(4, lat.edges)
        s = HybridState(4, amps, np.zeros((1, 16), complex))
        rep = verify_cluster_state(s, lat)
        assert rep.passed and rep.min_value == pytest.approx(1.0)

    def test_chain_without_frame_fails(self):
        s = apply_sequence(init_register(3), chained_ops())
        assert not verify_cluster_state(s, LatticeSpec(1, 3), [0.0] * 3).passed

    def test_chain_with_frame(self):
        s = apply_sequence(init_register(3), chained_ops())
        assert verify_cluster_state(s, LatticeSpec(1, 3), [-PI4, -2 * PI4, -PI4]).passed

    def test_missing_edge_detected(self):
        lat = LatticeSpec(2, 2)
        edges = sorted(lat.edges)[1:]
        s = HybridState(4, ideal_graph_state(4, edges), np.zeros((1, 16), complex))
        rep = verify_cluster_state(s, lat)
        assert not rep.passed
        # the two endpoints of the dropped edge see <K> = 0, the others +1
        a, b = sorted(lat.edges)[0]
        for q, v in enumerate(rep.stabilizer_values):
            assert v == pytest.approx(0.0 if q in (a, b) else 1.0, abs=1e-12)

    def test_entangled_bus_refused(self):
        s = apply_sequence(init_register(2), gate_ops(0, 1)[:3])
        with pytest.raises(PreconditionError):
            verify_cluster_state(s, LatticeSpec(1, 2))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            verify_cluster_state(init_register(3), LatticeSpec(2, 2))

    def test_frame_length_checked(self):
        with pytest.raises(ValueError):
            apply_z_frame(init_register(2), [0.0])


class TestChainedGates:
    def test_phases(self):
        s0 = init_register(3)
        s1 = apply_sequence(s0, chained_ops())
        assert is_bus_disentangled(s1)
        for key, v in extract_diagonal_unitary(s0, s1).items():
            want = math.remainder(PI4 * (zz(key, 0, 1) + zz(key, 1, 2)), 2 * math.pi)
            assert abs(math.remainder(v - want, 2 * math.pi)) < 1e-9

    def test_equals_two_separate_gates(self):
        s0 = init_register(3)
        chained = extract_diagonal_unitary(s0, apply_sequence(s0, chained_ops()))
        split = extract_diagonal_unitary(s0, apply_sequence(s0, gate_ops(0, 1) + gate_ops(1, 2)))
        for key in chained:
            assert abs(math.remainder(chained[key] - split[key], 2 * math.pi)) < 1e-9
        assert len(chained_ops()) == 6 < len(gate_ops(0, 1) + gate_ops(1, 2)) == 8


class TestProperties:
    @given(
        st.lists(
            st.tuples(st.integers(0, 2), st.sampled_from([X, P]), st.sampled_from([1, -1]), st.floats(0.05, 1.0)),
            min_size=1,
            max_size=12,
        )
    )
    def test_norm_preserved(self, raw):
        s = apply_sequence(init_register(3), [CondDisplacement(*r) for r in raw])
        assert abs(s.norm() - 1) < 1e-12

    @given(
        st.lists(
            st.tuples(st.integers(0, 2), st.sampled_from([X, P]), st.sampled_from([1, -1]), st.floats(0.05, 1.0)),
            max_size=8,
        ),
        st.integers(0, 2),
        st.sampled_from([X, P]),
        st.floats(0.05, 1.0),
    )
    def test_reversible(self, raw, q, quad, mag):
        s = apply_sequence(init_register(3), [CondDisplacement(*r) for r in raw])
        op = CondDisplacement(q, quad, 1, mag)
        back = apply_sequence(s, [op, op.inverse()])
        assert np.max(np.abs(back.alpha - s.alpha)) < 1e-12
        assert np.max(np.abs(back.amps - s.amps)) < 1e-12

    @given(st.floats(0.01, 1.0), st.permutations([0, 1, 2]))
    def test_loop_phase_is_area(self, beta, order):
        q1, q2 = order[0], order[1]
        s0 = init_register(3)
        ph = extract_diagonal_unitary(s0, apply_sequence(s0, gate_ops(q1, q2, beta)))
        for key, v in ph.items():
            want = 2 * beta**2 * zz(key, q1, q2)
            assert abs(math.remainder(v - want, 2 * math.pi)) < 1e-9

    @given(st.integers(2, 4))
    def test_path_cluster_matches_ideal(self, n):
        ops = []
        for j in range(n - 1):
            ops += gate_ops(j, j + 1)
        s = apply_sequence(init_register(n), ops)
        frame = [-PI4 * (1 if j in (0, n - 1) else 2) for j in range(n)]
        s = apply_z_frame(s, frame)
        ideal = ideal_graph_state(n, [(j, j + 1) for j in range(n - 1)])
        assert fidelity(np.asarray(s.amps), ideal) >= 1 - 1e-9


def test_cphase_constant():
    assert BETA_DEFAULT**2 == pytest.approx(BETA_SQ_CPHASE)
    assert BETA_SQ_CPHASE == math.pi / 8
