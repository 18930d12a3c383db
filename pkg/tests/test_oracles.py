import itertools

import numpy as np
import pytest

from majsurf.majorana import MajoranaMonomial, fusion_operator, reference_qubit_image
from majsurf.oracles import (
    FockState,
    StateVector,
    equivalence_check,
    extract_fock_logical,
    extract_logical_state,
    fock_codespace_basis,
    qubit_codespace_basis,
)
from majsurf.pauli import PauliOperator

P = PauliOperator.from_str
M = MajoranaMonomial.from_str


def ket(n_qubits, bits):
    amps = np.zeros(2 ** n_qubits, dtype=complex)
    amps[int(bits, 2)] = 1.0
    return StateVector(n_qubits, amps)


class TestStateVector:
    def test_t_on_plus(self):
        sv = StateVector(1).apply_gate("H", 0).apply_gate("T", 0)
        want = np.array([1, np.exp(1j * np.pi / 4)]) / np.sqrt(2)
        assert np.allclose(sv.amps, want)

    def test_x_on_zero(self):
        sv = StateVector(1).apply_gate("X", 0)
        assert np.allclose(sv.amps, [0, 1])

    def test_s_squared_is_z(self):
        sv = StateVector(1).apply_gate("H", 0).apply_gate("S", 0).apply_gate("S", 0)
        minus = np.array([1, -1]) / np.sqrt(2)
        assert np.allclose(sv.amps, minus)

    def test_cx_action(self):
        sv = ket(2, "10").apply_gate("CX", 0, 1)
        assert np.allclose(sv.amps, ket(2, "11").amps)

    def test_cz_action(self):
        sv = ket(2, "11").apply_gate("CZ", 0, 1)
        assert np.allclose(sv.amps, -ket(2, "11").amps)

    def test_measure_z_on_zero_deterministic(self, rng):
        sv = StateVector(1)
        before = sv.amps.copy()
        assert sv.measure_pauli(P("Z0"), rng) == +1
        assert np.allclose(sv.amps, before)

    def test_measure_x_on_zero_random(self, rng):
        outcomes = [StateVector(1).measure_pauli(P("X0"), rng) for _ in range(400)]
        plus = outcomes.count(+1)
        assert 130 < plus < 270

    def test_measure_rejects_non_hermitian(self, rng):
        with pytest.raises(ValueError):
            StateVector(1).measure_pauli(P("i Z0"), rng)

    def test_norm_preserved_random_circuit(self, rng):
        sv = StateVector(4)
        gates_1q = ["H", "S", "T", "X", "Y", "Z"]
        for _ in range(1000):
            if rng.random() < 0.7:
                sv.apply_gate(str(rng.choice(gates_1q)), int(rng.integers(0, 4)))
            else:
                a, b = rng.choice(4, size=2, replace=False)
                sv.apply_gate("CX" if rng.random() < 0.5 else "CZ", int(a), int(b))
        assert abs(sv.norm() - 1.0) < 1e-12


def fock_basis_state(n_modes, occ):
    amps = np.zeros(2 ** n_modes, dtype=complex)
    amps[int("".join(map(str, occ)), 2)] = 1.0
    return FockState(n_modes, amps)


class TestFockState:
    def test_creation_on_vacuum(self):
        fs = FockState(2).apply_creation(0)
        assert np.allclose(fs.amps, fock_basis_state(2, (1, 0)).amps)

    def test_creation_sign_string(self):
        # f_1^dag |1,0> picks up (-1)^(N_0) = -1.
        fs = fock_basis_state(2, (1, 0)).apply_creation(1)
        assert np.allclose(fs.amps, -fock_basis_state(2, (1, 1)).amps)

    def test_annihilation_kills_empty(self):
        fs = FockState(2).apply_annihilation(1)
        assert fs.norm() == 0.0

    def test_number_operator_eigenvalue(self):
        # n_p via f_p^dag f_p on a basis state returns N_p.
        for occ in itertools.product((0, 1), repeat=2):
            for p in range(2):
                fs = fock_basis_state(2, occ)
                fs.apply_annihilation(p).apply_creation(p)
                coeff = np.vdot(fock_basis_state(2, occ).amps, fs.amps)
                assert np.isclose(coeff.real, occ[p])

    def test_fusion_on_vacuum_is_minus_one(self, rng):
        # i c_{2p} c_{2p+1} = 2 n_p - 1: eigenvalue -1 on the vacuum.
        fs = FockState(1)
        assert fs.measure_monomial(fusion_operator(0, 1), rng) == -1

    def test_fusion_on_occupied_is_plus_one(self, rng):
        fs = FockState(1).apply_creation(0)
        assert fs.measure_monomial(fusion_operator(0, 1), rng) == +1

    def test_parity_conserved_by_even_monomials(self, rng):
        fs = FockState(3)
        fs.apply_monomial(M("+i c0 c3"))
        fs.amps /= fs.norm()
        before = fs.total_parity_expectation()
        for mono in (M("+i c1 c2"), M("-1 c0 c1 c4 c5"), M("+1 c2 c3")):
            fs.apply_monomial(mono)
            fs.amps /= fs.norm()
            assert np.isclose(fs.total_parity_expectation(), before, atol=1e-12)

    def test_braid_conjugation(self):
        # Braid(p, q) sends c_p -> c_q and c_q -> -c_p, i.e. U c_p = c_q U.
        n = 2
        rng = np.random.default_rng(7)
        amps = rng.normal(size=4) + 1j * rng.normal(size=4)
        amps /= np.linalg.norm(amps)
        for (p, q) in [(0, 1), (1, 2), (0, 3)]:
            cases = [(MajoranaMonomial.c(p), MajoranaMonomial.c(q)),
                     (MajoranaMonomial.c(q), MajoranaMonomial((p,), 2))]
            for probe, want in cases:
                lhs = FockState(n, amps.copy()).apply_monomial(probe).apply_braid(p, q)
                rhs = FockState(n, amps.copy()).apply_braid(p, q).apply_monomial(want)
                assert np.allclose(lhs.amps, rhs.amps), (p, q, str(probe))

    def test_braid_matches_spec_unitary(self):
        # (1 + c_q c_p)/sqrt(2) built directly from monomial applications.
        rng = np.random.default_rng(3)
        amps = rng.normal(size=8) + 1j * rng.normal(size=8)
        amps /= np.linalg.norm(amps)
        braided = FockState(3, amps.copy()).apply_braid(1, 4)
        ident = FockState(3, amps.copy())
        moved = FockState(3, amps.copy()).apply_monomial(MajoranaMonomial.from_factors((4, 1)))
        assert np.allclose(braided.amps, (ident.amps + moved.amps) / np.sqrt(2))


class TestCrossOracle:
    """Fock engine vs statevector through the reference chain mapping."""

    @pytest.mark.parametrize("n_modes", [1, 2, 3])
    def test_monomial_application_matches(self, n_modes):
        rng = np.random.default_rng(11)
        dim = 2 ** n_modes
        amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        amps /= np.linalg.norm(amps)
        monos = [MajoranaMonomial(m, ph) for r in range(3)
                 for m in itertools.combinations(range(2 * n_modes), r) for ph in (0, 1)]
        for mono in monos:
            fock = FockState(n_modes, amps.copy()).apply_monomial(mono)
            qub = StateVector(n_modes, amps.copy()).apply_pauli(
                reference_qubit_image(mono, n_modes))
            assert np.allclose(fock.amps, qub.amps), str(mono)

    def test_braid_matches_qubit_path(self):
        rng = np.random.default_rng(13)
        amps = rng.normal(size=16) + 1j * rng.normal(size=16)
        amps /= np.linalg.norm(amps)
        fock = FockState(4, amps.copy()).apply_braid(2, 5)
        ident = StateVector(4, amps.copy())
        img = reference_qubit_image(MajoranaMonomial.from_factors((5, 2)), 4)
        moved = StateVector(4, amps.copy()).apply_pauli(img)
        assert np.allclose(fock.amps, (ident.amps + moved.amps) / np.sqrt(2))


class TestLogicalExtraction:
    def tetron_basis(self):
        stabs = [(P("X0 X1 X2 X3"), +1), (P("Z0 Z2"), +1), (P("Z1 Z3"), +1)]
        return qubit_codespace_basis(4, stabs, [P("Z0 Z1")], [P("X0 X2")])

    def test_codespace_basis_orthonormal(self):
        basis = self.tetron_basis()
        for i, a in enumerate(basis):
            for j, b in enumerate(basis):
                assert np.isclose(np.vdot(a, b), 1.0 if i == j else 0.0, atol=1e-12)

    def test_extraction_and_fidelity(self):
        basis = self.tetron_basis()
        state = StateVector(4, (basis[0] + 1j * basis[1]) / np.sqrt(2))
        logical = extract_logical_state(state, basis)
        want = np.array([1, 1j]) / np.sqrt(2)
        assert abs(np.vdot(want, logical)) ** 2 > 1 - 1e-12

    def test_extraction_rejects_leakage(self):
        basis = self.tetron_basis()
        bad = np.zeros(16, dtype=complex)
        bad[1] = 1.0
        with pytest.raises(ValueError):
            extract_logical_state(StateVector(4, bad), basis)

    def test_fock_tetron_extraction_matches(self):
        # Tetron code on 4 Majoranas: same encoded state both ways.
        stab = [(M("-1 c0 c1 c2 c3"), +1)]
        fbasis = fock_codespace_basis(2, stab, [fusion_operator(0, 1)], [fusion_operator(1, 2)])
        state = FockState(2, (fbasis[0] + fbasis[1]) / np.sqrt(2))
        logical = extract_fock_logical(state, fbasis)
        assert equivalence_check(np.array([1, 1]) / np.sqrt(2), logical)

    def test_equivalence_negative_control(self):
        a = np.array([1, 0], dtype=complex)
        b = np.array([1, 1], dtype=complex) / np.sqrt(2)
        assert not equivalence_check(a, b)
