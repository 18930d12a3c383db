import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from majsurf.majorana import (
    FermionCode,
    MajoranaMonomial,
    build_hexon_code,
    build_tetron_code,
    check_monomial,
    code_distance_bruteforce,
    fusion_operator,
    hermitian_check_phase,
    mono_commutes,
    mono_multiply,
    reference_qubit_image,
)
from majsurf.pauli import PauliOperator, commutes as pauli_commutes, multiply as pauli_multiply

from matrix_oracle import monomial_matrix, pauli_matrix


def M(text):
    return MajoranaMonomial.from_str(text)


class TestMonoMultiply:
    def test_self_square_is_identity(self):
        assert mono_multiply(M("+1 c0"), M("+1 c0")) == MajoranaMonomial.identity()

    def test_anticommutation_reorder(self):
        assert mono_multiply(M("+1 c1"), M("+1 c0")) == M("-1 c0 c1")

    def test_pair_product_cancels_shared_mode(self):
        # (c0 c1)(c1 c2) = c0 c2; matrix oracle on 2 Dirac modes agrees.
        got = mono_multiply(M("+1 c0 c1"), M("+1 c1 c2"))
        assert got == M("+1 c0 c2")
        lhs = monomial_matrix(M("+1 c0 c1"), 2) @ monomial_matrix(M("+1 c1 c2"), 2)
        assert np.allclose(lhs, monomial_matrix(got, 2))

    def test_all_products_match_matrix_oracle_3_modes(self):
        monos = [MajoranaMonomial(m) for r in range(4)
                 for m in itertools.combinations(range(6), r)]
        for a in monos:
            for b in monos:
                got = mono_multiply(a, b)
                lhs = monomial_matrix(a, 3) @ monomial_matrix(b, 3)
                assert np.allclose(lhs, monomial_matrix(got, 3)), (str(a), str(b))


class TestMonoCommutes:
    def test_disjoint_even_pairs(self):
        assert mono_commutes(M("+1 c0 c1"), M("+1 c2 c3"))

    def test_overlapping_pairs_anticommute(self):
        # Tetron logical pair: Zbar = i c0 c1 vs Xbar = i c1 c2.
        assert not mono_commutes(fusion_operator(0, 1), fusion_operator(1, 2))

    def test_weight4_vs_contained_pair(self):
        assert mono_commutes(M("+1 c0 c1 c2 c3"), M("+1 c0 c1"))
        a = monomial_matrix(M("+1 c0 c1 c2 c3"), 2)
        b = monomial_matrix(M("+1 c0 c1"), 2)
        assert np.allclose(a @ b, b @ a)

    def test_exhaustive_vs_matrix_oracle_3_modes(self):
        monos = [MajoranaMonomial(m) for r in range(1, 4)
                 for m in itertools.combinations(range(6), r)]
        for a in monos:
            for b in monos:
                ma, mb = monomial_matrix(a, 3), monomial_matrix(b, 3)
                oracle = np.allclose(ma @ mb, mb @ ma)
                assert mono_commutes(a, b) == oracle, (str(a), str(b))


class TestCheckPhase:
    def test_weight2_gives_i(self):
        assert hermitian_check_phase(2) == 1
        assert check_monomial((0, 1)) == fusion_operator(0, 1)

    def test_weight4_gives_minus_one(self):
        assert hermitian_check_phase(4) == 2

    def test_weight6_gives_minus_i(self):
        assert hermitian_check_phase(6) == 3

    def test_odd_rejected(self):
        with pytest.raises(ValueError):
            hermitian_check_phase(3)

    @pytest.mark.parametrize("w", [2, 4, 6])
    def test_check_hermitian_and_squares_to_identity(self, w):
        chk = check_monomial(tuple(range(w)))
        assert chk.is_hermitian()
        assert mono_multiply(chk, chk) == MajoranaMonomial.identity()


class TestReferenceImage:
    def test_c0_single_mode(self):
        assert reference_qubit_image(M("+1 c0"), 1) == PauliOperator.from_str("X0")

    def test_number_operator_image(self):
        # i c0 c1 -> i X Y = -Z on one qubit.
        assert reference_qubit_image(fusion_operator(0, 1), 1) == PauliOperator.from_str("- Z0")

    def test_c2_has_one_link_chain(self):
        assert reference_qubit_image(M("+1 c2"), 2) == PauliOperator.from_str("Z0 X1")

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            reference_qubit_image(M("+1 c4"), 2)

    def test_homomorphism_exhaustive_3_modes(self):
        monos = [MajoranaMonomial(m, ph) for r in range(3)
                 for m in itertools.combinations(range(6), r) for ph in range(4)]
        for a in monos:
            for b in monos:
                img = reference_qubit_image(mono_multiply(a, b), 3)
                split = pauli_multiply(reference_qubit_image(a, 3), reference_qubit_image(b, 3))
                assert img == split, (str(a), str(b))

    def test_commutation_transfers_exhaustive_3_modes(self):
        monos = [MajoranaMonomial(m) for r in range(1, 4)
                 for m in itertools.combinations(range(6), r)]
        for a in monos:
            for b in monos:
                assert mono_commutes(a, b) == pauli_commutes(
                    reference_qubit_image(a, 3), reference_qubit_image(b, 3))


class TestAdjoint:
    @given(st.lists(st.integers(0, 7), max_size=6), st.integers(0, 3))
    @settings(max_examples=150, deadline=None)
    def test_adjoint_matches_matrix(self, modes, phase):
        mono = MajoranaMonomial.from_factors(modes, phase)
        adj = mono.adjoint()
        assert np.allclose(monomial_matrix(mono, 4).conj().T, monomial_matrix(adj, 4))

    def test_even_paper_phase_hermitian_and_involutory(self):
        for w in (2, 4, 6):
            for modes in itertools.combinations(range(8), w):
                mono = check_monomial(modes)
                assert mono.is_hermitian()
                assert mono_multiply(mono, mono) == MajoranaMonomial.identity()


class TestCodes:
    def test_tetron_parameters(self):
        code = build_tetron_code()
        code.validate()
        assert code.n_dirac == 2 and code.k == 1
        assert code_distance_bruteforce(code) == 2

    def test_tetron_check_phase_convention(self):
        code = build_tetron_code()
        assert code.checks[0] == M("-1 c0 c1 c2 c3")

    def test_hexon_parameters(self):
        code = build_hexon_code()
        code.validate()
        assert code.n_dirac == 3 and code.k == 2
        assert code_distance_bruteforce(code) == 2

    def test_tetron_no_weight1_logical(self):
        # Exhaustive: no monomial of weight < 2 commutes with the check while
        # sitting outside the stabilizer, hence d = 2.
        code = build_tetron_code()
        chk = code.checks[0]
        for modes in itertools.combinations(range(4), 1):
            cand = MajoranaMonomial(modes)
            assert not mono_commutes(cand, chk)

    def test_zero_check_code_distance_one(self):
        code = FermionCode(2, (), (MajoranaMonomial((0, 1), 1),), (MajoranaMonomial((0,),),))
        assert code_distance_bruteforce(code) == 1

    def test_logical_anticommutation_pattern(self):
        for code in (build_tetron_code(), build_hexon_code()):
            for i, (lz, lx) in enumerate(zip(code.logical_z, code.logical_x)):
                assert not mono_commutes(lz, lx)
                for chk in code.checks:
                    assert mono_commutes(lz, chk) and mono_commutes(lx, chk)


class TestTextForm:
    def test_round_trip(self):
        for text in ("+i c0 c1", "-1 c0 c1 c2 c3", "+1 I", "-i c2 c5 c7"):
            assert str(M(text)) == text
