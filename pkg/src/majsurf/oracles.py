"""Brute-force reference simulators.

Two independent engines validate every protocol's logical action at zero
noise: a dense qubit statevector (supports the non-Clifford T gate) and a
fermionic Fock-space engine whose elementary operators follow the occupation
sign-string rules directly.  Neither is performance-tuned; both are capped at
desk-scale sizes.

Basis conventions: qubit 0 / mode 0 is the most significant bit of the basis
index.  Global phase is never compared anywhere; only observable expectations
and branch fidelities.
"""

from __future__ import annotations

import numpy as np

from .majorana import MajoranaMonomial
from .pauli import PauliOperator

MAX_QUBITS = 24
MAX_MODES = 12

_GATES_1Q = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.diag([1, 1j]).astype(complex),
    "SDG": np.diag([1, -1j]).astype(complex),
    "T": np.diag([1, np.exp(1j * np.pi / 4)]).astype(complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
}


class StateVector:
    """Dense state on n_qubits <= 24."""

    def __init__(self, n_qubits: int, amplitudes: np.ndarray | None = None):
        if n_qubits > MAX_QUBITS:
            raise ValueError(f"statevector capped at {MAX_QUBITS} qubits")
        self.n_qubits = n_qubits
        if amplitudes is None:
            amplitudes = np.zeros(2 ** n_qubits, dtype=complex)
            amplitudes[0] = 1.0
        self.amps = np.asarray(amplitudes, dtype=complex)
        if self.amps.shape != (2 ** n_qubits,):
            raise ValueError("amplitude vector has wrong length")

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amps.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalize(self) -> "StateVector":
        self.amps /= np.linalg.norm(self.amps)
        return self

    def _axes(self, q: int):
        if not 0 <= q < self.n_qubits:
            raise ValueError(f"qubit {q} out of range")
        return 2 ** q, 2 ** (self.n_qubits - q - 1)

    def apply_gate(self, name: str, *targets: int) -> "StateVector":
        if name in ("CX", "CZ"):
            c, t = targets
            if c == t:
                raise ValueError("control equals target")
            view = self.amps.reshape([2] * self.n_qubits)
            idx = [slice(None)] * self.n_qubits
            idx[c] = 1
            sub = view[tuple(idx)]
            if name == "CZ":
                axes_t = t if t < c else t - 1
                idx2 = [slice(None)] * (self.n_qubits - 1)
                idx2[axes_t] = 1
                sub[tuple(idx2)] *= -1
            else:
                axes_t = t if t < c else t - 1
                view[tuple(idx)] = np.flip(sub, axis=axes_t)
            return self
        (q,) = targets
        mat = _GATES_1Q[name]
        before, after = self._axes(q)
        view = self.amps.reshape(before, 2, after)
        self.amps = np.einsum("ab,ibj->iaj", mat, view).reshape(-1)
        return self

    def apply_pauli(self, op: PauliOperator) -> "StateVector":
        for q, letter in op.support.items():
            self.apply_gate(letter, q)
        self.amps *= op.phase_value()
        return self

    def expectation_pauli(self, op: PauliOperator) -> complex:
        scratch = self.copy().apply_pauli(op)
        return complex(np.vdot(self.amps, scratch.amps))

    def measure_pauli(self, op: PauliOperator, rng: np.random.Generator) -> int:
        """Born-rule sample of a Hermitian Pauli; collapses in place."""
        if not op.is_hermitian():
            raise ValueError(f"cannot measure non-Hermitian operator {op}")
        applied = self.copy().apply_pauli(op)
        plus = (self.amps + applied.amps) / 2
        p_plus = float(np.vdot(plus, plus).real)
        if rng.random() < p_plus:
            self.amps = plus / np.sqrt(p_plus)
            return +1
        minus = (self.amps - applied.amps) / 2
        self.amps = minus / np.sqrt(1.0 - p_plus)
        return -1

    def project_pauli(self, op: PauliOperator, outcome: int) -> float:
        """Project onto the +/-1 eigenspace; returns the branch probability."""
        applied = self.copy().apply_pauli(op)
        branch = (self.amps + outcome * applied.amps) / 2
        prob = float(np.vdot(branch, branch).real)
        if prob > 1e-14:
            self.amps = branch / np.sqrt(prob)
        else:
            self.amps = branch
        return prob

    def measure_qubit(self, q: int, basis: str, rng: np.random.Generator) -> int:
        """Destructive-style single-qubit readout (qubit stays allocated)."""
        letter = {"Z": "Z", "X": "X"}[basis]
        return self.measure_pauli(PauliOperator.single(letter, q), rng)


def bell_pairs_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2 for normalized vectors."""
    return float(abs(np.vdot(a, b)) ** 2)


class FockState:
    """Fermionic Fock state on n_modes <= 12 Dirac modes.

    Basis index bit p (mode 0 most significant) is the occupation N_p.
    Elementary operators implement the occupation sign strings directly.
    """

    def __init__(self, n_modes: int, amplitudes: np.ndarray | None = None):
        if n_modes > MAX_MODES:
            raise ValueError(f"Fock engine capped at {MAX_MODES} modes")
        self.n_modes = n_modes
        if amplitudes is None:
            amplitudes = np.zeros(2 ** n_modes, dtype=complex)
            amplitudes[0] = 1.0  # vacuum
        self.amps = np.asarray(amplitudes, dtype=complex)

    def copy(self) -> "FockState":
        return FockState(self.n_modes, self.amps.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def _occupations(self) -> np.ndarray:
        idx = np.arange(2 ** self.n_modes)
        return np.array([(idx >> (self.n_modes - 1 - p)) & 1 for p in range(self.n_modes)])

    def _sign_string(self, p: int) -> np.ndarray:
        """(-1)^(N_0 + ... + N_{p-1}) per basis state."""
        idx = np.arange(2 ** self.n_modes)
        parity = np.zeros_like(idx)
        for k in range(p):
            parity ^= (idx >> (self.n_modes - 1 - k)) & 1
        return np.where(parity == 0, 1.0, -1.0)

    def apply_annihilation(self, p: int) -> "FockState":
        """f_p: |...N_p...> -> sign * N_p |...N_p - 1...>."""
        if not 0 <= p < self.n_modes:
            raise ValueError(f"mode {p} out of range")
        bit = 1 << (self.n_modes - 1 - p)
        idx = np.arange(2 ** self.n_modes)
        occupied = (idx & bit) != 0
        out = np.zeros_like(self.amps)
        sign = self._sign_string(p)
        src = idx[occupied]
        out[src ^ bit] = sign[src] * self.amps[src]
        self.amps = out
        return self

    def apply_creation(self, p: int) -> "FockState":
        """f_p^dagger: |...N_p...> -> sign * (1 - N_p) |...N_p + 1...>."""
        if not 0 <= p < self.n_modes:
            raise ValueError(f"mode {p} out of range")
        bit = 1 << (self.n_modes - 1 - p)
        idx = np.arange(2 ** self.n_modes)
        empty = (idx & bit) == 0
        out = np.zeros_like(self.amps)
        sign = self._sign_string(p)
        src = idx[empty]
        out[src ^ bit] = sign[src] * self.amps[src]
        self.amps = out
        return self

    def apply_majorana_mode(self, mode: int) -> "FockState":
        """c_{2p} = f_p^dagger + f_p ; c_{2p+1} = i(f_p^dagger - f_p)."""
        p, odd = divmod(mode, 2)
        created = self.copy().apply_creation(p)
        annihilated = self.copy().apply_annihilation(p)
        if odd:
            self.amps = 1j * (created.amps - annihilated.amps)
        else:
            self.amps = created.amps + annihilated.amps
        return self

    def apply_monomial(self, m: MajoranaMonomial) -> "FockState":
        """Operator product acts right to left."""
        if m.modes and max(m.modes) >= 2 * self.n_modes:
            raise ValueError("monomial mode out of range")
        for mode in reversed(m.modes):
            self.apply_majorana_mode(mode)
        self.amps *= m.phase_value()
        return self

    def expectation_monomial(self, m: MajoranaMonomial) -> complex:
        scratch = self.copy().apply_monomial(m)
        return complex(np.vdot(self.amps, scratch.amps))

    def measure_monomial(self, m: MajoranaMonomial, rng: np.random.Generator) -> int:
        """Projective measurement of a Hermitian monomial; collapses in place."""
        if not m.is_hermitian():
            raise ValueError(f"cannot measure non-Hermitian monomial {m}")
        applied = self.copy().apply_monomial(m)
        plus = (self.amps + applied.amps) / 2
        p_plus = float(np.vdot(plus, plus).real)
        if rng.random() < p_plus:
            self.amps = plus / np.sqrt(p_plus)
            return +1
        minus = (self.amps - applied.amps) / 2
        self.amps = minus / np.sqrt(1.0 - p_plus)
        return -1

    def project_monomial(self, m: MajoranaMonomial, outcome: int) -> float:
        applied = self.copy().apply_monomial(m)
        branch = (self.amps + outcome * applied.amps) / 2
        prob = float(np.vdot(branch, branch).real)
        if prob > 1e-14:
            self.amps = branch / np.sqrt(prob)
        else:
            self.amps = branch
        return prob

    def apply_braid(self, p: int, q: int) -> "FockState":
        """Exchange unitary (1 + c_q c_p)/sqrt(2): c_p -> c_q, c_q -> -c_p."""
        moved = self.copy().apply_monomial(MajoranaMonomial.from_factors((q, p)))
        self.amps = (self.amps + moved.amps) / np.sqrt(2)
        return self

    def total_parity_expectation(self) -> float:
        """<Q> with Q = (-1)^(total occupation)."""
        idx = np.arange(2 ** self.n_modes)
        pop = np.zeros_like(idx)
        for p in range(self.n_modes):
            pop += (idx >> p) & 1
        signs = np.where(pop % 2 == 0, 1.0, -1.0)
        return float(np.sum(signs * np.abs(self.amps) ** 2))


# -- logical extraction ------------------------------------------------------


def qubit_codespace_basis(
    n_qubits: int,
    stabilizers: list[tuple[PauliOperator, int]],
    logical_z: list[PauliOperator],
    logical_x: list[PauliOperator],
) -> list[np.ndarray]:
    """Orthonormal logical basis |x_1..x_k> of a stabilizer codespace.

    The all-zeros logical state is built by projecting a seed computational
    state onto all check eigenvalues and logical Z = +1; the rest follow by
    applying logical X representatives.  Seeds are scanned until the
    projection is nonzero.
    """
    dim = 2 ** n_qubits
    k = len(logical_z)
    base = None
    for seed in range(dim):
        vec = np.zeros(dim, dtype=complex)
        vec[seed] = 1.0
        state = StateVector(n_qubits, vec)
        ok = True
        for op, sign in stabilizers:
            if state.project_pauli(op, sign) < 1e-12:
                ok = False
                break
        if not ok:
            continue
        for lz in logical_z:
            if state.project_pauli(lz, +1) < 1e-12:
                ok = False
                break
        if ok and state.norm() > 1e-9:
            base = state.normalize().amps
            break
    if base is None:
        raise ValueError("codespace projection is empty: inconsistent signs?")
    basis = []
    for x in range(2 ** k):
        vec = StateVector(n_qubits, base.copy())
        for j in range(k):
            if (x >> (k - 1 - j)) & 1:
                vec.apply_pauli(logical_x[j])
        basis.append(vec.amps)
    return basis


def extract_logical_state(state: StateVector, basis: list[np.ndarray], atol: float = 1e-9) -> np.ndarray:
    """Amplitudes of the encoded state; errors if outside the codespace."""
    coeffs = np.array([np.vdot(b, state.amps) for b in basis])
    leak = state.norm() ** 2 - float(np.vdot(coeffs, coeffs).real)
    if abs(leak) > atol:
        raise ValueError(f"state lies outside the codespace by {leak:.3e}")
    return coeffs / np.linalg.norm(coeffs)


def logical_fidelity(patch_state: StateVector, patch, target_logical: np.ndarray) -> float:
    """Fidelity between the encoded qubit(s) of a patch state and a target.

    ``patch`` must expose stabilizers_with_signs(), logical_z_reps() and
    logical_x_reps(); the target is a dense vector on the encoded qubits.
    """
    basis = qubit_codespace_basis(
        patch_state.n_qubits,
        patch.stabilizers_with_signs(),
        patch.logical_z_reps(),
        patch.logical_x_reps(),
    )
    encoded = extract_logical_state(patch_state, basis)
    target = np.asarray(target_logical, dtype=complex)
    target = target / np.linalg.norm(target)
    return float(abs(np.vdot(target, encoded)) ** 2)


def fock_codespace_basis(
    n_modes: int,
    stabilizers: list[tuple[MajoranaMonomial, int]],
    logical_z: list[MajoranaMonomial],
    logical_x: list[MajoranaMonomial],
) -> list[np.ndarray]:
    """Fermionic analogue of qubit_codespace_basis."""
    dim = 2 ** n_modes
    k = len(logical_z)
    base = None
    for seed in range(dim):
        vec = np.zeros(dim, dtype=complex)
        vec[seed] = 1.0
        state = FockState(n_modes, vec)
        ok = True
        for op, sign in stabilizers:
            if state.project_monomial(op, sign) < 1e-12:
                ok = False
                break
        if not ok:
            continue
        for lz in logical_z:
            if state.project_monomial(lz, +1) < 1e-12:
                ok = False
                break
        if ok and state.norm() > 1e-9:
            base = state.amps / state.norm()
            break
    if base is None:
        raise ValueError("fermionic codespace projection is empty")
    basis = []
    for x in range(2 ** k):
        vec = FockState(n_modes, base.copy())
        for j in range(k):
            if (x >> (k - 1 - j)) & 1:
                vec.apply_monomial(logical_x[j])
        basis.append(vec.amps)
    return basis


def extract_fock_logical(state: FockState, basis: list[np.ndarray], atol: float = 1e-9) -> np.ndarray:
    coeffs = np.array([np.vdot(b, state.amps) for b in basis])
    leak = state.norm() ** 2 - float(np.vdot(coeffs, coeffs).real)
    if abs(leak) > atol:
        raise ValueError(f"state lies outside the fermionic codespace by {leak:.3e}")
    return coeffs / np.linalg.norm(coeffs)


def equivalence_check(qubit_logical: np.ndarray, fock_logical: np.ndarray, atol: float = 1e-9) -> bool:
    """Agreement of two extracted logical states on all Pauli expectations.

    Phase-insensitive: compares the full density matrices, which is the same
    as comparing every logical observable expectation.
    """
    a = np.asarray(qubit_logical, dtype=complex)
    b = np.asarray(fock_logical, dtype=complex)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    rho_a = np.outer(a, a.conj())
    rho_b = np.outer(b, b.conj())
    return bool(np.max(np.abs(rho_a - rho_b)) <= atol)
