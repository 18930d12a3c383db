"""Exact arithmetic for products of Majorana mode operators.

A monomial is a phase times an ordered product of distinct mode operators c_q
obeying {c_p, c_q} = 2 delta_pq and c_q^2 = 1.  Canonical form keeps mode
indices strictly increasing, absorbing reordering signs into the phase, so
equality is structural.  Also builds the tetron and hexon fermion codes and the
reference chain mapping onto qubit operators used by the oracles.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .pauli import PauliOperator, multiply as pauli_multiply

_PHASE_STR = {0: "+1", 1: "+i", 2: "-1", 3: "-i"}
_STR_PHASE = {v: k for k, v in _PHASE_STR.items()}


@dataclass(frozen=True)
class MajoranaMonomial:
    """phase * c_{m1} c_{m2} ... with m1 < m2 < ..., phase a power of i."""

    modes: tuple[int, ...] = ()
    phase: int = 0

    def __post_init__(self):
        if list(self.modes) != sorted(set(self.modes)):
            raise ValueError("modes must be strictly increasing; use from_factors to canonicalize")
        if any(m < 0 for m in self.modes):
            raise ValueError("negative mode index")
        object.__setattr__(self, "phase", self.phase % 4)

    @staticmethod
    def identity(phase: int = 0) -> "MajoranaMonomial":
        return MajoranaMonomial((), phase)

    @staticmethod
    def c(mode: int) -> "MajoranaMonomial":
        return MajoranaMonomial((mode,), 0)

    @staticmethod
    def from_factors(modes: list[int] | tuple[int, ...], phase: int = 0) -> "MajoranaMonomial":
        """Canonicalize an arbitrary-order product of c_q factors.

        Bubble sort counts transpositions (each contributes -1); equal adjacent
        pairs cancel via c_q^2 = 1.
        """
        seq = list(modes)
        ph = phase % 4
        # insertion sort with sign tracking
        i = 1
        while i < len(seq):
            j = i
            while j > 0 and seq[j - 1] > seq[j]:
                seq[j - 1], seq[j] = seq[j], seq[j - 1]
                ph = (ph + 2) % 4
                j -= 1
            i += 1
        # cancel adjacent equal pairs (already adjacent after sorting)
        out: list[int] = []
        for m in seq:
            if out and out[-1] == m:
                out.pop()
            else:
                out.append(m)
        return MajoranaMonomial(tuple(out), ph)

    def weight(self) -> int:
        return len(self.modes)

    def is_even(self) -> bool:
        return len(self.modes) % 2 == 0

    def adjoint(self) -> "MajoranaMonomial":
        """Reversal of w distinct self-adjoint factors gives (-1)^(w(w-1)/2)."""
        w = len(self.modes)
        flips = (w * (w - 1) // 2) % 2
        return MajoranaMonomial(self.modes, (-self.phase + 2 * flips) % 4)

    def is_hermitian(self) -> bool:
        return self == self.adjoint()

    def phase_value(self) -> complex:
        return 1j ** self.phase

    def __str__(self) -> str:
        body = " ".join(f"c{m}" for m in self.modes)
        return _PHASE_STR[self.phase] + (" " + body if body else " I")

    @staticmethod
    def from_str(text: str) -> "MajoranaMonomial":
        tokens = text.split()
        if not tokens or tokens[0] not in _STR_PHASE:
            raise ValueError(f"missing phase token in {text!r}")
        phase = _STR_PHASE[tokens[0]]
        modes = []
        for tok in tokens[1:]:
            if tok == "I":
                continue
            if not tok.startswith("c") or not tok[1:].isdigit():
                raise ValueError(f"bad Majorana token {tok!r}")
            modes.append(int(tok[1:]))
        return MajoranaMonomial.from_factors(modes, phase)


def mono_multiply(a: MajoranaMonomial, b: MajoranaMonomial) -> MajoranaMonomial:
    """Canonical-form product using the anticommutation relations."""
    return MajoranaMonomial.from_factors(a.modes + b.modes, (a.phase + b.phase) % 4)


def mono_commutes(a: MajoranaMonomial, b: MajoranaMonomial) -> bool:
    """ab = (-1)^(w_a w_b - s) ba with s the shared-mode count."""
    shared = len(set(a.modes) & set(b.modes))
    return (len(a.modes) * len(b.modes) - shared) % 2 == 0


def hermitian_check_phase(support_size: int) -> int:
    """Phase power for a Hermitian, squares-to-identity parity check: i^(w/2).

    Odd support would violate fermion parity and is rejected.
    """
    if support_size % 2 != 0:
        raise ValueError(f"check support must be even, got {support_size}")
    return (support_size // 2) % 4


def check_monomial(modes: list[int] | tuple[int, ...]) -> MajoranaMonomial:
    """Hermitian check on the given modes with the standard phase convention."""
    modes = tuple(sorted(modes))
    return MajoranaMonomial(modes, hermitian_check_phase(len(modes)))


def fusion_operator(p: int, q: int) -> MajoranaMonomial:
    """Fusion (exchange) observable i c_p c_q on a mode pair; Hermitian, squares to 1."""
    if p == q:
        raise ValueError("fusion operator needs distinct modes")
    return MajoranaMonomial.from_factors((p, q), 1)


def reference_qubit_image(m: MajoranaMonomial, n_modes: int) -> PauliOperator:
    """Chain-map a monomial to a qubit operator (oracle convention).

    c_{2p}   -> Z_0 ... Z_{p-1} X_p
    c_{2p+1} -> Z_0 ... Z_{p-1} Y_p

    Group homomorphism including phases; used only to cross-check the abstract
    algebra against explicit matrices, never in the protocol path.
    """
    for mode in m.modes:
        if mode >= 2 * n_modes:
            raise ValueError(f"mode {mode} out of range for {n_modes} Dirac modes")
    out = PauliOperator.identity(m.phase)
    for mode in m.modes:
        p, odd = divmod(mode, 2)
        support = {k: "Z" for k in range(p)}
        support[p] = "Y" if odd else "X"
        out = pauli_multiply(out, PauliOperator(support))
    return out


@dataclass(frozen=True)
class FermionCode:
    """Fermion stabilizer code on an even number of Majorana modes."""

    n_majoranas: int
    checks: tuple[MajoranaMonomial, ...]
    logical_z: tuple[MajoranaMonomial, ...]
    logical_x: tuple[MajoranaMonomial, ...]

    def __post_init__(self):
        if self.n_majoranas % 2 != 0:
            raise ValueError("fermion codes need an even number of Majorana modes")
        for chk in self.checks:
            if not chk.is_even():
                raise ValueError(f"odd-weight check {chk}")

    @property
    def n_dirac(self) -> int:
        return self.n_majoranas // 2

    @property
    def k(self) -> int:
        return self.n_dirac - len(self.checks)

    def validate(self) -> None:
        """Raise if the commutation structure is wrong."""
        for i, a in enumerate(self.checks):
            for b in self.checks[i + 1:]:
                if not mono_commutes(a, b):
                    raise ValueError(f"checks do not commute: {a} vs {b}")
        logicals = self.logical_z + self.logical_x
        for lop in logicals:
            for chk in self.checks:
                if not mono_commutes(lop, chk):
                    raise ValueError(f"logical {lop} fails to commute with check {chk}")
        for i, (lz, lx) in enumerate(zip(self.logical_z, self.logical_x)):
            if mono_commutes(lz, lx):
                raise ValueError(f"logical pair {i} must anticommute")
            for j in range(len(self.logical_z)):
                if j == i:
                    continue
                if not mono_commutes(lz, self.logical_z[j]) or not mono_commutes(lz, self.logical_x[j]):
                    raise ValueError("logicals of different encoded qubits must commute")
                if not mono_commutes(lx, self.logical_z[j]) or not mono_commutes(lx, self.logical_x[j]):
                    raise ValueError("logicals of different encoded qubits must commute")


def build_tetron_code() -> FermionCode:
    """4 Majorana modes, one all-mode parity check, one encoded qubit."""
    return FermionCode(
        n_majoranas=4,
        checks=(check_monomial((0, 1, 2, 3)),),
        logical_z=(fusion_operator(0, 1),),
        logical_x=(fusion_operator(1, 2),),
    )


def build_hexon_code() -> FermionCode:
    """6 Majorana modes, one all-mode parity check, two encoded qubits."""
    return FermionCode(
        n_majoranas=6,
        checks=(check_monomial((0, 1, 2, 3, 4, 5)),),
        logical_z=(fusion_operator(0, 1), fusion_operator(4, 5)),
        logical_x=(fusion_operator(1, 2), fusion_operator(3, 4)),
    )


def _support_in_span(support: frozenset[int], span: list[frozenset[int]]) -> bool:
    """F2 membership of a support set in the symmetric-difference span."""
    residue = set(support)
    basis: list[set[int]] = []
    for vec in span:
        basis.append(set(vec))
    # Gaussian elimination over supports, pivoting on smallest element
    for piv in sorted({m for b in basis for m in b}):
        rows = [b for b in basis if piv in b]
        if not rows:
            continue
        pivot_row = rows[0]
        for b in rows[1:]:
            b.symmetric_difference_update(pivot_row)
        if piv in residue:
            residue.symmetric_difference_update(pivot_row)
        basis = [b for b in basis if b and b is not pivot_row]
    return not residue


def code_distance_bruteforce(code: FermionCode) -> int:
    """Minimum nonzero weight over logical-group elements outside the stabilizer.

    Odd-weight monomials count on the same footing as even ones.  Exhaustive in
    the support lattice, so capped at 16 Majorana modes.
    """
    if code.n_majoranas > 16:
        raise ValueError("exhaustive distance search capped at 16 Majorana modes")
    from itertools import combinations

    check_supports = [frozenset(chk.modes) for chk in code.checks]
    for w in range(1, code.n_majoranas + 1):
        for modes in combinations(range(code.n_majoranas), w):
            cand = MajoranaMonomial(tuple(modes), 0)
            if not all(mono_commutes(cand, chk) for chk in code.checks):
                continue
            if _support_in_span(frozenset(modes), check_supports):
                continue
            return w
    raise ValueError("code has no nontrivial logical operators")
