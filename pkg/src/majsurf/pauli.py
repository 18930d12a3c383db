"""Exact phased multi-qubit Pauli arithmetic.

Operators are stored sparsely as {qubit: letter} with a global phase that is
always an exact power of i, so products and commutators never accumulate
floating-point error.  This module is the lingua franca for checks, logical
operators and injected noise throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field

# Single-qubit products: _MUL[a][b] = (phase_power_of_i, letter) for a.b
_LETTERS = ("I", "X", "Y", "Z")
_MUL = {
    ("I", "I"): (0, "I"), ("I", "X"): (0, "X"), ("I", "Y"): (0, "Y"), ("I", "Z"): (0, "Z"),
    ("X", "I"): (0, "X"), ("X", "X"): (0, "I"), ("X", "Y"): (1, "Z"), ("X", "Z"): (3, "Y"),
    ("Y", "I"): (0, "Y"), ("Y", "X"): (3, "Z"), ("Y", "Y"): (0, "I"), ("Y", "Z"): (1, "X"),
    ("Z", "I"): (0, "Z"), ("Z", "X"): (1, "Y"), ("Z", "Y"): (3, "X"), ("Z", "Z"): (0, "I"),
}

_PHASE_STR = {0: "", 1: "i ", 2: "- ", 3: "-i "}
_STR_PHASE = {"": 0, "+": 0, "+1": 0, "i": 1, "+i": 1, "-": 2, "-1": 2, "-i": 3}


@dataclass(frozen=True)
class PauliOperator:
    """A phased Pauli product, e.g. -i X0 Z3 Y7.

    ``support`` maps qubit index to a letter in {X, Y, Z} (identity entries are
    never stored).  ``phase`` is the power of i in {0, 1, 2, 3}.  Instances are
    immutable and safe to share across threads.
    """

    support: dict[int, str] = field(default_factory=dict)
    phase: int = 0

    def __post_init__(self):
        for q, letter in self.support.items():
            if q < 0:
                raise ValueError(f"negative qubit index {q}")
            if letter not in ("X", "Y", "Z"):
                raise ValueError(f"bad Pauli letter {letter!r} on qubit {q}")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def identity(phase: int = 0) -> "PauliOperator":
        return PauliOperator({}, phase)

    @staticmethod
    def single(letter: str, qubit: int, phase: int = 0) -> "PauliOperator":
        return PauliOperator({qubit: letter}, phase)

    @staticmethod
    def from_letters(letter: str, qubits: list[int] | tuple[int, ...], phase: int = 0) -> "PauliOperator":
        """Same letter on every listed qubit, e.g. X on {0,1,2,3}."""
        return PauliOperator({q: letter for q in qubits}, phase)

    # -- algebra -----------------------------------------------------------

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def adjoint(self) -> "PauliOperator":
        return PauliOperator(dict(self.support), (-self.phase) % 4)

    def with_phase(self, phase: int) -> "PauliOperator":
        return PauliOperator(dict(self.support), phase)

    def phase_value(self) -> complex:
        return 1j ** self.phase

    def is_hermitian(self) -> bool:
        return self.phase in (0, 2)

    def is_identity(self) -> bool:
        return not self.support

    def letter(self, qubit: int) -> str:
        return self.support.get(qubit, "I")

    def qubits(self) -> list[int]:
        return sorted(self.support)

    # -- text form ---------------------------------------------------------

    def __str__(self) -> str:
        body = " ".join(f"{self.support[q]}{q}" for q in sorted(self.support))
        return _PHASE_STR[self.phase] + (body if body else "I")

    @staticmethod
    def from_str(text: str) -> "PauliOperator":
        """Parse the canonical text form; exact round-trip with str()."""
        tokens = text.split()
        phase = 0
        if tokens and tokens[0] in _STR_PHASE:
            phase = _STR_PHASE[tokens[0]]
            tokens = tokens[1:]
        support: dict[int, str] = {}
        for tok in tokens:
            if tok == "I":
                continue
            letter, idx = tok[0], tok[1:]
            if letter not in ("X", "Y", "Z") or not idx.isdigit():
                raise ValueError(f"bad Pauli token {tok!r}")
            q = int(idx)
            if q in support:
                raise ValueError(f"duplicate qubit {q} in {text!r}")
            support[q] = letter
        return PauliOperator(support, phase)


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Operator product a.b with exact phase."""
    support = dict(a.support)
    phase = (a.phase + b.phase) % 4
    for q, letter_b in b.support.items():
        letter_a = support.pop(q, "I")
        dp, letter = _MUL[(letter_a, letter_b)]
        phase = (phase + dp) % 4
        if letter != "I":
            support[q] = letter
    return PauliOperator(support, phase)


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    """True iff a.b == b.a: parity of qubits with differing non-identity letters."""
    clashes = 0
    small, large = (a, b) if len(a.support) <= len(b.support) else (b, a)
    for q, letter in small.support.items():
        other = large.support.get(q)
        if other is not None and other != letter:
            clashes += 1
    return clashes % 2 == 0


def weight(a: PauliOperator) -> int:
    return len(a.support)


def product(ops: list[PauliOperator] | tuple[PauliOperator, ...]) -> PauliOperator:
    """Left-to-right product of a sequence of operators."""
    out = PauliOperator.identity()
    for op in ops:
        out = multiply(out, op)
    return out
