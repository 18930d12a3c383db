"""Qubit surface-code patches hosting logical Majorana fermions.

Tetron patches are rotated surface codes with a twist at each corner, built
parametrically in the distance d (the d=2 instance is the concrete four-qubit
layout every protocol here runs on).  Hexon patches carry six twists and two
encoded qubits; only the d=2 form (a 2x4 block) is wired to protocols.
Merged and widened layouts used mid-protocol are constructed from their
constituent patches so that global qubit indices stay put.

The binding contract for every layout is the invariant set (commuting checks,
twist count, encoded-qubit count, brute-force distance) plus the zero-noise
oracle equivalence of the protocols that run on it; figure-level geometry is
bookkeeping only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, product as iproduct

import numpy as np

from .majorana import (
    FermionCode,
    MajoranaMonomial,
    build_hexon_code,
    build_tetron_code,
    fusion_operator,
    mono_commutes,
    mono_multiply,
)
from .pauli import PauliOperator, commutes, multiply, product, weight


@dataclass(frozen=True)
class CheckFace:
    op: PauliOperator
    color: str          # light = X-type, dark = Z-type
    kind: str           # square | digon | joint

    @property
    def key(self) -> str:
        return str(self.op)


@dataclass
class PatchLayout:
    kind: str
    d: int
    sites: dict            # (row, col) -> global qubit index
    checks: list           # list[CheckFace]
    twists: list           # list[(label, position string)]
    logical_z: list        # list[PauliOperator], one per encoded qubit
    logical_x: list
    codespace_signs: dict = field(default_factory=dict)   # check key -> +-1
    abstract: FermionCode | None = None

    def __post_init__(self):
        for face in self.checks:
            self.codespace_signs.setdefault(face.key, +1)

    # -- views ---------------------------------------------------------------

    @property
    def n_data(self) -> int:
        return len(self.sites)

    @property
    def k(self) -> int:
        return len(self.twists) // 2 - 1

    def data_qubits(self) -> list[int]:
        return sorted(self.sites.values())

    def qubit_at(self, row: int, col: int) -> int:
        return self.sites[(row, col)]

    def check_ops(self) -> list[PauliOperator]:
        return [face.op for face in self.checks]

    def stabilizers_with_signs(self) -> list[tuple[PauliOperator, int]]:
        return [(face.op, self.codespace_signs[face.key]) for face in self.checks]

    def logical_z_reps(self) -> list[PauliOperator]:
        return list(self.logical_z)

    def logical_x_reps(self) -> list[PauliOperator]:
        return list(self.logical_x)

    def check_product(self) -> PauliOperator:
        return product(self.check_ops())

    def check_product_sign(self) -> int:
        sign = 1
        for face in self.checks:
            sign *= self.codespace_signs[face.key]
        return sign

    # -- validation ------------------------------------------------------------

    def validate(self) -> list[str]:
        """Invariant report; empty list means all pass."""
        problems = []
        ops = self.check_ops()
        for i, a in enumerate(ops):
            for b in ops[i + 1:]:
                if not commutes(a, b):
                    problems.append(f"checks do not commute: {a} | {b}")
        if len(self.twists) not in (4, 6):
            problems.append(f"twist count {len(self.twists)} not in (4, 6)")
        rank_k = self.n_data - _f2_rank(_symplectic_matrix(ops, self.data_qubits()))
        if rank_k != self.k:
            problems.append(f"encoded-qubit count {rank_k} != twists/2 - 1 = {self.k}")
        if len(self.logical_z) != self.k or len(self.logical_x) != self.k:
            problems.append("logical operator count does not match k")
        for lop in self.logical_z + self.logical_x:
            for c in ops:
                if not commutes(lop, c):
                    problems.append(f"logical {lop} clashes with check {c}")
        for i in range(len(self.logical_z)):
            if commutes(self.logical_z[i], self.logical_x[i]):
                problems.append(f"logical pair {i} fails to anticommute")
            for j in range(len(self.logical_z)):
                if i != j:
                    for a, b in ((self.logical_z[i], self.logical_z[j]),
                                 (self.logical_z[i], self.logical_x[j]),
                                 (self.logical_x[i], self.logical_x[j])):
                        if not commutes(a, b):
                            problems.append("cross-qubit logicals fail to commute")
        return problems

    def distance_bruteforce(self, max_weight: int = 4) -> int:
        """Minimum weight of a nontrivial logical, searched weight by weight."""
        qubits = self.data_qubits()
        ops = self.check_ops()
        span = [_pauli_to_vec(op, qubits) for op in ops]
        for w in range(1, max_weight + 1):
            for sites in combinations(qubits, w):
                for letters in iproduct("XYZ", repeat=w):
                    cand = PauliOperator(dict(zip(sites, letters)))
                    if not all(commutes(cand, c) for c in ops):
                        continue
                    if _in_f2_span(_pauli_to_vec(cand, qubits), span):
                        continue
                    return w
        raise ValueError(f"no logical of weight <= {max_weight} found")

    # -- fusion operator representatives ---------------------------------------

    def fusion_rep(self, p: int, q: int) -> PauliOperator:
        """Minimum-weight patch representative of the fusion operator on twists (p, q).

        Derived by decomposing i c_p c_q over the abstract code's logical basis
        and the parity check, then mapping each factor to its patch
        representative in a fixed order, so the rep algebra matches the
        Majorana algebra exactly.

        The weight reduction folds in check operators, so the representative
        is an equality modulo the stabilizer group: expectation values outside
        the all-+1 sign sector need dressing by the recorded signs of the
        folded checks.  Outcome decoding in the protocols always works with
        check products directly for this reason.
        """
        labels = [t[0] for t in self.twists]
        if p not in labels or q not in labels or p == q:
            raise ValueError(f"unknown twist pair ({p}, {q})")
        if self.abstract is None:
            raise ValueError("layout carries no abstract code")
        target = fusion_operator(p, q)
        word = self._abstract_word(target)
        rep = self._patch_word(word)
        return _min_weight_coset_rep(rep, self.check_ops())

    def _abstract_word(self, target: MajoranaMonomial):
        """(a_i, b_i, c, phase): target = i^phase * prod Zbar_i^a Xbar_i^b * S^c."""
        code = self.abstract
        a = [0 if mono_commutes(target, lx) else 1 for lx in code.logical_x]
        b = [0 if mono_commutes(target, lz) else 1 for lz in code.logical_z]
        for c in (0, 1):
            w = MajoranaMonomial.identity()
            for i in range(code.k):
                if a[i]:
                    w = mono_multiply(w, code.logical_z[i])
                if b[i]:
                    w = mono_multiply(w, code.logical_x[i])
            if c:
                w = mono_multiply(w, code.checks[0])
            if w.modes == target.modes:
                return a, b, c, (target.phase - w.phase) % 4
        raise AssertionError(f"decomposition failed for {target}")

    def _patch_word(self, word) -> PauliOperator:
        a, b, c, phase = word
        rep = PauliOperator.identity(phase)
        for i in range(self.k):
            if a[i]:
                rep = multiply(rep, self.logical_z[i])
            if b[i]:
                rep = multiply(rep, self.logical_x[i])
        if c:
            rep = multiply(rep, self.check_product())
        return rep

    # -- serialization -----------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "d": self.d,
            "sites": [[r, c, self.sites[(r, c)]] for (r, c) in sorted(self.sites)],
            "checks": [
                {"pauli": face.key, "color": face.color, "kind": face.kind,
                 "sign": self.codespace_signs[face.key]}
                for face in self.checks
            ],
            "twists": [{"label": lab, "position": pos} for lab, pos in self.twists],
            "logical_z": [str(op) for op in self.logical_z],
            "logical_x": [str(op) for op in self.logical_x],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)


# -- F2 helpers -----------------------------------------------------------------


def _pauli_to_vec(op: PauliOperator, qubits: list[int]) -> np.ndarray:
    pos = {q: i for i, q in enumerate(qubits)}
    vec = np.zeros(2 * len(qubits), dtype=np.uint8)
    for q, letter in op.support.items():
        if letter in ("X", "Y"):
            vec[pos[q]] = 1
        if letter in ("Z", "Y"):
            vec[len(qubits) + pos[q]] = 1
    return vec


def _symplectic_matrix(ops: list[PauliOperator], qubits: list[int]) -> np.ndarray:
    return np.array([_pauli_to_vec(op, qubits) for op in ops], dtype=np.uint8)


def _f2_rank(mat: np.ndarray) -> int:
    if mat.size == 0:
        return 0
    m = mat.copy()
    rank = 0
    for col in range(m.shape[1]):
        rows = np.nonzero(m[rank:, col])[0]
        if rows.size == 0:
            continue
        piv = rank + int(rows[0])
        m[[rank, piv]] = m[[piv, rank]]
        for r in range(m.shape[0]):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
        if rank == m.shape[0]:
            break
    return rank


def _in_f2_span(vec: np.ndarray, span: list[np.ndarray]) -> bool:
    if not span:
        return not vec.any()
    mat = np.array(span, dtype=np.uint8)
    return _f2_rank(np.vstack([mat, vec])) == _f2_rank(mat)


def _min_weight_coset_rep(rep: PauliOperator, stabilizers: list[PauliOperator]) -> PauliOperator:
    def rank(op):
        return (weight(op), op.phase != 0, str(op))

    best = rep
    for r in range(1, len(stabilizers) + 1):
        for combo in combinations(stabilizers, r):
            cand = rep
            for s in combo:
                cand = multiply(cand, s)
            if rank(cand) < rank(best):
                best = cand
    if best.phase in (1, 3):
        raise AssertionError(f"non-Hermitian fusion representative {best}")
    return best


# -- builders ---------------------------------------------------------------------


class QubitAllocator:
    """Hands out disjoint global qubit index ranges to patches."""

    def __init__(self, start: int = 0):
        self.next = start

    def take(self, count: int) -> list[int]:
        out = list(range(self.next, self.next + count))
        self.next += count
        return out


def _face_type(r: int, c: int) -> str:
    return "X" if (r + c) % 2 == 0 else "Z"


def build_tetron_patch(d: int = 2, origin: tuple[int, int] = (0, 0),
                       allocator: QubitAllocator | None = None) -> PatchLayout:
    """Rotated surface-code tetron: d*d data qubits, four corner twists.

    At d=2 this is exactly: data q0,q1 / q2,q3 (row major), checks
    X(q0..q3), Z(q0,q2), Z(q1,q3), Zbar = Z(q0)Z(q1), Xbar = X(q0)X(q2).
    """
    if d < 2:
        raise ValueError("tetron patches need d >= 2")
    allocator = allocator or QubitAllocator()
    r0, c0 = origin
    idx = allocator.take(d * d)
    sites = {(r0 + r, c0 + c): idx[r * d + c] for r in range(d) for c in range(d)}

    def q(r, c):
        return sites[(r0 + r, c0 + c)]

    checks = []
    for r in range(d - 1):
        for c in range(d - 1):
            letter = _face_type(r, c)
            fop = PauliOperator.from_letters(
                letter, [q(r, c), q(r, c + 1), q(r + 1, c), q(r + 1, c + 1)])
            checks.append(CheckFace(fop, "light" if letter == "X" else "dark", "square"))
    for r in range(d - 1):
        if _face_type(r, 0) == "X":
            checks.append(CheckFace(PauliOperator.from_letters("Z", [q(r, 0), q(r + 1, 0)]),
                                    "dark", "digon"))
        if _face_type(r, d - 2) == "X":
            checks.append(CheckFace(PauliOperator.from_letters("Z", [q(r, d - 1), q(r + 1, d - 1)]),
                                    "dark", "digon"))
    for c in range(d - 1):
        if _face_type(0, c) == "Z":
            checks.append(CheckFace(PauliOperator.from_letters("X", [q(0, c), q(0, c + 1)]),
                                    "light", "digon"))
        if _face_type(d - 2, c) == "Z":
            checks.append(CheckFace(PauliOperator.from_letters("X", [q(d - 1, c), q(d - 1, c + 1)]),
                                    "light", "digon"))
    logical_z = PauliOperator.from_letters("Z", [q(0, c) for c in range(d)])
    logical_x = PauliOperator.from_letters("X", [q(r, 0) for r in range(d)])
    twists = [(0, f"corner({r0},{c0 + d - 1})"), (1, f"corner({r0},{c0})"),
              (2, f"corner({r0 + d - 1},{c0})"), (3, f"corner({r0 + d - 1},{c0 + d - 1})")]
    return PatchLayout(
        kind="tetron", d=d, sites=sites, checks=checks, twists=twists,
        logical_z=[logical_z], logical_x=[logical_x], abstract=build_tetron_code())


def build_hexon_patch(d: int = 2, origin: tuple[int, int] = (0, 0),
                      allocator: QubitAllocator | None = None) -> PatchLayout:
    """Six-twist hexon patch holding two encoded qubits; only d=2 is wired.

    The d=2 form is a 2x4 block: alternating X/Z/X squares, dark side digons
    and one light digon under the middle square.  Its top boundary changes
    color twice, giving the two extra twists.
    """
    if d != 2:
        raise NotImplementedError("only distance-2 hexon patches are wired")
    allocator = allocator or QubitAllocator()
    r0, c0 = origin
    idx = allocator.take(8)
    sites = {(r0 + r, c0 + c): idx[r * 4 + c] for r in range(2) for c in range(4)}
    return hexon_layout_from_sites(sites, d=2)


def hexon_layout_from_sites(sites: dict, d: int = 2) -> PatchLayout:
    """Hexon check structure over an existing 2x4 site map (used by merges)."""
    rows = sorted({r for r, _ in sites})
    cols = sorted({c for _, c in sites})
    if len(rows) != 2 or len(cols) != 4:
        raise ValueError("d=2 hexon needs a 2x4 site block")

    def q(r, c):
        return sites[(rows[r], cols[c])]

    checks = [
        CheckFace(PauliOperator.from_letters("X", [q(0, 0), q(0, 1), q(1, 0), q(1, 1)]),
                  "light", "square"),
        CheckFace(PauliOperator.from_letters("Z", [q(0, 1), q(0, 2), q(1, 1), q(1, 2)]),
                  "dark", "square"),
        CheckFace(PauliOperator.from_letters("X", [q(0, 2), q(0, 3), q(1, 2), q(1, 3)]),
                  "light", "square"),
        CheckFace(PauliOperator.from_letters("Z", [q(0, 0), q(1, 0)]), "dark", "digon"),
        CheckFace(PauliOperator.from_letters("Z", [q(0, 3), q(1, 3)]), "dark", "digon"),
        CheckFace(PauliOperator.from_letters("X", [q(1, 1), q(1, 2)]), "light", "digon"),
    ]
    logical_z = [PauliOperator.from_letters("Z", [q(0, 0), q(0, 1)]),
                 PauliOperator.from_letters("Z", [q(0, 2), q(0, 3)])]
    logical_x = [PauliOperator.from_letters("X", [q(0, 0), q(1, 0)]),
                 PauliOperator.from_letters("X", [q(0, 2), q(1, 2)])]
    twists = [(0, "top-mid-left"), (1, f"corner({rows[0]},{cols[0]})"),
              (2, f"corner({rows[1]},{cols[0]})"), (3, "bottom-mid"),
              (4, "top-mid-right"), (5, f"corner({rows[0]},{cols[3]})")]
    return PatchLayout(
        kind="hexon", d=d, sites=dict(sites), checks=checks, twists=twists,
        logical_z=logical_z, logical_x=logical_x, abstract=build_hexon_code())


def widen_tetron(patch: PatchLayout, allocator: QubitAllocator,
                 direction: str = "right") -> PatchLayout:
    """Double-wide d=2 tetron: the 2x2 block extended two columns sideways."""
    if patch.kind != "tetron" or patch.d != 2:
        raise ValueError("only d=2 tetrons can be widened")
    if direction not in ("right", "left"):
        raise ValueError("direction is right or left")
    (r0, c0) = min(patch.sites)
    idx = allocator.take(4)
    sites = dict(patch.sites)
    offset = 2 if direction == "right" else -2
    for r in range(2):
        for c in range(2):
            sites[(r0 + r, c0 + offset + c)] = idx[r * 2 + c]
    if direction == "left":
        c0 = c0 - 2

    def q(r, c):
        return sites[(r0 + r, c0 + c)]

    checks = [
        CheckFace(PauliOperator.from_letters("X", [q(0, 0), q(0, 1), q(1, 0), q(1, 1)]),
                  "light", "square"),
        CheckFace(PauliOperator.from_letters("Z", [q(0, 1), q(0, 2), q(1, 1), q(1, 2)]),
                  "dark", "square"),
        CheckFace(PauliOperator.from_letters("X", [q(0, 2), q(0, 3), q(1, 2), q(1, 3)]),
                  "light", "square"),
        CheckFace(PauliOperator.from_letters("Z", [q(0, 0), q(1, 0)]), "dark", "digon"),
        CheckFace(PauliOperator.from_letters("Z", [q(0, 3), q(1, 3)]), "dark", "digon"),
        CheckFace(PauliOperator.from_letters("X", [q(0, 1), q(0, 2)]), "light", "digon"),
        CheckFace(PauliOperator.from_letters("X", [q(1, 1), q(1, 2)]), "light", "digon"),
    ]
    logical_z = PauliOperator.from_letters("Z", [q(0, c) for c in range(4)])
    logical_x = PauliOperator.from_letters("X", [q(0, 0), q(1, 0)])
    twists = [(0, f"corner({r0},{c0 + 3})"), (1, f"corner({r0},{c0})"),
              (2, f"corner({r0 + 1},{c0})"), (3, f"corner({r0 + 1},{c0 + 3})")]
    return PatchLayout(
        kind="tetron_wide", d=2, sites=sites, checks=checks, twists=twists,
        logical_z=[logical_z], logical_x=[logical_x], abstract=build_tetron_code())


def xx_merge_layout(left: PatchLayout, right: PatchLayout) -> PatchLayout:
    """Side-by-side merge of two d=2 tetrons into one wide k=1 patch.

    The abutting dark digons fuse into the middle dark square (predetermined
    value) while two new light half-moons appear; decoding the light digons
    against the left X square reads out the joint XbarXbar observable.
    """
    _require_d2_tetron(left), _require_d2_tetron(right)
    sites = {**left.sites, **right.sites}
    rows = sorted({r for r, _ in sites})
    cols = sorted({c for _, c in sites})
    if len(rows) != 2 or len(cols) != 4:
        raise ValueError("patches are not horizontally adjacent")

    def q(r, c):
        return sites[(rows[r], cols[c])]

    checks = [
        CheckFace(PauliOperator.from_letters("X", [q(0, 0), q(0, 1), q(1, 0), q(1, 1)]),
                  "light", "square"),
        CheckFace(PauliOperator.from_letters("Z", [q(0, 1), q(0, 2), q(1, 1), q(1, 2)]),
                  "dark", "joint"),
        CheckFace(PauliOperator.from_letters("X", [q(0, 2), q(0, 3), q(1, 2), q(1, 3)]),
                  "light", "square"),
        CheckFace(PauliOperator.from_letters("Z", [q(0, 0), q(1, 0)]), "dark", "digon"),
        CheckFace(PauliOperator.from_letters("Z", [q(0, 3), q(1, 3)]), "dark", "digon"),
        CheckFace(PauliOperator.from_letters("X", [q(0, 1), q(0, 2)]), "light", "joint"),
        CheckFace(PauliOperator.from_letters("X", [q(1, 1), q(1, 2)]), "light", "joint"),
    ]
    logical_z = PauliOperator.from_letters("Z", [q(0, c) for c in range(4)])
    logical_x = PauliOperator.from_letters("X", [q(0, 0), q(1, 0)])
    twists = [(0, "corner-tr"), (1, "corner-tl"), (2, "corner-bl"), (3, "corner-br")]
    return PatchLayout(
        kind="merged_xx", d=2, sites=sites, checks=checks, twists=twists,
        logical_z=[logical_z], logical_x=[logical_x], abstract=build_tetron_code())


def zz_merge_layout(top: PatchLayout, bottom: PatchLayout) -> PatchLayout:
    """Vertical merge of two d=2 tetrons through their Zbar-supported edges.

    The single joint dark square (bottom row of the top patch, top row of the
    bottom patch) commutes with every existing check, so the merge adds one
    check and suspends nothing.  Its decoded value is the joint ZbarZbar
    observable dressed by the recorded digon signs.
    """
    _require_d2_tetron(top), _require_d2_tetron(bottom)
    sites = {**top.sites, **bottom.sites}
    rows = sorted({r for r, _ in sites})
    cols = sorted({c for _, c in sites})
    if len(rows) != 4 or len(cols) != 2:
        raise ValueError("patches are not vertically adjacent")

    def q(r, c):
        return sites[(rows[r], cols[c])]

    joint = CheckFace(
        PauliOperator.from_letters("Z", [q(1, 0), q(1, 1), q(2, 0), q(2, 1)]),
        "dark", "joint")
    checks = list(top.checks) + list(bottom.checks) + [joint]
    signs = {**top.codespace_signs, **bottom.codespace_signs}
    logical_z = PauliOperator.from_letters("Z", [q(0, 0), q(0, 1)])
    logical_x = multiply(top.logical_x[0], bottom.logical_x[0])
    twists = [(0, "corner-tr"), (1, "corner-tl"), (2, "corner-bl"), (3, "corner-br")]
    return PatchLayout(
        kind="merged_zz", d=2, sites=sites, checks=checks, twists=twists,
        logical_z=[logical_z], logical_x=[logical_x.with_phase(0)],
        codespace_signs=signs, abstract=build_tetron_code())


def hexon_from_tetrons(left: PatchLayout, right: PatchLayout) -> PatchLayout:
    """Reversible fusion of two adjacent d=2 tetrons into a d=2 hexon.

    Only the middle dark square (value predetermined by the fused digons) and
    one light half-moon are measured; all four tetron logicals survive.
    """
    _require_d2_tetron(left), _require_d2_tetron(right)
    sites = {**left.sites, **right.sites}
    return hexon_layout_from_sites(sites)


def _require_d2_tetron(patch: PatchLayout) -> None:
    if patch.kind != "tetron" or patch.d != 2:
        raise ValueError(f"need a d=2 tetron, got {patch.kind} d={patch.d}")


# -- lateral shift -----------------------------------------------------------------


@dataclass
class ShiftPlan:
    """Two-column lateral move of a d=2 tetron via grow-then-shrink."""

    start: PatchLayout
    wide: PatchLayout
    end: PatchLayout
    new_qubits: list[int]       # prepped |0> at grow time
    leaving_qubits: list[int]   # read out in Z at shrink time


def shift_patch(patch: PatchLayout, allocator: QubitAllocator,
                direction: str = "right") -> ShiftPlan:
    """Deformation plan translating a d=2 tetron one patch width sideways.

    Grows the patch double wide (new columns prepped in |0>), then reads the
    old columns out in Z.  Both logicals survive with readout bits folded into
    the Pauli frame; colors are preserved.  (A one-column color-swapping shift
    admits no d=2 grow/shrink realization that keeps both logicals alive; see
    the project notes.)
    """
    if patch.kind != "tetron" or patch.d != 2:
        raise ValueError("shift_patch supports d=2 tetrons")
    wide = widen_tetron(patch, allocator, direction=direction)
    (r0, _) = min(patch.sites)
    new_sites = {pos: idx for pos, idx in wide.sites.items() if pos not in patch.sites}
    cols = sorted({c for _, c in new_sites})
    end_sites = dict(new_sites)
    end = PatchLayout(
        kind="tetron", d=2, sites=end_sites,
        checks=_tetron_checks_for_block(end_sites),
        twists=[(0, f"corner({r0},{cols[1]})"), (1, f"corner({r0},{cols[0]})"),
                (2, f"corner({r0 + 1},{cols[0]})"), (3, f"corner({r0 + 1},{cols[1]})")],
        logical_z=[PauliOperator.from_letters("Z", [end_sites[(r0, cols[0])], end_sites[(r0, cols[1])]])],
        logical_x=[PauliOperator.from_letters("X", [end_sites[(r0, cols[0])], end_sites[(r0 + 1, cols[0])]])],
        abstract=build_tetron_code())
    return ShiftPlan(
        start=patch, wide=wide, end=end,
        new_qubits=sorted(new_sites.values()),
        leaving_qubits=sorted(patch.sites.values()))


def _tetron_checks_for_block(sites: dict) -> list[CheckFace]:
    rows = sorted({r for r, _ in sites})
    cols = sorted({c for _, c in sites})

    def q(r, c):
        return sites[(rows[r], cols[c])]

    return [
        CheckFace(PauliOperator.from_letters("X", [q(0, 0), q(0, 1), q(1, 0), q(1, 1)]),
                  "light", "square"),
        CheckFace(PauliOperator.from_letters("Z", [q(0, 0), q(1, 0)]), "dark", "digon"),
        CheckFace(PauliOperator.from_letters("Z", [q(0, 1), q(1, 1)]), "dark", "digon"),
    ]


def find_rep_with_profile(
    qubits: list[int],
    anticommute_with: list[PauliOperator],
    commute_with: list[PauliOperator],
    minimize_over: list[PauliOperator],
) -> PauliOperator:
    """Minimum-weight Hermitian Pauli with a prescribed commutation profile.

    Solves the F2 symplectic system, then scans the affine solution space
    (shifted by the span of ``minimize_over``) for the lightest
    representative.  Used to construct twisted-surgery operators whose
    profile is dictated by an abstract Majorana operator.
    """
    n = len(qubits)
    rows = []
    rhs = []
    for op, want in [(op, 1) for op in anticommute_with] + [(op, 0) for op in commute_with]:
        vec = _pauli_to_vec(op, qubits)
        # symplectic form: <v, w> = v_x . w_z + v_z . w_x
        rows.append(np.concatenate([vec[n:], vec[:n]]))
        rhs.append(want)
    a = np.array(rows, dtype=np.uint8)
    b = np.array(rhs, dtype=np.uint8)
    sol, null = _f2_solve(a, b)
    if sol is None:
        raise ValueError("no Pauli with the requested commutation profile exists")
    # every constraint-preserving shift already lies in the null space
    # (minimize_over is kept in the signature for call-site readability)
    basis = list(null)
    if len(basis) > 16:
        basis = basis[:16]  # cap the scan; weight optimality is a nicety
    best = None
    for mask in range(1 << len(basis)):
        vec = sol.copy()
        for i in range(len(basis)):
            if (mask >> i) & 1:
                vec ^= basis[i]
        cand = _vec_to_pauli(vec, qubits)
        if best is None or weight(cand) < weight(best) or (
                weight(cand) == weight(best) and str(cand) < str(best)):
            best = cand
    return best


def _vec_to_pauli(vec: np.ndarray, qubits: list[int]) -> PauliOperator:
    n = len(qubits)
    support = {}
    for i, q in enumerate(qubits):
        xx, zz = vec[i], vec[n + i]
        if xx or zz:
            support[q] = "Y" if (xx and zz) else ("X" if xx else "Z")
    return PauliOperator(support)


def _f2_solve(a: np.ndarray, b: np.ndarray):
    """Solve a v = b over F2; returns (particular solution, null-space basis)."""
    rows, cols = a.shape
    aug = np.concatenate([a, b.reshape(-1, 1)], axis=1).astype(np.uint8)
    pivots = []
    rank = 0
    for c in range(cols):
        hit = np.nonzero(aug[rank:, c])[0]
        if hit.size == 0:
            continue
        piv = rank + int(hit[0])
        aug[[rank, piv]] = aug[[piv, rank]]
        for r in range(rows):
            if r != rank and aug[r, c]:
                aug[r] ^= aug[rank]
        pivots.append(c)
        rank += 1
        if rank == rows:
            break
    for r in range(rank, rows):
        if aug[r, cols]:
            return None, []
    sol = np.zeros(cols, dtype=np.uint8)
    for r, c in enumerate(pivots):
        sol[c] = aug[r, cols]
    free = [c for c in range(cols) if c not in pivots]
    null = []
    for f in free:
        vec = np.zeros(cols, dtype=np.uint8)
        vec[f] = 1
        for r, c in enumerate(pivots):
            vec[c] = aug[r, f]
        null.append(vec)
    return sol, null
