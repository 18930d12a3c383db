"""Executable schedules for the logical Majorana operations.

A Schedule is a round-tagged stream of logical instructions (preparations,
Cliffords, the one composite T preparation, check and qubit measurements)
plus the classical structure that post-selection and decoding need:

* detection pairs: two measurements of the same check whose outcomes must
  agree,
* parity constraints: outcome sets whose product is deterministically +1 in
  a noiseless run (prep-anchored check values, fused-digon relations, split
  correlations, transversal readout consistency),
* logical readouts: named outcome sets, optionally together with an
  end-of-circuit Pauli whose frame commutator completes the bit,
* observables: the deterministic readouts whose flip defines a logical error.

Schedules exist at the check level (what the oracles execute) and lower to a
physical instruction stream (what the noisy Monte Carlo executes) where every
check measurement becomes an ancilla-mediated ladder in a fixed row-major
order.  Shared-syndrome lowering reuses one ancilla for every check;
local-ancilla lowering gives each distinct check its own.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .oracles import StateVector
from .pauli import PauliOperator, commutes, multiply, product
from .patches import (
    PatchLayout,
    QubitAllocator,
    build_tetron_patch,
    hexon_from_tetrons,
    shift_patch,
    widen_tetron,
    xx_merge_layout,
    zz_merge_layout,
)
from .tableau import Tableau


@dataclass
class Instruction:
    kind: str                      # prep_z | prep_x | prep_t | clifford | measure_check | measure_qubit_z | measure_qubit_x
    qubits: tuple[int, ...] = ()
    gate: str | None = None        # for clifford
    op: PauliOperator | None = None  # for measure_check
    mid: int | None = None
    round_tag: int = 0


@dataclass
class LogicalReadout:
    mids: tuple[int, ...] = ()
    frame_op: PauliOperator | None = None
    note: str = ""


@dataclass
class Schedule:
    instructions: list = field(default_factory=list)
    detection_pairs: list = field(default_factory=list)       # (mid, mid)
    parity_constraints: list = field(default_factory=list)    # (tuple of mids, +1)
    logical_readouts: dict = field(default_factory=dict)      # name -> LogicalReadout
    observables: list = field(default_factory=list)           # names of error-defining readouts
    qubit_budget_mode: str = "shared_syndrome"
    meta: dict = field(default_factory=dict)

    @property
    def n_measurements(self) -> int:
        return sum(1 for ins in self.instructions if ins.mid is not None)

    def data_qubits(self) -> list[int]:
        qs = set()
        for ins in self.instructions:
            qs.update(ins.qubits)
            if ins.op is not None:
                qs.update(ins.op.support)
        return sorted(qs)

    # -- text form (golden format) ------------------------------------------

    def to_text(self) -> str:
        lines = []
        current_round = None
        for ins in self.instructions:
            if ins.round_tag != current_round:
                current_round = ins.round_tag
                lines.append(f"ROUND {current_round}")
            if ins.kind == "prep_z":
                lines.append(f"PREP_Z {ins.qubits[0]}")
            elif ins.kind == "prep_x":
                lines.append(f"PREP_X {ins.qubits[0]}")
            elif ins.kind == "prep_t":
                lines.append(f"PREP_T {ins.qubits[0]}")
            elif ins.kind == "clifford":
                lines.append(f"{ins.gate} " + " ".join(str(q) for q in ins.qubits))
            elif ins.kind == "measure_check":
                lines.append(f"MEAS_CHECK {ins.op} -> m{ins.mid}")
            elif ins.kind == "measure_qubit_z":
                lines.append(f"MEAS_Z {ins.qubits[0]} -> m{ins.mid}")
            elif ins.kind == "measure_qubit_x":
                lines.append(f"MEAS_X {ins.qubits[0]} -> m{ins.mid}")
            else:
                raise ValueError(f"unknown instruction kind {ins.kind}")
        for a, b in self.detection_pairs:
            lines.append(f"DETECT m{a} m{b}")
        for mids, sign in self.parity_constraints:
            body = " ".join(f"m{m}" for m in mids)
            lines.append(f"PARITY {body} = {'+1' if sign > 0 else '-1'}")
        for name in sorted(self.logical_readouts):
            ro = self.logical_readouts[name]
            body = " ".join(f"m{m}" for m in ro.mids)
            frame = f" FRAME {ro.frame_op}" if ro.frame_op is not None else ""
            lines.append(f"LOGICAL {name} = {body}{frame}".rstrip())
        return "\n".join(lines) + "\n"


class ScheduleBuilder:
    """Accumulates instructions with automatic detection-pair chaining."""

    def __init__(self):
        self.schedule = Schedule()
        self._round = 0
        self._next_mid = 0
        self._last_meas: dict[str, int] = {}   # check key -> last mid

    def new_round(self) -> int:
        self._round += 1
        return self._round

    def _add(self, **kw) -> Instruction:
        ins = Instruction(round_tag=self._round, **kw)
        self.schedule.instructions.append(ins)
        return ins

    def prep_z(self, q: int):
        self._add(kind="prep_z", qubits=(q,))

    def prep_x(self, q: int):
        self._add(kind="prep_x", qubits=(q,))

    def prep_t(self, q: int):
        self._add(kind="prep_t", qubits=(q,))

    def clifford(self, gate: str, *qubits: int):
        self._add(kind="clifford", gate=gate, qubits=tuple(qubits))

    def measure_check(self, op: PauliOperator, detect: bool = True,
                      fresh: bool = False) -> int:
        """Measure a check; pairs with the previous measurement of the same
        operator unless the chain was broken (fresh) or never existed."""
        mid = self._next_mid
        self._next_mid += 1
        self._add(kind="measure_check", op=op, mid=mid)
        key = str(op.with_phase(0))
        prior = self._last_meas.get(key)
        if detect and not fresh and prior is not None:
            self.schedule.detection_pairs.append((prior, mid))
        self._last_meas[key] = mid
        return mid

    def suspend_check(self, op: PauliOperator):
        """Break the detection chain of a check (it anticommutes with
        something about to be measured)."""
        self._last_meas.pop(str(op.with_phase(0)), None)

    def last_mid(self, op: PauliOperator) -> int:
        return self._last_meas[str(op.with_phase(0))]

    def measure_qubit(self, q: int, basis: str) -> int:
        mid = self._next_mid
        self._next_mid += 1
        self._add(kind=f"measure_qubit_{basis.lower()}", qubits=(q,), mid=mid)
        return mid

    def parity(self, mids, sign: int = +1):
        self.schedule.parity_constraints.append((tuple(mids), sign))

    def readout(self, name: str, mids=(), frame_op: PauliOperator | None = None,
                note: str = "", observable: bool = False):
        self.schedule.logical_readouts[name] = LogicalReadout(tuple(mids), frame_op, note)
        if observable:
            self.schedule.observables.append(name)


# -- lowering ------------------------------------------------------------------


@dataclass
class LoweredProgram:
    program: list                   # tuples for the frame engine
    n_qubits: int                   # total including ancillas
    n_data: int
    n_meas: int
    ancillas: dict                  # check key -> ancilla qubit (local mode)
    mode: str

    @property
    def n_locations(self) -> int:
        return len(self.program)


def lower(schedule: Schedule, mode: str | None = None) -> LoweredProgram:
    """Expand check measurements into ancilla ladders.

    Z-only checks collect parity onto a |0> ancilla through data-controlled
    CX gates; anything with X or Y content uses a |+> control ancilla with
    CX/CZ (and an S-conjugated CX for Y) in fixed ascending-qubit order.
    """
    mode = mode or schedule.qubit_budget_mode
    data = schedule.data_qubits()
    if mode not in ("shared_syndrome", "local_ancilla"):
        raise ValueError(f"unknown budget mode {mode}")
    next_anc = (max(data) + 1) if data else 0
    ancillas: dict[str, int] = {}
    alive: dict[str, PauliOperator] = {}
    free: list[int] = []
    shared_anc = None
    if mode == "shared_syndrome":
        shared_anc = next_anc
        next_anc += 1
    program = []
    for ins in schedule.instructions:
        if ins.kind in ("prep_z", "prep_x", "prep_t"):
            program.append((ins.kind, ins.qubits[0]))
        elif ins.kind == "clifford":
            if len(ins.qubits) == 1:
                program.append(("g1", ins.gate, ins.qubits[0]))
            else:
                program.append(("g2", ins.gate, ins.qubits[0], ins.qubits[1]))
        elif ins.kind == "measure_qubit_z":
            program.append(("meas_z", ins.qubits[0], ins.mid))
        elif ins.kind == "measure_qubit_x":
            program.append(("meas_x", ins.qubits[0], ins.mid))
        elif ins.kind == "measure_check":
            key = str(ins.op.with_phase(0))
            if mode == "shared_syndrome":
                anc = shared_anc
            else:
                # a check that anticommutes with this one is dead: free its ancilla
                for other_key, other_op in list(alive.items()):
                    if other_key != key and not commutes(other_op, ins.op):
                        free.append(ancillas.pop(other_key))
                        alive.pop(other_key)
                anc = ancillas.get(key)
                if anc is None:
                    anc = free.pop() if free else next_anc
                    if anc == next_anc:
                        next_anc += 1
                    ancillas[key] = anc
                alive[key] = ins.op
            program.extend(_check_ladder(ins.op, anc, ins.mid))
        else:
            raise ValueError(f"unknown instruction kind {ins.kind}")
    n_meas = max((ins.mid for ins in schedule.instructions if ins.mid is not None),
                 default=-1) + 1
    return LoweredProgram(program=program, n_qubits=next_anc, n_data=len(data),
                          n_meas=n_meas, ancillas=ancillas, mode=mode)


def _check_ladder(op: PauliOperator, anc: int, mid: int) -> list:
    letters = [op.support[q] for q in sorted(op.support)]
    qubits = sorted(op.support)
    steps = []
    if set(letters) == {"Z"}:
        steps.append(("prep_z", anc))
        for q in qubits:
            steps.append(("g2", "CX", q, anc))
        steps.append(("meas_z", anc, mid))
        return steps
    steps.append(("prep_z", anc))
    steps.append(("g1", "H", anc))
    for q in qubits:
        letter = op.support[q]
        if letter == "X":
            steps.append(("g2", "CX", anc, q))
        elif letter == "Z":
            steps.append(("g2", "CZ", anc, q))
        else:  # Y: S' CX S sandwich realizes a controlled-Y
            steps.append(("g1", "SDG", q))
            steps.append(("g2", "CX", anc, q))
            steps.append(("g1", "S", q))
    steps.append(("g1", "H", anc))
    steps.append(("meas_z", anc, mid))
    return steps


def qubit_budget(schedule: Schedule, mode: str | None = None) -> int:
    return lower(schedule, mode).n_qubits


# -- exact executors --------------------------------------------------------------


def run_statevector(schedule: Schedule, n_qubits: int, rng: np.random.Generator,
                    initial: StateVector | None = None,
                    forced: dict | None = None):
    """Execute at the check level on the dense oracle.  Handles T exactly.

    ``forced`` maps mid -> outcome in {+1, -1}: the state is projected onto
    that branch (zero-probability branches raise)."""
    sv = initial.copy() if initial is not None else StateVector(n_qubits)
    forced = forced or {}
    outcomes = {}
    for ins in schedule.instructions:
        if ins.kind == "prep_z":
            _reset_qubit(sv, ins.qubits[0], "Z", rng)
        elif ins.kind == "prep_x":
            _reset_qubit(sv, ins.qubits[0], "X", rng)
        elif ins.kind == "prep_t":
            q = ins.qubits[0]
            _reset_qubit(sv, q, "Z", rng)
            sv.apply_gate("H", q)
            sv.apply_gate("T", q)
        elif ins.kind == "clifford":
            sv.apply_gate(ins.gate, *ins.qubits)
        elif ins.kind in ("measure_check", "measure_qubit_z", "measure_qubit_x"):
            if ins.kind == "measure_check":
                op = ins.op
            else:
                basis = "Z" if ins.kind.endswith("_z") else "X"
                op = PauliOperator.single(basis, ins.qubits[0])
            if ins.mid in forced:
                prob = sv.project_pauli(op, forced[ins.mid])
                if prob < 1e-12:
                    raise ValueError(f"forced branch for m{ins.mid} has zero probability")
                outcomes[ins.mid] = forced[ins.mid]
            else:
                outcomes[ins.mid] = sv.measure_pauli(op, rng)
        else:
            raise ValueError(ins.kind)
    return outcomes, sv


def _reset_qubit(sv: StateVector, q: int, basis: str, rng: np.random.Generator):
    outcome = sv.measure_pauli(PauliOperator.single(basis, q), rng)
    if outcome == -1:
        flip = "X" if basis == "Z" else "Z"
        sv.apply_gate(flip, q)


def run_chp(schedule: Schedule, n_qubits: int, rng: np.random.Generator,
            tableau: Tableau | None = None):
    """Exact Clifford execution (no T support) at the check level."""
    tab = tableau if tableau is not None else Tableau(n_qubits)
    outcomes = {}
    for ins in schedule.instructions:
        if ins.kind == "prep_z":
            tab.prep_z(ins.qubits[0], rng)
        elif ins.kind == "prep_x":
            tab.prep_x(ins.qubits[0], rng)
        elif ins.kind == "prep_t":
            raise ValueError("CHP execution cannot realize the T preparation")
        elif ins.kind == "clifford":
            tab.apply_clifford(ins.gate, *ins.qubits)
        elif ins.kind == "measure_check":
            outcomes[ins.mid], _ = tab.measure_pauli(ins.op, rng)
        elif ins.kind == "measure_qubit_z":
            outcomes[ins.mid], _ = tab.measure_pauli(
                PauliOperator.single("Z", ins.qubits[0]), rng)
        elif ins.kind == "measure_qubit_x":
            outcomes[ins.mid], _ = tab.measure_pauli(
                PauliOperator.single("X", ins.qubits[0]), rng)
        else:
            raise ValueError(ins.kind)
    return outcomes, tab


def check_acceptance(schedule: Schedule, outcomes: dict) -> bool:
    for a, b in schedule.detection_pairs:
        if outcomes[a] != outcomes[b]:
            return False
    for mids, sign in schedule.parity_constraints:
        prod = 1
        for m in mids:
            prod *= outcomes[m]
        if prod != sign:
            return False
    return True


def readout_value(schedule: Schedule, name: str, outcomes: dict) -> int:
    ro = schedule.logical_readouts[name]
    val = 1
    for m in ro.mids:
        val *= outcomes[m]
    return val


# -- protocol builders --------------------------------------------------------------


def _measure_patch_checks(b: ScheduleBuilder, patch: PatchLayout,
                          constrain: dict | None = None,
                          fresh: set | None = None) -> dict:
    """One round over a patch's checks; returns key -> mid."""
    constrain = constrain or {}
    fresh = fresh or set()
    mids = {}
    for face in patch.checks:
        key = face.key
        mid = b.measure_check(face.op, fresh=key in fresh)
        mids[key] = mid
        if key in constrain:
            extra = constrain[key]
            b.parity((mid, *extra) if extra else (mid,), +1)
    return mids


def op1_pair_creation(patch: PatchLayout, basis: str = "z",
                      builder: ScheduleBuilder | None = None) -> Schedule:
    """Project fresh |0> (or |+>) qubits into the code space, twice over.

    The deterministic round-1 check values are pinned as +1 parity
    constraints, so a preparation fault that silently lands in the wrong
    coset is rejected rather than reinterpreted.
    """
    b = builder or ScheduleBuilder()
    b.new_round()
    for q in patch.data_qubits():
        (b.prep_z if basis == "z" else b.prep_x)(q)
    deterministic_type = "Z" if basis == "z" else "X"
    constraints = {}
    for face in patch.checks:
        letters = set(face.op.support.values())
        if letters == {deterministic_type}:
            constraints[face.key] = ()
    b.new_round()
    _measure_patch_checks(b, patch, constrain=constraints, fresh={f.key for f in patch.checks})
    b.new_round()
    _measure_patch_checks(b, patch)
    if basis == "z":
        b.readout("zbar", mids=(), frame_op=patch.logical_z[0],
                  note="prepared logical Z value relative to shadow", observable=True)
    else:
        b.readout("xbar", mids=(), frame_op=patch.logical_x[0],
                  note="prepared logical X value relative to shadow", observable=True)
    if builder is None:
        b.schedule.meta["op"] = "op1"
    return b.schedule


def op3_four_fermion_measure(patch: PatchLayout,
                             builder: ScheduleBuilder | None = None) -> Schedule:
    """Two check rounds; the decoded product of the last round is the
    four-fermion (patch parity) value."""
    b = builder or ScheduleBuilder()
    b.new_round()
    _measure_patch_checks(b, patch)
    b.new_round()
    mids = _measure_patch_checks(b, patch)
    b.readout("fusion_quad", mids=tuple(mids.values()),
              note="product of all checks = four-fermion eigenvalue")
    if builder is None:
        b.schedule.meta["op"] = "op3"
    return b.schedule


def op7_lattice_surgery(patch_a: PatchLayout, patch_b: PatchLayout,
                        builder: ScheduleBuilder | None = None) -> Schedule:
    """Merge-and-split measuring the joint four-fermion observable.

    Both the fusion and the fission stages run two rounds; the fused middle
    square carries its predetermined-value constraint and the re-split digons
    their correlation constraint.
    """
    b = builder or ScheduleBuilder()
    merged = xx_merge_layout(patch_a, patch_b)
    digon_a = patch_a.checks[2].op     # right digon of A
    digon_b = patch_b.checks[1].op     # left digon of B
    mid_square = [f for f in merged.checks if f.kind == "joint" and len(f.op.support) == 4][0]
    half_moons = [f for f in merged.checks if f.kind == "joint" and len(f.op.support) == 2]
    xsq_a = patch_a.checks[0].op

    # merge rounds
    b.new_round()
    pinned = {}
    try:
        pinned[mid_square.key] = (b.last_mid(digon_a), b.last_mid(digon_b))
    except KeyError:
        pinned = {}
    b.suspend_check(digon_a)
    b.suspend_check(digon_b)
    merge1 = _measure_patch_checks(b, merged, constrain=pinned,
                                   fresh={f.key for f in merged.checks if f.kind == "joint"})
    b.new_round()
    merge2 = _measure_patch_checks(b, merged)
    b.readout("fusion_joint",
              mids=(merge2[half_moons[0].key], merge2[half_moons[1].key],
                    merge2[str(xsq_a)]),
              note="joint four-fermion outcome (XbarXbar dressed by the left square)")

    # split rounds
    b.new_round()
    for face in merged.checks:
        if face.kind == "joint":
            b.suspend_check(face.op)
    split_faces = list(patch_a.checks) + list(patch_b.checks)
    split1 = {}
    for face in split_faces:
        fresh = face.op in (digon_a, digon_b)
        split1[face.key] = b.measure_check(face.op, fresh=fresh)
    b.parity((split1[str(digon_a)], split1[str(digon_b)], merge2[mid_square.key]), +1)
    b.new_round()
    for face in split_faces:
        b.measure_check(face.op)
    b.readout("split_digon_a", mids=(split1[str(digon_a)],),
              note="re-split right digon of patch A")
    b.readout("split_digon_b", mids=(split1[str(digon_b)],),
              note="re-split left digon of patch B")
    if builder is None:
        b.schedule.meta["op"] = "op7"
    return b.schedule


def op2_pair_fusion(patch_a: PatchLayout, ancilla: PatchLayout,
                    builder: ScheduleBuilder | None = None) -> Schedule:
    """Non-destructive fusion readout of patch A's dark pair via a fresh
    ancilla patch below it.

    The ancilla is prepared with operation 1, the joint dark square is
    measured for two rounds, and the ancilla is read out destructively in Z
    while A's checks are measured once more.
    """
    b = builder or ScheduleBuilder()
    op1_pair_creation(ancilla, basis="z", builder=b)
    b.schedule.observables = [n for n in b.schedule.observables if n != "zbar"]
    b.schedule.logical_readouts.pop("zbar", None)
    b.new_round()
    _measure_patch_checks(b, patch_a)

    merged = zz_merge_layout(patch_a, ancilla)
    joint = [f for f in merged.checks if f.kind == "joint"][0]
    b.new_round()
    m1 = {}
    for face in merged.checks:
        m1[face.key] = b.measure_check(face.op, fresh=face.key == joint.key)
    b.new_round()
    m2 = {}
    for face in merged.checks:
        m2[face.key] = b.measure_check(face.op)

    # readout stage: ancilla destructively in Z, A's checks once more
    b.new_round()
    final_a = _measure_patch_checks(b, patch_a)
    zbits = {q: b.measure_qubit(q, "z") for q in ancilla.data_qubits()}
    anc = sorted(ancilla.data_qubits())
    anc_dl, anc_dr = ancilla.checks[1].op, ancilla.checks[2].op
    dl_pair = sorted(anc_dl.support)
    dr_pair = sorted(anc_dr.support)
    b.parity((zbits[dl_pair[0]], zbits[dl_pair[1]], m2[str(anc_dl)]), +1)
    b.parity((zbits[dr_pair[0]], zbits[dr_pair[1]], m2[str(anc_dr)]), +1)
    zbar_anc = sorted(ancilla.logical_z[0].support)
    b.parity((zbits[zbar_anc[0]], zbits[zbar_anc[1]]), +1)

    digon_mids = (m2[patch_a.checks[1].key], m2[patch_a.checks[2].key])
    b.readout("pair_fusion",
              mids=(m2[joint.key], *digon_mids,
                    zbits[zbar_anc[0]], zbits[zbar_anc[1]]),
              note="fusion value of A's dark pair (joint square dressed by "
                   "A's digons and the ancilla logical Z)")
    b.schedule.meta["op"] = "op2"
    b.schedule.meta["collapsed_check"] = str(joint.op)
    return b.schedule


def op4_magic_injection(patch: PatchLayout, rounds: int = 2,
                        builder: ScheduleBuilder | None = None) -> Schedule:
    """Inject a T state: top pair prepped |+> (one through the T composite),
    bottom pair |0>, then check rounds.

    Error accounting is frame-based: any surviving logical Pauli corrupts the
    magic state, so both logical commutators are observables.
    """
    if rounds not in (1, 2):
        raise ValueError("op4 runs one or two check rounds")
    b = builder or ScheduleBuilder()
    qs = patch.data_qubits()
    b.new_round()
    # The |T> and |+> qubits share a dark digon so the checks cannot read
    # either one out individually; with |T> on the first qubit the injected
    # logical state needs no sector-dependent correction (oracle-verified).
    b.prep_t(qs[0])
    b.prep_z(qs[1])
    b.prep_x(qs[2])
    b.prep_z(qs[3])
    for _ in range(rounds):
        b.new_round()
        _measure_patch_checks(b, patch)
    b.readout("zbar_flip", mids=(), frame_op=patch.logical_z[0],
              note="logical Z frame parity", observable=True)
    b.readout("xbar_flip", mids=(), frame_op=patch.logical_x[0],
              note="logical X frame parity", observable=True)
    b.schedule.meta["op"] = "op4"
    return b.schedule


# -- trial wrappers (Monte-Carlo endings) ----------------------------------------------


def append_transversal_readout(b: ScheduleBuilder, patch: PatchLayout, basis: str = "z",
                               name_prefix: str = "") -> dict:
    """Destructive single-qubit readout of a patch; reconstructed check
    values join the post-selection."""
    b.new_round()
    bits = {q: b.measure_qubit(q, basis) for q in patch.data_qubits()}
    letter = "Z" if basis == "z" else "X"
    for face in patch.checks:
        if set(face.op.support.values()) == {letter}:
            mids = [bits[q] for q in sorted(face.op.support)]
            try:
                mids.append(b.last_mid(face.op))
            except KeyError:
                continue  # check never measured or suspended: value not pinned
            b.parity(tuple(mids), +1)
    return bits


def build_op1_trial(d: int = 2, basis: str = "z") -> tuple[Schedule, PatchLayout]:
    patch = build_tetron_patch(d)
    b = ScheduleBuilder()
    op1_pair_creation(patch, basis=basis, builder=b)
    bits = append_transversal_readout(b, patch, basis=basis)
    logical = patch.logical_z[0] if basis == "z" else patch.logical_x[0]
    mids = tuple(bits[q] for q in sorted(logical.support))
    b.schedule.logical_readouts.clear()
    b.schedule.observables.clear()
    b.readout("zbar" if basis == "z" else "xbar", mids=mids,
              note="transversal logical readout", observable=True)
    b.schedule.meta["op"] = "op1"
    return b.schedule, patch

def build_op3_trial(d: int = 2) -> tuple[Schedule, PatchLayout]:
    patch = build_tetron_patch(d)
    b = ScheduleBuilder()
    op1_pair_creation(patch, basis="z", builder=b)
    b.schedule.logical_readouts.clear()
    b.schedule.observables.clear()
    op3_four_fermion_measure(patch, builder=b)
    bits = append_transversal_readout(b, patch, basis="z")
    mids = tuple(bits[q] for q in sorted(patch.logical_z[0].support))
    b.readout("zbar", mids=mids, note="transversal logical readout", observable=True)
    b.schedule.meta["op"] = "op3"
    return b.schedule, patch


def build_op7_trial() -> tuple[Schedule, PatchLayout, PatchLayout]:
    alloc = QubitAllocator()
    a = build_tetron_patch(2, origin=(0, 0), allocator=alloc)
    bpatch = build_tetron_patch(2, origin=(0, 2), allocator=alloc)
    b = ScheduleBuilder()
    op1_pair_creation(a, basis="z", builder=b)
    op1_pair_creation(bpatch, basis="z", builder=b)
    b.schedule.logical_readouts.clear()
    b.schedule.observables.clear()
    op7_lattice_surgery(a, bpatch, builder=b)
    bits_a = append_transversal_readout(b, a, basis="z")
    bits_b = append_transversal_readout(b, bpatch, basis="z")
    za = [bits_a[q] for q in sorted(a.logical_z[0].support)]
    zb = [bits_b[q] for q in sorted(bpatch.logical_z[0].support)]
    b.readout("zbar_joint", mids=tuple(za + zb),
              note="ZbarZbar correlator, deterministic on |00>", observable=True)
    b.readout("zbar_a", mids=tuple(za))
    b.readout("zbar_b", mids=tuple(zb))
    b.schedule.meta["op"] = "op7"
    return b.schedule, a, bpatch


def build_op2_trial() -> tuple[Schedule, PatchLayout, PatchLayout]:
    alloc = QubitAllocator()
    a = build_tetron_patch(2, origin=(0, 0), allocator=alloc)
    anc = build_tetron_patch(2, origin=(2, 0), allocator=alloc)
    b = ScheduleBuilder()
    op1_pair_creation(a, basis="z", builder=b)
    b.schedule.logical_readouts.clear()
    b.schedule.observables.clear()
    op2_pair_fusion(a, anc, builder=b)
    fusion = b.schedule.logical_readouts["pair_fusion"]
    bits_a = append_transversal_readout(b, a, basis="z")
    za = tuple(bits_a[q] for q in sorted(a.logical_z[0].support))
    # on a |0>_L input the fusion outcome and the final readout are both
    # deterministic and must agree
    b.readout("pair_fusion", mids=fusion.mids, note=fusion.note, observable=True)
    b.readout("fusion_vs_final", mids=tuple(fusion.mids) + za,
              note="fusion outcome against the destructive readout", observable=True)
    b.schedule.meta["op"] = "op2"
    return b.schedule, a, anc


def build_op4_trial(rounds: int = 2) -> tuple[Schedule, PatchLayout]:
    patch = build_tetron_patch(2)
    b = ScheduleBuilder()
    op4_magic_injection(patch, rounds=rounds, builder=b)
    b.schedule.meta["op"] = "op4"
    return b.schedule, patch


# -- frames ---------------------------------------------------------------------


@dataclass
class Frame:
    """Classical record of deferred corrections.

    ``pauli`` collects physical-qubit Pauli corrections (products of logical
    representatives).  ``twist_signs`` counts accumulated sign flips per
    abstract twist pair; a later fusion measurement's outcome is reinterpreted
    by its commutator with the recorded monomials.  Everything is bookkeeping:
    no gate is ever applied.
    """

    pauli: PauliOperator = field(default_factory=PauliOperator.identity)
    twist_signs: dict = field(default_factory=dict)    # (p, q) -> flip count
    log: list = field(default_factory=list)

    def update_pauli(self, op: PauliOperator, why: str = ""):
        self.pauli = multiply(self.pauli, op).with_phase(0)
        self.log.append(("pauli", str(op), why))

    def flip_pair(self, pair: tuple, why: str = ""):
        key = tuple(sorted(pair))
        self.twist_signs[key] = self.twist_signs.get(key, 0) + 1
        self.log.append(("pair", key, why))

    def pair_sign(self, pair: tuple) -> int:
        return -1 if self.twist_signs.get(tuple(sorted(pair)), 0) % 2 else +1


def frame_from_rule(schedule: Schedule, outcomes: dict) -> Frame:
    """Evaluate a schedule's symbolic frame program on concrete outcomes.

    Entries run in schedule order:

    * ("correction", rep_text, mids, const): fold rep into the frame when the
      XOR of the outcome bits (plus const) is set;
    * ("s_conj", z_rep_text): conjugate the pending frame through a logical S
      (an X component picks up the logical Z);
    * ("braid_conj", z1_text, z2_text): conjugate through the two-qubit braid
      Clifford (an odd number of X components picks up Z1 Z2).
    """
    frame = Frame()
    for entry in schedule.meta.get("frame_program", ()):
        kind = entry[0]
        if kind == "correction":
            _, rep_text, mids, const = entry
            bit = const
            for m in mids:
                bit ^= (outcomes[m] == -1)
            if bit:
                frame.update_pauli(PauliOperator.from_str(rep_text), "correction")
        elif kind == "s_conj":
            z_rep = PauliOperator.from_str(entry[1])
            if not commutes(frame.pauli, z_rep):
                frame.update_pauli(z_rep, "S conjugation")
        elif kind == "braid_conj":
            z1 = PauliOperator.from_str(entry[1])
            z2 = PauliOperator.from_str(entry[2])
            if commutes(frame.pauli, z1) != commutes(frame.pauli, z2):
                frame.update_pauli(multiply(z1, z2).with_phase(0), "braid conjugation")
        elif kind == "move":
            # translate the pending frame onto a relocated patch's operators
            _, old_z, old_x, new_z, new_x = entry
            old_z, old_x = PauliOperator.from_str(old_z), PauliOperator.from_str(old_x)
            new_z, new_x = PauliOperator.from_str(new_z), PauliOperator.from_str(new_x)
            x_bit = not commutes(frame.pauli, old_z)
            z_bit = not commutes(frame.pauli, old_x)
            if x_bit:
                frame.update_pauli(old_x, "move cancel")
                frame.update_pauli(new_x, "move")
            if z_bit:
                frame.update_pauli(old_z, "move cancel")
                frame.update_pauli(new_z, "move")
        else:
            raise ValueError(f"unknown frame entry {entry!r}")
    return frame


def resolve_with_frame(frame: Frame, schedule: Schedule, outcomes: dict) -> dict:
    """Reinterpret raw logical readouts through the tracked frame."""
    corrected = {}
    for name, ro in schedule.logical_readouts.items():
        value = 1
        for m in ro.mids:
            value *= outcomes[m]
        if ro.frame_op is not None and not commutes(frame.pauli, ro.frame_op):
            value = -value
        corrected[name] = value
    return corrected


# -- operation 5: on-patch exchange (S gate) ------------------------------------------


def op5_on_patch_exchange(patch: PatchLayout, allocator: QubitAllocator,
                          ancilla_origin: tuple[int, int] | None = None,
                          orientation: str = "ccw",
                          builder: ScheduleBuilder | None = None) -> Schedule:
    """Exchange the dark-pair twists of a d=2 tetron: the logical S gate.

    Widens the patch, runs the joint Y(x)X measurement with a fresh ancilla
    tetron below, reads the widened patch out destructively in Z (the
    measurement-based phase-gate circuit), then teleports the state back onto
    the original footprint through a dark merge and a destructive X readout
    of the ancilla.  All corrections land in the Pauli frame:

        stage 1:   X^b Z^(1+a) S |psi>    (a = joint YX, b = destructive Zbar)
        stage 2:   X^a' Z^b' applied on top (a' = joint ZZ, b' = ancilla Xbar)

    Counterclockwise orientation gives S; clockwise folds one extra logical Z
    into the frame (S_dagger = Z S).
    """
    if orientation not in ("ccw", "cw"):
        raise ValueError("orientation is ccw or cw")
    b = builder or ScheduleBuilder()
    wide = widen_tetron(patch, allocator)
    new_qubits = sorted(set(wide.sites.values()) - set(patch.sites.values()))
    (r0, c0) = min(patch.sites)
    origin_c = ancilla_origin or (r0 + 2, c0)
    ancilla = build_tetron_patch(2, origin=origin_c, allocator=allocator)

    # stage 0: widen (new columns in |0>, two rounds of the wide checks)
    b.new_round()
    for q in new_qubits:
        b.prep_z(q)
    old_keys = {f.key for f in patch.checks}
    pinned = {}
    zsq_mid = wide.checks[1]
    zdig_right = wide.checks[4]
    try:
        pinned[zsq_mid.key] = (b.last_mid(patch.checks[2].op),)
    except KeyError:
        pinned[zsq_mid.key] = ()
    pinned[zdig_right.key] = ()
    b.suspend_check(patch.checks[2].op)   # old right digon leaves the group
    _measure_patch_checks(b, wide, constrain=pinned,
                          fresh={f.key for f in wide.checks if f.key not in old_keys})
    b.new_round()
    _measure_patch_checks(b, wide)

    # stage 1: ancilla prep and the joint YX measurement
    op1_pair_creation(ancilla, basis="z", builder=b)
    b.schedule.logical_readouts.pop("zbar", None)
    b.schedule.observables = [n for n in b.schedule.observables if n != "zbar"]
    ybar_wide = multiply(PauliOperator.identity(1),
                         multiply(wide.logical_x[0], wide.logical_z[0]))
    joint_yx = multiply(ybar_wide, ancilla.logical_x[0])
    assert joint_yx.is_hermitian()
    for face in list(wide.checks) + list(ancilla.checks):
        assert commutes(joint_yx, face.op)
    b.new_round()
    b.measure_check(joint_yx, fresh=True)
    _measure_patch_checks(b, wide)
    _measure_patch_checks(b, ancilla)
    b.new_round()
    a_mid = b.measure_check(joint_yx)
    _measure_patch_checks(b, wide)
    _measure_patch_checks(b, ancilla)

    # stage 1 ending: destructive Z readout of the widened patch
    wide_bits = append_transversal_readout(b, wide, basis="z")
    b_mids = tuple(wide_bits[wide.sites[(r0, c0 + c)]] for c in range(4))

    # stage 2: re-prepare the original footprint in |+> and teleport back
    op1_pair_creation(patch, basis="x", builder=b)
    b.schedule.logical_readouts.pop("xbar", None)
    b.schedule.observables = [n for n in b.schedule.observables if n != "xbar"]
    merged = zz_merge_layout(patch, ancilla)
    joint_face = [f for f in merged.checks if f.kind == "joint"][0]
    b.new_round()
    m1 = {f.key: b.measure_check(f.op, fresh=f.key == joint_face.key)
          for f in merged.checks}
    b.new_round()
    m2 = {f.key: b.measure_check(f.op) for f in merged.checks}
    anc_bits = append_transversal_readout(b, ancilla, basis="x")
    xbar_anc = sorted(ancilla.logical_x[0].support)
    bprime_mids = (anc_bits[xbar_anc[0]], anc_bits[xbar_anc[1]])
    aprime_mids = (m2[joint_face.key],
                   m2[patch.checks[1].key], m2[patch.checks[2].key])

    program = b.schedule.meta.setdefault("frame_program", [])
    program.append(("s_conj", str(patch.logical_z[0])))
    program.append(("correction", str(patch.logical_x[0]),
                    tuple(b_mids) + aprime_mids, 0))
    z_const = (1 if orientation == "ccw" else 0)
    program.append(("correction", str(patch.logical_z[0]),
                    (a_mid,) + bprime_mids, z_const))
    b.schedule.meta["op"] = "op5"
    b.schedule.meta["output_patch"] = "original footprint"
    b.readout("zbar_flip", mids=(), frame_op=patch.logical_z[0],
              note="residual logical Z frame", observable=True)
    b.readout("xbar_flip", mids=(), frame_op=patch.logical_x[0],
              note="residual logical X frame", observable=True)
    return b.schedule


# -- measurement-only exchange (abstract) and operation 6 ------------------------------


@dataclass
class MeasurementProgram:
    """Abstract pair-measurement realization of a braid.

    ``sequence`` lists the fusion pairs measured in order; ``corrections``
    maps each outcome branch (+-1 tuple) to the Majorana-frame monomial whose
    tracking makes every branch equal to the counterclockwise braid of
    (p, s).  Found by exhaustive search in the Fock oracle and cached.
    """

    p: int
    q: int
    r: int
    s: int
    sequence: tuple
    corrections: dict


_EXCHANGE_CACHE: dict = {}


def exchange_via_measurements(p: int, q: int, r: int, s: int) -> MeasurementProgram:
    """Search for a <=3 pair-measurement program whose net channel is the
    braid of (p, s), given the ancilla pair (q, r) prepared in +1 fusion.

    The search enumerates measurement sequences over the four modes, builds
    each branch in the Fock oracle, and keeps the first sequence whose
    post-selected branch is proportional to the braid; the other branches
    define the Majorana-frame corrections.
    """
    from itertools import combinations, product as iproduct

    if len({p, q, r, s}) != 4:
        raise ValueError("modes must be distinct")
    key = (p, q, r, s)
    if key in _EXCHANGE_CACHE:
        return _EXCHANGE_CACHE[key]
    order = [p, q, r, s]
    rank = {m: i for i, m in enumerate(sorted(order))}
    from .majorana import MajoranaMonomial, fusion_operator
    from .oracles import FockState

    dim = 4

    def op_matrix(mono):
        out = np.zeros((dim, dim), dtype=complex)
        for j in range(dim):
            amps = np.zeros(dim, dtype=complex)
            amps[j] = 1
            st = FockState(2, amps)
            st.apply_monomial(mono)
            out[:, j] = st.amps
        return out

    def local(mono_modes, phase=1):
        return MajoranaMonomial.from_factors([rank[m] for m in mono_modes], phase)

    def proj(mono, sign):
        return (np.eye(dim) + sign * op_matrix(mono)) / 2

    braid = (np.eye(dim) + op_matrix(local((s, p), 0))) / np.sqrt(2)
    w, v = np.linalg.eigh(op_matrix(local((q, r))))
    sub = v[:, w > 0.5]
    pairs = list(combinations(range(4), 2))   # local labels throughout the search
    corrections_pool = [MajoranaMonomial.identity()] + [
        MajoranaMonomial.from_factors(c, 1) for c in pairs
    ] + [MajoranaMonomial.from_factors(tuple(range(4)))]

    def branch(seq_monos, outs):
        m = np.eye(dim, dtype=complex)
        for mono, o in zip(seq_monos, outs):
            m = proj(mono, o) @ m
        return m @ sub

    inv_rank = {i: m for m, i in rank.items()}
    for length in (2, 3):
        for seq in iproduct(pairs, repeat=length):
            monos = [MajoranaMonomial.from_factors(ab, 1) for ab in seq]
            got = branch(monos, [1] * length)
            want = braid @ sub
            c = np.vdot(want.flatten(), got.flatten()) / np.vdot(want.flatten(), want.flatten())
            if abs(c) < 1e-9 or not np.allclose(got, c * want, atol=1e-9):
                continue
            corrections = {}
            complete = True
            for outs in iproduct((1, -1), repeat=length):
                bvec = branch(monos, outs)
                if np.linalg.norm(bvec) < 1e-9:
                    corrections[outs] = None
                    continue
                hit = None
                for corr in corrections_pool:
                    wvec = op_matrix(corr) @ braid @ sub
                    cc = np.vdot(wvec.flatten(), bvec.flatten()) / np.vdot(
                        wvec.flatten(), wvec.flatten())
                    if abs(cc) > 1e-9 and np.allclose(bvec, cc * wvec, atol=1e-9):
                        hit = MajoranaMonomial.from_factors(
                            [inv_rank[m] for m in corr.modes], corr.phase)
                        break
                if hit is None:
                    complete = False
                    break
                corrections[outs] = hit
            if complete:
                seq_global = tuple(
                    tuple(sorted((inv_rank[a], inv_rank[b]))) for a, b in seq)
                prog = MeasurementProgram(p, q, r, s, seq_global, corrections)
                _EXCHANGE_CACHE[key] = prog
                return prog
    raise RuntimeError("no short measurement sequence realizes the braid")


def forced_measurement_exchange(state, p: int, q: int, r: int, s: int,
                                rng: np.random.Generator, max_retries: int = 64):
    """Repeat-until-trivial variant run directly on a Fock state.

    Each undesired outcome is undone by remeasuring the ancilla fusion pair
    and retrying, so the net channel is the braid with no frame left over.
    Returns the retry count.
    """
    from .majorana import fusion_operator

    prog = exchange_via_measurements(p, q, r, s)
    retries = 0
    for mono_pair in prog.sequence:
        mono = _pair_mono(mono_pair)
        while state.measure_monomial(mono, rng) != +1:
            retries += 1
            if retries > max_retries:
                raise RuntimeError("forced measurement failed to converge")
            # pull the pair back to +1 through the complementary measurement
            state.measure_monomial(_pair_mono((prog.q, prog.s)), rng) \
                if mono_pair != (min(prog.q, prog.s), max(prog.q, prog.s)) \
                else state.measure_monomial(_pair_mono((prog.p, prog.q)), rng)
    return retries


def _pair_mono(pair):
    from .majorana import MajoranaMonomial
    return MajoranaMonomial.from_factors(tuple(pair), 1)


def op6_between_patch_exchange(patch_a: PatchLayout, patch_b: PatchLayout,
                               allocator: QubitAllocator,
                               ancilla_origin: tuple[int, int] | None = None,
                               orientation: str = "ccw",
                               builder: ScheduleBuilder | None = None) -> Schedule:
    """Exchange the two interface fermions of adjacent tetrons.

    The tetrons fuse reversibly into a d=2 hexon, the middle twist pair is
    braided through the measurement-only exchange program (three fusion
    measurements against a fresh ancilla tetron, each lowered to a
    twisted-surgery operator), and the fusion is reversed.  Outcome branches
    land in the frame; the net action is the counterclockwise braid of the
    interface pair (clockwise adds the tracked logical Z1 Z2).
    """
    if orientation not in ("ccw", "cw"):
        raise ValueError("orientation is ccw or cw")
    b = builder or ScheduleBuilder()
    hexon = hexon_from_tetrons(patch_a, patch_b)
    (r0, c0) = min(patch_a.sites)
    origin_c = ancilla_origin or (r0 + 2, c0)
    cpatch = build_tetron_patch(2, origin=origin_c, allocator=allocator)
    # abstract mode labels: A = 0..3, B = 4..7 (hexon keeps 0,1,2,5,6,7), C = 8..11
    hexon_map = {0: 0, 1: 1, 2: 2, 3: 5, 4: 6, 5: 7}
    c_map = {0: 8, 1: 9, 2: 10, 3: 11}
    digon_a = patch_a.checks[2].op
    digon_b = patch_b.checks[1].op
    mid_square = [f for f in hexon.checks if f.kind == "square" and f.color == "dark"][0]
    names = b.schedule.meta.setdefault("named_mids", {})

    # stage 1: fuse into the hexon
    b.new_round()
    pinned = {}
    try:
        pinned[mid_square.key] = (b.last_mid(digon_a), b.last_mid(digon_b))
    except KeyError:
        pass
    b.suspend_check(digon_a)
    b.suspend_check(digon_b)
    new_keys = {f.key for f in hexon.checks} - (
        {f.key for f in patch_a.checks} | {f.key for f in patch_b.checks})
    _measure_patch_checks(b, hexon, constrain=pinned, fresh=new_keys)
    b.new_round()
    _measure_patch_checks(b, hexon)

    # stage 2: the exchange as a phase gate on the virtual qubit
    # Zv = Zbar1 Zbar2, Xv = Xbar1.  The braid multiplies the Zv = -1 subspace
    # by a phase, which is exactly the measurement-based phase-gate circuit
    # run on the virtual qubit against the ancilla, followed by a teleport
    # back into the collapsed slot.  Every operator commutes with every
    # check, so nothing is suspended.
    op1_pair_creation(cpatch, basis="z", builder=b)
    b.schedule.logical_readouts.pop("zbar", None)
    b.schedule.observables = [n for n in b.schedule.observables if n != "zbar"]
    v_z = multiply(hexon.logical_z[0], hexon.logical_z[1]).with_phase(0)
    v_x = hexon.logical_x[0]
    y_v = multiply(PauliOperator.identity(1), multiply(v_x, v_z))
    joint_yx = multiply(y_v, cpatch.logical_x[0])
    teleport_back = multiply(v_x, cpatch.logical_x[0])
    working = list(hexon.checks) + list(cpatch.checks)
    for op in (v_z, y_v, joint_yx, teleport_back):
        assert op.is_hermitian()
        for face in working:
            assert commutes(op, face.op), (str(op), str(face.op))

    def _paired_rounds(op):
        b.new_round()
        b.measure_check(op, fresh=True)
        for face in working:
            b.measure_check(face.op)
        b.new_round()
        mid = b.measure_check(op)
        for face in working:
            b.measure_check(face.op)
        return mid

    a_mid = _paired_rounds(joint_yx)        # M_YX on (virtual qubit, ancilla)
    b_mid = _paired_rounds(v_z)             # M_Z on the virtual qubit
    a2_mid = _paired_rounds(teleport_back)  # dark-free XX merge back into the slot
    c_bits = append_transversal_readout(b, cpatch, basis="z")
    zbar_c = sorted(cpatch.logical_z[0].support)
    names["exchange_yx"] = a_mid
    names["exchange_zv"] = b_mid
    names["exchange_back"] = a2_mid

    program = b.schedule.meta.setdefault("frame_program", [])
    program.append(("s_conj", str(v_z)))
    program.append(("correction", str(v_x),
                    (c_bits[zbar_c[0]], c_bits[zbar_c[1]]), 0))
    z_const = 0 if orientation == "ccw" else 1
    program.append(("correction", str(v_z), (a_mid, a2_mid), z_const))

    # stage 3: split the hexon back into two tetrons
    b.new_round()
    mid_square_last = b.last_mid(mid_square.op)
    names["mid_square_last"] = mid_square_last
    split1 = {}
    for face in list(patch_a.checks) + list(patch_b.checks):
        fresh = face.op in (digon_a, digon_b)
        if fresh:
            b.suspend_check(face.op)
        split1[face.key] = b.measure_check(face.op, fresh=fresh)
    b.parity((split1[str(digon_a)], split1[str(digon_b)], mid_square_last), +1)
    b.new_round()
    for face in list(patch_a.checks) + list(patch_b.checks):
        b.measure_check(face.op)
    names["split_digon_a"] = split1[str(digon_a)]
    names["split_digon_b"] = split1[str(digon_b)]

    b.schedule.meta["op"] = "op6"
    b.schedule.meta["orientation"] = orientation
    b.readout("zbar_a_flip", mids=(), frame_op=patch_a.logical_z[0],
              note="residual logical frame", observable=True)
    b.readout("xbar_a_flip", mids=(), frame_op=patch_a.logical_x[0],
              note="residual logical frame", observable=True)
    b.readout("zbar_b_flip", mids=(), frame_op=patch_b.logical_z[0],
              note="residual logical frame", observable=True)
    b.readout("xbar_b_flip", mids=(), frame_op=patch_b.logical_x[0],
              note="residual logical frame", observable=True)
    return b.schedule


def op_shift(patch: PatchLayout, allocator: QubitAllocator,
             direction: str = "right",
             builder: ScheduleBuilder | None = None):
    """Translate a d=2 tetron one patch width sideways.

    Grow double wide with the new columns in |0>, then read the departing
    columns out in Z.  The logical action is the identity up to two tracked
    frame entries: the departing top-row readout bits flip later Zbar
    readouts, and the recorded signs of the widened light checks flip later
    Xbar readouts.  Returns (schedule, translated patch layout).
    """
    from .patches import shift_patch as build_shift_plan

    b = builder or ScheduleBuilder()
    plan = build_shift_plan(patch, allocator, direction=direction)
    wide, end = plan.wide, plan.end

    b.new_round()
    for q in plan.new_qubits:
        b.prep_z(q)
    old_keys = {f.key for f in patch.checks}
    consumed_digon = patch.checks[2].op if direction == "right" else patch.checks[1].op
    survivor_digon = patch.checks[1].op if direction == "right" else patch.checks[2].op
    zsq_mid = wide.checks[1]
    new_dark_end = wide.checks[4] if direction == "right" else wide.checks[3]
    pinned = {new_dark_end.key: ()}
    try:
        pinned[zsq_mid.key] = (b.last_mid(consumed_digon),)
    except KeyError:
        pinned[zsq_mid.key] = ()
    b.suspend_check(consumed_digon)
    _measure_patch_checks(b, wide, constrain=pinned,
                          fresh={f.key for f in wide.checks if f.key not in old_keys})
    b.new_round()
    wide_mids = _measure_patch_checks(b, wide)

    bits = append_transversal_readout(b, patch, basis="z")
    (r0, _) = min(patch.sites)
    top_pair = [patch.sites[pos] for pos in sorted(patch.sites) if pos[0] == r0]
    # Xbar rides the left column, so it slides across through the two light
    # half-moons, plus the new block's square when moving leftward
    # (oracle-fitted continuation rule)
    light_keys = [f.key for f in wide.checks
                  if set(f.op.support.values()) == {"X"} and len(f.op.support) == 2]
    if direction == "left":
        light_keys.append(end.checks[0].key)

    # the interface digon of the translated patch collapses out of the middle
    # square and the departing readout; measure it back in with that pin
    b.new_round()
    interface_cols = sorted({c for _, c in patch.sites})
    departing_near_col = interface_cols[1] if direction == "right" else interface_cols[0]
    near_bits = [bits[patch.sites[(r, departing_near_col)]] for r in (r0, r0 + 1)]
    end_mids = {}
    for face in end.checks:
        try:
            b.last_mid(face.op)
            fresh = False
        except KeyError:
            fresh = True
        mid = b.measure_check(face.op, fresh=fresh)
        end_mids[face.key] = mid
        if fresh:
            b.parity((mid, wide_mids[zsq_mid.key], *near_bits), +1)

    program = b.schedule.meta.setdefault("frame_program", [])
    program.append(("move", str(patch.logical_z[0]), str(patch.logical_x[0]),
                    str(end.logical_z[0]), str(end.logical_x[0])))
    program.append(("correction", str(end.logical_x[0]),
                    tuple(bits[q] for q in top_pair), 0))
    program.append(("correction", str(end.logical_z[0]),
                    tuple(wide_mids[k] for k in light_keys), 0))
    b.schedule.meta["op"] = "shift"
    b.schedule.meta["direction"] = direction
    return b.schedule, end
