"""Stabilizer simulation engines.

Two layers with different jobs:

* ``Tableau``: an exact CHP-style stabilizer simulator (destabilizer/stabilizer
  rows with sign tracking).  Used for reference runs, outcome-level sampling
  and agreement tests against the dense oracle.  Correctness-critical, not
  performance-critical.

* ``run_frame_batch``: a vectorized Pauli-frame simulator that propagates only
  the noise-induced error frame of many Monte-Carlo trials at once through a
  lowered physical instruction stream.  Outcome bits are recorded relative to
  a noiseless shadow run, so intrinsic measurement randomness cancels and only
  deterministic outcome parities (detectors, logical observables) are ever
  evaluated.  This is what makes millions of trials per second possible.

Trials are partitioned into fixed-size chunks, each with its own counter-based
RNG stream keyed by (seed, chunk), so results are bit-identical no matter how
chunks are distributed over workers.
"""

from __future__ import annotations

import numpy as np

from .pauli import PauliOperator

CHUNK = 1 << 15  # frame-batch chunk size; fixed so threading never changes results


class Tableau:
    """CHP stabilizer tableau on n qubits (rows 0..n-1 destabilizers, n..2n-1 stabilizers)."""

    def __init__(self, n_qubits: int):
        n = n_qubits
        self.n = n
        self.x = np.zeros((2 * n, n), dtype=np.uint8)
        self.z = np.zeros((2 * n, n), dtype=np.uint8)
        self.r = np.zeros(2 * n, dtype=np.uint8)
        for i in range(n):
            self.x[i, i] = 1
            self.z[n + i, i] = 1

    def copy(self) -> "Tableau":
        out = Tableau.__new__(Tableau)
        out.n = self.n
        out.x = self.x.copy()
        out.z = self.z.copy()
        out.r = self.r.copy()
        return out

    # -- Clifford gates ------------------------------------------------------

    def apply_clifford(self, gate: str, *targets: int) -> None:
        for q in targets:
            if not 0 <= q < self.n:
                raise ValueError(f"qubit {q} out of range")
        if len(targets) != len(set(targets)):
            raise ValueError("targets must be distinct")
        x, z, r = self.x, self.z, self.r
        if gate == "H":
            (q,) = targets
            r ^= x[:, q] & z[:, q]
            x[:, q], z[:, q] = z[:, q].copy(), x[:, q].copy()
        elif gate == "S":
            (q,) = targets
            r ^= x[:, q] & z[:, q]
            z[:, q] ^= x[:, q]
        elif gate == "SDG":
            self.apply_clifford("S", *targets)
            self.apply_clifford("Z", *targets)
        elif gate == "X":
            (q,) = targets
            r ^= z[:, q]
        elif gate == "Y":
            (q,) = targets
            r ^= x[:, q] ^ z[:, q]
        elif gate == "Z":
            (q,) = targets
            r ^= x[:, q]
        elif gate == "CX":
            c, t = targets
            r ^= x[:, c] & z[:, t] & (x[:, t] ^ z[:, c] ^ 1)
            x[:, t] ^= x[:, c]
            z[:, c] ^= z[:, t]
        elif gate == "CZ":
            c, t = targets
            self.apply_clifford("H", t)
            self.apply_clifford("CX", c, t)
            self.apply_clifford("H", t)
        else:
            raise ValueError(f"unknown Clifford gate {gate!r}")

    # -- internals -----------------------------------------------------------

    def _pauli_vectors(self, op: PauliOperator) -> tuple[np.ndarray, np.ndarray, int]:
        if not op.is_hermitian():
            raise ValueError(f"operator {op} is not Hermitian")
        px = np.zeros(self.n, dtype=np.uint8)
        pz = np.zeros(self.n, dtype=np.uint8)
        for q, letter in op.support.items():
            if q >= self.n:
                raise ValueError(f"qubit {q} out of range")
            if letter in ("X", "Y"):
                px[q] = 1
            if letter in ("Z", "Y"):
                pz[q] = 1
        return px, pz, op.phase // 2

    def _anticommute_mask(self, px: np.ndarray, pz: np.ndarray) -> np.ndarray:
        return ((self.x @ pz.astype(np.int64)) + (self.z @ px.astype(np.int64))) % 2

    @staticmethod
    def _g_sum(x1, z1, x2, z2) -> int:
        """Sum of the standard phase function over sites (exponent of i)."""
        x1 = x1.astype(np.int64); z1 = z1.astype(np.int64)
        x2 = x2.astype(np.int64); z2 = z2.astype(np.int64)
        g = np.zeros_like(x1)
        both = (x1 == 1) & (z1 == 1)
        g += np.where(both, z2 - x2, 0)
        xonly = (x1 == 1) & (z1 == 0)
        g += np.where(xonly, z2 * (2 * x2 - 1), 0)
        zonly = (x1 == 0) & (z1 == 1)
        g += np.where(zonly, x2 * (1 - 2 * z2), 0)
        return int(g.sum())

    def _rowsum(self, h: int, i: int) -> None:
        """row h := row i * row h with exact sign.

        Stabilizer-row products must stay real; destabilizer signs carry no
        meaning, so an imaginary phase there is simply truncated.
        """
        phase = 2 * int(self.r[h]) + 2 * int(self.r[i]) + self._g_sum(
            self.x[i], self.z[i], self.x[h], self.z[h])
        phase %= 4
        if phase % 2 != 0 and h >= self.n:
            raise AssertionError("rowsum produced imaginary phase: corrupt tableau")
        self.r[h] = phase // 2
        self.x[h] ^= self.x[i]
        self.z[h] ^= self.z[i]

    # -- measurement ---------------------------------------------------------

    def measure_pauli(self, op: PauliOperator, rng: np.random.Generator,
                      forced: int | None = None) -> tuple[int, bool]:
        """Measure a Hermitian Pauli; returns (outcome in {+1,-1}, deterministic).

        ``forced`` pins a random outcome (testing hook); forcing a
        deterministic measurement is rejected if inconsistent.
        """
        n = self.n
        px, pz, sign = self._pauli_vectors(op)
        anti = self._anticommute_mask(px, pz)
        stab_anti = np.nonzero(anti[n:])[0]
        if stab_anti.size > 0:
            p = n + int(stab_anti[0])
            for row in np.nonzero(anti)[0]:
                row = int(row)
                if row != p and anti[row]:
                    self._rowsum(row, p)
            # old stabilizer becomes the destabilizer of the new one
            self.x[p - n] = self.x[p]
            self.z[p - n] = self.z[p]
            self.r[p - n] = self.r[p]
            outcome_bit = int(rng.integers(0, 2)) if forced is None else (1 - forced) // 2
            self.x[p] = px
            self.z[p] = pz
            self.r[p] = (outcome_bit + sign) % 2
            return (1 - 2 * outcome_bit), False
        # deterministic: accumulate the stabilizer product matching P
        sx = np.zeros(n, dtype=np.uint8)
        sz = np.zeros(n, dtype=np.uint8)
        sphase = 0
        for i in range(n):
            if anti[i]:
                sphase = (sphase + 2 * int(self.r[n + i]) + self._g_sum(
                    self.x[n + i], self.z[n + i], sx, sz)) % 4
                sx ^= self.x[n + i]
                sz ^= self.z[n + i]
        if not (np.array_equal(sx, px) and np.array_equal(sz, pz)):
            raise AssertionError("deterministic measurement reconstruction failed")
        if sphase % 2 != 0:
            raise AssertionError("imaginary phase in deterministic measurement")
        outcome_bit = (sphase // 2 + sign) % 2
        if forced is not None and (1 - 2 * outcome_bit) != forced:
            raise ValueError("cannot force a deterministic outcome to the other value")
        return (1 - 2 * outcome_bit), True

    def is_deterministic(self, op: PauliOperator) -> bool:
        px, pz, _ = self._pauli_vectors(op)
        return not self._anticommute_mask(px, pz)[self.n:].any()

    def expectation_sign(self, op: PauliOperator) -> int:
        """Outcome of a deterministic Pauli without collapsing; errors if random."""
        scratch = self.copy()
        outcome, det = scratch.measure_pauli(op, np.random.default_rng(0))
        if not det:
            raise ValueError(f"{op} is not deterministic on this state")
        return outcome

    def inject_pauli_error(self, op: PauliOperator) -> None:
        """Conjugate the state by a Pauli: flips signs of anticommuting rows."""
        px, pz, _sign = self._pauli_vectors(op.with_phase(0))
        self.r ^= self._anticommute_mask(px, pz).astype(np.uint8)

    # -- prep helpers ----------------------------------------------------------

    def prep_z(self, q: int, rng: np.random.Generator) -> None:
        outcome, _ = self.measure_pauli(PauliOperator.single("Z", q), rng)
        if outcome == -1:
            self.apply_clifford("X", q)

    def prep_x(self, q: int, rng: np.random.Generator) -> None:
        outcome, _ = self.measure_pauli(PauliOperator.single("X", q), rng)
        if outcome == -1:
            self.apply_clifford("Z", q)

    # -- audit -----------------------------------------------------------------

    def audit(self) -> None:
        """Verify the symplectic invariants; raises on corruption."""
        n = self.n
        x64 = self.x.astype(np.int64)
        z64 = self.z.astype(np.int64)
        sym = (x64 @ z64.T + z64 @ x64.T) % 2
        stab = sym[n:, n:]
        if stab.any():
            raise AssertionError("stabilizer rows do not all commute")
        cross = sym[:n, n:]
        if not np.array_equal(cross, np.eye(n, dtype=np.int64)):
            raise AssertionError("destabilizer pairing broken")
        full = np.concatenate([self.x, self.z], axis=1)
        if _f2_rank(full) != 2 * n:
            raise AssertionError("tableau rows are not independent")


def _f2_rank(mat: np.ndarray) -> int:
    m = mat.copy().astype(np.uint8)
    rank = 0
    rows, cols = m.shape
    for c in range(cols):
        pivots = np.nonzero(m[rank:, c])[0]
        if pivots.size == 0:
            continue
        piv = rank + int(pivots[0])
        m[[rank, piv]] = m[[piv, rank]]
        for rr in range(rows):
            if rr != rank and m[rr, c]:
                m[rr] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


# -- vectorized frame batch ---------------------------------------------------

# Lowered physical instructions (one noise location each unless noted):
#   ("prep_z", q) ("prep_x", q) ("prep_t", q)        1q depolarizing after
#   ("g1", gate, q)                                   1q depolarizing after
#   ("g2", gate, a, b)                                2q depolarizing after
#   ("meas_z", q, mid) ("meas_x", q, mid)             recorded-bit flip


def frame_program_qubits(program) -> int:
    top = 0
    for instr in program:
        kind = instr[0]
        if kind in ("prep_z", "prep_x", "prep_t", "g1", "meas_z", "meas_x"):
            q = instr[2] if kind == "g1" else instr[1]
            top = max(top, q)
        elif kind == "g2":
            top = max(top, instr[2], instr[3])
    return top + 1


def frame_program_measurements(program) -> int:
    mids = [instr[2] for instr in program if instr[0] in ("meas_z", "meas_x")]
    return (max(mids) + 1) if mids else 0


def _apply_code_flip(fx, fz, q, code, mask):
    """XOR a Pauli letter (1=X, 2=Y, 3=Z) into the frames of masked trials."""
    fx[q] ^= mask & ((code == 1) | (code == 2))
    fz[q] ^= mask & ((code == 2) | (code == 3))


def run_frame_batch(
    program,
    n_trials: int,
    seed: int,
    p1: float = 0.0,
    p2: float = 0.0,
    p_meas: float = 0.0,
    p_prep: float = 0.0,
    fault_plan: dict | None = None,
    stream: int = 0,
):
    """Propagate noise frames for n_trials through a lowered program.

    Returns (flips, fx, fz): ``flips`` is an (n_meas, n_trials) uint8 matrix of
    outcome flips relative to the noiseless shadow; fx/fz are the end-of-run
    frame components, for observables defined as final Pauli commutators.

    ``fault_plan`` maps noise-location index -> list of (trial, code) or
    (trial, code_a, code_b) entries for deterministic single-fault injection
    (codes 1=X, 2=Y, 3=Z; for measurements any entry flips the record);
    random noise is skipped entirely when a plan is given.
    """
    n_qubits = frame_program_qubits(program)
    n_meas = frame_program_measurements(program)
    out_flips = np.zeros((n_meas, n_trials), dtype=np.uint8)
    out_fx = np.zeros((n_qubits, n_trials), dtype=np.uint8)
    out_fz = np.zeros((n_qubits, n_trials), dtype=np.uint8)

    for start in range(0, n_trials, CHUNK):
        stop = min(start + CHUNK, n_trials)
        t = stop - start
        chunk_idx = start // CHUNK
        key = [((seed & 0xFFFFFFFFFFFF) << 16) | (stream & 0xFFFF), chunk_idx]
        rng = np.random.Generator(np.random.Philox(key=key))
        fx = np.zeros((n_qubits, t), dtype=np.uint8)
        fz = np.zeros((n_qubits, t), dtype=np.uint8)
        flips = out_flips[:, start:stop]
        loc = 0

        def depol1(q):
            if p1 <= 0.0:
                return
            u = rng.random(t)
            fault = u < p1
            code = np.minimum((u * (3.0 / p1)).astype(np.int64), 2) + 1
            code = np.where(fault, code, 0)
            _apply_code_flip(fx, fz, q, code, fault.astype(np.uint8))

        def depol2(a, b):
            if p2 <= 0.0:
                return
            u = rng.random(t)
            fault = u < p2
            v = np.minimum((u * (15.0 / p2)).astype(np.int64), 14) + 1
            v = np.where(fault, v, 0)
            mask = fault.astype(np.uint8)
            _apply_code_flip(fx, fz, a, v >> 2, mask)
            _apply_code_flip(fx, fz, b, v & 3, mask)

        def planned(loc_idx, kind, *args):
            # entries: 1q -> (trial, code); 2q -> (trial, code_a, code_b); meas -> (trial,)
            entries = fault_plan.get(loc_idx, ()) if fault_plan else ()
            for entry in entries:
                trial = entry[0] - start
                if not 0 <= trial < t:
                    continue
                if kind == "meas":
                    flips[args[0], trial] ^= 1
                elif kind == "1q":
                    q, code = args[0], entry[1]
                    fx[q, trial] ^= code in (1, 2)
                    fz[q, trial] ^= code in (2, 3)
                else:  # 2q
                    (qa, qb), (ca, cb) = args, entry[1:]
                    fx[qa, trial] ^= ca in (1, 2)
                    fz[qa, trial] ^= ca in (2, 3)
                    fx[qb, trial] ^= cb in (1, 2)
                    fz[qb, trial] ^= cb in (2, 3)

        for instr in program:
            kind = instr[0]
            if kind in ("prep_z", "prep_x", "prep_t"):
                q = instr[1]
                fx[q] = 0
                fz[q] = 0
                if fault_plan is not None:
                    planned(loc, "1q", q)
                elif p_prep > 0.0:
                    u = rng.random(t)
                    fault = u < p_prep
                    code = np.minimum((u * (3.0 / p_prep)).astype(np.int64), 2) + 1
                    code = np.where(fault, code, 0)
                    _apply_code_flip(fx, fz, q, code, fault.astype(np.uint8))
                loc += 1
            elif kind == "g1":
                gate, q = instr[1], instr[2]
                if gate == "H":
                    fx[q], fz[q] = fz[q].copy(), fx[q].copy()
                elif gate in ("S", "SDG"):
                    fz[q] ^= fx[q]
                elif gate in ("X", "Y", "Z", "T"):
                    pass  # Pauli frames commute up to sign; T only in prep_t composites
                else:
                    raise ValueError(f"unknown 1q gate {gate!r}")
                if fault_plan is not None:
                    planned(loc, "1q", q)
                else:
                    depol1(q)
                loc += 1
            elif kind == "g2":
                gate, a, b = instr[1], instr[2], instr[3]
                if gate == "CX":
                    fx[b] ^= fx[a]
                    fz[a] ^= fz[b]
                elif gate == "CZ":
                    fz[b] ^= fx[a]
                    fz[a] ^= fx[b]
                else:
                    raise ValueError(f"unknown 2q gate {gate!r}")
                if fault_plan is not None:
                    planned(loc, "2q", a, b)
                else:
                    depol2(a, b)
                loc += 1
            elif kind in ("meas_z", "meas_x"):
                q, mid = instr[1], instr[2]
                flips[mid] ^= fx[q] if kind == "meas_z" else fz[q]
                if fault_plan is not None:
                    planned(loc, "meas", mid)
                elif p_meas > 0.0:
                    flips[mid] ^= (rng.random(t) < p_meas).astype(np.uint8)
                loc += 1
            else:
                raise ValueError(f"unknown instruction {instr!r}")

        out_fx[:, start:stop] = fx
        out_fz[:, start:stop] = fz
    return out_flips, out_fx, out_fz


def count_noise_locations(program) -> int:
    return sum(1 for instr in program if instr[0] != "round")


def frame_anticommute_bits(fx: np.ndarray, fz: np.ndarray, op: PauliOperator) -> np.ndarray:
    """Per-trial parity of anticommutation between the end frame and a Pauli."""
    acc = np.zeros(fx.shape[1], dtype=np.uint8)
    for q, letter in op.support.items():
        if letter in ("X", "Y"):
            acc ^= fz[q]
        if letter in ("Z", "Y"):
            acc ^= fx[q]
    return acc
