"""Pure-Python stepping core.

Mirror of the compiled ``nibbletape._core`` extension; any change here
must be made there the same way.  The test suite runs both cores on
identical inputs and requires identical outputs, including float
comparisons in the matching filter.

Shared conventions:

* ``cells`` is a writable 1-D numpy uint8 array, mutated in place.
* ``rule`` is the 256-byte pair-rule table (index = current + 16*prev).
* Event buffers are packed uint8: (index, value, head_after) per step,
  so tapes must not exceed 256 cells on the event paths.
* External ticks are 1-based in commit records.
"""

from __future__ import annotations

BACKEND_NAME = "pure"

_USABLE = (2, 3, 4, 5, 6, 7, 10, 11, 12, 13, 14, 15)


def run_array(cells, head, prev_head, rule, steps):
    """Advance the cell-array engine ``steps`` times.

    Returns (head, prev_head, idle_steps, first_idle_step) where the idle
    counters track steps whose active cell held a color-0 value
    (first_idle_step is -1 when that never happened).
    """
    work = cells.tolist()
    L = len(work)
    idle = 0
    first_idle = -1
    for i in range(steps):
        x = work[head]
        if not x & 6:
            idle += 1
            if first_idle < 0:
                first_idle = i
        v = rule[x + (work[prev_head] << 4)]
        work[head] = v
        prev_head = head
        head += (v & 1) * 2 - 1
        if head < 0:
            head += L
        elif head >= L:
            head -= L
    cells[:] = work
    return head, prev_head, idle, first_idle


def run_array_events(cells, head, prev_head, rule, steps, events):
    """Like :func:`run_array` but records (index, value, head_after) per
    step into the uint8 buffer ``events`` (length >= 3*steps)."""
    work = cells.tolist()
    L = len(work)
    if L > 256:
        raise ValueError("event recording supports tapes up to 256 cells")
    idle = 0
    first_idle = -1
    out = bytearray(3 * steps)
    j = 0
    for i in range(steps):
        x = work[head]
        if not x & 6:
            idle += 1
            if first_idle < 0:
                first_idle = i
        v = rule[x + (work[prev_head] << 4)]
        work[head] = v
        out[j] = head
        out[j + 1] = v
        prev_head = head
        head += (v & 1) * 2 - 1
        if head < 0:
            head += L
        elif head >= L:
            head -= L
        out[j + 2] = head
        j += 3
    cells[:] = work
    events[: 3 * steps] = memoryview(out)
    return head, prev_head, idle, first_idle


def run_bigint(n, length, head, prev_head, deltas, steps):
    """Advance the compacted-integer engine: each step adds the
    precomputed value change of the active base-16 digit, shifted to its
    position.  Returns (n, head, prev_head)."""
    for _ in range(steps):
        h4 = head << 2
        k = ((n >> h4) & 15) + (((n >> (prev_head << 2)) & 15) << 4)
        d = deltas[k]
        if d:
            n += d << h4
        v = (k & 15) + d
        prev_head = head
        head += (v & 1) * 2 - 1
        if head < 0:
            head += length
        elif head >= length:
            head -= length
    return n, head, prev_head


def run_lockstep(cells, head, prev_head, rule, deltas, steps, resync_every):
    """Run the array and integer engines side by side.

    The array side maintains a mirror integer updated from its own write
    events; the integer side evolves independently via digit extraction.
    Any step where the two integers (or the head trackers) disagree is a
    mismatch; the mirror itself is rebuilt from the cells every
    ``resync_every`` steps as a self-check.

    Returns (mismatch_step, n, head, prev_head); mismatch_step is -1 for
    a clean run.
    """
    work = cells.tolist()
    L = len(work)
    n = 0
    for c in reversed(work):
        n = (n << 4) | c
    mirror = n
    ha = hb = head
    pa = pb = prev_head
    for i in range(steps):
        # integer engine, from n alone
        kb = ((n >> (hb << 2)) & 15) + (((n >> (pb << 2)) & 15) << 4)
        db = deltas[kb]
        if db:
            n += db << (hb << 2)
        vb = (kb & 15) + db
        # array engine, from cells alone
        xa = work[ha]
        va = rule[xa + (work[pa] << 4)]
        work[ha] = va
        if va != xa:
            mirror += (va - xa) << (ha << 2)
        if n != mirror:
            cells[:] = work
            return i, n, ha, pa
        pa = ha
        ha += (va & 1) * 2 - 1
        if ha < 0:
            ha += L
        elif ha >= L:
            ha -= L
        pb = hb
        hb += (vb & 1) * 2 - 1
        if hb < 0:
            hb += L
        elif hb >= L:
            hb -= L
        if ha != hb or pa != pb:
            cells[:] = work
            return i, n, ha, pa
        if resync_every and (i + 1) % resync_every == 0:
            m2 = 0
            for c in reversed(work):
                m2 = (m2 << 4) | c
            if m2 != mirror:
                cells[:] = work
                return i, n, ha, pa
    cells[:] = work
    return -1, n, ha, pa


def run_matching(cells, head, prev_head, rule, samples, eps):
    """Scan a noise-sample array through the matching filter.

    A sample within eps of the predicted nibble's sub-interval center
    commits the pending transition; everything else leaves the state
    untouched.  Returns (head, prev_head, commit_ticks, commit_heads,
    commit_values) with ticks 1-based.
    """
    work = cells.tolist()
    L = len(work)
    xs = samples.tolist()
    ticks = []
    heads = []
    values = []
    for t, x in enumerate(xs):
        v = rule[work[head] + (work[prev_head] << 4)]
        if abs(v * 0.0625 + 0.03125 - x) < eps:
            work[head] = v
            ticks.append(t + 1)
            heads.append(head)
            values.append(v)
            prev_head = head
            head += (v & 1) * 2 - 1
            if head < 0:
                head += L
            elif head >= L:
                head -= L
    cells[:] = work
    return head, prev_head, ticks, heads, values


def run_matching_pair(clean, faulty, head, prev_head, rule, samples, eps,
                      q, fault_u, fault_pick):
    """Drive a clean and a fault-injected run on one shared noise stream.

    Both runs start from the given head/prev_head.  On a faulty-run
    commit, with probability q (decided by fault_u[tick]) the written
    value is replaced by a usable value other than the prediction,
    selected by fault_pick[tick].  Records the tape Hamming distance at
    every tick where either run committed.

    Returns (first_divergence_tick, fault_count, ham_ticks, ham_values,
    final_hamming); first_divergence_tick is -1 if the tapes never
    differed.
    """
    C = clean.tolist()
    F = faulty.tolist()
    L = len(C)
    xs = samples.tolist()
    fu = fault_u.tolist()
    fp = fault_pick.tolist()
    hc = hf = head
    pc = pf = prev_head
    ham = sum(1 for a, b in zip(C, F) if a != b)
    first_div = -1 if ham == 0 else 0
    faults = 0
    ham_ticks = []
    ham_values = []
    for t, x in enumerate(xs):
        committed = False
        vc = rule[C[hc] + (C[pc] << 4)]
        if abs(vc * 0.0625 + 0.03125 - x) < eps:
            if (C[hc] != F[hc]) != (vc != F[hc]):
                ham += 1 if vc != F[hc] else -1
            C[hc] = vc
            pc = hc
            hc += (vc & 1) * 2 - 1
            if hc < 0:
                hc += L
            elif hc >= L:
                hc -= L
            committed = True
        vf = rule[F[hf] + (F[pf] << 4)]
        if abs(vf * 0.0625 + 0.03125 - x) < eps:
            w = vf
            if q > 0.0 and fu[t] < q:
                others = [u for u in _USABLE if u != vf]
                w = others[int(fp[t] * len(others))]
                faults += 1
            if (F[hf] != C[hf]) != (w != C[hf]):
                ham += 1 if w != C[hf] else -1
            F[hf] = w
            pf = hf
            hf += (w & 1) * 2 - 1
            if hf < 0:
                hf += L
            elif hf >= L:
                hf -= L
            committed = True
        if committed:
            ham_ticks.append(t + 1)
            ham_values.append(ham)
            if ham > 0 and first_div < 0:
                first_div = t + 1
    clean[:] = C
    faulty[:] = F
    return first_div, faults, ham_ticks, ham_values, ham
