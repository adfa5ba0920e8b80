# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled stepping core.

Mirror of ``nibbletape._pycore``; the two must stay semantically
identical (the test suite compares them bit for bit, floats included,
which is why the build uses -ffp-contract=off).
"""

from libc.math cimport fabs

BACKEND_NAME = "compiled"

cdef int[12] _USABLE_C
_USABLE_C[:] = [2, 3, 4, 5, 6, 7, 10, 11, 12, 13, 14, 15]


def run_array(unsigned char[::1] cells, int head, int prev_head,
              const unsigned char[::1] rule, long long steps):
    """Advance the cell-array engine ``steps`` times; see _pycore."""
    cdef Py_ssize_t L = cells.shape[0]
    cdef long long i, idle = 0, first_idle = -1
    cdef int x, v
    for i in range(steps):
        x = cells[head]
        if not (x & 6):
            idle += 1
            if first_idle < 0:
                first_idle = i
        v = rule[x + (cells[prev_head] << 4)]
        cells[head] = <unsigned char> v
        prev_head = head
        head += (v & 1) * 2 - 1
        if head < 0:
            head += L
        elif head >= L:
            head -= L
    return head, prev_head, idle, first_idle


def run_array_events(unsigned char[::1] cells, int head, int prev_head,
                     const unsigned char[::1] rule, long long steps,
                     unsigned char[::1] events):
    """run_array plus packed (index, value, head_after) event records."""
    cdef Py_ssize_t L = cells.shape[0]
    if L > 256:
        raise ValueError("event recording supports tapes up to 256 cells")
    if events.shape[0] < 3 * steps:
        raise ValueError("event buffer too small")
    cdef long long i, j = 0, idle = 0, first_idle = -1
    cdef int x, v
    for i in range(steps):
        x = cells[head]
        if not (x & 6):
            idle += 1
            if first_idle < 0:
                first_idle = i
        v = rule[x + (cells[prev_head] << 4)]
        cells[head] = <unsigned char> v
        events[j] = <unsigned char> head
        events[j + 1] = <unsigned char> v
        prev_head = head
        head += (v & 1) * 2 - 1
        if head < 0:
            head += L
        elif head >= L:
            head -= L
        events[j + 2] = <unsigned char> head
        j += 3
    return head, prev_head, idle, first_idle


def run_bigint(object n, int length, int head, int prev_head, list deltas,
               long long steps):
    """Advance the compacted-integer engine; see _pycore."""
    cdef long long i
    cdef int h4, k, dv, v
    cdef object d
    for i in range(steps):
        h4 = head << 2
        k = (n >> h4) & 15
        k += ((n >> (prev_head << 2)) & 15) << 4
        d = deltas[k]
        dv = d
        if dv:
            n = n + (d << h4)
        v = (k & 15) + dv
        prev_head = head
        head += (v & 1) * 2 - 1
        if head < 0:
            head += length
        elif head >= length:
            head -= length
    return n, head, prev_head


def run_lockstep(unsigned char[::1] cells, int head, int prev_head,
                 const unsigned char[::1] rule, list deltas,
                 long long steps, long long resync_every):
    """Array and integer engines side by side; see _pycore."""
    cdef Py_ssize_t L = cells.shape[0]
    cdef Py_ssize_t ci
    cdef object n = 0
    cdef object mirror
    cdef object m2
    cdef object db
    cdef long long i
    cdef int ha, hb, pa, pb, xa, va, kb, dbv, vb
    for ci in range(L - 1, -1, -1):
        n = (n << 4) | cells[ci]
    mirror = n
    ha = hb = head
    pa = pb = prev_head
    for i in range(steps):
        kb = (n >> (hb << 2)) & 15
        kb += ((n >> (pb << 2)) & 15) << 4
        db = deltas[kb]
        dbv = db
        if dbv:
            n = n + (db << (hb << 2))
        vb = (kb & 15) + dbv
        xa = cells[ha]
        va = rule[xa + (cells[pa] << 4)]
        cells[ha] = <unsigned char> va
        if va != xa:
            mirror = mirror + ((<object> (va - xa)) << (ha << 2))
        if n != mirror:
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
            return i, n, ha, pa
        if resync_every and (i + 1) % resync_every == 0:
            m2 = 0
            for ci in range(L - 1, -1, -1):
                m2 = (m2 << 4) | cells[ci]
            if m2 != mirror:
                return i, n, ha, pa
    return -1, n, ha, pa


def run_matching(unsigned char[::1] cells, int head, int prev_head,
                 const unsigned char[::1] rule, const double[::1] samples,
                 double eps):
    """Matching-filter scan over a sample array; see _pycore."""
    cdef Py_ssize_t L = cells.shape[0]
    cdef Py_ssize_t t, n = samples.shape[0]
    cdef int v
    cdef list ticks = [], heads = [], values = []
    for t in range(n):
        v = rule[cells[head] + (cells[prev_head] << 4)]
        if fabs(v * 0.0625 + 0.03125 - samples[t]) < eps:
            cells[head] = <unsigned char> v
            ticks.append(t + 1)
            heads.append(head)
            values.append(v)
            prev_head = head
            head += (v & 1) * 2 - 1
            if head < 0:
                head += L
            elif head >= L:
                head -= L
    return head, prev_head, ticks, heads, values


def run_matching_pair(unsigned char[::1] clean, unsigned char[::1] faulty,
                      int head, int prev_head,
                      const unsigned char[::1] rule,
                      const double[::1] samples, double eps, double q,
                      const double[::1] fault_u,
                      const double[::1] fault_pick):
    """Clean vs fault-injected run on one noise stream; see _pycore."""
    cdef Py_ssize_t L = clean.shape[0]
    cdef Py_ssize_t t, n = samples.shape[0]
    cdef int hc, hf, pc, pf, vc, vf, w, ham = 0, m, u, j
    cdef long long first_div = -1, faults = 0
    cdef bint committed, pre, post
    cdef int others[12]
    cdef list ham_ticks = [], ham_values = []
    hc = hf = head
    pc = pf = prev_head
    for t in range(L):
        if clean[t] != faulty[t]:
            ham += 1
    if ham != 0:
        first_div = 0
    for t in range(n):
        committed = False
        vc = rule[clean[hc] + (clean[pc] << 4)]
        if fabs(vc * 0.0625 + 0.03125 - samples[t]) < eps:
            pre = clean[hc] != faulty[hc]
            post = vc != faulty[hc]
            if pre != post:
                ham += 1 if post else -1
            clean[hc] = <unsigned char> vc
            pc = hc
            hc += (vc & 1) * 2 - 1
            if hc < 0:
                hc += L
            elif hc >= L:
                hc -= L
            committed = True
        vf = rule[faulty[hf] + (faulty[pf] << 4)]
        if fabs(vf * 0.0625 + 0.03125 - samples[t]) < eps:
            w = vf
            if q > 0.0 and fault_u[t] < q:
                m = 0
                for j in range(12):
                    u = _USABLE_C[j]
                    if u != vf:
                        others[m] = u
                        m += 1
                w = others[<int> (fault_pick[t] * m)]
                faults += 1
            pre = faulty[hf] != clean[hf]
            post = w != clean[hf]
            if pre != post:
                ham += 1 if post else -1
            faulty[hf] = <unsigned char> w
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
    return first_div, faults, ham_ticks, ham_values, ham
