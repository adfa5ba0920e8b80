"""Benchmark the compiled stepping core against the pure-Python fallback.

Run:  python benchmarks/bench_core.py [--steps N]

Times the three hot loops (cell-array stepping, compacted-integer
stepping, matching-filter scan) on identical inputs and prints a small
table with the speedup.  Results also double as a parity smoke test: the
two cores must produce identical outputs.
"""

import argparse
import time

import numpy as np

from nibbletape import aca, machine, stochastic
from nibbletape.backend import available_backends, get_core


def time_call(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return time.perf_counter() - t0, out


def bench(steps: int) -> None:
    if "compiled" not in available_backends():
        raise SystemExit("compiled core not built; nothing to compare")
    pure, comp = get_core("pure"), get_core("compiled")
    rule = machine.expand_rule(machine.arithmetize_spec(machine.wolfram23_spec()))
    table = rule.table_bytes()
    deltas = list(aca.delta_table(rule).deltas)
    tape = aca.random_usable_tape(64, seed=1)
    big = aca.tape_to_bigint(tape)
    samples = stochastic.NoiseSource(stochastic.FLAT, 2).samples(steps)

    rows = []

    def add(name, pure_args, comp_args, fn_name):
        tp, rp = time_call(getattr(pure, fn_name), *pure_args)
        tc, rc = time_call(getattr(comp, fn_name), *comp_args)
        match = "ok" if _comparable(rp) == _comparable(rc) else "MISMATCH"
        rows.append((name, tp, tc, tp / tc, match))

    buf_p = np.asarray(tape.cells, dtype=np.uint8)
    buf_c = buf_p.copy()
    add("array engine",
        (buf_p, tape.head, tape.prev_head, table, steps),
        (buf_c, tape.head, tape.prev_head, table, steps),
        "run_array")

    add("bigint engine",
        (big.n, big.length, big.head, big.prev_head, deltas, steps),
        (big.n, big.length, big.head, big.prev_head, deltas, steps),
        "run_bigint")

    buf_p = np.asarray(tape.cells, dtype=np.uint8)
    buf_c = buf_p.copy()
    add("lockstep check",
        (buf_p, tape.head, tape.prev_head, table, deltas, steps, 4096),
        (buf_c, tape.head, tape.prev_head, table, deltas, steps, 4096),
        "run_lockstep")

    buf_p = np.asarray(tape.cells, dtype=np.uint8)
    buf_c = buf_p.copy()
    add("matching filter",
        (buf_p, tape.head, tape.prev_head, table, samples, 2.0**-5),
        (buf_c, tape.head, tape.prev_head, table, samples, 2.0**-5),
        "run_matching")

    width = max(len(r[0]) for r in rows)
    print(f"{steps} steps/ticks per loop, tape length {tape.length}")
    print(f"{'loop':<{width}}  {'pure':>9}  {'compiled':>9}  {'speedup':>8}  parity")
    for name, tp, tc, speed, match in rows:
        print(f"{name:<{width}}  {tp:>8.3f}s  {tc:>8.3f}s  {speed:>7.1f}x  {match}")


def _comparable(result):
    return tuple(tuple(x) if isinstance(x, list) else x for x in result)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=2_000_000)
    bench(ap.parse_args().steps)
