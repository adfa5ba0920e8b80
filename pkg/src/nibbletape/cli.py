"""Command-line front end.

Subcommands: transcribe | run | stochastic | ich | verify | encode | decode.
Every artifact is written atomically and listed with its sha256 in the
run report, and (config, seed) fully determines every output byte: seeds
default to a fixed constant, never the clock.

A JSON config file mirroring the long flag names (dashes or underscores)
can be passed via --config; explicit flags win over the file.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from . import __version__, aca, hierarchy, machine, stochastic, verify
from .backend import BACKEND
from .encodings import EncodingScheme, decode_tuple, encode_tuple

DEFAULT_SEED = verify.DEFAULT_SEED


# --- plumbing -----------------------------------------------------------------

def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _write_report(out_dir: Path, command: str, config: dict, summary: dict,
                  artifacts: list[Path]) -> Path:
    report = {
        "version": __version__,
        "backend": BACKEND,
        "command": command,
        "config": config,
        "summary": summary,
        "artifacts": [
            {"path": p.name, "sha256": _sha256(p)} for p in artifacts
        ],
    }
    path = out_dir / "report.json"
    _atomic_write(path, _dump(report))
    return path


def _parse_cells(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise SystemExit(f"error: bad cell list {text!r}: {exc}")


def _make_tape(cfg: dict) -> aca.TapeState:
    boundary: aca.Boundary
    if cfg["boundary"] == "periodic":
        boundary = aca.Periodic()
    else:
        boundary = aca.Growable(fill=cfg["fill"], max_length=cfg["max_length"])
    if cfg.get("tape"):
        cells = _parse_cells(cfg["tape"])
        return aca.init_tape(cells, head=cfg["head"], boundary=boundary)
    return aca.random_usable_tape(cfg["random_length"], cfg["seed"],
                                  head=cfg["head"], boundary=boundary)


def _rule(cfg: dict) -> machine.ExpandedRule:
    genome = machine.arithmetize_spec(machine.wolfram23_spec())
    return machine.expand_rule(genome, cfg.get("mode", machine.EXACT_BIT3))


# --- subcommands ----------------------------------------------------------------

def cmd_transcribe(cfg: dict) -> int:
    if cfg["machine"] != "wolfram23":
        print(f"error: unknown machine {cfg['machine']!r}", file=sys.stderr)
        return 2
    genome = machine.arithmetize_spec(machine.wolfram23_spec())
    out = Path(cfg["out"])
    _atomic_write(out, machine.doc_to_json(machine.genome_to_doc(genome)))
    written = [out]
    if cfg.get("rule"):
        rule = machine.expand_rule(genome, cfg["mode"])
        rule_path = Path(cfg["rule"])
        _atomic_write(rule_path, machine.doc_to_json(machine.rule_to_doc(rule)))
        written.append(rule_path)
    print(_dump({
        "entries": list(genome.entries),
        "fixed_point_ratio": str(machine.fixed_point_ratio(genome)),
        "files": [str(p) for p in written],
    }), end="")
    return 0


def cmd_run(cfg: dict) -> int:
    state = _make_tape(cfg)
    rule = _rule(cfg)
    out_dir = Path(cfg["out_dir"]) if cfg.get("out_dir") else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    artifacts: list[Path] = []
    summary: dict
    if cfg["engine"] == "bigint":
        if not isinstance(state.boundary, aca.Periodic):
            print("error: the bigint engine needs --boundary periodic",
                  file=sys.stderr)
            return 2
        deltas = aca.delta_table(rule)
        final = aca.run_bigint(aca.tape_to_bigint(state), deltas, cfg["steps"])
        summary = {
            "engine": "bigint",
            "final_n": str(final.n),
            "final_cells": list(aca.bigint_to_tape(final).cells),
            "head": final.head,
            "prev_head": final.prev_head,
            "steps": cfg["steps"],
        }
    else:
        wants_events = bool(out_dir and (cfg["trajectory"] or cfg["grid"]))
        if wants_events:
            traj = aca.run_array(state, rule, cfg["steps"])
            final, idle, first_idle = traj.final, traj.idle_steps, traj.first_idle_step
            if cfg["trajectory"]:
                path = out_dir / "trajectory.csv"
                aca.export_trajectory_csv(traj, path, {
                    "mode": rule.mode, "seed": cfg["seed"],
                    "rule_sha256": hashlib.sha256(rule.table_bytes()).hexdigest(),
                })
                artifacts.append(path)
            if cfg["grid"]:
                path = out_dir / "grid.csv"
                aca.export_grid_csv(traj, path)
                artifacts.append(path)
        else:
            final, idle, first_idle = aca.advance(state, rule, cfg["steps"])
        summary = {
            "engine": "array",
            "final_cells": list(final.cells),
            "head": final.head,
            "prev_head": final.prev_head,
            "steps": cfg["steps"],
            "idle_steps": idle,
            "first_idle_step": first_idle,
        }
    if out_dir:
        artifacts_report = _write_report(out_dir, "run", _public(cfg), summary,
                                         artifacts)
        summary = dict(summary, report=str(artifacts_report))
    print(_dump(summary), end="")
    return 0


def cmd_stochastic(cfg: dict) -> int:
    state = _make_tape(cfg)
    rule = _rule(cfg)
    src = stochastic.NoiseSource(cfg["noise"], cfg["seed"],
                                 brownian_step=cfg["brownian_step"])
    filt = stochastic.MatchFilter(cfg["epsilon"])
    run = stochastic.run_stochastic(state, rule, src, filt, cfg["ticks"])
    stats = stochastic.waiting_histogram(run, bins=cfg["bins"],
                                         log_log=cfg["log_log"])
    out_dir = Path(cfg["out_dir"]) if cfg.get("out_dir") else None
    artifacts: list[Path] = []
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
        hist_path = out_dir / "histogram.csv"
        stochastic.export_histogram_csv(stats, hist_path)
        manifest_path = out_dir / "manifest.json"
        stochastic.export_manifest_json(run, stats, manifest_path)
        artifacts += [hist_path, manifest_path]
    if cfg["fault_prob"] > 0:
        report = stochastic.inject_faults(state, rule, src_for_faults(cfg),
                                          filt, cfg["fault_prob"], cfg["ticks"])
        if out_dir:
            dev_path = out_dir / "deviation.csv"
            stochastic.export_deviation_csv(report, dev_path)
            artifacts.append(dev_path)
    if cfg["first_passage"]:
        if state.length > 4:
            print("error: --first-passage needs a tape of at most 4 cells",
                  file=sys.stderr)
            return 2
        fp = stochastic.string_time_map(state, rule, src_for_faults(cfg), filt,
                                        cfg["ticks"])
        if out_dir:
            fp_path = out_dir / "string_times.csv"
            with open(fp_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write("value,first_tick\n")
                for v in range(16 ** state.length):
                    fh.write(f"{v},{fp.first_passage.get(v, -1)}\n")
            artifacts.append(fp_path)
    summary = stochastic.run_manifest(run, stats)
    if out_dir:
        _write_report(out_dir, "stochastic", _public(cfg), summary, artifacts)
    print(_dump(summary), end="")
    return 0


def src_for_faults(cfg: dict) -> stochastic.NoiseSource:
    """Fresh source with the same seed: side runs must not advance the
    main run's stream."""
    return stochastic.NoiseSource(cfg["noise"], cfg["seed"],
                                  brownian_step=cfg["brownian_step"])


def cmd_ich(cfg: dict) -> int:
    action = cfg["action"]
    if action == "level":
        values = hierarchy.digit_sum_level(cfg["base"], cfg["length"])
        doc = {"base": cfg["base"], "length": cfg["length"], "count": len(values)}
        if cfg.get("out"):
            hierarchy.export_level_csv(values, Path(cfg["out"]))
            doc["file"] = cfg["out"]
        print(_dump(doc), end="")
        return 0
    if action == "entropy":
        if cfg.get("value") is not None:
            doc = {
                "n": cfg["length"],
                "value": cfg["value"],
                "string_entropy": hierarchy.string_entropy(cfg["value"], cfg["length"]),
                "ones_term": hierarchy.ones_term(cfg["value"], cfg["length"]),
            }
        else:
            doc = {"n": cfg["length"],
                   "level_entropy": hierarchy.level_entropy(cfg["length"])}
        print(_dump(doc), end="")
        return 0
    if action == "renyi":
        level = hierarchy.digit_sum_level(2, cfg["length"])
        params = hierarchy.FreeEnergyParams(
            lam=cfg["lam"], N=cfg["normalizer"] or float(len(level)),
            T=cfg["temperature"])
        res = hierarchy.renyi_free_energy(level, params)
        print(_dump({
            "n": cfg["length"], "lam": cfg["lam"], "F": res.F, "f": res.f,
            "renyi_entropy": res.renyi_entropy, "degenerate": res.degenerate,
        }), end="")
        return 0
    if action == "classes":
        classes = hierarchy.symbol_class_reduce(cfg["base"], cfg["length"])
        doc = {
            "base": cfg["base"],
            "length": cfg["length"],
            "class_count": len(classes),
            "classes": {
                "".join(str(s) for s in sorted(key)): len(members)
                for key, members in classes.items()
            },
        }
        if cfg.get("out"):
            _atomic_write(Path(cfg["out"]), _dump(doc))
        print(_dump(doc), end="")
        return 0
    print(f"error: unknown ich action {action!r}", file=sys.stderr)
    return 2


def cmd_verify(cfg: dict) -> int:
    scale = 0.02 if cfg["quick"] else 1.0
    results = verify.run_suite(cfg["suite"], seed=cfg["seed"], scale=scale)
    for r in results:
        print(r.line())
    doc = verify.report_doc(results, cfg["seed"])
    if cfg.get("out"):
        _atomic_write(Path(cfg["out"]), _dump(doc))
    passed = doc["passed"]
    print(f"{'OK' if passed else 'FAILED'}: {sum(r.passed for r in results)}"
          f"/{len(results)} checks passed (backend: {BACKEND})")
    return 0 if passed else 1


def _scheme_from_cfg(cfg: dict) -> EncodingScheme:
    kind = cfg["scheme"].replace("-", "_")
    if kind == "godel":
        return EncodingScheme.godel()
    if kind == "max_element":
        return EncodingScheme.max_element(cfg["base"])
    if kind == "max_bit":
        return EncodingScheme.max_bit(cfg["bitwidth"])
    raise SystemExit(f"error: unknown scheme {cfg['scheme']!r}")


def cmd_encode(cfg: dict) -> int:
    scheme = _scheme_from_cfg(cfg)
    values = _parse_cells(cfg["values"])
    code = encode_tuple(values, scheme)
    print(_dump({"scheme": cfg["scheme"], "values": values, "code": str(code)}),
          end="")
    return 0


def cmd_decode(cfg: dict) -> int:
    scheme = _scheme_from_cfg(cfg)
    values = decode_tuple(int(cfg["code"]), scheme, cfg["length"])
    print(_dump({"scheme": cfg["scheme"], "code": cfg["code"],
                 "values": list(values)}), end="")
    return 0


# --- parser ----------------------------------------------------------------------

def build_parser(suppress_defaults: bool = False) -> argparse.ArgumentParser:
    """The CLI tree.  With ``suppress_defaults`` every optional argument
    defaults to SUPPRESS, so a parse yields only explicitly passed flags
    (used to let explicit flags win over --config values)."""

    def d(value):
        return argparse.SUPPRESS if suppress_defaults else value

    def tape_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--tape", default=d(None),
                       help="comma-separated cell values 0..15")
        p.add_argument("--random-length", type=int, default=d(64),
                       help="random usable tape length when --tape is absent")
        p.add_argument("--head", type=int, default=d(0))
        p.add_argument("--seed", type=int, default=d(DEFAULT_SEED))
        p.add_argument("--boundary", choices=["periodic", "growable"],
                       default=d("periodic"))
        p.add_argument("--fill", type=int, default=d(2),
                       help="growable fill cell value")
        p.add_argument("--max-length", type=int, default=d(1 << 16))
        p.add_argument("--mode", choices=list(machine.CORRECTION_MODES),
                       default=d(machine.EXACT_BIT3))

    parser = argparse.ArgumentParser(
        prog="nibbletape",
        description="Arithmetized minimal machine: deterministic engines, "
                    "noise-driven runs, and hierarchy analyses.",
    )
    parser.add_argument("--config", default=d(None),
                        help="JSON file mirroring flags; flags take precedence")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transcribe",
                       help="emit the 16-entry map (and optionally the "
                            "256-entry rule) as JSON")
    p.add_argument("--machine", default=d("wolfram23"))
    p.add_argument("--out", default=d("genome.json"))
    p.add_argument("--rule", default=d(None),
                   help="also write the expanded rule here")
    p.add_argument("--mode", choices=list(machine.CORRECTION_MODES),
                   default=d(machine.EXACT_BIT3))

    p = sub.add_parser("run",
                       help="deterministic run (array or bigint engine)")
    tape_flags(p)
    p.add_argument("--engine", choices=["array", "bigint"], default=d("array"))
    p.add_argument("--steps", type=int, default=d(1000))
    p.add_argument("--out-dir", default=d(None),
                   help="write report.json (and CSVs) here")
    p.add_argument("--trajectory", action="store_true", default=d(False),
                   help="write trajectory.csv (needs --out-dir)")
    p.add_argument("--grid", action="store_true", default=d(False),
                   help="write the space-time grid CSV (needs --out-dir)")

    p = sub.add_parser("stochastic",
                       help="noise-driven run with waiting-time statistics")
    tape_flags(p)
    p.add_argument("--noise", choices=[stochastic.FLAT, stochastic.BROWNIAN],
                   default=d(stochastic.FLAT))
    p.add_argument("--brownian-step", type=float, default=d(0.01))
    p.add_argument("--epsilon", type=float, default=d(2.0**-5))
    p.add_argument("--ticks", type=int, default=d(100_000))
    p.add_argument("--bins", type=int, default=d(16))
    p.add_argument("--log-log", action="store_true", default=d(False))
    p.add_argument("--fault-prob", type=float, default=d(0.0),
                   help="also run fault injection and write deviation.csv")
    p.add_argument("--first-passage", action="store_true", default=d(False),
                   help="write first-passage ticks over all tape values "
                        "(tape length <= 4)")
    p.add_argument("--out-dir", default=d(None))

    p = sub.add_parser("ich",
                       help="hierarchy analyses (digit sums, entropy, classes)")
    psub = p.add_subparsers(dest="action", required=True)
    pl = psub.add_parser("level")
    pl.add_argument("--base", type=int, default=d(2))
    pl.add_argument("--length", type=int, default=d(10))
    pl.add_argument("--out", default=d(None), help="CSV path (index,value)")
    pe = psub.add_parser("entropy")
    pe.add_argument("--length", type=int, default=d(12))
    pe.add_argument("--value", type=int, default=d(None),
                    help="per-string entropy instead of the level average")
    pr = psub.add_parser("renyi")
    pr.add_argument("--length", type=int, default=d(8))
    pr.add_argument("--lam", type=float, default=d(0.5))
    pr.add_argument("--temperature", type=float, default=d(1.0))
    pr.add_argument("--normalizer", type=float, default=d(None),
                    help="N in the offset term; defaults to the level size")
    pc = psub.add_parser("classes")
    pc.add_argument("--base", type=int, default=d(2))
    pc.add_argument("--length", type=int, default=d(3))
    pc.add_argument("--out", default=d(None))

    p = sub.add_parser("verify",
                       help="run the invariant suites; exit 1 on failure")
    p.add_argument("--suite", default=d("all"),
                   choices=["all", "machine", "encodings", "aca",
                            "stochastic", "ich"])
    p.add_argument("--seed", type=int, default=d(DEFAULT_SEED))
    p.add_argument("--quick", action="store_true", default=d(False),
                   help="downscale the heavy checks")
    p.add_argument("--out", default=d(None),
                   help="write the verdict report JSON here")

    p = sub.add_parser("encode", help="tuple -> integer")
    p.add_argument("--scheme", required=True,
                   choices=["godel", "max-element", "max-bit"])
    p.add_argument("--base", type=int, default=d(16))
    p.add_argument("--bitwidth", type=int, default=d(4))
    p.add_argument("--values", required=True,
                   help="comma-separated non-negative integers")

    p = sub.add_parser("decode", help="integer -> tuple")
    p.add_argument("--scheme", required=True,
                   choices=["godel", "max-element", "max-bit"])
    p.add_argument("--base", type=int, default=d(16))
    p.add_argument("--bitwidth", type=int, default=d(4))
    p.add_argument("--code", required=True)
    p.add_argument("--length", type=int, required=True)

    return parser


_INTERNAL_KEYS = {"command", "action", "config"}
# output locations are not part of the logical run identity, so the
# config echo in report.json omits them (byte-identical reruns may
# target different directories)
_PATH_KEYS = {"config", "out", "out_dir", "rule"}


def _public(cfg: dict) -> dict:
    return {k: v for k, v in cfg.items() if k not in _PATH_KEYS}


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    full = build_parser()
    cfg = vars(full.parse_args(argv))
    explicit = vars(build_parser(suppress_defaults=True).parse_args(argv))
    if cfg.get("config"):
        try:
            file_cfg = json.loads(Path(cfg["config"]).read_text(encoding="utf-8"))
        except OSError as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return 2
        for key, value in file_cfg.items():
            key = key.replace("-", "_")
            if key in _INTERNAL_KEYS:
                continue
            if key in cfg and key not in explicit:
                cfg[key] = value
    handlers = {
        "transcribe": cmd_transcribe,
        "run": cmd_run,
        "stochastic": cmd_stochastic,
        "ich": cmd_ich,
        "verify": cmd_verify,
        "encode": cmd_encode,
        "decode": cmd_decode,
    }
    try:
        return handlers[cfg["command"]](cfg)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, aca.CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
