"""Command line front end.

One binary, subcommand per module: `primes`, `sample`, `euler`, `verify`,
`mc`.  Every output carries a metadata header (version, fully resolved
config, seed information) so a result file can regenerate its own run via
`--config`.  Data sections contain no timestamps and are byte-identical
across repeated runs, independent of the thread count.

Exit codes: 0 success, 1 computational failure (I/O, or an unconverged
quadrature under --strict), 2 usage / configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

from . import __version__
from . import euler as euler_mod
from . import primes as primes_mod
from . import sampler as sampler_mod
from . import stats as stats_mod
from . import verify as verify_mod
from .quadrature import QuadratureSpec
from .sampler import RmfModel, RmfSampler

_FORMATS = ("json", "jsonl", "csv")
_RECORD_KEYS = ("x", "seed", "re", "im", "abs", "v1", "v5")


@dataclass
class CliInvocation:
    command: str            # e.g. "verify rough"
    config: dict            # resolved flag values, canonical key order
    out: str | None
    fmt: str
    strict: bool
    threads: int


# ---------------------------------------------------------------- parsing

def _add_model(p):
    p.add_argument("--model", choices=("steinhaus", "rademacher"),
                   default="steinhaus", help="value model at primes")


def _add_quad(p):
    p.add_argument("--quad-T", type=float, default=None,
                   help="integration half-width (default: scale-dependent)")
    p.add_argument("--quad-tol", type=float, default=1e-6,
                   help="relative tolerance per quadrature panel")


def _add_io(p, formats=("json",)):
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--strict", action="store_true",
                   help="exit 1 if any quadrature failed to converge")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rmf-lab",
        description="Monte Carlo laboratory for random multiplicative functions")
    ap.add_argument("--config", default=None,
                    help="re-run the invocation stored in an emitted JSON document")
    ap.add_argument("--version", action="version", version=f"rmf-lab {__version__}")
    sub = ap.add_subparsers(dest="command")

    p_primes = sub.add_parser("primes", help="sieve-level queries")
    ps = p_primes.add_subparsers(dest="action", required=True)
    for name, hlp in (("phi", "count of y-rough n <= x"),
                      ("psi", "count of y-smooth n <= x")):
        q = ps.add_parser(name, help=hlp)
        q.add_argument("--x", type=float, required=True)
        q.add_argument("--y", type=float, required=True)
        _add_io(q)
    q = ps.add_parser("mertens", help="sum of 1/p over p <= x")
    q.add_argument("--x", type=float, required=True)
    _add_io(q)

    p_sample = sub.add_parser("sample", help="single-realization debugging")
    ss = p_sample.add_subparsers(dest="action", required=True)
    q = ss.add_parser("sum", help="full partial sum S(x)")
    q.add_argument("--x", type=int, required=True)
    q.add_argument("--seed", type=int, default=1)
    q.add_argument("--stream", type=int, default=0)
    _add_model(q)
    _add_io(q)
    q = ss.add_parser("restricted", help="large-prime-factor restricted sum at x")
    q.add_argument("--x", type=int, required=True)
    q.add_argument("--seed", type=int, default=1)
    _add_model(q)
    _add_io(q)

    p_euler = sub.add_parser("euler", help="truncated Euler products")
    es = p_euler.add_subparsers(dest="action", required=True)
    q = es.add_parser("eval", help="product value at 1/2 + it")
    q.add_argument("--x", type=int, required=True)
    q.add_argument("--truncation-j", type=int, default=0)
    q.add_argument("--t", type=float, default=0.0)
    q.add_argument("--seed", type=int, default=1)
    _add_model(q)
    _add_io(q)
    q = es.add_parser("meansq", help="exact expected |F|^2 up to a cutoff")
    q.add_argument("--cutoff", type=float, required=True)
    _add_model(q)
    _add_io(q)
    q = es.add_parser("v1", help="inner-sum variance at x")
    q.add_argument("--x", type=int, required=True)
    q.add_argument("--seed", type=int, default=1)
    _add_model(q)
    _add_io(q)
    q = es.add_parser("v5", help="weighted Euler-product variance proxy at x")
    q.add_argument("--x", type=int, required=True)
    q.add_argument("--seed", type=int, default=1)
    q.add_argument("--truncation-j", type=int, default=None)
    _add_model(q)
    _add_quad(q)
    _add_io(q)

    p_verify = sub.add_parser("verify", help="claim-level experiments")
    vs = p_verify.add_subparsers(dest="action", required=True)
    q = vs.add_parser("rough", help="oscillatory integral vs rough-count vs closed form")
    q.add_argument("--x", type=int, required=True)
    q.add_argument("--B", type=float, required=True)
    q.add_argument("--W", type=float, default=None)
    _add_quad(q)
    _add_io(q)
    q = vs.add_parser("gaussian", help="conditional normality of the restricted sum")
    q.add_argument("--x", type=int, required=True)
    q.add_argument("--seed", type=int, default=1,
                   help="seed fixing the small-prime block")
    q.add_argument("--n-large", type=int, default=2000)
    _add_model(q)
    _add_io(q)
    q = vs.add_parser("concentration", help="inner-sum variance vs Euler-product proxy")
    q.add_argument("--x", type=int, required=True)
    q.add_argument("--trials", type=int, default=200)
    q.add_argument("--truncation-j", type=int, default=None)
    _add_model(q)
    _add_quad(q)
    _add_io(q)

    q = sub.add_parser("mc", help="Monte Carlo trial batches with summary statistics")
    q.add_argument("--x", type=int, action="append", required=True,
                   help="scale; repeat the flag for several scales")
    q.add_argument("--trials", type=int, required=True)
    q.add_argument("--seed", type=int, default=1, help="base seed; trial i uses seed+i")
    q.add_argument("--with-v1", action="store_true")
    q.add_argument("--with-v5", action="store_true")
    q.add_argument("--truncation-j", type=int, default=None)
    q.add_argument("--q", type=float, action="append", default=None,
                   help="moment orders in (0,2); repeatable (default 0.5, 1.0)")
    q.add_argument("--threads", type=int, default=None,
                   help="worker threads; 0 = one per CPU (env RMF_LAB_THREADS fallback)")
    q.add_argument("--summary-csv", default=None,
                   help="prefix for optional summary CSV tables")
    _add_model(q)
    _add_quad(q)
    _add_io(q, formats=_FORMATS)
    return ap


def parse_args(argv: list[str]) -> CliInvocation:
    ap = build_parser()
    ns = ap.parse_args(argv)
    if ns.config is not None:
        return _invocation_from_doc(ns.config)
    if ns.command is None:
        ap.error("a subcommand is required (or --config)")
    command = ns.command + (" " + ns.action if getattr(ns, "action", None) else "")
    # threads is a runtime knob, not experiment config: kept out of the
    # recorded config so outputs are byte-identical at any thread count
    drop = {"command", "action", "config", "out", "format", "strict", "threads"}
    config = {k: v for k, v in sorted(vars(ns).items()) if k not in drop}
    return CliInvocation(command=command, config=config, out=ns.out,
                         fmt=getattr(ns, "format", "json"),
                         strict=getattr(ns, "strict", False),
                         threads=_resolve_threads(getattr(ns, "threads", 1)))


def _resolve_threads(value: int | None) -> int:
    if value is None:
        env = os.environ.get("RMF_LAB_THREADS")
        value = int(env) if env else 0
    return value


def _invocation_from_doc(path: str) -> CliInvocation:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("# "):                 # csv: meta in the comment line
        doc = json.loads(stripped.splitlines()[0][2:])
    else:
        try:
            doc = json.loads(text)                # json document
        except json.JSONDecodeError:
            doc = json.loads(stripped.splitlines()[0])   # jsonl: meta line first
    meta = doc["meta"]
    return CliInvocation(command=meta["command"], config=dict(meta["config"]),
                         out=None, fmt=meta.get("format", "json"),
                         strict=False, threads=1)


# ---------------------------------------------------------------- helpers

_TABLE_CACHE: dict = {"table": None}


def _table(limit: int):
    t = _TABLE_CACHE["table"]
    if t is None or t.limit < limit:
        t = primes_mod.build_prime_table(limit)
        _TABLE_CACHE["table"] = t
    return t


def _model(cfg) -> RmfModel:
    return RmfModel(cfg["model"])


def _quad(cfg) -> QuadratureSpec:
    return QuadratureSpec(T=cfg.get("quad_T"), rel_tol=cfg.get("quad_tol", 1e-6))


def _seed_info(cfg: dict, command: str) -> dict:
    if command == "mc":
        return {"base_seed": cfg["seed"], "stream": 0}
    if command == "verify gaussian":
        return {"seed_small": cfg["seed"], "small_stream": 0,
                "large_streams": [1, cfg["n_large"]]}
    if command == "verify concentration":
        return {"seeds": [1, cfg["trials"]], "stream": 0}
    if "seed" in cfg:
        return {"seed": cfg["seed"], "stream": cfg.get("stream", 0)}
    return {}


# ---------------------------------------------------------------- execution

def _execute(inv: CliInvocation):
    """Returns (data, converged) where data is a dict or a list of record dicts."""
    cfg = inv.config
    cmd = inv.command
    converged = True

    if cmd == "primes phi" or cmd == "primes psi":
        t = _table(max(2, math.ceil(cfg["x"])))
        q = primes_mod.RoughSmoothQuery(cfg["x"], cfg["y"])
        count = (primes_mod.rough_count(t, q) if cmd.endswith("phi")
                 else primes_mod.smooth_count(t, q))
        return {"x": cfg["x"], "y": cfg["y"], "count": count}, converged

    if cmd == "primes mertens":
        t = _table(max(2, math.ceil(cfg["x"])))
        return {"x": cfg["x"], "sum": primes_mod.mertens_sum(t, cfg["x"])}, converged

    if cmd == "sample sum":
        t = _table(max(2, cfg["x"]))
        s = RmfSampler(_model(cfg), cfg["seed"], cfg.get("stream", 0))
        val = complex(sampler_mod.partial_sum_prefix(s, t, cfg["x"])[cfg["x"]])
        return {"x": cfg["x"], "seed": cfg["seed"], "stream": cfg.get("stream", 0),
                "model": cfg["model"], "re": val.real, "im": val.imag}, converged

    if cmd == "sample restricted":
        t = _table(max(4, cfg["x"]))
        s = RmfSampler(_model(cfg), cfg["seed"], 0)
        val = sampler_mod.restricted_sum(s, t, cfg["x"])
        z = sampler_mod.normalize_sum(val, cfg["x"]) if cfg["x"] >= 16 else None
        data = {"x": cfg["x"], "seed": cfg["seed"], "model": cfg["model"],
                "re": val.real, "im": val.imag}
        if z is not None:
            data.update({"normalized_re": z.real, "normalized_im": z.imag,
                         "abs_normalized": abs(z)})
        return data, converged

    if cmd == "euler eval":
        c = euler_mod.EulerCutoffs(cfg["x"], cfg["truncation_j"])
        t = _table(max(2, math.ceil(c.cutoff)))
        s = RmfSampler(_model(cfg), cfg["seed"], 0)
        val = euler_mod.euler_product(s, t, c, cfg["t"])
        z = val.to_complex()
        return {"x": cfg["x"], "j": cfg["truncation_j"], "cutoff": c.cutoff,
                "t": cfg["t"], "seed": cfg["seed"], "model": cfg["model"],
                "log_mag": val.log_mag, "phase": val.phase,
                "re": z.real, "im": z.imag}, converged

    if cmd == "euler meansq":
        t = _table(max(2, math.ceil(cfg["cutoff"])))
        val = euler_mod.mean_square_exact(t, _model(cfg), cfg["cutoff"])
        return {"cutoff": cfg["cutoff"], "model": cfg["model"], "value": val}, converged

    if cmd == "euler v1":
        t = _table(cfg["x"])
        s = RmfSampler(_model(cfg), cfg["seed"], 0)
        return {"x": cfg["x"], "seed": cfg["seed"], "model": cfg["model"],
                "value": euler_mod.v1_variance(s, t, cfg["x"])}, converged

    if cmd == "euler v5":
        t = _table(cfg["x"])
        s = RmfSampler(_model(cfg), cfg["seed"], 0)
        r = euler_mod.v5_integral(s, t, cfg["x"], quad=_quad(cfg),
                                  j=cfg.get("truncation_j"))
        return {"x": cfg["x"], "seed": cfg["seed"], "model": cfg["model"],
                "value": r.value, "tail_bound": r.tail_bound,
                "panels_used": r.panels_used, "converged": r.converged,
                "j": r.j, "B": r.B, "T": r.T, "q_integral": r.q_integral,
                "value_loglog_x": r.value_loglog_x}, r.converged

    if cmd == "verify rough":
        t = _table(cfg["x"])
        rep = verify_mod.rough_integral_three_ways(t, cfg["x"], cfg["B"],
                                                   W=cfg.get("W"), quad=_quad(cfg))
        return rep.to_dict(), rep.converged

    if cmd == "verify gaussian":
        t = _table(cfg["x"])
        rep = verify_mod.conditional_gaussianity(t, cfg["x"], cfg["seed"],
                                                 cfg["n_large"], _model(cfg))
        return rep.to_dict(), converged

    if cmd == "verify concentration":
        t = _table(cfg["x"])
        rep = verify_mod.concentration_experiment(t, cfg["x"], cfg["trials"],
                                                  quad=_quad(cfg), model=_model(cfg),
                                                  j=cfg.get("truncation_j"))
        return rep.to_dict(), converged

    if cmd == "mc":
        xs = tuple(cfg["x"])
        t = _table(max(xs))
        ec = stats_mod.ExperimentConfig(
            model=_model(cfg), x_list=xs, n_trials=cfg["trials"],
            base_seed=cfg["seed"], quad=_quad(cfg),
            q_list=tuple(cfg["q"]) if cfg.get("q") else (0.5, 1.0),
            with_v1=cfg.get("with_v1", False), with_v5=cfg.get("with_v5", False),
            truncation_j=cfg.get("truncation_j"))
        records = stats_mod.run_trials(ec, t, threads=inv.threads)
        summary = stats_mod.summarize(records, ec)
        if cfg.get("summary_csv"):
            _write_summary_csv(cfg["summary_csv"], summary)
        return {"records": [r.to_dict() for r in records],
                "summary": summary.to_dict()}, converged

    raise ValueError(f"unknown command {cmd!r}")


# ---------------------------------------------------------------- rendering

def _meta(inv: CliInvocation) -> dict:
    return {
        "version": __version__,
        "command": inv.command,
        "format": inv.fmt,
        "config": inv.config,
        "seeds": _seed_info(inv.config, inv.command),
    }


def _render(inv: CliInvocation, data) -> str:
    meta = _meta(inv)
    if inv.fmt == "json":
        return json.dumps({"meta": meta, "data": data}, indent=2) + "\n"
    records = data["records"] if isinstance(data, dict) and "records" in data else data
    if not isinstance(records, list):
        records = [records]
    if inv.fmt == "jsonl":
        lines = [json.dumps({"meta": meta})]
        lines += [json.dumps(r) for r in records]
        return "\n".join(lines) + "\n"
    # csv: metadata as a '#' comment line, then header + rows
    keys = _RECORD_KEYS if records and set(_RECORD_KEYS) >= set(records[0]) else \
        tuple(records[0].keys()) if records else ()
    rows = ["# " + json.dumps({"meta": meta}),
            ",".join(keys)]
    for r in records:
        rows.append(",".join(_csv_cell(r.get(k)) for k in keys))
    return "\n".join(rows) + "\n"


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_summary_csv(prefix: str, summary) -> None:
    with open(prefix + ".moments.csv", "w", encoding="utf-8") as fh:
        fh.write("x,q,moment,stderr\n")
        for m in summary.moments:
            fh.write(f"{m['x']},{m['q']},{m['moment']!r},{m['stderr']!r}\n")
    with open(prefix + ".tails.csv", "w", encoding="utf-8") as fh:
        fh.write("x,y,tailfreq\n")
        for t in summary.tail_freqs:
            fh.write(f"{t['x']},{t['y']!r},{t['tailfreq']!r}\n")


def run(inv: CliInvocation) -> int:
    try:
        data, converged = _execute(inv)
    except ValueError as exc:
        print(f"rmf-lab: error: {exc}", file=sys.stderr)
        return 2
    except MemoryError:
        print("rmf-lab: error: out of memory", file=sys.stderr)
        return 1
    text = _render(inv, data)
    try:
        if inv.out:
            with open(inv.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"rmf-lab: error: {exc}", file=sys.stderr)
        return 1
    if inv.strict and not converged:
        print("rmf-lab: quadrature did not converge (strict mode)", file=sys.stderr)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    inv = parse_args(sys.argv[1:] if argv is None else argv)
    return run(inv)


if __name__ == "__main__":
    sys.exit(main())
