"""Command line entry point: ``semirand {analyze,simulate,sweep,verify,oracle}``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from .hypergraph import Hypergraph, LeadingEdgeHypergraph, OrientedOrderedGraph, PatternFormatError, load
from .strategies.base import StrategyMismatch

log = logging.getLogger("semirand")


class UsageError(Exception):
    pass


def _list(kind):
    def parse(text: str):
        return [kind(x) for x in text.split(",") if x.strip()]
    return parse


def _flatten(values):
    if values is None:
        return None
    out = []
    for v in values:
        out.extend(v)
    return out


def _frac(fr: Fraction) -> dict:
    return {"num": fr.numerator, "den": fr.denominator, "value": float(fr)}


def _emit(doc, out: str | None = None) -> None:
    text = json.dumps(doc, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------

def cmd_analyze(args) -> int:
    from .structure import analyze, aux_digraph, degeneracy, hyper_weight_function, ordered_diameter, weight_function

    g = load(args.pattern)
    if isinstance(g, Hypergraph):
        if args.r is None:
            raise UsageError("--r is required for s-uniform patterns")
        doc = analyze(g, args.r)
        for rep in doc["reports"]:
            e = rep["exponent"]
            e["value"] = e["num"] / e["den"]
    else:
        weights = weight_function(g) if isinstance(g, OrientedOrderedGraph) else hyper_weight_function(g)
        d, order = degeneracy(g)
        doc = {
            "k": g.k,
            "m": len(g.edges),
            "degeneracy": d,
            "ordering": order,
            "weights": {str(v): w for v, w in weights.items()},
            "ordered_diameter": ordered_diameter(g),
        }
        if isinstance(g, LeadingEdgeHypergraph):
            doc["aux_digraph"] = [list(e) for e in aux_digraph(g).edges]
    _emit(doc, args.out)
    return 0


def cmd_simulate(args) -> int:
    from .experiment import build_strategy
    from .oracle import contains_copy
    from .process import ProcessConfig, run

    g = _require_pattern(args)
    n, t = args.n[0], args.t[0]
    params = {"omega": args.omega} if args.omega is not None else {}
    strategy = build_strategy(args.strategy, g, args.r, params)
    config = ProcessConfig(n=n, r=args.r, s=g.s, seed=args.seed, t_max=t)
    sink = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        res = run(config, strategy, transcript=sink)
    finally:
        if args.out:
            sink.close()
    summary = {
        "n": n, "t": t, "seed": args.seed, "strategy": args.strategy,
        "success": res.success, "rounds_used": res.rounds_used,
        "oracle_confirms": contains_copy(res.state.hypergraph, g) if res.success else None,
    }
    print(json.dumps(summary))
    return 0


def cmd_sweep(args) -> int:
    from .experiment import ExperimentConfig, sweep, write_result

    if args.config:
        cfg = ExperimentConfig.from_file(args.config)
        for name in ("workers", "trials", "seed"):
            if getattr(args, name) is not None:
                setattr(cfg, name, getattr(args, name))
    else:
        if not (args.pattern and args.r and args.strategy and args.n):
            raise UsageError("sweep needs --config or --pattern, --r, --strategy and --n")
        if (args.t is None) == (args.c is None):
            raise UsageError("give exactly one of --t or --c")
        kappa = args.kappa if args.kappa == "auto" else Fraction(args.kappa)
        cfg = ExperimentConfig(
            pattern=args.pattern, r=args.r, strategy=args.strategy, n=args.n, t=args.t, c=args.c,
            kappa=kappa, trials=args.trials or 100, seed=args.seed, workers=args.workers,
            params={"omega": args.omega} if args.omega is not None else {},
        )
    out, cfg.out = args.out or cfg.out, None
    result = sweep(cfg)
    if out:
        write_result(result, out, args.format)
    elif args.format == "json":
        print(result.to_json())
    else:
        sys.stdout.write(result.csv_text())
    return 0


def cmd_verify(args) -> int:
    from .suites import SUITES

    names = args.suite or list(SUITES)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)}")
    report = {}
    for name in names:
        kwargs = {"seed": args.seed}
        if args.trials is not None and name not in ("weights", "balance"):
            kwargs["trials"] = args.trials
        log.info("running suite %s", name)
        report[name] = SUITES[name](**kwargs)
    report = {"passed": all(r["passed"] for r in report.values()), "suites": report}
    _emit(report, args.out)
    return 0 if report["passed"] else 1


def cmd_oracle(args) -> int:
    from .oracle import contains_copy, count_k_sets_with_j_edges, ordered_hom_sets

    if not args.host:
        raise UsageError("--host is required")
    host = load(args.host)
    if not isinstance(host, Hypergraph):
        raise UsageError("--host must be an s-uniform hypergraph document")
    if args.query == "contains":
        g = _require_pattern(args)
        doc = {"contains": contains_copy(host, g)}
    elif args.query == "hom-set":
        g = load(args.pattern) if args.pattern else None
        if not isinstance(g, (OrientedOrderedGraph, LeadingEdgeHypergraph)):
            raise UsageError("hom-set needs an ordered pattern")
        if args.anchor is None:
            raise UsageError("hom-set needs --anchor")
        doc = {"anchor": args.anchor, "set": sorted(ordered_hom_sets(g, host)[args.anchor])}
    else:
        if args.k is None or args.j is None:
            raise UsageError("k-sets needs --k and --j")
        doc = {"k": args.k, "j": args.j, "count": count_k_sets_with_j_edges(host, args.k, args.j)}
    _emit(doc, args.out)
    return 0


def _require_pattern(args) -> Hypergraph:
    if not args.pattern:
        raise UsageError("--pattern is required")
    g = load(args.pattern)
    if not isinstance(g, Hypergraph):
        raise UsageError("pattern must be an s-uniform hypergraph document")
    if args.r is None:
        raise UsageError("--r is required")
    return g


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="semirand", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--pattern", metavar="FILE")
        sp.add_argument("--r", type=int)
        sp.add_argument("--out", metavar="PATH")
        return sp

    def running(sp):
        sp.add_argument("--strategy")
        sp.add_argument("--omega", type=float)
        sp.add_argument("--n", type=_list(int), action="append")
        sp.add_argument("--t", type=_list(int), action="append")
        sp.add_argument("--seed", type=int, default=0)
        return sp

    a = common(sub.add_parser("analyze", help="structural quantities and threshold exponents"))
    a.set_defaults(func=cmd_analyze)

    s = running(common(sub.add_parser("simulate", help="one trial with its transcript")))
    s.set_defaults(func=cmd_simulate)

    w = running(common(sub.add_parser("sweep", help="success-probability grid")))
    w.add_argument("--c", type=_list(float), action="append")
    w.add_argument("--kappa", default="auto")
    w.add_argument("--trials", type=int)
    w.add_argument("--workers", type=int)
    w.add_argument("--format", choices=("csv", "json"), default="csv")
    w.add_argument("--config", metavar="FILE")
    w.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="empirical bound suites")
    v.add_argument("--suite", action="append")
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", metavar="PATH")
    v.set_defaults(func=cmd_verify)

    o = common(sub.add_parser("oracle", help="single brute-force query"))
    o.add_argument("query", choices=("contains", "hom-set", "k-sets"))
    o.add_argument("--host", metavar="FILE")
    o.add_argument("--anchor", type=int)
    o.add_argument("--k", type=int)
    o.add_argument("--j", type=int)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("SEMIRAND_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("n", "t", "c"):
        if hasattr(args, name):
            setattr(args, name, _flatten(getattr(args, name)))
    if args.command == "simulate" and (not args.n or not args.t or not args.strategy):
        parser.error("simulate needs --strategy, --n and --t")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (PatternFormatError, StrategyMismatch, FileNotFoundError) as exc:
        print(f"semirand: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - report and signal failure
        log.debug("failure", exc_info=True)
        print(f"semirand: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
