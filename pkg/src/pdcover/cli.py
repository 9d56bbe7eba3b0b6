"""Command-line front end: solve, baseline, verify, gen, sweep."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .analysis import analyze
from .applications import (
    CapKecssInstance,
    NearMinCutsInstance,
    near_min_cuts_oracle,
    solve_cap_kecss,
)
from .baseline import optimal_cap_kecss, optimal_cover
from .family import classify, format_family, parse_family
from .generate import (
    instance_rng,
    random_capk_instance,
    random_explicit_instance,
    random_nmc_instance,
)
from .graph import (
    CapacityError,
    InputDomainError,
    ParseError,
    format_graph,
    format_sectioned_graph,
    parse_graph,
    parse_sectioned_graph,
)
from .solver import InfeasibleError, format_certificate, frac_str, solve
from .sweep import SOURCES, run_sweep

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_CAPACITY = 3
EXIT_PARSE = 4
EXIT_LEMMA = 5


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _emit(args, payload: dict, text: str | None = None) -> None:
    if args.format == "json" or text is None:
        out = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        out = text
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise ParseError(f"--{name.replace('_', '-')} is required for mode {args.mode}")


def _load_cover_instance(args):
    """Returns ``(graph, family)`` for explicit and nmc modes."""
    if args.mode == "explicit":
        _require(args, "graph", "family")
        g = parse_graph(_read(args.graph))
        fam = parse_family(_read(args.family))
        if fam.n != g.n:
            raise ParseError(f"family is on {fam.n} vertices, graph on {g.n}")
        return g, fam
    if args.mode == "nmc":
        _require(args, "graph", "k")
        if args.base_graph:
            base, cand = parse_graph(_read(args.base_graph)), parse_graph(_read(args.graph))
        else:
            base, cand = parse_sectioned_graph(_read(args.graph))
        inst = NearMinCutsInstance(base, cand, args.k)
        return cand, near_min_cuts_oracle(inst)
    raise ParseError(f"mode {args.mode} does not describe a cover instance")


def cmd_solve(args) -> int:
    if args.mode == "capk":
        _require(args, "graph", "k")
        g = parse_graph(_read(args.graph))
        out = solve_cap_kecss(CapKecssInstance(g, args.k))
        payload = {
            "solution": sorted(out.J),
            "cost": frac_str(g.cost(out.J)),
            "rounds": [r.to_dict() for r in out.rounds],
            "min_cut_after_round": out.min_cuts,
        }
        text = (f"cost {payload['cost']}\nsolution {' '.join(map(str, payload['solution']))}\n"
                f"rounds {len(out.rounds)}\nmin_cut_after_round {' '.join(map(str, out.min_cuts))}\n")
        _emit(args, payload, text)
        return EXIT_OK
    g, fam = _load_cover_instance(args)
    res = solve(g, fam)
    _emit(args, res.to_dict(), format_certificate(res, g))
    return EXIT_OK


def cmd_baseline(args) -> int:
    if args.mode == "capk":
        _require(args, "graph", "k")
        g = parse_graph(_read(args.graph))
        base = optimal_cap_kecss(g, args.k)
    else:
        g, fam = _load_cover_instance(args)
        base = optimal_cover(g, fam)
    payload = {
        "feasible": base.feasible,
        "opt_cost": frac_str(base.opt_cost) if base.feasible else None,
        "opt_set": sorted(base.opt_set) if base.feasible else None,
    }
    text = (f"opt {payload['opt_cost']}\nset {' '.join(map(str, payload['opt_set']))}\n"
            if base.feasible else "infeasible\n")
    _emit(args, payload, text)
    return EXIT_OK if base.feasible else EXIT_INFEASIBLE


def cmd_verify(args) -> int:
    g, fam = _load_cover_instance(args)
    cls = classify(fam, g, with_gamma=args.mode == "explicit")
    if args.mode == "nmc":
        cls = replace(cls, gamma_pliable=cls.pliable)
    res = solve(g, fam)
    report = analyze(g, fam, res, cls.symmetric)
    payload = {"class": cls.as_dict(), "cost": frac_str(res.cost),
               "dual_total": frac_str(res.dual_total), "report": report.as_dict()}
    failed = not report.witness_ok if cls.pliable else False
    if cls.gamma_pliable and not report.lemmas_ok:
        failed = True
    payload["status"] = "violation" if failed else "ok"
    lines = [f"class {json.dumps(cls.as_dict(), sort_keys=True)}",
             f"cost {payload['cost']} dual_total {payload['dual_total']}",
             f"max_chain {report.max_chain}"]
    for s in report.snapshots:
        lines.append(f"iter {s.index} cores {s.cores} lhs {s.lhs} bound {s.bound} "
                     f"witness {'ok' if s.witness_ok else 'FAIL'} "
                     f"lemmas {'ok' if s.lemmas_ok else 'FAIL'} chain {s.max_chain}")
        for msg in s.witness_problems + s.chain_violations + s.contra_violations + s.long_core_violations:
            lines.append(f"  {msg}")
    lines.append(f"status {payload['status']}")
    _emit(args, payload, "\n".join(lines) + "\n")
    return EXIT_LEMMA if failed else EXIT_OK


def cmd_gen(args) -> int:
    if not args.out:
        raise ParseError("--out PREFIX is required for gen")
    rng = instance_rng(args.seed, args.mode, 0)
    prefix = args.out
    if args.mode in ("explicit", "uncrossable"):
        g, fam = random_explicit_instance(rng, uncrossable=args.mode == "uncrossable")
        Path(prefix + ".graph").write_text(format_graph(g))
        Path(prefix + ".family").write_text(format_family(fam))
    elif args.mode == "nmc":
        inst = random_nmc_instance(rng)
        Path(prefix + ".nmc").write_text(format_sectioned_graph(inst.g0, inst.candidates))
        Path(prefix + ".k").write_text(f"{inst.k}\n")
    elif args.mode == "capk":
        inst = random_capk_instance(rng)
        Path(prefix + ".graph").write_text(format_graph(inst.g))
        Path(prefix + ".k").write_text(f"{inst.k}\n")
    else:
        raise ParseError(f"gen does not support mode {args.mode}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    report = run_sweep(args.mode, args.count, args.seed)
    payload = report.to_dict(with_records=args.records)
    summary = payload["summary"]
    lines = [f"generator {payload['generator']} seed {args.seed} source {args.mode}",
             f"instances {summary['instances']} gamma_pliable {summary['gamma_pliable']}",
             f"max_ratio {summary['max_ratio']} max_chain {summary['max_chain']}"]
    for name, c in summary["checks"].items():
        lines.append(f"{name} checked {c['checked']} failed {c['failed']}")
    _emit(args, payload, "\n".join(lines) + "\n")
    return EXIT_LEMMA if report.violations else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pdcover", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    modes = ("explicit", "nmc", "capk")

    def common(sp, mode_choices=modes, default="explicit"):
        sp.add_argument("--mode", choices=mode_choices, default=default)
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--out")
        sp.add_argument("--seed", type=int, default=0)

    for name, fn, help_ in (("solve", cmd_solve, "run the primal-dual algorithm"),
                            ("baseline", cmd_baseline, "exact optimum by branch and bound"),
                            ("verify", cmd_verify, "solve and check the structural lemmas")):
        sp = sub.add_parser(name, help=help_)
        common(sp, modes if name != "verify" else ("explicit", "nmc"))
        sp.add_argument("--graph")
        sp.add_argument("--family")
        sp.add_argument("--base-graph")
        sp.add_argument("--k", type=int)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("gen", help="write a random instance")
    common(sp, ("explicit", "uncrossable", "nmc", "capk"))
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("sweep", help="random instances through solver, baseline and harness")
    common(sp, SOURCES)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--records", action="store_true", help="include per-instance records")
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ParseError, InputDomainError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
