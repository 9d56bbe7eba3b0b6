"""Randomised sweeps: solve, compare with the exact optimum, run the harness."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from .analysis import analyze, analyze_cover
from .applications import near_min_cuts_oracle, solve_cap_kecss
from .baseline import cap_cut_ok, optimal_cap_kecss, optimal_cover
from .family import FamilyOracle, classify
from .generate import (
    RNG_NAME,
    instance_rng,
    random_capk_instance,
    random_chain_probe,
    random_explicit_instance,
    random_minimal_cover,
    random_nmc_instance,
)
from .graph import Graph
from .solver import frac_str, solve

SOURCES = ("explicit", "uncrossable", "nmc", "capk", "chains")
CHAIN_PROBE_COVERS = 6

# criterion name -> which instances it applies to
CHECKS = (
    "feasible",
    "weak_duality",
    "dual_feasible",
    "ratio_10",          # gamma-pliable families: cost <= 10 opt
    "ratio_2",           # uncrossable families: cost <= 2 opt
    "dual_ratio_10",     # gamma-pliable families: cost <= 10 dual_total
    "degree_bound",      # per-snapshot core-degree bounds (gamma-pliable)
    "chain_lemma",       # hollow chain case checks, length <= 3 (gamma-pliable)
    "witness",           # laminar witness construction (pliable)
    "capk_cut",          # final J meets every cut with capacity k
    "capk_ratio",        # cost <= 10 ceil(k/u_min) opt
)


def _ratio(cost: Fraction, opt: Fraction) -> Optional[Fraction]:
    if opt == 0:
        return None if cost == 0 else Fraction(10 ** 9)
    return cost / opt


def _cover_record(g: Graph, fam: FamilyOracle, cls, checks: dict) -> dict:
    res = solve(g, fam)
    base = optimal_cover(g, fam)
    gamma = bool(cls.gamma_pliable)
    rec = {
        "n": g.n,
        "m": g.m,
        "family_size": len(fam.members()),
        "class": cls.as_dict(),
        "cost": frac_str(res.cost),
        "dual_total": frac_str(res.dual_total),
        "opt": frac_str(base.opt_cost),
        "iterations": len(res.iterations),
    }
    ratio = _ratio(res.cost, base.opt_cost)
    rec["ratio"] = None if ratio is None else frac_str(ratio)
    checks["feasible"] = fam.covered_by(res.solution, g)
    checks["weak_duality"] = res.dual_total <= base.opt_cost
    checks["dual_feasible"] = all(r.min_slack >= 0 for r in res.iterations) and min(
        res.duals.slack, default=0) >= 0
    if gamma:
        checks["ratio_10"] = res.cost <= 10 * base.opt_cost
        checks["dual_ratio_10"] = res.cost <= 10 * res.dual_total
    if cls.uncrossable:
        checks["ratio_2"] = res.cost <= 2 * base.opt_cost
    if cls.pliable:
        report = analyze(g, fam, res, cls.symmetric)
        checks["witness"] = report.witness_ok
        rec["max_chain"] = report.max_chain
        rec["max_lhs_over_bound"] = max(
            (frac_str(Fraction(s.lhs, s.bound)) for s in report.snapshots if s.bound),
            key=Fraction, default=None)
        if gamma:
            checks["degree_bound"] = all(s.bound_ok and s.accounting_ok and s.tree_ok
                                         for s in report.snapshots)
            checks["chain_lemma"] = all(
                not (s.chain_violations or s.contra_violations or s.long_core_violations)
                for s in report.snapshots) and report.max_chain <= 3
        failing = [s.as_dict() for s in report.snapshots if not (s.lemmas_ok and s.witness_ok)]
        if failing:
            rec["failing_snapshots"] = failing
    return rec


def run_instance(source: str, seed: int, index: int) -> dict:
    rng = instance_rng(seed, source, index)
    checks: dict[str, bool] = {}
    if source in ("explicit", "uncrossable"):
        g, fam = random_explicit_instance(rng, uncrossable=source == "uncrossable")
        cls = classify(fam, g)
        rec = _cover_record(g, fam, cls, checks)
    elif source == "nmc":
        inst = random_nmc_instance(rng)
        fam = near_min_cuts_oracle(inst)
        # pliable and gamma-pliable by construction; symmetry is cut symmetry
        cls = classify(fam, with_gamma=False)
        cls = replace(cls, gamma_pliable=cls.pliable)
        rec = _cover_record(inst.candidates, fam, cls, checks)
        rec["k"] = inst.k
    elif source == "capk":
        inst = random_capk_instance(rng)
        out = solve_cap_kecss(inst)
        base = optimal_cap_kecss(inst.g, inst.k)
        cost = inst.g.cost(out.J)
        rec = {
            "n": inst.g.n,
            "m": inst.g.m,
            "k": inst.k,
            "u_min": inst.u_min,
            "rounds": len(out.rounds),
            "cost": frac_str(cost),
            "opt": frac_str(base.opt_cost),
        }
        checks["capk_cut"] = cap_cut_ok(inst.g, out.J, inst.k)
        checks["capk_ratio"] = cost <= 10 * math.ceil(inst.k / inst.u_min) * base.opt_cost
        checks["feasible"] = checks["capk_cut"]
        checks["weak_duality"] = all(r.dual_total <= base.opt_cost for r in out.rounds)
        checks["dual_feasible"] = all(min(r.duals.slack, default=0) >= 0 for r in out.rounds)
    elif source == "chains":
        g, fam = random_chain_probe(rng)
        cls = classify(fam, g)
        rec = {"n": g.n, "m": g.m, "family_size": len(fam), "class": cls.as_dict()}
        snaps = [analyze_cover(g, fam, random_minimal_cover(rng, g, fam), cls.symmetric, i)
                 for i in range(CHAIN_PROBE_COVERS)]
        rec["max_chain"] = max(s.max_chain for s in snaps)
        checks["witness"] = all(s.witness_ok for s in snaps)
        if cls.gamma_pliable:
            checks["degree_bound"] = all(s.bound_ok and s.tree_ok for s in snaps)
            checks["chain_lemma"] = all(
                not (s.chain_violations or s.contra_violations or s.long_core_violations)
                for s in snaps) and rec["max_chain"] <= 3
        failing = [s.as_dict() for s in snaps if not (s.lemmas_ok and s.witness_ok)]
        if failing:
            rec["failing_snapshots"] = failing
    else:
        raise ValueError(f"unknown sweep source {source!r}")
    rec["index"] = index
    rec["checks"] = dict(sorted(checks.items()))
    return rec


@dataclass
class SweepReport:
    source: str
    seed: int
    records: list[dict] = field(default_factory=list)

    def summary(self) -> dict:
        counts = {}
        for name in CHECKS:
            applied = [r["checks"][name] for r in self.records if name in r["checks"]]
            if applied:
                counts[name] = {"checked": len(applied), "failed": applied.count(False)}
        ratios = [Fraction(r["ratio"]) for r in self.records if r.get("ratio")]
        chains = [r["max_chain"] for r in self.records if "max_chain" in r]
        gamma_chains = [r["max_chain"] for r in self.records
                        if "max_chain" in r and r["class"].get("gamma_pliable")]
        gamma = sum(1 for r in self.records if r.get("class", {}).get("gamma_pliable"))
        return {
            "instances": len(self.records),
            "gamma_pliable": gamma,
            "max_ratio": frac_str(max(ratios)) if ratios else None,
            "max_ratio_float": float(max(ratios)) if ratios else None,
            "max_chain": max(chains, default=None),
            "max_chain_gamma": max(gamma_chains, default=None),
            "chain_lengths": {str(k): chains.count(k) for k in sorted(set(chains))},
            "checks": counts,
        }

    @property
    def violations(self) -> int:
        return sum(c["failed"] for c in self.summary()["checks"].values())

    def to_dict(self, with_records: bool = True) -> dict:
        out = {"generator": RNG_NAME, "source": self.source, "seed": self.seed,
               "summary": self.summary()}
        if with_records:
            out["records"] = self.records
        return out


def run_sweep(source: str, count: int, seed: int = 0) -> SweepReport:
    report = SweepReport(source, seed)
    for i in range(count):
        report.records.append(run_instance(source, seed, i))
    return report
