import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pdcover.applications import (
    CapKecssInstance,
    CutThresholdFamily,
    NearMinCutsInstance,
    min_cut_capacity,
    near_min_cuts_oracle,
    solve_cap_kecss,
    solve_near_min_cuts,
)
from pdcover.baseline import cap_cut_ok, optimal_cap_kecss
from pdcover.family import ExplicitFamily, check_gamma, classify, complete_graph
from pdcover.generate import random_capk_instance, random_nmc_instance
from pdcover.graph import CapacityError, Graph, cut_degree
from pdcover.solver import InfeasibleError

from conftest import brute_opt


def _brute_members(g0, k):
    return [s for s in range(1, (1 << g0.n) - 1) if cut_degree(g0.all_edges(), s, g0) < k]


def test_four_cycle_family(four_cycle):
    fam = near_min_cuts_oracle(NearMinCutsInstance(four_cycle, four_cycle, 3))
    assert fam.members() == _brute_members(four_cycle, 3)
    assert len(fam) == 12  # every set except {0,2} and {1,3}
    assert fam.min_cores([], four_cycle) == [1, 2, 4, 8]
    explicit = ExplicitFamily(4, fam.members())
    cls = classify(explicit, with_gamma=False)
    assert cls.pliable and cls.symmetric
    assert check_gamma(explicit, complete_graph(4), mode="sampled", samples=200).holds


def test_k4_family_empty():
    k4 = complete_graph(4)
    fam = near_min_cuts_oracle(NearMinCutsInstance(k4, k4, 3))
    assert _brute_members(k4, 3) == []
    assert len(fam) == 0 and fam.min_cores([], k4) == []


@pytest.mark.parametrize("seed", range(20))
def test_k1_family_empty_iff_connected(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 7)
    g0 = Graph.build(n, [tuple(rng.sample(range(n), 2)) for _ in range(rng.randint(0, n + 1))])
    # connectivity by union-find
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x
    for e in g0.edges:
        parent[find(e.u)] = find(e.v)
    connected = len({find(v) for v in range(n)}) == 1
    fam = near_min_cuts_oracle(NearMinCutsInstance(g0, complete_graph(n), 1))
    assert (len(fam) == 0) == connected


def test_membership_matches_definition(four_cycle):
    fam = near_min_cuts_oracle(NearMinCutsInstance(four_cycle, four_cycle, 3))
    for s in range(16):
        assert fam.is_member(s) == (s in _brute_members(four_cycle, 3))


def test_near_min_cuts_diagonals(four_cycle):
    diag = Graph.build(4, [(0, 2), (1, 3)])
    inst = NearMinCutsInstance(four_cycle, diag, 3)
    res = solve_near_min_cuts(inst)
    opt = brute_opt(diag, near_min_cuts_oracle(inst).members())
    assert opt == 2
    assert res.solution == {0, 1} and res.cost <= 10 * opt
    assert res.extra["family_size"] == 12 and res.extra["initial_cores"] == 4


def test_near_min_cuts_empty_family():
    k4 = complete_graph(4)
    res = solve_near_min_cuts(NearMinCutsInstance(k4, k4, 3))
    assert res.solution == frozenset() and res.cost == 0


def test_near_min_cuts_path():
    path = Graph.build(3, [(0, 1), (1, 2)])
    cand = Graph.build(3, [(0, 2, 1)])
    inst = NearMinCutsInstance(path, cand, 2)
    res = solve_near_min_cuts(inst)
    assert near_min_cuts_oracle(inst).min_cores([], cand) == [1, 4]
    assert res.solution == {0} and res.cost == 1
    assert brute_opt(cand, near_min_cuts_oracle(inst).members()) == 1


def test_instance_validation(four_cycle):
    with pytest.raises(ValueError):
        NearMinCutsInstance(four_cycle, complete_graph(3), 2)
    with pytest.raises(ValueError):
        NearMinCutsInstance(four_cycle, four_cycle, 0)


def test_enumeration_cap():
    big = Graph.build(21, [(i, i + 1) for i in range(20)])
    with pytest.raises(CapacityError):
        near_min_cuts_oracle(NearMinCutsInstance(big, big, 2))
    with pytest.raises(CapacityError):
        solve_cap_kecss(CapKecssInstance(big, 1))


def _brute_capk(g, k):
    best = None
    for x in range(1 << g.m):
        J = [e for e in range(g.m) if x >> e & 1]
        if all(sum(g.edges[e].capacity for e in J if g.edges[e].crosses(s)) >= k
               for s in range(1, (1 << g.n) - 1)):
            c = sum((g.edges[e].cost for e in J), Fraction(0))
            best = c if best is None or c < best else best
    return best


def test_capk_parallel_edges():
    g = Graph.build(2, [(0, 1), (0, 1), (0, 1)])
    inst = CapKecssInstance(g, 2)
    out = solve_cap_kecss(inst)
    assert _brute_capk(g, 2) == 2 == optimal_cap_kecss(g, 2).opt_cost
    assert len(out.rounds) == 2 == inst.round_bound
    assert out.J == {0, 1} and g.cost(out.J) == 2 == out.cost
    assert out.min_cuts == [1, 2]


def test_capk_cycle_with_heavy_diagonals():
    g = Graph.build(4, [(0, 1, 1, 1), (1, 2, 1, 1), (2, 3, 1, 1), (3, 0, 1, 1),
                        (0, 2, 3, 2), (1, 3, 3, 2)])
    inst = CapKecssInstance(g, 2)
    out = solve_cap_kecss(inst)
    opt = _brute_capk(g, 2)
    assert cap_cut_ok(g, out.J, 2)
    assert min_cut_capacity(g, out.J) >= 2
    assert g.cost(out.J) <= 20 * opt
    assert optimal_cap_kecss(g, 2).opt_cost == opt


def test_capk_infeasible_names_cut():
    g = Graph.build(3, [(0, 1, 1, 3), (1, 2, 1, 1)])
    with pytest.raises(InfeasibleError) as exc:
        solve_cap_kecss(CapKecssInstance(g, 2))
    assert exc.value.core in (4, 3)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_capk_random(seed):
    inst = random_capk_instance(random.Random(seed), max_n=4, max_m=7)
    out = solve_cap_kecss(inst)
    opt = _brute_capk(inst.g, inst.k)
    assert cap_cut_ok(inst.g, out.J, inst.k)
    assert len(out.rounds) <= math.ceil(inst.k / inst.u_min)
    assert inst.g.cost(out.J) <= 10 * math.ceil(inst.k / inst.u_min) * opt
    # rounds never buy an edge twice
    picked = [e for r in out.rounds for e in r.extra["round_edges"]]
    assert len(picked) == len(set(picked)) and set(picked) == out.J


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_near_min_cuts_pliable_and_gamma(seed):
    inst = random_nmc_instance(random.Random(seed), max_n=5, max_m=8)
    fam = ExplicitFamily(inst.g0.n, near_min_cuts_oracle(inst).members())
    cls = classify(fam, with_gamma=False)
    assert cls.pliable and cls.symmetric
    g = complete_graph(fam.n)
    assert check_gamma(fam, g, mode="exhaustive" if g.m <= 12 else "sampled").holds


def test_cut_threshold_cores_match_explicit(four_cycle):
    fam = CutThresholdFamily(four_cycle, [0, 1], 2)
    explicit = ExplicitFamily(4, fam.members())
    k4 = complete_graph(4)
    for x in range(1 << k4.m):
        I = [e for e in range(k4.m) if x >> e & 1]
        assert fam.min_cores(I, k4) == explicit.min_cores(I, k4)
