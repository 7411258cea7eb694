"""End-to-end acceptance criteria; each test records one PASS/FAIL line for the summary."""
import random
import time
from itertools import combinations, islice

from boolsys.boolean_core import AT_INFINITY, FiniteCofinite, Height, Principal, contains, definable_ideal, ultrafilters
from boolsys.dynamics import is_regular
from boolsys.invariants import (
    CycleWitness,
    enumerate_hs_ideals,
    find_cycle_no_exit,
    hs_closure,
    hs_lattice,
    is_simple,
    quotient_system,
)
from boolsys.ktheory import Group, KGroups, k_groups
from boolsys.presets import from_directed_graph, from_sft, parse_sft, sft_simplicity_criterion
from boolsys.semigroup import (
    NotACover,
    OrthogonalCover,
    ZERO,
    expansion_idempotents,
    idempotent_leq_by_cases,
    is_cover,
    is_idempotent,
    leq,
    mul,
    orthogonal,
    projection,
    refine_cover,
    star,
)
from boolsys.topograph import Edge, build_graph, graph_ktheory_oracle

from conftest import ACCEPTANCE, make_s1, make_s2, make_s4, o_n
from corpus import corpus, cores, elements_upto, idempotents_upto
from test_invariants import oracle_closure, oracle_has_cycle_without_exit, oracle_hs_generators

Z = Group(1)
ZERO_GROUP = Group(0)


def record(number: int, title: str, failures: list[str], started: float):
    status = "PASS" if not failures else "FAIL"
    line = f"{status} criterion {number}: {title} ({time.perf_counter() - started:.2f}s)"
    if failures:
        line += " :: " + "; ".join(failures[:3])
    ACCEPTANCE.append(line)
    print(line)
    assert not failures, line


def test_criterion_1_stone_spectrum_over_n():
    t0, bad = time.perf_counter(), []
    nb = FiniteCofinite("N")
    head = list(islice(ultrafilters(nb), 51))
    if head.count(AT_INFINITY) != 1:
        bad.append("point at infinity not listed exactly once")
    if [u for u in head if u != AT_INFINITY] != [Principal(i) for i in range(50)]:
        bad.append("principal ultrafilters are not exactly the points of N")
    samples = [nb.finite([]), nb.finite([0, 3]), nb.cofinite([]), nb.cofinite([1, 2]), nb.finite(range(10))]
    for a in samples:
        if contains(AT_INFINITY, a) != a.cofinite:
            bad.append(f"infinity membership wrong for {a}")
        for i in range(12):
            if contains(Principal(i), a) != a.has_point(i):
                bad.append(f"point {i} membership wrong for {a}")
    # every element lies in some ultrafilter, and only cofinite ones in the point at infinity
    for a in samples[1:]:
        if not any(contains(u, a) for u in head):
            bad.append(f"{a} separated from no ultrafilter")
    record(1, "Stone spectrum of the finite/cofinite algebra over N", bad, t0)


def test_criterion_2_example_four_pipeline():
    t0, bad = time.perf_counter(), []
    s4 = make_s4()
    zb = s4.backend
    lattice, complete = hs_lattice(s4)
    finite_sets = definable_ideal(zb.top(), Height.FINITE_ONLY)
    nontrivial = [i for i in lattice if i not in (definable_ideal(zb.bottom()), definable_ideal(zb.top()))]
    if not complete or nontrivial != [finite_sets]:
        bad.append(f"(a) lattice {lattice} complete={complete}")
    q = quotient_system(s4, finite_sets)
    tail = q.backend.top()
    if q.backend.atoms != ("tail",) or not q.apply("a", tail).is_empty or q.apply("b", tail) != tail or q.apply("c", tail) != tail:
        bad.append("(b) quotient is not the single-class O2 system")
    if k_groups(q) != KGroups(ZERO_GROUP, ZERO_GROUP):
        bad.append(f"(c) quotient K = {k_groups(q)}")
    g = build_graph(s4)
    at_inf = {e for e in g.edges if e.d == AT_INFINITY or e.r == AT_INFINITY}
    expected = {Edge("b", AT_INFINITY, AT_INFINITY), Edge("c", AT_INFINITY, AT_INFINITY)}
    if at_inf != expected:
        bad.append(f"(d) edges at infinity {at_inf}")
    finite_edges = {e for e in g.edges if e.d != AT_INFINITY}
    for n in range(-2, 3):
        # b moves one step right and c one step left
        for label, source in (("b", n - 1), ("c", n + 1)):
            if Edge(label, Principal(n), Principal(source)) not in finite_edges:
                bad.append(f"(d) missing {label} edge at {n}")
    if [e for e in finite_edges if e.label == "a"] != [Edge("a", Principal(0), Principal(0))]:
        bad.append("(d) label a should have the single loop at 0")
    record(2, "definable ideals, quotient, K-theory and graph of the Z example", bad, t0)


def _random_graph(rng):
    vertices = [f"v{i}" for i in range(rng.randint(1, 6))]
    edges = [(rng.choice(vertices), rng.choice(vertices), f"e{j}") for j in range(rng.randint(0, 12))]
    return vertices, edges


def test_criterion_3_independent_k_theory_oracle():
    t0, bad = time.perf_counter(), []
    rng = random.Random(31)
    for trial in range(150):
        vertices, edges = _random_graph(rng)
        sys = from_directed_graph(vertices, edges)
        ours, oracle = k_groups(sys), graph_ktheory_oracle(build_graph(sys))
        if ours != oracle:
            bad.append(f"graph {trial}: {ours} vs {oracle}")
    if time.perf_counter() - t0 > 10:
        bad.append("over the 10 s budget")
    record(3, "k_groups matches the graph oracle on 150 random graphs", bad, t0)


def test_criterion_4_o_n_family():
    t0, bad = time.perf_counter(), []
    for n in range(2, 7):
        sys = o_n(n)
        want = KGroups(Group(0, (n - 1,)) if n > 2 else ZERO_GROUP, ZERO_GROUP)
        if k_groups(sys) != want:
            bad.append(f"n={n}: K = {k_groups(sys)}")
        if not is_simple(sys).simple:
            bad.append(f"n={n} not simple")
    one = is_simple(o_n(1))
    if one.simple or not isinstance(one.witness, CycleWitness):
        bad.append("n=1 lacks a cycle witness")
    if k_groups(o_n(1)) != KGroups(Z, Z):
        bad.append(f"n=1: K = {k_groups(o_n(1))}")
    record(4, "one atom with n identity labels", bad, t0)


def test_criterion_5_semigroup_laws():
    t0, bad = time.perf_counter(), []
    rng = random.Random(5)
    for name, sys in (("S1", make_s1()), ("S2", make_s2()), ("S4", make_s4())):
        elems = elements_upto(sys, 3)
        idem = [e for e in elems if is_idempotent(e)]
        for _ in range(10_000):
            s, t, u = rng.choice(elems), rng.choice(elems), rng.choice(elems)
            if mul(sys, mul(sys, s, t), u) != mul(sys, s, mul(sys, t, u)):
                bad.append(f"{name}: associativity")
            if mul(sys, mul(sys, s, star(s)), s) != s:
                bad.append(f"{name}: s s* s")
            if star(mul(sys, s, t)) != mul(sys, star(t), star(s)) or star(star(s)) != s:
                bad.append(f"{name}: involution")
            e, f = rng.choice(idem), rng.choice(idem)
            if mul(sys, e, f) != mul(sys, f, e):
                bad.append(f"{name}: idempotents commute")
            if leq(sys, e, f) != idempotent_leq_by_cases(sys, e, f):
                bad.append(f"{name}: order vs case analysis on {e}, {f}")
            if not is_idempotent(s) and leq(sys, e, s):
                bad.append(f"{name}: E*-unitary")
    record(5, "inverse semigroup laws on S1, S2 and the S4 window, 10^4 trials each", sorted(set(bad)), t0)


def _derived_cover(sys, rng, core):
    """Pieces of a complete expansion, some branches expanded deeper, up to depth 3."""
    pieces = expansion_idempotents(sys, core, 1)
    for _ in range(2):
        nxt = []
        for p in pieces:
            if rng.random() < 0.5 and is_regular(sys, p.core) and not p.core.is_empty:
                deeper = [mul(sys, mul(sys, _shift(sys, p.left), q), star(_shift(sys, p.left))) for q in expansion_idempotents(sys, p.core, 1)]
                nxt.extend(d for d in deeper if d != ZERO)
            else:
                nxt.append(p)
        pieces = nxt
    return pieces


def _shift(sys, word):
    from boolsys.semigroup import triple

    return triple(sys, word, sys.range(word), ())


def test_criterion_6_cover_machinery():
    t0, bad = time.perf_counter(), []
    rng = random.Random(6)
    systems = [make_s2()] + corpus(60, max_atoms=3, max_labels=2, seed=66)
    checked = 0
    for sys in systems:
        regular = [c for c in cores(sys) if is_regular(sys, c)]
        if not regular:
            continue
        candidates = idempotents_upto(sys, 4)
        for _ in range(4):
            core = rng.choice(regular)
            x = projection(sys, core)
            cover = _derived_cover(sys, rng, core)
            checked += 1
            if not isinstance(refine_cover(sys, x, cover), OrthogonalCover) or not is_cover(sys, x, cover, candidates):
                bad.append(f"cover of {core} rejected")
            dropped = rng.randrange(len(cover))
            sub = [z for i, z in enumerate(cover) if i != dropped]
            outcome = refine_cover(sys, x, sub)
            if not isinstance(outcome, NotACover) or is_cover(sys, x, sub, candidates):
                bad.append(f"strict sub-cover of {core} accepted")
                continue
            w = outcome.witness
            if w == ZERO or not leq(sys, w, x) or not all(orthogonal(sys, w, z) for z in sub):
                bad.append(f"bad witness {w}")
    if checked < 100:
        bad.append(f"only {checked} covers exercised")
    record(6, f"refine_cover against the depth-4 oracle on {checked} covers", bad, t0)


def test_criterion_7_closure_and_lattice():
    t0, bad = time.perf_counter(), []
    systems = corpus(240, max_atoms=4, max_labels=3, seed=77)
    for index, sys in enumerate(systems):
        elems = [e for e in sys.backend.elements() if not e.is_empty]
        for e in elems:
            c = hs_closure(sys, e).generator
            if c != oracle_closure(sys, e) or hs_closure(sys, c).generator != c or not (e.members <= c.members):
                bad.append(f"system {index}: closure of {e.sorted_members()}")
        for e, f in combinations(elems, 2):
            if e.members <= f.members and not hs_closure(sys, e).generator.members <= hs_closure(sys, f).generator.members:
                bad.append(f"system {index}: closure not monotone")
        want = sorted(oracle_hs_generators(sys), key=lambda g: (len(g.members), g.sorted_members()))
        if [i.generator for i in enumerate_hs_ideals(sys)] != want:
            bad.append(f"system {index}: lattice")
    if time.perf_counter() - t0 > 60:
        bad.append("over the 60 s budget")
    record(7, "closure laws and HS lattice against brute force on 240 systems", bad, t0)


def test_criterion_8_cycle_oracle():
    t0, bad = time.perf_counter(), []
    systems = corpus(240, max_atoms=3, max_labels=3, seed=88)
    with_cycle = 0
    for index, sys in enumerate(systems):
        found = find_cycle_no_exit(sys) is not None
        with_cycle += found
        if found != oracle_has_cycle_without_exit(sys):
            bad.append(f"system {index}")
    record(8, f"cycle search against the definition on 240 systems ({with_cycle} with cycles)", bad, t0)


def test_criterion_9_shift_presets():
    t0, bad = time.perf_counter(), []
    full_input, golden_input = parse_sft("01", [], 0), parse_sft("01", ["11"], 1)
    full, golden = from_sft(full_input), from_sft(golden_input)
    if not is_simple(full).simple or k_groups(full) != KGroups(ZERO_GROUP, ZERO_GROUP):
        bad.append("full shift is not O2")
    for name, shift_input, sys in (("full", full_input, full), ("golden", golden_input, golden)):
        if k_groups(sys) != graph_ktheory_oracle(build_graph(sys)):
            bad.append(f"{name}: oracle disagrees")
        if sft_simplicity_criterion(shift_input).simple != is_simple(sys).simple:
            bad.append(f"{name}: shift criterion disagrees with is_simple")
    if k_groups(golden) != KGroups(Z, Z):
        bad.append(f"golden mean K = ({k_groups(golden).k0}, {k_groups(golden).k1}), expected (Z, Z)")
    record(9, "shift presets: full 2-shift and golden mean", bad, t0)
