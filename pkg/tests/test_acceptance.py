"""End-to-end acceptance checks over the default corpus.

Each test records one PASS/FAIL line (shown in the terminal summary) before
asserting, so a failing criterion still reports its measured values.
The default verification run is executed twice: once through the library
for the row checks and once through the CLI for the determinism check.
"""

import time
from collections import defaultdict

import numpy as np
import pytest

import oracles
from acceptance_log import record
from pgi import build_group, cli, invariants, named_spec
from pgi.errors import HypothesisError
from pgi.families import FamilySpec, cyclic_spec, quaternion_spec
from pgi.lattice import cyclic_subgroup, normal_closure, normalizer
from pgi.recognizers import find_splitting_element, is_generalized_quaternion, kummer_valuation, verify_aut_b_lemma
from pgi.verification import CorpusConfig, build_corpus, run_verification
from pgi.verification.suites import REMARK_GROUP

FULL_RUN_LIMIT = 15 * 60
PROP_LIMIT = 5 * 60


@pytest.fixture(scope="module")
def default_run():
    cfg = CorpusConfig()
    t0 = time.perf_counter()
    rep = run_verification(("all",), cfg)
    elapsed = time.perf_counter() - t0
    corpus = build_corpus(cfg)
    by_claim = defaultdict(list)
    for r in rep.rows:
        if r.group_id != "coverage":
            by_claim[r.claim_id].append(r)
    return rep, elapsed, corpus, by_claim


def test_every_claim_exercised(default_run):
    rep = default_run[0]
    idle = [r.claim_id for r in rep.rows if r.group_id == "coverage" and r.status != "pass"]
    assert idle == []


def _status(rows):
    out = {"pass": 0, "fail": 0, "skip": 0}
    for r in rows:
        out[r.status] += 1
    return out


def _fails(rows):
    return [f"{r.group_id}: {r.witness}" for r in rows if r.status == "fail"][:3]


def test_criterion_01_a5_values():
    t0 = time.perf_counter()
    vals = invariants(build_group(named_spec("A5")))
    dt = time.perf_counter() - t0
    got = (vals["mni"].value, vals["mni_star"].value)
    ok = got == (3, 2) and dt < 5
    assert record(1, ok, f"A5 mni={got[0]} mni*={got[1]} (want 3, 2) in {dt:.2f} s (< 5 s)")


def test_criterion_02_a4_witness():
    t0 = time.perf_counter()
    G = build_group(named_spec("A4"))
    g = G.labels.index("(0 1)(2 3)")
    C = cyclic_subgroup(G, g)
    index = G.order // normalizer(C).order
    closure_index = normal_closure(G, C).order // C.order
    dt = time.perf_counter() - t0
    mul = oracles.table(G)
    h = frozenset(C.elements.tolist())
    oracle_index = len(mul) // len(oracles.normalizer(mul, h))
    ok = index == oracle_index == 3 and closure_index == 2 and dt < 1
    assert record(2, ok, f"|A4 : N(<(0 1)(2 3)>)|={index} (oracle {oracle_index}) > "
                         f"|<g>^A4 : <g>|={closure_index} in {dt:.3f} s (< 1 s)")


def test_criterion_03_mni_equals_mni_star(default_run):
    rep, elapsed, _, by_claim = default_run
    rows = by_claim["mni_equals_mni_star"]
    groups = {r.group_id for r in rows if r.status != "skip"}
    st = _status(rows)
    ok = len(groups) >= 80 and st["fail"] == 0 and elapsed < PROP_LIMIT
    assert record(3, ok, f"mni = mni* on {len(groups)} non-Dedekind p-groups (>= 80), {st['fail']} mismatches, "
                         f"whole run {elapsed:.0f} s (< {PROP_LIMIT} s) {_fails(rows)}")


def test_criterion_04_sharpness(default_run):
    _, _, _, by_claim = default_run
    pairs = [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)]
    status = {r.group_id: r.status for r in by_claim["sharpness"]}
    seen = {pk: status.get(FamilySpec("sharpness_example", p=pk[0], k=pk[1]).group_id) for pk in pairs}
    # direct recomputation for the two smallest pairs
    direct = []
    for p, k in [(2, 1), (3, 1)]:
        G = build_group(FamilySpec("sharpness_example", p=p, k=k))
        v = {key: x.value for key, x in invariants(G).items()}
        direct.append(G.order == p ** (2 * k + 2) and set(v.values()) == {p ** k})
    ok = all(s == "pass" for s in seen.values()) and all(direct)
    assert record(4, ok, f"sharpness rows {seen}; direct recomputation {direct}")


def test_criterion_05_theorem_a_with_mci_star(default_run):
    _, _, corpus, by_claim = default_run
    rows = [r for r in by_claim["order_bound_odd"] if "(mci_star=" in r.expected]
    skipped_abelian = {r.group_id for r in by_claim["order_bound_odd"] if r.status == "skip"}
    odd = {e.group_id for e in corpus if e.prime not in (None, 2)}
    checked = {r.group_id for r in rows}
    st = _status(rows)
    ok = st["fail"] == 0 and checked and checked | skipped_abelian == odd
    assert record(5, ok, f"|G| <= p^(2 log_p mci* + 2) on {len(checked)} non-abelian odd-p groups "
                         f"({len(skipped_abelian)} abelian skipped), {st['fail']} violations {_fails(rows)}")


def test_criterion_06_f1_closed_forms(default_run):
    _, _, corpus, by_claim = default_run
    claims = ("f1_mni", "f1_mni_star", "f1_mci_star")
    rows = [r for c in claims for r in by_claim[c]]
    evaluated = {r.group_id for r in rows if r.status == "pass" or r.status == "fail"}
    members = [e for e in corpus if e.spec.kind == "f1"]
    dedekind = {r.group_id for r in by_claim["f1_mni"] if r.status == "skip"}
    st = _status(rows)
    covered = evaluated | dedekind == {e.group_id for e in members}
    ok = st["fail"] == 0 and covered and st["pass"] == 3 * len(evaluated)
    assert record(6, ok, f"F1 closed forms on {len(evaluated)} non-Dedekind members ({len(dedekind)} Dedekind), "
                         f"{st['fail']} mismatches {_fails(rows)}")


def test_criterion_07_f2_closed_forms_and_small_n(default_run):
    _, _, corpus, by_claim = default_run
    rows = [r for c in ("f2_mni", "f2_mni_star", "f2_mci_star") for r in by_claim[c] if r.status != "skip"]
    big = {e.group_id for e in corpus if e.spec.kind == "f2" and e.spec.params["n"] >= 3}
    covered = {r.group_id for r in by_claim["f2_mni"] if r.status == "pass"}
    remark_id = FamilySpec("f2", **REMARK_GROUP).group_id
    remark_rows = [r for r in by_claim["f2_small_n_exception"] if r.group_id == remark_id]
    G = build_group(FamilySpec("f2", **REMARK_GROUP))
    direct = invariants(G)["mni_star"].value
    st = _status(rows)
    ok = (st["fail"] == 0 and covered == big and len(remark_rows) == 1 and remark_rows[0].status == "pass"
          and G.order == 16 and direct == 2)
    assert record(7, ok, f"F2 n >= 3: {len(covered)} members, {st['fail']} mismatches; order-{G.order} n=2 member "
                         f"mni*={direct} vs closed form 4 (expected mismatch observed: "
                         f"{bool(remark_rows) and remark_rows[0].status == 'pass'})")


def test_criterion_08_mci_star_one_only_quaternion(default_run):
    _, _, corpus, by_claim = default_run
    rows = by_claim["mci_star_one_iff_quaternion"]
    specs = {e.group_id: e.spec for e in corpus}
    ones = [r.group_id for r in rows if r.computed == "mci*=1"]
    orders = set()
    all_quaternion = True
    for gid in ones:
        G = build_group(specs[gid])
        n = is_generalized_quaternion(G)
        all_quaternion &= n is not None and n >= 4
        orders.add(G.order)
    named = {f"Q{2 ** n}": quaternion_spec(n).group_id for n in (4, 5, 6)}
    named_ok = all(gid in ones for gid in named.values())
    st = _status(rows)
    ok = st["fail"] == 0 and all_quaternion and orders == {16, 32, 64} and named_ok
    assert record(8, ok, f"mci* = 1 on {len(ones)} of {len(rows)} non-Dedekind p-groups, all generalised "
                         f"quaternion of orders {sorted(orders)} (want [16, 32, 64]); Q16/Q32/Q64 hit: {named_ok}")


def test_criterion_09_blackburn(default_run):
    _, _, corpus, by_claim = default_run
    primes = {e.group_id: e.prime for e in corpus}
    order_rows = by_claim["blackburn_r_order"]
    type_rows = by_claim["blackburn_type"]
    nontrivial = {r.group_id for r in order_rows if r.computed != "R(G)=1" and r.status != "skip"}
    typed = {r.group_id for r in type_rows if r.status == "pass"}
    required = {named_spec(x).group_id for x in ("Q8xC4", "Q8xQ8", "Q16", "Q32")}
    odd_rows = [r for r in order_rows if primes.get(r.group_id) not in (None, 2) and r.status != "skip"]
    odd_trivial = all(r.computed == "R(G)=1" for r in odd_rows)
    st = _status(order_rows + type_rows + by_claim["r_cyclic_agrees"])
    ok = (st["fail"] == 0 and nontrivial == typed and required <= nontrivial and odd_trivial and odd_rows
          and all(primes[g] == 2 for g in nontrivial))
    assert record(9, ok, f"R(G) != 1 on {len(nontrivial)} 2-groups, all |R|=2 and typed R1/R2/R3, required four "
                         f"present: {required <= nontrivial}; R(G)=1 on all {len(odd_rows)} odd-p groups: "
                         f"{odd_trivial}; {st['fail']} failures")


def test_criterion_10_kummer(default_run):
    _, _, _, by_claim = default_run
    t0 = time.perf_counter()
    checked = bad = 0
    for p in (2, 3, 5):
        for m in range(1, 6):
            N = p ** m
            for i in range(1, N + 1):
                v = kummer_valuation(p, m, i)
                checked += 1
                if v != oracles.carries(p, i, N - i) or v != oracles.binomial_valuation(p, N, i):
                    bad += 1
    dt = time.perf_counter() - t0
    st = _status(by_claim["binomial_valuation"])
    ok = bad == 0 and st["fail"] == 0 and st["pass"] == 15 and dt < 10
    assert record(10, ok, f"{checked} valuations vs carries and exact binomials, {bad} failures, "
                          f"{st['pass']} report rows pass, {dt:.2f} s (< 10 s)")


def test_criterion_11_splitting(default_run):
    _, _, corpus, by_claim = default_run
    rows = by_claim["splitting_element"]
    scanned = {e.group_id for e in corpus if e.prime not in (None, 2) and e.order <= 3 ** 5}
    reported = {r.group_id for r in rows}
    st = _status(rows)
    G = build_group(cyclic_spec(27))
    g = int(np.flatnonzero(G.elem_order == 27)[0])
    try:
        find_splitting_element(G, cyclic_subgroup(G, G.power(g, 3)), g, 3)
        raised = False
    except HypothesisError:
        raised = True
    remark = [r.status for r in by_claim["splitting_needs_t_le_s"]]
    ok = st["fail"] == 0 and st["pass"] > 0 and reported == scanned and raised and remark == ["pass"]
    assert record(11, ok, f"splitting element found in {st['pass']} odd-p groups of order <= 243 "
                          f"({st['skip']} without configurations), {st['fail']} failures; cyclic t > s raises: "
                          f"{raised}, report row {remark}")


def test_criterion_12_aut_b():
    parts, ok = [], True
    for p in (3, 5):
        t0 = time.perf_counter()
        rep = verify_aut_b_lemma(p, 2, 1)
        dt = time.perf_counter() - t0
        want = sorted([p ** (2 - 1), p ** 1], reverse=True)
        inv_ok = any(r.computed == f"invariants {want}" and r.status == "pass" for r in rep.rows)
        ok &= rep.ok and inv_ok and dt < 60
        parts.append(f"(p={p},n=2,m=1) {len(rep)} rows ok={rep.ok}, Q invariants {want}: {inv_ok}, {dt:.1f} s")
    assert record(12, ok, "; ".join(parts) + " (< 60 s each)")


def test_criterion_13_squares_and_quotients(default_run):
    _, _, _, by_claim = default_run
    claims = ("outside_squares", "outside_squares_in_omega1", "outside_squares_both_occur", "mci_star_quotient")
    counts = {c: _status(by_claim[c]) for c in claims}
    ok = all(v["fail"] == 0 and v["pass"] > 0 for v in counts.values())
    summary = ", ".join(f"{c} {v['pass']}/{v['fail']}" for c, v in counts.items())
    fails = [f for c in claims for f in _fails(by_claim[c])]
    assert record(13, ok, f"pass/fail {summary} {fails}")


def test_criterion_14_constancy_and_k1(default_run):
    _, _, corpus, by_claim = default_run
    const = _status(by_claim["invariants_constant_in_n"])
    k1_rows = by_claim["k1_groups_in_family_one"]
    expected = {e.group_id for e in corpus if e.prime == 2
                and ("maximal_class" in e.roles or "k1_cyclic_times_two" in e.roles)}
    k1 = _status(k1_rows)
    ok = (const["fail"] == 0 and const["pass"] > 0 and k1["fail"] == 0
          and {r.group_id for r in k1_rows if r.status == "pass"} == expected)
    assert record(14, ok, f"{const['pass']} parameter shapes constant in n ({const['fail']} not, {const['skip']} "
                          f"with one n); {k1['pass']} of {len(expected)} k = 1 2-groups recognised in F1 "
                          f"{_fails(by_claim['invariants_constant_in_n'] + k1_rows)}")


def test_criterion_15_determinism(default_run, tmp_path, capsys):
    rep, first, _, _ = default_run
    out = tmp_path / "second.tsv"
    t0 = time.perf_counter()
    code = cli.main(["verify", "--suite", "all", "--out", str(out)])
    second = time.perf_counter() - t0
    capsys.readouterr()
    same = out.read_text(encoding="utf-8") == rep.to_tsv()
    ok = code == 0 and same and first < FULL_RUN_LIMIT and second < FULL_RUN_LIMIT
    c = rep.counts()
    assert record(15, ok, f"two runs identical: {same} ({len(rep)} rows, pass={c['pass']} fail={c['fail']} "
                          f"skip={c['skip']}); run times {first:.0f} s and {second:.0f} s (< {FULL_RUN_LIMIT} s); "
                          f"exit {code}")
