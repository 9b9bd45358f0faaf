"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import functools
import os
import subprocess
import sys
import time
from dataclasses import dataclass

import numpy as np

from conftest import brute_min_hitting, f_copy, f_thr, nx_positive_supports
from ddsbound import IntervalDomain, Network, analyze, rng
from ddsbound.bounds import corollary_bound, family_pfvs, theorem_bound
from ddsbound.circuits import covers_positive_circuits, is_pfvs, minimum_pfvs
from ddsbound.graphs import SignedDigraph
from ddsbound.interaction import global_graph, local_scan
from ddsbound.network import fixed_points
from ddsbound.rules import render
from ddsbound.stg import attractors_oracle, build_stg, network_attractors
from ddsbound.verification import GeneratorSpec, check_all_restrictions, generate, random_shape

ORACLE_MAX = 4096


def report(capsys, number, title, ok, detail):
    with capsys.disabled():
        print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'} {title}: {detail}")


@dataclass(frozen=True)
class Record:
    spec: GeneratorSpec
    states: int
    attractors: int
    fixed_points: int
    bound_main: int | None
    main_valid: bool
    bound_corollary: int
    oracle_agrees: bool | None


def record(spec: GeneratorSpec) -> Record:
    net = generate(spec)
    pfvs = family_pfvs(net)
    main = theorem_bound(net, pfvs)
    attrs = network_attractors(net)
    agrees = None
    if net.domain.cardinality <= ORACLE_MAX:
        agrees = set(attractors_oracle(build_stg(net))) == set(attrs)
    return Record(
        spec,
        net.domain.cardinality,
        len(attrs),
        len(fixed_points(net)),
        main.value,
        main.valid,
        corollary_bound(net.domain, pfvs).value,
        agrees,
    )


def boolean_specs():
    return [GeneratorSpec(rng.derive(1, k), ((0, 1),) * (2 + k % 7)) for k in range(1000)]


def multivalued_specs():
    out = []
    for k in range(300):
        shape = random_shape(rng.derive(2, k), ORACLE_MAX, (2, 6), 5)
        out.append(GeneratorSpec(rng.derive(3, k), shape, "uniform" if k % 2 == 0 else "rules"))
    return out


def no_circuit_specs():
    return [
        GeneratorSpec(rng.derive(5, k), random_shape(rng.derive(4, k), 256, (2, 4), 4), "no-positive-circuit")
        for k in range(200)
    ]


def no_dual_specs():
    return [GeneratorSpec(rng.derive(8, k), ((0, 1),) * (2 + k % 7), "no-dual-sign") for k in range(200)]


def lemma_specs():
    out = []
    for k in range(200):
        shape = random_shape(rng.derive(6, k), 1024, (1, 5), 5)
        out.append(GeneratorSpec(rng.derive(7, k), shape, "uniform" if k % 2 == 0 else "rules"))
    return out


CORPORA = {
    "boolean": boolean_specs,
    "multivalued": multivalued_specs,
    "no-positive-circuit": no_circuit_specs,
    "no-dual-sign": no_dual_specs,
    "lemma": lemma_specs,
}


@functools.lru_cache(maxsize=None)
def corpus(name):
    start = time.perf_counter()
    records = [record(s) for s in CORPORA[name]()]
    return records, time.perf_counter() - start


def all_records():
    return [r for name in CORPORA for r in corpus(name)[0]]


# -- 1 -----------------------------------------------------------------------

def test_criterion_1_main_bound_soundness(capsys):
    boolean, t1 = corpus("boolean")
    multi, t2 = corpus("multivalued")
    records = boolean + multi
    bad = [r for r in records if not r.main_valid or r.attractors > r.bound_main]
    elapsed = t1 + t2
    ok = not bad and len(boolean) == 1000 and len(multi) == 300 and elapsed < 120
    assert {len(r.spec.shape) for r in boolean} == set(range(2, 9))
    assert max(r.states for r in multi) <= ORACLE_MAX
    report(capsys, 1, "main-bound soundness", ok,
           f"{len(boolean)} Boolean + {len(multi)} multi-valued nets, {len(bad)} violations, {elapsed:.1f}s")
    assert not bad, [r.spec.reference for r in bad[:5]]
    assert elapsed < 120


# -- 2 -----------------------------------------------------------------------

def test_criterion_2_unique_attractor_without_positive_circuits(capsys):
    records, _ = corpus("no-positive-circuit")
    empty = all(not local_scan(generate(r.spec)).family for r in records)
    bad = [r for r in records if r.attractors != 1]
    ok = empty and not bad and len(records) == 200
    report(capsys, 2, "unique attractor without functional positive circuits", ok,
           f"{len(records)} constrained nets, {len(bad)} with more than one attractor")
    assert empty
    assert not bad, [r.spec.reference for r in bad[:5]]


# -- 3 -----------------------------------------------------------------------

def _identity(sizes):
    return Network.from_function(IntervalDomain.from_sizes(sizes), lambda x: x)


def test_criterion_3_tightness(capsys):
    cases = [(f"identity on {{0,1}}^{n}", _identity((2,) * n)) for n in range(1, 5)]
    cases.append(("identity on {0..2}^2", _identity((3, 3))))
    cases.append(("copy map", f_copy()))
    rows, ok = [], True
    for name, net in cases:
        rep = analyze(net)
        expected = 2 if name == "copy map" else net.domain.cardinality
        tight = rep.bound_main == rep.attractor_count == expected
        ok &= tight
        rows.append(f"{name} {rep.bound_main}/{rep.attractor_count}")
    report(capsys, 3, "tightness witnesses", ok, "; ".join(rows))
    assert ok


# -- 4 -----------------------------------------------------------------------

def test_criterion_4_hierarchy_chain(capsys):
    records = all_records()
    bad = [
        r for r in records
        if not (r.fixed_points <= r.attractors <= r.bound_main <= r.bound_corollary)
    ]
    rep = analyze(f_thr())
    thr_main = rep.bound_main
    thr_unthr = rep.bound("unthresholded").value
    thr_ok = (thr_unthr, thr_main) == (3, 1) and thr_unthr >= thr_main
    ok = not bad and thr_ok
    report(capsys, 4, "hierarchy chain", ok,
           f"{len(records)} nets, {len(bad)} chain violations; threshold fixture unthresholded {thr_unthr} vs thresholded {thr_main}")
    assert not bad, [r.spec.reference for r in bad[:5]]
    assert thr_ok


# -- 5 -----------------------------------------------------------------------

def test_criterion_5_boolean_fixed_point_bound(capsys):
    bad, checked = [], 0
    for spec in no_dual_specs():
        net = generate(spec)
        g = global_graph(net)
        assert not g.has_dual_signs()
        pfvs = minimum_pfvs(g)
        checked += 1
        if len(fixed_points(net)) > 2 ** len(pfvs):
            bad.append(spec.reference)
    ok = not bad and checked == 200
    report(capsys, 5, "fixed points at most 2^|I| without dual-sign edges", ok,
           f"{checked} Boolean nets, {len(bad)} violations")
    assert not bad, bad[:5]


# -- 6 -----------------------------------------------------------------------

def test_criterion_6_restriction_lemmas(capsys):
    specs = lemma_specs()
    failed, total, block_mismatch = [], 0, []
    for spec in specs:
        net = generate(spec)
        assert net.domain.cardinality <= 1024
        verdicts = check_all_restrictions(net, spec)
        total += len(verdicts)
        failed += [v.log_line() for v in verdicts if not v.passed]
        doubled = local_scan(net).thresholds.doubled
        for i in range(1, net.n + 1):
            blocks = {v.block for v in verdicts if v.coord == i and v.block is not None}
            if len(blocks) != len(doubled[i - 1]) + 1:
                block_mismatch.append(f"{spec.reference}:i={i}")
        lemmas = {v.lemma for v in verdicts}
        assert lemmas == {"partition", "clamp-order", "local-subgraph", "threshold-subset", "clamped-off-circuit", "attractor-injection"}
    ok = not failed and not block_mismatch
    report(capsys, 6, "restriction lemma suite", ok,
           f"{len(specs)} nets, {total} verdicts, {len(failed)} failed, {len(block_mismatch)} block-count mismatches")
    assert not failed, failed[:5]
    assert not block_mismatch, block_mismatch[:5]


# -- 7 -----------------------------------------------------------------------

def test_criterion_7_oracle_equivalence(capsys):
    records = [r for r in all_records() if r.states <= ORACLE_MAX]
    bad = [r for r in records if not r.oracle_agrees]
    ok = not bad and len(records) == len(all_records())
    report(capsys, 7, "terminal components equal minimal forward closures", ok,
           f"{len(records)} nets with |X| <= {ORACLE_MAX}, {len(bad)} disagreements")
    assert not bad, [r.spec.reference for r in bad[:5]]


# -- 8 -----------------------------------------------------------------------

def random_signed_digraph(seed):
    gen = np.random.default_rng(seed)
    n = int(gen.integers(1, 11))
    p = float(gen.uniform(0.08, 0.3))
    edges = set()
    for j in range(1, n + 1):
        for i in range(1, n + 1):
            if gen.random() < p:
                edges.add((j, int(gen.choice((-1, 1))), i))
                if gen.random() < 0.15:
                    edges.add((j, -1, i))
                    edges.add((j, 1, i))
    return SignedDigraph(n, frozenset(edges))


def test_criterion_8_combinatorial_oracles(capsys):
    mismatched, disagree, sizes = [], [], []
    for seed in range(200):
        g = random_signed_digraph(seed)
        supports = nx_positive_supports(g)
        best = brute_min_hitting(supports, g.n)
        found = minimum_pfvs(g)
        sizes.append(g.n)
        if tuple(sorted(found)) != best[2]:
            mismatched.append(seed)
        gen = np.random.default_rng(10_000 + seed)
        subsets = [set(found), set(found) - {min(found)} if found else set()]
        subsets += [{v for v in range(1, g.n + 1) if gen.random() < 0.4} for _ in range(20)]
        for s in subsets:
            direct = all(s & sup for sup in supports)
            if not (is_pfvs(g, s) == covers_positive_circuits(g, s) == direct):
                disagree.append((seed, sorted(s)))
    ok = not mismatched and not disagree and max(sizes) == 10
    report(capsys, 8, "minimum PFVS and deletion form against exhaustive search", ok,
           f"200 signed digraphs (n <= {max(sizes)}), {len(mismatched)} optimum mismatches, {len(disagree)} form disagreements")
    assert not mismatched, mismatched[:5]
    assert not disagree, disagree[:5]


# -- 9 -----------------------------------------------------------------------

def _cli(args, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    proc = subprocess.run([sys.executable, "-m", "ddsbound", *args], capture_output=True, env=env, check=False)
    return proc.returncode, proc.stdout


def test_criterion_9_determinism(capsys, tmp_path):
    net_file = tmp_path / "net.dds"
    net_file.write_text(render(generate(GeneratorSpec(99, ((0, 2), (0, 1), (0, 3)), "rules"))))
    runs = []
    for hashseed in (0, 1):
        js = tmp_path / f"a{hashseed}.json"
        log = tmp_path / f"v{hashseed}.log"
        a = _cli(["analyze", str(net_file), "--json", str(js)], hashseed)
        v = _cli(["verify", "--seed", "7", "--count", "25", "--shape", "3x2x2", "--mode", "rules",
                  "--lemmas", "--log", str(log)], hashseed)
        runs.append((a, v, js.read_bytes(), log.read_bytes()))
    same = runs[0] == runs[1]
    codes = all(r[0][0] == 0 and r[1][0] == 0 for r in runs)
    in_process = analyze(generate(GeneratorSpec(99, ((0, 2), (0, 1), (0, 3)), "rules"))).to_json().encode()
    ok = same and codes and in_process == runs[0][2]
    report(capsys, 9, "byte-identical analyze and verify output", ok,
           f"2 processes with different hash seeds, analyze {len(runs[0][2])} bytes, verify log {len(runs[0][3])} bytes")
    assert codes
    assert same
    assert in_process == runs[0][2]
