"""Seeded network generation and executable checks of the attractor bounds.

Two suites are provided. :func:`check_restriction_suite` replays, for one
coordinate, every step of the inductive argument behind the main bound:
the threshold partition, the clamped maps and the inequalities and
inclusions they must satisfy. :func:`check_theorem_suite` runs the
end-to-end statements (bound soundness, the corollary chain, uniqueness of
the attractor without positive circuits, ...) over batches of generated
networks.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from . import rng
from .bounds import corollary_bound, family_pfvs, mu, theorem_bound
from .circuits import minimum_pfvs
from .domain import IntervalDomain
from .errors import DDSError, RetriesExhausted
from .interaction import global_graph, local_scan, local_sign_arrays, threshold_partition
from .network import Network, RestrictionSpec, fixed_points, restrict_component
from .rules import BinOp, Num, Var, elaborate, NetworkSpecText
from .stg import ORACLE_LIMIT, attractors, attractors_oracle, build_stg, network_attractors

MODES = ("uniform", "rules", "no-positive-circuit", "no-dual-sign")
MAX_RETRIES = 2000


# -- shapes ------------------------------------------------------------------

Shape = tuple[tuple[int, int], ...]


def parse_shape(text: str) -> Shape:
    """``"2x3"`` -> ((0,1),(0,2)); a factor may also be ``lo..hi``."""
    out = []
    for part in text.strip().split("x"):
        part = part.strip()
        try:
            if ".." in part:
                lo, hi = part.split("..")
                out.append((int(lo), int(hi)))
            else:
                out.append((0, int(part) - 1))
        except ValueError:
            raise DDSError(f"bad shape factor {part!r} in {text!r}") from None
    IntervalDomain(tuple(a for a, _ in out), tuple(b for _, b in out))
    return tuple(out)


def format_shape(shape: Shape) -> str:
    return "x".join(str(b + 1) if a == 0 else f"{a}..{b}" for a, b in shape)


def shape_domain(shape: Shape) -> IntervalDomain:
    return IntervalDomain(tuple(a for a, _ in shape), tuple(b for _, b in shape))


def random_shape(key: int, max_states: int, n_range=(1, 6), max_size: int = 5, boolean: bool = False) -> Shape:
    """A random shape with at most ``max_states`` states."""
    s = rng.Stream(key)
    n = s.integer(*n_range)
    if boolean:
        return tuple((0, 1) for _ in range(n))
    sizes = []
    budget = max_states
    for i in range(n):
        left = n - i - 1
        cap = min(max_size, budget // (2**left))
        k = s.integer(2, max(2, cap))
        sizes.append(k)
        budget //= k
    return tuple((0, k - 1) for k in sizes)


# -- generation --------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorSpec:
    seed: int
    shape: Shape
    mode: str = "uniform"

    def __post_init__(self):
        if self.mode not in MODES:
            raise DDSError(f"unknown generation mode {self.mode!r}; expected one of {', '.join(MODES)}")
        object.__setattr__(self, "seed", int(self.seed) & rng.MASK)
        object.__setattr__(self, "shape", tuple((int(a), int(b)) for a, b in self.shape))

    @property
    def domain(self) -> IntervalDomain:
        return shape_domain(self.shape)

    @property
    def reference(self) -> str:
        return f"{self.seed}:{format_shape(self.shape)}:{self.mode}"

    def to_dict(self) -> dict:
        return {"seed": self.seed, "shape": format_shape(self.shape), "mode": self.mode}


def _uniform(key: int, dom: IntervalDomain) -> Network:
    draws = rng.Stream(key).below(dom.sizes, dom.cardinality)
    return Network(dom, draws + np.array(dom.lower))


def random_rules(key: int, dom: IntervalDomain):
    """Threshold-sum rules with one fixed sign per regulator.

    Each f_i is ``base + sum_k w_k * (x_jk >= theta_k)`` clamped into X_i, so
    every regulator acts monotonically on its target.
    """
    s = rng.Stream(key)
    names = [f"x{i}" for i in range(1, dom.n + 1)]
    exprs = []
    for i in range(dom.n):
        size_i = dom.sizes[i]
        r = s.integer(1, min(3, dom.n))
        e = Num(s.integer(dom.lower[i], dom.upper[i]))
        for j in s.choice(range(dom.n), r):
            theta = s.integer(dom.lower[j] + 1, dom.upper[j])
            weight = s.integer(1, size_i - 1) * (1 if s.integer(0, 1) else -1)
            e = BinOp("+", e, BinOp("*", Num(weight), BinOp(">=", Var(j, names[j]), Num(theta))))
        exprs.append(e)
    return names, exprs


def _rules(key: int, dom: IntervalDomain) -> Network:
    names, exprs = random_rules(key, dom)
    spec = NetworkSpecText(names, list(dom.lower), list(dom.upper), dict(enumerate(exprs)))
    net = elaborate(spec, clamp=True)
    return Network(dom, net.images)


def _accepts(mode: str, net: Network) -> bool:
    if mode == "no-positive-circuit":
        return not local_scan(net).family
    return not global_graph(net).has_dual_signs()


def generate(spec: GeneratorSpec, max_retries: int = MAX_RETRIES) -> Network:
    """Deterministic network for ``spec``.

    Constrained modes draw candidates alternately from the uniform and the
    rule generator (attempt ``a`` uses key ``derive(seed, 2, a)``) and keep
    the first one satisfying the constraint.
    """
    dom = spec.domain
    if spec.mode == "uniform":
        return _uniform(rng.derive(spec.seed, 0), dom)
    if spec.mode == "rules":
        return _rules(rng.derive(spec.seed, 1), dom)
    for attempt in range(max_retries):
        key = rng.derive(spec.seed, 2, attempt)
        net = _uniform(key, dom) if attempt % 2 == 0 else _rules(key, dom)
        if _accepts(spec.mode, net):
            return net
    raise RetriesExhausted(f"no {spec.mode} network found for {spec.reference} after {max_retries} attempts")


def batch(seed: int, count: int, shape: Shape, mode: str = "uniform") -> list[GeneratorSpec]:
    return [GeneratorSpec(rng.derive(seed, k), shape, mode) for k in range(count)]


# -- verdicts ----------------------------------------------------------------

LEMMAS = (
    "partition", "clamp-order", "local-subgraph", "threshold-subset", "clamped-off-circuit", "attractor-injection",
    "main", "corollary", "unique-attractor", "subgraph", "boolean-coincidence", "oracle", "fixed-point-bound",
)


@dataclass
class LemmaVerdict:
    lemma: str
    passed: bool
    spec: GeneratorSpec | None = None
    coord: int | None = None
    block: tuple[int, int] | None = None
    witness: dict | None = None

    @property
    def reference(self) -> str:
        ref = self.spec.reference if self.spec else "-"
        if self.coord is not None:
            ref += f":i={self.coord}"
        if self.block is not None:
            ref += f":Y={self.block[0]}..{self.block[1]}"
        return ref

    def log_line(self) -> str:
        seed = self.spec.seed if self.spec else "-"
        return f"{self.lemma} seed={seed} {'pass' if self.passed else 'FAIL'} {self.reference}"

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "passed": self.passed,
            "spec": self.spec.to_dict() if self.spec else None,
            "coord": self.coord,
            "block": list(self.block) if self.block else None,
            "witness": self.witness,
        }


# -- restriction suite -------------------------------------------------------

def _clamp_order(net: Network, clamped: Network) -> dict | None:
    """First counterexample to the clamp inequality, over all x, y and components."""
    for k in range(net.n):
        a = clamped.images[:, k]
        b = net.images[:, k]
        # every x below the max of a needs b(x) <= a(x); every y above the min needs a(y) <= b(y)
        bad_x = np.nonzero((a < a.max()) & (b > a))[0]
        bad_y = np.nonzero((a > a.min()) & (a > b))[0]
        if len(bad_x):
            x = int(bad_x[0])
            y = int(np.argmax(a))
            return {"component": k + 1, "x": list(net.domain.unrank(x)), "y": list(net.domain.unrank(y))}
        if len(bad_y):
            y = int(bad_y[0])
            x = int(np.argmin(a))
            return {"component": k + 1, "x": list(net.domain.unrank(x)), "y": list(net.domain.unrank(y))}
    return None


def _partition_witness(dom: IntervalDomain, i: int, doubled, blocks) -> dict | None:
    lo, hi = dom.lower[i - 1], dom.upper[i - 1]
    if len(blocks) != len(doubled) + 1:
        return {"blocks": blocks, "thresholds_doubled": list(doubled), "reason": "count"}
    if blocks[0][0] != lo or blocks[-1][1] != hi:
        return {"blocks": blocks, "reason": "cover"}
    for (a, b), (c, _) in zip(blocks, blocks[1:]):
        if c != b + 1:
            return {"blocks": blocks, "reason": "contiguity"}
        # maximality: some threshold separates consecutive blocks
        if not any(2 * b < d < 2 * c for d in doubled):
            return {"blocks": blocks, "reason": "maximality"}
    for a, b in blocks:
        if any(not (d < 2 * a or 2 * b < d) for d in doubled):
            return {"blocks": blocks, "reason": "threshold inside block"}
    return None


def check_restriction_suite(net: Network, i: int, spec: GeneratorSpec | None = None) -> list[LemmaVerdict]:
    """Partition X_i by T_i and check every clamped map F~ against F."""
    dom = net.domain
    scan = local_scan(net)
    doubled = scan.thresholds.doubled[i - 1]
    blocks = threshold_partition(dom, i, doubled)
    out = []
    w = _partition_witness(dom, i, doubled, blocks)
    out.append(LemmaVerdict("partition", w is None, spec, i, None, w))

    signs = local_sign_arrays(net)[0]
    attrs = network_attractors(net)
    for block in blocks:
        clamped = restrict_component(net, RestrictionSpec(i, *block))

        def verdict(lemma, witness):
            out.append(LemmaVerdict(lemma, witness is None, spec, i, block, witness))

        verdict("clamp-order", _clamp_order(net, clamped))

        csigns = local_sign_arrays(clamped)[0]
        bad = np.argwhere((csigns != 0) & (csigns != signs))
        if len(bad):
            p, ii, jj = (int(c) for c in bad[0])
            x, v = scan.pair(p)
            verdict("local-subgraph", {"x": list(x), "v": list(v), "edge": [jj + 1, int(csigns[p, ii, jj]), ii + 1]})
        else:
            verdict("local-subgraph", None)

        cscan = local_scan(clamped)
        extra = {
            str(k): sorted(set(cd) - set(d))
            for k, (cd, d) in enumerate(zip(cscan.thresholds.doubled, scan.thresholds.doubled), start=1)
            if not set(cd) <= set(d)
        }
        verdict("threshold-subset", extra or None)

        on_circuit = [s for s in cscan.family.supports if i in s]
        if on_circuit or cscan.thresholds.doubled[i - 1]:
            s = on_circuit[0] if on_circuit else None
            verdict("clamped-off-circuit", {"support": sorted(s) if s else None, "witness": cscan.family.witnesses[s].to_dict() if s else None})
        else:
            verdict("clamped-off-circuit", None)

        cattrs = network_attractors(clamped)
        col = dom.states_array()[:, i - 1]
        inside = (col >= block[0]) & (col <= block[1])
        meeting = [a for a in attrs if any(inside[k] for k in a)]
        chosen = []
        missing = None
        for a in meeting:
            sub = next((c for c in cattrs if c <= a), None)
            if sub is None:
                missing = a
                break
            chosen.append(sub)
        if missing is not None:
            verdict("attractor-injection", {"attractor": [list(dom.unrank(k)) for k in sorted(missing)], "reason": "no contained attractor"})
        elif len(set(chosen)) != len(chosen) or len(meeting) > len(cattrs):
            verdict("attractor-injection", {"reason": "contained attractors not distinct"})
        else:
            verdict("attractor-injection", None)
    return out


def check_all_restrictions(net: Network, spec: GeneratorSpec | None = None) -> list[LemmaVerdict]:
    out = []
    for i in range(1, net.n + 1):
        out.extend(check_restriction_suite(net, i, spec))
    return out


# -- theorem suite -----------------------------------------------------------

def _check_main(net: Network) -> dict | None:
    pfvs = family_pfvs(net)
    rep = theorem_bound(net, pfvs)
    na = len(network_attractors(net))
    if not rep.valid or na > rep.value:
        return {"pfvs": sorted(pfvs), "bound": rep.value, "valid": rep.valid, "attractors": na}
    return None


def _check_corollary(net: Network) -> dict | None:
    pfvs = family_pfvs(net)
    main = theorem_bound(net, pfvs).value
    cor = corollary_bound(net.domain, pfvs).value
    na = len(network_attractors(net))
    nf = len(fixed_points(net))
    g = global_graph(net)
    mu_val = mu(g, net.domain).value
    if not (nf <= na <= main <= cor) or na > mu_val:
        return {"fixed_points": nf, "attractors": na, "bound_main": main, "bound_corollary": cor, "bound_mu": mu_val}
    return None


def _check_unique_attractor(net: Network) -> dict | None:
    na = len(network_attractors(net))
    return None if na == 1 else {"attractors": na}


def _check_subgraph(net: Network) -> dict | None:
    thr, unthr = local_sign_arrays(net)
    bad = np.argwhere((thr != 0) & (thr != unthr))
    if len(bad):
        p, i, j = (int(c) for c in bad[0])
        return {"pair": p, "edge": [j + 1, int(thr[p, i, j]), i + 1], "against": "unthresholded"}
    g = global_graph(net)
    for s in (-1, 1):
        present = np.zeros((net.n, net.n), dtype=bool)
        for j, sign, i in g.edges:
            if sign == s:
                present[i - 1, j - 1] = True
        bad = np.argwhere((thr == s) & ~present)
        if len(bad):
            p, i, j = (int(c) for c in bad[0])
            return {"pair": p, "edge": [j + 1, s, i + 1], "against": "global"}
    return None


def _check_boolean(net: Network) -> dict | None:
    thr, unthr = local_sign_arrays(net)
    bad = np.argwhere(thr != unthr)
    if len(bad):
        p, i, j = (int(c) for c in bad[0])
        return {"pair": p, "i": i + 1, "j": j + 1}
    return None


def _check_oracle(net: Network) -> dict | None:
    g = build_stg(net)
    a, b = attractors(g), attractors_oracle(g)
    if set(a) != set(b):
        return {"tarjan": [sorted(x) for x in a], "oracle": [sorted(x) for x in b]}
    return None


def _check_fixed_point_bound(net: Network) -> dict | None:
    pfvs = minimum_pfvs(global_graph(net, thresholded=False))
    nf = len(fixed_points(net))
    if nf > 2 ** len(pfvs):
        return {"fixed_points": nf, "pfvs": sorted(pfvs)}
    return None


THEOREM_CHECKS: dict[str, Callable[[Network], dict | None]] = {
    "main": _check_main,
    "corollary": _check_corollary,
    "unique-attractor": _check_unique_attractor,
    "subgraph": _check_subgraph,
    "boolean-coincidence": _check_boolean,
    "oracle": _check_oracle,
    "fixed-point-bound": _check_fixed_point_bound,
}


def applicable_checks(net: Network, oracle_limit: int = ORACLE_LIMIT) -> list[str]:
    names = ["main", "corollary", "subgraph"]
    if not local_scan(net).family:
        names.append("unique-attractor")
    if net.domain.is_boolean:
        names.append("boolean-coincidence")
        if not global_graph(net, thresholded=False).has_dual_signs():
            names.append("fixed-point-bound")
    if net.domain.cardinality <= oracle_limit:
        names.append("oracle")
    return names


def shrink(spec: GeneratorSpec, failing: Callable[[Network], bool], max_steps: int = 64) -> GeneratorSpec:
    """Greedily drop coordinates and shrink intervals while ``failing`` holds."""
    current = spec
    for _ in range(max_steps):
        shape = current.shape
        candidates = []
        if len(shape) > 1:
            candidates += [shape[:k] + shape[k + 1 :] for k in range(len(shape))]
        candidates += [
            shape[:k] + ((a, b - 1),) + shape[k + 1 :] for k, (a, b) in enumerate(shape) if b - a > 1
        ]
        for cand in candidates:
            trial = replace(current, shape=cand)
            try:
                if failing(generate(trial)):
                    current = trial
                    break
            except RetriesExhausted:
                continue
        else:
            return current
    return current


def check_network(spec: GeneratorSpec, lemmas: bool = False, oracle_limit: int = ORACLE_LIMIT) -> list[LemmaVerdict]:
    """All applicable theorem checks (and optionally the restriction suite) for one spec."""
    net = generate(spec)
    out = []
    for name in applicable_checks(net, oracle_limit):
        check = THEOREM_CHECKS[name]
        witness = check(net)
        if witness is not None:
            small = shrink(spec, lambda m, c=check: c(m) is not None)
            witness = dict(witness, shrunk=small.to_dict())
        out.append(LemmaVerdict(name, witness is None, spec, witness=witness))
    if lemmas:
        out.extend(check_all_restrictions(net, spec))
    return out


def _check_network_args(args):
    return check_network(*args)


def check_theorem_suite(
    specs: Iterable[GeneratorSpec], lemmas: bool = False, workers: int = 1, oracle_limit: int = ORACLE_LIMIT
) -> list[LemmaVerdict]:
    """Theorem checks over a batch; verdicts are ordered by seed."""
    specs = sorted(specs, key=lambda s: (s.seed, s.shape, s.mode))
    args = [(s, lemmas, oracle_limit) for s in specs]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_check_network_args, args, chunksize=8))
    else:
        results = [_check_network_args(a) for a in args]
    return [v for group in results for v in group]


def verdict_log(verdicts: Sequence[LemmaVerdict]) -> str:
    header = f"# prng {rng.ALGORITHM}\n"
    return header + "".join(v.log_line() + "\n" for v in verdicts)


def failure_dump(verdicts: Sequence[LemmaVerdict]) -> str:
    failed = [v.to_dict() for v in verdicts if not v.passed]
    return json.dumps({"prng": rng.ALGORITHM, "failures": failed}, indent=2) + "\n"
