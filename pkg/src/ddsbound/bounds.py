"""Upper bounds on the number of attractors, and the full analysis pipeline."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Iterable

from .circuits import CircuitFamily, is_pfvs, min_hitting_set, minimum_pfvs
from .domain import IntervalDomain, State
from .errors import DDSError, StateError
from .graphs import SignedDigraph
from .interaction import ThresholdSet, global_graph, local_scan
from .network import Network, fixed_points
from .stg import network_attractors


@dataclass(frozen=True)
class BoundReport:
    """A bound value together with the vertex set it was computed for.

    ``value`` is None when ``valid`` is False, i.e. the vertex set failed
    the positive-feedback check it was meant to satisfy.
    """

    kind: str
    pfvs: tuple[int, ...]
    factors: tuple[int, ...]
    value: int | None
    valid: bool
    graph: str = ""

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "graph": self.graph,
            "pfvs": list(self.pfvs),
            "factors": list(self.factors),
            "value": self.value,
            "valid": self.valid,
        }


def _vertex_tuple(n: int, vertices: Iterable[int]) -> tuple[int, ...]:
    out = tuple(sorted({int(v) for v in vertices}))
    if any(not 1 <= v <= n for v in out):
        raise StateError(f"vertex set {list(out)} is not inside 1..{n}")
    return out


def hits_every_local_graph(scan, vertices) -> bool:
    """True iff ``vertices`` meets every positive circuit of every local graph of the scan."""
    verts = set(vertices)
    return all(verts & s for s in scan.family.supports)


def theorem_bound(net: Network, vertices: Iterable[int], thresholded: bool = True) -> BoundReport:
    """``prod_{i in I} (|T_i| + 1)``, after checking I against every local graph."""
    verts = _vertex_tuple(net.n, vertices)
    scan = local_scan(net, thresholded)
    valid = hits_every_local_graph(scan, verts)
    factors = tuple(scan.thresholds.size(i) + 1 for i in verts)
    return BoundReport(
        "main",
        verts,
        factors,
        math.prod(factors) if valid else None,
        valid,
        "local" if thresholded else "local-unthresholded",
    )


def corollary_bound(domain: IntervalDomain, vertices: Iterable[int], graph: SignedDigraph | None = None) -> BoundReport:
    """``prod_{i in I} |X_i|``; when ``graph`` is given, I is checked as its PFVS."""
    verts = _vertex_tuple(domain.n, vertices)
    valid = graph is None or is_pfvs(graph, verts)
    factors = tuple(domain.sizes[i - 1] for i in verts)
    return BoundReport("corollary", verts, factors, math.prod(factors) if valid else None, valid, "global" if graph else "unchecked")


def mu(g: SignedDigraph, domain: IntervalDomain) -> BoundReport:
    """Smallest ``prod_{i in I} |X_i|`` over positive feedback vertex sets I of ``g``.

    The product is monotone under inclusion, so the minimum over all PFVS
    equals the minimum over inclusion-minimal ones.
    """
    if g.n != domain.n:
        raise DDSError("graph and domain disagree on the number of coordinates")
    verts = tuple(sorted(minimum_pfvs(g, domain.sizes, product=True)))
    factors = tuple(domain.sizes[i - 1] for i in verts)
    return BoundReport("mu", verts, factors, math.prod(factors), True, "reference")


def family_pfvs(net: Network, thresholded: bool = True, objective: str = "main") -> frozenset[int]:
    """Vertex set hitting every positive circuit of every local graph.

    ``objective="main"`` minimises ``prod (|T_i| + 1)``, ``"corollary"``
    minimises ``prod |X_i|`` and ``"count"`` minimises ``|I|``.
    """
    scan = local_scan(net, thresholded)
    fam = scan.family
    if objective == "count":
        return min_hitting_set(fam.supports, net.n)
    if objective == "main":
        weights = [max(2, scan.thresholds.size(i) + 1) for i in range(1, net.n + 1)]
    elif objective == "corollary":
        weights = list(net.domain.sizes)
    else:
        raise ValueError(f"unknown objective {objective!r}")
    return min_hitting_set(fam.supports, net.n, weights, product=True)


@dataclass
class AnalysisReport:
    names: tuple[str, ...]
    domain: IntervalDomain
    clamped_values: int
    attractors: list[list[State]]
    fixed_points: list[State]
    global_graph: SignedDigraph
    global_graph_unthresholded: SignedDigraph
    family: CircuitFamily
    family_unthresholded: CircuitFamily
    thresholds: ThresholdSet
    pfvs: tuple[int, ...]
    bounds: list[BoundReport]
    verdicts: dict[str, bool | None] = field(default_factory=dict)

    @property
    def attractor_count(self) -> int:
        return len(self.attractors)

    @property
    def fixed_point_count(self) -> int:
        return len(self.fixed_points)

    def bound(self, kind: str) -> BoundReport:
        return next(b for b in self.bounds if b.kind == kind)

    @property
    def bound_main(self) -> int | None:
        return self.bound("main").value

    @property
    def bound_corollary(self) -> int | None:
        return self.bound("corollary").value

    @property
    def bound_mu(self) -> int | None:
        return self.bound("mu").value

    def to_dict(self) -> dict:
        return {
            "domain": {"names": list(self.names), "lower": list(self.domain.lower), "upper": list(self.domain.upper)},
            "state_count": self.domain.cardinality,
            "clamped_values": self.clamped_values,
            "attractor_count": self.attractor_count,
            "attractors": [[list(x) for x in a] for a in self.attractors],
            "fixed_point_count": self.fixed_point_count,
            "fixed_points": [list(x) for x in self.fixed_points],
            "global_graph": self.global_graph.to_dict()["edges"],
            "global_graph_unthresholded": self.global_graph_unthresholded.to_dict()["edges"],
            "functional_positive_circuits": self.family.to_dict(),
            "thresholds_doubled": self.thresholds.to_dict(),
            "pfvs": list(self.pfvs),
            "bound_main": self.bound_main,
            "bound_corollary": self.bound_corollary,
            "bound_mu": self.bound_mu,
            "bounds": [b.to_dict() for b in self.bounds],
            "verdicts": dict(self.verdicts),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        def fmt_state(x):
            return "(" + ",".join(str(c) for c in x) + ")"

        def fmt_set(vs):
            return "{" + ",".join(str(v) for v in vs) + "}"

        lines = [
            "domain: " + str(self.domain),
            f"states: {self.domain.cardinality}",
        ]
        if self.clamped_values:
            lines.append(f"clamped_values: {self.clamped_values}")
        lines += [
            "",
            f"attractor_count: {self.attractor_count}",
        ]
        for k, a in enumerate(self.attractors, start=1):
            shown = " ".join(fmt_state(x) for x in a[:16])
            more = f" ... ({len(a)} states)" if len(a) > 16 else ""
            lines.append(f"attractor {k}: {shown}{more}")
        lines += [
            f"fixed_point_count: {self.fixed_point_count}",
            "",
            f"global_graph: {self.global_graph}",
            f"global_graph_unthresholded: {self.global_graph_unthresholded}",
            f"functional_positive_circuits: {len(self.family)}",
        ]
        for s, w in self.family.witnesses.items():
            lines.append(f"  support {fmt_set(sorted(s))} at x={fmt_state(w.state)} v={fmt_state(w.direction)}: {w.circuit}")
        lines.append("thresholds_doubled:")
        for i, d in enumerate(self.thresholds.doubled, start=1):
            lines.append(f"  T{i}: [{', '.join(str(t) for t in d)}]")
        lines += ["", f"pfvs: {fmt_set(self.pfvs)}"]
        for b in self.bounds:
            val = "n/a" if b.value is None else str(b.value)
            lines.append(f"bound {b.kind} ({b.graph}): I={fmt_set(b.pfvs)} factors={list(b.factors)} value={val}")
        lines += [
            f"bound_main: {self.bound_main}",
            f"bound_corollary: {self.bound_corollary}",
            f"bound_mu: {self.bound_mu}",
            "",
            "verdicts:",
        ]
        for name, ok in self.verdicts.items():
            lines.append(f"  {name}: {'n/a' if ok is None else ('holds' if ok else 'VIOLATED')}")
        return "\n".join(lines) + "\n"


def analyze(net: Network) -> AnalysisReport:
    dom = net.domain
    attrs = [[dom.unrank(k) for k in sorted(a)] for a in network_attractors(net)]
    fps = fixed_points(net)
    gg = global_graph(net, True)
    gu = global_graph(net, False)
    scan = local_scan(net, True)
    scan_u = local_scan(net, False)

    pfvs = family_pfvs(net, True, "main")
    main = theorem_bound(net, pfvs)
    cor = replace(corollary_bound(dom, pfvs), graph="local", valid=main.valid)
    mu_rep = mu(gg, dom)
    cor_global = BoundReport("corollary-global", mu_rep.pfvs, mu_rep.factors, mu_rep.value, True, "global")
    pfvs_u = family_pfvs(net, False, "corollary")
    unthr_factors = tuple(dom.sizes[i - 1] for i in sorted(pfvs_u))
    unthr_valid = hits_every_local_graph(scan_u, pfvs_u)
    unthr = BoundReport(
        "unthresholded",
        tuple(sorted(pfvs_u)),
        unthr_factors,
        math.prod(unthr_factors) if unthr_valid else None,
        unthr_valid,
        "local-unthresholded",
    )
    bounds = [main, cor, cor_global, unthr, mu_rep]

    na = len(attrs)
    verdicts: dict[str, bool | None] = {
        "pfvs_verified": main.valid,
        "fixed_points_le_attractors": len(fps) <= na,
        "attractors_le_main": main.value is not None and na <= main.value,
        "main_le_corollary": main.value is not None and cor.value is not None and main.value <= cor.value,
        "attractors_le_corollary_global": na <= cor_global.value,
        "attractors_le_unthresholded": unthr.value is not None and na <= unthr.value,
        "unique_attractor_without_positive_circuits": (na == 1) if not scan.family else None,
    }
    verdicts["holds"] = all(v for v in verdicts.values() if v is not None)
    return AnalysisReport(
        net.names,
        dom,
        net.clamped_values,
        attrs,
        fps,
        gg,
        gu,
        scan.family,
        scan_u.family,
        scan.thresholds,
        tuple(sorted(pfvs)),
        bounds,
        verdicts,
    )
