"""Signed interaction graphs on vertices 1..n."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import DDSError

Edge = tuple[int, int, int]  # (source j, sign s, target i)


@dataclass(frozen=True)
class SignedDigraph:
    """Edge set of triples ``(j, s, i)``; opposite-sign parallel edges allowed."""

    n: int
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        edges = frozenset((int(j), int(s), int(i)) for j, s, i in self.edges)
        for j, s, i in edges:
            if not (1 <= j <= self.n and 1 <= i <= self.n):
                raise DDSError(f"edge ({j},{s},{i}) has a vertex outside 1..{self.n}")
            if s not in (-1, 1):
                raise DDSError(f"edge ({j},{s},{i}) has sign other than -1/+1")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_signs(cls, signs: np.ndarray) -> "SignedDigraph":
        """Build from an ``(n, n)`` matrix whose ``[i, j]`` entry is the sign of j -> i."""
        n = signs.shape[0]
        idx = np.argwhere(signs != 0)
        return cls(n, frozenset((int(j) + 1, int(signs[i, j]), int(i) + 1) for i, j in idx))

    @cached_property
    def sorted_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges, key=lambda e: (e[2], e[0], e[1])))

    @cached_property
    def sign_map(self) -> dict[tuple[int, int], tuple[int, ...]]:
        """``(j, i) -> sorted signs`` over 0-based vertex pairs."""
        out: dict[tuple[int, int], list[int]] = {}
        for j, s, i in self.edges:
            out.setdefault((j - 1, i - 1), []).append(s)
        return {k: tuple(sorted(v)) for k, v in out.items()}

    @cached_property
    def succ_masks(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for j, i in self.sign_map:
            masks[j] |= 1 << i
        return tuple(masks)

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.sorted_edges)

    def is_subgraph_of(self, other: "SignedDigraph") -> bool:
        return self.edges <= other.edges

    def without(self, vertices: Iterable[int]) -> "SignedDigraph":
        """Vertex-deleted subgraph; vertex numbering is kept."""
        drop = set(vertices)
        return SignedDigraph(self.n, frozenset(e for e in self.edges if e[0] not in drop and e[2] not in drop))

    def union(self, other: "SignedDigraph") -> "SignedDigraph":
        return SignedDigraph(max(self.n, other.n), self.edges | other.edges)

    def has_dual_signs(self) -> bool:
        return any(len(s) > 1 for s in self.sign_map.values())

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges]}

    def __str__(self):
        return "{" + ", ".join(f"({j},{'+' if s > 0 else '-'},{i})" for j, s, i in self.sorted_edges) + "}"


def signed_dot(g: SignedDigraph, names=None, title: str = "G") -> str:
    """DOT text: positive edges solid '+', negative dashed '−'."""
    names = names or [f"x{i}" for i in range(1, g.n + 1)]
    lines = [f"digraph {title} {{"]
    for v in range(1, g.n + 1):
        lines.append(f'  {v} [label="{names[v - 1]}"];')
    for j, s, i in g.sorted_edges:
        if s > 0:
            lines.append(f'  {j} -> {i} [label="+", style=solid];')
        else:
            lines.append(f'  {j} -> {i} [label="−", style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"
