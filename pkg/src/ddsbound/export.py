"""DOT rendering of the transition graph and atomic file output."""

from __future__ import annotations

import os
import tempfile

from .network import Network
from .stg import build_stg, network_attractors


def atomic_write(path, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def stg_dot(net: Network, title: str = "STG") -> str:
    """DOT text for the transition graph; nodes and edges in rank order.

    States of attractors are drawn with a double border.
    """
    dom = net.domain
    g = build_stg(net)
    in_attractor = set()
    for a in network_attractors(net):
        in_attractor |= a
    lines = [f"digraph {title} {{"]
    for k in range(len(g)):
        label = ",".join(str(c) for c in dom.unrank(k))
        extra = ", peripheries=2" if k in in_attractor else ""
        lines.append(f'  s{k} [label="{label}"{extra}];')
    for k, m in g.edges():
        lines.append(f"  s{k} -> s{m};")
    lines.append("}")
    return "\n".join(lines) + "\n"
