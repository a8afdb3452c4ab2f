"""Graphviz DOT rendering of gluing graphs and chains."""

from typing import List, Optional, Sequence

from ..algebra.presentation import Presentation, gluing_graph


def _node_id(kind: str, index: int, prefix: str) -> str:
    return f'"{prefix}{kind}_{index}"'


def _body(P: Presentation, prefix: str = "") -> List[str]:
    graph = gluing_graph(P)
    lines = []
    for kind, index in sorted(graph.nodes):
        if kind == 'F1':
            label, shape = f"theta{index} (k={P.k[index]})", 'box'
        else:
            label, shape = f"[0,1]_{index} (dim={P.dims[index]})", 'ellipse'
        lines.append(f'  {_node_id(kind, index, prefix)} [label="{label}", shape={shape}];')
    for u, v, data in sorted(graph.edges(data=True), key=lambda e: sorted(e[:2])):
        f1, f2 = (u, v) if u[0] == 'F1' else (v, u)
        label = f"a={data['alpha']}, b={data['beta']}"
        lines.append(f'  {_node_id(*f2, prefix)} -- {_node_id(*f1, prefix)} [label="{label}"];')
    return lines


def presentation_dot(P: Presentation, name: Optional[str] = None) -> str:
    """
    DOT source of the gluing graph of P.

    Interval blocks are ellipses, F1 blocks boxes; each edge is labelled
    with its alpha and beta multiplicities.
    """
    lines = [f'graph "{name or "presentation"}" {{'] + _body(P) + ['}']
    return "\n".join(lines) + "\n"


def stages_dot(stages: Sequence[Presentation], name: str = "chain") -> str:
    """One cluster per stage, stages in order."""
    lines = [f'graph "{name}" {{']
    for n, P in enumerate(stages):
        lines.append(f'  subgraph "cluster_{n}" {{')
        lines.append(f'    label="stage {n}";')
        lines.extend("  " + line for line in _body(P, prefix=f"s{n}_"))
        lines.append('  }')
    lines.append('}')
    return "\n".join(lines) + "\n"
