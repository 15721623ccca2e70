"""
Output renderers: canonical JSON, DOT Hasse diagrams and plain text.

All three are deterministic so command output can be compared byte for byte.
"""
import json

from .core import Poset


def dump_json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _quote(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(P: Poset, name: str = "poset") -> str:
    """Covers drawn lower -> upper, nodes in index order, named by label or index."""
    nodes = [_quote(P.label(x)) for x in range(P.size)]
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    lines.extend(f"  {node};" for node in nodes)
    lines.extend(f"  {nodes[x]} -> {nodes[y]};" for x, y in P.covers())
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_text(data: dict) -> str:
    lines = []
    for key in sorted(data):
        value = data[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True, ensure_ascii=False)
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"
