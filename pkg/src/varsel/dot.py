"""Graphviz DOT rendering of feature models.

Edges run parent to child. Mandatory children get a filled dot arrowhead,
optional children a hollow one, and group edges carry the group kind as an
edge label so xor/or arcs are recognizable in the drawing. An optional
configuration highlights its selected features with a fill color. Output is
deterministic for a given model and highlight.
"""

from __future__ import annotations

from typing import Optional

from .analysis import is_valid_configuration
from .model import MANDATORY, Configuration, FeatureModel


class InvalidHighlightError(Exception):
    """The highlight configuration is not valid for the model."""

    def __init__(self, violations):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = violations


def export_dot(model: FeatureModel, highlight: Optional[Configuration] = None) -> str:
    """Render the model as a DOT digraph, optionally highlighting a configuration."""
    selected: frozenset[str] = frozenset()
    if highlight is not None:
        verdict = is_valid_configuration(model, highlight)
        if not verdict.valid:
            raise InvalidHighlightError(verdict.violations)
        selected = highlight.selected

    lines = [f"digraph {_quote(model.name)} {{"]
    lines.append('  node [shape=box, style="rounded"];')
    for feature in model.features.values():
        attrs = [f"label={_quote(feature.name)}"]
        if feature.name in selected:
            attrs.append('style="rounded,filled"')
            attrs.append("fillcolor=lightblue")
        lines.append(f"  {_quote(feature.name)} [{', '.join(attrs)}];")
    for attr in model.attributes:
        lines.append(f"  {_quote(attr.name)} [label={_quote(attr.name + ' : int')}, shape=note];")
        lines.append(f"  {_quote(model.root)} -> {_quote(attr.name)} [style=dashed, arrowhead=none];")

    for feature in model.features.values():
        members = set(feature.group.members) if feature.group is not None else set()
        for child in model.children(feature.name):
            if child.name in members:
                continue
            head = "dot" if child.variation == MANDATORY else "odot"
            lines.append(f"  {_quote(feature.name)} -> {_quote(child.name)} [arrowhead={head}];")
        if feature.group is not None:
            lines.append(f"  // {feature.group.kind} group under {feature.name}")
            for member in feature.group.members:
                lines.append(
                    f"  {_quote(feature.name)} -> {_quote(member)} "
                    f"[arrowhead=none, label={_quote(feature.group.kind)}];"
                )
    lines.append("}")
    return "\n".join(lines) + "\n"


def _quote(name: str) -> str:
    return '"' + name.replace('"', '\\"') + '"'
