"""Propositional formulas over feature literals and integer attribute comparisons.

A formula is a small immutable expression tree. Leaves are either a feature
literal (true iff the feature is selected in a configuration) or a comparison
between an integer attribute and a constant. Inner nodes are the usual
connectives: not, and, or, implies, iff.

Evaluation is total and two-valued, with one deliberate exception: comparing
an attribute that has no value in the configuration raises
:class:`MissingAttributeError` instead of silently evaluating to false. A
three-valued evaluator over partial selections is also provided for search
and propagation, where some features may still be undecided.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union


class MissingAttributeError(Exception):
    """A compared attribute has no value in the configuration."""

    def __init__(self, name: str):
        super().__init__(f"attribute {name!r} has no value")
        self.name = name


COMPARE_OPS = ("<", "<=", ">", ">=", "==")


@dataclass(frozen=True)
class FeatureLiteral:
    name: str


@dataclass(frozen=True)
class AttrCompare:
    attr: str
    op: str  # one of COMPARE_OPS
    value: int

    def __post_init__(self):
        if self.op not in COMPARE_OPS:
            raise ValueError(f"unknown comparison operator {self.op!r}")


@dataclass(frozen=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


Formula = Union[FeatureLiteral, AttrCompare, Not, And, Or, Implies, Iff]

_BINARY = (And, Or, Implies, Iff)


def evaluate(formula: Formula, selected, attribute_values: Mapping[str, int]) -> bool:
    """Evaluate a formula against a set of selected feature names.

    Args:
        formula: the expression to evaluate.
        selected: a container of selected feature names.
        attribute_values: values for the attributes referenced by comparisons.

    Raises:
        MissingAttributeError: a comparison references an unvalued attribute.
    """
    if isinstance(formula, FeatureLiteral):
        return formula.name in selected
    if isinstance(formula, AttrCompare):
        return _compare(formula, attribute_values)
    if isinstance(formula, Not):
        return not evaluate(formula.operand, selected, attribute_values)
    a = evaluate(formula.left, selected, attribute_values)
    b = evaluate(formula.right, selected, attribute_values)
    if isinstance(formula, And):
        return a and b
    if isinstance(formula, Or):
        return a or b
    if isinstance(formula, Implies):
        return (not a) or b
    if isinstance(formula, Iff):
        return a == b
    raise TypeError(f"not a formula: {formula!r}")


def evaluate_partial(
    formula: Formula,
    assignment: Mapping[str, Optional[bool]],
    attribute_values: Mapping[str, int],
) -> Optional[bool]:
    """Three-valued (Kleene) evaluation over a partial feature assignment.

    ``assignment`` maps feature names to True, False, or None (undecided);
    names absent from the mapping count as undecided. Returns None when the
    truth value is not yet determined.
    """
    if isinstance(formula, FeatureLiteral):
        return assignment.get(formula.name)
    if isinstance(formula, AttrCompare):
        return _compare(formula, attribute_values)
    if isinstance(formula, Not):
        v = evaluate_partial(formula.operand, assignment, attribute_values)
        return None if v is None else not v
    a = evaluate_partial(formula.left, assignment, attribute_values)
    b = evaluate_partial(formula.right, assignment, attribute_values)
    if isinstance(formula, And):
        if a is False or b is False:
            return False
        if a is True and b is True:
            return True
        return None
    if isinstance(formula, Or):
        if a is True or b is True:
            return True
        if a is False and b is False:
            return False
        return None
    if isinstance(formula, Implies):
        if a is False or b is True:
            return True
        if a is True and b is False:
            return False
        return None
    if isinstance(formula, Iff):
        if a is None or b is None:
            return None
        return a == b
    raise TypeError(f"not a formula: {formula!r}")


def _compare(formula: AttrCompare, attribute_values: Mapping[str, int]) -> bool:
    if formula.attr not in attribute_values:
        raise MissingAttributeError(formula.attr)
    v = attribute_values[formula.attr]
    op = formula.op
    if op == "<":
        return v < formula.value
    if op == "<=":
        return v <= formula.value
    if op == ">":
        return v > formula.value
    if op == ">=":
        return v >= formula.value
    return v == formula.value


def feature_names(formula: Formula) -> Iterator[str]:
    """Yield every feature name occurring in the formula, left to right."""
    if isinstance(formula, FeatureLiteral):
        yield formula.name
    elif isinstance(formula, Not):
        yield from feature_names(formula.operand)
    elif isinstance(formula, _BINARY):
        yield from feature_names(formula.left)
        yield from feature_names(formula.right)


def attribute_names(formula: Formula) -> Iterator[str]:
    """Yield every attribute name occurring in the formula, left to right."""
    if isinstance(formula, AttrCompare):
        yield formula.attr
    elif isinstance(formula, Not):
        yield from attribute_names(formula.operand)
    elif isinstance(formula, _BINARY):
        yield from attribute_names(formula.left)
        yield from attribute_names(formula.right)


# Larger number = binds tighter. Matches the concrete grammar in the DSL.
_PRECEDENCE = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}


def formula_text(formula: Formula) -> str:
    """Render a formula in the canonical concrete syntax.

    Parentheses are inserted only where a subterm binds looser than its
    context, so ``formula_text`` composed with the DSL formula parser is the
    identity on expression structure.
    """
    return _render(formula, 0)


def _render(formula: Formula, context: int) -> str:
    if isinstance(formula, FeatureLiteral):
        return formula.name
    if isinstance(formula, AttrCompare):
        text = f"{formula.attr} {formula.op} {formula.value}"
        # Comparisons are atoms in the grammar; no parens needed.
        return text
    if isinstance(formula, Not):
        inner = _render(formula.operand, _PRECEDENCE[Not])
        return f"not {inner}"
    prec = _PRECEDENCE[type(formula)]
    word = {And: "and", Or: "or", Implies: "implies", Iff: "iff"}[type(formula)]
    # Left-associative chains reuse the same level on the left; "implies"
    # is right-associative, so its left side needs one level tighter.
    if isinstance(formula, Implies):
        left = _render(formula.left, prec + 1)
        right = _render(formula.right, prec)
    else:
        left = _render(formula.left, prec)
        right = _render(formula.right, prec + 1)
    text = f"{left} {word} {right}"
    if prec < context:
        return f"({text})"
    return text
