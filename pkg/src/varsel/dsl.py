"""Text format for feature models (.fm files).

The format covers exactly what the engine needs: a feature tree with
mandatory/optional children and xor/or groups, integer attribute
declarations, and labeled cross-tree constraints. Line comments start
with ``#``.

    model Example
    root Car {
      mandatory Body
      optional Camera
      xor {
        optional Electric
        optional Petrol
      }
    }
    attribute Price : int
    constraint R1 : Electric implies not Camera

Parsing collects every diagnostic it can instead of stopping at the first
problem, and only returns models that pass :func:`~varsel.model.validate_model`.
Serialization is canonical (2-space indents, declaration order, constraints
sorted by label), so equal models print byte-identically and printing then
parsing reproduces the structure.

Operator precedence, loosest to tightest: iff, implies, or, and, not.
``implies`` associates to the right, the other binary operators to the left.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .formula import (
    AttrCompare,
    And,
    COMPARE_OPS,
    FeatureLiteral,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    formula_text,
)
from .model import (
    MANDATORY,
    OPTIONAL,
    OR,
    XOR,
    AttributeDecl,
    Feature,
    FeatureModel,
    Group,
    NamedConstraint,
    validate_model,
)

SYNTAX = "Syntax"
UNKNOWN_KEYWORD = "UnknownKeyword"
DUPLICATE_NAME = "DuplicateName"

KEYWORDS = frozenset(
    "model root mandatory optional xor or attribute int constraint not and implies iff".split()
)


@dataclass(frozen=True)
class SourceSpan:
    line: int  # 1-based
    column: int  # 1-based
    length: int


@dataclass(frozen=True)
class ParseDiagnostic:
    span: SourceSpan
    message: str
    kind: str  # SYNTAX, UNKNOWN_KEYWORD, or DUPLICATE_NAME

    def __str__(self):
        return f"{self.span.line}:{self.span.column}: {self.kind}: {self.message}"


class ParseError(Exception):
    def __init__(self, diagnostics: tuple[ParseDiagnostic, ...]):
        super().__init__("; ".join(str(d) for d in diagnostics))
        self.diagnostics = diagnostics


# ---------------------------------------------------------------------------
# Lexer

_PUNCT = ("<=", ">=", "==", "<", ">", "{", "}", "(", ")", ":", ".")


@dataclass(frozen=True)
class _Token:
    kind: str  # "ident", "int", "punct", "eof"
    text: str
    span: SourceSpan


def _tokenize(text: str, diags: list[ParseDiagnostic]) -> list[_Token]:
    tokens: list[_Token] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        col = 0
        n = len(line)
        while col < n:
            ch = line[col]
            if ch in " \t\r":
                col += 1
                continue
            if ch == "#":
                break
            span = SourceSpan(line_no, col + 1, 1)
            if ch.isdigit():
                end = col
                while end < n and line[end].isdigit():
                    end += 1
                tokens.append(_Token("int", line[col:end], SourceSpan(line_no, col + 1, end - col)))
                col = end
                continue
            if ch.isalpha() or ch == "_":
                end = col
                while end < n and (line[end].isalnum() or line[end] == "_"):
                    end += 1
                word = line[col:end]
                if not word.isascii():
                    diags.append(ParseDiagnostic(span, f"non-ASCII identifier {word!r}", SYNTAX))
                tokens.append(_Token("ident", word, SourceSpan(line_no, col + 1, end - col)))
                col = end
                continue
            for p in _PUNCT:
                if line.startswith(p, col):
                    tokens.append(_Token("punct", p, SourceSpan(line_no, col + 1, len(p))))
                    col += len(p)
                    break
            else:
                diags.append(ParseDiagnostic(span, f"unexpected character {ch!r}", SYNTAX))
                col += 1
    lines = text.splitlines() or [""]
    tokens.append(_Token("eof", "", SourceSpan(len(lines), len(lines[-1]) + 1, 0)))
    return tokens


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, text: str):
        self.diags: list[ParseDiagnostic] = []
        self.tokens = _tokenize(text, self.diags)
        self.pos = 0
        self.model_name = "unnamed"
        self.features: dict[str, Feature] = {}
        self.attributes: list[AttributeDecl] = []
        self.attr_spans: dict[str, SourceSpan] = {}
        self.constraints: list[NamedConstraint] = []
        self.constraint_spans: dict[str, SourceSpan] = {}
        self.root: Optional[str] = None
        # (name, span, used_as_attribute) for post-parse symbol resolution
        self.symbol_uses: list[tuple[str, SourceSpan, bool]] = []

    # -- token helpers

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind in ("ident", "punct")

    def accept(self, text: str) -> Optional[_Token]:
        if self.at(text):
            return self.take()
        return None

    def error(self, span: SourceSpan, message: str, kind: str = SYNTAX):
        self.diags.append(ParseDiagnostic(span, message, kind))

    def expect(self, text: str) -> Optional[_Token]:
        tok = self.accept(text)
        if tok is None:
            got = self.peek()
            self.error(got.span, f"expected {text!r}, found {got.text or 'end of input'!r}")
        return tok

    def expect_name(self, what: str) -> Optional[_Token]:
        tok = self.peek()
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            return self.take()
        self.error(tok.span, f"expected {what}, found {tok.text or 'end of input'!r}")
        return None

    # -- declarations

    def parse(self) -> FeatureModel:
        if self.expect("model") is not None:
            name_tok = self.expect_name("a model name")
            if name_tok is not None:
                self.model_name = name_tok.text
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.text == "root":
                self.take()
                self.feature_tree(None, MANDATORY, tok)
            elif tok.text in (MANDATORY, OPTIONAL):
                self.take()
                self.error(tok.span, "only 'root' may start a tree at top level")
                self.feature_tree(None, tok.text, tok)
            elif tok.text == "attribute":
                self.take()
                self.attr_decl()
            elif tok.text == "constraint":
                self.take()
                self.constraint_decl()
            elif tok.kind == "ident":
                self.error(tok.span, f"unknown keyword {tok.text!r}", UNKNOWN_KEYWORD)
                self.take()
            else:
                self.error(tok.span, f"unexpected {tok.text!r}")
                self.take()

        self.resolve_symbols()
        model = FeatureModel(
            self.model_name,
            self.root or next(iter(self.features), "missing"),
            dict(self.features),
            tuple(self.attributes),
            tuple(self.constraints),
        )
        if not self.diags:
            leftovers = validate_model(model)
            for violation in leftovers:
                self.error(SourceSpan(1, 1, 0), str(violation))
        if self.diags:
            self.diags.sort(key=lambda d: (d.span.line, d.span.column))
            raise ParseError(tuple(self.diags))
        return model

    def feature_tree(self, parent: Optional[str], variation: str, keyword_tok: _Token) -> Optional[str]:
        if keyword_tok.text == "root" and parent is not None:
            self.error(keyword_tok.span, "'root' is only allowed at top level")
        if keyword_tok.text == "root" and self.root is not None:
            self.error(keyword_tok.span, "a second root is not allowed")
        name_tok = self.expect_name("a feature name")
        if name_tok is None:
            self.skip_block_if_present()
            return None
        name = name_tok.text
        if name in self.features:
            self.error(name_tok.span, f"feature {name!r} already declared", DUPLICATE_NAME)
        else:
            self.features[name] = Feature(name, parent, variation)
            if keyword_tok.text == "root" and parent is None and self.root is None:
                self.root = name
        if self.accept("{"):
            self.block(name)
        return name

    def block(self, owner: str):
        while True:
            tok = self.peek()
            if tok.text == "}":
                self.take()
                return
            if tok.kind == "eof":
                self.error(tok.span, "unexpected end of input; '}' expected")
                return
            if tok.text in (MANDATORY, OPTIONAL, "root"):
                self.take()
                self.feature_tree(owner, MANDATORY if tok.text == "root" else tok.text, tok)
            elif tok.text in (XOR, OR):
                self.take()
                self.group(owner, tok)
            else:
                self.error(tok.span, f"expected a feature or group declaration, found {tok.text!r}")
                self.take()

    def group(self, owner: str, kind_tok: _Token):
        if self.expect("{") is None:
            return
        members: list[str] = []
        while True:
            tok = self.peek()
            if tok.text == "}":
                self.take()
                break
            if tok.kind == "eof":
                self.error(tok.span, "unexpected end of input; '}' expected")
                break
            if tok.text in (MANDATORY, OPTIONAL, "root"):
                self.take()
                name = self.feature_tree(owner, MANDATORY if tok.text == "root" else tok.text, tok)
                if name is not None:
                    members.append(name)
            else:
                self.error(tok.span, f"expected a feature declaration in group, found {tok.text!r}")
                self.take()
        if len(members) < 2:
            self.error(kind_tok.span, f"undersized group: {kind_tok.text} group needs at least 2 children, has {len(members)}")
        feature = self.features.get(owner)
        if feature is not None:
            if feature.group is not None:
                self.error(kind_tok.span, f"feature {owner!r} already has a group")
            else:
                self.features[owner] = Feature(feature.name, feature.parent, feature.variation, Group(kind_tok.text, tuple(members)))

    def attr_decl(self):
        name_tok = self.expect_name("an attribute name")
        self.expect(":")
        self.expect("int")
        if name_tok is None:
            return
        if name_tok.text in self.attr_spans:
            self.error(name_tok.span, f"attribute {name_tok.text!r} already declared", DUPLICATE_NAME)
            return
        self.attributes.append(AttributeDecl(name_tok.text))
        self.attr_spans[name_tok.text] = name_tok.span

    def constraint_decl(self):
        labeled = self.label()
        self.expect(":")
        formula = self.formula()
        if labeled is None or formula is None:
            return
        label, span = labeled
        if label in self.constraint_spans:
            self.error(span, f"constraint {label!r} already declared", DUPLICATE_NAME)
            return
        self.constraints.append(NamedConstraint(label, formula))
        self.constraint_spans[label] = span

    def label(self) -> Optional[tuple[str, SourceSpan]]:
        tok = self.peek()
        if tok.kind != "ident" or tok.text in KEYWORDS:
            self.error(tok.span, f"expected a constraint label, found {tok.text or 'end of input'!r}")
            return None
        self.take()
        parts = [tok.text]
        while self.at("."):
            self.take()
            part = self.peek()
            if part.kind in ("ident", "int"):
                self.take()
                parts.append(part.text)
            else:
                self.error(part.span, "expected a label segment after '.'")
                break
        return ".".join(parts), tok.span

    # -- formulas (precedence climbing per the grammar)

    def formula(self) -> Optional[Formula]:
        return self.iff()

    def iff(self) -> Optional[Formula]:
        left = self.implication()
        while left is not None and self.accept("iff"):
            right = self.implication()
            if right is None:
                return None
            left = Iff(left, right)
        return left

    def implication(self) -> Optional[Formula]:
        operands = [self.or_expr()]
        while operands[-1] is not None and self.accept("implies"):
            operands.append(self.or_expr())
        if operands[-1] is None:
            return None
        result = operands[-1]
        for operand in reversed(operands[:-1]):
            result = Implies(operand, result)
        return result

    def or_expr(self) -> Optional[Formula]:
        left = self.and_expr()
        while left is not None and self.accept("or"):
            right = self.and_expr()
            if right is None:
                return None
            left = Or(left, right)
        return left

    def and_expr(self) -> Optional[Formula]:
        left = self.unary()
        while left is not None and self.accept("and"):
            right = self.unary()
            if right is None:
                return None
            left = And(left, right)
        return left

    def unary(self) -> Optional[Formula]:
        if self.accept("not"):
            operand = self.unary()
            return None if operand is None else Not(operand)
        return self.atom()

    def atom(self) -> Optional[Formula]:
        tok = self.peek()
        if tok.text == "(":
            self.take()
            inner = self.formula()
            self.expect(")")
            return inner
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            self.take()
            cmp = self.peek()
            if cmp.kind == "punct" and cmp.text in COMPARE_OPS:
                self.take()
                value = self.peek()
                if value.kind != "int":
                    self.error(value.span, f"expected an integer after {cmp.text!r}")
                    return None
                self.take()
                self.symbol_uses.append((tok.text, tok.span, True))
                return AttrCompare(tok.text, cmp.text, int(value.text))
            self.symbol_uses.append((tok.text, tok.span, False))
            return FeatureLiteral(tok.text)
        self.error(tok.span, f"expected a formula, found {tok.text or 'end of input'!r}")
        return None

    # -- post-parse checks

    def resolve_symbols(self):
        attrs = set(self.attr_spans)
        for name, span in self.attr_spans.items():
            if name in self.features:
                self.error(span, f"attribute {name!r} collides with a feature name", DUPLICATE_NAME)
        for name, span, as_attr in self.symbol_uses:
            if as_attr:
                if name not in attrs:
                    hint = " (it is a feature)" if name in self.features else ""
                    self.error(span, f"unknown attribute {name!r}{hint}")
            elif name not in self.features:
                hint = " (it is an attribute)" if name in attrs else ""
                self.error(span, f"unknown symbol {name!r}{hint}")

    def skip_block_if_present(self):
        if not self.accept("{"):
            return
        depth = 1
        while depth and self.peek().kind != "eof":
            tok = self.take()
            if tok.text == "{":
                depth += 1
            elif tok.text == "}":
                depth -= 1


def parse_model(text: str) -> FeatureModel:
    """Parse a .fm document into a well-formed feature model.

    Raises:
        ParseError: carrying every diagnostic found; independent errors do
            not mask each other.
    """
    return _Parser(text).parse()


def parse_formula(text: str) -> Formula:
    """Parse a single constraint formula (no symbol resolution)."""
    parser = _Parser("")
    parser.tokens = _tokenize(text, parser.diags)
    parser.pos = 0
    formula = parser.formula()
    tail = parser.peek()
    if tail.kind != "eof":
        parser.error(tail.span, f"trailing input {tail.text!r}")
    if formula is None or parser.diags:
        raise ParseError(tuple(parser.diags))
    return formula


# ---------------------------------------------------------------------------
# Serializer


def serialize_model(model: FeatureModel) -> str:
    """Render a model in canonical form.

    Children print in declaration order with group members pulled together
    at the first member's position; attributes follow the tree, constraints
    come last sorted by label. Equal models serialize byte-identically.
    """
    lines = [f"model {model.name}"]
    _emit_feature(model, model.features[model.root], "root", 0, lines)
    for attr in model.attributes:
        lines.append(f"attribute {attr.name} : int")
    for constraint in sorted(model.constraints, key=lambda c: c.label):
        lines.append(f"constraint {constraint.label} : {formula_text(constraint.formula)}")
    return "\n".join(lines) + "\n"


def _emit_feature(model: FeatureModel, feature: Feature, keyword: str, depth: int, lines: list[str]):
    indent = "  " * depth
    children = model.children(feature.name)
    if not children:
        lines.append(f"{indent}{keyword} {feature.name}")
        return
    lines.append(f"{indent}{keyword} {feature.name} {{")
    group = feature.group
    members = set(group.members) if group is not None else set()
    emitted_group = False
    for child in children:
        if child.name in members:
            if not emitted_group:
                emitted_group = True
                inner = "  " * (depth + 1)
                lines.append(f"{inner}{group.kind} {{")
                for member_name in group.members:
                    _emit_feature(model, model.features[member_name], model.features[member_name].variation, depth + 2, lines)
                lines.append(f"{inner}}}")
        else:
            _emit_feature(model, child, child.variation, depth + 1, lines)
    lines.append(f"{indent}}}")


def structurally_equal(a: FeatureModel, b: FeatureModel) -> bool:
    """Equality up to canonical form.

    Feature declaration order and constraint order are not structural:
    features compare as a mapping and constraints compare sorted by label.
    """
    return (
        a.name == b.name
        and a.root == b.root
        and dict(a.features) == dict(b.features)
        and a.attributes == b.attributes
        and sorted(a.constraints, key=lambda c: c.label) == sorted(b.constraints, key=lambda c: c.label)
    )
