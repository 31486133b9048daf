"""Parser and canonical printer for the curation language (``.cdsl``).

Example::

    # expert decisions for the urbanism cluster
    alias "abandoned dwellings" = "Abandoned Housing"
    variable Inspection {
      value absent: "Little Inspection" | "Lack of Inspection"
      value present: "Inspection"
    }
    interaction "Abandoned Housing" = (Vacancy = vacant) & (BuildingCondition = severe_disrepair)
    deny Vacancy -> Infrastructure
    set near_dup_threshold = 0.6

``deny`` accepts a quoted string on either side so that interaction names,
which may contain spaces, can be denied too.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

from cogmaplint.model import (
    CONFIG_KEYS,
    ArtificialNode,
    CausalVariable,
    ConfigValue,
    Constituent,
    CurationSpec,
    DeniedRelation,
    SourceSpan,
)
from cogmaplint.resolve import normalize


class CurationError(ValueError):
    def __init__(self, message: str, line: int, column: int, source: str = "<spec>") -> None:
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.source = source


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, STRING, NUMBER, EOF, or the punctuation itself
    text: str
    line: int
    column: int

    def describe(self) -> str:
        if self.kind == "EOF":
            return "end of input"
        if self.kind == "STRING":
            return f"string {self.text!r}"
        return repr(self.text)


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER = re.compile(r"[0-9]+(?:\.[0-9]+)?")
_PUNCT = ("->", "{", "}", ":", "|", "=", "&", "(", ")")
_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


def tokenize(text: str, source: str = "<spec>") -> list[Token]:
    tokens: list[Token] = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == '"':
            start_col = col
            i, col = i + 1, col + 1
            chars: list[str] = []
            while True:
                if i >= n or text[i] == "\n":
                    raise CurationError("unterminated string", line, start_col, source)
                c = text[i]
                if c == '"':
                    i, col = i + 1, col + 1
                    break
                if c == "\\":
                    esc = text[i + 1] if i + 1 < n else ""
                    if esc not in _ESCAPES:
                        raise CurationError(f"unknown escape \\{esc}", line, col, source)
                    chars.append(_ESCAPES[esc])
                    i, col = i + 2, col + 2
                    continue
                chars.append(c)
                i, col = i + 1, col + 1
            tokens.append(Token("STRING", "".join(chars), line, start_col))
            continue
        m = _IDENT.match(text, i) or _NUMBER.match(text, i)
        if m:
            kind = "IDENT" if m.re is _IDENT else "NUMBER"
            tokens.append(Token(kind, m.group(), line, col))
            col += m.end() - i
            i = m.end()
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                tokens.append(Token(p, p, line, col))
                i, col = i + len(p), col + len(p)
                break
        else:
            raise CurationError(f"unexpected character {ch!r}", line, col, source)
    tokens.append(Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str, source: str) -> None:
        self.source = source
        self.tokens = tokenize(text, source)
        self.pos = 0
        self.aliases: dict[str, str] = {}
        self.alias_keys: dict[str, str] = {}
        self.variables: dict[str, CausalVariable] = {}
        self.interactions: dict[str, ArtificialNode] = {}
        self.denials: set[DeniedRelation] = set()
        self.config: dict[str, ConfigValue] = {}
        self.spans: dict[str, SourceSpan] = {}

    # --- token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, tok: Token | None = None) -> CurationError:
        tok = tok or self.tok
        return CurationError(message, tok.line, tok.column, self.source)

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.tok
        if tok.kind != kind:
            raise self.error(f"expected {what or kind}, found {tok.describe()}")
        self.pos += 1
        return tok

    def accept(self, kind: str) -> Token | None:
        if self.tok.kind == kind:
            self.pos += 1
            return self.tokens[self.pos - 1]
        return None

    def keyword(self, word: str) -> Token:
        tok = self.tok
        if tok.kind != "IDENT" or tok.text != word:
            raise self.error(f"expected {word!r}, found {tok.describe()}")
        self.pos += 1
        return tok

    def span(self, tok: Token) -> SourceSpan:
        return SourceSpan(tok.line, tok.column)

    # --- grammar

    def parse(self) -> CurationSpec:
        while self.tok.kind != "EOF":
            tok = self.tok
            handler = {
                "alias": self.alias,
                "variable": self.variable,
                "interaction": self.interaction,
                "deny": self.deny,
                "set": self.setting,
            }.get(tok.text) if tok.kind == "IDENT" else None
            if handler is None:
                raise self.error(
                    f"expected one of 'alias', 'variable', 'interaction', 'deny', 'set', found {tok.describe()}"
                )
            handler()
        self.check_alias_chains()
        return CurationSpec(
            aliases=self.aliases,
            variables=self.variables,
            interactions=self.interactions,
            denials=frozenset(self.denials),
            config=self.config,
            spans=self.spans,
        )

    def alias(self) -> None:
        start = self.keyword("alias")
        raw = self.expect("STRING", "alias label (string)")
        self.expect("=", "'='")
        target = self.expect("STRING", "canonical label (string)")
        if not raw.text.strip() or not target.text.strip():
            raise self.error("alias labels must be non-empty", raw)
        key = normalize(raw.text)
        if key in self.alias_keys:
            raise self.error(f"duplicate alias for {raw.text!r}", raw)
        self.alias_keys[key] = raw.text
        self.aliases[raw.text] = target.text
        self.spans[f"alias:{raw.text}"] = self.span(start)

    def check_names(self, name: str, tok: Token) -> None:
        if name in self.variables or name in self.interactions:
            raise self.error(f"duplicate name {name!r}", tok)

    def variable(self) -> None:
        start = self.keyword("variable")
        name = self.expect("IDENT", "variable name")
        self.check_names(name.text, name)
        self.expect("{", "'{'")
        values: dict[str, list[str]] = {}
        while not self.accept("}"):
            if self.tok.kind == "EOF":
                raise self.error("expected 'value' or '}', found end of input")
            self.keyword("value")
            value = self.expect("IDENT", "value name")
            if value.text in values:
                raise self.error(f"duplicate value {value.text!r} in variable {name.text}", value)
            self.expect(":", "':'")
            labels = [self.label()]
            while self.accept("|"):
                labels.append(self.label())
            values[value.text] = labels
        if not values:
            raise self.error(f"variable {name.text} declares no values", name)
        self.variables[name.text] = CausalVariable(name.text, {k: frozenset(v) for k, v in values.items()})
        self.spans[f"variable:{name.text}"] = self.span(start)

    def label(self) -> str:
        tok = self.expect("STRING", "entity label (string)")
        if not tok.text.strip():
            raise self.error("entity labels must be non-empty", tok)
        return tok.text

    def interaction(self) -> None:
        start = self.keyword("interaction")
        name = self.expect("STRING", "interaction name (string)")
        if not name.text.strip():
            raise self.error("interaction names must be non-empty", name)
        self.check_names(name.text, name)
        self.expect("=", "'='")
        parts = [self.constituent()]
        self.expect("&", "'&'")
        parts.append(self.constituent())
        while self.accept("&"):
            parts.append(self.constituent())
        if len(set(parts)) < 2:
            raise self.error(f"interaction {name.text!r} repeats one constituent", name)
        self.interactions[name.text] = ArtificialNode(name.text, frozenset(parts))
        self.spans[f"interaction:{name.text}"] = self.span(start)

    def constituent(self) -> Constituent:
        self.expect("(", "'('")
        var = self.expect("IDENT", "variable name")
        self.expect("=", "'='")
        value = self.expect("IDENT", "value name")
        self.expect(")", "')'")
        return Constituent(var.text, value.text)

    def node_name(self) -> Token:
        if self.tok.kind in ("IDENT", "STRING"):
            return self.expect(self.tok.kind)
        raise self.error(f"expected node name, found {self.tok.describe()}")

    def deny(self) -> None:
        start = self.keyword("deny")
        cause = self.node_name()
        self.expect("->", "'->'")
        effect = self.node_name()
        if cause.text == effect.text:
            raise self.error("a denial needs two distinct nodes", effect)
        self.denials.add(DeniedRelation(cause.text, effect.text))
        self.spans.setdefault(f"deny:{cause.text}->{effect.text}", self.span(start))

    def setting(self) -> None:
        start = self.keyword("set")
        key = self.expect("IDENT", "config key")
        if key.text not in CONFIG_KEYS:
            raise self.error(f"unknown config key {key.text!r} (known: {', '.join(CONFIG_KEYS)})", key)
        if key.text in self.config:
            raise self.error(f"config key {key.text!r} set twice", key)
        self.expect("=", "'='")
        tok = self.tok
        if tok.kind not in ("NUMBER", "IDENT"):
            raise self.error(f"expected NUMBER or IDENT, found {tok.describe()}")
        self.pos += 1
        if tok.kind != "NUMBER":
            raise self.error(f"{key.text} expects a number", tok)
        value = Fraction(tok.text)
        if key.text == "near_dup_threshold":
            if not 0 <= value <= 1:
                raise self.error("near_dup_threshold must lie in [0, 1]", tok)
            self.config[key.text] = value
        else:
            if value.denominator != 1 or value < 3:
                raise self.error("max_path_len must be an integer >= 3", tok)
            self.config[key.text] = int(value)
        self.spans[f"set:{key.text}"] = self.span(start)

    def check_alias_chains(self) -> None:
        for raw, target in self.aliases.items():
            key = normalize(target)
            if key in self.alias_keys and key != normalize(raw):
                span = self.spans[f"alias:{raw}"]
                middle = self.alias_keys[key]
                raise CurationError(
                    f"alias chain: {raw!r} -> {target!r} -> {self.aliases[middle]!r}; "
                    "aliases must point at canonical labels",
                    span.line,
                    span.column,
                    self.source,
                )


def parse_curation(data: str | bytes, source: str = "<spec>") -> CurationSpec:
    """Parse curation text into a :class:`CurationSpec`.

    Raises :class:`CurationError` (with line and column) on syntax errors,
    duplicate names, unknown config keys and alias chains.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise CurationError(f"input is not UTF-8: {exc.reason}", 1, 1, source) from None
    return _Parser(data, source).parse()


# --- printing ---------------------------------------------------------------


def quote(text: str) -> str:
    body = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
    return f'"{body}"'


def _name(text: str) -> str:
    return text if _IDENT.fullmatch(text) else quote(text)


def format_number(value: ConfigValue) -> str:
    if isinstance(value, int) or Fraction(value).denominator == 1:
        return str(int(value))
    frac = Fraction(value)
    exact = Decimal(frac.numerator) / Decimal(frac.denominator)
    if Fraction(exact) != frac:
        raise ValueError(f"{frac} has no finite decimal form")
    text = format(exact, "f")
    return text.rstrip("0").rstrip(".") if "." in text else text


def format_curation(spec: CurationSpec) -> str:
    """Canonical text for ``spec``; reparsing it yields an equal spec."""
    lines: list[str] = []
    for key, value in spec.config.items():
        lines.append(f"set {key} = {format_number(value)}")
    if spec.config:
        lines.append("")
    for raw, target in spec.aliases.items():
        lines.append(f"alias {quote(raw)} = {quote(target)}")
    if spec.aliases:
        lines.append("")
    for var in spec.variables.values():
        lines.append(f"variable {var.name} {{")
        for value, labels in var.values.items():
            lines.append(f"  value {value}: " + " | ".join(quote(lb) for lb in sorted(labels)))
        lines.append("}")
        lines.append("")
    for node in spec.interactions.values():
        parts = " & ".join(f"({c.variable} = {c.value})" for c in sorted(node.constituents))
        lines.append(f"interaction {quote(node.name)} = {parts}")
    if spec.interactions:
        lines.append("")
    for denial in sorted(spec.denials):
        lines.append(f"deny {_name(denial.cause)} -> {_name(denial.effect)}")
    while lines and not lines[-1]:
        lines.pop()
    return "\n".join(lines) + "\n" if lines else ""
