from __future__ import annotations

from fractions import Fraction
from importlib.resources import files

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cogmaplint.curation import CurationError, format_curation, parse_curation, tokenize
from cogmaplint.model import ArtificialNode, CausalVariable, Code, Constituent, CurationSpec, DeniedRelation
from cogmaplint.synth import generate

FIXTURE = files("cogmaplint") / "fixtures" / "urban_blight" / "spec.cdsl"

SMALL = """
# comment
set max_path_len = 4
alias "dark places" = "Shady Places"
variable Shade { value shady: "Shady Places" }
variable Crime {
  value present: "Street Criminality" | "Crime"
}
interaction "Dark Crime" = (Shade = shady) & (Crime = present)
deny Shade -> "Dark Crime"
"""


def test_parse_small_spec():
    spec = parse_curation(SMALL)
    assert spec.aliases == {"dark places": "Shady Places"}
    assert spec.variables["Crime"].values["present"] == {"Street Criminality", "Crime"}
    assert spec.interactions["Dark Crime"].variables == {"Shade", "Crime"}
    assert spec.denials == {DeniedRelation("Shade", "Dark Crime")}
    assert spec.max_path_len == 4
    assert spec.near_dup_threshold == Fraction(1, 2)
    assert (spec.spans["variable:Crime"].line, spec.spans["variable:Crime"].column) == (6, 1)


def test_threshold_is_exact():
    spec = parse_curation("set near_dup_threshold = 0.6\n")
    assert spec.near_dup_threshold == Fraction(3, 5)


def test_string_escapes():
    spec = parse_curation('variable V { value v: "say \\"hi\\"\\\\\\n\\t" }')
    assert spec.variables["V"].labels() == {'say "hi"\\\n\t'}


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("variable V {\n  value a: \"x\"\n  value a: \"y\"\n}", 3, 9),
        ("variable V { value a: \"x\" }\nvariable V { value b: \"y\" }", 2, 10),
        ("set colour = 3", 1, 5),
        ("set max_path_len = 2", 1, 20),
        ("set near_dup_threshold = 1.5", 1, 26),
        ("set max_path_len = 4\nset max_path_len = 5", 2, 5),
        ("deny A -> A", 1, 11),
        ("alias \"a\" = \"b\"\nalias \"B\" = \"c\"", 1, 1),
        ("alias \"a\" = \"b\"\nalias \"A\" = \"c\"", 2, 7),
        ("variable V { value a: \"x\" ", 1, 27),
        ("variable V {\n value a: \"unterminated\n}", 2, 11),
        ("interaction \"I\" = (V = a) & (V = a)", 1, 13),
        ("variable V {}", 1, 10),
        ("bogus", 1, 1),
        ("variable V { value a: \"x\" } $", 1, 29),
        ("variable V { value a: \"\\q\" }", 1, 24),
    ],
)
def test_errors_carry_line_and_column(text, line, column):
    with pytest.raises(CurationError) as info:
        parse_curation(text, "s.cdsl")
    assert (info.value.line, info.value.column) == (line, column)
    assert str(info.value).startswith(f"s.cdsl:{line}:{column}: ")


def test_fixture_round_trip_is_a_fixpoint():
    spec = parse_curation(FIXTURE.read_bytes())
    text = format_curation(spec)
    assert parse_curation(text) == spec
    assert format_curation(parse_curation(text)) == text


ROUND_TRIP_PLANTS = {c: 1 for c in Code if c is not Code.ALIAS_CHAIN}


@pytest.mark.parametrize("seed", range(50))
def test_synthetic_round_trip(seed):
    spec = generate(seed, 3 + seed % 6, ROUND_TRIP_PLANTS if seed % 2 else {}).spec
    text = format_curation(spec)
    assert parse_curation(text) == spec
    assert format_curation(parse_curation(text)) == text


idents = st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,6}", fullmatch=True).filter(
    lambda s: s not in {"alias", "variable", "interaction", "deny", "set", "value"}
)
labels = st.text(st.characters(blacklist_categories=("Cs",)), min_size=1, max_size=10).filter(str.strip)


@st.composite
def specs(draw):
    names = draw(st.lists(idents, min_size=1, max_size=4, unique=True))
    variables = []
    for name in names:
        values = draw(st.lists(idents, min_size=1, max_size=3, unique=True))
        mapping = {}
        for value in values:
            own = draw(st.frozensets(labels, min_size=1, max_size=2))
            mapping[value] = own
        variables.append(CausalVariable(name, mapping))
    interactions = []
    if len(variables) >= 2:
        a, b = variables[0], variables[1]
        iname = draw(labels.filter(lambda s: s not in names))
        interactions.append(
            ArtificialNode(iname, frozenset({Constituent(a.name, next(iter(a.values))), Constituent(b.name, next(iter(b.values)))}))
        )
    nodes = names + [n.name for n in interactions]
    denials = set()
    if len(nodes) >= 2:
        x, y = draw(st.permutations(nodes))[:2]
        denials.add(DeniedRelation(x, y))
    config = {}
    if draw(st.booleans()):
        config["near_dup_threshold"] = Fraction(draw(st.integers(0, 100)), 100)
    if draw(st.booleans()):
        config["max_path_len"] = draw(st.integers(3, 12))
    return CurationSpec(variables=variables, interactions=interactions, denials=frozenset(denials), config=config)


@settings(max_examples=150)
@given(specs())
def test_round_trip_property(spec):
    text = format_curation(spec)
    assert parse_curation(text) == spec
    assert format_curation(parse_curation(text)) == text


@given(st.text(max_size=60))
def test_arbitrary_text_parses_or_reports_position(text):
    try:
        parse_curation(text)
    except CurationError as exc:
        assert exc.line >= 1 and exc.column >= 1


def test_tokenizer_skips_comments():
    kinds = [t.kind for t in tokenize("deny A -> B # trailing\n")]
    assert kinds == ["IDENT", "IDENT", "->", "IDENT", "EOF"]
