import pytest
from hypothesis import given, strategies as st

from twopres import presio
from twopres.errors import DuplicateError, InputError, ParseError, UnresolvedError
from twopres.fixtures import names, path
from twopres.graded import FiniteCategory
from twopres.terms import GeneratingData

MINIMAL = "category C\n  object a\nend\n"


@pytest.mark.parametrize("name", names())
def test_fixture_round_trip(name):
    text = open(path(name), encoding="utf-8").read()
    assert presio.print_document(presio.parse(text)) == text


def test_minimal_document():
    doc = presio.parse(MINIMAL)
    assert doc.names("category") == ["C"]
    assert doc.category().objects == ["a"]


def test_unresolved_generator_in_relation():
    text = "data X\n  object a\n  f: a -> a\nend\n\nrelations R on X\n  (f *0 g) = f\nend\n"
    with pytest.raises(UnresolvedError) as e:
        presio.parse(text)
    assert e.value.line == 7
    assert e.value.code == "E-REF"


def test_unresolved_section_reference():
    with pytest.raises(UnresolvedError):
        presio.parse("relations R on Nowhere\nend\n")


def test_duplicate_ids():
    with pytest.raises(DuplicateError):
        presio.parse("category C\n  object a\n  object a\nend\n")
    with pytest.raises(DuplicateError):
        presio.parse(MINIMAL + "\n" + MINIMAL)


def test_syntax_error_position():
    text = "data X\n  object a\n  f: a -> a\n  c: (f *0 f => f\nend\n"
    with pytest.raises(ParseError) as e:
        presio.parse(text)
    assert e.value.line == 4
    assert e.value.col is not None and e.value.col > 3


def test_unterminated_section():
    with pytest.raises(ParseError):
        presio.parse("category C\n  object a\n")


def test_comments_survive():
    text = "# a comment\n\ncategory C\n  # inside\n  object a\nend\n"
    assert presio.print_document(presio.parse(text)) == text


def test_category_section_round_trip():
    C = FiniteCategory(["a", "b"], [("f", "a", "b"), ("g", "b", "a")],
                       {("g", "f"): "a", ("f", "g"): "b"}, name="C")
    doc = presio.PresentationDocument([presio.category_section(C, "C")])
    text = presio.print_document(doc)
    again = presio.parse(text).category("C")
    assert again.objects == C.objects and again.arrows == C.arrows
    assert presio.print_document(presio.parse(text)) == text


def test_fragment_document_rebuilds():
    doc = presio.read(path("trivial_point.2pres"))
    fdoc = presio.fragment_document(doc, ("quotient", "A"), 1)
    text = presio.print_document(fdoc)
    assert presio.print_document(presio.parse(text)) == text
    frag = presio.load_fragment(presio.parse(text))
    assert len(frag.classes()) == len(presio.load_fragment(fdoc).classes())


def test_stale_fragment_is_rejected():
    text = open(path("trivial_point_b1.2frag"), encoding="utf-8").read()
    lines = text.splitlines(keepends=True)
    # drop one class row from the stored table
    k = next(i for i, l in enumerate(lines) if l.startswith("  c1 "))
    bad = "".join(lines[:k] + lines[k + 1:])
    with pytest.raises(InputError):
        presio.load_fragment(presio.parse(bad))


names_st = st.from_regex(r"[a-z][a-z0-9_]{0,5}", fullmatch=True)


@given(st.lists(names_st, min_size=1, max_size=4, unique=True), st.data())
def test_generated_data_round_trips(objs, data):
    X = GeneratingData()
    for o in objs:
        X.add_object(o)
    arrows = []
    for i in range(data.draw(st.integers(0, 4))):
        s, t = data.draw(st.sampled_from(objs)), data.draw(st.sampled_from(objs))
        name = f"A{i}"
        arrows.append(X.add_arrow(name, s, t))
    doc = presio.PresentationDocument([presio.data_section(X, "X")])
    text = presio.print_document(doc)
    back = presio.parse(text)
    assert presio.print_document(back) == text
    assert list(back.data("X").decls) == list(X.decls)
