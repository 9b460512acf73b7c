import json

import pytest

from covhom import builders
from covhom.algebra import QQ
from covhom.documents import (
    ArrangementDocument,
    ComplexDocument,
    PresentationDocument,
    SchemaError,
    complex_document,
    dumps,
    load_document,
    loads,
    packaged_data,
    parse_document,
    presentation_document,
)
from covhom.fox import heisenberg
from covhom.simplicial import betti_numbers

CORPUS = ["circle", "torus", "klein", "wedge", "heisenberg", "trefoil", "heisenberg_complex", "boolean", "triangle_graph", "monomial_313"]


@pytest.mark.parametrize("name", CORPUS)
def test_packaged_corpus_loads(name):
    doc = load_document(packaged_data(f"{name}.json"))
    assert doc.name == name


def test_complex_round_trip():
    X, cm = builders.klein_bottle()
    doc = parse_document(loads(dumps(complex_document("k", X, cm))))
    assert isinstance(doc, ComplexDocument)
    assert doc.complex.counts() == X.counts()
    assert betti_numbers(doc.complex, QQ) == [1, 1, 0]
    assert doc.circle_map.heights == cm.heights


def test_presentation_round_trip():
    doc = parse_document(loads(dumps(presentation_document("h", heisenberg()))))
    assert isinstance(doc, PresentationDocument)
    assert doc.presentation.relators == heisenberg().relators


def test_heights_as_object_and_reordering():
    text = json.dumps({
        "kind": "complex",
        "vertices": ["a", "b", "c"],
        "simplices": [["a", "b"], ["b", "c"], ["a", "c"]],
        "circle_map": {"N": 3, "heights": {"a": 0, "b": 1, "c": 2}},
    })
    doc = parse_document(loads(text))
    # the crossing edge forces c before a
    order = list(doc.complex.vertices)
    assert order.index("c") < order.index("a")


def test_arrangement_variants():
    forms = parse_document(loads('{"kind": "arrangement", "forms": [[1, 0], [0, 1], ["1/2", 1]]}'))
    assert isinstance(forms, ArrangementDocument) and forms.arrangement.size == 3
    mono = parse_document(loads('{"kind": "arrangement", "monomial": {"p": 2, "n": 3}}'))
    assert mono.arrangement.size == 9


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ('{\n "kind": "complex",\n "simplices": [[1, 2],\n}', 4, "Expecting value"),
        ('{\n "kind": "widget"\n}', 1, "unknown kind"),
        ('{\n "kind": "complex"\n}', 1, "simplices"),
        ('{"kind": "complex", "simplices": [[1, 2]],\n "circle_map": {\n  "N": 3}}', 2, "heights"),
        ('{"kind": "complex", "simplices": [[1, 2]],\n "circle_map": {"N": 4, "heights": [0, 2]}}', 2, "non-adjacent"),
        ('{"kind": "presentation", "generators": ["x"],\n "relators": ["x q"], "weights": [0]}', 1, "unknown generator"),
        ('{"kind": "arrangement", "boolean": 2,\n "weights": [1]}', 1, "one integer per hyperplane"),
        ('{"kind": "arrangement"}', 1, "needs one of"),
    ],
)
def test_schema_errors_carry_lines(text, line, fragment):
    with pytest.raises(SchemaError) as info:
        parse_document(loads(text, "doc.json"), "doc.json", need_map=False)
    assert fragment in str(info.value)
    assert info.value.line == line


def test_map_required_for_cover_jobs():
    with pytest.raises(SchemaError, match="circle_map"):
        parse_document(loads('{"kind": "complex", "simplices": [[1, 2]]}'), need_map=True)


def test_unreadable_file(tmp_path):
    with pytest.raises(SchemaError, match="cannot read"):
        load_document(tmp_path / "absent.json")
