import json

import pytest

from posets.core import chain, from_covers
from posets.exceptions import CycleError, PosetFormatError, SizeLimit
from posets.config import LabConfig
from posets.render import dump_json, render_text, to_dot
from posets.serializers import load_poset, parse_poset, poset_to_dict


def test_parse_closes_generating_relation():
    P = parse_poset('{"size": 3, "covers": [[0, 1], [1, 2], [0, 2]]}')
    assert P == chain(3)
    assert P.labels is None


def test_parse_keeps_labels():
    P = parse_poset('{"size": 2, "covers": [[0, 1]], "labels": ["a", "b"]}')
    assert P.label(1) == "b"
    assert poset_to_dict(P) == {"size": 2, "covers": [[0, 1]], "labels": ["a", "b"]}


def test_poset_to_dict_omits_missing_labels():
    assert poset_to_dict(chain(2)) == {"size": 2, "covers": [[0, 1]]}


def test_invalid_json_reports_line():
    with pytest.raises(PosetFormatError) as exc:
        parse_poset('{\n"size": 2,\n"covers": [[0, 1]\n}')
    assert exc.value.line == 4


@pytest.mark.parametrize(
    "document",
    [
        {"size": 2, "covers": [[0, 2]]},
        {"size": 2, "covers": [[0]]},
        {"size": -1, "covers": []},
        {"size": 2, "covers": [], "labels": ["only one"]},
        {"covers": []},
    ],
)
def test_invalid_documents(document):
    with pytest.raises(PosetFormatError):
        parse_poset(json.dumps(document))


def test_cycles_are_rejected():
    with pytest.raises(CycleError):
        parse_poset('{"size": 2, "covers": [[0, 1], [1, 0]]}')


def test_size_bound_applies_to_files():
    with pytest.raises(SizeLimit) as exc:
        parse_poset('{"size": 5, "covers": []}', config=LabConfig(max_elements=4))
    assert exc.value.bound == 4


def test_load_poset(tmp_path, write_poset):
    P = from_covers(3, [(0, 2), (1, 2)])
    assert load_poset(write_poset(P)) == P
    with pytest.raises(PosetFormatError):
        load_poset(tmp_path / "missing.json")


def test_dump_json_is_canonical():
    assert dump_json({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


def test_to_dot():
    assert to_dot(chain(2)) == (
        'digraph poset {\n  rankdir=BT;\n  "0";\n  "1";\n  "0" -> "1";\n}\n'
    )
    labelled = chain(2).with_labels(["⊥", 'say "hi"'])
    assert '"⊥" -> "say \\"hi\\"";' in to_dot(labelled)


def test_render_text():
    assert render_text({"width": 2, "chain": [0, 1]}) == "chain: [0, 1]\nwidth: 2\n"
