import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperbound import CapacityMap, build
from hyperbound.errors import (DuplicateEdgeId, EmptyOwnerList, HyperboundError, IntegerOverflow,
                               MalformedLine)
from hyperbound.formats import (FORMAT_VERSION, parse_capacities, parse_edge_list, parse_selected,
                                serialize_capacities, serialize_edge_list, write_bundle)

from strategies import instances


def test_single_line():
    g = parse_edge_list("1\t7,9\t")
    assert g.edge(1).owners == {7, 9} and g.edge(1).weight is None


def test_two_field_line_and_weight():
    g = parse_edge_list("1\t7\n2\t7,8\t2.5\n")
    assert g.edge(2).weight == 2.5 and g.num_edges == 2


def test_comments_blank_and_crlf():
    g = parse_edge_list("# header\n\n1\t7\t\r\n   \n2\t8\t1e-3\n")
    assert g.num_edges == 2 and g.edge(2).weight == 0.001


@pytest.mark.parametrize("text, exc, line", [
    ("1\t\t", EmptyOwnerList, 1),
    ("1\t2\n\nx\t3\n", MalformedLine, 3),
    ("1\t2,-3\n", MalformedLine, 1),
    ("1\t2\tabc\n", MalformedLine, 1),
    ("1\t2\tnan\n", MalformedLine, 1),
    ("1\t2\t-1\n", MalformedLine, 1),
    ("1\t2\t1e999\n", MalformedLine, 1),
    ("1\t2\t3\t4\n", MalformedLine, 1),
    ("1 2\n", MalformedLine, 1),
    ("1\t2,,3\n", MalformedLine, 1),
    ("1\t٢\n", MalformedLine, 1),
    ("1\t2\n2\t3\n1\t4\n", DuplicateEdgeId, 3),
    ("18446744073709551616\t1\n", IntegerOverflow, 1),
    ("1\t18446744073709551616\n", IntegerOverflow, 1),
])
def test_parse_errors(text, exc, line):
    with pytest.raises(exc) as info:
        parse_edge_list(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_max_u64_accepted():
    big = 2**64 - 1
    g = parse_edge_list(f"{big}\t{big}\t\n")
    assert g.edge(big).owners == {big}


def test_serialize_canonical_owner_order():
    g = build([(5, [9, 3, 3, 7], 1.5), (2, [1])])
    assert serialize_edge_list(g) == "5\t3,7,9\t1.5\n2\t1\t\n"


@given(instances(max_users=30, max_edges=20),
       st.lists(st.one_of(st.none(), st.floats(0, 1e6, allow_nan=False)), min_size=20, max_size=20))
def test_round_trip(inst, weights):
    g0, caps = inst
    g = build([(h.id, list(h.owners), weights[i]) for i, h in enumerate(g0.edges())])
    text = serialize_edge_list(g)
    g2 = parse_edge_list(text)
    assert g2 == g
    assert serialize_edge_list(g2) == text


@given(st.lists(st.tuples(st.integers(0, 50), st.lists(st.integers(0, 20), min_size=1, max_size=4)),
                max_size=15, unique_by=lambda t: t[0]))
def test_text_round_trip_modulo_owner_order(rows):
    text = "".join(f"{e}\t{','.join(map(str, own))}\t\n" for e, own in rows)
    canonical = "".join(f"{e}\t{','.join(map(str, sorted(set(own))))}\t\n" for e, own in rows)
    assert serialize_edge_list(parse_edge_list(text)) == canonical


def test_capacities():
    caps = parse_capacities("# users\n7\t3\n9\t0\n", default=2)
    assert caps == CapacityMap(2, {7: 3, 9: 0})
    assert serialize_capacities(caps) == "7\t3\n9\t0\n"
    with pytest.raises(MalformedLine) as info:
        parse_capacities("7\t3\n7\t1\n")
    assert info.value.line == 2
    with pytest.raises(MalformedLine):
        parse_capacities("7\t-1\n")


def test_capacity_override_vertices_join_graph():
    caps = parse_capacities("99\t4\n")
    g = parse_edge_list("1\t7\t\n", caps)
    assert g.vertices == [7, 99]


def test_bundle(tmp_path):
    sel, summ = tmp_path / "sel.txt", tmp_path / "sum.json"
    write_bundle(sel, summ, {3, 1, 2}, {"report": {"matched_count": 3}})
    assert sel.read_text() == "1\n2\n3\n"
    assert parse_selected(sel.read_text()) == [1, 2, 3]
    doc = json.loads(summ.read_text())
    assert doc["format"] == FORMAT_VERSION == "hyperbound/1"


def test_bundle_mismatch_detected(tmp_path):
    with pytest.raises(HyperboundError):
        write_bundle(tmp_path / "s", tmp_path / "j", {1}, {"report": {"matched_count": 2}})
    assert not (tmp_path / "j").exists()
