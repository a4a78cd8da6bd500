import random

import pytest

from pfk.corpus import random_certified_network
from pfk.errors import ParseError
from pfk.netfile import (certified_to_file, parse_certificate_file,
                         parse_network, parse_order, serialize_network)
from pfk.network import brute_force_value, pfaffian_value, values_agree

from conftest import NETWORKS

NET_FILES = sorted(NETWORKS.glob("*.net"))


@pytest.mark.parametrize("path", NET_FILES, ids=lambda p: p.name)
def test_round_trip(path):
    first = parse_network(path.read_text(), source=path.name)
    text = serialize_network(first)
    second = parse_network(text)
    assert second.network == first.network
    assert serialize_network(second) == text
    assert set(second.bases) == set(first.bases)
    for e, b in first.bases.items():
        assert second.bases[e].allclose(b)


def _closed_and_certified(path):
    text = path.read_text()
    return "certificate" in text and parse_network(text).network.is_closed()


@pytest.mark.parametrize("path", [p for p in NET_FILES if _closed_and_certified(p)],
                         ids=lambda p: p.name)
def test_certified_files_evaluate_consistently(path):
    nf = parse_network(path.read_text())
    cn = nf.certified()
    assert all(cn.verify().values())
    assert values_agree(pfaffian_value(cn), brute_force_value(nf.network))


@pytest.mark.parametrize("seed", range(10))
def test_corpus_round_trip(seed):
    cn = random_certified_network(random.Random(seed))
    text = serialize_network(certified_to_file(cn))
    again = parse_network(text).certified()
    assert again.network == cn.network
    assert values_agree(pfaffian_value(again), pfaffian_value(cn), 1e-12)


@pytest.mark.parametrize("text, line", [
    ("edges 2\ngate G on 1 2 { |00> + |1x> }\n", 2),
    ("edges 2\nfrobnicate\n", 2),
    ("edges 1\ngate G on 1 { |0> }\ncogate C on 1 { <0| }\nbasis 1 = [[1, 0], [0]]\n", 4),
    ("edges 2\ngate G on 1 2 { |00>\n", 2),
])
def test_parse_errors_carry_positions(text, line):
    with pytest.raises(ParseError) as info:
        parse_network(text, source="bad.net")
    assert info.value.line == line
    assert info.value.col >= 1
    assert str(info.value).startswith(f"bad.net:{line}:")


def test_parse_error_column_points_into_the_tensor():
    text = "edges 2\ngate G on 1 2 { |00> + |1x> }\n"
    with pytest.raises(ParseError) as info:
        parse_network(text)
    assert info.value.col > len("gate G on 1 2 { ")


def test_unused_edge_is_an_error():
    with pytest.raises(ParseError):
        parse_network("edges 3\ngate G on 1 2 { |00> }\ncogate C on 1 2 { <00| }\n")


def test_certificate_file_and_order():
    cert = parse_certificate_file((NETWORKS / "equal4_target.cert").read_text(), (1, 2, 3, 4))
    assert cert.matrix.labels == (1, 2, 3, 4)
    assert len(cert.bases) == 4
    assert parse_order((NETWORKS / "equal4_fragment.order").read_text()) == [5, 2, 1, 6, 4, 3]
    with pytest.raises(ParseError):
        parse_order("# nothing\n")
    with pytest.raises(ParseError):
        parse_certificate_file("basis 1 = [[1, 0], [0, 1]]\n", (1,))
