import random

import numpy as np
import pytest

from pfk.certify import Certificate
from pfk.corpus import random_certified_network
from pfk.errors import OddEdgeCount, OrderMismatch, WireMismatch
from pfk.netfile import load_network
from pfk.network import (CertifiedNetwork, Network, RotationSystem,
                         apply_edge_bases, brute_force_value, check_edge_order,
                         contract_network, pfaffian_matrices, pfaffian_value,
                         planar_spanning_tree_edge_order, values_agree)
from pfk.pfaffian import SkewMatrix, pfaffian, sign_flip
from pfk.registry import HADAMARD, HALF
from pfk.tensor import BasisMatrix, parse_tensor

from conftest import random_basis


def pair_network():
    g = parse_tensor("|00> + |11>", wires=(1, 2), kind="gate")
    c = parse_tensor("<00| + <11|", wires=(1, 2), kind="cogate")
    emb = RotationSystem({"G1": (1, 2), "C1": (2, 1)}, ("G1", 1))
    return Network({"G1": g}, {"C1": c}, embedding=emb)


# -- brute force -------------------------------------------------------------

def test_two_sat_brute_force(networks_dir):
    net = load_network(networks_dir / "two_sat.net").network
    assert brute_force_value(net) == 4


def test_unsatisfiable_network_is_zero(networks_dir):
    net = load_network(networks_dir / "unsatisfiable.net").network
    assert brute_force_value(net) == 0


def test_equal_pair_value():
    assert brute_force_value(pair_network()) == 2


def test_open_network_rejected_by_brute_force():
    g = parse_tensor("|00> + |11>", wires=(1, 2), kind="gate")
    c = parse_tensor("<0|", wires=(1,), kind="cogate")
    with pytest.raises(WireMismatch):
        brute_force_value(Network({"G": g}, {"C": c}))


def test_edge_on_two_gates_rejected():
    g = parse_tensor("|0>", wires=(1,), kind="gate")
    with pytest.raises(WireMismatch):
        Network({"G1": g, "G2": g}, {})


def test_disconnected_components_multiply():
    a = pair_network()
    g = parse_tensor("|0> + |1>", wires=(3,), kind="gate")
    c = parse_tensor("<0| + 2<1|", wires=(3,), kind="cogate")
    net = Network({**a.gates, "G2": g}, {**a.cogates, "C2": c})
    assert brute_force_value(net) == 6


def test_value_invariant_under_edge_bases(pyrng):
    rng = np.random.default_rng(3)
    for _ in range(10):
        net = random_certified_network(pyrng).network
        bases = {e: random_basis(rng) for e in net.edges}
        before = brute_force_value(net)
        after = brute_force_value(apply_edge_bases(net, bases))
        assert values_agree(before, after, 1e-9)


def test_partial_contraction_of_open_fragment():
    g = parse_tensor("|10> + |01> + |11>", wires=(4, 5), kind="gate")
    c = parse_tensor("<00| + <11|", wires=(5, 6), kind="cogate")
    out = contract_network(Network({"G3": g}, {"C1": c}))
    assert out.wires == (4, 6) or out.wires == (6, 4)
    assert len(out.coeffs) == 3


# -- edge orders -------------------------------------------------------------

def test_two_sat_order(networks_dir):
    net = load_network(networks_dir / "two_sat.net").network
    sigma = planar_spanning_tree_edge_order(net)
    assert sorted(sigma) == [1, 2, 3, 4, 5, 6]
    assert check_edge_order(net, sigma)
    assert check_edge_order(net, (1, 2, 3, 4, 5, 6))


def test_single_pair_order_is_a_rotation():
    sigma = planar_spanning_tree_edge_order(pair_network())
    assert sigma in ((1, 2), (2, 1))
    assert check_edge_order(pair_network(), sigma)


def test_random_orders_cover_every_edge_once(pyrng):
    for _ in range(30):
        net = random_certified_network(pyrng).network
        sigma = planar_spanning_tree_edge_order(net)
        assert sorted(sigma) == list(net.edges)
        assert check_edge_order(net, sigma)


def test_interleaved_blocks_fail_the_check(networks_dir):
    net = load_network(networks_dir / "unsatisfiable.net").network
    # gate G2 on (1, 2, 3), G1 on (4, 5, 6): 1 4 2 5 interleaves them
    assert not check_edge_order(net, (1, 4, 2, 5, 3, 6))


# -- Pfaffian evaluation -----------------------------------------------------

def test_two_sat_matrices(networks_dir):
    cn = load_network(networks_dir / "two_sat.net").certified()
    xi, theta, scale = pfaffian_matrices(cn, (1, 2, 3, 4, 5, 6))
    k = 5 ** 0.5 / 2 + 1.5
    m = (sign_flip(theta) + xi).to_numpy()
    want = np.zeros((6, 6))
    for i, j, v in ((1, 2, k), (3, 4, k), (5, 6, k), (1, 6, -1), (2, 3, -1), (4, 5, -1)):
        want[i - 1, j - 1], want[j - 1, i - 1] = v, -v
    assert np.allclose(m, want, atol=1e-12)
    assert abs(complex(pfaffian(sign_flip(theta) + xi)) - (8 + 4 * 5 ** 0.5)) < 1e-9
    assert abs(complex(scale) - (5 ** 0.5 / 2 - 0.5) ** 3) < 1e-12


def test_two_sat_pfaffian_value(networks_dir):
    cn = load_network(networks_dir / "two_sat.net").certified()
    assert abs(complex(pfaffian_value(cn)) - 4) < 1e-9


def test_equal_pair_pfaffian_value(networks_dir):
    cn = load_network(networks_dir / "equal_pair.net").certified()
    assert values_agree(pfaffian_value(cn), 2, 1e-12)


def test_odd_edge_count_rejected():
    g = parse_tensor("|000> + |111>", kind="gate")
    c = parse_tensor("<000| + <111|", kind="cogate")
    net = Network({"G": g}, {"C": c})
    certs = {
        "G": Certificate([HADAMARD] * 3, 2, SkewMatrix((1, 2, 3), [[0, 1, 1], [-1, 0, 1], [-1, -1, 0]])),
        "C": Certificate([HADAMARD] * 3, 1, SkewMatrix.zero((1, 2, 3))),
    }
    with pytest.raises(OddEdgeCount):
        pfaffian_value(CertifiedNetwork(net, certs), (1, 2, 3))


def test_incomplete_order_rejected(networks_dir):
    cn = load_network(networks_dir / "two_sat.net").certified()
    with pytest.raises(OrderMismatch):
        pfaffian_value(cn, (1, 2, 3))


def test_mismatched_edge_bases_rejected():
    net = pair_network()
    certs = {
        "G1": Certificate([HADAMARD, HADAMARD], 2, SkewMatrix((1, 2), [[0, 1], [-1, 0]])),
        "C1": Certificate([HALF, HALF], 2, SkewMatrix((1, 2), [[0, 1], [-1, 0]])),
    }
    with pytest.raises(WireMismatch):
        CertifiedNetwork(net, certs)


@pytest.mark.parametrize("seed", range(25))
def test_pfaffian_value_matches_brute_force(seed):
    rng = random.Random(seed)
    cn = random_certified_network(rng)
    want = brute_force_value(cn.network)
    assert values_agree(pfaffian_value(cn), want)
    for g in cn.network.gates:
        sigma = planar_spanning_tree_edge_order(cn.network, root=g, start=rng.randrange(4))
        assert values_agree(pfaffian_value(cn, sigma), want)
