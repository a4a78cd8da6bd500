import pytest

from pfk.certify import (Certificate, build_boolean_tree, census_under_fixed_bases,
                         certificate_residual, check_certificate,
                         check_decomposition, decomposition_report,
                         find_certificate_given_bases, run_paper_suite)
from pfk.errors import ArityMismatch, SizeLimit
from pfk.network import CertifiedNetwork, Network, contract_network
from pfk.pfaffian import SkewMatrix, sub_pfaffian
from pfk.registry import (CNOT1, GOLDEN, HADAMARD, HALF, SWAP, decomposition_fragment,
                          equal_tensor, get, golden_census, groups, registry)
from pfk.scalars import parse_scalar
from pfk.tensor import (BasisMatrix, apply_basis_change, complement_invariant,
                        contract, parse_tensor)

ID = BasisMatrix.identity()

GATES_1 = ["|0> + |1>"]
GATES_2 = ["|00> + |11>", "|10> + |01>", "|00> + |10> + |01> + |11>"]
GATES_3 = [
    "|000> + |111>", "|100> + |011>", "|010> + |101>", "|001> + |110>",
    "|000> + |100> + |011> + |111>", "|000> + |010> + |101> + |111>",
    "|000> + |001> + |110> + |111>", "|100> + |010> + |101> + |011>",
    "|100> + |001> + |110> + |011>", "|010> + |001> + |110> + |101>",
    "|000> + |100> + |010> + |101> + |011> + |111>",
    "|000> + |100> + |001> + |110> + |011> + |111>",
    "|000> + |010> + |001> + |110> + |101> + |111>",
    "|100> + |010> + |001> + |110> + |101> + |011>",
    "|000> + |100> + |010> + |001> + |110> + |101> + |011> + |111>",
]


def gate(text, wires=None):
    return parse_tensor(text, wires=wires, kind="gate")


def keyset(tensors):
    return {frozenset(t.coeffs) for t in tensors}


# -- checking certificates ---------------------------------------------------

def test_or_gate_certificate():
    cert = Certificate([GOLDEN] * 2, 1, SkewMatrix((1, 2), [[0, -1], [1, 0]]))
    assert check_certificate(gate("|10> + |01> + |11>"), cert)


def test_cnot_certificate():
    e = get("cnot.cnot1")
    assert e.tensor == gate(CNOT1)
    assert check_certificate(e.tensor, e.certificate)


def test_or_gate_fails_under_identity():
    cert = Certificate([ID] * 2, 1, SkewMatrix((1, 2), [[0, 1], [-1, 0]]))
    assert not check_certificate(gate("|10> + |01> + |11>"), cert)


def test_arity_mismatch():
    cert = Certificate([ID], 1, SkewMatrix.zero((1,)))
    with pytest.raises(ArityMismatch):
        check_certificate(gate("|00>"), cert)


@pytest.mark.parametrize("name", list(registry()))
def test_registry_entry_verifies(name):
    assert certificate_residual(get(name).tensor, get(name).certificate) < 1e-9


def test_registry_groups():
    g = groups()
    assert len(g["equal"]) == 14
    assert len(g["tree"]) == 5
    assert len(g["chain"]) == 4
    assert len(g["decomp"]) == 3


def test_equal_six_matches_all_ones_matrix():
    e = get("equal.gate_6")
    lhs = apply_basis_change(e.tensor, [HADAMARD] * 6)
    ones = SkewMatrix.from_upper(tuple(range(1, 7)),
                                 {(i, j): 1 for i in range(1, 7) for j in range(i + 1, 7)})
    assert lhs.allclose(sub_pfaffian(ones).scale(2))


# -- finding certificates ----------------------------------------------------

def test_find_equal3_under_mixed_bases():
    cert = find_certificate_given_bases(equal_tensor(3), [HADAMARD, HALF, HALF])
    assert cert.scale == 2
    want = SkewMatrix((1, 2, 3), [[0, parse_scalar("1/2"), parse_scalar("1/2")],
                                  [parse_scalar("-1/2"), 0, parse_scalar("1/4")],
                                  [parse_scalar("-1/2"), parse_scalar("-1/4"), 0]])
    assert cert.matrix == want


def test_find_trivial_certificate():
    cert = find_certificate_given_bases(gate("|0000>"), [ID] * 4)
    assert cert.scale == 1
    assert cert.matrix == SkewMatrix.zero((1, 2, 3, 4))


def test_swap_has_no_certificate_under_identity():
    assert find_certificate_given_bases(gate(SWAP), [ID] * 4) is None


def test_found_certificates_verify():
    for t in census_under_fixed_bases(3, gate_bases=[HADAMARD] * 3):
        cert = find_certificate_given_bases(t, [HADAMARD] * 3)
        assert cert is not None and check_certificate(t, cert)


# -- census ------------------------------------------------------------------

@pytest.mark.parametrize("arity, listed", [(1, GATES_1), (2, GATES_2), (3, GATES_3)])
def test_gate_census_small(arity, listed):
    found = census_under_fixed_bases(arity, gate_bases=[HADAMARD] * arity)
    assert keyset(found) == keyset(gate(t) for t in listed)
    assert all(complement_invariant(t) for t in found)


def test_gate_census_four_matches_reference_list():
    found = census_under_fixed_bases(4, gate_bases=[HADAMARD] * 4)
    assert len(found) == 117
    assert keyset(found) == keyset(golden_census())
    assert all(complement_invariant(t) for t in found)


@pytest.mark.parametrize("arity, count", [(1, 1), (2, 3), (3, 15), (4, 117)])
def test_cogate_census_counts(arity, count):
    found = census_under_fixed_bases(arity, cogate_bases=[HALF] * arity)
    assert len(found) == count
    assert all(t.kind == "cogate" for t in found)


def test_parallel_census_agrees():
    one = census_under_fixed_bases(3, gate_bases=[HADAMARD] * 3)
    two = census_under_fixed_bases(3, gate_bases=[HADAMARD] * 3, jobs=2)
    assert keyset(one) == keyset(two)


def test_complement_invariance_is_not_sufficient():
    t = gate("|0000> + |1000> + |0100> + |0010> + |0111> + |1011> + |1101> + |1111>")
    assert complement_invariant(t)
    assert frozenset(t.coeffs) not in keyset(golden_census())


def test_census_size_limit():
    with pytest.raises(SizeLimit):
        census_under_fixed_bases(5, gate_bases=[HADAMARD] * 5)


# -- Boolean trees -----------------------------------------------------------

@pytest.mark.parametrize("leaves", [1, 2, 3, 4, 5, 6])
def test_boolean_tree_behaves_like_equal(leaves):
    cn = build_boolean_tree(leaves)
    assert all(cn.verify().values())
    net = cn.network
    assert sorted(net.dangling) == list(range(1, leaves + 1))
    out = contract_network(net)
    want = equal_tensor(leaves, "cogate")
    assert out.permuted(want.wires).allclose(want)


def test_boolean_tree_two_leaves_closed_value():
    cn = build_boolean_tree(2)
    out = contract_network(cn.network)
    assert contract(out, equal_tensor(2, "gate")) == 2


# -- decomposition -----------------------------------------------------------

SPF_DISPLAY = (
    "|000000> + 1/2|110000> - 1/2|101000> + 1/2|011000> + 1/2|000110> "
    "- 1/2|000101> + 1/2|000011> + 1/4|110110> - 1/4|110101> + 1/4|110011> "
    "- 1/4|101110> + 1/4|101101> - 1/4|101011> + 1/4|011110> - 1/4|011101> "
    "+ 1/4|011011>"
)


def decomposition_inputs():
    target = get("decomp.equal4_gate")
    frag, sigma = decomposition_fragment()
    return target.tensor, target.certificate, frag, sigma


def test_decomposition_holds():
    assert check_decomposition(*decomposition_inputs())


def test_decomposition_intermediate_tensor():
    rep = decomposition_report(*decomposition_inputs())
    assert rep.spf.wires == (5, 1, 2, 6, 3, 4)
    assert len(rep.spf.coeffs) == 16
    assert rep.spf.allclose(gate(SPF_DISPLAY, wires=(5, 1, 2, 6, 3, 4)))
    assert rep.residual < 1e-9


def test_trivial_self_decomposition():
    e = get("equal.gate_4")
    frag = CertifiedNetwork(Network({"G": e.tensor}, {}), {"G": e.certificate})
    assert check_decomposition(e.tensor, e.certificate, frag, (1, 2, 3, 4))


@pytest.mark.parametrize("delta", [0.1, -0.1])
def test_perturbed_basis_breaks_decomposition(delta):
    target, cert, frag, sigma = decomposition_inputs()
    b = cert.bases[0]
    bumped = BasisMatrix(b[0, 0] + delta, b[0, 1], b[1, 0], b[1, 1])
    bad = Certificate((bumped,) + cert.bases[1:], cert.scale, cert.matrix)
    assert not check_decomposition(target, bad, frag, sigma)


# -- suite -------------------------------------------------------------------

def test_paper_suite_all_pass():
    lines = run_paper_suite()
    assert len(lines) == len(registry()) + 2
    assert all(ln.ok for ln in lines)
    assert lines[0].format().startswith("PASS ")
