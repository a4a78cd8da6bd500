"""Named Pfaffian certificates and change-of-basis matrices.

Every entry pairs a 0/1 tensor with a :class:`~pfk.certify.Certificate`
(bases, scale, skew matrix).  Constants with radicals are written as
expression literals and evaluated by :func:`~pfk.scalars.parse_scalar`, so
rational data stays exact and the rest becomes complex floats.

Groups
------
``golden``      OR gate / EQUAL cogate under the golden-ratio basis
``equal``       n-arity EQUAL gates (basis ``hadamard``) and cogates
                (basis ``half``), n = 2..8
``tree``        the five pieces of a heterogeneous Boolean tree
``join``        2-arity EQUAL / NOT gates and cogates under ``hadamard``
                and under ``half``
``bridge``      gate+cap pairs that carry a wire from one basis to the other
``cnot``        CNOT1 under a four-matrix heterogeneous basis
``chain``       CNOT12, CNOT1 and the two bridge cogates of the partial swap
``decomp``      EQUAL_4 and the EQUAL_3 / EQUAL_2 pieces of its Boolean-tree
                decomposition
"""

from dataclasses import dataclass
from functools import lru_cache

from .certify import Certificate, certificate_residual
from .errors import PfkError
from .pfaffian import SkewMatrix
from .scalars import parse_scalar
from .tensor import BasisMatrix, Tensor, parse_tensor


def _m(rows, name=None):
    return BasisMatrix.from_rows([[parse_scalar(str(x)) for x in r] for r in rows],
                                 name=name)


def _skew(labels, upper):
    """Skew matrix from an upper-triangle row list of expression strings."""
    n = len(labels)
    rows = [[0] * n for _ in range(n)]
    for i, row in enumerate(upper):
        for k, x in enumerate(row):
            j = i + 1 + k
            v = parse_scalar(str(x))
            rows[i][j] = v
            rows[j][i] = -v
    return SkewMatrix(labels, rows, check=False)


# ---------------------------------------------------------------------------
# bases
# ---------------------------------------------------------------------------

HADAMARD = _m([[1, 1], [1, -1]], "hadamard")
HALF = _m([[1, -1], ["1/2", "1/2"]], "half")
GOLDEN = _m([["(-5^(3/4) + 5^(5/4))/10", "5^(-1/4)"],
             ["(-5^(3/4) - 5^(5/4))/10", "5^(-1/4)"]], "golden")

CNOT_BASES = {
    "A": _m([[1, 1], ["-1/2", "1/2"]]),
    "B": _m([[0, 1], [-1, 0]]),
    "C": _m([["1/2", "-i/2"], ["-i", 1]]),
    "D": _m([["i", 1], ["-1/2", "-i/2"]]),
}

CHAIN_BASES = {
    "A": _m([[1, 1], ["-1/2", "1/2"]]),
    "B": _m([[0, 1], [-1, 0]]),
    "C": _m([[1, 1], ["-1/2", "1/2"]]),
    "D": _m([[0, "1/2"], [-2, 0]]),
    "E": _m([[-2, "2*i"], ["i/4", "-1/4"]]),
    "F": _m([["(-1+i)/2", "-1/2"], ["1-i", "-i"]]),
    "G": _m([["-i/2", "-1/2"], [1, "i"]]),
    "H": _m([[1, "-i"], ["-i/2", "1/2"]]),
    "I": _m([["i", 0], [0, "-i"]]),
    "J": _m([[1, -1], ["1/2", "1/2"]]),
}

_R3 = "2^(3/4)/2"
_R1 = "2^(1/4)/2"
DECOMP_BASES = {
    "A": _m([[f"i*{_R3}", f"i*{_R3}"], [f"i*{_R1}", f"-i*{_R1}"]]),
    "B": _m([[f"-{_R3}", _R3], [f"-{_R1}", f"-{_R1}"]]),
    "C": _m([[f"-{_R3}", f"-i*{_R3}"], [f"-i*{_R1}", f"-{_R1}"]]),
    "D": _m([[_R3, f"-i*{_R3}"], [f"-i*{_R1}", _R1]]),
    "E": _m([[_R3, f"-i*{_R3}"], [f"-i*{_R1}", _R1]]),
    "F": _m([[f"-{_R3}", f"-i*{_R3}"], [f"-i*{_R1}", f"-{_R1}"]]),
}

NAMED_BASES = {"hadamard": HADAMARD, "half": HALF, "golden": GOLDEN,
               "identity": BasisMatrix.identity()}

# ---------------------------------------------------------------------------
# tensors
# ---------------------------------------------------------------------------

CNOT1 = "|0000> + |0110> + |1011> + |1101>"
CNOT2 = "|0000> + |0111> + |1001> + |1110>"
CNOT12 = "|0000> + |1010> + |1101> + |0111>"
SWAP = "|0000> + |0101> + |1010> + |1111>"
CHAIN_TOP = "<100| + <010| + <001| + <111|"
CHAIN_BOTTOM = "<000| + <010| + <101|"
COMPLEMENT_FAIL = ("|0000> + |1000> + |0100> + |0010> + |0111> + |1011> "
                   "+ |1101> + |1111>")


def equal_tensor(n, kind="gate", wires=None):
    """``|0..0> + |1..1>`` (or the bra) on ``n`` wires."""
    wires = tuple(range(1, n + 1)) if wires is None else tuple(wires)
    return Tensor(wires, {0: 1, (1 << n) - 1: 1}, bra=(kind == "cogate"))


def cap_tensor(kind="gate", wire=1):
    """``|0> + |1>`` (or ``<0| + <1|``)."""
    return Tensor((wire,), {0: 1, 1: 1}, bra=(kind == "cogate"))


def _t(text, kind, wires=None):
    return parse_tensor(text, wires=wires, kind=kind)


@dataclass(frozen=True)
class Entry:
    name: str
    group: str
    tensor: Tensor
    certificate: Certificate

    def residual(self):
        return certificate_residual(self.tensor, self.certificate)


def _entry(out, name, group, tensor, bases, scale, upper):
    cert = Certificate(tuple(bases), parse_scalar(str(scale)),
                       _skew(tensor.wires, upper))
    if name in out:
        raise PfkError(f"duplicate registry name {name}")
    out[name] = Entry(name, group, tensor, cert)


def _ones(n, value):
    return [[value] * (n - 1 - i) for i in range(n)]


@lru_cache(maxsize=1)
def _build():
    out = {}
    A, B = HADAMARD, HALF

    _entry(out, "golden.or_gate", "golden", _t("|10> + |01> + |11>", "gate"),
           [GOLDEN] * 2, 1, [[-1], []])
    _entry(out, "golden.equal_cogate", "golden", _t("<00| + <11|", "cogate"),
           [GOLDEN] * 2, "sqrt(5)/2 - 1/2", [["sqrt(5)/2 + 3/2"], []])

    for n in range(2, 9):
        _entry(out, f"equal.gate_{n}", "equal", equal_tensor(n, "gate"),
               [A] * n, 2, _ones(n, 1))
        _entry(out, f"equal.cogate_{n}", "equal", equal_tensor(n, "cogate"),
               [B] * n, 2, _ones(n, "1/4"))

    _entry(out, "tree.equal2_cogate", "tree", equal_tensor(2, "cogate"),
           [A, A], "1/2", [[1], []])
    _entry(out, "tree.equal3_gate", "tree", equal_tensor(3, "gate"),
           [A, B, B], 2, [["1/2", "1/2"], ["1/4"], []])
    _entry(out, "tree.equal3_cogate", "tree", equal_tensor(3, "cogate"),
           [B, A, A], "1/2", [["1/2", "1/2"], [1], []])
    _entry(out, "tree.cap_cogate", "tree", cap_tensor("cogate"), [B], 2, [[]])
    _entry(out, "tree.cap_gate", "tree", cap_tensor("gate"), [A], 2, [[]])

    joins = [
        ("equal_gate", "|00> + |11>", "gate", {"hadamard": (2, 1), "half": (2, "1/4")}),
        ("not_gate", "|10> + |01>", "gate", {"hadamard": (2, -1), "half": (-2, "-1/4")}),
        ("equal_cogate", "<00| + <11|", "cogate",
         {"hadamard": ("1/2", 1), "half": (2, "1/4")}),
        ("not_cogate", "<10| + <01|", "cogate",
         {"hadamard": ("-1/2", -1), "half": (2, "-1/4")}),
    ]
    for stem, text, kind, data in joins:
        for bname, (scale, x) in data.items():
            _entry(out, f"join.{stem}_{bname}", "join", _t(text, kind),
                   [NAMED_BASES[bname]] * 2, scale, [[x], []])

    # gate -> cogate while switching the basis hadamard -> half, and back
    _entry(out, "bridge.hadamard_to_half.gate", "bridge",
           equal_tensor(3, "gate", (1, 2, 3)), [A, B, B], 2,
           [["1/2", "1/2"], ["1/4"], []])
    _entry(out, "bridge.hadamard_to_half.cap", "bridge", cap_tensor("cogate", 3),
           [B], 2, [[]])
    _entry(out, "bridge.half_to_hadamard.cogate", "bridge",
           equal_tensor(3, "cogate", (1, 2, 3)), [B, A, A], "1/2",
           [["1/2", "1/2"], [1], []])
    _entry(out, "bridge.half_to_hadamard.cap", "bridge", cap_tensor("gate", 3),
           [A], 2, [[]])

    cb = CNOT_BASES
    _entry(out, "cnot.cnot1", "cnot", _t(CNOT1, "gate"),
           [cb["A"], cb["B"], cb["C"], cb["D"]], 1,
           [["i/2", "-i", "-i/4"], [-2, "1/2"], [-1], []])

    ch = CHAIN_BASES
    _entry(out, "chain.cnot12", "chain", _t(CNOT12, "gate"),
           [ch["A"], ch["B"], ch["C"], ch["D"]], 1,
           [[0, "-1/4", 0], [0, 4], [0], []])
    _entry(out, "chain.cnot1", "chain", _t(CNOT1, "gate"),
           [ch["G"], ch["H"], ch["I"], ch["J"]], 1,
           [[1, -2, "i"], ["-1/2", "-i/4"], ["i/2"], []])
    _entry(out, "chain.top_cogate", "chain", _t(CHAIN_TOP, "cogate"),
           [ch["D"], ch["E"], ch["G"]], 1, [["-1/2", 8], ["-1/4"], []])
    _entry(out, "chain.bottom_cogate", "chain", _t(CHAIN_BOTTOM, "cogate"),
           [ch["C"], ch["F"], ch["H"]], 1, [["-i", "i/4"], [1], []])

    db = DECOMP_BASES
    _entry(out, "decomp.equal4_gate", "decomp", equal_tensor(4, "gate"),
           [db["C"], db["D"], db["E"], db["F"]], 1,
           [["1/2", "1/2", "-1/2"], ["-1/2", "1/2"], ["1/2"], []])
    _entry(out, "decomp.equal3_gate", "decomp", equal_tensor(3, "gate", (5, 1, 2)),
           [db["A"], db["B"], db["B"]], "i*2^(1/4)",
           [["1/2", "1/2"], ["1/2"], []])
    _entry(out, "decomp.equal2_cogate", "decomp", equal_tensor(2, "cogate", (5, 6)),
           [db["A"], db["A"]], "-sqrt(2)", [["1/2"], []])
    return out


def registry():
    """``{name: Entry}`` in a fixed order."""
    return dict(_build())


def get(name):
    try:
        return _build()[name]
    except KeyError:
        raise PfkError(f"no registry entry {name!r}") from None


def groups():
    out = {}
    for e in _build().values():
        out.setdefault(e.group, []).append(e.name)
    return out


def basis_by_name(name):
    try:
        return NAMED_BASES[name]
    except KeyError:
        raise PfkError(f"unknown basis {name!r}; known: "
                       f"{', '.join(sorted(NAMED_BASES))}") from None


DECOMP_ORDER = (5, 2, 1, 6, 4, 3)


def decomposition_fragment():
    """The two-EQUAL_3 + EQUAL_2 fragment open on wires 1..4, with its
    edge order.  Wires 5 and 6 are internal."""
    from .network import CertifiedNetwork, Network, RotationSystem

    g = get("decomp.equal3_gate")
    c = get("decomp.equal2_cogate")
    left = g.tensor
    right = g.tensor.relabeled({5: 6, 1: 3, 2: 4})
    gates = {"G1": left, "G2": right}
    cogates = {"C1": c.tensor}
    certs = {"G1": g.certificate, "G2": g.certificate.relabeled(right.wires),
             "C1": c.certificate}
    rot = RotationSystem({"G1": left.wires, "G2": right.wires, "C1": c.tensor.wires})
    net = Network(gates, cogates, embedding=rot)
    return CertifiedNetwork(net, certs), DECOMP_ORDER


def golden_census():
    """The 117 four-wire 0/1 gates Pfaffian under ``hadamard`` (reference
    list shipped with the package), as gate tensors on wires 1..4."""
    from importlib.resources import files

    text = files("pfk").joinpath("data/census4_hadamard.txt").read_text(encoding="utf-8")
    return [parse_tensor(ln, kind="gate") for ln in text.splitlines()
            if ln.strip() and not ln.lstrip().startswith("#")]
