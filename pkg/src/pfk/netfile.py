"""Reader/writer for the line-oriented network file format.

::

    # the 2-SAT network
    edges 6
    gate G1 on 1 6 { |10> + |01> + |11> }
    cogate C1 on 5 6 { <00| + <11| }
    rotation G1: 1 6
    outer G1 1
    order 1 2 3 4 5 6
    basis 1 = [[1, 1], [1, -1]]
    certificate G1 alpha 1 xi = [[0, -1], [1, 0]]
    certificate C1 beta 1/2 theta = [[0, 1], [-1, 0]]

A statement may continue over several lines while a ``{`` or ``[`` is
open.  Edges without a ``basis`` line use the identity.  ``alpha``/``beta``
and ``xi``/``theta`` are interchangeable keywords.
"""

import re
from dataclasses import dataclass, field

from .certify import Certificate
from .errors import ParseError, PfkError
from .network import CertifiedNetwork, Network, RotationSystem
from .pfaffian import SkewMatrix
from .scalars import format_scalar, parse_scalar
from .tensor import BasisMatrix, format_tensor, parse_matrix, parse_tensor


@dataclass
class NetworkFile:
    network: Network
    bases: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)  # name -> (scale, SkewMatrix)

    def edge_basis(self, e):
        return self.bases.get(e) or BasisMatrix.identity()

    def certified(self):
        """Build a :class:`CertifiedNetwork` from the file's certificates."""
        net = self.network
        certs = {}
        for name, t in net.tensors.items():
            if name not in self.certificates:
                raise PfkError(f"no certificate for {name}")
            scale, m = self.certificates[name]
            certs[name] = Certificate(tuple(self.edge_basis(e) for e in t.wires),
                                      scale, m.relabeled(t.wires))
        return CertifiedNetwork(net, certs)


def _statements(text, source=None):
    """Yield ``(line_number, statement)`` joining bracket continuations."""
    buf, start, depth = [], None, 0
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip() and not buf:
            continue
        if not buf:
            start = no
        buf.append(line.strip())
        depth += sum(line.count(c) for c in "{[(") - sum(line.count(c) for c in "}])")
        if depth <= 0:
            yield start, " ".join(buf)
            buf, depth = [], 0
    if buf:
        raise ParseError("unterminated bracket", start, 1, source)


_GATE = re.compile(r"^(gate|cogate)\s+(\S+)\s+on\s+([\d\s]*?)\s*\{(.*)\}\s*$")
_CERT = re.compile(r"^certificate\s+(\S+)\s+(alpha|beta)\s+(.+?)\s+(xi|theta)\s*=\s*(\[.*\])\s*$")


def _within(fn, fragment, st, line):
    """Run ``fn(fragment)``; re-raise parse errors at the fragment's column."""
    try:
        return fn(fragment)
    except ParseError as exc:
        col = max(st.find(fragment), 0) + (exc.col or 1)
        raise ParseError(exc.message, line, col) from None


def _ints(text, line):
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise ParseError(f"expected edge numbers, got {text!r}", line, 1) from None


def parse_network(text, source=None):
    """Parse network-file text into a :class:`NetworkFile`."""
    edges = None
    gates, cogates = {}, {}
    rotation, outer, order = {}, None, None
    bases, certs = {}, {}
    for line, st in _statements(text, source):
        try:
            head = st.split(None, 1)[0]
            if head == "edges":
                body = st[5:].strip()
                if body.startswith("{"):
                    edges = _ints(body.strip("{}"), line)
                else:
                    vals = _ints(body, line)
                    if len(vals) != 1:
                        raise ParseError("use 'edges N' or 'edges {list}'", line, 1)
                    edges = list(range(1, vals[0] + 1))
            elif head in ("gate", "cogate"):
                m = _GATE.match(st)
                if not m:
                    raise ParseError(f"malformed {head} statement", line, 1)
                kind, name, wires, body = m.groups()
                if name in gates or name in cogates:
                    raise ParseError(f"duplicate name {name}", line, 1)
                t = _within(lambda b: parse_tensor(b, wires=_ints(wires, line), kind=kind),
                            body, st, line)
                (gates if kind == "gate" else cogates)[name] = t
            elif head == "rotation":
                m = re.match(r"^rotation\s+(\S+?)\s*:\s*(.*)$", st)
                if not m:
                    raise ParseError("malformed rotation statement", line, 1)
                rotation[m.group(1)] = _ints(m.group(2), line)
            elif head == "outer":
                parts = st.split()
                if len(parts) != 3:
                    raise ParseError("use 'outer NAME EDGE'", line, 1)
                outer = (parts[1], _ints(parts[2], line)[0])
            elif head == "order":
                order = _ints(st[5:], line)
            elif head == "basis":
                m = re.match(r"^basis\s+(\d+)\s*=\s*(\[.*\])\s*$", st)
                if not m:
                    raise ParseError("malformed basis statement", line, 1)
                bases[int(m.group(1))] = _within(BasisMatrix.parse, m.group(2), st, line)
            elif head == "certificate":
                m = _CERT.match(st)
                if not m:
                    raise ParseError("malformed certificate statement", line, 1)
                name, _, scale, _, mat = m.groups()
                rows = _within(parse_matrix, mat, st, line)
                certs[name] = (_within(parse_scalar, scale, st, line),
                               SkewMatrix(range(1, len(rows) + 1), rows))
            else:
                raise ParseError(f"unknown statement {head!r}", line, 1)
        except ParseError as exc:
            raise ParseError(exc.message, exc.line or line, exc.col, source) from None
        except PfkError as exc:
            raise ParseError(str(exc), line, 1, source) from None
    emb = RotationSystem(rotation, outer) if rotation else None
    try:
        net = Network(gates, cogates, embedding=emb, order=order, edges=edges)
    except PfkError as exc:
        raise ParseError(str(exc), None, None, source) from None
    for name, (_, m) in certs.items():
        t = net.tensors.get(name)
        if t is None:
            raise ParseError(f"certificate for unknown tensor {name}", None, None, source)
        if m.n != t.arity:
            raise ParseError(f"certificate matrix of {name} has the wrong size",
                             None, None, source)
    return NetworkFile(net, bases, {n: (s, m) for n, (s, m) in certs.items()})


def parse_certificate_file(text, wires, source=None):
    """Read a single tensor's certificate: ``basis <wire> = M`` lines (one
    per wire in ``wires``) and one ``certificate <name> alpha|beta s
    xi|theta = M`` line, whose matrix is labelled by ``wires``."""
    bases, cert = {}, None
    for line, st in _statements(text, source):
        try:
            head = st.split(None, 1)[0]
            if head == "basis":
                m = re.match(r"^basis\s+(\d+)\s*=\s*(\[.*\])\s*$", st)
                if not m:
                    raise ParseError("malformed basis statement", line, 1)
                bases[int(m.group(1))] = _within(BasisMatrix.parse, m.group(2), st, line)
            elif head == "certificate":
                m = _CERT.match(st)
                if not m:
                    raise ParseError("malformed certificate statement", line, 1)
                if cert is not None:
                    raise ParseError("more than one certificate", line, 1)
                _, _, scale, _, mat = m.groups()
                cert = (_within(parse_scalar, scale, st, line),
                        _within(parse_matrix, mat, st, line), line)
            else:
                raise ParseError(f"unknown statement {head!r}", line, 1)
        except ParseError as exc:
            raise ParseError(exc.message, exc.line or line, exc.col, source) from None
        except PfkError as exc:
            raise ParseError(str(exc), line, 1, source) from None
    if cert is None:
        raise ParseError("no certificate statement", None, None, source)
    scale, rows, line = cert
    wires = tuple(wires)
    if len(rows) != len(wires):
        raise ParseError(f"certificate matrix is {len(rows)}x{len(rows)} but the "
                         f"tensor has {len(wires)} wires", line, 1, source)
    missing = [w for w in wires if w not in bases]
    if missing:
        raise ParseError(f"no basis for wire(s) {missing}", None, None, source)
    try:
        matrix = SkewMatrix(wires, rows)
    except PfkError as exc:
        raise ParseError(str(exc), line, 1, source) from None
    return Certificate(tuple(bases[w] for w in wires), scale, matrix)


def parse_order(text, source=None):
    """Whitespace/comma separated edge ids (``#`` comments allowed)."""
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if line.strip():
            out.extend(_ints(line, no))
    if not out:
        raise ParseError("empty edge order", None, None, source)
    return out


def load_network(path):
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read(), source=str(path))


def serialize_network(nf):
    """Text that :func:`parse_network` reads back to an identical structure."""
    net = nf.network if isinstance(nf, NetworkFile) else nf
    bases = nf.bases if isinstance(nf, NetworkFile) else {}
    certs = nf.certificates if isinstance(nf, NetworkFile) else {}
    out = []
    edges = list(net.edges)
    if edges == list(range(1, len(edges) + 1)):
        out.append(f"edges {len(edges)}")
    else:
        out.append("edges {" + " ".join(map(str, edges)) + "}")
    for kind, group in (("gate", net.gates), ("cogate", net.cogates)):
        for name, t in group.items():
            out.append(f"{kind} {name} on {' '.join(map(str, t.wires))} "
                       f"{{ {format_tensor(t)} }}")
    if net.embedding is not None:
        for name, r in net.embedding.rotation.items():
            out.append(f"rotation {name}: {' '.join(map(str, r))}")
        if net.embedding.outer is not None:
            out.append(f"outer {net.embedding.outer[0]} {net.embedding.outer[1]}")
    if net.order is not None:
        out.append("order " + " ".join(map(str, net.order)))
    for e in sorted(bases):
        out.append(f"basis {e} = {bases[e].format()}")
    for name, (scale, m) in certs.items():
        kw = ("beta", "theta") if name in net.cogates else ("alpha", "xi")
        out.append(f"certificate {name} {kw[0]} {format_scalar(scale)} "
                   f"{kw[1]} = {m.format()}")
    return "\n".join(out) + "\n"


def certified_to_file(cn):
    """:class:`NetworkFile` holding the network, edge bases and certificates."""
    certs = {n: (c.scale, c.matrix.relabeled(range(1, c.matrix.n + 1)))
             for n, c in cn.certificates.items()}
    return NetworkFile(cn.network, dict(cn.edge_bases), certs)
