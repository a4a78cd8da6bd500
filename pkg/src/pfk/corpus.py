"""Random certified planar networks built from registry blocks.

A network is grown face by face on the plane.  The open wires on the
outer boundary are kept as a cyclic list; a new block is hung from one
open wire (its other wires take that wire's place on the boundary), and two
neighbouring open wires of opposite kind and equal basis may be joined,
which closes a bounded face.  Whatever is left open at the end is sealed
with one-wire caps, which exist for every basis:

* gate cap under ``M``: ``M^-1 |0>``  (so ``M g = sPf([0])``),
* cogate cap under ``M``: ``<1| M``   (so ``(M^-1) c = sPf*([0])``).

The result is a closed, planar, bipartite network with a rotation system
and one certificate per tensor; its brute-force value is the oracle for
the Pfaffian evaluator.
"""

from dataclasses import dataclass

from .certify import Certificate
from .network import CertifiedNetwork, Network, RotationSystem
from .pfaffian import SkewMatrix
from .registry import registry
from .tensor import COGATE, GATE, Tensor


@dataclass(frozen=True)
class Block:
    """A certified tensor with wires ``1..n``; ``keys[p]`` names the basis
    on wire ``p`` so that only equal bases are ever joined."""

    name: str
    tensor: Tensor
    cert: Certificate
    keys: tuple


def _basis_key(b):
    return tuple(complex(x) for x in (b[0, 0], b[0, 1], b[1, 0], b[1, 1]))


def registry_blocks(max_arity=4):
    """Every registry entry of arity ``<= max_arity`` as a :class:`Block`."""
    out = []
    for name, e in registry().items():
        t = e.tensor
        if t.arity > max_arity:
            continue
        wires = tuple(range(1, t.arity + 1))
        t = t.relabeled(dict(zip(t.wires, wires)))
        cert = e.certificate.relabeled(wires)
        out.append(Block(name, t, cert, tuple(_basis_key(b) for b in cert.bases)))
    return out


def cap_block(basis, kind):
    """One-wire cap that is Pfaffian under ``basis`` (scale 1, matrix [0])."""
    if kind == GATE:
        inv = basis.inverse()
        t = Tensor((1,), {0: inv[0, 0], 1: inv[1, 0]})
    else:
        t = Tensor((1,), {0: basis[1, 0], 1: basis[1, 1]}, bra=True)
    cert = Certificate((basis,), 1, SkewMatrix((1,), [[0]]))
    return Block(f"cap.{kind}", t, cert, (_basis_key(basis),))


@dataclass
class _Port:
    vertex: str
    pos: int          # 0-based wire position on the vertex
    kind: str         # kind of the vertex owning the port
    key: tuple
    basis: object


def _instantiate(block, vname):
    t = block.tensor
    return [_Port(vname, p, t.kind, block.keys[p], block.cert.bases[p])
            for p in range(t.arity)]


def random_certified_network(rng, max_edges=12, max_blocks=8, blocks=None,
                             tries=200):
    """A random closed planar :class:`CertifiedNetwork` with an even number
    of edges (at most ``max_edges``).  ``rng`` is a ``random.Random``."""
    blocks = registry_blocks() if blocks is None else blocks
    for _ in range(tries):
        out = _attempt(rng, max_edges, max_blocks, blocks)
        if out is not None:
            return out
    raise RuntimeError("could not build a network within the edge budget")


def _attempt(rng, max_edges, max_blocks, blocks):
    vertices = {}           # name -> Block
    ports = {}              # name -> list of _Port
    links = []              # (port_a, port_b)
    counter = [0]

    def add(block):
        counter[0] += 1
        name = f"{'G' if block.tensor.kind == GATE else 'C'}{counter[0]}"
        vertices[name] = block
        ports[name] = _instantiate(block, name)
        return name

    first = add(rng.choice(blocks))
    # the boundary is listed in face-walk order: keeping the outer face on
    # the left, a walk passes a vertex's wires in clockwise order
    boundary = list(reversed(ports[first]))
    target = rng.randint(2, max_blocks)
    while len(vertices) < target and boundary:
        i = rng.randrange(len(boundary))
        p = boundary[i]
        want = COGATE if p.kind == GATE else GATE
        cands = [b for b in blocks if b.tensor.kind == want and p.key in b.keys]
        if not cands:
            break
        b = rng.choice(cands)
        j = rng.choice([k for k, key in enumerate(b.keys) if key == p.key])
        name = add(b)
        q = ports[name]
        links.append((p, q[j]))
        n = len(q)
        # the walk arrives along q[j] and leaves clockwise: q[j-1], q[j-2], ...
        boundary[i:i + 1] = [q[(j - s) % n] for s in range(1, n)]
        # occasionally close a face between neighbouring open wires
        if len(boundary) >= 2 and rng.random() < 0.5:
            _join_some(rng, boundary, links)
    # seal: join neighbours or cap; odd totals are rejected
    closing = []
    while boundary:
        if len(boundary) >= 2 and rng.random() < 0.5:
            idx = _joinable(boundary)
            if idx is not None:
                a, b = boundary[idx], boundary[(idx + 1) % len(boundary)]
                links.append((a, b))
                for x in sorted({idx, (idx + 1) % len(boundary)}, reverse=True):
                    boundary.pop(x)
                continue
        closing.append(boundary.pop(0))
    total = len(links) + len(closing)
    if total % 2 or total > max_edges or total == 0:
        return None
    for p in closing:
        want = COGATE if p.kind == GATE else GATE
        cap = cap_block(p.basis, want)
        name = add(cap)
        links.append((p, ports[name][0]))
    return _assemble(vertices, ports, links)


def _joinable(boundary):
    n = len(boundary)
    for i in range(n if n > 2 else 1):
        a, b = boundary[i], boundary[(i + 1) % n]
        if a.kind != b.kind and a.key == b.key and a.vertex != b.vertex:
            return i
    return None


def _join_some(rng, boundary, links):
    n = len(boundary)
    opts = []
    for i in range(n if n > 2 else 1):
        a, b = boundary[i], boundary[(i + 1) % n]
        if a.kind != b.kind and a.key == b.key:
            opts.append(i)
    if not opts:
        return
    i = rng.choice(opts)
    a, b = boundary[i], boundary[(i + 1) % n]
    links.append((a, b))
    for x in sorted({i, (i + 1) % n}, reverse=True):
        boundary.pop(x)


def _assemble(vertices, ports, links):
    wire_edge = {}
    for e, (a, b) in enumerate(links, 1):
        wire_edge[(a.vertex, a.pos)] = e
        wire_edge[(b.vertex, b.pos)] = e
    gates, cogates, certs, rotation = {}, {}, {}, {}
    for name, block in vertices.items():
        wires = tuple(wire_edge[(name, p)] for p in range(block.tensor.arity))
        mapping = dict(zip(block.tensor.wires, wires))
        t = block.tensor.relabeled(mapping)
        (gates if t.kind == GATE else cogates)[name] = t
        certs[name] = block.cert.relabeled(wires)
        rotation[name] = wires
    # any face may serve as the unbounded one; take the face left of the
    # first gate's first wire
    first = next(iter(gates))
    emb = RotationSystem(rotation, (first, gates[first].wires[0]))
    net = Network(gates, cogates, embedding=emb)
    return CertifiedNetwork(net, certs)
