"""Bipartite tensor contraction networks and their evaluation.

Two evaluators are provided:

* :func:`brute_force_value` contracts the tensors pairwise along a
  spanning tree (exponential in the number of open wires), and
* :func:`pfaffian_value` evaluates a certified planar network as a single
  Pfaffian, given an edge order obtained from
  :func:`planar_spanning_tree_edge_order`.
"""

from collections import deque

from .errors import (BudgetExceeded, MissingEmbedding, NotTreeConnectable,
                     OddEdgeCount, OrderMismatch, UnsupportedWireOrder,
                     WireMismatch)
from .pfaffian import (SkewMatrix, direct_sum_ordered, pfaffian, sign_flip,
                       sub_pfaffian)
from .scalars import close, normalize
from .tensor import (COGATE, GATE, Tensor, apply_basis_change,
                     apply_inverse_basis_change, contract)

DEFAULT_WORK_LIMIT = 50_000_000


class RotationSystem:
    """Counterclockwise edge order around every vertex plus an outer dart.

    ``outer = (vertex, edge)`` names the face lying to the left of the dart
    that leaves ``vertex`` along ``edge``; that face is the unbounded one.
    """

    __slots__ = ("rotation", "outer")

    def __init__(self, rotation, outer=None):
        self.rotation = {v: tuple(int(e) for e in es) for v, es in rotation.items()}
        self.outer = None if outer is None else (outer[0], int(outer[1]))

    def __eq__(self, other):
        return (isinstance(other, RotationSystem) and self.rotation == other.rotation
                and self.outer == other.outer)

    def __repr__(self):
        return f"RotationSystem({self.rotation}, outer={self.outer})"


class Network:
    """Gates and cogates (by name) sharing numbered edges.

    Every edge joins one gate wire to one cogate wire, except *dangling*
    edges of a fragment, which occur on a single tensor.
    """

    def __init__(self, gates, cogates, embedding=None, order=None, edges=None):
        self.gates = dict(gates)
        self.cogates = dict(cogates)
        for name, t in self.gates.items():
            if t.kind != GATE:
                raise WireMismatch(f"{name} is declared a gate but holds a {t.kind}")
        for name, t in self.cogates.items():
            if t.kind != COGATE and t.arity:
                raise WireMismatch(f"{name} is declared a cogate but holds a {t.kind}")
        clash = set(self.gates) & set(self.cogates)
        if clash:
            raise WireMismatch(f"names used twice: {sorted(clash)}")
        self.gate_of = {}
        self.cogate_of = {}
        for name, t in self.gates.items():
            for e in t.wires:
                if e in self.gate_of:
                    raise WireMismatch(f"edge {e} is on two gates")
                self.gate_of[e] = name
        for name, t in self.cogates.items():
            for e in t.wires:
                if e in self.cogate_of:
                    raise WireMismatch(f"edge {e} is on two cogates")
                self.cogate_of[e] = name
        used = set(self.gate_of) | set(self.cogate_of)
        self.edges = tuple(sorted(used if edges is None else set(edges)))
        unused = set(self.edges) - used
        if unused:
            raise WireMismatch(f"declared edges {sorted(unused)} are not used")
        if used - set(self.edges):
            raise WireMismatch(f"edges {sorted(used - set(self.edges))} are not declared")
        self.embedding = embedding
        self.order = None if order is None else tuple(int(e) for e in order)

    # -- structure -------------------------------------------------------
    @property
    def tensors(self):
        out = dict(self.gates)
        out.update(self.cogates)
        return out

    @property
    def dangling(self):
        return tuple(e for e in self.edges
                     if (e in self.gate_of) != (e in self.cogate_of))

    @property
    def internal(self):
        return tuple(e for e in self.edges if e in self.gate_of and e in self.cogate_of)

    def is_closed(self):
        return not self.dangling

    def neighbours(self, name):
        t = self.tensors[name]
        own = self.gate_of if name in self.gates else self.cogate_of
        other = self.cogate_of if name in self.gates else self.gate_of
        out = []
        for e in t.wires:
            if e in other and own[e] == name:
                out.append((e, other[e]))
        return out

    def components(self):
        """Tensor names grouped into connected components (gate-first order)."""
        names = list(self.gates) + list(self.cogates)
        seen = set()
        comps = []
        for start in names:
            if start in seen:
                continue
            comp = []
            queue = deque([start])
            seen.add(start)
            while queue:
                v = queue.popleft()
                comp.append(v)
                for _, w in self.neighbours(v):
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
            comps.append(comp)
        return comps

    def with_tensors(self, gates=None, cogates=None):
        return Network(self.gates if gates is None else gates,
                       self.cogates if cogates is None else cogates,
                       self.embedding, self.order, self.edges)

    def __eq__(self, other):
        return (isinstance(other, Network) and self.gates == other.gates
                and self.cogates == other.cogates and self.edges == other.edges
                and self.embedding == other.embedding and self.order == other.order)

    def __repr__(self):
        return (f"Network(gates={list(self.gates)}, cogates={list(self.cogates)}, "
                f"edges={list(self.edges)})")


class CertifiedNetwork:
    """A network together with one certificate per tensor.

    ``certificates[name]`` carries ``bases``, ``scale`` and ``matrix``; the
    basis of an edge is the one the certificates of both endpoints use for
    that wire.
    """

    def __init__(self, network, certificates):
        self.network = network
        self.certificates = dict(certificates)
        missing = [n for n in network.tensors if n not in self.certificates]
        if missing:
            raise WireMismatch(f"no certificate for {missing}")
        self.edge_bases = {}
        for name, t in network.tensors.items():
            cert = self.certificates[name]
            if len(cert.bases) != t.arity:
                raise WireMismatch(f"certificate of {name} has {len(cert.bases)} bases")
            if tuple(cert.matrix.labels) != t.wires:
                raise WireMismatch(f"certificate matrix of {name} is labeled "
                                   f"{cert.matrix.labels}, wires are {t.wires}")
            for e, b in zip(t.wires, cert.bases):
                prev = self.edge_bases.get(e)
                if prev is not None and not prev.allclose(b):
                    raise WireMismatch(f"edge {e} has different bases on its two ends")
                self.edge_bases[e] = b

    def verify(self):
        """Return ``{name: bool}`` from checking every certificate."""
        from .certify import check_certificate
        return {name: check_certificate(t, self.certificates[name])
                for name, t in self.network.tensors.items()}

    def __repr__(self):
        return f"CertifiedNetwork({self.network!r})"


# ---------------------------------------------------------------------------
# brute force
# ---------------------------------------------------------------------------

def _spanning_order(net, comp):
    """BFS order of a component rooted at its first gate."""
    root = next((v for v in comp if v in net.gates), comp[0])
    order = [root]
    seen = {root}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for _, w in net.neighbours(v):
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    return order


def contract_network(net, work_limit=DEFAULT_WORK_LIMIT):
    """Contract every internal edge; returns a scalar (closed network) or the
    tensor on the dangling edges."""
    tensors = net.tensors
    total = 1
    pieces = []
    work = 0
    for comp in net.components():
        acc = None
        for name in _spanning_order(net, comp):
            t = tensors[name]
            if acc is None:
                acc = t
                continue
            if isinstance(acc, Tensor):
                work += max(1, len(acc.coeffs)) * max(1, len(t.coeffs))
                if work > work_limit:
                    raise BudgetExceeded(f"brute-force contraction exceeded "
                                         f"{work_limit} term products")
                acc = contract(acc, t)
            else:
                acc = t.scale(acc)
        if isinstance(acc, Tensor) and acc.arity == 0:
            acc = acc.value()
        if isinstance(acc, Tensor):
            pieces.append(acc)
        else:
            total = total * acc
    if not pieces:
        return normalize(total)
    out = pieces[0]
    for p in pieces[1:]:
        out = contract(out, p)
    return out.scale(total)


def brute_force_value(net, work_limit=DEFAULT_WORK_LIMIT):
    """``val(net)`` by exhaustive contraction; components are multiplied."""
    if net.dangling:
        raise WireMismatch(f"network has dangling edges {list(net.dangling)}")
    return contract_network(net, work_limit)


def apply_edge_bases(net, bases):
    """Apply ``bases[e]`` to the gate end and its inverse to the cogate end
    of every listed edge.  The network value is unchanged."""
    from .tensor import BasisMatrix
    ident = BasisMatrix.identity()
    gates = {n: apply_basis_change(t, [bases.get(e, ident) for e in t.wires])
             for n, t in net.gates.items()}
    cogates = {n: apply_inverse_basis_change(t, [bases.get(e, ident) for e in t.wires])
               for n, t in net.cogates.items()}
    return net.with_tensors(gates, cogates)


# ---------------------------------------------------------------------------
# planar spanning tree edge order
# ---------------------------------------------------------------------------

def trace_faces(net):
    """Faces of the embedding as lists of corners ``(vertex, k)``.

    A face is traced keeping it on the left: arriving at ``w`` along edge
    ``e`` we leave along the edge preceding ``e`` in ``w``'s
    counterclockwise rotation.  Corner ``k`` of ``w`` is the angular sector
    between ``rot[k]`` and ``rot[k+1]``.  Returns ``(faces, outer_index)``.
    """
    emb = net.embedding
    if emb is None:
        raise MissingEmbedding("network has no rotation system")
    tensors = net.tensors
    rot = {}
    for name, t in tensors.items():
        r = emb.rotation.get(name)
        if r is None:
            raise MissingEmbedding(f"no rotation for {name}")
        if sorted(r) != sorted(t.wires):
            raise MissingEmbedding(f"rotation of {name} does not list its wires")
        rot[name] = r
    if net.dangling:
        raise MissingEmbedding("planar order needs a closed network")
    other = {}
    for e in net.edges:
        g, c = net.gate_of[e], net.cogate_of[e]
        other[(g, e)] = c
        other[(c, e)] = g
    index = {(v, e): k for v, r in rot.items() for k, e in enumerate(r)}
    seen = set()
    faces = []
    dart_face = {}
    for v in list(net.gates) + list(net.cogates):
        for e in rot[v]:
            if (v, e) in seen:
                continue
            face = []
            d = (v, e)
            while d not in seen:
                seen.add(d)
                dart_face[d] = len(faces)
                u, edge = d
                w = other[(u, edge)]
                k = (index[(w, edge)] - 1) % len(rot[w])
                face.append((w, k))
                d = (w, rot[w][k])
            faces.append(face)
    outer = None
    if emb.outer is not None:
        if emb.outer not in dart_face:
            raise MissingEmbedding(f"outer dart {emb.outer} is not in the network")
        outer = dart_face[emb.outer]
    comps = len(net.components())
    if len(tensors) - len(net.edges) + len(faces) != 2 * comps:
        raise MissingEmbedding("rotation system is not planar")
    return faces, outer


def _aux_links(net, faces, use):
    """Cycle links between consecutive gate corners of the chosen faces.

    Each link is ``(g1, k1, g2, k2)``: it leaves corner ``k1`` of ``g1`` as
    that corner's *next* link and enters corner ``k2`` of ``g2`` as its
    *previous* link.
    """
    links = []
    for f in use:
        corners = [(v, k) for v, k in faces[f] if v in net.gates]
        if len(corners) < 2:
            continue
        for i, (g1, k1) in enumerate(corners):
            g2, k2 = corners[(i + 1) % len(corners)]
            if g1 != g2:
                links.append((g1, k1, g2, k2))
    return links


def _bfs_tree(gates, links, root):
    adj = {g: [] for g in gates}
    for idx, (g1, _, g2, _) in enumerate(links):
        adj[g1].append((idx, g2))
        adj[g2].append((idx, g1))
    tree = []
    seen = {root}
    queue = deque([root])
    while queue:
        g = queue.popleft()
        for idx, h in adj[g]:
            if h not in seen:
                seen.add(h)
                tree.append(idx)
                queue.append(h)
    return tree, seen


def planar_spanning_tree_edge_order(net, root=None, start=0):
    """Edge order from an Euler tour around a spanning tree of gates.

    Gates on a common interior face are linked in a cycle; a BFS tree of
    those links (rooted at the first gate) is walked counterclockwise,
    starting at the root's first rotation edge, and each gate's edges are
    recorded as the walk sweeps past them.  Networks
    whose interior faces do not connect all gates (trees, for instance)
    also use the outer face's links.  Disconnected networks are handled
    component by component, concatenating the orders.

    ``root`` picks another root gate and ``start`` shifts where the walk
    begins among the root's edges and links; every choice yields an order
    of the same embedding.
    """
    faces, outer = trace_faces(net)
    sigma = []
    for comp in net.components():
        comp_gates = [g for g in net.gates if g in set(comp)]
        if not comp_gates:
            continue
        comp_set = set(comp)
        comp_faces = [f for f, face in enumerate(faces) if face[0][0] in comp_set]
        interior = [f for f in comp_faces if f != outer]
        root_g = root if root in comp_gates else comp_gates[0]
        links = _aux_links(net, faces, interior)
        tree, seen = _bfs_tree(comp_gates, links, root_g)
        if len(seen) != len(comp_gates):
            links = _aux_links(net, faces, interior + [f for f in comp_faces
                                                       if f not in interior])
            tree, seen = _bfs_tree(comp_gates, links, root_g)
            if len(seen) != len(comp_gates):
                raise NotTreeConnectable("gates cannot be joined through faces")
        sigma.extend(_euler_tour(net, links, tree, root_g, start))
    return tuple(sigma)


def _euler_tour(net, links, tree, root, shift=0):
    rot = net.embedding.rotation
    # per-gate cyclic item list: edge rot[k], then corner-k links (next, prev)
    items = {}
    for g in net.gates:
        seq = []
        for k, e in enumerate(rot[g]):
            seq.append(("edge", e))
            for idx in tree:
                g1, k1, _, _ = links[idx]
                if g1 == g and k1 == k:
                    seq.append(("link", idx))
            for idx in tree:
                _, _, g2, k2 = links[idx]
                if g2 == g and k2 == k:
                    seq.append(("link", idx))
        items[g] = seq
    sigma = []
    # explicit stack of (gate, remaining items) to avoid deep recursion
    def start(g, after):
        seq = items[g]
        if after is None:
            # the root is entered just before its first listed rotation edge
            k = shift % len(seq)
            return seq[k:] + seq[:k]
        i = seq.index(("link", after))
        return seq[i + 1:] + seq[:i]

    stack = [(root, iter(start(root, None)))]
    while stack:
        g, it = stack[-1]
        item = next(it, None)
        if item is None:
            stack.pop()
            continue
        kind, val = item
        if kind == "edge":
            sigma.append(val)
        else:
            g1, _, g2, _ = links[val]
            child = g2 if g1 == g else g1
            stack.append((child, iter(start(child, val))))
    return sigma


# ---------------------------------------------------------------------------
# Pfaffian evaluation
# ---------------------------------------------------------------------------

def reorder_block(matrix, order):
    """Re-express ``sPf(matrix)`` on the wire order ``order``.

    Returns a skew matrix labeled by ``order`` with the same principal
    sub-Pfaffians (subsets are unordered), or raises
    :class:`UnsupportedWireOrder` when no such matrix exists.  Identity,
    reversal and cyclic rotations always succeed.
    """
    order = tuple(order)
    if order == matrix.labels:
        return matrix
    if sorted(order) != sorted(matrix.labels):
        raise OrderMismatch(f"{order} is not a permutation of {matrix.labels}")
    pos = {l: k for k, l in enumerate(matrix.labels)}
    n = len(order)
    rows = [[0] * n for _ in range(n)]
    for i, a in enumerate(order):
        for j, b in enumerate(order):
            if i == j:
                continue
            x = matrix.entries[pos[a]][pos[b]] if pos[a] < pos[b] else \
                matrix.entries[pos[b]][pos[a]]
            rows[i][j] = x if i < j else -x
    cand = SkewMatrix(order, rows, check=False)
    if n >= 4:
        want = sub_pfaffian(matrix)
        got = sub_pfaffian(cand).permuted(matrix.labels)
        if not got.allclose(want):
            raise UnsupportedWireOrder(f"wire order {order} cannot be expressed "
                                       f"for a block native to {matrix.labels}")
    return cand


def _blocks_cross(blocks, sigma):
    """True when two blocks interleave (a..b..a..b) in the cyclic order."""
    owner = {}
    for b, labels in enumerate(blocks):
        for l in labels:
            owner[l] = b
    seq = [owner[l] for l in sigma if l in owner]
    for a in range(len(blocks)):
        for b in range(a + 1, len(blocks)):
            sub = [x for x in seq if x in (a, b)]
            turns = sum(1 for k in range(len(sub)) if sub[k] != sub[k - 1])
            if turns > 2:
                return True
    return False


def check_edge_order(net, sigma):
    """Validate ``sigma``: every edge once, gate blocks and cogate blocks
    pairwise non-interleaving."""
    sigma = tuple(sigma)
    if sorted(sigma) != sorted(net.edges) or len(set(sigma)) != len(sigma):
        return False
    gates = [t.wires for t in net.gates.values()]
    cogates = [t.wires for t in net.cogates.values()]
    return not (_blocks_cross(gates, sigma) or _blocks_cross(cogates, sigma))


def pfaffian_matrices(cn, sigma):
    """``(Xi, Theta, scale)`` assembled in the order ``sigma``."""
    net = cn.network
    sigma = tuple(int(e) for e in sigma)
    if sorted(sigma) != sorted(net.edges) or len(set(sigma)) != len(sigma):
        raise OrderMismatch("edge order must list every edge exactly once")
    if len(net.edges) % 2:
        raise OddEdgeCount(f"{len(net.edges)} edges: the Pfaffian identity needs an even count")
    if not check_edge_order(net, sigma):
        raise UnsupportedWireOrder("tensor blocks interleave in the edge order")
    where = {e: k for k, e in enumerate(sigma)}
    scale = 1
    xi_blocks, th_blocks = [], []
    for name, t in net.tensors.items():
        cert = cn.certificates[name]
        local = tuple(sorted(t.wires, key=where.__getitem__))
        block = reorder_block(cert.matrix, local)
        (xi_blocks if name in net.gates else th_blocks).append(block)
        scale = scale * cert.scale
    xi = direct_sum_ordered(xi_blocks, sigma)
    theta = direct_sum_ordered(th_blocks, sigma)
    return xi, theta, normalize(scale)


def pfaffian_value(cn, sigma=None):
    """``(prod alpha)(prod beta) Pf(Theta~ + Xi)`` for a certified network."""
    if sigma is None:
        sigma = cn.network.order or planar_spanning_tree_edge_order(cn.network)
    xi, theta, scale = pfaffian_matrices(cn, sigma)
    return normalize(scale * pfaffian(sign_flip(theta) + xi))


def values_agree(a, b, tol=1e-6):
    return abs(complex(a) - complex(b)) <= tol * max(1.0, abs(complex(a)))


__all__ = [
    "RotationSystem", "Network", "CertifiedNetwork", "brute_force_value",
    "contract_network", "apply_edge_bases", "trace_faces",
    "planar_spanning_tree_edge_order", "reorder_block", "check_edge_order",
    "pfaffian_matrices", "pfaffian_value", "values_agree",
]
