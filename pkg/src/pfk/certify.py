"""Pfaffian certificates: verification, discovery under fixed bases,
censuses, Boolean trees and decomposition checks."""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (ArityMismatch, OrderMismatch, SizeLimit,
                     UnsupportedWireOrder, WireMismatch)
from .pfaffian import (SkewMatrix, direct_sum_ordered, sign_flip, sub_pfaffian,
                       sub_pfaffian_dual)
from .scalars import div, get_eps, is_zero, normalize
from .tensor import (COGATE, GATE, Tensor, apply_basis_change,
                     apply_inverse_basis_change, contract, popcount)


@dataclass(frozen=True)
class Certificate:
    """``(A_1 x ... x A_n) G = scale * sPf(matrix)`` for a gate, or
    ``(A_1^-1 x ... x A_n^-1) C = scale * sPf*(matrix)`` for a cogate."""

    bases: tuple
    scale: object
    matrix: SkewMatrix

    def __post_init__(self):
        object.__setattr__(self, "bases", tuple(self.bases))
        object.__setattr__(self, "scale", normalize(self.scale))

    def relabeled(self, labels):
        return Certificate(self.bases, self.scale, self.matrix.relabeled(labels))


def transformed(t, bases):
    """``t`` after the change of basis named by ``bases`` (inverse for cogates)."""
    if t.kind == COGATE:
        return apply_inverse_basis_change(t, bases)
    return apply_basis_change(t, bases)


def expected_form(t, cert):
    """``scale * sPf(matrix)`` (gate) or ``scale * sPf*(matrix)`` (cogate),
    on ``t``'s wires."""
    m = cert.matrix.relabeled(t.wires)
    form = sub_pfaffian_dual(m) if t.kind == COGATE else sub_pfaffian(m)
    return form.scale(cert.scale)


def certificate_residual(t, cert):
    """Largest coefficient-wise deviation from the certified form."""
    if len(cert.bases) != t.arity or cert.matrix.n != t.arity:
        raise ArityMismatch(f"certificate for arity {len(cert.bases)} "
                            f"applied to arity {t.arity}")
    return transformed(t, cert.bases).max_residual(expected_form(t, cert))


def check_certificate(t, cert, eps=None):
    """True iff ``cert`` witnesses that ``t`` is Pfaffian."""
    if len(cert.bases) != t.arity or cert.matrix.n != t.arity:
        raise ArityMismatch(f"certificate for arity {len(cert.bases)} "
                            f"applied to arity {t.arity}")
    return transformed(t, cert.bases).allclose(expected_form(t, cert), eps)


def find_certificate_given_bases(t, bases, eps=None):
    """The unique certificate for ``t`` under ``bases``, or ``None``.

    The scale is the coefficient at the empty set (full set for cogates),
    the matrix entries are the normalised pair coefficients; the candidate
    is then checked on every subset.
    """
    if len(bases) != t.arity:
        raise ArityMismatch(f"{len(bases)} bases for arity {t.arity}")
    eps = get_eps() if eps is None else eps
    tp = transformed(t, bases)
    n = t.arity
    full = (1 << n) - 1
    cog = t.kind == COGATE
    # index the transformed tensor by "Pfaffian subset": complements for cogates
    coeff = ({full ^ m: c for m, c in tp.coeffs.items()} if cog else dict(tp.coeffs))
    scale = coeff.get(0, 0)
    if is_zero(scale, eps):
        return None
    for m, c in coeff.items():
        if popcount(m) % 2 and not is_zero(c, eps):
            return None
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = coeff.get((1 << i) | (1 << j), 0)
            x = div(x, scale)
            rows[i][j] = x
            rows[j][i] = -x
    cert = Certificate(tuple(bases), scale, SkewMatrix(t.wires, rows, check=False))
    if not check_certificate(t, cert, eps):
        return None
    return cert


# ---------------------------------------------------------------------------
# census
# ---------------------------------------------------------------------------

CENSUS_MAX_ARITY = 4


def _census_chunk(args):
    n, mats, codes, eps = args
    size = 1 << n
    bits = ((codes[None, :] >> np.arange(size, dtype=np.int64)[:, None]) & 1)
    t = _kernels.apply_wire_matrices(bits.astype(np.complex128), mats)
    return codes[_kernels.census_scan(t, n, eps)]


def census_codes(arity, bases, kind=GATE, jobs=1, eps=None):
    """Integer codes of the 0/1 tensors (bit ``m`` = coefficient of mask
    ``m``) that are Pfaffian under ``bases``."""
    if arity > CENSUS_MAX_ARITY:
        raise SizeLimit(f"exhaustive census is limited to arity <= {CENSUS_MAX_ARITY}")
    if len(bases) != arity:
        raise ArityMismatch(f"{len(bases)} bases for arity {arity}")
    eps = get_eps() if eps is None else eps
    size = 1 << arity
    if kind == COGATE:
        # C'_K = sum_J C_J prod Ainv[J, K]; reindex by complements so that the
        # scan sees the sPf* coefficients in sPf positions
        inv = [b.inverse() for b in bases]
        mats = [[[complex(m[c, 1 - r]) for c in (0, 1)] for r in (0, 1)] for m in inv]
    else:
        mats = [[[complex(b[r, c]) for c in (0, 1)] for r in (0, 1)] for b in bases]
    codes = np.arange(1, 1 << size, dtype=np.int64)
    chunks = np.array_split(codes, max(1, jobs * 4)) if jobs > 1 else [codes]
    work = [(arity, mats, ch, eps) for ch in chunks if len(ch)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_census_chunk, work))
    else:
        parts = [_census_chunk(w) for w in work]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def tensor_from_code(code, arity, kind=GATE, wires=None):
    wires = tuple(range(1, arity + 1)) if wires is None else tuple(wires)
    coeffs = {m: 1 for m in range(1 << arity) if code >> m & 1}
    return Tensor(wires, coeffs, bra=(kind == COGATE))


def census_under_fixed_bases(arity, gate_bases=None, cogate_bases=None, jobs=1,
                             eps=None):
    """All non-zero 0/1 gates (and/or cogates) of ``arity`` that are Pfaffian
    under the given bases.

    Pass ``gate_bases`` for gates, ``cogate_bases`` for cogates; with both,
    a ``(gates, cogates)`` pair is returned.
    """
    out = []
    for bases, kind in ((gate_bases, GATE), (cogate_bases, COGATE)):
        if bases is None:
            continue
        codes = census_codes(arity, list(bases), kind, jobs, eps)
        out.append([tensor_from_code(int(c), arity, kind) for c in codes])
    if not out:
        raise ValueError("give gate_bases and/or cogate_bases")
    return out[0] if len(out) == 1 else tuple(out)


# ---------------------------------------------------------------------------
# Boolean trees
# ---------------------------------------------------------------------------

def build_boolean_tree(leaf_count):
    """Certified fragment of EQUAL tensors acting as one EQUAL cogate with
    ``leaf_count`` open wires.

    The root is the 2-wire EQUAL cogate (basis ``hadamard`` on both
    wires).  An open wire is grown by an EQUAL_3 gate (``hadamard``,
    ``half``, ``half``) whose two ``half`` wires lead to EQUAL_3 cogates
    (``half``, ``hadamard``, ``hadamard``) or to a ``half`` cap cogate.
    One open wire is capped by the ``hadamard`` cap gate when
    ``leaf_count == 1``.  The open wires are numbered ``1..leaf_count``.
    """
    from .network import CertifiedNetwork, Network, RotationSystem
    from .registry import get

    if leaf_count < 1:
        raise ValueError("a Boolean tree needs at least one open wire")
    parts = []          # (name, registry entry, [port ids])
    links = []          # (port, port)
    counter = [0]

    def port():
        counter[0] += 1
        return counter[0]

    def add(name, entry):
        ps = [port() for _ in range(entry.tensor.arity)]
        parts.append((name, entry, ps))
        return ps

    root = add("C0", get("tree.equal2_cogate"))
    open_ports = list(root)
    ng = nc = 0
    if leaf_count == 1:
        ng += 1
        cap = add(f"G{ng}", get("tree.cap_gate"))
        links.append((open_ports.pop(), cap[0]))
    while len(open_ports) < leaf_count:
        p = open_ports.pop(0)
        ng += 1
        g = add(f"G{ng}", get("tree.equal3_gate"))
        links.append((p, g[0]))
        two = leaf_count - (len(open_ports) + 1) >= 3
        for k, gp in enumerate(g[1:]):
            nc += 1
            if k == 0 or two:
                c = add(f"C{nc}", get("tree.equal3_cogate"))
                links.append((gp, c[0]))
                open_ports.extend(c[1:])
            else:
                c = add(f"C{nc}", get("tree.cap_cogate"))
                links.append((gp, c[0]))
    edge = {}
    for k, p in enumerate(open_ports, 1):
        edge[p] = k
    for k, (a, b) in enumerate(links, len(open_ports) + 1):
        edge[a] = edge[b] = k
    gates, cogates, certs, rotation = {}, {}, {}, {}
    for name, entry, ps in parts:
        wires = tuple(edge[p] for p in ps)
        t = entry.tensor.relabeled(dict(zip(entry.tensor.wires, wires)))
        (gates if t.kind == GATE else cogates)[name] = t
        certs[name] = entry.certificate.relabeled(wires)
        rotation[name] = wires
    net = Network(gates, cogates, embedding=RotationSystem(rotation))
    return CertifiedNetwork(net, certs)


# ---------------------------------------------------------------------------
# decompositions
# ---------------------------------------------------------------------------

def _cyclic_match(seq, ref):
    n = len(ref)
    return any(tuple(ref[(k + s) % n] for s in range(n)) == tuple(seq)
               for k in range(n))


@dataclass
class DecompositionReport:
    ok: bool
    certificates_ok: bool
    xi_tilde: SkewMatrix
    theta_tilde: SkewMatrix
    spf: Tensor                 # sPf(Xi~) on the gate wires, block order
    value: Tensor               # scale * <sPf*(Theta~) | sPf(Xi~)>
    expected: Tensor            # target after its change of basis
    residual: float


def decomposition_report(target, target_cert, fragment, sigma, eps=None):
    """Evaluate ``fragment`` as a partial Pfaffian contraction and compare
    it with ``target`` under ``target_cert``.

    Gate blocks are assembled in the order their wires first occur in
    ``sigma``, each in its own wire order; a block whose wires occur in
    ``sigma`` in reversed cyclic order is checkerboard-flipped.  The
    cogate blocks are placed by ``sigma`` and flipped as a whole.
    """
    eps = get_eps() if eps is None else eps
    net = fragment.network
    sigma = tuple(int(e) for e in sigma)
    if sorted(sigma) != sorted(net.edges) or len(set(sigma)) != len(sigma):
        raise OrderMismatch("edge order must list every fragment edge once")
    open_wires = set(net.dangling)
    if open_wires != set(target.wires):
        raise WireMismatch(f"fragment is open on {sorted(open_wires)}, target "
                           f"has wires {sorted(target.wires)}")
    if any(e in net.cogate_of for e in open_wires):
        raise WireMismatch("open wires of a gate decomposition must sit on gates")
    where = {e: k for k, e in enumerate(sigma)}
    gate_names = sorted(net.gates, key=lambda n: min(where[e] for e in net.gates[n].wires))
    blocks, labels = [], []
    scale = 1
    for name in gate_names:
        cert = fragment.certificates[name]
        native = cert.matrix.labels
        local = tuple(sorted(native, key=where.__getitem__))
        if _cyclic_match(local, native):
            block = cert.matrix
        elif _cyclic_match(local, native[::-1]):
            block = sign_flip(cert.matrix)
        else:
            raise UnsupportedWireOrder(f"wires of {name} occur as {local} in the "
                                       f"order, natively {native}")
        blocks.append(block)
        labels.extend(native)
        scale = scale * cert.scale
    xi_t = direct_sum_ordered(blocks, labels)
    from .network import reorder_block
    th_blocks = []
    for name, t in net.cogates.items():
        cert = fragment.certificates[name]
        local = tuple(sorted(t.wires, key=where.__getitem__))
        th_blocks.append(reorder_block(cert.matrix, local))
        scale = scale * cert.scale
    inner = [e for e in sigma if e in net.cogate_of]
    theta_t = sign_flip(direct_sum_ordered(th_blocks, inner))
    spf = sub_pfaffian(xi_t)
    value = contract(sub_pfaffian_dual(theta_t), spf) if theta_t.n else spf
    value = value.scale(normalize(scale)).permuted(target.wires)
    expected = transformed(target, target_cert.bases)
    certs_ok = (check_certificate(target, target_cert, eps)
                and all(fragment.verify().values()))
    res = value.max_residual(expected)
    return DecompositionReport(bool(certs_ok and value.allclose(expected, eps)),
                               bool(certs_ok), xi_t, theta_t, spf, value,
                               expected, res)


def check_decomposition(target, target_cert, fragment, sigma, eps=None):
    """True iff ``fragment`` (with edge order ``sigma``) reproduces the
    certified form of ``target`` and every certificate involved holds."""
    return decomposition_report(target, target_cert, fragment, sigma, eps).ok


# ---------------------------------------------------------------------------
# suite
# ---------------------------------------------------------------------------

@dataclass
class SuiteLine:
    name: str
    ok: bool
    residual: float

    def format(self):
        return f"{'PASS' if self.ok else 'FAIL'} {self.name} {self.residual:.3e}"


def run_paper_suite(eps=None):
    """Check every registry certificate, the Boolean-tree decomposition of
    EQUAL_4, and the certificates of a 5-leaf Boolean tree."""
    from .registry import decomposition_fragment, get, registry

    eps = get_eps() if eps is None else eps
    out = []
    for name, e in registry().items():
        r = e.residual()
        out.append(SuiteLine(name, bool(check_certificate(e.tensor, e.certificate, eps)), r))
    target = get("decomp.equal4_gate")
    frag, sigma = decomposition_fragment()
    rep = decomposition_report(target.tensor, target.certificate, frag, sigma, eps)
    out.append(SuiteLine("decomp.fragment", rep.ok, rep.residual))
    tree = build_boolean_tree(5)
    worst = max(certificate_residual(t, tree.certificates[n])
                for n, t in tree.network.tensors.items())
    out.append(SuiteLine("tree.five_leaves", all(tree.verify().values()), worst))
    return out
