"""Gates (kets), cogates (bras) and 2x2 changes of basis.

A :class:`Tensor` is an ordered list of wires (edge identifiers) plus a
sparse map from subsets of wire positions to coefficients.  Subsets are
stored as bit masks: position ``p`` (1-based, leftmost ket symbol) is
bit ``p - 1``.  So on four wires the ket ``|1010>`` is the subset
``{1, 3}`` and the mask ``0b0101``.

Each wire is either a ket wire or a bra wire.  Gates have only ket
wires, cogates only bra wires; partial contractions may produce mixed
tensors such as ``<0_6|1_4>``.
"""

import re
from fractions import Fraction

from .errors import (ArityMismatch, InvalidSubset, ParseError, SingularBasis,
                     WireMismatch)
from .scalars import (EXACT_TYPES, close, format_scalar, get_eps, is_zero,
                      normalize, parse_scalar)

GATE = "gate"
COGATE = "cogate"
MIXED = "mixed"


# ---------------------------------------------------------------------------
# subsets <-> masks
# ---------------------------------------------------------------------------

def subset_to_mask(subset, arity):
    mask = 0
    for p in subset:
        if not isinstance(p, int) or p < 1 or p > arity:
            raise InvalidSubset(f"position {p!r} outside 1..{arity}")
        mask |= 1 << (p - 1)
    return mask


def mask_to_subset(mask):
    out = []
    p = 1
    while mask:
        if mask & 1:
            out.append(p)
        mask >>= 1
        p += 1
    return tuple(out)


def mask_to_bits(mask, arity):
    return "".join("1" if mask >> k & 1 else "0" for k in range(arity))


def bits_to_mask(bits):
    mask = 0
    for k, ch in enumerate(bits):
        if ch == "1":
            mask |= 1 << k
        elif ch != "0":
            raise InvalidSubset(f"bad bit string {bits!r}")
    return mask


def popcount(mask):
    return bin(mask).count("1")


# ---------------------------------------------------------------------------
# basis matrices
# ---------------------------------------------------------------------------

class BasisMatrix:
    """Invertible 2x2 matrix ``[[a00, a01], [a10, a11]]`` (rows/cols from 0)."""

    __slots__ = ("entries", "name")

    def __init__(self, a00, a01, a10, a11, name=None, check=True):
        self.entries = tuple(normalize(x) for x in (a00, a01, a10, a11))
        self.name = name
        if check and is_zero(self.det):
            raise SingularBasis(f"basis {name or '(unnamed)'} has zero determinant")

    @classmethod
    def from_rows(cls, rows, name=None):
        (a, b), (c, d) = rows
        return cls(a, b, c, d, name=name)

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1, name="Id")

    @classmethod
    def parse(cls, text, name=None):
        return cls.from_rows(parse_matrix(text, 2), name=name)

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[2 * r + c]

    @property
    def rows(self):
        a, b, c, d = self.entries
        return ((a, b), (c, d))

    @property
    def det(self):
        a, b, c, d = self.entries
        return normalize(a * d - b * c)

    def inverse(self):
        det = self.det
        if is_zero(det):
            raise SingularBasis("cannot invert a singular basis")
        a, b, c, d = self.entries
        def inv(x):
            return normalize((Fraction(x) if isinstance(x, int) else x) / det)
        name = None if self.name is None else self.name + "^-1"
        return BasisMatrix(inv(d), inv(-b), inv(-c), inv(a), name=name)

    def transpose(self):
        a, b, c, d = self.entries
        return BasisMatrix(a, c, b, d, name=self.name, check=False)

    def is_rational(self):
        return all(isinstance(x, (int, Fraction)) for x in self.entries)

    def is_exact(self):
        return all(isinstance(x, EXACT_TYPES) for x in self.entries)

    def allclose(self, other, eps=None):
        return all(close(x, y, eps) for x, y in zip(self.entries, other.entries))

    def __eq__(self, other):
        return isinstance(other, BasisMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def format(self):
        a, b, c, d = (format_scalar(x) for x in self.entries)
        return f"[[{a},{b}],[{c},{d}]]"

    def __repr__(self):
        tag = f"{self.name}=" if self.name else ""
        return f"BasisMatrix({tag}{self.format()})"


def _split_top(text, sep=","):
    """Split on ``sep`` at bracket/paren depth zero."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_matrix(text, size=None):
    """Parse ``[[x, y], [z, w]]`` into a list of rows of scalars."""
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ParseError(f"matrix literal must be bracketed: {text!r}", 1, 1)
    inner = s[1:-1].strip()
    rows = []
    if inner:
        for part in _split_top(inner):
            part = part.strip()
            if not (part.startswith("[") and part.endswith("]")):
                raise ParseError(f"malformed matrix row {part!r}", 1, 1)
            body = part[1:-1].strip()
            rows.append([parse_scalar(x) for x in _split_top(body)] if body else [])
    if size is not None and (len(rows) != size or any(len(r) != size for r in rows)):
        raise ParseError(f"expected a {size}x{size} matrix: {text!r}", 1, 1)
    return rows


# ---------------------------------------------------------------------------
# tensors
# ---------------------------------------------------------------------------

def _prune(coeffs, eps):
    out = {}
    for m, c in coeffs.items():
        c = normalize(c)
        if not is_zero(c, eps):
            out[m] = c
    return out


class Tensor:
    """Immutable sparse tensor over an ordered list of wires.

    ``bra`` is a tuple of booleans, one per wire, telling whether the wire
    carries a bra (cogate side) or a ket (gate side).
    """

    __slots__ = ("wires", "coeffs", "bra")

    def __init__(self, wires, coeffs, bra=False, eps=None):
        wires = tuple(int(w) for w in wires)
        if len(set(wires)) != len(wires):
            raise WireMismatch(f"repeated wire in {wires}")
        if isinstance(bra, bool):
            bra = (bra,) * len(wires)
        bra = tuple(bool(b) for b in bra)
        if len(bra) != len(wires):
            raise ArityMismatch("bra flags must match the wires")
        n = len(wires)
        full = (1 << n) - 1
        store = {}
        for key, val in dict(coeffs).items():
            if isinstance(key, str):
                if len(key) != n:
                    raise InvalidSubset(f"bit string {key!r} has wrong length for arity {n}")
                m = bits_to_mask(key)
            elif isinstance(key, int):
                m = key
                if m < 0 or m > full:
                    raise InvalidSubset(f"mask {key} outside arity {n}")
            else:
                m = subset_to_mask(key, n)
            store[m] = store.get(m, 0) + val
        object.__setattr__(self, "wires", wires)
        object.__setattr__(self, "bra", bra)
        object.__setattr__(self, "coeffs", _prune(store, eps))

    def __setattr__(self, name, value):
        raise AttributeError("Tensor is immutable")

    # -- constructors ----------------------------------------------------
    @classmethod
    def gate(cls, wires, coeffs, eps=None):
        return cls(wires, coeffs, bra=False, eps=eps)

    @classmethod
    def cogate(cls, wires, coeffs, eps=None):
        return cls(wires, coeffs, bra=True, eps=eps)

    @classmethod
    def scalar(cls, value):
        return cls((), {0: value})

    # -- basic properties -----------------------------------------------
    @property
    def arity(self):
        return len(self.wires)

    @property
    def kind(self):
        if all(self.bra) and self.bra:
            return COGATE
        if not any(self.bra):
            return GATE
        return MIXED

    @property
    def full_mask(self):
        return (1 << len(self.wires)) - 1

    def items(self):
        return sorted(self.coeffs.items(), key=lambda kv: mask_to_bits(kv[0], self.arity))

    def value(self):
        """The scalar of an arity-0 tensor."""
        if self.wires:
            raise ArityMismatch("tensor still has open wires")
        return self.coeffs.get(0, 0)

    def with_coeffs(self, coeffs):
        return Tensor(self.wires, coeffs, self.bra)

    def scale(self, s):
        return self.with_coeffs({m: c * s for m, c in self.coeffs.items()})

    def __add__(self, other):
        if self.wires != other.wires or self.bra != other.bra:
            raise WireMismatch("tensors on different wires cannot be added")
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return self.with_coeffs(out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def allclose(self, other, eps=None):
        if self.wires != other.wires or self.bra != other.bra:
            return False
        for m in set(self.coeffs) | set(other.coeffs):
            if not close(self.coeffs.get(m, 0), other.coeffs.get(m, 0), eps):
                return False
        return True

    def max_residual(self, other):
        if self.wires != other.wires:
            raise WireMismatch("tensors on different wires")
        keys = set(self.coeffs) | set(other.coeffs)
        return max((abs(complex(self.coeffs.get(m, 0)) - complex(other.coeffs.get(m, 0)))
                    for m in keys), default=0.0)

    def __eq__(self, other):
        return (isinstance(other, Tensor) and self.wires == other.wires
                and self.bra == other.bra and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.wires, self.bra, frozenset(self.coeffs.items())))

    def permuted(self, new_wires):
        """Same tensor with its wires listed in the order ``new_wires``."""
        new_wires = tuple(new_wires)
        if sorted(new_wires) != sorted(self.wires):
            raise WireMismatch(f"{new_wires} is not a permutation of {self.wires}")
        src = [self.wires.index(w) for w in new_wires]
        out = {}
        for m, c in self.coeffs.items():
            nm = 0
            for k, s in enumerate(src):
                if m >> s & 1:
                    nm |= 1 << k
            out[nm] = c
        return Tensor(new_wires, out, tuple(self.bra[s] for s in src))

    def relabeled(self, mapping):
        return Tensor([mapping.get(w, w) for w in self.wires], self.coeffs, self.bra)

    def to_dense(self):
        """Dense complex vector indexed by mask."""
        import numpy as np
        v = np.zeros(1 << self.arity, dtype=complex)
        for m, c in self.coeffs.items():
            v[m] = complex(c)
        return v

    def format(self, show_wires=False):
        return format_tensor(self, show_wires)

    def __repr__(self):
        return f"Tensor({self.kind}, wires={list(self.wires)}, {format_tensor(self)})"


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def coefficient(t, subset):
    """Coefficient of ``t`` at a subset of 1-based wire positions."""
    return t.coeffs.get(subset_to_mask(subset, t.arity), 0)


def transform_coeffs(coeffs, mats, zero=is_zero):
    """Apply one 2x2 matrix per position: ``T'_{I'} = sum_I T_I prod M_p[I'_p, I_p]``.

    ``mats[p]`` is indexable as ``M[r][c]``.  Works with any scalar-like
    ring elements (used with polynomials by the ideal generator).
    """
    cur = dict(coeffs)
    for p, M in enumerate(mats):
        bit = 1 << p
        nxt = {}
        for m, c in cur.items():
            col = 1 if m & bit else 0
            base = m & ~bit
            for r in (0, 1):
                a = M[r][col]
                if isinstance(a, EXACT_TYPES) and not a:
                    continue
                key = base | (bit if r else 0)
                term = c * a
                nxt[key] = nxt[key] + term if key in nxt else term
        cur = {m: c for m, c in nxt.items() if not zero(c)}
    return cur


def apply_basis_change(g, bases):
    """``(A_1 x ... x A_n) g`` for a gate ``g``."""
    if len(bases) != g.arity:
        raise ArityMismatch(f"{len(bases)} bases for arity {g.arity}")
    if g.kind == COGATE and g.arity:
        raise WireMismatch("apply_basis_change expects a gate")
    eps = get_eps()
    out = transform_coeffs(g.coeffs, [b.rows for b in bases],
                           zero=lambda c: is_zero(c, eps))
    return Tensor(g.wires, out, g.bra)


def apply_inverse_basis_change(c, bases):
    """``(A_1^{-1} x ... x A_n^{-1}) c`` for a cogate ``c``.

    A bra transforms by right multiplication, so the coefficient at ``K`` is
    ``sum_J C_J prod A_p^{-1}[J_p, K_p]``.
    """
    if len(bases) != c.arity:
        raise ArityMismatch(f"{len(bases)} bases for arity {c.arity}")
    if c.kind == GATE and c.arity:
        raise WireMismatch("apply_inverse_basis_change expects a cogate")
    eps = get_eps()
    mats = [b.inverse().transpose().rows for b in bases]
    out = transform_coeffs(c.coeffs, mats, zero=lambda x: is_zero(x, eps))
    return Tensor(c.wires, out, c.bra)


def contract(a, b):
    """Contract ``a`` and ``b`` over their shared wires.

    Returns a scalar when no wire survives, otherwise the tensor on the
    surviving wires (``a``'s survivors first, in ``a``'s order).  A shared
    wire must pair a bra with a ket.
    """
    shared = [w for w in a.wires if w in b.wires]
    pa = {w: k for k, w in enumerate(a.wires)}
    pb = {w: k for k, w in enumerate(b.wires)}
    for w in shared:
        if a.bra[pa[w]] == b.bra[pb[w]]:
            raise WireMismatch(f"wire {w} joins two {'bras' if a.bra[pa[w]] else 'kets'}")
    sa = [pa[w] for w in shared]
    sb = [pb[w] for w in shared]
    ra = [k for k, w in enumerate(a.wires) if w not in pb]
    rb = [k for k, w in enumerate(b.wires) if w not in pa]

    def key(m, pos):
        k = 0
        for j, p in enumerate(pos):
            if m >> p & 1:
                k |= 1 << j
        return k

    def spread(m, pos, offset):
        out = 0
        for j, p in enumerate(pos):
            if m >> p & 1:
                out |= 1 << (offset + j)
        return out

    by_key = {}
    for m, c in b.coeffs.items():
        by_key.setdefault(key(m, sb), []).append((spread(m, rb, len(ra)), c))
    out = {}
    for m, c in a.coeffs.items():
        hits = by_key.get(key(m, sa))
        if not hits:
            continue
        left = spread(m, ra, 0)
        for right, d in hits:
            k = left | right
            out[k] = out.get(k, 0) + c * d
    wires = [a.wires[k] for k in ra] + [b.wires[k] for k in rb]
    bra = [a.bra[k] for k in ra] + [b.bra[k] for k in rb]
    if not wires:
        return normalize(out.get(0, 0))
    return Tensor(wires, out, bra)


def complement(t):
    full = t.full_mask
    return t.with_coeffs({full ^ m: c for m, c in t.coeffs.items()})


def complement_invariant(t):
    full = t.full_mask
    return all((full ^ m) in t.coeffs for m in t.coeffs)


# ---------------------------------------------------------------------------
# literals
# ---------------------------------------------------------------------------

_TERM = re.compile(r"(\|([01]*)>|<([01]*)\|)")


def parse_tensor(text, wires=None, kind=None):
    """Parse a ket/bra term list such as ``|10> + |01> + |11>`` or
    ``(1+i)/2 <00| - <11|``.

    ``wires`` defaults to ``1..arity``.  All terms must share one arity and
    be all kets (a gate) or all bras (a cogate).
    """
    terms = []
    pos = 0
    arity = None
    seen_kind = None
    for mt in _TERM.finditer(text):
        seg = text[pos:mt.start()].strip()
        pos = mt.end()
        bits = mt.group(2) if mt.group(2) is not None else mt.group(3)
        k = GATE if mt.group(2) is not None else COGATE
        if seen_kind is None:
            seen_kind = k
        elif seen_kind != k:
            raise ParseError("cannot mix kets and bras in one tensor literal",
                             1, mt.start() + 1)
        if arity is None:
            arity = len(bits)
        elif arity != len(bits):
            raise ParseError("terms have different arities", 1, mt.start() + 1)
        if seg.endswith("*"):
            seg = seg[:-1].strip()
        if seg in ("", "+"):
            coeff = 1
        elif seg == "-":
            coeff = -1
        else:
            try:
                coeff = parse_scalar(seg)
            except ParseError as exc:
                raise ParseError(f"bad coefficient {seg!r}", 1,
                                 mt.start() - len(seg)) from exc
        terms.append((bits, coeff))
    if text[pos:].strip():
        raise ParseError(f"trailing text {text[pos:].strip()!r}", 1, pos + 1)
    if not terms:
        raise ParseError("no ket or bra terms found", 1, 1)
    if kind is not None and kind != seen_kind:
        raise ParseError(f"expected a {kind} literal", 1, 1)
    if wires is None:
        wires = range(1, arity + 1)
    wires = list(wires)
    if len(wires) != arity:
        raise ArityMismatch(f"{len(wires)} wires for arity-{arity} terms")
    coeffs = {}
    for bits, c in terms:
        m = bits_to_mask(bits)
        coeffs[m] = coeffs.get(m, 0) + c
    return Tensor(wires, coeffs, bra=(seen_kind == COGATE))


def _coeff_prefix(c, first):
    c = normalize(c)
    if c == 1:
        return "" if first else "+ "
    if c == -1:
        return "-" if first else "- "
    s = format_scalar(c)
    simple = re.fullmatch(r"-?[0-9/.]+", s) is not None
    if simple:
        if s.startswith("-"):
            return f"{s} " if first else f"- {s[1:]} "
        return f"{s} " if first else f"+ {s} "
    return f"({s}) " if first else f"+ ({s}) "


def format_tensor(t, show_wires=False):
    if not t.coeffs:
        return "0"
    parts = []
    for k, (m, c) in enumerate(t.items()):
        parts.append(_coeff_prefix(c, k == 0) + _format_basis_term(t, m, show_wires))
    return " ".join(parts)


def _format_basis_term(t, m, show_wires):
    def sym(k):
        b = "1" if m >> k & 1 else "0"
        return f"{b}_{t.wires[k]}" if show_wires else b

    bras = [sym(k) for k in range(t.arity) if t.bra[k]]
    kets = [sym(k) for k in range(t.arity) if not t.bra[k]]
    sep = " " if show_wires else ""
    if bras and kets:
        return f"<{sep.join(bras)}|{sep.join(kets)}>"
    if bras:
        return f"<{sep.join(bras)}|"
    return f"|{sep.join(kets)}>"
