"""Polynomial systems whose solutions are the Pfaffian changes of basis.

For a gate ``G`` on ``n`` wires with basis ``A_k`` on each wire, the
transformed coefficients are polynomials in the entries of the ``A_k``::

    G'_J = sum_I G_I prod_p A_{k(p)}[J_p, I_p]

and ``G`` is Pfaffian iff, with ``g0 = G'_0`` invertible, the scaled
coefficients are the sub-Pfaffians of one skew matrix:

* parity:       ``g0v * G'_J = 0``               for every odd ``|J|``
* consistency:  ``g0v * G'_J = sum_j s_j g0v^2 G'_{i1 ij} G'_{J - i1 - ij}``
                for every even ``|J| >= 4`` (row expansion along the
                smallest member ``i1``; ``s_j = (-1)^j`` for the ``j``-th
                member counted from 1, so the expansion is right for
                non-contiguous ``J`` as well)
* empty set:    ``G'_0 - g0``
* inversion:    ``g0 * g0v - 1`` and, per unknown basis, the determinant
                definition ``a00 a11 - a01 a10 - dA`` and ``dA * dAv - 1``.

Cogates use the entries ``b{k}_{rc}`` of ``A_k^-1``: ``C'_J = sum_I C_I
prod_p b[I_p, J_p]`` and the same equations hold for ``D_K = C'_{K^c}``,
because a cogate's Pfaffian form indexes minors by complements.

Variable names
--------------
``a{k}_{rc}`` / ``b{k}_{rc}`` matrix entries, ``dA{k}`` / ``dB{k}`` their
determinants, ``dA{k}v`` / ``dB{k}v`` the inverses of those, ``g0`` and
``g0v`` the empty-set coefficient and its inverse (``g0_t{n}`` /
``g0v_t{n}`` for the ``n``-th tensor of a circuit).  Variable order is
a-entries, b-entries, determinants, inverse determinants, scalars.

Export formats
--------------
``singular``: ``ring r = 0, (vars), dp;`` / ``ideal i = ...;`` / ``std(i);``.

``neutral``::

    pfk-polysys 1
    vars <name> <name> ...
    gen <tag> <term count>
    <coefficient> <exponent> <exponent> ...
    ...
    end

one exponent per variable in ``vars`` order; coefficients are exact
rationals ``p`` or ``p/q``.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import ArityMismatch, NotRational, ParseError, SchemeCollision
from .groebner import Polynomial, to_mpq
from .scalars import QI
from .tensor import COGATE, GATE, popcount

__all__ = [
    "PolySystem", "gate_ideal", "cogate_ideal", "circuit_ideal", "export",
    "parse_neutral", "certificate_values", "variable_rank",
]

TAGS = ("parity", "consistency", "empty", "inversion", "linkage", "basis")


# ---------------------------------------------------------------------------
# systems
# ---------------------------------------------------------------------------

_RANK = [
    (re.compile(r"a(\d+)_([01])([01])$"), 0),
    (re.compile(r"b(\d+)_([01])([01])$"), 1),
    (re.compile(r"d([AB])(\d+)$"), 2),
    (re.compile(r"d([AB])(\d+)v$"), 3),
    (re.compile(r"g0(?:_t(\d+))?$"), 4),
    (re.compile(r"g0v(?:_t(\d+))?$"), 4),
]


def variable_rank(name):
    """Sort key realising the scheme order."""
    for k, (rx, group) in enumerate(_RANK):
        m = rx.match(name)
        if not m:
            continue
        g = m.groups()
        if group in (0, 1):
            return (group, int(g[0]), g[1] + g[2], "")
        if group in (2, 3):
            return (group, int(g[1]), g[0], "")
        t = int(g[0]) if g[0] else 0
        return (group, t, "v" if k == 5 else "", "")
    return (9, 0, "", name)


@dataclass
class PolySystem:
    """Generators with provenance tags over an ordered variable list."""

    variables: list = field(default_factory=list)
    generators: list = field(default_factory=list)
    tags: list = field(default_factory=list)

    def add(self, poly, tag):
        if tag not in TAGS:
            raise ValueError(f"unknown tag {tag}")
        if poly.is_zero():
            return
        self.generators.append(poly)
        self.tags.append(tag)

    def finish(self):
        """Recompute the variable list (scheme order) from the generators."""
        names = {v for p in self.generators for v in p.variables()}
        self.variables = sorted(names, key=variable_rank)
        return self

    def merged(self, other):
        out = PolySystem([], self.generators + other.generators, self.tags + other.tags)
        return out.finish()

    def count(self, tag):
        return self.tags.count(tag)

    def by_tag(self, tag):
        return [p for p, t in zip(self.generators, self.tags) if t == tag]

    def subs(self, values):
        return [p.subs(values) for p in self.generators]

    def __len__(self):
        return len(self.generators)

    def __eq__(self, other):
        return (isinstance(other, PolySystem) and self.variables == other.variables
                and self.generators == other.generators and self.tags == other.tags)


# ---------------------------------------------------------------------------
# exact data
# ---------------------------------------------------------------------------

def _rational(x, what):
    if isinstance(x, QI):
        if x.im:
            raise NotRational(f"{what} {x} is not rational")
        x = x.re
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, (int, Fraction)):
        return to_mpq(x)
    if isinstance(x, complex):
        if x.imag == 0 and float(x.real).is_integer():
            return to_mpq(int(x.real))
    elif isinstance(x, float) and x.is_integer():
        return to_mpq(int(x))
    raise NotRational(f"{what} {x!r} is not an exact rational")


def _matrix_entries(m, what):
    return [[_rational(m[r, c], what) for c in (0, 1)] for r in (0, 1)]


# ---------------------------------------------------------------------------
# single tensors
# ---------------------------------------------------------------------------

def _basis_symbols(kind, k, fixed):
    """2x2 nested list of Polynomials for basis index ``k`` on the gate
    (``a``) or cogate (``b`` = inverse) side."""
    if k in fixed:
        m = fixed[k]
        if kind == COGATE:
            m = m.inverse()
        vals = _matrix_entries(m, f"fixed basis {k}")
        return [[Polynomial.const(v) for v in row] for row in vals], False
    letter = "a" if kind == GATE else "b"
    return [[Polynomial.var(f"{letter}{k}_{r}{c}") for c in (0, 1)] for r in (0, 1)], True


def _transformed(t, mats):
    """Symbolic transformed coefficients indexed by mask (position p ↔ bit
    p-1).  Gates: ``G'_J = sum G_I prod M[J_p, I_p]``; cogates:
    ``C'_J = sum C_I prod M[I_p, J_p]`` with M the b-matrices."""
    n = t.arity
    coeffs = {m: _rational(c, "coefficient") for m, c in t.coeffs.items()}
    # one wire at a time: out[J] over partially transformed indices
    cur = {m: Polynomial.const(c) for m, c in coeffs.items()}
    for p in range(n):
        bit = 1 << p
        M = mats[p]
        nxt = {}
        for mask, poly in cur.items():
            src = 1 if mask & bit else 0
            base = mask & ~bit
            for dst in (0, 1):
                entry = M[dst][src] if t.kind == GATE else M[src][dst]
                if entry.is_zero():
                    continue
                key = base | (bit if dst else 0)
                term = poly * entry
                nxt[key] = nxt[key] + term if key in nxt else term
        cur = {k: v for k, v in nxt.items() if not v.is_zero()}
    return [cur.get(mask, Polynomial()) for mask in range(1 << n)]


def _tensor_system(t, index, fixed, scalars, reduce_scalars):
    """Parity / consistency / empty-set generators for one tensor plus
    ``g0 g0v - 1``.  Returns (system, unknown basis indices used)."""
    n = t.arity
    mats, unknown = [], []
    for p in range(n):
        k = index[p]
        m, is_var = _basis_symbols(t.kind, k, fixed)
        mats.append(m)
        if is_var and k not in unknown:
            unknown.append(k)
    tp = _transformed(t, mats)
    full = (1 << n) - 1
    if t.kind == COGATE:
        coeff = [tp[full ^ K] for K in range(1 << n)]
    else:
        coeff = tp
    g0n, g0vn = scalars
    g0, g0v = Polynomial.var(g0n), Polynomial.var(g0vn)
    s = PolySystem()
    for J in range(1, 1 << n):
        if popcount(J) % 2:
            s.add(coeff[J] if reduce_scalars else g0v * coeff[J], "parity")
    for size in range(4, n + 1, 2):
        for members in combinations(range(n), size):
            J = sum(1 << p for p in members)
            first = 1 << members[0]
            rhs = Polynomial()
            for pos, q in enumerate(members[1:], start=2):
                pair = first | (1 << q)
                sign = 1 if pos % 2 == 0 else -1
                rhs = rhs + coeff[pair] * coeff[J ^ pair] * sign
            if reduce_scalars:
                s.add(g0 * coeff[J] - rhs, "consistency")
            else:
                s.add(g0v * coeff[J] - g0v * g0v * rhs, "consistency")
    s.add(coeff[0] - g0, "empty")
    s.add(g0 * g0v - 1, "inversion")
    return s, unknown


def _determinant_generators(s, kind, k):
    letter, d = ("a", "dA") if kind == GATE else ("b", "dB")
    e = {rc: Polynomial.var(f"{letter}{k}_{rc}") for rc in ("00", "01", "10", "11")}
    det, detv = Polynomial.var(f"{d}{k}"), Polynomial.var(f"{d}{k}v")
    s.add(e["00"] * e["11"] - e["01"] * e["10"] - det, "inversion")
    s.add(det * detv - 1, "inversion")


def _wire_indices(t, mode, indices):
    if indices is not None:
        idx = [indices[w] if isinstance(indices, dict) else indices[p]
               for p, w in enumerate(t.wires)]
        if len(idx) != t.arity:
            raise ArityMismatch("one basis index per wire is required")
        return idx
    if mode in ("homogeneous", "hom"):
        return [1] * t.arity
    if mode in ("heterogeneous", "het"):
        return list(range(1, t.arity + 1))
    raise ValueError(f"unknown mode {mode!r}")


def _single(t, kind, mode, fixed, indices, reduce_scalars):
    if t.kind != kind:
        raise ArityMismatch(f"expected a {kind}, got a {t.kind}")
    fixed = dict(fixed or {})
    idx = _wire_indices(t, mode, indices)
    s, unknown = _tensor_system(t, idx, fixed, ("g0", "g0v"), reduce_scalars)
    for k in unknown:
        _determinant_generators(s, kind, k)
    return s.finish()


def gate_ideal(g, mode="heterogeneous", fixed=None, indices=None, reduce_scalars=False):
    """System whose solutions are the bases making gate ``g`` Pfaffian.

    ``fixed`` maps basis indices to rational :class:`BasisMatrix` values;
    ``indices`` (optional) overrides the per-wire basis index, by wire
    label (dict) or position (list).  Homogeneous mode puts every wire on
    index 1, heterogeneous mode wire position ``p`` on index ``p``.
    """
    return _single(g, GATE, mode, fixed, indices, reduce_scalars)


def cogate_ideal(c, mode="heterogeneous", fixed=None, indices=None, reduce_scalars=False):
    """Cogate analogue of :func:`gate_ideal` in the entries ``b{k}_{rc}``
    of the inverse bases; ``fixed`` matrices are inverted first."""
    return _single(c, COGATE, mode, fixed, indices, reduce_scalars)


def circuit_ideal(tensors, mode="heterogeneous", fixed=None, reduce_scalars=False):
    """Linked system of several tensors.

    ``tensors`` is a list of ``(Tensor, {wire: basis index})``.  A basis
    index used on a gate wire contributes ``a`` variables, on a cogate
    wire ``b`` variables; an index used on both sides gets the four
    linkage generators of ``A_k * A_k^-1 = I``.  Homogeneous mode maps
    every index to 1.
    """
    fixed = dict(fixed or {})
    out = PolySystem()
    sides = {}
    for t_no, (t, wmap) in enumerate(tensors, 1):
        if mode in ("homogeneous", "hom"):
            idx = [1] * t.arity
        else:
            try:
                idx = [int(wmap[w]) for w in t.wires]
            except KeyError as e:
                raise SchemeCollision(f"no basis index for wire {e.args[0]}") from None
        for k in idx:
            if k < 1:
                raise SchemeCollision(f"basis indices start at 1, got {k}")
        s, unknown = _tensor_system(t, idx, fixed, (f"g0_t{t_no}", f"g0v_t{t_no}"),
                                    reduce_scalars)
        for k in unknown:
            sides.setdefault(k, set()).add(t.kind)
        out.generators += s.generators
        out.tags += s.tags
    for k in sorted(sides):
        for kind in (GATE, COGATE):
            if kind in sides[k]:
                _determinant_generators(out, kind, k)
    for k in sorted(sides):
        if sides[k] == {GATE, COGATE}:
            for r in (0, 1):
                for c in (0, 1):
                    lhs = Polynomial()
                    for m in (0, 1):
                        lhs = lhs + (Polynomial.var(f"a{k}_{r}{m}")
                                     * Polynomial.var(f"b{k}_{m}{c}"))
                    out.add(lhs - (1 if r == c else 0), "linkage")
    return out.finish()


def certificate_values(kind, bases, scale, indices=None, scalar_names=("g0", "g0v")):
    """Exact variable assignment realised by a certificate with rational
    bases: entries (or inverse entries for cogates), determinants and
    their inverses, ``g0 = scale`` and ``g0v = 1/scale``."""
    vals = {}
    idx = indices or list(range(1, len(bases) + 1))
    for k, m in zip(idx, bases):
        if kind == COGATE:
            m = m.inverse()
        e = _matrix_entries(m, "basis")
        letter, d = ("a", "dA") if kind == GATE else ("b", "dB")
        for r in (0, 1):
            for c in (0, 1):
                vals[f"{letter}{k}_{r}{c}"] = e[r][c]
        det = e[0][0] * e[1][1] - e[0][1] * e[1][0]
        vals[f"{d}{k}"] = det
        vals[f"{d}{k}v"] = 1 / det
    s = _rational(scale, "scale")
    vals[scalar_names[0]] = s
    vals[scalar_names[1]] = 1 / s
    return vals


# ---------------------------------------------------------------------------
# export / import
# ---------------------------------------------------------------------------

def _singular_poly(p, variables):
    from .groebner import MonomialOrder
    return p.format(MonomialOrder("degrevlex", tuple(variables)))


def export(s, fmt="singular"):
    """Text of ``s`` in the ``singular`` or ``neutral`` format."""
    if fmt == "singular":
        vs = list(s.variables) or ["x"]
        lines = [f"ring r = 0, ({', '.join(vs)}), dp;"]
        if not s.generators:
            lines.append("ideal i = 0;")
        else:
            body = ",\n  ".join(_singular_poly(p, vs) for p in s.generators)
            lines.append(f"ideal i =\n  {body};")
        lines.append("std(i);")
        return "\n".join(lines) + "\n"
    if fmt == "neutral":
        from .groebner import MonomialOrder
        order = MonomialOrder("degrevlex", tuple(s.variables))
        lines = ["pfk-polysys 1", "vars " + " ".join(s.variables)]
        for p, tag in zip(s.generators, s.tags):
            d = order.to_dict(p)
            lines.append(f"gen {tag} {len(d)}")
            for e in sorted(d, key=order.key):
                c = d[e]
                q = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
                lines.append(" ".join([q, *map(str, e)]))
        lines.append("end")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown export format {fmt!r}")


def parse_neutral(text, source=None):
    """Inverse of ``export(s, "neutral")``."""
    lines = [(k, ln.strip()) for k, ln in enumerate(text.splitlines(), 1)]
    lines = [(k, ln) for k, ln in lines if ln and not ln.startswith("#")]

    def fail(msg, k):
        raise ParseError(msg, k, 1, source)

    if not lines or lines[0][1].split()[:1] != ["pfk-polysys"]:
        fail("missing 'pfk-polysys' header", lines[0][0] if lines else 1)
    if len(lines) < 2 or not lines[1][1].startswith("vars"):
        fail("missing 'vars' line", lines[1][0] if len(lines) > 1 else 1)
    variables = lines[1][1].split()[1:]
    s = PolySystem(list(variables))
    i = 2
    while i < len(lines):
        k, ln = lines[i]
        if ln == "end":
            return s
        parts = ln.split()
        if len(parts) != 3 or parts[0] != "gen" or parts[1] not in TAGS:
            fail(f"expected 'gen <tag> <count>', got {ln!r}", k)
        try:
            count = int(parts[2])
        except ValueError:
            fail("term count must be an integer", k)
        terms = {}
        for j in range(count):
            if i + 1 + j >= len(lines):
                fail("generator ends early", k)
            kk, row = lines[i + 1 + j]
            f = row.split()
            if len(f) != len(variables) + 1:
                fail(f"expected {len(variables) + 1} fields", kk)
            try:
                c = to_mpq(f[0])
                e = [int(x) for x in f[1:]]
            except (ValueError, ZeroDivisionError):
                fail("malformed term", kk)
            if any(x < 0 for x in e):
                fail("exponents must be non-negative", kk)
            mono = tuple((v, x) for v, x in zip(variables, e) if x)
            terms[mono] = c
        s.generators.append(Polynomial(terms))
        s.tags.append(parts[1])
        i += 1 + count
    fail("missing 'end'", lines[-1][0])
