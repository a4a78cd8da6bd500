"""Exact-rational multivariate polynomials and Buchberger's algorithm.

:class:`Polynomial` is a sparse map from monomials to ``gmpy2.mpq``
coefficients over *named* variables; it is what :mod:`pfk.polysys`
builds.  For the Groebner computations every polynomial is packed into
exponent tuples over the variable list of a :class:`MonomialOrder`, and
the division / S-polynomial loops run on those dicts.

The basis computation is the textbook pair loop:

* pairs are taken smallest-lcm first (the normal strategy), ties broken
  by pair index, so results are deterministic;
* a pair whose leading monomials are coprime is skipped (first
  criterion), as is a pair (i, j) for which some k has ``LM(k) | lcm`` and
  both (i, k) and (j, k) already handled (chain criterion);
* the final basis is inter-reduced and made monic.

A pair-count or wall-clock budget raises :class:`BudgetExceeded` with the
partial basis attached.
"""

import heapq
import re
import time
from dataclasses import dataclass, field

from gmpy2 import mpq

from .errors import BudgetExceeded, ParseError, PfkError

__all__ = [
    "Polynomial", "MonomialOrder", "GroebnerBasis", "normal_form",
    "buchberger", "is_trivial", "is_groebner", "s_polynomial", "to_mpq",
]


def to_mpq(x):
    """Exact rational from int / Fraction / mpq / decimal-free string."""
    if isinstance(x, str):
        return mpq(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return mpq(int(x.numerator), int(x.denominator))
    if isinstance(x, float):
        if x != int(x):
            raise PfkError(f"refusing inexact coefficient {x!r}")
        return mpq(int(x))
    return mpq(x)


def _fmt_q(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# named polynomials
# ---------------------------------------------------------------------------

class Polynomial:
    """Sparse polynomial over exact rationals in named variables.

    Monomials are tuples of ``(name, exponent)`` pairs sorted by name;
    the empty tuple is the constant monomial.  Zero coefficients are
    never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        out = {}
        for m, c in (terms or {}).items():
            c = to_mpq(c)
            if c:
                m = tuple(sorted((v, e) for v, e in m if e))
                out[m] = out.get(m, mpq(0)) + c
                if not out[m]:
                    del out[m]
        self.terms = out

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def const(cls, c):
        return cls({(): c})

    @classmethod
    def var(cls, name):
        return cls._raw({((name, 1),): mpq(1)})

    @staticmethod
    def lift(x):
        return x if isinstance(x, Polynomial) else Polynomial.const(x)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = Polynomial.lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-Polynomial.lift(other))

    def __rsub__(self, other):
        return Polynomial.lift(other) - self

    def __mul__(self, other):
        other = Polynomial.lift(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = Polynomial.const(1)
        for _ in range(int(k)):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.lift(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(m == () for m in self.terms)

    def variables(self):
        return sorted({v for m in self.terms for v, _ in m})

    def degree(self):
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def subs(self, values):
        """Substitute exact rationals (or polynomials) for variables."""
        out = Polynomial()
        for m, c in self.terms.items():
            t = Polynomial.const(c)
            rest = []
            for v, e in m:
                if v in values:
                    t = t * (Polynomial.lift(values[v]) ** e)
                else:
                    rest.append((v, e))
            out = out + t * Polynomial._raw({tuple(rest): mpq(1)})
        return out

    def __call__(self, **values):
        return self.subs(values)

    def format(self, order=None):
        """Singular-style text (``2*a1_00^2*g0v-1``); terms in ``order``."""
        if not self.terms:
            return "0"
        ms = list(self.terms)
        if order is not None:
            ms.sort(key=lambda m: order.key(order.pack(m)))
        else:
            ms.sort(key=lambda m: (-sum(e for _, e in m), m))
        parts = []
        for m in ms:
            c = self.terms[m]
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            a = abs(c)
            if not mono:
                body = _fmt_q(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_fmt_q(a)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += sign + body
        return s

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Polynomial({self.format()})"

    @classmethod
    def parse(cls, text):
        """Inverse of :meth:`format` (``+ - * ^``, rationals, names)."""
        return _parse_poly(text)


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


_TOKEN = re.compile(r"(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\^)|(\*)|([+-])")
_NUM, _NAME, _POW, _MUL, _SIGN = 1, 2, 3, 4, 5


def _tokens(text):
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", 1, pos + 1)
        yield m.lastindex, m.group(m.lastindex), pos + 1
        pos = m.end()


def _parse_poly(text):
    toks = list(_tokens(text))
    toks.append((None, None, len(text) + 1))
    i = 0

    def factor():
        nonlocal i
        kind, val, col = toks[i]
        if kind not in (_NUM, _NAME):
            raise ParseError("expected a number or a variable", 1, col)
        f = Polynomial.const(mpq(val)) if kind == _NUM else Polynomial.var(val)
        i += 1
        if toks[i][0] == _POW:
            if toks[i + 1][0] != _NUM or "/" in toks[i + 1][1]:
                raise ParseError("exponent must be a non-negative integer", 1, toks[i][2])
            f = f ** int(toks[i + 1][1])
            i += 2
        return f

    out = Polynomial()
    first = True
    while toks[i][0] is not None or first:
        sign = 1
        if toks[i][0] == _SIGN:
            sign = -1 if toks[i][1] == "-" else 1
            i += 1
        elif not first:
            raise ParseError("expected '+' or '-'", 1, toks[i][2])
        term = factor()
        while toks[i][0] == _MUL:
            i += 1
            term = term * factor()
        out = out + term * sign
        first = False
    return out


# ---------------------------------------------------------------------------
# monomial orders on packed exponent tuples
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonomialOrder:
    """``degrevlex`` / ``deglex`` / ``lex`` over ``variables`` (first =
    largest), or ``elim``: degrevlex on the first ``elim`` variables,
    ties broken by degrevlex on the rest (an elimination order)."""

    kind: str
    variables: tuple
    elim: int = 0

    def __post_init__(self):
        if self.kind not in ("degrevlex", "deglex", "lex", "elim"):
            raise PfkError(f"unknown monomial order {self.kind!r}")
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "_index", {v: k for k, v in enumerate(self.variables)})

    @property
    def nvars(self):
        return len(self.variables)

    def key(self, e):
        """Sort key: ascending key = descending monomial."""
        if self.kind == "degrevlex":
            return (-sum(e), e[::-1])
        if self.kind == "deglex":
            return (-sum(e), tuple(-x for x in e))
        if self.kind == "lex":
            return tuple(-x for x in e)
        a, b = e[:self.elim], e[self.elim:]
        return (-sum(a), a[::-1], -sum(b), b[::-1])

    def rank(self, e):
        """Sort key: ascending key = ascending monomial."""
        if self.kind == "degrevlex":
            return (sum(e), tuple(-x for x in e[::-1]))
        if self.kind == "deglex":
            return (sum(e), e)
        if self.kind == "lex":
            return e
        a, b = e[:self.elim], e[self.elim:]
        return (sum(a), tuple(-x for x in a[::-1]), sum(b), tuple(-x for x in b[::-1]))

    def pack(self, mono):
        e = [0] * len(self.variables)
        for v, x in mono:
            try:
                e[self._index[v]] = x
            except KeyError:
                raise PfkError(f"variable {v} not in the order") from None
        return tuple(e)

    def unpack(self, e):
        return tuple((v, x) for v, x in zip(self.variables, e) if x)

    def to_dict(self, p):
        return {self.pack(m): c for m, c in p.terms.items()}

    def from_dict(self, d):
        return Polynomial._raw({self.unpack(e): c for e, c in d.items() if c})

    def leading(self, d):
        return min(d, key=self.key)


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


class _Poly:
    """Packed polynomial with cached leading monomial (monic or not)."""

    __slots__ = ("d", "lm", "lc", "terms")

    def __init__(self, d, order):
        self.d = d
        self.lm = order.leading(d)
        self.lc = d[self.lm]
        self.terms = sorted(d.items(), key=lambda t: order.key(t[0]))

    def monic(self, order):
        inv = 1 / self.lc
        return _Poly({e: c * inv for e, c in self.d.items()}, order)


def _reduce(d, basis, order, full=True):
    """Remainder of ``d`` (packed dict) on division by ``basis`` (list of
    :class:`_Poly`).  ``full=False`` stops at the first irreducible term."""
    p = dict(d)
    r = {}
    heap = [(order.key(e), e) for e in p]
    heapq.heapify(heap)
    while heap:
        _, e = heapq.heappop(heap)
        c = p.pop(e, None)
        if not c:
            continue
        for g in basis:
            if _divides(g.lm, e):
                q = c / g.lc
                shift = _sub(e, g.lm)
                for ge, gc in g.terms[1:]:
                    ne = _add(ge, shift)
                    old = p.get(ne)
                    if old is None:
                        p[ne] = -q * gc
                        heapq.heappush(heap, (order.key(ne), ne))
                    else:
                        v = old - q * gc
                        if v:
                            p[ne] = v
                        else:
                            del p[ne]
                break
        else:
            r[e] = c
            if not full:
                r.update(p)
                return r
    return r


def _spoly(f, g):
    lcm = _lcm(f.lm, g.lm)
    sf, sg = _sub(lcm, f.lm), _sub(lcm, g.lm)
    out = {}
    for e, c in f.terms[1:]:
        out[_add(e, sf)] = c / f.lc
    for e, c in g.terms[1:]:
        k = _add(e, sg)
        v = out.get(k, 0) - c / g.lc
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _order_for(polys, order):
    if isinstance(order, MonomialOrder):
        return order
    names = []
    seen = set()
    for p in polys:
        for v in p.variables():
            if v not in seen:
                seen.add(v)
                names.append(v)
    return MonomialOrder(order or "degrevlex", tuple(sorted(names)))


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def normal_form(p, basis, order):
    """Remainder of ``p`` on division by ``basis`` (any Polynomials)."""
    order = _order_for([p, *basis], order)
    gs = [_Poly(order.to_dict(g), order) for g in basis if not g.is_zero()]
    return order.from_dict(_reduce(order.to_dict(p), gs, order))


def s_polynomial(f, g, order):
    order = _order_for([f, g], order)
    return order.from_dict(_spoly(_Poly(order.to_dict(f), order),
                                  _Poly(order.to_dict(g), order)))


@dataclass
class GroebnerBasis:
    """Reduced, monic Groebner basis; ``complete`` is False only for the
    partial basis carried by :class:`BudgetExceeded`."""

    generators: list
    order: MonomialOrder
    complete: bool = True
    stats: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def reduce(self, p):
        return normal_form(p, self.generators, self.order)

    def contains(self, p):
        return self.reduce(p).is_zero()

    def format(self):
        return [g.format(self.order) for g in self.generators]


def _interreduce(polys, order):
    """Minimal then reduced basis from a list of monic :class:`_Poly`."""
    # smallest leading monomials first, so a kept generator is never
    # divisible by a later one
    polys = sorted(polys, key=lambda g: order.key(g.lm), reverse=True)
    minimal = []
    for g in polys:
        if not any(_divides(h.lm, g.lm) for h in minimal):
            minimal.append(g)
    out = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        r = _reduce(g.d, others, order)
        out.append(_Poly(r, order).monic(order))
    out.sort(key=lambda g: order.key(g.lm), reverse=True)
    return out


def buchberger(system, order="degrevlex", max_pairs=None, timeout=None):
    """Reduced Groebner basis of the ideal generated by ``system`` (a
    PolySystem or a list of Polynomials).

    ``order`` is a :class:`MonomialOrder` or the name of one; by name, the
    variables of a PolySystem keep their scheme order, otherwise they
    are sorted by name.
    """
    polys = list(getattr(system, "generators", system))
    if not isinstance(order, MonomialOrder):
        vs = getattr(system, "variables", None)
        if vs is not None:
            extra = sorted({v for p in polys for v in p.variables()} - set(vs))
            order = MonomialOrder(order, tuple(vs) + tuple(extra))
        else:
            order = _order_for(polys, order)
    t0 = time.monotonic()
    stats = {"pairs": 0, "skipped_coprime": 0, "skipped_chain": 0, "zero": 0}
    G = []
    for p in polys:
        d = order.to_dict(p)
        if d:
            G.append(_Poly(d, order).monic(order))
    if not G:
        return GroebnerBasis([], order, True, stats)
    if any(not any(g.lm) for g in G):
        return GroebnerBasis([Polynomial.const(1)], order, True, stats)

    pairs = []                 # heap of (key(lcm), i, j)
    done = set()
    alive = []

    def push_pairs(j):
        for i in range(j):
            if alive[i]:
                lcm = _lcm(G[i].lm, G[j].lm)
                heapq.heappush(pairs, (order.rank(lcm), i, j))

    for j in range(len(G)):
        alive.append(True)
        push_pairs(j)

    def pending(i, k):
        a, b = min(i, k), max(i, k)
        return (a, b) not in done

    while pairs:
        if max_pairs is not None and stats["pairs"] >= max_pairs:
            raise BudgetExceeded(f"pair budget {max_pairs} exhausted",
                                 _partial(G, alive, order, stats))
        if timeout is not None and time.monotonic() - t0 > timeout:
            raise BudgetExceeded(f"time budget {timeout}s exhausted",
                                 _partial(G, alive, order, stats))
        _, i, j = heapq.heappop(pairs)
        done.add((i, j))
        f, g = G[i], G[j]
        lcm = _lcm(f.lm, g.lm)
        if all(x == 0 or y == 0 for x, y in zip(f.lm, g.lm)):
            stats["skipped_coprime"] += 1
            continue
        if any(k != i and k != j and _divides(G[k].lm, lcm)
               and not pending(i, k) and not pending(j, k)
               for k in range(len(G))):
            stats["skipped_chain"] += 1
            continue
        stats["pairs"] += 1
        r = _reduce(_spoly(f, g), [h for h, a in zip(G, alive) if a], order)
        if not r:
            stats["zero"] += 1
            continue
        h = _Poly(r, order).monic(order)
        if not any(h.lm):
            stats["seconds"] = time.monotonic() - t0
            return GroebnerBasis([Polynomial.const(1)], order, True, stats)
        G.append(h)
        alive.append(True)
        push_pairs(len(G) - 1)
        # generators whose leading monomial became reducible keep their
        # queued pairs (including the one with h) but stop acting as
        # reducers
        for k in range(len(G) - 1):
            if alive[k] and _divides(h.lm, G[k].lm):
                alive[k] = False
    stats["seconds"] = time.monotonic() - t0
    return GroebnerBasis([order.from_dict(g.d) for g in _interreduce(
        [g for g, a in zip(G, alive) if a], order)], order, True, stats)


def _partial(G, alive, order, stats):
    live = [g for g, a in zip(G, alive) if a]
    return GroebnerBasis([order.from_dict(g.d) for g in live], order, False, dict(stats))


def is_trivial(gb):
    """True iff the basis is ``{1}`` (the variety is empty)."""
    gens = list(getattr(gb, "generators", gb))
    return len(gens) == 1 and gens[0].is_constant() and not gens[0].is_zero()


def is_groebner(polys, order):
    """Every S-polynomial of ``polys`` reduces to zero."""
    order = _order_for(polys, order)
    gs = [_Poly(order.to_dict(p), order) for p in polys if not p.is_zero()]
    for a in range(len(gs)):
        for b in range(a + 1, len(gs)):
            if _reduce(_spoly(gs[a], gs[b]), gs, order):
                return False
    return True
