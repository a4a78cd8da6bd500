import itertools
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from pfk.errors import BudgetExceeded
from pfk.groebner import (GroebnerBasis, MonomialOrder, Polynomial, buchberger,
                          is_groebner, is_trivial, normal_form, s_polynomial)
from pfk.polysys import circuit_ideal, cogate_ideal, gate_ideal
from pfk.registry import CNOT1, HADAMARD, HALF, cap_tensor, equal_tensor
from pfk.tensor import parse_tensor

P = Polynomial.parse
X, Y, Z = (Polynomial.var(v) for v in "xyz")


# -- polynomials -------------------------------------------------------------

def test_parse_and_format():
    p = P("2*x^2*y - 1/3*y + 4")
    assert p == 2 * X ** 2 * Y - Polynomial.const("1/3") * Y + 4
    assert P(str(p)) == p
    assert p.degree() == 3
    assert sorted(p.variables()) == ["x", "y"]


def test_subs_and_constants():
    p = P("x*y - 1")
    assert p.subs({"x": 2, "y": "1/2"}).is_zero()
    assert p.subs({"x": Y}) == P("y^2 - 1")
    assert P("7").is_constant() and not p.is_constant()


def test_orders_rank_monomials():
    for kind, want in [("lex", ["x", "y^3", "y", "1"]),
                       ("degrevlex", ["y^3", "x", "y", "1"])]:
        o = MonomialOrder(kind, ("x", "y"))
        monos = [P("1"), P("y"), P("x"), P("y^3")]
        got = sorted(monos, key=lambda m: o.key(o.pack(next(iter(m.terms)))))
        assert [str(m) for m in got] == want


# -- division and bases ------------------------------------------------------

def test_normal_form_examples():
    assert normal_form(P("x^2 - 1"), [P("x - 1")], "lex").is_zero()
    assert normal_form(X, [], "lex") == X


def test_small_bases():
    gb = buchberger([P("x^2 - 1"), P("x - 1")], "degrevlex")
    assert gb.generators == [P("x - 1")]
    assert not is_trivial(gb)
    assert is_trivial(buchberger([P("x - 1"), P("x - 2")], "lex"))
    assert is_trivial(GroebnerBasis([Polynomial.const(1)], None, True, {}))
    assert buchberger([], "lex").generators == []


def test_textbook_basis():
    # x^2 y = 1 forces x != 0, so y^2 = 1 and then x^2 = y
    gb = buchberger([P("x^2*y - 1"), P("x*y^2 - x")], MonomialOrder("lex", ("x", "y")))
    assert set(gb.generators) == {P("x^2 - y"), P("y^2 - 1")}


def test_s_polynomial():
    o = MonomialOrder("lex", ("x", "y"))
    # under lex the leading term of y^2 - x is -x
    assert s_polynomial(P("x*y - 1"), P("y^2 - x"), o) == P("y^3 - 1")


def _random_poly(rng, nvars=3, terms=4, deg=2):
    names = "xyz"[:nvars]
    out = Polynomial()
    for _ in range(rng.randint(1, terms)):
        mono = tuple((v, k) for v, k in zip(names, (rng.randint(0, deg) for _ in names)) if k)
        out = out + Polynomial({mono: rng.randint(-3, 3) or 1})
    return out


def _to_sympy(p):
    return sympy.sympify(str(p).replace("^", "**"))


@pytest.mark.parametrize("seed", range(30))
def test_matches_sympy(seed):
    rng = random.Random(seed)
    polys = [p for p in (_random_poly(rng) for _ in range(rng.randint(1, 3))) if not p.is_zero()]
    order = MonomialOrder("degrevlex", ("x", "y", "z"))
    gb = buchberger(polys, order, timeout=30)
    ref = sympy.groebner([_to_sympy(p) for p in polys], *sympy.symbols("x y z"),
                         order="grevlex")
    theirs = sorted(str(sympy.expand(g / sympy.LC(g, *sympy.symbols("x y z"), order="grevlex")))
                    for g in ref.exprs)
    mine = sorted(str(sympy.expand(_to_sympy(g))) for g in gb.generators)
    assert mine == theirs


@pytest.mark.parametrize("seed", range(15))
def test_basis_properties(seed):
    rng = random.Random(100 + seed)
    polys = [p for p in (_random_poly(rng) for _ in range(3)) if not p.is_zero()]
    order = MonomialOrder("degrevlex", ("x", "y", "z"))
    gb = buchberger(polys, order, timeout=30)
    assert is_groebner(gb.generators, order)
    for p in polys:
        assert gb.contains(p)
    again = buchberger(list(reversed(polys)), order, timeout=30)
    assert [str(g) for g in again.generators] == [str(g) for g in gb.generators]


# -- membership against a linear-algebra oracle ------------------------------

def _monomials(names, deg):
    for exps in itertools.product(range(deg + 1), repeat=len(names)):
        if sum(exps) == deg:
            yield tuple((v, k) for v, k in zip(names, exps) if k)


def _macaulay_member(p, gens, names, deg):
    """``p`` (homogeneous of degree ``deg``) lies in the span of
    ``m * g`` over monomials ``m`` and homogeneous generators ``g``."""
    rows = []
    for g in gens:
        d = deg - g.degree()
        if d < 0:
            continue
        for m in _monomials(names, d):
            rows.append(Polynomial({m: 1}) * g)
    cols = sorted({mono for r in rows + [p] for mono in r.terms})
    def vec(q):
        return [sympy.Rational(str(q.terms.get(c, 0))) for c in cols]
    if not rows:
        return p.is_zero()
    a = sympy.Matrix([vec(r) for r in rows])
    return a.rank() == a.col_join(sympy.Matrix([vec(p)])).rank()


def _random_form(rng, names, deg):
    out = Polynomial()
    for m in _monomials(names, deg):
        if rng.random() < 0.6:
            out = out + Polynomial({m: rng.randint(-2, 2)})
    return out


@pytest.mark.parametrize("seed", range(12))
def test_membership_matches_macaulay(seed):
    rng = random.Random(seed)
    names = ("x", "y", "z")
    gens = [q for q in (_random_form(rng, names, rng.randint(1, 2)) for _ in range(2))
            if not q.is_zero()]
    order = MonomialOrder("degrevlex", names)
    gb = buchberger(gens, order, timeout=30)
    for deg in (2, 3, 4):
        member = sum((_random_form(rng, names, deg - g.degree()) * g for g in gens
                      if g.degree() <= deg), Polynomial())
        other = _random_form(rng, names, deg)
        for p in (member, other):
            assert gb.contains(p) == _macaulay_member(p, gens, names, deg)


# -- budgets and determinism on generated systems -----------------------------

def test_pair_budget_carries_partial_basis():
    s = gate_ideal(parse_tensor(CNOT1, kind="gate"), "hom")
    with pytest.raises(BudgetExceeded) as info:
        buchberger(s, max_pairs=3)
    partial = info.value.partial
    assert isinstance(partial, GroebnerBasis) and not partial.complete
    assert len(partial.generators) > 0


def test_time_budget():
    s = gate_ideal(equal_tensor(4), "het")
    with pytest.raises(BudgetExceeded):
        buchberger(s, timeout=0.0)


SMALL_SYSTEMS = {
    "or_gate_fixed_second": lambda: gate_ideal(parse_tensor("|10> + |01> + |11>", kind="gate"),
                                               fixed={2: HADAMARD}),
    "equal3_fixed_two": lambda: gate_ideal(equal_tensor(3), fixed={1: HADAMARD, 2: HALF}),
    "cnot1_hom": lambda: gate_ideal(parse_tensor(CNOT1, kind="gate"), "hom"),
    "cap_gate": lambda: gate_ideal(cap_tensor("gate")),
    "equal2_cogate_fixed": lambda: cogate_ideal(equal_tensor(2, "cogate"), fixed={1: HALF}),
    "equal4_hom": lambda: gate_ideal(equal_tensor(4), "hom"),
}


@pytest.mark.parametrize("name", list(SMALL_SYSTEMS))
def test_generated_systems_closed_and_deterministic(name):
    s = SMALL_SYSTEMS[name]()
    assert len(s.variables) <= 12
    gb = buchberger(s, timeout=120)
    if not is_trivial(gb):
        assert is_groebner(gb.generators, gb.order)
    for g in s.generators:
        assert gb.contains(g)
    again = buchberger(s, timeout=120)
    assert [g.format() for g in again.generators] == [g.format() for g in gb.generators]


# -- the printed Boolean-tree basis -------------------------------------------

PRINTED_TREE_BASIS = """a10+a11
a00-a01
2*a11^2-1
2*a01*a11-dA
2*a01^2-dA^2
a01*dAv-a11
a11*dA-a01
dA*dAv-1
b10-b11
b00+b01
2*b11-1
b01+dB
dB*dBv-1
dBv^2-2*a01
2*a11*dB-dAv*dBv
2*a01*dB-dBv
a11*dAv-dB^2
2*dB^3-dAv^2*dBv""".split()

RENAME = {"a1_00": "a00", "a1_01": "a01", "a1_10": "a10", "a1_11": "a11",
          "a2_00": "b00", "a2_01": "b01", "a2_10": "b10", "a2_11": "b11",
          "dA1": "dA", "dA2": "dB", "dA1v": "dAv", "dA2v": "dBv"}


def tree_basis(normalise=True):
    """Eliminate the inverse entries, determinants of inverses and scalars
    from the linked five-piece tree system; keep the two gate-side bases."""
    tensors = [
        (equal_tensor(3, "gate", (1, 2, 3)), {1: 1, 2: 2, 3: 2}),
        (equal_tensor(3, "cogate", (2, 4, 5)), {2: 2, 4: 1, 5: 1}),
        (equal_tensor(2, "cogate", (1, 6)), {1: 1, 6: 1}),
        (cap_tensor("cogate", 3), {3: 2}),
        (cap_tensor("gate", 4), {4: 1}),
    ]
    s = circuit_ideal(tensors)
    gens = list(s.generators)
    if normalise:
        # the three EQUAL pieces carry scalar 1
        gens += [Polynomial.var(f"g0_t{k}") - 1 for k in (1, 2, 3)]
    keep = list(RENAME)
    elim = [v for v in s.variables if v not in keep]
    order = MonomialOrder("elim", tuple(elim + keep), elim=len(elim))
    gb = buchberger(gens, order, timeout=600)
    out = [g.subs({k: Polynomial.var(v) for k, v in RENAME.items()})
           for g in gb.generators if not set(g.variables()) & set(elim)]
    return out


@pytest.mark.slow
def test_printed_tree_basis_is_ideal_equal():
    ours = tree_basis()
    order = MonomialOrder("degrevlex", tuple(RENAME.values()))
    printed = [P(t) for t in PRINTED_TREE_BASIS]
    assert [t for t, p in zip(PRINTED_TREE_BASIS, printed)
            if not normal_form(p, ours, order).is_zero()] == []
    theirs = buchberger(printed, order)
    assert [str(g) for g in ours if not theirs.contains(g)] == []
