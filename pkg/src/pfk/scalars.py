"""Scalar tower used for tensor coefficients and matrix entries.

Values are kept exact for as long as possible:

* ``int`` / ``fractions.Fraction`` for rationals,
* :class:`QI` for Gaussian rationals ``p + q*i`` (``p, q`` rational),
* ``complex`` once an irrational constant (``sqrt``, ``root4``, a float)
  enters the computation.

Comparisons against zero and between values go through :func:`is_zero`
and :func:`close`, which are exact for exact operands and use the
tolerance ``eps`` (default ``1e-9``, overridable through ``PFK_EPS``)
otherwise.
"""

import ast
import re
import math
import os
from fractions import Fraction
from numbers import Rational

from .errors import ParseError

DEFAULT_EPS = 1e-9


def get_eps():
    """Current comparison tolerance (``PFK_EPS`` wins over the default)."""
    raw = os.environ.get("PFK_EPS")
    if raw:
        try:
            return float(raw)
        except ValueError:
            pass
    return DEFAULT_EPS


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


class QI:
    """Exact Gaussian rational ``re + im*i``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    # -- coercion helpers -------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, QI):
            return other
        if isinstance(other, (int, Fraction)):
            return QI(other, 0)
        return None

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = QI._coerce(other)
        if o is None:
            return complex(self) + other
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = QI._coerce(other)
        if o is None:
            return complex(self) - other
        return QI(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = QI._coerce(other)
        if o is None:
            return other - complex(self)
        return QI(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = QI._coerce(other)
        if o is None:
            return complex(self) * other
        return QI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QI._coerce(other)
        if o is None:
            return complex(self) / other
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QI((self.re * o.re + self.im * o.im) / den,
                  (self.im * o.re - self.re * o.im) / den)

    def __rtruediv__(self, other):
        o = QI._coerce(other)
        if o is None:
            return other / complex(self)
        return o / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return complex(self) ** k
        if k < 0:
            return QI(1) / (self ** -k)
        out = QI(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self):
        return QI(self.re, -self.im)

    def __abs__(self):
        return math.hypot(float(self.re), float(self.im))

    def __eq__(self, other):
        o = QI._coerce(other)
        if o is None:
            try:
                return complex(self) == complex(other)
            except TypeError:
                return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"QI({self.re}, {self.im})"

    def __str__(self):
        return format_scalar(self)


I = QI(0, 1)

EXACT_TYPES = (int, Fraction, QI)


def is_exact(x):
    return isinstance(x, EXACT_TYPES)


def normalize(x):
    """Canonical representative: QI with zero imaginary part becomes a
    Fraction, integral Fractions become ints, floats become complex."""
    if isinstance(x, QI):
        if x.im == 0:
            x = x.re
        else:
            return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, (int,)):
        return x
    if isinstance(x, Rational):
        return normalize(Fraction(x))
    return complex(x)


def div(a, b):
    """``a / b`` that stays exact for exact operands."""
    if isinstance(a, int) and isinstance(b, int):
        return normalize(Fraction(a, b))
    return normalize(a / b)


def to_complex(x):
    return complex(x)


def is_zero(x, eps=None):
    if isinstance(x, EXACT_TYPES):
        return not x
    return abs(x) <= (get_eps() if eps is None else eps)


def close(a, b, eps=None):
    """``|a - b| <= eps * max(1, |a|, |b|)``; exact when both are exact."""
    if isinstance(a, EXACT_TYPES) and isinstance(b, EXACT_TYPES):
        return a == b
    eps = get_eps() if eps is None else eps
    return abs(complex(a) - complex(b)) <= eps * max(1.0, abs(a), abs(b))


def residual(a, b):
    """Absolute difference as a float (0.0 for equal exact values)."""
    return abs(complex(a) - complex(b))


# ---------------------------------------------------------------------------
# expression literals
# ---------------------------------------------------------------------------

def _exact_root(n, k):
    """Exact k-th root of a non-negative rational, or None."""
    n = Fraction(n)
    if n < 0:
        return None
    out = []
    for part in (n.numerator, n.denominator):
        r = round(part ** (1.0 / k))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** k == part:
                out.append(cand)
                break
        else:
            return None
    return Fraction(out[0], out[1])


def _root(x, k):
    if isinstance(x, (int, Fraction)):
        exact = _exact_root(x, k)
        if exact is not None:
            return normalize(exact)
        if x > 0:
            return complex(float(x) ** (1.0 / k))
    return complex(x) ** (1.0 / k)


def _power(base, exp, node):
    """``base ** exp`` for a rational exponent ``p/q`` (exact when possible)."""
    if not isinstance(exp, (int, Fraction)):
        raise ParseError("exponents must be rational", 1, node.col_offset + 1)
    exp = Fraction(exp)
    if exp.denominator == 1:
        if exp < 0 and is_zero(base, 0.0):
            raise ParseError("division by zero", 1, node.col_offset + 1)
        if isinstance(base, (int, Fraction, QI)):
            r = base ** abs(exp.numerator)
            return Fraction(1) / r if exp < 0 and not isinstance(r, QI) else \
                (1 / r if exp < 0 else r)
        return complex(base) ** int(exp)
    root = _root(base, exp.denominator)
    return _power(root, Fraction(exp.numerator), node)


_FUNCS = {"sqrt": lambda x: _root(x, 2), "root4": lambda x: _root(x, 4)}


def _eval_node(node, text):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body, text)
    if isinstance(node, ast.Constant):
        v = node.value
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ParseError(f"unsupported literal {v!r}", 1, node.col_offset + 1)
        if isinstance(v, int):
            return v
        # decimal literals are floating-point values; write p/q for exact ones
        return complex(v)
    if isinstance(node, ast.Name):
        if node.id in ("i", "I", "j"):
            return I
        raise ParseError(f"unknown name {node.id!r}", 1, node.col_offset + 1)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand, text)
        return normalize(-v) if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a = _eval_node(node.left, text)
        b = _eval_node(node.right, text)
        op = node.op
        if isinstance(op, ast.Add):
            r = a + b
        elif isinstance(op, ast.Sub):
            r = a - b
        elif isinstance(op, ast.Mult):
            r = a * b
        elif isinstance(op, ast.Div):
            if isinstance(a, int) and isinstance(b, int):
                if b == 0:
                    raise ParseError("division by zero", 1, node.col_offset + 1)
                r = Fraction(a, b)
            else:
                if is_zero(b, 0.0):
                    raise ParseError("division by zero", 1, node.col_offset + 1)
                r = a / b
        elif isinstance(op, ast.Pow):
            r = _power(a, b, node)
        else:
            raise ParseError("unsupported operator", 1, node.col_offset + 1)
        return normalize(r)
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
        fn = _FUNCS.get(node.func.id)
        if fn is None or len(node.args) != 1 or node.keywords:
            raise ParseError(f"unknown function {node.func.id!r}", 1,
                             node.col_offset + 1)
        return normalize(fn(_eval_node(node.args[0], text)))
    raise ParseError("unsupported expression", 1,
                     getattr(node, "col_offset", 0) + 1)


_IMPLICIT_I = re.compile(r"(\d)\s*i\b")


def parse_scalar(text):
    """Parse a scalar expression such as ``-1/2``, ``(1+i)/2``,
    ``sqrt(5)/2 - 1/2``, ``root4(8)/2`` or ``5^(3/4)``.

    Integers, ``p/q`` and ``i`` stay exact; decimal literals and irrational
    roots become complex floats.

    Raises :class:`ParseError` (column relative to ``text``) on bad input.
    """
    text = text.strip()
    if not text:
        raise ParseError("empty expression", 1, 1)
    # '^' is accepted as exponentiation (Python would read it as xor) and a
    # number directly followed by i is a product: 3i == 3*i
    src = text.replace("**", "^").replace("^", "**") if "^" in text else text
    src = _IMPLICIT_I.sub(r"\1*i", src)
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"malformed expression {text!r}", 1,
                         exc.offset or 1) from None
    return _eval_node(tree, text)


def _fmt_rat(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_float(x):
    if x == int(x) and abs(x) < 1e15:
        return f"{int(x)}.0"
    return repr(float(x))


def _join(re, im):
    if im.startswith("-"):
        return f"{re}{im}"
    return f"{re}+{im}"


def format_scalar(x):
    """Text that :func:`parse_scalar` reads back to an equal value."""
    x = normalize(x)
    if isinstance(x, (int, Fraction)):
        return _fmt_rat(x)
    if isinstance(x, QI):
        if x.im == 1:
            ims = "i"
        elif x.im == -1:
            ims = "-i"
        else:
            ims = f"{_fmt_rat(x.im)}*i"
        return ims if x.re == 0 else _join(_fmt_rat(x.re), ims)
    c = complex(x)
    if c.imag == 0:
        return _fmt_float(c.real)
    ims = f"{_fmt_float(c.imag)}*i"
    return ims if c.real == 0 else _join(_fmt_float(c.real), ims)
