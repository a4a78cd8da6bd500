"""Labeled skew-symmetric matrices, Pfaffians and subPfaffians."""

from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import LabelCollision, NotSkewSymmetric, OrderMismatch, SizeLimit
from .scalars import (EXACT_TYPES, close, format_scalar, get_eps, is_zero,
                      normalize)
from .tensor import Tensor

ENUMERATION_LIMIT = 10
SUBPFAFFIAN_CAP = 16


class SkewMatrix:
    """Skew-symmetric matrix whose rows/columns are labeled by edge ids."""

    __slots__ = ("labels", "entries")

    def __init__(self, labels, entries, check=True, eps=None):
        labels = tuple(int(x) for x in labels)
        if len(set(labels)) != len(labels):
            raise LabelCollision(f"repeated label in {labels}")
        n = len(labels)
        rows = tuple(tuple(normalize(x) for x in row) for row in entries)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise NotSkewSymmetric(f"expected a {n}x{n} matrix")
        if check:
            for i in range(n):
                if not is_zero(rows[i][i], eps):
                    raise NotSkewSymmetric(f"non-zero diagonal entry at {i + 1}")
                for j in range(i + 1, n):
                    if not close(rows[i][j], -rows[j][i], eps):
                        raise NotSkewSymmetric(f"entries ({i + 1},{j + 1}) and "
                                               f"({j + 1},{i + 1}) are not opposite")
        self.labels = labels
        self.entries = rows

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, labels):
        n = len(labels)
        return cls(labels, [[0] * n for _ in range(n)], check=False)

    @classmethod
    def from_upper(cls, labels, upper):
        """Build from ``{(i, j): value}`` with 1-based positions ``i < j``."""
        n = len(labels)
        rows = [[0] * n for _ in range(n)]
        for (i, j), v in upper.items():
            if not (1 <= i < j <= n):
                raise NotSkewSymmetric(f"bad upper-triangle position ({i},{j})")
            rows[i - 1][j - 1] = v
            rows[j - 1][i - 1] = -v
        return cls(labels, rows, check=False)

    @classmethod
    def from_numpy(cls, labels, arr):
        return cls(labels, [[complex(x) for x in row] for row in np.asarray(arr)])

    # -- access ----------------------------------------------------------
    @property
    def n(self):
        return len(self.labels)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def entry(self, a, b):
        """Entry by labels."""
        return self.entries[self.labels.index(a)][self.labels.index(b)]

    def is_exact(self):
        return all(isinstance(x, EXACT_TYPES) for row in self.entries for x in row)

    def to_numpy(self):
        return np.array([[complex(x) for x in row] for row in self.entries],
                        dtype=np.complex128).reshape(self.n, self.n)

    def restrict(self, labels):
        """Principal submatrix on ``labels`` (kept in this matrix's order)."""
        keep = [k for k, l in enumerate(self.labels) if l in set(labels)]
        return self._take(keep)

    def restrict_mask(self, mask):
        return self._take([k for k in range(self.n) if mask >> k & 1])

    def _take(self, idx):
        return SkewMatrix([self.labels[k] for k in idx],
                          [[self.entries[a][b] for b in idx] for a in idx],
                          check=False)

    def permuted(self, order):
        """Same matrix with rows/columns listed in label order ``order``."""
        order = list(order)
        if sorted(order) != sorted(self.labels):
            raise OrderMismatch(f"{order} is not a permutation of {list(self.labels)}")
        return self._take([self.labels.index(l) for l in order])

    def relabeled(self, labels):
        return SkewMatrix(labels, self.entries, check=False)

    def scale(self, s):
        return SkewMatrix(self.labels, [[x * s for x in row] for row in self.entries],
                          check=False)

    def __add__(self, other):
        if self.labels != other.labels:
            raise OrderMismatch("cannot add matrices with different label orders")
        return SkewMatrix(self.labels,
                          [[x + y for x, y in zip(r, s)]
                           for r, s in zip(self.entries, other.entries)],
                          check=False)

    def allclose(self, other, eps=None):
        return (self.labels == other.labels and
                all(close(x, y, eps) for r, s in zip(self.entries, other.entries)
                    for x, y in zip(r, s)))

    def __eq__(self, other):
        return (isinstance(other, SkewMatrix) and self.labels == other.labels
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.labels, self.entries))

    def format(self):
        return "[" + ",".join("[" + ",".join(format_scalar(x) for x in row) + "]"
                              for row in self.entries) + "]"

    def __repr__(self):
        return f"SkewMatrix(labels={list(self.labels)}, {self.format()})"


# ---------------------------------------------------------------------------
# Pfaffian
# ---------------------------------------------------------------------------

def _pf_enumeration(a, idx):
    """Sum over perfect matchings, pairing the first free index each time."""
    if not idx:
        return 1
    i = idx[0]
    total = 0
    sign = 1
    for k in range(1, len(idx)):
        j = idx[k]
        if not (isinstance(a[i][j], EXACT_TYPES) and not a[i][j]):
            rest = idx[1:k] + idx[k + 1:]
            total = total + sign * a[i][j] * _pf_enumeration(a, rest)
        sign = -sign
    return total


def _pf_laplace(a, n):
    """Laplace expansion along the first row, memoised on index subsets."""
    memo = {0: 1}

    def pf(mask):
        if mask in memo:
            return memo[mask]
        i = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        total = 0
        sign = 1
        r = rest
        while r:
            jb = r & -r
            j = jb.bit_length() - 1
            if not (isinstance(a[i][j], EXACT_TYPES) and not a[i][j]):
                total = total + sign * a[i][j] * pf(rest ^ jb)
            sign = -sign
            r ^= jb
        memo[mask] = total
        return total

    return pf((1 << n) - 1)


def _pf_elimination_exact(a, n):
    """Skew Gaussian elimination in exact arithmetic (first non-zero pivot)."""
    a = [[(Fraction(x) if isinstance(x, int) else x) for x in row] for row in a]
    pf = 1
    for k in range(0, n - 1, 2):
        kp = next((r for r in range(k + 1, n) if a[r][k]), None)
        if kp is None:
            return 0
        if kp != k + 1:
            a[k + 1], a[kp] = a[kp], a[k + 1]
            for row in a:
                row[k + 1], row[kp] = row[kp], row[k + 1]
            pf = -pf
        piv = a[k][k + 1]
        pf = pf * piv
        tau = [a[k][c] / piv for c in range(k + 2, n)]
        col = [a[r][k + 1] for r in range(k + 2, n)]
        for r in range(len(tau)):
            row = a[k + 2 + r]
            for c in range(len(tau)):
                row[k + 2 + c] = row[k + 2 + c] + tau[r] * col[c] - col[r] * tau[c]
    return pf


def pfaffian(m, method="elimination"):
    """Pfaffian of a :class:`SkewMatrix` (or nested list / array).

    ``method`` is ``"enumeration"`` (sum over perfect matchings, n <= 10),
    ``"laplace"`` (memoised first-row expansion) or ``"elimination"``
    (O(n^3) skew Gaussian elimination, the default).  Exact entries give an
    exact result; anything else is computed in complex floating point.
    """
    if not isinstance(m, SkewMatrix):
        arr = np.asarray(m) if not isinstance(m, (list, tuple)) else m
        m = SkewMatrix(range(1, len(arr) + 1), [list(r) for r in arr])
    n = m.n
    if method == "enumeration" and n > ENUMERATION_LIMIT:
        raise SizeLimit(f"enumeration is limited to n <= {ENUMERATION_LIMIT}")
    if method not in ("enumeration", "laplace", "elimination"):
        raise ValueError(f"unknown Pfaffian method {method!r}")
    if n % 2:
        return 0
    if n == 0:
        return 1
    a = m.entries
    if method == "enumeration":
        return normalize(_pf_enumeration(a, tuple(range(n))))
    if method == "laplace":
        return normalize(_pf_laplace(a, n))
    if m.is_exact():
        return normalize(_pf_elimination_exact(a, n))
    return normalize(_kernels.pfaffian_float(m.to_numpy()))


def _all_subpfaffians(m, cap):
    n = m.n
    if n > cap:
        raise SizeLimit(f"subPfaffian of a {n}x{n} matrix exceeds the cap {cap}")
    if not m.is_exact():
        vals = _kernels.subpfaffians_float(m.to_numpy())
        out = {mask: complex(vals[mask]) for mask in range(1, 1 << n)}
        out[0] = 1
        return out
    a = m.entries
    out = {0: 1}
    for mask in range(1, 1 << n):
        if bin(mask).count("1") % 2:
            continue
        i = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        total = 0
        sign = 1
        r = rest
        while r:
            jb = r & -r
            j = jb.bit_length() - 1
            x = a[i][j]
            if x:
                prev = out.get(rest ^ jb, 0)
                if prev:
                    total = total + sign * x * prev
            sign = -sign
            r ^= jb
        if total:
            out[mask] = total
    return out


def sub_pfaffian(m, cap=SUBPFAFFIAN_CAP):
    """``sPf(m) = sum_I Pf(m|_I) |I>`` as a gate on ``m``'s labels."""
    return Tensor.gate(m.labels, _all_subpfaffians(m, cap))


def sub_pfaffian_dual(m, cap=SUBPFAFFIAN_CAP):
    """``sPf*(m) = sum_J Pf(m|_{J^C}) <J|`` as a cogate on ``m``'s labels."""
    full = (1 << m.n) - 1
    return Tensor.cogate(m.labels,
                         {full ^ k: v for k, v in _all_subpfaffians(m, cap).items()})


def direct_sum_ordered(ms, sigma):
    """Block direct sum with rows/columns interleaved in the order ``sigma``."""
    owner = {}
    for b, m in enumerate(ms):
        for k, l in enumerate(m.labels):
            if l in owner:
                raise LabelCollision(f"label {l} occurs in two blocks")
            owner[l] = (b, k)
    pos = {}
    for k, l in enumerate(sigma):
        if l in pos:
            raise OrderMismatch(f"label {l} repeated in the order")
        pos[l] = k
    missing = [l for l in owner if l not in pos]
    if missing:
        raise OrderMismatch(f"labels {missing} missing from the order")
    labels = [l for l in sigma if l in owner]
    n = len(labels)
    rows = [[0] * n for _ in range(n)]
    for r, lr in enumerate(labels):
        br, kr = owner[lr]
        for c, lc in enumerate(labels):
            bc, kc = owner[lc]
            if br == bc:
                rows[r][c] = ms[br].entries[kr][kc]
    return SkewMatrix(labels, rows, check=False)


def sign_flip(m):
    """Checkerboard flip: position ``(i, j)`` (1-based) times ``(-1)^(i+j+1)``."""
    n = m.n
    return SkewMatrix(m.labels,
                      [[(m.entries[i][j] if (i + j) % 2 else -m.entries[i][j])
                        for j in range(n)] for i in range(n)],
                      check=False)
