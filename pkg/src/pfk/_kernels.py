"""Floating-point hot loops.

Each kernel has a pure-numpy implementation and, when numba is available,
an ``@njit`` twin.  The numba versions are used unless the environment
variable ``PFK_NUMBA`` is set to ``0`` (handy for debugging and for the
benchmark in ``benchmarks/bench_kernels.py``).
"""

import os

import numpy as np

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda f: f


def use_numba():
    return HAVE_NUMBA and os.environ.get("PFK_NUMBA", "1") != "0"


# ---------------------------------------------------------------------------
# Pfaffian by skew Gaussian elimination (Parlett-Reid, max-modulus pivot)
# ---------------------------------------------------------------------------

def pfaffian_numpy(a):
    a = np.array(a, dtype=np.complex128)
    n = a.shape[0]
    if n % 2:
        return 0j
    pf = 1.0 + 0j
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(a[k + 1:, k])))
        if kp != k + 1:
            a[[k + 1, kp], :] = a[[kp, k + 1], :]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            pf = -pf
        if a[k + 1, k] == 0:
            return 0j
        pf *= a[k, k + 1]
        if k + 2 < n:
            tau = a[k, k + 2:] / a[k, k + 1]
            col = a[k + 2:, k + 1].copy()
            a[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return pf


@njit(cache=True)
def _pfaffian_nb(a):
    n = a.shape[0]
    if n % 2:
        return 0j
    pf = 1.0 + 0j
    for k in range(0, n - 1, 2):
        kp = k + 1
        best = abs(a[k + 1, k])
        for r in range(k + 2, n):
            v = abs(a[r, k])
            if v > best:
                best = v
                kp = r
        if kp != k + 1:
            for c in range(n):
                t = a[k + 1, c]
                a[k + 1, c] = a[kp, c]
                a[kp, c] = t
            for r in range(n):
                t = a[r, k + 1]
                a[r, k + 1] = a[r, kp]
                a[r, kp] = t
            pf = -pf
        if a[k + 1, k] == 0:
            return 0j
        piv = a[k, k + 1]
        pf *= piv
        # rank-2 update: outer(tau, col) - outer(col, tau)
        m = n - k - 2
        if m > 0:
            tau = np.empty(m, dtype=np.complex128)
            col = np.empty(m, dtype=np.complex128)
            for r in range(m):
                tau[r] = a[k, k + 2 + r] / piv
                col[r] = a[k + 2 + r, k + 1]
            for r in range(m):
                for c in range(m):
                    a[k + 2 + r, k + 2 + c] += tau[r] * col[c] - col[r] * tau[c]
    return pf


def pfaffian_float(a):
    """Pfaffian of a dense skew matrix (complex result)."""
    a = np.array(a, dtype=np.complex128)
    if use_numba():
        return complex(_pfaffian_nb(a))
    return complex(pfaffian_numpy(a))


# ---------------------------------------------------------------------------
# all principal sub-Pfaffians, indexed by bit mask
# ---------------------------------------------------------------------------

def subpfaffians_numpy(a):
    """``out[mask] = Pf(a|_mask)`` for every mask (0 for odd masks).

    Dynamic programme over masks, expanding along the lowest set bit:
    ``Pf(S) = sum_j (-1)^(k_j + 1) a[i, j] Pf(S - {i, j})`` where ``i`` is
    the lowest element and ``k_j`` the rank of ``j`` in ``S - {i}``.
    """
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    out = np.zeros(1 << n, dtype=np.complex128)
    out[0] = 1.0
    for mask in range(1, 1 << n):
        if bin(mask).count("1") % 2:
            continue
        i = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        s = 0j
        sign = 1.0
        r = rest
        while r:
            jb = r & -r
            j = jb.bit_length() - 1
            s += sign * a[i, j] * out[rest ^ jb]
            sign = -sign
            r ^= jb
        out[mask] = s
    return out


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def _lowbit_index(x):
    k = 0
    while not (x >> k) & 1:
        k += 1
    return k


@njit(cache=True)
def _subpfaffians_nb(a):
    n = a.shape[0]
    out = np.zeros(1 << n, dtype=np.complex128)
    out[0] = 1.0
    for mask in range(1, 1 << n):
        if _popcount(mask) % 2:
            continue
        i = _lowbit_index(mask)
        rest = mask & (mask - 1)
        s = 0j
        sign = 1.0
        r = rest
        while r:
            j = _lowbit_index(r)
            jb = 1 << j
            s += sign * a[i, j] * out[rest ^ jb]
            sign = -sign
            r ^= jb
        out[mask] = s
    return out


def subpfaffians_float(a):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    if use_numba():
        return _subpfaffians_nb(a)
    return subpfaffians_numpy(a)


# ---------------------------------------------------------------------------
# batched Pfaffian-ness test (gate census)
# ---------------------------------------------------------------------------

def census_scan_numpy(t, n, eps):
    """Column-wise test of ``t`` (shape ``(2^n, N)``) for the form
    ``alpha * sPf(Xi)``.  Returns a boolean array of length ``N``."""
    t = np.asarray(t, dtype=np.complex128)
    size, count = t.shape
    scale = t[0]
    ok = np.abs(scale) > eps
    safe = np.where(ok, scale, 1.0)
    x = t / safe
    pf = np.zeros_like(x)
    pf[0] = 1.0
    for mask in range(1, size):
        bits = bin(mask).count("1")
        if bits % 2:
            ok &= np.abs(x[mask]) <= eps
            continue
        if bits == 2:
            pf[mask] = x[mask]
            continue
        i = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        s = np.zeros(count, dtype=np.complex128)
        sign = 1.0
        r = rest
        while r:
            jb = r & -r
            s += sign * x[(1 << i) | jb] * pf[rest ^ jb]
            sign = -sign
            r ^= jb
        pf[mask] = s
        tol = eps * np.maximum(1.0, np.maximum(np.abs(s), np.abs(x[mask])))
        ok &= np.abs(s - x[mask]) <= tol
    return ok


@njit(cache=True)
def _census_scan_nb(t, n, eps):
    size, count = t.shape
    ok = np.zeros(count, dtype=np.bool_)
    pf = np.zeros(size, dtype=np.complex128)
    for col in range(count):
        scale = t[0, col]
        if abs(scale) <= eps:
            continue
        good = True
        pf[0] = 1.0
        for mask in range(1, size):
            xm = t[mask, col] / scale
            bits = _popcount(mask)
            if bits % 2:
                if abs(xm) > eps:
                    good = False
                    break
                continue
            if bits == 2:
                pf[mask] = xm
                continue
            i = _lowbit_index(mask)
            rest = mask & (mask - 1)
            s = 0j
            sign = 1.0
            r = rest
            while r:
                j = _lowbit_index(r)
                jb = 1 << j
                s += sign * (t[(1 << i) | jb, col] / scale) * pf[rest ^ jb]
                sign = -sign
                r ^= jb
            pf[mask] = s
            tol = eps * max(1.0, max(abs(s), abs(xm)))
            if abs(s - xm) > tol:
                good = False
                break
        ok[col] = good
    return ok


def census_scan(t, n, eps):
    t = np.ascontiguousarray(t, dtype=np.complex128)
    if use_numba():
        return _census_scan_nb(t, n, float(eps))
    return census_scan_numpy(t, n, eps)


# ---------------------------------------------------------------------------
# dense change of basis on batches of tables
# ---------------------------------------------------------------------------

def apply_wire_matrices(tables, mats):
    """Apply ``mats[p]`` to wire position ``p`` of every column of
    ``tables`` (shape ``(2^n, N)``, rows indexed by mask with position
    ``p`` at bit ``p``)."""
    n = len(mats)
    count = tables.shape[1]
    # mask bit p is axis (n - 1 - p) in C-order reshape
    x = np.asarray(tables, dtype=np.complex128).reshape((2,) * n + (count,))
    for p, m in enumerate(mats):
        axis = n - 1 - p
        x = np.moveaxis(np.tensordot(np.asarray(m, dtype=np.complex128), x,
                                     axes=([1], [axis])), 0, axis)
    return x.reshape(1 << n, count)


def boolean_tables(n):
    """All ``2^(2^n) - 1`` non-zero 0/1 tables as columns (shape ``(2^n, N)``)."""
    size = 1 << n
    codes = np.arange(1, 1 << size, dtype=np.int64)
    bits = (codes[None, :] >> np.arange(size, dtype=np.int64)[:, None]) & 1
    return bits.astype(np.complex128), codes
