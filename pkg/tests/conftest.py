import random
import re
from pathlib import Path

import numpy as np
import pytest
import sympy

ROOT = Path(__file__).resolve().parents[1]
NETWORKS = ROOT / "networks"

# one line per acceptance criterion, printed again at the end of the run
ACCEPTANCE = []


def random_skew(rng, n, scale=1.0):
    """Dense complex skew matrix with entries of size about ``scale``."""
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (a - a.T)


def random_basis(rng):
    """Invertible integer 2x2 basis (``rng`` is a numpy Generator)."""
    from pfk.tensor import BasisMatrix
    while True:
        m = rng.integers(-3, 4, size=(2, 2))
        if round(np.linalg.det(m)) != 0:
            return BasisMatrix.from_rows(m.tolist())


@pytest.fixture
def nprng():
    return np.random.default_rng(20240611)


@pytest.fixture
def pyrng():
    return random.Random(20240611)


@pytest.fixture
def networks_dir():
    return NETWORKS


def singular_is_well_formed(text, system):
    """Strict shape check of a Singular script, then re-read every
    generator with sympy and compare with the system."""
    assert text.isascii()
    lines = text.splitlines()
    m = re.fullmatch(r"ring r = 0, \(([A-Za-z0-9_, ]+)\), dp;", lines[0])
    assert m, lines[0]
    names = [v.strip() for v in m.group(1).split(",")]
    assert all(re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", v) for v in names)
    assert lines[-1] == "std(i);"
    body = "\n".join(lines[1:-1])
    if not len(system):
        assert body == "ideal i = 0;"
        return
    assert body.startswith("ideal i =\n") and body.endswith(";")
    items = [ln.strip().rstrip(",;") for ln in lines[2:-1]]
    assert len(items) == len(system)
    token = re.compile(r"[A-Za-z][A-Za-z0-9_]*|\d+|[-+*/^]")
    syms = {v: sympy.Symbol(v) for v in names}
    for item, poly in zip(items, system.generators):
        assert "".join(token.findall(item)) == item.replace(" ", "")
        for word in re.findall(r"[A-Za-z][A-Za-z0-9_]*", item):
            assert word in syms, word
        got = sympy.sympify(item.replace("^", "**"), locals=syms)
        want = sympy.sympify(str(poly).replace("^", "**"), locals=syms)
        assert sympy.expand(got - want) == 0


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
