from functools import lru_cache

import pytest

from ffgauss.poly import Poly, enumerate_monic, gcd, is_irreducible
from ffgauss.vadic import make_context


def P(q: int, text: str) -> Poly:
    return Poly.parse(q, text)


def grid_contexts(prec: int = 8):
    """q in {2, 3}, deg v <= 2, deg n <= 2, residue field of size at most 2^12."""
    out = []
    for q in (2, 3):
        for dv in (1, 2):
            for v in enumerate_monic(q, dv):
                if not is_irreducible(v):
                    continue
                for dn in (1, 2):
                    for n in enumerate_monic(q, dn):
                        if gcd(v, n).deg:
                            continue
                        try:
                            out.append(make_context(q, v, n, prec))
                        except ValueError:
                            pass
    return out


@lru_cache(maxsize=None)
def context(q: int, v: str, n: str, prec: int = 8):
    return make_context(q, P(q, v), P(q, n), prec)


@pytest.fixture(scope="session")
def grid8():
    return grid_contexts(8)


# acceptance lines, printed once at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
