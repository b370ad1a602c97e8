"""Self-test suite behind ``norm1 selftest``.

Each check compares a computation against frozen expected values.  The quick
level stays well under a minute; the full level adds the p=5,7 closed-form
comparisons, the direct engine and the structural suite.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from .adjudicator import scenario_sweep
from .cochains import cohomology, h2_qz, heisenberg, tate_h0_cyclic
from .group import cyclic_group, klein_four, product_group
from .lattice import permutation_lattice_from_action
from .pipeline import Kernel, qz_closed_form, qz_kernel_table, structural_suite, lattice_kernel_table

# rows of the p=3 tables as (kind, l, m)
EXPECTED_P3 = {
    "QZ": {"1": "full", "G": "zero", "Z": "full", "H0": "full", "H1": "full", "H2": "full", "H3": "full",
           "K0": (0, 1), "K1": (1, 2), "K2": (1, 1), "K3": (1, 0)},
    "1": {"1": "full", "G": "zero", "Z": "full", "H0": "full", "H1": "full", "H2": "full", "H3": "full",
          "K0": (0, 1), "K1": (1, 2), "K2": (1, 1), "K3": (1, 0)},
    "a": {"1": "full", "G": "zero", "Z": "full", "H0": (0, 1), "H1": "full", "H2": "full", "H3": "full",
          "K0": "zero", "K1": (1, 2), "K2": (1, 1), "K3": (1, 0)},
}


def expected_rows(which: str, p: int = 3) -> dict:
    out = {}
    for label, v in EXPECTED_P3[which].items():
        out[label] = Kernel(p, v) if isinstance(v, str) else Kernel.line(p, *v)
    return out


@dataclass
class Check:
    name: str
    passed: bool
    detail: str
    seconds: float

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "seconds": round(self.seconds, 3)}


def _run(name: str, fn) -> Check:
    t = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return Check(name, bool(ok), detail, time.perf_counter() - t)


def _table_check(rows: dict, expected: dict):
    bad = [k for k in expected if rows[k] != expected[k]]
    return not bad, "all rows match" if not bad else f"mismatch on {bad}"


def _schur():
    got = {
        "E3": str(h2_qz(heisenberg(3).group).structure),
        "C5": str(h2_qz(cyclic_group(5)).structure),
        "C3xC3": str(h2_qz(product_group(3, 3)).structure),
    }
    want = {"E3": "Z/3 + Z/3", "C5": "0", "C3xC3": "Z/3"}
    return got == want, str(got)


def _oracles():
    got = [str(cohomology(cyclic_group(n), None, 3).structure) for n in range(2, 7)]
    v4 = str(cohomology(klein_four(), None, 3).structure)
    ok = got == ["0"] * 5 and v4 == "Z/2"
    rng = random.Random(7)
    for _ in range(20):
        p = rng.choice([2, 3, 5])
        n = rng.randint(1, 7)
        perm = list(range(n))
        rng.shuffle(perm)
        C = cyclic_group(p)
        # the generator acts by a permutation of order dividing p
        cyc = _power_perm(perm, p)
        M = permutation_lattice_from_action(C, lambda g, cyc=cyc: [_apply(cyc, g, k) for k in range(n)], n)
        fixed = sum(1 for k in range(n) if cyc[k] == k)
        if tate_h0_cyclic(C, M).factors != (p,) * fixed:
            ok = False
    return ok, f"H^3(C_n,Z)={got}, H^3(V4,Z)={v4}"


def _power_perm(perm, p):
    # keep only the p-cycles so the generator acts with order p
    n = len(perm)
    out = list(range(n))
    seen = set()
    for s in range(n):
        if s in seen:
            continue
        cyc, k = [], s
        while k not in seen:
            seen.add(k)
            cyc.append(k)
            k = perm[k]
        if len(cyc) == p:
            for i, x in enumerate(cyc):
                out[x] = cyc[(i + 1) % p]
    return out


def _apply(cyc, g, k):
    for _ in range(g):
        k = cyc[k]
    return k


def _sweeps():
    fails = []
    for stab in ("1", "a"):
        s = scenario_sweep(3, stab)
        fails += s.failures
    return not fails, f"{len(fails)} failing scenarios"


def quick_checks() -> list:
    return [
        ("qz-table-p3", lambda: _table_check(qz_kernel_table(3).rows, expected_rows("QZ"))),
        ("schur-multipliers", _schur),
        ("oracles", _oracles),
        ("jg-table-p3-H1-reduction", lambda: _table_check(lattice_kernel_table(3, "1", "reduction").rows, expected_rows("1"))),
        ("jg-table-p3-Ha-reduction", lambda: _table_check(lattice_kernel_table(3, "a", "reduction").rows, expected_rows("a"))),
        ("sweep-p3", _sweeps),
    ]


def full_checks() -> list:
    def closed(p):
        return lambda: _table_check(qz_kernel_table(p).rows, qz_closed_form(p))

    def structural():
        rep = structural_suite(3)
        bad = [a.name for a in rep.assertions if not a.passed]
        return not bad, f"{len(rep.assertions)} assertions, failing: {bad}"

    return [
        ("qz-closed-form-p5", closed(5)),
        ("qz-closed-form-p7", closed(7)),
        ("jg-table-p3-H1-both", lambda: _table_check(lattice_kernel_table(3, "1", "both").rows, expected_rows("1"))),
        ("jg-table-p3-Ha-both", lambda: _table_check(lattice_kernel_table(3, "a", "both").rows, expected_rows("a"))),
        ("structural-p3", structural),
    ]


def run_selftest(level: str = "quick") -> list[Check]:
    if level not in ("quick", "full"):
        raise ValueError("level must be quick or full")
    checks = quick_checks() + (full_checks() if level == "full" else [])
    return [_run(name, fn) for name, fn in checks]
