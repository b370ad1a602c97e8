"""Reference computations written without the package's cochain engine.

- Heisenberg group law and the cocycles f1, f2 from their closed formulas.
- For an abelian group A, a 2-cocycle with values in Q/Z is a coboundary
  exactly when it is symmetric: H^2(A, Q/Z) is detected by the alternating
  form f(x, y) - f(y, x).
- Integral cohomology of cyclic groups: Z, 0, Z/n, 0, Z/n, ...
- Tate H^0 of C_p on a permutation lattice is (Z/p)^(number of fixed points).
"""

import itertools
from fractions import Fraction


def heis_mul(x, y, p):
    s1, t1, u1 = x
    s2, t2, u2 = y
    return ((s1 + s2) % p, (t1 + t2) % p, (u1 + u2 + t1 * s2) % p)


def heis_elements(p):
    return list(itertools.product(range(p), repeat=3))


def closure(gens, p):
    elems = {(0, 0, 0)}
    frontier = [(0, 0, 0)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = heis_mul(x, g, p)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return elems


def class_generators(p):
    """Generators of the 2p+5 class representatives."""
    out = {"1": [], "Z": [(0, 0, 1)], "G": [(1, 0, 0), (0, 1, 0)]}
    for i in range(p):
        out[f"H{i}"] = [(1, i, 0)]
        out[f"K{i}"] = [(1, i, 0), (0, 0, 1)]
    out[f"H{p}"] = [(0, 1, 0)]
    out[f"K{p}"] = [(0, 1, 0), (0, 0, 1)]
    return out


def f1(x, y, p):
    s1, t1, u1 = x
    s2, t2, u2 = y
    return Fraction(u1 * s2 + t1 * s2 * (s2 - 1) // 2, p) % 1


def f2(x, y, p):
    s1, t1, u1 = x
    s2, t2, u2 = y
    return Fraction(t1 * (t1 - 1) * s2 // 2 + (t1 * s2 + u1) * t2, p) % 1


def f_lm(l, m, p):
    return lambda x, y: (l * f1(x, y, p) + m * f2(x, y, p)) % 1


def symmetric_on(f, elems):
    return all((f(x, y) - f(y, x)) % 1 == 0 for x in elems for y in elems)


def restriction_kernel_abelian(p, elems):
    """{(l, m) : f1^l f2^m restricts to zero on the abelian subgroup ``elems``}."""
    return {(l, m) for l in range(p) for m in range(p) if symmetric_on(f_lm(l, m, p), elems)}


def qz_table(p):
    """Kernel sets for every class; G itself is handled by f1, f2 being independent."""
    out = {}
    for label, gens in class_generators(p).items():
        if label == "G":
            out[label] = {(0, 0)}
        else:
            out[label] = restriction_kernel_abelian(p, closure(gens, p))
    return out


def cocycle_defect(f, elems, mul):
    """Failure set of the 2-cocycle identity for trivial coefficients."""
    bad = []
    for x, y, z in itertools.product(elems, repeat=3):
        lhs = (f(y, z) - f(mul(x, y), z) + f(x, mul(y, z)) - f(x, y)) % 1
        if lhs:
            bad.append((x, y, z))
    return bad


def cyclic_integral_cohomology(n, degree):
    if degree == 0:
        return ((), 1)
    return ((n,), 0) if degree % 2 == 0 else ((), 0)


def tate_h0_permutation(p, perm):
    return (p,) * sum(1 for k, j in enumerate(perm) if k == j)
