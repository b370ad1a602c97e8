"""Finite groups used by the cohomology engines.

The central object is the Heisenberg group ``E_p(p^3)`` of order ``p^3`` and
exponent ``p``.  Elements are normal-form triples ``(s, t, u)`` standing for
``a^s b^t c^u`` with every exponent reduced mod ``p``.  Small abstract groups
(cyclic groups, the Klein four group, direct products) share the same
:class:`FiniteGroup` interface so that oracle computations run through the
very same cochain code.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import NotASubgroup, UnknownLabel

MAX_PRIME = 13

Element = tuple  # (s, t, u) for the Heisenberg group


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p) or p < 3:
        raise ValueError(f"p must be an odd prime, got {p!r}")
    if p > MAX_PRIME:
        raise ValueError(f"p={p} is outside the supported range 3..{MAX_PRIME}")
    return p


class FiniteGroup:
    """A finite group given by an element list and a multiplication function.

    Elements are indexed ``0..n-1`` with the identity at index 0.  The full
    multiplication table is materialised as an integer array, which is what
    the cochain engine consumes.
    """

    def __init__(
        self,
        elements: Sequence[Hashable],
        mul: Callable[[Hashable, Hashable], Hashable],
        identity: Hashable,
        name: str = "",
        generators: Sequence[Hashable] | None = None,
    ):
        elements = list(elements)
        if elements[0] != identity:
            elements.remove(identity)
            elements.insert(0, identity)
        self.elements = elements
        self.index = {g: i for i, g in enumerate(elements)}
        if len(self.index) != len(elements):
            raise ValueError("duplicate group elements")
        self.mul = mul
        self.identity = identity
        self.name = name
        n = len(elements)
        table = np.empty((n, n), dtype=np.int64)
        for i, g in enumerate(elements):
            for j, h in enumerate(elements):
                table[i, j] = self.index[mul(g, h)]
        self.table = table
        inv = np.empty(n, dtype=np.int64)
        for i in range(n):
            inv[i] = int(np.flatnonzero(table[i] == 0)[0])
        self.inverse = inv
        if generators is None:
            generators = elements[1:]
        self.generators = list(generators)

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={len(self)})"

    @property
    def order(self) -> int:
        return len(self.elements)

    def generator_indices(self) -> list[int]:
        return [self.index[x] for x in self.generators]

    def element_order(self, i: int) -> int:
        k, j = 1, i
        while j != 0:
            j = int(self.table[j, i])
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def cayley_tree(self) -> list[tuple[int, int, int]]:
        """Breadth-first spanning tree of the right Cayley graph.

        Returns ``(parent, generator_position, child)`` triples, one per
        non-identity element, with ``child = parent * generators[pos]``.
        """
        gens = self.generator_indices()
        seen = {0}
        frontier = [0]
        tree = []
        while frontier:
            nxt = []
            for h in frontier:
                for pos, x in enumerate(gens):
                    k = int(self.table[h, x])
                    if k not in seen:
                        seen.add(k)
                        tree.append((h, pos, k))
                        nxt.append(k)
            frontier = nxt
        if len(seen) != len(self):
            raise ValueError("generators do not generate the group")
        return tree


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup(range(n), lambda x, y: (x + y) % n, 0, name=f"C{n}", generators=[1] if n > 1 else [])


def product_group(*orders: int) -> FiniteGroup:
    """Direct product of cyclic groups, e.g. ``product_group(2, 2)`` is V4."""
    elements = list(itertools.product(*[range(n) for n in orders]))
    ident = tuple(0 for _ in orders)

    def mul(x, y):
        return tuple((a + b) % n for a, b, n in zip(x, y, orders))

    gens = []
    for k in range(len(orders)):
        if orders[k] > 1:
            gens.append(tuple(1 if i == k else 0 for i in range(len(orders))))
    name = "x".join(f"C{n}" for n in orders)
    return FiniteGroup(elements, mul, ident, name=name, generators=gens)


def klein_four() -> FiniteGroup:
    g = product_group(2, 2)
    g.name = "V4"
    return g


# ---------------------------------------------------------------------------
# Heisenberg group


def multiply(g1: Element, g2: Element, p: int) -> Element:
    s1, t1, u1 = g1
    s2, t2, u2 = g2
    return ((s1 + s2) % p, (t1 + t2) % p, (u1 + u2 + t1 * s2) % p)


def inverse(g: Element, p: int) -> Element:
    s, t, u = g
    # (s,t,u)(s',t',u') = 0 forces s'=-s, t'=-t, u' = -u - t*s'
    return ((-s) % p, (-t) % p, (-u + t * s) % p)


def power(g: Element, k: int, p: int) -> Element:
    out = (0, 0, 0)
    for _ in range(k % p):
        out = multiply(out, g, p)
    return out


def commutator(g1: Element, g2: Element, p: int) -> Element:
    """``g1^-1 g2^-1 g1 g2``."""
    x = multiply(inverse(g1, p), inverse(g2, p), p)
    return multiply(multiply(x, g1, p), g2, p)


def format_element(g: Element) -> str:
    return "a^{} b^{} c^{}".format(*g)


def parse_element(text: str, p: int) -> Element:
    parts = [int(x) % p for x in text.replace(" ", "").split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected s,t,u triple, got {text!r}")
    return tuple(parts)


@dataclass(frozen=True)
class Subgroup:
    label: str
    generators: tuple
    elements: tuple

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self._set

    @cached_property
    def _set(self) -> frozenset:
        return frozenset(self.elements)


@dataclass(frozen=True)
class CosetSpace:
    """Left cosets ``gH`` with lexicographically minimal representatives."""

    base: Subgroup
    representatives: tuple
    index: dict = field(compare=False, hash=False)

    def __len__(self) -> int:
        return len(self.representatives)

    def position(self, g) -> int:
        return self.index[g]


def class_labels(p: int) -> list[str]:
    return ["1", "Z"] + [f"H{i}" for i in range(p + 1)] + [f"K{i}" for i in range(p + 1)] + ["G"]


LABEL_ALIASES = {"Triv": "1", "Full": "G", "{1}": "1"}


def normalize_label(label: str, p: int) -> str:
    label = LABEL_ALIASES.get(label.strip(), label.strip())
    if label.startswith("H_") or label.startswith("K_"):
        label = label[0] + label[2:]
    if label not in class_labels(p):
        raise UnknownLabel(f"unknown subgroup label {label!r} for p={p}")
    return label


class HeisenbergGroup:
    """The extraspecial group ``E_p(p^3)`` of exponent ``p``."""

    def __init__(self, p: int):
        self.p = check_prime(p)
        self.a = (1, 0, 0)
        self.b = (0, 1, 0)
        self.c = (0, 0, 1)
        self.identity = (0, 0, 0)
        self.elements = sorted(itertools.product(range(p), repeat=3))
        self._self_check()

    def __repr__(self) -> str:
        return f"HeisenbergGroup(p={self.p})"

    @property
    def order(self) -> int:
        return self.p**3

    def _self_check(self) -> None:
        p = self.p
        e = self.identity
        if commutator(self.b, self.a, p) != self.c:
            raise AssertionError("multiplication law violates [b,a]=c")
        if commutator(self.c, self.a, p) != e or commutator(self.c, self.b, p) != e:
            raise AssertionError("multiplication law violates centrality of c")
        for x in (self.a, self.b, self.c):
            if power(x, p, p) != e and p > 1:
                raise AssertionError("generator order is not p")

    def mul(self, g1: Element, g2: Element) -> Element:
        return multiply(g1, g2, self.p)

    def inv(self, g: Element) -> Element:
        return inverse(g, self.p)

    def conj(self, g: Element, x: Element) -> Element:
        """``x^-1 g x``."""
        return self.mul(self.mul(self.inv(x), g), x)

    @cached_property
    def group(self) -> FiniteGroup:
        return FiniteGroup(self.elements, self.mul, self.identity, name=f"E{self.p}", generators=[self.a, self.b])

    # -- subgroups ---------------------------------------------------------

    def closure(self, gens: Iterable[Element]) -> tuple:
        gens = [tuple(x % self.p for x in g) for g in gens]
        elems = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for h in frontier:
                for x in gens:
                    k = self.mul(h, x)
                    if k not in elems:
                        elems.add(k)
                        nxt.append(k)
            frontier = nxt
        return tuple(sorted(elems))

    def subgroup(self, gens: Sequence[Element], label: str = "") -> Subgroup:
        gens = tuple(tuple(x % self.p for x in g) for g in gens)
        return Subgroup(label, gens, self.closure(gens))

    def subgroup_from_elements(self, elements: Iterable[Element], label: str = "") -> Subgroup:
        elems = set(tuple(x % self.p for x in g) for g in elements)
        elems.add(self.identity)
        for g in elems:
            for h in elems:
                if self.mul(g, h) not in elems:
                    raise NotASubgroup("element set is not closed under multiplication")
        return Subgroup(label, tuple(sorted(elems - {self.identity})), tuple(sorted(elems)))

    @cached_property
    def _classes(self) -> list[Subgroup]:
        p = self.p
        a, b, c = self.a, self.b, self.c
        ab = lambda i: self.mul(a, power(b, i, p))  # noqa: E731
        out = [self.subgroup([], "1"), self.subgroup([c], "Z")]
        out += [self.subgroup([ab(i)], f"H{i}") for i in range(p)]
        out.append(self.subgroup([b], f"H{p}"))
        out += [self.subgroup([ab(i), c], f"K{i}") for i in range(p)]
        out.append(self.subgroup([b, c], f"K{p}"))
        out.append(self.subgroup([a, b], "G"))
        return out

    def subgroup_classes(self) -> list[Subgroup]:
        """Canonical representatives of the ``2p+5`` conjugacy classes."""
        return list(self._classes)

    def by_label(self, label: str) -> Subgroup:
        label = normalize_label(label, self.p)
        for S in self._classes:
            if S.label == label:
                return S
        raise UnknownLabel(label)

    def conjugate(self, S: Subgroup, x: Element) -> tuple:
        return tuple(sorted(self.conj(g, x) for g in S.elements))

    def conjugacy_reduce(self, S: Subgroup) -> tuple[Subgroup, Element]:
        """Canonical class representative of ``S`` and ``x`` with ``x^-1 S x`` canonical."""
        elems = set(S.elements)
        for g in elems:
            for h in elems:
                if self.mul(g, h) not in elems:
                    raise NotASubgroup("not closed under multiplication")
        by_size = [C for C in self._classes if C.order == len(elems)]
        for x in self.elements:
            conj = self.conjugate(S, x)
            for C in by_size:
                if conj == C.elements:
                    return C, x
        raise NotASubgroup("subgroup does not match any canonical class")

    def is_normal(self, S: Subgroup) -> bool:
        return all(self.conjugate(S, x) == S.elements for x in (self.a, self.b))

    def conjugacy_class_size(self, S: Subgroup) -> int:
        return len({self.conjugate(S, x) for x in self.elements})

    def intersects_conjugates_trivially(self, A: Subgroup, B: Subgroup) -> bool:
        """True iff ``A ∩ x^-1 B x = {1}`` for every ``x``."""
        sa = set(A.elements)
        return all(len(sa.intersection(self.conjugate(B, x))) == 1 for x in self.elements)

    def subgroup_group(self, S: Subgroup) -> FiniteGroup:
        gens = [g for g in S.generators if g != self.identity]
        return FiniteGroup(S.elements, self.mul, self.identity, name=S.label or "S", generators=gens)

    # -- cosets --------------------------------------------------------------

    def cosets(self, H: Subgroup) -> CosetSpace:
        reps = []
        index = {}
        for g in self.elements:
            if g in index:
                continue
            pos = len(reps)
            reps.append(g)
            for h in H.elements:
                index[self.mul(g, h)] = pos
        return CosetSpace(H, tuple(reps), index)

    # -- automorphisms -------------------------------------------------------

    def apply_automorphism(self, which: str, g: Element) -> Element:
        """phi1: a->ab, b->b, c->c.  phi2: a->b, b->a, c->c^-1."""
        p = self.p
        s, t, u = g
        if which in ("phi1", "φ1", "1"):
            images = (self.mul(self.a, self.b), self.b, self.c)
        elif which in ("phi2", "φ2", "2"):
            images = (self.b, self.a, power(self.c, p - 1, p))
        else:
            raise ValueError(f"unknown automorphism {which!r}")
        x = power(images[0], s, p)
        x = self.mul(x, power(images[1], t, p))
        return self.mul(x, power(images[2], u, p))

    def map_subgroup(self, which: str, S: Subgroup) -> Subgroup:
        return self.subgroup([self.apply_automorphism(which, g) for g in S.generators])

    # -- facts ---------------------------------------------------------------

    def facts(self) -> dict:
        p = self.p
        center = tuple(sorted(g for g in self.elements if all(self.mul(g, x) == self.mul(x, g) for x in (self.a, self.b))))
        comms = {commutator(g, h, p) for g in self.elements for h in self.elements}
        derived = self.closure(comms)
        exponent = 1
        G = self.group
        for i in range(len(G)):
            o = G.element_order(i)
            exponent = exponent * o // _gcd(exponent, o)
        # G/[G,G] has order p^2 and exponent p
        ab_order = self.order // len(derived)
        ab_invariants = [p] * (round(np.log(ab_order) / np.log(p)))
        return {
            "p": p,
            "order": self.order,
            "center": [list(g) for g in center],
            "derived": [list(g) for g in derived],
            "abelianization": ab_invariants,
            "exponent": exponent,
        }


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def group_facts(p: int) -> dict:
    return HeisenbergGroup(p).facts()


def subgroup_classes(p: int) -> list[Subgroup]:
    return HeisenbergGroup(p).subgroup_classes()
