"""Fully enumerated permutation groups.

Permutations are tuples of 0-based images; ``compose(a, b)`` applies ``b``
first, so ``compose(a, b)[x] == a[b[x]]``. Every group stores its complete
element list in lexicographic order, which makes equal groups compare equal
and keeps every derived listing reproducible.
"""

from __future__ import annotations

import json
import os
from collections import deque
from dataclasses import dataclass, field
from math import factorial
from typing import Iterable, Iterator, Sequence

Perm = tuple[int, ...]

DEFAULT_CAP = 200_000
CAP_ENV = "NORMKNOT_GROUP_CAP"


class GroupError(ValueError):
    """Raised for malformed permutations, subgroup violations and cap overflow."""


def group_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return DEFAULT_CAP
    try:
        value = int(raw)
    except ValueError as exc:
        raise GroupError(f"{CAP_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise GroupError(f"{CAP_ENV} must be positive")
    return value


# ---------------------------------------------------------------- permutations


def identity(degree: int) -> Perm:
    return tuple(range(degree))


def compose(a: Perm, b: Perm) -> Perm:
    return tuple([a[i] for i in b])


def inverse(a: Perm) -> Perm:
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return tuple(inv)


def conjugate(g: Perm, x: Perm) -> Perm:
    """Return g x g^-1."""
    return compose(compose(g, x), inverse(g))


def commutator_elt(a: Perm, b: Perm) -> Perm:
    """Return a b a^-1 b^-1."""
    return compose(compose(a, b), compose(inverse(a), inverse(b)))


def power(a: Perm, k: int) -> Perm:
    if k < 0:
        a, k = inverse(a), -k
    result = identity(len(a))
    base = a
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


def perm_order(a: Perm) -> int:
    """Order as the lcm of cycle lengths."""
    from math import lcm

    seen = [False] * len(a)
    result = 1
    for start in range(len(a)):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = a[x]
            length += 1
        result = lcm(result, length)
    return result


def check_perm(images: Sequence[int], degree: int) -> Perm:
    perm = tuple(int(x) for x in images)
    if len(perm) != degree:
        raise GroupError(f"permutation has length {len(perm)}, expected degree {degree}")
    if sorted(perm) != list(range(degree)):
        raise GroupError(f"not a permutation of 0..{degree - 1}: {list(perm)}")
    return perm


def from_cycles(cycles: Iterable[Sequence[int]], degree: int) -> Perm:
    """Build a permutation from 0-based cycles."""
    images = list(range(degree))
    for cyc in cycles:
        for i, x in enumerate(cyc):
            images[x] = cyc[(i + 1) % len(cyc)]
    return check_perm(images, degree)


# ---------------------------------------------------------------------- groups


@dataclass(frozen=True, eq=False)
class GroupTable:
    degree: int
    generators: tuple[Perm, ...]
    elements: tuple[Perm, ...]
    _members: frozenset = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return identity(self.degree)

    def __contains__(self, x: object) -> bool:
        return x in self._members

    def __iter__(self) -> Iterator[Perm]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupTable):
            return NotImplemented
        return self.degree == other.degree and self._members == other._members

    def __hash__(self) -> int:
        return hash((self.degree, self._members))

    def __repr__(self) -> str:
        return f"GroupTable(degree={self.degree}, order={self.order})"

    def is_subgroup_of(self, other: "GroupTable") -> bool:
        return self.degree == other.degree and self._members <= other._members

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(compose(a, b) == compose(b, a) for a in gens for b in gens)

    def is_cyclic(self) -> bool:
        n = self.order
        return any(perm_order(x) == n for x in self.elements)

    def to_json(self, one_based: bool = True) -> dict:
        shift = 1 if one_based else 0
        return {
            "degree": self.degree,
            "generators": [[x + shift for x in g] for g in self.generators],
            "order": self.order,
        }


def _closure(gens: Sequence[Perm], degree: int, cap: int) -> list[Perm]:
    ident = identity(degree)
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose(g, x)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise GroupError(f"group order exceeds cap {cap}")
                queue.append(y)
    return sorted(seen)


def generate(gens: Iterable[Sequence[int]], degree: int) -> GroupTable:
    """Enumerate the group generated by ``gens`` on ``degree`` points."""
    checked = tuple(check_perm(g, degree) for g in gens)
    ident = identity(degree)
    kept = tuple(g for g in checked if g != ident)
    elements = _closure(kept, degree, group_cap())
    return GroupTable(degree, kept, tuple(elements), frozenset(elements))


def from_elements(elements: Iterable[Perm], degree: int) -> GroupTable:
    """Wrap a set already known to be a subgroup, choosing a small generating set.

    Generators are picked greedily in canonical order, so the result depends
    only on the element set.
    """
    elems = sorted(set(elements))
    members = frozenset(elems)
    gens: list[Perm] = []
    current = {identity(degree)}
    for x in elems:
        if x in current:
            continue
        gens.append(x)
        try:
            current = set(_closure(gens, degree, len(members)))
        except GroupError:
            current = set()
            break
    if current != members:
        raise GroupError("element set is not closed under composition")
    return GroupTable(degree, tuple(gens), tuple(elems), members)


def trivial_group(degree: int) -> GroupTable:
    return generate([], degree)


def subgroup(G: GroupTable, gens: Iterable[Perm]) -> GroupTable:
    """Subgroup of G generated by ``gens`` (each must lie in G)."""
    gens = [tuple(g) for g in gens]
    for g in gens:
        if g not in G:
            raise GroupError("generator is not an element of the parent group")
    return generate(gens, G.degree)


def require_subgroup(H: GroupTable, G: GroupTable, what: str = "H") -> None:
    if not H.is_subgroup_of(G):
        raise GroupError(f"{what} is not a subgroup of the given group")


def group_from_json(obj: dict) -> GroupTable:
    """Parse ``{"degree": n, "generators": [[1-based images], ...]}``."""
    try:
        degree = int(obj["degree"])
        gens = [[int(x) - 1 for x in g] for g in obj["generators"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise GroupError(f"malformed group JSON: {exc}") from exc
    return generate(gens, degree)


def group_to_json_str(G: GroupTable) -> str:
    return json.dumps(G.to_json(), sort_keys=True)


# ------------------------------------------------------------------ primitives


def orbit_and_stabilizer(G: GroupTable, point: int) -> tuple[tuple[int, ...], GroupTable]:
    if not 0 <= point < G.degree:
        raise GroupError(f"point {point} outside 0..{G.degree - 1}")
    orbit = sorted({g[point] for g in G.elements})
    stab = from_elements((g for g in G.elements if g[point] == point), G.degree)
    return tuple(orbit), stab


def is_transitive(G: GroupTable) -> bool:
    if G.degree == 0:
        return True
    return len({g[0] for g in G.elements}) == G.degree


def normal_core(G: GroupTable, H: GroupTable) -> GroupTable:
    require_subgroup(H, G)
    # largest subset of H stable under conjugation by the generators
    core = set(H.elements)
    changed = True
    while changed:
        changed = False
        for g in G.generators:
            ginv = inverse(g)
            keep = {x for x in core if compose(compose(ginv, x), g) in core}
            if keep != core:
                core = keep
                changed = True
    return from_elements(core, G.degree)


def is_normal(G: GroupTable, N: GroupTable) -> bool:
    require_subgroup(N, G, "N")
    return all(conjugate(g, x) in N for g in G.generators for x in N.generators)


def normalizer(G: GroupTable, H: GroupTable) -> GroupTable:
    require_subgroup(H, G)
    elems = [
        g for g in G.elements
        if all(conjugate(g, h) in H for h in H.generators)
    ]
    return from_elements(elems, G.degree)


def centralizer(G: GroupTable, H: GroupTable) -> GroupTable:
    require_subgroup(H, G)
    elems = [
        g for g in G.elements
        if all(compose(g, h) == compose(h, g) for h in H.generators)
    ]
    return from_elements(elems, G.degree)


def normal_closure(G: GroupTable, gens: Sequence[Perm], over: Sequence[Perm]) -> GroupTable:
    """Smallest subgroup containing ``gens`` and normalized by ``over``."""
    N = generate(gens, G.degree)
    queue = list(N.generators)
    while queue:
        x = queue.pop()
        for y in over:
            c = conjugate(y, x)
            if c not in N:
                N = generate(list(N.generators) + [c], G.degree)
                queue.append(c)
    return N


def commutator(G: GroupTable, A: GroupTable, B: GroupTable) -> GroupTable:
    """[A, B] = <a b a^-1 b^-1>.

    Computed as the normal closure in <A, B> of commutators of generators,
    which is the same subgroup.
    """
    require_subgroup(A, G, "A")
    require_subgroup(B, G, "B")
    comms = {commutator_elt(a, b) for a in A.generators for b in B.generators}
    return normal_closure(G, sorted(comms), list(A.generators) + list(B.generators))


def product_subgroup(G: GroupTable, A: GroupTable, B: GroupTable) -> GroupTable:
    """The subgroup generated by A and B."""
    return generate(list(A.generators) + list(B.generators), G.degree)


def intersection(A: GroupTable, B: GroupTable) -> GroupTable:
    return from_elements((x for x in A.elements if x in B), A.degree)


def conjugate_subgroup(g: Perm, H: GroupTable) -> GroupTable:
    """g H g^-1, generated by the conjugated generators of H."""
    gi = inverse(g)
    gens = tuple(compose(compose(g, h), gi) for h in H.generators)
    if all(x in H for x in gens):
        return H
    elems = sorted(compose(compose(g, h), gi) for h in H.elements)
    return GroupTable(H.degree, gens, tuple(elems), frozenset(elems))


def conjugacy_class_of_subgroup(G: GroupTable, H: GroupTable) -> list[GroupTable]:
    """All G-conjugates of H, found by walking along the generators of G."""
    seen = {H: None}
    queue = deque([H])
    while queue:
        K = queue.popleft()
        for g in G.generators:
            L = conjugate_subgroup(g, K)
            if L not in seen:
                seen[L] = None
                queue.append(L)
    return list(seen)


def _p_adic_valuation(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def sylow(G: GroupTable, p: int) -> GroupTable:
    """A Sylow p-subgroup, grown one normalizing p-element at a time."""
    target = p ** _p_adic_valuation(G.order, p)
    P = trivial_group(G.degree)
    while P.order < target:
        N = normalizer(G, P)
        for x in N.elements:
            if x in P:
                continue
            k = perm_order(x)
            if p ** _p_adic_valuation(k, p) == k:
                P = generate(list(P.generators) + [x], G.degree)
                break
        else:  # pragma: no cover - Sylow theory guarantees progress
            raise AssertionError("no p-element normalizing a non-Sylow p-subgroup")
    return P


@dataclass(frozen=True)
class CosetAction:
    parent: GroupTable
    subgroup: GroupTable
    representatives: tuple[Perm, ...]
    image: GroupTable
    kernel: GroupTable
    _index: dict = field(repr=False)

    @property
    def degree(self) -> int:
        return len(self.representatives)

    def coset_of(self, g: Perm) -> int:
        return self._index[g]

    def act(self, g: Perm) -> Perm:
        """Permutation of cosets induced by left multiplication with g."""
        return tuple(self._index[compose(g, r)] for r in self.representatives)

    def image_of(self, K: GroupTable) -> GroupTable:
        return generate([self.act(k) for k in K.generators], self.degree)


def left_cosets(G: GroupTable, H: GroupTable) -> tuple[tuple[Perm, ...], dict]:
    """Canonical left-coset representatives (minimal elements) and element → coset index."""
    index: dict = {}
    reps: list[Perm] = []
    for g in G.elements:
        if g in index:
            continue
        k = len(reps)
        reps.append(g)
        for h in H.elements:
            index[compose(g, h)] = k
    return tuple(reps), index


def coset_action(G: GroupTable, H: GroupTable) -> CosetAction:
    require_subgroup(H, G)
    reps, index = left_cosets(G, H)
    n = len(reps)

    def act(g: Perm) -> Perm:
        return tuple(index[compose(g, r)] for r in reps)

    gen_images = [act(g) for g in G.generators]
    image = generate(gen_images, n)
    # act is a homomorphism, so walk the Cayley graph instead of acting on every coset
    ident = identity(n)
    images = {G.identity: ident}
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        for g, a in zip(G.generators, gen_images):
            y = compose(g, x)
            if y not in images:
                images[y] = compose(a, images[x])
                queue.append(y)
    kernel = from_elements((g for g, a in images.items() if a == ident), G.degree)
    return CosetAction(G, H, reps, image, kernel, index)


def double_cosets(D: GroupTable, G: GroupTable, H: GroupTable) -> list[Perm]:
    """Minimal representatives of the classes D g H, in canonical order."""
    require_subgroup(D, G, "D")
    require_subgroup(H, G)
    reps, index = left_cosets(G, H)
    # D-orbits on G/H; each coset's representative is its least element
    seen = [False] * len(reps)
    out: list[Perm] = []
    for k, r in enumerate(reps):
        if seen[k]:
            continue
        seen[k] = True
        stack = [r]
        while stack:
            x = stack.pop()
            for d in D.generators:
                j = index[compose(d, x)]
                if not seen[j]:
                    seen[j] = True
                    stack.append(reps[j])
        out.append(r)
    return out


def double_coset_sizes(D: GroupTable, G: GroupTable, H: GroupTable) -> list[int]:
    sizes = []
    for g in double_cosets(D, G, H):
        sizes.append(len({compose(compose(d, g), h) for d in D.elements for h in H.elements}))
    return sizes


def _prime_factors(n: int) -> list[int]:
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def abelian_invariants(A: GroupTable) -> list[int]:
    """Invariant factors d1 | d2 | ... of an abelian group.

    For each prime q the number of cyclic q-factors of order at least q^i is
    log_q |A[q^i]| - log_q |A[q^(i-1)]|, read off element orders.
    """
    if not A.is_abelian():
        raise GroupError("abelian_invariants needs an abelian group")
    from .finabelian import normalize

    orders = [perm_order(x) for x in A.elements]
    primary: list[int] = []
    for q in _prime_factors(A.order):
        e = _p_adic_valuation(A.order, q)
        ranks = []
        for i in range(e + 1):
            count = sum(1 for k in orders if (q ** i) % k == 0)
            ranks.append(_p_adic_valuation(count, q))
        at_least = [ranks[i] - ranks[i - 1] for i in range(1, e + 1)]
        for i in range(e, 0, -1):
            exact = at_least[i - 1] - (at_least[i] if i < e else 0)
            primary.extend([q ** i] * exact)
    return normalize(primary)


def element_order_counts(G: GroupTable) -> dict[int, int]:
    counts: dict[int, int] = {}
    for x in G.elements:
        k = perm_order(x)
        counts[k] = counts.get(k, 0) + 1
    return dict(sorted(counts.items()))


def cyclic_subgroups(G: GroupTable) -> list[GroupTable]:
    """All cyclic subgroups, each listed once, in order of their minimal generator."""
    seen: set = set()
    out = []
    for x in G.elements:
        C = generate([x], G.degree)
        if C in seen:
            continue
        seen.add(C)
        out.append(C)
    return out


def order_divides_factorial(G: GroupTable) -> bool:
    return factorial(G.degree) % G.order == 0


# ------------------------------------------------------------- standard groups


def cyclic_group(n: int) -> GroupTable:
    """C_n acting regularly on n points, generated by x -> x+1."""
    if n < 1:
        raise GroupError("n must be positive")
    return generate([tuple((i + 1) % n for i in range(n))], n)


def dihedral_group(n: int) -> GroupTable:
    """D_n on the n-gon, generators (rotation, reflection x -> -x); point 0 has stabilizer <reflection>."""
    if n < 3:
        raise GroupError("dihedral groups need n >= 3")
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return generate([rot, ref], n)


def degree_four_groups() -> dict[str, GroupTable]:
    """The five transitive groups of degree 4."""
    return {
        "C4": generate([(1, 2, 3, 0)], 4),
        "V4": generate([(1, 0, 3, 2), (2, 3, 0, 1)], 4),
        "D4": generate([(1, 2, 3, 0), (0, 3, 2, 1)], 4),
        "A4": generate([(1, 2, 0, 3), (1, 0, 3, 2)], 4),
        "S4": generate([(1, 2, 3, 0), (1, 0, 2, 3)], 4),
    }


def affine_group(q: int, k: int) -> GroupTable:
    """C_q x| C_k inside AGL(1, q) for k | q-1, generators (x -> x+1, x -> r x) with r of order k."""
    if (q - 1) % k:
        raise GroupError("k must divide q-1")
    r = next(a for a in range(1, q) if _mult_order(a, q) == k)
    return generate([tuple((i + 1) % q for i in range(q)), tuple((r * i) % q for i in range(q))], q)


def _mult_order(a: int, q: int) -> int:
    k, x = 1, a % q
    while x != 1:
        x = (x * a) % q
        k += 1
    return k
