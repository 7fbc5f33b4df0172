"""Two-dimensional representations over F_p and the extremality test.

Matrices are stored row-major as (a, b, c, d) meaning [[a, b], [c, d]] and act
on column vectors. No extension field is ever built: traces that would live
in F_{p^2} a priori are found by scanning companion matrices over F_p.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

import numpy as np

from .permgroup import (
    GroupError,
    GroupTable,
    Perm,
    coset_action,
    cyclic_group,
    dihedral_group,
    generate,
    identity,
    is_normal,
    orbit_and_stabilizer,
    sylow,
)


class RepError(ValueError):
    pass


# ------------------------------------------------------------------ F_p basics


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    q = 2
    while q * q <= n:
        if n % q == 0:
            return False
        q += 1
    return True


def mult_order(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ValueError("0 has no multiplicative order")
    k, x = 1, a
    while x != 1:
        x = (x * a) % p
        k += 1
    return k


@lru_cache(maxsize=None)
def least_primitive_root(p: int) -> int:
    if p == 2:
        return 1
    return next(g for g in range(2, p) if mult_order(g, p) == p - 1)


def root_of_unity(p: int, n: int) -> int:
    """zeta_n = g^((p-1)/n) for the least primitive root g."""
    if (p - 1) % n:
        raise RepError(f"{n} does not divide {p}-1")
    return pow(least_primitive_root(p), (p - 1) // n, p)


def discrete_log(x: int, base: int, p: int) -> int:
    x %= p
    y = 1
    for k in range(p):
        if y == x:
            return k
        y = (y * base) % p
    raise ValueError(f"{x} is not a power of {base} mod {p}")


# ---------------------------------------------------------------------- Mat2


@dataclass(frozen=True, order=True)
class Mat2:
    p: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        p = self.p
        object.__setattr__(self, "a", self.a % p)
        object.__setattr__(self, "b", self.b % p)
        object.__setattr__(self, "c", self.c % p)
        object.__setattr__(self, "d", self.d % p)
        if self.det == 0:
            raise RepError(f"singular matrix {self.entries} over F_{p}")

    @classmethod
    def identity(cls, p: int) -> "Mat2":
        return cls(p, 1, 0, 0, 1)

    @classmethod
    def diag(cls, p: int, x: int, y: int) -> "Mat2":
        return cls(p, x, 0, 0, y)

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.p

    @property
    def trace(self) -> int:
        return (self.a + self.d) % self.p

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.p, *mat_mul(self.entries, other.entries, self.p))

    def inverse(self) -> "Mat2":
        return Mat2(self.p, *mat_inv(self.entries, self.p))

    def __pow__(self, k: int) -> "Mat2":
        return Mat2(self.p, *mat_pow(self.entries, k, self.p))

    def apply(self, v: tuple[int, int]) -> tuple[int, int]:
        return mat_apply(self.entries, v, self.p)

    @property
    def order(self) -> int:
        return mat_order(self.entries, self.p)

    def to_list(self) -> list[int]:
        return list(self.entries)


# raw tuple arithmetic, used in hot loops

Raw = tuple[int, int, int, int]


def mat_mul(x: Raw, y: Raw, p: int) -> Raw:
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)


def mat_inv(x: Raw, p: int) -> Raw:
    a, b, c, d = x
    det = (a * d - b * c) % p
    inv = pow(det, p - 2, p) if p > 2 else 1
    return ((d * inv) % p, (-b * inv) % p, (-c * inv) % p, (a * inv) % p)


def mat_pow(x: Raw, k: int, p: int) -> Raw:
    if k < 0:
        x, k = mat_inv(x, p), -k
    result: Raw = (1, 0, 0, 1)
    while k:
        if k & 1:
            result = mat_mul(result, x, p)
        x = mat_mul(x, x, p)
        k >>= 1
    return result


def mat_apply(x: Raw, v: tuple[int, int], p: int) -> tuple[int, int]:
    a, b, c, d = x
    return ((a * v[0] + b * v[1]) % p, (c * v[0] + d * v[1]) % p)


def mat_order(x: Raw, p: int) -> int:
    ident = (1, 0, 0, 1)
    y, k = x, 1
    while y != ident:
        y = mat_mul(y, x, p)
        k += 1
    return k


def companion(p: int, t: int) -> Mat2:
    """[[0, -1], [1, t]]: determinant 1, trace t."""
    return Mat2(p, 0, -1, 1, t)


SWAP = (0, 1, 1, 0)


# ------------------------------------------------------------ whole of GL2(F_p)


@lru_cache(maxsize=None)
def gl2_array(p: int) -> np.ndarray:
    """All of GL2(F_p) as an (N, 4) integer array in lexicographic order."""
    r = np.arange(p, dtype=np.int64)
    a, b, c, d = np.meshgrid(r, r, r, r, indexing="ij")
    M = np.stack([a.ravel(), b.ravel(), c.ravel(), d.ravel()], axis=1)
    det = (M[:, 0] * M[:, 3] - M[:, 1] * M[:, 2]) % p
    out = M[det != 0]
    out.setflags(write=False)
    return out


def np_mul(X: np.ndarray, Y: np.ndarray, p: int) -> np.ndarray:
    a, b, c, d = X[..., 0], X[..., 1], X[..., 2], X[..., 3]
    e, f, g, h = Y[..., 0], Y[..., 1], Y[..., 2], Y[..., 3]
    return np.stack(
        [(a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p],
        axis=-1,
    )


def np_pow(X: np.ndarray, k: int, p: int) -> np.ndarray:
    result = np.broadcast_to(np.array([1, 0, 0, 1], dtype=np.int64), X.shape).copy()
    base = X.copy()
    while k:
        if k & 1:
            result = np_mul(result, base, p)
        base = np_mul(base, base, p)
        k >>= 1
    return result


def _is_identity(X: np.ndarray) -> np.ndarray:
    return (X[:, 0] == 1) & (X[:, 1] == 0) & (X[:, 2] == 0) & (X[:, 3] == 1)


FULL_GL2_LIMIT = 13


def matrices_with_power_one(p: int, k: int, full: bool | None = None) -> np.ndarray:
    """All M in GL2(F_p) with M^k = 1, sorted lexicographically.

    Small p scan the whole group. Larger p first find the characteristic
    polynomials x^2 - t x + d whose companion matrix satisfies C^k = 1 (these
    have distinct roots, so every matrix with that polynomial is conjugate to
    C), enumerate those matrices directly and add the scalar solutions.
    """
    if full is None:
        full = p <= FULL_GL2_LIMIT
    if full:
        M = gl2_array(p)
        return M[_is_identity(np_pow(M, k, p))]
    rows: list[tuple[int, int, int, int]] = []
    for lam in range(1, p):
        if pow(lam, k, p) == 1:
            rows.append((lam, 0, 0, lam))
    for t in range(p):
        for det in range(1, p):
            comp = (0, (-det) % p, 1, t)
            if mat_pow(comp, k, p) != (1, 0, 0, 1):
                continue
            for a in range(p):
                dd = (t - a) % p
                r = (a * dd - det) % p
                if r:
                    for b in range(1, p):
                        rows.append((a, b, (r * pow(b, p - 2, p)) % p, dd))
                else:
                    for c in range(p):
                        rows.append((a, 0, c, dd))
                    for b in range(1, p):
                        rows.append((a, b, 0, dd))
    rows.sort()
    return np.array(rows, dtype=np.int64).reshape(-1, 4)


# ----------------------------------------------------------------- companion


@lru_cache(maxsize=None)
def companion_traces(p: int, ell: int) -> tuple[int, ...]:
    """All t in F_p (ascending) for which [[0,-1],[1,t]] has order exactly ell."""
    return tuple(t for t in range(p) if mat_order(companion(p, t).entries, p) == ell)


def companion_parameter(p: int, ell: int, j: int) -> int:
    """Trace zeta^j + zeta^-j, where zeta is pinned by making j = 1 the least trace.

    Equivalently the trace of C^j for C the companion matrix of the smallest
    admissible trace, so ``companion_parameter(p, ell, 1)`` is the first entry of
    ``companion_traces``.
    """
    if ell < 3 or not is_prime(ell) or (p * p - 1) % ell:
        raise RepError(f"need an odd prime ell dividing p^2-1, got p={p}, ell={ell}")
    traces = companion_traces(p, ell)
    if not traces:  # pragma: no cover - impossible for ell | p^2-1
        raise AssertionError(f"no companion matrix of order {ell} over F_{p}")
    if j % ell == 0:
        raise RepError("j must be nonzero modulo ell")
    base = companion(p, traces[0]).entries
    return (mat_pow(base, j, p)[0] + mat_pow(base, j, p)[3]) % p


# -------------------------------------------------------------------- Rep2


def _extend_hom(source: GroupTable, gen_images: tuple[Raw, ...], p: int) -> dict[Perm, Raw] | None:
    """Extend generator images along the Cayley graph; None if not a homomorphism."""
    table: dict[Perm, Raw] = {identity(source.degree): (1, 0, 0, 1)}
    queue = deque(table)
    gens = source.generators
    while queue:
        x = queue.popleft()
        mx = table[x]
        for g, mg in zip(gens, gen_images):
            y = tuple([g[i] for i in x])
            my = mat_mul(mg, mx, p)
            seen = table.get(y)
            if seen is None:
                table[y] = my
                queue.append(y)
            elif seen != my:
                return None
    return table


@dataclass(frozen=True)
class Rep2:
    """A homomorphism from a permutation group of order prime to p into GL2(F_p)."""

    p: int
    source: GroupTable
    images: tuple[Mat2, ...]
    _table: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise RepError(f"{self.p} is not prime")
        if gcd(self.source.order, self.p) != 1:
            raise RepError("source order must be prime to p")
        if len(self.images) != len(self.source.generators):
            raise RepError("one image per source generator is required")
        if any(m.p != self.p for m in self.images):
            raise RepError("image matrices must live over F_p")
        table = _extend_hom(self.source, tuple(m.entries for m in self.images), self.p)
        if table is None:
            raise RepError("generator images do not define a homomorphism")
        object.__setattr__(self, "_table", table)

    def raw(self, g: Perm) -> Raw:
        return self._table[g]

    def __call__(self, g: Perm) -> Mat2:
        return Mat2(self.p, *self._table[g])

    def image_set(self, K: GroupTable | None = None) -> frozenset:
        elems = self.source.elements if K is None else K.elements
        return frozenset(self._table[g] for g in elems)

    def signature(self) -> tuple[tuple[int, int], ...]:
        """(trace, det) of every element in canonical order.

        For groups of order prime to p, two 2-dimensional representations with
        the same characteristic polynomials everywhere are isomorphic
        (Brauer–Nesbitt plus Maschke).
        """
        p = self.p
        out = []
        for g in self.source.elements:
            a, b, c, d = self._table[g]
            out.append(((a + d) % p, (a * d - b * c) % p))
        return tuple(out)

    def conjugated(self, A: Mat2) -> "Rep2":
        Ainv = A.inverse()
        return Rep2(self.p, self.source, tuple(A @ m @ Ainv for m in self.images))

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "source": self.source.to_json(),
            "images": [m.to_list() for m in self.images],
        }


def build_rep(kind: str, p: int, *params: int) -> Rep2:
    """Named representations: U(l, j1, j2), V(l, j), W(l, j), U4(j1, j2)."""
    if not is_prime(p):
        raise RepError(f"{p} is not prime")
    if kind == "U":
        ell, j1, j2 = params
        if (p - 1) % ell:
            raise RepError(f"U needs ell | p-1, got p={p}, ell={ell}")
        z = root_of_unity(p, ell)
        img = Mat2.diag(p, pow(z, j1 % ell, p), pow(z, j2 % ell, p))
        return Rep2(p, cyclic_group(ell), (img,))
    if kind == "V":
        ell, j = params
        if ell < 3 or (p + 1) % ell:
            raise RepError(f"V needs an odd ell | p+1, got p={p}, ell={ell}")
        return Rep2(p, cyclic_group(ell), (companion(p, companion_parameter(p, ell, j)),))
    if kind == "W":
        ell, j = params
        if p < 5 or ell < 3 or (p * p - 1) % ell:
            raise RepError(f"W needs p >= 5 and an odd ell | p^2-1, got p={p}, ell={ell}")
        sigma = companion(p, companion_parameter(p, ell, j))
        tau = Mat2(p, *SWAP)
        return Rep2(p, dihedral_group(ell), (sigma, tau))
    if kind == "U4":
        j1, j2 = params
        if p % 4 != 1:
            raise RepError(f"U4 needs p = 1 mod 4, got {p}")
        i = root_of_unity(p, 4)
        return Rep2(p, cyclic_group(4), (Mat2.diag(p, pow(i, j1 % 4, p), pow(i, j2 % 4, p)),))
    raise RepError(f"unknown representation kind {kind!r}")


def rep_from_json(obj: dict) -> Rep2:
    from .permgroup import group_from_json

    try:
        p = int(obj["p"])
        source = group_from_json(obj["source"])
        images = tuple(Mat2(p, *[int(x) for x in m]) for m in obj["images"])
    except (KeyError, TypeError, ValueError) as exc:
        raise RepError(f"malformed representation JSON: {exc}") from exc
    return Rep2(p, source, images)


# --------------------------------------------------------------- extremality


@dataclass(frozen=True, order=True)
class Line:
    """A line in F_p^2, stored by its generator with first nonzero coordinate 1."""

    p: int
    x: int
    y: int

    def __post_init__(self) -> None:
        p = self.p
        x, y = self.x % p, self.y % p
        if x == 0 and y == 0:
            raise RepError("the zero vector spans no line")
        s = pow(x if x else y, p - 2, p) if p > 2 else 1
        object.__setattr__(self, "x", (x * s) % p)
        object.__setattr__(self, "y", (y * s) % p)

    @property
    def vector(self) -> tuple[int, int]:
        return (self.x, self.y)

    def points(self) -> list[tuple[int, int]]:
        return [((k * self.x) % self.p, (k * self.y) % self.p) for k in range(self.p)]


def all_lines(p: int) -> list[Line]:
    return sorted({Line(p, 0, 1)} | {Line(p, 1, y) for y in range(p)})


EXTREMAL = "extremal"
HAS_INVARIANTS = "nonzero invariant vectors"
NO_SPECIAL_LINE = "no special line"


@dataclass(frozen=True)
class ExtremalReport:
    extremal: bool
    special_lines: tuple[Line, ...]
    reason: str


def invariant_vectors(rep: Rep2, K: GroupTable | None = None) -> list[tuple[int, int]]:
    p = rep.p
    gens = rep.images if K is None else [rep(g) for g in K.generators]
    return [
        (x, y) for x in range(p) for y in range(p)
        if all(m.apply((x, y)) == (x, y) for m in gens)
    ]


def line_stabilizer(rep: Rep2, L: Line) -> tuple[list[Perm], list[Perm]]:
    """(Stab, Fix) of a line as element lists of the source."""
    p, v = rep.p, L.vector
    span = set(L.points())
    stab, fix = [], []
    for g in rep.source.elements:
        w = mat_apply(rep.raw(g), v, p)
        if w in span:
            stab.append(g)
            if w == v:
                fix.append(g)
    return stab, fix


def is_special_line(rep: Rep2, Hprime: GroupTable, L: Line) -> bool:
    stab, fix = line_stabilizer(rep, L)
    fixed = set(fix)
    return len(stab) == len(fix) and all(h in fixed for h in Hprime.elements)


def is_extremal(rep: Rep2, Hprime: GroupTable) -> ExtremalReport:
    if not Hprime.is_subgroup_of(rep.source):
        raise GroupError("H' is not a subgroup of the representation's source")
    if len(invariant_vectors(rep)) > 1:
        return ExtremalReport(False, (), HAS_INVARIANTS)
    special = tuple(L for L in all_lines(rep.p) if is_special_line(rep, Hprime, L))
    if not special:
        return ExtremalReport(False, (), NO_SPECIAL_LINE)
    return ExtremalReport(True, special, EXTREMAL)


# --------------------------------------------------- semidirect products V x| G'


def semidirect_lift(rep: Rep2):
    """Embedding (v, g) -> permutation of F_p^2 x| G' on p^2 + deg(G') points.

    Vectors carry the affine action x -> g.x + v, the remaining points carry
    the given action of G'; together the action is faithful.
    """
    p, src = rep.p, rep.source
    n = p * p + src.degree

    def lift(shift: tuple[int, int], g: Perm) -> Perm:
        m = rep.raw(g)
        images = [0] * n
        for y in range(p):
            for x in range(p):
                w = mat_apply(m, (x, y), p)
                images[x + p * y] = (w[0] + shift[0]) % p + p * ((w[1] + shift[1]) % p)
        for i in range(src.degree):
            images[p * p + i] = p * p + g[i]
        return tuple(images)

    return lift


def semidirect_parent(rep: Rep2) -> GroupTable:
    lift = semidirect_lift(rep)
    ident = identity(rep.source.degree)
    gens = [lift((1, 0), ident), lift((0, 1), ident)] + [lift((0, 0), g) for g in rep.source.generators]
    return generate(gens, rep.p * rep.p + rep.source.degree)


def semidirect_transitive(rep: Rep2, Hprime: GroupTable, L: Line) -> tuple[GroupTable, GroupTable]:
    """Transitive image of (F_p^2 x| G') acting on the cosets of L x| H'."""
    p = rep.p
    if not Hprime.is_subgroup_of(rep.source):
        raise GroupError("H' is not a subgroup of the representation's source")
    if any(mat_apply(rep.raw(h), L.vector, p) != L.vector for h in Hprime.generators):
        raise RepError("H' must fix the line pointwise")
    big = semidirect_parent(rep)
    lift = semidirect_lift(rep)
    ident = identity(rep.source.degree)
    K = generate([lift(L.vector, ident)] + [lift((0, 0), h) for h in Hprime.generators], big.degree)
    action = coset_action(big, K)
    G = action.image
    _, H = orbit_and_stabilizer(G, 0)
    n = G.degree
    if n % p or n % (p * p) == 0:  # pragma: no cover - follows from gcd(|G'|, p) = 1
        raise AssertionError("degree is not in pZ minus p^2Z")
    if not is_normal(G, sylow(G, p)):  # pragma: no cover
        raise AssertionError("Sylow p-subgroup of the semidirect product is not normal")
    return G, H


# ------------------------------------------------------ matrix groups and 2-Sylows


def matrix_closure(gens: list[Raw], p: int) -> frozenset:
    ident: Raw = (1, 0, 0, 1)
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mat_mul(g, x, p)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def two_adic(n: int) -> int:
    k = 0
    while n % 2 == 0:
        n //= 2
        k += 1
    return k


def gl2_two_sylow(p: int) -> frozenset:
    """A Sylow 2-subgroup of GL2(F_p), p odd, from explicit generators.

    For p = 1 mod 4: diagonal matrices with 2^s-th root of unity entries plus
    the coordinate swap. For p = 3 mod 4: multiplication by an element w of
    F_{p^2} of order 2^(s+1), s = ord_2(p+1), and the Frobenius, both written
    in the basis (1, w).
    """
    if p == 2 or not is_prime(p):
        raise RepError("p must be an odd prime")
    if p % 4 == 1:
        s = two_adic(p - 1)
        z = root_of_unity(p, 2 ** s)
        gens = [(z, 0, 0, 1), (1, 0, 0, z), SWAP]
    else:
        s = two_adic(p + 1)
        t, n = next(
            (t, n) for t in range(p) for n in range(1, p) if mat_order((0, -n % p, 1, t), p) == 2 ** (s + 1)
        )
        gens = [(0, -n % p, 1, t), (1, t, 0, p - 1)]
    P = matrix_closure(gens, p)
    target = 2 ** two_adic((p * p - 1) * (p * p - p))
    if len(P) != target:  # pragma: no cover
        raise AssertionError(f"constructed 2-group has order {len(P)}, expected {target}")
    return P


def matrix_subgroups(G: frozenset, p: int) -> list[frozenset]:
    """All subgroups of a small matrix group, by joining cyclic subgroups until stable."""
    cyclics = {matrix_closure([g], p) for g in G}
    subs = set(cyclics) | {frozenset({(1, 0, 0, 1)})}
    frontier = set(subs)
    while frontier:
        new = set()
        for A in frontier:
            for C in cyclics:
                if C <= A:
                    continue
                J = matrix_closure(sorted(A | C), p)
                if J not in subs:
                    new.add(J)
        subs |= new
        frontier = new
    return sorted(subs, key=lambda s: (len(s), sorted(s)))
