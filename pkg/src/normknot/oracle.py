"""Brute-force verifiers for the classifier and for the GL2 classification results.

Each sweep returns a ``SweepResult`` whose cells carry a verdict and, on a
mismatch, a witness that reproduces it (p, source, generator images, line).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Iterable, Iterator

import numpy as np

from .gl2rep import (
    Line,
    Mat2,
    Raw,
    Rep2,
    _extend_hom,
    all_lines,
    build_rep,
    discrete_log,
    gl2_array,
    gl2_two_sylow,
    is_extremal,
    is_prime,
    mat_apply,
    mat_inv,
    mat_mul,
    mat_order,
    mat_pow,
    matrices_with_power_one,
    matrix_closure,
    matrix_subgroups,
    np_mul,
    np_pow,
    root_of_unity,
    semidirect_transitive,
    two_adic,
)
from .permgroup import (
    GroupTable,
    Perm,
    affine_group,
    compose,
    conjugate,
    conjugacy_class_of_subgroup,
    conjugate_subgroup,
    cyclic_group,
    degree_four_groups,
    dihedral_group,
    element_order_counts,
    generate,
    identity,
    intersection,
    normal_core,
    orbit_and_stabilizer,
    perm_order,
    power,
)
from .sha import (
    Context,
    Scenario,
    ValidationError,
    check_abc,
    classify,
    closed_form_applies,
    closed_form_size,
    full_report,
    m_tilde_L3,
    p_part_L1,
    p_part_L2,
    validate,
)


# ------------------------------------------------------------------ results


@dataclass
class Cell:
    params: dict
    ok: bool
    detail: str = ""
    witness: dict | None = None

    def to_json(self) -> dict:
        out = {"params": self.params, "verdict": "match" if self.ok else "mismatch"}
        if self.detail:
            out["detail"] = self.detail
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class SweepResult:
    name: str
    cells: list[Cell] = field(default_factory=list)

    def add(self, params: dict, ok: bool, detail: str = "", witness: dict | None = None) -> None:
        self.cells.append(Cell(params, ok, detail, witness))

    def extend(self, other: "SweepResult") -> None:
        self.cells.extend(other.cells)

    @property
    def mismatches(self) -> list[Cell]:
        return [c for c in self.cells if not c.ok]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {
            "sweep": self.name,
            "cells": len(self.cells),
            "mismatches": [c.to_json() for c in self.mismatches],
            "ok": self.ok,
        }


def _witness(rep: Rep2, **extra) -> dict:
    out = {"p": rep.p, "source": rep.source.to_json(), "images": [m.to_list() for m in rep.images]}
    out.update(extra)
    return out


# -------------------------------------------------------- enumerating reps


def _candidates(p: int, k: int) -> np.ndarray:
    return matrices_with_power_one(p, k)


def enumerate_reps(source: GroupTable, p: int) -> list[Rep2]:
    """Every homomorphism source -> GL2(F_p), by generator-image search.

    Generator images range over matrices whose order divides the generator's
    order; pairs are prefiltered on the order of the product of the two
    generators, and survivors are checked on the whole element table.
    """
    if gcd(source.order, p) != 1:
        raise ValueError("source order must be prime to p")
    gens = source.generators
    if len(gens) == 0:
        return [Rep2(p, source, ())]
    if len(gens) > 2:
        raise ValueError("sources with more than two generators are not supported")
    cands = [_candidates(p, perm_order(g)) for g in gens]
    out: list[Rep2] = []
    if len(gens) == 1:
        for row in cands[0]:
            out.append(Rep2(p, source, (Mat2(p, *map(int, row)),)))
        return out
    prod_order = perm_order(compose(gens[0], gens[1]))
    B = cands[1]
    for row in cands[0]:
        A = np.broadcast_to(row, B.shape)
        ok = np_pow(np_mul(A, B, p), prod_order, p)
        mask = (ok[:, 0] == 1) & (ok[:, 1] == 0) & (ok[:, 2] == 0) & (ok[:, 3] == 1)
        a = tuple(int(x) for x in row)
        for brow in B[mask]:
            b = tuple(int(x) for x in brow)
            if _extend_hom(source, (a, b), p) is not None:
                out.append(Rep2(p, source, (Mat2(p, *a), Mat2(p, *b))))
    return out


def rep_classes(source: GroupTable, p: int) -> list[Rep2]:
    """One representative per isomorphism class (same characteristic polynomials everywhere)."""
    seen: dict = {}
    for rep in enumerate_reps(source, p):
        seen.setdefault(rep.signature(), rep)
    return list(seen.values())


def count_power_one(p: int, k: int) -> int:
    """|{M in GL2(F_p) : M^k = 1}| by a plain scalar loop over all matrices."""
    count = 0
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    if (a * d - b * c) % p and mat_pow((a, b, c, d), k, p) == (1, 0, 0, 1):
                        count += 1
    return count


# ------------------------------------------------- extremality predictions


def _eigen_exponents(m: Raw, p: int, ell: int) -> tuple[int, int] | None:
    """Exponents (j1, j2) with eigenvalues zeta^j1, zeta^j2, or None if not split."""
    a, b, c, d = m
    t, det = (a + d) % p, (a * d - b * c) % p
    roots = [x for x in range(1, p) if (x * x - t * x + det) % p == 0]
    if not roots:
        return None
    z = root_of_unity(p, ell)
    lam1 = roots[0]
    lam2 = (det * pow(lam1, p - 2, p)) % p
    return discrete_log(lam1, z, p) % ell, discrete_log(lam2, z, p) % ell


def _is_w_type(rep: Rep2) -> bool:
    p, ell = rep.p, rep.source.degree
    if p < 5 or (p * p - 1) % ell:
        return False
    sig = rep.signature()
    return any(build_rep("W", p, ell, j).signature() == sig for j in range(1, (ell - 1) // 2 + 1))


def _is_u4_type(rep: Rep2) -> bool:
    p = rep.p
    if p % 4 != 1:
        return False
    sig = rep.signature()
    return any(build_rep("U4", p, *js).signature() == sig for js in ((1, 2), (3, 2)))


def predicted_extremal(kind: str, ell: int, rep: Rep2) -> tuple[bool, int | None]:
    """(extremal?, number of special lines) as dictated by the classification results."""
    p = rep.p
    if kind == "C":
        m = rep.images[0].entries
        if m == (1, 0, 0, 1):
            return False, None
        if ell == 2:
            return False, None
        if (p - 1) % ell == 0:
            j1, j2 = _eigen_exponents(m, p, ell)
            ok = j1 != 0 and j2 != 0 and j1 != j2
            return ok, (p - 1 if ok else None)
        if (p + 1) % ell == 0:
            return True, p + 1
        return False, None
    if kind == "D":
        ok = _is_w_type(rep)
        return ok, (1 if ok else None)
    if kind == "C4":
        ok = _is_u4_type(rep)
        return ok, (p - 1 if ok else None)
    if kind in ("V4", "D4", "A4", "S4"):
        return False, None
    raise ValueError(kind)


def image_structure_ok(rep: Rep2, Hprime: GroupTable) -> tuple[bool, str]:
    """Constraints every extremal image must satisfy (index, core, cyclic/dihedral shape)."""
    p = rep.p
    Gb = rep.image_set()
    Hb = rep.image_set(Hprime)
    if len(Gb) // len(Hb) < 3:
        return False, "image index below 3"
    core = set(Hb)
    for g in Gb:
        gi = mat_inv(g, p)
        core = {h for h in core if mat_mul(mat_mul(gi, h, p), g, p) in Hb}
    if core != {(1, 0, 0, 1)}:
        return False, "image of H' has nontrivial core"
    if p == 2:
        return True, ""
    n = len(Gb)
    orders = {g: mat_order(g, p) for g in Gb}
    abelian = all(mat_mul(x, y, p) == mat_mul(y, x, p) for x in Gb for y in Gb)
    if abelian:
        if max(orders.values()) != n:
            return False, "abelian image is not cyclic"
        if n < 3 or ((p - 1) % n and (p + 1) % n):
            return False, f"cyclic image of order {n} does not divide p-1 or p+1"
        if len(Hb) != 1:
            return False, "cyclic image with nontrivial image of H'"
    else:
        half = n // 2
        if half % 2 == 0 or half < 3 or ((p - 1) % half and (p + 1) % half):
            return False, f"non-abelian image of order {n} is not an allowed dihedral group"
        rot = [g for g, k in orders.items() if k == half]
        if not rot:
            return False, "non-abelian image without a rotation subgroup"
        R = matrix_closure([rot[0]], p)
        if any(orders[g] != 2 for g in Gb if g not in R):
            return False, "non-abelian image is not dihedral"
        if len(Hb) > 2:
            return False, "dihedral image with |image of H'| > 2"
    if n % 4 == 0:
        s = two_adic(n)
        if (p - 1) % (2 ** s) or not abelian:
            return False, "image order divisible by 4 violates the 2-adic constraint"
    return True, ""


def extremal_sources(p: int, bound: int) -> list[tuple[str, int, GroupTable, GroupTable]]:
    """(kind, ell, G', H') for cyclic/dihedral sources of prime degree and the degree-4 groups."""
    out = []
    for ell in range(2, bound + 1):
        if not is_prime(ell) or ell == p:
            continue
        out.append(("C", ell, cyclic_group(ell), generate([], ell)))
        if ell > 2 and p != 2:
            D = dihedral_group(ell)
            out.append(("D", ell, D, generate([D.generators[1]], ell)))
    for name, G4 in degree_four_groups().items():
        if G4.order % p:
            out.append((name, 4, G4, orbit_and_stabilizer(G4, 0)[1]))
    return out


def verify_extremal_classification(p: int, bound: int = 13) -> SweepResult:
    result = SweepResult(f"extremal-classification p={p} bound={bound}")
    for kind, ell, src, Hp in extremal_sources(p, bound):
        reps = enumerate_reps(src, p)
        n_ext = 0
        for rep in reps:
            report = is_extremal(rep, Hp)
            expected, n_lines = predicted_extremal(kind, ell, rep)
            params = {"p": p, "source": kind, "ell": ell}
            if report.extremal != expected:
                result.add(params, False, f"is_extremal={report.extremal}, predicted {expected}", _witness(rep))
                continue
            if expected:
                n_ext += 1
                if n_lines is not None and len(report.special_lines) != n_lines:
                    result.add(
                        params, False,
                        f"{len(report.special_lines)} special lines, predicted {n_lines}", _witness(rep),
                    )
                    continue
                ok, why = image_structure_ok(rep, Hp)
                if not ok:
                    result.add(params, False, why, _witness(rep))
                    continue
            result.add(params, True)
        if kind == "C" and ell > 2:
            target = count_power_one(p, ell) if p <= 7 else len(matrices_with_power_one(p, ell, full=False))
            if len(reps) != target:
                result.add({"p": p, "source": kind, "ell": ell}, False, f"{len(reps)} reps, expected {target}")
    return result


def verify_two_subgroups(p: int) -> SweepResult:
    """Every nontrivial 2-subgroup of GL2(F_p) contains -1, or is cyclic of order dividing 2^s
    with an element of characteristic polynomial x^2 - 1 (s = ord_2(p-1))."""
    result = SweepResult(f"two-subgroups p={p}")
    P = gl2_two_sylow(p)
    s = two_adic(p - 1)
    minus = (p - 1, 0, 0, p - 1)
    for K in matrix_subgroups(P, p):
        if len(K) == 1:
            continue
        if minus in K:
            result.add({"p": p, "order": len(K)}, True)
            continue
        cyclic = any(mat_order(g, p) == len(K) for g in K)
        reflection = any((g[0] + g[3]) % p == 0 and (g[0] * g[3] - g[1] * g[2]) % p == p - 1 for g in K)
        ok = cyclic and (2 ** s) % len(K) == 0 and reflection
        result.add({"p": p, "order": len(K)}, ok, "" if ok else "2-subgroup violates the dichotomy",
                   None if ok else {"elements": sorted(K)})
    return result


# ------------------------------------------------------- semidirect families


def rep_automorphisms(rep: Rep2) -> np.ndarray:
    """All A in GL2(F_p) commuting with the image."""
    M = gl2_array(rep.p)
    mask = np.ones(len(M), dtype=bool)
    for m in rep.images:
        X = np.broadcast_to(np.array(m.entries), M.shape)
        mask &= np.all(np_mul(M, X, rep.p) == np_mul(X, M, rep.p), axis=1)
    return M[mask]


def line_orbit_reps(rep: Rep2, lines: list[Line]) -> list[Line]:
    """One line per orbit of the representation's automorphism group."""
    autos = [tuple(int(x) for x in row) for row in rep_automorphisms(rep)]
    seen: set = set()
    out = []
    for L in lines:
        if L in seen:
            continue
        out.append(L)
        for A in autos:
            seen.add(Line(rep.p, *mat_apply(A, L.vector, rep.p)))
    return out


def subgroup_classes(G: GroupTable) -> list[GroupTable]:
    """Subgroups of a small group up to conjugacy (joins of cyclic subgroups)."""
    cyclics = {generate([x], G.degree) for x in G.elements}
    subs = set(cyclics)
    frontier = set(subs)
    while frontier:
        new = set()
        for A in frontier:
            for C in cyclics:
                if not C.is_subgroup_of(A):
                    J = generate(list(A.generators) + list(C.generators), G.degree)
                    if J not in subs:
                        new.add(J)
        subs |= new
        frontier = new
    reps: list[GroupTable] = []
    covered: set = set()
    for K in sorted(subs, key=lambda K: (K.order, K.elements)):
        if K in covered:
            continue
        reps.append(K)
        covered.update(conjugacy_class_of_subgroup(G, K))
    return reps


@dataclass(frozen=True)
class FamilyMember:
    source_name: str
    rep: Rep2
    Hprime: GroupTable
    line: Line
    G: GroupTable
    H: GroupTable

    def describe(self) -> dict:
        return {
            "source": self.source_name,
            "images": [m.to_list() for m in self.rep.images],
            "H'_order": self.Hprime.order,
            "line": list(self.line.vector),
        }


def semidirect_family(
    p: int,
    sources: Iterable[tuple[str, GroupTable]],
    hprime_filter: Callable[[GroupTable, GroupTable], bool] | None = None,
) -> Iterator[FamilyMember]:
    """Pairs (F_p^2 x| G', L x| H') over rep classes, conjugacy classes of H' and line orbits.

    Conjugate data give isomorphic pairs, so nothing is lost by the reductions.
    """
    for name, src in sources:
        if gcd(src.order, p) != 1:
            continue
        hprimes = [K for K in subgroup_classes(src) if hprime_filter is None or hprime_filter(src, K)]
        for rep in rep_classes(src, p):
            for Hp in hprimes:
                fixed = [
                    L for L in all_lines(p)
                    if all(mat_apply(rep.raw(h), L.vector, p) == L.vector for h in Hp.generators)
                ]
                for L in line_orbit_reps(rep, fixed):
                    G, H = semidirect_transitive(rep, Hp, L)
                    yield FamilyMember(name, rep, Hp, L, G, H)


def prime_degree_sources(ell: int) -> list[tuple[str, GroupTable]]:
    """Transitive groups of prime degree that are affine: C_ell x| C_k for k | ell-1 (k = 2 is D_ell)."""
    if ell == 2:
        return [("C2", cyclic_group(2))]
    out = [(f"C{ell}", cyclic_group(ell)), (f"D{ell}", dihedral_group(ell))]
    for k in range(3, ell):
        if (ell - 1) % k == 0:
            out.append((f"C{ell}:C{k}", affine_group(ell, k)))
    return out


def transitive_sources(n: int) -> list[tuple[str, GroupTable]]:
    if n == 1:
        return [("C1", generate([], 1))]
    if n == 4:
        return sorted(degree_four_groups().items())
    if is_prime(n):
        return prime_degree_sources(n)
    raise ValueError(f"no transitive-source list for degree {n}")


def point_stabilizer_filter(src: GroupTable, K: GroupTable) -> bool:
    return K == orbit_and_stabilizer(src, 0)[1] or (
        K.order * src.degree == src.order and normal_core(src, K).order == 1
    )


# ---------------------------------------------------------------- plcd


def _expected_label(rep: Rep2) -> str:
    p, src = rep.p, rep.source
    ell = src.order if src.is_cyclic() else src.order // 2
    if not src.is_cyclic():
        return "gamma"
    if (p - 1) % ell == 0:
        j1, j2 = _eigen_exponents(rep.images[0].entries, p, ell)
        m1 = (j2 * pow(j1, -1, ell)) % ell
        m2 = (j1 * pow(j2, -1, ell)) % ell
        return f"alpha({min(m1, m2)})"
    return "beta"


def verify_plcd(p: int, ell: int) -> SweepResult:
    """(a)(b)(c) hold exactly for extremal data, and classify names the right family."""
    result = SweepResult(f"plcd p={p} ell={ell}")
    sources = [(f"C{ell}", cyclic_group(ell))]
    if ell > 2:
        sources.append((f"D{ell}", dihedral_group(ell)))
    labels: set[str] = set()
    for member in semidirect_family(p, sources):
        rep, Hp, L = member.rep, member.Hprime, member.line
        params = {"p": p, "ell": ell, **member.describe()}
        try:
            ctx = validate(member.G, member.H, p)
        except ValidationError as exc:
            result.add(params, False, f"built pair failed validation: {exc}")
            continue
        abc = check_abc(ctx)
        report = is_extremal(rep, Hp)
        extremal = report.extremal and L in report.special_lines
        if abc.all != extremal:
            result.add(params, False, f"abc={abc.all} but extremal-with-line={extremal}", _witness(rep, line=list(L.vector)))
            continue
        if abc.all:
            got, want = classify(ctx), _expected_label(rep)
            labels.add(got)
            if got != want:
                result.add(params, False, f"classify={got}, expected {want}", _witness(rep, line=list(L.vector)))
                continue
        result.add(params, True)
    result.labels = sorted(labels)  # type: ignore[attr-defined]
    return result


# ---------------------------------------------------------- iso lemmas


@dataclass(frozen=True)
class AffineGroup:
    """F_p^2 x| K with K a permutation group acting through a representation."""

    rep: Rep2

    @property
    def p(self) -> int:
        return self.rep.p

    def elements(self) -> list[tuple]:
        p = self.p
        return [((x, y), k) for k in self.rep.source.elements for x in range(p) for y in range(p)]

    def mul(self, u: tuple, w: tuple) -> tuple:
        (v, a), (x, b) = u, w
        p = self.p
        ax = mat_apply(self.rep.raw(a), x, p)
        return (((v[0] + ax[0]) % p, (v[1] + ax[1]) % p), compose(a, b))

    def generators(self) -> list[tuple]:
        ident = identity(self.rep.source.degree)
        return [((1, 0), ident), ((0, 1), ident)] + [((0, 0), g) for g in self.rep.source.generators]

    def order_of(self, u: tuple) -> int:
        ident = ((0, 0), identity(self.rep.source.degree))
        x, k = u, 1
        while x != ident:
            x = self.mul(x, u)
            k += 1
        return k

    @property
    def order(self) -> int:
        return self.p * self.p * self.rep.source.order


def check_isomorphism(src: AffineGroup, dst: AffineGroup, psi: Callable[[tuple], tuple]) -> bool:
    """psi is a bijective homomorphism: psi(x s) = psi(x) psi(s) for all x and generators s."""
    if src.order != dst.order:
        return False
    elems = src.elements()
    images = {psi(x) for x in elems}
    if len(images) != len(elems):
        return False
    for s in src.generators():
        ps = psi(s)
        for x in elems:
            if psi(src.mul(x, s)) != dst.mul(psi(x), ps):
                return False
    return True


def find_intertwiner(rep1: Rep2, rep2: Rep2, alpha: Callable[[Perm], Perm]) -> Raw | None:
    """First A (identity preferred) with A rep1(k) = rep2(alpha(k)) A for the generators k."""
    p = rep1.p
    pairs = [(rep1.raw(k), rep2.raw(alpha(k))) for k in rep1.source.generators]
    ident = (1, 0, 0, 1)
    if all(mat_mul(ident, x, p) == mat_mul(y, ident, p) for x, y in pairs):
        return ident
    M = gl2_array(p)
    mask = np.ones(len(M), dtype=bool)
    for x, y in pairs:
        X = np.broadcast_to(np.array(x), M.shape)
        Y = np.broadcast_to(np.array(y), M.shape)
        mask &= np.all(np_mul(M, X, p) == np_mul(Y, M, p), axis=1)
    hits = M[mask]
    return tuple(int(v) for v in hits[0]) if len(hits) else None


def _psi(A: Raw, alpha: Callable[[Perm], Perm], p: int) -> Callable[[tuple], tuple]:
    def psi(u: tuple) -> tuple:
        v, k = u
        return (mat_apply(A, v, p), alpha(k))

    return psi


def _power_map(G: GroupTable, gen: Perm, m: int) -> Callable[[Perm], Perm]:
    """Automorphism of a cyclic group gen^i -> gen^(i m)."""
    logs = {power(gen, i): i for i in range(G.order)}
    return lambda k: power(gen, logs[k] * m)


def _dihedral_map(G: GroupTable, m: int) -> Callable[[Perm], Perm]:
    """sigma^i tau^e -> sigma^(i m) tau^e."""
    sigma, tau = G.generators
    table = {}
    for i in range(G.order // 2):
        for e in range(2):
            table[compose(power(sigma, i), power(tau, e))] = compose(power(sigma, i * m), power(tau, e))
    return table.__getitem__


def _u_pairs(n: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(1, n) for b in range(1, n) if a != b]


def _scaling(j: tuple[int, int], jp: tuple[int, int], n: int) -> tuple[int, bool] | None:
    """m with {j1, j2} = {m j1', m j2'}; flag says whether coordinates are swapped."""
    units = [m for m in range(1, n) if gcd(m, n) == 1]
    for m in units:
        if (j[0], j[1]) == ((m * jp[0]) % n, (m * jp[1]) % n):
            return m, False
    for m in units:
        if (j[0], j[1]) == ((m * jp[1]) % n, (m * jp[0]) % n):
            return m, True
    return None


def exhaustive_isomorphic(src: AffineGroup, dst: AffineGroup, two_gens: tuple[tuple, tuple]) -> bool:
    """Search for an isomorphism sending two generators of src anywhere compatible in dst.

    The first generator (of order ell) is sent to conjugacy-class representatives
    (0, c^k); the second to every element of matching order. Element-order
    statistics are compared first.
    """
    def stats(A: AffineGroup) -> dict:
        out: dict = {}
        for u in A.elements():
            k = A.order_of(u)
            out[k] = out.get(k, 0) + 1
        return out

    if stats(src) != stats(dst):
        return False
    g1, g2 = two_gens
    o1, o2 = src.order_of(g1), src.order_of(g2)
    K = dst.rep.source
    targets1 = [((0, 0), k) for k in K.elements if perm_order(k) == o1]
    targets2 = [u for u in dst.elements() if dst.order_of(u) == o2]
    ident_src = ((0, 0), identity(src.rep.source.degree))
    ident_dst = ((0, 0), identity(K.degree))
    for t1 in targets1:
        for t2 in targets2:
            table = {ident_src: ident_dst}
            queue = deque([ident_src])
            ok = True
            while queue and ok:
                x = queue.popleft()
                for s, t in ((g1, t1), (g2, t2)):
                    y = src.mul(s, x)
                    ty = dst.mul(t, table[x])
                    if y not in table:
                        table[y] = ty
                        queue.append(y)
                    elif table[y] != ty:
                        ok = False
                        break
            if ok and len(table) == src.order and len(set(table.values())) == src.order:
                return True
    return False


def _u_rep(p: int, n: int, j: tuple[int, int]) -> Rep2:
    if n == 4:
        return build_rep("U4", p, *j)
    return build_rep("U", p, n, *j)


def verify_sdpb(p: int, ell: int, n: int | None = None, pairs: list | None = None) -> SweepResult:
    """Diagonal families: isomorphic exactly when {j1, j2} = m {j1', j2'}."""
    n = n or ell
    name = "sdcf" if n == 4 else "sdpb"
    result = SweepResult(f"{name} p={p} n={n}")
    js = pairs if pairs is not None else _u_pairs(n)
    C = cyclic_group(n)
    gen = C.generators[0]
    for j in js:
        for jp in js:
            params = {"lemma": name, "p": p, "n": n, "j": list(j), "j'": list(jp)}
            A1, A2 = AffineGroup(_u_rep(p, n, j)), AffineGroup(_u_rep(p, n, jp))
            sc = _scaling(j, jp, n)
            if sc is not None:
                m, swapped = sc
                alpha = _power_map(C, gen, m)
                A = (0, 1, 1, 0) if swapped else (1, 0, 0, 1)
                ok = check_isomorphism(A1, A2, _psi(A, alpha, p))
                result.add(params, ok, f"m={m}" + (", coordinates swapped" if swapped else ""))
            else:
                g1 = ((0, 0), gen)
                g2 = ((1, 1), identity(n))
                iso = exhaustive_isomorphic(A1, A2, (g1, g2))
                result.add(params, not iso, "no isomorphism found" if not iso else "unexpected isomorphism")
    return result


def verify_sdpc(p: int, ell: int) -> SweepResult:
    result = SweepResult(f"sdpc p={p} ell={ell}")
    target = build_rep("V", p, ell, 1)
    C = target.source
    gen = C.generators[0]
    for j in range(1, ell):
        rep = build_rep("V", p, ell, j)
        alpha = _power_map(C, gen, j)
        A = find_intertwiner(rep, target, alpha)
        params = {"lemma": "sdpc", "p": p, "ell": ell, "j": j}
        if A is None:
            result.add(params, False, "no module isomorphism for the pulled-back action")
            continue
        ok = check_isomorphism(AffineGroup(rep), AffineGroup(target), _psi(A, alpha, p))
        literal = A == (1, 0, 0, 1)
        result.add(params, ok, f"linear part {list(A)}" + ("" if literal else " (identity alone is not a homomorphism)"))
    return result


def verify_sdpd(p: int, ell: int) -> SweepResult:
    result = SweepResult(f"sdpd p={p} ell={ell}")
    target = build_rep("W", p, ell, 1)
    D = target.source
    for j in range(1, ell):
        rep = build_rep("W", p, ell, j)
        alpha = _dihedral_map(D, j)
        A = find_intertwiner(rep, target, alpha)
        params = {"lemma": "sdpd", "p": p, "ell": ell, "j": j}
        if A is None:
            result.add(params, False, "no module isomorphism for the pulled-back action")
            continue
        ok = check_isomorphism(AffineGroup(rep), AffineGroup(target), _psi(A, alpha, p))
        result.add(params, ok, f"linear part {list(A)}")
    return result


def verify_iso_lemmas(p: int, ell: int, max_order: int = 2000) -> SweepResult:
    """All isomorphism statements that apply to (p, ell); ell = 4 selects the C4 family."""
    result = SweepResult(f"iso-lemmas p={p} ell={ell}")
    if ell == 4:
        if p % 4 == 1 and 4 * p * p <= max_order:
            result.extend(verify_sdpb(p, 4, 4, [(1, 2), (3, 2), (2, 1), (2, 3)]))
        return result
    if ell < 3 or not is_prime(ell) or ell == p:
        return result
    if (p - 1) % ell == 0 and p * p * ell <= max_order:
        result.extend(verify_sdpb(p, ell))
    if (p + 1) % ell == 0 and p * p * ell <= max_order:
        result.extend(verify_sdpc(p, ell))
    if p >= 5 and (p * p - 1) % ell == 0 and 2 * ell * p * p <= max_order:
        result.extend(verify_sdpd(p, ell))
    return result


def iso_grid(max_order: int = 2000, max_p: int = 50) -> list[tuple[int, int]]:
    cells = []
    for p in range(2, max_p + 1):
        if not is_prime(p):
            continue
        if p % 4 == 1 and 4 * p * p <= max_order:
            cells.append((p, 4))
        for ell in range(3, max_p + 1):
            if not is_prime(ell) or ell == p or (p * p - 1) % ell:
                continue
            if p * p * ell <= max_order:
                cells.append((p, ell))
    return cells


# ----------------------------------------------------------- cross checks


def sbsd_checks(ctx: Context) -> list[str]:
    """Sylow-index, core-intersection and elementary-abelian facts for a valid pair."""
    problems = []
    G, S, H, p = ctx.G, ctx.sylow, ctx.H, ctx.p
    for D in (H, ctx.HS, ctx.SH):
        k = 0
        idx = G.order // D.order
        while idx % p == 0:
            idx //= p
            k += 1
        if S.order // intersection(S, D).order != p ** k:
            problems.append("(S_p : S_p n D) differs from p^ord_p(G:D)")
    inter = set(S.elements)
    for g in G.elements:
        inter &= {conjugate(g, x) for x in ctx.SH.elements}
    if len(inter) != 1:
        problems.append("conjugates of S_p n H meet nontrivially")
    return problems


def negative_control_applies(ctx: Context) -> bool:
    n, p = ctx.n, ctx.p
    g2 = gcd(n, p + 1)
    return gcd(n, p - 1) <= 2 and g2 & (g2 - 1) == 0


def route_check(ctx: Context, scenario: Scenario) -> list[str]:
    problems = []
    L1 = p_part_L1(ctx, scenario)
    if ctx.rank == 2:
        mt = m_tilde_L3(ctx, scenario)
        L2 = p_part_L2(ctx, scenario, mt)
        if L1 != L2:
            problems.append(f"L1={L1.to_list()} L2={L2.to_list()}")
        if closed_form_applies(ctx, scenario) and len(mt) != closed_form_size(ctx):
            problems.append(f"|M~|={len(mt)} closed form {closed_form_size(ctx)}")
    elif L1.divisors:
        problems.append("nonzero p-part with Sylow rank different from 2")
    return problems


def standard_scenarios(ctx: Context) -> list[Scenario]:
    return [Scenario.generic(), Scenario.of([ctx.sylow.generators])]


def cross_check(G: GroupTable, H: GroupTable, p: int, scenarios: list[Scenario] | None = None,
                conjugators: int = 3) -> SweepResult:
    result = SweepResult(f"cross-check degree={G.degree} p={p}")
    ctx = validate(G, H, p)
    scenarios = scenarios if scenarios is not None else standard_scenarios(ctx)
    params = {"degree": G.degree, "order": G.order, "p": p}
    for sc in scenarios:
        problems = route_check(ctx, sc)
        result.add({**params, "scenario": sc.mode}, not problems, "; ".join(problems))
    # larger scenarios never enlarge the p-part
    parts = [p_part_L1(ctx, sc).order for sc in scenarios]
    mono = all(parts[i] >= parts[i + 1] for i in range(len(parts) - 1))
    result.add({**params, "check": "monotonicity"}, mono, "" if mono else f"p-part orders {parts}")
    base = full_report(G, H, p, scenarios[0])
    outside = [g for g in G.elements if g not in H][:conjugators]
    for g in outside:
        Hg = conjugate_subgroup(g, H)
        other = full_report(G, Hg, p, scenarios[0])
        same = (other.p_part, other.prime_to_p, other.m_tilde_size) == (base.p_part, base.prime_to_p, base.m_tilde_size)
        result.add({**params, "check": "conjugation"}, same, "" if same else "report changed under conjugation")
    problems = sbsd_checks(ctx)
    result.add({**params, "check": "sylow-facts"}, not problems, "; ".join(problems))
    if negative_control_applies(ctx):
        abc = check_abc(ctx)
        ok = not abc.all and not base.p_part.divisors
        result.add({**params, "check": "negative-control"}, ok, "" if ok else "conditions hold despite gcd bounds")
    return result


def route_grid(max_degree: int = 65) -> list[tuple[int, int]]:
    cells = []
    for p in range(2, max_degree + 1):
        for ell in range(3, max_degree // 2 + 1):
            if is_prime(p) and is_prime(ell) and p != ell and (p * p - 1) % ell == 0 and p * ell <= max_degree:
                cells.append((p, ell))
    return cells


def route_agreement_sweep(cells: list[tuple[int, int]]) -> SweepResult:
    """L1 = L2 and the closed form for every pair built from C_ell and D_ell data over F_p.

    Also records the negative control for every context whose gcd bounds apply.
    """
    result = SweepResult("route-agreement")
    for p, ell in cells:
        sources = [(f"C{ell}", cyclic_group(ell))]
        if p != 2:
            sources.append((f"D{ell}", dihedral_group(ell)))
        for member in semidirect_family(p, sources):
            _route_cell(result, member, p, {"p": p, "ell": ell})
    return result


def negative_control_sweep(primes: Iterable[int]) -> SweepResult:
    """Degree-4p pairs from the transitive groups of degree 4, plus the gcd-bounded controls."""
    result = SweepResult("negative-control")
    for p in primes:
        sources = [(name, G4) for name, G4 in sorted(degree_four_groups().items())]
        for member in semidirect_family(p, sources, point_stabilizer_filter):
            _route_cell(result, member, p, {"p": p, "n": 4})
    return result


def _route_cell(result: SweepResult, member: FamilyMember, p: int, params: dict) -> None:
    params = {**params, **member.describe()}
    try:
        ctx = validate(member.G, member.H, p)
    except ValidationError as exc:
        result.add(params, False, f"built pair failed validation: {exc}")
        return
    problems = []
    for sc in standard_scenarios(ctx):
        problems += [f"{sc.mode}: {x}" for x in route_check(ctx, sc)]
    if negative_control_applies(ctx):
        params["negative_control"] = True
        if check_abc(ctx).all or p_part_L1(ctx, Scenario.generic()).divisors:
            problems.append("negative control violated")
    result.add(params, not problems, "; ".join(problems),
               None if not problems else _witness(member.rep, line=list(member.line.vector)))


# ---------------------------------------------------------------- tables


def _report_row(report, **extra) -> dict:
    row = {
        "p": report.p,
        "degree": report.degree,
        "order": report.group_order,
        "sylow_rank": report.rank,
        "abc": report.abc.all,
        "p_part": report.p_part.to_list(),
        "prime_to_p": report.prime_to_p.to_list() if report.prime_to_p is not None
        else {"unknown": report.unknown_reason},
        "total": report.total.to_list() if report.total is not None else None,
        "case": report.case_label,
    }
    row["nontrivial"] = bool(report.p_part.divisors) or bool(report.total and report.total.divisors)
    row.update(extra)
    return row


def table_primes(degree: int) -> list[int]:
    return [p for p in range(2, degree + 1) if is_prime(p) and degree % p == 0 and degree % (p * p)]


def degree_table(degree: int) -> dict:
    """Reports for every pair built from F_p^2 x| G' with G' transitive of degree d/p.

    Rows with the same isomorphism-invariant fingerprint and verdict are merged;
    primes whose G' family is not covered are listed under ``gaps``.
    """
    rows: dict = {}
    gaps = []
    for p in table_primes(degree):
        n = degree // p
        try:
            sources = transitive_sources(n)
        except ValueError as exc:
            gaps.append({"p": p, "reason": str(exc)})
            continue
        for member in semidirect_family(p, sources, point_stabilizer_filter):
            report = full_report(member.G, member.H, p)
            key = (
                p,
                member.G.order,
                tuple(sorted(element_order_counts(member.G).items())),
                tuple(sorted(element_order_counts(member.H).items())),
                tuple(report.total.divisors) if report.total is not None else None,
            )
            if key in rows:
                rows[key]["constructions"] += 1
                continue
            rows[key] = _report_row(report, source=member.source_name, constructions=1, example=member.describe())
    ordered = [rows[k] for k in sorted(rows, key=lambda k: (k[0], k[1], str(k)))]
    return {"degree": degree, "rows": ordered, "gaps": gaps}


def external_table(degree: int, pairs: list[tuple[GroupTable, GroupTable]], names: list[str]) -> dict:
    """Reports for externally supplied transitive groups of the given degree."""
    rows = []
    for name, (G, H) in zip(names, pairs):
        if G.degree != degree:
            rows.append({"name": name, "skipped": f"degree {G.degree}"})
            continue
        for p in table_primes(degree):
            try:
                report = full_report(G, H, p)
            except ValidationError as exc:
                rows.append({"name": name, "p": p, "valid": False, "failures": exc.failures})
                continue
            rows.append(_report_row(report, name=name, valid=True))
    return {"degree": degree, "rows": rows, "gaps": []}
