"""The obstruction group for transitive pairs (G, H) with a normal Sylow p-subgroup.

Everything is computed on the group side: Sha^2_D(G, J_{G/H}) for an
admissible set D of decomposition groups. The p-primary part is zero unless
S_p = (C_p)^2 with [S_p, G] = S_p and N_G(S_p n H) = Z_G(S_p n H); it is
computed three ways:

* L1, the criterion itself;
* L2, the order |M~| / (|(S_p/[S_p,G])^v| |(S_p/[S_p,HS_p](S_p n H))^v|);
* L3, the character subgroup M~ cut out by double-coset restriction
  conditions, compared against its closed form when that applies.

The prime-to-p part is read off the quotient action on G/HS_p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .finabelian import FinAbelian, biquadratic_sha, merge
from .gl2rep import discrete_log, is_prime, mat_mul, matrix_closure, root_of_unity
from .permgroup import (
    CosetAction,
    GroupTable,
    Perm,
    abelian_invariants,
    centralizer,
    commutator,
    compose,
    conjugacy_class_of_subgroup,
    conjugate,
    coset_action,
    double_cosets,
    generate,
    intersection,
    inverse,
    is_normal,
    is_transitive,
    normal_core,
    normalizer,
    orbit_and_stabilizer,
    perm_order,
    product_subgroup,
    subgroup,
    sylow,
    trivial_group,
)


class ValidationError(ValueError):
    """The pair does not meet the hypotheses; ``failures`` lists each broken one."""

    def __init__(self, failures: list[str]):
        super().__init__("; ".join(failures))
        self.failures = failures


# ------------------------------------------------------------------- scenarios


@dataclass(frozen=True)
class Scenario:
    """GENERIC (all decomposition groups cyclic) or EXPLICIT generator sets.

    Explicit members are closed under conjugation and joined with all cyclic
    subgroups before use.
    """

    subgroups: tuple[tuple[Perm, ...], ...] = ()
    explicit: bool = False

    @classmethod
    def generic(cls) -> "Scenario":
        return cls()

    @classmethod
    def of(cls, subgroups: Iterable[Iterable[Sequence[int]]]) -> "Scenario":
        return cls(tuple(tuple(tuple(g) for g in gens) for gens in subgroups), True)

    @property
    def mode(self) -> str:
        return "EXPLICIT" if self.explicit else "GENERIC"


@dataclass(frozen=True)
class ClosedScenario:
    """Admissible set on a fixed group: every cyclic subgroup plus ``noncyclic`` (conjugation-closed)."""

    group: GroupTable
    noncyclic: tuple[GroupTable, ...]

    def contains(self, K: GroupTable) -> bool:
        """Whether some member contains K."""
        if K.is_cyclic():
            return True
        return any(K.is_subgroup_of(D) for D in self.noncyclic)


def _canonical(groups: Iterable[GroupTable]) -> tuple[GroupTable, ...]:
    return tuple(sorted(set(groups), key=lambda D: (D.order, D.elements)))


def close_scenario(G: GroupTable, scenario: Scenario | ClosedScenario) -> ClosedScenario:
    if isinstance(scenario, ClosedScenario):
        if scenario.group != G:
            raise ValueError("closed scenario belongs to a different group")
        return scenario
    members: set[GroupTable] = set()
    for gens in scenario.subgroups:
        D = subgroup(G, gens)
        if D.is_cyclic():
            continue
        members.update(conjugacy_class_of_subgroup(G, D))
    return ClosedScenario(G, _canonical(members))


def push_scenario(closed: ClosedScenario, action: CosetAction) -> ClosedScenario:
    """Images D -> image of D under the action; cyclic images are implicit."""
    images = set()
    for D in closed.noncyclic:
        E = action.image_of(D)
        if not E.is_cyclic():
            images.add(E)
    return ClosedScenario(action.image, _canonical(images))


# --------------------------------------------------------------- validation


@dataclass(frozen=True)
class Context:
    G: GroupTable
    H: GroupTable
    p: int
    degree: int
    sylow: GroupTable
    rank: int
    HS: GroupTable
    SH: GroupTable

    @property
    def n(self) -> int:
        """(G:H)/p."""
        return self.degree // self.p


def validate(G: GroupTable, H: GroupTable, p: int) -> Context:
    failures: list[str] = []
    if not is_prime(p):
        raise ValidationError([f"{p} is not prime"])
    if not H.is_subgroup_of(G):
        raise ValidationError(["H is not a subgroup of G"])
    index = G.order // H.order
    if not is_transitive(G):
        failures.append("G is not transitive")
    if index != G.degree:
        failures.append(f"(G:H) = {index} differs from the degree {G.degree}")
    if normal_core(G, H).order != 1:
        failures.append("H has a nontrivial normal core in G")
    if index % p or index % (p * p) == 0:
        failures.append(f"(G:H) = {index} is not in {p}Z minus {p * p}Z")
    S = sylow(G, p)
    if not is_normal(G, S):
        failures.append(f"the Sylow {p}-subgroup is not normal")
    if failures:
        raise ValidationError(failures)
    invariants = abelian_invariants(S) if S.is_abelian() else None
    if invariants is None or any(d != p for d in invariants):  # pragma: no cover
        raise AssertionError("normal Sylow subgroup of a valid pair must be elementary abelian")
    HS = product_subgroup(G, H, S)
    SH = intersection(S, H)
    return Context(G, H, p, index, S, len(invariants), HS, SH)


# ------------------------------------------------------------ conditions (a)(b)(c)


@dataclass(frozen=True)
class AbcReport:
    a: bool
    b: bool
    c: bool
    sylow_rank: int

    @property
    def all(self) -> bool:
        return self.a and self.b and self.c

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c}


def check_abc(ctx: Context) -> AbcReport:
    G, S, SH = ctx.G, ctx.sylow, ctx.SH
    a = ctx.rank == 2
    b = commutator(G, S, G) == S
    c = normalizer(G, SH) == centralizer(G, SH)
    return AbcReport(a, b, c, ctx.rank)


# ------------------------------------------------------------------ characters


@dataclass(frozen=True)
class SylowCoordinates:
    """S_p = (C_p)^m identified with F_p^m through a canonical basis."""

    p: int
    basis: tuple[Perm, ...]
    coords: dict = field(repr=False)

    @classmethod
    def of(cls, S: GroupTable, p: int) -> "SylowCoordinates":
        basis: list[Perm] = []
        span: dict[Perm, tuple[int, ...]] = {S.identity: ()}
        for x in S.elements:
            if x in span:
                continue
            new: dict[Perm, tuple[int, ...]] = {}
            for y, cy in span.items():
                z = y
                for k in range(p):
                    new[z] = cy + (k,)
                    z = compose(x, z)
            basis.append(x)
            span = new
        return cls(p, tuple(basis), span)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def functionals(self) -> list[tuple[int, ...]]:
        return list(product(range(self.p), repeat=self.rank))

    def evaluate(self, f: Sequence[int], x: Perm) -> int:
        return sum(a * b for a, b in zip(f, self.coords[x])) % self.p

    def annihilator(self, N: GroupTable) -> list[tuple[int, ...]]:
        """Functionals vanishing on N, i.e. (S_p/N)^v."""
        return [f for f in self.functionals() if all(self.evaluate(f, x) == 0 for x in N.generators)]


def _d_sp_h(ctx: Context, closed: ClosedScenario) -> list[GroupTable]:
    """Nontrivial members of D_{S_p,H}, one per G-conjugacy class."""
    S = ctx.sylow
    candidates: list[GroupTable] = [C for C in _cyclic_subgroups(ctx.SH) if C.order > 1]
    for D in closed.noncyclic:
        E = intersection(D, S)
        if E.order > 1:
            candidates.append(E)
    kept: list[GroupTable] = []
    classes: set[GroupTable] = set()
    for D in _canonical(candidates):
        if D in classes:
            continue
        kept.append(D)
        classes.update(conjugacy_class_of_subgroup(ctx.G, D))
    return kept


def _cyclic_subgroups(A: GroupTable) -> list[GroupTable]:
    seen = {}
    for x in A.elements:
        C = generate([x], A.degree)
        seen[C] = None
    return list(seen)


def m_tilde_L3(ctx: Context, scenario: Scenario | ClosedScenario) -> list[tuple[int, ...]]:
    """Characters f of S_p killing [S_p, HS_p] whose conjugate restrictions lie in Delta_D + I_D.

    For each D the tuple (f(g^-1 d g))_g over g in R(D, HS_p) must agree, on
    every D n g(S_p n H)g^-1, with a single character chi of D.
    """
    G, S, p = ctx.G, ctx.sylow, ctx.p
    closed = close_scenario(G, scenario)
    coords = SylowCoordinates.of(S, p)
    survivors = coords.annihilator(commutator(G, S, ctx.HS))
    for D in _d_sp_h(ctx, closed):
        reps = double_cosets(D, G, ctx.HS)
        # per representative: pairs (x, g^-1 x g) for x in D n g(S_p n H)g^-1
        checks: list[list[tuple[Perm, Perm]]] = []
        for g in reps:
            gi = inverse(g)
            K = [x for x in D.elements if conjugate(gi, x) in ctx.SH]
            checks.append([(x, conjugate(gi, x)) for x in K])
        d_chars = {tuple(coords.evaluate(f, x) for x in D.elements): f for f in coords.functionals()}
        chi_list = sorted(d_chars.values())
        kept = []
        for f in survivors:
            if any(
                all(coords.evaluate(f, y) == coords.evaluate(chi, x) for pairs in checks for x, y in pairs)
                for chi in chi_list
            ):
                kept.append(f)
        survivors = kept
    return survivors


def closed_form_size(ctx: Context) -> int:
    """|(S_p / [S_p,HS_p][S_p n H, N_G(S_p n H)])^v|."""
    G, S = ctx.G, ctx.sylow
    N1 = commutator(G, S, ctx.HS)
    N2 = commutator(G, ctx.SH, normalizer(G, ctx.SH))
    return S.order // product_subgroup(G, N1, N2).order


def closed_form_applies(ctx: Context, scenario: Scenario | ClosedScenario) -> bool:
    """True when D_{S_p,H} consists of cyclic subgroups of S_p n H only."""
    closed = close_scenario(ctx.G, scenario)
    for D in closed.noncyclic:
        E = intersection(D, ctx.sylow)
        if not E.is_subgroup_of(ctx.SH) or not E.is_cyclic():
            return False
    return True


# ------------------------------------------------------------------ p-part routes


def p_part_L1(ctx: Context, scenario: Scenario | ClosedScenario) -> FinAbelian:
    closed = close_scenario(ctx.G, scenario)
    if not check_abc(ctx).all:
        return FinAbelian()
    if closed.contains(ctx.sylow):
        return FinAbelian()
    return FinAbelian((ctx.p,))


class InternalError(AssertionError):
    """A cross-route identity failed; indicates a bug, not bad input."""


def p_part_L2(ctx: Context, scenario: Scenario | ClosedScenario, m_tilde: Sequence | None = None) -> FinAbelian:
    if ctx.rank != 2:
        raise ValueError("the exact-sequence route needs a Sylow subgroup of rank 2")
    closed = close_scenario(ctx.G, scenario)
    if closed.contains(ctx.sylow):
        return FinAbelian()
    G, S, p = ctx.G, ctx.sylow, ctx.p
    if m_tilde is None:
        m_tilde = m_tilde_L3(ctx, closed)
    dual_b = S.order // commutator(G, S, G).order
    dual_c = S.order // product_subgroup(G, commutator(G, S, ctx.HS), ctx.SH).order
    num, den = len(m_tilde), dual_b * dual_c
    if num % den:
        raise InternalError(f"|M~| = {num} is not divisible by {den}")
    size = num // den
    if size not in (1, p):
        raise InternalError(f"p-part of order {size}, expected 1 or {p}")
    return FinAbelian((size,)) if size > 1 else FinAbelian()


# ---------------------------------------------------------------- prime-to-p part


@dataclass(frozen=True)
class PrimeToP:
    value: FinAbelian | None
    reason: str
    label: str | None = None


def _has_klein_four(D: GroupTable) -> bool:
    invs = [x for x in D.elements if perm_order(x) == 2]
    return any(compose(a, b) == compose(b, a) for i, a in enumerate(invs) for b in invs[i + 1:])


def _prime_divisors(n: int) -> list[int]:
    return [q for q in range(2, n + 1) if n % q == 0 and is_prime(q)]


def quotient_pair(ctx: Context) -> tuple[CosetAction, GroupTable, GroupTable]:
    """Faithful image of G on G/HS_p and its point stabilizer (image of HS_p)."""
    action = coset_action(ctx.G, ctx.HS)
    Gb = action.image
    _, Hb = orbit_and_stabilizer(Gb, 0)
    return action, Gb, Hb


def prime_to_p_part(ctx: Context, scenario: Scenario | ClosedScenario, _depth: int = 0) -> PrimeToP:
    closed = close_scenario(ctx.G, scenario)
    action, Gb, Hb = quotient_pair(ctx)
    pushed = push_scenario(closed, action)
    d = Gb.degree
    if d == 1:
        return PrimeToP(FinAbelian(), "trivial quotient")
    if is_prime(d):
        return PrimeToP(FinAbelian(), "quotient of prime degree")
    if d == 4:
        if Gb.order == 4 and not Gb.is_cyclic():
            label = "quotient-(C2)^2"
        elif Gb.order == 12:
            label = "quotient-A4"
        else:
            return PrimeToP(FinAbelian(), "degree-4 quotient not isomorphic to (C2)^2 or A4")
        if any(_has_klein_four(D) for D in pushed.noncyclic):
            return PrimeToP(FinAbelian(), "a decomposition group contains (C2)^2", label)
        return PrimeToP(FinAbelian((2,)), "degree-4 quotient (C2)^2 or A4", label)
    if any(D == Gb for D in pushed.noncyclic):
        return PrimeToP(FinAbelian(), "a decomposition group is the whole quotient")
    if Hb.order == 1 and Gb.is_abelian():
        invariants = abelian_invariants(Gb)
        if len(invariants) <= 2 and not pushed.noncyclic:
            if len(invariants) < 2:
                return PrimeToP(FinAbelian(), "cyclic quotient")
            return PrimeToP(biquadratic_sha(*invariants), "bicyclic quotient, cyclic decomposition groups")
    for q in _prime_divisors(d):
        if d % (q * q) == 0:
            continue
        if is_normal(Gb, sylow(Gb, q)):
            sub = full_report(Gb, Hb, q, pushed, _depth=_depth + 1)
            if sub.total is None:
                return PrimeToP(None, f"recursion at q={q}: {sub.unknown_reason}")
            return PrimeToP(sub.total, f"recursion on the quotient at q={q}")
    return PrimeToP(None, f"quotient of degree {d} and order {Gb.order} is outside the supported classes")


# ------------------------------------------------------------------ classify


def find_complement(ctx: Context) -> GroupTable:
    """A complement to S_p, grown greedily from p'-elements in canonical order."""
    G, p = ctx.G, ctx.p
    target = G.order // ctx.sylow.order
    K = trivial_group(G.degree)
    while K.order < target:
        for x in G.elements:
            if x in K or perm_order(x) % p == 0:
                continue
            J = generate(list(K.generators) + [x], G.degree)
            if J.order % p:
                K = J
                break
        else:  # pragma: no cover - Schur-Zassenhaus
            raise AssertionError("no complement found")
    return K


def action_matrices(ctx: Context, K: GroupTable) -> list[tuple[int, int, int, int]]:
    """Matrices of x -> k x k^-1 on S_p = F_p^2 for the generators of K."""
    coords = SylowCoordinates.of(ctx.sylow, ctx.p)
    b1, b2 = coords.basis
    mats = []
    for k in K.generators:
        c1 = coords.coords[conjugate(k, b1)]
        c2 = coords.coords[conjugate(k, b2)]
        mats.append((c1[0], c2[0], c1[1], c2[1]))
    return mats


def _roots(t: int, d: int, p: int) -> list[int]:
    return [x for x in range(p) if (x * x - t * x + d) % p == 0]


def classify(ctx: Context) -> str:
    """Which family the action of a complement on S_p belongs to."""
    if not check_abc(ctx).all:
        raise ValueError("classification needs conditions (a), (b) and (c)")
    p = ctx.p
    if ctx.n == 4:
        return "c4"
    K = find_complement(ctx)
    mats = action_matrices(ctx, K)
    image = matrix_closure(mats, p)
    if any(mat_mul(x, y, p) != mat_mul(y, x, p) for x in mats for y in mats):
        return "gamma"
    order = len(image)
    gen = next(x for x in sorted(image) if _mat_order(x, p) == order)
    a, b, c, d = gen
    roots = _roots((a + d) % p, (a * d - b * c) % p, p)
    if not roots:
        return "beta"
    if order == 4:
        return "c4"
    if not is_prime(order):
        return f"cyclic-split({order})"
    lam1, lam2 = (roots[0], roots[-1])
    zeta = root_of_unity(p, order)
    j1, j2 = discrete_log(lam1, zeta, p) % order, discrete_log(lam2, zeta, p) % order
    m1 = (j2 * pow(j1, -1, order)) % order
    m2 = (j1 * pow(j2, -1, order)) % order
    return f"alpha({min(m1, m2)})"


def _mat_order(x: tuple[int, int, int, int], p: int) -> int:
    from .gl2rep import mat_order

    return mat_order(x, p)


# ------------------------------------------------------------------ full report


@dataclass(frozen=True)
class ShaReport:
    p: int
    degree: int
    group_order: int
    sylow_order: int
    sylow_normal: bool
    rank: int
    abc: AbcReport
    p_part: FinAbelian
    prime_to_p: FinAbelian | None
    unknown_reason: str | None
    total: FinAbelian | None
    case_label: str
    route_L1: FinAbelian
    route_L2: FinAbelian | None
    m_tilde_size: int | None
    closed_form: int | None
    prime_to_p_reason: str
    scenario_mode: str = "GENERIC"

    @property
    def routes_agree(self) -> bool:
        if self.route_L2 is not None and self.route_L2 != self.route_L1:
            return False
        if self.closed_form is not None and self.m_tilde_size is not None:
            return self.closed_form == self.m_tilde_size
        return True

    def to_json(self) -> dict:
        return {
            "valid": True,
            "p": self.p,
            "degree": self.degree,
            "group_order": self.group_order,
            "scenario": self.scenario_mode,
            "sylow": {"order": self.sylow_order, "normal": self.sylow_normal, "rank": self.rank},
            "abc": self.abc.to_json(),
            "p_part": self.p_part.to_list(),
            "prime_to_p": (
                self.prime_to_p.to_list() if self.prime_to_p is not None else {"unknown": self.unknown_reason}
            ),
            "prime_to_p_reason": self.prime_to_p_reason,
            "total": self.total.to_list() if self.total is not None else None,
            "case": self.case_label,
            "routes": {
                "L1": self.route_L1.to_list(),
                "L2": self.route_L2.to_list() if self.route_L2 is not None else None,
                "L3_size": self.m_tilde_size,
                "L3_closed_form": self.closed_form,
                "agree": self.routes_agree,
            },
        }


MAX_DEPTH = 8


def full_report(
    G: GroupTable,
    H: GroupTable,
    p: int,
    scenario: Scenario | ClosedScenario | None = None,
    _depth: int = 0,
) -> ShaReport:
    if _depth > MAX_DEPTH:  # pragma: no cover - each step shrinks the degree
        raise InternalError("prime-to-p recursion too deep")
    ctx = validate(G, H, p)
    if scenario is None:
        scenario = Scenario.generic()
    mode = scenario.mode if isinstance(scenario, Scenario) else "EXPLICIT"
    closed = close_scenario(G, scenario)
    abc = check_abc(ctx)
    L1 = p_part_L1(ctx, closed)
    L2 = size = cf = None
    if ctx.rank == 2:
        mt = m_tilde_L3(ctx, closed)
        size = len(mt)
        L2 = p_part_L2(ctx, closed, mt)
        if closed_form_applies(ctx, closed):
            cf = closed_form_size(ctx)
    rest = prime_to_p_part(ctx, closed, _depth)
    total = merge(L1, rest.value) if rest.value is not None else None
    if abc.all:
        label = classify(ctx)
    else:
        label = rest.label or "none"
    return ShaReport(
        p=p,
        degree=ctx.degree,
        group_order=G.order,
        sylow_order=ctx.sylow.order,
        sylow_normal=True,
        rank=ctx.rank,
        abc=abc,
        p_part=L1,
        prime_to_p=rest.value,
        unknown_reason=None if rest.value is not None else rest.reason,
        total=total,
        case_label=label,
        route_L1=L1,
        route_L2=L2,
        m_tilde_size=size,
        closed_form=cf,
        prime_to_p_reason=rest.reason,
        scenario_mode=mode,
    )
