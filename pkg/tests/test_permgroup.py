from collections import Counter
from math import prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from normknot.catalog import alpha, beta
from normknot.permgroup import (
    GroupError,
    abelian_invariants,
    centralizer,
    commutator,
    compose,
    conjugacy_class_of_subgroup,
    conjugate,
    conjugate_subgroup,
    coset_action,
    cyclic_group,
    degree_four_groups,
    dihedral_group,
    double_coset_sizes,
    double_cosets,
    from_cycles,
    from_elements,
    generate,
    group_cap,
    group_from_json,
    identity,
    intersection,
    inverse,
    is_normal,
    is_transitive,
    normal_closure,
    normal_core,
    normalizer,
    orbit_and_stabilizer,
    perm_order,
    power,
    sylow,
    trivial_group,
)

from .strategies import perms, small_groups

A4 = generate([from_cycles([[0, 1], [2, 3]], 4), from_cycles([[0, 1, 2]], 4)], 4)
S3 = generate([from_cycles([[0, 1, 2]], 3), from_cycles([[0, 1]], 3)], 3)


def direct_product(*orders):
    """C_n1 x C_n2 x ... acting on disjoint blocks."""
    degree = sum(orders)
    gens, start = [], 0
    for n in orders:
        gens.append(from_cycles([list(range(start, start + n))], degree))
        start += n
    return generate(gens, degree)


# ------------------------------------------------------------------ examples


def test_generate_examples():
    assert generate([from_cycles([[0, 1, 2]], 3)], 3).order == 3
    assert A4.order == 12
    assert beta(5, 3).G.order == 75


def test_orbit_stabilizer_examples():
    orbit, stab = orbit_and_stabilizer(A4, 0)
    assert len(orbit) == 4 and stab.order == 3
    triv = trivial_group(5)
    orbit, stab = orbit_and_stabilizer(triv, 0)
    assert orbit == (0,) and stab == triv
    c = alpha(7, 3, 2)
    assert c.degree == 21 and orbit_and_stabilizer(c.G, 0)[1].order == 7


def test_normal_core_examples():
    V4 = sylow(A4, 2)
    assert normal_core(A4, V4) == V4
    c = beta(2, 3)
    assert c.H.order == 2 and normal_core(c.G, c.H).order == 1
    C6 = cyclic_group(6)
    C2 = generate([power(C6.generators[0], 3)], 6)
    assert normal_core(C6, C2) == C2


def test_sylow_examples():
    assert sylow(A4, 2).order == 4 and is_normal(A4, sylow(A4, 2))
    assert sylow(A4, 3).order == 3 and not is_normal(A4, sylow(A4, 3))
    G = beta(5, 3).G
    S = sylow(G, 5)
    assert S.order == 25 and is_normal(G, S)


def test_normalizer_centralizer_examples():
    C6 = cyclic_group(6)
    K = generate([power(C6.generators[0], 2)], 6)
    assert normalizer(C6, K) == C6 and centralizer(C6, K) == C6
    K = generate([from_cycles([[0, 1], [2, 3]], 4)], 4)
    assert normalizer(A4, K).order == 4 and centralizer(A4, K).order == 4
    K = generate([from_cycles([[0, 1]], 3)], 3)
    assert normalizer(S3, K) == K and centralizer(S3, K) == K


def test_commutator_examples():
    C6 = cyclic_group(6)
    assert commutator(C6, C6, C6).order == 1
    assert commutator(A4, A4, A4) == sylow(A4, 2)
    assert commutator(S3, S3, S3).order == 3


def test_coset_action_examples():
    action = coset_action(A4, A4)
    assert action.degree == 1 and action.kernel == A4
    c = beta(5, 3)
    action = coset_action(c.G, c.H)
    assert action.degree == 15 and action.kernel.order == 1 and is_transitive(action.image)


def test_double_coset_examples():
    assert double_cosets(A4, A4, sylow(A4, 3)) == [A4.identity]
    triv = trivial_group(4)
    assert len(double_cosets(triv, A4, triv)) == 12
    c = beta(5, 3)
    S = sylow(c.G, 5)
    D = intersection(S, c.H)
    HS = generate(list(c.H.generators) + list(S.generators), c.degree)
    # D lies in the normal subgroup HS = S, so every class is a single coset of S
    assert D.order == 5 and HS.order == 25
    assert double_coset_sizes(D, c.G, HS) == [25, 25, 25]


def test_abelian_invariants_examples():
    assert abelian_invariants(cyclic_group(6)) == [6]
    assert abelian_invariants(sylow(A4, 2)) == [2, 2]
    assert abelian_invariants(sylow(beta(5, 3).G, 5)) == [5, 5]
    with pytest.raises(GroupError):
        abelian_invariants(A4)


def test_degree_four_groups():
    orders = {name: G.order for name, G in degree_four_groups().items()}
    assert orders == {"C4": 4, "V4": 4, "D4": 8, "A4": 12, "S4": 24}
    assert all(is_transitive(G) for G in degree_four_groups().values())


def test_dihedral_group():
    D5 = dihedral_group(5)
    assert D5.order == 10 and not D5.is_abelian()
    assert Counter(perm_order(x) for x in D5.elements) == {1: 1, 2: 5, 5: 4}


def test_bad_input():
    with pytest.raises(GroupError):
        generate([(0, 0, 1)], 3)
    with pytest.raises(GroupError):
        from_elements([identity(3), from_cycles([[0, 1, 2]], 3)], 3)
    with pytest.raises(GroupError):
        group_from_json({"degree": 3})


def test_cap(monkeypatch):
    monkeypatch.setenv("NORMKNOT_GROUP_CAP", "10")
    assert group_cap() == 10
    with pytest.raises(GroupError):
        generate(A4.generators, 4)


def test_json_round_trip():
    obj = A4.to_json()
    assert obj["generators"][0] == [x + 1 for x in A4.generators[0]]
    assert group_from_json(obj) == A4


# ------------------------------------------------------------------ properties


@given(perms(6), perms(6), perms(6))
def test_compose_associative_and_inverse(a, b, c):
    assert compose(compose(a, b), c) == compose(a, compose(b, c))
    assert compose(a, inverse(a)) == identity(6)
    # b is applied first
    assert compose(a, b)[0] == a[b[0]]


@given(small_groups())
def test_orbit_stabilizer_theorem(G):
    for point in range(G.degree):
        orbit, stab = orbit_and_stabilizer(G, point)
        assert len(orbit) * stab.order == G.order


@given(small_groups(), st.data())
def test_subgroup_lattice_facts(G, data):
    x = data.draw(st.sampled_from(G.elements))
    K = generate([x], G.degree)
    assert G.order % K.order == 0
    core = normal_core(G, K)
    assert core.is_subgroup_of(K) and is_normal(G, core)
    closure = normal_closure(G, K.generators, G.generators)
    assert K.is_subgroup_of(closure) and is_normal(G, closure)
    N = normalizer(G, K)
    assert centralizer(G, K).is_subgroup_of(N) and is_normal(N, K)
    conj = conjugacy_class_of_subgroup(G, K)
    assert len(conj) == G.order // N.order
    assert set(conj) == {conjugate_subgroup(g, K) for g in G.elements}


@given(small_groups(), st.data())
def test_double_cosets_partition(G, data):
    D = generate([data.draw(st.sampled_from(G.elements))], G.degree)
    H = generate([data.draw(st.sampled_from(G.elements))], G.degree)
    reps = double_cosets(D, G, H)
    sizes = double_coset_sizes(D, G, H)
    assert sum(sizes) == G.order
    assert reps == sorted(reps)
    for g, size in zip(reps, sizes):
        cls = {compose(compose(d, g), h) for d in D.elements for h in H.elements}
        assert min(cls) == g and len(cls) == size
        # |DgH| = |D||H| / |D n gHg^-1|
        assert size * intersection(D, conjugate_subgroup(g, H)).order == D.order * H.order


@given(small_groups(), st.data())
def test_coset_action_is_homomorphism(G, data):
    H = generate([data.draw(st.sampled_from(G.elements))], G.degree)
    action = coset_action(G, H)
    assert action.degree * H.order == G.order
    assert action.coset_of(G.identity) == 0
    assert action.kernel == normal_core(G, H)
    a, b = data.draw(st.sampled_from(G.elements)), data.draw(st.sampled_from(G.elements))
    assert action.act(compose(a, b)) == compose(action.act(a), action.act(b))
    assert action.image.order * action.kernel.order == G.order


@given(small_groups(), st.sampled_from([2, 3, 5]))
def test_sylow_order(G, p):
    S = sylow(G, p)
    k = 1
    while G.order % (k * p) == 0:
        k *= p
    assert S.order == k
    assert is_normal(G, S) == (len(conjugacy_class_of_subgroup(G, S)) == 1)


@given(st.lists(st.integers(2, 6), min_size=1, max_size=3))
def test_abelian_invariants_of_products(orders):
    G = direct_product(*orders)
    inv = abelian_invariants(G)
    assert prod(inv) == G.order
    assert all(b % a == 0 for a, b in zip(inv, inv[1:]))
    assert max(inv) == max(perm_order(x) for x in G.elements)


@given(small_groups(), st.data())
def test_conjugate_matches_definition(G, data):
    g, x = data.draw(st.sampled_from(G.elements)), data.draw(st.sampled_from(G.elements))
    assert conjugate(g, x) == compose(compose(g, x), inverse(g))
