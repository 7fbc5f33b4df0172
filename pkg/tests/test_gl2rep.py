import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from normknot.gl2rep import (
    EXTREMAL,
    HAS_INVARIANTS,
    Line,
    Mat2,
    RepError,
    all_lines,
    build_rep,
    companion,
    companion_parameter,
    companion_traces,
    gl2_array,
    gl2_two_sylow,
    invariant_vectors,
    is_extremal,
    least_primitive_root,
    matrices_with_power_one,
    np_mul,
    rep_from_json,
    root_of_unity,
    semidirect_transitive,
    two_adic,
)
from normknot.permgroup import generate, is_transitive

from .strategies import odd_primes, primes


def brute_order(m, p):
    x, k = m, 1
    while x != (1, 0, 0, 1):
        a, b, c, d = x
        e, f, g, h = m
        x = ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)
        k += 1
    return k


# ------------------------------------------------------------------ companion traces


@pytest.mark.parametrize(
    "p, ell, traces",
    # frozen from a plain scan of t in F_p, independent of the library
    [(5, 3, (4,)), (2, 3, (1,)), (11, 3, (10,)), (13, 7, (7, 8, 10)), (19, 5, (4, 14))],
)
def test_companion_traces_frozen(p, ell, traces):
    assert companion_traces(p, ell) == traces
    for t in traces:
        assert brute_order((0, p - 1, 1, t), p) == ell


def test_companion_parameter_pins_least_trace():
    assert companion_parameter(13, 7, 1) == 7
    assert sorted({companion_parameter(13, 7, j) for j in range(1, 7)}) == [7, 8, 10]
    with pytest.raises(RepError):
        companion_parameter(7, 5, 1)
    with pytest.raises(RepError):
        companion_parameter(13, 7, 7)


@given(odd_primes, st.integers(0, 12))
def test_companion_cayley_hamilton(p, t):
    t %= p
    c = companion(p, t)
    for x in range(p):
        for y in range(p):
            cv = c.apply((x, y))
            ccv = c.apply(cv)
            assert ccv == ((t * cv[0] - x) % p, (t * cv[1] - y) % p)


# ------------------------------------------------------------------ named reps


def test_named_rep_examples():
    assert least_primitive_root(7) == 3 and root_of_unity(7, 3) == 2
    u = build_rep("U", 7, 3, 1, 2)
    assert u.images[0].entries == (2, 0, 0, 4) and u.images[0].order == 3
    v = build_rep("V", 2, 3, 1)
    assert v.images[0].entries == (0, 1, 1, 1)
    w = build_rep("W", 5, 3, 1)
    sigma, tau = w.images
    assert sigma.order == 3 and tau.entries == (0, 1, 1, 0)
    assert tau @ sigma @ tau == sigma.inverse()
    assert build_rep("U4", 5, 1, 2).images[0].order == 4


@pytest.mark.parametrize(
    "kind, params",
    [("U", (5, 3, 1, 1)), ("V", (7, 3, 1)), ("W", (3, 2, 1)), ("U4", (7, 1, 2))],
)
def test_named_rep_divisibility(kind, params):
    with pytest.raises(RepError):
        build_rep(kind, *params)


def test_mat2_rejects_singular():
    with pytest.raises(RepError):
        Mat2(5, 1, 2, 2, 4)


def test_rep_json_round_trip():
    w = build_rep("W", 7, 3, 2)
    again = rep_from_json(w.to_json())
    assert again.signature() == w.signature()


# ------------------------------------------------------------------ extremality


def test_extremal_examples():
    p = 7
    triv = generate([], 3)
    for j1 in range(3):
        for j2 in range(3):
            rep = build_rep("U", p, 3, j1, j2)
            report = is_extremal(rep, triv)
            assert report.extremal == (j1 != 0 and j2 != 0 and j1 != j2)
            if report.extremal:
                axes = {Line(p, 1, 0), Line(p, 0, 1)}
                assert set(report.special_lines) == set(all_lines(p)) - axes
    report = is_extremal(build_rep("V", 5, 3, 1), triv)
    assert report.extremal and len(report.special_lines) == 6
    w = build_rep("W", 5, 3, 1)
    report = is_extremal(w, generate([w.source.generators[1]], 3))
    assert report.special_lines == (Line(5, 1, 1),)
    c4 = generate([], 4)
    for j1 in range(4):
        for j2 in range(4):
            ok = is_extremal(build_rep("U4", 13, j1, j2), c4).extremal
            assert ok == ({j1, j2} in ({1, 2}, {3, 2}))


def test_invariants_reason():
    rep = build_rep("U", 7, 3, 0, 1)
    assert is_extremal(rep, generate([], 3)).reason == HAS_INVARIANTS
    assert len(invariant_vectors(rep)) == 7
    assert is_extremal(build_rep("U", 7, 3, 1, 2), generate([], 3)).reason == EXTREMAL


@given(odd_primes, st.integers(0, 12), st.integers(1, 12))
def test_line_normalization(p, y, s):
    s %= p
    if s == 0:
        s = 1
    assert Line(p, s, s * y) == Line(p, 1, y)
    assert len(Line(p, 1, y).points()) == p


# ------------------------------------------------------------------ semidirect products


@pytest.mark.parametrize(
    "kind, params, hprime, order, degree",
    [
        ("V", (2, 3, 1), False, 12, 6),
        ("V", (5, 3, 1), False, 75, 15),
        ("W", (5, 3, 1), True, 150, 15),
    ],
)
def test_semidirect_examples(kind, params, hprime, order, degree):
    rep = build_rep(kind, *params)
    Hp = generate([rep.source.generators[1]] if hprime else [], rep.source.degree)
    p = params[0]
    for L in all_lines(p) if not hprime else [Line(p, 1, 1)]:
        G, H = semidirect_transitive(rep, Hp, L)
        assert (G.order, G.degree) == (order, degree)
        assert is_transitive(G) and G.order // H.order == degree


def test_semidirect_requires_fixed_line():
    w = build_rep("W", 5, 3, 1)
    with pytest.raises(RepError):
        semidirect_transitive(w, generate([w.source.generators[1]], 3), Line(5, 1, 2))


# ------------------------------------------------------------------ matrix enumeration


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_gl2_array_size(p):
    M = gl2_array(p)
    assert len(M) == (p * p - 1) * (p * p - p)
    assert len({tuple(r) for r in M}) == len(M)


@given(st.sampled_from([5, 7, 11, 13]), st.sampled_from([2, 3, 4, 6]))
def test_char_poly_route_matches_full_scan(p, k):
    full = {tuple(int(x) for x in r) for r in matrices_with_power_one(p, k, full=True)}
    fast = {tuple(int(x) for x in r) for r in matrices_with_power_one(p, k, full=False)}
    assert full == fast


@given(primes, st.data())
def test_numpy_product_matches_mat2(p, data):
    M = gl2_array(p)
    i, j = data.draw(st.integers(0, len(M) - 1)), data.draw(st.integers(0, len(M) - 1))
    prod = np_mul(M[i:i + 1], M[j:j + 1], p)[0]
    expected = Mat2(p, *map(int, M[i])) @ Mat2(p, *map(int, M[j]))
    assert tuple(int(x) for x in prod) == expected.entries


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_two_sylow_order(p):
    P = gl2_two_sylow(p)
    assert len(P) == 2 ** two_adic((p * p - 1) * (p * p - p))


@given(st.sampled_from([5, 7, 13]), st.data())
def test_signature_is_conjugation_invariant(p, data):
    rep = build_rep("W", p, 3, 1)
    M = gl2_array(p)
    A = Mat2(p, *map(int, M[data.draw(st.integers(0, len(M) - 1))]))
    assert rep.conjugated(A).signature() == rep.signature()
    assert np.array_equal(np.array(rep.signature()), np.array(rep.conjugated(A).signature()))
