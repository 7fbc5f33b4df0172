import pytest
from hypothesis import given
from hypothesis import strategies as st

from normknot import oracle
from normknot.gl2rep import Line, Rep2, build_rep, gl2_array, is_extremal
from normknot.permgroup import cyclic_group, degree_four_groups, dihedral_group, generate, orbit_and_stabilizer


@pytest.mark.parametrize("p, ell, count", [(2, 3, 3), (5, 3, 21), (7, 3, 171), (5, 2, 32), (13, 7, 469)])
def test_rep_counts_match_scalar_enumeration(p, ell, count):
    # count frozen from the scalar four-fold loop over GL2(F_p)
    assert oracle.count_power_one(p, ell) == count
    assert len(oracle.enumerate_reps(cyclic_group(ell), p)) == count


def test_c3_over_f5_reps_are_v_type():
    v_sigs = {build_rep("V", 5, 3, j).signature() for j in (1, 2)}
    for rep in oracle.enumerate_reps(cyclic_group(3), 5):
        if rep.images[0].entries != (1, 0, 0, 1):
            assert rep.signature() in v_sigs


def test_d3_over_f5_extremal_reps_are_w_type():
    D3 = dihedral_group(3)
    tau = generate([D3.generators[1]], 3)
    w_sigs = {build_rep("W", 5, 3, j).signature() for j in (1, 2)}
    extremal = [r for r in oracle.enumerate_reps(D3, 5) if is_extremal(r, tau).extremal]
    assert extremal and all(r.signature() in w_sigs for r in extremal)
    assert len(oracle.rep_classes(D3, 5)) == 4


def test_enumerate_rejects_bad_sources():
    with pytest.raises(ValueError):
        oracle.enumerate_reps(cyclic_group(5), 5)
    three_gens = generate([(1, 0, 2, 3, 4, 5), (0, 1, 3, 2, 4, 5), (0, 1, 2, 3, 5, 4)], 6)
    with pytest.raises(ValueError):
        oracle.enumerate_reps(three_gens, 5)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_extremal_classification_small(p):
    result = oracle.verify_extremal_classification(p, 7)
    assert result.ok, result.to_json()


def test_extremal_examples():
    # p = 7: C5 admits no extremal representation since 5 does not divide 48
    result = oracle.verify_extremal_classification(7, 5)
    c5 = [c for c in result.cells if c.params.get("source") == "C" and c.params.get("ell") == 5]
    assert c5 and all(c.ok for c in c5)
    assert all(not is_extremal(r, generate([], 5)).extremal for r in oracle.enumerate_reps(cyclic_group(5), 7))
    # p = 5, degree 4: only C4 has extremal representations
    for name, G4 in degree_four_groups().items():
        if G4.order % 5 == 0:
            continue
        stab = orbit_and_stabilizer(G4, 0)[1]
        any_ext = any(is_extremal(r, stab).extremal for r in oracle.rep_classes(G4, 5))
        assert any_ext == (name == "C4")


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_two_subgroups(p):
    assert oracle.verify_two_subgroups(p).ok


@pytest.mark.parametrize("p, ell, labels", [(2, 3, ["beta"]), (7, 3, ["alpha(2)", "gamma"]), (5, 3, ["beta", "gamma"])])
def test_plcd(p, ell, labels):
    result = oracle.verify_plcd(p, ell)
    assert result.ok, result.to_json()
    assert result.labels == labels


def test_plcd_cyclic_only_at_seven():
    # among cyclic sources only alpha(2) occurs at p = 7
    members = oracle.semidirect_family(7, [("C3", cyclic_group(3))])
    labels = set()
    for m in members:
        from normknot.sha import check_abc, classify, validate

        ctx = validate(m.G, m.H, 7)
        if check_abc(ctx).all:
            labels.add(classify(ctx))
    assert labels == {"alpha(2)"}


@pytest.mark.parametrize("p, ell", [(7, 3), (5, 3), (5, 4), (13, 3), (11, 5)])
def test_iso_lemmas(p, ell):
    result = oracle.verify_iso_lemmas(p, ell)
    assert result.cells and result.ok, result.to_json()


def test_iso_examples():
    sdpc = oracle.verify_sdpc(5, 3)
    assert sdpc.ok and len(sdpc.cells) == 2
    sdpb = oracle.verify_sdpb(7, 3, pairs=[(1, 2), (2, 1)])
    cell = next(c for c in sdpb.cells if c.params["j"] == [1, 2] and c.params["j'"] == [2, 1])
    assert cell.ok and cell.detail.startswith("m=2")
    sdcf = oracle.verify_sdpb(5, 4, 4, [(1, 2), (3, 2)])
    assert sdcf.ok


def test_sdpb_non_isomorphism_is_detected():
    p = 13
    a = oracle.AffineGroup(build_rep("U", p, 3, 1, 1))
    b = oracle.AffineGroup(build_rep("U", p, 3, 1, 2))
    gens = (((0, 0), cyclic_group(3).generators[0]), ((1, 1), (0, 1, 2)))
    assert not oracle.exhaustive_isomorphic(a, b, gens)
    assert oracle.exhaustive_isomorphic(b, b, gens)


def test_cross_check_examples():
    from normknot.catalog import beta, gamma
    from normknot.permgroup import sylow
    from normknot.sha import Scenario, full_report

    c = beta(2, 3)
    V4 = sylow(c.G, 2)
    result = oracle.cross_check(c.G, c.H, 2, [Scenario.generic(), Scenario.of([V4.generators])])
    assert result.ok
    report = full_report(c.G, c.H, 2, Scenario.of([V4.generators]))
    assert report.route_L1.to_list() == [] and report.route_L2.to_list() == []
    g = gamma(5, 3)
    assert oracle.cross_check(g.G, g.H, 5).ok
    report = full_report(g.G, g.H, 5)
    assert report.route_L1.to_list() == report.route_L2.to_list() == [5]


def test_sweep_result_reporting():
    r = oracle.SweepResult("demo")
    r.add({"p": 2}, True)
    r.add({"p": 3}, False, "broken", {"p": 3})
    doc = r.to_json()
    assert not r.ok and doc["cells"] == 2 and doc["mismatches"][0]["witness"] == {"p": 3}


def test_route_sweep_small():
    assert oracle.route_agreement_sweep([(2, 3), (5, 3)]).ok


def test_tables_small():
    doc = oracle.degree_table(10)
    assert doc["rows"] and all(row["total"] == [] for row in doc["rows"])
    assert oracle.degree_table(18)["gaps"] == [{"p": 2, "reason": "no transitive-source list for degree 9"}]


@given(st.sampled_from([5, 7]), st.data())
def test_witnesses_are_reproducible(p, data):
    rep = data.draw(st.sampled_from(oracle.enumerate_reps(dihedral_group(3), p)))
    again = Rep2(p, rep.source, rep.images)
    H = generate([rep.source.generators[1]], 3)
    assert is_extremal(again, H) == is_extremal(rep, H)


@given(st.sampled_from([5, 7, 11]), st.data())
def test_line_orbits_cover_all_lines(p, data):
    rep = data.draw(st.sampled_from(oracle.rep_classes(cyclic_group(3), p)))
    reps = oracle.line_orbit_reps(rep, sorted({Line(p, 0, 1)} | {Line(p, 1, y) for y in range(p)}))
    autos = oracle.rep_automorphisms(rep)
    assert len(autos) >= p - 1 and len(autos) <= len(gl2_array(p))
    assert 1 <= len(reps) <= p + 1
