import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sallylab.constructions import (HYPOTHESIS_FLAGS, CatalogError, ConstructionError, catalog, catalog_ids,
                                    catalog_params, fitting_ideal_I1, is_integral_over, northcott_ideal,
                                    split_in_x_yn)
from sallylab.groebner import colon, contains, ideal_equal
from sallylab.localring import local_length, quotient_length
from sallylab.poly import Polynomial

from helpers import plane, random_northcott

S = plane()


def test_split_examples():
    f = S.parse("x^4 + y^5")
    f1, f2 = split_in_x_yn(f, 3)
    assert (str(f1), str(f2)) == ("x^3", "y^2")
    with pytest.raises(ConstructionError):
        split_in_x_yn(S.parse("x + y^2"), 3)


term = st.tuples(st.integers(0, 5), st.integers(0, 6), st.integers(1, 32002))


@settings(max_examples=100)
@given(st.integers(1, 4), st.lists(term, max_size=6))
def test_split_reconstructs(n, terms):
    d = {(i, j): c for i, j, c in terms if i > 0 or j >= n}
    f = Polynomial(S.ring, d)
    f1, f2 = split_in_x_yn(f, n)
    x, y = S.ring.gens()
    assert f1 * x + f2 * y ** n == f


def test_worked_northcott_ideal():
    data = northcott_ideal("x^4+y^5", "x^2*y^2+x*y^3", 3, S)
    assert data.proper and not data.warnings
    assert str(data.c) == "32002*x*y^4 + 32002*y^5"
    assert quotient_length(data.Q, data.I, S) == 3
    assert ideal_equal(fitting_ideal_I1(data), S.ideal(["x", "y^2"]))


def test_northcott_requires_primary_q():
    with pytest.raises(ConstructionError):
        northcott_ideal("x^4", "x^2*y^2", 3, S)


def test_northcott_warns_below_expected_order():
    with pytest.warns(UserWarning):
        data = northcott_ideal("x^2+y^4", "x*y+y^3", 2, S)
    assert data.warnings


@pytest.mark.parametrize("seed", range(100))
def test_random_northcott_reconstruction(seed):
    data = random_northcott(seed)
    x, y = S.ring.gens()
    n = data.n
    assert data.a1 * x + data.a2 * y ** n == data.a
    assert data.b1 * x + data.b2 * y ** n == data.b
    # c kills (x, y^n) modulo Q
    for h in (x, y ** n):
        assert contains(data.Q, data.c * h)
    if seed < 20:
        linked = colon(data.Q, data.L)
        assert local_length(linked, S).value == local_length(data.I, S).value


def test_integrality_results():
    ex = catalog("ex2.7")
    res = is_integral_over(ex.I, ex.Q, S)
    assert res.integral and res.r == 2 and str(res) == "YES(2)"
    inst = catalog("ex3.2.4")
    res = is_integral_over(inst.I, inst.Q, S)
    assert not res.integral and str(res) == "NO_UP_TO_CAP"


def test_catalog_listing():
    assert catalog_ids() == ["ex2.7", "ex3.2.1", "ex3.2.2", "ex3.2.3", "ex3.2.4", "ex4.6"]
    assert catalog_params("ex4.6") == ("q",)
    assert catalog_params("ex2.7") == ()
    with pytest.raises(CatalogError):
        catalog_params("nope")


def test_catalog_errors():
    with pytest.raises(CatalogError):
        catalog("ex4.6")
    with pytest.raises(CatalogError):
        catalog("ex4.6", {"q": 0})
    with pytest.raises(CatalogError):
        catalog("ex2.7", {"q": 1})
    with pytest.raises(CatalogError):
        catalog("missing")


def test_catalog_instances_are_well_formed():
    for cid in catalog_ids():
        params = {p: 2 for p in catalog_params(cid)}
        inst = catalog(cid, params)
        assert inst.id == cid
        assert local_length(inst.I, inst.spec).finite
        assert inst.Q is not None and local_length(inst.Q, inst.spec).finite
        assert set(inst.flags) <= set(HYPOTHESIS_FLAGS)
        assert all(e.claim for e in inst.expected.values())


def test_example_family_lengths():
    for q in (1, 2, 3):
        inst = catalog("ex4.6", {"q": q})
        assert local_length(inst.I, inst.spec).value == (q * q + q + 20) // 2


def test_colon_examples_are_colons():
    Q = S.ideal(["x^5+y^6", "x*y^5+y^7"])
    for case in (1, 2, 3, 4):
        inst = catalog(f"ex3.2.{case}")
        assert ideal_equal(inst.I, colon(Q, S.ideal([f"x^{case + 1}", "y"])))


def test_digest_depends_on_parameters():
    a = catalog("ex4.6", {"q": 1}).digest_text()
    b = catalog("ex4.6", {"q": 2}).digest_text()
    assert a != b and a == catalog("ex4.6", {"q": 1}).digest_text()
