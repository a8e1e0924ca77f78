import json
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sallylab.config import Config
from sallylab.constructions import catalog
from sallylab.groebner import Ideal, ideal_power, ideal_product
from sallylab.invariants import (NOT_FOUND, FitError, InstanceInvariants, buchsbaum_invariant,
                                 find_minimal_reduction, fit_binomial, fiber_multiplicity,
                                 hilbert_coefficients, hilbert_coefficients_of, hilbert_samuel_table,
                                 is_reduction, sally_fiber_lengths, sally_multiplicity)
from sallylab.localring import local_length, power_of_maximal_ideal
from sallylab.poly import Polynomial

from helpers import brute_length, plane

S = plane()


def binomial_values(coeffs, k, ns):
    return [(n, sum((-1) ** i * c * comb(n + k - i, k - i) for i, c in enumerate(coeffs))) for n in ns]


# fits ---------------------------------------------------------------------------

@given(st.integers(0, 3), st.data())
def test_fit_recovers_coefficients(k, data):
    coeffs = tuple(data.draw(st.lists(st.integers(-50, 50), min_size=k + 1, max_size=k + 1)))
    pts = binomial_values(coeffs, k, range(0, k + 6))
    assert fit_binomial(pts, k) == coeffs


def test_fit_ignores_a_non_polynomial_prefix():
    pts = [(0, 99), (1, -7)] + binomial_values((5, 2, 1), 2, range(2, 9))
    assert fit_binomial(pts, 2) == (5, 2, 1)


def test_fit_rejects_short_or_non_polynomial_tables():
    with pytest.raises(FitError):
        fit_binomial([(0, 1), (1, 2)], 1)
    with pytest.raises(FitError):
        fit_binomial([(n, 2 ** n) for n in range(10)], 2)


def test_hilbert_table_of_m():
    m = S.maximal_ideal()
    assert hilbert_samuel_table(m, S, 4) == [1, 3, 6, 10, 15]
    assert hilbert_coefficients_of(m, S) == (1, 0, 0)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_hilbert_coefficients_of_powers_of_m(k):
    # lambda(R/m^(k(n+1))) = C(k(n+1)+1, 2): e_0 = k^2, e_1 = k(k-1)/2, e_2 = 0
    assert hilbert_coefficients_of(power_of_maximal_ideal(S, k), S) == (k * k, k * (k - 1) // 2, 0)


@pytest.mark.parametrize("a,b", [(2, 2), (3, 5)])
def test_parameter_ideal_coefficients(a, b):
    J = S.ideal([f"x^{a}", f"y^{b}"])
    table = hilbert_samuel_table(J, S, 6)
    assert table == [a * b * comb(n + 2, 2) for n in range(7)]
    assert hilbert_coefficients(table, 2) == (a * b, 0, 0)


def test_quotient_ring_table_start():
    inst = catalog("ex4.6", {"q": 2})
    assert hilbert_samuel_table(inst.I, inst.spec, 1) == [13, 45]


# reductions ------------------------------------------------------------------------

def test_parameter_ideal_is_its_own_reduction():
    Q = S.ideal(["x^3+y^4", "y^3"])
    assert is_reduction(Q, Q, S) == 0
    rep = find_minimal_reduction(Q, S, seed=1)
    assert rep.r == 0


def test_square_of_m_has_reduction_number_one():
    m2 = power_of_maximal_ideal(S, 2)
    rep = find_minimal_reduction(m2, S, seed=0)
    assert rep.found and rep.r == 1
    # (m^2)^2 = Q m^2 by an independent count
    prod = ideal_product(rep.Q, m2)
    assert brute_length(prod.generators, 2, 6) == brute_length(ideal_power(m2, 2).generators, 2, 6)


def test_reduction_search_is_deterministic():
    I = catalog("ex2.7").I
    a = find_minimal_reduction(I, S, seed=11)
    b = find_minimal_reduction(I, S, seed=11)
    assert [str(g) for g in a.Q.generators] == [str(g) for g in b.Q.generators]
    assert (a.r, a.attempts) == (b.r, b.attempts)


def test_given_reduction_in_quotient_ring():
    inst = catalog("ex4.6", {"q": 1})
    assert is_reduction(inst.I, inst.Q, inst.spec) == 2


def test_catalog_reduction_numbers():
    assert is_reduction(catalog("ex3.2.1").I, catalog("ex3.2.1").Q, S) == 1
    inst = catalog("ex3.2.4")
    assert is_reduction(inst.I, inst.Q, S) is NOT_FOUND


def test_reduction_number_against_linear_algebra():
    # r_Q(I) = 4 for I = Q:(x^4, y), Q = (x^5+y^6, xy^5+y^7): I^5 = QI^4 but I^4 != QI^3
    inst = catalog("ex3.2.3")
    I, Q = inst.I, inst.Q
    assert is_reduction(I, Q, S) == 4

    def count(J, n_cut=40):
        return brute_length(J.generators, 2, n_cut)

    I4, I5 = ideal_power(I, 4), ideal_power(I, 5)
    assert count(ideal_product(Q, I4)) == count(I5)
    assert count(ideal_product(Q, ideal_power(I, 3))) - count(I4) == 1


def test_fiber_lengths():
    inst = catalog("ex3.2.3")
    assert sally_fiber_lengths(inst.I, inst.Q, S) == (3, 2, 1)
    ex = catalog("ex2.7")
    assert sally_fiber_lengths(ex.I, ex.Q, S) == (1,)
    assert sally_fiber_lengths(catalog("ex3.2.1").I, catalog("ex3.2.1").Q, S) == ()


# multiplicities ------------------------------------------------------------------

def test_sally_multiplicities():
    Q = S.ideal(["x^2+y^3", "y^2"])
    assert sally_multiplicity(Q, Q, S) == 0
    ex = catalog("ex2.7")
    assert sally_multiplicity(ex.I, ex.Q, S) == 1


def test_fiber_multiplicities():
    assert fiber_multiplicity(S.maximal_ideal(), S) == 1
    assert fiber_multiplicity(S.ideal(["x^2", "y^2"]), S) == 1
    assert fiber_multiplicity(catalog("ex2.7").I, S) == 3


def test_record_for_quotient_ring_instance():
    inst = catalog("ex4.6", {"q": 2})
    inv = InstanceInvariants(inst.spec, inst.I, inst.Q)
    rec = inv.record()
    assert rec.diagnostics == {}
    assert (rec.lambda_RI, rec.e[:2], rec.eQ[1], rec.rQ, rec.sQ) == (13, (20, 7), -1, 2, 1)
    assert rec.rossi_index == 7 - 20 + 13 + 1
    assert rec.buchsbaum_I == buchsbaum_invariant(rec.eQ) == -rec.eQ[1] + rec.eQ[2]
    json.dumps(rec.as_dict())


def test_record_skips_sally_fields_without_reduction():
    inst = catalog("ex3.2.4")
    rec = InstanceInvariants(inst.spec, inst.I, inst.Q).record()
    assert rec.as_dict()["rQ"] == "NOT_FOUND"
    assert set(rec.skipped) == {"fiber_lengths", "sally_lengths", "sQ"}
    assert rec.diagnostics == {}


def test_record_without_q_searches_one():
    inst = catalog("ex2.7")
    inv = InstanceInvariants(inst.spec, inst.I, None, Config(seed=3))
    assert inv.rQ() == 2
    assert inv.sQ() == 1


# properties on small random ideals -------------------------------------------------

term = st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(1, 32002))


@st.composite
def small_ideals(draw):
    a, b = draw(st.integers(1, 4)), draw(st.integers(1, 4))
    gens = [S.parse(f"x^{a}"), S.parse(f"y^{b}")]
    for extra in draw(st.lists(st.lists(term, min_size=1, max_size=2), min_size=1, max_size=2)):
        d = {(i, j): c for i, j, c in extra if 0 < i + j <= 5}
        if d:
            gens.append(Polynomial(S.ring, d))
    return Ideal(S.ring, gens)


@settings(max_examples=12, deadline=None)
@given(small_ideals(), st.integers(0, 1000))
def test_table_and_fiber_properties(I, seed):
    inv = InstanceInvariants(S, I, None, Config(seed=seed))
    table = hilbert_samuel_table(I, S, 8)
    assert all(b > a for a, b in zip(table, table[1:]))
    # second differences eventually equal e_0
    d2 = [table[i + 2] - 2 * table[i + 1] + table[i] for i in range(len(table) - 2)]
    assert d2[-1] == d2[-2] == inv.e()[0]
    r = inv.rQ()
    assert r is not NOT_FOUND
    assert all(v >= 1 for v in inv.fiber_lengths())
    assert len(inv.fiber_lengths()) == max(r - 1, 0)
    t, tq = inv.tower, inv.qtower
    assert t.value("I", r + 1) == t.value("QI", r, tq)
    if r >= 1:
        assert t.value("I", r) != t.value("QI", r - 1, tq)


def test_seeded_instances_are_reproducible():
    from helpers import random_plane_ideal
    for seed in (0, 1, 4):
        a = random_plane_ideal(seed)
        b = random_plane_ideal(seed)
        assert [str(g) for g in a.I.generators] == [str(g) for g in b.I.generators]
        assert local_length(a.I, S).finite
