"""Dickson evaluation, root sets, Kloosterman sums, and curve counts."""

import random

import pytest

from thetamap.dickson_curve import (
    _root_bits,
    _theta_image_of_small_subgroup,
    count_N,
    curve_point_count,
    curve_point_count_naive,
    dickson_coeff_bits,
    dickson_eval,
    dickson_eval_closed_form,
    dickson_report,
    kloosterman,
    leaf_set_equalities,
    root_set_report,
    root_sets,
)
from thetamap.gf2_arith import FieldError, make_field
from thetamap.theta_graph import build_graph


# ---------------------------------------------------------------------------
# evaluation


def test_degree_one_is_identity():
    f = make_field(4)
    for e in f.elements():
        assert dickson_eval(f, 1, e) == e


def test_small_degrees_by_hand():
    # D_2 = x^2, D_3 = x^3 + x (two recurrence steps by hand)
    for t in (1, 3):
        f = make_field(t)
        for e in f.elements():
            x = e.bits
            assert dickson_eval(f, 2, e).bits == f.mul(x, x)
            assert dickson_eval(f, 3, e).bits == f.mul(f.mul(x, x), x) ^ x
    assert dickson_eval(make_field(1), 3, make_field(1).one()).bits == 0


def test_degree_must_be_positive():
    f = make_field(2)
    with pytest.raises(FieldError):
        dickson_eval(f, 0, f.one())


def test_functional_identity_random_sample():
    f = make_field(12)
    rng = random.Random(2024)
    for _ in range(100):
        y = rng.randrange(1, f.q)
        x = f.element(y ^ f.inv(y))
        lhs = dickson_eval(f, 5, x).bits
        assert lhs == f.pow(y, 5) ^ f.pow(f.inv(y), 5)


def test_closed_form_coefficients():
    assert dickson_coeff_bits(1) == 0b10
    assert dickson_coeff_bits(2) == 0b100          # x^2 (the -2 vanishes)
    assert dickson_coeff_bits(3) == 0b1010         # x^3 + x
    assert dickson_coeff_bits(5) == 0b101010       # x^5 + x^3 + x


@pytest.mark.parametrize("t", [4, 6])
def test_closed_form_matches_recurrence(t):
    f = make_field(t)
    for m in range(1, 11):
        for e in f.elements():
            assert dickson_eval(f, m, e) == dickson_eval_closed_form(f, m, e)


def test_eval_rejects_foreign_elements():
    with pytest.raises(FieldError):
        dickson_eval(make_field(3), 2, make_field(4).one())


# ---------------------------------------------------------------------------
# root sets


def test_root_sets_tiny_fields():
    f2 = make_field(1)
    s, t = root_sets(f2, 3)
    assert {e.bits for e in s} == {1} and not t
    f4 = make_field(2)
    s, t = root_sets(f4, 5)
    assert len(s) == 2 and not t
    assert {e.bits for e in s} == {e.inverse().bits for e in s}


def test_root_sets_t_nonempty_beyond_four():
    f8 = make_field(3)
    s, t = root_sets(f8, 9)
    assert t, "T must be nonempty for q = 8"
    assert len(s) == 1 and next(iter(s)).bits == 1


def test_root_sets_proper_divisor():
    f8 = make_field(3)
    s, t = root_sets(f8, 3)
    assert {e.bits for e in s} == {1} and not t


def test_root_sets_preconditions():
    f8 = make_field(3)
    with pytest.raises(FieldError):
        root_sets(f8, 1)
    with pytest.raises(FieldError):
        root_sets(f8, 4)


@pytest.mark.parametrize("n", range(1, 7))
def test_roots_are_subgroup_images(n):
    # every root of D_m in GF(q)* is the image of an order-dividing-m point
    f = make_field(n)
    q = f.q
    for m in range(2, q + 2):
        if (q + 1) % m:
            continue
        assert _root_bits(f, m) == _theta_image_of_small_subgroup(f, m)


# ---------------------------------------------------------------------------
# Kloosterman sums and counts


def test_kloosterman_tiny():
    assert kloosterman(make_field(1)) == 1
    assert kloosterman(make_field(2)) == 3


@pytest.mark.parametrize("n", range(1, 9))
def test_kloosterman_equals_curve_excess(n):
    # Tr(x + 1/x) = Tr(x) + Tr(1/x) vanishes exactly on the curve's
    # admissible x-coordinates, so K = |E| - (q+1) with |E| counted by
    # brute-force enumeration of the curve equation
    f = make_field(n)
    assert kloosterman(f) == curve_point_count_naive(f) - (f.q + 1)


@pytest.mark.parametrize("n", range(1, 11))
def test_count_matches_prediction(n):
    n_pred, matches = count_N(make_field(n))
    assert matches
    assert n_pred >= 1


def test_count_small_values():
    assert count_N(make_field(1)) == (1, True)
    assert count_N(make_field(2)) == (2, True)


def test_weil_bound():
    for n in range(1, 13):
        k = kloosterman(make_field(n))
        assert k * k <= 4 * 2 ** n


# ---------------------------------------------------------------------------
# the curve


def test_curve_count_f2():
    # {O, (0,1), (1,1), (1,0)}
    assert curve_point_count(make_field(1)) == 4


@pytest.mark.parametrize("n", range(1, 9))
def test_curve_criterion_matches_enumeration(n):
    f = make_field(n)
    assert curve_point_count(f) == curve_point_count_naive(f)


def test_curve_count_lower_bound():
    for n in range(1, 13):
        assert curve_point_count(make_field(n)) >= 4


# ---------------------------------------------------------------------------
# leaf set equalities


@pytest.mark.parametrize("n", [1, 2, 3, 6])
def test_leaf_set_equalities(n):
    f = make_field(n)
    rep = leaf_set_equalities(f, build_graph(f))
    assert rep.passed, str(rep)


def test_leaf_set_rejects_mismatched_graph():
    with pytest.raises(FieldError):
        leaf_set_equalities(make_field(3), build_graph(make_field(4)))


@pytest.mark.parametrize("n", range(3, 13))
def test_t_member_traces(n):
    f = make_field(n)
    _, t_set = root_sets(f, f.q + 1)
    assert t_set
    for e in t_set:
        assert (f.trace(e.bits), f.trace(f.inv(e.bits))) == (0, 1)
        assert e.inverse() not in t_set


# ---------------------------------------------------------------------------
# reports


def test_root_set_report_worked_example():
    # anchored to the worked example over GF(2^6): 12 + 2 leaf pairs in the
    # A components, 9 + 9 in the B components, 27 admissible unit abscissas
    rep = root_set_report(make_field(6))
    assert rep.q == 64 and rep.m == 65
    assert len(rep.S) == 14 and len(rep.T) == 18
    assert rep.E_count == 56
    assert rep.K == rep.E_count - 65
    assert rep.N_pred == 14


def test_dickson_report_schema_and_determinism():
    doc = dickson_report(make_field(3), seed=5)
    assert doc["passed"] and doc["n"] == 3 and doc["m"] == 9
    names = {c["name"] for c in doc["checks"]}
    assert {"weil-bound", "kloosterman-count", "root-image-equality",
            "t-emptiness", "curve-count-oracle",
            "identity-on-double-field"} <= names
    assert doc == dickson_report(make_field(3), seed=5)


def test_dickson_report_large_field_random_paths():
    doc = dickson_report(make_field(9), seed=11)
    assert doc["passed"]
    assert all(c["pass"] for c in doc["checks"])
