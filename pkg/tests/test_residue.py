import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qkahler.exact import LinearForm, SparsePoly, t
from qkahler.oracles import reference_integrands
from qkahler.polyd import integrand_for, zmonomials
from qkahler.residue import (
    DegenerateResidue,
    OwnedFactor,
    RatExpr,
    differentiate,
    iterated_residue,
    residue_in_var,
)

REFS = reference_integrands()


def lf(const=0, **c):
    return LinearForm.make(const, {int(k[1:]): v for k, v in c.items()})


@pytest.mark.parametrize("label", sorted(REFS))
def test_reference_value_every_order(label):
    e, want = REFS[label]
    idx = sorted(e.t_indices())
    for order in itertools.permutations(idx):
        assert iterated_residue(e, list(order)) == want


def _laurent_oracle(terms):
    """Coefficient of ``t1^-1 t4^-1`` in the d5 reference integrand, expanded
    in ``|t4/4| < |t1|`` and ``|t1/4| < |t4|``.

    ``terms`` caps the geometric index; ``None`` sums it in closed form.
    """
    # numerator (3/4 t1 + 1/2 t4)(1/2 t1 + 3/4 t4) = sum_p c_p t1^p t4^(2-p)
    c = {2: F(3, 8), 1: F(9, 16) + F(1, 4), 0: F(3, 8)}
    total = F(0)
    for p, cp in c.items():
        s = 1 - p  # b - a
        a0 = max(0, -s)
        if terms is None:
            geo = F(1, 16) ** a0 * F(16, 15)
        else:
            geo = sum(F(1, 16) ** a for a in range(a0, terms))
        total += cp * F(-1, 4) ** s * geo
    return total


def test_d5_reference_against_series_expansion():
    e, want = REFS["d5 z1^2 z4^2"]
    assert _laurent_oracle(None) == want
    assert abs(_laurent_oracle(60) - want) < F(1, 16**59)


@pytest.mark.parametrize(
    "d, m, want",
    [(5, (2, 0, 0, 2), F(2, 3)), (6, (3, 2, 0, 0, 0), F(3, 50)), (7, (2, 2, 2, 0, 0, 0), F(1, 20))],
)
def test_full_integrand_order_independence(d, m, want):
    e = integrand_for(d, m, 0, 0)
    perms = list(itertools.permutations(range(1, d)))
    random.Random(d).shuffle(perms)
    for order in perms[:20]:
        assert iterated_residue(e, list(order)) == want


@settings(max_examples=25, deadline=None)
@given(
    st.integers(3, 5).flatmap(lambda d: st.tuples(st.just(d), st.sampled_from(list(zmonomials(d))))),
    st.randoms(use_true_random=False),
    st.integers(1, 9),
)
def test_order_independence_generic_point(dm, rnd, s):
    d, m = dm
    e = integrand_for(d, m, 1, s)
    order = list(range(1, d))
    rnd.shuffle(order)
    try:
        ref = iterated_residue(e)
        got = iterated_residue(e, order)
    except DegenerateResidue:
        assume(False)
    assert got == ref


def test_simple_pole_at_zero_only():
    # (1 + t1)^2 / t1: constant term 1
    e = RatExpr.build(1, [(lf(1, t1=1), 2)])
    assert iterated_residue(e) == 1


def test_outside_pole_ignored():
    # 1/(t1 - 3) owned by t2 expands in t1/3: constant term -1/3
    e = RatExpr.build(1, [], [OwnedFactor(lf(-3, t1=1), 2)])
    assert iterated_residue(e, [1]) == F(-1, 3)


def test_inside_pole_picked_up():
    # owned by t1, so it expands in 3/t1 and has no constant term
    e = RatExpr.build(1, [], [OwnedFactor(lf(-3, t1=1), 1)])
    assert iterated_residue(e, [1]) == 0


def test_double_pole():
    # t1 / (t1 + 2)^2 owned by t1: expansion 1/t1 (1 + 2/t1)^-2 has no constant term
    e = RatExpr.build(1, [(lf(t1=1), 1)], [OwnedFactor(lf(2, t1=1), 1, 2)])
    assert iterated_residue(e, [1]) == 0
    # t1^2/(t1+2)^2 -> 1
    e2 = RatExpr.build(1, [(lf(t1=1), 2)], [OwnedFactor(lf(2, t1=1), 1, 2)])
    assert iterated_residue(e2, [1]) == 1


def test_pinch_raises():
    # the same root t1 = -t2 is inside for the t1-owned copy and outside for the t2-owned one
    e = RatExpr.build(1, [], [OwnedFactor(lf(t1=1, t2=1), 2), OwnedFactor(lf(t1=1, t2=1), 1)])
    with pytest.raises(DegenerateResidue):
        residue_in_var(e, 1)


def test_zero_factor_rejected():
    with pytest.raises(DegenerateResidue):
        OwnedFactor(LinearForm(), 1)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(-3, 3), min_size=3, max_size=3),
    st.lists(st.integers(1, 4), min_size=2, max_size=2),
    st.integers(1, 3),
    st.fractions(min_value=-5, max_value=5, max_denominator=7),
)
def test_differentiate_matches_quotient_rule(nc, consts, mult, pt):
    num = SparsePoly.const(nc[0]) + SparsePoly.var(t(1), nc[1]) + SparsePoly.var(t(1), nc[2]) * SparsePoly.var(t(1))
    f1 = OwnedFactor(lf(consts[0], t1=1), 1, mult)
    f2 = OwnedFactor(lf(consts[1], t1=2), 2, 1)
    e = RatExpr(num, (f1, f2))
    assume(pt + consts[0] != 0 and 2 * pt + consts[1] != 0)
    de = differentiate(e, 1)
    p = num.subs({t(1): pt}).constant_term()
    dp = num.diff(t(1)).subs({t(1): pt}).constant_term()
    a, b = pt + consts[0], 2 * pt + consts[1]
    want = (dp * a * b - p * (mult * b + 2 * a)) / (a ** (mult + 1) * b**2)
    assert de.evaluate({1: pt}) == want


def test_linearity():
    e1, _ = REFS["d6 z1^3 z2^2"]
    e2 = e1.scale(F(5, 7))
    assert iterated_residue([e1, e2]) == iterated_residue(e1) * F(12, 7)


def test_trivial_integrands():
    assert iterated_residue(RatExpr.build(1), []) == 1
    assert residue_in_var(RatExpr.build(1), 1)[0].value() == 1
    assert iterated_residue(RatExpr.build(1, [(lf(t1=1), 1)]), [1]) == 0


def test_d5_reference_intermediate_after_t1():
    e, _ = REFS["d5 z1^2 z4^2"]
    after = residue_in_var(e, 1)
    # t4-homogeneous of degree zero: a constant times t4^0
    assert sum((term.evaluate({4: 1}) for term in after), F(0)) == F(2, 3)
    assert sum((term.evaluate({4: 7}) for term in after), F(0)) == F(2, 3)


def test_differentiate_examples():
    const = RatExpr.build(5)
    assert differentiate(const, 1).prefactor.is_zero()
    inv = RatExpr.build(1, [], [OwnedFactor(lf(3, t1=1), 1)])
    d_inv = differentiate(inv, 1)
    for x in (F(0), F(2), F(-1, 2)):
        assert d_inv.evaluate({1: x}) == -1 / (x + 3) ** 2
    ratio = RatExpr.build(1, [(lf(t1=1), 1)], [OwnedFactor(lf(t1=1, t2=1), 2)])
    d_ratio = differentiate(ratio, 1)
    for a, b in ((F(1), F(2)), (F(3), F(-5, 2))):
        assert d_ratio.evaluate({1: a, 2: b}) == b / (a + b) ** 2
