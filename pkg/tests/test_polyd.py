import json
from fractions import Fraction as F
from math import comb

import pytest

from qkahler.exact import X, Y, z
from qkahler.polyd import (
    PolyD,
    coefficient_values,
    golden_poly,
    integrand_for,
    phi_form,
    poly_d,
    residue_order,
    zmonomials,
)


@pytest.fixture(scope="module")
def polys():
    return {d: poly_d(d) for d in range(1, 7)}


def test_phi_forms_d3():
    f1, f2 = phi_form(3, 1), phi_form(3, 2)
    assert (f1.x_coeff, f1.y_coeff, dict(f1.t_coeffs)) == (F(2, 3), F(1, 3), {2: F(1, 2)})
    assert (f2.x_coeff, f2.y_coeff, dict(f2.t_coeffs)) == (F(1, 3), F(2, 3), {1: F(1, 2)})


def test_phi_form_bounds():
    with pytest.raises(ValueError):
        phi_form(3, 3)


@pytest.mark.parametrize("d", range(1, 8))
def test_zmonomial_count(d):
    assert len(list(zmonomials(d))) == comb(2 * (d - 1), d - 1)


def test_integrand_rejects_bad_monomial():
    with pytest.raises(ValueError):
        integrand_for(3, (2, 1), 1, 1)


def test_residue_order_puts_owned_last():
    assert residue_order((2, 0, 1, 3)) == [2, 3, 1, 4]


@pytest.mark.parametrize("d", [1, 2, 3, 4, 6])
def test_matches_reference_table(polys, d):
    assert polys[d] == golden_poly(d)


def test_heads():
    assert poly_d(3).entries[(0, 0)] == {0: F(2, 9), 1: F(5, 9), 2: F(2, 9)}
    assert poly_d(4).entries[(0, 0, 0)] == {0: F(3, 32), 1: F(13, 32), 2: F(13, 32), 3: F(3, 32)}


def test_d5_exceptional_coefficient(polys):
    assert polys[5].coefficient(0, 0, (2, 0, 0, 2)) == F(2, 3)


@pytest.mark.parametrize("d", range(1, 7))
def test_reversal_symmetry(polys, d):
    assert polys[d].reversed() == polys[d]


@pytest.mark.parametrize("d", range(1, 7))
def test_homogeneous_of_degree_d_minus_1(polys, d):
    p = polys[d].to_poly()
    assert p.is_homogeneous()
    assert p.degree() == d - 1


@pytest.mark.parametrize("d", range(1, 7))
def test_normalization(polys, d):
    zero = tuple([0] * (d - 1))
    assert sum(polys[d].entries[zero].values()) == 1


@pytest.mark.parametrize("d", range(2, 7))
def test_top_monomial_has_unit_coefficient(polys, d):
    assert polys[d].coefficient(0, 0, tuple([1] * (d - 1))) == 1


@pytest.mark.parametrize("d", range(1, 7))
def test_json_roundtrip(polys, d):
    p = polys[d]
    assert PolyD.from_json(json.loads(json.dumps(p.to_json()))) == p


def test_from_json_validates_degree():
    bad = {"d": 2, "monomials": [{"x": 1, "y": 1, "z": [0], "coeff": "1/2"}]}
    with pytest.raises(ValueError):
        PolyD.from_json(bad)


def test_to_poly_variables():
    p = poly_d(2).to_poly()
    assert p.coefficient({X: 1}) == F(1, 2)
    assert p.coefficient({z(1): 1}) == 1
    assert p.coefficient({Y: 1}) == F(1, 2)


def test_render_low_degrees():
    assert poly_d(1).render() == "1"
    assert poly_d(2).render() == "(x+y)/2 + z_1"
    assert poly_d(3).render().startswith("(2*x^2+5*x*y+2*y^2)/9")


def test_parallel_matches_serial():
    assert poly_d(5, jobs=2) == poly_d(5)


def test_coefficient_values_degree_zero_part():
    assert coefficient_values(4, (1, 1, 1)) == {0: F(1)}


def test_phi_form_examples():
    f = phi_form(4, 1)
    assert (f.x_coeff, f.y_coeff, dict(f.t_coeffs)) == (F(3, 4), F(1, 4), {2: F(1, 2), 3: F(1, 3)})
    g = phi_form(5, 2)
    assert (g.x_coeff, g.y_coeff, dict(g.t_coeffs)) == (F(3, 5), F(2, 5), {1: F(3, 4), 3: F(2, 3), 4: F(1, 2)})
    for d in range(2, 8):
        for i in range(1, d):
            assert phi_form(d, i).at(1, 1).const == 1


def test_integrand_all_ones_is_constant():
    e = integrand_for(5, (1, 1, 1, 1), 2, 3)
    assert not e.factors and e.prefactor.constant_term() == 1 and e.prefactor.is_constant()


def test_integrand_matches_reference_value():
    from qkahler.oracles import reference_integrands
    from qkahler.residue import iterated_residue

    refs = reference_integrands()
    assert iterated_residue(integrand_for(5, (2, 0, 0, 2), 0, 0)) == refs["d5 z1^2 z4^2"][1]
    assert iterated_residue(integrand_for(6, (3, 2, 0, 0, 0), 0, 0)) == refs["d6 z1^3 z2^2"][1]


def test_degree_seven_properties():
    import os

    p = poly_d(7, jobs=min(8, os.cpu_count() or 1))
    assert p.reversed() == p
    assert p.to_poly().is_homogeneous()
    assert p.coefficient(0, 0, (2, 2, 2, 0, 0, 0)) == F(1, 20)
    assert p.coefficient(0, 0, (1,) * 6) == 1
