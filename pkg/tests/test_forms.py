"""Exterior algebra basics: wedge bookkeeping, inner products, Hodge duality."""

import numpy as np
import pytest

from hkforms.exterior import FormVector, hodge_star, inner, wedge
from hkforms.exterior.forms import form_gram, merge_sign


def random_form(rng, dim, degree):
    from hkforms.exterior import basis_indices
    coeffs = {b: complex(rng.standard_normal(), rng.standard_normal())
              for b in basis_indices(dim, degree)}
    return FormVector(dim, coeffs)


def test_wedge_basis_case():
    e0 = FormVector.basis(4, (0,))
    e1 = FormVector.basis(4, (1,))
    assert wedge(e0, e1).coeffs == {(0, 1): 1.0 + 0j}


def test_wedge_antisymmetry_on_sum():
    a = FormVector(4, {(0,): 1.0, (1,): 1.0})
    e0 = FormVector.basis(4, (0,))
    assert wedge(a, e0).coeffs == {(0, 1): -1.0 + 0j}


def test_wedge_graded_commutativity():
    rng = np.random.default_rng(3)
    for p, q in [(1, 1), (1, 2), (2, 2), (2, 3), (1, 3)]:
        a = random_form(rng, 6, p)
        b = random_form(rng, 6, q)
        lhs = wedge(a, b)
        rhs = (-1.0) ** (p * q) * wedge(b, a)
        assert lhs.isclose(rhs, 1e-12)


def test_wedge_associative_bilinear():
    rng = np.random.default_rng(4)
    a, b, c = (random_form(rng, 5, d) for d in (1, 1, 2))
    assert wedge(wedge(a, b), c).isclose(wedge(a, wedge(b, c)), 1e-12)
    s = 2.5 - 1.0j
    assert wedge(s * a + b, c).isclose(s * wedge(a, c) + wedge(b, c), 1e-12)


def test_wedge_dimension_mismatch():
    with pytest.raises(ValueError):
        wedge(FormVector.basis(4, (0,)), FormVector.basis(8, (0,)))


def test_multi_index_validation():
    with pytest.raises(ValueError):
        FormVector(4, {(1, 0): 1.0})
    with pytest.raises(ValueError):
        FormVector(4, {(0, 4): 1.0})


def test_merge_sign_examples():
    assert merge_sign((0,), (1,)) == (1, (0, 1))
    assert merge_sign((1,), (0,)) == (-1, (0, 1))
    assert merge_sign((0, 1), (0,)) == (0, ())


def test_hodge_star_basis():
    assert hodge_star(FormVector.basis(4, (0, 1))).coeffs == {(2, 3): 1.0 + 0j}
    assert hodge_star(FormVector.scalar(4)).coeffs == {(0, 1, 2, 3): 1.0 + 0j}


def test_hodge_star_involution_on_two_forms():
    rng = np.random.default_rng(5)
    a = random_form(rng, 4, 2)
    assert hodge_star(hodge_star(a)).isclose(a, 1e-12)


def test_hodge_star_sign_rule():
    # ** = (-1)^{p(n-p)} on an orthonormal metric
    rng = np.random.default_rng(6)
    for n, p in [(4, 1), (4, 3), (6, 2), (8, 3)]:
        a = random_form(rng, n, p)
        twice = hodge_star(hodge_star(a))
        assert twice.isclose((-1.0) ** (p * (n - p)) * a, 1e-12)


def test_hodge_star_mixed_degree_rejected():
    mixed = FormVector(4, {(0,): 1.0, (0, 1): 1.0})
    with pytest.raises(ValueError):
        hodge_star(mixed)


def test_hodge_orientation_flip():
    a = FormVector.basis(4, (0, 1))
    assert hodge_star(a, orientation=-1).isclose(-1.0 * hodge_star(a), 1e-15)


def test_inner_product_orthonormal():
    a = FormVector(4, {(0, 1): 2.0, (2, 3): 1.0j})
    assert inner(a, a) == pytest.approx(5.0)
    b = FormVector(4, {(0, 2): 1.0})
    assert inner(a, b) == 0


def test_inner_product_scaled_metric():
    # with g = c^2 Id the 1-form Gram is c^{-2} Id
    g = 4.0 * np.eye(4)
    a = FormVector.basis(4, (0,))
    assert inner(a, a, metric=g) == pytest.approx(0.25)
    assert form_gram(g, 2)[0, 0] == pytest.approx(1.0 / 16.0)


def test_star_pairing_against_inner():
    # alpha ^ *beta = <alpha, beta> vol, checked on random 2-forms
    rng = np.random.default_rng(7)
    a = random_form(rng, 4, 2)
    b = random_form(rng, 4, 2)
    top = wedge(a, hodge_star(b))
    # linear star: pairing is the bilinear (not Hermitian) one
    expected = sum(a.coeffs.get(k, 0) * b.coeffs.get(k, 0)
                   for k in set(a.coeffs) | set(b.coeffs))
    assert top.coeffs.get((0, 1, 2, 3), 0) == pytest.approx(expected)
