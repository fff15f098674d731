import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import eval_hermite

from gvlp.hermite import (
    HermiteExpansion,
    eval_expansion,
    expand,
    gram_matrix,
    hermite_normalized_eval,
    hermite_table,
    multi_indices,
    multi_indices_of_order,
    project_degree,
)
from gvlp.quadrature import gauss_hermite_rule


def scipy_normalized(n, x):
    return eval_hermite(n, x) / math.sqrt(2.0**n * math.factorial(n))


@pytest.mark.parametrize("n", [0, 1, 2, 5, 12, 30])
def test_table_matches_scipy(n):
    x = np.linspace(-4, 4, 41)
    assert np.allclose(hermite_table(n, x)[n], scipy_normalized(n, x), rtol=1e-10, atol=1e-12)


def test_low_order_values():
    x = np.array([0.3, -1.2])
    assert np.allclose(hermite_normalized_eval((1,), x[:, None]), math.sqrt(2) * x)
    assert np.allclose(hermite_normalized_eval((2,), x[:, None]), (4 * x**2 - 2) / math.sqrt(8))
    assert hermite_normalized_eval((0, 0), [0.4, 0.1]) == 1.0


def test_multi_index_counts():
    assert len(list(multi_indices(1, 8))) == 9
    assert len(list(multi_indices(2, 8))) == 45
    assert len(list(multi_indices(3, 4))) == 35
    assert list(multi_indices_of_order(2, 2)) == [(2, 0), (1, 1), (0, 2)]


@pytest.mark.parametrize("dim,tol", [(1, 1e-10), (2, 1e-8)])
def test_gram_identity(dim, tol):
    G = gram_matrix(dim, 8, gauss_hermite_rule(20))
    assert np.max(np.abs(G - np.eye(len(G)))) < tol


def test_expand_x_squared():
    # x^2 = 1/2 h_0 + (1/sqrt 2) h_2 in the normalized basis
    e = expand(lambda x: x[:, 0] ** 2, 4)
    assert e.coeffs == pytest.approx({(0,): 0.5, (2,): 1 / math.sqrt(2)})


def test_expand_reproduces_basis_element():
    e = expand(lambda x: hermite_normalized_eval((2, 1), x), 5, dim=2)
    assert list(e.coeffs) == [(2, 1)]
    assert e.coeffs[(2, 1)] == pytest.approx(1.0, rel=1e-13)


def test_pruning_and_order():
    e = HermiteExpansion(1, {(3,): 1.0, (0,): 2.0, (1,): 1e-17})
    assert list(e.coeffs) == [(0,), (3,)]
    assert e.max_order == 3


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        HermiteExpansion(2, {(1,): 1.0})
    with pytest.raises(ValueError):
        HermiteExpansion.basis((1,)) + HermiteExpansion.basis((1, 0))


def test_json_round_trip():
    e = HermiteExpansion(2, {(0, 0): 0.5, (2, 1): -1.25, (0, 3): 3.0})
    back = HermiteExpansion.from_json(e.to_json())
    assert back == e


def test_project_degree():
    e = HermiteExpansion(2, {(0, 0): 1.0, (1, 1): 2.0, (2, 0): 3.0, (0, 1): 4.0})
    assert project_degree(e, 2).coeffs == {(1, 1): 2.0, (2, 0): 3.0}
    assert project_degree(e, 5).coeffs == {}
    with pytest.raises(ValueError):
        project_degree(e, -1)


coefficient = st.floats(-5, 5, allow_nan=False)


@st.composite
def expansions(draw, dim=1, max_order=8):
    idx = list(multi_indices(dim, max_order))
    chosen = draw(st.lists(st.sampled_from(idx), min_size=1, max_size=6, unique=True))
    return HermiteExpansion(dim, {nu: draw(coefficient) for nu in chosen})


@given(expansions(), expansions(), st.floats(-3, 3))
def test_linear_structure(a, b, c):
    x = np.linspace(-2, 2, 7)[:, None]
    assert np.allclose(eval_expansion(a + c * b, x), eval_expansion(a, x) + c * eval_expansion(b, x), atol=1e-9)


@settings(max_examples=30)
@given(expansions(dim=2, max_order=6))
def test_expand_inverts_eval(e):
    back = expand(lambda x: eval_expansion(e, x), 6, gauss_hermite_rule(12), dim=2)
    for nu in set(e.coeffs) | set(back.coeffs):
        assert back.coeffs.get(nu, 0.0) == pytest.approx(e.coeffs.get(nu, 0.0), abs=1e-11)


@given(expansions())
def test_parseval(e):
    rule = gauss_hermite_rule(20)
    w = rule.weights / math.sqrt(math.pi)
    sq = w @ eval_expansion(e, rule.nodes[:, None]) ** 2
    assert sq == pytest.approx(e.l2_norm() ** 2, rel=1e-10, abs=1e-12)
