import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import erf

from gvlp.covering import build_covering
from gvlp.hermite import HermiteExpansion, eval_expansion, expand
from gvlp.quadrature import gauss_hermite_rule, trapezoid_box
from gvlp.semigroup import (
    OUTime,
    ball_average,
    default_s_grid,
    global_majorant_integral,
    hl_maximal,
    kernel_bound_params,
    kernel_bound_report,
    local_domination,
    log_mehler_kernel,
    majorant_alpha,
    maximal_t_grid,
    mehler_kernel,
    ou_apply,
    ou_expansion,
    ou_maximal,
    ou_split,
    time_convert,
    time_from_s,
)

H1 = HermiteExpansion.basis((1,))
H2 = HermiteExpansion.basis((2,))
ONE = HermiteExpansion.constant(1)


def test_time_convert_examples():
    assert time_convert(math.log(2)).s == pytest.approx(0.75, rel=1e-15)
    assert time_convert(10.0).s == pytest.approx(1.0, abs=1e-8)
    assert time_convert(1e-12).s == pytest.approx(2e-12, rel=1e-9)
    with pytest.raises(ValueError):
        time_convert(0.0)


@given(st.floats(1e-6, 5.0))
def test_time_round_trip(t):
    ou = time_convert(t)
    assert time_from_s(ou.s).t == pytest.approx(t, rel=1e-9)


def test_kernel_examples():
    assert mehler_kernel(0.5, np.zeros(1), np.zeros(1)) == pytest.approx((math.pi / 2) ** -0.5)
    x, y = np.array([1.0, 0.0]), np.array([0.3, -0.2])
    a = mehler_kernel(0.4, x, y) * math.exp(y @ y)
    b = mehler_kernel(0.4, y, x) * math.exp(x @ x)
    assert a == pytest.approx(b, rel=1e-13)
    with pytest.raises(ValueError):
        mehler_kernel(1.0, x, y)


def test_kernel_mass_trapezoid_oracle():
    rule = trapezoid_box(10.0, 4001, 1)
    assert rule.weights @ mehler_kernel(OUTime(0.458, 0.6), np.zeros(1), rule.nodes) == pytest.approx(1.0, rel=1e-12)


@settings(max_examples=50)
@given(st.floats(1e-3, 0.999), st.lists(st.floats(-3, 3), min_size=2, max_size=2),
       st.lists(st.floats(-3, 3), min_size=2, max_size=2))
def test_kernel_symmetry_and_positivity(s, x, y):
    x, y = np.array(x), np.array(y)
    a = log_mehler_kernel(s, x, y) + y @ y
    b = log_mehler_kernel(s, y, x) + x @ x
    assert np.isfinite(a)
    assert a == pytest.approx(b, rel=1e-12, abs=1e-10)


def test_ou_apply_examples():
    assert ou_apply(ONE, 0.7, 0.3) == pytest.approx(1.0)
    x = np.linspace(-2, 2, 5)
    assert np.allclose(ou_apply(H2, math.log(2), x[:, None]), 0.25 * eval_expansion(H2, x[:, None]))
    f = lambda y: y[:, 0]
    assert ou_apply(f, 0.3, [1.0], mode="quadrature") == pytest.approx(math.exp(-0.3), rel=1e-12)
    assert ou_apply(expand(f, 1), 0.3, [1.0], mode="spectral") == pytest.approx(math.exp(-0.3), rel=1e-12)


def test_quadrature_refused_for_tiny_s():
    with pytest.raises(ValueError, match="spectral"):
        ou_apply(lambda y: y[:, 0], 1e-4, [0.0], mode="quadrature")
    with pytest.raises(TypeError):
        ou_apply(lambda y: y[:, 0], 0.5, [0.0], mode="spectral")


@pytest.mark.parametrize("nu", [(0, 0), (1, 0), (2, 1), (3, 3), (0, 5)])
@pytest.mark.parametrize("t", [0.05, 0.5, 2.0])
def test_eigenrelation(nu, t):
    h = HermiteExpansion.basis(nu)
    x = np.array([[0.4, -0.9], [1.3, 0.2]])
    expect = math.exp(-t * sum(nu)) * eval_expansion(h, x)
    assert np.allclose(ou_apply(h, t, x, mode="spectral"), expect, atol=1e-14)
    quad = ou_apply(lambda y: eval_expansion(h, y), t, x, mode="quadrature")
    assert np.allclose(quad, expect, rtol=1e-6, atol=1e-10)


@given(st.floats(0.0, 3.0), st.floats(0.0, 3.0))
def test_semigroup_law(t1, t2):
    e = HermiteExpansion(1, {(k,): 1.0 / (k + 1) for k in range(9)})
    diff = ou_expansion(ou_expansion(e, t1), t2) - ou_expansion(e, t1 + t2)
    assert all(abs(c) <= 1e-12 for c in diff.coeffs.values())


def test_positivity_of_quadrature_path():
    f = lambda y: np.exp(-np.sum((y - 0.5) ** 2, -1)) * (np.abs(y[:, 0]) < 1)
    vals = ou_apply(f, 0.2, np.linspace(-3, 3, 13)[:, None], mode="quadrature")
    assert np.all(vals >= 0)


def test_split_sums_to_full_integral():
    f = lambda y: np.exp(-np.sum(y**2, -1)) * (1 + y[:, 0] ** 2)
    for t in (0.01, 0.3, 2.0):
        for x in ([0.4, 0.1], [3.0, 1.0], [0.0, 0.0]):
            loc, glob = ou_split(f, t, np.array(x))
            assert loc + glob == pytest.approx(ou_apply(f, t, np.array(x), mode="quadrature"), abs=1e-8)


def test_split_constant_function():
    loc, glob = ou_split(lambda y: np.ones(len(y)), 0.4, np.array([1.5, -0.5]))
    assert loc + glob == pytest.approx(1.0, abs=1e-10)


def test_split_erf_closed_form():
    loc, glob = ou_split(lambda y: np.ones(len(y)), time_from_s(0.5), np.array([0.0]))
    assert loc == pytest.approx(erf(1 / math.sqrt(0.5)), abs=1e-12)
    assert glob == pytest.approx(1 - erf(1 / math.sqrt(0.5)), abs=1e-12)


def test_split_mean_zero_decays():
    loc, glob = ou_split(lambda y: y[:, 0], 12.0, np.array([1.0]))
    assert abs(loc + glob) < 1e-5


def test_maximal_examples():
    ts = maximal_t_grid()
    assert len(ts) == 50
    assert ou_maximal(ONE, [0.2], ts) == pytest.approx(1.0)
    x = [[2.0]]  # h_2(2) > 0, multiplier decreasing in t
    assert ou_maximal(H2, x, ts) == pytest.approx(math.exp(-2 * ts[0]) * H2(np.array(x))[0])
    f = lambda y: np.exp(-y[:, 0] ** 2)
    mean = gauss_hermite_rule(40).weights @ np.exp(-2 * gauss_hermite_rule(40).nodes ** 2) / math.sqrt(math.pi)
    assert ou_maximal(f, [1.0], ts[ts > 0.03]) >= mean
    with pytest.raises(ValueError):
        ou_maximal(ONE, [0.0], [])


def test_maximal_monotone_in_grid():
    f = HermiteExpansion(1, {(0,): 0.2, (1,): 1.0, (3,): -0.5})
    coarse = ou_maximal(f, [0.7], np.geomspace(1e-3, 10, 20))
    fine = ou_maximal(f, [0.7], np.sort(np.concatenate([np.geomspace(1e-3, 10, 20), np.geomspace(2e-3, 9, 37)])))
    assert fine >= coarse


def test_hl_examples():
    radii = np.geomspace(0.1, 3, 10)
    assert hl_maximal(lambda y: np.full(len(y), 2.5), [0.3], radii) == pytest.approx(2.5)
    ind = lambda y: (np.linalg.norm(y, axis=-1) <= 1).astype(float)
    assert hl_maximal(ind, [0.0, 0.0], [0.5, 1.0, 2.0]) == pytest.approx(1.0)
    assert ball_average(lambda y: np.abs(y[:, 0]), [0.0], 2.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        hl_maximal(ind, [0.0], [0.0])


def test_local_domination_constant_stable():
    fam = build_covering(1, 9)
    f = lambda y: np.exp(-(y[:, 0] - 0.5) ** 2)
    xs = np.array([[0.2], [1.7], [2.6]])
    ss = [1e-3, 0.1, 0.8]
    a = local_domination(f, xs, ss, fam, np.geomspace(1e-2, 20, 40)).constant
    b = local_domination(f, xs, ss, fam, np.geomspace(1e-2, 20, 80), refine=2).constant
    assert math.isfinite(a) and abs(b / a - 1) <= 0.2


def test_kernel_bound_params_examples():
    p = kernel_bound_params([1.0, 0.0], [1.0, 1.0])
    assert (p["b"], p["a"]) == (2.0, 3.0)
    assert p["t0"] == pytest.approx(2 * math.sqrt(5) / (3 + math.sqrt(5)), rel=1e-14)
    assert p["u0"] == pytest.approx((1 + math.sqrt(5)) / 2, rel=1e-14)
    q = kernel_bound_params([1.0, 0.0], [-1.0, 0.0])
    assert q["branch"] == "b_nonpositive" and q["bound"] == pytest.approx(math.exp(-1))


def test_kernel_bound_rejects_local_pairs():
    with pytest.raises(ValueError):
        kernel_bound_report([0.0, 0.0], [0.0, 0.0])
    with pytest.raises(ValueError):
        kernel_bound_report([1.0, 0.0], [1.0, 1.0])


def test_kernel_bound_report_fields():
    r = kernel_bound_report([3.0, 0.0], [1.0, 1.5])
    p = kernel_bound_params([3.0, 0.0], [1.0, 1.5])
    assert r.branch == "b_positive" and r.t0 == p["t0"] and r.u0 == p["u0"]
    # the polished sup is at least the grid maximum
    s = default_s_grid(200)
    grid_max = max(mehler_kernel(si, np.array([3.0, 0.0]), np.array([1.0, 1.5])) for si in s)
    assert r.sup_M >= grid_max
    assert r.ratio == pytest.approx(r.sup_M / r.bound)
    assert len(r.csv_row()) == len(r.CSV_HEADER)


def test_b_nonpositive_sup_is_limit_at_s_one():
    # for b <= 0 the kernel increases towards s = 1, where it equals pi^{-d/2} e^{-|y|^2}
    r = kernel_bound_report([2.0, 0.0], [-1.0, 0.5])
    assert r.sup_M == pytest.approx(math.exp(-1.25) / math.pi, rel=1e-12)
    assert r.sup_M > mehler_kernel(1 - 1e-8, np.array([2.0, 0.0]), np.array([-1.0, 0.5]))


def test_s_grid_is_dense_at_both_ends():
    s = default_s_grid(200)
    assert len(s) == 200 and s[0] < 1e-7 and 1 - s[-1] < 1e-7 and np.all(np.diff(s) > 0)


def test_majorant_alpha():
    assert majorant_alpha(2.0) == 0.5
    assert majorant_alpha(3.0) == pytest.approx(1 / 3)
    assert majorant_alpha(1 + 1e-9) < 1e-8 and majorant_alpha(1e9) < 1e-8
    with pytest.raises(ValueError):
        majorant_alpha(1.0)


def test_majorant_integral_bounded_in_x():
    vals = [global_majorant_integral([r, 0.0], 3.0) for r in (0.0, 2.0, 5.0)]
    assert max(vals) / min(vals) < 3
    # large |x|: the mass near y = x tends to 2 pi / alpha^2
    assert vals[-1] == pytest.approx(2 * math.pi * 9, rel=0.05)
