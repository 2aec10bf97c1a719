"""Tests for cost models, the local argmin and dual gradients."""

import numpy as np
import pytest

from etdgt_experiments.core.errors import InvalidCostModel
from etdgt_experiments.core.objective import (
    CostBank,
    CostKind,
    CostModel,
    dual_gradient,
    eval_cost,
    local_argmin,
    marginal_cost,
    smoothness,
)

QUAD = CostModel(a=0.04, b=2.0, box_lo=0.0, box_hi=80.0, demand=10.0)
EXP = CostModel(
    kind=CostKind.QUADRATIC_EXP, a=0.04, b=2.0, exp_d=1.0, exp_e=5.0, exp_f=20.0,
    box_lo=0.0, box_hi=80.0, demand=0.0,
)


def test_cost_model_validation():
    with pytest.raises(InvalidCostModel):
        CostModel(a=0.0)
    with pytest.raises(InvalidCostModel):
        CostModel(a=1.0, box_lo=2.0, box_hi=1.0)
    with pytest.raises(InvalidCostModel):
        CostModel(kind="quadratic_exp", a=1.0, exp_f=0.0)


def test_quadratic_argmin_closed_form():
    """Interior price gives (p - b) / 2a, extreme prices hit the box."""
    assert local_argmin(QUAD, 8.1392) == pytest.approx((8.1392 - 2.0) / 0.08)
    assert local_argmin(QUAD, 100.0) == 80.0
    assert local_argmin(QUAD, 0.0) == 0.0
    np.testing.assert_allclose(local_argmin(QUAD, np.array([0.0, 4.0])), [0.0, 25.0])


def test_exponential_argmin_matches_price():
    price = 6.0
    w = local_argmin(EXP, price)
    assert 0.0 < w < 80.0
    assert marginal_cost(EXP, w) == pytest.approx(price, abs=1e-8)
    assert local_argmin(EXP, -10.0) == 0.0
    assert local_argmin(EXP, 1e4) == 80.0


def test_dual_gradient_is_demand_minus_response():
    x = -6.0
    assert dual_gradient(QUAD, x) == pytest.approx(10.0 - local_argmin(QUAD, 6.0))


def test_smoothness_skips_fixed_agents(case1):
    params = smoothness(case1.agents)
    assert params.L == pytest.approx(1.0 / 0.06)
    assert params.mu == pytest.approx(0.08)


def test_cost_bank_matches_scalar_path(case2):
    bank = CostBank(case2.agents)
    prices = np.linspace(-2.0, 15.0, case2.n).reshape(-1, 1)
    W = bank.argmin(prices)
    for i, model in enumerate(case2.agents):
        assert W[i, 0] == pytest.approx(local_argmin(model, prices[i, 0]), abs=1e-10)
    assert bank.demands().sum() == pytest.approx(case2.total_demand)


def test_dual_value_minimized_at_multiplier(case1, case1_oracle):
    """The dual objective is convex with its minimum at the oracle multiplier."""
    bank = CostBank(case1.agents)
    best = bank.dual_value(case1_oracle.x_star)
    for shift in (-0.5, 0.5):
        assert bank.dual_value(case1_oracle.x_star + shift) >= best - 1e-9


def test_cost_model_dict_round_trip():
    assert CostModel.from_dict(EXP.to_dict()) == EXP
    with pytest.raises(KeyError):
        CostModel.from_dict({"a": 1.0, "b": 0.0})


def test_eval_cost_closed_form():
    assert eval_cost(QUAD, 10.0) == pytest.approx(0.04 * 100 + 20.0)
    # outside the box is still evaluated
    assert eval_cost(QUAD, -5.0) == pytest.approx(0.04 * 25 - 10.0)
    assert eval_cost(EXP, 15.0) == pytest.approx(0.04 * 225 + 30.0 + np.exp(1.0))
    np.testing.assert_allclose(eval_cost(QUAD, np.array([0.0, 10.0])), [0.0, 24.0])


@pytest.mark.parametrize("model", [QUAD, EXP], ids=["quadratic", "exponential"])
def test_marginal_cost_strictly_increasing(model, rng):
    pairs = np.sort(rng.uniform(-50.0, 150.0, size=(1000, 2)), axis=1)
    pairs = pairs[pairs[:, 1] > pairs[:, 0]]
    lower = marginal_cost(model, pairs[:, 0])
    upper = marginal_cost(model, pairs[:, 1])
    assert np.all(upper > lower)


@pytest.mark.parametrize("name", ["case1", "case2"])
def test_dual_gradient_is_lipschitz(name, request, rng):
    scenario = request.getfixturevalue(name)
    L = smoothness(scenario.agents).L
    xs = rng.uniform(-20.0, 5.0, size=(200, 2))
    for model in scenario.agents:
        g1 = np.asarray(dual_gradient(model, xs[:, 0]))
        g2 = np.asarray(dual_gradient(model, xs[:, 1]))
        assert np.all(np.abs(g1 - g2) <= L * np.abs(xs[:, 0] - xs[:, 1]) + 1e-8)


def test_local_argmin_stays_in_box(case2, rng):
    prices = rng.uniform(-1e3, 1e3, size=500)
    prices[:4] = [-1e6, 1e6, 0.0, -0.0]
    for model in case2.agents:
        w = np.asarray(local_argmin(model, prices))
        assert np.all(w >= model.box_lo)
        assert np.all(w <= model.box_hi)
