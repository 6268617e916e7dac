import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from revival import analysis, semiclassical as sc
from revival.params import ModelParams, TimeGrid
from revival.quantum import visibility_quantum

TWO_PI = 2 * math.pi


class TestMonotonicity:
    def test_quantum_revival_is_non_monotone(self):
        res = analysis.monotonicity_scan(lambda t: visibility_quantum(ModelParams(0.1), t), TWO_PI)
        assert not res.monotone
        assert math.pi < res.first_violation <= math.pi + TWO_PI / 1000 + 1e-12

    def test_constant_is_monotone(self):
        res = analysis.monotonicity_scan(lambda t: visibility_quantum(ModelParams(0.0, 1.0), t), TWO_PI)
        assert res.monotone and res.first_violation is None

    def test_exponential_is_monotone(self):
        assert analysis.monotonicity_scan(lambda t: np.exp(-0.7 * t), 10.0).monotone

    @pytest.mark.parametrize("factory", [sc.model1, sc.model1_matched, sc.model2, sc.model3])
    def test_coupled_models_are_non_monotone(self, factory):
        res = analysis.monotonicity_scan(factory(ModelParams(0.1, 0.0, 0.5)), TWO_PI)
        assert not res.monotone
        assert res.first_violation == pytest.approx(math.pi, abs=0.01)

    def test_zero_model_is_monotone(self):
        assert analysis.monotonicity_scan(sc.zero_model(), TWO_PI).monotone

    def test_step_floor(self):
        with pytest.raises(ValueError):
            analysis.monotonicity_scan(sc.zero_model(), 1.0, steps=99)


class TestSemigroup:
    def test_model1_half_periods(self):
        rep = analysis.semigroup_violation(sc.model1(ModelParams(0.1, 0.0, 0.5)), [(math.pi, math.pi)])
        assert rep.violation == pytest.approx(0.1478562110, abs=1e-10)
        assert rep.violation == pytest.approx(1 - math.exp(-0.16), abs=1e-12)
        assert not rep.monotone

    @given(st.floats(0.01, 0.5), st.floats(0.0, 3.0))
    @settings(max_examples=30)
    def test_model1_formula(self, lam, nc):
        rep = analysis.semigroup_violation(sc.model1(ModelParams(lam, 0.0, nc)), [(math.pi, math.pi)])
        assert rep.violation == pytest.approx(1 - math.exp(-32 * lam**2 * nc), abs=1e-12)

    def test_uncoupled_model(self):
        rep = analysis.semigroup_violation(sc.model2(ModelParams(0.0, 1.0)), [(0.3, 1.1), (math.pi, 2.0)])
        assert rep.violation == 0.0 and rep.monotone

    @given(st.floats(0.0, 2.0), st.lists(st.tuples(st.floats(0, 10), st.floats(0, 10)), min_size=1, max_size=5))
    def test_exponential_is_exact_semigroup(self, gamma, pairs):
        rep = analysis.semigroup_violation(lambda t: np.exp(-gamma * t), pairs)
        assert rep.violation <= 1e-12

    def test_report_shape(self):
        pairs = [(0.5, 0.5), (1.0, 2.0)]
        rep = analysis.semigroup_violation(sc.model3(ModelParams(0.2, 0.5)), pairs)
        assert rep.times == tuple(pairs)
        assert len(rep.deviations) == 2
        assert rep.violation == max(rep.deviations)

    def test_empty_pairs(self):
        with pytest.raises(ValueError):
            analysis.semigroup_violation(sc.zero_model(), [])


class TestTti:
    taus = np.linspace(0.1, 6.0, 10)
    ts = np.linspace(0.0, 5.0, 10)

    def test_model1_analytic(self):
        rep = analysis.tti_check_model1(ModelParams(0.1, 0.0, 0.5), self.taus, self.ts)
        assert rep.worst <= 1e-12
        assert len(rep.max_spread) == 10

    def test_model1_increment_variance(self):
        p = ModelParams(0.3, 0.0, 1.5)
        inc = analysis.increment_model(sc.model1(p), 2.3)
        np.testing.assert_allclose(inc.variance(self.taus), analysis.model1_increment_variance(p, self.taus),
                                   atol=1e-12)

    def test_model1_monte_carlo(self):
        rep = analysis.tti_check_model1(ModelParams(0.2, 0.0, 0.5), self.taus[:4], self.ts[:4], samples=20_000, seed=3)
        for spread, err in zip(rep.mc_spread, rep.mc_stderr):
            assert spread <= 5 * math.sqrt(2) * err + 1e-12

    def test_full_period_increment(self):
        rep = analysis.tti_check(sc.model1(ModelParams(0.2, 0.5, 1.0)), [TWO_PI], self.ts)
        assert rep.worst <= 1e-12

    @pytest.mark.parametrize("factory", [sc.model2, sc.model3])
    def test_other_models_are_not_invariant(self, factory):
        rep = analysis.tti_check(factory(ModelParams(0.2, 0.5)), [math.pi / 2], self.ts)
        assert rep.worst > 1e-3


class TestCompare:
    grid = TimeGrid(0.0, 4 * math.pi, 400)

    def test_exact_models(self):
        p = ModelParams(0.2, 0.7)
        table = analysis.compare_curves(p, [sc.model2(p), sc.model3(p), sc.model1_matched(p)], self.grid)
        assert all(d <= 1e-12 for d in table.max_deviation.values())

    def test_vacuum_model1_misses_zero_point(self):
        p = ModelParams(0.1, 0.0, 0.0)
        table = analysis.compare_curves(p, {"sc1": sc.model1(p)}, TimeGrid(0.0, math.pi, 2))
        assert table.max_deviation["sc1"] == pytest.approx(1 - math.exp(-0.08), abs=1e-10)
        assert table.max_deviation["sc1"] == pytest.approx(0.0768836536, abs=1e-10)

    def test_columns_and_rows(self):
        p = ModelParams(0.1, 0.0)
        table = analysis.compare_curves(p, {"sc2": sc.model2(p)}, TimeGrid(0.0, 1.0, 4))
        assert table.columns() == ["omega_t", "v_quantum", "v_sc2"]
        rows = list(table.rows())
        assert len(rows) == 5 and rows[0] == [0.0, 1.0, 1.0]
        assert set(table.pairwise_deviation()) == {("quantum", "sc2")}
