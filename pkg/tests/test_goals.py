from __future__ import annotations

import math

import numpy as np
import pytest

from qgraph.errors import ZeroGap
from qgraph.goals import (EigenvalueStop, MaximizeLambda1, MaximizeRatio,
                          MinimizeDistance, MinimizeLambda1, Program,
                          ProgramPhase, StepCountStop, TargetSpectrum,
                          goal_from_dict, goal_to_dict, required_eigen_count,
                          score, spectral_distance)
from qgraph.spectrum import RootSearchOptions, Spectrum, compute_spectrum

PI2 = math.pi ** 2


def spec_of(*pairs: tuple[float, int], k_max: float = 100.0) -> Spectrum:
    ks, ms = zip(*pairs)
    return Spectrum(tuple(ks), tuple(ms), k_max, "scan")


class TestSpectralDistance:
    def test_identity_is_zero(self):
        sp = spec_of((0.0, 1), (math.pi, 1), (2 * math.pi, 1))
        t = TargetSpectrum((0.0, PI2, 4 * PI2))
        assert spectral_distance(sp, t) == pytest.approx(0.0, abs=1e-12)

    def test_arithmetic_example(self):
        sp = spec_of((0.0, 1), (math.pi, 1), (2 * math.pi, 1))
        t = TargetSpectrum((0.0, 0.0, 0.0))
        assert spectral_distance(sp, t) == pytest.approx(PI2 * math.sqrt(17.0), rel=1e-12)

    def test_interval_matches_path_target(self, interval):
        sp = compute_spectrum(interval, RootSearchOptions(k_max=10.0))
        t = TargetSpectrum((0.0, PI2, 4 * PI2))
        assert spectral_distance(sp, t) < 1e-7

    def test_k_space_option(self):
        sp = spec_of((0.0, 1), (2.0, 1))
        t = TargetSpectrum((0.0, 1.0), space="k")
        assert spectral_distance(sp, t) == pytest.approx(1.0)

    def test_multiplicity_expansion(self):
        sp = spec_of((0.0, 1), (3.0, 2))
        t = TargetSpectrum((0.0, 9.0, 9.0))
        assert spectral_distance(sp, t) == pytest.approx(0.0)

    def test_metric_properties(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            vals = np.sort(rng.uniform(0.0, 30.0, size=3))
            a = spec_of((0.0, 1), *((float(math.sqrt(v)), 1) for v in np.unique(vals)))
            ta = TargetSpectrum((0.0, *np.sort(rng.uniform(0, 30, size=2))))
            tb = TargetSpectrum((0.0, *np.sort(rng.uniform(0, 30, size=2))))
            lam = a.eigenvalues(3)
            sa = spec_of(*zip([math.sqrt(x) for x in lam], [1, 1, 1]))
            # symmetry via swapping roles (distance is on sorted sequences)
            d_ab = math.dist(ta.values, tb.values)
            assert d_ab >= abs(spectral_distance(sa, ta) - spectral_distance(sa, tb)) - 1e-9


class TestScore:
    def test_max_lambda1_interval(self, interval):
        sp = compute_spectrum(interval, RootSearchOptions(k_max=10.0))
        s = score(MaximizeLambda1(), sp)
        assert s.value == pytest.approx(-PI2, abs=1e-8)

    def test_min_lambda1_sign(self, interval):
        sp = compute_spectrum(interval, RootSearchOptions(k_max=10.0))
        assert score(MinimizeLambda1(), sp).value == pytest.approx(PI2, abs=1e-8)

    def test_ratio_on_double_eigenvalue(self, triangle):
        sp = compute_spectrum(triangle, RootSearchOptions(k_max=10.0))
        assert score(MaximizeRatio(), sp).value == pytest.approx(-1.0, abs=1e-10)

    def test_matching_target_scores_zero(self, interval):
        sp = compute_spectrum(interval, RootSearchOptions(k_max=10.0))
        goal = MinimizeDistance(TargetSpectrum((0.0, PI2, 4 * PI2)))
        assert score(goal, sp).value < 1e-7

    def test_zero_gap(self):
        sp = spec_of((0.0, 1), (1e-8, 1), (1.0, 1))
        with pytest.raises(ZeroGap):
            score(MaximizeRatio(), sp)

    def test_ratio_always_at_least_one(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            ks = np.sort(rng.uniform(0.5, 20.0, size=3))
            sp = spec_of((0.0, 1), *((float(k), 1) for k in ks))
            assert score(MaximizeRatio(), sp).value <= -1.0

    def test_monotone_in_lambda1(self):
        lo = spec_of((0.0, 1), (2.0, 1))
        hi = spec_of((0.0, 1), (3.0, 1))
        assert score(MaximizeLambda1(), hi).value < score(MaximizeLambda1(), lo).value

    def test_program_not_scored_directly(self):
        goal = Program((ProgramPhase(MaximizeLambda1(), None),))
        with pytest.raises(TypeError):
            score(goal, spec_of((0.0, 1), (1.0, 1)))


class TestStops:
    def test_eigenvalue_stop(self):
        stop = EigenvalueStop(1, ">=", 4.0)
        assert stop.triggered(spec_of((0.0, 1), (2.0, 1)))
        assert not stop.triggered(spec_of((0.0, 1), (1.0, 1)))

    def test_bad_comparator(self):
        with pytest.raises(ValueError):
            EigenvalueStop(1, "!=", 4.0)

    def test_step_count_validation(self):
        with pytest.raises(ValueError):
            StepCountStop(0)


class TestTargetValidation:
    def test_must_start_at_zero(self):
        with pytest.raises(ValueError):
            TargetSpectrum((1.0, 2.0))

    def test_must_be_nondecreasing(self):
        with pytest.raises(ValueError):
            TargetSpectrum((0.0, 2.0, 1.0))

    def test_space_checked(self):
        with pytest.raises(ValueError):
            TargetSpectrum((0.0, 1.0), space="hz")


class TestRequiredCounts:
    @pytest.mark.parametrize("goal,count", [
        (MaximizeLambda1(), 2),
        (MinimizeLambda1(), 2),
        (MaximizeRatio(), 3),
        (MinimizeDistance(TargetSpectrum((0.0, 1.0, 2.0, 3.0))), 4),
    ])
    def test_counts(self, goal, count):
        assert required_eigen_count(goal) == count

    def test_program_takes_max(self):
        goal = Program((ProgramPhase(MaximizeLambda1(), EigenvalueStop(1, ">=", 1.0)),
                        ProgramPhase(MinimizeDistance(TargetSpectrum((0.0, 1.0, 2.0, 3.0, 4.0))), None)))
        assert required_eigen_count(goal) == 5


class TestGoalJson:
    @pytest.mark.parametrize("goal", [
        MaximizeLambda1(),
        MinimizeLambda1(),
        MaximizeRatio(),
        MinimizeDistance(TargetSpectrum((0.0, 39.478, 88.826, 88.826))),
        Program((ProgramPhase(MaximizeLambda1(), EigenvalueStop(1, ">=", 246.74)),
                 ProgramPhase(MinimizeDistance(TargetSpectrum((0.0, 246.74, 2220.66))),
                              StepCountStop(5)))),
    ])
    def test_round_trip(self, goal):
        assert goal_from_dict(goal_to_dict(goal)) == goal

    def test_unknown_type(self):
        with pytest.raises(ValueError):
            goal_from_dict({"type": "entropy"})
