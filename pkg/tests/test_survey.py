from fractions import Fraction as F

import pytest

from pcdyn import (
    Backend,
    Breakpoints,
    InexactPreimageError,
    IteratedFunctionSystem,
    PiecewiseContraction,
    Quadratic,
    preimage_set,
)
from pcdyn.config import RunConfig
from pcdyn.maps import Affine
from pcdyn.survey import run_sample, run_survey, survey_csv


def small_cfg(**kw):
    base = dict(
        backend=Backend.exact(), seed=3, samples=10, n=2, grid=8
    )
    base.update(kw)
    return RunConfig(**base)


class TestRunSample:
    def test_record_fields(self):
        rec = run_sample(small_cfg(), 0)
        assert rec.index == 0
        assert len(rec.breakpoints) == 1
        assert len(rec.maps) == 2
        if rec.conclusive:
            assert rec.q_status == "complete"
            assert rec.m >= 1
            assert 1 <= rec.orbit_count <= 2

    def test_samples_independent_of_order(self):
        a = [run_sample(small_cfg(), i) for i in range(5)]
        b = [run_sample(small_cfg(), i) for i in reversed(range(5))]
        assert a == list(reversed(b))


class TestRunSurvey:
    def test_report_aggregates(self):
        report = run_survey(small_cfg())
        assert len(report.records) == 10
        assert report.conclusive_count + report.inconclusive_count == 10
        hist = report.orbit_histogram()
        assert sum(hist.values()) == report.conclusive_count
        assert not report.bound_violated()

    def test_zero_samples(self):
        report = run_survey(small_cfg(samples=0))
        assert report.records == ()
        assert report.periodic_fraction == 0.0
        csv = survey_csv(report)
        assert "aggregate" in csv

    def test_csv_stable(self):
        a = survey_csv(run_survey(small_cfg()))
        b = survey_csv(run_survey(small_cfg()))
        assert a == b

    def test_parallel_matches_serial(self):
        a = survey_csv(run_survey(small_cfg(jobs=1)))
        b = survey_csv(run_survey(small_cfg(jobs=3)))
        assert a == b


class TestQuadraticFlows:
    def test_backward_closure_flags_inexact(self):
        # the quadratic branch sends (-1 + sqrt(9/5))/2 onto the breakpoint:
        # an irrational backward iterate inside the branch domain
        f = PiecewiseContraction(
            IteratedFunctionSystem(
                (Quadratic(F(1, 4), F(1, 4), F(1, 5)), Affine(F(1, 2), F(1, 8)))
            ),
            Breakpoints((F(1, 4),)),
        )
        with pytest.raises(InexactPreimageError):
            preimage_set(f)

    def test_forward_orbit_uses_float_backend(self):
        # nonlinear families iterate in floats: exact denominators square
        # every step and are useless for long orbits
        from pcdyn import orbit

        f = PiecewiseContraction(
            IteratedFunctionSystem(
                (Quadratic(0.25, 0.25, 0.2), Affine(0.5, 0.125))
            ),
            Breakpoints((0.4,)),
        )
        rec = orbit(f, 1 / 3, 3000, backend=Backend.floating())
        assert rec.converged
        z = rec.orbit.points[0]
        x = z
        for _ in range(rec.orbit.period):
            x = f(x)
        assert abs(x - z) < 1e-8
