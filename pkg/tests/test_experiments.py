from fractions import Fraction

import pytest

from weylcones.experiments import git_revision, run_experiment, target_of
from weylcones.formatting import format_report
from weylcones.models import ExperimentSpec, Family, Quantity


def _spec(**kwargs):
    kwargs.setdefault('family', Family.A)
    kwargs.setdefault('seed', 3)
    return ExperimentSpec(**kwargs)


def test_acceptance_is_certain_for_three_points():
    report = run_experiment(_spec(quantity=Quantity.ACCEPTANCE, n=3, d=2, trials=20))
    assert report.estimate.mean == 1.0
    assert report.estimate.target == 1
    assert report.passed


def test_top_face_count_is_exact():
    report = run_experiment(_spec(quantity=Quantity.FK, n=4, d=3, k=3, trials=10))
    assert report.estimate.mean == 1.0
    assert report.estimate.stderr == 0.0
    assert report.passed


def test_planar_cones_have_two_rays():
    report = run_experiment(_spec(quantity=Quantity.FK, n=4, d=2, k=1, trials=10))
    assert report.estimate.mean == 2.0
    assert report.estimate.target == 2
    assert report.passed


def test_planar_dual_cones_have_two_rays():
    report = run_experiment(_spec(quantity=Quantity.DUAL_FK, n=4, d=2, k=1, trials=8))
    assert report.estimate.mean == 2.0


def test_targets():
    assert target_of(_spec(quantity=Quantity.UJ, n=3, d=2, j=1, trials=1)) == Fraction(1, 6)
    assert target_of(_spec(quantity=Quantity.ACCEPTANCE, n=4, d=2, trials=1)) == Fraction(1, 2)


def test_reports_are_reproducible():
    spec = _spec(quantity=Quantity.UJ, n=4, d=2, j=1, trials=30, inner_trials=20)
    assert format_report(run_experiment(spec)) == format_report(run_experiment(spec))


def test_threads_do_not_change_the_report():
    spec = _spec(quantity=Quantity.FK, family=Family.B, n=3, d=2, k=1, trials=6)
    assert format_report(run_experiment(spec, threads=1)) == format_report(run_experiment(spec, threads=2))


def test_provenance():
    report = run_experiment(_spec(quantity=Quantity.ACCEPTANCE, n=3, d=2, trials=2), provenance={'host': 'ci'})
    assert report.provenance['revision'] == git_revision()
    assert report.provenance['dist'] == 'gaussian'
    assert report.provenance['host'] == 'ci'


@pytest.mark.parametrize('kwargs', [
    dict(quantity=Quantity.FK, n=4, d=2, trials=1),
    dict(quantity=Quantity.YKJ, n=4, d=2, k=1, j=2, trials=1),
    dict(quantity=Quantity.VJ, n=4, d=2, j=3, trials=1),
    dict(quantity=Quantity.ACCEPTANCE, n=2, d=2, trials=1),
    dict(quantity=Quantity.ACCEPTANCE, family=Family.GENERIC, n=4, d=2, trials=1),
])
def test_invalid_specs(kwargs):
    with pytest.raises(ValueError):
        _spec(**kwargs)


@pytest.mark.slow
def test_intrinsic_volume_family_b():
    report = run_experiment(_spec(quantity=Quantity.VJ, family=Family.B, n=3, d=2, j=1,
                                  trials=400, inner_trials=100))
    assert report.passed


@pytest.mark.slow
def test_size_functional_family_a():
    report = run_experiment(_spec(quantity=Quantity.YKJ, n=4, d=3, k=2, j=1, trials=300, inner_trials=100))
    assert report.passed


def _monte_carlo_grid():
    cells = []
    for family, n, d in ((Family.A, 5, 3), (Family.B, 3, 2)):
        cells += [dict(quantity=Quantity.FK, family=family, n=n, d=d, k=k, trials=2000) for k in range(1, d + 1)]
        cells += [dict(quantity=Quantity.UJ, family=family, n=n, d=d, j=j, trials=200) for j in range(1, d)]
        cells += [dict(quantity=Quantity.VJ, family=family, n=n, d=d, j=j, trials=200) for j in range(d + 1)]
        cells += [dict(quantity=Quantity.LAMBDA, family=family, n=n, d=d, k=k, trials=200) for k in range(1, d + 1)]
        cells += [dict(quantity=Quantity.YKJ, family=family, n=n, d=d, k=k, j=j, trials=200)
                  for k in range(1, d + 1) for j in range(1, k + 1)]
    return cells


@pytest.mark.slow
@pytest.mark.parametrize('kwargs', _monte_carlo_grid())
def test_monte_carlo_grid(kwargs):
    report = run_experiment(_spec(seed=17, **kwargs))
    assert report.passed, report.estimate
