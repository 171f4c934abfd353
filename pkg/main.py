# -*- coding: utf-8 -*-
"""
weylcones command line
- tables: closed-form counts and expectations
- verify / gp-check / chamber-intersect: exact enumeration against the formulas
- montecarlo: seeded estimators against the expectations
- export-sphere: d = 3 tessellation data for plotting

Exit codes: 0 ok, 1 mismatch, 2 usage, 3 resource budget.
"""
import logging
import sys
from contextlib import contextmanager
from functools import partial
from pathlib import Path
from typing import Optional

import click
import ujson

from weylcones import combinatorics, config
from weylcones.chambers import chamber_faces_meeting_subspace, random_subspace
from weylcones.errors import ResourceBudgetError, VerificationMismatch, WeylConesError
from weylcones.estimators import sample_config
from weylcones.experiments import run_experiment
from weylcones.formatting import dump_json, format_report, format_report_csv, format_report_text, format_table
from weylcones.models import CliConfig, Distribution, ExperimentSpec, Family, PointConfig, Quantity, RngSpec
from weylcones.sampling import RandomStream, freeze
from weylcones.sphere import export_sphere
from weylcones.tessellation import (
    check_budget,
    check_gp_chainwise,
    check_gp_lattice,
    cone_face_counts,
    enumerate_cones,
    summarize,
)
from weylcones.workers import parallel_map

logger = logging.getLogger(__name__)


# ======================================================
# Helpers
# ======================================================

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


@contextmanager
def _guard(subcommand: str):
    """Map library errors onto exit codes"""
    try:
        yield
    except ResourceBudgetError as e:
        logger.error(f'{subcommand}: {e}')
        sys.exit(EXIT_BUDGET)
    except VerificationMismatch as e:
        logger.error(f'{subcommand}: {e}')
        sys.exit(EXIT_MISMATCH)
    except ValueError as e:
        # pydantic ValidationError and the parameter-range errors are ValueErrors
        logger.error(f'{subcommand}: invalid arguments: {e}')
        sys.exit(EXIT_USAGE)
    except WeylConesError as e:
        logger.error(f'{subcommand}: {e}')
        sys.exit(EXIT_MISMATCH)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding='utf-8')
        logger.info(f'wrote {out}')
    else:
        click.echo(text, nl=False)


def _load_points(path: str) -> PointConfig:
    """Point file: {"family": "A"|"B", "points": [[...], ...]} with ints, floats or "p/q" strings"""
    with open(path, encoding='utf-8') as f:
        return PointConfig.model_validate(ujson.load(f))


def _raw_config(opts: CliConfig, index: int) -> PointConfig:
    """Frozen i.i.d. points without the general-position filter"""
    stream = RandomStream(RngSpec(seed=opts.seed).substream(index))
    return PointConfig(family=opts.family, d=opts.d, points=freeze(stream.points(opts.dist, opts.n, opts.d)))


def _configs(opts: CliConfig):
    """The point file, or --seeds sampled configurations in general position"""
    if opts.input:
        yield _load_points(opts.input)
        return
    for s in range(opts.seeds):
        yield sample_config(opts.dist, opts.family, opts.n, opts.d, RngSpec(seed=opts.seed).substream(s))


family_option = click.option('--family', type=click.Choice([f.value for f in Family]), default=None)
n_option = click.option('--n', 'n', type=int, default=None, help='number of points')
d_option = click.option('--d', 'd', type=int, default=None, help='ambient dimension')
dist_option = click.option('--dist', type=click.Choice([d.value for d in Distribution]), default='gaussian')
seed_option = click.option('--seed', type=int, default=0)
seeds_option = click.option('--seeds', type=int, default=10, help='number of sampled configurations')
threads_option = click.option('--threads', type=int, envvar='WEYL_CONES_THREADS', default=config.THREADS)
format_option = click.option('--format', 'fmt', type=click.Choice(['text', 'json', 'csv']), default='text')
out_option = click.option('--out', type=click.Path(dir_okay=False), default=None)
input_option = click.option('--input', 'input_path', type=click.Path(exists=True, dir_okay=False), default=None)
budget_option = click.option('--max-candidates', type=int, default=None, help='override the enumeration budget')


@click.group()
@click.option('--log-level', default=config.LOG_LEVEL, show_default=True)
def cli(log_level: str):
    """Weyl random cones: exact enumeration, closed forms and Monte Carlo checks"""
    logging.basicConfig(
        level=getattr(logging, log_level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


# ======================================================
# 1. tables
# ======================================================

@cli.command()
@family_option
@n_option
@d_option
@format_option
@out_option
def tables(family, n, d, fmt, out):
    """Closed-form counts and expectations for one (family, n, d)"""
    with _guard('tables'):
        opts = CliConfig(subcommand='tables', family=family, n=n, d=d, format=fmt, out=out)
        if not combinatorics.theorem_backed(opts.family, opts.n, opts.d):
            logger.warning('(n, d) lies outside the theorem range; values are formal')
        table = combinatorics.formula_table(opts.family, opts.n, opts.d)
        header = {'family': opts.family.value, 'n': opts.n, 'd': opts.d}
        _emit(format_table(table, opts.format, header), opts.out)


# ======================================================
# 2. verify
# ======================================================

def _verify_one(cfg: PointConfig, threads: int, max_candidates: Optional[int]) -> list:
    """(check, found, expected) rows for one configuration"""
    cones = enumerate_cones(cfg, threads, max_candidates)
    found = summarize(cfg, threads, max_candidates, cones)
    expected = combinatorics.expected_summary(cfg.family, cfg.n, cfg.d)
    per_cone = parallel_map(partial(cone_face_counts, cfg), cones, threads)
    rows = [('cones', found.cone_count, expected.cone_count)]
    for k in range(1, cfg.d + 1):
        rows.append((f'faces_{k}', found.face_counts[k], expected.face_counts[k]))
        rows.append((f'incidences_{k}', found.incidence_sums[k], expected.incidence_sums[k]))
        rows.append((f'incidences_by_cones_{k}', sum(counts[k] for counts in per_cone), expected.incidence_sums[k]))
    return rows


@cli.command()
@family_option
@n_option
@d_option
@dist_option
@seed_option
@seeds_option
@threads_option
@input_option
@budget_option
@format_option
@out_option
def verify(family, n, d, dist, seed, seeds, threads, input_path, max_candidates, fmt, out):
    """Enumerate sampled tessellations and compare every count with its closed form"""
    with _guard('verify'):
        opts = CliConfig(subcommand='verify', family=family, n=n, d=d, dist=dist, seed=seed, seeds=seeds,
                         threads=threads, input=input_path, max_candidates=max_candidates, format=fmt, out=out)
        if opts.input is None:
            check_budget(opts.family, opts.n, opts.max_candidates)
        results = []
        mismatch = None
        for index, cfg in enumerate(_configs(opts)):
            for check, found, expected in _verify_one(cfg, opts.threads, opts.max_candidates):
                ok = found == expected
                results.append({'config': index, 'check': check, 'found': found, 'expected': expected, 'ok': ok})
                if not ok and mismatch is None:
                    mismatch = cfg
        if opts.format == 'json':
            text = dump_json({'schema': config.SCHEMA_VERSION, 'results': results})
        elif opts.format == 'csv':
            text = 'config,check,found,expected,ok\n' + ''.join(
                f"{r['config']},{r['check']},{r['found']},{r['expected']},{int(r['ok'])}\n" for r in results
            )
        else:
            text = ''.join(
                f"config {r['config']}: {r['check']} = {r['found']} (expected {r['expected']}) "
                f"{'ok' if r['ok'] else 'MISMATCH'}\n" for r in results
            )
        _emit(text, opts.out)
        if mismatch is not None:
            click.echo(dump_json(mismatch.model_dump()), err=True, nl=False)
            raise VerificationMismatch('enumeration disagrees with the closed forms (counterexample above)')


# ======================================================
# 3. gp-check
# ======================================================

@cli.command('gp-check')
@family_option
@n_option
@d_option
@dist_option
@seed_option
@input_option
@budget_option
def gp_check(family, n, d, dist, seed, input_path, max_candidates):
    """Run both general-position checkers on one configuration"""
    with _guard('gp-check'):
        opts = CliConfig(subcommand='gp-check', family=family, n=n, d=d, dist=dist, seed=seed,
                         input=input_path, max_candidates=max_candidates)
        cfg = _load_points(opts.input) if opts.input else _raw_config(opts, 0)
        check_budget(cfg.family, cfg.n, opts.max_candidates)
        chainwise = check_gp_chainwise(cfg)
        lattice = check_gp_lattice(cfg)
        click.echo(f'chainwise = {str(chainwise).lower()}\nlattice = {str(lattice).lower()}')
        if chainwise != lattice:
            raise VerificationMismatch('the two general-position checkers disagree')


# ======================================================
# 4. montecarlo
# ======================================================

@cli.command()
@click.option('--quantity', type=click.Choice([q.value for q in Quantity]), default=None)
@family_option
@n_option
@d_option
@click.option('--k', 'k', type=int, default=None)
@click.option('--j', 'j', type=int, default=None)
@dist_option
@click.option('--trials', type=int, default=1000)
@click.option('--inner-trials', type=int, default=200, help='draws per cone for Uj, vj, lambda and Ykj')
@seed_option
@threads_option
@input_option
@format_option
@out_option
def montecarlo(quantity, family, n, d, k, j, dist, trials, inner_trials, seed, threads, input_path, fmt, out):
    """Estimate one functional of the Weyl random cone and compare it with the closed form"""
    with _guard('montecarlo'):
        if input_path:
            with open(input_path, encoding='utf-8') as f:
                spec = ExperimentSpec.model_validate(ujson.load(f))
        else:
            spec = ExperimentSpec(quantity=quantity, family=family, n=n, d=d, k=k, j=j, dist=dist,
                                  trials=trials, inner_trials=inner_trials, seed=seed)
        report = run_experiment(spec, threads)
        if fmt == 'json':
            text = format_report(report)
        elif fmt == 'csv':
            text = format_report_csv([report])
        else:
            text = format_report_text(report)
        _emit(text, out)
        if not report.passed:
            raise VerificationMismatch(f'estimate {report.estimate.mean} is off its target')


# ======================================================
# 5. chamber-intersect
# ======================================================

@cli.command('chamber-intersect')
@family_option
@n_option
@d_option
@click.option('--k', 'k', type=int, default=None)
@seed_option
@seeds_option
@threads_option
@budget_option
def chamber_intersect(family, n, d, k, seed, seeds, threads, max_candidates):
    """Count chamber k-faces meeting random d-dimensional subspaces of R^n"""
    with _guard('chamber-intersect'):
        opts = CliConfig(subcommand='chamber-intersect', family=family, n=n, d=d, k=k, seed=seed, seeds=seeds,
                         threads=threads, max_candidates=max_candidates)
        expected = combinatorics.chamber_intersection_count(opts.family, opts.n, opts.d, opts.k)
        failed = False
        for s in range(opts.seeds):
            U = random_subspace(opts.family, opts.n, opts.d, RngSpec(seed=opts.seed).substream(s))
            found = chamber_faces_meeting_subspace(opts.family, opts.n, opts.k, U, opts.threads, opts.max_candidates)
            click.echo(f'subspace {s}: {found} (expected {expected}) {"ok" if found == expected else "MISMATCH"}')
            failed = failed or found != expected
        if failed:
            raise VerificationMismatch('brute-force chamber count disagrees with the closed form')


# ======================================================
# 6. export-sphere
# ======================================================

@cli.command('export-sphere')
@family_option
@n_option
@d_option
@dist_option
@seed_option
@input_option
@out_option
def export_sphere_cmd(family, n, d, dist, seed, input_path, out):
    """Great circles and cone polygons of a tessellation of R^3 as json"""
    with _guard('export-sphere'):
        opts = CliConfig(subcommand='export-sphere', family=family, n=n, d=3 if d is None else d, dist=dist,
                         seed=seed, seeds=1, input=input_path, out=out)
        cfg = next(_configs(opts))
        _emit(dump_json(export_sphere(cfg)), opts.out)


if __name__ == '__main__':
    cli()
