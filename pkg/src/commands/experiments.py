import logging

import click

from src.analytics.scenarios import SCENARIOS, ScenarioRunner
from src.commands.common import (
    emit,
    load_word,
    out_option,
    seed_option,
    substitution_option,
    window_option,
)
from src.config import config
from src.data_loader import DataLoader
from src.dynsys import density_experiment, nested_return_construction, return_set
from src.errors import ConfigError
from src.notation import parse_poly
from src.reports import NestedReport, make_run_config
from src.zsets import classify

logger = logging.getLogger(__name__)

gap_option = click.option('--gap', 'gaps', multiple=True, type=click.IntRange(min=1),
                          help="Gap bound G (repeatable, default from config).")
run_option = click.option('--run', 'runs', multiple=True, type=click.IntRange(min=1),
                          help="Run length L (repeatable, default from config).")
poly_option = click.option('--poly', 'polys', multiple=True, required=True, help="Integer polynomial in n (repeatable).")


def _targets(polys, targets):
    if len(targets) == 1:
        return list(targets) * len(polys)
    if len(targets) != len(polys):
        raise ConfigError(f"give one target pattern per polynomial ({len(polys)}), got {len(targets)}")
    return list(targets)


def _defaults(gaps, runs):
    return (list(gaps) or [config.get('classification', 'gap')],
            list(runs) or [config.get('classification', 'run')])


@click.command('classify')
@click.argument('csv_file', type=click.Path(exists=True, dir_okay=False))
@gap_option
@run_option
@click.option('--span', default=None, type=click.IntRange(min=1), help="Span for the piecewise syndetic verdict.")
@out_option
def classify_command(csv_file, gaps, runs, span, out):
    """Classify a membership CSV (columns n, member)."""
    gaps, runs = _defaults(gaps, runs)
    S = DataLoader.load_window_set(csv_file)
    run_config = make_run_config(
        command='classify', lo=S.lo, hi=S.hi, span=span, out=out,
        extra={'gaps': gaps, 'runs': runs, 'input': str(csv_file)},
    )
    emit(run_config, classify(S, runs=runs, gaps=gaps, span=span), out)


@click.command('returns')
@poly_option
@click.option('-U', '--base', 'base', default='0', show_default=True, help="Pattern of the cylinder U.")
@click.option('-V', '--target', 'targets', multiple=True, default=('0',), show_default=True,
              help="Pattern of V_i (one per polynomial, or one for all).")
@window_option
@gap_option
@run_option
@click.option('--format', 'fmt', type=click.Choice(['csv', 'json']), default='csv', show_default=True)
@substitution_option
@out_option
def returns_command(polys, base, targets, window, gaps, runs, fmt, substitution, out):
    """Return-time set {n : U ∩ T^-p_1(n) V_1 ∩ ... non-empty} on the substitution word."""
    targets = _targets(polys, targets)
    sys = load_word(substitution)
    pairs = [(parse_poly(p), sys.cylinder(v)) for p, v in zip(polys, targets)]
    S = return_set(sys, sys.cylinder(base), pairs, window)
    if fmt == 'csv':
        if out:
            DataLoader.save_window_set(S, out)
            click.echo(f"membership written to {out}")
        else:
            click.echo(S.to_frame().to_csv(index=False, lineterminator='\n'), nl=False)
        return
    gaps, runs = _defaults(gaps, runs)
    run_config = make_run_config(
        command='returns', expressions=list(polys), lo=window[0], hi=window[1], format=fmt, out=out,
        extra={'base': base, 'targets': targets, 'gaps': gaps, 'runs': runs},
    )
    emit(run_config, classify(S, runs=runs, gaps=gaps), out)


@click.command('density')
@poly_option
@click.option('--word-length', default=2, show_default=True, type=click.IntRange(min=1))
@window_option
@click.option('--samples', default=50, show_default=True, type=click.IntRange(min=1))
@seed_option
@substitution_option
@out_option
def density_command(polys, word_length, window, samples, seed, substitution, out):
    """Coverage of admissible word tuples along (x + p_1(n), ..., x + p_k(n))."""
    sys = load_word(substitution)
    run_config = make_run_config(
        command='density', expressions=list(polys), lo=window[0], hi=window[1],
        word_length=word_length, samples=samples, seed=seed, out=out,
    )
    report = density_experiment(sys, [parse_poly(p) for p in polys], word_length, window, samples, seed=seed)
    emit(run_config, report, out)


@click.command('nested')
@poly_option
@click.option('-V', '--target', 'targets', multiple=True, default=('0',), show_default=True)
@click.option('--r', 'growth', default='1', show_default=True, help="Gap growth r as a polynomial in n.")
@click.option('--ell', default=1, show_default=True, type=click.IntRange(min=0))
@substitution_option
@out_option
def nested_command(polys, targets, growth, ell, substitution, out):
    """Nested cylinder refinements along a sparse integer sequence."""
    targets = _targets(polys, targets)
    sys = load_word(substitution)
    r = parse_poly(growth)
    parsed = [parse_poly(p) for p in polys]
    construction = nested_return_construction(
        sys, parsed, [sys.cylinder(v) for v in targets], r.evaluate, ell,
    )
    run_config = make_run_config(
        command='nested', expressions=list(polys), ell=ell, out=out, extra={'targets': targets, 'r': growth},
    )
    report = NestedReport(
        polynomials=list(polys),
        shifts=construction.shifts,
        chains=[[{'pattern': c.pattern, 'anchor': c.anchor} for c in chain] for chain in construction.chains],
        verified=construction.verify(sys),
    )
    emit(run_config, report, out)


@click.command('scenario')
@click.argument('name', type=click.Choice(sorted(SCENARIOS) + ['all']))
@click.option('--ell', default=0, show_default=True, type=click.IntRange(min=0))
@substitution_option
@out_option
def scenario_command(name, ell, substitution, out):
    """Run one of the named Γ = Z scenarios (or all of them)."""
    runner = ScenarioRunner(load_word(substitution), run=config.get('classification', 'run'), ell=ell)
    result = runner.run_all() if name == 'all' else runner.run_scenario(name)
    emit(make_run_config(command='scenario', ell=ell, out=out, extra={'name': name}), result, out)
