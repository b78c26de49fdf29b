import logging

import click

from src.commands.common import emit, model_option, out_option, resolve_model, seed_option
from src.data_loader import DataLoader
from src.errors import ConfigError, GroupLawViolation
from src.gpoly import equivalent
from src.notation import format_poly, parse_gpoly
from src.pet import PolySystem, weight_vector
from src.reports import GroupCheckReport, make_run_config

logger = logging.getLogger(__name__)


@click.command('weight')
@click.argument('expression')
@model_option
def weight_command(expression, model):
    """Print the weight (l,k) of a Γ-polynomial."""
    group = resolve_model(model, [expression])
    g = parse_gpoly(expression, group)
    w = g.weight()
    click.echo(str(w))
    if w.l:
        click.echo(f"leading coefficient of S{w.l}: {g.leading_coefficient()}")
        click.echo(f"top exponent: {format_poly(g.components[w.l - 1])}")


@click.command('wvec')
@click.argument('expressions', nargs=-1)
@click.option('--file', 'system_file', default=None, type=click.Path(exists=True, dir_okay=False),
              help="JSON list of Γ-polynomials.")
@model_option
def wvec_command(expressions, system_file, model):
    """Print the weight vector of a system given inline or as a file."""
    if system_file:
        data = DataLoader.read_json(system_file)
        if model is None and isinstance(data, dict):
            model = data.get('model')
        texts = data.get('system', []) if isinstance(data, dict) else data
        system = DataLoader.load_system(system_file, resolve_model(model, texts))
    elif expressions:
        group = resolve_model(model, expressions)
        system = PolySystem([parse_gpoly(e, group) for e in expressions])
    else:
        raise ConfigError("give Γ-polynomials as arguments or with --file")
    click.echo(str(weight_vector(system)))


@click.command('equiv')
@click.argument('first')
@click.argument('second')
@model_option
def equiv_command(first, second, model):
    """Print whether two Γ-polynomials are equivalent."""
    group = resolve_model(model, [first, second])
    click.echo('true' if equivalent(parse_gpoly(first, group), parse_gpoly(second, group)) else 'false')


@click.command('group-check')
@model_option
@click.option('--samples', default=1000, show_default=True, type=click.IntRange(min=1))
@seed_option
@out_option
def group_check_command(model, samples, seed, out):
    """Randomized group-law and matrix-oracle check of a model."""
    group = resolve_model(model)
    run_config = make_run_config(command='group-check', model=group.name, samples=samples, seed=seed, out=out)
    report = GroupCheckReport(**group.check_group_laws(samples=samples, seed=seed))
    emit(run_config, report, out)
    if report.violations:
        raise GroupLawViolation(f"model '{group.name}' failed {report.violations} checks")
