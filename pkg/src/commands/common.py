import logging
import re
from functools import lru_cache

import click

from src.config import config
from src.data_loader import DataLoader
from src.reports import dump_report, write_report

logger = logging.getLogger(__name__)

_T_FACTOR = re.compile(r"(^|\s)T\s*\^")


def resolve_model(name, expressions=()):
    """--model value, else Z1 for T-notation, else the configured default"""
    if name is None:
        if expressions and all(_T_FACTOR.search(e) for e in expressions):
            name = 'Z1'
        else:
            name = config.get('cli', 'default_model')
    return DataLoader.load_model(name)


@lru_cache(maxsize=4)
def load_word(path=None):
    return DataLoader.load_substitution(path)


def parse_window(ctx, param, value):
    if value is None:
        return None
    try:
        lo, hi = (int(v) for v in value.split(':'))
    except ValueError:
        raise click.BadParameter(f"expected lo:hi, got '{value}'")
    if lo > hi:
        raise click.BadParameter(f"window {lo}:{hi} is empty")
    return lo, hi


def emit(run_config, result, out=None):
    """Write the report to --out, or print it"""
    if out:
        path = write_report(run_config, result, out)
        click.echo(f"report written to {path}")
    else:
        click.echo(dump_report(run_config, result), nl=False)


model_option = click.option('--model', default=None, help="Builtin model (Z<s>, heisenberg, ut4) or model JSON file.")
out_option = click.option('--out', default=None, type=click.Path(dir_okay=False), help="Output file.")
seed_option = click.option('--seed', default=lambda: config.get('cli', 'seed'), type=int, show_default='config')
window_option = click.option('--window', default='0:10000', callback=parse_window, show_default=True, help="lo:hi")
substitution_option = click.option('--substitution', default=None, type=click.Path(exists=True, dir_okay=False),
                                   help="Substitution JSON file (default: the configured one).")
