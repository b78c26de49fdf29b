import logging

import click

from src.commands.common import emit, model_option, out_option, resolve_model
from src.config import config
from src.data_loader import DataLoader
from src.pet import RULES, export_trace, pet_reduce
from src.reports import make_run_config

logger = logging.getLogger(__name__)


@click.command('pet-reduce')
@click.argument('system_file', type=click.Path(exists=True, dir_okay=False))
@click.option('--rule', type=click.Choice(RULES), default='quotient', show_default=True)
@click.option('--ell', default=None, type=click.IntRange(min=0), help="Shift count for proof_step (default from config).")
@model_option
@out_option
def pet_reduce_command(system_file, rule, ell, model, out):
    """Run PET-induction on a system file and emit the reduction trace."""
    data = DataLoader.read_json(system_file)
    if model is None and isinstance(data, dict):
        model = data.get('model')
    texts = data.get('system', []) if isinstance(data, dict) else data
    group = resolve_model(model, texts)
    system = DataLoader.load_system(system_file, group)
    ell = config.get('pet', 'ell') if ell is None else ell

    run_config = make_run_config(
        command='pet-reduce', model=group.name, expressions=[str(g) for g in system], rule=rule, ell=ell, out=out,
    )
    trace = pet_reduce(system, rule, ell=ell)
    emit(run_config, {
        'steps': export_trace(trace),
        'terminal': [str(g) for g in trace.terminal],
        'strictly_decreasing': trace.is_strictly_decreasing(),
    }, out)
