import logging

import click

from src import __version__
from src.commands import (
    classify_command,
    density_command,
    equiv_command,
    group_check_command,
    nested_command,
    pet_reduce_command,
    returns_command,
    scenario_command,
    weight_command,
    wvec_command,
)
from src.config import config
from src.errors import PetLabError

# Setup logging
logging.basicConfig(
    filename=config.log_path,
    level=config.get('logging', 'level'),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

logger = logging.getLogger(__name__)


class PetLabGroup(click.Group):
    """Maps library errors to their exit codes with a one-line diagnostic"""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except PetLabError as e:
            logger.error(f"Error in {ctx.invoked_subcommand}: {str(e)}")
            click.echo(f"error: {e}", err=True)
            ctx.exit(e.exit_code)


@click.group(cls=PetLabGroup)
@click.version_option(__version__, prog_name='petlab')
def cli():
    """Γ-polynomial algebra, PET-induction and return-time experiments."""


for command in (
    weight_command,
    wvec_command,
    equiv_command,
    group_check_command,
    pet_reduce_command,
    classify_command,
    returns_command,
    density_command,
    nested_command,
    scenario_command,
):
    cli.add_command(command)


if __name__ == "__main__":
    cli()
