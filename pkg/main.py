import click

# Import command groups
from commands.convert import convert
from commands.relations import compare, enumerate_command, member_command, validate
from commands.wp import wp
from commands.zoo import zoo
from core.config import settings
from core.logger import configure_logging

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


@click.group()
@click.version_option(settings.VERSION, prog_name=settings.APP_NAME)
@click.option(
    "--log-level", type=click.Choice(LOG_LEVELS, case_sensitive=False), default=None,
    help="Override RELKIT_LOG_LEVEL.",
)
def cli(log_level):
    """relkit: binary relations on words, their two-tape and unfolded encodings,
    and the constructions between them."""
    configure_logging(log_level)


cli.add_command(validate)
cli.add_command(enumerate_command)
cli.add_command(member_command)
cli.add_command(convert)
cli.add_command(compare)
cli.add_command(zoo)
cli.add_command(wp)


if __name__ == "__main__":
    cli()
