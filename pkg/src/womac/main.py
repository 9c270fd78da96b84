import click

from womac.commands.experiment import experiment
from womac.commands.score import score
from womac.commands.simulate import simulate
from womac.logger import logger as console


@click.group()
@click.option("--quiet", "-q", is_flag=True, help="Only print errors.")
def cli(quiet: bool) -> None:
    """Competition scoring with jackknifed meta-learned references."""
    console.quiet = quiet


# Register commands
cli.add_command(score)
cli.add_command(simulate)
cli.add_command(experiment)

if __name__ == "__main__":
    cli()
