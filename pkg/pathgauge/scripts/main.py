import logging
import sys

from pathgauge.utils import settings

from .args import HELPERS
from .command import EXIT_USAGE

logger = logging.getLogger("pathgauge.scripts")


def print_commands():
    sys.stderr.write("usage: pathgauge <command> [options]\n\nAvailable Commands:\n")
    for x_helper in HELPERS:
        sys.stderr.write(f"  {x_helper}: {HELPERS[x_helper][1]}\n")


def configure_logging():
    logging.basicConfig(
        level=settings.LOG_LEVEL.upper(),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    # command summaries are always shown
    logger.setLevel(logging.INFO)


def main(argv=None) -> int:
    arguments = sys.argv[1:] if argv is None else list(argv)
    configure_logging()

    if not arguments:
        print_commands()
        return EXIT_USAGE
    helper = arguments[0]
    if helper not in HELPERS:
        sys.stderr.write("Command " + helper + " is not a valid command.\n")
        print_commands()
        return EXIT_USAGE

    command = HELPERS[helper][0]
    return command().run(args=arguments[1:])


def entrypoint():
    sys.exit(main())
