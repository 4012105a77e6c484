import sys

from source.apps.cli.commands import run_command


if __name__ == '__main__':
    sys.exit(run_command(sys.argv[1:]))
