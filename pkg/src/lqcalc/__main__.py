import sys

from .exprio import run_cli

sys.exit(run_cli())
