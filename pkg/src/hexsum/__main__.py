"""python -m hexsum delegates to the CLI."""

from .cli import console_main

console_main()
