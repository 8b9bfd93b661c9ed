"""Allow ``python -m mobimetrics ...`` as an alias for the console script."""

from .cli import main

main()
