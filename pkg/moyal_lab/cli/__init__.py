"""Command-line front end: subcommand dispatch, sweeps, artifact export and the acceptance runner."""
