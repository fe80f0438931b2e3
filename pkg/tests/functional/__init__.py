"""Functional tests of the `faltertide` command line."""
