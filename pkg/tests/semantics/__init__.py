"""Tests for the discrete and continuous semantics."""
