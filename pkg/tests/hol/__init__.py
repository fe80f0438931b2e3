"""Tests for the higher-order logic kernel."""
