"""Unit Tests for the Time Sets, Traces, Formulas and Models."""
