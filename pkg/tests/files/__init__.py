"""Tests for file formats, reports and generators."""
