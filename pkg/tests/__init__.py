"""Tests for hitcurve."""
