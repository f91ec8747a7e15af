"""Tests for statecover."""
