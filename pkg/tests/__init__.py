"""Tests for hyperqif."""
