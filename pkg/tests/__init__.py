"""Tests for mtc_coset."""
