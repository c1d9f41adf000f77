"""Tests für toeplitz_tau."""
