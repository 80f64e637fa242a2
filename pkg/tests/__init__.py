"""Tests package for qkmech."""
