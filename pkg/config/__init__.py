"""Configuration package for qkmech."""
