"""Exact computations for quartic del Pezzo surfaces and their fibrations over P^1."""

__version__ = "0.1.0"
SCHEMA = "dp4kit/1"
