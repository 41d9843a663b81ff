"""Test modules for the learner-agnostic prefiltering simulator."""

# This file makes the tests directory a Python package
