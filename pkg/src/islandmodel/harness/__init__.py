"""Experiment runner, statistics, output writers and the command line."""
