"""Synthetic environments, estimators' data and Monte Carlo coverage checks."""
