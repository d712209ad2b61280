"""smcselect -- adaptive Sequential Monte Carlo for Bayesian variable selection."""

__version__ = "0.1.0"
