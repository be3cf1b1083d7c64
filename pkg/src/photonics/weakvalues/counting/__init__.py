"""Monte Carlo simulation of the photon-counting experiment and its estimators."""
