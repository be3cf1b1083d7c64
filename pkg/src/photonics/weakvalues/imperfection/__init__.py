"""Imperfect mode matching as a two-qubit channel, its process tomography, and the model predictions built on it."""
