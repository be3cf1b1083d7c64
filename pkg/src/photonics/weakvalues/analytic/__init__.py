"""Qubit-level analytic layer: polarization states, meter settings, POVMs, postselected statistics and weak values."""
