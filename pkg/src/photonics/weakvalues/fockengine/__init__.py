"""Minimal Fock-space linear optics: photon-number states, beam splitters, losses and coincidence projection."""
