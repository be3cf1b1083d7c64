"""The nondeterministic two-photon polarization measurement device, built as a Fock-level linear-optics network."""
