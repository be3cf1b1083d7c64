# -*- coding: utf-8 -*-
"""Postselected weak measurements of single-photon polarization."""
import importlib.resources

__version__ = VERSION = importlib.resources.files(__name__).joinpath("VERSION.txt").read_text().strip()
