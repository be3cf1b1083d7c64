# -*- coding: utf-8 -*-
"""Photonics Namespace."""
