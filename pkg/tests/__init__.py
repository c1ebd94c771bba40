# -*- coding: utf-8 -*-

"""Test package for coarse_maps."""
