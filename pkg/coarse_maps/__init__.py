"""
.. include:: ../README.md
"""

__author__ = 'coarse-maps developers'
__version__ = '0.1.0'

from coarse_maps.groups import FreeGroup, IntegerGroup, LatticeGroup, parse_group
from coarse_maps.gmaps import GroupMap
from coarse_maps.defects import Classification, DefectProfile, profile
from coarse_maps.reports import Report
