"""colored-scatter - capacity of MIMO channels with colored diffuse scattering."""

__version__ = "1.0.0"
__author__ = "Theyab"
