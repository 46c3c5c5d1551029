"""Polar orbitopes of classical compact Lie groups: membership oracles,
spectrahedral representations, coorbitopes and verification tools."""

__version__ = "0.1.0"
