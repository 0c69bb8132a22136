"""tropmob: tropical dual complexes, PL maps, multiplicity measures and mobility certificates."""

__version__ = "0.1.0"
