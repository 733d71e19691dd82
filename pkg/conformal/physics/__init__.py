"""
Field equations assembled from tractor operators: mass and weight relations,
spin 0, 1 and 2, arbitrary integer spin, Dirac and Rarita-Schwinger systems and
Killing tractors.  Each system module exposes a ``SUITE`` name and a function
returning a :class:`~conformal.reports.Report`.
"""
