"""Central values of elliptic-curve L-functions twisted by Dirichlet
characters of odd prime order: exact coset sums via modular-symbol
calibration, prime-level congruences, nonvanishing prime sets, Kummer
surface fiber search, torsion families, and a vanishing census for the
conductor-37 rank-one quadratic twin."""

__version__ = "0.1.0"
