"""kforge: exact computer algebra for kappa-Minkowski twist deformations.

Layers, bottom up:

* :mod:`kforge.series` - exact truncated power series over Gaussian rationals.
* :mod:`kforge.weyl_ops` - normally ordered polynomial differential operators
  and their tensor products.
* :mod:`kforge.twists` - Jordanian and Abelian twist families, star products,
  cocycle checks, coordinate realizations.
* :mod:`kforge.hopf` - deformed coproducts and antipodes with golden tables.
* :mod:`kforge.realization` - the ansatz layer: derived function families,
  deformed boosts, Dirac derivatives, the wave operator, and the de Sitter
  bracket-table isomorphism.
* :mod:`kforge.dispersion` - floating-point dispersion relations.
* :mod:`kforge.cli` - command-line front end.
"""

from .series import DEFAULT_ORDER, GaussianRational, TruncatedSeries

__all__ = ["DEFAULT_ORDER", "GaussianRational", "TruncatedSeries"]
__version__ = "0.1.0"
