"""Quantifier elimination, exact nonstandard models, and cut oracles.

The package is organized around the engines:

* :mod:`saturator.syntax`, :mod:`saturator.parser`, :mod:`saturator.coding`
  -- formula ASTs, the text grammar and the integer coding.
* :mod:`saturator.oracles`, :mod:`saturator.reals` -- membership oracles,
  bounded tree search and computable reals as cut oracles.
* :mod:`saturator.presburger`, :mod:`saturator.kernels` -- Cooper-style
  quantifier elimination and the vectorized ground evaluators.
* :mod:`saturator.doag`, :mod:`saturator.zgroup` -- lexicographic Hahn
  vectors and exact nonstandard models with residue profiles.
* :mod:`saturator.poly`, :mod:`saturator.rcf` -- exact polynomial
  arithmetic, Sturm root isolation and one-variable cell decomposition.
* :mod:`saturator.cli` -- the batch command line front end.
"""

__version__ = "0.1.0"
