"""Exact greedy bases for S_n and A_n on r-subsets and uniform partitions.

Subpackages:

* :mod:`greedybase.subsets` -- neighbourhood-cell engine for the action on r-sets.
* :mod:`greedybase.partitions` -- intersection arrays for the action on (k,l)-partitions.
* :mod:`greedybase.oracle` -- explicit permutation groups used as ground truth.
* :mod:`greedybase.experiments` -- reports and the ``greedybase`` command line.
"""

from greedybase.errors import CapExceeded, HypothesisError

__version__ = "0.1.0"

__all__ = ["CapExceeded", "HypothesisError", "__version__"]
