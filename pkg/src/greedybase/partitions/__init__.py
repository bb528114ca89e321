"""Intersection-array machinery for S_{k x l} and A_{k x l}."""

from greedybase.partitions.arrays import (
    E,
    IntersectionTensor,
    KLPartition,
    intersection_tensor,
    random_margin_matrix,
    random_partition,
    random_split,
    realize2,
    realize3,
    theta,
)
from greedybase.partitions.keylemma import (
    KeyCheck,
    KeyRun,
    KeyState,
    KeyStep,
    TrivstabResult,
    ceil_log,
    lemma_key_check,
    lemma_key_continue,
    lemma_key_iterate,
    logfacts_check,
    logfacts_sweep,
    random_trivstab_instance,
    trivstab_conditions,
    trivstab_construct,
)
from greedybase.partitions.minimize import (
    FactorialMinimum,
    Min2ArrayResult,
    Min3ArrayResult,
    MultiplicitySeq,
    brute_min_factorial_product,
    min_2array,
    min_3array,
    min_factorial_product,
)
from greedybase.partitions.named import FAMILIES, expected_k_order, expected_multiset, named_arrays
from greedybase.partitions.symmetry import (
    ArraySymmetry,
    CanonicalForm,
    array_symmetries,
    canonical_form,
    equivalent,
    stab_order,
)

__all__ = [name for name in dir() if not name.startswith("_")]
