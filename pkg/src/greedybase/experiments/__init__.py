"""Reports reproducing the computational claims, and the command line."""

from greedybase.experiments.commands import (
    cmd_min_array,
    cmd_oracle,
    cmd_partitions,
    cmd_ravenous_table,
    cmd_subsets,
)
from greedybase.experiments.report import Check, Quantity, RunReport
from greedybase.experiments.verify import VERIFIERS, cmd_verify

__all__ = [
    "Check",
    "Quantity",
    "RunReport",
    "VERIFIERS",
    "cmd_min_array",
    "cmd_oracle",
    "cmd_partitions",
    "cmd_ravenous_table",
    "cmd_subsets",
    "cmd_verify",
]
