"""Multilevel balanced node separators."""

from .config import Mode, RatingKind, SepConfig, preset
from .driver import RunResult, run_multilevel, solve, vcycle_solve
from .graph import (
    BLOCK1,
    BLOCK2,
    SEP,
    BalanceSpec,
    Graph,
    GraphError,
    Partition3,
    ValidityReport,
    block_weights,
    build_graph,
    separator_weight,
    validate_separator,
)
from .io import parse_metis, read_metis, read_separator, write_metis, write_separator

__version__ = "0.1.0"
