"""Exact diameters and coverage weights for split metacyclic groups.

The package has four computational layers:

* ``residue``    - units mod n, multiplicative orders, prime-power quotients
* ``coverage``   - signed-sum coverage sets over Z_n and their minimal weights
* ``metacyclic`` - group arithmetic, BFS word norms, bounded path construction
* ``bounds``     - evaluators for the diameter and weight bounds, with verdicts

plus golden table data (``tables``), verification sweeps (``sweeps``) and a
command line front end (``cli``).
"""

__version__ = "0.1.0"

from .residue import UnitContext, build_context, unit_order, quotient_unit
from .coverage import (
    BudgetExceeded,
    CoverageSet,
    ExponentSeq,
    FormalSum,
    SearchTruncated,
    codual,
    coverage_set,
    dual,
    full_weight,
    level_weight,
    minimal_cover_sequences,
    reduce_sum,
    refines,
    sequence_weight,
)
from .metacyclic import (
    GeneralGroup,
    NormTable,
    Path,
    SplitGroup,
    bounded_path,
    eval_path,
    norm_table,
    syllable_norm_table,
)

__all__ = [
    "BudgetExceeded",
    "CoverageSet",
    "ExponentSeq",
    "FormalSum",
    "GeneralGroup",
    "NormTable",
    "Path",
    "SearchTruncated",
    "SplitGroup",
    "UnitContext",
    "bounded_path",
    "build_context",
    "codual",
    "coverage_set",
    "dual",
    "eval_path",
    "full_weight",
    "level_weight",
    "minimal_cover_sequences",
    "norm_table",
    "quotient_unit",
    "reduce_sum",
    "refines",
    "sequence_weight",
    "syllable_norm_table",
    "unit_order",
]
