import logging

import numpy as np

from mcwave.models.lpmatrix import MatrixSymbol
from mcwave.models.tables import TABLES, CoefficientDelta, TableComparison
from mcwave.utils.exceptions import DimensionMismatch

logger = logging.getLogger(__name__)


def load_table(name: str) -> MatrixSymbol:
    try:
        return TABLES[name]()
    except KeyError as e:
        raise DimensionMismatch(
            f"Unknown table '{name}', expected one of {sorted(TABLES)}"
        ) from e


def _deltas(symbol: MatrixSymbol, reference: MatrixSymbol) -> list[CoefficientDelta]:
    lo = min(symbol.lo, reference.lo)
    hi = max(symbol.hi, reference.hi)
    return [
        CoefficientDelta(
            k=k,
            max_delta=float(
                np.abs(symbol.coefficient(k) - reference.coefficient(k)).max()
            ),
        )
        for k in range(lo, hi + 1)
    ]


def compare_to_table(
    symbol: MatrixSymbol, table: str | MatrixSymbol, max_shift: int = 4
) -> TableComparison:
    """Per-coefficient deltas of z**s * symbol against a reference listing.

    The shift s in [-max_shift, max_shift] minimizing the worst delta is
    reported; ties go to the smallest |s|.
    """
    name = table if isinstance(table, str) else "custom"
    reference = load_table(table) if isinstance(table, str) else table
    if symbol.shape != reference.shape:
        raise DimensionMismatch(
            f"Symbol of shape {symbol.shape} cannot be compared with "
            f"table {name} of shape {reference.shape}"
        )

    best: TableComparison | None = None
    for shift in sorted(range(-max_shift, max_shift + 1), key=abs):
        deltas = _deltas(symbol.shift(shift), reference)
        worst = max((d.max_delta for d in deltas), default=0.0)
        if best is None or worst < best.max_delta:
            best = TableComparison(table=name, shift=shift, max_delta=worst, deltas=deltas)
    assert best is not None
    logger.debug(
        f"Best alignment with {name}: shift {best.shift}, max delta {best.max_delta:.3e}"
    )
    return best
