"""Published coefficient listings of the two- and three-channel examples.

Values are rounded to the printed precision (7 to 10 decimals), so the
reference banks satisfy the QMF equations only to roughly 1e-5.
"""

from pydantic import BaseModel, Field

from mcwave.models.laurent import LaurentPoly
from mcwave.models.lpmatrix import MatrixSymbol

_TWO_CHANNEL_SCALING_ENTRIES = {
    (0, 0): {
        1: 0.7776021479,
        0: 1.081604742,
        -1: 0.2165957837,
        -2: -0.08257171989,
        -3: 0.004835070286,
        -4: 0.0009670018466,
        -5: 0.0009670219776,
    },
    (0, 1): {
        2: 0.001208777472,
        1: 0.001208777472,
        0: -0.001208777472,
        -1: -0.001208777472,
    },
    (1, 0): {
        1: -0.005136018632,
        0: -0.02117594497,
        -1: -0.07331687185,
        -2: 0.2747671662,
        -3: -0.0679559177,
        -4: -0.2535912212,
        -5: 0.1464088082,
    },
    (1, 1): {
        2: 0.6830110222,
        1: 1.183011034,
        0: 0.3169890016,
        -1: -0.1830110103,
    },
}

_TWO_CHANNEL_WAVELET = {
    -2: [[0.8140199, 0.0], [-0.0014406, 0.0]],
    -1: [[-1.1322992, 0.0], [0.0, 0.0]],
    0: [[0.1915220, 0.0032939], [0.0037742, -0.0000058]],
    1: [[0.1360351, -0.0002724], [-0.0018743, 0.6524543]],
    2: [[-0.0065259, -0.0133465], [-0.0003995, -1.1300526]],
    3: [[-0.0044401, 0.0519219], [-0.0000359, 0.331059]],
    4: [[0.0009821, 0.2546764], [-0.0000192, 0.1253084]],
    5: [[0.0007061, 0.1209272], [-0.0000047, 0.0153323]],
    6: [[0.0, -0.2427089], [0.0, 0.0047518]],
    7: [[0.0, -0.1744916], [0.0, 0.0011525]],
}

_THREE_CHANNEL_SCALING = {
    -8: [[0, 0, 0], [0, 0, 0], [0.04, 0.03125, 0]],
    -7: [[0, 0, 0], [0, 0, 0], [-0.04, -0.03125, 0]],
    -6: [[-0.0022120, -0.0017281, 0], [0.0000731, 0.0000571, 0], [-0.12, -0.09375, 0]],
    -5: [[0.0087982, 0.0060117, 0], [0.1481828, -0.0017879, 0], [0.12, 0.09375, 0]],
    -4: [[-0.0003396, 0.0004183, 0], [-0.2568731, 0.0059962, 0], [0.12, 0.09375, 0]],
    -3: [[-0.0193938, -0.0240319, 0], [-0.0672249, -0.0009911, 0], [-0.12, -0.09375, 0]],
    -2: [[-0.0715410, 0.0216501, 0], [0.2697914, -0.0206268, 0], [-0.04, -0.03125, 0]],
    -1: [[0.2874359, 0.0253824, 0], [-0.0756559, -0.1655344, 0], [0.04, 0.03125, 0]],
    0: [[1.0740925, -0.0422890, 0], [-0.0129914, 0.3501563, 0], [0, 0, 1]],
    1: [[0.7231598, -0.0073621, 0], [-0.0053020, 1.1683135, 0], [0, 0, 1]],
    2: [[0, 0.0219488, 0], [0, 0.6644173, 0], [0, 0, 0]],
}

_THREE_CHANNEL_WAVELET = {
    -2: [[-0.0031659, 0, 0], [0.0001046, 0, 0], [0, 0, 0]],
    -1: [[0, 0, 0], [-0.6416072, 0, 0], [0, 0, 0]],
    0: [
        [0.0297628, -0.7705220, -0.0001305],
        [1.1269644, 0.0254539, 0],
        [0.0367180, 0.0169580, -0.9720037],
    ],
    1: [
        [-0.0940031, 1.1447719, 0],
        [-0.3500526, -0.0169113, -0.0264419],
        [-0.0367180, -0.0169580, 0.9720037],
    ],
    2: [
        [-0.2583832, -0.2560664, -0.0751903],
        [-0.1287475, -0.0115762, 0.0489688],
        [-0.0096495, -0.0033517, -0.0409056],
    ],
    3: [
        [-0.0908757, -0.1606346, 0.0018325],
        [-0.0045318, -0.0170932, -0.0567853],
        [0.0096495, 0.0033517, 0.0409056],
    ],
    4: [
        [0.2512676, 0.0347952, 0.1508696],
        [0.0029602, -0.0035235, -0.0337223],
        [0.0001092, 0.0004847, 0.0160288],
    ],
    5: [
        [0.1684248, 0.0212803, 0.0595696],
        [-0.0017438, 0.0229928, 0.1406681],
        [-0.0001092, -0.0004847, -0.0160288],
    ],
    6: [
        [-0.0017816, -0.0078392, -0.1305600],
        [-0.0009269, 0.0105339, 0.0451634],
        [0, 0, -0.0026508],
    ],
    7: [
        [-0.0012167, -0.0056664, -0.0773112],
        [-0.0015390, -0.0062807, -0.1222042],
        [0, 0, 0.0026508],
    ],
    8: [
        [-0.0000291, -0.0001188, 0.0406917],
        [-0.0008803, -0.0035956, -0.0543552],
        [0, 0, 0],
    ],
    9: [[0, 0, 0.0295229], [0, 0, 0.0373432], [0, 0, 0]],
    10: [[0, 0, 0.0007057], [0, 0, 0.0213611], [0, 0, 0]],
}


def _from_entry_terms(entries: dict[tuple[int, int], dict[int, float]], r: int) -> MatrixSymbol:
    grid = [[LaurentPoly() for _ in range(r)] for _ in range(r)]
    for (i, j), terms in entries.items():
        grid[i][j] = LaurentPoly.from_terms(terms)
    return MatrixSymbol.from_entries(grid)


def two_channel_scaling() -> MatrixSymbol:
    return _from_entry_terms(_TWO_CHANNEL_SCALING_ENTRIES, 2)


def two_channel_wavelet() -> MatrixSymbol:
    return MatrixSymbol.from_terms(_TWO_CHANNEL_WAVELET)


def three_channel_scaling() -> MatrixSymbol:
    return MatrixSymbol.from_terms(_THREE_CHANNEL_SCALING)


def three_channel_wavelet() -> MatrixSymbol:
    return MatrixSymbol.from_terms(_THREE_CHANNEL_WAVELET)


TABLES = {
    "paper-2ch-scaling": two_channel_scaling,
    "paper-2ch-wavelet": two_channel_wavelet,
    "paper-3ch-scaling": three_channel_scaling,
    "paper-3ch-wavelet": three_channel_wavelet,
}


class CoefficientDelta(BaseModel):
    """Largest entry deviation of one coefficient matrix."""

    k: int = Field(..., description="Exponent in the reference table")
    max_delta: float = Field(..., ge=0.0, description="max |ours - reference| over entries")


class TableComparison(BaseModel):
    """Coefficient-wise comparison of a symbol against a reference listing."""

    table: str = Field(..., description="Reference table name")
    shift: int = Field(..., description="s such that z**s times the symbol aligns best")
    max_delta: float = Field(..., ge=0.0, description="Worst coefficient deviation")
    deltas: list[CoefficientDelta] = Field(
        default_factory=list, description="Per-exponent deviations, increasing k"
    )

    def passed(self, tol: float) -> bool:
        return self.max_delta <= tol
