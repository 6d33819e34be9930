from .bank import FilterBank, QmfReport
from .laurent import LaurentPoly
from .lpmatrix import MatrixSymbol
from .signals import CascadeSamples, CoeffPyramid, VectorSequence, VectorSignal

__all__ = [
    "CascadeSamples",
    "CoeffPyramid",
    "FilterBank",
    "LaurentPoly",
    "MatrixSymbol",
    "QmfReport",
    "VectorSequence",
    "VectorSignal",
]
