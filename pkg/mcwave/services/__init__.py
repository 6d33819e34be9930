from .mcw import construct_wavelet, verify_qmf
from .specfactor import bauer_factor, canonical_factor
from .transform import analyze, synthesize

__all__ = [
    "analyze",
    "bauer_factor",
    "canonical_factor",
    "construct_wavelet",
    "synthesize",
    "verify_qmf",
]
