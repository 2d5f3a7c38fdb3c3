"""Exact symmetric-function toolkit for kernels of Macdonald operators,
graph convolutions and HLV generating functions."""

from .arith import LaurentPoly, NotPolynomial, RationalFn, to_laurent, var
from .partitions import Partition, Type

__all__ = [
    "LaurentPoly",
    "NotPolynomial",
    "Partition",
    "RationalFn",
    "Type",
    "to_laurent",
    "var",
]
