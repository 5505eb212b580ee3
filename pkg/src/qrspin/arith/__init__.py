"""Exact arithmetic substrate: quotient ring at the critical points,
truncated univariate and multivariate series, and series inversion."""

from qrspin.arith.ring import CriticalRing, RingElem, NonInvertible
from qrspin.arith.series import (
    Series,
    BadSeries,
    TruncationUnderflow,
    lagrange_invert,
    series_compose,
    series_mul,
    series_div,
    series_derivative,
)
from qrspin.arith.multiseries import MultiSeries

__all__ = [
    "CriticalRing",
    "RingElem",
    "NonInvertible",
    "Series",
    "BadSeries",
    "TruncationUnderflow",
    "lagrange_invert",
    "series_compose",
    "series_mul",
    "series_div",
    "series_derivative",
    "MultiSeries",
]
