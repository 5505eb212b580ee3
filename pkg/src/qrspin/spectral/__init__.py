"""CEO topological recursion on X = -z^{qr} + log z, y = z^q, and the
loop-equation probe suite."""

from qrspin.spectral.curve import SpectralCurve, DeckSeries, deck_transformation
from qrspin.spectral.correlator import (
    Correlator,
    CorrelatorStore,
    ceo_step,
    expand_at_zero,
    PoleEscape,
    AsymmetryDetected,
)

__all__ = [
    "SpectralCurve",
    "DeckSeries",
    "deck_transformation",
    "Correlator",
    "CorrelatorStore",
    "ceo_step",
    "expand_at_zero",
    "PoleEscape",
    "AsymmetryDetected",
]
