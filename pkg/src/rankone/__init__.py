"""Rank-one measure-preserving transformations and their Riesz-product spectra."""

from .errors import CapExceeded, DepthError, InvalidBall, RankOneError, ScheduleError
from .laurent import LaurentPolynomial
from .odometer import BallAddress
from .spectral import ThetaFamily
from .system import CutSpacerSchedule, HeightTable, heights, total_measure, validate_schedule

__all__ = [
    "BallAddress",
    "CapExceeded",
    "CutSpacerSchedule",
    "DepthError",
    "HeightTable",
    "InvalidBall",
    "LaurentPolynomial",
    "RankOneError",
    "ScheduleError",
    "ThetaFamily",
    "heights",
    "total_measure",
    "validate_schedule",
]
