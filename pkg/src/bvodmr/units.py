"""Exact decimal unit conversions for the external interfaces.

Internal canonical units are MHz and Gauss.  External documents may
declare ``lab`` units (MHz, Gauss, MHz/Gauss) or ``si`` units (GHz, mT,
GHz/mT); times are always ns and angles always degrees.  Conversions
shift the decimal representation rather than multiplying floats, so
inputs with a few fractional digits convert exactly (16.7 mT is
167 G bit-for-bit) and round trips are lossless.
"""

from __future__ import annotations

from decimal import Decimal

UNIT_SYSTEMS = ("lab", "si")

# quantity kind -> decimal power applied when converting si -> internal
_SI_SHIFT = {
    "frequency": 3,    # GHz -> MHz
    "field": 1,        # mT -> Gauss
    "gyromagnetic": 2,  # GHz/mT -> MHz/Gauss
}


def _shift(value: float, power: int) -> float:
    return float(Decimal(repr(value)).scaleb(power))


def to_internal(value: float, kind: str, units: str) -> float:
    """Convert ``value`` of quantity ``kind`` from ``units`` to internal."""
    if units == "lab":
        return value
    if units == "si":
        return _shift(value, _SI_SHIFT[kind]) if kind in _SI_SHIFT else value
    raise ValueError(f"unknown unit system {units!r}")


def from_internal(value: float, kind: str, units: str) -> float:
    """Convert an internal ``value`` of quantity ``kind`` to ``units``."""
    if units == "lab":
        return value
    if units == "si":
        return _shift(value, -_SI_SHIFT[kind]) if kind in _SI_SHIFT else value
    raise ValueError(f"unknown unit system {units!r}")


def mt_to_gauss(value: float) -> float:
    return _shift(value, 1)


def gauss_to_mt(value: float) -> float:
    return _shift(value, -1)


def ghz_to_mhz(value: float) -> float:
    return _shift(value, 3)


def mhz_to_ghz(value: float) -> float:
    return _shift(value, -3)
