"""Shared builders for the test suite."""

from __future__ import annotations

from impulse_floquet import (ImpulseSchedule, ImpulsiveSystem, PiecewiseFunction,
                             PolySegment)


def const(value: float, T: float = 1.0) -> PiecewiseFunction:
    return PiecewiseFunction.constant(value, T)


def make_system(a, b, c, T: float = 1.0, impulses=()) -> ImpulsiveSystem:
    """System from constants or ready-made piecewise coefficients."""
    def coeff(v):
        return v if isinstance(v, PiecewiseFunction) else const(float(v), T)
    return ImpulsiveSystem(coeff(a), coeff(b), coeff(c),
                           ImpulseSchedule.from_triples(T, impulses))


def poly(coeffs, T: float = 1.0, breaks=(), per_segment=None) -> PiecewiseFunction:
    """Piecewise polynomial; either one global polynomial or one per segment."""
    if per_segment is None:
        segs = tuple(PolySegment(tuple(coeffs)) for _ in range(len(breaks) + 1))
    else:
        segs = tuple(PolySegment(tuple(c)) for c in per_segment)
    return PiecewiseFunction(T, tuple(breaks), segs)


def rotation_system(T: float) -> ImpulsiveSystem:
    return make_system(0.0, 1.0, 1.0, T=T)
