"""Deviation of Nagata-interpolated arcs from the true circle.

Two metrics are reported for each sample, both as a percentage of the
radius:

``radial``
    distance from the centre minus the radius; positive means the
    interpolant bulges outside the circle.
``parametric``
    distance to the circle point at the same fraction of the section angle
    as the curve parameter, signed like the radial deviation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .discretize import nagata_eval, nagata_prepare


@dataclass(frozen=True)
class ErrorSample:
    section: int
    eta: float
    path_pct: float
    radial_pct: float
    parametric_pct: float


def _arc_point(radius: float, angle: float) -> np.ndarray:
    return np.array([radius * math.cos(angle), radius * math.sin(angle), 0.0])


def nagata_error_profile(alpha_deg: float, sections: int = 1, samples: int = 11, radius: float = 1.0) -> list[ErrorSample]:
    """Sample the error of a Nagata fit to an arc of ``alpha_deg`` degrees.

    The arc is split into ``sections`` equal sections, each interpolated from
    its two end points and the centre. ``path_pct`` is the angular position
    of the generated point within its section.
    """
    if sections < 1:
        raise ValueError("need at least one section")
    if samples < 2:
        raise ValueError("need at least two samples per section")
    sec = math.radians(alpha_deg) / sections
    if not 0.0 < sec < math.pi:
        raise ValueError("section angle must lie strictly between 0 and 180 degrees")
    center = np.zeros(3)
    out = []
    for j in range(sections):
        a0 = j * sec
        curve = nagata_prepare(center, _arc_point(radius, a0), _arc_point(radius, a0 + sec))
        for eta in np.linspace(0.0, 1.0, samples):
            p = nagata_eval(curve, float(eta))
            rad = float(np.linalg.norm(p)) - radius
            phi = math.atan2(p[1], p[0]) - a0
            phi = (phi + math.pi) % (2.0 * math.pi) - math.pi
            par = float(np.linalg.norm(p - _arc_point(radius, a0 + eta * sec)))
            sign = 1.0 if rad >= 0.0 else -1.0
            out.append(
                ErrorSample(
                    section=j,
                    eta=float(eta),
                    path_pct=100.0 * phi / sec,
                    radial_pct=100.0 * rad / radius,
                    parametric_pct=100.0 * sign * par / radius,
                )
            )
    return out


def max_radial_error_pct(alpha_deg: float) -> float:
    """Largest absolute radial deviation over a single section, percent of radius."""
    prof = nagata_error_profile(alpha_deg, sections=1, samples=201)
    return max(abs(e.radial_pct) for e in prof)
