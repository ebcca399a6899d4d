"""Discretization of nominal paths into densely sampled trajectories.

Linear and circular paths are sampled exactly; curved single-concavity
segments use a quadratic Nagata interpolant built from end positions and
their outward normals. Orientations are attached by quaternion Slerp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CollinearPoints,
    DegenerateNormals,
    DegenerateSegment,
    InvalidStep,
    OutOfRange,
)
from .geometry import EPS, FrameTransform, Pose, UnitQuaternion, as_vec3, transform_point, unit

# Slack when rounding a fractional step count up, so exact divisions that
# land a few ulps above an integer do not emit a spurious zero-length step.
_STEP_SLACK = 1e-9

# Below this angle (rad) Slerp falls back to normalized lerp.
SLERP_SMALL_ANGLE = 1e-6

# Normals closer than this angle (rad) to parallel/antiparallel are degenerate.
_NORMAL_ANGLE_TOL = 1e-9


def _step_count(ratio: float) -> int:
    """Number of increments for a path of ``ratio`` steps, last one possibly short."""
    return max(1, math.ceil(ratio - _STEP_SLACK))


@dataclass(frozen=True)
class Trajectory:
    samples: tuple[Pose, ...]
    step_length: float

    def __post_init__(self):
        if len(self.samples) < 2:
            raise ValueError("a trajectory needs at least two samples")

    def __len__(self):
        return len(self.samples)

    @property
    def positions(self) -> np.ndarray:
        return np.array([p.position for p in self.samples])

    @property
    def orientations(self) -> list[UnitQuaternion]:
        return [p.orientation for p in self.samples]

    def arc_length(self) -> np.ndarray:
        """Cumulative travelled distance at each sample, starting at 0."""
        seg = np.linalg.norm(np.diff(self.positions, axis=0), axis=1)
        return np.concatenate([[0.0], np.cumsum(seg)])


@dataclass(frozen=True)
class CircleFit:
    center: np.ndarray
    radius: float
    normal: np.ndarray


@dataclass(frozen=True)
class NagataCurve:
    start: np.ndarray
    end: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    d: np.ndarray
    a: float
    c: np.ndarray

    @property
    def alpha(self) -> float:
        """Angle between the end normals, radians."""
        return math.acos(min(1.0, max(-1.0, self.a)))

    def derivative(self, eta: float) -> np.ndarray:
        return (self.d - self.c) + 2.0 * eta * self.c


def linear_discretize(p_a, p_b, k: float) -> list[np.ndarray]:
    """Sample the segment ``p_a -> p_b`` every ``k`` mm.

    The final increment is shorter when the segment length is not a
    multiple of ``k``; ``p_b`` is always emitted exactly.
    """
    p_a, p_b = as_vec3(p_a), as_vec3(p_b)
    if not k > 0:
        raise InvalidStep(f"step length must be positive, got {k}")
    seg = p_b - p_a
    length = float(np.linalg.norm(seg))
    if length == 0.0:
        raise DegenerateSegment("segment endpoints coincide")
    direction = seg / length
    n = _step_count(length / k)
    points = [p_a + (j * k) * direction for j in range(n)]
    points[0] = p_a.copy()
    points.append(p_b.copy())
    return points


def fit_circle(p1, p2, p3) -> CircleFit:
    """Circumscribed circle of three points in space."""
    p1, p2, p3 = as_vec3(p1), as_vec3(p2), as_vec3(p3)
    u = p1 - p3
    v = p2 - p3
    w = np.cross(u, v)
    w2 = float(w @ w)
    if math.sqrt(w2) < EPS:
        raise CollinearPoints("points are collinear; circle is undefined")
    offset = np.cross((u @ u) * v - (v @ v) * u, w) / (2.0 * w2)
    center = p3 + offset
    radius = float(np.mean([np.linalg.norm(p - center) for p in (p1, p2, p3)]))
    return CircleFit(center=center, radius=radius, normal=w / math.sqrt(w2))


def circular_discretize(p1, p2, p3, l_0: float) -> list[np.ndarray]:
    """Sample the arc from ``p1`` through ``p2`` to ``p3`` every ``l_0`` mm of arc.

    The arc lives in a local frame with origin at the circle center, x-axis
    towards ``p1`` and z-axis along the normal of the triangle ``p1 p2 p3``,
    so the sweep from ``p1`` meets ``p2`` before ``p3``. Reflex arcs (more
    than 180 degrees) come out naturally.
    """
    p1, p2, p3 = as_vec3(p1), as_vec3(p2), as_vec3(p3)
    if not l_0 > 0:
        raise InvalidStep(f"arc increment must be positive, got {l_0}")
    fit = fit_circle(p1, p2, p3)
    r = fit.radius
    x_axis = unit(p1 - fit.center)
    z_axis = fit.normal
    local = FrameTransform(np.column_stack([x_axis, np.cross(z_axis, x_axis), z_axis]), fit.center)

    v1 = p1 - fit.center
    v3 = p3 - fit.center
    cos_theta = float(v1 @ v3) / (np.linalg.norm(v1) * np.linalg.norm(v3))
    theta = math.acos(min(1.0, max(-1.0, cos_theta)))
    # acos only covers [0, pi]; p3 below the local x-axis means a reflex sweep
    if local.rotation[:, 1] @ v3 < 0.0:
        theta = 2.0 * math.pi - theta

    theta_inc = l_0 / r
    n = _step_count(theta / theta_inc)
    points = [p1.copy()]
    for i in range(1, n):
        ang = theta_inc * i
        points.append(transform_point(local, (r * math.cos(ang), r * math.sin(ang), 0.0)))
    points.append(p3.copy())
    return points


def nagata_prepare(p0_center, p1, p2) -> NagataCurve:
    """Build the quadratic interpolant between ``p1`` and ``p2`` about ``p0_center``.

    The quadratic coefficient ``c`` is chosen so the curve is tangent to the
    planes normal to ``n1`` at the start and ``n2`` at the end.

    Raises:
        DegenerateNormals: if an endpoint coincides with the center or the
            normals are opposite (section angle of 180 degrees or more).
    """
    p0, p1, p2 = as_vec3(p0_center), as_vec3(p1), as_vec3(p2)
    r1 = p1 - p0
    r2 = p2 - p0
    if np.linalg.norm(r1) <= EPS or np.linalg.norm(r2) <= EPS:
        raise DegenerateNormals("section endpoint coincides with the center")
    n1, n2 = unit(r1), unit(r2)
    d = p2 - p1
    a = float(n1 @ n2)
    # Test the angle rather than ``a`` itself: cos is flat near 0 and pi.
    alpha = math.atan2(np.linalg.norm(np.cross(n1, n2)), a)
    if math.pi - alpha < _NORMAL_ANGLE_TOL:
        raise DegenerateNormals("section angle reaches 180 degrees")
    if alpha < _NORMAL_ANGLE_TOL:
        c = np.zeros(3)
        a = 1.0
    else:
        rhs = np.array([n1 @ d, -(n2 @ d)])
        coeffs = np.array([[1.0, -a], [-a, 1.0]]) @ rhs / (1.0 - a * a)
        c = coeffs[0] * n1 + coeffs[1] * n2
    return NagataCurve(start=p1, end=p2, n1=n1, n2=n2, d=d, a=a, c=c)


def nagata_eval(curve: NagataCurve, eta: float) -> np.ndarray:
    if not 0.0 <= eta <= 1.0:
        raise OutOfRange(f"eta must lie in [0, 1], got {eta}")
    if eta == 0.0:
        return curve.start.copy()
    if eta == 1.0:
        return curve.end.copy()
    return curve.start + (curve.d - curve.c) * eta + curve.c * (eta * eta)


def _nagata_section(p0, p_start, p_end, l_0) -> list[np.ndarray]:
    p0, p_start, p_end = as_vec3(p0), as_vec3(p_start), as_vec3(p_end)
    curve = nagata_prepare(p0, p_start, p_end)
    alpha = curve.alpha
    if alpha < _NORMAL_ANGLE_TOL:
        raise DegenerateNormals("section endpoints lie on the same ray from the center")
    r = 0.5 * (np.linalg.norm(p_start - p0) + np.linalg.norm(p_end - p0))
    n = alpha / (l_0 / r)
    steps = _step_count(n)
    eta_inc = 1.0 / n
    samples = [nagata_eval(curve, i * eta_inc) for i in range(steps)]
    samples.append(nagata_eval(curve, 1.0))
    return samples


def nagata_discretize(p0_center, p1, p2, p3, l_0: float) -> list[np.ndarray]:
    """Two-section Nagata discretization ``p1 -> p2 -> p3`` about ``p0_center``.

    Each section is stepped in its parameter by ``1/n`` where ``n`` is the
    section angle divided by the angular increment ``l_0 / r``. The shared
    point ``p2`` is emitted once.
    """
    if not l_0 > 0:
        raise InvalidStep(f"arc increment must be positive, got {l_0}")
    first = _nagata_section(p0_center, p1, p2, l_0)
    second = _nagata_section(p0_center, p2, p3, l_0)
    return first + second[1:]


def slerp(q0: UnitQuaternion, q1: UnitQuaternion, t: float) -> UnitQuaternion:
    """Shortest-path spherical interpolation at fraction ``t``."""
    a = q0.as_array()
    b = q1.as_array()
    dot = float(a @ b)
    if dot < 0.0:
        b = -b
        dot = -dot
    theta = math.acos(min(1.0, dot))
    if theta < SLERP_SMALL_ANGLE:
        return UnitQuaternion.from_array((1.0 - t) * a + t * b)
    s = math.sin(theta)
    return UnitQuaternion.from_array((math.sin((1.0 - t) * theta) / s) * a + (math.sin(t * theta) / s) * b)


def slerp_sequence(q0: UnitQuaternion, qn: UnitQuaternion, n: int) -> list[UnitQuaternion]:
    """``n + 1`` orientations evenly spaced in angle from ``q0`` to ``qn``.

    Note that ``qn`` may come back negated (same rotation) when the pair lies
    in opposite quaternion hemispheres.
    """
    if n < 1:
        raise ValueError(f"need at least one interval, got n={n}")
    out = [q0]
    out.extend(slerp(q0, qn, i / n) for i in range(1, n))
    out.append(qn)
    return out


def attach_orientations(positions, q_start: UnitQuaternion, q_end: UnitQuaternion, step_length: float = 0.0) -> Trajectory:
    positions = [as_vec3(p) for p in positions]
    if len(positions) < 2:
        raise ValueError("need at least two positions")
    quats = slerp_sequence(q_start, q_end, len(positions) - 1)
    return Trajectory(tuple(Pose(p, q) for p, q in zip(positions, quats)), step_length)
