"""Rigid-body primitives: 3-vectors, unit quaternions, frame calibration.

Positions are plain ``numpy`` arrays of shape ``(3,)`` in millimetres.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFrame

# Degeneracy threshold for calibration points, in mm.
EPS = 1e-6

ORTHO_TOL = 1e-9


def as_vec3(v) -> np.ndarray:
    """Coerce ``v`` to a finite float array of shape (3,)."""
    arr = np.asarray(v, dtype=float).reshape(-1)
    if arr.shape != (3,):
        raise ValueError(f"expected 3 components, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"non-finite vector component in {arr}")
    return arr


def unit(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValueError("cannot normalize a zero vector")
    return v / n


@dataclass(frozen=True)
class UnitQuaternion:
    """Scalar-first unit quaternion. Renormalized on construction."""

    w: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        q = np.array([self.w, self.x, self.y, self.z], dtype=float)
        if not np.all(np.isfinite(q)):
            raise ValueError("non-finite quaternion component")
        n = np.linalg.norm(q)
        if n < 1e-12:
            raise ValueError("zero quaternion has no orientation")
        # Leave machine-precision unit inputs untouched so stored values round-trip.
        if abs(n - 1.0) > 4 * np.finfo(float).eps:
            q = q / n
        for name, val in zip("wxyz", q):
            object.__setattr__(self, name, float(val))

    @classmethod
    def identity(cls) -> UnitQuaternion:
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def from_array(cls, q) -> UnitQuaternion:
        w, x, y, z = np.asarray(q, dtype=float).reshape(4)
        return cls(w, x, y, z)

    @classmethod
    def from_axis_angle(cls, axis, angle: float) -> UnitQuaternion:
        """Rotation of ``angle`` radians about ``axis``."""
        ax = unit(as_vec3(axis))
        s = math.sin(angle / 2.0)
        return cls(math.cos(angle / 2.0), *(ax * s))

    @classmethod
    def from_matrix(cls, r: np.ndarray) -> UnitQuaternion:
        # Shepperd's method: branch on the largest diagonal term for stability.
        r = np.asarray(r, dtype=float)
        tr = np.trace(r)
        if tr > 0:
            s = 2.0 * math.sqrt(tr + 1.0)
            return cls(0.25 * s, (r[2, 1] - r[1, 2]) / s, (r[0, 2] - r[2, 0]) / s, (r[1, 0] - r[0, 1]) / s)
        i = int(np.argmax(np.diag(r)))
        if i == 0:
            s = 2.0 * math.sqrt(1.0 + r[0, 0] - r[1, 1] - r[2, 2])
            return cls((r[2, 1] - r[1, 2]) / s, 0.25 * s, (r[0, 1] + r[1, 0]) / s, (r[0, 2] + r[2, 0]) / s)
        if i == 1:
            s = 2.0 * math.sqrt(1.0 + r[1, 1] - r[0, 0] - r[2, 2])
            return cls((r[0, 2] - r[2, 0]) / s, (r[0, 1] + r[1, 0]) / s, 0.25 * s, (r[1, 2] + r[2, 1]) / s)
        s = 2.0 * math.sqrt(1.0 + r[2, 2] - r[0, 0] - r[1, 1])
        return cls((r[1, 0] - r[0, 1]) / s, (r[0, 2] + r[2, 0]) / s, (r[1, 2] + r[2, 1]) / s, 0.25 * s)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def dot(self, other: UnitQuaternion) -> float:
        return float(self.as_array() @ other.as_array())

    def __mul__(self, other: UnitQuaternion) -> UnitQuaternion:
        w1, x1, y1, z1 = self.as_array()
        w2, x2, y2, z2 = other.as_array()
        return UnitQuaternion(
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        )

    def conjugate(self) -> UnitQuaternion:
        return UnitQuaternion(self.w, -self.x, -self.y, -self.z)

    def angle_to(self, other: UnitQuaternion) -> float:
        """Rotation angle (radians, in [0, pi]) taking ``self`` to ``other``."""
        rel = (self.conjugate() * other).as_array()
        # atan2 form stays accurate for tiny angles where acos(dot) does not
        return 2.0 * math.atan2(float(np.linalg.norm(rel[1:])), abs(rel[0]))

    def to_matrix(self) -> np.ndarray:
        w, x, y, z = self.as_array()
        return np.array(
            [
                [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
                [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
                [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
            ]
        )

    def rotate(self, v) -> np.ndarray:
        return self.to_matrix() @ as_vec3(v)


@dataclass(frozen=True)
class FrameTransform:
    """Homogeneous rigid transform ``p -> rotation @ p + translation``."""

    rotation: np.ndarray
    translation: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        r = np.array(self.rotation, dtype=float).reshape(3, 3)
        t = as_vec3(self.translation)
        if not np.allclose(r.T @ r, np.eye(3), atol=ORTHO_TOL, rtol=0.0):
            raise ValueError("rotation is not orthonormal")
        if abs(np.linalg.det(r) - 1.0) > ORTHO_TOL:
            raise ValueError("rotation is not proper (det != +1)")
        r.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", t)

    @classmethod
    def identity(cls) -> FrameTransform:
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def from_matrix(cls, m) -> FrameTransform:
        m = np.asarray(m, dtype=float)
        if m.shape != (4, 4) or not np.allclose(m[3], [0, 0, 0, 1]):
            raise ValueError("expected a 4x4 homogeneous matrix")
        return cls(m[:3, :3], m[:3, 3])

    def as_matrix(self) -> np.ndarray:
        m = np.eye(4)
        m[:3, :3] = self.rotation
        m[:3, 3] = self.translation
        return m

    def __matmul__(self, other: FrameTransform) -> FrameTransform:
        return FrameTransform(
            self.rotation @ other.rotation,
            self.rotation @ other.translation + self.translation,
        )


@dataclass(frozen=True)
class Pose:
    position: np.ndarray
    orientation: UnitQuaternion

    def __post_init__(self):
        p = as_vec3(self.position)
        p.setflags(write=False)
        object.__setattr__(self, "position", p)


def frame_from_three_points(a, b, c) -> FrameTransform:
    """Calibrate a frame from three taught points.

    ``a`` is the origin, ``b`` lies on the +x axis and ``c`` lies in the
    positive xOy quadrant. The returned transform maps frame coordinates to
    the coordinates the points were given in; its rotation columns are the
    frame's x, y and z axes.

    Raises:
        DegenerateFrame: if ``b`` or ``c`` coincides with ``a`` or the three
            points are collinear.
    """
    a, b, c = as_vec3(a), as_vec3(b), as_vec3(c)
    ab = b - a
    ac = c - a
    if np.linalg.norm(ab) <= EPS or np.linalg.norm(ac) <= EPS:
        raise DegenerateFrame("calibration points coincide with the origin")
    e = np.cross(ab, ac)
    if np.linalg.norm(e) < EPS:
        raise DegenerateFrame("calibration points are collinear")
    f = np.cross(e, ab)
    x_axis, y_axis, z_axis = unit(ab), unit(f), unit(e)
    return FrameTransform(np.column_stack([x_axis, y_axis, z_axis]), a)


def invert(t: FrameTransform) -> FrameTransform:
    rt = t.rotation.T
    return FrameTransform(rt, -rt @ t.translation)


def transform_point(t: FrameTransform, p) -> np.ndarray:
    return t.rotation @ as_vec3(p) + t.translation
