"""Quasi-static stiff-contact simulator for path following with and without force control.

The workpiece surface is a heightfield ``h(s)`` over the path's travelled
distance ``s``; the surface normal is the global +z axis. The tool sits at
the commanded z of each trajectory sample, lowered by the accumulated
controller displacement. One simulation step is taken per trajectory sample
and the inner position loop is ideal: a displacement emitted at step ``k``
is fully realised at step ``k + 1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .discretize import Trajectory
from .fuzzy_control import FuzzyPIState, fuzzy_pi_step


class StepStatus(str, enum.Enum):
    OK = "ok"
    # force reached f_max on this step; the run is stopped
    EXCESSIVE_FORCE = "excessive_force"
    # tool retracted after an abort, waiting for safe conditions
    HALTED = "halted"


@dataclass(frozen=True)
class SurfaceModel:
    """Piecewise-linear heightfield over path arc length.

    ``s`` must be non-decreasing. Two consecutive breakpoints may share an
    ``s`` value to encode a step; the surface is right-continuous there.
    """

    s: tuple[float, ...]
    h: tuple[float, ...]
    stiffness: float = 50.0
    f_max: float = 200.0

    def __post_init__(self):
        s = tuple(float(v) for v in self.s)
        h = tuple(float(v) for v in self.h)
        if len(s) != len(h) or len(s) < 2:
            raise ValueError("need at least two (s, h) breakpoints of equal count")
        if any(b < a for a, b in zip(s, s[1:])):
            raise ValueError("breakpoint s values must be non-decreasing")
        if not self.stiffness > 0:
            raise ValueError("stiffness must be positive")
        if not self.f_max > 0:
            raise ValueError("f_max must be positive")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "h", h)

    @classmethod
    def flat(cls, length: float, height: float = 0.0, **kw) -> SurfaceModel:
        return cls((0.0, float(length)), (height, height), **kw)

    def height(self, s: float) -> float:
        xs, hs = self.s, self.h
        i = int(np.searchsorted(xs, s, side="right"))
        if i == 0:
            return hs[0]
        if i == len(xs):
            return hs[-1]
        s0, s1 = xs[i - 1], xs[i]
        t = (s - s0) / (s1 - s0)
        return hs[i - 1] + t * (hs[i] - hs[i - 1])


def contact_force(surface: SurfaceModel, s: float, z_tool: float) -> float:
    """Spring contact force, N. Zero when the tool is above the surface."""
    return surface.stiffness * max(0.0, surface.height(s) - z_tool)


@dataclass
class SimTrace:
    s: np.ndarray
    z_cmd: np.ndarray
    z_actual: np.ndarray
    force: np.ndarray
    du: np.ndarray
    contact: np.ndarray
    status: list[StepStatus] = field(default_factory=list)
    positions: np.ndarray | None = None

    def __len__(self):
        return len(self.force)

    @property
    def aborts(self) -> int:
        return sum(1 for st in self.status if st is StepStatus.EXCESSIVE_FORCE)

    @property
    def contact_loss_steps(self) -> int:
        """Steps without contact while the tool was running (halted steps excluded)."""
        return int(sum(1 for c, st in zip(self.contact, self.status) if not c and st is StepStatus.OK))

    @property
    def peak_force(self) -> float:
        return float(np.max(self.force))

    def rows(self):
        for k in range(len(self)):
            yield (k, self.s[k], self.z_cmd[k], self.z_actual[k], self.force[k], self.du[k], bool(self.contact[k]), self.status[k].value)


def _simulate(path: Trajectory, surface: SurfaceModel, controller: FuzzyPIState | None, f_setpoint: float) -> SimTrace:
    positions = path.positions
    s_all = path.arc_length()
    n = len(s_all)
    z_cmd = positions[:, 2].copy()
    z_act = np.empty(n)
    force = np.empty(n)
    du_out = np.zeros(n)
    contact = np.zeros(n, dtype=bool)
    status: list[StepStatus] = []

    # axis 0 of the controller is the surface normal
    u = 0.0
    halted = False
    for k in range(n):
        z = z_cmd[k] - u
        f = contact_force(surface, s_all[k], z)
        if halted:
            if f >= surface.f_max:
                z_act[k], force[k] = z, 0.0
                status.append(StepStatus.HALTED)
                continue
            halted = False
        z_act[k], force[k], contact[k] = z, f, f > 0.0
        if f >= surface.f_max:
            status.append(StepStatus.EXCESSIVE_FORCE)
            halted = True
            continue
        status.append(StepStatus.OK)
        if controller is not None:
            wrench_d = np.zeros(len(controller.selection))
            wrench_e = np.zeros(len(controller.selection))
            wrench_d[0], wrench_e[0] = f_setpoint, f
            step, controller = fuzzy_pi_step(controller, wrench_d, wrench_e)
            du_out[k] = step[0]
            u += step[0]
    return SimTrace(s_all, z_cmd, z_act, force, du_out, contact, status, positions)


def run_open_loop(path: Trajectory, surface: SurfaceModel) -> SimTrace:
    """Follow the nominal path verbatim, stopping while the force is unsafe."""
    return _simulate(path, surface, None, 0.0)


def run_force_controlled(path: Trajectory, surface: SurfaceModel, controller: FuzzyPIState, f_setpoint: float) -> SimTrace:
    """Follow the path with the Fuzzy-PI loop regulating normal force to ``f_setpoint``.

    Axis 0 of ``controller`` must be the force-controlled surface normal.
    """
    if not controller.selection or controller.selection[0] != 1:
        raise ValueError("controller axis 0 (surface normal) must be force-controlled")
    if not 0 < f_setpoint < surface.f_max:
        raise ValueError("set-point must lie in (0, f_max)")
    return _simulate(path, surface, controller, f_setpoint)
