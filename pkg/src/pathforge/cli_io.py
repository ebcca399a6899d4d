"""File formats and configuration: path specs, run configs, frames, trajectories, traces.

Every JSON document carries ``"format_version": 1``. CSV files start with a
single ``#`` comment line naming the format and version, then a header row.

Trajectory CSV columns: ``index, x, y, z, qw, qx, qy, qz`` (mm, scalar-first
quaternion).

Trace CSV columns: ``step, s, z_cmd, z_actual, force, du, contact, status``
where ``contact`` is 0/1 and ``status`` is ``ok``, ``excessive_force`` or
``halted``.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .contact_sim import SimTrace, SurfaceModel
from .discretize import (
    Trajectory,
    attach_orientations,
    circular_discretize,
    linear_discretize,
    nagata_discretize,
)
from .errors import ParseError, ValidationError
from .fuzzy_control import FuzzyPIState, RuleBase
from .geometry import FrameTransform, Pose, UnitQuaternion, as_vec3, frame_from_three_points, invert, transform_point

FORMAT_VERSION = 1
CONFIG_ENV = "PATHFORGE_CONFIG"

WAYPOINT_COUNT = {"linear": 2, "circular": 3, "nagata": 4}

TRAJECTORY_COLUMNS = ("index", "x", "y", "z", "qw", "qx", "qy", "qz")
TRACE_COLUMNS = ("step", "s", "z_cmd", "z_actual", "force", "du", "contact", "status")


def _fmt(x: float) -> str:
    # repr is the shortest string that round-trips a float exactly
    return repr(float(x))


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        # mkstemp creates 0600; give the file ordinary umask permissions
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_json(text: str, source: str = "<string>") -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ValidationError(f"{source}: top level must be a JSON object")
    version = doc.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ValidationError(f"{source}: format_version: unsupported version {version!r}")
    return doc


def _vec(value, where: str) -> np.ndarray:
    try:
        return as_vec3(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{where}: expected three finite numbers ({exc})") from None


def _quat(value, where: str) -> UnitQuaternion:
    try:
        arr = np.asarray(value, dtype=float)
        if arr.shape != (4,):
            raise ValueError(f"got {arr.size} components")
        return UnitQuaternion.from_array(arr)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{where}: expected [qw, qx, qy, qz] ({exc})") from None


def _positive(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not value > 0:
        raise ValidationError(f"{where}: expected a positive number, got {value!r}")
    return float(value)


# --- frames ---------------------------------------------------------------


def frame_to_json(frame: FrameTransform, points=None) -> str:
    doc = {
        "format_version": FORMAT_VERSION,
        "rotation": frame.rotation.tolist(),
        "translation": frame.translation.tolist(),
    }
    if points is not None:
        doc["points"] = [as_vec3(p).tolist() for p in points]
    return json.dumps(doc, indent=2) + "\n"


def frame_from_doc(doc, where: str = "frame") -> FrameTransform:
    """A frame given either as three calibration points or as rotation + translation."""
    if isinstance(doc, list):
        if len(doc) != 3:
            raise ValidationError(f"{where}: expected three calibration points, got {len(doc)}")
        pts = [_vec(p, f"{where}[{i}]") for i, p in enumerate(doc)]
        return frame_from_three_points(*pts)
    if isinstance(doc, dict) and "rotation" in doc:
        try:
            return FrameTransform(np.asarray(doc["rotation"], dtype=float), _vec(doc.get("translation"), f"{where}.translation"))
        except ValueError as exc:
            raise ValidationError(f"{where}: {exc}") from None
    raise ValidationError(f"{where}: expected a list of three points or a rotation/translation object")


def read_frame(path) -> FrameTransform:
    path = Path(path)
    return frame_from_doc(load_json(path.read_text(), str(path)), str(path))


# --- path specs -----------------------------------------------------------


@dataclass(frozen=True)
class PathSpec:
    kind: str
    waypoints: tuple
    q_start: UnitQuaternion
    q_end: UnitQuaternion
    step: float
    frame: FrameTransform | None = None

    def discretize(self) -> Trajectory:
        w = self.waypoints
        if self.kind == "linear":
            pts = linear_discretize(w[0], w[1], self.step)
        elif self.kind == "circular":
            pts = circular_discretize(w[0], w[1], w[2], self.step)
        else:
            pts = nagata_discretize(w[0], w[1], w[2], w[3], self.step)
        return attach_orientations(pts, self.q_start, self.q_end, self.step)


def express_in_frame(spec: PathSpec, frame: FrameTransform) -> PathSpec:
    """Re-express waypoints and orientations in ``frame``'s coordinates."""
    to_frame = invert(frame)
    rot = UnitQuaternion.from_matrix(to_frame.rotation)
    return PathSpec(
        kind=spec.kind,
        waypoints=tuple(transform_point(to_frame, p) for p in spec.waypoints),
        q_start=rot * spec.q_start,
        q_end=rot * spec.q_end,
        step=spec.step,
        frame=frame,
    )


def parse_path_spec(text: str, source: str = "<spec>", base_dir=None) -> PathSpec:
    """Decode and validate a path spec.

    Waypoint count must match ``kind`` (nagata lists the centre first). When
    a ``frame`` (three points or rotation/translation) or ``frame_file`` is
    present the waypoints are re-expressed in that frame.
    """
    doc = load_json(text, source)
    kind = doc.get("kind")
    if kind not in WAYPOINT_COUNT:
        raise ValidationError(f"{source}: kind: expected one of {sorted(WAYPOINT_COUNT)}, got {kind!r}")
    raw = doc.get("waypoints")
    if not isinstance(raw, list):
        raise ValidationError(f"{source}: waypoints: expected a list")
    if len(raw) != WAYPOINT_COUNT[kind]:
        raise ValidationError(f"{source}: waypoints: kind {kind!r} needs {WAYPOINT_COUNT[kind]} points, got {len(raw)}")
    waypoints = tuple(_vec(p, f"{source}: waypoints[{i}]") for i, p in enumerate(raw))
    identity = [1.0, 0.0, 0.0, 0.0]
    q_start = _quat(doc.get("orientation_start", identity), f"{source}: orientation_start")
    q_end = _quat(doc.get("orientation_end", identity), f"{source}: orientation_end")
    if "step" not in doc:
        raise ValidationError(f"{source}: step: missing")
    step = _positive(doc["step"], f"{source}: step")
    spec = PathSpec(kind, waypoints, q_start, q_end, step)

    frame = None
    if "frame" in doc:
        frame = frame_from_doc(doc["frame"], f"{source}: frame")
    elif "frame_file" in doc:
        ref = Path(doc["frame_file"])
        if not ref.is_absolute() and base_dir is not None:
            ref = Path(base_dir) / ref
        frame = read_frame(ref)
    return express_in_frame(spec, frame) if frame is not None else spec


def read_path_spec(path) -> PathSpec:
    path = Path(path)
    return parse_path_spec(path.read_text(), str(path), base_dir=path.parent)


# --- run config -----------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    """Controller gains, contact constants and surface fixture for ``simulate``.

    ``surface`` is a path to a surface fixture, resolved relative to the
    config file; ``None`` selects the packaged benchmark surface.
    """

    k_p: float = 0.025
    k_i: float = 0.025
    k_x: float = 0.5
    f_setpoint: float = 40.0
    f_max: float = 200.0
    k_s: float = 50.0
    selection: tuple[int, ...] = (1, 0, 0, 0, 0, 0)
    rule_table: str = "verbatim"
    surface: str | None = None
    base_dir: str | None = field(default=None, compare=False)

    def __post_init__(self):
        for name in ("k_p", "k_i", "k_x", "f_setpoint", "f_max", "k_s"):
            _positive(getattr(self, name), name)
        if self.f_max <= self.f_setpoint:
            raise ValidationError("f_max: must exceed f_setpoint")
        if not self.selection or self.selection[0] != 1:
            raise ValidationError("selection: axis 0 (surface normal) must be force-controlled")
        if any(s not in (0, 1) for s in self.selection):
            raise ValidationError("selection: entries must be 0 or 1")
        RuleBase.named(self.rule_table)

    def controller(self) -> FuzzyPIState:
        return FuzzyPIState(
            k_p=self.k_p,
            k_i=self.k_i,
            k_x=self.k_x,
            selection=self.selection,
            rules=RuleBase.named(self.rule_table),
        )

    def surface_model(self) -> SurfaceModel:
        if self.surface is None:
            text = resources.files("pathforge").joinpath("data/benchmark_surface.json").read_text()
            doc = load_json(text, "benchmark_surface.json")
        else:
            p = Path(self.surface)
            if not p.is_absolute() and self.base_dir is not None:
                p = Path(self.base_dir) / p
            doc = load_json(p.read_text(), str(p))
        try:
            return SurfaceModel(tuple(doc["s"]), tuple(doc["h"]), stiffness=self.k_s, f_max=self.f_max)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"surface: {exc}") from None

    def to_json(self) -> str:
        doc = {"format_version": FORMAT_VERSION, **asdict(self)}
        doc.pop("base_dir")
        doc["selection"] = list(self.selection)
        return json.dumps(doc, indent=2) + "\n"


def parse_run_config(text: str, source: str = "<config>", base_dir=None) -> RunConfig:
    doc = load_json(text, source)
    doc.pop("format_version", None)
    known = {f for f in RunConfig.__dataclass_fields__ if f != "base_dir"}
    unknown = set(doc) - known
    if unknown:
        raise ValidationError(f"{source}: unknown fields {sorted(unknown)}")
    if "selection" in doc:
        if not isinstance(doc["selection"], list):
            raise ValidationError(f"{source}: selection: expected a list of 0/1")
        doc["selection"] = tuple(doc["selection"])
    try:
        return RunConfig(**doc, base_dir=None if base_dir is None else str(base_dir))
    except ValidationError as exc:
        raise ValidationError(f"{source}: {exc}") from None
    except TypeError as exc:
        raise ValidationError(f"{source}: {exc}") from None


def read_run_config(path=None) -> RunConfig:
    """Load a config from ``path``, else ``$PATHFORGE_CONFIG``, else the packaged default."""
    if path is None:
        path = os.environ.get(CONFIG_ENV)
    if path is None:
        text = resources.files("pathforge").joinpath("data/default_config.json").read_text()
        return parse_run_config(text, "default_config.json")
    path = Path(path)
    return parse_run_config(path.read_text(), str(path), base_dir=path.parent)


# --- CSV ------------------------------------------------------------------


def trajectory_to_csv(traj: Trajectory) -> str:
    buf = io.StringIO()
    buf.write(f"# pathforge trajectory format_version={FORMAT_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRAJECTORY_COLUMNS)
    for i, pose in enumerate(traj.samples):
        q = pose.orientation
        w.writerow([i, *map(_fmt, pose.position), *map(_fmt, (q.w, q.x, q.y, q.z))])
    return buf.getvalue()


def _csv_body(text: str, columns, kind: str):
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ParseError(f"{kind} CSV: missing format comment line")
    if f"format_version={FORMAT_VERSION}" not in lines[0]:
        raise ValidationError(f"{kind} CSV: unsupported format line {lines[0]!r}")
    rows = list(csv.reader(lines[1:]))
    if not rows or tuple(rows[0]) != tuple(columns):
        raise ValidationError(f"{kind} CSV: header must be {','.join(columns)}")
    for lineno, row in enumerate(rows[1:], start=3):
        if len(row) != len(columns):
            raise ParseError(f"{kind} CSV line {lineno}: expected {len(columns)} fields, got {len(row)}")
        yield lineno, row


def trajectory_from_csv(text: str, step_length: float = 0.0) -> Trajectory:
    samples = []
    for lineno, row in _csv_body(text, TRAJECTORY_COLUMNS, "trajectory"):
        try:
            if int(row[0]) != len(samples):
                raise ValueError("index out of sequence")
            vals = [float(v) for v in row[1:]]
        except ValueError as exc:
            raise ParseError(f"trajectory CSV line {lineno}: {exc}") from None
        samples.append(Pose(np.array(vals[:3]), UnitQuaternion.from_array(vals[3:])))
    return Trajectory(tuple(samples), step_length)


def trace_to_csv(trace: SimTrace) -> str:
    buf = io.StringIO()
    buf.write(f"# pathforge trace format_version={FORMAT_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for k, s, zc, za, f, du, contact, status in trace.rows():
        w.writerow([k, _fmt(s), _fmt(zc), _fmt(za), _fmt(f), _fmt(du), int(contact), status])
    return buf.getvalue()


def trace_from_csv(text: str) -> list[dict]:
    """Rows of a trace CSV as dicts with typed values."""
    out = []
    for lineno, row in _csv_body(text, TRACE_COLUMNS, "trace"):
        try:
            out.append(
                {
                    "step": int(row[0]),
                    "s": float(row[1]),
                    "z_cmd": float(row[2]),
                    "z_actual": float(row[3]),
                    "force": float(row[4]),
                    "du": float(row[5]),
                    "contact": bool(int(row[6])),
                    "status": row[7],
                }
            )
        except ValueError as exc:
            raise ParseError(f"trace CSV line {lineno}: {exc}") from None
    return out
