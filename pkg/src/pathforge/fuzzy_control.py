"""Mamdani Fuzzy-PI force controller.

Inputs are the force error ``e = f_desired - f_actual`` and its change
``de``; both are scaled into ``[-1, 1]``, fuzzified over seven triangular
labels, pushed through a 7x7 PI-like rule base (min conjunction, max
aggregation) and defuzzified by centre of area over singleton outputs.
The crisp output, scaled by ``K_x``, is a displacement increment that the
inner position loop executes. Positive increments push the tool further
into the contact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NoActivation


class Label(enum.IntEnum):
    NL = -3
    NM = -2
    NS = -1
    ZR = 0
    PS = 1
    PM = 2
    PL = 3

    @property
    def lower(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, name: str) -> Label:
        return cls[name.upper()]


LABELS = tuple(Label)


@dataclass(frozen=True)
class MembershipSet:
    """Triangular labels over ``[-1, 1]``; feet sit on the neighbouring peaks.

    The outermost labels are shoulders: ``NL`` is 1 for every value at or
    below its peak, ``PL`` likewise above its peak.
    """

    peaks: tuple[float, ...] = (-1.0, -2 / 3, -1 / 3, 0.0, 1 / 3, 2 / 3, 1.0)

    def __post_init__(self):
        if len(self.peaks) != len(LABELS):
            raise ValueError("exactly seven label peaks are required")
        if any(b <= a for a, b in zip(self.peaks, self.peaks[1:])):
            raise ValueError("label peaks must be strictly increasing")

    def triangle(self, label: Label) -> tuple[float, float, float]:
        i = LABELS.index(label)
        left = self.peaks[i - 1] if i > 0 else -np.inf
        right = self.peaks[i + 1] if i < len(LABELS) - 1 else np.inf
        return left, self.peaks[i], right

    def grade(self, label: Label, x: float) -> float:
        left, peak, right = self.triangle(label)
        if x == peak:
            return 1.0
        if x < peak:
            if left == -np.inf:
                return 1.0
            return max(0.0, (x - left) / (peak - left))
        if right == np.inf:
            return 1.0
        return max(0.0, (right - x) / (right - peak))

    def center(self, label: Label) -> float:
        return self.peaks[LABELS.index(label)]


DEFAULT_SETS = MembershipSet()


def _table(rows: dict[str, str]) -> dict[tuple[Label, Label], Label]:
    # rows keyed by de label; each row lists outputs for e = NL .. PL
    out = {}
    for de_name, row in rows.items():
        for e_label, out_name in zip(LABELS, row.split()):
            out[(Label.parse(de_name), e_label)] = Label.parse(out_name)
    return out


# Rule base as published: rows indexed by de, columns by e (NL .. PL).
VERBATIM_RULES = _table(
    {
        "PL": "nl nm ns zr pm pl pl",
        "PM": "nl nl nm zr pm pl pl",
        "PS": "nl nl ns zr ps pl pl",
        "ZR": "nl nm ns zr ps pm pl",
        "NS": "nl nl ns zr ps pl pl",
        "NM": "nl nl nm zr pm pl pl",
        "NL": "nl nl nm zr ps pm pl",
    }
)

# Classical diagonal MacVicar-Whelan layout: output index = clamp(e + de).
SYMMETRIZED_RULES = {
    (de, e): Label(max(-3, min(3, int(de) + int(e))))
    for de in LABELS
    for e in LABELS
}


@dataclass(frozen=True)
class RuleBase:
    table: dict = field(default_factory=lambda: dict(VERBATIM_RULES))

    def __post_init__(self):
        if set(self.table) != {(de, e) for de in LABELS for e in LABELS}:
            raise ValueError("rule base must cover all 49 (de, e) pairs")

    @classmethod
    def named(cls, name: str) -> RuleBase:
        tables = {"verbatim": VERBATIM_RULES, "symmetrized": SYMMETRIZED_RULES}
        try:
            return cls(dict(tables[name]))
        except KeyError:
            raise ValueError(f"unknown rule table {name!r}; choose from {sorted(tables)}") from None

    def lookup(self, de: Label, e: Label) -> Label:
        return self.table[(de, e)]


def fuzzify(value: float, sets: MembershipSet = DEFAULT_SETS) -> list[tuple[Label, float]]:
    """Labels with a positive grade for ``value``, clamped to [-1, 1]."""
    x = min(1.0, max(-1.0, float(value)))
    graded = ((label, sets.grade(label, x)) for label in LABELS)
    return [(label, g) for label, g in graded if g > 0.0]


def infer(e_labels, de_labels, rules: RuleBase) -> list[tuple[Label, float]]:
    """Min conjunction per rule, max aggregation per output label."""
    acts: dict[Label, float] = {}
    for de_label, de_grade in de_labels:
        for e_label, e_grade in e_labels:
            out = rules.lookup(de_label, e_label)
            strength = min(de_grade, e_grade)
            if strength > acts.get(out, 0.0):
                acts[out] = strength
    return sorted(acts.items())


def defuzzify(activations, sets: MembershipSet = DEFAULT_SETS) -> float:
    """Centre of area over output singletons placed at the label peaks."""
    num = 0.0
    den = 0.0
    for label, mu in activations:
        num += mu * sets.center(label)
        den += mu
    if den <= 0.0:
        raise NoActivation("no output label was activated")
    return num / den


@dataclass(frozen=True)
class FuzzyPIState:
    """Controller memory and tuning for one or more task axes.

    Attributes:
        k_p: scaling applied to the error change before fuzzification.
        k_i: scaling applied to the error before fuzzification.
        k_x: output scaling, displacement (mm) per unit of crisp output.
        selection: 1 for force-controlled axes, 0 for motion-controlled.
        e_prev: error from the previous step, per axis.
        u: accumulated displacement, per axis.
    """

    k_p: float
    k_i: float
    k_x: float
    selection: tuple[int, ...] = (1,)
    e_prev: tuple[float, ...] | None = None
    u: tuple[float, ...] | None = None
    rules: RuleBase = field(default_factory=RuleBase)
    sets: MembershipSet = DEFAULT_SETS

    def __post_init__(self):
        for name in ("k_p", "k_i", "k_x"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        sel = tuple(int(s) for s in self.selection)
        if any(s not in (0, 1) for s in sel):
            raise ValueError("selection entries must be 0 or 1")
        object.__setattr__(self, "selection", sel)
        zeros = (0.0,) * len(sel)
        for name in ("e_prev", "u"):
            val = getattr(self, name)
            val = zeros if val is None else tuple(float(v) for v in val)
            if len(val) != len(sel):
                raise ValueError(f"{name} must have one entry per axis")
            object.__setattr__(self, name, val)

    @property
    def output_quantum(self) -> float:
        """Displacement between adjacent output singletons, mm."""
        return self.k_x * float(np.min(np.diff(self.sets.peaks)))

    def crisp(self, e: float, de: float) -> float:
        """Unscaled crisp output for one axis."""
        acts = infer(fuzzify(self.k_i * e, self.sets), fuzzify(self.k_p * de, self.sets), self.rules)
        try:
            return defuzzify(acts, self.sets)
        except NoActivation:
            return 0.0


def fuzzy_pi_step(state: FuzzyPIState, f_desired, f_actual) -> tuple[np.ndarray, FuzzyPIState]:
    """Advance the controller one sample.

    Returns the displacement increment per axis and the successor state.
    Axes with selection 0 get a zero increment and their error memory is
    left untouched.
    """
    f_d = np.atleast_1d(np.asarray(f_desired, dtype=float))
    f_e = np.atleast_1d(np.asarray(f_actual, dtype=float))
    n = len(state.selection)
    if f_d.shape != (n,) or f_e.shape != (n,):
        raise ValueError(f"wrenches must have {n} components")
    du = np.zeros(n)
    e_new = list(state.e_prev)
    for i, active in enumerate(state.selection):
        if not active:
            continue
        e = f_d[i] - f_e[i]
        de = e - state.e_prev[i]
        du[i] = state.k_x * state.crisp(e, de)
        e_new[i] = e
    u = tuple(np.asarray(state.u) + du)
    return du, replace(state, e_prev=tuple(e_new), u=u)
