import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from pathforge.discretize import (
    attach_orientations,
    circular_discretize,
    fit_circle,
    linear_discretize,
    nagata_discretize,
    nagata_eval,
    nagata_prepare,
    slerp_sequence,
)
from pathforge.errors import (
    CollinearPoints,
    DegenerateNormals,
    DegenerateSegment,
    InvalidStep,
    OutOfRange,
)
from pathforge.geometry import UnitQuaternion

Z = (0.0, 0.0, 1.0)


# --- linear ---------------------------------------------------------------


@pytest.mark.parametrize(
    "k, expected_x",
    [
        (0.25, [0, 0.25, 0.5, 0.75, 1]),
        (0.3, [0, 0.3, 0.6, 0.9, 1]),
        (1.0, [0, 1]),
        (5.0, [0, 1]),
    ],
)
def test_linear_examples(k, expected_x):
    pts = linear_discretize((0, 0, 0), (1, 0, 0), k)
    np.testing.assert_allclose([p[0] for p in pts], expected_x, atol=1e-15)
    assert all(p[1] == 0 and p[2] == 0 for p in pts)


def test_linear_errors():
    with pytest.raises(DegenerateSegment):
        linear_discretize((1, 1, 1), (1, 1, 1), 0.1)
    with pytest.raises(InvalidStep):
        linear_discretize((0, 0, 0), (1, 0, 0), 0.0)
    with pytest.raises(InvalidStep):
        linear_discretize((0, 0, 0), (1, 0, 0), -1.0)


def test_linear_endpoints_exact():
    a = np.array([0.1, 0.2, 0.3])
    b = np.array([10.7, -3.3, 2.9])
    pts = linear_discretize(a, b, 0.37)
    assert np.array_equal(pts[0], a)
    assert np.array_equal(pts[-1], b)
    steps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    assert np.all(steps <= 0.37 * (1 + 1e-9))
    np.testing.assert_allclose(steps[:-1], 0.37, rtol=1e-9)


# --- circle ---------------------------------------------------------------


@pytest.mark.parametrize(
    "pts, center, radius",
    [
        (((1, 0, 0), (0, 1, 0), (-1, 0, 0)), (0, 0, 0), 1.0),
        (((2, 0, 5), (0, 2, 5), (-2, 0, 5)), (0, 0, 5), 2.0),
    ],
)
def test_fit_circle_examples(pts, center, radius):
    fit = fit_circle(*pts)
    np.testing.assert_allclose(fit.center, center, atol=1e-12)
    assert fit.radius == pytest.approx(radius, abs=1e-12)
    for p in pts:
        assert np.linalg.norm(np.asarray(p) - fit.center) == pytest.approx(radius, rel=1e-6)
    m = np.array([np.asarray(p) - fit.center for p in pts])
    assert abs(np.linalg.det(m)) < 1e-9


def test_fit_circle_collinear():
    with pytest.raises(CollinearPoints):
        fit_circle((0, 0, 0), (1, 0, 0), (2, 0, 0))


def test_circular_semicircle():
    pts = circular_discretize((1, 0, 0), (0, 1, 0), (-1, 0, 0), math.pi / 8)
    assert len(pts) == 9
    expected = [(math.cos(i * math.pi / 8), math.sin(i * math.pi / 8), 0.0) for i in range(9)]
    np.testing.assert_allclose(pts, expected, atol=1e-12)
    assert np.array_equal(pts[-1], [-1, 0, 0])


def test_circular_single_step():
    h = math.sqrt(2) / 2
    pts = circular_discretize((1, 0, 0), (h, h, 0), (0, 1, 0), math.pi / 2)
    np.testing.assert_allclose(pts, [(1, 0, 0), (0, 1, 0)], atol=1e-12)


def test_circular_errors():
    with pytest.raises(CollinearPoints):
        circular_discretize((0, 0, 0), (1, 0, 0), (2, 0, 0), 0.1)
    with pytest.raises(InvalidStep):
        circular_discretize((1, 0, 0), (0, 1, 0), (-1, 0, 0), 0.0)


def test_circular_reflex_arc():
    # 270 degrees: p1 at 0, p2 at 135, p3 at 270
    c = math.cos(3 * math.pi / 4)
    pts = circular_discretize((1, 0, 0), (c, -c, 0), (0, -1, 0), math.pi / 4)
    assert len(pts) == 7
    angles = np.unwrap([math.atan2(p[1], p[0]) for p in pts])
    np.testing.assert_allclose(angles, np.arange(7) * math.pi / 4, atol=1e-12)


def test_circular_p2_opposite_p1():
    # clockwise 270 degree sweep: (1,0) -> (0,-1) -> (-1,0) -> (0,1)
    pts = circular_discretize((1, 0, 0), (-1, 0, 0), (0, 1, 0), math.pi / 4)
    assert len(pts) == 7
    angles = np.unwrap([math.atan2(p[1], p[0]) for p in pts])
    np.testing.assert_allclose(angles, -np.arange(7) * math.pi / 4, atol=1e-12)


def test_circular_last_movement_shorter():
    pts = circular_discretize((1, 0, 0), (0, 1, 0), (-1, 0, 0), 0.5)
    ang = np.unwrap([math.atan2(p[1], p[0]) for p in pts])
    inc = np.diff(ang)
    np.testing.assert_allclose(inc[:-1], 0.5, atol=1e-12)
    assert 0 < inc[-1] <= 0.5


# --- Nagata ---------------------------------------------------------------


def test_nagata_quarter_circle_coefficients():
    curve = nagata_prepare((0, 0, 0), (1, 0, 0), (0, 1, 0))
    assert curve.a == 0.0
    np.testing.assert_allclose(curve.c, [-1, -1, 0], atol=1e-15)


def test_nagata_chord_branch():
    curve = nagata_prepare((0, 0, 0), (1, 0, 0), (2, 0, 0))
    assert curve.a == 1.0
    np.testing.assert_array_equal(curve.c, np.zeros(3))


def test_nagata_opposite_normals():
    with pytest.raises(DegenerateNormals):
        nagata_prepare((0, 0, 0), (1, 0, 0), (-1, 0, 0))
    with pytest.raises(DegenerateNormals):
        nagata_prepare((0, 0, 0), (0, 0, 0), (1, 0, 0))


def test_nagata_eval_quarter():
    curve = nagata_prepare((0, 0, 0), (1, 0, 0), (0, 1, 0))
    np.testing.assert_array_equal(nagata_eval(curve, 0.0), [1, 0, 0])
    np.testing.assert_array_equal(nagata_eval(curve, 1.0), [0, 1, 0])
    mid = nagata_eval(curve, 0.5)
    np.testing.assert_allclose(mid, [0.75, 0.75, 0], atol=1e-15)
    assert np.linalg.norm(mid) - 1 == pytest.approx(math.sqrt(1.125) - 1, abs=1e-12)
    with pytest.raises(OutOfRange):
        nagata_eval(curve, 1.5)
    with pytest.raises(OutOfRange):
        nagata_eval(curve, -0.1)


def test_nagata_semicircle_discretization():
    pts = nagata_discretize((0, 0, 0), (1, 0, 0), (0, 1, 0), (-1, 0, 0), math.pi / 8)
    assert len(pts) == 9
    np.testing.assert_array_equal(pts[0], [1, 0, 0])
    np.testing.assert_array_equal(pts[4], [0, 1, 0])
    np.testing.assert_array_equal(pts[-1], [-1, 0, 0])
    # hand evaluation of the two sections at eta = 1/2
    np.testing.assert_allclose(pts[2], [0.75, 0.75, 0], atol=1e-15)
    np.testing.assert_allclose(pts[6], [-0.75, 0.75, 0], atol=1e-15)
    radial = np.abs(np.linalg.norm(pts, axis=1) - 1)
    assert radial.max() < 0.061


def test_nagata_large_step_endpoints_only():
    pts = nagata_discretize((0, 0, 0), (1, 0, 0), (0, 1, 0), (-1, 0, 0), 10.0)
    np.testing.assert_allclose(pts, [(1, 0, 0), (0, 1, 0), (-1, 0, 0)], atol=0)


def test_nagata_discretize_degenerate():
    with pytest.raises(DegenerateNormals):
        nagata_discretize((0, 0, 0), (1, 0, 0), (2, 0, 0), (0, 2, 0), 0.1)
    with pytest.raises(InvalidStep):
        nagata_discretize((0, 0, 0), (1, 0, 0), (0, 1, 0), (-1, 0, 0), 0)


unit_vec = st.tuples(*[st.floats(-1, 1)] * 3).map(np.array).filter(lambda v: np.linalg.norm(v) > 0.1)


@settings(max_examples=300)
@given(unit_vec, unit_vec, st.floats(0.5, 50), st.floats(0.5, 50))
def test_nagata_tangency(v1, v2, r1, r2):
    n1 = v1 / np.linalg.norm(v1)
    n2 = v2 / np.linalg.norm(v2)
    assume(abs(n1 @ n2) < 0.999)
    curve = nagata_prepare((0, 0, 0), r1 * n1, r2 * n2)
    assert abs((curve.d - curve.c) @ curve.n1) < 1e-9
    assert abs((curve.d + curve.c) @ curve.n2) < 1e-9
    assert abs(curve.derivative(0.0) @ curve.n1) < 1e-9
    assert abs(curve.derivative(1.0) @ curve.n2) < 1e-9


# --- Slerp ----------------------------------------------------------------


def test_slerp_half_angle():
    qn = UnitQuaternion.from_axis_angle(Z, math.pi / 2)
    seq = slerp_sequence(UnitQuaternion.identity(), qn, 2)
    np.testing.assert_allclose(seq[1].as_array(), [0.92388, 0, 0, 0.38268], atol=1e-5)
    np.testing.assert_allclose(seq[1].as_array(), [math.cos(math.pi / 8), 0, 0, math.sin(math.pi / 8)], atol=1e-9)


def test_slerp_equal_endpoints():
    q = UnitQuaternion.from_axis_angle((1, 2, 3), 0.7)
    for out in slerp_sequence(q, q, 5):
        np.testing.assert_allclose(out.as_array(), q.as_array(), atol=1e-15)


def test_slerp_half_turn_in_quarters():
    qn = UnitQuaternion.from_axis_angle(Z, math.pi)
    seq = slerp_sequence(UnitQuaternion.identity(), qn, 4)
    for i, q in enumerate(seq):
        expected = UnitQuaternion.from_axis_angle(Z, i * math.pi / 4)
        assert q.angle_to(expected) < 1e-9


def test_slerp_shortest_path():
    q0 = UnitQuaternion.identity()
    qn = UnitQuaternion.from_axis_angle(Z, math.pi / 2)
    neg = UnitQuaternion.from_array(-qn.as_array())
    seq = slerp_sequence(q0, neg, 2)
    assert seq[1].angle_to(UnitQuaternion.from_axis_angle(Z, math.pi / 4)) < 1e-9


quat = st.tuples(*[st.floats(-1, 1)] * 4).filter(lambda t: np.linalg.norm(t) > 0.1).map(UnitQuaternion.from_array)


@settings(max_examples=200)
@given(quat, quat, st.integers(1, 40))
def test_slerp_properties(q0, qn, n):
    seq = slerp_sequence(q0, qn, n)
    assert len(seq) == n + 1
    assert seq[0] == q0 and seq[-1] == qn
    for q in seq:
        assert abs(np.linalg.norm(q.as_array()) - 1) < 1e-9
    steps = [a.angle_to(b) for a, b in zip(seq, seq[1:])]
    total = q0.angle_to(qn)
    np.testing.assert_allclose(steps, total / n, atol=1e-9)


def test_attach_two_positions():
    qa = UnitQuaternion.identity()
    qb = UnitQuaternion.from_axis_angle(Z, 1.0)
    traj = attach_orientations([(0, 0, 0), (1, 0, 0)], qa, qb)
    assert traj.orientations == [qa, qb]


def test_attach_even_angular_split():
    qb = UnitQuaternion.from_axis_angle(Z, math.pi / 2)
    pts = linear_discretize((0, 0, 0), (1, 0, 0), 0.25)
    traj = attach_orientations(pts, UnitQuaternion.identity(), qb)
    assert len(traj) == len(pts) == 5
    for i, q in enumerate(traj.orientations):
        assert UnitQuaternion.identity().angle_to(q) == pytest.approx(math.radians(22.5 * i), abs=1e-9)


def test_attach_normal_orientations_on_semicircle():
    # tool axis (x of the tool frame) points radially: rotations about z only
    pts = circular_discretize((1, 0, 0), (0, 1, 0), (-1, 0, 0), math.pi / 8)
    traj = attach_orientations(pts, UnitQuaternion.identity(), UnitQuaternion.from_axis_angle(Z, math.pi))
    for p, q in zip(traj.positions, traj.orientations):
        assert abs(q.x) < 1e-12 and abs(q.y) < 1e-12
        radial = q.rotate((1, 0, 0))
        np.testing.assert_allclose(radial, p, atol=1e-9)
