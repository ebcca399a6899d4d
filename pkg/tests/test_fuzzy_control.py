import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pathforge.errors import NoActivation
from pathforge.fuzzy_control import (
    DEFAULT_SETS,
    LABELS,
    SYMMETRIZED_RULES,
    FuzzyPIState,
    Label,
    RuleBase,
    defuzzify,
    fuzzify,
    fuzzy_pi_step,
    infer,
)

L = Label

# Independent transcription of the published rule table, rows = de, columns = e.
PRINTED = """
PL | nl nm ns zr pm pl pl
PM | nl nl nm zr pm pl pl
PS | nl nl ns zr ps pl pl
ZR | nl nm ns zr ps pm pl
NS | nl nl ns zr ps pl pl
NM | nl nl nm zr pm pl pl
NL | nl nl nm zr ps pm pl
"""
COLUMNS = ["NL", "NM", "NS", "ZR", "PS", "PM", "PL"]


def printed_cells():
    for line in PRINTED.strip().splitlines():
        de, row = line.split("|")
        for e, out in zip(COLUMNS, row.split()):
            yield de.strip(), e, out


@pytest.mark.parametrize("de, e, out", list(printed_cells()))
def test_rule_table_cell(de, e, out):
    assert RuleBase().lookup(L[de], L[e]).lower == out


def test_zr_column_all_zero():
    rb = RuleBase()
    assert all(rb.lookup(de, L.ZR) is L.ZR for de in LABELS)


def test_symmetrized_table():
    rb = RuleBase.named("symmetrized")
    assert rb.table == SYMMETRIZED_RULES
    assert rb.lookup(L.ZR, L.PS) is L.PS
    assert rb.lookup(L.PL, L.PL) is L.PL
    assert rb.lookup(L.NS, L.PS) is L.ZR
    with pytest.raises(ValueError):
        RuleBase.named("nope")


@pytest.mark.parametrize(
    "value, expected",
    [
        (0.0, [(L.ZR, 1.0)]),
        (1.0, [(L.PL, 1.0)]),
        (5.0, [(L.PL, 1.0)]),
        (-1.0, [(L.NL, 1.0)]),
        (1 / 6, [(L.ZR, 0.5), (L.PS, 0.5)]),
    ],
)
def test_fuzzify_examples(value, expected):
    got = fuzzify(value)
    assert [lab for lab, _ in got] == [lab for lab, _ in expected]
    np.testing.assert_allclose([g for _, g in got], [g for _, g in expected], atol=1e-12)


@given(st.floats(-1, 1))
def test_partition_of_unity(x):
    grades = [DEFAULT_SETS.grade(lab, x) for lab in LABELS]
    assert all(0.0 <= g <= 1.0 for g in grades)
    assert sum(grades) == pytest.approx(1.0, abs=1e-12)
    assert len(fuzzify(x)) <= 2


def test_membership_triangles():
    assert DEFAULT_SETS.triangle(L.PS) == pytest.approx((0.0, 1 / 3, 2 / 3))
    assert DEFAULT_SETS.center(L.NM) == pytest.approx(-2 / 3)


@pytest.mark.parametrize(
    "e_labels, de_labels, expected",
    [
        ([(L.ZR, 1.0)], [(L.PL, 1.0)], [(L.ZR, 1.0)]),
        ([(L.PS, 1.0)], [(L.ZR, 1.0)], [(L.PS, 1.0)]),
        ([(L.ZR, 0.5), (L.PS, 0.5)], [(L.ZR, 1.0)], [(L.ZR, 0.5), (L.PS, 0.5)]),
    ],
)
def test_infer_examples(e_labels, de_labels, expected):
    assert infer(e_labels, de_labels, RuleBase()) == expected


def test_infer_max_aggregation():
    # de split NS/ZR with e = PS: rows NS and ZR both map column PS to ps
    acts = infer([(L.PS, 1.0)], [(L.NS, 0.3), (L.ZR, 0.7)], RuleBase())
    assert acts == [(L.PS, 0.7)]


@pytest.mark.parametrize(
    "acts, expected",
    [
        ([(L.ZR, 1.0)], 0.0),
        ([(L.PS, 1.0)], 1 / 3),
        ([(L.ZR, 0.5), (L.PS, 0.5)], 1 / 6),
    ],
)
def test_defuzzify_examples(acts, expected):
    assert defuzzify(acts) == pytest.approx(expected, abs=1e-15)


def test_defuzzify_no_activation():
    with pytest.raises(NoActivation):
        defuzzify([])
    with pytest.raises(NoActivation):
        defuzzify([(L.PS, 0.0)])


def make_state(**kw):
    base = dict(k_p=0.025, k_i=0.025, k_x=0.5)
    base.update(kw)
    return FuzzyPIState(**base)


def test_zero_error_step():
    st0 = make_state()
    du, st1 = fuzzy_pi_step(st0, [40.0], [40.0])
    assert du.tolist() == [0.0]
    assert st1.u == (0.0,) and st1.e_prev == (0.0,)


def test_positive_error_positive_displacement():
    st0 = make_state(e_prev=(10.0,))
    du, _ = fuzzy_pi_step(st0, [40.0], [30.0])
    assert du[0] > 0
    du, _ = fuzzy_pi_step(make_state(e_prev=(-10.0,)), [40.0], [50.0])
    assert du[0] < 0


def test_selection_gates_axis():
    st0 = make_state(selection=(1, 0, 1))
    du, st1 = fuzzy_pi_step(st0, [40.0, 40.0, 0.0], [0.0, 0.0, 500.0])
    assert du[1] == 0.0
    assert du[0] > 0 and du[2] < 0
    assert st1.e_prev[1] == 0.0


def test_row_zr_is_linear_in_scaled_error():
    # with de = 0 the verbatim row ZR maps each label to itself
    st0 = make_state(k_i=1.0, k_x=1.0)
    for e in np.linspace(-1, 1, 21):
        assert st0.crisp(e, 0.0) == pytest.approx(e, abs=1e-12)


def test_output_bounded_by_singletons():
    st0 = make_state(k_i=1.0, k_p=1.0, k_x=1.0)
    for e in np.linspace(-3, 3, 31):
        for de in np.linspace(-3, 3, 31):
            assert abs(st0.crisp(e, de)) <= 1.0 + 1e-15


def test_integration_matches_sum_of_increments():
    rng = np.random.default_rng(11)
    state = make_state(selection=(1, 1))
    total = np.zeros(2)
    for _ in range(100):
        du, state = fuzzy_pi_step(state, [40.0, 0.0], rng.uniform(-80, 120, 2))
        total += du
    np.testing.assert_allclose(state.u, total, atol=1e-12)


def test_state_validation():
    with pytest.raises(ValueError):
        make_state(k_p=0.0)
    with pytest.raises(ValueError):
        make_state(selection=(2,))
    with pytest.raises(ValueError):
        make_state(selection=(1, 1), u=(0.0,))
    with pytest.raises(ValueError):
        fuzzy_pi_step(make_state(), [1.0, 2.0], [1.0, 2.0])


def test_output_quantum():
    assert make_state(k_x=0.6).output_quantum == pytest.approx(0.2)
