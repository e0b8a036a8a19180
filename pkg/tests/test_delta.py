from fractions import Fraction as F

import pytest

from voatwist.delta import delta_apply, delta_apply_series, make_delta
from voatwist.errors import DomainError, NeedsFieldExtension
from voatwist.fock import build_module
from voatwist.lie import build_simple_lie
from voatwist.series import LogSeries, series_eq

sl2 = build_simple_lie("A", 1)
MOD = build_module(sl2, F(2), cutoff=8)

U_S = MOD.current(sl2.element({"h1": F(1, 2)}))
U_N = MOD.current("e1")
DS = make_delta(MOD, U_S)
DN = make_delta(MOD, U_N)


def mono(*letters):
    name_to_idx = {n: i for i, n in enumerate(sl2.names)}
    return tuple((name_to_idx[n], m) for n, m in letters)


def vec(*pairs):
    from voatwist.fock import PBWVector

    return PBWVector({m: F(c) for m, c in pairs})


def expect(d, state, terms):
    got = delta_apply(d, state)
    want = LogSeries({(F(e), k): v for (e, k), v in terms.items()})
    assert series_eq(got, want) is None, (got, want)


def test_self_pairing_scalars():
    assert DS.kappa == 1
    assert DN.kappa == 0


# The literal expansions below were worked out by hand from the three
# stage actions (grading twist, nilpotent rotation, positive-mode
# exponential) before the operator code existed, and are kept frozen.

def test_semisimple_shift_of_raising_current():
    expect(DS, MOD.current("e1"), {(-1, 0): vec((mono(("e1", -1)), 1))})


def test_semisimple_shift_of_lowering_current():
    expect(DS, MOD.current("f1"), {(1, 0): vec((mono(("f1", -1)), 1))})


def test_semisimple_shift_of_cartan_current():
    expect(
        DS,
        MOD.current("h1"),
        {(0, 0): vec((mono(("h1", -1)), 1)), (-1, 0): vec(((), -2))},
    )


def test_semisimple_shift_of_depth_two_current():
    state = MOD.apply_mode("f1", -2, MOD.vacuum())
    expect(
        DS,
        state,
        {(1, 0): vec((mono(("f1", -2)), 1)), (0, 0): vec((mono(("f1", -1)), 1))},
    )


def test_semisimple_shift_of_quadratic_state():
    state = MOD.apply_mode("e1", -1, MOD.current("f1"))
    expect(
        DS,
        state,
        {
            (0, 0): vec((mono(("e1", -1), ("f1", -1)), 1)),
            (-1, 0): vec((mono(("h1", -1)), -1)),
            (-2, 0): vec(((), 2)),
        },
    )


def test_semisimple_shift_of_conformal_vector():
    expect(
        DS,
        MOD.conformal_vector(),
        {
            (0, 0): MOD.conformal_vector(),
            (-1, 0): vec((mono(("h1", -1)), F(-1, 2))),
            (-2, 0): vec(((), F(1, 2))),
        },
    )


def test_nilpotent_shift_of_lowering_current():
    expect(
        DN,
        MOD.current("f1"),
        {
            (0, 0): vec((mono(("f1", -1)), 1)),
            (0, 1): vec((mono(("h1", -1)), -1)),
            (0, 2): vec((mono(("e1", -1)), -1)),
            (-1, 0): vec(((), -2)),
        },
    )


def test_nilpotent_shift_fixes_raising_current():
    expect(DN, MOD.current("e1"), {(0, 0): vec((mono(("e1", -1)), 1))})


def test_zero_current_gives_identity():
    ident = make_delta(MOD, 0 * MOD.vacuum())
    assert ident.is_identity
    state = MOD.apply_mode("h1", -2, MOD.current("e1"))
    got = delta_apply(ident, state)
    assert series_eq(got, LogSeries({(F(0), 0): state})) is None


def test_legacy_sign_flips_grading_direction():
    legacy = make_delta(MOD, U_S, legacy_sign_convention=True)
    got = delta_apply(legacy, MOD.current("e1"))
    want = LogSeries({(F(1), 0): MOD.current("e1")})
    assert series_eq(got, want) is None


def test_series_application_composes():
    state = MOD.current("f1")
    once = delta_apply(DS, state)
    twice = delta_apply_series(DS, once)
    # two half-h shifts equal one full-h shift
    full = make_delta(MOD, MOD.current(sl2.element({"h1": F(1)})))
    assert series_eq(twice, delta_apply(full, state)) is None


def test_rejects_non_current_input():
    with pytest.raises(DomainError):
        make_delta(MOD, MOD.apply_mode("e1", -2, MOD.vacuum()))
    with pytest.raises(DomainError):
        make_delta(MOD, MOD.conformal_vector())


def test_rejects_irrational_split():
    with pytest.raises(NeedsFieldExtension):
        make_delta(MOD, MOD.current("e1") - MOD.current("f1"))


def test_weights_are_respected():
    # the shift of a weight-w state stays at weight <= w in each term
    state = MOD.apply_mode("e1", -1, MOD.current("f1"))
    for (_e, _k), term in delta_apply(DS, state).terms.items():
        assert max(term.weight_components()) <= 2
