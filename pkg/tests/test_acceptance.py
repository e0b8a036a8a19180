"""Full acceptance run at desk scale.

One test per criterion, named so the verbose runner emits exactly one
pass or fail line each.  Every comparison is exact rational or
cyclotomic equality; there are no tolerances anywhere.  The rank-one
base algebra carries most of the load, rank two enters where the
criterion calls for it.  Expected wall time for the whole file is a few
minutes, dominated by the conjugation identity and the rank-two mode
table sweep.
"""

import json
from fractions import Fraction as F

from voatwist.cli import main
from voatwist.fock import build_module
from voatwist.lie import build_simple_lie
from voatwist.twist import make_twisted, mode_table_entry, untwisted_as_twisted
from voatwist.verify import (
    basis_states,
    chain_log_bound,
    check_additivity,
    check_conformal_shift,
    check_equivariance,
    check_functor_transport,
    check_grading_restriction,
    check_group_laws,
    check_mode_tables,
    check_regraded_weights,
    check_shift_conjugation,
    check_translation_bracket,
    check_twisted_commutators,
    check_weight_bracket,
    check_zero_mode_nilpotency,
)

import pathlib

CONFIG_DIR = pathlib.Path(__file__).resolve().parent.parent / "configs"

SL2 = build_simple_lie("A", 1)
MOD = build_module(SL2, F(2), cutoff=9)
U_S = MOD.current(SL2.element({"h1": F(1, 2)}))
U_N = MOD.current("e1")
BASIS3 = basis_states(MOD, 3)
BASIS4 = basis_states(MOD, 4)
E_IDX = SL2.names.index("e1")


def _verdict(num, ok, evidence=None):
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'}")
    if not ok:
        raise AssertionError(f"criterion {num}: FAIL "
                             + json.dumps(evidence, default=str))


def _all_pass(reports):
    return all(r.status == "pass" for r in reports)


def test_criterion_1():
    # the defining identities of the shift operator, for the semisimple
    # and the nilpotent current, on the whole basis window
    reports = []
    for u in (U_S, U_N):
        reports.append(check_shift_conjugation(MOD, u, BASIS3, BASIS3,
                                               inner_ceiling=2))
        reports.append(check_weight_bracket(MOD, u, BASIS3))
        reports.append(check_translation_bracket(MOD, u, BASIS3))
    legacy = check_shift_conjugation(MOD, U_S, BASIS3, BASIS3,
                                     inner_ceiling=2, legacy=True)
    flipped_fails = legacy.status == "fail" and legacy.witness is not None
    _verdict(1, _all_pass(reports) and flipped_fails,
             [r.to_dict() for r in reports + [legacy]])


def test_criterion_2():
    reports = [check_group_laws(MOD, U_S, BASIS4),
               check_group_laws(MOD, U_N, BASIS4)]
    # additivity over genuine semisimple plus nilpotent pairs; the
    # orthogonality preconditions are recomputed by brute force here
    # before the check recomputes them again internally
    sl3 = build_simple_lie("A", 2)
    m3 = build_module(sl3, F(2), cutoff=4)
    pairs = [
        (sl3.element({"h1": F(2), "h2": F(1)}), sl3.element({"e2": F(1)})),
        (sl3.element({"h1": F(1), "h2": F(2)}), sl3.element({"e1": F(1)})),
    ]
    targets = basis_states(m3, 2)
    for s, n in pairs:
        assert sl3.bracket(s, n).is_zero()
        assert sl3.form(s, n) == 0
        reports.append(check_additivity(m3, m3.current(s), m3.current(n),
                                        targets))
    _verdict(2, _all_pass(reports), [r.to_dict() for r in reports])


def test_criterion_3():
    # closed-form mode tables against the series route, every generator,
    # both ranks, modes across the full span on the branch lattice
    tw2 = make_twisted(MOD, U_S)
    eig = tw2.steps[0].eig
    seen = {eig.eigenvalue_of(SL2.generator(nm)) for nm in SL2.names}
    assert F(1) in seen and F(0) in seen
    # the Cartan zero mode carries the pairing shift rather than acting
    # bare, which is the one table case invisible at nonzero modes
    _ops, scalar = mode_table_entry(tw2, "h1", 0)
    s_elt = SL2.element({"h1": F(1, 2)})
    assert scalar == -SL2.form(SL2.generator("h1"), s_elt) * 2
    reports = [check_mode_tables(tw2, mode_span=3, weight=3)]

    sl3 = build_simple_lie("A", 2)
    m7 = build_module(sl3, F(2), cutoff=7)
    tw3 = make_twisted(m7, m7.current(sl3.element({"h1": F(1, 2)})))
    eig3 = tw3.steps[0].eig
    vals = {nm: eig3.eigenvalue_of(sl3.generator(nm)) for nm in sl3.names}
    assert vals["e1"] == 1 and vals["e2"] == F(-1, 2) and vals["h2"] == 0
    reports.append(check_mode_tables(tw3, mode_span=3, weight=3))
    _verdict(3, _all_pass(reports), [r.to_dict() for r in reports])


def test_criterion_4():
    tw = make_twisted(MOD, U_S)
    reports = [check_conformal_shift(untwisted_as_twisted(MOD), tw, weight=4)]
    assert reports[0].details.get("selfPairingScalar") == "1"
    # every raising-generator power lands on the same regraded weight
    expectations = [((), F(1, 2))]
    for k in range(1, 7):
        expectations.append((((E_IDX, -1),) * k, F(1, 2)))
    reports.append(check_regraded_weights(tw, expectations))
    grading = check_grading_restriction(tw)
    documented_failure = (grading.status == "fail"
                          and grading.witness["family"] == "e1(-1)^k |0>")
    _verdict(4, _all_pass(reports) and documented_failure,
             [r.to_dict() for r in reports + [grading]])


def test_criterion_5():
    # log-bearing tables for the two-step chain, semisimple base then
    # nilpotent top
    for nm in SL2.names:
        cubed = SL2.bracket(SL2.generator("e1"), SL2.bracket(
            SL2.generator("e1"), SL2.bracket(SL2.generator("e1"),
                                             SL2.generator(nm))))
        assert cubed.is_zero()
    base = make_twisted(MOD, U_S)
    chain = make_twisted(base, U_N)
    assert chain_log_bound(chain) == 2
    rep = check_mode_tables(chain, mode_span=2, weight=3, log_max=2)
    ok = rep.status == "pass" and rep.details["logPowersChecked"] == 3
    _verdict(5, ok, rep.to_dict())


def test_criterion_6():
    third = make_twisted(MOD, MOD.current(SL2.element({"h1": F(1, 3)})))
    assert third.branch_order() == 3
    reports = [check_equivariance(third, ceiling=2)]
    # the unipotent chain exercises the formal log shift as well
    uni = make_twisted(MOD, U_N)
    reports.append(check_equivariance(uni, ceiling=1))
    _verdict(6, _all_pass(reports), [r.to_dict() for r in reports])


def test_criterion_7():
    tw = make_twisted(MOD, U_S)
    rep = check_twisted_commutators(tw, pairs=[("e1", "f1")], mode_span=3,
                                    weight=3)
    _verdict(7, rep.status == "pass", rep.to_dict())


def test_criterion_8():
    reports = [check_functor_transport(MOD, U_S, probe_weight=2, ceiling=2),
               check_functor_transport(MOD, U_N, probe_weight=2, ceiling=2)]
    ok = _all_pass(reports) and all(r.details.get("skewRejected")
                                    for r in reports)
    _verdict(8, ok, [r.to_dict() for r in reports])


def test_criterion_9(tmp_path, capsys):
    first = tmp_path / "first.json"
    second = tmp_path / "second.json"
    code_a = main(["run", str(CONFIG_DIR / "sl2_semisimple.json"),
                   "--output", str(first)])
    code_b = main(["run", str(CONFIG_DIR / "sl2_semisimple.json"),
                   "--output", str(second)])
    identical = first.read_bytes() == second.read_bytes()

    statuses = {}
    for stem, want in (("critical_level", 10), ("not_fixed", 11),
                       ("needs_field_extension", 12)):
        got = main(["run", str(CONFIG_DIR / f"{stem}.json")])
        payload = json.loads(capsys.readouterr().out)
        statuses[stem] = (got == want, "error" in payload)
    capsys.readouterr()
    ok = (code_a == code_b == 0 and identical
          and all(flag and shaped for flag, shaped in statuses.values()))
    _verdict(9, ok, {"runCodes": [code_a, code_b],
                     "identical": identical, "errors": statuses})
