from torsiongrowth.curves import curve_from_long
from torsiongrowth.fields import QI, QSQRT_MINUS3, RelQuadField, same_square_class
from torsiongrowth.growth import (
    GrowthRecord,
    allowed_growth,
    classification_tables,
    detection_plan,
    growth_extensions,
    najman_groups,
    summand_count,
    restriction_audit,
    growth_targets_even,
    growth_targets_odd,
)
from torsiongrowth.torsion import (
    TorsionGroup,
    normalize_curve,
    torsion_over_quad,
    torsion_over_relquad,
)


def test_summand_count():
    assert summand_count(TorsionGroup((2, 8)), 2) == 2
    assert summand_count(TorsionGroup((1, 12)), 3) == 1
    assert summand_count(TorsionGroup((1, 5)), 7) == 0
    assert summand_count(TorsionGroup((3, 3)), 3) == 2
    assert summand_count(TorsionGroup((1, 1)), 2) == 0


def test_detection_plan_examples():
    E = curve_from_long(QI, [1, 0, 1, -454, -544])  # E(K) = C2
    W = normalize_curve(E).work
    plan = detection_plan(W, TorsionGroup((1, 2)))
    assert plan.entries[2] == W.division_poly_x(4)
    assert plan.entries[3] == W.division_poly_x(3)
    assert plan.entries[5] == W.division_poly_x(5)
    assert plan.entries[7] == W.division_poly_x(7)
    assert plan.two_torsion_cubic == W.two_division_poly()

    plan = detection_plan(W, TorsionGroup((3, 3)))
    assert plan.entries[3] is None
    plan = detection_plan(W, TorsionGroup((1, 10)))
    assert plan.entries[5] is None
    plan = detection_plan(W, TorsionGroup((1, 1)))
    assert plan.entries[2] is None and plan.two_torsion_cubic is None
    # C8 base needs the level-16 x-part
    plan = detection_plan(W, TorsionGroup((1, 8)))
    assert plan.entries[2] == W.division_poly_x(16)
    # C2+C8 caps at level 16
    plan = detection_plan(W, TorsionGroup((2, 8)))
    assert plan.entries[2] == W.division_poly_x(16)


def test_classification_lists():
    assert (1, 11) not in najman_groups(QI)
    assert (4, 4) in najman_groups(QI)
    assert (4, 4) not in najman_groups(QSQRT_MINUS3)
    assert (3, 6) in najman_groups(QSQRT_MINUS3)
    assert (1, 14) not in growth_targets_even(QI)
    assert (1, 16) in growth_targets_even(QI)
    assert (4, 4) in growth_targets_even(QSQRT_MINUS3)
    assert (4, 4) not in growth_targets_even(QI)
    assert (6, 6) in growth_targets_even(QSQRT_MINUS3, extended=True)
    assert (6, 6) not in growth_targets_even(QSQRT_MINUS3)
    assert (1, 7) in growth_targets_odd(QI, extended=True)
    assert (1, 7) not in growth_targets_odd(QI)
    assert (3, 3) in growth_targets_odd(QSQRT_MINUS3)
    tables = classification_tables(QI)
    assert tables.najman_list == najman_groups(QI)
    assert (1, 2) in tables.mazur_list and (2, 12) in tables.kamienny_list


def test_growth_extensions_examples(capsys):
    E = curve_from_long(QI, [0, 0, 0, 0, -27])
    recs = growth_extensions(E)
    hits = [r for r in recs if same_square_class(r.d, QI.elem(-3))]
    assert len(hits) == 1 and hits[0].group.invariants == (2, 6)

    E = curve_from_long(QI, [1, 0, 1, -171, -874])
    recs = growth_extensions(E)
    by_class = {
        (-3): (1, 6),
        (-7): (2, 2),
    }
    for dval, inv in by_class.items():
        hits = [r for r in recs if same_square_class(r.d, QI.elem(dval))]
        assert len(hits) == 1 and hits[0].group.invariants == inv

    E = curve_from_long(QI, [1, 0, 0, 210, 900])
    recs = growth_extensions(E)
    hits = [r for r in recs if same_square_class(r.d, QI.elem(-15))]
    assert len(hits) == 1 and hits[0].group.invariants == (1, 16)


def test_growth_records_are_sound():
    E = curve_from_long(QSQRT_MINUS3, [1, 1, 1, -80, 242])
    T = torsion_over_quad(E)
    recs = growth_extensions(E)
    assert recs, "this curve grows in several extensions"
    for r in recs:
        # strictly contains the base torsion
        assert r.group.contains_group(T) and r.group.order > T.order
        # reproduced independently of the witness path
        again = torsion_over_relquad(E, r.d)
        assert again.invariants == r.group.invariants
        # witness is a genuinely new point on E over L
        assert r.witness is not None
        assert E.contains(r.witness)
        # generators live on E over L
        for P in r.group.generators:
            assert E.contains(P)


def test_allowed_growth_examples():
    C2 = TorsionGroup((1, 2))
    C4 = TorsionGroup((1, 4))
    assert allowed_growth(QI, C4, TorsionGroup((4, 8))) == "forbidden"
    assert allowed_growth(QI, C2, C4) == "allowed"
    assert allowed_growth(QI, C2, TorsionGroup((2, 20))) == "forbidden"
    assert allowed_growth(QI, C2, TorsionGroup((4, 20))) == "forbidden"
    assert allowed_growth(QI, C4, TorsionGroup((1, 16))) == "forbidden"
    assert allowed_growth(QI, C2, TorsionGroup((1, 16))) == "allowed"
    assert allowed_growth(QI, C4, TorsionGroup((2, 16))) == "unlisted"
    # field-conditional cells
    assert allowed_growth(QSQRT_MINUS3, C4, TorsionGroup((4, 4))) == "allowed"
    assert allowed_growth(QI, C4, TorsionGroup((4, 4))) == "forbidden"
    assert allowed_growth(QSQRT_MINUS3, C2, TorsionGroup((3, 6))) == "allowed"
    assert allowed_growth(QI, C2, TorsionGroup((3, 6))) == "forbidden"
    C6 = TorsionGroup((1, 6))
    assert allowed_growth(QI, C6, TorsionGroup((3, 6))) == "allowed"
    assert allowed_growth(QSQRT_MINUS3, C6, TorsionGroup((3, 6))) == "forbidden"
    # trivial-2-torsion regime
    C1 = TorsionGroup((1, 1))
    assert allowed_growth(QI, C1, TorsionGroup((1, 9))) == "allowed"
    assert allowed_growth(QI, C1, TorsionGroup((1, 7))) == "unlisted"
    assert allowed_growth(QI, C1, TorsionGroup((1, 25))) == "forbidden"
    assert allowed_growth(QI, TorsionGroup((1, 3)), TorsionGroup((1, 15))) == "allowed"
    assert allowed_growth(QI, TorsionGroup((1, 9)), TorsionGroup((9, 9))) == "forbidden"
    # containment failures are forbidden regardless of the lists
    assert allowed_growth(QI, C4, TorsionGroup((1, 6))) == "forbidden"


def _fake_record(E, d, invariants):
    K = E.field
    from torsiongrowth.fields import square_class_rep

    d_can = square_class_rep(K.elem(d))
    return GrowthRecord(
        d=d_can,
        ext_field=RelQuadField(K, d_can),
        group=TorsionGroup(invariants),
        witness=None,
        provenance=("synthetic",),
    )


def test_restriction_audit_clean_on_real_rows():
    for field, coeffs in [
        (QI, [1, 0, 1, -171, -874]),
        (QI, [1, 1, 1, -80, 242]),
        (QSQRT_MINUS3, [1, 0, 1, -76, 298]),
    ]:
        E = curve_from_long(field, coeffs)
        T = torsion_over_quad(E)
        recs = growth_extensions(E)
        assert restriction_audit(E, T, recs) == []


def test_restriction_audit_flags_synthetic_violations():
    # family 1: a forbidden target group (C4 cannot grow to C16)
    E = curve_from_long(QI, [1, 1, 1, -80, 242])  # E(K) = C4
    T = torsion_over_quad(E)
    bad = [_fake_record(E, 5, (1, 16))]
    out = restriction_audit(E, T, bad)
    assert any("C16" in v for v in out)

    # family 2: twist-side conditions (C6 over L needs 3-torsion on one side)
    E = curve_from_long(QI, [1, 0, 1, -454, -544])  # E(K) = C2
    T = torsion_over_quad(E)
    from torsiongrowth.torsion import twist_torsion

    d = None
    for cand in (5, 13, 17, -7, 21):
        if twist_torsion(E, QI.elem(cand)).order % 3 != 0:
            d = cand
            break
    assert d is not None
    bad = [_fake_record(E, d, (1, 6))]
    out = restriction_audit(E, T, bad)
    assert any("C6" in v for v in out)

    # family 3: odd-torsion growth counts (no growth from C7/C9/C3+C3)
    from torsiongrowth.curves import kubert_curve_7

    E7, _P = kubert_curve_7(QI.elem(2))
    T7 = torsion_over_quad(E7)
    assert T7.invariants == (1, 7)
    bad = [_fake_record(E7, -3, (1, 21))]
    out = restriction_audit(E7, T7, bad)
    assert any("admits no growth" in v for v in out)


def test_oddtwist_growth_counts():
    # C3 and C5 bases grow in at most one extension; C7 and C9 never grow
    for field, coeffs, base in [
        (QI, [0, 1, 1, -9, -15], (1, 3)),
        (QI, [1, 1, 1, -3, 1], (1, 5)),
        (QI, [1, -1, 0, -24, -64], (1, 1)),
    ]:
        E = curve_from_long(field, coeffs)
        T = torsion_over_quad(E)
        assert T.invariants == base
        recs = growth_extensions(E)
        if base in ((1, 3), (1, 5)):
            assert len(recs) <= 1
        assert restriction_audit(E, T, recs) == []


def test_pruned_scan_matches_default():
    for field, coeffs in [(QI, [1, 0, 1, -171, -874]),
                          (QSQRT_MINUS3, [1, 1, 1, -80, 242])]:
        E = curve_from_long(field, coeffs)
        default = [(r.d, r.group.invariants) for r in growth_extensions(E)]
        pruned = [(r.d, r.group.invariants)
                  for r in growth_extensions(E, prune=True)]
        assert default == pruned
