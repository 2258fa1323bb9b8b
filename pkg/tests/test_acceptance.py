"""Acceptance suite: twelve criteria, one pass/fail line each.

Run with ``pytest -s tests/test_acceptance.py`` to see the verdict
lines.  Every criterion recomputes its answer here rather than trusting
a cached report, and the bounded computations carry their bounds.
"""

import pytest

from tube_ncr.arcmodel import annulus, disc, generate_presentation
from tube_ncr.cohom import (
    FreeComplex,
    char2_pagoda_check,
    h0_presentation,
    localization_consistency,
    pagoda_quiver,
    sphere_complex,
    truncated_cohomology,
)
from tube_ncr.exactalg import Field, PolyRing
from tube_ncr.quivalg import (
    contraction_quiver,
    contraction_vertex,
    graded_basis,
    lazy,
    relabel_presentation,
    same_presentation,
    tube_algebra,
    tube_rank_closed_form,
    tube_vertex,
    winding_element,
)
from tube_ncr.toric import base_change_end, end_algebra, wedge_nonvanishing
from tube_ncr.twcat import (
    AInfTable,
    TwMorphism,
    ainf_check,
    halftwist_complexes,
    halftwist_tables,
    mu_tw,
    verify_halftwist,
)

QQ = Field.rationals()


def check(num: int, name: str, ok: bool) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num:02d}: {name}")
    assert ok, f"criterion {num:02d} failed: {name}"


def t_ring(n: int, field=QQ) -> PolyRing:
    return PolyRing(field, tuple(f"t{i}" for i in range(n + 1)))


def test_criterion_01_tube_freeness():
    ok = True
    for n in range(6):
        pres = tube_algebra(n, t_ring(n))
        bound = 2 * (n + 1) + 3
        for i in range(n + 1):
            for j in range(n + 1):
                words = graded_basis(pres, tube_vertex(i), tube_vertex(j), 0, bound)
                ok = ok and len(words) == tube_rank_closed_form(n, i, j, bound)
    check(1, "tube algebra bases match the winding closed form, n <= 5", ok)


def test_criterion_02_arc_round_trip():
    ok = True
    for n in range(6):
        generated = generate_presentation(annulus(n)).presentation
        ok = ok and same_presentation(generated, tube_algebra(n, t_ring(n)))
    for n in range(1, 6):
        ring = t_ring(n)
        generated = relabel_presentation(
            generate_presentation(disc(n)).presentation,
            {f"L{i}": contraction_vertex(i) for i in range(1, n + 1)},
        )
        expected = contraction_quiver(n, ring, list(ring.gens()))
        ok = ok and same_presentation(generated, expected)
    check(2, "arc systems regenerate both algebras exactly, n <= 5", ok)


def test_criterion_03_center_relation():
    ok = True
    for n in range(6):
        ring = t_ring(n)
        pres = tube_algebra(n, ring)
        u = winding_element(pres, n, "a")
        v = winding_element(pres, n, "b")
        product = ring.one()
        for g in ring.gens():
            product = product * g
        expected = pres.one().scale(product)
        ok = ok and pres.multiply(u, v) == expected
        ok = ok and pres.multiply(v, u) == expected
    check(3, "windings multiply to the full coefficient product, n <= 5", ok)


def test_criterion_04_halftwist_and_negative_controls():
    ok = all(verify_halftwist(n).ok for n in range(2, 6))

    # dropping a ternary product entry must surface as an arity-4 violation
    table = halftwist_tables(2, "left")
    mu3 = dict(table.mu3)
    del mu3[("alpha_prime", "p", "b0")]
    broken = AInfTable(
        table.ring,
        table.objects,
        list(table.morphisms.values()),
        table.identities,
        dict(table.mu1),
        dict(table.mu2),
        mu3,
        total=True,
    )
    ok = ok and not ainf_check(broken, 4).ok

    # corrupting one comparison morphism must break the round trip
    w_cx, two_term, q1, _ = halftwist_complexes(table)
    bad_q2 = TwMorphism(w_cx, two_term, 0, {(0, 0): {"alpha_prime": table.ring.one()}})
    ok = ok and mu_tw(2, [bad_q2, q1]) != two_term.identity()

    check(4, "half twist inverts the two-term complex, n in 2..5", ok)


def test_criterion_05_end_algebra_comparison():
    ok = True
    for n in range(1, 5):
        report = end_algebra(n, 2 * (n + 1) + 4)
        ok = ok and report.ok and not report.mismatches
    check(5, "path algebra matches the graded ring to the stated bound, n <= 4", ok)


def test_criterion_06_wedge_nonvanishing():
    ok = True
    for n in range(2, 7):
        report = wedge_nonvanishing(n)
        ok = ok and report["holds"] and not report["counterexamples"]
    check(6, "wedge sections only vanish together on unstable points, n <= 6", ok)


def test_criterion_07_base_change():
    tring = PolyRing(QQ, ("t",))
    t = tring.gen("t")
    same = base_change_end(2, (t, t, t))
    xyring = PolyRing(QQ, ("x", "y"))
    split = base_change_end(1, (xyring.gen("x"), xyring.gen("y")))
    ok = same.ok and split.ok
    check(7, "structure constants commute with both substitutions", ok)


def test_criterion_08_sphere_complex():
    expected = {-2: 0, -1: 0, 0: 1, 1: 0, 2: 0, 3: 1}
    ok = True
    for field in (QQ, Field.prime(5)):
        report = sphere_complex(field).cohomology()
        ok = ok and report.dims == expected and report.status == "stable"

    # the constructor must enforce d^2 = 0
    ring = PolyRing(QQ, ("t0", "t1"))
    t0, t1 = ring.gen("t0"), ring.gen("t1")
    with pytest.raises(ValueError):
        FreeComplex(
            ring,
            {0: ["y"], 1: ["x", "z"], 2: ["e"]},
            {"y": {"z": t1, "x": t0}, "x": {"e": t1}, "z": {"e": t0}},
        )
    check(8, "sphere complex cohomology sits in degrees 0 and 3 only", ok)


def test_criterion_09_conifold_ranks():
    ring = PolyRing(QQ, ("x", "y"))
    pres = contraction_quiver(1, ring, (ring.gen("x"), ring.gen("y")))
    v = contraction_vertex(1)
    ok = True
    expected = [1, 0, 1, 0, 1]
    for m in range(5):
        report = truncated_cohomology(pres, v, v, m, length_bound=8, poly_bound=8)
        ok = ok and report.rank == expected[m] and report.status == "stable"
        if m == 2:
            ok = ok and report.generators == ["alpha*beta + beta*alpha"]
        if m == 4:
            ok = ok and report.generators == [
                "alpha*beta*alpha*beta + beta*alpha*beta*alpha"
            ]
    check(9, "conifold ranks are 1,0,1,0,1 at (8,8), stable at (10,10)", ok)


def test_criterion_10_pagoda():
    ok = True
    for n in (2, 3, 4):
        report = truncated_cohomology(
            pagoda_quiver(n), contraction_vertex(1), contraction_vertex(1), 0,
            length_bound=3, poly_bound=2 * n + 2, with_generators=False,
        )
        ok = ok and report.rank == n and report.status == "stable"
        ok = ok and char2_pagoda_check(n).distinguishes
    check(10, "pagoda H^0 has dimension n; x^n survives over F_2", ok)


def test_criterion_11_contraction_relations():
    ring = PolyRing(QQ, ("x", "y"))
    x, y = ring.gen("x"), ring.gen("y")
    pres = contraction_quiver(2, ring, (x, x ** 2 + y ** 3, y))
    h0 = h0_presentation(pres, length_bound=6)
    bound = 10
    v1, v2 = contraction_vertex(1), contraction_vertex(2)
    ell = pres.element([(x, lazy(v2))])
    em = pres.element([(y, lazy(v1))])
    a = pres.arrow_element("b1")
    c = pres.arrow_element("a1")
    ac = pres.multiply(c, a)  # loop at the higher vertex
    ca = pres.multiply(a, c)  # loop at the lower vertex

    def member(lhs, rhs):
        return h0.relation_holds(lhs, rhs, bound).status == "member"

    ok = member(pres.multiply(ell, ell), ac)
    ok = ok and member(pres.multiply(em, pres.multiply(em, em)), ca)
    ok = ok and member(pres.multiply(a, ell), pres.multiply(em, a))
    ok = ok and member(pres.multiply(ell, c), pres.multiply(c, em))

    # replayed chain: m^3 = y^3 e_1 = (y^3 + x^2) e_1 = ca
    cube = pres.multiply(em, pres.multiply(em, em))
    y_cubed = pres.element([(y ** 3, lazy(v1))])
    middle = pres.element([(y ** 3 + x ** 2, lazy(v1))])
    ok = ok and member(cube, y_cubed)
    ok = ok and member(y_cubed, middle)
    ok = ok and member(middle, ca)
    check(11, "ideal membership certifies the contraction relations at bound 10", ok)


def test_criterion_12_localization_consistency():
    ring = PolyRing(QQ, ("x", "y"))
    report = localization_consistency((ring.gen("x"), ring.gen("y")))
    ok = report.ok and all(
        row["contraction_status"] == "stable"
        and row["localized_status"] == "stable"
        and row["contraction_rank"] == row["localized_rank"]
        for row in report.rows
    )
    ok = ok and len(report.rows) == 5
    ok = ok and "contraction" in report.bounds and "localized" in report.bounds
    check(12, "contraction and localised tube ranks agree for m <= 4", ok)
