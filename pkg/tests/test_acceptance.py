"""Acceptance gate: one test per criterion, exact tolerances throughout.

Run with -v for one PASSED/FAILED line per criterion; each test also
prints an explicit `criterion N: PASS` line on success.
"""

import json
import random

from residua.cli import corpus_text, run_script
from residua.groebner import Ideal, QuotientContext, ideal_member, ideals_equal, normal_form, groebner_basis
from residua.homalg import (
    buchsbaum_eisenbud_check,
    cohen_macaulay_check,
    detect_periodicity,
    extend_ring,
    free_resolution,
    koszul_complex,
    matrices_equal_canonically,
    proper_intersection_check,
    rank_loci,
    tensor_complexes,
)
from residua.polyring import PolynomialRing
from residua.residues import (
    ChainMap,
    Homotopy,
    annihilator_member,
    build_current_recipe,
    chain_homotopy,
    coleff_herrera,
    maximal_lifting,
    poincare_residue,
    regular_sequence_check,
    structure_form_shape,
)

from conftest import random_poly

ZW = PolynomialRing(("z", "w"))
XY = PolynomialRing(("x", "y"))
XYZ = PolynomialRing(("x", "y", "z"))
ZWT = PolynomialRing(("z", "w", "t"))
X1 = PolynomialRing(("x",))


def P(ring, s):
    return ring.poly(s)


def _ok(n, summary):
    print(f"criterion {n}: PASS — {summary}")


def test_criterion_1_cusp_recipe():
    Z = QuotientContext(ZW, Ideal(ZW, (P(ZW, "z^3 - w^2"),)))
    J = Ideal(ZW, (P(ZW, "z"), P(ZW, "w")))
    lifted = maximal_lifting(J, Z)
    assert ideals_equal(lifted, J)  # the maximal lifting is (z, w) exactly

    recipe = build_current_recipe(Z, J)
    K = koszul_complex((P(ZW, "z"), P(ZW, "w")))
    assert recipe.E.ranks == (1, 2, 1)
    assert matrices_equal_canonically(ZW, recipe.E.diffs[0], K.diffs[0], 1, 2, 1, 2)
    assert matrices_equal_canonically(ZW, recipe.E.diffs[1], K.diffs[1], 2, 1, 2, 1)

    # the displayed lifting (z^2, -w)^T is recovered up to an explicit homotopy
    a = recipe.a
    displayed = ChainMap(
        recipe.F, recipe.E, (a.levels[0], ((P(ZW, "z^2"),), (P(ZW, "-w"),)))
    )
    assert displayed.verify()
    s = chain_homotopy(a, displayed)
    assert isinstance(s, Homotopy)
    assert s.verify(a, displayed)

    assert annihilator_member(recipe, P(ZW, "z"))
    assert annihilator_member(recipe, P(ZW, "w"))
    assert not annihilator_member(recipe, ZW.one())
    _ok(1, "cusp lifting, Koszul resolution, homotopy certificate, oracle")


def test_criterion_2_poincare_residue():
    h = P(ZW, "z^3 - w^2")
    form = poincare_residue(h, "w")
    assert form.denominator == P(ZW, "2*w")
    assert form.numerator == ZW.one()
    assert form.twopi_exponent == 1
    assert form.wedge == ("z",)
    # (dh/2*pi*i) ^ form = dz ^ dw symbolically mod (h)
    assert form.verify()
    dh = h.differentiate("w")
    k = ZW.names.index("w") + 1
    sign = 1 if (k - 1) % 2 == 0 else -1
    assert ideal_member(dh * form.numerator * sign - form.denominator, Ideal(ZW, (h,)))
    _ok(2, "2*pi*i dz/(2w) with the wedge relation mod (z^3 - w^2)")


def test_criterion_3_two_planes_meet_line():
    I = Ideal(XYZ, (P(XYZ, "x*z"), P(XYZ, "y*z")))
    F = free_resolution(I, minimal=True)
    assert F.ranks == (1, 2, 1)
    phi2 = ((P(XYZ, "-y"),), (P(XYZ, "x"),))
    assert matrices_equal_canonically(XYZ, F.diffs[1], phi2, 2, 1, 2, 1)

    diag = rank_loci(F)
    assert diag.codims == (1, 2)
    assert buchsbaum_eisenbud_check(F).passes

    cm = cohen_macaulay_check(I)
    assert not cm.is_cm and cm.resolution_length == 2 and cm.codim == 1

    Z = QuotientContext(XYZ, I)
    decomposition = [
        (Ideal(XYZ, (P(XYZ, "z"),)), 2),
        (Ideal(XYZ, (P(XYZ, "x"), P(XYZ, "y"))), 1),
    ]
    shape = structure_form_shape(Z, decomposition)
    assert not shape.pure
    assert [(c.index, c.level) for c in shape.components] == [(2, 1), (1, 2)]
    _ok(3, "ranks [1,2,1], loci codims (1,2), B-E, non-CM, shape levels F1/F2")


def test_criterion_4_periodic_resolution():
    ctx = QuotientContext(XY, Ideal(XY, (P(XY, "x*y"),)))
    C = free_resolution(Ideal(XY, (P(XY, "x"),)), context=ctx, cap=6)
    assert not C.complete
    x, y = P(XY, "x"), P(XY, "y")
    assert C.ranks == (1,) * 7
    assert tuple(C.diffs) == tuple(((x,),) if k % 2 == 0 else ((y,),) for k in range(6))

    rep = detect_periodicity(C)
    assert rep.detected and rep.offset == 0 and rep.period == 2

    diag = rank_loci(C)
    x_locus = Ideal(XY, (x, P(XY, "x*y")))
    y_locus = Ideal(XY, (y, P(XY, "x*y")))
    for k in range(1, 7):
        expected = x_locus if k % 2 == 1 else y_locus
        assert ideals_equal(diag.loci[k - 1], expected)
    _ok(4, "alternating (x),(y), period (0,2), loci (x)/(y) + I_Z")


def test_criterion_5_tensor_blocks():
    E = extend_ring(koszul_complex((P(ZW, "z"), P(ZW, "w"))), ZWT)
    D = koszul_complex((P(ZWT, "t"),))
    G = tensor_complexes(E, D)
    t = P(ZWT, "t")

    def eta(k):
        rows_hi, rows_lo = E.rank(k - 1), E.rank(k - 2) if k >= 2 else 0
        cols_hi, cols_lo = E.rank(k), E.rank(k - 1)
        sign = t if (k - 1) % 2 == 0 else -t
        top, bottom = [], []
        for i in range(rows_hi):
            row = [E.diff(k)[i][j] if k <= E.length else ZWT.zero() for j in range(cols_hi)]
            row += [sign if i == j else ZWT.zero() for j in range(cols_lo)]
            top.append(tuple(row))
        for i in range(rows_lo):
            row = [ZWT.zero()] * cols_hi
            row += [E.diff(k - 1)[i][j] for j in range(cols_lo)]
            bottom.append(tuple(row))
        return tuple(top + bottom)

    assert G.ranks == (1, 3, 3, 1)
    assert G.diffs[0] == ((P(ZWT, "z"), P(ZWT, "w"), t),)  # eta_1 = [phi_1, t*Id]
    for k in range(1, 4):
        assert G.diffs[k - 1] == eta(k)  # bit-exact block structure
    _ok(5, "eta_k = [[phi_k, (-1)^(k-1) t Id], [0, phi_{k-1}]] bit-exact")


def test_criterion_6_buchsbaum_eisenbud_suite():
    corpus = [
        Ideal(X1, (P(X1, "x^2"),)),
        Ideal(XY, (P(XY, "x"),)),
        Ideal(XY, (P(XY, "x"), P(XY, "y"))),
        Ideal(XY, (P(XY, "x^2"), P(XY, "y^2"))),
        Ideal(XY, (P(XY, "x^2"), P(XY, "x*y"))),
        Ideal(XY, (P(XY, "x^2"), P(XY, "x*y"), P(XY, "y^2"))),
        Ideal(XY, (P(XY, "x*y"),)),
        Ideal(XY, (P(XY, "x + y"), P(XY, "x - y"))),
        Ideal(XY, (P(XY, "x^3 - y^2"),)),
        Ideal(XY, (P(XY, "x^2 - y"), P(XY, "y^3"))),
        Ideal(XYZ, (P(XYZ, "x*z"), P(XYZ, "y*z"))),
        Ideal(XYZ, (P(XYZ, "x"), P(XYZ, "y"), P(XYZ, "z"))),
        Ideal(XYZ, (P(XYZ, "x^2"), P(XYZ, "y"), P(XYZ, "z^3"))),
        Ideal(XYZ, (P(XYZ, "x*y"), P(XYZ, "y*z"))),
        Ideal(XYZ, (P(XYZ, "x^2 + y^2 + z^2"),)),
    ]
    assert len(corpus) == 15
    for I in corpus:
        F = free_resolution(I, minimal=True)
        assert F.complete
        report = buchsbaum_eisenbud_check(F)
        assert report.passes, f"B-E failed for {I.gens}"

    K = koszul_complex((P(XY, "x"), P(XY, "x")))
    report = buchsbaum_eisenbud_check(K)
    assert not report.passes
    level2 = report.levels[1]
    assert level2.level == 2 and not level2.codim_ok
    _ok(6, "15 minimal resolutions pass; Koszul(x,x) fails at k=2")


def test_criterion_7_duality_oracle_equivalence():
    trivial_zw = QuotientContext(ZW, Ideal(ZW, ()))
    trivial_xy = QuotientContext(XY, Ideal(XY, ()))
    trivial_xyz = QuotientContext(XYZ, Ideal(XYZ, ()))
    cases = [
        (trivial_zw, (P(ZW, "z"), P(ZW, "w"))),
        (trivial_xyz, (P(XYZ, "x"), P(XYZ, "y"), P(XYZ, "z"))),
        (trivial_xy, (P(XY, "x^2"), P(XY, "y^3"))),
        (trivial_xy, (P(XY, "x + y"), P(XY, "x - y"))),
        (trivial_xy, (P(XY, "x*y - 1"), P(XY, "x + y"))),
        (QuotientContext(ZW, Ideal(ZW, (P(ZW, "z^3 - w^2"),))), (P(ZW, "z + w"),)),
        (QuotientContext(XY, Ideal(XY, (P(XY, "x*y"),))), (P(XY, "x + y"),)),
        (
            QuotientContext(XYZ, Ideal(XYZ, (P(XYZ, "x^2 + y^2 + z^2"),))),
            (P(XYZ, "x"), P(XYZ, "y")),
        ),
        (QuotientContext(ZW, Ideal(ZW, (P(ZW, "z^2 - w^3"),))), (P(ZW, "w - 1"),)),
        (QuotientContext(XY, Ideal(XY, (P(XY, "x^3 - y^5"),))), (P(XY, "x + y"),)),
    ]
    assert len(cases) == 10
    rng = random.Random(2026)
    for Z, fs in cases:
        ring = Z.ring
        assert regular_sequence_check(fs, context=Z).is_regular
        mu = coleff_herrera(fs, context=Z)
        recipe = build_current_recipe(Z, Ideal(ring, fs))
        lifted_gb = groebner_basis(recipe.lifted)
        queries = 0
        saw_member = saw_nonmember = False
        while queries < 100:
            if queries % 2 == 0:
                g = ring.zero()  # constructed member
                for f in fs:
                    g = g + random_poly(rng, ring, max_deg=2, max_terms=3) * f
                for rel in Z.relations.gens:
                    g = g + random_poly(rng, ring, max_deg=1, max_terms=2) * rel
            else:
                g = random_poly(rng, ring, max_deg=3, max_terms=4)
                if normal_form(g, lifted_gb).is_zero():
                    continue  # constructed non-member only
            left = mu.annihilates(g)
            right = annihilator_member(recipe, g)
            assert left == right, f"oracle disagreement on {g} for {fs}"
            saw_member = saw_member or left
            saw_nonmember = saw_nonmember or not left
            queries += 1
        assert queries >= 100 and saw_member and saw_nonmember
    _ok(7, "10 sequences x 100 queries, coleff_herrera == recipe oracle")


def test_criterion_8_proper_intersection():
    E = free_resolution(Ideal(XYZ, (P(XYZ, "x"), P(XYZ, "y"))))
    K = koszul_complex((P(XYZ, "z"),))
    report = proper_intersection_check(E, K, 2, 1)
    assert report.passes and report.failures == ()

    KX = koszul_complex((P(XYZ, "x"),))
    report = proper_intersection_check(KX, KX, 1, 1)
    assert not report.passes
    k, l, codim, required = report.failures[0]
    assert (k, l) == (1, 1) and codim < required
    _ok(8, "(x,y) vs Koszul(z) passes; Koszul(x) self-pair fails at (1,1)")


def test_criterion_9_determinism_gate():
    text = corpus_text()
    code1, lines1, doc1 = run_script(text)
    code2, lines2, doc2 = run_script(text)
    assert code1 == 0 and code2 == 0
    blob1 = json.dumps(doc1, sort_keys=True, separators=(",", ":")).encode()
    blob2 = json.dumps(doc2, sort_keys=True, separators=(",", ":")).encode()
    assert blob1 == blob2
    assert lines1 == lines2
    _ok(9, "corpus JSON byte-identical across two runs")
