import random

import pytest

import oracles
from latfrob.gallery import (
    KernelLaw,
    check_group_axioms,
    group_compat_check,
    kernel_ring,
    preset,
    ses_check,
    verify_kernel_prolongation,
)
from latfrob.poly import Var, parse_poly
from latfrob.rings import BaseSetup


def test_presets(zz2):
    ga, gm = preset("ga"), preset("gm")
    assert ga.presentation(zz2).vars == ("x",) and ga.presentation(zz2).relations == () and ga.identity == (0,)
    assert [str(f) for f in gm.presentation(zz2).relations] == ["x*y - 1"] and gm.identity == (1, 1)
    w = preset("weierstrass(1,1)")
    s5 = BaseSetup("char-zero", 5)
    assert w.presentation(s5).relations[0] == parse_poly("y^2 - x^3 - x - 1", s5.ring)
    w.check_discriminant(s5)  # 4 + 27 = 31
    assert not w.has_law
    with pytest.raises(ValueError):
        preset("ge")


def test_discriminant_checked_lazily():
    w = preset("weierstrass(0,0)")
    with pytest.raises(ValueError):
        w.check_discriminant(BaseSetup("char-zero", 5))


def test_weierstrass_default_point_is_on_curve():
    for a, b in [(1, 1), (0, 1), (-1, 1), (2, 3)]:
        x, y = preset(f"weierstrass({a},{b})").identity
        assert y * y == x**3 + a * x + b


@pytest.mark.parametrize("name", ["ga", "gm"])
def test_group_axioms(zz2, name):
    assert check_group_axioms(preset(name), zz2)["ok"]


def test_kernel_rings(zz2):
    K = kernel_ring(preset("ga"), 2, zz2)
    assert [str(v) for v in K.gens] == ["x'", "x''"] and K.ring.relations == ()
    K = kernel_ring(preset("gm"), 1, zz2)
    assert [str(v) for v in K.gens] == ["x'", "y'"]
    assert [str(f) for f in K.ring.relations] == [str(parse_poly("x' + y' + 2*x'*y'", zz2.ring))]
    assert kernel_ring(preset("ga"), 0, zz2).gens == ()


def test_kernel_identity_point_satisfies_relations(zz3):
    K = kernel_ring(preset("gm"), 3, zz3)
    zero = {v: 0 for v in K.gens}
    assert all(f.eval(zero) == 0 for f in K.ring.relations)


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("name", ["ga", "gm"])
def test_kernel_prolongation(p, name):
    r = verify_kernel_prolongation(preset(name), 3, BaseSetup("char-zero", p), trials=20)
    assert r["ok"]
    assert all(lv["tower"] and lv["lift"] and lv["delta"] and lv["closed_formula"] for lv in r["levels"])


def test_kernel_ga_map_is_witt_frobenius(zz2):
    r = verify_kernel_prolongation(preset("ga"), 2, zz2)
    assert r["levels"][1]["images"] == {"z'": "x'^2 + 2*x''"}


def test_negative_control_section_three(zz2):
    r = verify_kernel_prolongation(preset("ga"), 2, zz2, section=(3,))
    assert r["ok"]
    assert r["levels"][1]["delta_images"] == {"z'": "x'' + 18"}


def test_kernel_law_matches_witt_addition(zz2):
    """On G_a kernel points the prolonged law is Witt addition with zero first coordinate."""
    A = zz2.point_ring
    law = KernelLaw(preset("ga"), 3, zz2, A)
    rng = random.Random(0)
    for _ in range(50):
        u = [rng.randint(-9, 9) for _ in range(3)]
        v = [rng.randint(-9, 9) for _ in range(3)]
        P = {Var("", "x", i + 1): c % 64 for i, c in enumerate(u)}
        Q = {Var("", "x", i + 1): c % 64 for i, c in enumerate(v)}
        got = [law(P, Q)[Var("", "x", i)] for i in range(1, 4)]
        assert got == [c % 64 for c in oracles.witt_add([0] + u, [0] + v, 2)[1:]]


@pytest.mark.parametrize("mode", ["char-zero", "char-p"])
@pytest.mark.parametrize("name", ["ga", "gm"])
def test_group_compatibility(mode, name):
    r = group_compat_check(preset(name), 2, BaseSetup(mode, 2), trials=150, axiom_trials=100)
    assert r["ok"], r["witnesses"]


def test_group_compat_needs_n_two(zz2):
    with pytest.raises(ValueError):
        group_compat_check(preset("gm"), 1, zz2)


@pytest.mark.parametrize("name", ["ga", "gm"])
def test_exact_sequence(zz2, name):
    r = ses_check(preset(name), 2, zz2, trials=100)
    assert r["ok"] and r["lifted"] == 100


def test_weierstrass_skipped(zz2):
    w = preset("weierstrass(1,1)")
    assert "skipped" in ses_check(w, 2, zz2)
    assert "skipped" in group_compat_check(w, 2, zz2)
