"""Test gallery: G_a, G_m and a Weierstrass chart, plus the kernel towers N^n.

N^n is the fiber of J^nE -> E over the identity section, realized as the
fiber ring at S = constant(e). Points of N^n are dicts on the jet variables of
orders 1..n. The group law on J^nE is the Witt-coordinate prolongation of the
law polynomials (jet points are E-points with Witt vector coordinates).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import lru_cache

from .errors import VerificationFailure
from .ideals import PointSampler, TriangularSystem, point_text
from .jets import AffinePresentation, jet_ring, prolong_poly, prolong_seq_make
from .lateral import (
    FiberRing,
    compare_maps,
    descend,
    fiber_ring,
    pi_derivation_of,
    verify_lift_of_frobenius,
    witt_frobenius_formula_map,
)
from .poly import MultiPoly, Var, compile_poly, parse_poly
from .rings import BaseSetup

GALLERY = ("ga", "gm", "weierstrass(a,b)")


@dataclass(frozen=True)
class GroupSchemePreset:
    name: str
    vars: tuple
    relation_texts: tuple
    law: tuple | None  # (composition texts per base, inverse texts per base), or None
    identity: tuple
    params: tuple = ()

    def presentation(self, setup: BaseSetup) -> AffinePresentation:
        return _presentation(self, setup)

    @property
    def has_law(self) -> bool:
        return self.law is not None

    def law_polys(self, setup: BaseSetup) -> dict:
        """Composition on operands a.*, b.*: base -> polynomial."""
        if not self.has_law:
            raise ValueError(f"{self.name} carries no group law in this chart")
        R = setup.ring
        return {b: parse_poly(t, R) for b, t in zip(self.vars, self.law[0])}

    def inverse_polys(self, setup: BaseSetup) -> dict:
        R = setup.ring
        return {b: parse_poly(t, R) for b, t in zip(self.vars, self.law[1])}

    def identity_point(self, setup: BaseSetup) -> dict:
        R = setup.ring
        return {b: R.from_int(c) for b, c in zip(self.vars, self.identity)}

    def check_discriminant(self, setup: BaseSetup) -> None:
        """Weierstrass only: 4a^3 + 27b^2 must be a unit in the point rings."""
        if not self.name.startswith("weierstrass"):
            return
        a, b = self.params
        disc = 4 * a**3 + 27 * b**2
        if disc % setup.p == 0:
            raise ValueError(f"4a^3+27b^2 = {disc} is not a unit at p = {setup.p}")


_WEIER = re.compile(r"^weierstrass(?:\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\))?$")


def preset(name: str) -> GroupSchemePreset:
    key = name.strip().lower().replace(" ", "")
    if key == "ga":
        return GroupSchemePreset("ga", ("x",), (), (("a.x + b.x",), ("-a.x",)), (0,))
    if key == "gm":
        return GroupSchemePreset("gm", ("x", "y"), ("x*y - 1",), (("a.x*b.x", "a.y*b.y"), ("a.y", "a.x")), (1, 1))
    m = _WEIER.match(key)
    if m:
        a, b = (int(m.group(1)), int(m.group(2))) if m.group(1) is not None else (1, 1)
        rel = f"y^2 - x^3 - ({a})*x - ({b})"
        # identity slot holds an affine point, used as the default base section
        return GroupSchemePreset(f"weierstrass({a},{b})", ("x", "y"), (rel,), None, _weierstrass_point(a, b), (a, b))
    raise ValueError(f"unknown gallery scheme {name!r}; expected one of {', '.join(GALLERY)}")


@lru_cache(maxsize=None)
def _presentation(E: GroupSchemePreset, setup: BaseSetup) -> AffinePresentation:
    rels = tuple(parse_poly(t, setup.ring) for t in E.relation_texts)
    return AffinePresentation(E.vars, rels, E.name)


def _weierstrass_point(a: int, b: int) -> tuple:
    """Small integral point, searched in a fixed window (x first, then y)."""
    for x in range(0, 50):
        for sx in (x, -x) if x else (0,):
            rhs = sx**3 + a * sx + b
            if rhs >= 0:
                y = int(round(rhs**0.5))
                for yy in (y - 1, y, y + 1):
                    if yy >= 0 and yy * yy == rhs:
                        return (sx, yy)
    return ()


def check_group_axioms(E: GroupSchemePreset, setup: BaseSetup) -> dict:
    """Associativity and unit as polynomial identities; inverse modulo the relations."""
    R = setup.ring
    law = E.law_polys(setup)
    bases = E.vars
    P = {Var("a", b, 0): MultiPoly.var(R, Var("p", b, 0)) for b in bases}

    def op(lhs: dict, rhs: dict) -> dict:
        img = {Var("a", b, 0): lhs[b] for b in bases}
        img.update({Var("b", b, 0): rhs[b] for b in bases})
        return {b: law[b].subst(img) for b in bases}

    def gens(side):
        return {b: MultiPoly.var(R, Var(side, b, 0)) for b in bases}

    x, y, z = gens("p"), gens("q"), gens("r")
    failures = []
    if op(op(x, y), z) != op(x, op(y, z)):
        failures.append("associativity")
    e = {b: MultiPoly.const(R, c) for b, c in E.identity_point(setup).items()}
    if op(x, e) != x or op(e, x) != x:
        failures.append("unit")
    inv = {b: f.subst(P) for b, f in E.inverse_polys(setup).items()}
    rels = [parse_poly(r, R).rename(lambda v: v.on("p")) for r in E.relation_texts]
    tri = TriangularSystem.build(rels) if rels else None
    for b, f in op(x, inv).items():
        d = f - e[b]
        if d and not (tri and not tri.reduce(d)):
            failures.append(f"inverse({b})")
    return {"ok": not failures, "failures": failures}


# -- kernels ---------------------------------------------------------------------

@dataclass
class KernelRing:
    E: GroupSchemePreset
    n: int
    ring: FiberRing

    @property
    def gens(self):
        return self.ring.gens


def identity_section(E: GroupSchemePreset, setup: BaseSetup, point=None):
    return prolong_seq_make("constant", E.presentation(setup), setup,
                            point=E.identity if point is None else point)


def kernel_ring(E: GroupSchemePreset, n: int, setup: BaseSetup) -> KernelRing:
    return KernelRing(E, n, fiber_ring(E.presentation(setup), n, identity_section(E, setup)))


@lru_cache(maxsize=None)
def _kernel_law(E: GroupSchemePreset, n: int, setup: BaseSetup) -> dict:
    """Prolonged law on N^n: Var(b, i) -> polynomial in a.*^(j), b.*^(j), 1 <= j <= n."""
    R = setup.ring
    law = E.law_polys(setup)
    elim = {}
    for b, c in zip(E.vars, E.identity):
        elim[Var("a", b, 0)] = MultiPoly.const(R, R.from_int(c))
        elim[Var("b", b, 0)] = MultiPoly.const(R, R.from_int(c))
    out = {}
    for b, h in law.items():
        coords = prolong_poly(h, n, setup)
        c0 = coords[0].subst(elim, keep=True)
        if c0 != MultiPoly.const(R, R.from_int(E.identity[E.vars.index(b)])):
            raise VerificationFailure(f"law does not fix the identity in coordinate {b}")
        for i in range(1, n + 1):
            out[Var("", b, i)] = coords[i].subst(elim, keep=True)
    return out


class KernelLaw:
    """Evaluator for the group law on N^n-points over a point ring."""

    def __init__(self, E: GroupSchemePreset, n: int, setup: BaseSetup, ring=None):
        self.ring = ring or setup.point_ring
        self.n = n
        self.vars = [Var("", b, i) for b in E.vars for i in range(1, n + 1)]
        polys = _kernel_law(E, n, setup)
        self.fns = {v: compile_poly(polys[v], self.ring) for v in self.vars}

    def __call__(self, P: dict, Q: dict) -> dict:
        pt = {v.on("a"): P[v] for v in self.vars}
        pt.update({v.on("b"): Q[v] for v in self.vars})
        return {v: fn(pt) for v, fn in self.fns.items()}

    def identity(self) -> dict:
        return {v: self.ring.zero for v in self.vars}


def _apply_map(fns: dict, P: dict) -> dict:
    return {v: fn(P) for v, fn in fns.items()}


def verify_kernel_prolongation(E: GroupSchemePreset, n_max: int, setup: BaseSetup, trials: int = 50,
                               seed: int = 0, section=None) -> dict:
    """Checks (i) descent, (ii) lift congruence, (iii) delta_f axioms, (iv) tower compatibility.

    ``section`` overrides the identity point (used for negative controls).
    """
    if not E.has_law and section is None:
        return {"ok": True, "skipped": f"{E.name}: no group law", "levels": []}
    S = identity_section(E, setup, section)
    X = E.presentation(setup)
    levels, maps = [], {}
    ok = True
    for n in range(1, n_max + 1):
        rec = {"n": n}
        try:
            m = descend(X, n, S, trials=trials, seed=seed)
            rec["descent"] = m.certificate["kind"]
        except VerificationFailure as exc:
            rec["descent"] = f"failed: {exc}"
            levels.append(rec)
            ok = False
            continue
        maps[n] = m
        lift = verify_lift_of_frobenius(m, points=trials, seed=seed)
        rec["lift"] = lift["ok"]
        der = pi_derivation_of(m, trials=trials, seed=seed)
        rec["delta"] = der["ok"]
        rec["delta_images"] = der["deltas"]
        tower = []
        if n >= 2 and n - 1 in maps:
            prev = maps[n - 1]
            for g in prev.source.gens:
                if prev.images[g] != m.images[g]:
                    tower.append(str(g))
        rec["tower"] = not tower
        if section is None:
            closed = witt_frobenius_formula_map(X, n, S)
            rec["closed_formula"] = not compare_maps(m, closed)
        rec["images"] = m.image_texts()
        rec_ok = lift["ok"] and der["ok"] and not tower and rec.get("closed_formula", True)
        ok = ok and rec_ok
        levels.append(rec)
    return {"ok": ok, "levels": levels}


def sample_kernel_point(K: KernelRing, sampler: PointSampler, rng) -> dict:
    pt = sampler.sample(rng)
    return {v: pt[v] for v in K.gens}


def group_compat_check(E: GroupSchemePreset, n: int, setup: BaseSetup, trials: int = 1000, seed: int = 0,
                       axiom_trials: int = 300, ring=None) -> dict:
    """f(P * Q) = f(P) * f(Q) on sampled N^n-points, plus associativity and unit of *."""
    if not E.has_law:
        return {"ok": True, "skipped": f"{E.name}: no group law"}
    if n < 2:
        raise ValueError("group compatibility needs n >= 2")
    rng = random.Random(seed)
    m = descend(E.presentation(setup), n, identity_section(E, setup), trials=min(trials, 100), seed=seed)
    K = KernelRing(E, n, m.target)
    sampler = PointSampler(m.target.presentation, setup, ring=ring)
    A = sampler.ring
    law_n = KernelLaw(E, n, setup, A)
    law_m = KernelLaw(E, n - 1, setup, A)
    f_fns = {g: compile_poly(m.images[g], A) for g in m.source.gens}
    witnesses = []
    for k in range(trials):
        P = sample_kernel_point(K, sampler, rng)
        Q = sample_kernel_point(K, sampler, rng)
        lhs = _apply_map(f_fns, law_n(P, Q))
        rhs = law_m(_apply_map(f_fns, P), _apply_map(f_fns, Q))
        if lhs != rhs:
            witnesses.append({"check": "compat", "trial": k, "P": point_text(P, A), "Q": point_text(Q, A)})
            break
    e = law_n.identity()
    for k in range(axiom_trials):
        P, Q, T = (sample_kernel_point(K, sampler, rng) for _ in range(3))
        if law_n(law_n(P, Q), T) != law_n(P, law_n(Q, T)):
            witnesses.append({"check": "associativity", "trial": k, "P": point_text(P, A)})
            break
        if law_n(P, e) != P or law_n(e, P) != P:
            witnesses.append({"check": "unit", "trial": k, "P": point_text(P, A)})
            break
    return {"ok": not witnesses, "ring": A.descriptor, "trials": trials, "axiom_trials": axiom_trials,
            "witnesses": witnesses}


def ses_check(E: GroupSchemePreset, n: int, setup: BaseSetup, trials: int = 500, seed: int = 0) -> dict:
    """Point-level exactness of 0 -> N^n -> J^nE -> E -> 0 over the point ring."""
    if not E.has_law:
        return {"ok": True, "skipped": f"{E.name}: no group law, exact sequence not checked"}
    rng = random.Random(seed)
    X = E.presentation(setup)
    J = jet_ring(X, n, setup)
    base = PointSampler(jet_ring(X, 0, setup), setup)
    A = base.ring
    order0 = [Var("", b, 0) for b in X.vars]
    witnesses = []
    lifted = 0
    for k in range(trials):
        P = base.sample(rng)
        try:
            lift = PointSampler(J, setup, fixed={v: P[v] for v in order0}).sample(rng)
        except VerificationFailure:
            witnesses.append({"check": "surjective", "trial": k, "point": point_text(P, A)})
            continue
        if any(lift[v] != P[v] for v in order0):
            witnesses.append({"check": "projection", "trial": k})
        lifted += 1
    # fiber over e: jet points with order 0 pinned to e are exactly the kernel points
    K = kernel_ring(E, n, setup)
    e = {v: A.from_int(c) for v, c in zip(order0, E.identity)}
    fiber = PointSampler(J, setup, fixed=e)
    kernel = PointSampler(K.ring.presentation, setup)
    k_checks = [compile_poly(r, A) for r in K.ring.relations]
    j_checks = [compile_poly(r, A) for r in J.relations]
    for k in range(trials):
        pt = fiber.sample(rng)
        if not all(A.is_zero(c(pt)) for c in k_checks):
            witnesses.append({"check": "fiber-in-kernel", "trial": k, "point": point_text(pt, A)})
            break
        kp = kernel.sample(rng)
        kp.update(e)
        if not all(A.is_zero(c(kp)) for c in j_checks):
            witnesses.append({"check": "kernel-in-fiber", "trial": k, "point": point_text(kp, A)})
            break
    return {"ok": not witnesses, "ring": A.descriptor, "trials": trials, "lifted": lifted,
            "witnesses": witnesses}
