"""The lateral Frobenius on J^nX x_X S^n.

The fiber product over X is realized by eliminating the order-0 jet
variables: x^(0) := a^#(x) in O(S^n). On the ghost side the fiber product
forgets w_0 (it equals a(s)), and the lateral Frobenius is the left shift

    (w_1, ..., w_n; s)  ->  (w_2, ..., w_n; phi(s)).

The map on coordinates is solved from those ghost identities with the target
order-0 coordinate pinned to phi_S^#(a^#(x)). That construction is the
normative one; the Witt-Frobenius closed formula on (x', ..., x^(n)) is kept
as a comparator and agrees with it exactly when a^(q^2) = a^q.

For affine X with relations the ambient A^N map is used and a certificate
shows that it preserves the relation ideal.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import IntegrityError, VerificationFailure
from .ideals import PointSampler, ReductionBudgetExceeded, TriangularSystem, point_text
from .jets import (
    AffinePresentation,
    Presentation,
    ProlongSeq,
    _frobenius_rename,
    delta_axiom_defects,
    jet_relations,
    jet_vars,
    phi_images,
    random_poly,
)
from .poly import MultiPoly, Var, compile_poly
from .rings import BaseSetup
from .witt import ghost_of, solve_from_ghosts


@dataclass
class FiberRing:
    X: AffinePresentation
    n: int
    S: ProlongSeq
    jet_gens: tuple
    s_gens: tuple
    elim: dict
    relations: tuple

    @property
    def setup(self) -> BaseSetup:
        return self.S.setup

    @property
    def gens(self) -> tuple:
        return self.jet_gens + self.s_gens

    @property
    def presentation(self) -> Presentation:
        return Presentation(self.setup, self.gens, self.relations, f"J^{self.n}X x_X S^{self.n}")

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "kind": "fiber-ring",
            "n": self.n,
            "S": self.S.describe(),
            "vars": [str(v) for v in self.gens],
            "elim": {str(k): str(v) for k, v in self.elim.items()},
            "relations": [str(f) for f in self.relations],
        }


def fiber_ring(X: AffinePresentation, n: int, S: ProlongSeq) -> FiberRing:
    setup = S.setup
    elim = {Var("", b, 0): S.a_image(b) for b in X.vars}
    s_level = S.level(n)
    rels: list[MultiPoly] = []
    for k, f in enumerate(jet_relations(X, n, setup)):
        g = f.subst(elim, keep=True)
        if S.kind == "constant" and f.max_order() <= 0 and g:
            raise ValueError(f"point is not on X: relation {f} evaluates to {g}")
        if g and g not in rels:
            rels.append(g)
    for r in s_level.relations:
        if r not in rels:
            rels.append(r)
    return FiberRing(X, n, S, jet_vars(X.vars, n, start=1), tuple(s_level.gens), elim, tuple(rels))


def display_gen(v: Var, X: AffinePresentation) -> str:
    """Domain generators of a lateral map print as z (or z_x, z_y) so they read apart."""
    if v.side:
        return str(v)
    base = "z" if len(X.vars) == 1 else f"z_{v.base}"
    return str(Var("", base, v.order))


@dataclass
class LateralMap:
    """Ring map O(J^{n-1}X x_X S^{n-1}) -> O(J^nX x_X S^n) by generator images."""

    n: int
    X: AffinePresentation
    S: ProlongSeq
    source: FiberRing  # domain of the ring map (level n-1)
    target: FiberRing  # codomain (level n)
    images: dict
    construction: str = "ghost-shift"
    ghost_certificate: list = field(default_factory=list)
    certificate: dict = field(default_factory=lambda: {"kind": "none", "detail": {}})

    @property
    def setup(self) -> BaseSetup:
        return self.S.setup

    def apply(self, f: MultiPoly) -> MultiPoly:
        return f.subst(self.images)

    def image_texts(self) -> dict:
        return {display_gen(g, self.X): str(self.images[g]) for g in self.source.gens}

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "kind": "lateral-map",
            "X": {"vars": list(self.X.vars), "relations": [str(f) for f in self.X.relations]},
            "n": self.n,
            "S-kind": self.S.describe(),
            "setup": self.setup.to_json(),
            "construction": self.construction,
            "images": self.image_texts(),
            "certificate": self.certificate,
        }


def _s_phi(S: ProlongSeq, n: int) -> dict:
    return S.phi_images(n) if S.kind != "constant" else {}


def lateral_map_affine_space(X: AffinePresentation, n: int, S: ProlongSeq) -> LateralMap:
    """Ghost-shift construction on the ambient affine space of X.

    For each target jet variable z^(i), 1 <= i <= n-1, solves
    w_i(phi_S(a); z', ..., z^(i)) = w_{i+1}(a; x', ..., x^(i+1)) by exact
    division. A failing division raises IntegrityError.
    """
    if n < 1:
        raise ValueError("the lateral Frobenius needs n >= 1")
    setup = S.setup
    R = setup.ring
    phi_s = _s_phi(S, n)
    images: dict = {}
    certificate = []
    for b in X.vars:
        a_b = S.a_image(b)
        z0 = a_b.subst(phi_s) if phi_s else a_b
        src = [a_b] + [MultiPoly.var(R, Var("", b, i)) for i in range(1, n + 1)]
        G = ghost_of(src, setup)
        try:
            coords = solve_from_ghosts([z0] + G[2:], setup)
        except IntegrityError as exc:
            raise IntegrityError(f"lateral Frobenius is not integral for {b} at n={n}: {exc}", exc.remainder) from exc
        for i in range(1, n):
            images[Var("", b, i)] = coords[i]
            certificate.append({"generator": display_gen(Var("", b, i), X), "target_ghost": i,
                                "source_ghost": i + 1, "value": str(G[i + 1])})
    for g in S.level(n - 1).gens:
        images[g] = phi_s[g]
    Xa = X.ambient() if X.relations else X
    return LateralMap(n, X, S, fiber_ring(Xa, n - 1, S), fiber_ring(Xa, n, S), images,
                      "ghost-shift", certificate, {"kind": "vacuous" if not S.level(n).relations else "none",
                                                   "detail": {}})


def witt_frobenius_formula_map(X: AffinePresentation, n: int, S: ProlongSeq) -> LateralMap:
    """Closed formula: z^(i) -> F_{i-1}(x', ..., x^(n)), S-side by phi_S."""
    if n < 1:
        raise ValueError("n must be >= 1")
    setup = S.setup
    phi_s = _s_phi(S, n)
    images = {}
    if n >= 2:
        for b in X.vars:
            fs = _frobenius_rename(setup, n - 1, "", b, 1)
            for i in range(1, n):
                images[Var("", b, i)] = fs[i - 1]
    for g in S.level(n - 1).gens:
        images[g] = phi_s[g]
    Xa = X.ambient() if X.relations else X
    return LateralMap(n, X, S, fiber_ring(Xa, n - 1, S), fiber_ring(Xa, n, S), images, "closed-formula")


def compare_maps(m1: LateralMap, m2: LateralMap) -> dict:
    """{generator: m1(g) - m2(g)} for every generator where they differ."""
    if set(m1.images) != set(m2.images) or m1.n != m2.n:
        raise ValueError("maps have different shapes")
    out = {}
    for g in m1.source.gens:
        d = m1.images[g] - m2.images[g]
        if d:
            out[display_gen(g, m1.X)] = d
    return out


def _check_units(presentation, tri, setup, rng, points):
    """Pivot coefficients must be units at sampled points (they are localized at)."""
    locs = [c for _, _, c, _ in tri.steps if not c.is_constant()]
    if not locs:
        return 0
    sampler = PointSampler(presentation, setup)
    fns = [compile_poly(c, sampler.ring) for c in locs]
    for _ in range(points):
        pt = sampler.sample(rng)
        for c, fn in zip(locs, fns):
            if not sampler.ring.is_unit(fn(pt)):
                raise VerificationFailure(f"pivot coefficient {c} is not a unit",
                                          witness=point_text(pt, sampler.ring))
    return points


EXACT_TERM_BUDGET = 20000


def descend(X: AffinePresentation, n: int, S: ProlongSeq, trials: int = 1000, seed: int = 0,
            strategy: str = "auto", budget: int | None = EXACT_TERM_BUDGET) -> LateralMap:
    """Ambient ghost-shift map restricted to X, with an ideal-membership certificate.

    ``strategy`` is ``auto`` (exact if triangular and within the term budget,
    else randomized), ``exact`` or ``randomized``. A failing certificate
    raises VerificationFailure.
    """
    setup = S.setup
    m = lateral_map_affine_space(X.ambient(), n, S)
    src = fiber_ring(X, n - 1, S)
    tgt = fiber_ring(X, n, S)
    m = LateralMap(n, X, S, src, tgt, m.images, "ghost-shift", m.ghost_certificate)
    rng = random.Random(seed)
    image_rels = [(r, r.subst(m.images)) for r in src.relations]
    if not tgt.relations:
        if any(img for _, img in image_rels):
            raise VerificationFailure("relation images are nonzero in a free ring")
        m.certificate = {"kind": "vacuous", "detail": {"relations": 0}}
        return m
    pres = tgt.presentation
    tri = TriangularSystem.build(tgt.relations) if strategy in ("auto", "exact") else None
    if strategy == "exact" and tri is None:
        raise VerificationFailure("relations are not triangular; no exact certificate")
    abandoned = None
    if tri is not None:
        try:
            rems = [(r, tri.reduce(img, budget if strategy == "auto" else None)) for r, img in image_rels]
        except ReductionBudgetExceeded as exc:
            rems, abandoned = None, str(exc)
        if rems is not None:
            for r, rem in rems:
                if rem:
                    raise VerificationFailure(f"image of relation {r} is not in the ideal",
                                              witness={"relation": str(r), "remainder": str(rem)})
            units = _check_units(pres, tri, setup, rng, min(trials, 50))
            m.certificate = {"kind": "exact", "detail": {
                "pivots": tri.pivots(), "localized_at": tri.localizing(), "relations_checked": len(image_rels),
                "redundant": [str(r) for r in tri.redundant], "unit_checks": units}}
            return m
    sampler = PointSampler(pres, setup)
    R = sampler.ring
    fns = [(r, compile_poly(img, R)) for r, img in image_rels]
    for k in range(trials):
        pt = sampler.sample(rng)
        for r, fn in fns:
            if not R.is_zero(fn(pt)):
                raise VerificationFailure(f"image of relation {r} does not vanish",
                                          witness={"relation": str(r), "point": point_text(pt, R), "trial": k})
    detail = {"points": trials, "failures": 0, "ring": R.descriptor, "seed": seed,
              "relations_checked": len(image_rels)}
    if abandoned:
        detail["exact_attempt"] = f"abandoned: {abandoned}"
    m.certificate = {"kind": "randomized", "detail": detail}
    return m


def _u_images(m: LateralMap) -> dict:
    R = m.setup.ring
    return {g: MultiPoly.var(R, g) for g in m.source.gens}


def verify_lift_of_frobenius(m: LateralMap, points: int = 200, seed: int = 0) -> dict:
    """m(g) - u(g)^q in pi*O + I for every generator g of the domain."""
    q = m.setup.q
    rng = random.Random(seed)
    checked, failures = [], []
    tri = None
    for g in m.source.gens:
        diff = m.images[g] - MultiPoly.var(m.setup.ring, g) ** q
        name = display_gen(g, m.X)
        if diff.all_coeffs_divisible_by_pi():
            checked.append({"generator": name, "method": "symbolic"})
            continue
        if not m.target.relations:
            failures.append({"generator": name, "residue": str(diff)})
            continue
        if tri is None:
            tri = TriangularSystem.build(m.target.relations) or False
        if tri:
            rem = tri.reduce(diff)
            if rem.all_coeffs_divisible_by_pi():
                checked.append({"generator": name, "method": "exact"})
            else:
                failures.append({"generator": name, "residue": str(rem)})
            continue
        sampler = PointSampler(m.target.presentation, m.setup)
        fn = compile_poly(diff, sampler.ring)
        bad = None
        for _ in range(points):
            pt = sampler.sample(rng)
            if not sampler.ring.divisible_by_pi(fn(pt)):
                bad = point_text(pt, sampler.ring)
                break
        if bad:
            failures.append({"generator": name, "witness": bad})
        else:
            checked.append({"generator": name, "method": "randomized", "points": points})
    return {"ok": not failures, "checked": checked, "failures": failures}


def pi_derivation_of(m: LateralMap, trials: int = 50, seed: int = 0) -> dict:
    """delta_f(g) = (m(g) - u(g)^q)/pi per generator, plus axiom spot checks."""
    setup = m.setup
    q = setup.q
    uim = _u_images(m)
    deltas = {}
    for g in m.source.gens:
        num = m.images[g] - uim[g] ** q
        try:
            deltas[display_gen(g, m.X)] = num.exact_div_pi()
        except IntegrityError as exc:
            raise IntegrityError(
                f"delta_f({display_gen(g, m.X)}) is not integral although the lift congruence was "
                f"expected to hold; inconsistency", exc.remainder) from exc

    def delta(f):
        return (m.apply(f) - f**q).exact_div_pi()

    def u(f):
        return f

    rng = random.Random(seed)
    failures = []
    for k in range(trials):
        f = random_poly(setup, m.source.gens, rng)
        g = random_poly(setup, m.source.gens, rng)
        a_def, m_def = delta_axiom_defects(delta, u, f, g, setup)
        if a_def or m_def:
            failures.append({"trial": k, "f": str(f), "g": str(g),
                             "add_defect": str(a_def), "mul_defect": str(m_def)})
    return {"ok": not failures, "deltas": {k: str(v) for k, v in deltas.items()},
            "delta_polys": deltas, "trials": trials, "failures": failures}


# -- the Proposition diagram -----------------------------------------------------

def _phiphi(X: AffinePresentation, S: ProlongSeq, m: int) -> dict:
    """(phi x phi)^#: O(J^{m-1}X (x) S^{m-1}) -> O(J^mX (x) S^m)."""
    out = dict(phi_images(X.vars, m, S.setup))
    out.update(_s_phi(S, m))
    return out


def _ell(X: AffinePresentation, S: ProlongSeq) -> dict:
    """l^#: impose the order-0 elimination x^(0) := a^#(x)."""
    return {Var("", b, 0): S.a_image(b) for b in X.vars}


def prop31_composites(m: LateralMap) -> dict:
    """Both composites O(J^{n-2}X (x) S^{n-2}) -> O(J^nX x_X S^n) on generators."""
    n, X, S = m.n, m.X, m.S
    if n < 2:
        raise ValueError("the diagram needs n >= 2")
    pp_n, pp_n1 = _phiphi(X, S, n), _phiphi(X, S, n - 1)
    ell = _ell(X, S)
    gens = list(jet_vars(X.vars, n - 2)) + list(S.level(n - 2).gens)
    out = {}
    for g in gens:
        h1 = pp_n1[g]
        lhs = h1.subst(pp_n).subst(ell, keep=True)
        rhs = m.apply(h1.subst(ell, keep=True))
        out[g] = (lhs, rhs)
    return out


def verify_prop31(m: LateralMap, mode: str = "symbolic", trials: int = 1000, seed: int = 0) -> dict:
    pairs = prop31_composites(m)
    witnesses = []
    if mode == "symbolic":
        for g, (lhs, rhs) in pairs.items():
            d = lhs - rhs
            if d:
                witnesses.append({"generator": str(g), "difference": str(d)})
        return {"ok": not witnesses, "mode": mode, "generators": len(pairs), "witnesses": witnesses}
    if mode != "pointwise":
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    sampler = PointSampler(m.target.presentation, m.setup)
    R = sampler.ring
    fns = [(g, compile_poly(l, R), compile_poly(r, R)) for g, (l, r) in pairs.items()]
    failures = 0
    for k in range(trials):
        pt = sampler.sample(rng)
        for g, fl, fr in fns:
            if fl(pt) != fr(pt):
                failures += 1
                if len(witnesses) < 5:
                    witnesses.append({"generator": str(g), "trial": k, "point": point_text(pt, R)})
                break
    return {"ok": failures == 0, "mode": mode, "trials": trials, "failures": failures,
            "ring": R.descriptor, "witnesses": witnesses}


def verify_ghost_shift(m: LateralMap) -> dict:
    """Push target ghosts through m and compare with the shifted source ghosts.

    Recomputed from scratch, independent of the solve that built m.
    """
    setup, n, X, S = m.setup, m.n, m.X, m.S
    R = setup.ring
    phi_s = _s_phi(S, n)
    witnesses = []
    for b in X.vars:
        a_b = S.a_image(b)
        tgt = [a_b] + [MultiPoly.var(R, Var("", b, i)) for i in range(1, n)]
        src = [a_b] + [MultiPoly.var(R, Var("", b, i)) for i in range(1, n + 1)]
        Wt = ghost_of(tgt, setup)
        Ws = ghost_of(src, setup)
        for i in range(n):
            pushed = Wt[i].subst({**m.images, **phi_s}) if i else Wt[0].subst(phi_s)
            expected = Ws[i + 1] if i else (a_b.subst(phi_s) if phi_s else a_b)
            if pushed != expected:
                witnesses.append({"var": b, "ghost": i, "difference": str(pushed - expected)})
    for g in S.level(n - 1).gens:
        if m.images[g] != phi_s[g]:
            witnesses.append({"generator": str(g), "detail": "S-side image is not phi_S"})
    return {"ok": not witnesses, "witnesses": witnesses}


def verify_functoriality(setup: BaseSetup, n: int, S: ProlongSeq, X2: AffinePresentation | None = None,
                         keep=("x",)) -> dict:
    """Coordinate projection A^2 -> A^1: f_{A^2} o proj = proj o f_{A^1}."""
    X2 = X2 or AffinePresentation(("x", "y"), (), "A^2")
    X1 = AffinePresentation(tuple(keep), (), "A^1")
    S1 = S.restricted(keep)
    m2 = lateral_map_affine_space(X2, n, S)
    m1 = lateral_map_affine_space(X1, n, S1)
    R = setup.ring
    witnesses = []
    # proj^# is the inclusion of the kept coordinates (S-side shared)
    for g in m1.source.gens:
        lhs = m2.apply(MultiPoly.var(R, g))
        rhs = m1.images[g]
        if lhs != rhs:
            witnesses.append({"generator": str(g), "difference": str(lhs - rhs)})
    return {"ok": not witnesses, "witnesses": witnesses, "generators": len(m1.source.gens)}
