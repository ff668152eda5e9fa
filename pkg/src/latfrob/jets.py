"""pi-derivations, Frobenius lifts and jet-space presentations for affine X.

Jet variables ``x^(i)`` are the Witt coordinates of the jet: a point of
J^n(A^1) over C *is* a Witt vector in W_n(C). With that choice

* u^# is the inclusion of orders < n,
* phi^# substitutes the Witt Frobenius polynomials, x^(i) -> F_i(x, ..., x^(i+1)),
  which starts x -> x^q + pi*x' and is the ghost left shift,
* delta(f) = (phi^#(f) - f^q) / pi, computed by one exact division,
* O(J^n X) = R[x^(0..n)] / (f, delta f, ..., delta^n f).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import IntegrityError
from .poly import MultiPoly, Var, parse_poly
from .rings import BaseSetup
from .witt import frobenius_polys, solve_from_ghosts, witt_var


@dataclass(frozen=True)
class AffinePresentation:
    """Spec R[vars]/(relations); an empty relation list is affine space."""

    vars: tuple
    relations: tuple = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "relations", tuple(self.relations))
        allowed = {Var("", b, 0) for b in self.vars}
        for f in self.relations:
            extra = f.variables() - allowed
            if extra:
                raise ValueError(f"relation {f} uses undeclared variables {sorted(map(str, extra))}")

    @classmethod
    def parse(cls, text: str, setup: BaseSetup, name: str = "") -> "AffinePresentation":
        """Mini-grammar ``vars a,b; rel <poly>; rel <poly>``."""
        vars_: list[str] = []
        rels: list[MultiPoly] = []
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            head, _, body = chunk.partition(" ")
            if head == "vars":
                vars_ += [v.strip() for v in body.split(",") if v.strip()]
            elif head == "rel":
                rels.append(parse_poly(body, setup.ring))
            else:
                raise SyntaxError(f"expected 'vars' or 'rel', got {head!r}")
        if not vars_:
            raise SyntaxError("scheme text declares no variables")
        return cls(tuple(vars_), tuple(rels), name or text)

    @property
    def is_affine_space(self) -> bool:
        return not self.relations

    def ambient(self) -> "AffinePresentation":
        return AffinePresentation(self.vars, (), f"A^{len(self.vars)}")


@dataclass(frozen=True)
class Presentation:
    """A finitely presented R-algebra: generators plus relation polynomials."""

    setup: BaseSetup
    gens: tuple
    relations: tuple = ()
    name: str = ""

    def gen(self, v: Var) -> MultiPoly:
        return MultiPoly.var(self.setup.ring, v)


@dataclass(frozen=True)
class JetRing(Presentation):
    base: AffinePresentation | None = None
    n: int = 0


@dataclass
class RingMap:
    """Ring homomorphism recorded by generator images (arrows of schemes reversed)."""

    source: Presentation
    target: Presentation
    images: dict = field(default_factory=dict)

    def apply(self, f: MultiPoly) -> MultiPoly:
        return f.subst(self.images)

    def __call__(self, f):
        return self.apply(f)

    def check_shape(self) -> None:
        missing = [str(g) for g in self.source.gens if g not in self.images]
        if missing:
            raise ValueError(f"ring map has no image for {missing}")
        allowed = set(self.target.gens)
        for g, f in self.images.items():
            extra = f.variables() - allowed
            if extra:
                raise ValueError(f"image of {g} uses {sorted(map(str, extra))} outside the target")


def compose(outer: RingMap, inner: RingMap) -> RingMap:
    """outer o inner (apply inner first)."""
    return RingMap(inner.source, outer.target, {g: outer.apply(f) for g, f in inner.images.items()})


def jet_vars(bases, n: int, side: str = "", start: int = 0) -> tuple:
    return tuple(Var(side, b, i) for b in bases for i in range(start, n + 1))


@lru_cache(maxsize=None)
def _frobenius_rename(setup: BaseSetup, n: int, side: str, base: str, shift: int = 0):
    """F_0..F_{n-1} with Witt variable x_k renamed to the jet variable base^(k+shift)."""
    ren = {witt_var("x", k): Var(side, base, k + shift) for k in range(n + 1)}
    return tuple(f.rename(lambda v: ren.get(v, v)) for f in frobenius_polys(setup, n))


def phi_image(v: Var, setup: BaseSetup) -> MultiPoly:
    """phi^#(x^(i)) = F_i(x^(0), ..., x^(i+1))."""
    return _frobenius_rename(setup, v.order + 1, v.side, v.base)[v.order]


def phi_images(bases, n: int, setup: BaseSetup, side: str = "") -> dict:
    """phi^#: O(J^{n-1}) -> O(J^n) on the generators of orders 0..n-1."""
    if n < 1:
        raise ValueError("phi needs n >= 1")
    out = {}
    for b in bases:
        fs = _frobenius_rename(setup, n, side, b)
        for i in range(n):
            out[Var(side, b, i)] = fs[i]
    return out


def phi_apply(f: MultiPoly, setup: BaseSetup) -> MultiPoly:
    """phi^# on an arbitrary polynomial in jet variables (coefficients fixed)."""
    return f.subst({v: phi_image(v, setup) for v in f.variables()})


def delta_poly(f: MultiPoly, setup: BaseSetup) -> MultiPoly:
    """delta(f) = (phi^#(f) - f^q)/pi; IntegrityError would mean phi^# is wrong."""
    try:
        return (phi_apply(f, setup) - f**setup.q).exact_div_pi()
    except IntegrityError as exc:
        raise IntegrityError(f"delta({f}) is not integral: {exc}", exc.remainder) from exc


def C_pi(a: MultiPoly, b: MultiPoly, setup: BaseSetup) -> MultiPoly:
    """(a^q + b^q - (a+b)^q)/pi, identically 0 in positive characteristic."""
    if setup.char_p:
        return MultiPoly(a.ring)
    q = setup.q
    return (a**q + b**q - (a + b) ** q).exact_div_pi()


def prolong_poly(h: MultiPoly, n: int, setup: BaseSetup) -> list[MultiPoly]:
    """Witt coordinates [c_0..c_n] of h evaluated on jets.

    ghost(c) = (h, phi h, ..., phi^n h); this is J^n of the morphism given by h.
    """
    ghosts = [h]
    for _ in range(n):
        ghosts.append(phi_apply(ghosts[-1], setup))
    return solve_from_ghosts(ghosts, setup)


def jet_relations(X: AffinePresentation, n: int, setup: BaseSetup, side: str = "") -> list[MultiPoly]:
    rels = []
    for f in X.relations:
        g = f if not side else f.rename(lambda v: v.on(side))
        rels.append(g)
        for _ in range(n):
            g = delta_poly(g, setup)
            rels.append(g)
    # group by order: all delta^k before delta^{k+1}
    per = n + 1
    return [rels[j * per + k] for k in range(per) for j in range(len(X.relations))]


def jet_ring(X: AffinePresentation, n: int, setup: BaseSetup, side: str = "") -> JetRing:
    if n < 0:
        raise ValueError("n must be >= 0")
    return JetRing(
        setup=setup,
        gens=jet_vars(X.vars, n, side),
        relations=tuple(jet_relations(X, n, setup, side)),
        name=f"J^{n}({X.name or ','.join(X.vars)})",
        base=X,
        n=n,
    )


def phi_map(X: AffinePresentation, n: int, setup: BaseSetup, side: str = "") -> RingMap:
    return RingMap(jet_ring(X, n - 1, setup, side), jet_ring(X, n, setup, side), phi_images(X.vars, n, setup, side))


def u_map(X: AffinePresentation, n: int, setup: BaseSetup, side: str = "") -> RingMap:
    if n < 1:
        raise ValueError("u needs n >= 1")
    R = setup.ring
    images = {v: MultiPoly.var(R, v) for v in jet_vars(X.vars, n - 1, side)}
    return RingMap(jet_ring(X, n - 1, setup, side), jet_ring(X, n, setup, side), images)


def to_json(J: JetRing) -> dict:
    return {
        "schema_version": 1,
        "kind": "jet-ring",
        "base_vars": list(J.base.vars),
        "n": J.n,
        "vars": [str(v) for v in J.gens],
        "relations": [str(f) for f in J.relations],
    }


# -- prolongation sequences ---------------------------------------------------

PROLONG_KINDS = ("constant", "canonical", "custom")


@dataclass
class ProlongSeq:
    """A prolongation sequence S^* with a morphism a: S^0 -> X.

    ``a`` maps each base variable of X to its image in O(S^0); since every u^#
    here is an inclusion the same polynomial is a^# at every level.
    """

    kind: str
    setup: BaseSetup
    a: dict
    X: AffinePresentation | None = None
    levels: list | None = None  # custom only: Presentations S^0..S^m
    phis: list | None = None  # custom only: phis[n] = images O(S^{n-1}) -> O(S^n)
    label: str = ""

    def level(self, n: int) -> Presentation:
        if self.kind == "constant":
            return Presentation(self.setup, (), (), "R")
        if self.kind == "canonical":
            return jet_ring(self.X, n, self.setup, side="s")
        if n >= len(self.levels):
            raise ValueError(f"custom sequence has no level {n}")
        return self.levels[n]

    def phi_images(self, n: int) -> dict:
        if self.kind == "constant":
            return {}
        if self.kind == "canonical":
            return phi_images(self.X.vars, n, self.setup, side="s")
        return dict(self.phis[n])

    def u_images(self, n: int) -> dict:
        R = self.setup.ring
        return {g: MultiPoly.var(R, g) for g in self.level(n - 1).gens}

    def a_image(self, base: str) -> MultiPoly:
        return self.a[base]

    def describe(self) -> str:
        if self.label:
            return self.label
        if self.kind == "constant":
            return "constant(" + ",".join(str(self.a[b]) for b in sorted(self.a)) + ")"
        return self.kind

    def restricted(self, bases) -> "ProlongSeq":
        """Same tower, a composed with the coordinate projection onto ``bases``."""
        return ProlongSeq(self.kind, self.setup, {b: self.a[b] for b in bases}, self.X,
                          self.levels, self.phis, self.label)


def prolong_seq_make(kind: str, X: AffinePresentation, setup: BaseSetup, point=None,
                     levels=None, phis=None, a=None, check: bool = True, n_max: int = 2) -> ProlongSeq:
    R = setup.ring
    if kind == "constant":
        if point is None:
            raise ValueError("constant sequence needs a point")
        if len(point) != len(X.vars):
            raise ValueError(f"point has {len(point)} coordinates, X has {len(X.vars)}")
        consts = {b: MultiPoly.const(R, c) for b, c in zip(X.vars, point)}
        return ProlongSeq("constant", setup, consts, X)
    if kind == "canonical":
        return ProlongSeq("canonical", setup, {b: MultiPoly.var(R, Var("s", b, 0)) for b in X.vars}, X)
    if kind == "custom":
        S = ProlongSeq("custom", setup, dict(a), X, list(levels), list(phis))
        if check:
            report = prolong_check(S, min(n_max, len(S.levels) - 1))
            if not report["ok"]:
                raise ValueError(f"custom prolongation sequence fails its checks: {report['failures']}")
        return S
    raise ValueError(f"unknown prolongation kind {kind!r}")


def random_poly(setup: BaseSetup, gens, rng, max_deg: int = 3, max_vars: int = 3, max_terms: int = 4,
                coeff_bound: int = 5) -> MultiPoly:
    """Small random polynomial for axiom spot checks (constants allowed)."""
    R = setup.ring
    gens = list(gens)
    chosen = rng.sample(gens, min(len(gens), rng.randint(0, max_vars))) if gens else []
    f = MultiPoly(R)
    for _ in range(rng.randint(1, max_terms)):
        powers = {}
        budget = rng.randint(0, max_deg)
        for v in chosen:
            if budget <= 0:
                break
            e = rng.randint(0, budget)
            if e:
                powers[v] = e
                budget -= e
        if setup.char_p:
            c = R.random(rng, degree=2)
        else:
            c = rng.randint(-coeff_bound, coeff_bound)
        f = f + MultiPoly.monomial(R, powers, R.from_int(c) if isinstance(c, int) else c)
    return f


def delta_axiom_defects(delta, u, f: MultiPoly, g: MultiPoly, setup: BaseSetup):
    """Both axiom residues for a candidate pi-derivation ``delta`` over ``u``."""
    q = setup.q
    pi = setup.ring.pi
    uf, ug = u(f), u(g)
    df, dg = delta(f), delta(g)
    add_defect = delta(f + g) - df - dg - C_pi(uf, ug, setup)
    mul_defect = delta(f * g) - (uf**q * dg + ug**q * df + (df * dg).scale(pi))
    return add_defect, mul_defect


def prolong_check(S: ProlongSeq, n_max: int, trials: int = 20, seed: int = 0, sampler_points: int = 50) -> dict:
    """Per level: phi lift-congruence, phi respects relations, delta axioms."""
    import random

    from .ideals import ideal_contains

    setup = S.setup
    rng = random.Random(seed)
    failures = []
    q = setup.q
    for n in range(1, n_max + 1):
        src, tgt = S.level(n - 1), S.level(n)
        phi = S.phi_images(n)
        uim = S.u_images(n)
        for g in src.gens:
            if g not in phi:
                failures.append({"level": n, "check": "shape", "generator": str(g)})
                continue
            diff = phi[g] - uim[g] ** q
            if not diff.all_coeffs_divisible_by_pi():
                failures.append({"level": n, "check": "lift-congruence", "generator": str(g), "residue": str(diff)})
        if failures:
            continue
        for rel in src.relations:
            img = rel.subst(phi)
            verdict = ideal_contains(tgt, img, rng, points=sampler_points)
            if not verdict.ok:
                failures.append({"level": n, "check": "homomorphism", "relation": str(rel), "detail": verdict.detail})

        def delta(f, phi=phi):
            return (f.subst(phi) - f.subst(uim) ** q).exact_div_pi()

        def u(f, uim=uim):
            return f.subst(uim)

        for _ in range(trials):
            f = random_poly(setup, src.gens, rng)
            g = random_poly(setup, src.gens, rng)
            a_def, m_def = delta_axiom_defects(delta, u, f, g, setup)
            if a_def or m_def:
                failures.append({"level": n, "check": "delta-axioms", "f": str(f), "g": str(g)})
                break
    return {"ok": not failures, "failures": failures, "levels": n_max, "kind": S.kind}
