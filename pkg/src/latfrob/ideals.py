"""Ideal-membership certificates without Groebner bases.

Two strategies, tried in order:

* exact: the relations are triangular (each one has a pivot variable of
  degree 1 that no other remaining relation mentions); membership is then
  decided by pseudo-division, valid in the localization at the recorded
  pivot coefficients.
* randomized: sample points of the presentation over the truncated point
  rings (free variables at random, pivots by Hensel lifting) and evaluate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import VerificationFailure
from .poly import MultiPoly, Var, compile_poly


def _pivot_order(relations, prefer_linear: bool, fixed=frozenset()):
    """Greedy removal order [(relation, pivot)] plus relations left without a pivot."""
    remaining = [r for r in relations if r]
    order = []
    while remaining:
        best = None
        for idx, r in enumerate(remaining):
            others = set()
            for j, s in enumerate(remaining):
                if j != idx:
                    others |= s.variables()
            for v in r.variables() - others - fixed:
                deg = r.degree(v)
                if prefer_linear and deg != 1:
                    continue
                key = (deg == 1, r.max_order(), v.order, v.side == "s", v.base, -idx)
                if best is None or key > best[0]:
                    best = (key, idx, v)
        if best is None:
            break
        _, idx, v = best
        order.append((remaining.pop(idx), v))
    return order, remaining


class ReductionBudgetExceeded(Exception):
    """Pseudo-division grew past its term budget; callers fall back to sampling."""


def _is_unit_const(c: MultiPoly) -> bool:
    v = c.constant_term()
    if isinstance(v, int):
        return v in (1, -1)
    return isinstance(v, tuple) and len(v) == 1


@dataclass
class TriangularSystem:
    steps: list  # (relation, pivot, coefficient c, rest d) with relation = c*pivot + d
    redundant: list = field(default_factory=list)

    @classmethod
    def build(cls, relations) -> "TriangularSystem | None":
        active = [r for r in relations if r]
        deferred = []
        while True:
            order, leftover = _pivot_order(active, prefer_linear=True)
            if not leftover:
                break
            # set aside the largest stuck relation; it must turn out redundant
            worst = max(leftover, key=lambda r: (r.degree(), len(r)))
            active.remove(worst)
            deferred.append(worst)
        steps = []
        for r, v in order:
            parts = r.coefficients_in(v)
            c = parts[1]
            if c.is_constant() and not _is_unit_const(c):
                return None  # dividing by a non-unit constant would invert pi
            steps.append((r, v, c, parts.get(0, MultiPoly(r.ring))))
        system = cls(steps)
        for r in deferred:
            if system.reduce(r):
                return None
            system.redundant.append(r)
        return system

    def reduce(self, g: MultiPoly, budget: int | None = None) -> MultiPoly:
        """Pseudo-remainder of g; zero iff g lies in the localized ideal.

        With ``budget`` set, intermediate results larger than that many terms
        raise ReductionBudgetExceeded.
        """
        for _, v, c, d in self.steps:
            if not g:
                return g
            parts = g.coefficients_in(v)
            top = max(parts)
            if top == 0:
                continue
            # c^top * g  ==  sum_e g_e * (-d)^e * c^(top-e)   mod (c*v + d)
            acc = MultiPoly(g.ring)
            negd = -d
            for e, ge in parts.items():
                acc = acc + ge * negd**e * c ** (top - e)
                if budget is not None and len(acc) > budget:
                    raise ReductionBudgetExceeded(f"pseudo-remainder exceeded {budget} terms at pivot {v}")
            g = acc
        return g

    def localizing(self) -> list[str]:
        return [str(c) for _, _, c, _ in self.steps if not c.is_constant()]

    def pivots(self) -> list[str]:
        return [str(v) for _, v, _, _ in self.steps]


class PointSampler:
    """Random points of a presentation over the setup's point rings."""

    def __init__(self, presentation, setup, ring=None, fixed=None, attempts: int = 200):
        self.setup = setup
        self.ring = ring or setup.point_ring
        self.gens = list(presentation.gens)
        self.fixed = dict(fixed or {})
        fixed_vars = frozenset(self.fixed)
        order, leftover = _pivot_order(list(presentation.relations), prefer_linear=False, fixed=fixed_vars)
        self.solve_order = list(reversed(order))
        self.leftover = leftover
        pivots = {v for _, v in order}
        self.free = [g for g in self.gens if g not in pivots and g not in self.fixed]
        R = self.ring
        self.steps = []
        for r, v in self.solve_order:
            parts = r.coefficients_in(v)
            top = max(parts)
            coeffs = [compile_poly(parts.get(k, MultiPoly(r.ring)), R) for k in range(top + 1)]
            self.steps.append((v, coeffs))
        self.checks = [compile_poly(r, R) for r in presentation.relations]
        self.attempts = attempts

    def _solve(self, coeffs, point, rng):
        R = self.ring
        cs = [f(point) for f in coeffs]

        def val(y):
            acc = R.zero
            for c in reversed(cs):
                acc = R.add(R.mul(acc, y), c)
            return acc

        def der(y):
            acc = R.zero
            for k in range(len(cs) - 1, 0, -1):
                acc = R.add(R.mul(acc, y), R.mul(R.from_int(k), cs[k]))
            return acc

        roots = [r for r in R.residues() if R.divisible_by_pi(val(r)) and R.is_unit(der(r))]
        if not roots:
            return None
        y = rng.choice(roots)
        for _ in range(self.setup.K + 1):
            y = R.sub(y, R.mul(val(y), R.inverse(der(y))))
        return y if R.is_zero(val(y)) else None

    def sample(self, rng) -> dict:
        R = self.ring
        for _ in range(self.attempts):
            point = dict(self.fixed)
            for v in self.free:
                point[v] = R.random(rng)
            ok = True
            for v, coeffs in self.steps:
                y = self._solve(coeffs, point, rng)
                if y is None:
                    ok = False
                    break
                point[v] = y
            if ok and all(R.is_zero(c(point)) for c in self.checks):
                return point
        raise VerificationFailure(f"could not sample a point in {self.attempts} attempts")


def point_rings(setup):
    """Truncated test rings: ZZ/p^K, or F_q[t]/(t^K) in char-p mode."""
    return [setup.point_ring]


@dataclass
class Verdict:
    ok: bool
    kind: str
    detail: dict = field(default_factory=dict)


def ideal_contains(presentation, g: MultiPoly, rng, points: int = 100, triangular=None) -> Verdict:
    """Is g in the relation ideal? Exact when triangular, otherwise randomized."""
    if not g:
        return Verdict(True, "exact", {"reason": "zero"})
    if not presentation.relations:
        return Verdict(False, "exact", {"remainder": str(g)})
    tri = triangular if triangular is not None else TriangularSystem.build(presentation.relations)
    if tri:
        rem = tri.reduce(g)
        return Verdict(not rem, "exact", {"remainder": str(rem), "pivots": tri.pivots(),
                                          "localized_at": tri.localizing()})
    setup = presentation.setup
    sampler = PointSampler(presentation, setup)
    fn = compile_poly(g, sampler.ring)
    for k in range(points):
        pt = sampler.sample(rng)
        if not sampler.ring.is_zero(fn(pt)):
            return Verdict(False, "randomized", {"witness": point_text(pt, sampler.ring), "trial": k})
    return Verdict(True, "randomized", {"points": points, "ring": sampler.ring.descriptor})


def point_text(point: dict, ring) -> dict:
    return {str(v): str(MultiPoly.const(ring, c)) for v, c in sorted(point.items(), key=lambda kv: kv[0])}


def sort_vars(vs) -> list[Var]:
    return sorted(vs)
