"""Verification suites and the shared report format."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .errors import IntegrityError, NotInImage, VerificationFailure
from .gallery import check_group_axioms, group_compat_check, ses_check, verify_kernel_prolongation
from .jets import delta_axiom_defects, delta_poly, jet_vars, phi_image, random_poly
from .lateral import (
    descend,
    lateral_map_affine_space,
    verify_ghost_shift,
    verify_lift_of_frobenius,
    verify_prop31,
)
from .poly import MultiPoly
from .witt import MAX_N, WittVec, ghost, witt_one, witt_zero

SUITES = ("witt-laws", "delta-axioms", "shift", "lift", "prop31", "descent", "kernel", "group", "ses")
MAX_WITNESSES = 5


@dataclass
class VerificationReport:
    suite: str
    instance: str
    status: str  # pass | fail | skipped
    witnesses: list = field(default_factory=list)
    trials: int = 0
    seed: int = 0
    detail: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def to_json(self) -> dict:
        return {"schema_version": 1, "suite": self.suite, "instance": self.instance, "status": self.status,
                "witnesses": self.witnesses, "trials": self.trials, "seed": self.seed, "detail": self.detail}


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


# -- Witt laws ---------------------------------------------------------------------

def check_witt_laws(setup, n: int, trials: int, rng, ring=None) -> list:
    """Ring axioms and ghost homomorphism on random triples; returns witnesses."""
    A = ring or setup.point_ring
    zero, one = witt_zero(n, setup, A), witt_one(n, setup, A)
    witnesses = []

    def rand():
        return WittVec(setup, A, tuple(A.random(rng) for _ in range(n + 1)))

    def gh_add(a, b):
        return tuple(A.add(x, y) for x, y in zip(a, b))

    def gh_mul(a, b):
        return tuple(A.mul(x, y) for x, y in zip(a, b))

    for k in range(trials):
        u, v, w = rand(), rand(), rand()
        uv, vu = u + v, v + u
        checks = {
            "add-assoc": (uv + w, u + (v + w)),
            "add-comm": (uv, vu),
            "mul-assoc": ((u * v) * w, u * (v * w)),
            "mul-comm": (u * v, v * u),
            "distrib": (u * (v + w), u * v + u * w),
            "zero": (u + zero, u),
            "one": (u * one, u),
            "neg": (u + (-u), zero),
            "ghost-add": (ghost(uv), gh_add(ghost(u), ghost(v))),
            "ghost-mul": (ghost(u * v), gh_mul(ghost(u), ghost(v))),
        }
        for name, (lhs, rhs) in checks.items():
            if lhs != rhs:
                witnesses.append({"law": name, "n": n, "trial": k, "u": str(u), "v": str(v), "w": str(w)})
                break
        if len(witnesses) >= MAX_WITNESSES:
            break
    return witnesses


# -- delta axioms ------------------------------------------------------------------

def check_delta_axioms(setup, bases, n: int, trials: int, rng) -> list:
    """delta on jet polynomials of order < n: both axioms exactly, and phi = q-power mod pi."""
    witnesses = []
    q = setup.q
    R = setup.ring
    for v in jet_vars(bases, n):
        d = phi_image(v, setup) - MultiPoly.var(R, v) ** q
        if not d.all_coeffs_divisible_by_pi():
            witnesses.append({"check": "lift-congruence", "generator": str(v), "residue": str(d)})
    gens = jet_vars(bases, max(n - 1, 0))

    def delta(f):
        return delta_poly(f, setup)

    for k in range(trials):
        f = random_poly(setup, gens, rng, max_deg=2, max_terms=3)
        g = random_poly(setup, gens, rng, max_deg=2, max_terms=3)
        a_def, m_def = delta_axiom_defects(delta, lambda x: x, f, g, setup)
        if a_def or m_def:
            witnesses.append({"check": "axioms", "trial": k, "f": str(f), "g": str(g),
                              "add_defect": str(a_def), "mul_defect": str(m_def)})
        c = R.from_int(rng.randint(-50, 50)) if not setup.char_p else R.random(rng, degree=2)
        dc = delta(MultiPoly.const(R, c))
        expect = (MultiPoly.const(R, c) - MultiPoly.const(R, c) ** q).exact_div_pi()
        if dc != expect:
            witnesses.append({"check": "base-ring", "trial": k, "r": str(MultiPoly.const(R, c))})
        if len(witnesses) >= MAX_WITNESSES:
            break
    return witnesses


# -- suite runners -----------------------------------------------------------------

class Context:
    """Resolved objects for one RunConfig, built lazily and shared by suites."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.setup = cfg.setup()
        self.X = cfg.presentation(self.setup)
        self.E = cfg.preset()
        self.S = cfg.prolong_seq(self.setup, self.X)
        self._map = None

    def lateral(self):
        if self._map is None:
            if self.X.relations:
                self._map = descend(self.X, self.cfg.n, self.S, trials=self.cfg.trials, seed=self.cfg.seed)
            else:
                self._map = lateral_map_affine_space(self.X, self.cfg.n, self.S)
        return self._map

    def report(self, suite, ok, witnesses=(), trials=0, detail=None, skipped=None):
        if skipped:
            return VerificationReport(suite, self.cfg.instance(), "skipped", [], 0, self.cfg.seed,
                                      {"notice": skipped})
        return VerificationReport(suite, self.cfg.instance(), _status(ok), list(witnesses)[:MAX_WITNESSES],
                                  trials, self.cfg.seed, detail or {})


def _suite_witt_laws(ctx):
    cfg, setup = ctx.cfg, ctx.setup
    rng = random.Random(cfg.seed)
    top = min(cfg.n, MAX_N)
    witnesses = []
    for n in range(1, top + 1):
        witnesses += check_witt_laws(setup, n, cfg.trials, rng)
    return ctx.report("witt-laws", not witnesses, witnesses, cfg.trials,
                      {"orders": list(range(1, top + 1)), "ring": setup.point_ring.descriptor})


def _suite_delta(ctx):
    cfg = ctx.cfg
    rng = random.Random(cfg.seed)
    witnesses = check_delta_axioms(ctx.setup, ctx.X.vars, cfg.n, cfg.trials, rng)
    return ctx.report("delta-axioms", not witnesses, witnesses, cfg.trials)


def _suite_shift(ctx):
    m = lateral_map_affine_space(ctx.X.ambient(), ctx.cfg.n, ctx.S)
    r = verify_ghost_shift(m)
    return ctx.report("shift", r["ok"], r["witnesses"], detail={"generators": len(m.images)})


def _suite_lift(ctx):
    r = verify_lift_of_frobenius(ctx.lateral(), points=ctx.cfg.trials, seed=ctx.cfg.seed)
    return ctx.report("lift", r["ok"], r["failures"], ctx.cfg.trials, {"checked": r["checked"]})


def _suite_prop31(ctx):
    if ctx.cfg.n < 2:
        return ctx.report("prop31", True, skipped="the diagram needs n >= 2")
    m = ctx.lateral()
    mode = "symbolic" if not m.target.relations else "pointwise"
    r = verify_prop31(m, mode, trials=ctx.cfg.trials, seed=ctx.cfg.seed)
    detail = {k: v for k, v in r.items() if k not in ("ok", "witnesses")}
    return ctx.report("prop31", r["ok"], r["witnesses"], ctx.cfg.trials if mode == "pointwise" else 0, detail)


def _suite_descent(ctx):
    cfg = ctx.cfg
    try:
        m = descend(ctx.X, cfg.n, ctx.S, trials=cfg.trials, seed=cfg.seed)
    except VerificationFailure as exc:
        return ctx.report("descent", False, [{"error": str(exc), "witness": exc.witness}], cfg.trials)
    cert = m.certificate
    trials = cert["detail"].get("points", 0)
    return ctx.report("descent", True, [], trials, cert)


def _suite_kernel(ctx):
    if ctx.E is None or not ctx.E.has_law:
        return ctx.report("kernel", True, skipped="kernel tower needs a gallery group scheme (ga or gm)")
    cfg = ctx.cfg
    axioms = check_group_axioms(ctx.E, ctx.setup)
    r = verify_kernel_prolongation(ctx.E, cfg.n, ctx.setup, trials=min(cfg.trials, 100), seed=cfg.seed)
    bad = [lv for lv in r["levels"] if not (lv.get("lift") and lv.get("delta") and lv.get("tower")
                                            and lv.get("closed_formula", True))]
    witnesses = bad + [{"group-axiom": f} for f in axioms["failures"]]
    levels = [{k: v for k, v in lv.items()} for lv in r["levels"]]
    return ctx.report("kernel", r["ok"] and axioms["ok"], witnesses, min(cfg.trials, 100), {"levels": levels})


def _suite_group(ctx):
    if ctx.E is None or not ctx.E.has_law:
        return ctx.report("group", True, skipped="no group law for this scheme")
    if ctx.cfg.n < 2:
        return ctx.report("group", True, skipped="group compatibility needs n >= 2")
    cfg = ctx.cfg
    r = group_compat_check(ctx.E, cfg.n, ctx.setup, trials=cfg.trials, seed=cfg.seed,
                           axiom_trials=max(300, cfg.trials // 3))
    return ctx.report("group", r["ok"], r["witnesses"], cfg.trials,
                      {"ring": r["ring"], "axiom_trials": r["axiom_trials"]})


def _suite_ses(ctx):
    if ctx.E is None or not ctx.E.has_law:
        return ctx.report("ses", True, skipped="no group law for this scheme, exact sequence not checked")
    cfg = ctx.cfg
    r = ses_check(ctx.E, cfg.n, ctx.setup, trials=min(cfg.trials, 500), seed=cfg.seed)
    return ctx.report("ses", r["ok"], r["witnesses"], min(cfg.trials, 500), {"ring": r["ring"], "lifted": r["lifted"]})


_RUNNERS = {
    "witt-laws": _suite_witt_laws,
    "delta-axioms": _suite_delta,
    "shift": _suite_shift,
    "lift": _suite_lift,
    "prop31": _suite_prop31,
    "descent": _suite_descent,
    "kernel": _suite_kernel,
    "group": _suite_group,
    "ses": _suite_ses,
}


def run_suites(cfg, suite: str = "all") -> list[VerificationReport]:
    if suite != "all" and suite not in _RUNNERS:
        raise ValueError(f"unknown suite {suite!r}; expected one of all, {', '.join(SUITES)}")
    names = SUITES if suite == "all" else (suite,)
    ctx = Context(cfg)
    out = []
    for name in names:
        try:
            out.append(_RUNNERS[name](ctx))
        except (IntegrityError, NotInImage, VerificationFailure) as exc:
            witness = getattr(exc, "witness", None)
            out.append(ctx.report(name, False, [{"error": f"{type(exc).__name__}: {exc}", "witness": witness}]))
    return out
