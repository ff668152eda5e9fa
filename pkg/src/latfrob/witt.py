"""Truncated pi-typical Witt vectors.

Structure polynomials are never written down by hand: each table is solved
from its ghost identity by back-substitution, dividing by pi^i at step i.
Every division goes through :meth:`MultiPoly.exact_div_pi`, so building a
table is also a proof that the polynomials are integral at that (setup, n).

``W_n`` has length n+1 (indices 0..n); Frobenius maps length n+1 to n.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .errors import IntegrityError, NotInImage
from .poly import MultiPoly, Var, compile_poly, parse_poly
from .rings import BaseSetup, CoeffRing

OPS = ("add", "mul", "neg", "frobenius")
MAX_N = 4
MAX_P = 5


def witt_var(base: str, i: int) -> Var:
    return Var("", f"{base}_{i}", 0)


def witt_vars(base: str, n: int) -> list[Var]:
    return [witt_var(base, i) for i in range(n + 1)]


def ghost_of(coords, setup: BaseSetup, ring: CoeffRing | None = None):
    """Ghost components sum_j pi^j c_j^(q^(i-j)) of a coordinate list.

    ``coords`` may hold MultiPolys or elements of ``ring``.
    """
    q = setup.q
    n = len(coords) - 1
    if coords and isinstance(coords[0], MultiPoly):
        R = coords[0].ring
        pi = R.pi
        out = []
        powers = list(coords)  # powers[j] = c_j^(q^(i-j)) at step i
        for i in range(n + 1):
            if i:
                powers[:i] = [f**q for f in powers[:i]]
            w = MultiPoly(R)
            for j in range(i + 1):
                w = w + powers[j].scale(R.pow(pi, j))
            out.append(w)
        return out
    R = ring
    pi = R.pi
    out = []
    powers = list(coords)
    for i in range(n + 1):
        if i:
            powers[:i] = [R.pow(c, q) for c in powers[:i]]
        w = R.zero
        for j in range(i + 1):
            w = R.add(w, R.mul(R.pow(pi, j), powers[j]))
        out.append(w)
    return out


def solve_from_ghosts(ghosts: list[MultiPoly], setup: BaseSetup) -> list[MultiPoly]:
    """Coordinates c with ghost(c) = ghosts, by exact division (IntegrityError)."""
    q = setup.q
    coords: list[MultiPoly] = []
    powers: list[MultiPoly] = []
    for i, g in enumerate(ghosts):
        R = g.ring
        powers = [f**q for f in powers]
        rest = g
        for j, pw in enumerate(powers):
            rest = rest - pw.scale(R.pow(R.pi, j))
        c = rest.exact_div_pi(i) if i else rest
        coords.append(c)
        powers.append(c)
    return coords


def ghost_polys(setup: BaseSetup, n: int, base: str = "x") -> list[MultiPoly]:
    """[w_0, ..., w_n] in variables base_0..base_n; w_0 = base_0."""
    if n < 0:
        raise ValueError("n must be >= 0")
    R = setup.ring
    xs = [MultiPoly.var(R, v) for v in witt_vars(base, n)]
    return ghost_of(xs, setup)


@dataclass
class WittPolyTable:
    setup: BaseSetup
    n: int
    op: str
    polys: list

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "kind": "witt-table",
            "setup": self.setup.to_json(),
            "n": self.n,
            "op": self.op,
            "polys": [str(f) for f in self.polys],
        }

    @classmethod
    def from_json(cls, doc) -> "WittPolyTable":
        setup = BaseSetup.from_json(doc["setup"])
        polys = [parse_poly(t, setup.ring) for t in doc["polys"]]
        return cls(setup, doc["n"], doc["op"], polys)

    def verify(self) -> None:
        """Re-check the ghost identity each entry was solved from."""
        expected = _target_ghosts(self.setup, self.n, self.op)
        if self.op == "frobenius":
            if len(self.polys) != self.n:
                raise IntegrityError("frobenius table has the wrong length")
        elif len(self.polys) != self.n + 1:
            raise IntegrityError(f"{self.op} table has the wrong length")
        got = ghost_of(list(self.polys), self.setup) if self.polys else []
        for i, (a, b) in enumerate(zip(got, expected)):
            if a != b:
                raise IntegrityError(f"{self.op} table entry {i} fails its ghost identity", remainder=a - b)
        if self.op == "frobenius":
            q = self.setup.q
            xs = [MultiPoly.var(self.setup.ring, v) for v in witt_vars("x", self.n)]
            for i, f in enumerate(self.polys):
                if not (f - xs[i] ** q).all_coeffs_divisible_by_pi():
                    raise IntegrityError(f"F_{i} is not congruent to x_{i}^q mod pi")


def _target_ghosts(setup: BaseSetup, n: int, op: str) -> list[MultiPoly]:
    if op == "frobenius":
        return ghost_polys(setup, n, "x")[1:]
    wx = ghost_polys(setup, n, "x")
    if op == "neg":
        return [-w for w in wx]
    wy = ghost_polys(setup, n, "y")
    if op == "add":
        return [a + b for a, b in zip(wx, wy)]
    if op == "mul":
        return [a * b for a, b in zip(wx, wy)]
    raise ValueError(f"unknown Witt operation {op!r}")


def _check_limits(setup, n, limit_n=MAX_N, limit_p=MAX_P):
    if n > limit_n or setup.p > limit_p:
        raise ValueError(f"symbolic tables are limited to n <= {limit_n}, p <= {limit_p}")


_TABLES: dict = {}
_TABLES_LOCK = threading.Lock()
_store = None  # optional persistent cache, installed by the CLI


def set_table_store(store) -> None:
    """Install an object with ``load(setup, n, op)`` / ``save(table)``."""
    global _store
    _store = store


def _build(setup: BaseSetup, n: int, op: str) -> WittPolyTable:
    if op == "frobenius":
        if n < 1:
            raise ValueError("frobenius needs n >= 1")
        polys = solve_from_ghosts(_target_ghosts(setup, n, op), setup)
        table = WittPolyTable(setup, n, op, polys)
        table.verify()  # also asserts the mod-pi congruence
        return table
    return WittPolyTable(setup, n, op, solve_from_ghosts(_target_ghosts(setup, n, op), setup))


def witt_table(setup: BaseSetup, n: int, op: str) -> WittPolyTable:
    """Memoized structure table; atomic get-or-build."""
    if op not in OPS:
        raise ValueError(f"unknown Witt operation {op!r}")
    _check_limits(setup, n)
    key = (setup.key(), n, op)
    with _TABLES_LOCK:
        table = _TABLES.get(key)
        if table is None:
            table = _store.load(setup, n, op) if _store is not None else None
            if table is None:
                table = _build(setup, n, op)
                if _store is not None:
                    _store.save(table)
            _TABLES[key] = table
        elif _store is not None and not _store.path(setup, n, op).exists():
            _store.save(table)  # memo hit, but this store has not seen the table yet
        return table


def witt_op_polys(setup: BaseSetup, n: int, op: str) -> WittPolyTable:
    if op not in ("add", "mul", "neg"):
        raise ValueError(f"unknown ring operation {op!r}")
    return witt_table(setup, n, op)


def frobenius_polys(setup: BaseSetup, n: int) -> list[MultiPoly]:
    """[F_0, ..., F_{n-1}] with w_i(F(x)) = w_{i+1}(x)."""
    return witt_table(setup, n, "frobenius").polys


# -- concrete Witt vectors --------------------------------------------------

@dataclass(frozen=True)
class WittVec:
    setup: BaseSetup
    ring: CoeffRing
    coords: tuple

    def __post_init__(self):
        if len(self.coords) < 1:
            raise ValueError("a Witt vector has at least one coordinate")
        object.__setattr__(self, "coords", tuple(self.coords))

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def __add__(self, other):
        return witt_arith("add", self, other)

    def __mul__(self, other):
        return witt_arith("mul", self, other)

    def __neg__(self):
        return witt_arith("neg", self)

    def __sub__(self, other):
        return self + (-other)

    def __str__(self):
        return "(" + ", ".join(_elem_text(self.ring, c) for c in self.coords) + ")"


def _elem_text(ring, c):
    return str(MultiPoly.const(ring, c))


class _Evaluators:
    """Compiled table polynomials for one (setup, n, ring)."""

    _cache: dict = {}

    def __init__(self, setup, n, ring):
        self.setup, self.n, self.ring = setup, n, ring
        self.ops = {}

    @classmethod
    def get(cls, setup, n, ring):
        key = (setup.key(), n, ring)
        ev = cls._cache.get(key)
        if ev is None:
            ev = cls._cache[key] = cls(setup, n, ring)
        return ev

    def op(self, name):
        fns = self.ops.get(name)
        if fns is None:
            polys = witt_table(self.setup, self.n, name).polys
            fns = self.ops[name] = [compile_poly(f, self.ring) for f in polys]
        return fns


def _point(u: WittVec, base: str) -> dict:
    return {witt_var(base, i): c for i, c in enumerate(u.coords)}


def witt_arith(op: str, u: WittVec, v: WittVec | None = None) -> WittVec:
    """Coordinatewise evaluation of the op's structure table."""
    if op not in ("add", "mul", "neg"):
        raise ValueError(f"unknown Witt operation {op!r}")
    if v is not None and (len(u.coords) != len(v.coords) or u.ring != v.ring):
        raise ValueError("Witt vectors differ in length or ring")
    if op != "neg" and v is None:
        raise ValueError(f"{op} needs two operands")
    fns = _Evaluators.get(u.setup, u.n, u.ring).op(op)
    point = _point(u, "x")
    if v is not None:
        point.update(_point(v, "y"))
    return WittVec(u.setup, u.ring, tuple(f(point) for f in fns))


def frobenius(u: WittVec) -> WittVec:
    """Witt vector Frobenius W_n -> W_{n-1}."""
    if u.n < 1:
        raise ValueError("frobenius needs length >= 2")
    fns = _Evaluators.get(u.setup, u.n, u.ring).op("frobenius")
    point = _point(u, "x")
    return WittVec(u.setup, u.ring, tuple(f(point) for f in fns))


def verschiebung(u: WittVec) -> WittVec:
    return WittVec(u.setup, u.ring, (u.ring.zero,) + u.coords)


def teichmuller(a, n: int, setup: BaseSetup, ring: CoeffRing) -> WittVec:
    return WittVec(setup, ring, (a,) + (ring.zero,) * n)


def witt_zero(n, setup, ring) -> WittVec:
    return WittVec(setup, ring, (ring.zero,) * (n + 1))


def witt_one(n, setup, ring) -> WittVec:
    return teichmuller(ring.one, n, setup, ring)


def ghost(u: WittVec) -> tuple:
    return tuple(ghost_of(list(u.coords), u.setup, u.ring))


def unghost(w, setup: BaseSetup, ring: CoeffRing) -> WittVec:
    """Inverse of ghost over a pi-torsion-free ring; NotInImage otherwise."""
    if not ring.torsion_free:
        raise TypeError(f"unghost needs a pi-torsion-free ring, not {ring.descriptor}")
    q = setup.q
    pi = ring.pi
    coords = []
    powers = []
    for i, wi in enumerate(w):
        powers = [ring.pow(c, q) for c in powers]
        rest = wi
        for j, pw in enumerate(powers):
            rest = ring.sub(rest, ring.mul(ring.pow(pi, j), pw))
        try:
            for _ in range(i):
                rest = ring.div_pi(rest)
        except IntegrityError:
            raise NotInImage(f"ghost vector not in the image at coordinate {i}", index=i) from None
        coords.append(rest)
        powers.append(rest)
    return WittVec(setup, ring, tuple(coords))


def exp_delta(r, n: int, setup: BaseSetup, ring: CoeffRing | None = None) -> WittVec:
    """Universal map R -> W_n(R): unghost of (r, phi(r), ..., phi^n(r))."""
    ring = ring or setup.ring
    ghosts = [r]
    for _ in range(n):
        ghosts.append(ring.frob(ghosts[-1]))
    try:
        return unghost(ghosts, setup, ring)
    except NotInImage as exc:
        raise IntegrityError(f"exp_delta({r}) is not integral: {exc}") from exc


def delta_const(r, setup: BaseSetup, ring: CoeffRing | None = None):
    """delta(r) = (r - r^q)/pi on the base ring."""
    ring = ring or setup.ring
    return ring.div_pi(ring.sub(r, ring.pow(r, setup.q)))
