"""Sparse multivariate polynomials over the exact rings in :mod:`latfrob.rings`.

Variables carry structured names ``Var(side, base, order)``: ``order`` is the
jet order and ``side`` is ``""`` for jet/ambient variables or ``"s"`` for the
S-side factor of a fiber product. Text form::

    x   x'   x''   x^(3)   s.x'   x_0

Monomials are tuples of ``(var_index, exponent)`` sorted by an interned
index, so the term dict is canonical and equality is dict equality. Printing
uses graded order on the structured names, which keeps text output
independent of interning order.
"""

from __future__ import annotations

import re
from typing import NamedTuple

from .errors import IntegrityError
from .rings import CoeffRing, FiniteField, FqPolyRing, FqTruncRing


class Var(NamedTuple):
    side: str
    base: str
    order: int

    def __str__(self):
        prefix = f"{self.side}." if self.side else ""
        if self.order == 0:
            suffix = ""
        elif self.order <= 2:
            suffix = "'" * self.order
        else:
            suffix = f"^({self.order})"
        return f"{prefix}{self.base}{suffix}"

    def shifted(self, k: int) -> "Var":
        return Var(self.side, self.base, self.order + k)

    def at(self, order: int) -> "Var":
        return Var(self.side, self.base, order)

    def on(self, side: str) -> "Var":
        return Var(side, self.base, self.order)


def jet(base: str, order: int = 0, side: str = "") -> Var:
    return Var(side, base, order)


_VARS: list[Var] = []
_INDEX: dict[Var, int] = {}


def _intern(v: Var) -> int:
    i = _INDEX.get(v)
    if i is None:
        i = len(_VARS)
        _VARS.append(v)
        _INDEX[v] = i
    return i


def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for k, e in b:
        d[k] = d.get(k, 0) + e
    return tuple(sorted(d.items()))


def _mono_key(mono):
    deg = sum(e for _, e in mono)
    return (-deg, sorted((_VARS[i], -e) for i, e in mono))


def _prime_char(ring: CoeffRing):
    if isinstance(ring, (FiniteField, FqPolyRing, FqTruncRing)):
        return ring.characteristic
    return None


class MultiPoly:
    """Immutable sparse polynomial; ``terms`` maps monomial -> nonzero coeff."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: CoeffRing, terms: dict | None = None):
        self.ring = ring
        self.terms = terms if terms is not None else {}

    # -- constructors -------------------------------------------------------
    @classmethod
    def const(cls, ring, c) -> "MultiPoly":
        if isinstance(c, int) and not isinstance(c, bool):
            c = ring.from_int(c)
        return cls(ring, {} if ring.is_zero(c) else {(): c})

    @classmethod
    def var(cls, ring, v: Var) -> "MultiPoly":
        return cls(ring, {((_intern(v), 1),): ring.one})

    @classmethod
    def zero(cls, ring) -> "MultiPoly":
        return cls(ring)

    @classmethod
    def one(cls, ring) -> "MultiPoly":
        return cls(ring, {(): ring.one})

    @classmethod
    def monomial(cls, ring, powers: dict, c=None) -> "MultiPoly":
        mono = tuple(sorted((_intern(v), e) for v, e in powers.items() if e))
        c = ring.one if c is None else c
        return cls(ring, {} if ring.is_zero(c) else {mono: c})

    # -- inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_term(self):
        return self.terms.get((), self.ring.zero)

    def variables(self) -> set[Var]:
        return {_VARS[i] for m in self.terms for i, _ in m}

    def degree(self, v: Var | None = None) -> int:
        if not self.terms:
            return -1
        if v is None:
            return max(sum(e for _, e in m) for m in self.terms)
        i = _INDEX.get(v)
        return max((e for m in self.terms for j, e in m if j == i), default=0)

    def max_order(self) -> int:
        return max((_VARS[i].order for m in self.terms for i, _ in m), default=-1)

    def items(self):
        """(powers dict, coeff) pairs in canonical print order."""
        for mono in sorted(self.terms, key=_mono_key):
            yield {_VARS[i]: e for i, e in mono}, self.terms[mono]

    def __len__(self):
        return len(self.terms)

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise TypeError(f"mixed coefficient rings {self.ring.descriptor} and {other.ring.descriptor}")
            return other
        return MultiPoly.const(self.ring, other)

    def __add__(self, other):
        other = self._coerce(other)
        if len(other.terms) > len(self.terms):
            big, small = other, self
        else:
            big, small = self, other
        terms = dict(big.terms)
        add, is_zero = self.ring.add, self.ring.is_zero
        for m, c in small.terms.items():
            if m in terms:
                s = add(terms[m], c)
                if is_zero(s):
                    del terms[m]
                else:
                    terms[m] = s
            else:
                terms[m] = c
        return MultiPoly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.neg
        return MultiPoly(self.ring, {m: neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = other
            if isinstance(c, int) and not isinstance(c, bool):
                c = self.ring.from_int(c)
            return self.scale(c)
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return MultiPoly(self.ring)
        add, mul, is_zero = self.ring.add, self.ring.mul, self.ring.is_zero
        out: dict = {}
        get = out.get
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                prev = get(m)
                c = mul(c1, c2)
                out[m] = c if prev is None else add(prev, c)
        return MultiPoly(self.ring, {m: c for m, c in out.items() if not is_zero(c)})

    __rmul__ = __mul__

    def scale(self, c) -> "MultiPoly":
        ring = self.ring
        if ring.is_zero(c):
            return MultiPoly(ring)
        mul, is_zero = ring.mul, ring.is_zero
        terms = {}
        for m, x in self.terms.items():
            y = mul(x, c)
            if not is_zero(y):
                terms[m] = y
        return MultiPoly(ring, terms)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        if k == 0:
            return MultiPoly.one(self.ring)
        if len(self.terms) == 1:
            (m, c), = self.terms.items()
            return MultiPoly(self.ring, self._single_pow(m, c, k))
        p = _prime_char(self.ring)
        if p is not None and k % p == 0:
            return self._frobenius_pow(p) ** (k // p)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def _single_pow(self, m, c, k):
        c = self.ring.pow(c, k)
        if self.ring.is_zero(c):
            return {}
        return {tuple((i, e * k) for i, e in m): c}

    def _frobenius_pow(self, p):
        # (sum c m)^p = sum c^p m^p in characteristic p
        ring = self.ring
        terms = {}
        for m, c in self.terms.items():
            cp = ring.pow(c, p)
            if not ring.is_zero(cp):
                terms[tuple((i, e * p) for i, e in m)] = cp
        return MultiPoly(ring, terms)

    # -- exact division -----------------------------------------------------
    def exact_div_pi(self, k: int = 1) -> "MultiPoly":
        """Divide by pi^k; IntegrityError unless every coefficient allows it."""
        ring = self.ring
        if not ring.torsion_free:
            raise TypeError(f"division by pi on {ring.descriptor} is not well defined")
        terms = {}
        for m, c in self.terms.items():
            d = c
            try:
                for _ in range(k):
                    d = ring.div_pi(d)
            except IntegrityError:
                raise IntegrityError(
                    f"pi^{k} does not divide term {_term_text(ring, m, c)}",
                    remainder=MultiPoly(ring, {m: c}),
                ) from None
            terms[m] = d
        out = MultiPoly(ring, terms)
        if out.scale(ring.pow(ring.pi, k)) != self:
            raise IntegrityError("re-multiplication check failed", remainder=self)
        return out

    def exact_div_scalar(self, d) -> "MultiPoly":
        ring = self.ring
        if isinstance(d, int) and not isinstance(d, bool):
            d = ring.from_int(d)
        terms = {}
        for m, c in self.terms.items():
            if isinstance(c, int):
                qt, r = divmod(c, d)
                if r:
                    raise IntegrityError(
                        f"{d} does not divide term {_term_text(ring, m, c)}",
                        remainder=MultiPoly(ring, {m: c}),
                    )
            elif ring.descriptor == "QQ":
                qt = c / d
            else:
                raise TypeError(f"scalar division not supported on {ring.descriptor}")
            terms[m] = qt
        out = MultiPoly(ring, terms)
        if out.scale(d) != self:
            raise IntegrityError("re-multiplication check failed", remainder=self)
        return out

    def exact_div_monic(self, d: "MultiPoly") -> "MultiPoly":
        """Exact division by a monic univariate polynomial."""
        dv = d.variables()
        if len(dv) != 1:
            raise ValueError("divisor must be univariate")
        (v,) = dv
        n = d.degree(v)
        lead = d.coefficients_in(v).get(n)
        if lead is None or lead != MultiPoly.one(d.ring):
            raise ValueError("divisor must be monic")
        quotient = MultiPoly(self.ring)
        rem = self
        xv = MultiPoly.var(self.ring, v)
        while rem and rem.degree(v) >= n:
            k = rem.degree(v)
            top = rem.coefficients_in(v)[k]
            t = top * xv ** (k - n)
            quotient = quotient + t
            rem = rem - t * d
        if rem:
            raise IntegrityError("non-exact division by monic polynomial", remainder=rem)
        return quotient

    # -- structure ----------------------------------------------------------
    def coefficients_in(self, v: Var) -> dict[int, "MultiPoly"]:
        """Write self as sum_k c_k * v^k; returns {k: c_k}."""
        i = _INDEX.get(v)
        parts: dict[int, dict] = {}
        for m, c in self.terms.items():
            k = 0
            rest = m
            for j, e in m:
                if j == i:
                    k = e
                    rest = tuple(x for x in m if x[0] != i)
                    break
            parts.setdefault(k, {})[rest] = c
        return {k: MultiPoly(self.ring, t) for k, t in parts.items()}

    def map_coeffs(self, fn, ring: CoeffRing | None = None) -> "MultiPoly":
        ring = ring or self.ring
        terms = {}
        for m, c in self.terms.items():
            y = fn(c)
            if not ring.is_zero(y):
                terms[m] = y
        return MultiPoly(ring, terms)

    def change_ring(self, ring: CoeffRing) -> "MultiPoly":
        src = self.ring
        return self.map_coeffs(lambda c: ring.coerce(c, src), ring)

    def all_coeffs_divisible_by_pi(self) -> bool:
        return all(self.ring.divisible_by_pi(c) for c in self.terms.values())

    def rename(self, fn) -> "MultiPoly":
        """Apply fn: Var -> Var to every variable (must stay injective)."""
        terms = {}
        for m, c in self.terms.items():
            nm = tuple(sorted((_intern(fn(_VARS[i])), e) for i, e in m))
            terms[nm] = c
        return MultiPoly(self.ring, terms)

    # -- substitution / evaluation -----------------------------------------
    def subst(self, images: dict, keep: bool = False) -> "MultiPoly":
        """Simultaneous substitution of variables by polynomials.

        Variables without an image raise ValueError unless ``keep`` is set,
        in which case they are left in place.
        """
        ring = self.ring
        img = {}
        for v, f in images.items():
            i = _INDEX.get(v)
            if i is not None:
                img[i] = f if isinstance(f, MultiPoly) else MultiPoly.const(ring, f)
        powers: dict[tuple[int, int], MultiPoly] = {}

        def power(i, e):
            key = (i, e)
            r = powers.get(key)
            if r is None:
                if i in img:
                    r = img[i] ** e
                elif keep:
                    r = MultiPoly(ring, {((i, e),): ring.one})
                else:
                    raise ValueError(f"no image for variable {_VARS[i]}")
                powers[key] = r
            return r

        acc: dict = {}
        add, mul, is_zero = ring.add, ring.mul, ring.is_zero
        for m, c in self.terms.items():
            term = None
            for i, e in m:
                pw = power(i, e)
                term = pw if term is None else term * pw
            if term is None:
                acc[()] = add(acc[()], c) if () in acc else c
                continue
            for tm, tc in term.terms.items():
                y = mul(tc, c)
                acc[tm] = add(acc[tm], y) if tm in acc else y
        return MultiPoly(ring, {m: c for m, c in acc.items() if not is_zero(c)})

    def eval(self, point: dict, target: CoeffRing | None = None):
        """Evaluate at ``point`` (Var -> element of target)."""
        return compile_poly(self, target or self.ring)(point)

    # -- comparison / text --------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int) and not isinstance(other, bool):
            return self == MultiPoly.const(self.ring, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset((m, _hashable(c)) for m, c in self.terms.items())))

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"MultiPoly({to_text(self)!r} over {self.ring.descriptor})"


def _hashable(c):
    return tuple(c) if isinstance(c, list) else c


def compile_poly(f: MultiPoly, target: CoeffRing):
    """Return point -> value for repeated evaluation in ``target``."""
    src = f.ring
    terms = [([(_VARS[i], e) for i, e in m], target.coerce(c, src)) for m, c in f.terms.items()]
    add, mul, pw = target.add, target.mul, target.pow
    zero = target.zero

    def evaluate(point):
        cache = {}
        total = zero
        for factors, c in terms:
            val = c
            for v, e in factors:
                key = (v, e)
                x = cache.get(key)
                if x is None:
                    try:
                        base = point[v]
                    except KeyError:
                        raise ValueError(f"point has no value for {v}") from None
                    x = cache[key] = pw(base, e)
                val = mul(val, x)
            total = add(total, val)
        return total

    return evaluate


def poly_eval(f: MultiPoly, point: dict, target: CoeffRing):
    return compile_poly(f, target)(point)


def poly_subst(f: MultiPoly, images: dict, keep: bool = False) -> MultiPoly:
    return f.subst(images, keep=keep)


# -- text ---------------------------------------------------------------------

def _term_text(ring, mono, c):
    return to_text(MultiPoly(ring, {mono: c}))


def to_text(f: MultiPoly) -> str:
    pieces = []
    for powers, c in f.items():
        mono = "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in sorted(powers.items()))
        for d, extra in f.ring.text_parts(c):
            neg = d < 0
            d = -d if neg else d
            factors = [x for x in (extra, mono) if x]
            if extra.startswith("/"):
                body = f"{d}{extra}" + (f"*{mono}" if mono else "")
            elif not factors:
                body = str(d)
            elif d == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(d)] + factors)
            pieces.append((neg, body))
    if not pieces:
        return "0"
    out = []
    for k, (neg, body) in enumerate(pieces):
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>\^\(|[-+*/^()'.]|′|″))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise SyntaxError(f"unexpected character {text[pos]!r} at {pos} in {text!r}")
        pos = m.end()
        if m.group("num") is not None:
            out.append(("num", int(m.group("num"))))
        elif m.group("name") is not None:
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
    return out


def _named_constants(ring: CoeffRing) -> dict:
    consts = {}
    sym = getattr(ring, "pi_symbol", None)
    if sym:
        consts[sym] = ring.pi
    F = getattr(ring, "F", ring if isinstance(ring, FiniteField) else None)
    if F is not None and F.e > 1:
        u = F.p  # digit 1 in position 1
        consts["u"] = u if ring is F else ring.coerce(u, F)
    return consts


class _Parser:
    def __init__(self, text, ring):
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring
        self.text = text
        self.consts = _named_constants(ring)

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t != ("op", op):
            raise SyntaxError(f"expected {op!r} in {self.text!r}")

    def parse(self):
        if not self.toks:
            raise SyntaxError("empty polynomial text")
        f = self.expr()
        if self.i != len(self.toks):
            raise SyntaxError(f"trailing input {self.peek()[1]!r} in {self.text!r}")
        return f

    def expr(self):
        f = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def _starts_factor(self):
        kind, val = self.peek()
        return kind in ("num", "name") or (kind == "op" and val == "(")

    def term(self):
        f = self.unary()
        while True:
            if self.peek() == ("op", "*"):
                self.take()
                f = f * self.unary()
            elif self.peek() == ("op", "/"):
                self.take()
                kind, val = self.take()
                if kind != "num":
                    raise SyntaxError("only integer divisors are supported")
                f = f.exact_div_scalar(val)
            elif self._starts_factor():
                f = f * self.power()
            else:
                return f

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        f = self.atom()
        while self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise SyntaxError(f"exponent must be an integer in {self.text!r}")
            f = f**val
        return f

    def atom(self):
        kind, val = self.take()
        ring = self.ring
        if kind == "num":
            return MultiPoly.const(ring, val)
        if kind == "op" and val == "(":
            f = self.expr()
            self.expect(")")
            return f
        if kind == "name":
            side = ""
            if self.peek() == ("op", "."):
                self.take()
                side = val
                kind, val = self.take()
                if kind != "name":
                    raise SyntaxError(f"expected a name after '{side}.'")
            elif val in self.consts:
                return MultiPoly.const(ring, self.consts[val])
            order = 0
            if self.peek() == ("op", "^("):
                self.take()
                kind, k = self.take()
                if kind != "num":
                    raise SyntaxError("jet order must be an integer")
                self.expect(")")
                order = k
            else:
                while self.peek()[0] == "op" and self.peek()[1] in ("'", "′", "″"):
                    order += 2 if self.take()[1] == "″" else 1
            return MultiPoly.var(ring, Var(side, val, order))
        raise SyntaxError(f"unexpected token {val!r} in {self.text!r}")


def parse_poly(text: str, ring: CoeffRing) -> MultiPoly:
    """Parse the poly-text grammar into a MultiPoly over ``ring``."""
    return _Parser(text, ring).parse()


def parse_var(text: str) -> Var:
    from .rings import IntegerRing

    f = parse_poly(text, IntegerRing())
    vs = f.variables()
    if len(vs) != 1 or len(f) != 1 or f.degree() != 1:
        raise SyntaxError(f"{text!r} is not a single variable")
    return next(iter(vs))
