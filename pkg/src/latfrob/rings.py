"""Exact coefficient rings.

Every ring here is a small handle object; ring *elements* are plain Python
values (``int``, ``Fraction`` or tuples of ints) so polynomial code can keep
them in dicts without wrapping. The two symbolic rings that carry a
uniformizer are ``ZZ`` (pi = p) and ``F_q[t]`` (pi = t). Their truncations
``ZZ/p^K`` and ``F_q[t]/(t^K)`` are the point rings used by randomized checks.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product

from .errors import IntegrityError

# Irreducible moduli for the small non-prime fields, low degree first.
DEFAULT_MODULI = {
    4: (1, 1, 1),  # u^2 + u + 1
    8: (1, 1, 0, 1),  # u^3 + u + 1
    9: (1, 0, 1),  # u^2 + 1
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _polymod_fp(a, b, p):
    """Remainder of a by monic b over F_p (coefficient lists, low first)."""
    a = list(a)
    db = len(b) - 1
    while len(a) - 1 >= db and any(a):
        while a and a[-1] % p == 0:
            a.pop()
        if len(a) - 1 < db:
            break
        c = a[-1]
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
        a.pop()
    while a and a[-1] % p == 0:
        a.pop()
    return a


def is_irreducible_mod_p(modulus, p: int) -> bool:
    """Trial factoring by every monic polynomial of degree <= deg/2."""
    deg = len(modulus) - 1
    if deg < 1 or modulus[-1] % p != 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _polymod_fp(modulus, list(low) + [1], p):
                return False
    return True


class CoeffRing:
    """Interface shared by all coefficient rings."""

    descriptor = "?"
    characteristic = 0
    torsion_free = False  # pi is a non-zero-divisor
    pi_symbol = None  # name under which pi may appear in poly text
    zero = 0
    one = 1

    add = staticmethod(operator.add)
    sub = staticmethod(operator.sub)
    mul = staticmethod(operator.mul)
    neg = staticmethod(operator.neg)

    def __repr__(self):
        return f"<{type(self).__name__} {self.descriptor}>"

    def __eq__(self, other):
        return isinstance(other, CoeffRing) and self.descriptor == other.descriptor

    def __hash__(self):
        return hash(self.descriptor)

    def is_zero(self, a) -> bool:
        return a == self.zero

    def from_int(self, n: int):
        raise NotImplementedError

    def pow(self, a, k: int):
        result = self.one
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    @property
    def pi(self):
        raise TypeError(f"{self.descriptor} has no distinguished uniformizer")

    def div_pi(self, a):
        raise TypeError(f"exact division by pi is not defined on {self.descriptor}")

    def divisible_by_pi(self, a) -> bool:
        raise NotImplementedError

    def frob(self, a):
        """Designated Frobenius lift on coefficients (the identity throughout)."""
        return a

    def coerce(self, a, source: "CoeffRing"):
        if source == self:
            return a
        raise TypeError(f"no coefficient map {source.descriptor} -> {self.descriptor}")

    def text_parts(self, a):
        """Split a into (integer, extra-factor text) pieces for printing."""
        return [(a, "")]

    def to_json(self, a):
        return a

    def from_json(self, v):
        return v


class IntegerRing(CoeffRing):
    torsion_free = True

    def __init__(self, p: int | None = None):
        self.p = p
        self.descriptor = "ZZ"

    def from_int(self, n):
        return int(n)

    def pow(self, a, k):
        return a**k

    @property
    def pi(self):
        if self.p is None:
            raise TypeError("ZZ without a prime has no uniformizer")
        return self.p

    def div_pi(self, a):
        q, r = divmod(a, self.p)
        if r:
            raise IntegrityError(f"{self.p} does not divide {a}", remainder=a)
        return q

    def divisible_by_pi(self, a):
        return a % self.p == 0

    def coerce(self, a, source):
        if isinstance(source, IntegerRing):
            return a
        return super().coerce(a, source)

    def random(self, rng, bound=8):
        return rng.randint(-bound, bound)

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ZZ")


class RationalField(CoeffRing):
    torsion_free = True
    descriptor = "QQ"
    one = Fraction(1)
    zero = Fraction(0)

    def __init__(self, p: int | None = None):
        self.p = p

    def from_int(self, n):
        return Fraction(n)

    @property
    def pi(self):
        return Fraction(self.p)

    def div_pi(self, a):
        return a / self.p

    def coerce(self, a, source):
        if isinstance(source, (IntegerRing, RationalField)):
            return Fraction(a)
        return super().coerce(a, source)

    def text_parts(self, a):
        if a.denominator == 1:
            return [(a.numerator, "")]
        return [(a.numerator, f"/{a.denominator}")]

    def to_json(self, a):
        return str(a)

    def from_json(self, v):
        return Fraction(v)


class IntegersMod(CoeffRing):
    """ZZ / p^K."""

    def __init__(self, p: int, K: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if K < 1:
            raise ValueError("truncation depth must be positive")
        self.p = p
        self.K = K
        self.m = p**K
        self.characteristic = self.m
        self.descriptor = f"ZZ/{self.m}"
        m = self.m
        self.add = lambda a, b: (a + b) % m
        self.sub = lambda a, b: (a - b) % m
        self.mul = lambda a, b: (a * b) % m
        self.neg = lambda a: (-a) % m

    @classmethod
    def from_modulus(cls, p: int, m: int) -> "IntegersMod":
        K, r = 0, m
        while r % p == 0:
            r //= p
            K += 1
        if r != 1 or K == 0:
            raise ValueError(f"modulus {m} is not a power of {p}")
        return cls(p, K)

    def from_int(self, n):
        return n % self.m

    def pow(self, a, k):
        return pow(a, k, self.m)

    @property
    def pi(self):
        return self.p % self.m

    def divisible_by_pi(self, a):
        return a % self.p == 0

    def coerce(self, a, source):
        if isinstance(source, IntegerRing):
            return a % self.m
        if isinstance(source, IntegersMod) and source.m % self.m == 0:
            return a % self.m
        if isinstance(source, RationalField):
            if a.denominator % self.p == 0:
                raise TypeError(f"{a} has no image in {self.descriptor}")
            return a.numerator * pow(a.denominator, -1, self.m) % self.m
        return super().coerce(a, source)

    def residue(self, a):
        return a % self.p

    def residues(self):
        return list(range(self.p))

    def is_unit(self, a):
        return a % self.p != 0

    def inverse(self, a):
        return pow(a, -1, self.m)

    def random(self, rng):
        return rng.randrange(self.m)

    def text_parts(self, a):
        # symmetric representative keeps printed tables readable
        if a > self.m // 2:
            a -= self.m
        return [(a, "")]

    def __eq__(self, other):
        return isinstance(other, IntegersMod) and other.m == self.m

    def __hash__(self):
        return hash(self.descriptor)


class FiniteField(CoeffRing):
    """F_q = F_p[u]/(modulus(u)); elements are ints 0..q-1 (base-p digits)."""

    def __init__(self, p: int, e: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if e < 1:
            raise ValueError("e must be positive")
        self.p, self.e, self.q = p, e, p**e
        self.characteristic = p
        if e == 1:
            self.modulus = None
            self.descriptor = f"GF({p})"
            self.add = lambda a, b: (a + b) % p
            self.sub = lambda a, b: (a - b) % p
            self.mul = lambda a, b: (a * b) % p
            self.neg = lambda a: (-a) % p
            return
        if modulus is None:
            if self.q not in DEFAULT_MODULI:
                raise ValueError(f"no built-in modulus for q={self.q}; supply one")
            modulus = DEFAULT_MODULI[self.q]
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != e + 1:
            raise ValueError(f"modulus must have degree {e}")
        if not is_irreducible_mod_p(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = modulus
        self.descriptor = f"GF({self.q};{','.join(map(str, modulus))})"
        q = self.q
        digits = [self._digits(a) for a in range(q)]
        self._add = [[self._encode([(x + y) % p for x, y in zip(digits[a], digits[b])]) for b in range(q)] for a in range(q)]
        self._mul = [[self._encode(self._mulpoly(digits[a], digits[b])) for b in range(q)] for a in range(q)]
        self._neg = [self._encode([(-x) % p for x in digits[a]]) for a in range(q)]
        self.add = lambda a, b: self._add[a][b]
        self.mul = lambda a, b: self._mul[a][b]
        self.neg = lambda a: self._neg[a]
        self.sub = lambda a, b: self._add[a][self._neg[b]]

    def _digits(self, a):
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def _encode(self, digits):
        v = 0
        for d in reversed(digits):
            v = v * self.p + d
        return v

    def _mulpoly(self, a, b):
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % self.p
        rem = _polymod_fp(prod, self.modulus, self.p)
        return rem + [0] * (self.e - len(rem))

    def from_int(self, n):
        return n % self.p

    def pow(self, a, k):
        if self.e == 1:
            return pow(a, k, self.p)
        return super().pow(a, k)

    def is_unit(self, a):
        return a != 0

    def inverse(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        if self.e == 1:
            return pow(a, -1, self.p)
        return self.pow(a, self.q - 2)

    def elements(self):
        return list(range(self.q))

    def random(self, rng):
        return rng.randrange(self.q)

    def text_parts(self, a):
        if self.e == 1:
            return [(a, "")]
        out = []
        for j, d in enumerate(self._digits(a)):
            if d:
                out.append((d, "" if j == 0 else ("u" if j == 1 else f"u^{j}")))
        return out

    def __eq__(self, other):
        return isinstance(other, FiniteField) and other.descriptor == self.descriptor

    def __hash__(self):
        return hash(self.descriptor)


class _FqSeries(CoeffRing):
    """Shared machinery for F_q[t] and its truncations; elements are tuples."""

    zero = ()
    pi_symbol = "t"

    def __init__(self, F: FiniteField, K: int | None):
        self.F = F
        self.K = K
        self.p = F.p
        self.characteristic = F.p
        self.one = (1,)

    def _trim(self, coeffs):
        coeffs = list(coeffs)
        if self.K is not None:
            del coeffs[self.K:]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return tuple(coeffs)

    def is_zero(self, a):
        return not a

    def from_int(self, n):
        return self._trim([self.F.from_int(n)])

    def add(self, a, b):
        if len(a) < len(b):
            a, b = b, a
        fa = self.F.add
        out = list(a)
        for i, y in enumerate(b):
            out[i] = fa(out[i], y)
        return self._trim(out)

    def neg(self, a):
        fn = self.F.neg
        return tuple(fn(x) for x in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return ()
        n = len(a) + len(b) - 1
        if self.K is not None:
            n = min(n, self.K)
        out = [0] * n
        fa, fm = self.F.add, self.F.mul
        for i, x in enumerate(a):
            if x == 0 or i >= n:
                continue
            for j, y in enumerate(b):
                if i + j >= n:
                    break
                if y:
                    out[i + j] = fa(out[i + j], fm(x, y))
        return self._trim(out)

    def qpow(self, a):
        # Frobenius is additive in char p and fixes F_q pointwise.
        q = self.F.q
        out = [0] * ((len(a) - 1) * q + 1) if a else []
        for i, x in enumerate(a):
            if i * q < len(out):
                out[i * q] = x
        return self._trim(out)

    def pow(self, a, k):
        # split off powers of p via Frobenius
        result = self.one
        p = self.p
        while k:
            k, d = divmod(k, p)
            if d:
                result = self.mul(result, super().pow(a, d))
            if k:
                a = self._ppow(a)
        return result

    def _ppow(self, a):
        F = self.F
        out = [0] * ((len(a) - 1) * self.p + 1) if a else []
        for i, x in enumerate(a):
            if i * self.p < len(out):
                out[i * self.p] = F.pow(x, self.p)
        return self._trim(out)

    @property
    def pi(self):
        return self._trim([0, 1])

    def divisible_by_pi(self, a):
        return not a or a[0] == 0

    def residue(self, a):
        return a[0] if a else 0

    def text_parts(self, a):
        out = []
        for k, c in enumerate(a):
            if not c:
                continue
            tk = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            for d, ftxt in self.F.text_parts(c):
                extra = "*".join(x for x in (ftxt, tk) if x)
                out.append((d, extra))
        return out

    def to_json(self, a):
        return list(a)

    def from_json(self, v):
        return self._trim(v)


class FqPolyRing(_FqSeries):
    """F_q[t], the char-p symbolic ring with pi = t."""

    torsion_free = True

    def __init__(self, F: FiniteField):
        super().__init__(F, None)
        self.descriptor = f"{F.descriptor}[t]"

    def div_pi(self, a):
        if a and a[0] != 0:
            raise IntegrityError(f"t does not divide {a}", remainder=a)
        return a[1:]

    def coerce(self, a, source):
        if isinstance(source, FiniteField) and source == self.F:
            return self._trim([a])
        if isinstance(source, IntegerRing):
            return self.from_int(a)
        return super().coerce(a, source)

    def random(self, rng, degree=3):
        return self._trim([self.F.random(rng) for _ in range(degree + 1)])


class FqTruncRing(_FqSeries):
    """F_q[t]/(t^K), the char-p point ring."""

    def __init__(self, F: FiniteField, K: int):
        if K < 1:
            raise ValueError("truncation depth must be positive")
        super().__init__(F, K)
        self.descriptor = f"{F.descriptor}[t]/(t^{K})"

    def coerce(self, a, source):
        if isinstance(source, (FqPolyRing, FqTruncRing)) and source.F == self.F:
            if isinstance(source, FqTruncRing) and source.K < self.K:
                return super().coerce(a, source)
            return self._trim(a)
        if isinstance(source, FiniteField) and source == self.F:
            return self._trim([a])
        if isinstance(source, IntegerRing):
            return self.from_int(a)
        return super().coerce(a, source)

    def residues(self):
        return [self._trim([c]) for c in self.F.elements()]

    def is_unit(self, a):
        return bool(a) and a[0] != 0

    def inverse(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit")
        F = self.F
        inv0 = F.inverse(a[0])
        out = [inv0]
        for k in range(1, self.K):
            s = 0
            for j in range(1, min(k, len(a) - 1) + 1):
                s = F.add(s, F.mul(a[j], out[k - j]))
            out.append(F.mul(F.neg(s), inv0))
        return self._trim(out)

    def random(self, rng):
        return self._trim([self.F.random(rng) for _ in range(self.K)])


MODES = ("char-zero", "char-p")


@dataclass(frozen=True)
class BaseSetup:
    """Arithmetic context: prime p, q = p^e, uniformizer pi and point depth K.

    In ``char-zero`` mode the symbolic ring is ZZ with pi = p; in ``char-p``
    mode it is F_q[t] with pi = t.
    """

    mode: str = "char-zero"
    p: int = 2
    e: int = 1
    K: int = 6
    modulus: tuple | None = field(default=None)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.e < 1 or self.K < 1:
            raise ValueError("e and K must be positive")
        if self.mode == "char-zero" and self.e != 1:
            raise ValueError("char-zero mode supports e = 1 only")
        if self.modulus is not None:
            object.__setattr__(self, "modulus", tuple(self.modulus))
        # force field construction so a bad modulus fails here
        if self.mode == "char-p":
            self.residue_field

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def char_p(self) -> bool:
        return self.mode == "char-p"

    @cached_property
    def residue_field(self) -> FiniteField:
        return FiniteField(self.p, self.e, self.modulus)

    @cached_property
    def ring(self) -> CoeffRing:
        """The pi-torsion-free symbolic coefficient ring."""
        if self.char_p:
            return FqPolyRing(self.residue_field)
        return IntegerRing(self.p)

    @cached_property
    def point_ring(self) -> CoeffRing:
        if self.char_p:
            return FqTruncRing(self.residue_field, self.K)
        return IntegersMod(self.p, self.K)

    def with_K(self, K: int) -> "BaseSetup":
        return BaseSetup(self.mode, self.p, self.e, K, self.modulus)

    def key(self) -> str:
        tag = "0" if self.mode == "char-zero" else "p"
        key = f"{tag}-p{self.p}-e{self.e}"
        if self.modulus is not None:
            key += "-m" + "".join(map(str, self.modulus))
        return key

    def to_json(self) -> dict:
        return {"mode": self.mode, "p": self.p, "e": self.e, "K": self.K,
                "modulus": list(self.modulus) if self.modulus else None}

    @classmethod
    def from_json(cls, d) -> "BaseSetup":
        return cls(d["mode"], d["p"], d.get("e", 1), d.get("K", 6),
                   tuple(d["modulus"]) if d.get("modulus") else None)


def coeff_ring_make(setup: BaseSetup, descriptor: str) -> CoeffRing:
    """Ring handle by short name: integers, rationals, mod, Fq, Fq[t], Fq[t]/tK."""
    if descriptor == "integers":
        return IntegerRing(setup.p)
    if descriptor == "rationals":
        return RationalField(setup.p)
    if descriptor == "mod":
        return IntegersMod(setup.p, setup.K)
    if descriptor == "Fq":
        return setup.residue_field
    if descriptor == "Fq[t]":
        return FqPolyRing(setup.residue_field)
    if descriptor == "Fq[t]/tK":
        return FqTruncRing(setup.residue_field, setup.K)
    raise ValueError(f"unknown ring descriptor {descriptor!r}")
