"""Independent reference computations over the rationals.

Nothing here imports the package: ghost vectors are solved with Fractions,
and the lateral map is evaluated pointwise straight from its ghost definition.
"""

from fractions import Fraction


def ghost(xs, p):
    return [sum(p**j * Fraction(xs[j]) ** (p ** (i - j)) for j in range(i + 1)) for i in range(len(xs))]


def unghost(ws, p):
    xs = []
    for i, w in enumerate(ws):
        rest = Fraction(w) - sum(p**j * xs[j] ** (p ** (i - j)) for j in range(i))
        xs.append(rest / p**i)
    return xs


def integral(xs):
    assert all(x.denominator == 1 for x in xs), xs
    return [int(x) for x in xs]


def witt_add(u, v, p):
    return integral(unghost([a + b for a, b in zip(ghost(u, p), ghost(v, p))], p))


def witt_mul(u, v, p):
    return integral(unghost([a * b for a, b in zip(ghost(u, p), ghost(v, p))], p))


def witt_frobenius(u, p):
    return integral(unghost(ghost(u, p)[1:], p))


def delta(r, p):
    return Fraction(r - r**p, p)


def lateral_point(a, jets, p, phi_a=None):
    """Target jet coordinates (z', ..., z^(n-1)) at a point of the fiber.

    Source Witt vector (a, x', ..., x^(n)); the target has w_0 = phi_S(a)
    (just a over a constant section) and w_i = w_{i+1}(source) for i >= 1.
    """
    src = ghost([a] + list(jets), p)
    tgt = [Fraction(a if phi_a is None else phi_a)] + src[2:]
    return integral(unghost(tgt, p))[1:]


def brute_sqrt_mod(c, m):
    return [y for y in range(m) if (y * y - c) % m == 0]
