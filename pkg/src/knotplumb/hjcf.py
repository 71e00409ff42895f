"""Exact arithmetic for negative (Hirzebruch-Jung) continued fractions.

A negative continued fraction is the descending expansion

    [a_1, ..., a_s]^- = a_1 - 1/(a_2 - 1/(... - 1/a_s)),

which we keep in canonical form: every coefficient an integer >= 2.  In
canonical form the expansion of a rational number > 1 exists and is unique,
and evaluation never hits a zero denominator.  The module also provides the
Riemenschneider point-rule dual (pairing the expansions of a/b and a/(a-b))
and the modular "star" inverse used in corner-weight computations of
plumbing graphs.

Everything here is exact rational arithmetic on arbitrary-precision
integers; no floats anywhere.
"""

from fractions import Fraction
from math import gcd


class NotReducedError(ValueError):
    """A fraction was supplied whose numerator and denominator share a factor."""


def _as_fraction(x, q=None) -> Fraction:
    """Coerce (p, q) pairs or Fraction/int inputs, rejecting unreduced pairs.

    Fractions constructed by callers are reduced by design, but a raw
    (p, q) pair is checked so that an unreduced fraction arriving from a
    buggy caller fails loudly instead of being silently normalised.
    """
    if q is not None:
        p = x
        if not (isinstance(p, int) and isinstance(q, int)):
            raise TypeError("numerator and denominator must be integers")
        if q < 1 or p < 1:
            raise ValueError(f"expected a positive fraction, got {p}/{q}")
        if gcd(p, q) != 1:
            raise NotReducedError(f"{p}/{q} is not in lowest terms")
        return Fraction(p, q)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    raise TypeError(f"cannot interpret {x!r} as an exact fraction")


def expand_neg_cf(x, q=None) -> tuple[int, ...]:
    """Canonical negative continued fraction expansion of a rational > 1.

    Accepts a Fraction, an int, or a (numerator, denominator) pair in
    lowest terms.  Returns the unique tuple (a_1, ..., a_s) with all
    a_i >= 2 whose descending fraction equals the input.  The recursion is
    a_1 = ceil(p/q), then continue on 1/(a_1 - p/q).
    """
    val = _as_fraction(x, q)
    if val <= 1:
        raise ValueError(f"expansion requires a value > 1, got {val}")
    p, den = val.numerator, val.denominator
    coeffs = []
    while True:
        a = -(-p // den)  # ceil(p/den)
        coeffs.append(a)
        rem = a * den - p  # a - p/den = rem/den with 0 <= rem < den
        if rem == 0:
            return tuple(coeffs)
        p, den = den, rem


def eval_neg_cf(coeffs) -> Fraction:
    """Exact value of the descending fraction a_1 - 1/(a_2 - 1/(...))."""
    seq = tuple(coeffs)
    if not seq:
        raise ValueError("empty coefficient sequence")
    if any(not isinstance(a, int) or a < 2 for a in seq):
        raise ValueError(f"non-canonical coefficients {seq}: every entry must be an integer >= 2")
    # integer recurrence from the right; in canonical form the intermediate
    # numerator/denominator pairs are automatically coprime
    num, den = seq[-1], 1
    for a in reversed(seq[:-1]):
        num, den = a * num - den, num
    return Fraction(num, den)


def dual_point_rule(coeffs) -> tuple[int, ...]:
    """Riemenschneider dual: the expansion of a/(a-b) given that of a/b.

    Canonical expansions are unique, so the dual is computed by evaluating
    and re-expanding; this is an involution, and [2] is its fixed point.
    """
    val = eval_neg_cf(coeffs)
    a, b = val.numerator, val.denominator
    if not 1 <= b < a:
        raise ValueError(f"point rule needs a value a/b with 1 <= b < a, got {val}")
    return expand_neg_cf(Fraction(a, a - b))


def star_inverse(a: int, b: int) -> int:
    """The unique a* with 0 < a* < b and a*a* == 1 (mod b); requires gcd(a,b)=1, b >= 2."""
    if b < 2:
        raise ValueError(f"modulus must be >= 2, got {b}")
    if gcd(a, b) != 1:
        raise ValueError(f"{a} is not invertible modulo {b}")
    return pow(a % b, -1, b)


def ceil_div(a: int, b: int) -> int:
    """Ceiling of a/b for positive b."""
    if b <= 0:
        raise ValueError("positive denominator required")
    return -(-a // b)


__all__ = [
    "NotReducedError",
    "expand_neg_cf",
    "eval_neg_cf",
    "dual_point_rule",
    "star_inverse",
    "ceil_div",
]
