"""Exact rational arithmetic helpers.

Rat is gmpy2.mpq when gmpy2 is importable and fractions.Fraction
otherwise; both expose .numerator/.denominator and interoperate with
Python ints, which is all the rest of the package relies on.
"""

import math

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as Rat

R0 = Rat(0)
R1 = Rat(1)

# Rational surrogate slightly above ln 4 = 1.38629436...; used wherever an
# exact comparison against the ln 4 bound is wanted.
LN4_UPPER = Rat(1386295, 1000000)

# Classical lower bound footnote constant: a k-restricted relaxation can be
# off by a factor 1 + 1/floor(log2 k); kept here for documentation and the
# bench subcommand, never used in a correctness check.
def k_restriction_loss(k):
    if k < 2:
        raise ValueError("needs k >= 2")
    return R1 + Rat(1, k.bit_length() - 1)


_HARMONIC = [R0]


def harmonic(n):
    """H(n) = 1 + 1/2 + ... + 1/n as an exact rational; H(0) = 0."""
    if n < 0:
        raise ValueError("harmonic number of negative index")
    while len(_HARMONIC) <= n:
        k = len(_HARMONIC)
        _HARMONIC.append(_HARMONIC[-1] + Rat(1, k))
    return _HARMONIC[n]


def lcm_denominators(values):
    """lcm of the denominators of an iterable of rationals (>= 1)."""
    n = 1
    for v in values:
        n = math.lcm(n, int(Rat(v).denominator))
    return n


def rat_to_json(q):
    q = Rat(q)
    return {
        "num": int(q.numerator),
        "den": int(q.denominator),
        "decimal": float(q.numerator) / float(q.denominator),
    }


def rat_from_json(obj):
    if isinstance(obj, dict):
        return Rat(int(obj["num"]), int(obj["den"]))
    if isinstance(obj, int):
        return Rat(obj)
    if isinstance(obj, str):
        return Rat(obj)
    raise ValueError("cannot parse rational from %r" % (obj,))
