"""Exact rational coefficients.

gmpy2's mpq is used when available (much faster on the big elimination
runs); fractions.Fraction is a drop-in fallback.
"""

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover
    from fractions import Fraction as QQ

ZERO = QQ(0)
ONE = QQ(1)
HALF = QQ(1, 2)


def rat(p, q=1):
    """Build an exact rational from integers or a 'p/q' string."""
    if isinstance(p, str):
        if "/" in p:
            num, den = p.split("/", 1)
            return QQ(int(num), int(den))
        return QQ(int(p))
    return QQ(p, q)


def rat_str(x) -> str:
    """Serialize a rational as 'p' or 'p/q' (exactness survives JSON)."""
    n, d = x.numerator, x.denominator
    return f"{n}/{d}" if d != 1 else f"{n}"
