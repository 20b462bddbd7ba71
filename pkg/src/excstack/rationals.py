"""Exact rational scalars.

gmpy2.mpq is used when available (much faster than fractions.Fraction);
both store reduced fractions with positive denominator, which is the
canonical form everything downstream relies on.
"""

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as QQ

QQ0 = QQ(0)
QQ1 = QQ(1)


def qq(value, den=None):
    "Coerce ints, strings like '2/3', or rationals to the scalar type."
    if den is not None:
        return QQ(value, den)
    if isinstance(value, str):
        if "/" in value:
            num, d = value.split("/", 1)
            return QQ(int(num), int(d))
        return QQ(int(value))
    return QQ(value)

