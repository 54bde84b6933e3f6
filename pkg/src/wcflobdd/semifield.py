"""Scalar domains for weighted decision diagrams.

Edge and factor weights live in a semi-field: a commutative semiring
whose nonzero elements form a group under multiplication. Division by
nonzero weights is what lets path weights be renormalized during
canonicalization, and the absence of additive inverses is never relied
on, so ordinary fields qualify. Three instances are provided:

* exact rationals (``fractions.Fraction``), the reference instance for
  canonicity arguments and textual round-trips;
* floating-point reals;
* floating-point complex numbers, used by the quantum layer.

Floating instances use a rounded *canonical key* for hashing and
equality so that values differing only by accumulated rounding noise
intern to the same node. The rounding width is configurable per
instance and defaults to 10 decimal digits (overridable through the
``WCFLOBDD_ROUNDING_DIGITS`` environment variable).
"""

from __future__ import annotations

import os
import re
from fractions import Fraction

__all__ = [
    "Semifield",
    "RationalSemifield",
    "RealSemifield",
    "ComplexSemifield",
    "Pow2",
    "rational_field",
    "real_field",
    "complex_field",
    "field_by_name",
    "DEFAULT_ROUNDING_DIGITS",
]

DEFAULT_ROUNDING_DIGITS = 10

# Largest exponent for which 2**e is materialized as a Fraction. Above
# this, exact powers of two stay symbolic (see Pow2). 2**65536 is an
# 8 KiB integer; anything near the switchover is still cheap to expand.
_POW2_MATERIALIZE_LIMIT = 1 << 16


class Pow2:
    """Exact power of two with a symbolic exponent.

    The separating function family multiplies edge weights of the form
    2**(2**i); at a thousand variables the largest of them has more
    bits than there are atoms in the observable universe, so the
    rational instance keeps such values as bare exponents. Pow2 only
    ever holds exponents too large to expand (smaller results collapse
    to Fraction via :meth:`make`), so a Pow2 and a Fraction never alias
    the same value and unique-table keys stay consistent.
    """

    __slots__ = ("exponent",)

    def __init__(self, exponent: int):
        self.exponent = exponent

    @staticmethod
    def make(exponent: int):
        if abs(exponent) <= _POW2_MATERIALIZE_LIMIT:
            return Fraction(2) ** exponent
        return Pow2(exponent)

    def __eq__(self, other):
        return isinstance(other, Pow2) and self.exponent == other.exponent

    def __hash__(self):
        return hash(("pow2", self.exponent))

    def __repr__(self):
        return f"Pow2(2**{self.exponent})"


def _log2_exact(f: Fraction):
    """Exponent e with f == 2**e, or None."""
    p, q = f.numerator, f.denominator
    if p <= 0:
        return None
    if q == 1 and p & (p - 1) == 0:
        return p.bit_length() - 1
    if p == 1 and q & (q - 1) == 0:
        return 1 - q.bit_length()
    return None


def _env_digits() -> int:
    raw = os.environ.get("WCFLOBDD_ROUNDING_DIGITS")
    if not raw:
        return DEFAULT_ROUNDING_DIGITS
    try:
        digits = int(raw)
    except ValueError:
        return DEFAULT_ROUNDING_DIGITS
    return digits if digits > 0 else DEFAULT_ROUNDING_DIGITS


class Semifield:
    """Abstract scalar domain.

    Subclasses fix the carrier type and provide arithmetic, canonical
    keys, and a textual form. All diagram code goes through this
    interface; nothing outside this module assumes a concrete carrier.
    """

    name = "abstract"

    zero = None
    one = None
    minus_one = None

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        """Multiplicative inverse. Raises ZeroDivisionError on zero."""
        return self.one / a

    def key(self, a):
        """Hashable canonical key; equal keys mean 'same weight'."""
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return self.key(a) == self.key(self.zero)

    def is_one(self, a) -> bool:
        return self.key(a) == self.key(self.one)

    def abs2(self, a):
        """Squared magnitude of ``a``, as a value of measure_field()."""
        raise NotImplementedError

    def measure_field(self) -> "Semifield":
        """The domain squared magnitudes live in (self unless complex)."""
        return self

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, a) -> str:
        raise NotImplementedError

    def format_rounded(self, a) -> str:
        """Display form rounded to the canonical-key width."""
        return self.format(a)

    # Contract-facing aliases.
    def inverse(self, a):
        return self.inv(a)

    def canonical_key(self, a):
        return self.key(a)

    def __repr__(self):
        return f"<semifield {self.name}>"


class RationalSemifield(Semifield):
    """Exact rationals (plus symbolic huge powers of two, see Pow2).

    Canonical keys are the normalized fractions themselves; a Pow2
    value keys on its exponent, which cannot collide because values
    small enough to expand are always held as Fractions.
    """

    name = "rational"

    zero = Fraction(0)
    one = Fraction(1)
    minus_one = Fraction(-1)

    def add(self, a, b):
        if isinstance(a, Pow2) or isinstance(b, Pow2):
            if isinstance(a, Pow2) and isinstance(b, Pow2):
                if a.exponent == b.exponent:
                    return Pow2.make(a.exponent + 1)
                raise OverflowError("sum of huge powers of two is not exact")
            if isinstance(b, Pow2):
                a, b = b, a
            if b == 0:
                return a
            raise OverflowError("sum involving a huge power of two")
        return a + b

    def mul(self, a, b):
        if isinstance(a, Pow2) or isinstance(b, Pow2):
            if isinstance(a, Pow2) and isinstance(b, Pow2):
                return Pow2.make(a.exponent + b.exponent)
            if isinstance(b, Pow2):
                a, b = b, a
            if b == 0:
                return Fraction(0)
            e = _log2_exact(b)
            if e is None:
                raise OverflowError(
                    "product with a huge power of two is unrepresentable")
            return Pow2.make(a.exponent + e)
        return a * b

    def inv(self, a):
        if isinstance(a, Pow2):
            return Pow2.make(-a.exponent)
        return self.one / a

    def key(self, a):
        return a

    def is_zero(self, a) -> bool:
        return not isinstance(a, Pow2) and a == 0

    def is_one(self, a) -> bool:
        return not isinstance(a, Pow2) and a == 1

    def abs2(self, a):
        return self.mul(a, a)

    def parse(self, text: str):
        if "^" in text:
            base, _, expo = text.partition("^")
            if base.strip() != "2":
                raise ValueError(f"bad rational literal: {text!r}")
            return Pow2.make(int(expo))
        return Fraction(text)

    def format(self, a) -> str:
        if isinstance(a, Pow2):
            return f"2^{a.exponent}"
        # Materialized powers of two can run to thousands of digits;
        # print those with the same shorthand parse() accepts.
        e = _log2_exact(a)
        if e is not None and abs(e) > 256:
            return f"2^{e}"
        return str(a)


class RealSemifield(Semifield):
    """Floating-point reals with rounded canonical keys."""

    name = "real"

    zero = 0.0
    one = 1.0
    minus_one = -1.0

    def __init__(self, rounding_digits: int | None = None):
        self.rounding_digits = (
            _env_digits() if rounding_digits is None else rounding_digits
        )

    def key(self, a):
        r = round(float(a), self.rounding_digits)
        return r + 0.0  # merge -0.0 with 0.0

    def abs2(self, a):
        return float(a) * float(a)

    def parse(self, text: str):
        return float(text)

    def format(self, a) -> str:
        return repr(float(a))

    def format_rounded(self, a) -> str:
        return "%.*g" % (self.rounding_digits, float(a))


_COMPLEX_RE = re.compile(
    r"""^\s*
        (?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?
        (?P<im>[+-](?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)?
        (?P<i>i)?
        \s*$""",
    re.VERBOSE,
)


class ComplexSemifield(Semifield):
    """Floating-point complex numbers, written ``a+bi``."""

    name = "complex"

    zero = complex(0)
    one = complex(1)
    minus_one = complex(-1)

    def __init__(self, rounding_digits: int | None = None):
        self.rounding_digits = (
            _env_digits() if rounding_digits is None else rounding_digits
        )

    def _round1(self, x: float) -> float:
        return round(x, self.rounding_digits) + 0.0

    def key(self, a):
        c = complex(a)
        return (self._round1(c.real), self._round1(c.imag))

    def abs2(self, a):
        c = complex(a)
        return c.real * c.real + c.imag * c.imag

    def measure_field(self) -> Semifield:
        return real_field(self.rounding_digits)

    def parse(self, text: str):
        t = text.strip().replace(" ", "")
        if t in ("i", "+i"):
            return complex(0, 1)
        if t == "-i":
            return complex(0, -1)
        if t.endswith("i"):
            m = _COMPLEX_RE.match(t)
            if m is None or m.group("i") is None:
                raise ValueError(f"bad complex literal: {text!r}")
            re_part = m.group("re")
            im_part = m.group("im")
            if im_part is None:
                # pure imaginary, e.g. "2i" or "-3.5i"
                return complex(0.0, float(re_part))
            if im_part in ("+", "-"):
                im_part += "1"
            return complex(float(re_part or 0.0), float(im_part))
        return complex(float(t), 0.0)

    def format(self, a) -> str:
        c = complex(a)
        if c.imag == 0:
            return repr(c.real)
        if c.real == 0:
            return f"{c.imag!r}i"
        sign = "+" if c.imag >= 0 else ""
        return f"{c.real!r}{sign}{c.imag!r}i"

    def format_rounded(self, a) -> str:
        c = complex(a)
        if self._round1(c.imag) == 0.0:
            return "%.*g" % (self.rounding_digits, c.real)
        if self._round1(c.real) == 0.0:
            return "%.*gi" % (self.rounding_digits, c.imag)
        sign = "+" if c.imag >= 0 else ""
        return "%.*g%s%.*gi" % (
            self.rounding_digits,
            c.real,
            sign,
            self.rounding_digits,
            c.imag,
        )


_RATIONAL = RationalSemifield()
_REAL_CACHE: dict[int, RealSemifield] = {}
_COMPLEX_CACHE: dict[int, ComplexSemifield] = {}


def rational_field() -> RationalSemifield:
    return _RATIONAL


def real_field(rounding_digits: int | None = None) -> RealSemifield:
    digits = _env_digits() if rounding_digits is None else rounding_digits
    if digits not in _REAL_CACHE:
        _REAL_CACHE[digits] = RealSemifield(digits)
    return _REAL_CACHE[digits]


def complex_field(rounding_digits: int | None = None) -> ComplexSemifield:
    digits = _env_digits() if rounding_digits is None else rounding_digits
    if digits not in _COMPLEX_CACHE:
        _COMPLEX_CACHE[digits] = ComplexSemifield(digits)
    return _COMPLEX_CACHE[digits]


def field_by_name(name: str, rounding_digits: int | None = None) -> Semifield:
    if name == "rational":
        return rational_field()
    if name == "real" or name == "float":
        return real_field(rounding_digits)
    if name == "complex":
        return complex_field(rounding_digits)
    raise ValueError(f"unknown semifield instance: {name!r}")
