"""Exact Laurent polynomials over the rationals.

A :class:`LaurentPoly` is stored as ``zeta**low * sum(num[k] * zeta**k) / den``
with integer numerators and one common positive denominator.  This keeps the
hot loops of the recurrence in integer arithmetic: products are formed by
Kronecker substitution (pack the coefficient vector into one big integer,
multiply, unpack) and exact quotients by one big integer division followed by
a multiply-back certificate.

The objects are immutable.  Coefficients are only converted to floating point
(or to mpmath numbers) when a numerical evaluation is requested.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import reduce
from numbers import Rational

import mpmath
from gmpy2 import mpz

from .errors import NonExactDivision, PoleAtZero

__all__ = [
    "LaurentPoly",
    "add",
    "mul",
    "derivative",
    "exact_divide",
    "eval_complex",
]

_SCHOOLBOOK_CUTOFF = 24  # below this length use plain convolution
_PACK_LEAF = 16


# ---------------------------------------------------------------------------
# integer vector kernels
# ---------------------------------------------------------------------------

def _maxbits(v):
    return max((abs(int(c)).bit_length() for c in v), default=0)


def _pack(v, bits):
    """Evaluate the integer vector ``v`` at ``2**bits`` (divide and conquer)."""
    n = len(v)
    if n <= _PACK_LEAF:
        x = mpz(0)
        for c in reversed(v):
            x = (x << bits) + c
        return x
    h = n // 2
    return _pack(v[:h], bits) + (_pack(v[h:], bits) << (bits * h))


def _unpack(x, bits, n):
    """Inverse of :func:`_pack` for balanced digits ``|d| < 2**(bits-1)``.

    Returns ``None`` if ``x`` does not fit in ``n`` digits.
    """
    out = [0] * n
    rest = _unpack_into(mpz(x), bits, 0, n, out)
    return out if rest == 0 else None


def _unpack_into(x, bits, lo, n, out):
    if n <= _PACK_LEAF:
        full = mpz(1) << bits
        half = full >> 1
        mask = full - 1
        for i in range(lo, lo + n):
            d = x & mask
            if d >= half:
                d -= full
            out[i] = int(d)
            x = (x - d) >> bits
        return x
    h = n // 2
    m = bits * h
    full = mpz(1) << m
    low_part = x & (full - 1)
    if low_part >= (full >> 1):
        low_part -= full
    r = _unpack_into(low_part, bits, lo, h, out)
    if r != 0:
        return r
    return _unpack_into((x - low_part) >> m, bits, lo + h, n - h, out)


def _conv(a, b):
    """Exact integer convolution of two dense vectors."""
    if not a or not b:
        return []
    if min(len(a), len(b)) <= _SCHOOLBOOK_CUTOFF:
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return out
    bits = _maxbits(a) + _maxbits(b) + min(len(a), len(b)).bit_length() + 2
    prod = _pack(a, bits) * _pack(b, bits)
    out = _unpack(prod, bits, len(a) + len(b) - 1)
    assert out is not None
    return out


def _poly_divexact(num, den):
    """Exact quotient of integer polynomials (ascending coefficient lists).

    Both inputs are assumed trimmed with nonzero constant terms.  Raises
    :class:`NonExactDivision` when ``den`` does not divide ``num`` over the
    integers.  Callers make ``den`` primitive so that, by Gauss's lemma,
    integer divisibility is equivalent to rational divisibility.
    """
    m = len(num) - len(den) + 1
    if m <= 0:
        raise NonExactDivision("divisor has larger degree than dividend")
    if len(den) == 1:
        d = den[0]
        q = []
        for c in num:
            qq, r = divmod(c, d)
            if r:
                raise NonExactDivision("constant divisor does not divide")
            q.append(qq)
        return q
    # cheap necessary conditions on the extreme coefficients
    if num[0] % den[0] or num[-1] % den[-1]:
        raise NonExactDivision("extreme coefficients are not divisible")
    # Mignotte-type bound on quotient coefficients
    norm = math.isqrt(sum(c * c for c in num)) + 1
    limit = norm.bit_length() + m + 2
    bits = min(_maxbits(num) + 8, limit) + 2
    while True:
        base = max(bits, _maxbits(den) + 2)
        X = _pack(num, base)
        Y = _pack(den, base)
        qv, r = divmod(X, Y)
        if r != 0:
            # num(B) = q(B) den(B) would force a zero remainder
            raise NonExactDivision("remainder is nonzero")
        q = _unpack(qv, base, m)
        if q is not None and _conv(q, den) == list(num):
            return q
        if base >= limit + 2:
            raise NonExactDivision("quotient certificate failed")
        bits = min(2 * base, limit + 2)


def _content(v):
    return reduce(math.gcd, v, 0)


def _gcd_with(v, g):
    """gcd of ``g`` and all entries of ``v`` with an early exit at 1."""
    for c in v:
        if g == 1:
            break
        g = math.gcd(g, c)
    return g


def _stride_of(v):
    g = 0
    for i, c in enumerate(v):
        if c:
            g = math.gcd(g, i)
            if g == 1:
                break
    return max(g, 1)


# ---------------------------------------------------------------------------
# the polynomial type
# ---------------------------------------------------------------------------

def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)) or type(c).__name__ == "mpz":
        return Fraction(int(c) if not isinstance(c, Rational) else c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"coefficient {c!r} is not an exact rational")


class LaurentPoly:
    """Laurent polynomial in one variable with exact rational coefficients.

    Parameters
    ----------
    coeffs : mapping, optional
        ``{exponent: coefficient}`` with integer, :class:`fractions.Fraction`
        or decimal-string coefficients.  Zero entries are dropped.
    var : str
        Display name of the variable.

    Examples
    --------
    >>> z = LaurentPoly.monomial(1)
    >>> (z**5 - z**3) * z**2
    LaurentPoly('zeta^7 - zeta^5')
    """

    __slots__ = ("_low", "_num", "_den", "var", "_mp_cache", "_stride")

    def __init__(self, coeffs=None, var="zeta"):
        coeffs = {} if coeffs is None else dict(coeffs)
        fr = {int(k): _as_fraction(v) for k, v in coeffs.items()}
        fr = {k: v for k, v in fr.items() if v != 0}
        if not fr:
            self._set(0, (), 1, var)
            return
        lo, hi = min(fr), max(fr)
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (v.denominator for v in fr.values()), 1)
        num = [0] * (hi - lo + 1)
        for k, v in fr.items():
            num[k - lo] = v.numerator * (den // v.denominator)
        self._set(lo, num, den, var, normalize=True)

    def _set(self, low, num, den, var, normalize=False):
        if normalize:
            num = list(num)
            i = 0
            while i < len(num) and num[i] == 0:
                i += 1
            j = len(num)
            while j > i and num[j - 1] == 0:
                j -= 1
            num = num[i:j]
            low += i
            if not num:
                low, den = 0, 1
            else:
                if den < 0:
                    num, den = [-c for c in num], -den
                g = _gcd_with(num, den) if den != 1 else 1
                if g > 1:
                    num = [c // g for c in num]
                    den //= g
        self._low = int(low)
        self._num = tuple(int(c) for c in num)
        self._den = int(den)
        self.var = var
        self._mp_cache = {}
        self._stride = None

    @classmethod
    def _raw(cls, low, num, den=1, var="zeta"):
        obj = cls.__new__(cls)
        obj._set(low, num, den, var, normalize=True)
        return obj

    @classmethod
    def monomial(cls, k, coeff=1, var="zeta"):
        """Return ``coeff * var**k``."""
        return cls({k: coeff}, var=var)

    @classmethod
    def constant(cls, c, var="zeta"):
        return cls({0: c}, var=var)

    # -- inspection --------------------------------------------------------

    @property
    def coeffs(self):
        """Dictionary ``{exponent: Fraction}`` of the nonzero coefficients."""
        return {self._low + i: Fraction(c, self._den) for i, c in enumerate(self._num) if c}

    def items(self):
        return sorted(self.coeffs.items())

    def is_zero(self):
        return not self._num

    @property
    def valuation(self):
        """Lowest exponent present (0 for the zero polynomial)."""
        return self._low

    @property
    def degree(self):
        """Highest exponent present (0 for the zero polynomial)."""
        return self._low + len(self._num) - 1 if self._num else 0

    def __len__(self):
        return sum(1 for c in self._num if c)

    def coefficient(self, k):
        i = k - self._low
        if 0 <= i < len(self._num):
            return Fraction(self._num[i], self._den)
        return Fraction(0)

    def max_coefficient_bits(self):
        """Bit length of the largest numerator (size indicator)."""
        return _maxbits(self._num)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(other, var=self.var)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self._low, self._num, self._den) == (other._low, other._num, other._den)

    def __hash__(self):
        return hash((self._low, self._num, self._den))

    def __neg__(self):
        return LaurentPoly._raw(self._low, [-c for c in self._num], self._den, self.var)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return add(other, -self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return LaurentPoly._raw(self._low, [c * other.numerator for c in self._num],
                                    self._den * other.denominator, self.var)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            if isinstance(k, int) and len(self) == 1:
                (e, c), = self.coeffs.items()
                return LaurentPoly({e * k: c ** k}, var=self.var)
            raise ValueError("only non-negative integer powers of non-monomials")
        out = LaurentPoly.constant(1, var=self.var)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of a Laurent polynomial by zero")
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return exact_divide(self, other)

    def shift(self, k):
        """Multiply by ``var**k``."""
        if not self._num:
            return self
        return LaurentPoly._raw(self._low + k, self._num, self._den, self.var)

    def derivative(self):
        return derivative(self)

    # -- evaluation --------------------------------------------------------

    def _exponent_stride(self):
        """gcd of the gaps between exponents carrying nonzero coefficients."""
        if self._stride is None:
            self._stride = _stride_of(self._num)
        return self._stride

    def __call__(self, zeta):
        return eval_complex(self, zeta)

    def log10_abs_sum(self, r):
        """``log10(sum |a_k| r**k)``, the natural size scale at ``|zeta| = r``."""
        if not self._num:
            return -math.inf
        lr = math.log10(r)
        logs = [_log10_int(abs(c)) + (self._low + i) * lr for i, c in enumerate(self._num) if c]
        m = max(logs)
        return m + math.log10(sum(10.0 ** (v - m) for v in logs)) - _log10_int(self._den)

    def _mp_coeffs(self, prec):
        hit = self._mp_cache.get(prec)
        if hit is None:
            g = self._exponent_stride()
            with mpmath.workprec(prec):
                d = mpmath.mpf(self._den)
                hit = [mpmath.mpf(c) / d for c in self._num[::g]]
            self._mp_cache[prec] = hit
        return hit

    def eval_mp(self, zeta, dps):
        """Evaluate with mpmath at ``dps`` decimal digits (context is restored)."""
        if not self._num:
            return mpmath.mpc(0)
        if zeta == 0 and self._low < 0:
            raise PoleAtZero("negative powers evaluated at zeta = 0")
        with mpmath.workdps(dps):
            prec = mpmath.mp.prec
            cs = self._mp_coeffs(prec)
            z = mpmath.mpc(zeta)
            w = z ** self._exponent_stride()
            acc = mpmath.mpc(0)
            for c in reversed(cs):
                acc = acc * w + c
            return acc * z ** self._low

    def eval_accurate(self, zeta, digits=20, max_dps=4000):
        """Evaluate so that about ``digits`` significant digits are correct.

        The working precision is raised until it covers the cancellation
        ``log10(sum |a_k||zeta|^k) - log10|value|``.  Returns an ``mpc``.
        """
        if not self._num:
            return mpmath.mpc(0)
        r = abs(complex(zeta))
        if r == 0:
            if self._low < 0:
                raise PoleAtZero("negative powers evaluated at zeta = 0")
            return mpmath.mpc(self.coefficient(0).numerator) / self.coefficient(0).denominator
        logS = self.log10_abs_sum(r)
        dps = digits + 10 + max(0, math.ceil(logS))
        while True:
            v = self.eval_mp(zeta, dps)
            if v == 0:
                need = 2 * dps
            else:
                need = digits + 10 + max(0.0, logS - float(mpmath.log10(abs(v))))
            if dps >= need:
                return v
            if dps >= max_dps:
                return v  # zero to working precision
            dps = min(max_dps, math.ceil(need) + 10)

    # -- serialization -----------------------------------------------------

    def to_json(self):
        """List of ``{"exp", "num", "den"}`` records sorted by exponent."""
        return [{"exp": k, "num": str(v.numerator), "den": str(v.denominator)}
                for k, v in self.items()]

    @classmethod
    def from_json(cls, records, var="zeta"):
        return cls({int(r["exp"]): Fraction(int(r["num"]), int(r["den"])) for r in records}, var=var)

    def __repr__(self):
        return f"LaurentPoly('{self.pretty()}')"

    def pretty(self, max_terms=None):
        if not self._num:
            return "0"
        terms = []
        items = sorted(self.items(), reverse=True)
        for k, c in items[:max_terms] if max_terms else items:
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
            if mono and a == 1:
                body = mono
            elif mono:
                body = f"{a}*{mono}"
            else:
                body = str(a)
            terms.append((sign, body))
        if max_terms and len(items) > max_terms:
            terms.append(("+", "..."))
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s


def _log10_int(n):
    n = int(n)
    if n < 1 << 1000:
        return math.log10(n)
    b = n.bit_length() - 60
    return math.log10(n >> b) + b * math.log10(2)


# ---------------------------------------------------------------------------
# module level operations
# ---------------------------------------------------------------------------

def add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Exact sum ``a + b``."""
    if not a._num:
        return b
    if not b._num:
        return a
    den = a._den * b._den // math.gcd(a._den, b._den)
    fa, fb = den // a._den, den // b._den
    low = min(a._low, b._low)
    top = max(a.degree, b.degree)
    out = [0] * (top - low + 1)
    for i, c in enumerate(a._num):
        out[a._low - low + i] += c * fa
    for i, c in enumerate(b._num):
        out[b._low - low + i] += c * fb
    return LaurentPoly._raw(low, out, den, a.var)


def mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Exact product ``a * b``."""
    if not a._num or not b._num:
        return LaurentPoly(var=a.var)
    g = math.gcd(a._exponent_stride(), b._exponent_stride())
    if g > 1:
        # sparse in a regular pattern (R_n only has every other power)
        c = _conv(a._num[::g], b._num[::g])
        full = [0] * ((len(c) - 1) * g + 1)
        full[::g] = c
        return LaurentPoly._raw(a._low + b._low, full, a._den * b._den, a.var)
    return LaurentPoly._raw(a._low + b._low, _conv(a._num, b._num), a._den * b._den, a.var)


def derivative(a: LaurentPoly) -> LaurentPoly:
    """Formal derivative, ``d/dzeta zeta**k = k zeta**(k-1)`` for all integer k."""
    if not a._num:
        return a
    return LaurentPoly._raw(a._low - 1, [(a._low + i) * c for i, c in enumerate(a._num)], a._den, a.var)


def exact_divide(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Return ``q`` with ``q * den == num`` exactly.

    Raises
    ------
    ZeroDivisionError
        If ``den`` is the zero polynomial.
    NonExactDivision
        If ``den`` does not divide ``num`` in the Laurent ring.
    """
    if not den._num:
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if not num._num:
        return LaurentPoly(var=num.var)
    g = _content(den._num)
    prim = [c // g for c in den._num]
    if prim[-1] < 0:
        prim = [-c for c in prim]
        g = -g
    # num / den = (N/nd) / (g * P / dd) = (N / P) * dd / (nd * g)
    q = _poly_divexact(list(num._num), prim)
    out = LaurentPoly._raw(num._low - den._low, q, num._den * g, num.var)
    if den._den != 1:
        out = out * den._den
    return out


def eval_complex(a: LaurentPoly, zeta: complex) -> complex:
    """Evaluate ``a`` at a complex point.

    Positive and negative parts are evaluated by Horner's rule in double
    precision.  When the coefficients do not fit in a double, or the sum
    cancels badly, the value is computed with :meth:`LaurentPoly.eval_accurate`
    and rounded.

    Raises
    ------
    PoleAtZero
        If ``zeta == 0`` and ``a`` has negative exponents.
    """
    zeta = complex(zeta)
    if not a._num:
        return 0j
    if zeta == 0:
        if a._low < 0:
            raise PoleAtZero("negative powers evaluated at zeta = 0")
        return complex(a.coefficient(0))
    if a.max_coefficient_bits() - a._den.bit_length() > 900:
        return complex(a.eval_accurate(zeta, digits=17))
    g = a._exponent_stride()
    cs = [c / a._den for c in a._num[::g]]
    w = zeta ** g
    acc = 0j
    scale = 0.0
    aw = abs(w)
    for c in reversed(cs):
        acc = acc * w + c
        scale = scale * aw + abs(c)
    val = acc * zeta ** a._low
    # fall back when more than ~6 digits were lost to cancellation
    if abs(acc) < 1e-6 * scale:
        return complex(a.eval_accurate(zeta, digits=17))
    if not cmath.isfinite(val):
        return complex(a.eval_accurate(zeta, digits=17))
    return val
