"""The Ohyama polynomials R_n(zeta) from their bilinear recurrence.

The recurrence is

    2 zeta R_{n+1} R_{n-1} = -R_n R_n'' + (R_n')**2 - R_n R_n' / zeta
                             + 2 (zeta**2 - n) R_n**2,

started from R_0 = 1 and R_1 = zeta**2.  It is solved upward for n >= 2 and
downward for n <= -1, always through an exact division, so every stored entry
comes with a certificate that the quotient was exact.
"""

from __future__ import annotations

import json
import os
import threading

from .laurent import LaurentPoly, derivative, exact_divide

__all__ = [
    "OhyamaTable",
    "recurrence_rhs",
    "compute",
    "verify_recurrence",
    "top_exponent",
    "low_exponent",
    "mirror",
    "default_table",
    "set_default_table",
]

ZETA = LaurentPoly.monomial(1)
_CACHE_VERSION = 1


def recurrence_rhs(R: LaurentPoly, n: int) -> LaurentPoly:
    """Right-hand side of the recurrence for a given ``R = R_n``."""
    dR = derivative(R)
    d2R = derivative(dR)
    R2 = R * R
    return -(R * d2R) + dR * dR - (R * dR).shift(-1) + R2.shift(2) * 2 - R2 * (2 * n)


def top_exponent(n: int) -> int:
    """Observed top exponent ``n(n+3)/2`` of R_n for n >= 0."""
    return n * (n + 3) // 2


def low_exponent(n: int) -> int:
    """Observed lowest exponent ``ceil(3n/2)`` of R_n for n >= 1."""
    return (3 * n + 1) // 2


def mirror(R: LaurentPoly, n: int) -> LaurentPoly:
    """Reflect R_n into the candidate for R_{-n}.

    Uses ``R_{-n}(zeta) = R_n(i zeta) / (i**d zeta**(3n))`` with
    ``d = n(n+3)/2``; exponents of R_n share the parity of ``d`` so the result
    is again rational.
    """
    d = top_exponent(n)
    out = {}
    for k, c in R.coeffs.items():
        sign = -1 if ((d - k) // 2) % 2 else 1
        out[k - 3 * n] = sign * c
    return LaurentPoly(out)


class OhyamaTable:
    """Cache of R_n with optional JSON persistence.

    Parameters
    ----------
    path : str, optional
        JSON file used to load and store computed entries.
    check_degrees : bool
        Verify the observed degree pattern on every new entry.
    """

    def __init__(self, path=None, check_degrees=True):
        self.entries = {0: LaurentPoly.constant(1), 1: ZETA ** 2}
        self.path = path
        self.check_degrees = check_degrees
        self._lock = threading.Lock()
        if path and os.path.exists(path):
            self.load(path)

    @property
    def max_computed_up(self):
        return max(self.entries)

    @property
    def min_computed_down(self):
        return min(self.entries)

    def compute(self, n: int) -> LaurentPoly:
        """Return R_n, extending the table in the needed direction."""
        with self._lock:
            while n > self.max_computed_up:
                m = self.max_computed_up  # solve for R_{m+1}
                rhs = recurrence_rhs(self.entries[m], m)
                new = exact_divide(rhs, self.entries[m - 1].shift(1) * 2)
                self._check(m + 1, new)
                self.entries[m + 1] = new
            while n < self.min_computed_down:
                m = self.min_computed_down  # solve for R_{m-1}
                rhs = recurrence_rhs(self.entries[m], m)
                new = exact_divide(rhs, self.entries[m + 1].shift(1) * 2)
                self.entries[m - 1] = new
            return self.entries[n]

    __getitem__ = compute

    def _check(self, n, R):
        if not self.check_degrees or n < 1:
            return
        if R.degree != top_exponent(n):
            raise ArithmeticError(f"R_{n} has top exponent {R.degree}, expected {top_exponent(n)}")
        if R.valuation != low_exponent(n):
            raise ArithmeticError(f"R_{n} has lowest exponent {R.valuation}, expected {low_exponent(n)}")

    def verify_recurrence(self, n: int) -> bool:
        """Exact check of the recurrence at index ``n`` against the stored neighbours."""
        lhs = (self.compute(n + 1) * self.compute(n - 1)).shift(1) * 2
        return lhs == recurrence_rhs(self.compute(n), n)

    # -- persistence -------------------------------------------------------

    def save(self, path=None):
        path = path or self.path
        if not path:
            raise ValueError("no cache path configured")
        data = {"version": _CACHE_VERSION,
                "entries": {str(k): v.to_json() for k, v in sorted(self.entries.items())}}
        tmp = f"{path}.tmp{os.getpid()}"
        d = os.path.dirname(os.path.abspath(path))
        os.makedirs(d, exist_ok=True)
        with open(tmp, "w") as fh:
            json.dump(data, fh, separators=(",", ":"))
        os.replace(tmp, path)

    def load(self, path):
        with open(path) as fh:
            data = json.load(fh)
        if data.get("version") != _CACHE_VERSION:
            return
        loaded = {int(k): LaurentPoly.from_json(v) for k, v in data["entries"].items()}
        # only accept a contiguous run that contains 0 and 1
        lo, hi = 0, 1
        while lo - 1 in loaded:
            lo -= 1
        while hi + 1 in loaded:
            hi += 1
        for k in range(lo, hi + 1):
            if k in loaded:
                self.entries[k] = loaded[k]


_DEFAULT = None


def default_table() -> OhyamaTable:
    """Process-wide table, persisted to ``$PD7KIT_CACHE`` when that is set."""
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = OhyamaTable(path=os.environ.get("PD7KIT_CACHE"))
    return _DEFAULT


def set_default_table(table: OhyamaTable) -> OhyamaTable:
    """Replace the process-wide table (e.g. to use another cache file)."""
    global _DEFAULT
    _DEFAULT = table
    return table


def compute(n: int) -> LaurentPoly:
    """R_n from the process-wide table."""
    return default_table().compute(n)


def verify_recurrence(n: int) -> bool:
    """Exact recurrence check at ``n`` using the process-wide table."""
    return default_table().verify_recurrence(n)
