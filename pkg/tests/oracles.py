"""Independent reference computations used to freeze [derived] test values.

Nothing here imports the package's spectral code: roots come from
``mpmath.polyroots``, integrals from tanh-sinh quadrature on semicircles in
the ``mu = -i eta`` plane, and the Boutroux constant from bisection (real y)
or ``mpmath.findroot`` (complex y).
"""

import mpmath as mp


def curve_roots(y, c):
    """Roots of ``-mu^3 + mu^2 + c mu - y^2/4`` sorted by real part."""
    r = mp.polyroots([-1, 1, c, -mp.mpf(1) * y * y / 4], maxsteps=200, extraprec=60)
    return sorted(r, key=lambda z: mp.re(z))


def integrand(mu, s1, s2, s3):
    # h_eta d eta = F(mu) d mu with the same principal branches as the package
    return mp.sqrt((mu - s1) / mu) * (mu - s2) / mu * mp.sqrt((mu - s3) / (mu - s2))


def semicircle_integral(a, b, roots):
    """Integral from ``a`` to ``b`` along the half circle on the right of a -> b."""
    m, r = (a + b) / 2, (b - a) / 2

    def f(t):
        mu = m - r * mp.exp(1j * t)
        return integrand(mu, *roots) * (-1j) * r * mp.exp(1j * t)

    return mp.quad(f, [0, mp.pi / 2, mp.pi])


def boutroux_pair(y, c):
    s = curve_roots(y, c)
    return semicircle_integral(s[0], s[1], s), semicircle_integral(s[1], s[2], s)


def c1_real(y, dps=25):
    """Sign scan in c above the double-root value, then bisection on Re I12."""
    with mp.workdps(dps):
        y = mp.mpf(y)
        lo, hi = mp.mpf(-0.5), mp.mpf(2)
        # the double-root value c0 is where the discriminant in c vanishes
        c0 = max(mp.re(z) for z in mp.polyroots([64, 16, 72 * y * y, 16 * y * y - 27 * y ** 4])
                 if abs(mp.im(z)) < 1e-20)
        lo = c0 + mp.mpf(10) ** -8
        f = lambda c: mp.re(boutroux_pair(y, c)[0])
        assert f(lo) < 0 < f(hi)
        for _ in range(60):
            mid = (lo + hi) / 2
            if f(mid) < 0:
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2


def c1_complex(y, c_guess, dps=20):
    """Solve ``Re I12 = Re I23 = 0`` for complex c by multidimensional Newton."""
    with mp.workdps(dps):
        y = mp.mpc(y)

        def F(cr, ci):
            J12, J23 = boutroux_pair(y, mp.mpc(cr, ci))
            return [mp.re(J12), mp.re(J23)]

        sol = mp.findroot(F, (mp.mpf(c_guess.real), mp.mpf(c_guess.imag)), tol=mp.mpf(10) ** -28)
        return complex(sol[0], sol[1])


# -- Ohyama recurrence on plain {exponent: Fraction} dictionaries ----------

from fractions import Fraction  # noqa: E402


def _dmul(a, b):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _dadd(*terms):
    out = {}
    for t in terms:
        for k, v in t.items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def _dscale(a, s, shift=0):
    return {k + shift: v * s for k, v in a.items() if v * s}


def _dder(a):
    return {k - 1: k * v for k, v in a.items() if k}


def _ddiv(num, den):
    """Long division from the top exponent; asserts a zero remainder."""
    num = dict(num)
    top_d = max(den)
    lead = den[top_d]
    q = {}
    while num:
        k = max(num)
        if k - top_d < min(num) - min(den):
            break
        c = Fraction(num[k]) / lead
        q[k - top_d] = c
        num = _dadd(num, _dscale(den, -c, k - top_d))
    assert not num, "inexact division"
    return q


def ohyama_dicts(n_max):
    """R_0 .. R_{n_max} by the bilinear recurrence, as exponent dictionaries."""
    R = {0: {0: Fraction(1)}, 1: {2: Fraction(1)}}
    for n in range(1, n_max):
        r = R[n]
        d1, d2 = _dder(r), _dder(_dder(r))
        rhs = _dadd(_dscale(_dmul(r, d2), -1), _dmul(d1, d1), _dscale(_dmul(r, d1), -1, -1),
                    _dscale(_dmul(r, r), 2, 2), _dscale(_dmul(r, r), -2 * n))
        R[n + 1] = _ddiv(rhs, _dscale(R[n - 1], 2, 1))
    return R
