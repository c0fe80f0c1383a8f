"""Complete elliptic integrals K(m) and E(m) for all real parameters.

Both functions are evaluated through Carlson symmetric integrals R_F and R_D
with the duplication algorithm, carried out in complex arithmetic so that the
analytic continuation of E to m > 1 comes out of the same code path:

    K(m) = R_F(0, 1-m, 1)
    E(m) = R_F(0, 1-m, 1) - (m/3) R_D(0, 1-m, 1)

For m > 1 the argument 1-m sits on the negative real axis and the principal
square root sqrt(-x + 0j) = +i sqrt(x) selects the branch with Im E(m) > 0,
i.e. sqrt of a negative radicand is taken as +i sqrt|.|.  That convention is
pinned down by cross-validation against direct quadrature of the defining
integrals (see the test suite); flipping it would flip the sign of every
Im E appearing downstream.
"""

from __future__ import annotations

import cmath
import math

from .errors import NumericsError, PoleError, DomainError

_REL_TOL = 1e-15
_MAX_ITER = 100


def _carlson_rf(x: complex, y: complex, z: complex) -> complex:
    """Carlson R_F by duplication, complex principal branch."""
    for _ in range(_MAX_ITER):
        sx, sy, sz = cmath.sqrt(x), cmath.sqrt(y), cmath.sqrt(z)
        lam = sx * sy + sy * sz + sz * sx
        x, y, z = (x + lam) / 4.0, (y + lam) / 4.0, (z + lam) / 4.0
        mu = (x + y + z) / 3.0
        if max(abs(x - mu), abs(y - mu), abs(z - mu)) < _REL_TOL * abs(mu):
            break
    else:
        raise NumericsError("Carlson R_F duplication did not converge in 100 iterations")
    big_x = 1.0 - x / mu
    big_y = 1.0 - y / mu
    big_z = -(big_x + big_y)
    e2 = big_x * big_y - big_z * big_z
    e3 = big_x * big_y * big_z
    series = 1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0
    return series / cmath.sqrt(mu)


def _carlson_rd(x: complex, y: complex, z: complex) -> complex:
    """Carlson R_D by duplication, complex principal branch."""
    acc = 0.0 + 0.0j
    fac = 1.0
    for _ in range(_MAX_ITER):
        sx, sy, sz = cmath.sqrt(x), cmath.sqrt(y), cmath.sqrt(z)
        lam = sx * sy + sy * sz + sz * sx
        acc += fac / (sz * (z + lam))
        fac *= 0.25
        x, y, z = (x + lam) / 4.0, (y + lam) / 4.0, (z + lam) / 4.0
        mu = (x + y + 3.0 * z) / 5.0
        if max(abs(x - mu), abs(y - mu), abs(z - mu)) < _REL_TOL * abs(mu):
            break
    else:
        raise NumericsError("Carlson R_D duplication did not converge in 100 iterations")
    big_x = (mu - x) / mu
    big_y = (mu - y) / mu
    big_z = -(big_x + big_y) / 3.0
    e2 = big_x * big_y - 6.0 * big_z * big_z
    e3 = (3.0 * big_x * big_y - 8.0 * big_z * big_z) * big_z
    e4 = 3.0 * (big_x * big_y - big_z * big_z) * big_z * big_z
    e5 = big_x * big_y * big_z * big_z * big_z
    series = (1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
              - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0)
    return 3.0 * acc + fac * series / (mu * cmath.sqrt(mu))


def elliptic_K(m: float) -> complex:
    """Complete elliptic integral of the first kind, parameter convention.

    K(m) = int_0^{pi/2} dphi / sqrt(1 - m sin^2 phi).  Real and strictly
    decreasing for m < 1; diverges logarithmically at m = 1.  Parameters
    m > 1 are rejected (nothing downstream needs that continuation).
    """
    m = float(m)
    if m == 1.0:
        raise PoleError("K(m) diverges at m = 1")
    if m > 1.0:
        raise DomainError(f"K(m) is not supported for m > 1 (got m = {m})")
    if m == 0.0:
        return complex(math.pi / 2.0)
    return _carlson_rf(complex(0.0), complex(1.0 - m), complex(1.0))


def elliptic_E(m: float) -> complex:
    """Complete elliptic integral of the second kind, parameter convention.

    E(m) = int_0^{pi/2} dphi sqrt(1 - m sin^2 phi), finite for every real m.
    For m <= 1 the result is real; for m > 1 it acquires a positive imaginary
    part Im E(m) = int over the region 1 - m sin^2 phi < 0 of sqrt(m sin^2
    phi - 1), per the +i branch convention in the module docstring.
    """
    m = float(m)
    if m == 0.0:
        return complex(math.pi / 2.0)
    if m == 1.0:
        # R_F and R_D diverge individually here; the integral itself is 1.
        return complex(1.0)
    y = complex(1.0 - m)
    return _carlson_rf(complex(0.0), y, complex(1.0)) - (m / 3.0) * _carlson_rd(complex(0.0), y, complex(1.0))
