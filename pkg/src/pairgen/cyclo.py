"""Exact arithmetic in cyclotomic fields Q(zeta_n).

A value is stored canonically: a rational polynomial in zeta_n reduced
modulo the n-th cyclotomic polynomial, with the conductor n minimized
(every maximal proper divisor n/p is tried until none admits an exact
re-expression).  Canonical forms are faithful, so equality is tuple
equality and rationals are exactly the conductor-1 values.

Text codec: a sum of terms ``c*E(n)^k`` with exact rational c, e.g.
``-E(5)^2-E(5)^3`` or ``1/2*E(8)^3-2``.  ``parse_cyclotomic`` and ``str``
are inverse bijections on canonical forms.
"""

from __future__ import annotations

import math
import re
import threading
from fractions import Fraction
from typing import Sequence

MAX_CONDUCTOR = 1 << 16

__all__ = [
    "MAX_CONDUCTOR",
    "CyclotomicNumber",
    "E",
    "from_rational",
    "add",
    "mul",
    "conjugate",
    "is_rational",
    "to_rational",
    "embed",
    "parse_cyclotomic",
    "cyclotomic_polynomial",
]

_ZERO = Fraction(0)

# ---------------------------------------------------------------------------
# Integer cyclotomic polynomials Phi_n, low-to-high coefficient tuples.
# Computed by exact division of x^n - 1 by all lower Phi_d (d | n), and
# memoized; the cache is read-mostly and guarded by a lock on writes.
# ---------------------------------------------------------------------------

_PHI_CACHE: dict[int, tuple[int, ...]] = {1: (-1, 1)}
_PHI_LOCK = threading.Lock()


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _divexact_int(num: list[int], den: Sequence[int]) -> list[int]:
    """Exact division of integer polynomials; den must be monic."""
    num = list(num)
    dd = len(den) - 1
    q = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            q[i - dd] = c
            for t in range(dd + 1):
                num[i - dd + t] -= c * den[t]
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return q


def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, low-to-high; Phi_n is monic of degree phi(n)."""
    if n < 1:
        raise ValueError("conductor must be a positive integer")
    if n > MAX_CONDUCTOR:
        raise ValueError(f"conductor {n} exceeds the cap {MAX_CONDUCTOR}")
    got = _PHI_CACHE.get(n)
    if got is not None:
        return got
    with _PHI_LOCK:
        for d in _divisors(n):
            if d in _PHI_CACHE:
                continue
            poly = [-1] + [0] * (d - 1) + [1]  # x^d - 1
            for e in _divisors(d):
                if e < d:
                    poly = _divexact_int(poly, _PHI_CACHE[e])
            _PHI_CACHE[d] = tuple(poly)
        return _PHI_CACHE[n]


def _phi_degree(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


# ---------------------------------------------------------------------------
# Rational polynomial helpers (lists of Fractions, low-to-high).
# ---------------------------------------------------------------------------


def _strip(coeffs: list[Fraction]) -> list[Fraction]:
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _reduce(coeffs: list[Fraction], n: int) -> list[Fraction]:
    """Remainder of the polynomial modulo Phi_n."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    out = list(coeffs)
    for i in range(len(out) - 1, deg - 1, -1):
        c = out[i]
        if c:
            out[i] = _ZERO
            for t in range(deg):
                if phi[t]:
                    out[i - deg + t] -= c * phi[t]
    del out[deg:]
    return _strip(out)


def _galois(coeffs: Sequence[Fraction], n: int, k: int) -> list[Fraction]:
    """Image under zeta -> zeta^k (gcd(k, n) = 1), reduced mod Phi_n."""
    out = [_ZERO] * n
    for j, c in enumerate(coeffs):
        if c:
            out[(j * k) % n] += c
    return _reduce(out, n)


def _embed_raw(coeffs: Sequence[Fraction], n: int, m: int) -> list[Fraction]:
    """Re-express a conductor-n polynomial at conductor m (n | m)."""
    step = m // n
    out = [_ZERO] * m
    for j, c in enumerate(coeffs):
        if c:
            out[j * step] += c
    return _reduce(out, m)


def _primitive_root(p: int) -> int:
    factors = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ArithmeticError(f"no primitive root modulo {p}")


def _solve_subfield(coeffs: Sequence[Fraction], n: int, p: int,
                    d: int) -> list[Fraction] | None:
    """Rewrite a conductor-n value in powers of zeta_n^p = zeta_d, if possible.

    Solves the exact linear system over the basis 1, zeta_d, ...,
    zeta_d^(phi(d)-1), each embedded at conductor n.
    """
    rows = _phi_degree(n)
    cols = _phi_degree(d)
    mat = []
    for s in range(cols):
        col = _embed_raw([_ZERO] * s + [Fraction(1)], d, n)
        mat.append(col + [_ZERO] * (rows - len(col)))
    target = list(coeffs) + [_ZERO] * (rows - len(coeffs))
    # Gaussian elimination on the transposed (rows x cols) system.
    aug = [[mat[s][r] for s in range(cols)] + [target[r]] for r in range(rows)]
    piv_rows = []
    r = 0
    for c in range(cols):
        sel = next((i for i in range(r, rows) if aug[i][c]), None)
        if sel is None:
            continue
        aug[r], aug[sel] = aug[sel], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        piv_rows.append(c)
        r += 1
    for i in range(r, rows):
        if aug[i][cols]:
            return None  # inconsistent: value is not in the subfield
    sol = [_ZERO] * cols
    for i, c in enumerate(piv_rows):
        sol[c] = aug[i][cols]
    return _strip(sol)


def _descend(coeffs: list[Fraction], n: int, p: int) -> list[Fraction] | None:
    """Try to re-express a reduced conductor-n value at conductor n/p."""
    d = n // p
    if d == 1:
        return list(coeffs) if len(coeffs) <= 1 else None
    if d % p == 0:
        # p^2 | n, so Phi_n(x) = Phi_d(x^p): the subfield consists exactly
        # of the polynomials supported on exponents divisible by p.
        if any(c and (j % p) for j, c in enumerate(coeffs)):
            return None
        return _strip([coeffs[s] for s in range(0, len(coeffs), p)])
    if p != 2:
        # Gal(Q(zeta_n)/Q(zeta_d)) is cyclic; invariance under one
        # generator decides membership before the rewrite is attempted.
        g = _primitive_root(p)
        # k = g mod p, k = 1 mod d
        k = (1 + d * ((g - 1) * pow(d, -1, p) % p)) % n
        if _galois(coeffs, n, k) != list(coeffs):
            return None
    return _solve_subfield(coeffs, n, p, d)


def _minimize(coeffs: list[Fraction], n: int) -> tuple[list[Fraction], int]:
    if len(coeffs) <= 1:
        return coeffs, 1
    changed = True
    while changed and n > 1:
        changed = False
        for p in _prime_factors(n):
            low = _descend(coeffs, n, p)
            if low is not None:
                coeffs, n = low, n // p
                if len(coeffs) <= 1:
                    return coeffs, 1
                changed = True
                break
    return coeffs, n


# ---------------------------------------------------------------------------
# The value type.
# ---------------------------------------------------------------------------


class CyclotomicNumber:
    """An element of some Q(zeta_n), stored in canonical form.

    Instances are immutable and hashable; construct them with ``E``,
    ``from_rational``, ``parse_cyclotomic``, or arithmetic.
    """

    __slots__ = ("_n", "_c")

    def __init__(self, conductor: int, coefficients: Sequence[Fraction]):
        if conductor < 1:
            raise ValueError("conductor must be a positive integer")
        if conductor > MAX_CONDUCTOR:
            raise ValueError(
                f"conductor {conductor} exceeds the cap {MAX_CONDUCTOR}")
        coeffs = _reduce([Fraction(c) for c in coefficients], conductor)
        coeffs, n = _minimize(coeffs, conductor)
        self._n = n
        self._c = tuple(coeffs)

    @classmethod
    def _make(cls, n: int, coeffs: tuple[Fraction, ...]) -> "CyclotomicNumber":
        # trusted constructor: inputs must already be canonical
        v = cls.__new__(cls)
        v._n = n
        v._c = coeffs
        return v

    @property
    def conductor(self) -> int:
        return self._n

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        """Canonical coefficients, degree < phi(conductor), no trailing zeros."""
        return self._c

    # -- predicates -----------------------------------------------------------

    def is_rational(self) -> bool:
        return self._n == 1

    def to_rational(self) -> Fraction | None:
        if self._n != 1:
            return None
        return self._c[0] if self._c else Fraction(0)

    def is_integer(self) -> bool:
        q = self.to_rational()
        return q is not None and q.denominator == 1

    def __bool__(self) -> bool:
        return bool(self._c)

    # -- arithmetic -----------------------------------------------------------

    @staticmethod
    def _coerce(value) -> "CyclotomicNumber | None":
        if isinstance(value, CyclotomicNumber):
            return value
        if isinstance(value, (int, Fraction)):
            return from_rational(value)
        return None

    def __add__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        a = self
        if a._n == 1 and b._n == 1:
            return from_rational((a._c[0] if a._c else _ZERO) +
                                 (b._c[0] if b._c else _ZERO))
        if a._n == 1 or b._n == 1:
            # adding a rational never changes the minimal conductor
            if a._n == 1:
                a, b = b, a
            q = b._c[0] if b._c else _ZERO
            out = list(a._c) if a._c else [_ZERO]
            out[0] += q
            out = _strip(out)
            if len(out) <= 1:
                return from_rational(out[0] if out else _ZERO)
            return CyclotomicNumber._make(a._n, tuple(out))
        m = (a._n * b._n) // math.gcd(a._n, b._n)
        if m > MAX_CONDUCTOR:
            raise ValueError(f"conductor {m} exceeds the cap {MAX_CONDUCTOR}")
        av = _embed_raw(a._c, a._n, m)
        bv = _embed_raw(b._c, b._n, m)
        if len(av) < len(bv):
            av, bv = bv, av
        for i, c in enumerate(bv):
            av[i] += c
        coeffs, n = _minimize(_strip(av), m)
        return CyclotomicNumber._make(n, tuple(coeffs))

    __radd__ = __add__

    def __neg__(self) -> "CyclotomicNumber":
        return CyclotomicNumber._make(self._n, tuple(-c for c in self._c))

    def __sub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return b + (-self)

    def __mul__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        a = self
        if a._n == 1 or b._n == 1:
            if a._n != 1:
                a, b = b, a
            q = a._c[0] if a._c else _ZERO
            if not q:
                return from_rational(0)
            if b._n == 1:
                return from_rational(q * (b._c[0] if b._c else _ZERO))
            # scaling by a nonzero rational preserves the minimal conductor
            return CyclotomicNumber._make(b._n, tuple(q * c for c in b._c))
        m = (a._n * b._n) // math.gcd(a._n, b._n)
        if m > MAX_CONDUCTOR:
            raise ValueError(f"conductor {m} exceeds the cap {MAX_CONDUCTOR}")
        av = _embed_raw(a._c, a._n, m)
        bv = _embed_raw(b._c, b._n, m)
        if not av or not bv:
            return from_rational(0)
        prod = [_ZERO] * (len(av) + len(bv) - 1)
        for i, ca in enumerate(av):
            if ca:
                for j, cb in enumerate(bv):
                    if cb:
                        prod[i + j] += ca * cb
        coeffs, n = _minimize(_reduce(prod, m), m)
        return CyclotomicNumber._make(n, tuple(coeffs))

    __rmul__ = __mul__

    def conjugate(self) -> "CyclotomicNumber":
        """Complex conjugation, the Galois image zeta -> zeta^(n-1)."""
        if self._n == 1:
            return self
        # an automorphism of Q(zeta_n) maps every subfield to itself, so
        # the conductor stays minimal and only reduction is needed
        out = _galois(self._c, self._n, self._n - 1)
        return CyclotomicNumber._make(self._n, tuple(out))

    def galois(self, k: int) -> "CyclotomicNumber":
        """Galois image zeta -> zeta^k; k must be a unit modulo the conductor."""
        if math.gcd(k, self._n) != 1:
            raise ValueError(f"{k} is not a unit modulo {self._n}")
        if self._n == 1:
            return self
        return CyclotomicNumber._make(self._n,
                                      tuple(_galois(self._c, self._n, k)))

    # -- comparison / hashing ---------------------------------------------------

    def __eq__(self, other) -> bool:
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return self._n == b._n and self._c == b._c

    def __hash__(self) -> int:
        return hash((self._n, self._c))

    # -- printing ----------------------------------------------------------------

    def __str__(self) -> str:
        if self._n == 1:
            return str(self._c[0]) if self._c else "0"
        pieces = []
        for j, c in enumerate(self._c):
            if not c:
                continue
            if j == 0:
                body = str(abs(c))
            else:
                mag = abs(c)
                root = f"E({self._n})" if j == 1 else f"E({self._n})^{j}"
                body = root if mag == 1 else f"{mag}*{root}"
            pieces.append(("-" if c < 0 else "+", body))
        sign, body = pieces[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            text += sign + body
        return text

    def __repr__(self) -> str:
        return f"<CyclotomicNumber {self}>"


def E(n: int, k: int = 1) -> CyclotomicNumber:
    """The root of unity zeta_n^k (zeta_n = exp(2*pi*i/n))."""
    if n < 1:
        raise ValueError("E(n) needs a positive integer n")
    k %= n
    return CyclotomicNumber(n, [_ZERO] * k + [Fraction(1)])


def from_rational(q) -> CyclotomicNumber:
    q = Fraction(q)
    return CyclotomicNumber._make(1, (q,) if q else ())


def add(a: CyclotomicNumber, b: CyclotomicNumber) -> CyclotomicNumber:
    return a + b


def mul(a: CyclotomicNumber, b: CyclotomicNumber) -> CyclotomicNumber:
    return a * b


def conjugate(a: CyclotomicNumber) -> CyclotomicNumber:
    return a.conjugate()


def is_rational(a: CyclotomicNumber) -> bool:
    return a.is_rational()


def to_rational(a: CyclotomicNumber) -> Fraction | None:
    return a.to_rational()


def embed(a: CyclotomicNumber, m: int) -> CyclotomicNumber:
    """The same value, after checking it lives inside Q(zeta_m).

    Canonical forms always carry the minimal conductor, so the returned
    object equals ``a``; the call validates the containment n | m and exists
    so conductor bookkeeping reads explicitly at call sites.  The raw
    length-phi(m) coefficient row at conductor m is available via
    ``embedded_coefficients``.
    """
    if m < 1 or m % a.conductor != 0:
        raise ValueError(f"conductor {a.conductor} does not divide {m}")
    if m > MAX_CONDUCTOR:
        raise ValueError(f"conductor {m} exceeds the cap {MAX_CONDUCTOR}")
    return a


def embedded_coefficients(a: CyclotomicNumber, m: int) -> list[Fraction]:
    """Coefficient row of a at conductor m (reduced mod Phi_m), n | m."""
    if m < 1 or m % a.conductor != 0:
        raise ValueError(f"conductor {a.conductor} does not divide {m}")
    if m > MAX_CONDUCTOR:
        raise ValueError(f"conductor {m} exceeds the cap {MAX_CONDUCTOR}")
    return _embed_raw(a._c, a._n, m)


# ---------------------------------------------------------------------------
# Text codec: sums of "c*E(n)^k" terms.
# ---------------------------------------------------------------------------

_TERM_RE = re.compile(
    r"""\s*(?P<sign>[+-]?)\s*
        (?:
            (?P<coeff>\d+(?:/\d+)?)\s*(?:\*\s*(?P<root1>E\(\d+\)(?:\^-?\d+)?))?
          | (?P<root2>E\(\d+\)(?:\^-?\d+)?)
        )\s*""",
    re.VERBOSE,
)
_ROOT_RE = re.compile(r"E\((\d+)\)(?:\^(-?\d+))?$")


def parse_cyclotomic(text: str) -> CyclotomicNumber:
    """Parse a sum of ``c*E(n)^k`` terms (rational c, integer k)."""
    s = text.strip()
    if not s:
        raise ValueError("empty cyclotomic literal")
    pos = 0
    total = from_rational(0)
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"malformed cyclotomic literal at offset {pos}: {text!r}")
        sign, coeff, root = m.group("sign"), m.group("coeff"), (
            m.group("root1") or m.group("root2"))
        if not first and not sign:
            raise ValueError(f"missing sign between terms at offset {pos}: {text!r}")
        q = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            q = -q
        if root is None:
            term = from_rational(q)
        else:
            rm = _ROOT_RE.match(root)
            n = int(rm.group(1))
            k = int(rm.group(2)) if rm.group(2) is not None else 1
            if n < 1:
                raise ValueError(f"invalid root of unity E({n})")
            term = q * E(n, k)
        total = total + term
        pos = m.end()
        first = False
    return total
