"""Exact p-adic scaffolding.

Valuations, canonical square classes, Legendre and Hilbert symbols over Q_p
for every prime, tame Hilbert symbols over certified extensions with odd
residue characteristic, and a Hensel-certified solubility oracle that serves
as the independent cross-check for every closed form.

All arithmetic is exact rational; no floats.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import Mat, Poly, fr, poly_trim, trace

# ---------------------------------------------------------------------------
# primes


def _miller_rabin(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24 with this witness set
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Prime:
    """A verified prime number, the residue characteristic of the base field."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not _miller_rabin(self.p):
            raise ValueError(f"{self.p} is not prime")

    def __int__(self) -> int:
        return self.p

    def __str__(self) -> str:
        return str(self.p)


def as_prime(p) -> Prime:
    return p if isinstance(p, Prime) else Prime(int(p))


# ---------------------------------------------------------------------------
# valuations, Legendre symbols, square classes over Q_p


def valuation(a, p) -> int:
    """Normalized p-adic valuation of a nonzero rational."""
    p = int(as_prime(p))
    a = fr(a)
    if a == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = a.numerator, a.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def unit_part(a, p) -> Fraction:
    """a / p^v(a): the p-unit factor of a nonzero rational."""
    p = int(as_prime(p))
    return fr(a) / Fraction(p) ** valuation(a, p)


def legendre(a, p) -> int:
    """Legendre symbol of a p-unit rational modulo the odd prime p."""
    p = int(as_prime(p))
    if p == 2:
        raise ValueError("Legendre symbol needs an odd prime")
    a = fr(a)
    r = a.numerator * pow(a.denominator, -1, p) % p
    if r == 0:
        raise ValueError("Legendre symbol of a non-unit")
    return 1 if pow(r, (p - 1) // 2, p) == 1 else -1


def _unit_mod(a, modulus: int) -> int:
    a = fr(a)
    return a.numerator * pow(a.denominator, -1, modulus) % modulus


def least_nonresidue(p) -> int:
    """Least positive quadratic non-residue modulo an odd prime."""
    p = int(as_prime(p))
    u = 2
    while legendre(u, p) == 1:
        u += 1
    return u


@dataclass(frozen=True)
class SquareClass:
    """A canonical representative of F^x / F^x2 over Q_p.

    Odd p: one of {1, u, p, u*p} with u the least positive non-residue.
    p = 2: one of {1, -1, 2, -2, 5, -5, 10, -10}.
    """

    representative: int
    p: Prime

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        if self.p != other.p:
            raise ValueError("square classes over different primes")
        return square_class(self.representative * other.representative, self.p)

    def is_trivial(self) -> bool:
        return self.representative == 1

    def __str__(self) -> str:
        return str(self.representative)


def square_class(a, p) -> SquareClass:
    """Reduce a nonzero rational to its canonical square-class representative."""
    prime = as_prime(p)
    p = int(prime)
    a = fr(a)
    if a == 0:
        raise ValueError("square class of zero")
    v = valuation(a, p)
    u = a / Fraction(p) ** v
    if p == 2:
        rep = {1: 1, 5: 5, 3: -5, 7: -1}[_unit_mod(u, 8)]
    else:
        rep = 1 if legendre(u, p) == 1 else least_nonresidue(p)
    if v % 2:
        rep *= p
    return SquareClass(rep, prime)


def is_square_qp(a, p) -> bool:
    return square_class(a, p).representative == 1


def square_class_table(p) -> tuple[SquareClass, ...]:
    """All square classes of Q_p^x, canonical representatives."""
    prime = as_prime(p)
    p = int(prime)
    if p == 2:
        reps = (1, -1, 2, -2, 5, -5, 10, -10)
    else:
        u = least_nonresidue(p)
        reps = (1, u, p, u * p)
    return tuple(SquareClass(r, prime) for r in reps)


# ---------------------------------------------------------------------------
# Hilbert symbol over Q_p (closed forms)


def hilbert_qp(a, b, p) -> int:
    """Quadratic Hilbert symbol (a, b)_p over Q_p, values in {+1, -1}."""
    prime = as_prime(p)
    p = int(prime)
    a, b = fr(a), fr(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol of zero")
    alpha, beta = valuation(a, p), valuation(b, p)
    u, w = unit_part(a, p), unit_part(b, p)
    if p != 2:
        s = 1
        if alpha * beta * ((p - 1) // 2) % 2:
            s = -s
        if beta % 2 and legendre(u, p) == -1:
            s = -s
        if alpha % 2 and legendre(w, p) == -1:
            s = -s
        return s
    eps_u = (_unit_mod(u, 4) - 1) // 2          # (u-1)/2 mod 2
    eps_w = (_unit_mod(w, 4) - 1) // 2
    om_u = (_unit_mod(u, 8) ** 2 - 1) // 8 % 2  # (u^2-1)/8 mod 2
    om_w = (_unit_mod(w, 8) ** 2 - 1) // 8 % 2
    expo = eps_u * eps_w + alpha * om_w + beta * om_u
    return -1 if expo % 2 else 1


# ---------------------------------------------------------------------------
# finite field F_p[x]/(f) helpers for residue characters


def _gfp_trim(x: list[int], p: int) -> list[int]:
    x = [c % p for c in x]
    while x and x[-1] == 0:
        x.pop()
    return x


def _gfp_polmul(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1 if a and b else 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    d = len(f) - 1
    while len(out) > d:
        lead = out.pop()
        if lead:
            for i in range(d):
                out[-d + i] = (out[-d + i] - lead * f[i]) % p
    while len(out) < d:
        out.append(0)
    return out


def _gfp_polpow(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    d = len(f) - 1
    result = [1] + [0] * (d - 1)
    base = ([c % p for c in a] + [0] * d)[:d]
    while e:
        if e & 1:
            result = _gfp_polmul(result, base, f, p)
        base = _gfp_polmul(base, base, f, p)
        e >>= 1
    return result


def _gfp_mod(a: list[int], b: list[int], p: int) -> list[int]:
    r = _gfp_trim(a, p)
    b = _gfp_trim(b, p)
    inv = pow(b[-1], -1, p)
    while len(r) >= len(b):
        lead = r[-1] * inv % p
        shift = len(r) - len(b)
        for i, c in enumerate(b):
            r[shift + i] = (r[shift + i] - lead * c) % p
        r = _gfp_trim(r, p)
        if not r:
            break
    return r


def _gfp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _gfp_trim(a, p), _gfp_trim(b, p)
    while b:
        a, b = b, _gfp_mod(a, b, p)
    return a


def _irreducible_mod_p(poly: Poly, p: int) -> bool:
    """Rabin irreducibility test for a monic integral polynomial mod p."""
    d = len(poly) - 1
    f = [int(c) % p for c in poly]
    x = ([0, 1] + [0] * d)[:d]
    xq = x[:]
    for _ in range(d):
        xq = _gfp_polpow(xq, p, f, p)
    if _gfp_trim([xq[i] - x[i] for i in range(d)], p):
        return False
    dd, prime_divs = d, set()
    ell = 2
    while ell * ell <= dd:
        if dd % ell == 0:
            prime_divs.add(ell)
            while dd % ell == 0:
                dd //= ell
        ell += 1
    if dd > 1:
        prime_divs.add(dd)
    for ell in prime_divs:
        xq = x[:]
        for _ in range(d // ell):
            xq = _gfp_polpow(xq, p, f, p)
        diff = [xq[i] - x[i] for i in range(d)]
        if len(_gfp_gcd(diff, f, p)) > 1:
            return False
    return True


def _residue_char_fq(r: Sequence[int], redpoly: list[int], p: int) -> int:
    """Quadratic character of a nonzero residue in F_q, q = p^deg(redpoly)."""
    q = p ** (len(redpoly) - 1)
    out = _gfp_polpow(list(r), (q - 1) // 2, redpoly, p)
    one = [1] + [0] * (len(redpoly) - 2)
    return 1 if out == one else -1


# ---------------------------------------------------------------------------
# certified local fields


CERTIFICATES = ("degree-one", "quadratic-nonsquare-disc", "eisenstein",
                "unramified-irreducible-mod-p")


@dataclass(frozen=True)
class LocalFieldDescriptor:
    """A certified extension of Q_p given by a monic defining polynomial.

    The certificate guarantees irreducibility over Q_p and is re-checked at
    construction.  Degree one means Q_p itself.
    """

    p: Prime
    defining_poly: Poly
    certificate: str

    def __post_init__(self):
        object.__setattr__(self, "p", as_prime(self.p))
        poly = poly_trim(tuple(fr(c) for c in self.defining_poly))
        object.__setattr__(self, "defining_poly", poly)
        if self.certificate not in CERTIFICATES:
            raise ValueError(f"unknown certificate {self.certificate!r}")
        if poly[-1] != 1:
            raise ValueError("defining polynomial must be monic")
        p = int(self.p)
        deg = len(poly) - 1
        if self.certificate == "degree-one":
            if deg != 1:
                raise ValueError("degree-one certificate needs a degree-1 polynomial")
        elif self.certificate == "quadratic-nonsquare-disc":
            if deg != 2:
                raise ValueError("quadratic certificate needs degree 2")
            disc = poly[1] ** 2 - 4 * poly[0]
            if disc == 0 or is_square_qp(disc, p):
                raise ValueError("discriminant is a square in Q_p: reducible")
        elif self.certificate == "eisenstein":
            if deg < 2:
                raise ValueError("eisenstein certificate needs degree >= 2")
            if poly[0] == 0 or valuation(poly[0], p) != 1:
                raise ValueError("not eisenstein: constant term needs valuation 1")
            for c in poly[1:-1]:
                if c != 0 and valuation(c, p) < 1:
                    raise ValueError("not eisenstein: inner coefficient is a unit")
        else:  # unramified-irreducible-mod-p
            if deg < 2:
                raise ValueError("unramified certificate needs degree >= 2")
            for c in poly[:-1]:
                if c != 0 and valuation(c, p) < 0:
                    raise ValueError("coefficients must be p-integral")
            if not _irreducible_mod_p(poly, p):
                raise ValueError("reducible modulo p: certificate fails")

    @property
    def degree(self) -> int:
        return len(self.defining_poly) - 1

    @property
    def ramification_e(self) -> int:
        if self.certificate == "eisenstein":
            return self.degree
        if self.certificate == "quadratic-nonsquare-disc":
            disc = self.defining_poly[1] ** 2 - 4 * self.defining_poly[0]
            return 2 if valuation(disc, self.p) % 2 else 1
        return 1

    @property
    def residue_f(self) -> int:
        return self.degree // self.ramification_e

    @property
    def residue_q(self) -> int:
        return int(self.p) ** self.residue_f

    def element(self, coeffs) -> "FieldElement":
        return FieldElement(self, tuple(fr(c) for c in coeffs))

    @property
    def one(self) -> "FieldElement":
        return self.embed(1)

    @property
    def zero(self) -> "FieldElement":
        return self.embed(0)

    @property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            raise ValueError("Q_p has no generator element")
        return self.element([0, 1] + [0] * (self.degree - 2))

    def embed(self, a) -> "FieldElement":
        return self.element([fr(a)] + [0] * (self.degree - 1))

    def __str__(self) -> str:
        if self.degree == 1:
            return f"Q_{self.p}"
        return f"Q_{self.p}[t]/({poly_trim(self.defining_poly)})"


def QP(p) -> LocalFieldDescriptor:
    """The base field Q_p itself."""
    return LocalFieldDescriptor(as_prime(p), (Fraction(0), Fraction(1)), "degree-one")


@dataclass(frozen=True)
class FieldElement:
    """An element of a certified local field in the power basis of its generator."""

    field: LocalFieldDescriptor
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.field.degree:
            raise ValueError("coefficient vector has wrong length")

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _same(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        return self.field.embed(other)

    def __add__(self, other):
        o = self._same(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._same(other)
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        o = self._same(other)
        f = self.field.defining_poly
        d = self.field.degree
        out = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(o.coeffs):
                    out[i + j] += x * y
        for k in range(2 * d - 2, d - 1, -1):
            lead = out[k]
            if lead:
                out[k] = Fraction(0)
                for i in range(d):
                    out[k - d + i] -= lead * f[i]
        return FieldElement(self.field, tuple(out[:d]))

    __rmul__ = __mul__

    def mult_matrix(self) -> Mat:
        """Matrix of v -> self*v over the power basis."""
        d = self.field.degree
        cols = []
        for j in range(d):
            basis_j = self.field.element([Fraction(int(i == j)) for i in range(d)])
            cols.append((self * basis_j).coeffs)
        return tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))

    def norm(self) -> Fraction:
        from .linalg import det
        return det(self.mult_matrix())

    def trace(self) -> Fraction:
        return trace(self.mult_matrix())

    def inverse(self) -> "FieldElement":
        from .linalg import inverse as mat_inverse
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        inv = mat_inverse(self.mult_matrix())
        return FieldElement(self.field, tuple(row[0] for row in inv))

    def valuation(self) -> int:
        """Normalized valuation (uniformizer has valuation 1)."""
        if self.is_zero():
            raise ValueError("valuation of zero")
        fld = self.field
        if fld.degree == 1:
            return valuation(self.coeffs[0], fld.p)
        return valuation(self.norm(), fld.p) // fld.residue_f

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coeffs) + ")"


# ---------------------------------------------------------------------------
# residue data and the tame Hilbert symbol


def _quadratic_model(fld: LocalFieldDescriptor):
    """Normalize a certified quadratic field to s^2 = m (m a unit) or pi^2 = p*u.

    Returns (kind, const, convert): kind in {'unram', 'ram'}, const the unit m
    resp. u, convert mapping power-basis coords to model coords (alpha, beta)
    with element alpha + beta*s resp. alpha + beta*pi.
    """
    p = int(fld.p)
    b = fld.defining_poly[1]
    c0 = fld.defining_poly[0]
    disc4 = (b * b - 4 * c0) / 4  # (t + b/2)^2 = disc4
    v = valuation(disc4, p)
    k = v // 2  # floor for even, (v-1)/2 for odd since v//2 floors
    m = disc4 / Fraction(p) ** (2 * k)
    pk = Fraction(p) ** k

    def convert(coeffs: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
        alpha, beta = coeffs
        return (alpha - b * beta / 2, beta * pk)

    if v % 2 == 0:
        return "unram", m, convert
    return "ram", m / p, convert


def tame_data(fld: LocalFieldDescriptor, x) -> tuple[int, int]:
    """(valuation, quadratic residue character of the unit part), odd p only."""
    p = int(fld.p)
    if p == 2 and fld.degree > 1:
        raise ValueError("tame data unavailable for p = 2 beyond Q_2")
    if not isinstance(x, FieldElement):
        x = fld.embed(x)
    if x.is_zero():
        raise ValueError("tame data of zero")
    if fld.degree == 1:
        a = x.coeffs[0]
        return valuation(a, p), legendre(unit_part(a, p), p)

    cert = fld.certificate
    if cert == "quadratic-nonsquare-disc":
        kind, const, convert = _quadratic_model(fld)
        alpha, beta = convert(x.coeffs)
        if kind == "unram":
            vals = [valuation(c, p) for c in (alpha, beta) if c != 0]
            w = min(vals)
            red = [(-_unit_mod(const, p)) % p, 0, 1]  # s^2 - m mod p
            res = []
            for c in (alpha, beta):
                c = c / Fraction(p) ** w
                res.append(0 if c == 0 or valuation(c, p) > 0 else _unit_mod(c, p))
            return w, _residue_char_fq(res, red, p)
        terms = []
        if alpha != 0:
            terms.append(2 * valuation(alpha, p))
        if beta != 0:
            terms.append(2 * valuation(beta, p) + 1)
        w = min(terms)
        # unit part is x / pi^w with pi^2 = p*u: dividing by pi^2 divides the
        # leading coordinate by p*u, so chi picks up chi(u)^floor(w/2)
        if w % 2 == 0:
            lead = alpha / Fraction(p) ** (w // 2)
        else:
            lead = beta / Fraction(p) ** ((w - 1) // 2)
        chi = legendre(lead, p)
        if (w // 2) % 2 and legendre(const, p) == -1:
            chi = -chi
        return w, chi

    if cert == "eisenstein":
        d = fld.degree
        w = min(d * valuation(c, p) + i for i, c in enumerate(x.coeffs) if c != 0)
        u = x
        if w:
            step = fld.gen.inverse() if w > 0 else fld.gen
            for _ in range(abs(w)):
                u = u * step
        c0 = u.coeffs[0]
        if c0 == 0 or valuation(c0, p) != 0:
            raise RuntimeError("eisenstein unit-part reduction failed")
        return w, legendre(c0, p)

    # unramified-irreducible-mod-p
    w = min(valuation(c, p) for c in x.coeffs if c != 0)
    red = [int(c) % p for c in fld.defining_poly]
    res = []
    for c in x.coeffs:
        c = c / Fraction(p) ** w
        res.append(0 if c == 0 or valuation(c, p) > 0 else _unit_mod(c, p))
    return w, _residue_char_fq(res, red, p)


def hilbert_tame(fld: LocalFieldDescriptor, a, b) -> int:
    """Tame Hilbert symbol over a certified extension with odd residue char.

    (a,b) = (-1)^(v(a) v(b) (q-1)/2) * chi(ua)^v(b) * chi(ub)^v(a), chi the
    quadratic residue character of the residue field and ua, ub unit parts.
    """
    p = int(fld.p)
    if p == 2:
        if fld.degree > 1:
            raise ValueError("wild case p = 2 beyond Q_2 is unsupported")
        av = a.coeffs[0] if isinstance(a, FieldElement) else a
        bv = b.coeffs[0] if isinstance(b, FieldElement) else b
        return hilbert_qp(av, bv, 2)
    wa, chia = tame_data(fld, a)
    wb, chib = tame_data(fld, b)
    q = fld.residue_q
    s = 1
    if (wa * wb * ((q - 1) // 2)) % 2:
        s = -s
    if wb % 2 and chia == -1:
        s = -s
    if wa % 2 and chib == -1:
        s = -s
    return s


def is_square_in_field(fld: LocalFieldDescriptor, d) -> bool:
    """Exact squareness test: odd p any certified field, p = 2 only Q_2."""
    p = int(fld.p)
    if fld.degree == 1:
        dv = d.coeffs[0] if isinstance(d, FieldElement) else d
        return is_square_qp(dv, p)
    if p == 2:
        raise ValueError("cannot certify squares for p = 2 beyond Q_2")
    w, chi = tame_data(fld, d)
    return w % 2 == 0 and chi == 1


def is_local_norm(fld: LocalFieldDescriptor, d, x) -> bool:
    """Whether x is a norm from fld(sqrt(d)): the Hilbert symbol (d, x) is +1."""
    if is_square_in_field(fld, d):
        return True
    if fld.degree == 1:
        dv = d.coeffs[0] if isinstance(d, FieldElement) else d
        xv = x.coeffs[0] if isinstance(x, FieldElement) else x
        return hilbert_qp(dv, xv, fld.p) == 1
    return hilbert_tame(fld, d, x) == 1


# ---------------------------------------------------------------------------
# the solubility oracle


class Solubility(enum.Enum):
    SOLUBLE = "soluble"
    INSOLUBLE = "insoluble"
    INCONCLUSIVE = "inconclusive"


class _ZpRing:
    """Exact integers as candidates for degree-one fields."""

    def __init__(self, p: int):
        self.p = p
        self.e = 1
        self.two = 2

    def digits(self):
        return [i for i in range(self.p)]

    def from_digit(self, d, level):
        return d * self.p ** level

    def mul(self, x, y):
        return x * y

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def is_zero(self, x):
        return x == 0

    def w(self, x):
        if x == 0:
            return None
        v = 0
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v

    def from_field(self, fld, x):
        a = x.coeffs[0] if isinstance(x, FieldElement) else fr(x)
        a = a * a.denominator ** 2
        n = int(a)
        if n == 0:
            raise ValueError("zero coefficient")
        while n % self.p ** 2 == 0:
            n //= self.p ** 2
        return n


class _QuadRing:
    """Integer pairs (alpha, beta) for s^2 = m (unram) or pi^2 = p*u (ram)."""

    def __init__(self, p: int, kind: str, const: int):
        self.p = p
        self.kind = kind
        self.const = const  # m for unram, u for ram
        self.e = 2 if kind == "ram" else 1
        self.two = (2, 0)

    def digits(self):
        if self.kind == "unram":
            return [(a, b) for a in range(self.p) for b in range(self.p)]
        return [(a, 0) for a in range(self.p)]

    def _pi_pow(self, level):
        if self.kind == "unram":
            return (self.p ** level, 0)
        half, rem = divmod(level, 2)
        scale = (self.p * self.const) ** half
        return (scale, 0) if rem == 0 else (0, scale)

    def from_digit(self, d, level):
        return self.mul(d, self._pi_pow(level))

    def mul(self, x, y):
        a, b = x
        c, d = y
        k = self.const if self.kind == "unram" else self.p * self.const
        return (a * c + k * b * d, a * d + b * c)

    def add(self, x, y):
        return (x[0] + y[0], x[1] + y[1])

    def neg(self, x):
        return (-x[0], -x[1])

    def is_zero(self, x):
        return x == (0, 0)

    def _vp(self, n):
        if n == 0:
            return None
        v = 0
        while n % self.p == 0:
            n //= self.p
            v += 1
        return v

    def w(self, x):
        va, vb = self._vp(x[0]), self._vp(x[1])
        if self.kind == "unram":
            cands = [v for v in (va, vb) if v is not None]
        else:
            cands = []
            if va is not None:
                cands.append(2 * va)
            if vb is not None:
                cands.append(2 * vb + 1)
        return min(cands) if cands else None

    def from_field(self, fld, x):
        if not isinstance(x, FieldElement):
            x = fld.embed(x)
        _, const, convert = _quadratic_model(fld)
        alpha, beta = convert(x.coeffs)
        # the ring's constant was cleared to const * den^2 (generator s' = den*s),
        # so coordinates rebase as beta -> beta / den
        beta = beta / const.denominator
        den = alpha.denominator * beta.denominator
        alpha, beta = alpha * den * den, beta * den * den
        cand = (int(alpha), int(beta))
        if self.is_zero(cand):
            raise ValueError("zero coefficient")
        # strip p^2 factors (p^2 is a square scalar in either model)
        while cand[0] % self.p ** 2 == 0 and cand[1] % self.p ** 2 == 0:
            cand = (cand[0] // self.p ** 2, cand[1] // self.p ** 2)
        return cand


def _oracle_ring(fld: LocalFieldDescriptor):
    p = int(fld.p)
    if fld.degree == 1:
        return _ZpRing(p)
    if fld.degree == 2 and p != 2:
        kind, const, _ = _quadratic_model(fld)
        # clear the square denominator of the model constant (rebases s)
        const = const * const.denominator ** 2
        return _QuadRing(p, kind, int(const))
    raise ValueError("solubility oracle supports Q_p and odd-p quadratic fields")


def solubility_budget(a, b, fld: LocalFieldDescriptor) -> int:
    """Exhaustion depth v(4ab) + 2e + 1 that certifies insolubility."""
    ring = _oracle_ring(fld)
    ra = ring.from_field(fld, a)
    rb = ring.from_field(fld, b)
    four = ring.mul(ring.two, ring.two)
    return ring.w(ring.mul(four, ring.mul(ra, rb))) + 2 * ring.e + 1


def solubility_oracle(a, b, fld: LocalFieldDescriptor, depth: int) -> Solubility:
    """Hensel-certified search for a nontrivial zero of z^2 = a x^2 + b y^2.

    Levels enumerate primitive candidate triples modulo increasing powers of
    the uniformizer.  A candidate certifies solubility when the exact value's
    valuation exceeds twice that of some partial derivative (or the value
    vanishes identically); an empty level certifies insolubility, final once
    the depth covers the budget v(4ab) + 2e + 1.  Below-budget exhaustion
    returns INCONCLUSIVE, never a guess.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    ring = _oracle_ring(fld)
    ra = ring.from_field(fld, a)
    rb = ring.from_field(fld, b)
    budget = solubility_budget(a, b, fld)

    def value(x, y, z):
        zz = ring.mul(z, z)
        ax = ring.mul(ra, ring.mul(x, x))
        by = ring.mul(rb, ring.mul(y, y))
        return ring.add(zz, ring.add(ring.neg(ax), ring.neg(by)))

    def certified(x, y, z, fval):
        if ring.is_zero(fval):
            return True
        wf = ring.w(fval)
        for part in (ring.mul(ring.two, z),
                     ring.mul(ring.two, ring.mul(ra, x)),
                     ring.mul(ring.two, ring.mul(rb, y))):
            wp = ring.w(part)
            if wp is not None and wf > 2 * wp:
                return True
        return False

    zero = 0 if isinstance(ring, _ZpRing) else (0, 0)
    live = [(zero, zero, zero)]
    digs = list(ring.digits())
    for level in range(depth):
        new_live = []
        for (x, y, z) in live:
            for dx in digs:
                xx = ring.add(x, ring.from_digit(dx, level))
                for dy in digs:
                    yy = ring.add(y, ring.from_digit(dy, level))
                    for dz in digs:
                        zz = ring.add(z, ring.from_digit(dz, level))
                        if level == 0 and ring.is_zero(xx) and ring.is_zero(yy) \
                                and ring.is_zero(zz):
                            continue
                        fval = value(xx, yy, zz)
                        if certified(xx, yy, zz, fval):
                            return Solubility.SOLUBLE
                        wf = ring.w(fval)
                        if wf is not None and wf >= level + 1:
                            new_live.append((xx, yy, zz))
        live = new_live
        if not live:
            return Solubility.INSOLUBLE
    return Solubility.INSOLUBLE if depth >= budget else Solubility.INCONCLUSIVE
