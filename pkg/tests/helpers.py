"""Shared brute-force oracles and fixture generators for the test suite.

The oracles here are deliberately independent of the library's closed forms:
isotropy is decided by a Hensel-certified digit search, and equivalences are
witnessed by explicitly constructed congruence matrices.
"""

from __future__ import annotations

import random
from fractions import Fraction

from twistedgl.etale import (EtaleAlgebraWithInvolution, make_algebra,
                             quadratic_tower, split_tower, tau, is_generator,
                             very_regular)
from twistedgl.linalg import identity, inverse, mat, mat_mul, mat_vec, transpose
from twistedgl.localfield import QP, least_nonresidue, square_class_table, valuation
from twistedgl.qform import QuadForm, diagonalize


def _vp(n: int, p: int):
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def diag_isotropy_bruteforce(entries, p: int, max_depth: int = 12) -> bool:
    """Hensel-certified search for a primitive zero of sum a_i x_i^2 over Z_p.

    Independent of the isotropy criterion: digit-tree search with the
    certificate v(F) > 2 v(dF/dx_i), exhaustive to the budget depth
    2 v(2 a_i) + 1 over the coordinate with the smallest coefficient
    valuation.
    """
    coeffs = []
    for a in entries:
        a = Fraction(a)
        n = a.numerator * a.denominator  # same square class, integral
        coeffs.append(n)
    budget = 2 * min(_vp(2 * abs(c), p) for c in coeffs) + 1
    budget = min(budget + 0, max_depth)
    k = len(coeffs)

    def value(xs):
        return sum(c * x * x for c, x in zip(coeffs, xs))

    live = [tuple([0] * k)]
    for level in range(max(budget, 1)):
        new_live = []
        scale = p ** level
        for cand in live:
            for digits in _digit_tuples(k, p):
                xs = tuple(x + d * scale for x, d in zip(cand, digits))
                if level == 0 and all(x == 0 for x in xs):
                    continue
                f = value(xs)
                if f == 0:
                    return True
                wf = _vp(f, p)
                for c, x in zip(coeffs, xs):
                    part = 2 * c * x
                    wp = _vp(part, p)
                    if wp is not None and wf > 2 * wp:
                        return True
                if wf >= level + 1:
                    new_live.append(xs)
        live = new_live
        if not live:
            return False
    return False


def _digit_tuples(k: int, p: int):
    if k == 1:
        return [(d,) for d in range(p)]
    tails = _digit_tuples(k - 1, p)
    return [(d,) + t for d in range(p) for t in tails]


def _represent_padic(coeffs, target, p: int, precision: int):
    """A rational vector v with sum coeffs_i v_i^2 = target + O(p^precision).

    Digit search for a Hensel-certified candidate, then exact rational Newton
    refinement on the certified coordinate.  Returns None when no certified
    candidate exists within the exhaustion bound (the value is then not
    represented, by the same budget argument as the solubility oracle).
    """
    n = len(coeffs)
    den = 1
    for c in list(coeffs) + [target]:
        den = den * Fraction(c).denominator
    a = [int(Fraction(c) * den * den) for c in coeffs]
    t_int = int(Fraction(target) * den * den)
    # scaling x by p^-m trades target for p^2m * target; try a few shifts
    for shift in range(0, 3):
        tt = t_int * p ** (2 * shift)
        found = _certified_candidate(a, tt, p)
        if found is None:
            continue
        xs, i0 = found
        xs = [Fraction(x) for x in xs]
        # Newton on the certified coordinate: g(x) = a_i0 x^2 + rest - tt
        rest = sum(a[j] * xs[j] * xs[j] for j in range(n) if j != i0) - tt
        x = xs[i0]
        for _ in range(64):
            g = a[i0] * x * x + rest
            if g == 0 or valuation(g, p) >= precision + 2 * shift:
                break
            x = x - Fraction(g) / (2 * a[i0] * x)
        xs[i0] = x
        return tuple(v / p ** shift for v in xs)
    return None


def _certified_candidate(a, target, p: int):
    """Digit-tree search for a Hensel point of sum a_i x_i^2 = target."""
    n = len(a)
    vt = _vp(target, p) if target else 0
    bound = min(2 * max(_vp(2 * abs(c), p) for c in a) + 2 + (vt or 0), 10)
    live = [tuple([0] * n)]
    for level in range(bound):
        new_live = []
        scale = p ** level
        for cand in live:
            for digits in _digit_tuples(n, p):
                xs = tuple(x + d * scale for x, d in zip(cand, digits))
                f = sum(c * x * x for c, x in zip(a, xs)) - target
                if f == 0:
                    i0 = next((i for i in range(n) if xs[i]), None)
                    if i0 is not None:
                        return xs, i0
                    continue
                wf = _vp(f, p)
                for i in range(n):
                    part = 2 * a[i] * xs[i]
                    wp = _vp(part, p)
                    if wp is not None and wf > 2 * wp:
                        return xs, i
                if wf >= level + 1:
                    new_live.append(xs)
        live = new_live
        if not live:
            return None
    return None


def padic_congruence_witness(q1: QuadForm, q2: QuadForm):
    """A rational P with P^T G1 P = G2 + O(p^k), k past the lifting threshold.

    Constructive represent-and-recurse over Q_p with truncated vectors; the
    returned matrix has p-unit-bounded determinant defect and certifies
    genuine equivalence.  Returns None when some diagonal value is not
    represented, which certifies inequivalence.
    """
    if q1.dim != q2.dim or q1.p != q2.p:
        return None
    p = int(q1.p)
    n = q1.dim
    if n == 0:
        return ()
    kcert = valuation(4 * _det(q1.gram) * _det(q2.gram), p) + 3
    precision = kcert + 6
    d1, p1 = diagonalize(q1)
    d2, p2 = diagonalize(q2)
    w = _diag_to_diag(list(d1), list(d2), p, precision)
    if w is None:
        return None
    pm = mat_mul(p1, mat_mul(w, inverse(p2)))
    diff = mat_mul(transpose(pm), mat_mul(q1.gram, pm))
    for i in range(n):
        for j in range(n):
            delta = diff[i][j] - q2.gram[i][j]
            if delta != 0 and valuation(delta, p) < kcert:
                return None
    if valuation(_det(pm), p) != 0 and abs(valuation(_det(pm), p)) > 2:
        return None
    return pm


def _det(g):
    from twistedgl.linalg import det
    return det(g)


def _diag_to_diag(d1, d2, p, precision):
    n = len(d1)
    if n == 0:
        return ()
    v = _represent_padic(d1, d2[0], p, precision)
    if v is None:
        return None
    if n == 1:
        return ((v[0],),)

    def bval(x, y):
        return sum(a * xi * yi for a, xi, yi in zip(d1, x, y))

    nv = bval(v, v)
    # complement basis: e_j - (B(e_j, v)/B(v,v)) v, skipping the most
    # v-aligned coordinate
    pivot = max(range(n), key=lambda i: abs(Fraction(v[i])))
    comp = []
    for j in range(n):
        if j == pivot:
            continue
        e = [Fraction(0)] * n
        e[j] = Fraction(1)
        coef = d1[j] * v[j] / nv
        comp.append(tuple(e[i] - coef * v[i] for i in range(n)))
    cgram = [[bval(x, y) for y in comp] for x in comp]
    from twistedgl.qform import quad_form
    sub = quad_form(cgram, p)
    ds, ps = diagonalize(sub)
    wsub = _diag_to_diag(list(ds), d2[1:], p, precision)
    if wsub is None:
        return None
    inner = mat_mul(ps, wsub)  # columns express d2[1:] basis in comp coords
    cols = [tuple(v)]
    for c in range(n - 1):
        col = [Fraction(0)] * n
        for r, basis_vec in enumerate(comp):
            for i in range(n):
                col[i] += inner[r][c] * basis_vec[i]
        cols.append(tuple(col))
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


# ---------------------------------------------------------------------------
# fixture generators


def base_field(p, rng: random.Random):
    return QP(p)


def random_algebra(p, rng: random.Random, n_factors: int | None = None,
                   allow_split: bool = True) -> EtaleAlgebraWithInvolution:
    """A random product of towers over Q_p bases."""
    n_factors = n_factors or rng.choice((1, 1, 2))
    towers = []
    p = int(p)
    nonsquares = [c.representative for c in square_class_table(p)
                  if c.representative != 1]
    for _ in range(n_factors):
        if allow_split and rng.random() < 0.4:
            towers.append(split_tower(QP(p)))
        else:
            towers.append(quadratic_tower(QP(p), rng.choice(nonsquares)))
    return make_algebra(towers)


def random_invertible_element(algebra, rng: random.Random, span: int = 5):
    for _ in range(200):
        parts = []
        for f in algebra.factors:
            d = f.base.degree
            a = f.base.element([Fraction(rng.randint(-span, span)) for _ in range(d)])
            b = f.base.element([Fraction(rng.randint(-span, span)) for _ in range(d)])
            parts.append((a, b))
        x = algebra.element(parts)
        if x.is_invertible():
            return x
    raise RuntimeError("could not sample an invertible element")


def random_generator(algebra, rng: random.Random, require_very_regular=True):
    for _ in range(500):
        x = random_invertible_element(algebra, rng)
        if not is_generator(x):
            continue
        if require_very_regular and not very_regular(x):
            continue
        return x
    raise RuntimeError("could not sample a generator")


def random_norm_one_generator(algebra, rng: random.Random, avoid=(1, -1)):
    """y = z / tau(z): norm one; retries until it generates and avoids the
    eigenvalues listed."""
    from twistedgl.etale import char_poly
    from twistedgl.linalg import poly_eval
    for _ in range(500):
        z = random_invertible_element(algebra, rng)
        tz = tau(z)
        if not tz.is_invertible():
            continue
        y = z * tz.inverse()
        if not is_generator(y):
            continue
        cp = char_poly(y)
        if any(poly_eval(cp, e) == 0 for e in avoid):
            continue
        return y
    raise RuntimeError("could not sample a norm-one generator")


def random_fixed_invertible(algebra, rng: random.Random):
    for _ in range(200):
        vals = []
        for f in algebra.factors:
            d = f.base.degree
            vals.append(f.base.element([Fraction(rng.randint(-5, 5)) for _ in range(d)]))
        c = algebra.fixed_element(vals)
        if c.is_invertible():
            return c
    raise RuntimeError("could not sample a fixed invertible element")


def random_antifixed_invertible(algebra, rng: random.Random):
    for _ in range(200):
        vals = []
        for f in algebra.factors:
            d = f.base.degree
            vals.append(f.base.element([Fraction(rng.randint(-5, 5)) for _ in range(d)]))
        c = algebra.skew_element(vals)
        if c.is_invertible():
            return c
    raise RuntimeError("could not sample an anti-fixed invertible element")


def hilbert90_x(y, z):
    """x with tau(x)/x = -y, given y of norm one and a generic z."""
    w = -y
    return z + w.inverse() * tau(z)
