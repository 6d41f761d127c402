"""Exact rational matrices and polynomials.

Matrices are immutable tuples of tuples of Fraction; polynomials are tuples of
Fraction coefficients in ascending degree order (coeffs[i] is the coefficient
of T^i).  Everything here is exact; no floats ever enter.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Mat = tuple[tuple[Fraction, ...], ...]
Poly = tuple[Fraction, ...]


def fr(x) -> Fraction:
    """Coerce ints, strings like '3/4' and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact arithmetic")
    return Fraction(x)


def mat(rows: Iterable[Iterable]) -> Mat:
    m = tuple(tuple(fr(x) for x in row) for row in rows)
    if m and any(len(row) != len(m[0]) for row in m):
        raise ValueError("ragged matrix")
    return m


def identity(n: int) -> Mat:
    one, zero = Fraction(1), Fraction(0)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def zeros(n: int, m: int | None = None) -> Mat:
    m = n if m is None else m
    zero = Fraction(0)
    return tuple((zero,) * m for _ in range(n))


def dims(a: Mat) -> tuple[int, int]:
    return len(a), len(a[0]) if a else 0


def transpose(a: Mat) -> Mat:
    return tuple(zip(*a)) if a else a


def mat_add(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(a: Mat) -> Mat:
    return tuple(tuple(-x for x in row) for row in a)


def mat_scale(c, a: Mat) -> Mat:
    c = fr(c)
    return tuple(tuple(c * x for x in row) for row in a)


def _clear_denominators(a: Mat) -> tuple[list[list[int]], int]:
    """Scale a rational matrix to integers: returns (D*a as ints, D)."""
    d = 1
    for row in a:
        for x in row:
            q = x.denominator
            if q != 1:
                g = _gcd(d, q)
                d = d // g * q
    rows = [[x.numerator * (d // x.denominator) for x in row] for row in a]
    return rows, d


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def mat_mul(a: Mat, b: Mat) -> Mat:
    n, k = dims(a)
    k2, m = dims(b)
    if k != k2:
        raise ValueError(f"cannot multiply {n}x{k} by {k2}x{m}")
    ia, da = _clear_denominators(a)
    ib, db = _clear_denominators(b)
    ibt = list(zip(*ib))
    d = da * db
    if d == 1:
        return tuple(tuple(Fraction(sum(x * y for x, y in zip(ra, cb))) for cb in ibt)
                     for ra in ia)
    return tuple(tuple(Fraction(sum(x * y for x, y in zip(ra, cb)), d) for cb in ibt)
                 for ra in ia)


def mat_vec(a: Mat, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def is_symmetric(a: Mat) -> bool:
    return a == transpose(a)


def is_alternating(a: Mat) -> bool:
    return transpose(a) == mat_neg(a)


def det(a: Mat) -> Fraction:
    """Determinant by fraction-free Bareiss elimination on cleared integers."""
    n, m = dims(a)
    if n != m:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    rows, d = _clear_denominators(a)
    sign = 1
    prev = 1
    for col in range(n - 1):
        if rows[col][col] == 0:
            piv = next((r for r in range(col + 1, n) if rows[r][col] != 0), None)
            if piv is None:
                return Fraction(0)
            rows[col], rows[piv] = rows[piv], rows[col]
            sign = -sign
        pivot = rows[col][col]
        for r in range(col + 1, n):
            for c in range(col + 1, n):
                rows[r][c] = (rows[r][c] * pivot - rows[r][col] * rows[col][c]) // prev
            rows[r][col] = 0
        prev = pivot
    return Fraction(sign * rows[n - 1][n - 1], d ** n)


def inverse(a: Mat) -> Mat:
    """Matrix inverse via Gauss-Jordan; raises on singular input."""
    n, m = dims(a)
    if n != m:
        raise ValueError("inverse of a non-square matrix")
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def trace(a: Mat) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def block_diag(*blocks: Mat) -> Mat:
    n = sum(len(b) for b in blocks)
    out = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return tuple(tuple(row) for row in out)


def from_blocks(grid: Sequence[Sequence[Mat]]) -> Mat:
    """Assemble a matrix from a 2d grid of compatible blocks."""
    rows: list[tuple[Fraction, ...]] = []
    for brow in grid:
        height = len(brow[0])
        for i in range(height):
            rows.append(tuple(x for blk in brow for x in blk[i]))
    return tuple(rows)


def charpoly(a: Mat) -> Poly:
    """Monic characteristic polynomial det(T - A), ascending coefficients.

    Faddeev-LeVerrier over cleared integers (the recursion stays integral),
    with the substitution T -> T/D undone on the coefficients.
    """
    n, m = dims(a)
    if n != m:
        raise ValueError("characteristic polynomial of a non-square matrix")
    if n == 0:
        return (Fraction(1),)
    rows, d = _clear_denominators(a)
    coeffs = [0] * n + [1]
    mk = [[int(i == j) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        am = [[sum(rows[i][t] * mk[t][j] for t in range(n)) for j in range(n)]
              for i in range(n)]
        tr = sum(am[i][i] for i in range(n))
        ck = -tr // k
        if ck * k != -tr:
            raise RuntimeError("integer Faddeev-LeVerrier lost exactness")
        coeffs[n - k] = ck
        for i in range(n):
            am[i][i] += ck
        mk = am
    # char of D*A evaluated at D*T, normalized monic: divide coeff i by D^(n-i)
    return tuple(Fraction(coeffs[i], d ** (n - i)) for i in range(n + 1))


# ---------------------------------------------------------------------------
# polynomials (ascending coefficient tuples)

def poly_trim(p: Sequence[Fraction]) -> Poly:
    q = list(p)
    while len(q) > 1 and q[-1] == 0:
        q.pop()
    return tuple(q)


def poly_deg(p: Poly) -> int:
    p = poly_trim(p)
    return len(p) - 1


def poly_is_zero(p: Poly) -> bool:
    return all(c == 0 for c in p)


def poly_add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return poly_trim(tuple(
        (p[i] if i < len(p) else Fraction(0)) + (q[i] if i < len(q) else Fraction(0))
        for i in range(n)))


def poly_neg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def poly_mul(p: Poly, q: Poly) -> Poly:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return poly_trim(tuple(out))


def poly_divmod(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    q = poly_trim(q)
    if poly_is_zero(q):
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(poly_trim(p))
    dq = len(q) - 1
    lead = q[-1]
    quot = [Fraction(0)] * max(1, len(rem) - dq)
    while len(rem) - 1 >= dq and any(c != 0 for c in rem):
        shift = len(rem) - 1 - dq
        f = rem[-1] / lead
        quot[shift] = f
        for i, c in enumerate(q):
            rem[shift + i] -= f * c
        while len(rem) > 1 and rem[-1] == 0:
            rem.pop()
    return poly_trim(tuple(quot)), poly_trim(tuple(rem))


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd over the rationals."""
    a, b = poly_trim(p), poly_trim(q)
    while not poly_is_zero(b):
        _, r = poly_divmod(a, b)
        a, b = b, r
    if poly_is_zero(a):
        return a
    lead = a[-1]
    return tuple(c / lead for c in a)


def poly_deriv(p: Poly) -> Poly:
    if len(p) <= 1:
        return (Fraction(0),)
    return poly_trim(tuple(Fraction(i) * p[i] for i in range(1, len(p))))


def poly_squarefree(p: Poly) -> bool:
    g = poly_gcd(p, poly_deriv(p))
    return poly_deg(g) == 0


def poly_eval(p: Poly, x) -> Fraction:
    x = fr(x)
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_str(p: Poly, var: str = "T") -> str:
    parts = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        elif i == 1:
            parts.append(f"{c}*{var}" if c != 1 else var)
        else:
            parts.append(f"{c}*{var}^{i}" if c != 1 else f"{var}^{i}")
    return " + ".join(parts) if parts else "0"
