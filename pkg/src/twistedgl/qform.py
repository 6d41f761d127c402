"""Quadratic and epsilon-symmetric form algebra over Q_p.

Gram matrices with exact rational entries, congruence diagonalization, the
classifying triple (dim, det, Hasse), the isotropy criterion, Witt
decomposition and the comparison operations built on them.  Alternating and
general bilinear Grams share the container through a symmetry tag; Witt
theory is exposed for the symmetric tag only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import (Mat, block_diag, det, fr, identity, mat, mat_mul,
                     transpose)
from .localfield import (Prime, SquareClass, as_prime, hilbert_qp,
                         square_class)

SYMMETRIC = "symmetric"
ALTERNATING = "alternating"
GENERAL = "general"


@dataclass(frozen=True)
class QuadForm:
    """A non-degenerate form over Q_p given by its Gram matrix."""

    gram: Mat
    p: Prime
    label: str | None = None
    symmetry: str = SYMMETRIC

    def __post_init__(self):
        object.__setattr__(self, "p", as_prime(self.p))
        g = mat(self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(len(row) != n for row in g):
            raise ValueError("Gram matrix must be square")
        if self.symmetry == SYMMETRIC:
            if g != transpose(g):
                raise ValueError("Gram matrix is not symmetric")
        elif self.symmetry == ALTERNATING:
            if transpose(g) != tuple(tuple(-x for x in row) for row in g):
                raise ValueError("Gram matrix is not alternating")
        elif self.symmetry != GENERAL:
            raise ValueError(f"unknown symmetry tag {self.symmetry!r}")
        if n and det(g) == 0:
            raise ValueError("degenerate Gram matrix")

    @property
    def dim(self) -> int:
        return len(self.gram)

    def __str__(self) -> str:
        name = self.label or f"{self.symmetry} form"
        return f"{name} of dim {self.dim} over Q_{self.p}"


def quad_form(gram, p, label: str | None = None) -> QuadForm:
    return QuadForm(mat(gram), as_prime(p), label, SYMMETRIC)


def diag_form(entries, p, label: str | None = None) -> QuadForm:
    entries = [fr(a) for a in entries]
    if any(a == 0 for a in entries):
        raise ValueError("diagonal entries must be nonzero")
    n = len(entries)
    g = tuple(tuple(entries[i] if i == j else Fraction(0) for j in range(n))
              for i in range(n))
    return QuadForm(g, as_prime(p), label, SYMMETRIC)


def alternating_form(gram, p, label: str | None = None) -> QuadForm:
    return QuadForm(mat(gram), as_prime(p), label, ALTERNATING)


def bilinear_form(gram, p, label: str | None = None) -> QuadForm:
    return QuadForm(mat(gram), as_prime(p), label, GENERAL)


def _require_symmetric(q: QuadForm, op: str):
    if q.symmetry != SYMMETRIC:
        raise ValueError(f"{op} is defined for symmetric forms only")


def _same_prime(q1: QuadForm, q2: QuadForm):
    if q1.p != q2.p:
        raise TypeError("forms over different primes")


# ---------------------------------------------------------------------------
# diagonalization


def diagonalize(q: QuadForm) -> tuple[tuple[Fraction, ...], Mat]:
    """Diagonal entries a_i and an invertible P with P^T G P = diag(a_i).

    Pivot rule: first nonzero diagonal entry of the trailing block; if its
    diagonal vanishes entirely, symmetrize on the first nonzero off-diagonal
    pair before pivoting.
    """
    _require_symmetric(q, "diagonalization")
    n = q.dim
    g = [list(row) for row in q.gram]
    pmat = [list(row) for row in identity(n)]

    def add_col(dst, src, c):
        for r in range(n):
            g[r][dst] += c * g[r][src]
        for r in range(n):
            g[dst][r] += c * g[src][r]
        for r in range(n):
            pmat[r][dst] += c * pmat[r][src]

    def swap_col(i, j):
        for r in range(n):
            g[r][i], g[r][j] = g[r][j], g[r][i]
        g[i], g[j] = g[j], g[i]
        for r in range(n):
            pmat[r][i], pmat[r][j] = pmat[r][j], pmat[r][i]

    for k in range(n):
        if g[k][k] == 0:
            piv = next((j for j in range(k, n) if g[j][j] != 0), None)
            if piv is not None:
                if piv != k:
                    swap_col(k, piv)
            else:
                pair = next(((i, j) for i in range(k, n)
                             for j in range(i + 1, n) if g[i][j] != 0), None)
                if pair is None:
                    raise ValueError("degenerate Gram matrix")
                i, j = pair
                add_col(i, j, Fraction(1))
                if i != k:
                    swap_col(k, i)
        pivot = g[k][k]
        for r in range(k + 1, n):
            if g[k][r] != 0:
                add_col(r, k, -g[k][r] / pivot)
    diag = tuple(g[i][i] for i in range(n))
    return diag, tuple(tuple(row) for row in pmat)


# ---------------------------------------------------------------------------
# invariants and the isotropy criterion


@dataclass(frozen=True)
class FormInvariants:
    dim: int
    det: SquareClass
    dpm: SquareClass
    hasse: int
    witt_index: int
    aniso_dim: int

    def __post_init__(self):
        if self.aniso_dim > 4 or self.dim != self.aniso_dim + 2 * self.witt_index:
            raise ValueError("inconsistent Witt data")


@dataclass(frozen=True)
class WittClass:
    """Invariants of an anisotropic form over Q_p; existence is re-checked."""

    aniso_dim: int
    det: SquareClass
    hasse: int
    p: Prime

    def __post_init__(self):
        object.__setattr__(self, "p", as_prime(self.p))
        d, dc, h, p = self.aniso_dim, self.det, self.hasse, self.p
        ok = {
            0: lambda: dc.is_trivial() and h == 1,
            1: lambda: h == 1,
            2: lambda: dc != square_class(-1, p),
            3: lambda: h != hilbert_qp(-1, -dc.representative, p),
            4: lambda: dc.is_trivial() and h != hilbert_qp(-1, -1, p),
        }.get(d)
        if ok is None or not ok():
            raise ValueError("triple is not realized by an anisotropic form")


def _isotropic_triple(dim: int, detc: SquareClass, hasse: int, p: Prime) -> bool:
    if dim <= 1:
        return False
    if dim == 2:
        return detc == square_class(-1, p)
    if dim == 3:
        return hasse == hilbert_qp(-1, -detc.representative, p)
    if dim == 4:
        return (not detc.is_trivial()) or hasse == hilbert_qp(-1, -1, p)
    return True


def invariants(q: QuadForm) -> FormInvariants:
    """dim, det class, discriminant, Hasse invariant and Witt data."""
    _require_symmetric(q, "invariants")
    p = q.p
    diag, _ = diagonalize(q)
    n = len(diag)
    if n == 0:
        one = square_class(1, p)
        return FormInvariants(0, one, one, 1, 0, 0)
    detc = square_class(_prod(diag), p)
    dpm = square_class((-1) ** (n * (n - 1) // 2) * _prod(diag), p)
    hasse = 1
    for i in range(n):
        for j in range(i + 1, n):
            hasse *= hilbert_qp(diag[i], diag[j], p)
    dim, dc, h = n, detc, hasse
    witt = 0
    while _isotropic_triple(dim, dc, h, p):
        dc_new = square_class(-dc.representative, p)
        h = h * hilbert_qp(-1, dc_new.representative, p)
        dc = dc_new
        dim -= 2
        witt += 1
    return FormInvariants(n, detc, dpm, hasse, witt, dim)


def _prod(xs) -> Fraction:
    out = Fraction(1)
    for x in xs:
        out *= x
    return out


def is_isotropic(q: QuadForm) -> bool:
    inv = invariants(q)
    return _isotropic_triple(inv.dim, inv.det, inv.hasse, q.p)


def witt_decompose(q: QuadForm) -> tuple[int, WittClass]:
    """Witt index and the invariants of the anisotropic kernel."""
    inv = invariants(q)
    p = q.p
    dc, h = inv.det, inv.hasse
    for _ in range(inv.witt_index):
        dc_new = square_class(-dc.representative, p)
        h = h * hilbert_qp(-1, dc_new.representative, p)
        dc = dc_new
    if inv.aniso_dim == 0:
        dc, h = square_class(1, p), 1
    return inv.witt_index, WittClass(inv.aniso_dim, dc, h, p)


def equivalent(q1: QuadForm, q2: QuadForm) -> bool:
    """Equivalence over Q_p: equal dim, det class and Hasse invariant."""
    _same_prime(q1, q2)
    _require_symmetric(q1, "equivalence")
    _require_symmetric(q2, "equivalence")
    if q1.dim != q2.dim:
        return False
    i1, i2 = invariants(q1), invariants(q2)
    return i1.det == i2.det and i1.hasse == i2.hasse


def witt_equivalent(q1: QuadForm, q2: QuadForm) -> bool:
    _same_prime(q1, q2)
    _, k1 = witt_decompose(q1)
    _, k2 = witt_decompose(q2)
    return k1 == k2


# ---------------------------------------------------------------------------
# constructors


def direct_sum(q1: QuadForm, q2: QuadForm) -> QuadForm:
    _same_prime(q1, q2)
    if q1.symmetry != q2.symmetry:
        raise ValueError("direct sum of forms with different symmetry tags")
    return QuadForm(block_diag(q1.gram, q2.gram), q1.p, None, q1.symmetry)


def scale(c, q: QuadForm) -> QuadForm:
    c = fr(c)
    if c == 0:
        raise ValueError("scaling by zero")
    g = tuple(tuple(c * x for x in row) for row in q.gram)
    return QuadForm(g, q.p, None, q.symmetry)


def hyperbolic(k: int, p) -> QuadForm:
    """Orthogonal sum of k hyperbolic planes."""
    if k < 0:
        raise ValueError("negative number of planes")
    plane = mat([[0, 1], [1, 0]])
    g = block_diag(*([plane] * k)) if k else ()
    return QuadForm(g, as_prime(p), f"{k}Hy", SYMMETRIC)


def norm_form(dclass, p) -> QuadForm:
    """Binary norm form of the quadratic etale algebra with discriminant class d.

    The split algebra (trivial class) gives the hyperbolic plane; a field
    K = Q_p(sqrt(d)) gives <1, -d>.
    """
    p = as_prime(p)
    d = dclass.representative if isinstance(dclass, SquareClass) else fr(dclass)
    if square_class(d, p).is_trivial():
        return hyperbolic(1, p)
    return diag_form([1, -d], p, "norm form")


def represents(q: QuadForm, a) -> bool:
    """Whether the nonzero scalar a is represented: q + <-a> is isotropic."""
    a = fr(a)
    if a == 0:
        raise ValueError("representing zero is not the question here")
    _require_symmetric(q, "represents")
    if q.dim == 0:
        return False
    return is_isotropic(direct_sum(q, diag_form([-a], q.p)))
