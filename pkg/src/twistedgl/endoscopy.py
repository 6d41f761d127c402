"""Elliptic endoscopic data, regular-nilpotent invariants and transfer factors.

The transfer factor is Waldspurger's Witt-comparison formula for quasisplit
even orthogonal spaces: +1 exactly when the symmetrized twisted point
1/2 (delta + delta^T) is Witt-equivalent to (-1)^n times the norm form of
the discriminant algebra, and -1 otherwise.  Its Whittaker normalization
divides by the epsilon factor, an exact eighth root of unity.  The flagship
cross-check compares this against the Weil index of 2 (-1)^n q computed from
the rank-1 tables; the two sides share no code path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .etale import EtaleAlgebraWithInvolution, AlgebraElement, trace_form_quadratic
from .gsnorm import GSConfiguration, gs_norm, rigidify, xy_condition
from .linalg import (Mat, block_diag, charpoly, det, identity, mat, mat_add,
                     mat_mul, mat_neg, mat_scale, mat_sub, poly_squarefree,
                     transpose, zeros)
from .localfield import Prime, SquareClass, as_prime, square_class, square_class_table
from .qform import (QuadForm, diag_form, direct_sum, hyperbolic, invariants,
                    norm_form, quad_form, represents, scale, witt_decompose,
                    witt_equivalent)
from .weil import Mu8, epsilon_half, weil_index


@dataclass(frozen=True)
class EndoscopicDatum:
    """An elliptic datum (n_O, n_S, chi), chi encoded by its discriminant class."""

    n_O: int
    n_S: int
    chi: SquareClass

    def __post_init__(self):
        if self.n_O < 0 or self.n_S < 0 or self.n_O % 2 or self.n_S % 2:
            raise ValueError("both parts must be even and non-negative")
        if self.n_O == 0 and not self.chi.is_trivial():
            raise ValueError("chi must be trivial when n_O = 0")
        if self.n_O == 2 and self.chi.is_trivial():
            raise ValueError("chi must be nontrivial when n_O = 2")

    @property
    def simple(self) -> bool:
        return self.n_O == 0 or self.n_S == 0

    def __str__(self) -> str:
        return f"({self.n_O}, {self.n_S}, chi~{self.chi})"


def enumerate_elliptic_data(n: int, p) -> tuple[EndoscopicDatum, ...]:
    """All elliptic data for the rank-2n twisted space over Q_p."""
    if n < 1:
        raise ValueError("n must be positive")
    prime = as_prime(p)
    classes = square_class_table(prime)
    trivial = square_class(1, prime)
    out = []
    for n_o in range(0, 2 * n + 1, 2):
        n_s = 2 * n - n_o
        if n_o == 0:
            out.append(EndoscopicDatum(n_o, n_s, trivial))
        elif n_o == 2:
            out.extend(EndoscopicDatum(n_o, n_s, c) for c in classes if not c.is_trivial())
        else:
            out.extend(EndoscopicDatum(n_o, n_s, c) for c in classes)
    return tuple(out)


def quasisplit_space(n_o: int, kclass, c, p) -> QuadForm:
    """(n_O - 2) hyperbolic planes plus c times the norm form of K."""
    prime = as_prime(p)
    if n_o < 2 or n_o % 2:
        raise ValueError("need an even n_O >= 2")
    c = c.representative if isinstance(c, SquareClass) else c
    tail = scale(c, norm_form(kclass, prime))
    if n_o == 2:
        return tail
    return direct_sum(hyperbolic((n_o - 2) // 2, prime), tail)


# ---------------------------------------------------------------------------
# theta space and regular nilpotents


@dataclass(frozen=True)
class ThetaSpace:
    """F^2n with the fixed symplectic base point of the twisted space.

    Basis order (e_1 .. e_n, e_-n .. e_-1); the form pairs e_i with e_-i
    through the signs (-1)^i (i > 0) and (-1)^(i+1) (i < 0).
    """

    n: int
    theta_gram: Mat

    @property
    def dim(self) -> int:
        return 2 * self.n


def _theta_pos(i: int, n: int) -> int:
    return i - 1 if i > 0 else n + (n + i)


def theta_space(n: int) -> ThetaSpace:
    if n < 1:
        raise ValueError("n must be positive")
    g = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
    for i in range(1, n + 1):
        g[_theta_pos(i, n)][_theta_pos(-i, n)] = Fraction((-1) ** i)
        g[_theta_pos(-i, n)][_theta_pos(i, n)] = Fraction((-1) ** (i + 1))
    gram = tuple(tuple(row) for row in g)
    if transpose(gram) != mat_neg(gram) or det(gram) == 0:
        raise RuntimeError("theta base point must be a symplectic form")
    return ThetaSpace(n, gram)


def regular_nilpotent_sp(n: int) -> Mat:
    """The standard regular nilpotent in the symplectic Lie algebra of theta.

    e_1 -> 0, e_i -> e_(i-1) for 1 < i <= n, e_-n -> e_n, e_i -> e_(i-1)
    for -n < i <= -1.
    """
    if n < 1:
        raise ValueError("n must be positive")
    dim = 2 * n
    cols = {}
    for i in range(2, n + 1):
        cols[_theta_pos(i, n)] = _theta_pos(i - 1, n)
    cols[_theta_pos(-n, n)] = _theta_pos(n, n)
    for i in range(-n + 1, 0):
        cols[_theta_pos(i, n)] = _theta_pos(i - 1, n)
    m = [[Fraction(0)] * dim for _ in range(dim)]
    for src, dst in cols.items():
        m[dst][src] = Fraction(1)
    nil = tuple(tuple(row) for row in m)
    theta = theta_space(n).theta_gram
    if mat_add(mat_mul(transpose(nil), theta), mat_mul(theta, nil)) != zeros(dim):
        raise RuntimeError("nilpotent fails the symplectic Lie algebra identity")
    return nil


def _rank_one_class(s: Mat, p: Prime) -> SquareClass:
    """Extract eta from a symmetric matrix equivalent to (null) + <eta>."""
    n = len(s)
    if s != transpose(s):
        raise RuntimeError("expected a symmetric matrix")
    diag_entry = None
    for i in range(n):
        for j in range(n):
            if s[i][j] != 0:
                if s[i][i] == 0 or s[j][j] == 0:
                    raise RuntimeError("rank exceeds one after null reduction")
                diag_entry = s[i][i]
    if diag_entry is None:
        raise RuntimeError("null form: no eta to extract")
    # rank-one check: all 2x2 minors vanish
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                for l in range(k + 1, n):
                    if s[i][k] * s[j][l] - s[i][l] * s[j][k] != 0:
                        raise RuntimeError("rank exceeds one after null reduction")
    return square_class(diag_entry, p)


def eta_sp(n: int, p=2) -> SquareClass:
    """The square class of theta(v | N^(2n-1) v'); equals the trivial class."""
    prime = as_prime(p)
    theta = theta_space(n).theta_gram
    nil = regular_nilpotent_sp(n)
    power = identity(2 * n)
    for _ in range(2 * n - 1):
        power = mat_mul(power, nil)
    s = mat_mul(theta, power)
    return _rank_one_class(s, prime)


def split_odd_space(m: int, y, p) -> QuadForm:
    """The split odd space m Hy + <y> in the paired basis (e_i, e_-i, v)."""
    prime = as_prime(p)
    dim = 2 * m + 1
    g = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(m):
        g[i][m + i] = Fraction(1)
        g[m + i][i] = Fraction(1)
    g[2 * m][2 * m] = Fraction(y)
    return quad_form(tuple(tuple(row) for row in g), prime)


def regular_nilpotent_so(q_flat: QuadForm) -> Mat:
    """The regular nilpotent of the split odd space built by split_odd_space.

    e_i -> e_(i+1) (1 <= i < m), e_m -> v, v -> -y e_-m, e_i -> -e_(i+1)
    (-m <= i < -1), e_-1 -> 0; basis order (e_1..e_m, e_-1..e_-m, v).
    """
    dim = q_flat.dim
    if dim % 2 == 0:
        raise ValueError("expected an odd-dimensional split space")
    m = (dim - 1) // 2
    g = q_flat.gram
    y = g[2 * m][2 * m]
    expected = split_odd_space(m, y, q_flat.p)
    if g != expected.gram:
        raise ValueError("Gram is not in the canonical split odd shape")
    # positions: e_i -> i-1 (1<=i<=m), e_-i -> m+i-1, v -> 2m
    mtx = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(1, m):
        mtx[i][i - 1] = Fraction(1)          # e_i -> e_{i+1}
    if m >= 1:
        mtx[2 * m][m - 1] = Fraction(1)      # e_m -> v
        mtx[2 * m - 1][2 * m] = -y           # v -> -y e_{-m}
    for j in range(2, m + 1):
        # e_{-j} -> -e_{-(j-1)}: the chain descends back to e_{-1} -> 0
        mtx[m + j - 2][m + j - 1] = Fraction(-1)
    nil = tuple(tuple(row) for row in mtx)
    if mat_add(mat_mul(transpose(nil), g), mat_mul(g, nil)) != zeros(dim):
        raise RuntimeError("nilpotent fails the orthogonal Lie algebra identity")
    return nil


def eta_so(v_prime: QuadForm, y, n: int) -> SquareClass:
    """The square class q(v | N^(2n-2) v') of the even orthogonal space.

    v_prime is the binary part of (V, q) = (n-1) Hy + (V', q'); y must be
    represented by it.  For n = 1 the class of y itself is returned; for
    n > 1 the value is extracted from the explicit nilpotent construction
    (and equals (-1)^(n-1) y).
    """
    prime = v_prime.p
    if v_prime.dim != 2:
        raise ValueError("the anisotropic part must be binary")
    if isinstance(y, SquareClass):
        y = y.representative
    y = Fraction(y)
    if not represents(v_prime, y):
        raise ValueError("y is not represented by the binary part")
    if n == 1:
        return square_class(y, prime)
    m = n - 1
    q_flat = split_odd_space(m, y, prime)
    nil = regular_nilpotent_so(q_flat)
    power = identity(q_flat.dim)
    for _ in range(2 * n - 2):
        power = mat_mul(power, nil)
    s = mat_mul(q_flat.gram, power)
    return _rank_one_class(s, prime)


# ---------------------------------------------------------------------------
# transfer factors


def transfer_factor(gamma_space: QuadForm, delta: Mat, n: int) -> int:
    """Waldspurger's Witt comparison: the plain transfer factor in {+1, -1}.

    q_delta = 1/2 (delta + delta^T) must be non-degenerate (delta very
    regular); K is the discriminant algebra of the orthogonal space.
    """
    delta = mat(delta)
    p = gamma_space.p
    half = Fraction(1, 2)
    sym = mat_scale(half, mat_add(delta, transpose(delta)))
    if det(sym) == 0:
        raise ValueError("singular symmetrization: delta is not very regular")
    q_delta = quad_form(sym, p)
    kclass = invariants(gamma_space).dpm
    target = scale((-1) ** n, norm_form(kclass, p))
    return 1 if witt_equivalent(q_delta, target) else -1


def transfer_factor_whittaker(gamma_space: QuadForm, delta: Mat, n: int) -> Mu8:
    """The Whittaker-normalized factor: epsilon(1/2, chi, psi)^-1 times the above."""
    kclass = invariants(gamma_space).dpm
    plain = transfer_factor(gamma_space, delta, n)
    return epsilon_half(kclass, gamma_space.p).inverse() * Mu8.from_sign(plain)


def is_quasisplit_even(q: QuadForm) -> bool:
    """Quasisplit even orthogonal space: anisotropic kernel of dimension <= 2."""
    if q.dim % 2:
        return False
    _, kernel = witt_decompose(q)
    return kernel.aniso_dim <= 2


def gs_constancy_check(config: GSConfiguration, n: int) -> bool:
    """The flagship identity: Whittaker factor at (norm, delta) against the
    Weil index of 2 (-1)^n q, computed through disjoint code paths."""
    amb = config.ambient
    if amb.epsilon != 1 or amb.n != 2 * n:
        raise ValueError("constancy check lives on even orthogonal ambients")
    if not is_quasisplit_even(amb.q_V):
        raise ValueError("the orthogonal group must be quasisplit")
    gamma = gs_norm(config)
    cp = charpoly(gamma)
    if not poly_squarefree(cp) or det(mat_sub(gamma, identity(amb.n))) == 0 \
            or det(mat_add(gamma, identity(amb.n))) == 0:
        raise ValueError("norm is not very regular for this configuration")
    delta, _ = rigidify(config)
    lhs = transfer_factor_whittaker(amb.q_V, delta, n)
    rhs = weil_index(scale(2 * (-1) ** n, amb.q_V))
    return lhs == rhs


def separation_check(algebra: EtaleAlgebraWithInvolution, c1: AlgebraElement,
                     c2: AlgebraElement) -> bool:
    """Twists over one algebra give trace forms of equal determinant class."""
    d1 = invariants(trace_form_quadratic(algebra, c1)).det
    d2 = invariants(trace_form_quadratic(algebra, c2)).det
    return d1 == d2
