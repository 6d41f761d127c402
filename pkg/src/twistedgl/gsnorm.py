"""The unipotent block formalism and its norm correspondence.

The ambient space V1 = H-dual + V + H carries the block form
[[0,0,I],[0,Q,0],[eps I,0,0]].  Pairs (X, Y) with the closure condition
Y + eps Y^T + X Q^-1 X^T = 0 name unipotent elements u(X, Y); invertible
pairs rigidify to a twisted-space point delta (Gram Y) together with an
isometry phi, and the norm map 1 + Q^-1 X^T Y^-1 X lands in the isometry
group of (V, q).  Dual bases are fixed once so every checked transpose is a
literal matrix transpose.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .classes import ClassParameter
from .etale import char_poly, tau, very_regular
from .linalg import (Mat, block_diag, charpoly, det, from_blocks, identity,
                     inverse, mat, mat_add, mat_mul, mat_neg, mat_scale,
                     mat_sub, poly_mul, poly_squarefree, transpose, zeros)
from .qform import ALTERNATING, SYMMETRIC, QuadForm, is_isotropic


@dataclass(frozen=True)
class AmbientSpace:
    """V1 = H-dual + V + H with the standard totally-isotropic flag blocks."""

    q_V: QuadForm
    n: int
    epsilon: int
    gram_q1: Mat

    @property
    def p(self):
        return self.q_V.p


def make_ambient(q_V: QuadForm, epsilon: int) -> AmbientSpace:
    """Assemble the block Gram; rejects the excluded small orthogonal case."""
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    if epsilon == 1 and q_V.symmetry != SYMMETRIC:
        raise ValueError("epsilon = +1 needs a symmetric Gram")
    if epsilon == -1 and q_V.symmetry != ALTERNATING:
        raise ValueError("epsilon = -1 needs an alternating Gram")
    n = q_V.dim
    if n == 0:
        raise ValueError("V must be nonzero")
    if epsilon == 1 and n == 2 and q_V.dim % 2 == 0 and is_isotropic(q_V):
        raise ValueError("isotropic binary V is excluded in the even orthogonal case")
    eye = identity(n)
    z = zeros(n)
    g1 = from_blocks([
        [z, z, eye],
        [z, q_V.gram, z],
        [mat_scale(epsilon, eye), z, z],
    ])
    if det(g1) == 0:
        raise RuntimeError("ambient block form is degenerate")
    return AmbientSpace(q_V, n, epsilon, g1)


@dataclass(frozen=True)
class GSConfiguration:
    """An ambient space with X: V -> H-dual and Y: H -> H-dual."""

    ambient: AmbientSpace
    X: Mat
    Y: Mat

    def __post_init__(self):
        n = self.ambient.n
        x, y = mat(self.X), mat(self.Y)
        object.__setattr__(self, "X", x)
        object.__setattr__(self, "Y", y)
        if len(x) != n or len(x[0]) != n or len(y) != n or len(y[0]) != n:
            raise ValueError("X and Y must be n x n")


def xy_condition(config: GSConfiguration) -> bool:
    """Exact check of Y + eps Y^T + X Q^-1 X^T = 0."""
    amb = config.ambient
    qinv = inverse(amb.q_V.gram)
    total = mat_add(config.Y, mat_scale(amb.epsilon, transpose(config.Y)))
    total = mat_add(total, mat_mul(config.X, mat_mul(qinv, transpose(config.X))))
    return all(v == 0 for row in total for v in row)


def random_config(ambient: AmbientSpace, seed: int,
                  require_very_regular: bool = True,
                  retry_budget: int = 10000) -> GSConfiguration:
    """Seeded random member of U': invertible X, Y with the closure condition.

    Y is the symmetric particular solution -1/2 X Q^-1 X^T plus a random
    check-skew matrix; rejection sampling enforces invertibility and, by
    default, very-regularity of the norm.  Deterministic per seed.
    """
    rng = random.Random(seed)
    n, eps = ambient.n, ambient.epsilon
    qinv = inverse(ambient.q_V.gram)
    for _ in range(retry_budget):
        x = mat([[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)])
        if det(x) == 0:
            continue
        r = mat([[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)])
        s = mat_sub(r, mat_scale(eps, transpose(r)))  # S + eps S^T = 0
        y = mat_add(mat_scale(Fraction(-1, 2), mat_mul(x, mat_mul(qinv, transpose(x)))), s)
        if det(y) == 0:
            continue
        config = GSConfiguration(ambient, x, y)
        if require_very_regular:
            gamma = gs_norm(config)
            cp = charpoly(gamma)
            if not poly_squarefree(cp):
                continue
            if det(mat_sub(gamma, identity(n))) == 0 or \
                    det(mat_add(gamma, identity(n))) == 0:
                continue
        return config
    raise RuntimeError(f"retry budget exhausted for seed {seed}")


def u_of_xy(config: GSConfiguration) -> Mat:
    """The unipotent isometry 1 + n(X, Y) in block form on (H-dual, V, H)."""
    if not xy_condition(config):
        raise ValueError("closure condition violated")
    amb = config.ambient
    n = amb.n
    qinv = inverse(amb.q_V.gram)
    xprime = mat_neg(mat_mul(qinv, transpose(config.X)))  # H -> V
    z = zeros(n)
    nil = from_blocks([
        [z, config.X, config.Y],
        [z, z, xprime],
        [z, z, z],
    ])
    return mat_add(identity(3 * n), nil)


def rigidify(config: GSConfiguration) -> tuple[Mat, Mat]:
    """(delta, phi): the twisted point with Gram Y and the exact isometry.

    phi = Q^-1 X^T carries (H, delta + eps delta^T) onto (V, -eps q).
    """
    if not xy_condition(config):
        raise ValueError("closure condition violated")
    if det(config.X) == 0 or det(config.Y) == 0:
        raise ValueError("rigidification needs invertible X and Y")
    qinv = inverse(config.ambient.q_V.gram)
    phi = mat_mul(qinv, transpose(config.X))
    return config.Y, phi


def gs_norm(config: GSConfiguration) -> Mat:
    """The norm 1 + Q^-1 X^T Y^-1 X, an exact isometry of (V, q)."""
    if det(config.X) == 0 or det(config.Y) == 0:
        raise ValueError("norm needs invertible X and Y")
    amb = config.ambient
    qinv = inverse(amb.q_V.gram)
    gamma = mat_add(identity(amb.n), mat_mul(
        qinv, mat_mul(transpose(config.X), mat_mul(inverse(config.Y), config.X))))
    return gamma


def gs_section(ambient: AmbientSpace, x: Mat, gamma: Mat) -> Mat:
    """Y = X (gamma - 1)^-1 Q^-1 X^T: the section of the norm at this X."""
    x = mat(x)
    gamma = mat(gamma)
    n = ambient.n
    if det(x) == 0:
        raise ValueError("section needs an invertible X")
    gm1 = mat_sub(gamma, identity(n))
    if det(gm1) == 0:
        raise ValueError("gamma - 1 must be invertible")
    qinv = inverse(ambient.q_V.gram)
    return mat_mul(x, mat_mul(inverse(gm1), mat_mul(qinv, transpose(x))))


def gs_param_check(config: GSConfiguration, x_param: ClassParameter) -> bool:
    """Verify the parameter correspondence along the norm.

    Even orthogonal and symplectic: char poly of the norm equals that of
    mult by -eps tau(x)/x.  Odd orthogonal: char poly of -norm equals that
    of mult by tau(x)/x times the trivial eigenvalue block (T - 1).
    """
    amb = config.ambient
    odd = amb.epsilon == 1 and amb.n % 2 == 1
    if x_param.kind != ("tGL-odd" if odd else "tGL-even"):
        raise ValueError("parameter kind does not match the ambient signature")
    if not very_regular(x_param.x):
        raise ValueError("parameter is not very regular")
    gamma = gs_norm(config)
    cp_gamma = charpoly(gamma)
    if not poly_squarefree(cp_gamma):
        raise ValueError("norm is not very regular for this configuration")
    from .classes import twist_invariant
    t_minus_1 = (Fraction(-1), Fraction(1))
    ratio = tau(x_param.x) * x_param.x.inverse()
    delta_fp = twist_invariant(config.Y)
    expected_fp = char_poly(ratio)
    if odd:
        expected_fp = poly_mul(expected_fp, t_minus_1)
    if delta_fp != expected_fp:
        return False
    if odd:
        return charpoly(mat_neg(gamma)) == poly_mul(char_poly(ratio), t_minus_1)
    return cp_gamma == char_poly(ratio * (-amb.epsilon))
