"""Order-n model space attached to a finite Blaschke product.

Every element of the space is a rational function

    f(z) = (a_0 + a_1 z + ... + a_{n-1} z^{n-1}) / prod_i (1 - conj(w_i) z)

over the fixed denominator built from the zeros w_i of the product B, so the
space is parametrized by the n numerator coefficients.  The inner product is
the boundary L^2 pairing, computed by uniform circle quadrature (which is
geometrically accurate for these rational integrands).  The two structural
players are the reproducing kernel

    k_lam(z) = (1 - conj(B(lam)) B(z)) / (1 - conj(lam) z)

and the canonical conjugation, whose action in coefficient form is
"conjugate and reverse" times the front constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .blaschke import BlaschkeProduct, polynomial_pair
from .config import DEFAULT, NumericConfig

__all__ = [
    "KThetaElement",
    "OrthonormalBasis",
    "QuadratureConvergenceError",
    "DivisionRemainderError",
    "BasisError",
    "inner_product",
    "norm",
    "kernel_element",
    "conjugate",
    "reference_onb",
    "gram_matrix",
    "conjugation_residual",
    "circle_grid",
]


class QuadratureConvergenceError(ArithmeticError):
    """Doubling the quadrature grid moved the result by more than allowed."""


class DivisionRemainderError(ArithmeticError):
    """Synthetic division left a non-negligible remainder."""


class BasisError(ValueError):
    """A set of elements failed an orthonormality or conjugation check."""


@lru_cache(maxsize=16)
def circle_grid(n: int):
    """n-th roots of unity as a read-only complex array."""
    z = np.exp(2j * np.pi * np.arange(n) / n)
    z.flags.writeable = False
    return z


@dataclass(frozen=True)
class KThetaElement:
    """Model-space element stored as numerator coefficients over the fixed denominator.

    ``numerator[k]`` multiplies z^k; the length always equals the order of
    ``theta``.  Elements are immutable; arithmetic returns new instances.
    """

    theta: BlaschkeProduct
    numerator: tuple

    def __post_init__(self):
        coeffs = tuple(complex(a) for a in self.numerator)
        object.__setattr__(self, "numerator", coeffs)
        if len(coeffs) != self.theta.order:
            raise ValueError(
                "numerator needs %d coefficients, got %d"
                % (self.theta.order, len(coeffs))
            )

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        num = np.zeros(z.shape, dtype=complex)
        for a in reversed(self.numerator):
            num = num * z + a
        den = np.ones(z.shape, dtype=complex)
        for w in self.theta.zeros:
            den = den * (1.0 - np.conj(w) * z)
        out = num / den
        return out if out.shape else complex(out)

    def __add__(self, other: "KThetaElement") -> "KThetaElement":
        if self.theta != other.theta:
            raise ValueError("elements live in different model spaces")
        return KThetaElement(
            self.theta,
            tuple(a + b for a, b in zip(self.numerator, other.numerator)),
        )

    def __sub__(self, other: "KThetaElement") -> "KThetaElement":
        return self + (-1.0) * other

    def __rmul__(self, scalar) -> "KThetaElement":
        s = complex(scalar)
        return KThetaElement(self.theta, tuple(s * a for a in self.numerator))


def _values_on_grid(elements, n: int):
    """Stack of element evaluations over the n-point circle grid, shape (k, n)."""
    z = circle_grid(n)
    return np.stack([e(z) for e in elements])


def inner_product(f: KThetaElement, g: KThetaElement, *, config: NumericConfig = DEFAULT):
    """Boundary pairing (1/2pi) * integral of f * conj(g), conjugate-linear in g.

    Computed on the configured uniform grid and cross-checked on a doubled
    grid; a drift above ``config.quadrature_drift`` raises
    QuadratureConvergenceError instead of returning a silently wrong value.
    """
    if f.theta != g.theta:
        raise ValueError("elements live in different model spaces")
    n = config.quadrature_points
    z = circle_grid(n)
    first = np.mean(f(z) * np.conj(g(z)))
    if not config.quadrature_check:
        return complex(first)
    z2 = circle_grid(2 * n)
    second = np.mean(f(z2) * np.conj(g(z2)))
    if abs(second - first) > config.quadrature_drift:
        raise QuadratureConvergenceError(
            "inner product moved by %.3e when doubling the grid"
            % abs(second - first)
        )
    return complex(second)


def norm(f: KThetaElement, *, config: NumericConfig = DEFAULT) -> float:
    return float(np.sqrt(max(np.real(inner_product(f, f, config=config)), 0.0)))


def kernel_element(b: BlaschkeProduct, lam, *, config: NumericConfig = DEFAULT) -> KThetaElement:
    """Reproducing kernel at ``lam`` (closed disc) in coefficient form.

    The numerator of 1 - conj(B(lam)) B(z) over the common denominator is a
    degree-n polynomial exactly divisible by (1 - conj(lam) z); synthetic
    division produces the n kernel coefficients, and the remainder is
    asserted to vanish relative to the coefficient scale.
    """
    lam = complex(lam)
    if abs(lam) > 1.0 + 1e-12:
        raise ValueError("kernel point must lie in the closed disc, got %r" % lam)
    value = b(lam)
    num, den = polynomial_pair(b)
    q = den - np.conj(value) * b.front_constant * num  # ascending, length n+1
    n = b.order
    a = np.zeros(n, dtype=complex)
    a[0] = q[0]
    lam_bar = np.conj(lam)
    for j in range(1, n):
        a[j] = q[j] + lam_bar * a[j - 1]
    remainder = q[n] + lam_bar * a[n - 1]
    scale = max(float(np.max(np.abs(q))), 1e-300)
    if abs(remainder) > config.division_tol * scale:
        raise DivisionRemainderError(
            "kernel division remainder %.3e exceeds %.1e of coefficient scale"
            % (abs(remainder), config.division_tol)
        )
    return KThetaElement(b, tuple(a))


def conjugate(f: KThetaElement) -> KThetaElement:
    """Canonical conjugation in coefficient form.

    On the circle the conjugation acts as f -> B * conj(z f); over the common
    denominator this reduces exactly to reversing the numerator coefficients,
    conjugating them, and multiplying by the front constant.  It is antilinear,
    isometric and involutive.
    """
    c = f.theta.front_constant
    coeffs = tuple(c * np.conj(a) for a in reversed(f.numerator))
    return KThetaElement(f.theta, coeffs)


def gram_matrix(elements, *, config: NumericConfig = DEFAULT):
    """Matrix of pairwise inner products, entry (i, j) = <v_i, v_j>."""
    thetas = {e.theta for e in elements}
    if len(thetas) != 1:
        raise ValueError("elements live in different model spaces")
    n = config.quadrature_points
    vals = _values_on_grid(elements, n)
    first = vals @ np.conj(vals.T) / n
    if not config.quadrature_check:
        return first
    vals2 = _values_on_grid(elements, 2 * n)
    second = vals2 @ np.conj(vals2.T) / (2 * n)
    if np.linalg.norm(second - first) > config.quadrature_drift:
        raise QuadratureConvergenceError(
            "Gram matrix moved by %.3e when doubling the grid"
            % np.linalg.norm(second - first)
        )
    return second


@dataclass(frozen=True)
class OrthonormalBasis:
    """Tuple of elements together with the Gram residual recorded when built."""

    elements: tuple
    gram_residual: float
    tag: str = "onb"

    @classmethod
    def from_elements(cls, elements, *, config: NumericConfig = DEFAULT, tag: str = "onb"):
        elements = tuple(elements)
        g = gram_matrix(elements, config=config)
        residual = float(np.linalg.norm(g - np.eye(len(elements))))
        if residual >= config.basis_tol:
            raise BasisError(
                "Gram residual %.3e is not below %.1e" % (residual, config.basis_tol)
            )
        return cls(elements=elements, gram_residual=residual, tag=tag)

    @property
    def theta(self) -> BlaschkeProduct:
        return self.elements[0].theta

    def __len__(self) -> int:
        return len(self.elements)


def reference_onb(b: BlaschkeProduct, *, config: NumericConfig = DEFAULT) -> OrthonormalBasis:
    """Orthonormal basis from Gram-Schmidt on the monomial numerators.

    Modified Gram-Schmidt run twice keeps the final Gram residual at
    round-off level (well below 1e-12 for well-conditioned denominators).
    """
    n = b.order
    raw = []
    for j in range(n):
        coeffs = [0.0] * n
        coeffs[j] = 1.0
        raw.append(KThetaElement(b, tuple(coeffs)))
    basis = []
    for e in raw:
        v = e
        for _ in range(2):  # re-orthogonalize for round-off hygiene
            for u in basis:
                v = v - inner_product(v, u, config=config) * u
        v = (1.0 / norm(v, config=config)) * v
        basis.append(v)
    return OrthonormalBasis.from_elements(basis, config=config, tag="reference")


def conjugation_residual(basis: OrthonormalBasis, *, config: NumericConfig = DEFAULT) -> float:
    """max_i || C v_i - v_i ||: how far the basis is from being conjugation-fixed."""
    worst = 0.0
    for e in basis.elements:
        worst = max(worst, norm(conjugate(e) - e, config=config))
    return worst
