"""Shared fixtures and independent numerical oracles used across the suite.

The oracles here deliberately avoid the library's own code paths: integrals
are done by direct trapezoid sums on explicit formula evaluations, roots by
numpy's companion-matrix solver on hand-built polynomials, and so on.  Tests
compare library output against these, never the other way round.
"""

import numpy as np
import pytest

from model_space_lab.blaschke import BlaschkeProduct


@pytest.fixture(scope="session")
def f1():
    """Order-3 product z^3: all zeros at the origin, constant 1."""
    return BlaschkeProduct(zeros=(0.0, 0.0, 0.0))


@pytest.fixture(scope="session")
def f2():
    """Asymmetric order-3 product with zeros 0.5, 0, -0.5 and constant 1."""
    return BlaschkeProduct(zeros=(0.5, 0.0, -0.5))


def oracle_circle_mean(func, n=4096):
    """Trapezoid mean of ``func`` over the unit circle: (1/2pi) * integral.

    For smooth periodic integrands the uniform-grid mean converges
    geometrically, so n=4096 is far beyond machine precision for the
    rational functions exercised here.
    """
    z = np.exp(2j * np.pi * np.arange(n) / n)
    return np.mean(func(z))


def oracle_kernel_values(b, lam, z):
    """Reproducing kernel at ``lam`` evaluated from its defining formula."""
    return (1.0 - np.conj(b(lam)) * b(z)) / (1.0 - np.conj(lam) * z)


def oracle_inner(fvals_func, gvals_func, n=4096):
    """Quadrature inner product <f, g> from raw evaluation callables."""
    return oracle_circle_mean(lambda z: fvals_func(z) * np.conj(gvals_func(z)), n)
