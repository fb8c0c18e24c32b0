"""Guillemin potential on the polytope interior and its Legendre dual.

The dual potential is ``G(xi) = 1/2 sum_j L_j(xi) log L_j(xi)``; its
gradient maps the interior of the polytope diffeomorphically onto the
real torus coordinates, and its Hessian is inverse to the Hessian of
the Kahler potential F.  A calibration constant (depending only on the
row sums of the normal matrix) reconciles the gradient with the
logarithms of the quotient-torus coordinates, so roundtrips through
homogeneous coordinates are exact; both the raw and the calibrated
gradients are exposed.
"""

import numpy as np

from .errors import ConditioningError, DomainError, SolverError
from .polytope import enumerate_vertices

__all__ = ["GuilleminPotential", "fulton_potential_p1", "fulton_moment_p1"]


class GuilleminPotential:
    """Potential machinery attached to a half-space set.

    Parameters
    ----------
    halfspaces : HalfSpaceSet
        The moment polytope data.  Gradients and Hessians are defined
        on the strict interior; the value extends to the boundary with
        the convention ``0 log 0 = 0``.
    """

    def __init__(self, halfspaces):
        self.hs = halfspaces
        self._b = halfspaces.normals.to_numpy()   # n x d
        sigma = np.array(halfspaces.normals.row_sums(), dtype=float)
        self.calibration = 0.5 * (1.0 - np.log(2.0)) * sigma
        self._init_point = None

    @property
    def dim(self):
        return self.hs.dim

    def _forms(self, xi, strict):
        forms = self.hs.affine_forms(xi)
        if strict:
            if np.any(forms <= 0.0):
                raise DomainError("point is not in the polytope interior")
        elif np.any(forms < 0.0):
            raise DomainError("point is outside the polytope")
        return forms

    def G(self, xi):
        """Potential value; finite on the boundary via 0 log 0 = 0."""
        forms = self._forms(xi, strict=False)
        terms = np.where(forms > 0.0, forms * np.log(forms,
                                                     where=forms > 0.0,
                                                     out=np.zeros_like(forms)),
                         0.0)
        return 0.5 * float(np.sum(terms))

    def grad_G(self, xi):
        """Raw gradient, interior only."""
        forms = self._forms(xi, strict=True)
        return 0.5 * self._b @ (np.log(forms) + 1.0)

    def grad_G_calibrated(self, xi):
        """Gradient minus the calibration constant: the torus coordinate
        logarithms of the corresponding quotient point."""
        return self.grad_G(xi) - self.calibration

    def hess_G(self, xi):
        """Hessian ``1/2 sum_j v^j (v^j)^T / L_j``; symmetric positive
        definite on the interior."""
        forms = self._forms(xi, strict=True)
        return 0.5 * (self._b / forms) @ self._b.T

    def hess_F(self, xi):
        """Hessian of the dual potential at the dual point: the inverse."""
        h = self.hess_G(xi)
        if np.linalg.cond(h) > 1e14:
            raise ConditioningError(
                "Hessian is numerically singular at this point")
        return np.linalg.inv(h)

    def _initial_point(self):
        if self._init_point is None:
            if self.hs.is_bounded():
                verts = enumerate_vertices(self.hs)
                self._init_point = np.mean([v.xi for v in verts], axis=0)
            else:
                self._init_point = np.array(self.hs.interior_point)
        return self._init_point

    def legendre_to_xi(self, x, tol=1e-12, max_iter=100):
        """Invert the gradient map: the interior point with
        ``grad_G_calibrated(xi) = x``.

        Damped Newton iteration with an interior safeguard: each step is
        scaled so that no facet value loses more than 99% of its current
        value, then backtracked until the residual decreases.
        """
        x = np.asarray(x, dtype=float)
        target = x + self.calibration
        xi = np.array(self._initial_point())
        forms = self.hs.affine_forms(xi)
        r = 0.5 * self._b @ (np.log(forms) + 1.0) - target
        rnorm = np.max(np.abs(r))
        for iteration in range(max_iter):
            if rnorm <= tol:
                return xi
            hess = 0.5 * (self._b / forms) @ self._b.T
            step = -np.linalg.solve(hess, r)
            d_forms = step @ self._b
            shrinking = d_forms < 0.0
            t = 1.0
            if np.any(shrinking):
                t = min(1.0, float(np.min(
                    0.99 * forms[shrinking] / -d_forms[shrinking])))
            accepted = False
            for _ in range(60):
                xi_new = xi + t * step
                forms_new = self.hs.affine_forms(xi_new)
                if np.all(forms_new > 0.0):
                    r_new = 0.5 * self._b @ (np.log(forms_new) + 1.0) - target
                    if np.max(np.abs(r_new)) < rnorm:
                        accepted = True
                        break
                t *= 0.5
            if not accepted:
                raise SolverError("Legendre inversion stalled",
                                  residual=rnorm, iterations=iteration)
            xi, forms, r = xi_new, forms_new, r_new
            rnorm = np.max(np.abs(r))
        if rnorm <= tol:
            return xi
        raise SolverError(f"Legendre inversion did not reach {tol}",
                          residual=rnorm, iterations=max_iter)

    def F(self, x):
        """Kahler potential via the Legendre pairing
        ``F(x) = <x, xi(x)> - G(xi(x))`` (this fixes the additive
        constant)."""
        xi = self.legendre_to_xi(x)
        return float(np.dot(x, xi)) - self.G(xi)

    def metric_matrix(self, xi=None, x=None):
        """Riemannian metric blocks, 2n x 2n.

        With ``xi`` given the matrix is ``diag(Hess G, Hess F)`` in
        moment/angle coordinates; with ``x`` given it is
        ``diag(Hess F, Hess F)`` in log-torus/angle coordinates.
        """
        if (xi is None) == (x is None):
            raise ValueError("give exactly one of xi, x")
        if xi is None:
            xi = self.legendre_to_xi(x)
            hf = self.hess_F(xi)
            return _block_diag(hf, hf)
        return _block_diag(self.hess_G(xi), self.hess_F(xi))

    def symplectic_matrix(self, coords="xi_theta", xi=None, x=None):
        """Symplectic form matrix: standard in moment/angle coordinates,
        ``[[0, Hess F], [-Hess F, 0]]`` in log-torus/angle coordinates."""
        n = self.dim
        if coords == "xi_theta":
            eye = np.eye(n)
            return np.block([[np.zeros((n, n)), eye],
                             [-eye, np.zeros((n, n))]])
        if coords != "x_theta":
            raise ValueError(f"unknown coordinate system {coords!r}")
        if xi is None:
            if x is None:
                raise ValueError("x_theta form needs a point")
            xi = self.legendre_to_xi(x)
        hf = self.hess_F(xi)
        zero = np.zeros((n, n))
        return np.block([[zero, hf], [-hf, zero]])


def _block_diag(a, b):
    n = a.shape[0]
    out = np.zeros((2 * n, 2 * n))
    out[:n, :n] = a
    out[n:, n:] = b
    return out


def fulton_potential_p1(k, x):
    """Potential on P^1 induced by degree-k line bundle sections:
    ``1/2 log sum_m exp(2 m x)``, evaluated stably."""
    if k < 1:
        raise ValueError("the bundle degree must be a positive integer")
    x = np.asarray(x, dtype=float)
    exponents = 2.0 * np.arange(k + 1) * x[..., None]
    peak = np.max(exponents, axis=-1)
    return 0.5 * (peak + np.log(
        np.sum(np.exp(exponents - peak[..., None]), axis=-1)))


def fulton_moment_p1(k, x):
    """Derivative of the section potential; maps the line onto (0, k)."""
    if k < 1:
        raise ValueError("the bundle degree must be a positive integer")
    x = np.asarray(x, dtype=float)
    m = np.arange(k + 1)
    exponents = 2.0 * m * x[..., None]
    peak = np.max(exponents, axis=-1)
    w = np.exp(exponents - peak[..., None])
    return np.sum(m * w, axis=-1) / np.sum(w, axis=-1)
