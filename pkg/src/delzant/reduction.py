"""Moment maps on C^d and the retraction onto the reduced level set.

Every point of the admissible open set U_a can be scaled by a unique
positive element of the quotient torus so that it lands on the level
set ``mu_N = a``; composing with the residual-torus moment map then
yields the moment map of the quotient in homogeneous coordinates.
Finding the scaling is a smooth convex problem solved here by a damped
Newton iteration in log coordinates; closed forms for projective space
and its canonical bundle (including the Cardano radical for the
one-dimensional base) serve as independent oracles.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DomainError, SolverError

__all__ = [
    "RetractionResult", "moment_td", "moment_n", "in_ua", "retract",
    "moment_map", "moment_map_closed_pn", "moment_map_closed_kpn",
    "cardano_lambda_kp1",
]

ZERO_THRESHOLD = 1e-300  # entries below this are exact zeros; no snapping

_EXP_CAP = 709.0  # log of the largest finite double


def moment_td(z):
    """Moment map of the full torus acting on C^d: half the squared moduli."""
    z = np.asarray(z, dtype=complex)
    return 0.5 * np.abs(z) ** 2


def moment_n(z, q):
    """Moment map of the subtorus with weight matrix ``q`` (d x (d-n))."""
    return q.to_numpy().T @ moment_td(z)


def _zero_set(z):
    return tuple(int(j) for j in
                 np.flatnonzero(np.abs(np.asarray(z, dtype=complex))
                                < ZERO_THRESHOLD))


def in_ua(z, pres, tol=None):
    """Is ``z`` in the admissible open set of the presentation?

    The zero coordinates of ``z`` must name facets with a common point
    on the polytope, i.e. the zero set must be contained in the active
    set of some vertex.  A point with no zeros always qualifies.
    """
    zeros = _zero_set(z)
    if not zeros:
        return True
    vertices = pres.vertices() if tol is None else pres.vertices(tol)
    zset = set(zeros)
    return any(zset.issubset(rec.J) for rec in vertices)


@dataclass(frozen=True)
class RetractionResult:
    """Scaling onto the level set: ``scaled = rho(lambda) . z``."""

    lambda_: np.ndarray
    scaled: np.ndarray
    residual: float
    iterations: int


def retract(z, pres, tol=1e-12, max_iter=200):
    """Scale ``z`` onto the level set ``mu_N = a`` of its presentation.

    Solves for the unique positive ``lambda`` with
    ``mu_N(rho(lambda) . z) = a``, where the action multiplies
    coordinate k by ``prod_l lambda_l ** Q[k, l]``.  The solve runs in
    ``s = log lambda``, where the residual is the gradient of a smooth
    convex function; a Newton step with backtracking (and a gradient
    fallback when the Hessian is ill-conditioned) is therefore globally
    convergent on the admissible set.

    Raises
    ------
    DomainError
        If ``z`` lies outside the admissible open set.
    SolverError
        If the residual cannot be pushed below ``tol``; carries the
        best residual reached.
    """
    z = np.asarray(z, dtype=complex)
    if z.shape != (pres.d,):
        raise DomainError(f"expected a point of C^{pres.d}, got {z.shape}")
    if not in_ua(z, pres):
        raise DomainError(
            f"point with zero set {[j + 1 for j in _zero_set(z)]} is outside "
            "the admissible open set")
    qf = pres.Q.to_numpy()
    m = qf.shape[1]
    if m == 0:
        return RetractionResult(np.zeros(0), z.copy(), 0.0, 0)

    with np.errstate(divide="ignore"):
        log_w0 = np.log(moment_td(z))        # -inf on exact zeros

    def weights(s):
        return np.exp(np.minimum(log_w0 + 2.0 * (qf @ s), _EXP_CAP))

    def residual(s):
        return qf.T @ weights(s) - pres.a

    s = np.zeros(m)
    r = residual(s)
    rnorm = np.max(np.abs(r))
    iterations = 0
    while rnorm > tol and iterations < max_iter:
        w = weights(s)
        hess = 2.0 * qf.T @ (w[:, None] * qf)
        try:
            if np.linalg.cond(hess) > 1e14:
                raise np.linalg.LinAlgError
            step = -np.linalg.solve(hess, r)
        except np.linalg.LinAlgError:
            step = -hess @ r                 # descent on 0.5 |r|^2
        t = 1.0
        for _ in range(60):
            r_new = residual(s + t * step)
            if np.max(np.abs(r_new)) < rnorm:
                break
            t *= 0.5
        else:
            raise SolverError("retraction line search stalled",
                              residual=rnorm, iterations=iterations)
        s = s + t * step
        r = r_new
        rnorm = np.max(np.abs(r))
        iterations += 1
    if rnorm > tol:
        raise SolverError(
            f"retraction did not reach tolerance {tol}",
            residual=rnorm, iterations=iterations)
    lam = np.exp(s)
    scaled = z * np.exp(qf @ s)
    return RetractionResult(lam, scaled, float(rnorm), iterations)


def moment_map(z, pres, tol=1e-12, check_tol=1e-10):
    """Moment map of the residual torus action, in homogeneous coordinates.

    Retracts ``z`` onto the level set and extracts
    ``xi = A^T (mu_Td + kappa)``.  The overdetermined relation
    ``B^T xi = mu_Td + kappa`` is verified as a built-in sanity check
    (this also validates kappa against the level).
    """
    res = retract(z, pres, tol=tol)
    shifted = moment_td(res.scaled) + pres.kappa
    xi = pres.A.to_numpy().T @ shifted
    gap = np.max(np.abs(pres.B.to_numpy().T @ xi - shifted))
    if gap > check_tol * max(1.0, float(np.max(np.abs(shifted)))):
        raise ConsistencyError(
            f"moment coordinates are inconsistent (gap {gap:.3e}); "
            "kappa does not match the presentation")
    return xi


def moment_map_closed_pn(z, a):
    """Closed-form moment map of projective space: a-weighted moduli."""
    z = np.asarray(z, dtype=complex)
    total = float(np.sum(np.abs(z) ** 2))
    if total < ZERO_THRESHOLD:
        raise DomainError("the origin is not admissible")
    return a * np.abs(z[:-1]) ** 2 / total


def _kpn_scale_root(n, a, rhs, iters=200):
    """Unique root x > 2(n+1)a/(n+2) of x^(n+2) - 2a x^(n+1) = rhs.

    Safeguarded Newton inside the bracket [2a, 2a + rhs/(2a)^(n+1)].
    """
    if rhs == 0.0:
        return 2.0 * a

    def f(x):
        return x ** (n + 1) * (x - 2.0 * a) - rhs

    lo = 2.0 * a
    hi = 2.0 * a + rhs / (2.0 * a) ** (n + 1)
    x = hi
    for _ in range(iters):
        fx = f(x)
        if fx > 0:
            hi = x
        else:
            lo = x
        dfx = (n + 2) * x ** (n + 1) - 2.0 * a * (n + 1) * x ** n
        x_new = x - fx / dfx if dfx > 0 else 0.5 * (lo + hi)
        if not lo <= x_new <= hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= 1e-16 * max(1.0, abs(x)):
            return x_new
        x = x_new
    return x


def moment_map_closed_kpn(z, p, a):
    """Closed-form moment map of the canonical bundle over P^n.

    Valid for the corner-straightening torus basis.  The level-set
    scaling is recovered from the unique admissible root of a monotone
    scalar equation; at ``p = 0`` the root is exactly ``2a`` and the
    projective-space formula is reproduced with vanishing last
    coordinate.
    """
    z = np.asarray(z, dtype=complex)
    n = z.shape[0] - 1
    z2 = float(np.sum(np.abs(z) ** 2))
    if a > 0 and z2 < ZERO_THRESHOLD:
        raise DomainError("z = 0 is not admissible for a positive level")
    rhs = (n + 1) * z2 ** (n + 1) * abs(p) ** 2
    x = _kpn_scale_root(n, a, rhs)
    base = (x / 2.0) * np.abs(z[:-1]) ** 2 / z2
    fiber = (x - 2.0 * a) / (2.0 * (n + 1))
    return np.concatenate([base, [fiber]])


def cardano_lambda_kp1(z, p, a):
    """Squared level-set scaling for the canonical bundle over P^1.

    Explicit radical solution of the defining cubic.  The two cube
    roots are combined through the reciprocal form, so the evaluation
    stays accurate for large fiber values.
    """
    z = np.asarray(z, dtype=complex)
    z2 = float(np.sum(np.abs(z) ** 2))
    if z2 < ZERO_THRESHOLD:
        raise DomainError("z = 0 is not admissible")
    rho = 3.0 * np.sqrt(3.0) * z2 * abs(p) / (4.0 * a * np.sqrt(a))
    root = np.sqrt(1.0 + rho * rho)
    plus = (root + rho) ** (2.0 / 3.0)
    minus = (1.0 / (root + rho)) ** (2.0 / 3.0)
    g = (2.0 * a / 3.0) * (plus + minus + 1.0)
    return g / z2
