"""Chart atlas and coordinate conversions.

Each Delzant vertex carries an affine chart.  Chart coordinates are
monomials in the homogeneous coordinates with integer exponents (rows
of the vertex-adapted normal matrix), which makes every conversion in
this module exact exponent arithmetic: no scaling systems are solved
and no logarithm branch cuts appear.  The same machinery covers
canonical-bundle charts, whose extra coordinate trivializes the fiber,
and the Landau-Ginzburg superpotential in both coordinate systems.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ChartDomainError, ContractError, DomainError
from .kahler import GuilleminPotential
from .lattice import IntegerMatrix, vertex_right_inverse
from .reduction import ZERO_THRESHOLD, moment_map

__all__ = [
    "Chart", "ActionAnglePoint", "make_chart", "make_km_chart", "to_chart",
    "transition", "transition_exponents", "km_fiber_transition",
    "torus_coords", "action_angle", "from_action_angle",
    "superpotential_homog", "superpotential_aa",
]


@dataclass(frozen=True)
class Chart:
    """Affine chart at a vertex.

    ``exponents`` is the n x d integer matrix whose row k gives the
    monomial of the k-th chart coordinate; restricted to the columns in
    ``J`` it is the identity, and negative exponents only occur on the
    facets that stay nonzero on the chart domain.
    """

    J: tuple                 # ordered facet set, 0-based
    P: IntegerMatrix         # change of basis, inverse of ``basis``
    basis: IntegerMatrix     # facet normals at the vertex, as columns
    exponents: IntegerMatrix  # P @ B


def make_chart(pres, j_v):
    """Chart of the presentation at the Delzant vertex with facets ``j_v``."""
    j_v = tuple(int(j) for j in j_v)
    _, p = vertex_right_inverse(pres.B, j_v)
    return Chart(J=j_v, P=p, basis=pres.B.columns(j_v),
                 exponents=p @ pres.B)


def make_km_chart(pres_plus, base_j):
    """Canonical-bundle chart over a base vertex: the fiber facet is
    appended last, so the final chart coordinate trivializes the fiber."""
    if not pres_plus.is_canonical_bundle:
        raise ContractError("presentation is not a canonical-bundle "
                            "total space")
    return make_chart(pres_plus, tuple(base_j) + (pres_plus.d - 1,))


def _monomials(values, exponents):
    """Evaluate integer-exponent monomials ``prod_j values_j ** e_kj``."""
    values = np.asarray(values, dtype=complex)
    out = np.ones(exponents.nrows, dtype=complex)
    for k, row in enumerate(exponents.rows):
        acc = 1.0 + 0.0j
        for j, e in enumerate(row):
            if e == 0:
                continue
            v = values[j]
            if abs(v) < ZERO_THRESHOLD:
                if e < 0:
                    raise ChartDomainError(
                        f"coordinate {j + 1} is zero but appears with "
                        f"negative exponent {e}")
                acc = 0.0j
                break
            acc *= v ** e
        out[k] = acc
    return out


def to_chart(z, chart):
    """Affine coordinates of ``z`` in the chart: pure monomial evaluation.

    Requires ``z_j != 0`` for every facet off the chart's vertex.
    """
    z = np.asarray(z, dtype=complex)
    off = [j for j in range(chart.exponents.ncols) if j not in chart.J]
    dead = [j + 1 for j in off if abs(z[j]) < ZERO_THRESHOLD]
    if dead:
        raise ChartDomainError(
            f"coordinates {dead} vanish; point is outside the chart domain")
    return _monomials(z, chart.exponents)


def transition_exponents(from_chart, to_chart):
    """Integer exponent matrix of the chart transition; unimodular."""
    return to_chart.P @ from_chart.basis


def transition(y, from_chart, to_chart):
    """Map chart coordinates between two vertices of the same atlas.

    On the overlap the transition turns basis-change coefficients into
    monomial exponents; coordinates that would be raised to a negative
    power must be nonzero.
    """
    e = transition_exponents(from_chart, to_chart)
    return _monomials(y, e)


def km_fiber_transition(y, y_q, from_chart, to_chart):
    """Transition of a canonical-bundle chart: base and fiber together.

    Both charts must share the fiber facet as their last entry.  The
    fiber coordinate transforms by the exponents ``1 - sum_k d_jk``
    determined by the base basis change, which is exactly what the full
    monomial transition produces, so the product of all chart
    coordinates (the superpotential) is preserved on the nose.
    """
    d = from_chart.exponents.ncols
    if from_chart.J[-1] != d - 1 or to_chart.J[-1] != d - 1:
        raise ContractError("charts do not carry the fiber facet last")
    full = transition(np.concatenate([np.asarray(y, dtype=complex),
                                      [complex(y_q)]]),
                      from_chart, to_chart)
    return full[:-1], full[-1]


def torus_coords(z, pres):
    """Quotient-torus coordinates of a dense-orbit point.

    Component m is the monomial with exponents from row m of the normal
    matrix; the result is invariant under the subtorus action.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) < ZERO_THRESHOLD):
        raise DomainError("torus coordinates need all homogeneous "
                          "coordinates nonzero")
    return _monomials(z, pres.B)


@dataclass(frozen=True)
class ActionAnglePoint:
    """Moment coordinates in the polytope interior plus angles in
    [0, 2pi)."""

    xi: np.ndarray
    theta: np.ndarray


def action_angle(z, pres, tol=1e-12):
    """Action-angle coordinates of a dense-orbit point."""
    t = torus_coords(z, pres)
    xi = moment_map(z, pres, tol=tol)
    theta = np.mod(np.angle(t), 2.0 * np.pi)
    return ActionAnglePoint(xi=xi, theta=theta)


def from_action_angle(aa, pres, potential=None):
    """Homogeneous representative of an action-angle point.

    The torus point is ``exp(x + i theta)`` with ``x`` the calibrated
    potential gradient at ``xi``; it is sent upstairs through the right
    inverse, so converting back recovers ``(xi, theta)`` up to solver
    tolerance (angles mod 2pi).
    """
    if potential is None:
        potential = GuilleminPotential(pres.halfspaces())
    x = potential.grad_G_calibrated(aa.xi)
    t = np.exp(x + 1j * np.asarray(aa.theta, dtype=float))
    return _monomials(t, pres.A)


def superpotential_homog(z_with_p):
    """The Landau-Ginzburg superpotential in homogeneous coordinates:
    the product of all base coordinates with the fiber coordinate."""
    return complex(np.prod(np.asarray(z_with_p, dtype=complex)))


def superpotential_aa(aa, pres_plus, potential=None):
    """The superpotential in action-angle coordinates.

    Requires a canonical-bundle presentation whose normal matrix has an
    all-ones last row (then the superpotential is the last quotient
    torus coordinate): ``exp(dG/dxi_last - c_last + i theta_last)``.
    """
    if not pres_plus.is_canonical_bundle:
        raise ContractError("presentation is not a canonical-bundle "
                            "total space")
    if any(x != 1 for x in pres_plus.B.rows[-1]):
        raise ContractError(
            "action-angle superpotential needs the all-ones convention "
            "for the last torus factor")
    if potential is None:
        potential = GuilleminPotential(pres_plus.halfspaces())
    x_last = potential.grad_G_calibrated(aa.xi)[-1]
    return complex(np.exp(x_last + 1j * float(aa.theta[-1])))
