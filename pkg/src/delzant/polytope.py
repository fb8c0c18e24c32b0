"""The moment polytope as an intersection of half-spaces.

The polytope is ``{xi : L(xi)_j >= 0 for all j}`` where
``L(xi)_j = <v^j, xi> - kappa_j`` and the ``v^j`` are the integer facet
normals (columns of the residual-torus matrix B).  Unbounded polyhedra
(canonical-bundle total spaces) are supported; only true vertices are
enumerated, no ray machinery is needed.
"""

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np
from scipy.optimize import linprog

from . import _intlinalg as xl
from .errors import AnchorError, ConsistencyError, DomainError, ShapeError
from .lattice import IntegerMatrix, exact_determinant

__all__ = ["HalfSpaceSet", "VertexRecord", "Classification",
           "kappa_from_level", "enumerate_vertices"]

DEFAULT_TOL = 1e-9

_MAX_SUBSETS = 500_000  # guard for the d-choose-n vertex scan


@dataclass(frozen=True)
class VertexRecord:
    """A vertex location together with its active facet set (0-based)."""

    xi: np.ndarray
    J: tuple
    degenerate: bool = False  # more than n facets active within tolerance


@dataclass(frozen=True)
class Classification:
    kind: str    # "interior" | "boundary" | "outside"
    face: tuple  # active facets when on the boundary, else ()

    def __eq__(self, other):
        if isinstance(other, str):
            return self.kind == other
        return (self.kind, self.face) == (other.kind, other.face)


class HalfSpaceSet:
    """Half-space description of the moment polytope.

    Parameters
    ----------
    normals : IntegerMatrix
        n x d matrix whose columns are the primitive inward normals.
    offsets : array_like
        Facet offsets kappa (length d).

    A strictly interior point is computed at construction (raising
    ``DomainError`` when the interior is empty); it doubles as the
    starting point for solvers on unbounded polyhedra.
    """

    def __init__(self, normals, offsets):
        if not isinstance(normals, IntegerMatrix):
            normals = IntegerMatrix.from_rows(normals)
        self.normals = normals
        self.offsets = np.asarray(offsets, dtype=float)
        if self.offsets.shape != (normals.ncols,):
            raise ShapeError(
                f"expected {normals.ncols} offsets, got {self.offsets.shape}")
        for j in range(normals.ncols):
            if xl.vector_gcd(normals.column(j)) != 1:
                raise ConsistencyError(f"facet normal {j + 1} is not primitive")
        self._b = normals.to_numpy()          # n x d, float
        self._norms = np.linalg.norm(self._b, axis=0)
        self.interior_point = self._chebyshev_point()
        self._bounded = None

    @property
    def dim(self):
        return self.normals.nrows

    @property
    def num_facets(self):
        return self.normals.ncols

    def affine_forms(self, xi):
        """The d facet values L(xi); accepts a point or a batch."""
        xi = np.asarray(xi, dtype=float)
        return xi @ self._b - self.offsets

    def classify(self, xi, tol=DEFAULT_TOL):
        """Locate a point: interior, boundary (with its face), or outside."""
        forms = self.affine_forms(xi)
        if np.any(forms < -tol):
            return Classification("outside", ())
        active = tuple(int(j) for j in np.flatnonzero(np.abs(forms) <= tol))
        if active:
            return Classification("boundary", active)
        return Classification("interior", ())

    def _chebyshev_point(self):
        # max r s.t. <v_j, xi> - kappa_j >= r * |v_j|,  r <= 1
        n, d = self.dim, self.num_facets
        c = np.zeros(n + 1)
        c[-1] = -1.0
        a_ub = np.vstack([np.hstack([-self._b.T,
                                     self._norms.reshape(-1, 1)]),
                          np.hstack([np.zeros(n), [1.0]])])
        b_ub = np.concatenate([-self.offsets, [1.0]])
        res = linprog(c, A_ub=a_ub, b_ub=b_ub,
                      bounds=[(None, None)] * (n + 1), method="highs")
        if not res.success or res.x[-1] <= 1e-12:
            raise DomainError("half-space set has empty interior")
        return res.x[:n]

    def is_bounded(self):
        """Bounded iff some strictly positive combination of the normals
        vanishes (trivial recession cone)."""
        if self._bounded is None:
            d = self.num_facets
            res = linprog(np.zeros(d), A_eq=self._b, b_eq=np.zeros(self.dim),
                          bounds=[(1.0, None)] * d, method="highs")
            self._bounded = bool(res.success)
        return self._bounded

    def vertex_box(self, tol=DEFAULT_TOL, pad=1.0):
        """Bounding box of the vertices, padded when the set is unbounded."""
        verts = enumerate_vertices(self, tol=tol)
        if not verts:
            raise DomainError("polyhedron has no vertices")
        pts = np.array([v.xi for v in verts])
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        if not self.is_bounded():
            span = np.maximum(hi - lo, 1.0)
            lo, hi = lo - pad * span, hi + pad * span
        return lo, hi


def kappa_from_level(q, a, anchor):
    """Offsets kappa with ``Q^T kappa = -a`` and the anchor facets at zero.

    The level a determines kappa only up to a lattice translation; the
    convention here pins the vertex cut out by the n anchor facets to
    the origin.  ``anchor`` is 0-based.
    """
    if not isinstance(q, IntegerMatrix):
        q = IntegerMatrix.from_rows(q)
    d, m = q.shape
    a = np.atleast_1d(np.asarray(a, dtype=float))
    if a.shape != (m,):
        raise ShapeError(f"level must have length {m}, got {a.shape}")
    anchor = tuple(sorted(int(j) for j in anchor))
    if len(set(anchor)) != d - m or not all(0 <= j < d for j in anchor):
        raise AnchorError(
            f"anchor must name {d - m} distinct facets out of {d}")
    free = [j for j in range(d) if j not in anchor]
    sub = q.to_numpy()[free, :]          # (m, m) once transposed
    det = exact_determinant(IntegerMatrix.from_rows(
        [q.rows[j] for j in free]))
    if det == 0:
        raise AnchorError("anchor facets cannot pin the level: singular "
                          "restricted system")
    kappa = np.zeros(d)
    kappa[free] = np.linalg.solve(sub.T, -a)
    return kappa


def enumerate_vertices(hs, tol=DEFAULT_TOL):
    """All vertices of the polyhedron, by scanning n-subsets of facets.

    For every subset with linearly independent normals the active
    system is solved; solutions violating some facet by more than
    ``tol`` are discarded.  Coincident solutions are merged into a
    single record keyed by the active facet set; a vertex with more
    than n active facets is kept but flagged degenerate rather than
    silently merged.

    Records are returned sorted by active set.
    """
    n, d = hs.dim, hs.num_facets
    if comb(d, n) > _MAX_SUBSETS:
        raise ShapeError(
            f"vertex enumeration over C({d},{n}) subsets is too large")
    found = {}
    for js in combinations(range(d), n):
        m = hs.normals.columns(js)
        if exact_determinant(m) == 0:
            continue
        xi = np.linalg.solve(m.to_numpy().T, hs.offsets[list(js)])
        forms = hs.affine_forms(xi)
        if np.min(forms) < -tol:
            continue
        active = tuple(int(j) for j in np.flatnonzero(np.abs(forms) <= tol))
        rec = found.get(active)
        if rec is None:
            found[active] = VertexRecord(
                xi=xi, J=active, degenerate=len(active) > n)
        elif np.max(np.abs(rec.xi - xi)) > max(100 * tol, 1e-10):
            raise ConsistencyError(
                f"facets {active} produced two distinct vertices; "
                f"tolerance {tol} is inconsistent")
    return [found[key] for key in sorted(found)]
