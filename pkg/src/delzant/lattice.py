"""Exact integer data of a toric quotient presentation.

A compact toric manifold of complex dimension ``n`` arises as a quotient
of ``C^d`` by a (d-n)-torus.  The quotient is encoded by three integer
matrices tied together by a short exact sequence:

* ``Q`` (d x (d-n)) gives the weights of the subtorus action,
* ``B`` (n x d) gives the residual torus, with ``B Q = 0``; its columns
  are the inward facet normals of the moment polytope,
* ``A`` (d x n) is an integer right inverse, ``B A = I``.

Everything in this module is exact: entries are Python ints and all
identities hold with zero tolerance.
"""

from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import _intlinalg as xl
from .errors import (AnchorError, ConsistencyError, NonDelzantVertexError,
                     NonSmoothError, RankError, ShapeError)

__all__ = [
    "IntegerMatrix", "ToricPresentation", "PairReport", "DelzantReport",
    "check_exact_pair", "kernel_basis", "right_inverse",
    "vertex_right_inverse", "extend_to_canonical", "delzant_check",
]


@dataclass(frozen=True)
class IntegerMatrix:
    """Immutable matrix of arbitrary-precision integers."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ShapeError("ragged rows in integer matrix")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows):
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def identity(cls, n):
        return cls.from_rows(xl.identity(n))

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __matmul__(self, other):
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ShapeError(
                f"cannot multiply {self.shape} by {other.shape}")
        return IntegerMatrix.from_rows(
            xl.matmul([list(r) for r in self.rows],
                      [list(r) for r in other.rows]))

    def transpose(self):
        return IntegerMatrix.from_rows(zip(*self.rows)) if self.rows \
            else IntegerMatrix(())

    def column(self, j):
        return tuple(row[j] for row in self.rows)

    def columns(self, js):
        """Submatrix made of the columns listed in ``js`` (in that order)."""
        return IntegerMatrix.from_rows(
            tuple(row[j] for j in js) for row in self.rows)

    def column_sums(self):
        return tuple(sum(row[j] for row in self.rows)
                     for j in range(self.ncols))

    def row_sums(self):
        return tuple(sum(row) for row in self.rows)

    def is_zero(self):
        return all(x == 0 for row in self.rows for x in row)

    def to_numpy(self, dtype=float):
        return np.array([list(r) for r in self.rows], dtype=dtype) \
            if self.rows else np.zeros((0, 0), dtype=dtype)

    def tolist(self):
        return [list(r) for r in self.rows]

    def __str__(self):
        return "\n".join(" ".join(f"{x:4d}" for x in row)
                         for row in self.rows) or "(empty)"


def _as_lists(m):
    return [list(r) for r in m.rows]


def exact_determinant(m):
    """Determinant of a square integer matrix, exactly."""
    if m.nrows != m.ncols:
        raise ShapeError("determinant of a non-square matrix")
    if m.nrows == 0:
        return 1
    _, det = xl.fraction_inverse(_as_lists(m))
    return int(det)


def lattices_equal(m1, m2):
    """Do the columns of ``m1`` and ``m2`` span the same sublattice of Z^d?

    Decided by comparing canonical Hermite forms of both column lattices.
    """
    if m1.nrows != m2.nrows:
        return False
    return xl.column_lattice_form(_as_lists(m1)) == \
        xl.column_lattice_form(_as_lists(m2))


@dataclass(frozen=True)
class PairReport:
    """Outcome of the exactness checks on a (B, Q) pair."""

    bq_is_zero: bool
    q_rank: int
    q_expected_rank: int
    b_smith_diagonal: tuple
    b_columns_primitive: tuple

    @property
    def q_full_rank(self):
        return self.q_rank == self.q_expected_rank

    @property
    def b_surjective(self):
        return all(d == 1 for d in self.b_smith_diagonal)

    @property
    def passed(self):
        return (self.bq_is_zero and self.q_full_rank and self.b_surjective
                and all(self.b_columns_primitive))


def check_exact_pair(b, q):
    """Verify that (B, Q) presents a short exact sequence of lattices.

    Checks, all exactly: ``B Q = 0``; Q has full column rank d-n; B is
    surjective onto Z^n (every Smith invariant equals 1); every column
    of B is a primitive vector.
    """
    n, d = b.shape
    if q.nrows != d or q.ncols != d - n or n > d:
        raise ShapeError(
            f"expected Q of shape {(d, d - n)} for B of shape {(n, d)}, "
            f"got {q.shape}")
    product = b @ q
    q_diag = xl.smith_diagonal(_as_lists(q)) if q.ncols else []
    b_diag = xl.smith_diagonal(_as_lists(b)) if n else []
    prim = tuple(xl.vector_gcd(b.column(j)) == 1 for j in range(d))
    return PairReport(
        bq_is_zero=product.is_zero(),
        q_rank=sum(1 for x in q_diag if x != 0),
        q_expected_rank=d - n,
        b_smith_diagonal=tuple(abs(x) for x in b_diag),
        b_columns_primitive=prim,
    )


def kernel_basis(b):
    """A Z-basis of ker(B) in Z^d, as columns of a d x (d-n) matrix.

    The returned lattice is saturated: it is the full integer kernel,
    not a finite-index sublattice.
    """
    n, d = b.shape
    _, s, v = xl.smith_decomposition(_as_lists(b))
    rank = sum(1 for t in range(min(n, d)) if s[t][t] != 0)
    if rank < n:
        raise RankError("matrix does not have full row rank")
    return IntegerMatrix.from_rows(row[rank:] for row in v)


def right_inverse(b):
    """A deterministic integer right inverse A with ``B A = I`` exactly.

    Any valid right inverse is acceptable downstream; this one is fixed
    by the Smith decomposition with its canonical pivot order.
    """
    n, d = b.shape
    u, s, v = xl.smith_decomposition(_as_lists(b))
    diag = [s[t][t] for t in range(min(n, d))]
    if len(diag) < n or any(x != 1 for x in diag):
        raise NonSmoothError(
            f"no integer right inverse: Smith diagonal is {diag}")
    v_left = [row[:n] for row in v]
    a = IntegerMatrix.from_rows(v_left) @ IntegerMatrix.from_rows(u)
    if (b @ a) != IntegerMatrix.identity(n):
        raise ConsistencyError("right inverse construction failed")
    return a


def vertex_right_inverse(b, j_v):
    """Right inverse adapted to a vertex with facet set ``j_v``.

    ``P`` is the exact inverse of the n x n matrix whose columns are the
    normals indexed by ``j_v`` (0-based); the returned A carries P in
    those rows and zeros elsewhere, so the induced torus embedding fixes
    the chart at that vertex.

    Returns ``(a, p)``.
    """
    n = b.nrows
    j_v = tuple(j_v)
    if len(j_v) != n:
        raise ShapeError(f"vertex index set must have {n} entries")
    m = b.columns(j_v)
    inv, det = xl.fraction_inverse(_as_lists(m))
    if abs(det) != 1:
        raise NonDelzantVertexError(
            f"facet normals {tuple(j + 1 for j in j_v)} have determinant "
            f"{int(det)}, not a lattice basis")
    p = IntegerMatrix.from_rows([[int(x) for x in row] for row in inv])
    rows = [[0] * n for _ in range(b.ncols)]
    for k, j in enumerate(j_v):
        rows[j] = list(p.rows[k])
    a = IntegerMatrix.from_rows(rows)
    if (b @ a) != IntegerMatrix.identity(n):
        raise ConsistencyError("vertex right inverse construction failed")
    return a, p


@dataclass(frozen=True)
class VertexCheck:
    J: tuple          # 0-based facet indices active at the vertex
    determinant: int  # det of the normal matrix (None if not square)
    simple: bool

    @property
    def smooth(self):
        return self.simple and self.determinant is not None \
            and abs(self.determinant) == 1


@dataclass(frozen=True)
class DelzantReport:
    checks: tuple
    rational: bool = True  # normals are integral by construction

    @property
    def passed(self):
        return self.rational and all(c.smooth for c in self.checks)

    def failures(self):
        return tuple(c for c in self.checks if not c.smooth)


def delzant_check(pres, vertices):
    """Check simplicity and smoothness at every given vertex.

    ``vertices`` is the list produced by polytope vertex enumeration;
    each entry carries the active facet set.  A vertex passes when
    exactly n facets meet there and their normals have determinant +-1.
    """
    checks = []
    for rec in vertices:
        j = tuple(rec.J)
        simple = len(j) == pres.n
        det = exact_determinant(pres.B.columns(j)) if simple else None
        checks.append(VertexCheck(J=j, determinant=det, simple=simple))
    return DelzantReport(checks=tuple(checks))


class ToricPresentation:
    """Validated quotient datum (d, n, B, Q, A, kappa, a).

    Instances are immutable by convention; derived objects (polytope,
    vertex list) are cached on first use.  All integer identities are
    verified exactly at construction, and the offset vector is checked
    against the level via ``Q^T kappa = -a``.
    """

    def __init__(self, b, q, a_matrix, kappa, a_level,
                 is_canonical_bundle=False, name=""):
        self.B = b
        self.Q = q
        self.A = a_matrix
        self.kappa = np.asarray(kappa, dtype=float)
        self.a = np.asarray(a_level, dtype=float)
        self.is_canonical_bundle = bool(is_canonical_bundle)
        self.name = name
        self._validate()
        self._halfspaces = None
        self._vertices = None

    # -- construction helpers ------------------------------------------------

    @classmethod
    def build(cls, b, q=None, a_matrix=None, kappa=None, a_level=None,
              anchor=None, is_canonical_bundle=False, name=""):
        """Assemble a presentation, deriving any missing pieces.

        ``kappa`` may be given directly, or pinned from ``(a_level,
        anchor)`` with the anchor facets at offset zero.  Exactly one of
        the two forms is required.
        """
        b = b if isinstance(b, IntegerMatrix) else IntegerMatrix.from_rows(b)
        if q is None:
            q = kernel_basis(b)
        elif not isinstance(q, IntegerMatrix):
            q = IntegerMatrix.from_rows(q)
        if a_matrix is None:
            a_matrix = right_inverse(b)
        elif not isinstance(a_matrix, IntegerMatrix):
            a_matrix = IntegerMatrix.from_rows(a_matrix)
        if kappa is None:
            if a_level is None:
                raise AnchorError("either kappa or (a, anchor) is required")
            from .polytope import kappa_from_level
            a_level = np.atleast_1d(np.asarray(a_level, dtype=float))
            if anchor is None:
                raise AnchorError("anchor facets required to pin kappa")
            kappa = kappa_from_level(q, a_level, anchor)
        else:
            kappa = np.asarray(kappa, dtype=float)
            if a_level is None:
                a_level = -q.to_numpy().T @ kappa
        return cls(b, q, a_matrix, kappa, a_level,
                   is_canonical_bundle=is_canonical_bundle, name=name)

    def _validate(self):
        n, d = self.B.shape
        if n > d:
            raise ShapeError("B must have at least as many columns as rows")
        if self.Q.shape != (d, d - n):
            raise ShapeError(
                f"Q must be {d} x {d - n}, got {self.Q.shape}")
        if self.A.shape != (d, n):
            raise ShapeError(f"A must be {d} x {n}, got {self.A.shape}")
        if self.kappa.shape != (d,):
            raise ShapeError(f"kappa must have length {d}")
        if self.a.shape != (d - n,):
            raise ShapeError(f"a must have length {d - n}")
        report = check_exact_pair(self.B, self.Q)
        if not report.bq_is_zero:
            raise ConsistencyError("B Q != 0")
        if not report.q_full_rank:
            raise RankError("Q does not have full column rank")
        if not report.b_surjective:
            raise NonSmoothError(
                f"B is not surjective over Z: Smith diagonal "
                f"{report.b_smith_diagonal}")
        if not all(report.b_columns_primitive):
            bad = [j + 1 for j, ok in
                   enumerate(report.b_columns_primitive) if not ok]
            raise NonSmoothError(f"columns {bad} of B are not primitive")
        if (self.B @ self.A) != IntegerMatrix.identity(n):
            raise ConsistencyError("B A != I")
        resid = self.Q.to_numpy().T @ self.kappa + self.a
        if resid.size and np.max(np.abs(resid)) > 1e-9 * max(
                1.0, float(np.max(np.abs(self.a)))):
            raise ConsistencyError(
                f"kappa does not match the level: Q^T kappa + a = {resid}")

    # -- basic data ----------------------------------------------------------

    @property
    def d(self):
        return self.B.ncols

    @property
    def n(self):
        return self.B.nrows

    def halfspaces(self):
        """The moment polytope as a half-space description (cached)."""
        if self._halfspaces is None:
            from .polytope import HalfSpaceSet
            self._halfspaces = HalfSpaceSet(self.B, self.kappa)
        return self._halfspaces

    def vertices(self, tol=1e-9):
        """Enumerated polytope vertices (cached for the default tol)."""
        if self._vertices is None:
            from .polytope import enumerate_vertices
            self._vertices = enumerate_vertices(self.halfspaces(), tol=tol)
        return self._vertices

    def __repr__(self):
        kind = "canonical-bundle " if self.is_canonical_bundle else ""
        return (f"ToricPresentation({self.name or 'unnamed'}: {kind}"
                f"d={self.d}, n={self.n})")


def _default_anchor_vertex(pres):
    """Lexicographically smallest Delzant vertex of the polytope."""
    for rec in sorted(pres.vertices(), key=lambda r: r.J):
        if len(rec.J) == pres.n and \
                abs(exact_determinant(pres.B.columns(rec.J))) == 1:
            return tuple(rec.J)
    raise NonDelzantVertexError("presentation has no Delzant vertex")


def extend_to_canonical(pres, convention="all-ones", anchor=None):
    """Presentation of the canonical-bundle total space (d+1, n+1).

    Conventions for the extra torus factor:

    * ``"all-ones"`` (default): the last row of the extended B is all
      ones, so the product of all homogeneous coordinates with the
      fiber coordinate is invariant -- the form assumed by the
      action-angle superpotential.
    * ``"straight"``: the basis adapted to ``anchor`` (a Delzant vertex,
      default the lexicographically smallest one), which straightens
      that corner; the extra row is supported off the anchor facets.

    In both conventions the extended weight matrix gains the row of
    negated column sums, so each of its columns sums to zero, and the
    fiber facet is placed at offset zero.
    """
    b, q, a_mat = pres.B, pres.Q, pres.A
    n, d = b.shape
    q_plus = IntegerMatrix.from_rows(
        [list(row) for row in q.rows]
        + [[-s for s in q.column_sums()]])
    kappa_plus = np.concatenate([pres.kappa, [0.0]])

    if convention == "all-ones":
        b_plus = IntegerMatrix.from_rows(
            [list(row) + [0] for row in b.rows] + [[1] * (d + 1)])
        a_plus = IntegerMatrix.from_rows(
            [list(row) + [0] for row in a_mat.rows]
            + [[-s for s in a_mat.column_sums()] + [1]])
    elif convention == "straight":
        if anchor is None:
            anchor = _default_anchor_vertex(pres)
        _, p = vertex_right_inverse(b, anchor)
        b_hat = p @ b
        a_hat = a_mat @ b.columns(anchor)  # right inverse of b_hat
        last = [1 - s for s in b_hat.column_sums()]
        b_plus = IntegerMatrix.from_rows(
            [list(row) + [0] for row in b_hat.rows] + [last + [1]])
        a_plus = IntegerMatrix.from_rows(
            [list(row) + [0] for row in a_hat.rows]
            + [[1 - s for s in a_hat.column_sums()] + [1]])
    else:
        raise ValueError(f"unknown convention {convention!r}")

    suffix = "" if convention == "all-ones" else "_straight"
    return ToricPresentation(
        b_plus, q_plus, a_plus, kappa_plus, pres.a,
        is_canonical_bundle=True,
        name=f"K_{pres.name}{suffix}" if pres.name else "")
