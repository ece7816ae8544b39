"""Dense multilinear algebra at a single tangent space in an orthonormal frame.

Everything here is pointwise: symmetric 2-tensors, rank-4 curvature-type
tensors, their standard contractions (Ricci, self-contraction, the action on
symmetric 2-tensors), the Kulkarni-Nomizu product, the identification of a
curvature tensor with a symmetric operator on the space of 2-vectors, and
seeded random generators that project onto the algebraic curvature class.

Conventions, fixed once:

* the metric is the identity matrix, frames are orthonormal;
* 2-vectors use the lexicographic pair basis ``e_i ^ e_j`` with ``i < j``,
  which is orthonormal for the pair inner product used throughout;
* ``|R|^2`` is the flat square sum over all four indices, which equals
  ``4 tr(P^2)`` for the associated pair-basis operator ``P``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "SymTensor2",
    "CurvTensor4",
    "Lambda2Operator",
    "sym_inner",
    "kn_product",
    "to_lambda2",
    "from_lambda2",
    "ricci",
    "check_tensor",
    "r_ring",
    "k_pairing",
    "rr_kn_pairing",
    "compose_and_ricci",
    "tilde",
    "lambda2_pushforward",
    "pair_vector",
    "random_symtensor",
    "random_curvature",
    "bianchi_residual",
]

#: absolute tolerance for structural residuals on unit-scale entries
STRUCT_TOL = 1e-12


def _scale(a: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(a))) if a.size else 0.0)


@dataclass(eq=False)
class SymTensor2:
    """A symmetric bilinear form given by its matrix in the frame.

    With ``trace_free=True`` the constructor additionally insists that the
    trace vanishes to 1e-12; tensors produced by the random generator with
    that flag satisfy this exactly.
    """

    entries: np.ndarray
    trace_free: bool = False

    def __post_init__(self) -> None:
        self.entries = np.asarray(self.entries, dtype=float)
        if self.entries.ndim != 2 or self.entries.shape[0] != self.entries.shape[1]:
            raise ValueError("SymTensor2 needs a square matrix")
        if np.max(np.abs(self.entries - self.entries.T)) > STRUCT_TOL * _scale(self.entries):
            raise ValueError("SymTensor2 entries are not symmetric")
        if self.trace_free and abs(np.trace(self.entries)) > 1e-12 * _scale(self.entries):
            raise ValueError("tensor flagged trace-free has nonzero trace")

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.entries))

    def norm2(self) -> float:
        return float(np.sum(self.entries * self.entries))


@dataclass(eq=False)
class CurvTensor4:
    """A rank-4 tensor; with ``algebraic=True`` (default) it must satisfy the
    curvature symmetries and the first Bianchi identity as residuals <= 1e-12.

    Non-algebraic instances (``algebraic=False``) are plain containers; they
    carry compositions and other intermediates that lack pair symmetry.
    """

    entries: np.ndarray
    algebraic: bool = True

    def __post_init__(self) -> None:
        self.entries = np.asarray(self.entries, dtype=float)
        if self.entries.ndim != 4 or len(set(self.entries.shape)) != 1:
            raise ValueError("CurvTensor4 needs an n^4 array")
        if self.algebraic:
            tol = STRUCT_TOL * _scale(self.entries)
            T = self.entries
            if np.max(np.abs(T + np.einsum("xyzw->yxzw", T))) > tol:
                raise ValueError("not antisymmetric in the first pair")
            if np.max(np.abs(T + np.einsum("xyzw->xywz", T))) > tol:
                raise ValueError("not antisymmetric in the second pair")
            if np.max(np.abs(T - np.einsum("xyzw->zwxy", T))) > tol:
                raise ValueError("pair exchange symmetry fails")
            if bianchi_residual(T) > tol:
                raise ValueError("first Bianchi identity fails")

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def norm2(self) -> float:
        """Flat square sum over all four indices."""
        return float(np.sum(self.entries * self.entries))


@dataclass(eq=False)
class Lambda2Operator:
    """A symmetric operator on 2-vectors in the lexicographic pair basis."""

    n: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.matrix = np.asarray(self.matrix, dtype=float)
        N = self.n * (self.n - 1) // 2
        if self.matrix.shape != (N, N):
            raise ValueError("operator matrix has the wrong shape")

    @property
    def N(self) -> int:
        return self.n * (self.n - 1) // 2


@lru_cache(maxsize=None)
def _pair_index(n: int) -> tuple[np.ndarray, np.ndarray]:
    """First and second index arrays of the lexicographic pairs i<j."""
    ii, jj = np.triu_indices(n, k=1)
    return ii, jj


def bianchi_residual(T: np.ndarray) -> float:
    """Max norm of the cyclic sum over the last three slots."""
    B = T + np.einsum("xzwy->xyzw", T) + np.einsum("xwyz->xyzw", T)
    return float(np.max(np.abs(B)))


def _as_matrix(h) -> np.ndarray:
    return h.entries if isinstance(h, SymTensor2) else np.asarray(h, dtype=float)


def _as_array4(R) -> np.ndarray:
    return R.entries if isinstance(R, CurvTensor4) else np.asarray(R, dtype=float)


def sym_inner(a: SymTensor2, b: SymTensor2) -> float:
    """Full double-sum inner product of two symmetric 2-tensors."""
    am, bm = _as_matrix(a), _as_matrix(b)
    if am.shape != bm.shape:
        raise ValueError("dimension mismatch in sym_inner")
    return float(np.sum(am * bm))


def kn_product(h1: SymTensor2, h2: SymTensor2) -> CurvTensor4:
    """Kulkarni-Nomizu product of two symmetric 2-tensors.

    (h1 ^ h2)(x,y,z,w) = h1(x,z)h2(y,w) + h1(y,w)h2(x,z)
                         - h1(x,w)h2(y,z) - h1(y,z)h2(x,w)
    """
    a, b = _as_matrix(h1), _as_matrix(h2)
    if a.shape != b.shape:
        raise ValueError("dimension mismatch in kn_product")
    T = (
        np.einsum("xz,yw->xyzw", a, b)
        + np.einsum("yw,xz->xyzw", a, b)
        - np.einsum("xw,yz->xyzw", a, b)
        - np.einsum("yz,xw->xyzw", a, b)
    )
    return CurvTensor4(T)


def to_lambda2(R: CurvTensor4) -> Lambda2Operator:
    """View a curvature-type tensor as an operator on 2-vectors."""
    T = _as_array4(R)
    n = T.shape[0]
    ii, jj = _pair_index(n)
    P = T[ii[:, None], jj[:, None], ii[None, :], jj[None, :]]
    return Lambda2Operator(n, P)


def from_lambda2(P: Lambda2Operator) -> CurvTensor4:
    """Rebuild the 4-index array from a pair-basis operator.

    The result is antisymmetric in both index pairs by construction; it is
    pair symmetric (hence a CurvTensor4 candidate) only when the operator
    matrix is symmetric, so the container is returned unflagged.
    """
    n, M = P.n, P.matrix
    ii, jj = _pair_index(n)
    T = np.zeros((n, n, n, n))
    T[ii[:, None], jj[:, None], ii[None, :], jj[None, :]] = M
    T[jj[:, None], ii[:, None], ii[None, :], jj[None, :]] = -M
    T[ii[:, None], jj[:, None], jj[None, :], ii[None, :]] = -M
    T[jj[:, None], ii[:, None], jj[None, :], ii[None, :]] = M
    return CurvTensor4(T, algebraic=False)


def ricci(R: CurvTensor4) -> SymTensor2:
    """Ricci contraction r(x,y) = sum_i R(x, v_i, y, v_i)."""
    return SymTensor2(np.einsum("aibi->ab", _as_array4(R)))


def check_tensor(R: CurvTensor4) -> SymTensor2:
    """Self-contraction (x,y) -> sum R(x,i,j,k) R(y,i,j,k).

    Its trace is |R|^2; for the model tensors it is proportional to the
    metric, which is the criticality condition certified by the builders.
    """
    T = _as_array4(R)
    return SymTensor2(np.einsum("aijk,bijk->ab", T, T, optimize=True))


def r_ring(R: CurvTensor4, h: SymTensor2) -> SymTensor2:
    """Curvature action (x,y) -> sum_ij R(v_i, x, v_j, y) h(v_i, v_j)."""
    out = np.einsum("ixjy,ij->xy", _as_array4(R), _as_matrix(h), optimize=True)
    return SymTensor2(0.5 * (out + out.T))


def k_pairing(R: CurvTensor4, h: SymTensor2) -> float:
    """Pair the symmetrized quadratic-in-R 4-tensor against h (x) h.

    Builds K(x,y,z,w) = (1/2) sum_ij [R(x,i,z,j)R(y,i,w,j)
    + R(x,i,w,j)R(y,i,z,j)] and contracts slots (1,2) with the first copy
    of h and (3,4) with the second.  Equals the quadruple sum
    sum h_pq h_mn R_pimj R_qinj, which the tests use as an oracle.
    """
    T = _as_array4(R)
    hm = _as_matrix(h)
    K = 0.5 * (
        np.einsum("xizj,yiwj->xyzw", T, T, optimize=True)
        + np.einsum("xiwj,yizj->xyzw", T, T, optimize=True)
    )
    return float(np.einsum("xyzw,xy,zw->", K, hm, hm, optimize=True))


def rr_kn_pairing(R: CurvTensor4, h: SymTensor2) -> float:
    """Pairing of the operator square of R with h ^ h: tr(P_R^2 P_{h^h})."""
    P = to_lambda2(R).matrix
    Q = to_lambda2(kn_product(h, h)).matrix
    return float(np.trace(P @ P @ Q))


def compose_and_ricci(R: CurvTensor4, R1: CurvTensor4) -> tuple[CurvTensor4, SymTensor2]:
    """Operator product of two curvature tensors and its symmetrized Ricci.

    The product is formed on 2-vectors and mapped back to four indices; it
    is generally not pair symmetric, so the Ricci-type contraction is
    symmetrized:  r(x,y) = (1/2) sum_i [P(x,i,y,i) + P(y,i,x,i)].
    """
    P = to_lambda2(R).matrix @ to_lambda2(R1).matrix
    comp = from_lambda2(Lambda2Operator(_as_array4(R).shape[0], P))
    raw = np.einsum("aibi->ab", comp.entries)
    return comp, SymTensor2(0.5 * (raw + raw.T))


def tilde(h: SymTensor2, J) -> SymTensor2:
    """Sum of pullbacks of h under the nonidentity structure operators.

    ``J`` may be a structure family object (anything with an ``operators``
    attribute) or a plain list of matrices.  For the empty family the result
    is zero.
    """
    ops = getattr(J, "operators", J)
    hm = _as_matrix(h)
    out = np.zeros_like(hm)
    for Jm in ops:
        out += Jm.T @ hm @ Jm
    return SymTensor2(out)


def lambda2_pushforward(A: np.ndarray) -> np.ndarray:
    """Matrix of the induced map on 2-vectors: e_i ^ e_j -> A e_i ^ A e_j."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    ii, jj = _pair_index(n)
    # entry [(a,b),(c,d)] = A[a,c] A[b,d] - A[b,c] A[a,d]
    return (
        A[ii[:, None], ii[None, :]] * A[jj[:, None], jj[None, :]]
        - A[jj[:, None], ii[None, :]] * A[ii[:, None], jj[None, :]]
    )


def pair_vector(w: np.ndarray) -> np.ndarray:
    """Coordinates of an antisymmetric matrix in the lexicographic pair basis."""
    w = np.asarray(w, dtype=float)
    ii, jj = _pair_index(w.shape[0])
    return w[ii, jj]


def random_symtensor(n: int, seed: int, trace_free: bool = False) -> SymTensor2:
    """Seeded random symmetric 2-tensor, optionally with the trace removed."""
    if n < 3:
        raise ValueError("need n >= 3")
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n))
    s = 0.5 * (a + a.T)
    if trace_free:
        s -= np.trace(s) / n * np.eye(n)
        # re-subtract once; exact up to one rounding step
        s -= np.trace(s) / n * np.eye(n)
    return SymTensor2(s, trace_free=trace_free)


def _project_curvature(T: np.ndarray) -> np.ndarray:
    T = 0.5 * (T - np.einsum("xyzw->yxzw", T))
    T = 0.5 * (T - np.einsum("xyzw->xywz", T))
    T = 0.5 * (T + np.einsum("xyzw->zwxy", T))
    # Bianchi part: the cyclic average lands in the fully antisymmetric
    # class, and removing it stays inside the pair-symmetric class
    B = (T + np.einsum("xzwy->xyzw", T) + np.einsum("xwyz->xyzw", T)) / 3.0
    return T - B


def random_curvature(n: int, seed: int) -> CurvTensor4:
    """Seeded random algebraic curvature tensor by symmetry projection.

    A standard-normal 4-array is antisymmetrized in both pairs, symmetrized
    under pair exchange, and projected onto the kernel of the first Bianchi
    cyclic sum.  The projection is idempotent.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    rng = np.random.default_rng(seed)
    return CurvTensor4(_project_curvature(rng.standard_normal((n, n, n, n))))
