"""Dense complex linear-algebra kernels used by every other module.

Matrices are plain ``numpy`` arrays of dtype complex128; states are column
vectors (shape ``(n,)`` or ``(n, 1)`` is accepted at the boundary and
normalized to ``(n,)`` internally where convenient).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    NotHermitian,
    NotOrthonormal,
)


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds shared across the library.

    eig_cluster : relative gap used when grouping eigenvalues into clusters
    rank_rel    : relative singular-value cutoff for numeric ranks
    residual    : absolute residual bound for verification checks
    """

    eig_cluster: float = 1e-8
    rank_rel: float = 1e-10
    residual: float = 1e-10

    def __post_init__(self):
        if not (self.eig_cluster > 0 and self.rank_rel > 0 and self.residual > 0):
            raise ValueError("tolerances must be strictly positive")
        if not self.rank_rel < 1:
            raise ValueError("rank_rel must be < 1")


DEFAULT_TOL = Tolerance()


def as_matrix(m, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Coerce input to a finite complex128 2-d array, checking shape if given."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got ndim={a.ndim}")
    if rows is not None and a.shape[0] != rows:
        raise DimensionMismatch(f"expected {rows} rows, got {a.shape[0]}")
    if cols is not None and a.shape[1] != cols:
        raise DimensionMismatch(f"expected {cols} columns, got {a.shape[1]}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix entries must be finite")
    return a


def as_vector(w, n: int | None = None) -> np.ndarray:
    """Coerce input to a finite complex128 1-d array of length ``n``."""
    a = np.asarray(w, dtype=np.complex128).reshape(-1)
    if n is not None and a.size != n:
        raise DimensionMismatch(f"expected a vector of length {n}, got {a.size}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("vector entries must be finite")
    return a


def cluster_values(values: np.ndarray, tol: Tolerance) -> list[np.ndarray]:
    """Group scalars into clusters by single-linkage with a relative gap.

    Works for real and complex values.  The gap threshold is
    ``eig_cluster * (spread + 1)`` where spread is the diameter of the value
    set, so a constant spectrum forms a single cluster.  Returns index arrays,
    ordered by ascending cluster representative (lexicographic (re, im) for
    complex input).
    """
    values = np.asarray(values)
    n = values.size
    if n == 0:
        return []
    spread = 0.0
    if n > 1:
        spread = float(np.max(np.abs(values[:, None] - values[None, :])))
    threshold = tol.eig_cluster * (spread + 1.0)

    order = np.lexsort((values.imag, values.real)) if np.iscomplexobj(values) \
        else np.argsort(values)
    # union-find on pairwise proximity; n is small everywhere in this library
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a in range(n):
        for b in range(a + 1, n):
            if abs(values[a] - values[b]) <= threshold:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb

    groups: dict[int, list[int]] = {}
    for i in order:
        groups.setdefault(find(i), []).append(i)
    clusters = [np.array(idx) for idx in groups.values()]
    clusters.sort(key=lambda idx: (values[idx[0]].real, values[idx[0]].imag))
    return clusters


def hermitian_eigendecompose(m, tol: Tolerance = DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    eigenvectors as the columns of a unitary matrix.  Raises NotHermitian when
    the input deviates from its adjoint by more than ``tol.residual``
    entrywise.
    """
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch("matrix must be square")
    if np.max(np.abs(a - a.conj().T), initial=0.0) > tol.residual:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    try:
        vals, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as e:  # pragma: no cover - LAPACK failure
        raise ConvergenceFailure(str(e)) from e
    return vals, vecs


def svd(m):
    """Singular value decomposition ``m = u @ diag(sigma) @ v†``.

    Returns ``(u, sigma, v)`` with sigma descending and u, v unitary
    (thin factors for rectangular input).
    """
    a = as_matrix(m)
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as e:  # pragma: no cover
        raise ConvergenceFailure(str(e)) from e
    return u, s, vh.conj().T


def numeric_rank(m, tol: Tolerance = DEFAULT_TOL) -> int:
    """Number of singular values above ``rank_rel`` times the largest one."""
    a = as_matrix(m)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_rel * s[0]))


def complete_orthonormal(vs, n: int, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Extend orthonormal columns to a full n-by-n unitary.

    The first ``vs.shape[1]`` columns of the result equal ``vs`` exactly.
    """
    a = np.asarray(vs, dtype=np.complex128)
    if a.size == 0:
        a = a.reshape(n, 0)
    a = as_matrix(a, rows=n)
    m = a.shape[1]
    if m > n:
        raise DimensionMismatch("more columns than the target dimension")
    if m > 0:
        gram = a.conj().T @ a
        if np.max(np.abs(gram - np.eye(m))) > 10 * tol.residual:
            raise NotOrthonormal("input columns are not orthonormal")
    if m == n:
        return a.copy()
    if m == 0:
        return np.eye(n, dtype=np.complex128)
    u, _, _ = np.linalg.svd(a, full_matrices=True)
    # u[:, :m] spans range(a); the trailing columns span the complement
    return np.hstack([a, u[:, m:]])


def frobenius(m) -> float:
    return float(np.linalg.norm(np.asarray(m)))


def phase_fix(v: np.ndarray) -> np.ndarray:
    """Rotate a vector's global phase so its largest-magnitude entry is
    real positive (ties broken by lowest index)."""
    v = np.asarray(v, dtype=np.complex128)
    mags = np.abs(v)
    p = int(np.argmax(mags > mags.max() - 1e-14 * (mags.max() + 1)))
    pivot = v[p]
    if abs(pivot) == 0.0:
        return v.copy()
    return v * (abs(pivot) / pivot)
