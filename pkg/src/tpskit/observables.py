"""Commuting operator pairs whose joint eigenspaces form a one-dimensional
k-by-l grid, the TPS they induce, and complementary pairs that pin a factor
pair down uniquely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOL, Tolerance, as_matrix, cluster_values, phase_fix
from .errors import (
    DimensionMismatch,
    JointDegeneracy,
    MultiplicityViolation,
    NotCommuting,
    NotComplementary,
    NotDiagonalizable,
)
from .tps import Tps, tps_new

_COND_LIMIT = 1e6  # eigenvector conditioning guard for non-Hermitian input


@dataclass(frozen=True, eq=False)
class ObservablePair:
    r: np.ndarray
    t: np.ndarray
    hermitian: bool  # both self-adjoint: "observables" rather than "operators"


@dataclass(frozen=True, eq=False)
class CharacteristicSets:
    k: int
    l: int
    r_eigenvalues: np.ndarray      # k cluster centers, ascending
    t_eigenvalues: np.ndarray      # l cluster centers, ascending
    M: list                        # l subspaces, each n x k orthonormal
    N: list                        # k subspaces, each n x l orthonormal
    grid: np.ndarray               # joint eigenvectors, column j*l+i


def observable_pair(r, t, tol: Tolerance = DEFAULT_TOL) -> ObservablePair:
    """Validate a commuting pair and tag whether both are self-adjoint."""
    rm = as_matrix(r)
    n = rm.shape[0]
    if rm.shape[1] != n:
        raise DimensionMismatch("r must be square")
    tm = as_matrix(t, rows=n, cols=n)
    scale = max(float(np.linalg.norm(rm)) * float(np.linalg.norm(tm)), 1.0)
    if np.linalg.norm(rm @ tm - tm @ rm) > 10 * tol.residual * scale:
        raise NotCommuting("r and t do not commute within tolerance")
    herm = (
        np.max(np.abs(rm - rm.conj().T)) <= tol.residual * (np.abs(rm).max() + 1)
        and np.max(np.abs(tm - tm.conj().T)) <= tol.residual * (np.abs(tm).max() + 1)
    )
    return ObservablePair(r=rm.copy(), t=tm.copy(), hermitian=bool(herm))


def _eigen_data(m: np.ndarray, hermitian: bool, tol: Tolerance):
    """Eigenvalues, cluster index lists, and orthonormal eigenspace bases."""
    if hermitian:
        vals, vecs = np.linalg.eigh(m)
    else:
        vals, vecs = np.linalg.eig(m)
        if np.linalg.cond(vecs) >= _COND_LIMIT:
            raise NotDiagonalizable(
                "eigenvector matrix too ill-conditioned to trust")
    clusters = cluster_values(vals, tol)
    spaces = []
    for c in clusters:
        cols = vecs[:, c]
        q, _ = np.linalg.qr(cols)
        spaces.append(q)
    centers = np.array([vals[c].mean() for c in clusters])
    if not np.iscomplexobj(centers) or np.max(np.abs(centers.imag), initial=0) < 1e-12:
        centers = centers.real
    return centers, spaces


def verify_standard_complete(p: ObservablePair,
                             tol: Tolerance = DEFAULT_TOL) -> CharacteristicSets:
    """Check the multiplicity grid of a commuting pair and return its
    characteristic data.

    Each eigenvalue of r must have multiplicity l, each eigenvalue of t
    multiplicity k, and every joint eigenspace must be one-dimensional; the
    joint eigenvectors, ordered j*l+i, form the grid.
    """
    n = p.r.shape[0]
    r_centers, n_spaces = _eigen_data(p.r, p.hermitian, tol)
    t_centers, m_spaces = _eigen_data(p.t, p.hermitian, tol)
    k = len(r_centers)
    l = len(t_centers)
    if k * l != n:
        raise MultiplicityViolation(
            f"{k} x {l} eigenvalue grid does not tile dimension {n}")
    for j, sp in enumerate(n_spaces):
        if sp.shape[1] != l:
            raise MultiplicityViolation(
                f"eigenvalue {r_centers[j]} of r has multiplicity "
                f"{sp.shape[1]}, expected {l}")
    for i, sp in enumerate(m_spaces):
        if sp.shape[1] != k:
            raise MultiplicityViolation(
                f"eigenvalue {t_centers[i]} of t has multiplicity "
                f"{sp.shape[1]}, expected {k}")

    spread = float(np.max(np.abs(r_centers[:, None] - r_centers[None, :]))) \
        if k > 1 else 0.0
    match_tol = max(tol.eig_cluster * (spread + 1.0), 1e-8)

    grid = np.zeros((n, n), dtype=np.complex128)
    rnorm = float(np.linalg.norm(p.r))
    for i, pi in enumerate(m_spaces):
        # r leaves each eigenspace of t invariant since [r, t] = 0
        ri = pi.conj().T @ p.r @ pi
        if np.linalg.norm(p.r @ pi - pi @ ri) > 1e-7 * (rnorm + 1):
            raise JointDegeneracy(
                "eigenspace of t is not invariant under r within tolerance")
        if p.hermitian:
            fvals, fvecs = np.linalg.eigh((ri + ri.conj().T) / 2)
        else:
            fvals, fvecs = np.linalg.eig(ri)
            if np.linalg.cond(fvecs) >= _COND_LIMIT:
                raise NotDiagonalizable(
                    "restricted eigenvector matrix too ill-conditioned")
        seen = set()
        for m_idx in range(k):
            dists = np.abs(fvals[m_idx] - r_centers)
            j = int(np.argmin(dists))
            if dists[j] > match_tol or j in seen:
                raise JointDegeneracy(
                    "joint eigenspace structure is not a one-dimensional grid")
            seen.add(j)
            vec = pi @ fvecs[:, m_idx]
            vec = phase_fix(vec / np.linalg.norm(vec))
            grid[:, j * l + i] = vec

    s = np.linalg.svd(grid, compute_uv=False)
    if s[-1] <= tol.rank_rel * s[0]:
        raise JointDegeneracy("joint eigenvectors are not linearly independent")
    return CharacteristicSets(
        k=k, l=l,
        r_eigenvalues=r_centers, t_eigenvalues=t_centers,
        M=m_spaces, N=n_spaces, grid=grid,
    )


def tps_from_observables(p: ObservablePair,
                         tol: Tolerance = DEFAULT_TOL) -> Tps:
    """Tps whose grid basis is the joint eigenvector grid of the pair.

    r acts on the result as (diag of its eigenvalues) on the first factor and
    t likewise on the second; for a self-adjoint pair the basis is unitary.
    """
    cs = verify_standard_complete(p, tol)
    return tps_new(cs.k, cs.l, cs.grid, tol)


def _chain_matrix(lams: np.ndarray) -> np.ndarray:
    """Upper-triangular operator fixing e_0 at the lowest eigenvalue and the
    chained sums e_j + e_{j+1} at the following ones."""
    k = lams.size
    e = np.eye(k, dtype=np.complex128)
    km = np.zeros((k, k), dtype=np.complex128)
    km[:, 0] = lams[0] * e[:, 0]
    for j in range(k - 1):
        km[:, j + 1] = lams[j + 1] * (e[:, j] + e[:, j + 1]) - km[:, j]
    return km


def complementary_pair(p: ObservablePair, cs: CharacteristicSets,
                       tol: Tolerance = DEFAULT_TOL) -> ObservablePair:
    """Second standard complete pair sharing the characteristic subspaces.

    Keeps t and replaces r by the chained operator that is no longer normal
    but acts irreducibly together with r on each shared eigenspace of t.
    """
    k, l = cs.k, cs.l
    km = _chain_matrix(np.asarray(cs.r_eigenvalues, dtype=np.complex128))
    block = np.kron(km, np.eye(l, dtype=np.complex128))
    r_tilde = cs.grid @ block @ np.linalg.inv(cs.grid)
    return observable_pair(r_tilde, p.t, tol)


def _subspace_match(p: np.ndarray, q: np.ndarray, thresh: float) -> bool:
    if p.shape != q.shape:
        return False
    resid = p - q @ (q.conj().T @ p)
    return float(np.linalg.norm(resid)) <= thresh


def _match_sets(spaces1: list, spaces2: list, thresh: float) -> bool:
    """Whether the two subspace families coincide as unordered sets."""
    if len(spaces1) != len(spaces2):
        return False
    unused = list(range(len(spaces2)))
    for p in spaces1:
        hit = None
        for idx in unused:
            if _subspace_match(p, spaces2[idx], thresh):
                hit = idx
                break
        if hit is None:
            return False
        unused.remove(hit)
    return True


def _restriction(op: np.ndarray, p: np.ndarray, tol: Tolerance):
    """Restrict an operator to an invariant subspace with orthonormal basis p.
    Returns None when the subspace is in fact not invariant."""
    sub = p.conj().T @ op @ p
    scale = float(np.linalg.norm(op)) + 1.0
    if np.linalg.norm(op @ p - p @ sub) > 1e-7 * scale:
        return None
    return sub


def _trivial_joint_commutant(mats: list, tol: Tolerance) -> bool:
    d = mats[0].shape[0]
    eye = np.eye(d, dtype=np.complex128)
    gram = np.zeros((d * d, d * d), dtype=np.complex128)
    for g in mats:
        lg = np.kron(eye, g) - np.kron(g.T, eye)
        gram += lg.conj().T @ lg
    evals = np.linalg.eigvalsh(gram)
    # relative cutoff: exact zeros show up at the eps * ||gram|| noise floor
    cut = 1e-10 * max(float(evals[-1]), 1.0)
    null_dim = int(np.count_nonzero(evals <= cut))
    return null_dim == 1


def _intertwiner(pair_i: tuple, pair_0: tuple, tol: Tolerance):
    """Invertible X with A_i X = X A_0 and B_i X = X B_0, or None."""
    a_i, b_i = pair_i
    a_0, b_0 = pair_0
    d = a_i.shape[0]
    eye = np.eye(d, dtype=np.complex128)
    stacked = np.vstack([
        np.kron(eye, a_i) - np.kron(a_0.T, eye),
        np.kron(eye, b_i) - np.kron(b_0.T, eye),
    ])
    _, s, vh = np.linalg.svd(stacked)
    smax = max(float(s[0]), 1.0)
    null = vh[s <= tol.rank_rel * smax].conj()
    for vec in null:
        x = vec.reshape(d, d, order="F")
        sv = np.linalg.svd(x, compute_uv=False)
        if sv[-1] > tol.rank_rel * sv[0]:
            return x
    return None


def _condition_data(op1: np.ndarray, op2: np.ndarray, spaces: list,
                    tol: Tolerance):
    """Evaluate one arm of the complementarity test.

    op1/op2 are restricted along the shared subspace family; returns
    (restrictions of op1, intertwiners to the first subspace) or None.
    """
    firsts, intertwiners = [], []
    restr = []
    for p in spaces:
        a = _restriction(op1, p, tol)
        b = _restriction(op2, p, tol)
        if a is None or b is None:
            return None
        if not _trivial_joint_commutant([a, b], tol):
            return None
        restr.append((a, b))
    for idx, (a, b) in enumerate(restr):
        if idx == 0:
            d = a.shape[0]
            intertwiners.append(np.eye(d, dtype=np.complex128))
        else:
            x = _intertwiner((a, b), restr[0], tol)
            if x is None:
                return None
            intertwiners.append(x)
        firsts.append(a)
    return firsts, intertwiners


def _complementary_data(p1: ObservablePair, p2: ObservablePair,
                        tol: Tolerance):
    cs1 = verify_standard_complete(p1, tol)
    cs2 = verify_standard_complete(p2, tol)
    thresh = 1e-7
    if _match_sets(cs1.M, cs2.M, thresh):
        data = _condition_data(p1.r, p2.r, cs1.M, tol)
        if data is not None:
            return "M", cs1, data
    if _match_sets(cs1.N, cs2.N, thresh):
        data = _condition_data(p1.t, p2.t, cs1.N, tol)
        if data is not None:
            return "N", cs1, data
    return None


def verify_complementary(p1: ObservablePair, p2: ObservablePair,
                         tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff the pairs share one characteristic family and act irreducibly
    (and fiberwise-isomorphically) on it."""
    return _complementary_data(p1, p2, tol) is not None


def tpp_from_complementary(p1: ObservablePair, p2: ObservablePair,
                           tol: Tolerance = DEFAULT_TOL):
    """The unique factor pair containing both complementary pairs, plus the
    grid structure it induces.

    Transports the eigenbasis of the first fiber through the (unique up to
    scale) intertwiners, fixing the free scalar per fiber by the global
    phase convention.
    """
    data = _complementary_data(p1, p2, tol)
    if data is None:
        raise NotComplementary("pairs are not complementary")
    mode, cs, (firsts, intertwiners) = data
    n = p1.r.shape[0]
    if mode == "M":
        spaces = cs.M
        fiber_dim = cs.k
        count = cs.l
    else:
        spaces = cs.N
        fiber_dim = cs.l
        count = cs.k

    a0 = firsts[0]
    fvals, fvecs = np.linalg.eig(a0)
    order = np.lexsort((fvals.imag, fvals.real))
    coords0 = []
    p0 = spaces[0]
    for j in order:
        vec = p0 @ fvecs[:, j]
        vec = phase_fix(vec / np.linalg.norm(vec))
        coords0.append(p0.conj().T @ vec)

    fibers = []
    for idx in range(count):
        pi = spaces[idx]
        cols = [pi @ (intertwiners[idx] @ c) for c in coords0]
        y0 = cols[0]
        mags = np.abs(y0)
        piv = int(np.argmax(mags))
        scale = np.linalg.norm(y0) * (y0[piv] / abs(y0[piv]))
        fibers.append([c / scale for c in cols])

    basis = np.zeros((n, n), dtype=np.complex128)
    if mode == "M":
        k, l = fiber_dim, count
        for i in range(count):
            for j in range(fiber_dim):
                basis[:, j * l + i] = fibers[i][j]
    else:
        k, l = count, fiber_dim
        for j in range(count):
            for i in range(fiber_dim):
                basis[:, j * l + i] = fibers[j][i]

    structure = tps_new(k, l, basis, tol)
    from .algebra import contains, tps_to_tpp

    a1, a2 = tps_to_tpp(structure, tol)
    for op, alg, name in ((p1.r, a1, "r1"), (p2.r, a1, "r2"),
                          (p1.t, a2, "t1"), (p2.t, a2, "t2")):
        if not contains(alg, op, tol):
            raise NotComplementary(
                f"{name} does not lie in the constructed algebra pair")
    return a1, a2, structure
