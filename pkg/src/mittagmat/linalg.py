"""Dense complex linear algebra needed by the matrix function engine.

The Jordan decomposition is computed in four stages:

1. a complex Schur form ``A = Q T Q^H`` (Householder reduction to Hessenberg
   form followed by Wilkinson-shifted QR iterations),
2. clustering of the diagonal of ``T`` into numerically coincident
   eigenvalues and reordering of the Schur form so that clusters are
   contiguous,
3. block diagonalization of ``T`` by solving triangular Sylvester equations,
4. construction of Jordan chains inside each (small) diagonal block from the
   rank sequence of the powers of the shifted block.

Working inside a cluster's diagonal block keeps the rank decisions on a
matrix whose scale is set by that cluster alone.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.linalg as sla

from mittagmat.errors import (
    DefectiveStructureUndetermined,
    IllConditionedTransform,
    InvalidParams,
    NonConvergence,
    SingularMatrix,
)

EPS = float(np.finfo(float).eps)

#: condition number of the Jordan transform above which results are flagged
ILL_CONDITIONED_THRESHOLD = 1.0e8
#: relative tolerance for rank decisions inside an eigenvalue cluster
JORDAN_RANK_TOL = math.sqrt(EPS)


def as_matrix(A, *, square: bool = True, name: str = "A") -> np.ndarray:
    """Convert *A* to a finite 2D complex array."""
    M = np.array(A, dtype=np.complex128)
    if M.ndim != 2:
        raise InvalidParams(f"{name} must be a 2D array, got shape {M.shape}")
    if square and M.shape[0] != M.shape[1]:
        raise InvalidParams(f"{name} must be square, got shape {M.shape}")
    if M.size == 0:
        raise InvalidParams(f"{name} must be non-empty")
    if not np.all(np.isfinite(M)):
        raise InvalidParams(f"{name} has non-finite entries")
    return M


# {{{ elementary factorizations


def hessenberg_reduce(A) -> tuple[np.ndarray, np.ndarray]:
    """Reduce *A* to upper Hessenberg form by Householder reflections.

    :returns: ``(H, Q)`` with ``Q`` unitary and ``A = Q H Q^H``.
    """
    H = as_matrix(A).copy()
    n = H.shape[0]
    Q = np.eye(n, dtype=np.complex128)

    for k in range(n - 2):
        x = H[k + 1:, k]
        normx = np.linalg.norm(x)
        if normx == 0.0 or np.linalg.norm(x[1:]) == 0.0:
            continue

        # v = x + e^{i arg x_0} |x| e_0 avoids cancellation
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * normx
        v /= np.linalg.norm(v)

        H[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ H[k + 1:, k:])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v.conj())
        Q[:, k + 1:] -= 2.0 * np.outer(Q[:, k + 1:] @ v, v.conj())
        H[k + 2:, k] = 0.0

    return H, Q


def _givens(x: complex, y: complex) -> np.ndarray:
    """Unitary ``G`` with ``G @ [x, y] = [r, 0]``."""
    if y == 0:
        return np.eye(2, dtype=np.complex128)
    if x == 0:
        return np.array([[0.0, np.conj(y) / abs(y)], [-y / abs(y), 0.0]], dtype=np.complex128)

    r = math.hypot(abs(x), abs(y))
    c = abs(x) / r
    s = (x / abs(x)) * np.conj(y) / r
    return np.array([[c, s], [-np.conj(s), c]], dtype=np.complex128)


def schur_decompose(A, max_iter: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Complex Schur decomposition ``A = Q T Q^H``.

    Uses Hessenberg reduction followed by explicitly shifted QR sweeps with
    Wilkinson shifts and exceptional shifts on stagnation.

    :arg max_iter: maximum number of QR sweeps spent on any single eigenvalue.
    :raises NonConvergence: if some eigenvalue does not deflate in time.
    """
    H, Q = hessenberg_reduce(A)
    n = H.shape[0]
    scale = max(np.linalg.norm(H), np.finfo(float).tiny)

    hi = n - 1
    its = 0
    while hi > 0:
        # look for a negligible subdiagonal entry
        lo = 0
        for k in range(hi, 0, -1):
            s = abs(H[k - 1, k - 1]) + abs(H[k, k])
            if s == 0.0:
                s = scale
            if abs(H[k, k - 1]) <= EPS * s:
                H[k, k - 1] = 0.0
                lo = k
                break

        if lo == hi:
            hi -= 1
            its = 0
            continue

        its += 1
        if its > max_iter:
            raise NonConvergence(
                f"QR iteration did not converge after {max_iter} sweeps "
                f"(eigenvalue index {hi})"
            )

        if its % 11 == 0:
            # exceptional shift
            mu = H[hi, hi] + 0.75 * abs(H[hi, hi - 1]) * (1.0 + 1.0j)
        else:
            a, b = H[hi - 1, hi - 1], H[hi - 1, hi]
            c, d = H[hi, hi - 1], H[hi, hi]
            half = 0.5 * (a - d)
            disc = np.sqrt(half * half + b * c)
            mu1, mu2 = d + half + disc, d + half - disc
            # the one closer to d
            mu = mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2

        idx = np.arange(lo, hi + 1)
        H[idx, idx] -= mu
        rotations = []
        for k in range(lo, hi):
            G = _givens(H[k, k], H[k + 1, k])
            H[k:k + 2, k:] = G @ H[k:k + 2, k:]
            H[k + 1, k] = 0.0
            rotations.append(G)
        for k, G in zip(range(lo, hi), rotations):
            rows = min(k + 2, hi) + 1
            H[:rows, k:k + 2] = H[:rows, k:k + 2] @ G.conj().T
            Q[:, k:k + 2] = Q[:, k:k + 2] @ G.conj().T
        H[idx, idx] += mu

    T = np.triu(H)
    return T, Q


def eigenvalues(A, max_iter: int = 100) -> list[complex]:
    """Eigenvalues of *A*, in the order they appear on the Schur diagonal."""
    T, _ = schur_decompose(A, max_iter=max_iter)
    return [complex(t) for t in np.diag(T)]


def solve_linear(A, b) -> np.ndarray:
    """Solve ``A x = b`` by LU factorization with partial pivoting.

    :raises SingularMatrix: if a pivot is below ``n eps ||A||``.
    """
    A = as_matrix(A)
    b = np.asarray(b, dtype=np.complex128)
    n = A.shape[0]
    if b.shape[0] != n:
        raise InvalidParams(f"right-hand side has {b.shape[0]} rows, expected {n}")

    with warnings.catch_warnings():
        # singularity is judged against our own pivot threshold below
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(A, check_finite=False)
    threshold = n * EPS * np.linalg.norm(A, ord=np.inf)
    if np.min(np.abs(np.diag(lu))) <= threshold:
        raise SingularMatrix("matrix is numerically singular")
    return sla.lu_solve((lu, piv), b, check_finite=False)


def inverse(A) -> np.ndarray:
    A = as_matrix(A)
    return solve_linear(A, np.eye(A.shape[0], dtype=np.complex128))


def rank_with_tol(A, rank_tol: Optional[float] = None) -> int:
    """Numerical rank: number of singular values above ``rank_tol * sigma_max``.

    The default ``rank_tol`` is ``max(rows, cols) * eps``.
    """
    A = as_matrix(A, square=False)
    if rank_tol is None:
        rank_tol = max(A.shape) * EPS
    if rank_tol < 0:
        raise InvalidParams("rank_tol must be non-negative")

    sigma = np.linalg.svd(A, compute_uv=False)
    if sigma[0] == 0.0:
        return 0
    return int(np.sum(sigma > rank_tol * sigma[0]))


# }}}


# {{{ eigenvalue clustering


@dataclass(frozen=True)
class EigenvalueCluster:
    """Computed eigenvalues that represent a single exact eigenvalue."""

    representative: complex
    algebraic_multiplicity: int
    members: tuple[complex, ...]


def _make_cluster(members: Sequence[complex]) -> EigenvalueCluster:
    members = tuple(complex(m) for m in members)
    rep = complex(np.mean(members))
    return EigenvalueCluster(rep, len(members), members)


def _union_find_clusters(eigs: Sequence[complex], accept) -> list[list[int]]:
    n = len(eigs)
    parent = list(range(n))
    size = [1] * n

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    pairs = sorted(
        (abs(eigs[i] - eigs[j]), i, j) for i in range(n) for j in range(i + 1, n)
    )
    for dist, i, j in pairs:
        ri, rj = find(i), find(j)
        if ri != rj and accept(dist, size[ri] + size[rj]):
            if size[ri] < size[rj]:
                ri, rj = rj, ri
            parent[rj] = ri
            size[ri] += size[rj]

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    # keep order of first appearance
    return sorted(groups.values(), key=lambda g: g[0])


def cluster_eigenvalues(
    eigs: Sequence[complex], cluster_tol: float
) -> list[EigenvalueCluster]:
    """Single-linkage clustering with a fixed distance threshold.

    Two eigenvalues share a cluster iff they are connected by a chain of
    pairwise distances at most *cluster_tol*.
    """
    if not cluster_tol > 0:
        raise InvalidParams("cluster_tol must be positive")
    eigs = [complex(e) for e in eigs]
    groups = _union_find_clusters(eigs, lambda dist, _: dist <= cluster_tol)
    return [_make_cluster([eigs[i] for i in g]) for g in groups]


def default_cluster_tol(n: int, norm: float) -> float:
    """Clustering threshold for double eigenvalues, ``max(n, 10) sqrt(eps) ||A||``."""
    return max(n, 10) * math.sqrt(EPS) * norm


def multiscale_cluster_tol(n: int, norm: float, size: int) -> float:
    """Clustering threshold for a cluster that would have *size* members.

    An eigenvalue of a Jordan block of size ``m`` splits by roughly
    ``eps^(1/m)`` under rounding, so the threshold widens with the size of
    the cluster being formed.
    """
    return max(n, 10) * EPS ** (1.0 / max(size, 2)) * norm


def _multiscale_groups(
    eigs: Sequence[complex], n: int, norm: float, max_size: int
) -> list[list[int]]:
    """Group eigenvalues, trying large clusters (with wide thresholds) first.

    For ``s = max_size, ..., 2`` the remaining eigenvalues are linked at the
    threshold for size ``s`` and every component with between ``s`` and
    ``max_size`` members is accepted as a cluster.
    """
    eigs = [complex(e) for e in eigs]
    remaining = list(range(len(eigs)))
    groups: list[list[int]] = []
    for s in range(max_size, 1, -1):
        if len(remaining) < s:
            continue
        tol = multiscale_cluster_tol(n, norm, s)
        sub = _union_find_clusters(
            [eigs[i] for i in remaining], lambda dist, _: dist <= tol
        )
        taken = set()
        for g in sub:
            if s <= len(g) <= max_size:
                groups.append([remaining[i] for i in g])
                taken.update(g)
        remaining = [r for i, r in enumerate(remaining) if i not in taken]
    groups.extend([r] for r in remaining)
    return sorted(groups, key=lambda g: min(g))


# }}}


# {{{ Schur reordering and block diagonalization


def _swap_schur(T: np.ndarray, Q: np.ndarray, k: int) -> None:
    """Swap the diagonal entries ``k`` and ``k + 1`` of the Schur form in place."""
    t11, t22, t12 = T[k, k], T[k + 1, k + 1], T[k, k + 1]
    x = np.array([t12, t22 - t11])
    nx = np.linalg.norm(x)
    if nx == 0.0:
        return
    a, b = x / nx
    U = np.array([[a, -np.conj(b)], [b, np.conj(a)]])

    T[k:k + 2, k:] = U.conj().T @ T[k:k + 2, k:]
    T[:k + 2, k:k + 2] = T[:k + 2, k:k + 2] @ U
    Q[:, k:k + 2] = Q[:, k:k + 2] @ U
    T[k + 1, k] = 0.0
    T[k, k], T[k + 1, k + 1] = t22, t11


def _reorder_schur(T: np.ndarray, Q: np.ndarray, labels: list[int]) -> list[int]:
    """Bubble-sort the Schur form so that equal labels are contiguous.

    Labels are sorted in increasing order; the permuted labels are returned.
    """
    labels = list(labels)
    n = len(labels)
    for i in range(n):
        for k in range(n - 1 - i):
            if labels[k] > labels[k + 1]:
                _swap_schur(T, Q, k)
                labels[k], labels[k + 1] = labels[k + 1], labels[k]
    return labels


def _triangular_sylvester(T11: np.ndarray, T22: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Solve ``T11 Y - Y T22 = C`` for upper triangular ``T11``, ``T22``."""
    p, q = C.shape
    Y = np.zeros((p, q), dtype=np.complex128)
    eye = np.eye(p)
    for j in range(q):
        rhs = C[:, j] + Y[:, :j] @ T22[:j, j]
        Y[:, j] = sla.solve_triangular(T11 - T22[j, j] * eye, rhs, check_finite=False)
    return Y


def _block_diagonalize(
    T: np.ndarray, sizes: list[int]
) -> tuple[list[np.ndarray], np.ndarray, np.ndarray]:
    """Find ``X`` with ``T = X diag(D_1, ..., D_s) X^{-1}``.

    ``X`` is block upper triangular with identity diagonal blocks.
    """
    n = T.shape[0]
    X = np.eye(n, dtype=np.complex128)
    Xinv = np.eye(n, dtype=np.complex128)
    blocks = []

    start = 0
    for size in sizes:
        stop = start + size
        T11 = T[start:stop, start:stop]
        blocks.append(T11.copy())
        if stop < n:
            T22 = T[stop:, stop:]
            Y = _triangular_sylvester(T11, T22, -T[start:stop, stop:])
            # X <- X [[I, Y], [0, I]] and Xinv <- [[I, -Y], [0, I]] Xinv
            X[:, stop:] += X[:, start:stop] @ Y
            Xinv[start:stop, :] -= Y @ Xinv[stop:, :]
        start = stop

    return blocks, X, Xinv


# }}}


# {{{ Jordan chains


def _null_space(M: np.ndarray, nullity: int) -> np.ndarray:
    """Orthonormal basis of the *nullity* least significant right singular vectors."""
    if nullity == 0:
        return np.zeros((M.shape[1], 0), dtype=np.complex128)
    _, _, Vh = np.linalg.svd(M)
    return Vh[-nullity:].conj().T


def _nullity_sequence(N: np.ndarray, scale: float) -> list[int]:
    """Nullities ``d_k = m - rank(N^k)`` for ``k = 0, 1, ..., p``."""
    m = N.shape[0]
    normN = np.linalg.norm(N, 2)
    if normN <= JORDAN_RANK_TOL * scale:
        return [0, m]

    d = [0]
    P = np.eye(m, dtype=np.complex128)
    for k in range(1, m + 1):
        P = P @ N
        sigma = np.linalg.svd(P, compute_uv=False)
        rank = int(np.sum(sigma > JORDAN_RANK_TOL * normN**k))
        d.append(m - rank)
        if d[-1] == m:
            break
    return d


def _weyr_consistent(d: list[int], m: int) -> bool:
    if d[-1] != m:
        return False
    inc = [d[k] - d[k - 1] for k in range(1, len(d))]
    return all(i > 0 for i in inc) and all(inc[k] >= inc[k + 1] for k in range(len(inc) - 1))


def _jordan_chains(N: np.ndarray, d: list[int]) -> tuple[np.ndarray, list[int]]:
    """Jordan basis of the nilpotent matrix *N* given its nullity sequence.

    :returns: ``(W, sizes)`` with ``N W = W J`` where ``J`` is the nilpotent
        Jordan matrix with blocks of the given sizes (ones on the
        superdiagonal). Each chain is scaled so that its eigenvector has unit
        norm.
    """
    m = N.shape[0]
    p = len(d) - 1
    inc = [d[k] - d[k - 1] for k in range(1, p + 1)] + [0]

    powers = [np.eye(m, dtype=np.complex128)]
    for _ in range(p):
        powers.append(powers[-1] @ N)
    kernels = [_null_space(powers[k], d[k]) for k in range(p + 1)]

    tops: list[tuple[np.ndarray, int]] = []
    for k in range(p, 0, -1):
        need = inc[k - 1] - inc[k]
        if need == 0:
            continue

        existing = [powers[length - k] @ v for v, length in tops]
        M = np.column_stack([kernels[k - 1], *existing]) if existing or d[k - 1] else None
        if M is not None and M.shape[1] > 0:
            U, s, _ = np.linalg.svd(M, full_matrices=False)
            U = U[:, s > JORDAN_RANK_TOL * s[0]]
            proj = kernels[k] - U @ (U.conj().T @ kernels[k])
        else:
            proj = kernels[k]

        U, s, _ = np.linalg.svd(proj, full_matrices=False)
        if len(s) < need or s[need - 1] <= JORDAN_RANK_TOL:
            raise DefectiveStructureUndetermined(
                f"cannot find {need} independent chains of length {k}"
            )
        for i in range(need):
            tops.append((U[:, i], k))

    columns = []
    sizes = []
    for v, length in tops:
        chain = [powers[length - j] @ v for j in range(1, length + 1)]
        scale = np.linalg.norm(chain[0])
        columns.extend(c / scale for c in chain)
        sizes.append(length)

    return np.column_stack(columns), sizes


# }}}


# {{{ Jordan decomposition


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class JordanDecomposition:
    """A numerical Jordan decomposition ``A = Z J Z^{-1}``."""

    #: ``(eigenvalue, size)`` pairs, in the order the blocks appear in ``J``
    blocks: tuple[tuple[complex, int], ...]
    #: the transform ``Z``
    transform: np.ndarray
    #: the inverse transform ``Z^{-1}``
    transform_inverse: np.ndarray
    #: 2-norm condition number of ``Z``
    condition_estimate: float
    #: eigenvalue clusters the blocks were built from
    clusters: tuple[EigenvalueCluster, ...] = field(default=())

    @property
    def n(self) -> int:
        return self.transform.shape[0]

    @property
    def ill_conditioned(self) -> bool:
        return self.condition_estimate > ILL_CONDITIONED_THRESHOLD

    def jordan_matrix(self) -> np.ndarray:
        """Assemble the block diagonal Jordan matrix ``J``."""
        J = np.zeros((self.n, self.n), dtype=np.complex128)
        start = 0
        for lam, size in self.blocks:
            idx = np.arange(start, start + size)
            J[idx, idx] = lam
            J[idx[:-1], idx[1:]] = 1.0
            start += size
        return J

    def reconstruct(self) -> np.ndarray:
        return self.transform @ self.jordan_matrix() @ self.transform_inverse

    def largest_blocks(self) -> dict[complex, int]:
        """Largest block size for every distinct eigenvalue (minimal polynomial)."""
        out: dict[complex, int] = {}
        for lam, size in self.blocks:
            out[lam] = max(out.get(lam, 0), size)
        return out


def jordan_decompose(
    A,
    cluster_tol: Optional[float] = None,
    max_iter: int = 100,
) -> JordanDecomposition:
    """Compute a Jordan decomposition ``A = Z J Z^{-1}``.

    :arg cluster_tol: fixed single-linkage threshold for merging computed
        eigenvalues. By default a multiplicity-aware threshold is used (see
        :func:`multiscale_cluster_tol`), and clusters whose shifted block turns
        out not to be nilpotent are split again.
    :raises DefectiveStructureUndetermined: if the rank decisions for some
        cluster are inconsistent.
    """
    A = as_matrix(A)
    n = A.shape[0]
    norm = np.linalg.norm(A)
    if norm == 0.0:
        I = _readonly(np.eye(n))
        cluster = _make_cluster([0.0] * n)
        return JordanDecomposition(((0j, 1),) * n, I, I, 1.0, (cluster,))

    T0, Q0 = schur_decompose(A, max_iter=max_iter)
    eigs = [complex(t) for t in np.diag(T0)]

    if cluster_tol is not None:
        groups = _union_find_clusters(eigs, lambda dist, _: dist <= cluster_tol)
        refine = False
    else:
        groups = _multiscale_groups(eigs, n, norm, n)
        refine = True

    while True:
        labels = [0] * n
        for label, g in enumerate(groups):
            for i in g:
                labels[i] = label

        T, Q = T0.copy(), Q0.copy()
        _reorder_schur(T, Q, labels)
        sizes = [len(g) for g in groups]
        diag_blocks, X, Xinv = _block_diagonalize(T, sizes)

        structures = []
        split = None
        for gi, D in enumerate(diag_blocks):
            m = D.shape[0]
            lam = complex(np.trace(D) / m)
            N = D - lam * np.eye(m)
            if m == 1:
                structures.append((lam, N, [0, 1]))
                continue
            d = _nullity_sequence(N, norm)
            if not _weyr_consistent(d, m):
                if refine:
                    split = gi
                    break
                raise DefectiveStructureUndetermined(
                    f"inconsistent rank sequence {d} for cluster at {lam}"
                )
            structures.append((lam, N, d))

        if split is None:
            break

        # split the offending cluster into smaller ones and start over
        members = groups[split]
        sub = _multiscale_groups(
            [eigs[i] for i in members], n, norm, len(members) - 1
        )
        groups = groups[:split] + [[members[i] for i in s] for s in sub] + groups[split + 1:]

    blocks = []
    W = np.zeros((n, n), dtype=np.complex128)
    Winv = np.zeros((n, n), dtype=np.complex128)
    start = 0
    for lam, N, d in structures:
        m = N.shape[0]
        if d == [0, m]:
            # semisimple cluster: keep the individual diagonal entries, which
            # drops only the strictly upper part of the block
            Wc = np.eye(m, dtype=np.complex128)
            blocks.extend((lam + complex(N[i, i]), 1) for i in range(m))
        else:
            Wc, bsizes = _jordan_chains(N, d)
            blocks.extend((lam, s) for s in bsizes)
        W[start:start + m, start:start + m] = Wc
        # equilibrate columns first: chain vectors grow like ||N||^-k
        colnorm = np.linalg.norm(Wc, axis=0)
        Winv[start:start + m, start:start + m] = inverse(Wc / colnorm) / colnorm[:, None]
        start += m

    Z = Q @ X @ W
    Zinv = Winv @ Xinv @ Q.conj().T

    # scale every chain so that its eigenvector has unit norm
    start = 0
    for _, size in blocks:
        scale = np.linalg.norm(Z[:, start])
        Z[:, start:start + size] /= scale
        Zinv[start:start + size, :] *= scale
        start += size
    cond = float(np.linalg.norm(Z, 2) * np.linalg.norm(Zinv, 2))
    clusters = tuple(_make_cluster([eigs[i] for i in g]) for g in groups)

    result = JordanDecomposition(
        tuple(blocks), _readonly(Z), _readonly(Zinv), max(cond, 1.0), clusters
    )
    if result.ill_conditioned:
        warnings.warn(
            f"Jordan transform condition number {cond:.3e} exceeds "
            f"{ILL_CONDITIONED_THRESHOLD:.0e}",
            IllConditionedTransform,
            stacklevel=2,
        )
    return result


# }}}
