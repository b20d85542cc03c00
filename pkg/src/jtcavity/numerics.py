"""Complex Hermitian linear algebra substrate.

Sparse Hermitian storage (one triangle in coordinate form), dense
eigendecomposition, Lanczos tridiagonalization with full
reorthogonalization, and Krylov short-time propagators. Everything here
is generic numerics; the physics lives in the modules that build the
matrices.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh, eigh_tridiagonal

from .units import HBAR_EV_FS

DENSE_LIMIT_DEFAULT = 12_000
BREAKDOWN_TOL = 1e-14
DIAG_IMAG_TOL = 1e-12


class DimensionError(ValueError):
    """Vector or matrix dimensions do not match."""


class DenseLimitError(ValueError):
    """Matrix too large for the dense eigensolver path."""


class PropagationError(RuntimeError):
    """Propagation produced non-finite amplitudes or lost norm."""


class SparseHermitian:
    """Hermitian matrix stored as the upper triangle in coordinate form.

    Entries with row > col are folded onto the conjugate position at
    construction, duplicates are summed, and diagonal entries must be
    real to within 1e-12. Instances are immutable after construction and
    safe for concurrent read-only use.
    """

    def __init__(self, dim: int, rows, cols, vals):
        if dim <= 0:
            raise DimensionError(f"dim must be positive, got {dim}")
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.complex128)
        if not (rows.shape == cols.shape == vals.shape):
            raise DimensionError("rows, cols, vals must have equal length")
        if rows.size and (rows.min() < 0 or cols.min() < 0
                          or rows.max() >= dim or cols.max() >= dim):
            raise DimensionError("index out of range")
        # fold the lower triangle onto the upper one
        swap = rows > cols
        rows2 = np.where(swap, cols, rows)
        cols2 = np.where(swap, rows, cols)
        vals2 = np.where(swap, np.conj(vals), vals)
        # sum duplicates, canonical (row, col) order
        key = rows2 * dim + cols2
        order = np.argsort(key, kind="stable")
        key = key[order]
        vals2 = vals2[order]
        uniq, start = np.unique(key, return_index=True)
        summed = np.add.reduceat(vals2, start) if key.size else vals2
        self.dim = int(dim)
        self.rows = (uniq // dim).astype(np.int64)
        self.cols = (uniq % dim).astype(np.int64)
        self.vals = summed
        diag = self.rows == self.cols
        if diag.any():
            bad = np.abs(self.vals[diag].imag)
            if bad.max() > DIAG_IMAG_TOL * max(1.0, np.abs(self.vals).max()):
                raise ValueError("diagonal entries must be real")
            self.vals[diag] = self.vals[diag].real
        for arr in (self.rows, self.cols, self.vals):
            arr.setflags(write=False)
        self._csr = None
        self._norm = None

    @property
    def nnz(self) -> int:
        return self.vals.size

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.vals.imag == 0.0))

    def to_csr(self) -> sp.csr_matrix:
        """Full (both triangles) CSR form; built once and cached."""
        if self._csr is None:
            upper = sp.coo_matrix(
                (self.vals, (self.rows, self.cols)), shape=(self.dim, self.dim))
            off = self.rows != self.cols
            lower = sp.coo_matrix(
                (np.conj(self.vals[off]), (self.cols[off], self.rows[off])),
                shape=(self.dim, self.dim))
            self._csr = (upper + lower).tocsr()
        return self._csr

    def to_dense(self) -> np.ndarray:
        """Dense form, float64 when all entries are real (this halves the
        memory of the large sector solves)."""
        real = self.is_real
        out = np.zeros((self.dim, self.dim),
                       dtype=np.float64 if real else np.complex128)
        vals = self.vals.real if real else self.vals
        out[self.rows, self.cols] = vals
        off = self.rows != self.cols
        out[self.cols[off], self.rows[off]] = np.conj(vals[off])
        return out

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        if x.shape[0] != self.dim:
            raise DimensionError(
                f"vector of length {x.shape[0]} against matrix of dim {self.dim}")
        return self.to_csr() @ x

    def norm_bound(self) -> float:
        """Inf-norm of the full matrix; cheap upper bound on ||H||_2."""
        if self._norm is None:
            csr = self.to_csr()
            self._norm = float(np.abs(csr).sum(axis=1).max()) if self.nnz else 0.0
        return self._norm


def matvec(H: SparseHermitian, x: np.ndarray) -> np.ndarray:
    """Apply H to x with the implied conjugate triangle included."""
    return H.matvec(np.asarray(x, dtype=np.complex128))


@dataclass
class EigenResult:
    """Eigenvalues in ascending order, optional orthonormal vectors.

    vectors[:, k] belongs to values[k]; residuals[k] = ||H x_k - w_k x_k||.
    """

    values: np.ndarray
    vectors: Optional[np.ndarray] = None
    residuals: Optional[np.ndarray] = None


def eig_dense(H: SparseHermitian, want_vectors: bool = True,
              dense_limit: int = DENSE_LIMIT_DEFAULT,
              subset_by_value: Optional[tuple] = None) -> EigenResult:
    """Full dense Hermitian eigendecomposition.

    Parameters
    ----------
    H : SparseHermitian
    want_vectors : bool
        Compute eigenvectors (and residuals) as well.
    dense_limit : int
        Refuse matrices larger than this; use the Lanczos path instead.
    subset_by_value : (lo, hi), optional
        Restrict returned pairs to eigenvalues in [lo, hi). Values outside
        are still computed internally but not returned.
    """
    if H.dim > dense_limit:
        raise DenseLimitError(
            f"dim {H.dim} exceeds dense limit {dense_limit}; "
            "use lanczos_spectral_measure or raise the limit")
    A = H.to_dense()
    kwargs = {"overwrite_a": True}
    if subset_by_value is not None:
        kwargs["subset_by_value"] = subset_by_value
        kwargs["driver"] = "evr"
    else:
        kwargs["driver"] = "evd" if want_vectors else "ev"
    if want_vectors:
        w, V = eigh(A, **kwargs)
        del A
        resid = _residuals(H, w, V)
        return EigenResult(values=w, vectors=V, residuals=resid)
    w = eigh(A, eigvals_only=True, **kwargs)
    return EigenResult(values=w)


def _residuals(H: SparseHermitian, w: np.ndarray, V: np.ndarray,
               chunk: int = 1024) -> np.ndarray:
    """||H x_k - w_k x_k|| per eigenpair, in column chunks to bound the
    transient product memory on the big sectors."""
    csr = H.to_csr()
    if np.isrealobj(V) and H.is_real:
        csr = csr.real
    out = np.empty(V.shape[1])
    for s in range(0, V.shape[1], chunk):
        block = V[:, s:s + chunk]
        R = csr @ block - block * w[np.newaxis, s:s + chunk]
        out[s:s + chunk] = np.linalg.norm(R, axis=0)
    return out


@dataclass
class SpectralMeasure:
    """Ritz energies and spectral weights of a seed vector.

    weights[k] = |<seed|ritz_k>|^2, summing to 1. ``breakdown`` marks an
    exact invariant-subspace termination before the requested iteration
    count; the returned measure is then already converged.
    """

    energies: np.ndarray
    weights: np.ndarray
    breakdown: bool = False
    vectors: Optional[np.ndarray] = None
    residual_bounds: Optional[np.ndarray] = None

    def pairs(self):
        return list(zip(self.energies.tolist(), self.weights.tolist()))


def lanczos_spectral_measure(H: SparseHermitian, seed: np.ndarray, m: int,
                             want_vectors: bool = False) -> SpectralMeasure:
    """Spectral measure of ``seed`` by Lanczos with full reorthogonalization.

    Runs m three-term steps, reorthogonalizing against all previous
    Krylov vectors twice per step, then diagonalizes the tridiagonal
    matrix. With m = H.dim this reproduces the exact measure; degenerate
    eigenvalues appear once, carrying their combined weight.

    Parameters
    ----------
    H : SparseHermitian
    seed : complex vector, normalized internally.
    m : number of Lanczos steps, 1 <= m <= H.dim.
    want_vectors : bool
        Also return Ritz vectors (dim x k) and residual bounds
        |beta_m * s_{m,k}| for each Ritz pair.
    """
    if not 1 <= m <= H.dim:
        raise DimensionError(f"m={m} outside [1, dim={H.dim}]")
    q = np.asarray(seed, dtype=np.complex128).copy()
    nrm = np.linalg.norm(q)
    if nrm == 0.0:
        raise ValueError("seed vector is zero")
    q /= nrm
    csr = H.to_csr()
    Q = np.empty((H.dim, m), dtype=np.complex128)
    alphas = np.empty(m)
    betas = np.empty(max(m - 1, 0))
    breakdown = False
    k_done = 0
    last_beta = 0.0
    for k in range(m):
        Q[:, k] = q
        r = csr @ q
        alphas[k] = np.real(np.vdot(q, r))
        r -= alphas[k] * q
        if k > 0:
            r -= betas[k - 1] * Q[:, k - 1]
        # full reorthogonalization, twice for stability
        active = Q[:, :k + 1]
        r -= active @ (active.conj().T @ r)
        r -= active @ (active.conj().T @ r)
        k_done = k + 1
        beta = np.linalg.norm(r)
        if k == m - 1:
            last_beta = beta
            break
        if beta < BREAKDOWN_TOL:
            breakdown = True
            break
        betas[k] = beta
        q = r / beta
    a = alphas[:k_done]
    b = betas[:k_done - 1]
    theta, S = eigh_tridiagonal(a, b)
    weights = np.abs(S[0, :]) ** 2
    measure = SpectralMeasure(energies=theta, weights=weights, breakdown=breakdown)
    if want_vectors:
        measure.vectors = Q[:, :k_done] @ S
        measure.residual_bounds = np.abs(last_beta * S[-1, :])
    return measure


def krylov_step(h_eff: Callable[[float], object], psi: np.ndarray,
                t: float, dt: float, kdim: int) -> np.ndarray:
    """One short-time step exp(-i H(t + dt/2) dt / hbar) |psi>.

    The (possibly time-dependent) operator is sampled once at the
    interval midpoint and exponentiated in a Krylov subspace of dimension
    ``kdim`` built from psi. ``h_eff(t)`` must return an object with
    ``dim`` and ``matvec`` (a SparseHermitian works). Early Lanczos
    breakdown makes the result exact in the spanned invariant subspace.
    Norm is preserved to roundoff because the small exponential is
    unitary. A negative dt steps backwards (used by the time-reversal
    checks); dt must be nonzero for a meaningful step.
    """
    if kdim < 2:
        raise ValueError("kdim must be >= 2")
    A = h_eff(t + 0.5 * dt)
    psi = np.asarray(psi, dtype=np.complex128)
    if len(psi) != A.dim:
        raise DimensionError("state length does not match operator dim")
    nrm = np.linalg.norm(psi)
    if nrm == 0.0:
        return psi.copy()
    kdim = min(kdim, A.dim)
    Q = np.empty((A.dim, kdim), dtype=np.complex128)
    alphas = np.empty(kdim)
    betas = np.empty(max(kdim - 1, 0))
    q = psi / nrm
    k_done = 0
    for k in range(kdim):
        Q[:, k] = q
        r = A.matvec(q)
        alphas[k] = np.real(np.vdot(q, r))
        r = r - alphas[k] * q
        if k > 0:
            r -= betas[k - 1] * Q[:, k - 1]
        active = Q[:, :k + 1]
        r -= active @ (active.conj().T @ r)
        k_done = k + 1
        if k == kdim - 1:
            break
        beta = np.linalg.norm(r)
        if beta < BREAKDOWN_TOL:
            break
        betas[k] = beta
        q = r / beta
    a = alphas[:k_done]
    b = betas[:k_done - 1]
    theta, S = eigh_tridiagonal(a, b)
    phase = np.exp(-1j * theta * dt / HBAR_EV_FS)
    coef = S @ (phase * S[0, :])
    out = Q[:, :k_done] @ (nrm * coef)
    if not np.all(np.isfinite(out)):
        raise PropagationError(f"non-finite amplitudes at t={t}")
    return out
