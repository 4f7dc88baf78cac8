"""Dense complex-matrix primitives.

Matrices are plain ``numpy`` arrays of complex dtype. Bipartite operators on
``A (x) B`` use the standard Kronecker ordering, i.e. row index ``a * dimB + b``.
"""

from typing import NamedTuple

import numpy as np

from .errors import DimensionError, HermiticityError, NormalizationError, NotPositiveError

HERMITIAN_TOL = 1e-9
CLIP_TOL = 1e-10
TRACE_TOL = 1e-8


class HermitianEig(NamedTuple):
    """Eigen-decomposition ``m = V diag(eigenvalues) V^dagger``, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def _check_bipartite(m, dimA, dimB):
    m = as_matrix(m)
    n = dimA * dimB
    if m.shape != (n, n):
        raise DimensionError(
            f"matrix of shape {m.shape} does not act on a {dimA}x{dimB} bipartite space"
        )
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product; block ``(i, j)`` of the result equals ``a[i, j] * b``."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(m, dimA: int, dimB: int, keep: str = "A") -> np.ndarray:
    """Trace out one factor of an operator on ``A (x) B``.

    Parameters
    ----------
    m : (dimA*dimB, dimA*dimB) array_like
        Bipartite operator.
    dimA, dimB : int
        Factor dimensions.
    keep : {"A", "B"}
        Subsystem that survives.
    """
    t = _check_bipartite(m, dimA, dimB).reshape(dimA, dimB, dimA, dimB)
    if keep == "A":
        return np.einsum("ibjb->ij", t)
    if keep == "B":
        return np.einsum("aiaj->ij", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_transpose(m, dimA: int, dimB: int) -> np.ndarray:
    """Transpose the second tensor factor of an operator on ``A (x) B``."""
    t = _check_bipartite(m, dimA, dimB).reshape(dimA, dimB, dimA, dimB)
    return t.transpose(0, 3, 2, 1).reshape(dimA * dimB, dimA * dimB)


def hermiticity_defect(m) -> float:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return float(np.max(np.abs(m - m.conj().T), initial=0.0))


def hermitian_eig(m) -> HermitianEig:
    """Eigen-decomposition of a Hermitian matrix.

    The input is symmetrized as ``(m + m^dagger) / 2`` after checking that its
    max-entry Hermiticity defect is below ``1e-9``.
    """
    m = as_matrix(m)
    defect = hermiticity_defect(m)
    if defect > HERMITIAN_TOL:
        raise HermiticityError(f"matrix is not Hermitian (max |m - m^dagger| = {defect:.3e})")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return HermitianEig(w, v)


def eigvalsh(m) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (same checks as :func:`hermitian_eig`)."""
    m = as_matrix(m)
    defect = hermiticity_defect(m)
    if defect > HERMITIAN_TOL:
        raise HermiticityError(f"matrix is not Hermitian (max |m - m^dagger| = {defect:.3e})")
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))


def entropy_of_spectrum(eigenvalues) -> float:
    """Shannon entropy in bits of a spectrum, clipping round-off negatives.

    Eigenvalues in ``[-1e-10, 0)`` are treated as zero; anything below raises
    :class:`NotPositiveError`.
    """
    w = np.asarray(eigenvalues, dtype=float)
    if w.size and w.min() < -CLIP_TOL:
        raise NotPositiveError(f"eigenvalue {w.min():.3e} is below -{CLIP_TOL:g}")
    w = w[w > 0]
    return float(-np.sum(w * np.log2(w)))


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy ``-tr(rho log2 rho)`` in bits."""
    rho = as_matrix(rho)
    tr = np.trace(rho)
    if abs(tr - 1) > TRACE_TOL:
        raise NormalizationError(f"trace {tr.real:.12g} differs from 1")
    return entropy_of_spectrum(eigvalsh(rho))


def frobenius_distance(a, b) -> float:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random unitary from the QR decomposition of a complex Gaussian matrix."""
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density_matrix(n: int, rng: np.random.Generator, rank: int = None) -> np.ndarray:
    rank = n if rank is None else rank
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (g + g.conj().T)
