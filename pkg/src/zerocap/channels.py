"""Quantum channels in Kraus form and the transformations between representations.

Conventions
-----------
* Choi matrix (unnormalized): ``J = sum_ij |i><j| (x) ch(|i><j|)``, input factor
  first, so ``tr J = dim_in``.
* Stinespring isometry: ``V = sum_a K_a (x) |a>``, output factor first and
  environment second. The environment basis is the index of the Kraus operator.
* Two channels are equal when their Choi matrices are within ``1e-9`` in
  Frobenius norm; Kraus lists are never compared directly.
"""

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import matcore
from .errors import DimensionError

TP_TOL = 1e-9
EQUALITY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Linear map ``rho -> sum_k K_k rho K_k^dagger`` from ``dim_in`` to ``dim_out``.

    Trace preservation is not enforced at construction (see :func:`validate_cpt`)
    so that defective channels can still be represented and diagnosed.
    """

    dim_in: int
    dim_out: int
    kraus: tuple

    def __post_init__(self):
        if self.dim_in < 1 or self.dim_out < 1:
            raise DimensionError("channel dimensions must be positive")
        ops = []
        for k, op in enumerate(self.kraus):
            op = matcore.as_matrix(op).copy()
            if op.shape != (self.dim_out, self.dim_in):
                raise DimensionError(
                    f"Kraus operator {k} has shape {op.shape}, "
                    f"expected {(self.dim_out, self.dim_in)}"
                )
            op.setflags(write=False)
            ops.append(op)
        if not ops:
            raise DimensionError("a channel needs at least one Kraus operator")
        object.__setattr__(self, "kraus", tuple(ops))

    @classmethod
    def from_ops(cls, ops: Sequence) -> "KrausChannel":
        first = matcore.as_matrix(ops[0])
        return cls(dim_in=first.shape[1], dim_out=first.shape[0], kraus=tuple(ops))

    @property
    def stacked(self) -> np.ndarray:
        """Kraus operators as a ``(n, dim_out, dim_in)`` array."""
        return np.stack(self.kraus)

    def __len__(self):
        return len(self.kraus)

    def __call__(self, rho) -> np.ndarray:
        return apply(self, rho)


class CptReport(NamedTuple):
    tp_residual: float
    ok: bool


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    dim_in: int
    dim_out: int
    matrix: np.ndarray


@dataclass(frozen=True, eq=False)
class StinespringIsometry:
    dim_in: int
    dim_out: int
    dim_env: int
    v: np.ndarray


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel(d, d, (np.eye(d),))


def tp_residual(ch: KrausChannel) -> float:
    k = ch.stacked
    s = np.einsum("kai,kaj->ij", k.conj(), k)
    return float(np.max(np.abs(s - np.eye(ch.dim_in))))


def validate_cpt(ch: KrausChannel) -> CptReport:
    """Max-entry residual of ``sum_k K_k^dagger K_k - I`` and whether it is below ``1e-9``."""
    r = tp_residual(ch)
    return CptReport(r, r < TP_TOL)


def apply(ch: KrausChannel, rho) -> np.ndarray:
    rho = matcore.as_matrix(rho)
    if rho.shape != (ch.dim_in, ch.dim_in):
        raise DimensionError(f"input of shape {rho.shape} for a channel with dim_in={ch.dim_in}")
    k = ch.stacked
    return np.einsum("kai,ij,kbj->ab", k, rho, k.conj())


def apply_adjoint(ch: KrausChannel, y) -> np.ndarray:
    """Heisenberg-picture map ``Y -> sum_k K_k^dagger Y K_k``."""
    y = matcore.as_matrix(y)
    if y.shape != (ch.dim_out, ch.dim_out):
        raise DimensionError(f"operator of shape {y.shape} for a channel with dim_out={ch.dim_out}")
    k = ch.stacked
    return np.einsum("kai,ab,kbj->ij", k.conj(), y, k)


def compose(outer: KrausChannel, inner: KrausChannel) -> KrausChannel:
    """Channel ``outer o inner``; the Kraus list is every product ``K_o K_i`` (not pruned)."""
    if outer.dim_in != inner.dim_out:
        raise DimensionError(
            f"cannot compose: outer.dim_in={outer.dim_in} but inner.dim_out={inner.dim_out}"
        )
    prods = np.einsum("oab,ibc->oiac", outer.stacked, inner.stacked)
    prods = prods.reshape(-1, outer.dim_out, inner.dim_in)
    return KrausChannel(inner.dim_in, outer.dim_out, tuple(prods))


def choi(ch: KrausChannel) -> ChoiMatrix:
    # Column ordering (i, a) of J matches K[a, i], so each Kraus operator
    # contributes the rank-one term vec(K^T) vec(K^T)^dagger.
    vecs = ch.stacked.transpose(0, 2, 1).reshape(len(ch), -1)
    j = vecs.T @ vecs.conj()
    return ChoiMatrix(ch.dim_in, ch.dim_out, j)


def choi_from_action(action: Callable, dim_in: int, dim_out: int) -> ChoiMatrix:
    """Choi matrix of a linear map given only as a function on matrices.

    ``action`` must be linear (it is fed the non-Hermitian units ``|i><j|``).
    """
    j = np.zeros((dim_in * dim_out, dim_in * dim_out), dtype=complex)
    for i in range(dim_in):
        for k in range(dim_in):
            unit = np.zeros((dim_in, dim_in), dtype=complex)
            unit[i, k] = 1.0
            out = matcore.as_matrix(action(unit))
            if out.shape != (dim_out, dim_out):
                raise DimensionError(f"action returned shape {out.shape}, expected {dim_out}")
            j[i * dim_out:(i + 1) * dim_out, k * dim_out:(k + 1) * dim_out] = out
    return ChoiMatrix(dim_in, dim_out, j)


def kraus_from_choi(c: ChoiMatrix, cutoff: float = 1e-14) -> KrausChannel:
    """Canonical Kraus operators from the eigen-decomposition of a Choi matrix.

    Eigenvalues at or below ``cutoff`` (relative to the trace) are dropped.
    """
    w, v = matcore.hermitian_eig(c.matrix)
    keep = w > cutoff * max(1.0, float(np.trace(c.matrix).real))
    if not np.any(keep):
        raise ValueError("Choi matrix has no positive eigenvalues")
    ops = [
        np.sqrt(lam) * vec.reshape(c.dim_in, c.dim_out).T
        for lam, vec in zip(w[keep][::-1], v[:, keep][:, ::-1].T)
    ]
    return KrausChannel(c.dim_in, c.dim_out, tuple(ops))


def from_action(action: Callable, dim_in: int, dim_out: int) -> KrausChannel:
    """Kraus channel realising a completely positive linear map given as a function."""
    return kraus_from_choi(choi_from_action(action, dim_in, dim_out))


def choi_distance(a: KrausChannel, b: KrausChannel) -> float:
    if (a.dim_in, a.dim_out) != (b.dim_in, b.dim_out):
        raise DimensionError(
            f"channels act between different spaces: "
            f"{a.dim_in}->{a.dim_out} vs {b.dim_in}->{b.dim_out}"
        )
    return matcore.frobenius_distance(choi(a).matrix, choi(b).matrix)


def channels_equal(a: KrausChannel, b: KrausChannel, tol: float = EQUALITY_TOL) -> bool:
    return choi_distance(a, b) < tol


def stinespring(ch: KrausChannel) -> StinespringIsometry:
    n = len(ch)
    # V[(a, e), i] = K_e[a, i]
    v = ch.stacked.transpose(1, 0, 2).reshape(ch.dim_out * n, ch.dim_in)
    return StinespringIsometry(ch.dim_in, ch.dim_out, n, v)


def dilate(iso: StinespringIsometry, rho) -> np.ndarray:
    """Joint output-environment state ``V rho V^dagger``."""
    rho = matcore.as_matrix(rho)
    return iso.v @ rho @ iso.v.conj().T


def complementary(ch: KrausChannel) -> KrausChannel:
    """Channel to the environment, ``rho -> Tr_B(V rho V^dagger)``.

    Its Kraus operators are ``(<b| (x) I_E) V`` for each output basis state ``b``,
    so row ``e`` of the ``b``-th operator is row ``b`` of Kraus operator ``e``.
    """
    ops = ch.stacked.transpose(1, 0, 2)
    return KrausChannel(ch.dim_in, len(ch), tuple(ops))


def random_channel(dim_in: int, dim_out: int, n_kraus: int, rng: np.random.Generator) -> KrausChannel:
    """Random CPT map from an isometry built out of the QR factor of a Gaussian matrix."""
    if dim_out * n_kraus < dim_in:
        raise DimensionError("need dim_out * n_kraus >= dim_in for an isometry")
    g = rng.standard_normal((dim_out * n_kraus, dim_in)) + 1j * rng.standard_normal(
        (dim_out * n_kraus, dim_in)
    )
    q, _ = np.linalg.qr(g)
    ops = q.reshape(n_kraus, dim_out, dim_in)
    return KrausChannel(dim_in, dim_out, tuple(ops))
