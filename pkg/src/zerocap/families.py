"""Concrete channel families: white-noise depolarization and its relatives.

Environment basis of the depolarizing channel (dimension ``1 + d**2``): index 0 is
the extra state ``|0>`` carried by the identity Kraus operator, and index
``1 + i*d + j`` is ``|i, j>`` (0-based ``i, j``) carried by ``|i><j|``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .channels import KrausChannel, compose, from_action
from .errors import DimensionError, ParameterDomainError


@dataclass(frozen=True)
class NoiseParameter:
    """Noise strength ``x`` in [0, 1] for a ``d``-level system, ``d >= 2``."""

    x: float
    d: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ParameterDomainError(f"dimension must be an integer >= 2, got {self.d}")
        if not 0.0 <= self.x <= 1.0:
            raise ParameterDomainError(f"noise strength must lie in [0, 1], got {self.x}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "x", float(self.x))


def _param(p, d=None):
    if isinstance(p, NoiseParameter):
        return p
    return NoiseParameter(p, d)


def env_index(i: int, j: int, d: int) -> int:
    """Environment index of the basis state ``|i, j>``."""
    return 1 + i * d + j


@dataclass(frozen=True)
class AntiDegradingParams:
    """Real coefficients of the map taking the environment output back to the channel output.

    ``beta**2 * x = 1 - x`` and ``d * delta**2 = (2x - 1) / x``, hence
    ``beta**2 + d * delta**2 = 1``; ``xi = sqrt(x (1 - x) / d)`` is the coherence
    weight of the complementary channel.
    """

    x: float
    d: int
    beta: float
    delta: float
    xi: float

    @property
    def d_delta_sq(self) -> float:
        return self.d * self.delta ** 2


def d_delta_squared(x: float) -> float:
    """``(2x - 1) / x``, negative exactly when the anti-degrading map does not exist."""
    if x == 0:
        return -math.inf
    return (2 * x - 1) / x


def antidegrading_params(p, d=None) -> AntiDegradingParams:
    p = _param(p, d)
    dd2 = d_delta_squared(p.x)
    if dd2 < 0:
        raise ParameterDomainError(
            f"no anti-degrading map for x={p.x!r} < 1/2: d*delta^2 = {dd2:.6g} < 0",
            d_delta_sq=dd2,
        )
    beta = math.sqrt((1 - p.x) / p.x)
    delta = math.sqrt(dd2 / p.d)
    xi = math.sqrt(p.x * (1 - p.x) / p.d)
    return AntiDegradingParams(p.x, p.d, beta, delta, xi)


def depolarizing(p, d=None) -> KrausChannel:
    """``rho -> (1 - x) rho + (x / d) tr(rho) I`` with Kraus operators
    ``sqrt(1-x) I`` followed by ``sqrt(x/d) |i><j|`` in row-major ``(i, j)`` order."""
    p = _param(p, d)
    x, d = p.x, p.d
    ops = [math.sqrt(1 - x) * np.eye(d, dtype=complex)]
    amp = math.sqrt(x / d)
    for i in range(d):
        for j in range(d):
            a = np.zeros((d, d), dtype=complex)
            a[i, j] = amp
            ops.append(a)
    return KrausChannel(d, d, tuple(ops))


def depolarizing_action(rho, x: float) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    return (1 - x) * rho + (x / d) * np.trace(rho) * np.eye(d)


def depolarizing_complement_action(rho, x: float) -> np.ndarray:
    """Closed-form environment output of the depolarizing channel.

    ``(1-x) tr(rho) |0><0| + xi sum_ij (rho_ij |0><i,j| + rho_ji |i,j><0|)
    + (x/d) sum_ijk rho_jk |i,j><i,k|``. Written entry-wise so it stays linear
    on non-Hermitian arguments.
    """
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    xi = math.sqrt(x * (1 - x) / d)
    out = np.zeros((1 + d * d, 1 + d * d), dtype=complex)
    out[0, 0] = (1 - x) * np.trace(rho)
    out[0, 1:] = xi * rho.reshape(-1)
    out[1:, 0] = xi * rho.T.reshape(-1)
    out[1:, 1:] = (x / d) * np.kron(np.eye(d), rho)
    return out


def depolarizing_complement(p, d=None) -> KrausChannel:
    """Channel ``d -> 1 + d**2`` built from the closed-form environment output.

    The Kraus operators come from the Choi matrix of
    :func:`depolarizing_complement_action`, independently of the Stinespring route.
    """
    p = _param(p, d)
    return from_action(lambda r: depolarizing_complement_action(r, p.x), p.d, 1 + p.d * p.d)


def antidegrading_map(p, d=None) -> KrausChannel:
    """Channel ``1 + d**2 -> d`` that reproduces the depolarizing output from its environment.

    Kraus operators, in order: ``M_k = |k><0| / sqrt(d)``, then
    ``N_k = beta sum_j |j><k,j|``, then ``Q_{i,jk} = delta |i><j,k|``. Zero
    operators (``delta = 0`` at ``x = 1/2``) are kept.

    Raises
    ------
    ParameterDomainError
        If ``x < 1/2``; the error carries the negative ``d * delta**2``.
    """
    p = _param(p, d)
    c = antidegrading_params(p)
    d = p.d
    de = 1 + d * d
    ops = []
    for k in range(d):
        m = np.zeros((d, de), dtype=complex)
        m[k, 0] = 1 / math.sqrt(d)
        ops.append(m)
    for k in range(d):
        n = np.zeros((d, de), dtype=complex)
        for j in range(d):
            n[j, env_index(k, j, d)] = c.beta
        ops.append(n)
    for i in range(d):
        for j in range(d):
            for k in range(d):
                q = np.zeros((d, de), dtype=complex)
                q[i, env_index(j, k, d)] = c.delta
                ops.append(q)
    return KrausChannel(de, d, tuple(ops))


def transpose_depolarizing(x: float, d: int = 3) -> KrausChannel:
    """``rho -> (1 - x) rho + (x/2) (tr(rho) I - rho^T)`` on a qutrit.

    Kraus operators: ``sqrt(1-x) I`` and ``sqrt(x/2) (|i><j| - |j><i|)`` for ``i < j``.
    The ``x/2`` normalization is only trace preserving for ``d = 3``.
    """
    if d != 3:
        raise ParameterDomainError(
            f"transpose-depolarizing channel with x/2 normalization requires d=3, got d={d}"
        )
    NoiseParameter(x, d)
    ops = [math.sqrt(1 - x) * np.eye(d, dtype=complex)]
    amp = math.sqrt(x / 2)
    for i in range(d):
        for j in range(i + 1, d):
            a = np.zeros((d, d), dtype=complex)
            a[i, j] = amp
            a[j, i] = -amp
            ops.append(a)
    return KrausChannel(d, d, tuple(ops))


def contaminate(lam: KrausChannel, x: float) -> KrausChannel:
    """White-noise contamination ``D_x o lam``: ``rho -> (1-x) lam(rho) + (x/d) tr(rho) I``."""
    if lam.dim_in != lam.dim_out:
        raise DimensionError(
            f"contamination needs a channel on one space, got {lam.dim_in}->{lam.dim_out}"
        )
    return compose(depolarizing(x, lam.dim_out), lam)
