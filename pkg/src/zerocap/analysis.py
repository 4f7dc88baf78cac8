"""Diagnostics for the depolarizing family and arbitrary channels.

Coherent information is the single-letter quantity ``I_c = S(B) - S(E)`` in
bits. Its maximum over inputs is a one-shot lower bound on quantum capacity;
a non-positive maximum is a consistency check, not a proof that the capacity
vanishes.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import matcore
from .channels import (
    KrausChannel,
    apply,
    choi,
    choi_distance,
    complementary,
    compose,
)
from .errors import DimensionError, NormalizationError, NotPositiveError
from .families import (
    NoiseParameter,
    _param,
    antidegrading_map,
    depolarizing,
    depolarizing_complement,
)

logger = logging.getLogger(__name__)

MAX_OPTIMIZER_DIM = 8
PPT_TOL = 1e-10


@dataclass(frozen=True)
class PptSpectrum:
    """Closed-form spectrum of the partially transposed depolarizing Choi matrix.

    The symmetric subspace (dimension ``d(d+1)/2``) carries ``(1-x) + x/d`` and the
    antisymmetric subspace (dimension ``d(d-1)/2``) carries ``-(1-x) + x/d``.
    """

    eigenvalues: np.ndarray
    sym_value: float
    antisym_value: float
    d: int
    x: float

    @property
    def sym_multiplicity(self) -> int:
        return self.d * (self.d + 1) // 2

    @property
    def antisym_multiplicity(self) -> int:
        return self.d * (self.d - 1) // 2


def ppt_spectrum(ch: KrausChannel) -> np.ndarray:
    """Ascending eigenvalues of the partial transpose (output factor) of the Choi matrix."""
    if ch.dim_in != ch.dim_out:
        raise DimensionError(f"PPT spectrum needs a square channel, got {ch.dim_in}->{ch.dim_out}")
    j = choi(ch).matrix
    return matcore.eigvalsh(matcore.partial_transpose(j, ch.dim_in, ch.dim_out))


def analytic_ppt_spectrum(p, d=None) -> PptSpectrum:
    p = _param(p, d)
    sym = (1 - p.x) + p.x / p.d
    anti = -(1 - p.x) + p.x / p.d
    n_sym = p.d * (p.d + 1) // 2
    n_anti = p.d * (p.d - 1) // 2
    eig = np.sort(np.concatenate([np.full(n_anti, anti), np.full(n_sym, sym)]))
    return PptSpectrum(eig, sym, anti, p.d, p.x)


def ppt_threshold(d: int) -> float:
    """Smallest noise ``d/(d+1)`` at which the depolarizing channel becomes PPT
    (entanglement binding). Always above 1/2 for ``d >= 2``."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    return d / (d + 1)


def is_ppt(ch: KrausChannel, tol: float = PPT_TOL) -> bool:
    return bool(ppt_spectrum(ch)[0] >= -tol)


def antidegradability_residual(p, d=None) -> float:
    """Choi-matrix Frobenius distance between ``N o D_x^c`` and ``D_x``.

    Propagates :class:`ParameterDomainError` for ``x < 1/2``.
    """
    p = _param(p, d)
    lhs = compose(antidegrading_map(p), depolarizing_complement(p))
    return choi_distance(lhs, depolarizing(p))


def check_density_matrix(rho, dim: Optional[int] = None) -> np.ndarray:
    rho = matcore.as_matrix(rho)
    if dim is not None and rho.shape != (dim, dim):
        raise DimensionError(f"expected a {dim}x{dim} density matrix, got {rho.shape}")
    tr = np.trace(rho)
    if abs(tr - 1) > matcore.TRACE_TOL:
        raise NormalizationError(f"trace {tr.real:.12g} differs from 1")
    w = matcore.eigvalsh(rho)
    if w[0] < -matcore.CLIP_TOL:
        raise NotPositiveError(f"density matrix has eigenvalue {w[0]:.3e}")
    return rho


def _ic_from_outputs(out_b, out_e):
    return matcore.entropy_of_spectrum(matcore.eigvalsh(out_b)) - matcore.entropy_of_spectrum(
        matcore.eigvalsh(out_e)
    )


def coherent_information(ch: KrausChannel, rho, complement: KrausChannel = None) -> float:
    """``S(ch(rho)) - S(ch^c(rho))`` in bits."""
    rho = check_density_matrix(rho, ch.dim_in)
    comp = complementary(ch) if complement is None else complement
    return _ic_from_outputs(apply(ch, rho), apply(comp, rho))


# -- optimizer ---------------------------------------------------------------


@dataclass
class OptimizerConfig:
    """Settings for :func:`maximize_coherent_information`.

    ``gradient`` selects the ascent direction: ``"analytic"`` (entropy
    derivatives through the adjoint channels) or ``"fd"`` (central finite
    differences with step ``fd_step``).
    """

    restarts: int = 20
    seed: int = 42
    max_iter: int = 500
    tol: float = 1e-9
    patience: int = 10
    step: float = 0.1
    gradient: str = "analytic"
    fd_step: float = 1e-5
    workers: int = 1


@dataclass
class CoherentInfoResult:
    value: float
    optimizer_state: np.ndarray
    iterations: int
    restarts_used: int
    converged: bool
    restart_values: List[float] = field(default_factory=list)


class _Objective:
    """Coherent information as a function of an unnormalized square root ``A`` of the input."""

    def __init__(self, ch: KrausChannel):
        self.ch = ch
        self.k = ch.stacked
        self.kc = complementary(ch).stacked

    @staticmethod
    def state(a):
        p = a @ a.conj().T
        return p / np.trace(p).real

    def _outputs(self, rho):
        ob = np.einsum("kai,ij,kbj->ab", self.k, rho, self.k.conj())
        oe = np.einsum("kai,ij,kbj->ab", self.kc, rho, self.kc.conj())
        return ob, oe

    def value(self, a) -> float:
        return _ic_from_outputs(*self._outputs(self.state(a)))

    def gradient(self, a) -> np.ndarray:
        """``dI/dRe(A) + 1j * dI/dIm(A)``.

        With ``G = Phi^dagger(-log2 Phi(rho)) - Phi_c^dagger(-log2 Phi_c(rho))`` the
        derivative of ``I_c`` in ``rho`` and ``t = tr(A A^dagger)``, the gradient is
        ``2 (G - tr(G rho) I) A / t``. Logarithms are restricted to the support of
        each output, which contains the range of any perturbation when ``rho`` has
        full rank.
        """
        p = a @ a.conj().T
        t = np.trace(p).real
        rho = p / t
        ob, oe = self._outputs(rho)
        g = self._neg_log_pullback(self.k, ob) - self._neg_log_pullback(self.kc, oe)
        g = 0.5 * (g + g.conj().T)
        h = (g - np.trace(g @ rho).real * np.eye(a.shape[0])) / t
        return 2 * h @ a

    @staticmethod
    def _neg_log_pullback(k, out):
        w, v = np.linalg.eigh(0.5 * (out + out.conj().T))
        floor = 1e-15 * max(w[-1], 1.0)
        nl = np.where(w > floor, -np.log2(np.clip(w, floor, None)), 0.0)
        minus_log = (v * nl) @ v.conj().T
        return np.einsum("kai,ab,kbj->ij", k.conj(), minus_log, k)

    def fd_gradient(self, a, h: float = 1e-5) -> np.ndarray:
        grad = np.zeros_like(a)
        for idx in np.ndindex(a.shape):
            for unit in (1.0, 1j):
                e = np.zeros_like(a)
                e[idx] = unit * h
                diff = (self.value(a + e) - self.value(a - e)) / (2 * h)
                grad[idx] += unit * diff
        return grad


def coherent_info_gradient(ch: KrausChannel, a, method: str = "analytic", h: float = 1e-5):
    """Gradient of ``I_c(A A^dagger / tr(A A^dagger))`` with respect to the complex matrix ``A``.

    Returned as ``dI/dRe(A) + 1j * dI/dIm(A)``.
    """
    obj = _Objective(ch)
    a = np.asarray(a, dtype=complex)
    if method == "analytic":
        return obj.gradient(a)
    if method == "fd":
        return obj.fd_gradient(a, h)
    raise ValueError(f"unknown gradient method {method!r}")


def _ascend(obj: _Objective, a0, cfg: OptimizerConfig):
    a = a0 / np.linalg.norm(a0)
    val = obj.value(a)
    step = cfg.step
    quiet = 0
    converged = False
    it = 0
    for it in range(1, cfg.max_iter + 1):
        if cfg.gradient == "fd":
            g = obj.fd_gradient(a, cfg.fd_step)
        else:
            g = obj.gradient(a)
        trial = a + step * g
        trial /= np.linalg.norm(trial)
        try:
            new = obj.value(trial)
        except NotPositiveError:
            new = -np.inf
        if new >= val:
            delta = new - val
            a, val = trial, new
            step *= 1.1
        else:
            delta = 0.0
            step *= 0.5
        quiet = quiet + 1 if abs(delta) < cfg.tol else 0
        if quiet >= cfg.patience:
            converged = True
            break
    return val, obj.state(a), it, converged


def _restart(obj, dim, cfg, index):
    rng = np.random.default_rng(cfg.seed + index)
    a0 = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return _ascend(obj, a0, cfg)


def maximize_coherent_information(ch: KrausChannel, cfg: OptimizerConfig = None) -> CoherentInfoResult:
    """Multi-restart gradient ascent of coherent information over input states.

    Inputs are parametrized as ``rho = A A^dagger / tr(A A^dagger)`` with complex
    square ``A``; restart ``r`` starts from a Gaussian ``A`` seeded with
    ``cfg.seed + r``. Restarts are independent and may run on ``cfg.workers``
    threads; the best value wins and ties go to the lowest restart index, so the
    result does not depend on scheduling.

    Raises
    ------
    DimensionError
        If ``ch.dim_in`` exceeds 8.
    """
    cfg = OptimizerConfig() if cfg is None else cfg
    if ch.dim_in > MAX_OPTIMIZER_DIM:
        raise DimensionError(
            f"optimizer limited to dim_in <= {MAX_OPTIMIZER_DIM}, got {ch.dim_in}"
        )
    if cfg.restarts < 1:
        raise ValueError("need at least one restart")
    obj = _Objective(ch)
    idx = range(cfg.restarts)
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            runs = list(pool.map(lambda r: _restart(obj, ch.dim_in, cfg, r), idx))
    else:
        runs = [_restart(obj, ch.dim_in, cfg, r) for r in idx]

    best = 0
    for r, run in enumerate(runs):
        if run[0] > runs[best][0]:
            best = r
    val, state, _, conv = runs[best]
    logger.debug("best restart %d of %d: I_c = %.12g", best, cfg.restarts, val)
    return CoherentInfoResult(
        value=float(val),
        optimizer_state=state,
        iterations=sum(run[2] for run in runs),
        restarts_used=cfg.restarts,
        converged=conv,
        restart_values=[float(run[0]) for run in runs],
    )
