"""Link-level performance metrics and reference beamformer designs.

Rates follow the linear-receiver model: stream k on subcarrier m sees signal
(rho/Ns)|w_k^H H_m f_k|^2 against the other streams' leakage plus noise
sigma_n^2 ||w_k||^2, and the subcarrier sum-rate is sum_k log2(1 + sinr_k).
The fully-digital benchmark transmits on the top singular vectors with equal
per-stream power (no water-filling); the covariance-phase baseline extracts
entry phases from the eigenvectors of the subcarrier-averaged covariances and
reuses the same per-subcarrier digital stage as the hybrid design.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .beamforming import AnalogPair, HybridBeamformer, design_digital
from .tensor_ops import phase_project, svd


@dataclass(frozen=True)
class LinkBudget:
    """Average received signal power and noise variance, both linear."""

    rho: float
    sigma2_n: float = 1.0

    def __post_init__(self):
        if self.rho <= 0 or self.sigma2_n <= 0:
            raise ValueError("rho and sigma2_n must be positive")

    @property
    def snr(self) -> float:
        return self.rho / self.sigma2_n

    @classmethod
    def from_snr_db(cls, snr_db: float) -> "LinkBudget":
        # noise variance pinned to 1; SNR varied through rho
        return cls(rho=10.0 ** (snr_db / 10.0), sigma2_n=1.0)


@dataclass
class RateResult:
    """Per-subcarrier sum-rates (bits/s/Hz) and their average."""

    per_subcarrier: np.ndarray
    average: float

    @classmethod
    def from_rates(cls, rates) -> "RateResult":
        arr = np.asarray(rates, dtype=float)
        return cls(per_subcarrier=arr, average=float(arr.mean()))


def stream_sinr(
    h_m: np.ndarray,
    f_m: np.ndarray,
    w_m: np.ndarray,
    k: int,
    budget: LinkBudget,
    n_s: int,
) -> float:
    """SINR of stream k given the effective precoder/combiner of one subcarrier."""
    if f_m.shape[1] != n_s or w_m.shape[1] != n_s:
        raise ValueError(f"expected {n_s} columns, got f:{f_m.shape[1]} w:{w_m.shape[1]}")
    if not 0 <= k < n_s:
        raise ValueError(f"stream index {k} out of range [0, {n_s})")
    w_k = w_m[:, k]
    cross = w_k.conj() @ (h_m @ f_m)  # entry i is w_k^H H_m f_i
    p = budget.rho / n_s
    signal = p * np.abs(cross[k]) ** 2
    interference = p * (np.sum(np.abs(cross) ** 2) - np.abs(cross[k]) ** 2)
    noise = budget.sigma2_n * float(np.sum(np.abs(w_k) ** 2))
    denom = interference + noise
    if denom == 0.0:
        return 0.0
    return float(signal / denom)


def sum_rate(
    h_m: np.ndarray,
    f_m: np.ndarray,
    w_m: np.ndarray,
    budget: LinkBudget,
    n_s: int,
) -> float:
    """Achievable sum-rate of one subcarrier, sum_k log2(1 + sinr_k)."""
    return float(
        sum(np.log2(1.0 + stream_sinr(h_m, f_m, w_m, k, budget, n_s)) for k in range(n_s))
    )


def evaluate_rates(h: np.ndarray, precoders, combiners, budget: LinkBudget, n_s: int) -> RateResult:
    """Sum-rate per subcarrier for stacked (M, N, Ns) precoders/combiners."""
    m = h.shape[2]
    rates = [sum_rate(h[:, :, i], precoders[i], combiners[i], budget, n_s) for i in range(m)]
    return RateResult.from_rates(rates)


def evaluate_hybrid(h: np.ndarray, bf: HybridBeamformer, budget: LinkBudget) -> RateResult:
    """Rates achieved by a hybrid design on its channel tensor."""
    n_s = bf.f_bb.shape[2]
    return evaluate_rates(h, bf.precoders(), bf.combiners(), budget, n_s)


def optimal_digital_beamformers(h: np.ndarray, n_s: int):
    """Top singular vectors per subcarrier with equal-power scaling.

    Returns (precoders, combiners) of shape (M, Nt, Ns) and (M, Nr, Ns); the
    precoder is scaled so ||F_m||_F^2 = n_s (already the case for orthonormal
    singular vectors, enforced explicitly).
    """
    if n_s > min(h.shape[0], h.shape[1]):
        raise ValueError(f"n_s={n_s} exceeds min(Nr, Nt)={min(h.shape[0], h.shape[1])}")
    slices = h.transpose(2, 0, 1)
    u, _, vh = np.linalg.svd(slices, full_matrices=False)
    f = vh.conj().transpose(0, 2, 1)[:, :, :n_s]
    w = u[:, :, :n_s]
    norms = np.sqrt(np.sum(np.abs(f) ** 2, axis=(1, 2)))
    f = np.sqrt(n_s) * f / np.maximum(norms, np.finfo(float).tiny)[:, None, None]
    return f, w


def optimal_digital(h: np.ndarray, n_s: int, budget: LinkBudget) -> RateResult:
    """Rates of the unconstrained fully-digital benchmark (SVD, equal power)."""
    f, w = optimal_digital_beamformers(h, n_s)
    return evaluate_rates(h, f, w, budget, n_s)


def avg_cov_baseline(h: np.ndarray, n_s: int, budget: LinkBudget):
    """Covariance-phase analog baseline plus the shared digital stage.

    The analog precoder/combiner take the entrywise phases of the top
    eigenvectors of the subcarrier-averaged covariances (1/M) sum_m H_m^H H_m
    and (1/M) sum_m H_m H_m^H (eigenvectors via SVD, valid for Hermitian PSD
    matrices). Returns (HybridBeamformer, RateResult).
    """
    n_r, n_t, m = h.shape
    cov_t = np.einsum("rtm,rum->tu", h.conj(), h) / m
    cov_r = np.einsum("rtm,stm->rs", h, h.conj()) / m
    f_rf = phase_project(svd(cov_t).u[:, :n_s], 1.0 / np.sqrt(n_t))
    w_rf = phase_project(svd(cov_r).u[:, :n_s], 1.0 / np.sqrt(n_r))
    bf = design_digital(h, AnalogPair(f_rf=f_rf, w_rf=w_rf), n_s)
    return bf, evaluate_hybrid(h, bf, budget)
