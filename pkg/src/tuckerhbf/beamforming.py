"""Two-stage hybrid beamforming design for per-subcarrier MIMO channels.

Stage 1 (analog): a constrained Tucker2-style fit of the channel tensor. Each
data stream gets one constant-modulus combiner/precoder vector pair, obtained
by alternating projected power-iteration half-steps that maximize the summed
per-subcarrier beamformed gain

    delta = (1/M) * sum_m |w^H H_m f|^2.

After each pair is designed, its subspace is deflated from the residual tensor
with the orthogonal projectors (I - w w^H) and (I - f f^H) so later streams
steer (approximately) orthogonally.

Stage 2 (digital): per subcarrier, the effective channel W_rf^H H_m F_rf is
diagonalized by its SVD and the digital precoder is rescaled to meet the
per-subcarrier transmit power constraint ||F_rf F_bb_m||_F^2 = n_s.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tensor_ops import phase_project


@dataclass
class AnalogPair:
    """Constant-modulus analog precoder/combiner, one column per stream."""

    f_rf: np.ndarray  # (Nt, Ns), entries of modulus 1/sqrt(Nt)
    w_rf: np.ndarray  # (Nr, Ns), entries of modulus 1/sqrt(Nr)


@dataclass
class HybridBeamformer:
    """Analog pair shared by all subcarriers plus per-subcarrier digital stages."""

    analog: AnalogPair
    f_bb: np.ndarray  # (M, Nrf, Ns)
    w_bb: np.ndarray  # (M, Nrf, Ns)

    def precoders(self) -> np.ndarray:
        """Effective per-subcarrier precoders F_rf @ F_bb_m, shape (M, Nt, Ns)."""
        return np.matmul(self.analog.f_rf, self.f_bb)

    def combiners(self) -> np.ndarray:
        """Effective per-subcarrier combiners W_rf @ W_bb_m, shape (M, Nr, Ns)."""
        return np.matmul(self.analog.w_rf, self.w_bb)


@dataclass
class AlsReport:
    """Per-stream convergence record of the alternating analog design."""

    iterations: list[int] = field(default_factory=list)
    converged: list[bool] = field(default_factory=list)
    traces: list[np.ndarray] = field(default_factory=list)

    def monotone_fraction(self) -> float:
        """Observed fraction of objective steps that did not decrease.

        The projected update is not provably monotone; this is measured, not
        asserted. Returns 1.0 when no stream iterated.
        """
        up = 0
        total = 0
        for tr in self.traces:
            diffs = np.diff(tr)
            total += diffs.size
            up += int(np.sum(diffs >= 0))
        return up / total if total else 1.0

    def to_dict(self) -> dict:
        return {
            "iterations": list(self.iterations),
            "converged": list(self.converged),
            "traces": [np.asarray(t).tolist() for t in self.traces],
            "monotone_fraction": self.monotone_fraction(),
        }


def _random_constant_modulus(n: int, rng: np.random.Generator) -> np.ndarray:
    return np.exp(2j * np.pi * rng.random(n)) / np.sqrt(n)


def _gain_profile(v: np.ndarray, f: np.ndarray) -> np.ndarray:
    # v holds w^H H_m in its columns; entry m of the result is w^H H_m f
    return f @ v


def als_stream_pair(
    h_res: np.ndarray,
    eps: float,
    n_ite: int,
    rng: np.random.Generator,
    w0: np.ndarray | None = None,
    f0: np.ndarray | None = None,
):
    """Design one combiner/precoder vector pair on the residual tensor.

    Alternates two projected power-iteration half-steps until the squared
    objective increment drops below ``eps`` or ``n_ite`` iterations have run:

      w <- psi{ sum_m (H_m f)(H_m f)^H w } / sqrt(Nr)
      f <- psi{ sum_m (H_m^H w)(H_m^H w)^H f } / sqrt(Nt)

    where psi extracts entrywise phases. At least one iteration runs unless
    the initial objective is exactly zero: the random starting pair sits near
    delta ~ 1 for normalized channels, so gating entry on the raw initial
    value would abort before optimizing anything. Returns
    (w, f, trace, converged); ``trace`` holds the objective after
    initialization and after every iteration, so its length is the iteration
    count plus one.
    """
    n_r, n_t, m = h_res.shape
    w = np.asarray(w0, dtype=complex) if w0 is not None else _random_constant_modulus(n_r, rng)
    f = np.asarray(f0, dtype=complex) if f0 is not None else _random_constant_modulus(n_t, rng)

    v = np.tensordot(w.conj(), h_res, axes=(0, 0))  # (Nt, M), rows index tx antennas
    delta = float(np.sum(np.abs(_gain_profile(v, f)) ** 2)) / m
    trace = [delta]
    prev = 0.0
    it = 0
    converged = delta == 0.0
    while not converged and it < n_ite:
        it += 1
        g = np.tensordot(h_res, f, axes=(1, 0))  # columns are H_m f
        w = phase_project(g @ (w @ g.conj()), 1.0 / np.sqrt(n_r))
        v = np.tensordot(w.conj(), h_res, axes=(0, 0))
        f = phase_project(v.conj() @ (f @ v), 1.0 / np.sqrt(n_t))
        prev = delta
        delta = float(np.sum(np.abs(_gain_profile(v, f)) ** 2)) / m
        trace.append(delta)
        converged = (delta - prev) ** 2 < eps
    return w, f, np.asarray(trace), bool(converged)


def residual_update(h_res: np.ndarray, w: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Deflate a designed pair: every slice becomes (I - w w^H) H_m (I - f f^H).

    Equivalent to right-multiplying the mode-1 unfolding by kron(I_M, I - f f^H)
    and left-multiplying by (I - w w^H), done with rank-1 updates per slice.
    """
    w = np.asarray(w)
    f = np.asarray(f)
    if h_res.shape[0] != w.shape[0] or h_res.shape[1] != f.shape[0]:
        raise ValueError(
            f"pair dims ({w.shape[0]}, {f.shape[0]}) do not match tensor {h_res.shape}"
        )
    v = np.tensordot(w.conj(), h_res, axes=(0, 0))  # (Nt, M) = w^H H_m stacked
    g = np.tensordot(h_res, f, axes=(1, 0))         # (Nr, M) = H_m f stacked
    s = f @ v                                       # (M,)  = w^H H_m f
    return (
        h_res
        - w[:, None, None] * v[None, :, :]
        - g[:, None, :] * f.conj()[None, :, None]
        + (w[:, None, None] * f.conj()[None, :, None]) * s[None, None, :]
    )


def design_analog(
    h: np.ndarray,
    n_s: int,
    eps: float,
    n_ite: int,
    rng: np.random.Generator,
):
    """Design the analog pair stream by stream with residual deflation."""
    n_r, n_t, _ = h.shape
    if not 1 <= n_s <= min(n_r, n_t):
        raise ValueError(f"n_s={n_s} must be in [1, min(Nr, Nt)={min(n_r, n_t)}]")

    w_cols = []
    f_cols = []
    report = AlsReport()
    h_res = h
    for _ in range(n_s):
        w, f, trace, converged = als_stream_pair(h_res, eps, n_ite, rng)
        h_res = residual_update(h_res, w, f)
        w_cols.append(w)
        f_cols.append(f)
        report.iterations.append(len(trace) - 1)
        report.converged.append(converged)
        report.traces.append(trace)
    analog = AnalogPair(f_rf=np.column_stack(f_cols), w_rf=np.column_stack(w_cols))
    return analog, report


def design_digital(h: np.ndarray, analog: AnalogPair, n_s: int) -> HybridBeamformer:
    """Per-subcarrier SVD of the effective channel plus power normalization.

    F_bb_m / W_bb_m take the right/left singular vectors of W_rf^H H_m F_rf
    for the n_s largest singular values; F_bb_m is then rescaled to
    sqrt(n_s) / ||F_rf F_bb_m||_F so the transmit power constraint holds.
    """
    f_rf, w_rf = analog.f_rf, analog.w_rf
    if f_rf.shape[0] != h.shape[1] or w_rf.shape[0] != h.shape[0]:
        raise ValueError(
            f"analog dims ({w_rf.shape[0]}, {f_rf.shape[0]}) do not match tensor {h.shape}"
        )
    if n_s > min(f_rf.shape[1], w_rf.shape[1]):
        raise ValueError(f"n_s={n_s} exceeds the analog stage's {f_rf.shape[1]} chains")

    tmp = np.tensordot(h, f_rf, axes=(1, 0))            # (Nr, M, Nrf)
    h_eff = np.tensordot(w_rf.conj(), tmp, axes=(0, 0))  # (Nrf, M, Nrf)
    h_eff = h_eff.transpose(1, 0, 2)                     # (M, Nrf, Nrf)

    u, _, vh = np.linalg.svd(h_eff)
    f_bb = vh.conj().transpose(0, 2, 1)[:, :, :n_s]
    w_bb = u[:, :, :n_s]

    prods = np.matmul(f_rf, f_bb)
    norms = np.sqrt(np.sum(np.abs(prods) ** 2, axis=(1, 2)))
    norms = np.maximum(norms, np.finfo(float).tiny)
    f_bb = np.sqrt(n_s) * f_bb / norms[:, None, None]
    return HybridBeamformer(analog=analog, f_bb=f_bb, w_bb=w_bb)


def design_hybrid(
    h: np.ndarray,
    n_s: int,
    eps: float,
    n_ite: int,
    rng: np.random.Generator,
):
    """Analog stage followed by the digital stage; returns (beamformer, report)."""
    analog, report = design_analog(h, n_s, eps, n_ite, rng)
    return design_digital(h, analog, n_s), report
