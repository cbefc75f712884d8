"""Complex matrix/tensor primitives shared by the beamforming and channel code.

All 3-way tensors use the layout (dim1, dim2, dim3) where ``t[:, :, k]`` is the
k-th frontal slice. Matricizations follow the convention in which the mode-1
unfolding of a (d1, d2, d3) tensor is d1 x (d2*d3) with column index
``i3*d2 + i2`` (remaining indices vary fastest-to-slowest in increasing mode
order). Under this convention ``I_M (x) P`` acts block-diagonally, one block
per frontal slice, which is what the per-subcarrier algebra relies on.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np


class NumericError(RuntimeError):
    """A numerical routine failed to produce a usable result."""


class SvdResult(NamedTuple):
    """Thin SVD ``a = u @ diag(s) @ v.conj().T``.

    u, v have orthonormal columns (left/right singular vectors); s is real,
    nonnegative and sorted descending.
    """

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray


def mode_n_matricize(t: np.ndarray, n: int) -> np.ndarray:
    """Unfold a 3-way tensor along mode n (1, 2 or 3).

    Mode-1 gives d1 x (d2*d3) with column index i3*d2 + i2, mode-2 gives
    d2 x (d3*d1) with column index i3*d1 + i1, mode-3 gives d3 x (d2*d1)
    with column index i2*d1 + i1 (all zero-based).
    """
    t = np.asarray(t)
    if t.ndim != 3:
        raise ValueError(f"expected a 3-way tensor, got ndim={t.ndim}")
    if n == 1:
        return t.transpose(0, 2, 1).reshape(t.shape[0], -1)
    if n == 2:
        return t.transpose(1, 2, 0).reshape(t.shape[1], -1)
    if n == 3:
        return t.transpose(2, 1, 0).reshape(t.shape[2], -1)
    raise ValueError(f"mode must be 1, 2 or 3, got {n}")


def fold(mat: np.ndarray, n: int, shape: tuple[int, int, int]) -> np.ndarray:
    """Inverse of :func:`mode_n_matricize` for the target tensor ``shape``."""
    mat = np.asarray(mat)
    d1, d2, d3 = shape
    if n == 1:
        return mat.reshape(d1, d3, d2).transpose(0, 2, 1)
    if n == 2:
        return mat.reshape(d2, d3, d1).transpose(2, 0, 1)
    if n == 3:
        return mat.reshape(d3, d2, d1).transpose(2, 1, 0)
    raise ValueError(f"mode must be 1, 2 or 3, got {n}")


def slice_kron_apply(x_n: np.ndarray, p: np.ndarray, m: int) -> np.ndarray:
    """Compute ``x_n @ kron(I_m, p)`` without forming the Kronecker product.

    ``x_n`` is an unfolding whose columns come in m consecutive blocks of
    ``p.shape[0]`` columns each (one block per frontal slice), so the product
    reduces to a blockwise right-multiplication by ``p``.
    """
    x_n = np.asarray(x_n)
    p = np.asarray(p)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise ValueError(f"p must be square, got shape {p.shape}")
    if x_n.ndim != 2 or x_n.shape[1] != m * p.shape[0]:
        raise ValueError(
            f"x_n has {x_n.shape[1]} columns, expected m*p.rows = {m * p.shape[0]}"
        )
    blocks = x_n.reshape(x_n.shape[0], m, p.shape[0])
    return (blocks @ p).reshape(x_n.shape[0], -1)


def phase_project(v: np.ndarray, scale: float) -> np.ndarray:
    """Project entries onto the constant-modulus circle of radius ``scale``.

    Each entry becomes ``scale * v_k / |v_k|``; zero entries map to ``scale``
    (phase of 0 taken as 0) so the output modulus is ``scale`` everywhere.
    """
    v = np.asarray(v, dtype=complex)
    mag = np.abs(v)
    zero = mag == 0
    safe = np.where(zero, 1.0, mag)
    out = scale * np.where(zero, 1.0 + 0.0j, v / safe)
    return out


def svd(a: np.ndarray) -> SvdResult:
    """Thin SVD with descending singular values.

    Raises :class:`NumericError` if the underlying iteration fails to
    converge (the backend does not expose its iteration count, so the error
    carries the backend message).
    """
    a = np.asarray(a)
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD failed to converge: {exc}") from exc
    return SvdResult(u=u, s=s, v=vh.conj().T)


def frobenius_norm_sq(a: np.ndarray) -> float:
    """Sum of squared moduli of all entries (matrix or tensor)."""
    a = np.asarray(a)
    return float(np.sum(np.abs(a) ** 2))
