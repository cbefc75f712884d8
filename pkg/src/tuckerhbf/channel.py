"""Clustered multipath OFDM channel generator with uniform square planar arrays.

The frequency-domain channel for subcarrier m (1-based) is

    H_m = sqrt(Nr*Nt / (Ncl*Nray)) * sum_{i,l} alpha_il
          * a_r(phi_r, theta_r) a_t(phi_t, theta_t)^H * exp(-j*2*pi*i*(m-1)/M)

with cluster index i in {0, ..., Ncl-1} doubling as the delay tap. Ray gains
are complex Gaussian with unit per-cluster power, which makes
E[||H_m||_F^2] = Nr*Nt (the prefactor cancels against the Ncl*Nray gain terms).
Cluster mean angles are uniform on [-pi, pi); per-ray deviations are Laplacian
with standard deviation equal to the configured angular spread (unwrapped,
steering vectors are periodic in the angles).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ChannelParams:
    """Geometry and multipath statistics for one simulated link."""

    n_tx: int
    n_rx: int
    n_subcarriers: int
    n_clusters: int = 5
    n_rays: int = 10
    angular_spread_deg: float = 10.0
    spacing: float = 0.5  # element spacing over wavelength

    def __post_init__(self):
        for name in ("n_tx", "n_rx"):
            n = getattr(self, name)
            s = math.isqrt(n)
            if s * s != n:
                raise ValueError(f"{name}={n} is not a perfect square (USPA)")
        for name in ("n_subcarriers", "n_clusters", "n_rays"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.angular_spread_deg < 0:
            raise ValueError("angular_spread_deg must be >= 0")
        if self.spacing <= 0:
            raise ValueError("spacing must be positive")


@dataclass
class PathSet:
    """Sampled gains and angles, one row per cluster, one column per ray."""

    gains: np.ndarray          # (Ncl, Nray) complex
    aod_azimuth: np.ndarray    # (Ncl, Nray) radians
    aod_elevation: np.ndarray
    aoa_azimuth: np.ndarray
    aoa_elevation: np.ndarray
    cluster_powers: np.ndarray  # (Ncl,) per-cluster gain variance
    mean_angles: dict = field(default_factory=dict)  # per-family (Ncl,) cluster means


def uspa_response(phi: float, theta: float, n: int, spacing: float = 0.5) -> np.ndarray:
    """Array response of a sqrt(n) x sqrt(n) uniform square planar array.

    Element (h, v) equals (1/sqrt(n)) * exp(j*2*pi*spacing*(h*sin(phi)*sin(theta)
    + v*cos(theta))), flattened with v varying fastest. Unit Euclidean norm.
    """
    s = math.isqrt(n)
    if s * s != n:
        raise ValueError(f"antenna count {n} is not a perfect square")
    h = np.repeat(np.arange(s), s)
    v = np.tile(np.arange(s), s)
    arg = 2.0 * np.pi * spacing * (h * np.sin(phi) * np.sin(theta) + v * np.cos(theta))
    return np.exp(1j * arg) / np.sqrt(n)


def sample_paths(params: ChannelParams, rng: np.random.Generator) -> PathSet:
    """Draw one multipath realization.

    Cluster means are uniform on [-pi, pi) for all four angle families; ray
    deviations are Laplacian with scale spread_rad/sqrt(2), i.e. standard
    deviation equal to the angular spread. Gains are CN(0, 1) per ray.
    """
    ncl, nray = params.n_clusters, params.n_rays
    spread_rad = math.radians(params.angular_spread_deg)
    lap_scale = spread_rad / math.sqrt(2.0)

    means = {}
    angles = {}
    for family in ("aod_azimuth", "aod_elevation", "aoa_azimuth", "aoa_elevation"):
        mu = rng.uniform(-np.pi, np.pi, size=ncl)
        dev = rng.laplace(0.0, lap_scale, size=(ncl, nray)) if lap_scale > 0 else np.zeros((ncl, nray))
        means[family] = mu
        angles[family] = mu[:, None] + dev

    cluster_powers = np.ones(ncl)
    std = np.sqrt(cluster_powers / 2.0)[:, None]
    gains = std * (rng.standard_normal((ncl, nray)) + 1j * rng.standard_normal((ncl, nray)))

    return PathSet(
        gains=gains,
        aod_azimuth=angles["aod_azimuth"],
        aod_elevation=angles["aod_elevation"],
        aoa_azimuth=angles["aoa_azimuth"],
        aoa_elevation=angles["aoa_elevation"],
        cluster_powers=cluster_powers,
        mean_angles=means,
    )


def channel_from_paths(params: ChannelParams, paths: PathSet) -> np.ndarray:
    """Assemble the (Nr, Nt, M) channel tensor from a sampled path set."""
    ncl, nray = params.n_clusters, params.n_rays
    n_paths = ncl * nray
    m = params.n_subcarriers

    a_r = np.empty((params.n_rx, n_paths), dtype=complex)
    a_t = np.empty((params.n_tx, n_paths), dtype=complex)
    for i in range(ncl):
        for l in range(nray):
            p = i * nray + l
            a_r[:, p] = uspa_response(
                paths.aoa_azimuth[i, l], paths.aoa_elevation[i, l], params.n_rx, params.spacing
            )
            a_t[:, p] = uspa_response(
                paths.aod_azimuth[i, l], paths.aod_elevation[i, l], params.n_tx, params.spacing
            )

    # delay tap = cluster index; subcarrier phase ramp exp(-j*2*pi*i*(m-1)/M)
    taps = np.repeat(np.arange(ncl), nray)
    ramp = np.exp(-2j * np.pi * np.outer(taps, np.arange(m)) / m)  # (P, M)
    weights = paths.gains.reshape(n_paths)[:, None] * ramp

    scale = np.sqrt(params.n_rx * params.n_tx / n_paths)
    outer = a_r[:, None, :] * a_t.conj()[None, :, :]  # (Nr, Nt, P)
    h = scale * (outer.reshape(-1, n_paths) @ weights).reshape(params.n_rx, params.n_tx, m)
    return h


def generate_channel(params: ChannelParams, rng: np.random.Generator) -> np.ndarray:
    """Sample paths and build the (Nr, Nt, M) frequency-domain channel tensor."""
    return channel_from_paths(params, sample_paths(params, rng))


def save_channel(path, h: np.ndarray, params: ChannelParams, seed=None) -> None:
    """Serialize a channel tensor with its generating parameters (bit-exact)."""
    header = {
        "dims": list(h.shape),
        "seed": seed,
        "params": {
            "n_tx": params.n_tx,
            "n_rx": params.n_rx,
            "n_subcarriers": params.n_subcarriers,
            "n_clusters": params.n_clusters,
            "n_rays": params.n_rays,
            "angular_spread_deg": params.angular_spread_deg,
            "spacing": params.spacing,
        },
    }
    np.savez(path, entries=h, header=np.frombuffer(json.dumps(header).encode(), dtype=np.uint8))


def load_channel(path):
    """Round-trip counterpart of :func:`save_channel`; returns (h, header dict)."""
    with np.load(path) as data:
        h = data["entries"]
        header = json.loads(data["header"].tobytes().decode())
    return h, header
