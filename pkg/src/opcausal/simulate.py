"""Benchmark systems with known coupling structure.

Three generators: a nine-channel nonlinear autoregressive system containing
a chain and a fork, a chain of three diffusively coupled Lorenz systems, and
a delay-coupled network of neural mass models. Each returns the series
together with the ground-truth edge list actually injected, plus a separate
observational-noise transform.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import NonFiniteState, ParameterUnset
from .ordinal import MultivariateSeries


@dataclass
class GroundTruth:
    """Known directed edges (source, target, delay in samples)."""

    edges: list[tuple[int, int, int]]
    description: str = ""

    def __post_init__(self):
        for src, tgt, delay in self.edges:
            if src == tgt:
                raise ValueError("ground truth must not contain self-edges")
            if delay < 1:
                raise ValueError("ground-truth delays must be >= 1 sample")

    def triples(self) -> set[tuple[int, int, int]]:
        return {(s, t, d) for s, t, d in self.edges}

    def pairs(self) -> set[tuple[int, int]]:
        return {(s, t) for s, t, _ in self.edges}


# (source, target, delay) -> coupling coefficient of the nine-channel
# autoregressive benchmark; channels are 0-indexed.
AR_COUPLINGS = {
    (1, 0, 4): 2.5,
    (2, 0, 2): 1.8,
    (3, 0, 2): 1.5,
    (0, 2, 1): 0.25,
    (4, 3, 3): 1.5,
    (5, 3, 1): 1.2,
    (6, 5, 3): 1.5,
    (6, 7, 1): 0.8,
    (6, 8, 1): 1.8,
}

AR_NOISE_SCALE = 0.4
AR_N_CHANNELS = 9


def _ar_self_map(x: np.ndarray) -> np.ndarray:
    # bounded logistic-like map; peaks near |x| ~ 0.6 and decays to zero
    return 3.4 * x * (1.0 - x * x) * np.exp(-x * x)


def simulate_ar(
    n_samples: int,
    seed: int,
    couplings: dict[tuple[int, int, int], float] | None = None,
    burn_in: int = 500,
    n_channels: int | None = None,
) -> tuple[MultivariateSeries, GroundTruth]:
    """Iterate the coupled noisy maps and return series plus truth.

    Defaults to the nine-channel benchmark structure; pass custom couplings
    (and optionally n_channels) for small motifs built from the same map.
    """
    if n_samples < 100:
        raise ValueError("need at least 100 samples")
    if couplings is None:
        couplings = AR_COUPLINGS
    if n_channels is None:
        n_channels = AR_N_CHANNELS
    if any(s >= n_channels or t >= n_channels for s, t, _ in couplings):
        raise ValueError("coupling endpoints exceed the channel count")
    max_lag = max((d for _, _, d in couplings), default=1)
    max_lag = max(max_lag, 1)
    rng = np.random.default_rng(seed)
    total = n_samples + burn_in + max_lag
    noise = AR_NOISE_SCALE * rng.standard_normal((total, n_channels))
    x = np.zeros((total, n_channels))
    x[:max_lag] = noise[:max_lag]
    for t in range(max_lag, total):
        row = _ar_self_map(x[t - 1]) + noise[t]
        for (src, tgt, delay), c in couplings.items():
            row[tgt] += c * x[t - delay, src]
        x[t] = row
    data = x[burn_in + max_lag :]
    if not np.all(np.abs(data) < 100):
        raise NonFiniteState("autoregressive map left its bounded regime")
    truth = GroundTruth(
        edges=[(s, t, d) for (s, t, d), c in couplings.items() if c != 0.0],
        description="nonlinear autoregressive map network",
    )
    return MultivariateSeries(data=data), truth


LORENZ_SIGMA = 10.0
LORENZ_RHO = 28.0
LORENZ_BETA = 8.0 / 3.0


def _lorenz_chain_deriv(s, c):
    x1, y1, z1, x2, y2, z2, x3, y3, z3 = s
    return (
        LORENZ_SIGMA * (y1 - x1),
        LORENZ_RHO * x1 - y1 - x1 * z1,
        x1 * y1 - LORENZ_BETA * z1,
        LORENZ_SIGMA * (y2 - x2) + c * (x1 - x2),
        LORENZ_RHO * x2 - y2 - x2 * z2,
        x2 * y2 - LORENZ_BETA * z2,
        LORENZ_SIGMA * (y3 - x3) + c * (x2 - x3),
        LORENZ_RHO * x3 - y3 - x3 * z3,
        x3 * y3 - LORENZ_BETA * z3,
    )


def simulate_lorenz_chain(
    n_samples: int,
    c: float = 0.6,
    dt: float = 0.001,
    seed: int = 0,
    transient_steps: int = 100_000,
    identical_start: bool = False,
) -> tuple[MultivariateSeries, GroundTruth]:
    """Fixed-step RK4 integration of three chained Lorenz systems.

    The x component of each system is recorded at every integration step
    after the transient. Ground truth is 1 -> 2 -> 3; the coupling is
    continuous, so the listed delay is the nominal 1 sample.
    """
    if c < 0:
        raise ValueError("coupling strength must be non-negative")
    if dt <= 0:
        raise ValueError("step size must be positive")
    rng = np.random.default_rng(seed)
    state = []
    for _ in range(3):
        state += [rng.normal(0.0, 5.0), rng.normal(0.0, 5.0), 25.0 + rng.normal(0.0, 5.0)]
    if identical_start:
        # replicas share one initial state; the difference coupling then
        # vanishes and the chain stays exactly synchronized
        state = state[:3] * 3

    def step(s):
        k1 = _lorenz_chain_deriv(s, c)
        s2 = [si + 0.5 * dt * ki for si, ki in zip(s, k1)]
        k2 = _lorenz_chain_deriv(s2, c)
        s3 = [si + 0.5 * dt * ki for si, ki in zip(s, k2)]
        k3 = _lorenz_chain_deriv(s3, c)
        s4 = [si + dt * ki for si, ki in zip(s, k3)]
        k4 = _lorenz_chain_deriv(s4, c)
        return [
            si + dt / 6.0 * (a + 2 * b + 2 * g + e)
            for si, a, b, g, e in zip(s, k1, k2, k3, k4)
        ]

    for _ in range(transient_steps):
        state = step(state)
    out = np.empty((n_samples, 3))
    for i in range(n_samples):
        state = step(state)
        out[i, 0] = state[0]
        out[i, 1] = state[3]
        out[i, 2] = state[6]
        if not (abs(state[0]) < 1e6):
            raise NonFiniteState("Lorenz integration diverged")
    if not np.all(np.isfinite(out)):
        raise NonFiniteState("Lorenz integration produced non-finite values")
    truth = GroundTruth(
        edges=[(0, 1, 1), (1, 2, 1)],
        description="chain of three diffusively coupled Lorenz systems",
    )
    return MultivariateSeries(data=out, sample_rate=1.0 / dt), truth


_NMM_REQUIRED = (
    "g_e",
    "g_s",
    "g_f",
    "h_e",
    "h_s",
    "h_f",
    "e0",
    "r",
    "c_pe",
    "c_ps",
    "c_pf",
    "c_ep",
    "c_sp",
    "c_fp",
    "c_fs",
    "c_ff",
    "noise_mean",
    "noise_var",
    "sample_rate",
    "delay_ms",
    "coupling_weight",
)


@dataclass
class NmmConfig:
    """Population parameters and network settings for the neural mass model.

    All values are mandatory; `from_dict` raises ParameterUnset when a key is
    missing so a partially specified file cannot silently fall back to
    hard-coded numbers.
    """

    g_e: float
    g_s: float
    g_f: float
    h_e: float
    h_s: float
    h_f: float
    e0: float
    r: float
    c_pe: float
    c_ps: float
    c_pf: float
    c_ep: float
    c_sp: float
    c_fp: float
    c_fs: float
    c_ff: float
    noise_mean: float
    noise_var: float
    sample_rate: float
    delay_ms: float
    coupling_weight: float
    n_regions: int = 8

    def __post_init__(self):
        for name in ("h_e", "h_s", "h_f", "e0", "r", "sample_rate"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.delay_ms <= 0:
            raise ValueError("delay_ms must be positive")
        delay_samples = self.delay_ms * self.sample_rate / 1000.0
        if abs(delay_samples - round(delay_samples)) > 1e-9:
            raise ValueError(
                "delay_ms must be an integer multiple of the sample period"
            )

    @property
    def delay_samples(self) -> int:
        return int(round(self.delay_ms * self.sample_rate / 1000.0))

    @classmethod
    def from_dict(cls, d: dict) -> "NmmConfig":
        missing = [k for k in _NMM_REQUIRED if k not in d]
        if missing:
            raise ParameterUnset(f"missing neural-mass parameters: {', '.join(missing)}")
        known = set(_NMM_REQUIRED) | {"n_regions"}
        return cls(**{k: v for k, v in d.items() if k in known})

    @classmethod
    def from_json(cls, path: str | Path) -> "NmmConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def reproduction_nmm_config() -> NmmConfig:
    """The reproduction configuration shipped with the package."""
    return NmmConfig.from_json(Path(__file__).parent / "configs" / "nmm_reproduction.json")


def draw_nmm_graph(n_regions: int, k_percent: float, rng: np.random.Generator) -> np.ndarray:
    """Random directed graph with floor(k * n^2 / 100) edges (0/1 matrix).

    Edges are drawn without replacement from all n^2 ordered pairs, so
    self-connections can be drawn; they act as self-coupling in the
    simulation but are not reported as ground-truth edges.
    """
    n_edges = int(k_percent * n_regions * n_regions / 100.0)
    pairs = [(i, j) for i in range(n_regions) for j in range(n_regions)]
    if n_edges > len(pairs):
        raise ValueError("requested connection density exceeds the number of pairs")
    chosen = rng.choice(len(pairs), size=n_edges, replace=False)
    adj = np.zeros((n_regions, n_regions), dtype=float)
    for idx in chosen:
        i, j = pairs[idx]
        adj[i, j] = 1.0
    return adj


def _sigmoid(v, e0, r):
    return 2.0 * e0 / (1.0 + np.exp(-r * v)) - e0


def simulate_nmm(
    cfg: NmmConfig,
    k_percent: float,
    n_samples: int,
    seed: int,
    transient_samples: int = 2000,
    adjacency: np.ndarray | None = None,
) -> tuple[MultivariateSeries, GroundTruth]:
    """Euler integration of a delay-coupled neural mass network.

    The per-region state holds the pyramidal, excitatory, slow-inhibitory and
    fast-inhibitory synaptic pairs plus the auxiliary pair driven by the
    coupling input. The delayed pyramidal pulse density of connected regions
    enters the excitatory input with weight cfg.coupling_weight. Output per
    region is the summed pyramidal membrane potential.

    cfg.delay_ms is the effective source-to-target interaction latency. The
    coupling input passes through the excitatory synaptic kernel, whose
    response peaks 1/h_e after the input arrives, so the transmission buffer
    holds delay_ms minus that rise time; the lag at which the target output
    tracks the source is then delay_ms itself.
    """
    rng = np.random.default_rng(seed)
    n = cfg.n_regions
    if adjacency is None:
        adjacency = draw_nmm_graph(n, k_percent, rng)
    w = cfg.coupling_weight * adjacency
    rise_samples = int(round(cfg.sample_rate / cfg.h_e))
    buffer_samples = max(cfg.delay_samples - rise_samples, 1)
    dt = 1.0 / cfg.sample_rate
    total = n_samples + transient_samples

    y_p = np.zeros(n)
    x_p = np.zeros(n)
    y_e = np.zeros(n)
    x_e = np.zeros(n)
    y_s = np.zeros(n)
    x_s = np.zeros(n)
    y_f = np.zeros(n)
    x_f = np.zeros(n)
    y_l = np.zeros(n)
    x_l = np.zeros(n)

    noise_std = math.sqrt(cfg.noise_var)
    buffer_len = buffer_samples
    z_p_buffer = np.zeros((buffer_len, n))
    out = np.empty((total, n))

    for t in range(total):
        v_p = cfg.c_pe * y_e - cfg.c_ps * y_s - cfg.c_pf * y_f
        v_e = cfg.c_ep * y_p
        v_s = cfg.c_sp * y_p
        v_f = cfg.c_fp * y_p - cfg.c_fs * y_s - cfg.c_ff * y_l

        z_p = _sigmoid(v_p, cfg.e0, cfg.r)
        z_e = _sigmoid(v_e, cfg.e0, cfg.r)
        z_s = _sigmoid(v_s, cfg.e0, cfg.r)
        z_f = _sigmoid(v_f, cfg.e0, cfg.r)

        # slot t % delay was last written at step t - delay
        z_p_delayed = z_p_buffer[t % buffer_len].copy()
        z_p_buffer[t % buffer_len] = z_p
        n_p = cfg.noise_mean + noise_std * rng.standard_normal(n)
        n_f = cfg.noise_mean + noise_std * rng.standard_normal(n)
        u_p = n_p + w @ z_p_delayed
        u_f = n_f

        d_y_p = x_p
        d_x_p = cfg.g_e * cfg.h_e * z_p - 2.0 * cfg.h_e * x_p - cfg.h_e**2 * y_p
        d_y_e = x_e
        d_x_e = (
            cfg.g_e * cfg.h_e * (z_e + u_p / cfg.c_pe)
            - 2.0 * cfg.h_e * x_e
            - cfg.h_e**2 * y_e
        )
        d_y_s = x_s
        d_x_s = cfg.g_s * cfg.h_s * z_s - 2.0 * cfg.h_s * x_s - cfg.h_s**2 * y_s
        d_y_f = x_f
        d_x_f = cfg.g_f * cfg.h_f * z_f - 2.0 * cfg.h_f * x_f - cfg.h_f**2 * y_f
        d_y_l = x_l
        d_x_l = cfg.g_e * cfg.h_e * u_f - 2.0 * cfg.h_e * x_l - cfg.h_e**2 * y_l

        y_p += dt * d_y_p
        x_p += dt * d_x_p
        y_e += dt * d_y_e
        x_e += dt * d_x_e
        y_s += dt * d_y_s
        x_s += dt * d_x_s
        y_f += dt * d_y_f
        x_f += dt * d_x_f
        y_l += dt * d_y_l
        x_l += dt * d_x_l

        out[t] = cfg.c_pe * y_e - cfg.c_ps * y_s - cfg.c_pf * y_f
        if not np.all(np.isfinite(out[t])):
            raise NonFiniteState("neural mass integration diverged")

    data = out[transient_samples:]
    truth = GroundTruth(
        edges=[
            (j, i, cfg.delay_samples)
            for i in range(n)
            for j in range(n)
            if adjacency[i, j] > 0 and i != j
        ],
        description="delay-coupled neural mass network",
    )
    return MultivariateSeries(data=data, sample_rate=cfg.sample_rate), truth


def add_observation_noise(
    series: MultivariateSeries, beta: float, seed: int
) -> MultivariateSeries:
    """Additive Gaussian noise scaled per channel by beta times its std."""
    if beta < 0:
        raise ValueError("noise level must be non-negative")
    if beta == 0:
        return MultivariateSeries(
            data=series.data.copy(),
            sample_rate=series.sample_rate,
            channel_names=list(series.channel_names),
        )
    rng = np.random.default_rng(seed)
    stds = series.data.std(axis=0)
    noise = rng.standard_normal(series.data.shape) * (beta * stds)
    return MultivariateSeries(
        data=series.data + noise,
        sample_rate=series.sample_rate,
        channel_names=list(series.channel_names),
    )
