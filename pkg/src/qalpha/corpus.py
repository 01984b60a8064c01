"""Deterministic generators of test functions with a tunable regularity dial.

The `spectral_noise` kind prescribes |f_hat(xi)| = |xi|^(-s - n/2) with
seeded random phases, which puts the per-band energies on the power law
2^(-2js): the slope s plays the role of a smoothness dial, with s > alpha
expected to give resolution-stable increment-norm values and s < alpha
values that grow with N.  The remaining kinds are closed-form samples.
Identical specs (including the seed) produce bit-identical grids.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError
from .grid import GridFunction

__all__ = ["CorpusSpec", "generate", "load_corpus_file", "default_corpus"]

KINDS = (
    "constant",
    "harmonic",
    "gaussian_bump",
    "smoothed_step",
    "spectral_noise",
    "schwartz_like",
)


@dataclass(frozen=True)
class CorpusSpec:
    kind: str
    N: int
    n: int
    params: tuple[tuple[str, float], ...] = ()
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown corpus kind {self.kind!r}, expected one of {KINDS}")
        params = tuple(sorted((str(k), v) for k, v in dict(self.params).items()))
        object.__setattr__(self, "params", params)

    def param(self, name: str, default=None):
        for k, v in self.params:
            if k == name:
                return v
        if default is None:
            raise ConfigError(f"corpus kind {self.kind!r} needs parameter {name!r}")
        return default

    @property
    def ident(self) -> str:
        parts = [self.kind] + [f"{k}={v:g}" for k, v in self.params]
        if self.kind == "spectral_noise":
            parts.append(f"seed={self.seed}")
        return "_".join(parts)

    def with_size(self, N: int) -> "CorpusSpec":
        return replace(self, N=N)


def _positions(N: int, n: int) -> list[np.ndarray]:
    x = np.arange(N) / N
    if n == 1:
        return [x]
    X, Y = np.meshgrid(x, x, indexing="ij")
    return [X, Y]


def _freqs(N: int, n: int):
    q = np.fft.fftfreq(N, d=1.0 / N).astype(int)
    if n == 1:
        return q, np.abs(q).astype(float)
    qx, qy = np.meshgrid(q, q, indexing="ij")
    return (qx, qy), np.sqrt(qx.astype(float) ** 2 + qy.astype(float) ** 2)


def _from_spectrum(coeffs: np.ndarray, N: int, n: int) -> GridFunction:
    v = np.fft.ifftn(coeffs) * N**n
    return GridFunction(v.real)


def _phase_shift(freq, n: int, center: float = 0.5) -> np.ndarray:
    if n == 1:
        return np.exp(-2j * np.pi * freq * center)
    return np.exp(-2j * np.pi * (freq[0] + freq[1]) * center)


def _gaussian_bump(spec: CorpusSpec) -> GridFunction:
    width = spec.param("width")
    if not width > 0:
        raise ConfigError(f"bump width must be positive, got {width}")
    freq, mag = _freqs(spec.N, spec.n)
    coeffs = np.exp(-2.0 * np.pi**2 * width**2 * mag**2) * _phase_shift(freq, spec.n)
    coeffs[(0,) * spec.n] = 0.0
    return _from_spectrum(coeffs, spec.N, spec.n)


def _schwartz_like(spec: CorpusSpec) -> GridFunction:
    rate = spec.param("rate", 1.0)
    if not rate > 0:
        raise ConfigError(f"decay rate must be positive, got {rate}")
    freq, mag = _freqs(spec.N, spec.n)
    coeffs = np.exp(-rate * mag) * _phase_shift(freq, spec.n)
    coeffs[(0,) * spec.n] = 0.0
    return _from_spectrum(coeffs, spec.N, spec.n)


def _harmonic(spec: CorpusSpec) -> GridFunction:
    xi0 = int(spec.param("xi0"))
    if not 0 < xi0 < spec.N // 2:
        raise ConfigError(f"harmonic frequency must lie in (0, N/2), got {xi0}")
    pos = _positions(spec.N, spec.n)
    phase = sum(pos)  # frequency vector (xi0,...,xi0)
    return GridFunction(np.cos(2.0 * np.pi * xi0 * phase))


def _smoothed_step(spec: CorpusSpec) -> GridFunction:
    sharp = spec.param("sharpness")
    if not sharp > 0:
        raise ConfigError(f"sharpness must be positive, got {sharp}")
    pos = _positions(spec.N, spec.n)
    out = np.ones_like(pos[0])
    for x in pos:
        out = out * np.tanh(sharp * np.sin(2.0 * np.pi * x))
    return GridFunction(out)


def _canonical_half(N: int, n: int):
    """Frequency tuples with a canonical representative per conjugate pair."""
    half = N // 2
    rng_axis = list(range(-half, half))
    for xi in itertools.product(rng_axis, repeat=n):
        if all(q == 0 for q in xi):
            continue
        neg = tuple(-q if q != -half else -half for q in xi)
        self_conj = all(q in (0, -half) for q in xi)
        if self_conj or xi >= neg:
            yield xi, self_conj


def _spectral_noise(spec: CorpusSpec) -> GridFunction:
    slope = spec.param("slope")
    if not slope > 0:
        raise ConfigError(f"spectral slope must be positive, got {slope}")
    N, n = spec.N, spec.n
    rng = np.random.default_rng(spec.seed)
    coeffs = np.zeros((N,) * n, dtype=complex)
    for xi, self_conj in sorted(_canonical_half(N, n)):
        mag = float(np.sqrt(sum(float(q) ** 2 for q in xi))) ** (-slope - n / 2)
        if self_conj:
            coeffs[tuple(q % N for q in xi)] = mag * (1.0 if rng.random() < 0.5 else -1.0)
        else:
            theta = rng.uniform(0.0, 2.0 * np.pi)
            c = mag * np.exp(1j * theta)
            coeffs[tuple(q % N for q in xi)] = c
            coeffs[tuple(-q % N for q in xi)] = np.conj(c)
    return _from_spectrum(coeffs, N, n)


_BUILDERS = {
    "constant": lambda spec: GridFunction(
        np.full((spec.N,) * spec.n, spec.param("value", 1.0))
    ),
    "harmonic": _harmonic,
    "gaussian_bump": _gaussian_bump,
    "smoothed_step": _smoothed_step,
    "spectral_noise": _spectral_noise,
    "schwartz_like": _schwartz_like,
}


def generate(spec: CorpusSpec) -> GridFunction:
    return _BUILDERS[spec.kind](spec)


def load_corpus_file(path) -> list[CorpusSpec]:
    """JSON list of {kind, params, N, n, seed} records."""
    with open(path) as fh:
        try:
            records = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(records, list):
        raise ConfigError(f"{path}: expected a JSON list of corpus records")
    specs = []
    for rec in records:
        try:
            specs.append(
                CorpusSpec(
                    kind=rec["kind"],
                    N=int(rec["N"]),
                    n=int(rec["n"]),
                    params=tuple(rec.get("params", {}).items()),
                    seed=int(rec.get("seed", 0)),
                )
            )
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"{path}: malformed corpus record {rec!r}: {exc}") from None
    return specs


def default_corpus(n: int, N: int, with_constant: bool = True) -> list[CorpusSpec]:
    """A small spread of regularities used by the verification harness."""
    specs = []
    if with_constant:
        specs.append(CorpusSpec("constant", N, n, (("value", 1.0),)))
    specs += [
        CorpusSpec("harmonic", N, n, (("xi0", 3),)),
        CorpusSpec("gaussian_bump", N, n, (("width", 0.08),)),
        CorpusSpec("smoothed_step", N, n, (("sharpness", 6.0),)),
        CorpusSpec("spectral_noise", N, n, (("slope", 0.9),), seed=42),
        CorpusSpec("schwartz_like", N, n, (("rate", 1.0),)),
    ]
    return specs
