"""Dyadic frequency-band multipliers and band-pass projections.

The band-pass family is built from a radial cutoff chi with chi = 1 for
|xi| <= 1 and chi = 0 for |xi| >= 2.  The band multiplier at scale j is the
telescoping difference

    psi_hat_j(xi) = chi(|xi| / 2^j) - chi(|xi| / 2^(j-1)),

which is supported in 2^(j-1) <= |xi| <= 2^(j+1), takes values in [0, 1],
and sums with the lowpass block chi(|xi| / 2^(j_min-1)) to exactly 1 at
every representable frequency.  Bands above the Nyquist shell are
identically zero on the grid, so truncating at j = L+1 loses nothing.

Two cutoff families are available: "exp" (default, the smooth
exp(-1/t)-quotient ramp) and "cosine" (raised-cosine ramp) for probing that
results do not depend on the profile shape.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InvariantViolation
from .grid import GridFunction

__all__ = [
    "BandProfile",
    "BandDecomposition",
    "build_profiles",
    "band_project",
    "band_project_modified",
    "decompose",
    "profiles_to_csv",
]


def _chi_exp(u: np.ndarray) -> np.ndarray:
    out = np.ones_like(u)
    out[u >= 2.0] = 0.0
    mid = (u > 1.0) & (u < 2.0)
    t = u[mid]
    a = np.exp(-1.0 / (2.0 - t))
    b = np.exp(-1.0 / (t - 1.0))
    out[mid] = a / (a + b)
    return out


def _chi_cosine(u: np.ndarray) -> np.ndarray:
    out = np.ones_like(u)
    out[u >= 2.0] = 0.0
    mid = (u > 1.0) & (u < 2.0)
    out[mid] = 0.5 * (1.0 + np.cos(np.pi * (u[mid] - 1.0)))
    return out


_FAMILIES = {"exp": _chi_exp, "cosine": _chi_cosine}


def _freq_magnitude(N: int, n: int) -> np.ndarray:
    """Euclidean |xi| over the grid's integer frequencies, FFT order."""
    q = np.fft.fftfreq(N, d=1.0 / N)
    if n == 1:
        return np.abs(q)
    qx, qy = np.meshgrid(q, q, indexing="ij")
    return np.sqrt(qx**2 + qy**2)


@dataclass(frozen=True, eq=False)
class BandProfile:
    """One Fourier multiplier: kind 'standard', 'lowpass' or 'modified'."""

    j: int
    values: np.ndarray
    kind: str = "standard"
    alpha: float | None = None

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def label(self) -> str:
        if self.kind == "lowpass":
            return f"lowpass(j_min={self.j})"
        if self.kind == "modified":
            return f"band'{self.j}(alpha={self.alpha})"
        return f"band{self.j}"


def build_profiles(L: int, j_min: int, n: int = 1, family: str = "exp") -> list[BandProfile]:
    """Standard profiles for j = j_min..L+1 plus the matching lowpass block.

    The lowpass multiplier is chi(|xi| / 2^(j_min-1)), i.e. the telescoped sum
    of all bands below j_min, so lowpass + sum of bands == 1 identically.
    """
    if family not in _FAMILIES:
        raise ConfigError(f"unknown profile family {family!r}, expected one of {sorted(_FAMILIES)}")
    if not 0 <= j_min <= L:
        raise ConfigError(f"j_min must satisfy 0 <= j_min <= L, got j_min={j_min}, L={L}")
    chi = _FAMILIES[family]
    N = 2**L
    mag = _freq_magnitude(N, n)
    profiles = [BandProfile(j_min, chi(mag / 2.0 ** (j_min - 1)), kind="lowpass")]
    for j in range(j_min, L + 2):
        values = chi(mag / 2.0**j) - chi(mag / 2.0 ** (j - 1))
        profiles.append(BandProfile(j, values, kind="standard"))
    return profiles


def _modified_values(N: int, n: int, j: int, alpha: float, family: str) -> np.ndarray:
    chi = _FAMILIES[family]
    mag = _freq_magnitude(N, n)
    band = chi(mag / 2.0**j) - chi(mag / 2.0 ** (j - 1))
    scaled = mag / 2.0**j
    factor = np.zeros_like(scaled)
    nz = scaled > 0
    factor[nz] = scaled[nz] ** alpha
    return factor * band


def _apply_multiplier(f: GridFunction, values: np.ndarray) -> GridFunction:
    if values.shape != f.values.shape:
        raise ConfigError(
            f"profile shape {values.shape} does not match grid shape {f.values.shape}"
        )
    out = np.fft.ifftn(np.fft.fftn(f.values) * values)
    scale = max(1.0, float(np.max(np.abs(f.values))))
    if np.max(np.abs(out.imag)) > 1e-12 * scale:
        raise InvariantViolation("band projection produced a non-real field")
    return GridFunction(out.real)


def band_project(f: GridFunction, p: BandProfile) -> GridFunction:
    """Apply one multiplier: inverse transform of p(xi) * f_hat(xi)."""
    return _apply_multiplier(f, p.values)


def band_project_modified(
    f: GridFunction, j: int, alpha: float, family: str = "exp"
) -> GridFunction:
    """Apply the alpha-weighted band multiplier |2^-j xi|^alpha psi_hat_j(xi).

    The factor is 0 at xi = 0 by convention.  alpha outside (0,1) is allowed
    but flagged, since the two-sided norm comparison only targets that range.
    """
    if not 0 < alpha < 1:
        warnings.warn(
            f"alpha={alpha} outside (0,1); modified band computed anyway", stacklevel=2
        )
    if not 0 <= j <= f.L + 1:
        raise ConfigError(f"band index {j} outside built range 0..{f.L + 1}")
    return _apply_multiplier(f, _modified_values(f.N, f.n, j, alpha, family))


@dataclass(frozen=True, eq=False)
class BandDecomposition:
    """All band projections of one function plus its lowpass block."""

    j_min: int
    j_max: int
    bands: tuple[GridFunction, ...]
    lowpass: GridFunction
    family: str = "exp"

    @property
    def js(self) -> range:
        return range(self.j_min, self.j_max + 1)

    def band(self, j: int) -> GridFunction:
        if not self.j_min <= j <= self.j_max:
            raise ConfigError(f"band {j} not in decomposition range {self.j_min}..{self.j_max}")
        return self.bands[j - self.j_min]

    def reconstruction(self) -> np.ndarray:
        out = self.lowpass.values.copy()
        for b in self.bands:
            out = out + b.values
        return out


def decompose(f: GridFunction, j_min: int = 0, family: str = "exp") -> BandDecomposition:
    """Split f into lowpass + bands j_min..L+1 (exact telescoping)."""
    profiles = build_profiles(f.L, j_min, n=f.n, family=family)
    f_hat = np.fft.fftn(f.values)
    fields = []
    scale = max(1.0, float(np.max(np.abs(f.values))))
    for p in profiles:
        out = np.fft.ifftn(f_hat * p.values)
        if np.max(np.abs(out.imag)) > 1e-12 * scale:
            raise InvariantViolation("band projection produced a non-real field")
        fields.append(GridFunction(out.real))
    return BandDecomposition(
        j_min=j_min,
        j_max=f.L + 1,
        bands=tuple(fields[1:]),
        lowpass=fields[0],
        family=family,
    )


def profiles_to_csv(profiles: list[BandProfile], path) -> None:
    """Long-format table (frequency components, profile label, value)."""
    first = profiles[0]
    N = first.values.shape[0]
    n = first.values.ndim
    freqs = np.fft.fftfreq(N, d=1.0 / N).astype(int)
    with open(path, "w") as fh:
        cols = ",".join(f"xi{d + 1}" for d in range(n))
        fh.write(f"{cols},profile,value\n")
        for p in profiles:
            if n == 1:
                for q, v in zip(freqs, p.values):
                    fh.write(f"{q},{p.label},{float(v)!r}\n")
            else:
                for a, qa in enumerate(freqs):
                    for b, qb in enumerate(freqs):
                        fh.write(f"{qa},{qb},{p.label},{float(p.values[a, b])!r}\n")
