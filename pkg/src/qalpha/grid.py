"""Periodic sampled functions on the unit torus and cube-restricted sums.

A function is represented by its real samples on the lattice
{i/N : i in {0,...,N-1}}^n over [0,1)^n, with N a power of two (spacing
h = 1/N).  Cubes are axis-parallel boxes in R^n; a cube may extend beyond
[0,1)^n, in which case lattice membership wraps coordinates periodically
while positions stay in the cube's own (unwrapped) coordinates.

Two membership conventions coexist on purpose:

* quadrature sums (`l2_on_cube`, `cube_lattice`) use half-open intervals
  [corner, corner+edge) per axis, so dyadic children partition the lattice
  points of their parent exactly and grid-aligned cubes carry their exact
  measure;
* `cube_mean` uses closed intervals with each lattice index counted once,
  i.e. boundary points are included in the average.

All comparisons act on exactly representable dyadic rationals, so boundary
ties are deterministic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InvariantViolation

__all__ = [
    "GridFunction",
    "SpectralFunction",
    "Cube",
    "transform",
    "inverse_transform",
    "cube_mean",
    "l2_on_cube",
    "cube_lattice",
    "enumerate_cubes",
    "read_grid",
    "write_grid",
]


def _validate_size(N: int) -> None:
    if N < 8 or N & (N - 1):
        raise ConfigError(f"grid size must be a power of two >= 8, got {N}")


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Real samples on the periodic lattice {i/N}^n, n in {1, 2}."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim not in (1, 2):
            raise ConfigError(f"dimension must be 1 or 2, got array of ndim {v.ndim}")
        N = v.shape[0]
        if any(s != N for s in v.shape):
            raise ConfigError(f"grid must be square, got shape {v.shape}")
        _validate_size(N)
        if not np.all(np.isfinite(v)):
            raise ConfigError("grid values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.ndim

    @property
    def N(self) -> int:
        return self.values.shape[0]

    @property
    def L(self) -> int:
        return self.N.bit_length() - 1

    @property
    def h(self) -> float:
        return 1.0 / self.N

    def roll(self, shift: int | tuple[int, ...]) -> "GridFunction":
        """Cyclic lattice translation by whole grid steps."""
        if isinstance(shift, int):
            shift = (shift,) * self.n
        return GridFunction(np.roll(self.values, shift, axis=tuple(range(self.n))))


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    """Fourier coefficients indexed by integer frequencies in {-N/2,...,N/2-1}^n.

    Stored in FFT wrap-around order; `coefficient` accepts signed frequencies.
    """

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex)
        if c.ndim not in (1, 2):
            raise ConfigError(f"dimension must be 1 or 2, got array of ndim {c.ndim}")
        N = c.shape[0]
        if any(s != N for s in c.shape):
            raise ConfigError(f"spectrum must be square, got shape {c.shape}")
        _validate_size(N)
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def n(self) -> int:
        return self.coefficients.ndim

    @property
    def N(self) -> int:
        return self.coefficients.shape[0]

    def frequencies(self) -> np.ndarray:
        """Integer frequencies along one axis, in storage (FFT) order."""
        return np.fft.fftfreq(self.N, d=1.0 / self.N).astype(int)

    def coefficient(self, xi: int | tuple[int, ...]) -> complex:
        if isinstance(xi, int):
            xi = (xi,)
        if len(xi) != self.n:
            raise ConfigError(f"frequency must have {self.n} components")
        half = self.N // 2
        for q in xi:
            if not -half <= q < half:
                raise ConfigError(f"frequency {q} outside [-N/2, N/2)")
        idx = tuple(q % self.N for q in xi)
        return complex(self.coefficients[idx])


def transform(f: GridFunction) -> SpectralFunction:
    """Forward DFT normalized so a constant c maps to coefficient c at xi=0.

    With this pairing Parseval reads h^n sum(f^2) == sum(|f_hat|^2).
    """
    return SpectralFunction(np.fft.fftn(f.values) / f.N**f.n)


def inverse_transform(F: SpectralFunction) -> GridFunction:
    """Inverse DFT; asserts the result is real before discarding residue."""
    v = np.fft.ifftn(F.coefficients) * F.N**F.n
    scale = max(1.0, float(np.max(np.abs(v.real))))
    if np.max(np.abs(v.imag)) > 1e-12 * scale:
        raise InvariantViolation("inverse transform produced a non-real field")
    return GridFunction(v.real)


@dataclass(frozen=True)
class Cube:
    """Axis-parallel closed cube [corner, corner+edge]^n."""

    corner: tuple[float, ...]
    edge: float

    def __post_init__(self):
        corner = tuple(float(c) for c in self.corner)
        if not corner:
            raise ConfigError("cube corner must have at least one coordinate")
        if not (self.edge > 0):
            raise ConfigError(f"cube edge must be positive, got {self.edge}")
        object.__setattr__(self, "corner", corner)
        object.__setattr__(self, "edge", float(self.edge))

    @property
    def n(self) -> int:
        return len(self.corner)

    @property
    def center(self) -> tuple[float, ...]:
        return tuple(c + self.edge / 2 for c in self.corner)

    def dilate(self, m: float) -> "Cube":
        """Cube with the same center and edge m*edge."""
        if not (m > 0):
            raise ConfigError(f"dilation factor must be positive, got {m}")
        return Cube(tuple(c + self.edge * (1 - m) / 2 for c in self.corner), m * self.edge)

    def contains(self, point: tuple[float, ...]) -> bool:
        """Closed-cube membership of a point in the cube's own coordinates."""
        return all(a <= x <= a + self.edge for a, x in zip(self.corner, point))

    def intersects(self, other: "Cube") -> bool:
        return all(
            max(a, b) <= min(a + self.edge, b + other.edge)
            for a, b in zip(self.corner, other.corner)
        )

    def contained_in(self, other: "Cube") -> bool:
        return all(
            b <= a and a + self.edge <= b + other.edge
            for a, b in zip(self.corner, other.corner)
        )


def _axis_range(a: float, b: float, N: int, closed: bool) -> tuple[int, int]:
    """Integers i with i/N in [a,b] (closed) or [a,b) (half-open), unwrapped."""
    lo = math.ceil(a * N)
    hi = math.floor(b * N) if closed else math.ceil(b * N) - 1
    return lo, hi


def _quadrature_axes(f: GridFunction, I: Cube) -> list[np.ndarray]:
    """Per-axis unwrapped lattice integers of the half-open cube (multiset)."""
    axes = []
    for d in range(f.n):
        lo, hi = _axis_range(I.corner[d], I.corner[d] + I.edge, f.N, closed=False)
        if hi < lo:
            raise ConfigError("degenerate cube: no lattice point inside")
        axes.append(np.arange(lo, hi + 1))
    return axes


def cube_lattice(f: GridFunction, I: Cube) -> tuple[np.ndarray, np.ndarray]:
    """Half-open lattice points of I: positions (P, n) and sampled values (P,).

    Positions are unwrapped (they live in the cube, which may extend beyond
    the unit cell); values are read periodically.
    """
    axes = _quadrature_axes(f, I)
    if f.n == 1:
        i = axes[0]
        return (i / f.N)[:, None], f.values[i % f.N]
    ii, jj = np.meshgrid(axes[0], axes[1], indexing="ij")
    pos = np.stack([ii.ravel() / f.N, jj.ravel() / f.N], axis=1)
    vals = f.values[ii.ravel() % f.N, jj.ravel() % f.N]
    return pos, vals


def cube_mean(f: GridFunction, I: Cube) -> float:
    """Arithmetic mean of f over the lattice points of the closed cube.

    Each lattice index is counted once even when the cube wraps around the
    torus more than a full period.
    """
    index_axes = []
    for d in range(f.n):
        lo, hi = _axis_range(I.corner[d], I.corner[d] + I.edge, f.N, closed=True)
        if hi < lo:
            raise ConfigError("degenerate cube: no lattice point inside")
        # dedup wrapped indices in position order, so translated cubes of a
        # translated function sum in the same order (bit-exact equivariance)
        hi = min(hi, lo + f.N - 1)
        idx = np.arange(lo, hi + 1) % f.N
        index_axes.append(idx)
    if f.n == 1:
        return float(f.values[index_axes[0]].mean())
    return float(f.values[np.ix_(index_axes[0], index_axes[1])].mean())


def l2_on_cube(f: GridFunction, I: Cube) -> float:
    """Squared discrete L2 norm h^n * sum of f^2 over half-open lattice points."""
    axes = _quadrature_axes(f, I)
    if f.n == 1:
        s = float(np.sum(f.values[axes[0] % f.N] ** 2))
    else:
        block = f.values[np.ix_(axes[0] % f.N, axes[1] % f.N)]
        s = float(np.sum(block**2))
    return f.h**f.n * s


def enumerate_cubes(L: int, level_max: int, n: int = 1, shifted: bool = False) -> list[Cube]:
    """Grid-aligned dyadic subcubes of [0,1)^n, levels 0..level_max.

    With `shifted`, the same family translated by half an edge per axis is
    appended (membership wraps periodically).  level_max is capped at L-3 so
    every cube keeps at least 8 lattice points per edge.
    """
    if n not in (1, 2):
        raise ConfigError(f"dimension must be 1 or 2, got {n}")
    if level_max < 0:
        raise ConfigError(f"level_max must be >= 0, got {level_max}")
    if level_max > L - 3:
        raise ConfigError(
            f"level_max {level_max} leaves fewer than 8 lattice points per edge "
            f"(maximum for L={L} is {L - 3})"
        )
    out = []
    for shift in (0.0, 0.5) if shifted else (0.0,):
        for k in range(level_max + 1):
            edge = 2.0**-k
            for idx in itertools.product(range(2**k), repeat=n):
                corner = tuple((i + shift) * edge for i in idx)
                out.append(Cube(corner, edge))
    return out


def write_grid(f: GridFunction, path) -> None:
    """Plain-text record: header line "n N", then N^n row-major values."""
    with open(path, "w") as fh:
        fh.write(f"{f.n} {f.N}\n")
        for v in f.values.ravel():
            fh.write(f"{float(v)!r}\n")


def read_grid(path) -> GridFunction:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ConfigError(f"{path}: malformed grid header, expected 'n N'")
        try:
            n, N = int(header[0]), int(header[1])
        except ValueError as exc:
            raise ConfigError(f"{path}: malformed grid header: {exc}") from None
        if n not in (1, 2):
            raise ConfigError(f"{path}: dimension must be 1 or 2, got {n}")
        flat = np.loadtxt(fh, dtype=float, ndmin=1)
    if flat.size != N**n:
        raise ConfigError(f"{path}: expected {N**n} values, found {flat.size}")
    return GridFunction(flat.reshape((N,) * n))
