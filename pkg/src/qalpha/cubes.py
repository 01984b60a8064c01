"""Dyadic-cube combinatorics over a continuum root cube.

Given two distinct points x, y and a dilation factor m >= 2, the tree set
collects every dyadic subcube J of the root with x, y in mJ (same center,
edge m*l(J)).  The set is upward-closed in the dyadic tree and finite: a
qualifying cube needs m*l(J) >= |x-y|_inf.  Its minimal elements (no child
qualifies) are pairwise disjoint and carry essentially the whole kernel sum
    k(x, y) = sum over qualifying J of l(J)^(-2*alpha - n).

Membership tests run on scaled integers: every float is a dyadic rational,
so after multiplying through by a common power of two the test
|x - center| <= m*edge/2 is an exact integer comparison.  Kernel powers are
evaluated in floating point and accumulated with math.fsum, which makes the
subset inequality kernel(full tree) >= kernel(minimal elements) exact.

The ring classification walks the shells I_k = 2^k I_0 around the pair
(I_0 centered at the midpoint with edge sqrt(n)|x-y|_2) and buckets each
minimal cube by the first shell it meets and whether it fits inside the
next one.  Shell geometry uses double precision; for n = 2 the shell edge
is irrational, but the bucketing stays a partition by construction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, InvariantViolation
from .grid import Cube

__all__ = [
    "DyadicCube",
    "GammaSet",
    "AllowedClassification",
    "CountSummary",
    "dilate",
    "gamma_set",
    "required_max_level",
    "allowed_cubes",
    "kernel_sum",
    "classify_allowed",
    "count_summary",
    "sample_pairs",
]


@dataclass(frozen=True)
class DyadicCube:
    """Level-k subcube of a root cube, addressed by an integer index vector."""

    root: Cube
    level: int
    index: tuple[int, ...]

    def __post_init__(self):
        if self.level < 0:
            raise ConfigError(f"dyadic level must be >= 0, got {self.level}")
        index = tuple(int(i) for i in self.index)
        if len(index) != self.root.n:
            raise ConfigError("index dimension does not match root cube")
        if any(not 0 <= i < 2**self.level for i in index):
            raise ConfigError(f"index {index} outside level-{self.level} range")
        object.__setattr__(self, "index", index)

    @property
    def n(self) -> int:
        return self.root.n

    @property
    def edge(self) -> float:
        return self.root.edge * 2.0**-self.level

    @property
    def corner(self) -> tuple[float, ...]:
        e = self.edge
        return tuple(c + i * e for c, i in zip(self.root.corner, self.index))

    def to_cube(self) -> Cube:
        return Cube(self.corner, self.edge)

    def children(self) -> list["DyadicCube"]:
        out = []
        for bits in itertools.product((0, 1), repeat=self.n):
            idx = tuple(2 * i + b for i, b in zip(self.index, bits))
            out.append(DyadicCube(self.root, self.level + 1, idx))
        return out

    def parent(self) -> "DyadicCube | None":
        if self.level == 0:
            return None
        return DyadicCube(self.root, self.level - 1, tuple(i // 2 for i in self.index))


def dilate(J: DyadicCube | Cube, m: float) -> Cube:
    """Cube with the same center as J and edge m*l(J)."""
    cube = J.to_cube() if isinstance(J, DyadicCube) else J
    return cube.dilate(m)


def _dyadic_bits(v: float) -> int:
    """Exponent e with v * 2^e an integer (floats are dyadic rationals)."""
    den = float(v).as_integer_ratio()[1]
    return den.bit_length() - 1


def _scaled(v: float, scale: int) -> int:
    num, den = float(v).as_integer_ratio()
    return num * (2**scale // den)


def required_max_level(I: Cube, x: tuple[float, ...], y: tuple[float, ...], m: float) -> int:
    """Smallest tree depth guaranteed to expose every minimal member."""
    d_inf = max(abs(a - b) for a, b in zip(x, y))
    if d_inf == 0:
        raise ConfigError("diagonal point pair: x == y")
    return max(0, math.ceil(math.log2(m * I.edge / d_inf))) + 1


@dataclass(frozen=True, eq=False)
class GammaSet:
    """All dyadic subcubes J of the root with x, y in mJ."""

    root: Cube
    x: tuple[float, ...]
    y: tuple[float, ...]
    m: float
    max_level: int
    members: frozenset[DyadicCube]
    _keys: frozenset[tuple[int, tuple[int, ...]]] = field(repr=False, default=frozenset())

    def __post_init__(self):
        object.__setattr__(
            self, "_keys", frozenset((J.level, J.index) for J in self.members)
        )

    def __contains__(self, J: DyadicCube) -> bool:
        return (J.level, J.index) in self._keys

    def __len__(self) -> int:
        return len(self.members)


def _point_in_dilated(
    X: tuple[int, ...],
    corner: tuple[int, ...],
    edge: int,
    m_num: int,
    m_bits: int,
) -> bool:
    """Exact test x in mJ on scaled integers: |2X - 2A - E| * 2^m_bits <= m_num * E."""
    bound = m_num * edge
    for Xd, Ad in zip(X, corner):
        if abs(2 * Xd - 2 * Ad - edge) << m_bits > bound:
            return False
    return True


def gamma_set(
    I: Cube,
    x: tuple[float, ...],
    y: tuple[float, ...],
    m: float = 2.0,
    max_level: int | None = None,
) -> GammaSet:
    """Enumerate the tree set by pruned descent from the root.

    A subtree is pruned as soon as mJ excludes x or y, which is valid because
    membership is monotone up the tree (mJ' is contained in mJ for J' a child
    of J whenever m >= 1).  If x or y falls outside mI the set is empty.
    """
    x = tuple(float(c) for c in x)
    y = tuple(float(c) for c in y)
    if len(x) != I.n or len(y) != I.n:
        raise ConfigError("point dimension does not match root cube")
    if x == y:
        raise ConfigError("diagonal point pair: x == y")
    if m < 2:
        raise ConfigError(f"dilation factor must be >= 2, got {m}")
    required = required_max_level(I, x, y, m)
    if max_level is None:
        max_level = required
    elif max_level < required:
        raise ConfigError(
            f"max_level {max_level} too small to expose all minimal members; "
            f"need at least {required}"
        )

    coord_bits = max(_dyadic_bits(v) for v in (*x, *y, *I.corner))
    scale = max(coord_bits, _dyadic_bits(I.edge) + max_level)
    X = tuple(_scaled(v, scale) for v in x)
    Y = tuple(_scaled(v, scale) for v in y)
    A0 = tuple(_scaled(v, scale) for v in I.corner)
    E0 = _scaled(I.edge, scale)
    m_num, m_den = float(m).as_integer_ratio()
    m_bits = m_den.bit_length() - 1

    members: list[DyadicCube] = []
    stack: list[tuple[int, tuple[int, ...]]] = [(0, (0,) * I.n)]
    while stack:
        level, idx = stack.pop()
        edge = E0 >> level
        corner = tuple(a + i * edge for a, i in zip(A0, idx))
        if not (
            _point_in_dilated(X, corner, edge, m_num, m_bits)
            and _point_in_dilated(Y, corner, edge, m_num, m_bits)
        ):
            continue
        members.append(DyadicCube(I, level, idx))
        if level < max_level:
            for bits in itertools.product((0, 1), repeat=I.n):
                stack.append((level + 1, tuple(2 * i + b for i, b in zip(idx, bits))))

    return GammaSet(I, x, y, float(m), max_level, frozenset(members))


def allowed_cubes(gamma: GammaSet) -> frozenset[DyadicCube]:
    """Minimal members of the tree set: none of their children qualify.

    Upward closure makes the child test equivalent to the full proper-descendant
    test.  Minimal members of an upward-closed family are pairwise disjoint.
    """
    out = []
    for J in gamma.members:
        if not any(child in gamma for child in J.children()):
            out.append(J)
    return frozenset(out)


def kernel_sum(S, alpha: float, n: int) -> float:
    """Sum of l(J)^(-2*alpha - n) over the cubes in S (order-independent)."""
    if not alpha > -n / 2:
        raise ConfigError(f"divergent tree-sum regime: alpha={alpha} <= -n/2")
    expo = -(2.0 * alpha + n)
    return math.fsum(J.edge**expo for J in S)


@dataclass(frozen=True, eq=False)
class AllowedClassification:
    """Minimal cubes bucketed by the first shell I_k = 2^k I_0 they meet."""

    allowed: frozenset[DyadicCube]
    rings: dict[tuple[int, int], frozenset[DyadicCube]]
    I0: Cube


_RING_CAP = 128


def classify_allowed(
    allowed, x: tuple[float, ...], y: tuple[float, ...], m: float
) -> AllowedClassification:
    """Assign each minimal cube its ring class (k, kind).

    k is the first shell index with J meeting I_k (shells are nested, so this
    also encodes J missing I_0,...,I_(k-1)); kind 1 means J fits inside
    I_(k+1), kind 2 that it sticks out.
    """
    x = tuple(float(c) for c in x)
    y = tuple(float(c) for c in y)
    if x == y:
        raise ConfigError("diagonal point pair: x == y")
    n = len(x)
    edge0 = math.sqrt(n) * math.sqrt(sum((a - b) ** 2 for a, b in zip(x, y)))
    center = tuple((a + b) / 2 for a, b in zip(x, y))
    I0 = Cube(tuple(c - edge0 / 2 for c in center), edge0)

    def shell(k: int) -> Cube:
        e = edge0 * 2.0**k
        return Cube(tuple(c - e / 2 for c in center), e)

    buckets: dict[tuple[int, int], set[DyadicCube]] = {}
    for J in allowed:
        Jc = J.to_cube()
        for k in range(_RING_CAP):
            if Jc.intersects(shell(k)):
                break
        else:
            raise InvariantViolation("allowed cube matched no ring class")
        kind = 1 if Jc.contained_in(shell(k + 1)) else 2
        buckets.setdefault((k, kind), set()).add(J)

    rings = {key: frozenset(val) for key, val in sorted(buckets.items())}
    return AllowedClassification(frozenset(allowed), rings, I0)


@dataclass(frozen=True)
class CountSummary:
    """Per-shell ring counts and the normalized maxima behind the bounds."""

    per_level: dict[int, tuple[int, int]]
    max_kind1_over_mn: float
    max_kind2: int


def count_summary(c: AllowedClassification, m: float, n: int) -> CountSummary:
    per_level: dict[int, tuple[int, int]] = {}
    for (k, kind), cubes in c.rings.items():
        c1, c2 = per_level.get(k, (0, 0))
        if kind == 1:
            c1 += len(cubes)
        else:
            c2 += len(cubes)
        per_level[k] = (c1, c2)
    per_level = dict(sorted(per_level.items()))
    max1 = max((c1 for c1, _ in per_level.values()), default=0)
    max2 = max((c2 for _, c2 in per_level.values()), default=0)
    return CountSummary(per_level, max1 / m**n, max2)


def sample_pairs(
    root: Cube,
    count: int,
    seed: int,
    r_min: float = 4e-3,
    r_max: float = 4e-1,
) -> list[tuple[tuple[float, ...], tuple[float, ...]]]:
    """Point pairs with log-uniform separation: x uniform in the root cube,
    y = x + r*u with uniform direction u, rejected until y lands in the root.
    """
    if not 0 < r_min < r_max:
        raise ConfigError("need 0 < r_min < r_max")
    if r_max > root.edge:
        raise ConfigError("r_max exceeds the root cube edge")
    n = root.n
    rng = np.random.default_rng(seed)
    pairs = []
    while len(pairs) < count:
        x = tuple(c + root.edge * rng.random() for c in root.corner)
        r = math.exp(rng.uniform(math.log(r_min), math.log(r_max)))
        if n == 1:
            u = (1.0 if rng.random() < 0.5 else -1.0,)
        else:
            theta = rng.uniform(0.0, 2.0 * math.pi)
            u = (math.cos(theta), math.sin(theta))
        y = tuple(a + r * b for a, b in zip(x, u))
        if root.contains(y):
            pairs.append((x, y))
    return pairs
