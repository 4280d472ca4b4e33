"""Dynamical systems on compact abelian groups: affine torus maps, affine maps
of finite cyclic groups, and the (non-invertible) circle doubling map.

Point conventions:
  torus    -> numpy float64 array of shape (d,), coordinates in [0, 1)
  finite   -> plain int in range(modulus)
  doubling -> Fraction in [0, 1) (exact dyadic arithmetic) or float

The doubling map needs exact representatives: iterating x -> 2x mod 1 in
float64 collapses to 0 after ~53 steps because each step discards one mantissa
bit.  Sampling therefore draws a dyadic rational with a configurable number of
random bits and steps it exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .intlin import IntMatrix


class NonInvertibleSystemError(ValueError):
    """Raised when a backward orbit is requested from a non-invertible system."""


# bits drawn for a doubling-map sample; covers orbits up to ~8k steps before
# the random tail is exhausted
DEFAULT_DOUBLING_BITS = 8256


def _wrap_unit(x: np.ndarray) -> np.ndarray:
    r = np.mod(x, 1.0)
    # np.mod can round up to exactly 1.0 for tiny negative inputs
    r[r >= 1.0] -= 1.0
    return r


@dataclass(frozen=True)
class TorusAffineSystem:
    """x -> A x + b mod 1 on the d-torus, with A an integer unimodular matrix.

    Shift entries may be Fraction (kept exact for label-group computations) or
    float.  Ergodicity is a caller-supplied assertion; nothing here checks it.
    """

    matrix: IntMatrix
    shift: tuple[Fraction | float, ...]
    ergodic: bool = True

    def __post_init__(self):
        if self.matrix.rows != self.matrix.cols:
            raise ValueError("matrix must be square")
        if not self.matrix.is_unimodular():
            raise ValueError("matrix must be unimodular (|det| = 1)")
        shift = tuple(b if isinstance(b, Fraction) else float(b) for b in self.shift)
        if len(shift) != self.matrix.rows:
            raise ValueError("shift length must match matrix dimension")
        if any(not (0 <= float(b) < 1) for b in shift):
            raise ValueError("shift coordinates must lie in [0, 1)")
        object.__setattr__(self, "shift", shift)

    @property
    def dimension(self) -> int:
        return self.matrix.rows

    @property
    def shift_floats(self) -> np.ndarray:
        return np.array([float(b) for b in self.shift])

    def shift_is_rational(self) -> bool:
        return all(isinstance(b, Fraction) for b in self.shift)


@dataclass(frozen=True)
class FiniteCyclicSystem:
    """x -> a x + b mod p on Z/pZ, restricted to an invariant measure supported
    on a single periodic orbit (uniform on `support`)."""

    modulus: int
    multiplier: int
    offset: int
    support: tuple[int, ...]

    def __post_init__(self):
        p = int(self.modulus)
        if p < 1:
            raise ValueError("modulus must be >= 1")
        a = int(self.multiplier) % p
        b = int(self.offset) % p
        if gcd(a, p) != 1:
            raise ValueError("multiplier must be invertible mod modulus")
        support = tuple(sorted(int(x) % p for x in self.support))
        if not support:
            raise ValueError("support must be nonempty")
        if len(set(support)) != len(support):
            raise ValueError("support has repeated elements")
        cycle = [support[0]]
        x = (a * support[0] + b) % p
        while x != support[0]:
            if len(cycle) > p:
                raise AssertionError("orbit failed to close")
            cycle.append(x)
            x = (a * x + b) % p
        if set(cycle) != set(support):
            raise ValueError("support must be a single orbit of the map")
        object.__setattr__(self, "modulus", p)
        object.__setattr__(self, "multiplier", a)
        object.__setattr__(self, "offset", b)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "_cycle", tuple(cycle))

    _cycle: tuple[int, ...] = field(default=(), compare=False, repr=False)

    @property
    def orbit_cycle(self) -> tuple[int, ...]:
        """The support listed in orbit order, starting from its smallest element."""
        return self._cycle

    @property
    def period(self) -> int:
        return len(self.support)


@dataclass(frozen=True)
class CircleDoublingSystem:
    """x -> 2x mod 1 on the circle, with Lebesgue measure.  Not invertible."""


System = TorusAffineSystem | FiniteCyclicSystem | CircleDoublingSystem


@dataclass
class OrbitSample:
    """A finite stretch of an orbit: points[k] = T^k(base) for forward
    direction, T^{-k}(base) for backward."""

    system: System
    base: object
    points: list
    direction: str = "forward"

    def __len__(self) -> int:
        return len(self.points)


def step(system: System, point):
    """Apply the map once."""
    if isinstance(system, TorusAffineSystem):
        a = np.array(system.matrix.entries, dtype=np.float64)
        return _wrap_unit(a @ np.asarray(point, dtype=np.float64) + system.shift_floats)
    if isinstance(system, FiniteCyclicSystem):
        return (system.multiplier * int(point) + system.offset) % system.modulus
    if isinstance(system, CircleDoublingSystem):
        if isinstance(point, Fraction):
            return (2 * point) % 1
        return (2.0 * float(point)) % 1.0
    raise TypeError(f"unknown system type: {type(system).__name__}")


def inverse_step(system: System, point):
    """Apply the inverse map once; doubling has none."""
    if isinstance(system, TorusAffineSystem):
        inv = np.array(system.matrix.inverse_unimodular().entries, dtype=np.float64)
        return _wrap_unit(inv @ (np.asarray(point, dtype=np.float64) - system.shift_floats))
    if isinstance(system, FiniteCyclicSystem):
        p = system.modulus
        a_inv = pow(system.multiplier, -1, p)
        return (a_inv * (int(point) - system.offset)) % p
    if isinstance(system, CircleDoublingSystem):
        raise NonInvertibleSystemError(
            "the doubling map is 2-to-1; backward orbits do not exist "
            "(use half-line truncations)"
        )
    raise TypeError(f"unknown system type: {type(system).__name__}")


def orbit(system: System, point, n: int, direction: str = "forward") -> OrbitSample:
    """n consecutive points starting at `point` (inclusive)."""
    if n < 1:
        raise ValueError("orbit length must be >= 1")
    if direction not in ("forward", "backward"):
        raise ValueError("direction must be 'forward' or 'backward'")
    advance = step if direction == "forward" else inverse_step
    pts = [point]
    for _ in range(n - 1):
        pts.append(advance(system, pts[-1]))
    return OrbitSample(system=system, base=point, points=pts, direction=direction)


def window_orbit(system: System, point, start: int, length: int) -> list:
    """Points T^{start}(point), ..., T^{start+length-1}(point)."""
    if length < 1:
        raise ValueError("window length must be >= 1")
    current = point
    if start >= 0:
        for _ in range(start):
            current = step(system, current)
    else:
        for _ in range(-start):
            current = inverse_step(system, current)
    return orbit(system, current, length).points


def sample_ergodic(system: System, seed, bits: int = DEFAULT_DOUBLING_BITS):
    """Draw a point from the invariant measure (Haar / uniform-on-orbit).

    `seed` may be an int, None, or a numpy Generator (reused across calls for
    independent samples).  For the doubling map the sample is an exact dyadic
    Fraction carrying `bits` random bits, so orbits of up to roughly that many
    steps remain faithful to Lebesgue sampling.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if isinstance(system, TorusAffineSystem):
        return rng.random(system.dimension)
    if isinstance(system, FiniteCyclicSystem):
        return int(rng.choice(system.support))
    if isinstance(system, CircleDoublingSystem):
        numerator = 0
        remaining = bits
        while remaining > 0:
            chunk = min(remaining, 62)
            numerator = (numerator << chunk) | int(rng.integers(0, 1 << chunk))
            remaining -= chunk
        return Fraction(numerator, 1 << bits)
    raise TypeError(f"unknown system type: {type(system).__name__}")
