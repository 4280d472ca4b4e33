"""Three realizations of the dyadic solenoid with its doubling automorphism,
plus the conjugacies between them.

  S1: pairs (r, z) with r in [0,1) and z a 2-adic integer, glued along
      (r + a, z - a) for integer a.  Doubling acts by (2r, 2z).
  S2: inverse-limit coordinates (x_0, x_1, ...) with x_n in [0, 2^n) and
      x_{n+1} = x_n mod 2^n;  doubling multiplies every level by 2.
  S3: an attractor in [0,1) x R^2: angle together with a contracted planar
      trace of the backward angle history.

Angles and level coordinates are exact dyadic Fractions.  That is load
bearing twice over: the level-n coordinate scales errors by 2^n, and float
angles lose one bit per doubling, so nothing short of exact arithmetic
survives the 100-step conjugacy checks.  2-adic digits are plain integers
reduced mod 2^width.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import cos, pi, sin

import numpy as np

DEFAULT_WIDTH = 64
DEFAULT_HISTORY = 40
DEFAULT_CONTRACTION = 0.25


@dataclass(frozen=True)
class Dyadic:
    """2-adic integer truncated to `width` binary digits."""

    value: int
    width: int = DEFAULT_WIDTH

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("width must be >= 1")
        object.__setattr__(self, "value", int(self.value) % (1 << self.width))

    def __add__(self, other) -> "Dyadic":
        o = other.value if isinstance(other, Dyadic) else int(other)
        return Dyadic(self.value + o, self.width)

    __radd__ = __add__

    def __sub__(self, other) -> "Dyadic":
        o = other.value if isinstance(other, Dyadic) else int(other)
        return Dyadic(self.value - o, self.width)

    def double(self) -> "Dyadic":
        return Dyadic(2 * self.value, self.width)

    def digit(self, j: int) -> int:
        if not 0 <= j < self.width:
            raise IndexError("digit index out of range")
        return (self.value >> j) & 1

    def residue(self, n: int) -> int:
        """The digits below level n, i.e. value mod 2^n."""
        if n > self.width:
            raise ValueError("residue level exceeds the stored width")
        return self.value % (1 << n)


@dataclass(frozen=True)
class SolPointS1:
    """Glued-product representative: angle in [0,1) (exact dyadic Fraction)
    and 2-adic digit part."""

    angle: Fraction
    digits: Dyadic

    def __post_init__(self):
        a = Fraction(self.angle)
        if not 0 <= a < 1:
            raise ValueError("angle must lie in [0, 1); use from_pair to renormalize")
        object.__setattr__(self, "angle", a)

    @classmethod
    def from_pair(cls, r, z: Dyadic) -> "SolPointS1":
        """Canonicalize an arbitrary representative (r, z) ~ (r - a, z + a)."""
        r = Fraction(r)
        a = r.__floor__()
        return cls(angle=r - a, digits=z + a)

    @property
    def angle_float(self) -> float:
        return float(self.angle)


@dataclass(frozen=True)
class SolPointS2:
    """Inverse-limit coordinates: coords[n] in [0, 2^n), compatible under
    reduction mod 2^n."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        if not coords:
            raise ValueError("need at least the level-0 coordinate")
        for n, c in enumerate(coords):
            if not 0 <= c < (1 << n):
                raise ValueError(f"level-{n} coordinate out of [0, 2^{n})")
        object.__setattr__(self, "coords", coords)

    @property
    def levels(self) -> int:
        return len(self.coords) - 1

    def compatibility_defect(self) -> Fraction:
        """max_n | x_{n+1} mod 2^n  -  x_n |; zero for a genuine inverse-limit
        point."""
        worst = Fraction(0)
        for n in range(self.levels):
            d = abs(self.coords[n + 1] % (1 << n) - self.coords[n])
            worst = max(worst, d)
        return worst


@dataclass(frozen=True)
class SolPointS3:
    """Attractor realization: angles[k] is the angle k steps into the past
    (angles[0] is the current one), each halving the next under doubling.
    The planar fiber is the contracted trace of that history."""

    angles: tuple[Fraction, ...]
    contraction: float = DEFAULT_CONTRACTION

    def __post_init__(self):
        if not 0 < self.contraction < 0.5:
            raise ValueError("contraction must lie in (0, 1/2)")
        angles = tuple(Fraction(a) % 1 for a in self.angles)
        if len(angles) < 2:
            raise ValueError("need at least one step of angle history")
        for k in range(len(angles) - 1):
            if (2 * angles[k + 1] - angles[k]) % 1 != 0:
                raise ValueError(f"angle history breaks at step {k}: "
                                 "each entry must double to its predecessor")
        object.__setattr__(self, "angles", angles)

    @property
    def history(self) -> int:
        return len(self.angles) - 1

    @property
    def fiber(self) -> tuple[float, float]:
        lam = self.contraction
        x = y = 0.0
        w = 1.0
        for k in range(1, len(self.angles)):
            a = 2.0 * pi * float(self.angles[k])
            x += w * 0.5 * cos(a)
            y += w * 0.5 * sin(a)
            w *= lam
        return (x, y)

    def fiber_truncation_error(self) -> float:
        """Distance bound between `fiber` and the exact attractor point with
        the same infinite history."""
        lam = self.contraction
        return lam ** self.history / (2.0 * (1.0 - lam))


SolenoidPoint = SolPointS1 | SolPointS2 | SolPointS3


def double(point: SolenoidPoint) -> SolenoidPoint:
    """The doubling automorphism in whichever realization the point uses."""
    if isinstance(point, SolPointS1):
        return SolPointS1.from_pair(2 * point.angle, point.digits.double())
    if isinstance(point, SolPointS2):
        return SolPointS2(tuple((2 * c) % (1 << n) for n, c in enumerate(point.coords)))
    if isinstance(point, SolPointS3):
        new = (2 * point.angles[0]) % 1
        return SolPointS3(angles=(new,) + point.angles[:-1],
                          contraction=point.contraction)
    raise TypeError(f"not a solenoid point: {type(point).__name__}")


def halve(point: SolPointS3) -> SolPointS3:
    """Inverse doubling on the attractor realization: shift one step into the
    past.  Loses the oldest stored angle, so the history shortens by one."""
    if point.history < 2:
        raise ValueError("history exhausted; sample with a longer history")
    return SolPointS3(angles=point.angles[1:], contraction=point.contraction)


def conj_g(r, z: Dyadic, levels: int | None = None) -> SolPointS2:
    """Glued product -> inverse limit: level n gets (r + (z mod 2^n)) mod 2^n.

    Accepts r as Fraction (or anything Fraction() takes) so that equivalent
    representatives (r + a, z - a) can be checked to map identically; a float
    r + a would round."""
    r = Fraction(r)
    if levels is None:
        levels = z.width
    if levels > z.width:
        raise ValueError("requested more levels than stored 2-adic digits")
    return SolPointS2(tuple((r + z.residue(n)) % (1 << n) for n in range(levels + 1)))


def conj_h(point: SolPointS3, levels: int | None = None) -> SolPointS2:
    """Attractor -> inverse limit: level n reads the angle n steps back,
    rescaled to [0, 2^n)."""
    if levels is None:
        levels = point.history
    if levels > point.history:
        raise ValueError("requested more levels than stored angle history")
    return SolPointS2(tuple(((1 << n) * point.angles[n]) % (1 << n)
                            for n in range(levels + 1)))


def sample_solenoid(seed, width: int = DEFAULT_WIDTH, history: int = DEFAULT_HISTORY,
                    contraction: float = DEFAULT_CONTRACTION,
                    angle_bits: int = 192) -> tuple[SolPointS1, SolPointS2, SolPointS3]:
    """Draw one Haar sample and return the same point in all three
    realizations (S2 and S3 via the conjugacies, kept mutually consistent).

    The angle carries `angle_bits` random bits so that around that many
    forward doublings stay nondegenerate."""
    if history > width:
        raise ValueError("history cannot exceed the 2-adic width")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    num = 0
    remaining = angle_bits
    while remaining > 0:
        chunk = min(remaining, 62)
        num = (num << chunk) | int(rng.integers(0, 1 << chunk))
        remaining -= chunk
    r = Fraction(num, 1 << angle_bits)
    zval = 0
    remaining = width
    while remaining > 0:
        chunk = min(remaining, 62)
        zval = (zval << chunk) | int(rng.integers(0, 1 << chunk))
        remaining -= chunk
    z = Dyadic(zval, width)
    p1 = SolPointS1(angle=r, digits=z)
    p2 = conj_g(r, z)
    angles = tuple((r + z.residue(k)) / (1 << k) % 1 for k in range(history + 1))
    p3 = SolPointS3(angles=angles, contraction=contraction)
    return p1, p2, p3
