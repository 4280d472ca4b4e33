"""Winding-rate groups of suspension flows over affine systems.

For an affine map T(x) = Ax + b of a compact abelian group, the asymptotic
winding rates of circle-valued observables on the suspension form a countable
subgroup of R.  It is generated by 1 together with the values chi(b) over the
characters chi fixed by the dual automorphism, lifted to the reals:

  torus T^d:    fixed characters = integer kernel of (A^T - I); group
                Z + sum_i Z * (m_i . b  mod 1)
  Z/pZ, uniform measure on a q-point orbit:  (1/q) Z
  dyadic solenoid:  the dual group Z[1/2] has no nonzero fixed character,
                so the group is Z

The (1/q)Z answer and the character formula genuinely disagree on finite
groups (the orbit group can be strictly larger), which is what the Jacobi
counterexample pipeline demonstrates; both computations live here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .intlin import IntMatrix, LatticeBasis, integer_kernel
from .systems import (
    CircleDoublingSystem,
    FiniteCyclicSystem,
    NonInvertibleSystemError,
    System,
    TorusAffineSystem,
    orbit,
)


@dataclass(frozen=True)
class TorusCharacter:
    """chi_m(x) = m . x mod 1 for an integer vector m."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(c) for c in self.coefficients))

    def value_at(self, point) -> float:
        return float(np.dot(self.coefficients, np.asarray(point, dtype=np.float64)) % 1.0)

    def value_at_exact(self, point: tuple[Fraction, ...]) -> Fraction:
        return sum((c * x for c, x in zip(self.coefficients, point)), Fraction(0)) % 1

    @property
    def is_zero(self) -> bool:
        return not any(self.coefficients)


@dataclass(frozen=True)
class FiniteCharacter:
    """chi_m(x) = m x / p mod 1 on Z/pZ."""

    residue: int
    modulus: int

    def __post_init__(self):
        p = int(self.modulus)
        if p < 1:
            raise ValueError("modulus must be >= 1")
        object.__setattr__(self, "modulus", p)
        object.__setattr__(self, "residue", int(self.residue) % p)

    def value_at(self, point) -> float:
        return float(self.value_at_exact(point))

    def value_at_exact(self, point) -> Fraction:
        return Fraction(self.residue * int(point), self.modulus) % 1

    @property
    def is_zero(self) -> bool:
        return self.residue == 0


CharacterVector = TorusCharacter | FiniteCharacter


@dataclass(frozen=True)
class GeneratorProvenance:
    """Which fixed character produced a generator, and the value chi(b)."""

    character: CharacterVector | None
    value: float
    exact: Fraction | None = None
    note: str = ""

    def to_json_dict(self) -> dict:
        if isinstance(self.character, TorusCharacter):
            char: object = list(self.character.coefficients)
        elif isinstance(self.character, FiniteCharacter):
            char = {"residue": self.character.residue, "modulus": self.character.modulus}
        else:
            char = None
        return {
            "character": char,
            "value": self.value,
            "exact": str(self.exact) if self.exact is not None else None,
            "note": self.note,
        }


@dataclass(frozen=True)
class MembershipVerdict:
    status: str  # "member" | "non_member" | "inconclusive"
    distance: float
    witness_value: float | None = None
    unit_multiple: int | None = None
    generator_coefficients: tuple[int, ...] | None = None

    @property
    def is_member(self) -> bool:
        return self.status == "member"

    def to_json_dict(self) -> dict:
        return {
            "status": self.status,
            "distance": self.distance,
            "witness_value": self.witness_value,
            "unit_multiple": self.unit_multiple,
            "generator_coefficients": (
                list(self.generator_coefficients)
                if self.generator_coefficients is not None
                else None
            ),
        }


def _rational_unit(values: list[Fraction]) -> Fraction:
    """Generator of the subgroup of Q generated by the values (all in (0,1])
    together with 1."""
    den = lcm(*(v.denominator for v in values), 1)
    num = gcd(*(int(v * den) for v in values), den)
    return Fraction(num, den)


@dataclass(frozen=True)
class LabelGroup:
    """Countable subgroup of R of the form (1/Q) Z + sum_i Z g_i.

    `rational_unit` is 1/Q; `irrational_generators` are the g_i (floats,
    treated as real numbers with no assumed rational relations).  Always
    contains Z.
    """

    rational_unit: Fraction
    irrational_generators: tuple[float, ...]
    provenance: tuple[GeneratorProvenance, ...]

    def __post_init__(self):
        if not (0 < self.rational_unit <= 1):
            raise ValueError("rational unit must lie in (0, 1]")
        if Fraction(1) % self.rational_unit != 0:
            raise ValueError("rational part must contain Z")

    @property
    def rational_collapse(self) -> int | None:
        """Q when the group is exactly (1/Q) Z, else None."""
        if self.irrational_generators:
            return None
        return self.rational_unit.denominator

    def describe(self) -> str:
        q = self.rational_unit.denominator
        base = "Z" if q == 1 else f"(1/{q})Z"
        if not self.irrational_generators:
            return base
        tail = " + ".join(f"Z*{g:.10g}" for g in self.irrational_generators)
        return f"{base} + {tail}"

    def contains(self, value: float, tol: float = 1e-9, coeff_bound: int = 10) -> MembershipVerdict:
        return contains(self, value, tol=tol, coeff_bound=coeff_bound)

    def to_json_dict(self) -> dict:
        return {
            "rational_collapse": self.rational_collapse,
            "rational_unit": str(self.rational_unit),
            "generators": [str(self.rational_unit)]
            + [repr(g) for g in self.irrational_generators],
            "description": self.describe(),
            "provenance": [p.to_json_dict() for p in self.provenance],
        }


def contains(group: LabelGroup, value: float, tol: float = 1e-9,
             coeff_bound: int = 10) -> MembershipVerdict:
    """Decide membership of `value` in the group up to tolerance.

    Searches integer coefficients |c_i| <= coeff_bound on the irrational
    generators; the rational part is then matched by rounding.  Discrete
    groups (no irrational generators) admit a genuine non-member verdict;
    dense ones only ever return member or inconclusive, since a failed
    bounded search proves nothing.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    x = float(value)
    q = group.rational_unit
    gens = group.irrational_generators
    best: tuple[float, int, tuple[int, ...], float] | None = None
    for coeffs in itertools.product(range(-coeff_bound, coeff_bound + 1), repeat=len(gens)):
        residual = x - sum(c * g for c, g in zip(coeffs, gens))
        k = round(residual / q)
        dist = abs(residual - k * float(q))
        l1 = sum(abs(c) for c in coeffs)
        if best is None or (dist, l1, coeffs) < (best[0], best[3], best[2]):
            best = (dist, k, coeffs, l1)
    dist, k, coeffs, _ = best
    witness = k * float(q) + sum(c * g for c, g in zip(coeffs, gens))
    if dist <= tol:
        return MembershipVerdict(
            status="member",
            distance=dist,
            witness_value=witness,
            unit_multiple=k,
            generator_coefficients=coeffs,
        )
    if not gens:
        return MembershipVerdict(status="non_member", distance=dist,
                                 witness_value=witness, unit_multiple=k,
                                 generator_coefficients=())
    return MembershipVerdict(status="inconclusive", distance=dist,
                             witness_value=witness, unit_multiple=k,
                             generator_coefficients=coeffs)


def fixed_character_lattice(system: TorusAffineSystem) -> LatticeBasis:
    """Integer vectors m with A^T m = m: the characters fixed by the dual map."""
    a_t = system.matrix.transpose()
    return integer_kernel(a_t - IntMatrix.identity(system.dimension))


def _group_from_characters(system: TorusAffineSystem, vectors) -> LabelGroup:
    provenance = [GeneratorProvenance(character=None, value=1.0,
                                      exact=Fraction(1), note="unit generator")]
    rational = [Fraction(1)]
    irrational: list[float] = []
    exact_shift = system.shift_is_rational()
    for m in vectors:
        char = TorusCharacter(tuple(m))
        if exact_shift:
            val = char.value_at_exact(tuple(system.shift))
            provenance.append(GeneratorProvenance(character=char, value=float(val), exact=val))
            if val != 0:
                rational.append(val)
        else:
            val = float(np.dot(m, system.shift_floats) % 1.0)
            provenance.append(GeneratorProvenance(character=char, value=val))
            if val != 0.0:
                irrational.append(val)
    return LabelGroup(
        rational_unit=_rational_unit(rational),
        irrational_generators=tuple(irrational),
        provenance=tuple(provenance),
    )


def label_group(system: TorusAffineSystem) -> LabelGroup:
    """Winding-rate group of the suspension of an affine torus map."""
    basis = fixed_character_lattice(system)
    return _group_from_characters(system, basis.vectors)


def finite_label_group(system: FiniteCyclicSystem) -> LabelGroup:
    """Winding-rate group for a finite cyclic system: (1/q) Z with q the
    orbit length carrying the invariant measure."""
    q = system.period
    prov = (
        GeneratorProvenance(character=None, value=1.0, exact=Fraction(1),
                            note="unit generator"),
        GeneratorProvenance(character=None, value=float(Fraction(1, q)),
                            exact=Fraction(1, q),
                            note=f"one loop around the supporting orbit of size {q}"),
    )
    return LabelGroup(rational_unit=Fraction(1, q), irrational_generators=(),
                      provenance=prov)


def finite_rhs_group(modulus: int, multiplier: int, offset: int) -> LabelGroup:
    """The fixed-character formula evaluated verbatim on Z/pZ: the group
    generated by 1 and chi_m(b) = m b / p over residues m with a m = m mod p.

    On finite groups this can be a proper subgroup of the true winding-rate
    group, which is the point of the counterexample configuration.
    """
    p = int(modulus)
    if p < 1:
        raise ValueError("modulus must be >= 1")
    a = int(multiplier) % p
    b = int(offset) % p
    if gcd(a, p) != 1:
        raise ValueError("multiplier must be invertible mod modulus")
    provenance = [GeneratorProvenance(character=None, value=1.0,
                                      exact=Fraction(1), note="unit generator")]
    rational = [Fraction(1)]
    for m in range(p):
        if (a * m - m) % p != 0:
            continue
        char = FiniteCharacter(residue=m, modulus=p)
        val = char.value_at_exact(b)
        provenance.append(GeneratorProvenance(character=char, value=float(val), exact=val))
        if val != 0:
            rational.append(val)
    return LabelGroup(rational_unit=_rational_unit(rational),
                      irrational_generators=(), provenance=tuple(provenance))


def solenoid_fixed_dual() -> LatticeBasis:
    """Fixed characters of the dual of the doubling automorphism on the dyadic
    solenoid.  The dual group is Z[1/2] with the doubling action a -> 2a, and
    2a = a forces a = 0, so the lattice of nonzero fixed characters is empty."""
    return LatticeBasis(dimension=1, vectors=())


def dyadic_fixed_character_sweep(numerator_bound: int = 64,
                                 exponent_bound: int = 6) -> list[Fraction]:
    """Exhaustively check candidates a = k / 2^n in Z[1/2] for 2a = a,
    returning the fixed ones.  Exact rational arithmetic throughout."""
    fixed = set()
    for n in range(exponent_bound + 1):
        for k in range(-numerator_bound, numerator_bound + 1):
            a = Fraction(k, 2 ** n)
            if 2 * a == a:
                fixed.add(a)
    return sorted(fixed)


def solenoid_label_group() -> LabelGroup:
    """Winding-rate group of the suspension of solenoid doubling: Z."""
    prov = (GeneratorProvenance(character=None, value=1.0, exact=Fraction(1),
                                note="unit generator; no nonzero fixed character exists"),)
    return LabelGroup(rational_unit=Fraction(1), irrational_generators=(),
                      provenance=prov)


def group_for_system(system: System) -> LabelGroup:
    """The predicted winding-rate group for any supported system."""
    if isinstance(system, TorusAffineSystem):
        return label_group(system)
    if isinstance(system, FiniteCyclicSystem):
        return finite_label_group(system)
    if isinstance(system, CircleDoublingSystem):
        return solenoid_label_group()
    raise TypeError(f"unknown system type: {type(system).__name__}")


@dataclass(frozen=True)
class SuspensionObservable:
    """Observable [x, s] -> chi(x) + beta * s mod 1 on the suspension.

    Well-definedness requires beta = chi(b) mod 1; `validate_against` checks
    this against a concrete system.  `winding_offset` is the integer choice in
    that congruence class when built through `suspension_observable`.
    """

    character: CharacterVector | None
    winding: float

    def phase(self, point, s: float) -> float:
        base = 0.0 if self.character is None else self.character.value_at(point)
        return (base + self.winding * s) % 1.0

    def character_value(self, system: System) -> float:
        if self.character is None or self.character.is_zero:
            return 0.0
        if isinstance(system, TorusAffineSystem):
            if not isinstance(self.character, TorusCharacter):
                raise TypeError("torus system needs a torus character")
            return float(np.dot(self.character.coefficients, system.shift_floats) % 1.0)
        if isinstance(system, FiniteCyclicSystem):
            if not isinstance(self.character, FiniteCharacter):
                raise TypeError("finite system needs a finite character")
            if self.character.modulus != system.modulus:
                raise ValueError("character modulus does not match system modulus")
            return self.character.value_at(system.offset)
        raise TypeError(f"unsupported system type: {type(system).__name__}")

    def validate_against(self, system: System, tol: float = 1e-9) -> None:
        """Raise unless winding = chi(b) mod 1 (the well-definedness condition)
        and, for torus systems, the character is fixed by the dual map."""
        if isinstance(system, TorusAffineSystem) and isinstance(self.character, TorusCharacter):
            m = self.character.coefficients
            if system.matrix.transpose().apply(m) != m:
                raise ValueError("character is not fixed by the dual map")
        if isinstance(system, FiniteCyclicSystem) and isinstance(self.character, FiniteCharacter):
            p, a, m = system.modulus, system.multiplier, self.character.residue
            if (a * m - m) % p != 0:
                raise ValueError("character is not fixed by the dual map")
        frac = (self.winding - self.character_value(system)) % 1.0
        if min(frac, 1.0 - frac) > tol:
            raise ValueError(
                f"winding {self.winding} is not congruent to chi(b) mod 1; "
                "the observable does not descend to the suspension"
            )


def suspension_observable(system: System, character: CharacterVector | None,
                          offset: int = 0) -> SuspensionObservable:
    """Build the observable with beta = chi(b) + offset (offset picks the
    integer representative in the admissible congruence class)."""
    obs = SuspensionObservable(character=character, winding=0.0)
    beta = obs.character_value(system) + int(offset)
    return SuspensionObservable(character=character, winding=beta)


@dataclass(frozen=True)
class OrbitWindingObservable:
    """Finite-system observable winding `loops` times around the circle per
    traversal of the supporting orbit: [x_i, s] -> (i + s) * loops / q mod 1."""

    cycle: tuple[int, ...]
    loops: int = 1

    def phase(self, point, s: float) -> float:
        i = self.cycle.index(int(point))
        return ((i + s) * self.loops / len(self.cycle)) % 1.0


class PhaseUnwrapError(RuntimeError):
    """A phase jump of at least 1/2 between samples: dt is too coarse."""


def schwartzman_estimate(system: System, observable, point,
                         t_max: float = 1000.0, dt: float = 0.01) -> float:
    """Numerical winding rate of a circle-valued observable along the
    suspension flow line over `point`.

    Samples the phase on the grid t = k*dt, unwraps jumps to (-1/2, 1/2], and
    returns (total unwrapped change) / elapsed.  Exact up to accumulated float
    rounding when the observable has an affine lift in t.
    """
    if isinstance(system, CircleDoublingSystem):
        raise NonInvertibleSystemError(
            "winding rates need an invertible base system; the doubling map "
            "only enters through half-line operators"
        )
    if dt <= 0 or t_max < dt:
        raise ValueError("need dt > 0 and t_max >= dt")
    if isinstance(observable, SuspensionObservable):
        observable.validate_against(system)

    n_steps = int(round(t_max / dt))
    t = np.arange(n_steps + 1) * dt
    n = np.floor(t).astype(np.int64)
    s = t - n
    pts = orbit(system, point, int(n[-1]) + 1).points

    if isinstance(observable, SuspensionObservable):
        if observable.character is None:
            base = np.zeros(len(pts))
        else:
            base = np.array([observable.character.value_at(p) for p in pts])
        phases = (base[n] + observable.winding * s) % 1.0
    elif isinstance(observable, OrbitWindingObservable):
        idx = np.array([observable.cycle.index(int(p)) for p in pts], dtype=np.float64)
        phases = ((idx[n] + s) * observable.loops / len(observable.cycle)) % 1.0
    else:
        phases = np.array([observable.phase(pts[int(k)], float(sk))
                           for k, sk in zip(n, s)])

    delta = np.diff(phases)
    wrapped = delta - np.rint(delta)
    worst = float(np.max(np.abs(wrapped))) if len(wrapped) else 0.0
    if worst >= 0.5:
        raise PhaseUnwrapError(
            f"phase jump of {worst:.3f} >= 1/2 between consecutive samples; "
            "reduce dt"
        )
    return float(np.sum(wrapped) / (n_steps * dt))
