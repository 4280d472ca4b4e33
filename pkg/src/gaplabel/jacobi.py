"""Finite truncations of ergodic Jacobi operators, eigenvalue counting, the
integrated density of states, and gap labelling.

The operator acts on l^2 as

  (J psi)(n) = conj(p(T^{n-1} x)) psi(n-1) + q(T^n x) psi(n) + p(T^n x) psi(n+1)

with q real and p complex along an orbit of the base system.  A diagonal
gauge transform replaces p by |p| without moving any eigenvalue, so
truncations store |p| and stay real symmetric.  Eigenvalue counts come from
the Sturm sequence of the shifted LDL^T factorization; counting is exact in
the <= sense, and all-eigenvalue extraction is bisection on the counts, which
is what keeps N ~ 4096 truncations cheap.

Gap labels are IDS values on spectral gaps.  For a truncation the IDS at an
interior gap between eigenvalues j and j+1 is (j+1)/N; the labels of true
spectral gaps must land in the winding-rate group of the base system, and
`connectedness_scan` hunts for stable violations across a size schedule.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable

import numpy as np
from numba import njit

from .schwartzman import LabelGroup, MembershipVerdict, contains, group_for_system
from .systems import (
    CircleDoublingSystem,
    NonInvertibleSystemError,
    System,
    orbit,
    sample_ergodic,
    window_orbit,
)

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class TrigPolynomial:
    """Finite sum of characters: point -> sum_k c_k exp(2 pi i m_k . point).

    Points may be torus arrays, circle floats, or exact Fractions; harmonics
    must match the point dimension.
    """

    terms: tuple[tuple[tuple[int, ...], complex], ...]

    def __post_init__(self):
        norm = []
        for harmonics, coeff in self.terms:
            if isinstance(harmonics, int):
                harmonics = (harmonics,)
            norm.append((tuple(int(m) for m in harmonics), complex(coeff)))
        object.__setattr__(self, "terms", tuple(norm))

    @classmethod
    def constant(cls, value: complex) -> "TrigPolynomial":
        return cls((((0,), complex(value)),))

    @classmethod
    def cosine(cls, amplitude: float, harmonics) -> "TrigPolynomial":
        """amplitude * cos(2 pi m . point), as a conjugate-symmetric pair."""
        if isinstance(harmonics, int):
            harmonics = (harmonics,)
        m = tuple(int(h) for h in harmonics)
        neg = tuple(-h for h in m)
        half = complex(amplitude) / 2.0
        return cls(((m, half), (neg, half)))

    @classmethod
    def character(cls, harmonics) -> "TrigPolynomial":
        """exp(2 pi i m . point): unimodular, exercises the gauge reduction."""
        if isinstance(harmonics, int):
            harmonics = (harmonics,)
        return cls(((tuple(int(h) for h in harmonics), 1.0 + 0.0j),))

    def __call__(self, point) -> complex:
        if isinstance(point, Fraction):
            coords = np.array([float(point)])
        else:
            coords = np.atleast_1d(np.asarray(point, dtype=np.float64))
        total = 0.0 + 0.0j
        for harmonics, coeff in self.terms:
            if not any(harmonics):
                total += coeff
                continue
            if len(harmonics) != coords.size:
                raise ValueError("harmonic length does not match point dimension")
            total += coeff * np.exp(2j * np.pi * float(np.dot(harmonics, coords)))
        return total


@dataclass(frozen=True)
class TableObservable:
    """Lookup table on a finite cyclic system's residues."""

    values: tuple[tuple[int, complex], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "values",
            tuple(sorted((int(k), complex(v)) for k, v in dict(self.values).items())),
        )

    def __call__(self, point) -> complex:
        key = int(point)
        for k, v in self.values:
            if k == key:
                return v
        raise ValueError(f"residue {key} missing from coefficient table")


Observable = TrigPolynomial | TableObservable | Callable[[object], complex]


def evaluate_observable(obs: Observable, point) -> complex:
    return complex(obs(point))


@dataclass(frozen=True)
class CoefficientSpec:
    """Sampling functions for the Jacobi coefficients: q (diagonal, must be
    real-valued) and p (off-diagonal, complex allowed, zeros allowed)."""

    diagonal: Observable
    offdiagonal: Observable


@dataclass
class JacobiTruncation:
    """Finite section of the operator along one orbit stretch.

    `offdiagonal` holds |p| (the gauge-reduced couplings); `offdiagonal_raw`
    keeps the sampled complex values for gauge checks.
    """

    diagonal: np.ndarray
    offdiagonal: np.ndarray
    offdiagonal_raw: np.ndarray
    boundary: str
    start: int

    def __post_init__(self):
        self.diagonal = np.asarray(self.diagonal, dtype=np.float64)
        self.offdiagonal = np.asarray(self.offdiagonal, dtype=np.float64)
        if self.diagonal.ndim != 1 or self.diagonal.size < 1:
            raise ValueError("diagonal must be a nonempty 1-d array")
        if self.offdiagonal.shape != (self.diagonal.size - 1,):
            raise ValueError("offdiagonal must have length N - 1")
        if np.any(self.offdiagonal < 0):
            raise ValueError("gauge-reduced couplings must be nonnegative")

    @property
    def size(self) -> int:
        return int(self.diagonal.size)


def build_truncation(system: System, spec: CoefficientSpec, point, size: int,
                     boundary: str | None = None) -> JacobiTruncation:
    """Sample the coefficients along the orbit of `point`.

    boundary "window" centers the index range on 0 (needs an invertible
    system); "half_line" uses indices 0..N-1 and is forced for the doubling
    map.  Doubling-map points must carry enough dyadic precision for the
    whole orbit; floats do not, so they are rejected for all but tiny sizes.
    """
    if size < 1:
        raise ValueError("size must be >= 1")
    doubling = isinstance(system, CircleDoublingSystem)
    if boundary is None:
        boundary = "half_line" if doubling else "window"
    if boundary not in ("window", "half_line"):
        raise ValueError("boundary must be 'window' or 'half_line'")
    if doubling and boundary == "window":
        raise NonInvertibleSystemError(
            "the doubling map has no backward orbit; use boundary='half_line'"
        )
    if doubling:
        frac = point if isinstance(point, Fraction) else Fraction(float(point))
        den = frac.denominator
        if den & (den - 1) == 0:  # dyadic: the random tail must outlast the orbit
            if den.bit_length() - 1 < size + 52:
                raise ValueError(
                    "point has too few dyadic bits for this orbit length; "
                    "draw it with sample_ergodic(system, seed, bits >= size + 52)"
                )
        point = frac
    if boundary == "window":
        start = -(size // 2)
        pts = window_orbit(system, point, start, size)
    else:
        start = 0
        pts = orbit(system, point, size).points

    diag = np.empty(size, dtype=np.float64)
    for i, pt in enumerate(pts):
        v = evaluate_observable(spec.diagonal, pt)
        if abs(v.imag) > 1e-9:
            raise ValueError(f"diagonal coefficient is not real at index {i}: {v}")
        diag[i] = v.real
    raw = np.array([evaluate_observable(spec.offdiagonal, pt) for pt in pts[:-1]],
                   dtype=np.complex128)
    return JacobiTruncation(diagonal=diag, offdiagonal=np.abs(raw),
                            offdiagonal_raw=raw, boundary=boundary, start=start)


@njit(cache=True)
def _sturm_counts(diag, offsq, energies, pivmin):  # pragma: no cover - jitted
    n = diag.shape[0]
    out = np.empty(energies.shape[0], dtype=np.int64)
    for j in range(energies.shape[0]):
        e = energies[j]
        count = 0
        d = diag[0] - e
        if d == 0.0:
            d = -pivmin
        if d < 0.0:
            count += 1
        for i in range(1, n):
            if offsq[i - 1] == 0.0:
                # zero coupling: the matrix splits into independent blocks
                d = diag[i] - e
            else:
                d = diag[i] - e - offsq[i - 1] / d
            if d == 0.0:
                d = -pivmin
            if d < 0.0:
                count += 1
        out[j] = count
    return out


def _pivmin(offsq: np.ndarray) -> float:
    scale = float(offsq.max()) if offsq.size else 0.0
    return 1e-300 * max(scale, 1.0)


def eig_counts(trunc: JacobiTruncation, energies) -> np.ndarray:
    """Number of eigenvalues <= E for each E, by Sturm sequence counting."""
    energies = np.atleast_1d(np.asarray(energies, dtype=np.float64))
    offsq = trunc.offdiagonal ** 2
    return _sturm_counts(trunc.diagonal, offsq, energies, _pivmin(offsq))


def eig_count_leq(trunc: JacobiTruncation, energy: float) -> int:
    return int(eig_counts(trunc, [energy])[0])


def ids(trunc: JacobiTruncation, energy: float) -> float:
    """Integrated density of states of the truncation at one energy."""
    return eig_count_leq(trunc, energy) / trunc.size


def ids_curve(eigenvalues: np.ndarray, energies) -> np.ndarray:
    """IDS evaluated on an energy grid from the sorted eigenvalue list."""
    eigs = np.sort(np.asarray(eigenvalues, dtype=np.float64))
    grid = np.asarray(energies, dtype=np.float64)
    return np.searchsorted(eigs, grid, side="right") / eigs.size


def spectral_bracket(trunc: JacobiTruncation) -> tuple[float, float]:
    """Gershgorin interval containing every eigenvalue."""
    n = trunc.size
    rad = np.zeros(n)
    if n > 1:
        rad[:-1] += trunc.offdiagonal
        rad[1:] += trunc.offdiagonal
    lo = float(np.min(trunc.diagonal - rad))
    hi = float(np.max(trunc.diagonal + rad))
    pad = 1e-8 * max(1.0, abs(lo), abs(hi))
    return lo - pad, hi + pad


def eigenvalues(trunc: JacobiTruncation, tol: float = 1e-10,
                max_iter: int = 120) -> np.ndarray:
    """All eigenvalues, each bracketed to absolute width <= tol by bisection
    on the Sturm counts."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = trunc.size
    diag = trunc.diagonal
    offsq = trunc.offdiagonal ** 2
    pivmin = _pivmin(offsq)
    lo0, hi0 = spectral_bracket(trunc)
    lo = np.full(n, lo0)
    hi = np.full(n, hi0)
    ranks = np.arange(1, n + 1)
    for _ in range(max_iter):
        if float(np.max(hi - lo)) <= tol:
            break
        mid = 0.5 * (lo + hi)
        uniq, inverse = np.unique(mid, return_inverse=True)
        cnt = _sturm_counts(diag, offsq, uniq, pivmin)[inverse]
        above = cnt >= ranks
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    else:
        raise RuntimeError("bisection failed to converge")
    return 0.5 * (lo + hi)


@dataclass
class Gap:
    """Open interval (lo, hi) free of eigenvalues, with its IDS label."""

    lo: float
    hi: float
    label: float
    index: int  # eigenvalues <= lo
    verdict: MembershipVerdict | None = None

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def to_json_dict(self) -> dict:
        return {
            "e_lo": self.lo,
            "e_hi": self.hi,
            "width": self.width,
            "label": self.label,
            "index": self.index,
            "verdict": self.verdict.to_json_dict() if self.verdict else None,
        }


def detect_gaps(eigs: np.ndarray, min_width: float | None = None) -> list[Gap]:
    """Interior spacings wider than min_width (default 20 * span / N)."""
    eigs = np.sort(np.asarray(eigs, dtype=np.float64))
    n = eigs.size
    if n < 2:
        return []
    if min_width is None:
        min_width = 20.0 * (eigs[-1] - eigs[0]) / n
    if min_width <= 0:
        raise ValueError("min_width must be positive")
    gaps = []
    spacings = np.diff(eigs)
    for i in np.nonzero(spacings > min_width)[0]:
        gaps.append(Gap(lo=float(eigs[i]), hi=float(eigs[i + 1]),
                        label=(i + 1) / n, index=int(i + 1)))
    return gaps


@dataclass
class SpectralReport:
    """One truncation's spectrum, its gaps, and (after verification) the
    membership verdict of every gap label in a winding-rate group."""

    size: int
    boundary: str
    eigenvalues: np.ndarray
    gaps: list[Gap]
    group: LabelGroup | None = None
    parameters: dict = field(default_factory=dict)

    @property
    def has_contradiction(self) -> bool:
        return any(g.verdict is not None and g.verdict.status == "non_member"
                   for g in self.gaps)

    def to_json_dict(self) -> dict:
        return {
            "size": self.size,
            "boundary": self.boundary,
            "eigenvalues": [float(e) for e in self.eigenvalues],
            "gaps": [g.to_json_dict() for g in self.gaps],
            "group": self.group.to_json_dict() if self.group else None,
            "parameters": self.parameters,
        }


def make_spectral_report(trunc: JacobiTruncation, min_width: float | None = None,
                         eig_tol: float = 1e-10) -> SpectralReport:
    eigs = eigenvalues(trunc, tol=eig_tol)
    gaps = detect_gaps(eigs, min_width=min_width)
    params = {
        "eigenvalue_tolerance": eig_tol,
        "min_gap_width": min_width if min_width is not None
        else 20.0 * float(eigs[-1] - eigs[0]) / trunc.size,
        "label_quantum": 1.0 / trunc.size,
    }
    return SpectralReport(size=trunc.size, boundary=trunc.boundary,
                          eigenvalues=eigs, gaps=gaps, parameters=params)


def verify_labels(report: SpectralReport, group: LabelGroup,
                  tol: float | None = None, coeff_bound: int = 10) -> SpectralReport:
    """Annotate every gap with the membership verdict of its label.

    Default tolerance is 5/N: the finite-size label error budget (boundary
    effects move eigenvalue counts by O(1)).
    """
    if tol is None:
        tol = 5.0 / report.size
    gaps = [replace(g, verdict=contains(group, g.label, tol=tol, coeff_bound=coeff_bound))
            for g in report.gaps]
    params = dict(report.parameters)
    params.update({"label_tolerance": tol, "coefficient_bound": coeff_bound})
    return SpectralReport(size=report.size, boundary=report.boundary,
                          eigenvalues=report.eigenvalues, gaps=gaps,
                          group=group, parameters=params)


@dataclass
class TrackedGap:
    """A candidate gap followed across the size schedule."""

    intervals: dict[int, tuple[float, float]]
    labels: dict[int, float]
    status: str  # "PERSISTENT" | "SPURIOUS"
    reason: str
    membership: MembershipVerdict | None = None
    verdict: str | None = None  # "OK" | "CONTRADICTION"

    def to_json_dict(self) -> dict:
        return {
            "intervals": {str(n): list(iv) for n, iv in sorted(self.intervals.items())},
            "labels": {str(n): v for n, v in sorted(self.labels.items())},
            "status": self.status,
            "reason": self.reason,
            "membership": self.membership.to_json_dict() if self.membership else None,
            "verdict": self.verdict,
        }


@dataclass
class ScanResult:
    sizes: tuple[int, ...]
    samples: int
    group: LabelGroup
    tracked: list[TrackedGap]

    @property
    def has_contradiction(self) -> bool:
        return any(t.verdict == "CONTRADICTION" for t in self.tracked)

    @property
    def persistent(self) -> list[TrackedGap]:
        return [t for t in self.tracked if t.status == "PERSISTENT"]

    def to_json_dict(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "samples": self.samples,
            "group": self.group.to_json_dict(),
            "tracked": [t.to_json_dict() for t in self.tracked],
            "contradiction": self.has_contradiction,
        }


def _merge_across_samples(per_sample: list[list[Gap]]) -> list[tuple[float, float, float]]:
    """Gaps present (with overlapping energy intervals) in every sample.
    Returns (lo, hi, label) with the interval intersected and label averaged."""
    if not per_sample:
        return []
    merged = []
    for g in per_sample[0]:
        lo, hi = g.lo, g.hi
        labels = [g.label]
        ok = True
        for other in per_sample[1:]:
            match = None
            best_overlap = 0.0
            for h in other:
                overlap = min(hi, h.hi) - max(lo, h.lo)
                if overlap > best_overlap:
                    best_overlap = overlap
                    match = h
            if match is None:
                ok = False
                break
            lo, hi = max(lo, match.lo), min(hi, match.hi)
            labels.append(match.label)
        if ok and hi > lo:
            merged.append((lo, hi, float(np.mean(labels))))
    return merged


def connectedness_scan(system: System, spec: CoefficientSpec, sizes,
                       samples: int = 3, seed: int = 0,
                       group: LabelGroup | None = None,
                       min_width: float | None = None,
                       boundary: str | None = None,
                       eig_tol: float = 1e-10) -> ScanResult:
    """Hunt for spectral gaps that persist across truncation sizes and check
    their labels against the winding-rate group.

    A candidate must appear in every phase sample at a given size.  It is
    SPURIOUS if its width shrinks monotonically AND by more than a factor of
    1.6 overall (level-spacing artifacts scale like 1/N, while a genuine
    gap's width converges, approached from outside by the band edges), or if
    its label drifts by more than 10/min(sizes); a candidate that dies before
    the largest size is spurious too.  Surviving candidates are PERSISTENT and
    their labels are tested with tolerance 5/max(sizes); a persistent
    non-member is a genuine contradiction (for a base system with connected
    expectations, it would mean the computed group is wrong).
    """
    sizes = tuple(sorted(int(n) for n in sizes))
    if not sizes:
        raise ValueError("need at least one size")
    if samples < 1:
        raise ValueError("need at least one sample")
    if group is None:
        group = group_for_system(system)
    rng = np.random.default_rng(seed)
    points = [sample_ergodic(system, rng, bits=max(sizes) + 64)
              if isinstance(system, CircleDoublingSystem)
              else sample_ergodic(system, rng)
              for _ in range(samples)]

    merged: dict[int, list[tuple[float, float, float]]] = {}
    for n in sizes:
        per_sample = []
        for pt in points:
            trunc = build_truncation(system, spec, pt, n, boundary=boundary)
            eigs = eigenvalues(trunc, tol=eig_tol)
            per_sample.append(detect_gaps(eigs, min_width=min_width))
        merged[n] = _merge_across_samples(per_sample)

    n_max = sizes[-1]
    drift_tol = 10.0 / sizes[0]
    used: dict[int, set[int]] = {n: set() for n in sizes}
    tracked: list[TrackedGap] = []

    def chain_from(n_anchor: int, idx: int) -> TrackedGap:
        lo, hi, label = merged[n_anchor][idx]
        used[n_anchor].add(idx)
        intervals = {n_anchor: (lo, hi)}
        labels = {n_anchor: label}
        cur = (lo, hi)
        for n in reversed([m for m in sizes if m < n_anchor]):
            best, best_overlap = None, 0.0
            for j, (glo, ghi, glab) in enumerate(merged[n]):
                if j in used[n]:
                    continue
                overlap = min(cur[1], ghi) - max(cur[0], glo)
                if overlap > best_overlap:
                    best, best_overlap = j, overlap
            if best is None:
                break
            glo, ghi, glab = merged[n][best]
            used[n].add(best)
            intervals[n] = (glo, ghi)
            labels[n] = glab
            cur = (glo, ghi)
        return TrackedGap(intervals=intervals, labels=labels, status="", reason="")

    for idx in range(len(merged[n_max])):
        tracked.append(chain_from(n_max, idx))
    for n in reversed(sizes[:-1]):
        for idx in range(len(merged[n])):
            if idx not in used[n]:
                tracked.append(chain_from(n, idx))

    for t in tracked:
        ns = sorted(t.intervals)
        widths = [t.intervals[n][1] - t.intervals[n][0] for n in ns]
        labs = [t.labels[n] for n in ns]
        if n_max not in t.intervals:
            t.status, t.reason = "SPURIOUS", "vanished before the largest size"
        elif (len(ns) >= 2 and all(w2 < w1 for w1, w2 in zip(widths, widths[1:]))
              and widths[0] > 1.6 * widths[-1]):
            t.status, t.reason = "SPURIOUS", "width keeps collapsing with size"
        elif max(labs) - min(labs) > drift_tol:
            t.status, t.reason = "SPURIOUS", f"label drifts by {max(labs) - min(labs):.3g}"
        else:
            t.status, t.reason = "PERSISTENT", "stable across the size schedule"
            t.membership = contains(group, t.labels[n_max], tol=5.0 / n_max)
            t.verdict = "CONTRADICTION" if t.membership.status == "non_member" else "OK"

    return ScanResult(sizes=sizes, samples=samples, group=group, tracked=tracked)
