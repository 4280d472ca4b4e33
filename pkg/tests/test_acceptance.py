"""Acceptance gate: nine numbered criteria, each a single test with a pinned
tolerance and a runtime budget.  Run with `pytest tests/test_acceptance.py -v`
for one pass/fail line per criterion (`-s` adds the measured details)."""

from __future__ import annotations

import time
from fractions import Fraction
from math import gcd

import numpy as np

from gaplabel.intlin import IntMatrix, integer_kernel, smith_normal_form
from gaplabel.jacobi import (
    CoefficientSpec,
    JacobiTruncation,
    TableObservable,
    TrigPolynomial,
    build_truncation,
    connectedness_scan,
    eig_counts,
    eigenvalues,
    make_spectral_report,
    verify_labels,
)
from gaplabel.schwartzman import (
    TorusCharacter,
    dyadic_fixed_character_sweep,
    finite_label_group,
    finite_rhs_group,
    fixed_character_lattice,
    label_group,
    schwartzman_estimate,
    solenoid_fixed_dual,
    suspension_observable,
)
from gaplabel.solenoid import conj_g, conj_h, double, sample_solenoid
from gaplabel.systems import (
    CircleDoublingSystem,
    FiniteCyclicSystem,
    TorusAffineSystem,
    sample_ergodic,
)

ALPHA = (np.sqrt(5.0) - 1.0) / 2.0


class Budget:
    def __init__(self, name: str, seconds: float):
        self.name = name
        self.seconds = seconds
        self.t0 = time.monotonic()

    def done(self, detail: str):
        elapsed = time.monotonic() - self.t0
        assert elapsed < self.seconds, (
            f"{self.name} exceeded its {self.seconds:.0f}s budget: {elapsed:.1f}s")
        print(f"{self.name} PASS: {detail} ({elapsed:.1f}s < {self.seconds:.0f}s)")


def _box_grid(cols: int, height: int) -> np.ndarray:
    axes = [np.arange(-height, height + 1)] * cols
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, cols)


def _brute_kernel_vectors(m: IntMatrix, grid: np.ndarray) -> np.ndarray:
    """All grid vectors v with M v = 0, filtering one matrix row at a time so
    the big boxes stay cheap."""
    rows = np.array(m.to_lists(), dtype=np.int64)
    cand = grid
    for row in rows:
        if cand.shape[0] == 0:
            break
        cand = cand[cand @ row == 0]
    return cand


def _spanned_by(basis: tuple[tuple[int, ...], ...], vectors: np.ndarray) -> bool:
    """Exact integer back-substitution: is every vector an integer combination
    of the (echelon-form) basis rows?"""
    rem = vectors.astype(np.int64).copy()
    for brow in basis:
        b = np.array(brow, dtype=np.int64)
        j = int(np.nonzero(b)[0][0])
        q, r = np.divmod(rem[:, j], b[j])
        if np.any(r != 0):
            return False
        rem -= q[:, None] * b[None, :]
    return not np.any(rem)


def test_criterion_1_integer_normal_forms():
    budget = Budget("criterion 1", 10.0)
    rng = np.random.default_rng(1234)
    grids = {c: _box_grid(c, 5) for c in range(1, 7)}
    kernels_checked = 0
    for _ in range(200):
        r = int(rng.integers(1, 7))
        c = int(rng.integers(1, 7))
        m = IntMatrix(tuple(tuple(int(x) for x in row)
                            for row in rng.integers(-20, 21, size=(r, c))))
        u, d, v = smith_normal_form(m)
        assert u @ m @ v == d
        assert u.is_unimodular and v.is_unimodular
        diag = [d.to_lists()[i][i] for i in range(min(r, c))]
        for i in range(r):
            for j in range(c):
                if i != j:
                    assert d.to_lists()[i][j] == 0
        assert all(x >= 0 for x in diag)
        for a, b in zip(diag, diag[1:]):
            assert b == 0 or (a != 0 and b % a == 0)

        basis = integer_kernel(m)
        zero = tuple(0 for _ in range(r))
        for vec in basis.vectors:
            assert m.apply(vec) == zero
        brute = _brute_kernel_vectors(m, grids[c])
        assert _spanned_by(basis.vectors, brute)
        kernels_checked += brute.shape[0]
    budget.done(f"200 factorizations exact; {kernels_checked} enumerated "
                "kernel vectors at height <= 5 all spanned")


def _subgroup_order(values: list[Fraction]) -> int:
    """Order of the subgroup of Q/Z generated by the values, by closure."""
    den = 1
    for v in values:
        den = den * v.denominator // gcd(den, v.denominator)
    gens = [int(v * den) % den for v in values]
    seen = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = (x + g) % den
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return len(seen)


def test_criterion_2_torus_label_groups():
    budget = Budget("criterion 2", 1.0)
    cat = TorusAffineSystem(matrix=IntMatrix(((2, 1), (1, 1))),
                            shift=(Fraction(0), Fraction(0)))
    assert label_group(cat).describe() == "Z"
    assert label_group(cat).rational_collapse == 1

    cases = [
        ((Fraction(2, 6),), 3),
        ((Fraction(1, 4), Fraction(1, 6)), 12),
        ((Fraction(5, 7), Fraction(3, 7)), 7),
    ]
    for shift, expected in cases:
        sys = TorusAffineSystem(matrix=IntMatrix.identity(len(shift)), shift=shift)
        g = label_group(sys)
        vals = [p.exact for p in g.provenance
                if p.character is not None and p.exact is not None]
        assert g.rational_collapse == _subgroup_order(vals) == expected

    shear = TorusAffineSystem(matrix=IntMatrix(((1, 0), (1, 1))),
                              shift=(ALPHA, 0.25))
    g = label_group(shear)
    assert g.rational_unit == 1
    assert g.irrational_generators == (ALPHA,)
    lattice = fixed_character_lattice(shear)
    at = shear.matrix.transpose()
    brute = [(m1, m2) for m1 in range(-5, 6) for m2 in range(-5, 6)
             if at.apply((m1, m2)) == (m1, m2)]
    assert _spanned_by(lattice.vectors, np.array(brute, dtype=np.int64))
    for vec in lattice.vectors:
        assert at.apply(vec) == tuple(vec)
    budget.done("cat map -> Z; rational shifts match subgroup enumeration "
                "(orders 3, 12, 7); shear -> Z + Z*b1 with kernel matched")


def test_criterion_3_winding_rate_estimates():
    budget = Budget("criterion 3", 30.0)
    t_max, dt = 1000.0, 0.01
    tol = 5.0 / t_max
    systems = {
        "rotation": (TorusAffineSystem(matrix=IntMatrix(((1,),)), shift=(ALPHA,)),
                     np.array([0.2])),
        "cat": (TorusAffineSystem(matrix=IntMatrix(((2, 1), (1, 1))),
                                  shift=(0.0, 0.0)), np.array([0.3, 0.7])),
        "finite": (FiniteCyclicSystem(modulus=3, multiplier=2, offset=0,
                                      support=(1, 2)), 1),
    }
    worst = 0.0
    for name, (system, point) in systems.items():
        for beta in (-2, -1, 0, 1, 2):
            obs = suspension_observable(system, None, offset=beta)
            est = schwartzman_estimate(system, obs, point, t_max=t_max, dt=dt)
            err = abs(est - beta)
            assert err <= tol, (name, beta, est)
            worst = max(worst, err)
    # nonzero character on the rotation: rate chi(b) + k, still exact
    rot, pt = systems["rotation"]
    for k in (-2, 0, 2):
        obs = suspension_observable(rot, TorusCharacter((1,)), offset=k)
        est = schwartzman_estimate(rot, obs, pt, t_max=t_max, dt=dt)
        assert abs(est - (ALPHA + k)) <= tol
    budget.done(f"15 integer rates on 3 systems within 5/T_max; "
                f"worst error {worst:.2e}")


def test_criterion_4_solenoid_conjugacies():
    budget = Budget("criterion 4", 10.0)
    steps, samples = 100, 100
    worst_defect = 0.0
    for seed in range(samples):
        p1, p2, p3 = sample_solenoid(seed)
        lhs2 = p2
        for _ in range(steps):
            lhs2 = double(lhs2)
        q1 = p1
        for _ in range(steps):
            q1 = double(q1)
        assert conj_g(q1.angle, q1.digits) == lhs2  # T2 o g = g o T1, mod 2^64

        lhs3 = conj_h(p3)
        for _ in range(steps):
            lhs3 = double(lhs3)
        q3 = p3
        for _ in range(steps):
            q3 = double(q3)
        rhs3 = conj_h(q3)
        for a, b in zip(lhs3.coords, rhs3.coords):
            worst_defect = max(worst_defect, abs(float(a) - float(b)))
        assert worst_defect <= 1e-9  # T2 o h = h o T3, per coordinate
    budget.done(f"{samples} samples x {steps} steps: g-identity exact mod 2^64, "
                f"h-identity defect {worst_defect:.1e} <= 1e-9 "
                "(lambda = 1/4, K = 40)")


def test_criterion_5_solenoid_fixed_characters():
    budget = Budget("criterion 5", 1.0)
    assert solenoid_fixed_dual().is_trivial
    fixed = dyadic_fixed_character_sweep(numerator_bound=64, exponent_bound=6)
    assert fixed == [Fraction(0)]
    budget.done("fixed dual lattice empty; dyadic sweep |k| <= 64, n <= 6 "
                "finds only the zero character")


def test_criterion_6_finite_counterexample():
    budget = Budget("criterion 6", 30.0)
    system = FiniteCyclicSystem(modulus=3, multiplier=2, offset=0, support=(1, 2))
    orbit_group = finite_label_group(system)
    formula_group = finite_rhs_group(3, 2, 0)
    assert orbit_group.rational_unit == Fraction(1, 2)
    assert orbit_group.rational_collapse == 2
    assert formula_group.rational_unit == Fraction(1)
    assert formula_group.describe() == "Z"

    spec = CoefficientSpec(diagonal=TableObservable(((1, 1.0), (2, -1.0))),
                           offdiagonal=TrigPolynomial.constant(1.0))
    trunc = build_truncation(system, spec, 1, 2000)
    report = make_spectral_report(trunc)
    assert len(report.gaps) == 1
    label = report.gaps[0].label
    assert abs(label - 0.5) <= 0.001

    accepted = verify_labels(report, orbit_group)
    assert accepted.gaps[0].verdict.status == "member"
    rejected = verify_labels(report, formula_group)
    assert rejected.gaps[0].verdict.status == "non_member"
    assert rejected.has_contradiction
    budget.done(f"(1/2)Z vs Z exact; N=2000 gap label {label:.6f} is a member "
                "of (1/2)Z and a non-member of Z")


def test_criterion_7_almost_mathieu_labels():
    budget = Budget("criterion 7", 300.0)
    system = TorusAffineSystem(matrix=IntMatrix(((1,),)), shift=(ALPHA,))
    group = label_group(system)
    spec = CoefficientSpec(diagonal=TrigPolynomial.cosine(2.0, (1,)),
                           offdiagonal=TrigPolynomial.constant(1.0))
    rng = np.random.default_rng(11)
    tol = 5e-3
    gap_count = 0
    widest_witnesses = []
    for _ in range(2):
        point = sample_ergodic(system, rng)
        trunc = build_truncation(system, spec, point, 4096)
        report = verify_labels(make_spectral_report(trunc), group,
                               tol=tol, coeff_bound=10)
        assert report.gaps, "expected a gapped spectrum"
        for g in report.gaps:
            assert g.verdict.status == "member", (g.label, g.verdict.distance)
        gap_count += len(report.gaps)
        by_width = sorted(report.gaps, key=lambda g: g.width, reverse=True)
        widest_witnesses.append({g.verdict.witness_value for g in by_width[:2]})
    for witnesses in widest_witnesses:
        expected = {ALPHA, 1.0 - ALPHA}
        for w in witnesses:
            assert min(abs(w - e) for e in expected) <= 1e-9
        assert len(witnesses) == 2
    budget.done(f"{gap_count} gaps across 2 samples at N=4096 all label as "
                "c0 + c1*alpha within 5e-3; widest two carry witnesses "
                "{alpha, 1-alpha}")


def test_criterion_8_connectedness_scans():
    budget = Budget("criterion 8", 600.0)
    sizes = (1000, 2000, 4000)
    spec = CoefficientSpec(diagonal=TrigPolynomial.cosine(1.0, (1,)),
                           offdiagonal=TrigPolynomial.constant(1.0))

    doubling = connectedness_scan(CircleDoublingSystem(), spec, sizes,
                                  samples=3, seed=5)
    assert doubling.group.describe() == "Z"
    assert not doubling.has_contradiction
    for t in doubling.persistent:
        assert abs(t.labels[4000] - round(t.labels[4000])) <= 5.0 / 4000

    cat = TorusAffineSystem(matrix=IntMatrix(((2, 1), (1, 1))),
                            shift=(Fraction(0), Fraction(0)))
    spec2d = CoefficientSpec(diagonal=TrigPolynomial.cosine(1.0, (1, 1)),
                             offdiagonal=TrigPolynomial.constant(1.0))
    cat_scan = connectedness_scan(cat, spec2d, sizes, samples=3, seed=5)
    assert cat_scan.group.describe() == "Z"
    assert not cat_scan.has_contradiction
    for t in cat_scan.persistent:
        assert abs(t.labels[4000] - round(t.labels[4000])) <= 5.0 / 4000
    budget.done(f"doubling: {len(doubling.persistent)} persistent candidate(s), "
                f"cat map: {len(cat_scan.persistent)}; every persistent label "
                "within 5/N of an integer, no contradictions")


def test_criterion_9_spectral_cross_oracles():
    budget = Budget("criterion 9", 30.0)
    rng = np.random.default_rng(99)
    worst_eig = 0.0
    probes_checked = 0
    for _ in range(100):
        n = int(rng.integers(2, 51))
        q = rng.uniform(-3, 3, n)
        mags = rng.uniform(0.0, 2.0, n - 1)
        mags[rng.uniform(size=n - 1) < 0.15] = 0.0
        phases = np.exp(2j * np.pi * rng.uniform(0, 1, n - 1))
        p = mags * phases
        trunc = JacobiTruncation(diagonal=q, offdiagonal=np.abs(p),
                                 offdiagonal_raw=p, boundary="half_line", start=0)
        dense = np.diag(q).astype(complex)
        dense += np.diag(p, 1) + np.diag(np.conj(p), -1)
        ref = np.sort(np.linalg.eigvalsh(dense))

        got = eigenvalues(trunc, tol=1e-12)
        worst_eig = max(worst_eig, float(np.max(np.abs(got - ref))))
        assert worst_eig <= 1e-10  # gauge reduction |p| preserves the spectrum

        scale = max(1.0, float(np.max(np.abs(ref))))
        probes = np.concatenate([[ref[0] - 1.0], 0.5 * (ref[:-1] + ref[1:]),
                                 [ref[-1] + 1.0]])
        keep = np.array([np.min(np.abs(ref - x)) > 1e-6 * scale for x in probes])
        expect = np.searchsorted(ref, probes[keep], side="right")
        counts = eig_counts(trunc, probes[keep])
        assert np.array_equal(counts, expect)
        probes_checked += int(keep.sum())
    budget.done(f"100 random truncations (zero couplings, complex phases): "
                f"{probes_checked} Sturm counts exact, eigenvalue agreement "
                f"{worst_eig:.1e} <= 1e-10")
