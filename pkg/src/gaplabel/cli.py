"""Command-line interface.

Subcommands:
  group           print the winding-rate group of the configured system
  ids             compute the integrated density of states on an energy grid
  gaps            detect spectral gaps and verify their labels
  solenoid-check  run the solenoid conjugacy and fixed-character checks
  estimate        numerically estimate one observable's winding rate
  run             full pipeline: group, spectrum, gaps, verification, scan

Exit codes: 0 success, 2 configuration error, 3 numerical contradiction
(a verified non-member label or a failed identity), 1 internal error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import traceback
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import jsonschema
import numpy as np
import yaml

from . import solenoid as sol
from .intlin import IntMatrix
from .jacobi import (
    CoefficientSpec,
    TableObservable,
    TrigPolynomial,
    build_truncation,
    connectedness_scan,
    ids_curve,
    make_spectral_report,
    spectral_bracket,
    verify_labels,
)
from .schwartzman import (
    FiniteCharacter,
    OrbitWindingObservable,
    PhaseUnwrapError,
    TorusCharacter,
    contains,
    dyadic_fixed_character_sweep,
    finite_rhs_group,
    group_for_system,
    schwartzman_estimate,
    solenoid_fixed_dual,
    suspension_observable,
)
from .systems import (
    CircleDoublingSystem,
    FiniteCyclicSystem,
    TorusAffineSystem,
    sample_ergodic,
)


class ConfigError(Exception):
    pass


_OBSERVABLE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["cosine", "constant", "character", "table", "zero"]},
        "amplitude": {"type": "number"},
        "value": {"type": "number"},
        "harmonics": {"type": "array", "items": {"type": "integer"}, "minItems": 1},
        "values": {"type": "object", "additionalProperties": {"type": "number"}},
    },
}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version", "system"],
    "properties": {
        "schema_version": {"const": 1},
        "system": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["torus_affine", "finite_cyclic", "circle_doubling"]},
                "matrix": {
                    "type": "array", "minItems": 1,
                    "items": {"type": "array", "minItems": 1,
                              "items": {"type": "integer"}},
                },
                "shift": {
                    "type": "array", "minItems": 1,
                    "items": {"type": ["number", "string"]},
                },
                "ergodic": {"type": "boolean"},
                "modulus": {"type": "integer", "minimum": 1},
                "multiplier": {"type": "integer"},
                "offset": {"type": "integer"},
                "support": {"type": "array", "minItems": 1,
                            "items": {"type": "integer"}},
            },
        },
        "coefficients": {
            "type": "object",
            "additionalProperties": False,
            "required": ["diagonal", "offdiagonal"],
            "properties": {
                "diagonal": _OBSERVABLE_SCHEMA,
                "offdiagonal": _OBSERVABLE_SCHEMA,
            },
        },
        "solver": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "size": {"type": "integer", "minimum": 2},
                "sizes": {"type": "array", "minItems": 1,
                          "items": {"type": "integer", "minimum": 2}},
                "samples": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0},
                "min_gap_width": {"type": ["number", "null"]},
                "label_tolerance": {"type": ["number", "null"]},
                "coefficient_bound": {"type": "integer", "minimum": 0},
                "boundary": {"enum": ["window", "half_line", None]},
                "energy_grid_points": {"type": "integer", "minimum": 2},
                "verify_against": {"enum": ["orbit", "fixed_character_formula"]},
            },
        },
        "estimator": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "t_max": {"type": "number", "exclusiveMinimum": 0},
                "dt": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "observable": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["suspension", "orbit_winding"]},
                "harmonics": {"type": "array", "minItems": 1,
                              "items": {"type": "integer"}},
                "residue": {"type": "integer"},
                "offset": {"type": "integer"},
                "loops": {"type": "integer"},
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "directory": {"type": "string"},
                "format": {"enum": ["csv", "json"]},
                "figures": {"type": "boolean"},
            },
        },
    },
}

_SOLVER_DEFAULTS = {
    "size": 1000,
    "sizes": None,
    "samples": 2,
    "seed": 0,
    "min_gap_width": None,
    "label_tolerance": None,
    "coefficient_bound": 10,
    "boundary": None,
    "energy_grid_points": 512,
    "verify_against": "orbit",
}


def _verification_group(system, s: dict):
    """The group gap labels are checked against.  `fixed_character_formula`
    deliberately picks the (possibly too small) formula group on finite
    systems, which turns the counterexample into an exit-code-3 demonstration."""
    if s["verify_against"] == "fixed_character_formula":
        if not isinstance(system, FiniteCyclicSystem):
            raise ConfigError("verify_against: fixed_character_formula needs a "
                              "finite_cyclic system")
        return finite_rhs_group(system.modulus, system.multiplier, system.offset)
    return group_for_system(system)


def _load_raw(path: str | Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping")
    # YAML writes table keys as bare integers; the schema wants strings
    coeffs = raw.get("coefficients")
    if isinstance(coeffs, dict):
        for side in ("diagonal", "offdiagonal"):
            obs = coeffs.get(side)
            if isinstance(obs, dict) and isinstance(obs.get("values"), dict):
                obs["values"] = {str(k): v for k, v in obs["values"].items()}
    try:
        jsonschema.validate(raw, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "top level"
        raise ConfigError(f"config rejected at {where}: {exc.message}") from exc
    return raw


@dataclass
class ExperimentConfig:
    """A validated experiment description, as loaded from YAML."""

    raw: dict

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        return cls(raw=_load_raw(path))

    def system(self):
        return build_system(self.raw)

    def coefficients(self, system) -> CoefficientSpec:
        return build_coefficients(self.raw, system)

    def solver(self, args) -> dict:
        return solver_settings(self.raw, args)


def _parse_shift_entry(entry):
    if isinstance(entry, str):
        try:
            return Fraction(entry)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad shift entry {entry!r}: {exc}") from exc
    return float(entry)


def build_system(cfg: dict):
    sc = cfg["system"]
    kind = sc["kind"]
    fields = set(sc) - {"kind"}
    allowed = {
        "torus_affine": {"matrix", "shift", "ergodic"},
        "finite_cyclic": {"modulus", "multiplier", "offset", "support"},
        "circle_doubling": set(),
    }[kind]
    extra = fields - allowed
    if extra:
        raise ConfigError(f"system kind {kind!r} does not use fields {sorted(extra)}")
    try:
        if kind == "torus_affine":
            if "matrix" not in sc or "shift" not in sc:
                raise ConfigError("torus_affine needs 'matrix' and 'shift'")
            return TorusAffineSystem(
                matrix=IntMatrix(tuple(tuple(r) for r in sc["matrix"])),
                shift=tuple(_parse_shift_entry(e) for e in sc["shift"]),
                ergodic=sc.get("ergodic", True),
            )
        if kind == "finite_cyclic":
            missing = {"modulus", "multiplier", "offset", "support"} - fields
            if missing:
                raise ConfigError(f"finite_cyclic needs {sorted(missing)}")
            return FiniteCyclicSystem(
                modulus=sc["modulus"], multiplier=sc["multiplier"],
                offset=sc["offset"], support=tuple(sc["support"]),
            )
        return CircleDoublingSystem()
    except ValueError as exc:
        raise ConfigError(f"bad system: {exc}") from exc


def _build_observable(obs_cfg: dict, system):
    kind = obs_cfg["kind"]
    dim = system.dimension if isinstance(system, TorusAffineSystem) else 1
    if kind == "zero":
        return TrigPolynomial.constant(0.0)
    if kind == "constant":
        if "value" not in obs_cfg:
            raise ConfigError("constant coefficient needs 'value'")
        return TrigPolynomial.constant(obs_cfg["value"])
    if kind in ("cosine", "character"):
        if isinstance(system, FiniteCyclicSystem):
            raise ConfigError(f"{kind} coefficients need a torus or circle system; "
                              "use a table for finite systems")
        harmonics = obs_cfg.get("harmonics")
        if harmonics is None:
            raise ConfigError(f"{kind} coefficient needs 'harmonics'")
        if len(harmonics) != dim:
            raise ConfigError(f"harmonics length {len(harmonics)} does not match "
                              f"system dimension {dim}")
        if kind == "cosine":
            if "amplitude" not in obs_cfg:
                raise ConfigError("cosine coefficient needs 'amplitude'")
            return TrigPolynomial.cosine(obs_cfg["amplitude"], tuple(harmonics))
        return TrigPolynomial.character(tuple(harmonics))
    if kind == "table":
        if not isinstance(system, FiniteCyclicSystem):
            raise ConfigError("table coefficients need a finite_cyclic system")
        values = obs_cfg.get("values")
        if not values:
            raise ConfigError("table coefficient needs 'values'")
        table = {int(k): v for k, v in values.items()}
        missing = set(system.support) - set(table)
        if missing:
            raise ConfigError(f"table is missing residues {sorted(missing)}")
        return TableObservable(tuple(table.items()))
    raise ConfigError(f"unknown coefficient kind {kind!r}")


def build_coefficients(cfg: dict, system) -> CoefficientSpec:
    if "coefficients" not in cfg:
        raise ConfigError("this subcommand needs a 'coefficients' section")
    cc = cfg["coefficients"]
    return CoefficientSpec(
        diagonal=_build_observable(cc["diagonal"], system),
        offdiagonal=_build_observable(cc["offdiagonal"], system),
    )


def solver_settings(cfg: dict, args) -> dict:
    s = dict(_SOLVER_DEFAULTS)
    s.update(cfg.get("solver", {}))
    if getattr(args, "seed", None) is not None:
        s["seed"] = args.seed
    if getattr(args, "n", None) is not None:
        s["size"] = args.n
    return s


def _draw_point(system, rng, size: int):
    if isinstance(system, CircleDoublingSystem):
        return sample_ergodic(system, rng, bits=size + 64)
    return sample_ergodic(system, rng)


def _out_dir(cfg: dict, args) -> Path:
    out = getattr(args, "out_dir", None) or cfg.get("output", {}).get("directory", "out")
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _out_format(cfg: dict, args) -> str:
    return getattr(args, "format", None) or cfg.get("output", {}).get("format", "csv")


def _want_figures(cfg: dict) -> bool:
    return bool(cfg.get("output", {}).get("figures", True))


def _write_json(path: Path, payload: dict):
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_ids_table(path_base: Path, energies, values, fmt: str) -> Path:
    if fmt == "json":
        path = path_base.with_suffix(".json")
        _write_json(path, {"columns": ["E", "k(E)"],
                           "rows": [[float(e), float(v)]
                                    for e, v in zip(energies, values)]})
        return path
    path = path_base.with_suffix(".csv")
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["E", "k(E)"])
        for e, v in zip(energies, values):
            writer.writerow([repr(float(e)), repr(float(v))])
    return path


def _say(args, *parts):
    if not getattr(args, "quiet", False):
        print(*parts)


def _group_payload(system) -> dict:
    group = group_for_system(system)
    payload = {"group": group.to_json_dict()}
    if isinstance(system, FiniteCyclicSystem):
        formula = finite_rhs_group(system.modulus, system.multiplier, system.offset)
        payload["fixed_character_formula_group"] = formula.to_json_dict()
    return payload


def _print_group(args, system):
    group = group_for_system(system)
    _say(args, f"winding-rate group: {group.describe()}")
    for p in group.provenance:
        _say(args, f"  generator {p.value:.10g}  ({p.note or 'character ' + str(p.to_json_dict()['character'])})")
    if isinstance(system, FiniteCyclicSystem):
        formula = finite_rhs_group(system.modulus, system.multiplier, system.offset)
        _say(args, f"fixed-character formula group: {formula.describe()}")
        if formula.rational_unit != group.rational_unit:
            _say(args, "  note: the formula group differs from the orbit group; "
                       "gap labels follow the orbit group")
    return group


def cmd_group(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    system = cfg.system()
    _print_group(args, system)
    out = _out_dir(cfg.raw, args)
    _write_json(out / "group.json", _group_payload(system))
    _say(args, f"wrote {out / 'group.json'}")
    return 0


def _single_report(cfg: ExperimentConfig, args, *, verify: bool):
    system = cfg.system()
    spec = cfg.coefficients(system)
    s = cfg.solver(args)
    rng = np.random.default_rng(s["seed"])
    point = _draw_point(system, rng, s["size"])
    trunc = build_truncation(system, spec, point, s["size"], boundary=s["boundary"])
    report = make_spectral_report(trunc, min_width=s["min_gap_width"])
    if verify:
        group = _verification_group(system, s)
        report = verify_labels(report, group, tol=s["label_tolerance"],
                               coeff_bound=s["coefficient_bound"])
    return system, trunc, report, s


def _ids_artifacts(trunc, report, cfg: ExperimentConfig, args, out: Path, fmt: str):
    lo, hi = spectral_bracket(trunc)
    span = hi - lo
    s = cfg.solver(args)
    grid = np.linspace(lo - 0.02 * span, hi + 0.02 * span, s["energy_grid_points"])
    curve = ids_curve(report.eigenvalues, grid)
    table = _write_ids_table(out / "ids_curve", grid, curve, fmt)
    figure = None
    if _want_figures(cfg.raw):
        from . import plots
        figure = plots.render_ids_figure(out / "ids.png", grid, curve, report)
    return table, figure


def cmd_ids(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    _, trunc, report, _ = _single_report(cfg, args, verify=False)
    out = _out_dir(cfg.raw, args)
    fmt = _out_format(cfg.raw, args)
    table, figure = _ids_artifacts(trunc, report, cfg, args, out, fmt)
    _say(args, f"N = {report.size} ({report.boundary}), "
               f"spectrum within [{report.eigenvalues.min():.6g}, "
               f"{report.eigenvalues.max():.6g}]")
    _say(args, f"wrote {table}" + (f" and {figure}" if figure else ""))
    return 0


def _print_gap_lines(args, report):
    if not report.gaps:
        _say(args, "no gaps wider than the detection threshold")
    for g in report.gaps:
        tol = report.parameters.get("label_tolerance")
        v = g.verdict
        verdict = v.status if v else "unverified"
        extra = ""
        if v and v.status == "member":
            extra = f" (= {v.witness_value:.10g})"
        _say(args, f"gap ({g.lo:.6g}, {g.hi:.6g})  width {g.width:.4g}  "
                   f"label {g.label:.6f} +/- {tol:.2g}  {verdict}{extra}")


def cmd_gaps(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    system, trunc, report, s = _single_report(cfg, args, verify=True)
    out = _out_dir(cfg.raw, args)
    _print_group(args, system)
    _print_gap_lines(args, report)
    _write_json(out / "spectral_report.json", report.to_json_dict())
    if _want_figures(cfg.raw):
        from . import plots
        plots.render_spectrum_figure(out / "spectrum.png", report)
    _say(args, f"wrote {out / 'spectral_report.json'}")
    if report.has_contradiction:
        print("CONTRADICTION: a detected gap label lies outside the group",
              file=sys.stderr)
        return 3
    return 0


def cmd_estimate(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    system = cfg.system()
    oc = cfg.raw.get("observable", {})
    est = cfg.raw.get("estimator", {})
    t_max = float(est.get("t_max", 1000.0))
    dt = float(est.get("dt", 0.01))
    kind = oc.get("kind", "suspension")
    try:
        if kind == "orbit_winding":
            if not isinstance(system, FiniteCyclicSystem):
                raise ConfigError("orbit_winding observables need a finite system")
            observable = OrbitWindingObservable(cycle=system.orbit_cycle,
                                                loops=oc.get("loops", 1))
        else:
            character = None
            if "harmonics" in oc:
                if not isinstance(system, TorusAffineSystem):
                    raise ConfigError("'harmonics' needs a torus system")
                character = TorusCharacter(tuple(oc["harmonics"]))
            elif "residue" in oc:
                if not isinstance(system, FiniteCyclicSystem):
                    raise ConfigError("'residue' needs a finite system")
                character = FiniteCharacter(residue=oc["residue"],
                                            modulus=system.modulus)
            observable = suspension_observable(system, character,
                                               offset=oc.get("offset", 0))
        seed = args.seed if args.seed is not None else 0
        point = _draw_point(system, np.random.default_rng(seed), 1)
        value = schwartzman_estimate(system, observable, point,
                                     t_max=t_max, dt=dt)
    except (ValueError, PhaseUnwrapError) as exc:
        raise ConfigError(str(exc)) from exc
    tol = 5.0 / t_max
    group = group_for_system(system)
    verdict = contains(group, value, tol=max(tol, 1e-9))
    _say(args, f"winding rate estimate: {value:.6f} +/- {tol:.6f}")
    _say(args, f"group {group.describe()}: {verdict.status} "
               f"(nearest element {verdict.witness_value:.6f})")
    out = _out_dir(cfg.raw, args)
    _write_json(out / "estimate.json", {
        "value": value, "tolerance": tol,
        "t_max": t_max, "dt": dt,
        "group": group.describe(), "membership": verdict.to_json_dict(),
    })
    return 0


def _solenoid_checks(samples: int, steps: int, seed: int) -> list[dict]:
    rng = np.random.default_rng(seed)
    checks = []

    def record(name, passed, detail):
        checks.append({"check": name, "passed": bool(passed), "detail": detail})

    worst_fiber = 0.0
    for _ in range(samples):
        p1, p2, p3 = sol.sample_solenoid(rng, angle_bits=steps + 128)
        q1, q2, q3 = p1, p2, p3
        for _ in range(steps):
            q1, q2, q3 = sol.double(q1), sol.double(q2), sol.double(q3)
        if sol.conj_g(q1.angle, q1.digits).coords != q2.coords:
            record("s1_s2_conjugacy", False, "mismatch after iteration")
            break
        lhs = sol.conj_h(q3)
        if lhs.coords != tuple(q2.coords[: lhs.levels + 1]):
            record("s3_s2_conjugacy", False, "mismatch after iteration")
            break
        worst_fiber = max(worst_fiber, q3.fiber_truncation_error())
    else:
        record("s1_s2_conjugacy", True,
               f"exact over {samples} samples x {steps} steps")
        record("s3_s2_conjugacy", True,
               f"exact angles over {samples} samples x {steps} steps; "
               f"fiber truncation error <= {worst_fiber:.3g}")

    p1, p2, _ = sol.sample_solenoid(rng)
    moved = sol.conj_g(p1.angle + 3, p1.digits - 3)
    record("glue_well_defined", moved.coords == p2.coords,
           "equivalent representatives map to the same inverse-limit point")

    kernel = sol.conj_g(Fraction(1), sol.Dyadic(-1))
    record("glue_kernel", all(c == 0 for c in kernel.coords),
           "(1, -1) lands on the identity")

    defect = float(sol.double(p2).compatibility_defect())
    record("compatibility", defect == 0.0,
           f"inverse-limit defect {defect} after doubling")

    fixed = dyadic_fixed_character_sweep()
    record("fixed_dual_sweep",
           fixed == [Fraction(0)] and solenoid_fixed_dual().is_trivial,
           "only the zero character is fixed; the winding-rate group is Z")
    return checks


def cmd_solenoid_check(args) -> int:
    samples = args.n if args.n is not None else 25
    seed = args.seed if args.seed is not None else 0
    checks = _solenoid_checks(samples=samples, steps=100, seed=seed)
    ok = all(c["passed"] for c in checks)
    for c in checks:
        _say(args, f"{'PASS' if c['passed'] else 'FAIL'}  {c['check']}: {c['detail']}")
    out = Path(args.out_dir or "out")
    out.mkdir(parents=True, exist_ok=True)
    _write_json(out / "solenoid_check.json",
                {"checks": checks, "samples": samples, "seed": seed})
    if not ok:
        print("CONTRADICTION: a conjugacy identity failed", file=sys.stderr)
        return 3
    return 0


def cmd_run(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    system = cfg.system()
    _print_group(args, system)
    spec = cfg.coefficients(system)
    s = cfg.solver(args)
    group = _verification_group(system, s)
    out = _out_dir(cfg.raw, args)
    fmt = _out_format(cfg.raw, args)
    _write_json(out / "group.json", _group_payload(system))

    sizes = s["sizes"]
    scan = None
    if sizes:
        scan = connectedness_scan(system, spec, sizes, samples=s["samples"],
                                  seed=s["seed"], group=group,
                                  min_width=s["min_gap_width"],
                                  boundary=s["boundary"])
        _write_json(out / "scan.json", scan.to_json_dict())
        size_for_report = max(sizes)
    else:
        size_for_report = s["size"]

    rng = np.random.default_rng(s["seed"])
    point = _draw_point(system, rng, size_for_report)
    trunc = build_truncation(system, spec, point, size_for_report,
                             boundary=s["boundary"])
    report = make_spectral_report(trunc, min_width=s["min_gap_width"])
    report = verify_labels(report, group, tol=s["label_tolerance"],
                           coeff_bound=s["coefficient_bound"])
    _print_gap_lines(args, report)
    _write_json(out / "spectral_report.json", report.to_json_dict())
    table, _ = _ids_artifacts(trunc, report, cfg, args, out, fmt)
    if _want_figures(cfg.raw):
        from . import plots
        plots.render_spectrum_figure(out / "spectrum.png", report)
        if scan is not None:
            plots.render_scan_figure(out / "scan.png", scan)

    contradiction = report.has_contradiction
    if scan is not None:
        n_pers = len(scan.persistent)
        _say(args, f"scan over sizes {list(scan.sizes)}: {len(scan.tracked)} candidate(s), "
                   f"{n_pers} persistent")
        for t in scan.persistent:
            n_top = max(t.labels)
            _say(args, f"  persistent gap label {t.labels[n_top]:.6f} at N={n_top}: "
                       f"{t.membership.status} -> {t.verdict}")
        contradiction = contradiction or scan.has_contradiction
    _say(args, f"artifacts in {out}")
    if contradiction:
        print("CONTRADICTION: a stable gap label lies outside the group",
              file=sys.stderr)
        return 3
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaplabel",
        description="winding-rate groups and gap labelling for affine systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "group": (cmd_group, "print the winding-rate group", True),
        "ids": (cmd_ids, "integrated density of states on a grid", True),
        "gaps": (cmd_gaps, "detect gaps and verify their labels", True),
        "solenoid-check": (cmd_solenoid_check,
                           "solenoid conjugacy and fixed-character checks", False),
        "estimate": (cmd_estimate, "numerical winding-rate estimate", True),
        "run": (cmd_run, "full pipeline with artifacts", True),
    }
    for name, (handler, help_text, needs_config) in specs.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=needs_config,
                       help="YAML experiment configuration")
        p.add_argument("--seed", type=int, default=None,
                       help="override the sampling seed")
        p.add_argument("--out-dir", default=None,
                       help="directory for report artifacts")
        p.add_argument("--format", choices=["csv", "json"], default=None,
                       help="tabular artifact format (default csv)")
        p.add_argument("--n", type=int, default=None,
                       help="truncation size or sample count override")
        p.add_argument("--quiet", action="store_true",
                       help="suppress informational output")
        p.set_defaults(handler=handler)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
