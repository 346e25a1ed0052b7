"""Command-line front end: config-driven assembly, checks, scans and reports.

A run is described by a single JSON config file whose defaults reproduce the
desk fixtures (all physical constants 1, ``n_elements`` 16).  Artifacts are
written to the output directory as ``report.json`` plus CSV files; identical
config and seed produce byte-identical JSON (floats are rendered with 17
significant digits).

Exit codes: 0 all checks pass, 2 config validation failure, 3 at least one
check failed, 4 numerical failure (factorization or eigensolver).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from . import __version__
from .beam_fem import (
    BeamParameters,
    build_beam_matrices,
    check_condition_cond,
    check_condition_eq1,
    coefficient_from_spec,
)
from .errors import NumericalError, ToolkitError, ValidationError
from .generator import DiscreteGenerator
from .models import (
    MODEL_KINDS,
    HydraulicParameters,
    TmdParameters,
    assemble_combined,
    assemble_hydraulic,
    assemble_hydraulic_feedback,
    assemble_tmd,
    combined_block,
    cross_validate_reH2,
    force_block,
    hydraulic_block,
    hydraulic_characteristic,
    hydraulic_positivity_check,
    scole_tip_block,
    tmd_block,
    torque_block,
)
from .passive_core import (
    check_coupled_resolvent_bound,
    routh_hurwitz,
    verify_passivity,
)
from .spectral import eigen_report, kernel_check, mesh_frequency, scan_resolvent
from .timesim import (
    classical_initial_data,
    default_timestep,
    fit_decay_rate,
    simulate,
    verify_dissipation_identity,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CHECK_FAILED = 3
EXIT_NUMERICAL = 4

CHECK_NAMES = (
    "dissipativity",
    "passivity",
    "transfer_cross_validation",
    "conditions",
    "spectrum",
    "scan",
    "kernel",
    "routh_hurwitz",
    "coupling_bound",
    "dissipation_identity",
    "decay",
    "hydraulic_positivity",
)

_POSITIVE = "must be strictly positive"
_NONNEGATIVE = "must be nonnegative"


@dataclass
class RunConfig:
    """Validated run description; every field mirrors a config key."""

    model: str = "combined"
    n_elements: int = 16
    rho: Any = 1.0
    EI: Any = 1.0
    m: float = 1.0
    J: float = 1.0
    a: float = 1.0
    b: float = 1.0
    m1: float = 1.0
    k1: float = 1.0
    d1: float = 1.0
    Dp: float = 1.0
    Dm: float = 1.0
    Bp: float = 1.0
    Bm: float = 1.0
    kleak: float = 0.0
    beta: float = 1.0
    V: float = 1.0
    JT: float = 1.0
    JG: float = 1.0
    k_fb: float = 1.0
    s_lo: float = 2.0
    s_hi: float | None = None
    n_points: int = 200
    spacing: str = "log"
    fit_lo: float | None = None
    fit_hi: float | None = None
    T: float = 50.0
    dt: float | None = None
    profile: str = "smooth_modal"
    k_modes: int = 12
    checks: dict = field(default_factory=dict)
    seed: int = 0
    out_dir: str = "out"
    threads: int = 1

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any]) -> "RunConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**raw)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.model not in MODEL_KINDS:
            raise ValidationError(
                f"model: {self.model!r} is not one of {sorted(MODEL_KINDS)}"
            )
        if self.n_elements < 1:
            raise ValidationError("n_elements: must be at least 1")
        for name in ("m", "J", "m1", "k1", "d1", "Dp", "Dm", "beta", "V", "JT", "JG"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name}: {_POSITIVE}, got {getattr(self, name)}")
        for name in ("a", "b", "Bp", "Bm", "kleak", "k_fb"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name}: {_NONNEGATIVE}, got {getattr(self, name)}")
        if not self.s_lo > 0:
            raise ValidationError(
                f"s_lo: log spacing requires s_lo > 0, got {self.s_lo}"
            )
        if self.s_hi is not None and self.s_hi <= self.s_lo:
            raise ValidationError(f"s_hi: must exceed s_lo, got {self.s_hi}")
        if self.n_points < 2:
            raise ValidationError("n_points: must be at least 2")
        if self.spacing not in ("log", "linear"):
            raise ValidationError(f"spacing: must be 'log' or 'linear', got {self.spacing!r}")
        if not self.T > 0:
            raise ValidationError(f"T: {_POSITIVE}, got {self.T}")
        if self.dt is not None and not self.dt > 0:
            raise ValidationError(f"dt: {_POSITIVE}, got {self.dt}")
        if self.profile not in ("smooth_modal", "tip_kick", "static_bend"):
            raise ValidationError(f"profile: unknown profile {self.profile!r}")
        if self.k_modes < 1:
            raise ValidationError("k_modes: must be at least 1")
        if self.threads < 1:
            raise ValidationError("threads: must be at least 1")
        unknown_checks = set(self.checks) - set(CHECK_NAMES)
        if unknown_checks:
            raise ValidationError(f"checks: unknown toggles {sorted(unknown_checks)}")

    def enabled(self, check: str) -> bool:
        return bool(self.checks.get(check, True))

    def beam_parameters(self) -> BeamParameters:
        return BeamParameters(
            rho=coefficient_from_spec(self.rho, self.n_elements),
            EI=coefficient_from_spec(self.EI, self.n_elements),
            m=self.m,
            J=self.J,
        )

    def constant_coefficients(self) -> bool:
        def is_const(spec) -> bool:
            return isinstance(spec, (int, float)) or (
                isinstance(spec, Mapping) and spec.get("kind") == "constant"
            )

        return is_const(self.rho) and is_const(self.EI)

    def hydraulic_parameters(self) -> HydraulicParameters:
        return HydraulicParameters(
            Dp=self.Dp,
            Dm=self.Dm,
            Bp=self.Bp,
            Bm=self.Bm,
            kleak_p=self.kleak,
            beta=self.beta,
            V=self.V,
            JT=self.JT,
            JG=self.JG,
        )

    def canonical(self) -> dict:
        out = {}
        for name in sorted(self.__dataclass_fields__):
            value = getattr(self, name)
            out[name] = value
        return out


def build_generator(cfg: RunConfig) -> DiscreteGenerator:
    params = cfg.beam_parameters()
    beam = build_beam_matrices(params, cfg.n_elements)
    if cfg.model == "combined":
        return assemble_combined(beam, params, cfg.a, cfg.b)
    if cfg.model == "torque":
        return assemble_combined(beam, params, 0.0, cfg.b)
    if cfg.model == "force":
        return assemble_combined(beam, params, cfg.a, 0.0)
    if cfg.model == "tmd":
        return assemble_tmd(beam, params, TmdParameters(cfg.m1, cfg.k1, cfg.d1))
    hyd = cfg.hydraulic_parameters()
    gen = assemble_hydraulic(beam, params, hyd)
    if cfg.model == "hydraulic_feedback":
        gen = assemble_hydraulic_feedback(gen, cfg.k_fb, cfg.J, cfg.JG)
    return gen


@dataclass
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "not run"
    evidence: dict


@dataclass
class VerificationReport:
    checks: list[CheckResult]
    provenance: dict

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if c.status == "fail"]

    def to_dict(self) -> dict:
        return {
            "checks": {c.name: {"status": c.status, **c.evidence} for c in self.checks},
            "provenance": self.provenance,
        }


def _fmt(x: Any) -> str:
    if isinstance(x, float):
        if not np.isfinite(x):  # JSON has no literal for nan/inf
            return json.dumps(str(x))
        return format(x, ".17g")
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return "null"
    return json.dumps(str(x))


def render_json(obj: Any, indent: int = 0) -> str:
    """Deterministic JSON with fixed float formatting and sorted keys."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        items = [
            f"{inner}{json.dumps(str(k))}: {render_json(obj[k], indent + 1)}"
            for k in sorted(obj, key=str)
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        items = [f"{inner}{render_json(v, indent + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(obj, (np.floating,)):
        return _fmt(float(obj))
    return _fmt(obj)


def config_hash(cfg: RunConfig) -> str:
    return hashlib.sha256(render_json(cfg.canonical()).encode()).hexdigest()


def write_matrix_csv(path: Path, matrix: np.ndarray) -> None:
    """Dense row-major CSV with a one-line (rows, cols) header."""
    rows, cols = matrix.shape
    with open(path, "w", newline="") as fh:
        fh.write(f"{rows},{cols}\n")
        for row in matrix:
            fh.write(",".join(format(v, ".17g") for v in row) + "\n")


def write_columns_csv(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for values in zip(*columns):
            fh.write(",".join(format(float(v), ".17g") for v in values) + "\n")


class Runner:
    """Executes the configured checks and collects artifacts."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.gen = build_generator(cfg)
        self.params = cfg.beam_parameters()
        self.results: list[CheckResult] = []
        self.scan = None
        self.spectrum = None
        self.trajectory = None

    def _record(self, name: str, status: str, **evidence) -> None:
        self.results.append(CheckResult(name, status, evidence))

    def _skip(self, name: str) -> bool:
        if not self.cfg.enabled(name):
            self._record(name, "not run")
            return True
        return False

    # individual checks ---------------------------------------------------

    def check_dissipativity(self) -> None:
        if self._skip("dissipativity"):
            return
        defect = self.gen.dissipation_defect()
        self._record(
            "dissipativity", "pass" if defect <= 1e-10 else "fail", defect=defect
        )

    def check_passivity(self) -> None:
        if self._skip("passivity"):
            return
        cfg = self.cfg
        blocks = {
            "combined": lambda: combined_block(cfg.a, cfg.b, cfg.m, cfg.J),
            "torque": lambda: torque_block(cfg.b, cfg.J),
            "force": lambda: force_block(cfg.a, cfg.m),
            "tmd": lambda: tmd_block(TmdParameters(cfg.m1, cfg.k1, cfg.d1)),
            "hydraulic": lambda: hydraulic_block(cfg.hydraulic_parameters()),
            "hydraulic_feedback": lambda: hydraulic_block(cfg.hydraulic_parameters()),
        }
        report = verify_passivity(blocks[cfg.model](), n_samples=200, seed=cfg.seed)
        self._record(
            "passivity",
            "pass" if report.passive else "fail",
            min_defect=report.min_defect,
            lambda_max=report.lambda_max,
        )

    def check_transfer(self) -> None:
        if self._skip("transfer_cross_validation"):
            return
        cfg = self.cfg
        if cfg.model == "hydraulic_feedback":
            self._record("transfer_cross_validation", "not run")
            return
        params: Mapping[str, Any]
        if cfg.model in ("hydraulic",):
            params = cfg.hydraulic_parameters()
        else:
            params = {"a": cfg.a, "b": cfg.b, "m": cfg.m, "J": cfg.J,
                      "m1": cfg.m1, "k1": cfg.k1, "d1": cfg.d1}
        grid = np.geomspace(0.01, 100.0, 400)
        cv = cross_validate_reH2(cfg.model, params, grid)
        self._record(
            "transfer_cross_validation",
            "pass" if cv.matches else "fail",
            max_rel_err=cv.max_rel_err,
            observed_ratio=cv.observed_ratio,
        )

    def check_conditions(self) -> None:
        if self._skip("conditions"):
            return
        cfg = self.cfg
        grid = np.linspace(0.0, 1.0, max(64, 4 * cfg.n_elements))
        cert = check_condition_eq1(
            self.params, lambda x: 2.0 * x, 0.25, 0.4, grid
        )
        evidence = {"eq1_margin": cert.margin, "eq1_holds": cert.holds}
        status = "pass" if cert.holds else "fail"
        if cfg.constant_coefficients():
            violations = check_condition_cond(
                cfg.J, float(self.params.EI(0.0)), float(self.params.rho(0.0)), 20, 1e-9
            )
            evidence["cond_violations"] = violations
            if violations:
                status = "fail"
        else:
            evidence["cond_violations"] = None
        self._record("conditions", status, **evidence)

    def check_spectrum(self) -> None:
        if self._skip("spectrum"):
            return
        rep = eigen_report(self.gen)
        self.spectrum = rep
        damped = self._is_damped()
        ok = rep.max_real_part < 0 if damped else rep.max_real_part <= 1e-10
        self._record(
            "spectrum",
            "pass" if ok else "fail",
            max_real_part=rep.max_real_part,
            asymptotic_slope=rep.asymptotic_slope,
        )

    def _is_damped(self) -> bool:
        return any(ch.gain > 0 for ch in self.gen.damping_channels)

    def check_scan(self) -> None:
        if self._skip("scan"):
            return
        cfg = self.cfg
        s_hi = cfg.s_hi if cfg.s_hi is not None else 0.5 * mesh_frequency(self.gen)
        window = None
        if cfg.fit_lo is not None and cfg.fit_hi is not None:
            window = (cfg.fit_lo, cfg.fit_hi)
        scan = scan_resolvent(
            self.gen, cfg.s_lo, s_hi, cfg.n_points, cfg.spacing,
            fit_window=window, threads=cfg.threads,
        )
        self.scan = scan
        ok = len(scan.excluded) == 0 and np.all(np.isfinite(scan.norms))
        self._record(
            "scan",
            "pass" if ok else "fail",
            alpha_fit=scan.alpha_fit,
            window=list(scan.window),
            excluded_points=list(scan.excluded),
        )

    def check_kernel(self) -> None:
        if self._skip("kernel"):
            return
        dim, smin = kernel_check(self.gen)
        from scipy.linalg import svdvals

        from .generator import energy_coordinates

        smax = float(svdvals(energy_coordinates(self.gen).T)[0])
        ok = dim == 0 and smin > 1e-8 * smax
        self._record(
            "kernel", "pass" if ok else "fail", dimension=dim, sigma_min=smin,
            sigma_max=smax,
        )

    def check_routh(self) -> None:
        if self._skip("routh_hurwitz"):
            return
        cfg = self.cfg
        if cfg.model == "tmd":
            poly = [1.0, cfg.d1 / cfg.m1, cfg.k1 / cfg.m1]
        elif cfg.model in ("hydraulic", "hydraulic_feedback"):
            poly = hydraulic_characteristic(cfg.hydraulic_parameters())
        else:
            self._record("routh_hurwitz", "not run")
            return
        stable = routh_hurwitz(poly)
        roots = np.roots(poly)
        agrees = stable == bool(np.all(roots.real < 0))
        self._record(
            "routh_hurwitz",
            "pass" if (stable and agrees) else "fail",
            stable=stable,
            companion_agrees=agrees,
        )

    def check_coupling(self) -> None:
        if self._skip("coupling_bound"):
            return
        cfg = self.cfg
        beam = build_beam_matrices(self.params, cfg.n_elements)
        if cfg.model == "tmd":
            sys1 = scole_tip_block(beam, self.params, "displacement")
            sys2 = tmd_block(TmdParameters(cfg.m1, cfg.k1, cfg.d1))
        elif cfg.model == "hydraulic" and cfg.J == cfg.JG == cfg.JT == 1.0:
            sys1 = scole_tip_block(beam, self.params, "rotation")
            sys2 = hydraulic_block(cfg.hydraulic_parameters())
        else:
            self._record("coupling_bound", "not run")
            return
        s_hi = cfg.s_hi if cfg.s_hi is not None else 0.5 * mesh_frequency(self.gen)
        grid = np.geomspace(cfg.s_lo, s_hi, min(cfg.n_points, 120))
        rep = check_coupled_resolvent_bound(sys1, sys2, np.eye(1), grid)
        ok = np.isfinite(rep.max_ratio)
        self._record(
            "coupling_bound",
            "pass" if ok else "fail",
            max_ratio=rep.max_ratio,
            excluded_points=list(rep.excluded),
        )

    def check_simulation(self) -> None:
        run_identity = self.cfg.enabled("dissipation_identity")
        run_decay = self.cfg.enabled("decay")
        if not (run_identity or run_decay):
            self._record("dissipation_identity", "not run")
            self._record("decay", "not run")
            return
        cfg = self.cfg
        z0 = classical_initial_data(self.gen, cfg.profile, k_modes=cfg.k_modes)
        dt = cfg.dt if cfg.dt is not None else default_timestep(self.gen, cfg.k_modes)
        traj = simulate(self.gen, z0, cfg.T, dt)
        self.trajectory = traj
        if run_identity:
            residual = verify_dissipation_identity(self.gen, traj)
            scale = traj.energies[0] or 1.0
            ok = residual <= 1e-9 * scale and traj.is_monotone()
            self._record(
                "dissipation_identity",
                "pass" if ok else "fail",
                max_dissipation_residual=residual,
                relative_residual=residual / scale,
                monotone=traj.is_monotone(),
            )
        else:
            self._record("dissipation_identity", "not run")
        if run_decay:
            t_hi = traj.times[-1]
            t_lo = max(traj.times[1], 0.1 * t_hi)
            try:
                fit = fit_decay_rate(traj, t_lo, t_hi)
                self._record(
                    "decay", "pass", slope=fit.slope, window=list(fit.window),
                    curvature=fit.curvature, power_law=fit.power_law,
                )
            except ValidationError as exc:
                self._record("decay", "fail", error=str(exc))
        else:
            self._record("decay", "not run")

    def check_positivity(self) -> None:
        if self._skip("hydraulic_positivity"):
            return
        cfg = self.cfg
        if cfg.model not in ("hydraulic", "hydraulic_feedback"):
            self._record("hydraulic_positivity", "not run")
            return
        grid = np.geomspace(1e-2, 100.0, 100)
        try:
            rep = hydraulic_positivity_check(cfg.hydraulic_parameters(), grid)
        except ValidationError as exc:
            # a violated hypothesis (Bp + Bm = 0) is a failed check, not a
            # malformed configuration
            self._record("hydraulic_positivity", "fail", error=str(exc))
            return
        self._record(
            "hydraulic_positivity",
            "pass" if rep.ok else "fail",
            a2=rep.a2, a1=rep.a1, a0=rep.a0, n_min=rep.n_min,
        )

    # orchestration --------------------------------------------------------

    def run_all(self) -> VerificationReport:
        self.check_dissipativity()
        self.check_passivity()
        self.check_transfer()
        self.check_conditions()
        self.check_spectrum()
        self.check_scan()
        self.check_kernel()
        self.check_routh()
        self.check_coupling()
        self.check_simulation()
        self.check_positivity()
        return self.report()

    def report(self) -> VerificationReport:
        recorded = {c.name for c in self.results}
        for name in CHECK_NAMES:
            if name not in recorded:
                self.results.append(CheckResult(name, "not run", {}))
        return VerificationReport(
            checks=self.results,
            provenance={
                "config_hash": config_hash(self.cfg),
                "seed": self.cfg.seed,
                "toolkit_version": __version__,
                "model": self.cfg.model,
            },
        )


def emit_report(report: VerificationReport, out_dir: str | Path, runner: Runner | None = None) -> list[Path]:
    """Write report.json plus whichever CSV artifacts the run produced."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        written = []
        path = out / "report.json"
        path.write_text(render_json(report.to_dict()) + "\n")
        written.append(path)
        if runner is not None and runner.scan is not None:
            p = out / "scan.csv"
            write_columns_csv(p, ["s", "resolvent_norm"], [runner.scan.s_values, runner.scan.norms])
            written.append(p)
        if runner is not None and runner.spectrum is not None:
            p = out / "spectrum.csv"
            lam = runner.spectrum.eigenvalues
            write_columns_csv(p, ["re", "im"], [lam.real, lam.imag])
            written.append(p)
        if runner is not None and runner.trajectory is not None:
            traj = runner.trajectory
            names = sorted(traj.channels)
            p = out / "trajectory.csv"
            write_columns_csv(
                p,
                ["t", "E"] + names,
                [traj.times, traj.energies] + [traj.channels[n] for n in names],
            )
            written.append(p)
        return written
    except OSError as exc:
        raise ToolkitError(f"cannot write artifacts to {out}: {exc}") from exc


def load_config(path: str | None, overrides: Mapping[str, Any]) -> RunConfig:
    raw: dict = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ValidationError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config {path} line {exc.lineno}: {exc.msg}") from exc
        if not isinstance(raw, dict):
            raise ValidationError(f"config {path} must contain a JSON object")
    raw.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig.from_dict(raw)


SUBCOMMANDS = ("assemble", "check", "scan", "eigens", "simulate", "verify-all")

_SUBCOMMAND_CHECKS = {
    "check": (
        "dissipativity", "passivity", "transfer_cross_validation", "conditions",
        "kernel", "routh_hurwitz", "hydraulic_positivity",
    ),
    "scan": ("scan",),
    "eigens": ("spectrum",),
    "simulate": ("dissipation_identity", "decay"),
}


def run(subcommand: str, cfg: RunConfig) -> tuple[int, VerificationReport]:
    """Dispatch one subcommand; returns (exit status, report)."""
    if subcommand not in SUBCOMMANDS:
        raise ValidationError(f"unknown subcommand {subcommand!r}")
    runner = Runner(cfg)
    if subcommand == "assemble":
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_matrix_csv(out / "A.csv", runner.gen.A)
        write_matrix_csv(out / "gram.csv", runner.gen.gram)
        (out / "labels.txt").write_text("\n".join(runner.gen.labels) + "\n")
        runner.check_dissipativity()
        report = runner.report()
    elif subcommand == "verify-all":
        report = runner.run_all()
    else:
        wanted = _SUBCOMMAND_CHECKS[subcommand]
        for name, method in (
            ("dissipativity", runner.check_dissipativity),
            ("passivity", runner.check_passivity),
            ("transfer_cross_validation", runner.check_transfer),
            ("conditions", runner.check_conditions),
            ("spectrum", runner.check_spectrum),
            ("scan", runner.check_scan),
            ("kernel", runner.check_kernel),
            ("routh_hurwitz", runner.check_routh),
            ("coupling_bound", runner.check_coupling),
            ("hydraulic_positivity", runner.check_positivity),
        ):
            if name in wanted:
                method()
        if subcommand == "simulate":
            runner.check_simulation()
        report = runner.report()
    emit_report(report, cfg.out_dir, runner)
    status = EXIT_CHECK_FAILED if report.failed() else EXIT_OK
    return status, report


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="towerstab",
        description="Assemble, check, scan and simulate tower stability models.",
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", default=None, help="path to a JSON config file")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--threads", type=int, default=None)
    args = parser.parse_args(argv)
    overrides = {"out_dir": args.out, "seed": args.seed, "threads": args.threads}
    try:
        cfg = load_config(args.config, overrides)
        status, report = run(args.subcommand, cfg)
    except ValidationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    for check in report.checks:
        print(f"{check.name}: {check.status}")
    if status != EXIT_OK:
        print(f"failed checks: {', '.join(report.failed())}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
