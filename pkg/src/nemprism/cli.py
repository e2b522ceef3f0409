"""Command-line front end: flag parsing, JSON/CSV emission, exit codes.

Every command reads its inputs from flags (or from a JSON job file via
``--job``), runs one computation, and writes a single JSON or CSV artifact
to stdout or to ``--out``.  Output bytes are deterministic for fixed inputs
and tolerances.  Exit codes: 0 success, 1 invalid input (the message names
the offending flag or field), 2 numerical-accuracy failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, fields
from typing import List, Optional, Sequence, Tuple

__all__ = ["Job", "run", "main"]

_COMMANDS = ("invariants", "bounds", "energy", "sweep", "minimize", "field")

# Which of spec / family each command requires; the other must be absent.
_NEEDS = {
    "invariants": "spec",
    "bounds": None,
    "energy": "spec",
    "sweep": "family",
    "minimize": "family",
    "field": "spec",
}


@dataclass(frozen=True)
class Job:
    """One fully described unit of work, JSON round-trippable."""

    command: str
    prism: Optional[Tuple[float, float, float]] = None
    spec: Optional[dict] = None
    family: Optional[str] = None
    K: float = 1.0
    K1: Optional[float] = None
    K2: Optional[float] = None
    K3: Optional[float] = None
    tol: float = 1e-6
    quad_tol: float = 1e-5
    omega0: Optional[float] = None
    range: Tuple[float, float] = (0.05, 0.95)
    steps: int = 19
    grid: int = 16
    lp_constraints: str = "all-pairs"
    out: Optional[str] = None
    seed: Optional[int] = None
    threads: Optional[int] = None

    def __post_init__(self):
        if self.command not in _COMMANDS:
            raise ValueError(
                f"command must be one of {', '.join(_COMMANDS)}, got {self.command!r}"
            )
        needs = _NEEDS[self.command]
        if needs == "spec":
            if self.spec is None:
                raise ValueError(f"command {self.command!r} requires 'spec'")
            if self.family is not None:
                raise ValueError(f"command {self.command!r} takes 'spec', not 'family'")
        elif needs == "family":
            if self.family is None:
                raise ValueError(f"command {self.command!r} requires 'family'")
            if self.spec is not None:
                raise ValueError(f"command {self.command!r} takes 'family', not 'spec'")
        else:
            if self.spec is not None or self.family is not None:
                raise ValueError(f"command {self.command!r} takes neither 'spec' nor 'family'")
        if self.command == "bounds" and self.omega0 is None:
            raise ValueError("command 'bounds' requires 'omega0'")
        if self.command != "invariants" and self.prism is None:
            raise ValueError(f"command {self.command!r} requires 'prism'")
        if self.lp_constraints not in ("all-pairs", "edges"):
            raise ValueError(
                f"lp_constraints must be 'all-pairs' or 'edges', got {self.lp_constraints!r}"
            )

    def to_dict(self) -> dict:
        data = asdict(self)
        data["prism"] = None if self.prism is None else list(self.prism)
        data["range"] = list(self.range)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "Job":
        if not isinstance(data, dict):
            raise ValueError(f"job must be a JSON object, got {type(data).__name__}")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown job field(s): {', '.join(sorted(unknown))}")
        if "command" not in data:
            raise ValueError("job field 'command' is required")
        kwargs = dict(data)
        if kwargs.get("prism") is not None:
            p = kwargs["prism"]
            if len(p) != 3:
                raise ValueError(f"job field 'prism' must have three entries, got {p!r}")
            kwargs["prism"] = tuple(float(v) for v in p)
        if kwargs.get("range") is not None:
            r = kwargs["range"]
            if len(r) != 2:
                raise ValueError(f"job field 'range' must have two entries, got {r!r}")
            kwargs["range"] = (float(r[0]), float(r[1]))
        return cls(**kwargs)


# ----------------------------------------------------------------------
# Flag parsing
# ----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits 1 on bad input (2 is reserved)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _prism_arg(text: str) -> Tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"expected three comma-separated side lengths, got {text!r}"
        )
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"side lengths must be decimals, got {text!r}")


def _range_arg(text: str) -> Tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"range bounds must be decimals, got {text!r}")
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"range must satisfy lo < hi, got {text!r}")
    return lo, hi


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="nemprism",
        description="Tangent unit-vector configurations on a box: "
        "invariants, energy bounds, exact energies, and parameter sweeps.",
    )
    parser.add_argument(
        "--job",
        metavar="FILE",
        help="run a JSON job file instead of passing flags",
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="FILE", help="write the artifact here instead of stdout")
    common.add_argument("--seed", type=int, help="seed for randomized sampling, where a command uses any")
    common.add_argument(
        "--threads",
        type=int,
        help="cap threads used by vectorized kernels (current kernels are single-threaded)",
    )

    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("invariants", parents=[common], help="closed-form invariants with numeric cross-checks")
    p.add_argument("--spec", required=True, metavar="FILE", help="rational-map JSON file")
    p.add_argument("--tol", type=float, default=1e-6, help="quadrature tolerance for the numeric solid angle")

    p = sub.add_parser("bounds", parents=[common], help="topological bounds from a trapped solid angle")
    p.add_argument("--prism", required=True, type=_prism_arg, metavar="LX,LY,LZ")
    p.add_argument("--omega0", required=True, type=float, help="trapped solid angle in radians")
    p.add_argument("--K", type=float, default=1.0, help="one-constant elastic modulus")
    p.add_argument("--K1", type=float, help="splay constant (give all three for a min-constant bound)")
    p.add_argument("--K2", type=float, help="twist constant")
    p.add_argument("--K3", type=float, help="bend constant")
    p.add_argument(
        "--lp-constraints",
        choices=("all-pairs", "edges"),
        default="all-pairs",
        help="vertex pairs constrained in the LP certificate",
    )

    p = sub.add_parser("energy", parents=[common], help="exact energy with bounds")
    p.add_argument("--prism", required=True, type=_prism_arg, metavar="LX,LY,LZ")
    p.add_argument("--spec", required=True, metavar="FILE")
    p.add_argument("--K", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-6, help="absolute energy tolerance")

    p = sub.add_parser("sweep", parents=[common], help="energy across a family parameter, as CSV")
    p.add_argument("--family", required=True, help="built-in family name (for example imag1)")
    p.add_argument("--prism", required=True, type=_prism_arg, metavar="LX,LY,LZ")
    p.add_argument("--range", type=_range_arg, default=(0.05, 0.95), metavar="LO:HI")
    p.add_argument("--steps", type=int, default=19, help="number of parameter values")
    p.add_argument("--K", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-6, help="absolute energy tolerance per value")

    p = sub.add_parser("minimize", parents=[common], help="minimize scaled energy over a family")
    p.add_argument("--family", required=True)
    p.add_argument("--prism", required=True, type=_prism_arg, metavar="LX,LY,LZ")
    p.add_argument("--K", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-3, help="parameter resolution")
    p.add_argument("--quad-tol", type=float, default=1e-5, help="energy tolerance inside the search")

    p = sub.add_parser("field", parents=[common], help="director samples on an octant grid, as CSV")
    p.add_argument("--spec", required=True, metavar="FILE")
    p.add_argument("--prism", required=True, type=_prism_arg, metavar="LX,LY,LZ")
    p.add_argument(
        "--grid",
        type=int,
        default=16,
        help="subdivisions per axis; samples sit at the grid nodes, the singular vertex excluded",
    )

    return parser


def _job_from_args(args: argparse.Namespace) -> Job:
    kwargs = {"command": args.command}
    for name in (
        "prism", "family", "K", "K1", "K2", "K3", "tol", "quad_tol",
        "omega0", "range", "steps", "grid", "lp_constraints",
        "out", "seed", "threads",
    ):
        attr = name
        if hasattr(args, attr) and getattr(args, attr) is not None:
            kwargs[name] = getattr(args, attr)
    if getattr(args, "spec", None) is not None:
        try:
            with open(args.spec, "r", encoding="utf-8") as fh:
                kwargs["spec"] = json.load(fh)
        except OSError as exc:
            raise ValueError(f"--spec: cannot read {args.spec!r}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ValueError(f"--spec: {args.spec!r} is not valid JSON: {exc}") from exc
    try:
        return Job(**kwargs)
    except ValueError as exc:
        raise ValueError(f"invalid flags: {exc}") from exc


# ----------------------------------------------------------------------
# Command handlers (heavy imports happen here, after thread caps apply)
# ----------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _emit_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _run_invariants(job: Job) -> str:
    from .conformal import RationalMapSpec
    from .invariants import invariants_report

    spec = RationalMapSpec.from_dict(job.spec)
    return _emit_json(invariants_report(spec, tol=job.tol))


def _run_bounds(job: Job) -> str:
    from .energy import (
        ElasticConstants,
        EnergyReport,
        bound_ratio,
        lower_bound_prism,
        prism_lp_certificate,
        upper_bound_prism,
    )
    from .geometry import make_prism

    prism = make_prism(*job.prism)
    constants = ElasticConstants(job.K, job.K1, job.K2, job.K3)
    report = EnergyReport(
        lower=lower_bound_prism(prism, job.omega0, job.K),
        upper=upper_bound_prism(prism, job.omega0, job.K),
        ratio=bound_ratio(prism),
    )
    payload = report.to_dict()
    cert = prism_lp_certificate(prism, job.omega0, job.K, constraints=job.lp_constraints)
    payload["lp"] = cert.to_dict()
    if constants.min_constant() != job.K:
        payload["lower_min_constant"] = lower_bound_prism(
            prism, job.omega0, constants.min_constant()
        )
    return _emit_json(payload)


def _run_energy(job: Job) -> str:
    from .conformal import RationalMapSpec
    from .energy import energy_report
    from .geometry import make_prism

    prism = make_prism(*job.prism)
    spec = RationalMapSpec.from_dict(job.spec)
    report = energy_report(prism, spec, K=job.K, tol=job.tol)
    return _emit_json(report.to_dict())


def _run_sweep(job: Job) -> str:
    import numpy as np

    from .geometry import make_prism
    from .sweep import builtin_family, sweep_energy

    prism = make_prism(*job.prism)
    family = builtin_family(job.family)
    if family.has_parameter:
        if job.steps < 1:
            raise ValueError(f"--steps must be at least 1, got {job.steps}")
        values = np.linspace(job.range[0], job.range[1], job.steps)
    else:
        values = []
    rows = sweep_energy(family, prism, values, K=job.K, tol=job.tol)
    lines = ["s,E,E_err,eps_scaled,lower,upper"]
    for row in rows:
        s = "" if row.s is None else _fmt(row.s)
        lines.append(
            ",".join(
                [s] + [_fmt(v) for v in (row.energy, row.energy_err, row.scaled, row.lower, row.upper)]
            )
        )
    return "\n".join(lines) + "\n"


def _run_minimize(job: Job) -> str:
    from .geometry import make_prism
    from .sweep import builtin_family, minimize_family

    prism = make_prism(*job.prism)
    family = builtin_family(job.family)
    result, classification = minimize_family(
        family, prism, K=job.K, tol=job.tol, quad_tol=job.quad_tol
    )
    payload = result.to_dict()
    payload["classification"] = classification
    return _emit_json(payload)


def _run_field(job: Job) -> str:
    import numpy as np

    from .conformal import RationalMapSpec, _director_many
    from .geometry import make_prism

    if job.grid < 1:
        raise ValueError(f"--grid must be at least 1, got {job.grid}")
    prism = make_prism(*job.prism)
    spec = RationalMapSpec.from_dict(job.spec)
    hx, hy, hz = prism.octant.half_lengths
    axes = [np.linspace(0.0, h, job.grid + 1) for h in (hx, hy, hz)]
    X, Y, Z = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([X.reshape(-1), Y.reshape(-1), Z.reshape(-1)], axis=-1)
    keep = np.sum(pts * pts, axis=-1) > 0.0  # drop the singular vertex
    pts = pts[keep]
    n = _director_many(spec, pts)
    lines = ["x,y,z,nx,ny,nz"]
    for p, v in zip(pts, n):
        lines.append(",".join(_fmt(c) for c in (*p, *v)))
    return "\n".join(lines) + "\n"


_HANDLERS = {
    "invariants": _run_invariants,
    "bounds": _run_bounds,
    "energy": _run_energy,
    "sweep": _run_sweep,
    "minimize": _run_minimize,
    "field": _run_field,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse flags (or a job file), execute, emit the artifact.

    Returns the process exit code; all error text goes to stderr.
    """
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.job is not None:
            if args.command is not None:
                raise ValueError("--job: give either a job file or a command, not both")
            try:
                with open(args.job, "r", encoding="utf-8") as fh:
                    job = Job.from_dict(json.load(fh))
            except OSError as exc:
                raise ValueError(f"--job: cannot read {args.job!r}: {exc}") from exc
            except json.JSONDecodeError as exc:
                raise ValueError(f"--job: {args.job!r} is not valid JSON: {exc}") from exc
        elif args.command is None:
            parser.error("a command or --job is required")
        else:
            job = _job_from_args(args)

        if job.threads is not None:
            if job.threads < 1:
                raise ValueError(f"--threads must be at least 1, got {job.threads}")
            for var in (
                "OMP_NUM_THREADS",
                "OPENBLAS_NUM_THREADS",
                "MKL_NUM_THREADS",
                "NUMEXPR_NUM_THREADS",
            ):
                os.environ[var] = str(job.threads)

        payload = _HANDLERS[job.command](job)
    except SystemExit as exc:
        # argparse --help exits 0; flag errors exit 1 via _Parser.error.
        return int(exc.code) if exc.code else 0
    except (ValueError, LookupError) as exc:
        print(f"nemprism: error: {exc}", file=sys.stderr)
        return 1
    except RuntimeError as exc:
        from .errors import AccuracyError

        detail = ""
        if isinstance(exc, AccuracyError):
            detail = f"; best estimate {exc.value!r}"
        print(f"nemprism: accuracy failure: {exc}{detail}", file=sys.stderr)
        return 2

    if job.out is not None:
        try:
            with open(job.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(payload)
        except OSError as exc:
            print(f"nemprism: error: --out: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(payload)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
