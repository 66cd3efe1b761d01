"""
bqm: batch command line for banach-qm

    bqm check|measure|evolve|scan --config job.json [--out out.csv] [--seed N] [--tol T]

Exit codes:
    0  success (and, for check/measure, the quantity or event is physical)
    1  input error (malformed JSON, dimension mismatch, non-diagonalizable
       operator, not a projection, sampling at a non-physical state, ...)
    2  check/measure completed but the state is not physical
"""

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

import numpy as np

from . import __version__, config
from .dynamics import trajectory
from .errors import BanachQMError, ConfigError
from .jobs import JobConfig, load_job, parse_matrix, parse_vector, resolve_operator, resolve_state
from .measurement import eigen_basis, sample_outcomes, transition_probabilities
from .services import report_service, table_service
from .sip_space import normalize
from .states import is_physical_event, is_physical_quantity, point_state

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NOT_PHYSICAL = 2


def _status(message: str) -> None:
    print(message, file=sys.stderr)


def _emit(text: str, path: Optional[str]) -> None:
    target = table_service.write(text, path)
    if target is None:
        sys.stdout.write(text)
    else:
        _status(f"✅ Wrote {target}")


def _output_path(job: JobConfig, args: argparse.Namespace) -> Optional[str]:
    return args.out if args.out is not None else job.output


def _seed(job: JobConfig, args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    return job.seed if job.seed is not None else 0


def _require_vector(job: JobConfig) -> List:
    if job.state is None or job.state.vector is None:
        raise ConfigError("this command needs 'state.vector'")
    return job.state.vector


def cmd_check(job: JobConfig, config_hash: str, args: argparse.Namespace) -> int:
    """Physicality of the job's event, or of every spectral projection of its operator"""
    space = job.build_space()
    state = resolve_state(job, space)

    closed_form = None
    if job.event is not None:
        verdict = is_physical_event(state, parse_matrix(space, job.event), label="P")
        subject = "event P"
    else:
        _, decomposition, scenario = resolve_operator(job, space)
        verdict = is_physical_quantity(state, decomposition)
        subject = scenario.name if scenario is not None else "operator"
        if scenario is not None and state.is_point_state:
            u, v = state.vector
            closed_form = scenario.closed_form(u, v)

    report = report_service.generate_check_report("check", verdict, state, subject, closed_form)
    print(report_service.generate_text_report(report))

    path = _output_path(job, args)
    if path is not None:
        rows = [{"label": e.label, "value_re": e.value.real, "value_im": e.value.imag, "reason": ""}
                for e in verdict.evaluations]
        rows += [{"label": v.label, "value_re": v.value.real, "value_im": v.value.imag, "reason": v.reason}
                 for v in verdict.violations]
        frame = table_service.to_frame(rows, ["label", "value_re", "value_im", "reason"])
        _emit(table_service.render_csv(frame, "check", config_hash), path)

    return EXIT_OK if verdict.is_physical else EXIT_NOT_PHYSICAL


def cmd_measure(job: JobConfig, config_hash: str, args: argparse.Namespace) -> int:
    """Born statistics of the operator at a pure state, optionally sampled"""
    space = job.build_space()
    _, decomposition, scenario = resolve_operator(job, space)
    basis = eigen_basis(space, decomposition)
    report = transition_probabilities(space, basis, parse_vector(space, _require_vector(job)))

    samples = None
    counts = None
    if job.shots > 0:
        drawn = sample_outcomes(report, _seed(job, args), job.shots)
        counts = np.bincount(drawn, minlength=len(report.eigenvalue_outcomes))
        samples = {o.eigenvalue: int(counts[i]) for i, o in enumerate(report.eigenvalue_outcomes)}

    rows = []
    cumulative = 0.0
    for i, outcome in enumerate(report.eigenvalue_outcomes):
        cumulative += outcome.raw_value.real
        row = {
            "outcome_index": outcome.index,
            "eigenvalue": outcome.eigenvalue,
            "prob_real": outcome.raw_value.real,
            "prob_imag": outcome.raw_value.imag,
            "cumulative": cumulative,
        }
        if counts is not None:
            row["sampled"] = int(counts[i])
        rows.append(row)

    columns = ["outcome_index", "eigenvalue", "prob_real", "prob_imag", "cumulative"]
    if counts is not None:
        columns.append("sampled")
    footer = table_service.to_frame(
        [{
            "expectation_real": report.expectation.real,
            "expectation_imag": report.expectation.imag,
            "conservation_residual": report.conservation_residual,
        }],
        ["expectation_real", "expectation_imag", "conservation_residual"],
    )
    _emit(table_service.render_csv(table_service.to_frame(rows, columns), "measure", config_hash, footer),
          _output_path(job, args))

    subject = scenario.name if scenario is not None else "operator"
    summary = report_service.generate_measurement_report(report, subject, samples)
    _status(report_service.generate_text_report(summary))

    return EXIT_OK if report.physical else EXIT_NOT_PHYSICAL


def cmd_evolve(job: JobConfig, config_hash: str, args: argparse.Namespace) -> int:
    """Trajectory x(t) = U(t) x0 on the job's time grid"""
    if job.times is None:
        raise ConfigError("evolve needs a 'times' grid")
    space = job.build_space()
    _, decomposition, _ = resolve_operator(job, space)
    x0 = parse_vector(space, _require_vector(job))
    basis = eigen_basis(space, decomposition) if job.probabilities else None

    points = trajectory(space, decomposition, x0, job.times.values(), basis, job.ode_steps)

    columns = ["t"]
    for i in range(space.dim):
        columns += [f"x{i}_re", f"x{i}_im"]
    columns += ["p_norm", "norm_drift"]
    if basis is not None:
        for k in range(decomposition.size):
            columns += [f"prob{k}_re", f"prob{k}_im"]
        columns.append("physical")
    if job.ode_steps is not None:
        columns.append("ode_residual")

    rows = []
    for point in points:
        row = {"t": point["t"], "p_norm": point["p_norm"], "norm_drift": point["norm_drift"]}
        for i, value in enumerate(point["state"]):
            row[f"x{i}_re"] = value.real
            row[f"x{i}_im"] = value.imag
        if basis is not None:
            report = point["report"]
            for k, outcome in enumerate(report.eigenvalue_outcomes):
                row[f"prob{k}_re"] = outcome.raw_value.real
                row[f"prob{k}_im"] = outcome.raw_value.imag
            row["physical"] = report.physical
        if "ode_residual" in point:
            row["ode_residual"] = point["ode_residual"]
        rows.append(row)

    _emit(table_service.render_csv(table_service.to_frame(rows, columns), "evolve", config_hash),
          _output_path(job, args))

    drift = max(abs(point["norm_drift"]) for point in points)
    if drift > config.settings.tol:
        _status(f"⚠️  p-norm is not preserved: max |drift| = {drift:.6g}")
    else:
        _status("✅ p-norm preserved along the trajectory")
    return EXIT_OK


def cmd_scan(job: JobConfig, config_hash: str, args: argparse.Namespace) -> int:
    """Physicality map of a qubit scenario over a grid of pure states"""
    if job.state is None or job.state.sweep is None:
        raise ConfigError("scan needs 'state.sweep'")
    space = job.build_space()
    _, decomposition, scenario = resolve_operator(job, space)
    if scenario is None:
        raise ConfigError("scan needs a named 'operator.scenario'")

    def evaluate_point(item):
        index, theta, phi = item
        z = normalize(space, [np.cos(theta), np.sin(theta) * np.exp(1j * phi)])
        u, v = complex(z[0]), complex(z[1])
        verdict = is_physical_quantity(point_state(space, z), decomposition)
        plus, minus = scenario.condition_values(u, v)
        return {
            "index": index,
            "theta": theta,
            "phi": phi,
            "u_re": u.real,
            "u_im": u.imag,
            "v_re": v.real,
            "v_im": v.imag,
            "verdict": verdict.is_physical,
            "closed_form": scenario.closed_form(u, v),
            "condition_value_plus": complex(plus).real,
            "condition_value_minus": complex(minus).real,
            "condition_imag": max(abs(complex(plus).imag), abs(complex(minus).imag)),
        }

    workers = job.workers or config.settings.scan_workers
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(evaluate_point, job.state.sweep.grid()))

    columns = ["index", "theta", "phi", "u_re", "u_im", "v_re", "v_im", "verdict", "closed_form",
               "condition_value_plus", "condition_value_minus", "condition_imag"]
    _emit(table_service.render_csv(table_service.to_frame(rows, columns), "scan", config_hash),
          _output_path(job, args))

    physical = sum(1 for row in rows if row["verdict"])
    disagreements = sum(1 for row in rows if row["verdict"] != row["closed_form"])
    _status(f"✅ {scenario.name} at p={space.p:g}: {physical}/{len(rows)} grid points physical")
    if disagreements:
        _status(f"⚠️  {disagreements} grid point(s) where the closed form disagrees (boundary band)")
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "measure": cmd_measure,
    "evolve": cmd_evolve,
    "scan": cmd_scan,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bqm", description="Quantum formalism on l_p^n spaces")
    parser.add_argument("--version", action="version", version=f"banach-qm {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, handler in COMMANDS.items():
        sub = subparsers.add_parser(name, help=handler.__doc__)
        sub.add_argument("--config", required=True, help="job file (JSON)")
        sub.add_argument("--out", default=None, help="output path (default: stdout)")
        sub.add_argument("--seed", type=int, default=None, help="sampling seed")
        sub.add_argument("--tol", type=float, default=None, help="absolute tolerance (overrides BQM_TOL)")
        sub.add_argument("--verbose", action="store_true", help="debug logging")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        job, config_hash = load_job(args.config)
        overrides = job.tolerances.model_dump(exclude_none=True) if job.tolerances else {}
        if args.tol is not None:
            overrides["tol"] = args.tol
        config.configure(**overrides)
        if args.seed is not None and not 0 <= args.seed < 2**64:
            raise ConfigError("--seed must be an unsigned 64-bit integer")
        return COMMANDS[args.command](job, config_hash, args)
    except BanachQMError as e:
        _status(f"❌ {type(e).__name__}: {e}")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
