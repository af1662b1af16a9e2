"""Command-line front end: parameter sweeps, SLD dumps and oracle checks.

Usage::

    fermifisher run CONFIG.json [--output PATH]
    fermifisher check --modes N --trials T --seed S
    fermifisher sld-dump CONFIG.json --point X1,X2,... [--output PATH] [--no-dense]

Exit codes: 0 success, 1 check failure, 2 configuration or usage error,
3 numerical failure.  ``FERMIFISHER_THREADS`` caps the number of worker
threads for sweeps (0 or unset: one per CPU).
"""

import argparse
import csv
import io
import itertools
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import gaussian, models, oracle, sld, validation
from .config import N_MAX
from .errors import DomainError, FermiFisherError, NonPdCost

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    family_name: str
    family_args: dict
    points: tuple
    outputs: tuple
    output_path: Path
    derivative: str = "analytic"
    h: float = 1e-4
    richardson: bool = True
    cost_matrix: np.ndarray = None
    fmt: str = "csv"
    method: str = "eigen"
    singular_policy: str = "zero"
    compatibility_tol: float = 1e-10
    seed: int = 0
    family: models.StateFamily = field(default=None, compare=False, repr=False)


def load_schema():
    text = resources.files("fermifisher").joinpath("config_schema.json").read_text()
    return json.loads(text)


def _error_path(err):
    return "/" + "/".join(str(p) for p in err.absolute_path)


def parse_config(obj, base_dir=Path(".")):
    """Validate a decoded JSON config and resolve it into a :class:`RunConfig`."""
    validator = jsonschema.Draft202012Validator(load_schema())
    err = jsonschema.exceptions.best_match(validator.iter_errors(obj))
    if err is not None:
        raise ConfigError(f"config {_error_path(err)}: {err.message}")

    fam = obj["family"]
    try:
        family = models.build_family(fam["name"], **fam.get("args", {}))
    except (TypeError, ValueError, FermiFisherError) as exc:
        raise ConfigError(f"config /family: {exc}") from None
    d = family.dim

    grid = obj["grid"]
    if "axes" in grid:
        axes = grid["axes"]
        unknown = set(axes) - set(family.parameter_names)
        missing = set(family.parameter_names) - set(axes)
        if unknown or missing:
            raise ConfigError(
                f"config /grid/axes: expected parameters {list(family.parameter_names)}, "
                f"unknown {sorted(unknown)}, missing {sorted(missing)}"
            )
        values = [
            np.linspace(axes[name]["min"], axes[name]["max"], axes[name]["steps"])
            for name in family.parameter_names
        ]
        points = [tuple(float(x) for x in p) for p in itertools.product(*values)]
    else:
        points = [tuple(float(x) for x in p) for p in grid["points"]]
    for i, p in enumerate(points):
        if len(p) != d:
            raise ConfigError(f"config /grid/points/{i}: expected {d} values, got {len(p)}")
        try:
            family.check_point(p)
        except DomainError as exc:
            raise ConfigError(f"config /grid: point {i}: {exc}") from None

    deriv = obj.get("derivative", {})
    method = deriv.get("method", "analytic" if family.analytic_derivatives else "finite_diff")
    if method == "analytic" and family.analytic_derivatives is None:
        raise ConfigError(f"config /derivative/method: family {family.name} has no analytic derivatives")

    outputs = tuple(obj["outputs"])
    cost = obj.get("cost_matrix")
    if cost is not None:
        cost = np.array(cost, dtype=float)
        if cost.shape != (d, d):
            raise ConfigError(f"config /cost_matrix: expected {d}x{d}, got {cost.shape}")
        try:
            sld.cr_bound_scalar(np.eye(d), cost)
        except NonPdCost as exc:
            raise ConfigError(f"config /cost_matrix: {exc}") from None
    elif "bound" in outputs:
        raise ConfigError("config /cost_matrix: required when outputs include 'bound'")

    out = Path(obj["output_path"])
    if not out.is_absolute():
        out = Path(base_dir) / out

    return RunConfig(
        family_name=fam["name"],
        family_args=fam.get("args", {}),
        points=tuple(points),
        outputs=outputs,
        output_path=out,
        derivative=method,
        h=float(deriv.get("h", 1e-4)),
        richardson=bool(deriv.get("richardson", True)),
        cost_matrix=cost,
        fmt=obj.get("format", "csv"),
        method=obj.get("method", "eigen"),
        singular_policy=obj.get("singular_policy", "zero"),
        compatibility_tol=float(obj.get("compatibility_tol", 1e-10)),
        seed=int(obj.get("seed", 0)),
        family=family,
    )


def load_config(path):
    """Read, validate and resolve a JSON config file.  Relative output paths
    are taken relative to the config file's directory."""
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    return parse_config(obj, path.parent)


def thread_count():
    raw = os.environ.get("FERMIFISHER_THREADS", "0").strip() or "0"
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"FERMIFISHER_THREADS must be an integer, got {raw!r}") from None
    if value < 0:
        raise ConfigError(f"FERMIFISHER_THREADS must be >= 0, got {value}")
    return value or (os.cpu_count() or 1)


def _tangents(config, point):
    family = config.family
    if config.derivative == "analytic":
        return family.derivatives(point)
    return [
        models.finite_diff(family, point, mu, config.h, config.richardson) for mu in range(family.dim)
    ]


def _label(prefix, m, n, d):
    return f"{prefix}_{m + 1}{n + 1}" if d < 10 else f"{prefix}_{m + 1}_{n + 1}"


def columns(config):
    """CSV column names for a config, in schema order."""
    names = list(config.family.parameter_names)
    d = config.family.dim
    if "qfim" in config.outputs:
        names += [_label("J", m, n, d) for m in range(d) for n in range(m, d)]
    if "uhlmann" in config.outputs:
        names += [_label("U", m, n, d) for m in range(d) for n in range(m + 1, d)]
        names += ["compatible", "max_abs_U"]
    if "purity" in config.outputs:
        names.append("purity")
    if "bound" in config.outputs:
        names.append("bound")
    return names


def compute_row(config, point):
    """One report row (a dict) for a parameter point."""
    family = config.family
    g = gaussian.as_correlation(family.correlation(point))
    tangents = _tangents(config, point)
    result = sld.qfim(g, tangents, method=config.method, policy=config.singular_policy)
    j, u = result.j_matrix, result.u_matrix
    if not (np.all(np.isfinite(j)) and np.all(np.isfinite(u))):
        raise FloatingPointError("non-finite QFIM or curvature")
    row = {"point": dict(zip(family.parameter_names, (float(x) for x in point)))}
    if "qfim" in config.outputs:
        row["J"] = j.tolist()
    if "uhlmann" in config.outputs:
        comp = sld.compatibility_check(result, config.compatibility_tol)
        row["U"] = u.tolist()
        row["compatible"] = comp.compatible
        row["max_abs_U"] = comp.max_abs_u
    if "purity" in config.outputs:
        row["purity"] = gaussian.purity(g)
    if "bound" in config.outputs:
        row["bound"] = sld.cr_bound_scalar(result, config.cost_matrix)
    row["diagnostics"] = {
        "singular_pairs": list(result.singular_pairs),
        "residuals": list(result.residuals),
    }
    if "sld_dump" in config.outputs:
        row["_slds"] = [s.to_dict() for s in result.slds]
    return row


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _flatten(config, row):
    d = config.family.dim
    values = list(row["point"].values())
    if "qfim" in config.outputs:
        values += [row["J"][m][n] for m in range(d) for n in range(m, d)]
    if "uhlmann" in config.outputs:
        values += [row["U"][m][n] for m in range(d) for n in range(m + 1, d)]
        values += [row["compatible"], row["max_abs_U"]]
    if "purity" in config.outputs:
        values.append(row["purity"])
    if "bound" in config.outputs:
        values.append(row["bound"])
    return [_fmt(v) for v in values]


def render_csv(config, rows):
    buf = io.StringIO()
    buf.write(f"# fermifisher report schema {SCHEMA_VERSION}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns(config))
    for row in rows:
        writer.writerow(_flatten(config, row))
    return buf.getvalue()


def render_json(config, rows):
    public = []
    for row in rows:
        row = {k: v for k, v in row.items() if not k.startswith("_")}
        public.append({"schema_version": SCHEMA_VERSION, **row})
    return json.dumps(public, indent=1) + "\n"


def _safe_row(config, point):
    try:
        return compute_row(config, point), None
    except (FermiFisherError, np.linalg.LinAlgError, FloatingPointError) as exc:
        return None, exc


def sweep(config, threads=1):
    """Evaluate every grid point; returns ``(rows, (index, point, exc) or None)``.

    Rows come back in grid order whatever the thread count.
    """
    points = list(config.points)
    if threads > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda p: _safe_row(config, p), points))
    else:
        results = [_safe_row(config, p) for p in points]
    rows = []
    for i, (row, exc) in enumerate(results):
        if exc is not None:
            return rows, (i, points[i], exc)
        rows.append(row)
    return rows, None


def _write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def run(config, threads=1):
    """Execute a sweep and write its outputs.  Returns an exit code."""
    rows, failure = sweep(config, threads)
    out = config.output_path
    if failure is not None:
        i, point, exc = failure
        report = {
            "index": i,
            "point": dict(zip(config.family.parameter_names, point)),
            "error": type(exc).__name__,
            "message": str(exc),
        }
        _write(Path(f"{out}.error.json"), json.dumps(report, indent=1) + "\n")
        logger.error("numerical failure at grid point %d %s: %s", i, point, exc)
        return EXIT_NUMERIC
    text = render_csv(config, rows) if config.fmt == "csv" else render_json(config, rows)
    _write(out, text)
    if "sld_dump" in config.outputs:
        dumps = [
            {"point": row["point"], "parameters": _named(config, row["_slds"])} for row in rows
        ]
        _write(Path(f"{out}.sld.json"), json.dumps(dumps, indent=1) + "\n")
    return EXIT_OK


def _named(config, sld_dicts):
    return [{"name": name, **s} for name, s in zip(config.family.parameter_names, sld_dicts)]


def sld_dump(config, point, dense=True):
    """SLD data at one point as a JSON-ready dict.

    Holds ``K`` (real representative) and ``eta`` per parameter and, for
    small systems with ``dense=True``, the spectrum and eigenbasis of the
    dense SLD, which is the optimal projective measurement.
    """
    family = config.family
    point = family.check_point(point)
    g = gaussian.as_correlation(family.correlation(point))
    tangents = _tangents(config, point)
    params = []
    for name, t in zip(family.parameter_names, tangents):
        s = sld.solve_k(g, t, policy=config.singular_policy)
        entry = {"name": name, **s.to_dict()}
        if dense and g.modes <= N_MAX:
            values, vectors = np.linalg.eigh(oracle.dense_quadratic(s.k_rep, s.eta))
            entry["dense"] = {
                "spectrum": values.tolist(),
                "eigenvectors_real": vectors.real.tolist(),
                "eigenvectors_imag": vectors.imag.tolist(),
            }
        params.append(entry)
    return {
        "schema_version": SCHEMA_VERSION,
        "family": config.family_name,
        "point": dict(zip(family.parameter_names, (float(x) for x in point))),
        "modes": g.modes,
        "correlation": g.rep.tolist(),
        "tangents": [np.asarray(t).tolist() for t in tangents],
        "parameters": params,
    }


def load_sld_dump(path):
    """Read the ``(K, eta)`` pairs back from an :func:`sld_dump` file."""
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    return [sld.SldQuadratic.from_dict(p) for p in obj["parameters"]]


def _print_check(outcomes, n, trials, seed, stream):
    print(f"check: modes={n} trials={trials} seed={seed}", file=stream)
    print(f"{'check':<15} {'worst':>12} {'tolerance':>10}  status", file=stream)
    for name, o in outcomes.items():
        if o.samples == 0:
            print(f"{name:<15} {'-':>12} {o.tolerance:>10.0e}  skipped", file=stream)
            continue
        status = "PASS" if o.passed else "FAIL"
        print(f"{name:<15} {o.worst:>12.3e} {o.tolerance:>10.0e}  {status}", file=stream)
    for name, o in outcomes.items():
        for instance, value in o.failures:
            print(
                f"FAIL {name}: value {value:.3e} at instance seed={list(instance)} "
                f"(numpy.random.default_rng({list(instance)}))",
                file=stream,
            )


def build_parser():
    parser = argparse.ArgumentParser(prog="fermifisher", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="sweep a parameter grid from a JSON config")
    p_run.add_argument("config")
    p_run.add_argument("--output", help="override output_path from the config")

    p_check = sub.add_parser("check", help="cross-validate against the dense oracle")
    p_check.add_argument("--modes", type=int, required=True)
    p_check.add_argument("--trials", type=int, required=True)
    p_check.add_argument("--seed", type=int, default=0)

    p_dump = sub.add_parser("sld-dump", help="write K, eta and the SLD eigenbasis at one point")
    p_dump.add_argument("config")
    p_dump.add_argument("--point", required=True, help="comma-separated parameter values")
    p_dump.add_argument("--output", help="output file (default: <output_path>.sld.json)")
    p_dump.add_argument("--no-dense", action="store_true", help="skip the dense SLD spectrum")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK

    if args.command == "check":
        if not 1 <= args.modes <= N_MAX:
            print(f"error: --modes must be in 1..{N_MAX}", file=sys.stderr)
            return EXIT_CONFIG
        if args.trials < 1:
            print("error: --trials must be positive", file=sys.stderr)
            return EXIT_CONFIG
        outcomes = validation.run_checks(args.modes, args.trials, args.seed)
        _print_check(outcomes, args.modes, args.trials, args.seed, sys.stdout)
        return EXIT_OK if all(o.passed for o in outcomes.values()) else EXIT_CHECK

    try:
        config = load_config(args.config)
        if args.output:
            config = replace(config, output_path=Path(args.output))
        if args.command == "run":
            return run(config, thread_count())
        point = [float(x) for x in args.point.split(",")]
        try:
            payload = sld_dump(config, point, dense=not args.no_dense)
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
        out = Path(args.output) if args.output else Path(f"{config.output_path}.sld.json")
        _write(out, json.dumps(payload, indent=1) + "\n")
        return EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FermiFisherError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
