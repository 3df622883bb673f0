"""weakplateau command line: generate, classify, solve, pipeline, compare, check."""

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from weakplateau.core.config import ROUTE_ALIASES, ROUTE_MODES, SolverConfig, Tolerances
from weakplateau.errors import NonConvergence, PlateauError, VERIFICATION_ERRORS
from weakplateau.reports.formats import read_curve, read_mesh, write_curve, write_mesh, as_disk
from weakplateau.reports.report import RunReport, mesh_check
from weakplateau.reports.storage import append_session_entry, config_hash, input_hash, new_run_dir, write_meta

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVALID_INPUT = 2
EXIT_NONCONVERGENCE = 3
EXIT_VERIFICATION = 4

ROUTE_CHOICES = ROUTE_MODES + tuple(ROUTE_ALIASES)


def _common_options() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand from clobbering flags given before it
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--tol-scale", type=float, help="Multiply every geometric tolerance")
    common.add_argument("--refine", type=int, dest="refine_levels", help="Subdivision levels for seed disks")
    common.add_argument("--max-iters", type=int, dest="max_iterations", help="Solver iteration cap")
    common.add_argument("--route-mode", choices=ROUTE_CHOICES, help="Hook route selection")
    common.add_argument("--seed", type=int, help="Seed for probes and noisy families")
    common.add_argument("--override-classifier", action="store_true", help="Run the pipeline even if the curve is not weak-extreme")
    common.add_argument("--jobs", type=int, help="Worker threads for independent solves")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(prog="weakplateau", description="Discrete Plateau solutions for weak-extreme curves", parents=[common], allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", parents=[common], allow_abbrev=False, help="Write a gallery curve; extra --name value pairs are family parameters")
    gen.add_argument("family", nargs="?")
    gen.add_argument("-n", type=int, default=None, help="Vertex count")
    gen.add_argument("--base", type=Path, default=None, help="Base curve for splice families")
    gen.add_argument("-o", "--output", type=Path, default=None)
    gen.add_argument("--list", action="store_true", default=False, help="List families and their parameters")

    cls = sub.add_parser("classify", parents=[common], allow_abbrev=False, help="Decompose a curve and test the weak-extreme conditions")
    cls.add_argument("curve", type=Path)
    cls.add_argument("-o", "--output", type=Path, default=None, help="report.json path (default: stdout)")

    solve = sub.add_parser("solve", parents=[common], allow_abbrev=False, help="Least-area disk, optionally inside a closed region")
    solve.add_argument("curve", type=Path)
    solve.add_argument("--region", type=Path, default=None, help="Closed OBJ surface bounding the region")
    solve.add_argument("-o", "--output", type=Path, default=Path("disk.obj"))

    for name, text in (("pipeline", "Run the constructive pipeline"), ("compare", "Pipeline plus free solves from several seeds")):
        p = sub.add_parser(name, parents=[common], allow_abbrev=False, help=text)
        p.add_argument("curve", type=Path)
        p.add_argument("-o", "--output", type=Path, default=None, help="Run directory (default: a fresh timestamped one)")

    check = sub.add_parser("check", parents=[common], allow_abbrev=False, help="Re-check an OBJ surface for self or mutual intersections")
    check.add_argument("mesh", type=Path)
    check.add_argument("--against", type=Path, default=None)
    check.add_argument("-o", "--output", type=Path, default=None)
    return parser


def parse_value(text: str):
    """int, float, or a comma-separated float list."""
    if "," in text:
        return [float(x) for x in text.split(",") if x]
    try:
        return int(text)
    except ValueError:
        return float(text)


def parse_params(tokens) -> dict:
    """`--hook-depth 0.6 --width=0.1` -> {"hook_depth": 0.6, "width": 0.1}."""
    params = {}
    tokens = list(tokens)
    k = 0
    while k < len(tokens):
        token = tokens[k]
        if not token.startswith("--"):
            raise ValueError(f"unexpected argument {token!r}")
        name, eq, value = token[2:].partition("=")
        if not eq:
            if k + 1 >= len(tokens):
                raise ValueError(f"{token} needs a value")
            k += 1
            value = tokens[k]
        try:
            params[name.replace("-", "_")] = parse_value(value)
        except ValueError:
            raise ValueError(f"{token}: not a number: {value!r}") from None
        k += 1
    return params


def config_from_args(args) -> SolverConfig:
    keys = ("tol_scale", "refine_levels", "max_iterations", "route_mode", "seed", "override_classifier", "jobs")
    return SolverConfig.from_env(**{k: getattr(args, k, None) for k in keys})


def _report(command: str, source: Path, curve, config: SolverConfig, **fields) -> RunReport:
    return RunReport(
        command=command,
        input=str(source),
        input_hash=input_hash(curve.vertices),
        config=config.model_dump(),
        **fields,
    )


def _emit(report: RunReport, output: Path = None):
    if output is None:
        print(json.dumps(report.model_dump(), indent=2, sort_keys=True))
    else:
        report.write(output)
        log.info(f"Report written to {output}")


def _run_dir(output: Path = None) -> Path:
    if output is None:
        return new_run_dir()
    output.mkdir(parents=True, exist_ok=True)
    return output


def _header(config: SolverConfig, verdicts: dict, **extra) -> dict:
    return {"config_hash": config_hash(config), "verdicts": verdicts, **extra}


def cmd_generate(args, config: SolverConfig, extras) -> int:
    from weakplateau.gallery import CURVE_FAMILIES, SPLICES, CurveSpec, family_parameters, make_curve

    if args.list:
        for name in list(CURVE_FAMILIES) + list(SPLICES):
            params = ", ".join(f"{k}={v}" for k, v in family_parameters(name).items())
            print(f"{name}({params})")
        return EXIT_OK
    if not args.family:
        raise ValueError("generate needs a family name (see --list)")

    spec = CurveSpec(family=args.family, params=parse_params(extras), n=args.n, seed=getattr(args, "seed", None))
    base = read_curve(args.base) if args.base else None
    curve = make_curve(spec, base)
    output = args.output or Path(f"{args.family}.json")
    write_curve(output, curve)
    print(output)
    return EXIT_OK


def cmd_classify(args, config: SolverConfig, extras) -> int:
    from weakplateau.core.classifier import analyze

    curve = read_curve(args.curve)
    start = time.perf_counter()
    analysis = analyze(curve, config)
    report = _report(
        "classify", args.curve, curve, config,
        classification=analysis.report.to_dict(),
        verdicts={"is_weak_extreme": analysis.report.is_weak_extreme, "is_extreme": analysis.report.is_extreme},
        timings={"classify": time.perf_counter() - start},
    )
    _emit(report, args.output)
    return EXIT_OK


def cmd_solve(args, config: SolverConfig, extras) -> int:
    from weakplateau.core.intersections import mesh_self_intersections
    from weakplateau.core.meshing import initial_disk
    from weakplateau.core.regions import closed_region
    from weakplateau.core.solver import minimize_area, minimize_area_constrained

    curve = read_curve(args.curve)
    seed = initial_disk(curve, config.refine_levels)
    seed.label = args.output.stem
    exit_code = EXIT_OK
    try:
        if args.region is not None:
            wall, _ = read_mesh(args.region)
            delta = Tolerances.for_points(curve.vertices, config.tol_scale).L * config.barrier_offset
            mesh, stats = minimize_area_constrained(seed, closed_region(wall, delta), config)
        else:
            mesh, stats = minimize_area(seed, config)
    except NonConvergence as e:
        log.error(f"[SOLVE] {e}")
        mesh, stats, exit_code = e.mesh, e.stats, EXIT_NONCONVERGENCE

    hits = mesh_self_intersections(mesh)
    verdicts = {"converged": stats.converged, "embedded": hits.empty}
    args.output.parent.mkdir(parents=True, exist_ok=True)
    write_mesh(args.output, mesh, _header(config, verdicts, area=mesh.area))
    report_path = args.output.with_name(f"{args.output.stem}_report.json")
    report = _report(
        "solve", args.curve, curve, config,
        solve={**stats.to_dict(), "area": mesh.area, "region": None if args.region is None else str(args.region), "intersections": hits.to_dict()},
        verdicts=verdicts,
        artifacts={"disk": args.output.name},
        timings={"solve": stats.seconds},
        exit_code=exit_code,
    )
    report.write(report_path)
    print(f"area {mesh.area:.6f}  converged={stats.converged}  embedded={hits.empty}")
    return exit_code


def _write_meshes(run: Path, meshes: dict, config: SolverConfig, verdicts: dict, prefix: str = "") -> dict:
    artifacts = {}
    for name, mesh in meshes.items():
        stem = f"{prefix}{name}"
        write_mesh(run / f"{stem}.obj", mesh, _header(config, verdicts, surface=stem))
        artifacts[stem] = f"{stem}.obj"
    return artifacts


def _finish_run(run: Path, report: RunReport, curve, config: SolverConfig) -> int:
    report.write(run / "report.json")
    write_meta(run, config, curve.vertices, report.command, {"input": report.input})
    append_session_entry({
        "run": run.name,
        "command": report.command,
        "input": report.input,
        "input_hash": report.input_hash,
        "verdicts": report.verdicts,
        "exit_code": report.exit_code,
        "timestamp": time.time(),
    }, base=run.parent)
    log.info(f"Run written to {run}")
    print(run)
    return report.exit_code


def cmd_pipeline(args, config: SolverConfig, extras) -> int:
    from weakplateau.core.pipeline import run_pipeline

    curve = read_curve(args.curve)
    run = _run_dir(args.output)
    result = run_pipeline(curve, config)
    summary = result.summary()
    artifacts = _write_meshes(run, result.meshes(), config, result.verdicts)
    report = _report(
        "pipeline", args.curve, curve, config,
        classification=result.analysis.report.to_dict(),
        pipeline=summary,
        verdicts=dict(result.verdicts),
        artifacts=artifacts,
        timings=dict(result.timings),
        exit_code=EXIT_OK if result.ok else EXIT_VERIFICATION,
    )
    if not result.ok:
        log.warning(f"[PIPELINE] failed at {result.failed_step or 'verdicts'}: {report.failed_verdicts()}")
    return _finish_run(run, report, curve, config)


def cmd_compare(args, config: SolverConfig, extras) -> int:
    from weakplateau.core.pipeline import compare_unconstrained, genus_witness, run_pipeline

    curve = read_curve(args.curve)
    run = _run_dir(args.output)
    start = time.perf_counter()
    result = run_pipeline(curve, config)
    comparison = compare_unconstrained(curve, config, result=result)
    solves = {f"free_{k}": m for k, m in comparison.meshes.items()}
    if result.sigma is not None:
        solves["sigma"] = result.sigma
    genus = genus_witness(curve, result.analysis.hull, solves, result.decomposition, config)

    best = next((c for c in comparison.candidates if c["seed"] == comparison.best), None)
    verdicts = {
        "pipeline_ok": result.ok,
        "numerical_plateau_embedded": None if best is None else best["embedded"],
        "genus_zero_witness": genus["genus_zero_witness"],
    }
    artifacts = _write_meshes(run, result.meshes(), config, result.verdicts)
    artifacts.update(_write_meshes(run, comparison.meshes, config, {}, prefix="free_"))
    report = _report(
        "compare", args.curve, curve, config,
        classification=result.analysis.report.to_dict(),
        pipeline=result.summary(),
        comparison=comparison.to_dict(),
        genus=genus,
        verdicts=verdicts,
        artifacts=artifacts,
        timings={**result.timings, "compare": time.perf_counter() - start},
    )
    return _finish_run(run, report, curve, config)


def cmd_check(args, config: SolverConfig, extras) -> int:
    mesh, header = read_mesh(args.mesh)
    against = read_mesh(args.against)[0] if args.against is not None else None
    result = mesh_check(mesh, against, config.tol_scale)

    verdicts = {"embedded": result["embedded"]}
    if against is not None:
        verdicts["disjoint"] = result["disjoint"]
    recorded = (header.get("verdicts") or {}).get("embedded")
    if recorded is not None:
        result["recorded_embedded"] = recorded
        verdicts["matches_recorded"] = recorded == result["embedded"]
    if result["boundary_loops"] == 1:
        result["boundary_vertices"] = len(as_disk(mesh).boundary_loop)

    report = RunReport(
        command="check",
        input=str(args.mesh),
        input_hash=input_hash(mesh.vertices),
        config=config.model_dump(),
        check=result,
        verdicts=verdicts,
    )
    failed = report.failed_verdicts()
    report.exit_code = EXIT_VERIFICATION if failed else EXIT_OK
    _emit(report, args.output)
    return report.exit_code


COMMANDS = {
    "generate": cmd_generate,
    "classify": cmd_classify,
    "solve": cmd_solve,
    "pipeline": cmd_pipeline,
    "compare": cmd_compare,
    "check": cmd_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    args, extras = parser.parse_known_args(argv)
    if getattr(args, "verbose", False):
        logging.getLogger().setLevel(logging.DEBUG)
    if extras and args.command != "generate":
        parser.error(f"unrecognized arguments: {' '.join(extras)}")

    try:
        config = config_from_args(args)
        return COMMANDS[args.command](args, config, extras)
    except NonConvergence as e:
        log.error(f"Solver did not converge: {e}")
        return EXIT_NONCONVERGENCE
    except VERIFICATION_ERRORS as e:
        log.error(f"Verification failed: {e}")
        return EXIT_VERIFICATION
    except (ValueError, OSError) as e:
        log.error(f"Invalid input: {e}")
        return EXIT_INVALID_INPUT
    except PlateauError as e:
        log.error(f"{type(e).__name__}: {e}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
