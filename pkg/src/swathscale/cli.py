"""Command-line frontend: solve, generate, reduce-alpha, validate.

Instance files are auto-detected by suffix: ``.dat-s`` is sparse SDPA
(with an optional ``<stem>.start.json`` sidecar carrying the interior
start matrix), ``.json`` is the hyperbolic-program schema.  Exit codes:
0 success, 2 start point outside the swath, 3 numerical failure, 4
parse/input error.
"""

from __future__ import annotations

import pathlib
import sys

import click
import numpy as np

from . import diagnostics, generate, hpjson, sdpa, tracefile
from .driver import (
    RunStatus,
    SolverConfig,
    StepMode,
    alpha_reduction_bound,
    alpha_reduction_run,
    run,
)
from .errors import NumericalFailure, ParseError, SwathscaleError
from .hyperbolic import (
    DETERMINANT,
    ELEMENTARY_SYMMETRIC,
    PRODUCT,
    SECOND_ORDER,
    hp_barrier_oracle,
)
from .sdp import det_barrier_oracle, svec
from .sdpa import parse_sdpa
from .subproblem import in_swath

_EXIT_NOT_IN_SWATH = 2
_EXIT_NUMERICAL = 3
_EXIT_PARSE = 4

_STATUS_EXIT = {
    RunStatus.CONVERGED: 0,
    RunStatus.MAX_ITERS: 0,
    RunStatus.NOT_IN_SWATH: _EXIT_NOT_IN_SWATH,
    RunStatus.NUMERICAL_FAILURE: _EXIT_NUMERICAL,
}


def _start_sidecar(path: pathlib.Path) -> pathlib.Path:
    stem = path.name[: -len(".dat-s")] if path.name.endswith(".dat-s") else path.stem
    return path.with_name(stem + ".start.json")


def _load_problem(path: pathlib.Path):
    """Return (oracle, A, b, c, e0, meta) for either instance format."""
    text = path.read_text()
    if path.name.endswith(".dat-s"):
        inst = parse_sdpa(text)
        sidecar = _start_sidecar(path)
        if not sidecar.exists():
            raise ParseError(f"missing start-point file {sidecar}")
        E0 = hpjson.read_start_point(sidecar.read_text())
        if E0.shape[0] != inst.n:
            raise ParseError("start matrix order does not match the instance")
        oracle = det_barrier_oracle(inst.n)
        meta = {"backend": "sdp", "n": inst.n, "m": inst.m, "id": path.name}
        return oracle, inst.constraint_rows(), inst.b, svec(inst.C), svec(E0), meta
    if path.suffix == ".json":
        inst = hpjson.read_hp_json(text)
        oracle = hp_barrier_oracle(inst.family)
        meta = {
            "backend": inst.family.name,
            "n": inst.family.degree,
            "m": inst.A.shape[0],
            "id": path.name,
        }
        return oracle, inst.A, inst.b, inst.c, inst.e0, meta
    raise ParseError(f"unrecognized instance suffix on {path.name}")


def _fail(exc: SwathscaleError, code: int):
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


@click.group()
def main():
    """Affine-scaling interior-point solver for SDP and hyperbolic programs."""


@main.command()
@click.argument("file", type=click.Path(exists=True, path_type=pathlib.Path))
@click.option("--alpha", type=float, default=0.5, show_default=True)
@click.option("--tol", type=float, default=1e-8, show_default=True)
@click.option("--max-iters", type=int, default=500, show_default=True)
@click.option(
    "--step",
    type=click.Choice(["qtilde", "fixed"]),
    default="qtilde",
    show_default=True,
)
@click.option("--trace", "trace_path", type=click.Path(path_type=pathlib.Path))
@click.option(
    "--format",
    "trace_format",
    type=click.Choice(["csv", "json"]),
    default="csv",
    show_default=True,
)
def solve(file, alpha, tol, max_iters, step, trace_path, trace_format):
    """Run the solver on an instance file."""
    try:
        oracle, A, b, c, e0, meta = _load_problem(file)
    except ParseError as exc:
        _fail(exc, _EXIT_PARSE)
    config = SolverConfig(
        alpha=alpha,
        gap_tol=tol,
        max_iters=max_iters,
        step_mode=StepMode(step),
    )
    try:
        result = run(oracle, A, b, c, e0, config)
    except NumericalFailure as exc:
        _fail(exc, _EXIT_NUMERICAL)

    if trace_path is not None:
        header = tracefile.trace_header(
            meta["id"], meta["backend"], config, meta["n"], meta["m"]
        )
        trace_path.write_text(tracefile.export_trace(result, header, trace_format))

    final_gap = result.trace[-1].gap if result.trace else float("nan")
    click.echo(
        f"status={result.status.value} iterations={result.iterations} "
        f"final_gap={final_gap:.6e} violations={result.violations}"
    )
    sys.exit(_STATUS_EXIT[result.status])


@main.command()
@click.argument("kind", type=click.Choice(["sdp", "hp"]))
@click.option("--n", type=int, required=True, help="matrix order (sdp) or ambient dim (hp)")
@click.option("--m", type=int, required=True, help="number of constraints")
@click.option(
    "--family",
    type=click.Choice([PRODUCT, SECOND_ORDER, DETERMINANT, ELEMENTARY_SYMMETRIC]),
    default=PRODUCT,
    show_default=True,
)
@click.option("--k", type=int, default=None, help="elementary-symmetric degree")
@click.option("--mu", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--out", type=click.Path(path_type=pathlib.Path), required=True)
def generate_cmd(kind, n, m, family, k, mu, seed, out):
    """Write a random solvable instance plus its interior start point."""
    try:
        if kind == "sdp":
            inst, E0 = generate.gen_central_path_sdp(n, m, mu, seed)
            stem = out.name[: -len(".dat-s")] if out.name.endswith(".dat-s") else out.name
            inst_path = out.with_name(stem + ".dat-s")
            inst_path.write_text(sdpa.write_sdpa(inst))
            _start_sidecar(inst_path).write_text(hpjson.write_start_point(E0))
            click.echo(f"wrote {inst_path} and {_start_sidecar(inst_path)}")
        else:
            if family == DETERMINANT:
                fam = hpjson.family_from_tag(family, n * (n + 1) // 2)
            else:
                fam = hpjson.family_from_tag(family, n, k)
            inst, _ = generate.gen_hp_instance(fam, m, mu, seed)
            inst_path = out if out.suffix == ".json" else out.with_suffix(".json")
            inst_path.write_text(
                hpjson.write_hp_json(inst, metadata={"mu": mu, "seed": seed})
            )
            click.echo(f"wrote {inst_path}")
    except SwathscaleError as exc:
        _fail(exc, _EXIT_NUMERICAL)


main.add_command(generate_cmd, name="generate")


@main.command(name="reduce-alpha")
@click.argument("file", type=click.Path(exists=True, path_type=pathlib.Path))
@click.option("--alpha0", type=float, required=True)
@click.option("--target", type=float, required=True)
def reduce_alpha(file, alpha0, target):
    """Shrink the cone parameter on the fixed-step schedule."""
    try:
        oracle, A, b, c, e0, _ = _load_problem(file)
    except ParseError as exc:
        _fail(exc, _EXIT_PARSE)
    bound = alpha_reduction_bound(alpha0, target)
    try:
        e_final, iterations = alpha_reduction_run(
            oracle, A, b, c, e0, alpha0, target
        )
    except NumericalFailure as exc:
        _fail(exc, _EXIT_NUMERICAL)
    ok = in_swath(oracle, A, b, c, e_final, target)
    click.echo(f"iterations={iterations} bound={bound} in_swath(target)={ok}")
    sys.exit(0 if ok else _EXIT_NOT_IN_SWATH)


@main.command()
@click.argument("file", type=click.Path(exists=True, path_type=pathlib.Path))
@click.option(
    "--checks",
    type=click.Choice(["all", "fd", "qscale", "equiv", "bound"]),
    default="all",
    show_default=True,
)
@click.option("--alpha", type=float, default=0.5, show_default=True)
def validate(file, checks, alpha):
    """Run the per-iteration diagnostic oracles at the start point."""
    try:
        oracle, A, b, c, e0, meta = _load_problem(file)
    except ParseError as exc:
        _fail(exc, _EXIT_PARSE)

    reports = []
    try:
        if checks in ("all", "fd"):
            reports.append(diagnostics.fd_check(oracle, e0))
        if meta["backend"] == "sdp":
            from .sdp import SdpInstance, smat

            inst = parse_sdpa(file.read_text())
            E0 = smat(e0)
            n = meta["n"]
            if checks in ("all", "qscale"):
                reports.append(diagnostics.q_scaling_check(inst, E0, alpha))
            if checks in ("all", "equiv"):
                beta = alpha * np.sqrt((1 + alpha) / 2)
                grid = np.linspace(-0.5, 3.0, 25)
                reports.append(
                    diagnostics.membership_equiv_check(inst, E0, alpha, beta, grid)
                )
            if checks in ("all", "bound"):
                rng = np.random.default_rng(0)
                V = 0.5 * (lambda M: M + M.T)(rng.standard_normal((n, n)))
                Einv = np.linalg.inv(E0)
                V -= (np.trace(Einv @ V) / n) * E0
                lam = np.linalg.eigvalsh(
                    np.linalg.cholesky(Einv).T @ V @ np.linalg.cholesky(Einv)
                )
                sigma = np.sqrt((n * n - alpha**2 * n) / (alpha**2 * np.sum(lam**2)))
                X = E0 + sigma * V
                grid = np.linspace(1e-3, alpha / np.sqrt(np.sum((sigma * lam) ** 2)), 20)
                reports.append(diagnostics.decrease_bound_check(E0, X, alpha, grid))
        elif checks in ("qscale", "equiv", "bound"):
            click.echo("requested check applies to SDP instances only", err=True)
            sys.exit(_EXIT_PARSE)
    except NumericalFailure as exc:
        _fail(exc, _EXIT_NUMERICAL)
    except SwathscaleError as exc:
        _fail(exc, _EXIT_NOT_IN_SWATH)

    failed = False
    for rep in reports:
        click.echo(
            f"{rep.name}: {'pass' if rep.passed else 'FAIL'} "
            f"(max_rel_err={rep.max_rel_err:.3e}, samples={rep.samples})"
        )
        failed = failed or not rep.passed
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
