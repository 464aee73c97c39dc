"""Command-line front door: a thin client over the HTTP service.

Every invocation builds a request, sends it to the service (by default
an in-process ASGI transport, or a remote server via ``--server``), and
writes the response as report files plus a replayable run manifest.

Exit codes: 0 success, 1 usage or configuration error, 2 input
validation error, 3 internal error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import httpx

from . import __version__
from .dataio import (
    ReportTable,
    curve_table,
    difference_table,
    emit_report,
    rmse_table,
    sweep_table,
)
from .estimators import CurvePoint, Estimator, PdCurve
from .simulation import DEFAULT_MASTER_SEED

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_INTERNAL = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we reserve 2 for bad data
        raise _UsageError(message)


class _ClientError(Exception):
    def __init__(self, status: int, detail: str):
        super().__init__(detail)
        self.status = status


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=None)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from .service import app  # imported lazily so remote use needs no app deps

    return TestClient(app, raise_server_exceptions=False)


def _post(client: httpx.Client, path: str, payload: dict) -> dict:
    resp = client.post(path, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        raise _ClientError(resp.status_code, str(detail))
    return resp.json()


def _curve_from_model(model: dict) -> PdCurve:
    return PdCurve(
        estimator=Estimator(model["estimator"]),
        points={
            p["horizon"]: CurvePoint(rate=p["rate"], cohorts_used=p["cohorts_used"])
            for p in model["points"]
        },
    )


def _run_dir(args) -> Path:
    if args.out:
        out = Path(args.out)
    else:
        seed = getattr(args, "seed", None)
        tag = time.strftime("%Y%m%d-%H%M%S")
        out = Path("runs") / (f"{tag}-{seed}" if seed is not None else tag)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: Path, command: str, config: dict, inputs: dict[str, Path]):
    manifest = {
        "command": command,
        "config": config,
        "artifact_version": __version__,
        "inputs": {
            str(path): hashlib.sha256(path.read_bytes()).hexdigest()
            for path in inputs.values()
        },
    }
    if "master_seed" in config:
        manifest["master_seed"] = config["master_seed"]
    (out / "manifest.json").write_bytes(
        json.dumps(manifest, indent=2, sort_keys=True).encode() + b"\n"
    )


def _write_table(out: Path, name: str, table: ReportTable):
    (out / f"{name}.csv").write_bytes(emit_report(table, "delimited"))
    (out / f"{name}.txt").write_bytes(emit_report(table, "aligned-text"))


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_estimate(args, client: httpx.Client) -> int:
    path = Path(args.input)
    if not path.exists():
        raise _UsageError(f"input file not found: {path}")
    payload = {
        "content": path.read_text(encoding="utf-8"),
        "kind": args.kind,
        "estimator": args.estimator,
        "by_rating": args.by_rating,
        "rollup": args.rollup,
        "lenient_thousands": args.lenient_thousands,
    }
    resp = _post(client, "/estimate", payload)
    out = _run_dir(args)

    curves = [_curve_from_model(m) for m in resp["curves"]]
    _write_table(out, "curves", curve_table(curves, f"PD curves ({resp['kind']})"))

    if resp.get("difference_bp"):
        diff = {int(t): v for t, v in resp["difference_bp"].items()}
        _write_table(
            out,
            "difference",
            difference_table(diff, "Mean of Ratios minus Ratio of Means (bp)"),
        )
    if resp.get("per_rating"):
        for rating, models in resp["per_rating"].items():
            _write_table(
                out,
                f"rating_{rating}",
                curve_table([_curve_from_model(m) for m in models], f"PD curve {rating}"),
            )
    for item in resp.get("rollups", []):
        curve = _curve_from_model(item["curve"])
        name = f"rollup_{item['rollup']}_{curve.estimator.value}"
        _write_table(
            out, name, curve_table([curve], f"{item['rollup']} roll-up ({curve.estimator.value})")
        )

    _write_manifest(out, "estimate", payload | {"input": str(path)}, {"input": path})
    print(f"estimate: wrote {out}")
    return EXIT_OK


def _config_payload(args) -> dict:
    return {
        "true_pd": args.p,
        "sigma": args.sigma,
        "num_years": args.years,
        "exposure_min": args.exposure_min,
        "exposure_max": args.exposure_max,
        "num_scenarios": args.scenarios,
        "master_seed": args.seed,
        "horizons": args.horizons,
    }


def _cmd_simulate(args, client: httpx.Client) -> int:
    config = _config_payload(args)
    resp = _post(client, "/simulate", {"config": config, "workers": args.workers})
    out = _run_dir(args)
    from .simulation import RmseReport, SimulationConfig

    report = RmseReport(
        config=SimulationConfig(**resp["config"]),
        rmse_mr=tuple(resp["rmse_mr"]),
        rmse_rm=tuple(resp["rmse_rm"]),
        efficiency_ratio=tuple(resp["efficiency_ratio"]),
        mean_mr=tuple(resp["mean_mr"]),
        mean_rm=tuple(resp["mean_rm"]),
        rmse_mr_se=tuple(resp["rmse_mr_se"]),
        rmse_rm_se=tuple(resp["rmse_rm_se"]),
    )
    _write_table(out, "rmse_report", rmse_table(report, "Relative RMSE by horizon"))
    _write_manifest(out, "simulate", config, {})
    print(f"simulate: wrote {out}")
    return EXIT_OK


def _cmd_sweep(args, client: httpx.Client) -> int:
    try:
        values = [float(v) for v in args.values.split(",") if v.strip() != ""]
    except ValueError:
        raise _UsageError(f"--values must be a comma-separated number list, got {args.values!r}")
    config = _config_payload(args)
    resp = _post(
        client,
        "/sweep",
        {"config": config, "axis": args.axis, "values": values, "workers": args.workers},
    )
    out = _run_dir(args)
    from .simulation import RmseReport, SimulationConfig, SweepGrid

    grid = SweepGrid(
        axis=resp["axis"],
        values=tuple(resp["values"]),
        reports=tuple(
            RmseReport(
                config=SimulationConfig(**r["config"]),
                rmse_mr=tuple(r["rmse_mr"]),
                rmse_rm=tuple(r["rmse_rm"]),
                efficiency_ratio=tuple(r["efficiency_ratio"]),
                mean_mr=tuple(r["mean_mr"]),
                mean_rm=tuple(r["mean_rm"]),
                rmse_mr_se=tuple(r["rmse_mr_se"]),
                rmse_rm_se=tuple(r["rmse_rm_se"]),
            )
            for r in resp["reports"]
        ),
    )
    _write_table(out, "sweep", sweep_table(grid, f"RMSE sweep over {grid.axis}"))
    _write_manifest(out, "sweep", config | {"axis": args.axis, "values": values}, {})
    print(f"sweep: wrote {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def _add_sim_flags(p: argparse.ArgumentParser):
    p.add_argument("--p", type=float, default=0.10, help="true probability of default")
    p.add_argument("--sigma", type=float, default=0.001, help="perturbation scale")
    p.add_argument("--years", type=int, default=10, help="number of cohorts T")
    p.add_argument("--exposure-min", type=int, default=500)
    p.add_argument("--exposure-max", type=int, default=10_000)
    p.add_argument("--scenarios", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=DEFAULT_MASTER_SEED, help="master seed")
    p.add_argument("--horizons", type=int, default=5)
    p.add_argument("--workers", type=int, default=1)


def build_parser() -> _Parser:
    parser = _Parser(prog="vintagepd", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--server", default=None, help="remote service URL (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate PD curves from a triangle or panel file")
    est.add_argument("input", help="triangle or panel file path")
    est.add_argument("--kind", choices=["triangle", "panel", "auto"], default="auto")
    est.add_argument("--estimator", choices=["mr", "rm", "both"], default="both")
    est.add_argument("--by-rating", action="store_true")
    est.add_argument(
        "--rollup", choices=["pooled", "mean-over-ratings", "both", "none"], default="none"
    )
    est.add_argument("--lenient-thousands", action="store_true",
                     help="strip '.'/',' thousands separators in count columns")
    est.add_argument("--out", default=None, help="run directory (default runs/<timestamp>)")
    est.set_defaults(fn=_cmd_estimate)

    sim = sub.add_parser("simulate", help="run the Monte Carlo RMSE study")
    _add_sim_flags(sim)
    sim.add_argument("--out", default=None)
    sim.set_defaults(fn=_cmd_simulate)

    swp = sub.add_parser("sweep", help="run one study per axis point")
    swp.add_argument("--axis", choices=["sigma", "years"], required=True)
    swp.add_argument("--values", required=True, help="comma-separated axis values")
    _add_sim_flags(swp)
    swp.add_argument("--out", default=None)
    swp.set_defaults(fn=_cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        with _client(args.server) as client:
            return args.fn(args, client)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _ClientError as exc:
        if exc.status == 400:
            print(f"configuration error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        if exc.status == 422:
            print(f"validation error: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
        print(f"internal error (HTTP {exc.status}): {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # anything unplanned is an internal error
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
