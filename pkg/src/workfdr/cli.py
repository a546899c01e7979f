"""Command-line front end: distributions, Q reports, sweeps, negativity tables,
Monte Carlo runs, and the verification suite, emitting deterministic CSV/JSON.

Conventions: `dist` takes per-step angles (--dtheta, --dphi, --c1, ...);
`q`, `sweep`, and `sample` take protocol totals (--theta, --phi, --c1, ...)
that are divided by the step count N. Angles are radians unless --degrees is
given. Exit codes: 0 success, 1 verification failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__
from . import work_stats as ws
from .entanglement import negativity, negativity_cartan_basis
from .errors import WorkFdrError, ValidationError
from .linalg import identity, kron
from .model import CartanCoefficients, SeparableXZXParams, cartan_entangler, rotation_x, rxx, separable_xzx
from .sampler import ProtocolConfig, estimate
from .verify import run_all

_ANGLE_KEYS = ("dtheta", "dphi", "theta", "phi", "c1", "c2", "c3", "c", "l", "m", "nz")


def _write_output(text: str, path: str | None) -> None:
    """Print to stdout, or atomically replace the target file (temp + rename)."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".workfdr-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        os.unlink(tmp_path)
        raise


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def _csv_table(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_document(spec: dict, results, seed=None) -> str:
    document = {
        "spec": spec,
        "results": results,
        "versions": {"workfdr": __version__},
        "seed": seed,
    }
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def _emit_table(args, spec: dict, header: list[str], rows: list[list], seed=None) -> None:
    if args.format == "csv":
        _write_output(_csv_table(header, rows), args.output)
    else:
        results = {"rows": [dict(zip(header, [_jsonable(c) for c in row])) for row in rows]}
        _write_output(_json_document(spec, results, seed=seed), args.output)


def _jsonable(value):
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    return float(value)


def _entangler_matrix(kind: str, p: dict) -> np.ndarray:
    if kind == "none":
        return identity(4)
    if kind == "rxx":
        return rxx(p["dphi"])
    if kind == "cartan":
        return cartan_entangler(CartanCoefficients(p["c1"], p["c2"], p["c3"]))
    return separable_xzx(SeparableXZXParams(p["c"], p["l"], p["m"], p["nz"]))


def _closed_form_single(beta: float, dtheta: float) -> ws.WorkDistribution:
    # the textbook per-step expressions; the independent cross-check column
    s = math.sin(dtheta / 2.0) ** 2
    w = math.exp(-beta)
    return ws.WorkDistribution.from_weights(
        {-1: w * s / (1.0 + w), 0: 1.0 - s, 1: s / (1.0 + w)}
    )


def _closed_form_bipartite(kind: str, beta: float, dtheta: float, p: dict) -> ws.WorkDistribution:
    if kind == "rxx":
        return ws.closed_form_distribution_cartan(beta, dtheta, p["dphi"] / 2.0, 0.0)
    if kind == "cartan":
        return ws.closed_form_distribution_cartan(beta, dtheta, p["c1"], p["c2"])
    if kind == "separable_xzx":
        return ws.closed_form_distribution_separable(beta, dtheta, p["c"], p["m"])
    return ws.closed_form_distribution_cartan(beta, dtheta, 0.0, 0.0)


def cmd_dist(args) -> int:
    p = _params(args)
    beta, dtheta, kind = p["beta"], p["dtheta"], p["entangler"]
    if kind == "none" and not p["two_qubit"]:
        exact = ws.step_distribution_single(beta, dtheta)
        closed = _closed_form_single(beta, dtheta)
    else:
        quench = kron(rotation_x(dtheta), rotation_x(dtheta))
        exact = ws.step_distribution_bipartite(beta, quench, _entangler_matrix(kind, p))
        closed = _closed_form_bipartite(kind, beta, dtheta, p)
    support = sorted(set(exact.support) | set(closed.support))
    rows = [
        [w, float(exact.prob(w)), float(closed.prob(w)), float(abs(exact.prob(w) - closed.prob(w)))]
        for w in support
    ]
    _emit_table(args, _spec_echo(p), ["w", "P_exact", "P_closed_form", "abs_diff"], rows)
    return 0


def _q_report(p: dict) -> dict:
    beta, n, kind = p["beta"], p["n"], p["entangler"]
    dtheta = p["theta"] / n
    f_value = ws.f_beta(beta)
    g_value = ws.g_beta(beta)
    if kind == "none" and not p["two_qubit"]:
        report = ws.q_correction(ws.step_distribution_single(beta, dtheta), beta, n)
        f_term = ws.q_single_smallangle(n, beta, dtheta)
        g_term = 0.0
    else:
        quench = kron(rotation_x(dtheta), rotation_x(dtheta))
        per_step = {
            "dphi": p["phi"] / n,
            "c1": p["c1"] / n,
            "c2": p["c2"] / n,
            "c3": p["c3"] / n,
            "c": p["c"] / n,
            "l": p["l"] / n,
            "m": p["m"] / n,
            "nz": p["nz"] / n,
        }
        dist = ws.step_distribution_bipartite(beta, quench, _entangler_matrix(kind, per_step))
        report = ws.q_correction(dist, beta, n)
        if kind == "rxx":
            f_term = n * dtheta**2 / 2.0 * f_value
            g_term = n * per_step["dphi"] ** 2 / 2.0 * g_value
        elif kind == "cartan":
            f_term = n * dtheta**2 / 2.0 * f_value
            g_term = n * 2.0 * (per_step["c1"] - per_step["c2"]) ** 2 * g_value
        elif kind == "separable_xzx":
            f_term = ws.q_separable_smallangle(n, beta, dtheta, per_step["c"], per_step["m"])
            g_term = 0.0
        else:
            f_term = n * dtheta**2 / 2.0 * f_value
            g_term = 0.0
    prediction = f_term + g_term
    relative_gap = abs(report.q_value - prediction) / abs(report.q_value) if report.q_value else 0.0
    return {
        "mean_work": report.mean_work,
        "var_work": report.var_work,
        "delta_F": report.delta_f,
        "w_diss": report.w_diss,
        "q_exact": report.q_value,
        "small_angle_prediction": prediction,
        "relative_gap": relative_gap,
        "f_beta": f_value,
        "g_beta": g_value,
        "f_term": f_term,
        "g_term": g_term,
        "beta": beta,
        "n_steps": n,
    }


def cmd_q(args) -> int:
    p = _params(args)
    results = _q_report(p)
    if args.format == "csv":
        header = list(results)
        _write_output(_csv_table(header, [[results[k] for k in header]]), args.output)
    else:
        _write_output(_json_document(_spec_echo(p), results), args.output)
    return 0


def _parse_grid(text: str, integral: bool) -> list:
    """Parse 'start:stop:step' (inclusive endpoints) or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(f"grid must be start:stop:step, got {text!r}")
        start, stop, step = (float(x) for x in parts)
        if step <= 0 or stop < start:
            raise ValidationError(f"grid needs stop >= start and step > 0, got {text!r}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        values = [start + k * step for k in range(count)]
    else:
        values = [float(x) for x in text.split(",") if x.strip()]
    if not values:
        raise ValidationError(f"grid {text!r} is empty")
    if integral:
        for v in values:
            if v != int(v) or v <= 0:
                raise ValidationError(f"step-count grid must hold positive integers, got {text!r}")
        return [int(v) for v in values]
    return values


def cmd_sweep(args) -> int:
    p = _params(args)
    if args.beta_grid is None and args.n_grid is None:
        raise ValidationError("sweep needs --beta-grid and/or --n-grid")
    betas = _parse_grid(args.beta_grid, integral=False) if args.beta_grid else [p["beta"]]
    steps = _parse_grid(args.n_grid, integral=True) if args.n_grid else [p["n"]]
    rows = []
    for beta in sorted(betas):
        for n in sorted(steps):
            point = dict(p, beta=float(beta), n=int(n))
            r = _q_report(point)
            rows.append(
                [beta, n, r["q_exact"], r["small_angle_prediction"], r["f_beta"], r["g_beta"], r["relative_gap"]]
            )
    header = ["beta", "n", "Q_exact", "Q_small_angle", "f", "g", "relative_gap"]
    _emit_table(args, _spec_echo(p), header, rows)
    return 0


def cmd_negativity(args) -> int:
    p = _params(args)
    entangler = cartan_entangler(CartanCoefficients(p["c1"], p["c2"], p["c3"]))
    rows = []
    for u in range(4):
        column = entangler[:, u]
        numerical = negativity(np.outer(column, column.conj())).value
        closed = negativity_cartan_basis(u, p["c1"], p["c2"])
        rows.append([u, numerical, closed, abs(numerical - closed)])
    header = ["u", "negativity_numerical", "negativity_closed_form", "abs_diff"]
    _emit_table(args, _spec_echo(p), header, rows)
    return 0


def cmd_sample(args) -> int:
    p = _params(args)
    if p["seed"] is None or p["trajectories"] is None:
        raise ValidationError("sample needs --seed and --trajectories")
    kind = p["entangler"]
    config = ProtocolConfig(
        beta=p["beta"],
        n_steps=p["n"],
        total_theta=p["theta"],
        entangler_kind=kind,
        total_phi=p["phi"],
        total_c1=p["c1"],
        total_c2=p["c2"],
        total_c3=p["c3"],
        total_c=p["c"],
        total_l=p["l"],
        total_m=p["m"],
        total_n=p["nz"],
    )
    stats = estimate(config, p["trajectories"], p["seed"], workers=p["workers"])
    step = ws.step_distribution_bipartite(config.beta, config.step_quench(), config.step_entangler())
    mean_ref, var_ref = ws.moments(ws.convolve_n(step, config.n_steps))
    q_ref = ws.q_correction(step, config.beta, config.n_steps).q_value
    results = {
        "estimates": {
            "n_trajectories": stats.n_trajectories,
            "mean_W": stats.mean_w,
            "var_W": stats.var_w,
            "se_mean": stats.se_mean,
            "se_var": stats.se_var,
            "q_estimate": stats.q_estimate,
            "q_se": stats.q_se,
        },
        "exact_reference": {"mean_W": mean_ref, "var_W": var_ref, "q_value": q_ref},
        "z_scores": {
            "mean_W": (stats.mean_w - mean_ref) / stats.se_mean if stats.se_mean else 0.0,
            "var_W": (stats.var_w - var_ref) / stats.se_var if stats.se_var else 0.0,
            "q": (stats.q_estimate - q_ref) / stats.q_se if stats.q_se else 0.0,
        },
    }
    _write_output(_json_document(_spec_echo(p), results, seed=p["seed"]), args.output)
    return 0


def cmd_verify(args) -> int:
    p = _params(args)
    trajectories = p["trajectories"] if p["trajectories"] is not None else 100_000
    seed = p["seed"] if p["seed"] is not None else 42
    results = run_all(mc_trajectories=trajectories, mc_seed=seed)
    lines = []
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        lines.append(f"[{mark}] {r.item:>3}  {r.description}")
        lines.append(f"           {r.detail}")
    failed = [r.item for r in results if not r.passed]
    lines.append(
        f"{len(results) - len(failed)}/{len(results)} checks passed"
        + (f"; failing: {', '.join(failed)}" if failed else "")
    )
    _write_output("\n".join(lines) + "\n", args.output)
    return 1 if failed else 0


_COMMON_DEFAULTS = {
    "beta": 1.0,
    "n": 100,
    "dtheta": 0.0,
    "dphi": 0.0,
    "theta": 0.0,
    "phi": 0.0,
    "c1": 0.0,
    "c2": 0.0,
    "c3": 0.0,
    "c": 0.0,
    "l": 0.0,
    "m": 0.0,
    "nz": 0.0,
    "entangler": "none",
    "two_qubit": False,
    "trajectories": None,
    "seed": None,
    "workers": 1,
}


def _params(args) -> dict:
    """Merge defaults, --config file values, and explicit flags (flags win)."""
    merged = dict(_COMMON_DEFAULTS)
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as handle:
            file_values = json.load(handle)
        if not isinstance(file_values, dict):
            raise ValidationError("--config must hold a JSON object of parameter values")
        for key, value in file_values.items():
            if key not in merged:
                raise ValidationError(f"unknown config key {key!r}")
            merged[key] = value
    for key in merged:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    if getattr(args, "degrees", False):
        for key in _ANGLE_KEYS:
            merged[key] = math.radians(merged[key])
    for key in ("beta", "dtheta", "dphi", "theta", "phi", "c1", "c2", "c3", "c", "l", "m", "nz"):
        if not math.isfinite(merged[key]):
            raise ValidationError(f"{key} must be finite")
    for key in ("n", "workers"):
        merged[key] = int(merged[key])
    if merged["trajectories"] is not None:
        merged["trajectories"] = int(merged["trajectories"])
    if merged["seed"] is not None:
        merged["seed"] = int(merged["seed"])
    if merged["entangler"] not in ("none", "rxx", "cartan", "separable_xzx"):
        raise ValidationError(f"unknown entangler {merged['entangler']!r}")
    return merged


def _spec_echo(p: dict) -> dict:
    return {k: p[k] for k in sorted(p) if p[k] is not None}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--beta", type=float, default=None, help="inverse bath temperature (>= 0)")
    parser.add_argument("--entangler", choices=["none", "rxx", "cartan", "separable_xzx"], default=None)
    parser.add_argument("--two-qubit", dest="two_qubit", action="store_const", const=True,
                        default=None, help="use two qubits even without an entangler")
    parser.add_argument("--output", default=None, help="output path (default: stdout)")
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    parser.add_argument("--config", default=None, help="JSON file of parameter values; flags override")
    parser.add_argument("--degrees", action="store_true", help="interpret angle inputs as degrees")


def _add_per_step_angles(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dtheta", type=float, default=None, help="per-step local quench angle")
    parser.add_argument("--dphi", type=float, default=None, help="per-step xx entangler angle")
    for flag, text in (("--c1", "xx"), ("--c2", "yy"), ("--c3", "zz")):
        parser.add_argument(flag, type=float, default=None, help=f"per-step {text} entangler angle")
    parser.add_argument("--c", type=float, default=None, help="separable: X angle, qubit A")
    parser.add_argument("--l", type=float, default=None, help="separable: Z angle, qubit A")
    parser.add_argument("--m", type=float, default=None, help="separable: X angle, qubit B")
    parser.add_argument("--nz", type=float, default=None, help="separable: Z angle, qubit B")


def _add_totals(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, default=None, help="number of protocol steps N")
    parser.add_argument("--theta", type=float, default=None, help="total local quench angle")
    parser.add_argument("--phi", type=float, default=None, help="total xx entangler angle")
    for flag, text in (("--c1", "xx"), ("--c2", "yy"), ("--c3", "zz")):
        parser.add_argument(flag, type=float, default=None, help=f"total {text} entangler angle")
    parser.add_argument("--c", type=float, default=None, help="separable: total X angle, qubit A")
    parser.add_argument("--l", type=float, default=None, help="separable: total Z angle, qubit A")
    parser.add_argument("--m", type=float, default=None, help="separable: total X angle, qubit B")
    parser.add_argument("--nz", type=float, default=None, help="separable: total Z angle, qubit B")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="workfdr",
        description="Work statistics of slowly driven qubits under the discrete "
        "two-point-measurement protocol.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dist = sub.add_parser("dist", help="per-step work distribution: exact vs closed form")
    _add_per_step_angles(p_dist)
    _add_common(p_dist)
    p_dist.set_defaults(func=cmd_dist)

    p_q = sub.add_parser("q", help="FDR correction report for an N-step protocol")
    _add_totals(p_q)
    _add_common(p_q)
    p_q.set_defaults(func=cmd_q)

    p_sweep = sub.add_parser("sweep", help="Q and small-angle gap over a beta and/or N grid")
    _add_totals(p_sweep)
    p_sweep.add_argument("--beta-grid", default=None, help="start:stop:step or comma list")
    p_sweep.add_argument("--n-grid", default=None, help="start:stop:step or comma list of integers")
    _add_common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_neg = sub.add_parser("negativity", help="negativity of entangled basis states: numeric vs closed form")
    for flag in ("--c1", "--c2", "--c3"):
        p_neg.add_argument(flag, type=float, default=None)
    _add_common(p_neg)
    p_neg.set_defaults(func=cmd_negativity)

    p_sample = sub.add_parser("sample", help="seeded Monte Carlo estimate with exact references")
    _add_totals(p_sample)
    p_sample.add_argument("--trajectories", type=int, default=None)
    p_sample.add_argument("--seed", type=int, default=None)
    p_sample.add_argument("--workers", type=int, default=None)
    _add_common(p_sample)
    p_sample.set_defaults(func=cmd_sample)

    p_verify = sub.add_parser("verify", help="run the full acceptance suite (exit 1 on any failure)")
    p_verify.add_argument("--trajectories", type=int, default=None, help="Monte Carlo trajectory count")
    p_verify.add_argument("--seed", type=int, default=None, help="Monte Carlo master seed")
    _add_common(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WorkFdrError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as error:
        print(f"error: {error}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
