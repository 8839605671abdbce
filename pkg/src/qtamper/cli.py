"""Command-line entry point.

One executable with five subcommands (`weingarten-table`, `perm-verify`,
`qamd-scan`, `moments`, `tamper-sim`) plus `rerun`, which replays a
previously written manifest and must reproduce the report byte for byte.

Exit codes: 0 success, 2 a run-level assertion failed (security scan
below threshold, lemma counterexample, internal cross-check mismatch;
the report is still written), 1 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from .errors import (ConsistencyError, InputError, InvalidParams, NotNormalized,
                     NotUnitary, OutOfRange, QTamperError)
from .haar import sample_haar_unitary
from .moments import MomentSpec, exact_moment, first_moment_js, first_moment_ss, mc_moment
from .pauli import PauliLabel, pauli_matrix
from .perm import verify_lemmas
from .qamd import QamdParams, security_scan
from .reports import canonical_json_bytes, format_float, make_manifest
from .tamper import UnitaryFamily, family_security_scan, pauli_family
from .weingarten import wg_abs_sum, wg_sum, wg_table

DEFAULT_OUT = "reports"
SEED_ENV = "QTAMPER_SEED"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags by default; the contract wants 1.
    def error(self, message):
        raise _UsageError(message)


def _env_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def _parse_seeds(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise InputError(f"empty seed range {text!r}")
        return list(range(lo, hi + 1))
    return [int(part) for part in text.split(",")]


def _load_unitary_file(path: str) -> np.ndarray:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            rows = json.load(fh)
        matrix = np.array(
            [[complex(entry[0], entry[1]) for entry in row] for row in rows],
            dtype=np.complex128,
        )
    except (OSError, json.JSONDecodeError, TypeError, IndexError, ValueError) as exc:
        raise InputError(f"cannot read unitary file {path!r}: {exc}") from exc
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InputError(f"unitary file {path!r} is not a square matrix")
    return matrix


def _resolve_unitary(spec: str, N: int) -> np.ndarray:
    if spec.startswith("pauli:"):
        label = PauliLabel.from_compact(spec)
        if label.q ** label.m != N:
            raise InputError(f"label dimension {label.q ** label.m} != N = {N}")
        return pauli_matrix(label)
    if spec.startswith("file:"):
        matrix = _load_unitary_file(spec[len("file:"):])
        if matrix.shape[0] != N:
            raise InputError(f"file dimension {matrix.shape[0]} != N = {N}")
        return matrix
    if spec.startswith("random:"):
        return sample_haar_unitary(N, int(spec[len("random:"):]))
    raise InputError(f"unknown unitary spec {spec!r} (pauli:|file:|random:)")


def _resolve_family(spec: str, n: int, family_seed: int) -> UnitaryFamily:
    N = 2 ** n
    if spec.startswith("paulis:"):
        return pauli_family(n, int(spec[len("paulis:"):]), family_seed)
    if spec.startswith("file:"):
        path = spec[len("file:"):]
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read family file {path!r}: {exc}") from exc
        phi = None
        entries = data
        if isinstance(data, dict):
            phi = data.get("trace_bound_phi")
            entries = data.get("members", [])
        members = []
        base = Path(path).parent
        for i, entry in enumerate(entries):
            if isinstance(entry, str) and entry.startswith("pauli:"):
                label = PauliLabel.from_compact(entry)
                members.append((entry, pauli_matrix(label)))
            elif isinstance(entry, dict) and "pauli" in entry:
                label = PauliLabel.from_json(entry["pauli"])
                members.append((entry.get("label", label.compact()), pauli_matrix(label)))
            elif isinstance(entry, dict) and "file" in entry:
                matrix = _load_unitary_file(str(base / entry["file"]))
                members.append((entry.get("label", entry["file"]), matrix))
            else:
                raise InputError(f"family entry {i} not understood: {entry!r}")
        for label, matrix in members:
            if matrix.shape[0] != N:
                raise InputError(f"family member {label!r} has dimension {matrix.shape[0]} != {N}")
        return UnitaryFamily(members=members, trace_bound_phi=phi)
    raise InputError(f"unknown family spec {spec!r} (paulis:|file:)")


def _cycle_type_key(cycle_type) -> str:
    return "[" + ",".join(str(part) for part in cycle_type) + "]"


# ---------------------------------------------------------------------------
# subcommand handlers: params dict -> (result, ok, csv_rows)
# ---------------------------------------------------------------------------

def _run_weingarten_table(params: dict, jobs: int):
    table = wg_table(params["p"], params["N"])
    result = {
        "p": table.p,
        "N": table.N,
        "table": {_cycle_type_key(ct): v for ct, v in table.items()},
        "class_sizes": {_cycle_type_key(ct): n for ct, n in table.class_sizes.items()},
        "sum": wg_sum(table.p, table.N),
        "abs_sum": wg_abs_sum(table.p, table.N),
    }
    return result, True, None


def _run_perm_verify(params: dict, jobs: int):
    lemmas = verify_lemmas(params["n_max"], params["t_max"])
    bad = sum(len(rec["counterexamples"]) for rec in lemmas)
    result = {"lemmas": lemmas, "total_counterexamples": bad}
    return result, bad == 0, None


def _run_qamd_scan(params: dict, jobs: int):
    qamd_params = QamdParams(q=params["q"], d=params["d"])
    report = security_scan(
        qamd_params,
        exhaustive=params["mode"] == "exhaustive",
        trials=params.get("trials"),
        seed=params["seed"],
        cross_check=params["cross_check"],
    )
    return report, report["bound_satisfied"], None


def _run_moments(params: dict, jobs: int):
    n_dim = params["N"]
    unitary = _resolve_unitary(params["unitary"], n_dim)
    kwargs = {}
    if params["pattern"] == "m":
        kwargs["message_amplitudes"] = np.full(
            params["K"], 1.0 / np.sqrt(params["K"]), dtype=np.complex128
        )
        kwargs["target_index"] = params["target_index"]
    spec = MomentSpec(pattern=params["pattern"], t=params["t"], U=unitary,
                      K=params["K"], **kwargs)
    exact = exact_moment(spec)
    estimate, stderr = mc_moment(spec, params["trials"], params["seed"], jobs=jobs)
    closed_form = None
    if params["t"] == 1 and params["pattern"] == "js":
        closed_form = first_moment_js(unitary)
    elif params["t"] == 1 and params["pattern"] == "ss":
        closed_form = first_moment_ss(unitary)
    result = {
        "pattern": params["pattern"],
        "t": params["t"],
        "N": n_dim,
        "trials": params["trials"],
        "exact": exact,
        "mc_estimate": estimate,
        "mc_stderr": stderr,
        "closed_form": closed_form,
    }
    return result, True, None


_CSV_COLUMNS = {
    "classical": ["seed", "label", "s", "P_same", "P_diff", "P_perp"],
    "relaxed": ["seed", "label", "s", "P_same", "P_diff", "P_perp"],
    "weak": ["seed", "label", "X"],
    "quantum": ["seed", "label", "P_perp", "pass_prob", "fidelity_given_pass"],
}


def _run_tamper_sim(params: dict, jobs: int):
    family = _resolve_family(params["family"], params["n"], params["family_seed"])
    report = family_security_scan(
        n=params["n"], k=params["k"], family=family,
        epsilon=params["epsilon"], seeds=params["seeds"],
        mode=params["mode"], jobs=jobs,
    )
    rows = report.pop("rows")
    ok = report["pass_fraction"] >= params["min_pass_fraction"]
    csv_rows = [_CSV_COLUMNS[params["mode"]]]
    for row in rows:
        csv_rows.append([
            _csv_cell(row.get(col)) for col in _CSV_COLUMNS[params["mode"]]
        ])
    return report, ok, csv_rows


def _csv_cell(value):
    if value is None:
        return "undefined"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


_HANDLERS = {
    "weingarten-table": _run_weingarten_table,
    "perm-verify": _run_perm_verify,
    "qamd-scan": _run_qamd_scan,
    "moments": _run_moments,
    "tamper-sim": _run_tamper_sim,
}


# ---------------------------------------------------------------------------
# argv parsing
# ---------------------------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(prog="qtamper", description=__doc__)
    parser.add_argument("--out", default=DEFAULT_OUT, help="report directory")
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="worker cap; results are independent of it")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("weingarten-table", help="exact Weingarten table as JSON")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--N", type=int, required=True)

    p = sub.add_parser("perm-verify", help="exhaustive permutation lemma checks")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--t-max", type=int, default=3)

    p = sub.add_parser("qamd-scan", help="tamper-security scan of the qudit code")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--exhaustive", action="store_true")
    group.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--skip-dense-check", action="store_true")

    p = sub.add_parser("moments", help="exact and Monte Carlo decoder moments")
    p.add_argument("--pattern", choices=["js", "ss", "m"], required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--unitary", required=True,
                   help="pauli:q:x:z | file:PATH | random:SEED")
    p.add_argument("--K", type=int, default=2)
    p.add_argument("--target-index", type=int, default=0)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("tamper-sim", help="family security scan of Haar schemes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--family", required=True, help="paulis:COUNT | file:PATH")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--mode", choices=["classical", "relaxed", "weak", "quantum"],
                   default="classical")
    p.add_argument("--seeds", required=True, help="S0..S1 | comma list | single")
    p.add_argument("--family-seed", type=int, default=None)
    p.add_argument("--min-pass-fraction", type=float, default=0.9)

    p = sub.add_parser("rerun", help="replay a manifest byte-for-byte")
    p.add_argument("manifest", help="manifest JSON file (or a report embedding one)")
    return parser


def _params_from_args(args) -> dict:
    seed_default = _env_seed()
    sc = args.subcommand
    if sc == "weingarten-table":
        return {"p": args.p, "N": args.N}
    if sc == "perm-verify":
        return {"n_max": args.n_max, "t_max": args.t_max}
    if sc == "qamd-scan":
        return {
            "q": args.q, "d": args.d,
            "mode": "exhaustive" if args.exhaustive else "random",
            "trials": args.trials,
            "seed": seed_default if args.seed is None else args.seed,
            "cross_check": not args.skip_dense_check,
        }
    if sc == "moments":
        return {
            "pattern": args.pattern, "t": args.t, "N": args.N,
            "unitary": args.unitary, "K": args.K,
            "target_index": args.target_index,
            "trials": args.trials,
            "seed": seed_default if args.seed is None else args.seed,
        }
    if sc == "tamper-sim":
        return {
            "n": args.n, "k": args.k, "family": args.family,
            "epsilon": args.epsilon, "mode": args.mode,
            "seeds": _parse_seeds(args.seeds),
            "family_seed": seed_default if args.family_seed is None else args.family_seed,
            "min_pass_fraction": args.min_pass_fraction,
        }
    raise _UsageError(f"unknown subcommand {sc}")


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------

def run_manifest(manifest: dict, out_dir: str, jobs: int) -> int:
    """Execute a manifest and write its report; returns the exit code."""
    subcommand = manifest["subcommand"]
    if subcommand not in _HANDLERS:
        raise InputError(f"manifest names unknown subcommand {subcommand!r}")
    params = manifest["parameters"]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    started = time.monotonic()
    try:
        result, ok, csv_rows = _HANDLERS[subcommand](params, jobs)
    except (AssertionError, ConsistencyError) as exc:
        report = {"manifest": manifest, "error": str(exc)}
        path = out / f"{subcommand}.json"
        path.write_bytes(canonical_json_bytes(report))
        print(f"[qtamper] {subcommand}: FAILED ({exc}); report at {path}", file=sys.stderr)
        return 2
    report = {"manifest": manifest, "result": result}
    path = out / f"{subcommand}.json"
    path.write_bytes(canonical_json_bytes(report))
    if csv_rows is not None:
        csv_path = out / f"{subcommand}-cells.csv"
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            csv.writer(fh, lineterminator="\n").writerows(csv_rows)
        print(f"[qtamper] per-cell table at {csv_path}", file=sys.stderr)
    elapsed = time.monotonic() - started
    status = "ok" if ok else "ASSERTION FAILED"
    print(f"[qtamper] {subcommand}: {status}; report at {path} ({elapsed:.2f}s)",
          file=sys.stderr)
    return 0 if ok else 2


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.subcommand == "rerun":
            try:
                with open(args.manifest, "r", encoding="utf-8") as fh:
                    data = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise InputError(f"cannot read manifest {args.manifest!r}: {exc}") from exc
            manifest = data.get("manifest", data)
            return run_manifest(manifest, args.out, args.jobs)
        params = _params_from_args(args)
        manifest = make_manifest(args.subcommand, params)
        return run_manifest(manifest, args.out, args.jobs)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (InputError, InvalidParams, OutOfRange, NotUnitary, NotNormalized,
            ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except QTamperError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
