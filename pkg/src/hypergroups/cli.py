"""Command-line interface.

    hypergroups validate  --input preset:bose_mesner_square
    hypergroups chartable --input K.json --format json
    hypergroups qft       --input preset:nonhermitian_1_2
    hypergroups subs      --input preset:class_D4
    hypergroups hshp      --input preset:bose_mesner_square --hidden 0,1 --seed 7
    hypergroups bench     --max-k 8 --csv bench.csv --plot bench.png

Exit codes: 0 ok, 1 self-test failure, 2 validation/module error,
3 unresolved hidden subhypergroup, 4 I/O.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Any, Sequence

import numpy as np

from . import __version__
from .constructions import z2_theta
from .core import TOL, FiniteHypergroup, is_commutative, is_hermitian, translation_invariance_residual
from .documents import _number, canonical_json, digest, load, load_labels, read_json
from .duality import (
    character_table,
    dual_hypergroup,
    fourier_matrix,
    match_permutation,
    tau,
    unitarity_residual,
)
from .errors import DocumentError, HypergroupError, NotStrong
from .hshp import Policy, exact_distribution, make_coset_oracle, oracle_from_labels, solve_hshp
from .subobjects import annihilator, certify, cosets, enumerate_subhypergroups, lemma23_report

SELFTEST = {
    "validate": [1, 4],
    "chartable": [1, 2, 3, 9],
    "qft": [2, 3, 4],
    "subs": [5],
    "hshp": [6, 7, 8],
    "bench": None,
}


def _fmt(v: Any) -> str:
    if isinstance(v, complex):
        if abs(v.imag) < 1e-15:
            return f"{v.real:.10g}"
        return f"{v.real:.10g}{v.imag:+.10g}i"
    if isinstance(v, float):
        return f"{v:.10g}"
    if isinstance(v, (list, tuple)):
        return "{" + ",".join(map(_fmt, v)) + "}"
    return str(v)


def _table(columns: list[str], rows: list[list[Any]]) -> dict:
    return {"columns": columns, "rows": rows}


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("HYPERG_THREADS", "1")))
    except ValueError:
        return 1


def _instance(K: FiniteHypergroup) -> dict:
    return {"name": K.name, "order": K.order, "digest": digest(K)}


def cmd_validate(args, K: FiniteHypergroup) -> dict:
    return {
        "valid": True,
        "commutative": is_commutative(K),
        "hermitian": is_hermitian(K),
        "haar": K.haar,
        "haar_invariance_residual": translation_invariance_residual(K),
        "tables": {"haar": _table(["element", "omega"], [[x, float(w)] for x, w in enumerate(K.haar)])},
    }


def _entry(v: Any) -> complex:
    if isinstance(v, list) and len(v) == 2:
        return complex(_number(v[0]), _number(v[1]))
    return complex(_number(v))


def _compare_expected(path: str, key: str, actual: np.ndarray, tol: float) -> dict:
    """Permutation p with expected[i] ~ actual[p[i]], or null when rows do not match."""
    doc = read_json(path)
    rows = doc.get(key) if isinstance(doc, dict) else doc
    try:
        expected = np.array([[_entry(v) for v in row] for row in rows], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"expected table in {path} is malformed: {exc}") from exc
    if expected.shape != actual.shape:
        raise DocumentError(f"expected table has shape {expected.shape}, computed {actual.shape}")
    perm = match_permutation(expected, actual, tol)
    out: dict[str, Any] = {"permutation": perm}
    if perm is not None:
        out["max_abs_diff"] = float(np.abs(expected - actual[perm]).max())
    return out


def _permutation_table(match: dict) -> dict:
    perm = match["permutation"]
    rows = [[i, p] for i, p in enumerate(perm)] if perm is not None else [["no match", ""]]
    return _table(["expected_row", "computed_row"], rows)


def cmd_chartable(args, K: FiniteHypergroup) -> dict:
    t = character_table(K)
    rows = [[r, float(t.plancherel[r]), *[complex(v) for v in t.values[r]]] for r in range(len(t))]
    try:
        dual = dual_hypergroup(K, t)
        strong = {"strong": True, "dual_haar": dual.haar}
    except NotStrong as exc:
        strong = {"strong": False, "reason": str(exc)}
    out = {
        "haar": K.haar,
        "characters": t.values,
        "plancherel": t.plancherel,
        "conjugate": list(t.conjugate),
        "tau": [tau(K, t, x) for x in range(K.order)],
        "dual": strong,
        "tables": {
            "characters": _table(["character", "plancherel", *[f"x{x}" for x in range(K.order)]], rows),
            "haar": _table(["element", "omega"], [[x, float(w)] for x, w in enumerate(K.haar)]),
        },
    }
    if args.expected:
        out["expected"] = _compare_expected(args.expected, "characters", t.values, args.match_tol)
        out["tables"]["expected"] = _permutation_table(out["expected"])
    return out


def cmd_qft(args, K: FiniteHypergroup) -> dict:
    F = fourier_matrix(K)
    residual = unitarity_residual(F)
    rows = [[r, *[complex(v) for v in F[r]]] for r in range(F.shape[0])]
    out = {
        "fourier_matrix": F,
        "unitarity_residual": residual,
        "tables": {"fourier_matrix": _table(["character", *[f"x{x}" for x in range(K.order)]], rows)},
    }
    if args.expected:
        out["expected"] = _compare_expected(args.expected, "fourier_matrix", F, args.match_tol)
        out["tables"]["expected"] = _permutation_table(out["expected"])
    return out


def cmd_subs(args, K: FiniteHypergroup) -> dict:
    t = character_table(K)
    subs = []
    rows = []
    for H in enumerate_subhypergroups(K):
        part = cosets(K, H)
        perp = annihilator(K, t, H)
        rep = lemma23_report(K, t, H)
        subs.append(
            {
                "members": H.sorted(),
                "cosets": [sorted(b) for b in part.blocks],
                "coset_mass": list(part.block_mass),
                "annihilator": perp,
                "lemma23": rep.to_dict(),
            }
        )
        rows.append([H.sorted(), [sorted(b) for b in part.blocks], perp, rep.equivalent])
    return {
        "subhypergroups": subs,
        "tables": {"subhypergroups": _table(["members", "cosets", "annihilator", "lemma23_equivalent"], rows)},
    }


def _parse_hidden(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v != ""]
    except ValueError:
        raise DocumentError(f"--hidden expects comma-separated element indices, got {text!r}") from None


def cmd_hshp(args, K: FiniteHypergroup) -> dict:
    if args.oracle:
        labels = load_labels(args.oracle)
        if len(labels) != K.order:
            raise DocumentError(f"oracle has {len(labels)} labels for a hypergroup of order {K.order}")
        oracle = oracle_from_labels(labels)
        H = None
    elif args.hidden is not None:
        H = certify(K, _parse_hidden(args.hidden))
        oracle = make_coset_oracle(K, H)
    else:
        raise DocumentError("hshp needs --hidden or --oracle")
    policy = Policy(batch_size=args.shots, max_batches=args.max_batches)
    table = character_table(K)
    run = solve_hshp(K, oracle, seed=args.seed, policy=policy, workers=_threads(), table=table)
    out: dict[str, Any] = {"run": run.to_dict(), "batch_size": policy.batch_for(K.order)}
    if H is not None:
        d = exact_distribution(K, table, H)
        out["exact"] = {"per_coset": d.per_coset, "marginal": d.marginal, "support": d.support}
        out["matches_hidden"] = run.reconstructed.members == H.members
    counts = np.bincount(run.observed, minlength=len(table))
    out["tables"] = {
        "observed": _table(["character", "count"], [[r, int(c)] for r, c in enumerate(counts)]),
        "result": _table(["reconstructed", "verified", "shots"], [[run.reconstructed.sorted(), run.verified, run.shots]]),
    }
    return out


def cmd_bench(args, K: FiniteHypergroup | None) -> dict:
    from .bench import crossover, kron_matches_product, run_bench, write_csv, write_plot

    rows = run_bench(theta=args.theta, ks=range(1, args.max_k + 1), batch=args.batch, repeats=args.repeats, seed=args.seed)
    if args.csv:
        write_csv(rows, args.csv)
    if args.plot:
        write_plot(rows, args.plot)
    base = z2_theta(args.theta)
    verified = all(kron_matches_product(base, k) for k in range(1, min(args.max_k, 4) + 1))
    table = [[r.k, r.order, r.dense_seconds, r.factorized_seconds, r.speedup, r.max_abs_diff] for r in rows]
    return {
        "kron_equals_product_transform": verified,
        "crossover_k": crossover(rows),
        "tables": {"timings": _table(["k", "order", "dense_s", "factorized_s", "speedup", "max_abs_diff"], table)},
    }


COMMANDS = {
    "validate": cmd_validate,
    "chartable": cmd_chartable,
    "qft": cmd_qft,
    "subs": cmd_subs,
    "hshp": cmd_hshp,
    "bench": cmd_bench,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypergroups", description="Finite commutative hypergroups and the hidden sub-hypergroup algorithm.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", help="JSON hypergroup document or preset:NAME")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=["table", "json", "tsv"], default="table")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--tol", type=float, default=TOL, help="axiom validation tolerance")
        p.add_argument("--timings", action="store_true", help="include wall times (reports stop being byte-reproducible)")
        p.add_argument("--selftest", action="store_true", help="run the acceptance checks for this command")

    for name in ("validate", "subs"):
        common(sub.add_parser(name))
    for name in ("chartable", "qft"):
        p = sub.add_parser(name)
        common(p)
        p.add_argument("--expected", help="JSON table to match rows against; the report gives the row permutation")
        p.add_argument("--match-tol", type=float, default=1e-8)
    p = sub.add_parser("hshp")
    common(p)
    p.add_argument("--hidden", help="comma-separated members of the hidden subhypergroup (demo oracle)")
    p.add_argument("--oracle", help="JSON label map {\"labels\": [...]} used as the black box")
    p.add_argument("--shots", type=int, default=None, help="shots per batch (default 4*ceil(log2|K|)+8)")
    p.add_argument("--max-batches", type=int, default=16)
    p = sub.add_parser("bench")
    common(p, needs_input=False)
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--max-k", type=int, default=8)
    p.add_argument("--batch", type=int, default=64)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--csv")
    p.add_argument("--plot")
    return parser


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return canonical_json(report)
    sep = "\t" if fmt == "tsv" else "  "
    lines = []
    for key in ("command", "instance", "seed"):
        if key in report and fmt == "table":
            lines.append(f"# {key}: {_fmt(report[key]) if not isinstance(report[key], dict) else json.dumps(report[key], sort_keys=True)}")
    for name, tbl in sorted(report.get("results", {}).get("tables", {}).items()):
        if fmt == "table":
            lines.append(f"## {name}")
        cells = [list(map(str, tbl["columns"]))] + [[_fmt(v) for v in row] for row in tbl["rows"]]
        if fmt == "table":
            widths = [max(len(r[c]) for r in cells) for c in range(len(cells[0]))]
            cells = [[v.ljust(w) for v, w in zip(r, widths)] for r in cells]
        lines.extend(sep.join(r).rstrip() for r in cells)
    return "\n".join(lines) + "\n"


def _selftest(command: str) -> int:
    from .acceptance import run_all

    results = run_all(SELFTEST[command])
    for r in results:
        print(r.line())
        for d in r.details:
            print(f"    {d}")
    return 0 if all(r.passed for r in results) else 1


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.selftest:
        return _selftest(args.command)
    started = time.perf_counter()
    K = None
    try:
        if args.command != "bench":
            if not args.input:
                raise DocumentError("--input is required")
            K = load(args.input, tol=args.tol)
        results = COMMANDS[args.command](args, K)
    except HypergroupError as exc:
        payload = exc.to_dict()
        run_info = getattr(exc, "run", None)
        if run_info is not None:
            payload["run"] = run_info.to_dict()
        sys.stderr.write(canonical_json(payload))
        return exc.exit_code
    echo = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "format", "timings", "selftest")}
    report: dict[str, Any] = {"command": echo, "seed": args.seed, "results": results}
    if K is not None:
        report["instance"] = _instance(K)
    if args.timings:
        report["wall_seconds"] = time.perf_counter() - started
    text = _render(report, args.format)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            sys.stderr.write(canonical_json({"error": "DocumentError", "message": str(exc)}))
            return 4
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
