"""Thin command-line client for the mining service.

Every command goes through the HTTP API.  Without ``--server`` the
FastAPI app is driven in-process over an ASGI transport, so batch usage
needs no running daemon; with ``--server URL`` the same requests go to a
remote service (dataset paths are then resolved on the server host).
"""

from __future__ import annotations

import argparse
import asyncio
import csv
import io
import json
import sys

import httpx


def _config_payload(
    args: argparse.Namespace,
    algorithm: str | None = None,
    drop_inapplicable: bool = False,
) -> dict:
    payload = {
        "algorithm": algorithm or args.algorithm,
        "minsupp": args.minsupp,
        "minconf": args.minconf,
        "input": args.input,
        "format": args.format,
        "units_per_group": args.units_per_group,
        "partitions": args.partitions,
        "l_min": args.lmin,
        "l_max": args.lmax,
        "allow_empty_premise": args.allow_empty_premise,
        "out_format": args.out_format,
        "seed": args.seed,
    }
    algo = payload["algorithm"]
    if args.cycle_length is not None and algo in ("pcar", "cbcar"):
        payload["cycle_length"] = args.cycle_length
    if algo == "cbcar":
        if args.prm is not None:
            payload["prm"] = _parse_id_list(args.prm, "--prm")
        if args.cl is not None:
            payload["cl"] = _parse_id_list(args.cl, "--cl")
        if args.agg:
            payload["aggregates"] = list(args.agg)
    elif (args.prm is not None or args.cl is not None or args.agg) and not drop_inapplicable:
        raise SystemExit("error: --prm/--cl/--agg require --algorithm cbcar")
    return payload


def _parse_id_list(text: str, flag: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise SystemExit(f"error: {flag} expects comma-separated item ids, got {text!r}")


def _parse_values(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise SystemExit(f"error: --values expects comma-separated numbers, got {text!r}")


def _parse_plant(text: str) -> dict:
    # itemset@length:offset, e.g. "0,1@2:1"
    try:
        items_part, _, cycle_part = text.partition("@")
        length_part, _, offset_part = cycle_part.partition(":")
        return {
            "items": [int(tok) for tok in items_part.split(",")],
            "length": int(length_part),
            "offset": int(offset_part),
        }
    except ValueError:
        raise SystemExit(
            f"error: --plant expects items@length:offset (e.g. 0,1@2:1), got {text!r}"
        )


async def _post(server: str | None, path: str, payload: dict) -> dict:
    if server:
        client = httpx.AsyncClient(base_url=server, timeout=None)
    else:
        from .service.app import app

        client = httpx.AsyncClient(
            transport=httpx.ASGITransport(app=app), base_url="http://cyclemine.local",
            timeout=None,
        )
    async with client:
        response = await client.post(path, json=payload)
        if response.status_code != 200:
            try:
                detail = response.json().get("detail", response.text)
            except ValueError:
                detail = response.text
            raise SystemExit(f"error: {detail}")
        return response.json()


def _write_output(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_as_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["premise", "conclusion", "support", "confidence", "cycles"])
    for rule in report["rules"]:
        writer.writerow(
            [
                " ".join(map(str, rule["premise"])),
                " ".join(map(str, rule["conclusion"])),
                f"{rule['support']:g}",
                f"{rule['confidence']:g}",
                "; ".join(f"(l={c['l']}, o={c['o']})" for c in rule["cycles"]),
            ]
        )
    return buf.getvalue()


def _report_as_text(report: dict) -> str:
    lines = [
        f"algorithm: {report['config']['algorithm']}",
        f"rules: {len(report['rules'])}",
        f"timing_ms: {report['timing_ms']:.3f}",
        f"transactions_touched: {report['counters']['transactions_touched']}",
        f"units_evaluated: {report['counters']['units_evaluated']}",
        "",
    ]
    for rule in report["rules"]:
        prem = " ".join(map(str, rule["premise"])) or "{}"
        concl = " ".join(map(str, rule["conclusion"]))
        cyc = ", ".join(f"(l={c['l']}, o={c['o']})" for c in rule["cycles"])
        lines.append(
            f"{prem} -> {concl}  supp={rule['support']:.4g} "
            f"conf={rule['confidence']:.4g}  cycles [{cyc}]"
        )
    return "\n".join(lines) + "\n"


def _rows_as_csv(header: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    for row in rows:
        writer.writerow([row[col] for col in header])
    return buf.getvalue()


def cmd_run(args: argparse.Namespace) -> int:
    payload = _config_payload(args)
    report = asyncio.run(_post(args.server, "/run", payload))
    if args.out_format == "csv":
        _write_output(_report_as_csv(report), args.output)
    elif args.out_format == "text":
        _write_output(_report_as_text(report), args.output)
    else:
        _write_output(json.dumps(report, indent=2, sort_keys=True) + "\n", args.output)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    payload = {
        "config": _config_payload(args),
        "dimension": args.sweep,
        "values": _parse_values(args.values),
        "repeat": args.repeat,
    }
    result = asyncio.run(_post(args.server, "/sweep", payload))
    header = [
        "value",
        "timing_ms",
        "rule_count",
        "transactions_touched",
        "units_evaluated",
    ]
    _write_output(_rows_as_csv(header, result["rows"]), args.output)
    if result.get("error"):
        print(f"error: sweep aborted: {result['error']}", file=sys.stderr)
        return 1
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    algorithms = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    if len(algorithms) < 2:
        raise SystemExit("error: --algorithms needs at least two comma-separated names")
    configs = [
        _config_payload(args, algorithm=algo, drop_inapplicable=True)
        for algo in algorithms
    ]
    result = asyncio.run(_post(args.server, "/compare", {"configs": configs}))
    header = [
        "algorithm",
        "timing_ms",
        "rule_count",
        "transactions_touched",
        "units_evaluated",
        "rules_vs_first",
    ]
    _write_output(_rows_as_csv(header, result["rows"]), args.output)
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    payload = {
        "n_units": args.units,
        "n_items": args.items,
        "planted": [_parse_plant(p) for p in args.plant or []],
        "noise": args.noise,
        "seed": args.seed,
    }
    result = asyncio.run(_post(args.server, "/generate", payload))
    _write_output(result["fimi"], args.output)
    print(
        f"generated {result['transactions']} transactions over "
        f"{result['unit_count']} units",
        file=sys.stderr,
    )
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("cyclemine.service.app:app", host=args.host, port=args.port)
    return 0


def _add_config_flags(parser: argparse.ArgumentParser, require_algorithm: bool) -> None:
    parser.add_argument("--input", help="dataset path (resolved on the service host)")
    parser.add_argument(
        "--format",
        default="fimi",
        choices=["fimi", "fimi_quantified", "csv_timestamped"],
    )
    if require_algorithm:
        parser.add_argument(
            "--algorithm",
            required=True,
            choices=["sequential", "interleaved", "pcar", "cbcar"],
        )
    parser.add_argument("--minsupp", type=float, required=True)
    parser.add_argument("--minconf", type=float, required=True)
    parser.add_argument("--partitions", type=int, default=1)
    parser.add_argument("--cycle-length", dest="cycle_length", type=int)
    parser.add_argument("--lmin", type=int, default=1)
    parser.add_argument("--lmax", type=int)
    parser.add_argument("--prm", help="comma-separated premise item pool (cbcar)")
    parser.add_argument("--cl", help="comma-separated conclusion item pool (cbcar)")
    parser.add_argument(
        "--agg",
        action="append",
        help='aggregate constraint, e.g. "SUM(0)>=1" (repeatable, cbcar)',
    )
    parser.add_argument("--allow-empty-premise", action="store_true")
    parser.add_argument("--units-per-group", dest="units_per_group", type=int, default=1)
    parser.add_argument("--out-format", dest="out_format", default="json",
                        choices=["json", "csv", "text"])
    parser.add_argument("--output", help="write to this path instead of stdout")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--server", help="remote service URL (default: in-process)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclemine",
        description="Cyclic association rule mining over temporal transaction databases",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one mining run")
    _add_config_flags(p_run, require_algorithm=True)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="vary one dimension, one CSV row per value")
    _add_config_flags(p_sweep, require_algorithm=True)
    p_sweep.add_argument(
        "--sweep",
        required=True,
        choices=["minsupp", "partitions", "cycle_length", "constraint_count"],
    )
    p_sweep.add_argument("--values", required=True, help="comma-separated values")
    p_sweep.add_argument("--repeat", type=int, default=1)
    p_sweep.set_defaults(func=cmd_sweep)

    p_cmp = sub.add_parser("compare", help="run several algorithms on one dataset")
    _add_config_flags(p_cmp, require_algorithm=False)
    p_cmp.add_argument(
        "--algorithms",
        required=True,
        help="comma-separated algorithm names; constraint flags apply to cbcar entries",
    )
    p_cmp.set_defaults(func=cmd_compare)

    p_gen = sub.add_parser("generate", help="write a synthetic FIMI dataset")
    p_gen.add_argument("--units", type=int, required=True)
    p_gen.add_argument("--items", type=int, required=True)
    p_gen.add_argument(
        "--plant",
        action="append",
        help="planted cycle items@length:offset, e.g. 0,1@2:1 (repeatable)",
    )
    p_gen.add_argument("--noise", type=float, default=0.0)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--output", help="write to this path instead of stdout")
    p_gen.add_argument("--server", help="remote service URL (default: in-process)")
    p_gen.set_defaults(func=cmd_generate)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 2
        raise


if __name__ == "__main__":
    sys.exit(main())
