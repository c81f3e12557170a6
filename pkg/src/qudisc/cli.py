"""Command-line client for the discrimination service.

The CLI never calls the engine directly: every subcommand builds a JSON
request and posts it to the HTTP API from :mod:`qudisc.service`.  By
default the app is mounted in-process (no network involved); pass
``--server http://host:port`` to talk to a running instance instead.

Exit codes:
    0 — success
    1 — configuration error (bad flags, unreadable/invalid config file,
        or the service rejecting the request with a 4xx)
    2 — runtime failure (service 5xx, connection problems, output not
        writable)
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Sequence

import httpx

_EXAMPLE_ALIASES = {
    "1": "example1",
    "2": "example2",
    "ex1": "example1",
    "ex2": "example2",
}

_RUN_CONFIG_KEYS = (
    "example",
    "n_copies",
    "shots",
    "seed",
    "noise",
    "primitive",
    "measurement",
    "factorizations",
)

_SUBOPTIMAL_COLUMNS = (
    "n_copies",
    "width",
    "depth",
    "p_succ",
    "ties",
    "p_single_noiseless",
    "majority_closed_form",
    "shots",
    "seed",
    "wall_time_s",
)


class _UsageError(Exception):
    """Anything that should terminate with exit code 1."""


class _RuntimeFailure(Exception):
    """Anything that should terminate with exit code 2."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; here 2 is reserved for runtime
    # failures, so usage problems are remapped to 1.
    def error(self, message: str) -> "NoReturn":  # type: ignore[name-defined]
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


# --------------------------------------------------------------------------
# service client
# --------------------------------------------------------------------------


class ServiceClient:
    """POSTs JSON to either an in-process app or a remote server."""

    def __init__(self, server: str | None) -> None:
        if server is None:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service import create_app

            self._client: Any = TestClient(
                create_app(), raise_server_exceptions=False
            )
        else:
            self._client = httpx.Client(base_url=server, timeout=None)

    def post(self, path: str, payload: dict[str, Any]) -> dict[str, Any]:
        try:
            response = self._client.post(path, json=payload)
        except httpx.HTTPError as exc:
            raise _RuntimeFailure(f"request to {path} failed: {exc}") from exc
        if response.status_code >= 500:
            raise _RuntimeFailure(_describe(path, response))
        if response.status_code >= 400:
            raise _UsageError(_describe(path, response))
        return response.json()

    def close(self) -> None:
        self._client.close()


def _describe(path: str, response: Any) -> str:
    try:
        body = response.json()
        detail = body.get("detail", body)
    except Exception:
        detail = response.text
    return f"{path} returned {response.status_code}: {detail}"


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(
        prog="qudisc",
        description="multiple-shot discrimination of qubit unitary channels",
    )
    parser.add_argument(
        "--server",
        default=None,
        metavar="URL",
        help="base URL of a running service (default: run in-process)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    theory = sub.add_parser("theory", help="closed-form discrimination report")
    _add_example_args(theory)
    theory.add_argument("--config", default=None, metavar="PATH")
    theory.add_argument("--out", default=None, metavar="PATH")
    theory.add_argument("--format", choices=("text", "json"), default="text")

    build = sub.add_parser("build", help="emit a discrimination circuit as QASM")
    _add_example_args(build)
    build.add_argument("--w", type=int, default=None, help="circuit width (qubits)")
    build.add_argument("--d", type=int, default=None, help="layers per qubit")
    build.add_argument("--primitive", choices=("cnot", "ecr"), default=None)
    build.add_argument(
        "--measurement", choices=("short", "xor", "parity"), default=None
    )
    build.add_argument("--hypothesis", type=int, choices=(0, 1), default=0)
    build.add_argument("--config", default=None, metavar="PATH")
    build.add_argument("--out", default=None, metavar="PATH")
    build.add_argument("--format", choices=("qasm", "json"), default="qasm")

    for name, help_text in (
        ("run", "sample one or more discrimination circuits"),
        ("sweep", "sample every width x depth factorization"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        _add_example_args(cmd)
        cmd.add_argument("--config", default=None, metavar="PATH")
        cmd.add_argument("--shots", type=int, default=None)
        cmd.add_argument("--seed", type=int, default=None)
        cmd.add_argument("--noise", default=None, metavar="p1,p2,pread")
        cmd.add_argument("--primitive", choices=("cnot", "ecr"), default=None)
        cmd.add_argument(
            "--measurement", choices=("short", "xor", "parity"), default=None
        )
        if name == "run":
            cmd.add_argument("--w", type=int, default=None)
            cmd.add_argument("--d", type=int, default=None)
        cmd.add_argument("--out", default=None, metavar="PATH")
        cmd.add_argument("--format", choices=("csv", "json"), default="csv")

    subopt = sub.add_parser(
        "suboptimal", help="independent single-qubit columns with majority vote"
    )
    subopt.add_argument("--n", type=int, default=None, help="total channel uses")
    subopt.add_argument("--w", type=int, default=None, help="number of columns")
    subopt.add_argument("--d", type=int, default=None, help="uses per column")
    subopt.add_argument("--config", default=None, metavar="PATH")
    subopt.add_argument("--shots", type=int, default=None)
    subopt.add_argument("--seed", type=int, default=None)
    subopt.add_argument("--noise", default=None, metavar="p1,p2,pread")
    subopt.add_argument("--primitive", choices=("cnot", "ecr"), default=None)
    subopt.add_argument("--out", default=None, metavar="PATH")
    subopt.add_argument("--format", choices=("csv", "json"), default="csv")

    return parser


def _add_example_args(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument(
        "--example",
        default=None,
        help="example pair: 1/example1 or 2/example2",
    )
    cmd.add_argument("--n", type=int, default=None, help="total channel uses")


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------


def _load_config(path: str | None) -> dict[str, Any]:
    if path is None:
        return {}
    p = Path(path)
    try:
        raw = p.read_text()
    except FileNotFoundError:
        raise _UsageError(f"config file not found: {path}") from None
    except OSError as exc:
        raise _UsageError(f"cannot read config file {path}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise _UsageError(f"invalid JSON in config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise _UsageError(f"config file {path} must contain a JSON object")
    return data


def _parse_noise(text: str) -> dict[str, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise _UsageError(
            f"--noise expects three comma-separated values p1,p2,pread, got {text!r}"
        )
    try:
        p1, p2, p_read = (float(part) for part in parts)
    except ValueError:
        raise _UsageError(f"--noise values must be numbers, got {text!r}") from None
    return {"p1": p1, "p2": p2, "p_read": p_read}


def _normalize_example(value: Any) -> Any:
    if isinstance(value, str):
        return _EXAMPLE_ALIASES.get(value.lower(), value.lower())
    if isinstance(value, int):
        return _EXAMPLE_ALIASES.get(str(value), value)
    return value


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        print(text, end="" if text.endswith("\n") else "\n")
        return
    try:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    except OSError as exc:
        raise _RuntimeFailure(f"cannot write output file {out}: {exc}") from exc


def _require(payload: dict[str, Any], keys: Sequence[str], command: str) -> None:
    missing = [k for k in keys if payload.get(k) is None]
    if missing:
        flags = ", ".join(f"--{'n' if k == 'n_copies' else k}" for k in missing)
        raise _UsageError(f"{command}: missing required settings: {flags}")


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def _theory_payload(args: argparse.Namespace) -> dict[str, Any]:
    config = _load_config(args.config)
    payload: dict[str, Any] = {}
    for key in ("example", "n_copies", "u", "v"):
        if key in config:
            payload[key] = config[key]
    if args.example is not None:
        payload["example"] = args.example
    if args.n is not None:
        payload["n_copies"] = args.n
    if "example" in payload:
        payload["example"] = _normalize_example(payload["example"])
    if not payload:
        raise _UsageError("theory: provide --example and --n, or a --config file")
    return payload


def _cmd_theory(client: ServiceClient, args: argparse.Namespace) -> None:
    body = client.post("/theory/report", _theory_payload(args))
    if args.format == "json":
        _write_output(json.dumps(body, indent=2), args.out)
        return
    lines = []
    for key in (
        "theta",
        "nu",
        "diamond_norm",
        "p_success_bound",
        "min_copies",
        "perfect_single_use",
    ):
        lines.append(f"{key} = {body[key]}")
    _write_output("\n".join(lines), args.out)


def _cmd_build(client: ServiceClient, args: argparse.Namespace) -> None:
    config = _load_config(args.config)
    payload: dict[str, Any] = {}
    for key in (
        "example",
        "n_copies",
        "width",
        "depth",
        "primitive",
        "measurement",
        "hypothesis",
        "lam_phase",
    ):
        if key in config:
            payload[key] = config[key]
    if args.example is not None:
        payload["example"] = args.example
    if args.n is not None:
        payload["n_copies"] = args.n
    if args.w is not None:
        payload["width"] = args.w
    if args.d is not None:
        payload["depth"] = args.d
    if args.primitive is not None:
        payload["primitive"] = args.primitive
    if args.measurement is not None:
        payload["measurement"] = args.measurement
    payload["hypothesis"] = args.hypothesis
    if "example" in payload:
        payload["example"] = _normalize_example(payload["example"])
    _require(payload, ("example", "n_copies", "width", "depth"), "build")
    body = client.post("/circuits/build", payload)
    if args.format == "json":
        _write_output(json.dumps(body, indent=2), args.out)
    else:
        _write_output(body["qasm"], args.out)


def _experiment_payload(args: argparse.Namespace, sweep: bool) -> dict[str, Any]:
    config = _load_config(args.config)
    payload: dict[str, Any] = {}
    for key in _RUN_CONFIG_KEYS:
        if key in config:
            payload[key] = config[key]
    if args.example is not None:
        payload["example"] = args.example
    if args.n is not None:
        payload["n_copies"] = args.n
    if args.shots is not None:
        payload["shots"] = args.shots
    if args.seed is not None:
        payload["seed"] = args.seed
    if args.noise is not None:
        payload["noise"] = _parse_noise(args.noise)
    if args.primitive is not None:
        payload["primitive"] = args.primitive
    if args.measurement is not None:
        payload["measurement"] = args.measurement
    if sweep:
        payload["factorizations"] = None
    elif getattr(args, "w", None) is not None or getattr(args, "d", None) is not None:
        if args.w is None or args.d is None:
            raise _UsageError("run: --w and --d must be given together")
        payload["factorizations"] = [[args.w, args.d]]
    if "example" in payload:
        payload["example"] = _normalize_example(payload["example"])
    _require(payload, ("example", "n_copies"), "sweep" if sweep else "run")
    return payload


def _cmd_experiment(
    client: ServiceClient, args: argparse.Namespace, sweep: bool
) -> None:
    body = client.post("/experiments/run", _experiment_payload(args, sweep))
    if args.format == "json":
        _write_output(json.dumps(body, indent=2), args.out)
        return
    from .experiments import CSV_COLUMNS

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in body["rows"]:
        writer.writerow(row[column] for column in CSV_COLUMNS)
    _write_output(buffer.getvalue(), args.out)


def _cmd_suboptimal(client: ServiceClient, args: argparse.Namespace) -> None:
    config = _load_config(args.config)
    payload: dict[str, Any] = {}
    for key in ("n_copies", "width", "depth", "shots", "seed", "noise", "primitive"):
        if key in config:
            payload[key] = config[key]
    if args.n is not None:
        payload["n_copies"] = args.n
    if args.w is not None:
        payload["width"] = args.w
    if args.d is not None:
        payload["depth"] = args.d
    if args.shots is not None:
        payload["shots"] = args.shots
    if args.seed is not None:
        payload["seed"] = args.seed
    if args.noise is not None:
        payload["noise"] = _parse_noise(args.noise)
    if args.primitive is not None:
        payload["primitive"] = args.primitive
    _require(payload, ("n_copies", "width", "depth"), "suboptimal")
    body = client.post("/experiments/suboptimal", payload)
    if args.format == "json":
        _write_output(json.dumps(body, indent=2), args.out)
        return
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(_SUBOPTIMAL_COLUMNS)
    writer.writerow(body[column] for column in _SUBOPTIMAL_COLUMNS)
    _write_output(buffer.getvalue(), args.out)


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    client: ServiceClient | None = None
    try:
        client = ServiceClient(args.server)
        if args.command == "theory":
            _cmd_theory(client, args)
        elif args.command == "build":
            _cmd_build(client, args)
        elif args.command == "run":
            _cmd_experiment(client, args, sweep=False)
        elif args.command == "sweep":
            _cmd_experiment(client, args, sweep=True)
        elif args.command == "suboptimal":
            _cmd_suboptimal(client, args)
        else:  # pragma: no cover - argparse enforces the choices
            raise _UsageError(f"unknown command {args.command!r}")
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except _RuntimeFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    finally:
        if client is not None:
            client.close()
    return 0


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
