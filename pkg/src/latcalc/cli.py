"""Command-line client for the experiment service.

The CLI never runs experiments itself: it builds a request, sends it to the
service (in-process over ASGI by default, or to a remote base URL via
--url), prints the server-rendered report verbatim, optionally writes the
server-rendered CSV, and exits with the code the service reported.

Exit codes: 0/1/2/3 are the experiment verdicts (pass, tolerance failure,
integrability refusal, homogeneity refusal); 64 marks a usage or config
error; 69 marks an unreachable service.
"""

from __future__ import annotations

import argparse
import asyncio
import sys
from pathlib import Path

import httpx

from . import __version__
from .config import ConfigError, ExperimentConfig, config_from_mapping, parse_config_text

__all__ = ["build_parser", "run", "main", "EXIT_USAGE", "EXIT_UNAVAILABLE"]

EXIT_USAGE = 64
EXIT_UNAVAILABLE = 69


class _Parser(argparse.ArgumentParser):
    """argparse, but usage errors exit with the dedicated usage code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


_EXPERIMENT_HELP = {
    "verify": "compare the calculus of the averaged kernel with the averaged calculus",
    "kalton": "the flagship circle-average identity with closed-form checks",
    "counterexample": "exact divergent tent family and its discontinuous average",
    "approx": "mesh interpolation error against its certified bound",
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="latcalc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"latcalc {__version__}")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name, text in _EXPERIMENT_HELP.items():
        s = sub.add_parser(name, help=text, description=text)
        s.add_argument("--config", help="flat 'key = value' config file")
        s.add_argument("--out", help="write the CSV table to this path")
        s.add_argument("--seed", type=int, help="RNG seed for the sampled vectors")
        s.add_argument("--dim", type=int, help="lattice dimension")
        s.add_argument(
            "--delta", help="comma-separated mesh schedule, strictly decreasing, e.g. 1,0.5"
        )
        s.add_argument(
            "--quad-n",
            dest="quad_n",
            help="comma-separated quadrature node counts, strictly increasing",
        )
        s.add_argument("--kmax", type=int, help="largest tent index to report")
        s.add_argument("--url", help="base URL of a running service (default: in-process)")
    return parser


def _build_config(args: argparse.Namespace) -> ExperimentConfig:
    mapping: dict = {}
    if args.config:
        mapping.update(parse_config_text(Path(args.config).read_text()))
    mapping["experiment"] = args.experiment  # the subcommand wins over the file
    for key in ("seed", "dim", "kmax", "out"):
        value = getattr(args, key)
        if value is not None:
            mapping[key] = value
    if args.delta is not None:
        mapping["deltas"] = args.delta
    if args.quad_n is not None:
        mapping["quad_n"] = args.quad_n
    return config_from_mapping(mapping)


def _payload(config: ExperimentConfig) -> dict:
    return {
        "kernel": config.kernel,
        "dim": config.dim,
        "seed": config.seed,
        "arity": config.arity,
        "kmax": config.kmax,
        "deltas": list(config.deltas),
        "quad_n": list(config.quad_n),
        "target": config.target,
        "p": config.p,
        "rule": config.rule,
        "tol": config.tol,
    }


async def _post_in_process(experiment: str, payload: dict) -> httpx.Response:
    from .service.app import create_app  # deferred so --help stays snappy

    transport = httpx.ASGITransport(app=create_app())
    async with httpx.AsyncClient(transport=transport, base_url="http://latcalc.local") as client:
        return await client.post(f"/{experiment}", json=payload, timeout=None)


def _post(experiment: str, payload: dict, url: str | None) -> httpx.Response:
    if url is None:
        return asyncio.run(_post_in_process(experiment, payload))
    with httpx.Client(base_url=url, timeout=600.0) as client:
        return client.post(f"/{experiment}", json=payload)


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _build_config(args)
    except ConfigError as exc:
        print(f"latcalc: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"latcalc: cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        response = _post(config.experiment, _payload(config), args.url)
    except httpx.HTTPError as exc:
        print(f"latcalc: service unreachable: {exc}", file=sys.stderr)
        return EXIT_UNAVAILABLE

    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        print(f"latcalc: service rejected the request: {detail}", file=sys.stderr)
        return EXIT_USAGE

    body = response.json()
    sys.stdout.write(body["report_text"])
    if config.out:
        Path(config.out).write_text(body["csv_text"])
        print(f"latcalc: wrote {config.out}", file=sys.stderr)
    return int(body["exit_code"])


def main() -> None:
    sys.exit(run())
