# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""lrsense command line: experiments, probes, packings and single solves.

Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.
"""

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np
from rich.console import Console
from rich.table import Table

from lrsense.linalg.matcore import normalize_order
from lrsense.minimax.grassmann import greedy_packing
from lrsense.minimax.instance import build_minimax_instance
from lrsense.orchestrator.experiment import ground_truth, load_experiment_config
from lrsense.orchestrator.orchestrator import Orchestrator, print_summary
from lrsense.paths import config
from lrsense.sensing.container import load_dataset, save_dataset
from lrsense.sensing.ensemble import EnsembleSpec, generate_dataset, sample_ensemble
from lrsense.sensing.probes import noise_norm_probe, rip_probe
from lrsense.solvers.admm import AdmmConfig, admm_lasso, lasso_objective
from lrsense.theory.bounds import error_report
from lrsense.utils.rng import derive_seed
from lrsense.utils.status import ConfigError, LabError, UsageError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2


class LabArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _kv_table(title: str, rows: dict) -> Table:
    table = Table(title=title, show_header=False)
    table.add_column("key", style="bold")
    table.add_column("value", justify="right")
    for key, value in rows.items():
        table.add_row(key, f"{value:.6g}" if isinstance(value, float) else str(value))
    return table


def cmd_experiment(args, console: Console) -> int:
    if args.config:
        experiment = load_experiment_config(args.config)
    else:
        experiment = Orchestrator().presets.get_preset(args.preset)
    overrides = {}
    if args.output_dir:
        overrides["output_dir"] = Path(args.output_dir)
    if args.workers:
        overrides["workers"] = args.workers
    if overrides:
        experiment = experiment.model_copy(update=overrides)

    records = Orchestrator().run_experiment(experiment)
    print_summary(records, console, title=f"{experiment.name} ({len(records)} trials)")
    return EXIT_OK


def cmd_rip_probe(args, console: Console) -> int:
    ensemble = sample_ensemble(EnsembleSpec(kind=args.kind, m=args.m, n=args.n, seed=args.seed))
    estimate = rip_probe(ensemble, args.r, args.samples, args.ascent_steps, seed=derive_seed(args.seed, 1))
    rows = {"delta_hat": estimate.delta_hat}
    for k, value in enumerate(estimate.per_rank, start=1):
        rows[f"delta_hat(rank {k})"] = value
    rows["sqrt(r m / n)"] = math.sqrt(args.r * args.m / args.n)
    console.print(_kv_table(f"RIP probe ({args.kind}, m={args.m}, n={args.n}, r={args.r})", rows))
    return EXIT_OK


def cmd_noise_probe(args, console: Console) -> int:
    ensemble = sample_ensemble(EnsembleSpec(kind=args.kind, m=args.m, n=args.n, seed=args.seed))
    norms = noise_norm_probe(ensemble, args.sigma, args.trials, seed=derive_seed(args.seed, 1))
    scale = args.sigma * math.sqrt(args.m / args.n)
    rows = {
        "median ||W/n||_inf": float(np.median(norms)),
        "max ||W/n||_inf": float(np.max(norms)),
    }
    if scale > 0:
        rows["median ratio to sigma sqrt(m/n)"] = float(np.median(norms) / scale)
    console.print(_kv_table(f"Noise probe ({args.kind}, m={args.m}, n={args.n})", rows))
    return EXIT_OK


def cmd_packing(args, console: Console) -> int:
    packing = greedy_packing(
        args.m, args.k, normalize_order(args.q), args.epsilon, args.max_card, args.max_attempts, seed=args.seed
    )
    rows = {
        "cardinality": packing.cardinality,
        "attempts": packing.attempts,
        "separation": packing.separation,
        "min pairwise distance": packing.min_pairwise_distance,
    }
    console.print(_kv_table(f"Grassmann packing (m={args.m}, k={args.k}, q={args.q})", rows))
    return EXIT_OK


def cmd_minimax(args, console: Console) -> int:
    instance = build_minimax_instance(
        args.m, args.r, args.n, args.sigma, args.cprime, q=normalize_order(args.q), seed=args.seed
    )
    console.print(_kv_table("Minimax instance", instance.to_dict()))
    if args.output:
        instance.save(args.output)
        console.print(f"saved {Path(args.output).with_suffix('.bin')} and {Path(args.output).with_suffix('.json')}")
    return EXIT_OK


def cmd_dataset(args, console: Console) -> int:
    n = args.n if args.n else 5 * args.m * args.r
    A0 = ground_truth(args.m, args.r, derive_seed(args.seed, 1))
    ensemble = sample_ensemble(EnsembleSpec(kind=args.kind, m=args.m, n=n, seed=derive_seed(args.seed, 2)))
    dataset = generate_dataset(A0, ensemble, args.sigma, "gaussian", derive_seed(args.seed, 3))
    save_dataset(args.output, dataset)
    console.print(f"wrote {args.output} (m={args.m}, r={args.r}, n={n}, sigma={args.sigma})")
    return EXIT_OK


def cmd_solve(args, console: Console) -> int:
    dataset = load_dataset(args.dataset)
    settings = {"lambda": args.lam}
    if args.rho is not None:
        settings["rho"] = args.rho
    if args.max_iterations is not None:
        settings["max_iterations"] = args.max_iterations
    result = admm_lasso(dataset, AdmmConfig(**settings), init_seed=args.seed)

    rows = {
        "converged": str(result.converged),
        "iterations": result.iterations_used,
        "lambda": result.lam,
        "rho": result.rho,
        "objective": lasso_objective(dataset, result.estimate, result.lam),
        "final primal gap": float(result.primal_gap_trace[-1]),
    }
    if dataset.A0 is not None:
        report = error_report(result.estimate, dataset.A0, dataset.m, dataset.n, dataset.sigma_xi)
        rows["spectral error"] = report.spectral
        rows["frobenius error"] = report.frobenius
        rows["nuclear error"] = report.nuclear
        rows["ratio to sigma sqrt(m/n)"] = report.ratio_spectral
    console.print(_kv_table(f"ADMM solve of {args.dataset}", rows))
    if args.output:
        stem = Path(args.output)
        result.to_json(stem.with_suffix(".json"))
        result.save_estimate(stem.with_suffix(".bin"))
    return EXIT_OK


def build_parser() -> LabArgumentParser:
    parser = LabArgumentParser(prog="lrsense", description="Low-rank matrix sensing lab")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    commands = parser.add_subparsers(dest="command", required=True)

    experiment = commands.add_parser("experiment", help="Run a seeded experiment grid")
    source = experiment.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", type=str, help="JSON experiment document")
    source.add_argument("--preset", type=str, help="Named preset, e.g. fig1-desk")
    experiment.add_argument("--output-dir", type=str, default=None)
    experiment.add_argument("--workers", type=int, default=None)
    experiment.set_defaults(handler=cmd_experiment)

    rip = commands.add_parser("rip-probe", help="Estimate the isometry constant delta_r")
    rip.add_argument("--kind", choices=["gaussian", "rademacher"], default="gaussian")
    rip.add_argument("--m", type=int, required=True)
    rip.add_argument("--n", type=int, required=True)
    rip.add_argument("--r", type=int, required=True)
    rip.add_argument("--samples", type=int, default=200)
    rip.add_argument("--ascent-steps", type=int, default=50)
    rip.add_argument("--seed", type=int, default=0)
    rip.set_defaults(handler=cmd_rip_probe)

    noise = commands.add_parser("noise-probe", help="Spectral norm of the averaged noise matrix")
    noise.add_argument("--kind", choices=["gaussian", "rademacher"], default="gaussian")
    noise.add_argument("--m", type=int, required=True)
    noise.add_argument("--n", type=int, required=True)
    noise.add_argument("--sigma", type=float, required=True)
    noise.add_argument("--trials", type=int, default=20)
    noise.add_argument("--seed", type=int, default=0)
    noise.set_defaults(handler=cmd_noise_probe)

    packing = commands.add_parser("packing", help="Greedy Grassmann packing under tau_q")
    packing.add_argument("--m", type=int, required=True)
    packing.add_argument("--k", type=int, required=True)
    packing.add_argument("--q", type=str, default="2")
    packing.add_argument("--epsilon", type=float, required=True)
    packing.add_argument("--max-card", type=int, default=64)
    packing.add_argument("--max-attempts", type=int, default=10000)
    packing.add_argument("--seed", type=int, default=0)
    packing.set_defaults(handler=cmd_packing)

    minimax = commands.add_parser("minimax", help="Build a scaled projection family and check KL")
    minimax.add_argument("--m", type=int, required=True)
    minimax.add_argument("--r", type=int, required=True)
    minimax.add_argument("--n", type=int, required=True)
    minimax.add_argument("--sigma", type=float, required=True)
    minimax.add_argument("--cprime", type=float, required=True)
    minimax.add_argument("--q", type=str, default="2")
    minimax.add_argument("--seed", type=int, default=0)
    minimax.add_argument("--output", type=str, default=None, help="Stem for .bin/.json output")
    minimax.set_defaults(handler=cmd_minimax)

    dataset = commands.add_parser("dataset", help="Write a synthetic dataset container")
    dataset.add_argument("--kind", choices=["gaussian", "rademacher"], default="gaussian")
    dataset.add_argument("--m", type=int, required=True)
    dataset.add_argument("--r", type=int, required=True)
    dataset.add_argument("--n", type=int, default=None, help="Defaults to 5 m r")
    dataset.add_argument("--sigma", type=float, default=0.01)
    dataset.add_argument("--seed", type=int, default=0)
    dataset.add_argument("--output", type=str, required=True)
    dataset.set_defaults(handler=cmd_dataset)

    solve = commands.add_parser("solve", help="Solve the matrix LASSO on a dataset container")
    solve.add_argument("--dataset", type=str, required=True)
    solve.add_argument("--lambda", dest="lam", type=float, required=True)
    solve.add_argument("--rho", type=float, default=None)
    solve.add_argument("--max-iterations", type=int, default=None)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--output", type=str, default=None, help="Stem for .json/.bin output")
    solve.set_defaults(handler=cmd_solve)
    return parser


def configure_logging(verbose: bool = False):
    level = logging.DEBUG if verbose else getattr(logging, str(config.get("log_level", "INFO")).upper(), logging.INFO)
    logging.basicConfig(level=level, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s")


def main(argv=None) -> int:
    console = Console()
    errors = Console(stderr=True)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        errors.print(parser.format_usage(), end="", markup=False)
        errors.print(e.message, markup=False)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return int(e.code or 0)

    configure_logging(args.verbose)
    try:
        return args.handler(args, console)
    except (UsageError, ConfigError) as e:
        errors.print(str(e), markup=False)
        return EXIT_USAGE
    except (LabError, OSError, ValueError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
