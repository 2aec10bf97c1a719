#!/usr/bin/env python
"""Event-triggered dual gradient tracking experiments

Subcommands:
  run     simulate ET-DGT and/or DDGT on a scenario, write traces and a summary
  bounds  print every step-size constant and bound of a scenario as JSON
  oracle  solve a scenario centrally and write the reference solution
  gen     write a seeded random large-scale scenario
  env     print interpreter, dependency versions and numpy build configuration
"""

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..analysis.trace_analysis import TraceAnalyzer
from ..core.config import (
    ALGORITHMS,
    RunConfig,
    list_available_presets,
    load_run_config,
)
from ..core.engine import MetricsTrace, RunJob, run_many
from ..core.errors import VALIDATION_ERRORS, ETDGTError
from ..core.logging import configure_logging, get_log_status, reset_log_flags
from ..core.network import build_network
from ..core.oracle import kkt_check, solve_centralized
from ..core.scenario import (
    CASE3_SEED,
    Scenario,
    gen_large_scenario,
    load_scenario,
    save_scenario,
    scenario_digest,
)
from ..core.stepsize import bound_report
from ..utils import environment_report, format_power, format_ratio, to_jsonable


def _write_json(data: Dict[str, Any], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(to_jsonable(data), f, indent=2)
        f.write("\n")
    return path


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    algorithms = tuple(dict.fromkeys(args.alg)) if getattr(args, "alg", None) else None
    return load_run_config(
        args.preset,
        scenario=args.scenario,
        algorithms=algorithms,
        K=getattr(args, "K", None),
        alpha=getattr(args, "alpha", None),
        trigger_E=getattr(args, "threshold_E", None),
        trigger_s=getattr(args, "threshold_s", None),
        out_dir=getattr(args, "out", None),
        seed=getattr(args, "seed", None),
        workers=getattr(args, "workers", None),
    )


def resolve_scenario(config: RunConfig) -> Scenario:
    """Load or generate the scenario a config names, with its overrides applied."""
    if config.scenario is not None:
        scenario = load_scenario(config.scenario)
    else:
        seed = CASE3_SEED if config.seed is None else config.seed
        scenario = gen_large_scenario(config.gen_n, config.gen_fraction, seed=seed)
    return config.apply_to(scenario)


def _sublinear_trace(traces: Dict[str, MetricsTrace]) -> MetricsTrace:
    """Trace the sublinear envelope is checked against; ET-DGT when present."""
    return traces.get("etdgt", next(iter(traces.values())))


def run_case(args: argparse.Namespace) -> int:
    """
    Oracle, simulations and bounds for one scenario.

    Writes <name>_<alg>.csv and <name>_<alg>_allocations.csv per algorithm,
    <name>_oracle.json and <name>_summary.json into the output directory.

    Returns:
        Exit code
    """
    config = _config_from_args(args)
    scenario = resolve_scenario(config)
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    generators = len(scenario.generator_indices)
    print("=== ET-DGT Experiment ===")
    print(f"Scenario: {scenario.name} (n={scenario.n}, generators={generators})")
    print(f"Total demand: {format_power(scenario.total_demand)}")
    print(
        f"Step size: {scenario.alpha}  "
        f"Trigger: E={scenario.schedule.E}, s={scenario.schedule.s}"
    )
    print(f"Rounds: {scenario.K}  Algorithms: {', '.join(config.algorithms)}")

    network = build_network(scenario.graph_R, scenario.graph_C)
    oracle = solve_centralized(scenario)
    oracle.to_json(out_dir / f"{scenario.name}_oracle.json")
    print(f"Oracle multiplier: {oracle.x_star[0]:.6f}")

    jobs = [RunJob(scenario, alg, scenario.K, oracle) for alg in config.algorithms]
    started = time.time()
    traces = dict(zip(config.algorithms, run_many(jobs, workers=config.workers)))
    print(f"Simulation time: {time.time() - started:.2f} s")

    reference = _sublinear_trace(traces)
    try:
        bounds: Dict[str, Any] = bound_report(
            scenario,
            network,
            oracle,
            warmup=lambda k0: TraceAnalyzer.warmup_gradient_sum(reference, k0),
            horizon=len(reference) - 1,
        )
    except ETDGTError as e:
        bounds = {"error": str(e)}
        print(f"Warning: step-size bounds unavailable: {e}")
    if "theorem1" in bounds and len(reference) > 1:
        averages = TraceAnalyzer.running_grad_average(reference)
        bounds["theorem1"]["observed_average"] = float(averages[-1])
        bounds["theorem1"]["envelope_algorithm"] = reference.algorithm

    for alg, trace in traces.items():
        trace.meta["trigger_admissible"] = bounds.get("trigger_admissible")
        trace.meta["sigma_perturbed"] = bounds.get("inputs", {}).get("sigma_perturbed")
        path = trace.to_csv(out_dir / f"{scenario.name}_{alg}.csv")
        trace.allocations_to_csv(out_dir / f"{scenario.name}_{alg}_allocations.csv")
        if args.trace_json:
            trace.to_json(out_dir / f"{scenario.name}_{alg}_trace.json")
        final = trace.final
        print(
            f"  {alg}: supply gap {final.supply_gap:.3e} MW, "
            f"events {final.comm_w + final.comm_s} -> {path}"
        )

    analyzer = TraceAnalyzer()
    summary = {
        "scenario": scenario.name,
        "digest": scenario_digest(scenario),
        "config": {
            "alpha": scenario.alpha,
            "trigger": scenario.schedule.to_dict(),
            "K": scenario.K,
            "seed": scenario.seed,
            "algorithms": list(config.algorithms),
        },
        "oracle": {**oracle.to_dict(), "kkt": kkt_check(scenario, oracle).to_dict()},
        **analyzer.summarize(traces, oracle),
        "bounds": bounds,
        "environment": environment_report(),
        "events": get_log_status(),
    }
    _write_json(summary, out_dir / f"{scenario.name}_summary.json")
    if "comm_ratio" in summary:
        ratio = summary["comm_ratio"]["events"]
        print(f"Communication ratio ET-DGT/DDGT: {format_ratio(ratio)}")
    return 0


def bounds_case(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    scenario = resolve_scenario(config)
    network = build_network(scenario.graph_R, scenario.graph_C)
    oracle = solve_centralized(scenario) if args.with_oracle else None
    report = to_jsonable(bound_report(scenario, network, oracle))
    report["events"] = get_log_status()
    text = json.dumps(report, indent=2)
    if args.out:
        _write_json(report, Path(args.out) / f"{scenario.name}_bounds.json")
    print(text)
    return 0


def oracle_case(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    scenario = resolve_scenario(config)
    solution = solve_centralized(scenario)
    report = {**solution.to_dict(), "kkt": kkt_check(scenario, solution).to_dict()}
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        solution.to_json(out_dir / f"{scenario.name}_oracle.json")
    print(json.dumps(to_jsonable(report), indent=2))
    return 0


def gen_case(args: argparse.Namespace) -> int:
    scenario = gen_large_scenario(args.n, args.gen_fraction, seed=args.seed)
    target = Path(args.out)
    if target.suffix != ".json":
        target = target / f"{scenario.name}.json"
    save_scenario(scenario, target)
    print(
        f"Generated {scenario.name}: n={scenario.n}, "
        f"{len(scenario.graph_R.edges)} edges, "
        f"demand {format_power(scenario.total_demand)}"
    )
    print(f"Saved to {target}")
    return 0


def env_case(args: argparse.Namespace) -> int:
    print(json.dumps(environment_report(), indent=2))
    return 0


def _add_scenario_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--scenario",
        metavar="PATH",
        help="Scenario JSON file or bundled name (case1, case2)",
    )
    parser.add_argument(
        "--preset",
        choices=sorted(list_available_presets()),
        help="Named run configuration",
    )
    parser.add_argument("--verbose", action="store_true", help="Enable debug output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="etdgt",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="Simulate and write traces")
    _add_scenario_args(run_p)
    run_p.add_argument(
        "--alg",
        action="append",
        choices=ALGORITHMS,
        help="Algorithm to run (repeatable; default: both)",
    )
    run_p.add_argument("-K", type=int, default=None, help="Number of rounds")
    run_p.add_argument("--alpha", type=float, default=None, help="Step size")
    run_p.add_argument(
        "--threshold-E",
        dest="threshold_E",
        type=float,
        default=None,
        help="Trigger threshold magnitude E",
    )
    run_p.add_argument(
        "--threshold-s",
        dest="threshold_s",
        type=float,
        default=None,
        help="Trigger threshold decay s",
    )
    run_p.add_argument(
        "--out", default=None, help="Output directory (default: results)"
    )
    run_p.add_argument("--seed", type=int, default=None, help="Scenario seed")
    run_p.add_argument("--workers", type=int, default=None, help="Parallel runs")
    run_p.add_argument(
        "--trace-json", action="store_true", help="Also write each trace as JSON"
    )
    run_p.set_defaults(func=run_case)

    bounds_p = sub.add_parser("bounds", help="Print the step-size bound report")
    _add_scenario_args(bounds_p)
    bounds_p.add_argument("--out", default=None, help="Also write the report here")
    bounds_p.add_argument(
        "--with-oracle",
        action="store_true",
        help="Include the optimality gap in the initial error",
    )
    bounds_p.set_defaults(func=bounds_case)

    oracle_p = sub.add_parser("oracle", help="Solve the scenario centrally")
    _add_scenario_args(oracle_p)
    oracle_p.add_argument(
        "--out", default=None, help="Directory for <name>_oracle.json"
    )
    oracle_p.set_defaults(func=oracle_case)

    gen_p = sub.add_parser("gen", help="Generate a random large-scale scenario")
    gen_p.add_argument("--n", type=int, default=118, help="Number of agents")
    gen_p.add_argument(
        "--gen-fraction",
        dest="gen_fraction",
        type=float,
        default=54 / 118,
        help="Share of agents that are generators",
    )
    gen_p.add_argument("--seed", type=int, default=CASE3_SEED, help="RNG seed")
    gen_p.add_argument("--out", default="scenarios", help="Output file or directory")
    gen_p.add_argument("--verbose", action="store_true", help="Enable debug output")
    gen_p.set_defaults(func=gen_case)

    env_p = sub.add_parser("env", help="Print the environment report")
    env_p.add_argument("--verbose", action="store_true", help="Enable debug output")
    env_p.set_defaults(func=env_case)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main function for the experiment tool."""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    reset_log_flags()

    needs_scenario = args.command not in ("gen", "env")
    if needs_scenario and args.scenario is None and args.preset is None:
        print("Error: --scenario or --preset is required", file=sys.stderr)
        return 2

    try:
        return args.func(args)
    except VALIDATION_ERRORS as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2
    except ETDGTError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 3
    except KeyboardInterrupt:
        print("\nOperation cancelled by user.")
        return 1


if __name__ == "__main__":
    sys.exit(main())
