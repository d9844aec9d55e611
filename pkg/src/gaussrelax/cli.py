"""Command line entry point: ``gaussrelax run | compare | times``.

Exit codes: 0 success, 2 scenario parse error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import report
from .dynamics import run_scenario
from .errors import GaussRelaxError
from .scenario import ScenarioError, ScenarioFile, load_scenario

EXIT_OK, EXIT_PARSE, EXIT_NUMERICAL = 0, 2, 3
MICRO = 1e6

log = logging.getLogger("gaussrelax")


def execute(sf: ScenarioFile):
    """Run a parsed scenario; returns ``(trajectory, summary)``."""
    traj = run_scenario(sf.to_scenario())
    return traj, report.summarize(sf, traj)


def write_outputs(sf, traj, summary, out_dir: Path, figures: bool = True) -> list:
    paths = [out_dir / sf.trajectory_path, out_dir / sf.summary_path]
    report.write_trajectory(paths[0], traj, sf.bath.eta, sf.modes)
    report.write_summary(paths[1], summary)
    if figures and sf.figures:
        from .plotting import plot_trajectory

        fig = out_dir / f"{sf.name}_purity.png"
        plot_trajectory(
            fig,
            traj,
            sf.bath.eta,
            title=sf.name,
            thresholds=sf.purity_thresholds,
            steady=summary.steady_purity,
        )
        paths.append(fig)
    return paths


def _us(t_s):
    if t_s is None:
        return "never"
    if isinstance(t_s, str):
        return "unreachable"
    return f"{t_s * MICRO:.6g} us"


def cmd_run(args) -> int:
    sf = load_scenario(args.scenario)
    traj, summary = execute(sf)
    paths = write_outputs(sf, traj, summary, Path(args.out_dir), not args.no_figures)
    d = summary.as_dict()
    print(f"{sf.name}: {len(traj.samples)} samples, steady purity {summary.steady_purity:.6f}")
    for level in sf.purity_thresholds:
        print(f"  purity {level:g} reached at {_us(d[f'purity_{level:g}_crossing_s'])}")
    det_t = d["det_steady_crossing_s"]
    if det_t is None:
        print("  det sigma never reaches chi^(2n) within the horizon")
    else:
        print(f"  det sigma first reaches chi^(2n) at {_us(det_t)}")
    print(f"  relaxed (|mu - mu_ss| <= {sf.relaxation_deviation:g}) at {_us(d['relaxation_s'])}")
    print(f"  min purity {d['min_purity']:.6f} at {_us(d['min_purity_time_s'])}")
    for p in paths:
        print(f"  wrote {p}")
    return EXIT_OK


def cmd_compare(args) -> int:
    sfa, sfb = load_scenario(args.a), load_scenario(args.b)
    if sfa.modes != sfb.modes:
        raise ScenarioError([(None, f"mode counts differ: {sfa.modes} vs {sfb.modes}")])
    with ThreadPoolExecutor(max_workers=2) as pool:
        fa, fb = pool.submit(execute, sfa), pool.submit(execute, sfb)
        (ta, sa), (tb, sb) = fa.result(), fb.result()
    rows = report.compare_summaries(sa, sb)
    out_dir = Path(args.out_dir)
    path = out_dir / f"compare_{sfa.name}_vs_{sfb.name}.csv"
    report.write_compare(path, rows)
    print(",".join(report.COMPARE_HEADER))
    for metric, a, b, d in rows:
        print(",".join([metric] + ["" if v is None or isinstance(v, str) else f"{v:.9g}" for v in (a, b, d)]))
    if not args.no_figures:
        from .plotting import plot_comparison

        plot_comparison(
            out_dir / f"compare_{sfa.name}_vs_{sfb.name}.png",
            ta, tb, sfa.bath.eta, sfb.bath.eta, labels=(sfa.name, sfb.name),
        )
    print(f"wrote {path}")
    return EXIT_OK


def cmd_times(args) -> int:
    sf = load_scenario(args.scenario)
    if args.epsilon is not None:
        sf.epsilon = args.epsilon
    if sf.epsilon is None:
        raise ScenarioError([(None, "relaxation times need thresholds.epsilon or --epsilon")])
    times = report.relaxation_times(sf)
    eta = sf.bath.eta
    print("quantity,rescaled,seconds")
    for key, t in times.items():
        if t is None:
            print(f"{key},n/a,n/a")
        elif math.isinf(t):
            print(f"{key},unreachable,unreachable")
        else:
            print(f"{key},{t:.17g},{t / eta:.17g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gaussrelax",
        description="Gaussian states relaxing in a lossy thermal channel, with optimal symplectic control.",
    )
    ap.add_argument("--seed", type=int, default=None, help="seed for stochastic verifiers")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario and write trajectory + summary")
    run.add_argument("scenario")
    run.add_argument("--out-dir", default=".")
    run.add_argument("--no-figures", action="store_true")
    run.set_defaults(func=cmd_run)

    cmp_ = sub.add_parser("compare", help="run two scenarios and tabulate threshold speed-ups")
    cmp_.add_argument("a")
    cmp_.add_argument("b")
    cmp_.add_argument("--out-dir", default=".")
    cmp_.add_argument("--no-figures", action="store_true")
    cmp_.set_defaults(func=cmd_compare)

    times = sub.add_parser("times", help="print T_heat / T_cool / T_free for the initial state")
    times.add_argument("scenario")
    times.add_argument("--epsilon", type=float, default=None)
    times.set_defaults(func=cmd_times)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    if args.seed is not None:
        np.random.seed(args.seed)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (GaussRelaxError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
