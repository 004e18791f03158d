"""Command-line interface.

Subcommands: simulate, estimate, analytic, verify, render, linesection.
All randomness flows from --seed; --threads parallelizes replicates without
changing any numeric output.  Exit codes: 0 success, 1 verification failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from functools import partial

import numpy as np

from . import __version__
from . import analytic as an
from .engine import Tessellation, simulate_pht, simulate_stit, subseed
from .extract import line_section, maximal_segments, minus_sample
from .geometry import Window
from .measure import DirectionalDistribution, lambda_of_direction
from .render import render_svg
from .stats import mc_run, ratio_estimate
from .verify import collect_segment_stats, run_suite


class CliError(Exception):
    pass


def _parse_config_file(path: str) -> dict:
    """key = value lines; blank lines and #-comments ignored."""
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise CliError(f"bad config line: {raw.strip()!r}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


_SUBCOMMANDS = ("simulate", "estimate", "analytic", "verify", "render", "linesection")
_FLAG_ONLY = ("pht", "svg", "exact")


def _inject_config(argv: list) -> list:
    """Turn --config key=value pairs into argv tokens placed right after the
    subcommand, so explicitly passed flags still win (argparse last-wins)."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    cfg = _parse_config_file(argv[i + 1])
    tokens = []
    for key, value in cfg.items():
        if key in _FLAG_ONLY:
            if value.lower() in ("1", "true", "yes"):
                tokens.append(f"--{key}")
            continue
        tokens.extend([f"--{key}" if len(key) > 1 else f"-{key}", value])
    for j, tok in enumerate(argv):
        if tok in _SUBCOMMANDS:
            return argv[: j + 1] + tokens + argv[j + 1 :]
    return argv + tokens


def _envelope(config: dict, result) -> dict:
    return {"tool": "stitgeo", "version": __version__, "config": config, "result": result}


def _emit(args, config: dict, result, fmt: str) -> None:
    doc = _envelope(config, result)
    if fmt == "json":
        text = json.dumps(doc, indent=2)
    elif fmt == "csv":
        text = _to_csv(result)
    else:  # table
        text = _to_table(result)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _to_csv(result) -> str:
    if isinstance(result, list) and result and isinstance(result[0], dict):
        keys = list(result[0])
        lines = [",".join(keys)]
        for row in result:
            lines.append(",".join(str(row[k]) for k in keys))
        return "\n".join(lines)
    if isinstance(result, dict):
        return "\n".join(f"{k},{v}" for k, v in result.items())
    return str(result)


def _to_table(result) -> str:
    if isinstance(result, dict):
        width = max(len(str(k)) for k in result)
        return "\n".join(f"{k:<{width}}  {v}" for k, v in result.items())
    if isinstance(result, list) and result and isinstance(result[0], dict):
        keys = list(result[0])
        rows = [[str(r[k]) for k in keys] for r in result]
        widths = [max(len(k), *(len(r[i]) for r in rows)) for i, k in enumerate(keys)]
        lines = ["  ".join(k.ljust(w) for k, w in zip(keys, widths))]
        for r in rows:
            lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)))
        return "\n".join(lines)
    return str(result)


def _window_and_q(args):
    d = args.d
    sides = tuple(float(s) for s in args.window.split(","))
    if len(sides) == 1:
        sides = sides * d
    if len(sides) != d:
        raise CliError(f"window spec needs 1 or {d} side lengths")
    window = Window.box(sides)
    q = DirectionalDistribution.parse(args.q, d)
    return window, q


def _base_config(args, **extra) -> dict:
    cfg = {"seed": args.seed, "threads": args.threads}
    cfg.update(extra)
    return cfg


# ---------------------------------------------------------------------------
# subcommands


def cmd_simulate(args) -> int:
    window, q = _window_and_q(args)
    if args.d not in (2, 3):
        raise CliError("simulation supports d in {2, 3}")
    fn = simulate_pht if args.pht else simulate_stit
    tess = fn(window, q, args.t, args.seed)
    config = _base_config(
        args, d=args.d, window=args.window, q=args.q, t=args.t,
        kind="pht" if args.pht else "stit",
    )
    doc = _envelope(config, tess.to_json())
    out = args.out or "tessellation.json"
    with open(out, "w") as fh:
        json.dump(doc, fh, indent=1)
    print(f"wrote {out}: {tess.n_cells} cells, {len(tess.events)} events")
    if args.svg:
        svg_path = out.rsplit(".", 1)[0] + ".svg"
        with open(svg_path, "w") as fh:
            fh.write(render_svg(tess))
        print(f"wrote {svg_path}")
    return 0


def cmd_estimate(args) -> int:
    if args.d not in (2, 3):
        raise CliError("estimation supports d in {2, 3}")
    window, q = _window_and_q(args)
    mode_j = 0 if args.mode == "typical" else 1
    pool = mc_run(
        partial(
            collect_segment_stats,
            dim=args.d,
            sides=window.sides,
            qkind=q.kind if q.kind != "discrete" else "axis",
            t=args.t,
            margin=args.margin,
        ),
        args.replicates,
        subseed(args.seed, 0xE57),
        args.threads,
    )
    if args.stat == "p_internal":
        if args.n is None:
            raise CliError("--stat p_internal requires --n")
        if args.n not in (0, 1):
            raise CliError("pooled counters cover n in {0, 1}")
        num = f"len_n{args.n}" if mode_j == 1 else f"n{args.n}"
        den = "len_sum" if mode_j == 1 else "count"
        rep = ratio_estimate(pool, num, den, f"p_internal({args.n})", args.mode)
    elif args.stat == "mean_internal":
        num = "len_nsum" if mode_j == 1 else "sum_n"
        den = "len_sum" if mode_j == 1 else "count"
        rep = ratio_estimate(pool, num, den, "mean_internal", args.mode)
    else:
        raise CliError(f"unknown statistic {args.stat!r}")
    config = _base_config(
        args, d=args.d, window=args.window, q=args.q, t=args.t,
        replicates=args.replicates, margin=args.margin, stat=args.stat,
        mode=args.mode, n=args.n,
    )
    _emit(args, config, rep.to_json(), args.format)
    return 0


def cmd_analytic(args) -> int:
    mode = args.mode
    result: dict = {}
    if args.what == "p":
        ns = _parse_n_range(args.n)
        rows = []
        for n in ns:
            row = {"n": n, "p": an.p_internal(args.d, mode, n, t=args.t)}
            if args.exact and args.d == 3 and mode == "lengthweighted" and n in (0, 1):
                row["exact"] = an.P11_0_EXACT if n == 0 else an.P11_1_EXACT
            rows.append(row)
        result = rows if len(rows) > 1 else rows[0]
    elif args.what == "mean":
        m = an.mean_internal(args.d, mode)
        result = {"mean_internal": "infinite" if math.isinf(m) else m}
    elif args.what == "density":
        if args.at is None:
            raise CliError("density needs --at s1,s2,...")
        s = tuple(float(v) for v in args.at.split(","))
        law = an.BirthTimeLaw(args.d, args.k, args.j, args.t)
        result = {"birth_time_density": an.birth_time_density(law, s)}
    elif args.what == "last":
        if args.at is None:
            raise CliError("last needs --at s")
        result = {
            "last_birth_time_density": an.last_birth_time_density(
                args.d, args.j, args.t, float(args.at)
            )
        }
    else:
        raise CliError(f"unknown analytic query {args.what!r}")
    config = _base_config(
        args, what=args.what, d=args.d, mode=mode, t=args.t, n=args.n,
        k=args.k, j=args.j, at=args.at, exact=args.exact,
    )
    _emit(args, config, result, args.format)
    return 0


def _parse_n_range(spec):
    if spec is None:
        raise CliError("analytic p requires --n (single value or a:b range)")
    if ":" in spec:
        a, b = spec.split(":")
        return list(range(int(a), int(b) + 1))
    return [int(spec)]


def cmd_verify(args) -> int:
    results, summary, code = run_suite(args.suite, seed=args.seed, threads=args.threads)
    sys.stdout.write(summary)
    if args.out:
        doc = _envelope(
            {"suite": args.suite, "seed": args.seed},
            [r.__dict__ for r in results],
        )
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=2)
    return code


def cmd_render(args) -> int:
    with open(args.input) as fh:
        doc = json.load(fh)
    obj = doc["result"] if "result" in doc else doc
    tess = Tessellation.from_json(obj)
    svg = render_svg(tess, since=args.since)
    out = args.out or "tessellation.svg"
    with open(out, "w") as fh:
        fh.write(svg)
    print(f"wrote {out}")
    return 0


def cmd_linesection(args) -> int:
    if args.d not in (2, 3):
        raise CliError("line sections support d in {2, 3}")
    window, q = _window_and_q(args)
    u = tuple(float(v) for v in args.direction.split(","))
    if args.base:
        base = tuple(float(v) for v in args.base.split(","))
    else:
        base = tuple(0.5 * (l + h) for l, h in zip(window.lo, window.hi))
    counts = []
    all_params = []
    for rep in range(args.replicates):
        tess = simulate_stit(window, q, args.t, subseed(args.seed, 0x115EC, rep))
        params = line_section(tess, base, u)
        counts.append(len(params))
        if rep < 5:
            all_params.append([float(p) for p in params])
    lam_u = lambda_of_direction(q, u)
    result = {
        "mean_count": float(np.mean(counts)),
        "expected_rate_per_length": args.t * lam_u,
        "replicates": args.replicates,
        "first_replicates_params": all_params,
    }
    config = _base_config(
        args, d=args.d, window=args.window, q=args.q, t=args.t,
        direction=args.direction, base=args.base, replicates=args.replicates,
    )
    _emit(args, config, result, args.format)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="stitgeo",
        description="STIT tessellation simulation and verification toolkit",
    )
    p.add_argument("--version", action="version", version=f"stitgeo {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed")
    common.add_argument("--threads", type=int, default=1, help="worker processes")
    common.add_argument("--out", help="output path (default: stdout or command default)")
    common.add_argument(
        "--format", choices=("json", "csv", "table"), default="json"
    )
    common.add_argument("--config", help="key = value config file; flags win")

    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", parents=[common], help="simulate a tessellation")
    sim.add_argument("-d", type=int, default=2)
    sim.add_argument("--window", default="1", help="side lengths, comma separated")
    sim.add_argument("--q", default="isotropic", help="isotropic | axis | discrete:[...]")
    sim.add_argument("-t", type=float, required=True, help="time horizon")
    sim.add_argument("--pht", action="store_true", help="Poisson hyperplanes instead")
    sim.add_argument("--svg", action="store_true", help="also render SVG (d=2)")
    sim.set_defaults(fn=cmd_simulate)

    est = sub.add_parser("estimate", parents=[common], help="Monte Carlo estimate")
    est.add_argument("-d", type=int, default=2)
    est.add_argument("--window", default="1")
    est.add_argument("--q", default="isotropic")
    est.add_argument("-t", type=float, default=20.0)
    est.add_argument("--stat", required=True, choices=("p_internal", "mean_internal"))
    est.add_argument("--n", type=int)
    est.add_argument("--mode", choices=("typical", "lengthweighted"), default="typical")
    est.add_argument("--replicates", type=int, default=1000)
    est.add_argument("--margin", type=float, default=0.15)
    est.set_defaults(fn=cmd_estimate)

    ana = sub.add_parser("analytic", parents=[common], help="analytic values")
    ana.add_argument("what", choices=("p", "mean", "density", "last"))
    ana.add_argument("-d", type=int, required=True)
    ana.add_argument("--mode", choices=("typical", "lengthweighted"), default="typical")
    ana.add_argument("--n", help="n or a:b range (for p)")
    ana.add_argument("-t", type=float, default=1.0)
    ana.add_argument("-k", type=int, default=1)
    ana.add_argument("-j", type=int, default=0)
    ana.add_argument("--at", help="evaluation point(s), comma separated")
    ana.add_argument("--exact", action="store_true", help="emit closed forms too")
    ana.set_defaults(fn=cmd_analytic)

    ver = sub.add_parser("verify", parents=[common], help="acceptance suite")
    ver.add_argument("suite", choices=("quick", "full"))
    ver.set_defaults(fn=cmd_verify)

    ren = sub.add_parser("render", parents=[common], help="render saved tessellation")
    ren.add_argument("input", help="tessellation JSON file")
    ren.add_argument("--since", type=float, help="dash chords born after this time")
    ren.set_defaults(fn=cmd_render)

    lin = sub.add_parser("linesection", parents=[common], help="line-section statistics")
    lin.add_argument("-d", type=int, default=2)
    lin.add_argument("--window", default="1")
    lin.add_argument("--q", default="isotropic")
    lin.add_argument("-t", type=float, default=10.0)
    lin.add_argument("--direction", default="1,0")
    lin.add_argument("--base", help="line base point (default: window center)")
    lin.add_argument("--replicates", type=int, default=100)
    lin.set_defaults(fn=cmd_linesection)

    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _inject_config(argv)
    except (OSError, CliError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (CliError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
