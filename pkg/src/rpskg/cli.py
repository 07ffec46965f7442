"""Command-line entry point: ``rpskg <subcommand> ...``."""

from __future__ import annotations

import argparse
import shlex
import sys
from pathlib import Path

from . import __version__
from .analysis import ccdf, degree_histogram, log_binned, oscillation_score
from .errors import KronError
from .fileio import read_edges, read_int_sequence, read_seed, write_csv, write_edges, write_seed
from .generators import GenConfig, Model, generate, generate_nskg
from .seeds import (
    DEFAULT_DEPTH,
    GRAPH500,
    StochasticSeed,
    sample_3x1_from_2x1,
    sample_3x3_from_2x2,
    sample_mxn,
    skg_params,
)
from .slices import Radix, slice_report
from .thresholds import ThresholdConfig, identifiability_separation_probe, run_threshold


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", required=True, choices=[m.value for m in Model])
    p.add_argument("--edges", type=int, help="edge count m")
    p.add_argument("--l", type=int, default=0, help="number of 2x2 levels")
    p.add_argument("--k", type=int, default=0, help="number of 3x3 levels (rpskg)")
    p.add_argument("--seed-file", help="2x2 initiator; defaults to the Graph500 seed")
    p.add_argument("--seed3-file", help="3x3 seed for rpskg; sampled from the initiator if absent")
    p.add_argument("--noise-b", type=float, help="nskg noise bound b")
    p.add_argument("--n", type=int, help="bernoulli node count")
    p.add_argument("--p", type=float, help="bernoulli link probability")
    p.add_argument("--dout", help="chunglu out-degree sequence file")
    p.add_argument("--din", help="chunglu in-degree sequence file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rpskg", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate an edge list")
    _add_model_flags(g)
    g.add_argument("--rng-seed", type=int, required=True)
    g.add_argument("--threads", type=int, default=1)
    g.add_argument("--out", required=True)

    s = sub.add_parser("sample-seed", help="resample a seed to another shape")
    s.add_argument("--from", dest="source", required=True)
    s.add_argument("--to", required=True, help="target shape RxC, e.g. 3x3")
    s.add_argument("--method", required=True, choices=["closed-form", "numeric"])
    s.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    s.add_argument("--out", required=True)

    a = sub.add_parser("analyze", help="degree histogram of an edge list")
    a.add_argument("--graph", required=True)
    a.add_argument("--direction", default="out", choices=["out", "in", "undirected"])
    a.add_argument("--dedup", action="store_true")
    a.add_argument("--ccdf", action="store_true")
    a.add_argument("--oscillation", action="store_true")
    a.add_argument("--out", required=True)

    sl = sub.add_parser("slices", help="per-slice degree laws against theory")
    sl.add_argument("--graph", required=True)
    sl.add_argument("--seed-file", required=True)
    sl.add_argument("--l", type=int, required=True)
    sl.add_argument("--k", type=int, default=0)
    sl.add_argument("--out", required=True)

    t = sub.add_parser("thresholds", help="G(n,p) threshold experiment")
    t.add_argument("--mode", required=True, choices=["isolated", "connected"])
    t.add_argument("--side", required=True, choices=["above", "below"])
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--alpha", type=float, required=True)
    t.add_argument("--trials", type=int, required=True)
    t.add_argument("--rng-seed", type=int, required=True)
    t.add_argument("--out", required=True)

    pr = sub.add_parser("probe", help="TV distance between two generator configurations")
    pr.add_argument("--config-a", required=True)
    pr.add_argument("--config-b", required=True)
    pr.add_argument("--trials", type=int, required=True)
    pr.add_argument("--rng-seed", type=int, required=True)
    return parser


def _seed_or_default(path) -> StochasticSeed:
    return read_seed(path) if path else GRAPH500


def config_from_args(args, rng_seed: int) -> GenConfig:
    model = Model(args.model)
    if model is not Model.BERNOULLI and args.edges is None:
        raise KronError(f"--edges is required for model {model.value}")
    degree_seqs = None
    if model is Model.CHUNGLU:
        if not (args.dout and args.din):
            raise KronError("chunglu needs --dout and --din")
        degree_seqs = (read_int_sequence(args.dout), read_int_sequence(args.din))
    if model is Model.BERNOULLI and (args.n is None or args.p is None):
        raise KronError("bernoulli needs --n and --p")
    if model is Model.NSKG and args.noise_b is None:
        raise KronError("nskg needs --noise-b")
    return GenConfig(
        model=model,
        edges_m=args.edges or 0,
        ell=args.l,
        k=args.k,
        seed2=_seed_or_default(args.seed_file),
        seed3=read_seed(args.seed3_file) if args.seed3_file else None,
        noise_b=args.noise_b,
        p=args.p,
        n=args.n,
        degree_seqs=degree_seqs,
        rng_seed=rng_seed,
    )


def config_echo(cfg: GenConfig) -> dict:
    echo = {"model": cfg.model.value, "rng_seed": cfg.rng_seed}
    if cfg.model is Model.BERNOULLI:
        echo.update(n=cfg.n, p=cfg.p)
        return echo
    echo["edges"] = cfg.edges_m
    if cfg.model is Model.CHUNGLU:
        echo.update(dout=list(cfg.degree_seqs[0]), din=list(cfg.degree_seqs[1]))
        return echo
    echo.update(l=cfg.ell, seed=cfg.seed2.matrix.tolist())
    if cfg.model is Model.RPSKG:
        echo["k"] = cfg.k
        if cfg.k > 0:
            m3 = cfg.seed3 if cfg.seed3 is not None else sample_3x3_from_2x2(cfg.seed2)
            echo["seed3"] = m3.matrix.tolist()
    if cfg.model is Model.NSKG:
        echo["noise_b"] = cfg.noise_b
    return echo


def read_config_file(path) -> list[str]:
    tokens = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            tokens.extend(shlex.split(line))
    return tokens


def _parse_probe_config(path) -> GenConfig:
    p = argparse.ArgumentParser(prog=f"config {path}", add_help=False)
    _add_model_flags(p)
    return config_from_args(p.parse_args(read_config_file(path)), rng_seed=0)


# --------------------------------------------------------------------------
# subcommands


def cmd_generate(args) -> None:
    cfg = config_from_args(args, args.rng_seed)
    meta = config_echo(cfg)
    if cfg.model is Model.NSKG:
        edges, noise = generate_nskg(cfg.seed2, cfg.ell, cfg.edges_m, cfg.noise_b, cfg.rng_seed, args.threads)
        meta["noise"] = list(noise.mu)
    else:
        edges = generate(cfg, workers=args.threads)
    write_edges(args.out, edges, meta)


def _parse_shape(text: str) -> tuple[int, int]:
    try:
        r, c = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise KronError(f"--to expects RxC, got {text!r}") from None
    if r < 1 or c < 1:
        raise KronError(f"--to shape must be positive, got {text!r}")
    return r, c


def cmd_sample_seed(args) -> None:
    src = read_seed(args.source)
    rows, cols = _parse_shape(args.to)
    if args.method == "numeric":
        out = sample_mxn(src, rows, cols, args.depth)
    elif src.shape == (2, 2) and (rows, cols) == (3, 3):
        out = sample_3x3_from_2x2(src)
    elif src.shape in ((2, 1), (1, 2)) and (rows, cols) == ((3, 1) if src.rows == 2 else (1, 3)):
        out = sample_3x1_from_2x1(src)
    else:
        raise KronError(f"no closed form from {src.shape[0]}x{src.shape[1]} to {rows}x{cols}; use --method numeric")
    meta = {"from": args.source, "to": f"{rows}x{cols}", "method": args.method}
    if args.method == "numeric":
        meta["depth"] = args.depth
    write_seed(args.out, out, meta)


def cmd_analyze(args) -> None:
    edges = read_edges(args.graph)
    hist = degree_histogram(edges, args.direction, args.dedup)
    score = oscillation_score(hist) if args.oscillation else None
    meta = {"graph": args.graph, "node_count": edges.node_count, "direction": args.direction, "dedup": args.dedup}
    write_csv(args.out, ["degree", "count"], sorted(hist.counts.items()), meta)
    out = Path(args.out)
    if args.ccdf:
        degs, tail = ccdf(hist)
        write_csv(out.with_suffix(".ccdf.csv"), ["degree", "ccdf"], zip(degs.tolist(), tail.tolist()), meta)
    if score is not None:
        series = log_binned(hist)
        rows = zip(series.lo.tolist(), series.hi.tolist(), series.avg_frequency.tolist(), series.log_frequency.tolist())
        write_csv(out.with_suffix(".oscillation.csv"), ["bin_lo", "bin_hi", "avg_frequency", "log10_frequency"], rows, meta)
        print(f"score={score!r}")


def cmd_slices(args) -> None:
    edges = read_edges(args.graph)
    seed = read_seed(args.seed_file)
    if args.k > 0 and args.l > 0:
        raise KronError("slices are defined for a single radix: use --l alone or --k with --l 0")
    if args.k > 0:
        radix, digits = Radix.TERNARY, args.k
    else:
        radix, digits = Radix.BINARY, args.l
    params = skg_params(seed, digits, max(1, len(edges)))
    rows = slice_report(edges, params, radix)
    meta = {"graph": args.graph, "seed": seed.matrix.tolist(), "l": args.l, "k": args.k, "m": len(edges)}
    write_csv(
        args.out,
        ["slice", "theoretical_p", "empirical_p", "tv_binomial"],
        ((r.slice.label(), r.theoretical_p, r.empirical_p, r.tv_binomial) for r in rows),
        meta,
    )


def cmd_thresholds(args) -> None:
    cfg = ThresholdConfig(args.n, args.alpha, args.trials, args.mode, args.side, args.rng_seed)
    rep = run_threshold(cfg)
    write_csv(
        args.out,
        ["mode", "side", "n", "alpha", "p", "trials", "fraction", "theoretical_bound"],
        [(args.mode, args.side, args.n, args.alpha, rep.p_used, args.trials, rep.fraction_with_property, rep.theoretical_bound)],
        {"rng_seed": args.rng_seed},
    )


def cmd_probe(args) -> None:
    cfg_a = _parse_probe_config(args.config_a)
    cfg_b = _parse_probe_config(args.config_b)
    tv = identifiability_separation_probe(cfg_a, cfg_b, args.trials, args.rng_seed)
    print(f"# config_a={' '.join(read_config_file(args.config_a))}")
    print(f"# config_b={' '.join(read_config_file(args.config_b))}")
    print(f"# trials={args.trials} rng_seed={args.rng_seed}")
    print(f"tv={tv!r}")


COMMANDS = {
    "generate": cmd_generate,
    "sample-seed": cmd_sample_seed,
    "analyze": cmd_analyze,
    "slices": cmd_slices,
    "thresholds": cmd_thresholds,
    "probe": cmd_probe,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except KronError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
