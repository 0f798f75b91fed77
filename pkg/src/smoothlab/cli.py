"""Command-line surface of the lab.

Every command is deterministic given (command, flags, seed): randomness
flows from the single seed through a counter-based Philox generator, so
repeated runs emit byte-identical artifacts.

    smoothlab psi --n 1000 --y 7
    smoothlab alpha --n 1000000 --y 100
    smoothlab pipeline --n 100000 --y 100 --delta 0.5 --seed 7
    smoothlab verify-all

Exit status: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import arith, fourier, roth, smooth, verify, wtrick
from .roth_params import PipelineParams

DEFAULT_CACHE = "~/.cache/smoothlab"


@dataclass
class RunConfig:
    n: int = 10**4
    y: int = 100
    r: float | None = None  # default (log10 n)^2
    w: float | None = None
    delta: float = 0.5
    p: float = 2.5
    grid: int | None = None  # default 2n
    cache_dir: Path = Path(DEFAULT_CACHE)
    seed: int = 0
    format: str = "csv"
    threads: int | None = None
    points: str | None = None

    @property
    def R(self) -> float:
        return self.r if self.r is not None else math.log10(self.n) ** 2

    @property
    def M(self) -> int:
        return self.grid if self.grid is not None else 2 * self.n

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(self.seed))


def _effective_cache_dir(cfg: RunConfig) -> Path:
    env = os.environ.get("SMOOTHLAB_CACHE")
    base = Path(env) if env else cfg.cache_dir
    return base.expanduser()


def _sieve_path(cfg: RunConfig) -> Path:
    return _effective_cache_dir(cfg) / f"gpf_{cfg.n}.smgpf"


def _get_sieve(cfg: RunConfig) -> smooth.SmoothSieve:
    path = _sieve_path(cfg)
    if path.exists():
        sieve = smooth.load_sieve(path)
        if sieve.N >= cfg.n:
            return sieve
    return smooth.build_sieve(cfg.n)


def _seeded_subset(cfg: RunConfig, universe: np.ndarray) -> np.ndarray:
    return universe[cfg.rng().random(universe.size) < cfg.delta]


def _emit(cfg: RunConfig, rows: list[dict], json_shape=None) -> None:
    """rows as CSV (stable column order from the first row) or a JSON document."""
    if cfg.format == "json":
        print(json.dumps(json_shape if json_shape is not None else rows, sort_keys=True))
        return
    if not rows:
        return
    cols = list(rows[0].keys())
    print(",".join(cols))
    for row in rows:
        print(",".join(_csv_cell(row[c]) for c in cols))


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def cmd_sieve(cfg: RunConfig) -> int:
    sieve = smooth.build_sieve(cfg.n)
    path = _sieve_path(cfg)
    smooth.save_sieve(sieve, path)
    _emit(cfg, [{"n": cfg.n, "path": str(path)}], {"n": cfg.n, "path": str(path)})
    return 0


def cmd_psi(cfg: RunConfig) -> int:
    sieve = _get_sieve(cfg)
    sset = smooth.smooth_set(sieve, cfg.y)
    rows = []
    tables = []
    for q in range(1, 11):
        psi_q = smooth.psi_coprime(sset, q)
        counts = [smooth.psi_progression(sset, q, a) for a in range(q)]
        tables.append({"q": q, "psi_q": psi_q, "counts": counts})
        for a, c in enumerate(counts):
            rows.append({"q": q, "a": a, "count": c, "psi_q": psi_q})
    _emit(cfg, rows, {"N": cfg.n, "y": cfg.y, "psi": sset.psi, "tables": tables})
    return 0


def cmd_alpha(cfg: RunConfig) -> int:
    from .saddle import alpha_empirical, solve_alpha

    sieve = _get_sieve(cfg)
    sset = smooth.smooth_set(sieve, cfg.y)
    sp = solve_alpha(cfg.n, cfg.y)
    emp = alpha_empirical(sset)
    row = {
        "n": cfg.n,
        "y": cfg.y,
        "psi": sset.psi,
        "alpha_saddle": sp.alpha,
        "residual": sp.residual,
        "alpha_empirical": emp,
    }
    _emit(cfg, [row], row)
    return 0


def cmd_arcs(cfg: RunConfig) -> int:
    arcs = fourier.arc_decomposition(cfg.n, cfg.R)
    rows = [{"a": a, "q": q, "lo": lo, "hi": hi} for a, q, lo, hi in arcs.arcs]
    _emit(cfg, rows, {"N": cfg.n, "R": cfg.R, "overlapping": arcs.overlapping, "arcs": rows})
    return 0


def cmd_expsum(cfg: RunConfig) -> int:
    sieve = _get_sieve(cfg)
    sset = smooth.smooth_set(sieve, cfg.y)
    spec = fourier.spectrum_of_set(sset.members, cfg.M)
    if cfg.format == "json":
        values = [[v.real, v.imag] for v in spec.values]
        print(json.dumps({"M": spec.M, "values": values}))
    else:
        fourier.write_spectrum_csv(spec, sys.stdout)
    return 0


def cmd_moment(cfg: RunConfig) -> int:
    sieve = smooth.build_sieve(4 * cfg.n)
    members_all = smooth.smooth_set(sieve, cfg.y).members
    rows = []
    for N in (cfg.n, 2 * cfg.n, 4 * cfg.n):
        members = members_all[members_all <= N]
        moment = fourier.lp_moment(members, cfg.p, 2 * N)
        rows.append({
            "n": N,
            "psi": int(members.size),
            "moment": moment,
            "ratio": moment / (members.size**cfg.p / N),
        })
    _emit(cfg, rows)
    return 0


def cmd_wtrick_select(cfg: RunConfig) -> int:
    sieve = _get_sieve(cfg)
    members = smooth.smooth_set(sieve, cfg.y).members
    A = _seeded_subset(cfg, members)
    ctx, mass = wtrick.select_b(A, cfg.n, cfg.y, sieve, cfg.w, threads=cfg.threads)
    doc = {"context": json.loads(wtrick.context_to_json(ctx)), "mass": repr(mass),
           "subset_size": int(A.size)}
    if cfg.format == "json":
        print(json.dumps(doc, sort_keys=True))
    else:
        flat = dict(doc["context"])
        flat["mass"] = repr(mass)
        flat["subset_size"] = A.size
        _emit(cfg, [flat])
    return 0


def cmd_sigma_check(cfg: RunConfig) -> int:
    worst = 0.0
    pairs = 0
    failures = 0
    for ctx in verify.sweep_contexts(seed=cfg.seed if cfg.seed else verify.SWEEP_SEED):
        for q in range(1, 201):
            residues = [0] if q == 1 else [a for a in range(1, q) if math.gcd(a, q) == 1]
            brute = wtrick.sigma_aq_brute_row(q, ctx, residues)
            for a, bval in zip(residues, brute):
                cval = wtrick.sigma_aq_closed(a, q, ctx)
                gap = max(abs(bval.real - cval.real), abs(bval.imag - cval.imag))
                worst = max(worst, gap)
                pairs += 1
                if gap > 1e-9:
                    failures += 1
    row = {"contexts": 20, "qmax": 200, "pairs": pairs, "max_gap": worst,
           "failures": failures}
    _emit(cfg, [row], row)
    return 0 if failures == 0 else 1


def cmd_ap_count(cfg: RunConfig) -> int:
    if cfg.points:
        pts = np.array(sorted({int(tok) for tok in cfg.points.split(",")}), dtype=np.int64)
    else:
        universe = np.arange(1, min(cfg.n, 2000) + 1, dtype=np.int64)
        pts = _seeded_subset(cfg, universe)
    brute, _ = roth.count_3aps_brute(pts, max_witnesses=0)
    top = int(pts.max()) if pts.size else 1
    M = max(cfg.M, 2 * top + 1)
    spectral = roth.count_3aps_spectral(pts, M)
    row = {"size": int(pts.size), "brute": brute, "spectral": spectral,
           "consistent": spectral == 2 * brute}
    _emit(cfg, [row], row)
    return 0 if row["consistent"] else 1


def cmd_pipeline(cfg: RunConfig) -> int:
    sieve = _get_sieve(cfg)
    members = smooth.smooth_set(sieve, cfg.y).members
    A = _seeded_subset(cfg, members)
    params = PipelineParams(w_override=cfg.w, p=cfg.p, threads=cfg.threads)
    witness = roth.find_3ap_pipeline(A, cfg.n, cfg.y, params, sieve)
    print(roth.witness_to_json(witness))
    return 0


def cmd_verify_all(cfg: RunConfig) -> int:
    results = verify.run_all()
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.number:>2}  {r.name}: {r.detail}")
        print(f"      [{r.elapsed:.2f}s of {r.budget:.0f}s budget]", file=sys.stderr)
        failed += 0 if r.passed else 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


COMMANDS = {
    "sieve": cmd_sieve,
    "psi": cmd_psi,
    "alpha": cmd_alpha,
    "arcs": cmd_arcs,
    "expsum": cmd_expsum,
    "moment": cmd_moment,
    "wtrick-select": cmd_wtrick_select,
    "sigma-check": cmd_sigma_check,
    "ap-count": cmd_ap_count,
    "pipeline": cmd_pipeline,
    "verify-all": cmd_verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smoothlab",
        description="smooth numbers, exponential sums, and 3-term progression experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--n", type=int, default=10**4)
        p.add_argument("--y", type=int, default=100)
        p.add_argument("--r", type=float, default=None,
                       help="major-arc cutoff (default (log10 n)^2)")
        p.add_argument("--w", type=float, default=None,
                       help="override the W-trick smoothness bound w")
        p.add_argument("--delta", type=float, default=0.5)
        p.add_argument("--p", type=float, default=2.5)
        p.add_argument("--grid", type=int, default=None, help="grid size M (default 2n)")
        p.add_argument("--cache-dir", type=Path, default=Path(DEFAULT_CACHE))
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--threads", type=int, default=None)
        if name == "ap-count":
            p.add_argument("points", nargs="?", default=None,
                           help="comma-separated integers; omit for a seeded subset")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        n=args.n, y=args.y, r=args.r, w=args.w, delta=args.delta, p=args.p,
        grid=args.grid, cache_dir=args.cache_dir, seed=args.seed,
        format=args.format, threads=args.threads,
        points=getattr(args, "points", None),
    )
    try:
        return COMMANDS[args.command](cfg)
    except roth.NoProgressionError as exc:
        print(json.dumps({"error": "no-progression", "message": str(exc)}), file=sys.stderr)
        return 1
    except (ValueError, OSError, ArithmeticError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
