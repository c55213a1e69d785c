"""Command-line front end: scans, density tables, counting breakdowns,
wide-squarefree listings, and self-verification.

All machine output (JSON or CSV) goes to stdout unless --out is given;
diagnostics go to stderr. Reals are rendered with 17 significant digits
so files round-trip exactly. Exit codes: 0 success, 1 verification
failure, 2 usage error, 3 capacity error.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import isqrt
from typing import Optional

import numpy as np

from . import boundary, gaps, oracle
from .counting import (
    count_isolated_set,
    direct_counts,
    inclusion_exclusion,
    make_params,
    tuple_reciprocal_sum,
    wide_squarefree_set,
    window_set,
)
from .gaps import (
    HIST_BINS,
    HIST_LO,
    HIST_WIDTH,
    MODE_PER_N,
    MODE_PER_RANGE,
    empirical_density,
    empty_summary,
    merge_summaries,
    scan_range,
    theoretical_density,
)
from .sieve import (
    DEFAULT_SEGMENT_SIZE,
    InsufficientTableError,
    build_prime_table,
    factorize,
    mobius,
    segment_factor_scan,
)

COUNT_X_GUARD = 10_000_000
VERIFY_GRID_X = (30, 100, 300, 1000, 2000)
VERIFY_GRID_C = (0.5, 1.0, 2.0)
DEFAULT_SEED = 20


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    """Validated knobs of one CLI invocation."""

    subcommand: str
    lo: Optional[int] = None
    hi: Optional[int] = None
    x: Optional[int] = None
    c_values: tuple[float, ...] = ()
    mode: str = MODE_PER_N
    fmt: str = "json"
    out: Optional[str] = None
    workers: int = 1
    segment_size: int = DEFAULT_SEGMENT_SIZE
    seed: int = DEFAULT_SEED
    allow_large: bool = False
    x_max: int = 2000

    def validate(self) -> None:
        if self.subcommand in ("scan", "density"):
            if self.lo is None or self.hi is None:
                raise UsageError("--min and --max are required")
            if not gaps.ELIGIBLE_FLOOR <= self.lo < self.hi:
                raise UsageError(
                    f"need {gaps.ELIGIBLE_FLOOR} <= min < max, got [{self.lo}, {self.hi})"
                )
            if not self.c_values:
                raise UsageError("--c requires at least one value")
        if self.subcommand in ("count", "enumerate-m"):
            if self.x is None or self.x < 16:
                raise UsageError("--x must be an integer >= 16")
            if len(self.c_values) != 1:
                raise UsageError("--c takes exactly one value here")
            if (
                self.subcommand == "count"
                and self.x > COUNT_X_GUARD
                and not self.allow_large
            ):
                raise UsageError(
                    f"--x {self.x} exceeds the {COUNT_X_GUARD} guard; "
                    "pass --allow-large to override"
                )
        if any(c <= 0 for c in self.c_values):
            raise UsageError("all c values must be > 0")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")
        if not 1 <= self.segment_size <= gaps.MAX_SEGMENT_SIZE:
            raise UsageError(
                f"--segment-size must be in [1, {gaps.MAX_SEGMENT_SIZE}]"
            )
        if self.mode not in (MODE_PER_N, MODE_PER_RANGE):
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.fmt not in ("json", "csv"):
            raise UsageError(f"unknown format {self.fmt!r}")


# ----------------------------------------------------------------------
# deterministic rendering


def fmt_real(v: float) -> str:
    """17 significant digits: parses back to the identical double."""
    return format(float(v), ".17g")


def render_json(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{pad}  {json.dumps(str(k))}: {render_json(v, indent + 1)}'
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        inner = ", ".join(render_json(v, indent + 1) for v in obj)
        return "[" + inner + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, float):
        return fmt_real(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if obj is None:
        return "null"
    return json.dumps(obj)


def emit(text: str, out: Optional[str], stdout) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)


# ----------------------------------------------------------------------
# parallel scanning


def _scan_task(args):
    lo, hi, thresholds, mode, range_point, segment_size, limit = args
    table = build_prime_table(limit)
    return scan_range(
        lo,
        hi,
        thresholds,
        table,
        mode=mode,
        range_point=range_point,
        segment_size=segment_size,
    )


def run_scan(cfg: RunConfig) -> gaps.ScanSummary:
    """Scan [lo, hi) with cfg.workers processes; the merge law makes the
    result identical for any worker count."""
    a, b = cfg.lo, cfg.hi
    thr = tuple(sorted(set(cfg.c_values)))
    range_point = b - 1 if cfg.mode == MODE_PER_RANGE else None
    limit = max(isqrt(b - 1), 2)
    if cfg.workers == 1:
        table = build_prime_table(limit)
        return scan_range(
            a,
            b,
            thr,
            table,
            mode=cfg.mode,
            range_point=range_point,
            segment_size=cfg.segment_size,
        )

    chunk = max(cfg.segment_size, (b - a) // (cfg.workers * 8) + 1)
    tasks = [
        (lo, min(lo + chunk, b), thr, cfg.mode, range_point, cfg.segment_size, limit)
        for lo in range(a, b, chunk)
    ]
    total = empty_summary(thr, cfg.mode, range_point)
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        for part in pool.map(_scan_task, tasks):
            total = merge_summaries(total, part)
    return total


def summary_payload(s: gaps.ScanSummary) -> dict:
    ranges = list(s.ranges)
    payload = {
        "range": list(ranges[0]) if len(ranges) == 1 else [list(r) for r in ranges],
        "mode": s.mode,
        "range_point": s.range_point,
        "total": s.total,
        "eligible": s.eligible,
        "mean_f": s.mean_gap if s.eligible else None,
        "var_f": s.var_gap if s.eligible else None,
        "exceed": {fmt_real(c): s.exceed[c] for c in s.thresholds},
        "histogram": {
            "lo": HIST_LO,
            "width": HIST_WIDTH,
            "bins": HIST_BINS,
            "underflow": int(s.hist[0]),
            "counts": [int(v) for v in s.hist[1:-1]],
            "overflow": int(s.hist[-1]),
        },
    }
    return payload


def summary_csv(s: gaps.ScanSummary) -> str:
    lines = []
    for a, b in s.ranges:
        lines.append(f"# range={a}:{b}")
    lines.append(f"# mode={s.mode}")
    if s.range_point is not None:
        lines.append(f"# range_point={s.range_point}")
    lines.append(f"# total={s.total}")
    lines.append(f"# eligible={s.eligible}")
    lines.append(f"# mean_f={fmt_real(s.mean_gap) if s.eligible else 'nan'}")
    lines.append(f"# var_f={fmt_real(s.var_gap) if s.eligible else 'nan'}")
    for c in s.thresholds:
        lines.append(f"# exceed_{fmt_real(c)}={s.exceed[c]}")
    lines.append("bin_lo,bin_hi,count")
    lines.append(f"-inf,{fmt_real(HIST_LO)},{int(s.hist[0])}")
    for i in range(HIST_BINS):
        lo = HIST_LO + i * HIST_WIDTH
        hi = HIST_LO + (i + 1) * HIST_WIDTH
        lines.append(f"{fmt_real(lo)},{fmt_real(hi)},{int(s.hist[i + 1])}")
    lines.append(f"{fmt_real(HIST_LO + HIST_BINS * HIST_WIDTH)},inf,{int(s.hist[-1])}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# subcommands


def cmd_scan(cfg: RunConfig, stdout) -> int:
    s = run_scan(cfg)
    if cfg.fmt == "json":
        emit(render_json(summary_payload(s)) + "\n", cfg.out, stdout)
    else:
        emit(summary_csv(s), cfg.out, stdout)
    return 0


def cmd_density(cfg: RunConfig, stdout) -> int:
    """One row per c with the empirical exceedance share under both
    threshold conventions, against the limiting density."""
    per_n = run_scan(
        RunConfig(**{**cfg.__dict__, "mode": MODE_PER_N, "subcommand": "scan"})
    )
    per_range = run_scan(
        RunConfig(**{**cfg.__dict__, "mode": MODE_PER_RANGE, "subcommand": "scan"})
    )
    rows = []
    for c in sorted(set(cfg.c_values)):
        rep_n = empirical_density(per_n, c)
        rep_r = empirical_density(per_range, c)
        configured = rep_n if cfg.mode == MODE_PER_N else rep_r
        rows.append(
            {
                "c": c,
                "empirical": configured.empirical,
                "empirical_per_n": rep_n.empirical,
                "empirical_per_range": rep_r.empirical,
                "theoretical": configured.theoretical,
                "deviation": configured.deviation,
                "partial_sums": list(configured.partial_sums),
            }
        )
    if cfg.fmt == "json":
        payload = {
            "range": [cfg.lo, cfg.hi],
            "mode": cfg.mode,
            "eligible": per_n.eligible,
            "rows": rows,
        }
        emit(render_json(payload) + "\n", cfg.out, stdout)
    else:
        lines = [
            f"# range={cfg.lo}:{cfg.hi}",
            f"# mode={cfg.mode}",
            f"# eligible={per_n.eligible}",
            "c,empirical,empirical_per_n,empirical_per_range,theoretical,deviation,"
            + ",".join(f"partial_K{k}" for k in range(9)),
        ]
        for r in rows:
            vals = [
                fmt_real(r["c"]),
                fmt_real(r["empirical"]),
                fmt_real(r["empirical_per_n"]),
                fmt_real(r["empirical_per_range"]),
                fmt_real(r["theoretical"]),
                fmt_real(r["deviation"]),
            ] + [fmt_real(v) for v in r["partial_sums"]]
            lines.append(",".join(vals))
        emit("\n".join(lines) + "\n", cfg.out, stdout)
    return 0


def cmd_count(cfg: RunConfig, stdout) -> int:
    x, c = cfg.x, cfg.c_values[0]
    pars = make_params(x, c)
    table = build_prime_table(x)
    bd = inclusion_exclusion(pars, table)
    identity_ok = bd.n_inclusion_exclusion == bd.n_direct
    per_k = []
    for layer in bd.per_k:
        s_k = tuple_reciprocal_sum(pars, layer.k, table, constrain_product=True)
        per_k.append(
            {
                "k": layer.k,
                "m_count": layer.m_count,
                "N_k": layer.count,
                "poisson_ref": x / (c ** layer.k * math.factorial(layer.k)),
                "S_k": s_k,
                "tuple_ref": math.log(math.log(x)) ** layer.k
                / math.factorial(layer.k),
            }
        )
    payload = {
        "params": {
            "x": pars.x,
            "c": pars.c,
            "Z": pars.gap_exp,
            "y": pars.small_prime_bound,
            "mode": pars.mode,
        },
        "N_direct": bd.n_direct,
        "N_direct_gapform": bd.n_direct_gapform,
        "smooth_gap_count": bd.smooth_gap_count,
        "per_k": per_k,
        "bonferroni": [list(t) for t in bd.bonferroni],
        "N_inclusion_exclusion": bd.n_inclusion_exclusion,
        "identity_check": "PASS" if identity_ok else "FAIL",
    }
    emit(render_json(payload) + "\n", cfg.out, stdout)
    if not identity_ok:
        print(
            f"FAIL identity: N_inclusion_exclusion={bd.n_inclusion_exclusion} "
            f"!= N_direct={bd.n_direct}",
            file=sys.stderr,
        )
        return 1
    return 0


def cmd_enumerate_m(cfg: RunConfig, stdout) -> int:
    x, c = cfg.x, cfg.c_values[0]
    pars = make_params(x, c)
    table = build_prime_table(max(x, 2))
    members = wide_squarefree_set(pars, table)
    lines = ["k,m,primes"]
    for w in members:
        lines.append(f"{w.k},{w.m},{' '.join(str(p) for p in w.primes)}")
    emit("\n".join(lines) + "\n", cfg.out, stdout)
    return 0


# ----------------------------------------------------------------------
# verification


def _check(results, name, ok, detail=""):
    results.append((name, bool(ok), detail))


def run_verification(x_max: int = 2000, seed: int = DEFAULT_SEED):
    """Run the invariant grid against the naive reference implementations.

    Returns (all_ok, results) with one (name, ok, detail) triple per
    check; detail carries the compared values on failure.
    """
    results: list[tuple[str, bool, str]] = []
    rng = random.Random(seed)
    # 10**4 covers factorize up to 10**8 (mobius products of samples <= 10**4)
    table = build_prime_table(max(x_max, 10_000))

    # counting identities on the grid
    for x in VERIFY_GRID_X:
        if x > x_max:
            continue
        for c in VERIFY_GRID_C:
            pars = make_params(x, c)
            bd = inclusion_exclusion(pars, table)
            nv = oracle.naive_N(x, c)
            _check(
                results,
                f"identity x={x} c={c}",
                bd.n_inclusion_exclusion == bd.n_direct == nv,
                f"IE={bd.n_inclusion_exclusion} direct={bd.n_direct} naive={nv}",
            )
            sandwich = all(
                (part >= bd.n_direct) if (k % 2 == 0) else (part <= bd.n_direct)
                for k, part in bd.bonferroni
            ) and bd.bonferroni[-1][1] == bd.n_direct
            _check(
                results,
                f"bonferroni x={x} c={c}",
                sandwich,
                f"partials={bd.bonferroni} direct={bd.n_direct}",
            )

            members = wide_squarefree_set(pars, table)
            got = [(w.m, w.primes) for w in members]
            want = oracle.naive_wide_squarefree(x, c)
            _check(
                results,
                f"wide-set x={x} c={c}",
                got == want,
                f"sizes {len(got)} vs {len(want)}",
            )
            _check(
                results,
                f"windows-disjoint x={x} c={c}",
                all(window_set(w, pars).is_disjoint() for w in members),
            )

            bad = []
            for w in members:
                mine = count_isolated_set(w, pars, table)
                ref = oracle.naive_chi_count(w.primes, x, c)
                if mine != ref:
                    bad.append((w.m, mine, ref))
                    if len(bad) >= 3:
                        break
            _check(
                results,
                f"inner-counts x={x} c={c}",
                not bad,
                f"mismatches {bad}",
            )

    # both inner-count strategies agree where both are exercised
    pars = make_params(min(x_max, 2000), 1.0)
    members = wide_squarefree_set(pars, table)
    strategy_ok = all(
        count_isolated_set(w, pars, table, strategy="stream")
        == count_isolated_set(w, pars, table, strategy="sieve")
        for w in members
    )
    _check(results, "inner-count strategies agree", strategy_ok)

    # boundary robustness: extended precision everywhere changes nothing
    for x in (30, 300, 1000):
        if x > x_max:
            continue
        for c in VERIFY_GRID_C:
            pars = make_params(x, c)
            fast = inclusion_exclusion(pars, table)
            with boundary.force_extended():
                slow = inclusion_exclusion(pars, table)
            _check(
                results,
                f"boundary-robust x={x} c={c}",
                fast == slow,
                f"fast={fast.n_inclusion_exclusion} slow={slow.n_inclusion_exclusion}",
            )

    # Eq-style identity entirely inside the oracle
    for x, c in ((30, 1.0), (100, 0.5), (100, 2.0), (300, 1.0)):
        if x > x_max:
            continue
        total = 0
        for m, primes in oracle.naive_wide_squarefree(x, c):
            sign = -1 if len(primes) % 2 else 1
            total += sign * oracle.naive_chi_count(primes, x, c)
        nv = oracle.naive_N(x, c)
        _check(
            results,
            f"oracle-internal identity x={x} c={c}",
            total == nv,
            f"sum={total} naive={nv}",
        )

    # gap statistic vs oracle on a seeded sample
    sample = [rng.randrange(2, 100_001) for _ in range(1500)]
    worst = 0.0
    rad_ok = True
    for n in sample:
        fact = factorize(n, table)
        pr = gaps.gap_profile(fact)
        ref = oracle.naive_f(n)
        if (pr.gap is None) != (ref is None):
            worst = math.inf
            break
        if ref is not None:
            worst = max(worst, abs(pr.gap - ref) / abs(ref))
        rad = 1
        for p in fact.primes:
            rad *= p
        if gaps.gap_profile(factorize(rad, table)).gap != pr.gap:
            rad_ok = False
    _check(results, "gap vs oracle (sample)", worst <= 1e-12, f"worst rel {worst:.3g}")
    _check(results, "radical invariance (sample)", rad_ok)

    # merge law on a random partition
    cut = rng.randrange(17, 40_000)
    thr = (0.5, 1.0, 2.0)
    s1 = scan_range(16, cut, thr, table)
    s2 = scan_range(cut, 40_000, thr, table)
    m = merge_summaries(s1, s2)
    d = scan_range(16, 40_000, thr, table)
    merged_equal = (
        m.ranges == d.ranges
        and m.total == d.total
        and m.eligible == d.eligible
        and np.array_equal(m.hist, d.hist)
        and m.exceed == d.exceed
        and m.sum_gap_fp == d.sum_gap_fp
        and m.sum_gap_sq_fp == d.sum_gap_sq_fp
    )
    _check(results, f"merge law (cut {cut})", merged_equal)
    _check(
        results,
        "exceed monotone in c",
        d.exceed[0.5] >= d.exceed[1.0] >= d.exceed[2.0],
        f"{d.exceed}",
    )

    # alternating-series bracketing
    brack_ok = True
    for c in (0.25, 0.5, 1.0, 2.0, 4.0):
        lim = math.exp(-1.0 / c)
        for K in range(11):
            s = gaps.partial_alternating_sum(c, K)
            if K % 2 == 0 and s < lim - 1e-15:
                brack_ok = False
            if K % 2 == 1 and s > lim + 1e-15:
                brack_ok = False
    _check(results, "partial sums bracket exp(-1/c)", brack_ok)

    # Mobius sanity
    mob_ok = True
    for x in (10, 100, 1000):
        total = sum(
            mobius(factorize(n, table)) * (x // n) for n in range(1, x + 1)
        )
        if total != 1:
            mob_ok = False
    for _ in range(300):
        a = rng.randrange(1, 10_001)
        b = rng.randrange(1, 10_001)
        if math.gcd(a, b) == 1:
            mu_a = mobius(factorize(a, table))
            mu_b = mobius(factorize(b, table))
            if mobius(factorize(a * b, table)) != mu_a * mu_b:
                mob_ok = False
    _check(results, "mobius identities", mob_ok)

    all_ok = all(ok for _, ok, _ in results)
    return all_ok, results


def cmd_verify(cfg: RunConfig, stdout) -> int:
    t0 = time.perf_counter()
    all_ok, results = run_verification(x_max=cfg.x_max, seed=cfg.seed)
    for name, ok, detail in results:
        if ok:
            stdout.write(f"PASS {name}\n")
        else:
            stdout.write(f"FAIL {name}: {detail}\n")
    n_ok = sum(1 for _, ok, _ in results)
    stdout.write(
        f"{'OK' if all_ok else 'FAILED'}: {n_ok}/{len(results)} checks passed "
        f"in {time.perf_counter() - t0:.1f}s\n"
    )
    return 0 if all_ok else 1


# ----------------------------------------------------------------------
# argument parsing


def _parse_c_list(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise UsageError(f"bad --c list {text!r}: {exc}") from None
    if not vals:
        raise UsageError("empty --c list")
    return vals


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="factorgaps",
        description="Largest gap between prime factors: scans, densities, exact counts.",
    )
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("scan", help="distribution summary over [min, max)")
    p.add_argument("--min", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--c", required=True, help="comma-separated thresholds")
    p.add_argument("--mode", choices=("n", "range"), default="n")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--segment-size", type=int, default=DEFAULT_SEGMENT_SIZE)
    common(p)

    p = sub.add_parser("density", help="empirical vs limiting exceedance density")
    p.add_argument("--min", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--mode", choices=("n", "range"), default="n")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--segment-size", type=int, default=DEFAULT_SEGMENT_SIZE)
    common(p)

    p = sub.add_parser("count", help="inclusion-exclusion breakdown at x")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--allow-large", action="store_true")
    p.add_argument("--out", default=None)

    p = sub.add_parser("enumerate-m", help="list the wide squarefree set")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("verify", help="run the invariant grid against the oracle")
    p.add_argument("--x-max", type=int, default=2000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(subcommand=ns.subcommand)
    if hasattr(ns, "min"):
        cfg.lo = ns.min
        cfg.hi = ns.max
    if hasattr(ns, "x") and ns.subcommand in ("count", "enumerate-m"):
        cfg.x = ns.x
    if hasattr(ns, "c"):
        cfg.c_values = _parse_c_list(ns.c)
    if hasattr(ns, "mode"):
        cfg.mode = MODE_PER_N if ns.mode == "n" else MODE_PER_RANGE
    if hasattr(ns, "format"):
        cfg.fmt = ns.format
    if hasattr(ns, "out"):
        cfg.out = ns.out
    if hasattr(ns, "workers"):
        cfg.workers = ns.workers
    if hasattr(ns, "segment_size"):
        cfg.segment_size = ns.segment_size
    if hasattr(ns, "allow_large"):
        cfg.allow_large = ns.allow_large
    if hasattr(ns, "x_max"):
        cfg.x_max = ns.x_max
    if hasattr(ns, "seed"):
        cfg.seed = ns.seed
    cfg.validate()
    return cfg


HANDLERS = {
    "scan": cmd_scan,
    "density": cmd_density,
    "count": cmd_count,
    "enumerate-m": cmd_enumerate_m,
    "verify": cmd_verify,
}


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(ns)
        return HANDLERS[cfg.subcommand](cfg, stdout)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InsufficientTableError, MemoryError) as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
