"""Command-line front door.

Subcommands: verify-identities, level-fit, conjecture-probe,
bilinear-partial, convexity, weil-scan, afe-check.  Every command is a
pure function of (config, code version): cells are computed by a worker
pool but reduced in sorted key order, so worker count never changes any
emitted byte.  Exit codes: 0 success, 1 verification failure, 2 usage
error, 3 resource guard.
"""

from __future__ import annotations

import concurrent.futures as cf
import json
import sys
import time
from pathlib import Path

import click

from . import kernels
from .afe import bilinear_form, conjecture_probe, fit_loglog, kloosterman_dirichlet_partial, sampled_units
from .arith import primes_up_to
from .characters import get_group
from .config import ExperimentConfig
from .divisor_ap import SieveBudgetError, SmoothWeight, level_cell
from .estermann import d2_convexity_probe
from .expsums import weil_scan_worst
from .verify import report_exit_code, reports_to_json, run_identity_suites

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _fmt(x) -> str:
    """Full round-trip decimal formatting for doubles."""
    return repr(float(x))


def _load_config(config_path: str | None, **overrides) -> ExperimentConfig:
    try:
        cfg = ExperimentConfig.load(config_path)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        click.echo(f"error: bad config: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    for key, val in overrides.items():
        if val is not None:
            setattr(cfg, key, val)
    try:
        cfg.validate()
    except ValueError as exc:
        click.echo(f"error: bad config: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    return cfg


def _out_path(cfg: ExperimentConfig, name: str) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out / name


class _RowWriter:
    """CSV writer flushing per row (interruption leaves a valid prefix)."""

    def __init__(self, path: Path, header: str):
        self.fh = path.open("w")
        self.fh.write(header + "\n")
        self.fh.flush()

    def row(self, *cells) -> None:
        self.fh.write(",".join(str(c) for c in cells) + "\n")
        self.fh.flush()

    def close(self) -> None:
        self.fh.close()


def _pool_map(fn, args_list, workers: int):
    """Order-preserving parallel map; sequential when workers == 1."""
    if workers <= 1 or len(args_list) <= 1:
        return [fn(*a) for a in args_list]
    with cf.ProcessPoolExecutor(max_workers=workers) as pool:
        futs = {pool.submit(fn, *a): i for i, a in enumerate(args_list)}
        out = [None] * len(args_list)
        for fut, i in futs.items():
            out[i] = fut.result()
    return out


def common_options(fn):
    fn = click.option("--config", "config_path", type=click.Path(), default=None, help="JSON config file.")(fn)
    fn = click.option("--seed", type=int, default=None, help="Override RNG seed.")(fn)
    fn = click.option("--pmax", "p_max", type=int, default=None, help="Override p_max.")(fn)
    fn = click.option("--threads", "workers", type=int, default=None, help="Worker count.")(fn)
    fn = click.option("--out", "out_dir", type=str, default=None, help="Output directory.")(fn)
    fn = click.option("--tol", "tol", type=float, default=None, help="Tolerance override (reports only).")(fn)
    return fn


@click.group()
def main() -> None:
    """Numerical verification workbench for divisor sums in progressions,
    Kloosterman sums, Dirichlet L-functions and Estermann series."""


@main.command("verify-identities")
@common_options
def cmd_verify_identities(config_path, seed, p_max, workers, out_dir, tol) -> None:
    """Run the full identity suite and write a JSON report."""
    cfg = _load_config(config_path, seed=seed, p_max=p_max, workers=workers, out_dir=out_dir)
    t0 = time.perf_counter()
    reports = run_identity_suites(cfg)
    path = _out_path(cfg, "verify_identities.json")
    path.write_text(reports_to_json(reports))
    warn_block = []
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        if r.quarantined and (r.discrepancies or r.notes):
            status = "PASS*"
            warn_block.append(f"  {r.suite}: {r.notes or f'{len(r.discrepancies)} known discrepancies'}")
        click.echo(
            f"{status:5s} {r.suite:28s} cases={r.cases_run:<8d} max_residual={r.max_residual:.3e} "
            f"({r.wall_time:.1f}s)"
        )
    if warn_block:
        click.echo("known-open-question discrepancies (quarantined, exit 0):")
        for line in warn_block:
            click.echo(line)
    click.echo(f"report: {path} ({time.perf_counter() - t0:.1f}s total)")
    sys.exit(report_exit_code(reports))


def _level_cell_worker(X: float, p: int, tag_amplitude: float, samples: int, seed: int):
    return level_cell(X, p, SmoothWeight(tag_amplitude), samples, seed)


@main.command("level-fit")
@common_options
def cmd_level_fit(config_path, seed, p_max, workers, out_dir, tol) -> None:
    """Discrepancy experiment: for each theta, fit log(max|Delta| p) vs log X."""
    from .arith import primes_near

    cfg = _load_config(config_path, seed=seed, p_max=p_max, workers=workers, out_dir=out_dir)
    if max(cfg.X_grid) * 2 > 50_000_000:
        click.echo("error: X_grid exceeds the sieve budget", err=True)
        sys.exit(EXIT_RESOURCE)
    fits = _out_path(cfg, "level_fits.csv")
    fw = _RowWriter(fits, "theta,slope,stderr,r2,n_points")
    try:
        for theta in cfg.theta_list:
            cells_args = []
            for X in cfg.X_grid:
                for p in primes_near(X**theta, cfg.primes_per_X):
                    if 3 <= p <= 2 * X:
                        cells_args.append((X, p, 1.0, cfg.samples_per_X, cfg.seed))
            cells = _pool_map(_level_cell_worker, cells_args, cfg.workers)
            cw = _RowWriter(
                _out_path(cfg, f"level_theta{theta:g}.csv"),
                "X,p,a,theta,delta,normalized,weight_tag",
            )
            xs, ys = [], []
            by_x: dict[float, list] = {}
            for c in cells:
                cw.row(_fmt(c.X), c.p, c.a, _fmt(theta), _fmt(c.delta), _fmt(c.normalized), c.weight_tag)
                by_x.setdefault(c.X, []).append(c)
            cw.close()
            for X in sorted(by_x):
                worst = max(by_x[X], key=lambda c: abs(c.delta) * c.p)
                xs.append(X)
                ys.append(abs(worst.delta) * worst.p)
            if len(xs) >= 2:
                fit = fit_loglog(xs, ys)
                fw.row(_fmt(theta), _fmt(fit.slope), _fmt(fit.stderr), _fmt(fit.r2), fit.n_points)
            elif not cells:
                click.echo(f"warning: theta={theta:g}: no valid primes in range, no fit emitted")
            else:
                click.echo(f"warning: theta={theta:g}: fewer than 2 usable X points, no fit emitted")
    except SieveBudgetError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_RESOURCE)
    finally:
        fw.close()
    click.echo(f"wrote {fits}")
    sys.exit(EXIT_OK)


def _bilinear_worker(t: float, q: int, A: int):
    return bilinear_form(t, q, A)


@main.command("conjecture-probe")
@common_options
def cmd_conjecture_probe(config_path, seed, p_max, workers, out_dir, tol) -> None:
    """Bilinear-form magnitudes over a prime range with a running log-log fit."""
    cfg = _load_config(config_path, seed=seed, p_max=p_max, workers=workers, out_dir=out_dir)
    lo, hi = cfg.prime_range
    primes = [p for p in primes_up_to(hi) if p >= max(lo, 3)]
    rows_path = _out_path(cfg, "conjecture_probe.csv")
    rw = _RowWriter(rows_path, "q,A,t,abs_B0,abs_B1,tail_bound")
    args = [
        (cfg.t_probe, q, int(A))
        for q in primes
        for A in sampled_units(q, cfg.samples_A, cfg.seed)
    ]
    results = _pool_map(_bilinear_worker, args, cfg.workers)
    per_prime_max: dict[int, float] = {}
    per_prime_all: dict[int, list] = {}
    for r in results:
        rw.row(r.q, r.A, _fmt(r.t), _fmt(abs(r.value_even)), _fmt(abs(r.value_odd)), _fmt(r.tail_bound))
        mag = max(abs(r.value_even), abs(r.value_odd))
        per_prime_max[r.q] = max(per_prime_max.get(r.q, 0.0), mag)
        per_prime_all.setdefault(r.q, []).append(mag)
    rw.close()
    pw = _RowWriter(_out_path(cfg, "conjecture_primes.csv"), "q,max_absB,mean_absB")
    for q in sorted(per_prime_all):
        mags = per_prime_all[q]
        pw.row(q, _fmt(max(mags)), _fmt(sum(mags) / len(mags)))
    pw.close()
    fw = _RowWriter(_out_path(cfg, "conjecture_fits.csv"), "q,slope,stderr,r2")
    qs = sorted(per_prime_max)
    for i in range(1, len(qs)):
        sub = qs[: i + 1]
        fit = fit_loglog(sub, [per_prime_max[q] for q in sub])
        fw.row(qs[i], _fmt(fit.slope), _fmt(fit.stderr), _fmt(fit.r2))
    fw.close()
    click.echo(f"wrote {rows_path}")
    sys.exit(EXIT_OK)


@main.command("bilinear-partial")
@common_options
def cmd_bilinear_partial(config_path, seed, p_max, workers, out_dir, tol) -> None:
    """Kloosterman-Dirichlet partial sums against the p^{1/2} N1^{-1/2} scale."""
    cfg = _load_config(config_path, seed=seed, p_max=p_max, workers=workers, out_dir=out_dir)
    lo, hi = cfg.prime_range
    primes = [p for p in primes_up_to(hi) if p >= max(lo, 3)]
    s = 1.01 + 0j
    path = _out_path(cfg, "bilinear_partial.csv")
    w = _RowWriter(path, "p,a,N1,N,abs_S,bound_ratio")
    for p in primes:
        N1 = max(1, int(round(p ** (0.5 - cfg.delta))))
        for a in sampled_units(p, min(cfg.samples_A, 5), cfg.seed):
            val, ratio = kloosterman_dirichlet_partial(s, p, int(a), N1, p)
            w.row(p, int(a), N1, p, _fmt(abs(val)), _fmt(ratio))
    w.close()
    click.echo(f"wrote {path}")
    sys.exit(EXIT_OK)


@main.command("convexity")
@common_options
def cmd_convexity(config_path, seed, p_max, workers, out_dir, tol) -> None:
    """|D2| against the convexity envelope over (p, sigma, t, A)."""
    cfg = _load_config(config_path, seed=seed, p_max=p_max, workers=workers, out_dir=out_dir)
    lo, hi = cfg.prime_range
    primes = [p for p in primes_up_to(hi) if p >= max(lo, 3)]
    rows = d2_convexity_probe(primes, cfg.sigma_grid, cfg.t_grid, samples_per_prime=8, seed=cfg.seed)
    path = _out_path(cfg, "convexity.csv")
    w = _RowWriter(path, "p,sigma,t,A,abs_D2,convexity_ratio")
    for r in rows:
        w.row(r.p, _fmt(r.sigma), _fmt(r.t), r.A, _fmt(r.abs_D2), _fmt(r.convexity_ratio))
    w.close()
    crit = [r for r in rows if abs(r.sigma - 0.5) < 1e-12 and r.t == 0.0]
    if len({r.p for r in crit}) >= 2:
        per_p: dict[int, float] = {}
        for r in crit:
            per_p[r.p] = max(per_p.get(r.p, 0.0), r.abs_D2)
        qs = sorted(per_p)
        fit = fit_loglog(qs, [per_p[q] for q in qs])
        click.echo(
            f"critical-line fit: |D2(1/2)| ~ p^{fit.slope:.3f} (stderr {fit.stderr:.3f}, "
            f"convexity exponent 5/4)"
        )
    click.echo(f"wrote {path}")
    sys.exit(EXIT_OK)


@main.command("weil-scan")
@common_options
def cmd_weil_scan(config_path, seed, p_max, workers, out_dir, tol) -> None:
    """All-pairs Weil-bound scan for every prime <= pmax."""
    cfg = _load_config(config_path, seed=seed, p_max=p_max, workers=workers, out_dir=out_dir)
    path = _out_path(cfg, "weil_scan.csv")
    w = _RowWriter(path, "p,worst_ratio,m,n")
    worst = 0.0
    t0 = time.perf_counter()
    primes = primes_up_to(cfg.p_max)
    results = _pool_map(weil_scan_worst, [(p,) for p in primes], cfg.workers)
    for p, (ratio, m, n) in zip(primes, results):
        w.row(p, _fmt(ratio), m, n)
        worst = max(worst, ratio)
    w.close()
    ok = worst <= 1 + 1e-6
    click.echo(
        f"weil-scan p<={cfg.p_max} [{kernels.BACKEND} backend]: worst |S|/bound = {worst:.6f} "
        f"({time.perf_counter() - t0:.1f}s) -> {'PASS' if ok else 'FAIL'}"
    )
    sys.exit(EXIT_OK if ok else EXIT_VERIFY_FAIL)


@main.command("afe-check")
@common_options
@click.option("--cutoff-mult", type=int, default=4000, show_default=True, help="Double-sum cutoff = mult * p.")
def cmd_afe_check(config_path, seed, p_max, workers, out_dir, tol, cutoff_mult) -> None:
    """Approximate-functional-equation residuals for p in {5,7,13}."""
    from .afe import afe_check

    cfg = _load_config(config_path, seed=seed, p_max=p_max, workers=workers, out_dir=out_dir)
    tolerance = tol if tol is not None else 1e-6
    path = _out_path(cfg, "afe_check.csv")
    w = _RowWriter(path, "p,j,t,residual,tail_estimate,cutoff")
    worst = 0.0
    for p in (5, 7, 13):
        grp = get_group(p)
        for j in range(1, p - 1):
            for t in (0.0, 1.0, 2.0):
                r = afe_check(0.5 + 1j * t, grp.character(j), cutoff=cutoff_mult * p)
                w.row(p, j, _fmt(t), _fmt(r.residual), _fmt(r.tail_estimate), r.cutoff)
                worst = max(worst, r.residual)
    w.close()
    ok = worst <= tolerance
    click.echo(f"afe-check: worst residual {worst:.3e} (tolerance {tolerance:g}) -> {'PASS' if ok else 'FAIL'}")
    sys.exit(EXIT_OK if ok else EXIT_VERIFY_FAIL)


if __name__ == "__main__":
    main()
