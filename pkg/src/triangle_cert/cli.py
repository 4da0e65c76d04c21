"""Command-line driver: verify | counterexample | scan | opt | plot | report.

Exit codes: 0 all pass, 1 some check failed, 2 indeterminate, 64 usage error.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .intervals import PrecisionContext, lower, to_float, upper
from .reports import (
    DEFAULT_GRID,
    RunConfig,
    UsageError,
    VerificationReport,
    parse_range,
    sample_function,
    sample_points,
    sign_changes_in,
    to_csv,
    to_svg,
)
from .results import LemmaResult, Status

EXIT_OK, EXIT_FAIL, EXIT_INDETERMINATE, EXIT_USAGE = 0, 1, 2, 64

TAG_ALIASES = {
    "h": "H_FN",
    "h'": "H_PRIME",
    "hp": "H_PRIME",
    "psi": "PSI",
    "psi'": "PSI_PRIME",
    "P": "P_FN",
    "Q": "Q_FN",
    "Q'": "Q_PRIME",
    "Q''": "Q_PP",
    "g": "G_FN",
    "W": "W_FN",
    "H": "BIG_H",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--precision-bits", type=int, default=d, help="interval precision (default 256)")
    p.add_argument("--seed", type=int, default=d, help="random seed (default 0)")
    p.add_argument("--out-dir", default=d, help="directory for reports and figures (default .)")
    p.add_argument("--config", default=d, help="key=value config file; flags override it")
    p.add_argument("--no-timing", action="store_true", default=d, help="zero wall-clock fields for byte-identical reports")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="triangle-cert", description=__doc__.splitlines()[0])
    _global_flags(ap, suppress=False)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run lemma suites over a p grid")
    v.add_argument("--suite", default=None, choices=["appendix", "boundary", "patterns", "endpoint", "main", "all"])
    v.add_argument("--p", action="append", default=None, help="p value (repeatable; fractions like 7/2 allowed)")
    v.add_argument("--p-grid", default=None, help=f"min:max:lin|log:count (default {DEFAULT_GRID})")
    v.add_argument("--jobs", type=int, default=1, help="worker processes for per-p checks")

    c = sub.add_parser("counterexample", help="admissible exponents for the private/common family")
    c.add_argument("--p", required=True)
    c.add_argument("--c", default=None)
    c.add_argument("--n-max", type=int, default=10**6)

    s = sub.add_parser("scan", help="min-slack sampling of an inequality")
    s.add_argument("inequality", choices=["sami1", "num1", "tej1", "cfl"])
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--p", default="4")
    s.add_argument("--samples", type=int, default=100_000)

    o = sub.add_parser("opt", help="two-value scan versus brute-force oracle")
    o.add_argument("--n", type=int, default=3)
    o.add_argument("--p", default="4")
    o.add_argument("--b", type=float, action="append", default=None, help="pair-sum target (repeatable)")
    o.add_argument("--b-count", type=int, default=10)
    o.add_argument("--resolution", type=int, default=2000)
    o.add_argument("--grid-step", type=float, default=0.02)

    pl = sub.add_parser("plot", help="sample a named function to CSV or SVG")
    pl.add_argument("function", help="h, h', psi, psi', P, Q, Q', Q'', g, W, H or a tag name")
    pl.add_argument("--p", action="append", default=None)
    pl.add_argument("--s-range", default="0.001:100")
    pl.add_argument("--points", type=int, default=400)
    pl.add_argument("--format", choices=["csv", "svg"], default="csv")
    pl.add_argument("--log-x", action="store_true")

    r = sub.add_parser("report", help="summarize a saved report")
    r.add_argument("path")

    for sp in (v, c, s, o, pl, r):
        _global_flags(sp, suppress=True)
    return ap


def _config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        try:
            cfg = RunConfig.from_text(Path(args.config).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
    if getattr(args, "precision_bits", None) is not None:
        cfg.precision_bits = args.precision_bits
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "out_dir", None) is not None:
        cfg.out_dir = args.out_dir
    if getattr(args, "no_timing", None):
        cfg.timing = False
    if getattr(args, "suite", None):
        cfg.suite = args.suite
    if getattr(args, "p_grid", None):
        cfg.p_grid = args.p_grid
        cfg.p_values = []
    if getattr(args, "p", None) and isinstance(args.p, list):
        cfg.p_values = [x for item in args.p for x in item.split(",") if x]
    return cfg


def _p_task(suite: str, p: Fraction, bits: int, seed: int) -> list[dict]:
    # plain JSON form, so results cross process boundaries and both paths agree
    from .lemmas import run_p_suite

    return [r.to_dict() for r in run_p_suite(suite, p, PrecisionContext(bits), seed=seed)]


def _print_results(results: list[LemmaResult]) -> None:
    for r in results:
        p = "" if r.p is None else f" p={r.p}"
        print(f"{r.status.value:13s} {r.lemma_id}{p} [{r.c_regime}]")


def _finish(report: VerificationReport, cfg: RunConfig, name: str) -> int:
    path = report.write(Path(cfg.out_dir) / f"{name}.json", cfg.timing)
    s = report.summary
    print(f"{s['pass']} pass, {s['fail']} fail, {s['indeterminate']} indeterminate -> {path}")
    return report.exit_code()


def cmd_verify(args) -> int:
    from .lemmas import EXACT_P_SET, chain_consistency, verify_descartes
    from .registry import verify_all_expansions

    cfg = _config(args)
    if cfg.suite in ("all", "boundary", "patterns", "endpoint", "main"):
        cfg.validate()
    else:
        cfg.validate(discrete=True)
    suites = ["appendix", "boundary", "patterns", "endpoint", "main"] if cfg.suite == "all" else [cfg.suite]
    results: list[LemmaResult] = []
    timing: dict[str, float] = {}
    ps = cfg.ps()
    jobs = max(1, args.jobs)
    for suite in suites:
        t0 = time.perf_counter()
        if suite == "appendix":
            results += verify_all_expansions()
            if cfg.suite == "all":
                results += verify_descartes()
        else:
            todo = list(ps)
            if suite == "patterns" and cfg.suite == "all":
                todo += [p for p in EXACT_P_SET if p not in todo]
            tasks = [(suite, p, cfg.precision_bits, cfg.seed) for p in todo]
            if jobs > 1:
                with ProcessPoolExecutor(jobs) as ex:
                    for out in ex.map(_p_task, *zip(*tasks)):
                        results += [LemmaResult.from_dict(d) for d in out]
            else:
                for t in tasks:
                    results += [LemmaResult.from_dict(d) for d in _p_task(*t)]
        timing[suite] = (time.perf_counter() - t0) * 1000
    if cfg.suite == "all":
        t0 = time.perf_counter()
        results.append(chain_consistency(20, cfg.seed, PrecisionContext(cfg.precision_bits)))
        timing["chain"] = (time.perf_counter() - t0) * 1000
    report = VerificationReport(cfg.echo(), results, timing)
    _print_results(report.results)
    return _finish(report, cfg, "report-verify")


def cmd_counterexample(args) -> int:
    from .discrete import find_violation, max_admissible_c, p_prime

    cfg = _config(args)
    p = Fraction(args.p)
    if p < 2:
        raise UsageError("counterexample needs p >= 2")
    ctx = PrecisionContext(cfg.precision_bits)
    ns = [3] + [10**k for k in range(1, 20) if 10**k <= args.n_max]
    print(f"{'n':>12s}  max admissible c")
    rows = []
    for n in ns:
        v = max_admissible_c(n, p, ctx)
        with ctx.active():
            rows.append({"n": n, "c": [float(lower(v)), float(upper(v))]})
            print(f"{n:>12d}  {to_float(v):.10f}")
    pp = p_prime(p)
    print(f"limit p' = {float(pp):.10f}")
    wit: dict = {"table": rows, "p'": pp}
    status = Status.PASS
    if args.c is not None:
        rep = find_violation(p, Fraction(args.c), args.n_max, ctx)
        if rep.n is None:
            print(f"no violation for c = {args.c} up to n = {args.n_max}")
        else:
            with ctx.active():
                print(f"first violating n = {rep.n}: lhs {to_float(rep.lhs):.12g} > rhs {to_float(rep.rhs):.12g}")
            wit.update({"violating n": rep.n, "lhs": rep.lhs, "rhs": rep.rhs, "neighbor below passes": rep.neighbors_checked})
        wit["c"] = rep.c
    report = VerificationReport(cfg.echo() | {"command": "counterexample"}, [LemmaResult("counterexample", status, p=p, c_regime="given c", witnesses=wit)])
    return _finish(report, cfg, "report-counterexample")


def _cfl_scan(n: int, p: float, trials: int, seed: int) -> tuple[float, str]:
    from .discrete import random_instance
    from .optimize import verify_cfl_discrete

    rng = random.Random(seed)
    worst, text = float("inf"), ""
    for _ in range(trials):
        inst = random_instance(rng, Fraction(p).limit_denominator(10**6), 6, n)
        while inst.n != n:
            inst = random_instance(rng, Fraction(p).limit_denominator(10**6), 6, n)
        s = verify_cfl_discrete(inst)
        if s < worst:
            worst, text = s, inst.to_text()
    return worst, text


def cmd_scan(args) -> int:
    from .lemmas import verify_main_inequality
    from .optimize import ScanSummary, verify_num1, verify_two_function

    cfg = _config(args)
    p = float(Fraction(args.p))
    diagnostic = False
    if args.inequality == "sami1":
        res = verify_main_inequality(Fraction(args.p), args.samples, cfg.seed)
        mn, wit = res.witnesses["min slack"], res.witnesses["random argmin"]
    elif args.inequality == "num1":
        sm = verify_num1(args.n, p, args.samples, cfg.seed)
        res, mn, wit, diagnostic = sm.as_result(), sm.min_slack, sm.witness, sm.diagnostic
    elif args.inequality == "tej1":
        d = verify_two_function(p, args.samples)
        mn = min(d["min slack (c(p) form)"], d["min slack (stronger form)"])
        wit = d
        res = LemmaResult("tej1", Status.PASS if mn >= -1e-12 else Status.FAIL, p=p, witnesses=d)
    else:
        trials = min(args.samples, 1000)
        mn, text = _cfl_scan(args.n, p, trials, cfg.seed)
        diagnostic = not (args.n == 3 and p >= 3)
        sm = ScanSummary("cfl", args.n, p, mn, [], trials, cfg.seed, diagnostic, {"worst instance": text})
        res, wit = sm.as_result(), text
    if diagnostic:
        print(f"diagnostic mode: no theorem is claimed for n = {args.n}, p = {args.p}; observed slack only")
    print(f"min slack {mn:.6e}")
    print(f"worst witness {wit}")
    report = VerificationReport(cfg.echo() | {"command": f"scan {args.inequality}", "n": args.n, "p": args.p, "samples": args.samples}, [res])
    return _finish(report, cfg, f"report-scan-{args.inequality}")


def cmd_opt(args) -> int:
    import numpy as np

    from .optimize import SphereSliceProblem, brute_force_max, pairsum_max, two_value_scan

    cfg = _config(args)
    p = float(Fraction(args.p))
    if p <= 2 or args.n < 2:
        raise UsageError("opt needs n >= 2 and p > 2")
    top = pairsum_max(args.n, p)
    bs = args.b if args.b else [float(x) for x in np.linspace(0, top, args.b_count + 2)[1:-1]]
    rows, ok = [], True
    print(f"{'b':>10s} {'two-value':>12s} {'brute':>12s}  family")
    for b in bs:
        prob = SphereSliceProblem(args.n, p, b)
        tv = two_value_scan(prob, args.resolution)
        bf = brute_force_max(prob, args.grid_step) if args.n <= 5 else None
        fam = "interior" if tv.interior else "boundary"
        ok &= bf is None or bf <= tv.objective + 1e-3
        rows.append({"b": b, "two-value": tv.objective, "k": tv.k, "m": tv.m, "x": tv.x, "y": tv.y, "brute": bf, "family": fam})
        print(f"{b:10.6f} {tv.objective:12.8f} {bf if bf is not None else float('nan'):12.8f}  {fam} (k={tv.k}, m={tv.m})")
    res = LemmaResult("two-value-reduction", Status.PASS if ok else Status.FAIL, p=p, witnesses={"n": args.n, "rows": rows})
    report = VerificationReport(cfg.echo() | {"command": "opt", "n": args.n, "p": args.p}, [res])
    return _finish(report, cfg, "report-opt")


def cmd_plot(args) -> int:
    from .functions import Tag

    cfg = _config(args)
    name = TAG_ALIASES.get(args.function, args.function)
    try:
        tag = Tag(name)
    except ValueError:
        raise UsageError(f"unknown function {args.function!r}") from None
    lo, hi = parse_range(args.s_range)
    if tag in (Tag.PSI, Tag.PSI_PRIME) and (lo <= 1 <= hi or lo == 0):
        raise UsageError(
            f"{tag.value} has singularities at s = 1 (and s = 0); plot the two sides separately, "
            "e.g. --s-range 0.01:0.95 and --s-range 1.05:100"
        )
    ps = [Fraction(x) for item in (args.p or ["4"]) for x in item.split(",")]
    s_vals = sample_points(lo, hi, args.points, args.log_x)
    series = {f"p={p}": sample_function(tag, p, s_vals, cfg.precision_bits) for p in ps}
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"plot-{tag.value}"
    if args.format == "csv":
        for label, rows in series.items():
            suffix = "" if len(series) == 1 else "-" + label.replace("=", "").replace("/", "_")
            path = out / f"{stem}{suffix}.csv"
            path.write_text(to_csv(rows))
            print(f"{path}: {len(rows)} rows, {sign_changes_in(rows)} certified sign changes")
    else:
        path = out / f"{stem}.svg"
        path.write_text(to_svg(series, f"{tag.value} over s in [{lo}, {hi}]", args.log_x))
        print(path)
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        rep = VerificationReport.from_json(Path(args.path).read_text())
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read report: {exc}") from None
    _print_results(rep.results)
    s = rep.summary
    print(f"{s['pass']} pass, {s['fail']} fail, {s['indeterminate']} indeterminate (version {rep.version})")
    return rep.exit_code()


COMMANDS = {
    "verify": cmd_verify,
    "counterexample": cmd_counterexample,
    "scan": cmd_scan,
    "opt": cmd_opt,
    "plot": cmd_plot,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"triangle-cert: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
