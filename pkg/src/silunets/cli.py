"""Command-line surface: build nets to JSON, verify them against named
targets, sweep parameter grids, calibrate decay rates, render canned
figures, and fit polynomial readouts.

All delimited output uses %.17g floats and fixed orderings, so repeating
a command reproduces the exact bytes.  Sweep timing columns are written
as 0 unless --timings is passed, keeping the default output reproducible.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import builders as bl
from . import figures as fg
from . import network as nw
from . import sobolev as sb
from . import stepfun as sf
from . import targets as tg
from .errors import SiluNetError, DomainError
from .reporting import fmt, write_csv

SWEEP_BUILDERS = ("square", "product", "monomial_deep", "monomial_shallow", "polynomial")


# ---------------------------------------------------------------------------
# small parsers


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as e:
        raise DomainError(f"bad number list {text!r}") from e


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as e:
        raise DomainError(f"bad integer list {text!r}") from e


def _parse_domain(text: str):
    pairs = []
    for chunk in text.split(";"):
        vals = _parse_floats(chunk)
        if len(vals) != 2:
            raise DomainError(f"domain axis {chunk!r} must be lo,hi")
        pairs.append((vals[0], vals[1]))
    return tuple(pairs)


def _parse_bands(text: str):
    bands = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        parts = chunk.split(":")
        try:
            if len(parts) == 2:
                bands.append((0, float(parts[0]), float(parts[1])))
            elif len(parts) == 3:
                bands.append((int(parts[0]), float(parts[1]), float(parts[2])))
            else:
                raise ValueError(chunk)
        except ValueError as e:
            raise DomainError(f"band {chunk!r} must be lo:hi or axis:lo:hi") from e
    return tuple(bands)


def _parse_k_range(text: str) -> range:
    if ":" in text:
        lo, hi = text.split(":", 1)
        try:
            return range(int(lo), int(hi) + 1)
        except ValueError as e:
            raise DomainError(f"bad k range {text!r}") from e
    ks = _parse_ints(text)
    if ks != list(range(ks[0], ks[-1] + 1)):
        raise DomainError("k range must be consecutive integers")
    return range(ks[0], ks[-1] + 1)


def _load_config(argv: list[str]) -> dict:
    """Pull --config JSON, mapping its keys to parser defaults; explicit
    flags still win because defaults never override parsed flags."""
    if "--config" not in argv:
        return {}
    path = argv[argv.index("--config") + 1]
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise DomainError(f"cannot read config {path}: {e}") from e
    if not isinstance(raw, dict):
        raise DomainError("config file must hold a JSON object")
    return {key.replace("-", "_"): value for key, value in raw.items()}


def _apply_config(parser: argparse.ArgumentParser, defaults: dict) -> None:
    """Install config values as defaults on the parser and every subparser.

    Subcommand parsers fill their own defaults into a fresh namespace, so
    setting defaults only on the root parser would be overwritten; pushing
    the (dest-filtered) values into each subparser keeps the precedence
    explicit flag > config value > built-in default.
    """
    known = {act.dest for act in parser._actions}
    fits = {key: val for key, val in defaults.items() if key in known}
    if fits:
        parser.set_defaults(**fits)
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for sub in action.choices.values():
                _apply_config(sub, defaults)


# ---------------------------------------------------------------------------
# build


def _write_net(net, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(nw.serialize(net))


def _print_summary(net) -> None:
    s = nw.summary(net)
    print(
        f"summary: depth={s.depth} max_width={s.max_width} "
        f"params={s.param_count} nonzero={s.nonzero_param_count} "
        f"max_abs_weight={fmt(s.max_abs_weight)}"
    )


def cmd_build(args) -> int:
    builder = args.builder
    if builder == "square":
        net = bl.build_square(bl.SquareParams(a=args.a, beta=args.beta, k=args.k))
    elif builder == "product":
        net = bl.build_product(args.a, args.beta, args.k)
    elif builder == "monomial-deep":
        net = bl.build_monomial_deep(
            bl.MonomialParams(m=args.m, a=args.a, beta=args.beta, k=args.k)
        )
    elif builder == "monomial-shallow":
        a = bl.default_shift_for(args.m) if args.a is None else args.a
        net = bl.build_monomial_shallow(
            bl.MonomialParams(m=args.m, a=a, beta=args.beta, k=args.k)
        )
    elif builder == "polynomial":
        net = bl.build_polynomial(
            _parse_floats(args.coeffs), a=args.a, beta=args.beta, k=args.k,
            variant=args.variant,
        )
    elif builder == "bump":
        if (args.kappa is None) != (args.tau is None):
            raise DomainError("pass both --kappa and --tau or neither")
        if args.kappa is None:
            kappa, tau = sf.choose_kappa_tau(args.delta, args.hi - args.lo)
        else:
            kappa, tau = args.kappa, args.tau
        net = sf.build_bump(sf.BumpParams(args.lo, args.hi, tau, kappa))
        print(f"bump: kappa={fmt(kappa)} tau={fmt(tau)}")
    elif builder == "step":
        spec = _load_step_spec(args.spec)
        net = sf.build_step_approx(spec, args.delta)
        info = sf.step_build_info(spec, args.delta)
        print(
            f"step: kappa={fmt(info.kappa)} tau={fmt(info.tau)} "
            f"bumps={info.n_bumps} "
            f"structural_params={info.structural_param_count} "
            f"serialized_nonzero={nw.summary(net).nonzero_param_count}"
        )
    elif builder == "continuous":
        target = tg.parse_target(args.target)
        interval = _parse_domain(args.interval)[0]
        modulus = _parse_modulus(args.modulus, target, interval)
        net = sf.build_continuous_approx(target.point, interval, modulus, args.eps)
        info = sf.continuous_build_info(target.point, interval, modulus, args.eps)
        print(
            f"continuous: cells={info.n_cells} cell_width={fmt(info.cell_width)} "
            f"kappa={fmt(info.kappa)} tau={fmt(info.tau)}"
        )
    elif builder == "continuous-poly":
        target = tg.parse_target(args.target)
        net = sf.build_continuous_via_poly(
            target.point, args.B, args.eps, a=args.a, beta=args.beta
        )
    elif builder == "sobolev":
        net = _build_sobolev(args)
    else:
        raise DomainError(f"unknown builder {builder!r}")
    _write_net(net, args.out)
    _print_summary(net)
    return 0


def _load_step_spec(path: str) -> sf.StepSpec:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise DomainError(f"cannot read step spec {path}: {e}") from e
    try:
        return sf.StepSpec(tuple(doc["breakpoints"]), tuple(doc["values"]))
    except (KeyError, TypeError) as e:
        raise DomainError(f"step spec must hold breakpoints and values: {e}") from e


def _parse_modulus(spec: str, target: tg.Target, interval) -> sf.ModulusSpec:
    spec = spec.strip()
    if spec.startswith("lipschitz:"):
        return sf.ModulusSpec.lipschitz(float(spec.split(":", 1)[1]))
    if spec.startswith("hoelder:"):
        c, alpha = _parse_floats(spec.split(":", 1)[1])
        return sf.ModulusSpec.hoelder(c, alpha)
    if spec == "sampled":
        # deterministic: 2001 uniform samples across the interval
        xs = np.linspace(interval[0], interval[1], 2001)
        ys = target.batch(xs.reshape(-1, 1))
        return sf.ModulusSpec.sampled(xs, ys)
    raise DomainError(
        f"unknown modulus {spec!r}; use lipschitz:L, hoelder:C,alpha, or sampled"
    )


def _build_sobolev(args):
    if args.taylor:
        td = _read_taylor(args.taylor)
        if td.grid.d != args.d or td.n != args.n:
            raise DomainError("Taylor data shape disagrees with --d/--n")
    else:
        target = tg.parse_target(args.target)
        if target.input_dim != args.d:
            raise DomainError(
                f"target {target.name} is {target.input_dim}-dimensional, "
                f"but --d {args.d} was requested"
            )
        M = sb.choose_M(args.eps, args.d, args.n, args.B)
        grid = sb.CubeGrid(args.d, M, args.B)
        td = sb.derivative_data_from_callback(target.point, grid, args.n)
    if args.taylor_out:
        with open(args.taylor_out, "w", newline="") as fh:
            fh.write(td.to_json())
    net, report = sb.build_sobolev_net(td, args.eps)
    print(
        f"sobolev: M={report.M} cube_count={report.cube_count} k={report.k} "
        f"eta={fmt(report.eta)} size={report.net_size} depth={report.net_depth} "
        f"local_bound={fmt(report.predicted_local_bound)}"
    )
    return net


def _read_taylor(path: str) -> sb.TaylorData:
    try:
        with open(path) as fh:
            return sb.TaylorData.from_json(fh.read())
    except OSError as e:
        raise DomainError(f"cannot read Taylor data {path}: {e}") from e


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    try:
        with open(args.net) as fh:
            net = nw.deserialize(fh.read())
    except OSError as e:
        raise DomainError(f"cannot read net file {args.net}: {e}") from e
    target = tg.parse_target(args.target)
    domain = _parse_domain(args.domain)
    if len(domain) != net.input_dim:
        raise DomainError(
            f"domain has {len(domain)} axes but the net wants {net.input_dim}"
        )
    bands = _parse_bands(args.bands) if args.bands else ()
    report = nw.sup_error(
        net, target.batch, domain,
        grid_per_dim=args.grid, excluded_bands=bands, refine_levels=args.refine,
    )
    fields = report.csv_fields()
    print(
        f"sup_error={fields['sup_error']} argmax={fields['argmax']} "
        f"n_evaluated={fields['n_evaluated']}"
    )
    if args.out:
        comments = [
            "command: verify",
            f"net: {args.net}",
            f"target: {target.name}",
        ]
        write_csv(args.out, list(fields), [list(fields.values())], comments)
    return 0


# ---------------------------------------------------------------------------
# sweep


def _sweep_cell_builder(args):
    """Return (make_net, target, domain) for the sweep's builder choice."""
    B = args.B
    builder = args.builder
    if builder == "square":
        return (
            lambda a, beta, k: bl.build_square(bl.SquareParams(a=a, beta=beta, k=k, B=B)),
            tg.monomial_target(2), ((-B, B),),
        )
    if builder == "product":
        return (
            lambda a, beta, k: bl.build_product(a, beta, k),
            tg.product_target(), ((-B, B), (-B, B)),
        )
    if builder in ("monomial_deep", "monomial_shallow"):
        if args.m is None:
            raise DomainError(f"sweep over {builder} needs --m")
        make = bl.build_monomial_deep if builder == "monomial_deep" else bl.build_monomial_shallow
        return (
            lambda a, beta, k: make(bl.MonomialParams(m=args.m, a=a, beta=beta, k=k, B=B)),
            tg.monomial_target(args.m), ((-B, B),),
        )
    if builder == "polynomial":
        if not args.coeffs:
            raise DomainError("sweep over polynomial needs --coeffs")
        coeffs = _parse_floats(args.coeffs)
        return (
            lambda a, beta, k: bl.build_polynomial(coeffs, a=a, beta=beta, k=k),
            tg.poly_target(coeffs), ((-B, B),),
        )
    raise DomainError(f"unknown sweep builder {builder!r}")


def cmd_sweep(args) -> int:
    a_grid = _parse_floats(args.a_grid)
    beta_grid = _parse_floats(args.beta_grid)
    k_grid = _parse_ints(args.k_grid)
    if not (a_grid and beta_grid and k_grid):
        raise DomainError("sweep grids must be nonempty")
    make_net, target, domain = _sweep_cell_builder(args)
    cells = [(a, beta, k) for a in a_grid for beta in beta_grid for k in k_grid]

    def run_cell(cell):
        a, beta, k = cell
        start = time.perf_counter()
        try:
            net = make_net(a, beta, k)
            rep = nw.sup_error(net, target.batch, domain, grid_per_dim=args.grid)
            err, argmax, note = rep.sup_error, rep.argmax, ""
        except SiluNetError as e:
            err, argmax, note = math.nan, (), f"{type(e).__name__}: {e}"
        ms = (time.perf_counter() - start) * 1000.0 if args.timings else 0.0
        return [args.builder, a, beta, float(k), err,
                ";".join(f"{v:.17g}" for v in argmax), ms, note]

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(run_cell, cells))
    else:
        rows = [run_cell(c) for c in cells]

    header = ["builder", "a", "beta", "k", "sup_error", "argmax", "runtime_ms", "note"]
    comments = [
        "command: sweep",
        f"builder: {args.builder}  B: {fmt(args.B)}",
        f"a_grid: {args.a_grid}  beta_grid: {args.beta_grid}  k_grid: {args.k_grid}",
    ]
    write_csv(args.out, header, rows, comments)
    finite = [r[4] for r in rows if not math.isnan(r[4])]
    print(
        f"sweep: {len(rows)} cells, best sup_error="
        f"{fmt(min(finite)) if finite else 'nan'}"
    )
    if args.svg:
        _sweep_plot(args, a_grid, beta_grid, k_grid, rows)
    return 0


def _sweep_plot(args, a_grid, beta_grid, k_grid, rows) -> None:
    from . import plotting

    errs = np.array([r[4] for r in rows], dtype=float).reshape(
        len(a_grid), len(beta_grid), len(k_grid)
    )
    log_errs = np.log10(np.maximum(np.nan_to_num(errs, nan=np.inf), 1e-18))
    axes = [("a", a_grid), ("beta", beta_grid), ("k", k_grid)]
    long = [i for i, (_, g) in enumerate(axes) if len(g) > 1]
    if len(long) == 1:
        name, grid = axes[long[0]]
        ys = np.moveaxis(log_errs, long[0], 0).reshape(len(grid), -1)[:, 0]
        plotting.save_line_plot(
            args.svg, grid, [("log10 sup error", ys)],
            xlabel=name, ylabel="log10 sup error",
            title=f"{args.builder} sweep over {name}",
        )
    elif len(long) == 2:
        (yname, ygrid), (xname, xgrid) = axes[long[0]], axes[long[1]]
        flat = np.moveaxis(
            log_errs, (long[0], long[1]), (0, 1)
        ).reshape(len(ygrid), len(xgrid), -1)[:, :, 0]
        plotting.save_heatmap(
            args.svg, xgrid, ygrid, flat,
            xlabel=xname, ylabel=yname,
            title=f"{args.builder} sweep",
            colorbar_label="log10 sup error",
        )
    else:
        print("svg skipped: need at least one grid with more than one value")


# ---------------------------------------------------------------------------
# calibrate


def cmd_calibrate(args) -> int:
    temp = argparse.Namespace(
        builder=args.builder, B=args.B, m=args.m, coeffs=args.coeffs
    )
    make_net, target, domain = _sweep_cell_builder(temp)
    ks = _parse_k_range(args.k_range)
    omega_hint = args.omega_hint
    if args.rate_exponent is None and omega_hint is None:
        omega_hint = 1.0 / args.beta
    fit = bl.calibrate_rate(
        lambda k: make_net(args.a, args.beta, k),
        target.batch, domain, ks,
        rate_exponent=args.rate_exponent, omega_hint=omega_hint,
        grid_per_dim=args.grid,
    )
    print(
        f"c_est={fmt(fit.c_est)} omega_est={fmt(fit.omega_est)} "
        f"rate_exponent={fit.rate_exponent} residual={fmt(fit.residual)} "
        f"truncated={str(fit.truncated).lower()} n_used={fit.n_used}"
    )
    if args.out:
        header = ["builder", "a", "beta", "c_est", "omega_est", "rate_exponent",
                  "residual", "truncated", "n_used"]
        row = [args.builder, args.a, args.beta, fit.c_est, fit.omega_est,
               fit.rate_exponent, fit.truncated, fit.n_used]
        write_csv(args.out, header, [row], ["command: calibrate"])
    if args.builder == "square":
        scale = fit.omega_est * args.beta
        if not (1.0 / 1.25 <= scale <= 1.25):
            print(
                f"error: square fit omega_est={fit.omega_est:.6g} is not within "
                f"a factor 1.25 of 1/beta={1.0 / args.beta:.6g}",
                file=sys.stderr,
            )
            return 1
    return 0


# ---------------------------------------------------------------------------
# figures and fit-poly


def cmd_figures(args) -> int:
    paths = fg.render_figure(args.id, args.outdir)
    for p in paths:
        print(p)
    return 0


def cmd_fit_poly(args) -> int:
    try:
        data = np.loadtxt(args.samples, delimiter=",", comments="#", ndmin=2)
    except (OSError, ValueError) as e:
        raise DomainError(f"cannot read samples {args.samples}: {e}") from e
    if data.shape[1] != 2:
        raise DomainError("sample file must have two columns: x, value")
    if args.degree < 0:
        raise DomainError("degree must be nonnegative")
    basis = []
    for m in range(args.degree + 1):
        if m == 0:
            basis.append(nw.constant_net(1.0, input_dim=1))
        elif m == 1:
            basis.append(nw.identity_net(1))
        else:
            basis.append(
                bl.build_monomial_deep(
                    bl.MonomialParams(m=m, a=args.a, beta=args.beta, k=args.k)
                )
            )
    coeffs = bl.fit_poly_coeffs(data[:, 0], data[:, 1], basis)
    print("coefficients: " + ",".join(fmt(float(c)) for c in coeffs))
    if args.out:
        write_csv(
            args.out, ["degree", "coefficient"],
            [[m, float(c)] for m, c in enumerate(coeffs)],
            ["command: fit-poly", f"samples: {args.samples}"],
        )
    return 0


# ---------------------------------------------------------------------------
# parser assembly


def _add_config(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file whose keys mirror flags; flags win")


def _add_scale_flags(p, *, k_default=3, a_default: float | None = 0.0) -> None:
    p.add_argument("--a", type=float, default=a_default, help="activation shift")
    p.add_argument("--beta", type=float, default=bl.DEFAULT_BETA, help="scale base in (0,1)")
    p.add_argument("--k", type=int, default=k_default, help="scale depth")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="silunets",
        description="Closed-form SiLU network constructions and verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="construct a net and write it as JSON")
    bsub = build.add_subparsers(dest="builder", required=True)
    for name in ("square", "product"):
        p = bsub.add_parser(name)
        _add_scale_flags(p)
        p.add_argument("-o", "--out", help="path for the network JSON")
        _add_config(p)
    for name in ("monomial-deep", "monomial-shallow"):
        p = bsub.add_parser(name)
        p.add_argument("--m", type=int, required=True, help="power")
        _add_scale_flags(p, a_default=(0.0 if name == "monomial-deep" else None))
        p.add_argument("-o", "--out")
        _add_config(p)
    p = bsub.add_parser("polynomial")
    p.add_argument("--coeffs", required=True, help="c0,c1,... ascending")
    p.add_argument("--variant", choices=("deep", "shallow"), default="deep")
    _add_scale_flags(p)
    p.add_argument("-o", "--out")
    _add_config(p)
    p = bsub.add_parser("bump")
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.01, help="plateau error budget")
    p.add_argument("--kappa", type=float, help="explicit sharpness (with --tau)")
    p.add_argument("--tau", type=float, help="explicit transition width (with --kappa)")
    p.add_argument("-o", "--out")
    _add_config(p)
    p = bsub.add_parser("step")
    p.add_argument("--spec", required=True, help="JSON with breakpoints and values")
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("-o", "--out")
    _add_config(p)
    p = bsub.add_parser("continuous")
    p.add_argument("--target", required=True)
    p.add_argument("--interval", required=True, help="lo,hi")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--modulus", required=True,
                   help="lipschitz:L, hoelder:C,alpha, or sampled")
    p.add_argument("-o", "--out")
    _add_config(p)
    p = bsub.add_parser("continuous-poly")
    p.add_argument("--target", required=True)
    p.add_argument("--B", type=float, required=True, help="domain half-width")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=bl.DEFAULT_BETA)
    p.add_argument("-o", "--out")
    _add_config(p)
    p = bsub.add_parser("sobolev")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--target", help="named target to differentiate")
    p.add_argument("--B", type=float, default=1.0)
    p.add_argument("--taylor", help="read Taylor data JSON instead of a target")
    p.add_argument("--taylor-out", help="write the generated Taylor data JSON")
    p.add_argument("-o", "--out")
    _add_config(p)

    v = sub.add_parser("verify", help="measure a serialized net against a target")
    v.add_argument("--net", required=True)
    v.add_argument("--target", required=True)
    v.add_argument("--domain", required=True, help="lo,hi per axis, ; separated")
    v.add_argument("--bands", help="excluded bands lo:hi or axis:lo:hi, ; separated")
    v.add_argument("--grid", type=int, help="grid points per axis")
    v.add_argument("--refine", type=int, default=3)
    v.add_argument("-o", "--out", help="CSV path for the report")
    _add_config(v)

    s = sub.add_parser("sweep", help="grid of builds, one error row per cell")
    s.add_argument("--builder", choices=SWEEP_BUILDERS, required=True)
    s.add_argument("--a-grid", required=True)
    s.add_argument("--beta-grid", required=True)
    s.add_argument("--k-grid", required=True)
    s.add_argument("--B", type=float, default=1.0)
    s.add_argument("--m", type=int, help="power for monomial builders")
    s.add_argument("--coeffs", help="coefficients for the polynomial builder")
    s.add_argument("--grid", type=int)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--timings", action="store_true",
                   help="record real cell runtimes (breaks byte reproducibility)")
    s.add_argument("--svg", help="optional plot path")
    s.add_argument("-o", "--out", required=True)
    _add_config(s)

    c = sub.add_parser("calibrate", help="fit the error decay rate over k")
    c.add_argument("--builder", choices=SWEEP_BUILDERS, required=True)
    c.add_argument("--k-range", required=True, help="lo:hi inclusive")
    c.add_argument("--a", type=float, default=0.0)
    c.add_argument("--beta", type=float, default=bl.DEFAULT_BETA)
    c.add_argument("--B", type=float, default=1.0)
    c.add_argument("--m", type=int)
    c.add_argument("--coeffs")
    c.add_argument("--rate-exponent", type=int, choices=(1, 2))
    c.add_argument("--omega-hint", type=float)
    c.add_argument("--grid", type=int)
    c.add_argument("-o", "--out")
    _add_config(c)

    f = sub.add_parser("figures", help="render a canned experiment to CSV + SVG")
    f.add_argument("--id", type=int, required=True)
    f.add_argument("--outdir", default="figures")
    _add_config(f)

    fp = sub.add_parser("fit-poly", help="least-squares polynomial readout over sampled data")
    fp.add_argument("--samples", required=True, help="two-column CSV: x, value")
    fp.add_argument("--degree", type=int, required=True)
    _add_scale_flags(fp)
    fp.add_argument("-o", "--out")
    _add_config(fp)

    return parser


_HANDLERS = {
    "build": cmd_build,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "calibrate": cmd_calibrate,
    "figures": cmd_figures,
    "fit-poly": cmd_fit_poly,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        defaults = _load_config(argv)
        if defaults:
            _apply_config(parser, defaults)
        args = parser.parse_args(argv)
        return _HANDLERS[args.command](args)
    except SiluNetError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
