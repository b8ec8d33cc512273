"""Canned experiment renderers: each supported id writes one CSV (the
ground truth) and one SVG beside it.

Ids 1, 2, 4, 17 and 18 are declined: two are architecture schematics
with no data to generate, and three compare trained networks, which this
library deliberately does not do (all weights here are closed-form).
"""
from __future__ import annotations

import math
import os

import numpy as np

from . import builders as bl
from . import network as nw
from . import plotting
from . import sobolev as sb
from . import stepfun as sf
from .errors import DomainError, InfeasibleError
from .reporting import write_csv

REFUSALS = {
    1: "figure 1 compares trained ReLU and SiLU fits; training is out of scope here",
    2: "figure 2 is an architecture schematic; there is no data to generate",
    4: "figure 4 is an architecture schematic; there is no data to generate",
    17: "figure 17 studies backpropagation from analytic initialization; training is out of scope here",
    18: "figure 18 studies backpropagation on the product net; training is out of scope here",
}


def _paths(outdir: str, fig_id: int) -> tuple[str, str]:
    os.makedirs(outdir, exist_ok=True)
    base = os.path.join(outdir, f"fig{fig_id}")
    return base + ".csv", base + ".svg"


def fig3(outdir: str) -> list[str]:
    """Square nets at increasing scale depth against the parabola."""
    csv_path, svg_path = _paths(outdir, 3)
    xs = np.linspace(-1.0, 1.0, 1001)
    pts = xs.reshape(-1, 1)
    ks = (1, 2, 3, 4, 5)
    curves = {
        k: nw.evaluate(bl.build_square(bl.SquareParams(a=0.0, beta=0.27, k=k)), pts)[:, 0]
        for k in ks
    }
    header = ["x", "target"] + [f"k{k}" for k in ks]
    rows = [
        [xs[i], xs[i] ** 2] + [curves[k][i] for k in ks] for i in range(xs.size)
    ]
    write_csv(csv_path, header, rows, ["square approximants, a=0 beta=0.27, k=1..5"])
    plotting.save_line_plot(
        svg_path, xs,
        [("x^2", xs**2)] + [(f"k={k}", curves[k]) for k in ks],
        xlabel="x", ylabel="value", title="square approximants, a=0, beta=0.27",
        dashed_first=True,
    )
    return [csv_path, svg_path]


def fig5(outdir: str) -> list[str]:
    """Product net composed with cos(x) and sin(x)log(x^2).

    The second factor blows up logarithmically at x = 0, so a small
    neighborhood of the origin is excluded from the sample grid.
    """
    csv_path, svg_path = _paths(outdir, 5)
    half = np.linspace(0.05, 4.0, 500)
    xs = np.concatenate([-half[::-1], half])
    u = np.cos(xs)
    v = np.sin(xs) * np.log(xs**2)
    pairs = np.column_stack([u, v])
    ks = (1, 2, 3)
    curves = {
        k: nw.evaluate(bl.build_product(0.0, 0.27, k), pairs)[:, 0] for k in ks
    }
    header = ["x", "u", "v", "product"] + [f"k{k}" for k in ks]
    rows = [
        [xs[i], u[i], v[i], u[i] * v[i]] + [curves[k][i] for k in ks]
        for i in range(xs.size)
    ]
    write_csv(
        csv_path, header, rows,
        ["product net on (cos(x), sin(x)log(x^2)), a=0 beta=0.27",
         "x in [-4,4] minus (-0.05, 0.05) to dodge the log singularity"],
    )
    plotting.save_line_plot(
        svg_path, xs,
        [("cos(x)sin(x)log(x^2)", u * v)] + [(f"k={k}", curves[k]) for k in ks],
        xlabel="x", ylabel="value",
        title="product net on cos(x) and sin(x)log(x^2)", dashed_first=True,
    )
    return [csv_path, svg_path]


def fig6(outdir: str) -> list[str]:
    """Deep seventh-power nets at increasing scale depth."""
    csv_path, svg_path = _paths(outdir, 6)
    xs = np.linspace(-1.0, 1.0, 1001)
    pts = xs.reshape(-1, 1)
    ks = (1, 2, 3, 4, 5)
    curves = {
        k: nw.evaluate(
            bl.build_monomial_deep(bl.MonomialParams(m=7, a=0.0, beta=0.27, k=k)), pts
        )[:, 0]
        for k in ks
    }
    header = ["x", "target"] + [f"k{k}" for k in ks]
    rows = [[xs[i], xs[i] ** 7] + [curves[k][i] for k in ks] for i in range(xs.size)]
    write_csv(csv_path, header, rows, ["deep x^7 approximants, a=0 beta=0.27"])
    plotting.save_line_plot(
        svg_path, xs,
        [("x^7", xs**7)] + [(f"k={k}", curves[k]) for k in ks],
        xlabel="x", ylabel="value", title="deep x^7 approximants, a=0, beta=0.27",
        dashed_first=True,
    )
    return [csv_path, svg_path]


def fig7(outdir: str) -> list[str]:
    """Recurrent view of the power chain: intermediate outputs y_0..y_7."""
    csv_path, svg_path = _paths(outdir, 7)
    xs = np.linspace(-1.0, 1.0, 1001)
    ys = bl.run_rnn_monomials(7, 0.0, 0.27, 3, xs)
    header = ["x"] + [f"y{i}" for i in range(8)]
    rows = [[xs[j]] + [ys[i][j] for i in range(8)] for j in range(xs.size)]
    write_csv(csv_path, header, rows, ["recurrent power chain, k=3 a=0 beta=0.27"])
    plotting.save_line_plot(
        svg_path, xs, [(f"y{i}", ys[i]) for i in range(8)],
        xlabel="x", ylabel="value",
        title="recurrent power chain intermediates, k=3",
    )
    return [csv_path, svg_path]


def fig8(outdir: str) -> list[str]:
    """Monomial-combination net for x^2 + x + 1."""
    csv_path, svg_path = _paths(outdir, 8)
    xs = np.linspace(-1.0, 1.0, 1001)
    pts = xs.reshape(-1, 1)
    ks = (1, 2, 3)
    curves = {
        k: nw.evaluate(bl.build_polynomial([1.0, 1.0, 1.0], k=k), pts)[:, 0]
        for k in ks
    }
    target = xs**2 + xs + 1.0
    header = ["x", "target"] + [f"k{k}" for k in ks]
    rows = [[xs[i], target[i]] + [curves[k][i] for k in ks] for i in range(xs.size)]
    write_csv(csv_path, header, rows, ["x^2+x+1 approximants, a=0 beta=0.27"])
    plotting.save_line_plot(
        svg_path, xs,
        [("x^2+x+1", target)] + [(f"k={k}", curves[k]) for k in ks],
        xlabel="x", ylabel="value", title="x^2+x+1 approximants", dashed_first=True,
    )
    return [csv_path, svg_path]


def fig9(outdir: str) -> list[str]:
    """Smoothed indicator of [1, 4] as a difference of two ramps."""
    csv_path, svg_path = _paths(outdir, 9)
    kappa, tau = sf.choose_kappa_tau(0.01, 3.0)
    net = sf.build_bump(sf.BumpParams(1.0, 4.0, tau, kappa))
    xs = np.linspace(-1.0, 6.0, 1401)
    vals = nw.evaluate(net, xs.reshape(-1, 1))[:, 0]
    ind = ((xs >= 1.0) & (xs < 4.0)).astype(float)
    write_csv(
        _paths(outdir, 9)[0], ["x", "indicator", "bump"],
        [[xs[i], ind[i], vals[i]] for i in range(xs.size)],
        [f"bump on [1,4], kappa={kappa:.6g} tau={tau:.6g} (delta=0.01 schedule)"],
    )
    plotting.save_line_plot(
        svg_path, xs, [("indicator [1,4)", ind), ("bump net", vals)],
        xlabel="x", ylabel="value", title="smoothed indicator of [1, 4]",
        dashed_first=True,
    )
    return [csv_path, svg_path]


def _square_error(a: float, beta: float, k: int) -> float:
    try:
        net = bl.build_square(bl.SquareParams(a=a, beta=beta, k=k))
    except (DomainError, InfeasibleError):
        return math.nan
    return nw.sup_error(net, lambda p: p[:, 0] ** 2, (-1.0, 1.0), grid_per_dim=2001).sup_error


def _heatmap_figure(
    outdir: str, fig_id: int, row_vals, col_vals, row_name, col_name, cell
) -> list[str]:
    csv_path, svg_path = _paths(outdir, fig_id)
    errs = np.array([[cell(r, c) for c in col_vals] for r in row_vals])
    rows = [
        [r, c, errs[i, j]]
        for i, r in enumerate(row_vals)
        for j, c in enumerate(col_vals)
    ]
    write_csv(
        csv_path, [row_name, col_name, "sup_error"], rows,
        [f"square-net sup error on [-1,1] over ({row_name}, {col_name})"],
    )
    with np.errstate(divide="ignore"):
        log_errs = np.log10(np.maximum(errs, 1e-18))
    plotting.save_heatmap(
        svg_path, col_vals, row_vals, log_errs,
        xlabel=col_name, ylabel=row_name,
        title=f"log10 square-net error over ({row_name}, {col_name})",
        colorbar_label="log10 sup error",
    )
    return [csv_path, svg_path]


def fig10(outdir: str) -> list[str]:
    betas = [0.01] + [round(0.05 * i, 2) for i in range(1, 11)]
    ks = list(range(1, 7))
    return _heatmap_figure(
        outdir, 10, betas, ks, "beta", "k",
        lambda beta, k: _square_error(0.0, beta, k),
    )


def fig11(outdir: str) -> list[str]:
    betas = [0.01] + [round(0.05 * i, 2) for i in range(1, 11)]
    shifts = [round(0.25 * i, 2) for i in range(9)]
    return _heatmap_figure(
        outdir, 11, betas, shifts, "beta", "a",
        lambda beta, a: _square_error(a, beta, 3),
    )


def fig12(outdir: str) -> list[str]:
    ks = list(range(1, 7))
    shifts = [round(0.25 * i, 2) for i in range(9)]
    return _heatmap_figure(
        outdir, 12, ks, shifts, "k", "a",
        lambda k, a: _square_error(a, 0.27, k),
    )


def fig13(outdir: str) -> list[str]:
    """log(7+x)cos(x^3): staircase route succeeds, polynomial route is
    declined by the degree budget; the diagnostic lands in the CSV."""
    csv_path, svg_path = _paths(outdir, 13)
    f = lambda x: np.log(7.0 + x) * np.cos(x**3)
    sample_xs = np.linspace(-2.0, 2.0, 2001)
    modulus = sf.ModulusSpec.sampled(sample_xs, f(sample_xs))
    eps = 0.1
    stair = sf.build_continuous_approx(lambda x: float(f(x)), (-2.0, 2.0), modulus, eps)
    xs = np.linspace(-2.0, 2.0, 1001)
    stair_vals = nw.evaluate(stair, xs.reshape(-1, 1))[:, 0]
    try:
        sf.build_continuous_via_poly(lambda x: float(f(x)), 2.0, eps)
        poly_note = "polynomial route unexpectedly succeeded"
    except InfeasibleError as e:
        poly_note = f"polynomial route declined: {e}"
    write_csv(
        csv_path, ["x", "target", "staircase"],
        [[xs[i], f(xs[i]), stair_vals[i]] for i in range(xs.size)],
        [f"log(7+x)cos(x^3) on [-2,2], staircase route at eps={eps}", poly_note],
    )
    plotting.save_line_plot(
        svg_path, xs,
        [("log(7+x)cos(x^3)", f(xs)), ("staircase net", stair_vals)],
        xlabel="x", ylabel="value",
        title="oscillatory target: staircase route (polynomial route declined)",
        dashed_first=True,
    )
    return [csv_path, svg_path]


def fig14(outdir: str) -> list[str]:
    """Sigmoid via both routes on [-3, 3]."""
    csv_path, svg_path = _paths(outdir, 14)
    from .scalar import sigmoid

    vec = sf.as_grid_fn(sigmoid)
    stair = sf.build_continuous_approx(
        sigmoid, (-3.0, 3.0), sf.ModulusSpec.lipschitz(0.25), 0.05
    )
    poly = sf.build_continuous_via_poly(sigmoid, 3.0, 0.01)
    xs = np.linspace(-3.0, 3.0, 1001)
    pts = xs.reshape(-1, 1)
    target = vec(pts)
    stair_vals = nw.evaluate(stair, pts)[:, 0]
    poly_vals = nw.evaluate(poly, pts)[:, 0]
    write_csv(
        csv_path, ["x", "target", "staircase", "polynomial_net"],
        [[xs[i], target[i], stair_vals[i], poly_vals[i]] for i in range(xs.size)],
        ["sigmoid on [-3,3]: staircase route at eps=0.05, polynomial route at eps=0.01"],
    )
    plotting.save_line_plot(
        svg_path, xs,
        [("sigmoid", target), ("staircase net", stair_vals),
         ("polynomial net", poly_vals)],
        xlabel="x", ylabel="value", title="sigmoid via both routes",
        dashed_first=True,
    )
    return [csv_path, svg_path]


def fig15(outdir: str) -> list[str]:
    """Three-channel curve (x, sin x, cos x), each channel a polynomial-route net."""
    csv_path, svg_path = _paths(outdir, 15)
    eps, B = 0.01, 3.0
    nets = {
        "x": sf.build_continuous_via_poly(lambda x: x, B, eps),
        "sin": sf.build_continuous_via_poly(math.sin, B, eps),
        "cos": sf.build_continuous_via_poly(math.cos, B, eps),
    }
    xs = np.linspace(-B, B, 1001)
    pts = xs.reshape(-1, 1)
    vals = {name: nw.evaluate(net, pts)[:, 0] for name, net in nets.items()}
    header = ["x", "x_net", "sin_target", "sin_net", "cos_target", "cos_net"]
    rows = [
        [xs[i], vals["x"][i], math.sin(xs[i]), vals["sin"][i],
         math.cos(xs[i]), vals["cos"][i]]
        for i in range(xs.size)
    ]
    write_csv(csv_path, header, rows,
              [f"curve (x, sin x, cos x) via the polynomial route, eps={eps}"])
    plotting.save_line_plot(
        svg_path, xs,
        [("sin x", np.sin(xs)), ("cos x", np.cos(xs)),
         ("net: x", vals["x"]), ("net: sin", vals["sin"]), ("net: cos", vals["cos"])],
        xlabel="x", ylabel="value", title="(x, sin x, cos x) via polynomial route",
    )
    return [csv_path, svg_path]


def fig16(outdir: str) -> list[str]:
    """Two-variable piecewise-Taylor net on sin(pi x)cos(pi x)/(2 pi)."""
    csv_path, svg_path = _paths(outdir, 16)
    from .targets import sincos2d_target

    target = sincos2d_target()
    eps, d, n = 0.3, 2, 2
    grid = sb.CubeGrid(d, sb.choose_M(eps, d, n))
    td = sb.derivative_data_from_callback(target.point, grid, n)
    net, report = sb.build_sobolev_net(td, eps)
    axis = np.linspace(-1.0, 1.0, 61)
    gx, gy = np.meshgrid(axis, axis, indexing="ij")
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    want = target.batch(pts)
    got = nw.evaluate(net, pts)[:, 0]
    rows = [
        [pts[i, 0], pts[i, 1], want[i], got[i]] for i in range(pts.shape[0])
    ]
    write_csv(
        csv_path, ["x", "y", "target", "net"], rows,
        [f"piecewise-Taylor net, d={d} n={n} eps={eps} M={report.M} "
         f"k={report.k} size={report.net_size}"],
    )
    plotting.save_surface_pair(
        svg_path, gx, gy, want.reshape(gx.shape), got.reshape(gx.shape),
        left_title="target", right_title="net",
        title="two-variable piecewise-Taylor net",
    )
    return [csv_path, svg_path]


GENERATORS = {
    3: fig3, 5: fig5, 6: fig6, 7: fig7, 8: fig8, 9: fig9,
    10: fig10, 11: fig11, 12: fig12, 13: fig13, 14: fig14,
    15: fig15, 16: fig16,
}


def render_figure(fig_id: int, outdir: str) -> list[str]:
    """Write the CSV + SVG pair for one figure id; raises DomainError for
    declined or unknown ids."""
    if fig_id in REFUSALS:
        raise DomainError(REFUSALS[fig_id])
    if fig_id not in GENERATORS:
        raise DomainError(
            f"unknown figure id {fig_id}; supported: {sorted(GENERATORS)}"
        )
    return GENERATORS[fig_id](outdir)
