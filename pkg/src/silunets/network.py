"""Feedforward SiLU networks as explicit weight matrices.

Nets are immutable stacks of dense (or, for very wide parallel stacks,
CSR-sparse) affine layers, each followed by SiLU or identity.  Besides
evaluation the module provides the two structural operations every
closed-form construction here is assembled from:

* ``compose``     -- feed one net's outputs (and, optionally, raw inputs)
                     into another.  Raw inputs ride past SiLU hidden
                     layers on +/- neuron pairs, which is exact because
                     silu(v) - silu(-v) = v identically.
* ``stack_parallel`` / ``affine_combination`` -- run nets side by side on
                     the same input; shallower nets are depth-padded with
                     the same +/- pairs.

``sup_error`` measures the sup-norm gap against a target on a tensor
grid with three x10 local refinement passes, optionally skipping
excluded bands (used for transition bands of step-like nets).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import (
    CapacityError,
    DomainError,
    OverflowGuardError,
    ParseError,
    WiringError,
)

SILU = "silu"
IDENTITY = "identity"
_ACTIVATIONS = (SILU, IDENTITY)

OVERFLOW_GUARD = 1e300
DENSE_LIMIT = 4_000_000  # entries; block matrices above this go CSR
SERIALIZE_LIMIT = 25_000_000

SCHEMA_VERSION = "silunets-net/1"


def silu_array(z: np.ndarray) -> np.ndarray:
    """Vectorized, overflow-safe x * sigmoid(x)."""
    z = np.asarray(z, dtype=float)
    ez = np.exp(-np.abs(z))
    sig = np.where(z >= 0, 1.0 / (1.0 + ez), ez / (1.0 + ez))
    return z * sig


def _is_sparse(m) -> bool:
    return sp.issparse(m)


def _to_dense(m) -> np.ndarray:
    return m.toarray() if _is_sparse(m) else np.asarray(m, dtype=float)


def _matmul(a, b):
    """Matrix product tolerant of dense/CSR mixes; densifies small results."""
    if _is_sparse(a) or _is_sparse(b):
        res = sp.csr_matrix(a) @ sp.csr_matrix(b)
        if res.shape[0] * res.shape[1] <= DENSE_LIMIT:
            return res.toarray()
        return res.tocsr()
    return np.asarray(a) @ np.asarray(b)


def _matvec(a, v: np.ndarray) -> np.ndarray:
    if _is_sparse(a):
        return np.asarray(a @ v).reshape(-1)
    return np.asarray(a) @ v


class DenseLayer:
    """One affine layer plus activation.  weights is (rows, cols)."""

    __slots__ = ("weights", "bias", "activation")

    def __init__(self, weights, bias, activation: str):
        if activation not in _ACTIVATIONS:
            raise DomainError(f"unknown activation {activation!r}")
        if _is_sparse(weights):
            w = weights.tocsr()
            if not np.all(np.isfinite(w.data)):
                raise DomainError("layer weights must be finite")
        else:
            w = np.array(weights, dtype=float)
            if w.ndim != 2:
                raise DomainError("layer weights must be a matrix")
            if not np.all(np.isfinite(w)):
                raise DomainError("layer weights must be finite")
            w.setflags(write=False)
        b = np.array(bias, dtype=float).reshape(-1)
        if b.shape[0] != w.shape[0]:
            raise DomainError(
                f"bias length {b.shape[0]} does not match {w.shape[0]} rows"
            )
        if not np.all(np.isfinite(b)):
            raise DomainError("layer bias must be finite")
        b.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", b)
        object.__setattr__(self, "activation", activation)

    def __setattr__(self, *_):
        raise AttributeError("DenseLayer is immutable")

    @property
    def rows(self) -> int:
        return self.weights.shape[0]

    @property
    def cols(self) -> int:
        return self.weights.shape[1]

    def dense_weights(self) -> np.ndarray:
        if self.rows * self.cols > SERIALIZE_LIMIT:
            raise CapacityError(
                f"layer with {self.rows}x{self.cols} entries is too large "
                f"to densify (limit {SERIALIZE_LIMIT})"
            )
        return _to_dense(self.weights)


@dataclass(frozen=True)
class FeedForwardNet:
    input_dim: int
    layers: tuple[DenseLayer, ...]

    def __post_init__(self):
        if self.input_dim < 1:
            raise DomainError("input_dim must be >= 1")
        if not self.layers:
            raise DomainError("a net needs at least one layer")
        want = self.input_dim
        for i, layer in enumerate(self.layers):
            if layer.cols != want:
                raise DomainError(
                    f"layer {i} expects {layer.cols} inputs, upstream provides {want}"
                )
            want = layer.rows

    @property
    def output_dim(self) -> int:
        return self.layers[-1].rows

    @property
    def depth(self) -> int:
        return len(self.layers)


def affine_net(weights, bias) -> FeedForwardNet:
    w = np.atleast_2d(np.asarray(weights, dtype=float))
    return FeedForwardNet(w.shape[1], (DenseLayer(w, bias, IDENTITY),))


def identity_net(dim: int = 1) -> FeedForwardNet:
    return affine_net(np.eye(dim), np.zeros(dim))


def constant_net(value: float, input_dim: int = 1) -> FeedForwardNet:
    return affine_net(np.zeros((1, input_dim)), np.array([value]))


def evaluate(net: FeedForwardNet, x) -> np.ndarray:
    """Forward pass.  x of shape (d,) gives (out,); (n, d) gives (n, out)."""
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    if single:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != net.input_dim:
        raise DomainError(
            f"input shape {np.shape(x)} does not match input_dim {net.input_dim}"
        )
    h = arr
    for i, layer in enumerate(net.layers):
        with np.errstate(over="ignore", invalid="ignore"):
            if _is_sparse(layer.weights):
                z = np.asarray((layer.weights @ h.T).T) + layer.bias
            else:
                z = h @ layer.weights.T + layer.bias
        bad = ~np.isfinite(z)
        if bad.any():
            raise OverflowGuardError(i, float("inf"))
        peak = float(np.max(np.abs(z))) if z.size else 0.0
        if peak > OVERFLOW_GUARD:
            raise OverflowGuardError(i, peak)
        h = silu_array(z) if layer.activation == SILU else z
    return h[0] if single else h


# ---------------------------------------------------------------------------
# block assembly helpers


class _Blocks:
    """Accumulates (row_off, col_off, matrix) pieces of one layer."""

    def __init__(self, rows: int, cols: int):
        self.rows, self.cols = rows, cols
        self.pieces: list[tuple[int, int, object]] = []

    def add(self, r: int, c: int, m) -> None:
        self.pieces.append((r, c, m))

    def materialize(self):
        if self.rows * self.cols <= DENSE_LIMIT:
            out = np.zeros((self.rows, self.cols))
            for r, c, m in self.pieces:
                d = _to_dense(m)
                out[r : r + d.shape[0], c : c + d.shape[1]] += d
            return out
        mats = []
        for r, c, m in self.pieces:
            m = sp.coo_matrix(m)
            mats.append(
                sp.coo_matrix(
                    (m.data, (m.row + r, m.col + c)), shape=(self.rows, self.cols)
                )
            )
        acc = mats[0]
        for m in mats[1:]:
            acc = acc + m
        return acc.tocsr()


def _pair_rows(readout, offset: np.ndarray) -> tuple[np.ndarray | sp.csr_matrix, np.ndarray]:
    """Rows computing +/-(readout . h + offset), two per carried channel."""
    if _is_sparse(readout):
        w = sp.vstack([readout, -readout]).tocsr()
    else:
        ro = np.atleast_2d(readout)
        w = np.vstack([ro, -ro])
    b = np.concatenate([offset, -offset])
    return w, b


def _pair_readout(n_channels: int):
    """Readout matrix turning a pair block back into its carried values."""
    m = np.zeros((n_channels, 2 * n_channels))
    for i in range(n_channels):
        m[i, i] = 1.0
        m[i, n_channels + i] = -1.0
    return m


def _split(net: FeedForwardNet):
    """Normalize to (silu layers, final affine), fusing interior identities."""
    silu_layers: list[tuple[object, np.ndarray]] = []
    pending: tuple[object, np.ndarray] | None = None
    for layer in net.layers:
        w, b = layer.weights, layer.bias
        if layer.activation == IDENTITY:
            if pending is None:
                pending = (w, b)
            else:
                pw, pb = pending
                pending = (_matmul(w, pw), _matvec(w, pb) + b)
        else:
            if pending is not None:
                pw, pb = pending
                b = _matvec(layer.weights, pb) + layer.bias
                w = _matmul(layer.weights, pw)
                pending = None
            silu_layers.append((w, b))
    if pending is None:
        dim = silu_layers[-1][0].shape[0] if silu_layers else net.input_dim
        out = (np.eye(dim), np.zeros(dim))
    else:
        out = pending
    return silu_layers, out


def compose(
    outer: FeedForwardNet,
    inner: FeedForwardNet,
    wiring: Sequence[int] | None = None,
) -> FeedForwardNet:
    """Net computing outer(w) where w routes inner outputs and raw inputs.

    wiring has one entry per outer input: values < inner.output_dim select
    an inner output; inner.output_dim + j selects raw input coordinate j.
    Defaults to all inner outputs followed by raw coordinates in order.
    """
    d = inner.input_dim
    q = inner.output_dim
    if wiring is None:
        wiring = tuple(range(outer.input_dim))
    wiring = tuple(int(w) for w in wiring)
    if len(wiring) != outer.input_dim:
        raise WiringError(
            f"wiring length {len(wiring)} != outer input_dim {outer.input_dim}"
        )
    for w in wiring:
        if not 0 <= w < q + d:
            raise WiringError(f"wiring entry {w} outside [0, {q + d})")

    inner_silu, (wi, bi) = _split(inner)
    outer_silu, (wo, bo) = _split(outer)
    raw_used = sorted({w - q for w in wiring if w >= q})
    raw_pos = {j: idx for idx, j in enumerate(raw_used)}
    p = len(inner_silu)
    layers: list[DenseLayer] = []

    if p == 0:
        # inner is a pure affine map; fold it straight into the bridge
        wi_d, bi_d = _to_dense(wi), bi
        s = np.zeros((len(wiring), d))
        t = np.zeros(len(wiring))
        for i, w in enumerate(wiring):
            if w < q:
                s[i, :] = wi_d[w, :]
                t[i] = bi_d[w]
            else:
                s[i, w - q] = 1.0
        width_prev = None
    else:
        first_w, first_b = inner_silu[0]
        n1 = first_w.shape[0]
        blk = _Blocks(n1 + 2 * len(raw_used), d)
        blk.add(0, 0, first_w)
        for idx, j in enumerate(raw_used):
            e = np.zeros((1, d))
            e[0, j] = 1.0
            blk.add(n1 + 2 * idx, 0, e)
            blk.add(n1 + 2 * idx + 1, 0, -e)
        bias = np.concatenate([first_b, np.zeros(2 * len(raw_used))])
        layers.append(DenseLayer(blk.materialize(), bias, SILU))
        width_prev = n1 + 2 * len(raw_used)
        prev_core = n1

        for t_idx in range(1, p):
            w_t, b_t = inner_silu[t_idx]
            nt = w_t.shape[0]
            width = nt + 2 * len(raw_used)
            blk = _Blocks(width, width_prev)
            blk.add(0, 0, w_t)
            for idx in range(len(raw_used)):
                pc = prev_core + 2 * idx
                pare = np.array([[1.0, -1.0], [-1.0, 1.0]])
                blk.add(nt + 2 * idx, pc, pare)
            bias = np.concatenate([b_t, np.zeros(2 * len(raw_used))])
            layers.append(DenseLayer(blk.materialize(), bias, SILU))
            width_prev = width
            prev_core = nt

        # bridge: select inner outputs (affine of core) and raw pairs
        wi_d = wi if _is_sparse(wi) else np.atleast_2d(_to_dense(wi))
        sblk = _Blocks(len(wiring), width_prev)
        t = np.zeros(len(wiring))
        for i, w in enumerate(wiring):
            if w < q:
                row = wi_d[w, :]
                row = row.toarray() if _is_sparse(row) else np.atleast_2d(row)
                sblk.add(i, 0, row)
                t[i] = bi[w]
            else:
                idx = raw_pos[w - q]
                pair = np.array([[1.0, -1.0]])
                sblk.add(i, prev_core + 2 * idx, pair)
        s = sblk.materialize()

    if not outer_silu:
        wfin = _matmul(wo, s)
        bfin = _matvec(wo, t) + bo
        layers.append(DenseLayer(wfin, bfin, IDENTITY))
    else:
        w1, b1 = outer_silu[0]
        layers.append(DenseLayer(_matmul(w1, s), _matvec(w1, t) + b1, SILU))
        for w_t, b_t in outer_silu[1:]:
            layers.append(DenseLayer(w_t, b_t, SILU))
        layers.append(DenseLayer(wo, bo, IDENTITY))

    return FeedForwardNet(d, tuple(layers))


def stack_parallel(nets: Sequence[FeedForwardNet]) -> FeedForwardNet:
    """Run nets side by side on a shared input; outputs concatenate.

    Nets of unequal depth are padded with +/- carry pairs after their own
    layers so that every branch reaches the common depth exactly.
    """
    if not nets:
        raise DomainError("stack_parallel needs at least one net")
    d = nets[0].input_dim
    for n in nets:
        if n.input_dim != d:
            raise WiringError("stacked nets must share input_dim")
    parts = [_split(n) for n in nets]
    depths = [len(p[0]) for p in parts]
    big = max(depths)

    if big == 0:
        w = np.vstack([_to_dense(p[1][0]) for p in parts])
        b = np.concatenate([p[1][1] for p in parts])
        return FeedForwardNet(d, (DenseLayer(w, b, IDENTITY),))

    # state per net: ("core", width) while its own layers run,
    # then ("pair", out_dim) once it is riding on carry pairs
    layers: list[DenseLayer] = []
    state: list[tuple[str, int]] = []
    offsets_prev: list[int] = []
    for t in range(big):
        row_blocks: list[tuple] = []  # (net_idx, weights, bias, kind, width)
        for i, ((silus, (wo, bo)), pdepth) in enumerate(zip(parts, depths)):
            if t < pdepth:
                w, b = silus[t]
                row_blocks.append((i, w, b, "core", w.shape[0]))
            elif t == pdepth:
                # net i just finished; its output rides on +/- pairs from here
                w, b = _pair_rows(_to_dense(wo), bo)
                o = len(bo)
                row_blocks.append((i, w, b, "pair", 2 * o))
            else:
                o = parts[i][1][1].shape[0]
                ro = _pair_readout(o)
                w, b = _pair_rows(ro, np.zeros(o))
                row_blocks.append((i, w, b, "pair", 2 * o))

        total_rows = sum(rb[4] for rb in row_blocks)
        cols = d if t == 0 else sum(st[1] for st in state)
        blk = _Blocks(total_rows, cols)
        bias = np.zeros(total_rows)
        r = 0
        new_state = []
        new_offsets = []
        for (i, w, b, kind, width) in row_blocks:
            c = 0 if t == 0 else offsets_prev[i]
            blk.add(r, c, w)
            bias[r : r + width] = b
            new_offsets.append(r)
            new_state.append((kind, width))
            r += width
        layers.append(DenseLayer(blk.materialize(), bias, SILU))
        state = new_state
        offsets_prev = new_offsets

    out_dims = [p[1][1].shape[0] for p in parts]
    total_out = sum(out_dims)
    width = sum(st[1] for st in state)
    blk = _Blocks(total_out, width)
    bias = np.zeros(total_out)
    r = 0
    for i, (kind, w_i) in enumerate(state):
        o = out_dims[i]
        if kind == "core":
            wo, bo = parts[i][1]
            blk.add(r, offsets_prev[i], _to_dense(wo))
            bias[r : r + o] = bo
        else:
            blk.add(r, offsets_prev[i], _pair_readout(o))
        r += o
    layers.append(DenseLayer(blk.materialize(), bias, IDENTITY))
    return FeedForwardNet(d, tuple(layers))


def affine_combination(
    nets: Sequence[FeedForwardNet],
    coeffs: Sequence[float],
    constant: float = 0.0,
) -> FeedForwardNet:
    """Net computing sum_i coeffs[i] * net_i(x) + constant (scalar nets)."""
    if len(nets) != len(coeffs):
        raise WiringError("one coefficient per net required")
    for n in nets:
        if n.output_dim != 1:
            raise WiringError("affine_combination expects scalar-output nets")
    stacked = stack_parallel(nets)
    last = stacked.layers[-1]
    c = np.asarray(coeffs, dtype=float).reshape(1, -1)
    w = _matmul(c, last.weights)
    b = np.array([float((c @ last.bias)[0]) + float(constant)])
    layers = stacked.layers[:-1] + (DenseLayer(w, b, IDENTITY),)
    return FeedForwardNet(stacked.input_dim, layers)


# ---------------------------------------------------------------------------
# measurement


@dataclass(frozen=True)
class ErrorReport:
    sup_error: float
    argmax: tuple[float, ...]
    grid_per_dim: int
    refine_levels: int
    domain: tuple[tuple[float, float], ...]
    excluded_bands: tuple[tuple[int, float, float], ...]
    n_evaluated: int

    def csv_fields(self) -> dict[str, str]:
        return {
            "sup_error": f"{self.sup_error:.17g}",
            "argmax": ";".join(f"{v:.17g}" for v in self.argmax),
            "grid_per_dim": str(self.grid_per_dim),
            "refine_levels": str(self.refine_levels),
            "domain": ";".join(f"{lo:.17g}:{hi:.17g}" for lo, hi in self.domain),
            "excluded_bands": ";".join(
                f"{ax}:{lo:.17g}:{hi:.17g}" for ax, lo, hi in self.excluded_bands
            ),
            "n_evaluated": str(self.n_evaluated),
        }


def normalize_domain(domain) -> tuple[tuple[float, float], ...]:
    arr = np.asarray(domain, dtype=float)
    if arr.ndim == 1:
        if arr.shape != (2,):
            raise DomainError("1-D domain must be a (lo, hi) pair")
        arr = arr.reshape(1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise DomainError("domain must be a sequence of (lo, hi) pairs")
    out = []
    for lo, hi in arr:
        if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
            raise DomainError(f"bad interval ({lo}, {hi})")
        out.append((float(lo), float(hi)))
    return tuple(out)


def normalize_bands(bands, d: int) -> tuple[tuple[int, float, float], ...]:
    out = []
    for band in bands:
        band = tuple(band)
        if len(band) == 2:
            if d != 1:
                raise DomainError("bands need an axis index when d > 1")
            axis, lo, hi = 0, *band
        elif len(band) == 3:
            axis, lo, hi = band
        else:
            raise DomainError("band must be (lo, hi) or (axis, lo, hi)")
        axis = int(axis)
        if not 0 <= axis < d:
            raise DomainError(f"band axis {axis} outside [0, {d})")
        if not lo < hi:
            raise DomainError(f"band ({lo}, {hi}) is empty")
        out.append((axis, float(lo), float(hi)))
    return tuple(out)


def _band_mask(pts: np.ndarray, bands) -> np.ndarray:
    keep = np.ones(pts.shape[0], dtype=bool)
    for axis, lo, hi in bands:
        keep &= ~((pts[:, axis] >= lo) & (pts[:, axis] <= hi))
    return keep


def _grid_points(intervals, counts) -> np.ndarray:
    axes = [np.linspace(lo, hi, c) for (lo, hi), c in zip(intervals, counts)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack(mesh, axis=-1).reshape(-1, len(intervals))


def sup_error(
    net: FeedForwardNet,
    target: Callable[[np.ndarray], np.ndarray],
    domain,
    grid_per_dim: int | None = None,
    excluded_bands: Iterable = (),
    refine_levels: int = 3,
) -> ErrorReport:
    """Max |net - target| on a tensor grid plus x10 local refinements."""
    dom = normalize_domain(domain)
    d = len(dom)
    if d != net.input_dim:
        raise DomainError(f"domain is {d}-dimensional, net wants {net.input_dim}")
    bands = normalize_bands(excluded_bands, d)
    if grid_per_dim is None:
        grid_per_dim = {1: 10001, 2: 201}.get(d, 41)
    if grid_per_dim < 2:
        raise DomainError("grid_per_dim must be >= 2")

    def batch_err(pts: np.ndarray) -> np.ndarray:
        got = np.asarray(evaluate(net, pts))
        want = np.asarray(target(pts), dtype=float)
        if want.ndim == 1:
            want = want.reshape(-1, 1)
        if got.shape != want.shape:
            raise DomainError(
                f"target shape {want.shape} does not match net output {got.shape}"
            )
        return np.max(np.abs(got - want), axis=1)

    pts = _grid_points(dom, [grid_per_dim] * d)
    keep = _band_mask(pts, bands)
    if not keep.any():
        raise DomainError("excluded bands cover the whole measurement grid")
    pts = pts[keep]
    errs = batch_err(pts)
    best = int(np.argmax(errs))
    best_val = float(errs[best])
    best_pt = pts[best].copy()
    n_eval = pts.shape[0]

    spacing = np.array([(hi - lo) / (grid_per_dim - 1) for lo, hi in dom])
    for _ in range(refine_levels):
        windows = []
        for i, (lo, hi) in enumerate(dom):
            w_lo = max(lo, best_pt[i] - spacing[i])
            w_hi = min(hi, best_pt[i] + spacing[i])
            if w_lo >= w_hi:
                w_lo, w_hi = lo, hi
            windows.append((w_lo, w_hi))
        pts = _grid_points(windows, [21] * d)
        keep = _band_mask(pts, bands)
        if not keep.any():
            break
        pts = pts[keep]
        errs = batch_err(pts)
        n_eval += pts.shape[0]
        i = int(np.argmax(errs))
        if float(errs[i]) > best_val:
            best_val = float(errs[i])
            best_pt = pts[i].copy()
        spacing = np.array([(hi - lo) / 20 for lo, hi in windows])

    return ErrorReport(
        sup_error=best_val,
        argmax=tuple(float(v) for v in best_pt),
        grid_per_dim=grid_per_dim,
        refine_levels=refine_levels,
        domain=dom,
        excluded_bands=bands,
        n_evaluated=n_eval,
    )


# ---------------------------------------------------------------------------
# summary and serialization


@dataclass(frozen=True)
class NetSummary:
    depth: int
    max_width: int
    param_count: int
    nonzero_param_count: int
    max_abs_weight: float


def summary(net: FeedForwardNet) -> NetSummary:
    params = 0
    nonzero = 0
    peak = 0.0
    width = 0
    for layer in net.layers:
        params += layer.rows * layer.cols + layer.rows
        width = max(width, layer.rows)
        if _is_sparse(layer.weights):
            nz = layer.weights.nnz
            if nz:
                peak = max(peak, float(np.max(np.abs(layer.weights.data))))
            nonzero += int(nz)
        else:
            nonzero += int(np.count_nonzero(layer.weights))
            if layer.weights.size:
                peak = max(peak, float(np.max(np.abs(layer.weights))))
        nonzero += int(np.count_nonzero(layer.bias))
        if layer.bias.size:
            peak = max(peak, float(np.max(np.abs(layer.bias))))
    return NetSummary(
        depth=net.depth,
        max_width=width,
        param_count=params,
        nonzero_param_count=nonzero,
        max_abs_weight=peak,
    )


def serialize(net: FeedForwardNet) -> str:
    layers = []
    for layer in net.layers:
        w = layer.dense_weights()
        layers.append(
            {
                "rows": layer.rows,
                "cols": layer.cols,
                "activation": layer.activation,
                "weights": [float(v) for v in w.reshape(-1)],
                "bias": [float(v) for v in layer.bias],
            }
        )
    doc = {
        "version": SCHEMA_VERSION,
        "input_dim": net.input_dim,
        "layers": layers,
    }
    return json.dumps(doc, allow_nan=False)


def _expect(cond: bool, msg: str):
    if not cond:
        raise ParseError(msg)


def deserialize(text: str | bytes) -> FeedForwardNet:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", offset=e.pos) from None
    _expect(isinstance(doc, dict), "top level must be an object")
    _expect(doc.get("version") == SCHEMA_VERSION,
            f"unsupported version {doc.get('version')!r}")
    input_dim = doc.get("input_dim")
    _expect(isinstance(input_dim, int) and input_dim >= 1,
            "input_dim must be a positive integer")
    raw_layers = doc.get("layers")
    _expect(isinstance(raw_layers, list) and raw_layers,
            "layers must be a non-empty list")
    layers = []
    for i, entry in enumerate(raw_layers):
        _expect(isinstance(entry, dict), f"layers[{i}] must be an object")
        rows, cols = entry.get("rows"), entry.get("cols")
        _expect(isinstance(rows, int) and rows >= 1, f"layers[{i}].rows invalid")
        _expect(isinstance(cols, int) and cols >= 1, f"layers[{i}].cols invalid")
        act = entry.get("activation")
        _expect(act in _ACTIVATIONS, f"layers[{i}].activation invalid")
        wvals = entry.get("weights")
        bvals = entry.get("bias")
        _expect(isinstance(wvals, list) and len(wvals) == rows * cols,
                f"layers[{i}].weights must hold rows*cols values")
        _expect(isinstance(bvals, list) and len(bvals) == rows,
                f"layers[{i}].bias must hold rows values")
        try:
            w = np.array(wvals, dtype=float).reshape(rows, cols)
            b = np.array(bvals, dtype=float)
        except (TypeError, ValueError):
            raise ParseError(f"layers[{i}] holds non-numeric values") from None
        _expect(bool(np.all(np.isfinite(w)) and np.all(np.isfinite(b))),
                f"layers[{i}] holds non-finite values")
        layers.append(DenseLayer(w, b, act))
    try:
        return FeedForwardNet(input_dim, tuple(layers))
    except DomainError as e:
        raise ParseError(f"inconsistent layer chain: {e}") from None
