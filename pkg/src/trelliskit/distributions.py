"""Exact and quantized distributions of separable path functions.

The value distribution of f over all source-to-sink paths (each path
weighted by its label) propagates through the trellis just like the
flows: traversing an edge shifts the domain of the incoming distribution
by that edge's g value and scales it by the edge label; merging at a
vertex adds distributions; combining a forward and a backward
distribution convolves them.

Two representations are provided:

* ``ExactDistribution`` — weights on a regular value lattice
  (offset + k*step).  Exact whenever all g values of each section lie on
  a common lattice; for bipolar +/-1 g values the final domain is
  {-n, -n+2, ..., n}.
* ``QuantizedDistribution`` — 2N+1 uniform mid-tread bins of width delta
  arranged around a tracked mean; supports arbitrary real g values.  The
  mean is updated by weighted averaging when paths join, and bin contents
  are linearly redistributed to the new partition margins, accumulating
  clipped mass in the two boundary bins.  Total mass is conserved
  exactly (up to rounding).

When every merge's incoming means agree modulo the bin width (the
hard-decision case), the tracked mean snaps onto that common lattice so
that every redistribution moves whole bins; the quantized pipeline then
reproduces the exact one bin for bin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import LatticeError, SemiringError, ZeroFlowError
from .moments import forward_numerators, trellis_moments
from .trellis import DepthFunctionTable, Trellis, require_valid

# Smallest usable exact-lattice step and largest exact-mode mass vector.
MIN_LATTICE_STEP = 1e-6
MAX_EXACT_BINS = 1 << 16

_ALIGN_TOL = 1e-9


@dataclass(frozen=True)
class ExactDistribution:
    """Weights on the value lattice offset + k*step, k = 0..len(mass)-1.

    ``step`` may be 0.0 only for a single-point distribution (a point
    mass needs no lattice).  Masses may carry any real weights; they are
    nonnegative whenever all edge labels are.
    """

    offset: float
    step: float
    mass: tuple[float, ...]

    def __post_init__(self):
        if len(self.mass) == 0:
            raise LatticeError("a distribution needs at least one lattice point")
        if self.step < 0 or (self.step == 0 and len(self.mass) > 1):
            raise LatticeError(
                f"invalid lattice step {self.step} for {len(self.mass)} points"
            )

    @classmethod
    def dirac(cls, value: float = 0.0, weight: float = 1.0, step: float = 0.0):
        return cls(float(value), float(step), (float(weight),))

    def values(self) -> tuple[float, ...]:
        return tuple(self.offset + k * self.step for k in range(len(self.mass)))

    def total(self) -> float:
        return float(sum(self.mass))

    def moment(self, m: int) -> float:
        return float(
            sum(w * (self.offset + k * self.step) ** m
                for k, w in enumerate(self.mass))
        )

    def normalized(self) -> "ExactDistribution":
        """Scale to unit total mass (a density)."""
        total = self.total()
        if total == 0:
            raise ZeroFlowError(None, "cannot normalize a zero-mass distribution")
        return ExactDistribution(
            self.offset, self.step, tuple(w / total for w in self.mass)
        )

    def as_dict(self) -> dict[float, float]:
        """Value -> mass mapping with exact-zero entries dropped."""
        return {
            self.offset + k * self.step: w
            for k, w in enumerate(self.mass)
            if w != 0.0
        }

    def trimmed(self) -> "ExactDistribution":
        """Drop exactly-zero leading and trailing masses."""
        lo, hi = 0, len(self.mass)
        while hi - lo > 1 and self.mass[lo] == 0.0:
            lo += 1
        while hi - lo > 1 and self.mass[hi - 1] == 0.0:
            hi -= 1
        if lo == 0 and hi == len(self.mass):
            return self
        return ExactDistribution(
            self.offset + lo * self.step, self.step, self.mass[lo:hi]
        )

    def padded(self, offset: float, length: int) -> "ExactDistribution":
        """Embed into a wider lattice window starting at ``offset``."""
        if self.step == 0:
            raise LatticeError("cannot pad a free point mass; give it a step")
        shift = (self.offset - offset) / self.step
        k0 = round(shift)
        if abs(shift - k0) > _ALIGN_TOL or k0 < 0 or k0 + len(self.mass) > length:
            raise LatticeError(
                f"distribution at offset {self.offset} does not fit the "
                f"window [{offset}, {offset + (length - 1) * self.step}]"
            )
        mass = [0.0] * length
        for k, w in enumerate(self.mass):
            mass[k0 + k] = w
        return ExactDistribution(float(offset), self.step, tuple(mass))


@dataclass(frozen=True)
class QuantizedDistribution:
    """2N+1 mid-tread bins of width ``bin_width`` around ``mean``.

    Bin j (j = -N..N) covers values near mean + j*bin_width, with j = 0
    the center partition straddling the mean.
    """

    mean: float
    half_bins: int
    bin_width: float
    mass: tuple[float, ...]

    def __post_init__(self):
        if self.half_bins < 1:
            raise SemiringError("need at least one bin on each side of the mean")
        if self.bin_width <= 0:
            raise SemiringError(f"bin width must be positive, got {self.bin_width}")
        if len(self.mass) != 2 * self.half_bins + 1:
            raise SemiringError(
                f"expected {2 * self.half_bins + 1} bins, got {len(self.mass)}"
            )

    @classmethod
    def dirac(cls, half_bins: int, bin_width: float, mean: float = 0.0):
        mass = [0.0] * (2 * half_bins + 1)
        mass[half_bins] = 1.0
        return cls(float(mean), half_bins, float(bin_width), tuple(mass))

    def values(self) -> tuple[float, ...]:
        n = self.half_bins
        return tuple(self.mean + j * self.bin_width for j in range(-n, n + 1))

    def total(self) -> float:
        return float(sum(self.mass))

    def moment(self, m: int) -> float:
        return float(
            sum(w * v**m for v, w in zip(self.values(), self.mass))
        )

    def scaled(self, factor: float) -> "QuantizedDistribution":
        return QuantizedDistribution(
            self.mean,
            self.half_bins,
            self.bin_width,
            tuple(w * factor for w in self.mass),
        )

    def normalized(self) -> "QuantizedDistribution":
        total = self.total()
        if total == 0:
            raise ZeroFlowError(None, "cannot normalize a zero-mass distribution")
        return self.scaled(1.0 / total)


# -- elementary operations ----------------------------------------------------


def shift(dist, b: float):
    """Shift the domain by b (the boxplus operator); masses untouched.

    Exact distributions with more than one lattice point only admit
    shifts by whole lattice steps; point masses and quantized
    distributions shift freely (a quantized shift only moves the mean).
    """
    b = float(b)
    if isinstance(dist, ExactDistribution):
        if len(dist.mass) > 1:
            t = b / dist.step
            if abs(t - round(t)) > _ALIGN_TOL * max(1.0, abs(t)):
                raise LatticeError(
                    f"shift by {b} is off the step-{dist.step} lattice"
                )
        return ExactDistribution(dist.offset + b, dist.step, dist.mass)
    if isinstance(dist, QuantizedDistribution):
        return QuantizedDistribution(
            dist.mean + b, dist.half_bins, dist.bin_width, dist.mass
        )
    raise TypeError(f"cannot shift {type(dist).__name__}")


def convolve(a: ExactDistribution, b: ExactDistribution) -> ExactDistribution:
    """Discrete convolution; offsets add, total masses multiply."""
    if len(a.mass) > 1 and len(b.mass) > 1:
        if abs(a.step - b.step) > _ALIGN_TOL * max(a.step, b.step):
            raise LatticeError(
                f"cannot convolve step {a.step} with step {b.step}"
            )
    step = a.step if len(a.mass) > 1 else b.step
    mass = np.convolve(np.asarray(a.mass), np.asarray(b.mass))
    return ExactDistribution(a.offset + b.offset, step, tuple(mass.tolist()))


def _move_bins(
    mass: np.ndarray, n_in: int, shift_bins: float, n_out: int
) -> np.ndarray:
    """Move bin contents by ``-shift_bins`` with linear interpolation.

    ``shift_bins`` is delta_mu / bin_width: the window center moves up by
    delta_mu, so contents slide down.  Mass whose target falls outside
    -n_out..n_out accumulates in the nearest boundary bin; the fractional
    part eps of the shift splits each bin between the two neighboring
    target bins with weights eps and 1-eps.  Total mass is conserved.
    """
    s = math.floor(shift_bins)
    eps = shift_bins - s
    j = np.arange(-n_in, n_in + 1)
    hi = np.clip(j - s, -n_out, n_out) + n_out
    lo = np.clip(j - s - 1, -n_out, n_out) + n_out
    out = np.zeros(2 * n_out + 1)
    np.add.at(out, hi, (1.0 - eps) * mass)
    if eps != 0.0:
        np.add.at(out, lo, eps * mass)
    return out


def redistribute(
    dist: QuantizedDistribution, delta_mu: float
) -> QuantizedDistribution:
    """Re-center the window at mean + delta_mu, redistributing contents.

    The fraction eps = delta_mu/width - floor(delta_mu/width) of each bin
    moves one extra bin toward -N; out-of-range mass accumulates in the
    boundary bins.  Total mass is conserved exactly.
    """
    moved = _move_bins(
        np.asarray(dist.mass),
        dist.half_bins,
        float(delta_mu) / dist.bin_width,
        dist.half_bins,
    )
    return QuantizedDistribution(
        dist.mean + float(delta_mu),
        dist.half_bins,
        dist.bin_width,
        tuple(moved.tolist()),
    )


# -- lattice detection ---------------------------------------------------------


def _float_gcd(values: Iterable[float]) -> float:
    g = 0.0
    for v in values:
        v = abs(v)
        while v > MIN_LATTICE_STEP * 1e-3:
            g, v = v, math.fmod(g, v)
        g = abs(g)
    return g


def lattice_step(trellis: Trellis, g: DepthFunctionTable) -> float:
    """Common lattice step of the per-section g differences.

    Returns 0.0 when every section's g values coincide (all path values
    equal a single point); raises LatticeError when no usable lattice
    exists (step too small or the implied exact vector too long).
    """
    diffs = []
    span = 0.0
    for depth in range(1, trellis.rank + 1):
        vals = sorted({g.value(e) for e in trellis.edges_at(depth)})
        span += vals[-1] - vals[0]
        for a, b in zip(vals, vals[1:]):
            diffs.append(b - a)
    if not diffs:
        return 0.0
    step = _float_gcd(diffs)
    if step < MIN_LATTICE_STEP:
        raise LatticeError(
            "g values share no usable lattice; use the quantized mode"
        )
    for d in diffs:
        t = d / step
        if abs(t - round(t)) > _ALIGN_TOL * max(1.0, abs(t)):
            raise LatticeError(
                "g values share no usable lattice; use the quantized mode"
            )
    if span / step + 1 > MAX_EXACT_BINS:
        raise LatticeError(
            f"exact mode would need more than {MAX_EXACT_BINS} lattice "
            "points; use the quantized mode"
        )
    return step


# -- propagation state -----------------------------------------------------------


@dataclass(frozen=True)
class QuantizationParams:
    """Bin count and width for the quantized mode.

    ``bin_width=None`` sizes the bins from a preliminary order-2 moment
    pass so that the 2N+1 bins span four standard deviations on each
    side of the mean.
    """

    half_bins: int = 32
    bin_width: Optional[float] = None


@dataclass
class DistributionState:
    """Per-vertex forward or backward distributions of one sweep.

    Exact mode stores raw (flow-weighted) lattice distributions.
    Quantized mode stores unit-mass bin vectors plus the tracked mean per
    vertex and the plain flows needed for relative edge weights.
    """

    direction: str
    mode: str  # "exact" | "quantized"
    rank: int
    hard_decision: bool
    layers: tuple[tuple[int, ...], ...]
    exact: Optional[dict[int, ExactDistribution]] = None
    quantized: Optional[dict[int, QuantizedDistribution]] = None
    flows: Optional[dict[int, float]] = None
    half_bins: Optional[int] = None
    bin_width: Optional[float] = None

    def vertex_distribution(self, v: int):
        if self.mode == "exact":
            return self.exact[v]
        return self.quantized[v]


def _resolve_bin_width(
    trellis: Trellis, g: DepthFunctionTable, params: QuantizationParams
) -> float:
    if params.bin_width is not None:
        if params.bin_width <= 0:
            raise SemiringError("bin width must be positive")
        return float(params.bin_width)
    moments = trellis_moments(forward_numerators(trellis, g, 2))
    if moments.normalized is None:
        raise ZeroFlowError(None, "cannot size bins: total flow is zero")
    mean, second = moments.normalized[1], moments.normalized[2]
    sigma = math.sqrt(max(second - mean * mean, 0.0))
    if sigma == 0.0:
        return 1.0
    return 4.0 * sigma / params.half_bins


def _snap_mean(weighted_mean: float, means: Sequence[float], width: float) -> float:
    """Keep the tracked mean on the incoming means' common lattice.

    When all incoming means agree modulo the bin width, the merged window
    center is chosen on that same lattice (the nearest point to the
    weighted mean, exact ties broken toward the point of smaller
    magnitude so symmetric instances keep centered windows);
    redistributions then move whole bins and the binned representation
    stays exact.  Otherwise the plain weighted mean is used.
    """
    base = means[0]
    for mu in means[1:]:
        t = (mu - base) / width
        if abs(t - round(t)) > _ALIGN_TOL * max(1.0, abs(t)):
            return weighted_mean
    t = (weighted_mean - base) / width
    lo = math.floor(t)
    frac = t - lo
    if frac > 0.5:
        lo += 1
    elif frac == 0.5:
        below = base + lo * width
        above = below + width
        if (abs(above), above) < (abs(below), below):
            lo += 1
    return base + lo * width


def _is_hard_decision(trellis: Trellis, g: DepthFunctionTable) -> bool:
    return all(
        g.value(e) == 1.0 or g.value(e) == -1.0 for e in trellis.edges
    )


def _sweep_order(trellis: Trellis, direction: str):
    if direction == "forward":
        start = trellis.source
        depths = range(1, trellis.rank + 1)
        local_edges = trellis.in_edges
        neighbor = lambda e: e.init
    else:
        start = trellis.sink
        depths = range(trellis.rank - 1, -1, -1)
        local_edges = trellis.out_edges
        neighbor = lambda e: e.fin
    return start, depths, local_edges, neighbor


def _exact_sweep(
    trellis: Trellis, g: DepthFunctionTable, direction: str
) -> dict[int, ExactDistribution]:
    step = lattice_step(trellis, g)
    start, depths, local_edges, neighbor = _sweep_order(trellis, direction)
    dists = {start: ExactDistribution(0.0, step, (1.0,))}
    for depth in depths:
        for v in trellis.layers[depth]:
            parts = []
            for e in local_edges(v):
                d = dists[neighbor(e)]
                parts.append(
                    (d.offset + g.value(e), np.asarray(d.mass) * e.lam)
                )
            dists[v] = _merge_exact(parts, step)
    return dists


def _merge_exact(
    parts: Sequence[tuple[float, np.ndarray]], step: float
) -> ExactDistribution:
    if step == 0.0:
        # No lattice variation anywhere: every part is a point mass at
        # the same value (up to float drift).
        offset = parts[0][0]
        total = 0.0
        for off, mass in parts:
            if abs(off - offset) > _ALIGN_TOL * max(1.0, abs(offset)):
                raise LatticeError(
                    f"point masses at {offset} and {off} cannot merge "
                    "without a lattice"
                )
            total += float(mass.sum())
        return ExactDistribution(offset, 0.0, (total,))
    base = min(off for off, _ in parts)
    hi = 0
    anchored = []
    for off, mass in parts:
        t = (off - base) / step
        k0 = round(t)
        if abs(t - k0) > 1e-6:
            raise LatticeError(
                f"offsets {base} and {off} are not congruent modulo {step}"
            )
        anchored.append((k0, mass))
        hi = max(hi, k0 + len(mass))
    out = np.zeros(hi)
    for k0, mass in anchored:
        out[k0 : k0 + len(mass)] += mass
    return ExactDistribution(base, step, tuple(out.tolist()))


def _quantized_sweep(
    trellis: Trellis,
    g: DepthFunctionTable,
    direction: str,
    half_bins: int,
    width: float,
) -> tuple[dict[int, QuantizedDistribution], dict[int, float]]:
    for e in trellis.edges:
        if e.lam < 0:
            raise SemiringError(
                f"quantized mode needs nonnegative labels; edge {e.id} "
                f"has {e.lam}"
            )
    start, depths, local_edges, neighbor = _sweep_order(trellis, direction)
    dists = {start: QuantizedDistribution.dirac(half_bins, width)}
    flows = {start: 1.0}
    for depth in depths:
        for v in trellis.layers[depth]:
            edges = local_edges(v)
            weights = [e.lam * flows[neighbor(e)] for e in edges]
            wsum = sum(weights)
            if wsum <= 0.0:
                raise ZeroFlowError(
                    v, f"zero incoming weight normalizer at vertex {v}"
                )
            means = [dists[neighbor(e)].mean + g.value(e) for e in edges]
            wmean = sum(w * mu for w, mu in zip(weights, means)) / wsum
            mu = _snap_mean(wmean, means, width)
            acc = np.zeros(2 * half_bins + 1)
            for e, w, mu_in in zip(edges, weights, means):
                if w == 0.0:
                    continue
                acc += (w / wsum) * _move_bins(
                    np.asarray(dists[neighbor(e)].mass),
                    half_bins,
                    (mu - mu_in) / width,
                    half_bins,
                )
            dists[v] = QuantizedDistribution(
                mu, half_bins, width, tuple(acc.tolist())
            )
            flows[v] = wsum
    return dists, flows


def forward_distributions(
    trellis: Trellis,
    g: DepthFunctionTable,
    mode: str = "auto",
    params: Optional[QuantizationParams] = None,
) -> DistributionState:
    """Propagate the value distribution from the source to every vertex.

    ``mode`` is "exact", "quantized" or "auto" (exact when the g values
    admit a lattice, quantized otherwise); the state records which mode
    ran.
    """
    return _distributions(trellis, g, "forward", mode, params)


def backward_distributions(
    trellis: Trellis,
    g: DepthFunctionTable,
    mode: str = "auto",
    params: Optional[QuantizationParams] = None,
) -> DistributionState:
    """Mirror of forward_distributions, propagating from the sink."""
    return _distributions(trellis, g, "backward", mode, params)


def _distributions(trellis, g, direction, mode, params) -> DistributionState:
    require_valid(trellis)
    if mode not in ("exact", "quantized", "auto"):
        raise SemiringError(f"unknown distribution mode {mode!r}")
    hard = _is_hard_decision(trellis, g)
    if mode == "auto":
        try:
            lattice_step(trellis, g)
            mode = "exact"
        except LatticeError:
            mode = "quantized"
    if mode == "exact":
        return DistributionState(
            direction,
            "exact",
            trellis.rank,
            hard,
            trellis.layers,
            exact=_exact_sweep(trellis, g, direction),
        )
    params = params or QuantizationParams()
    width = _resolve_bin_width(trellis, g, params)
    dists, flows = _quantized_sweep(
        trellis, g, direction, params.half_bins, width
    )
    return DistributionState(
        direction,
        "quantized",
        trellis.rank,
        hard,
        trellis.layers,
        quantized=dists,
        flows=flows,
        half_bins=params.half_bins,
        bin_width=width,
    )


def _check_pair(forward: DistributionState, backward: DistributionState):
    if forward.direction != "forward" or backward.direction != "backward":
        raise SemiringError(
            "need one forward and one backward distribution state"
        )
    if forward.mode != backward.mode:
        raise SemiringError("forward and backward states use different modes")
    if forward.mode == "quantized" and (
        forward.half_bins != backward.half_bins
        or forward.bin_width != backward.bin_width
    ):
        raise SemiringError("quantization parameters differ between sweeps")


def _pad_hard(dist: ExactDistribution, rank: int) -> ExactDistribution:
    """Embed a bipolar-g distribution into the full {-n..n} step-2 domain."""
    if len(dist.mass) == 1 and dist.step == 0.0:
        dist = ExactDistribution(dist.offset, 2.0, dist.mass)
    return dist.padded(-float(rank), rank + 1)


def trellis_distribution(
    forward: DistributionState,
    backward: DistributionState,
    depth: int = 0,
):
    """Whole-trellis distribution combined across the depth-``depth`` cut.

    Exact mode: the result does not depend on the chosen cut and its
    total mass is the flow.  Quantized mode: each vertex's forward and
    backward vectors are convolved, recentered on the weighted combined
    mean and summed; the result is scaled back to total mass equal to
    the flow.
    """
    _check_pair(forward, backward)
    if not 0 <= depth <= forward.rank:
        raise SemiringError(f"cut depth {depth} outside 0..{forward.rank}")
    layer = forward.layers[depth]
    if forward.mode == "exact":
        parts = []
        for v in layer:
            d = convolve(forward.exact[v], backward.exact[v])
            parts.append((d.offset, np.asarray(d.mass)))
        step = next(
            d.step for d in forward.exact.values()
        )
        merged = _merge_exact(parts, step).trimmed()
        if forward.hard_decision:
            merged = _pad_hard(merged, forward.rank)
        return merged

    n, width = forward.half_bins, forward.bin_width
    entries = []
    for v in layer:
        f, b = forward.quantized[v], backward.quantized[v]
        entries.append(
            (
                f.mean + b.mean,
                forward.flows[v] * backward.flows[v],
                np.convolve(np.asarray(f.mass), np.asarray(b.mass)),
            )
        )
    return _combine_quantized(entries, n, width)


def symbol_distribution(
    trellis: Trellis,
    g: DepthFunctionTable,
    forward: DistributionState,
    backward: DistributionState,
    depth: int,
    symbol: float,
):
    """Distribution restricted to paths whose section-``depth`` edge
    carries c-label ``symbol``; total mass is the constrained flow."""
    _check_pair(forward, backward)
    if not 1 <= depth <= forward.rank:
        raise SemiringError(f"section depth {depth} outside 1..{forward.rank}")
    edges = [e for e in trellis.edges_at(depth) if e.clabel == symbol]

    if forward.mode == "exact":
        step = next(d.step for d in forward.exact.values())
        if not edges:
            zero = ExactDistribution(0.0, step if step > 0 else 0.0, (0.0,))
            return zero
        parts = []
        for e in edges:
            d = convolve(
                ExactDistribution(
                    forward.exact[e.init].offset + g.value(e),
                    forward.exact[e.init].step,
                    forward.exact[e.init].mass,
                ),
                backward.exact[e.fin],
            )
            parts.append((d.offset, np.asarray(d.mass) * e.lam))
        merged = _merge_exact(parts, step).trimmed()
        if forward.hard_decision:
            merged = _pad_hard(merged, forward.rank)
        return merged

    n, width = forward.half_bins, forward.bin_width
    if not edges:
        return QuantizedDistribution(
            0.0, n, width, (0.0,) * (2 * n + 1)
        )
    entries = []
    for e in edges:
        f, b = forward.quantized[e.init], backward.quantized[e.fin]
        entries.append(
            (
                f.mean + g.value(e) + b.mean,
                forward.flows[e.init] * e.lam * backward.flows[e.fin],
                np.convolve(np.asarray(f.mass), np.asarray(b.mass)),
            )
        )
    return _combine_quantized(entries, n, width)


def _combine_quantized(
    entries: Sequence[tuple[float, float, np.ndarray]],
    half_bins: int,
    width: float,
) -> QuantizedDistribution:
    """Weighted merge of convolved (4N+1)-bin vectors back into 2N+1 bins."""
    total = sum(w for _, w, _ in entries)
    if total <= 0.0:
        return QuantizedDistribution(
            0.0, half_bins, width, (0.0,) * (2 * half_bins + 1)
        )
    means = [mu for mu, _, _ in entries]
    wmean = sum(mu * w for mu, w, _ in entries) / total
    mu_out = _snap_mean(wmean, means, width)
    acc = np.zeros(2 * half_bins + 1)
    for mu, w, conv in entries:
        if w == 0.0:
            continue
        acc += (w / total) * _move_bins(
            conv, 2 * half_bins, (mu_out - mu) / width, half_bins
        )
    return QuantizedDistribution(
        mu_out, half_bins, width, tuple((acc * total).tolist())
    )


# -- Gaussian reference -----------------------------------------------------------


def gaussian_lattice_mass(
    values: Sequence[float], step: float, mean: float, variance: float
) -> list[float]:
    """Gaussian cell masses over a lattice (CDF differences per cell)."""
    if variance <= 0:
        return [1.0 if abs(v - mean) <= step / 2 else 0.0 for v in values]
    sigma = math.sqrt(variance)

    def cdf(x: float) -> float:
        return 0.5 * (1.0 + math.erf((x - mean) / (sigma * math.sqrt(2.0))))

    return [cdf(v + step / 2.0) - cdf(v - step / 2.0) for v in values]
