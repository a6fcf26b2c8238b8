"""Forward/backward numerator recursions and moment extraction.

For a separable path function f (sum of one per-edge g value per traversed
edge) the m-th forward numerator of a vertex v accumulates, over all paths
from the source to v, the path label weighted by f(P)^m.  A single
depth-synchronous sweep computes all orders 0..M at once through the
binomial recursion

    fwd[v][m] = sum_{e into v} lam(e) * sum_l C(m,l) g(e)^l fwd[init(e)][m-l]

and the mirrored sweep computes backward numerators from the sink.  Order
0 is the plain flow (the BCJR alpha/beta); the sink row of the forward
sweep equals the source row of the backward sweep and yields the trellis
moments.  Constraining the section-i edge to one c-label value yields
symbol moments.  All of this is generic over the commutative semirings in
:mod:`trelliskit.semirings`.

``counted_run`` / ``counted_symbol_pass`` are real-semiring evaluators
instrumented with exact add/multiply tallies, performing literally the
operation schedule that the O(|E|) complexity accounting assumes
(including the per-edge unit multiplication charged at l = 0, and with
g-powers precomputed and tallied separately).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Optional

from .errors import SemiringError, ZeroFlowError
from .semirings import (
    MAX_ORDER,
    REAL,
    SemiringSpec,
    binomial,
    nat_scale,
)
from .trellis import DepthFunctionTable, Trellis, require_valid

_NORMALIZABLE = ("real", "logreal")


def _check_order(max_order: int) -> None:
    if not 0 <= max_order <= MAX_ORDER:
        raise SemiringError(
            f"max order {max_order} outside supported range 0..{MAX_ORDER}"
        )


def _g_powers(
    trellis: Trellis,
    g: DepthFunctionTable,
    max_order: int,
    semiring: SemiringSpec,
) -> dict[int, list[Any]]:
    """Per-edge carrier powers g(e)^0 .. g(e)^M."""
    powers: dict[int, list[Any]] = {}
    for e in trellis.edges:
        base = semiring.from_real(g.value(e))
        row = [semiring.one]
        for _ in range(max_order):
            row.append(semiring.mul(row[-1], base))
        powers[e.id] = row
    return powers


def _carrier_labels(trellis: Trellis, semiring: SemiringSpec) -> dict[int, Any]:
    return {e.id: semiring.from_real(e.lam) for e in trellis.edges}


@dataclass
class MomentState:
    """Per-vertex numerator vectors of one forward or backward sweep."""

    direction: str  # "forward" | "backward"
    max_order: int
    semiring: SemiringSpec
    table: dict[int, list[Any]]
    source: int
    sink: int

    def numerators(self, v: int) -> tuple[Any, ...]:
        return tuple(self.table[v])

    @property
    def terminal(self) -> int:
        """Vertex whose row carries the whole-trellis numerators."""
        return self.sink if self.direction == "forward" else self.source


def forward_numerators(
    trellis: Trellis,
    g: DepthFunctionTable,
    max_order: int,
    semiring: SemiringSpec = REAL,
) -> MomentState:
    """Numerators of orders 0..max_order at every vertex, source first."""
    require_valid(trellis)
    _check_order(max_order)
    powers = _g_powers(trellis, g, max_order, semiring)
    lam = _carrier_labels(trellis, semiring)
    add, mul = semiring.add, semiring.mul

    table: dict[int, list[Any]] = {
        trellis.source: [semiring.one] + [semiring.zero] * max_order
    }
    for depth in range(1, trellis.rank + 1):
        for v in trellis.layers[depth]:
            row = []
            in_edges = trellis.in_edges(v)
            for m in range(max_order + 1):
                acc = semiring.zero
                for e in in_edges:
                    init_row = table[e.init]
                    gpow = powers[e.id]
                    inner = semiring.zero
                    for l in range(m + 1):
                        term = mul(gpow[l], init_row[m - l])
                        c = binomial(m, l)
                        if c != 1:
                            term = nat_scale(semiring, c, term)
                        inner = add(inner, term)
                    acc = add(acc, mul(lam[e.id], inner))
                row.append(acc)
            table[v] = row
    return MomentState(
        "forward", max_order, semiring, table, trellis.source, trellis.sink
    )


def backward_numerators(
    trellis: Trellis,
    g: DepthFunctionTable,
    max_order: int,
    semiring: SemiringSpec = REAL,
) -> MomentState:
    """Mirror sweep from the sink; order 0 gives the flows to the sink."""
    require_valid(trellis)
    _check_order(max_order)
    powers = _g_powers(trellis, g, max_order, semiring)
    lam = _carrier_labels(trellis, semiring)
    add, mul = semiring.add, semiring.mul

    table: dict[int, list[Any]] = {
        trellis.sink: [semiring.one] + [semiring.zero] * max_order
    }
    for depth in range(trellis.rank - 1, -1, -1):
        for v in trellis.layers[depth]:
            row = []
            out_edges = trellis.out_edges(v)
            for m in range(max_order + 1):
                acc = semiring.zero
                for e in out_edges:
                    fin_row = table[e.fin]
                    gpow = powers[e.id]
                    inner = semiring.zero
                    for l in range(m + 1):
                        term = mul(gpow[l], fin_row[m - l])
                        c = binomial(m, l)
                        if c != 1:
                            term = nat_scale(semiring, c, term)
                        inner = add(inner, term)
                    acc = add(acc, mul(lam[e.id], inner))
                row.append(acc)
            table[v] = row
    return MomentState(
        "backward", max_order, semiring, table, trellis.source, trellis.sink
    )


def _normalize(
    semiring: SemiringSpec, numerators: tuple[Any, ...]
) -> Optional[tuple[float, ...]]:
    """Ratios numerator[m] / numerator[0] in the plain-real domain.

    Only meaningful for the real and log-domain-real semirings; returns
    None (an explicit "undefined" flag, never NaN) when the flow is the
    semiring zero or the semiring has no division.
    """
    if semiring.name not in _NORMALIZABLE:
        return None
    flow = numerators[0]
    if flow == semiring.zero:
        return None
    if semiring.name == "logreal":
        # Carrier values are logs of nonnegative reals; the ratio is
        # exp of the carrier difference.
        return tuple(math.exp(n - flow) for n in numerators)
    return tuple(n / flow for n in numerators)


@dataclass(frozen=True)
class TrellisMoments:
    """Whole-trellis numerators and (when defined) normalized moments."""

    numerators: tuple[Any, ...]
    normalized: Optional[tuple[float, ...]]
    semiring: str

    @property
    def max_order(self) -> int:
        return len(self.numerators) - 1


def trellis_moments(state: MomentState) -> TrellisMoments:
    """Moments of the whole trellis from a completed sweep.

    Accepts either direction: the forward sink row and the backward source
    row carry the same numerators.
    """
    numerators = state.numerators(state.terminal)
    return TrellisMoments(
        numerators, _normalize(state.semiring, numerators), state.semiring.name
    )


@dataclass(frozen=True)
class SymbolMoments:
    """Moments restricted to paths whose section-``depth`` edge has
    c-label ``symbol``."""

    depth: int
    symbol: float
    numerators: tuple[Any, ...]
    normalized: Optional[tuple[float, ...]]
    semiring: str


def symbol_moments(
    trellis: Trellis,
    g: DepthFunctionTable,
    forward: MomentState,
    backward: MomentState,
    depth: int,
    symbol: float,
) -> SymbolMoments:
    """Combine forward and backward numerators across one section.

    When no section-``depth`` edge carries c-label ``symbol`` the
    numerators are all the semiring zero and ``normalized`` is None.
    """
    if forward.direction != "forward" or backward.direction != "backward":
        raise SemiringError("symbol_moments needs one forward and one backward state")
    if forward.semiring.name != backward.semiring.name:
        raise SemiringError("forward and backward states use different semirings")
    if not 1 <= depth <= trellis.rank:
        raise SemiringError(f"section depth {depth} outside 1..{trellis.rank}")
    semiring = forward.semiring
    max_order = min(forward.max_order, backward.max_order)
    add, mul = semiring.add, semiring.mul

    edges = [e for e in trellis.edges_at(depth) if e.clabel == symbol]
    powers = {}
    lam = {}
    for e in edges:
        base = semiring.from_real(g.value(e))
        row = [semiring.one]
        for _ in range(max_order):
            row.append(mul(row[-1], base))
        powers[e.id] = row
        lam[e.id] = semiring.from_real(e.lam)

    numerators = []
    for m in range(max_order + 1):
        acc = semiring.zero
        for e in edges:
            alpha = forward.table[e.init]
            beta = backward.table[e.fin]
            gpow = powers[e.id]
            outer = semiring.zero
            for l in range(m + 1):
                inner = semiring.zero
                for k in range(l + 1):
                    term = mul(gpow[k], alpha[l - k])
                    c = binomial(l, k)
                    if c != 1:
                        term = nat_scale(semiring, c, term)
                    inner = add(inner, term)
                term = mul(beta[m - l], inner)
                c = binomial(m, l)
                if c != 1:
                    term = nat_scale(semiring, c, term)
                outer = add(outer, term)
            acc = add(acc, mul(lam[e.id], outer))
        numerators.append(acc)
    numerators = tuple(numerators)
    return SymbolMoments(
        depth, symbol, numerators, _normalize(semiring, numerators), semiring.name
    )


# -- joint moments -------------------------------------------------------------


@dataclass
class JointMomentState:
    """Per-vertex numerators for two path functions jointly.

    table[v][k][m] accumulates f_y(P)^k * f_z(P)^m * label(P) over paths
    from the source to v.
    """

    order_y: int
    order_z: int
    semiring: SemiringSpec
    table: dict[int, list[list[Any]]]
    source: int
    sink: int


def joint_forward_numerators(
    trellis: Trellis,
    g_y: DepthFunctionTable,
    g_z: DepthFunctionTable,
    order_y: int,
    order_z: int,
    semiring: SemiringSpec = REAL,
) -> JointMomentState:
    """Forward sweep for the joint numerators of two separable functions."""
    if semiring.name not in _NORMALIZABLE:
        raise SemiringError(
            "joint moments are supported for the real and logreal semirings"
        )
    require_valid(trellis)
    _check_order(order_y)
    _check_order(order_z)
    pow_y = _g_powers(trellis, g_y, order_y, semiring)
    pow_z = _g_powers(trellis, g_z, order_z, semiring)
    lam = _carrier_labels(trellis, semiring)
    add, mul = semiring.add, semiring.mul

    zero_grid = [
        [semiring.zero] * (order_z + 1) for _ in range(order_y + 1)
    ]
    start = [row[:] for row in zero_grid]
    start[0][0] = semiring.one
    table: dict[int, list[list[Any]]] = {trellis.source: start}

    for depth in range(1, trellis.rank + 1):
        for v in trellis.layers[depth]:
            grid = [row[:] for row in zero_grid]
            for k in range(order_y + 1):
                for m in range(order_z + 1):
                    acc = semiring.zero
                    for e in trellis.in_edges(v):
                        init = table[e.init]
                        py, pz = pow_y[e.id], pow_z[e.id]
                        inner = semiring.zero
                        for j in range(k + 1):
                            for l in range(m + 1):
                                term = mul(
                                    mul(py[k - j], pz[m - l]), init[j][l]
                                )
                                c = binomial(k, j) * binomial(m, l)
                                if c != 1:
                                    term = nat_scale(semiring, c, term)
                                inner = add(inner, term)
                        acc = add(acc, mul(lam[e.id], inner))
                    grid[k][m] = acc
            table[v] = grid
    return JointMomentState(
        order_y, order_z, semiring, table, trellis.source, trellis.sink
    )


def joint_trellis_moments(
    state: JointMomentState,
) -> tuple[tuple[tuple[Any, ...], ...], Optional[tuple[tuple[float, ...], ...]]]:
    """(numerator grid, normalized grid or None) at the sink."""
    grid = state.table[state.sink]
    numerators = tuple(tuple(row) for row in grid)
    flow = grid[0][0]
    if flow == state.semiring.zero:
        return numerators, None
    if state.semiring.name == "logreal":
        normalized = tuple(
            tuple(math.exp(x - flow) for x in row) for row in grid
        )
    else:
        normalized = tuple(tuple(x / flow for x in row) for row in grid)
    return numerators, normalized


# -- normalized recursion --------------------------------------------------------


@dataclass
class NormalizedMomentState:
    """Per-vertex normalized moments with flows tracked in the log domain.

    ``normalized[v][m]`` is numerator[m] / numerator[0]; ``log_flow[v]``
    is the natural log of the order-0 numerator, so that
    ``normalized[v][m] * exp(log_flow[v])`` reconstructs the raw
    numerator without the recursion itself ever leaving a well-scaled
    range.
    """

    direction: str
    max_order: int
    normalized: dict[int, tuple[float, ...]]
    log_flow: dict[int, float]

    def reconstruct(self, v: int) -> tuple[float, ...]:
        scale = math.exp(self.log_flow[v])
        return tuple(x * scale for x in self.normalized[v])


def normalized_states(
    trellis: Trellis,
    g: DepthFunctionTable,
    max_order: int,
    direction: str = "forward",
) -> NormalizedMomentState:
    """Run the recursion in normalized form (real labels, positive flows).

    Each layer's numerators are divided by that vertex's flow as they are
    produced, and the flow itself is carried as a log; incoming edges
    contribute through their relative weights
    lam(e)*flow(init(e)) / sum(lam(e')*flow(init(e'))).  Raises
    ZeroFlowError naming the first vertex whose flow vanishes.
    """
    require_valid(trellis)
    _check_order(max_order)
    if direction not in ("forward", "backward"):
        raise SemiringError(f"unknown direction {direction!r}")
    for e in trellis.edges:
        if e.lam < 0:
            raise SemiringError(
                f"normalized recursion needs nonnegative labels; edge {e.id} "
                f"has {e.lam}"
            )
    log_lam = {
        e.id: math.log(e.lam) if e.lam > 0 else -math.inf for e in trellis.edges
    }
    gval = {e.id: g.value(e) for e in trellis.edges}

    forward = direction == "forward"
    start = trellis.source if forward else trellis.sink
    normalized: dict[int, tuple[float, ...]] = {
        start: (1.0,) + (0.0,) * max_order
    }
    log_flow: dict[int, float] = {start: 0.0}

    depth_range = (
        range(1, trellis.rank + 1) if forward else range(trellis.rank - 1, -1, -1)
    )
    for depth in depth_range:
        for v in trellis.layers[depth]:
            edges = trellis.in_edges(v) if forward else trellis.out_edges(v)
            neighbor = (lambda e: e.init) if forward else (lambda e: e.fin)
            terms = [log_lam[e.id] + log_flow[neighbor(e)] for e in edges]
            hi = max(terms)
            if hi == -math.inf:
                raise ZeroFlowError(v)
            total = hi + math.log(sum(math.exp(t - hi) for t in terms))
            weights = [math.exp(t - total) for t in terms]
            log_flow[v] = total

            row = [0.0] * (max_order + 1)
            row[0] = 1.0
            for m in range(1, max_order + 1):
                acc = 0.0
                for w, e in zip(weights, edges):
                    if w == 0.0:
                        continue
                    prev = normalized[neighbor(e)]
                    base = gval[e.id]
                    gp = 1.0
                    inner = prev[m]
                    for l in range(1, m + 1):
                        gp *= base
                        inner += binomial(m, l) * gp * prev[m - l]
                    acc += w * inner
                row[m] = acc
            normalized[v] = tuple(row)
    return NormalizedMomentState(direction, max_order, normalized, log_flow)


# -- instrumented (counted) real-semiring evaluation -------------------------------


@dataclass
class OpCounter:
    """Exact arithmetic-operation tallies of a counted run.

    ``multiplications``/``additions`` count the recursion's combining
    step only (the per-edge schedule the O(|E|) accounting is stated
    for); ``power_multiplications`` tallies the separate per-edge
    precomputation of g powers up to the maximum order.  All fields only
    ever increase while a run is in progress.
    """

    multiplications: int = 0
    additions: int = 0
    power_multiplications: int = 0

    def __add__(self, other: "OpCounter") -> "OpCounter":
        """Associative merge, so per-worker tallies can be combined."""
        return OpCounter(
            self.multiplications + other.multiplications,
            self.additions + other.additions,
            self.power_multiplications + other.power_multiplications,
        )

    @property
    def total(self) -> int:
        """Recursion operations (excludes the power precomputation)."""
        return self.multiplications + self.additions

    def as_dict(self) -> dict[str, int]:
        return {
            "multiplications": self.multiplications,
            "additions": self.additions,
            "power_multiplications": self.power_multiplications,
            "total": self.total,
        }


def counted_run(
    trellis: Trellis,
    g: DepthFunctionTable,
    max_order: int,
) -> tuple[TrellisMoments, OpCounter]:
    """Real-semiring forward sweep with exact operation tallies.

    Performs literally the schedule the complexity accounting charges:
    per edge and order m, one multiplication at l = 0, two per l >= 1
    (coefficient-times-power, then times the stored numerator), one by
    the edge label, plus the inner-sum and edge-combining additions.
    """
    require_valid(trellis)
    _check_order(max_order)
    counter = OpCounter()

    powers: dict[int, list[float]] = {}
    for e in trellis.edges:
        base = g.value(e)
        row = [1.0, base] if max_order >= 1 else [1.0]
        for _ in range(2, max_order + 1):
            row.append(row[-1] * base)
            counter.power_multiplications += 1
        powers[e.id] = row

    table: dict[int, list[float]] = {
        trellis.source: [1.0] + [0.0] * max_order
    }
    for depth in range(1, trellis.rank + 1):
        for v in trellis.layers[depth]:
            row = []
            for m in range(max_order + 1):
                acc = 0.0
                first = True
                for e in trellis.in_edges(v):
                    init_row = table[e.init]
                    gpow = powers[e.id]
                    if m == 0:
                        contrib = e.lam * init_row[0]
                        counter.multiplications += 1
                    else:
                        inner = 1.0 * init_row[m]
                        counter.multiplications += 1
                        for l in range(1, m + 1):
                            w = binomial(m, l) * gpow[l]
                            counter.multiplications += 1
                            inner += w * init_row[m - l]
                            counter.multiplications += 1
                            counter.additions += 1
                        contrib = e.lam * inner
                        counter.multiplications += 1
                    if first:
                        acc = contrib
                        first = False
                    else:
                        acc += contrib
                        counter.additions += 1
                row.append(acc)
            table[v] = row

    state = MomentState(
        "forward", max_order, REAL, table, trellis.source, trellis.sink
    )
    return trellis_moments(state), counter


def counted_symbol_pass(
    trellis: Trellis,
    g: DepthFunctionTable,
    forward: MomentState,
    backward: MomentState,
    order: int,
) -> tuple[dict[tuple[int, float], float], OpCounter]:
    """Order-``order`` symbol numerators for every (depth, c-label) pair.

    Assumes the g powers were precomputed by the forward sweep (they are
    not re-tallied).  Counts the per-edge combining schedule: the l = 0
    term costs one multiplication (backward numerator times flow), every
    l >= 1 term costs two plus two per inner k >= 1, and each edge's
    result costs one multiplication by its label.
    """
    if forward.semiring.name != "real" or backward.semiring.name != "real":
        raise SemiringError("counted runs support the real semiring only")
    if order > min(forward.max_order, backward.max_order):
        raise SemiringError("states were not computed to the requested order")
    counter = OpCounter()
    powers = {
        e.id: [g.value(e) ** l for l in range(order + 1)] for e in trellis.edges
    }

    results: dict[tuple[int, float], float] = {}
    for depth in range(1, trellis.rank + 1):
        for e in trellis.edges_at(depth):
            alpha = forward.table[e.init]
            beta = backward.table[e.fin]
            gpow = powers[e.id]
            m = order
            outer = beta[m] * alpha[0]
            counter.multiplications += 1
            for l in range(1, m + 1):
                inner = alpha[l]
                for k in range(1, l + 1):
                    w = binomial(l, k) * gpow[k]
                    counter.multiplications += 1
                    inner += w * alpha[l - k]
                    counter.multiplications += 1
                    counter.additions += 1
                w = binomial(m, l) * beta[m - l]
                counter.multiplications += 1
                outer += w * inner
                counter.multiplications += 1
                counter.additions += 1
            contrib = e.lam * outer
            counter.multiplications += 1

            key = (depth, e.clabel)
            if key in results:
                results[key] += contrib
                counter.additions += 1
            else:
                results[key] = contrib
    return results, counter
