"""Code trellis builders, channel models and entropy computations.

A binary linear block code is represented by a trellis whose
source-to-sink paths are exactly its codewords (bipolar c-labels, one
code symbol per edge).  Labeling the edges with memoryless channel
likelihoods makes every path label the conditional probability of the
received word given that codeword, after which the moment and
distribution engines deliver correlation moments, symbol probabilities
and conditional entropies of the code and of its one-bit subcodes.

For both the binary symmetric and the AWGN channel the uncertainty
-log2 P(c|w) is affine in the correlation c.w:

    -log2 P(w|c) = -(K1b + K2 * c.w)          K2 > 0

so the mean uncertainty of a (sub)code is K1a - K1b - K2 times the first
correlation moment, where K1a = log2 P(w) - log2 P(c) reduces, for
equiprobable codewords and w equal to the received word, to log2 of the
total flow.  (The affine relation carries a minus sign in front of K2:
higher correlation means lower uncertainty.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ChannelError, TrellisStructureError, ZeroFlowError
from .moments import (
    backward_numerators,
    forward_numerators,
    symbol_moments,
    trellis_moments,
)
from .trellis import (
    DepthFunctionTable,
    Edge,
    Trellis,
    is_bipolar,
    split_multi_symbol_edges,
)

MAX_CONV_MEMORY = 16


# -- channel models -----------------------------------------------------------


@dataclass(frozen=True)
class Bsc:
    """Binary symmetric channel with crossover probability 0 < p < 1/2."""

    p: float

    def __post_init__(self):
        if not 0.0 < self.p < 0.5:
            raise ChannelError(
                f"BSC crossover probability must be in (0, 0.5), got {self.p}"
            )

    kind = "bsc"

    @property
    def param(self) -> float:
        return self.p


@dataclass(frozen=True)
class Awgn:
    """AWGN channel with noise variance sigma2 > 0 (unit bipolar input)."""

    sigma2: float

    def __post_init__(self):
        if not self.sigma2 > 0.0:
            raise ChannelError(
                f"AWGN noise variance must be positive, got {self.sigma2}"
            )

    kind = "awgn"

    @property
    def param(self) -> float:
        return self.sigma2


ChannelModel = Union[Bsc, Awgn]


def parse_channel(spec: str) -> ChannelModel:
    """Parse "bsc:<p>" or "awgn:<sigma2>"."""
    kind, _, param = spec.partition(":")
    try:
        value = float(param)
    except ValueError:
        raise ChannelError(f"bad channel parameter in {spec!r}") from None
    if kind == "bsc":
        return Bsc(value)
    if kind == "awgn":
        return Awgn(value)
    raise ChannelError(f"unknown channel kind {kind!r} (use bsc or awgn)")


def edge_likelihood(channel: ChannelModel, received: float, symbol: float) -> float:
    """P(received | symbol) for one position of a memoryless channel."""
    if isinstance(channel, Bsc):
        if not is_bipolar(received):
            raise ChannelError(
                f"BSC received symbols must be +/-1, got {received}"
            )
        return 1.0 - channel.p if received == symbol else channel.p
    return math.exp(
        -((received - symbol) ** 2) / (2.0 * channel.sigma2)
    ) / math.sqrt(2.0 * math.pi * channel.sigma2)


def channel_lambda_labels(
    trellis: Trellis, channel: ChannelModel, received: Sequence[float]
) -> Trellis:
    """Relabel every edge with P(r_i | c-label) for its section i."""
    if len(received) != trellis.rank:
        raise ChannelError(
            f"received word length {len(received)} does not match "
            f"trellis rank {trellis.rank}"
        )
    return trellis.relabeled(
        lambda e: edge_likelihood(
            channel, received[trellis.depth_of(e.init)], e.clabel
        )
    )


def transmit(
    codeword: Sequence[float], channel: ChannelModel, rng: np.random.Generator
) -> list[float]:
    """Draw one channel output word for a bipolar codeword."""
    if isinstance(channel, Bsc):
        return [
            -c if rng.random() < channel.p else float(c) for c in codeword
        ]
    noise = rng.normal(0.0, math.sqrt(channel.sigma2), size=len(codeword))
    return [float(c + n) for c, n in zip(codeword, noise)]


def random_codeword(trellis: Trellis, rng: np.random.Generator) -> list[float]:
    """c-labels along a random source-to-sink walk (uniform per branch)."""
    word = []
    v = trellis.source
    while v != trellis.sink:
        edges = trellis.out_edges(v)
        e = edges[int(rng.integers(0, len(edges)))]
        word.append(e.clabel)
        v = e.fin
    return word


def make_received(
    trellis: Trellis, channel: ChannelModel, seed: int
) -> tuple[list[float], list[float]]:
    """Seeded (transmitted codeword, received word) pair."""
    rng = np.random.default_rng(seed)
    codeword = random_codeword(trellis, rng)
    return codeword, transmit(codeword, channel, rng)


# -- code trellis builders -------------------------------------------------------


def build_spc_trellis(n: int) -> Trellis:
    """Single-parity-check code trellis of block length n >= 2.

    Source-to-sink paths are exactly the 2^(n-1) even-parity bipolar
    words.  Vertices track the running parity: at depths 1..n-1 the
    even-parity state has id 2*depth-1 and the odd one 2*depth; all
    lambda-labels start at 1.
    """
    if n < 2:
        raise TrellisStructureError(f"SPC block length must be >= 2, got {n}")
    vertex_depths = {0: 0}
    for depth in range(1, n):
        vertex_depths[2 * depth - 1] = depth
        vertex_depths[2 * depth] = depth
    sink = 2 * n - 1
    vertex_depths[sink] = n

    def even(depth: int) -> int:
        return 2 * depth - 1

    def odd(depth: int) -> int:
        return 2 * depth

    edges = [Edge(0, 0, even(1), 1.0, 1.0), Edge(1, 0, odd(1), 1.0, -1.0)]
    eid = 2
    for depth in range(2, n):
        for src, flip in ((even(depth - 1), False), (odd(depth - 1), True)):
            same = odd(depth) if flip else even(depth)
            other = even(depth) if flip else odd(depth)
            edges.append(Edge(eid, src, same, 1.0, 1.0))
            edges.append(Edge(eid + 1, src, other, 1.0, -1.0))
            eid += 2
    edges.append(Edge(eid, even(n - 1), sink, 1.0, 1.0))
    edges.append(Edge(eid + 1, odd(n - 1), sink, 1.0, -1.0))
    return Trellis(n, vertex_depths, edges)


def parse_generators(spec: str) -> tuple[int, ...]:
    """Parse a comma-separated octal generator list such as "7,5"."""
    gens = []
    for item in spec.split(","):
        item = item.strip()
        try:
            gens.append(int(item, 8))
        except ValueError:
            raise TrellisStructureError(
                f"invalid octal generator {item!r}"
            ) from None
    if not gens or any(g <= 0 for g in gens):
        raise TrellisStructureError(f"invalid generator list {spec!r}")
    return tuple(gens)


def build_conv_trellis(
    generators: Sequence[int], info_len: int, terminated: bool = True
) -> Trellis:
    """Zero-tail terminated feedforward convolutional code trellis.

    Generators are octal-style tap masks (most significant bit weights
    the current input).  The returned trellis carries one code symbol
    per edge: each state transition of the rate-1/c machine is split
    into a chain of c edges, so the rank is c*(info_len + memory).
    """
    gens = tuple(int(g) for g in generators)
    if not gens or any(g <= 0 for g in gens):
        raise TrellisStructureError(f"generators must be positive, got {gens}")
    if info_len < 0:
        raise TrellisStructureError(f"info length must be >= 0, got {info_len}")
    if not terminated:
        raise TrellisStructureError(
            "only zero-tail terminated trellises are supported (an "
            "unterminated code has no single sink vertex)"
        )
    memory = max(g.bit_length() for g in gens) - 1
    if memory > MAX_CONV_MEMORY:
        raise TrellisStructureError(
            f"encoder memory {memory} exceeds the supported maximum "
            f"{MAX_CONV_MEMORY}"
        )
    n_out = len(gens)
    sections = info_len + memory
    if sections == 0:
        raise TrellisStructureError(
            "memoryless code with zero info bits has an empty trellis"
        )

    states = [[0]]
    for t in range(1, sections + 1):
        inputs = (0, 1) if t <= info_len else (0,)
        nxt = set()
        for s in states[-1]:
            for u in inputs:
                nxt.add(_conv_next(s, u, memory))
        states.append(sorted(nxt))

    vertex_depths: dict[int, int] = {}
    vid_of: dict[tuple[int, int], int] = {}
    vid = 0
    for depth, layer in enumerate(states):
        for s in layer:
            vid_of[(depth, s)] = vid
            vertex_depths[vid] = depth
            vid += 1

    edges: list[Edge] = []
    symbols: dict[int, tuple[float, ...]] = {}
    eid = 0
    for t in range(1, sections + 1):
        inputs = (0, 1) if t <= info_len else (0,)
        for s in states[t - 1]:
            for u in inputs:
                nxt = _conv_next(s, u, memory)
                window = (u << memory) | s
                out = tuple(
                    1.0 - 2.0 * (bin(gen & window).count("1") & 1)
                    for gen in gens
                )
                edges.append(
                    Edge(eid, vid_of[(t - 1, s)], vid_of[(t, nxt)], 1.0, 0.0)
                )
                symbols[eid] = out
                eid += 1

    raw = Trellis(sections, vertex_depths, edges)
    return split_multi_symbol_edges(raw, n_out, symbols)


def _conv_next(state: int, u: int, memory: int) -> int:
    if memory == 0:
        return 0
    return (u << (memory - 1)) | (state >> 1)


# -- uncertainty / correlation constants ----------------------------------------


@dataclass(frozen=True)
class UncertaintyConstants:
    """Constants of the affine uncertainty-correlation relation.

    log2 P(w|c) = k1b + k2 * (c . w), so the uncertainty of one codeword
    is -log2 P(c|w) = k1a - k1b - k2 * (c . w) with k1a = log2 of the
    ratio P(w)/P(c).  k1a depends on the codeword prior and the word
    marginal; it is None unless supplied (code entropies pin it to log2
    of the total flow).
    """

    k1b: float
    k2: float
    k1a: Optional[float] = None

    @property
    def k1(self) -> float:
        if self.k1a is None:
            raise ChannelError(
                "k1 undefined: no k1a term was supplied for these constants"
            )
        return self.k1a - self.k1b


def uncertainty_constants(
    channel: ChannelModel,
    word: Sequence[float],
    k1a: Optional[float] = None,
) -> UncertaintyConstants:
    """K1b and K2 of log2 P(w|c) = K1b + K2 * c.w for this channel.

    Assumes equiprobable codewords; K2 is positive for any valid channel
    (p < 1/2, sigma2 > 0).
    """
    n = len(word)
    if isinstance(channel, Bsc):
        p = channel.p
        k2 = 0.5 * math.log2((1.0 - p) / p)
        k1b = 0.5 * n * math.log2(p * (1.0 - p))
        return UncertaintyConstants(k1b, k2, k1a)
    sigma2 = channel.sigma2
    energy = sum(w * w for w in word)
    k2 = 1.0 / (sigma2 * math.log(2.0))
    k1b = n * math.log2(1.0 / math.sqrt(2.0 * math.pi * sigma2)) - (
        n + energy
    ) / (2.0 * sigma2 * math.log(2.0))
    return UncertaintyConstants(k1b, k2, k1a)


def word_uncertainty(
    channel: ChannelModel,
    word: Sequence[float],
    codeword: Sequence[float],
    constants: Optional[UncertaintyConstants] = None,
) -> float:
    """-log2 P(w|c) + k1a via the affine form (k1a taken as 0 if unset)."""
    constants = constants or uncertainty_constants(channel, word)
    corr = sum(c * w for c, w in zip(codeword, word))
    k1a = constants.k1a or 0.0
    return k1a - constants.k1b - constants.k2 * corr


# -- correlation moments and entropies -------------------------------------------


def correlation_g_table(trellis: Trellis, word: Sequence[float]) -> DepthFunctionTable:
    """Per-edge contributions c(e) * w_i of the correlation function."""
    if len(word) != trellis.rank:
        raise ChannelError(
            f"word length {len(word)} does not match trellis rank {trellis.rank}"
        )
    return DepthFunctionTable.from_edges(
        trellis, lambda depth, e: e.clabel * word[depth - 1]
    )


def correlation_moments(
    trellis: Trellis,
    word: Sequence[float],
    max_order: int,
    constraint: Optional[tuple[int, float]] = None,
) -> tuple[float, ...]:
    """Normalized moments of c.w over the code, given the edge labels.

    The trellis must already carry channel likelihoods as lambda-labels;
    the result is then the posterior expectation of (c.w)^m for m up to
    ``max_order``, restricted to the subcode when ``constraint=(depth,
    symbol)`` is given.
    """
    g = correlation_g_table(trellis, word)
    forward = forward_numerators(trellis, g, max_order)
    if constraint is None:
        moments = trellis_moments(forward)
        if moments.normalized is None:
            raise ZeroFlowError(None, "total flow is zero")
        return moments.normalized
    depth, symbol = constraint
    backward = backward_numerators(trellis, g, max_order)
    sym = symbol_moments(trellis, g, forward, backward, depth, symbol)
    if sym.normalized is None:
        raise ZeroFlowError(
            None, f"no flow through c-label {symbol} at depth {depth}"
        )
    return sym.normalized


@dataclass(frozen=True)
class EntropyResult:
    """Conditional entropy of a code or subcode plus its ingredients."""

    entropy_bits: float
    first_moment: float
    constants: UncertaintyConstants
    log2_flow: float


def conditional_entropy_detail(
    trellis: Trellis,
    channel: ChannelModel,
    received: Sequence[float],
    constraint: Optional[tuple[int, float]] = None,
) -> EntropyResult:
    """Mean posterior uncertainty of the (sub)code given ``received``.

    The trellis lambda-labels must be the channel likelihoods of
    ``received`` (see channel_lambda_labels).  The uncertainty of each
    codeword is -log2 of its full-code posterior; with a constraint the
    average is taken under the posterior renormalized over the subcode.
    Everything is evaluated on the trellis: the affine
    uncertainty-correlation relation reduces the entropy to
    log2(flow) - K1b - K2 times the first correlation moment.
    """
    g = correlation_g_table(trellis, received)
    forward = forward_numerators(trellis, g, 1)
    moments = trellis_moments(forward)
    flow = moments.numerators[0]
    if flow <= 0.0:
        raise ZeroFlowError(None, "total flow is zero or negative")
    log2_flow = math.log2(flow)
    if constraint is None:
        first = moments.normalized[1]
    else:
        backward = backward_numerators(trellis, g, 1)
        sym = symbol_moments(trellis, g, forward, backward, *constraint)
        if sym.normalized is None:
            raise ZeroFlowError(
                None,
                f"no flow through c-label {constraint[1]} at depth "
                f"{constraint[0]}",
            )
        first = sym.normalized[1]
    constants = uncertainty_constants(channel, received, k1a=log2_flow)
    entropy = constants.k1 - constants.k2 * first
    return EntropyResult(entropy, first, constants, log2_flow)


def conditional_entropy(
    trellis: Trellis,
    channel: ChannelModel,
    received: Sequence[float],
    constraint: Optional[tuple[int, float]] = None,
) -> float:
    """Conditional entropy in bits; see conditional_entropy_detail."""
    return conditional_entropy_detail(
        trellis, channel, received, constraint
    ).entropy_bits


def symbol_probability(trellis: Trellis, depth: int, symbol: float) -> float:
    """Classical forward/backward symbol probability P(c_i = x | r).

    Pure order-0 (flow) computation on a likelihood-labeled trellis.
    """
    g = DepthFunctionTable.constant(trellis, 0.0)
    forward = forward_numerators(trellis, g, 0)
    backward = backward_numerators(trellis, g, 0)
    total = trellis_moments(forward).numerators[0]
    if total <= 0.0:
        raise ZeroFlowError(None, "total flow is zero or negative")
    sym = symbol_moments(trellis, g, forward, backward, depth, symbol)
    return sym.numerators[0] / total


# -- figure datasets ---------------------------------------------------------------


def correlation_symbol_curves(
    generators: Sequence[int],
    info_len: int,
    p: float,
    depth: int,
    seed: int,
) -> dict:
    """Weighted symbol distributions of c.r for one seeded BSC instance.

    Builds the terminated convolutional trellis, draws a transmit
    codeword and its BSC output from the seed, and returns, over the full
    correlation domain {-n..n}, the two curves
    P(c.r = u, c_i = +/-1 | r): the per-symbol value distributions scaled
    by the total flow.  Each curve sums to the symbol probability.
    """
    from .distributions import (
        backward_distributions,
        forward_distributions,
        symbol_distribution,
    )

    channel = Bsc(p)
    trellis = build_conv_trellis(generators, info_len)
    codeword, received = make_received(trellis, channel, seed)
    labeled = channel_lambda_labels(trellis, channel, received)
    g = correlation_g_table(labeled, received)

    flow = trellis_moments(
        forward_numerators(labeled, DepthFunctionTable.constant(labeled, 0.0), 0)
    ).numerators[0]
    fwd = forward_distributions(labeled, g, mode="exact")
    bwd = backward_distributions(labeled, g, mode="exact")
    plus = symbol_distribution(labeled, g, fwd, bwd, depth, 1.0)
    minus = symbol_distribution(labeled, g, fwd, bwd, depth, -1.0)
    return {
        "domain": list(plus.values()),
        "mass_plus": [w / flow for w in plus.mass],
        "mass_minus": [w / flow for w in minus.mass],
        "meta": {
            "seed": seed,
            "p": p,
            "generators_octal": [f"{g:o}" for g in generators],
            "info_len": info_len,
            "block_len": labeled.rank,
            "symbol_depth": depth,
            "transmitted": codeword,
            "received": received,
            "prob_plus": float(sum(plus.mass) / flow),
            "prob_minus": float(sum(minus.mass) / flow),
        },
    }


def correlation_distribution_with_gaussian(
    generators: Sequence[int],
    info_len: int,
    p: float,
    seed: int,
    cut: Optional[int] = None,
) -> dict:
    """Whole-code c.r distribution plus its matched-moment Gaussian.

    Returns the raw and normalized distribution over the correlation
    domain together with a Gaussian reference whose mean and variance
    equal the distribution's first two normalized moments.
    """
    from .distributions import (
        backward_distributions,
        forward_distributions,
        gaussian_lattice_mass,
        trellis_distribution,
    )

    channel = Bsc(p)
    trellis = build_conv_trellis(generators, info_len)
    codeword, received = make_received(trellis, channel, seed)
    labeled = channel_lambda_labels(trellis, channel, received)
    g = correlation_g_table(labeled, received)

    moments = trellis_moments(forward_numerators(labeled, g, 2))
    mean = moments.normalized[1]
    variance = moments.normalized[2] - mean * mean
    fwd = forward_distributions(labeled, g, mode="exact")
    bwd = backward_distributions(labeled, g, mode="exact")
    cut = labeled.rank // 2 if cut is None else cut
    dist = trellis_distribution(fwd, bwd, cut)
    total = dist.total()
    values = list(dist.values())
    return {
        "domain": values,
        "mass": list(dist.mass),
        "normalized_mass": [w / total for w in dist.mass],
        "gaussian_approx": gaussian_lattice_mass(
            values, dist.step, mean, variance
        ),
        "meta": {
            "seed": seed,
            "p": p,
            "generators_octal": [f"{g:o}" for g in generators],
            "info_len": info_len,
            "block_len": labeled.rank,
            "cut": cut,
            "transmitted": codeword,
            "received": received,
            "mean": mean,
            "variance": variance,
        },
    }
