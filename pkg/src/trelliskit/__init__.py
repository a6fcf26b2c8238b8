"""Trellis computations: flows, moments and distributions of separable
path functions over commutative semirings, with BSC/AWGN coding
applications (correlation moments, symbol probabilities, conditional
entropies)."""

from .errors import (
    ChannelError,
    GTableError,
    LatticeError,
    PathCountError,
    SemiringError,
    TrellisFormatError,
    TrellisStructureError,
    TrelliskitError,
    UnknownVertexError,
    ZeroFlowError,
)
from .semirings import (
    BOOLEAN,
    LOGREAL,
    MAXPROD,
    MAX_ORDER,
    REAL,
    SEMIRING_IDS,
    TROPICAL,
    SemiringSpec,
    binomial,
    get_semiring,
    nat_scale,
    power,
    semiring_binomial,
)
from .trellis import (
    DEFAULT_PATH_CAP,
    DepthFunctionTable,
    Edge,
    Trellis,
    Violation,
    degrees,
    dumps_trellis,
    enumerate_paths,
    loads_trellis,
    path_label,
    read_g_table,
    read_received,
    read_trellis,
    require_valid,
    split_multi_symbol_edges,
    validate,
    write_g_table,
    write_received,
    write_trellis,
)
from .moments import (
    JointMomentState,
    MomentState,
    NormalizedMomentState,
    OpCounter,
    SymbolMoments,
    TrellisMoments,
    backward_numerators,
    counted_run,
    counted_symbol_pass,
    forward_numerators,
    joint_forward_numerators,
    joint_trellis_moments,
    normalized_states,
    symbol_moments,
    trellis_moments,
)
from .distributions import (
    DistributionState,
    ExactDistribution,
    QuantizationParams,
    QuantizedDistribution,
    backward_distributions,
    convolve,
    forward_distributions,
    gaussian_lattice_mass,
    lattice_step,
    redistribute,
    shift,
    symbol_distribution,
    trellis_distribution,
)
from .codes import (
    Awgn,
    Bsc,
    ChannelModel,
    EntropyResult,
    UncertaintyConstants,
    build_conv_trellis,
    build_spc_trellis,
    channel_lambda_labels,
    conditional_entropy,
    conditional_entropy_detail,
    correlation_distribution_with_gaussian,
    correlation_g_table,
    correlation_moments,
    correlation_symbol_curves,
    edge_likelihood,
    make_received,
    parse_channel,
    parse_generators,
    random_codeword,
    symbol_probability,
    transmit,
    uncertainty_constants,
    word_uncertainty,
)

__version__ = "0.1.0"
