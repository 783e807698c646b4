"""Sum-networks whose achievable rate depends on the field characteristic.

Parametric network builders, the capacity-achieving fractional linear
codes, a transfer-matrix verifier, composite-encoding search, and
rank-counting bound certificates over prime fields.
"""

from .analysis import (
    BoundReport,
    BudgetExceededError,
    CompositeEncoding,
    DecodeResult,
    Exhaustive,
    Random,
    SearchResult,
    bound_check,
    capacity,
    composites_from_code,
    feasible_decoders,
    search,
    wrong_char_bound,
)
from .coding import (
    CharacteristicError,
    CodeFormatError,
    FracLinCode,
    TransferMap,
    UnsupportedNetworkError,
    UnverifiedCodeError,
    VerifyReport,
    code_from_json,
    code_to_json,
    routing_code,
    scheme_merged,
    scheme_n1,
    scheme_n2,
    transfer,
    unroll_merged,
    verify,
)
from .constructions import (
    IN_SET,
    NOT_IN_SET,
    N1Params,
    N2Params,
    RateTarget,
    build_bottleneck2,
    build_for_rate,
    build_n1,
    build_n2,
    k_copy_merge,
    n1_counts,
    n2_counts,
)
from .galois import Felt, FieldMismatchError, PrimeField
from .kernels import backend_name
from .matrix import Mat, hstack, matmul, rank, solve_right, vstack
from .network import (
    CycleError,
    Edge,
    NetworkFormatError,
    Node,
    SumNetwork,
    deserialize,
    serialize,
    to_dot,
    topo_order,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "BudgetExceededError",
    "CharacteristicError",
    "CodeFormatError",
    "CompositeEncoding",
    "CycleError",
    "DecodeResult",
    "Edge",
    "Exhaustive",
    "Felt",
    "FieldMismatchError",
    "FracLinCode",
    "IN_SET",
    "Mat",
    "N1Params",
    "N2Params",
    "NetworkFormatError",
    "Node",
    "NOT_IN_SET",
    "PrimeField",
    "Random",
    "RateTarget",
    "SearchResult",
    "SumNetwork",
    "TransferMap",
    "UnsupportedNetworkError",
    "UnverifiedCodeError",
    "VerifyReport",
    "backend_name",
    "bound_check",
    "build_bottleneck2",
    "build_for_rate",
    "build_n1",
    "build_n2",
    "capacity",
    "code_from_json",
    "code_to_json",
    "composites_from_code",
    "deserialize",
    "feasible_decoders",
    "hstack",
    "k_copy_merge",
    "matmul",
    "n1_counts",
    "n2_counts",
    "rank",
    "routing_code",
    "scheme_merged",
    "scheme_n1",
    "scheme_n2",
    "search",
    "serialize",
    "solve_right",
    "to_dot",
    "topo_order",
    "transfer",
    "unroll_merged",
    "validate",
    "verify",
    "vstack",
    "wrong_char_bound",
]
