"""editsketch: k-error pattern matching, occurrence sketches, and string
compressibility primitives."""

from .alignment import (
    Alignment,
    CostedOccurrence,
    EditInfo,
    alignment_cost,
    align_image,
    compose,
    edit_info,
    identity_alignment,
    inverse,
    reconstruct_alignment,
    validate,
)
from .analysis import Decomposition, analyze, delta_sign, find_region_prefix, verify_decomposition
from .compress import LZFactorization, SelfEdResult, lz77, lz_bounded_prefix, selfed
from .distance import (
    ed_periodic,
    edit_distance_bounded,
    edit_distance_full,
    occ_edits_oracle,
    optimal_alignment,
    prefix_min_edit,
    suffix_min_edit,
)
from .matcher import (
    CandidateSet,
    candidates_breaks,
    candidates_periodic,
    candidates_regions,
    find_occurrences,
    match_banded,
    verify_candidates,
)
from .sketch import (
    LowerBoundInstance,
    Sketch,
    decode,
    encode,
    gen_lower_bound,
    recover_planted,
    sketch_size_bits,
)
from .strings import exact_occurrences, is_primitive, occ_gcd_period, per
from .symbols import Fragment, S, Str, from_bytes, from_tokens

__version__ = "0.1.0"

__all__ = [
    "Alignment",
    "CandidateSet",
    "CostedOccurrence",
    "Decomposition",
    "EditInfo",
    "Fragment",
    "LZFactorization",
    "LowerBoundInstance",
    "S",
    "SelfEdResult",
    "Sketch",
    "Str",
    "align_image",
    "alignment_cost",
    "analyze",
    "candidates_breaks",
    "candidates_periodic",
    "candidates_regions",
    "compose",
    "decode",
    "delta_sign",
    "ed_periodic",
    "edit_distance_bounded",
    "edit_distance_full",
    "edit_info",
    "encode",
    "exact_occurrences",
    "find_occurrences",
    "find_region_prefix",
    "from_bytes",
    "from_tokens",
    "gen_lower_bound",
    "identity_alignment",
    "inverse",
    "is_primitive",
    "lz77",
    "lz_bounded_prefix",
    "match_banded",
    "occ_edits_oracle",
    "occ_gcd_period",
    "optimal_alignment",
    "per",
    "prefix_min_edit",
    "recover_planted",
    "reconstruct_alignment",
    "selfed",
    "sketch_size_bits",
    "suffix_min_edit",
    "validate",
    "verify_candidates",
    "verify_decomposition",
]
