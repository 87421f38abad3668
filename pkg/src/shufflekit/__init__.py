"""Shuffle-operation decision procedures over automata and counter machines.

The package is organised by machine class and pipeline:

- ``fa``: NFAs/DFAs and the regular-language algebra
- ``shuffle``: interleaving constructions on words and regular languages
- ``pushdown``: NPDA/DPDA machinery (grammar membership, emptiness, complement)
- ``counters``: reversal-bounded counter machines and their constructions
- ``semilinear``: linear/semilinear sets and Parikh images
- ``decide``: the top-level decision procedures
- ``reductions``: executable hardness reductions with brute-force verification
- ``decompose``: shuffle-decomposition extraction for acyclic automata
- ``jsonio``: the JSON document formats
- ``fixtures``: the shipped example machines
- ``cli``: the command-line surface
"""

from .counters import (
    Dcm,
    Ncm,
    check_complete_halting,
    cm_accepts,
    cm_is_empty,
    cm_product,
    cm_shuffle,
    dcm_complement,
    normalize_reversals,
)
from .decide import (
    comm_semilinear_shuffle_superset,
    disjoint_alphabet_dcm_shuffle_superset,
    finite_shuffle_npda_noninclusion,
    lang_equals_word_shuffle,
    lang_subset_word_shuffle,
    shuffle_inclusion_ncm_dcm,
    shuffle_inclusion_regular_dpda,
    unary_finite_shuffle_inclusion,
    word_shuffle_subset_lang,
)
from .decompose import NotDecomposable, decompose, extract_candidate, verify_word_decomposition
from .errors import ContractError, InputError, ResourceLimitError, ShuffleKitError
from .fa import (
    Dfa,
    Nfa,
    accepts,
    complement,
    determinize,
    eliminate_eps,
    equivalent,
    intersect,
    is_acyclic,
    is_empty,
    is_universal,
    on_common_alphabet,
    pad_alphabet,
    trim,
    union,
    word_nfa,
)
from .outcome import DecisionOutcome
from .pushdown import (
    Dpda,
    Npda,
    dpda_complement,
    npda_accepts,
    npda_is_empty,
    product_nfa_npda,
)
from .reductions import (
    Cnf3,
    dfa_noninclusion_to_inequality,
    encode_b,
    parse_dimacs,
    sat_brute_force,
    sat_to_shuffle_noninclusion,
    verify_reduction,
)
from .semilinear import (
    LinearSet,
    SemilinearSet,
    comm_membership,
    nfa_parikh_image,
    parikh,
    sl_membership,
    sl_sum,
)
from .shuffle import (
    enumerate_shuffle,
    is_dfa_when_disjoint,
    naive_shuffle_nfa,
    shuffle_nfas,
    word_in_shuffle,
)
from .words import EPSILON, END_MARKER, Word, as_word, fmt_word

__version__ = "0.1.0"
