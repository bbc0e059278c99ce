"""lofix: bottom-up evaluation and verification for LO / LO1 programs.

The package decides provability for propositional LO by antichain
saturation, semi-decides LO1 by counting-constraint saturation, relates LO
to disjunctive logic programming through a set abstraction, and answers
Petri-net coverability queries by backward reachability.
"""

from .multiset import CountLimitError, Fact, Signature, enumerate_facts
from .syntax import (
    Atom,
    Clause,
    Context,
    Goal,
    LO,
    LO1,
    ONE,
    One,
    Par,
    ParseError,
    Program,
    TOP,
    Top,
    With,
    clause_to_text,
    goal_to_text,
    is_flat,
    parse_goal,
    parse_program,
    program_to_text,
)
from .ground import GroundInterp, lfp_bounded, sat_ground, tp_step
from .symbolic import (
    Antichain,
    SaturationResult,
    insert_minimal,
    judge,
    query,
    saturate,
    sp_step,
    subsumed,
)
from .constraints import (
    ConstraintSet,
    CountConstraint,
    EQ,
    FIXPOINT,
    GEQ,
    ITERATION_BOUND,
    Lo1Result,
    NOT_PROVABLE,
    PROVABLE,
    UNKNOWN,
    conj,
    entails,
    judge_one,
    member,
    query_one,
    saturate_one,
    set_subsumed,
    shift_down,
    shift_up,
    sp1_step,
)
from .prover import (
    DEPTH_LIMIT,
    EXHAUSTED,
    PROVED,
    ProofTree,
    ProveResult,
    check,
    prove,
    why_invalid,
)
from .dlp import (
    CompareReport,
    DlpClause,
    DlpProgram,
    REFUTED,
    SloResult,
    TranslationError,
    abstract,
    abstract_interp,
    compare,
    dlp_lfp,
    dlp_subsumed,
    minimize,
    parse_dlp,
    parse_dlp_goal,
    slo_refute,
    tpd_step,
    translate,
    untranslate,
)
from .petri import (
    COVERED,
    CoverResult,
    NOT_COVERED,
    NetFormatError,
    PetriNet,
    Transfer,
    Transition,
    cover,
    embed_marking,
    encode,
    forward_covers,
    forward_explore,
    parse_net,
)

__version__ = "0.1.0"
