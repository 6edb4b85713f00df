"""Exact synthesis of diagonal unitaries into rotations and controlled flips."""
from .core import (
    BitVector,
    Circuit,
    ControlFlip,
    DegenerateSequenceError,
    DiagSynthError,
    GlobalPhase,
    PhaseVector,
    Rotation,
    bit_of,
    index_to_rho,
    pad_phases,
    rho_to_index,
)
from .diagram import gap_stats, render_svg, render_text
from .rmatrix import (
    SignMatrix,
    apply_r,
    build_r,
    fast_apply_transpose,
    invert_r,
    kron_column_permutation,
)
from .sequences import (
    ControlSequence,
    GeneralControlSequence,
    ValidityReport,
    constant_gap_sequence,
    lift,
    nested_copy_sequence,
    parity_trace,
    pbt_sequence,
    permute_rows,
    validate,
)
from .simulate import (
    MonomialOperator,
    compose,
    dense_matrix,
    evaluate,
    gate_to_monomial,
    max_phase_error,
    tail_block_angles,
)
from .synthesis import (
    LevelSplit,
    SequencePlan,
    build_tail,
    decompose,
    export_qasm,
    family_plan,
    gate_counts,
    split_level,
)

__version__ = "0.1.0"
