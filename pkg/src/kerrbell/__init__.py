"""Non-destructive photonic Bell-state detection with weak cross-Kerr probes."""

from .errors import (
    InvalidSpec,
    KerrBellError,
    NotABellState,
    NotInQubitSpace,
    TruncationOverflow,
    ZeroDensity,
)
from .fock_core import (
    BASIS,
    BellLabel,
    SpatialFockState,
    TwoQubitState,
    apply_beam_splitter,
    apply_pauli,
    apply_phase_shift,
    bell_state,
    embed,
    extract,
    fidelity,
    overlap,
)
from .pointer import (
    PointerBranch,
    PointerDecomposition,
    apply_cross_kerr,
    attach_probe,
    collapse,
    density_grid,
    homodyne_density,
    sample_homodyne,
    x_overlap,
)
from .analyzers import (
    ANALYZER_WEIGHTS,
    DEMO_WEIGHTS,
    AnalyzerConfig,
    Classification,
    HomodyneResult,
    Symmetry,
    SymmetryOutcome,
    classify,
    error_probability,
    phase_phi,
    run_symmetry_analyzer,
    run_two_mode_demo,
    symmetry_pointer,
    two_mode_input,
    two_mode_pointer,
)
from .bell_detector import (
    DetectionPolicy,
    DetectionStep,
    DetectionTrace,
    bell_detect,
    ideal_label,
)
from .oracle import (
    OracleConfig,
    full_fock_collapse,
    full_fock_density,
    poisson_tail,
    quadrature_wavefunctions,
)

__version__ = "0.1.0"
