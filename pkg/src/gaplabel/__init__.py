"""Exact winding-rate groups for affine systems on compact abelian groups,
with numerical gap labelling of the associated ergodic Jacobi operators."""

from .intlin import (
    IntMatrix,
    LatticeBasis,
    hermite_normal_form,
    integer_kernel,
    lattice_contains,
    smith_normal_form,
)
from .jacobi import (
    CoefficientSpec,
    Gap,
    JacobiTruncation,
    ScanResult,
    SpectralReport,
    TableObservable,
    TrigPolynomial,
    build_truncation,
    connectedness_scan,
    detect_gaps,
    eig_count_leq,
    eigenvalues,
    ids,
    ids_curve,
    make_spectral_report,
    verify_labels,
)
from .schwartzman import (
    FiniteCharacter,
    LabelGroup,
    MembershipVerdict,
    OrbitWindingObservable,
    SuspensionObservable,
    TorusCharacter,
    contains,
    dyadic_fixed_character_sweep,
    finite_label_group,
    finite_rhs_group,
    fixed_character_lattice,
    group_for_system,
    label_group,
    schwartzman_estimate,
    solenoid_fixed_dual,
    solenoid_label_group,
    suspension_observable,
)
from .solenoid import (
    Dyadic,
    SolPointS1,
    SolPointS2,
    SolPointS3,
    conj_g,
    conj_h,
    double,
    sample_solenoid,
)
from .systems import (
    CircleDoublingSystem,
    FiniteCyclicSystem,
    NonInvertibleSystemError,
    OrbitSample,
    TorusAffineSystem,
    inverse_step,
    orbit,
    sample_ergodic,
    step,
    window_orbit,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
