"""vortexel: transition matrix elements, orbital-angular-momentum selection
rules and magnetic dichroism for Bessel electron-vortex beams interacting
with hydrogenic targets.  Hartree atomic units throughout."""

__version__ = "0.1.0"

from .dichroism import (
    DichroismReport,
    SublevelDOS,
    TargetFamily,
    dichroic_signal,
    family_amplitudes,
    transition_rate,
)
from .kernels import (
    COULOMB,
    DIPOLE,
    CylPoint,
    GeometricFactors,
    KernelKind,
    SingularGeometryError,
    SingularPointError,
    SphPoint,
    coulomb_kernel,
    decomposed_dipole_kernel,
    dipole_kernel,
    extract_geometric_factors,
    y_alpha,
    y_alpha_elliptic,
)
from .matelem import (
    ChannelAmplitudes,
    MatrixElement,
    NonConvergence,
    QuadratureConfig,
    ScanEntry,
    SelectionChannel,
    Transition,
    channel_amplitudes,
    classify_channel,
    compute_matrix_element,
    selection_scan,
)
from .specfun import (
    RadialQuantumNumbers,
    bessel_j,
    elliptic_ek,
    hydrogenic_radial,
    spherical_harmonic,
)
from .states import (
    BeamState,
    CenterOfMassState,
    CompositeState,
    InternalState,
    beam_amplitude,
    cm_amplitude,
    internal_amplitude,
)

__all__ = [
    "__version__",
    "BeamState",
    "CenterOfMassState",
    "ChannelAmplitudes",
    "CompositeState",
    "COULOMB",
    "CylPoint",
    "DichroismReport",
    "DIPOLE",
    "GeometricFactors",
    "InternalState",
    "KernelKind",
    "MatrixElement",
    "NonConvergence",
    "QuadratureConfig",
    "RadialQuantumNumbers",
    "ScanEntry",
    "SelectionChannel",
    "SingularGeometryError",
    "SingularPointError",
    "SphPoint",
    "SublevelDOS",
    "TargetFamily",
    "Transition",
    "beam_amplitude",
    "bessel_j",
    "channel_amplitudes",
    "classify_channel",
    "cm_amplitude",
    "compute_matrix_element",
    "coulomb_kernel",
    "decomposed_dipole_kernel",
    "dichroic_signal",
    "dipole_kernel",
    "elliptic_ek",
    "extract_geometric_factors",
    "family_amplitudes",
    "hydrogenic_radial",
    "internal_amplitude",
    "selection_scan",
    "spherical_harmonic",
    "transition_rate",
    "y_alpha",
    "y_alpha_elliptic",
]
