"""Sparse state-vector toolkit for small labeled quantum systems.

Registers hold named subsystems with named basis labels; states are sparse
complex maps over joint assignments.  Evolution primitives (splits,
rotations, basis changes, conditional relabels and phases) are unitary and
exactly reversible through an operation log.  Measurement utilities cover
Born statistics, projections, postselection, partial-strength couplings,
and pointer-based weak readout; entanglement utilities cover Schmidt
spectra and entropies.  A scenario catalog packages multi-stage thought
experiments behind one reporting interface and a CLI.
"""

from .entangle import (
    DensityMatrix,
    SchmidtSpectrum,
    cut_entropy,
    entropy,
    is_product,
    partial_trace,
    schmidt,
)
from .errors import ImpossibleOutcomeError, ParameterError
from .evolve import (
    OpLog,
    apply_basis_change,
    apply_rotation,
    apply_split,
    controlled_phase,
    controlled_relabel,
    recombine_probability,
    time_reverse,
)
from .grid import (
    DickeParams,
    GridWavefunction,
    dicke_domain,
    dicke_grid_size,
    gaussian_packet,
    gaussian_superposition,
    moments,
    momentum_spectrum,
    translate,
    window_project,
)
from .measure import (
    MeasurementRecord,
    PartialStrength,
    WeakParams,
    apply_partial_outcome,
    born_probabilities,
    erase_partial,
    joint_probability,
    make_pointer,
    partial_measure,
    postselect,
    postselect_out,
    project,
    read_pointer,
    sample_measure,
    weak_measure,
)
from .register import (
    Register,
    StateVector,
    SubsystemSpec,
    amplitude,
    fidelity,
    new_register,
    overlap,
    superpose,
)
from .scenarios import StepFailure, list_scenarios, run_scenario

__all__ = [
    "DensityMatrix",
    "DickeParams",
    "GridWavefunction",
    "ImpossibleOutcomeError",
    "MeasurementRecord",
    "OpLog",
    "ParameterError",
    "PartialStrength",
    "Register",
    "SchmidtSpectrum",
    "StateVector",
    "StepFailure",
    "SubsystemSpec",
    "WeakParams",
    "amplitude",
    "apply_basis_change",
    "apply_partial_outcome",
    "apply_rotation",
    "apply_split",
    "born_probabilities",
    "controlled_phase",
    "controlled_relabel",
    "cut_entropy",
    "dicke_domain",
    "dicke_grid_size",
    "entropy",
    "erase_partial",
    "fidelity",
    "gaussian_packet",
    "gaussian_superposition",
    "is_product",
    "joint_probability",
    "list_scenarios",
    "make_pointer",
    "moments",
    "momentum_spectrum",
    "new_register",
    "overlap",
    "partial_measure",
    "partial_trace",
    "postselect",
    "postselect_out",
    "project",
    "read_pointer",
    "recombine_probability",
    "run_scenario",
    "sample_measure",
    "schmidt",
    "superpose",
    "time_reverse",
    "translate",
    "weak_measure",
    "window_project",
]

__version__ = "0.1.0"
