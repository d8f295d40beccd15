"""QAOA Max-Cut circuits, exact quantum Fisher information, and QFI-informed mutation."""
from .errors import (
    CapacityError,
    ContractError,
    DegenerateMatrixError,
    InvalidInstanceError,
    NumericError,
    QaoaQfiError,
)
from .graphs import Graph, Topology, complete_graph, cyclic_graph, make_graph
from .qfi import (
    QfiSummary,
    averaged_qfi,
    covariance_fraction,
    derivative_state,
    eigen_extremes,
    qfi_fd_oracle,
    qfi_matrix,
    qgt,
)
from .qim import (
    MutationProfile,
    OptimizerConfig,
    RunRecord,
    Strategy,
    baseline_update,
    benchmark,
    expected_cut,
    mutation_profile,
    qim_update,
    run_optimizer,
)
from .simulator import (
    AnsatzSpec,
    EntPattern,
    Mixer,
    PauliSum,
    Statevector,
    apply_cnot,
    apply_pauli_sum,
    apply_rx,
    apply_ry,
    apply_rzz,
    plus_state,
    prepare_state,
)

__version__ = "0.1.0"
