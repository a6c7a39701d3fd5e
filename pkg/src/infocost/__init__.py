"""infocost: maximum-entropy reference states, few-level open-quantum-system
trajectories, and information-cost bound verification."""

__version__ = "0.1.0"

from .qcore import (                                     # noqa: F401
    DensityMatrix,
    HermitianObservable,
    Spectrum,
    eigh,
    expectation,
    expm_hermitian,
    gibbs_state,
    kron,
    partial_trace,
    relative_entropy,
    variance,
    von_neumann_entropy,
)
from .maxent import (                                    # noqa: F401
    MaxEntState,
    ObservableSet,
    SolveReport,
    build_reference,
    entropy_gap,
    gaussian_reference,
    solve_multipliers,
    solve_reference,
)
from .dynamics import (                                  # noqa: F401
    BathSpectrum,
    Coupling,
    DrivenHamiltonian,
    JumpChannel,
    RedfieldModel,
    TimeGrid,
    Trajectory,
    dqd_model,
    erasure_model,
    evolve_closed,
    evolve_lindblad,
    evolve_redfield,
)
from .bounds import (                                    # noqa: F401
    ChargeBoundSeries,
    FluctuationBoundSeries,
    LandauerSeries,
    charge_bounds,
    fluctuation_bounds,
    fluctuation_identity_audit,
    identity_audit,
    landauer_lower_bound,
)
from .scenarios import (                                 # noqa: F401
    RunReport,
    SCENARIOS,
    ScenarioConfig,
    reset_example,
    run_scenario,
)
