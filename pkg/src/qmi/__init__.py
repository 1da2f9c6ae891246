"""Numerics toolkit for entropy continuity bounds on finite-dimensional
quantum states, with a squashed-entanglement estimator and seeded
verification harnesses."""

__version__ = "0.1.0"

from .ensembles import (
    DEFAULT_SEED,
    EnsembleSpec,
    haar_pure,
    haar_unitary,
    induced_mixed,
    perturbation_pair,
    rank_limited,
    stream,
)
from .entropy import (
    EntropyValue,
    cond_entropy_continuity_bound,
    conditional_entropy,
    conditional_mutual_information,
    entropy_continuity_bound,
    eta,
    mixture_cond_entropy_bound,
    support_span_dim,
    trace_distance,
    von_neumann_entropy,
)
from .errors import (
    BadTraceError,
    BoundInapplicableError,
    DegenerateCaseError,
    DimensionMismatchError,
    EigensolverError,
    IsometryError,
    NegativeCMIError,
    NotHermitianError,
    NotPositiveError,
    OutOfRegimeError,
    QmiError,
    StateFileError,
)
from .qmat import (
    DensityMatrix,
    HermitianOperator,
    Spectrum,
    embed,
    herm_eigen,
    identity,
    kron,
    operator_abs,
    partial_trace,
    permute_systems,
    positive_negative_parts,
    trace_norm,
    validate_density,
    with_dims,
)
from .squashed import (
    EsqEstimate,
    ExtensionParams,
    esq_continuity_probe,
    estimate_esq,
    extend,
    lift_params,
    purify,
)
from .stateio import (
    bell,
    builtin_state,
    classical_corr,
    ghz,
    load_state,
    maxmix,
    resolve_state,
    save_state,
)
from .thales import (
    AssemblyReport,
    LemmaChainReport,
    ThalesDecomposition,
    check_lemma_chain,
    check_theorem_assembly,
    decompose,
    mixture_residuals,
)
from .verify import (
    SweepReport,
    TightnessReport,
    TrialReport,
    dim_sweep,
    entropy_continuity_trials,
    run_lemma_trials,
    run_theorem_trials,
    tightness_probe,
)
