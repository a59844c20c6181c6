"""Two-community k-uniform hypergraph stochastic block model toolkit."""
from .core import (EdgeClass, Hypergraph, ModelParams, PartitionVector, classify_edge,
                   derive_probabilities, sample_hypergraph, sample_partition)
from .certificate import CertificateReport, certify, eig_sym, EigenRequest
from .errors import (Asymmetric, DegenerateModel, EigFailure, HSBMError, InvalidParams,
                     InvalidSpec, OutOfRange, TooLarge)
from .estimators import (EstimateResult, ml_bruteforce, spectral_bisection, trunc_bruteforce,
                         trunc_local_search)
from .experiment import CellResult, ExperimentConfig, TrialRecord, phase_diagram, run_trial
from .graph_ops import (WeightedGraph, hamming_error, in_cluster_score, laplacian, projector,
                        quadratic_score, signed_laplacian, weighted_projection)
from .thresholds import (TailSpec, exponent_I, exponent_I2, exponent_Isdp, generic_exponent,
                         tail_oracle_exact, threshold_values)

__version__ = "0.1.0"
