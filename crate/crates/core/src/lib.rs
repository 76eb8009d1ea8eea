//! Generalized information theory: semantic information measures built on
//! truth functions, the entropies they induce, and the rate-fidelity function.
//!
//! All information quantities are in bits.

pub mod entropies;
pub mod error;
pub mod experiments;
pub mod prob;
pub mod rate_fidelity;
pub mod semantic;

pub use entropies::{GeneralizedEntropies, SemanticSystem};
pub use error::{Error, Result};
pub use prob::{
    cross_entropy, kl_divergence, normalize, shannon_info, shannon_mutual_info, Alphabet, Channel,
    Distribution,
};
pub use rate_fidelity::{
    average_distortion, brute_force_r_of_g, payoff_matrix, rate_distortion_curve,
    rate_distortion_curve_with, rate_fidelity_curve, rate_fidelity_curve_with, solve_point,
    solve_point_with, DistortionMatrix, DistortionPoint, PayoffMatrix, RateFidelityPoint,
    SolverOptions,
};
pub use semantic::{
    gaussian_truth, generalized_cond_entropy, generalized_kullback, logical_probability,
    select_best, semantic_info, semantic_info_gaussian, semantic_posterior, translate_select,
    Clamp, Gaussian, Selection, SemanticChannel, TruthFunction, DEFAULT_EPSILON,
};
