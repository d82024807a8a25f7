//! A GF(2) linear-algebra and Reed-Muller-code laboratory.
//!
//! The crate provides bit-packed dense linear algebra over GF(2) and builds
//! a small coding-theory workbench on top of it: Reed-Muller evaluation
//! matrices and their duality, erasure and error channel models, exact
//! desk-scale oracles (pattern enumeration, weight distributions,
//! generalized Hamming weights), and seeded Monte-Carlo estimators whose
//! results are independent of the worker count.

pub mod bsc;
pub mod channel;
pub mod erasure;
mod error;
pub mod gf2;
pub mod rm;
pub mod spectrum;

pub use bsc::{
    affine_transform, check_erasures_to_errors, check_general_reduction, companion_matrix,
    companion_ub, exact_bad_fraction, mc_bsc_success, ml_decode, patterns_equiv,
    patterns_equiv_combinatorial, random_check_matrix, rm_syndrome, syndrome,
    unique_error_decodable, BscMethod, MlDecode, PointMatrix, ReductionReport, Syndrome,
};
pub use channel::{
    capacity_gap_threshold, entropy, inv_entropy, sample_pattern, sample_points_iid, splitmix64,
    trial_rng, CapacityRegime, CorruptionModel, Pattern,
};
pub use erasure::{
    decode_erasures, dual_rank_equivalence, erasure_correctable, exact_erasure_success,
    mc_erasure_success, mc_span_success, ErasedWord, ErasureDecode,
};
pub use error::LabError;
pub use gf2::{random_invertible, random_matrix, BitMatrix, BitVector};
pub use rm::{
    binom, binom_sum, eval_matrix, eval_matrix_lex, eval_vector, generator_tensor, monomials,
    monomials_lex, point_matrix, tensor_power, Monomial, RmCode,
};
pub use spectrum::{
    binomial_identity_check, bsc_union_bound, cumulative_w, enumerate_weights,
    estimation_small_r_check, gaussian_binomial, ghw, ghw_bruteforce, klp_bound, wei_rep,
    EstimationCheck, KlpBound, WeiRepresentation, WeightDistribution,
};
