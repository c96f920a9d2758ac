pub mod exponent;
pub mod rat;
pub mod mollify;
pub mod sim;
pub mod spectral;

pub use exponent::{
    beltrami_verdict, best_product_exponent, bootstrap_trace, check_energy_criterion,
    constant_lambda_verdict, embedding_exponents, interpolation_theta, product_admissible,
    BootstrapTrace, ExponentError, MixedNorm, Outcome, ProductQuery, ProductResult,
    RegularityIndex, Verdict,
};
pub use rat::{ExtRat, Rat};
