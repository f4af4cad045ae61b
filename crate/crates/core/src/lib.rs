//! Exact reduction of simplex iterated integrals, shifted multiple harmonic
//! series, and generalized big zeta values to rational combinations of
//! multiple zeta values, with an independent numeric verifier.
//!
//! Layer map:
//! - [`exact`]: rationals, polynomials, partial fractions, harmonic numbers
//! - [`mzv`]: MZV indices, combinations, the stuffle product
//! - [`series`]: shifted multiple harmonic series and the chain-series engine
//! - [`words`]: iterated integrals of singular 1-forms, two independent reducers
//! - [`bigzeta`]: generalized big zeta values and their rewriting pipeline
//! - [`brown`]: Brown integrands, polylog/log integrands, Selberg Taylor coefficients
//! - [`numeric`]: certified MZV evaluation, brute-force sums, quadrature

pub mod bigzeta;
pub mod brown;
pub mod error;
pub mod exact;
pub mod mzv;
pub mod numeric;
pub mod series;
pub mod words;

pub use exact::{MPoly, PartialFractionTerm, PoleSpec, Poly, Rat};
pub use mzv::{is_admissible, stuffle, MzvCombination, MzvIndex};
pub use series::{
    degree_convergence, reduce_shifted, shifted_series_convergent, telescoped_sum, ResidueList,
    ShiftedSeries,
};
pub use words::{
    normalize_word, reduce_word_integral, reduce_word_series, word_convergent, DifferentialForm,
    UnivariateFactor, WordIntegral,
};
pub use bigzeta::{
    bigzeta_convergent, chamber_decompose, collapse_identical_rows, reduce_bigzeta, validate_quasi_basic,
    BigZetaTerm, Chamber, DiffOperator, HyperplaneTerm, QuasiBasicMatrix,
};
pub use brown::{
    brown_convergent, change_variables, reduce_brown, sign_normalize, BrownIntegrand,
};
pub use brown::polylog::{
    expand_polylog_integrand, shuffle_words, Anchor, ChamberSlot, DifferenceFactor, LiWord,
    PolylogChamber, PolylogMonomial,
};
pub use brown::selberg::{selberg_taylor_coefficient, SelbergMonomial, SelbergSpec};
pub use numeric::{
    brute_force_bigzeta, brute_force_shifted, combinations_agree, eval_combination, eval_mzv,
    quadrature_brown, quadrature_log_brown, NumericValue,
};
