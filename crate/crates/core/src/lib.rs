//! Smith forms and equivalence certificates for multivariate polynomial
//! matrices whose determinant is a power of a univariate irreducible.

pub mod error;
pub mod generate;
pub mod ideal;
pub mod linsolve;
pub mod matrix;
pub mod poly;
pub mod reduce;
pub mod residue;

pub use error::{GenerateError, IdealError, MatrixError, PolyError, ReduceError, ResidueError};
pub use generate::{generate, GeneratedInstance, GeneratorConfig};
pub use ideal::{buchberger_with_lift, is_unit_ideal, normal_form, unit_combination, Budget, GroebnerBasis};
pub use matrix::{EquivCertificate, MinorReport, PolyMatrix, SmithFormData};
pub use poly::{Field, Monomial, Poly, PolyRing, PrimeField, Rationals, Ring, TermOrder, VarSet};
pub use residue::{BarMap, ModulusP};
pub use reduce::{
    attempt_diagonalize, check_conditions, check_hypothesis, complete_unimodular, compress_rect, extract_left_factor, smith_reduce,
    smith_reduce_traced, transport_automorphism, zlp_rank1_factorize, AutomorphismSpec, Rank1Factors, ReductionOutcome,
    SearchConfig,
};
