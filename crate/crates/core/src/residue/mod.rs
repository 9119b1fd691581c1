//! The residue field `K[x1]/<p>` and the reduction map onto
//! `(K[x1]/<p>)[x2, ..., xn]`.

mod bar;
mod field;
mod modulus;

pub use bar::{BarMap, BarPoly};
pub use field::ResidueField;
pub use modulus::{irreducibility_witness, Irreducibility, ModulusP, Witness, WITNESS_PRIME_BOUND};
