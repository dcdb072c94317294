//! Hypertor of `C_•(X_•)`, both spectral sequence pages, `d²`, and the
//! homology-recovery complex `T_•`.

mod d2;
mod e1;
mod tcomplex;
mod total;

pub use d2::{d2, d2_randomized, D2Map};
pub use e1::{d1_at, e1_page, E1Page};
pub use tcomplex::{build_t_complex, recovered_homology, t_complex_unchecked, RecoveryReport, TBasis, TComplex};
pub use total::{chain_modules, hypertor_dims, TotalAt};
