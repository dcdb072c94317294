//! `GL(F(ξ₀))`: invertible matrices `C` with `C[j][i] ≠ 0` only when
//! generator `j` is born no later than generator `i`.

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::linalg::Matrix;

use super::family::{RelationFamily, RelationShape};

/// An automorphism of `F(ξ₀)`. Column `i` is the image of generator `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement<F> {
    matrix: Matrix<F>,
}

impl<F: FiniteField> GroupElement<F> {
    pub fn new(shape: &RelationShape, matrix: Matrix<F>) -> Result<Self> {
        let g = shape.generators();
        if matrix.rows() != g.len() || matrix.cols() != g.len() {
            return Err(Error::Validation(format!("group element must be {0}×{0}", g.len())));
        }
        for j in 0..g.len() {
            for i in 0..g.len() {
                if !matrix[(j, i)].is_zero() && !g[j].le_unchecked(&g[i]) {
                    return Err(Error::Validation(format!(
                        "entry ({j},{i}) maps a generator at {} to one born later at {}",
                        g[i], g[j]
                    )));
                }
            }
        }
        if matrix.rank() != g.len() {
            return Err(Error::Validation("group element is singular".into()));
        }
        Ok(GroupElement { matrix })
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    /// `μ · {V_v} = {μ_v V_v}`, where `μ_v` is `C` on the generators alive at `v`.
    pub fn act(&self, shape: &RelationShape, family: &RelationFamily<F>) -> RelationFamily<F> {
        let subspaces = family
            .subspaces
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let a = shape.alive(k);
                let mu = self.matrix.select_rows(a).select_cols(a);
                v.mul(&mu.transpose()).row_space()
            })
            .collect();
        RelationFamily { subspaces }
    }
}

/// Scaling one generator by a primitive element, and `e_i ↦ e_i + e_j` for
/// every ordered pair with `deg e_j ≲ deg e_i`.
pub fn group_generators<F: FiniteField>(shape: &RelationShape) -> Vec<GroupElement<F>> {
    let g = shape.generators();
    let mut out = Vec::new();
    if F::order() > 2 {
        for i in 0..g.len() {
            let mut m = Matrix::identity(g.len());
            m.set(i, i, F::primitive_element());
            out.push(GroupElement { matrix: m });
        }
    }
    for i in 0..g.len() {
        for j in 0..g.len() {
            if i != j && g[j].le_unchecked(&g[i]) {
                let mut m = Matrix::identity(g.len());
                m.set(j, i, F::one());
                out.push(GroupElement { matrix: m });
            }
        }
    }
    out
}
