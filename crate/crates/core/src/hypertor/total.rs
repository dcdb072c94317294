//! The total complex of `C_•(X_•) ⊗ K_•` and its homology, the hypertor of
//! the chain complex of modules.

use rayon::prelude::*;

use crate::complex::MultiFilteredComplex;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grading::{DegreeMultiset, Grid, MultiDegree};
use crate::linalg::Matrix;
use crate::persistence::{boundary_at, chains_module, PersistenceModule};
use crate::tor::{koszul_differential, KoszulLayout};

/// `C_0(X_•), …, C_top(X_•)`; empty for the empty complex.
pub fn chain_modules<F: Field>(x: &MultiFilteredComplex<F>) -> Vec<PersistenceModule<F>> {
    (0..x.dim().map_or(0, |d| d + 1)).map(|p| chains_module(x, p)).collect()
}

/// `∂ ⊗ id : K_q(C_p)(v) -> K_q(C_{p-1})(v)`, blockwise cellular boundary.
pub(crate) fn horizontal<F: Field>(
    x: &MultiFilteredComplex<F>,
    p: usize,
    q: usize,
    src: &KoszulLayout,
    tgt: &KoszulLayout,
) -> Matrix<F> {
    let mut out = Matrix::zeros(tgt.size(q), src.size(q));
    for b in src.blocks(q) {
        let t = tgt.block(q, b.mask).expect("same subsets are valid at the same degree");
        out.add_block(t.offset, b.offset, &boundary_at(x, p, &b.degree), F::one());
    }
    out
}

/// `Tot_ℓ(v) = ⊕_{p+q=ℓ} K_q(C_p)(v)`, ordered by `p`.
#[derive(Clone, Debug)]
pub struct TotalAt {
    pub v: MultiDegree,
    pub layouts: Vec<KoszulLayout>,
    offsets: Vec<Vec<usize>>,
    sizes: Vec<usize>,
}

impl TotalAt {
    pub fn new<F: Field>(chains: &[PersistenceModule<F>], v: &MultiDegree) -> Self {
        let n = v.n();
        let layouts: Vec<KoszulLayout> = chains.iter().map(|c| KoszulLayout::new(v, |u| c.dim(u))).collect();
        let top_l = (chains.len() + n).saturating_sub(1);
        let mut offsets = Vec::new();
        let mut sizes = Vec::new();
        for l in 0..=top_l {
            let mut off = Vec::with_capacity(chains.len());
            let mut acc = 0;
            for (p, lay) in layouts.iter().enumerate() {
                off.push(acc);
                if l >= p {
                    acc += lay.size(l - p);
                }
            }
            offsets.push(off);
            sizes.push(acc);
        }
        TotalAt { v: v.clone(), layouts, offsets, sizes }
    }

    /// Largest total index with a possibly nonzero term.
    pub fn top(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn size(&self, l: usize) -> usize {
        self.sizes.get(l).copied().unwrap_or(0)
    }

    /// Offset of the `K_{ℓ-p}(C_p)` part inside `Tot_ℓ`.
    pub fn offset(&self, l: usize, p: usize) -> usize {
        self.offsets[l][p]
    }

    /// `D = ∂ ⊗ id + (-1)^p id ⊗ δ : Tot_ℓ -> Tot_{ℓ-1}`.
    pub fn differential<F: Field>(
        &self,
        x: &MultiFilteredComplex<F>,
        chains: &[PersistenceModule<F>],
        l: usize,
    ) -> Matrix<F> {
        let rows = if l == 0 { 0 } else { self.size(l - 1) };
        let mut out = Matrix::zeros(rows, self.size(l));
        if l == 0 || l > self.top() {
            return out;
        }
        let n = self.v.n();
        for p in 0..chains.len().min(l + 1) {
            let q = l - p;
            if q > n {
                continue;
            }
            let col = self.offset(l, p);
            if p >= 1 {
                let h = horizontal(x, p, q, &self.layouts[p], &self.layouts[p - 1]);
                out.add_block(self.offset(l - 1, p - 1), col, &h, F::one());
            }
            if q >= 1 {
                let sign = if p % 2 == 0 { F::one() } else { -F::one() };
                let d = koszul_differential(&chains[p], &self.layouts[p], q);
                out.add_block(self.offset(l - 1, p), col, &d, sign);
            }
        }
        out
    }
}

/// Graded dimensions of `H_ℓ(Tot)` for `ℓ = 0, …, dim X + n`, on the grid
/// `[0, w+1]`. Checks `D ∘ D = 0` and that the outer layer is zero.
pub fn hypertor_dims<F: Field>(x: &MultiFilteredComplex<F>) -> Result<Vec<DegreeMultiset>> {
    let chains = chain_modules(x);
    let n = x.n();
    if chains.is_empty() {
        return Ok(vec![DegreeMultiset::new(); n + 1]);
    }
    let w = x.bound();
    let grid = Grid::new(w.plus(&MultiDegree::ones(n)));
    let points: Vec<MultiDegree> = grid.iter().collect();
    let per: Vec<Vec<usize>> = points
        .par_iter()
        .map(|v| {
            let tot = TotalAt::new(&chains, v);
            let ds: Vec<Matrix<F>> = (0..=tot.top() + 1).map(|l| tot.differential(x, &chains, l)).collect();
            for l in 1..tot.top() {
                if !ds[l].mul(&ds[l + 1]).is_zero() {
                    return Err(Error::internal(format!("D∘D ≠ 0 at {v}, index {l}")));
                }
            }
            let ranks: Vec<usize> = ds.iter().map(Matrix::rank).collect();
            Ok((0..=tot.top()).map(|l| tot.size(l) - ranks[l] - ranks[l + 1]).collect())
        })
        .collect::<Result<_>>()?;
    let top = per[0].len();
    let mut out = vec![DegreeMultiset::new(); top];
    for (v, dims) in points.iter().zip(&per) {
        for (l, &d) in dims.iter().enumerate() {
            if d > 0 {
                if (0..n).any(|i| v.get(i) > w.get(i)) {
                    return Err(Error::internal(format!("hypertor_{l} is nonzero at {v}, outside {w}")));
                }
                out[l].add(v.clone(), d);
            }
        }
    }
    Ok(out)
}
