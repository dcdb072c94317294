//! Degreewise Koszul complexes `K_j(v) = ⊕_{|S|=j} M_{v-e_S}` and their
//! homology `Tor_j(M, k)_v`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grading::{subsets, DegreeMultiset, Grid, MultiDegree};
use crate::linalg::Matrix;
use crate::persistence::{PersistenceModule, Quotient};

/// One summand `e_S ⊗ M_{v-e_S}` of a Koszul space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KBlock {
    pub mask: u32,
    pub degree: MultiDegree,
    pub offset: usize,
    pub dim: usize,
}

/// Block structure of `K_0(v), …, K_n(v)`. Subsets `S` with `v - e_S`
/// leaving `ℕⁿ` contribute nothing and are omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulLayout {
    v: MultiDegree,
    levels: Vec<Vec<KBlock>>,
    sizes: Vec<usize>,
}

impl KoszulLayout {
    pub fn new(v: &MultiDegree, dim: impl Fn(&MultiDegree) -> usize) -> Self {
        let n = v.n();
        let mut levels = Vec::with_capacity(n + 1);
        let mut sizes = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let mut offset = 0;
            let mut blocks = Vec::new();
            for mask in subsets(n, j) {
                if let Some(degree) = v.minus_subset(mask) {
                    let d = dim(&degree);
                    blocks.push(KBlock { mask, degree, offset, dim: d });
                    offset += d;
                }
            }
            levels.push(blocks);
            sizes.push(offset);
        }
        KoszulLayout { v: v.clone(), levels, sizes }
    }

    pub fn degree(&self) -> &MultiDegree {
        &self.v
    }

    pub fn n(&self) -> usize {
        self.v.n()
    }

    /// `dim K_j(v)`; zero for `j > n`.
    pub fn size(&self, j: usize) -> usize {
        self.sizes.get(j).copied().unwrap_or(0)
    }

    pub fn blocks(&self, j: usize) -> &[KBlock] {
        self.levels.get(j).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn block(&self, j: usize, mask: u32) -> Option<&KBlock> {
        self.blocks(j).iter().find(|b| b.mask == mask)
    }
}

/// `(-1)^{pos(t,S)}` with `pos` the 0-based position of `t` in `S`.
pub fn koszul_sign<F: Field>(mask: u32, t: usize) -> F {
    let pos = (mask & ((1u32 << t) - 1)).count_ones();
    if pos.is_multiple_of(2) {
        F::one()
    } else {
        -F::one()
    }
}

/// `δ_j : K_j(v) -> K_{j-1}(v)`,
/// `δ(e_S ⊗ m) = Σ_{t∈S} (-1)^{pos(t,S)} e_{S∖t} ⊗ step_t(m)`.
pub fn koszul_differential<F: Field>(m: &PersistenceModule<F>, layout: &KoszulLayout, j: usize) -> Matrix<F> {
    let rows = if j == 0 { 0 } else { layout.size(j - 1) };
    let mut out = Matrix::zeros(rows, layout.size(j));
    if j == 0 || j > layout.n() {
        return out;
    }
    for src in layout.blocks(j) {
        for t in 0..layout.n() {
            if src.mask & (1 << t) == 0 {
                continue;
            }
            let tgt = layout.block(j - 1, src.mask & !(1 << t)).expect("faces of valid blocks are valid");
            let step = m.step(&src.degree, t);
            let sign: F = koszul_sign(src.mask, t);
            for r in 0..step.rows() {
                for c in 0..step.cols() {
                    let x = step[(r, c)];
                    if !x.is_zero() {
                        out.add_at(tgt.offset + r, src.offset + c, sign * x);
                    }
                }
            }
        }
    }
    out
}

/// `Tor_j(M,k)_v` with canonical class representatives.
#[derive(Clone, Debug)]
pub struct TorAt<F> {
    pub layout: KoszulLayout,
    pub quotient: Quotient<F>,
}

/// `Tor_j(M,k)` on the grid `[0, w+1]`.
#[derive(Clone, Debug)]
pub struct TorGroup<F> {
    pub j: usize,
    grid: Grid,
    at: Vec<TorAt<F>>,
}

impl<F: Field> TorGroup<F> {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn at(&self, v: &MultiDegree) -> Option<&TorAt<F>> {
        self.grid.contains(v).then(|| &self.at[self.grid.index(v)])
    }

    pub fn dim(&self, v: &MultiDegree) -> usize {
        self.at(v).map_or(0, |t| t.quotient.dim())
    }

    /// `ξ_j`: graded dimensions.
    pub fn xi(&self) -> DegreeMultiset {
        DegreeMultiset::from_pairs(
            self.grid.iter().zip(&self.at).map(|(v, t)| (v, t.quotient.dim())).filter(|(_, d)| *d > 0),
        )
    }

    /// Degrees carrying classes, in grid order.
    pub fn support(&self) -> Vec<MultiDegree> {
        self.grid.iter().zip(&self.at).filter(|(_, t)| t.quotient.dim() > 0).map(|(v, _)| v).collect()
    }

    /// Total dimension over all degrees.
    pub fn total(&self) -> usize {
        self.at.iter().map(|t| t.quotient.dim()).sum()
    }
}

/// Homology of the Koszul complex at `v`, representatives chosen as the RREF
/// complement of `im δ_{j+1}` in `ker δ_j`.
pub fn tor_at<F: Field>(m: &PersistenceModule<F>, j: usize, v: &MultiDegree) -> TorAt<F> {
    let layout = KoszulLayout::new(v, |u| m.dim(u));
    let ker = koszul_differential(m, &layout, j).kernel_basis();
    let im = if j < layout.n() {
        koszul_differential(m, &layout, j + 1).column_space()
    } else {
        Matrix::zeros(0, layout.size(j))
    };
    TorAt { quotient: Quotient::new(&im, &ker), layout }
}

/// `Tor_j(M,k)` for every `v ≲ w + (1,…,1)`. Errors if the outermost layer
/// carries a class, which would mean the grid bound is too small.
pub fn koszul_tor<F: Field>(m: &PersistenceModule<F>, j: usize) -> Result<TorGroup<F>> {
    let n = m.n();
    assert!(j <= n, "Tor_{j} requested for n = {n}");
    let w = m.bound();
    let grid = Grid::new(w.plus(&MultiDegree::ones(n)));
    let points: Vec<MultiDegree> = grid.iter().collect();
    let at: Vec<TorAt<F>> = points.par_iter().map(|v| tor_at(m, j, v)).collect();
    for (v, t) in points.iter().zip(&at) {
        if t.quotient.dim() > 0 && (0..n).any(|i| v.get(i) > w.get(i)) {
            return Err(Error::internal(format!("Tor_{j} is nonzero at {v}, outside the bound {w}")));
        }
    }
    Ok(TorGroup { j, grid, at })
}
