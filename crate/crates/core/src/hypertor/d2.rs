//! The differential `d² : Tor_2(H_q(X_•), k) -> Tor_0(H_{q+1}(X_•), k)` by a
//! zig-zag through the double complex.
//!
//! For a class `[x]` with Koszul representative `x`, lift `x` to chains `c`,
//! solve `∂w = -δc` and return the class of `δw`. This is `d²[x] = [δy]`
//! with `∂y = -δx`, the formula for a double complex whose two differentials
//! anticommute.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::complex::MultiFilteredComplex;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grading::MultiDegree;
use crate::linalg::Matrix;
use crate::persistence::{boundary_at, chains_module, homology_module, PersistenceModule};
use crate::tor::{koszul_differential, koszul_tor, KoszulLayout};

/// Block-diagonal matrix of `d²`, with the degree of every row and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D2Map<F> {
    pub q: usize,
    pub rows: Vec<MultiDegree>,
    pub cols: Vec<MultiDegree>,
    pub matrix: Matrix<F>,
}

impl<F: Field> D2Map<F> {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Rank of the block at `v`.
    pub fn rank_at(&self, v: &MultiDegree) -> usize {
        let r: Vec<usize> = (0..self.rows.len()).filter(|&i| &self.rows[i] == v).collect();
        let c: Vec<usize> = (0..self.cols.len()).filter(|&i| &self.cols[i] == v).collect();
        self.matrix.select_rows(&r).select_cols(&c).rank()
    }
}

fn random_vec<F: Field>(rng: &mut StdRng, len: usize) -> Vec<F> {
    let p = F::characteristic() as i64;
    (0..len).map(|_| F::from_i64(rng.gen_range(0..p))).collect()
}

fn random_combination<F: Field>(rng: &mut StdRng, basis: &Matrix<F>) -> Vec<F> {
    let c = random_vec(rng, basis.rows());
    basis.vec_mul(&c)
}

/// `d²_{2,q}` with canonical lifts.
pub fn d2<F: Field>(x: &MultiFilteredComplex<F>, q: usize) -> Result<D2Map<F>> {
    d2_impl(x, q, None)
}

/// `d²_{2,q}` with lifts perturbed by random boundaries and random cycles.
/// Agrees with [`d2`] whenever the zig-zag is well defined.
pub fn d2_randomized<F: Field>(x: &MultiFilteredComplex<F>, q: usize, seed: u64) -> Result<D2Map<F>> {
    d2_impl(x, q, Some(StdRng::seed_from_u64(seed)))
}

fn d2_impl<F: Field>(x: &MultiFilteredComplex<F>, q: usize, mut rng: Option<StdRng>) -> Result<D2Map<F>> {
    let n = x.n();
    let hq = homology_module(x, q);
    let hq1 = homology_module(x, q + 1);
    if n < 2 {
        return Ok(D2Map { q, rows: Vec::new(), cols: Vec::new(), matrix: Matrix::zeros(0, 0) });
    }
    let tor2 = koszul_tor(&hq.h, 2)?;
    let tor0 = koszul_tor(&hq1.h, 0)?;
    let cq: PersistenceModule<F> = chains_module(x, q);
    let cq1: PersistenceModule<F> = chains_module(x, q + 1);

    let rows: Vec<MultiDegree> = tor0.support().into_iter().flat_map(|v| vec![v.clone(); tor0.dim(&v)]).collect();
    let cols: Vec<MultiDegree> = tor2.support().into_iter().flat_map(|v| vec![v.clone(); tor2.dim(&v)]).collect();
    let mut matrix = Matrix::zeros(rows.len(), cols.len());

    let mut col = 0;
    for v in tor2.support() {
        let t2 = tor2.at(&v).expect("support lies on the grid");
        let row0 = rows.iter().position(|r| *r == v);
        let cq_layout = KoszulLayout::new(&v, |u| cq.dim(u));
        let cq1_layout = KoszulLayout::new(&v, |u| cq1.dim(u));
        let delta_c = koszul_differential(&cq, &cq_layout, 2);
        let delta_w = koszul_differential(&cq1, &cq1_layout, 1);
        let reps = t2.quotient.reps();
        for r in 0..reps.rows() {
            let xk = reps.row(r);
            // (1)-(2) lift every component to a cycle
            let mut c = vec![F::zero(); cq_layout.size(2)];
            for b in t2.layout.blocks(2) {
                let comp = &xk[b.offset..b.offset + b.dim];
                let mut lift = hq.representatives(&b.degree).vec_mul(comp);
                if let Some(rng) = rng.as_mut() {
                    let extra = random_combination(rng, hq.boundary_basis(&b.degree));
                    for (a, e) in lift.iter_mut().zip(extra) {
                        *a += e;
                    }
                }
                let cb = cq_layout.block(2, b.mask).expect("same subsets");
                c[cb.offset..cb.offset + cb.dim].copy_from_slice(&lift);
            }
            // (3) Koszul differential on chains
            let y = delta_c.mul_vec(&c);
            // (4) every component is a boundary
            let mut w = vec![F::zero(); cq1_layout.size(1)];
            for b in cq_layout.blocks(1) {
                let comp: Vec<F> = y[b.offset..b.offset + b.dim].iter().map(|&a| -a).collect();
                let bd = boundary_at(x, q + 1, &b.degree);
                let mut sol = bd.solve(&comp).ok_or_else(|| {
                    Error::internal(format!("d² lift: component at {} is not a boundary", b.degree))
                })?;
                if let Some(rng) = rng.as_mut() {
                    let extra = random_combination(rng, &bd.kernel_basis());
                    for (a, e) in sol.iter_mut().zip(extra) {
                        *a += e;
                    }
                }
                let wb = cq1_layout.block(1, b.mask).expect("same subsets");
                w[wb.offset..wb.offset + wb.dim].copy_from_slice(&sol);
            }
            // (5) back down to C_{q+1}(X_v)
            let z = delta_w.mul_vec(&w);
            // (6) homology class, then its image in Tor_0
            let h = hq1
                .class_of(&v, &z)
                .ok_or_else(|| Error::internal(format!("d² zig-zag at {v} did not end in a cycle")))?;
            let t0 = tor0.at(&v).expect("v lies on the grid").quotient.project(&h).expect("K_0 has no kernel condition");
            if let Some(r0) = row0 {
                for (i, a) in t0.iter().enumerate() {
                    matrix.set(r0 + i, col, *a);
                }
            } else if t0.iter().any(|a| !a.is_zero()) {
                return Err(Error::internal(format!("d² at {v} lands outside Tor_0")));
            }
            col += 1;
        }
    }
    Ok(D2Map { q, rows, cols, matrix })
}
