//! Minimal free resolutions `0 → F_L → … → F_0 → M → 0`.
//!
//! Each `F_j` is free on generators listed in grid order. A differential is a
//! scalar matrix (rows: generators of `F_{j-1}`, columns: generators of
//! `F_j`); the entry from `g` at `u'` to `h` at `u` stands for that scalar
//! times `x^{u'-u}`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grading::{DegreeMultiset, Grid, MultiDegree};
use crate::linalg::{complement, Matrix};
use crate::persistence::{embed, PersistenceModule};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalResolution<F> {
    n: usize,
    bound: MultiDegree,
    generators: Vec<Vec<MultiDegree>>,
    /// `differentials[j-1]` is `d_j`.
    differentials: Vec<Matrix<F>>,
    /// Image in `M_u` of each generator of `F_0` at `u`.
    augmentation: Vec<Vec<F>>,
}

impl<F: Field> MinimalResolution<F> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bound(&self) -> &MultiDegree {
        &self.bound
    }

    /// Index of the last nonzero free module, `None` for `M = 0`.
    pub fn length(&self) -> Option<usize> {
        self.generators.iter().rposition(|g| !g.is_empty())
    }

    pub fn generators(&self, j: usize) -> &[MultiDegree] {
        self.generators.get(j).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn xi(&self, j: usize) -> DegreeMultiset {
        DegreeMultiset::from_pairs(self.generators(j).iter().map(|d| (d.clone(), 1)))
    }

    /// Scalar matrix of `d_j`, `j ≥ 1`.
    pub fn differential(&self, j: usize) -> Matrix<F> {
        assert!(j >= 1);
        self.differentials
            .get(j - 1)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.generators(j - 1).len(), self.generators(j).len()))
    }

    pub fn augmentation(&self) -> &[Vec<F>] {
        &self.augmentation
    }

    /// Generators of `F_j` alive at `v`.
    pub fn alive(&self, j: usize, v: &MultiDegree) -> Vec<usize> {
        alive(self.generators(j), v)
    }

    /// `d_j` evaluated at `v`, in the bases of alive generators.
    pub fn differential_at(&self, j: usize, v: &MultiDegree) -> Matrix<F> {
        self.differential(j).select_rows(&self.alive(j - 1, v)).select_cols(&self.alive(j, v))
    }

    /// `ε_v : F_0(v) -> M_v`.
    pub fn augmentation_at(&self, m: &PersistenceModule<F>, v: &MultiDegree) -> Matrix<F> {
        augmentation_at(m, &self.generators[0], &self.augmentation, v)
    }
}

fn alive(gens: &[MultiDegree], v: &MultiDegree) -> Vec<usize> {
    (0..gens.len()).filter(|&i| gens[i].le_unchecked(v)).collect()
}

fn augmentation_at<F: Field>(
    m: &PersistenceModule<F>,
    gens: &[MultiDegree],
    images: &[Vec<F>],
    v: &MultiDegree,
) -> Matrix<F> {
    let cols: Vec<Vec<F>> =
        alive(gens, v).into_iter().map(|i| m.map(&gens[i], v).mul_vec(&images[i])).collect();
    Matrix::from_rows(m.dim(v), &cols).transpose()
}

/// Per-degree subspaces `K_v` of an ambient module that is either `M` or a
/// free module, and a fresh generating set chosen degree by degree.
fn minimal_generators<F: Field>(
    grid: &Grid,
    kernels: &[Matrix<F>],
    image_of_step: impl Fn(&MultiDegree, usize) -> Matrix<F> + Sync,
) -> Vec<(MultiDegree, Vec<F>)> {
    let points: Vec<MultiDegree> = grid.iter().collect();
    let per: Vec<Vec<(MultiDegree, Vec<F>)>> = points
        .par_iter()
        .map(|v| {
            let k = &kernels[grid.index(v)];
            let mut rows = Vec::new();
            for t in 0..v.n() {
                if v.get(t) > 0 {
                    rows.extend(image_of_step(v, t).row_vecs());
                }
            }
            let lower = Matrix::from_rows(k.cols(), &rows);
            let gens = complement(&lower, k);
            (0..gens.rows()).map(|r| (v.clone(), gens.row(r).to_vec())).collect()
        })
        .collect();
    per.into_iter().flatten().collect()
}

/// Computes the minimal free resolution of `m` degree by degree, then verifies
/// `d ∘ d = 0` and exactness at every grid degree.
pub fn minimal_resolution<F: Field>(m: &PersistenceModule<F>) -> Result<MinimalResolution<F>> {
    let n = m.n();
    let bound = m.bound().clone();
    let grid = Grid::new(bound.clone());
    let points: Vec<MultiDegree> = grid.iter().collect();

    // F_0: minimal generators of M itself.
    let whole: Vec<Matrix<F>> = points.iter().map(|v| Matrix::identity(m.dim(v))).collect();
    let gens0 = minimal_generators(&grid, &whole, |v, t| {
        let u = v.clone().minus_subset(1 << t).expect("v_t > 0");
        m.step(&u, t).transpose()
    });
    let mut generators = vec![gens0.iter().map(|(d, _)| d.clone()).collect::<Vec<_>>()];
    let augmentation: Vec<Vec<F>> = gens0.into_iter().map(|(_, x)| x).collect();
    let mut differentials: Vec<Matrix<F>> = Vec::new();

    if !generators[0].is_empty() {
        let kernels: Vec<Matrix<F>> =
            points.par_iter().map(|v| augmentation_at(m, &generators[0], &augmentation, v).kernel_basis()).collect();
        if kernels.iter().any(|k| k.rows() > 0) {
            let (gens, d) = cover_kernel(&grid, &generators[0], &kernels);
            generators.push(gens);
            differentials.push(d);
            extend_resolution(n, &grid, &mut generators, &mut differentials)?;
        }
    }
    let res = MinimalResolution { n, bound, generators, differentials, augmentation };
    verify(m, &res)?;
    Ok(res)
}

/// Minimal generators of a graded subspace family `K ⊆ F(prev)`, given at
/// every grid point in alive coordinates, and the map onto it.
fn cover_kernel<F: Field>(grid: &Grid, prev: &[MultiDegree], kernels: &[Matrix<F>]) -> (Vec<MultiDegree>, Matrix<F>) {
    let gens = minimal_generators(grid, kernels, |v, t| {
        let u = v.minus_subset(1 << t).expect("v_t > 0");
        let k = &kernels[grid.index(&u)];
        let (src, tgt) = (alive(prev, &u), alive(prev, v));
        let rows: Vec<Vec<F>> = (0..k.rows()).map(|r| embed(k.row(r), &src, &tgt)).collect();
        Matrix::from_rows(tgt.len(), &rows)
    });
    let mut d = Matrix::zeros(prev.len(), gens.len());
    for (c, (v, x)) in gens.iter().enumerate() {
        for (k, &i) in alive(prev, v).iter().enumerate() {
            d.set(i, c, x[k]);
        }
    }
    (gens.into_iter().map(|(v, _)| v).collect(), d)
}

/// Resolves the kernel of the last differential until it vanishes.
/// `generators` holds `F_0, …, F_j` and `differentials` holds `d_1, …, d_j`.
pub(crate) fn extend_resolution<F: Field>(
    n: usize,
    grid: &Grid,
    generators: &mut Vec<Vec<MultiDegree>>,
    differentials: &mut Vec<Matrix<F>>,
) -> Result<()> {
    let points: Vec<MultiDegree> = grid.iter().collect();
    loop {
        let j = generators.len();
        let prev = &generators[j - 1];
        if prev.is_empty() {
            return Ok(());
        }
        let d = &differentials[j - 2];
        let kernels: Vec<Matrix<F>> = points
            .par_iter()
            .map(|v| d.select_rows(&alive(&generators[j - 2], v)).select_cols(&alive(prev, v)).kernel_basis())
            .collect();
        if kernels.iter().all(|k| k.rows() == 0) {
            return Ok(());
        }
        if j > n {
            return Err(Error::internal(format!("resolution has length {j} > n = {n}")));
        }
        let (gens, d) = cover_kernel(grid, prev, &kernels);
        generators.push(gens);
        differentials.push(d);
    }
}

fn verify<F: Field>(m: &PersistenceModule<F>, res: &MinimalResolution<F>) -> Result<()> {
    let len = res.generators.len();
    for j in 1..len.saturating_sub(1) {
        if !res.differential(j).mul(&res.differential(j + 1)).is_zero() {
            return Err(Error::internal(format!("d_{j} ∘ d_{} ≠ 0", j + 1)));
        }
    }
    for j in 1..len {
        let d = res.differential(j);
        for c in 0..d.cols() {
            for r in 0..d.rows() {
                if !d[(r, c)].is_zero() {
                    let (u, w) = (&res.generators[j - 1][r], &res.generators[j][c]);
                    if !u.le_unchecked(w) || u == w {
                        return Err(Error::internal(format!("d_{j} entry {u} <- {w} is not minimal")));
                    }
                }
            }
        }
    }
    for v in Grid::new(res.bound.clone()).iter() {
        let eps = res.augmentation_at(m, &v);
        if eps.rank() != m.dim(&v) {
            return Err(Error::internal(format!("augmentation is not onto at {v}")));
        }
        let mut ranks = vec![eps.rank()];
        for j in 1..len {
            ranks.push(res.differential_at(j, &v).rank());
        }
        ranks.push(0);
        for j in 0..len {
            if ranks[j] + ranks[j + 1] != res.alive(j, &v).len() {
                return Err(Error::internal(format!("resolution is not exact at F_{j}, degree {v}")));
            }
        }
    }
    Ok(())
}
