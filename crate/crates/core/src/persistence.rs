//! Persistence modules on a finite grid, chain and homology modules of a
//! multifiltered complex, and cokernels of presentations.
//!
//! A module is stored on the grid `[0, w]`; it is constant beyond `w`, so a
//! degree outside the grid is clamped onto it and steps leaving the grid are
//! identities.

use rayon::prelude::*;

use crate::complex::{MultiFilteredComplex, PresentationInput};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grading::{join, Grid, MultiDegree};
use crate::linalg::{complement, Matrix, RowBasis};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PersistenceModule<F> {
    grid: Grid,
    dims: Vec<usize>,
    /// `steps[i][j]`: `M_v -> M_{v+e_j}` for `v = grid.point(i)`.
    steps: Vec<Vec<Matrix<F>>>,
    labels: Option<Vec<Vec<String>>>,
}

impl<F: Field> PersistenceModule<F> {
    /// Builds a module from per-degree dimensions and step maps. `step` is
    /// only called for steps that stay on the grid. Shapes and square
    /// commutativity are checked.
    pub fn from_fn(
        bound: MultiDegree,
        dim: impl Fn(&MultiDegree) -> usize + Sync,
        step: impl Fn(&MultiDegree, usize) -> Matrix<F> + Sync,
    ) -> Result<Self> {
        let grid = Grid::new(bound);
        let n = grid.n();
        let points: Vec<MultiDegree> = grid.iter().collect();
        let dims: Vec<usize> = points.par_iter().map(&dim).collect();
        let steps: Vec<Vec<Matrix<F>>> = points
            .par_iter()
            .enumerate()
            .map(|(i, v)| {
                (0..n)
                    .map(|j| {
                        if v.get(j) < grid.bound().get(j) {
                            step(v, j)
                        } else {
                            Matrix::identity(dims[i])
                        }
                    })
                    .collect()
            })
            .collect();
        let m = PersistenceModule { grid, dims, steps, labels: None };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<()> {
        let n = self.n();
        for (i, v) in self.grid.iter().enumerate() {
            for j in 0..n {
                let s = &self.steps[i][j];
                let target = self.dim(&v.step(j));
                if s.rows() != target || s.cols() != self.dims[i] {
                    return Err(Error::internal(format!(
                        "step {v} -> +e{j} has shape {}x{}, expected {}x{}",
                        s.rows(),
                        s.cols(),
                        target,
                        self.dims[i]
                    )));
                }
            }
            for a in 0..n {
                for b in a + 1..n {
                    let ab = self.step(&v.step(a), b).mul(self.step(&v, a));
                    let ba = self.step(&v.step(b), a).mul(self.step(&v, b));
                    if ab != ba {
                        return Err(Error::internal(format!(
                            "structure maps do not commute at {v} in directions {a},{b}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn zero(n: usize) -> Self {
        Self::from_fn(MultiDegree::zero(n), |_| 0, |_, _| Matrix::zeros(0, 0))
            .expect("zero module is valid")
    }

    /// The free module `F(ξ)` on generators at `gens`, basis at `v` the
    /// generators `≲ v` in index order.
    pub fn free(n: usize, gens: &[MultiDegree], bound: MultiDegree) -> Self {
        assert!(gens.iter().all(|g| g.n() == n) && bound.n() == n);
        let alive = |v: &MultiDegree| -> Vec<usize> {
            (0..gens.len()).filter(|&i| gens[i].le_unchecked(v)).collect()
        };
        Self::from_fn(bound, |v| alive(v).len(), |v, j| inclusion(&alive(v), &alive(&v.step(j))))
            .expect("free modules commute")
    }

    pub fn with_labels(mut self, labels: impl Fn(&MultiDegree) -> Vec<String>) -> Self {
        let l: Vec<Vec<String>> = self.grid.iter().map(|v| labels(&v)).collect();
        assert!(l.iter().zip(&self.dims).all(|(l, &d)| l.len() == d));
        self.labels = Some(l);
        self
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn bound(&self) -> &MultiDegree {
        self.grid.bound()
    }

    pub fn dim(&self, v: &MultiDegree) -> usize {
        self.dims[self.grid.index(&self.grid.clamp(v))]
    }

    pub fn step(&self, v: &MultiDegree, j: usize) -> &Matrix<F> {
        &self.steps[self.grid.index(&self.grid.clamp(v))][j]
    }

    pub fn labels(&self, v: &MultiDegree) -> Option<&[String]> {
        let i = self.grid.index(&self.grid.clamp(v));
        self.labels.as_ref().map(|l| l[i].as_slice())
    }

    /// `φ_{u,v}`, composed along the lexicographic staircase from `u` to `v`.
    pub fn map(&self, u: &MultiDegree, v: &MultiDegree) -> Matrix<F> {
        assert!(u.le_unchecked(v), "map: {u} is not below {v}");
        let target = self.grid.clamp(v);
        let mut cur = self.grid.clamp(u);
        let mut m = Matrix::identity(self.dim(&cur));
        for k in 0..self.n() {
            while cur.get(k) < target.get(k) {
                m = self.step(&cur, k).mul(&m);
                cur = cur.step(k);
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// The same module stored on a larger grid.
    pub fn widen(&self, bound: MultiDegree) -> Self {
        assert!(self.bound().le_unchecked(&bound), "widen: new bound must dominate");
        Self::from_fn(bound, |v| self.dim(v), |v, j| self.step(v, j).clone()).expect("widening preserves validity")
    }

    /// Nonzero dimensions in grid order.
    pub fn dims_table(&self) -> Vec<(MultiDegree, usize)> {
        self.grid.iter().zip(&self.dims).filter(|(_, &d)| d > 0).map(|(v, &d)| (v, d)).collect()
    }
}

/// Inclusion of the basis `src` into the basis `tgt`, both ascending and `src ⊆ tgt`.
pub(crate) fn inclusion<F: Field>(src: &[usize], tgt: &[usize]) -> Matrix<F> {
    let mut m = Matrix::zeros(tgt.len(), src.len());
    let mut k = 0;
    for (c, s) in src.iter().enumerate() {
        while tgt[k] != *s {
            k += 1;
        }
        m.set(k, c, F::one());
    }
    m
}

/// Per-degree matrices `f_v: S_v -> T_v` commuting with the structure maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModuleMap<F> {
    grid: Grid,
    maps: Vec<Matrix<F>>,
}

impl<F: Field> GradedModuleMap<F> {
    /// Checks shapes and naturality against `source` and `target`.
    pub fn from_fn(
        source: &PersistenceModule<F>,
        target: &PersistenceModule<F>,
        f: impl Fn(&MultiDegree) -> Matrix<F> + Sync,
    ) -> Result<Self> {
        let bound = source.bound().max(target.bound());
        let grid = Grid::new(bound);
        let points: Vec<MultiDegree> = grid.iter().collect();
        let maps: Vec<Matrix<F>> = points.par_iter().map(&f).collect();
        let out = GradedModuleMap { grid, maps };
        for v in &points {
            let m = out.at(v);
            if m.rows() != target.dim(v) || m.cols() != source.dim(v) {
                return Err(Error::internal(format!("graded map has wrong shape at {v}")));
            }
            for j in 0..v.n() {
                let w = v.step(j);
                if target.step(v, j).mul(m) != out.at(&w).mul(source.step(v, j)) {
                    return Err(Error::internal(format!("graded map is not natural at {v}, direction {j}")));
                }
            }
        }
        Ok(out)
    }

    pub fn at(&self, v: &MultiDegree) -> &Matrix<F> {
        &self.maps[self.grid.index(&self.grid.clamp(v))]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &GradedModuleMap<F>) -> GradedModuleMap<F> {
        let grid = Grid::new(self.grid.bound().max(first.grid.bound()));
        let maps = grid.iter().map(|v| self.at(&v).mul(first.at(&v))).collect();
        GradedModuleMap { grid, maps }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(Matrix::is_zero)
    }
}

/// A subquotient `within / sub` of a coordinate space, with canonical class
/// representatives: the greedy RREF complement of `sub` inside `within`.
#[derive(Clone, Debug)]
pub struct Quotient<F> {
    sub_rank: usize,
    reps: Matrix<F>,
    basis: RowBasis<F>,
}

impl<F: Field> Quotient<F> {
    /// `sub` must lie inside `within`.
    pub fn new(sub: &Matrix<F>, within: &Matrix<F>) -> Self {
        let sub = sub.row_space();
        let reps = complement(&sub, within);
        let basis = RowBasis::new(sub.vstack(&reps));
        Quotient { sub_rank: sub.rows(), reps, basis }
    }

    pub fn dim(&self) -> usize {
        self.reps.rows()
    }

    pub fn sub_rank(&self) -> usize {
        self.sub_rank
    }

    /// Class representatives as rows.
    pub fn reps(&self) -> &Matrix<F> {
        &self.reps
    }

    /// Class coordinates of `x`, or `None` if `x` is outside `within`.
    pub fn project(&self, x: &[F]) -> Option<Vec<F>> {
        let c = self.basis.coords(x)?;
        Some(c[self.sub_rank..].to_vec())
    }

    /// Coordinates of `x` with respect to `sub`, if `x ∈ sub`.
    pub fn sub_coords(&self, x: &[F]) -> Option<Vec<F>> {
        let c = self.basis.coords(x)?;
        c[self.sub_rank..].iter().all(|a| a.is_zero()).then(|| c[..self.sub_rank].to_vec())
    }

    pub fn lift(&self, coords: &[F]) -> Vec<F> {
        self.reps.vec_mul(coords)
    }
}

/// `C_p(X_•)`: basis at `v` is the `p`-cells present at `v`.
pub fn chains_module<F: Field>(x: &MultiFilteredComplex<F>, p: usize) -> PersistenceModule<F> {
    PersistenceModule::from_fn(
        x.bound().clone(),
        |v| x.cells_at(p, v).len(),
        |v, j| inclusion(&x.cells_at(p, v), &x.cells_at(p, &v.step(j))),
    )
    .expect("chain modules commute")
    .with_labels(|v| x.cells_at(p, v).into_iter().map(|i| x.cell(i).id.clone()).collect())
}

/// Matrix of `∂_p : C_p(X_v) -> C_{p-1}(X_v)` in the present-cell bases.
pub fn boundary_at<F: Field>(x: &MultiFilteredComplex<F>, p: usize, v: &MultiDegree) -> Matrix<F> {
    let cols = x.cells_at(p, v);
    if p == 0 {
        return Matrix::zeros(0, cols.len());
    }
    let rows = x.cells_at(p - 1, v);
    Matrix::from_fn(rows.len(), cols.len(), |i, j| x.incidence(cols[j], rows[i]))
}

pub fn boundary_map<F: Field>(x: &MultiFilteredComplex<F>, p: usize) -> GradedModuleMap<F> {
    assert!(p >= 1, "boundary_map needs p >= 1");
    GradedModuleMap::from_fn(&chains_module(x, p), &chains_module(x, p - 1), |v| boundary_at(x, p, v))
        .expect("cellular boundary is natural")
}

/// `H_q(X_•)` together with its cycle and boundary modules and the per-degree
/// subquotient data that fixes class representatives.
#[derive(Clone, Debug)]
pub struct Homology<F> {
    pub q: usize,
    pub h: PersistenceModule<F>,
    pub z: PersistenceModule<F>,
    pub b: PersistenceModule<F>,
    grid: Grid,
    cells: Vec<Vec<usize>>,
    quotients: Vec<Quotient<F>>,
    cycles: Vec<Matrix<F>>,
    boundaries: Vec<Matrix<F>>,
}

impl<F: Field> Homology<F> {
    fn idx(&self, v: &MultiDegree) -> usize {
        self.grid.index(&self.grid.clamp(v))
    }

    /// `q`-cells forming the chain basis at `v`.
    pub fn chain_basis(&self, v: &MultiDegree) -> &[usize] {
        &self.cells[self.idx(v)]
    }

    /// Homology class representatives at `v`, as rows in chain coordinates.
    pub fn representatives(&self, v: &MultiDegree) -> &Matrix<F> {
        self.quotients[self.idx(v)].reps()
    }

    /// Class of a chain at `v`; `None` if it is not a cycle.
    pub fn class_of(&self, v: &MultiDegree, chain: &[F]) -> Option<Vec<F>> {
        self.quotients[self.idx(v)].project(chain)
    }

    pub fn cycle_basis(&self, v: &MultiDegree) -> &Matrix<F> {
        &self.cycles[self.idx(v)]
    }

    pub fn boundary_basis(&self, v: &MultiDegree) -> &Matrix<F> {
        &self.boundaries[self.idx(v)]
    }
}

/// Embeds a chain given on the basis `src` into the basis `tgt ⊇ src`.
pub(crate) fn embed<F: Field>(chain: &[F], src: &[usize], tgt: &[usize]) -> Vec<F> {
    let mut out = vec![F::zero(); tgt.len()];
    let mut k = 0;
    for (c, s) in chain.iter().zip(src) {
        while tgt[k] != *s {
            k += 1;
        }
        out[k] = *c;
    }
    out
}

pub fn homology_module<F: Field>(x: &MultiFilteredComplex<F>, q: usize) -> Homology<F> {
    let grid = Grid::new(x.bound().clone());
    let points: Vec<MultiDegree> = grid.iter().collect();
    let per: Vec<(Vec<usize>, Matrix<F>, Matrix<F>, Quotient<F>)> = points
        .par_iter()
        .map(|v| {
            let cells = x.cells_at(q, v);
            let z = boundary_at(x, q, v).kernel_basis();
            let b = boundary_at(x, q + 1, v).column_space();
            let b = if b.cols() == cells.len() { b } else { Matrix::zeros(0, cells.len()) };
            let quo = Quotient::new(&b, &z);
            (cells, z, b, quo)
        })
        .collect();
    let mut cells = Vec::new();
    let mut cycles = Vec::new();
    let mut boundaries = Vec::new();
    let mut quotients = Vec::new();
    for (c, z, b, quo) in per {
        cells.push(c);
        cycles.push(z);
        boundaries.push(b);
        quotients.push(quo);
    }
    let at = |v: &MultiDegree| grid.index(v);
    let basis_step = |basis: &[Matrix<F>], v: &MultiDegree, j: usize| -> Matrix<F> {
        let (s, t) = (at(v), at(&v.step(j)));
        let target = RowBasis::new(basis[t].clone());
        let cols: Vec<Vec<F>> = (0..basis[s].rows())
            .map(|r| {
                let e = embed(basis[s].row(r), &cells[s], &cells[t]);
                target.coords(&e).expect("subcomplex maps into its extension")
            })
            .collect();
        Matrix::from_rows(target.len(), &cols).transpose()
    };
    let bound = x.bound().clone();
    let z = PersistenceModule::from_fn(bound.clone(), |v| cycles[at(v)].rows(), |v, j| basis_step(&cycles, v, j))
        .expect("cycle module commutes");
    let b = PersistenceModule::from_fn(bound.clone(), |v| boundaries[at(v)].rows(), |v, j| {
        basis_step(&boundaries, v, j)
    })
    .expect("boundary module commutes");
    let h = PersistenceModule::from_fn(bound, |v| quotients[at(v)].dim(), |v, j| {
        let (s, t) = (at(v), at(&v.step(j)));
        let reps = quotients[s].reps();
        let cols: Vec<Vec<F>> = (0..reps.rows())
            .map(|r| {
                let e = embed(reps.row(r), &cells[s], &cells[t]);
                quotients[t].project(&e).expect("cycles map to cycles")
            })
            .collect();
        Matrix::from_rows(quotients[t].dim(), &cols).transpose()
    })
    .expect("homology module commutes");
    Homology { q, h, z, b, grid, cells, quotients, cycles, boundaries }
}

/// Data of `M = F(ξ₀) / ⟨relations⟩` at a single degree.
#[derive(Clone, Debug)]
pub struct CokernelDegree<F> {
    /// Generators alive at this degree, ascending.
    pub generators: Vec<usize>,
    pub quotient: Quotient<F>,
}

/// Cokernel of a presentation, with the per-degree quotient data.
#[derive(Clone, Debug)]
pub struct Cokernel<F> {
    pub module: PersistenceModule<F>,
    pub degrees: Vec<CokernelDegree<F>>,
}

/// Stores `M = F(ξ₀) / ⟨relations⟩` on the grid bounded by the join of all
/// generator and relation degrees.
pub fn present_cokernel<F: Field>(pres: &PresentationInput<F>) -> PersistenceModule<F> {
    cokernel(pres).module
}

pub fn cokernel<F: Field>(pres: &PresentationInput<F>) -> Cokernel<F> {
    let n = pres.n;
    let bound = join(pres.generators.iter().chain(pres.relations.iter().map(|r| &r.degree)))
        .unwrap_or_else(|_| MultiDegree::zero(n));
    let grid = Grid::new(bound.clone());
    let points: Vec<MultiDegree> = grid.iter().collect();
    let degrees: Vec<CokernelDegree<F>> = points
        .par_iter()
        .map(|v| {
            let gens: Vec<usize> = (0..pres.generators.len()).filter(|&g| pres.generators[g].le_unchecked(v)).collect();
            let rels: Vec<Vec<F>> = pres
                .relations
                .iter()
                .filter(|r| r.degree.le_unchecked(v))
                .map(|r| gens.iter().map(|&g| r.coeffs[g]).collect())
                .collect();
            let sub = Matrix::from_rows(gens.len(), &rels);
            let quotient = Quotient::new(&sub, &Matrix::identity(gens.len()));
            CokernelDegree { generators: gens, quotient }
        })
        .collect();
    let at = |v: &MultiDegree| grid.index(v);
    let module = PersistenceModule::from_fn(bound, |v| degrees[at(v)].quotient.dim(), |v, j| {
        let (s, t) = (&degrees[at(v)], &degrees[at(&v.step(j))]);
        let reps = s.quotient.reps();
        let cols: Vec<Vec<F>> = (0..reps.rows())
            .map(|r| {
                let e = embed(reps.row(r), &s.generators, &t.generators);
                t.quotient.project(&e).expect("quotient of a free module")
            })
            .collect();
        Matrix::from_rows(t.quotient.dim(), &cols).transpose()
    })
    .expect("cokernel commutes");
    Cokernel { module, degrees }
}

/// Outcome of [`single_step_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepCheck {
    pub ok: bool,
    /// `(v, j, added)`: first step `v -> v+e_j` adding more than one cell.
    pub violation: Option<(MultiDegree, usize, usize)>,
}

/// Whether every lattice step adds at most one cell, counted over all
/// dimensions.
pub fn single_step_check<F: Field>(x: &MultiFilteredComplex<F>) -> StepCheck {
    let grid = Grid::new(x.bound().clone());
    let count = |v: &MultiDegree| x.cells().iter().filter(|c| c.present_at(v)).count();
    for v in grid.iter() {
        for j in 0..x.n() {
            if v.get(j) >= x.bound().get(j) {
                continue;
            }
            let added = count(&v.step(j)) - count(&v);
            if added > 1 {
                return StepCheck { ok: false, violation: Some((v, j, added)) };
            }
        }
    }
    StepCheck { ok: true, violation: None }
}
