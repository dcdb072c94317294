//! Relation families `{V_v}_{v ∈ ξ₁}` and their enumeration over `GF(q)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::grading::{subsets, DegreeMultiset, MultiDegree};
use crate::linalg::Matrix;
use crate::persistence::{embed, Quotient};

/// The data `(ξ₀, ξ₁)` with the coordinates every family is written in.
///
/// Generators of `F(ξ₀)` are `ξ₀` expanded in lexicographic order, which is
/// a linear extension of `≲`. `V_v` is stored in the coordinates of the
/// generators alive at `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationShape {
    n: usize,
    xi0: DegreeMultiset,
    xi1: DegreeMultiset,
    generators: Vec<MultiDegree>,
    degrees: Vec<MultiDegree>,
    alive: Vec<Vec<usize>>,
    dims: Vec<usize>,
}

impl RelationShape {
    pub fn new(n: usize, xi0: DegreeMultiset, xi1: DegreeMultiset) -> Result<Self> {
        for d in xi0.degrees().chain(xi1.degrees()) {
            if d.n() != n {
                return Err(Error::DimensionMismatch { expected: n, found: d.n() });
            }
        }
        let generators = xi0.expanded();
        let degrees: Vec<MultiDegree> = xi1.degrees().cloned().collect();
        let alive = degrees
            .iter()
            .map(|v| (0..generators.len()).filter(|&g| generators[g].le_unchecked(v)).collect())
            .collect();
        let dims = degrees.iter().map(|v| xi1.count_below(v)).collect();
        Ok(RelationShape { n, xi0, xi1, generators, degrees, alive, dims })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn xi0(&self) -> &DegreeMultiset {
        &self.xi0
    }

    pub fn xi1(&self) -> &DegreeMultiset {
        &self.xi1
    }

    pub fn generators(&self) -> &[MultiDegree] {
        &self.generators
    }

    /// Distinct degrees of `ξ₁`, sorted.
    pub fn degrees(&self) -> &[MultiDegree] {
        &self.degrees
    }

    /// Generators alive at the `k`-th degree.
    pub fn alive(&self, k: usize) -> &[usize] {
        &self.alive[k]
    }

    /// `dim V_v = dim F(ξ₁)_v` at the `k`-th degree.
    pub fn dim(&self, k: usize) -> usize {
        self.dims[k]
    }

    /// Indices of the degrees strictly below the `k`-th one.
    pub fn below(&self, k: usize) -> Vec<usize> {
        (0..k).filter(|&u| self.degrees[u].le_unchecked(&self.degrees[k])).collect()
    }

    /// Parses `{"n": 2, "xi0": [[[0,0],2]], "xi1": [[[0,3],1], …]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawShape = serde_json::from_str(text).map_err(|e| Error::syntax(e.line(), e.to_string()))?;
        Self::new(raw.n, DegreeMultiset::from_pairs(raw.xi0), DegreeMultiset::from_pairs(raw.xi1))
    }

    pub fn to_json(&self) -> String {
        let raw = RawShape { n: self.n, xi0: self.xi0.pairs(), xi1: self.xi1.pairs() };
        serde_json::to_string(&raw).expect("shape serializes")
    }

    /// Upper bound on the number of families: `V_v` contains every lower
    /// `V_u`, so with `l = max_{u<v} dim V_u` there are at most
    /// `[dim F(ξ₀)_v - l choose dim V_v - l]_q` choices at `v`.
    pub fn estimate(&self, q: u32) -> u128 {
        (0..self.degrees.len())
            .map(|k| {
                let l = self.below(k).into_iter().map(|u| self.dims[u]).max().unwrap_or(0);
                gaussian_binomial(self.alive[k].len() - l.min(self.alive[k].len()), self.dims[k] - l, q)
            })
            .fold(1u128, |a, b| a.saturating_mul(b))
    }
}

#[derive(Serialize, Deserialize)]
struct RawShape {
    n: usize,
    xi0: Vec<(MultiDegree, usize)>,
    #[serde(default)]
    xi1: Vec<(MultiDegree, usize)>,
}

/// `[m choose k]_q`, saturating.
pub fn gaussian_binomial(m: usize, k: usize, q: u32) -> u128 {
    if k > m {
        return 0;
    }
    let q = q as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        let num = q.checked_pow((m - i) as u32).map(|x| x - 1);
        let den = q.pow(i as u32 + 1) - 1;
        match num.and_then(|x| acc.checked_mul(x)) {
            Some(x) => acc = x / den,
            None => return u128::MAX,
        }
    }
    acc
}

/// One subspace `V_v ⊆ F(ξ₀)_v` per distinct degree of `ξ₁`, each in RREF.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationFamily<F> {
    pub subspaces: Vec<Matrix<F>>,
}

impl<F: FiniteField> RelationFamily<F> {
    /// Spanning rows are replaced by their RREF.
    pub fn new(subspaces: Vec<Matrix<F>>) -> Self {
        RelationFamily { subspaces: subspaces.iter().map(Matrix::row_space).collect() }
    }

    /// `Σ_{u < v} x^{v-u} V_u` inside `F(ξ₀)_v`.
    pub fn lower_span(&self, shape: &RelationShape, k: usize) -> Matrix<F> {
        lower_span(shape, &self.subspaces, k)
    }

    /// Dimension and containment conditions.
    pub fn is_valid(&self, shape: &RelationShape) -> bool {
        self.subspaces.len() == shape.degrees().len()
            && (0..self.subspaces.len()).all(|k| {
                let v = &self.subspaces[k];
                v.cols() == shape.alive(k).len()
                    && v.rank() == shape.dim(k)
                    && v.vstack(&self.lower_span(shape, k)).rank() == shape.dim(k)
            })
    }
}

fn lower_span<F: FiniteField>(shape: &RelationShape, subspaces: &[Matrix<F>], k: usize) -> Matrix<F> {
    let tgt = shape.alive(k);
    let mut rows = Vec::new();
    for u in shape.below(k) {
        let s = &subspaces[u];
        rows.extend((0..s.rows()).map(|r| embed(s.row(r), shape.alive(u), tgt)));
    }
    Matrix::from_rows(tgt.len(), &rows).row_space()
}

/// All `k`-dimensional subspaces of `GF(q)^m`, as RREF matrices, ordered by
/// pivot set and then by free entries.
pub fn subspaces<F: FiniteField>(m: usize, k: usize) -> Vec<Matrix<F>> {
    if k > m {
        return Vec::new();
    }
    if k == 0 {
        return vec![Matrix::zeros(0, m)];
    }
    let q = F::order();
    let mut out = Vec::new();
    for mask in subsets(m, k) {
        let pivots: Vec<usize> = (0..m).filter(|&c| mask & (1 << c) != 0).collect();
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| (p + 1..m).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let total = (q as u64).pow(free.len() as u32);
        for mut code in 0..total {
            let mut s = Matrix::zeros(k, m);
            for (r, &p) in pivots.iter().enumerate() {
                s.set(r, p, F::one());
            }
            for &(r, c) in &free {
                s.set(r, c, F::from_index((code % q as u64) as u32));
                code /= q as u64;
            }
            out.push(s);
        }
    }
    out
}

/// Every relation family for `shape` over `F`, in depth-first order over the
/// sorted degrees. Fails when the upper bound on the count exceeds `budget`.
pub fn enumerate_families<F: FiniteField>(shape: &RelationShape, budget: u128) -> Result<Vec<RelationFamily<F>>> {
    let estimate = shape.estimate(F::order());
    if estimate > budget {
        return Err(Error::BudgetExceeded { estimate, budget });
    }
    let mut out = Vec::new();
    let mut partial = Vec::with_capacity(shape.degrees().len());
    extend(shape, &mut partial, &mut out);
    Ok(out)
}

fn extend<F: FiniteField>(shape: &RelationShape, partial: &mut Vec<Matrix<F>>, out: &mut Vec<RelationFamily<F>>) {
    let k = partial.len();
    if k == shape.degrees().len() {
        out.push(RelationFamily { subspaces: partial.clone() });
        return;
    }
    let lower = lower_span(shape, partial, k);
    let m = shape.alive(k).len();
    let Some(extra) = shape.dim(k).checked_sub(lower.rows()) else {
        return;
    };
    let quotient = Quotient::new(&lower, &Matrix::identity(m));
    let reps = quotient.reps();
    for s in subspaces::<F>(reps.rows(), extra) {
        let v = s.mul(reps).vstack(&lower).row_space();
        partial.push(v);
        extend(shape, partial, out);
        partial.pop();
    }
}
