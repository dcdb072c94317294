//! The page `E¹_{pq} = Tor_q(C_p(X_•), k)` with its horizontal differential.

use crate::complex::MultiFilteredComplex;
use crate::error::Result;
use crate::field::Field;
use crate::grading::{DegreeMultiset, MultiDegree};
use crate::linalg::Matrix;
use crate::tor::{koszul_tor, TorGroup};

use super::total::{chain_modules, horizontal, hypertor_dims};

#[derive(Clone, Debug)]
pub struct E1Page<F> {
    pub n: usize,
    /// `tor[p][q] = Tor_q(C_p)`.
    pub tor: Vec<Vec<TorGroup<F>>>,
    pub hypertor: Vec<DegreeMultiset>,
    /// Whether `d¹` vanishes identically.
    pub d1_zero: bool,
    /// First `(ℓ, v, Σ dim E¹, dim hypertor)` where the counts differ.
    pub mismatch: Option<(usize, MultiDegree, usize, usize)>,
    /// `d¹ ≡ 0` and `Σ_{p+q=ℓ} dim E¹_{pq}(v) = dim hypertor_ℓ(v)` everywhere.
    pub verdict: bool,
}

impl<F: Field> E1Page<F> {
    pub fn dims(&self, p: usize, q: usize) -> DegreeMultiset {
        self.tor.get(p).and_then(|r| r.get(q)).map(|t| t.xi()).unwrap_or_default()
    }

    pub fn total(&self, p: usize, q: usize) -> usize {
        self.tor.get(p).and_then(|r| r.get(q)).map_or(0, |t| t.total())
    }

    /// `Σ_{p+q=ℓ} dim E¹_{pq}(v)`.
    pub fn diagonal_dim(&self, l: usize, v: &MultiDegree) -> usize {
        (0..self.tor.len())
            .filter(|&p| p <= l && l - p <= self.n)
            .map(|p| self.tor[p][l - p].dim(v))
            .sum()
    }
}

/// `d¹ : E¹_{pq}(v) -> E¹_{p-1,q}(v)`, induced by `∂` on Koszul representatives.
pub fn d1_at<F: Field>(
    x: &MultiFilteredComplex<F>,
    src: &TorGroup<F>,
    tgt: &TorGroup<F>,
    p: usize,
    v: &MultiDegree,
) -> Matrix<F> {
    let (Some(s), Some(t)) = (src.at(v), tgt.at(v)) else {
        return Matrix::zeros(tgt.dim(v), src.dim(v));
    };
    let q = src.j;
    let h = horizontal(x, p, q, &s.layout, &t.layout);
    let reps = s.quotient.reps();
    let cols: Vec<Vec<F>> = (0..reps.rows())
        .map(|r| t.quotient.project(&h.mul_vec(reps.row(r))).expect("∂ commutes with δ, so cycles map to cycles"))
        .collect();
    Matrix::from_rows(t.quotient.dim(), &cols).transpose()
}

pub fn e1_page<F: Field>(x: &MultiFilteredComplex<F>) -> Result<E1Page<F>> {
    let n = x.n();
    let chains = chain_modules(x);
    let tor: Vec<Vec<TorGroup<F>>> = chains
        .iter()
        .map(|c| (0..=n).map(|q| koszul_tor(c, q)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let hypertor = hypertor_dims(x)?;
    let mut d1_zero = true;
    for p in 1..tor.len() {
        for q in 0..=n {
            let src = &tor[p][q];
            for v in src.support() {
                if !d1_at(x, src, &tor[p - 1][q], p, &v).is_zero() {
                    d1_zero = false;
                }
            }
        }
    }
    let mut page = E1Page { n, tor, hypertor, d1_zero, mismatch: None, verdict: false };
    let mut degrees: Vec<MultiDegree> = Vec::new();
    if let Some(first) = page.tor.first().and_then(|r| r.first()) {
        degrees = first.grid().iter().collect();
    }
    'outer: for l in 0..page.hypertor.len() {
        for v in &degrees {
            let e = page.diagonal_dim(l, v);
            let h = page.hypertor[l].multiplicity(v);
            if e != h {
                page.mismatch = Some((l, v.clone(), e, h));
                break 'outer;
            }
        }
    }
    page.verdict = page.d1_zero && page.mismatch.is_none();
    Ok(page)
}
