//! Multifiltered cell complexes, module presentations, and their text formats.
//!
//! The `.mfc` format is line oriented:
//!
//! ```text
//! n 2
//! # vertices, then higher simplices by vertex list; `@` starts the entry antichain
//! simplex a a @ (0,0)
//! simplex b b @ (0,0)
//! simplex ab a b @ (0,1)
//! # explicit cellular boundary
//! cell loop 1 [] @ (0,0)
//! cell disk 2 [loop:1] @ (1,2) (3,0)
//! ```
//!
//! A cell is present at `v` iff one of its entry degrees is `≲ v`. Simplex
//! boundaries use alternating signs over the vertex order, where vertices are
//! ordered by the position of their 0-simplex declaration.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grading::{join, DegreeMultiset, MultiDegree};
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell<F> {
    pub id: String,
    pub dim: usize,
    /// `(face index, coefficient)`, faces sorted by index, coefficients nonzero.
    pub boundary: Vec<(usize, F)>,
    /// Sorted antichain of entry degrees.
    pub entries: Vec<MultiDegree>,
}

impl<F> Cell<F> {
    pub fn present_at(&self, v: &MultiDegree) -> bool {
        self.entries.iter().any(|u| u.le_unchecked(v))
    }

    /// Lexicographically minimal entry degree.
    pub fn canonical_entry(&self) -> &MultiDegree {
        &self.entries[0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiFilteredComplex<F> {
    n: usize,
    cells: Vec<Cell<F>>,
    by_dim: Vec<Vec<usize>>,
    bound: MultiDegree,
}

impl<F: Field> MultiFilteredComplex<F> {
    /// Validates and assembles a complex. Cells must be listed faces-first.
    pub fn new(n: usize, mut cells: Vec<Cell<F>>) -> Result<Self> {
        let mut ids = HashMap::new();
        for (i, c) in cells.iter_mut().enumerate() {
            if ids.insert(c.id.clone(), i).is_some() {
                return Err(Error::Validation(format!("duplicate cell id `{}`", c.id)));
            }
            if c.entries.is_empty() {
                return Err(Error::Validation(format!("cell `{}` has no entry degree", c.id)));
            }
            for e in &c.entries {
                if e.n() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: e.n() });
                }
            }
            c.entries.sort();
            for a in 0..c.entries.len() {
                for b in a + 1..c.entries.len() {
                    if c.entries[a].comparable(&c.entries[b]) {
                        return Err(Error::NotAntichain {
                            cell: c.id.clone(),
                            a: c.entries[a].clone(),
                            b: c.entries[b].clone(),
                        });
                    }
                }
            }
            let mut merged: BTreeMap<usize, F> = BTreeMap::new();
            for &(f, x) in &c.boundary {
                if f >= i {
                    return Err(Error::Validation(format!(
                        "cell `{}` refers to a face declared after it",
                        c.id
                    )));
                }
                *merged.entry(f).or_insert_with(F::zero) += x;
            }
            c.boundary = merged.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        }
        for c in &cells {
            for &(f, _) in &c.boundary {
                let face = &cells[f];
                if face.dim + 1 != c.dim {
                    return Err(Error::Validation(format!(
                        "face `{}` of `{}` has dimension {}, expected {}",
                        face.id,
                        c.id,
                        face.dim,
                        c.dim as i64 - 1
                    )));
                }
                for u in &c.entries {
                    if !face.present_at(u) {
                        return Err(Error::FaceMonotonicity {
                            cell: c.id.clone(),
                            face: face.id.clone(),
                            degree: u.clone(),
                        });
                    }
                }
            }
        }
        for c in &cells {
            let mut acc: BTreeMap<usize, F> = BTreeMap::new();
            for &(f, x) in &c.boundary {
                for &(g, y) in &cells[f].boundary {
                    *acc.entry(g).or_insert_with(F::zero) += x * y;
                }
            }
            if acc.values().any(|x| !x.is_zero()) {
                return Err(Error::BoundarySquared { cell: c.id.clone() });
            }
        }
        let max_dim = cells.iter().map(|c| c.dim + 1).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); max_dim];
        for (i, c) in cells.iter().enumerate() {
            by_dim[c.dim].push(i);
        }
        let bound = if cells.is_empty() {
            MultiDegree::zero(n)
        } else {
            join(cells.iter().flat_map(|c| c.entries.iter()))?
        };
        Ok(MultiFilteredComplex { n, cells, by_dim, bound })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[Cell<F>] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &Cell<F> {
        &self.cells[i]
    }

    pub fn bound(&self) -> &MultiDegree {
        &self.bound
    }

    /// Top cell dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn cells_of_dim(&self, p: usize) -> &[usize] {
        self.by_dim.get(p).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Indices of `p`-cells present at `v`, ascending.
    pub fn cells_at(&self, p: usize, v: &MultiDegree) -> Vec<usize> {
        self.cells_of_dim(p).iter().copied().filter(|&i| self.cells[i].present_at(v)).collect()
    }

    /// Coefficient of face `face` in the boundary of `cell`.
    pub fn incidence(&self, cell: usize, face: usize) -> F {
        self.cells[cell]
            .boundary
            .iter()
            .find(|(f, _)| *f == face)
            .map(|&(_, x)| x)
            .unwrap_or_else(F::zero)
    }

    /// Boundary `∂_p` of the whole (unfiltered) complex, bases ordered as in
    /// [`Self::cells_of_dim`].
    pub fn total_boundary(&self, p: usize) -> Matrix<F> {
        let cols = self.cells_of_dim(p);
        if p == 0 {
            return Matrix::zeros(0, cols.len());
        }
        let rows = self.cells_of_dim(p - 1);
        let pos: HashMap<usize, usize> = rows.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for &(f, x) in &self.cells[c].boundary {
                m.set(pos[&f], j, x);
            }
        }
        m
    }

    /// Betti numbers of the underlying complex, by direct rank computation.
    pub fn betti(&self) -> Vec<usize> {
        let top = self.by_dim.len();
        (0..top)
            .map(|p| {
                let n_p = self.cells_of_dim(p).len();
                let r_p = self.total_boundary(p).rank();
                let r_next = if p + 1 < top { self.total_boundary(p + 1).rank() } else { 0 };
                n_p - r_p - r_next
            })
            .collect()
    }

    /// Canonical `.mfc` text: every cell as an explicit `cell` line.
    pub fn to_mfc(&self) -> String {
        let mut s = format!("n {}\n", self.n);
        for c in &self.cells {
            let faces: Vec<String> = c
                .boundary
                .iter()
                .map(|&(f, x)| format!("{}:{}", self.cells[f].id, x.to_signed()))
                .collect();
            let degs: Vec<String> = c.entries.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(s, "cell {} {} [{}] @ {}", c.id, c.dim, faces.join(","), degs.join(" "));
        }
        s
    }
}

/// Parses and validates an `.mfc` complex.
pub fn parse_mfc<F: Field>(text: &str) -> Result<MultiFilteredComplex<F>> {
    let mut n: Option<usize> = None;
    let mut cells: Vec<Cell<F>> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    // vertex label -> (declaration order, cell index)
    let mut vertices: HashMap<String, usize> = HashMap::new();
    let mut vertex_cell: Vec<usize> = Vec::new();
    let mut simplices: HashMap<Vec<usize>, usize> = HashMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (head, degs) = match line.split_once('@') {
            Some((h, d)) => (h.trim(), Some(parse_degrees(d, line_no)?)),
            None => (line, None),
        };
        let mut words = head.split_whitespace();
        let keyword = words.next().unwrap_or("");
        match keyword {
            "n" => {
                let k = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .filter(|&k: &usize| k > 0)
                    .ok_or_else(|| Error::syntax(line_no, "expected `n <positive integer>`"))?;
                if !cells.is_empty() || n.is_some() {
                    return Err(Error::syntax(line_no, "`n` must appear once, before any cell"));
                }
                n = Some(k);
            }
            "simplex" | "cell" => {
                let degs = degs.ok_or_else(|| Error::syntax(line_no, "missing `@` entry degrees"))?;
                let id = words.next().ok_or_else(|| Error::syntax(line_no, "missing cell id"))?;
                if ids.contains_key(id) {
                    return Err(Error::syntax(line_no, format!("duplicate cell id `{id}`")));
                }
                let nn = *n.get_or_insert(degs[0].n());
                if let Some(bad) = degs.iter().find(|d| d.n() != nn) {
                    return Err(Error::syntax(
                        line_no,
                        format!("degree {bad} has {} coordinates, expected {nn}", bad.n()),
                    ));
                }
                let index = cells.len();
                let (dim, boundary) = if keyword == "simplex" {
                    let labels: Vec<&str> = words.collect();
                    if labels.is_empty() {
                        return Err(Error::syntax(line_no, "simplex needs at least one vertex"));
                    }
                    if labels.len() == 1 {
                        if vertices.contains_key(labels[0]) {
                            return Err(Error::syntax(
                                line_no,
                                format!("vertex `{}` declared twice", labels[0]),
                            ));
                        }
                        vertices.insert(labels[0].to_string(), vertex_cell.len());
                        simplices.insert(vec![vertex_cell.len()], index);
                        vertex_cell.push(index);
                        (0, Vec::new())
                    } else {
                        let mut verts = Vec::new();
                        for l in &labels {
                            let v = *vertices.get(*l).ok_or_else(|| {
                                Error::syntax(line_no, format!("unknown vertex `{l}`"))
                            })?;
                            verts.push(v);
                        }
                        verts.sort_unstable();
                        if verts.windows(2).any(|w| w[0] == w[1]) {
                            return Err(Error::syntax(line_no, "repeated vertex in simplex"));
                        }
                        let mut boundary = Vec::new();
                        for drop in 0..verts.len() {
                            let face: Vec<usize> = verts
                                .iter()
                                .enumerate()
                                .filter(|&(k, _)| k != drop)
                                .map(|(_, &v)| v)
                                .collect();
                            let f = *simplices.get(&face).ok_or_else(|| {
                                Error::syntax(line_no, format!("face of `{id}` not declared before it"))
                            })?;
                            let sign = if drop % 2 == 0 { F::one() } else { -F::one() };
                            boundary.push((f, sign));
                        }
                        if simplices.insert(verts.clone(), index).is_some() {
                            return Err(Error::syntax(line_no, "simplex declared twice"));
                        }
                        (verts.len() - 1, boundary)
                    }
                } else {
                    let dim: usize = words
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| Error::syntax(line_no, "expected cell dimension"))?;
                    let rest: String = words.collect::<Vec<_>>().join(" ");
                    let inner = rest
                        .trim()
                        .strip_prefix('[')
                        .and_then(|r| r.strip_suffix(']'))
                        .ok_or_else(|| Error::syntax(line_no, "expected `[face:coeff,...]`"))?;
                    let mut boundary = Vec::new();
                    for item in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        let (face, coeff) = item
                            .split_once(':')
                            .ok_or_else(|| Error::syntax(line_no, format!("bad boundary term `{item}`")))?;
                        let f = *ids.get(face.trim()).ok_or_else(|| {
                            Error::syntax(line_no, format!("unknown face `{}`", face.trim()))
                        })?;
                        let c: i64 = coeff
                            .trim()
                            .parse()
                            .map_err(|_| Error::syntax(line_no, format!("bad coefficient `{coeff}`")))?;
                        boundary.push((f, F::from_i64(c)));
                    }
                    (dim, boundary)
                };
                ids.insert(id.to_string(), index);
                cells.push(Cell { id: id.to_string(), dim, boundary, entries: degs });
            }
            other => return Err(Error::syntax(line_no, format!("unknown directive `{other}`"))),
        }
    }
    MultiFilteredComplex::new(n.unwrap_or(1), cells)
}

fn parse_degrees(s: &str, line: usize) -> Result<Vec<MultiDegree>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(Error::syntax(line, format!("expected `(` in entry degrees, found `{rest}`")));
        }
        let close = rest.find(')').ok_or_else(|| Error::syntax(line, "unclosed degree"))?;
        let d: MultiDegree = rest[..=close]
            .parse()
            .map_err(|_| Error::syntax(line, format!("bad degree `{}`", &rest[..=close])))?;
        out.push(d);
        rest = rest[close + 1..].trim_start();
    }
    if out.is_empty() {
        return Err(Error::syntax(line, "empty entry antichain"));
    }
    Ok(out)
}

/// One relation of a presentation: a vector over the generators of `F(ξ₀)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation<F> {
    pub degree: MultiDegree,
    pub coeffs: Vec<F>,
}

/// `F₁ → F(ξ₀) → M → 0`, given by generator degrees and relation vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationInput<F> {
    pub n: usize,
    pub xi0: DegreeMultiset,
    /// `xi0` expanded in sorted order; relation coefficients index into this.
    pub generators: Vec<MultiDegree>,
    pub relations: Vec<Relation<F>>,
}

#[derive(Serialize, Deserialize)]
struct RawPresentation {
    n: usize,
    xi0: Vec<(MultiDegree, usize)>,
    #[serde(default)]
    relations: Vec<RawRelation>,
}

#[derive(Serialize, Deserialize)]
struct RawRelation {
    degree: MultiDegree,
    coeffs: BTreeMap<String, i64>,
}

impl<F: Field> PresentationInput<F> {
    /// Validates that every coefficient addresses a generator born no later
    /// than its relation.
    pub fn new(n: usize, xi0: DegreeMultiset, relations: Vec<Relation<F>>) -> Result<Self> {
        let generators = xi0.expanded();
        for g in &generators {
            if g.n() != n {
                return Err(Error::DimensionMismatch { expected: n, found: g.n() });
            }
        }
        for (r, rel) in relations.iter().enumerate() {
            if rel.degree.n() != n {
                return Err(Error::DimensionMismatch { expected: n, found: rel.degree.n() });
            }
            if rel.coeffs.len() != generators.len() {
                return Err(Error::Validation(format!(
                    "relation {r} has {} coefficients for {} generators",
                    rel.coeffs.len(),
                    generators.len()
                )));
            }
            for (g, c) in rel.coeffs.iter().enumerate() {
                if !c.is_zero() && !generators[g].le_unchecked(&rel.degree) {
                    return Err(Error::RelationAddressing {
                        relation: r,
                        degree: rel.degree.clone(),
                        generator: g,
                        born: generators[g].clone(),
                    });
                }
            }
        }
        Ok(PresentationInput { n, xi0, generators, relations })
    }

    pub fn to_json(&self) -> String {
        let raw = RawPresentation {
            n: self.n,
            xi0: self.xi0.pairs(),
            relations: self
                .relations
                .iter()
                .map(|r| RawRelation {
                    degree: r.degree.clone(),
                    coeffs: r
                        .coeffs
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(g, c)| (g.to_string(), c.to_signed()))
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string(&raw).expect("presentation serializes")
    }
}

/// Parses the JSON presentation format
/// `{"n":2,"xi0":[[[0,0],2]],"relations":[{"degree":[0,3],"coeffs":{"0":1}}]}`.
pub fn parse_presentation<F: Field>(text: &str) -> Result<PresentationInput<F>> {
    let raw: RawPresentation = serde_json::from_str(text)
        .map_err(|e| Error::syntax(e.line(), format!("presentation JSON: {e}")))?;
    let xi0 = DegreeMultiset::from_pairs(raw.xi0);
    let m = xi0.total();
    let mut relations = Vec::new();
    for (r, rr) in raw.relations.into_iter().enumerate() {
        let mut coeffs = vec![F::zero(); m];
        for (k, c) in rr.coeffs {
            let g: usize = k
                .trim()
                .parse()
                .map_err(|_| Error::Validation(format!("relation {r}: bad generator index `{k}`")))?;
            if g >= m {
                return Err(Error::Validation(format!(
                    "relation {r}: generator index {g} out of range ({m} generators)"
                )));
            }
            coeffs[g] += F::from_i64(c);
        }
        relations.push(Relation { degree: rr.degree, coeffs });
    }
    PresentationInput::new(raw.n, xi0, relations)
}
