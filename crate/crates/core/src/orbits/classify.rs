//! Orbits of `GL(F(ξ₀))` on relation families, and their invariants
//! `ξ₂, …, ξ_n` with the Grassmannian points `d_j(M)`.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;

use crate::complex::{PresentationInput, Relation};
use crate::error::{Error, Result};
use crate::field::{Field, FiniteField};
use crate::grading::{join, DegreeMultiset, Grid, MultiDegree};
use crate::linalg::{complement, Matrix};
use crate::persistence::{present_cokernel, PersistenceModule};
use crate::tor::{extend_resolution, xi, TorTable};

use super::family::{enumerate_families, RelationFamily, RelationShape};
use super::group::group_generators;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit<F> {
    /// Lexicographically least member.
    pub representative: RelationFamily<F>,
    /// Indices into the enumerated family list, sorted.
    pub members: Vec<usize>,
}

impl<F> Orbit<F> {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Breadth-first closure under [`group_generators`]. Orbits are sorted by
/// representative.
pub fn orbit_partition<F: FiniteField>(
    shape: &RelationShape,
    families: &[RelationFamily<F>],
) -> Result<Vec<Orbit<F>>> {
    let index: HashMap<&RelationFamily<F>, usize> = families.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let gens = group_generators::<F>(shape);
    let mut seen = vec![false; families.len()];
    let mut orbits = Vec::new();
    for start in 0..families.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let image = g.act(shape, &families[i]);
                let &k = index
                    .get(&image)
                    .ok_or_else(|| Error::internal("a group generator maps a family outside the enumeration"))?;
                if !seen[k] {
                    seen[k] = true;
                    members.push(k);
                    queue.push_back(k);
                }
            }
        }
        members.sort_unstable();
        let representative = members.iter().map(|&i| &families[i]).min().expect("orbit is nonempty").clone();
        orbits.push(Orbit { representative, members });
    }
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(orbits)
}

/// Relations spanning each `V_v` modulo the images of the lower `V_u`.
pub fn family_presentation<F: FiniteField>(shape: &RelationShape, family: &RelationFamily<F>) -> PresentationInput<F> {
    let g = shape.generators().len();
    let mut relations = Vec::new();
    for (k, v) in shape.degrees().iter().enumerate() {
        let fresh = complement(&family.lower_span(shape, k), &family.subspaces[k]);
        for r in 0..fresh.rows() {
            let mut coeffs = vec![F::zero(); g];
            for (&i, &a) in shape.alive(k).iter().zip(fresh.row(r)) {
                coeffs[i] = a;
            }
            relations.push(Relation { degree: v.clone(), coeffs });
        }
    }
    PresentationInput::new(shape.n(), shape.xi0().clone(), relations).expect("relations address alive generators")
}

pub fn family_to_module<F: FiniteField>(shape: &RelationShape, family: &RelationFamily<F>) -> PersistenceModule<F> {
    present_cokernel(&family_presentation(shape, family))
}

/// The point `d_j(M) ⊆ F(ξ_{j-1})_v` for `(v, ·) ∈ ξ_j`, as an RREF matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct YCoordinate<F> {
    pub j: usize,
    pub degree: MultiDegree,
    pub multiplicity: usize,
    pub subspace: Matrix<F>,
}

/// Resolution of the kernel of `F₁ → F(ξ₀)` with `F₁` free on the given
/// relations: generator degrees of `F_0, F_1, …` and `d_1, d_2, …`.
fn resolve_relations<F: Field>(pres: &PresentationInput<F>) -> Result<(Vec<Vec<MultiDegree>>, Vec<Matrix<F>>)> {
    let n = pres.n;
    let rel_degrees: Vec<MultiDegree> = pres.relations.iter().map(|r| r.degree.clone()).collect();
    let bound = join(pres.generators.iter().chain(&rel_degrees)).unwrap_or_else(|_| MultiDegree::zero(n));
    let cols: Vec<Vec<F>> = pres.relations.iter().map(|r| r.coeffs.clone()).collect();
    let d1 = Matrix::from_rows(pres.generators.len(), &cols).transpose();
    let mut generators = vec![pres.generators.clone(), rel_degrees];
    let mut differentials = vec![d1];
    if !generators[1].is_empty() {
        extend_resolution(n, &Grid::new(bound), &mut generators, &mut differentials)?;
    }
    Ok((generators, differentials))
}

fn alive(gens: &[MultiDegree], v: &MultiDegree) -> Vec<usize> {
    (0..gens.len()).filter(|&i| gens[i].le_unchecked(v)).collect()
}

/// `Y`-coordinates of a presentation, with the generator multisets of the
/// resolution they come from.
pub fn y_coordinates<F: Field>(pres: &PresentationInput<F>) -> Result<(Vec<YCoordinate<F>>, Vec<DegreeMultiset>)> {
    let (gens, diffs) = resolve_relations(pres)?;
    let multisets: Vec<DegreeMultiset> =
        gens.iter().map(|g| DegreeMultiset::from_pairs(g.iter().map(|d| (d.clone(), 1)))).collect();
    let mut out = Vec::new();
    for j in 2..gens.len() {
        for (v, mult) in multisets[j].iter() {
            let d = diffs[j - 1].select_rows(&alive(&gens[j - 1], v)).select_cols(&alive(&gens[j], v));
            out.push(YCoordinate { j, degree: v.clone(), multiplicity: mult, subspace: d.column_space() });
        }
    }
    Ok((out, multisets))
}

const SYMBOLS: [&str; 4] = ["0", "∞", "1", "α"];

/// Which lines coincide, when every `V_v` is a line in the same `k²`:
/// lines are named `0, ∞, 1, α, …` in order of first appearance.
pub fn pattern_label<F: FiniteField>(shape: &RelationShape, family: &RelationFamily<F>) -> Option<String> {
    let g = shape.generators();
    if g.len() != 2 || g[0] != g[1] || (0..shape.degrees().len()).any(|k| shape.dim(k) != 1) {
        return None;
    }
    let mut seen: Vec<&Matrix<F>> = Vec::new();
    let names: Vec<String> = family
        .subspaces
        .iter()
        .map(|l| {
            let i = seen.iter().position(|s| *s == l).unwrap_or_else(|| {
                seen.push(l);
                seen.len() - 1
            });
            SYMBOLS.get(i).map_or_else(|| format!("λ{i}"), |s| s.to_string())
        })
        .collect();
    Some(format!("({})", names.join(",")))
}

/// A subspace as a projective point `[a:b:…]` when it is a line, otherwise
/// as the set of its RREF rows.
pub fn projective<F: Field>(m: &Matrix<F>) -> String {
    let row = |r: usize| format!("[{}]", m.row(r).iter().map(|a| a.to_string()).collect::<Vec<_>>().join(":"));
    if m.rows() == 1 {
        row(0)
    } else {
        format!("{{{}}}", (0..m.rows()).map(row).collect::<Vec<_>>().join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitInfo<F> {
    pub representative: RelationFamily<F>,
    pub size: usize,
    /// `ξ₀, …, ξ_n` of the module presented by the representative.
    pub xi: TorTable,
    pub y: Vec<YCoordinate<F>>,
    /// Whether the presented module has exactly the prescribed `ξ₀` and `ξ₁`.
    pub consistent: bool,
    pub pattern: Option<String>,
}

impl<F: FiniteField> OrbitInfo<F> {
    /// `(ξ₂, …, ξ_n)`.
    pub fn higher_xi(&self) -> Vec<DegreeMultiset> {
        (2..=self.xi.n).map(|j| self.xi.get(j)).collect()
    }

    /// `φ̄` of the orbit, each point written projectively.
    pub fn phi_bar(&self) -> Vec<String> {
        self.y.iter().map(|c| projective(&c.subspace)).collect()
    }
}

/// Orbits sharing `(ξ₂, …, ξ_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiClass {
    pub higher_xi: Vec<DegreeMultiset>,
    pub orbits: Vec<usize>,
    /// Distinct orbits of the class have distinct `Y`-coordinates.
    pub phi_bar_injective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport<F> {
    pub q: u32,
    pub shape: RelationShape,
    pub family_count: usize,
    pub orbits: Vec<OrbitInfo<F>>,
    pub classes: Vec<XiClass>,
    /// `Φ = (representative, Y)` takes distinct values on distinct orbits.
    pub phi_separates: bool,
}

impl<F: FiniteField> OrbitReport<F> {
    pub fn distinct_higher_xi(&self) -> usize {
        self.classes.len()
    }

    pub fn phi_bar_injective(&self) -> bool {
        self.classes.iter().all(|c| c.phi_bar_injective)
    }
}

fn spot_sample(members: &[usize]) -> Vec<usize> {
    if members.len() <= 5 {
        return members.to_vec();
    }
    let mut s: Vec<usize> = (0..5).map(|i| members[i * (members.len() - 1) / 4]).collect();
    s.dedup();
    s
}

fn orbit_info<F: FiniteField>(
    shape: &RelationShape,
    families: &[RelationFamily<F>],
    orbit: &Orbit<F>,
) -> Result<OrbitInfo<F>> {
    let rep = &orbit.representative;
    let pres = family_presentation(shape, rep);
    let module = present_cokernel(&pres);
    let table = xi(&module)?;
    let dims = module.dims_table();
    for i in spot_sample(&orbit.members) {
        let m = family_to_module(shape, &families[i]);
        if xi(&m)? != table || m.dims_table() != dims {
            return Err(Error::internal(format!("orbit invariants differ between members of the orbit of family {i}")));
        }
    }
    let consistent = table.get(0) == *shape.xi0() && table.get(1) == *shape.xi1();
    let (y, multisets) = y_coordinates(&pres)?;
    if consistent {
        for j in 2..=shape.n() {
            if multisets.get(j).cloned().unwrap_or_default() != table.get(j) {
                return Err(Error::internal(format!("ξ_{j} of the relation resolution differs from Tor")));
            }
        }
    }
    Ok(OrbitInfo {
        representative: rep.clone(),
        size: orbit.size(),
        xi: table,
        y,
        consistent,
        pattern: pattern_label(shape, rep),
    })
}

/// Enumerates `RF(ξ₀, ξ₁)` over `F`, partitions it into orbits and computes
/// the invariants of every orbit. Fails hard if `Φ` does not separate orbits.
pub fn classify<F: FiniteField>(shape: &RelationShape, budget: u128) -> Result<OrbitReport<F>> {
    let families = enumerate_families::<F>(shape, budget)?;
    let orbits = orbit_partition(shape, &families)?;
    let infos: Vec<OrbitInfo<F>> =
        orbits.par_iter().map(|o| orbit_info(shape, &families, o)).collect::<Result<_>>()?;

    let mut by_xi: Vec<(Vec<DegreeMultiset>, Vec<usize>)> = Vec::new();
    for (i, o) in infos.iter().enumerate() {
        let key = o.higher_xi();
        match by_xi.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(i),
            None => by_xi.push((key, vec![i])),
        }
    }
    let classes = by_xi
        .into_iter()
        .map(|(higher_xi, orbits)| {
            let ys: HashSet<&Vec<YCoordinate<F>>> = orbits.iter().map(|&i| &infos[i].y).collect();
            XiClass { phi_bar_injective: ys.len() == orbits.len(), higher_xi, orbits }
        })
        .collect();

    let points: HashSet<(&RelationFamily<F>, &Vec<YCoordinate<F>>)> =
        infos.iter().map(|o| (&o.representative, &o.y)).collect();
    if points.len() != infos.len() {
        return Err(Error::internal("Φ takes the same value on two distinct orbits"));
    }
    Ok(OrbitReport {
        q: F::order(),
        shape: shape.clone(),
        family_count: families.len(),
        orbits: infos,
        classes,
        phi_separates: true,
    })
}
