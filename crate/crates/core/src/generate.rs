//! Random multifiltered simplicial complexes for property tests.

use std::collections::HashMap;

use rand::Rng;

use crate::complex::{Cell, MultiFilteredComplex};
use crate::field::Field;
use crate::grading::MultiDegree;

/// Shape of the random complexes.
#[derive(Clone, Copy, Debug)]
pub struct RandomSpec {
    pub n: usize,
    pub max_vertices: usize,
    pub max_coord: u32,
    pub max_entries: usize,
    pub edge_probability: f64,
    pub triangle_probability: f64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            n: 2,
            max_vertices: 4,
            max_coord: 3,
            max_entries: 2,
            edge_probability: 0.6,
            triangle_probability: 0.5,
        }
    }
}

struct Skeleton {
    /// Vertex lists, faces before cofaces.
    simplices: Vec<Vec<usize>>,
}

fn skeleton<R: Rng + ?Sized>(rng: &mut R, spec: &RandomSpec) -> Skeleton {
    let nv = rng.gen_range(1..=spec.max_vertices.max(1));
    let mut simplices: Vec<Vec<usize>> = (0..nv).map(|v| vec![v]).collect();
    let mut edges = Vec::new();
    for a in 0..nv {
        for b in a + 1..nv {
            if rng.gen_bool(spec.edge_probability) {
                edges.push(vec![a, b]);
            }
        }
    }
    let has = |e: &[usize]| edges.iter().any(|x| x == e);
    let mut triangles = Vec::new();
    for a in 0..nv {
        for b in a + 1..nv {
            for c in b + 1..nv {
                if has(&[a, b]) && has(&[b, c]) && has(&[a, c]) && rng.gen_bool(spec.triangle_probability) {
                    triangles.push(vec![a, b, c]);
                }
            }
        }
    }
    simplices.extend(edges);
    simplices.extend(triangles);
    Skeleton { simplices }
}

fn minimal_elements(mut ds: Vec<MultiDegree>) -> Vec<MultiDegree> {
    ds.sort();
    ds.dedup();
    let keep: Vec<bool> =
        (0..ds.len()).map(|i| !(0..ds.len()).any(|k| k != i && ds[k].leq(&ds[i]).unwrap_or(false))).collect();
    ds.into_iter().zip(keep).filter(|(_, k)| *k).map(|(d, _)| d).collect()
}

fn assemble<F: Field>(
    n: usize,
    skel: &Skeleton,
    mut entries: impl FnMut(&[usize], &[Vec<MultiDegree>]) -> Vec<MultiDegree>,
) -> MultiFilteredComplex<F> {
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut cells: Vec<Cell<F>> = Vec::new();
    for s in &skel.simplices {
        let mut boundary = Vec::new();
        let mut face_entries = Vec::new();
        if s.len() > 1 {
            for drop in 0..s.len() {
                let face: Vec<usize> = s.iter().enumerate().filter(|&(k, _)| k != drop).map(|(_, &v)| v).collect();
                let f = index[&face];
                let sign = if drop % 2 == 0 { F::one() } else { -F::one() };
                boundary.push((f, sign));
                face_entries.push(cells[f].entries.clone());
            }
        }
        let id = format!("s{}", s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("_"));
        index.insert(s.clone(), cells.len());
        cells.push(Cell { id, dim: s.len() - 1, boundary, entries: entries(s, &face_entries) });
    }
    MultiFilteredComplex::new(n, cells).expect("generated complexes are valid")
}

/// A random simplicial complex (dimension ≤ 2) with random face-monotone
/// entry antichains on the grid `[0, max_coord]ⁿ`.
pub fn random_filtration<F: Field, R: Rng + ?Sized>(rng: &mut R, spec: &RandomSpec) -> MultiFilteredComplex<F> {
    let skel = skeleton(rng, spec);
    let n = spec.n;
    assemble(n, &skel, |_, faces| {
        let k = rng.gen_range(1..=spec.max_entries.max(1));
        let ds = (0..k)
            .map(|_| {
                let mut u = MultiDegree::new((0..n).map(|_| rng.gen_range(0..=spec.max_coord)).collect());
                for f in faces {
                    u = MultiDegree::max(&u, &f[rng.gen_range(0..f.len())]);
                }
                u
            })
            .collect();
        minimal_elements(ds)
    })
}

/// A random filtration in which every lattice step adds at most one cell.
/// Entry coordinates are drawn distinct along every axis, then replaced by
/// their ranks.
pub fn random_one_at_a_time<F: Field, R: Rng + ?Sized>(rng: &mut R, spec: &RandomSpec) -> MultiFilteredComplex<F> {
    let skel = skeleton(rng, spec);
    let n = spec.n;
    let mut counter = 0u32;
    let raw: MultiFilteredComplex<F> = assemble(n, &skel, |_, faces| {
        let k = rng.gen_range(1..=spec.max_entries.max(1));
        let ds = (0..k)
            .map(|_| {
                let mut c: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=spec.max_coord)).collect();
                for f in faces {
                    let e = &f[rng.gen_range(0..f.len())];
                    for (i, x) in c.iter_mut().enumerate() {
                        *x = (*x).max(e.get(i) / 1000 + 1);
                    }
                }
                counter += 1;
                MultiDegree::new(c.into_iter().map(|x| x * 1000 + counter).collect())
            })
            .collect();
        minimal_elements(ds)
    });
    let mut ranks: Vec<Vec<u32>> = vec![Vec::new(); n];
    for c in raw.cells() {
        for e in &c.entries {
            for (i, r) in ranks.iter_mut().enumerate() {
                r.push(e.get(i));
            }
        }
    }
    for r in ranks.iter_mut() {
        r.sort_unstable();
    }
    let cells: Vec<Cell<F>> = raw
        .cells()
        .iter()
        .map(|c| Cell {
            id: c.id.clone(),
            dim: c.dim,
            boundary: c.boundary.clone(),
            entries: c
                .entries
                .iter()
                .map(|e| {
                    MultiDegree::new(
                        (0..n).map(|i| ranks[i].binary_search(&e.get(i)).expect("present") as u32).collect(),
                    )
                })
                .collect(),
        })
        .collect();
    MultiFilteredComplex::new(n, cells).expect("rank compression preserves the order")
}
