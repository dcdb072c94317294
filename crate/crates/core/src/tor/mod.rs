//! `Tor_j(M, k)` by Koszul homology and by minimal free resolutions, and the
//! invariants `ξ_0, …, ξ_n`.

mod koszul;
mod resolution;

use std::fmt;

use serde::Serialize;

pub use koszul::{koszul_differential, koszul_sign, koszul_tor, tor_at, KBlock, KoszulLayout, TorAt, TorGroup};
pub use resolution::{minimal_resolution, MinimalResolution};
pub(crate) use resolution::extend_resolution;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grading::DegreeMultiset;
use crate::persistence::PersistenceModule;

/// `ξ_0, …, ξ_n` of a module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorTable {
    pub n: usize,
    pub xi: Vec<DegreeMultiset>,
}

impl TorTable {
    pub fn get(&self, j: usize) -> DegreeMultiset {
        self.xi.get(j).cloned().unwrap_or_default()
    }
}

impl fmt::Display for TorTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, x) in self.xi.iter().enumerate() {
            writeln!(f, "xi{j} = {x}")?;
        }
        Ok(())
    }
}

/// Koszul homology for every `j`, cross-checked against the generator degrees
/// of the minimal resolution.
pub fn xi<F: Field>(m: &PersistenceModule<F>) -> Result<TorTable> {
    let n = m.n();
    let koszul: Vec<DegreeMultiset> = (0..=n).map(|j| koszul_tor(m, j).map(|t| t.xi())).collect::<Result<_>>()?;
    let res = minimal_resolution(m)?;
    for (j, k) in koszul.iter().enumerate() {
        let r = res.xi(j);
        if *k != r {
            return Err(Error::internal(format!("ξ_{j}: Koszul gives {k}, resolution gives {r}")));
        }
    }
    Ok(TorTable { n, xi: koszul })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::complex::{parse_mfc, parse_presentation};
    use crate::field::Fp;
    use crate::grading::{grid, MultiDegree};
    use crate::persistence::{homology_module, present_cokernel};

    type F2 = Fp<2>;
    type F3 = Fp<3>;
    type F5 = Fp<5>;

    const CIRCLE: &str = include_str!("../../fixtures/circle_fig.mfc");

    fn d(c: &[u32]) -> MultiDegree {
        MultiDegree::new(c.to_vec())
    }

    #[test]
    fn circle_h0_tor2() {
        let x = parse_mfc::<F5>(CIRCLE).unwrap();
        let h0 = homology_module(&x, 0).h;
        assert_eq!(koszul_tor(&h0, 2).unwrap().xi().to_string(), "{(2,1):1}");
    }

    fn circle_xi<F: Field>() {
        let x = parse_mfc::<F>(CIRCLE).unwrap();
        let t0 = xi(&homology_module(&x, 0).h).unwrap();
        assert_eq!(t0.get(0).to_string(), "{(0,0):3}");
        assert_eq!(t0.get(1).to_string(), "{(0,1):1,(1,0):1,(2,0):1}");
        assert_eq!(t0.get(2).to_string(), "{(2,1):1}");
        let t1 = xi(&homology_module(&x, 1).h).unwrap();
        assert_eq!(t1.get(0).to_string(), "{(2,1):1}");
        assert!(t1.get(1).is_empty() && t1.get(2).is_empty());
    }

    #[test]
    fn circle_xi_all_fields() {
        circle_xi::<F2>();
        circle_xi::<F3>();
        circle_xi::<F5>();
    }

    #[test]
    fn circle_resolution_ranks() {
        let x = parse_mfc::<F3>(CIRCLE).unwrap();
        let h0 = homology_module(&x, 0).h;
        let res = minimal_resolution(&h0).unwrap();
        assert_eq!(res.length(), Some(2));
        let d2 = res.differential(2);
        assert_eq!((d2.rows(), d2.cols()), (3, 1));
        assert!((0..3).all(|r| !d2[(r, 0)].is_zero()));
        let d1 = res.differential(1);
        assert_eq!((d1.rows(), d1.cols(), d1.rank()), (3, 3, 2));
        // per-degree ranks of the displayed d_1 = [[-y,0,-x²],[y,-x,0],[0,x,x²]] and d_2 = (-xy, x², -y)
        let expect_d1 = [((0, 1), 1), ((1, 0), 1), ((1, 1), 2), ((2, 0), 2), ((2, 1), 2)];
        for ((a, b), r) in expect_d1 {
            assert_eq!(res.differential_at(1, &d(&[a, b])).rank(), r, "rank d1 at ({a},{b})");
        }
        assert_eq!(res.differential_at(2, &d(&[2, 1])).rank(), 1);
        assert_eq!(res.differential_at(2, &d(&[2, 0])).rank(), 0);
    }

    #[test]
    fn one_variable_example() {
        let pres = parse_presentation::<F3>(
            r#"{"n":1,"xi0":[[[0],2],[[2],1]],"relations":[{"degree":[4],"coeffs":{"2":1}}]}"#,
        )
        .unwrap();
        let t = xi(&present_cokernel(&pres)).unwrap();
        assert_eq!(t.get(0).to_string(), "{(0):2,(2):1}");
        assert_eq!(t.get(1).to_string(), "{(4):1}");
    }

    #[test]
    fn generic_representative_syzygies() {
        let pres = parse_presentation::<F5>(
            r#"{"n":2,"xi0":[[[0,0],2]],"relations":[
                {"degree":[0,3],"coeffs":{"0":1}},
                {"degree":[1,2],"coeffs":{"1":1}},
                {"degree":[2,1],"coeffs":{"0":-1,"1":1}},
                {"degree":[3,0],"coeffs":{"0":-1,"1":2}}]}"#,
        )
        .unwrap();
        let m = present_cokernel(&pres);
        let res = minimal_resolution(&m).unwrap();
        assert_eq!(res.xi(2).to_string(), "{(2,3):1,(3,2):1}");
        // x²[y³,0] − xy[0,xy²] + y²[−x²y,x²y] = 0 up to the sign of our relation basis
        let d2 = res.differential(2);
        let col: Vec<i64> = (0..4).map(|r| d2[(r, 0)].to_signed()).collect();
        let rel = res.differential(1);
        let zero: Vec<F5> = rel.mul_vec(&d2.column(0));
        assert!(zero.iter().all(|x| x.is_zero()));
        assert_eq!(col[3], 0);
        assert!(col[..3].iter().all(|&c| c != 0));
    }

    #[test]
    fn euler_characteristic_matches_dims() {
        let x = parse_mfc::<F3>(CIRCLE).unwrap();
        let h0 = homology_module(&x, 0).h;
        let t = xi(&h0).unwrap();
        for v in grid(&d(&[3, 3])) {
            let chi: i64 = t
                .xi
                .iter()
                .enumerate()
                .map(|(j, s)| if j % 2 == 0 { 1 } else { -1 } * s.count_below(&v) as i64)
                .sum();
            assert_eq!(chi, h0.dim(&v) as i64);
        }
    }
}
