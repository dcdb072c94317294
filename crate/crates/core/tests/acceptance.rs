//! Runs the nine acceptance criteria and prints one PASS/FAIL line each.
//! Exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xitor::generate::{random_filtration, random_one_at_a_time, RandomSpec};
use xitor::hypertor::{chain_modules, d2, e1_page, hypertor_dims, recovered_homology};
use xitor::orbits::{classify, enumerate_families, orbit_partition, RelationShape, DEFAULT_BUDGET};
use xitor::persistence::{homology_module, single_step_check};
use xitor::tor::koszul_tor;
use xitor::{
    minimal_resolution, parse_mfc, xi, DegreeMultiset, Field, FiniteField, Grid, MultiDegree, F2, F3, F5,
};

const CIRCLE: &str = include_str!("../fixtures/circle_fig.mfc");
const ONE_AT_A_TIME: &str = include_str!("../fixtures/circle_oneatatime.mfc");
const SPHERE: &str = include_str!("../fixtures/sphere.mfc");
const FOUR_LINES: &str = include_str!("../fixtures/orbits_four_lines.json");
const CONTAINMENT: &str = include_str!("../fixtures/orbits_containment.json");
const ONE_PARAMETER: &str = include_str!("../fixtures/orbits_one_parameter.json");

type Outcome = Result<String, String>;

fn ms(s: &str) -> DegreeMultiset {
    s.parse().unwrap()
}

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn circle_xi<F: Field>() -> Result<(), String> {
    let p = F::characteristic();
    let x = parse_mfc::<F>(CIRCLE).map_err(|e| e.to_string())?;
    let h0 = xi(&homology_module(&x, 0).h).map_err(|e| e.to_string())?;
    let h1 = xi(&homology_module(&x, 1).h).map_err(|e| e.to_string())?;
    check(h0.get(0) == ms("{(0,0):3}"), format!("p={p}: ξ₀(H₀) = {}", h0.get(0)))?;
    check(h0.get(1) == ms("{(0,1):1,(1,0):1,(2,0):1}"), format!("p={p}: ξ₁(H₀) = {}", h0.get(1)))?;
    check(h0.get(2) == ms("{(2,1):1}"), format!("p={p}: ξ₂(H₀) = {}", h0.get(2)))?;
    check(h1.get(0) == ms("{(2,1):1}"), format!("p={p}: ξ₀(H₁) = {}", h1.get(0)))?;
    check(h1.get(1).is_empty() && h1.get(2).is_empty(), format!("p={p}: H₁ is not free"))
}

fn criterion_1() -> Outcome {
    circle_xi::<F2>()?;
    circle_xi::<F3>()?;
    circle_xi::<F5>()?;
    Ok("circle ξ tables exact over p = 2, 3, 5".into())
}

fn criterion_2() -> Outcome {
    let x = parse_mfc::<F3>(CIRCLE).map_err(|e| e.to_string())?;
    let h = hypertor_dims(&x).map_err(|e| e.to_string())?;
    check(h[0] == ms("{(0,0):3}"), format!("ℓ=0: {}", h[0]))?;
    check(h[1] == ms("{(0,1):1,(1,0):1,(2,0):1}"), format!("ℓ=1: {}", h[1]))?;
    check(h[2..].iter().all(DegreeMultiset::is_empty), "ℓ≥2 nonzero")?;
    Ok(format!("hypertor = {h:?}"))
}

fn circle_d2<F: Field>() -> Result<i64, String> {
    let x = parse_mfc::<F>(CIRCLE).map_err(|e| e.to_string())?;
    let m = d2(&x, 0).map_err(|e| e.to_string())?;
    let at = MultiDegree::new(vec![2, 1]);
    check(m.rows == [at.clone()] && m.cols == [at], format!("d² is {}×{}", m.rows.len(), m.cols.len()))?;
    check(m.rank() == 1, "d² is not invertible")?;
    Ok(m.matrix[(0, 0)].to_signed())
}

fn criterion_3() -> Outcome {
    let e2 = circle_d2::<F2>()?;
    let e3 = circle_d2::<F3>()?;
    let e5 = circle_d2::<F5>()?;
    check(e3 == -1 && e5 == -1, format!("entries {e3} (p=3), {e5} (p=5)"))?;
    Ok(format!("d²₂,₀ at (2,1): {e2} (p=2), {e3} (p=3), {e5} (p=5)"))
}

fn criterion_4() -> Outcome {
    let x = parse_mfc::<F3>(ONE_AT_A_TIME).map_err(|e| e.to_string())?;
    let r = recovered_homology(&x).map_err(|e| e.to_string())?;
    let dims: Vec<usize> = r.t_dims.iter().copied().take_while(|&d| d > 0).collect();
    check(dims == [5, 7, 2], format!("T dims {:?}", r.t_dims))?;
    check(r.t_ranks[1] == 4 && r.t_ranks[2] == 2, format!("ranks {:?}", r.t_ranks))?;
    check(r.recovered[..3] == [1, 1, 0], format!("recovered {:?}", r.recovered))?;
    check(r.matches, "recovered Betti numbers differ from direct ones")?;
    Ok(format!("T: k²→k⁷→k⁵, ranks 2 and 4, Betti {:?}", &r.recovered[..3]))
}

fn criterion_5() -> Outcome {
    let x = parse_mfc::<F5>(SPHERE).map_err(|e| e.to_string())?;
    check(e1_page(&x).map_err(|e| e.to_string())?.verdict, "E¹ verdict false")?;
    let r = recovered_homology(&x).map_err(|e| e.to_string())?;
    check(r.q_dims[2] == ms("{(3,0):1}"), format!("Q₂ = {}", r.q_dims[2]))?;
    check(r.q_dims[3] == ms("{(3,2):1}"), format!("Q₃ = {}", r.q_dims[3]))?;
    check(r.q_acyclic(), format!("H(Q) = {:?}", r.q_homology))?;
    check(r.recovered[..3] == [1, 0, 1], format!("recovered {:?}", r.recovered))?;
    Ok("verdict true, Q₂ = k(3,0), Q₃ = k(3,2), H(Q) = 0, Betti (1,0,1)".into())
}

fn properties<F: Field>(seed: u64) -> Result<(), String> {
    let p = F::characteristic();
    let ctx = |what: &str| format!("p={p}, seed {seed}: {what}");
    let spec = RandomSpec::default();
    let x = random_filtration::<F, _>(&mut ChaCha8Rng::seed_from_u64(seed), &spec);
    let n = x.n();
    let chains = chain_modules(&x);
    for c in &chains {
        check(koszul_tor(c, n).map_err(|e| e.to_string())?.xi().is_empty(), ctx("Tor_n(C_p) ≠ 0"))?;
    }
    let h = hypertor_dims(&x).map_err(|e| e.to_string())?;
    check(h[n + x.dim().unwrap_or(0)..].iter().all(DegreeMultiset::is_empty), ctx("hypertor above n + dim X"))?;
    let mut modules = chains;
    modules.extend((0..=x.dim().unwrap_or(0)).map(|q| homology_module(&x, q).h));
    for m in &modules {
        let res = minimal_resolution(m).map_err(|e| e.to_string())?;
        for j in 0..=n {
            check(koszul_tor(m, j).map_err(|e| e.to_string())?.xi() == res.xi(j), ctx("Koszul ≠ resolution"))?;
        }
        for v in Grid::new(m.bound().clone()).iter() {
            let chi: i64 = (0..=n).map(|j| (-1i64).pow(j as u32) * res.alive(j, &v).len() as i64).sum();
            check(chi == m.dim(&v) as i64, ctx("Euler characteristic"))?;
        }
        let wide = m.widen(m.bound().plus(&MultiDegree::ones(n)));
        check(xi(&wide).map_err(|e| e.to_string())? == xi(m).map_err(|e| e.to_string())?, ctx("widening"))?;
    }
    let y = random_one_at_a_time::<F, _>(&mut ChaCha8Rng::seed_from_u64(seed), &spec);
    check(single_step_check(&y).ok, ctx("generator broke the one-at-a-time hypothesis"))?;
    let r = recovered_homology(&y).map_err(|e| e.to_string())?;
    check(r.matches, ctx("recovered Betti ≠ direct Betti"))
}

fn criterion_6() -> Outcome {
    let seeds = 70u64;
    for seed in 0..seeds {
        properties::<F2>(seed)?;
        properties::<F3>(seed)?;
        properties::<F5>(seed)?;
    }
    Ok(format!("{} random filtrations and {} one-at-a-time filtrations", 3 * seeds, 3 * seeds))
}

/// Table rows: representative and ξ₂ as printed.
const TABLE: [(&str, &str); 15] = [
    ("(0,1,∞,α)", "{(2,3):1,(3,2):1}"),
    ("(0,0,∞,1)", "{(1,3):1,(3,2):1}"),
    ("(0,∞,0,1)", "{(2,3):1,(3,2):1}"),
    ("(0,∞,1,0)", "{(2,3):1,(3,3):1}"),
    ("(0,∞,∞,1)", "{(2,2):1,(3,3):1}"),
    ("(0,∞,1,∞)", "{(2,3):1,(3,2):1}"),
    ("(0,∞,1,1)", "{(2,3):1,(3,1):1}"),
    ("(0,0,∞,∞)", "{(1,3):1,(3,1):1}"),
    ("(0,∞,0,∞)", "{(2,3):1,(3,2):1}"),
    ("(0,∞,∞,0)", "{(2,2):1,(3,3):1}"),
    ("(0,0,0,∞)", "{(1,3):1,(2,2):1}"),
    ("(0,0,∞,0)", "{(1,3):1,(3,2):1}"),
    ("(0,∞,0,0)", "{(2,3):1,(3,1):1}"),
    ("(∞,0,0,0)", "{(2,2):1,(3,1):1}"),
    ("(0,0,0,0)", "{(1,3):1,(2,2):1,(3,1):1}"),
];

fn coincidences(label: &str) -> Vec<usize> {
    let inner = label.trim_start_matches('(').trim_end_matches(')');
    let mut seen: Vec<&str> = Vec::new();
    inner
        .split(',')
        .map(|s| {
            seen.iter().position(|x| *x == s).unwrap_or_else(|| {
                seen.push(s);
                seen.len() - 1
            })
        })
        .collect()
}

fn criterion_7() -> Outcome {
    let shape = RelationShape::from_json(FOUR_LINES).map_err(|e| e.to_string())?;
    let r = classify::<F5>(&shape, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let mut failures = Vec::new();
    if r.family_count != 1296 {
        failures.push(format!("{} families", r.family_count));
    }
    if r.orbits.len() != 17 {
        failures.push(format!("{} orbits", r.orbits.len()));
    }
    if r.distinct_higher_xi() != 9 {
        failures.push(format!("{} distinct ξ₂, expected 9", r.distinct_higher_xi()));
    }
    let generic = ms("{(2,3):1,(3,2):1}");
    let all_distinct = coincidences("(0,1,∞,α)");
    for o in &r.orbits {
        if o.pattern.as_deref().map(coincidences) == Some(all_distinct.clone()) && o.xi.get(2) != generic {
            failures.push(format!("generic orbit with ξ₂ = {}", o.xi.get(2)));
        }
    }
    for (label, printed) in &TABLE[1..] {
        let key = coincidences(label);
        match r.orbits.iter().find(|o| o.pattern.as_deref().map(coincidences) == Some(key.clone())) {
            Some(o) if o.xi.get(2) == ms(printed) => {}
            Some(o) => failures.push(format!("{label}: ξ₂ = {}, table has {printed}", o.xi.get(2))),
            None => failures.push(format!("{label}: no orbit")),
        }
    }
    if !r.phi_bar_injective() {
        failures.push("φ̄ not injective on some ξ₂ class".into());
    }
    if failures.is_empty() {
        Ok("17 orbits, 9 ξ₂ classes, all table rows, φ̄ injective".into())
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_8() -> Outcome {
    let shape = RelationShape::from_json(CONTAINMENT).map_err(|e| e.to_string())?;
    let r = classify::<F3>(&shape, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    check(r.phi_separates, "Φ does not separate orbits")?;
    let class = r
        .classes
        .iter()
        .find(|c| c.higher_xi == vec![ms("{(2,1):1}")])
        .ok_or("no orbit with ξ₂ = {(2,1):1}")?;
    let first = r.orbits[class.orbits[0]].phi_bar();
    let same = class.orbits.iter().filter(|&&i| r.orbits[i].phi_bar() == first).count();
    check(same >= 3, format!("only {same} orbits share φ̄ = {first:?}"))?;
    Ok(format!("{} orbits; {same} share ξ₂ = {{(2,1):1}} and φ̄ = {first:?}; Φ separates", r.orbits.len()))
}

fn orbit_count<F: FiniteField>(shape: &RelationShape) -> Result<usize, String> {
    let fams = enumerate_families::<F>(shape, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    Ok(orbit_partition(shape, &fams).map_err(|e| e.to_string())?.len())
}

fn criterion_9() -> Outcome {
    let shape = RelationShape::from_json(ONE_PARAMETER).map_err(|e| e.to_string())?;
    let counts = [orbit_count::<F2>(&shape)?, orbit_count::<F3>(&shape)?, orbit_count::<F5>(&shape)?];
    check(counts == [2, 2, 2], format!("orbit counts {counts:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let trials = 40;
    for _ in 0..trials {
        let g = rng.gen_range(1..=4);
        let k = rng.gen_range(0..=3);
        let d = |rng: &mut ChaCha8Rng, lo, hi| MultiDegree::new(vec![rng.gen_range(lo..=hi)]);
        let xi0 = DegreeMultiset::from_pairs((0..g).map(|_| (d(&mut rng, 0, 3), 1)));
        let xi1 = DegreeMultiset::from_pairs((0..k).map(|_| (d(&mut rng, 1, 5), 1)));
        let s = RelationShape::new(1, xi0, xi1).map_err(|e| e.to_string())?;
        let c = [orbit_count::<F2>(&s)?, orbit_count::<F3>(&s)?, orbit_count::<F5>(&s)?];
        check(c[0] == c[1] && c[1] == c[2], format!("{}: counts {c:?}", s.to_json()))?;
    }
    Ok(format!("2 orbits for q = 2, 3, 5; {trials} random inputs with q-independent counts"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("circle ξ tables", criterion_1),
        ("circle hypertor", criterion_2),
        ("circle d²", criterion_3),
        ("one-at-a-time T complex", criterion_4),
        ("sphere recovery", criterion_5),
        ("randomized property suite", criterion_6),
        ("orbits of four lines over GF(5)", criterion_7),
        ("orbits with containment over GF(3)", criterion_8),
        ("one-parameter orbits", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
