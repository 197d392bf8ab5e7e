//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Expected values are written out here rather than read from the shipped
//! golden file, so the two act as independent records.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use polychow_core::blocks::compositions;
use polychow_core::grassmann::{
    gale_dual, gm_invariance_report, intersect_with_coordinate_subspace, is_generic, multiplicity_index,
    orbit_polytope, plucker, project_away, random_full_rank, random_scales, seeded_rng, support_matroid,
    support_polymatroid, volume_identity_check, weight_multiplicity_index, Sign,
};
use polychow_core::linalg::{rat_vec, subsets};
use polychow_core::polymatroid::{
    base_polytope_of, candidate_vectors, check_exchange, is_polymatroid_polytope, project_matroid, CountVec,
};
use polychow_core::relations::{
    divides_exactly, lift_relation, plucker_vars, three_term_relations, vars, verify_balanced_identity, Monomial,
    MultiPoly,
};
use polychow_core::secondary::{complementary_pair_order, reorder, secondary_polytope, weight_config, EnumOptions};
use polychow_core::{BlockStructure, Error, Matroid, Polymatroid, Polytope};

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

const SEED: u64 = 20240601;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn blocks(s: &str) -> BlockStructure {
    BlockStructure::parse(s).unwrap()
}

fn points(vs: &[&[i64]]) -> Vec<polychow_core::linalg::RatVec> {
    vs.iter().map(|v| rat_vec(v)).collect()
}

fn secondary_golden(
    r: &str,
    paired: bool,
    expected: &[&[u64]],
) -> std::result::Result<polychow_core::secondary::SecondaryPolytope, String> {
    let cfg = weight_config(2, &blocks(r)).map_err(|e| e.to_string())?;
    let sec = secondary_polytope(&cfg, EnumOptions::default()).map_err(|e| e.to_string())?;
    ensure(sec.triangulations.len() == expected.len(), format!("{} triangulations", sec.triangulations.len()))?;
    let perm = if paired { complementary_pair_order(2, 4).unwrap() } else { (0..6).collect() };
    let got: BTreeSet<Vec<u64>> = sec.char_vectors.iter().map(|v| reorder(v, &perm)).collect();
    let want: BTreeSet<Vec<u64>> = expected.iter().map(|v| v.to_vec()).collect();
    ensure(got == want, format!("char vectors {got:?}"))?;
    Ok(sec)
}

fn criterion_1() -> Outcome {
    let sec = secondary_golden("1,1,1,1", true, &[&[4, 4, 2, 2, 2, 2], &[2, 2, 4, 4, 2, 2], &[2, 2, 2, 2, 4, 4]])?;
    let lattice = sec.polytope.lattice_points();
    ensure(lattice.len() == 6, format!("{} lattice points", lattice.len()))?;
    // midpoints in the paired order 12,34,13,24,14,23, mapped to lexicographic order
    let perm = complementary_pair_order(2, 4).unwrap();
    for mid in [[3, 3, 3, 3, 2, 2], [3, 3, 2, 2, 3, 3], [2, 2, 3, 3, 3, 3]] {
        let mut lex = [0i64; 6];
        for (k, &label) in perm.iter().enumerate() {
            lex[label] = mid[k];
        }
        ensure(sec.polytope.contains(&rat_vec(&lex)), format!("midpoint {mid:?} missing"))?;
    }
    Ok("3 triangulations, 3 golden vectors, 6 lattice points with the 3 midpoints".into())
}

fn criterion_2() -> Outcome {
    let sec = secondary_golden(
        "1,1,2",
        false,
        &[
            &[1, 2, 0, 2, 0, 1],
            &[1, 2, 0, 0, 2, 1],
            &[1, 0, 2, 0, 2, 1],
            &[1, 0, 2, 2, 0, 1],
            &[2, 1, 0, 1, 0, 2],
            &[2, 1, 0, 0, 1, 2],
            &[2, 0, 1, 0, 1, 2],
            &[2, 0, 1, 1, 0, 2],
        ],
    )?;
    let sigma = &sec.polytope;
    ensure(
        sigma.affine_dim() == 3 && sigma.vertices().len() == 8,
        format!("dim {}, {} vertices", sigma.affine_dim(), sigma.vertices().len()),
    )?;
    // the two layers x12 = 1 and x12 = 2 are squares with the same edge directions
    let v = points(&[&[1, 2, 0, 2, 0, 1], &[1, 2, 0, 0, 2, 1], &[1, 0, 2, 0, 2, 1], &[1, 0, 2, 2, 0, 1]]);
    let w = points(&[&[2, 1, 0, 1, 0, 2], &[2, 1, 0, 0, 1, 2], &[2, 0, 1, 0, 1, 2], &[2, 0, 1, 1, 0, 2]]);
    for layer in [&v, &w] {
        let q = Polytope::hull(layer).unwrap();
        ensure(q.affine_dim() == 2 && q.vertices().len() == 4, "layer is not a quadrilateral")?;
        for k in 0..4 {
            let (a, b, c) = (&layer[k], &layer[(k + 1) % 4], &layer[(k + 2) % 4]);
            ensure(q.has_edge(a, b), "layer edge missing")?;
            let e1 = polychow_core::linalg::sub(b, a);
            let e2 = polychow_core::linalg::sub(c, b);
            let dot = |x: &[_], y: &[_]| polychow_core::linalg::dot(x, y);
            ensure(dot(&e1, &e2).is_zero() && dot(&e1, &e1) == dot(&e2, &e2), "layer is not a square")?;
        }
    }
    for k in 0..4 {
        let dv = polychow_core::linalg::sub(&v[(k + 1) % 4], &v[k]);
        let dw = polychow_core::linalg::sub(&w[(k + 1) % 4], &w[k]);
        let scaled: Vec<_> = dw.iter().map(|x| x * BigInt::from(2)).collect();
        ensure(dv == scaled, "layer edges are not parallel")?;
    }
    Ok("8 triangulations, v1..v4 and w1..w4, two parallel squares in a 3-polytope".into())
}

fn criterion_3() -> Outcome {
    let sec = secondary_golden(
        "2,2",
        false,
        &[&[1, 2, 0, 0, 0, 1], &[1, 0, 2, 0, 0, 1], &[1, 0, 0, 2, 0, 1], &[1, 0, 0, 0, 2, 1], &[2, 0, 0, 0, 0, 2]],
    )?;
    let sigma = &sec.polytope;
    let base =
        Polytope::hull(&points(&[&[1, 2, 0, 0, 0, 1], &[1, 0, 2, 0, 0, 1], &[1, 0, 0, 2, 0, 1], &[1, 0, 0, 0, 2, 1]]))
            .unwrap();
    let apex = rat_vec(&[2, 0, 0, 0, 0, 2]);
    ensure(sigma.vertices().len() == 5, format!("{} vertices", sigma.vertices().len()))?;
    ensure(base.affine_dim() == 3 && sigma.affine_dim() == 4, "not a pyramid over a tetrahedron")?;
    ensure(sigma.has_face(&base) && sigma.is_vertex(&apex), "tetrahedron is not a facet opposite the apex")?;
    Ok("5 triangulations, v1..v5, pyramid over the tetrahedron v1..v4 with apex v5".into())
}

fn criterion_4() -> Outcome {
    let b = blocks("1,2,2");
    let images: BTreeMap<Vec<u32>, usize> =
        subsets(5, 3).iter().map(|s| b.project_subset(s)).counts().into_iter().collect();
    let want: BTreeMap<Vec<u32>, usize> =
        [(vec![1, 1, 1], 4), (vec![1, 2, 0], 1), (vec![1, 0, 2], 1), (vec![0, 1, 2], 2), (vec![0, 2, 1], 2)]
            .into_iter()
            .collect();
    ensure(images == want, format!("images {images:?}"))?;
    let q = b.projected_hypersimplex(3).unwrap();
    ensure(q.vertices().len() == 4, format!("{} hull vertices", q.vertices().len()))?;
    let mid = rat_vec(&[1, 1, 1]);
    ensure(!q.is_vertex(&mid) && q.has_edge(&rat_vec(&[1, 2, 0]), &rat_vec(&[1, 0, 2])), "(1,1,1) placement")?;
    let seg = Polytope::hull(&points(&[&[1, 2, 0], &[1, 0, 2]])).unwrap();
    ensure(seg.contains(&mid), "(1,1,1) not on the long edge")?;
    Ok("image multiset exact, 4 hull vertices, (1,1,1) interior to the edge (1,2,0)-(1,0,2)".into())
}

fn criterion_5() -> Outcome {
    let set = |vs: &[&[u32]]| vs.iter().map(|v| v.to_vec()).collect::<BTreeSet<CountVec>>();
    let seg = check_exchange(&set(&[&[1, 1, 1], &[1, 2, 0]])).map_err(|e| e.to_string())?;
    let corners = check_exchange(&set(&[&[1, 2, 0], &[1, 0, 2], &[0, 1, 2], &[0, 2, 1]])).map_err(|e| e.to_string())?;
    ensure(seg && !corners, format!("segment {seg}, corners {corners}"))?;
    Ok("segment satisfies exchange, trapezoid corners do not".into())
}

fn criterion_6() -> Outcome {
    let mut total = 0usize;
    let mut literal_mismatch = Vec::new();
    let mut corrected_mismatch = 0usize;
    for m in 1..=3usize {
        for caps in (0..m).map(|_| 1..=2u32).multi_cartesian_product() {
            let b = BlockStructure::from_caps(&caps).unwrap();
            let top: u32 = caps.iter().sum();
            for d in 0..=3u32.min(top) {
                let cands = candidate_vectors(d, &caps);
                for mask in 1u32..(1 << cands.len()) {
                    let bases: BTreeSet<CountVec> =
                        (0..cands.len()).filter(|i| mask >> i & 1 == 1).map(|i| cands[i].clone()).collect();
                    total += 1;
                    let exchange = check_exchange(&bases).unwrap();
                    let hull = base_polytope_of(&bases).unwrap();
                    let criterion = is_polymatroid_polytope(&hull, d as usize, &b);
                    if exchange != criterion {
                        literal_mismatch.push((caps.clone(), bases.clone()));
                    }
                    let lattice: BTreeSet<CountVec> = hull
                        .lattice_points()
                        .iter()
                        .map(|p| p.iter().map(|x| u32::try_from(x).unwrap()).collect())
                        .collect();
                    if exchange != (criterion && lattice == bases) {
                        corrected_mismatch += 1;
                    }
                }
            }
        }
    }
    let summary = format!(
        "{total} raw candidate sets; exchange <=> polytope criterion disagrees on {}; \
         exchange <=> (criterion and B = lattice points of its hull) disagrees on {corrected_mismatch}",
        literal_mismatch.len()
    );
    ensure(corrected_mismatch == 0, summary.clone())?;
    if let Some((caps, bases)) = literal_mismatch.first() {
        return Err(format!("{summary}; e.g. caps {caps:?}, B = {bases:?}"));
    }
    Ok(summary)
}

fn criterion_7() -> Outcome {
    let mut rng = seeded_rng(SEED);
    let mut matrices = 0;
    let mut checks = 0;
    let mut point_orbits = 0;
    let mut vertex_excess = BTreeSet::new();
    for (d, n) in [(2, 4), (2, 5), (3, 5)] {
        for _ in 0..35 {
            let m = random_full_rank(&mut rng, d, n);
            matrices += 1;
            let matroid = support_matroid(&plucker(&m).unwrap()).unwrap();
            for r in compositions(n, 4) {
                let want = project_matroid(&matroid, &r).unwrap().base_polytope();
                ensure(
                    orbit_polytope(&m, &r).unwrap() == want,
                    format!("orbit polytope differs for r = {r}, M =\n{m}"),
                )?;
                match (multiplicity_index(&m, &r), weight_multiplicity_index(&m, &r)) {
                    (Ok(k), Ok(w)) => {
                        ensure(w.is_one(), format!("weight multiplicity {w} for r = {r}, M =\n{m}"))?;
                        if !k.is_one() {
                            vertex_excess.insert(r.to_string());
                        }
                    }
                    (Err(Error::Degenerate(_)), Err(Error::Degenerate(_))) => point_orbits += 1,
                    (a, b) => return Err(format!("r = {r}: {a:?} vs {b:?}")),
                }
                checks += 1;
            }
        }
    }
    ensure(matrices >= 100, "too few samples")?;
    let summary = format!(
        "seed {SEED}: {matrices} matrices, {checks} (M, r) polytopes agree, weight-lattice index 1 throughout \
         ({point_orbits} single-point orbits skipped)"
    );
    if !vertex_excess.is_empty() {
        return Err(format!("{summary}; vertex-lattice index exceeds 1 for r in {vertex_excess:?}"));
    }
    Ok(summary)
}

fn criterion_8() -> Outcome {
    let v = plucker_vars(2, 4);
    let mono = |s: &str| Monomial::parse(v.clone(), s).unwrap();
    let rel = three_term_relations(2, 4).unwrap().remove(0);
    let first: Vec<(String, Monomial)> = [
        ("m1", "x12^2*x34^2"),
        ("m2", "x13^2*x24^2"),
        ("m3", "x14^2*x23^2"),
        ("m4", "x12*x34*x13*x24"),
        ("m5", "x12*x34*x14*x23"),
        ("m6", "x13*x24*x14*x23"),
    ]
    .iter()
    .map(|(k, s)| (k.to_string(), mono(s)))
    .collect();
    for (mult, want) in [("x12*x34", "m1 - m4 + m5"), ("x13*x24", "m4 - m2 + m6"), ("x14*x23", "m5 - m6 + m3")] {
        let got = lift_relation(&rel, &mono(mult), &first).map(|c| c.to_string());
        ensure(got.as_deref() == Some(want), format!("times {mult}: {got:?}"))?;
    }
    let second: Vec<(String, Monomial)> = [
        ("m2", "x12*x13^2*x24^2*x34"),
        ("m4", "x12*x14^2*x23^2*x34"),
        ("n2", "x12^2*x13*x24*x34^2"),
        ("n4", "x12^2*x14*x23*x34^2"),
        ("prod", "x12*x13*x14*x23*x24*x34"),
    ]
    .iter()
    .map(|(k, s)| (k.to_string(), mono(s)))
    .collect();
    for (mult, want) in [("x12*x13*x24*x34", "n2 - m2 + prod"), ("x12*x14*x23*x34", "n4 - prod + m4")] {
        let got = lift_relation(&rel, &mono(mult), &second).map(|c| c.to_string());
        ensure(got.as_deref() == Some(want), format!("times {mult}: {got:?}"))?;
    }

    let xyz = vars(&["x", "y", "z"]);
    let [x, y, z] = [0, 1, 2].map(|i| MultiPoly::var(xyz.clone(), i));
    let map: Vec<(Monomial, MultiPoly)> = [("x^2", 0), ("y^2", 1), ("z^2", 2), ("x*y", 3), ("x*z", 4), ("y*z", 5)]
        .iter()
        .map(|(k, i)| (Monomial::parse(xyz.clone(), k).unwrap(), first[*i].1.to_poly()))
        .collect();
    let linear = &(&x - &y) + &z;
    for f in [&x, &y, &z] {
        let image = (f * &linear).substitute_monomials(&map, Arc::clone(&v)).unwrap();
        ensure(divides_exactly(&image, &rel).is_some(), format!("{image} not divisible"))?;
    }

    let rep = verify_balanced_identity().unwrap();
    ensure(rep.quartic_divisible(), "quartic not divisible by p - q + r")?;
    ensure(rep.homogeneous_quotient.is_some() && rep.homogeneous_on.is_zero(), "m5^4 form does not vanish")?;
    ensure(rep.printed_degree_mismatch(), "printed form not flagged")?;
    Ok(format!(
        "5 lifts exact, 3 substituted quadrics divisible, quartic divisible; printed form flagged (term degrees {:?}, divisible: {})",
        rep.printed_degrees,
        rep.printed_quotient.is_some()
    ))
}

fn criterion_9() -> Outcome {
    let mut checked = 0;
    let mut degenerate = 0;
    for n in 2..=6usize {
        for d in 1..n {
            for r in compositions(n, n) {
                for i in 0..r.m() {
                    for sign in [Sign::Plus, Sign::Minus] {
                        match volume_identity_check(d, &r, i, sign) {
                            Ok(v) => {
                                ensure(v.holds(), format!("d={d} r={r} i={i} {sign:?}: {v:?}"))?;
                                checked += 1;
                            }
                            Err(Error::Degenerate(_)) => degenerate += 1,
                            Err(e) => return Err(e.to_string()),
                        }
                    }
                }
            }
        }
    }

    let mut rng = seeded_rng(SEED + 9);
    let (mut agree, mut flagged) = (0, 0);
    for (d, n) in [(2, 4), (2, 5), (3, 5), (3, 6)] {
        for _ in 0..10 {
            let m = random_full_rank(&mut rng, d, n);
            let generic = is_generic(&m);
            let matroid = support_matroid(&plucker(&m).unwrap()).unwrap();
            for k in 1..n {
                for set in subsets(n, k) {
                    if k < d {
                        match (intersect_with_coordinate_subspace(&m, &set), matroid.contract(&set)) {
                            (Ok(cut), Ok(minor)) => {
                                ensure(
                                    support_matroid(&plucker(&cut).unwrap()).unwrap() == minor,
                                    format!("contract {set}, M =\n{m}"),
                                )?;
                                agree += 1;
                            }
                            (Err(_), Err(_)) => flagged += 1,
                            (a, b) => {
                                return Err(format!(
                                    "contract {set}: {:?} vs {:?}, generic {generic}",
                                    a.err(),
                                    b.err()
                                ))
                            }
                        }
                    }
                    if k <= n - d {
                        match (project_away(&m, &set), matroid.delete(&set)) {
                            (Ok(p), Ok(minor)) => {
                                ensure(
                                    support_matroid(&plucker(&p).unwrap()).unwrap() == minor,
                                    format!("delete {set}, M =\n{m}"),
                                )?;
                                agree += 1;
                            }
                            (Err(_), Err(_)) => flagged += 1,
                            (a, b) => {
                                return Err(format!("delete {set}: {:?} vs {:?}, generic {generic}", a.err(), b.err()))
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!(
        "{checked} volume identities hold ({degenerate} degenerate skipped); seed {}: {agree} minor comparisons agree, {flagged} rank drops flagged",
        SEED + 9
    ))
}

fn criterion_10() -> Outcome {
    let mut duals = 0;
    for n in 1..=5usize {
        for d in 0..=n {
            let u = Matroid::uniform(d, n);
            ensure(u.dual().dual() == u, "matroid dual not an involution")?;
            duals += 1;
        }
    }
    for caps in (0..3).map(|_| 1..=2u32).multi_cartesian_product() {
        let top: u32 = caps.iter().sum();
        for d in 0..=top {
            let cands = candidate_vectors(d, &caps);
            for mask in 1u32..(1 << cands.len()) {
                let bases = (0..cands.len()).filter(|i| mask >> i & 1 == 1).map(|i| cands[i].clone()).collect_vec();
                let p = Polymatroid::new(caps.clone(), bases).unwrap();
                if !p.is_valid() {
                    continue;
                }
                let dual = p.dual();
                ensure(
                    dual.is_valid() && dual.bases().len() == p.bases().len() && dual.dual() == p,
                    format!("dual of {p:?}"),
                )?;
                duals += 1;
            }
        }
    }

    let mut rng = seeded_rng(SEED + 10);
    let mut gale = 0;
    for (d, n) in [(2, 4), (2, 5), (3, 5)] {
        for _ in 0..10 {
            let m = random_full_rank(&mut rng, d, n);
            let g = gale_dual(&m).unwrap();
            ensure(gale_dual(&g).unwrap().same_row_space(&m), "gale dual not an involution")?;
            for r in compositions(n, n) {
                let lhs = support_polymatroid(&g, &r).unwrap();
                let rhs = support_polymatroid(&m, &r).unwrap().dual();
                ensure(lhs == rhs, format!("r = {r}, M =\n{m}"))?;
                gale += 1;
            }
        }
    }

    let mut gm = 0;
    while gm < 100 {
        let (d, n) = [(2, 4), (2, 5), (3, 5), (3, 6)][gm % 4];
        let m = random_full_rank(&mut rng, d, n);
        let comps = compositions(n, n);
        let r = &comps[gm % comps.len()];
        let g = random_full_rank(&mut rng, d, d);
        let scales = random_scales(&mut rng, r.m());
        ensure(gm_invariance_report(&m, r, &g, &scales).unwrap(), format!("GM invariance fails for r = {r}"))?;
        gm += 1;
    }
    Ok(format!("{duals} dual involutions; seed {}: {gale} Gale/dual comparisons; {gm} GM samples invariant", SEED + 10))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("worked example Gr(2,4), maximal torus", Duration::from_secs(1), criterion_1),
        ("worked example Gr(2,4), blocks (1,1,2)", Duration::from_secs(5), criterion_2),
        ("worked example Gr(2,4), blocks (2,2)", Duration::from_secs(1), criterion_3),
        ("projected hypersimplex, blocks (1,2,2)", Duration::from_secs(60), criterion_4),
        ("exchange goldens", Duration::from_secs(60), criterion_5),
        ("exchange vs polytope criterion, exhaustive", Duration::from_secs(120), criterion_6),
        ("representability bridge", Duration::from_secs(60), criterion_7),
        ("relation identities", Duration::from_secs(60), criterion_8),
        ("face volumes and minors", Duration::from_secs(120), criterion_9),
        ("duality and block invariance", Duration::from_secs(120), criterion_10),
    ];
    let mut failures = 0;
    for (k, (title, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(_) if elapsed > *budget => Err(format!("over budget: {elapsed:.2?} > {budget:?}")),
            other => other,
        };
        let (tag, detail) = match &result {
            Ok(s) => ("PASS", s),
            Err(s) => ("FAIL", s),
        };
        if result.is_err() {
            failures += 1;
        }
        println!("criterion {:>2} {tag} [{elapsed:.2?}] {title}: {detail}", k + 1);
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
