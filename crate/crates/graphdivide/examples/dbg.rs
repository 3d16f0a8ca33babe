use graphdivide::diagram::build_diagram_with_cuts;
use graphdivide::doubling::double;
use graphdivide::dsl::emit;
use graphdivide::fuzz::{generate, FuzzConfig};
use graphdivide::invariants::{determinant, jones_of_diagram};
use graphdivide::poly::display_half_exponents;
use graphdivide::tangle::{assemble_graph, count_features};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

fn main() {
    let cfg = FuzzConfig {
        seed: 1,
        count: 0,
        max_tangles: 13,
        max_double_points: 1,
        trees_only: false,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut seen = BTreeSet::new();
    let mut dets = std::collections::BTreeMap::new();
    for _ in 0..30000 {
        let v = generate(&mut rng, &cfg);
        let c = count_features(&v);
        if c.delta != 1 { continue; }
        let g = assemble_graph(&v);
        let (comps, acyclic) = g.components_and_acyclic();
        if comps != 1 || !acyclic { continue; }
        let text = emit(&v.product);
        if !seen.insert(text.clone()) { continue; }
        let d = match double(&v) { Ok(d) => d, Err(_) => continue };
        if d.curves.len() != 1 { continue; }
        let diag = match build_diagram_with_cuts(&d.curves) { Ok(x) => x, Err(_) => continue };
        let j = match jones_of_diagram(&diag) { Ok(j) => j, Err(_) => continue };
        let det = determinant(&j);
        *dets.entry(det).or_insert(0usize) += 1;
        if det == 15 {
            println!("FOUND det=15 span={:?}  {}", j.span().map(|s| s/2), text);
            println!("   V = {}", display_half_exponents(&j, "t"));
        }
    }
    println!("det histogram over distinct instances: {:?}", dets);
}
