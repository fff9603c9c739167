// The pair (TP, T*P) of a Poisson manifold is a Lie bialgebroid; a bivector
// that is not Poisson is caught.

use albv::algebroid::standard::tangent;
use albv::algebroid::{bivector, cotangent_algebroid, cotangent_unchecked, PoissonStructure};
use albv::calculus::bialgebroid_check;

pub fn run_example() {
    let ps = PoissonStructure::from_terms(&["x", "y"], &[(0, 1, "y")]).unwrap();
    let ct = cotangent_algebroid(&ps).unwrap();
    println!("T*P for π = y ∂x∧∂y:");
    for e in ct.structure_entries() {
        println!("  [{}, {}] has {} component {}", ct.frame_names()[e.i], ct.frame_names()[e.j], ct.frame_names()[e.k], e.c);
    }
    let report = bialgebroid_check(ps.tangent(), &ct, 50, 1, 3).unwrap();
    println!("bialgebroid on {} pairs: {}", report.pairs_checked, report.passed());
    assert!(report.passed());

    let t3 = tangent(&["x", "y", "z"]).unwrap();
    let pi = bivector(&t3, &[(0, 1, "1"), (1, 2, "y")]).unwrap();
    let bad = PoissonStructure::new_unchecked(&t3, pi).unwrap();
    let report = bialgebroid_check(&t3, &cotangent_unchecked(&bad).unwrap(), 50, 1, 3).unwrap();
    println!("π = ∂x∧∂y + y ∂y∧∂z: dual axioms {:?}", report.dual_axioms);
    assert!(!report.passed());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
