// Dual algebroids from a bivector with `[π,π] = 0`: on a tangent bundle
// this is the cotangent algebroid, on sl(2) an r-matrix.

use albv::algebroid::standard::{sl2, tangent};
use albv::algebroid::{bivector, cotangent_algebroid, triangular_dual_algebroid, PoissonStructure};

pub fn run_example() {
    let t = tangent(&["x", "y"]).unwrap();
    let pi = bivector(&t, &[(0, 1, "1")]).unwrap();
    let dual = triangular_dual_algebroid(&t, &pi).unwrap();
    let ct = cotangent_algebroid(&PoissonStructure::new(&t, pi).unwrap()).unwrap();
    assert_eq!(dual.anchor_matrix(), ct.anchor_matrix());
    assert_eq!(dual.structure_entries(), ct.structure_entries());
    println!("dual of TR² along ∂x∧∂y is T*R²");

    let g = sl2();
    let r = bivector(&g, &[(0, 1, "-1")]).unwrap();
    let d = triangular_dual_algebroid(&g, &r).unwrap();
    println!("sl(2) with r = e∧h:");
    for e in d.structure_entries() {
        println!("  [ε{}, ε{}]_r has ε{} component {}", e.i + 1, e.j + 1, e.k + 1, e.c);
    }
    assert!(d.validate().passed());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
