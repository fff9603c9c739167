// Koszul–Brylinski homology and Lichnerowicz cohomology of planar Poisson
// structures, slice by slice in polynomial weight.

use albv::algebroid::PoissonStructure;
use albv::exterior::Volume;
use albv::homology::{unimodular_duality_check, WeightedComplex};

pub fn run_example() {
    let symp = PoissonStructure::from_terms(&["x", "y"], &[(0, 1, "1")]).unwrap();
    let rep = unimodular_duality_check(&symp, &Volume::reference(), 4).unwrap();
    let (h, c) = rep.tables.as_ref().unwrap();
    println!("{h}\n{c}");
    assert!(rep.passed());

    let lin = PoissonStructure::from_terms(&["x", "y"], &[(0, 1, "y")]).unwrap();
    let h = WeightedComplex::koszul_brylinski(&lin).betti(3).unwrap();
    let c = WeightedComplex::lichnerowicz(lin.tangent(), lin.bivector()).betti(3).unwrap();
    println!("{h}\n{c}");
    println!("y ∂x∧∂y is not unimodular, and its tables are not mirror images");
    assert_ne!(h.reversed(), c.entries);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
