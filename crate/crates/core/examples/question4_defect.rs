// The anticommutator of the Lichnerowicz differential with the star
// operator is the Lie derivative along the modular field.

use albv::algebroid::PoissonStructure;
use albv::exterior::{Side, Volume};
use albv::homology::{monomial_basis, question4_defect};

pub fn run_example() {
    for pi in ["1", "y", "x*y"] {
        let ps = PoissonStructure::from_terms(&["x", "y"], &[(0, 1, pi)]).unwrap();
        let probes = monomial_basis(2, ps.vars(), Side::A, 2);
        let rep = question4_defect(&ps, &Volume::reference(), &probes).unwrap();
        println!("π = ({pi}) ∂x∧∂y: {} probes, sign {:?}, holds: {}", rep.probes, rep.sign, rep.passed());
        assert!(rep.passed());
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
