// Modular vector fields of Poisson structures and the modular character of
// a Lie algebra.

use albv::algebroid::standard::aff1;
use albv::algebroid::PoissonStructure;
use albv::exterior::{Side, Volume};
use albv::homology::{lie_algebra_modular_character, modular_relation_check, monomial_basis};

pub fn run_example() {
    let vol = Volume::reference();
    for pi in ["1", "y", "x^2 + y^2"] {
        let ps = PoissonStructure::from_terms(&["x", "y"], &[(0, 1, pi)]).unwrap();
        let probes = monomial_basis(2, ps.vars(), Side::Dual, 2);
        let rep = modular_relation_check(&ps, &vol, &probes).unwrap();
        println!(
            "π = ({pi}) ∂x∧∂y: ν = {}, relation holds: {}, sign {:?}",
            ps.tangent().show(&rep.nu),
            rep.passed(),
            rep.relation.sign
        );
        assert!(rep.passed());
    }
    let g = aff1();
    let (diff, character) = lie_algebra_modular_character(&g).unwrap();
    println!("aff(1): D_CE - D₀ = i_α with α = {}", g.show(&diff.alpha));
    println!("aff(1): modular character {} = tr ad {}", g.show(character.alpha()), g.show(&g.trace_of_ad()));
    assert_eq!(character.alpha(), &g.trace_of_ad());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
