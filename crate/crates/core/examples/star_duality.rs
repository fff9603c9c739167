// The star isomorphism between forms and multivectors, and the boundary
// of the trivial connection as `-*d*⁻¹`.

use albv::algebroid::standard::{sl2, tangent};
use albv::exterior::{blades, star, star_inv, GradedElem, Side, Volume};
use albv::homology::star_conjugation_check;
use albv::poly::{rat, Poly};

pub fn run_example() {
    let t = tangent(&["x", "y", "z"]).unwrap();
    let vol = Volume::new(rat(2, 1)).unwrap();
    for k in 0..=3 {
        for b in blades(3, k) {
            let w = GradedElem::blade(Side::Dual, 3, b, Poly::one(t.vars()));
            let s = star(&w, &vol);
            println!("*({}) = {}", t.show(&w), t.show(&s));
            assert_eq!(star_inv(&s, &vol), w);
        }
    }
    assert_eq!(star_conjugation_check(&t, &vol, 2).unwrap(), None);
    assert_eq!(star_conjugation_check(&sl2(), &Volume::reference(), 0).unwrap(), None);
    println!("∂₀ = -*d*⁻¹ on R^3 up to weight 2 and on all of ∧sl(2)");
}

#[allow(dead_code)]
fn main() {
    run_example();
}
