// Betti tables of Lie algebras: homology with the trivial top-form
// connection against reversed cohomology.

use albv::algebroid::standard::{abelian, aff1, heisenberg3, sl2};
use albv::homology::algebroid_duality_check;

pub fn run_example() {
    let cases = [("R^3", abelian(3).unwrap()), ("aff(1)", aff1()), ("sl(2)", sl2()), ("heis(3)", heisenberg3())];
    for (name, g) in cases {
        let (h, c, ok) = algebroid_duality_check(&g, 0).unwrap();
        println!("{name}: H_* = {:?}, H^* = {:?}, dual: {ok}", h.totals(), c.totals());
        assert!(ok);
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
