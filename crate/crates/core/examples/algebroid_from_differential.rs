// An algebroid is determined by its differential on generators.

use albv::algebroid::{algebroid_from_differential, cotangent_algebroid, DifferentialData, PoissonStructure};

pub fn run_example() {
    let ps = PoissonStructure::from_terms(&["x", "y", "z"], &[(0, 1, "z"), (1, 2, "x"), (0, 2, "-y")]).unwrap();
    let a = cotangent_algebroid(&ps).unwrap();
    let data = DifferentialData::of(&a).unwrap();
    for (mu, dx) in data.d_coords.iter().enumerate() {
        println!("d {} = {}", a.vars().names()[mu], a.show(dx));
    }
    for (k, de) in data.d_coframe.iter().enumerate() {
        println!("d ε{} = {}", k + 1, a.show(de));
    }
    let b = algebroid_from_differential(&data).unwrap();
    assert_eq!(b.anchor_matrix(), a.anchor_matrix());
    assert_eq!(b.structure_entries(), a.structure_entries());
    println!("anchor and brackets recovered");
}

#[allow(dead_code)]
fn main() {
    run_example();
}
