// The generating operator of a top-form connection on the tangent plane.

use albv::algebroid::standard::tangent;
use albv::bv::{
    connection_from_operator, curvature, generating_operator, generating_residual, interior,
    TopConnection,
};
use albv::exterior::{GradedElem, Side};
use albv::random;

pub fn run_example() {
    let t = tangent(&["x", "y"]).unwrap();
    let alpha = t.coframe(1).scale_poly(&t.parse_poly("x").unwrap());
    let conn = TopConnection::new(&t, alpha).unwrap();
    let d = |u: &GradedElem| generating_operator(&conn, u);

    let lam = t.frame(0).wedge(&t.frame(1)).unwrap();
    println!("α = {}, R = dα = {}", t.show(conn.alpha()), t.show(&curvature(&conn)));
    println!("D(∂x∧∂y) = {}", t.show(&d(&lam).unwrap()));

    let mut rng = random::rng(5);
    for _ in 0..20 {
        let u = random::any_degree(&mut rng, Side::A, 2, t.vars(), 2);
        let v = random::any_degree(&mut rng, Side::A, 2, t.vars(), 2);
        assert!(generating_residual(&t, &d, &u, &v).unwrap().is_zero());
        let dd = d(&d(&u).unwrap()).unwrap();
        assert_eq!(dd, interior(&curvature(&conn), &u).neg());
    }
    println!("bracket generated by D and D² = -R⌟U on 20 random pairs");

    let back = connection_from_operator(&t, &d).unwrap();
    println!("α recovered from D: {}", t.show(back.alpha()));
    assert_eq!(back.alpha(), conn.alpha());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
