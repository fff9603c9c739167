//! Connections on the top power `∧ⁿA`, the generating operator `D` and its
//! companions: curvature, divergence, connection recovery, torsion-free
//! connections on `A` and operator differences.

use crate::algebroid::LieAlgebroid;
use crate::calculus::{differential, schouten};
use crate::error::{Error, Result};
use crate::exterior::{blade_indices, blades, star, star_inv, GradedElem, Side, Volume};
use crate::poly::{rat, Poly};

/// A degree −1 operator on `Γ(∧^• A)` (or on forms), given as a black box.
pub type Operator<'a> = dyn Fn(&GradedElem) -> Result<GradedElem> + 'a;

/// `∇_X(f Λ_ref) = (a(X)f) Λ_ref + ⟨α, X⟩ f Λ_ref` with `Λ_ref = e_1∧…∧e_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopConnection {
    algebroid: LieAlgebroid,
    alpha: GradedElem,
}

impl TopConnection {
    pub fn new(a: &LieAlgebroid, alpha: GradedElem) -> Result<Self> {
        a.expect_shape(&alpha, Side::Dual, 1)?;
        Ok(TopConnection { algebroid: a.clone(), alpha })
    }

    /// The connection for which `Λ_ref` is horizontal.
    pub fn trivial(a: &LieAlgebroid) -> Self {
        TopConnection { algebroid: a.clone(), alpha: a.zero(Side::Dual, 1) }
    }

    pub fn algebroid(&self) -> &LieAlgebroid {
        &self.algebroid
    }

    pub fn alpha(&self) -> &GradedElem {
        &self.alpha
    }

    pub fn rank(&self) -> usize {
        self.algebroid.rank()
    }

    pub fn is_flat(&self) -> bool {
        curvature(self).is_zero()
    }

    /// `∇_X (c Λ_ref)` for a constant multiple of the reference volume.
    pub fn covariant_volume(&self, x: &GradedElem, vol: &Volume) -> Result<GradedElem> {
        let a = &self.algebroid;
        a.expect_shape(x, Side::A, 1)?;
        let lam = vol.element(Side::A, a.rank(), a.vars());
        Ok(lam.scale_poly(&self.alpha.pairing(x)?))
    }
}

pub fn reference_volume(a: &LieAlgebroid) -> GradedElem {
    Volume::reference().element(Side::A, a.rank(), a.vars())
}

/// The generating operator of the connection:
/// `DU = -(-1)^{|ω|} (dω + α∧ω) ⌟ Λ` where `U = ω ⌟ Λ`.
pub fn generating_operator(conn: &TopConnection, u: &GradedElem) -> Result<GradedElem> {
    generating_operator_with_volume(conn, &Volume::reference(), u)
}

/// Same operator computed against the volume `c Λ_ref` instead of `Λ_ref`;
/// the result does not depend on `c`.
pub fn generating_operator_with_volume(
    conn: &TopConnection,
    vol: &Volume,
    u: &GradedElem,
) -> Result<GradedElem> {
    let a = &conn.algebroid;
    a.expect_side(u, Side::A)?;
    let k = u.degree();
    if k == 0 || k > a.rank() {
        return Ok(a.zero(Side::A, k.saturating_sub(1)));
    }
    let omega = star_inv(u, vol);
    // ∇_{e_i} (cΛ_ref) = α_i cΛ_ref, so Σ α_i ∧ ω ⌟ ∇_{e_i}Λ = (α∧ω) ⌟ Λ.
    let inner = differential(a, &omega)?.checked_add(&conn.alpha.wedge(&omega)?)?;
    let out = star(&inner, vol);
    Ok(if omega.degree() % 2 == 0 { out.neg() } else { out })
}

/// Curvature `R = dα`.
pub fn curvature(conn: &TopConnection) -> GradedElem {
    differential(&conn.algebroid, &conn.alpha).expect("alpha is a 1-form")
}

/// `i_α U = α ⌟ U`.
pub fn interior(alpha: &GradedElem, u: &GradedElem) -> GradedElem {
    alpha.contract_or_zero(u)
}

/// Recover `α` from an operator via `⟨α, X⟩ Λ_ref = -X ∧ D(Λ_ref)`.
pub fn connection_from_operator(a: &LieAlgebroid, d: &Operator<'_>) -> Result<TopConnection> {
    let n = a.rank();
    let lam = reference_volume(a);
    let dl = d(&lam)?;
    if dl.degree() != n - 1 || dl.side() != Side::A {
        return Err(Error::DegreeMismatch(format!(
            "D(Λ) must have degree {}, got {}",
            n - 1,
            dl.degree()
        )));
    }
    let mut alpha = a.zero(Side::Dual, 1);
    for i in 0..n {
        let c = a.frame(i).wedge(&dl)?.neg().top_coefficient();
        alpha = alpha.checked_add(&a.coframe(i).scale_poly(&c))?;
    }
    TopConnection::new(a, alpha)
}

/// `div_∇ X = DX`.
pub fn divergence(conn: &TopConnection, x: &GradedElem) -> Result<Poly> {
    conn.algebroid.expect_shape(x, Side::A, 1)?;
    Ok(generating_operator(conn, x)?.as_function())
}

/// Residual of `L_X Λ - ∇_X Λ = (div X) Λ` for `Λ = c Λ_ref`.
pub fn divergence_residual(conn: &TopConnection, vol: &Volume, x: &GradedElem) -> Result<GradedElem> {
    let a = &conn.algebroid;
    let lam = vol.element(Side::A, a.rank(), a.vars());
    let lhs = schouten(a, x, &lam)?.checked_sub(&conn.covariant_volume(x, vol)?)?;
    lhs.checked_sub(&lam.scale_poly(&divergence(conn, x)?))
}

/// Residual of the generating identity
/// `[U,V] = (-1)^{|U|} (D(U∧V) - DU∧V - (-1)^{|U|} U∧DV)`.
pub fn generating_residual(
    a: &LieAlgebroid,
    d: &Operator<'_>,
    u: &GradedElem,
    v: &GradedElem,
) -> Result<GradedElem> {
    let su = if u.degree() % 2 == 0 { 1 } else { -1 };
    let uv = u.wedge(v)?;
    let rhs = d(&uv)?
        .checked_sub(&d(u)?.wedge(v)?)?
        .checked_sub(&u.wedge(&d(v)?)?.scale_int(su))?
        .scale_int(su);
    schouten(a, u, v)?.checked_sub(&rhs)
}

/// Residual of `θ⌟DU = (-1)^{|θ|} D(θ⌟U) + dθ⌟U`.
pub fn contraction_residual(
    conn: &TopConnection,
    theta: &GradedElem,
    u: &GradedElem,
) -> Result<GradedElem> {
    let a = &conn.algebroid;
    let st = if theta.degree() % 2 == 0 { 1 } else { -1 };
    let lhs = theta.contract_or_zero(&generating_operator(conn, u)?);
    let t1 = generating_operator(conn, &theta.contract_or_zero(u))?.scale_int(st);
    let t2 = differential(a, theta)?.contract_or_zero(u);
    lhs.checked_sub(&t1)?.checked_sub(&t2)
}

/// An `A`-connection on `A`: `∇_{e_i} e_j = Σ_k Γ^k_{ij} e_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AConnectionOnA {
    algebroid: LieAlgebroid,
    /// `gamma[i][j][k] = Γ^k_{ij}`
    gamma: Vec<Vec<Vec<Poly>>>,
}

impl AConnectionOnA {
    pub fn new(a: &LieAlgebroid, gamma: Vec<Vec<Vec<Poly>>>) -> Result<Self> {
        let n = a.rank();
        if gamma.len() != n || gamma.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != n)) {
            return Err(Error::Malformed(format!("Christoffel array must be {n}x{n}x{n}")));
        }
        Ok(AConnectionOnA { algebroid: a.clone(), gamma })
    }

    /// `Γ ≡ 0`.
    pub fn flat_frame(a: &LieAlgebroid) -> Self {
        let n = a.rank();
        let z = Poly::zero(a.vars());
        AConnectionOnA { algebroid: a.clone(), gamma: vec![vec![vec![z; n]; n]; n] }
    }

    /// `∇_X Y = ½ [X, Y]`, torsion free by construction.
    pub fn half_bracket(a: &LieAlgebroid) -> Self {
        let n = a.rank();
        let gamma = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| a.structure(i, j, k).scale(&rat(1, 2))).collect())
                    .collect()
            })
            .collect();
        AConnectionOnA { algebroid: a.clone(), gamma }
    }

    pub fn algebroid(&self) -> &LieAlgebroid {
        &self.algebroid
    }

    /// `Γ^k_{ij} - Γ^k_{ji} = c^k_{ij}` on all pairs, else the first failing
    /// pair (one based).
    pub fn check_torsion_free(&self) -> Result<()> {
        let a = &self.algebroid;
        let n = a.rank();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let t = &(&self.gamma[i][j][k] - &self.gamma[j][i][k]) - a.structure(i, j, k);
                    if !t.is_zero() {
                        return Err(Error::Torsion { i: i + 1, j: j + 1 });
                    }
                }
            }
        }
        Ok(())
    }

    /// The induced connection on `∧ⁿA`: `∇_{e_i} Λ_ref = (Σ_j Γ^j_{ij}) Λ_ref`.
    pub fn induced(&self) -> TopConnection {
        let a = &self.algebroid;
        let mut alpha = a.zero(Side::Dual, 1);
        for i in 0..a.rank() {
            let mut t = Poly::zero(a.vars());
            for j in 0..a.rank() {
                t = &t + &self.gamma[i][j][j];
            }
            alpha.add_component(1 << i, t);
        }
        TopConnection { algebroid: a.clone(), alpha }
    }

    fn nabla_frame(&self, i: usize, j: usize) -> GradedElem {
        let a = &self.algebroid;
        let mut out = a.zero(Side::A, 1);
        for k in 0..a.rank() {
            out.add_component(1 << k, self.gamma[i][j][k].clone());
        }
        out
    }

    /// `∇_{e_i} ε_k = -Σ_j Γ^k_{ij} ε_j`.
    fn nabla_coframe(&self, i: usize, k: usize) -> GradedElem {
        let a = &self.algebroid;
        let mut out = a.zero(Side::Dual, 1);
        for j in 0..a.rank() {
            out.add_component(1 << j, -self.gamma[i][j][k].clone());
        }
        out
    }

    /// Extension of `∇_{e_i}` to multisections or forms as a derivation.
    pub fn covariant(&self, i: usize, u: &GradedElem) -> Result<GradedElem> {
        let a = &self.algebroid;
        a.expect_side(u, u.side())?;
        let mut out = a.zero(u.side(), u.degree());
        for (b, f) in u.components() {
            let idx = blade_indices(b);
            let eb = GradedElem::blade(u.side(), a.rank(), b, Poly::one(a.vars()));
            out = out.checked_add(&eb.scale_poly(&a.anchor_frame_apply(i, f)))?;
            for p in 0..idx.len() {
                let parts: Vec<GradedElem> = idx
                    .iter()
                    .enumerate()
                    .map(|(q, &j)| {
                        if q == p {
                            match u.side() {
                                Side::A => self.nabla_frame(i, j),
                                Side::Dual => self.nabla_coframe(i, j),
                            }
                        } else {
                            GradedElem::basis(u.side(), a.rank(), &[j], a.vars())
                        }
                    })
                    .collect();
                let mut w = parts[0].clone();
                for part in &parts[1..] {
                    w = w.wedge(part)?;
                }
                out = out.checked_add(&w.scale_poly(f))?;
            }
        }
        Ok(out)
    }

    /// `DU = -Σ_i ε_i ⌟ ∇_{e_i} U`; requires a torsion-free connection.
    pub fn torsion_free_generator(&self, u: &GradedElem) -> Result<GradedElem> {
        self.check_torsion_free()?;
        let a = &self.algebroid;
        a.expect_side(u, Side::A)?;
        let mut out = a.zero(Side::A, u.degree().saturating_sub(1));
        if u.degree() == 0 {
            return Ok(out);
        }
        for i in 0..a.rank() {
            out = out.checked_sub(&a.coframe(i).contract(&self.covariant(i, u)?)?)?;
        }
        Ok(out)
    }

    /// Residual of `dω = Σ_i ε_i ∧ ∇_{e_i} ω`.
    pub fn differential_residual(&self, omega: &GradedElem) -> Result<GradedElem> {
        let a = &self.algebroid;
        let mut rhs = a.zero(Side::Dual, omega.degree() + 1);
        for i in 0..a.rank() {
            rhs = rhs.checked_add(&a.coframe(i).wedge(&self.covariant(i, omega)?)?)?;
        }
        differential(a, omega)?.checked_sub(&rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceReport {
    /// `⟨α, e_i⟩ = (D₁ - D₂)(e_i)`.
    pub alpha: GradedElem,
    /// First probe where `(D₁ - D₂)U ≠ α⌟U`, with the residual.
    pub contraction_witness: Option<(GradedElem, GradedElem)>,
    /// First probe where `(D₁² - D₂²)U ≠ dα⌟U`, with the residual.
    pub square_witness: Option<(GradedElem, GradedElem)>,
}

impl DifferenceReport {
    pub fn passed(&self) -> bool {
        self.contraction_witness.is_none() && self.square_witness.is_none()
    }
}

/// Compare two generating operators: extract `α` with `D₁ - D₂ = i_α` and
/// check it, together with `D₂² - D₁² = -i_{dα}`, on the probes.
pub fn operator_difference(
    a: &LieAlgebroid,
    d1: &Operator<'_>,
    d2: &Operator<'_>,
    probes: &[GradedElem],
) -> Result<DifferenceReport> {
    let mut alpha = a.zero(Side::Dual, 1);
    for i in 0..a.rank() {
        let e = a.frame(i);
        let c = d1(&e)?.checked_sub(&d2(&e)?)?.as_function();
        alpha = alpha.checked_add(&a.coframe(i).scale_poly(&c))?;
    }
    let dalpha = differential(a, &alpha)?;
    let mut report = DifferenceReport { alpha, contraction_witness: None, square_witness: None };
    for u in probes {
        let diff = d1(u)?.checked_sub(&d2(u)?)?;
        let r = diff.checked_sub(&interior(&report.alpha, u))?;
        if !r.is_zero() && report.contraction_witness.is_none() {
            report.contraction_witness = Some((u.clone(), r));
        }
        let sq = d1(&d1(u)?)?.checked_sub(&d2(&d2(u)?)?)?;
        let r = sq.checked_sub(&interior(&dalpha, u))?;
        if !r.is_zero() && report.square_witness.is_none() {
            report.square_witness = Some((u.clone(), r));
        }
    }
    Ok(report)
}

/// Every monomial-free basis element `e_I` in every degree.
pub fn frame_basis(a: &LieAlgebroid, side: Side) -> Vec<GradedElem> {
    (0..=a.rank())
        .flat_map(|k| blades(a.rank(), k))
        .map(|b| GradedElem::blade(side, a.rank(), b, Poly::one(a.vars())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::standard::*;
    use crate::poly::int;
    use crate::random;
    use proptest::prelude::*;

    fn t2() -> LieAlgebroid {
        tangent(&["x", "y"]).unwrap()
    }

    fn one_form(a: &LieAlgebroid, c: &[&str]) -> GradedElem {
        let mut out = a.zero(Side::Dual, 1);
        for (i, s) in c.iter().enumerate() {
            out = out.checked_add(&a.coframe(i).scale_poly(&a.parse_poly(s).unwrap())).unwrap();
        }
        out
    }

    #[test]
    fn generating_operator_examples() {
        let t = t2();
        let triv = TopConnection::trivial(&t);
        assert!(generating_operator(&triv, &reference_volume(&t)).unwrap().is_zero());
        let x = t.parse_poly("x").unwrap();
        let xdx = t.frame(0).scale_poly(&x);
        assert_eq!(
            generating_operator(&triv, &xdx).unwrap(),
            t.function(Side::A, Poly::from_int(t.vars(), -1))
        );
        let u = xdx.wedge(&t.frame(1)).unwrap();
        assert_eq!(generating_operator(&triv, &u).unwrap(), t.frame(1).neg());
        let g = aff1();
        let d0 = generating_operator(&TopConnection::trivial(&g), &g.frame(0)).unwrap();
        assert_eq!(d0.as_function().constant_value(), Some(int(1)));
    }

    #[test]
    fn volume_choice_does_not_matter() {
        let t = t2();
        let conn = TopConnection::new(&t, one_form(&t, &["0", "x"])).unwrap();
        let mut r = random::rng(5);
        for _ in 0..20 {
            let u = random::any_degree(&mut r, Side::A, 2, t.vars(), 3);
            let vol = Volume::new(rat(-3, 2)).unwrap();
            assert_eq!(
                generating_operator(&conn, &u).unwrap(),
                generating_operator_with_volume(&conn, &vol, &u).unwrap()
            );
        }
    }

    #[test]
    fn curvature_examples() {
        let t = t2();
        assert!(curvature(&TopConnection::trivial(&t)).is_zero());
        let g = t.function(Side::Dual, t.parse_poly("x^2*y - y^3").unwrap());
        let exact = TopConnection::new(&t, differential(&t, &g).unwrap()).unwrap();
        assert!(exact.is_flat());
        let conn = TopConnection::new(&t, one_form(&t, &["0", "x"])).unwrap();
        let r = curvature(&conn);
        assert_eq!(r, GradedElem::basis(Side::Dual, 2, &[0, 1], t.vars()));
        let u = t.frame(0).wedge(&t.frame(1)).unwrap().scale_poly(&t.parse_poly("y").unwrap());
        let dd = generating_operator(&conn, &generating_operator(&conn, &u).unwrap()).unwrap();
        assert_eq!(dd, interior(&r, &u).neg());
    }

    #[test]
    fn recover_connection() {
        let t = t2();
        for alpha in [one_form(&t, &["0", "0"]), one_form(&t, &["0", "x"])] {
            let conn = TopConnection::new(&t, alpha.clone()).unwrap();
            let d = |u: &GradedElem| generating_operator(&conn, u);
            assert_eq!(connection_from_operator(&t, &d).unwrap().alpha(), &alpha);
        }
    }

    #[test]
    fn divergence_examples() {
        let t = t2();
        let triv = TopConnection::trivial(&t);
        assert!(divergence(&triv, &t.frame(0)).unwrap().is_zero());
        let x = t.parse_poly("x").unwrap();
        assert_eq!(divergence(&triv, &t.frame(0).scale_poly(&x)).unwrap(), Poly::from_int(t.vars(), -1));
        assert!(divergence(&triv, &t.frame(1).scale_poly(&x)).unwrap().is_zero());
        let v = t.frame(0).scale_poly(&x);
        assert!(divergence_residual(&triv, &Volume::reference(), &v).unwrap().is_zero());
    }

    #[test]
    fn torsion_free_examples() {
        let t = t2();
        let flat = AConnectionOnA::flat_frame(&t);
        let triv = TopConnection::trivial(&t);
        let mut r = random::rng(11);
        for _ in 0..20 {
            let u = random::any_degree(&mut r, Side::A, 2, t.vars(), 3);
            assert_eq!(
                flat.torsion_free_generator(&u).unwrap(),
                generating_operator(&triv, &u).unwrap()
            );
            let w = random::any_degree(&mut r, Side::Dual, 2, t.vars(), 3);
            assert!(flat.differential_residual(&w).unwrap().is_zero());
        }

        let s = sl2();
        let half = AConnectionOnA::half_bracket(&s);
        let induced = half.induced();
        for u in frame_basis(&s, Side::A) {
            assert_eq!(
                half.torsion_free_generator(&u).unwrap(),
                generating_operator(&induced, &u).unwrap()
            );
        }
        for w in frame_basis(&s, Side::Dual) {
            assert!(half.differential_residual(&w).unwrap().is_zero());
        }

        let bad = AConnectionOnA::flat_frame(&s);
        assert_eq!(
            bad.torsion_free_generator(&s.frame(0)),
            Err(Error::Torsion { i: 1, j: 2 })
        );
    }

    #[test]
    fn difference_examples() {
        let t = t2();
        let alpha = one_form(&t, &["0", "x"]);
        let c1 = TopConnection::trivial(&t);
        let c2 = TopConnection::new(&t, alpha.clone()).unwrap();
        let d1 = |u: &GradedElem| generating_operator(&c1, u);
        let d2 = |u: &GradedElem| generating_operator(&c2, u);
        let probes = frame_basis(&t, Side::A)
            .into_iter()
            .map(|u| u.scale_poly(&t.parse_poly("x*y + 1").unwrap()))
            .collect::<Vec<_>>();
        let rep = operator_difference(&t, &d1, &d2, &probes).unwrap();
        assert_eq!(rep.alpha, alpha);
        assert!(rep.passed(), "{rep:?}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn generating_identity(seed in any::<u64>()) {
            let t = t2();
            let conn = TopConnection::new(&t, one_form(&t, &["y^2", "x"])).unwrap();
            let d = |u: &GradedElem| generating_operator(&conn, u);
            let mut r = random::rng(seed);
            let u = random::any_degree(&mut r, Side::A, 2, t.vars(), 3);
            let v = random::any_degree(&mut r, Side::A, 2, t.vars(), 3);
            prop_assert!(generating_residual(&t, &d, &u, &v).unwrap().is_zero());
        }

        #[test]
        fn contraction_identity(seed in any::<u64>()) {
            let t = tangent(&["x", "y", "z"]).unwrap();
            let conn = TopConnection::new(&t, one_form(&t, &["y", "0", "x*z"])).unwrap();
            let mut r = random::rng(seed);
            let u = random::any_degree(&mut r, Side::A, 3, t.vars(), 2);
            let th = random::any_degree(&mut r, Side::Dual, 3, t.vars(), 2);
            prop_assert!(contraction_residual(&conn, &th, &u).unwrap().is_zero());
        }
    }
}
