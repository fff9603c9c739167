//! Cartan calculus of an algebroid: differential, Schouten bracket, Lie
//! derivatives and the bialgebroid compatibility check.

use crate::algebroid::LieAlgebroid;
use crate::error::{Error, Result};
use crate::exterior::{blade_indices, blade_wedge, blades, Blade, GradedElem, Side};
use crate::poly::{int, Poly};
use crate::random;

/// `ω(e_I)` for a blade `I` in increasing order.
fn eval_blade(omega: &GradedElem, b: Blade) -> Poly {
    omega.component(b)
}

/// The algebroid differential on `Γ(∧^k A*)`:
/// `dω(X_0..X_k) = Σ_i (-1)^i a(X_i) ω(..X̂_i..)
///               + Σ_{i<j} (-1)^{i+j} ω([X_i,X_j], ..X̂_i..X̂_j..)`,
/// evaluated on increasing frame tuples.
pub fn differential(a: &LieAlgebroid, omega: &GradedElem) -> Result<GradedElem> {
    a.expect_side(omega, Side::Dual)?;
    let k = omega.degree();
    let n = a.rank();
    let mut out = a.zero(Side::Dual, k + 1);
    if k >= n {
        return Ok(out);
    }
    for b in blades(n, k + 1) {
        let idx = blade_indices(b);
        let mut val = Poly::zero(a.vars());
        for (p, &i) in idx.iter().enumerate() {
            let rest = b & !(1 << i);
            let w = eval_blade(omega, rest);
            if w.is_zero() {
                continue;
            }
            let t = a.anchor_frame_apply(i, &w);
            val = if p % 2 == 0 { &val + &t } else { &val - &t };
        }
        for p in 0..idx.len() {
            for q in p + 1..idx.len() {
                let (i, j) = (idx[p], idx[q]);
                let rest = b & !(1 << i) & !(1 << j);
                let mut t = Poly::zero(a.vars());
                for kk in 0..n {
                    let c = a.structure(i, j, kk);
                    if c.is_zero() {
                        continue;
                    }
                    if let Some((s, blade)) = blade_wedge(1 << kk, rest) {
                        let w = eval_blade(omega, blade);
                        if !w.is_zero() {
                            t = &t + &(c * &w).scale(&int(s));
                        }
                    }
                }
                val = if (p + q) % 2 == 0 { &val + &t } else { &val - &t };
            }
        }
        out.add_component(b, val);
    }
    Ok(out)
}

fn wedge_all(parts: &[GradedElem]) -> GradedElem {
    let mut it = parts.iter();
    let first = it.next().expect("nonempty").clone();
    it.fold(first, |acc, p| acc.wedge(p).expect("same side"))
}

/// `[e_j, U]` by the derivation rule.
fn bracket_frame_with(a: &LieAlgebroid, j: usize, u: &GradedElem) -> GradedElem {
    let mut out = a.zero(Side::A, u.degree());
    for (b, f) in u.components() {
        let idx = blade_indices(b);
        let eb = GradedElem::blade(Side::A, a.rank(), b, Poly::one(a.vars()));
        out = out.checked_add(&eb.scale_poly(&a.anchor_frame_apply(j, f))).unwrap();
        for p in 0..idx.len() {
            let mut parts: Vec<GradedElem> = idx.iter().map(|&i| a.frame(i)).collect();
            parts[p] = a.bracket_frame(j, idx[p]);
            out = out.checked_add(&wedge_all(&parts).scale_poly(f)).unwrap();
        }
    }
    out
}

/// `[g, U]` for a function `g`.
fn bracket_function_with(a: &LieAlgebroid, g: &Poly, u: &GradedElem) -> GradedElem {
    let deg = u.degree().saturating_sub(1);
    let mut out = a.zero(Side::A, deg);
    if u.degree() == 0 {
        return out;
    }
    for (b, f) in u.components() {
        let idx = blade_indices(b);
        for (p, &i) in idx.iter().enumerate() {
            let rest = b & !(1 << i);
            let mut c = f * &a.anchor_frame_apply(i, g);
            if p % 2 == 0 {
                c = -c;
            }
            out.add_component(rest, c);
        }
    }
    out
}

/// Schouten bracket on `Γ(∧^• A)`, by the biderivation recursion starting
/// from `[X,f] = a(X)f`, `[f,g] = 0` and the frame brackets.
pub fn schouten(a: &LieAlgebroid, u: &GradedElem, v: &GradedElem) -> Result<GradedElem> {
    a.expect_side(u, Side::A)?;
    a.expect_side(v, Side::A)?;
    let (du, dv) = (u.degree(), v.degree());
    let out_deg = (du + dv).saturating_sub(1);
    let mut out = a.zero(Side::A, out_deg);
    if du + dv == 0 {
        return Ok(out);
    }
    let sign_u = if du % 2 == 0 { 1 } else { -1 };
    for (bj, g) in v.components() {
        let jdx = blade_indices(bj);
        // [U, g] ∧ e_J
        let ug = bracket_function_with(a, g, u).scale_int(sign_u);
        if !ug.is_zero() {
            let ej = GradedElem::blade(Side::A, a.rank(), bj, Poly::one(a.vars()));
            out = out.checked_add(&ug.wedge(&ej)?)?;
        }
        // g Σ_b (-1)^{(u-1)(b-1)} e_{j1}∧…∧[U, e_{jb}]∧…
        for (p, &j) in jdx.iter().enumerate() {
            let uej = bracket_frame_with(a, j, u).neg();
            if uej.is_zero() {
                continue;
            }
            let mut parts: Vec<GradedElem> = jdx.iter().map(|&i| a.frame(i)).collect();
            parts[p] = uej;
            let mut t = wedge_all(&parts).scale_poly(g);
            if du % 2 == 0 && p % 2 == 1 {
                t = t.neg();
            }
            out = out.checked_add(&t)?;
        }
    }
    Ok(out)
}

/// Schouten bracket evaluated through the contraction identity
/// `[U,V]⌟θ = (-1)^{(u-1)(v-1)} U⌟d(V⌟θ) - V⌟d(U⌟θ) - (-1)^{u+1} (U∧V)⌟dθ`
/// against every basis form `θ` of degree `u+v-1`.
pub fn schouten_oracle(a: &LieAlgebroid, u: &GradedElem, v: &GradedElem) -> Result<GradedElem> {
    a.expect_side(u, Side::A)?;
    a.expect_side(v, Side::A)?;
    let (du, dv) = (u.degree(), v.degree());
    let mut out = a.zero(Side::A, (du + dv).saturating_sub(1));
    if du + dv == 0 || du + dv - 1 > a.rank() {
        return Ok(out);
    }
    let uv = u.wedge(v)?;
    let s1 = if (du + 1) * (dv + 1) % 2 == 0 { 1 } else { -1 };
    let s3 = if du % 2 == 0 { 1 } else { -1 };
    for b in blades(a.rank(), du + dv - 1) {
        let theta = GradedElem::blade(Side::Dual, a.rank(), b, Poly::one(a.vars()));
        let t1 = u.contract_or_zero(&differential(a, &v.contract_or_zero(&theta))?);
        let t2 = v.contract_or_zero(&differential(a, &u.contract_or_zero(&theta))?);
        let t3 = uv.contract_or_zero(&differential(a, &theta)?);
        let val = t1.as_function().scale(&int(s1)) - t2.as_function()
            + t3.as_function().scale(&int(s3));
        out.add_component(b, val);
    }
    Ok(out)
}

/// `L_X V = [X, V]`.
pub fn lie_derivative(a: &LieAlgebroid, x: &GradedElem, v: &GradedElem) -> Result<GradedElem> {
    a.expect_shape(x, Side::A, 1)?;
    schouten(a, x, v)
}

/// Lie derivative of a form, `L_X ω = X⌟dω + d(X⌟ω)`.
pub fn form_lie_derivative(
    a: &LieAlgebroid,
    x: &GradedElem,
    omega: &GradedElem,
) -> Result<GradedElem> {
    a.expect_shape(x, Side::A, 1)?;
    a.expect_side(omega, Side::Dual)?;
    let first = x.contract(&differential(a, omega)?)?;
    if omega.degree() == 0 {
        return Ok(first);
    }
    first.checked_add(&differential(a, &x.contract(omega)?)?)
}

/// Lichnerowicz differential `d_π U = [π, U]` over the tangent algebroid.
pub fn lichnerowicz(
    tangent: &LieAlgebroid,
    pi: &GradedElem,
    u: &GradedElem,
) -> Result<GradedElem> {
    tangent.expect_shape(pi, Side::A, 2)?;
    schouten(tangent, pi, u)
}

/// `d_*` of the dual algebroid, acting on `Γ(∧^• A)`.
pub fn dual_differential(a_star: &LieAlgebroid, u: &GradedElem) -> Result<GradedElem> {
    Ok(differential(a_star, &u.with_side(Side::Dual))?.with_side(Side::A))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BialgebroidReport {
    /// First pair where `d_*[X,Y] ≠ [d_*X,Y] + [X,d_*Y]`, with the residual.
    pub derivation_witness: Option<(GradedElem, GradedElem, GradedElem)>,
    /// Description of an axiom failure of the dual structure (if any).
    pub dual_axioms: Option<String>,
    /// First basis element on which `d_*² ≠ 0`.
    pub square_witness: Option<(GradedElem, GradedElem)>,
    pub pairs_checked: usize,
}

impl BialgebroidReport {
    pub fn passed(&self) -> bool {
        self.derivation_witness.is_none()
            && self.dual_axioms.is_none()
            && self.square_witness.is_none()
    }
}

/// Check that `(A, A*)` is a Lie bialgebroid: the dual structure satisfies
/// its axioms, `d_*² = 0`, and `d_*` is a derivation of the Schouten
/// bracket on all frame pairs and `trials` seeded random pairs.
pub fn bialgebroid_check(
    a: &LieAlgebroid,
    a_star: &LieAlgebroid,
    trials: usize,
    seed: u64,
    max_deg: u32,
) -> Result<BialgebroidReport> {
    if a.rank() != a_star.rank() {
        return Err(Error::RankMismatch { expected: a.rank(), found: a_star.rank() });
    }
    if a.vars() != a_star.vars() {
        return Err(Error::VariableMismatch {
            left: a.vars().names().to_vec(),
            right: a_star.vars().names().to_vec(),
        });
    }
    let mut pairs: Vec<(GradedElem, GradedElem)> = Vec::new();
    for i in 0..a.rank() {
        for j in 0..a.rank() {
            pairs.push((a.frame(i), a.frame(j)));
        }
    }
    let mut rng = random::rng(seed);
    for _ in 0..trials {
        let x = random::element(&mut rng, Side::A, a.rank(), 1, a.vars(), max_deg);
        let y = random::element(&mut rng, Side::A, a.rank(), 1, a.vars(), max_deg);
        pairs.push((x, y));
    }
    let mut report = BialgebroidReport {
        derivation_witness: None,
        dual_axioms: None,
        square_witness: None,
        pairs_checked: pairs.len(),
    };
    for (x, y) in &pairs {
        let lhs = dual_differential(a_star, &schouten(a, x, y)?)?;
        let rhs = schouten(a, &dual_differential(a_star, x)?, y)?
            .checked_add(&schouten(a, x, &dual_differential(a_star, y)?)?)?;
        let residual = lhs.checked_sub(&rhs)?;
        if !residual.is_zero() {
            report.derivation_witness = Some((x.clone(), y.clone(), residual));
            break;
        }
    }
    let v = a_star.validate();
    if let Some(w) = v.witnesses.first() {
        report.dual_axioms = Some(w.describe(a_star.frame_names()));
    }
    'outer: for k in 0..=a.rank() {
        for b in blades(a.rank(), k) {
            for f in probe_functions(a) {
                let u = GradedElem::blade(Side::A, a.rank(), b, f);
                let sq = dual_differential(a_star, &dual_differential(a_star, &u)?)?;
                if !sq.is_zero() {
                    report.square_witness = Some((u, sq));
                    break 'outer;
                }
            }
        }
    }
    Ok(report)
}

/// `1` and each coordinate, used as coefficients of basis probes.
pub(crate) fn probe_functions(a: &LieAlgebroid) -> Vec<Poly> {
    let mut out = vec![Poly::one(a.vars())];
    for mu in 0..a.base_dim() {
        out.push(Poly::var(a.vars(), mu).expect("in range"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::standard::*;
    use crate::algebroid::{bivector, cotangent_algebroid, cotangent_unchecked, PoissonStructure};
    use proptest::prelude::*;

    fn t2() -> LieAlgebroid {
        tangent(&["x", "y"]).unwrap()
    }

    fn field(a: &LieAlgebroid, terms: &[(&[usize], &str)]) -> GradedElem {
        let deg = terms.first().map_or(0, |t| t.0.len());
        GradedElem::from_terms(
            Side::A,
            a.rank(),
            deg,
            a.vars(),
            terms.iter().map(|(i, c)| (i.to_vec(), a.parse_poly(c).unwrap())),
        )
        .unwrap()
    }

    fn form(a: &LieAlgebroid, terms: &[(&[usize], &str)]) -> GradedElem {
        field(a, terms).with_side(Side::Dual)
    }

    #[test]
    fn differential_examples() {
        let t = t2();
        let f = t.function(Side::Dual, t.parse_poly("x*y").unwrap());
        assert_eq!(differential(&t, &f).unwrap(), form(&t, &[(&[0], "y"), (&[1], "x")]));

        let g = aff1();
        let d2 = differential(&g, &g.coframe(1)).unwrap();
        assert_eq!(d2, GradedElem::basis(Side::Dual, 2, &[0, 1], g.vars()).neg());
        assert!(differential(&g, &g.coframe(0)).unwrap().is_zero());

        let ps = PoissonStructure::from_terms(&["x", "y"], &[(0, 1, "1")]).unwrap();
        let ct = cotangent_algebroid(&ps).unwrap();
        let x = ct.function(Side::Dual, ct.parse_poly("x").unwrap());
        let dx = differential(&ct, &x).unwrap();
        assert_eq!(dx, ct.coframe(1).neg());
    }

    #[test]
    fn top_degree_differential_vanishes() {
        let t = t2();
        let top = form(&t, &[(&[0, 1], "x^2*y")]);
        let d = differential(&t, &top).unwrap();
        assert!(d.is_zero());
        assert!(differential(&t, &t.frame(0)).is_err());
    }

    #[test]
    fn schouten_examples() {
        let t = t2();
        let dx = t.frame(0);
        let xdy = field(&t, &[(&[1], "x")]);
        assert_eq!(schouten(&t, &dx, &xdy).unwrap(), t.frame(1));
        assert_eq!(schouten_oracle(&t, &dx, &xdy).unwrap(), t.frame(1));

        let x2 = t.function(Side::A, t.parse_poly("x^2").unwrap());
        assert_eq!(schouten(&t, &dx, &x2).unwrap(), t.function(Side::A, t.parse_poly("2*x").unwrap()));

        let dy = t.frame(1);
        let ypi = field(&t, &[(&[0, 1], "y")]);
        let want = field(&t, &[(&[0, 1], "1")]);
        assert_eq!(schouten(&t, &dy, &ypi).unwrap(), want);
        assert_eq!(schouten_oracle(&t, &dy, &ypi).unwrap(), want);

        let pi = field(&t, &[(&[0, 1], "1")]);
        let x = t.function(Side::A, t.parse_poly("x").unwrap());
        assert_eq!(schouten_oracle(&t, &pi, &x).unwrap(), t.frame(1).neg());
        assert_eq!(schouten(&t, &pi, &x).unwrap(), t.frame(1).neg());

        let y = t.function(Side::A, t.parse_poly("y").unwrap());
        assert!(schouten(&t, &x, &y).unwrap().is_zero());
        assert!(schouten_oracle(&t, &x, &y).unwrap().is_zero());
    }

    #[test]
    fn lichnerowicz_examples() {
        let t = t2();
        let xdx = field(&t, &[(&[0], "x")]);
        assert_eq!(lie_derivative(&t, &t.frame(0), &xdx).unwrap(), t.frame(0));
        let pi = bivector(&t, &[(0, 1, "1")]).unwrap();
        assert!(lichnerowicz(&t, &pi, &pi).unwrap().is_zero());
        let x = t.function(Side::A, t.parse_poly("x").unwrap());
        let lx = lichnerowicz(&t, &pi, &x).unwrap();
        let ct = cotangent_algebroid(&PoissonStructure::new(&t, pi).unwrap()).unwrap();
        assert_eq!(lx, dual_differential(&ct, &x).unwrap());
        assert_eq!(lx, t.frame(1).neg());
    }

    #[test]
    fn bialgebroid_examples() {
        let t = t2();
        let lin = PoissonStructure::from_terms(&["x", "y"], &[(0, 1, "y")]).unwrap();
        let ct = cotangent_algebroid(&lin).unwrap();
        assert!(bialgebroid_check(&t, &ct, 10, 1, 2).unwrap().passed());
        let zero = PoissonStructure::from_terms(&["x", "y"], &[]).unwrap();
        let ct0 = cotangent_algebroid(&zero).unwrap();
        assert!(bialgebroid_check(&t, &ct0, 10, 1, 2).unwrap().passed());

        let t3 = tangent(&["x", "y", "z"]).unwrap();
        let pi = bivector(&t3, &[(0, 1, "1"), (1, 2, "y")]).unwrap();
        let bad = cotangent_unchecked(&PoissonStructure::new_unchecked(&t3, pi).unwrap()).unwrap();
        let r = bialgebroid_check(&t3, &bad, 10, 1, 2).unwrap();
        assert!(!r.passed());
        assert!(r.dual_axioms.is_some());
        assert!(r.square_witness.is_some());
    }

    fn check_pair(a: &LieAlgebroid, seed: u64, du: usize, dv: usize) -> std::result::Result<(), TestCaseError> {
        let mut rng = random::rng(seed);
        let u = random::element(&mut rng, Side::A, a.rank(), du, a.vars(), 2);
        let v = random::element(&mut rng, Side::A, a.rank(), dv, a.vars(), 2);
        prop_assert_eq!(schouten(a, &u, &v).unwrap(), schouten_oracle(a, &u, &v).unwrap());
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn recursion_matches_oracle(seed in any::<u64>(), du in 0usize..3, dv in 0usize..3) {
            check_pair(&t2(), seed, du, dv)?;
            check_pair(&sl2(), seed, du, dv)?;
            let lin = PoissonStructure::from_terms(&["x", "y"], &[(0, 1, "y")]).unwrap();
            check_pair(&cotangent_algebroid(&lin).unwrap(), seed, du, dv)?;
        }

        #[test]
        fn d_squared_vanishes(seed in any::<u64>(), k in 0usize..3) {
            let lin = PoissonStructure::from_terms(&["x", "y"], &[(0, 1, "x*y")]).unwrap();
            for a in [t2(), sl2(), cotangent_algebroid(&lin).unwrap()] {
                let mut rng = random::rng(seed);
                let w = random::element(&mut rng, Side::Dual, a.rank(), k.min(a.rank()), a.vars(), 3);
                let dd = differential(&a, &differential(&a, &w).unwrap()).unwrap();
                prop_assert!(dd.is_zero());
            }
        }
    }
}
