use crate::algebroid::{cotangent_algebroid, LieAlgebroid, PoissonStructure};
use crate::bv::{generating_operator, interior, TopConnection};
use crate::calculus::{differential, form_lie_derivative, lichnerowicz, schouten};
use crate::error::{Error, Result};
use crate::exterior::{star, star_inv, GradedElem, Side, Volume};
use crate::poly::Poly;

use super::{BettiTable, WeightedComplex};

/// `i_π ω = π ⌟ ω`.
pub fn interior_pi(ps: &PoissonStructure, omega: &GradedElem) -> GradedElem {
    ps.bivector().contract_or_zero(omega)
}

/// Koszul–Brylinski operator `[i_π, d] = i_π∘d - d∘i_π` on forms.
pub fn koszul_brylinski(ps: &PoissonStructure, omega: &GradedElem) -> Result<GradedElem> {
    let t = ps.tangent();
    t.expect_side(omega, Side::Dual)?;
    let first = interior_pi(ps, &differential(t, omega)?);
    if omega.degree() < 2 {
        return Ok(first);
    }
    first.checked_sub(&differential(t, &interior_pi(ps, omega))?)
}

/// Hamiltonian vector field `X_f = Σ_ν π(df, dx_ν) ∂_ν`.
pub fn hamiltonian(ps: &PoissonStructure, f: &Poly) -> Result<GradedElem> {
    let t = ps.tangent();
    let df = differential(t, &t.function(Side::Dual, f.clone()))?;
    Ok(crate::algebroid::pi_sharp(t, ps.bivector(), &df))
}

/// Modular vector field `ν_Ω(f) = (L_{X_f} Ω) / Ω`, assembled from its
/// values on the coordinates.
pub fn modular_vector_field(ps: &PoissonStructure, vol: &Volume) -> Result<GradedElem> {
    let t = ps.tangent();
    let omega = vol.element(Side::Dual, t.rank(), t.vars());
    let mut nu = t.zero(Side::A, 1);
    for mu in 0..t.base_dim() {
        let x = Poly::var(t.vars(), mu)?;
        let l = form_lie_derivative(t, &hamiltonian(ps, &x)?, &omega)?;
        let ratio = l.top_coefficient().scale(&vol.coeff().recip());
        nu = nu.checked_add(&t.frame(mu).scale_poly(&ratio))?;
    }
    Ok(nu)
}

/// `D₀` of the cotangent algebroid for the horizontal volume `Ω`, acting on
/// forms of the base.
pub fn cotangent_trivial_operator(ct: &LieAlgebroid, omega: &GradedElem) -> Result<GradedElem> {
    let conn = TopConnection::trivial(ct);
    Ok(generating_operator(&conn, &omega.with_side(Side::A))?.with_side(Side::Dual))
}

/// Compare `lhs` with `s · rhs` for `s = ±1`. `Some(None)` when both
/// vanish, `Some(Some(s))` on a match, `None` otherwise.
pub(crate) fn match_sign(lhs: &GradedElem, rhs: &GradedElem) -> Option<Option<i64>> {
    if rhs.is_zero() {
        return lhs.is_zero().then_some(None);
    }
    if lhs.checked_sub(rhs).is_ok_and(|d| d.is_zero()) {
        Some(Some(1))
    } else if lhs.checked_add(rhs).is_ok_and(|d| d.is_zero()) {
        Some(Some(-1))
    } else {
        None
    }
}

/// Outcome of a "equal up to one global sign" comparison over probes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedReport {
    /// The sign when at least one probe had a nonzero right-hand side.
    pub sign: Option<i64>,
    /// First failing probe, rendered.
    pub witness: Option<String>,
    pub probes: usize,
}

impl SignedReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    fn fold(pairs: impl IntoIterator<Item = (GradedElem, GradedElem, GradedElem)>) -> Self {
        let mut report = SignedReport { sign: None, witness: None, probes: 0 };
        for (probe, lhs, rhs) in pairs {
            report.probes += 1;
            if report.witness.is_some() {
                continue;
            }
            match match_sign(&lhs, &rhs) {
                None => {
                    report.witness =
                        Some(format!("probe {probe}: got {lhs}, expected ±({rhs})"));
                }
                Some(Some(s)) => match report.sign {
                    Some(prev) if prev != s => {
                        report.witness = Some(format!(
                            "probe {probe}: sign {s} disagrees with earlier sign {prev}"
                        ));
                    }
                    _ => report.sign = Some(s),
                },
                Some(None) => {}
            }
        }
        report
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularReport {
    pub nu: GradedElem,
    /// `[π, ν] = 0`.
    pub poisson_field: bool,
    /// `KB - D₀ = s · i_ν` on the probes.
    pub relation: SignedReport,
}

impl ModularReport {
    pub fn passed(&self) -> bool {
        self.poisson_field && self.relation.passed()
    }
}

/// Compute `ν_Ω` and compare `Δ = KB - D₀` with `s · i_ν` on form probes.
pub fn modular_relation_check(
    ps: &PoissonStructure,
    vol: &Volume,
    probes: &[GradedElem],
) -> Result<ModularReport> {
    let ct = cotangent_algebroid(ps)?;
    let nu = modular_vector_field(ps, vol)?;
    let poisson_field = lichnerowicz(ps.tangent(), ps.bivector(), &nu)?.is_zero();
    let mut rows = Vec::new();
    for w in probes {
        let delta = koszul_brylinski(ps, w)?.checked_sub(&cotangent_trivial_operator(&ct, w)?)?;
        rows.push((w.clone(), delta, interior(&nu.with_side(Side::A), w)));
    }
    Ok(ModularReport { nu, poisson_field, relation: SignedReport::fold(rows) })
}

/// `D = -(-1)^{n-k} * ∘ d ∘ *⁻¹` on multivector fields, for the volume form
/// `Ω`.
pub fn star_operator_d(t: &LieAlgebroid, vol: &Volume, u: &GradedElem) -> Result<GradedElem> {
    t.expect_side(u, Side::A)?;
    if u.degree() == 0 || u.degree() > t.rank() {
        return Ok(t.zero(Side::A, u.degree().saturating_sub(1)));
    }
    let omega = star_inv(u, vol);
    let out = star(&differential(t, &omega)?, vol);
    Ok(if (t.rank() - u.degree()) % 2 == 0 { out.neg() } else { out })
}

/// Anticommutator `d_π D + D d_π` on each probe against `s · L_ν`.
pub fn question4_defect(
    ps: &PoissonStructure,
    vol: &Volume,
    probes: &[GradedElem],
) -> Result<SignedReport> {
    let t = ps.tangent();
    let nu = modular_vector_field(ps, vol)?;
    let mut rows = Vec::new();
    for u in probes {
        let d = |v: &GradedElem| star_operator_d(t, vol, v);
        let dstar = |v: &GradedElem| lichnerowicz(t, ps.bivector(), v);
        let defect = dstar(&d(u)?)?.checked_add(&d(&dstar(u)?)?)?;
        rows.push((u.clone(), defect, schouten(t, &nu, u)?));
    }
    Ok(SignedReport::fold(rows))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityReport {
    pub nu: GradedElem,
    /// `None` when the modular field is nonzero and the check was skipped.
    pub tables: Option<(BettiTable, BettiTable)>,
}

impl DualityReport {
    pub fn skipped(&self) -> bool {
        self.tables.is_none()
    }

    /// `H_k(w) = H^{n-k}(w)` in every computed slice.
    pub fn passed(&self) -> bool {
        match &self.tables {
            None => false,
            Some((h, c)) => h.reversed() == c.entries,
        }
    }
}

/// Poisson homology (Koszul–Brylinski) against reversed Poisson cohomology.
/// Requires `ν_Ω = 0`.
pub fn unimodular_duality_check(
    ps: &PoissonStructure,
    vol: &Volume,
    max_weight: u32,
) -> Result<DualityReport> {
    let nu = modular_vector_field(ps, vol)?;
    if !nu.is_zero() {
        return Ok(DualityReport { nu, tables: None });
    }
    let h = WeightedComplex::koszul_brylinski(ps).betti(max_weight)?;
    let pi = ps.bivector().clone();
    let c = WeightedComplex::lichnerowicz(ps.tangent(), &pi).betti(max_weight)?;
    Ok(DualityReport { nu, tables: Some((h, c)) })
}

/// Chevalley–Eilenberg boundary
/// `∂(x_1∧…∧x_k) = Σ_{i<j} (-1)^{i+j} [x_i,x_j]∧x_1∧…x̂_i…x̂_j…∧x_k`
/// of a Lie algebra (base a point).
pub fn chevalley_eilenberg_boundary(g: &LieAlgebroid, u: &GradedElem) -> Result<GradedElem> {
    if g.base_dim() != 0 {
        return Err(Error::Malformed("Chevalley–Eilenberg boundary needs a Lie algebra".into()));
    }
    g.expect_side(u, Side::A)?;
    let mut out = g.zero(Side::A, u.degree().saturating_sub(1));
    for (b, c) in u.components() {
        let idx = crate::exterior::blade_indices(b);
        for p in 0..idx.len() {
            for q in p + 1..idx.len() {
                let mut t = g.bracket_frame(idx[p], idx[q]);
                for (r, &i) in idx.iter().enumerate() {
                    if r != p && r != q {
                        t = t.wedge(&g.frame(i))?;
                    }
                }
                // 1-based positions p+1, q+1 give the same parity as p+q
                let t = if (p + q) % 2 == 0 { t } else { t.neg() };
                out = out.checked_add(&t.scale_poly(c))?;
            }
        }
    }
    Ok(out)
}

/// `α` with `D_CE - D₀ = i_α`, and `α` recovered from `D_CE` alone.
pub fn lie_algebra_modular_character(
    g: &LieAlgebroid,
) -> Result<(crate::bv::DifferenceReport, TopConnection)> {
    let triv = TopConnection::trivial(g);
    let dce = |u: &GradedElem| chevalley_eilenberg_boundary(g, u);
    let d0 = |u: &GradedElem| generating_operator(&triv, u);
    let probes = crate::bv::frame_basis(g, Side::A);
    let diff = crate::bv::operator_difference(g, &dce, &d0, &probes)?;
    let conn = crate::bv::connection_from_operator(g, &dce)?;
    Ok((diff, conn))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::standard::*;
    use crate::poly::rat;

    fn plane(pi: &str) -> PoissonStructure {
        PoissonStructure::from_terms(&["x", "y"], &[(0, 1, pi)]).unwrap()
    }

    fn form(ps: &PoissonStructure, idx: &[usize], c: &str) -> GradedElem {
        let t = ps.tangent();
        GradedElem::basis(Side::Dual, t.rank(), idx, t.vars()).scale_poly(&t.parse_poly(c).unwrap())
    }

    #[test]
    fn koszul_brylinski_examples() {
        let ps = plane("1");
        let f = form(&ps, &[], "x^2*y");
        assert!(koszul_brylinski(&ps, &f).unwrap().is_zero());
        let k = koszul_brylinski(&ps, &form(&ps, &[0], "y")).unwrap();
        assert_eq!(k.as_function(), Poly::from_int(ps.vars(), -1));
        let k = koszul_brylinski(&ps, &form(&ps, &[0, 1], "x")).unwrap();
        assert_eq!(k, form(&ps, &[0], "1").neg());
    }

    #[test]
    fn modular_field_examples() {
        let vol = Volume::reference();
        assert!(modular_vector_field(&plane("1"), &vol).unwrap().is_zero());
        let lin = plane("y");
        let nu = modular_vector_field(&lin, &vol).unwrap();
        assert_eq!(nu, lin.tangent().frame(0));
        let twice = Volume::new(rat(2, 1)).unwrap();
        assert_eq!(modular_vector_field(&lin, &twice).unwrap(), nu);
    }

    #[test]
    fn modular_relation_examples() {
        let vol = Volume::reference();
        let lin = plane("y");
        let probes = vec![
            form(&lin, &[0], "1"),
            form(&lin, &[1], "1"),
            form(&lin, &[0], "y"),
            form(&lin, &[0, 1], "x"),
        ];
        let r = modular_relation_check(&lin, &vol, &probes).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.relation.sign, Some(-1));
        let sym = plane("1");
        let r = modular_relation_check(&sym, &vol, &probes).unwrap();
        assert!(r.passed());
        assert_eq!(r.relation.sign, None);
    }

    #[test]
    fn question4_examples() {
        let vol = Volume::reference();
        let lin = plane("y");
        let t = lin.tangent();
        let xdx = t.frame(0).scale_poly(&t.parse_poly("x").unwrap());
        let r = question4_defect(&lin, &vol, &[xdx.clone(), t.frame(1)]).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.sign, Some(1));
        let sym = plane("1");
        let r = question4_defect(&sym, &vol, &[xdx]).unwrap();
        assert!(r.passed());
        assert_eq!(r.sign, None);
    }

    #[test]
    fn aff1_modular_character() {
        let g = aff1();
        let (diff, conn) = lie_algebra_modular_character(&g).unwrap();
        assert!(diff.passed(), "{diff:?}");
        assert_eq!(diff.alpha, g.coframe(0).neg());
        assert_eq!(conn.alpha(), &g.coframe(0));
        assert_eq!(conn.alpha(), &g.trace_of_ad());
        let s = sl2();
        let (diff, conn) = lie_algebra_modular_character(&s).unwrap();
        assert!(diff.passed());
        assert!(diff.alpha.is_zero());
        assert!(conn.alpha().is_zero());
    }

    #[test]
    fn duality_examples() {
        let vol = Volume::reference();
        let r = unimodular_duality_check(&plane("1"), &vol, 3).unwrap();
        assert!(r.passed());
        let r = unimodular_duality_check(&plane("0"), &vol, 2).unwrap();
        assert!(r.passed());
        let (h, _) = r.tables.unwrap();
        assert_eq!(h.get(1, 2), 2 * 3);
        let r = unimodular_duality_check(&plane("y"), &vol, 2).unwrap();
        assert!(r.skipped());
    }
}
