use crate::algebroid::LieAlgebroid;
use crate::bv::{generating_operator, TopConnection};
use crate::calculus::{differential, schouten};
use crate::error::{Error, Result};
use crate::exterior::{blades, star, star_inv, GradedElem, Side, Volume};
use crate::poly::{Poly, Vars};
use crate::random;

use super::{boundary, monomials, BettiTable, WeightedComplex};

/// Every monomial basis element `x^a e_I` with `|a| ≤ max_weight`.
pub fn monomial_basis(rank: usize, vars: &Vars, side: Side, max_weight: u32) -> Vec<GradedElem> {
    let top = if vars.is_empty() { 0 } else { max_weight };
    let mut out = Vec::new();
    for k in 0..=rank {
        for b in blades(rank, k) {
            for w in 0..=top {
                for m in monomials(vars.len(), w) {
                    out.push(GradedElem::blade(side, rank, b, Poly::monomial(vars, m, crate::poly::int(1))));
                }
            }
        }
    }
    out
}

/// `∂₀ U = -*(d(*⁻¹U))` for the connection with `Λ` horizontal, on every
/// monomial basis element up to `max_weight`. Returns the first failure.
pub fn star_conjugation_check(
    a: &LieAlgebroid,
    vol: &Volume,
    max_weight: u32,
) -> Result<Option<(GradedElem, GradedElem, GradedElem)>> {
    let triv = TopConnection::trivial(a);
    for u in monomial_basis(a.rank(), a.vars(), Side::A, max_weight) {
        let lhs = boundary(&triv, &u)?;
        let rhs = if u.degree() == 0 {
            a.zero(Side::A, 0)
        } else {
            star(&differential(a, &star_inv(&u, vol))?, vol).neg()
        };
        if !lhs.checked_sub(&rhs)?.is_zero() {
            return Ok(Some((u, lhs, rhs)));
        }
    }
    Ok(None)
}

/// Homology with the trivial connection against reversed cohomology.
pub fn algebroid_duality_check(
    a: &LieAlgebroid,
    max_weight: u32,
) -> Result<(BettiTable, BettiTable, bool)> {
    let triv = TopConnection::trivial(a);
    let h = WeightedComplex::homology(&triv).betti(max_weight)?;
    let c = WeightedComplex::cohomology(a).betti(max_weight)?;
    let ok = h.reversed() == c.entries;
    Ok((h, c, ok))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyReport {
    pub first: BettiTable,
    pub second: BettiTable,
    /// Tables are compared for weights `≤ stable_weight`; `None` when the
    /// cap leaves no stable range.
    pub stable_weight: Option<u32>,
}

impl HomotopyReport {
    pub fn inconclusive(&self) -> bool {
        self.stable_weight.is_none()
    }

    pub fn passed(&self) -> bool {
        match self.stable_weight {
            None => false,
            Some(w) => self.first.up_to_weight(w) == self.second.up_to_weight(w),
        }
    }
}

/// Capped homology tables for `α₁` and `α₂ = α₁ + dg`, compared in the
/// weight range `w ≤ W - deg g`.
pub fn homotopy_invariance_check(
    a: &LieAlgebroid,
    alpha1: &GradedElem,
    g: &Poly,
    max_weight: u32,
) -> Result<HomotopyReport> {
    let c1 = TopConnection::new(a, alpha1.clone())?;
    let dg = differential(a, &a.function(Side::Dual, g.clone()))?;
    let c2 = TopConnection::new(a, alpha1.checked_add(&dg)?)?;
    if !c1.is_flat() || !c2.is_flat() {
        return Err(Error::NotAComplex("connections must be flat".into()));
    }
    let first = WeightedComplex::homology(&c1).betti_capped_forced(max_weight)?;
    let second = WeightedComplex::homology(&c2).betti_capped_forced(max_weight)?;
    let deg = g.degree().unwrap_or(0);
    let stable_weight = if a.vars().is_empty() {
        Some(0)
    } else {
        max_weight.checked_sub(deg)
    };
    Ok(HomotopyReport { first, second, stable_weight })
}

/// The bracket descends to homology: on seeded pairs, for a flat
/// connection, `D[U,V] = [DU,V] - (-1)^{|U|}[U,DV]`; consequently brackets
/// of cycles are cycles and `[Z, ∂W] = ±∂[Z, W]` for a cycle `Z`.
/// Returns the first failing pair.
pub fn bracket_descends_check(
    conn: &TopConnection,
    trials: usize,
    seed: u64,
    max_deg: u32,
) -> Result<Option<String>> {
    let a = conn.algebroid();
    let d = |u: &GradedElem| generating_operator(conn, u);
    let mut rng = random::rng(seed);
    for _ in 0..trials {
        let u = random::any_degree(&mut rng, Side::A, a.rank(), a.vars(), max_deg);
        let v = random::any_degree(&mut rng, Side::A, a.rank(), a.vars(), max_deg);
        let su = if u.degree() % 2 == 0 { 1 } else { -1 };
        let lhs = d(&schouten(a, &u, &v)?)?;
        let rhs = schouten(a, &d(&u)?, &v)?.checked_sub(&schouten(a, &u, &d(&v)?)?.scale_int(su))?;
        if !lhs.checked_sub(&rhs)?.is_zero() {
            return Ok(Some(format!("D[U,V] ≠ [DU,V] - (-1)^u [U,DV] for U = {u}, V = {v}")));
        }
        // boundaries are cycles; their bracket must be a cycle
        let (zu, zv) = (d(&u)?, d(&v)?);
        let b = schouten(a, &zu, &zv)?;
        if !d(&b)?.is_zero() {
            return Ok(Some(format!("bracket of cycles {zu} and {zv} is not a cycle")));
        }
        // [Z, ∂W] equals ∂ of something: here ±D[Z, W]
        let zw = schouten(a, &zu, &d(&v)?)?;
        let pre = d(&schouten(a, &zu, &v)?)?;
        if !zw.checked_sub(&pre)?.is_zero() && !zw.checked_add(&pre)?.is_zero() {
            return Ok(Some(format!("[Z, DW] is not D[Z, W] up to sign for Z = {zu}, W = {v}")));
        }
    }
    Ok(None)
}
