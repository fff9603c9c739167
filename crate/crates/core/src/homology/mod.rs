//! Weight-graded chain complexes and their Betti tables.
//!
//! A chain in degree `k` and weight `w` is a sum of basis elements
//! `x^a e_I` (or `x^a ε_I`) with `|I| = k` and `|a| = w`. An operator is
//! probed on this basis: if every basis element is moved by the same weight
//! shift `s` the complex splits into finite slices; if shifts are mixed but
//! never positive, the elements of weight `≤ W` form a finite subcomplex
//! and the table is reported as capped.

mod checks;
mod poisson;

pub use checks::*;
pub use poisson::*;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::algebroid::LieAlgebroid;
use crate::bv::{generating_operator, Operator, TopConnection};
use crate::calculus::{differential, lichnerowicz};
use crate::error::{Error, Result};
use crate::exterior::{blades, Blade, GradedElem, Side};
use crate::linalg::Matrix;
use crate::poly::{Monomial, Poly, Rational, Vars};

/// `∂ = (-1)^{n-k} D`.
pub fn boundary(conn: &TopConnection, u: &GradedElem) -> Result<GradedElem> {
    let d = generating_operator(conn, u)?;
    Ok(if (conn.rank() - u.degree().min(conn.rank())) % 2 == 0 { d } else { d.neg() })
}

/// All exponent vectors of total degree `w` in `m` variables, in
/// lexicographically decreasing order.
pub fn monomials(m: usize, w: u32) -> Vec<Monomial> {
    fn go(m: usize, w: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == m {
            prefix.push(w);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=w).rev() {
            prefix.push(e);
            go(m, w - e, prefix, out);
            prefix.pop();
        }
    }
    if m == 0 {
        return if w == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    go(m, w, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum Grading {
    /// Every basis element moves by the same weight shift.
    Homogeneous { shift: i64 },
    /// Mixed, non-positive shifts: the weight-`≤ W` truncation is computed.
    Capped { cap: u32 },
}

/// A graded operator together with the data needed to build its slices.
pub struct WeightedComplex<'a> {
    label: String,
    rank: usize,
    vars: Vars,
    side: Side,
    /// `+1` for differentials, `-1` for boundaries.
    step: i64,
    op: Box<Operator<'a>>,
}

type Cell = (Blade, Monomial);

impl<'a> WeightedComplex<'a> {
    pub fn new(
        label: &str,
        rank: usize,
        vars: &Vars,
        side: Side,
        step: i64,
        op: Box<Operator<'a>>,
    ) -> Self {
        assert!(step == 1 || step == -1);
        WeightedComplex { label: label.to_string(), rank, vars: vars.clone(), side, step, op }
    }

    /// Algebroid cohomology: `d` on `Γ(∧^• A*)`.
    pub fn cohomology(a: &'a LieAlgebroid) -> Self {
        Self::new(
            "cohomology d",
            a.rank(),
            a.vars(),
            Side::Dual,
            1,
            Box::new(move |u| differential(a, u)),
        )
    }

    /// Algebroid homology: `∂ = (-1)^{n-k} D` on `Γ(∧^• A)`.
    pub fn homology(conn: &'a TopConnection) -> Self {
        let a = conn.algebroid();
        Self::new(
            "homology boundary",
            a.rank(),
            a.vars(),
            Side::A,
            -1,
            Box::new(move |u| boundary(conn, u)),
        )
    }

    /// Poisson cohomology: `d_π = [π, ·]` on multivector fields.
    pub fn lichnerowicz(tangent: &'a LieAlgebroid, pi: &'a GradedElem) -> Self {
        Self::new(
            "Poisson cohomology [pi,.]",
            tangent.rank(),
            tangent.vars(),
            Side::A,
            1,
            Box::new(move |u| lichnerowicz(tangent, pi, u)),
        )
    }

    /// Poisson homology: Koszul–Brylinski operator on forms.
    pub fn koszul_brylinski(ps: &'a crate::algebroid::PoissonStructure) -> Self {
        Self::new(
            "Poisson homology [i_pi,d]",
            ps.dim(),
            ps.vars(),
            Side::Dual,
            -1,
            Box::new(move |u| koszul_brylinski(ps, u)),
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn basis(&self, k: usize, w: u32) -> Vec<Cell> {
        let mut out = Vec::new();
        for b in blades(self.rank, k) {
            for m in monomials(self.vars.len(), w) {
                out.push((b, m));
            }
        }
        out
    }

    fn element(&self, (b, m): &Cell) -> GradedElem {
        GradedElem::blade(self.side, self.rank, *b, Poly::monomial(&self.vars, m.clone(), crate::poly::int(1)))
    }

    fn apply(&self, cell: &Cell) -> Result<GradedElem> {
        (self.op)(&self.element(cell))
    }

    fn target_degree(&self, k: usize) -> Option<usize> {
        let t = k as i64 + self.step;
        (0..=self.rank as i64).contains(&t).then_some(t as usize)
    }

    /// Probe the basis up to weight `max_weight` for weight shifts and for
    /// `op ∘ op = 0`.
    pub fn grading(&self, max_weight: u32) -> Result<Grading> {
        let mut shifts = std::collections::BTreeSet::new();
        for k in 0..=self.rank {
            for w in 0..=self.max_w(max_weight) {
                for cell in self.basis(k, w) {
                    let img = self.apply(&cell)?;
                    for (_, c) in img.components() {
                        for (m, _) in c.terms() {
                            let wt: u32 = m.iter().sum();
                            shifts.insert(wt as i64 - w as i64);
                        }
                    }
                    if !img.is_zero() {
                        let twice = (self.op)(&img)?;
                        if !twice.is_zero() {
                            return Err(Error::NotAComplex(format!(
                                "{}: applied twice to {} gives {}",
                                self.label,
                                self.element(&cell),
                                twice
                            )));
                        }
                    }
                }
            }
        }
        match (shifts.first(), shifts.last()) {
            (None, _) => Ok(Grading::Homogeneous { shift: 0 }),
            (Some(lo), Some(hi)) if lo == hi => Ok(Grading::Homogeneous { shift: *lo }),
            (_, Some(hi)) if *hi > 0 => Err(Error::WeightRaising(*hi)),
            _ => Ok(Grading::Capped { cap: max_weight }),
        }
    }

    fn max_w(&self, w: u32) -> u32 {
        if self.vars.is_empty() {
            0
        } else {
            w
        }
    }

    /// Matrix of the operator from the cells `src` into the cells `dst`;
    /// images outside `dst` are an error.
    fn matrix(&self, src: &[Cell], dst: &[Cell]) -> Result<Matrix> {
        let index: BTreeMap<&Cell, usize> = dst.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut m = Matrix::zeros(dst.len(), src.len());
        for (j, cell) in src.iter().enumerate() {
            let img = self.apply(cell)?;
            for (b, c) in img.components() {
                for (mono, coeff) in c.terms() {
                    let key = (b, mono.clone());
                    let Some(&i) = index.get(&key) else {
                        return Err(Error::NotAComplex(format!(
                            "{}: image of {} leaves the target slice",
                            self.label,
                            self.element(cell)
                        )));
                    };
                    m[(i, j)] = coeff.clone();
                }
            }
        }
        Ok(m)
    }

    /// Betti table over weights `0..=max_weight` (a single column when the
    /// base is a point). Homogeneous operators give exact slice homology;
    /// mixed non-positive shifts give the graded pieces of the homology of
    /// the capped subcomplex.
    pub fn betti(&self, max_weight: u32) -> Result<BettiTable> {
        let w_max = self.max_w(max_weight);
        match self.grading(w_max)? {
            Grading::Homogeneous { shift } => self.betti_homogeneous(w_max, shift),
            Grading::Capped { .. } => self.betti_capped(w_max),
        }
    }

    /// Capped table even when the operator happens to be homogeneous.
    pub fn betti_capped_forced(&self, max_weight: u32) -> Result<BettiTable> {
        let w_max = self.max_w(max_weight);
        self.grading(w_max)?;
        self.betti_capped(w_max)
    }

    fn slice_rank(&self, k: usize, w: i64, shift: i64) -> Result<usize> {
        let Some(t) = self.target_degree(k) else { return Ok(0) };
        if w < 0 || w + shift < 0 {
            return Ok(0);
        }
        let src = self.basis(k, w as u32);
        let dst = self.basis(t, (w + shift) as u32);
        if src.is_empty() || dst.is_empty() {
            return Ok(0);
        }
        Ok(self.matrix(&src, &dst)?.rank())
    }

    fn betti_homogeneous(&self, w_max: u32, shift: i64) -> Result<BettiTable> {
        let mut entries = vec![vec![0usize; w_max as usize + 1]; self.rank + 1];
        for k in 0..=self.rank {
            for w in 0..=w_max {
                let dim = self.basis(k, w).len();
                let out_rank = self.slice_rank(k, w as i64, shift)?;
                let in_rank = match k as i64 - self.step {
                    s if s < 0 || s > self.rank as i64 => 0,
                    s => self.slice_rank(s as usize, w as i64 - shift, shift)?,
                };
                entries[k][w as usize] = dim - out_rank - in_rank;
            }
        }
        Ok(BettiTable {
            label: self.label.clone(),
            rank: self.rank,
            max_weight: w_max,
            grading: Grading::Homogeneous { shift },
            entries,
        })
    }

    fn capped_basis(&self, k: usize, w: u32) -> Vec<Cell> {
        (0..=w).flat_map(|v| self.basis(k, v)).collect()
    }

    fn betti_capped(&self, w_max: u32) -> Result<BettiTable> {
        let mut entries = vec![vec![0usize; w_max as usize + 1]; self.rank + 1];
        for k in 0..=self.rank {
            let full = self.capped_basis(k, w_max);
            // boundaries landing in degree k from the whole truncation
            let boundaries: Vec<Vec<Rational>> = match k as i64 - self.step {
                s if s < 0 || s > self.rank as i64 => Vec::new(),
                s => {
                    let src = self.capped_basis(s as usize, w_max);
                    if src.is_empty() || full.is_empty() {
                        Vec::new()
                    } else {
                        let m = self.matrix(&src, &full)?;
                        (0..m.cols()).map(|c| m.column(c)).collect()
                    }
                }
            };
            let b_rank = Matrix::from_columns(full.len(), &boundaries).rank();
            let mut prev = 0usize;
            for w in 0..=w_max {
                let src = self.capped_basis(k, w);
                let cycles: Vec<Vec<Rational>> = match self.target_degree(k) {
                    None => identity_columns(src.len()),
                    Some(t) => {
                        let dst = self.capped_basis(t, w_max);
                        if dst.is_empty() {
                            identity_columns(src.len())
                        } else {
                            self.matrix(&src, &dst)?.nullspace()
                        }
                    }
                };
                // embed cycles of the weight-≤w part into the full truncation
                let mut cols: Vec<Vec<Rational>> = cycles
                    .into_iter()
                    .map(|mut v| {
                        v.resize(full.len(), Rational::from_integer(0.into()));
                        v
                    })
                    .collect();
                cols.extend(boundaries.iter().cloned());
                let filt = Matrix::from_columns(full.len(), &cols).rank() - b_rank;
                entries[k][w as usize] = filt - prev;
                prev = filt;
            }
        }
        Ok(BettiTable {
            label: self.label.clone(),
            rank: self.rank,
            max_weight: w_max,
            grading: Grading::Capped { cap: w_max },
            entries,
        })
    }
}

fn identity_columns(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| {
            let mut v = vec![Rational::from_integer(0.into()); n];
            v[i] = Rational::from_integer(1.into());
            v
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiRecord {
    pub k: usize,
    pub w: u32,
    pub dim: usize,
}

/// `entries[k][w] = dim H_k` in weight `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    pub label: String,
    pub rank: usize,
    pub max_weight: u32,
    pub grading: Grading,
    pub entries: Vec<Vec<usize>>,
}

impl BettiTable {
    pub fn get(&self, k: usize, w: u32) -> usize {
        self.entries[k][w as usize]
    }

    /// Totals over weights, per degree.
    pub fn totals(&self) -> Vec<usize> {
        self.entries.iter().map(|row| row.iter().sum()).collect()
    }

    /// Rows in reverse degree order (`k ↦ n - k`).
    pub fn reversed(&self) -> Vec<Vec<usize>> {
        self.entries.iter().rev().cloned().collect()
    }

    pub fn is_capped(&self) -> bool {
        matches!(self.grading, Grading::Capped { .. })
    }

    pub fn records(&self) -> Vec<BettiRecord> {
        let mut out = Vec::new();
        for (k, row) in self.entries.iter().enumerate() {
            for (w, &dim) in row.iter().enumerate() {
                out.push(BettiRecord { k, w: w as u32, dim });
            }
        }
        out
    }

    /// Rows truncated to weights `≤ w`.
    pub fn up_to_weight(&self, w: u32) -> Vec<Vec<usize>> {
        self.entries.iter().map(|row| row[..=(w as usize).min(row.len() - 1)].to_vec()).collect()
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.grading {
            Grading::Homogeneous { shift } => format!("homogeneous, weight shift {shift}"),
            Grading::Capped { cap } => format!("capped at weight {cap}"),
        };
        writeln!(f, "{} ({mode})", self.label)?;
        write!(f, "{:>4}", "k\\w")?;
        for w in 0..=self.max_weight {
            write!(f, " {w:>4}")?;
        }
        writeln!(f)?;
        for (k, row) in self.entries.iter().enumerate() {
            write!(f, "{k:>4}")?;
            for d in row {
                write!(f, " {d:>4}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::standard::*;
    use crate::algebroid::PoissonStructure;

    fn col(t: &BettiTable) -> Vec<usize> {
        t.entries.iter().map(|r| r[0]).collect()
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials(0, 0), vec![Vec::<u32>::new()]);
        assert!(monomials(0, 1).is_empty());
        assert_eq!(monomials(3, 3).len(), 10);
    }

    #[test]
    fn boundary_examples() {
        let t = tangent(&["x", "y"]).unwrap();
        let triv = TopConnection::trivial(&t);
        let lam = crate::bv::reference_volume(&t);
        assert!(boundary(&triv, &lam).unwrap().is_zero());
        let u = t.frame(0).scale_poly(&t.parse_poly("x").unwrap());
        assert_eq!(boundary(&triv, &u).unwrap(), t.function(Side::A, Poly::one(t.vars())));
        let g = aff1();
        let lam = crate::bv::reference_volume(&g);
        assert!(boundary(&TopConnection::trivial(&g), &lam).unwrap().is_zero());
    }

    #[test]
    fn lie_algebra_tables() {
        let ab = abelian(3).unwrap();
        assert_eq!(col(&WeightedComplex::cohomology(&ab).betti(4).unwrap()), vec![1, 3, 3, 1]);
        let g = aff1();
        assert_eq!(col(&WeightedComplex::cohomology(&g).betti(0).unwrap()), vec![1, 1, 0]);
        let conn = TopConnection::trivial(&g);
        assert_eq!(col(&WeightedComplex::homology(&conn).betti(0).unwrap()), vec![0, 1, 1]);
        let s = sl2();
        assert_eq!(col(&WeightedComplex::cohomology(&s).betti(0).unwrap()), vec![1, 0, 0, 1]);
        let h = heisenberg3();
        assert_eq!(col(&WeightedComplex::cohomology(&h).betti(0).unwrap()), vec![1, 2, 2, 1]);
    }

    #[test]
    fn de_rham_plane() {
        let t = tangent(&["x", "y"]).unwrap();
        let table = WeightedComplex::cohomology(&t).betti(3).unwrap();
        assert_eq!(table.grading, Grading::Homogeneous { shift: -1 });
        assert_eq!(table.totals(), vec![1, 0, 0]);
        assert_eq!(table.get(0, 0), 1);
    }

    #[test]
    fn symplectic_plane() {
        let ps = PoissonStructure::from_terms(&["x", "y"], &[(0, 1, "1")]).unwrap();
        let h = WeightedComplex::koszul_brylinski(&ps).betti(4).unwrap();
        assert_eq!(h.totals(), vec![0, 0, 1]);
        assert_eq!(h.get(2, 0), 1);
        let pi = ps.bivector().clone();
        let c = WeightedComplex::lichnerowicz(ps.tangent(), &pi).betti(4).unwrap();
        assert_eq!(c.totals(), vec![1, 0, 0]);
        assert_eq!(h.reversed(), c.entries);
    }

    #[test]
    fn weight_raising_is_refused() {
        // d_π for π = (1 + x^2) ∂x∧∂y mixes shifts -1 and +1
        let ps = PoissonStructure::from_terms(&["x", "y"], &[(0, 1, "1 + x^2")]).unwrap();
        let pi = ps.bivector().clone();
        let err = WeightedComplex::lichnerowicz(ps.tangent(), &pi).betti(2).unwrap_err();
        assert_eq!(err, Error::WeightRaising(1));
    }

    #[test]
    fn non_square_zero_is_refused() {
        let t = tangent(&["x", "y"]).unwrap();
        let alpha = t.coframe(1).scale_poly(&t.parse_poly("x").unwrap());
        let conn = TopConnection::new(&t, alpha).unwrap();
        assert!(matches!(
            WeightedComplex::homology(&conn).betti(2),
            Err(Error::NotAComplex(_))
        ));
    }
}
