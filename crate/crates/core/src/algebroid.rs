//! Lie algebroids over a global frame: data, constructors and exact axiom
//! checks.
//!
//! An algebroid of rank `n` over `R^m` is stored through its anchor matrix
//! `a(e_i) = Σ_μ a_i^μ ∂_μ` and its structure functions
//! `[e_i, e_j] = Σ_k c^k_{ij} e_k`. Everything else (brackets of arbitrary
//! sections, the differential, the Schouten bracket) is derived from these.

use std::fmt;

use crate::calculus;
use crate::error::{Error, Result};
use crate::exterior::{blades, GradedElem, Side};
use crate::poly::{Poly, Rational, Vars};

/// One antisymmetric structure entry `c^k_{ij}` with `i < j` (zero based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: Poly,
}

#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebroid {
    vars: Vars,
    rank: usize,
    /// `anchor[i][mu]`
    anchor: Vec<Vec<Poly>>,
    /// `brackets[i][j][k] = c^k_{ij}`, antisymmetric in `(i, j)`
    brackets: Vec<Vec<Vec<Poly>>>,
    frame_names: Vec<String>,
}

impl fmt::Debug for LieAlgebroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LieAlgebroid(rank {}, base {:?})", self.rank, self.vars)?;
        for i in 0..self.rank {
            let a: Vec<String> = self.anchor[i].iter().map(|p| p.to_string()).collect();
            writeln!(f, "  a({}) = [{}]", self.frame_names[i], a.join(", "))?;
        }
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                let b = self.bracket_frame(i, j);
                if !b.is_zero() {
                    writeln!(
                        f,
                        "  [{}, {}] = {}",
                        self.frame_names[i],
                        self.frame_names[j],
                        b.display_with(&self.frame_names)
                    )?;
                }
            }
        }
        Ok(())
    }
}

/// Which identity failed during validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomWitness {
    /// `a([e_i,e_j]) ≠ [a(e_i), a(e_j)]` in coordinate `mu`.
    Anchor { i: usize, j: usize, mu: usize, residual: Poly },
    /// Jacobiator of `(e_i, e_j, e_k)` is nonzero.
    Jacobi { i: usize, j: usize, k: usize, residual: GradedElem },
}

impl AxiomWitness {
    pub fn describe(&self, names: &[String]) -> String {
        match self {
            AxiomWitness::Anchor { i, j, mu, residual } => format!(
                "anchor morphism fails on ({}, {}) in coordinate {}: residual {}",
                names[*i], names[*j], mu + 1, residual
            ),
            AxiomWitness::Jacobi { i, j, k, residual } => format!(
                "Jacobi fails on ({}, {}, {}): residual {}",
                names[*i],
                names[*j],
                names[*k],
                residual.display_with(names)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub witnesses: Vec<AxiomWitness>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

impl LieAlgebroid {
    /// Build and validate.
    pub fn new(
        vars: &Vars,
        rank: usize,
        anchor: Vec<Vec<Poly>>,
        structure: Vec<StructureEntry>,
    ) -> Result<Self> {
        let a = Self::new_unchecked(vars, rank, anchor, structure)?;
        a.ensure_valid()?;
        Ok(a)
    }

    /// Build without checking the algebroid axioms. Shapes and index order
    /// are still checked.
    pub fn new_unchecked(
        vars: &Vars,
        rank: usize,
        anchor: Vec<Vec<Poly>>,
        structure: Vec<StructureEntry>,
    ) -> Result<Self> {
        if rank == 0 || rank > 31 {
            return Err(Error::Malformed(format!("rank {rank} must be in 1..=31")));
        }
        if anchor.len() != rank || anchor.iter().any(|row| row.len() != vars.len()) {
            return Err(Error::Malformed(format!(
                "anchor must be a {rank}x{} matrix",
                vars.len()
            )));
        }
        for row in &anchor {
            for p in row {
                if p.vars() != vars {
                    return Err(Error::VariableMismatch {
                        left: vars.names().to_vec(),
                        right: p.vars().names().to_vec(),
                    });
                }
            }
        }
        let zero = Poly::zero(vars);
        let mut brackets = vec![vec![vec![zero.clone(); rank]; rank]; rank];
        for StructureEntry { i, j, k, c } in structure {
            if i >= j {
                return Err(Error::Malformed(format!(
                    "structure indices must satisfy i<j (got i={}, j={})",
                    i + 1,
                    j + 1
                )));
            }
            if j >= rank || k >= rank {
                return Err(Error::Malformed(format!(
                    "structure index out of range for rank {rank}"
                )));
            }
            brackets[i][j][k] = &brackets[i][j][k] + &c;
            brackets[j][i][k] = -&brackets[i][j][k];
        }
        Ok(LieAlgebroid {
            vars: vars.clone(),
            rank,
            anchor,
            brackets,
            frame_names: (1..=rank).map(|i| format!("e{i}")).collect(),
        })
    }

    pub fn with_frame_names<S: AsRef<str>>(mut self, names: &[S]) -> Self {
        assert_eq!(names.len(), self.rank);
        self.frame_names = names.iter().map(|s| s.as_ref().to_string()).collect();
        self
    }

    pub fn frame_names(&self) -> &[String] {
        &self.frame_names
    }

    /// Names of the dual frame: `dx` for `d_x`, otherwise `name*`.
    pub fn coframe_names(&self) -> Vec<String> {
        self.frame_names
            .iter()
            .map(|n| match n.strip_prefix("d_") {
                Some(v) => format!("d{v}"),
                None => format!("{n}*"),
            })
            .collect()
    }

    /// Render an element with the frame or coframe names.
    pub fn show(&self, u: &GradedElem) -> String {
        match u.side() {
            Side::A => u.display_with(&self.frame_names),
            Side::Dual => u.display_with(&self.coframe_names()),
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn base_dim(&self) -> usize {
        self.vars.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn anchor_entry(&self, i: usize, mu: usize) -> &Poly {
        &self.anchor[i][mu]
    }

    pub fn anchor_matrix(&self) -> &[Vec<Poly>] {
        &self.anchor
    }

    pub fn structure(&self, i: usize, j: usize, k: usize) -> &Poly {
        &self.brackets[i][j][k]
    }

    /// All nonzero `c^k_{ij}` with `i < j`.
    pub fn structure_entries(&self) -> Vec<StructureEntry> {
        let mut out = Vec::new();
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                for k in 0..self.rank {
                    let c = &self.brackets[i][j][k];
                    if !c.is_zero() {
                        out.push(StructureEntry { i, j, k, c: c.clone() });
                    }
                }
            }
        }
        out
    }

    pub fn zero(&self, side: Side, degree: usize) -> GradedElem {
        GradedElem::zero(side, self.rank, degree, &self.vars)
    }

    pub fn function(&self, side: Side, f: Poly) -> GradedElem {
        GradedElem::function(side, self.rank, f)
    }

    /// Frame section `e_i`.
    pub fn frame(&self, i: usize) -> GradedElem {
        GradedElem::basis(Side::A, self.rank, &[i], &self.vars)
    }

    /// Dual frame element `ε_i`.
    pub fn coframe(&self, i: usize) -> GradedElem {
        GradedElem::basis(Side::Dual, self.rank, &[i], &self.vars)
    }

    pub fn parse_poly(&self, s: &str) -> Result<Poly> {
        Poly::parse(&self.vars, s)
    }

    /// `a(e_i) f`.
    pub fn anchor_frame_apply(&self, i: usize, f: &Poly) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (mu, a) in self.anchor[i].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            out = &out + &(a * &f.partial(mu).expect("index in range"));
        }
        out
    }

    /// `a(X) f = Σ_{i,μ} X^i a_i^μ ∂_μ f`.
    pub fn anchor_apply(&self, x: &GradedElem, f: &Poly) -> Result<Poly> {
        self.expect_shape(x, Side::A, 1)?;
        let mut out = Poly::zero(&self.vars);
        for (b, xi) in x.components() {
            let i = b.trailing_zeros() as usize;
            out = &out + &(xi * &self.anchor_frame_apply(i, f));
        }
        Ok(out)
    }

    /// Anchor of a section as a coefficient vector on `∂_μ`.
    pub fn anchor_vector(&self, x: &GradedElem) -> Result<Vec<Poly>> {
        self.expect_shape(x, Side::A, 1)?;
        let mut out = vec![Poly::zero(&self.vars); self.base_dim()];
        for (b, xi) in x.components() {
            let i = b.trailing_zeros() as usize;
            for (mu, slot) in out.iter_mut().enumerate() {
                *slot = &*slot + &(xi * &self.anchor[i][mu]);
            }
        }
        Ok(out)
    }

    pub(crate) fn expect_shape(&self, x: &GradedElem, side: Side, degree: usize) -> Result<()> {
        if x.side() != side {
            return Err(Error::SideMismatch(format!("expected a {side:?}-side element")));
        }
        if x.rank() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: x.rank() });
        }
        if x.degree() != degree {
            return Err(Error::DegreeMismatch(format!(
                "expected degree {degree}, got {}",
                x.degree()
            )));
        }
        if x.vars() != &self.vars {
            return Err(Error::VariableMismatch {
                left: self.vars.names().to_vec(),
                right: x.vars().names().to_vec(),
            });
        }
        Ok(())
    }

    pub(crate) fn expect_side(&self, x: &GradedElem, side: Side) -> Result<()> {
        self.expect_shape(x, side, x.degree())
    }

    /// `[e_i, e_j]`.
    pub fn bracket_frame(&self, i: usize, j: usize) -> GradedElem {
        let mut out = self.zero(Side::A, 1);
        for k in 0..self.rank {
            out.add_component(1 << k, self.brackets[i][j][k].clone());
        }
        out
    }

    /// Bracket of two sections, extended from the frame by the Leibniz rule
    /// and antisymmetry.
    pub fn bracket_sections(&self, x: &GradedElem, y: &GradedElem) -> Result<GradedElem> {
        self.expect_shape(x, Side::A, 1)?;
        self.expect_shape(y, Side::A, 1)?;
        let mut out = self.zero(Side::A, 1);
        for (bi, xi) in x.components() {
            for (bj, yj) in y.components() {
                let (i, j) = (bi.trailing_zeros() as usize, bj.trailing_zeros() as usize);
                let xy = xi * yj;
                for k in 0..self.rank {
                    let c = &self.brackets[i][j][k];
                    if !c.is_zero() {
                        out.add_component(1 << k, &xy * c);
                    }
                }
            }
        }
        for (bj, yj) in y.components() {
            out.add_component(bj, self.anchor_apply(x, yj)?);
        }
        for (bi, xi) in x.components() {
            out.add_component(bi, -self.anchor_apply(y, xi)?);
        }
        Ok(out)
    }

    /// Check the anchor morphism property and the Jacobi identity on the
    /// frame, as exact polynomial identities.
    pub fn validate(&self) -> ValidationReport {
        let mut witnesses = Vec::new();
        let n = self.rank;
        for i in 0..n {
            for j in i + 1..n {
                for mu in 0..self.base_dim() {
                    let mut lhs = Poly::zero(&self.vars);
                    for k in 0..n {
                        lhs = &lhs + &(&self.brackets[i][j][k] * &self.anchor[k][mu]);
                    }
                    let rhs = &self.vector_field_apply(&self.anchor[i], &self.anchor[j][mu])
                        - &self.vector_field_apply(&self.anchor[j], &self.anchor[i][mu]);
                    let residual = &lhs - &rhs;
                    if !residual.is_zero() {
                        witnesses.push(AxiomWitness::Anchor { i, j, mu, residual });
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let residual = self.jacobiator(i, j, k);
                    if !residual.is_zero() {
                        witnesses.push(AxiomWitness::Jacobi { i, j, k, residual });
                    }
                }
            }
        }
        ValidationReport { witnesses }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        match report.witnesses.first() {
            None => Ok(()),
            Some(w) => Err(Error::Validation(w.describe(&self.frame_names))),
        }
    }

    fn vector_field_apply(&self, v: &[Poly], f: &Poly) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (mu, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &(c * &f.partial(mu).expect("index in range"));
            }
        }
        out
    }

    /// `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]`.
    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> GradedElem {
        let (ei, ej, ek) = (self.frame(i), self.frame(j), self.frame(k));
        let b = |x: &GradedElem, y: &GradedElem| self.bracket_sections(x, y).expect("degree 1");
        let t1 = b(&b(&ei, &ej), &ek);
        let t2 = b(&b(&ej, &ek), &ei);
        let t3 = b(&b(&ek, &ei), &ej);
        t1.checked_add(&t2).unwrap().checked_add(&t3).unwrap()
    }

    /// Modular character `X ↦ tr(ad X)` of a Lie algebra (`m = 0`); for
    /// algebroids this is only the constant-frame part of the trace.
    pub fn trace_of_ad(&self) -> GradedElem {
        let mut out = self.zero(Side::Dual, 1);
        for i in 0..self.rank {
            let mut t = Poly::zero(&self.vars);
            for k in 0..self.rank {
                t = &t + &self.brackets[i][k][k];
            }
            out.add_component(1 << i, t);
        }
        out
    }

    /// True when every anchor entry and structure function is homogeneous
    /// of the given polynomial degree (or zero).
    pub fn is_weight_homogeneous(&self, anchor_deg: u32, structure_deg: u32) -> bool {
        let hom = |p: &Poly, d: u32| p.is_zero() || (p.degree() == Some(d) && p.low_degree() == Some(d));
        self.anchor.iter().flatten().all(|p| hom(p, anchor_deg))
            && self.brackets.iter().flatten().flatten().all(|p| hom(p, structure_deg))
    }
}

/// Standard constructors.
pub mod standard {
    use super::*;
    use crate::poly::int;

    fn consts(rank: usize, entries: &[(usize, usize, usize, i64)]) -> Result<LieAlgebroid> {
        let pt = Vars::empty();
        lie_algebra(
            rank,
            entries
                .iter()
                .map(|&(i, j, k, c)| StructureEntry { i, j, k, c: Poly::constant(&pt, int(c)) })
                .collect(),
        )
    }

    /// Tangent algebroid of `R^m` with coordinate frame `∂_μ`.
    pub fn tangent<S: AsRef<str>>(names: &[S]) -> Result<LieAlgebroid> {
        let vars = Vars::new(names);
        let m = vars.len();
        let anchor = (0..m)
            .map(|i| {
                (0..m)
                    .map(|mu| if i == mu { Poly::one(&vars) } else { Poly::zero(&vars) })
                    .collect()
            })
            .collect();
        let frame: Vec<String> = vars.names().iter().map(|v| format!("d_{v}")).collect();
        Ok(LieAlgebroid::new(&vars, m, anchor, Vec::new())?.with_frame_names(&frame))
    }

    /// Lie algebra (base = point) from structure constants `c^k_{ij}`, `i<j`.
    pub fn lie_algebra(rank: usize, structure: Vec<StructureEntry>) -> Result<LieAlgebroid> {
        let pt = Vars::empty();
        LieAlgebroid::new(&pt, rank, vec![Vec::new(); rank], structure)
    }

    pub fn abelian(rank: usize) -> Result<LieAlgebroid> {
        consts(rank, &[])
    }

    /// `[e1, e2] = e2`.
    pub fn aff1() -> LieAlgebroid {
        consts(2, &[(0, 1, 1, 1)]).expect("aff(1)")
    }

    /// Basis `(h, e, f)` with `[h,e]=2e`, `[h,f]=-2f`, `[e,f]=h`.
    pub fn sl2() -> LieAlgebroid {
        consts(3, &[(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)])
            .expect("sl(2)")
            .with_frame_names(&["h", "e", "f"])
    }

    /// `[e1, e2] = e3`.
    pub fn heisenberg3() -> LieAlgebroid {
        consts(3, &[(0, 1, 2, 1)]).expect("heisenberg")
    }

    /// Lie algebra structure constants without validation, e.g. to build a
    /// deliberately broken example.
    pub fn lie_algebra_unchecked(
        rank: usize,
        entries: &[(usize, usize, usize, Rational)],
    ) -> Result<LieAlgebroid> {
        let pt = Vars::empty();
        LieAlgebroid::new_unchecked(
            &pt,
            rank,
            vec![Vec::new(); rank],
            entries
                .iter()
                .map(|(i, j, k, c)| StructureEntry {
                    i: *i,
                    j: *j,
                    k: *k,
                    c: Poly::constant(&pt, c.clone()),
                })
                .collect(),
        )
    }
}

/// A bivector `π` on `R^m` with `[π, π] = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoissonStructure {
    tangent: LieAlgebroid,
    pi: GradedElem,
}

impl PoissonStructure {
    pub fn new(tangent: &LieAlgebroid, pi: GradedElem) -> Result<Self> {
        let ps = Self::new_unchecked(tangent, pi)?;
        let sq = calculus::schouten(&ps.tangent, &ps.pi, &ps.pi)?;
        if !sq.is_zero() {
            return Err(Error::NotPoisson(sq.display_with(ps.tangent.frame_names())));
        }
        Ok(ps)
    }

    /// Skip the `[π,π] = 0` check (used to exhibit failures).
    pub fn new_unchecked(tangent: &LieAlgebroid, pi: GradedElem) -> Result<Self> {
        tangent.expect_shape(&pi, Side::A, 2)?;
        Ok(PoissonStructure { tangent: tangent.clone(), pi })
    }

    /// `π = Σ c ∂_i∧∂_j` over the coordinates `names`.
    pub fn from_terms<S: AsRef<str>>(names: &[S], terms: &[(usize, usize, &str)]) -> Result<Self> {
        let t = standard::tangent(names)?;
        let pi = bivector(&t, terms)?;
        Self::new(&t, pi)
    }

    pub fn tangent(&self) -> &LieAlgebroid {
        &self.tangent
    }

    pub fn bivector(&self) -> &GradedElem {
        &self.pi
    }

    pub fn vars(&self) -> &Vars {
        self.tangent.vars()
    }

    pub fn dim(&self) -> usize {
        self.tangent.rank()
    }

    /// `π(dx_μ, dx_ν)`.
    pub fn entry(&self, mu: usize, nu: usize) -> Poly {
        pi_entry(&self.pi, mu, nu)
    }
}

/// Build `Σ c (e_i ∧ e_j)` from zero-based index pairs.
pub fn bivector(a: &LieAlgebroid, terms: &[(usize, usize, &str)]) -> Result<GradedElem> {
    let mut pi = a.zero(Side::A, 2);
    for &(i, j, c) in terms {
        let coeff = a.parse_poly(c)?;
        let b = GradedElem::basis(Side::A, a.rank(), &[i, j], a.vars()).scale_poly(&coeff);
        pi = pi.checked_add(&b)?;
    }
    Ok(pi)
}

/// `π(ε_i, ε_j) = ⟨ε_i∧ε_j, π⟩`.
pub fn pi_entry(pi: &GradedElem, i: usize, j: usize) -> Poly {
    let form = GradedElem::basis(Side::Dual, pi.rank(), &[i, j], pi.vars());
    if form.is_zero() {
        return Poly::zero(pi.vars());
    }
    form.pairing(pi).expect("degree two pairing")
}

/// Cotangent algebroid `T*P` of a Poisson structure, frame `dx_μ`:
/// anchor `π#(dx_μ) = Σ_ν π^{μν} ∂_ν` and `[dx_μ, dx_ν] = d π^{μν}`.
pub fn cotangent_algebroid(ps: &PoissonStructure) -> Result<LieAlgebroid> {
    let a = cotangent_unchecked(ps)?;
    a.ensure_valid()?;
    Ok(a)
}

/// Same formulas without requiring `[π,π] = 0` or validating the result.
pub fn cotangent_unchecked(ps: &PoissonStructure) -> Result<LieAlgebroid> {
    let m = ps.dim();
    let vars = ps.vars();
    let anchor = (0..m).map(|mu| (0..m).map(|nu| ps.entry(mu, nu)).collect()).collect();
    let mut structure = Vec::new();
    for mu in 0..m {
        for nu in mu + 1..m {
            let e = ps.entry(mu, nu);
            for k in 0..m {
                let c = e.partial(k)?;
                if !c.is_zero() {
                    structure.push(StructureEntry { i: mu, j: nu, k, c });
                }
            }
        }
    }
    let names: Vec<String> = vars.names().iter().map(|v| format!("d{v}")).collect();
    Ok(LieAlgebroid::new_unchecked(vars, m, anchor, structure)?.with_frame_names(&names))
}

/// Values of a differential on generators: `d x_μ` (1-forms) and `d ε_k`
/// (2-forms).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialData {
    pub vars: Vars,
    pub rank: usize,
    pub d_coords: Vec<GradedElem>,
    pub d_coframe: Vec<GradedElem>,
}

impl DifferentialData {
    /// Read off the generator values of an algebroid's differential.
    pub fn of(a: &LieAlgebroid) -> Result<Self> {
        let d_coords = (0..a.base_dim())
            .map(|mu| {
                let x = Poly::var(a.vars(), mu)?;
                calculus::differential(a, &a.function(Side::Dual, x))
            })
            .collect::<Result<Vec<_>>>()?;
        let d_coframe = (0..a.rank())
            .map(|k| calculus::differential(a, &a.coframe(k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(DifferentialData { vars: a.vars().clone(), rank: a.rank(), d_coords, d_coframe })
    }

    /// `d f = Σ_μ ∂_μ f · d x_μ`.
    pub fn d_function(&self, f: &Poly) -> GradedElem {
        let mut out = GradedElem::zero(Side::Dual, self.rank, 1, &self.vars);
        for (mu, dx) in self.d_coords.iter().enumerate() {
            let df = f.partial(mu).expect("index in range");
            if !df.is_zero() {
                out = out.checked_add(&dx.scale_poly(&df)).expect("same shape");
            }
        }
        out
    }

    /// Extend to 1-forms by the derivation rule `d(f ε_k) = df∧ε_k + f dε_k`.
    pub fn d_one_form(&self, theta: &GradedElem) -> GradedElem {
        let mut out = GradedElem::zero(Side::Dual, self.rank, 2, &self.vars);
        for (b, f) in theta.components() {
            let k = b.trailing_zeros() as usize;
            let eps = GradedElem::basis(Side::Dual, self.rank, &[k], &self.vars);
            let t = self.d_function(f).wedge(&eps).expect("same side");
            out = out.checked_add(&t).unwrap();
            out = out.checked_add(&self.d_coframe[k].scale_poly(f)).unwrap();
        }
        out
    }
}

/// Reconstruct the algebroid whose differential has the given values on
/// generators: `a(e_i) x_μ = ⟨d x_μ, e_i⟩` and
/// `⟨[e_i,e_j], ε_k⟩ = -(dε_k)(e_i, e_j)`.
pub fn algebroid_from_differential(data: &DifferentialData) -> Result<LieAlgebroid> {
    let (n, m) = (data.rank, data.vars.len());
    if data.d_coords.len() != m || data.d_coframe.len() != n {
        return Err(Error::Malformed("differential data has the wrong number of generators".into()));
    }
    for dx in &data.d_coords {
        if dx.side() != Side::Dual || dx.degree() != 1 || dx.rank() != n {
            return Err(Error::Malformed("d x_mu must be a 1-form".into()));
        }
    }
    for de in &data.d_coframe {
        if de.side() != Side::Dual || de.degree() != 2 || de.rank() != n {
            return Err(Error::Malformed("d eps_k must be a 2-form".into()));
        }
    }
    for (mu, dx) in data.d_coords.iter().enumerate() {
        let dd = data.d_one_form(dx);
        if !dd.is_zero() {
            return Err(Error::DifferentialNotClosed(data.vars.names()[mu].clone()));
        }
    }
    let anchor = (0..n)
        .map(|i| (0..m).map(|mu| data.d_coords[mu].component(1 << i)).collect())
        .collect();
    let mut structure = Vec::new();
    for b in blades(n, 2) {
        let i = b.trailing_zeros() as usize;
        let j = 31 - b.leading_zeros() as usize;
        for k in 0..n {
            let c = -data.d_coframe[k].component(b);
            if !c.is_zero() {
                structure.push(StructureEntry { i, j, k, c });
            }
        }
    }
    LieAlgebroid::new(&data.vars, n, anchor, structure)
}

/// The algebroid on `A*` induced by a triangular r-matrix `π ∈ Γ(∧²A)`:
/// anchor `a∘π#` and
/// `[ξ, η] = -d π(ξ,η) + L_{π#ξ} η - L_{π#η} ξ` with `d` the differential of `A`.
pub fn triangular_dual_algebroid(a: &LieAlgebroid, pi: &GradedElem) -> Result<LieAlgebroid> {
    a.expect_shape(pi, Side::A, 2)?;
    let sq = calculus::schouten(a, pi, pi)?;
    if !sq.is_zero() {
        return Err(Error::NotPoisson(sq.display_with(a.frame_names())));
    }
    let dual = triangular_dual_unchecked(a, pi)?;
    dual.ensure_valid()?;
    Ok(dual)
}

pub fn triangular_dual_unchecked(a: &LieAlgebroid, pi: &GradedElem) -> Result<LieAlgebroid> {
    let n = a.rank();
    let sharp: Vec<GradedElem> = (0..n).map(|i| pi_sharp(a, pi, &a.coframe(i))).collect();
    let anchor = sharp
        .iter()
        .map(|x| a.anchor_vector(x))
        .collect::<Result<Vec<_>>>()?;
    let mut structure = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (xi, xj) = (a.coframe(i), a.coframe(j));
            let pij = a.function(Side::Dual, pi_entry(pi, i, j));
            let bracket = calculus::differential(a, &pij)?
                .neg()
                .checked_add(&calculus::form_lie_derivative(a, &sharp[i], &xj)?)?
                .checked_sub(&calculus::form_lie_derivative(a, &sharp[j], &xi)?)?;
            for k in 0..n {
                let c = bracket.component(1 << k);
                if !c.is_zero() {
                    structure.push(StructureEntry { i, j, k, c });
                }
            }
        }
    }
    let names: Vec<String> = a.frame_names().iter().map(|s| format!("{s}*")).collect();
    Ok(LieAlgebroid::new_unchecked(a.vars(), n, anchor, structure)?.with_frame_names(&names))
}

/// `π#(ξ) = Σ_j π(ξ, ε_j) e_j`.
pub fn pi_sharp(a: &LieAlgebroid, pi: &GradedElem, xi: &GradedElem) -> GradedElem {
    let mut out = a.zero(Side::A, 1);
    for j in 0..a.rank() {
        let form = xi.wedge(&a.coframe(j)).expect("forms");
        let v = form.pairing(pi).expect("degree two");
        out.add_component(1 << j, v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;
    use crate::poly::int;

    #[test]
    fn tangent_plane_has_identity_anchor() {
        let t = tangent(&["x", "y"]).unwrap();
        assert_eq!(t.rank(), 2);
        for i in 0..2 {
            for mu in 0..2 {
                let want = if i == mu { 1 } else { 0 };
                assert_eq!(t.anchor_entry(i, mu).constant_value(), Some(int(want)));
            }
        }
        assert!(t.structure_entries().is_empty());
        assert!(t.validate().passed());
    }

    #[test]
    fn standard_lie_algebras_validate() {
        assert!(aff1().validate().passed());
        assert!(sl2().validate().passed());
        assert!(heisenberg3().validate().passed());
        assert!(abelian(3).unwrap().validate().passed());
    }

    #[test]
    fn rescaled_ef_bracket_is_still_sl2() {
        // [e,f] = 2h is isomorphic to sl(2) (rescale f), so Jacobi holds.
        let a = lie_algebra_unchecked(
            3,
            &[(0, 1, 1, int(2)), (0, 2, 2, int(-2)), (1, 2, 0, int(2))],
        )
        .unwrap();
        assert!(a.validate().passed());
    }

    #[test]
    fn perturbed_sl2_fails_jacobi() {
        let a = lie_algebra_unchecked(
            3,
            &[(0, 1, 1, int(3)), (0, 2, 2, int(-2)), (1, 2, 0, int(1))],
        )
        .unwrap();
        let report = a.validate();
        assert!(!report.passed());
        match &report.witnesses[0] {
            AxiomWitness::Jacobi { i: 0, j: 1, k: 2, residual } => {
                // [[h,e],f] + [[e,f],h] + [[f,h],e] = 3h - 2h = h
                assert_eq!(residual, &a.frame(0));
            }
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn anchor_application() {
        let t = tangent(&["x", "y"]).unwrap();
        let f = t.parse_poly("x^2*y").unwrap();
        assert_eq!(t.anchor_apply(&t.frame(0), &f).unwrap(), t.parse_poly("2*x*y").unwrap());
        let g = aff1();
        let c = Poly::from_int(g.vars(), 5);
        assert!(g.anchor_apply(&g.frame(0), &c).unwrap().is_zero());
        let ps = PoissonStructure::from_terms(&["x", "y"], &[(0, 1, "y")]).unwrap();
        let ct = cotangent_algebroid(&ps).unwrap();
        let y = ct.parse_poly("y").unwrap();
        assert_eq!(ct.anchor_apply(&ct.frame(0), &y).unwrap(), y);
        assert!(t.anchor_apply(&t.coframe(0), &f).is_err());
    }

    #[test]
    fn section_brackets() {
        let t = tangent(&["x", "y"]).unwrap();
        let x = t.parse_poly("x").unwrap();
        let b = t.bracket_sections(&t.frame(0), &t.frame(1).scale_poly(&x)).unwrap();
        assert_eq!(b, t.frame(1));
        let g = aff1();
        assert_eq!(g.bracket_sections(&g.frame(0), &g.frame(1)).unwrap(), g.frame(1));
        let v = t.frame(0).scale_poly(&t.parse_poly("x*y").unwrap());
        assert!(t.bracket_sections(&v, &v).unwrap().is_zero());
    }

    #[test]
    fn structure_index_order_is_enforced() {
        let pt = Vars::empty();
        let err = LieAlgebroid::new(
            &pt,
            2,
            vec![vec![]; 2],
            vec![StructureEntry { i: 1, j: 0, k: 1, c: Poly::one(&pt) }],
        )
        .unwrap_err();
        assert!(err.to_string().contains("i<j"));
    }

    #[test]
    fn cotangent_examples() {
        let sym = PoissonStructure::from_terms(&["x", "y"], &[(0, 1, "1")]).unwrap();
        let ct = cotangent_algebroid(&sym).unwrap();
        assert!(ct.bracket_frame(0, 1).is_zero());
        let vars = sym.vars();
        assert_eq!(ct.anchor_matrix()[0], vec![Poly::zero(vars), Poly::one(vars)]);
        assert_eq!(ct.anchor_matrix()[1], vec![Poly::from_int(vars, -1), Poly::zero(vars)]);

        let lin = PoissonStructure::from_terms(&["x", "y"], &[(0, 1, "y")]).unwrap();
        let ct = cotangent_algebroid(&lin).unwrap();
        assert_eq!(ct.bracket_frame(0, 1), ct.frame(1));

        let zero = PoissonStructure::from_terms(&["x", "y"], &[]).unwrap();
        let ct = cotangent_algebroid(&zero).unwrap();
        assert!(ct.structure_entries().is_empty());
        assert!(ct.anchor_matrix().iter().flatten().all(Poly::is_zero));
    }

    #[test]
    fn non_poisson_bivector_is_rejected() {
        let r = PoissonStructure::from_terms(&["x", "y", "z"], &[(0, 1, "1"), (1, 2, "y")]);
        assert!(matches!(r, Err(Error::NotPoisson(_))));
    }

    #[test]
    fn decomposable_commuting_bivector_is_poisson() {
        // ∂x∧∂y + x ∂y∧∂z = (∂x - x∂z)∧∂y and the two factors commute.
        let r = PoissonStructure::from_terms(&["x", "y", "z"], &[(0, 1, "1"), (1, 2, "x")]);
        assert!(r.is_ok());
    }

    #[test]
    fn recover_from_differential() {
        let t1 = tangent(&["x"]).unwrap();
        let back = algebroid_from_differential(&DifferentialData::of(&t1).unwrap()).unwrap();
        assert_eq!(back.anchor_matrix(), t1.anchor_matrix());
        assert!(back.structure_entries().is_empty());

        // Chevalley–Eilenberg d of aff(1): d ε1 = 0, d ε2 = -ε1∧ε2
        let pt = Vars::empty();
        let data = DifferentialData {
            vars: pt.clone(),
            rank: 2,
            d_coords: vec![],
            d_coframe: vec![
                GradedElem::zero(Side::Dual, 2, 2, &pt),
                GradedElem::basis(Side::Dual, 2, &[0, 1], &pt).neg(),
            ],
        };
        let g = algebroid_from_differential(&data).unwrap();
        assert_eq!(g.bracket_frame(0, 1), g.frame(1));

        let zero = DifferentialData {
            vars: pt.clone(),
            rank: 3,
            d_coords: vec![],
            d_coframe: vec![GradedElem::zero(Side::Dual, 3, 2, &pt); 3],
        };
        assert!(algebroid_from_differential(&zero).unwrap().structure_entries().is_empty());
    }

    #[test]
    fn non_closed_differential_is_rejected() {
        // d x = y ε1 on one coordinate pair, with d ε1 = 0: d(dx) = dy∧ε1 ≠ 0
        let vars = Vars::new(&["x", "y"]);
        let y = Poly::parse(&vars, "y").unwrap();
        let e1 = GradedElem::basis(Side::Dual, 2, &[0], &vars);
        let e2 = GradedElem::basis(Side::Dual, 2, &[1], &vars);
        let data = DifferentialData {
            vars: vars.clone(),
            rank: 2,
            d_coords: vec![e1.scale_poly(&y), e2.clone()],
            d_coframe: vec![GradedElem::zero(Side::Dual, 2, 2, &vars); 2],
        };
        assert!(matches!(
            algebroid_from_differential(&data),
            Err(Error::DifferentialNotClosed(_))
        ));
    }

    #[test]
    fn triangular_duals() {
        let t = tangent(&["x", "y"]).unwrap();
        let pi = bivector(&t, &[(0, 1, "1")]).unwrap();
        let dual = triangular_dual_algebroid(&t, &pi).unwrap();
        let ct = cotangent_algebroid(&PoissonStructure::new(&t, pi).unwrap()).unwrap();
        assert_eq!(dual.anchor_matrix(), ct.anchor_matrix());
        assert_eq!(dual.structure_entries(), ct.structure_entries());

        let ab = abelian(3).unwrap();
        let pi = bivector(&ab, &[(0, 1, "2"), (1, 2, "1")]).unwrap();
        let d = triangular_dual_algebroid(&ab, &pi).unwrap();
        assert!(d.structure_entries().is_empty());

        let s = sl2();
        let pi = bivector(&s, &[(1, 0, "1")]).unwrap(); // e∧h
        let d = triangular_dual_algebroid(&s, &pi).unwrap();
        assert!(d.validate().passed());
        assert!(!d.structure_entries().is_empty());
    }
}
