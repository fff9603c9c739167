//! Graded exterior algebra over a global frame.
//!
//! Sections of `∧^k A` and `∧^k A*` are stored as maps from basis blades to
//! polynomial coefficients. A blade is a bitmask over frame indices; its
//! canonical orientation is increasing index order, so `e_{i1}∧…∧e_{ik}`
//! with `i1 < … < ik`.
//!
//! Pairing convention: `⟨ε_I, e_J⟩ = det(⟨ε_{i_a}, e_{j_b}⟩)`, i.e. the
//! canonical blades are dual bases of each other. Contraction is defined by
//! `⟨ω, θ⌟V⟩ = ⟨θ∧ω, V⟩`.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, Rational, Vars};

/// Bitmask of frame indices (bit `i` = index `i`, zero based).
pub type Blade = u32;

/// Which bundle a graded element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// `∧^• A`, multisections.
    A,
    /// `∧^• A*`, forms.
    Dual,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::A => Side::Dual,
            Side::Dual => Side::A,
        }
    }
}

pub fn blade_degree(b: Blade) -> usize {
    b.count_ones() as usize
}

/// Zero-based indices of a blade, increasing.
pub fn blade_indices(b: Blade) -> Vec<usize> {
    (0..32).filter(|i| b & (1 << i) != 0).collect()
}

pub fn blade_from_indices(idx: &[usize]) -> Blade {
    idx.iter().fold(0, |acc, &i| acc | (1 << i))
}

/// Sign of reordering `e_a ∧ e_b` (both canonical, disjoint) into the
/// canonical order of `a | b`.
pub fn blade_sign(a: Blade, b: Blade) -> i64 {
    debug_assert_eq!(a & b, 0);
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        inversions += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Canonical product of two blades: `None` if they overlap.
pub fn blade_wedge(a: Blade, b: Blade) -> Option<(i64, Blade)> {
    if a & b != 0 {
        None
    } else {
        Some((blade_sign(a, b), a | b))
    }
}

/// All blades of degree `k` in rank `n`, in lexicographic order of their
/// index tuples.
pub fn blades(n: usize, k: usize) -> Vec<Blade> {
    fn rec(start: usize, n: usize, k: usize, cur: Blade, out: &mut Vec<Blade>) {
        if k == 0 {
            out.push(cur);
            return;
        }
        for i in start..n {
            if n - i < k {
                break;
            }
            rec(i + 1, n, k - 1, cur | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, 0, &mut out);
    }
    out
}

fn full_blade(n: usize) -> Blade {
    if n == 0 {
        0
    } else {
        (1u32 << n) - 1
    }
}

/// A homogeneous element of `Γ(∧^k A)` or `Γ(∧^k A*)`.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedElem {
    side: Side,
    rank: usize,
    degree: usize,
    vars: Vars,
    comps: BTreeMap<Blade, Poly>,
}

impl GradedElem {
    pub fn zero(side: Side, rank: usize, degree: usize, vars: &Vars) -> Self {
        assert!(rank <= 31, "rank too large");
        GradedElem { side, rank, degree, vars: vars.clone(), comps: BTreeMap::new() }
    }

    /// Degree-zero element carrying a function.
    pub fn function(side: Side, rank: usize, f: Poly) -> Self {
        let mut out = Self::zero(side, rank, 0, f.vars());
        out.add_component(0, f);
        out
    }

    /// The wedge of frame elements in the given (zero-based) order.
    pub fn basis(side: Side, rank: usize, indices: &[usize], vars: &Vars) -> Self {
        let mut out = Self::zero(side, rank, indices.len(), vars);
        let mut blade: Blade = 0;
        let mut sign = 1;
        for &i in indices {
            assert!(i < rank, "frame index out of range");
            match blade_wedge(blade, 1 << i) {
                Some((s, b)) => {
                    sign *= s;
                    blade = b;
                }
                None => return out,
            }
        }
        out.add_component(blade, Poly::from_int(vars, sign));
        out
    }

    pub fn blade(side: Side, rank: usize, blade: Blade, coeff: Poly) -> Self {
        let mut out = Self::zero(side, rank, blade_degree(blade), coeff.vars());
        out.add_component(blade, coeff);
        out
    }

    /// Build from `(indices, coefficient)` pairs in any index order.
    pub fn from_terms(
        side: Side,
        rank: usize,
        degree: usize,
        vars: &Vars,
        terms: impl IntoIterator<Item = (Vec<usize>, Poly)>,
    ) -> Result<Self> {
        let mut out = Self::zero(side, rank, degree, vars);
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(Error::DegreeMismatch(format!(
                    "index tuple {idx:?} in a degree-{degree} element"
                )));
            }
            if idx.iter().any(|&i| i >= rank) {
                return Err(Error::Malformed(format!("index tuple {idx:?} exceeds rank {rank}")));
            }
            let b = Self::basis(side, rank, &idx, vars);
            out = out.checked_add(&b.scale_poly(&c))?;
        }
        Ok(out)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (Blade, &Poly)> {
        self.comps.iter().map(|(b, p)| (*b, p))
    }

    pub fn component(&self, b: Blade) -> Poly {
        self.comps.get(&b).cloned().unwrap_or_else(|| Poly::zero(&self.vars))
    }

    /// Coefficient in degree zero (the element viewed as a function).
    pub fn as_function(&self) -> Poly {
        self.component(0)
    }

    /// Coefficient of the top blade `e_1∧…∧e_n`.
    pub fn top_coefficient(&self) -> Poly {
        self.component(full_blade(self.rank))
    }

    /// Reinterpret the same coefficients on the other side; used when the
    /// dual of one algebroid is the base bundle of another.
    pub fn with_side(&self, side: Side) -> Self {
        let mut out = self.clone();
        out.side = side;
        out
    }

    pub(crate) fn add_component(&mut self, b: Blade, c: Poly) {
        debug_assert_eq!(blade_degree(b), self.degree);
        if c.is_zero() {
            return;
        }
        let merged = match self.comps.remove(&b) {
            Some(old) => &old + &c,
            None => c,
        };
        if !merged.is_zero() {
            self.comps.insert(b, merged);
        }
    }

    fn same_shape(&self, other: &GradedElem, what: &str) -> Result<()> {
        if self.side != other.side {
            return Err(Error::SideMismatch(what.to_string()));
        }
        if self.rank != other.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: other.rank });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &GradedElem) -> Result<GradedElem> {
        self.same_shape(other, "addition")?;
        if self.degree != other.degree {
            if other.is_zero() {
                return Ok(self.clone());
            }
            if self.is_zero() {
                return Ok(other.clone());
            }
            return Err(Error::DegreeMismatch(format!(
                "adding degree {} to degree {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (b, c) in &other.comps {
            out.add_component(*b, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &GradedElem) -> Result<GradedElem> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> GradedElem {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> GradedElem {
        self.map_coeffs(|p| p.scale(c))
    }

    pub fn scale_int(&self, c: i64) -> GradedElem {
        self.scale(&crate::poly::int(c))
    }

    pub fn scale_poly(&self, f: &Poly) -> GradedElem {
        self.map_coeffs(|p| p * f)
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&Poly) -> Poly) -> GradedElem {
        let mut out = Self::zero(self.side, self.rank, self.degree, &self.vars);
        for (b, c) in &self.comps {
            out.add_component(*b, f(c));
        }
        out
    }

    /// Largest total degree among the coefficients.
    pub fn max_weight(&self) -> Option<u32> {
        self.comps.values().filter_map(|p| p.degree()).max()
    }

    /// `u ∧ v`; both on the same side.
    pub fn wedge(&self, other: &GradedElem) -> Result<GradedElem> {
        self.same_shape(other, "wedge of a multisection with a form")?;
        let mut out = Self::zero(self.side, self.rank, self.degree + other.degree, &self.vars);
        for (a, p) in &self.comps {
            for (b, q) in &other.comps {
                if let Some((s, ab)) = blade_wedge(*a, *b) {
                    out.add_component(ab, (p * q).scale(&crate::poly::int(s)));
                }
            }
        }
        Ok(out)
    }

    /// Full pairing `⟨θ, U⟩` of equal-degree elements on opposite sides.
    pub fn pairing(&self, other: &GradedElem) -> Result<Poly> {
        if self.side == other.side {
            return Err(Error::SideMismatch("pairing needs opposite sides".into()));
        }
        if self.rank != other.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: other.rank });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!(
                "pairing degree {} with degree {}",
                self.degree, other.degree
            )));
        }
        let mut out = Poly::zero(&self.vars);
        for (b, p) in &self.comps {
            if let Some(q) = other.comps.get(b) {
                out = &out + &(p * q);
            }
        }
        Ok(out)
    }

    /// `self ⌟ v`: the element of degree `|v| - |self|` on the side of `v`
    /// characterized by `⟨ω, self⌟v⟩ = ⟨self∧ω, v⟩`.
    pub fn contract(&self, v: &GradedElem) -> Result<GradedElem> {
        if self.side == v.side {
            return Err(Error::SideMismatch("contraction needs opposite sides".into()));
        }
        if self.rank != v.rank {
            return Err(Error::RankMismatch { expected: v.rank, found: self.rank });
        }
        if self.degree > v.degree {
            return Err(Error::DegreeMismatch(format!(
                "contracting degree {} into degree {}",
                self.degree, v.degree
            )));
        }
        Ok(self.contract_unchecked(v))
    }

    /// Contraction that yields zero when the degree overflows.
    pub(crate) fn contract_or_zero(&self, v: &GradedElem) -> GradedElem {
        if self.degree > v.degree {
            return GradedElem::zero(v.side, v.rank, 0, &v.vars);
        }
        self.contract(v).expect("contraction shapes")
    }

    fn contract_unchecked(&self, v: &GradedElem) -> GradedElem {
        let mut out = Self::zero(v.side, v.rank, v.degree - self.degree, &v.vars);
        for (l, p) in &self.comps {
            for (j, q) in &v.comps {
                if j & l == *l {
                    let k = j & !l;
                    let s = blade_sign(*l, k);
                    out.add_component(k, (p * q).scale(&crate::poly::int(s)));
                }
            }
        }
        out
    }

    /// Human readable form, e.g. `(x)*e1^e2 + (-1)*e3`.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.comps.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (b, c) in &self.comps {
            let label: Vec<String> = blade_indices(*b)
                .into_iter()
                .map(|i| names.get(i).cloned().unwrap_or_else(|| format!("?{i}")))
                .collect();
            if label.is_empty() {
                parts.push(format!("({c})"));
            } else {
                parts.push(format!("({c})*{}", label.join("^")));
            }
        }
        parts.join(" + ")
    }

    pub fn default_names(&self) -> Vec<String> {
        let prefix = match self.side {
            Side::A => "e",
            Side::Dual => "eps",
        };
        (1..=self.rank).map(|i| format!("{prefix}{i}")).collect()
    }
}

impl fmt::Debug for GradedElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[{}]{{{}}}", self.side, self.degree, self.display_with(&self.default_names()))
    }
}

impl fmt::Display for GradedElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&self.default_names()))
    }
}

/// A nowhere-vanishing top element `c · e_1∧…∧e_n` (or its dual).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Volume {
    coeff: Rational,
}

impl Volume {
    pub fn new(coeff: Rational) -> Result<Self> {
        if coeff.is_zero() {
            return Err(Error::ZeroVolume);
        }
        Ok(Volume { coeff })
    }

    pub fn reference() -> Self {
        Volume { coeff: Rational::one() }
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn element(&self, side: Side, rank: usize, vars: &Vars) -> GradedElem {
        GradedElem::blade(side, rank, full_blade(rank), Poly::constant(vars, self.coeff.clone()))
    }
}

/// `*ω = ω ⌟ Λ`, with `Λ` on the side opposite to `ω`.
pub fn star(omega: &GradedElem, vol: &Volume) -> GradedElem {
    let lambda = vol.element(omega.side().opposite(), omega.rank(), omega.vars());
    omega.contract(&lambda).expect("degree never exceeds rank")
}

/// Inverse of [`star`]: returns the form `ω` with `ω ⌟ Λ = u`.
pub fn star_inv(u: &GradedElem, vol: &Volume) -> GradedElem {
    let n = u.rank();
    let full = full_blade(n);
    let mut out = GradedElem::zero(u.side().opposite(), n, n - u.degree(), u.vars());
    let inv = vol.coeff().recip();
    for (k, c) in u.components() {
        let i = full & !k;
        let s = crate::poly::int(blade_sign(i, k));
        out.add_component(i, c.scale(&(&inv * &s)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn xy() -> Vars {
        Vars::new(&["x", "y"])
    }

    fn p(s: &str) -> Poly {
        Poly::parse(&xy(), s).unwrap()
    }

    fn e(idx: &[usize]) -> GradedElem {
        GradedElem::basis(Side::A, 2, idx, &xy())
    }

    fn eps(idx: &[usize]) -> GradedElem {
        GradedElem::basis(Side::Dual, 2, idx, &xy())
    }

    #[test]
    fn wedge_sign_rule() {
        assert_eq!(e(&[0]).wedge(&e(&[1])).unwrap(), e(&[0, 1]));
        assert_eq!(e(&[1]).wedge(&e(&[0])).unwrap(), e(&[0, 1]).neg());
        assert!(e(&[0]).wedge(&e(&[0])).unwrap().is_zero());
        let xe1 = e(&[0]).scale_poly(&p("x"));
        let ye2 = e(&[1]).scale_poly(&p("y"));
        assert_eq!(xe1.wedge(&ye2).unwrap(), e(&[0, 1]).scale_poly(&p("x*y")));
        assert!(matches!(e(&[0]).wedge(&eps(&[1])), Err(Error::SideMismatch(_))));
    }

    #[test]
    fn determinant_pairing() {
        assert_eq!(eps(&[0, 1]).pairing(&e(&[0, 1])).unwrap(), p("1"));
        assert_eq!(eps(&[1, 0]).pairing(&e(&[0, 1])).unwrap(), p("-1"));
        let y_vol = e(&[0, 1]).scale_poly(&p("y"));
        assert_eq!(eps(&[0, 1]).pairing(&y_vol).unwrap(), p("y"));
        assert!(eps(&[0]).pairing(&e(&[0, 1])).is_err());
        assert!(e(&[0]).pairing(&e(&[0])).is_err());
    }

    #[test]
    fn contraction_examples() {
        assert_eq!(eps(&[0]).contract(&e(&[0, 1])).unwrap(), e(&[1]));
        let f = GradedElem::function(Side::Dual, 2, p("x"));
        let v = e(&[1]).scale_poly(&p("y"));
        assert_eq!(f.contract(&v).unwrap(), v.scale_poly(&p("x")));
        let full = eps(&[0, 1]).contract(&e(&[0, 1])).unwrap();
        assert_eq!(full.as_function(), p("1"));
        assert!(eps(&[0, 1]).contract(&e(&[0])).is_err());
        assert!(e(&[0]).contract(&e(&[0, 1])).is_err());
    }

    #[test]
    fn star_examples() {
        let vol = Volume::reference();
        let one = GradedElem::function(Side::Dual, 2, p("1"));
        assert_eq!(star(&one, &vol), e(&[0, 1]));
        assert_eq!(star(&eps(&[0]), &vol), e(&[1]));
        assert_eq!(star(&eps(&[1]), &vol), e(&[0]).neg());
        assert_eq!(star(&eps(&[0, 1]), &vol).as_function(), p("1"));
        assert_eq!(Volume::new(rat(0, 1)), Err(Error::ZeroVolume));
    }

    #[test]
    fn blade_enumeration() {
        assert_eq!(blades(3, 2), vec![0b011, 0b101, 0b110]);
        assert_eq!(blades(2, 3), Vec::<Blade>::new());
        assert_eq!(blades(0, 0), vec![0]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        const N: usize = 4;

        fn vars() -> Vars {
            Vars::new(&["x", "y"])
        }

        fn arb_elem(side: Side) -> impl Strategy<Value = GradedElem> {
            (0..=N).prop_flat_map(move |k| arb_elem_deg(side, k))
        }

        fn arb_elem_deg(side: Side, k: usize) -> impl Strategy<Value = GradedElem> {
            let bs = blades(N, k);
            let len = bs.len();
            proptest::collection::vec((-3i64..4, 0u32..3, 0u32..2), len).prop_map(move |cs| {
                let v = vars();
                let mut out = GradedElem::zero(side, N, k, &v);
                for (b, (c, ex, ey)) in bs.iter().zip(cs) {
                    out.add_component(*b, Poly::monomial(&v, vec![ex, ey], crate::poly::int(c)));
                }
                out
            })
        }

        proptest! {
            #[test]
            fn wedge_is_associative(a in arb_elem(Side::A), b in arb_elem(Side::A), c in arb_elem(Side::A)) {
                let l = a.wedge(&b).unwrap().wedge(&c).unwrap();
                let r = a.wedge(&b.wedge(&c).unwrap()).unwrap();
                prop_assert!(l.checked_sub(&r).unwrap().is_zero());
            }

            #[test]
            fn wedge_is_graded_commutative(a in arb_elem(Side::Dual), b in arb_elem(Side::Dual)) {
                let s = if (a.degree() * b.degree()) % 2 == 0 { 1 } else { -1 };
                let l = a.wedge(&b).unwrap();
                let r = b.wedge(&a).unwrap().scale_int(s);
                prop_assert!(l.checked_sub(&r).unwrap().is_zero());
            }

            #[test]
            fn contraction_is_adjoint_to_wedge(
                (theta, v, omega) in (0..=N).prop_flat_map(|k| (0..=k).prop_flat_map(move |l| (
                    arb_elem_deg(Side::Dual, l),
                    arb_elem_deg(Side::A, k),
                    arb_elem_deg(Side::Dual, k - l),
                )))
            ) {
                let lhs = omega.pairing(&theta.contract(&v).unwrap()).unwrap();
                let rhs = theta.wedge(&omega).unwrap().pairing(&v).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn star_inverts(w in arb_elem(Side::Dual), c in 1i64..5, neg in any::<bool>()) {
                let vol = Volume::new(rat(if neg { -c } else { c }, 3)).unwrap();
                prop_assert_eq!(star_inv(&star(&w, &vol), &vol), w);
            }
        }
    }
}
