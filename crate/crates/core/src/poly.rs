//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! These stand in for the smooth functions on the base manifold. Every
//! identity in the crate reduces to equality of such polynomials, so the
//! representation is kept canonical: no zero coefficients are ever stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Exponent vector of a monomial, one entry per base variable.
pub type Monomial = Vec<u32>;

/// Build a rational from a pair of machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Ordered list of base coordinate names shared by polynomials of one ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Vars(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    /// The ring of constants (base = point).
    pub fn empty() -> Self {
        Vars(Arc::from(Vec::<String>::new()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    fn same(&self, other: &Vars) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// A polynomial over the rationals in the variables of a [`Vars`] ring.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(vars: &Vars) -> Self {
        Poly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c)
    }

    pub fn from_int(vars: &Vars, c: i64) -> Self {
        Self::constant(vars, int(c))
    }

    /// The coordinate function `x_index`.
    pub fn var(vars: &Vars, index: usize) -> Result<Self> {
        if index >= vars.len() {
            return Err(Error::VariableIndex { index, len: vars.len() });
        }
        let mut exps = vec![0; vars.len()];
        exps[index] = 1;
        Ok(Self::monomial(vars, exps, Rational::one()))
    }

    pub fn monomial(vars: &Vars, exps: Monomial, c: Rational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent tuple length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { vars: vars.clone(), terms }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// The value if this polynomial is a constant (zero counts).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Lowest total degree of a term; `None` for zero.
    pub fn low_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).min()
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.vars.same(&other.vars) {
            Ok(())
        } else {
            Err(Error::VariableMismatch {
                left: self.vars.names().to_vec(),
                right: other.vars.names().to_vec(),
            })
        }
    }

    fn add_term(&mut self, exps: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut out = Poly::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(&self.vars);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Formal partial derivative in the variable with the given index.
    pub fn partial(&self, index: usize) -> Result<Poly> {
        if index >= self.vars.len() {
            return Err(Error::VariableIndex { index, len: self.vars.len() });
        }
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            if m[index] == 0 {
                continue;
            }
            let mut d = m.clone();
            d[index] -= 1;
            out.add_term(d, c * int(m[index] as i64));
        }
        Ok(out)
    }

    /// Split into homogeneous components keyed by total degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, Poly> {
        let mut parts: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let w = m.iter().sum();
            parts
                .entry(w)
                .or_insert_with(|| Poly::zero(&self.vars))
                .add_term(m.clone(), c.clone());
        }
        parts
    }

    /// Parse a literal in the grammar: integers, `p/q`, variable names,
    /// `+ - * / ^`, parentheses. Division is only allowed by constants.
    pub fn parse(vars: &Vars, text: &str) -> Result<Poly> {
        let mut p = Parser { vars, src: text.as_bytes(), pos: 0 };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(out)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        // graded order, highest degree first
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const = m.iter().all(|&e| e == 0);
            if !abs.is_one() || is_const {
                factors.push(abs.to_string());
            }
            for (v, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars.names()[v].clone()),
                    _ => factors.push(format!("{}^{}", self.vars.names()[v], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a Poly> for &'a Poly {
            type Output = Poly;
            /// Panics if the operands live in different variable rings;
            /// use the `checked_*` form to get an error instead.
            fn $method(self, rhs: &'a Poly) -> Poly {
                self.$checked(rhs).expect("polynomials over different variable lists")
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

struct Parser<'a> {
    vars: &'a Vars,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: &str) -> Error {
        Error::Parse { column: self.pos + 1, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                b'/' => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    match rhs.constant_value() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        Some(_) => {
                            self.pos = at;
                            return Err(self.err("division by zero"));
                        }
                        None => {
                            self.pos = at;
                            return Err(self.err("division by a non-constant"));
                        }
                    }
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected a non-negative integer exponent"));
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigInt = digits.parse().map_err(|_| self.err("bad integer"))?;
                Ok(Poly::constant(self.vars, BigRational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.vars.index_of(name) {
                    Some(i) => Poly::var(self.vars, i),
                    None => {
                        self.pos = start;
                        Err(self.err(&format!("unknown variable '{name}'")))
                    }
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}
