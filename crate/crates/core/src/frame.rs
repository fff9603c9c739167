//! Constant changes of the global frame.
//!
//! Components of a multisection transform by `∧^k g`, components of a form
//! by `∧^k g^{-T}`, so every pairing is unchanged.

use num::Zero;

use crate::algebroid::{LieAlgebroid, StructureEntry};
use crate::bv::TopConnection;
use crate::error::{Error, Result};
use crate::exterior::{blade_indices, blades, GradedElem, Side, Volume};
use crate::linalg::Matrix;
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameChange {
    g: Matrix,
    g_inv: Matrix,
    g_inv_t: Matrix,
}

impl FrameChange {
    pub fn new(g: Matrix) -> Result<Self> {
        if g.rows() != g.cols() {
            return Err(Error::Malformed("frame change must be square".into()));
        }
        let g_inv = g.inverse()?;
        let g_inv_t = g_inv.transpose();
        Ok(FrameChange { g, g_inv, g_inv_t })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        let m = Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| crate::poly::int(x)).collect()).collect(),
        )?;
        Self::new(m)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.g
    }

    pub fn size(&self) -> usize {
        self.g.rows()
    }

    fn check_rank(&self, rank: usize) -> Result<()> {
        if rank != self.size() {
            return Err(Error::RankMismatch { expected: self.size(), found: rank });
        }
        Ok(())
    }

    pub fn element(&self, u: &GradedElem) -> Result<GradedElem> {
        self.check_rank(u.rank())?;
        let m = match u.side() {
            Side::A => &self.g,
            Side::Dual => &self.g_inv_t,
        };
        let mut out = GradedElem::zero(u.side(), u.rank(), u.degree(), u.vars());
        for bi in blades(u.rank(), u.degree()) {
            let rows = blade_indices(bi);
            let mut c = Poly::zero(u.vars());
            for (bj, p) in u.components() {
                let minor = m.minor(&rows, &blade_indices(bj));
                if !minor.is_zero() {
                    c = &c + &p.scale(&minor);
                }
            }
            out = out.checked_add(&GradedElem::blade(u.side(), u.rank(), bi, c))?;
        }
        Ok(out)
    }

    /// The same volume expressed in the new frame.
    pub fn volume(&self, v: &Volume) -> Result<Volume> {
        Volume::new(v.coeff() * self.g.determinant()?)
    }

    /// Express the algebroid in the frame `e'_i = Σ_j (g^{-1})_{ji} e_j`.
    pub fn algebroid(&self, a: &LieAlgebroid) -> Result<LieAlgebroid> {
        self.check_rank(a.rank())?;
        let n = a.rank();
        let vars = a.vars();
        let new_frame: Vec<GradedElem> = (0..n)
            .map(|i| {
                let mut e = a.zero(Side::A, 1);
                for j in 0..n {
                    let c = Poly::constant(vars, self.g_inv[(j, i)].clone());
                    e = e.checked_add(&a.frame(j).scale_poly(&c)).unwrap();
                }
                e
            })
            .collect();
        let anchor = new_frame
            .iter()
            .map(|e| a.anchor_vector(e))
            .collect::<Result<Vec<_>>>()?;
        let mut structure = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let b = a.bracket_sections(&new_frame[i], &new_frame[j])?;
                let b = self.element(&b)?;
                for (blade, c) in b.components() {
                    let k = blade.trailing_zeros() as usize;
                    structure.push(StructureEntry { i, j, k, c: c.clone() });
                }
            }
        }
        Ok(LieAlgebroid::new_unchecked(vars, n, anchor, structure)?
            .with_frame_names(a.frame_names()))
    }

    pub fn connection(&self, c: &TopConnection) -> Result<TopConnection> {
        let a = self.algebroid(c.algebroid())?;
        TopConnection::new(&a, self.element(c.alpha())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::standard::*;
    use crate::poly::{int, rat};
    use crate::random;
    use proptest::prelude::*;

    #[test]
    fn identity_leaves_data_unchanged() {
        let id = FrameChange::new(Matrix::identity(3)).unwrap();
        let s = sl2();
        assert_eq!(id.algebroid(&s).unwrap(), s);
        let u = GradedElem::basis(Side::A, 3, &[0, 2], s.vars());
        assert_eq!(id.element(&u).unwrap(), u);
    }

    #[test]
    fn swap_flips_volume() {
        let g = FrameChange::from_ints(&[&[0, 1], &[1, 0]]).unwrap();
        let vars = crate::poly::Vars::empty();
        let lam = Volume::reference().element(Side::A, 2, &vars);
        assert_eq!(g.element(&lam).unwrap(), lam.neg());
        assert_eq!(g.volume(&Volume::reference()).unwrap().coeff(), &int(-1));
    }

    #[test]
    fn diagonal_scales_dual() {
        let g = FrameChange::from_ints(&[&[2, 0], &[0, 1]]).unwrap();
        let vars = crate::poly::Vars::empty();
        let e1 = GradedElem::basis(Side::Dual, 2, &[0], &vars);
        assert_eq!(g.element(&e1).unwrap(), e1.scale(&rat(1, 2)));
    }

    #[test]
    fn singular_is_rejected() {
        assert_eq!(FrameChange::from_ints(&[&[1, 2], &[2, 4]]), Err(Error::SingularMatrix));
    }

    #[test]
    fn validation_verdict_is_frame_independent() {
        let g = FrameChange::from_ints(&[&[1, 1, 0], &[0, 1, 2], &[1, 0, 1]]).unwrap();
        let s = g.algebroid(&sl2()).unwrap();
        assert!(s.validate().passed());
        let bad = lie_algebra_unchecked(
            3,
            &[(0, 1, 1, int(3)), (0, 2, 2, int(-2)), (1, 2, 0, int(1))],
        )
        .unwrap();
        assert!(!g.algebroid(&bad).unwrap().validate().passed());
        let t = tangent(&["x", "y"]).unwrap();
        let g2 = FrameChange::from_ints(&[&[2, 1], &[1, 1]]).unwrap();
        assert!(g2.algebroid(&t).unwrap().validate().passed());
    }

    fn arb_change() -> impl Strategy<Value = FrameChange> {
        proptest::collection::vec(-2i64..3, 9).prop_filter_map("singular", |v| {
            let rows: Vec<&[i64]> = v.chunks(3).collect();
            FrameChange::from_ints(&rows).ok()
        })
    }

    proptest! {
        #[test]
        fn pairing_is_invariant(g in arb_change(), seed in any::<u64>(), k in 0usize..4) {
            let vars = crate::poly::Vars::new(&["x"]);
            let mut r = random::rng(seed);
            let u = random::element(&mut r, Side::A, 3, k, &vars, 2);
            let th = random::element(&mut r, Side::Dual, 3, k, &vars, 2);
            let before = th.pairing(&u).unwrap();
            let after = g.element(&th).unwrap().pairing(&g.element(&u).unwrap()).unwrap();
            prop_assert_eq!(before, after);
        }
    }
}
