//! Seeded generators for property suites.
//!
//! A random polynomial has 0 to 3 terms; each term is a monomial of total
//! degree at most `max_deg` with an integer coefficient in `[-3, 3]`.
//! Everything is driven by a ChaCha stream seeded from a `u64`, so runs
//! reproduce exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exterior::{blades, GradedElem, Side};
use crate::poly::{int, Poly, Vars};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn poly<R: Rng>(rng: &mut R, vars: &Vars, max_deg: u32) -> Poly {
    let mut out = Poly::zero(vars);
    let mut used = std::collections::BTreeSet::new();
    let terms = rng.gen_range(0..=3);
    for _ in 0..terms {
        let mut exps = vec![0u32; vars.len()];
        let total = rng.gen_range(0..=max_deg);
        if !exps.is_empty() {
            for _ in 0..total {
                let i = rng.gen_range(0..exps.len());
                exps[i] += 1;
            }
        }
        let c = rng.gen_range(-3i64..=3);
        if !used.insert(exps.clone()) {
            continue;
        }
        out = &out + &Poly::monomial(vars, exps, int(c));
    }
    out
}

/// Random element of the given side and degree; every blade gets an
/// independent random coefficient.
pub fn element<R: Rng>(
    rng: &mut R,
    side: Side,
    rank: usize,
    degree: usize,
    vars: &Vars,
    max_deg: u32,
) -> GradedElem {
    let mut out = GradedElem::zero(side, rank, degree, vars);
    for b in blades(rank, degree) {
        let p = poly(rng, vars, max_deg);
        out = out.checked_add(&GradedElem::blade(side, rank, b, p)).expect("same shape");
    }
    out
}

/// Random element whose degree is drawn uniformly from `0..=rank`.
pub fn any_degree<R: Rng>(
    rng: &mut R,
    side: Side,
    rank: usize,
    vars: &Vars,
    max_deg: u32,
) -> GradedElem {
    let k = rng.gen_range(0..=rank);
    element(rng, side, rank, k, vars, max_deg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let vars = Vars::new(&["x", "y"]);
        let a: Vec<Poly> = (0..5).map(|_| poly(&mut rng(3), &vars, 3)).collect();
        let mut r = rng(3);
        let first = poly(&mut r, &vars, 3);
        assert_eq!(a[0], first);
        let mut r = rng(9);
        for _ in 0..50 {
            let p = poly(&mut r, &vars, 3);
            assert!(p.degree().map_or(true, |d| d <= 3));
            assert!(p.terms().all(|(_, c)| c >= &int(-3) && c <= &int(3)));
        }
    }
}
