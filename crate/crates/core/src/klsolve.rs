//! Shared solver for triangular bar-invariance systems.
//!
//! Several bases in this crate (the Kazhdan-Lusztig basis, the relative
//! p*-polynomials, the E-basis pi-polynomials) are all characterised the
//! same way: given a basis {B_z} with a known expansion
//!
//!   bar(B_z) = B_z + sum_x c_{x,z} B_x      (len(x) < len(z)),
//!
//! find, for a target y, coefficients p_{x,y} in A_{<0} such that
//! B_y + sum_x p_{x,y} B_x is bar-invariant. The solution is unique and
//! is obtained by descending induction on the length of x.

use std::collections::BTreeMap;

use num::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grpring::{AElem, Region};

/// The bar-expansion data of a triangular basis. `cols[z]` holds the
/// strictly-lower coefficients c_{x,z}; the diagonal coefficient is 1
/// and is not stored. Every listed x must satisfy
/// `lengths[x] < lengths[z]`.
pub struct BarColumns {
    pub lengths: Vec<u32>,
    pub cols: Vec<Vec<(usize, AElem)>>,
}

impl BarColumns {
    /// Solve the system for one target index. Returns the strictly-lower
    /// coefficients p_{x,y} (the diagonal 1 is implicit); zero values are
    /// omitted.
    pub fn solve(&self, y: usize) -> Result<BTreeMap<usize, AElem>> {
        let mut out: BTreeMap<usize, AElem> = BTreeMap::new();
        // pending contributions g_x, keyed so that the longest x pops first
        let mut acc: BTreeMap<(u32, usize), AElem> = BTreeMap::new();
        for (x, c) in &self.cols[y] {
            debug_assert!(self.lengths[*x] < self.lengths[y]);
            acc.entry((self.lengths[*x], *x))
                .or_insert_with(AElem::zero)
                .add_assign(c);
        }
        while let Some((&key, _)) = acc.last_key_value() {
            let g = acc.remove(&key).unwrap();
            let (_, x) = (key.0, key.1);
            if g.is_zero() {
                continue;
            }
            // p - bar(p) = g with p strictly negative forces p = g_{<0},
            // and consistency of the system requires bar(g) = -g.
            let (p, _) = g.sign_part(Region::Neg);
            let (pos, _) = g.sign_part(Region::Pos);
            let bar_p = p.bar();
            if !g.constant_term().is_zero() || pos != bar_p.neg() {
                return Err(Error::internal(format!(
                    "bar-invariance system is inconsistent at index {x} (target {y})"
                )));
            }
            if p.is_zero() {
                continue;
            }
            for (x2, c) in &self.cols[x] {
                acc.entry((self.lengths[*x2], *x2))
                    .or_insert_with(AElem::zero)
                    .add_assign(&c.mul(&bar_p));
            }
            out.insert(x, p);
        }
        Ok(out)
    }

    /// Solve for every index; targets are independent, so this runs in
    /// parallel over the ambient thread pool.
    pub fn solve_all(&self) -> Result<Vec<Vec<(usize, AElem)>>> {
        (0..self.cols.len())
            .into_par_iter()
            .map(|y| Ok(self.solve(y)?.into_iter().collect()))
            .collect()
    }
}
