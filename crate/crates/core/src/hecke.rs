//! The Iwahori-Hecke algebra over A: T-basis arithmetic, the bar
//! involution, the Kazhdan-Lusztig basis C_w with its M-coefficients,
//! structure constants h_{x,y,z}, the involutions delta/j/flat, the
//! symmetrizing trace tau, and the dual basis D_w.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::coxeter::Elem;
use crate::ctx::{Ctx, SparseVec};
use crate::error::{Error, Result};
use crate::grpring::{AElem, Region};
use crate::klsolve::BarColumns;

/// Which basis the coordinates of a [`HElem`] refer to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Basis {
    T,
    C,
    D,
    E,
}

/// A sparse element of the Hecke algebra: coordinates with respect to
/// the tagged basis. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HElem {
    pub basis: Basis,
    terms: BTreeMap<Elem, AElem>,
}

impl HElem {
    pub fn zero(basis: Basis) -> Self {
        HElem { basis, terms: BTreeMap::new() }
    }

    pub fn term(basis: Basis, w: Elem, c: AElem) -> Self {
        let mut h = Self::zero(basis);
        h.add_term(w, c);
        h
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: Elem) -> AElem {
        self.terms.get(&w).cloned().unwrap_or_else(AElem::zero)
    }

    pub fn get(&self, w: Elem) -> Option<&AElem> {
        self.terms.get(&w)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Elem, &AElem)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = Elem> + '_ {
        self.terms.keys().copied()
    }

    pub fn add_term(&mut self, w: Elem, c: AElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                v.add_assign(&c);
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &HElem, c: &AElem) {
        debug_assert_eq!(self.basis, other.basis);
        for (&w, a) in other.iter() {
            self.add_term(w, a.mul(c));
        }
    }

    pub fn add(&self, other: &HElem) -> HElem {
        assert_eq!(self.basis, other.basis, "basis mismatch");
        let mut out = self.clone();
        for (&w, a) in other.iter() {
            out.add_term(w, a.clone());
        }
        out
    }

    pub fn sub(&self, other: &HElem) -> HElem {
        assert_eq!(self.basis, other.basis, "basis mismatch");
        let mut out = self.clone();
        for (&w, a) in other.iter() {
            out.add_term(w, a.neg());
        }
        out
    }

    pub fn neg(&self) -> HElem {
        self.map_coeffs(|a| a.neg())
    }

    pub fn scale(&self, c: &AElem) -> HElem {
        if c.is_zero() {
            return HElem::zero(self.basis);
        }
        self.map_coeffs(|a| a.mul(c))
    }

    pub fn map_coeffs(&self, f: impl Fn(&AElem) -> AElem) -> HElem {
        let mut out = HElem::zero(self.basis);
        for (&w, a) in self.iter() {
            out.add_term(w, f(a));
        }
        out
    }

    pub fn pop_max(&mut self) -> Option<(Elem, AElem)> {
        self.terms.pop_last()
    }

    pub fn into_sparse(self) -> SparseVec {
        self.terms.into_iter().collect()
    }

    pub fn from_sparse(basis: Basis, v: &[(Elem, AElem)]) -> HElem {
        let mut h = HElem::zero(basis);
        for (w, c) in v {
            h.add_term(*w, c.clone());
        }
        h
    }

    pub fn retag(mut self, basis: Basis) -> HElem {
        self.basis = basis;
        self
    }
}

/// Expand T-coordinates over a unitriangular family basis[w] = T_w +
/// (strictly shorter terms); the diagonal coefficient must be 1.
pub fn expand_unitriangular(h: &HElem, basis: &[HElem]) -> SparseVec {
    let mut work = h.clone();
    let mut out: Vec<(Elem, AElem)> = Vec::new();
    while let Some((w, a)) = work.pop_max() {
        debug_assert!({
            let c = basis[w as usize].coeff(w);
            c.num_terms() == 1 && num::One::is_one(&c.constant_term())
        });
        for (&u, c) in basis[w as usize].iter() {
            if u != w {
                work.add_term(u, c.mul(&a).neg());
            }
        }
        out.push((w, a));
    }
    out.sort_by_key(|(w, _)| *w);
    out
}

impl Ctx {
    /// T_1, the unit.
    pub fn t_unit(&self) -> HElem {
        HElem::term(Basis::T, self.g.id(), self.one())
    }

    pub fn t_elem(&self, w: Elem) -> HElem {
        HElem::term(Basis::T, w, self.one())
    }

    /// T_s * h in T-coordinates.
    pub fn lmul_gen_t(&self, s: usize, h: &HElem) -> HElem {
        debug_assert_eq!(h.basis, Basis::T);
        let qdiff = self.wt.q_diff(s);
        let mut out = HElem::zero(Basis::T);
        for (&u, c) in h.iter() {
            let su = self.g.lmul(s, u);
            out.add_term(su, c.clone());
            if self.g.len(su) < self.g.len(u) {
                out.add_term(u, c.mul(&qdiff));
            }
        }
        out
    }

    /// h * T_s in T-coordinates.
    pub fn rmul_gen_t(&self, h: &HElem, s: usize) -> HElem {
        debug_assert_eq!(h.basis, Basis::T);
        let qdiff = self.wt.q_diff(s);
        let mut out = HElem::zero(Basis::T);
        for (&u, c) in h.iter() {
            let us = self.g.rmul(u, s);
            out.add_term(us, c.clone());
            if self.g.len(us) < self.g.len(u) {
                out.add_term(u, c.mul(&qdiff));
            }
        }
        out
    }

    /// T_w * h.
    pub fn t_mul_elem_left(&self, w: Elem, h: &HElem) -> HElem {
        let mut acc = h.clone();
        for &s in self.g.rword(w).iter().rev() {
            acc = self.lmul_gen_t(s as usize, &acc);
        }
        acc
    }

    /// h * T_w.
    pub fn t_mul_elem_right(&self, h: &HElem, w: Elem) -> HElem {
        let mut acc = h.clone();
        for &s in self.g.rword(w) {
            acc = self.rmul_gen_t(&acc, s as usize);
        }
        acc
    }

    /// Product of two elements in T-coordinates.
    pub fn t_mul(&self, a: &HElem, b: &HElem) -> Result<HElem> {
        if a.basis != Basis::T || b.basis != Basis::T {
            return Err(Error::usage("t_mul expects T-basis operands"));
        }
        let mut out = HElem::zero(Basis::T);
        for (&w, c) in a.iter() {
            let part = self.t_mul_elem_left(w, b);
            out.add_scaled(&part, c);
        }
        Ok(out)
    }

    /// Table of bar(T_w) for every w, in T-coordinates.
    pub fn bar_t_table(&self) -> &Vec<HElem> {
        Ctx::get_or_build(&self.bar_t_tab, || {
            let n = self.size();
            let mut tab: Vec<HElem> = Vec::with_capacity(n);
            tab.push(self.t_unit());
            for w in 1..n as Elem {
                let s = self.g.ldesc(w).iter().next().expect("has descent");
                let rest = &tab[self.g.lmul(s, w) as usize];
                // bar(T_s) = T_s - (q_s - q_s^-1) T_1
                let part = self.lmul_gen_t(s, rest);
                let mut out = part;
                out.add_scaled(rest, &self.wt.q_diff(s).neg());
                tab.push(out);
            }
            Ok(tab)
        })
        .expect("bar table construction cannot fail")
    }

    /// The bar involution on an element in T-coordinates.
    pub fn bar(&self, h: &HElem) -> Result<HElem> {
        if h.basis != Basis::T {
            return Err(Error::usage("bar expects T-basis coordinates"));
        }
        let tab = self.bar_t_table();
        let mut out = HElem::zero(Basis::T);
        for (&w, c) in h.iter() {
            out.add_scaled(&tab[w as usize], &c.bar());
        }
        Ok(out)
    }

    /// The ring involution j: e^g -> e^-g, T_w -> (-1)^l(w) T_w.
    pub fn j_inv(&self, h: &HElem) -> HElem {
        debug_assert_eq!(h.basis, Basis::T);
        let mut out = HElem::zero(Basis::T);
        for (&w, c) in h.iter() {
            let mut a = c.bar();
            if self.g.len(w) % 2 == 1 {
                a = a.neg();
            }
            out.add_term(w, a);
        }
        out
    }

    /// The algebra automorphism delta = j o bar (T_s -> -T_s^-1).
    pub fn delta(&self, h: &HElem) -> Result<HElem> {
        Ok(self.j_inv(&self.bar(h)?))
    }

    /// The anti-automorphism flat: T_w -> T_{w^-1}.
    pub fn flat(&self, h: &HElem) -> HElem {
        debug_assert_eq!(h.basis, Basis::T);
        let mut out = HElem::zero(Basis::T);
        for (&w, c) in h.iter() {
            out.add_term(self.g.inv(w), c.clone());
        }
        out
    }

    /// The symmetrizing trace: coefficient of T_1.
    pub fn tau(&self, h: &HElem) -> Result<AElem> {
        if h.basis != Basis::T {
            return Err(Error::usage("tau expects T-basis coordinates"));
        }
        Ok(h.coeff(self.g.id()))
    }

    /// The KL table: for each w the strictly-lower coefficients
    /// p*_{y,w} of C_w = T_w + sum p*_{y,w} T_y.
    pub fn kl(&self) -> &Vec<SparseVec> {
        Ctx::get_or_build(&self.kl_tab, || {
            let n = self.size();
            let bt = self.bar_t_table();
            let lengths: Vec<u32> = (0..n as Elem).map(|w| self.g.len(w)).collect();
            let mut cols: Vec<Vec<(usize, AElem)>> = Vec::with_capacity(n);
            for (y, b) in bt.iter().enumerate() {
                debug_assert_eq!(b.coeff(y as Elem), self.one());
                cols.push(
                    b.iter()
                        .filter(|(&x, _)| x as usize != y)
                        .map(|(&x, c)| (x as usize, c.clone()))
                        .collect(),
                );
            }
            let solved = BarColumns { lengths, cols }.solve_all()?;
            Ok(solved
                .into_iter()
                .map(|col| col.into_iter().map(|(x, p)| (x as Elem, p)).collect())
                .collect())
        })
        .expect("KL system is consistent")
    }

    /// p*_{y,w}, including the diagonal value 1 and zeros.
    pub fn kl_poly(&self, y: Elem, w: Elem) -> AElem {
        if y == w {
            return self.one();
        }
        let col = &self.kl()[w as usize];
        match col.binary_search_by_key(&y, |(e, _)| *e) {
            Ok(i) => col[i].1.clone(),
            Err(_) => AElem::zero(),
        }
    }

    /// C_w in T-coordinates.
    pub fn kl_elem(&self, w: Elem) -> HElem {
        let mut h = self.t_elem(w);
        for (y, p) in &self.kl()[w as usize] {
            h.add_term(*y, p.clone());
        }
        h
    }

    /// Inverse base change: T_w = C_w + sum ptilde_{y,w} C_y (strictly
    /// lower part stored).
    pub fn kl_inv(&self) -> &Vec<SparseVec> {
        Ctx::get_or_build(&self.kl_inv_tab, || {
            let n = self.size();
            let kl = self.kl();
            let mut inv: Vec<BTreeMap<Elem, AElem>> = Vec::with_capacity(n);
            for w in 0..n {
                let mut col: BTreeMap<Elem, AElem> = BTreeMap::new();
                for (y, p) in &kl[w] {
                    // subtract p * (column of T_y in C-coordinates)
                    let sub = &inv[*y as usize];
                    let mut upd = |e: Elem, v: AElem| {
                        let slot = col.entry(e).or_insert_with(AElem::zero);
                        slot.add_assign(&v);
                        if slot.is_zero() {
                            col.remove(&e);
                        }
                    };
                    upd(*y, p.neg());
                    for (z, q) in sub {
                        upd(*z, p.mul(q).neg());
                    }
                }
                inv.push(col);
            }
            Ok(inv.into_iter().map(|c| c.into_iter().collect()).collect())
        })
        .expect("triangular inversion cannot fail")
    }

    /// Expand T-coordinates in the C-basis.
    pub fn to_c(&self, h: &HElem) -> Result<HElem> {
        if h.basis != Basis::T {
            return Err(Error::usage("to_c expects T-basis coordinates"));
        }
        let mut work = h.clone();
        let mut out = HElem::zero(Basis::C);
        while let Some((w, a)) = work.pop_max() {
            for (y, p) in &self.kl()[w as usize] {
                work.add_term(*y, p.mul(&a).neg());
            }
            out.add_term(w, a);
        }
        Ok(out)
    }

    /// Expand C-coordinates back into the T-basis.
    pub fn c_to_t(&self, h: &HElem) -> Result<HElem> {
        if h.basis != Basis::C {
            return Err(Error::usage("c_to_t expects C-basis coordinates"));
        }
        let mut out = HElem::zero(Basis::T);
        for (&w, c) in h.iter() {
            out.add_scaled(&self.kl_elem(w), c);
        }
        Ok(out)
    }

    /// For every generator s and element y, the C-coordinates of
    /// C_s C_y.
    pub fn cmul(&self) -> &Vec<Vec<SparseVec>> {
        Ctx::get_or_build(&self.cmul_tab, || {
            let n = self.size();
            let mut tab = Vec::with_capacity(self.g.n_gens());
            for s in 0..self.g.n_gens() {
                let col: Result<Vec<SparseVec>> = (0..n as Elem)
                    .into_par_iter()
                    .map(|y| {
                        if self.g.len(self.g.lmul(s, y)) < self.g.len(y) {
                            Ok(vec![(y, self.wt.q_sum(s))])
                        } else {
                            let cy = self.kl_elem(y);
                            let mut prod = self.lmul_gen_t(s, &cy);
                            prod.add_scaled(&cy, &self.wt.q_inv(s));
                            Ok(self.to_c(&prod)?.into_sparse())
                        }
                    })
                    .collect();
                tab.push(col?);
            }
            Ok(tab)
        })
        .expect("cmul construction cannot fail")
    }

    /// h_{s,y,x} for a generator s: the coefficient of C_x in C_s C_y.
    pub fn h_gen(&self, s: usize, y: Elem, x: Elem) -> AElem {
        let col = &self.cmul()[s][y as usize];
        match col.binary_search_by_key(&x, |(e, _)| *e) {
            Ok(i) => col[i].1.clone(),
            Err(_) => AElem::zero(),
        }
    }

    /// M^s_{z,y} for sz < z < y < sy: the C_z-coefficient of C_s C_y.
    pub fn mu(&self, s: usize, z: Elem, y: Elem) -> Result<AElem> {
        let g = &self.g;
        let ok = g.len(g.lmul(s, z)) < g.len(z)
            && g.len(g.lmul(s, y)) > g.len(y)
            && z != y
            && g.bruhat_leq(z, y);
        if !ok {
            return Err(Error::usage("mu requires sz < z < y < sy"));
        }
        Ok(self.h_gen(s, y, z))
    }

    /// Full structure-constant table, indexed [y][x] with the
    /// C-coordinates of C_x C_y.
    pub fn h_table(&self) -> &Vec<Vec<SparseVec>> {
        Ctx::get_or_build(&self.h_tab, || {
            let n = self.size();
            let cmul = self.cmul();
            let table: Vec<Vec<SparseVec>> = (0..n as Elem)
                .into_par_iter()
                .map(|y| {
                    let mut col: Vec<SparseVec> = Vec::with_capacity(n);
                    col.push(vec![(y, self.one())]);
                    for x in 1..n as Elem {
                        let s = self.g.ldesc(x).iter().next().unwrap();
                        let xp = self.g.lmul(s, x);
                        // C_x C_y = C_s (C_x' C_y) - sum_z h_{s,x',z} C_z C_y  (z != x)
                        let mut acc: BTreeMap<Elem, AElem> = BTreeMap::new();
                        let mut add = |e: Elem, v: AElem| {
                            if v.is_zero() {
                                return;
                            }
                            let slot = acc.entry(e).or_insert_with(AElem::zero);
                            slot.add_assign(&v);
                            if slot.is_zero() {
                                acc.remove(&e);
                            }
                        };
                        for (z, c) in &col[xp as usize] {
                            for (u, d) in &cmul[s][*z as usize] {
                                add(*u, c.mul(d));
                            }
                        }
                        for (z, m) in &cmul[s][xp as usize] {
                            if *z == x {
                                continue;
                            }
                            for (u, c) in &col[*z as usize] {
                                add(*u, m.mul(c).neg());
                            }
                        }
                        col.push(acc.into_iter().collect());
                    }
                    col
                })
                .collect();
            Ok(table)
        })
        .expect("h-table construction cannot fail")
    }

    /// The C-coordinates of C_x C_y.
    pub fn h_vec(&self, x: Elem, y: Elem) -> &SparseVec {
        &self.h_table()[y as usize][x as usize]
    }

    /// h_{x,y,z}.
    pub fn h_coeff(&self, x: Elem, y: Elem, z: Elem) -> AElem {
        let col = self.h_vec(x, y);
        match col.binary_search_by_key(&z, |(e, _)| *e) {
            Ok(i) => col[i].1.clone(),
            Err(_) => AElem::zero(),
        }
    }

    /// D_{z^-1} in T-coordinates, for every z, from
    /// (-1)^(l(z)+l(w0)) delta(C_{z^-1 w0}) T_{w0}. The inverse in the
    /// index pins the normalization to the defining duality
    /// tau(C_w D_{z^-1}) = delta_{wz}.
    pub fn dual_d(&self) -> &Vec<HElem> {
        Ctx::get_or_build(&self.dual_d_tab, || {
            let w0 = self.g.longest_elem();
            let tab: Vec<HElem> = (0..self.size() as Elem)
                .into_par_iter()
                .map(|z| {
                    let zw0 = self.g.mul(self.g.inv(z), w0);
                    let d = self.j_inv(&self.kl_elem(zw0));
                    let d = self.t_mul_elem_right(&d, w0);
                    if (self.g.len(z) + self.g.len(w0)) % 2 == 1 {
                        d.neg()
                    } else {
                        d
                    }
                })
                .collect();
            Ok(tab)
        })
        .expect("dual basis construction cannot fail")
    }

    /// D_{z^-1} accessor.
    pub fn d_elem(&self, z: Elem) -> &HElem {
        &self.dual_d()[z as usize]
    }

    /// Check that every KL element is bar-invariant and triangular with
    /// strictly negative coefficients below the top. Used by tests and
    /// the acceptance suite; cost is one bar per element.
    pub fn verify_kl_invariants(&self) -> Result<()> {
        for w in 0..self.size() as Elem {
            let c = self.kl_elem(w);
            if self.bar(&c)? != c {
                return Err(Error::internal(format!("C_{w} is not bar-invariant")));
            }
            for (y, p) in c.iter() {
                if *y == w {
                    continue;
                }
                if !self.g.bruhat_leq(*y, w) {
                    return Err(Error::internal(format!(
                        "C_{w} has support at {y} outside the Bruhat interval"
                    )));
                }
                if !p.is_in(Region::Neg) {
                    return Err(Error::internal(format!(
                        "p*_{{{y},{w}}} is not strictly negative"
                    )));
                }
            }
        }
        Ok(())
    }
}
