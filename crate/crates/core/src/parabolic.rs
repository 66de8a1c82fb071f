//! Relative Kazhdan-Lusztig theory for a parabolic subgroup W_I: the
//! polynomials p*_{xu,yv} and r_{xu,yv}, the factorization of C_{yv}
//! through T_x C_u, the right-handed coefficient families a/b, and the
//! induction of cells with its approx-preservation checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::cells::{self, Side};
use crate::coxeter::{Elem, GenSet};
use crate::ctx::{Ctx, SparseVec};
use crate::error::{Error, Result};
use crate::grpring::AElem;
use crate::hecke::{expand_unitriangular, Basis, HElem};
use crate::klsolve::BarColumns;

/// Relative KL data for one parabolic subset. Pairs are keyed by the
/// ambient group elements (the coset factorization is unique), and only
/// strictly-lower nonzero entries are stored; incomparable pairs are
/// simply absent.
pub struct RelKl {
    pub iset: GenSet,
    /// T_x C_u in T-coordinates, for every w = xu
    pub basis_t: Vec<HElem>,
    /// rbar_{xu,yv}: column per yv, the expansion of bar(T_y C_v)
    pub rbar: Vec<SparseVec>,
    /// p*_{xu,yv}: column per yv
    pub pstar: Vec<SparseVec>,
}

impl RelKl {
    fn lookup(col: &SparseVec, lo: Elem) -> AElem {
        match col.binary_search_by_key(&lo, |(e, _)| *e) {
            Ok(i) => col[i].1.clone(),
            Err(_) => AElem::zero(),
        }
    }

    /// p*_{lo,hi} including the diagonal 1.
    pub fn p(&self, ctx: &Ctx, lo: Elem, hi: Elem) -> AElem {
        if lo == hi {
            return ctx.one();
        }
        Self::lookup(&self.pstar[hi as usize], lo)
    }

    /// r_{lo,hi} = bar of the stored expansion coefficient.
    pub fn r(&self, ctx: &Ctx, lo: Elem, hi: Elem) -> AElem {
        if lo == hi {
            return ctx.one();
        }
        Self::lookup(&self.rbar[hi as usize], lo).bar()
    }

    /// The factorization sum p*_{xu,yv} T_x C_u (including the top term).
    pub fn factorization(&self, _ctx: &Ctx, hi: Elem) -> HElem {
        let mut acc = self.basis_t[hi as usize].clone();
        for (lo, p) in &self.pstar[hi as usize] {
            acc.add_scaled(&self.basis_t[*lo as usize], p);
        }
        acc
    }
}

/// Build (or fetch) the relative KL tables for W_I.
pub fn rel_kl(ctx: &Ctx, iset: GenSet) -> Result<Arc<RelKl>> {
    if let Some(t) = ctx.relkl_cache.lock().unwrap().get(&iset.0) {
        return Ok(Arc::clone(t));
    }
    let g = ctx.group();
    let n = ctx.size();
    let basis_t: Vec<HElem> = (0..n as Elem)
        .into_par_iter()
        .map(|w| {
            let (x, u) = g.coset_decompose_left(w, iset);
            ctx.t_mul_elem_left(x, &ctx.kl_elem(u))
        })
        .collect();
    let rbar: Vec<SparseVec> = (0..n as Elem)
        .into_par_iter()
        .map(|w| -> Result<SparseVec> {
            let b = ctx.bar(&basis_t[w as usize])?;
            let mut col = expand_unitriangular(&b, &basis_t);
            // drop the diagonal (it must be 1)
            match col.binary_search_by_key(&w, |(e, _)| *e) {
                Ok(i) => {
                    if col[i].1 != ctx.one() {
                        return Err(Error::internal("relative r-expansion diagonal is not 1"));
                    }
                    col.remove(i);
                }
                Err(_) => {
                    return Err(Error::internal("relative r-expansion misses its diagonal"))
                }
            }
            Ok(col)
        })
        .collect::<Result<_>>()?;
    let lengths: Vec<u32> = (0..n as Elem).map(|w| g.len(w)).collect();
    let cols: Vec<Vec<(usize, AElem)>> = rbar
        .iter()
        .map(|col| col.iter().map(|(e, c)| (*e as usize, c.clone())).collect())
        .collect();
    let solved = BarColumns { lengths, cols }.solve_all()?;
    let pstar: Vec<SparseVec> = solved
        .into_iter()
        .map(|col| col.into_iter().map(|(e, p)| (e as Elem, p)).collect())
        .collect();
    let built = Arc::new(RelKl { iset, basis_t, rbar, pstar });
    let mut cache = ctx.relkl_cache.lock().unwrap();
    Ok(Arc::clone(cache.entry(iset.0).or_insert(built)))
}

/// Compose the two triangular base changes {C_yv} -> {T_y C_v} -> {C_xu}
/// and check that the product is the identity matrix.
pub fn base_changes_mutually_inverse(ctx: &Ctx, rel: &RelKl) -> Result<bool> {
    let n = ctx.size();
    // column per w: T_y C_v (w = yv) expanded in the C-basis
    let mut qcols: Vec<SparseVec> = Vec::with_capacity(n);
    for w in 0..n as Elem {
        qcols.push(ctx.to_c(&rel.basis_t[w as usize])?.into_sparse());
    }
    for hi in 0..n as Elem {
        let mut acc: BTreeMap<Elem, AElem> = BTreeMap::new();
        let add_col = |z: Elem, scale: &AElem, acc: &mut BTreeMap<Elem, AElem>| {
            for (u, c) in &qcols[z as usize] {
                let slot = acc.entry(*u).or_insert_with(AElem::zero);
                slot.add_assign(&c.mul(scale));
                if slot.is_zero() {
                    acc.remove(u);
                }
            }
        };
        add_col(hi, &ctx.one(), &mut acc);
        for (lo, p) in &rel.pstar[hi as usize] {
            add_col(*lo, p, &mut acc);
        }
        let ok = acc.len() == 1 && acc.get(&hi).map(|c| *c == ctx.one()).unwrap_or(false);
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The right-handed coefficient families: C_{vy} = sum a_{ux,vy} C_u T_x
/// and C_v T_y = sum b_{ux,vy} C_{ux}, with a obtained from p* through
/// the flat anti-automorphism and b as the inverse of a.
pub struct AbTable {
    pub iset: GenSet,
    /// column per vy: strictly-lower a_{ux,vy}
    pub a: Vec<SparseVec>,
    /// column per vy: strictly-lower b_{ux,vy}
    pub b: Vec<SparseVec>,
}

impl AbTable {
    pub fn a_coeff(&self, ctx: &Ctx, lo: Elem, hi: Elem) -> AElem {
        if lo == hi {
            return ctx.one();
        }
        RelKl::lookup(&self.a[hi as usize], lo)
    }

    pub fn b_coeff(&self, ctx: &Ctx, lo: Elem, hi: Elem) -> AElem {
        if lo == hi {
            return ctx.one();
        }
        RelKl::lookup(&self.b[hi as usize], lo)
    }
}

pub fn ab_coeffs(ctx: &Ctx, iset: GenSet) -> Result<AbTable> {
    let rel = rel_kl(ctx, iset)?;
    let g = ctx.group();
    let n = ctx.size();
    let mut a: Vec<SparseVec> = vec![Vec::new(); n];
    for hi in 0..n as Elem {
        let col: SparseVec = rel.pstar[g.inv(hi) as usize]
            .iter()
            .map(|(lo, p)| (g.inv(*lo), p.clone()))
            .collect();
        let mut col = col;
        col.sort_by_key(|(e, _)| *e);
        a[hi as usize] = col;
    }
    // b is the inverse of the unitriangular matrix a
    let mut b: Vec<BTreeMap<Elem, AElem>> = Vec::with_capacity(n);
    for w in 0..n {
        let mut col: BTreeMap<Elem, AElem> = BTreeMap::new();
        for (u, av) in &a[w] {
            let mut upd = |e: Elem, v: AElem| {
                let slot = col.entry(e).or_insert_with(AElem::zero);
                slot.add_assign(&v);
                if slot.is_zero() {
                    col.remove(&e);
                }
            };
            upd(*u, av.neg());
            let prev: Vec<(Elem, AElem)> =
                b[*u as usize].iter().map(|(e, c)| (*e, c.clone())).collect();
            for (z, c) in prev {
                upd(z, av.mul(&c).neg());
            }
        }
        b.push(col);
    }
    Ok(AbTable { iset, a, b: b.into_iter().map(|c| c.into_iter().collect()).collect() })
}

/// Report for the induction of one left cell of W_I.
pub struct InduceReport {
    /// X_I * cell, sorted
    pub set: Vec<Elem>,
    pub union_of_left_cells: bool,
    /// the base-change map intertwines the C_s-actions on the cell
    /// module of the induced set and on the induced module
    pub intertwines: bool,
    /// the delta-twisted expansion with signs (-1)^l(x) holds
    pub delta_twist_ok: bool,
}

pub fn induce_cell(ctx: &Ctx, iset: GenSet, cell: &[Elem]) -> Result<InduceReport> {
    let g = ctx.group();
    let wi_cells = cells::parabolic_cells(ctx, Side::L, iset);
    let mut sorted = cell.to_vec();
    sorted.sort_unstable();
    if !wi_cells.iter().any(|c| *c == sorted) {
        return Err(Error::usage("the given set is not a left cell of W_I"));
    }
    let xs = g.x_set(iset);
    let mut set: Vec<Elem> = Vec::with_capacity(xs.len() * sorted.len());
    for &x in &xs {
        for &u in &sorted {
            set.push(g.mul(x, u));
        }
    }
    set.sort_unstable();
    set.dedup();
    if set.len() != xs.len() * sorted.len() {
        return Err(Error::internal("coset products collided"));
    }

    let part = cells::cell_partition(ctx, Side::L, ctx.full_gens());
    let union_of_left_cells = set
        .iter()
        .all(|&w| part.cell_containing(w).iter().all(|&y| set.binary_search(&y).is_ok()));

    let rel = rel_kl(ctx, iset)?;
    let intertwines = check_intertwining(ctx, iset, &sorted, &set, &rel)?;
    let delta_twist_ok = check_delta_twist(ctx, &set, &rel)?;
    Ok(InduceReport { set, union_of_left_cells, intertwines, delta_twist_ok })
}

type Column = BTreeMap<usize, AElem>;

fn add_into(col: &mut Column, k: usize, v: AElem) {
    if v.is_zero() {
        return;
    }
    let slot = col.entry(k).or_insert_with(AElem::zero);
    slot.add_assign(&v);
    if slot.is_zero() {
        col.remove(&k);
    }
}

/// Verify that c_{yv} -> sum p*_{xu,yv} (T_x (x) c_u) intertwines the
/// C_s-actions of the induced-set cell module and of H (x)_{H_I} [cell].
fn check_intertwining(
    ctx: &Ctx,
    iset: GenSet,
    cell: &[Elem],
    set: &[Elem],
    rel: &RelKl,
) -> Result<bool> {
    let g = ctx.group();
    let xs = g.x_set(iset);
    let pos_x: BTreeMap<Elem, usize> = xs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let pos_u: BTreeMap<Elem, usize> = cell.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let pos_set: BTreeMap<Elem, usize> = set.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let d = cell.len();
    let pair_idx = |x: Elem, u: Elem| pos_x[&x] * d + pos_u[&u];

    // base-change columns P[yv]
    let pcols: Vec<Column> = set
        .iter()
        .map(|&yv| {
            let mut col = Column::new();
            let (y, v) = g.coset_decompose_left(yv, iset);
            debug_assert!(pos_u.contains_key(&v));
            add_into(&mut col, pair_idx(y, v), ctx.one());
            for (lo, p) in &rel.pstar[yv as usize] {
                let (x, u) = g.coset_decompose_left(*lo, iset);
                if pos_u.contains_key(&u) {
                    add_into(&mut col, pair_idx(x, u), p.clone());
                }
            }
            col
        })
        .collect();

    // W_I-internal h-structure: C_w' acting on the cell (through the
    // subquotient, coefficients restricted to the cell)
    let act_c = |wp: Elem, u: Elem| -> Vec<(Elem, AElem)> {
        ctx.h_vec(wp, u)
            .iter()
            .filter(|(e, _)| pos_u.contains_key(e))
            .cloned()
            .collect()
    };

    for s in 0..g.n_gens() {
        // action on the induced-set module: column per yv
        let m1: Vec<Vec<(usize, AElem)>> = set
            .iter()
            .map(|&z| {
                ctx.cmul()[s][z as usize]
                    .iter()
                    .filter_map(|(zp, h)| pos_set.get(zp).map(|&i| (i, h.clone())))
                    .collect()
            })
            .collect();
        // action on the induced module: column per (x, u) pair
        let mut n_cols: Vec<Column> = vec![Column::new(); xs.len() * d];
        for (&x, _) in pos_x.iter() {
            for (&u, _) in pos_u.iter() {
                let mut col = Column::new();
                // C_s T_x = T_s T_x + q_s^-1 T_x
                let mut cstx = ctx.lmul_gen_t(s, &ctx.t_elem(x));
                cstx.add_term(x, ctx.weights().q_inv(s));
                for (&z, coeff) in cstx.iter() {
                    let (xp, w) = g.coset_decompose_left(z, iset);
                    // T_w = sum ptilde_{w',w} C_{w'} inside W_I
                    let mut tw = ctx.to_c(&ctx.t_elem(w))?;
                    let _ = &mut tw;
                    for (&wp, pt) in tw.iter() {
                        for (up, h) in act_c(wp, u) {
                            add_into(
                                &mut col,
                                pair_idx(xp, up),
                                coeff.mul(pt).mul(&h),
                            );
                        }
                    }
                }
                n_cols[pair_idx(x, u)] = col;
            }
        }
        // check P * M1 = N * P, column by column over yv
        for (yvi, _) in set.iter().enumerate() {
            let mut lhs = Column::new();
            for (zi, h) in &m1[yvi] {
                for (k, p) in &pcols[*zi] {
                    add_into(&mut lhs, *k, p.mul(h));
                }
            }
            let mut rhs = Column::new();
            for (k, p) in &pcols[yvi] {
                for (k2, v) in &n_cols[*k] {
                    add_into(&mut rhs, *k2, v.mul(p));
                }
            }
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// delta(C_{yv}) = sum (-1)^l(x) bar(p*_{xu,yv}) T_x delta(C_u), checked
/// as an identity of Hecke elements for every yv in the induced set
/// (the coefficient is barred because j acts on scalars).
fn check_delta_twist(ctx: &Ctx, set: &[Elem], rel: &RelKl) -> Result<bool> {
    let g = ctx.group();
    for &yv in set {
        let lhs = ctx.delta(&ctx.kl_elem(yv))?;
        let mut rhs = HElem::zero(Basis::T);
        let add_part = |lo: Elem, p: &AElem, rhs: &mut HElem| -> Result<()> {
            let (x, u) = g.coset_decompose_left(lo, rel.iset);
            let part = ctx.t_mul_elem_left(x, &ctx.delta(&ctx.kl_elem(u))?);
            let p = p.bar();
            let sign = if g.len(x) % 2 == 1 { p.neg() } else { p };
            rhs.add_scaled(&part, &sign);
            Ok(())
        };
        add_part(yv, &ctx.one(), &mut rhs)?;
        let col = rel.pstar[yv as usize].clone();
        for (lo, p) in &col {
            add_part(*lo, p, &mut rhs)?;
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Report for the p*-independence and induced-correspondence checks.
pub struct IndepReport {
    /// the given bijection satisfies (heart) over I (precondition)
    pub heart_ok: bool,
    pub pstar_match: bool,
    pub pstar_mismatches: Vec<(Elem, Elem)>,
    /// X_I cell ~ X_I cell1 under xu -> xu1
    pub induced_approx: bool,
    /// induced partitions correspond cell-by-cell under approx
    pub cellwise: bool,
}

pub fn check_indep(
    ctx: &Ctx,
    iset: GenSet,
    cell: &[Elem],
    cell1: &[Elem],
    bij: &[(Elem, Elem)],
) -> Result<IndepReport> {
    let g = ctx.group();
    let heart = cells::approx_check(ctx, cell, cell1, bij, iset)?;
    if !heart.pass {
        return Ok(IndepReport {
            heart_ok: false,
            pstar_match: false,
            pstar_mismatches: Vec::new(),
            induced_approx: false,
            cellwise: false,
        });
    }
    let map: BTreeMap<Elem, Elem> = bij.iter().copied().collect();
    let rel = rel_kl(ctx, iset)?;
    let xs = g.x_set(iset);
    let mut mismatches = Vec::new();
    for &y in &xs {
        for &v in cell {
            let yv = g.mul(y, v);
            let yv1 = g.mul(y, map[&v]);
            for &x in &xs {
                for &u in cell {
                    let xu = g.mul(x, u);
                    let xu1 = g.mul(x, map[&u]);
                    if rel.p(ctx, xu, yv) != rel.p(ctx, xu1, yv1) {
                        if mismatches.len() < 20 {
                            mismatches.push((xu, yv));
                        }
                    }
                }
            }
        }
    }
    let pstar_match = mismatches.is_empty();

    // induced bijection xu -> xu1
    let mut set: Vec<Elem> = Vec::new();
    let mut set1: Vec<Elem> = Vec::new();
    let mut bigbij: Vec<(Elem, Elem)> = Vec::new();
    for &x in &xs {
        for &u in cell {
            let w = g.mul(x, u);
            let w1 = g.mul(x, map[&u]);
            set.push(w);
            set1.push(w1);
            bigbij.push((w, w1));
        }
    }
    set.sort_unstable();
    set1.sort_unstable();
    let induced =
        cells::approx_check(ctx, &set, &set1, &bigbij, ctx.full_gens())?;
    let induced_approx = induced.pass;

    // cell-by-cell correspondence (the bijection f of the partitions)
    let part = cells::cell_partition(ctx, Side::L, ctx.full_gens());
    let bigmap: BTreeMap<Elem, Elem> = bigbij.iter().copied().collect();
    let mut cellwise = true;
    let mut seen: Vec<Vec<Elem>> = Vec::new();
    for &w in &set {
        let c = part.cell_containing(w).to_vec();
        if seen.contains(&c) {
            continue;
        }
        // image of this cell under the induced bijection
        let mut image: Vec<Elem> = c.iter().map(|&z| bigmap[&z]).collect();
        image.sort_unstable();
        let target = part.cell_containing(image[0]).to_vec();
        if image != target {
            cellwise = false;
            break;
        }
        let bijc: Vec<(Elem, Elem)> = c.iter().map(|&z| (z, bigmap[&z])).collect();
        if !cells::approx_check(ctx, &c, &image, &bijc, ctx.full_gens())?.pass {
            cellwise = false;
            break;
        }
        seen.push(c);
    }

    Ok(IndepReport {
        heart_ok: true,
        pstar_match,
        pstar_mismatches: mismatches,
        induced_approx,
        cellwise,
    })
}

/// Verify the expansion identity for the relative r-polynomials:
/// rbar_{xu,yv} = sum over w, w' in W_I of
/// Rbar*_{xw,y} ptilde_{w',w} h_{w',v,u}.
pub fn rpol_identity_check(ctx: &Ctx, iset: GenSet) -> Result<bool> {
    let g = ctx.group();
    let rel = rel_kl(ctx, iset)?;
    let members = g.parabolic_members(iset);
    for hi in 0..ctx.size() as Elem {
        let (y, v) = g.coset_decompose_left(hi, iset);
        let bar_ty = &ctx.bar_t_table()[y as usize];
        for lo in 0..ctx.size() as Elem {
            let (x, u) = g.coset_decompose_left(lo, iset);
            let mut acc = AElem::zero();
            for &w in &members {
                let xw = g.mul(x, w);
                let rstar = bar_ty.coeff(xw);
                if rstar.is_zero() {
                    continue;
                }
                // ptilde_{w',w}: inverse base change inside W_I
                let mut tw_in_c: Vec<(Elem, AElem)> =
                    vec![(w, ctx.one())];
                tw_in_c.extend(ctx.kl_inv()[w as usize].iter().cloned());
                for (wp, pt) in tw_in_c {
                    let h = ctx.h_coeff(wp, v, u);
                    if h.is_zero() {
                        continue;
                    }
                    acc.add_assign(&rstar.mul(&pt).mul(&h));
                }
            }
            let expect = if lo == hi { ctx.one() } else { RelKl::lookup(&rel.rbar[hi as usize], lo) };
            if acc != expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
