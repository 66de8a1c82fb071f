//! Relative KL theory: r- and p*-polynomials, the factorization through
//! T_x C_u, the right-handed a/b families, cell induction, and the
//! p*-independence under approx-equivalence.

use klcells_core::cells::{self, Side};
use klcells_core::grpring::Region;
use klcells_core::hecke::{Basis, HElem};
use klcells_core::parabolic::{self, RelKl};
use klcells_core::{Ctx, Elem, GenSet};

fn b2() -> Ctx {
    Ctx::specialized_b(2, 1, 3).unwrap()
}

fn all_isets(ctx: &Ctx) -> Vec<GenSet> {
    (0..1u32 << ctx.group().n_gens()).map(GenSet).collect()
}

#[test]
fn degenerate_parabolic_cases() {
    let ctx = b2();
    // I = S: X_I = {1}, and p* collapses to the absolute KL table
    let rel = parabolic::rel_kl(&ctx, ctx.full_gens()).unwrap();
    for w in 0..8 {
        assert_eq!(&rel.basis_t[w as usize], &ctx.kl_elem(w));
        assert!(rel.pstar[w as usize].is_empty());
        assert!(rel.rbar[w as usize].is_empty());
    }
    // I = empty: T_x C_1 = T_x, so p* is the absolute KL table and r
    // the absolute R*-polynomials
    let rel0 = parabolic::rel_kl(&ctx, GenSet::empty()).unwrap();
    for w in 0..8 {
        assert_eq!(&rel0.basis_t[w as usize], &ctx.t_elem(w));
        for y in 0..8 {
            assert_eq!(rel0.p(&ctx, y, w), ctx.kl_poly(y, w));
            assert_eq!(
                rel0.r(&ctx, y, w).bar(),
                ctx.bar_t_table()[w as usize].coeff(y)
            );
        }
    }
}

#[test]
fn factorization_reproduces_kl_elements() {
    // sum of p*_{xu,yv} T_x C_u equals C_{yv}, for every I
    for ctx in [b2(), Ctx::equal_a(2, 1).unwrap()] {
        for iset in all_isets(&ctx) {
            let rel = parabolic::rel_kl(&ctx, iset).unwrap();
            for w in 0..ctx.size() as Elem {
                assert_eq!(
                    rel.factorization(&ctx, w),
                    ctx.kl_elem(w),
                    "I={iset:?} w={w}"
                );
            }
        }
    }
}

#[test]
fn pstar_support_and_negativity() {
    // KL1/KL2 and the Bruhat support bound
    let ctx = b2();
    for iset in all_isets(&ctx) {
        let rel = parabolic::rel_kl(&ctx, iset).unwrap();
        let g = ctx.group();
        for hi in 0..8 {
            for (lo, p) in &rel.pstar[hi as usize] {
                assert!(p.is_in(Region::Neg));
                assert!(g.bruhat_leq(*lo, hi), "support outside Bruhat");
                assert!(g.len(*lo) < g.len(hi));
                // the order constraint: x < y in Bruhat and u <=_{L,I} v
                let (x, u) = g.coset_decompose_left(*lo, iset);
                let (y, v) = g.coset_decompose_left(hi, iset);
                assert!(g.bruhat_leq(x, y));
                let pre = cells::preorder(&ctx, Side::L, iset);
                assert!(pre.leq(u, v));
            }
        }
    }
}

#[test]
fn r_identity_term_by_term_b2() {
    // the displayed expansion of bar(T_y C_v) through absolute
    // R*-polynomials, ptilde and W_I structure constants
    let ctx = b2();
    assert!(parabolic::rpol_identity_check(&ctx, GenSet::from_indices(&[1])).unwrap());
    assert!(parabolic::rpol_identity_check(&ctx, GenSet::from_indices(&[0])).unwrap());
}

#[test]
fn r_support_bound() {
    let ctx = b2();
    let g = ctx.group();
    for iset in all_isets(&ctx) {
        let rel = parabolic::rel_kl(&ctx, iset).unwrap();
        for hi in 0..8 {
            for (lo, r) in &rel.rbar[hi as usize] {
                assert!(!r.is_zero());
                assert!(g.len(*lo) < g.len(hi), "r-support violates the length bound");
            }
        }
    }
}

#[test]
fn base_changes_invert_each_other() {
    for ctx in [b2(), Ctx::specialized_b(3, 1, 3).unwrap()] {
        for iset in all_isets(&ctx) {
            let rel = parabolic::rel_kl(&ctx, iset).unwrap();
            assert!(
                parabolic::base_changes_mutually_inverse(&ctx, &rel).unwrap(),
                "I = {iset:?}"
            );
        }
    }
}

#[test]
fn ab_mirror_and_expansions() {
    let ctx = b2();
    let g = ctx.group();
    for iset in all_isets(&ctx) {
        let ab = parabolic::ab_coeffs(&ctx, iset).unwrap();
        let rel = parabolic::rel_kl(&ctx, iset).unwrap();
        // a_{ux,vy} = p*_{(ux)^-1,(vy)^-1}
        for lo in 0..8 {
            for hi in 0..8 {
                assert_eq!(
                    ab.a_coeff(&ctx, lo, hi),
                    rel.p(&ctx, g.inv(lo), g.inv(hi))
                );
            }
        }
        // diagonal normalization
        for w in 0..8 {
            assert_eq!(ab.a_coeff(&ctx, w, w), ctx.one());
            assert_eq!(ab.b_coeff(&ctx, w, w), ctx.one());
        }
        // C_{vy} = sum a_{ux,vy} C_u T_x
        for hi in 0..8 {
            let mut acc = HElem::zero(Basis::T);
            for lo in 0..8 {
                let a = ab.a_coeff(&ctx, lo, hi);
                if a.is_zero() {
                    continue;
                }
                let (u, x) = g.coset_decompose_right(lo, iset);
                let part = ctx.t_mul_elem_right(&ctx.kl_elem(u), x);
                acc.add_scaled(&part, &a);
            }
            assert_eq!(acc, ctx.kl_elem(hi), "a-expansion at {hi}");
        }
        // C_v T_y = sum b_{ux,vy} C_{ux}
        for hi in 0..8 {
            let (v, y) = g.coset_decompose_right(hi, iset);
            let lhs = ctx.t_mul_elem_right(&ctx.kl_elem(v), y);
            let mut acc = HElem::zero(Basis::T);
            for lo in 0..8 {
                let b = ab.b_coeff(&ctx, lo, hi);
                if !b.is_zero() {
                    acc.add_scaled(&ctx.kl_elem(lo), &b);
                }
            }
            assert_eq!(acc, lhs, "b-expansion at {hi}");
        }
    }
}

#[test]
fn right1_convolution_identity_b2() {
    // h_{w,vy,ux} = sum a_{u'x1,vy} h_{w,u',u1} b_{ux,u1x1}
    let ctx = b2();
    let g = ctx.group();
    let iset = GenSet::from_indices(&[1]);
    let ab = parabolic::ab_coeffs(&ctx, iset).unwrap();
    let members = g.parabolic_members(iset);
    let ys = g.y_set(iset);
    for &w in &members {
        for hi in 0..8 {
            for lo in 0..8 {
                let mut acc = klcells_core::grpring::AElem::zero();
                for &u1 in &members {
                    for &x1 in &ys {
                        let mid = g.mul(u1, x1);
                        let b = ab.b_coeff(&ctx, lo, mid);
                        if b.is_zero() {
                            continue;
                        }
                        for &up in &members {
                            let a = ab.a_coeff(&ctx, g.mul(up, x1), hi);
                            if a.is_zero() {
                                continue;
                            }
                            let h = ctx.h_coeff(w, up, u1);
                            if h.is_zero() {
                                continue;
                            }
                            acc.add_assign(&a.mul(&h).mul(&b));
                        }
                    }
                }
                assert_eq!(acc, ctx.h_coeff(w, hi, lo), "w={w} vy={hi} ux={lo}");
            }
        }
    }
}

#[test]
fn lema23_and_propa21() {
    for ctx in [b2(), Ctx::specialized_b(3, 1, 3).unwrap()] {
        let g = ctx.group();
        let n = ctx.size() as Elem;
        for iset in all_isets(&ctx) {
            let prel = cells::preorder(&ctx, Side::L, iset);
            let prelr = cells::preorder(&ctx, Side::LR, iset);
            let members = g.parabolic_members(iset);
            let ys = g.y_set(iset);
            // uy <=_{L,I} vy iff u <=_{L,I} v
            for &u in &members {
                for &v in &members {
                    for &y in &ys {
                        let uy = g.mul(u, y);
                        let vy = g.mul(v, y);
                        assert_eq!(prel.leq(uy, vy), prel.leq(u, v));
                    }
                }
            }
            // ux <=_{L,I} vy forces u <=_{LR,I} v and x <= y
            for w in 0..n {
                let (u, x) = g.coset_decompose_right(w, iset);
                for wp in 0..n {
                    let (v, y) = g.coset_decompose_right(wp, iset);
                    if prel.leq(w, wp) {
                        assert!(prelr.leq(u, v));
                        assert!(g.bruhat_leq(x, y));
                        if prel.leq(wp, w) {
                            assert_eq!(x, y);
                            assert!(prel.leq(u, v) && prel.leq(v, u));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn induce_trivial_cell() {
    let ctx = b2();
    let g = ctx.group();
    for iset in all_isets(&ctx) {
        let rep = parabolic::induce_cell(&ctx, iset, &[g.id()]).unwrap();
        assert_eq!(rep.set, g.x_set(iset));
        assert!(rep.union_of_left_cells);
        assert!(rep.intertwines);
        assert!(rep.delta_twist_ok);
    }
}

#[test]
fn induce_s1_cell_in_b2() {
    let ctx = b2();
    let g = ctx.group();
    let iset = GenSet::from_indices(&[1]);
    let rep = parabolic::induce_cell(&ctx, iset, &[g.gen_elem(1)]).unwrap();
    assert_eq!(rep.set.len(), 4);
    assert!(rep.union_of_left_cells);
    assert!(rep.intertwines);
    assert!(rep.delta_twist_ok);
    // not a left cell of W_I: usage error
    assert!(parabolic::induce_cell(&ctx, iset, &[g.gen_elem(0)]).is_err());
}

#[test]
fn induce_all_cells_b3_one_parabolic() {
    let ctx = Ctx::specialized_b(3, 1, 3).unwrap();
    let iset = GenSet::from_indices(&[1, 2]);
    for cell in cells::parabolic_cells(&ctx, Side::L, iset) {
        let rep = parabolic::induce_cell(&ctx, iset, &cell).unwrap();
        assert!(rep.union_of_left_cells);
        assert!(rep.intertwines);
        assert!(rep.delta_twist_ok);
    }
}

#[test]
fn indep_identity_bijection() {
    let ctx = b2();
    let iset = GenSet::from_indices(&[1]);
    let sub = cells::parabolic_cells(&ctx, Side::L, iset);
    for cell in &sub {
        let bij: Vec<(Elem, Elem)> = cell.iter().map(|&w| (w, w)).collect();
        let rep = parabolic::check_indep(&ctx, iset, cell, cell, &bij).unwrap();
        assert!(rep.heart_ok && rep.pstar_match && rep.induced_approx && rep.cellwise);
    }
}

#[test]
fn indep_s3_inside_b3() {
    // I = {s1, s2} in B3: the two shape-(2,1) cells of S3 satisfy the
    // p*-independence through their heart bijection
    let ctx = Ctx::specialized_b(3, 1, 3).unwrap();
    let iset = GenSet::from_indices(&[1, 2]);
    let sub = cells::parabolic_cells(&ctx, Side::L, iset);
    let twos: Vec<Vec<Elem>> = sub.iter().filter(|c| c.len() == 2).cloned().collect();
    assert_eq!(twos.len(), 2);
    let bij = cells::find_heart_bijection(&ctx, &twos[0], &twos[1], iset)
        .unwrap()
        .expect("classical RS pairing");
    let rep = parabolic::check_indep(&ctx, iset, &twos[0], &twos[1], &bij).unwrap();
    assert!(rep.heart_ok, "precondition");
    assert!(rep.pstar_match, "mismatches: {:?}", rep.pstar_mismatches);
    assert!(rep.induced_approx);
    assert!(rep.cellwise);
}

#[test]
fn indep_s4_in_itself() {
    // I = S in S4, the three shape-(2,1,1) cells: p*-agreement is the
    // degenerate statement (X_I = {1}) but exercises the scan
    let ctx = Ctx::equal_a(3, 1).unwrap();
    let iset = ctx.full_gens();
    let sub = cells::parabolic_cells(&ctx, Side::L, iset);
    let g = ctx.group();
    let shape_of = |w: Elem| {
        klcells_core::typeb::tableau_shape(
            &klcells_core::typeb::rs_classical(g.window(w).unwrap()).1,
        )
    };
    let target: Vec<Vec<Elem>> =
        sub.into_iter().filter(|c| shape_of(c[0]) == vec![2, 1, 1]).collect();
    assert_eq!(target.len(), 3);
    for a in &target {
        for b in &target {
            let bij = cells::find_heart_bijection(&ctx, a, b, iset).unwrap().unwrap();
            let rep = parabolic::check_indep(&ctx, iset, a, b, &bij).unwrap();
            assert!(rep.heart_ok && rep.pstar_match && rep.induced_approx && rep.cellwise);
        }
    }
}

#[test]
fn indep_reports_failed_precondition() {
    // a wrong bijection between inequivalent cells reports a heart
    // failure instead of crashing
    let ctx = b2();
    let iset = GenSet::from_indices(&[1]);
    let sub = cells::parabolic_cells(&ctx, Side::L, iset);
    let a = &sub[0];
    let b = &sub[1];
    let bij: Vec<(Elem, Elem)> = vec![(a[0], b[0])];
    let rep = parabolic::check_indep(&ctx, iset, a, b, &bij).unwrap();
    assert!(!rep.heart_ok);
}

#[test]
fn relkl_lookup_helper() {
    let ctx = b2();
    let rel: std::sync::Arc<RelKl> =
        parabolic::rel_kl(&ctx, GenSet::from_indices(&[0])).unwrap();
    assert_eq!(rel.p(&ctx, 3, 3), ctx.one());
    assert_eq!(rel.r(&ctx, 3, 3), ctx.one());
}
