//! Asymptotic type-B checks: the a_l elements and the four-factor
//! decomposition, the generalized RS invariant against the computed
//! left cells, the E-basis tables, the strong description of the left
//! preorder, and the cellular structure of the C-basis.

use klcells_core::cells::{self, Side};
use klcells_core::grpring::Region;
use klcells_core::hecke::{expand_unitriangular, Basis, HElem};
use klcells_core::typeb::{self, Bipartition};
use klcells_core::{Ctx, Elem, GenSet};

fn b2() -> Ctx {
    Ctx::specialized_b(2, 1, 3).unwrap()
}

fn b3() -> Ctx {
    Ctx::specialized_b(3, 1, 3).unwrap()
}

#[test]
fn t_length_and_a_l() {
    let ctx = b3();
    let g = ctx.group();
    assert_eq!(typeb::a_l_elem(g, 0).unwrap(), g.id());
    assert_eq!(typeb::a_l_elem(g, 1).unwrap(), g.gen_elem(0));
    // a_2 = t s1 t, an involution of t-length 2
    let a2 = typeb::a_l_elem(g, 2).unwrap();
    assert_eq!(a2, g.from_word(&[0, 1, 0]));
    assert_eq!(typeb::t_length(g, a2).unwrap(), 2);
    for l in 0..=3 {
        let al = typeb::a_l_elem(g, l).unwrap();
        assert_eq!(g.inv(al), al, "a_l is an involution");
        assert_eq!(typeb::t_length(g, al).unwrap() as usize, l);
    }
    assert!(typeb::a_l_elem(g, 4).is_err());
    // t-length equals the t-count of reduced words (checked over B3)
    for w in 0..g.size() as Elem {
        let count = g.rword(w).iter().filter(|&&s| s == 0).count();
        assert_eq!(typeb::t_length(g, w).unwrap() as usize, count);
    }
}

#[test]
fn bi_decompose_examples() {
    let ctx = b2();
    let g = ctx.group();
    // w in the symmetric part: l = 0, a_w = 1
    let s1 = g.gen_elem(1);
    let d = typeb::bi_decompose(g, s1).unwrap();
    assert_eq!((d.a_w, d.l), (g.id(), 0));
    // w = s1 t: a_w = s1, l = 1, sigma = 1, b = 1
    let w = g.from_word(&[1, 0]);
    let d = typeb::bi_decompose(g, w).unwrap();
    assert_eq!(d, typeb::BDecomp { a_w: s1, l: 1, sigma: g.id(), b_w: g.id() });
    // w0 = a_2 sigma with sigma = s1
    let d = typeb::bi_decompose(g, g.longest_elem()).unwrap();
    assert_eq!(d, typeb::BDecomp { a_w: g.id(), l: 2, sigma: s1, b_w: g.id() });
}

#[test]
fn bi_decompose_unique_and_length_additive() {
    for ctx in [b2(), b3()] {
        let g = ctx.group();
        let mut seen = std::collections::HashSet::new();
        for w in 0..g.size() as Elem {
            let d = typeb::bi_decompose(g, w).unwrap();
            let al = typeb::a_l_elem(g, d.l).unwrap();
            assert_eq!(typeb::reassemble(g, &d).unwrap(), w);
            assert_eq!(
                g.len(w),
                g.len(d.a_w) + g.len(al) + g.len(d.sigma) + g.len(d.b_w),
                "length additivity at {w}"
            );
            assert!(seen.insert((d.a_w, d.l, d.sigma, d.b_w)));
        }
    }
}

#[test]
fn rs_classical_examples() {
    // identity -> single row
    let (p, q) = typeb::rs_classical(&[1, 2, 3]);
    assert_eq!(p, vec![vec![1, 2, 3]]);
    assert_eq!(q, vec![vec![1, 2, 3]]);
    // decreasing word -> single column
    let (p, q) = typeb::rs_classical(&[3, 2, 1]);
    assert_eq!(p, vec![vec![1], vec![2], vec![3]]);
    assert_eq!(q, vec![vec![1], vec![2], vec![3]]);
    // Q(pi) = P(pi^-1) over all of S4
    let ctx = Ctx::equal_a(3, 1).unwrap();
    let g = ctx.group();
    for w in 0..g.size() as Elem {
        let (p, q) = typeb::rs_classical(g.window(w).unwrap());
        let (pi, qi) = typeb::rs_classical(g.window(g.inv(w)).unwrap());
        assert_eq!(q, pi);
        assert_eq!(p, qi);
        assert_eq!(typeb::tableau_shape(&p), typeb::tableau_shape(&q));
    }
}

#[test]
fn invariant_classes_are_left_cells() {
    for ctx in [b2(), b3()] {
        let inv = typeb::invariants(&ctx).unwrap();
        let part = cells::cell_partition(&ctx, Side::L, ctx.full_gens());
        let n = ctx.size() as Elem;
        for x in 0..n {
            for y in 0..n {
                assert_eq!(
                    inv.b_tab[x as usize] == inv.b_tab[y as usize],
                    part.same_cell(x, y),
                    "x={x} y={y}"
                );
            }
        }
        // right cells via A(w)
        let rpart = cells::cell_partition(&ctx, Side::R, ctx.full_gens());
        for x in 0..n {
            for y in 0..n {
                assert_eq!(
                    inv.a_tab[x as usize] == inv.a_tab[y as usize],
                    rpart.same_cell(x, y)
                );
            }
        }
    }
}

#[test]
fn bipartition_labels() {
    let ctx = b2();
    let g = ctx.group();
    // identity: ((n), empty)
    assert_eq!(
        typeb::bipartition_label(&ctx, g.id()).unwrap(),
        Bipartition { first: vec![2], second: vec![] }
    );
    // w0 of B2: (empty, (1,1))
    assert_eq!(
        typeb::bipartition_label(&ctx, g.longest_elem()).unwrap(),
        Bipartition { first: vec![], second: vec![1, 1] }
    );
    // labels constant on two-sided cells, |lambda_2| = l_t
    let part = cells::cell_partition(&ctx, Side::LR, ctx.full_gens());
    for x in 0..8 {
        let lx = typeb::bipartition_label(&ctx, x).unwrap();
        assert_eq!(
            lx.second.iter().sum::<usize>(),
            typeb::t_length(g, x).unwrap() as usize
        );
        for y in 0..8 {
            let ly = typeb::bipartition_label(&ctx, y).unwrap();
            assert_eq!(lx == ly, part.same_cell(x, y));
        }
    }
}

#[test]
fn asymptotic_guard() {
    // (a,b) = (1,1) violates b > (n-1)a in rank 2? 1 > 1 fails
    let flat = Ctx::specialized_b(2, 1, 1).unwrap();
    assert!(!flat.is_asymptotic_b());
    assert!(typeb::invariants(&flat).is_err());
    assert!(typeb::check_strong_l(&flat).is_err());
    assert!(typeb::cell_datum(&flat).is_err());
    // generic weights are always asymptotic
    assert!(Ctx::generic_b(3).unwrap().is_asymptotic_b());
    // in rank 3, (1,3) is asymptotic but (1,2) is not
    assert!(Ctx::specialized_b(3, 1, 3).unwrap().is_asymptotic_b());
    assert!(!Ctx::specialized_b(3, 1, 2).unwrap().is_asymptotic_b());
}

#[test]
fn e_basis_reduces_to_c_on_symmetric_part() {
    let ctx = b2();
    let g = ctx.group();
    let eb = typeb::e_basis(&ctx).unwrap();
    for w in 0..8 {
        if typeb::t_length(g, w).unwrap() == 0 {
            assert_eq!(&eb.e_t[w as usize], &ctx.kl_elem(w));
        }
    }
}

#[test]
fn lem_c1_products() {
    for ctx in [b2(), b3()] {
        let g = ctx.group();
        let rank = g.n_gens();
        let sn: Vec<Elem> = g.parabolic_members(GenSet::from_indices(
            &(1..rank).collect::<Vec<_>>(),
        ));
        for l in 0..=rank {
            let al = typeb::a_l_elem(g, l).unwrap();
            let cal = ctx.kl_elem(al);
            for &sigma in &sn {
                let lhs = ctx.t_mul(&ctx.kl_elem(sigma), &cal).unwrap();
                assert_eq!(lhs, ctx.kl_elem(g.mul(sigma, al)), "C_sigma C_al");
                let rhs = ctx.t_mul(&cal, &ctx.kl_elem(sigma)).unwrap();
                assert_eq!(rhs, ctx.kl_elem(g.mul(al, sigma)), "C_al C_sigma");
                // refined form inside the Young subgroup
                if g.is_in_parabolic(sigma, typeb::sigma_subset(rank, l)) {
                    let conj = g.mul(al, g.mul(sigma, al));
                    assert!(g.is_in_parabolic(conj, typeb::sigma_subset(rank, l)));
                    let other = ctx.t_mul(&cal, &ctx.kl_elem(conj)).unwrap();
                    assert_eq!(lhs, other);
                }
            }
        }
    }
}

#[test]
fn lem_c2_expansion() {
    // T_{t s1 ... s_l} C_{a_l} = C_{a_{l+1}} + h(a_l) C_{a_l} with h
    // supported on T_pi, pi <= s1...s_l
    for ctx in [b2(), b3()] {
        let g = ctx.group();
        let rank = g.n_gens();
        for l in 0..rank {
            let al = typeb::a_l_elem(g, l).unwrap();
            let alp = typeb::a_l_elem(g, l + 1).unwrap();
            let mut word = vec![0usize];
            word.extend(1..=l);
            let tsl = g.from_word(&word);
            let lhs = ctx.t_mul_elem_left(tsl, &ctx.kl_elem(al));
            let mut rem = lhs.sub(&ctx.kl_elem(alp));
            // eliminate against the family T_pi C_{a_l}
            let smax = g.from_word(&(1..=l).collect::<Vec<_>>());
            while let Some((u, coef)) = rem.pop_max() {
                // u must factor as pi * a_l with pi <= s1...s_l
                let pi = g.mul(u, al);
                assert_eq!(g.len(u), g.len(pi) + g.len(al), "leading term {u}");
                assert!(g.bruhat_leq(pi, smax), "support of h(a_l) at {pi}");
                let col = ctx.t_mul_elem_left(pi, &ctx.kl_elem(al));
                rem.add_scaled(&col, &coef.neg());
                rem.add_term(u, coef);
                let c2 = rem.coeff(u);
                assert!(c2.is_zero());
            }
        }
    }
}

#[test]
fn lambda_and_pi_support() {
    // lambda in Z[q,q^-1], pi in q^-1 Z[q^-1] (generic weights: only
    // v-powers appear), and pi vanishes off the preceq order
    let ctx = Ctx::generic_b(2).unwrap();
    let eb = typeb::e_basis(&ctx).unwrap();
    for w in 0..8 {
        for (y, lam) in &eb.lambda[w as usize] {
            assert!(
                lam.terms().iter().all(|(e, _)| e.coords()[0] == 0),
                "lambda_{{{y},{w}}} = {lam} leaves Z[q,q^-1]"
            );
            assert!(typeb::preceq(&ctx, *y, w).unwrap(), "lambda support off-order");
        }
        for (y, pi) in &eb.pi[w as usize] {
            assert!(pi.is_in(Region::Neg));
            assert!(
                pi.terms().iter().all(|(e, _)| e.coords()[0] == 0),
                "pi_{{{y},{w}}} = {pi} leaves q^-1 Z[q^-1]"
            );
            assert!(typeb::preceq(&ctx, *y, w).unwrap(), "pi support off-order");
        }
    }
}

#[test]
fn c_in_e_basis_matches_pi() {
    // direct unitriangular expansion of C_w over {E_y} equals the
    // solved pi-table
    for ctx in [Ctx::generic_b(2).unwrap(), b3()] {
        let eb = typeb::e_basis(&ctx).unwrap();
        for w in 0..ctx.size() as Elem {
            let exp = expand_unitriangular(&ctx.kl_elem(w), &eb.e_t);
            let mut expect: Vec<(Elem, klcells_core::grpring::AElem)> =
                eb.pi[w as usize].clone();
            expect.push((w, ctx.one()));
            expect.sort_by_key(|(e, _)| *e);
            let exp: Vec<_> = exp.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            assert_eq!(exp, expect, "w={w}");
        }
    }
}

#[test]
fn lem_c3_c4_support() {
    let ctx = b2();
    let g = ctx.group();
    let eb = typeb::e_basis(&ctx).unwrap();
    for w in 0..8 {
        let lw = typeb::t_length(g, w).unwrap();
        for s in 0..2 {
            let prod = {
                let cs = ctx.kl_elem(g.gen_elem(s));
                ctx.t_mul(&cs, &eb.e_t[w as usize]).unwrap()
            };
            let exp = expand_unitriangular(&prod, &eb.e_t);
            for (z, c) in exp {
                if c.is_zero() {
                    continue;
                }
                let lz = typeb::t_length(g, z).unwrap();
                if s != 0 {
                    assert_eq!(lz, lw, "C_s raises no t-length");
                    assert!(same_stratum_descent(&ctx, z, w));
                } else {
                    assert!(
                        lz > lw || (lz == lw && same_stratum_descent(&ctx, z, w)),
                        "C_t support at z={z} w={w}"
                    );
                }
            }
        }
    }
}

fn same_stratum_descent(ctx: &Ctx, z: Elem, w: Elem) -> bool {
    let g = ctx.group();
    let dz = typeb::bi_decompose(g, z).unwrap();
    let dw = typeb::bi_decompose(g, w).unwrap();
    if dz.l != dw.l {
        return false;
    }
    let pre = cells::preorder(ctx, Side::L, typeb::sigma_subset(g.n_gens(), dz.l));
    pre.leq(g.mul(dz.sigma, g.inv(dz.b_w)), g.mul(dw.sigma, g.inv(dw.b_w)))
}

#[test]
fn strong_l_b2() {
    let rep = typeb::check_strong_l(&b2()).unwrap();
    assert!(rep.pass, "failures: {:?}", rep.failures);
    assert!(rep.two_sided_projection_ok);
    assert!(rep.two_cells_ok);
}

#[test]
fn cell_datum_b2_counts() {
    let ctx = b2();
    let datum = typeb::cell_datum(&ctx).unwrap();
    assert_eq!(datum.lambdas.len(), 5);
    let total: usize = datum.tableaux.iter().map(|t| t.len() * t.len()).sum();
    assert_eq!(total, 8);
    let rep = typeb::verify_cell_axioms(&ctx, &datum).unwrap();
    assert!(rep.c1 && rep.c2 && rep.c3);
    assert!(rep.c3_cases > 0);
}

#[test]
fn standard_bitableaux_counts() {
    // |T_lambda| = C(n,l) f(lambda1) f(lambda2)
    let shape = Bipartition { first: vec![1], second: vec![1] };
    assert_eq!(typeb::standard_bitableaux(&shape).len(), 2);
    let shape = Bipartition { first: vec![2, 1], second: vec![] };
    assert_eq!(typeb::standard_bitableaux(&shape).len(), 2);
    let shape = Bipartition { first: vec![1, 1], second: vec![1] };
    assert_eq!(typeb::standard_bitableaux(&shape).len(), 3);
    let shape = Bipartition { first: vec![2], second: vec![1] };
    assert_eq!(typeb::standard_bitableaux(&shape).len(), 3);
}

#[test]
fn eqcellsb_unique_bijection() {
    // for cells inside one R_lambda, the right-cell matching passes and
    // is the only bijection that does
    let ctx = b2();
    let inv = typeb::invariants(&ctx).unwrap();
    let part = cells::cell_partition(&ctx, Side::L, ctx.full_gens());
    for a in &part.cells {
        for b in &part.cells {
            if inv.label[a[0] as usize] != inv.label[b[0] as usize] {
                continue;
            }
            let mut passing = 0;
            let mut perm: Vec<usize> = (0..b.len()).collect();
            loop {
                let bij: Vec<(Elem, Elem)> =
                    a.iter().zip(&perm).map(|(&x, &i)| (x, b[i])).collect();
                if cells::approx_check(&ctx, a, b, &bij, ctx.full_gens()).unwrap().pass {
                    passing += 1;
                }
                if !next_perm(&mut perm) {
                    break;
                }
            }
            assert_eq!(passing, 1, "exactly one heart bijection");
        }
    }
}

fn next_perm(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[test]
fn redbi_cell_times_b() {
    // c ~ c.b with the natural bijection, on B3
    let ctx = b3();
    let g = ctx.group();
    let part = cells::cell_partition(&ctx, Side::L, ctx.full_gens());
    for cell in &part.cells {
        let b = typeb::bi_decompose(g, cell[0]).unwrap().b_w;
        if b == g.id() {
            continue;
        }
        // all members share b
        for &w in cell.iter() {
            assert_eq!(typeb::bi_decompose(g, w).unwrap().b_w, b);
        }
        let bij: Vec<(Elem, Elem)> = cell.iter().map(|&w| (w, g.mul(w, b))).collect();
        let mut image: Vec<Elem> = bij.iter().map(|&(_, y)| y).collect();
        image.sort_unstable();
        // the image is a left cell
        assert_eq!(part.cell_containing(image[0]).to_vec(), image);
        let rep = cells::approx_check(&ctx, cell, &image, &bij, ctx.full_gens()).unwrap();
        assert!(rep.pass, "redbi failed");
    }
}

#[test]
fn theta_pipeline_consistency() {
    // generic and specialized (1,3) weights give identical partitions
    // and identical invariants at rank <= 3
    for rank in [2usize, 3] {
        let gctx = Ctx::generic_b(rank).unwrap();
        let sctx = Ctx::specialized_b(rank, 1, 3).unwrap();
        for side in [Side::L, Side::R, Side::LR] {
            let a = cells::cell_partition(&gctx, side, gctx.full_gens());
            let b = cells::cell_partition(&sctx, side, sctx.full_gens());
            assert_eq!(a.cells, b.cells);
            assert_eq!(a.order, b.order);
        }
        let ia = typeb::invariants(&gctx).unwrap();
        let ib = typeb::invariants(&sctx).unwrap();
        assert_eq!(ia.b_tab, ib.b_tab);
        assert_eq!(ia.label, ib.label);
    }
}
