//! Per-(group, weight function) computation context.
//!
//! A [`Ctx`] owns the Coxeter group, the weight function, and every
//! derived table (bar involution, KL basis, structure constants, cell
//! partitions, ...). Tables are built lazily, exactly once, and are
//! immutable afterwards; `&Ctx` is freely shareable across threads.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::cells::{AFnData, CellPartition, Preorder, Side};
use crate::coxeter::{CoxeterGroup, CoxeterType, Elem, GenSet};
use crate::error::{Error, Result};
use crate::grpring::{AElem, Exponent, WeightFunction};
use crate::hecke::HElem;
use crate::jring::{JRingData, SchurData};
use crate::parabolic::RelKl;
use crate::typeb::{BInvariants, CellDatum, EBasis};

/// Sparse coefficient vector over group elements, sorted by element id.
pub type SparseVec = Vec<(Elem, AElem)>;

pub struct Ctx {
    pub(crate) g: CoxeterGroup,
    pub(crate) wt: WeightFunction,
    pub(crate) bar_t_tab: OnceLock<Vec<HElem>>,
    pub(crate) kl_tab: OnceLock<Vec<SparseVec>>,
    pub(crate) kl_inv_tab: OnceLock<Vec<SparseVec>>,
    pub(crate) cmul_tab: OnceLock<Vec<Vec<SparseVec>>>,
    /// indexed [y][x]: C-coordinates of C_x C_y
    pub(crate) h_tab: OnceLock<Vec<Vec<SparseVec>>>,
    pub(crate) dual_d_tab: OnceLock<Vec<HElem>>,
    pub(crate) preorder_cache: Mutex<HashMap<(Side, u32), Arc<Preorder>>>,
    pub(crate) partition_cache: Mutex<HashMap<(Side, u32), Arc<CellPartition>>>,
    pub(crate) afn_cache: OnceLock<Arc<AFnData>>,
    pub(crate) relkl_cache: Mutex<HashMap<u32, Arc<RelKl>>>,
    pub(crate) ebasis_cache: OnceLock<Arc<EBasis>>,
    pub(crate) binv_cache: OnceLock<Arc<BInvariants>>,
    pub(crate) schur_cache: OnceLock<Arc<SchurData>>,
    pub(crate) jring_cache: OnceLock<Arc<JRingData>>,
    pub(crate) datum_cache: OnceLock<Arc<CellDatum>>,
}

impl Ctx {
    pub fn new(g: CoxeterGroup, wt: WeightFunction) -> Result<Self> {
        if wt.n_gens() != g.n_gens() {
            return Err(Error::usage(format!(
                "weight function covers {} generators, group has {}",
                wt.n_gens(),
                g.n_gens()
            )));
        }
        // re-validate conjugacy invariance against this group's diagram
        WeightFunction::new(
            (0..g.n_gens()).map(|s| wt.l(s).clone()).collect(),
            &g.gen_conj_classes(),
        )?;
        Ok(Ctx {
            g,
            wt,
            bar_t_tab: OnceLock::new(),
            kl_tab: OnceLock::new(),
            kl_inv_tab: OnceLock::new(),
            cmul_tab: OnceLock::new(),
            h_tab: OnceLock::new(),
            dual_d_tab: OnceLock::new(),
            preorder_cache: Mutex::new(HashMap::new()),
            partition_cache: Mutex::new(HashMap::new()),
            afn_cache: OnceLock::new(),
            relkl_cache: Mutex::new(HashMap::new()),
            ebasis_cache: OnceLock::new(),
            binv_cache: OnceLock::new(),
            schur_cache: OnceLock::new(),
            jring_cache: OnceLock::new(),
            datum_cache: OnceLock::new(),
        })
    }

    /// Type B_n with the generic two-parameter weights over Gamma = Z^2:
    /// L(t) = (1,0), L(s_i) = (0,1).
    pub fn generic_b(rank: usize) -> Result<Self> {
        let g = CoxeterGroup::new(CoxeterType::B { rank })?;
        let mut per_gen = vec![Exponent::new(&[1, 0])];
        per_gen.extend((1..rank).map(|_| Exponent::new(&[0, 1])));
        let wt = WeightFunction::new(per_gen, &g.gen_conj_classes())?;
        Ctx::new(g, wt)
    }

    /// Type B_n over Gamma = Z with L(t) = b, L(s_i) = a.
    pub fn specialized_b(rank: usize, a: i32, b: i32) -> Result<Self> {
        if a <= 0 || b <= 0 {
            return Err(Error::usage("weights a, b must be positive"));
        }
        let g = CoxeterGroup::new(CoxeterType::B { rank })?;
        let mut per_gen = vec![Exponent::new(&[b])];
        per_gen.extend((1..rank).map(|_| Exponent::new(&[a])));
        let wt = WeightFunction::new(per_gen, &g.gen_conj_classes())?;
        Ctx::new(g, wt)
    }

    /// Type A_{rank} (the symmetric group S_{rank+1}) with equal
    /// parameters L(s_i) = a over Gamma = Z.
    pub fn equal_a(rank: usize, a: i32) -> Result<Self> {
        if a <= 0 {
            return Err(Error::usage("weight a must be positive"));
        }
        let g = CoxeterGroup::new(CoxeterType::A { rank })?;
        let wt =
            WeightFunction::new(vec![Exponent::new(&[a]); rank], &g.gen_conj_classes())?;
        Ctx::new(g, wt)
    }

    /// Dihedral I2(m) with weights (a for s0, b for s1); m odd forces a = b.
    pub fn dihedral(m: usize, a: i32, b: i32) -> Result<Self> {
        if a <= 0 || b <= 0 {
            return Err(Error::usage("weights must be positive"));
        }
        let g = CoxeterGroup::new(CoxeterType::I2 { m })?;
        let wt = WeightFunction::new(
            vec![Exponent::new(&[a]), Exponent::new(&[b])],
            &g.gen_conj_classes(),
        )?;
        Ctx::new(g, wt)
    }

    pub fn group(&self) -> &CoxeterGroup {
        &self.g
    }

    pub fn weights(&self) -> &WeightFunction {
        &self.wt
    }

    pub fn size(&self) -> usize {
        self.g.size()
    }

    pub fn arity(&self) -> usize {
        self.wt.arity()
    }

    pub fn one(&self) -> AElem {
        AElem::one(self.arity())
    }

    /// The asymptotic bound for type B_n: L(t) > (n-1) L(s_1).
    pub fn is_asymptotic_b(&self) -> bool {
        match self.g.ctype() {
            CoxeterType::B { rank } => {
                *self.wt.l(0) > self.wt.l(1).scale(rank as i32 - 1)
            }
            _ => false,
        }
    }

    pub fn require_asymptotic_b(&self) -> Result<()> {
        match self.g.ctype() {
            CoxeterType::B { rank } => {
                if self.is_asymptotic_b() {
                    Ok(())
                } else {
                    Err(Error::usage(format!(
                        "weights are not asymptotic for B_{rank}: need L(t) > {} L(s1)",
                        rank - 1
                    )))
                }
            }
            _ => Err(Error::usage("asymptotic structure requires type B")),
        }
    }

    pub fn full_gens(&self) -> GenSet {
        GenSet::full(self.g.n_gens())
    }

    /// Pre-load a KL table (cache restore path). Ignored if the table
    /// has already been built.
    pub fn install_kl(&self, table: Vec<SparseVec>) -> Result<()> {
        if table.len() != self.size() {
            return Err(Error::usage("KL table size mismatch"));
        }
        let _ = self.kl_tab.set(table);
        Ok(())
    }

    pub fn install_h_table(&self, table: Vec<Vec<SparseVec>>) -> Result<()> {
        if table.len() != self.size() || table.iter().any(|c| c.len() != self.size()) {
            return Err(Error::usage("h-table size mismatch"));
        }
        let _ = self.h_tab.set(table);
        Ok(())
    }

    /// Geometry-independent helper: fetch from a OnceLock or build.
    pub(crate) fn get_or_build<T, F: FnOnce() -> Result<T>>(
        cell: &OnceLock<T>,
        build: F,
    ) -> Result<&T> {
        if let Some(v) = cell.get() {
            return Ok(v);
        }
        let v = build()?;
        // A racing thread may have set the cell in the meantime; either
        // value is identical, so keep whichever landed first.
        let _ = cell.set(v);
        Ok(cell.get().expect("cell was just filled"))
    }
}
