//! Finite Coxeter systems of types A_{n-1}, B_n and I2(m).
//!
//! Elements are enumerated once per group (ordered by length, then
//! lexicographically on the canonical form) and afterwards handled as
//! dense `u32` indices; all group arithmetic is table lookups. The
//! canonical forms are signed-permutation windows for types A/B and
//! rotation/reflection pairs for dihedral groups.

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Index of a group element in the ambient group's enumeration.
pub type Elem = u32;

/// Default ceiling on |W| for enumeration.
pub const DEFAULT_MAX_ELEMENTS: usize = 10_080;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CoxeterType {
    /// A_{rank}: the symmetric group on rank+1 points.
    A { rank: usize },
    /// B_{rank}: signed permutations; generator 0 is t, then s_1..s_{rank-1}.
    B { rank: usize },
    /// The dihedral group I2(m) of order 2m.
    I2 { m: usize },
}

impl CoxeterType {
    pub fn n_gens(&self) -> usize {
        match *self {
            CoxeterType::A { rank } => rank,
            CoxeterType::B { rank } => rank,
            CoxeterType::I2 { .. } => 2,
        }
    }

    pub fn order(&self) -> Option<u128> {
        fn fact(n: usize) -> Option<u128> {
            (1..=n as u128).try_fold(1u128, |a, b| a.checked_mul(b))
        }
        match *self {
            CoxeterType::A { rank } => fact(rank + 1),
            CoxeterType::B { rank } => fact(rank)?.checked_mul(1u128.checked_shl(rank as u32)?),
            CoxeterType::I2 { m } => Some(2 * m as u128),
        }
    }

    /// Coxeter matrix entry m(i, j) for generator indices i != j.
    pub fn cox_m(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        match *self {
            CoxeterType::A { .. } => {
                if j == i + 1 {
                    3
                } else {
                    2
                }
            }
            CoxeterType::B { .. } => {
                if i == 0 && j == 1 {
                    4
                } else if j == i + 1 {
                    3
                } else {
                    2
                }
            }
            CoxeterType::I2 { m } => m,
        }
    }
}

/// Canonical normal form of a group element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum CanonForm {
    /// Signed window: entry i-1 holds w(i); all positive for type A.
    Window(Vec<i32>),
    /// rho^rot * sigma^refl with s = sigma, t = rho sigma.
    Dihedral { rot: u16, refl: bool },
}

impl CanonForm {
    fn identity(ct: CoxeterType) -> CanonForm {
        match ct {
            CoxeterType::A { rank } => CanonForm::Window((1..=rank as i32 + 1).collect()),
            CoxeterType::B { rank } => CanonForm::Window((1..=rank as i32).collect()),
            CoxeterType::I2 { .. } => CanonForm::Dihedral { rot: 0, refl: false },
        }
    }

    fn lmul_gen(&self, ct: CoxeterType, s: usize) -> CanonForm {
        match (self, ct) {
            (CanonForm::Window(w), CoxeterType::A { .. }) => {
                // generator index s is the transposition (s+1, s+2);
                // left multiplication swaps those values
                let (a, b) = (s as i32 + 1, s as i32 + 2);
                CanonForm::Window(
                    w.iter()
                        .map(|&v| {
                            if v == a {
                                b
                            } else if v == b {
                                a
                            } else {
                                v
                            }
                        })
                        .collect(),
                )
            }
            (CanonForm::Window(w), CoxeterType::B { .. }) => {
                if s == 0 {
                    // t flips the sign of the value +-1
                    CanonForm::Window(
                        w.iter().map(|&v| if v.abs() == 1 { -v } else { v }).collect(),
                    )
                } else {
                    let (a, b) = (s as i32, s as i32 + 1);
                    CanonForm::Window(
                        w.iter()
                            .map(|&v| {
                                if v.abs() == a {
                                    v.signum() * b
                                } else if v.abs() == b {
                                    v.signum() * a
                                } else {
                                    v
                                }
                            })
                            .collect(),
                    )
                }
            }
            (&CanonForm::Dihedral { rot, refl }, CoxeterType::I2 { m }) => {
                let m = m as i32;
                let (k, e) = (rot as i32, refl);
                // s = (0,1), t = (1,1); (k,1)(k',e') = (k-k', 1^e')
                let (nk, ne) = match s {
                    0 => ((-k).rem_euclid(m), !e),
                    _ => ((1 - k).rem_euclid(m), !e),
                };
                CanonForm::Dihedral { rot: nk as u16, refl: ne }
            }
            _ => unreachable!("canonical form does not match type"),
        }
    }

    fn rmul_gen(&self, ct: CoxeterType, s: usize) -> CanonForm {
        match (self, ct) {
            (CanonForm::Window(w), CoxeterType::A { .. }) => {
                let mut w = w.clone();
                w.swap(s, s + 1);
                CanonForm::Window(w)
            }
            (CanonForm::Window(w), CoxeterType::B { .. }) => {
                let mut w = w.clone();
                if s == 0 {
                    w[0] = -w[0];
                } else {
                    w.swap(s - 1, s);
                }
                CanonForm::Window(w)
            }
            (&CanonForm::Dihedral { rot, refl }, CoxeterType::I2 { m }) => {
                let m = m as i32;
                let (k, e) = (rot as i32, refl);
                let (nk, ne) = match (s, e) {
                    (0, false) => (k, true),
                    (0, true) => (k, false),
                    (_, false) => ((k + 1).rem_euclid(m), true),
                    (_, true) => ((k - 1).rem_euclid(m), false),
                };
                CanonForm::Dihedral { rot: nk as u16, refl: ne }
            }
            _ => unreachable!("canonical form does not match type"),
        }
    }

    fn inverse(&self, ct: CoxeterType) -> CanonForm {
        match (self, ct) {
            (CanonForm::Window(w), _) => {
                let mut out = vec![0i32; w.len()];
                for (i, &v) in w.iter().enumerate() {
                    let pos = v.unsigned_abs() as usize - 1;
                    out[pos] = if v > 0 { i as i32 + 1 } else { -(i as i32 + 1) };
                }
                CanonForm::Window(out)
            }
            (&CanonForm::Dihedral { rot, refl }, CoxeterType::I2 { m }) => {
                if refl {
                    CanonForm::Dihedral { rot, refl }
                } else {
                    CanonForm::Dihedral { rot: ((m - rot as usize) % m) as u16, refl }
                }
            }
            _ => unreachable!("canonical form does not match type"),
        }
    }
}

/// A subset of the generators, as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GenSet(pub u32);

impl GenSet {
    pub fn empty() -> Self {
        GenSet(0)
    }

    pub fn full(n_gens: usize) -> Self {
        GenSet((1u32 << n_gens) - 1)
    }

    pub fn from_indices(idx: &[usize]) -> Self {
        GenSet(idx.iter().fold(0, |m, &i| m | (1 << i)))
    }

    pub fn contains(self, s: usize) -> bool {
        self.0 & (1 << s) != 0
    }

    pub fn is_subset_of(self, other: GenSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&s| self.contains(s))
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn count(self) -> usize {
        self.0.count_ones() as usize
    }
}

/// A finite Coxeter group with all element tables precomputed.
pub struct CoxeterGroup {
    ctype: CoxeterType,
    n_gens: usize,
    size: usize,
    forms: Vec<CanonForm>,
    index: HashMap<CanonForm, Elem>,
    len: Vec<u32>,
    lmul_tab: Vec<Vec<Elem>>,
    rmul_tab: Vec<Vec<Elem>>,
    inv_tab: Vec<Elem>,
    ldesc: Vec<GenSet>,
    rdesc: Vec<GenSet>,
    rwords: Vec<Vec<u8>>,
    support: Vec<GenSet>,
    // bruhat[y] is a bitset over x with bit set iff x <= y
    bruhat: Vec<Vec<u64>>,
}

impl CoxeterGroup {
    pub fn new(ctype: CoxeterType) -> Result<Self> {
        Self::new_with_limit(ctype, DEFAULT_MAX_ELEMENTS)
    }

    pub fn new_with_limit(ctype: CoxeterType, max_elements: usize) -> Result<Self> {
        match ctype {
            CoxeterType::A { rank } if rank == 0 => {
                return Err(Error::usage("type A needs rank >= 1"))
            }
            CoxeterType::B { rank } if rank < 2 => {
                return Err(Error::usage("type B needs rank >= 2"))
            }
            CoxeterType::I2 { m } if m < 3 => {
                return Err(Error::usage("I2(m) needs m >= 3"))
            }
            _ => {}
        }
        let order = ctype
            .order()
            .filter(|&n| n <= max_elements as u128)
            .ok_or_else(|| {
                Error::Resource(format!(
                    "group order exceeds the configured limit of {max_elements} elements"
                ))
            })?;
        let size = order as usize;
        let n_gens = ctype.n_gens();

        // breadth-first enumeration from the identity
        let mut dist: HashMap<CanonForm, u32> = HashMap::new();
        let id_form = CanonForm::identity(ctype);
        dist.insert(id_form.clone(), 0);
        let mut frontier = vec![id_form];
        let mut d = 0u32;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for f in &frontier {
                for s in 0..n_gens {
                    let g = f.lmul_gen(ctype, s);
                    if !dist.contains_key(&g) {
                        dist.insert(g.clone(), d + 1);
                        next.push(g);
                    }
                }
            }
            frontier = next;
            d += 1;
        }
        if dist.len() != size {
            return Err(Error::internal(format!(
                "enumeration found {} elements, expected {}",
                dist.len(),
                size
            )));
        }

        let mut all: Vec<(u32, CanonForm)> = dist.into_iter().map(|(f, d)| (d, f)).collect();
        all.sort();
        let forms: Vec<CanonForm> = all.iter().map(|(_, f)| f.clone()).collect();
        let len: Vec<u32> = all.iter().map(|(d, _)| *d).collect();
        let index: HashMap<CanonForm, Elem> =
            forms.iter().enumerate().map(|(i, f)| (f.clone(), i as Elem)).collect();

        let lmul_tab: Vec<Vec<Elem>> = (0..n_gens)
            .map(|s| forms.iter().map(|f| index[&f.lmul_gen(ctype, s)]).collect())
            .collect();
        let rmul_tab: Vec<Vec<Elem>> = (0..n_gens)
            .map(|s| forms.iter().map(|f| index[&f.rmul_gen(ctype, s)]).collect())
            .collect();
        let inv_tab: Vec<Elem> = forms.iter().map(|f| index[&f.inverse(ctype)]).collect();

        let ldesc: Vec<GenSet> = (0..size)
            .map(|w| {
                GenSet(
                    (0..n_gens)
                        .filter(|&s| len[lmul_tab[s][w] as usize] < len[w])
                        .fold(0, |m, s| m | (1 << s)),
                )
            })
            .collect();
        let rdesc: Vec<GenSet> = (0..size)
            .map(|w| {
                GenSet(
                    (0..n_gens)
                        .filter(|&s| len[rmul_tab[s][w] as usize] < len[w])
                        .fold(0, |m, s| m | (1 << s)),
                )
            })
            .collect();

        // lexicographically smallest reduced words, built by length
        let mut rwords: Vec<Vec<u8>> = vec![Vec::new(); size];
        let mut support: Vec<GenSet> = vec![GenSet::empty(); size];
        let mut by_len: Vec<Elem> = (0..size as Elem).collect();
        by_len.sort_by_key(|&w| len[w as usize]);
        for &w in &by_len {
            let w = w as usize;
            if len[w] == 0 {
                continue;
            }
            let s = ldesc[w].iter().next().expect("non-identity element has a descent");
            let rest = lmul_tab[s][w] as usize;
            let mut word = vec![s as u8];
            word.extend_from_slice(&rwords[rest]);
            rwords[w] = word;
            support[w] = GenSet(support[rest].0 | (1 << s));
        }

        // Bruhat order by the lifting property, bottom-up in length
        let words_per_row = size.div_ceil(64);
        let mut bruhat: Vec<Vec<u64>> = vec![vec![0; words_per_row]; size];
        bruhat[0][0] |= 1;
        for &y in &by_len {
            let y = y as usize;
            if len[y] == 0 {
                continue;
            }
            let s = ldesc[y].iter().next().unwrap();
            let yp = lmul_tab[s][y] as usize;
            let mut row = vec![0u64; words_per_row];
            for x in 0..size {
                let sx = lmul_tab[s][x] as usize;
                let le = if len[sx] < len[x] {
                    bruhat[yp][sx / 64] >> (sx % 64) & 1 == 1
                } else {
                    (bruhat[yp][x / 64] >> (x % 64) & 1 == 1)
                        || (bruhat[yp][sx / 64] >> (sx % 64) & 1 == 1)
                };
                if le {
                    row[x / 64] |= 1 << (x % 64);
                }
            }
            bruhat[y] = row;
        }

        Ok(CoxeterGroup {
            ctype,
            n_gens,
            size,
            forms,
            index,
            len,
            lmul_tab,
            rmul_tab,
            inv_tab,
            ldesc,
            rdesc,
            rwords,
            support,
            bruhat,
        })
    }

    pub fn ctype(&self) -> CoxeterType {
        self.ctype
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    pub fn id(&self) -> Elem {
        0
    }

    /// All elements in the global deterministic order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size as Elem
    }

    pub fn gen_elem(&self, s: usize) -> Elem {
        self.lmul_tab[s][0]
    }

    pub fn len(&self, w: Elem) -> u32 {
        self.len[w as usize]
    }

    pub fn lmul(&self, s: usize, w: Elem) -> Elem {
        self.lmul_tab[s][w as usize]
    }

    pub fn rmul(&self, w: Elem, s: usize) -> Elem {
        self.rmul_tab[s][w as usize]
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        let mut acc = y;
        for &s in self.rwords[x as usize].iter().rev() {
            acc = self.lmul_tab[s as usize][acc as usize];
        }
        acc
    }

    pub fn inv(&self, w: Elem) -> Elem {
        self.inv_tab[w as usize]
    }

    pub fn ldesc(&self, w: Elem) -> GenSet {
        self.ldesc[w as usize]
    }

    pub fn rdesc(&self, w: Elem) -> GenSet {
        self.rdesc[w as usize]
    }

    /// The lexicographically smallest reduced word.
    pub fn rword(&self, w: Elem) -> &[u8] {
        &self.rwords[w as usize]
    }

    /// Generators occurring in any reduced word of w.
    pub fn support(&self, w: Elem) -> GenSet {
        self.support[w as usize]
    }

    pub fn from_word(&self, word: &[usize]) -> Elem {
        let mut acc = self.id();
        for &s in word.iter().rev() {
            acc = self.lmul(s, acc);
        }
        acc
    }

    pub fn bruhat_leq(&self, x: Elem, y: Elem) -> bool {
        let row = &self.bruhat[y as usize];
        row[x as usize / 64] >> (x % 64) & 1 == 1
    }

    pub fn form(&self, w: Elem) -> &CanonForm {
        &self.forms[w as usize]
    }

    pub fn elem_of_form(&self, f: &CanonForm) -> Option<Elem> {
        self.index.get(f).copied()
    }

    pub fn window(&self, w: Elem) -> Option<&[i32]> {
        match &self.forms[w as usize] {
            CanonForm::Window(v) => Some(v),
            _ => None,
        }
    }

    pub fn longest_elem(&self) -> Elem {
        (self.size - 1) as Elem
    }

    /// The longest element of the parabolic subgroup W_I.
    pub fn longest_in(&self, iset: GenSet) -> Elem {
        let mut w = self.id();
        loop {
            match iset.iter().find(|&s| !self.rdesc(w).contains(s)) {
                Some(s) => w = self.rmul(w, s),
                None => return w,
            }
        }
    }

    pub fn conj_by_w0(&self, w: Elem) -> Elem {
        let w0 = self.longest_elem();
        self.mul(w0, self.mul(w, w0))
    }

    pub fn is_in_parabolic(&self, w: Elem, iset: GenSet) -> bool {
        self.support(w).is_subset_of(iset)
    }

    /// Elements of W_I in enumeration order.
    pub fn parabolic_members(&self, iset: GenSet) -> Vec<Elem> {
        self.elements().filter(|&w| self.is_in_parabolic(w, iset)).collect()
    }

    /// Distinguished left coset representatives X_I (minimal length in wW_I).
    pub fn x_set(&self, iset: GenSet) -> Vec<Elem> {
        self.elements().filter(|&w| self.rdesc(w).0 & iset.0 == 0).collect()
    }

    /// Distinguished right coset representatives Y_I = X_I^-1.
    pub fn y_set(&self, iset: GenSet) -> Vec<Elem> {
        self.elements().filter(|&w| self.ldesc(w).0 & iset.0 == 0).collect()
    }

    /// w = x * u with x in X_I and u in W_I.
    pub fn coset_decompose_left(&self, w: Elem, iset: GenSet) -> (Elem, Elem) {
        let mut x = w;
        let mut u = self.id();
        loop {
            match iset.iter().find(|&s| self.rdesc(x).contains(s)) {
                Some(s) => {
                    x = self.rmul(x, s);
                    u = self.lmul(s, u);
                }
                None => return (x, u),
            }
        }
    }

    /// w = u * x with u in W_I and x in Y_I.
    pub fn coset_decompose_right(&self, w: Elem, iset: GenSet) -> (Elem, Elem) {
        let mut x = w;
        let mut u = self.id();
        loop {
            match iset.iter().find(|&s| self.ldesc(x).contains(s)) {
                Some(s) => {
                    x = self.lmul(s, x);
                    u = self.rmul(u, s);
                }
                None => return (u, x),
            }
        }
    }

    /// Conjugacy classes of generators: connected components of the
    /// diagram restricted to odd-labelled edges.
    pub fn gen_conj_classes(&self) -> Vec<Vec<usize>> {
        let n = self.n_gens;
        let mut class = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for s in 0..n {
            if class[s] != usize::MAX {
                continue;
            }
            let c = classes.len();
            let mut stack = vec![s];
            class[s] = c;
            let mut members = vec![s];
            while let Some(a) = stack.pop() {
                for b in 0..n {
                    if class[b] == usize::MAX && self.ctype.cox_m(a, b) % 2 == 1 {
                        class[b] = c;
                        members.push(b);
                        stack.push(b);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        classes
    }

    pub fn gen_names(&self) -> Vec<String> {
        match self.ctype {
            CoxeterType::A { rank } => (1..=rank).map(|i| format!("s{i}")).collect(),
            CoxeterType::B { rank } => {
                let mut v = vec!["t".to_string()];
                v.extend((1..rank).map(|i| format!("s{i}")));
                v
            }
            CoxeterType::I2 { .. } => vec!["s0".into(), "s1".into()],
        }
    }

    /// Short display name for an element (its reduced word).
    pub fn word_name(&self, w: Elem) -> String {
        if w == self.id() {
            return "e".into();
        }
        let names = self.gen_names();
        self.rword(w).iter().map(|&s| names[s as usize].clone()).collect::<Vec<_>>().join("")
    }

    /// JSON form of an element: window notation for A/B, reduced word
    /// string for dihedral.
    pub fn elem_json(&self, w: Elem) -> Value {
        match &self.forms[w as usize] {
            CanonForm::Window(v) => json!(v),
            CanonForm::Dihedral { .. } => json!(self.word_name(w)),
        }
    }

    pub fn elem_from_window(&self, window: &[i32]) -> Result<Elem> {
        self.elem_of_form(&CanonForm::Window(window.to_vec()))
            .ok_or_else(|| Error::usage(format!("not a valid window for this group: {window:?}")))
    }
}
