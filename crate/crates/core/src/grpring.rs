//! The coefficient ring A = Z[Gamma] for Gamma = Z^k with the
//! lexicographic total order, its bar involution e^g -> e^-g, sign
//! decompositions, the specialisation maps theta, weight functions, and
//! an unreduced fraction field used only by verification paths.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use serde::de::Error as _;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// An exponent gamma in Gamma = Z^k. Comparison is lexicographic on the
/// coordinates; this is a total order compatible with addition.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Exponent(SmallVec<[i32; 2]>);

impl Exponent {
    pub fn new(coords: &[i32]) -> Self {
        Exponent(SmallVec::from_slice(coords))
    }

    pub fn zero(arity: usize) -> Self {
        Exponent(SmallVec::from_elem(0, arity))
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Sign of the exponent in the lexicographic order (vs. 0).
    pub fn sign(&self) -> Ordering {
        for &c in &self.0 {
            match c.cmp(&0) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        assert_eq!(self.arity(), other.arity(), "exponent arity mismatch");
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Exponent) -> Exponent {
        assert_eq!(self.arity(), other.arity(), "exponent arity mismatch");
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Exponent {
        Exponent(self.0.iter().map(|&a| -a).collect())
    }

    pub fn scale(&self, n: i32) -> Exponent {
        Exponent(self.0.iter().map(|&a| n * a).collect())
    }
}

/// Sign regions of Gamma used by [`GrElem::sign_part`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Region {
    Neg,
    NonPos,
    NonNeg,
    Pos,
}

impl Region {
    pub fn contains(self, sign: Ordering) -> bool {
        match self {
            Region::Neg => sign == Ordering::Less,
            Region::NonPos => sign != Ordering::Greater,
            Region::NonNeg => sign != Ordering::Less,
            Region::Pos => sign == Ordering::Greater,
        }
    }
}

/// Coefficient rings usable in [`GrElem`]; blanket-implemented for
/// `BigInt` and `BigRational`.
pub trait CoeffRing:
    Clone
    + Eq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + std::ops::Neg<Output = Self>
    + std::ops::Sub<Output = Self>
    + for<'a> std::ops::AddAssign<&'a Self>
{
}

impl<T> CoeffRing for T where
    T: Clone
        + Eq
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + std::ops::Neg<Output = T>
        + std::ops::Sub<Output = T>
        + for<'a> std::ops::AddAssign<&'a T>
{
}

/// A sparse element of Z[Gamma] (or Q[Gamma]): finitely many terms
/// `coef * e^exp`, stored sorted by exponent descending with no zero
/// coefficients. The zero element has no terms and is compatible with
/// every arity.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GrElem<C = BigInt> {
    terms: Vec<(Exponent, C)>,
}

pub type AElem = GrElem<BigInt>;
pub type QElem = GrElem<BigRational>;

impl<C: CoeffRing> GrElem<C> {
    pub fn zero() -> Self {
        GrElem { terms: Vec::new() }
    }

    pub fn constant(arity: usize, c: C) -> Self {
        Self::monomial(Exponent::zero(arity), c)
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, C::one())
    }

    pub fn monomial(exp: Exponent, c: C) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            GrElem { terms: vec![(exp, c)] }
        }
    }

    /// e^exp as an element.
    pub fn unit(exp: Exponent) -> Self {
        Self::monomial(exp, C::one())
    }

    pub fn from_pairs(pairs: Vec<(Exponent, C)>) -> Self {
        let mut acc: BTreeMap<Exponent, C> = BTreeMap::new();
        for (e, c) in pairs {
            if let Some(v) = acc.get_mut(&e) {
                *v += &c;
            } else {
                acc.insert(e, c);
            }
        }
        GrElem {
            terms: acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Exponent, C)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Arity of the exponents, if any term is present.
    pub fn arity(&self) -> Option<usize> {
        self.terms.first().map(|(e, _)| e.arity())
    }

    fn check_arity(&self, other: &Self) {
        if let (Some(a), Some(b)) = (self.arity(), other.arity()) {
            assert_eq!(a, b, "group ring arity mismatch");
        }
    }

    pub fn coeff(&self, exp: &Exponent) -> C {
        match self.terms.binary_search_by(|(e, _)| exp.cmp(e)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => C::zero(),
        }
    }

    pub fn constant_term(&self) -> C {
        match self.arity() {
            None => C::zero(),
            Some(k) => self.coeff(&Exponent::zero(k)),
        }
    }

    /// Largest exponent (the terms are sorted descending).
    pub fn max_exp(&self) -> Option<&Exponent> {
        self.terms.first().map(|(e, _)| e)
    }

    pub fn min_exp(&self) -> Option<&Exponent> {
        self.terms.last().map(|(e, _)| e)
    }

    /// Leading term (largest exponent).
    pub fn leading(&self) -> Option<(&Exponent, &C)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_arity(other);
        let mut out: Vec<(Exponent, C)> = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ea, ca) = &self.terms[i];
            let (eb, cb) = &other.terms[j];
            match eb.cmp(ea) {
                Ordering::Less => {
                    out.push((ea.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((eb.clone(), cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let mut c = ca.clone();
                    c += cb;
                    if !c.is_zero() {
                        out.push((ea.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend(other.terms[j..].iter().cloned());
        GrElem { terms: out }
    }

    pub fn neg(&self) -> Self {
        GrElem {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_arity(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.terms.len() == 1 {
            let (e, c) = &other.terms[0];
            return self.mul_monomial(e, c);
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return other.mul_monomial(e, c);
        }
        let mut acc: BTreeMap<Exponent, C> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.add(eb);
                let c = ca.clone() * cb.clone();
                if let Some(v) = acc.get_mut(&e) {
                    *v += &c;
                } else {
                    acc.insert(e, c);
                }
            }
        }
        GrElem {
            terms: acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn mul_monomial(&self, exp: &Exponent, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GrElem {
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.add(exp), a.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GrElem {
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a.clone() * c.clone())).collect(),
        }
    }

    /// Shift by e^exp.
    pub fn shift(&self, exp: &Exponent) -> Self {
        GrElem {
            terms: self.terms.iter().map(|(e, a)| (e.add(exp), a.clone())).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = other.clone();
            return;
        }
        *self = self.add(other);
    }

    /// The bar involution: coefficients fixed, every exponent negated.
    /// Negation reverses the lexicographic order, so the stored
    /// descending order is restored by reversing the term list.
    pub fn bar(&self) -> Self {
        GrElem {
            terms: self.terms.iter().rev().map(|(e, c)| (e.neg(), c.clone())).collect(),
        }
    }

    /// Sub-sum of terms whose exponent lies in `region` together with a
    /// flag telling whether the whole element lies in the region.
    pub fn sign_part(&self, region: Region) -> (Self, bool) {
        let part: Vec<(Exponent, C)> = self
            .terms
            .iter()
            .filter(|(e, _)| region.contains(e.sign()))
            .cloned()
            .collect();
        let all = part.len() == self.terms.len();
        (GrElem { terms: part }, all)
    }

    pub fn is_in(&self, region: Region) -> bool {
        self.terms.iter().all(|(e, _)| region.contains(e.sign()))
    }

    /// Ring homomorphism theta: arity-2 elements to arity-1 elements,
    /// V^i v^j -> e^(i*b + j*a) with a, b > 0.
    pub fn specialize(&self, a: i32, b: i32) -> Result<Self> {
        if a <= 0 || b <= 0 {
            return Err(Error::usage(format!(
                "specialisation weights must be positive, got a={a}, b={b}"
            )));
        }
        if let Some(k) = self.arity() {
            if k != 2 {
                return Err(Error::usage(format!("specialize expects arity 2, got {k}")));
            }
        }
        Ok(Self::from_pairs(
            self.terms
                .iter()
                .map(|(e, c)| {
                    let (i, j) = (e.coords()[0], e.coords()[1]);
                    (Exponent::new(&[i * b + j * a]), c.clone())
                })
                .collect(),
        ))
    }

    /// The total specialisation theta_1: every e^gamma -> 1.
    pub fn theta_one(&self) -> C {
        let mut acc = C::zero();
        for (_, c) in &self.terms {
            acc += c;
        }
        acc
    }

    pub fn map_coeffs<D: CoeffRing>(&self, f: impl Fn(&C) -> D) -> GrElem<D> {
        GrElem {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Render with the given variable names, one per exponent coordinate.
    pub fn fmt_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = e
                .coords()
                .iter()
                .zip(names)
                .filter(|(&p, _)| p != 0)
                .map(|(&p, name)| {
                    if p == 1 {
                        name.to_string()
                    } else {
                        format!("{name}^{p}")
                    }
                })
                .collect();
            let cs = c.to_string();
            let (neg, cabs) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&cabs);
            } else {
                if cabs != "1" {
                    out.push_str(&cabs);
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl AElem {
    pub fn from_int(arity: usize, n: i64) -> Self {
        Self::constant(arity, BigInt::from(n))
    }

    /// Convenience constructor from (coords, coefficient) pairs.
    pub fn of(pairs: &[(&[i32], i64)]) -> Self {
        Self::from_pairs(
            pairs
                .iter()
                .map(|(e, c)| (Exponent::new(e), BigInt::from(*c)))
                .collect(),
        )
    }

    pub fn to_rational(&self) -> QElem {
        self.map_coeffs(|c| BigRational::from_integer(c.clone()))
    }
}

impl<C: CoeffRing> fmt::Display for GrElem<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: &[&str] = match self.arity() {
            Some(2) => &["V", "v"],
            _ => &["v", "u", "w3", "w4"],
        };
        write!(f, "{}", self.fmt_with(names))
    }
}

// JSON form: [{"exp":[i,j],"coef":"<decimal>"}], sorted by exponent
// descending. Round-trips bit-exactly.
impl Serialize for AElem {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            exp: &'a [i32],
            coef: String,
        }
        let mut seq = ser.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            seq.serialize_element(&Term { exp: e.coords(), coef: c.to_string() })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for AElem {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Term {
            exp: Vec<i32>,
            coef: String,
        }
        let raw = Vec::<Term>::deserialize(de)?;
        let mut pairs = Vec::with_capacity(raw.len());
        for t in raw {
            let c: BigInt = t.coef.parse().map_err(|_| D::Error::custom("bad coefficient"))?;
            pairs.push((Exponent::new(&t.exp), c));
        }
        Ok(AElem::from_pairs(pairs))
    }
}

impl Serialize for QElem {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            exp: &'a [i32],
            num: String,
            den: String,
        }
        let mut seq = ser.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            seq.serialize_element(&Term {
                exp: e.coords(),
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for QElem {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Term {
            exp: Vec<i32>,
            num: String,
            den: String,
        }
        let raw = Vec::<Term>::deserialize(de)?;
        let mut pairs = Vec::with_capacity(raw.len());
        for t in raw {
            let n: BigInt = t.num.parse().map_err(|_| D::Error::custom("bad numerator"))?;
            let d: BigInt = t.den.parse().map_err(|_| D::Error::custom("bad denominator"))?;
            if d.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            pairs.push((Exponent::new(&t.exp), BigRational::new(n, d)));
        }
        Ok(QElem::from_pairs(pairs))
    }
}

/// A weight function L on the generators: strictly positive exponents,
/// constant on conjugacy classes of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFunction {
    per_gen: Vec<Exponent>,
}

impl WeightFunction {
    /// `conj_classes` partitions the generator indices into classes of
    /// generators conjugate in W.
    pub fn new(per_gen: Vec<Exponent>, conj_classes: &[Vec<usize>]) -> Result<Self> {
        if per_gen.is_empty() {
            return Err(Error::usage("weight function needs at least one generator"));
        }
        let arity = per_gen[0].arity();
        for (s, l) in per_gen.iter().enumerate() {
            if l.arity() != arity {
                return Err(Error::usage("weight exponents must share arity"));
            }
            if l.sign() != Ordering::Greater {
                return Err(Error::usage(format!("L(s{s}) must be strictly positive")));
            }
        }
        for class in conj_classes {
            for pair in class.windows(2) {
                if per_gen[pair[0]] != per_gen[pair[1]] {
                    return Err(Error::usage(format!(
                        "generators s{} and s{} are conjugate but have different weights",
                        pair[0], pair[1]
                    )));
                }
            }
        }
        Ok(WeightFunction { per_gen })
    }

    pub fn arity(&self) -> usize {
        self.per_gen[0].arity()
    }

    pub fn n_gens(&self) -> usize {
        self.per_gen.len()
    }

    pub fn l(&self, s: usize) -> &Exponent {
        &self.per_gen[s]
    }

    /// q_s = e^L(s).
    pub fn q(&self, s: usize) -> AElem {
        AElem::unit(self.per_gen[s].clone())
    }

    pub fn q_inv(&self, s: usize) -> AElem {
        AElem::unit(self.per_gen[s].neg())
    }

    /// q_s - q_s^-1.
    pub fn q_diff(&self, s: usize) -> AElem {
        self.q(s).sub(&self.q_inv(s))
    }

    /// q_s + q_s^-1.
    pub fn q_sum(&self, s: usize) -> AElem {
        self.q(s).add(&self.q_inv(s))
    }
}

/// An unreduced fraction over Z[Gamma]; equality is decided by
/// cross-multiplication, no gcd reduction is attempted.
#[derive(Clone, Debug)]
pub struct Fraction {
    num: AElem,
    den: AElem,
}

impl Fraction {
    pub fn new(num: AElem, den: AElem) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Arithmetic("zero denominator".into()));
        }
        Ok(Fraction { num, den })
    }

    pub fn from_elem(num: AElem, arity: usize) -> Self {
        Fraction { num, den: AElem::one(arity) }
    }

    pub fn zero(arity: usize) -> Self {
        Fraction { num: AElem::zero(), den: AElem::one(arity) }
    }

    pub fn one(arity: usize) -> Self {
        Fraction { num: AElem::one(arity), den: AElem::one(arity) }
    }

    pub fn num(&self) -> &AElem {
        &self.num
    }

    pub fn den(&self) -> &AElem {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Fraction {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Fraction {
            num: self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Fraction { num: self.num.mul(&other.num), den: self.den.mul(&other.den) }
    }

    pub fn mul_elem(&self, other: &AElem) -> Self {
        Fraction { num: self.num.mul(other), den: self.den.clone() }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::Arithmetic("division by zero fraction".into()));
        }
        Ok(Fraction { num: self.num.mul(&other.den), den: self.den.mul(&other.num) })
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Arithmetic("reciprocal of zero fraction".into()));
        }
        Ok(Fraction { num: self.den.clone(), den: self.num.clone() })
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for Fraction {}
