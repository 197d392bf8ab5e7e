//! Sparse multivariate polynomials over the rationals, three-term Plücker
//! relations and exact checks of identities among vertex monomials.
//!
//! Polynomials carry their variable list. Mixing polynomials over different
//! variable lists is a programming error and panics.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{rat, subsets, IndexSubset, Rat};
use crate::secondary::LabeledConfig;

pub type Vars = Arc<Vec<String>>;
pub type Exponents = Vec<u32>;

pub fn vars(names: &[&str]) -> Vars {
    Arc::new(names.iter().map(|s| s.to_string()).collect())
}

/// Variables `x_I` for the `d`-subsets of `[n]`, in lexicographic order.
pub fn plucker_vars(d: usize, n: usize) -> Vars {
    Arc::new(subsets(n, d).iter().map(|s| format!("x{}", s.label())).collect())
}

fn same_ring(a: &Vars, b: &Vars) {
    assert!(Arc::ptr_eq(a, b) || a == b, "polynomials over different variable lists");
}

/// Degree-lexicographic comparison.
fn deglex(a: &[u32], b: &[u32]) -> Ordering {
    let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
    da.cmp(&db).then_with(|| a.cmp(b))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    vars: Vars,
    exps: Exponents,
}

impl Monomial {
    pub fn new(vars: Vars, exps: Exponents) -> Result<Self> {
        if exps.len() != vars.len() {
            return Err(Error::Shape(format!("{} exponents for {} variables", exps.len(), vars.len())));
        }
        Ok(Self { vars, exps })
    }

    pub fn one(vars: Vars) -> Self {
        let exps = vec![0; vars.len()];
        Self { vars, exps }
    }

    /// Parses `x12^2*x34`; `1` is the empty product.
    pub fn parse(vars: Vars, s: &str) -> Result<Self> {
        let mut exps = vec![0u32; vars.len()];
        let s = s.trim();
        if s != "1" {
            for factor in s.split('*') {
                let (name, power) = match factor.trim().split_once('^') {
                    Some((n, p)) => {
                        (n, p.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?)
                    }
                    None => (factor.trim(), 1),
                };
                let idx = vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
                exps[idx] += power;
            }
        }
        Ok(Self { vars, exps })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        same_ring(&self.vars, &other.vars);
        Monomial { vars: self.vars.clone(), exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect() }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        same_ring(&self.vars, &other.vars);
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        other.divides(self).then(|| Monomial {
            vars: self.vars.clone(),
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::term(self.vars.clone(), self.exps.clone(), Rat::one())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_monomial(&self.vars, &self.exps))
    }
}

fn fmt_monomial(vars: &[String], exps: &[u32]) -> String {
    let factors = vars
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect_vec();
    if factors.is_empty() {
        "1".into()
    } else {
        factors.join("*")
    }
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vars,
    terms: BTreeMap<Exponents, Rat>,
}

impl MultiPoly {
    pub fn zero(vars: Vars) -> Self {
        Self { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Vars, c: Rat) -> Self {
        let exps = vec![0; vars.len()];
        Self::term(vars, exps, c)
    }

    pub fn term(vars: Vars, exps: Exponents, coeff: Rat) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        Self { vars, terms }
    }

    pub fn var(vars: Vars, i: usize) -> Self {
        let mut exps = vec![0; vars.len()];
        exps[i] = 1;
        Self::term(vars, exps, Rat::one())
    }

    /// Builds from `(exponents, coefficient)` pairs, merging repeats.
    pub fn from_terms(vars: Vars, terms: impl IntoIterator<Item = (Exponents, Rat)>) -> Result<Self> {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            if e.len() != p.vars.len() {
                return Err(Error::Shape(format!("{} exponents for {} variables", e.len(), p.vars.len())));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exps: Exponents, coeff: Rat) {
        let entry = self.terms.entry(exps).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Total degrees of the terms, deduplicated and sorted.
    pub fn term_degrees(&self) -> Vec<u32> {
        self.terms.keys().map(|e| e.iter().sum()).sorted().dedup().collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.term_degrees().len() <= 1
    }

    /// Leading term under degree-lexicographic order.
    pub fn leading_term(&self) -> Option<(&Exponents, &Rat)> {
        self.terms.iter().max_by(|a, b| deglex(a.0, b.0))
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        Self { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        same_ring(&self.vars, &m.vars);
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(&m.exps).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = Self::constant(self.vars.clone(), Rat::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.vars.len() {
            return Err(Error::Shape(format!("{} values for {} variables", point.len(), self.vars.len())));
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(point).fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .fold(Rat::zero(), |a, b| a + b))
    }

    /// Replaces each variable by a polynomial of a common target ring.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.vars.len() {
            return Err(Error::Shape(format!("{} images for {} variables", images.len(), self.vars.len())));
        }
        let Some(target) = images.first().map(|p| p.vars.clone()) else {
            return Err(Error::Invalid("substitution into a ring without variables".into()));
        };
        let mut out = Self::zero(target.clone());
        for (e, c) in &self.terms {
            let mut t = Self::constant(target.clone(), c.clone());
            for (img, &k) in images.iter().zip(e) {
                t = &t * &img.pow(k);
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Replaces each term's monomial by the polynomial it is mapped to; every
    /// monomial occurring must be a key of `map`.
    pub fn substitute_monomials(&self, map: &[(Monomial, MultiPoly)], target: Vars) -> Result<MultiPoly> {
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let (_, img) = map
                .iter()
                .find(|(m, _)| m.exps == *e)
                .ok_or_else(|| Error::Invalid(format!("no image for {}", fmt_monomial(&self.vars, e))))?;
            out = &out + &img.scale(c);
        }
        Ok(out)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        same_ring(&self.vars, &rhs.vars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        MultiPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        same_ring(&self.vars, &rhs.vars);
        let mut acc: BTreeMap<Exponents, Rat> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MultiPoly { vars: self.vars.clone(), terms: acc }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let ordered = self.terms.iter().sorted_by(|a, b| deglex(b.0, a.0));
        for (i, (e, c)) in ordered.enumerate() {
            let mono = fmt_monomial(&self.vars, e);
            let mag = c.abs();
            let body = match (mono.as_str(), mag.is_one()) {
                ("1", _) => mag.to_string(),
                (_, true) => mono,
                _ => format!("{mag}*{mono}"),
            };
            match (i, c.is_negative()) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

/// The exact quotient `p / q` when `q` divides `p`, by single-divisor division
/// in degree-lexicographic order.
pub fn divides_exactly(p: &MultiPoly, q: &MultiPoly) -> Option<MultiPoly> {
    same_ring(&p.vars, &q.vars);
    let (lq, cq) = q.leading_term().map(|(e, c)| (e.clone(), c.clone()))?;
    let mut rest = p.clone();
    let mut quotient = MultiPoly::zero(p.vars.clone());
    while let Some((lr, cr)) = rest.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
        if !lq.iter().zip(&lr).all(|(a, b)| a <= b) {
            return None;
        }
        let step = MultiPoly::term(p.vars.clone(), lr.iter().zip(&lq).map(|(a, b)| a - b).collect(), cr / &cq);
        rest = &rest - &(&step * q);
        quotient = &quotient + &step;
    }
    Some(quotient)
}

/// `x_{Sab} x_{Scd} - x_{Sac} x_{Sbd} + x_{Sad} x_{Sbc}` for every
/// `(d-2)`-subset `S` and 4-subset `a < b < c < d` disjoint from it.
pub fn three_term_relations(d: usize, n: usize) -> Result<Vec<MultiPoly>> {
    if d < 2 || n < d {
        return Err(Error::Invalid(format!("three-term relations need n >= d >= 2, got d = {d}, n = {n}")));
    }
    let vars = plucker_vars(d, n);
    let index: BTreeMap<IndexSubset, usize> = subsets(n, d).into_iter().enumerate().map(|(i, s)| (s, i)).collect();
    let x = |s: &IndexSubset, extra: [usize; 2]| {
        let mut ix = s.indices().to_vec();
        ix.extend(extra);
        MultiPoly::var(vars.clone(), index[&IndexSubset::new(ix, n).expect("disjoint indices")])
    };
    let mut out = Vec::new();
    for s in subsets(n, d - 2) {
        for quad in subsets(n, 4).into_iter().filter(|q| q.is_disjoint(&s)) {
            let [a, b, c, e] = [0, 1, 2, 3].map(|k| quad.indices()[k]);
            let rel = &(&(&x(&s, [a, b]) * &x(&s, [c, e])) - &(&x(&s, [a, c]) * &x(&s, [b, e])))
                + &(&x(&s, [a, e]) * &x(&s, [b, c]));
            out.push(rel);
        }
    }
    Ok(out)
}

/// `Π_I x_I^{φ(I)}` over the configuration's subset names.
pub fn monomial_from_vertex(phi: &[u64], config: &LabeledConfig) -> Result<Monomial> {
    if phi.len() != config.len() {
        return Err(Error::Shape(format!("vector of length {} for {} labels", phi.len(), config.len())));
    }
    if let Some(l) = config.points().iter().position(|p| p.subset.is_none()) {
        return Err(Error::Invalid(format!("label {l} has no subset name")));
    }
    let exps = phi
        .iter()
        .map(|&k| u32::try_from(k).map_err(|_| Error::Invalid(format!("exponent {k} too large"))))
        .collect::<Result<_>>()?;
    Monomial::new(Arc::new(config.names()), exps)
}

/// Exponent-wise minimum.
pub fn common_gcd(ms: &[Monomial]) -> Result<Monomial> {
    let first = ms.first().ok_or_else(|| Error::Invalid("gcd of no monomials".into()))?;
    let exps = (0..first.exps.len()).map(|i| ms.iter().map(|m| m.exps[i]).min().unwrap_or(0)).collect();
    Ok(Monomial { vars: first.vars.clone(), exps })
}

pub fn reduce_by_common_gcd(ms: &[Monomial]) -> Result<Vec<Monomial>> {
    let g = common_gcd(ms)?;
    Ok(ms.iter().map(|m| m.checked_div(&g).expect("gcd divides")).collect())
}

/// Linear combination of named monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Combination {
    pub terms: Vec<(String, Rat)>,
}

impl Combination {
    pub fn expand(&self, named: &[(String, Monomial)], vars: Vars) -> MultiPoly {
        self.terms.iter().fold(MultiPoly::zero(vars), |acc, (name, c)| {
            let m = &named.iter().find(|(n, _)| n == name).expect("name from the same list").1;
            &acc + &m.to_poly().scale(c)
        })
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            let body = if mag.is_one() { name.clone() } else { format!("{mag}*{name}") };
            match (i, c.is_negative()) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

/// Writes `multiplier * rel` as a combination of the named monomials, term by
/// term, keeping the order of the relation's terms. `None` when some term is
/// not among them.
pub fn lift_relation(rel: &MultiPoly, multiplier: &Monomial, named: &[(String, Monomial)]) -> Option<Combination> {
    let product = rel.mul_monomial(multiplier);
    if product.is_zero() {
        return None;
    }
    let mut terms = Vec::new();
    for e in rel.terms.keys().sorted_by(|a, b| deglex(b, a)) {
        let lifted: Exponents = e.iter().zip(&multiplier.exps).map(|(a, b)| a + b).collect();
        let (name, _) = named.iter().find(|(_, m)| m.exps == lifted)?;
        terms.push((name.clone(), product.coeff(&lifted)));
    }
    Some(Combination { terms })
}

/// Findings on the balanced quartic identity among the monomials of the
/// two-block configuration `(2, 2)` of `Gr(2, 4)`.
#[derive(Debug, Clone)]
pub struct BalancedReport {
    /// `p^4 + q^4 + r^4 - 2p^2q^2 - 2q^2r^2 - 2p^2r^2` divided by `p - q + r`.
    pub quartic_quotient: Option<MultiPoly>,
    /// The `m5^4` form, in Plücker variables, divided by the Plücker relation.
    pub homogeneous_quotient: Option<MultiPoly>,
    /// The `m5^2` form as printed, divided by the Plücker relation.
    pub printed_quotient: Option<MultiPoly>,
    /// Total degrees (in Plücker variables) of the printed form's terms.
    pub printed_degrees: Vec<u32>,
    pub homogeneous_degrees: Vec<u32>,
    /// Both forms evaluated at a point of `Gr(2, 4)` and at an arbitrary point.
    pub homogeneous_on: Rat,
    pub printed_on: Rat,
    pub homogeneous_off: Rat,
}

impl BalancedReport {
    pub fn quartic_divisible(&self) -> bool {
        self.quartic_quotient.is_some()
    }

    pub fn printed_degree_mismatch(&self) -> bool {
        self.printed_degrees.len() > 1
    }
}

/// Names and monomials `m1..m5` of the `(2, 2)` configuration.
pub fn balanced_monomials() -> Vec<(String, Monomial)> {
    let vars = plucker_vars(2, 4);
    ["x12*x13^2*x34", "x12*x14^2*x34", "x12*x23^2*x34", "x12*x24^2*x34", "x12^2*x34^2"]
        .iter()
        .enumerate()
        .map(|(i, s)| (format!("m{}", i + 1), Monomial::parse(vars.clone(), s).expect("known variables")))
        .collect()
}

/// `m5^{k} + m1^2 m4^2 + m2^2 m3^2 - 2 m5^2 m1 m4 - 2 m1 m2 m3 m4 - 2 m5^2 m2 m3`
/// over variables `m1..m5`.
pub fn balanced_relation(m5_power: u32) -> MultiPoly {
    let mvars = vars(&["m1", "m2", "m3", "m4", "m5"]);
    let t = |e: [u32; 5], c: i64| (e.to_vec(), rat(c));
    MultiPoly::from_terms(
        mvars,
        [
            t([0, 0, 0, 0, m5_power], 1),
            t([2, 0, 0, 2, 0], 1),
            t([0, 2, 2, 0, 0], 1),
            t([1, 0, 0, 1, 2], -2),
            t([1, 1, 1, 1, 0], -2),
            t([0, 1, 1, 0, 2], -2),
        ],
    )
    .expect("five variables")
}

pub fn verify_balanced_identity() -> Result<BalancedReport> {
    let pqr = vars(&["p", "q", "r"]);
    let [p, q, r] = [0, 1, 2].map(|i| MultiPoly::var(pqr.clone(), i));
    let two = rat(2);
    let quartic = &(&(&(&(&p.pow(4) + &q.pow(4)) + &r.pow(4)) - &(&p.pow(2) * &q.pow(2)).scale(&two))
        - &(&q.pow(2) * &r.pow(2)).scale(&two))
        - &(&p.pow(2) * &r.pow(2)).scale(&two);
    let linear = &(&p - &q) + &r;

    let images = balanced_monomials().into_iter().map(|(_, m)| m.to_poly()).collect_vec();
    let relation = three_term_relations(2, 4)?.remove(0);
    let homogeneous = balanced_relation(4).substitute(&images)?;
    let printed = balanced_relation(2).substitute(&images)?;

    let on = crate::grassmann::plucker(&crate::linalg::Matrix::from_i64_rows(&[vec![1, 0, 1, 2], vec![0, 1, 3, 4]])?)?
        .values();
    let off = [1, 2, 3, 4, 5, 6].map(rat);
    Ok(BalancedReport {
        quartic_quotient: divides_exactly(&quartic, &linear),
        homogeneous_quotient: divides_exactly(&homogeneous, &relation),
        printed_quotient: divides_exactly(&printed, &relation),
        printed_degrees: printed.term_degrees(),
        homogeneous_degrees: homogeneous.term_degrees(),
        homogeneous_on: homogeneous.eval(&on)?,
        printed_on: printed.eval(&on)?,
        homogeneous_off: homogeneous.eval(&off)?,
    })
}
