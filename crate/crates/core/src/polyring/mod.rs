//! Sparse exact multivariate polynomials over ℤ, ℚ or F_p.
//!
//! Every variable carries a nonnegative exponent except the uniformizer
//! [`PI`], which may appear with negative powers. This models the Laurent
//! ring `k[π, π⁻¹][x, y, ...]` that generic-fibre equations live in, while
//! [`Poly::pi_valuation`] and [`Poly::reduce_mod_pi`] do the bookkeeping for
//! integral models.
//!
//! Coefficients are arbitrary precision. A [`Poly`] always sits in canonical
//! sparse form: no zero coefficients, rationals in lowest terms, and F_p
//! coefficients reduced into `[0, p)`.

mod monomial;
mod parse;

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use monomial::{Monomial, Var, PI};

use crate::error::{Error, Result};

/// Coefficient ring tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoeffRing {
    Int,
    Rat,
    ModP(u64),
}

impl CoeffRing {
    pub fn characteristic(&self) -> u64 {
        match self {
            CoeffRing::ModP(p) => *p,
            _ => 0,
        }
    }

    fn normalize(&self, c: BigRational) -> BigRational {
        match self {
            CoeffRing::Rat => c,
            CoeffRing::Int => {
                debug_assert!(
                    c.is_integer(),
                    "fractional coefficient in an integer polynomial"
                );
                c
            }
            CoeffRing::ModP(p) => {
                let p = BigInt::from(*p);
                let num = c.numer().mod_floor(&p);
                let den = c.denom().mod_floor(&p);
                let inv = mod_inverse(&den, &p).expect("denominator divisible by p");
                BigRational::from_integer((num * inv).mod_floor(&p))
            }
        }
    }

    fn is_unit(&self, c: &BigRational) -> bool {
        match self {
            CoeffRing::Int => c.is_integer() && c.numer().abs().is_one(),
            CoeffRing::Rat => !c.is_zero(),
            CoeffRing::ModP(_) => !c.is_zero(),
        }
    }

    fn inverse(&self, c: &BigRational) -> BigRational {
        match self {
            CoeffRing::ModP(p) => {
                let p = BigInt::from(*p);
                BigRational::from_integer(mod_inverse(c.numer(), &p).expect("inverse of zero"))
            }
            _ => c.recip(),
        }
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::Int => f.write_str("INT"),
            CoeffRing::Rat => f.write_str("RAT"),
            CoeffRing::ModP(p) => write!(f, "MODP({p})"),
        }
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(m))
    } else {
        None
    }
}

/// π-adic valuation: a finite exponent, or +∞ for the zero polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_integral(self) -> bool {
        self >= Valuation::Finite(0)
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("+inf"),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ring: CoeffRing,
    terms: BTreeMap<Monomial, BigRational>,
}

/// A simultaneous substitution `var ↦ poly`.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    bindings: HashMap<Var, Poly>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(mut self, name: &str, value: Poly) -> Result<Self> {
        self.bindings.insert(Var::new(name)?, value);
        Ok(self)
    }

    pub fn bind_var(mut self, var: Var, value: Poly) -> Self {
        self.bindings.insert(var, value);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn get(&self, var: Var) -> Option<&Poly> {
        self.bindings.get(&var)
    }
}

struct Accumulator {
    ring: CoeffRing,
    terms: HashMap<Monomial, BigRational>,
}

impl Accumulator {
    fn new(ring: CoeffRing) -> Self {
        Accumulator {
            ring,
            terms: HashMap::new(),
        }
    }

    fn add(&mut self, m: Monomial, c: BigRational) {
        match self.terms.entry(m) {
            std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += c,
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    fn finish(self) -> Poly {
        let ring = self.ring;
        let terms = self
            .terms
            .into_iter()
            .filter_map(|(m, c)| {
                let c = ring.normalize(c);
                (!c.is_zero()).then_some((m, c))
            })
            .collect();
        Poly { ring, terms }
    }
}

impl Poly {
    pub fn zero(ring: CoeffRing) -> Self {
        Poly {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: CoeffRing) -> Self {
        Self::constant(ring, 1)
    }

    pub fn constant(ring: CoeffRing, c: i64) -> Self {
        Self::from_rational(ring, BigRational::from_integer(c.into()))
    }

    pub fn from_rational(ring: CoeffRing, c: BigRational) -> Self {
        Self::monomial(ring, Monomial::one(), c)
    }

    pub fn monomial(ring: CoeffRing, m: Monomial, c: BigRational) -> Self {
        let mut acc = Accumulator::new(ring);
        acc.add(m, c);
        acc.finish()
    }

    /// The variable `name`, which must be a valid identifier.
    ///
    /// Panics on an invalid name; use [`Poly::try_var`] for untrusted input.
    pub fn var(ring: CoeffRing, name: &str) -> Self {
        Self::try_var(ring, name).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn try_var(ring: CoeffRing, name: &str) -> Result<Self> {
        Ok(Self::monomial(
            ring,
            Monomial::var(Var::new(name)?),
            BigRational::one(),
        ))
    }

    pub fn pi_pow(ring: CoeffRing, e: i64) -> Self {
        Self::monomial(ring, Monomial::pi_power(e), BigRational::one())
    }

    pub fn parse(text: &str, ring: CoeffRing) -> Result<Self> {
        parse::parse_poly(text, ring)
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// Terms in rendering order.
    pub fn terms_canonical(&self) -> Vec<(&Monomial, &BigRational)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| a.0.canonical_cmp(b.0));
        t
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The constant coefficient if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// `Some((c, m))` when the polynomial is a single term.
    pub fn as_term(&self) -> Option<(&BigRational, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.iter().map(|(v, _)| v.name().to_string()))
            .collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.contains(v))
    }

    pub fn degree_in(&self, v: Var) -> i64 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Splits by the exponent of `v`: `self = Σ_e v^e · parts[e]`, with `v`
    /// erased from every part.
    pub fn split_by(&self, v: Var) -> BTreeMap<i64, Poly> {
        let mut parts: BTreeMap<i64, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.exponent(v))
                .or_insert_with(|| Poly::zero(self.ring))
                .terms
                .insert(m.without(v), c.clone());
        }
        parts
    }

    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Poly {
        let mut acc = Accumulator::new(self.ring);
        for (m, c) in &self.terms {
            acc.add(f(m), c.clone());
        }
        acc.finish()
    }

    fn check_ring(&self, other: &Poly) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(self.ring, other.ring))
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(BigRational::zero);
            *entry = self.ring.normalize(&*entry + c);
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        Ok(Poly {
            ring: self.ring,
            terms,
        })
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(self.ring));
        }
        let mut acc = Accumulator::new(self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                acc.add(m1.mul(m2), c1 * c2);
            }
        }
        Ok(acc.finish())
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        let mut acc = Accumulator::new(self.ring);
        for (m, d) in &self.terms {
            acc.add(m.clone(), d * c);
        }
        acc.finish()
    }

    pub fn scale_int(&self, c: i64) -> Poly {
        self.scale(&BigRational::from_integer(c.into()))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(n, c)| (n.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn mul_pi_pow(&self, e: i64) -> Poly {
        self.mul_monomial(&Monomial::pi_power(e))
    }

    /// Exact power. Over F_p, factors of `p` in the exponent are taken with
    /// the Frobenius `Σ c·m ↦ Σ c·m^p`, which is the same polynomial.
    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        if let CoeffRing::ModP(p) = self.ring {
            while e > 0 && e.is_multiple_of(p) {
                base = base.frobenius_fp();
                e /= p;
            }
        }
        let mut result = Poly::one(self.ring);
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    fn frobenius_fp(&self) -> Poly {
        let p = self.ring.characteristic() as i64;
        Poly {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.pow(p), c.clone()))
                .collect(),
        }
    }

    /// Simultaneous substitution followed by canonicalization.
    ///
    /// A negative power of `pi` can only be substituted when `pi` is bound
    /// to a unit multiple of a `pi` power.
    pub fn substitute(&self, sub: &Substitution) -> Result<Poly> {
        if sub.is_empty() {
            return Ok(self.clone());
        }
        for value in sub.bindings.values() {
            self.check_ring(value)?;
        }
        let mut powers: HashMap<(Var, i64), Poly> = HashMap::new();
        let mut acc = Accumulator::new(self.ring);
        for (m, c) in &self.terms {
            let mut free = Vec::new();
            let mut bound = Vec::new();
            for (v, e) in m.iter() {
                match sub.bindings.get(&v) {
                    Some(value) => bound.push((v, e, value)),
                    None => free.push((v, e)),
                }
            }
            let mut term = Poly::monomial(self.ring, Monomial::from_exponents(free)?, c.clone());
            for (v, e, value) in bound {
                let power = match powers.entry((v, e)) {
                    Entry::Occupied(o) => o.into_mut(),
                    Entry::Vacant(slot) => slot.insert(if e >= 0 {
                        value.pow(e as u64)
                    } else {
                        value.unit_pi_power_inverse(v, -e)?
                    }),
                };
                term = &term * &*power;
                if term.is_zero() {
                    break;
                }
            }
            for (m, c) in term.terms {
                acc.add(m, c);
            }
        }
        Ok(acc.finish())
    }

    /// `self^(-e)` for `self = u·π^k` with `u` a unit.
    fn unit_pi_power_inverse(&self, var: Var, e: i64) -> Result<Poly> {
        match self.as_term() {
            Some((c, m)) if self.ring.is_unit(c) && m.iter().all(|(v, _)| v.is_pi()) => {
                let inv = self.ring.inverse(c);
                Ok(Poly::monomial(self.ring, m.pow(-1), inv).pow(e as u64))
            }
            _ => Err(Error::NegativeExponent(var.name().to_string())),
        }
    }

    /// Minimum `pi` exponent over all terms.
    pub fn pi_valuation(&self) -> Valuation {
        self.terms
            .keys()
            .map(|m| m.pi_exponent())
            .min()
            .map_or(Valuation::Infinite, Valuation::Finite)
    }

    /// The part of `self` at `pi`-exponent exactly `e`, with `pi` erased.
    pub fn pi_component(&self, e: i64) -> Poly {
        Poly {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.pi_exponent() == e)
                .map(|(m, c)| (m.without(Var::PI), c.clone()))
                .collect(),
        }
    }

    /// Sets `pi = 0` in an integral polynomial.
    pub fn reduce_mod_pi(&self) -> Result<Poly> {
        let bad: Vec<String> = self
            .terms_canonical()
            .into_iter()
            .filter(|(m, _)| m.pi_exponent() < 0)
            .map(|(m, c)| render_term(m, c, true))
            .collect();
        if !bad.is_empty() {
            return Err(Error::NotIntegral(format!(
                "negative pi-valuation in terms {}",
                bad.join(", ")
            )));
        }
        Ok(self.pi_component(0))
    }

    /// Retags a rational polynomial as integral, if it is.
    pub fn rationalize(&self) -> Result<Poly> {
        if self.ring != CoeffRing::Rat {
            return Err(Error::RingMismatch(self.ring, CoeffRing::Rat));
        }
        let bad: Vec<String> = self
            .terms_canonical()
            .into_iter()
            .filter(|(_, c)| !c.is_integer())
            .map(|(m, c)| render_term(m, c, true))
            .collect();
        if !bad.is_empty() {
            return Err(Error::NotIntegral(format!(
                "fractional coefficients in {}",
                bad.join(", ")
            )));
        }
        Ok(Poly {
            ring: CoeffRing::Int,
            terms: self.terms.clone(),
        })
    }

    /// Maps into another coefficient ring: ℤ → ℚ, ℤ → F_p, ℚ → F_p (when
    /// denominators are prime to p), F_p → F_p (identity) and, lifting
    /// representatives in `[0, p)`, F_p → ℤ.
    pub fn to_ring(&self, target: CoeffRing) -> Result<Poly> {
        use CoeffRing::*;
        match (self.ring, target) {
            (a, b) if a == b => Ok(self.clone()),
            (Int, Rat) | (ModP(_), Int) | (ModP(_), Rat) => Ok(Poly {
                ring: target,
                terms: self.terms.clone(),
            }),
            (Rat, Int) => self.rationalize(),
            (Int, ModP(_)) => {
                let mut acc = Accumulator::new(target);
                for (m, c) in &self.terms {
                    acc.add(m.clone(), c.clone());
                }
                Ok(acc.finish())
            }
            (Rat, ModP(p)) => {
                if self.terms.values().any(|c| (c.denom() % p).is_zero()) {
                    return Err(Error::NotIntegral(format!(
                        "denominator divisible by {p} in {self}"
                    )));
                }
                let mut acc = Accumulator::new(target);
                for (m, c) in &self.terms {
                    acc.add(m.clone(), c.clone());
                }
                Ok(acc.finish())
            }
            (a, b) => Err(Error::RingMismatch(a, b)),
        }
    }
}

fn render_coeff(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn render_term(m: &Monomial, c: &BigRational, with_sign: bool) -> String {
    let mag = if with_sign { c.clone() } else { c.abs() };
    if m.is_one() {
        render_coeff(&mag)
    } else if mag.is_one() {
        m.to_string()
    } else if mag == -BigRational::one() {
        format!("-{m}")
    } else {
        format!("{}*{m}", render_coeff(&mag))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms_canonical().into_iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            f.write_str(&render_term(m, c, false))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({self})", self.ring)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        let ring = self.ring;
        Poly {
            ring,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), ring.normalize(-c)))
                .collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// Panics when the coefficient rings differ.
        impl $trait<&Poly> for &Poly {
            type Output = Poly;

            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl $trait<Poly> for Poly {
            type Output = Poly;

            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }

        impl $trait<&Poly> for Poly {
            type Output = Poly;

            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }

        impl $trait<Poly> for &Poly {
            type Output = Poly;

            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        let mut iter = iter;
        match iter.next() {
            Some(first) => iter.fold(first, |a, b| a + b),
            None => panic!("sum of an empty iterator has no coefficient ring"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const F3: CoeffRing = CoeffRing::ModP(3);

    fn p(s: &str, ring: CoeffRing) -> Poly {
        Poly::parse(s, ring).unwrap()
    }

    #[test]
    fn additive_inverse() {
        let x = Poly::var(CoeffRing::Int, "x");
        assert!((&x + &-&x).is_zero());
    }

    #[test]
    fn frobenius_additivity_small() {
        assert_eq!(p("x + y", F3).pow(3), p("x^3 + y^3", F3));
    }

    #[test]
    fn seventh_power_mod_three() {
        // C(7,k) mod 3 by Pascal's rule: 1 1 0 2 2 0 1 1
        let mut row = vec![1u64];
        for _ in 0..7 {
            let mut next = vec![1u64];
            for w in row.windows(2) {
                next.push((w[0] + w[1]) % 3);
            }
            next.push(1);
            row = next;
        }
        assert_eq!(row, vec![1, 1, 0, 2, 2, 0, 1, 1]);
        let expected: Poly = row
            .iter()
            .enumerate()
            .map(|(k, &c)| p(&format!("{c}*t^{}*b^{k}", 7 - k), F3))
            .sum();
        assert_eq!(p("t + b", F3).pow(7), expected);
        assert_eq!(
            expected,
            p("t^7 + t^6*b + 2*t^4*b^3 + 2*t^3*b^4 + t*b^6 + b^7", F3)
        );
    }

    #[test]
    fn ring_mismatch() {
        let a = Poly::var(CoeffRing::Int, "x");
        let b = Poly::var(F3, "x");
        assert_eq!(
            a.checked_add(&b),
            Err(Error::RingMismatch(CoeffRing::Int, F3))
        );
        assert!(a.checked_mul(&b).is_err());
        let sub = Substitution::new().bind("x", b).unwrap();
        assert!(a.substitute(&sub).is_err());
    }

    #[test]
    fn laurent_change_of_variables() {
        let ring = CoeffRing::ModP(5);
        let m = 5;
        let f = p("T1^5 - T1", ring);
        let sub = Substitution::new()
            .bind(
                "T1",
                Poly::pi_pow(ring, -m).mul_monomial(&Monomial::var(Var::new("t1").unwrap())),
            )
            .unwrap();
        let g = f.substitute(&sub).unwrap();
        assert_eq!(g, p("pi^-25*t1^5 - pi^-5*t1", ring));
        assert_eq!(f.substitute(&Substitution::new()).unwrap(), f);
    }

    #[test]
    fn substitute_fibre_coordinates() {
        let f = p("-s1^7 + b1^7 + (s1 - b1)^2", F3);
        let g = f
            .substitute(&Substitution::new().bind("s1", p("t1 + b1", F3)).unwrap())
            .unwrap();
        let expected = -p("t1 + b1", F3).pow(7) + p("b1^7", F3) + p("t1", F3).pow(2);
        assert_eq!(g, expected);
    }

    #[test]
    fn pi_binding_must_be_a_unit_pi_power() {
        let ring = CoeffRing::Int;
        let f = p("pi^-2*x", ring);
        let ok = Substitution::new().bind("pi", p("-pi^3", ring)).unwrap();
        assert_eq!(f.substitute(&ok).unwrap(), p("pi^-6*x", ring));
        let bad = Substitution::new().bind("pi", p("2*pi", ring)).unwrap();
        assert_eq!(
            f.substitute(&bad),
            Err(Error::NegativeExponent("pi".into()))
        );
        let bad = Substitution::new().bind("pi", p("pi + x", ring)).unwrap();
        assert!(f.substitute(&bad).is_err());
    }

    #[test]
    fn valuations() {
        let ring = F3;
        assert_eq!(p("pi^-9*a1", ring).pi_valuation(), Valuation::Finite(-9));
        assert_eq!(Poly::zero(ring).pi_valuation(), Valuation::Infinite);
        assert_eq!(p("a2 + pi^6*c", ring).pi_valuation(), Valuation::Finite(0));
    }

    #[test]
    fn reduction_mod_pi() {
        let ring = F3;
        assert_eq!(
            p("a1 + pi^6*t1", ring).reduce_mod_pi().unwrap(),
            p("a1", ring)
        );
        assert!(matches!(
            p("pi^-1*a", ring).reduce_mod_pi(),
            Err(Error::NotIntegral(_))
        ));
        assert_eq!(
            p("c + c^2", ring).reduce_mod_pi().unwrap(),
            p("c + c^2", ring)
        );
    }

    #[test]
    fn rationalize_checks_denominators() {
        let q = CoeffRing::Rat;
        let x = p("3*x", q).scale(&BigRational::new(1.into(), 3.into()));
        assert_eq!(x.rationalize().unwrap(), p("x", CoeffRing::Int));

        let (x, y) = (p("x", q), p("y", q));
        let f =
            (x.pow(3) + y.pow(3) - (&x + &y).pow(3)).scale(&BigRational::new(1.into(), 3.into()));
        assert_eq!(
            f.rationalize().unwrap(),
            p("-x^2*y - x*y^2", CoeffRing::Int)
        );

        assert!(matches!(
            p("1/2*x", q).rationalize(),
            Err(Error::NotIntegral(_))
        ));
    }

    #[test]
    fn rendering_is_canonical() {
        assert_eq!(p("x - x^3", F3).to_string(), "2*x^3 + x");
        assert_eq!(p("x - x^3", CoeffRing::Int).to_string(), "-x^3 + x");
        assert_eq!(
            p("y0 + x0 - x0*y0", CoeffRing::Int).to_string(),
            "-x0*y0 + x0 + y0"
        );
        assert_eq!(p("pi^-6*x + 2", CoeffRing::Rat).to_string(), "x*pi^-6 + 2");
        assert_eq!(Poly::zero(F3).to_string(), "0");
    }

    #[test]
    fn split_by_variable() {
        let ring = F3;
        let t = Var::new("t").unwrap();
        let parts = p("2*a*b^4 + t*b^6 + t*a", ring).split_by(t);
        assert_eq!(parts[&0], p("2*a*b^4", ring));
        assert_eq!(parts[&1], p("b^6 + a", ring));
    }
}
