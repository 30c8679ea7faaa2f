//! `α_p`-torsors on a special fibre.
//!
//! Over an affine `F_p`-scheme with coordinate ring `B`, the `α_p`-torsor
//! `x^p = v` is trivial iff `v` is a `p`-th power in `B`, and `x^p = u`,
//! `x^p = v` are the same class iff `v - u` is. The rings handled here are
//! tower quotients `F_p[base][t_1, .., t_h] / (t_i^p - a_i)` with every
//! `a_i` written in the variables below `t_i`.
//!
//! When `h = 1` and the relation is an independent indeterminate `a`, the
//! identity `(Σ c_i t^i)^p = Σ c_i^p a^i` turns membership into a check on
//! exponents. [`brute_force_member`] decides the same question by search.

mod brute;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::intmodel::pth_root;
use crate::polyring::{CoeffRing, Poly, Var};
use crate::witt::check_prime;

pub use brute::{brute_force_member, SEARCH_LIMIT};

/// Tallest tower [`FibreRing`] accepts.
pub const MAX_HEIGHT: usize = 2;

/// `t^p = relation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub name: String,
    pub relation: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreRing {
    p: u64,
    base_vars: Vec<String>,
    roots: Vec<Root>,
}

impl FibreRing {
    pub fn new(p: u64, base_vars: &[&str]) -> Result<Self> {
        check_prime(p)?;
        let mut ring = FibreRing {
            p,
            base_vars: Vec::new(),
            roots: Vec::new(),
        };
        for name in base_vars {
            Var::new(name)?;
            if ring.knows(name) || *name == crate::polyring::PI {
                return Err(Error::InvalidArgument(format!(
                    "variable `{name}` declared twice"
                )));
            }
            ring.base_vars.push(name.to_string());
        }
        Ok(ring)
    }

    /// Adjoins `name` with `name^p = relation`, the relation written over
    /// the current ring.
    pub fn adjoin_root(mut self, name: &str, relation: Poly) -> Result<Self> {
        Var::new(name)?;
        if self.knows(name) || name == crate::polyring::PI {
            return Err(Error::InvalidArgument(format!(
                "variable `{name}` declared twice"
            )));
        }
        if self.roots.len() == MAX_HEIGHT {
            return Err(Error::UnsupportedRing(format!(
                "towers above height {MAX_HEIGHT} are not supported"
            )));
        }
        self.check_poly(&relation)?;
        self.roots.push(Root {
            name: name.to_string(),
            relation,
        });
        Ok(self)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ring(&self) -> CoeffRing {
        CoeffRing::ModP(self.p)
    }

    pub fn base_vars(&self) -> &[String] {
        &self.base_vars
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn height(&self) -> usize {
        self.roots.len()
    }

    fn knows(&self, name: &str) -> bool {
        self.base_vars.iter().any(|v| v == name) || self.roots.iter().any(|r| r.name == name)
    }

    fn check_poly(&self, f: &Poly) -> Result<()> {
        if f.ring() != self.ring() {
            return Err(Error::RingMismatch(self.ring(), f.ring()));
        }
        match f.variables().into_iter().find(|v| !self.knows(v)) {
            Some(v) => Err(Error::UnknownVariable(v)),
            None => Ok(()),
        }
    }

    /// Rewrites every `t^e` with `e ≥ p` through the relations, top root first.
    fn reduce(&self, f: &Poly) -> Poly {
        let mut f = f.clone();
        for root in self.roots.iter().rev() {
            let t = Var::new(&root.name).expect("validated on adjoin");
            if f.degree_in(t) < self.p as i64 {
                continue;
            }
            let tp = Poly::var(self.ring(), &root.name);
            let mut powers: BTreeMap<i64, Poly> = BTreeMap::new();
            let mut out = Poly::zero(self.ring());
            for (e, part) in f.split_by(t) {
                let (q, r) = (e / self.p as i64, e % self.p as i64);
                let rel = powers
                    .entry(q)
                    .or_insert_with(|| root.relation.pow(q as u64))
                    .clone();
                out = out + part * rel * tp.pow(r as u64);
            }
            f = out;
        }
        f
    }
}

impl fmt::Display for FibreRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[{}]", self.p, self.base_vars.join(", "))?;
        if !self.roots.is_empty() {
            let names: Vec<_> = self.roots.iter().map(|r| r.name.as_str()).collect();
            let rels: Vec<_> = self
                .roots
                .iter()
                .map(|r| format!("{}^{} - ({})", r.name, self.p, r.relation))
                .collect();
            write!(f, "[{}]/({})", names.join(", "), rels.join(", "))?;
        }
        Ok(())
    }
}

/// An element of a [`FibreRing`] with every root exponent below `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotElem {
    ring: Arc<FibreRing>,
    poly: Poly,
}

/// Reduces `expr` into canonical form in `ring`.
pub fn canonicalize(expr: &Poly, ring: &Arc<FibreRing>) -> Result<QuotElem> {
    ring.check_poly(expr)?;
    Ok(QuotElem {
        ring: ring.clone(),
        poly: ring.reduce(expr),
    })
}

impl QuotElem {
    pub fn parse(text: &str, ring: &Arc<FibreRing>) -> Result<Self> {
        canonicalize(&Poly::parse(text, ring.ring())?, ring)
    }

    pub fn zero(ring: &Arc<FibreRing>) -> Self {
        QuotElem {
            ring: ring.clone(),
            poly: Poly::zero(ring.ring()),
        }
    }

    pub fn ring(&self) -> &Arc<FibreRing> {
        &self.ring
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Coefficients over the base, keyed by root exponent vectors.
    pub fn components(&self) -> BTreeMap<Vec<i64>, Poly> {
        let mut parts = BTreeMap::from([(Vec::new(), self.poly.clone())]);
        for root in &self.ring.roots {
            let t = Var::new(&root.name).expect("validated on adjoin");
            let mut next = BTreeMap::new();
            for (key, part) in parts {
                for (e, sub) in part.split_by(t) {
                    let mut k = key.clone();
                    k.push(e);
                    next.insert(k, sub);
                }
            }
            parts = next;
        }
        parts
    }

    fn same_ring(&self, other: &QuotElem) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "elements of different rings {} and {}",
                self.ring, other.ring
            )))
        }
    }

    pub fn checked_add(&self, other: &QuotElem) -> Result<QuotElem> {
        self.same_ring(other)?;
        Ok(QuotElem {
            ring: self.ring.clone(),
            poly: &self.poly + &other.poly,
        })
    }

    pub fn checked_sub(&self, other: &QuotElem) -> Result<QuotElem> {
        self.same_ring(other)?;
        Ok(QuotElem {
            ring: self.ring.clone(),
            poly: &self.poly - &other.poly,
        })
    }

    pub fn checked_mul(&self, other: &QuotElem) -> Result<QuotElem> {
        self.same_ring(other)?;
        Ok(QuotElem {
            ring: self.ring.clone(),
            poly: self.ring.reduce(&(&self.poly * &other.poly)),
        })
    }

    pub fn pow(&self, mut e: u64) -> QuotElem {
        let mut acc = Poly::one(self.ring.ring());
        let mut base = self.poly.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.ring.reduce(&(&acc * &base));
            }
            e >>= 1;
            if e > 0 {
                base = self.ring.reduce(&(&base * &base));
            }
        }
        QuotElem {
            ring: self.ring.clone(),
            poly: acc,
        }
    }
}

impl fmt::Display for QuotElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.poly, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PthPowerVerdict {
    pub is_pth_power: bool,
    pub witness: Option<QuotElem>,
    pub obstruction: Option<String>,
}

impl PthPowerVerdict {
    pub(crate) fn member(witness: QuotElem) -> Self {
        PthPowerVerdict {
            is_pth_power: true,
            witness: Some(witness),
            obstruction: None,
        }
    }

    pub(crate) fn non_member(obstruction: String) -> Self {
        PthPowerVerdict {
            is_pth_power: false,
            witness: None,
            obstruction: Some(obstruction),
        }
    }
}

impl Serialize for PthPowerVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PthPowerVerdict", 3)?;
        st.serialize_field("is_pth_power", &self.is_pth_power)?;
        st.serialize_field("witness", &self.witness.as_ref().map(|w| w.to_string()))?;
        st.serialize_field("obstruction", &self.obstruction)?;
        st.end()
    }
}

impl fmt::Display for PthPowerVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.witness, &self.obstruction) {
            (Some(w), _) => write!(f, "p-th power, witness {w}"),
            (None, Some(o)) => write!(f, "not a p-th power: {o}"),
            (None, None) => f.write_str("not a p-th power"),
        }
    }
}

fn render_term(
    ring: CoeffRing,
    m: &crate::polyring::Monomial,
    c: &num_rational::BigRational,
) -> String {
    Poly::monomial(ring, m.clone(), c.clone()).to_string()
}

/// Decides whether `v` is a `p`-th power in its ring and, if so, returns a
/// root that has been checked against `v`.
pub fn frobenius_image_member(v: &QuotElem) -> Result<PthPowerVerdict> {
    let ring = v.ring();
    let p = ring.p();
    let verdict = match ring.height() {
        0 => match pth_root(v.poly(), p) {
            Some(r) => PthPowerVerdict::member(QuotElem {
                ring: ring.clone(),
                poly: r,
            }),
            None => {
                let (m, c) = v
                    .poly()
                    .terms_canonical()
                    .into_iter()
                    .find(|(m, _)| m.root(p as i64).is_none())
                    .expect("some term has no root");
                PthPowerVerdict::non_member(format!(
                    "term {} is not a p-th power",
                    render_term(ring.ring(), m, c)
                ))
            }
        },
        1 => height_one(v)?,
        h => {
            return Err(Error::UnsupportedRing(format!(
                "exponent test needs a tower of height at most 1, got {h}"
            )))
        }
    };
    if let Some(w) = &verdict.witness {
        if w.pow(p) != *v {
            return Err(Error::IdentityFailure(format!("({w})^{p} != {v}")));
        }
    }
    Ok(verdict)
}

fn height_one(v: &QuotElem) -> Result<PthPowerVerdict> {
    let ring = v.ring();
    let (p, k) = (ring.p(), ring.ring());
    let root = &ring.roots()[0];
    let a = root
        .relation
        .as_term()
        .filter(|(c, m)| c.is_one() && m.degree() == 1 && m.pi_exponent() == 0)
        .map(|(_, m)| m.iter().next().unwrap().0)
        .ok_or_else(|| {
            Error::UnsupportedRing(format!(
                "relation {}^{p} = {} is not an independent indeterminate",
                root.name, root.relation
            ))
        })?;
    let t = Var::new(&root.name)?;

    let parts = v.poly().split_by(t);
    if let Some((i, c)) = parts.iter().find(|(i, _)| **i > 0) {
        return Ok(PthPowerVerdict::non_member(format!(
            "nonzero component {c} at {}^{i}",
            root.name
        )));
    }

    let tp = Poly::var(k, &root.name);
    let mut witness = Poly::zero(k);
    if let Some(c0) = parts.get(&0) {
        let mut classes: BTreeMap<i64, Poly> = BTreeMap::new();
        for (m, c) in c0.terms_canonical() {
            let e = m.exponent(a);
            let i = e % p as i64;
            let Some(r) = m.with_exponent(a, e - i).root(p as i64) else {
                return Ok(PthPowerVerdict::non_member(format!(
                    "term {} at {}^0 is not {a}^{i} times a p-th power",
                    render_term(k, m, c),
                    root.name
                )));
            };
            let class = classes.entry(i).or_insert_with(|| Poly::zero(k));
            *class = &*class + &Poly::monomial(k, r, c.clone());
        }
        for (i, ci) in classes {
            witness = witness + ci * tp.pow(i as u64);
        }
    }
    Ok(PthPowerVerdict::member(QuotElem {
        ring: ring.clone(),
        poly: witness,
    }))
}

/// `x^p = a` and `x^p = a_shifted` define the same `α_p`-torsor iff the
/// difference `a_shifted - a` is a `p`-th power. The witness is a root of
/// that difference.
pub fn same_alpha_torsor(a: &QuotElem, a_shifted: &QuotElem) -> Result<PthPowerVerdict> {
    frobenius_image_member(&a_shifted.checked_sub(a)?)
}
