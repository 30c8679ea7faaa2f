//! Artin–Schreier–Witt towers.
//!
//! A Witt vector `a = (a1, ..., an)` over an F_p-algebra defines the cover
//! `F(x) - x = a`. Component `i` of `F(x) - x` is `x_i^p - x_i` plus a
//! correction in `x_1, ..., x_{i-1}`, so the cover factors as a tower of
//! Artin–Schreier levels
//!
//! ```text
//! x_i^p - x_i = a_i - c_i(x_1, ..., x_{i-1})
//! ```
//!
//! The corrections `c_i` are read off the universal Witt subtraction, not
//! written down by hand. Replacing `a` by `a + F(b) - b` gives the same
//! cover, with `x ↦ x + b` (Witt sum) carrying solutions across.

use std::fmt;

use crate::error::{Error, Result};
use crate::polyring::{CoeffRing, Poly, Substitution};
use crate::witt::{self, WittVec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerLevel {
    pub variable: String,
    pub rhs: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AswTower {
    pub p: u64,
    pub levels: Vec<TowerLevel>,
}

impl AswTower {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Renames the tower variables, rewriting every right-hand side.
    pub fn rename(&self, names: &[&str]) -> Result<AswTower> {
        if names.len() != self.levels.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} names for a tower of height {}",
                names.len(),
                self.levels.len()
            )));
        }
        let ring = self.levels[0].rhs.ring();
        let mut sub = Substitution::new();
        for (level, name) in self.levels.iter().zip(names) {
            sub = sub.bind(&level.variable, Poly::try_var(ring, name)?)?;
        }
        let levels = self
            .levels
            .iter()
            .zip(names)
            .map(|(level, name)| {
                Ok(TowerLevel {
                    variable: name.to_string(),
                    rhs: level.rhs.substitute(&sub)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(AswTower { p: self.p, levels })
    }

    /// The equations `x_i^p - x_i - rhs_i` as polynomials.
    pub fn equations(&self) -> Vec<Poly> {
        self.levels
            .iter()
            .map(|l| {
                let x = Poly::var(l.rhs.ring(), &l.variable);
                x.pow(self.p) - &x - &l.rhs
            })
            .collect()
    }
}

impl fmt::Display for AswTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.levels.iter().enumerate() {
            writeln!(
                f,
                "({}) {v}^{p} - {v} = {}",
                i + 1,
                l.rhs,
                v = l.variable,
                p = self.p
            )?;
        }
        Ok(())
    }
}

/// Tower variable names `x1, ..., xn`.
pub fn tower_variables(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// `c_i(x_1..x_{i-1}) = (F(x) - x)_i - (x_i^p - x_i)` for each level, in `ring`.
pub fn level_corrections(p: u64, n: usize, ring: CoeffRing) -> Result<Vec<Poly>> {
    let x = WittVec::symbolic_from(p, "x", 1, n, ring)?;
    let fx = witt::f_minus_id(&x)?;
    fx.components()
        .iter()
        .enumerate()
        .map(|(i, comp)| {
            let xi = x.component(i);
            let c = comp - &(xi.pow(p) - xi);
            for later in &x.components()[i..] {
                let (_, m) = later.as_term().expect("tower variable");
                let v = m.iter().next().unwrap().0;
                if c.contains_var(v) {
                    return Err(Error::IdentityFailure(format!(
                        "level {} correction involves {v}",
                        i + 1
                    )));
                }
            }
            Ok(c)
        })
        .collect()
}

/// The tower of `F(x) - x = a` for `a` over F_p.
pub fn build_tower(a: &WittVec) -> Result<AswTower> {
    let p = a.p();
    if a.ring() != CoeffRing::ModP(p) {
        return Err(Error::UnsupportedRing(format!(
            "towers are built over MODP({p}), got {}",
            a.ring()
        )));
    }
    let names = tower_variables(a.len());
    for comp in a.components() {
        if let Some(n) = names.iter().find(|n| comp.variables().contains(n.as_str())) {
            return Err(Error::InvalidArgument(format!(
                "cocycle uses the tower variable {n}"
            )));
        }
    }
    let corrections = level_corrections(p, a.len(), a.ring())?;
    let levels = names
        .into_iter()
        .zip(a.components().iter().zip(corrections))
        .map(|(variable, (ai, ci))| TowerLevel {
            variable,
            rhs: ai - &ci,
        })
        .collect();
    Ok(AswTower { p, levels })
}

/// `a + (F(b) - b)`.
pub fn shift_cocycle(a: &WittVec, b: &WittVec) -> Result<WittVec> {
    witt::add(a, &witt::f_minus_id(b)?)
}

/// Both sides of the transport identities behind the coboundary ambiguity.
#[derive(Clone, Debug)]
pub struct ConsistencyProof {
    /// `F(x + b) - (x + b)`
    pub shifted_lhs: WittVec,
    /// `(F(x) - x) + (F(b) - b)`
    pub shifted_rhs: WittVec,
    /// `(F(x) - x) - a`
    pub defect: WittVec,
    /// `(F(x + b) - (x + b)) - (a + F(b) - b)`
    pub transported_defect: WittVec,
}

/// Checks, as polynomial identities in a symbolic `x`, that
/// `F(x+b) - (x+b) = F(x) - x + F(b) - b` and that the substitution
/// `x ↦ x + b` turns the equations for `a + F(b) - b` into those for `a`.
pub fn substitution_consistency(a: &WittVec, b: &WittVec) -> Result<ConsistencyProof> {
    let p = a.p();
    let ring = a.ring();
    let names = tower_variables(a.len());
    for comp in a.components().iter().chain(b.components()) {
        if let Some(n) = names.iter().find(|n| comp.variables().contains(n.as_str())) {
            return Err(Error::InvalidArgument(format!(
                "input uses the tower variable {n}"
            )));
        }
    }
    let x = WittVec::symbolic_from(p, "x", 1, a.len(), ring)?;
    let xb = witt::add(&x, b)?;
    let coboundary = witt::f_minus_id(b)?;
    let shifted_lhs = witt::f_minus_id(&xb)?;
    let shifted_rhs = witt::add(&witt::f_minus_id(&x)?, &coboundary)?;
    if shifted_lhs != shifted_rhs {
        return Err(Error::IdentityFailure(format!(
            "F(x+b) - (x+b) = {shifted_lhs} but F(x) - x + F(b) - b = {shifted_rhs}"
        )));
    }
    let defect = witt::sub(&witt::f_minus_id(&x)?, a)?;
    let transported_defect = witt::sub(&shifted_lhs, &witt::add(a, &coboundary)?)?;
    if defect != transported_defect {
        return Err(Error::IdentityFailure(format!(
            "tower defect {defect} is not preserved by x -> x + b: {transported_defect}"
        )));
    }
    Ok(ConsistencyProof {
        shifted_lhs,
        shifted_rhs,
        defect,
        transported_defect,
    })
}
