//! Integral models of Artin–Schreier levels over `R = F_p[[π]]`.
//!
//! An equation `X^p - π^{(p-1)n} X = a` with `a` integral defines a torsor
//! under `M_n = ker(X ↦ X^p - π^{(p-1)n} X)`. For `n = 0` this is the étale
//! group `ℤ/p`; for `n > 0` the special fibre is `x^p = ā`, an
//! `α_p`-torsor.
//!
//! A generic Artin–Schreier level `T^p - T = a` with a pole in `π` is made
//! integral by `T = π^{-m} T̃` and clearing `π^{pm}`. [`normalize_example`]
//! does this for the length-2 cocycle `(π^{-pm} a1, a2)`, optionally shifted
//! by the coboundary of `(π^{-m} b1, 0)`, with `m = p m'` on the first level
//! and `m̃ = m'(p(p-1)+1)` on the second.

use std::fmt;

use num_traits::One;

use crate::asw::{self, AswTower};
use crate::error::{Error, Result};
use crate::polyring::{CoeffRing, Poly, Substitution, Valuation, Var};
use crate::witt::{check_prime, WittVec};

/// `X^p - π^{(p-1)·n_twist} X = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverEquation {
    pub p: u64,
    pub variable: String,
    pub n_twist: u64,
    pub rhs: Poly,
}

impl CoverEquation {
    pub fn artin_schreier(p: u64, variable: &str, rhs: Poly) -> Self {
        CoverEquation {
            p,
            variable: variable.to_string(),
            n_twist: 0,
            rhs,
        }
    }

    /// Exponent of `π` in the linear coefficient.
    pub fn linear_exponent(&self) -> i64 {
        ((self.p - 1) * self.n_twist) as i64
    }

    /// `X^p - π^e X - rhs`.
    pub fn as_poly(&self) -> Poly {
        let x = Poly::var(self.rhs.ring(), &self.variable);
        x.pow(self.p) - x.mul_pi_pow(self.linear_exponent()) - &self.rhs
    }

    pub fn is_integral(&self) -> bool {
        self.rhs.pi_valuation().is_integral()
    }
}

impl fmt::Display for CoverEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = &self.variable;
        if self.n_twist == 0 {
            write!(f, "{x}^{} - {x} = {}", self.p, self.rhs)
        } else {
            write!(
                f,
                "{x}^{} - pi^({})*{x} = {}",
                self.p,
                self.linear_exponent(),
                self.rhs
            )
        }
    }
}

/// `m = p·m'` and `m̃ = m'·(p(p-1)+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RescaleParams {
    pub p: u64,
    pub m_prime: u64,
    pub m: u64,
    pub m_tilde: u64,
}

impl RescaleParams {
    pub fn new(p: u64, m_prime: u64) -> Result<Self> {
        check_prime(p)?;
        if m_prime == 0 {
            return Err(Error::InvalidArgument("m' must be positive".into()));
        }
        Ok(RescaleParams {
            p,
            m_prime,
            m: p * m_prime,
            m_tilde: m_prime * (p * (p - 1) + 1),
        })
    }

    /// `π`-exponent of the `k`-th carry term on the rescaled second level:
    /// `m̃p - m(pk + p - k)`, which equals `p m'(p-1)(p-1-k)`.
    pub fn carry_exponent(&self, k: u64) -> i64 {
        let (p, m) = (self.p as i64, self.m as i64);
        let k = k as i64;
        self.m_tilde as i64 * p - m * (p * k + p - k)
    }

    /// `(k, exponent)` for `k = 1..p-1`.
    pub fn exponent_certificate(&self) -> Vec<(u64, i64)> {
        (1..self.p).map(|k| (k, self.carry_exponent(k))).collect()
    }
}

/// `a + b^p - π^{(p-1)n} b`, the `M_n` coboundary shift.
pub fn mn_shift(p: u64, a: &Poly, b: &Poly, n_twist: u64) -> Result<Poly> {
    a.checked_add(&b.pow(p))?
        .checked_sub(&b.mul_pi_pow(((p - 1) * n_twist) as i64))
}

/// The outcome of `T = π^{-m} T̃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rescaling {
    pub equation: CoverEquation,
    pub old_variable: String,
    pub exponent: u64,
}

impl Rescaling {
    /// `old ↦ π^{-m}·new`, for rewriting the levels above.
    pub fn substitution(&self) -> Result<Substitution> {
        let ring = self.equation.rhs.ring();
        let new = Poly::try_var(ring, &self.equation.variable)?.mul_pi_pow(-(self.exponent as i64));
        Substitution::new().bind(&self.old_variable, new)
    }
}

/// Rewrites `T^p - T = rhs` in `T̃ = π^m T` and multiplies through by
/// `π^{pm}`, giving `T̃^p - π^{m(p-1)} T̃ = π^{pm} rhs`.
pub fn rescale_level(eq: &CoverEquation, m: u64, new_variable: &str) -> Result<Rescaling> {
    if eq.n_twist != 0 {
        return Err(Error::InvalidArgument(format!(
            "rescaling expects an Artin-Schreier equation, `{}` has twist {}",
            eq.variable, eq.n_twist
        )));
    }
    Var::new(new_variable)?;
    let rhs = eq.rhs.mul_pi_pow((eq.p * m) as i64);
    Ok(Rescaling {
        equation: CoverEquation {
            p: eq.p,
            variable: new_variable.to_string(),
            n_twist: m,
            rhs,
        },
        old_variable: eq.variable.clone(),
        exponent: m,
    })
}

/// Least `k ≥ 0` with `π^{pk}·rhs` integral.
fn minimal_rescaling(rhs: &Poly, p: u64) -> u64 {
    match rhs.pi_valuation() {
        Valuation::Finite(v) if v < 0 => (-v as u64).div_ceil(p),
        _ => 0,
    }
}

/// A rescaled length-2 tower.
#[derive(Clone, Debug)]
pub struct CoverTower2 {
    pub params: RescaleParams,
    pub level1: CoverEquation,
    pub level2: CoverEquation,
    /// The cocycle the tower was built from.
    pub provenance: WittVec,
    /// The generic tower, in `T1, T2` (or `S1, S2` when shifted).
    pub generic: AswTower,
    /// `level2.variable = π^{m̃}·T2 + level2_adjustment`.
    pub level2_adjustment: Poly,
    /// Base generator rewritten through the level-1 equation, if any.
    pub eliminated: Option<String>,
    /// Least exponents that would clear the poles of each generic level.
    pub minimal_rescaling: [u64; 2],
}

/// Builds the integral model of `(T1^p, T2^p) - (T1, T2) = (π^{-pm} a1, a2)`,
/// or of the cocycle shifted by `F(b) - b` with `b = (π^{-m} b1, 0)`.
///
/// Level 1 is rescaled by `m` and level 2 by `m̃`. When the rescaled second
/// level still has a pole, `a1` is rewritten through the first level
/// equation and the polar part is absorbed by a change of the level-2
/// variable, which requires it to be a `p`-th power. Anything left over is
/// reported as `NotIntegral`.
pub fn normalize_example(
    a1: &Poly,
    a2: &Poly,
    b1: Option<&Poly>,
    params: RescaleParams,
) -> Result<CoverTower2> {
    let p = params.p;
    let ring = CoeffRing::ModP(p);
    for f in [Some(a1), Some(a2), b1].into_iter().flatten() {
        if f.ring() != ring {
            return Err(Error::RingMismatch(ring, f.ring()));
        }
    }
    let (m, mt) = (params.m as i64, params.m_tilde);
    let cocycle = WittVec::new(p, vec![a1.mul_pi_pow(-(p as i64) * m), a2.clone()])?;
    let (cocycle, generic_names, names) = match b1 {
        Some(b1) => {
            let b = WittVec::new(p, vec![b1.mul_pi_pow(-m), Poly::zero(ring)])?;
            (
                asw::shift_cocycle(&cocycle, &b)?,
                ["S1", "S2"],
                ["s1", "s2"],
            )
        }
        None => (cocycle, ["T1", "T2"], ["t1", "t2"]),
    };
    let generic = asw::build_tower(&cocycle)?.rename(&generic_names)?;

    let level1 = rescale_level(
        &CoverEquation::artin_schreier(p, generic_names[0], generic.levels[0].rhs.clone()),
        params.m,
        names[0],
    )?;
    let rhs2 = generic.levels[1].rhs.substitute(&level1.substitution()?)?;
    let minimal = [
        minimal_rescaling(&generic.levels[0].rhs, p),
        minimal_rescaling(&rhs2, p),
    ];
    let level2 = rescale_level(
        &CoverEquation::artin_schreier(p, generic_names[1], rhs2),
        mt,
        names[1],
    )?;

    let level1 = level1.equation;
    if !level1.is_integral() {
        return Err(Error::NotIntegral(format!("level 1: {level1}")));
    }
    let eliminate = a1
        .as_term()
        .filter(|(c, m)| c.is_one() && m.degree() == 1 && m.pi_exponent() == 0)
        .map(|(_, m)| m.iter().next().unwrap().0);
    let (level2, adjustment, eliminated) = integralize(level2.equation, &level1, eliminate)?;

    Ok(CoverTower2 {
        params,
        level1,
        level2,
        provenance: cocycle,
        generic,
        level2_adjustment: adjustment,
        eliminated,
        minimal_rescaling: minimal,
    })
}

fn integralize(
    mut eq: CoverEquation,
    base: &CoverEquation,
    eliminate: Option<Var>,
) -> Result<(CoverEquation, Poly, Option<String>)> {
    let p = eq.p;
    let ring = eq.rhs.ring();
    let mut adjustment = Poly::zero(ring);
    if eq.is_integral() {
        return Ok((eq, adjustment, None));
    }

    let mut eliminated = None;
    if let Some(g) = eliminate {
        let parts = base.rhs.split_by(g);
        let linear = parts.get(&1).is_some_and(|c| *c == Poly::one(ring));
        if linear && parts.keys().all(|&e| e <= 1) {
            let rest = parts.get(&0).cloned().unwrap_or_else(|| Poly::zero(ring));
            let x = Poly::var(ring, &base.variable);
            let solved = x.pow(p) - x.mul_pi_pow(base.linear_exponent()) - rest;
            eq.rhs = eq
                .rhs
                .substitute(&Substitution::new().bind_var(g, solved))?;
            eliminated = Some(g.name().to_string());
        }
    }

    let e = eq.linear_exponent();
    while let Valuation::Finite(v) = eq.rhs.pi_valuation() {
        if v >= 0 {
            break;
        }
        let polar = eq.rhs.pi_component(v);
        let root = (v % p as i64 == 0)
            .then(|| pth_root(&polar, p))
            .flatten()
            .ok_or_else(|| {
                Error::NotIntegral(format!(
                    "level `{}` has polar part pi^{v}*({polar}) which is not a p-th power",
                    eq.variable
                ))
            })?;
        let w = -root.mul_pi_pow(v / p as i64);
        eq.rhs = &eq.rhs + w.pow(p) - w.mul_pi_pow(e);
        adjustment = adjustment + w;
    }
    Ok((eq, adjustment, eliminated))
}

/// `g` with `g^p = f` over F_p, if every exponent of `f` is divisible by `p`.
pub(crate) fn pth_root(f: &Poly, p: u64) -> Option<Poly> {
    let mut root = Poly::zero(f.ring());
    for (m, c) in f.terms() {
        let r = m.root(p as i64)?;
        root = root + Poly::monomial(f.ring(), r, c.clone());
    }
    Some(root)
}

/// `ā` for an integral `X^p - π^{(p-1)n} X = a` with `n > 0`; the special
/// fibre is then the `α_p`-torsor `x^p = ā`.
pub fn special_fibre(eq: &CoverEquation) -> Result<Poly> {
    if eq.n_twist == 0 {
        return Err(Error::EtaleFibre(eq.variable.clone()));
    }
    eq.rhs.reduce_mod_pi()
}
