//! Truncated Witt vectors of length `n`.
//!
//! Addition and negation are evaluated through the universal polynomials
//! `S_i(x, y)` and `N_i(x)`, which are obtained by solving the ghost
//! equations
//!
//! ```text
//! Σ_{j≤i} p^j S_j^{p^{i-j}} = w_i(x) + w_i(y),   w_i(x) = Σ_{j≤i} p^j x_j^{p^{i-j}}
//! ```
//!
//! successively over ℚ, then certified integral with [`Poly::rationalize`].
//! Over F_p the integral polynomials are reduced mod p before evaluation, so
//! a correction such as `p⁻¹ Σ C(p,k) x^{pk} (-x)^{p-k}` is always divided
//! out over ℤ first.
//!
//! Components are 0-indexed here (`x0, ..., x_{n-1}`).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, LazyLock, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::polyring::{CoeffRing, Poly, Substitution, Var};

pub fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct WittVec {
    p: u64,
    components: Vec<Poly>,
}

impl WittVec {
    pub fn new(p: u64, components: Vec<Poly>) -> Result<Self> {
        check_prime(p)?;
        let Some(first) = components.first() else {
            return Err(Error::ShapeMismatch(
                "Witt vectors have length at least 1".into(),
            ));
        };
        let ring = first.ring();
        if let Some(c) = components.iter().find(|c| c.ring() != ring) {
            return Err(Error::RingMismatch(ring, c.ring()));
        }
        if let CoeffRing::ModP(q) = ring {
            if q != p {
                return Err(Error::InvalidArgument(format!(
                    "Witt vector for p = {p} with coefficients mod {q}"
                )));
            }
        }
        Ok(WittVec { p, components })
    }

    /// `(prefix0, ..., prefix{n-1})` as independent indeterminates.
    pub fn symbolic(p: u64, prefix: &str, n: usize, ring: CoeffRing) -> Result<Self> {
        Self::symbolic_from(p, prefix, 0, n, ring)
    }

    pub fn symbolic_from(
        p: u64,
        prefix: &str,
        start: usize,
        n: usize,
        ring: CoeffRing,
    ) -> Result<Self> {
        let comps = (start..start + n)
            .map(|i| Poly::try_var(ring, &format!("{prefix}{i}")))
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, comps)
    }

    pub fn zero(p: u64, n: usize, ring: CoeffRing) -> Result<Self> {
        Self::new(p, vec![Poly::zero(ring); n])
    }

    /// Parses `"(poly, poly, ...)"`.
    pub fn parse(text: &str, p: u64, ring: CoeffRing) -> Result<Self> {
        let trimmed = text.trim();
        let inner = trimmed
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::parse(0, "Witt vectors are written `(c1, c2, ...)`"))?;
        let comps = split_top_level(inner)
            .into_iter()
            .map(|s| Poly::parse(s, ring))
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, comps)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ring(&self) -> CoeffRing {
        self.components[0].ring()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Poly {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    pub fn to_ring(&self, ring: CoeffRing) -> Result<Self> {
        Self::new(
            self.p,
            self.components
                .iter()
                .map(|c| c.to_ring(ring))
                .collect::<Result<_>>()?,
        )
    }

    pub fn substitute(&self, sub: &Substitution) -> Result<Self> {
        Self::new(
            self.p,
            self.components
                .iter()
                .map(|c| c.substitute(sub))
                .collect::<Result<_>>()?,
        )
    }

    fn check_compatible(&self, other: &WittVec) -> Result<()> {
        if self.p != other.p || self.len() != other.len() {
            return Err(Error::ShapeMismatch(format!(
                "p = {}, n = {} vs p = {}, n = {}",
                self.p,
                self.len(),
                other.p,
                other.len()
            )));
        }
        if self.ring() != other.ring() {
            return Err(Error::RingMismatch(self.ring(), other.ring()));
        }
        Ok(())
    }
}

/// Splits on commas that are not inside parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

impl fmt::Display for WittVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for WittVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WittVec[p={}]{self}", self.p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhostVec(pub Vec<Poly>);

impl GhostVec {
    pub fn components(&self) -> &[Poly] {
        &self.0
    }

    pub fn add(&self, other: &GhostVec) -> GhostVec {
        GhostVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> GhostVec {
        GhostVec(self.0.iter().map(|a| -a).collect())
    }
}

/// `Σ_{j≤i} p^j w_j^{p^{i-j}}` for each `i`. Rejects F_p input, where the
/// ghost map loses information.
pub fn ghost_map(w: &WittVec) -> Result<GhostVec> {
    if let CoeffRing::ModP(_) = w.ring() {
        return Err(Error::UnsupportedRing(
            "the ghost map is only defined over INT or RAT".into(),
        ));
    }
    Ok(GhostVec(ghost_components(w.p, w.components())))
}

fn ghost_components(p: u64, comps: &[Poly]) -> Vec<Poly> {
    (0..comps.len())
        .map(|i| {
            (0..=i)
                .map(|j| {
                    comps[j]
                        .pow(p.pow((i - j) as u32))
                        .scale_int(p.pow(j as u32) as i64)
                })
                .sum()
        })
        .collect()
}

/// Integral universal sum and negation polynomials, in `x0..`, `y0..`.
#[derive(Clone, Debug)]
pub struct WittUniversalPolys {
    pub p: u64,
    pub n: usize,
    pub sum_polys: Vec<Poly>,
    pub neg_polys: Vec<Poly>,
}

type CacheSlot = Arc<OnceLock<std::result::Result<Arc<WittUniversalPolys>, Error>>>;

static UNIVERSAL: LazyLock<Mutex<HashMap<(u64, usize), CacheSlot>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// Universal polynomials for `(p, n)`, computed at most once per key.
pub fn universal_polys(p: u64, n: usize) -> Result<Arc<WittUniversalPolys>> {
    check_prime(p)?;
    if n == 0 {
        return Err(Error::ShapeMismatch(
            "Witt vectors have length at least 1".into(),
        ));
    }
    let slot = UNIVERSAL.lock().unwrap().entry((p, n)).or_default().clone();
    slot.get_or_init(|| compute_universal(p, n).map(Arc::new))
        .clone()
}

fn compute_universal(p: u64, n: usize) -> Result<WittUniversalPolys> {
    let q = CoeffRing::Rat;
    let x = WittVec::symbolic(p, "x", n, q)?;
    let y = WittVec::symbolic(p, "y", n, q)?;
    let gx = ghost_components(p, x.components());
    let gy = ghost_components(p, y.components());

    let solve = |targets: Vec<Poly>| -> Result<Vec<Poly>> {
        let mut solved: Vec<Poly> = Vec::with_capacity(n);
        for (i, target) in targets.into_iter().enumerate() {
            let lower: Vec<Poly> = (0..i)
                .map(|j| {
                    solved[j]
                        .pow(p.pow((i - j) as u32))
                        .scale_int(p.pow(j as u32) as i64)
                })
                .collect();
            let mut rest = target;
            for l in lower {
                rest = rest - l;
            }
            let pi = BigInt::from(p).pow(i as u32);
            solved.push(rest.scale(&BigRational::new(1.into(), pi)));
        }
        solved.iter().map(Poly::rationalize).collect()
    };

    let sum_targets = gx.iter().zip(&gy).map(|(a, b)| a + b).collect();
    let neg_targets = gx.iter().map(|a| -a).collect();
    let sum_polys = solve(sum_targets)?;
    let neg_polys = solve(neg_targets)?;
    Ok(WittUniversalPolys {
        p,
        n,
        sum_polys,
        neg_polys,
    })
}

fn bindings(prefix: &str, values: &[Poly]) -> Substitution {
    values
        .iter()
        .enumerate()
        .fold(Substitution::new(), |s, (i, v)| {
            s.bind_var(Var::new(&format!("{prefix}{i}")).unwrap(), v.clone())
        })
}

pub fn add(u: &WittVec, v: &WittVec) -> Result<WittVec> {
    u.check_compatible(v)?;
    let polys = universal_polys(u.p, u.len())?;
    let ring = u.ring();
    let sub = bindings("x", u.components());
    let sub = v.components().iter().enumerate().fold(sub, |s, (i, c)| {
        s.bind_var(Var::new(&format!("y{i}")).unwrap(), c.clone())
    });
    let comps = polys
        .sum_polys
        .iter()
        .map(|s| s.to_ring(ring)?.substitute(&sub))
        .collect::<Result<Vec<_>>>()?;
    WittVec::new(u.p, comps)
}

pub fn neg(u: &WittVec) -> Result<WittVec> {
    let polys = universal_polys(u.p, u.len())?;
    let ring = u.ring();
    let sub = bindings("x", u.components());
    let comps = polys
        .neg_polys
        .iter()
        .map(|s| s.to_ring(ring)?.substitute(&sub))
        .collect::<Result<Vec<_>>>()?;
    WittVec::new(u.p, comps)
}

pub fn sub(u: &WittVec, v: &WittVec) -> Result<WittVec> {
    u.check_compatible(v)?;
    add(u, &neg(v)?)
}

/// Componentwise `p`-th power.
pub fn frobenius(w: &WittVec) -> WittVec {
    WittVec {
        p: w.p,
        components: w.components.iter().map(|c| c.pow(w.p)).collect(),
    }
}

/// `F(w) - w` in Witt arithmetic.
pub fn f_minus_id(w: &WittVec) -> Result<WittVec> {
    sub(&frobenius(w), w)
}

/// The length-2 closed form
/// `(w1^p - w1, w2^p - w2 - p⁻¹ Σ_{k=1}^{p-1} C(p,k) w1^{pk} (-w1)^{p-k})`,
/// with the `p⁻¹`-sum divided out over ℤ before mapping into `w`'s ring.
/// It agrees with [`f_minus_id`] for odd `p` only: for `p = 2` Witt negation
/// is not componentwise.
pub fn f_minus_id_length2_closed_form(w: &WittVec) -> Result<WittVec> {
    if w.len() != 2 {
        return Err(Error::ShapeMismatch("closed form is for length 2".into()));
    }
    let p = w.p;
    let (w1, w2) = (w.component(0), w.component(1));
    let correction = carry_sum(p, w.ring(), |k| {
        let x = Poly::var(CoeffRing::Int, "_w");
        x.pow(p * k) * (-&x).pow(p - k)
    })?;
    let correction = correction.substitute(&Substitution::new().bind("_w", w1.clone())?)?;
    WittVec::new(p, vec![w1.pow(p) - w1, w2.pow(p) - w2 - correction])
}

/// `p⁻¹ Σ_{k=1}^{p-1} C(p,k) term(k)` with `term` an integer polynomial;
/// the division is exact over ℤ and the result is mapped into `ring`.
pub fn carry_sum(p: u64, ring: CoeffRing, term: impl Fn(u64) -> Poly) -> Result<Poly> {
    let mut total = Poly::zero(CoeffRing::Int);
    for k in 1..p {
        let c = binomial(p, k) / p;
        total = total + term(k).scale(&BigRational::from_integer(c));
    }
    total.to_ring(ring)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: CoeffRing = CoeffRing::Int;

    fn poly(s: &str, ring: CoeffRing) -> Poly {
        Poly::parse(s, ring).unwrap()
    }

    fn wv(s: &str, p: u64, ring: CoeffRing) -> WittVec {
        WittVec::parse(s, p, ring).unwrap()
    }

    #[test]
    fn ghost_examples() {
        assert_eq!(
            ghost_map(&wv("(a, b)", 2, Z)).unwrap(),
            GhostVec(vec![poly("a", Z), poly("a^2 + 2*b", Z)])
        );
        assert_eq!(
            ghost_map(&wv("(a)", 7, Z)).unwrap(),
            GhostVec(vec![poly("a", Z)])
        );
        assert_eq!(
            ghost_map(&wv("(1, 0)", 3, Z)).unwrap(),
            GhostVec(vec![poly("1", Z), poly("1", Z)])
        );
        assert!(ghost_map(&wv("(a)", 3, CoeffRing::ModP(3))).is_err());
    }

    #[test]
    fn universal_sum_length_two() {
        // (a^p + b^p - (a+b)^p) / p, expanded by hand
        let u = universal_polys(2, 2).unwrap();
        assert_eq!(
            u.sum_polys,
            vec![poly("x0 + y0", Z), poly("x1 + y1 - x0*y0", Z)]
        );
        assert_eq!(u.neg_polys, vec![poly("-x0", Z), poly("-x1 - x0^2", Z)]);
        let u = universal_polys(3, 2).unwrap();
        assert_eq!(
            u.sum_polys,
            vec![poly("x0 + y0", Z), poly("x1 + y1 - x0^2*y0 - x0*y0^2", Z)]
        );
    }

    #[test]
    fn cache_returns_shared_value() {
        let a = universal_polys(5, 2).unwrap();
        let b = universal_polys(5, 2).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert!(universal_polys(4, 2).is_err());
        assert!(universal_polys(3, 0).is_err());
    }

    #[test]
    fn length_one_is_ordinary_addition() {
        let f = CoeffRing::ModP(5);
        assert_eq!(
            add(&wv("(x)", 5, f), &wv("(y)", 5, f)).unwrap(),
            wv("(x + y)", 5, f)
        );
    }

    #[test]
    fn odd_negation_is_componentwise() {
        for p in [3, 5] {
            let x = WittVec::symbolic(p, "x", 3, Z).unwrap();
            let n = neg(&x).unwrap();
            let expected: Vec<Poly> = x.components().iter().map(|c| -c).collect();
            assert_eq!(n.components(), &expected[..]);
            assert_eq!(ghost_map(&n).unwrap(), ghost_map(&x).unwrap().neg());
        }
    }

    #[test]
    fn modp_sum_second_component() {
        let f = CoeffRing::ModP(3);
        let s = add(&wv("(a1, a2)", 3, f), &wv("(b1, b2)", 3, f)).unwrap();
        assert_eq!(s.component(1), &poly("a2 + b2 - a1^2*b1 - a1*b1^2", f));
    }

    #[test]
    fn frobenius_examples() {
        let f = CoeffRing::ModP(3);
        assert_eq!(frobenius(&wv("(x1, x2)", 3, f)), wv("(x1^3, x2^3)", 3, f));
        assert!(frobenius(&WittVec::zero(3, 2, f).unwrap()).is_zero());
        assert_eq!(
            frobenius(&wv("(pi^-1*b, 0)", 3, f)),
            wv("(pi^-3*b^3, 0)", 3, f)
        );
    }

    #[test]
    fn f_minus_id_examples() {
        let f = CoeffRing::ModP(3);
        assert_eq!(f_minus_id(&wv("(x)", 3, f)).unwrap(), wv("(x^3 - x)", 3, f));
        assert!(f_minus_id(&wv("(2)", 3, f)).unwrap().is_zero());

        // ghost oracle: ghost(F x - x) = ghost(F x) - ghost(x)
        let x = WittVec::symbolic_from(3, "x", 1, 2, Z).unwrap();
        let r = f_minus_id(&x).unwrap();
        let g = ghost_map(&r).unwrap();
        let expected = ghost_map(&frobenius(&x))
            .unwrap()
            .add(&ghost_map(&x).unwrap().neg());
        assert_eq!(g, expected);
        // (x1^9 - x1^3 - (x1^3 - x1)^3) / 3 = x1^7 - x1^5
        assert_eq!(r.component(1), &poly("x2^3 - x2 + x1^7 - x1^5", Z));
        assert_eq!(
            f_minus_id(&x.to_ring(f).unwrap()).unwrap().component(1),
            &poly("x2^3 - x2 + x1^7 + 2*x1^5", f)
        );
    }

    #[test]
    fn closed_form_matches() {
        for p in [3, 5] {
            let f = CoeffRing::ModP(p);
            let x = WittVec::symbolic_from(p, "x", 1, 2, f).unwrap();
            assert_eq!(
                f_minus_id(&x).unwrap(),
                f_minus_id_length2_closed_form(&x).unwrap()
            );
        }
    }

    #[test]
    fn shape_errors() {
        let f = CoeffRing::ModP(3);
        assert!(add(&wv("(x)", 3, f), &wv("(x, y)", 3, f)).is_err());
        assert!(add(&wv("(x)", 3, f), &wv("(x)", 3, Z)).is_err());
        assert!(WittVec::new(3, vec![]).is_err());
        assert!(WittVec::parse("(x)", 3, CoeffRing::ModP(5)).is_err());
        assert!(WittVec::parse("x, y", 3, f).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(7, 0), BigInt::from(1));
    }
}
