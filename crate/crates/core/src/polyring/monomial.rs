use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, LazyLock, RwLock};

use crate::error::{Error, Result};

/// Name of the uniformizer, the only variable allowed a negative exponent.
pub const PI: &str = "pi";

struct Interner {
    names: Vec<Arc<str>>,
    ids: HashMap<Arc<str>, u32>,
}

static INTERNER: LazyLock<RwLock<Interner>> = LazyLock::new(|| {
    let pi: Arc<str> = Arc::from(PI);
    RwLock::new(Interner {
        names: vec![pi.clone()],
        ids: HashMap::from([(pi, 0)]),
    })
});

/// An interned variable name.
///
/// Ids are process-local and only used for fast comparison and hashing.
/// Anything user-visible is ordered by [`Var::canonical_cmp`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    pub const PI: Var = Var(0);

    pub fn new(name: &str) -> Result<Var> {
        if !is_valid_name(name) {
            return Err(Error::InvalidVariable(name.to_string()));
        }
        Ok(Self::intern(name))
    }

    fn intern(name: &str) -> Var {
        if let Some(&id) = INTERNER.read().unwrap().ids.get(name) {
            return Var(id);
        }
        let mut interner = INTERNER.write().unwrap();
        if let Some(&id) = interner.ids.get(name) {
            return Var(id);
        }
        let id = interner.names.len() as u32;
        let name: Arc<str> = Arc::from(name);
        interner.names.push(name.clone());
        interner.ids.insert(name, id);
        Var(id)
    }

    pub fn name(&self) -> Arc<str> {
        INTERNER.read().unwrap().names[self.0 as usize].clone()
    }

    pub fn is_pi(&self) -> bool {
        *self == Var::PI
    }

    /// Alphabetical by name, with `pi` after every other variable.
    pub fn canonical_cmp(&self, other: &Var) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        match (self.is_pi(), other.is_pi()) {
            (true, _) => Ordering::Greater,
            (_, true) => Ordering::Less,
            _ => self.name().cmp(&other.name()),
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A power product of variables. Zero exponents are never stored and only
/// `pi` may carry a negative exponent.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(Var, i64)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn pi_power(e: i64) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Monomial(vec![(Var::PI, e)])
        }
    }

    pub fn from_exponents(exps: impl IntoIterator<Item = (Var, i64)>) -> Result<Self> {
        let mut acc: Vec<(Var, i64)> = Vec::new();
        for (v, e) in exps {
            match acc.iter_mut().find(|(w, _)| *w == v) {
                Some(slot) => slot.1 += e,
                None => acc.push((v, e)),
            }
        }
        acc.retain(|&(_, e)| e != 0);
        if let Some((v, _)) = acc.iter().find(|(v, e)| *e < 0 && !v.is_pi()) {
            return Err(Error::NegativeExponent(v.name().to_string()));
        }
        acc.sort_unstable_by_key(|&(v, _)| v);
        Ok(Monomial(acc))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: Var) -> i64 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn pi_exponent(&self) -> i64 {
        self.exponent(Var::PI)
    }

    /// Total degree, not counting `pi`.
    pub fn degree(&self) -> i64 {
        self.0
            .iter()
            .filter(|(v, _)| !v.is_pi())
            .map(|&(_, e)| e)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, i64)> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.exponent(v) != 0
    }

    pub fn without(&self, v: Var) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(w, _)| w != v).collect())
    }

    pub fn with_exponent(&self, v: Var, e: i64) -> Monomial {
        let mut out = self.without(v);
        if e != 0 {
            let at = out.0.partition_point(|&(w, _)| w < v);
            out.0.insert(at, (v, e));
        }
        out
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Raises every exponent to `e` times itself. Negative `e` is only
    /// meaningful for pure `pi` powers and is checked by the caller.
    pub fn pow(&self, e: i64) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, x)| (v, x * e)).collect())
    }

    /// `Some(root)` when every exponent is divisible by `k`.
    pub fn root(&self, k: i64) -> Option<Monomial> {
        if self.0.iter().all(|&(_, e)| e % k == 0) {
            Some(Monomial(self.0.iter().map(|&(v, e)| (v, e / k)).collect()))
        } else {
            None
        }
    }

    /// Variables paired with exponents in canonical (alphabetical, `pi` last) order.
    pub fn canonical_factors(&self) -> Vec<(Var, i64)> {
        let mut f = self.0.clone();
        f.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        f
    }

    /// Rendering order: graded lexicographic on non-`pi` variables sorted
    /// alphabetically, then by `pi` exponent. `Less` means "printed first".
    pub fn canonical_cmp(&self, other: &Monomial) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| {
                let a = self.canonical_factors();
                let b = other.canonical_factors();
                let a = a.iter().filter(|(v, _)| !v.is_pi());
                let b = b.iter().filter(|(v, _)| !v.is_pi());
                lex_desc(a, b)
            })
            .then_with(|| other.pi_exponent().cmp(&self.pi_exponent()))
    }
}

fn lex_desc<'a>(
    mut a: impl Iterator<Item = &'a (Var, i64)>,
    mut b: impl Iterator<Item = &'a (Var, i64)>,
) -> Ordering {
    loop {
        match (a.next(), b.next()) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Less,
            (None, Some(_)) => return Ordering::Greater,
            (Some(x), Some(y)) => match x.0.canonical_cmp(&y.0) {
                // x carries a variable that y lacks at this position
                Ordering::Less => return Ordering::Less,
                Ordering::Greater => return Ordering::Greater,
                Ordering::Equal => match y.1.cmp(&x.1) {
                    Ordering::Equal => continue,
                    ord => return ord,
                },
            },
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.canonical_factors().into_iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
