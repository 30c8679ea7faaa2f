//! Exhaustive search for `p`-th roots.
//!
//! Candidates `g` have root exponents below `p` and degree at most the bound
//! in each base variable occurring in `v`. Each `g^p` is formed by repeated
//! multiplication over raw exponents, reduced through the ring relations, and
//! compared with `v`. Nothing here uses additivity of Frobenius.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::{PthPowerVerdict, QuotElem};
use crate::error::{Error, Result};
use crate::polyring::{Monomial, Poly, Var};

/// Largest number of candidates [`brute_force_member`] will enumerate.
pub const SEARCH_LIMIT: u64 = 10_000_000;

/// Largest dense table of raw exponents the search allocates.
const RAW_LIMIT: usize = 1 << 22;

/// Mixed-radix index over raw (unreduced) exponent vectors. Digit `i` has
/// room for `p` times the largest exponent of variable `i` in a candidate,
/// so products of up to `p` candidate monomials never carry.
struct Raw {
    vars: Vec<Var>,
    dims: Vec<usize>,
    strides: Vec<usize>,
    size: usize,
}

impl Raw {
    fn new(vars: Vec<Var>, max_exp: &[usize], p: usize) -> Result<Self> {
        let dims: Vec<usize> = max_exp.iter().map(|e| p * e + 1).collect();
        let mut strides = Vec::with_capacity(dims.len());
        let mut size = 1usize;
        for &d in &dims {
            strides.push(size);
            size = size
                .checked_mul(d)
                .filter(|&s| s <= RAW_LIMIT)
                .ok_or_else(|| {
                    Error::InvalidArgument("exponent table too large for the search".into())
                })?;
        }
        Ok(Raw {
            vars,
            dims,
            strides,
            size,
        })
    }

    fn index(&self, exps: &[usize]) -> usize {
        exps.iter().zip(&self.strides).map(|(e, s)| e * s).sum()
    }

    fn monomial(&self, mut idx: usize) -> Monomial {
        let exps = self.vars.iter().zip(&self.dims).map(|(&v, &d)| {
            let e = idx % d;
            idx /= d;
            (v, e as i64)
        });
        Monomial::from_exponents(exps).expect("nonnegative exponents")
    }
}

struct Search {
    p: u64,
    /// Raw index of each candidate monomial, in enumeration order.
    basis: Vec<usize>,
    raw_size: usize,
    /// Reduced form of every raw monomial, as `(reduced id, coefficient)`.
    table: Vec<Vec<(usize, u64)>>,
    /// `v` over reduced ids. The final slot is 1 when `v` has a term that
    /// no raw monomial reduces to.
    target: Vec<u64>,
}

struct Scratch {
    acc: Vec<u64>,
    next: Vec<u64>,
    acc_nz: Vec<usize>,
    next_nz: Vec<usize>,
    reduced: Vec<u64>,
    g: Vec<(usize, u64)>,
}

impl Search {
    fn scratch(&self) -> Scratch {
        Scratch {
            acc: vec![0; self.raw_size],
            next: vec![0; self.raw_size],
            acc_nz: Vec::new(),
            next_nz: Vec::new(),
            reduced: vec![0; self.target.len()],
            g: Vec::new(),
        }
    }

    fn is_root(&self, digits: &[u64], s: &mut Scratch) -> bool {
        let p = self.p;
        s.g.clear();
        s.g.extend(
            self.basis
                .iter()
                .zip(digits)
                .filter(|(_, &d)| d != 0)
                .map(|(&i, &d)| (i, d)),
        );

        for &i in &s.acc_nz {
            s.acc[i] = 0;
        }
        s.acc_nz.clear();
        for &(i, c) in &s.g {
            s.acc[i] = c;
            s.acc_nz.push(i);
        }
        // entries stay below p between rounds, so a round sums at most
        // |g| * |acc| products below p^2 and cannot overflow
        for _ in 1..p {
            for &(j, d) in &s.g {
                for &i in &s.acc_nz {
                    let k = i + j;
                    if s.next[k] == 0 {
                        s.next_nz.push(k);
                    }
                    s.next[k] += s.acc[i] * d;
                }
            }
            for &i in &s.acc_nz {
                s.acc[i] = 0;
            }
            std::mem::swap(&mut s.acc, &mut s.next);
            std::mem::swap(&mut s.acc_nz, &mut s.next_nz);
            s.next_nz.clear();
            for &i in &s.acc_nz {
                s.acc[i] %= p;
            }
        }

        s.reduced.iter_mut().for_each(|c| *c = 0);
        for &i in &s.acc_nz {
            let c = s.acc[i];
            for &(id, rc) in &self.table[i] {
                s.reduced[id] += rc * c;
            }
        }
        s.reduced.iter_mut().for_each(|c| *c %= p);
        s.reduced == self.target
    }

    /// Smallest witness index in `range`, giving up once `best` drops below it.
    fn scan(&self, range: std::ops::Range<u64>, best: &AtomicU64) {
        let p = self.p;
        let mut digits = vec![0u64; self.basis.len()];
        let mut n = range.start;
        for d in digits.iter_mut() {
            *d = n % p;
            n /= p;
        }
        let mut scratch = self.scratch();
        for idx in range {
            if idx >= best.load(Ordering::Relaxed) {
                break;
            }
            if self.is_root(&digits, &mut scratch) {
                best.fetch_min(idx, Ordering::Relaxed);
                break;
            }
            for d in digits.iter_mut() {
                *d += 1;
                if *d < p {
                    break;
                }
                *d = 0;
            }
        }
    }
}

fn coefficient(c: &BigRational, p: u64) -> u64 {
    c.numer().to_u64().expect("F_p coefficient") % p
}

/// Searches for `g` with `g^p = v`.
///
/// The search space is every `g` whose root exponents are below `p` and
/// whose degree in each base variable of `v` is at most `degree_bound`.
/// A witness found is the first in a fixed enumeration order, so results do
/// not depend on thread scheduling.
pub fn brute_force_member(v: &QuotElem, degree_bound: u32) -> Result<PthPowerVerdict> {
    let ring = v.ring().as_ref();
    let p = ring.p();

    let in_v = v.poly().variables();
    let mut vars = Vec::new();
    let mut max_exp = Vec::new();
    for r in ring.roots() {
        vars.push(Var::new(&r.name)?);
        max_exp.push(p as usize - 1);
    }
    let n_roots = vars.len();
    for name in ring.base_vars().iter().filter(|n| in_v.contains(*n)) {
        vars.push(Var::new(name)?);
        max_exp.push(degree_bound as usize);
    }

    let basis_len: usize = max_exp.iter().map(|e| e + 1).product();
    let count = u32::try_from(basis_len)
        .ok()
        .and_then(|n| p.checked_pow(n))
        .filter(|&c| c <= SEARCH_LIMIT)
        .ok_or_else(|| Error::SearchSpaceTooLarge {
            candidates: BigUint::from(p).pow(basis_len as u32).to_string(),
            limit: SEARCH_LIMIT,
        })?;
    let raw = Raw::new(vars, &max_exp, p as usize)?;

    let mut basis = Vec::with_capacity(basis_len);
    let mut exps = vec![0usize; max_exp.len()];
    'outer: loop {
        basis.push(raw.index(&exps));
        for (e, &m) in exps.iter_mut().zip(&max_exp).rev() {
            if *e < m {
                *e += 1;
                continue 'outer;
            }
            *e = 0;
        }
        break;
    }
    // roots vary slowest, so low indices are base-only candidates
    debug_assert!(n_roots <= max_exp.len());

    let mut ids: HashMap<Monomial, usize> = HashMap::new();
    let k = ring.ring();
    let mut table = Vec::with_capacity(raw.size);
    for idx in 0..raw.size {
        let red = ring.reduce(&Poly::monomial(k, raw.monomial(idx), BigRational::one()));
        let row = red
            .terms()
            .map(|(m, c)| {
                let next = ids.len();
                (*ids.entry(m.clone()).or_insert(next), coefficient(c, p))
            })
            .collect();
        table.push(row);
    }
    let mut target = vec![0u64; ids.len() + 1];
    for (m, c) in v.poly().terms() {
        match ids.get(m) {
            Some(&slot) => target[slot] = coefficient(c, p),
            // no candidate reaches this slot, so no candidate matches
            None => target[ids.len()] = 1,
        }
    }

    let search = Search {
        p,
        basis,
        raw_size: raw.size,
        table,
        target,
    };
    let best = AtomicU64::new(u64::MAX);
    let threads = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(8) as u64;
    if threads == 1 || count < 4096 {
        search.scan(0..count, &best);
    } else {
        let chunk = count.div_ceil(threads);
        std::thread::scope(|s| {
            for i in 0..threads {
                let range = (i * chunk).min(count)..((i + 1) * chunk).min(count);
                let (search, best) = (&search, &best);
                s.spawn(move || search.scan(range, best));
            }
        });
    }

    let found = best.load(Ordering::Relaxed);
    if found == u64::MAX {
        return Ok(PthPowerVerdict::non_member(format!(
            "no p-th root among {count} candidates of base degree at most {degree_bound}"
        )));
    }
    let mut n = found;
    let mut witness = Poly::zero(k);
    for &i in &search.basis {
        let d = n % p;
        n /= p;
        if d != 0 {
            witness =
                witness + Poly::monomial(k, raw.monomial(i), BigRational::from_integer(d.into()));
        }
    }
    Ok(PthPowerVerdict::member(QuotElem {
        ring: v.ring().clone(),
        poly: witness,
    }))
}
