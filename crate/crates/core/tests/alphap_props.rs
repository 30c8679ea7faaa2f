use std::sync::Arc;

use proptest::prelude::*;
use torsor_core::alphap::{
    brute_force_member, canonicalize, frobenius_image_member, FibreRing, QuotElem,
};
use torsor_core::{CoeffRing, Monomial, Poly, Substitution, Var};

/// `(p, base variables)` with a single root `t`, `t^p = a`.
const SHAPES: [(u64, &[&str]); 3] = [(2, &["a", "b"]), (3, &["a"]), (3, &["a", "b"])];

fn ring(shape: usize) -> Arc<FibreRing> {
    let (p, base) = SHAPES[shape];
    let r = FibreRing::new(p, base).unwrap();
    let rel = Poly::var(r.ring(), "a");
    Arc::new(r.adjoin_root("t", rel).unwrap())
}

/// Coefficients for `g = Σ c · t^i · a^ea · b^eb` with `i < p` and `ea, eb ≤ 1`;
/// `b` is dropped on rings without it.
fn element(shape: usize, coeffs: &[u8]) -> QuotElem {
    let r = ring(shape);
    let p = r.p();
    let has_b = r.base_vars().len() > 1;
    let mut f = Poly::zero(r.ring());
    let mut it = coeffs.iter();
    for i in 0..p as i64 {
        for ea in 0..=1 {
            for eb in 0..=(has_b as i64) {
                let c = *it.next().unwrap() as i64 % p as i64;
                let mut exps = vec![(Var::new("t").unwrap(), i), (Var::new("a").unwrap(), ea)];
                if has_b {
                    exps.push((Var::new("b").unwrap(), eb));
                }
                let m = Monomial::from_exponents(exps).unwrap();
                f = f + Poly::monomial(
                    r.ring(),
                    m,
                    num_rational::BigRational::from_integer(c.into()),
                );
            }
        }
    }
    canonicalize(&f, &r).unwrap()
}

fn shaped() -> impl Strategy<Value = (usize, Vec<u8>)> {
    (0..SHAPES.len()).prop_flat_map(|s| (Just(s), prop::collection::vec(0u8..5, 12)))
}

/// Shapes small enough to enumerate exhaustively for every case.
fn enumerable() -> impl Strategy<Value = (usize, Vec<u8>)> {
    (0..2usize).prop_flat_map(|s| (Just(s), prop::collection::vec(0u8..5, 12)))
}

/// Nonzero `c · t^i · m` with `i ≥ 1`.
fn perturbation(shape: usize, i: u8, c: u8, ea: u8, eb: u8) -> QuotElem {
    let r = ring(shape);
    let p = r.p();
    let i = 1 + i as u64 % (p - 1);
    let c = 1 + c as u64 % (p - 1);
    let mut text = format!("{c}*t^{i}*a^{}", ea % 2);
    if r.base_vars().len() > 1 {
        text.push_str(&format!("*b^{}", eb % 2));
    }
    QuotElem::parse(&text, &r).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn members_are_recognised((shape, coeffs) in enumerable()) {
        let g = element(shape, &coeffs);
        let p = g.ring().p();
        let v = g.pow(p);
        let fast = frobenius_image_member(&v).unwrap();
        prop_assert!(fast.is_pth_power);
        let w = fast.witness.clone().unwrap();
        prop_assert_eq!(&w.pow(p), &v);
        prop_assert_eq!(&w, &g);
        let slow = brute_force_member(&v, 1).unwrap();
        prop_assert!(slow.is_pth_power);
        prop_assert_eq!(slow.witness.unwrap().pow(p), v);
    }

    #[test]
    fn perturbed_elements_are_rejected(
        (shape, coeffs) in enumerable(),
        (i, c, ea, eb) in (0u8..8, 0u8..8, 0u8..2, 0u8..2),
    ) {
        let g = element(shape, &coeffs);
        let v = g.pow(g.ring().p()).checked_add(&perturbation(shape, i, c, ea, eb)).unwrap();
        let fast = frobenius_image_member(&v).unwrap();
        prop_assert!(!fast.is_pth_power);
        prop_assert!(fast.obstruction.is_some());
        let slow = brute_force_member(&v, 1).unwrap();
        prop_assert!(!slow.is_pth_power);
    }

    #[test]
    fn oracle_agrees_on_arbitrary_elements((shape, coeffs) in enumerable()) {
        let v = element(shape, &coeffs);
        let fast = frobenius_image_member(&v).unwrap();
        let slow = brute_force_member(&v, 1).unwrap();
        prop_assert_eq!(fast.is_pth_power, slow.is_pth_power);
        if fast.is_pth_power {
            prop_assert_eq!(fast.witness, slow.witness);
        }
    }

    #[test]
    fn pth_powers_are_closed_under_addition((shape, c1) in shaped(), c2 in prop::collection::vec(0u8..5, 12)) {
        let (g, h) = (element(shape, &c1), element(shape, &c2));
        let p = g.ring().p();
        let sum = g.pow(p).checked_add(&h.pow(p)).unwrap();
        let verdict = frobenius_image_member(&sum).unwrap();
        prop_assert!(verdict.is_pth_power);
        prop_assert_eq!(verdict.witness.unwrap(), g.checked_add(&h).unwrap());
    }

    #[test]
    fn relabelling_preserves_the_verdict((coeffs, perturb) in (prop::collection::vec(0u8..5, 12), any::<bool>())) {
        let shape = 2;
        let mut v = element(shape, &coeffs).pow(3);
        if perturb {
            v = v.checked_add(&perturbation(shape, 0, 0, 1, 0)).unwrap();
        }
        let k = CoeffRing::ModP(3);
        let renamed = FibreRing::new(3, &["d", "c"]).unwrap();
        let renamed = Arc::new(renamed.adjoin_root("u", Poly::var(k, "c")).unwrap());
        let sub = Substitution::new()
            .bind("a", Poly::var(k, "c")).unwrap()
            .bind("b", Poly::var(k, "d")).unwrap()
            .bind("t", Poly::var(k, "u")).unwrap();
        let w = canonicalize(&v.poly().substitute(&sub).unwrap(), &renamed).unwrap();
        let before = frobenius_image_member(&v).unwrap();
        let after = frobenius_image_member(&w).unwrap();
        prop_assert_eq!(before.is_pth_power, after.is_pth_power);
        if let (Some(x), Some(y)) = (before.witness, after.witness) {
            prop_assert_eq!(x.poly().substitute(&sub).unwrap(), y.poly().clone());
        }
    }
}

#[test]
fn relation_variable_is_a_pth_power_only_in_the_cover() {
    let base = Arc::new(FibreRing::new(5, &["a"]).unwrap());
    let cover = ring(1);
    assert!(
        !frobenius_image_member(&QuotElem::parse("a", &base).unwrap())
            .unwrap()
            .is_pth_power
    );
    let v = QuotElem::parse("a", &cover).unwrap();
    assert_eq!(
        frobenius_image_member(&v)
            .unwrap()
            .witness
            .unwrap()
            .to_string(),
        "t"
    );
}
