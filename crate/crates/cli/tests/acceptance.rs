//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;
use torsor_core::alphap::{
    brute_force_member, canonicalize, frobenius_image_member, FibreRing, QuotElem,
};
use torsor_core::intmodel::{normalize_example, special_fibre, RescaleParams};
use torsor_core::witt::{self, ghost_map, universal_polys, WittVec};
use torsor_core::{obstruction, CoeffRing, Poly, Var};

type Check = std::result::Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn prop31(p: u64, mp: u64) -> std::result::Result<(Value, Duration), String> {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_torsor"))
        .args([
            "example",
            "prop31",
            "--p",
            &p.to_string(),
            "--mprime",
            &mp.to_string(),
            "--json",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    let v = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    Ok((v, elapsed))
}

/// Right-hand side of a rendered fibre `x^p = rhs`, parsed over F_p.
fn rhs(v: &Value, p: u64) -> std::result::Result<Poly, String> {
    let s = v.as_str().ok_or("fibre is not a string")?;
    let r = s.split_once(" = ").map_or(s, |(_, r)| r);
    Poly::parse(r, CoeffRing::ModP(p)).map_err(|e| e.to_string())
}

fn poly(s: &str, p: u64) -> Poly {
    Poly::parse(s, CoeffRing::ModP(p)).unwrap()
}

fn criterion_1() -> Check {
    let (r, elapsed) = prop31(3, 1)?;
    let f = &r["fibres"];
    let mut bad = Vec::new();
    if rhs(&f["fibre_2_unshifted"], 3)? != poly("-t1^7", 3) {
        bad.push(format!("fibre_2_unshifted = {}", f["fibre_2_unshifted"]));
    }
    let expected = poly("-t1^7 + 2*t1^3*b1^4 + t1*b1^6", 3);
    if rhs(&f["fibre_2_shifted"], 3)? != expected {
        bad.push(format!(
            "fibre_2_shifted = {}, expected {expected}",
            f["fibre_2_shifted"]
        ));
    }
    let expected = poly("2*a1*b1^4 + t1*b1^6", 3);
    if rhs(&r["difference"]["level2"], 3)? != expected {
        bad.push(format!(
            "difference = {}, expected {expected}",
            r["difference"]["level2"]
        ));
    }
    if r["verdicts"]["level2_verdict"]["is_pth_power"] != false {
        bad.push("level-2 difference is a cube".into());
    }
    if r["conclusion"] != "TORSOR_OBSTRUCTED" {
        bad.push(format!("conclusion {}", r["conclusion"]));
    }
    if elapsed >= Duration::from_secs(5) {
        bad.push(format!("took {elapsed:?}"));
    }
    ensure!(bad.is_empty(), "{}", bad.join("; "));
    Ok(())
}

fn criterion_2() -> Check {
    let (r, _) = prop31(3, 1)?;
    let f = &r["fibres"];
    ensure!(
        rhs(&f["fibre_1_unshifted"], 3)? == poly("a1", 3),
        "fibre_1_unshifted = {}",
        f["fibre_1_unshifted"]
    );
    ensure!(
        rhs(&f["fibre_1_shifted"], 3)? == poly("a1 + b1^3", 3),
        "fibre_1_shifted = {}",
        f["fibre_1_shifted"]
    );
    let v = &r["verdicts"]["level1_verdict"];
    ensure!(v["is_pth_power"] == true, "level-1 verdict {v}");
    ensure!(v["witness"] == "b1", "level-1 witness {}", v["witness"]);
    Ok(())
}

fn criterion_3() -> Check {
    for p in [3u64, 5, 7] {
        for mp in [1u64, 2] {
            let k = CoeffRing::ModP(p);
            let params = RescaleParams::new(p, mp).map_err(|e| e.to_string())?;
            let t = normalize_example(&Poly::var(k, "a1"), &Poly::var(k, "a2"), None, params)
                .map_err(|e| e.to_string())?;
            let fibre = special_fibre(&t.level2).map_err(|e| e.to_string())?;
            ensure!(
                fibre == -Poly::var(k, "t1").pow(p * (p - 1) + 1),
                "p={p} m'={mp}: fibre {fibre}"
            );
            ensure!(
                t.level1.is_integral() && t.level2.is_integral(),
                "p={p} m'={mp}: not integral"
            );
            let t1 = Var::new("t1").unwrap();
            let mut top = None;
            for (deg, part) in t.level2.rhs.split_by(t1) {
                let e = part.pi_valuation().finite().unwrap();
                ensure!(e >= 0, "p={p} m'={mp}: exponent {e} at t1^{deg}");
                if deg == (p * (p - 1) + 1) as i64 {
                    top = Some(e);
                }
            }
            ensure!(top == Some(0), "p={p} m'={mp}: k = p-1 exponent {top:?}");
        }
    }
    Ok(())
}

fn criterion_4() -> Check {
    let mut bad = Vec::new();
    for p in [5u64, 7] {
        let start = Instant::now();
        let r = obstruction::run(p, 1).map_err(|e| e.to_string())?;
        if r.conclusion != obstruction::Conclusion::TorsorObstructed {
            bad.push(format!(
                "p={p}: conclusion {:?}, level-2 difference {}",
                r.conclusion, r.difference.level2
            ));
        }
        match r.oracle_on_root_components(1) {
            Ok(v) if !v.is_pth_power => {}
            Ok(v) => bad.push(format!("p={p}: oracle finds root {}", v.witness.unwrap())),
            Err(e) => bad.push(format!("p={p}: oracle error {e}")),
        }
        if start.elapsed() >= Duration::from_secs(60) {
            bad.push(format!("p={p}: took {:?}", start.elapsed()));
        }
    }
    ensure!(bad.is_empty(), "{}", bad.join("; "));
    Ok(())
}

fn criterion_5() -> Check {
    for p in [2u64, 3, 5] {
        for n in 1..=3usize {
            let u = universal_polys(p, n).map_err(|e| e.to_string())?;
            ensure!(
                u.sum_polys
                    .iter()
                    .chain(&u.neg_polys)
                    .all(|f| f.terms().all(|(_, c)| c.is_integer())),
                "p={p} n={n}: non-integral universal polynomial"
            );
            for ring in [CoeffRing::Int, CoeffRing::ModP(p)] {
                let sym = |s| WittVec::symbolic(p, s, n, ring).unwrap();
                let (x, y, z) = (sym("x"), sym("y"), sym("z"));
                let add = |a: &WittVec, b: &WittVec| witt::add(a, b).unwrap();
                if ring == CoeffRing::Int {
                    let g = |w: &WittVec| ghost_map(w).unwrap();
                    ensure!(
                        g(&add(&x, &y)) == g(&x).add(&g(&y)),
                        "p={p} n={n}: ghost map"
                    );
                }
                ensure!(
                    add(&x, &y) == add(&y, &x),
                    "p={p} n={n} {ring}: commutativity"
                );
                ensure!(
                    add(&add(&x, &y), &z) == add(&x, &add(&y, &z)),
                    "p={p} n={n} {ring}: associativity"
                );
                ensure!(
                    add(&x, &witt::neg(&x).unwrap()).is_zero(),
                    "p={p} n={n} {ring}: inverse"
                );
                ensure!(
                    add(&x, &WittVec::zero(p, n, ring).unwrap()) == x,
                    "p={p} n={n} {ring}: identity"
                );
                if let CoeffRing::ModP(_) = ring {
                    let f = |w: &WittVec| witt::f_minus_id(w).unwrap();
                    ensure!(
                        f(&add(&x, &y)) == add(&f(&x), &f(&y)),
                        "p={p} n={n}: F - Id additivity"
                    );
                }
            }
        }
    }
    for p in [3u64, 5] {
        let x = WittVec::symbolic_from(p, "x", 1, 2, CoeffRing::Int).unwrap();
        let fast = witt::f_minus_id(&x).unwrap();
        let closed = witt::f_minus_id_length2_closed_form(&x).unwrap();
        for i in 0..2 {
            ensure!(
                fast.component(i).terms_canonical() == closed.component(i).terms_canonical(),
                "p={p}: closed form differs in component {i}"
            );
        }
    }
    Ok(())
}

/// `(p, base)` with a root `t`, `t^p = a`.
const SHAPES: [(u64, &[&str]); 3] = [(2, &["a", "b"]), (3, &["a"]), (3, &["a", "b"])];
/// Shapes where the bound-1 oracle enumerates the whole space quickly.
const ENUMERABLE: usize = 2;

fn shape_ring(s: usize) -> Arc<FibreRing> {
    let (p, base) = SHAPES[s];
    let r = FibreRing::new(p, base).unwrap();
    let rel = Poly::var(r.ring(), "a");
    Arc::new(r.adjoin_root("t", rel).unwrap())
}

/// Random element with root exponent below `p` and base degrees at most 1.
fn random_element(rng: &mut StdRng, ring: &Arc<FibreRing>) -> QuotElem {
    let p = ring.p();
    let mut f = Poly::zero(ring.ring());
    for i in 0..p {
        for ea in 0..2 {
            for eb in 0..2 {
                if eb == 1 && ring.base_vars().len() < 2 {
                    continue;
                }
                let c = rng.gen_range(0..p);
                let term = format!("{c}*t^{i}*a^{ea}") + if eb == 1 { "*b" } else { "" };
                f = f + Poly::parse(&term, ring.ring()).unwrap();
            }
        }
    }
    canonicalize(&f, ring).unwrap()
}

fn criterion_6() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for case in 0..100 {
        let s = case % SHAPES.len();
        let ring = shape_ring(s);
        let p = ring.p();
        let g = random_element(&mut rng, &ring);
        let v = g.pow(p);

        let fast = frobenius_image_member(&v).map_err(|e| e.to_string())?;
        ensure!(fast.is_pth_power, "case {case}: {v} rejected");
        let w = fast.witness.unwrap();
        ensure!(w.pow(p) == v, "case {case}: witness {w} does not verify");

        let i = rng.gen_range(1..p);
        let c = rng.gen_range(1..p);
        let bump = QuotElem::parse(&format!("{c}*t^{i}"), &ring).unwrap();
        let perturbed = v.checked_add(&bump).unwrap();
        let fast_bad = frobenius_image_member(&perturbed).map_err(|e| e.to_string())?;
        ensure!(!fast_bad.is_pth_power, "case {case}: {perturbed} accepted");

        if s < ENUMERABLE {
            let arbitrary = random_element(&mut rng, &ring);
            for x in [&v, &perturbed, &arbitrary] {
                let fast = frobenius_image_member(x).map_err(|e| e.to_string())?;
                let slow = brute_force_member(x, 1).map_err(|e| e.to_string())?;
                ensure!(
                    fast.is_pth_power == slow.is_pth_power,
                    "case {case}: disagreement on {x}"
                );
                ensure!(
                    fast.witness == slow.witness,
                    "case {case}: witnesses differ on {x}"
                );
            }
        }
    }
    Ok(())
}

fn criterion_7() -> Check {
    let (r, _) = prop31(2, 1)?;
    ensure!(
        r["exploratory"] == true,
        "p=2 report not labeled exploratory"
    );
    Ok(())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("golden check p=3, m'=1", criterion_1),
        ("level-1 consistency", criterion_2),
        ("general-p special fibre", criterion_3),
        ("p=5,7 obstruction with oracle", criterion_4),
        ("Witt arithmetic properties", criterion_5),
        ("alpha_p decision soundness", criterion_6),
        ("exploratory p=2 run", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("criterion {}: PASS ({name})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL ({name}): {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
