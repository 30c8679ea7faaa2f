use std::collections::BTreeSet;
use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use torsor_core::alphap::{
    brute_force_member, canonicalize, frobenius_image_member, same_alpha_torsor, FibreRing,
    PthPowerVerdict,
};
use torsor_core::intmodel::{normalize_example, special_fibre, CoverTower2, RescaleParams};
use torsor_core::witt::{self, WittVec};
use torsor_core::{asw, obstruction, CoeffRing, Error, Poly};

#[derive(Parser)]
#[command(
    name = "torsor",
    version,
    about = "Witt vectors, Artin-Schreier-Witt towers and alpha_p torsors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Truncated Witt vector arithmetic
    #[command(subcommand)]
    Witt(WittCmd),
    /// Artin-Schreier-Witt towers
    #[command(subcommand)]
    Asw(AswCmd),
    /// Integral models of the length-2 example tower
    #[command(subcommand)]
    Model(ModelCmd),
    /// alpha_p-torsor decisions on a special fibre
    #[command(subcommand)]
    Alphap(AlphapCmd),
    /// Exhaustive search oracles
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Worked examples
    #[command(subcommand)]
    Example(ExampleCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    Int,
    Rat,
    Modp,
}

#[derive(Args)]
struct WittOpts {
    #[arg(long)]
    p: u64,
    /// Length; checked against the input vectors
    #[arg(long)]
    n: Option<usize>,
    /// Coefficient ring
    #[arg(long, value_enum, default_value = "int")]
    ring: RingArg,
}

#[derive(Subcommand)]
enum WittCmd {
    Add {
        #[command(flatten)]
        opts: WittOpts,
        u: String,
        v: String,
    },
    Neg {
        #[command(flatten)]
        opts: WittOpts,
        u: String,
    },
    Sub {
        #[command(flatten)]
        opts: WittOpts,
        u: String,
        v: String,
    },
    Frobenius {
        #[command(flatten)]
        opts: WittOpts,
        u: String,
    },
    /// F(u) - u
    Fmid {
        #[command(flatten)]
        opts: WittOpts,
        u: String,
    },
}

#[derive(Subcommand)]
enum AswCmd {
    /// Tower F(x) - x = a, one Artin-Schreier equation per level
    Tower {
        #[arg(long)]
        p: u64,
        a: String,
    },
    /// a + (F(b) - b)
    Shift {
        #[arg(long)]
        p: u64,
        a: String,
        b: String,
    },
}

#[derive(Args)]
struct ModelOpts {
    #[arg(long)]
    p: u64,
    #[arg(long = "mprime")]
    m_prime: u64,
    #[arg(long, default_value = "a1")]
    a1: String,
    #[arg(long, default_value = "a2")]
    a2: String,
    /// Shift by the coboundary of (pi^-m * b1, 0)
    #[arg(long)]
    b1: Option<String>,
}

#[derive(Subcommand)]
enum ModelCmd {
    /// Integral equations of both levels
    Normalize {
        #[command(flatten)]
        opts: ModelOpts,
    },
    /// Special fibres of both levels
    Fibre {
        #[command(flatten)]
        opts: ModelOpts,
    },
}

#[derive(Args)]
struct FibreOpts {
    #[arg(long)]
    p: u64,
    /// Relation `a` for a root `t^p = a`; omitted for the base ring itself
    #[arg(long)]
    relation: Option<String>,
    #[arg(long, default_value = "t1")]
    root: String,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum AlphapCmd {
    /// Is the element a p-th power?
    Member {
        #[command(flatten)]
        opts: FibreOpts,
        element: String,
    },
    /// Do x^p = a and x^p = a_shifted define the same torsor?
    Same {
        #[command(flatten)]
        opts: FibreOpts,
        a: String,
        a_shifted: String,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Exhaustive search for a p-th root
    Pthpower {
        #[command(flatten)]
        opts: FibreOpts,
        /// Largest degree of a candidate in each base variable
        #[arg(long, default_value_t = 1)]
        bound: u32,
        element: String,
    },
}

#[derive(Subcommand)]
enum ExampleCmd {
    /// Compare the special fibres of the unshifted and shifted models
    Prop31 {
        /// Prime; a comma-separated list with --sweep
        #[arg(long, value_delimiter = ',')]
        p: Vec<u64>,
        /// m'; a comma-separated list with --sweep
        #[arg(long = "mprime", value_delimiter = ',')]
        m_prime: Vec<u64>,
        #[arg(long, default_value = "b1")]
        b1: String,
        #[arg(long)]
        json: bool,
        /// Run every (p, m') pair, by default p in 2,3,5,7 and m' in 1,2
        #[arg(long)]
        sweep: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::InvalidVariable(_) => 2,
        Error::SearchSpaceTooLarge { .. } => 4,
        _ => 3,
    }
}

type Out = torsor_core::Result<String>;

fn run(cmd: Command) -> Out {
    match cmd {
        Command::Witt(c) => witt_cmd(c),
        Command::Asw(c) => asw_cmd(c),
        Command::Model(c) => model_cmd(c),
        Command::Alphap(c) => alphap_cmd(c),
        Command::Oracle(OracleCmd::Pthpower {
            opts,
            bound,
            element,
        }) => {
            let ring = fibre_ring(&opts, &[&element])?;
            let v = canonicalize(&Poly::parse(&element, ring.ring())?, &ring)?;
            verdict(brute_force_member(&v, bound)?, opts.json)
        }
        Command::Example(ExampleCmd::Prop31 {
            p,
            m_prime,
            b1,
            json,
            sweep,
        }) => example(p, m_prime, &b1, json, sweep),
    }
}

fn witt_vec(text: &str, o: &WittOpts) -> torsor_core::Result<WittVec> {
    let ring = match o.ring {
        RingArg::Int => CoeffRing::Int,
        RingArg::Rat => CoeffRing::Rat,
        RingArg::Modp => CoeffRing::ModP(o.p),
    };
    let w = WittVec::parse(text, o.p, ring)?;
    match o.n {
        Some(n) if n != w.len() => Err(Error::ShapeMismatch(format!(
            "expected length {n}, `{text}` has length {}",
            w.len()
        ))),
        _ => Ok(w),
    }
}

fn witt_cmd(c: WittCmd) -> Out {
    let w = match c {
        WittCmd::Add { opts, u, v } => witt::add(&witt_vec(&u, &opts)?, &witt_vec(&v, &opts)?)?,
        WittCmd::Neg { opts, u } => witt::neg(&witt_vec(&u, &opts)?)?,
        WittCmd::Sub { opts, u, v } => witt::sub(&witt_vec(&u, &opts)?, &witt_vec(&v, &opts)?)?,
        WittCmd::Frobenius { opts, u } => witt::frobenius(&witt_vec(&u, &opts)?),
        WittCmd::Fmid { opts, u } => witt::f_minus_id(&witt_vec(&u, &opts)?)?,
    };
    Ok(w.to_string())
}

fn asw_cmd(c: AswCmd) -> Out {
    match c {
        AswCmd::Tower { p, a } => {
            let a = WittVec::parse(&a, p, CoeffRing::ModP(p))?;
            Ok(asw::build_tower(&a)?.to_string().trim_end().to_string())
        }
        AswCmd::Shift { p, a, b } => {
            let k = CoeffRing::ModP(p);
            let shifted =
                asw::shift_cocycle(&WittVec::parse(&a, p, k)?, &WittVec::parse(&b, p, k)?)?;
            Ok(shifted.to_string())
        }
    }
}

fn model(o: &ModelOpts) -> torsor_core::Result<CoverTower2> {
    let k = CoeffRing::ModP(o.p);
    let params = RescaleParams::new(o.p, o.m_prime)?;
    let b1 = o.b1.as_deref().map(|b| Poly::parse(b, k)).transpose()?;
    normalize_example(
        &Poly::parse(&o.a1, k)?,
        &Poly::parse(&o.a2, k)?,
        b1.as_ref(),
        params,
    )
}

fn model_cmd(c: ModelCmd) -> Out {
    match c {
        ModelCmd::Normalize { opts } => {
            let t = model(&opts)?;
            let mut out = format!("{}\n{}", t.level1, t.level2);
            if !t.level2_adjustment.is_zero() {
                let generic = &t.generic.levels[1].variable;
                out.push_str(&format!(
                    "\nwhere {} = pi^({})*{generic} + {}",
                    t.level2.variable, t.params.m_tilde, t.level2_adjustment
                ));
            }
            Ok(out)
        }
        ModelCmd::Fibre { opts } => {
            let t = model(&opts)?;
            let p = opts.p;
            Ok(format!(
                "{}^{p} = {}\n{}^{p} = {}",
                t.level1.variable,
                special_fibre(&t.level1)?,
                t.level2.variable,
                special_fibre(&t.level2)?
            ))
        }
    }
}

/// Base variables are every variable of the inputs other than the root.
fn fibre_ring(o: &FibreOpts, inputs: &[&str]) -> torsor_core::Result<Arc<FibreRing>> {
    let k = CoeffRing::ModP(o.p);
    let mut names = BTreeSet::new();
    let relation = o
        .relation
        .as_deref()
        .map(|r| Poly::parse(r, k))
        .transpose()?;
    for text in inputs {
        names.extend(Poly::parse(text, k)?.variables());
    }
    if let Some(r) = &relation {
        names.extend(r.variables());
        names.remove(&o.root);
    }
    let base: Vec<&str> = names.iter().map(String::as_str).collect();
    let ring = FibreRing::new(o.p, &base)?;
    Ok(Arc::new(match relation {
        Some(r) => ring.adjoin_root(&o.root, r)?,
        None => ring,
    }))
}

fn verdict(v: PthPowerVerdict, json: bool) -> Out {
    if json {
        Ok(serde_json::to_string(&v).expect("verdicts serialize"))
    } else {
        Ok(v.to_string())
    }
}

fn alphap_cmd(c: AlphapCmd) -> Out {
    match c {
        AlphapCmd::Member { opts, element } => {
            let ring = fibre_ring(&opts, &[&element])?;
            let v = canonicalize(&Poly::parse(&element, ring.ring())?, &ring)?;
            verdict(frobenius_image_member(&v)?, opts.json)
        }
        AlphapCmd::Same { opts, a, a_shifted } => {
            let ring = fibre_ring(&opts, &[&a, &a_shifted])?;
            let parse = |s: &str| canonicalize(&Poly::parse(s, ring.ring())?, &ring);
            verdict(
                same_alpha_torsor(&parse(&a)?, &parse(&a_shifted)?)?,
                opts.json,
            )
        }
    }
}

fn example(ps: Vec<u64>, mps: Vec<u64>, b1: &str, json: bool, sweep: bool) -> Out {
    if !sweep {
        let (&[p], &[mp]) = (ps.as_slice(), mps.as_slice()) else {
            return Err(Error::InvalidArgument(
                "give exactly one --p and one --mprime, or pass --sweep".into(),
            ));
        };
        let r = obstruction::run_with(p, mp, b1)?;
        return Ok(if json {
            serde_json::to_string_pretty(&r).expect("reports serialize")
        } else {
            r.to_string()
        });
    }
    let ps = if ps.is_empty() { vec![2, 3, 5, 7] } else { ps };
    let mps = if mps.is_empty() { vec![1, 2] } else { mps };
    let grid: Vec<(u64, u64)> = ps
        .iter()
        .flat_map(|&p| mps.iter().map(move |&m| (p, m)))
        .collect();
    let reports = if b1 == "b1" {
        obstruction::sweep(&grid)
    } else {
        grid.iter()
            .map(|&(p, m)| obstruction::run_with(p, m, b1))
            .collect()
    }
    .into_iter()
    .collect::<torsor_core::Result<Vec<_>>>()?;
    Ok(if json {
        serde_json::to_string_pretty(&reports).expect("reports serialize")
    } else {
        reports
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join("\n\n")
    })
}
