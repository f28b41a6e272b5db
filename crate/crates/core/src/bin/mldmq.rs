//! Command-line front end: generate, reduce, solve and check instances.
//!
//! Exit status: 0 for success or a "yes" answer, 1 for a "no" answer or a
//! failed check, 2 for errors (bad input, refused budgets, I/O).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mldmq::alpha::{lift_mld_witness, project_witness, reduce_alpha, AlphaArtifact};
use mldmq::beta::{
    lift_mq_witness, lift_source_witness, pull_back_mld_witness, reduce_beta, reduce_beta_standard, BetaArtifact,
};
use mldmq::generators::{gen_mld_with_plant, gen_mq_with_plant, GenSpec};
use mldmq::io::{
    alpha_sidecar, beta_sidecar, detect_kind, parse_mld, parse_mq, parse_polynomial, parse_sf, parse_witness,
    serialize_mld, serialize_mq, serialize_sf, serialize_witness, FileKind, Sidecar,
};
use mldmq::normalize::{quadratize, to_standard_form_with, StandardFormOptions, StandardFormSystem};
use mldmq::oracles::{
    solve_mld_exhaustive, solve_mq_exhaustive, solve_mq_search, verify_mld, verify_mq, MQ_NODE_BUDGET,
};
use mldmq::{Assignment, BitVector, Error, MldInstance, MqInstance, VariableRegistry};

#[derive(Parser)]
#[command(
    name = "mldmq",
    version,
    about = "Reductions between syndrome decoding and quadratic systems over GF(2)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Random decoding instance.
    GenMld {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        t: usize,
        /// Plant a solution of weight exactly t.
        #[arg(long)]
        planted: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the planted vector as a witness file.
        #[arg(long)]
        plant_out: Option<PathBuf>,
    },
    /// Random quadratic system.
    GenMq {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Fix the constants so a random assignment is a solution.
        #[arg(long)]
        planted: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        plant_out: Option<PathBuf>,
    },
    /// Decoding instance to quadratic system (writes OUTPUT and OUTPUT.meta).
    Alpha {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Quadratic or standard-form system to decoding instance (writes OUTPUT and OUTPUT.meta).
    Beta {
        input: PathBuf,
        #[arg(long)]
        injective: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Quadratic system to standard form.
    StdForm {
        input: PathBuf,
        #[arg(long)]
        injective: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Degree reduction of one polynomial equation, e.g. "x1 x2 x3 x4 + 1".
    Quadratize {
        expr: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exhaustive solve of an MLD, MQ or SF file.
    Solve {
        input: PathBuf,
        /// Node budget for quadratic systems (default 2^27).
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Check a witness against an instance.
    Verify { instance: PathBuf, witness: PathBuf },
    /// Carry a source-side witness across a stored reduction.
    Lift {
        #[arg(long)]
        meta: PathBuf,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        witness: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Carry a target-side witness back across a stored reduction.
    Project {
        #[arg(long)]
        meta: PathBuf,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        witness: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate, reduce, solve both sides and transport witnesses.
    Roundtrip {
        #[arg(long, value_enum)]
        dir: Direction,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        t: usize,
        #[arg(long)]
        planted: bool,
    },
    /// Sizes, complexity parameters and bound checks.
    Info { input: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Alpha,
    Beta,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

type CliResult = std::result::Result<u8, String>;

fn read(path: &Path) -> std::result::Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: Option<&Path>, text: &str) -> std::result::Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

fn in_file(path: &Path) -> impl Fn(Error) -> String + '_ {
    move |e| format!("{}: {e}", path.display())
}

enum Source {
    Mld(MldInstance),
    Mq(MqInstance),
    Sf(StandardFormSystem),
}

fn load(path: &Path) -> std::result::Result<Source, String> {
    let text = read(path)?;
    let err = in_file(path);
    match detect_kind(&text).map_err(&err)? {
        FileKind::Mld => Ok(Source::Mld(parse_mld(&text).map_err(&err)?)),
        FileKind::Mq => Ok(Source::Mq(parse_mq(&text).map_err(&err)?)),
        FileKind::StandardForm => Ok(Source::Sf(parse_sf(&text).map_err(&err)?)),
        FileKind::Witness => Err(format!("{}: expected an instance, found a witness", path.display())),
    }
}

fn load_witness(path: &Path) -> std::result::Result<BitVector, String> {
    parse_witness(&read(path)?).map_err(in_file(path))
}

fn build_beta(src: &Source, injective: bool) -> std::result::Result<BetaArtifact, String> {
    match src {
        Source::Mq(inst) => Ok(reduce_beta(inst, injective)),
        Source::Sf(sf) if !injective => reduce_beta_standard(sf).map_err(|e| e.to_string()),
        Source::Sf(_) => Err("injective mode needs an MQ source".into()),
        Source::Mld(_) => Err("beta expects an MQ or SF file".into()),
    }
}

enum Stored {
    Alpha(AlphaArtifact),
    Beta(BetaArtifact),
}

// Rebuilds the reduction described by `meta` from `source` and checks that
// the rebuilt metadata is identical.
fn rebuild(meta: &Path, source: &Path) -> std::result::Result<Stored, String> {
    let side = Sidecar::parse(&read(meta)?).map_err(in_file(meta))?;
    let src = load(source)?;
    let (stored, fresh) = match side.require("REDUCTION").map_err(|e| e.to_string())? {
        "alpha" => {
            let Source::Mld(inst) = src else {
                return Err("alpha metadata needs the MLD source".into());
            };
            let art = reduce_alpha(&inst);
            let fresh = alpha_sidecar(&art);
            (Stored::Alpha(art), fresh)
        }
        "beta" => {
            let injective = side.require("INJECTIVE").map_err(|e| e.to_string())? == "1";
            let art = build_beta(&src, injective)?;
            let fresh = beta_sidecar(&art);
            (Stored::Beta(art), fresh)
        }
        other => return Err(format!("unknown reduction {other:?}")),
    };
    if fresh != side {
        return Err(format!(
            "{} does not describe the reduction of {}",
            meta.display(),
            source.display()
        ));
    }
    Ok(stored)
}

fn run(cmd: Command) -> CliResult {
    match cmd {
        Command::GenMld {
            seed,
            n,
            m,
            t,
            planted,
            output,
            plant_out,
        } => {
            let (inst, plant) = gen_mld_with_plant(&GenSpec { seed, n, m, t, planted }).map_err(|e| e.to_string())?;
            write(output.as_deref(), &serialize_mld(&inst))?;
            if let (Some(p), Some(v)) = (plant_out, plant) {
                write(Some(&p), &serialize_witness(&v))?;
            }
            Ok(0)
        }
        Command::GenMq {
            seed,
            n,
            m,
            planted,
            output,
            plant_out,
        } => {
            let (inst, plant) = gen_mq_with_plant(&GenSpec {
                seed,
                n,
                m,
                t: 0,
                planted,
            })
            .map_err(|e| e.to_string())?;
            write(output.as_deref(), &serialize_mq(&inst))?;
            if let (Some(p), Some(a)) = (plant_out, plant) {
                write(Some(&p), &serialize_witness(a.bits()))?;
            }
            Ok(0)
        }
        Command::Alpha { input, output } => {
            let Source::Mld(inst) = load(&input)? else {
                return Err("alpha expects an MLD file".into());
            };
            let art = reduce_alpha(&inst);
            write(Some(&output), &serialize_mq(&art.mq))?;
            write(Some(&meta_path(&output)), &alpha_sidecar(&art).serialize())?;
            Ok(0)
        }
        Command::Beta {
            input,
            injective,
            output,
        } => {
            let art = build_beta(&load(&input)?, injective)?;
            write(Some(&output), &serialize_mld(&art.mld))?;
            write(Some(&meta_path(&output)), &beta_sidecar(&art).serialize())?;
            Ok(0)
        }
        Command::StdForm {
            input,
            injective,
            output,
        } => {
            let Source::Mq(inst) = load(&input)? else {
                return Err("std-form expects an MQ file".into());
            };
            let sf = to_standard_form_with(&inst, StandardFormOptions { injective });
            write(output.as_deref(), &serialize_sf(&sf))?;
            Ok(0)
        }
        Command::Quadratize { expr, output } => {
            let f = parse_polynomial(&expr).map_err(|e| format!("expression: {e}"))?;
            let nvars = f.max_var().map_or(0, |v| v.index() as usize);
            let mut registry = VariableRegistry::with_originals(nvars);
            let q = quadratize(&f, &mut registry);
            let inst = MqInstance::new(q.equations, registry).map_err(|e| e.to_string())?;
            write(output.as_deref(), &serialize_mq(&inst))?;
            let mut side = Sidecar::default();
            side.push("ORIG", nvars);
            for (i, d) in q.log.defs.iter().enumerate() {
                let ops: Vec<String> = d.operands().iter().map(|v| v.index().to_string()).collect();
                side.push(
                    &format!("DEF_{}", i + 1),
                    format!("PROD {} {}", d.new.index(), ops.join(" ")),
                );
            }
            match output {
                Some(out) => write(Some(&meta_path(&out)), &side.serialize())?,
                None => eprint!("{}", side.serialize()),
            }
            Ok(0)
        }
        Command::Solve {
            input,
            budget,
            witness_out,
        } => {
            let (decision, witness, explored, elapsed) = match load(&input)? {
                Source::Mld(inst) => {
                    let r = solve_mld_exhaustive(&inst).map_err(|e| e.to_string())?;
                    (r.decision, r.witness, r.explored, r.elapsed)
                }
                Source::Mq(inst) => solve_mq_cli(&inst, budget)?,
                Source::Sf(sf) => solve_mq_cli(&sf.to_mq(), budget)?,
            };
            println!("decision {}", if decision { "yes" } else { "no" });
            println!("explored {explored}");
            println!("elapsed_ms {:.3}", elapsed.as_secs_f64() * 1e3);
            if let Some(w) = witness {
                match witness_out {
                    Some(p) => write(Some(&p), &serialize_witness(&w))?,
                    None => print!("{}", serialize_witness(&w)),
                }
            }
            Ok(if decision { 0 } else { 1 })
        }
        Command::Verify { instance, witness } => {
            let w = load_witness(&witness)?;
            let ok = match load(&instance)? {
                Source::Mld(inst) => verify_mld(&inst, &w),
                Source::Mq(inst) => verify_mq(&inst, &Assignment::from_bits(w)),
                Source::Sf(sf) => verify_mq(&sf.to_mq(), &Assignment::from_bits(w)),
            };
            println!("{}", if ok { "valid" } else { "invalid" });
            Ok(if ok { 0 } else { 1 })
        }
        Command::Lift {
            meta,
            source,
            witness,
            output,
        } => {
            let w = load_witness(&witness)?;
            let lifted = match rebuild(&meta, &source)? {
                Stored::Alpha(art) => lift_mld_witness(&art, &w).map_err(|e| e.to_string())?.into_bits(),
                Stored::Beta(art) => {
                    let a = Assignment::from_bits(w);
                    if art.sf.original_vars() == art.sf.num_vars() {
                        lift_mq_witness(&art, &a)
                    } else {
                        lift_source_witness(&art, &a)
                    }
                    .map_err(|e| e.to_string())?
                }
            };
            write(output.as_deref(), &serialize_witness(&lifted))?;
            Ok(0)
        }
        Command::Project {
            meta,
            source,
            witness,
            output,
        } => {
            let w = load_witness(&witness)?;
            let projected = match rebuild(&meta, &source)? {
                Stored::Alpha(art) => project_witness(&art, &Assignment::from_bits(w)).map_err(|e| e.to_string())?,
                Stored::Beta(art) => pull_back_mld_witness(&art, &w).map_err(|e| e.to_string())?.into_bits(),
            };
            write(output.as_deref(), &serialize_witness(&projected))?;
            Ok(0)
        }
        Command::Roundtrip {
            dir,
            seed,
            n,
            m,
            t,
            planted,
        } => match dir {
            Direction::Alpha => roundtrip_alpha(GenSpec { seed, n, m, t, planted }),
            Direction::Beta => roundtrip_beta(GenSpec {
                seed,
                n,
                m,
                t: 0,
                planted,
            }),
        },
        Command::Info { input } => {
            info(&load(&input)?);
            Ok(0)
        }
    }
}

type Solved = (bool, Option<BitVector>, u64, std::time::Duration);

fn solve_mq_cli(inst: &MqInstance, budget: Option<u64>) -> std::result::Result<Solved, String> {
    let r = match budget {
        Some(b) => solve_mq_search(inst, b),
        None => solve_mq_exhaustive(inst),
    }
    .map_err(|e| e.to_string())?;
    Ok((r.decision, r.witness.map(Assignment::into_bits), r.explored, r.elapsed))
}

fn roundtrip_alpha(spec: GenSpec) -> CliResult {
    let (inst, _) = gen_mld_with_plant(&spec).map_err(|e| e.to_string())?;
    let mld = solve_mld_exhaustive(&inst).map_err(|e| e.to_string())?;
    let art = reduce_alpha(&inst);
    let mq = solve_mq_search(&art.mq, MQ_NODE_BUDGET).map_err(|e| e.to_string())?;
    println!(
        "mld n={} m={} t={} decision {}",
        inst.n(),
        inst.m(),
        inst.t(),
        yes_no(mld.decision)
    );
    println!(
        "mq nvars={} equations={} decision {}",
        art.mq.nvars(),
        art.mq.num_equations(),
        yes_no(mq.decision)
    );
    let mut ok = mld.decision == mq.decision;
    if let Some(a) = &mq.witness {
        let v = project_witness(&art, a).map_err(|e| e.to_string())?;
        let good = verify_mld(&inst, &v);
        println!("projected mq witness verifies: {good}");
        ok &= good;
    }
    if let Some(v) = &mld.witness {
        let a = lift_mld_witness(&art, v).map_err(|e| e.to_string())?;
        let good = verify_mq(&art.mq, &a);
        println!("lifted mld witness verifies: {good}");
        ok &= good;
    }
    println!("{}", if ok { "decisions match" } else { "MISMATCH" });
    Ok(if ok { 0 } else { 1 })
}

fn roundtrip_beta(spec: GenSpec) -> CliResult {
    let (inst, _) = gen_mq_with_plant(&spec).map_err(|e| e.to_string())?;
    let mq = solve_mq_exhaustive(&inst).map_err(|e| e.to_string())?;
    let art = reduce_beta(&inst, false);
    println!(
        "mq nvars={} equations={} decision {}",
        inst.nvars(),
        inst.num_equations(),
        yes_no(mq.decision)
    );
    println!(
        "mld n={} m={} t={} (q={} lambda={} padding={})",
        art.mld.n(),
        art.mld.m(),
        art.mld.t(),
        art.meta.q,
        art.meta.lambda,
        art.meta.padding_triples
    );
    let mut ok = art.meta.bound_holds();
    println!("size bound {} <= {}: {}", art.meta.h_bits, art.meta.bound, ok);
    match solve_mld_exhaustive(&art.mld) {
        Ok(r) => {
            println!("mld decision {}", yes_no(r.decision));
            ok &= r.decision == mq.decision;
            if let Some(v) = r.witness {
                let a = pull_back_mld_witness(&art, &v).map_err(|e| e.to_string())?;
                let good = verify_mq(&inst, &a);
                println!("pulled-back mld witness verifies: {good}");
                ok &= good;
            }
        }
        Err(Error::BudgetExceeded(msg)) => println!("mld decision skipped: {msg}"),
        Err(e) => return Err(e.to_string()),
    }
    if let Some(a) = &mq.witness {
        let v = lift_source_witness(&art, a).map_err(|e| e.to_string())?;
        let good = verify_mld(&art.mld, &v) && v.weight() == art.mld.t();
        println!("lifted mq witness verifies with weight {}: {good}", v.weight());
        ok &= good;
        let back = pull_back_mld_witness(&art, &v).map_err(|e| e.to_string())?;
        let good = verify_mq(&inst, &back);
        println!("pulled back again verifies: {good}");
        ok &= good;
    }
    println!("{}", if ok { "decisions match" } else { "MISMATCH" });
    Ok(if ok { 0 } else { 1 })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn info(src: &Source) {
    match src {
        Source::Mld(inst) => {
            let ell = inst.ell();
            println!("kind MLD");
            println!("n {}", inst.n());
            println!("m {}", inst.m());
            println!("t {}", inst.t());
            println!("ell {ell}");
            println!("size {}", inst.size());
            let art = reduce_alpha(inst);
            let scale = (inst.n() * ell * ell) as f64;
            println!("alpha_nvars {}", art.mq.nvars());
            println!("alpha_equations {}", art.mq.num_equations());
            println!("alpha_nvars_per_n_ell2 {:.4}", art.mq.nvars() as f64 / scale);
            println!(
                "alpha_equations_per_n_ell2 {:.4}",
                art.mq.num_equations() as f64 / scale
            );
        }
        Source::Mq(inst) => {
            println!("kind MQ");
            println!("n {}", inst.nvars());
            println!("m {}", inst.num_equations());
            println!("size {}", inst.size());
            let art = reduce_beta(inst, false);
            beta_info(&art);
        }
        Source::Sf(sf) => {
            println!("kind SF");
            println!("q {}", sf.q());
            println!("lambda {}", sf.lambda());
            println!("nvars {}", sf.num_vars());
            println!("orig {}", sf.original_vars());
            println!("padding {}", sf.padding_triples);
            println!("size {}", sf.to_mq().size());
            if let Ok(art) = reduce_beta_standard(sf) {
                beta_info(&art);
            }
        }
    }
}

fn beta_info(art: &BetaArtifact) {
    println!("beta_q {}", art.meta.q);
    println!("beta_lambda {}", art.meta.lambda);
    println!("beta_mld_n {}", art.mld.n());
    println!("beta_mld_m {}", art.mld.m());
    println!("beta_mld_t {}", art.mld.t());
    println!("beta_h_bits {}", art.meta.h_bits);
    println!("beta_bound {}", art.meta.bound);
    println!("beta_bound_ok {}", art.meta.bound_holds());
}
