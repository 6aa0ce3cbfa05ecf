use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use serde_json::json;

use coxeter::coloring::paint;
use coxeter::complex::{build_ruin, components, CellPoset};
use coxeter::harness::{self, Options, Verdict, VerificationReport};
use coxeter::homology::{chi_orb, simplicial_homology, ChainComplex, DEFAULT_CHAIN_CAP};
use coxeter::nerve::{build_nerve, SphereVerdict};
use coxeter::{CoxeterError, CoxeterMatrix, CoxeterSystem, GenSet};

#[derive(Parser)]
#[command(name = "coxeter", version, about = "Coxeter systems, Davis complexes, ruins and collars")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a matrix file and summarize its spherical subsets.
    CheckSystem { file: PathBuf },
    /// Count the elements of a ball by length.
    Enumerate {
        file: PathBuf,
        #[arg(long)]
        radius: usize,
        /// Emit every normal form as `length,word`.
        #[arg(long)]
        csv: bool,
    },
    /// The nerve: f-vector, flagness, sphere certificate.
    Nerve {
        file: PathBuf,
        /// Expected sphere dimension.
        #[arg(long)]
        check_sphere: Option<usize>,
        /// Print a non-simplex clique when the nerve is not flag.
        #[arg(long)]
        flag: bool,
    },
    /// Cell counts of a ruin inside the truncated Davis complex.
    BuildRuin {
        file: PathBuf,
        #[arg(long)]
        letter: Option<String>,
        #[arg(long, value_delimiter = ',')]
        letters: Vec<String>,
        /// Ambient letters `V`; defaults to all generators.
        #[arg(long, value_delimiter = ',')]
        subset: Vec<String>,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Paint the one-letter ruin of `t`.
    Color {
        file: PathBuf,
        #[arg(long)]
        letter: String,
        #[arg(long)]
        radius: usize,
        /// Print the chamber graph in dot syntax instead of a summary.
        #[arg(long)]
        dot: bool,
    },
    /// Rational Betti numbers of a finite piece.
    Homology {
        file: PathBuf,
        #[arg(long, value_enum)]
        space: Space,
        #[arg(long)]
        letter: Option<String>,
        #[arg(long, value_delimiter = ',')]
        letters: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        subset: Vec<String>,
        #[arg(long, default_value_t = 0)]
        radius: usize,
    },
    /// Orbihedral Euler characteristic.
    Euler { file: PathBuf },
    /// Run the registered finite checks.
    VerifyLemmas {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        radius: usize,
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[arg(long)]
        json: bool,
        /// Run checks even when their hypotheses fail.
        #[arg(long)]
        no_gate: bool,
        /// Re-run the failures recorded in a JSON report.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    Sigma,
    Ruin,
    Nerve,
    Pair,
}

fn load(path: &Path) -> coxeter::Result<CoxeterMatrix> {
    let text = fs::read_to_string(path).map_err(|e| CoxeterError::Parse(format!("{}: {e}", path.display())))?;
    CoxeterMatrix::parse(&text)
}

fn letter_set(m: &CoxeterMatrix, letter: &Option<String>, letters: &[String]) -> coxeter::Result<GenSet> {
    let mut set = GenSet::EMPTY;
    for name in letter.iter().chain(letters) {
        set.insert(m.generator(name)?);
    }
    Ok(set)
}

fn subset_or_all(m: &CoxeterMatrix, names: &[String]) -> coxeter::Result<GenSet> {
    if names.is_empty() {
        return Ok(m.all());
    }
    letter_set(m, &None, names)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> coxeter::Result<ExitCode> {
    match cli.cmd {
        Cmd::CheckSystem { file } => {
            let m = load(&file)?;
            let poset = m.spherical_poset()?;
            println!("generators: {}", m.names().join(" "));
            println!("digest: {}", m.digest());
            println!("even: {}", m.is_even());
            println!("right-angled: {}", m.is_right_angled());
            println!("spherical subsets: {}", poset.len());
            println!("by size: {:?}", poset.rank_counts());
            if m.is_spherical(m.all()) {
                println!("finite: order {}", m.spherical_order(m.all()).expect("spherical"));
            }
        }
        Cmd::Enumerate { file, radius, csv } => {
            let m = load(&file)?;
            let sys = CoxeterSystem::new(m.clone());
            let ball = sys.enumerate_ball(m.all(), radius)?;
            if csv {
                println!("length,word");
                for w in ball.elements() {
                    println!("{},{}", w.length(), w.display_with(m.names()));
                }
            } else {
                for (k, c) in ball.level_counts().iter().enumerate() {
                    println!("{k}\t{c}");
                }
                println!("total\t{}", ball.len());
            }
        }
        Cmd::Nerve { file, check_sphere, flag } => {
            let m = load(&file)?;
            let nerve = build_nerve(&m)?;
            println!("f-vector: {:?}", nerve.f_vector());
            match nerve.flag_violation() {
                None => println!("flag: yes"),
                Some(c) if flag => {
                    let names: Vec<&str> = c.iter().map(|&g| m.name(g)).collect();
                    println!("flag: no, clique {{{}}}", names.join(","));
                }
                Some(_) => println!("flag: no"),
            }
            let verdict = nerve.sphere_check();
            match (&verdict, check_sphere) {
                (SphereVerdict::Sphere, Some(d)) if nerve.dimension() != d as isize => {
                    println!("sphere: S^{} (expected S^{d})", nerve.dimension())
                }
                (SphereVerdict::Sphere, _) => println!("sphere: S^{}", nerve.dimension()),
                (SphereVerdict::NotSphere { reason, witness }, _) => {
                    let names: Vec<&str> = witness.iter().map(|&g| m.name(g)).collect();
                    println!("sphere: no ({reason}; at {{{}}})", names.join(","))
                }
                (SphereVerdict::Inconclusive(r), _) => println!("sphere: inconclusive ({r})"),
            }
        }
        Cmd::BuildRuin { file, letter, letters, subset, radius, out } => {
            let m = load(&file)?;
            let sys = CoxeterSystem::new(m.clone());
            let t = letter_set(&m, &letter, &letters)?;
            let v = subset_or_all(&m, &subset)?;
            let sigma = CellPoset::build(&sys, v, radius)?;
            let ruin = build_ruin(&sigma, v, t)?;
            let by_type = |mask: &[bool]| -> serde_json::Value {
                sigma
                    .counts_by_type(Some(mask))
                    .into_iter()
                    .map(|(ty, c)| (m.format_set(ty), json!(c)))
                    .collect::<serde_json::Map<_, _>>()
                    .into()
            };
            let comps = components(&sigma, &ruin.boundary, v.minus(t));
            let report = json!({
                "system": m.digest(),
                "V": m.format_set(v),
                "T": m.format_set(t),
                "radius": radius,
                "omega": by_type(&ruin.omega),
                "boundary": by_type(&ruin.boundary),
                "hat": by_type(&ruin.hat),
                "boundary_components": comps.len(),
                "collars": comps.len(),
            });
            let text = serde_json::to_string_pretty(&report).expect("json");
            match out {
                Some(p) => fs::write(&p, text).map_err(|e| CoxeterError::Parse(e.to_string()))?,
                None => println!("{text}"),
            }
        }
        Cmd::Color { file, letter, radius, dot } => {
            let m = load(&file)?;
            let sys = CoxeterSystem::new(m.clone());
            let t = m.generator(&letter)?;
            let p = paint(&sys, t, radius)?;
            if dot {
                print!("{}", p.to_dot());
            } else {
                println!("colors on vertices: {}", p.color_count());
                println!("|A| = {}", p.space.size());
                for (c, ks) in p.c_collars() {
                    println!(
                        "{:?}\t{}\t{} collars",
                        p.collar_parity(ks[0]),
                        p.color(c).display_with(m.names()),
                        ks.len()
                    );
                }
            }
        }
        Cmd::Homology { file, space, letter, letters, subset, radius } => {
            let m = load(&file)?;
            let sys = CoxeterSystem::new(m.clone());
            let t = letter_set(&m, &letter, &letters)?;
            let v = subset_or_all(&m, &subset)?;
            let table = match space {
                Space::Nerve => simplicial_homology(&build_nerve(&m.restrict(v).0)?, None)?,
                _ => {
                    let sigma = CellPoset::build(&sys, v, radius)?;
                    let poset = sigma.poset();
                    let none = vec![false; sigma.len()];
                    let (x, a) = match space {
                        Space::Sigma => (sigma.sigma_mask(v), none),
                        Space::Ruin => {
                            let r = build_ruin(&sigma, v, t)?;
                            (r.omega, r.boundary)
                        }
                        _ => {
                            let r = build_ruin(&sigma, v, t)?;
                            (sigma.sigma_mask(v), r.hat)
                        }
                    };
                    let cc = ChainComplex::order_complex(&poset, &x, &a, DEFAULT_CHAIN_CAP)?;
                    println!("boundary squared vanishes: {}", cc.boundary_squared_vanishes());
                    cc.betti()
                }
            };
            println!("chains: {:?}", table.chain_counts);
            println!("betti: {:?}", table.betti);
            println!("euler: {}", table.euler);
        }
        Cmd::Euler { file } => {
            let m = load(&file)?;
            let chi = chi_orb(&m)?;
            println!("chi_orb: {chi}");
            let nerve = build_nerve(&m)?;
            let n = nerve.dimension() + 1;
            if n > 0 && n % 2 == 0 && nerve.sphere_check().is_sphere() {
                let k = n / 2;
                let signed = if k % 2 == 0 { chi.clone() } else { -chi.clone() };
                println!(
                    "nerve S^{}: (-1)^{k} chi_orb = {signed} {}",
                    n - 1,
                    if signed.is_negative() { "< 0" } else { ">= 0" }
                );
            }
        }
        Cmd::VerifyLemmas { file, radius, only, json, no_gate, replay } => {
            let m = load(&file)?;
            let sys = CoxeterSystem::new(m);
            if let Some(path) = replay {
                let text = fs::read_to_string(&path).map_err(|e| CoxeterError::Parse(e.to_string()))?;
                let reports: Vec<VerificationReport> =
                    serde_json::from_str(&text).map_err(|e| CoxeterError::Parse(e.to_string()))?;
                let mut reproduced = 0;
                for r in reports.iter().filter(|r| r.verdict == Verdict::Fail) {
                    let same = harness::replay(&sys, r)?;
                    println!("{}\tradius {}\t{}", r.check_id, r.radius, if same { "reproduced" } else { "differs" });
                    reproduced += usize::from(same);
                }
                return Ok(if reproduced > 0 { ExitCode::from(1) } else { ExitCode::SUCCESS });
            }
            let opts = Options {
                gate: !no_gate,
                ..Options::default()
            };
            let only = (!only.is_empty()).then_some(only);
            let reports = harness::verify_suite(&sys, radius, only.as_deref(), opts)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&reports).expect("json"));
            } else {
                for r in &reports {
                    let v = match r.verdict {
                        Verdict::Pass => "pass",
                        Verdict::Fail => "FAIL",
                        Verdict::Skipped => "skipped",
                    };
                    println!("{:<11} {:<8} {:>6}ms  {}", r.check_id, v, r.elapsed_ms, r.detail);
                    if let Some(w) = &r.witness {
                        println!("            witness: {}", w.data);
                    }
                }
            }
            if reports.iter().any(|r| r.verdict == Verdict::Fail) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
