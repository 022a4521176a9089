//! Command-line driver for the multiplicity-counting library.
//!
//! Exit codes: 0 when every requested check passes, 1 when an inequality is
//! violated (which would falsify the counting bounds and is reported loudly),
//! 2 on input or usage errors.

use clap::{Args, Parser, Subcommand};
use multcount::geom::{gaussian_count, parse_point};
use multcount::gf::parse_field_spec;
use multcount::harness::{
    bezout_pair_check, cylinder_family_check, fulton_check, generate_corpus, lineaire_check,
    verify_main_bound, CorpusConfig,
};
use multcount::ideals::{is_reduced, singular_locus_dim, GroebnerLimits};
use multcount::itree::{check_chongshu2, parse_target, validate_forest, Forest};
use multcount::localmult::{
    hilbert_samuel, multiplicity_at, multiplicity_via_derived, HypersurfaceScheme,
};
use multcount::mpoly::poly_parse;
use std::path::Path;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "multcount",
    version,
    about = "Local multiplicities on hypersurfaces over finite fields: computations, intersection trees, and counting bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SchemeArgs {
    /// Field spec: "p" or "p^k"
    #[arg(long)]
    field: String,
    /// Ambient projective dimension
    #[arg(long)]
    n: usize,
    /// Polynomial: a file path or an inline equation
    #[arg(long)]
    poly: String,
}

#[derive(Subcommand)]
enum Command {
    /// Multiplicity of a point on a hypersurface, by both algorithms
    Mult {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Point "a0:a1:...:an"
        #[arg(long)]
        point: String,
    },
    /// Value of the local Hilbert-Samuel function C(n+s-1,s) - C(n+s-r-1,s-r)
    HilbertSamuel { n: u32, r: u32, s: u32 },
    /// Dimension of the singular locus and the Jacobian basis size
    Singdim {
        #[command(flatten)]
        scheme: SchemeArgs,
    },
    /// Reducedness verdict with the reason
    Reduced {
        #[command(flatten)]
        scheme: SchemeArgs,
    },
    /// Intersection-tree file operations
    Tree {
        #[command(subcommand)]
        command: TreeCommand,
    },
    /// Verify the multiplicity-sum bound on one hypersurface
    VerifyBound {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Emit the full report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Generate a seeded corpus of reduced hypersurfaces
    Corpus {
        /// Field spec: "p" or "p^k"
        #[arg(long)]
        field: String,
        #[arg(long)]
        n: usize,
        /// Equation degree
        #[arg(long)]
        delta: u32,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        /// Output directory for the polynomial files
        #[arg(long)]
        out: String,
    },
    /// Exact left side for the concurrent-lines family
    Cylinder {
        #[arg(long)]
        field: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: u32,
    },
    /// Plane-curve multiplicity bound
    Fulton {
        #[arg(long)]
        field: String,
        /// Polynomial: a file path or an inline equation
        #[arg(long)]
        poly: String,
        /// Also sum over closed points weighted by degree
        #[arg(long)]
        closed_points: bool,
        /// Residue-degree cap for closed-point enumeration
        #[arg(long, default_value_t = 8)]
        max_m: u32,
    },
    /// Intersection total of two plane curves over all closed points
    Bezout {
        #[arg(long)]
        field: String,
        #[arg(long)]
        poly1: String,
        #[arg(long)]
        poly2: String,
        /// Residue-degree cap for closed-point enumeration
        #[arg(long, default_value_t = 12)]
        max_m: u32,
    },
    /// Point-count bound #X(F_q) <= deg(X) #P^{n-1}(F_q)
    Lineaire {
        #[command(flatten)]
        scheme: SchemeArgs,
    },
    /// Number of r-dimensional subspaces of F_q^n
    Grassmann { r: u32, n: u32, q: u64 },
}

#[derive(Subcommand)]
enum TreeCommand {
    /// Structural validation of a tree file
    Validate { file: String },
    /// Check the descendant-occurrence inequality at a target scheme
    Chongshu2 {
        file: String,
        /// Target: a registered name or a point "a0:...:an" (use "@m" for a
        /// closed point of residue degree m)
        #[arg(long)]
        target: String,
        /// Recorded multiplicity product on the right side
        #[arg(long)]
        mu_product: u128,
    },
}

fn read_poly_text(arg: &str) -> Result<String, String> {
    if Path::new(arg).exists() {
        std::fs::read_to_string(arg).map_err(|e| format!("cannot read {arg}: {e}"))
    } else if arg.contains('T') || arg.chars().all(|c| c.is_ascii_digit()) {
        Ok(arg.to_string())
    } else {
        Err(format!("{arg}: no such file and not a polynomial"))
    }
}

fn load_scheme(args: &SchemeArgs) -> Result<HypersurfaceScheme, String> {
    let field = parse_field_spec(&args.field).map_err(|e| e.to_string())?;
    let text = read_poly_text(&args.poly)?;
    let f = poly_parse(text.trim(), &field, args.n + 1).map_err(|e| e.to_string())?;
    HypersurfaceScheme::new(f, args.n).map_err(|e| e.to_string())
}

/// Outcome: pass (0), inequality violated (1).
enum Outcome {
    Pass,
    Violated,
}

fn run(cli: Cli) -> Result<Outcome, String> {
    let limits = GroebnerLimits::default();
    match cli.command {
        Command::Mult { scheme, point } => {
            let x = load_scheme(&scheme)?;
            let p = parse_point(&point, x.field(), x.ambient_dim()).map_err(|e| e.to_string())?;
            let a = multiplicity_at(&x, &p).map_err(|e| e.to_string())?;
            let b = multiplicity_via_derived(&x, &p).map_err(|e| e.to_string())?;
            println!("mu = {}", a.mu);
            println!("translation: {}", a.mu);
            println!("derived-order: {}", b.mu);
            if a.mu != b.mu {
                return Err("the two algorithms disagree".into());
            }
            Ok(Outcome::Pass)
        }
        Command::HilbertSamuel { n, r, s } => {
            println!("{}", hilbert_samuel(n, r, s));
            Ok(Outcome::Pass)
        }
        Command::Singdim { scheme } => {
            let x = load_scheme(&scheme)?;
            let sing = singular_locus_dim(&x, &limits).map_err(|e| e.to_string())?;
            println!("s = {}", sing.dim);
            println!("basis size = {}", sing.basis_size);
            if sing.everywhere_singular {
                println!("everywhere-singular / non-reduced");
            }
            Ok(Outcome::Pass)
        }
        Command::Reduced { scheme } => {
            let x = load_scheme(&scheme)?;
            let (ok, reason) = is_reduced(&x, &limits).map_err(|e| e.to_string())?;
            println!("{}: {}", if ok { "reduced" } else { "not reduced" }, reason);
            Ok(Outcome::Pass)
        }
        Command::Tree { command } => match command {
            TreeCommand::Validate { file } => {
                let text = std::fs::read_to_string(&file)
                    .map_err(|e| format!("cannot read {file}: {e}"))?;
                let forest = Forest::from_json(&text).map_err(|e| e.to_string())?;
                let violations = validate_forest(&forest);
                if violations.is_empty() {
                    println!("ok: {} tree(s), no violations", forest.trees.len());
                    Ok(Outcome::Pass)
                } else {
                    for v in &violations {
                        println!("violation: {v}");
                    }
                    Ok(Outcome::Violated)
                }
            }
            TreeCommand::Chongshu2 {
                file,
                target,
                mu_product,
            } => {
                let text = std::fs::read_to_string(&file)
                    .map_err(|e| format!("cannot read {file}: {e}"))?;
                let forest = Forest::from_json(&text).map_err(|e| e.to_string())?;
                let t =
                    parse_target(&target, &forest.field, forest.n).map_err(|e| e.to_string())?;
                let verdict =
                    check_chongshu2(&forest, &t, mu_product).map_err(|e| e.to_string())?;
                println!(
                    "lhs = {}, rhs = {}: {}",
                    verdict.lhs,
                    verdict.rhs,
                    if verdict.ok { "pass" } else { "VIOLATED" }
                );
                Ok(if verdict.ok {
                    Outcome::Pass
                } else {
                    Outcome::Violated
                })
            }
        },
        Command::VerifyBound { scheme, json } => {
            let x = load_scheme(&scheme)?;
            let report = verify_main_bound(&x, &limits, None).map_err(|e| e.to_string())?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!(
                    "delta = {}, n = {}, q = {}, s = {}",
                    report.delta, report.n, report.q, report.s
                );
                println!(
                    "lhs = {} <= rhs = {}: {}",
                    report.lhs,
                    report.rhs,
                    if report.ok { "pass" } else { "VIOLATED" }
                );
                for p in &report.per_point {
                    println!("  {} mu = {}", p.point, p.mu);
                }
            }
            Ok(if report.ok {
                Outcome::Pass
            } else {
                Outcome::Violated
            })
        }
        Command::Corpus {
            field,
            n,
            delta,
            count,
            seed,
            out,
        } => {
            let field = parse_field_spec(&field).map_err(|e| e.to_string())?;
            let cfg = CorpusConfig {
                field: field.clone(),
                n,
                delta_min: delta,
                delta_max: delta,
                count,
                seed,
                require_reduced: true,
                force_singular_point: None,
            };
            let corpus = generate_corpus(&cfg, &limits).map_err(|e| e.to_string())?;
            std::fs::create_dir_all(&out).map_err(|e| format!("cannot create {out}: {e}"))?;
            let mut names = Vec::new();
            for (i, x) in corpus.members.iter().enumerate() {
                let name = format!("member_{i:03}.poly");
                std::fs::write(Path::new(&out).join(&name), format!("{}\n", x.poly()))
                    .map_err(|e| e.to_string())?;
                names.push(name);
            }
            let manifest = serde_json::json!({
                "field": field.spec_string(),
                "n": n.to_string(),
                "delta": delta.to_string(),
                "count": count.to_string(),
                "seed": seed.to_string(),
                "rejected_nonreduced": corpus.rejected_nonreduced.to_string(),
                "rejected_zero": corpus.rejected_zero.to_string(),
                "members": names,
            });
            std::fs::write(
                Path::new(&out).join("manifest.json"),
                serde_json::to_string_pretty(&manifest).unwrap(),
            )
            .map_err(|e| e.to_string())?;
            println!("wrote {} members to {out}", corpus.members.len());
            Ok(Outcome::Pass)
        }
        Command::Cylinder { field, n, delta } => {
            let field = parse_field_spec(&field).map_err(|e| e.to_string())?;
            let report = cylinder_family_check(delta, n, &field, &limits, None)
                .map_err(|e| e.to_string())?;
            println!(
                "s = {} (expected {}), lhs = {} (expected {}), singular rational points = {} (expected {})",
                report.s,
                report.n - 2,
                report.lhs,
                report.expected_lhs,
                report.singular_points,
                report.expected_singular_points
            );
            println!("{}", if report.ok { "pass" } else { "VIOLATED" });
            Ok(if report.ok {
                Outcome::Pass
            } else {
                Outcome::Violated
            })
        }
        Command::Fulton {
            field,
            poly,
            closed_points,
            max_m,
        } => {
            let field = parse_field_spec(&field).map_err(|e| e.to_string())?;
            let text = read_poly_text(&poly)?;
            let f = poly_parse(text.trim(), &field, 3).map_err(|e| e.to_string())?;
            let x = HypersurfaceScheme::new(f, 2).map_err(|e| e.to_string())?;
            let report =
                fulton_check(&x, closed_points, max_m, &limits, None).map_err(|e| e.to_string())?;
            println!(
                "rational: {} <= {}{}",
                report.rational_sum,
                report.rhs,
                match &report.closed_sum {
                    Some(c) => format!(", closed points: {c} <= {}", report.rhs),
                    None => String::new(),
                }
            );
            println!("{}", if report.ok { "pass" } else { "VIOLATED" });
            Ok(if report.ok {
                Outcome::Pass
            } else {
                Outcome::Violated
            })
        }
        Command::Bezout {
            field,
            poly1,
            poly2,
            max_m,
        } => {
            let field = parse_field_spec(&field).map_err(|e| e.to_string())?;
            let t1 = read_poly_text(&poly1)?;
            let t2 = read_poly_text(&poly2)?;
            let fc = HypersurfaceScheme::new(
                poly_parse(t1.trim(), &field, 3).map_err(|e| e.to_string())?,
                2,
            )
            .map_err(|e| e.to_string())?;
            let gc = HypersurfaceScheme::new(
                poly_parse(t2.trim(), &field, 3).map_err(|e| e.to_string())?,
                2,
            )
            .map_err(|e| e.to_string())?;
            let report = bezout_pair_check(&fc, &gc, max_m).map_err(|e| e.to_string())?;
            for p in &report.points {
                println!("{} deg {} i {}", p.point, p.degree, p.multiplicity);
            }
            println!(
                "total = {} (expected {}){}",
                report.total,
                report.expected,
                if report.complete {
                    ""
                } else {
                    " [incomplete: raise --max-m]"
                }
            );
            if report.ok {
                println!("pass");
                Ok(Outcome::Pass)
            } else if !report.complete {
                Err("closed points beyond the residue-degree cap".into())
            } else {
                println!("VIOLATED");
                Ok(Outcome::Violated)
            }
        }
        Command::Lineaire { scheme } => {
            let x = load_scheme(&scheme)?;
            let report = lineaire_check(&x, &limits, None).map_err(|e| e.to_string())?;
            println!("#X(F_q) = {} <= {}", report.count, report.bound);
            if let (Some(c), Some(b)) = (&report.singular_count, &report.singular_bound) {
                println!("#X^sing(F_q) = {c} <= {b}");
            }
            println!("{}", if report.ok { "pass" } else { "VIOLATED" });
            Ok(if report.ok {
                Outcome::Pass
            } else {
                Outcome::Violated
            })
        }
        Command::Grassmann { r, n, q } => {
            println!("{}", gaussian_count(r, n, q).map_err(|e| e.to_string())?);
            Ok(Outcome::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Violated) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
