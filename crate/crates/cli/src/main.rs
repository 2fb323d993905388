//! Command-line front end: window arithmetic, cell invariants, the
//! weight bijection, Kazhdan-Lusztig data, based-ring products, and the
//! verification harness, with a persistent polynomial cache.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use affine_cells::basedring::{t_product, verify_isomorphism, VerifyOptions};
use affine_cells::canonical::{epsilon, from_epsilon, CanonicalElement, DominantWeight};
use affine_cells::cells::{lambda_partition, mu_partition};
use affine_cells::hecke::{default_product_budget, HeckeCtx};
use affine_cells::word::reduced_word;
use affine_cells::{AffinePerm, Error, Partition};

#[derive(Parser)]
#[command(name = "affine-cells", version, about = "Cells, Kazhdan-Lusztig data and based rings for extended affine Weyl groups of type A")]
struct Cli {
    /// Rank; inferred from window length when omitted.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Partition as comma-separated parts, e.g. 2,1.
    #[arg(long, global = true)]
    lambda: Option<String>,
    /// Length budget: caps l(w)+l(u) in products, and bounds the member
    /// ball in `verify`.
    #[arg(long, global = true)]
    max_length: Option<usize>,
    /// Polynomial cache file; the AFFINE_CELLS_CACHE environment
    /// variable overrides this flag.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Element arithmetic on windows.
    Elt {
        #[command(subcommand)]
        op: EltOp,
    },
    /// Cell invariants of a window.
    Cell { window: String },
    /// Weight of a member of the canonical intersection.
    Eps { window: String },
    /// Member carrying a given weight, e.g. "(0)(1,0)".
    EpsInv { weight: String },
    /// Kazhdan-Lusztig polynomial P_{y,w} in the variable v = q^2.
    Kl { y: String, w: String },
    /// Structure constant gamma_{w,u,v} from the Hecke oracle.
    Gamma { w: String, u: String, v: String },
    /// Based-ring product t_w * t_u through the weight bijection.
    Jprod { w: String, u: String },
    /// Compare oracle and predicted structure constants for every pair
    /// of members drawn from a weight box.
    Verify {
        /// Weight entries range over [-max-weight, max-weight].
        #[arg(long, default_value_t = 3)]
        max_weight: i64,
        /// Worker threads; 0 keeps the default pool.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Write the full report as JSON to this path.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Skip star-operation invariance checks.
        #[arg(long)]
        no_stars: bool,
    },
}

#[derive(Subcommand)]
enum EltOp {
    /// Coxeter length.
    Len { w: String },
    /// Product a*b (apply b first).
    Mul { a: String, b: String },
    /// Inverse.
    Inv { w: String },
    /// A reduced word, rotation power first.
    Word { w: String },
    /// Left and right descent sets.
    Desc { w: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::LimitExceeded { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn parse_window(cli: &Cli, s: &str) -> Result<AffinePerm, Error> {
    let w: AffinePerm = s.parse()?;
    if let Some(n) = cli.n {
        if n != w.n() {
            return Err(Error::Parse(format!("window {s} has {} entries, but --n {n} was given", w.n())));
        }
    }
    Ok(w)
}

fn parse_lambda(cli: &Cli) -> Result<Option<Partition>, Error> {
    cli.lambda.as_deref().map(str::parse).transpose()
}

fn lambda_for(cli: &Cli, w: &AffinePerm) -> Result<Partition, Error> {
    match parse_lambda(cli)? {
        Some(l) => {
            if l.n() != w.n() {
                return Err(Error::Parse(format!("lambda {l} does not sum to the rank {}", w.n())));
            }
            Ok(l)
        }
        None => Ok(lambda_partition(w)),
    }
}

fn cache_path(cli: &Cli) -> Option<PathBuf> {
    std::env::var_os("AFFINE_CELLS_CACHE").map(PathBuf::from).or_else(|| cli.cache.clone())
}

fn ctx_with_cache(cli: &Cli, n: usize, budget: usize) -> Result<HeckeCtx, Error> {
    let ctx = HeckeCtx::with_budget(n, budget);
    if let Some(path) = cache_path(cli) {
        if path.exists() {
            ctx.kl.load(&path)?;
        }
    }
    Ok(ctx)
}

fn save_cache(cli: &Cli, ctx: &HeckeCtx) -> Result<(), Error> {
    if let Some(path) = cache_path(cli) {
        ctx.kl.save(&path)?;
    }
    Ok(())
}

fn emit(cli: &Cli, text: String, value: serde_json::Value) {
    if cli.json {
        println!("{value}");
    } else {
        println!("{text}");
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.cmd {
        Cmd::Elt { op } => run_elt(cli, op)?,
        Cmd::Cell { window } => {
            let w = parse_window(cli, window)?;
            let lambda = lambda_partition(&w);
            let mu = mu_partition(&w);
            emit(
                cli,
                format!("lambda={lambda} mu={mu}"),
                json!({"lambda": lambda.to_string(), "mu": mu.to_string()}),
            );
        }
        Cmd::Eps { window } => {
            let w = parse_window(cli, window)?;
            let lambda = lambda_for(cli, &w)?;
            let member = CanonicalElement::new(w, lambda)?;
            let eps = epsilon(&member);
            emit(cli, eps.to_string(), json!({ "weight": eps }));
        }
        Cmd::EpsInv { weight } => {
            let lambda = parse_lambda(cli)?
                .ok_or_else(|| Error::Parse("eps-inv needs --lambda".into()))?;
            let eps: DominantWeight = weight.parse()?;
            let member = from_epsilon(&lambda, &eps)?;
            emit(
                cli,
                member.perm().to_string(),
                json!({ "window": member.perm().window() }),
            );
        }
        Cmd::Kl { y, w } => {
            let y = parse_window(cli, y)?;
            let w = parse_window(cli, w)?;
            if y.n() != w.n() {
                return Err(Error::RankMismatch(y.n(), w.n()));
            }
            let ctx = ctx_with_cache(cli, w.n(), cli.max_length.unwrap_or(64))?;
            let p = ctx.kl.kl(&y, &w)?;
            save_cache(cli, &ctx)?;
            emit(cli, p.to_string(), json!({"p": p.to_string(), "coeffs": p.coeffs()}));
        }
        Cmd::Gamma { w, u, v } => {
            let w = parse_window(cli, w)?;
            let u = parse_window(cli, u)?;
            let v = parse_window(cli, v)?;
            let budget = cli.max_length.unwrap_or(default_product_budget(w.n()));
            let ctx = ctx_with_cache(cli, w.n(), budget)?;
            let g = ctx.gamma_oracle(&w, &u, &v)?;
            save_cache(cli, &ctx)?;
            emit(cli, g.to_string(), json!({ "gamma": g }));
        }
        Cmd::Jprod { w, u } => {
            let w = parse_window(cli, w)?;
            let u = parse_window(cli, u)?;
            let lambda = lambda_for(cli, &w)?;
            let wm = CanonicalElement::new(w, lambda.clone())?;
            let um = CanonicalElement::new(u, lambda)?;
            let prod = t_product(&wm, &um)?;
            let terms = prod.sorted_terms();
            let text = if terms.is_empty() {
                "0".to_string()
            } else {
                terms
                    .iter()
                    .map(|(v, m)| format!("{m}*t{v}"))
                    .collect::<Vec<_>>()
                    .join(" + ")
            };
            let jterms: Vec<_> = terms
                .iter()
                .map(|(v, m)| json!({"window": v.window(), "multiplicity": m}))
                .collect();
            emit(cli, text, serde_json::Value::Array(jterms));
        }
        Cmd::Verify { max_weight, jobs, report, no_stars } => {
            let lambda = parse_lambda(cli)?
                .ok_or_else(|| Error::Parse("verify needs --lambda".into()))?;
            if let Some(n) = cli.n {
                if n != lambda.n() {
                    return Err(Error::Parse(format!("lambda {lambda} does not sum to --n {n}")));
                }
            }
            let bound = cli
                .max_length
                .ok_or_else(|| Error::Parse("verify needs --max-length".into()))?;
            affine_cells::par::configure_threads(*jobs);
            // Star-operation checks move each factor's length by up to 2.
            let ctx = ctx_with_cache(cli, lambda.n(), 2 * bound + 4)?;
            let mut opts = VerifyOptions::new(bound);
            opts.weight_bound = *max_weight;
            opts.check_stars = !no_stars;
            opts.parallel = *jobs != 1;
            let rep = verify_isomorphism(&ctx, &lambda, opts)?;
            save_cache(cli, &ctx)?;
            if let Some(path) = report {
                std::fs::write(path, serde_json::to_string_pretty(&rep)?.as_bytes())?;
            }
            if cli.json {
                println!("{}", serde_json::to_string(&rep)?);
            } else {
                let s = &rep.summary;
                println!(
                    "members={} pairs={} triples={} nonzero={} disagreements={} degree_violations={} dual={}:{} star_gamma={}:{} star_h={}:{} wall_ms={}",
                    s.members,
                    s.pairs,
                    s.triples_checked,
                    s.oracle_nonzero,
                    s.disagreements,
                    s.degree_violations,
                    s.dual_checks,
                    s.dual_failures,
                    s.star_gamma_checks,
                    s.star_gamma_failures,
                    s.star_h_checks,
                    s.star_h_failures,
                    rep.wall.as_millis()
                );
            }
            if !rep.all_agree() {
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_elt(cli: &Cli, op: &EltOp) -> Result<(), Error> {
    match op {
        EltOp::Len { w } => {
            let w = parse_window(cli, w)?;
            emit(cli, w.length().to_string(), json!({"length": w.length()}));
        }
        EltOp::Mul { a, b } => {
            let a = parse_window(cli, a)?;
            let b = parse_window(cli, b)?;
            let p = a.multiply(&b)?;
            emit(cli, p.to_string(), json!({"window": p.window()}));
        }
        EltOp::Inv { w } => {
            let w = parse_window(cli, w)?.inverse();
            emit(cli, w.to_string(), json!({"window": w.window()}));
        }
        EltOp::Word { w } => {
            let w = parse_window(cli, w)?;
            let word = reduced_word(&w);
            emit(cli, word.to_string(), json!({"word": word.to_string()}));
        }
        EltOp::Desc { w } => {
            let w = parse_window(cli, w)?;
            let r = w.right_descents();
            let l = w.left_descents();
            let fmt = |s: &[usize]| {
                let inner = s.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
                format!("{{{inner}}}")
            };
            emit(
                cli,
                format!("R={} L={}", fmt(&r), fmt(&l)),
                json!({"right": r, "left": l}),
            );
        }
    }
    Ok(())
}
