//! `qcount`: point counts and identity checks for quiver representations.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qcount_core::cm::{classify_nil_orbits, frobenius_glue, m0_count, partition_count, sigma_set, snakes};
use qcount_core::enumerate::{BundleCache, Budget, CountBundle, Counter};
use qcount_core::error::Error;
use qcount_core::field::{FieldSpec, FieldTower, Scalar};
use qcount_core::kac::{kac_poly, positivity_check};
use qcount_core::moment::ai_vs_fiber_check;
use qcount_core::pleth::{dilog_check, hua_check};
use qcount_core::quiver::{catalog, parse_quiver, DimensionVector, Potential, Quiver, QuiverFile};

#[derive(Parser)]
#[command(name = "qcount", version, about = "Exact counts of quiver representations over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Quiver spec file, or `builtin:NAME` (a1, a2, jordan, kronecker, cm, loops2, cyclicN).
    #[arg(long, global = true)]
    quiver: Option<String>,
    /// Dimension vector as comma-separated integers.
    #[arg(long, global = true)]
    dim: Option<String>,
    /// Field order.
    #[arg(long, global = true)]
    q: Option<u64>,
    /// Count over the degree-N extension of F_q.
    #[arg(long, global = true, default_value_t = 1)]
    ext: u32,
    /// Named potential from the quiver file; `default` is the unnamed one.
    #[arg(long, global = true)]
    potential: Option<String>,
    /// Per-vertex moment-map scalars.
    #[arg(long, global = true, allow_hyphen_values = true)]
    eta: Option<String>,
    #[arg(long, global = true)]
    cutoff: Option<u32>,
    /// Size parameter for sigma, cm-cells and snakes (cycle length).
    #[arg(long, global = true)]
    n: Option<u32>,
    /// Sample field orders for kac.
    #[arg(long, global = true)]
    samples: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Cache directory for count bundles; QCOUNT_CACHE takes precedence.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    /// Operation cap for brute-force kernels.
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Cap on endomorphism-algebra enumeration.
    #[arg(long, global = true)]
    end_cap: Option<u128>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Points, classes, groupoid count and absolutely indecomposables.
    Count,
    /// Generalized Hua formula up to a cutoff.
    Hua,
    /// Quantum dilogarithm identity up to a cutoff.
    Dilog,
    /// AI count against the moment-map fiber for a generic eta.
    MomentCheck,
    /// Nilpotent orbit classification and M_0 cell count.
    CmCells,
    /// The set Σ(n) with its Frobenius gluing.
    Sigma,
    /// Snake collections against colored Young diagrams.
    Snakes,
    /// Kac polynomial by interpolation.
    Kac,
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } | Error::EndCapExceeded { .. } => Failure::Budget(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<(Value, bool), Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

impl Opts {
    fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(ops) = self.budget {
            b.ops = ops;
        }
        if let Some(cap) = self.end_cap {
            b.end_cap = cap;
        }
        b
    }

    fn cache(&self) -> Option<BundleCache> {
        if self.no_cache {
            return None;
        }
        std::env::var_os("QCOUNT_CACHE")
            .filter(|s| !s.is_empty())
            .map(PathBuf::from)
            .or_else(|| self.cache.clone())
            .map(BundleCache::new)
    }

    fn counter(&self) -> Counter {
        Counter::new(self.budget()).with_cache(self.cache())
    }

    fn quiver_file(&self) -> Result<QuiverFile, Failure> {
        let Some(spec) = &self.quiver else {
            return usage("--quiver is required");
        };
        if let Some(name) = spec.strip_prefix("builtin:") {
            let quiver = builtin(name).ok_or_else(|| Failure::Usage(format!("unknown builtin quiver {name}")))?;
            return Ok(QuiverFile {
                quiver,
                dim: None,
                potential: None,
                named_potentials: Default::default(),
            });
        }
        let text = std::fs::read_to_string(spec).map_err(|e| Failure::Usage(format!("{spec}: {e}")))?;
        Ok(parse_quiver(&text)?)
    }

    fn dim(&self, file: &QuiverFile) -> Result<DimensionVector, Failure> {
        let v = match (&self.dim, &file.dim) {
            (Some(s), _) => DimensionVector::parse_csv(s)?,
            (None, Some(d)) => d.clone(),
            (None, None) => return usage("--dim is required"),
        };
        if v.rank() != file.quiver.num_vertices() {
            return usage(format!("dimension vector {v} does not match {} vertices", file.quiver.num_vertices()));
        }
        Ok(v)
    }

    fn field(&self) -> Result<Arc<FieldSpec>, Failure> {
        match self.q {
            Some(q) => Ok(FieldSpec::of_order(q)?),
            None => usage("--q is required"),
        }
    }

    fn potential(&self, file: &QuiverFile) -> Result<Potential, Failure> {
        match &self.potential {
            None => Ok(Potential::zero()),
            Some(name) => file
                .potential_named(name)
                .cloned()
                .ok_or_else(|| Failure::Usage(format!("no potential named {name}"))),
        }
    }

    fn need<T: Copy>(&self, v: Option<T>, flag: &str) -> Result<T, Failure> {
        v.ok_or_else(|| Failure::Usage(format!("--{flag} is required")))
    }
}

fn builtin(name: &str) -> Option<Quiver> {
    Some(match name {
        "a1" => catalog::a1(),
        "a2" => catalog::a2(),
        "jordan" => catalog::jordan(),
        "kronecker" => catalog::kronecker(),
        "cm" => catalog::calogero_moser(),
        _ => {
            if let Some(g) = name.strip_prefix("loops") {
                catalog::loops(g.parse().ok()?)
            } else if let Some(n) = name.strip_prefix("cyclic") {
                catalog::cyclic_framed(n.parse().ok().filter(|&n: &usize| n > 0)?)
            } else {
                return None;
            }
        }
    })
}

fn parse_csv_ints(s: &str, flag: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Failure::Usage(format!("--{flag}: bad integer {t:?}"))))
        .collect()
}

fn cmd_count(o: &Opts) -> Outcome {
    let file = o.quiver_file()?;
    let v = o.dim(&file)?;
    let base = o.field()?;
    let f = if o.ext > 1 {
        Arc::clone(FieldTower::extend(&base, o.ext)?.ext())
    } else {
        base
    };
    let quiver = Arc::new(file.quiver.clone());
    let bundle: CountBundle = o.counter().bundle(&quiver, &v, &f)?;
    let mut out = serde_json::to_value(bundle.to_record()).expect("record serializes");
    let phi = o.potential(&file)?;
    if !phi.is_zero() {
        out["exp_sum"] = serde_json::to_value(bundle.exp_sum(&phi, qcount_core::enumerate::SumMode::Plain)?.to_rat()).unwrap();
        out["ai_exp_sum"] = serde_json::to_value(bundle.ai_exp_sum(&phi)?).unwrap();
    }
    Ok((out, true))
}

fn cmd_hua(o: &Opts) -> Outcome {
    let file = o.quiver_file()?;
    let f = o.field()?;
    let cutoff = o.need(o.cutoff, "cutoff")?;
    let phi = o.potential(&file)?;
    let r = hua_check(&Arc::new(file.quiver.clone()), &f, cutoff, &phi, &o.counter())?;
    let pass = r.pass;
    Ok((serde_json::to_value(r).unwrap(), pass))
}

fn cmd_dilog(o: &Opts) -> Outcome {
    let r = dilog_check(o.need(o.cutoff, "cutoff")?)?;
    let pass = r.pass;
    Ok((serde_json::to_value(r).unwrap(), pass))
}

fn cmd_moment(o: &Opts) -> Outcome {
    let file = o.quiver_file()?;
    let v = o.dim(&file)?;
    let f = o.field()?;
    let Some(eta) = &o.eta else {
        return usage("--eta is required");
    };
    let eta: Vec<Scalar> = parse_csv_ints(eta, "eta")?.into_iter().map(|e| f.from_int(e)).collect();
    let r = ai_vs_fiber_check(&Arc::new(file.quiver.clone()), &v, &f, &eta, &o.budget())?;
    let pass = r.pass;
    Ok((serde_json::to_value(r).unwrap(), pass))
}

fn cmd_cm_cells(o: &Opts) -> Outcome {
    let n = o.need(o.n, "n")?;
    let f = o.field()?;
    let b = o.budget();
    let nil = classify_nil_orbits(n, &f, &b)?;
    let m0 = m0_count(n, &f, &b)?;
    let pass = nil.pass && m0.pass;
    Ok((json!({ "nil_orbits": nil, "m0": m0, "pass": pass }), pass))
}

fn cmd_sigma(o: &Opts) -> Outcome {
    let n = o.need(o.n, "n")?;
    let sigma = sigma_set(n);
    let p = partition_count(n as usize);
    let pairs = sigma
        .iter()
        .map(|s| Ok(json!({ "lambda": s.lambda, "mu": s.mu, "glued": frobenius_glue(s)? })))
        .collect::<Result<Vec<Value>, Error>>()?;
    let pass = p == sigma.len().into();
    Ok((json!({ "n": n, "count": sigma.len(), "p_n": p.to_string(), "pairs": pairs, "pass": pass }), pass))
}

fn cmd_snakes(o: &Opts) -> Outcome {
    let n = o.need(o.n, "n")? as usize;
    let Some(dim) = &o.dim else {
        return usage("--dim is required");
    };
    let v = DimensionVector::parse_csv(dim)?;
    let r = snakes(n, &v.0)?;
    let pass = r.pass;
    Ok((serde_json::to_value(r).unwrap(), pass))
}

fn cmd_kac(o: &Opts) -> Outcome {
    let file = o.quiver_file()?;
    let v = o.dim(&file)?;
    let quiver = Arc::new(file.quiver.clone());
    let samples: Vec<u64> = match &o.samples {
        Some(s) => parse_csv_ints(s, "samples")?.into_iter().map(|x| x as u64).collect(),
        None => {
            let need = (qcount_core::kac::degree_bound(&quiver, &v).max(0) + 1) as usize;
            (2u64..).filter(|&q| qcount_core::field::prime_power(q).is_some()).take(need).collect()
        }
    };
    let k = kac_poly(&quiver, &v, &samples, &o.budget())?;
    let (nonneg, _) = positivity_check(&k);
    let mut out = serde_json::to_value(&k).unwrap();
    out["polynomial"] = json!(k.to_string());
    out["nonnegative"] = json!(nonneg);
    Ok((out, nonneg))
}

/// Flat CSV: one `key,value` row per scalar leaf, arrays indexed by position.
fn to_csv(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    walk(&if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") }, x, out);
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), x, out);
                }
            }
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut rows = Vec::new();
    walk("", v, &mut rows);
    let mut s = String::from("key,value\n");
    for (k, val) in rows {
        let quote = |x: &str| {
            if x.contains([',', '"', '\n']) {
                format!("\"{}\"", x.replace('"', "\"\""))
            } else {
                x.to_string()
            }
        };
        s.push_str(&format!("{},{}\n", quote(&k), quote(&val)));
    }
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let o = &cli.opts;
    if let Some(t) = o.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Count => cmd_count(o),
        Command::Hua => cmd_hua(o),
        Command::Dilog => cmd_dilog(o),
        Command::MomentCheck => cmd_moment(o),
        Command::CmCells => cmd_cm_cells(o),
        Command::Sigma => cmd_sigma(o),
        Command::Snakes => cmd_snakes(o),
        Command::Kac => cmd_kac(o),
    };
    match result {
        Ok((value, pass)) => {
            let text = match o.format {
                Format::Json => serde_json::to_string_pretty(&value).unwrap() + "\n",
                Format::Csv => to_csv(&value),
            };
            // a closed pipe downstream is not an error
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
