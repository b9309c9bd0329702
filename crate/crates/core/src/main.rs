use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use hilbres::assemble::{assemble_ghilb, assemble_severi, evaluate, evaluate_terms, severi_example_verbatim, Evaluation};
use hilbres::chern::{BundleModel, ChernPoly, PlaneSpecialization, SurfaceModel};
use hilbres::config::{ConfigError, ProblemConfig};
use hilbres::multidegree::{weight_context, MonomialIdeal};
use hilbres::poly::{MPoly, Rational, VariableContext};
use hilbres::residue::ResidueOptions;
use hilbres::verify::verify_suite;

#[derive(Parser)]
#[command(name = "hilbres", version, about = "Tautological integrals over Hilbert schemes of points as iterated residues")]
struct Cli {
    /// Emit a JSON coefficient map instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a problem file.
    Eval {
        config: PathBuf,
        /// Also integrate over the plane with L = dH.
        #[arg(long)]
        plane_degree: Option<i64>,
    },
    /// Connected nodal-curve coefficient a_r on a generic surface.
    Severi {
        #[arg(long)]
        r: usize,
        /// Use the literal sign and weight conventions (r = 1, 2).
        #[arg(long)]
        verbatim: bool,
        /// ePD polynomial in z1..z{3r-1}.
        #[arg(long)]
        epd: Option<String>,
        #[arg(long)]
        plane_degree: Option<i64>,
    },
    /// Tautological integral over the geometric Hilbert scheme of k points.
    Ghilb {
        #[arg(long)]
        k: usize,
        /// Chern polynomial in e1, e2, … of the tautological bundle.
        #[arg(long, default_value = "e2")]
        phi: String,
        /// Chern roots of F.
        #[arg(long, default_value = "L", value_delimiter = ',')]
        roots: Vec<String>,
        #[arg(long, default_value = "generic-surface")]
        surface: String,
        /// Block polynomial as `m=poly` in z1..zm; repeatable.
        #[arg(long = "q")]
        q: Vec<String>,
    },
    /// Multidegree of a monomial ideal given by exponent vectors.
    Mdeg {
        /// Generators such as `2,0 1,1 0,2`.
        #[arg(required = true)]
        generators: Vec<String>,
        /// Weight symbols (default a, b, c, …).
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<String>>,
    },
    /// Run the self-checks.
    Verify,
}

#[derive(Serialize)]
struct Record {
    monomial: String,
    numerator: String,
    denominator: String,
}

fn record(monomial: &str, c: &Rational) -> Record {
    Record {
        monomial: monomial.to_string(),
        numerator: c.numer().to_string(),
        denominator: c.denom().to_string(),
    }
}

#[derive(Serialize)]
struct Output {
    coefficients: Vec<Record>,
    #[serde(skip_serializing_if = "Option::is_none")]
    plane: Option<Record>,
    warnings: Vec<String>,
}

enum Failure {
    Usage(String),
    Run(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Run(e.to_string())
    }
}

fn emit(json: bool, out: &Output, text: impl FnOnce()) {
    if json {
        println!("{}", serde_json::to_string_pretty(out).expect("records serialize"));
    } else {
        text();
        for w in &out.warnings {
            eprintln!("warning: {w}");
        }
    }
}

fn single(e: &Evaluation, plane_degree: Option<i64>, line: Option<&str>) -> Result<Output, Failure> {
    let plane = match (plane_degree, line) {
        (Some(d), Some(l)) => {
            let v = PlaneSpecialization::new(d)
                .integrate(e.residue.ctx(), &e.top, l)
                .ok_or_else(|| Failure::Run("top degree has classes without plane values".into()))?;
            Some(record(&format!("P2,d={d}"), &v))
        }
        (Some(_), None) => return Err(Failure::Usage("no line bundle to specialize".into())),
        _ => None,
    };
    Ok(Output {
        coefficients: e.ordered().iter().map(|(k, c)| record(k, c)).collect(),
        plane,
        warnings: e.warnings.clone(),
    })
}

fn print_single(out: &Output, e: &Evaluation) {
    println!("{}", e.top_poly());
    if let Some(p) = &out.plane {
        let v = if p.denominator == "1" { p.numerator.clone() } else { format!("{}/{}", p.numerator, p.denominator) };
        println!("{} = {v}", p.monomial);
    }
}

fn sum_text(m: &BTreeMap<String, Rational>) -> String {
    if m.is_empty() {
        return "0".into();
    }
    m.iter()
        .map(|(k, c)| if c.is_integer() && *c.numer() == 1.into() { k.clone() } else { format!("{c}*{k}") })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let json = cli.json;
    match cli.command {
        Command::Eval { config, plane_degree } => {
            let src = std::fs::read_to_string(&config)
                .map_err(|e| Failure::Usage(format!("{}: {e}", config.display())))?;
            let cfg = ProblemConfig::parse(&src).map_err(|e| match e {
                ConfigError::Empty => Failure::Usage(e.to_string()),
                e => Failure::Run(e.to_string()),
            })?;
            let (a, x) = cfg.to_assembled()?;
            let e = evaluate(&a, &x)?;
            let out = single(&e, plane_degree, a.line.as_deref())?;
            emit(json, &out, || print_single(&out, &e));
        }
        Command::Severi { r, verbatim, epd, plane_degree } => {
            let epd = epd
                .map(|s| {
                    let ctx = VariableContext::block(3 * r - 1);
                    MPoly::parse(&ctx, &s)
                })
                .transpose()?;
            let a = if verbatim { severi_example_verbatim(r)? } else { assemble_severi(r, epd.as_ref())? };
            let e = evaluate(&a, &SurfaceModel::generic_surface())?;
            let out = single(&e, plane_degree, a.line.as_deref())?;
            emit(json, &out, || print_single(&out, &e));
        }
        Command::Ghilb { k, phi, roots, surface, q } => {
            let x = SurfaceModel::preset(&surface)?;
            let bundle = BundleModel { roots };
            let phi = ChernPoly::parse(&phi, bundle.rank() * k)?;
            let mut qs = BTreeMap::new();
            for entry in q {
                let (m, poly) = entry
                    .split_once('=')
                    .ok_or_else(|| Failure::Usage(format!("expected m=poly, got '{entry}'")))?;
                let m: usize = m.trim().parse().map_err(|_| Failure::Usage(format!("bad block size '{m}'")))?;
                qs.insert(m, MPoly::parse(&VariableContext::block(m), poly)?);
            }
            let terms = assemble_ghilb(k, &bundle, &x, &phi, &qs)?;
            let r = evaluate_terms(&terms, &x, &ResidueOptions::default())?;
            let mut warnings: Vec<String> = Vec::new();
            for w in r.terms.iter().flat_map(|e| &e.warnings) {
                if !warnings.contains(w) {
                    warnings.push(w.clone());
                }
            }
            let out = Output {
                coefficients: r.total.iter().map(|(k, c)| record(k, c)).collect(),
                plane: None,
                warnings,
            };
            emit(json, &out, || {
                for (t, e) in terms.iter().zip(&r.terms) {
                    println!("{}: {}", t.partition, sum_text(&e.coefficients));
                }
                println!("total: {}", sum_text(&r.total));
            });
        }
        Command::Mdeg { generators, weights } => {
            let gens: Vec<Vec<u32>> = generators
                .iter()
                .map(|g| {
                    g.split(',')
                        .map(|e| e.trim().parse::<u32>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| Failure::Usage(format!("bad exponent vector '{g}'")))
                })
                .collect::<Result<_, _>>()?;
            let n = gens[0].len();
            let names: Vec<String> = weights.unwrap_or_else(|| (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect());
            let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            let ctx = weight_context(&refs);
            let weights = (0..refs.len()).map(|i| MPoly::var(&ctx, i)).collect();
            let ideal = MonomialIdeal::new(gens, weights)?;
            let p = ideal.multidegree()?;
            let out = Output {
                coefficients: p.terms().map(|(m, c)| record(&hilbres::poly::monomial_string(&ctx, m), c)).collect(),
                plane: None,
                warnings: Vec::new(),
            };
            emit(json, &out, || println!("{p}"));
        }
        Command::Verify => {
            let report = verify_suite();
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                println!("{report}");
            }
            if !report.all_passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
