//! Command dispatch for the `starq` binary.
//!
//! [`run_command`] parses an argument vector, runs the subcommand and returns
//! the exit code with everything that would go to stdout and stderr, so the
//! golden tests can drive the CLI in-process.

use std::collections::BTreeSet;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value as Json};

use starq::gns::{Gns, PositiveFunctional};
use starq::oper::{commutant_probe, OperatorExpr};
use starq::star::{n_operator, star_exp, Direction, Product, StarAlgebra};
use starq::text::json::{commutant_json, envelope, observable_json, synth_json, values_json, vector_json};
use starq::text::{
    format_observable, format_operator, format_values, parse_diffop, parse_in, parse_observable, parse_rational,
    parse_series,
};
use starq::topo::alr_synthesize;
use starq::verify;
use starq::{Chart, ChartKind, Cq, Density, Error, Observable, Rational};

#[derive(Parser, Debug)]
#[command(name = "starq", version, about = "Exact truncated deformation quantization workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Star product: moyal, wick, std or weyl.
    #[arg(long)]
    product: Option<String>,
    /// Keep powers of lam up to and including this one.
    #[arg(long, default_value_t = 6)]
    trunc: i32,
    /// Degree bound for bases and probes.
    #[arg(long, default_value_t = 4)]
    deg: u32,
    /// Chart, e.g. `moyal,n=1,m=2` or `cotangent,n=1,density=gauss(1)`.
    #[arg(long)]
    chart: Option<String>,
    /// Positive functional: delta0, trace, kms or schrodinger.
    #[arg(long)]
    functional: Option<String>,
    /// Inverse temperature (a rational for kms, a lam-scalar for exp).
    #[arg(long)]
    beta: Option<String>,
    /// Hamiltonian.
    #[arg(long = "H")]
    hamiltonian: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Star product of two observables.
    Mul {
        #[command(flatten)]
        common: Common,
        f: String,
        g: String,
    },
    /// Star commutator `f*g - g*f`.
    Comm {
        #[command(flatten)]
        common: Common,
        f: String,
        g: String,
    },
    /// Star exponential `Exp(beta H)`.
    Exp {
        #[command(flatten)]
        common: Common,
    },
    /// N operator on a cotangent chart.
    NOp {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        inverse: bool,
        f: String,
    },
    /// Value of a positive functional.
    Eval {
        #[command(flatten)]
        common: Common,
        f: String,
    },
    /// Gel'fand ideal membership.
    IdealMember {
        #[command(flatten)]
        common: Common,
        f: String,
    },
    /// GNS vector of an observable.
    Gns {
        #[command(flatten)]
        common: Common,
        f: String,
    },
    /// Action of `pi(f)` on a GNS vector written on the vector chart.
    Repr {
        #[command(flatten)]
        common: Common,
        f: String,
        vector: String,
    },
    /// Commutant probe of a standard model.
    Commutant {
        #[command(flatten)]
        common: Common,
        /// fock, schrodinger or trace.
        #[arg(long)]
        model: String,
        /// Number of chart components.
        #[arg(long, default_value_t = 1)]
        components: usize,
        /// Allowed degree raise of commutant elements.
        #[arg(long, default_value_t = 0)]
        raise: u32,
    },
    /// Modular theory identities for a KMS functional.
    Tomita {
        #[command(flatten)]
        common: Common,
        /// Only `all` is available.
        #[arg(long, default_value = "all")]
        check: String,
    },
    /// Realize a differential operator by left and right multiplications.
    Synth {
        #[command(flatten)]
        common: Common,
        /// Operator in `dq1`, `dp1` symbols, e.g. `q1*dp1 + dq1^2`.
        #[arg(long)]
        target: String,
        /// Required lam-order of the residual.
        #[arg(long, default_value_t = 6)]
        order: i32,
    },
    /// Run a property suite: series, star, gns, oper, modular, topo, tomita or all.
    Verify {
        #[command(flatten)]
        common: Common,
        suite: String,
        /// Random samples per property.
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
}

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Domain(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

/// Tolerance for floating point comparisons; `STARQ_EPS` overrides it.
pub fn eps_from_env() -> f64 {
    std::env::var("STARQ_EPS").ok().and_then(|s| s.parse().ok()).unwrap_or(1e-9)
}

/// Parse `argv` (including the program name) and run it.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(cli.command) {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: String::new() },
        Err(Failure::Domain(e @ (Error::Syntax { .. } | Error::UnknownVariable(_)))) => {
            Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") }
        }
        Err(Failure::Domain(e)) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
        Err(Failure::Usage(m)) => Outcome { code: 2, stdout: String::new(), stderr: format!("usage error: {m}\n") },
    }
}

fn render(common: &Common, text: String, json: Json) -> String {
    if common.json {
        format!("{json}\n")
    } else {
        format!("{text}\n")
    }
}

fn default_chart(product: Product) -> Chart {
    match product {
        Product::Moyal => Chart::moyal(1),
        Product::Wick => Chart::wick(1),
        Product::Standard => Chart::cotangent(1, Density::Lebesgue),
        Product::Weyl => Chart::cotangent(1, Density::Gaussian(Rational::from_integer(1.into()))),
    }
}

/// The product a functional lives on, when `--product` is omitted.
fn functional_product(name: &str) -> Option<Product> {
    match name {
        "delta0" => Some(Product::Wick),
        "trace" | "kms" => Some(Product::Moyal),
        "schrodinger" => Some(Product::Weyl),
        _ => None,
    }
}

fn algebra(common: &Common) -> Res<StarAlgebra> {
    if common.trunc < 0 {
        return Err(Failure::Usage("--trunc must be nonnegative".into()));
    }
    let product = match (&common.product, &common.functional) {
        (Some(p), _) => p.parse::<Product>().map_err(|e| Failure::Usage(e.to_string()))?,
        (None, Some(f)) => functional_product(f).unwrap_or(Product::Moyal),
        (None, None) => match common.chart.as_deref().map(|c| c.split(',').next().unwrap_or_default()) {
            Some("wick") => Product::Wick,
            Some("cotangent") => Product::Weyl,
            _ => Product::Moyal,
        },
    };
    let chart = match &common.chart {
        Some(c) => c.parse::<Chart>().map_err(|e| Failure::Usage(e.to_string()))?,
        None => default_chart(product),
    };
    Ok(StarAlgebra::new(chart, product, common.trunc)?)
}

fn functional(common: &Common, alg: &StarAlgebra) -> Res<PositiveFunctional<Cq>> {
    let name = common.functional.as_deref().ok_or_else(|| Failure::Usage("--functional is required".into()))?;
    Ok(match name {
        "delta0" => PositiveFunctional::delta0(alg)?,
        "trace" => PositiveFunctional::trace(alg)?,
        "schrodinger" => PositiveFunctional::schrodinger(alg)?,
        "kms" => {
            let h = hamiltonian(common, alg)?;
            PositiveFunctional::kms(alg, &h, beta_rational(common)?)?
        }
        other => return Err(Failure::Usage(format!("unknown functional `{other}` (delta0|trace|kms|schrodinger)"))),
    })
}

fn hamiltonian(common: &Common, alg: &StarAlgebra) -> Res<Observable<Cq>> {
    let text = common.hamiltonian.as_deref().ok_or_else(|| Failure::Usage("--H is required".into()))?;
    Ok(parse_in(alg, text)?)
}

fn beta_rational(common: &Common) -> Res<Rational> {
    let text = common.beta.as_deref().ok_or_else(|| Failure::Usage("--beta is required".into()))?;
    Ok(parse_rational(text)?)
}

fn dispatch(cmd: Command) -> Res<(i32, String)> {
    match cmd {
        Command::Mul { common, f, g } => {
            let alg = algebra(&common)?;
            let r = alg.mul(&parse_in(&alg, &f)?, &parse_in(&alg, &g)?)?;
            Ok((0, render(&common, format_observable(&r), observable_json(&r))))
        }
        Command::Comm { common, f, g } => {
            let alg = algebra(&common)?;
            let r = alg.comm(&parse_in(&alg, &f)?, &parse_in(&alg, &g)?)?;
            Ok((0, render(&common, format_observable(&r), observable_json(&r))))
        }
        Command::Exp { common } => {
            let alg = algebra(&common)?;
            let h = hamiltonian(&common, &alg)?;
            let beta = parse_series(common.beta.as_deref().unwrap_or("1"), alg.trunc())?;
            let r = star_exp(&alg, &h, &beta)?;
            Ok((0, render(&common, format_observable(&r), observable_json(&r))))
        }
        Command::NOp { common, inverse, f } => {
            let mut common = common;
            if common.chart.is_none() {
                common.chart = Some("cotangent,n=1".into());
            }
            let chart: Chart = common.chart.as_deref().unwrap_or_default().parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            if !matches!(chart.kind, ChartKind::CotangentFlat(_)) {
                return Err(Failure::Domain(Error::UnsupportedChart(format!("N operator on {chart}"))));
            }
            let u = parse_observable(&f, &chart, common.trunc)?;
            let dir = if inverse { Direction::Inverse } else { Direction::Forward };
            let r = n_operator(&u, dir)?;
            Ok((0, render(&common, format_observable(&r), observable_json(&r))))
        }
        Command::Eval { common, f } => {
            let alg = algebra(&common)?;
            let omega = functional(&common, &alg)?;
            let v = omega.eval(&parse_in(&alg, &f)?)?;
            Ok((0, render(&common, format_values(&v), values_json(&v))))
        }
        Command::IdealMember { common, f } => {
            let alg = algebra(&common)?;
            let gns = Gns::new(&functional(&common, &alg)?)?.with_bound(common.deg);
            let r = gns.gelfand(&parse_in(&alg, &f)?, eps_from_env())?;
            let text = format!(
                "member: {}\nomega(conj(f)*f) = {}\nclosed form: {}\nconsistent: {}",
                r.member,
                format_values(&r.value),
                r.closed_form,
                r.consistent()
            );
            let json = envelope(
                "ideal-member",
                json!({
                    "member": r.member,
                    "value": format_values(&r.value),
                    "closed_form": r.closed_form,
                    "reduced_vanishes": r.reduced_vanishes,
                    "consistent": r.consistent(),
                }),
            );
            Ok((0, render(&common, text, json)))
        }
        Command::Gns { common, f } => {
            let alg = algebra(&common)?;
            let gns = Gns::new(&functional(&common, &alg)?)?.with_bound(common.deg);
            let u = gns.reduce(&parse_in(&alg, &f)?)?;
            let model = gns.kind().name();
            Ok((0, render(&common, format!("{model}: {}", format_observable(&u)), vector_json(model, &u))))
        }
        Command::Repr { common, f, vector } => {
            let alg = algebra(&common)?;
            let gns = Gns::new(&functional(&common, &alg)?)?.with_bound(common.deg);
            let u = parse_observable(&vector, gns.vector_chart(), alg.trunc())?;
            let r = gns.left(&parse_in(&alg, &f)?, &u)?;
            let model = gns.kind().name();
            Ok((0, render(&common, format!("{model}: {}", format_observable(&r)), vector_json(model, &r))))
        }
        Command::Commutant { common, model, components, raise } => commutant(&common, &model, components, raise),
        Command::Tomita { common, check } => {
            if check != "all" {
                return Err(Failure::Usage(format!("unknown check `{check}` (all)")));
            }
            run_verify(&common, "tomita", 10)
        }
        Command::Synth { common, target, order } => {
            let mut common = common;
            common.product = Some("moyal".into());
            let alg = algebra(&common)?;
            let d = parse_diffop(&target, alg.chart(), alg.trunc())?;
            let s = alr_synthesize(&d, order, &alg, common.deg.min(3))?;
            let witness = format_operator(&s.witness, alg.chart());
            let verified = s.verified_order.to_string();
            let text = format!("witness: {witness}\nverified order: {verified}");
            Ok((0, render(&common, text, synth_json(&witness, &verified, s.iterations))))
        }
        Command::Verify { common, suite, samples } => run_verify(&common, &suite, samples),
    }
}

fn commutant(common: &Common, model: &str, m: usize, raise: u32) -> Res<(i32, String)> {
    if m == 0 {
        return Err(Failure::Usage("--components must be at least 1".into()));
    }
    let t = common.trunc;
    let (gns, gens) = match model {
        "fock" => {
            let alg = StarAlgebra::new(Chart::wick(1).with_components(m), Product::Wick, t)?;
            let gns = Gns::new(&PositiveFunctional::delta0(&alg)?)?;
            (gns, vec![OperatorExpr::Left(alg.var("z1")?), OperatorExpr::Left(alg.var("zbar1")?)])
        }
        "schrodinger" => {
            let chart = default_chart(Product::Weyl).with_components(m);
            let alg = StarAlgebra::new(chart.clone(), Product::Weyl, t)?;
            let gns = Gns::new(&PositiveFunctional::schrodinger(&alg)?)?;
            let gens = vec![
                OperatorExpr::Left(alg.var("q1")?),
                OperatorExpr::Left(alg.var("p1")?),
                OperatorExpr::Left(Observable::indicator(&chart, t, &BTreeSet::from([0]))),
            ];
            (gns, gens)
        }
        "trace" => {
            let alg = StarAlgebra::new(Chart::moyal(1).with_components(m), Product::Moyal, t)?;
            let gns = Gns::new(&PositiveFunctional::trace(&alg)?)?;
            let gens = gns.vector_basis(common.deg.min(2)).into_iter().map(OperatorExpr::Left).collect();
            (gns, gens)
        }
        other => return Err(Failure::Usage(format!("unknown model `{other}` (fock|schrodinger|trace)"))),
    };
    let r = commutant_probe(&gens, &gns, common.deg, raise)?;
    let text = format!(
        "dimension: {}\nper order: {:?}\nflagged boundary rows: {}",
        r.dimension,
        r.per_order,
        r.flagged_boundary_columns.len()
    );
    Ok((0, render(common, text, commutant_json(&r))))
}

fn run_verify(common: &Common, suite: &str, samples: usize) -> Res<(i32, String)> {
    let known = verify::SUITES.contains(&suite) || suite == "all" || suite == "tomita";
    if !known {
        return Err(Failure::Usage(format!("unknown suite `{suite}` (series|star|gns|oper|modular|topo|tomita|all)")));
    }
    let beta = common.beta.as_deref().map(parse_rational).transpose()?;
    let cfg = verify::Config {
        trunc: common.trunc,
        deg: common.deg,
        seed: common.seed,
        eps: eps_from_env(),
        samples,
        hamiltonian: common.hamiltonian.clone(),
        beta,
    };
    let checks = verify::run(suite, &cfg)?;
    let passed = checks.iter().all(|c| c.status.passed());
    let text: Vec<String> = checks
        .iter()
        .map(|c| {
            let mut line = format!("{:<8} {:<9} {}", c.suite, c.status, c.property);
            if !c.detail.is_empty() {
                line.push_str(&format!(" ({})", c.detail));
            }
            line
        })
        .collect();
    let json = envelope(
        "verify",
        json!({
            "suite": suite,
            "passed": passed,
            "checks": checks.iter().map(|c| json!({
                "suite": c.suite,
                "property": c.property,
                "status": c.status.name(),
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        }),
    );
    let code = if passed { 0 } else { 1 };
    Ok((code, render(common, text.join("\n"), json)))
}
