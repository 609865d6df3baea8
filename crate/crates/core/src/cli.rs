//! Command-line front end. [`execute`] does all the work and returns the
//! exit status with the captured output, so the binary and the tests share
//! one code path.

use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use crate::density::{self, IntegerSet};
use crate::error::{Error, Result};
use crate::fibcore::{self, parse_rational, parse_real, rational_string, rational_to_decimal};
use crate::fibcore::FibConvention;
use crate::identities::{self, IdentityId, IdentityReport};
use crate::randomfib;
use crate::realbase;
use crate::words::{self, Morphism, Word};
use crate::zeckendorf::{self, ZeckendorfRep};

pub const SEED_ENV: &str = "FIBLAB_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Classic,
    Shifted,
}

impl From<ConventionArg> for FibConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Classic => FibConvention::Classic,
            ConventionArg::Shifted => FibConvention::Shifted,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "fiblab", version, about = "Exact Fibonacci numeration, growth and identity checks")]
struct Cli {
    /// Output format; csv is only available for density profiles.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Decimal digits shown for exact values. Never affects computation.
    #[arg(long, global = true, default_value_t = 12)]
    precision: usize,
    /// Master seed for every random choice.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    /// Indexing of the Fibonacci sequence where a command depends on it.
    #[arg(long, global = true, value_enum)]
    convention: Option<ConventionArg>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Zeckendorf representations of naturals.
    #[command(subcommand)]
    Zeckendorf(ZeckendorfCmd),
    /// Digit expansions of reals in base θ or with Fibonacci denominators.
    Realrep(RealrepArgs),
    /// Random Fibonacci sequences.
    #[command(subcommand)]
    Randomfib(RandomfibCmd),
    /// Counting functions and residue densities.
    #[command(subcommand)]
    Density(DensityCmd),
    /// Morphic and balanced binary words.
    #[command(subcommand)]
    Words(WordsCmd),
    /// Exact checks of Fibonacci identities.
    #[command(subcommand)]
    Identities(IdentitiesCmd),
}

#[derive(Subcommand, Debug)]
enum ZeckendorfCmd {
    /// Natural number to sum of non-adjacent Fibonacci numbers (F_0 = F_1 = 1).
    Encode {
        #[arg(long)]
        value: String,
    },
    /// Comma-separated indices to the natural they represent.
    Decode {
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<usize>,
    },
}

#[derive(Args, Debug)]
struct RealrepArgs {
    /// A rational > 1, `phi`, an expression such as `1+sqrt5`, or `fib`.
    #[arg(long)]
    base: String,
    #[arg(long)]
    value: String,
    #[arg(long, default_value_t = 30)]
    digits: usize,
}

#[derive(Subcommand, Debug)]
enum RandomfibCmd {
    /// Monte Carlo estimate of lim |t_n|^(1/n).
    Mc {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: u64,
    },
    /// Exact E(|t_n|) by dynamic programming.
    Exact {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = randomfib::DEFAULT_EXPECTATION_CAP)]
        cap: u32,
    },
    /// Root of x^3 - 2x^2 - 1 by exact bisection.
    Root {
        #[arg(long, default_value = "1/1000000000000")]
        tol: String,
    },
}

#[derive(Subcommand, Debug)]
enum DensityCmd {
    /// Counts #A(x) and ratios #A(x)/x.
    Profile {
        /// `fib`, `evil`, or `file:<path>` with one natural per line.
        #[arg(long)]
        set: String,
        #[arg(long, value_delimiter = ',', required = true)]
        points: Vec<u64>,
    },
    /// Fraction of residues mod p^lambda hit by the Fibonacci sequence.
    Fibmod {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        lambda: u32,
    },
}

#[derive(Subcommand, Debug)]
enum WordsCmd {
    /// Prefix of a morphic or k-Fibonacci word.
    Generate {
        /// `fib`, `thue-morse`, or `kfib:<k>`.
        #[arg(long)]
        preset: String,
        #[arg(long)]
        length: usize,
    },
    /// Balance test with a witness pair when it fails.
    Balanced {
        #[arg(long)]
        word: String,
    },
    /// Number of balanced binary words of length n.
    Count {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value = "formula")]
        method: CountMethod,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CountMethod {
    Formula,
    Brute,
}

#[derive(Subcommand, Debug)]
enum IdentitiesCmd {
    /// One identity at one parameter point.
    Check {
        #[arg(long)]
        id: String,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        a: Option<u64>,
        #[arg(long)]
        b: Option<u64>,
        #[arg(long)]
        terms: Option<u64>,
    },
    /// Every identity over the standard parameter grid, one report per line.
    Sweep,
}

/// Exit status plus everything destined for stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: String) -> Self {
        let usage = Cli::command().render_usage().to_string();
        Self { code: 2, stdout: String::new(), stderr: format!("error: {message}\n\n{usage}\n") }
    }
}

/// Runs one invocation. `args` includes the program name, as in `std::env::args`.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let mut text = e.render().to_string();
            if code == 2 && !text.contains("Usage:") {
                text = format!("{}\n{}\n", text.trim_end(), Cli::command().render_usage());
            }
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let run = || match dispatch(&cli) {
        Ok(Emitted { lines, refuted }) => {
            let mut stdout = lines.join("\n");
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            Outcome { code: if refuted { 3 } else { 0 }, stdout, stderr: String::new() }
        }
        Err(e) => Outcome::usage(e.to_string()),
    };
    match cli.threads {
        Some(0) => Outcome::usage("--threads must be at least 1".into()),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(run),
            Err(e) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
        },
        None => run(),
    }
}

struct Emitted {
    lines: Vec<String>,
    refuted: bool,
}

impl Emitted {
    fn one(line: String) -> Self {
        Self { lines: vec![line], refuted: false }
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    subcommand: &'static str,
}

impl Ctx<'_> {
    fn digits(&self) -> usize {
        self.cli.precision
    }

    fn convention(&self, default: FibConvention) -> FibConvention {
        self.cli.convention.map(Into::into).unwrap_or(default)
    }

    fn envelope(&self, params: Value, convention: Option<FibConvention>, result: Value) -> String {
        let report = json!({
            "tool": "fiblab",
            "version": env!("CARGO_PKG_VERSION"),
            "subcommand": self.subcommand,
            "params": params,
            "convention": convention.map(FibConvention::name),
            "seed": self.cli.seed,
            "precision": self.cli.precision,
            "result": result,
        });
        serde_json::to_string(&report).expect("reports serialize")
    }

    /// JSON or plain; csv is rejected here.
    fn emit(
        &self,
        params: Value,
        convention: Option<FibConvention>,
        result: Value,
        plain: impl FnOnce() -> String,
    ) -> Result<Emitted> {
        match self.cli.format {
            Format::Json => Ok(Emitted::one(self.envelope(params, convention, result))),
            Format::Plain => Ok(Emitted::one(plain())),
            Format::Csv => Err(csv_unavailable(self.subcommand)),
        }
    }
}

fn csv_unavailable(subcommand: &str) -> Error {
    Error::Parse(format!("csv output is only available for `density profile`, not `{subcommand}`"))
}

fn dispatch(cli: &Cli) -> Result<Emitted> {
    match &cli.command {
        Command::Zeckendorf(cmd) => zeckendorf_cmd(cli, cmd),
        Command::Realrep(args) => realrep_cmd(cli, args),
        Command::Randomfib(cmd) => randomfib_cmd(cli, cmd),
        Command::Density(cmd) => density_cmd(cli, cmd),
        Command::Words(cmd) => words_cmd(cli, cmd),
        Command::Identities(cmd) => identities_cmd(cli, cmd),
    }
}

fn rep_json(rep: &ZeckendorfRep) -> Value {
    json!({
        "value": rep.value().to_string(),
        "indices": rep.indices(),
        "coefficients": rep.coefficients(),
    })
}

fn zeckendorf_cmd(cli: &Cli, cmd: &ZeckendorfCmd) -> Result<Emitted> {
    let shifted = Some(FibConvention::Shifted);
    match cmd {
        ZeckendorfCmd::Encode { value } => {
            let ctx = Ctx { cli, subcommand: "zeckendorf encode" };
            let a: BigUint = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("not a natural number: {value:?}")))?;
            let rep = zeckendorf::encode(&a)?;
            let plain = rep.indices().iter().map(|i| format!("F{i}")).collect::<Vec<_>>().join(" + ");
            ctx.emit(json!({ "value": value }), shifted, rep_json(&rep), || plain)
        }
        ZeckendorfCmd::Decode { indices } => {
            let ctx = Ctx { cli, subcommand: "zeckendorf decode" };
            let rep = ZeckendorfRep::from_indices(indices)?;
            let value = zeckendorf::decode(&rep)?;
            ctx.emit(json!({ "indices": indices }), shifted, rep_json(&rep), || value.to_string())
        }
    }
}

fn realrep_cmd(cli: &Cli, args: &RealrepArgs) -> Result<Emitted> {
    let ctx = Ctx { cli, subcommand: "realrep" };
    let digits = ctx.digits();
    let value = parse_real(&args.value)?;
    let params = json!({ "base": args.base, "value": args.value, "digits": args.digits });
    if args.base.trim() == "fib" {
        let rep = realbase::fib_fraction_digits(&value, args.digits)?;
        let partial = realbase::fib_fraction_partial(&rep, args.digits)?;
        let violation = rep.first_bound_violation();
        let result = json!({
            "system": "fibonacci-fraction",
            "value": value.to_string(),
            "integer_part": rep.integer_part.to_string(),
            "digits": rep.digits,
            "partial_sum": partial.to_string(),
            "partial_sum_decimal": partial.to_decimal(digits),
            "prefix_bounds_hold": violation.is_none(),
            "first_bound_violation": violation,
        });
        let plain = || {
            let ds: String = rep.digits.iter().map(|d| char::from(b'0' + d)).collect();
            format!("{}.{ds}", rep.integer_part)
        };
        return ctx.emit(params, Some(FibConvention::Shifted), result, plain);
    }
    let base = parse_real(&args.base)?;
    let exp = realbase::theta_digits(&value, &base, args.digits)?;
    let partial = realbase::theta_partial_sum(&exp, args.digits)?;
    let violation = exp.first_bound_violation();
    let digit_strings: Vec<String> = exp.digits.iter().map(|d| d.to_string()).collect();
    let result = json!({
        "system": "theta",
        "base": base.to_string(),
        "value": value.to_string(),
        "digits": digit_strings,
        "partial_sum": partial.to_string(),
        "partial_sum_decimal": partial.to_decimal(digits),
        "digits_in_range": exp.digits_in_range(),
        "prefix_bounds_hold": violation.is_none(),
        "first_bound_violation": violation,
    });
    let plain = || format!("0.{}", digit_strings.join(","));
    ctx.emit(params, None, result, plain)
}

fn randomfib_cmd(cli: &Cli, cmd: &RandomfibCmd) -> Result<Emitted> {
    let digits = cli.precision;
    match cmd {
        RandomfibCmd::Mc { n, trials } => {
            let ctx = Ctx { cli, subcommand: "randomfib mc" };
            let est = randomfib::estimate_viswanath(*n, *trials, cli.seed)?;
            let mut result = serde_json::to_value(&est).expect("estimate serializes");
            result["estimate_decimal"] = json!(format!("{:.*}", digits, est.estimate));
            result["rng"] = json!("chacha8, walk i seeded by splitmix64(seed + i*0x9E3779B97F4A7C15)");
            let plain = || format!("{:.*} ± {:.*}", digits, est.estimate, digits, est.standard_error * est.estimate);
            ctx.emit(json!({ "n": n, "trials": trials, "seed": cli.seed }), None, result, plain)
        }
        RandomfibCmd::Exact { n, cap } => {
            let ctx = Ctx { cli, subcommand: "randomfib exact" };
            let table = randomfib::expectation_table(*n, *cap)?;
            let e = table.expected_abs();
            let ratio = if *n > 3 {
                let prev = randomfib::expectation_table(n - 1, *cap)?.expected_abs();
                Some(&e / &prev)
            } else {
                None
            };
            let result = json!({
                "n": n,
                "expectation": rational_string(&e),
                "expectation_decimal": rational_to_decimal(&e, digits),
                "states": table.state_count(),
                "denominator": table.denominator().to_string(),
                "ratio_to_previous": ratio.as_ref().map(rational_string),
                "ratio_to_previous_decimal": ratio.as_ref().map(|r| rational_to_decimal(r, digits)),
            });
            let plain = || rational_string(&e);
            ctx.emit(json!({ "n": n, "cap": cap }), None, result, plain)
        }
        RandomfibCmd::Root { tol } => {
            let ctx = Ctx { cli, subcommand: "randomfib root" };
            let tolerance = parse_rational(tol)?;
            let root = randomfib::rittaud_root(&tolerance)?;
            let r = root.root();
            let g = root.growth_rate();
            let result = json!({
                "polynomial": "x^3 - 2x^2 - 1",
                "lo": rational_to_decimal(&root.lo, digits),
                "hi": rational_to_decimal(&root.hi, digits),
                "iterations": root.iterations,
                "root_decimal": rational_to_decimal(&r, digits),
                "growth_rate_decimal": rational_to_decimal(&g, digits),
                "growth_rate_note": "growth rate of E(|t_n|)^(1/n) is root - 1",
            });
            let plain = || format!("{} {}", rational_to_decimal(&r, digits), rational_to_decimal(&g, digits));
            ctx.emit(json!({ "tol": tol }), None, result, plain)
        }
    }
}

fn parse_set(name: &str) -> Result<IntegerSet> {
    match name {
        "fib" => Ok(IntegerSet::FibonacciValues),
        "evil" => Ok(IntegerSet::GelfondN0),
        s => match s.strip_prefix("file:") {
            Some(path) => IntegerSet::from_file(&PathBuf::from(path)),
            None => Err(Error::Parse(format!("unknown set {s:?}; expected fib, evil or file:<path>"))),
        },
    }
}

fn density_cmd(cli: &Cli, cmd: &DensityCmd) -> Result<Emitted> {
    let digits = cli.precision;
    match cmd {
        DensityCmd::Profile { set, points } => {
            let ctx = Ctx { cli, subcommand: "density profile" };
            let integer_set = parse_set(set)?;
            let profile = density::density_profile(&integer_set, points)?;
            let rationals = |v: &[fibcore::Rational]| v.iter().map(rational_string).collect::<Vec<_>>();
            let result = json!({
                "set": profile.set,
                "points": profile.points,
                "counts": profile.counts,
                "ratios": rationals(&profile.ratios),
                "ratios_decimal": profile.ratios.iter().map(|r| rational_to_decimal(r, digits)).collect::<Vec<_>>(),
                "tail_min": rationals(&profile.tail_min),
                "tail_max": rationals(&profile.tail_max),
                "log_bound": profile.log_bound,
            });
            let params = json!({ "set": set, "points": points });
            match cli.format {
                Format::Csv => Ok(Emitted::one(profile.to_csv(digits))),
                _ => ctx.emit(params, None, result, || {
                    profile
                        .points
                        .iter()
                        .zip(&profile.counts)
                        .map(|(x, c)| format!("{x} {c}"))
                        .collect::<Vec<_>>()
                        .join("\n")
                }),
            }
        }
        DensityCmd::Fibmod { p, lambda } => {
            let ctx = Ctx { cli, subcommand: "density fibmod" };
            let d = density::fib_residue_density(*p, *lambda)?;
            let result = json!({
                "p": d.p,
                "lambda": d.lambda,
                "modulus": d.modulus,
                "pisano_period": d.pisano_period,
                "count": d.count,
                "density": rational_string(&d.density),
                "density_decimal": rational_to_decimal(&d.density, digits),
            });
            let plain = || rational_string(&d.density);
            ctx.emit(json!({ "p": p, "lambda": lambda }), None, result, plain)
        }
    }
}

fn generate_word(preset: &str, length: usize) -> Result<Word> {
    match preset {
        "fib" => words::morphic_prefix(&Morphism::fibonacci(), 0, length),
        "thue-morse" => words::morphic_prefix(&Morphism::thue_morse(), 0, length),
        p => {
            let k: usize = p
                .strip_prefix("kfib:")
                .and_then(|k| k.parse().ok())
                .ok_or_else(|| Error::Parse(format!("unknown preset {p:?}; expected fib, thue-morse or kfib:<k>")))?;
            // f_{k,n} is a prefix of f_{k,n+1} from n = 2 on.
            let mut n = 2;
            let mut word = words::kfib_word(k, n)?;
            while word.len() < length {
                n += 1;
                word = words::kfib_word(k, n)?;
            }
            Ok(word.factor(0, length))
        }
    }
}

fn words_cmd(cli: &Cli, cmd: &WordsCmd) -> Result<Emitted> {
    match cmd {
        WordsCmd::Generate { preset, length } => {
            let ctx = Ctx { cli, subcommand: "words generate" };
            let word = generate_word(preset, *length)?.to_string();
            let result = json!({ "word": word, "length": length });
            ctx.emit(json!({ "preset": preset, "length": length }), None, result, || word.clone())
        }
        WordsCmd::Balanced { word } => {
            let ctx = Ctx { cli, subcommand: "words balanced" };
            let report = words::is_balanced(&Word::parse_binary(word)?)?;
            let witness = report.witness.as_ref().map(|(u, v)| json!([u.to_string(), v.to_string()]));
            let result = json!({ "word": word, "balanced": report.balanced, "witness": witness });
            let plain = || match &report.witness {
                None => "balanced".to_string(),
                Some((u, v)) => format!("unbalanced {u} {v}"),
            };
            ctx.emit(json!({ "word": word }), None, result, plain)
        }
        WordsCmd::Count { n, method } => {
            let ctx = Ctx { cli, subcommand: "words count" };
            let (count, name) = match method {
                CountMethod::Formula => (words::balanced_formula(*n)?, "formula"),
                CountMethod::Brute => {
                    let n32 = u32::try_from(*n).unwrap_or(u32::MAX);
                    (u128::from(words::count_balanced_bruteforce(n32)?), "brute")
                }
            };
            let result = json!({ "n": n, "count": count.to_string(), "method": name });
            ctx.emit(json!({ "n": n, "method": name }), None, result, || count.to_string())
        }
    }
}

fn required(v: Option<u64>, flag: &str, id: IdentityId) -> Result<u64> {
    v.ok_or_else(|| Error::Parse(format!("identity {} needs --{flag}", id.name())))
}

fn report_line(ctx: &Ctx, params: Value, report: &IdentityReport) -> Result<String> {
    match ctx.cli.format {
        Format::Json => Ok(ctx.envelope(params, Some(report.convention), report.to_json(ctx.digits()))),
        Format::Plain => {
            let ps: Vec<String> = report.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            Ok(format!("{} {} {:?}", report.id.name(), ps.join(" "), report.verdict))
        }
        Format::Csv => Err(csv_unavailable(ctx.subcommand)),
    }
}

fn identities_cmd(cli: &Cli, cmd: &IdentitiesCmd) -> Result<Emitted> {
    match cmd {
        IdentitiesCmd::Check { id, k, n, a, b, terms } => {
            let ctx = Ctx { cli, subcommand: "identities check" };
            let which = IdentityId::parse(id).ok_or_else(|| {
                Error::Parse(format!("unknown identity {id:?}; expected reciprocal, symmetry, sqrt5cf or dflemma"))
            })?;
            let report = match which {
                IdentityId::Reciprocal => {
                    identities::check_reciprocal_sum(required(*k, "k", which)?, terms.unwrap_or(50))
                }
                IdentityId::Symmetry => {
                    identities::check_symmetry(required(*a, "a", which)?, required(*b, "b", which)?)
                }
                IdentityId::Sqrt5Cf => identities::check_sqrt5_cf(terms.unwrap_or(10)),
                IdentityId::DfLemma => identities::check_df_lemma(
                    required(*k, "k", which)?,
                    required(*n, "n", which)?,
                    ctx.convention(FibConvention::Classic),
                ),
            };
            let params = json!({ "id": id, "k": k, "n": n, "a": a, "b": b, "terms": terms });
            let line = report_line(&ctx, params, &report)?;
            Ok(Emitted { lines: vec![line], refuted: report.is_refuted() })
        }
        IdentitiesCmd::Sweep => {
            let ctx = Ctx { cli, subcommand: "identities sweep" };
            let reports = identities::sweep();
            let mut lines = Vec::with_capacity(reports.len());
            for r in &reports {
                let params: Map<String, Value> =
                    r.params.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
                let mut params = Value::Object(params);
                params["id"] = json!(r.id.name());
                lines.push(report_line(&ctx, params, r)?);
            }
            Ok(Emitted { lines, refuted: reports.iter().any(IdentityReport::is_refuted) })
        }
    }
}

