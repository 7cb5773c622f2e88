mod envelope;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use num_traits::Signed;

use lagmark::boxdim::{self, Feasibility, Mode, Threshold};
use lagmark::cantor::{self, StabOutcome, WordAlphabet};
use lagmark::cf::{self, CfExpansion};
use lagmark::lattice::{self, Lattice2};
use lagmark::markov;
use lagmark::numeric::rational::{self, format_rational};
use lagmark::spectrum::{self, Attained, BiSequence};
use lagmark::verify::{self, VerifyConfig};
use lagmark::{Error, ExactRational, Quad};

use envelope::{Envelope, Format, Reported, Table};

#[derive(Parser, Debug)]
#[command(name = "lagmark", version, about = "Continued fractions, Lagrange and Markov spectra, Gauss-Cantor sets")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Accept decimal inputs, read as an enclosure of this half-width around the literal.
    #[arg(long, global = true, value_name = "WIDTH")]
    as_enclosure: Option<String>,
    /// Seed for randomized computations.
    #[arg(long, global = true, default_value_t = VerifyConfig::default().seed)]
    seed: u64,
    /// Node budget for searches (default: each module's own cap).
    #[arg(long, global = true)]
    budget: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Continued fractions.
    #[command(subcommand)]
    Cf(CfCmd),
    /// Markov triples and Markov numbers.
    #[command(subcommand)]
    Markov(MarkovCmd),
    /// Lagrange and Markov values of bi-infinite sequences.
    #[command(subcommand)]
    Spectrum(SpectrumCmd),
    /// Gauss-Cantor sets.
    #[command(subcommand)]
    Cantor(CantorCmd),
    /// Unstable scales and box-counting estimates.
    #[command(subcommand)]
    Boxdim(BoxdimCmd),
    /// Lattices in the plane.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Run acceptance checks and print a pass/fail table.
    Verify {
        /// golden, hall, properties, boxdim, lattice, markov or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Cases per randomized property suite.
        #[arg(long, default_value_t = VerifyConfig::default().cases)]
        cases: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CfCmd {
    /// Convergents p_k/q_k for k = 0..=n.
    Convergents {
        /// `[a0;a1,...]`, `label:[a0;a1,...]` (a prefix), `[a0;pre]~(period)` or a surd.
        #[arg(long)]
        x: String,
        #[arg(long)]
        n: usize,
    },
    /// Continued fraction expansion of a rational or quadratic surd.
    Expand {
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 10_000)]
        max_terms: usize,
    },
    /// Best approximations of the second kind with denominator up to `bound`.
    Best {
        #[arg(long)]
        x: String,
        #[arg(long)]
        bound: BigInt,
    },
    /// Index among n-1, n, n+1 with |x - p/q| < 1/(sqrt5 q^2).
    Hurwitz {
        #[arg(long)]
        x: String,
        #[arg(long)]
        n: usize,
    },
    /// Monte Carlo mean of q_n^(1/n) for Gauss-distributed x.
    Levy {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
enum MarkovCmd {
    /// Normalized Markov triples with maximum up to `bound`.
    Tree {
        #[arg(long)]
        bound: BigUint,
    },
    /// Markov spectrum points sqrt(9m^2 - 4)/m for Markov numbers m up to `bound`.
    Points {
        #[arg(long)]
        bound: BigUint,
    },
    /// Number of Markov numbers up to `x`.
    Count {
        #[arg(long)]
        x: BigUint,
    },
    /// Least-squares fit of M(x) = c (log 3x)^2.
    Fit {
        #[arg(long, default_value = "1000000000000000")]
        xmax: BigUint,
    },
}

#[derive(Subcommand, Debug)]
enum SpectrumCmd {
    /// m(theta) = sup of the heights along a sequence.
    M {
        /// Eventually periodic sequence such as `(2)* 121122212 (1122212)*`.
        #[arg(long)]
        seq: String,
        #[arg(long, default_value = "1e-10")]
        tol: String,
    },
    /// l(theta) = limsup of the heights; with --alpha, l of a surd.
    Ell {
        #[arg(long, conflicts_with = "alpha", required_unless_present = "alpha")]
        seq: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value = "1e-10")]
        tol: String,
    },
    /// sup of m over the shift generated by an alphabet of words.
    Sup {
        /// Comma-separated words with dot-separated letters, e.g. `1,2` or `2.1,1.2.2`.
        #[arg(long)]
        alphabet: String,
        #[arg(long, default_value = "1e-8")]
        tol: String,
    },
    /// Sequence with Lagrange value `ell` for ell >= 6.
    Hall {
        #[arg(long)]
        ell: String,
        #[arg(long, default_value_t = 25)]
        depth: usize,
    },
    /// Freiman's constant.
    Freiman,
}

#[derive(Subcommand, Debug)]
enum CantorCmd {
    /// Rigorous bracket for the Hausdorff dimension of K(B).
    Dim {
        #[arg(long, default_value = "1,2")]
        alphabet: String,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Locate x in K(B) + K(B').
    Stab {
        #[arg(long)]
        x: String,
        #[arg(long, default_value = "1,2,3,4")]
        alphabet: String,
        /// Second alphabet (default: the first).
        #[arg(long)]
        alphabet2: Option<String>,
        #[arg(long, default_value = "1e-9")]
        tol: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Upper,
    Lower,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Upper => Mode::Upper,
            ModeArg::Lower => Mode::Lower,
        }
    }
}

#[derive(Subcommand, Debug)]
enum BoxdimCmd {
    /// Minimal words of unstable scale r whose cylinders meet K_t+.
    Count {
        #[arg(long)]
        t: String,
        #[arg(long)]
        r: u32,
        /// Count every scale from r to rmax in one pass.
        #[arg(long)]
        rmax: Option<u32>,
    },
    /// Box-counting estimates for K_t+.
    Dim {
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = 16)]
        rmax: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Upper)]
        mode: ModeArg,
    },
    /// Estimate of d(t) = HD of the Lagrange spectrum below t.
    D {
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = 16)]
        rmax: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Upper)]
        mode: ModeArg,
    },
    /// Certified lower bound for d(3 + 2^-m).
    Bm {
        #[arg(long)]
        m: u32,
    },
    /// Feasibility of a word at threshold t.
    Feasible {
        /// Letters separated by dots, e.g. `1.2.2`.
        #[arg(long)]
        word: String,
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = boxdim::YES_DEPTH)]
        depth: usize,
    },
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    /// l(alpha) as limsup 1/Area(v) over holonomy vectors of u_{-alpha}(Z^2).
    Ell {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 100_000)]
        qmax: i64,
    },
    /// Reduced basis and systole of u_{-alpha}(Z^2).
    Reduce {
        #[arg(long)]
        alpha: String,
    },
}

enum CliError {
    Usage(String),
    Domain(Error),
    Failed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => CliError::Usage(e.to_string()),
            e => CliError::Domain(e),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

struct Ctx {
    cfg: RunConfig,
    enclosure: Option<ExactRational>,
}

fn is_decimal(s: &str) -> bool {
    s.contains('.') || (!s.contains("sqrt") && s.contains(['e', 'E']))
}

impl Ctx {
    fn new(cfg: RunConfig) -> CliResult<Self> {
        let enclosure = match &cfg.as_enclosure {
            Some(w) => {
                let w = rational::parse_rational(w)?;
                if !w.is_positive() {
                    return Err(CliError::Usage("--as-enclosure width must be positive".into()));
                }
                Some(w)
            }
            None => None,
        };
        Ok(Ctx { cfg, enclosure })
    }

    /// A rational or surd input. Decimals need `--as-enclosure`.
    fn quad(&self, env: &mut Envelope, name: &str, s: &str) -> CliResult<Quad> {
        let x: Quad = s.parse()?;
        if is_decimal(s) {
            let Some(w) = &self.enclosure else {
                return Err(CliError::Usage(format!(
                    "{name} = {s:?} is a decimal; pass --as-enclosure WIDTH to accept it as an enclosure"
                )));
            };
            env.input(name, format!("{s} ± {}", format_rational(w)));
            env.note(format!(
                "{name} is an enclosure of half-width {}; results are computed at the literal",
                format_rational(w)
            ));
        } else {
            env.input(name, s);
        }
        Ok(x)
    }

    fn rational(&self, env: &mut Envelope, name: &str, s: &str) -> CliResult<ExactRational> {
        let x = self.quad(env, name, s)?;
        x.as_rational()
            .cloned()
            .ok_or_else(|| CliError::Usage(format!("{name} must be rational, got {s:?}")))
    }

    fn budget(&self, default: usize) -> usize {
        self.cfg.budget.unwrap_or(default)
    }
}

fn tolerance(env: &mut Envelope, s: &str) -> CliResult<ExactRational> {
    let tol = rational::parse_rational(s)?;
    if !tol.is_positive() {
        return Err(CliError::Usage("tolerance must be positive".into()));
    }
    env.input("tol", s);
    Ok(tol)
}

fn alphabet(env: &mut Envelope, name: &str, s: &str) -> CliResult<WordAlphabet> {
    let b: WordAlphabet = s.parse()?;
    env.input(name, &b);
    Ok(b)
}

fn word(s: &str) -> CliResult<Vec<u64>> {
    s.split('.')
        .map(|a| a.trim().parse::<u64>().ok().filter(|&a| a >= 1))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| CliError::Usage(format!("invalid word {s:?}")))
}

/// A continued fraction string, or a rational or surd to expand exactly.
fn expansion(ctx: &Ctx, env: &mut Envelope, s: &str, terms: usize) -> CliResult<CfExpansion> {
    if s.contains('[') {
        env.input("x", s);
        Ok(s.parse()?)
    } else {
        let x = ctx.quad(env, "x", s)?;
        Ok(cf::cf_expand(&x, terms)?)
    }
}

fn threshold(ctx: &Ctx, env: &mut Envelope, s: &str) -> CliResult<Threshold> {
    let t = ctx.quad(env, "t", s)?;
    Ok(Threshold::new(&t)?)
}

fn attained(a: &Attained) -> String {
    match a {
        Attained::Position(n) => format!("position {n}"),
        Attained::LeftTail { phase } => format!("left tail, phase {phase}"),
        Attained::RightTail { phase } => format!("right tail, phase {phase}"),
    }
}

fn run_cf(ctx: &Ctx, cmd: &CfCmd) -> CliResult<Envelope> {
    Ok(match cmd {
        CfCmd::Convergents { x, n } => {
            let mut env = Envelope::new("cf convergents");
            let e = expansion(ctx, &mut env, x, n + 2)?;
            env.input("n", n);
            let mut t = Table::new(&["k", "a_k", "p_k", "q_k", "determinant"]);
            let mut last = None;
            for k in 0..=*n {
                let cp = e.convergent(k as i64)?;
                let det = cf::determinant_check(&cp)?;
                let a = e.quotient(k).unwrap_or_default();
                t.push(vec![k.to_string(), a.to_string(), cp.p.to_string(), cp.q.to_string(), det.to_string()]);
                last = Some(cp);
            }
            if let Some(cp) = last {
                env.value(Reported::exact_rational(&format!("p_{n}/q_{n}"), &cp.value()));
            }
            env.table = Some(t);
            env
        }
        CfCmd::Expand { x, max_terms } => {
            let mut env = Envelope::new("cf expand");
            let q = ctx.quad(&mut env, "x", x)?;
            let e = cf::cf_expand(&q, *max_terms)?;
            env.value(Reported::exact_text("expansion", &e));
            env
        }
        CfCmd::Best { x, bound } => {
            let mut env = Envelope::new("cf best");
            let e = expansion(ctx, &mut env, x, 10_000)?;
            env.input("bound", bound);
            let best = cf::best_approximations(&e, bound)?;
            let mut t = Table::new(&["p", "q"]);
            for b in &best {
                t.push(vec![b.numer().to_string(), b.denom().to_string()]);
            }
            if let Some(b) = best.last() {
                env.value(Reported::exact_rational("last", b));
            }
            env.table = Some(t);
            env
        }
        CfCmd::Hurwitz { x, n } => {
            let mut env = Envelope::new("cf hurwitz");
            let e = expansion(ctx, &mut env, x, n + 3)?;
            env.input("n", n);
            let k = cf::hurwitz_witness(&e, *n)?;
            let cp = e.convergent(k as i64)?;
            env.value(Reported::exact_int("k", k));
            env.value(Reported::exact_rational("p_k/q_k", &cp.value()));
            env
        }
        CfCmd::Levy { n, samples } => {
            let mut env = Envelope::new("cf levy");
            env.input("n", n).input("samples", samples).input("seed", ctx.cfg.seed);
            let mean = cf::levy_mean(*n, *samples, ctx.cfg.seed);
            env.value(Reported::empirical("mean q_n^(1/n)", mean));
            env.value(Reported::empirical("Levy constant", cf::LEVY_CONSTANT));
            env
        }
    })
}

fn run_markov(cmd: &MarkovCmd) -> CliResult<Envelope> {
    Ok(match cmd {
        MarkovCmd::Tree { bound } => {
            let mut env = Envelope::new("markov tree");
            env.input("bound", bound);
            let triples = markov::enumerate_tree(bound);
            let mut t = Table::new(&["x", "y", "z"]);
            for tr in &triples {
                t.push(tr.coords().iter().map(|c| c.to_string()).collect());
            }
            env.value(Reported::exact_int("triples", triples.len()));
            env.table = Some(t);
            env
        }
        MarkovCmd::Points { bound } => {
            let mut env = Envelope::new("markov points");
            env.input("bound", bound);
            let mut t = Table::new(&["m", "value", "approx"]);
            for p in markov::spectrum_points(bound) {
                let v = p.value();
                t.push(vec![p.m.to_string(), v.to_string(), format!("{:.15}", v.to_f64())]);
            }
            env.table = Some(t);
            env
        }
        MarkovCmd::Count { x } => {
            let mut env = Envelope::new("markov count");
            env.input("x", x);
            let c = markov::count_markov(x);
            env.value(Reported::exact_int("distinct", c.distinct));
            env.value(Reported::exact_int("with_multiplicity", c.with_multiplicity));
            env
        }
        MarkovCmd::Fit { xmax } => {
            let mut env = Envelope::new("markov fit");
            env.input("xmax", xmax);
            let fit = markov::fit_markov_constant(xmax);
            env.value(Reported::empirical("c", fit.c));
            env.value(Reported::empirical("c_plain_log", fit.c_plain_log));
            env.value(Reported::empirical("c_with_multiplicity", fit.c_with_multiplicity));
            env.value(Reported::empirical("reference", markov::ZAGIER_CONSTANT));
            let mut t = Table::new(&["x", "count", "fitted", "residual"]);
            for p in &fit.points {
                t.push(vec![format!("{:e}", p.x), p.count.to_string(), format!("{:.4}", p.fitted), format!("{:.4}", p.residual)]);
            }
            env.table = Some(t);
            env
        }
    })
}

fn perron_values(env: &mut Envelope, name: &str, v: &spectrum::PerronValue) {
    match &v.exact {
        Some(q) => env.value(Reported::exact_quad(name, q)),
        None => env.value(Reported::enclosure(name, &v.value)),
    };
    env.value(Reported::exact_text("attained", attained(&v.attained)));
}

fn run_spectrum(ctx: &Ctx, cmd: &SpectrumCmd) -> CliResult<Envelope> {
    Ok(match cmd {
        SpectrumCmd::M { seq, tol } => {
            let mut env = Envelope::new("spectrum m");
            let s: BiSequence = seq.parse()?;
            env.input("seq", &s);
            let tol = tolerance(&mut env, tol)?;
            let v = spectrum::markov_value(&s, &tol)?;
            perron_values(&mut env, "m", &v);
            env
        }
        SpectrumCmd::Ell { seq, alpha, tol } => {
            let mut env = Envelope::new("spectrum ell");
            let v = match (seq, alpha) {
                (Some(seq), _) => {
                    let s: BiSequence = seq.parse()?;
                    env.input("seq", &s);
                    let tol = tolerance(&mut env, tol)?;
                    spectrum::lagrange_value(&s, &tol)?
                }
                (None, Some(a)) => {
                    let a = ctx.quad(&mut env, "alpha", a)?;
                    let tol = tolerance(&mut env, tol)?;
                    spectrum::lagrange_of_surd(&a, &tol)?
                }
                (None, None) => return Err(CliError::Usage("give --seq or --alpha".into())),
            };
            perron_values(&mut env, "l", &v);
            env
        }
        SpectrumCmd::Sup { alphabet: a, tol } => {
            let mut env = Envelope::new("spectrum sup");
            let b = alphabet(&mut env, "alphabet", a)?;
            let tol = tolerance(&mut env, tol)?;
            let s = spectrum::sup_markov_over_shift_budget(&b, &tol, ctx.budget(spectrum::SHIFT_SUP_BUDGET))?;
            env.value(Reported::enclosure("sup m", &s.value));
            env.value(Reported::exact_int("nodes", s.nodes));
            env
        }
        SpectrumCmd::Hall { ell, depth } => {
            let mut env = Envelope::new("spectrum hall");
            let l = ctx.rational(&mut env, "ell", ell)?;
            env.input("depth", depth);
            let ray = spectrum::hall_ray_alpha(&l, *depth)?;
            env.value(Reported::exact_int("c0", ray.c0));
            env.value(Reported::exact_text("expansion", &ray.expansion));
            env.value(Reported::exact_text("completion", &ray.completion));
            let v = spectrum::lagrange_value(&ray.completion, &rational::rat(1, 1 << 40))?;
            env.value(Reported::enclosure("l(completion)", &v.value));
            env
        }
        SpectrumCmd::Freiman => {
            let mut env = Envelope::new("spectrum freiman");
            env.value(Reported::exact_quad("freiman", &spectrum::freiman_constant()));
            env
        }
    })
}

fn run_cantor(ctx: &Ctx, cmd: &CantorCmd) -> CliResult<Envelope> {
    Ok(match cmd {
        CantorCmd::Dim { alphabet: a, depth } => {
            let mut env = Envelope::new("cantor dim");
            let b = alphabet(&mut env, "alphabet", a)?;
            env.input("depth", depth);
            let br = cantor::dimension_bracket(&b, *depth)?;
            env.value(Reported::float_bracket("HD", br.lower, br.upper));
            env.value(Reported::empirical("cover estimate", br.cover_estimate));
            env.value(Reported::exact_text("method", br.method));
            env
        }
        CantorCmd::Stab { x, alphabet: a, alphabet2, tol } => {
            let mut env = Envelope::new("cantor stab");
            let xv = ctx.rational(&mut env, "x", x)?;
            let b = alphabet(&mut env, "alphabet", a)?;
            let b2 = match alphabet2 {
                Some(a2) => alphabet(&mut env, "alphabet2", a2)?,
                None => b.clone(),
            };
            let mut tol = tolerance(&mut env, tol)?;
            if let Some(w) = &ctx.enclosure {
                tol += w;
            }
            match cantor::sumset_stab_budget(&xv, &b, &b2, &tol, ctx.budget(cantor::STAB_BUDGET))? {
                StabOutcome::Found(w) => {
                    env.value(Reported::exact_text("outcome", "found"));
                    env.value(Reported::exact_text("beta", cantor::fmt_word(&w.beta.word)));
                    env.value(Reported::exact_text("beta_prime", cantor::fmt_word(&w.beta_prime.word)));
                    let lo = &w.beta.lo + &w.beta_prime.lo;
                    let hi = &w.beta.hi + &w.beta_prime.hi;
                    env.value(Reported::enclosure("I(beta) + I(beta')", &lagmark::BoundedValue::new(lo, hi)?));
                    env.value(Reported::exact_int("nodes", w.nodes));
                }
                StabOutcome::NotFound { nodes } => {
                    env.value(Reported::exact_text("outcome", "not_found"));
                    env.value(Reported::exact_int("nodes", nodes));
                }
            }
            env
        }
    })
}

fn count_row(r: &boxdim::CountRecord) -> Vec<String> {
    vec![
        r.t.clone(),
        r.r.to_string(),
        r.count_yes.to_string(),
        r.count_maybe.to_string(),
        r.pruned.to_string(),
        r.dim_estimate.map(|d| format!("{d:.6}")).unwrap_or_default(),
    ]
}

const COUNT_COLUMNS: [&str; 6] = ["t", "r", "count_yes", "count_maybe", "pruned", "dim_estimate"];

fn run_boxdim(ctx: &Ctx, cmd: &BoxdimCmd) -> CliResult<Envelope> {
    Ok(match cmd {
        BoxdimCmd::Count { t, r, rmax } => {
            let mut env = Envelope::new("boxdim count");
            let th = threshold(ctx, &mut env, t)?;
            env.input("r", r);
            let records = match rmax {
                Some(hi) => {
                    env.input("rmax", hi);
                    if hi < r {
                        return Err(CliError::Usage("--rmax below --r".into()));
                    }
                    boxdim::count_c_plus_range(&th, *r, *hi)?
                }
                None => vec![boxdim::count_c_plus_budget(&th, *r, ctx.budget(boxdim::COUNT_BUDGET))?],
            };
            if let [one] = records.as_slice() {
                env.value(Reported::exact_int("count_yes", one.count_yes));
                env.value(Reported::exact_int("count_maybe", one.count_maybe));
                env.value(Reported::exact_int("pruned", one.pruned));
            }
            let mut tab = Table::new(&COUNT_COLUMNS);
            for rec in &records {
                tab.push(count_row(rec));
            }
            env.table = Some(tab);
            env
        }
        BoxdimCmd::Dim { t, rmax, mode } => {
            let mut env = Envelope::new("boxdim dim");
            let th = threshold(ctx, &mut env, t)?;
            env.input("rmax", rmax).input("mode", format!("{mode:?}").to_lowercase());
            let b = boxdim::box_dimension(&th, *rmax, (*mode).into())?;
            env.value(Reported::empirical("fekete", b.fekete));
            env.value(Reported::empirical("limit", b.limit));
            env.value(Reported::empirical("slope", b.slope));
            let mut tab = Table::new(&COUNT_COLUMNS);
            for rec in &b.records {
                tab.push(count_row(rec));
            }
            env.table = Some(tab);
            env
        }
        BoxdimCmd::D { t, rmax, mode } => {
            let mut env = Envelope::new("boxdim d");
            let th = threshold(ctx, &mut env, t)?;
            env.input("rmax", rmax).input("mode", format!("{mode:?}").to_lowercase());
            let d = boxdim::d_estimate(&th, *rmax, (*mode).into())?;
            env.value(Reported::empirical("d", d.d));
            env.value(Reported::empirical("d_running", d.d_running));
            env
        }
        BoxdimCmd::Bm { m } => {
            let mut env = Envelope::new("boxdim bm");
            env.input("m", m);
            let b = boxdim::bm_lower_bound(*m)?;
            env.value(Reported::exact_rational("t", &b.t));
            env.value(Reported::enclosure("sup m over Sigma(B_m)", &b.sup));
            env.value(Reported::exact_text("certified", b.certified));
            env.value(Reported::float_bracket("HD(K(B_m))", b.bracket.lower, b.bracket.upper));
            if b.certified {
                env.value(Reported::float_bracket("d(t) lower bound", b.d_lower, 1.0));
            }
            env
        }
        BoxdimCmd::Feasible { word: w, t, depth } => {
            let mut env = Envelope::new("boxdim feasible");
            let w = word(w)?;
            env.input("word", cantor::fmt_word(&w)).input("depth", depth);
            let tq = ctx.quad(&mut env, "t", t)?;
            let f = boxdim::feasible_cylinder(&w, &tq, *depth)?;
            let label = match f {
                Feasibility::Yes => "yes",
                Feasibility::No => "no",
                Feasibility::Maybe => "maybe",
            };
            env.value(Reported::exact_text("feasibility", label));
            env.value(Reported::exact_int("unstable scale", boxdim::unstable_scale(&w)));
            env
        }
    })
}

fn run_lattice(ctx: &Ctx, cmd: &LatticeCmd) -> CliResult<Envelope> {
    Ok(match cmd {
        LatticeCmd::Ell { alpha, qmax } => {
            let mut env = Envelope::new("lattice ell");
            let a = ctx.quad(&mut env, "alpha", alpha)?;
            env.input("qmax", qmax);
            if *qmax < 4 {
                return Err(CliError::Usage("--qmax must be at least 4".into()));
            }
            let l = lattice::lagrange_via_lattice(&a, *qmax)?;
            env.value(Reported::exact_quad("running_max", &l.running_max));
            env.value(Reported::exact_int("running_q", l.running_q));
            env.value(Reported::exact_quad("tail_max", &l.tail_max));
            env.value(Reported::exact_int("tail_q", l.tail_q));
            let mut est = Reported::enclosure("estimate", &l.estimate);
            est.provenance = "empirical";
            env.value(est);
            env.note(format!("estimate is tail_max widened by 1/{}; a finite scan cannot certify a limsup", l.q_lo));
            env
        }
        LatticeCmd::Reduce { alpha } => {
            let mut env = Envelope::new("lattice reduce");
            let a = ctx.quad(&mut env, "alpha", alpha)?;
            let x = Lattice2::unipotent(&a);
            let r = x.reduce()?;
            env.value(Reported::exact_text("b1", format!("({}, {})", r.b1.0, r.b1.1)));
            env.value(Reported::exact_text("b2", format!("({}, {})", r.b2.0, r.b2.1)));
            env.value(Reported::exact_quad("systole^2", &r.systole_sq));
            env.value(Reported::enclosure("systole", &x.systole(64)?));
            env
        }
    })
}

fn run_verify(ctx: &Ctx, suite: &str, cases: usize) -> CliResult<Envelope> {
    let mut env = Envelope::new("verify");
    env.input("suite", suite).input("seed", ctx.cfg.seed).input("cases", cases);
    let cfg = VerifyConfig { seed: ctx.cfg.seed, cases };
    let results = verify::run_suite(suite, &cfg).ok_or_else(|| CliError::Usage(format!("unknown suite {suite:?}")))?;
    let mut tab = Table::new(&["id", "criterion", "result", "seconds", "detail"]);
    for r in &results {
        eprintln!("{}", verify::format_line(r));
        tab.push(vec![
            r.id.to_string(),
            r.name.to_string(),
            if r.passed { "pass" } else { "fail" }.to_string(),
            format!("{:.2}", r.seconds),
            r.detail.clone(),
        ]);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    env.value(Reported::exact_int("passed", results.len() - failed));
    env.value(Reported::exact_int("failed", failed));
    env.table = Some(tab);
    Ok(env)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    let format = cli.config.format;
    let outcome = Ctx::new(cli.config.clone()).and_then(|ctx| match &cli.command {
        Command::Cf(c) => run_cf(&ctx, c),
        Command::Markov(c) => run_markov(c),
        Command::Spectrum(c) => run_spectrum(&ctx, c),
        Command::Cantor(c) => run_cantor(&ctx, c),
        Command::Boxdim(c) => run_boxdim(&ctx, c),
        Command::Lattice(c) => run_lattice(&ctx, c),
        Command::Verify { suite, cases } => {
            let env = run_verify(&ctx, suite, *cases)?;
            let failed = env.values.iter().any(|v| v.name == "failed" && v.value != "0");
            if failed {
                let mut env = env;
                env.seconds = start.elapsed().as_secs_f64();
                print!("{}", env.render(format));
                return Err(CliError::Failed("acceptance checks failed".into()));
            }
            Ok(env)
        }
    });
    match outcome {
        Ok(mut env) => {
            env.seconds = start.elapsed().as_secs_f64();
            print!("{}", env.render(format));
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(e)) => {
            let budget = matches!(e, Error::BudgetExhausted(_));
            if budget {
                let mut env = Envelope::new("error");
                env.budget_exhausted = true;
                env.note(e.to_string());
                env.seconds = start.elapsed().as_secs_f64();
                print!("{}", env.render(format));
            }
            eprintln!("error: {e}");
            ExitCode::from(if budget { 4 } else { 3 })
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
