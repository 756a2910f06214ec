//! Command-line front end. Exit codes: 0 success, 1 verification failure,
//! 2 usage or parse error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::aut::{Endo, MappingClassModel};
use crate::expr::ClassWord;
use crate::homology::{abelianize, exponent_matrix};
use crate::powell::{
    boundary_realizations, discover, half_twist, nu_profile, swap, theta_profile, ConstraintProfile, SwapVariant,
    ThetaDirection,
};
use crate::twists::{accepted_handedness, boundary, validate_library, Handedness, TwistLibrary};
use crate::verify::{
    certificate_check, discover_candidates, lemma_search, theorem_verify_with, Bounds, Certificate, ModelSet,
    ToggleRestriction,
};
use crate::words::{Generator, Word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Where `verify-theorem` writes its certificate when `--out` is absent.
pub const DEFAULT_CERT: &str = "cert.json";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "goeritz",
    version,
    about = "Exact checks of genus-two Goeritz generator identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the main result to this file instead of stdout. For
    /// `verify-theorem` this is the certificate path (default `cert.json`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized property batteries.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Clone)]
struct SearchArgs {
    /// Image-length bound: `N` for both searches or `theta=N,nu=M`.
    #[arg(long, value_parser = parse_lengths)]
    max_image_len: Option<Lengths>,
    /// Pants exponent bound.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    max_exp: u32,
    /// Toggle restriction, e.g. `t1=R,t3=L,t4=F,t5=F,t6=S`.
    #[arg(long, default_value = "", value_parser = parse_toggles)]
    toggles: ToggleRestriction,
}

impl SearchArgs {
    fn bounds(&self) -> Bounds {
        let d = Bounds::default();
        let l = self.max_image_len.unwrap_or(Lengths { theta: None, nu: None });
        Bounds {
            theta_max_image_len: l.theta.unwrap_or(d.theta_max_image_len),
            nu_max_image_len: l.nu.unwrap_or(d.nu_max_image_len),
            max_exp: self.max_exp,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Lengths {
    theta: Option<usize>,
    nu: Option<usize>,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("`{s}` is not a positive integer")),
    }
}

fn parse_lengths(s: &str) -> Result<Lengths, String> {
    if !s.contains('=') {
        let n = positive(s)?;
        return Ok(Lengths {
            theta: Some(n),
            nu: Some(n),
        });
    }
    let mut l = Lengths { theta: None, nu: None };
    for part in s.split(',') {
        match part.split_once('=') {
            Some(("theta", v)) => l.theta = Some(positive(v)?),
            Some(("nu", v)) => l.nu = Some(positive(v)?),
            _ => return Err(format!("`{part}`: expected theta=N or nu=N")),
        }
    }
    Ok(l)
}

fn parse_toggles(s: &str) -> Result<ToggleRestriction, String> {
    s.parse().map_err(|e: crate::verify::ToggleError| e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ProfileName {
    Theta,
    ThetaReverse,
    Nu,
    Identity,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the twist relation suite and validate the formula generators.
    ValidateGenerators {
        /// Replace T_a1 by a broken formula (for testing the failure path).
        #[arg(long, hide = true)]
        inject_broken: bool,
        /// Number of random composites in the property battery.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Exhaustively search for generators satisfying a constraint profile.
    Discover {
        #[arg(long, value_enum, default_value_t = ProfileName::Theta)]
        profile: ProfileName,
        /// Read the profile from a JSON file instead.
        #[arg(long, conflicts_with = "profile")]
        profile_file: Option<PathBuf>,
        /// Image-length bound (defaults to the profile's own default).
        #[arg(long, value_parser = positive)]
        max_image_len: Option<usize>,
    },
    /// Apply a mapping-class word to a group word.
    Apply {
        /// e.g. `T_a1^-1 D_omega` (rightmost acts first under t1=R).
        expr: String,
        /// e.g. `b1 a2^-1`.
        word: String,
        /// Take D_theta and D_nu from this certificate.
        #[arg(long)]
        cert: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Find a configuration where C and D_nu' agree on the four handle curves.
    VerifyLemma {
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Factor D_nu through D_omega, D_eta12, D_theta and emit a certificate.
    VerifyTheorem {
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Re-check a certificate without any search.
    Check { cert: PathBuf },
}

/// Everything a run depends on, echoed in structured output.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub bounds: Option<Bounds>,
    pub toggles: Option<ToggleRestriction>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    format: Format,
    path: Option<PathBuf>,
}

impl Io<'_> {
    /// Writes the main result to `--out` or stdout.
    fn emit(&mut self, text: &str, value: &Value) -> std::io::Result<()> {
        let body = match self.format {
            Format::Text => text.to_string(),
            Format::Json => serde_json::to_string_pretty(value).expect("json values serialize") + "\n",
        };
        match &self.path {
            Some(p) => {
                std::fs::write(p, body)?;
                writeln!(self.err, "wrote {}", p.display())
            }
            None => self.out.write_all(body.as_bytes()),
        }
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let mut io = Io {
        out,
        err,
        format: cli.format,
        path: cli.out.clone(),
    };
    let result = dispatch(&cli, &mut io);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn config(cli: &Cli, name: &str, search: Option<&SearchArgs>) -> RunConfig {
    RunConfig {
        subcommand: name.into(),
        bounds: search.map(SearchArgs::bounds),
        toggles: search.map(|s| s.toggles.clone()),
        out: cli.out.clone(),
        format: cli.format,
        seed: cli.seed,
    }
}

type CmdResult = Result<i32, Box<dyn std::error::Error>>;

fn dispatch(cli: &Cli, io: &mut Io) -> CmdResult {
    match &cli.command {
        Command::ValidateGenerators { inject_broken, samples } => {
            cmd_validate(config(cli, "validate-generators", None), *inject_broken, *samples, io)
        }
        Command::Discover {
            profile,
            profile_file,
            max_image_len,
        } => cmd_discover(
            config(cli, "discover", None),
            *profile,
            profile_file.as_ref(),
            *max_image_len,
            io,
        ),
        Command::Apply {
            expr,
            word,
            cert,
            search,
        } => cmd_apply(
            config(cli, "apply", Some(search)),
            expr,
            word,
            cert.as_ref(),
            search,
            io,
        ),
        Command::VerifyLemma { search } => cmd_verify_lemma(config(cli, "verify-lemma", Some(search)), search, io),
        Command::VerifyTheorem { search } => {
            cmd_verify_theorem(config(cli, "verify-theorem", Some(search)), search, io)
        }
        Command::Check { cert } => cmd_check(config(cli, "check", None), cert, io),
    }
}

fn broken_library(hand: Handedness) -> TwistLibrary {
    let mut lib = TwistLibrary::new(hand);
    let t = &mut lib.elementary[0];
    t.model.forward = Endo::identity().with_image(Generator::B1, "b1 a1 a1".parse().expect("literal"));
    t.model.backward = Endo::identity().with_image(Generator::B1, "b1 a1^-1 a1^-1".parse().expect("literal"));
    t.shadow = exponent_matrix(&t.model.forward);
    lib
}

/// Random composites of the shipped generators: abelianization is
/// multiplicative and stored inverses invert. Returns the number of failures.
fn property_battery(lib: &TwistLibrary, seed: u64, samples: usize) -> usize {
    let mut pool: Vec<MappingClassModel> = lib.all().map(|t| t.model.clone()).collect();
    pool.push(half_twist(lib).model);
    for v in SwapVariant::ALL {
        pool.push(swap(v, lib).model);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..samples {
        let f = &pool[rng.gen_range(0..pool.len())];
        let g = &pool[rng.gen_range(0..pool.len())];
        let fg = f.compose(g);
        let ok = exponent_matrix(&fg.forward) == exponent_matrix(&f.forward) * exponent_matrix(&g.forward)
            && fg.forward.compose(&fg.backward).is_identity()
            && fg.forward.apply(&boundary()) == boundary();
        failures += usize::from(!ok);
    }
    failures
}

fn cmd_validate(cfg: RunConfig, inject_broken: bool, samples: usize, io: &mut Io) -> CmdResult {
    let hand = accepted_handedness();
    let reports: Vec<_> = Handedness::ALL
        .into_iter()
        .map(|h| {
            let lib = if inject_broken {
                broken_library(h)
            } else {
                TwistLibrary::new(h)
            };
            (h, validate_library(&lib))
        })
        .collect();
    let accepted = if inject_broken { None } else { hand };
    let mut text = String::new();
    for (h, r) in &reports {
        let fails: Vec<&str> = r.failures().map(|c| c.relation.as_str()).collect();
        text += &format!(
            "handedness {h:?}: {}/{} relations pass{}\n",
            r.checks.len() - fails.len(),
            r.checks.len(),
            if fails.is_empty() {
                String::new()
            } else {
                format!("; failing: {}", fails.join(", "))
            }
        );
    }
    let mut generators_ok = false;
    let mut battery_failures = 0;
    if let Some(h) = accepted {
        let lib = TwistLibrary::new(h);
        let om = half_twist(&lib);
        let mut gens = vec![om.clone()];
        gens.extend(SwapVariant::ALL.map(|v| swap(v, &lib)));
        generators_ok = gens
            .iter()
            .all(|g| g.validate().is_ok() && abelianize(&g.model.forward).is_ok());
        let realized = boundary_realizations(&lib, &om, &gens[1], crate::expr::CompositionOrder::RightmostFirst);
        generators_ok &= realized.iter().all(|r| r.exact);
        battery_failures = property_battery(&lib, cfg.seed, samples);
        text += &format!("accepted handedness: {h:?}\n");
        for r in &realized {
            text += &format!("{} = {}\n", r.twist, r.word);
        }
        text += &format!(
            "formula generators: {}\nproperty battery: {samples} samples, {battery_failures} failures (seed {})\n",
            if generators_ok { "valid" } else { "INVALID" },
            cfg.seed
        );
    } else {
        text += "accepted handedness: none\n";
    }
    let ok = accepted.is_some() && generators_ok && battery_failures == 0;
    let value = json!({
        "config": cfg,
        "reports": reports.iter().map(|(_, r)| r).collect::<Vec<_>>(),
        "accepted_handedness": accepted,
        "generators_valid": generators_ok,
        "battery": { "samples": samples, "failures": battery_failures },
        "ok": ok,
    });
    io.emit(&text, &value)?;
    Ok(if ok { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_discover(
    cfg: RunConfig,
    profile: ProfileName,
    file: Option<&PathBuf>,
    max_image_len: Option<usize>,
    io: &mut Io,
) -> CmdResult {
    let d = Bounds::default();
    let mut p: ConstraintProfile = match file {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        None => match profile {
            ProfileName::Theta => theta_profile(ThetaDirection::Forward, d.theta_max_image_len),
            ProfileName::ThetaReverse => theta_profile(ThetaDirection::Reverse, d.theta_max_image_len),
            ProfileName::Nu => nu_profile(d.nu_max_image_len),
            ProfileName::Identity => ConstraintProfile::identity(),
        },
    };
    if let Some(l) = max_image_len {
        p = match (file, profile) {
            (None, ProfileName::Theta) => theta_profile(ThetaDirection::Forward, l),
            (None, ProfileName::ThetaReverse) => theta_profile(ThetaDirection::Reverse, l),
            (None, ProfileName::Nu) => nu_profile(l),
            _ => ConstraintProfile { max_image_len: l, ..p },
        };
    }
    match discover(&p) {
        Ok(found) => {
            let mut text = format!(
                "profile {}: {} candidates ({} forward, {} inverse)\n",
                p.name,
                found.models.len(),
                found.forward_candidates,
                found.inverse_candidates
            );
            for m in &found.models {
                text += &format!("{}\n{}", m.name, m.forward);
            }
            io.emit(&text, &json!({ "config": cfg, "discovery": found }))?;
            Ok(EXIT_OK)
        }
        Err(e @ crate::powell::DiscoverError::Empty { .. }) => {
            io.emit(
                &format!("{e}\n"),
                &json!({ "config": cfg, "profile": p, "error": e.to_string() }),
            )?;
            Ok(EXIT_FAIL)
        }
        Err(e) => Err(e.into()),
    }
}

fn read_cert(path: &PathBuf) -> Result<Certificate, Box<dyn std::error::Error>> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn parse_with_position<T: std::str::FromStr<Err = crate::words::ParseError>>(
    what: &str,
    s: &str,
) -> Result<T, Box<dyn std::error::Error>> {
    s.parse::<T>().map_err(|e| format!("{what} `{s}`: {e}").into())
}

/// Byte offset of `name` as a whole factor token in `expr`.
fn token_offset(expr: &str, name: &str) -> Option<usize> {
    expr.match_indices(name).map(|(i, _)| i).find(|&i| {
        let before = expr[..i].chars().next_back().is_none_or(char::is_whitespace);
        let after = expr[i + name.len()..]
            .chars()
            .next()
            .is_none_or(|c| c.is_whitespace() || c == '^');
        before && after
    })
}

fn cmd_apply(
    cfg: RunConfig,
    expr: &str,
    word: &str,
    cert: Option<&PathBuf>,
    search: &SearchArgs,
    io: &mut Io,
) -> CmdResult {
    let e: ClassWord = parse_with_position("expression", expr)?;
    let u: Word = parse_with_position("word", word)?;
    let lib = TwistLibrary::new(Handedness::Left);
    if let Some(bad) = e
        .names()
        .find(|n| lib.by_name(n).is_none() && crate::powell::GeneratorName::parse(n).is_none())
    {
        let at = token_offset(expr, bad).unwrap_or(0);
        return Err(format!("expression `{expr}`: unknown mapping class `{bad}` at byte {at}").into());
    }
    let needs_search = e.names().any(|n| matches!(n, "D_theta" | "D_nu" | "D_nu'"));
    let models = match cert {
        Some(path) => {
            let c = read_cert(path)?;
            ModelSet::new(c.toggles, c.generators[2].clone(), c.nu_base.clone())
        }
        None if needs_search => {
            let bounds = search.bounds();
            let candidates = discover_candidates(&bounds, &search.toggles);
            match theorem_verify_with(&bounds, &search.toggles, &candidates) {
                Ok(c) => ModelSet::new(c.toggles, c.generators[2].clone(), c.nu_base.clone()),
                Err(f) => {
                    writeln!(io.err, "{f}")?;
                    return Ok(EXIT_FAIL);
                }
            }
        }
        None => {
            let t = search.toggles.assignments().into_iter().next().unwrap_or_default();
            let placeholder = crate::powell::GeneratorModel::new(
                crate::powell::GeneratorName::Theta,
                MappingClassModel::identity(),
                crate::powell::Provenance::Formula {
                    formula: "unused".into(),
                },
            );
            ModelSet::new(t, placeholder.clone(), placeholder)
        }
    };
    let m = models.evaluate(&e)?;
    let image = m.apply(&u);
    io.emit(
        &format!("{image}\n"),
        &json!({ "config": cfg, "expr": e, "word": u, "image": image, "toggles": models.toggles }),
    )?;
    Ok(EXIT_OK)
}

fn cmd_verify_lemma(cfg: RunConfig, search: &SearchArgs, io: &mut Io) -> CmdResult {
    let bounds = search.bounds();
    let candidates = discover_candidates(&bounds, &search.toggles);
    match lemma_search(&search.toggles, &candidates) {
        Ok(o) => {
            let mut text = format!(
                "toggles {}\nD_theta {}\nD_nu {}\n",
                o.toggles, o.theta.provenance, o.nu.provenance
            );
            for c in &o.report.curves {
                text += &format!(
                    "{:8} C: {}  D_nu': {}  equal: {}\n",
                    c.curve.name(),
                    c.c_class.to_word(),
                    c.nu_prime_class.to_word(),
                    c.equal()
                );
            }
            let broken = o.negative_control.curves.iter().filter(|c| !c.equal()).count();
            text += &format!("negative control (D_nu = id): {broken} curve(s) differ\n");
            io.emit(&text, &json!({ "config": cfg, "outcome": o }))?;
            Ok(EXIT_OK)
        }
        Err(trace) => {
            let text: String = trace.iter().map(|f| format!("{f}\n")).collect();
            io.emit(
                &format!("no configuration passes\n{text}"),
                &json!({ "config": cfg, "trace": trace }),
            )?;
            Ok(EXIT_FAIL)
        }
    }
}

fn cmd_verify_theorem(cfg: RunConfig, search: &SearchArgs, io: &mut Io) -> CmdResult {
    let bounds = search.bounds();
    let candidates = discover_candidates(&bounds, &search.toggles);
    match theorem_verify_with(&bounds, &search.toggles, &candidates) {
        Ok(cert) => {
            let text = format!(
                "toggles {}\npants exponents (p,q,r) = ({},{},{})\nD_nu = {}\n",
                cert.toggles, cert.pants.p, cert.pants.q, cert.pants.r, cert.final_word
            );
            // The certificate file itself is always JSON.
            let path = io.path.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_CERT));
            std::fs::write(&path, serde_json::to_string_pretty(&cert)? + "\n")?;
            writeln!(io.err, "wrote {}", path.display())?;
            match io.format {
                Format::Text => io.out.write_all(text.as_bytes())?,
                Format::Json => {
                    let v = json!({
                        "config": cfg,
                        "certificate": path,
                        "toggles": cert.toggles,
                        "pants": cert.pants,
                        "final_word": cert.final_word,
                    });
                    writeln!(io.out, "{}", serde_json::to_string_pretty(&v)?)?;
                }
            }
            Ok(EXIT_OK)
        }
        Err(f) => {
            io.emit(&f.to_string(), &json!({ "config": cfg, "failure": f }))?;
            Ok(EXIT_FAIL)
        }
    }
}

fn cmd_check(cfg: RunConfig, path: &PathBuf, io: &mut Io) -> CmdResult {
    let cert = read_cert(path)?;
    let report = certificate_check(&cert);
    io.emit(&format!("{report}\n"), &json!({ "config": cfg, "report": report }))?;
    Ok(if report.ok { EXIT_OK } else { EXIT_FAIL })
}

/// Entry point for the binary.
pub fn main_entry() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
