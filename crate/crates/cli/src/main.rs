//! `braidorder`: expansions, comparisons, the `Ψ` action, certificates and
//! property suites from the command line.
//!
//! Exit codes: 0 success, 1 verification or property failure, 2 usage or
//! parse error, 3 comparison undecided at the degree cap.

mod config;

use std::cmp::Ordering;
use std::path::PathBuf;
use std::process::ExitCode;

use braidorder::braid::{artin_action, make_gt_certificate, BraidWord};
use braidorder::harness::{run_suite, SuiteConfig, SUITES};
use braidorder::knorder::{kn_compare, psi_extend, psi_extend_inverse, ActionLabel, KnElement};
use braidorder::magnus::{magnus_compare, magnus_expand, ord_name};
use braidorder::series::{NaturalOrder, Series};
use braidorder::surface::{build_reduction_system, pi1_compare, surface_expand, SurfacePresentation};
use braidorder::{Error, Exec, Generator, Word};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::{Format, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "braidorder",
    version,
    about = "Bi-orders on free, surface and surface braid groups"
)]
struct Cli {
    /// JSON file with default settings.
    #[arg(long, global = true, env = "BRAIDORDER_CONFIG")]
    config: Option<PathBuf>,

    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Surface genus.
    #[arg(short = 'g', long)]
    genus: Option<u32>,
    /// Number of strands.
    #[arg(short = 'n', long)]
    strands: Option<u32>,
    /// First truncation degree.
    #[arg(long)]
    d0: Option<usize>,
    /// Largest truncation degree before giving up.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the Magnus expansion of a word.
    Expand {
        /// Word over x_1, x_2, … (free) or w_1..w_2g (surface).
        word: String,
        /// Expand in the free group.
        #[arg(long, conflicts_with = "surface")]
        free: bool,
        /// Expand in the surface group and reduce modulo the relator.
        #[arg(long)]
        surface: bool,
        /// Truncation degree.
        #[arg(short = 'd', long, default_value_t = 4)]
        degree: usize,
        #[arg(short = 'g', long)]
        genus: Option<u32>,
    },
    /// Compare two elements: prints LT, EQ or GT.
    Compare {
        kind: Kind,
        a: String,
        b: String,
        #[command(flatten)]
        common: Common,
    },
    /// Apply the conjugation action Ψ_{i,r} to a K_n element.
    Act {
        /// Label `a[i,r]`.
        label: String,
        /// `;`-separated component words.
        element: String,
        /// Apply the inverse action.
        #[arg(long)]
        inverse: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Print the Artin action of a braid word on x_1..x_n.
    Artin {
        word: String,
        #[arg(short = 'n', long)]
        strands: u32,
    },
    /// Build and verify the generalized-torsion certificate for σ_i² in PB_n.
    Certify {
        #[arg(short = 'n', long)]
        strands: u32,
        #[arg(short = 'i', long)]
        index: u32,
    },
    /// Run a property suite and print its JSON report.
    Proptest {
        suite: String,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Evaluate samples on one thread.
        #[arg(long)]
        sequential: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Dump the surface-group rewriting system as JSON.
    DumpRules {
        #[arg(short = 'g', long)]
        genus: Option<u32>,
        #[arg(short = 'd', long, default_value_t = 4)]
        degree: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Free,
    Surface,
    Kn,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UndecidedAtCap { .. } => 3,
            Error::Verification(_) | Error::NotUnit(_) => 1,
            Error::Parse { .. } | Error::Precondition(_) | Error::MismatchedFamily(..) | Error::NotH1Trivial(_) => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match RunConfig::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cli.json {
        cfg.format = Format::Json;
    }
    match run(cli.command, cfg) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn apply_common(cfg: &mut RunConfig, c: &Common) -> Result<(), Failure> {
    if let Some(g) = c.genus {
        cfg.genus = g;
    }
    if let Some(n) = c.strands {
        cfg.strands = n;
    }
    if let Some(d) = c.d0 {
        cfg.d0 = d;
    }
    if let Some(d) = c.cap {
        cfg.cap = d;
    }
    cfg.validate()?;
    Ok(())
}

/// Writes a line to stdout; a closed pipe (`| head`) is not an error.
fn say(s: impl std::fmt::Display) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn emit<T: Serialize>(cfg: &RunConfig, text: impl FnOnce() -> String, json: &T) {
    match cfg.format {
        Format::Text => say(text()),
        Format::Json => say(serde_json::to_string_pretty(json).expect("serializable")),
    }
}

fn run(cmd: Command, mut cfg: RunConfig) -> CmdResult {
    match cmd {
        Command::Expand {
            word,
            free,
            surface,
            degree,
            genus,
        } => {
            if free == surface {
                return Err(usage("choose exactly one of --free and --surface"));
            }
            if let Some(g) = genus {
                cfg.genus = g;
            }
            cfg.validate()?;
            let series = if free {
                magnus_expand(&word.parse::<Word>()?, degree)
            } else {
                if degree < 2 {
                    return Err(usage("surface expansions need degree >= 2"));
                }
                let p = SurfacePresentation::new(cfg.genus)?;
                surface_expand(&p.parse(&word)?, degree)?
            };
            #[derive(Serialize)]
            struct Out<'a> {
                schema: &'static str,
                #[serde(flatten)]
                series: &'a Series,
            }
            emit(
                &cfg,
                || series.to_string(),
                &Out {
                    schema: "braidorder.series/1",
                    series: &series,
                },
            );
            Ok(0)
        }
        Command::Compare { kind, a, b, common } => {
            apply_common(&mut cfg, &common)?;
            let esc = cfg.escalation()?;
            let verdict: Ordering = match kind {
                Kind::Free => {
                    let (u, v) = (a.parse::<Word>()?, b.parse::<Word>()?);
                    if u.letters().iter().chain(v.letters()).any(|l| l.gen.alphabet != 'x') {
                        return Err(usage("free words use the x_i alphabet"));
                    }
                    magnus_compare(&u, &v, &NaturalOrder, esc)?
                }
                Kind::Surface => {
                    let p = SurfacePresentation::new(cfg.genus)?;
                    pi1_compare(&p.parse(&a)?, &p.parse(&b)?, esc)?
                }
                Kind::Kn => {
                    let n = match common.strands {
                        Some(n) => n,
                        None => infer_strands(&a, &b, cfg.genus)?,
                    };
                    let ka = KnElement::parse(&a, n, cfg.genus)?;
                    let kb = KnElement::parse(&b, n, cfg.genus)?;
                    kn_compare(&ka, &kb, esc)?
                }
            };
            #[derive(Serialize)]
            struct Out<'a> {
                schema: &'static str,
                kind: &'a str,
                a: &'a str,
                b: &'a str,
                verdict: &'static str,
            }
            let kind_name = format!("{kind:?}").to_lowercase();
            emit(
                &cfg,
                || ord_name(verdict).to_string(),
                &Out {
                    schema: "braidorder.compare/1",
                    kind: &kind_name,
                    a: &a,
                    b: &b,
                    verdict: ord_name(verdict),
                },
            );
            Ok(0)
        }
        Command::Act {
            label,
            element,
            inverse,
            common,
        } => {
            apply_common(&mut cfg, &common)?;
            let l: ActionLabel = label.parse()?;
            let l = ActionLabel::new(l.i, l.r, cfg.strands, cfg.genus)?;
            let k = KnElement::parse(&element, cfg.strands, cfg.genus)?;
            let image = if inverse {
                psi_extend_inverse(l, &k)
            } else {
                psi_extend(l, &k)
            };
            #[derive(Serialize)]
            struct Out {
                schema: &'static str,
                label: String,
                input: String,
                image: String,
            }
            emit(
                &cfg,
                || image.to_string(),
                &Out {
                    schema: "braidorder.act/1",
                    label: l.to_string(),
                    input: k.to_string(),
                    image: image.to_string(),
                },
            );
            Ok(0)
        }
        Command::Artin { word, strands } => {
            let b = BraidWord::parse(&word, strands)?;
            let phi = artin_action(&b);
            let images: Vec<(String, String)> = (1..=strands)
                .map(|i| {
                    let g = Generator::x(i);
                    (g.to_string(), phi.image(&g).to_string())
                })
                .collect();
            #[derive(Serialize)]
            struct Out {
                schema: &'static str,
                braid: String,
                images: Vec<(String, String)>,
            }
            let text = || {
                images
                    .iter()
                    .map(|(g, w)| format!("{g} -> {w}"))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            emit(
                &cfg,
                text,
                &Out {
                    schema: "braidorder.artin/1",
                    braid: b.to_string(),
                    images: images.clone(),
                },
            );
            Ok(0)
        }
        Command::Certify { strands, index } => {
            let cert = make_gt_certificate(strands, index)?;
            say(serde_json::to_string_pretty(&cert).expect("serializable"));
            Ok(if cert.valid { 0 } else { 1 })
        }
        Command::Proptest {
            suite,
            samples,
            seed,
            sequential,
            common,
        } => {
            if !SUITES.contains(&suite.as_str()) {
                return Err(usage(format!("unknown suite `{suite}`; known: {}", SUITES.join(", "))));
            }
            apply_common(&mut cfg, &common)?;
            let sc = SuiteConfig {
                seed: seed.unwrap_or(cfg.seed),
                samples: samples.or(cfg.samples),
                genus: common.genus,
                strands: common.strands,
                esc: cfg.escalation()?,
                exec: if sequential { Exec::Sequential } else { Exec::Auto },
            };
            let outcome = run_suite(&suite, &sc)?;
            say(serde_json::to_string_pretty(&outcome).expect("serializable"));
            Ok(if outcome.passed { 0 } else { 1 })
        }
        Command::DumpRules { genus, degree } => {
            if let Some(g) = genus {
                cfg.genus = g;
            }
            cfg.validate()?;
            let sys = build_reduction_system(&SurfacePresentation::new(cfg.genus)?, degree)?;
            #[derive(Serialize)]
            struct Out<'a> {
                schema: &'static str,
                genus: u32,
                #[serde(flatten)]
                system: &'a braidorder::surface::ReductionSystem,
            }
            say(serde_json::to_string_pretty(&Out {
                schema: "braidorder.rules/1",
                genus: cfg.genus,
                system: &sys,
            })
            .expect("serializable"));
            Ok(0)
        }
    }
}

/// The smallest `n` admitting every `f[i,j,..]` in either operand.
fn infer_strands(a: &str, b: &str, genus: u32) -> Result<u32, Failure> {
    let mut n = 2;
    for s in [a, b] {
        for (k, part) in s.split(';').enumerate() {
            let w = braidorder::knorder::parse_fword(part, genus)?;
            n = n.max(k as u32 + 2);
            for l in w.letters() {
                n = n.max(l.gen.j);
            }
        }
    }
    Ok(n)
}
