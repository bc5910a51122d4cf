use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use soslift::farey::{farey_intervals, farey_sequence};
use soslift::lifting::{generate_up_to, lift_once, project};
use soslift::sets::{
    enumerate, enumerate_sos_recurrence, verify_class_identities, EnumerateOptions, Method,
};
use soslift::sos::{
    sos_from_alpha, suranyi_table, tau_explicit, tau_from_alpha, verify_tau_identities,
    TauCheckConfig, DEFAULT_SEED,
};
use soslift::trees::{build_farey_tree, build_gen_tree, check_isomorphism, to_dot};
use soslift::{Error, Fraction, Label, PermClass, Permutation, Report};

/// Degrees above this need --force when lifting.
const LIFT_FORCE_ABOVE: usize = 500;

#[derive(Parser)]
#[command(
    name = "soslift",
    version,
    about = "Sós permutations, congruential recurrences and degree lifting"
)]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Oneline)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Oneline,
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TreeKind {
    Gen,
    Farey,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// List a permutation class at one degree.
    Enumerate {
        #[arg(long)]
        set: Label,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "brute")]
        method: Method,
        /// Allow brute force above the size guard.
        #[arg(long)]
        force: bool,
    },
    /// Build the congruential solutions level by level.
    Lift {
        /// Start from this level instead of degree 1.
        #[arg(long)]
        from_m: Option<usize>,
        /// Read the starting level from a file of permutations, one per line
        /// (text or JSON). Without it the level is regenerated.
        #[arg(long, requires = "from_m")]
        input: Option<String>,
        /// Target degree; defaults to one above --from-m.
        #[arg(long)]
        to_m: Option<usize>,
        #[arg(long)]
        force: bool,
    },
    /// Map a degree-m solution to its parent of degree m-1.
    Project {
        #[arg(long)]
        perm: Permutation,
    },
    /// The permutation ordering the residues {iα}, i in [m].
    Tau {
        #[arg(long)]
        m: usize,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Fraction,
        /// Use the closed-form floor sum instead of counting.
        #[arg(long, conflicts_with = "sos")]
        closed_form: bool,
        /// Print the Sós permutation (the inverse) instead.
        #[arg(long)]
        sos: bool,
    },
    /// Farey sequence of order m and its intervals with their permutations.
    Farey {
        #[arg(long)]
        m: usize,
    },
    /// Export the generation tree, the Farey tree, or both.
    Tree {
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = TreeKind::Gen)]
        kind: TreeKind,
        /// Insert the intermediate fixed-point permutation under each parent.
        #[arg(long)]
        with_y_levels: bool,
    },
    /// Run the set identities for 2..=m-max and the randomized τ checks.
    Verify {
        #[arg(long, default_value_t = 8)]
        m_max: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        sos_min: usize,
        #[arg(long, default_value_t = 30)]
        sos_max: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        force: bool,
    },
    /// Compare the generation tree with the Farey tree.
    VerifyTree {
        #[arg(long)]
        depth: usize,
    },
    /// Permutations satisfying Sós's three-case recurrence, against inverses of V.
    Sosrec {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        force: bool,
    },
}

enum Failure {
    Usage(String),
    Verification,
    Internal(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

struct Out {
    format: Format,
    sink: io::BufWriter<io::StdoutLock<'static>>,
}

impl Out {
    fn line(&mut self, s: impl std::fmt::Display) -> io::Result<()> {
        writeln!(self.sink, "{s}")
    }

    fn json(&mut self, v: &impl Serialize) -> io::Result<()> {
        let s = serde_json::to_string(v).map_err(io::Error::other)?;
        self.line(s)
    }

    fn perms<'a>(&mut self, perms: impl IntoIterator<Item = &'a Permutation>) -> io::Result<()> {
        for p in perms {
            match self.format {
                Format::Json => self.json(p)?,
                _ => self.line(p)?,
            }
        }
        Ok(())
    }

    fn report(&mut self, r: &Report) -> io::Result<bool> {
        for c in &r.checks {
            match self.format {
                Format::Json => self.json(c)?,
                _ => self.line(c)?,
            }
        }
        Ok(r.passed())
    }
}

fn brute_options(force: bool) -> std::result::Result<EnumerateOptions, Failure> {
    let mut opts = EnumerateOptions {
        force,
        ..EnumerateOptions::default()
    };
    if let Ok(raw) = std::env::var("SOSLIFT_MAX_BRUTE_M") {
        opts.max_brute_m = raw
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("SOSLIFT_MAX_BRUTE_M: invalid value `{raw}`")))?;
    }
    Ok(opts)
}

fn read_level(path: &str, m: usize) -> std::result::Result<PermClass, Failure> {
    let file = File::open(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
    let mut members = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let p: Permutation = if line.starts_with('{') {
            serde_json::from_str(line)
                .map_err(|e| Failure::Usage(format!("invalid permutation `{line}`: {e}")))?
        } else {
            line.parse()?
        };
        if p.degree() != m {
            return Err(Error::DegreeMismatch(m, p.degree()).into());
        }
        members.push(p);
    }
    Ok(PermClass::new(m, Some(Label::V), members)?)
}

fn run(cli: Cli) -> Outcome {
    let mut out = Out {
        format: cli.format,
        sink: io::BufWriter::new(io::stdout().lock()),
    };
    let result = dispatch(cli.command, &mut out);
    out.sink.flush()?;
    result
}

fn dispatch(command: Command, out: &mut Out) -> Outcome {
    match command {
        Command::Enumerate {
            set,
            m,
            method,
            force,
        } => {
            let class = enumerate(set, m, method, brute_options(force)?)?;
            out.perms(&class)?;
        }
        Command::Lift {
            from_m,
            input,
            to_m,
            force,
        } => {
            let target = match (to_m, from_m) {
                (Some(t), _) => t,
                (None, Some(f)) => f + 1,
                (None, None) => return Err(Failure::Usage("give --to-m or --from-m".into())),
            };
            if target > LIFT_FORCE_ABOVE && !force {
                return Err(Failure::Usage(format!(
                    "degree {target} is above {LIFT_FORCE_ABOVE}; pass --force"
                )));
            }
            let level = match (from_m, input) {
                (Some(f), _) if f >= target => {
                    return Err(Failure::Usage(format!(
                        "--to-m {target} must exceed --from-m {f}"
                    )))
                }
                (Some(f), Some(path)) => {
                    let mut level = read_level(&path, f)?;
                    for _ in f..target {
                        level = lift_once(&level)?;
                    }
                    level
                }
                _ => generate_up_to(target)?.pop().expect("at least one level"),
            };
            out.perms(&level)?;
        }
        Command::Project { perm } => {
            let parent = project(&perm)?;
            out.perms([&parent])?;
        }
        Command::Tau {
            m,
            alpha,
            closed_form,
            sos,
        } => {
            let p = if sos {
                sos_from_alpha(m, &alpha)?
            } else if closed_form {
                tau_explicit(m, &alpha)?
            } else {
                tau_from_alpha(m, &alpha)?
            };
            out.perms([&p])?;
        }
        Command::Farey { m } => {
            let terms = farey_sequence(m)?;
            let table = suranyi_table(m)?;
            match out.format {
                Format::Json => {
                    out.json(&serde_json::json!({ "m": m, "sequence": terms }))?;
                    for (iv, p) in table.entries() {
                        out.json(&serde_json::json!({ "interval": iv, "perm": p }))?;
                    }
                }
                _ => {
                    let seq: Vec<String> = terms.iter().map(ToString::to_string).collect();
                    out.line(seq.join(" "))?;
                    debug_assert_eq!(farey_intervals(m)?.len(), table.len());
                    for (iv, p) in table.entries() {
                        out.line(format!("{iv} {p}"))?;
                    }
                }
            }
        }
        Command::Tree {
            depth,
            kind,
            with_y_levels,
        } => {
            let mut trees = Vec::new();
            if matches!(kind, TreeKind::Gen | TreeKind::Both) {
                trees.push(("gen", build_gen_tree(depth)?.to_labeled(with_y_levels)));
            }
            if matches!(kind, TreeKind::Farey | TreeKind::Both) {
                trees.push(("farey", build_farey_tree(depth)?.to_labeled()));
            }
            match out.format {
                Format::Json => {
                    let map: serde_json::Map<String, serde_json::Value> = trees
                        .iter()
                        .map(|(k, t)| Ok((k.to_string(), serde_json::to_value(t)?)))
                        .collect::<serde_json::Result<_>>()
                        .map_err(io::Error::other)?;
                    out.json(&map)?;
                }
                _ => {
                    let refs: Vec<(&str, &_)> = trees.iter().map(|(k, t)| (*k, t)).collect();
                    write!(out.sink, "{}", to_dot(&refs))?;
                }
            }
        }
        Command::Verify {
            m_max,
            seed,
            sos_min,
            sos_max,
            samples,
            force,
        } => {
            let mut report = verify_class_identities(m_max, brute_options(force)?)?;
            report.extend(verify_tau_identities(TauCheckConfig {
                m_min: sos_min,
                m_max: sos_max,
                samples,
                seed,
            })?);
            if !out.report(&report)? {
                return Err(Failure::Verification);
            }
        }
        Command::VerifyTree { depth } => {
            if !out.report(&check_isomorphism(depth)?)? {
                return Err(Failure::Verification);
            }
        }
        Command::Sosrec { m, force } => {
            let survey = enumerate_sos_recurrence(m, brute_options(force)?)?;
            match out.format {
                Format::Json => out.json(&survey)?,
                _ => {
                    out.line(format!(
                        "m={m} recurrence={} inverses_of_V={} extra={} missing={}",
                        survey.recurrence.len(),
                        survey.inverses_of_v.len(),
                        survey.extra.len(),
                        survey.missing.len()
                    ))?;
                    for p in &survey.extra {
                        out.line(format!("extra {p}"))?;
                    }
                    for p in &survey.missing {
                        out.line(format!("missing {p}"))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
