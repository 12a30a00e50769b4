//! Batch driver: load a lexicon, read one parse tree per line, print formulae,
//! terms, verdicts or reduction traces.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use anyhow::Context as _;
use clap::{Parser, ValueEnum};
use mgl_core::composition::parse_tree;
use mgl_core::{
    felicity_with_fuel, load_lexicon, render_formula, render_logic_term, to_logic_term, Lexicon, Reading, Status,
    Style, Verdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Formula,
    Term,
    Verdict,
    Trace,
}

#[derive(Debug, Clone, PartialEq, Eq, Parser)]
#[command(name = "mgl", version, about = "Compose parse trees against a semantic lexicon")]
pub struct Config {
    /// Lexicon file.
    #[arg(long = "lexicon", value_name = "PATH")]
    pub lexicon: PathBuf,
    /// Trees, one per line; stdin when absent.
    #[arg(long = "input", value_name = "PATH")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Formula)]
    pub format: Format,
    /// Print every reading instead of the first.
    #[arg(long)]
    pub all_readings: bool,
    /// Reduction step budget per reading.
    #[arg(long, default_value_t = mgl_core::DEFAULT_FUEL, value_parser = positive)]
    pub fuel: usize,
    /// Render with λ, ∃, ∧ instead of ascii.
    #[arg(long)]
    pub unicode: bool,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Parses `argv` (program name first).
pub fn parse_args<I, T>(argv: I) -> Result<Config, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Config::try_parse_from(argv)
}

/// Parses arguments and runs; usage errors print to `err` and return 2.
pub fn main_with(argv: Vec<String>, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match parse_args(argv) {
        Ok(config) => run_with(&config, stdin, out, err),
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
                EXIT_OK
            } else {
                EXIT_USAGE
            }
        }
    }
}

/// Runs `config` against the process's standard streams.
pub fn run(config: &Config) -> i32 {
    run_with(config, &mut io::stdin().lock(), &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// Runs `config`, reading trees from `stdin` when no input path is set.
pub fn run_with(config: &Config, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (lexicon, input) = match load(config, stdin) {
        Ok(loaded) => loaded,
        Err(e) => {
            let _ = writeln!(err, "mgl: {e:#}");
            return EXIT_USAGE;
        }
    };
    let mut all_felicitous = true;
    let mut blocks = Vec::new();
    for (n, line) in input.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (block, ok) = process(config, &lexicon, line, n + 1);
        all_felicitous &= ok;
        blocks.push(block);
    }
    if let Err(e) = out.write_all(blocks.join("\n").as_bytes()).and_then(|_| out.flush()) {
        let _ = writeln!(err, "mgl: {e}");
        return EXIT_USAGE;
    }
    if all_felicitous {
        EXIT_OK
    } else {
        EXIT_REJECTED
    }
}

fn load(config: &Config, stdin: &mut dyn Read) -> anyhow::Result<(Lexicon, String)> {
    let text = fs::read_to_string(&config.lexicon)
        .with_context(|| format!("cannot read lexicon {}", config.lexicon.display()))?;
    let lexicon = load_lexicon(&text).with_context(|| format!("in lexicon {}", config.lexicon.display()))?;
    let input = match &config.input {
        Some(path) => fs::read_to_string(path).with_context(|| format!("cannot read input {}", path.display()))?,
        None => {
            let mut s = String::new();
            io::Read::read_to_string(stdin, &mut s).context("cannot read stdin")?;
            s
        }
    };
    Ok((lexicon, input))
}

/// One output block (newline-terminated) and whether the line was felicitous.
fn process(config: &Config, lexicon: &Lexicon, line: &str, line_no: usize) -> (String, bool) {
    let tree = match parse_tree(line) {
        Ok(tree) => tree,
        Err(e) => return (format!("TYPE-ERROR: line {line_no}: {e}\n"), false),
    };
    let verdict = felicity_with_fuel(&tree, lexicon, config.fuel);
    let ok = verdict.status == Status::Felicitous;
    let mut out = String::new();
    if !ok && config.format != Format::Verdict {
        writeln!(out, "{}", headline(&verdict)).unwrap();
        return (out, false);
    }
    let style = if config.unicode { Style::Unicode } else { Style::Ascii };
    let shown = if config.all_readings { verdict.readings.len() } else { verdict.readings.len().min(1) };
    match config.format {
        Format::Formula => {
            for r in &verdict.readings[..shown] {
                writeln!(out, "{}", render_reading(r, style)).unwrap();
            }
        }
        Format::Term => {
            for r in &verdict.readings[..shown] {
                let term = if config.unicode { r.term.unicode().to_string() } else { r.term.to_string() };
                writeln!(out, "{term}").unwrap();
            }
        }
        Format::Verdict => {
            writeln!(out, "{}", headline(&verdict)).unwrap();
            for (i, r) in verdict.readings[..shown].iter().enumerate() {
                writeln!(out, "  reading {}: {}", i + 1, render_reading(r, style)).unwrap();
                if !r.used_morphisms.is_empty() {
                    let used: Vec<String> = r.used_morphisms.iter().map(ToString::to_string).collect();
                    writeln!(out, "    morphisms: {}", used.join(", ")).unwrap();
                }
                for p in &r.presuppositions {
                    writeln!(out, "    presupposition: {}", render_formula(p, style)).unwrap();
                }
            }
            for rej in &verdict.rejection_log {
                let assignment: Vec<String> = rej.assignment.iter().map(|(w, m)| format!("{w}:{m}")).collect();
                writeln!(out, "  rejected at {}: ({}) {}", rej.path, assignment.join(", "), rej.constraint).unwrap();
            }
            for note in &verdict.notes {
                writeln!(out, "  note: {note}").unwrap();
            }
        }
        Format::Trace => {
            let mut readings = verdict.readings.iter();
            if let Some(first) = readings.next() {
                write!(out, "{}", first.trace).unwrap();
                if !first.trace.to_string().ends_with('\n') && !first.trace.is_empty() {
                    out.push('\n');
                }
                writeln!(out, "normal form: {}", render_reading(first, style)).unwrap();
            }
            for (i, r) in readings.enumerate() {
                writeln!(out, "reading {}: {} steps, {}", i + 2, r.trace.len(), render_reading(r, style)).unwrap();
            }
        }
    }
    (out, ok)
}

fn headline(verdict: &Verdict) -> String {
    match verdict.status {
        Status::Felicitous => {
            let n = verdict.readings.len();
            format!("FELICITOUS: {n} reading{}", if n == 1 { "" } else { "s" })
        }
        Status::Infelicitous => format!("INFELICITOUS: {}", verdict.reasons().join("; ")),
        Status::TypeError => match &verdict.error {
            Some(e) => format!("TYPE-ERROR: {e}"),
            None => "TYPE-ERROR".to_string(),
        },
    }
}

fn render_reading(r: &Reading, style: Style) -> String {
    if let Some(f) = &r.formula {
        return render_formula(f, style);
    }
    match to_logic_term(&r.term) {
        Ok(t) => render_logic_term(&t, style),
        Err(_) => r.term.to_string(),
    }
}
