//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vtt_core::compose::{describe, known_glyphs};
use vtt_core::composer::{canonical_id, canonical_text};
use vtt_core::dsl::{self, parse_glyph_literal};
use vtt_core::interchange;
use vtt_core::render::{glyph_svg, render_expression, tex, to_svg, DEFAULT_SIZE};
use vtt_core::semantics::lookup_concept;
use vtt_core::{canonicalize, constraint_of, enumerate_family, resolve_glyph, validate, RadicalId, Registry};

use crate::load;
use crate::service::{self, AppState};

#[derive(Parser, Debug)]
#[command(name = "vtt", version, about = "Compile, check and render visual type theory registries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compile definition source into an interchange document.
    Compile {
        src: PathBuf,
        /// Output file; `-` writes to standard output.
        #[arg(short, long, default_value = "-")]
        out: PathBuf,
    },
    /// Run every lint and print the findings. Exits 1 when any is an error.
    Validate {
        registry: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Render one glyph, or an expression, to an SVG file in a directory.
    Render {
        registry: PathBuf,
        /// Concept id, radical id, canonical glyph id or glyph literal.
        #[arg(long, required_unless_present = "expr", conflicts_with = "expr")]
        glyph: Option<String>,
        /// Expression notation, e.g. `arrow(set | set)`.
        #[arg(long)]
        expr: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SIZE)]
        size: u32,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Read a glyph literal: its constraints, canonical id and concept.
    Lookup {
        registry: PathBuf,
        #[arg(long)]
        glyph_literal: String,
        #[arg(long)]
        json: bool,
    },
    /// List every glyph a radical admits with the registry's marks.
    Enumerate {
        registry: PathBuf,
        #[arg(long)]
        radical: String,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Write a TeX package with one macro per bound glyph.
    EmitTex {
        registry: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Restrict to these glyphs (repeatable); defaults to every bound concept.
        #[arg(long)]
        glyph: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_SIZE)]
        size: u32,
    },
    /// Serve the read-only HTTP interface. SIGHUP reloads the registry.
    Serve {
        registry: PathBuf,
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: String,
    },
}

/// A failure reported on standard error with exit status 1.
#[derive(Debug)]
pub struct Failure(pub String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// Parses `args` and runs the command. Usage errors exit with status 2.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

pub fn execute(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Compile { src, out } => {
            let text = fs::read_to_string(&src).map_err(|e| format!("{}: {e}", src.display()))?;
            let registry = dsl::compile_source(&text, None).map_err(|e| format!("{}: {e}", src.display()))?;
            write_output(&out, &interchange::export(&registry))?;
        }
        Command::Validate { registry, json } => {
            let r = load::load_lenient(&registry)?;
            let report = validate(&r);
            let text = if json { report.to_json() + "\n" } else { report.to_text() };
            print(&text)?;
            if report.has_errors() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Render { registry, glyph, expr, size, out } => {
            if size == 0 {
                return Err(Failure("size must be positive".into()));
            }
            let r = load::load(&registry)?;
            let (name, svg) = match (glyph, expr) {
                (Some(id), _) => {
                    let g = canonicalize(&resolve_glyph(&id, &r)?, &r);
                    (canonical_id(&g, &r), glyph_svg(&g, &r, size)?)
                }
                (None, Some(text)) => {
                    let e = dsl::parse_expression(&text)?;
                    ("expression".to_owned(), to_svg(&render_expression(&e, &r, size)?))
                }
                (None, None) => unreachable!("clap requires one of --glyph and --expr"),
            };
            fs::create_dir_all(&out).map_err(|e| format!("{}: {e}", out.display()))?;
            let path = out.join(format!("{name}.svg"));
            fs::write(&path, svg).map_err(|e| format!("{}: {e}", path.display()))?;
            print(&format!("{}\n", path.display()))?;
        }
        Command::Lookup { registry, glyph_literal, json } => {
            let r = load::load(&registry)?;
            let g = parse_glyph_literal(&glyph_literal)?;
            r.validate_glyph(&g)?;
            let g = canonicalize(&g, &r);
            if json {
                let mut resp = serde_json::to_value(describe(&g, DEFAULT_SIZE, &r)?)?;
                resp.as_object_mut().expect("response is an object").remove("svg");
                print(&(serde_json::to_string_pretty(&resp)? + "\n"))?;
            } else {
                let lits = constraint_of(&g, &r)?.to_strings();
                let concept = lookup_concept(&g, &r).map(|c| format!("{} ({})", c.id, c.name));
                print(&format!(
                    "glyph: {}\nid: {}\nconstraints: {}\nconcept: {}\n",
                    canonical_text(&g, &r),
                    canonical_id(&g, &r),
                    if lits.is_empty() { "-".into() } else { lits.join(" ") },
                    concept.unwrap_or_else(|| "unbound".into())
                ))?;
            }
        }
        Command::Enumerate { registry, radical, limit } => {
            let r = load::load(&registry)?;
            let rad = r
                .radical(&RadicalId::new(radical.as_str()))
                .ok_or_else(|| format!("no radical with id `{radical}`"))?;
            let family = enumerate_family(rad, r.marks())?;
            let mut out = String::new();
            for g in family.iter().take(limit.unwrap_or(usize::MAX)) {
                let label = match r.validate_glyph(&g) {
                    Err(e) => format!("invalid: {e}"),
                    Ok(()) => lookup_concept(&g, &r).map(|c| c.id.to_string()).unwrap_or_else(|| "unbound".into()),
                };
                out.push_str(&format!("{}\t{label}\n", canonical_text(&g, &r)));
            }
            print(&out)?;
            eprintln!("{} glyph(s) in family", family.count());
        }
        Command::EmitTex { registry, out, glyph, size } => {
            let r = load::load(&registry)?;
            let selection = if glyph.is_empty() { bound_selection(&r) } else { glyph };
            let pkg = tex::emit_tex(&r, &selection, size)?;
            write_package(&out, &pkg)?;
            print(&format!("{} macro(s) written to {}\n", pkg.artwork.len(), out.display()))?;
        }
        Command::Serve { registry, bind } => {
            let state = AppState::from_path(registry)?;
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(service::serve(state, &bind))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Canonical ids of every bound glyph, in binding order.
fn bound_selection(r: &Registry) -> Vec<String> {
    let bound: Vec<String> =
        r.bindings().iter().map(|b| canonical_id(&canonicalize(&b.glyph, r), r)).collect();
    known_glyphs(r).into_iter().map(|(id, _)| id).filter(|id| bound.contains(id)).collect()
}

fn write_package(dir: &Path, pkg: &tex::TexPackage) -> Result<(), Failure> {
    let glyphs = dir.join("glyphs");
    fs::create_dir_all(&glyphs).map_err(|e| format!("{}: {e}", glyphs.display()))?;
    let files = [
        (dir.join(format!("{}.sty", tex::PACKAGE_NAME)), pkg.sty.as_str()),
        (dir.join(format!("{}-index.txt", tex::PACKAGE_NAME)), pkg.index.as_str()),
    ];
    for (path, body) in files.iter().map(|(p, b)| (p.clone(), *b)).chain(
        pkg.artwork.iter().map(|(name, svg)| (glyphs.join(name), svg.as_str())),
    ) {
        fs::write(&path, body).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn write_output(out: &Path, text: &str) -> Result<(), Failure> {
    if out == Path::new("-") {
        return print(text);
    }
    fs::write(out, text).map_err(|e| Failure(format!("{}: {e}", out.display())))
}

fn print(text: &str) -> Result<(), Failure> {
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    stdout.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn bound_selection_covers_each_bound_glyph_once() {
        let r = vtt_core::seed::registry();
        let sel = bound_selection(&r);
        let mut dedup = sel.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), sel.len());
        assert!(sel.iter().any(|id| resolve_glyph(id, &r).unwrap() == resolve_glyph("compact-hausdorff", &r).unwrap()));
    }
}
