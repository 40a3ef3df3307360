use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use pmatch::io as fio;
use pmatch::{
    bl_matching, homology_module, span_from_filtrations, union_filtration, Barcode,
    EnrichedMatching, Error, Matching, PrimeModulus, SetMatching,
};

#[derive(Parser)]
#[command(
    name = "pmatch",
    about = "Exact persistence barcodes and matchings over a prime field"
)]
struct Cli {
    /// Prime modulus used when an input file does not fix one
    #[arg(short = 'p', long = "prime", global = true, default_value_t = 2)]
    prime: u32,
    /// Homology degree for filtration commands
    #[arg(short = 'k', long = "degree", global = true, default_value_t = 0)]
    degree: usize,
    /// Emit a single JSON document instead of plain text
    #[arg(long = "json", global = true)]
    json: bool,
    /// Write output to a file instead of stdout
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a .pmod, .lmod, .span, or .flt file is well-formed
    Validate { input: PathBuf },
    /// Barcode of a persistence module (.pmod)
    Barcode { input: PathBuf },
    /// Basis-independent partial matching induced by a morphism (.lmod)
    Match { input: PathBuf },
    /// Representative matching through the image factorization (.lmod)
    BlMatch { input: PathBuf },
    /// Enriched matching of a span (.span)
    Enriched { input: PathBuf },
    /// Barcode of the common-persistence submodule of a span (.span)
    Kmodule { input: PathBuf },
    /// Barcode of the degree-k homology module of a filtration (.flt)
    Homology { input: PathBuf },
    /// Union filtration glued along a partial vertex map (.flt .flt .pmap)
    Union {
        first: PathBuf,
        second: PathBuf,
        gluing: PathBuf,
    },
    /// Enriched matching of the span induced by two filtrations (.flt .flt .pmap)
    SpanMatch {
        first: PathBuf,
        second: PathBuf,
        gluing: PathBuf,
    },
}

fn barcode_text(b: &Barcode) -> String {
    let mut entries: Vec<_> = b.iter().collect();
    // output order: (a, b) ascending
    entries.sort_by_key(|(k, _)| (k.a, k.b));
    entries
        .iter()
        .map(|(k, m)| format!("{k} x {m}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn barcode_json(b: &Barcode) -> serde_json::Value {
    let mut entries: Vec<_> = b.iter().collect();
    entries.sort_by_key(|(k, _)| (k.a, k.b));
    json!(entries
        .iter()
        .map(|(k, m)| json!({"interval": [k.a, k.b], "multiplicity": m}))
        .collect::<Vec<_>>())
}

fn matching_json(m: &Matching) -> serde_json::Value {
    json!(m
        .iter()
        .map(|((kv, ku), mult)| {
            json!({"source": [kv.a, kv.b], "target": [ku.a, ku.b], "multiplicity": mult})
        })
        .collect::<Vec<_>>())
}

fn set_matching_json(s: &SetMatching) -> serde_json::Value {
    json!(s
        .source_set()
        .iter()
        .map(|&x| {
            let target = s
                .get(x)
                .map(|y| json!({"interval": [y.key.a, y.key.b], "copy": y.copy}));
            json!({
                "source": {"interval": [x.key.a, x.key.b], "copy": x.copy},
                "target": target,
            })
        })
        .collect::<Vec<_>>())
}

fn enriched_json(g: &EnrichedMatching) -> serde_json::Value {
    json!(g
        .iter()
        .map(|((kv, ku), ws)| {
            json!({
                "source": [kv.a, kv.b],
                "target": [ku.a, ku.b],
                "witnesses": barcode_json(ws),
            })
        })
        .collect::<Vec<_>>())
}

fn run(cli: &Cli) -> Result<String, Error> {
    let p = PrimeModulus::new(cli.prime)?;
    match &cli.command {
        Command::Validate { input } => {
            let ext = input.extension().and_then(|e| e.to_str()).unwrap_or("");
            match ext {
                "pmod" => {
                    fio::load_module(input, p)?;
                }
                "lmod" => {
                    fio::load_morphism(input, p)?;
                }
                "span" => {
                    fio::load_span(input, p)?;
                }
                "flt" => {
                    fio::load_filtration(input)?;
                }
                other => {
                    return Err(Error::Parse(format!(
                        "unknown input extension {other:?} (expected pmod, lmod, span, or flt)"
                    )))
                }
            }
            Ok(if cli.json {
                json!({"ok": true}).to_string()
            } else {
                "ok".to_string()
            })
        }
        Command::Barcode { input } => {
            let m = fio::load_module(input, p)?;
            let b = m.diagram().barcode();
            Ok(if cli.json {
                barcode_json(&b).to_string()
            } else {
                barcode_text(&b)
            })
        }
        Command::Match { input } => {
            let alpha = fio::load_morphism(input, p)?;
            let m = alpha.induced_matching();
            Ok(if cli.json {
                matching_json(&m).to_string()
            } else {
                m.to_string()
            })
        }
        Command::BlMatch { input } => {
            let alpha = fio::load_morphism(input, p)?;
            let sigma = bl_matching(&alpha)?;
            Ok(if cli.json {
                set_matching_json(&sigma).to_string()
            } else {
                sigma.to_string()
            })
        }
        Command::Enriched { input } => {
            let span = fio::load_span(input, p)?;
            let g = span.enriched_matching();
            Ok(if cli.json {
                enriched_json(&g).to_string()
            } else {
                g.to_string()
            })
        }
        Command::Kmodule { input } => {
            let span = fio::load_span(input, p)?;
            let (k, _) = span.common_submodule()?;
            let b = k.diagram().barcode();
            Ok(if cli.json {
                json!({
                    "module": fio::module_to_data(&k, true),
                    "barcode": barcode_json(&b),
                })
                .to_string()
            } else {
                barcode_text(&b)
            })
        }
        Command::Homology { input } => {
            let f = fio::load_filtration(input)?;
            let m = homology_module(&f, cli.degree, p);
            let b = m.diagram().barcode();
            Ok(if cli.json {
                barcode_json(&b).to_string()
            } else {
                barcode_text(&b)
            })
        }
        Command::Union { first, second, gluing } => {
            let fk = fio::load_filtration(first)?;
            let fl = fio::load_filtration(second)?;
            let mu = fio::load_vertex_map(gluing)?;
            let (u, _, _) = union_filtration(&fk, &fl, &mu)?;
            let data = fio::filtration_to_data(&u);
            Ok(serde_json::to_string(&data).expect("plain data serializes"))
        }
        Command::SpanMatch { first, second, gluing } => {
            let fk = fio::load_filtration(first)?;
            let fl = fio::load_filtration(second)?;
            let mu = fio::load_vertex_map(gluing)?;
            let span = span_from_filtrations(&fk, &fl, &mu, cli.degree, p)?;
            let g = span.enriched_matching();
            Ok(if cli.json {
                enriched_json(&g).to_string()
            } else {
                g.to_string()
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            let out = if text.is_empty() { text } else { format!("{text}\n") };
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, out) {
                        eprintln!("error: {e}");
                        return ExitCode::from(1);
                    }
                }
                None => {
                    let mut stdout = std::io::stdout();
                    let _ = stdout.write_all(out.as_bytes());
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) | Error::Io(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
