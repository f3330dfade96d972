//! `braidgen`: count, rank and uniformly sample positive braids.

use std::path::PathBuf;
use std::process::ExitCode;

use braidgen::automaton::{build_automaton, ExportFormat};
use braidgen::counting::count_with_prefix;
use braidgen::oracle::{EquivClassExplorer, OracleBounds};
use braidgen::prefixes::{f_for_word, f_to_set};
use braidgen::sampler::{rank, sample, unrank, SampleRequest};
use braidgen::verify;
use braidgen::words::{format_word, parse_word};
use braidgen::{ArtinWord, GrowthTables, StrandCount};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

const CACHE_ENV: &str = "BRAIDGEN_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "braidgen",
    version,
    about = "Exact counting and uniform sampling of positive braids"
)]
struct Cli {
    /// Directory holding cached growth tables (default: the user cache
    /// directory, or $BRAIDGEN_CACHE_DIR)
    #[arg(long, global = true, value_name = "DIR")]
    cache: Option<PathBuf>,

    /// Print results as JSON
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Strands {
    /// Number of strands
    #[arg(short = 'n', value_parser = parse_strands)]
    n: StrandCount,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of positive braids of length k
    Count {
        #[command(flatten)]
        strands: Strands,
        #[arg(short = 'k')]
        k: usize,
    },
    /// Uniformly random positive braids of length k, one per line
    Sample {
        #[command(flatten)]
        strands: Strands,
        #[arg(short = 'k')]
        k: usize,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// The r-th lex-representative of length k (1-based)
    Unrank {
        #[command(flatten)]
        strands: Strands,
        #[arg(short = 'k')]
        k: usize,
        #[arg(short = 'r')]
        rank: BigUint,
    },
    /// Position of a lex-representative among those of its length
    Rank {
        #[command(flatten)]
        strands: Strands,
        /// Generator indices, e.g. `3 2 1`
        word: Vec<String>,
    },
    /// Length-k lex-representatives extending WORD whose next letter exceeds m
    CountPrefix {
        #[command(flatten)]
        strands: Strands,
        #[arg(short = 'k')]
        k: usize,
        #[arg(short = 'm')]
        m: usize,
        word: Vec<String>,
    },
    /// Whether WORD is a lex-representative, with its forbidden prefixes
    CheckWord {
        #[command(flatten)]
        strands: Strands,
        word: Vec<String>,
    },
    /// The minimal automaton of lex-representatives
    Automaton {
        #[command(flatten)]
        strands: Strands,
        /// Write the automaton as dot or json
        #[arg(long, value_name = "FORMAT")]
        export: Option<String>,
        /// Print the number of accepting states
        #[arg(long)]
        states: bool,
        /// Check that no two states are equivalent
        #[arg(long)]
        check_minimal: bool,
    },
    /// Brute-force reference computations
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Run the acceptance checks and print a pass/fail table
    Verify {
        /// Run only the given check numbers
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// All lex-representatives of length k in order
    Enumerate {
        #[command(flatten)]
        strands: Strands,
        #[arg(short = 'k')]
        k: usize,
    },
    /// The lex-representative of WORD
    Normalize {
        #[command(flatten)]
        strands: Strands,
        word: Vec<String>,
    },
}

fn parse_strands(text: &str) -> Result<StrandCount, String> {
    let n: usize = text
        .parse()
        .map_err(|_| format!("invalid strand count {text:?}"))?;
    StrandCount::new(n).map_err(|e| e.to_string())
}

/// Either a usage problem (exit 1) or a failed computation (exit 2).
enum Failure {
    Usage(String),
    Compute(braidgen::Error),
}

impl From<braidgen::Error> for Failure {
    fn from(e: braidgen::Error) -> Self {
        Failure::Compute(e)
    }
}

type Outcome = Result<String, Failure>;

fn word_arg(tokens: &[String], n: StrandCount) -> Result<ArtinWord, Failure> {
    let text = tokens.join(" ").replace(',', " ");
    parse_word(&text, n).map_err(|e| Failure::Usage(e.to_string()))
}

fn cache_dir(cli: &Cli) -> Option<PathBuf> {
    cli.cache
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .or_else(|| dirs::cache_dir().map(|d| d.join("braidgen")))
}

/// Growth tables from the cache, falling back to computing them in memory
/// when the cache cannot be used.
fn tables(cli: &Cli, n: StrandCount, k: usize) -> Result<GrowthTables, Failure> {
    if let Some(dir) = cache_dir(cli) {
        let path = dir.join(format!("growth-n{}.txt", n.get()));
        match GrowthTables::load_or_build(&path, n, k) {
            Ok(t) => return Ok(t),
            Err(e) if cli.cache.is_some() => return Err(e.into()),
            Err(_) => {}
        }
    }
    Ok(GrowthTables::build(n, k))
}

fn words_output(words: &[ArtinWord], json: bool) -> String {
    if json {
        let list: Vec<&[u16]> = words.iter().map(|w| w.letters()).collect();
        serde_json::to_string(&list).expect("word lists serialize")
    } else {
        words.iter().map(format_word).collect::<Vec<_>>().join("\n")
    }
}

fn run(cli: &Cli) -> Outcome {
    let json = cli.json;
    match &cli.command {
        Command::Count { strands, k } => {
            let g = tables(cli, strands.n, *k)?;
            Ok(g.x(*k).to_string())
        }
        Command::Sample {
            strands,
            k,
            count,
            seed,
        } => {
            let g = tables(cli, strands.n, *k)?;
            let req = SampleRequest::new(strands.n, *k, *count as usize, *seed)?;
            Ok(words_output(&sample(&req, &g)?, json))
        }
        Command::Unrank { strands, k, rank } => {
            let g = tables(cli, strands.n, *k)?;
            Ok(words_output(&[unrank(strands.n, *k, rank, &g)?], json))
        }
        Command::Rank { strands, word } => {
            let w = word_arg(word, strands.n)?;
            let g = tables(cli, strands.n, w.len())?;
            Ok(rank(&w, &g)?.to_string())
        }
        Command::CountPrefix {
            strands,
            k,
            m,
            word,
        } => {
            let w = word_arg(word, strands.n)?;
            let g = tables(cli, strands.n, *k)?;
            Ok(count_with_prefix(*k, &w, *m, &g)?.to_string())
        }
        Command::CheckWord { strands, word } => {
            let w = word_arg(word, strands.n)?;
            let f = f_for_word(&w);
            if json {
                let value = serde_json::json!({
                    "word": w.letters(),
                    "lex_representative": f.is_some(),
                    "function": f.as_ref().map(|f| f.values().to_vec()),
                    "forbidden": f.as_ref().map(|f| f_to_set(f).to_strings()),
                });
                return Ok(value.to_string());
            }
            Ok(match f {
                Some(f) => format!(
                    "lex-representative\nfunction {f}\nforbidden {}",
                    f_to_set(&f)
                ),
                None => "not a lex-representative".to_string(),
            })
        }
        Command::Automaton {
            strands,
            export,
            states,
            check_minimal,
        } => {
            let format = export
                .as_deref()
                .map(|s| s.parse::<ExportFormat>())
                .transpose()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let dfa = build_automaton(strands.n)?;
            let mut lines = Vec::new();
            if *states {
                lines.push(dfa.accepted_states().to_string());
            }
            if *check_minimal {
                lines.push(format!("minimal: {}", dfa.check_minimality()));
            }
            if let Some(format) = format {
                lines.push(dfa.export(format));
            }
            if lines.is_empty() {
                lines.push(format!(
                    "{} accepting states, {} transitions per state",
                    dfa.accepted_states(),
                    strands.n.generators()
                ));
            }
            Ok(lines.join("\n"))
        }
        Command::Oracle { command } => {
            let mut ex = EquivClassExplorer::new(OracleBounds::from_env());
            match command {
                OracleCommand::Enumerate { strands, k } => {
                    Ok(words_output(&ex.enumerate_lex_reps(strands.n, *k)?, json))
                }
                OracleCommand::Normalize { strands, word } => {
                    let w = word_arg(word, strands.n)?;
                    Ok(words_output(&[ex.normalize(&w)?], json))
                }
            }
        }
        Command::Verify { only } => {
            let checks: [fn() -> verify::CheckReport; 8] = [
                verify::check_known_values,
                verify::check_example_chain,
                verify::check_automaton_table,
                verify::check_oracle_equivalence,
                verify::check_uniformity,
                verify::check_bias,
                verify::check_performance,
                verify::check_complement_rules,
            ];
            if let Some(bad) = only.iter().find(|&&i| !(1..=8).contains(&i)) {
                return Err(Failure::Usage(format!("no check numbered {bad}")));
            }
            let mut all_passed = true;
            let mut lines = Vec::new();
            for (i, check) in checks.iter().enumerate() {
                if !only.is_empty() && !only.contains(&(i as u8 + 1)) {
                    continue;
                }
                let report = check();
                all_passed &= report.passed;
                // progress goes out as each check finishes
                println!("{report}");
                lines.push(report);
            }
            if all_passed {
                Ok(String::new())
            } else {
                let failed: Vec<String> = lines
                    .iter()
                    .filter(|r| !r.passed)
                    .map(|r| r.id.to_string())
                    .collect();
                Err(Failure::Compute(braidgen::Error::InvalidRequest(format!(
                    "acceptance checks failed: {}",
                    failed.join(", ")
                ))))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                eprintln!("usage error: missing subcommand, see braidgen --help");
                return ExitCode::from(1);
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("usage error: {}", first.trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(out) => {
            if !out.is_empty() {
                println!("{out}");
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
