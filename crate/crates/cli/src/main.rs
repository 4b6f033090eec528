mod config;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use walkdir::WalkDir;

use xcas_core::engine::{self, OutputFormat, SearchRequest};
use xcas_core::index::{ContextIndex, PostingCodec};
use xcas_core::ingest::{parse_document, DocumentTree, IngestConfig};
use xcas_core::nexi::{read_topic_file, ContentMode, Interpretation, Strategy};
use xcas_core::path_sim::CostMatrix;

use config::CliConfig;

const DEFAULT_INDEX: &str = "xcas-index";

#[derive(Parser)]
#[command(name = "xcas", version, about = "Structured search over XML collections")]
struct Cli {
    /// TOML file with default settings
    #[arg(long, global = true, env = "XCAS_CONFIG")]
    config: Option<PathBuf>,
    /// More log output (repeatable)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct IndexLocation {
    /// Index directory
    #[arg(long, env = "XCAS_INDEX")]
    index: Option<PathBuf>,
    /// Stopword and tag-class settings used for indexing and queries
    #[arg(long)]
    ingest_config: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct QueryFlags {
    /// co, vv, vs, sv or ss (target vagueness first, then support)
    #[arg(long)]
    strategy: Option<Interpretation>,
    /// How phrases are matched: seq or sameplus
    #[arg(long)]
    phrases: Option<ContentMode>,
    /// Weight of structural similarity in vague clauses
    #[arg(long, value_parser = parse_beta)]
    beta: Option<f64>,
    /// Structural edit costs, e.g. "delete=0 insert=1 substitute=1"
    #[arg(long)]
    costs: Option<CostMatrix>,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index from XML files and directories
    Index {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        location: IndexLocation,
        /// Replace an existing index
        #[arg(long)]
        force: bool,
        /// Posting list encoding: delta or plain
        #[arg(long, default_value = "delta", value_parser = parse_codec)]
        codec: PostingCodec,
    },
    /// Run a NEXI topic or s-expression query
    Search {
        /// Query text, or a file holding one (INEX topic files are accepted)
        query: String,
        #[command(flatten)]
        location: IndexLocation,
        #[command(flatten)]
        flags: QueryFlags,
        /// Number of results to keep
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        top: Option<u64>,
        /// Overlap-free results
        #[arg(long)]
        focused: bool,
        /// Print the operator tree and exit
        #[arg(long, conflicts_with_all = ["explain", "focused", "top", "format"])]
        emit_query: bool,
        /// Explain the score of DOC:/PATH instead of listing results
        #[arg(long, value_name = "ELEMENT", conflicts_with_all = ["format", "top"])]
        explain: Option<String>,
        /// table, tsv or inex
        #[arg(long)]
        format: Option<OutputFormat>,
        /// Topic id for the inex format
        #[arg(long)]
        topic_id: Option<String>,
        /// Report evaluation time on stderr
        #[arg(long)]
        timing: bool,
    },
    /// Explain how a query scores one element
    Explain {
        query: String,
        /// Document locator as listed in results
        doc: String,
        /// Element path as listed in results, e.g. /article[1]/sec[2]
        path: String,
        #[command(flatten)]
        location: IndexLocation,
        #[command(flatten)]
        flags: QueryFlags,
    },
    /// Corpus statistics of an index
    Stats {
        #[command(flatten)]
        location: IndexLocation,
    },
}

fn parse_beta(s: &str) -> Result<f64, String> {
    let b: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..=1.0).contains(&b) {
        Ok(b)
    } else {
        Err(format!("beta must be within [0, 1], got {b}"))
    }
}

fn parse_codec(s: &str) -> Result<PostingCodec, String> {
    match s {
        "delta" => Ok(PostingCodec::Delta),
        "plain" => Ok(PostingCodec::Plain),
        _ => Err(format!("unknown codec {s:?} (expected delta or plain)")),
    }
}

enum Failure {
    Usage(String),
    Data(String),
}

fn data<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Data(e.to_string())
}

struct Settings {
    file: CliConfig,
}

impl Settings {
    fn index_dir(&self, loc: &IndexLocation) -> PathBuf {
        loc.index
            .clone()
            .or_else(|| self.file.index.clone())
            .unwrap_or_else(|| PathBuf::from(DEFAULT_INDEX))
    }

    fn ingest(&self, loc: &IndexLocation) -> Result<IngestConfig, Failure> {
        match loc.ingest_config.as_ref().or(self.file.ingest_config.as_ref()) {
            Some(p) => IngestConfig::from_file(p).map_err(data),
            None => Ok(IngestConfig::default()),
        }
    }

    fn strategy(&self, flags: &QueryFlags) -> Result<Strategy, Failure> {
        let mut s = Strategy::default();
        if let Some(i) = flags.strategy {
            s.interpretation = i;
        } else if let Some(i) = &self.file.strategy {
            s.interpretation = i.parse().map_err(Failure::Usage)?;
        }
        if let Some(m) = flags.phrases {
            s.mode = m;
        } else if let Some(m) = &self.file.phrases {
            s.mode = m.parse().map_err(Failure::Usage)?;
        }
        if let Some(b) = flags.beta.or(self.file.beta) {
            s.beta = b;
        }
        Ok(s)
    }

    fn request(&self, query: &str, flags: &QueryFlags) -> Result<(SearchRequest, Option<String>), Failure> {
        let (text, topic_id) = query_text(query)?;
        let mut req = SearchRequest::new(text);
        req.strategy = self.strategy(flags)?;
        if let Some(top) = self.file.top {
            req.cutoff = top;
        }
        if let Some(c) = &flags.costs {
            req.costs = c.clone();
        }
        Ok((req, topic_id))
    }
}

/// Query text given inline or read from a file; topic files yield their castitle.
fn query_text(arg: &str) -> Result<(String, Option<String>), Failure> {
    let path = Path::new(arg);
    if !path.is_file() {
        return Ok((arg.to_string(), None));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    if text.contains("<castitle") {
        let (id, castitle) = read_topic_file(&text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
        Ok((castitle, id))
    } else {
        Ok((text.trim().to_string(), None))
    }
}

fn open_index(dir: &Path) -> Result<ContextIndex, Failure> {
    ContextIndex::open(dir).map_err(data)
}

fn collect_inputs(inputs: &[PathBuf]) -> Result<Vec<(String, PathBuf)>, Failure> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            for entry in WalkDir::new(input).sort_by_file_name() {
                let entry = entry.map_err(data)?;
                let p = entry.path();
                if entry.file_type().is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("xml")) {
                    let locator = p.strip_prefix(input).unwrap_or(p).to_string_lossy().replace('\\', "/");
                    files.push((locator, p.to_path_buf()));
                }
            }
        } else if input.is_file() {
            files.push((input.to_string_lossy().into_owned(), input.clone()));
        } else {
            return Err(Failure::Data(format!("{}: no such file or directory", input.display())));
        }
    }
    Ok(files)
}

fn fmt_ms(d: Duration) -> String {
    format!("{:.1} ms", d.as_secs_f64() * 1000.0)
}

fn cmd_index(
    settings: &Settings,
    inputs: &[PathBuf],
    loc: &IndexLocation,
    force: bool,
    codec: PostingCodec,
) -> Result<(), Failure> {
    let dir = settings.index_dir(loc);
    let config = settings.ingest(loc)?;
    if dir.exists() {
        if !force {
            return Err(Failure::Data(format!(
                "index directory {} already exists (use --force to replace it)",
                dir.display()
            )));
        }
        if !dir.join("VERSION").is_file() {
            return Err(Failure::Data(format!("{} does not look like an index; not replacing it", dir.display())));
        }
    }

    let t = Instant::now();
    let files = collect_inputs(inputs)?;
    let walk = t.elapsed();

    let t = Instant::now();
    let parsed: Vec<Option<(String, DocumentTree)>> = files
        .par_iter()
        .map(|(locator, path)| {
            let bytes = match std::fs::read(path) {
                Ok(b) => b,
                Err(e) => {
                    log::warn!("skipping {}: {e}", path.display());
                    return None;
                }
            };
            match parse_document(locator, &bytes, &config) {
                Ok(tree) => Some((locator.clone(), tree)),
                Err(e) => {
                    log::warn!("skipping {}: {e}", path.display());
                    None
                }
            }
        })
        .collect();
    let parse = t.elapsed();

    let t = Instant::now();
    let mut index = ContextIndex::with_tag_classes(config.tag_classes.clone());
    let mut skipped = 0;
    for item in &parsed {
        match item {
            Some((locator, tree)) => {
                if let Err(e) = index.index_document(tree) {
                    log::warn!("skipping {locator}: {e}");
                    skipped += 1;
                }
            }
            None => skipped += 1,
        }
    }
    let build = t.elapsed();
    if index.doc_count() == 0 {
        return Err(Failure::Data(if files.is_empty() {
            "no documents: no .xml files found".to_string()
        } else {
            format!("no documents: all {} files failed", files.len())
        }));
    }

    let t = Instant::now();
    if dir.exists() {
        std::fs::remove_dir_all(&dir).map_err(|e| Failure::Data(format!("{}: {e}", dir.display())))?;
    }
    index.commit_with(&dir, codec).map_err(data)?;
    let commit = t.elapsed();

    println!("files:     {} ({} skipped)", files.len(), skipped);
    println!("documents: {}", index.doc_count());
    println!("terms:     {}", index.term_count());
    println!("contexts:  {}", index.dictionary().len());
    println!("walk {}, parse {}, index {}, commit {}", fmt_ms(walk), fmt_ms(parse), fmt_ms(build), fmt_ms(commit));
    Ok(())
}

fn cmd_stats(settings: &Settings, loc: &IndexLocation) -> Result<(), Failure> {
    let index = open_index(&settings.index_dir(loc))?;
    let dict = index.dictionary();
    let lengths: Vec<usize> = dict.iter().map(|(_, p)| p.len()).collect();
    let tags: BTreeSet<&str> = dict.iter().flat_map(|(_, p)| p.tags().iter().map(String::as_str)).collect();
    let postings: usize = index.terms().map(|(_, p)| p.len()).sum();
    let mean = if lengths.is_empty() {
        0.0
    } else {
        lengths.iter().sum::<usize>() as f64 / lengths.len() as f64
    };
    println!("documents:          {}", index.doc_count());
    println!("terms:              {}", index.term_count());
    println!("postings:           {postings}");
    println!("element names:      {}", tags.len());
    println!("contexts:           {}", dict.len());
    println!("max context length: {}", lengths.iter().max().copied().unwrap_or(0));
    println!("mean context length: {mean:.4}");
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    settings: &Settings,
    query: &str,
    loc: &IndexLocation,
    flags: &QueryFlags,
    top: Option<u64>,
    focused: bool,
    emit_query: bool,
    explain: Option<&str>,
    format: Option<OutputFormat>,
    topic_id: Option<&str>,
    timing: bool,
) -> Result<(), Failure> {
    let config = settings.ingest(loc)?;
    let (mut req, file_topic) = settings.request(query, flags)?;
    if let Some(t) = top {
        req.cutoff = t as usize;
    }
    req.focused = focused;
    if emit_query {
        println!("{}", engine::compile(&req, &config).map_err(data)?);
        return Ok(());
    }
    if let Some(element) = explain {
        let (doc, path) = element
            .rsplit_once(":/")
            .ok_or_else(|| Failure::Usage(format!("--explain expects DOC:/PATH, got {element:?}")))?;
        return run_explain(settings, &req, loc, &config, doc, &format!("/{path}"));
    }
    let index = open_index(&settings.index_dir(loc))?;
    let t = Instant::now();
    let list = engine::search(&index, &req, &config).map_err(data)?;
    let elapsed = t.elapsed();
    let topic = topic_id.map(str::to_string).or(file_topic).unwrap_or_else(|| "0".into());
    print!("{}", engine::render(&list, format.unwrap_or_default(), &topic));
    if timing {
        eprintln!("time: {} for {} results", fmt_ms(elapsed), list.len());
    }
    Ok(())
}

fn run_explain(
    settings: &Settings,
    req: &SearchRequest,
    loc: &IndexLocation,
    config: &IngestConfig,
    doc: &str,
    path: &str,
) -> Result<(), Failure> {
    let index = open_index(&settings.index_dir(loc))?;
    let e = engine::explain(&index, req, config, doc, path).map_err(data)?;
    print!("{e}");
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let file = match &cli.config {
        Some(p) => CliConfig::load(p).map_err(Failure::Usage)?,
        None => CliConfig::default(),
    };
    let level = match cli.verbose {
        0 => file.log.clone().unwrap_or_else(|| "warn".into()),
        1 => "info".into(),
        2 => "debug".into(),
        _ => "trace".into(),
    };
    let _ = env_logger::Builder::new().parse_filters(&level).format_timestamp(None).try_init();
    let settings = Settings { file };
    match &cli.command {
        Command::Index {
            inputs,
            location,
            force,
            codec,
        } => cmd_index(&settings, inputs, location, *force, *codec),
        Command::Search {
            query,
            location,
            flags,
            top,
            focused,
            emit_query,
            explain,
            format,
            topic_id,
            timing,
        } => cmd_search(
            &settings,
            query,
            location,
            flags,
            *top,
            *focused,
            *emit_query,
            explain.as_deref(),
            *format,
            topic_id.as_deref(),
            *timing,
        ),
        Command::Explain {
            query,
            doc,
            path,
            location,
            flags,
        } => {
            let config = settings.ingest(location)?;
            let (req, _) = settings.request(query, flags)?;
            run_explain(&settings, &req, location, &config, doc, path)
        }
        Command::Stats { location } => cmd_stats(&settings, location),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
