use std::io::Write;
use std::path::{Path, PathBuf};

use mpoxdash_core::{ingest_file, Corpus, DatasetSpec, IngestReport};
use serde::Serialize;

use crate::{is_inside, load_config, CmdResult, Ctx, Failure, EXIT_DATA, EXIT_OK};

#[derive(Debug, Default, Serialize)]
struct Totals {
    records_read: u64,
    matched: u64,
    unmatched: u64,
    malformed: u64,
    duplicates_skipped: u64,
    appended: u64,
}

impl Totals {
    fn add(&mut self, r: &IngestReport) {
        self.records_read += r.records_read;
        self.matched += r.matched;
        self.unmatched += r.unmatched;
        self.malformed += r.malformed;
        self.duplicates_skipped += r.duplicates_skipped;
        self.appended += r.appended();
    }
}

#[derive(Debug, Serialize)]
struct FileFailure {
    file: String,
    error: String,
}

#[derive(Debug, Serialize)]
struct Output {
    reports: Vec<IngestReport>,
    failures: Vec<FileFailure>,
    totals: Totals,
    corpus_total: usize,
}

/// The configured spec for `path` when there is one, so its format and column
/// overrides apply; otherwise a bare spec.
fn spec_for(path: &Path, configured: &[DatasetSpec]) -> DatasetSpec {
    let abs = |p: &Path| std::path::absolute(p).unwrap_or_else(|_| p.to_path_buf());
    let want = abs(path);
    configured
        .iter()
        .find(|s| abs(&s.path) == want)
        .cloned()
        .map(|s| DatasetSpec {
            path: path.to_path_buf(),
            ..s
        })
        .unwrap_or_else(|| DatasetSpec::new(path))
}

pub(crate) fn run(ctx: &mut Ctx, config_path: &Path, paths: &[PathBuf]) -> CmdResult {
    let config = load_config(config_path)?;
    let specs: Vec<DatasetSpec> = if paths.is_empty() {
        config.datasets.clone()
    } else {
        paths.iter().map(|p| spec_for(p, &config.datasets)).collect()
    };
    if specs.is_empty() {
        return Err(Failure::usage(
            "error: no input files given and no [[datasets]] in the config",
        ));
    }
    let mut corpus = Corpus::open_writable(&config.corpus_path)
        .map_err(|e| Failure::data(format!("error: {e}")))?;

    let mut out = Output {
        reports: Vec::new(),
        failures: Vec::new(),
        totals: Totals::default(),
        corpus_total: 0,
    };
    for spec in &specs {
        let file = spec.path.display().to_string();
        if is_inside(&spec.path, &config.corpus_path) {
            out.failures.push(FileFailure {
                file,
                error: "refusing to ingest a file from inside the corpus store".into(),
            });
            continue;
        }
        match ingest_file(spec, &config.ingest, &mut corpus) {
            Ok(report) => {
                out.totals.add(&report);
                out.reports.push(report);
            }
            Err(e) => out.failures.push(FileFailure {
                file,
                error: e.to_string(),
            }),
        }
    }
    out.corpus_total = corpus.len();

    for f in &out.failures {
        writeln!(ctx.err, "error: {}: {}", f.file, f.error)?;
    }
    if ctx.json {
        ctx.emit_json(&out)?;
    } else {
        print_table(ctx.out, &out)?;
    }
    Ok(if out.failures.is_empty() { EXIT_OK } else { EXIT_DATA })
}

fn print_table(w: &mut dyn Write, out: &Output) -> std::io::Result<()> {
    let width = out
        .reports
        .iter()
        .map(|r| r.file.chars().count())
        .chain(out.failures.iter().map(|f| f.file.chars().count()))
        .chain(["file".len(), "total".len()])
        .max()
        .unwrap_or(4);
    writeln!(
        w,
        "{:<width$}  {:<14}  {:>8}  {:>8}  {:>9}  {:>9}  {:>10}  {:>8}",
        "file", "format", "read", "matched", "unmatched", "malformed", "duplicates", "appended"
    )?;
    for r in &out.reports {
        let format = r.format.map(|f| f.as_str()).unwrap_or("-");
        writeln!(
            w,
            "{:<width$}  {:<14}  {:>8}  {:>8}  {:>9}  {:>9}  {:>10}  {:>8}",
            r.file,
            format,
            r.records_read,
            r.matched,
            r.unmatched,
            r.malformed,
            r.duplicates_skipped,
            r.appended()
        )?;
    }
    for f in &out.failures {
        writeln!(w, "{:<width$}  FAILED: {}", f.file, f.error)?;
    }
    let t = &out.totals;
    writeln!(
        w,
        "{:<width$}  {:<14}  {:>8}  {:>8}  {:>9}  {:>9}  {:>10}  {:>8}",
        "total", "", t.records_read, t.matched, t.unmatched, t.malformed, t.duplicates_skipped, t.appended
    )?;
    writeln!(w, "corpus total: {}", out.corpus_total)
}
