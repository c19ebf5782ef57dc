#![allow(dead_code)]

use std::path::{Path, PathBuf};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

pub const CSV_COLUMNS: &str = r#"{ id = "tweet_id", created_at = "date", text = "tweet", like_count = "likes", reply_count = "replies", retweet_count = "retweets", location = "user_location", author_handle = "username", lang = "language" }"#;

/// A temp dir holding a config whose corpus lives at `<dir>/corpus`.
pub struct Workspace {
    pub dir: tempfile::TempDir,
    pub config: PathBuf,
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    pub fn json(&self) -> serde_json::Value {
        serde_json::from_str(&self.stdout)
            .unwrap_or_else(|e| panic!("stdout is not JSON ({e}):\n{}", self.stdout))
    }
}

impl Workspace {
    /// Config with the three fixture datasets and the given extra TOML.
    pub fn with_fixtures(extra: &str) -> Self {
        let datasets = format!(
            "[[datasets]]\npath = {:?}\n\n[[datasets]]\npath = {:?}\ncolumn_map = {}\n\n[[datasets]]\npath = {:?}\n",
            fixture("stream_sample.ndjson"),
            fixture("hydrated.csv"),
            CSV_COLUMNS,
            fixture("capture.ndjson"),
        );
        Self::new(&format!("{extra}\n{datasets}"))
    }

    /// Config `corpus_path = "corpus"`, keywords mpox/monkeypox, plus `body`.
    pub fn new(body: &str) -> Self {
        let dir = tempfile::tempdir().unwrap();
        let config = dir.path().join("mpoxdash.toml");
        let text = format!("corpus_path = \"corpus\"\nkeywords = [\"mpox\", \"monkeypox\"]\n{body}");
        std::fs::write(&config, text).unwrap();
        Workspace { dir, config }
    }

    pub fn path(&self, rel: &str) -> PathBuf {
        self.dir.path().join(rel)
    }

    pub fn corpus(&self) -> PathBuf {
        self.path("corpus")
    }

    /// Runs `mpoxdash <args> --config <this config>` in-process.
    pub fn run(&self, args: &[&str]) -> Outcome {
        let mut argv: Vec<String> = vec!["mpoxdash".into()];
        argv.extend(args.iter().map(|s| s.to_string()));
        argv.push("--config".into());
        argv.push(self.config.display().to_string());
        run_raw(&argv)
    }
}

pub fn run_raw<S: AsRef<str>>(argv: &[S]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = mpoxdash_cli::run(argv.iter().map(|s| s.as_ref().to_string()), &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}
