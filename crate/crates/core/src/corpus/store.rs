use std::collections::BTreeSet;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{CorpusError, Snapshot};
use crate::model::Tweet;

pub const DATA_FILE: &str = "tweets.ndjson";
pub const MANIFEST_FILE: &str = "manifest.json";
const LOCK_FILE: &str = "LOCK";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub record_count: u64,
    pub ids_digest: String,
    pub format_version: u32,
}

/// Hex SHA-256 over ids in ascending order, each terminated by `\n`.
pub fn ids_digest<'a, I>(sorted_ids: I) -> String
where
    I: IntoIterator<Item = &'a str>,
{
    let mut hasher = Sha256::new();
    for id in sorted_ids {
        hasher.update(id.as_bytes());
        hasher.update(b"\n");
    }
    hex::encode(hasher.finalize())
}

/// An open corpus store.
///
/// Any number of read-only handles may coexist; a writable handle holds an
/// exclusive lock on the directory for its lifetime.
#[derive(Debug)]
pub struct Corpus {
    dir: PathBuf,
    tweets: Vec<Tweet>,
    ids: BTreeSet<String>,
    lock: Option<File>,
}

impl Corpus {
    /// Loads the store read-only. A missing directory is an empty corpus.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, CorpusError> {
        let dir = dir.as_ref().to_path_buf();
        let (tweets, ids) = load(&dir)?;
        Ok(Corpus {
            dir,
            tweets,
            ids,
            lock: None,
        })
    }

    /// Opens for appending, creating the directory if needed.
    pub fn open_writable(dir: impl AsRef<Path>) -> Result<Self, CorpusError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).map_err(CorpusError::io(&dir))?;
        let lock_path = dir.join(LOCK_FILE);
        let lock = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&lock_path)
            .map_err(CorpusError::io(&lock_path))?;
        match lock.try_lock() {
            Ok(()) => {}
            Err(fs::TryLockError::WouldBlock) => return Err(CorpusError::Locked(dir)),
            Err(fs::TryLockError::Error(e)) => return Err(CorpusError::io(&lock_path)(e)),
        }
        let (tweets, ids) = load(&dir)?;
        Ok(Corpus {
            dir,
            tweets,
            ids,
            lock: Some(lock),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn data_path(&self) -> PathBuf {
        self.dir.join(DATA_FILE)
    }

    pub fn len(&self) -> usize {
        self.tweets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tweets.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.ids.contains(id)
    }

    /// Tweets in append order.
    pub fn tweets(&self) -> &[Tweet] {
        &self.tweets
    }

    pub fn ids_digest(&self) -> String {
        ids_digest(self.ids.iter().map(String::as_str))
    }

    pub fn manifest(&self) -> Manifest {
        Manifest {
            record_count: self.tweets.len() as u64,
            ids_digest: self.ids_digest(),
            format_version: FORMAT_VERSION,
        }
    }

    /// Appends tweets whose ids are not yet stored and returns how many were
    /// written. Data and manifest are synced to disk before returning.
    pub fn append<I>(&mut self, tweets: I) -> Result<usize, CorpusError>
    where
        I: IntoIterator<Item = Tweet>,
    {
        if self.lock.is_none() {
            return Err(CorpusError::ReadOnly);
        }
        let fresh: Vec<Tweet> = tweets
            .into_iter()
            .filter(|t| self.ids.insert(t.id.clone()))
            .collect();
        if fresh.is_empty() {
            return Ok(0);
        }

        let data_path = self.data_path();
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&data_path)
            .map_err(CorpusError::io(&data_path))?;
        let mut out = BufWriter::new(file);
        for t in &fresh {
            serde_json::to_writer(&mut out, t).map_err(|e| CorpusError::io(&data_path)(e.into()))?;
            out.write_all(b"\n").map_err(CorpusError::io(&data_path))?;
        }
        let file = out
            .into_inner()
            .map_err(|e| CorpusError::io(&data_path)(e.into_error()))?;
        file.sync_data().map_err(CorpusError::io(&data_path))?;

        let n = fresh.len();
        self.tweets.extend(fresh);
        self.write_manifest()?;
        Ok(n)
    }

    fn write_manifest(&self) -> Result<(), CorpusError> {
        let path = self.dir.join(MANIFEST_FILE);
        let tmp = self.dir.join(format!("{MANIFEST_FILE}.tmp"));
        let body = serde_json::to_vec(&self.manifest()).expect("manifest serializes");
        let mut f = File::create(&tmp).map_err(CorpusError::io(&tmp))?;
        f.write_all(&body).map_err(CorpusError::io(&tmp))?;
        f.sync_all().map_err(CorpusError::io(&tmp))?;
        fs::rename(&tmp, &path).map_err(CorpusError::io(&path))
    }

    /// Immutable, sorted view of the current contents.
    pub fn snapshot(&self) -> Snapshot {
        Snapshot::new(self.tweets.clone(), self.ids_digest())
    }
}

fn corrupt(dir: &Path, reason: impl Into<String>) -> CorpusError {
    CorpusError::StoreCorrupt {
        path: dir.to_path_buf(),
        reason: reason.into(),
    }
}

fn load(dir: &Path) -> Result<(Vec<Tweet>, BTreeSet<String>), CorpusError> {
    let data_path = dir.join(DATA_FILE);
    let manifest_path = dir.join(MANIFEST_FILE);

    let manifest = match fs::read(&manifest_path) {
        Ok(bytes) => Some(
            serde_json::from_slice::<Manifest>(&bytes)
                .map_err(|e| corrupt(dir, format!("unreadable manifest: {e}")))?,
        ),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
        Err(e) => return Err(CorpusError::io(&manifest_path)(e)),
    };
    if let Some(m) = &manifest {
        if m.format_version != FORMAT_VERSION {
            return Err(corrupt(
                dir,
                format!("unsupported format_version {}", m.format_version),
            ));
        }
    }

    let mut tweets = Vec::new();
    let mut ids = BTreeSet::new();
    match File::open(&data_path) {
        Ok(f) => {
            let reader = BufReader::new(f);
            for (lineno, line) in reader.lines().enumerate() {
                let line = line.map_err(CorpusError::io(&data_path))?;
                if line.is_empty() {
                    continue;
                }
                let tweet: Tweet = serde_json::from_str(&line)
                    .map_err(|e| corrupt(dir, format!("line {}: {e}", lineno + 1)))?;
                if !ids.insert(tweet.id.clone()) {
                    return Err(corrupt(
                        dir,
                        format!("line {}: duplicate id {}", lineno + 1, tweet.id),
                    ));
                }
                tweets.push(tweet);
            }
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
        Err(e) => return Err(CorpusError::io(&data_path)(e)),
    }

    match manifest {
        None if tweets.is_empty() => {}
        None => return Err(corrupt(dir, "data present but manifest missing")),
        Some(m) => {
            if m.record_count != tweets.len() as u64 {
                return Err(corrupt(
                    dir,
                    format!(
                        "manifest records {} but data holds {}",
                        m.record_count,
                        tweets.len()
                    ),
                ));
            }
            let digest = ids_digest(ids.iter().map(String::as_str));
            if m.ids_digest != digest {
                return Err(corrupt(dir, "ids_digest mismatch"));
            }
        }
    }
    Ok((tweets, ids))
}
