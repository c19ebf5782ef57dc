use std::sync::{Arc, RwLock};

use mpoxdash_core::{Config, Corpus, CorpusError, Index, Snapshot};

/// One served generation: snapshot, its index and its id.
#[derive(Debug)]
pub struct Loaded {
    pub snapshot: Snapshot,
    pub index: Index,
    /// The corpus ids digest; changes whenever membership does.
    pub snapshot_id: String,
}

impl Loaded {
    fn open(config: &Config) -> Result<Self, CorpusError> {
        let snapshot = Corpus::open(&config.corpus_path)?.snapshot();
        let index = Index::build(&snapshot);
        let snapshot_id = snapshot.ids_digest().to_string();
        Ok(Loaded {
            snapshot,
            index,
            snapshot_id,
        })
    }
}

#[derive(Debug)]
pub struct AppState {
    config: Config,
    current: RwLock<Arc<Loaded>>,
}

impl AppState {
    pub fn load(config: Config) -> Result<Arc<Self>, CorpusError> {
        let loaded = Loaded::open(&config)?;
        Ok(Arc::new(AppState {
            config,
            current: RwLock::new(Arc::new(loaded)),
        }))
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    /// The snapshot a request should use for its whole lifetime.
    pub fn current(&self) -> Arc<Loaded> {
        self.current.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    /// Re-opens the corpus and swaps the new generation in. Requests holding
    /// the old one keep it; on error the old one stays current.
    pub fn reload(&self) -> Result<(Arc<Loaded>, Arc<Loaded>), CorpusError> {
        let fresh = Arc::new(Loaded::open(&self.config)?);
        let mut slot = self.current.write().unwrap_or_else(|e| e.into_inner());
        let old = std::mem::replace(&mut *slot, fresh.clone());
        Ok((old, fresh))
    }
}
