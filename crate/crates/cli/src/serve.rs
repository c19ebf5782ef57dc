use std::path::Path;

use mpoxdash_server::{serve, shutdown_signal, AppState};
use serde_json::json;

use crate::{load_config, CmdResult, Ctx, Failure, EXIT_OK};

pub(crate) fn run(ctx: &mut Ctx, config_path: &Path, bind_override: Option<&str>) -> CmdResult {
    let mut config = load_config(config_path)?;
    if let Some(bind) = bind_override {
        config
            .override_bind(bind)
            .map_err(|e| Failure::usage(format!("error: {e}")))?;
    }
    let bind = config.bind.clone();
    let state = AppState::load(config)
        .map_err(|e| Failure::usage(format!("error: config key `corpus_path`: {e}")))?;

    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| Failure::usage(format!("error: cannot start runtime: {e}")))?;
    let listener = runtime
        .block_on(tokio::net::TcpListener::bind(&bind))
        .map_err(|e| Failure::usage(format!("error: config key `bind`: cannot listen on {bind}: {e}")))?;
    let addr = listener
        .local_addr()
        .map_err(|e| Failure::usage(format!("error: config key `bind`: {e}")))?;

    let total = state.current().snapshot.len();
    if ctx.json {
        let line = json!({"event": "listening", "addr": addr.to_string(), "corpus_total": total});
        writeln!(ctx.out, "{line}")?;
        ctx.out.flush()?;
    }
    writeln!(ctx.err, "listening on http://{addr} ({total} tweets)")?;
    ctx.err.flush()?;

    runtime
        .block_on(serve(listener, state, shutdown_signal()))
        .map_err(|e| Failure::usage(format!("error: server failed: {e}")))?;
    writeln!(ctx.err, "shut down")?;
    Ok(EXIT_OK)
}
