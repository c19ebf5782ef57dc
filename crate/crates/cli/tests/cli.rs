mod common;

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpStream;
use std::process::{Command, Stdio};

use common::{fixture, run_raw, Workspace};
use mpoxdash_core::{daily_cluster_proportions, Config, Corpus, DayRange, Snapshot};

#[test]
fn help_and_usage_exit_codes() {
    assert_eq!(run_raw(&["mpoxdash", "--help"]).code, 0);
    assert_eq!(run_raw(&["mpoxdash", "ingest", "--help"]).code, 0);
    assert_eq!(run_raw(&["mpoxdash"]).code, 1);
    assert_eq!(run_raw(&["mpoxdash", "bogus"]).code, 1);
    let r = run_raw(&["mpoxdash", "check"]);
    assert_eq!(r.code, 1, "--config is required");
    assert!(r.stderr.contains("--config"));
}

#[test]
fn unreadable_or_invalid_config_exits_1() {
    let r = run_raw(&["mpoxdash", "check", "--config", "/nonexistent/mpoxdash.toml"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("cannot read config"), "{}", r.stderr);

    let ws = Workspace::new("per_page_max = 5000\n");
    let r = ws.run(&["check"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("per_page_max"), "{}", r.stderr);
}

#[test]
fn ingest_three_fixtures_table_and_json_agree() {
    let ws = Workspace::with_fixtures("");
    let human = ws.run(&["ingest"]);
    assert_eq!(human.code, 0, "{}", human.stderr);
    let lines: Vec<&str> = human.stdout.lines().collect();
    assert_eq!(lines.len(), 1 + 3 + 1 + 1, "{}", human.stdout);
    assert!(lines[1].contains("stream_sample.ndjson") && lines[1].contains("stream_sample"));
    let total: Vec<&str> = lines[4].split_whitespace().collect();
    assert_eq!(total, ["total", "370", "349", "18", "3", "0", "349"]);
    assert_eq!(lines[5], "corpus total: 349");

    // Same inputs into a fresh corpus, JSON this time.
    let ws2 = Workspace::with_fixtures("");
    let json = ws2.run(&["ingest", "--json"]).json();
    let reports = json["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 3);
    let s = &reports[0];
    let got = ["records_read", "matched", "unmatched", "malformed"].map(|k| s[k].as_u64().unwrap());
    assert_eq!(got, [20, 5, 13, 2]);
    let t = &json["totals"];
    assert_eq!(
        [&t["records_read"], &t["matched"], &t["unmatched"], &t["malformed"], &t["duplicates_skipped"], &t["appended"]]
            .map(|v| v.as_u64().unwrap()),
        [370, 349, 18, 3, 0, 349]
    );
    assert_eq!(json["corpus_total"], 349);
    assert_eq!(json["failures"], serde_json::json!([]));
}

#[test]
fn missing_file_exits_2_others_processed() {
    let ws = Workspace::new("");
    let missing = ws.path("nope.ndjson");
    let r = ws.run(&[
        "ingest",
        "--json",
        fixture("stream_sample.ndjson").to_str().unwrap(),
        missing.to_str().unwrap(),
        fixture("capture.ndjson").to_str().unwrap(),
    ]);
    assert_eq!(r.code, 2);
    let json = r.json();
    assert_eq!(json["reports"].as_array().unwrap().len(), 2);
    assert_eq!(json["failures"].as_array().unwrap().len(), 1);
    assert_eq!(json["corpus_total"], 305);
    assert!(r.stderr.contains("nope.ndjson"));
}

#[test]
fn explicit_path_uses_configured_column_map() {
    let ws = Workspace::with_fixtures("");
    let r = ws.run(&["ingest", "--json", fixture("hydrated.csv").to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["totals"]["matched"], 44);
}

#[test]
fn reingest_appends_nothing() {
    let ws = Workspace::with_fixtures("");
    assert_eq!(ws.run(&["ingest"]).code, 0);
    let again = ws.run(&["ingest", "--json"]).json();
    assert_eq!(again["totals"]["appended"], 0);
    assert_eq!(again["totals"]["duplicates_skipped"], 349);
    assert_eq!(again["corpus_total"], 349);
}

#[test]
fn ingest_refuses_store_files() {
    let ws = Workspace::with_fixtures("");
    ws.run(&["ingest"]);
    let store_file = ws.corpus().join("tweets.ndjson");
    let r = ws.run(&["ingest", store_file.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("inside the corpus store"), "{}", r.stderr);
}

#[test]
fn export_round_trip_and_guards() {
    let ws = Workspace::with_fixtures("");
    ws.run(&["ingest"]);
    let out = ws.path("export.ndjson");
    let r = ws.run(&["export", "--out", out.to_str().unwrap(), "--json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["exported"], 349);

    let fresh = Workspace::new("");
    let r = fresh.run(&["ingest", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let a = Corpus::open(ws.corpus()).unwrap();
    let b = Corpus::open(fresh.corpus()).unwrap();
    assert_eq!(a.snapshot().stats(), b.snapshot().stats());
    assert_eq!(a.ids_digest(), b.ids_digest());
    let (ta, tb) = (a.snapshot(), b.snapshot());
    for (x, y) in ta.tweets().iter().zip(tb.tweets()) {
        assert_eq!((&x.id, &x.text, x.created_at, &x.engagement, &x.location), (&y.id, &y.text, y.created_at, &y.engagement, &y.location));
    }

    // Empty range: empty file, success.
    let empty = ws.path("empty.ndjson");
    let r = ws.run(&["export", "--from", "1999-01-01", "--to", "1999-01-31", "--out", empty.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert_eq!(std::fs::read(&empty).unwrap(), b"");

    // Subrange.
    let may = ws.path("may.ndjson");
    let r = ws.run(&["export", "--from", "2022-05-01", "--to", "2022-05-31", "--out", may.to_str().unwrap(), "--json"]);
    assert_eq!(r.json()["exported"], 44);

    let r = ws.run(&["export", "--out", ws.corpus().join("copy.ndjson").to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("inside the corpus store"));
    assert!(!ws.corpus().join("copy.ndjson").exists());

    let r = ws.run(&["export", "--from", "2024-02-01", "--to", "2024-01-01", "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    let r = ws.run(&["export", "--from", "yesterday", "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    let r = ws.run(&["export", "--out", ws.path("no/such/dir/x.ndjson").to_str().unwrap()]);
    assert_eq!(r.code, 1);
}

fn toy_label_workspace() -> Workspace {
    let ws = Workspace::new(
        "[sentiment]\nlexicon_path = \"sent.tsv\"\ntau = 0.1\n\n\
         [[topics]]\nlabel = \"cynicism\"\nlexicon_path = \"cyn.txt\"\n\n\
         [[topics]]\nlabel = \"misinformation\"\nlexicon_path = \"misinfo.txt\"\n",
    );
    std::fs::write(ws.path("misinfo.txt"), "# toy\nhoax\n").unwrap();
    std::fs::write(ws.path("cyn.txt"), "scam\n").unwrap();
    std::fs::write(ws.path("sent.tsv"), "great\t1\nhoax\t-1\n").unwrap();
    ws
}

#[test]
fn label_text_explains_matches() {
    let ws = toy_label_workspace();
    let r = ws.run(&["label", "--text", "total hoax", "--json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let j = r.json();
    assert_eq!(j["cluster_label"], "misinformation");
    assert_eq!(j["topics"]["topics"][1]["matched"], serde_json::json!(["hoax"]));
    assert_eq!(j["sentiment"]["raw"], -0.5);
    assert_eq!(j["sentiment"]["polarity"], "negative");
    assert_eq!(j["sentiment"]["matched"], serde_json::json!(["hoax"]));

    let human = ws.run(&["label", "--text", "total hoax"]);
    assert!(human.stdout.starts_with("label:     misinformation\n"), "{}", human.stdout);
    assert!(human.stdout.contains("[hoax]"));
    assert!(human.stdout.contains("raw -0.5000"));

    let empty = ws.run(&["label", "--text", "", "--json"]).json();
    assert_eq!(empty["cluster_label"], "uncategorized");
    assert_eq!(empty["sentiment"]["polarity"], "neutral");
    assert_eq!(empty["sentiment"]["raw"], 0.0);
}

#[test]
fn label_id_matches_batch_labels() {
    let ws = Workspace::with_fixtures("");
    ws.run(&["ingest"]);
    let config = Config::load(&ws.config).unwrap();
    let snap = Corpus::open(ws.corpus()).unwrap().snapshot();
    for t in snap.tweets().iter().step_by(7) {
        let batch = daily_cluster_proportions(&Snapshot::from_tweets([t.clone()]), &config.topics, &DayRange::all());
        let r = ws.run(&["label", "--id", &t.id, "--json"]);
        assert_eq!(r.code, 0);
        assert_eq!(r.json()["cluster_label"], serde_json::to_value(batch[0].label).unwrap(), "{}", t.id);
    }
    let r = ws.run(&["label", "--id", "does-not-exist"]);
    assert_eq!(r.code, 1);
    assert_eq!(ws.run(&["label"]).code, 1);
    assert_eq!(ws.run(&["label", "--id", "1", "--text", "x"]).code, 1);
}

#[test]
fn check_reports_ok_and_detects_corruption() {
    let ws = Workspace::with_fixtures("");
    ws.run(&["ingest"]);
    let r = ws.run(&["check", "--json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let j = r.json();
    assert_eq!(j["ok"], true);
    assert_eq!(j["total"], 349);
    assert_eq!(j["ids_digest"].as_str().unwrap(), Corpus::open(ws.corpus()).unwrap().ids_digest());

    let data = ws.corpus().join("tweets.ndjson");
    let text = std::fs::read_to_string(&data).unwrap();
    let truncated: String = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
    std::fs::write(&data, truncated).unwrap();
    let r = ws.run(&["check"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("corrupt"), "{}", r.stderr);
}

fn spawn_serve(ws: &Workspace, bind: &str) -> std::process::Child {
    Command::new(env!("CARGO_BIN_EXE_mpoxdash"))
        .args(["serve", "--config", ws.config.to_str().unwrap()])
        .env("MPOXDASH_BIND", bind)
        .env("RUST_LOG", "warn")
        .stdout(Stdio::null())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap()
}

#[cfg(unix)]
#[test]
fn serve_logs_address_answers_and_stops_on_sigterm() {
    let ws = Workspace::with_fixtures("");
    ws.run(&["ingest"]);
    // Port 0 is not a valid config value; borrow a free port instead.
    let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let mut child = spawn_serve(&ws, &format!("127.0.0.1:{port}"));
    let mut stderr = BufReader::new(child.stderr.take().unwrap());
    let mut line = String::new();
    stderr.read_line(&mut line).unwrap();
    let addr = line
        .strip_prefix("listening on http://")
        .and_then(|rest| rest.split_whitespace().next())
        .unwrap_or_else(|| panic!("unexpected first line: {line}"))
        .to_string();

    let mut conn = TcpStream::connect(&addr).unwrap();
    write!(conn, "GET /api/health HTTP/1.1\r\nHost: x\r\nConnection: close\r\n\r\n").unwrap();
    let mut resp = String::new();
    conn.read_to_string(&mut resp).unwrap();
    assert!(resp.starts_with("HTTP/1.1 200"), "{resp}");
    assert!(resp.contains("\"corpus_total\":349"), "{resp}");

    let status = Command::new("kill").args(["-TERM", &child.id().to_string()]).status().unwrap();
    assert!(status.success());
    let status = child.wait().unwrap();
    assert_eq!(status.code(), Some(0));
}

#[test]
fn serve_bad_port_names_key() {
    let ws = Workspace::new("bind = \"127.0.0.1:70000\"\n");
    let r = ws.run(&["serve"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("`bind`"), "{}", r.stderr);

    let ws = Workspace::new("");
    let out = spawn_serve(&ws, "localhost:0x").wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("MPOXDASH_BIND"));
}
