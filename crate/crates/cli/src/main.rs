mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{CommandFactory, Parser};
use kklab_core::config::parse_config;
use kklab_core::report::SCHEMA;
use kklab_core::{Error, Limits};
use serde_json::Value;

use args::{Cli, Format};

pub enum CliError {
    Core(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Precondition { .. }) => 2,
            CliError::Core(Error::ResourceGuard(_)) => 3,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

/// The value of `--config` in `argv`, if any.
fn config_path(argv: &[String]) -> Option<String> {
    argv.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            argv.get(i + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_string)
        }
    })
}

/// Inserts config settings as flags right after the subcommand words, so
/// flags given on the command line (which come later) take precedence.
fn merge_config(argv: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    let settings = parse_config(&text)?;
    let mut cmd = Cli::command();
    cmd.build();
    // skip global flags (and their values), then walk the subcommand path
    let mut at = 1;
    while let Some(flag) = argv.get(at).and_then(|a| a.strip_prefix("--")) {
        let takes_value = !flag.contains('=')
            && cmd
                .get_arguments()
                .any(|a| a.get_long() == Some(flag) && a.get_action().takes_values());
        at += if takes_value { 2 } else { 1 };
    }
    let start = at;
    let mut current = &cmd;
    while let Some(sub) = argv.get(at).and_then(|a| current.find_subcommand(a)) {
        current = sub;
        at += 1;
    }
    if at == start {
        return Ok(argv);
    }
    let mut extra = Vec::new();
    for (key, value) in &settings {
        if key == "config" {
            return Err(CliError::Usage("config files cannot name another config".into()));
        }
        let Some(arg) = current.get_arguments().find(|a| a.get_long() == Some(key.as_str())) else {
            let known_elsewhere = cmd
                .get_subcommands()
                .flat_map(|s| std::iter::once(s).chain(s.get_subcommands()))
                .any(|s| s.get_arguments().any(|a| a.get_long() == Some(key.as_str())));
            if known_elsewhere {
                continue;
            }
            return Err(CliError::Usage(format!("config key {key:?} is not a kklab flag")));
        };
        if arg.get_action().takes_values() {
            extra.push(format!("--{key}"));
            extra.push(value.clone());
        } else {
            match value.as_str() {
                "true" | "yes" | "1" => extra.push(format!("--{key}")),
                "false" | "no" | "0" => {}
                _ => return Err(CliError::Usage(format!("config key {key} expects true or false"))),
            }
        }
    }
    let mut out = argv[..at].to_vec();
    out.extend(extra);
    out.extend_from_slice(&argv[at..]);
    Ok(out)
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render(rep: &commands::Report, format: Format) -> String {
    let mut body = serde_json::Map::new();
    body.insert("schema".into(), Value::String(SCHEMA.into()));
    body.insert("command".into(), Value::String(rep.command.into()));
    match &rep.body {
        Value::Object(m) => body.extend(m.clone()),
        other => {
            body.insert("result".into(), other.clone());
        }
    }
    let body = Value::Object(body);
    match format {
        Format::Json => serde_json::to_string_pretty(&body).expect("serializable") + "\n",
        Format::Csv => match &rep.csv {
            Some(csv) => csv.clone(),
            None => {
                let mut rows = Vec::new();
                flatten("", &body, &mut rows);
                let mut s = String::from("key,value\n");
                for (k, v) in rows {
                    s.push_str(&format!("{},{}\n", csv_field(&k), csv_field(&v)));
                }
                s
            }
        },
        Format::Text => {
            let mut rows = Vec::new();
            flatten("", &body, &mut rows);
            rows.into_iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
        }
    }
}

fn execute(argv: Vec<String>) -> Result<(), CliError> {
    let argv = merge_config(argv)?;
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(std::io::stdout(), "{e}");
            return Ok(());
        }
        Err(e) => return Err(CliError::Usage(e.to_string().trim_end().to_string())),
    };
    let g = &cli.global;
    if g.precision < 4 {
        return Err(CliError::Usage("--precision must be at least 4".into()));
    }
    let mut limits = Limits::default();
    if let Some(v) = g.node_budget {
        limits.node_budget = v;
    }
    if let Some(v) = g.copy_cap {
        limits.copy_cap = v;
    }
    if let Some(v) = g.exact_edge_cap {
        limits.exact_edge_cap = v;
    }
    if let Some(v) = g.heuristic_vertices {
        limits.heuristic_vertices = v;
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = g.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        pool = pool.num_threads(t);
    }
    let pool = pool.build().map_err(|e| CliError::Usage(e.to_string()))?;
    let rep = pool.install(|| commands::run(&cli.command, g.precision, &limits))?;
    let text = render(&rep, g.format);
    match &g.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kklab: {e}");
            if let CliError::Core(Error::Precondition { witness: Some(w), .. }) = &e {
                println!("{}", serde_json::json!({ "schema": SCHEMA, "error": "precondition", "witness": w }));
            }
            ExitCode::from(e.exit_code())
        }
    }
}
