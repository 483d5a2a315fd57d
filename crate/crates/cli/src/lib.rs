//! The `qlimits` command: argument handling, dispatch and output.

mod args;
mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::error::ErrorKind;
use clap::Parser;
use qlimits_core::numfmt::to_json_string;
use qlimits_core::QlError;
use serde_json::{json, Value};

pub use args::Cli;

/// Failure of one invocation.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent arguments; exit code 2.
    Usage {
        message: String,
        offending_input: Option<String>,
    },
    /// Solver or input-domain failure; exit code 1.
    Core(QlError),
    /// File access failure; exit code 1.
    Io { path: String, message: String },
}

impl CliError {
    pub fn usage(message: impl Into<String>, offending: impl Into<Option<String>>) -> Self {
        CliError::Usage {
            message: message.into(),
            offending_input: offending.into(),
        }
    }

    fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => 2,
            CliError::Core(_) | CliError::Io { .. } => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Usage {
                message,
                offending_input,
            } => {
                json!({"kind": "usage", "message": message, "offending_input": offending_input})
            }
            CliError::Core(e) => {
                json!({"kind": e.kind(), "message": e.to_string(), "offending_input": e.offending_input()})
            }
            CliError::Io { path, message } => json!({"kind": "io", "message": message, "offending_input": path}),
        }
    }
}

impl From<QlError> for CliError {
    fn from(e: QlError) -> Self {
        match e {
            QlError::Parse { token, reason } => CliError::usage(format!("cannot parse {token:?}: {reason}"), token),
            e => CliError::Core(e),
        }
    }
}

/// Text produced by a command.
pub struct Output {
    pub text: String,
}

impl Output {
    pub fn json(value: &Value) -> Self {
        let mut text = to_json_string(value);
        text.push('\n');
        Output { text }
    }

    pub fn text(text: String) -> Self {
        Output { text }
    }
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let result = merge_config(argv).and_then(|argv| match Cli::try_parse_from(argv) {
        Ok(cli) => execute(cli),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            Ok((Output::text(e.render().to_string()), None))
        }
        Err(e) => Err(CliError::usage(e.render().to_string().trim_end(), None)),
    });
    match result.and_then(|(output, target)| emit(output, target.as_deref(), stdout)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}", to_json_string(&e.to_json()));
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<(Output, Option<std::path::PathBuf>), CliError> {
    let out = cli.out.clone();
    let output = commands::dispatch(cli)?;
    Ok((output, out))
}

fn emit(output: Output, target: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match target {
        Some(path) => std::fs::write(path, output.text.as_bytes()).map_err(|e| CliError::io(path, e)),
        None => match stdout.write_all(output.text.as_bytes()).and_then(|()| stdout.flush()) {
            // A closed reader (e.g. `| head`) is not a failure.
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::io(Path::new("<stdout>"), e)),
            _ => Ok(()),
        },
    }
}

/// Mutually exclusive ways to give a work budget; one on the command line
/// overrides any of them in the config file.
const BUDGET_FLAGS: [&str; 4] = ["work", "power", "work-radps", "solar-budget"];

/// Appends `--key value` for every config entry whose flag is absent from `argv`.
fn merge_config(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let strings: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let mut path = None;
    for (i, a) in strings.iter().enumerate() {
        if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else if a == "--config" {
            path = Some(
                strings
                    .get(i + 1)
                    .cloned()
                    .ok_or_else(|| CliError::usage("--config needs a path", "--config".to_string()))?,
            );
        }
    }
    let Some(path) = path else { return Ok(argv) };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::io(path, e))?;
    let Value::Object(map) = value else {
        return Err(CliError::usage(
            "config file must hold a JSON object",
            path.display().to_string(),
        ));
    };
    let present: Vec<String> = strings
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect();
    let mut merged = argv;
    for (key, value) in map {
        let flag = key.replace('_', "-");
        let budget_given = BUDGET_FLAGS.iter().any(|f| present.iter().any(|p| p == f));
        if flag == "config" || present.contains(&flag) || (budget_given && BUDGET_FLAGS.contains(&flag.as_str())) {
            continue;
        }
        match value {
            Value::Bool(true) => merged.push(format!("--{flag}").into()),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => {
                merged.push(format!("--{flag}").into());
                merged.push(s.into());
            }
            Value::Number(n) => {
                merged.push(format!("--{flag}").into());
                merged.push(n.to_string().into());
            }
            other => {
                return Err(CliError::usage(
                    format!("config value for {key} must be a scalar"),
                    other.to_string(),
                ));
            }
        }
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(name: &str, body: &str) -> String {
        let path = std::env::temp_dir().join(format!("qlimits-lib-{}-{name}", std::process::id()));
        std::fs::write(&path, body).unwrap();
        path.to_str().unwrap().to_string()
    }

    fn strings(argv: Vec<OsString>) -> Vec<String> {
        argv.into_iter().map(|a| a.into_string().unwrap()).collect()
    }

    #[test]
    fn argv_without_config_is_untouched() {
        let argv: Vec<OsString> = ["qlimits", "scenario", "list"].iter().map(Into::into).collect();
        assert_eq!(merge_config(argv.clone()).unwrap(), argv);
    }

    #[test]
    fn config_keys_become_flags_unless_given() {
        let path = config(
            "a.json",
            r#"{"n": 4, "solar_budget": true, "verbose": false, "time": "1s"}"#,
        );
        let argv = ["qlimits", "keylength", "--config", &path, "--n", "8"]
            .iter()
            .map(Into::into)
            .collect();
        let merged = strings(merge_config(argv).unwrap());
        assert_eq!(merged.iter().filter(|a| *a == "--n").count(), 1);
        assert!(merged.ends_with(&["--solar-budget".into(), "--time".into(), "1s".into()]));
        assert!(!merged.iter().any(|a| a == "--verbose"));
    }

    #[test]
    fn a_budget_flag_on_the_command_line_hides_the_others() {
        let path = config("b.json", r#"{"work": 5, "power": 2}"#);
        let argv = [
            "qlimits",
            "bound",
            "quantum",
            &format!("--config={path}"),
            "--work-radps",
            "3",
        ]
        .iter()
        .map(Into::into)
        .collect();
        let merged = strings(merge_config(argv).unwrap());
        assert!(!merged.iter().any(|a| a == "--work" || a == "--power"));
    }

    #[test]
    fn bad_config_shapes() {
        let argv = ["qlimits", "--config"].iter().map(Into::into).collect();
        assert_eq!(merge_config(argv).unwrap_err().exit_code(), 2);
        let path = config("c.json", "[1, 2]");
        let argv = ["qlimits", "--config", &path].iter().map(Into::into).collect();
        assert_eq!(merge_config(argv).unwrap_err().exit_code(), 2);
        let argv = ["qlimits", "--config", "/nonexistent/q.json"]
            .iter()
            .map(Into::into)
            .collect();
        let err = merge_config(argv).unwrap_err();
        assert_eq!((err.exit_code(), err.to_json()["kind"].as_str()), (1, Some("io")));
    }

    #[test]
    fn parse_errors_are_usage_errors() {
        let e: CliError = qlimits_core::units::parse_duration("3 parsec").unwrap_err().into();
        assert_eq!(e.exit_code(), 2);
        assert_eq!(e.to_json()["offending_input"], "parsec");
        let e: CliError = QlError::domain("bad", 1.5).into();
        assert_eq!((e.exit_code(), e.to_json()["kind"].as_str()), (1, Some("domain")));
    }

    #[test]
    fn run_reports_exit_codes_and_streams() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["qlimits", "scenario", "show", "dyson"], &mut out, &mut err), 0);
        assert!(String::from_utf8(out).unwrap().contains("\"dyson\""));
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["qlimits", "--help"], &mut out, &mut err), 0);
        assert!(err.is_empty() && !out.is_empty());
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["qlimits", "nope"], &mut out, &mut err), 2);
        assert!(out.is_empty());
        let v: Value = serde_json::from_slice(&err).unwrap();
        assert_eq!(v["kind"], "usage");
    }
}
