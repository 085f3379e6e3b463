use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

/// Exit status contract: 0 accept or sound, 1 reject or counterexample,
/// 2 usage or parse fault.
#[derive(Debug)]
pub enum Failure {
    Rejected(String),
    Usage(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Rejected(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Rejected(m) | Failure::Usage(m) => f.write_str(m),
        }
    }
}

pub fn usage(e: impl fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

pub type CliResult = Result<Outcome, Failure>;

/// What a successful command reports back to `main`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| usage(format!("cannot create a file in {}: {e}", dir.display())))?;
    tmp.write_all(contents.as_bytes())
        .and_then(|_| tmp.write_all(b"\n"))
        .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

/// Sends `text` to `out` when given, otherwise to stdout.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write_atomic(path, text),
        None => {
            print_stdout(text);
            Ok(())
        }
    }
}

/// Prints a line to stdout. A closed pipe ends the process quietly.
pub fn print_stdout(text: &str) {
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = writeln!(stdout, "{text}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("failed writing to stdout: {e}");
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

pub fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}
