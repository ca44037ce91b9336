//! Property selection, including properties decided by an external
//! command: one `n`-bit hex string per line in, `0` or `1` per line out.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::sync::{Arc, Mutex};

use hsgen::bootstrap::{DenseProperty, LeadingBit, Parity, Primality};
use hsgen::hitting::hex_string;
use hsgen::{Error, Result};

struct Pipe {
    _child: Child,
    stdin: ChildStdin,
    stdout: BufReader<ChildStdout>,
}

pub struct ExternalProperty {
    command: String,
    rho: f64,
    pipe: Mutex<Pipe>,
    answers: Mutex<HashMap<(usize, u64), bool>>,
}

impl ExternalProperty {
    pub fn spawn(command: &str, rho: f64) -> Result<Self> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .map_err(|e| Error::Usage(format!("cannot start {command:?}: {e}")))?;
        let stdin = child.stdin.take().expect("piped");
        let stdout = BufReader::new(child.stdout.take().expect("piped"));
        Ok(ExternalProperty {
            command: command.to_string(),
            rho,
            pipe: Mutex::new(Pipe { _child: child, stdin, stdout }),
            answers: Mutex::new(HashMap::new()),
        })
    }

    fn ask(&self, n: usize, w: u64) -> std::io::Result<bool> {
        let mut pipe = self.pipe.lock().unwrap();
        writeln!(pipe.stdin, "{}", hex_string(w, n))?;
        pipe.stdin.flush()?;
        let mut line = String::new();
        pipe.stdout.read_line(&mut line)?;
        match line.trim() {
            "1" => Ok(true),
            "0" => Ok(false),
            other => Err(std::io::Error::other(format!("expected 0 or 1, got {other:?}"))),
        }
    }
}

impl DenseProperty for ExternalProperty {
    fn name(&self) -> String {
        format!("cmd:{}", self.command)
    }

    /// A broken plug-in rejects everything.
    fn contains(&self, n: usize, w: u64) -> bool {
        if let Some(&b) = self.answers.lock().unwrap().get(&(n, w)) {
            return b;
        }
        let b = self.ask(n, w).unwrap_or(false);
        self.answers.lock().unwrap().insert((n, w), b);
        b
    }

    fn rho(&self) -> f64 {
        self.rho
    }
}

/// `leading-bit`, `parity`, `primality`, or `cmd:<shell command>`.
pub fn select(name: &str, rho: f64) -> Result<Arc<dyn DenseProperty + Send + Sync>> {
    Ok(match name {
        "leading-bit" => Arc::new(LeadingBit),
        "parity" => Arc::new(Parity),
        "primality" => Arc::new(Primality),
        _ => match name.strip_prefix("cmd:") {
            Some(cmd) => Arc::new(ExternalProperty::spawn(cmd, rho)?),
            None => return Err(Error::Usage(format!("unknown property {name:?}"))),
        },
    })
}
