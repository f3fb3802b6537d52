//! Output plumbing: rows are accumulated in memory and flushed once, so a
//! run writes byte-identical content whether it lands on stdout or `--out`.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

/// Collects CSV rows (and raw blocks, for DOT/JSON payloads) for one run.
pub struct Sink {
    out: Option<PathBuf>,
    header: bool,
    buf: String,
    header_written: bool,
}

impl Sink {
    pub fn new(out: Option<PathBuf>, header: bool) -> Self {
        Sink {
            out,
            header,
            buf: String::new(),
            header_written: false,
        }
    }

    /// Emits the header row once, if `--header` was given.
    pub fn header(&mut self, columns: &str) {
        if self.header && !self.header_written {
            self.buf.push_str(columns);
            self.buf.push('\n');
            self.header_written = true;
        }
    }

    /// Emits one CSV row (already comma-joined).
    pub fn row(&mut self, line: &str) {
        self.buf.push_str(line);
        self.buf.push('\n');
    }

    /// Emits a raw block verbatim (DOT or JSON payloads).
    pub fn block(&mut self, text: &str) {
        self.buf.push_str(text);
        if !text.ends_with('\n') {
            self.buf.push('\n');
        }
    }

    /// Writes everything to the chosen destination.
    pub fn flush(self) -> io::Result<()> {
        match self.out {
            Some(path) => fs::write(path, self.buf),
            None => {
                let stdout = io::stdout();
                let mut lock = stdout.lock();
                lock.write_all(self.buf.as_bytes())?;
                lock.flush()
            }
        }
    }
}

/// Joins integer terms into a CSV row.
pub fn join_i64(values: &[i64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
