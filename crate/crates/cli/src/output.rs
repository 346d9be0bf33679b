use std::fmt::Display;
use std::io::Write;
use std::path::Path;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Versioned schema tag, e.g. `brw.bounds.v1`.
pub fn schema(name: &str) -> String {
    format!("brw.{name}.v{SCHEMA_VERSION}")
}

/// CSV table that ends with a `# schema=... manifest=...` line.
pub struct Table {
    header: Vec<String>,
    rows: Vec<String>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, cells: &[&dyn Display]) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
    }

    pub fn render(&self, schema: &str, manifest: &str) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(row);
            out.push('\n');
        }
        out.push_str(&format!("# schema={schema} manifest={manifest}\n"));
        out
    }
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(p, text)?;
        }
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
