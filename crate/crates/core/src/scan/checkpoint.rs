use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

const MAGIC: &str = "siegel-checkpoint 1";

/// Resume state of a scan, plus the primitive roots found so far.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Checkpoint {
    pub config_hash: String,
    pub total_blocks: usize,
    /// First block not yet written to the output.
    pub next_block: usize,
    /// Length of the row output once `next_block` blocks are written.
    pub rows_bytes: u64,
    pub spectrum_bytes: u64,
    pub roots: Vec<(u64, u64)>,
}

impl Checkpoint {
    pub fn is_complete(&self) -> bool {
        self.next_block >= self.total_blocks
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(128 + 16 * self.roots.len());
        s.push_str(MAGIC);
        s.push('\n');
        s.push_str(&format!("config {}\n", self.config_hash));
        s.push_str(&format!("total_blocks {}\n", self.total_blocks));
        s.push_str(&format!("next_block {}\n", self.next_block));
        s.push_str(&format!("rows_bytes {}\n", self.rows_bytes));
        s.push_str(&format!("spectrum_bytes {}\n", self.spectrum_bytes));
        s.push_str(&format!("roots {}\n", self.roots.len()));
        for (q, g) in &self.roots {
            s.push_str(&format!("{q} {g}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |what: &str| Error::Checkpoint(format!("malformed checkpoint: {what}"));
        let mut lines = text.lines();
        if lines.next() != Some(MAGIC) {
            return Err(bad("unknown format or version"));
        }
        let mut field = |name: &str| -> Result<String> {
            let line = lines.next().ok_or_else(|| bad(name))?;
            line.strip_prefix(name)
                .and_then(|rest| rest.strip_prefix(' '))
                .map(str::to_owned)
                .ok_or_else(|| bad(name))
        };
        let config_hash = field("config")?;
        let number = |s: String, name: &str| s.parse::<u64>().map_err(|_| bad(name));
        let total_blocks = number(field("total_blocks")?, "total_blocks")? as usize;
        let next_block = number(field("next_block")?, "next_block")? as usize;
        let rows_bytes = number(field("rows_bytes")?, "rows_bytes")?;
        let spectrum_bytes = number(field("spectrum_bytes")?, "spectrum_bytes")?;
        let count = number(field("roots")?, "roots")? as usize;
        let mut roots = Vec::with_capacity(count);
        for _ in 0..count {
            let line = lines.next().ok_or_else(|| bad("truncated root list"))?;
            let (q, g) = line.split_once(' ').ok_or_else(|| bad("root entry"))?;
            roots.push((
                q.parse().map_err(|_| bad("root entry"))?,
                g.parse().map_err(|_| bad("root entry"))?,
            ));
        }
        Ok(Self {
            config_hash,
            total_blocks,
            next_block,
            rows_bytes,
            spectrum_bytes,
            roots,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Writes to a sibling temporary file, syncs it and renames it over `path`.
    pub fn store(&self, path: &Path) -> Result<()> {
        let tmp = temp_path(path);
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(self.to_text().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

fn temp_path(path: &Path) -> PathBuf {
    let mut name = path
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".tmp");
    path.with_file_name(name)
}
