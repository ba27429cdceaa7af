//! Resume file for long scans:
//! `{"bad_d": [...], "completed_through": D, "d_hi": .., "d_lo": .., "g": .., "n": ..}`.

use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: u64,
    pub g: u64,
    pub d_lo: u64,
    pub d_hi: u64,
    /// Every `d` in `[d_lo, completed_through]` has been certified.
    pub completed_through: u64,
    pub bad_d: Vec<u64>,
}

#[derive(Debug, thiserror::Error)]
pub enum CheckpointError {
    #[error("reading checkpoint {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("checkpoint {path} is corrupt: {reason}")]
    Corrupt { path: String, reason: String },
}

impl Checkpoint {
    pub fn fresh(n: u64, g: u64, d_lo: u64, d_hi: u64) -> Self {
        Checkpoint {
            n,
            g,
            d_lo,
            d_hi,
            completed_through: d_lo - 1,
            bad_d: Vec::new(),
        }
    }

    /// `Ok(None)` when the file does not exist yet.
    pub fn load(path: &Path) -> Result<Option<Self>, CheckpointError> {
        let display = path.display().to_string();
        let text = match fs::read_to_string(path) {
            Ok(text) => text,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(source) => {
                return Err(CheckpointError::Io {
                    path: display,
                    source,
                })
            }
        };
        let cp: Checkpoint = serde_json::from_str(&text).map_err(|e| CheckpointError::Corrupt {
            path: display.clone(),
            reason: e.to_string(),
        })?;
        cp.validate().map_err(|reason| CheckpointError::Corrupt {
            path: display,
            reason,
        })?;
        Ok(Some(cp))
    }

    fn validate(&self) -> Result<(), String> {
        if self.d_lo == 0 || self.d_lo > self.d_hi {
            return Err(format!("bad range [{}, {}]", self.d_lo, self.d_hi));
        }
        if self.completed_through + 1 < self.d_lo || self.completed_through > self.d_hi {
            return Err(format!(
                "completed_through {} outside range",
                self.completed_through
            ));
        }
        if !self.bad_d.windows(2).all(|w| w[0] < w[1]) {
            return Err("bad_d not strictly increasing".into());
        }
        if self
            .bad_d
            .iter()
            .any(|&d| d < self.d_lo || d > self.completed_through)
        {
            return Err("bad_d entry outside the completed range".into());
        }
        Ok(())
    }

    /// Written to a sibling temp file first, then renamed over `path`.
    pub fn store(&self, path: &Path) -> io::Result<()> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let text = serde_json::to_string(&serde_json::to_value(self)?)?;
        fs::write(&tmp, text + "\n")?;
        fs::rename(&tmp, path)
    }
}
