//! Run configuration: built-in defaults, optionally overridden by a JSON
//! file named on the command line or in `BRAIDORDER_CONFIG`, then by flags.

use std::path::Path;

use braidorder::{Error, Escalation};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub genus: u32,
    pub strands: u32,
    pub d0: usize,
    pub cap: usize,
    pub seed: u64,
    pub samples: Option<usize>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        let esc = Escalation::default();
        RunConfig {
            genus: 1,
            strands: 2,
            d0: esc.start,
            cap: esc.cap,
            seed: 0,
            samples: None,
            format: Format::Text,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn validate(&self) -> braidorder::Result<()> {
        if self.genus < 1 {
            return Err(Error::Precondition("genus must be at least 1".into()));
        }
        if self.strands < 2 {
            return Err(Error::Precondition("strands must be at least 2".into()));
        }
        Escalation::new(self.d0, self.cap).map(|_| ())
    }

    pub fn escalation(&self) -> braidorder::Result<Escalation> {
        Escalation::new(self.d0, self.cap)
    }
}
