use std::path::Path;

use collision_core::dataset::{load_series, RateSeries, IRELAND_2009_2013_CSV, IRELAND_2014_2018_CSV};
use sha2::{Digest, Sha256};

use crate::error::{usage, CliResult};

/// Input data together with a description and content hash for manifests.
pub struct DataSource {
    pub label: String,
    pub bytes: Vec<u8>,
}

pub enum Bundled {
    Recent,
    Decade,
}

impl DataSource {
    pub fn resolve(input: Option<&Path>, default: Bundled) -> CliResult<Self> {
        match input {
            Some(path) => {
                let bytes = std::fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
                Ok(Self { label: path.display().to_string(), bytes })
            }
            None => Ok(match default {
                Bundled::Recent => Self { label: "bundled:ireland_2014_2018".into(), bytes: IRELAND_2014_2018_CSV.into() },
                Bundled::Decade => {
                    let mut text = IRELAND_2009_2013_CSV.trim_end().to_string();
                    for line in IRELAND_2014_2018_CSV.lines().skip(1) {
                        text.push('\n');
                        text.push_str(line);
                    }
                    text.push('\n');
                    Self { label: "bundled:ireland_2009_2018".into(), bytes: text.into_bytes() }
                }
            }),
        }
    }

    pub fn series(&self) -> CliResult<RateSeries> {
        Ok(load_series(self.bytes.as_slice())?)
    }

    pub fn sha256(&self) -> String {
        Sha256::digest(&self.bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}
