//! Output envelopes and payloads shared by every subcommand.
//!
//! JSON goes through `serde_json::Value`, whose maps are ordered, so keys come
//! out sorted. CSV uses the `csv` crate's RFC 4180 quoting.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use superjac_core::{CurveShape, EigenspaceTable, Subgroup, WeylReport};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Subgroups with more elements than this are listed without elements.
pub const ELIDE_ABOVE: u64 = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: Value,
    pub payload: Value,
    pub version: String,
}

impl OutputRecord {
    pub fn new(command: &str, inputs: impl Serialize, payload: impl Serialize) -> Self {
        OutputRecord {
            command: command.to_owned(),
            inputs: serde_json::to_value(inputs).expect("inputs serialize"),
            payload: serde_json::to_value(payload).expect("payload serialize"),
            version: VERSION.to_owned(),
        }
    }

    /// Drop the named keys wherever they occur in the payload.
    pub fn strip_keys(mut self, keys: &[&str]) -> Self {
        fn strip(value: &mut Value, keys: &[&str]) {
            match value {
                Value::Object(map) => {
                    for k in keys {
                        map.remove(*k);
                    }
                    map.values_mut().for_each(|v| strip(v, keys));
                }
                Value::Array(items) => items.iter_mut().for_each(|v| strip(v, keys)),
                _ => {}
            }
        }
        strip(&mut self.payload, keys);
        self
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("record serializes");
        serde_json::to_string_pretty(&value).expect("value serializes") + "\n"
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimsReport {
    pub shape: CurveShape,
    pub d: u64,
    pub dims: BTreeMap<u64, u64>,
    pub new_part: Vec<u64>,
    pub new_part_dimension: u64,
    pub genus: u64,
}

impl DimsReport {
    pub fn new(table: &EigenspaceTable, genus: u64) -> Self {
        DimsReport {
            shape: table.shape.clone(),
            d: table.d,
            dims: table.iter().collect(),
            new_part: table
                .iter()
                .map(|(j, _)| j)
                .filter(|&j| table.is_new(j))
                .collect(),
            new_part_dimension: table.new_part_dimension(),
            genus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupEntry {
    pub index: u64,
    pub order: u64,
    pub generators: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<u64>>,
}

impl SubgroupEntry {
    pub fn new(h: &Subgroup) -> Self {
        SubgroupEntry {
            index: h.index(),
            order: h.order(),
            generators: h.generators().to_vec(),
            elements: (h.order() <= ELIDE_ABOVE).then(|| h.iter_elements().collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupsReport {
    pub d: u64,
    pub max_index: u64,
    pub subgroups: Vec<SubgroupEntry>,
}

/// Witness for a failed character-sum check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundWitness {
    pub d: u64,
    pub subgroup_generators: Vec<u64>,
    pub a: u64,
    pub magnitude: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylPayload {
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<WeylReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<BoundWitness>,
}

pub fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Render rows as CSV with a header line.
pub fn csv<R, I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
