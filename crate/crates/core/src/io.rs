//! JSON instance files. Rationals are `"p/q"` strings.
//!
//! ```json
//! {
//!   "version": 1,
//!   "sequences": [
//!     {
//!       "space": { "kind": "sup_finite", "dim": 2 },
//!       "preperiod": [],
//!       "cycle": [["0", "0"], ["2", "4"]],
//!       "spike": null,
//!       "tail": null
//!     }
//!   ]
//! }
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Q};
use crate::seq_model::{Periodic, RepresentableSeq, SpaceKind};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub kind: String,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarSeqDoc {
    pub preperiod: Vec<String>,
    pub cycle: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDoc {
    pub space: SpaceDoc,
    pub preperiod: Vec<Vec<String>>,
    pub cycle: Vec<Vec<String>>,
    #[serde(default)]
    pub spike: Option<ScalarSeqDoc>,
    #[serde(default)]
    pub tail: Option<ScalarSeqDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    pub sequences: Vec<SequenceDoc>,
}

fn parse_all(values: &[String]) -> Result<Vec<Q>> {
    values.iter().map(|s| rational::parse(s)).collect()
}

fn format_all(values: &[Q]) -> Vec<String> {
    values.iter().map(rational::format).collect()
}

impl ScalarSeqDoc {
    fn to_periodic(&self) -> Result<Periodic<Q>> {
        Periodic::new(parse_all(&self.preperiod)?, parse_all(&self.cycle)?)
    }

    fn from_periodic(p: &Periodic<Q>) -> Self {
        Self {
            preperiod: format_all(p.preperiod()),
            cycle: format_all(p.cycle()),
        }
    }
}

impl SequenceDoc {
    pub fn to_seq(&self) -> Result<RepresentableSeq> {
        let kind = SpaceKind::from_name(&self.space.kind)
            .ok_or_else(|| Error::Format(format!("unknown space kind {:?}", self.space.kind)))?;
        let rows = |rows: &[Vec<String>]| rows.iter().map(|r| parse_all(r)).collect::<Result<Vec<_>>>();
        let core = Periodic::new(rows(&self.preperiod)?, rows(&self.cycle)?)?;
        let spike = self.spike.as_ref().map(ScalarSeqDoc::to_periodic).transpose()?;
        let tail = self.tail.as_ref().map(ScalarSeqDoc::to_periodic).transpose()?;
        RepresentableSeq::new(kind, self.space.dim, core, spike, tail)
    }

    pub fn from_seq(seq: &RepresentableSeq) -> Self {
        let rows = |rows: &[Vec<Q>]| rows.iter().map(|r| format_all(r)).collect();
        Self {
            space: SpaceDoc {
                kind: seq.kind().as_str().to_string(),
                dim: seq.dim(),
            },
            preperiod: rows(seq.core().preperiod()),
            cycle: rows(seq.core().cycle()),
            spike: seq.spike().map(ScalarSeqDoc::from_periodic),
            tail: seq.tail().map(ScalarSeqDoc::from_periodic),
        }
    }
}

/// Parses an instance file, or a bare sequence document.
pub fn parse_instance(text: &str) -> Result<Vec<RepresentableSeq>> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let docs = if value.get("version").is_some() {
        let file: InstanceFile = serde_json::from_value(value).map_err(|e| Error::Format(e.to_string()))?;
        if file.version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported version {}", file.version)));
        }
        file.sequences
    } else {
        vec![serde_json::from_value(value).map_err(|e| Error::Format(e.to_string()))?]
    };
    if docs.is_empty() {
        return Err(Error::Format("no sequences".into()));
    }
    docs.iter().map(SequenceDoc::to_seq).collect()
}

/// Pretty JSON with a trailing newline. Parsing the output and serializing
/// again reproduces it byte for byte.
pub fn serialize_instance(seqs: &[RepresentableSeq]) -> String {
    let file = InstanceFile {
        version: FORMAT_VERSION,
        sequences: seqs.iter().map(SequenceDoc::from_seq).collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("plain data serializes");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int, ints};

    #[test]
    fn round_trip_is_byte_identical() {
        let seqs = vec![
            RepresentableSeq::sup(vec![vec![frac(1, 2), int(-3)]], vec![ints(&[0, 0]), ints(&[2, 4])]).unwrap(),
            RepresentableSeq::c0(Periodic::constant(ints(&[1])), Periodic::new(vec![int(5)], vec![frac(-2, 3)]).unwrap()).unwrap(),
            RepresentableSeq::with_tail(
                SpaceKind::CTail,
                Periodic::constant(ints(&[0, 1])),
                Periodic::new(vec![], ints(&[1, -1])).unwrap(),
            )
            .unwrap(),
        ];
        let text = serialize_instance(&seqs);
        let parsed = parse_instance(&text).unwrap();
        assert_eq!(parsed, seqs);
        assert_eq!(serialize_instance(&parsed), text);
    }

    #[test]
    fn bare_sequence_document() {
        let text = r#"{"space":{"kind":"sup_finite","dim":2},"preperiod":[["0","0"]],"cycle":[["2","4"],["0","0"]],"spike":null,"tail":null}"#;
        let seqs = parse_instance(text).unwrap();
        assert_eq!(seqs[0].core().cycle(), &[ints(&[2, 4]), ints(&[0, 0])]);
    }

    #[test]
    fn schema_errors() {
        for bad in [
            "not json",
            r#"{"version":2,"sequences":[]}"#,
            r#"{"version":1,"sequences":[]}"#,
            r#"{"space":{"kind":"hilbert","dim":1},"preperiod":[],"cycle":[["1"]]}"#,
            r#"{"space":{"kind":"sup_finite","dim":1},"preperiod":[],"cycle":[["1/0"]]}"#,
            r#"{"space":{"kind":"sup_finite","dim":1},"preperiod":[],"cycle":[]}"#,
            r#"{"space":{"kind":"sup_finite","dim":2},"preperiod":[],"cycle":[["1"]]}"#,
            r#"{"space":{"kind":"c0_spike","dim":1},"preperiod":[],"cycle":[["1"]]}"#,
            r#"{"space":{"kind":"sup_finite","dim":1},"preperiod":[],"cycle":[["1"]],"extra":1}"#,
        ] {
            assert!(parse_instance(bad).is_err(), "{bad}");
        }
    }
}
