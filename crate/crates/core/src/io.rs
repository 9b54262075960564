//! JSON file formats for frames, topologies, nuclei, morphisms and
//! valuations.
//!
//! A frame reference is a builtin name (`chain-N`, `boolean-N`), a path
//! relative to the referring file, or an inline frame or topology object.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num::Signed;
use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::frame::{boolean, build_frame, chain, Elem, Frame, FrameError, FrameSpec, Topology, TopologyError, TopologySpec};
use crate::interval::ratopen::{parse_rational, Q};
use crate::measure::finite::{validate_valuation, Valuation, ValuationError};
use crate::measure::interval::{Descriptor, MeasureError};
use crate::morphism::{validate_morphism, FrameMorphism, MorphismError};
use crate::sublocale::{validate_nucleus, Nucleus, NucleusError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{origin}: cannot read: {message}")]
    Read { origin: String, message: String },
    #[error("{origin}:{line}:{column}: {message}")]
    Parse {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{origin}: {message}")]
    Shape { origin: String, message: String },
    #[error("{origin}: invalid frame: {source}")]
    Frame { origin: String, source: FrameError },
    #[error("{origin}: invalid topology: {source}")]
    Topology { origin: String, source: TopologyError },
    #[error("{origin}: not a nucleus: {source}")]
    Nucleus { origin: String, source: NucleusError },
    #[error("{origin}: not a frame morphism: {source}")]
    Morphism { origin: String, source: MorphismError },
    #[error("{origin}: not a valuation: {source}")]
    Valuation { origin: String, source: ValuationError },
    #[error("{origin}: {source}")]
    Descriptor { origin: String, source: MeasureError },
    #[error("invalid tolerance {0:?}: expected a positive rational such as 1e-3 or 1/1000")]
    Tolerance(String),
}

impl IoError {
    /// Malformed input, as opposed to well-formed input describing a
    /// structure that fails its axioms.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            IoError::Read { .. } | IoError::Parse { .. } | IoError::Shape { .. } | IoError::Tolerance(_)
        ) || matches!(self, IoError::Descriptor { source: MeasureError::InvalidDescriptor(_) | MeasureError::Interval(_), .. })
    }
}

fn parse_error(origin: &str, e: serde_json::Error) -> IoError {
    IoError::Parse {
        origin: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    }
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

fn shape(origin: &str, message: impl Into<String>) -> IoError {
    IoError::Shape {
        origin: origin.to_string(),
        message: message.into(),
    }
}

fn typed<T: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| parse_error(origin, e))
}

fn object(text: &str, origin: &str) -> Result<serde_json::Map<String, Value>, IoError> {
    match typed::<Value>(text, origin)? {
        Value::Object(map) => Ok(map),
        _ => Err(shape(origin, "expected a JSON object")),
    }
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::Read {
        origin: path.display().to_string(),
        message: e.to_string(),
    })
}

/// A frame as loaded from a file, with its topology when it was given as
/// one.
#[derive(Clone, Debug)]
pub struct LoadedFrame {
    pub origin: String,
    pub frame: Arc<Frame>,
    pub topology: Option<Topology>,
}

/// Reads `{"elements", "leq"}` or `{"points", "opens"}`.
pub fn frame_from_text(text: &str, origin: &str) -> Result<LoadedFrame, IoError> {
    let map = object(text, origin)?;
    if map.contains_key("points") || map.contains_key("opens") {
        let spec: TopologySpec = typed(text, origin)?;
        let topology = Topology::new(&spec).map_err(|source| IoError::Topology {
            origin: origin.to_string(),
            source,
        })?;
        return Ok(LoadedFrame {
            origin: origin.to_string(),
            frame: topology.frame().clone(),
            topology: Some(topology),
        });
    }
    let spec: FrameSpec = typed(text, origin)?;
    let frame = build_frame(&spec).map_err(|source| IoError::Frame {
        origin: origin.to_string(),
        source,
    })?;
    Ok(LoadedFrame {
        origin: origin.to_string(),
        frame: Arc::new(frame),
        topology: None,
    })
}

pub fn load_frame(path: &Path) -> Result<LoadedFrame, IoError> {
    frame_from_text(&read_text(path)?, &path.display().to_string())
}

/// `chain-N` or `boolean-N`.
pub fn builtin_frame(name: &str) -> Option<Frame> {
    let (kind, n) = name.rsplit_once('-')?;
    let n: usize = n.parse().ok()?;
    match kind {
        "chain" if (1..=16).contains(&n) => Some(chain(n)),
        "boolean" if n <= 5 => Some(boolean(n)),
        _ => None,
    }
}

/// Resolves a frame reference found in a file located in `base`.
pub fn resolve_frame_ref(value: &Value, base: &Path, origin: &str) -> Result<LoadedFrame, IoError> {
    match value {
        Value::String(s) => {
            if let Some(f) = builtin_frame(s) {
                return Ok(LoadedFrame {
                    origin: s.clone(),
                    frame: Arc::new(f),
                    topology: None,
                });
            }
            load_frame(&base.join(s))
        }
        Value::Object(_) => frame_from_text(&value.to_string(), &format!("{origin} (inline frame)")),
        _ => Err(shape(origin, "frame reference must be a builtin name, a path or an object")),
    }
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn elem(frame: &Frame, name: &str, origin: &str) -> Result<Elem, IoError> {
    frame
        .elem(name)
        .ok_or_else(|| shape(origin, format!("unknown element {name:?}")))
}

/// Turns a name-keyed table into a per-element list, requiring every
/// element exactly once.
fn total_table<'a>(
    frame: &Frame,
    table: &'a BTreeMap<String, Value>,
    origin: &str,
) -> Result<Vec<&'a Value>, IoError> {
    for key in table.keys() {
        elem(frame, key, origin)?;
    }
    frame
        .elements()
        .map(|e| {
            table
                .get(frame.name(e))
                .ok_or_else(|| shape(origin, format!("no entry for element {:?}", frame.name(e))))
        })
        .collect()
}

fn string_value<'a>(v: &'a Value, origin: &str) -> Result<&'a str, IoError> {
    v.as_str().ok_or_else(|| shape(origin, format!("expected a string, found {v}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NucleusFile {
    frame: Value,
    map: BTreeMap<String, Value>,
}

#[derive(Clone, Debug)]
pub struct LoadedNucleus {
    pub frame: LoadedFrame,
    pub nucleus: Nucleus,
}

/// `{"frame": <ref>, "map": {"elem": "elem", ...}}`.
pub fn nucleus_from_text(text: &str, origin: &str, base: &Path) -> Result<LoadedNucleus, IoError> {
    object(text, origin)?;
    let raw: NucleusFile = typed(text, origin)?;
    let frame = resolve_frame_ref(&raw.frame, base, origin)?;
    let f = &frame.frame;
    let map = total_table(f, &raw.map, origin)?
        .into_iter()
        .map(|v| elem(f, string_value(v, origin)?, origin))
        .collect::<Result<Vec<_>, _>>()?;
    let nucleus = validate_nucleus(f, map).map_err(|source| IoError::Nucleus {
        origin: origin.to_string(),
        source,
    })?;
    Ok(LoadedNucleus { frame, nucleus })
}

pub fn load_nucleus(path: &Path) -> Result<LoadedNucleus, IoError> {
    nucleus_from_text(&read_text(path)?, &path.display().to_string(), &base_dir(path))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismFile {
    source: Value,
    target: Value,
    fstar: BTreeMap<String, Value>,
}

/// `{"source": <ref>, "target": <ref>, "fstar": {...}}`.
pub fn morphism_from_text(text: &str, origin: &str, base: &Path) -> Result<FrameMorphism, IoError> {
    object(text, origin)?;
    let raw: MorphismFile = typed(text, origin)?;
    let source = resolve_frame_ref(&raw.source, base, origin)?.frame;
    let target = resolve_frame_ref(&raw.target, base, origin)?.frame;
    let map = total_table(&source, &raw.fstar, origin)?
        .into_iter()
        .map(|v| elem(&target, string_value(v, origin)?, origin))
        .collect::<Result<Vec<_>, _>>()?;
    validate_morphism(&source, &target, map).map_err(|source| IoError::Morphism {
        origin: origin.to_string(),
        source,
    })
}

pub fn load_morphism(path: &Path) -> Result<FrameMorphism, IoError> {
    morphism_from_text(&read_text(path)?, &path.display().to_string(), &base_dir(path))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FiniteValuationFile {
    frame: Value,
    mu: BTreeMap<String, Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalValuationFile {
    descriptor: Value,
}

#[derive(Clone, Debug)]
pub enum LoadedValuation {
    Finite(Valuation),
    Interval(Descriptor),
}

fn rational_value(v: &Value, origin: &str) -> Result<Q, IoError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(shape(origin, format!("expected a rational, found {v}"))),
    };
    parse_rational(&text).map_err(|e| shape(origin, e.to_string()))
}

/// `{"frame": <ref>, "mu": {"elem": "p/q", ...}}` or `{"descriptor": ...}`.
pub fn valuation_from_text(text: &str, origin: &str, base: &Path) -> Result<LoadedValuation, IoError> {
    let map = object(text, origin)?;
    if map.contains_key("descriptor") {
        let raw: IntervalValuationFile = typed(text, origin)?;
        let d = Descriptor::from_json(&raw.descriptor).map_err(|source| IoError::Descriptor {
            origin: origin.to_string(),
            source,
        })?;
        return Ok(LoadedValuation::Interval(d));
    }
    let raw: FiniteValuationFile = typed(text, origin)?;
    let frame = resolve_frame_ref(&raw.frame, base, origin)?.frame;
    let values = total_table(&frame, &raw.mu, origin)?
        .into_iter()
        .map(|v| rational_value(v, origin))
        .collect::<Result<Vec<_>, _>>()?;
    validate_valuation(&frame, values)
        .map(LoadedValuation::Finite)
        .map_err(|source| IoError::Valuation {
            origin: origin.to_string(),
            source,
        })
}

pub fn load_valuation(path: &Path) -> Result<LoadedValuation, IoError> {
    valuation_from_text(&read_text(path)?, &path.display().to_string(), &base_dir(path))
}

/// A positive rational: `1e-3`, `0.001` or `1/1000`.
pub fn parse_tolerance(s: &str) -> Result<Q, IoError> {
    match parse_rational(s) {
        Ok(t) if t.is_positive() => Ok(t),
        _ => Err(IoError::Tolerance(s.to_string())),
    }
}

/// Serializes a frame to the `{"elements", "leq"}` format with only the
/// covering pairs listed.
pub fn frame_to_json(frame: &Frame) -> Value {
    serde_json::to_value(frame.to_spec()).expect("frame specs serialize")
}

pub fn topology_to_json(t: &Topology) -> Value {
    serde_json::to_value(t.to_spec()).expect("topology specs serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::ratopen::q;

    fn here() -> PathBuf {
        PathBuf::new()
    }

    #[test]
    fn frames_and_topologies() {
        let f = frame_from_text(r#"{"elements":["0","u","1"],"leq":[["0","u"],["u","1"]]}"#, "t").unwrap();
        assert_eq!(f.frame.len(), 3);
        let s = frame_from_text(r#"{"points":["1","2"],"opens":[[],["1"],["1","2"]]}"#, "s").unwrap();
        assert_eq!(s.frame.len(), 3);
        assert_eq!(s.frame.points().len(), 2);
        assert!(!s.frame.is_boolean());
        assert_eq!(builtin_frame("boolean-2").unwrap().len(), 4);
        assert!(builtin_frame("chain-0").is_none());
        assert_eq!(frame_from_text(&frame_to_json(&f.frame).to_string(), "r").unwrap().frame, f.frame);
    }

    #[test]
    fn positioned_errors() {
        let e = frame_from_text("", "empty.json").unwrap_err();
        assert!(matches!(e, IoError::Parse { .. }) && e.is_input_error());
        let e = frame_from_text("{\"elements\": [\"0\"],\n \"leq\": [], \"colour\": 1}", "x").unwrap_err();
        match e {
            IoError::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("colour"));
            }
            other => panic!("{other}"),
        }
        let e = frame_from_text(r#"{"elements": "0", "leq": []}"#, "x").unwrap_err();
        assert!(matches!(e, IoError::Parse { .. }));
        let e = frame_from_text("[1]", "x").unwrap_err();
        assert!(matches!(e, IoError::Shape { .. }));
        let m3 = r#"{"elements":["0","a","b","c","1"],"leq":[["0","a"],["0","b"],["0","c"],["a","1"],["b","1"],["c","1"]]}"#;
        let e = frame_from_text(m3, "m3").unwrap_err();
        assert!(matches!(e, IoError::Frame { source: FrameError::NotDistributive { .. }, .. }));
        assert!(!e.is_input_error());
    }

    #[test]
    fn nuclei_morphisms_valuations() {
        let n = nucleus_from_text(r#"{"frame":"chain-3","map":{"0":"0","1":"2","2":"2"}}"#, "n", &here()).unwrap();
        assert_eq!(n.nucleus.apply(Elem(1)), Elem(2));
        let bad = nucleus_from_text(r#"{"frame":"chain-3","map":{"0":"1","1":"1","2":"1"}}"#, "n", &here());
        assert!(matches!(bad, Err(IoError::Nucleus { .. })));
        let missing = nucleus_from_text(r#"{"frame":"chain-3","map":{"0":"0"}}"#, "n", &here());
        assert!(matches!(missing, Err(IoError::Shape { .. })));

        let f = morphism_from_text(
            r#"{"source":"chain-3","target":"boolean-2","fstar":{"0":"{}","1":"{a}","2":"{a,b}"}}"#,
            "m",
            &here(),
        )
        .unwrap();
        assert!(!f.is_embedding());

        let v = valuation_from_text(
            r#"{"frame":"boolean-2","mu":{"{}":"0","{a}":"1/3","{b}":"2/3","{a,b}":1}}"#,
            "v",
            &here(),
        )
        .unwrap();
        assert!(matches!(v, LoadedValuation::Finite(ref v) if *v.total() == q(1, 1)));
        let d = valuation_from_text(r#"{"descriptor": {"atoms": [["1/2", "1"]]}}"#, "d", &here()).unwrap();
        assert!(matches!(d, LoadedValuation::Interval(Descriptor::Atomic(_))));
    }

    #[test]
    fn tolerances() {
        assert_eq!(parse_tolerance("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_tolerance("1/1000").unwrap(), q(1, 1000));
        assert!(parse_tolerance("0").is_err());
        assert!(parse_tolerance("-1").is_err());
    }
}
