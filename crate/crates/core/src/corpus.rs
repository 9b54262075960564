//! The test corpus: every topology on at most three points, chains of length
//! 1 to 6, the Boolean algebras `2^0` to `2^3`, and the non-distributive
//! lattices M3 and N5 as negative cases.
//!
//! Files under a `negative/` directory are expected to be rejected.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::frame::{all_topologies, boolean, chain, Frame};
use crate::io::{frame_from_text, frame_to_json, topology_to_json, IoError, LoadedFrame};

/// Environment variable naming a corpus directory.
pub const CORPUS_ENV: &str = "LOCALE_LAB_CORPUS";

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    /// Path relative to the corpus root, with `/` separators.
    pub name: String,
    pub negative: bool,
    pub loaded: Result<LoadedFrame, String>,
}

impl CorpusEntry {
    pub fn frame(&self) -> Option<&Arc<Frame>> {
        self.loaded.as_ref().ok().map(|l| &l.frame)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
}

fn m3() -> Value {
    json!({
        "elements": ["0", "a", "b", "c", "1"],
        "leq": [["0", "a"], ["0", "b"], ["0", "c"], ["a", "1"], ["b", "1"], ["c", "1"]]
    })
}

fn n5() -> Value {
    json!({
        "elements": ["0", "a", "b", "c", "1"],
        "leq": [["0", "a"], ["a", "b"], ["b", "1"], ["0", "c"], ["c", "1"]]
    })
}

/// File contents of the standard corpus, keyed by relative path, in
/// canonical order.
pub fn standard_files() -> Vec<(String, String)> {
    let pretty = |v: &Value| {
        let mut s = serde_json::to_string_pretty(v).expect("json");
        s.push('\n');
        s
    };
    let mut files = Vec::new();
    for n in 0..=3 {
        for (k, t) in all_topologies(n).iter().enumerate() {
            files.push((format!("topologies/top-{n}-{k:02}.json"), pretty(&topology_to_json(t))));
        }
    }
    for n in 1..=6 {
        files.push((format!("chains/chain-{n}.json"), pretty(&frame_to_json(&chain(n)))));
    }
    for n in 0..=3 {
        files.push((format!("boolean/boolean-{n}.json"), pretty(&frame_to_json(&boolean(n)))));
    }
    files.push(("negative/m3.json".into(), pretty(&m3())));
    files.push(("negative/n5.json".into(), pretty(&n5())));
    files.sort();
    files
}

fn entry(name: String, text: &str) -> CorpusEntry {
    CorpusEntry {
        negative: name.split('/').any(|part| part == "negative"),
        loaded: frame_from_text(text, &name).map_err(|e| e.to_string()),
        name,
    }
}

impl Corpus {
    /// The standard corpus, generated in memory.
    pub fn standard() -> Corpus {
        Corpus {
            entries: standard_files()
                .into_iter()
                .map(|(name, text)| entry(name, &text))
                .collect(),
        }
    }

    /// Every `*.json` file below `root`, in path order.
    pub fn load(root: &Path) -> Result<Corpus, IoError> {
        let mut paths = Vec::new();
        collect_json(root, &mut paths)?;
        paths.sort();
        let mut entries = Vec::new();
        for p in paths {
            let rel = p
                .strip_prefix(root)
                .unwrap_or(&p)
                .components()
                .map(|c| c.as_os_str().to_string_lossy().into_owned())
                .collect::<Vec<_>>()
                .join("/");
            entries.push(entry(rel, &crate::io::read_text(&p)?));
        }
        Ok(Corpus { entries })
    }

    pub fn export(root: &Path) -> Result<usize, IoError> {
        let files = standard_files();
        for (name, text) in &files {
            let path = root.join(name);
            let write = || -> std::io::Result<()> {
                if let Some(dir) = path.parent() {
                    std::fs::create_dir_all(dir)?;
                }
                std::fs::write(&path, text)
            };
            write().map_err(|e| IoError::Read {
                origin: path.display().to_string(),
                message: e.to_string(),
            })?;
        }
        Ok(files.len())
    }

    /// Valid frames with at most `max_size` elements, in order.
    pub fn frames(&self, max_size: usize) -> impl Iterator<Item = &CorpusEntry> {
        self.entries
            .iter()
            .filter(move |e| e.frame().is_some_and(|f| f.len() <= max_size))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn collect_json(dir: &Path, out: &mut Vec<PathBuf>) -> Result<(), IoError> {
    let read_err = |e: std::io::Error| IoError::Read {
        origin: dir.display().to_string(),
        message: e.to_string(),
    };
    for item in std::fs::read_dir(dir).map_err(read_err)? {
        let path = item.map_err(read_err)?.path();
        if path.is_dir() {
            collect_json(&path, out)?;
        } else if path.extension().is_some_and(|x| x == "json") {
            out.push(path);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_corpus_shape() {
        let c = Corpus::standard();
        let count = |prefix: &str| c.entries.iter().filter(|e| e.name.starts_with(prefix)).count();
        assert_eq!(count("topologies/top-3-"), 29);
        assert_eq!(count("topologies/"), 1 + 1 + 4 + 29);
        assert_eq!(count("chains/"), 6);
        assert_eq!(count("boolean/"), 4);
        for e in &c.entries {
            assert_eq!(e.loaded.is_err(), e.negative, "{}", e.name);
        }
        assert!(c.frames(8).count() == c.len() - 2);
    }

    #[test]
    fn shipped_corpus_matches_the_generator() {
        let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
        let loaded = Corpus::load(&root).unwrap();
        let names: Vec<&str> = loaded.entries.iter().map(|e| e.name.as_str()).collect();
        let files = standard_files();
        let expected: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, expected);
        for (name, text) in &files {
            assert_eq!(&std::fs::read_to_string(root.join(name)).unwrap(), text, "{name}");
        }
    }
}
