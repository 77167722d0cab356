//! JSON file formats. Field elements are lowercase hex strings of their canonical value.

use std::fs;
use std::path::Path;

use locregen::{GfContext, GfElement, VectorCodeword};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub fn hex(e: GfElement) -> String {
    format!("{:x}", e.value())
}

pub fn parse_hex(f: &GfContext, s: &str) -> Result<GfElement> {
    let digits = s.strip_prefix("0x").unwrap_or(s);
    let v =
        u64::from_str_radix(digits, 16).map_err(|_| CliError::Invalid(format!("not a hex field element: {s:?}")))?;
    Ok(f.element(v)?)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse { path: path.into(), source })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("in-memory serialization cannot fail");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub q: u32,
    /// Reduction polynomial bitmask for binary fields.
    pub modulus: Option<u32>,
}

impl From<&GfContext> for FieldJson {
    fn from(f: &GfContext) -> Self {
        FieldJson { q: f.order(), modulus: f.is_binary().then(|| f.modulus()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageFile {
    pub symbols: Vec<String>,
}

impl MessageFile {
    pub fn new(msg: &[GfElement]) -> Self {
        MessageFile { symbols: msg.iter().map(|&e| hex(e)).collect() }
    }

    pub fn parse(&self, f: &GfContext, expected: usize) -> Result<Vec<GfElement>> {
        if self.symbols.len() != expected {
            return Err(CliError::Invalid(format!(
                "message has {} symbols, code dimension is {expected}",
                self.symbols.len()
            )));
        }
        self.symbols.iter().map(|s| parse_hex(f, s)).collect()
    }
}

/// One node's content: a bare symbol for scalar codes, a list otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NodeJson {
    Scalar(String),
    Vector(Vec<String>),
}

/// A codeword with erased nodes as `null`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodewordFile {
    pub nodes: Vec<Option<NodeJson>>,
}

impl CodewordFile {
    pub fn new(nodes: &[Option<Vec<GfElement>>], scalar: bool) -> Self {
        let nodes = nodes
            .iter()
            .map(|node| {
                node.as_ref().map(|syms| match (scalar, syms.as_slice()) {
                    (true, [s]) => NodeJson::Scalar(hex(*s)),
                    _ => NodeJson::Vector(syms.iter().map(|&e| hex(e)).collect()),
                })
            })
            .collect();
        CodewordFile { nodes }
    }

    pub fn from_codeword(c: &VectorCodeword, scalar: bool) -> Self {
        let nodes: Vec<Option<Vec<GfElement>>> = c.nodes().iter().cloned().map(Some).collect();
        Self::new(&nodes, scalar)
    }

    /// Node contents, `None` where erased.
    pub fn parse(&self, f: &GfContext, n: usize, alpha: usize) -> Result<Vec<Option<Vec<GfElement>>>> {
        if self.nodes.len() != n {
            return Err(CliError::Invalid(format!("codeword has {} nodes, code length is {n}", self.nodes.len())));
        }
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, node)| {
                let Some(node) = node else {
                    return Ok(None);
                };
                let syms = match node {
                    NodeJson::Scalar(s) => vec![parse_hex(f, s)?],
                    NodeJson::Vector(v) => v.iter().map(|s| parse_hex(f, s)).collect::<Result<Vec<_>>>()?,
                };
                if syms.len() != alpha {
                    return Err(CliError::Invalid(format!("node {i} holds {} symbols, expected {alpha}", syms.len())));
                }
                Ok(Some(syms))
            })
            .collect()
    }
}
