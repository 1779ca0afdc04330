//! Instance file format.
//!
//! ```text
//! TED-INSTANCE v1
//! ALPHABET <size>
//! TREE1 <canonical tree text>
//! TREE2 <canonical tree text>
//! COSTS MATCH <count>
//! <a> <b> <decimal-bigint|inf>
//! COSTS DELETE <count>          (optional; marks a standard-formulation model)
//! <a> <decimal-bigint>
//! KEY <name>=<value> ...        (optional extraction key)
//! ```
//!
//! Absent match pairs mean +infinity. Emission is canonical (sorted entries,
//! no infinite lines), so parse then emit is the identity on canonical files.

use crate::cost::Cost;
use crate::model::CostModel;
use crate::tree::{parse_tree, serialize_tree, Label, LabeledTree};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

/// A parsed instance: two trees, a model, and an optional extraction key.
#[derive(Clone, Debug)]
pub struct Instance {
    pub f: LabeledTree,
    pub g: LabeledTree,
    pub model: CostModel,
    pub key: BTreeMap<String, String>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("expected header `TED-INSTANCE v1`")]
    BadHeader,
    #[error("line {0}: {1}")]
    BadLine(usize, String),
    #[error("tree: {0}")]
    Tree(#[from] crate::tree::ParseError),
    #[error("model: {0}")]
    Model(#[from] crate::model::ModelError),
}

fn bad(ln: usize, msg: impl Into<String>) -> InstanceError {
    InstanceError::BadLine(ln, msg.into())
}

pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let mut lines = text.lines().enumerate().peekable();
    let mut next_line = |expect: &str| -> Result<(usize, String), InstanceError> {
        lines
            .next()
            .map(|(i, l)| (i + 1, l.to_owned()))
            .ok_or_else(|| bad(0, format!("unexpected end of file, expected {expect}")))
    };

    let (ln, header) = next_line("header")?;
    if header.trim() != "TED-INSTANCE v1" {
        return Err(if ln == 1 {
            InstanceError::BadHeader
        } else {
            bad(ln, "bad header")
        });
    }
    let (ln, alpha) = next_line("ALPHABET")?;
    let alphabet: u32 = alpha
        .trim()
        .strip_prefix("ALPHABET ")
        .ok_or_else(|| bad(ln, "expected `ALPHABET <size>`"))?
        .trim()
        .parse()
        .map_err(|_| bad(ln, "invalid alphabet size"))?;

    let (ln, t1) = next_line("TREE1")?;
    let f = parse_tree(
        t1.strip_prefix("TREE1 ")
            .ok_or_else(|| bad(ln, "expected `TREE1 <tree>`"))?,
    )?;
    let (ln, t2) = next_line("TREE2")?;
    let g = parse_tree(
        t2.strip_prefix("TREE2 ")
            .ok_or_else(|| bad(ln, "expected `TREE2 <tree>`"))?,
    )?;

    let (ln, mhead) = next_line("COSTS MATCH")?;
    let match_count: usize = mhead
        .trim()
        .strip_prefix("COSTS MATCH ")
        .ok_or_else(|| bad(ln, "expected `COSTS MATCH <count>`"))?
        .trim()
        .parse()
        .map_err(|_| bad(ln, "invalid count"))?;

    let mut match_entries = Vec::with_capacity(match_count);
    for _ in 0..match_count {
        let (ln, line) = next_line("match cost line")?;
        let mut parts = line.split_whitespace();
        let msg = "expected `<a> <b> <cost>`";
        let a: u32 = parts
            .next()
            .ok_or_else(|| bad(ln, msg))?
            .parse()
            .map_err(|_| bad(ln, msg))?;
        let b: u32 = parts
            .next()
            .ok_or_else(|| bad(ln, msg))?
            .parse()
            .map_err(|_| bad(ln, msg))?;
        let c = Cost::from_str(parts.next().ok_or_else(|| bad(ln, msg))?)
            .map_err(|e| bad(ln, e.to_string()))?;
        if parts.next().is_some() {
            return Err(bad(ln, msg));
        }
        match_entries.push((Label(a), Label(b), c));
    }

    let mut delete_entries: Option<Vec<(Label, Cost)>> = None;
    let mut key = BTreeMap::new();
    while let Some((ln0, line)) = lines.next() {
        let ln = ln0 + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(count) = line.strip_prefix("COSTS DELETE ") {
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| bad(ln, "invalid count"))?;
            let mut entries = Vec::with_capacity(count);
            for _ in 0..count {
                let (ln, line) = lines
                    .next()
                    .map(|(i, l)| (i + 1, l.to_owned()))
                    .ok_or_else(|| bad(0, "unexpected end of delete block"))?;
                let mut parts = line.split_whitespace();
                let msg = "expected `<a> <cost>`";
                let a: u32 = parts
                    .next()
                    .ok_or_else(|| bad(ln, msg))?
                    .parse()
                    .map_err(|_| bad(ln, msg))?;
                let c = Cost::from_str(parts.next().ok_or_else(|| bad(ln, msg))?)
                    .map_err(|e| bad(ln, e.to_string()))?;
                if parts.next().is_some() {
                    return Err(bad(ln, msg));
                }
                entries.push((Label(a), c));
            }
            delete_entries = Some(entries);
        } else if let Some(kv) = line.strip_prefix("KEY") {
            for item in kv.split_whitespace() {
                let (k, v) = item
                    .split_once('=')
                    .ok_or_else(|| bad(ln, "expected `name=value` in KEY"))?;
                key.insert(k.to_owned(), v.to_owned());
            }
        } else {
            return Err(bad(ln, format!("unexpected line `{line}`")));
        }
    }

    let mut model = if delete_entries.is_some() {
        CostModel::new_standard(alphabet)
    } else {
        CostModel::new_matching(alphabet)
    };
    for (a, b, c) in match_entries {
        model.set_match(a, b, c)?;
    }
    for (a, c) in delete_entries.into_iter().flatten() {
        model.set_delete(a, c)?;
    }

    Ok(Instance { f, g, model, key })
}

pub fn emit_instance(inst: &Instance) -> String {
    let mut out = String::from("TED-INSTANCE v1\n");
    let _ = writeln!(out, "ALPHABET {}", inst.model.alphabet_size());
    let _ = writeln!(out, "TREE1 {}", serialize_tree(&inst.f));
    let _ = writeln!(out, "TREE2 {}", serialize_tree(&inst.g));
    let _ = writeln!(out, "COSTS MATCH {}", inst.model.finite_pair_count());
    for (&(a, b), c) in inst.model.iter_finite() {
        let _ = writeln!(out, "{} {} {}", a.0, b.0, c);
    }
    if inst.model.has_delete_costs() {
        let dels: Vec<_> = inst.model.iter_delete().collect();
        let _ = writeln!(out, "COSTS DELETE {}", dels.len());
        for (a, c) in dels {
            let _ = writeln!(out, "{} {}", a.0, c);
        }
    }
    if !inst.key.is_empty() {
        let kv: Vec<String> = inst
            .key
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let _ = writeln!(out, "KEY {}", kv.join(" "));
    }
    out
}
