//! Structural differences between two specifications.
//!
//! Paths are JSON Pointers into the serialized specification. A channel
//! rename is a single `changed` entry at `/encoding/<old>` whose before and
//! after values are the channel keys.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::json::{from_parts, to_parts, DocParts};
use super::ChartSpec;
use crate::error::DiffError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiffKind {
    Added,
    Removed,
    Changed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffEntry {
    pub path: String,
    pub kind: DiffKind,
    pub before: Option<Value>,
    pub after: Option<Value>,
}

impl DiffEntry {
    fn added(path: String, after: Value) -> Self {
        DiffEntry {
            path,
            kind: DiffKind::Added,
            before: None,
            after: Some(after),
        }
    }

    fn removed(path: String, before: Value) -> Self {
        DiffEntry {
            path,
            kind: DiffKind::Removed,
            before: Some(before),
            after: None,
        }
    }

    fn changed(path: String, before: Value, after: Value) -> Self {
        DiffEntry {
            path,
            kind: DiffKind::Changed,
            before: Some(before),
            after: Some(after),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpecDiff {
    pub entries: Vec<DiffEntry>,
}

impl SpecDiff {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

fn escape(segment: &str) -> String {
    segment.replace('~', "~0").replace('/', "~1")
}

fn unescape(segment: &str) -> String {
    segment.replace("~1", "/").replace("~0", "~")
}

fn child(path: &str, key: &str) -> String {
    format!("{path}/{}", escape(key))
}

fn diff_value(path: String, a: &Value, b: &Value, out: &mut Vec<DiffEntry>) {
    if a == b {
        return;
    }
    match (a, b) {
        (Value::Object(ma), Value::Object(mb)) => diff_map(&path, ma, mb, out),
        _ => out.push(DiffEntry::changed(path, a.clone(), b.clone())),
    }
}

fn diff_map(path: &str, a: &Map<String, Value>, b: &Map<String, Value>, out: &mut Vec<DiffEntry>) {
    for (k, va) in a {
        match b.get(k) {
            Some(vb) => diff_value(child(path, k), va, vb, out),
            None => out.push(DiffEntry::removed(child(path, k), va.clone())),
        }
    }
    for (k, vb) in b {
        if !a.contains_key(k) {
            out.push(DiffEntry::added(child(path, k), vb.clone()));
        }
    }
}

fn diff_optional(path: &str, a: &Option<Value>, b: &Option<Value>, out: &mut Vec<DiffEntry>) {
    match (a, b) {
        (Some(a), Some(b)) => diff_value(path.to_string(), a, b, out),
        (Some(a), None) => out.push(DiffEntry::removed(path.to_string(), a.clone())),
        (None, Some(b)) => out.push(DiffEntry::added(path.to_string(), b.clone())),
        (None, None) => {}
    }
}

fn has_duplicates(entries: &[(String, Value)]) -> bool {
    entries
        .iter()
        .enumerate()
        .any(|(i, (k, _))| entries[..i].iter().any(|(k2, _)| k2 == k))
}

fn pairs_value(entries: &[(String, Value)]) -> Value {
    Value::Array(
        entries
            .iter()
            .map(|(k, v)| Value::Array(vec![Value::String(k.clone()), v.clone()]))
            .collect(),
    )
}

fn keys_value(keys: &[String]) -> Value {
    Value::Array(keys.iter().cloned().map(Value::String).collect())
}

fn diff_encodings(a: &[(String, Value)], b: &[(String, Value)], out: &mut Vec<DiffEntry>) {
    if a == b {
        return;
    }
    if has_duplicates(a) || has_duplicates(b) {
        out.push(DiffEntry::changed(
            "/encoding".into(),
            pairs_value(a),
            pairs_value(b),
        ));
        return;
    }
    let lookup = |entries: &[(String, Value)], key: &str| -> Option<Value> {
        entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.clone())
    };
    let removed: Vec<usize> = (0..a.len())
        .filter(|&i| lookup(b, &a[i].0).is_none())
        .collect();
    let added: Vec<usize> = (0..b.len())
        .filter(|&j| lookup(a, &b[j].0).is_none())
        .collect();

    // Pair removed/added keys into renames: identical content first, then
    // same position.
    let mut renames: Vec<(usize, usize)> = Vec::new();
    for &i in &removed {
        if let Some(&j) = added
            .iter()
            .find(|&&j| b[j].1 == a[i].1 && !renames.iter().any(|&(_, jj)| jj == j))
        {
            renames.push((i, j));
        }
    }
    for &i in &removed {
        if renames.iter().any(|&(ii, _)| ii == i) {
            continue;
        }
        if added.contains(&i) && !renames.iter().any(|&(_, jj)| jj == i) {
            renames.push((i, i));
        }
    }
    renames.sort();

    for &i in &removed {
        if !renames.iter().any(|&(ii, _)| ii == i) {
            out.push(DiffEntry::removed(child("/encoding", &a[i].0), a[i].1.clone()));
        }
    }
    for &(i, j) in &renames {
        out.push(DiffEntry::changed(
            child("/encoding", &a[i].0),
            Value::String(a[i].0.clone()),
            Value::String(b[j].0.clone()),
        ));
    }
    for (key, vb) in b {
        if let Some(&(i, _)) = renames.iter().find(|&&(_, j)| &b[j].0 == key) {
            diff_value(child("/encoding", key), &a[i].1, vb, out);
        } else if let Some(va) = lookup(a, key) {
            diff_value(child("/encoding", key), &va, vb, out);
        }
    }
    for &j in &added {
        if !renames.iter().any(|&(_, jj)| jj == j) {
            out.push(DiffEntry::added(child("/encoding", &b[j].0), b[j].1.clone()));
        }
    }

    // Key order after the entries above are applied; emit a reorder entry
    // when it differs from the target.
    let mut order: Vec<String> = Vec::new();
    for (i, (k, _)) in a.iter().enumerate() {
        if let Some(&(_, j)) = renames.iter().find(|&&(ii, _)| ii == i) {
            order.push(b[j].0.clone());
        } else if !removed.contains(&i) {
            order.push(k.clone());
        }
    }
    for &j in &added {
        if !renames.iter().any(|&(_, jj)| jj == j) {
            order.push(b[j].0.clone());
        }
    }
    let target: Vec<String> = b.iter().map(|(k, _)| k.clone()).collect();
    if order != target {
        out.push(DiffEntry::changed(
            "/encoding".into(),
            keys_value(&order),
            keys_value(&target),
        ));
    }
}

/// Computes the entries that turn `before` into `after`.
pub fn diff_specs(before: &ChartSpec, after: &ChartSpec) -> SpecDiff {
    let a = to_parts(before);
    let b = to_parts(after);
    let mut out = Vec::new();
    diff_optional("/mark", &a.mark, &b.mark, &mut out);
    diff_encodings(
        a.encoding.as_deref().unwrap_or_default(),
        b.encoding.as_deref().unwrap_or_default(),
        &mut out,
    );
    diff_optional("/data", &a.data, &b.data, &mut out);
    diff_map("", &a.passthrough, &b.passthrough, &mut out);
    SpecDiff { entries: out }
}

fn fail(entry: &DiffEntry, reason: impl Into<String>) -> DiffError {
    DiffError {
        path: entry.path.clone(),
        reason: reason.into(),
    }
}

fn apply_in_value(target: &mut Value, segs: &[String], entry: &DiffEntry) -> Result<(), DiffError> {
    let Some((last, parents)) = segs.split_last() else {
        return match &entry.after {
            Some(v) => {
                *target = v.clone();
                Ok(())
            }
            None => Err(fail(entry, "cannot remove the root of a value")),
        };
    };
    let mut cur = target;
    for seg in parents {
        cur = cur
            .as_object_mut()
            .and_then(|m| m.get_mut(seg))
            .ok_or_else(|| fail(entry, format!("missing `{seg}`")))?;
    }
    let obj = cur
        .as_object_mut()
        .ok_or_else(|| fail(entry, "parent is not an object"))?;
    match entry.kind {
        DiffKind::Removed => {
            obj.shift_remove(last)
                .ok_or_else(|| fail(entry, format!("missing `{last}`")))?;
        }
        DiffKind::Added | DiffKind::Changed => {
            let v = entry
                .after
                .clone()
                .ok_or_else(|| fail(entry, "entry has no `after` value"))?;
            obj.insert(last.clone(), v);
        }
    }
    Ok(())
}

fn apply_in_optional(
    target: &mut Option<Value>,
    segs: &[String],
    entry: &DiffEntry,
) -> Result<(), DiffError> {
    if segs.is_empty() {
        *target = match entry.kind {
            DiffKind::Removed => None,
            _ => Some(
                entry
                    .after
                    .clone()
                    .ok_or_else(|| fail(entry, "entry has no `after` value"))?,
            ),
        };
        return Ok(());
    }
    let v = target
        .as_mut()
        .ok_or_else(|| fail(entry, "value is absent"))?;
    apply_in_value(v, segs, entry)
}

fn apply_encoding(
    encodings: &mut Vec<(String, Value)>,
    segs: &[String],
    entry: &DiffEntry,
) -> Result<(), DiffError> {
    let Some((key, rest)) = segs.split_first() else {
        let after = entry
            .after
            .as_ref()
            .and_then(Value::as_array)
            .ok_or_else(|| fail(entry, "expected an array"))?;
        let before_keys = entry
            .before
            .as_ref()
            .and_then(Value::as_array)
            .is_some_and(|b| b.iter().all(Value::is_string));
        if before_keys && after.iter().all(Value::is_string) {
            let mut reordered = Vec::with_capacity(after.len());
            for k in after {
                let k = k.as_str().unwrap_or_default();
                let pos = encodings
                    .iter()
                    .position(|(kk, _)| kk == k)
                    .ok_or_else(|| fail(entry, format!("missing channel `{k}`")))?;
                reordered.push(encodings.remove(pos));
            }
            if !encodings.is_empty() {
                return Err(fail(entry, "reorder does not cover every channel"));
            }
            *encodings = reordered;
        } else {
            *encodings = after
                .iter()
                .map(|pair| match pair.as_array().map(Vec::as_slice) {
                    Some([Value::String(k), v]) => Ok((k.clone(), v.clone())),
                    _ => Err(fail(entry, "expected [channel, encoding] pairs")),
                })
                .collect::<Result<_, _>>()?;
        }
        return Ok(());
    };
    let pos = encodings.iter().rposition(|(k, _)| k == key);
    if rest.is_empty() {
        match (entry.kind, &entry.after) {
            (DiffKind::Added, Some(v)) => encodings.push((key.clone(), v.clone())),
            (DiffKind::Removed, _) => {
                let pos = pos.ok_or_else(|| fail(entry, "no such channel"))?;
                encodings.remove(pos);
            }
            (DiffKind::Changed, Some(Value::String(new_key))) => {
                let pos = pos.ok_or_else(|| fail(entry, "no such channel"))?;
                encodings[pos].0 = new_key.clone();
            }
            (DiffKind::Changed, Some(v)) => {
                let pos = pos.ok_or_else(|| fail(entry, "no such channel"))?;
                encodings[pos].1 = v.clone();
            }
            _ => return Err(fail(entry, "entry has no `after` value")),
        }
        return Ok(());
    }
    let pos = pos.ok_or_else(|| fail(entry, "no such channel"))?;
    apply_in_value(&mut encodings[pos].1, rest, entry)
}

/// Applies diff entries in order.
pub fn apply_diff(spec: &ChartSpec, diff: &SpecDiff) -> Result<ChartSpec, DiffError> {
    let mut parts: DocParts = to_parts(spec);
    for entry in &diff.entries {
        let segs: Vec<String> = entry
            .path
            .strip_prefix('/')
            .ok_or_else(|| fail(entry, "path must start with `/`"))?
            .split('/')
            .map(unescape)
            .collect();
        let (head, rest) = segs.split_first().expect("split yields at least one item");
        match head.as_str() {
            "mark" => apply_in_optional(&mut parts.mark, rest, entry)?,
            "data" => apply_in_optional(&mut parts.data, rest, entry)?,
            "encoding" => {
                let encodings = parts.encoding.get_or_insert_with(Vec::new);
                apply_encoding(encodings, rest, entry)?;
            }
            key => {
                let mut slot = parts.passthrough.get(key).cloned();
                apply_in_optional(&mut slot, rest, entry)?;
                match slot {
                    Some(v) => {
                        parts.passthrough.insert(key.to_string(), v);
                    }
                    None => {
                        parts.passthrough.shift_remove(key);
                    }
                }
            }
        }
    }
    from_parts(parts).map_err(|e| DiffError {
        path: String::new(),
        reason: e.to_string(),
    })
}
