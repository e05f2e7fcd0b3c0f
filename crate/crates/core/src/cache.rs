//! JSON-lines persistence for the correlator memo table and the W_r
//! polynomials. Both files start with a schema tag line; records are one
//! JSON object per line with fractions as canonical `p/q` strings.

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::correlators::{CorrelatorKey, Engine, Insertion};
use crate::scalar::{fmt_rat, parse_rat};
use crate::wrpoly::{WrPolynomial, ZMonomial};
use crate::{Error, Result};

pub const CORRELATOR_SCHEMA: &str = "rspin.correlators.v1";
pub const WR_SCHEMA: &str = "rspin.wr.v1";

#[derive(Serialize, Deserialize)]
struct SchemaLine {
    schema: String,
}

#[derive(Serialize, Deserialize)]
struct CorrelatorRecord {
    r: u32,
    g: u32,
    ins: Vec<(u32, u32)>,
    val: String,
}

#[derive(Serialize, Deserialize)]
struct WrRecord {
    r: u32,
    terms: Vec<WrTermRecord>,
}

#[derive(Serialize, Deserialize)]
struct WrTermRecord {
    mon: Vec<(u32, u32)>,
    val: String,
}

fn bad(path: &Path, what: impl std::fmt::Display) -> Error {
    Error::Cache(format!("{}: {what}", path.display()))
}

/// Load all records matching the engine's r into its memo table; returns the
/// set of keys already present in the file (so a later save can append only
/// new entries). A missing file loads nothing.
pub fn load_correlators(path: &Path, engine: &mut Engine) -> Result<HashSet<CorrelatorKey>> {
    let mut present = HashSet::new();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(present),
        Err(e) => return Err(bad(path, e)),
    };
    let mut lines = BufReader::new(file).lines();
    let first = match lines.next() {
        Some(l) => l.map_err(|e| bad(path, e))?,
        None => return Ok(present),
    };
    let tag: SchemaLine = serde_json::from_str(&first).map_err(|e| bad(path, e))?;
    if tag.schema != CORRELATOR_SCHEMA {
        return Err(bad(path, format!("unexpected schema '{}'", tag.schema)));
    }
    for line in lines {
        let line = line.map_err(|e| bad(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: CorrelatorRecord = serde_json::from_str(&line).map_err(|e| bad(path, e))?;
        if rec.r != engine.r() {
            continue;
        }
        let ins = rec.ins.iter().map(|&(n, m)| Insertion::new(n, m)).collect();
        let key = CorrelatorKey::new(rec.g, ins);
        engine.cache_insert(key.clone(), parse_rat(&rec.val)?);
        present.insert(key);
    }
    Ok(present)
}

/// Append every cached entry not in `already_present`; creates the file
/// (with its schema line) if needed. Returns the number of records written.
pub fn append_correlators(
    path: &Path,
    engine: &Engine,
    already_present: &HashSet<CorrelatorKey>,
) -> Result<usize> {
    let fresh = !path.exists();
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| bad(path, e))?;
    if fresh {
        writeln!(
            file,
            "{}",
            serde_json::json!({ "schema": CORRELATOR_SCHEMA })
        )
        .map_err(|e| bad(path, e))?;
    }
    let mut entries: Vec<(&CorrelatorKey, &crate::Rat)> = engine
        .cache_iter()
        .filter(|(k, _)| !already_present.contains(*k))
        .collect();
    entries.sort_by(|a, b| a.0.cmp(b.0));
    let mut written = 0;
    for (key, val) in entries {
        let rec = CorrelatorRecord {
            r: engine.r(),
            g: key.g,
            ins: key.ins.iter().map(|t| (t.n, t.m)).collect(),
            val: fmt_rat(val),
        };
        writeln!(
            file,
            "{}",
            serde_json::to_string(&rec).map_err(|e| bad(path, e))?
        )
        .map_err(|e| bad(path, e))?;
        written += 1;
    }
    Ok(written)
}

/// Load W_r for the given r from the W-cache file, if recorded there.
pub fn load_wr(path: &Path, r: u32) -> Result<Option<WrPolynomial>> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(bad(path, e)),
    };
    let mut lines = BufReader::new(file).lines();
    let first = match lines.next() {
        Some(l) => l.map_err(|e| bad(path, e))?,
        None => return Ok(None),
    };
    let tag: SchemaLine = serde_json::from_str(&first).map_err(|e| bad(path, e))?;
    if tag.schema != WR_SCHEMA {
        return Err(bad(path, format!("unexpected schema '{}'", tag.schema)));
    }
    for line in lines {
        let line = line.map_err(|e| bad(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: WrRecord = serde_json::from_str(&line).map_err(|e| bad(path, e))?;
        if rec.r != r {
            continue;
        }
        let mut terms = std::collections::BTreeMap::new();
        for t in rec.terms {
            terms.insert(ZMonomial::new(t.mon), parse_rat(&t.val)?);
        }
        return Ok(Some(WrPolynomial::from_terms(r, terms)));
    }
    Ok(None)
}

/// Append a W_r record (creating the file with its schema line if needed).
pub fn append_wr(path: &Path, wr: &WrPolynomial) -> Result<()> {
    let fresh = !path.exists();
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| bad(path, e))?;
    if fresh {
        writeln!(file, "{}", serde_json::json!({ "schema": WR_SCHEMA }))
            .map_err(|e| bad(path, e))?;
    }
    let rec = WrRecord {
        r: wr.r(),
        terms: wr
            .terms()
            .map(|(m, c)| WrTermRecord {
                mon: m.pairs().to_vec(),
                val: fmt_rat(c),
            })
            .collect(),
    };
    writeln!(
        file,
        "{}",
        serde_json::to_string(&rec).map_err(|e| bad(path, e))?
    )
    .map_err(|e| bad(path, e))?;
    Ok(())
}

/// Load W_r from the cache or build it, recording a fresh build.
pub fn wr_cached(path: Option<&Path>, r: u32, depth: u32) -> Result<WrPolynomial> {
    if let Some(p) = path {
        if let Some(wr) = load_wr(p, r)? {
            return Ok(wr);
        }
    }
    let table = crate::psido::GammaTable::build(r, depth)?;
    let wr = crate::wrpoly::build_wr_from_table(&table)?;
    if let Some(p) = path {
        append_wr(p, &wr)?;
    }
    Ok(wr)
}
