//! Presentation files, GAP-style export and pipeline manifests.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pres::Presentation;
use crate::twogen::CountablePresentation;
use crate::word::{parse_word_at, valid_name, Sym, Word, FRESH_SEP};

pub const HEADER: &str = "higman-presentation 1";
pub const GENERATED: &str = "generated";

/// Integer value of a placeholder such as `k`, `k-1`, `2*k+3`.
fn eval_placeholder(expr: &str, var: &str, k: i64) -> Option<i64> {
    let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    let mut total = 0i64;
    let mut rest = s.as_str();
    let mut sign = 1;
    if let Some(r) = rest.strip_prefix('-') {
        sign = -1;
        rest = r;
    }
    loop {
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let term = &rest[..end];
        let val = match term.split_once('*') {
            Some((c, v)) if v == var => c.parse::<i64>().ok()? * k,
            Some(_) => return None,
            None if term == var => k,
            None => term.parse::<i64>().ok()?,
        };
        total += sign * val;
        if end == rest.len() {
            return Some(total);
        }
        sign = if &rest[end..end + 1] == "-" { -1 } else { 1 };
        rest = &rest[end + 1..];
    }
}

/// Replaces every `{expr}` in `tpl` by its value at `var = k`.
fn instantiate(tpl: &str, var: &str, k: i64, line: usize, col0: usize) -> Result<String> {
    let mut out = String::new();
    let mut rest = tpl;
    let mut pos = 0;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = rest[open..]
            .find('}')
            .ok_or_else(|| Error::parse(line, col0 + pos + open, "unclosed '{'"))?;
        let inner = &rest[open + 1..open + close];
        let v = eval_placeholder(inner, var, k).ok_or_else(|| {
            Error::parse(line, col0 + pos + open, format!("bad placeholder '{{{inner}}}'"))
        })?;
        out.push_str(&v.to_string());
        pos += open + close + 1;
        rest = &rest[open + close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

fn parse_range(text: &str, line: usize) -> Result<(String, i64, i64)> {
    let body = text
        .strip_prefix("range")
        .ok_or_else(|| Error::parse(line, 1, "expected 'range VAR = A..B'"))?;
    let (var, span) =
        body.split_once('=').ok_or_else(|| Error::parse(line, 7, "expected '=' in range"))?;
    let var = var.trim();
    if !valid_name(var, false) {
        return Err(Error::parse(line, 7, format!("bad range variable '{var}'")));
    }
    let (a, b) = span.split_once("..").ok_or_else(|| Error::parse(line, 1, "expected 'A..B'"))?;
    let a: i64 = a.trim().parse().map_err(|_| Error::parse(line, 1, "bad range start"))?;
    let b: i64 = b.trim().parse().map_err(|_| Error::parse(line, 1, "bad range end"))?;
    if a > b {
        return Err(Error::parse(line, 1, "empty range"));
    }
    Ok((var.to_string(), a, b))
}

enum Pending {
    Gens(Vec<(String, usize)>),
    Family(String, usize),
}

/// Parses the documented grammar; families are materialized and relators reduced.
pub fn parse_presentation(text: &str) -> Result<CountablePresentation> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hl, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with("--"))
        .ok_or_else(|| Error::parse(1, 1, "empty file"))?;
    let header = header.trim();
    let minted = match header.strip_prefix(HEADER) {
        Some("") => false,
        Some(r) if r.trim() == GENERATED => true,
        _ => return Err(Error::parse(hl, 1, format!("expected header '{HEADER}'"))),
    };
    let mut out = CountablePresentation::default();
    let mut raw_rels: Vec<(String, usize, usize)> = Vec::new();
    let mut in_rels = false;
    let mut pending: Option<(Pending, usize)> = None;
    let mut saw_gens = false;
    let name_ok = |n: &str| valid_name(n, minted);
    for (ln, full) in lines {
        let line = full.trim();
        let col0 = full.len() - full.trim_start().len() + 1;
        if line.is_empty() || line.starts_with("--") {
            continue;
        }
        if let Some((p, pl)) = pending.take() {
            let (var, a, b) = parse_range(line, ln).map_err(|e| match e {
                Error::Parse { msg, .. } if !line.starts_with("range") => {
                    Error::parse(pl, 1, format!("template needs a range line next ({msg})"))
                }
                e => e,
            })?;
            match p {
                Pending::Gens(items) => {
                    for k in a..=b {
                        for (tpl, c) in &items {
                            let n = instantiate(tpl, &var, k, pl, *c)?;
                            if !name_ok(&n) {
                                return Err(Error::parse(pl, *c, format!("bad generator name '{n}'")));
                            }
                            out.gens.push(Sym::new(&n));
                        }
                    }
                }
                Pending::Family(tpl, c) => {
                    for k in a..=b {
                        raw_rels.push((instantiate(&tpl, &var, k, pl, c)?, pl, c));
                    }
                }
            }
            continue;
        }
        if let Some(n) = line.strip_prefix("name:") {
            out.name = n.trim().to_string();
        } else if line == "torsion-free" {
            out.torsion_free = true;
        } else if let Some(list) = line.strip_prefix("generators:") {
            saw_gens = true;
            let mut templated = Vec::new();
            let base = col0 + "generators:".len();
            let mut off = 0;
            for item in list.split(',') {
                let c = base + off + (item.len() - item.trim_start().len());
                off += item.len() + 1;
                let item = item.trim();
                if item.is_empty() {
                    continue;
                }
                if item.contains('{') {
                    templated.push((item.to_string(), c));
                } else if name_ok(item) {
                    out.gens.push(Sym::new(item));
                } else {
                    return Err(Error::parse(ln, c, format!("bad generator name '{item}'")));
                }
            }
            if !templated.is_empty() {
                pending = Some((Pending::Gens(templated), ln));
            }
        } else if line == "relators:" {
            in_rels = true;
        } else if let Some(tpl) = line.strip_prefix("family:") {
            let c = col0 + "family:".len() + (tpl.len() - tpl.trim_start().len());
            pending = Some((Pending::Family(tpl.trim().to_string(), c), ln));
        } else if in_rels {
            raw_rels.push((line.to_string(), ln, col0));
        } else {
            return Err(Error::parse(ln, col0, format!("unexpected line '{line}'")));
        }
    }
    if let Some((_, pl)) = pending {
        return Err(Error::parse(pl, 1, "template needs a range line next"));
    }
    if !saw_gens || out.gens.is_empty() {
        return Err(Error::parse(hl, 1, "empty generator list"));
    }
    let known: HashSet<Sym> = out.gens.iter().cloned().collect();
    if known.len() != out.gens.len() {
        return Err(Error::parse(hl, 1, "duplicate generator"));
    }
    for (text, ln, c) in raw_rels {
        let w = parse_word_at(&text, ln, c, minted)?;
        if let Some(s) = w.generators().into_iter().find(|s| !known.contains(s)) {
            let col = text.find(s.as_str()).map(|i| c + i).unwrap_or(c);
            return Err(Error::parse(ln, col, format!("unknown generator '{s}' in relator")));
        }
        out.rels.push(w);
    }
    Ok(out)
}

pub fn print_presentation(p: &CountablePresentation) -> String {
    let minted = p.gens.iter().any(|s| s.is_minted());
    let mut s = String::new();
    if minted {
        let _ = writeln!(s, "{HEADER} {GENERATED}");
    } else {
        let _ = writeln!(s, "{HEADER}");
    }
    let _ = writeln!(s, "name: {}", p.name);
    if p.torsion_free {
        let _ = writeln!(s, "torsion-free");
    }
    let names: Vec<&str> = p.gens.iter().map(|g| g.as_str()).collect();
    let _ = writeln!(s, "generators: {}", names.join(", "));
    let _ = writeln!(s, "relators:");
    for r in &p.rels {
        let _ = writeln!(s, "{r}");
    }
    s
}

pub fn as_countable(p: &Presentation) -> CountablePresentation {
    CountablePresentation { name: p.name.clone(), gens: p.gens.clone(), rels: p.rels.clone(), torsion_free: false }
}

pub fn as_finite(c: &CountablePresentation) -> Presentation {
    Presentation { name: c.name.clone(), gens: c.gens.clone(), rels: c.rels.clone() }
}

pub fn print_finite(p: &Presentation) -> String {
    print_presentation(&as_countable(p))
}

/// Subgroup files: one generator word per line under `subgroup-of: NAME`.
pub fn print_subgroup(ambient: &str, gens: &[Word]) -> String {
    let mut s = format!("subgroup-of: {ambient}\n");
    for w in gens {
        let _ = writeln!(s, "{w}");
    }
    s
}

pub fn parse_subgroup(text: &str) -> Result<(String, Vec<Word>)> {
    let mut lines = text.lines().enumerate();
    let ambient = lines
        .next()
        .and_then(|(_, l)| l.trim().strip_prefix("subgroup-of:").map(|s| s.trim().to_string()))
        .ok_or_else(|| Error::parse(1, 1, "expected 'subgroup-of: NAME'"))?;
    let mut out = Vec::new();
    for (i, l) in lines {
        if !l.trim().is_empty() {
            out.push(parse_word_at(l, i + 1, 1, true)?);
        }
    }
    Ok((ambient, out))
}

/// Name for GAP: primes become `p`, the bar suffix becomes `bar`, `#` becomes `_n`.
/// Collisions get a numeric suffix so the map stays injective.
pub fn transliterate(gens: &[Sym]) -> Vec<(String, String)> {
    let mut used: HashSet<String> = HashSet::new();
    let mut out = Vec::new();
    for g in gens {
        let s = g.as_str();
        let base = match s.strip_suffix("_bar") {
            Some(st) => format!("{st}bar"),
            None => s.to_string(),
        };
        let base = base.replace('\'', "p").replace(FRESH_SEP, "_n");
        let mut cand = base.clone();
        let mut k = 2;
        while used.contains(&cand) {
            cand = format!("{base}_{k}");
            k += 1;
        }
        used.insert(cand.clone());
        out.push((s.to_string(), cand));
    }
    out
}

/// `F := FreeGroup(...);; rels := [ ... ];; G := F / rels;;` with relators
/// written as `F.i^e` products.
pub fn export_gap_style(p: &Presentation) -> String {
    let names = transliterate(&p.gens);
    let index: BTreeMap<&Sym, usize> = p.gens.iter().enumerate().map(|(i, g)| (g, i + 1)).collect();
    let mut s = String::new();
    let _ = writeln!(s, "# {}", p.name);
    let quoted: Vec<String> = names.iter().map(|(_, n)| format!("\"{n}\"")).collect();
    let _ = writeln!(s, "F := FreeGroup({});;", quoted.join(", "));
    let rels: Vec<String> = p
        .rels
        .iter()
        .map(|r| {
            if r.is_identity() {
                return "One(F)".to_string();
            }
            let parts: Vec<String> = r
                .syllables()
                .iter()
                .map(|(g, e)| match index.get(g) {
                    Some(i) if *e == 1 => format!("F.{i}"),
                    Some(i) => format!("F.{i}^{e}"),
                    None => format!("F.?{g}"),
                })
                .collect();
            parts.join("*")
        })
        .collect();
    if rels.is_empty() {
        let _ = writeln!(s, "rels := [ ];;");
    } else {
        let _ = writeln!(s, "rels := [\n  {}\n];;", rels.join(",\n  "));
    }
    let _ = writeln!(s, "G := F / rels;;");
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestInputs {
    pub file: String,
    pub expression: String,
    pub bounds: (i64, i64, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub name: String,
    pub file: String,
    pub gens: usize,
    pub rels: usize,
    pub expected_gens: usize,
    pub expected_rels: usize,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub inputs: ManifestInputs,
    pub stages: Vec<StageRecord>,
    /// 1-based index of each generator of the final group, as used by `to_two_generator`.
    pub generator_index: Vec<(usize, String)>,
    pub transliteration: Vec<(String, String)>,
    pub warnings: Vec<String>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_default()
    }

    pub fn from_json(text: &str) -> Result<Manifest> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))
    }
}
