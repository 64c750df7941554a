//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use higman::benign::BenignCert;
use higman::word::{Sym, Word};
use higman::{Bounds, Presentation, Seq, SeqSetExpr, Subgroup};
use rand::rngs::StdRng;
use rand::Rng;

/// Nonzero entries only.
pub type Dense = BTreeMap<i64, i64>;

pub fn dense(s: &Seq) -> Dense {
    s.entries().collect()
}

pub fn seq(d: &Dense) -> Seq {
    match (d.keys().next(), d.keys().last()) {
        (Some(&lo), Some(&hi)) => Seq::from_fn(lo, hi, |i| d.get(&i).copied().unwrap_or(0)),
        _ => Seq::zero(),
    }
}

fn put(d: &mut Dense, i: i64, v: i64) {
    if v == 0 {
        d.remove(&i);
    } else {
        d.insert(i, v);
    }
}

fn inside(d: &Dense, l: i64) -> bool {
    d.keys().all(|i| (-l..=l).contains(i))
}

/// Every assignment of `[-b, b]` to `slots` positions with at most `n` nonzero entries.
fn assignments(slots: usize, b: i64, n: usize) -> Vec<Vec<i64>> {
    let mut all = vec![Vec::new()];
    for _ in 0..slots {
        let mut next = Vec::new();
        for a in &all {
            for v in -b..=b {
                let mut x = a.clone();
                x.push(v);
                next.push(x);
            }
        }
        all = next;
    }
    all.into_iter().filter(|a| a.iter().filter(|v| **v != 0).count() <= n).collect()
}

/// Set comprehension over dense maps; bounds follow the library's documented conventions.
pub fn oracle(e: &SeqSetExpr, bd: &Bounds) -> BTreeSet<Seq> {
    oracle_dense(e, bd).iter().map(seq).collect()
}

fn oracle_dense(e: &SeqSetExpr, bd: &Bounds) -> BTreeSet<Dense> {
    use SeqSetExpr::*;
    let l = bd.l;
    let keep = |set: Vec<Dense>| -> BTreeSet<Dense> { set.into_iter().filter(|d| inside(d, l)).collect() };
    match e {
        BaseZ => [Dense::new()].into_iter().collect(),
        BaseS => {
            let mut out = Vec::new();
            for n in -bd.b..=bd.b {
                if (n + 1).abs() > bd.b || (n != 0 && bd.n == 0) {
                    continue;
                }
                let mut d = Dense::new();
                put(&mut d, 0, n);
                put(&mut d, 1, n + 1);
                out.push(d);
            }
            keep(out)
        }
        Finite(s) => keep(s.iter().map(dense).collect()),
        Iota(a, b) => oracle_dense(a, bd).intersection(&oracle_dense(b, bd)).cloned().collect(),
        Upsilon(a, b) => oracle_dense(a, bd).union(&oracle_dense(b, bd)).cloned().collect(),
        Rho(x) => keep(oracle_dense(x, bd).iter().map(|f| f.iter().map(|(i, v)| (-i, *v)).collect()).collect()),
        Sigma(x) => keep(oracle_dense(x, bd).iter().map(|f| f.iter().map(|(i, v)| (i + 1, *v)).collect()).collect()),
        Tau(x) => keep(
            oracle_dense(x, bd)
                .iter()
                .map(|f| {
                    let mut g = f.clone();
                    let (a, b) = (f.get(&0).copied().unwrap_or(0), f.get(&1).copied().unwrap_or(0));
                    put(&mut g, 0, b);
                    put(&mut g, 1, a);
                    g
                })
                .collect(),
        ),
        Theta(x) => keep(
            oracle_dense(x, bd)
                .iter()
                .map(|f| f.iter().filter(|(i, _)| *i % 2 == 0).map(|(i, v)| (i / 2, *v)).collect())
                .collect(),
        ),
        Zeta(x) => {
            let mut out = Vec::new();
            for f in oracle_dense(x, bd) {
                for a in assignments(1, bd.b, bd.n) {
                    let mut g = f.clone();
                    put(&mut g, 0, a[0]);
                    out.push(g);
                }
            }
            keep(out)
        }
        Pi(x) => {
            let mut out = Vec::new();
            for f in oracle_dense(x, bd) {
                let base: Dense = f.iter().filter(|(i, _)| **i <= 0).map(|(i, v)| (*i, *v)).collect();
                if !inside(&base, l) {
                    continue;
                }
                for a in assignments(l.max(0) as usize, bd.b, bd.n) {
                    let mut g = base.clone();
                    for (k, v) in a.iter().enumerate() {
                        put(&mut g, k as i64 + 1, *v);
                    }
                    out.push(g);
                }
            }
            keep(out)
        }
        Omega(m, x) => {
            let m = *m as i64;
            let blocks: Vec<Dense> = oracle_dense(x, bd)
                .into_iter()
                .filter(|f| !f.is_empty() && f.keys().all(|i| (0..m).contains(i)))
                .collect();
            let slots = if l < 0 { 0 } else { (l / m + 1) as usize };
            let mut pats: Vec<Vec<Option<usize>>> = vec![Vec::new()];
            for _ in 0..slots {
                let mut next = Vec::new();
                for p in &pats {
                    for c in std::iter::once(None).chain((0..blocks.len()).map(Some)) {
                        let mut q = p.clone();
                        q.push(c);
                        next.push(q);
                    }
                }
                pats = next;
            }
            let mut out = Vec::new();
            for p in pats {
                if p.iter().filter(|c| c.is_some()).count() > bd.n {
                    continue;
                }
                let mut g = Dense::new();
                for (slot, c) in p.iter().enumerate() {
                    if let Some(k) = c {
                        for (i, v) in &blocks[*k] {
                            put(&mut g, slot as i64 * m + i, *v);
                        }
                    }
                }
                out.push(g);
            }
            keep(out)
        }
    }
}

pub fn random_seq(rng: &mut StdRng, radius: i64, vmax: i64) -> Seq {
    let lo = rng.gen_range(-radius..=radius);
    let hi = rng.gen_range(lo..=radius);
    let vals: Vec<i64> = (lo..=hi).map(|_| rng.gen_range(-vmax..=vmax)).collect();
    Seq::new(lo, &vals)
}

pub fn random_word(rng: &mut StdRng, letters: &[&str], len: usize) -> Word {
    let raw: Vec<(Sym, i64)> = (0..len)
        .map(|_| (Sym::new(letters[rng.gen_range(0..letters.len())]), if rng.gen_bool(0.5) { 1 } else { -1 }))
        .collect();
    Word::reduce(raw)
}

/// A certificate with prescribed `(m, n, k)`: `a, b, c` plus `m − 3` letters,
/// `n` random relators and `k` random subgroup generators.
pub fn random_cert(rng: &mut StdRng, m: usize, n: usize, k: usize) -> BenignCert {
    let mut names: Vec<String> = vec!["a".into(), "b".into(), "c".into()];
    names.extend((0..m.saturating_sub(3)).map(|i| format!("g_{i}")));
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut p = Presentation::free("K", &refs);
    for _ in 0..n {
        let mut w = random_word(rng, &refs, 6);
        if w.is_identity() {
            w = Word::gen("a");
        }
        p.push(w);
    }
    let l = Subgroup { gens: (0..k).map(|_| random_word(rng, &refs, 5)).collect() };
    BenignCert { expr: SeqSetExpr::BaseZ, k: p, l }
}

/// Reduced elements of the subgroup generated by `gens` that have length at most `maxlen`,
/// from products of at most `depth` generators.
pub fn subgroup_elements(gens: &[Word], depth: usize, maxlen: usize) -> HashSet<Word> {
    let mut all: Vec<Word> = gens.iter().flat_map(|g| [g.clone(), g.inv()]).collect();
    all.retain(|w| !w.is_identity());
    let mut seen: HashSet<Word> = [Word::identity()].into_iter().collect();
    let mut frontier = vec![Word::identity()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &all {
                let v = w.mul(g);
                if v.len() <= maxlen + 12 && seen.insert(v.clone()) {
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    seen.into_iter().filter(|w| w.len() <= maxlen).collect()
}

/// All reduced words of length at most `n` over the given letters.
pub fn all_words(letters: &[&str], n: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut layer = vec![Word::identity()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for l in letters {
                for e in [1, -1] {
                    let v = w.mul(&Word::sym_pow(&Sym::new(l), e));
                    if v.len() == w.len() + 1 {
                        next.push(v);
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
