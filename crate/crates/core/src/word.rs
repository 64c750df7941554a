//! Reduced words over named alphabets.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Separator reserved for minted names. Never accepted in user-facing input files.
pub const FRESH_SEP: char = '#';

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym(Arc<str>);

impl Sym {
    pub fn new(name: &str) -> Sym {
        Sym(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_minted(&self) -> bool {
        self.0.contains(FRESH_SEP)
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for Sym {
    fn from(s: &str) -> Sym {
        Sym::new(s)
    }
}

pub fn sym(name: &str) -> Sym {
    Sym::new(name)
}

/// Checks `[A-Za-z][A-Za-z0-9_']*`, optionally allowing the reserved separator.
pub fn valid_name(name: &str, allow_minted: bool) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| {
        c.is_ascii_alphanumeric() || c == '_' || c == '\'' || (allow_minted && c == FRESH_SEP)
    })
}

/// A freely reduced word stored as syllables `(generator, nonzero exponent)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    syl: Vec<(Sym, i64)>,
}

impl Word {
    pub fn identity() -> Word {
        Word { syl: Vec::new() }
    }

    pub fn gen(name: &str) -> Word {
        Word { syl: vec![(Sym::new(name), 1)] }
    }

    pub fn sym_pow(s: &Sym, e: i64) -> Word {
        if e == 0 {
            Word::identity()
        } else {
            Word { syl: vec![(s.clone(), e)] }
        }
    }

    /// Free reduction of an arbitrary list of syllables. Zero exponents are dropped.
    pub fn reduce<I>(raw: I) -> Word
    where
        I: IntoIterator<Item = (Sym, i64)>,
    {
        let mut out: Vec<(Sym, i64)> = Vec::new();
        for (g, e) in raw {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((h, f)) if *h == g => {
                    *f += e;
                    if *f == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        Word { syl: out }
    }

    pub fn syllables(&self) -> &[(Sym, i64)] {
        &self.syl
    }

    pub fn is_identity(&self) -> bool {
        self.syl.is_empty()
    }

    /// Length in letters (sum of absolute exponents).
    pub fn len(&self) -> usize {
        self.syl.iter().map(|(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syl.is_empty()
    }

    /// Expanded letters with signs ±1.
    pub fn letters(&self) -> Vec<(Sym, i64)> {
        let mut v = Vec::with_capacity(self.len());
        for (g, e) in &self.syl {
            let s = e.signum();
            for _ in 0..e.unsigned_abs() {
                v.push((g.clone(), s));
            }
        }
        v
    }

    pub fn from_letters(letters: &[(Sym, i64)]) -> Word {
        Word::reduce(letters.iter().cloned())
    }

    pub fn generators(&self) -> BTreeSet<Sym> {
        self.syl.iter().map(|(g, _)| g.clone()).collect()
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::reduce(self.syl.iter().cloned().chain(other.syl.iter().cloned()))
    }

    pub fn inv(&self) -> Word {
        Word { syl: self.syl.iter().rev().map(|(g, e)| (g.clone(), -e)).collect() }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inv() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `self^g = g⁻¹ · self · g`.
    pub fn conj(&self, g: &Word) -> Word {
        product(&[g.inv(), self.clone(), g.clone()])
    }

    /// Commutator `[u, v] = u⁻¹ v⁻¹ u v`.
    pub fn comm(&self, other: &Word) -> Word {
        product(&[self.inv(), other.inv(), self.clone(), other.clone()])
    }

    /// Cyclic reduction: strips matching ends.
    pub fn cyclic_reduce(&self) -> Word {
        let mut letters = self.letters();
        while letters.len() >= 2 {
            let (f, fe) = &letters[0];
            let (l, le) = &letters[letters.len() - 1];
            if f == l && *fe == -*le {
                letters.pop();
                letters.remove(0);
            } else {
                break;
            }
        }
        Word::from_letters(&letters)
    }

    pub fn parse(text: &str) -> Result<Word> {
        parse_word_at(text, 1, 1, true)
    }
}

pub fn product(ws: &[Word]) -> Word {
    Word::reduce(ws.iter().flat_map(|w| w.syl.iter().cloned()))
}

/// Parses the token syntax `name` / `name^INT` / `1`, reporting columns relative to `col0`.
pub fn parse_word_at(text: &str, line: usize, col0: usize, allow_minted: bool) -> Result<Word> {
    let mut raw = Vec::new();
    let mut offset = 0;
    for tok in text.split_whitespace() {
        let start = text[offset..].find(tok).map(|i| i + offset).unwrap_or(offset);
        offset = start + tok.len();
        let col = col0 + start;
        if tok == "1" {
            continue;
        }
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => {
                let v: i64 = e
                    .parse()
                    .map_err(|_| Error::parse(line, col + n.len() + 1, format!("bad exponent '{e}'")))?;
                if v == 0 {
                    return Err(Error::parse(line, col + n.len() + 1, "zero exponent"));
                }
                (n, v)
            }
            None => (tok, 1),
        };
        if !valid_name(name, allow_minted) {
            return Err(Error::parse(line, col, format!("bad generator name '{name}'")));
        }
        raw.push((Sym::new(name), exp));
    }
    Ok(Word::reduce(raw))
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syl.is_empty() {
            return write!(f, "1");
        }
        for (i, (g, e)) in self.syl.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Generator-wise substitution.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Hom {
    pub domain: Vec<Sym>,
    image: HashMap<Sym, Word>,
}

impl Hom {
    pub fn new() -> Hom {
        Hom::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Sym, Word)>>(pairs: I) -> Hom {
        let mut h = Hom::new();
        for (g, w) in pairs {
            h.insert(g, w);
        }
        h
    }

    pub fn insert(&mut self, g: Sym, w: Word) {
        if !self.image.contains_key(&g) {
            self.domain.push(g.clone());
        }
        self.image.insert(g, w);
    }

    pub fn get(&self, g: &Sym) -> Option<&Word> {
        self.image.get(g)
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        let mut parts = Vec::with_capacity(w.syl.len());
        for (g, e) in &w.syl {
            let img = self.image.get(g).ok_or_else(|| Error::NotInDomain(g.to_string()))?;
            parts.push(img.pow(*e));
        }
        Ok(product(&parts))
    }

    /// `other ∘ self`: maps g to other(self(g)).
    pub fn then(&self, other: &Hom) -> Result<Hom> {
        let mut h = Hom::new();
        for g in &self.domain {
            h.insert(g.clone(), other.apply(&self.image[g])?);
        }
        Ok(h)
    }
}

pub fn apply_hom(h: &Hom, w: &Word) -> Result<Word> {
    h.apply(w)
}

/// Applies a renaming, leaving letters outside the map unchanged.
pub fn rename(w: &Word, map: &HashMap<Sym, Sym>) -> Word {
    Word::reduce(w.syl.iter().map(|(g, e)| (map.get(g).cloned().unwrap_or_else(|| g.clone()), *e)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjFactor {
    pub x: Sym,
    pub sign: i64,
    pub v: Word,
}

/// Writes `w = x_1^{±v_1} ⋯ x_k^{±v_k} · tail` with `v_i` the inverse of the
/// Y-prefix preceding the i-th X-letter and `tail` the full Y-product.
pub fn collect_conjugates(
    w: &Word,
    xs: &BTreeSet<Sym>,
    ys: &BTreeSet<Sym>,
) -> Result<(Vec<ConjFactor>, Word)> {
    let mut factors = Vec::new();
    let mut prefix = Word::identity();
    for (g, s) in w.letters() {
        if xs.contains(&g) {
            factors.push(ConjFactor { x: g, sign: s, v: prefix.inv() });
        } else if ys.contains(&g) {
            prefix = prefix.mul(&Word::sym_pow(&g, s));
        } else {
            return Err(Error::NotInDomain(g.to_string()));
        }
    }
    Ok((factors, prefix))
}

pub fn reassemble(factors: &[ConjFactor], tail: &Word) -> Word {
    let mut parts: Vec<Word> =
        factors.iter().map(|f| Word::sym_pow(&f.x, f.sign).conj(&f.v)).collect();
    parts.push(tail.clone());
    product(&parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn reduce_cancels() {
        let x = sym("x");
        assert_eq!(Word::reduce(vec![(x.clone(), 1), (x, -1)]), Word::identity());
        let (a, b) = (sym("a"), sym("b"));
        let r = Word::reduce(vec![(a.clone(), 1), (b.clone(), 1), (b, -1), (a, 1)]);
        assert_eq!(r, w("a^2"));
    }

    #[test]
    fn reduce_expansion() {
        let xy = w("x y");
        let r = xy.pow(2).mul(&w("x^-1"));
        assert_eq!(r, w("x y x y x^-1"));
        assert_eq!(r.to_string(), "x y x y x^-1");
    }

    #[test]
    fn invert_examples() {
        assert_eq!(Word::identity().inv(), Word::identity());
        assert_eq!(w("a^2 b^-1").inv(), w("b a^-2"));
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(w("a").conj(&Word::identity()), w("a"));
        assert_eq!(w("b").conj(&w("c")), w("c^-1 b c"));
        let g = w("b c^2 a");
        assert_eq!(w("a").conj(&g).conj(&g.inv()), w("a"));
    }

    #[test]
    fn hom_examples() {
        let h = Hom::from_pairs([(sym("a"), w("x")), (sym("b"), w("y"))]);
        assert_eq!(h.apply(&w("a b a^-1")).unwrap(), w("x y x^-1"));
        assert!(matches!(h.apply(&w("c")), Err(Error::NotInDomain(_))));
    }

    #[test]
    fn collect_example() {
        let xs: BTreeSet<Sym> = ["x_1", "x_2", "x_3"].iter().map(|s| sym(s)).collect();
        let ys: BTreeSet<Sym> = ["y_1", "y_2"].iter().map(|s| sym(s)).collect();
        let word = w("x_2^-1 y_1^3 y_2 x_1^2 x_3");
        let (f, tail) = collect_conjugates(&word, &xs, &ys).unwrap();
        assert_eq!(f[0], ConjFactor { x: sym("x_2"), sign: -1, v: Word::identity() });
        assert_eq!(f[1].v, w("y_1^3 y_2").inv());
        assert_eq!(f.len(), 4);
        assert_eq!(tail, w("y_1^3 y_2"));
        assert_eq!(reassemble(&f, &tail), word);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Word::parse("a^0"), Err(Error::Parse { .. })));
        assert!(Word::parse("1").unwrap().is_identity());
        assert!(Word::parse("9a").is_err());
        assert_eq!(Word::parse("t'_1^-2 u").unwrap().to_string(), "t'_1^-2 u");
    }
}
