//! Finite-support integer sequences, the words they index, and the Higman operations.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::word::{product, Sym, Word};

/// A function ℤ → ℤ with finite support, stored trimmed from its least support index.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Seq {
    offset: i64,
    values: Vec<i64>,
}

impl Seq {
    pub fn zero() -> Seq {
        Seq::default()
    }

    pub fn new(offset: i64, values: &[i64]) -> Seq {
        let first = values.iter().position(|&v| v != 0);
        let Some(first) = first else {
            return Seq::zero();
        };
        let last = values.iter().rposition(|&v| v != 0).unwrap();
        Seq { offset: offset + first as i64, values: values[first..=last].to_vec() }
    }

    /// Sequence `(j_0, …, j_{k-1})` starting at index 0.
    pub fn from_slice(values: &[i64]) -> Seq {
        Seq::new(0, values)
    }

    pub fn from_fn(lo: i64, hi: i64, f: impl Fn(i64) -> i64) -> Seq {
        if hi < lo {
            return Seq::zero();
        }
        let vals: Vec<i64> = (lo..=hi).map(f).collect();
        Seq::new(lo, &vals)
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Least and greatest support index, `None` for the zero sequence.
    pub fn support(&self) -> Option<(i64, i64)> {
        if self.is_zero() {
            None
        } else {
            Some((self.offset, self.offset + self.values.len() as i64 - 1))
        }
    }

    pub fn get(&self, i: i64) -> i64 {
        let k = i - self.offset;
        if k < 0 || k >= self.values.len() as i64 {
            0
        } else {
            self.values[k as usize]
        }
    }

    /// Copy with `f(i)` replaced by `v`.
    pub fn with(&self, i: i64, v: i64) -> Seq {
        let (lo, hi) = match self.support() {
            Some((lo, hi)) => (lo.min(i), hi.max(i)),
            None => (i, i),
        };
        Seq::from_fn(lo, hi, |k| if k == i { v } else { self.get(k) })
    }

    /// `f_j^±`: adds `sign` at coordinate `j`.
    pub fn bump(&self, j: i64, sign: i64) -> Seq {
        self.with(j, self.get(j) + sign)
    }

    /// `(ρf)(i) = f(−i)`.
    pub fn rho(&self) -> Seq {
        match self.support() {
            None => Seq::zero(),
            Some((lo, hi)) => Seq::from_fn(-hi, -lo, |i| self.get(-i)),
        }
    }

    /// `(σf)(i) = f(i − 1)`.
    pub fn sigma(&self) -> Seq {
        if self.is_zero() {
            return Seq::zero();
        }
        Seq { offset: self.offset + 1, values: self.values.clone() }
    }

    /// Swaps the values at 0 and 1.
    pub fn tau(&self) -> Seq {
        let (a, b) = (self.get(0), self.get(1));
        self.with(0, b).with(1, a)
    }

    /// `(θf)(k) = f(2k)`.
    pub fn theta(&self) -> Seq {
        match self.support() {
            None => Seq::zero(),
            Some((lo, hi)) => {
                Seq::from_fn(lo.div_euclid(2), hi.div_euclid(2) + 1, |k| self.get(2 * k))
            }
        }
    }

    /// Iterates `(index, value)` over the nonzero entries.
    pub fn entries(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(move |(k, v)| (self.offset + k as i64, *v))
    }

    pub fn within(&self, lo: i64, hi: i64) -> bool {
        match self.support() {
            None => true,
            Some((a, b)) => a >= lo && b <= hi,
        }
    }

    pub fn parse(text: &str) -> Result<Seq> {
        let t = text.trim();
        let (body, off) = match t.rsplit_once('@') {
            Some((b, o)) => {
                let o: i64 = o
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(1, 1, format!("bad offset in '{t}'")))?;
                (b.trim(), o)
            }
            None => (t, 0),
        };
        let inner = body
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::parse(1, 1, format!("sequence must be parenthesised: '{t}'")))?;
        let mut vals = Vec::new();
        for part in inner.split(',') {
            let v: i64 = part
                .trim()
                .parse()
                .map_err(|_| Error::parse(1, 1, format!("bad entry '{}'", part.trim())))?;
            vals.push(v);
        }
        Ok(Seq::new(off, &vals))
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some((lo, hi)) = self.support() else {
            return write!(f, "(0)");
        };
        let start = lo.min(0);
        let body: Vec<String> = (start..=hi).map(|i| self.get(i).to_string()).collect();
        write!(f, "({})", body.join(","))?;
        if start != 0 {
            write!(f, "@{start}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn letter(name: &str) -> Sym {
    Sym::new(name)
}

/// `x_i = x^{y^i}` for letters x, y.
pub fn indexed(x: &str, y: &str, i: i64) -> Word {
    Word::gen(x).conj(&Word::sym_pow(&letter(y), i))
}

/// `b_f = ∏ b_i^{f(i)}` in increasing `i`, over {b, c}.
pub fn b_word(f: &Seq) -> Word {
    indexed_product(f, "b", "c")
}

/// `∏ x_i^{f(i)}` with `x_i = x^{y^i}`.
pub fn indexed_product(f: &Seq, x: &str, y: &str) -> Word {
    let parts: Vec<Word> = f.entries().map(|(i, v)| indexed(x, y, i).pow(v)).collect();
    product(&parts)
}

/// `a_f = a^{b_f}`.
pub fn a_word(f: &Seq) -> Word {
    Word::gen("a").conj(&b_word(f))
}

/// `⋯ first^{f(0)} second^{f(1)} first^{f(2)} ⋯`: even indices take the first letter.
pub fn w_letters(f: &Seq, first: &str, second: &str) -> Word {
    let (p, q) = (letter(first), letter(second));
    Word::reduce(f.entries().map(|(i, v)| {
        if i.rem_euclid(2) == 0 {
            (p.clone(), v)
        } else {
            (q.clone(), v)
        }
    }))
}

/// Reduced words over {a, b, c} as letters ±1, ±2, ±3.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AbcWord(Vec<i8>);

impl AbcWord {
    pub fn from_word(w: &Word) -> Result<AbcWord> {
        let mut out = AbcWord::default();
        for (g, e) in w.syllables() {
            let l = match g.as_str() {
                "a" => 1,
                "b" => 2,
                "c" => 3,
                other => return Err(Error::Invalid(format!("letter {other} outside a, b, c"))),
            };
            out.push_pow(l, *e);
        }
        Ok(out)
    }

    pub fn to_word(&self) -> Word {
        let name = |l: i8| letter(["a", "b", "c"][(l.unsigned_abs() - 1) as usize]);
        Word::reduce(self.0.iter().map(|l| (name(*l), i64::from(l.signum()))))
    }

    fn push(&mut self, l: i8) {
        if self.0.last() == Some(&-l) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    fn push_pow(&mut self, l: i8, e: i64) {
        let l = if e < 0 { -l } else { l };
        for _ in 0..e.abs() {
            self.push(l);
        }
    }

    /// Appends `b_i^e = c^{-i} b^e c^i`.
    fn push_b(&mut self, i: i64, e: i64) {
        self.push_pow(3, -i);
        self.push_pow(2, e);
        self.push_pow(3, i);
    }

    /// Appends `(x^e)^{b_j}` where `push_x` appends `x^e`.
    fn push_conj_bj(&mut self, j: i64, push_x: impl FnOnce(&mut AbcWord)) {
        self.push_b(j, -1);
        push_x(self);
        self.push_b(j, 1);
    }

    /// `a_f = b_f^{-1} a b_f`.
    pub fn a_f(f: &Seq) -> AbcWord {
        let mut w = AbcWord::default();
        for (i, v) in f.entries().collect::<Vec<_>>().into_iter().rev() {
            w.push_b(i, -v);
        }
        w.push(1);
        for (i, v) in f.entries() {
            w.push_b(i, v);
        }
        w
    }

    /// Image under `d_j`, see [`d_action`].
    pub fn d_action(&self, j: i64) -> Result<AbcWord> {
        let mut height = 0i64;
        let mut out = AbcWord::default();
        for &l in &self.0 {
            let s = i64::from(l.signum());
            match l.abs() {
                1 => {
                    if height != 0 {
                        return Err(Error::Invalid(format!(
                            "letter a at c-height {height}: not in the family a, b_i"
                        )));
                    }
                    out.push_conj_bj(j, |w| w.push_pow(1, s));
                }
                2 => {
                    let i = -height;
                    if i > j {
                        out.push_b(i, s);
                    } else {
                        out.push_conj_bj(j, |w| w.push_b(i, s));
                    }
                }
                _ => height += s,
            }
        }
        if height != 0 {
            return Err(Error::Invalid(format!("word ends at c-height {height}")));
        }
        Ok(out)
    }
}

/// Conjugation by `d_j` on words in `a` and the `b_i`, given over {a, b, c}:
/// fixes `b_i` for `i > j`, conjugates `a` and `b_i` (`i ≤ j`) by `b_j`.
pub fn d_action(j: i64, w: &Word) -> Result<Word> {
    Ok(AbcWord::from_word(w)?.d_action(j)?.to_word())
}

/// Expression over the bases 𝒵, 𝒮 and the Higman operations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SeqSetExpr {
    BaseZ,
    BaseS,
    Finite(BTreeSet<Seq>),
    Iota(Box<SeqSetExpr>, Box<SeqSetExpr>),
    Upsilon(Box<SeqSetExpr>, Box<SeqSetExpr>),
    Rho(Box<SeqSetExpr>),
    Sigma(Box<SeqSetExpr>),
    Tau(Box<SeqSetExpr>),
    Theta(Box<SeqSetExpr>),
    Zeta(Box<SeqSetExpr>),
    Pi(Box<SeqSetExpr>),
    Omega(u32, Box<SeqSetExpr>),
}

impl SeqSetExpr {
    pub fn finite<I: IntoIterator<Item = Seq>>(items: I) -> SeqSetExpr {
        SeqSetExpr::Finite(items.into_iter().collect())
    }

    pub fn parse(text: &str) -> Result<SeqSetExpr> {
        let mut p = ExprParser { src: text.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }

    pub fn depth(&self) -> usize {
        use SeqSetExpr::*;
        match self {
            BaseZ | BaseS | Finite(_) => 0,
            Iota(a, b) | Upsilon(a, b) => 1 + a.depth().max(b.depth()),
            Rho(e) | Sigma(e) | Tau(e) | Theta(e) | Zeta(e) | Pi(e) | Omega(_, e) => 1 + e.depth(),
        }
    }
}

impl fmt::Display for SeqSetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SeqSetExpr::*;
        match self {
            BaseZ => write!(f, "Z"),
            BaseS => write!(f, "S"),
            Finite(s) => {
                let items: Vec<String> = s.iter().map(|x| x.to_string()).collect();
                write!(f, "{{{}}}", items.join(","))
            }
            Iota(a, b) => write!(f, "iota({a},{b})"),
            Upsilon(a, b) => write!(f, "upsilon({a},{b})"),
            Rho(e) => write!(f, "rho({e})"),
            Sigma(e) => write!(f, "sigma({e})"),
            Tau(e) => write!(f, "tau({e})"),
            Theta(e) => write!(f, "theta({e})"),
            Zeta(e) => write!(f, "zeta({e})"),
            Pi(e) => write!(f, "pi({e})"),
            Omega(m, e) => write!(f, "omega_{m}({e})"),
        }
    }
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::parse(1, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn expr(&mut self) -> Result<SeqSetExpr> {
        use SeqSetExpr::*;
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b'{') {
            return self.finite();
        }
        let start = self.pos;
        let name = self.ident();
        match name.as_str() {
            "Z" => return Ok(BaseZ),
            "S" => return Ok(BaseS),
            "" => return Err(self.err("expected an expression")),
            _ => {}
        }
        if name == "iota" || name == "upsilon" {
            self.eat(b'(')?;
            let a = self.expr()?;
            self.eat(b',')?;
            let b = self.expr()?;
            self.eat(b')')?;
            return Ok(if name == "iota" {
                Iota(Box::new(a), Box::new(b))
            } else {
                Upsilon(Box::new(a), Box::new(b))
            });
        }
        let wrap: Box<dyn Fn(Box<SeqSetExpr>) -> SeqSetExpr> = match name.as_str() {
            "rho" => Box::new(Rho),
            "sigma" => Box::new(Sigma),
            "tau" => Box::new(Tau),
            "theta" => Box::new(Theta),
            "zeta" => Box::new(Zeta),
            "pi" => Box::new(Pi),
            n if n.starts_with("omega_") => {
                let m: u32 = n["omega_".len()..]
                    .parse()
                    .map_err(|_| Error::parse(1, start + 1, "bad omega index"))?;
                if m < 1 {
                    return Err(Error::parse(1, start + 1, "omega index must be positive"));
                }
                Box::new(move |e| Omega(m, e))
            }
            _ => return Err(Error::parse(1, start + 1, format!("unknown operation '{name}'"))),
        };
        self.eat(b'(')?;
        let e = self.expr()?;
        self.eat(b')')?;
        Ok(wrap(Box::new(e)))
    }

    fn finite(&mut self) -> Result<SeqSetExpr> {
        self.eat(b'{')?;
        let mut set = BTreeSet::new();
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b'}') {
            self.pos += 1;
            return Ok(SeqSetExpr::Finite(set));
        }
        loop {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos] != b')' {
                self.pos += 1;
            }
            if self.pos >= self.src.len() {
                return Err(self.err("unterminated sequence"));
            }
            self.pos += 1;
            self.skip_ws();
            if self.src.get(self.pos) == Some(&b'@') {
                self.pos += 1;
                while self.pos < self.src.len()
                    && (self.src[self.pos] == b'-' || self.src[self.pos].is_ascii_digit())
                {
                    self.pos += 1;
                }
            }
            let text = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
            let s = Seq::parse(&text).map_err(|_| Error::parse(1, start + 1, "bad sequence"))?;
            set.insert(s);
            self.skip_ws();
            match self.src.get(self.pos) {
                Some(b',') => self.pos += 1,
                Some(b'}') => {
                    self.pos += 1;
                    return Ok(SeqSetExpr::Finite(set));
                }
                _ => return Err(self.err("expected ',' or '}'")),
            }
        }
    }
}

/// Finite windows onto infinite sets.
///
/// `b` bounds free parameters, `l` the support window `[-l, l]`, and `n` the
/// number of nonzero free parameters (coordinates, or blocks for ω) per member.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub b: i64,
    pub l: i64,
    pub n: usize,
}

impl Bounds {
    pub fn new(b: i64, l: i64, n: usize) -> Bounds {
        Bounds { b, l, n }
    }

    pub fn le(&self, other: &Bounds) -> bool {
        self.b <= other.b && self.l <= other.l && self.n <= other.n
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { b: 3, l: 6, n: 2 }
    }
}

/// Members of the denoted set inside the bounds, in (offset, values) order.
pub fn eval_bounded(e: &SeqSetExpr, bd: &Bounds) -> BTreeSet<Seq> {
    use SeqSetExpr::*;
    let win = |s: &Seq| s.within(-bd.l, bd.l);
    let map = |x: &SeqSetExpr, f: fn(&Seq) -> Seq| -> BTreeSet<Seq> {
        eval_bounded(x, bd).iter().map(f).filter(|s| win(s)).collect()
    };
    match e {
        BaseZ => [Seq::zero()].into_iter().collect(),
        BaseS => (-bd.b..=bd.b)
            .filter(|n| (n + 1).abs() <= bd.b && usize::from(*n != 0) <= bd.n)
            .map(|n| Seq::from_slice(&[n, n + 1]))
            .filter(|s| win(s))
            .collect(),
        Finite(s) => s.iter().filter(|x| win(x)).cloned().collect(),
        Iota(a, b) => {
            let sa = eval_bounded(a, bd);
            let sb = eval_bounded(b, bd);
            sa.intersection(&sb).cloned().collect()
        }
        Upsilon(a, b) => {
            let mut sa = eval_bounded(a, bd);
            sa.extend(eval_bounded(b, bd));
            sa
        }
        Rho(x) => map(x, Seq::rho),
        Sigma(x) => map(x, Seq::sigma),
        Tau(x) => map(x, Seq::tau),
        Theta(x) => map(x, Seq::theta),
        Zeta(x) => {
            let mut out = BTreeSet::new();
            for f in eval_bounded(x, bd) {
                for v in -bd.b..=bd.b {
                    if usize::from(v != 0) > bd.n {
                        continue;
                    }
                    let g = f.with(0, v);
                    if win(&g) {
                        out.insert(g);
                    }
                }
            }
            out
        }
        Pi(x) => {
            let mut out = BTreeSet::new();
            for f in eval_bounded(x, bd) {
                let base = Seq::from_fn(f.offset().min(0), 0, |i| f.get(i));
                if !win(&base) {
                    continue;
                }
                let mut free = vec![0i64; bd.l.max(0) as usize];
                pi_fill(&base, &mut free, 0, bd.n, bd, &mut out);
            }
            out
        }
        Omega(m, x) => {
            let m = *m as i64;
            let blocks: Vec<Seq> = eval_bounded(x, bd)
                .into_iter()
                .filter(|s| !s.is_zero() && s.within(0, m - 1))
                .collect();
            let nblocks = if bd.l < 0 { 0 } else { (bd.l / m + 1) as usize };
            let mut out = BTreeSet::new();
            let mut choice: Vec<Option<usize>> = vec![None; nblocks];
            omega_fill(&blocks, m, &mut choice, 0, bd.n, bd, &mut out);
            out
        }
    }
}

fn pi_fill(base: &Seq, free: &mut Vec<i64>, pos: usize, left: usize, bd: &Bounds, out: &mut BTreeSet<Seq>) {
    if pos == free.len() {
        let hi = free.len() as i64;
        let g = Seq::from_fn(base.offset().min(0), hi, |i| {
            if i <= 0 {
                base.get(i)
            } else {
                free[(i - 1) as usize]
            }
        });
        out.insert(g);
        return;
    }
    free[pos] = 0;
    pi_fill(base, free, pos + 1, left, bd, out);
    if left > 0 {
        for v in -bd.b..=bd.b {
            if v != 0 {
                free[pos] = v;
                pi_fill(base, free, pos + 1, left - 1, bd, out);
            }
        }
        free[pos] = 0;
    }
}

fn omega_fill(
    blocks: &[Seq],
    m: i64,
    choice: &mut Vec<Option<usize>>,
    pos: usize,
    left: usize,
    bd: &Bounds,
    out: &mut BTreeSet<Seq>,
) {
    if pos == choice.len() {
        let h = concat_blocks(blocks, m, choice);
        if h.within(-bd.l, bd.l) {
            out.insert(h);
        }
        return;
    }
    choice[pos] = None;
    omega_fill(blocks, m, choice, pos + 1, left, bd, out);
    if left > 0 {
        for k in 0..blocks.len() {
            choice[pos] = Some(k);
            omega_fill(blocks, m, choice, pos + 1, left - 1, bd, out);
        }
        choice[pos] = None;
    }
}

fn concat_blocks(blocks: &[Seq], m: i64, choice: &[Option<usize>]) -> Seq {
    let len = choice.len() as i64 * m;
    Seq::from_fn(0, len - 1, |i| match choice[(i / m) as usize] {
        Some(k) => blocks[k].get(i % m),
        None => 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[i64]) -> Seq {
        Seq::from_slice(v)
    }

    #[test]
    fn bump_examples() {
        assert_eq!(s(&[2, 5, 3]).bump(1, 1), s(&[2, 6, 3]));
        assert_eq!(s(&[2, 5, 3]).bump(2, 1), s(&[2, 5, 4]));
        assert_eq!(s(&[2, 5, 3]).bump(7, 1).bump(7, -1), s(&[2, 5, 3]));
    }

    #[test]
    fn op_examples() {
        let r = s(&[2, 5, 3]).rho();
        assert_eq!((r.offset(), r.values()), (-2, &[3i64, 5, 2][..]));
        assert_eq!(r.to_string(), "(3,5,2)@-2");
        assert_eq!(s(&[2, 5, 3]).sigma().to_string(), "(0,2,5,3)");
        assert_eq!(s(&[2, 5, 3]).tau(), s(&[5, 2, 3]));
        assert_eq!(s(&[2, 5, 3]).tau().tau(), s(&[2, 5, 3]));
        assert_eq!(s(&[2, 5, 3, 8]).theta(), s(&[2, 3]));
        assert_eq!(s(&[2, 5, 3]).theta(), s(&[2, 3]));
        assert_eq!(s(&[2, 0, 3, 0]).theta(), s(&[2, 3]));
    }

    #[test]
    fn print_parse() {
        for t in ["(0)", "(2,5,3)", "(3,5,2)@-2", "(0,1)", "(-1)"] {
            assert_eq!(Seq::parse(t).unwrap().to_string(), t);
        }
        assert_eq!(Seq::parse("(-1,0)").unwrap(), s(&[-1]));
    }

    #[test]
    fn b_word_example() {
        let f = Seq::new(-1, &[3, 2, 9, 8]);
        let expect = product(&[
            indexed("b", "c", -1).pow(3),
            indexed("b", "c", 0).pow(2),
            indexed("b", "c", 1).pow(9),
            indexed("b", "c", 2).pow(8),
        ]);
        assert_eq!(b_word(&f), expect);
        assert_eq!(a_word(&Seq::zero()), Word::gen("a"));
    }

    #[test]
    fn w_letters_examples() {
        assert_eq!(w_letters(&s(&[3, 5, 2]), "x", "y"), Word::parse("x^3 y^5 x^2").unwrap());
        assert_eq!(w_letters(&s(&[3, 5, 4, 7]), "r", "s"), Word::parse("r^3 s^5 r^4 s^7").unwrap());
        assert!(w_letters(&Seq::zero(), "x", "y").is_identity());
    }

    #[test]
    fn d_action_examples() {
        let f = s(&[2, 5, 3]);
        assert_eq!(d_action(1, &a_word(&f)).unwrap(), a_word(&s(&[2, 6, 3])));
        assert_eq!(d_action(2, &a_word(&f)).unwrap(), a_word(&s(&[2, 5, 4])));
        let one_two = d_action(1, &d_action(2, &a_word(&f)).unwrap()).unwrap();
        let two_one = d_action(2, &d_action(1, &a_word(&f)).unwrap()).unwrap();
        assert_eq!(one_two, a_word(&s(&[2, 6, 4])));
        assert_eq!(two_one, one_two);
        assert!(d_action(0, &Word::parse("c a c^-1").unwrap()).is_err());
        assert!(d_action(0, &Word::parse("x").unwrap()).is_err());
        for f in [Seq::zero(), s(&[2, 5, 3]), Seq::new(-3, &[1, 0, -2, 0, 0, 3])] {
            assert_eq!(AbcWord::a_f(&f).to_word(), a_word(&f));
            assert_eq!(AbcWord::from_word(&a_word(&f)).unwrap(), AbcWord::a_f(&f));
        }
    }

    #[test]
    fn dsl_round_trip() {
        for t in [
            "Z",
            "S",
            "{(2,5,3),(7,2,4)}",
            "iota(Z,S)",
            "upsilon(rho(Z),sigma(S))",
            "omega_3({(7,2,4),(2,5,3)})",
            "pi(zeta(theta(tau({(1,2)@-1}))))",
        ] {
            let e = SeqSetExpr::parse(t).unwrap();
            let e2 = SeqSetExpr::parse(&e.to_string()).unwrap();
            assert_eq!(e, e2, "{t}");
        }
        assert!(SeqSetExpr::parse("omega_0(Z)").is_err());
        assert!(SeqSetExpr::parse("foo(Z)").is_err());
    }

    #[test]
    fn eval_examples() {
        let bd = Bounds::new(3, 4, 4);
        let got = eval_bounded(&SeqSetExpr::BaseS, &bd);
        let want: BTreeSet<Seq> = (-3..=2).map(|n| s(&[n, n + 1])).collect();
        assert_eq!(got, want);
        let z = eval_bounded(&SeqSetExpr::parse("zeta({(2,5,3)})").unwrap(), &Bounds::new(2, 4, 4));
        let want: BTreeSet<Seq> = (-2..=2).map(|n| s(&[n, 5, 3])).collect();
        assert_eq!(z, want);
    }

    #[test]
    fn omega_promised_member() {
        let e = SeqSetExpr::parse("omega_3({(7,2,4),(2,5,3)})").unwrap();
        let h = s(&[0, 0, 0, 7, 2, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 5, 3, 7, 2, 4]);
        assert!(eval_bounded(&e, &Bounds::new(0, 21, 3)).contains(&h));
        assert!(!eval_bounded(&e, &Bounds::new(0, 21, 2)).contains(&h));
    }
}
