//! Checks: Stallings foldings, count audits, the `d_j` action lemma, and
//! relator-level derivations in finitely presented groups.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::rc::Rc;
use std::fmt;

use crate::benign::{
    base_s, base_z, finite, op_join, op_meet, op_omega_staged, BenignCert, Half, UnaryOp,
};
use crate::error::{Error, Result};
use crate::pres::Presentation;
use crate::seq::{a_word, w_letters, AbcWord, Seq, SeqSetExpr};
use crate::word::{rename, Sym, Word};

/// A folded labelled graph with base vertex 0 and BFS-canonical numbering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreGraph {
    pub vertices: usize,
    /// `(from, label, to)`, sorted.
    pub edges: Vec<(usize, Sym, usize)>,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }
}

fn petals(gens: &[Word]) -> (usize, Vec<(usize, Sym, usize)>) {
    let mut n = 1;
    let mut edges = Vec::new();
    for w in gens {
        let letters = w.letters();
        let mut cur = 0;
        for (k, (g, s)) in letters.iter().enumerate() {
            let next = if k + 1 == letters.len() {
                0
            } else {
                n += 1;
                n - 1
            };
            if *s > 0 {
                edges.push((cur, g.clone(), next));
            } else {
                edges.push((next, g.clone(), cur));
            }
            cur = next;
        }
    }
    (n, edges)
}

/// Folds the petal graph of `gens`.
pub fn fold(gens: &[Word]) -> CoreGraph {
    let (n, edges) = petals(gens);
    let order: Vec<usize> = (0..edges.len()).collect();
    fold_edges(n, edges, &order)
}

/// Folds, visiting the edges in the given order; the result does not depend on it.
pub fn fold_in_order(gens: &[Word], order: &[usize]) -> CoreGraph {
    let (n, edges) = petals(gens);
    fold_edges(n, edges, order)
}

fn fold_edges(n: usize, edges: Vec<(usize, Sym, usize)>, order: &[usize]) -> CoreGraph {
    let mut dsu = Dsu((0..n).collect());
    loop {
        let mut out: HashMap<(usize, Sym, bool), usize> = HashMap::new();
        let mut merged = false;
        for &i in order {
            let (u, g, v) = &edges[i];
            let (u, v) = (dsu.find(*u), dsu.find(*v));
            for (key, tgt) in [((u, g.clone(), true), v), ((v, g.clone(), false), u)] {
                match out.get(&key) {
                    Some(&t) if dsu.find(t) != tgt => {
                        let (a, b) = (dsu.find(t), tgt);
                        dsu.0[a.max(b)] = a.min(b);
                        merged = true;
                    }
                    Some(_) => {}
                    None => {
                        out.insert(key, tgt);
                    }
                }
            }
        }
        if !merged {
            break;
        }
    }
    let mut set: Vec<(usize, Sym, usize)> =
        edges.iter().map(|(u, g, v)| (dsu.find(*u), g.clone(), dsu.find(*v))).collect();
    set.sort();
    set.dedup();
    canonical(dsu.find(0), &set)
}

fn canonical(base: usize, edges: &[(usize, Sym, usize)]) -> CoreGraph {
    let mut adj: HashMap<usize, BTreeMap<(Sym, bool), usize>> = HashMap::new();
    for (u, g, v) in edges {
        adj.entry(*u).or_default().insert((g.clone(), true), *v);
        adj.entry(*v).or_default().insert((g.clone(), false), *u);
    }
    let mut num: HashMap<usize, usize> = HashMap::new();
    num.insert(base, 0);
    let mut queue = VecDeque::from([base]);
    while let Some(x) = queue.pop_front() {
        if let Some(nb) = adj.get(&x) {
            for y in nb.values() {
                if !num.contains_key(y) {
                    num.insert(*y, num.len());
                    queue.push_back(*y);
                }
            }
        }
    }
    let mut out: Vec<(usize, Sym, usize)> =
        edges.iter().map(|(u, g, v)| (num[u], g.clone(), num[v])).collect();
    out.sort();
    CoreGraph { vertices: num.len(), edges: out }
}

impl CoreGraph {
    fn step(&self, at: usize, g: &Sym, forward: bool) -> Option<usize> {
        self.edges.iter().find_map(|(u, h, v)| match forward {
            true if *u == at && h == g => Some(*v),
            false if *v == at && h == g => Some(*u),
            _ => None,
        })
    }

    pub fn is_folded(&self) -> bool {
        let mut seen = HashSet::new();
        self.edges.iter().all(|(u, g, v)| seen.insert((*u, g.clone(), true)) && seen.insert((*v, g.clone(), false)))
    }
}

/// `w` labels a closed path at the base.
pub fn membership(g: &CoreGraph, w: &Word) -> bool {
    let mut at = 0;
    for (s, e) in w.letters() {
        match g.step(at, &s, e > 0) {
            Some(n) => at = n,
            None => return false,
        }
    }
    at == 0
}

/// Free rank `E − V + 1`.
pub fn rank(g: &CoreGraph) -> usize {
    g.edges.len() + 1 - g.vertices
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub stage: String,
    pub expected: (usize, usize),
    pub actual: (usize, usize),
    pub pass: bool,
    /// Set when the stated value is known to disagree with the construction.
    pub note: String,
}

/// Expected counts that are not whole numbers are stored as `usize::MAX`.
fn shown(n: usize) -> String {
    if n == usize::MAX {
        "frac".into()
    } else {
        n.to_string()
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<13} {:>6} {:>6} {:>6} {:>6}  {}{}",
            self.stage,
            shown(self.expected.0),
            shown(self.expected.1),
            self.actual.0,
            self.actual.1,
            if self.pass { "pass" } else { "FAIL" },
            if self.note.is_empty() { String::new() } else { format!("  ({})", self.note) }
        )
    }
}

pub fn audit_header() -> String {
    format!("{:<13} {:>6} {:>6} {:>6} {:>6}  verdict", "stage", "exp_g", "exp_r", "gens", "rels")
}

pub fn audit_counts(p: &Presentation, expected: (usize, usize), stage: &str) -> AuditReport {
    let actual = p.counts();
    AuditReport { stage: stage.to_string(), expected, actual, pass: actual == expected, note: String::new() }
}

impl AuditReport {
    /// Failed, and not one of the documented discrepancies.
    pub fn unexplained(&self) -> bool {
        !self.pass && self.note.is_empty()
    }
}

/// Audits every node of `e` against the stated closed forms, bottom-up.
pub fn expression_audit(e: &SeqSetExpr) -> Result<(BenignCert, Vec<AuditReport>)> {
    let mut out = Vec::new();
    let c = audit_node(e, &mut out)?;
    Ok((c, out))
}

fn audit_node(e: &SeqSetExpr, out: &mut Vec<AuditReport>) -> Result<BenignCert> {
    use SeqSetExpr::*;
    let unary = |op: UnaryOp, x: &SeqSetExpr, out: &mut Vec<AuditReport>| -> Result<BenignCert> {
        let child = audit_node(x, out)?;
        let (m, n, k) = child.meta();
        let c = op.build(&child)?;
        let mut r = audit_counts(&c.k, op.stated_counts(m, n, k), op.name());
        if !r.pass && op == UnaryOp::Tau {
            r.note = "stated relator sum disagrees with its own terms".into();
        }
        out.push(r);
        Ok(c)
    };
    let c = match e {
        BaseZ => base_z(),
        BaseS => {
            let c = base_s()?;
            out.push(audit_counts(&c.k, (9, 20), "A"));
            c
        }
        Finite(set) => finite(set),
        Iota(x, y) => op_meet(&audit_node(x, out)?, &audit_node(y, out)?)?,
        Upsilon(x, y) => op_join(&audit_node(x, out)?, &audit_node(y, out)?)?,
        Rho(x) => unary(UnaryOp::Rho, x, out)?,
        Sigma(x) => unary(UnaryOp::Sigma, x, out)?,
        Tau(x) => unary(UnaryOp::Tau, x, out)?,
        Theta(x) => unary(UnaryOp::Theta, x, out)?,
        Zeta(x) => unary(UnaryOp::Zeta, x, out)?,
        Pi(x) => unary(UnaryOp::Pi, x, out)?,
        Omega(m, x) => {
            let (c, stages) = op_omega_staged(&audit_node(x, out)?, *m)?;
            for s in stages {
                let whole = |h: Half| if h.0 % 2 == 0 { (h.0 / 2) as usize } else { usize::MAX };
                let pass = s.agrees();
                out.push(AuditReport {
                    stage: format!("omega:{}", s.name),
                    expected: (whole(s.claimed_gens), whole(s.claimed_rels)),
                    actual: (s.gens, s.rels),
                    pass,
                    note: if pass {
                        String::new()
                    } else {
                        format!("stated {} gens, {} rels", s.claimed_gens, s.claimed_rels)
                    },
                });
            }
            c
        }
    };
    c.validate()?;
    Ok(c)
}

/// `a_f^{d_j} = a_{f_j^+}`.
pub fn check_action_lemma(f: &Seq, j: i64) -> bool {
    match AbcWord::a_f(f).d_action(j) {
        Ok(w) => w == AbcWord::a_f(&f.bump(j, 1)),
        Err(_) => false,
    }
}

/// One factor `conj⁻¹ · r^sign · conj` of a consequence of the relators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rel: usize,
    pub sign: i64,
    pub conj: Word,
}

/// A product of relator conjugates, kept as a shared DAG so that reused
/// sub-derivations cost nothing extra.
#[derive(Debug)]
pub enum Proof {
    Rel { rel: usize, sign: i64 },
    Prod(Vec<Rc<Proof>>),
    Conj(Rc<Proof>, Word),
    Inv(Rc<Proof>),
}

impl Proof {
    fn children(&self) -> Vec<&Rc<Proof>> {
        match self {
            Proof::Rel { .. } => Vec::new(),
            Proof::Prod(v) => v.iter().collect(),
            Proof::Conj(p, _) | Proof::Inv(p) => vec![p],
        }
    }

    /// Post-order over distinct nodes, without recursion.
    fn post_order(root: &Rc<Proof>) -> Vec<Rc<Proof>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut stack = vec![(root.clone(), false)];
        while let Some((n, done)) = stack.pop() {
            let key = Rc::as_ptr(&n);
            if done {
                out.push(n);
                continue;
            }
            if !seen.insert(key) {
                continue;
            }
            stack.push((n.clone(), true));
            for c in n.children().into_iter().rev() {
                if !seen.contains(&Rc::as_ptr(c)) {
                    stack.push((c.clone(), false));
                }
            }
        }
        out
    }
}

/// `lhs = rhs` witnessed by `lhs · rhs⁻¹ = proof` in the free group.
#[derive(Clone, Debug)]
pub struct Eqn {
    pub lhs: Word,
    pub rhs: Word,
    pub proof: Rc<Proof>,
}

impl Eqn {
    pub fn refl(w: &Word) -> Eqn {
        Eqn { lhs: w.clone(), rhs: w.clone(), proof: Rc::new(Proof::Prod(Vec::new())) }
    }

    pub fn from_steps(lhs: &Word, rhs: &Word, steps: &[Step]) -> Eqn {
        let parts = steps
            .iter()
            .map(|s| Rc::new(Proof::Conj(Rc::new(Proof::Rel { rel: s.rel, sign: s.sign }), s.conj.clone())))
            .collect();
        Eqn { lhs: lhs.clone(), rhs: rhs.clone(), proof: Rc::new(Proof::Prod(parts)) }
    }

    pub fn sym(&self) -> Eqn {
        Eqn { lhs: self.rhs.clone(), rhs: self.lhs.clone(), proof: Rc::new(Proof::Inv(self.proof.clone())) }
    }

    pub fn trans(&self, o: &Eqn) -> Result<Eqn> {
        if self.rhs != o.lhs {
            return Err(Error::Invalid(format!("cannot chain {} = {} with {} = …", self.lhs, self.rhs, o.lhs)));
        }
        let proof = Rc::new(Proof::Prod(vec![self.proof.clone(), o.proof.clone()]));
        Ok(Eqn { lhs: self.lhs.clone(), rhs: o.rhs.clone(), proof })
    }

    /// `a = b`, `c = d` give `ac = bd`.
    pub fn mul(&self, o: &Eqn) -> Eqn {
        let moved = Rc::new(Proof::Conj(o.proof.clone(), self.rhs.inv()));
        let proof = Rc::new(Proof::Prod(vec![self.proof.clone(), moved]));
        Eqn { lhs: self.lhs.mul(&o.lhs), rhs: self.rhs.mul(&o.rhs), proof }
    }

    /// `a = b` gives `a^g = b^g`.
    pub fn conj(&self, g: &Word) -> Eqn {
        let proof = Rc::new(Proof::Conj(self.proof.clone(), g.clone()));
        Eqn { lhs: self.lhs.conj(g), rhs: self.rhs.conj(g), proof }
    }

    /// `a = b` gives `a⁻¹ = b⁻¹`.
    pub fn inv(&self) -> Eqn {
        let proof = Rc::new(Proof::Conj(Rc::new(Proof::Inv(self.proof.clone())), self.lhs.clone()));
        Eqn { lhs: self.lhs.inv(), rhs: self.rhs.inv(), proof }
    }

    pub fn pow(&self, n: i64) -> Eqn {
        let base = if n < 0 { self.inv() } else { self.clone() };
        let mut out = Eqn::refl(&Word::identity());
        for _ in 0..n.abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn lmul(w: &Word, e: &Eqn) -> Eqn {
        Eqn::refl(w).mul(e)
    }

    pub fn rmul(&self, w: &Word) -> Eqn {
        self.mul(&Eqn::refl(w))
    }

    /// The witness evaluates to `lhs · rhs⁻¹`; each shared node is evaluated once.
    pub fn check(&self, p: &Presentation) -> bool {
        let mut val: HashMap<*const Proof, Word> = HashMap::new();
        for n in Proof::post_order(&self.proof) {
            let v = match &*n {
                Proof::Rel { rel, sign } => match p.rels.get(*rel) {
                    Some(r) => r.pow(*sign),
                    None => return false,
                },
                Proof::Prod(cs) => cs.iter().fold(Word::identity(), |a, c| a.mul(&val[&Rc::as_ptr(c)])),
                Proof::Conj(c, g) => val[&Rc::as_ptr(c)].conj(g),
                Proof::Inv(c) => val[&Rc::as_ptr(c)].inv(),
            };
            val.insert(Rc::as_ptr(&n), v);
        }
        val[&Rc::as_ptr(&self.proof)] == self.lhs.mul(&self.rhs.inv())
    }

    /// Number of relator conjugates in the expanded trace.
    pub fn len(&self) -> u128 {
        let mut cnt: HashMap<*const Proof, u128> = HashMap::new();
        for n in Proof::post_order(&self.proof) {
            let c = match &*n {
                Proof::Rel { .. } => 1,
                _ => n.children().iter().fold(0u128, |a, c| a.saturating_add(cnt[&Rc::as_ptr(*c)])),
            };
            cnt.insert(Rc::as_ptr(&n), c);
        }
        cnt[&Rc::as_ptr(&self.proof)]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The expanded trace, or `None` beyond `limit` steps.
    pub fn steps(&self, limit: usize) -> Option<Vec<Step>> {
        if self.len() > limit as u128 {
            return None;
        }
        let mut out = Vec::new();
        let mut stack = vec![(self.proof.clone(), false, Word::identity())];
        while let Some((n, inv, suffix)) = stack.pop() {
            match &*n {
                Proof::Rel { rel, sign } => {
                    out.push(Step { rel: *rel, sign: if inv { -sign } else { *sign }, conj: suffix })
                }
                Proof::Prod(cs) => {
                    let items: Vec<_> = if inv { cs.iter().collect() } else { cs.iter().rev().collect() };
                    for c in items {
                        stack.push((c.clone(), inv, suffix.clone()));
                    }
                }
                Proof::Conj(c, g) => stack.push((c.clone(), inv, g.mul(&suffix))),
                Proof::Inv(c) => stack.push((c.clone(), !inv, suffix)),
            }
        }
        Some(out)
    }
}

fn prod(es: Vec<Eqn>) -> Eqn {
    es.into_iter().fold(Eqn::refl(&Word::identity()), |a, e| a.mul(&e))
}

/// Relator rotations (and those of inverses), keyed by the rotated word.
pub struct Prover<'a> {
    pub p: &'a Presentation,
    table: HashMap<Word, Step>,
}

impl<'a> Prover<'a> {
    pub fn new(p: &'a Presentation) -> Prover<'a> {
        let mut table = HashMap::new();
        for (i, r) in p.rels.iter().enumerate() {
            for sign in [1, -1] {
                let rw = r.pow(sign);
                let letters = rw.letters();
                for k in 0..letters.len().max(1) {
                    let alpha = Word::from_letters(&letters[..k]);
                    table.entry(rw.conj(&alpha)).or_insert(Step { rel: i, sign, conj: alpha });
                }
            }
        }
        Prover { p, table }
    }

    pub fn rotations(&self) -> impl Iterator<Item = (&Word, &Step)> {
        self.table.iter()
    }

    /// `lhs = rhs` where `lhs · rhs⁻¹` is a rotation of a relator or its inverse.
    pub fn fact(&self, lhs: &Word, rhs: &Word) -> Result<Eqn> {
        let target = lhs.mul(&rhs.inv());
        if target.is_identity() {
            return Ok(Eqn::refl(lhs));
        }
        match self.table.get(&target) {
            Some(s) => Ok(Eqn::from_steps(lhs, rhs, std::slice::from_ref(s))),
            None => Err(Error::Invalid(format!("no relator gives {lhs} = {rhs}"))),
        }
    }

    /// `x` fixes `w` by a single relator.
    pub fn fixes(&self, x: &Word, w: &Word) -> Result<Eqn> {
        self.fact(&w.conj(x), w)
    }

    /// `V^k = V[g ↦ img(g)]` from one fact `g^k = img(g)` per letter of `V`.
    pub fn subst(&self, v: &Word, fact: &mut dyn FnMut(&Sym) -> Result<Eqn>) -> Result<Eqn> {
        let mut cache: HashMap<Sym, Eqn> = HashMap::new();
        let mut parts = Vec::new();
        for (g, s) in v.letters() {
            if !cache.contains_key(&g) {
                let e = fact(&g)?;
                cache.insert(g.clone(), e);
            }
            parts.push(cache[&g].pow(s));
        }
        Ok(prod(parts))
    }

    /// `(V^c)^x = V^c` from `x` fixing each `g^c` for the letters `g` of `V`.
    pub fn fixes_conj(&self, x: &Word, v: &Word, c: &Word) -> Result<Eqn> {
        self.subst(v, &mut |g| self.fixes(x, &Word::sym_pow(g, 1).conj(c)))
    }

    /// `x` fixes every letter of `v`.
    pub fn fixes_word(&self, x: &Word, v: &Word) -> Result<Eqn> {
        self.fixes_conj(x, v, &Word::identity())
    }

    /// From `x` fixing `V'` for some `V' = V`, conclude `x` fixes `V`.
    pub fn transport_fix(x: &Word, eq: &Eqn, fix: &Eqn) -> Result<Eqn> {
        eq.conj(x).trans(fix)?.trans(&eq.sym())
    }

    /// `Φ x^e = x^e Φ` when each letter of `Φ` commutes with `x` by a relator.
    pub fn commute_past(&self, x: &Sym, e: i64, phi: &Word) -> Result<Eqn> {
        let xw = Word::sym_pow(x, 1);
        let base = Eqn::lmul(&xw, &self.fixes_word(&xw, phi)?);
        if e > 0 {
            return Ok(base);
        }
        let xi = xw.inv();
        Ok(Eqn::lmul(&xi, &base.rmul(&xi)).sym())
    }

    /// `∏ (x_k φ(x_k))^{e_k} = (∏ x_k^{e_k}) · (∏ φ(x_k)^{e_k})` for a word over
    /// letters `x_k` whose `φ`-images commute with every `x_k`.
    pub fn split(&self, w: &Word, phi: &dyn Fn(&Sym) -> Word) -> Result<Eqn> {
        let mut acc = Eqn::refl(&Word::identity());
        let (mut gp, mut fp) = (Word::identity(), Word::identity());
        for (x, e) in w.letters() {
            let xw = Word::sym_pow(&x, e);
            let px = phi(&x).pow(e);
            let step = if e > 0 {
                let c = self.commute_past(&x, 1, &fp)?;
                Eqn::lmul(&gp, &c).rmul(&px)
            } else {
                let fp2 = fp.mul(&px);
                Eqn::lmul(&gp, &self.commute_past(&x, -1, &fp2)?)
            };
            let pair = if e > 0 { xw.mul(&px) } else { px.mul(&xw) };
            acc = acc.rmul(&pair).trans(&step)?;
            gp = gp.mul(&xw);
            fp = fp.mul(&px);
        }
        Ok(acc)
    }

    /// `y^{x⁻¹} = j` from the action of `x` sending `j` to `y`.
    pub fn inverse_action(
        &self,
        x: &Word,
        y: &Word,
        j: &Word,
        fact: &mut dyn FnMut(&Sym) -> Result<Eqn>,
    ) -> Result<Eqn> {
        let e = self.subst(j, fact)?;
        if e.rhs != *y {
            return Err(Error::Invalid(format!("{x} sends {j} to {}, not {y}", e.rhs)));
        }
        let mut back = e.conj(&x.inv());
        back.lhs = j.clone();
        Ok(back.sym())
    }
}

/// Iterative deepening over relator insertions; each insertion must cancel
/// against a neighbour, and the last move accepts any conjugate of a relator.
/// Returns `target = 1`. `None` is inconclusive.
/// Relator rotations indexed by a boundary letter.
type ByEnd<'a> = HashMap<(Sym, i64), Vec<(&'a Word, &'a Step)>>;
/// Rotations by first letter, by last letter, and the outer-cancel finisher.
type SearchCtx<'a, 'b> = (&'b ByEnd<'a>, &'b ByEnd<'a>, &'b dyn Fn(&Word) -> Option<Step>);

pub fn bounded_consequence(target: &Word, p: &Presentation, depth: usize) -> Option<Eqn> {
    let pr = Prover::new(p);
    let mut by_first: HashMap<(Sym, i64), Vec<(&Word, &Step)>> = HashMap::new();
    let mut by_last: HashMap<(Sym, i64), Vec<(&Word, &Step)>> = HashMap::new();
    for (w, s) in pr.rotations() {
        let l = w.letters();
        if let (Some(f), Some(z)) = (l.first(), l.last()) {
            by_first.entry(f.clone()).or_default().push((w, s));
            by_last.entry(z.clone()).or_default().push((w, s));
        }
    }
    for v in by_first.values_mut().chain(by_last.values_mut()) {
        v.sort_by(|a, b| a.0.cmp(b.0));
    }
    let finish = |w: &Word| -> Option<Step> {
        if w.is_identity() {
            return None;
        }
        let letters = w.letters();
        let mut k = 0;
        while k < letters.len() / 2 && letters[k].0 == letters[letters.len() - 1 - k].0
            && letters[k].1 == -letters[letters.len() - 1 - k].1
        {
            k += 1;
        }
        let gamma = Word::from_letters(&letters[letters.len() - k..]);
        let core = w.conj(&gamma.inv());
        pr.table.get(&core).map(|s| Step { conj: s.conj.mul(&gamma), ..s.clone() })
    };
    fn go(
        w: &Word,
        left: usize,
        trail: &mut Vec<Step>,
        ctx: &SearchCtx,
    ) -> bool {
        if w.is_identity() {
            return true;
        }
        if left == 0 {
            return false;
        }
        if let Some(s) = (ctx.2)(w) {
            trail.push(s);
            return true;
        }
        if left == 1 {
            return false;
        }
        let letters = w.letters();
        for i in 0..=letters.len() {
            let mut cands: Vec<(&Word, &Step)> = Vec::new();
            if let Some((g, e)) = letters.get(i) {
                cands.extend(ctx.1.get(&(g.clone(), -e)).into_iter().flatten().cloned());
            }
            if i > 0 {
                let (g, e) = &letters[i - 1];
                cands.extend(ctx.0.get(&(g.clone(), -e)).into_iter().flatten().cloned());
            }
            let alpha = Word::from_letters(&letters[..i]);
            let beta = Word::from_letters(&letters[i..]);
            for (r, s) in cands {
                let next = alpha.mul(r).mul(&beta);
                if next.len() >= w.len() + r.len() {
                    continue;
                }
                trail.push(Step { rel: s.rel, sign: -s.sign, conj: s.conj.mul(&alpha.inv()) });
                if go(&next, left - 1, trail, ctx) {
                    return true;
                }
                trail.pop();
            }
        }
        false
    }
    let ctx = (&by_first, &by_last, &finish as &dyn Fn(&Word) -> Option<Step>);
    for d in 1..=depth {
        let mut trail = Vec::new();
        if go(target, d, &mut trail, &ctx) {
            let eq = Eqn::from_steps(target, &Word::identity(), &trail);
            return if eq.check(p) { Some(eq) } else { None };
        }
    }
    None
}

fn w(name: &str) -> Word {
    Word::gen(name)
}

/// Replays, inside `𝒢`, the derivation of `w_f(x, y) = 1` from the relators.
/// Needs `a_f` to be literally one of the generators of `L_𝒳`, i.e. `v_2` fixes it
/// by a single relator.
pub fn rope_replay(g: &Presentation, f: &Seq) -> Result<Eqn> {
    let pr = Prover::new(g);
    let af = a_word(f);
    let phi_map: HashMap<Sym, Sym> =
        [("a", "z"), ("b", "r"), ("c", "l")].iter().map(|(s, t)| (Sym::new(s), Sym::new(t))).collect();
    let phi_of = |x: &Sym| Word::sym_pow(&phi_map[x], 1);
    let big_phi = rename(&af, &phi_map);
    let gphi = af.mul(&big_phi);
    let (v1, v2) = (w("v_1"), w("v_2"));
    let v12 = v1.mul(&v2);

    // v_2 fixes a_f and z, r, l.
    let e1 = pr.fixes(&v2, &af)?.mul(&pr.fixes_word(&v2, &big_phi)?);
    // a_f(az, br, cl) = a_f · Φ, and v_1 fixes the left side.
    let ec = pr.split(&af, &phi_of)?;
    let psi = ec.lhs.clone();
    let epsi = prod(
        af.letters()
            .into_iter()
            .map(|(x, e)| Ok(pr.fixes(&v1, &Word::sym_pow(&x, 1).mul(&phi_of(&x)))?.pow(e)))
            .collect::<Result<Vec<_>>>()?,
    );
    if epsi.rhs != psi {
        return Err(Error::Invalid("pair product mismatch".into()));
    }
    let e2 = ec.sym().conj(&v1).trans(&epsi)?.trans(&ec)?;
    let e3 = e2.conj(&v2).trans(&e1)?;
    // w_2 fixes (a_f Φ)^{v_1 v_2}, hence a_f Φ.
    let e4a = pr.fixes_conj(&w("w_2"), &gphi, &v12)?;
    let e4 = Prover::transport_fix(&w("w_2"), &e3.sym(), &e4a)?;
    // w_1 fixes a_f; w_4 fixes a_f and a_f Φ, hence Φ.
    let e5 = pr.fixes_word(&w("w_1"), &af)?;
    let e6 = Prover::transport_fix(&w("w_4"), &e5.sym(), &pr.fixes_conj(&w("w_4"), &af, &w("w_1"))?)?;
    let e6b = Prover::transport_fix(&w("w_4"), &e4.sym(), &pr.fixes_conj(&w("w_4"), &gphi, &w("w_2"))?)?;
    let e6c = e6.inv().mul(&e6b);
    // Φ^{w_3 w_4} = Φ, so h_1 fixes Φ.
    let e7 = pr.fixes_word(&w("w_3"), &big_phi)?.conj(&w("w_4")).trans(&e6c)?;
    let w34 = w("w_3").mul(&w("w_4"));
    let e8 = Prover::transport_fix(&w("h_1"), &e7.sym(), &pr.fixes_conj(&w("h_1"), &big_phi, &w34)?)?;
    // Φ = z^{w_f(r, s)} through the action of l.
    let omega = w_letters(f, "r", "s");
    let zomega = w("z").conj(&omega);
    let (r, s, l) = (w("r"), w("s"), w("l"));
    let r_pow = |i: i64| -> Result<Eqn> {
        let mut e = Eqn::refl(&r);
        for _ in 0..i.abs() {
            let cur = e.rhs.clone();
            let other = if cur == r { s.clone() } else { r.clone() };
            let st = if i > 0 {
                e.conj(&l).trans(&pr.fact(&cur.conj(&l), &other)?)?
            } else {
                let back = pr.fact(&other.conj(&l), &cur)?.conj(&l.inv());
                let mut b = back.sym();
                b.lhs = cur.conj(&l.inv());
                e.conj(&l.inv()).trans(&b)?
            };
            e = st;
        }
        Ok(e)
    };
    let eb = prod(f.entries().map(|(i, v)| Ok(r_pow(i)?.pow(v))).collect::<Result<Vec<_>>>()?);
    let e9 = eb.inv().mul(&Eqn::refl(&w("z"))).mul(&eb);
    if e9.lhs != big_phi || e9.rhs != zomega {
        return Err(Error::Invalid("Φ does not match z^{w_f(r,s)}".into()));
    }
    let e9h = Prover::transport_fix(&w("h_1"), &e9.sym(), &e8)?;

    // u^{z^{w_f(r,s)}} = v · w_f(p, q) through e_1, e_2.
    let (u, v, z) = (w("u"), w("v"), w("z"));
    let mut ea = pr.fact(&u.conj(&z), &v)?;
    for (i, val) in f.entries().collect::<Vec<_>>().into_iter().rev() {
        let (el, rl, pl) = if i.rem_euclid(2) == 0 { ("e_1", "r", "p") } else { ("e_2", "s", "q") };
        let ew = w(el);
        let rw = w(rl);
        for _ in 0..val.abs() {
            let mut act = |g: &Sym| -> Result<Eqn> {
                let gw = Word::sym_pow(g, 1);
                let img = match (g.as_str(), val > 0) {
                    ("z", true) => z.conj(&rw),
                    ("v", true) => v.mul(&w(pl)),
                    ("z", false) => z.conj(&rw.inv()),
                    ("v", false) => v.mul(&w(pl).inv()),
                    _ => gw.clone(),
                };
                if val > 0 {
                    pr.fact(&gw.conj(&ew), &img)
                } else {
                    let mut fwd = |h: &Sym| {
                        let hw = Word::sym_pow(h, 1);
                        let im = match h.as_str() {
                            "z" => z.conj(&rw),
                            "v" => v.mul(&w(pl)),
                            _ => hw.clone(),
                        };
                        pr.fact(&hw.conj(&ew), &im)
                    };
                    pr.inverse_action(&ew, &gw, &img, &mut fwd)
                }
            };
            let lhs = pr.subst(&ea.lhs, &mut act)?;
            let rhs = pr.subst(&ea.rhs, &mut act)?;
            let ek = if val > 0 { ew.clone() } else { ew.inv() };
            ea = lhs.sym().trans(&ea.conj(&ek))?.trans(&rhs)?;
        }
    }
    let wpq = w_letters(f, "p", "q");
    if ea.lhs != u.conj(&zomega) || ea.rhs != v.mul(&wpq) {
        return Err(Error::Invalid("e-action did not reach u^{z^ω} = v·W".into()));
    }
    // W = (v^{h_2})⁻¹ · u^{h_2 ·(z^ω)^{h_1}}, which f_1 fixes.
    let ew = Eqn::lmul(&v.inv(), &ea.sym());
    let (h1, h2, f1) = (w("h_1"), w("h_2"), w("f_1"));
    let ev = pr.fixes(&h2, &v)?.sym();
    let eu = pr.fixes(&h2, &u)?.sym();
    let ez = e9h.sym();
    let em = ev.inv().mul(&ez.inv()).mul(&eu).mul(&ez);
    let ewm = ew.trans(&em)?;
    let mfix = pr.fixes(&f1, &v.conj(&h2))?.inv()
        .mul(&pr.fixes_conj(&f1, &zomega, &h1)?.inv())
        .mul(&pr.fixes(&f1, &u.conj(&h2))?)
        .mul(&pr.fixes_conj(&f1, &zomega, &h1)?);
    let e11 = Prover::transport_fix(&f1, &ewm, &mfix)?;
    let e12 = e11.conj(&w("f_2")).trans(&pr.fixes_word(&w("f_2"), &wpq)?)?;
    let f12 = f1.mul(&w("f_2"));
    let t = w("t");
    let e13 = Prover::transport_fix(&t, &e12.sym(), &pr.fixes_conj(&t, &wpq, &f12)?)?;
    // W^e = W (px, qy) = W · w_f(x, y), and W^e = (W^t)^e = W^t = W.
    let e = w("e");
    let e14a = pr.subst(&wpq, &mut |g| {
        let gw = Word::sym_pow(g, 1);
        let img = if g.as_str() == "p" { gw.mul(&w("x")) } else { gw.mul(&w("y")) };
        pr.fact(&gw.conj(&e), &img)
    })?;
    let xy_of = |g: &Sym| if g.as_str() == "p" { w("x") } else { w("y") };
    let e14b = pr.split(&wpq, &xy_of)?;
    let e15 = pr.fixes_conj(&e, &wpq, &t)?;
    let e16 = Prover::transport_fix(&e, &e13.sym(), &e15)?;
    let chain = e14b.sym().trans(&e14a.sym())?.trans(&e16)?;
    let done = Eqn::lmul(&wpq.inv(), &chain);
    let wxy = w_letters(f, "x", "y");
    if done.lhs != wxy || !done.rhs.is_identity() {
        return Err(Error::Invalid(format!("derivation ended at {} = {}", done.lhs, done.rhs)));
    }
    Ok(done)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wd(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn fold_examples() {
        let g = fold(&[wd("x")]);
        assert_eq!((g.vertices, g.edges.len()), (1, 1));
        assert_eq!(rank(&fold(&[wd("x"), wd("y")])), 2);
        assert_eq!(rank(&fold(&[wd("x^2"), wd("y"), wd("x y x^-1")])), 3);
        assert_eq!(rank(&fold(&[])), 0);
        let h = fold(&[wd("x^2"), wd("y")]);
        assert!(h.is_folded());
        assert!(!membership(&h, &wd("x y x^-1")));
        assert!(membership(&h, &wd("x^2 y^-3 x^-2")));
        assert!(membership(&h, &Word::identity()));
    }

    #[test]
    fn audit_verdicts() {
        let p = Presentation::free("F", &["a", "b"]);
        assert!(audit_counts(&p, (2, 0), "F").pass);
        assert!(!audit_counts(&p, (2, 1), "F").pass);
    }

    #[test]
    fn action_lemma_cases() {
        assert!(check_action_lemma(&Seq::from_slice(&[2, 5, 3]), 1));
        assert!(check_action_lemma(&Seq::zero(), 0));
        assert_eq!(
            crate::seq::d_action(0, &a_word(&Seq::zero())).unwrap(),
            Word::gen("a").conj(&crate::seq::indexed("b", "c", 0))
        );
    }

    #[test]
    fn calculus_checks() {
        let mut p = Presentation::free("P", &["a", "t"]);
        p.push(crate::pres::fixes(&wd("t"), &wd("a")));
        let pr = Prover::new(&p);
        let e = pr.fixes_word(&wd("t"), &wd("a^3 a")).unwrap();
        assert_eq!((e.lhs.clone(), e.rhs.clone()), (wd("t^-1 a^4 t"), wd("a^4")));
        assert!(e.check(&p));
        assert!(e.inv().check(&p));
        assert!(e.sym().conj(&wd("a t")).check(&p));
        let flat = e.sym().conj(&wd("a t")).inv();
        let steps = flat.steps(100).unwrap();
        assert_eq!(steps.len() as u128, flat.len());
        assert!(Eqn::from_steps(&flat.lhs, &flat.rhs, &steps).check(&p));
        let mut bad = e.clone();
        bad.rhs = wd("a^3");
        assert!(!bad.check(&p));
    }

    #[test]
    fn search_small() {
        let mut p = Presentation::free("P", &["a", "b"]);
        p.push(wd("a^2"));
        p.push(wd("a b a^-1 b^-1"));
        let e = bounded_consequence(&wd("a^2"), &p, 1).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.steps(10).unwrap()[0].rel, 0);
        assert!(bounded_consequence(&wd("b^-1 a^2 b"), &p, 2).is_some());
        assert!(bounded_consequence(&wd("a^2 b a b^-1 a"), &p, 3).is_some());
        assert!(bounded_consequence(&wd("a"), &p, 2).is_none());
    }

    #[test]
    fn replay_base_s() {
        let (_, g) = crate::rope::chain(&crate::benign::base_s().unwrap(), &[]).unwrap();
        let f = Seq::from_slice(&[0, 1]);
        let e = rope_replay(&g, &f).unwrap();
        assert_eq!(e.lhs, w_letters(&f, "x", "y"));
        assert!(e.check(&g));
        assert!(rope_replay(&g, &Seq::from_slice(&[1, 1])).is_err());
    }
}
