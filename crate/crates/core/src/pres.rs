//! Presentations and the free constructions used to assemble them.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::word::{rename, Sym, Word, FRESH_SEP};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Presentation {
    pub name: String,
    pub gens: Vec<Sym>,
    pub rels: Vec<Word>,
}

/// A finitely generated subgroup, given by words over an ambient alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Subgroup {
    pub gens: Vec<Word>,
}

/// Pairs `u ↦ φ(u)` defining an isomorphism between two finitely generated subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IsoSpec {
    pub pairs: Vec<(Word, Word)>,
}

impl IsoSpec {
    pub fn identity(gens: &[Word]) -> IsoSpec {
        IsoSpec { pairs: gens.iter().map(|g| (g.clone(), g.clone())).collect() }
    }

    pub fn source(&self) -> Subgroup {
        Subgroup { gens: self.pairs.iter().map(|p| p.0.clone()).collect() }
    }

    pub fn target(&self) -> Subgroup {
        Subgroup { gens: self.pairs.iter().map(|p| p.1.clone()).collect() }
    }
}

/// `x⁻¹ w x w⁻¹`: the relator saying `x` fixes `w` under conjugation.
pub fn fixes(x: &Word, w: &Word) -> Word {
    w.conj(x).mul(&w.inv())
}

/// `x⁻¹ u x v⁻¹`: the relator saying conjugation by `x` sends `u` to `v`.
pub fn sends(x: &Word, u: &Word, v: &Word) -> Word {
    u.conj(x).mul(&v.inv())
}

pub fn g(name: &str) -> Word {
    Word::gen(name)
}

pub fn gens_of(names: &[&str]) -> Vec<Sym> {
    names.iter().map(|n| Sym::new(n)).collect()
}

impl Presentation {
    pub fn new(name: &str) -> Presentation {
        Presentation { name: name.to_string(), gens: Vec::new(), rels: Vec::new() }
    }

    pub fn free(name: &str, gens: &[&str]) -> Presentation {
        Presentation { name: name.to_string(), gens: gens_of(gens), rels: Vec::new() }
    }

    pub fn counts(&self) -> (usize, usize) {
        (self.gens.len(), self.rels.len())
    }

    pub fn has(&self, s: &Sym) -> bool {
        self.gens.contains(s)
    }

    pub fn gen_set(&self) -> HashSet<Sym> {
        self.gens.iter().cloned().collect()
    }

    pub fn gen_words(&self) -> Vec<Word> {
        self.gens.iter().map(|s| Word::sym_pow(s, 1)).collect()
    }

    /// Adds a generator, failing on a duplicate name.
    pub fn add_gen(&mut self, name: &str) -> Result<()> {
        let s = Sym::new(name);
        if self.gens.contains(&s) {
            return Err(Error::Collision(name.to_string()));
        }
        self.gens.push(s);
        Ok(())
    }

    pub fn add_gens(&mut self, names: &[&str]) -> Result<()> {
        for n in names {
            self.add_gen(n)?;
        }
        Ok(())
    }

    pub fn push(&mut self, r: Word) {
        self.rels.push(r);
    }

    /// `x` fixes each of `ws`.
    pub fn fix_all(&mut self, x: &Word, ws: &[Word]) {
        for w in ws {
            self.rels.push(fixes(x, w));
        }
    }

    /// `x` sends `us[i]` to `vs[i]`.
    pub fn send_all(&mut self, x: &Word, us: &[Word], vs: &[Word]) {
        for (u, v) in us.iter().zip(vs) {
            self.rels.push(sends(x, u, v));
        }
    }

    /// Every relator is over the alphabet; names are unique.
    pub fn validate(&self) -> Result<()> {
        let set = self.gen_set();
        if set.len() != self.gens.len() {
            return Err(Error::Collision(format!("duplicate generator in {}", self.name)));
        }
        for r in &self.rels {
            for s in r.generators() {
                if !set.contains(&s) {
                    return Err(Error::UnknownGenerator(s.to_string()));
                }
            }
        }
        Ok(())
    }

    pub fn renamed(&self, map: &HashMap<Sym, Sym>) -> Presentation {
        Presentation {
            name: self.name.clone(),
            gens: self.gens.iter().map(|s| map.get(s).cloned().unwrap_or_else(|| s.clone())).collect(),
            rels: self.rels.iter().map(|r| rename(r, map)).collect(),
        }
    }
}

/// Mints `base#k` with the least `k ≥ 1` avoiding `taken`.
pub fn mint(base: &str, taken: &HashSet<Sym>) -> Sym {
    let stem = base.split(FRESH_SEP).next().unwrap_or(base);
    let mut k = 1;
    loop {
        let s = Sym::new(&format!("{stem}{FRESH_SEP}{k}"));
        if !taken.contains(&s) {
            return s;
        }
        k += 1;
    }
}

/// Renames the letters of `p` (except `keep`) that collide with `reserved`.
/// Minted names also avoid every letter of `p`.
pub fn freshen(
    p: &Presentation,
    keep: &HashSet<Sym>,
    reserved: &HashSet<Sym>,
) -> HashMap<Sym, Sym> {
    let mut taken: HashSet<Sym> = reserved.iter().cloned().collect();
    taken.extend(p.gens.iter().cloned());
    let mut map = HashMap::new();
    for s in &p.gens {
        if keep.contains(s) || !reserved.contains(s) {
            continue;
        }
        let n = mint(s.as_str(), &taken);
        taken.insert(n.clone());
        map.insert(s.clone(), n);
    }
    map
}

/// HNN extension with several stable letters.
pub fn hnn(base: &Presentation, items: &[(IsoSpec, &str)]) -> Result<Presentation> {
    let mut out = base.clone();
    for (_, t) in items {
        out.add_gen(t)?;
    }
    for (iso, t) in items {
        let tw = Word::gen(t);
        for (u, v) in &iso.pairs {
            out.rels.push(sends(&tw, u, v));
        }
    }
    Ok(out)
}

/// Free product with amalgamation over disjoint alphabets.
pub fn amalgam(gp: &Presentation, hp: &Presentation, iso: &IsoSpec) -> Result<Presentation> {
    let gs = gp.gen_set();
    for s in &hp.gens {
        if gs.contains(s) {
            return Err(Error::Collision(s.to_string()));
        }
    }
    let mut out = Presentation::new(&format!("{}*{}", gp.name, hp.name));
    out.gens = gp.gens.iter().chain(&hp.gens).cloned().collect();
    out.rels = gp.rels.iter().chain(&hp.rels).cloned().collect();
    for (u, v) in &iso.pairs {
        out.rels.push(u.mul(&v.inv()));
    }
    Ok(out)
}

/// Direct product: union plus all commutators `[g1, g2]`.
pub fn direct_product(p1: &Presentation, p2: &Presentation) -> Result<Presentation> {
    let mut out = amalgam(p1, p2, &IsoSpec::default())?;
    out.name = format!("{}x{}", p1.name, p2.name);
    for a in &p1.gens {
        for b in &p2.gens {
            out.rels.push(Word::sym_pow(a, 1).comm(&Word::sym_pow(b, 1)));
        }
    }
    Ok(out)
}

/// One component `K_i ∗_{L_i} t_i` of a ✛-construction: the letters and
/// relators `K_i` adds on top of the shared base.
#[derive(Clone, Debug, Default)]
pub struct StarComponent {
    pub extra: Presentation,
    pub l: Subgroup,
    pub t: String,
}

/// `✛(K_i, L_i, t_i)_M` where every `K_i` contains the base literally:
/// base relators once, then each component's own relators, then `t_i` fixes `L_i`.
pub fn star(base: &Presentation, comps: &[StarComponent]) -> Result<Presentation> {
    let mut out = base.clone();
    let mut own: Vec<HashSet<Sym>> = Vec::new();
    for c in comps {
        for s in &c.extra.gens {
            out.add_gen(s.as_str())?;
        }
        out.rels.extend(c.extra.rels.iter().cloned());
        let mut avail = base.gen_set();
        avail.extend(c.extra.gens.iter().cloned());
        own.push(avail);
    }
    for (c, avail) in comps.iter().zip(&own) {
        for w in &c.l.gens {
            if let Some(s) = w.generators().into_iter().find(|s| !avail.contains(s)) {
                return Err(Error::Invalid(format!("L generator uses {s} outside its K")));
            }
        }
    }
    for c in comps {
        out.add_gen(&c.t)?;
    }
    for c in comps {
        out.fix_all(&Word::gen(&c.t), &c.l.gens);
    }
    Ok(out)
}

/// Ensures `a, b, c` are generators, adding `x = x(Z)` relators when they are not.
pub fn tietze_add_abc(p: &Presentation, images: &[Word; 3]) -> Result<Presentation> {
    let names = ["a", "b", "c"];
    if names.iter().all(|n| p.has(&Sym::new(n))) {
        return Ok(p.clone());
    }
    let mut out = p.clone();
    for (n, img) in names.iter().zip(images) {
        out.add_gen(n)?;
        out.rels.push(Word::gen(n).mul(&img.inv()));
    }
    Ok(out)
}

pub fn words(names: &[&str]) -> Vec<Word> {
    names.iter().map(|n| Word::gen(n)).collect()
}

pub fn conj_all(ws: &[Word], by: &Word) -> Vec<Word> {
    ws.iter().map(|w| w.conj(by)).collect()
}

pub fn sym_set(names: &[&str]) -> BTreeSet<Sym> {
    names.iter().map(|n| Sym::new(n)).collect()
}
