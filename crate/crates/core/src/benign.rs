//! Benign-subgroup certificates and the builders for each Higman operation.
//!
//! A certificate pairs an expression for a set of sequences with an explicit
//! finitely presented `K` containing `F = ⟨a, b, c⟩` and a finitely generated
//! `L ≤ K`. Each builder turns one certificate into another, emitting its
//! relators in the same order as the presentations it follows.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::pres::{
    conj_all, fixes, hnn, mint, sends, star, words, IsoSpec, Presentation, StarComponent,
    Subgroup,
};
use crate::seq::{a_word, indexed, Seq, SeqSetExpr};
use crate::word::{rename, product, Sym, Word};

pub const ABC: [&str; 3] = ["a", "b", "c"];
pub const X_A: [&str; 9] = ["a", "b", "c", "t_1", "t'_1", "u_1", "u_2", "d", "e"];
pub const BAR: &str = "_bar";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenignCert {
    pub expr: SeqSetExpr,
    pub k: Presentation,
    pub l: Subgroup,
}

impl BenignCert {
    /// `(m, n, k)`: generators and relators of `K`, generators of `L`.
    pub fn meta(&self) -> (usize, usize, usize) {
        (self.k.gens.len(), self.k.rels.len(), self.l.gens.len())
    }

    /// Images of `a, b, c` in `K`; always the letters themselves.
    pub fn f_embed(&self) -> [Word; 3] {
        [Word::gen("a"), Word::gen("b"), Word::gen("c")]
    }

    pub fn validate(&self) -> Result<()> {
        self.k.validate()?;
        for n in ABC {
            if !self.k.has(&Sym::new(n)) {
                return Err(Error::Invalid(format!("{} lacks generator {n}", self.k.name)));
            }
        }
        let set = self.k.gen_set();
        for w in &self.l.gens {
            if let Some(s) = w.generators().into_iter().find(|s| !set.contains(s)) {
                return Err(Error::UnknownGenerator(s.to_string()));
            }
        }
        Ok(())
    }
}

fn bar(name: &str) -> String {
    format!("{name}{BAR}")
}

fn barred(names: &[&str]) -> Vec<String> {
    names.iter().map(|n| bar(n)).collect()
}

fn gw(names: &[String]) -> Vec<Word> {
    names.iter().map(|n| Word::gen(n)).collect()
}

fn set_of<'a, I: IntoIterator<Item = &'a String>>(names: I) -> HashSet<Sym> {
    names.into_iter().map(|n| Sym::new(n)).collect()
}

fn strs(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Renames the letters of `p`: `fixed` pairs are forced, every other letter gets
/// `suffix` appended, and clashes with `reserved` are replaced by minted names.
pub fn relabel(
    p: &Presentation,
    fixed: &[(&str, &str)],
    suffix: &str,
    reserved: &HashSet<Sym>,
) -> HashMap<Sym, Sym> {
    let fixed: HashMap<Sym, Sym> =
        fixed.iter().map(|(s, t)| (Sym::new(s), Sym::new(t))).collect();
    let mut taken: HashSet<Sym> = reserved.clone();
    taken.extend(fixed.values().cloned());
    let mut map = HashMap::new();
    let mut pending = Vec::new();
    for s in &p.gens {
        if let Some(t) = fixed.get(s) {
            map.insert(s.clone(), t.clone());
            continue;
        }
        let cand = Sym::new(&format!("{s}{suffix}"));
        if taken.contains(&cand) {
            pending.push((s.clone(), cand));
        } else {
            taken.insert(cand.clone());
            map.insert(s.clone(), cand);
        }
    }
    for (s, cand) in pending {
        let n = mint(cand.as_str(), &taken);
        taken.insert(n.clone());
        map.insert(s, n);
    }
    map
}

pub fn rename_sub(l: &Subgroup, map: &HashMap<Sym, Sym>) -> Subgroup {
    Subgroup { gens: l.gens.iter().map(|w| rename(w, map)).collect() }
}

/// `K` and `L` transported along a renaming.
fn transport(c: &BenignCert, map: &HashMap<Sym, Sym>) -> (Presentation, Subgroup) {
    (c.k.renamed(map), rename_sub(&c.l, map))
}

/// Letters of `p` except the three given ones, in order.
fn rest(p: &Presentation, skip: &[&str]) -> Vec<String> {
    p.gens
        .iter()
        .filter(|s| !skip.contains(&s.as_str()))
        .map(|s| s.to_string())
        .collect()
}

/// Relators of `Ξ_m` on the letters `b, c, t, t'`: `b^t = b_{1-m}`, `b^{t'} = b_{-m}`,
/// `c^t = c^{t'} = c²`, in that order.
fn xi_rels(m: i64, b: &str, c: &str, t: &str, tp: &str) -> Vec<Word> {
    let (bw, cw) = (Word::gen(b), Word::gen(c));
    vec![
        sends(&Word::gen(t), &bw, &indexed(b, c, 1 - m)),
        sends(&Word::gen(tp), &bw, &indexed(b, c, -m)),
        sends(&Word::gen(t), &cw, &cw.pow(2)),
        sends(&Word::gen(tp), &cw, &cw.pow(2)),
    ]
}

/// The group `𝒞`: the ✛-construction over `⟨a⟩ ∗ Ξ_1` with stable letters `u_1, u_2`.
pub fn script_c() -> Result<Presentation> {
    let mut base = Presentation::free("<a>*Xi_1", &["a", "b", "c", "t_1", "t'_1"]);
    base.rels = xi_rels(1, "b", "c", "t_1", "t'_1");
    let l1 = Subgroup { gens: vec![indexed("b", "c", 1), Word::gen("t_1"), Word::gen("t'_1")] };
    let l2 = Subgroup { gens: words(&["a", "b", "t_1", "t'_1"]) };
    let comps = [
        StarComponent { extra: Presentation::new("K1"), l: l1, t: "u_1".into() },
        StarComponent { extra: Presentation::new("K2"), l: l2, t: "u_2".into() },
    ];
    let mut c = star(&base, &comps)?;
    c.name = "C".into();
    Ok(c)
}

/// The group `𝒜 = 𝒞 ∗_{ω,δ} (d, e)` with its 9 generators and 20 relators.
pub fn script_a() -> Result<Presentation> {
    let c = script_c()?;
    let abc = words(&ABC);
    let (u1, u2, bw) = (Word::gen("u_1"), Word::gen("u_2"), Word::gen("b"));
    let mut omega = IsoSpec::default();
    for x in &abc {
        let xu = x.conj(&u1);
        omega.pairs.push((xu.clone(), xu));
    }
    let bu2 = bw.mul(&u2);
    omega.pairs.push((abc[0].conj(&u2), abc[0].conj(&bu2)));
    omega.pairs.push((abc[1].conj(&u2), abc[1].conj(&u2)));
    omega.pairs.push((abc[2].conj(&u2), abc[2].conj(&bu2)));
    let delta = IsoSpec {
        pairs: vec![
            (abc[0].clone(), abc[0].clone()),
            (abc[1].clone(), indexed("b", "c", 1)),
            (abc[2].clone(), abc[2].clone()),
        ],
    };
    let mut a = hnn(&c, &[(omega, "d"), (delta, "e")])?;
    a.name = "A".into();
    Ok(a)
}

/// `d_i = d^{e^i}`.
pub fn d_i(i: i64, sfx: &str) -> Word {
    indexed(&format!("d{sfx}"), &format!("e{sfx}"), i)
}

/// `L_𝒮 = ⟨a_{(0,1)}, d_0 d_1⟩`.
pub fn l_s() -> Subgroup {
    Subgroup { gens: vec![a_word(&Seq::from_slice(&[0, 1])), d_i(0, "").mul(&d_i(1, ""))] }
}

fn suffix_map(names: &[&str], sfx: &str) -> HashMap<Sym, Sym> {
    names.iter().map(|n| (Sym::new(n), Sym::new(&format!("{n}{sfx}")))).collect()
}

/// The barred copy `𝒜̄`.
pub fn script_a_bar() -> Result<Presentation> {
    let mut p = script_a()?.renamed(&suffix_map(&X_A, BAR));
    p.name = "A_bar".into();
    Ok(p)
}

pub fn base_z() -> BenignCert {
    BenignCert {
        expr: SeqSetExpr::BaseZ,
        k: Presentation::free("F", &ABC),
        l: Subgroup { gens: vec![Word::gen("a")] },
    }
}

pub fn base_s() -> Result<BenignCert> {
    Ok(BenignCert { expr: SeqSetExpr::BaseS, k: script_a()?, l: l_s() })
}

/// A finite set: `K = F` and `L = ⟨a_f | f ∈ 𝒳⟩`.
pub fn finite(set: &std::collections::BTreeSet<Seq>) -> BenignCert {
    BenignCert {
        expr: SeqSetExpr::Finite(set.clone()),
        k: Presentation::free("F", &ABC),
        l: Subgroup { gens: set.iter().map(a_word).collect() },
    }
}

/// Appends commutators `[x, y]` for `x ∈ xs`, `y ∈ ys`.
fn commute(p: &mut Presentation, xs: &[Word], ys: &[Word]) {
    for x in xs {
        for y in ys {
            p.push(x.comm(y));
        }
    }
}

fn fix(p: &mut Presentation, x: &str, ws: &[Word]) {
    p.fix_all(&Word::gen(x), ws);
}

fn two(x: &str, y: &str) -> Word {
    Word::gen(x).mul(&Word::gen(y))
}

fn join_rel(name: &str, gens: Vec<String>) -> Presentation {
    let mut p = Presentation::new(name);
    p.gens = gens.iter().map(|s| Sym::new(s)).collect();
    p
}

fn meet_or_join(c1: &BenignCert, c2: &BenignCert, join: bool) -> Result<BenignCert> {
    let stable = strs(&["v_1", "v_2"]);
    let r1 = set_of(&stable);
    let m1 = relabel(&c1.k, &[("a", "a"), ("b", "b"), ("c", "c")], "", &r1);
    let (k1, l1) = transport(c1, &m1);
    let mut r2 = r1.clone();
    r2.extend(k1.gens.iter().cloned());
    let m2 = relabel(&c2.k, &[], "", &r2);
    let (k2, l2) = transport(c2, &m2);
    let mut gens: Vec<String> = k1.gens.iter().chain(&k2.gens).map(|s| s.to_string()).collect();
    gens.extend(stable.iter().cloned());
    let mut p = join_rel(if join { "K_join" } else { "K_meet" }, gens);
    p.rels.extend(k1.rels.iter().cloned());
    p.rels.extend(k2.rels.iter().cloned());
    for n in ABC {
        let s = Sym::new(n);
        p.push(Word::sym_pow(&s, 1).mul(&Word::sym_pow(&m2[&s], 1).inv()));
    }
    fix(&mut p, "v_1", &l1.gens);
    fix(&mut p, "v_2", &l2.gens);
    let abc = words(&ABC);
    let l = if join {
        let mut v = conj_all(&abc, &Word::gen("v_1"));
        v.extend(conj_all(&abc, &Word::gen("v_2")));
        v
    } else {
        conj_all(&abc, &two("v_1", "v_2"))
    };
    let expr = if join {
        SeqSetExpr::Upsilon(Box::new(c1.expr.clone()), Box::new(c2.expr.clone()))
    } else {
        SeqSetExpr::Iota(Box::new(c1.expr.clone()), Box::new(c2.expr.clone()))
    };
    Ok(BenignCert { expr, k: p, l: Subgroup { gens: l } })
}

pub fn op_meet(c1: &BenignCert, c2: &BenignCert) -> Result<BenignCert> {
    meet_or_join(c1, c2, false)
}

pub fn op_join(c1: &BenignCert, c2: &BenignCert) -> Result<BenignCert> {
    meet_or_join(c1, c2, true)
}

/// `K̄`, `L̄`: every letter barred, clashes with `reserved` minted away.
fn bar_copy(c: &BenignCert, reserved: &HashSet<Sym>) -> (Presentation, Subgroup) {
    let (ab, bb, cb) = (bar("a"), bar("b"), bar("c"));
    let map = relabel(&c.k, &[("a", &ab), ("b", &bb), ("c", &cb)], BAR, reserved);
    transport(c, &map)
}

/// `{a, b, c, ā, b̄, c̄}`.
fn abc6() -> Vec<Word> {
    let mut v = words(&ABC);
    v.extend(gw(&barred(&ABC)));
    v
}

fn with_gens(name: &str, parts: &[&[String]]) -> Presentation {
    join_rel(name, parts.iter().flat_map(|p| p.iter().cloned()).collect())
}

pub fn op_rho(c: &BenignCert) -> Result<BenignCert> {
    let xa = strs(&X_A);
    let xab = barred(&X_A);
    let stable = strs(&["v_1", "v_2", "w_1", "w_2", "w_3", "w_4"]);
    let reserved = set_of(xa.iter().chain(&xab).chain(&stable));
    let (kb, lb) = bar_copy(c, &reserved);
    let zb = rest(&kb, &[&bar("a"), &bar("b"), &bar("c")]);
    let mut p = with_gens("K_rho", &[&xa, &xab, &zb, &stable]);
    p.rels.extend(script_a()?.rels);
    p.rels.extend(script_a_bar()?.rels);
    p.rels.extend(kb.rels.iter().cloned());
    commute(&mut p, &gw(&xa), &gw(&xab));
    commute(&mut p, &gw(&xa), &gw(&zb));
    let e = Word::gen("e");
    fix(&mut p, "v_1", &[two("a_bar", "a"), two("d_bar", "d"), Word::gen("e_bar").mul(&e.inv())]);
    let mut v2 = lb.gens.clone();
    v2.extend(words(&["a", "d", "e"]));
    fix(&mut p, "v_2", &v2);
    fix(&mut p, "w_1", &gw(&barred(&ABC)));
    let v12 = two("v_1", "v_2");
    let mut w2 = conj_all(&gw(&xa), &v12);
    w2.extend(conj_all(&gw(&xab), &v12));
    fix(&mut p, "w_2", &w2);
    tail_w3_w4(&mut p);
    Ok(BenignCert {
        expr: SeqSetExpr::Rho(Box::new(c.expr.clone())),
        k: p,
        l: Subgroup { gens: conj_all(&abc6(), &two("w_3", "w_4")) },
    })
}

/// `w_3` fixes `a, b, c`; `w_4` fixes `{a,b,c,ā,b̄,c̄}^{w_1} ∪ {…}^{w_2}`.
fn tail_w3_w4(p: &mut Presentation) {
    fix(p, "w_3", &words(&ABC));
    w4_line(p);
}

fn w4_line(p: &mut Presentation) {
    let mut w4 = conj_all(&abc6(), &Word::gen("w_1"));
    w4.extend(conj_all(&abc6(), &Word::gen("w_2")));
    fix(p, "w_4", &w4);
}

pub fn op_sigma(c: &BenignCert) -> Result<BenignCert> {
    let abc = strs(&ABC);
    let abcb = barred(&ABC);
    let stable = strs(&["v_1", "v_2", "w_1", "w_2", "w_3", "w_4"]);
    let reserved = set_of(abc.iter().chain(&abcb).chain(&stable));
    let (kb, lb) = bar_copy(c, &reserved);
    let zb = rest(&kb, &[&bar("a"), &bar("b"), &bar("c")]);
    let mut p = with_gens("K_sigma", &[&abc, &abcb, &zb, &stable]);
    p.rels.extend(kb.rels.iter().cloned());
    commute(&mut p, &gw(&abc), &gw(&abcb));
    commute(&mut p, &gw(&abc), &gw(&zb));
    fix(
        &mut p,
        "v_1",
        &[
            two("a_bar", "a"),
            Word::gen("b_bar").mul(&indexed("b", "c", 1)),
            two("c_bar", "c"),
        ],
    );
    let mut v2 = lb.gens.clone();
    v2.extend(words(&ABC));
    fix(&mut p, "v_2", &v2);
    fix(&mut p, "w_1", &gw(&abcb));
    fix(&mut p, "w_2", &conj_all(&abc6(), &two("v_1", "v_2")));
    tail_w3_w4(&mut p);
    Ok(BenignCert {
        expr: SeqSetExpr::Sigma(Box::new(c.expr.clone())),
        k: p,
        l: Subgroup { gens: conj_all(&abc6(), &two("w_3", "w_4")) },
    })
}

/// Input `K` kept unbarred, with letters other than `a, b, c` moved off `reserved`.
fn unbarred(c: &BenignCert, reserved: &HashSet<Sym>) -> (Presentation, Subgroup) {
    let map = relabel(&c.k, &[("a", "a"), ("b", "b"), ("c", "c")], "", reserved);
    transport(c, &map)
}

fn dedup(ws: Vec<Word>) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    for w in ws {
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

pub fn op_zeta(c: &BenignCert) -> Result<BenignCert> {
    let xa = strs(&X_A);
    let stable = strs(&["v_1", "v_2", "v_3", "v_4"]);
    let (k, l) = unbarred(c, &set_of(xa.iter().chain(&stable)));
    let z: Vec<String> = k.gens.iter().map(|s| s.to_string()).collect();
    let zr = rest(&k, &ABC);
    let mut p = with_gens("K_zeta", &[&xa, &zr, &stable]);
    p.rels.extend(script_a()?.rels);
    p.rels.extend(k.rels.iter().cloned());
    fix(&mut p, "v_1", &l.gens);
    fix(&mut p, "v_2", &[Word::gen("d")]);
    let mut v3 = Vec::new();
    for v in ["v_1", "v_2"] {
        let vw = Word::gen(v);
        v3.extend(conj_all(&gw(&xa), &vw));
        v3.extend(conj_all(&gw(&z), &vw));
    }
    fix(&mut p, "v_3", &v3);
    fix(&mut p, "v_4", &words(&ABC));
    let lgens = dedup(xa.iter().chain(&zr).map(|n| Word::gen(n)).collect());
    Ok(BenignCert {
        expr: SeqSetExpr::Zeta(Box::new(c.expr.clone())),
        k: p,
        l: Subgroup { gens: conj_all(&lgens, &two("v_3", "v_4")) },
    })
}

pub fn op_pi(c: &BenignCert) -> Result<BenignCert> {
    let xa = strs(&X_A);
    let xs = strs(&["x_1", "x'_1"]);
    let stable = strs(&["v_1", "v_2", "v_3", "v_4"]);
    let (k, l) = unbarred(c, &set_of(xa.iter().chain(&xs).chain(&stable)));
    let z: Vec<String> = k.gens.iter().map(|s| s.to_string()).collect();
    let zr = rest(&k, &ABC);
    let mut p = with_gens("K_pi", &[&xa, &zr, &xs, &stable]);
    p.rels.extend(script_a()?.rels);
    p.rels.extend(k.rels.iter().cloned());
    let (d, e) = (Word::gen("d"), Word::gen("e"));
    p.send_all(&Word::gen("x_1"), &[d.clone(), e.clone()], &[d.clone(), e.pow(2)]);
    p.send_all(&Word::gen("x'_1"), &[d.clone(), e.clone()], &[d_i(-1, ""), e.pow(2)]);
    fix(&mut p, "v_1", &l.gens);
    fix(&mut p, "v_2", &[d_i(1, ""), Word::gen("x_1"), Word::gen("x'_1")]);
    let mut v3 = Vec::new();
    for v in ["v_1", "v_2"] {
        let vw = Word::gen(v);
        v3.extend(conj_all(&gw(&xa), &vw));
        v3.extend(conj_all(&gw(&z), &vw));
        v3.extend(conj_all(&gw(&xs), &vw));
    }
    fix(&mut p, "v_3", &v3);
    fix(&mut p, "v_4", &words(&ABC));
    let lgens = dedup(xa.iter().chain(&zr).chain(&xs).map(|n| Word::gen(n)).collect());
    Ok(BenignCert {
        expr: SeqSetExpr::Pi(Box::new(c.expr.clone())),
        k: p,
        l: Subgroup { gens: conj_all(&lgens, &two("v_3", "v_4")) },
    })
}

/// The `v_3` and `v_5` lines run over `X_𝒦` without `a, b, c`: those relators are
/// consequences of `a, b, c` commuting with `v_1, …, v_4`, and dropping them gives
/// the stated total `n + 6m + k + 111`.
pub fn op_theta(c: &BenignCert) -> Result<BenignCert> {
    let xab = barred(&X_A);
    let abc = strs(&ABC);
    let vs = strs(&["v_1", "v_2", "v_3", "v_4", "v_5", "v_6"]);
    let ws = strs(&["w_1", "w_2", "w_3", "w_4"]);
    let y = strs(&["y"]);
    let reserved = set_of(xab.iter().chain(&abc).chain(&vs).chain(&ws).chain(&y));
    let (kb, lb) = bar_copy(c, &reserved);
    let zb = rest(&kb, &[&bar("a"), &bar("b"), &bar("c")]);
    let mut p = with_gens("K_theta", &[&xab, &zb, &y, &abc, &vs, &ws]);
    p.rels.extend(script_a_bar()?.rels);
    p.rels.extend(kb.rels.iter().cloned());
    let (db, eb) = (Word::gen("d_bar"), Word::gen("e_bar"));
    p.send_all(&Word::gen("y"), &[db.clone(), eb.clone()], &[d_i(2, BAR), eb.clone()]);
    fix(&mut p, "v_1", &lb.gens);
    fix(&mut p, "v_2", &[d_i(1, BAR), Word::gen("y")]);
    let xk: Vec<Word> = gw(&[xab.clone(), zb.clone(), y.clone()].concat());
    let mut v3 = conj_all(&xk, &Word::gen("v_1"));
    v3.extend(conj_all(&xk, &Word::gen("v_2")));
    fix(&mut p, "v_3", &v3);
    fix(&mut p, "v_4", &gw(&barred(&ABC)));
    fix(&mut p, "w_1", &gw(&barred(&ABC)));
    let others: Vec<Word> = gw(&[xab.clone(), zb.clone(), y.clone(), vs[..4].to_vec()].concat());
    commute(&mut p, &gw(&abc), &others);
    fix(&mut p, "v_5", &conj_all(&xk, &two("v_3", "v_4")));
    fix(&mut p, "v_5", &gw(&abc));
    fix(&mut p, "w_3", &gw(&abc));
    let cb = Word::gen("c_bar");
    fix(&mut p, "v_6", &[two("a_bar", "a"), two("b_bar", "b"), cb.pow(2).mul(&Word::gen("c"))]);
    fix(&mut p, "w_2", &conj_all(&abc6(), &two("v_5", "v_6")));
    w4_line(&mut p);
    Ok(BenignCert {
        expr: SeqSetExpr::Theta(Box::new(c.expr.clone())),
        k: p,
        l: Subgroup { gens: conj_all(&abc6(), &two("w_3", "w_4")) },
    })
}

pub const B_EXTRA: [&str; 7] = ["x_0", "x'_0", "x_2", "x'_2", "y_0", "y_1", "y_2"];

/// The 16 relators `ℬ` adds to `𝒜`, over letters carrying `sfx`.
pub fn b_extra_rels(sfx: &str) -> Vec<Word> {
    let n = |s: &str| Word::gen(&format!("{s}{sfx}"));
    let (d, e, e2) = (n("d"), n("e"), n("e").pow(2));
    let mut r = vec![
        sends(&n("x_0"), &d, &d_i(1, sfx)),
        sends(&n("x'_0"), &d, &d),
        sends(&n("x_0"), &e, &e2),
        sends(&n("x'_0"), &e, &e2),
        sends(&n("x_2"), &d, &d_i(-1, sfx)),
        sends(&n("x'_2"), &d, &d_i(-2, sfx)),
        sends(&n("x_2"), &e, &e2),
        sends(&n("x'_2"), &e, &e2),
    ];
    r.extend([d_i(-1, sfx), n("x_0"), n("x'_0")].iter().map(|w| fixes(&n("y_0"), w)));
    r.extend([d_i(0, sfx), d_i(1, sfx)].iter().map(|w| fixes(&n("y_1"), w)));
    r.extend([d_i(2, sfx), n("x_2"), n("x'_2")].iter().map(|w| fixes(&n("y_2"), w)));
    r
}

/// The group `ℬ`: `𝒜` with `x_0, x'_0, x_2, x'_2` and the three stable letters `y_i`.
pub fn script_b() -> Result<Presentation> {
    let mut p = script_a()?;
    p.add_gens(&B_EXTRA)?;
    p.rels.extend(b_extra_rels(""));
    p.name = "B".into();
    Ok(p)
}

/// Follows the listed presentation line by line. Built this way it has
/// `m + 35` generators and `n + 16m + k + 353` relators.
pub fn op_tau(c: &BenignCert) -> Result<BenignCert> {
    let xb: Vec<String> = X_A.iter().chain(&B_EXTRA).map(|s| s.to_string()).collect();
    let xbb: Vec<String> = xb.iter().map(|s| bar(s)).collect();
    let stable = strs(&["v_1", "v_2", "w_1", "w_2", "w_3", "w_4"]);
    let reserved = set_of(xb.iter().chain(&xbb).chain(&stable));
    let (kb, lb) = bar_copy(c, &reserved);
    let zb = rest(&kb, &[&bar("a"), &bar("b"), &bar("c")]);
    let mut p = with_gens("K_tau", &[&xb, &xbb, &zb, &stable]);
    p.rels.extend(script_a()?.rels);
    p.rels.extend(script_a_bar()?.rels);
    p.rels.extend(kb.rels.iter().cloned());
    p.rels.extend(b_extra_rels(""));
    p.rels.extend(b_extra_rels(BAR));
    commute(&mut p, &gw(&xb), &gw(&[xbb.clone(), zb.clone()].concat()));
    fix(&mut p, "v_1", &couples());
    let mut v2 = lb.gens.clone();
    v2.extend(words(&["a", "d", "e"]));
    fix(&mut p, "v_2", &v2);
    fix(&mut p, "w_1", &gw(&barred(&ABC)));
    let v12 = two("v_1", "v_2");
    let mut w2 = conj_all(&gw(&xb), &v12);
    w2.extend(conj_all(&gw(&xbb), &v12));
    fix(&mut p, "w_2", &w2);
    tail_w3_w4(&mut p);
    Ok(BenignCert {
        expr: SeqSetExpr::Tau(Box::new(c.expr.clone())),
        k: p,
        l: Subgroup { gens: conj_all(&abc6(), &two("w_3", "w_4")) },
    })
}

/// The 20 couples in `ℬ̄ × ℬ`, each written as the product of its coordinates.
pub fn couples() -> Vec<Word> {
    let pair = |xb: Word, x: Word, y: &str| xb.conj(&Word::gen(&bar(y))).mul(&x.conj(&Word::gen(y)));
    let mut out = Vec::new();
    for x in X_A {
        out.push(pair(Word::gen(&bar(x)), Word::gen(x), "y_0"));
    }
    out.push(pair(d_i(0, BAR), d_i(1, ""), "y_1"));
    out.push(pair(d_i(1, BAR), d_i(0, ""), "y_1"));
    for x in X_A {
        out.push(pair(Word::gen(&bar(x)), Word::gen(x), "y_2"));
    }
    out
}

/// A count stated in closed form, stored doubled so that halves stay exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Half(pub i64);

impl Half {
    pub fn whole(v: i64) -> Half {
        Half(2 * v)
    }

    pub fn matches(&self, actual: usize) -> bool {
        self.0 == 2 * actual as i64
    }
}

impl std::fmt::Display for Half {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}.5", (self.0 - 1) / 2)
        }
    }
}

/// One stage of the ω build: counts by construction against the stated closed forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaStage {
    pub name: String,
    pub gens: usize,
    pub rels: usize,
    pub claimed_gens: Half,
    pub claimed_rels: Half,
}

impl OmegaStage {
    pub fn agrees(&self) -> bool {
        self.claimed_gens.matches(self.gens) && self.claimed_rels.matches(self.rels)
    }
}

/// Stated closed forms for the ω stages, given `m` and the input `(|Z|, |S|, |L|)`.
pub fn omega_claims(m: i64, z: i64, n: i64, k: i64) -> Vec<(&'static str, Half, Half)> {
    let sq = (m + 1) * (m + 1);
    let f3 = (m * m * m + 6 * m * m + 8 * m) / 3;
    let d3 = (m * m * m + 6 * m * m + 41 * m) / 3;
    let k3 = (m * m * m + 9 * m * m + 47 * m) / 3;
    vec![
        ("Z", Half::whole(8), Half::whole(14)),
        ("G", Half::whole(11), Half::whole(26)),
        ("F", Half(22 + (m + 1) * (m + 2)), Half::whole(27 + f3)),
        ("D", Half(26 + sq), Half::whole(41 + d3)),
        ("L", Half(30 + sq + 2 * z), Half::whole(43 + d3 + n + k)),
        ("K_omega", Half(34 + sq + 2 * z), Half::whole(73 + k3 + n + k)),
    ]
}

/// `ω_m`: builds `𝒵, 𝒢, ℱ, 𝒟, ℒ` and `K_{ω_m𝒳}`, reporting each stage's counts.
pub fn op_omega_staged(c: &BenignCert, m: u32) -> Result<(BenignCert, Vec<OmegaStage>)> {
    if m < 1 {
        return Err(Error::Invalid("omega_m needs m >= 1".into()));
    }
    let mi = m as i64;
    let tm = format!("t_{m}");
    let tpm = format!("t'_{m}");
    let z8: Vec<String> = strs(&["b", "c"])
        .into_iter()
        .chain([tm.clone(), tpm.clone()])
        .chain(strs(&["t_0", "t'_0", "r_1", "r_2"]))
        .collect();
    let ghk = strs(&["g", "h", "k"]);
    let ladder: Vec<(i64, i64, String)> = (1..=mi)
        .flat_map(|s| (0..s).map(move |j| (s - 1, j, format!("l_{}_{}", s - 1, j))))
        .collect();
    let ps: Vec<String> = (0..=mi).map(|s| format!("p_{s}")).collect();
    let ar = strs(&["a", "r"]);
    let qs = strs(&["q_1", "q_2", "q_3", "q_4"]);

    let mut stages = Vec::new();
    let mut p = with_gens("Z", &[&z8]);
    p.rels.extend(xi_rels(mi, "b", "c", &tm, &tpm).into_iter().take(2));
    p.rels.extend(xi_rels(0, "b", "c", "t_0", "t'_0").into_iter().take(2));
    let cw = Word::gen("c");
    for t in [&tm, &tpm, &"t_0".to_string(), &"t'_0".to_string()] {
        p.push(sends(&Word::gen(t), &cw, &cw.pow(2)));
    }
    fix(&mut p, "r_1", &[indexed("b", "c", mi), Word::gen(&tm), Word::gen(&tpm)]);
    fix(&mut p, "r_2", &[indexed("b", "c", -1), Word::gen("t_0"), Word::gen("t'_0")]);
    let snap = |p: &Presentation, name: &str| (name.to_string(), p.gens.len(), p.rels.len());
    let mut counts = vec![snap(&p, "Z")];

    p.add_gens(&["g", "h", "k"])?;
    let rs: Vec<Word> = ["r_1", "r_2"]
        .iter()
        .flat_map(|r| {
            let rw = Word::gen(r);
            vec![Word::gen("b").conj(&rw), cw.conj(&rw)]
        })
        .collect();
    for x in &ghk {
        fix(&mut p, x, &rs);
    }
    counts.push(snap(&p, "G"));

    for (_, _, l) in &ladder {
        p.add_gen(l)?;
    }
    for s in &ps {
        p.add_gen(s)?;
    }
    let h = |i: i64| indexed("h", "k", i);
    let g = Word::gen("g");
    for (s1, j, l) in &ladder {
        let hj = h(*j);
        let mut us = vec![indexed("b", "c", *s1), g.clone()];
        let mut vs = vec![indexed("b", "c", *s1), g.conj(&hj)];
        for i in 0..=*s1 {
            us.push(h(i));
            vs.push(if i < *j { h(i).conj(&hj) } else { h(i) });
        }
        p.send_all(&Word::gen(l), &us, &vs);
    }
    fix(&mut p, "p_0", std::slice::from_ref(&g));
    for s in 1..=mi {
        let mut ws = vec![product(&[g.conj(&h(s - 1)), indexed("b", "c", s - 1).inv(), g.inv()])];
        ws.extend(ladder.iter().filter(|(s1, _, _)| *s1 == s - 1).map(|(_, _, l)| Word::gen(l)));
        fix(&mut p, &ps[s as usize], &ws);
    }
    counts.push(snap(&p, "F"));

    p.add_gens(&["a", "r"])?;
    let eleven: Vec<Word> = gw(&[z8.clone(), ghk.clone()].concat());
    for pn in &ps {
        fix(&mut p, "a", &conj_all(&eleven, &Word::gen(pn)));
    }
    p.send_all(
        &Word::gen("r"),
        &words(&ABC),
        &[Word::gen("a"), Word::gen("b").conj(&cw.pow(mi)), cw.clone()],
    );
    counts.push(snap(&p, "D"));
    let d_gens = p.gen_words();

    let mut reserved: HashSet<Sym> = p.gen_set();
    reserved.extend(qs.iter().map(|q| Sym::new(q)));
    for n in &ghk {
        reserved.remove(&Sym::new(n));
    }
    let map = relabel(&c.k, &[("a", "g"), ("b", "h"), ("c", "k")], "", &reserved);
    let (k, l) = transport(c, &map);
    for s in rest(&k, &["g", "h", "k"]) {
        p.add_gen(&s)?;
    }
    p.add_gens(&["q_1", "q_2"])?;
    p.rels.extend(k.rels.iter().cloned());
    fix(&mut p, "q_1", &l.gens);
    fix(&mut p, "q_2", &gw(&ar));
    counts.push(snap(&p, "L"));

    p.add_gens(&["q_3", "q_4"])?;
    let mut q3 = conj_all(&d_gens, &Word::gen("q_1"));
    q3.extend(conj_all(&d_gens, &Word::gen("q_2")));
    fix(&mut p, "q_3", &q3);
    fix(&mut p, "q_4", &words(&ABC));
    counts.push(snap(&p, "K_omega"));
    p.name = format!("K_omega_{m}");

    let (zm, zn, zk) = c.meta();
    let claims = omega_claims(mi, zm as i64, zn as i64, zk as i64);
    for ((name, gens, rels), (_, cg, cr)) in counts.into_iter().zip(claims) {
        stages.push(OmegaStage { name, gens, rels, claimed_gens: cg, claimed_rels: cr });
    }
    let cert = BenignCert {
        expr: SeqSetExpr::Omega(m, Box::new(c.expr.clone())),
        k: p,
        l: Subgroup { gens: conj_all(&d_gens, &two("q_3", "q_4")) },
    };
    Ok((cert, stages))
}

pub fn op_omega(c: &BenignCert, m: u32) -> Result<BenignCert> {
    Ok(op_omega_staged(c, m)?.0)
}

/// Structural fold over the expression tree.
pub fn build_from_expr(e: &SeqSetExpr) -> Result<BenignCert> {
    use SeqSetExpr::*;
    let c = match e {
        BaseZ => base_z(),
        BaseS => base_s()?,
        Finite(set) => finite(set),
        Iota(x, y) => op_meet(&build_from_expr(x)?, &build_from_expr(y)?)?,
        Upsilon(x, y) => op_join(&build_from_expr(x)?, &build_from_expr(y)?)?,
        Rho(x) => op_rho(&build_from_expr(x)?)?,
        Sigma(x) => op_sigma(&build_from_expr(x)?)?,
        Tau(x) => op_tau(&build_from_expr(x)?)?,
        Theta(x) => op_theta(&build_from_expr(x)?)?,
        Zeta(x) => op_zeta(&build_from_expr(x)?)?,
        Pi(x) => op_pi(&build_from_expr(x)?)?,
        Omega(m, x) => op_omega(&build_from_expr(x)?, *m)?,
    };
    c.validate()?;
    Ok(c)
}

/// The unary builders whose counts have closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Rho,
    Sigma,
    Zeta,
    Pi,
    Theta,
    Tau,
}

impl UnaryOp {
    pub const ALL: [UnaryOp; 6] =
        [UnaryOp::Rho, UnaryOp::Sigma, UnaryOp::Zeta, UnaryOp::Pi, UnaryOp::Theta, UnaryOp::Tau];

    pub fn name(&self) -> &'static str {
        match self {
            UnaryOp::Rho => "rho",
            UnaryOp::Sigma => "sigma",
            UnaryOp::Zeta => "zeta",
            UnaryOp::Pi => "pi",
            UnaryOp::Theta => "theta",
            UnaryOp::Tau => "tau",
        }
    }

    pub fn build(&self, c: &BenignCert) -> Result<BenignCert> {
        match self {
            UnaryOp::Rho => op_rho(c),
            UnaryOp::Sigma => op_sigma(c),
            UnaryOp::Zeta => op_zeta(c),
            UnaryOp::Pi => op_pi(c),
            UnaryOp::Theta => op_theta(c),
            UnaryOp::Tau => op_tau(c),
        }
    }

    /// Stated `(gens, rels)` for input `(m, n, k)`.
    pub fn stated_counts(&self, m: usize, n: usize, k: usize) -> (usize, usize) {
        match self {
            UnaryOp::Rho => (m + 21, n + 9 * m + k + 136),
            UnaryOp::Sigma => (m + 9, n + 3 * m + k + 30),
            UnaryOp::Zeta => (m + 10, 2 * m + n + k + 42),
            UnaryOp::Pi => (m + 12, n + 2 * m + k + 52),
            UnaryOp::Theta => (m + 20, n + 6 * m + k + 111),
            UnaryOp::Tau => (m + 38, n + 16 * m + k + 345),
        }
    }
}
