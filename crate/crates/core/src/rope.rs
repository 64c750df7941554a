//! The `Z_𝒳` and `Q_𝒳` chains, the rope trick producing the finitely presented
//! overgroup `𝒢`, and its 2-generator image.

use std::collections::HashSet;

use crate::benign::{build_from_expr, relabel, BenignCert, ABC};
use crate::error::Result;
use crate::pres::{conj_all, words, Presentation, Subgroup};
use crate::seq::{eval_bounded, Bounds, Seq, SeqSetExpr};
use crate::twogen::{embed2gen, sequences_of, universal_word_on, CountablePresentation};
use crate::word::{Hom, Sym, Word};

/// Letters the chain introduces, in listing order.
pub const ZRSL: [&str; 4] = ["z", "r", "s", "l"];
pub const P7: [&str; 7] = ["z", "r", "s", "u", "p", "q", "v"];
pub const CHAIN_LETTERS: [&str; 24] = [
    "z", "r", "s", "l", "v_1", "v_2", "w_1", "w_2", "w_3", "w_4", "u", "p", "q", "v", "e_1", "e_2",
    "h_1", "h_2", "f_1", "f_2", "t", "x", "y", "e",
];
/// Letters of the 2-generator target.
pub const TWO_GEN: [&str; 2] = ["X", "Y"];

/// A named intermediate group with its distinguished subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub name: String,
    pub k: Presentation,
    pub l: Subgroup,
}

#[derive(Clone, Debug)]
pub struct RopeResult {
    pub g_final: Presentation,
    pub phi: Hom,
    pub intermediates: Vec<Stage>,
    pub t_relators: Vec<Word>,
    pub sequences: Vec<Seq>,
    pub cert: BenignCert,
    pub warnings: Vec<String>,
}

/// `{a, b, c, z, r, s, l}`.
fn abc_zrsl() -> Vec<Word> {
    let mut v = words(&ABC);
    v.extend(words(&ZRSL));
    v
}

fn fix(p: &mut Presentation, x: &str, ws: &[Word]) {
    p.fix_all(&Word::gen(x), ws);
}

fn two(x: &str, y: &str) -> Word {
    Word::gen(x).mul(&Word::gen(y))
}

fn stage(name: &str, k: &Presentation, l: Vec<Word>) -> Stage {
    let mut k = k.clone();
    k.name = name.to_string();
    Stage { name: name.to_string(), k, l: Subgroup { gens: l } }
}

/// `K_X` with letters moved off the chain alphabet and `a, b, c` listed first.
fn prepare(c: &BenignCert) -> (Presentation, Subgroup) {
    let reserved: HashSet<Sym> = CHAIN_LETTERS.iter().map(|s| Sym::new(s)).collect();
    let map = relabel(&c.k, &[("a", "a"), ("b", "b"), ("c", "c")], "", &reserved);
    let mut k = c.k.renamed(&map);
    let l = crate::benign::rename_sub(&c.l, &map);
    let mut gens: Vec<Sym> = ABC.iter().map(|s| Sym::new(s)).collect();
    gens.extend(k.gens.iter().filter(|s| !ABC.contains(&s.as_str())).cloned());
    k.gens = gens;
    (k, l)
}

/// `K_Q`, `K_{Q_1}`, `K_{Z_𝒳}`; the last one carries `L_{Z_𝒳} = (F × ℒ)^{w_3 w_4}`.
pub fn build_z_chain(c: &BenignCert) -> Result<Vec<Stage>> {
    let (k, lx) = prepare(c);
    let z = k.gen_words();
    let mut p = k.clone();
    p.add_gens(&ZRSL)?;
    p.add_gens(&["v_1", "v_2"])?;
    let (zw, rw, sw) = (Word::gen("z"), Word::gen("r"), Word::gen("s"));
    p.send_all(&Word::gen("l"), &[zw.clone(), rw.clone(), sw.clone()], &[zw, sw, rw]);
    for x in words(&ZRSL) {
        for g in &z {
            p.push(x.comm(g));
        }
    }
    fix(&mut p, "v_1", &[two("a", "z"), two("b", "r"), two("c", "l")]);
    let mut v2 = words(&ZRSL);
    v2.extend(lx.gens.iter().cloned());
    fix(&mut p, "v_2", &v2);
    let mut out = vec![stage("K_Q", &p, conj_all(&abc_zrsl(), &two("v_1", "v_2")))];

    p.add_gens(&["w_1", "w_2"])?;
    fix(&mut p, "w_1", &words(&ABC));
    fix(&mut p, "w_2", &conj_all(&abc_zrsl(), &two("v_1", "v_2")));
    let mut lq1 = conj_all(&abc_zrsl(), &Word::gen("w_1"));
    lq1.extend(conj_all(&abc_zrsl(), &Word::gen("w_2")));
    out.push(stage("K_Q1", &p, lq1.clone()));

    p.add_gens(&["w_3", "w_4"])?;
    fix(&mut p, "w_3", &words(&ZRSL));
    fix(&mut p, "w_4", &lq1);
    out.push(stage("K_ZX", &p, conj_all(&abc_zrsl(), &two("w_3", "w_4"))));
    Ok(out)
}

/// `ℛ̄`, `K_{Z̄_𝒳}`, `K_{Q_𝒳}` on top of `K_{Z_𝒳}`.
///
/// `f_1` fixes `𝒫^{h_1} ∪ 𝒫^{h_2}` with `𝒫 = ⟨z, r, s, u, p, q, v⟩`, the
/// generators of `L_{Z̄_𝒳}`.
pub fn build_q_chain(zx: &Stage) -> Result<Vec<Stage>> {
    let mut p = zx.k.clone();
    p.add_gens(&["u", "p", "q", "v", "e_1", "e_2"])?;
    let (z, u, v) = (Word::gen("z"), Word::gen("u"), Word::gen("v"));
    p.push(crate::pres::sends(&z, &u, &v));
    let p7 = words(&P7);
    for (e, gen, extra) in [("e_1", "r", "p"), ("e_2", "s", "q")] {
        let mut imgs = p7.clone();
        imgs[0] = z.conj(&Word::gen(gen));
        imgs[6] = v.mul(&Word::gen(extra));
        p.send_all(&Word::gen(e), &p7, &imgs);
    }
    let mut out = vec![stage("R_bar", &p, p7.clone())];

    p.add_gens(&["h_1", "h_2"])?;
    fix(&mut p, "h_1", &zx.l.gens);
    fix(&mut p, "h_2", &[u.clone(), v.clone()]);
    let mut lzb = conj_all(&p7, &Word::gen("h_1"));
    lzb.extend(conj_all(&p7, &Word::gen("h_2")));
    out.push(stage("K_ZbarX", &p, lzb.clone()));

    p.add_gens(&["f_1", "f_2"])?;
    fix(&mut p, "f_1", &lzb);
    fix(&mut p, "f_2", &words(&["p", "q"]));
    out.push(stage("K_QX", &p, conj_all(&p7, &two("f_1", "f_2"))));
    Ok(out)
}

/// `𝒢`: adds `t, x, y, e` to `K_{Q_𝒳}`. The relators `w_f(x, y)` are left out;
/// they follow from the others.
pub fn rope_trick(qx: &Stage, _t_relators: &[Word]) -> Result<Presentation> {
    let mut p = qx.k.clone();
    let base = p.gen_words();
    p.add_gens(&["t", "x", "y", "e"])?;
    fix(&mut p, "t", &qx.l.gens);
    let t = Word::gen("t");
    for x in ["x", "y"] {
        let xw = Word::gen(x);
        p.push(xw.comm(&t));
        for g in &base {
            p.push(xw.comm(g));
        }
    }
    let (pw, qw) = (Word::gen("p"), Word::gen("q"));
    let (pt, qt) = (pw.conj(&t), qw.conj(&t));
    p.send_all(
        &Word::gen("e"),
        &[pw.clone(), qw.clone(), pt.clone(), qt.clone()],
        &[two("p", "x"), two("q", "y"), pt, qt],
    );
    p.name = "G".into();
    Ok(p)
}

/// All seven chain stages followed by `𝒢` itself.
pub fn chain(c: &BenignCert, t_relators: &[Word]) -> Result<(Vec<Stage>, Presentation)> {
    let mut stages = build_z_chain(c)?;
    let q = build_q_chain(&stages[2])?;
    stages.extend(q);
    let g = rope_trick(&stages[5], t_relators)?;
    Ok((stages, g))
}

/// Stated `(gens, rels)` of the chain stages and `𝒢` for input `(m, n, k)`.
pub fn stated_chain_counts(m: usize, n: usize, k: usize) -> Vec<(&'static str, usize, usize)> {
    let b = n + 4 * m + k;
    vec![
        ("K_Q", m + 6, b + 10),
        ("K_Q1", m + 8, b + 20),
        ("K_ZX", m + 10, b + 38),
        ("R_bar", m + 16, b + 53),
        ("K_ZbarX", m + 18, b + 62),
        ("K_QX", m + 20, b + 78),
        ("G", m + 24, n + 6 * m + k + 131),
    ]
}

/// Algorithm steps 1 to 7: embedding, coding, certificate, chains and `𝒢`.
pub fn full_pipeline(g: &CountablePresentation, e: &SeqSetExpr, bounds: &Bounds) -> Result<RopeResult> {
    let (t, alpha) = embed2gen(g)?;
    let seqs = sequences_of(&t)?;
    let mut warnings = Vec::new();
    let avail = eval_bounded(e, bounds);
    for s in &seqs {
        if !avail.contains(s) {
            warnings.push(format!(
                "sequence {s} not found in the bounded evaluation of {e} (bounds may clip)"
            ));
        }
    }
    let cert = build_from_expr(e)?;
    let (intermediates, g_final) = chain(&cert, &t.rels)?;
    let mut phi = Hom::new();
    for (k, s) in g.gens.iter().enumerate() {
        phi.insert(s.clone(), universal_word_on(k as i64 + 1, g.torsion_free, "x", "y")?);
    }
    let _ = alpha;
    Ok(RopeResult { g_final, phi, intermediates, t_relators: t.rels, sequences: seqs, cert, warnings })
}

/// `γ`: the i-th generator of `𝒢` goes to the general universal word `a_i(X, Y)`.
pub fn to_two_generator(gp: &Presentation) -> Result<(Presentation, Hom)> {
    let mut gamma = Hom::new();
    for (i, s) in gp.gens.iter().enumerate() {
        gamma.insert(s.clone(), universal_word_on(i as i64 + 1, false, TWO_GEN[0], TWO_GEN[1])?);
    }
    let mut out = Presentation::free(&format!("T_{}", gp.name), &TWO_GEN);
    for r in &gp.rels {
        out.push(gamma.apply(r)?);
    }
    Ok((out, gamma))
}
