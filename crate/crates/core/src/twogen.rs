//! Universal-word embedding into a 2-generator group and relator coding.

use crate::error::{Error, Result};
use crate::seq::Seq;
use crate::word::{Hom, Sym, Word};

/// A countable presentation truncated to a finite prefix of relators.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CountablePresentation {
    pub name: String,
    pub gens: Vec<Sym>,
    pub rels: Vec<Word>,
    pub torsion_free: bool,
}

/// Relators over the fixed alphabet {x, y}.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TwoGenPresentation {
    pub rels: Vec<Word>,
}

/// `a_i(x,y) = y^{(x y^i)² x⁻¹} · y^{-x}`, or without the second factor in the torsion-free case.
pub fn universal_word(i: i64, torsion_free: bool) -> Result<Word> {
    universal_word_on(i, torsion_free, "x", "y")
}

pub fn universal_word_on(i: i64, torsion_free: bool, x: &str, y: &str) -> Result<Word> {
    if i < 1 {
        return Err(Error::Invalid(format!("universal word index must be positive, got {i}")));
    }
    let (xw, yw) = (Word::gen(x), Word::gen(y));
    let conj = xw.mul(&yw.pow(i)).pow(2).mul(&xw.inv());
    let first = yw.conj(&conj);
    if torsion_free {
        Ok(first)
    } else {
        Ok(first.mul(&yw.conj(&xw).inv()))
    }
}

/// `α`: the i-th generator (1-based, in listing order) goes to `a_i(x,y)`.
pub fn alpha(gp: &CountablePresentation) -> Result<Hom> {
    let mut h = Hom::new();
    for (k, s) in gp.gens.iter().enumerate() {
        h.insert(s.clone(), universal_word(k as i64 + 1, gp.torsion_free)?);
    }
    Ok(h)
}

pub fn embed2gen(gp: &CountablePresentation) -> Result<(TwoGenPresentation, Hom)> {
    let h = alpha(gp)?;
    let rels = gp.rels.iter().map(|r| h.apply(r)).collect::<Result<Vec<_>>>()?;
    Ok((TwoGenPresentation { rels }, h))
}

/// Reads `w = x^{j_0} y^{j_1} ⋯ x^{j_{2r}} y^{j_{2r+1}}` as the sequence `(j_0, …)`.
pub fn extract_sequence(w: &Word) -> Result<Seq> {
    let mut vals = Vec::new();
    let mut expect_x = true;
    for (g, e) in w.syllables() {
        let is_x = match g.as_str() {
            "x" => true,
            "y" => false,
            other => return Err(Error::Invalid(format!("letter {other} outside x, y"))),
        };
        if is_x != expect_x {
            vals.push(0);
        }
        vals.push(*e);
        expect_x = !is_x;
    }
    if !expect_x {
        vals.push(0);
    }
    Ok(Seq::from_slice(&vals))
}

/// Extracted sequences, deduplicated, in first-occurrence order.
pub fn sequences_of(t: &TwoGenPresentation) -> Result<Vec<Seq>> {
    let mut out: Vec<Seq> = Vec::new();
    for r in &t.rels {
        let s = extract_sequence(r)?;
        if !out.contains(&s) {
            out.push(s);
        }
    }
    Ok(out)
}

/// The ℚ prefix: generators `a_1..a_kmax`, relators `a_k^k a_{k-1}^{-1}` for `k = 2..kmax`.
pub fn rationals_prefix(kmax: i64) -> CountablePresentation {
    let gens: Vec<Sym> = (1..=kmax).map(|k| Sym::new(&format!("a_{k}"))).collect();
    let rels = (2..=kmax)
        .map(|k| {
            Word::gen(&format!("a_{k}")).pow(k).mul(&Word::gen(&format!("a_{}", k - 1)).inv())
        })
        .collect();
    CountablePresentation { name: "Q".into(), gens, rels, torsion_free: true }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn universal_small() {
        assert_eq!(universal_word(2, true).unwrap(), w("x y^-2 x^-1 y^-2 x^-1 y x y^2 x y^2 x^-1"));
        let a1 = universal_word(1, false).unwrap();
        assert_eq!(a1, w("x y^-1 x^-1 y^-1 x^-1 y x y x y x^-2 y^-1 x"));
        assert!(universal_word(0, true).is_err());
    }

    #[test]
    fn extract_examples() {
        assert_eq!(extract_sequence(&w("x^2 y^5 x^3")).unwrap(), Seq::from_slice(&[2, 5, 3, 0]));
        assert_eq!(extract_sequence(&Word::identity()).unwrap(), Seq::zero());
        assert_eq!(extract_sequence(&w("y^3 x")).unwrap(), Seq::from_slice(&[0, 3, 1]));
        assert!(extract_sequence(&w("z")).is_err());
    }

    #[test]
    fn embed_trivial_cases() {
        let mut gp = CountablePresentation { gens: vec![Sym::new("a_1")], ..Default::default() };
        assert!(embed2gen(&gp).unwrap().0.rels.is_empty());
        gp.rels.push(w("a_1"));
        assert_eq!(embed2gen(&gp).unwrap().0.rels, vec![universal_word(1, false).unwrap()]);
    }

    #[test]
    fn duplicate_relators_collapse() {
        let t = TwoGenPresentation { rels: vec![w("x y"), w("x y")] };
        assert_eq!(sequences_of(&t).unwrap().len(), 1);
        assert!(sequences_of(&TwoGenPresentation::default()).unwrap().is_empty());
    }
}
