mod common;

use std::collections::BTreeSet;

use higman::benign::UnaryOp;
use higman::io::{parse_presentation, print_presentation};
use higman::rope::{chain, stated_chain_counts};
use higman::seq::eval_bounded;
use higman::twogen::CountablePresentation;
use higman::verify::{check_action_lemma, fold, fold_in_order, membership};
use higman::word::{collect_conjugates, reassemble};
use higman::{Bounds, Hom, Seq, SeqSetExpr, Sym, Word};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

const LETTERS: [&str; 4] = ["a", "b", "c", "t'_1"];

fn word_strategy(letters: &'static [&'static str], max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..letters.len(), prop::bool::ANY), 0..max).prop_map(move |v| {
        Word::reduce(v.into_iter().map(|(i, s)| (Sym::new(letters[i]), if s { 1 } else { -1 })))
    })
}

fn seq_strategy(radius: i64, vmax: i64) -> impl Strategy<Value = Seq> {
    (-radius..=radius, prop::collection::vec(-vmax..=vmax, 0..5)).prop_map(|(o, v)| Seq::new(o, &v))
}

fn finite_strategy() -> impl Strategy<Value = SeqSetExpr> {
    prop::collection::btree_set(seq_strategy(3, 3), 0..4).prop_map(SeqSetExpr::Finite)
}

fn bounds_strategy() -> impl Strategy<Value = Bounds> {
    (1..=3i64, 0..=4i64, 0..=2usize).prop_map(|(b, l, n)| Bounds::new(b, l, n))
}

fn hom_strategy(letters: &'static [&'static str]) -> impl Strategy<Value = Hom> {
    prop::collection::vec(word_strategy(letters, 5), letters.len())
        .prop_map(move |ws| Hom::from_pairs(letters.iter().map(|l| Sym::new(l)).zip(ws)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduce_is_idempotent(w in word_strategy(&LETTERS, 20)) {
        prop_assert_eq!(Word::reduce(w.letters()), w.clone());
        prop_assert_eq!(Word::from_letters(&w.letters()), w);
    }

    #[test]
    fn inverse_is_an_involution(w in word_strategy(&LETTERS, 20), v in word_strategy(&LETTERS, 20)) {
        prop_assert_eq!(w.inv().inv(), w.clone());
        prop_assert!(w.mul(&w.inv()).is_identity());
        prop_assert_eq!(w.mul(&v).inv(), v.inv().mul(&w.inv()));
    }

    #[test]
    fn hom_composition(h1 in hom_strategy(&LETTERS), h2 in hom_strategy(&LETTERS), w in word_strategy(&LETTERS, 12)) {
        let composed = h1.then(&h2).unwrap();
        prop_assert_eq!(composed.apply(&w).unwrap(), h2.apply(&h1.apply(&w).unwrap()).unwrap());
        prop_assert_eq!(h1.apply(&w.inv()).unwrap(), h1.apply(&w).unwrap().inv());
    }

    #[test]
    fn conjugate_collection_round_trip(w in word_strategy(&LETTERS, 20)) {
        let xs: BTreeSet<Sym> = [Sym::new("a"), Sym::new("t'_1")].into_iter().collect();
        let ys: BTreeSet<Sym> = [Sym::new("b"), Sym::new("c")].into_iter().collect();
        let (factors, tail) = collect_conjugates(&w, &xs, &ys).unwrap();
        prop_assert_eq!(reassemble(&factors, &tail), w);
    }

    #[test]
    fn sequence_operations(f in seq_strategy(5, 4)) {
        prop_assert_eq!(f.rho().rho(), f.clone());
        prop_assert_eq!(f.tau().tau(), f.clone());
        prop_assert_eq!(Seq::parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn sigma_theta_relations(f in seq_strategy(5, 4)) {
        // θ reads even places, so θ(σ²f) = σθf.
        prop_assert_eq!(f.sigma().sigma().theta(), f.theta().sigma());
    }

    #[test]
    fn bounded_evaluation_is_monotone(x in finite_strategy(), b1 in bounds_strategy(), b2 in bounds_strategy()) {
        let hi = Bounds::new(b1.b.max(b2.b), b1.l.max(b2.l), b1.n.max(b2.n));
        for e in [
            SeqSetExpr::Pi(Box::new(x.clone())),
            SeqSetExpr::Zeta(Box::new(x.clone())),
            SeqSetExpr::Omega(2, Box::new(x.clone())),
            SeqSetExpr::Rho(Box::new(SeqSetExpr::Upsilon(Box::new(x.clone()), Box::new(SeqSetExpr::BaseS)))),
        ] {
            prop_assert!(eval_bounded(&e, &b1).is_subset(&eval_bounded(&e, &hi)));
        }
    }

    #[test]
    fn meet_distributes_over_join(a in finite_strategy(), b in finite_strategy(), c in finite_strategy(), bd in bounds_strategy()) {
        use SeqSetExpr::*;
        let (a, b, c) = (Box::new(Zeta(Box::new(a))), Box::new(b), Box::new(c));
        let lhs = Iota(a.clone(), Box::new(Upsilon(b.clone(), c.clone())));
        let rhs = Upsilon(Box::new(Iota(a.clone(), b)), Box::new(Iota(a, c)));
        prop_assert_eq!(eval_bounded(&lhs, &bd), eval_bounded(&rhs, &bd));
    }

    #[test]
    fn bounded_evaluation_matches_oracle(x in finite_strategy(), bd in bounds_strategy(), m in 1u32..4) {
        use SeqSetExpr::*;
        let bx = Box::new(x);
        for e in [Rho(bx.clone()), Sigma(bx.clone()), Tau(bx.clone()), Theta(bx.clone()),
                  Zeta(bx.clone()), Pi(bx.clone()), Omega(m, bx.clone()), Iota(bx.clone(), Box::new(BaseS))] {
            prop_assert_eq!(eval_bounded(&e, &bd), common::oracle(&e, &bd));
        }
    }

    #[test]
    fn omega_members_split_into_blocks(x in finite_strategy(), m in 1u32..4, l in 0i64..9) {
        let bd = Bounds::new(3, l, 2);
        let xs: BTreeSet<Seq> = match &x { SeqSetExpr::Finite(s) => s.clone(), _ => unreachable!() };
        let m = m as i64;
        for h in eval_bounded(&SeqSetExpr::Omega(m as u32, Box::new(x.clone())), &bd) {
            prop_assert!(h.is_zero() || h.offset() >= 0);
            let hi = h.support().map(|(_, hi)| hi).unwrap_or(-1);
            for start in (0..=hi).step_by(m as usize) {
                let block = Seq::from_fn(0, m - 1, |i| h.get(start + i));
                prop_assert!(block.is_zero() || xs.contains(&block), "block {} of {}", block, h);
            }
        }
    }

    #[test]
    fn action_lemma_random(f in seq_strategy(6, 6), j in -8i64..8) {
        prop_assert!(check_action_lemma(&f, j));
    }

    #[test]
    fn fold_is_confluent(gens in prop::collection::vec(word_strategy(&["x", "y"], 6), 1..4), seed in any::<u64>()) {
        let base = fold(&gens);
        prop_assert!(base.is_folded());
        let n: usize = gens.iter().map(|w| w.len()).sum();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut StdRng::seed_from_u64(seed));
        prop_assert_eq!(fold_in_order(&gens, &order), base);
    }

    #[test]
    fn membership_contains_products(gens in prop::collection::vec(word_strategy(&["x", "y"], 4), 1..3)) {
        let g = fold(&gens);
        for w in common::subgroup_elements(&gens, 3, 12) {
            prop_assert!(membership(&g, &w), "{} should be a member", w);
        }
    }

    #[test]
    fn builder_counts(m in 3usize..10, n in 0usize..10, k in 1usize..6, seed in any::<u64>()) {
        let c = common::random_cert(&mut StdRng::seed_from_u64(seed), m, n, k);
        for op in UnaryOp::ALL.into_iter().filter(|op| *op != UnaryOp::Tau) {
            prop_assert_eq!(op.build(&c).unwrap().k.counts(), op.stated_counts(m, n, k), "{}", op.name());
        }
        // τ as built: three more generators than stated and a different relator constant.
        prop_assert_eq!(UnaryOp::Tau.build(&c).unwrap().k.counts(), (m + 35, n + 16 * m + k + 353));
        let (stages, g) = chain(&c, &[]).unwrap();
        let want = stated_chain_counts(m, n, k);
        for (s, (_, gn, rn)) in stages.iter().zip(&want) {
            prop_assert_eq!(s.k.counts(), (*gn, *rn));
        }
        prop_assert_eq!(g.counts(), (want[6].1, want[6].2));
    }

    #[test]
    fn presentation_round_trip(rels in prop::collection::vec(word_strategy(&LETTERS, 10), 0..6), tf in any::<bool>()) {
        let p = CountablePresentation {
            name: "P".into(),
            gens: LETTERS.iter().map(|l| Sym::new(l)).collect(),
            rels: rels.into_iter().filter(|r| !r.is_identity()).collect(),
            torsion_free: tf,
        };
        prop_assert_eq!(parse_presentation(&print_presentation(&p)).unwrap(), p);
    }
}
