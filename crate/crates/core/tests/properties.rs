use lcs_verify::fbc::FbcGroup;
use lcs_verify::latmod::{char_poly, exterior_power, smith_normal_form, IntMatrix};
use lcs_verify::liemod::{hall_basis, lyndon_words, witt_dimension};
use lcs_verify::magnus::{expand, is_in_gamma, weight, Weight};
use lcs_verify::num_bigint::BigInt;
use num_traits::Zero;
use lcs_verify::words::{commutator, parse_word, Alphabet, Word};
use proptest::prelude::*;

fn word(rank: usize, max_runs: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..rank, -3i64..=3), 0..=max_runs)
        .prop_map(move |runs| Word::reduce(runs, rank).unwrap())
}

fn matrix(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
        let rows: Vec<Vec<i64>> = v.chunks(n).map(<[i64]>::to_vec).collect();
        IntMatrix::from_rows(&rows).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn display_parses_back(w in word(3, 10)) {
        let a = Alphabet::standard(3);
        let shown = w.display(&a).to_string();
        prop_assert_eq!(parse_word(&shown, &a).unwrap(), w);
    }

    #[test]
    fn group_laws(u in word(3, 8), v in word(3, 8), w in word(3, 8)) {
        prop_assert_eq!(u.mul(&v).mul(&w), u.mul(&v.mul(&w)));
        prop_assert!(u.mul(&u.inverse()).is_identity());
        prop_assert_eq!(u.mul(&v).inverse(), v.inverse().mul(&u.inverse()));
    }

    #[test]
    fn powers_add(u in word(2, 5), p in -4i64..=4, q in -4i64..=4) {
        let lhs = u.pow_i64(p).unwrap().mul(&u.pow_i64(q).unwrap());
        prop_assert_eq!(lhs, u.pow_i64(p + q).unwrap());
    }

    #[test]
    fn magnus_is_a_homomorphism(u in word(2, 8), v in word(2, 8)) {
        let (su, sv) = (expand(&u, 2, 6).unwrap(), expand(&v, 2, 6).unwrap());
        prop_assert_eq!(expand(&u.mul(&v), 2, 6).unwrap(), su.mul(&sv).unwrap());
        prop_assert_eq!(expand(&u.inverse(), 2, 6).unwrap(), su.inverse().unwrap());
    }

    #[test]
    fn commutators_deepen_weight(u in word(2, 5), v in word(2, 5)) {
        let c = commutator(&u, &v);
        prop_assert!(is_in_gamma(&c, 2, 2, 6).unwrap());
        let wu = weight(&u, 2, 6).unwrap();
        let wv = weight(&v, 2, 6).unwrap();
        if let (Weight::Exact(a), Weight::Exact(b)) = (wu, wv) {
            if a + b <= 6 {
                prop_assert!(weight(&c, 2, 6).unwrap().at_least(a + b));
            }
        }
    }

    #[test]
    fn normal_form_is_multiplicative(u in word(2, 6), v in word(2, 6)) {
        // words over the presentation alphabet {a, b}
        let g = FbcGroup::reference();
        let (nu, nv) = (g.normal_form(&u).unwrap(), g.normal_form(&v).unwrap());
        let prod = g.mul(&nu, &nv).unwrap();
        prop_assert_eq!(g.normal_form(&u.mul(&v)).unwrap(), prod);
        let inv = g.inverse(&nu).unwrap();
        prop_assert!(g.mul(&nu, &inv).unwrap().is_identity());
    }

    #[test]
    fn cayley_hamilton(n in 2usize..=5, seed in any::<u64>()) {
        let entries: Vec<i64> = (0..n * n).map(|i| ((seed >> (i % 60)) as i64 % 7) - 3).collect();
        let rows: Vec<Vec<i64>> = entries.chunks(n).map(<[i64]>::to_vec).collect();
        let a = IntMatrix::from_rows(&rows).unwrap();
        prop_assert!(char_poly(&a).unwrap().eval_matrix(&a).unwrap().is_zero());
    }

    #[test]
    fn compound_multiplicativity(a in matrix(4), b in matrix(4), k in 1usize..=4) {
        let lhs = exterior_power(&a.mul(&b).unwrap(), k, 128).unwrap();
        let rhs = exterior_power(&a, k, 128).unwrap().mul(&exterior_power(&b, k, 128).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn snf_transforms_verify(a in matrix(3)) {
        let s = smith_normal_form(&a);
        prop_assert!(s.verify(&a));
        let d = &s.diagonal;
        for w in d.windows(2) {
            if !w[0].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }
}

#[test]
fn witt_matches_lyndon_and_hall() {
    for r in 1..=3 {
        for n in 1..=7 {
            let w = witt_dimension(r, n);
            assert_eq!(w, BigInt::from(lyndon_words(r, n).len()), "r={r} n={n}");
            assert_eq!(w, BigInt::from(hall_basis(r, n).unwrap().len()));
        }
    }
}
