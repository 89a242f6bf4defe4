mod oracle;

use std::collections::BTreeSet;

use proptest::prelude::*;

use perfiso::characters::{inner_product, ClassFunction};
use perfiso::isometry::{apply_i_mu, apply_r_mu, build_mu, is_perfect};
use perfiso::pigroup::{
    decompose, enumerate_pi, enumerate_pi_with, gen_aut, gen_linear, AffineCoords, Mode,
};
use perfiso::{CycInt, Prime, Sign, SignedIsometry};

fn prime(n: u32) -> Prime {
    Prime::new(n).unwrap()
}

#[test]
fn modes_produce_identical_reports() {
    for n in [2u32, 3, 5, 7] {
        let exhaustive = enumerate_pi(prime(n), Mode::Exhaustive).unwrap();
        let positive = enumerate_pi(prime(n), Mode::PositiveThenNegate).unwrap();
        assert_eq!(exhaustive, positive, "p={n}");
        assert!(exhaustive.all_pass());
    }
}

#[test]
fn shard_scheduling_does_not_change_the_report() {
    let a = enumerate_pi_with(prime(7), Mode::Exhaustive, true).unwrap();
    let b = enumerate_pi_with(prime(7), Mode::Exhaustive, false).unwrap();
    assert_eq!(a, b);
}

#[test]
fn generator_maps_are_injective() {
    for n in [2u32, 3, 5, 7, 11] {
        let p = prime(n);
        let linear: BTreeSet<SignedIsometry> = (0..n as usize).map(|a| gen_linear(p, a)).collect();
        let auts: BTreeSet<SignedIsometry> =
            (1..n as usize).map(|u| gen_aut(p, u).unwrap()).collect();
        assert_eq!(linear.len(), n as usize);
        assert_eq!(auts.len(), n as usize - 1);
    }
}

#[test]
fn decompose_recompose_on_enumerated_elements() {
    for n in [2u32, 3, 5, 7] {
        let p = prime(n);
        let report = enumerate_pi(p, Mode::Exhaustive).unwrap();
        for (c, iso) in report.elements.iter().zip(report.isometries()) {
            assert_eq!(decompose(&iso).unwrap(), *c);
            assert!(is_perfect(&iso).is_perfect());
        }
    }
}

#[test]
fn cli_examples_from_the_core() {
    let p = prime(5);
    let i = SignedIsometry::parse(p, "+1,+2,+3,+4,+0").unwrap();
    let mu = build_mu(&i);
    let id = build_mu(&SignedIsometry::identity(p));
    for m in 0..5 {
        for n in 0..5 {
            assert_eq!(mu.rows()[m][n], id.rows()[m][n].mul_zeta_pow(m as i64));
        }
    }
    let d = SignedIsometry::parse(p, "+1,+3,+0,+2,+4").unwrap();
    assert_eq!(decompose(&d).unwrap(), AffineCoords { eps: Sign::Plus, a: 1, u: 2 });
}

fn arb_isometry(n: u32) -> impl Strategy<Value = SignedIsometry> {
    let np = n as usize;
    (
        Just((0..np).collect::<Vec<_>>()).prop_shuffle(),
        proptest::collection::vec(any::<bool>(), np),
    )
        .prop_map(move |(image, signs)| {
            let sign = signs
                .into_iter()
                .map(|b| if b { Sign::Plus } else { Sign::Minus })
                .collect();
            SignedIsometry::new(prime(n), image, sign).unwrap()
        })
}

fn arb_case() -> impl Strategy<Value = (SignedIsometry, Vec<i64>, Vec<i64>)> {
    prop_oneof![Just(3u32), Just(5), Just(7)].prop_flat_map(|n| {
        (
            arb_isometry(n),
            proptest::collection::vec(-3i64..=3, n as usize),
            proptest::collection::vec(-3i64..=3, n as usize),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn adjointness((iso, a, b) in arb_case()) {
        let p = iso.prime();
        let mu = build_mu(&iso);
        let alpha = ClassFunction::from_character_coeffs(p, &a).unwrap();
        let beta = ClassFunction::from_character_coeffs(p, &b).unwrap();
        let lhs = inner_product(&apply_i_mu(&mu, &beta).unwrap(), &alpha).unwrap();
        let rhs = inner_product(&beta, &apply_r_mu(&mu, &alpha).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn i_mu_acts_as_i_and_r_mu_inverts((iso, a, _b) in arb_case()) {
        let p = iso.prime();
        let mu = build_mu(&iso);
        let beta = ClassFunction::from_character_coeffs(p, &a).unwrap();
        let expect = ClassFunction::from_character_coeffs(p, &iso.apply_coords(&a)).unwrap();
        let image = apply_i_mu(&mu, &beta).unwrap();
        prop_assert_eq!(&image, &expect);
        prop_assert_eq!(apply_r_mu(&mu, &image).unwrap(), beta);
    }

    #[test]
    fn divisibility_matches_rational_oracle(
        n in prop_oneof![Just(2u32), Just(3), Just(5), Just(7), Just(11), Just(13)],
        seed in proptest::collection::vec(-40i64..=40, 13),
        shift in -30i64..=30,
        multiple in any::<bool>(),
    ) {
        let np = n as usize;
        let raw: Vec<i64> = if multiple {
            seed[..np].iter().map(|c| c * n as i64 + shift).collect()
        } else {
            seed[..np].to_vec()
        };
        let x = CycInt::from_coeffs(prime(n), raw.clone()).unwrap();
        let ours = x.div_p();
        let reference = oracle::rational_div_p(n, &raw);
        prop_assert_eq!(ours.is_some(), reference.is_some());
        if multiple {
            prop_assert!(ours.is_some());
        }
        if let (Some(q), Some(y)) = (ours, reference) {
            prop_assert!(oracle::max_abs(&y) <= 100.into());
            let y: Vec<i64> = y.iter().map(|v| i64::try_from(v).unwrap()).collect();
            prop_assert_eq!(&q.coeffs()[..np - 1], &y[..]);
        }
    }
}
