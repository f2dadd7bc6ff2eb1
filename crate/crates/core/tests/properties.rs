//! Randomized invariants of the engine.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use subregw::fields::OperatorExpr;
use subregw::fock::{weight, Mode};
use subregw::scalar::{binomial, factorial};
use subregw::verify::{self, c2_reduce, random_state, C2Poly};
use subregw::{Basis, Charge, Engine, FockMonomial, FockState, KMode, ScalarQ, WeightVector};

/// Upper bound past which every product of the small random states vanishes.
const TOP: i64 = 10;

fn engine() -> Engine {
    Engine::new(2, KMode::at_int(3)).unwrap()
}

fn scalar() -> impl Strategy<Value = ScalarQ> {
    (
        prop::collection::vec(-5i64..=5, 1..4),
        prop::collection::vec(-5i64..=5, 1..3),
    )
        .prop_filter_map("nonzero denominator", |(num, den)| {
            let p = poly(&num);
            let q = poly(&den);
            p.checked_div(&q).ok()
        })
}

fn poly(c: &[i64]) -> ScalarQ {
    let k = ScalarQ::k();
    c.iter().rev().fold(ScalarQ::zero(), |acc, &x| {
        &(&acc * &k) + &ScalarQ::from_int(x)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scalar_field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        let (x, y) = (a.numerator().clone(), a.denominator().clone());
        prop_assert!(x.gcd(&y).is_one() || a.is_zero());
    }

    #[test]
    fn skew_symmetry(seed in any::<u64>(), n in -1i64..3) {
        let e = engine();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_state(&e, &mut rng, 1, 2, 2);
        let b = random_state(&e, &mut rng, -1, 2, 2);
        let lhs = e.nth_product(&a, n, &b).unwrap();
        let mut rhs = FockState::zero();
        for j in 0..=(TOP - n).max(0) as usize {
            let t = e.translate_pow(&e.nth_product(&b, n + j as i64, &a).unwrap(), j);
            let mut c = ScalarQ::from_rational(&num_rational::BigRational::new(1.into(), factorial(j as u64)));
            if (n + j as i64 + 1) % 2 != 0 {
                c = -c;
            }
            rhs.add_scaled(&t, &c);
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn commutator_formula(seed in any::<u64>(), m in 0i64..3, n in -1i64..2) {
        let e = engine();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_state(&e, &mut rng, 1, 1, 2);
        let b = random_state(&e, &mut rng, 0, 1, 2);
        let c = random_state(&e, &mut rng, -1, 1, 1);
        let ab = e.nth_product(&a, m, &e.nth_product(&b, n, &c).unwrap()).unwrap();
        let ba = e.nth_product(&b, n, &e.nth_product(&a, m, &c).unwrap()).unwrap();
        let mut rhs = FockState::zero();
        for j in 0..=m {
            let inner = e.nth_product(&a, j, &b).unwrap();
            let t = e.nth_product(&inner, m + n - j, &c).unwrap();
            rhs.add_scaled(&t, &ScalarQ::from_bigint(binomial(m, j)));
        }
        prop_assert_eq!(ab.sub(&ba), rhs);
    }

    #[test]
    fn grading_is_additive(seed in any::<u64>(), n in -2i64..2, sa in -1i64..=1, sb in -1i64..=1) {
        let e = engine();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_state(&e, &mut rng, sa, 1, 2);
        let b = random_state(&e, &mut rng, sb, 1, 2);
        let (Some(wa), Some(wb)) = (verify::homogeneous_weight(&e, &a), verify::homogeneous_weight(&e, &b)) else {
            return Ok(());
        };
        let p = e.nth_product(&a, n, &b).unwrap();
        for (w, _) in weight(e.gram(), e.k_mode(), &p) {
            prop_assert_eq!(w, &(&wa + &wb) - &ScalarQ::from_int(n + 1));
        }
    }

    #[test]
    fn c2_is_multiplicative_on_heisenberg_factors(seed in any::<u64>(), sym in 0u16..3, s in -1i64..=1) {
        let e = engine();
        let n = e.rank();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_state(&e, &mut rng, s, 3, 2);
        let basis = Basis::from_index(sym as usize, n);
        let a = e.basis_vector(basis);
        let lhs = c2_reduce(&e.apply_heisenberg_mode(&a, -1, &b)).unwrap();
        let rhs = C2Poly::var(n, basis).mul(&c2_reduce(&b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rearrangement_for_random_operators(coeffs in prop::collection::vec(-3i64..=3, 12), t in prop::collection::vec(0i64..=2, 4)) {
        let e = Engine::new(3, KMode::at_ratio(5, 7)).unwrap();
        let ops: Vec<OperatorExpr> = (0..4)
            .map(|i| {
                let mut v = WeightVector::zero(3);
                for s in 0..3 {
                    v = v.with(Basis::from_index(s, 3), ScalarQ::from_int(coeffs[3 * i + s]));
                }
                OperatorExpr::Sum(vec![
                    OperatorExpr::Translation.scaled(ScalarQ::from_int(t[i])),
                    OperatorExpr::Heisenberg(v, -1),
                ])
            })
            .collect();
        let r = verify::check_rearrangement_ops(&e, &ops).unwrap();
        prop_assert!(r.passed, "{:?}", r.notes);
    }
}

#[test]
fn lattice_vertex_operator_on_vacuum_is_the_state() {
    let e = engine();
    let y = Charge::basis(2, Basis::Y);
    let v = e.lattice_mode(&y, -1, &e.vacuum()).unwrap();
    assert_eq!(v, FockState::highest_weight(y));
    let q2 = FockState::monomial(
        FockMonomial::new(Charge::zero(2), vec![Mode { sym: 1, depth: 2 }]),
        ScalarQ::one(),
    );
    assert_eq!(
        e.translate(&FockState::from_weight(&e.basis_vector(Basis::Q))),
        q2
    );
}
