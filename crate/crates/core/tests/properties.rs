//! Shrinking property tests over small random matrices.

use proptest::prelude::*;
use silting_core::linalg::{smith_normal_form, Matrix};
use silting_core::module::TwoTermComplex;
use silting_core::ring::{Ring, Scalars};
use silting_core::silting::is_silting;

const MODULI: [u64; 6] = [2, 4, 6, 8, 9, 12];
/// Smith form is computed over ℤ and local rings only.
const PRIME_POWERS: [u64; 6] = [2, 3, 4, 5, 8, 27];

fn matrix(max: usize) -> impl Strategy<Value = (usize, usize, Vec<i128>)> {
    (0..=max, 0..=max).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-9i128..=9, r * c)))
}

fn scalars() -> impl Strategy<Value = Scalars> {
    prop_oneof![Just(Scalars::Integers), prop::sample::select(&PRIME_POWERS[..]).prop_map(Scalars::Modular)]
}

/// Some invertible matrix of size `n`, taken from the transforms of an SNF.
fn invertible(s: Scalars, n: usize, seed: &[i128]) -> Matrix {
    let data: Vec<i128> = (0..n * (n + 1)).map(|i| seed.get(i % seed.len().max(1)).copied().unwrap_or(1) + i as i128).collect();
    smith_normal_form(&Matrix::new(s, n, n + 1, data)).unwrap().u
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn snf_factors_the_matrix(s in scalars(), (r, c, data) in matrix(4)) {
        let a = Matrix::new(s, r, c, data);
        let f = smith_normal_form(&a).unwrap();
        prop_assert_eq!(f.u.mul(&a).mul(&f.v), f.d.clone());
        prop_assert_eq!(f.u.mul(&f.u_inv), Matrix::identity(s, r));
        prop_assert_eq!(f.v.mul(&f.v_inv), Matrix::identity(s, c));
        for w in f.invariant_factors[..f.rank].windows(2) {
            prop_assert_eq!(s.reduce(w[1]) % w[0], 0, "{:?}", f.invariant_factors);
        }
    }

    #[test]
    fn verdict_ignores_basis_changes(n in prop::sample::select(&MODULI[..]), (r, c, data) in matrix(3), seed in prop::collection::vec(-5i128..=5, 1..6)) {
        let ring = Ring::zmod(n);
        let rows: Vec<Vec<i128>> = (0..r).map(|i| data[i * c..(i + 1) * c].to_vec()).collect();
        let sigma = TwoTermComplex::uniform(&ring, &rows, c);
        let u: Vec<Matrix> = ring.components().iter().map(|k| invertible(k.scalars(), r, &seed)).collect();
        let v: Vec<Matrix> = ring.components().iter().map(|k| invertible(k.scalars(), c, &seed).transpose()).collect();
        let moved = sigma.change_basis(&u, &v);
        let (a, b) = (is_silting(&sigma), is_silting(&moved));
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.thomason, b.thomason);
        prop_assert_eq!(a.filter, b.filter);
    }
}
