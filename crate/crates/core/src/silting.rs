//! Decision procedures: partial silting, silting via residue-field fibers,
//! the Thomason set V_σ and the Gabriel filter G_σ.

use serde::{Deserialize, Serialize};

use crate::arith::prime_divisors;
use crate::error::{EngineError, RingError};
use crate::linalg::{rank_over_field, smith_normal_form, Matrix};
use crate::module::{cokernel, defect, tensor_modules, CanonicalForm, FpModule, TwoTermComplex};
use crate::ring::{
    enumerate_ideals, residue_field, Component, ComponentSubset, Ideal, PrimeIdeal, PrimePoint,
    Ring, SpecSubset,
};

pub type ThomasonSet = SpecSubset;

/// Ranks of `σ ⊗ κ(𝔭)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberReport {
    pub prime: PrimeIdeal,
    pub dim_ker: usize,
    pub dim_coker: usize,
    /// `T ⊗ κ(𝔭) ≠ 0` or `Ker(σ ⊗ κ(𝔭)) ≠ 0`.
    pub generator_condition: bool,
}

pub fn fiber_report(sigma: &TwoTermComplex, prime: PrimeIdeal) -> FiberReport {
    let field = residue_field(sigma.ring(), prime);
    let m = sigma.part(prime.component);
    let rank = rank_over_field(&m.reduce_into(field.scalars())).expect("residue fields are fields");
    let dim_ker = m.cols() - rank;
    let dim_coker = m.rows() - rank;
    FiberReport {
        prime,
        dim_ker,
        dim_coker,
        generator_condition: dim_ker > 0 || dim_coker > 0,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialSilting {
    pub holds: bool,
    /// Canonical form of `Def_σ(T)`.
    pub defect: CanonicalForm,
}

pub fn is_partial_silting(sigma: &TwoTermComplex) -> PartialSilting {
    let t = cokernel(sigma);
    let d = defect(sigma, &t).expect("same ring");
    PartialSilting {
        holds: d.vanishes,
        defect: d.module.canonical(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Silting,
    PartialNotSilting,
    NotPartialSilting,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    None,
    Defect { defect: CanonicalForm },
    Fiber { fiber: FiberReport },
}

/// Ideals `I` with `T ⊗ R/I = 0`, i.e. `I·T = T`, on one component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentFilter {
    /// `T` vanishes on the component.
    AllIdeals,
    /// Only the unit ideal.
    UnitOnly,
    /// Over ℤ with `T` torsion of exponent `d`: the ideals `(a)` with `gcd(a, d) = 1`.
    ComaximalWith {
        #[serde(with = "crate::serde_int")]
        d: i128,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GabrielFilterDescription {
    pub components: Vec<ComponentFilter>,
    /// The full list of ideals in the filter, when the ring is finite.
    pub ideals: Option<Vec<Ideal>>,
}

impl GabrielFilterDescription {
    pub fn contains(&self, ideal: &Ideal) -> bool {
        self.components
            .iter()
            .zip(&ideal.generators)
            .all(|(f, &g)| match *f {
                ComponentFilter::AllIdeals => true,
                ComponentFilter::UnitOnly => g == 1,
                ComponentFilter::ComaximalWith { d } => crate::arith::gcd(g, d) == 1,
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub verdict: Verdict,
    pub witness: Witness,
    pub thomason: ThomasonSet,
    pub filter: GabrielFilterDescription,
}

/// Rank of a ℤ matrix and its `r`-th invariant factor, via SNF.
fn integer_snf(m: &Matrix) -> (usize, Vec<i128>) {
    let snf = smith_normal_form(m).expect("integer SNF");
    (snf.rank, snf.invariant_factors[..snf.rank].to_vec())
}

/// First prime of σ's ring failing the generator condition, if any.
fn failing_fiber(sigma: &TwoTermComplex) -> Option<FiberReport> {
    let ring = sigma.ring();
    for (c, comp) in ring.components().iter().enumerate() {
        let prime = match comp {
            Component::Integers => {
                // rank over 𝔽_p never exceeds the rank over ℚ, so the
                // condition at (0) implies it at every (p)
                PrimeIdeal {
                    component: c,
                    point: PrimePoint::Generic,
                }
            }
            Component::PrimePower { .. } => PrimeIdeal::of_finite_component(ring, c),
        };
        let f = fiber_report(sigma, prime);
        if !f.generator_condition {
            return Some(f);
        }
    }
    None
}

pub fn thomason_set(sigma: &TwoTermComplex) -> ThomasonSet {
    let ring = sigma.ring();
    let components = ring
        .components()
        .iter()
        .enumerate()
        .map(|(c, comp)| match *comp {
            Component::Integers => {
                let m = sigma.source_rank(c);
                let (r, factors) = integer_snf(sigma.part(c));
                if r < m {
                    ComponentSubset::whole_integers()
                } else if m == 0 {
                    ComponentSubset::integer_primes(Vec::new())
                } else {
                    ComponentSubset::integer_primes(prime_divisors(factors[m - 1]))
                }
            }
            Component::PrimePower { p, .. } => ComponentSubset::Local {
                prime: p,
                included: fiber_report(sigma, PrimeIdeal::of_finite_component(ring, c)).dim_ker > 0,
            },
        })
        .collect();
    SpecSubset { components }
}

/// Summary of `{I : T ⊗ R/I = 0}`, with the explicit ideal list on finite rings.
pub fn gabriel_filter(sigma: &TwoTermComplex) -> GabrielFilterDescription {
    let t = cokernel(sigma);
    let components = t
        .canonical()
        .components
        .iter()
        .zip(sigma.ring().components())
        .map(|(d, comp)| {
            if d.is_zero() {
                ComponentFilter::AllIdeals
            } else if d.free_rank > 0 || comp.is_finite() {
                ComponentFilter::UnitOnly
            } else {
                ComponentFilter::ComaximalWith {
                    d: *d.torsion.last().unwrap(),
                }
            }
        })
        .collect();
    GabrielFilterDescription {
        components,
        ideals: gabriel_filter_explicit(sigma).ok(),
    }
}

/// `{I ∈ enumerate_ideals(R) : T ⊗ R/I = 0}`, computed module-theoretically.
pub fn gabriel_filter_explicit(sigma: &TwoTermComplex) -> Result<Vec<Ideal>, RingError> {
    let ring = sigma.ring();
    let t = cokernel(sigma);
    Ok(enumerate_ideals(ring)?
        .into_iter()
        .filter(|i| {
            tensor_modules(&t, &FpModule::cyclic(ring, i))
                .expect("same ring")
                .is_zero()
        })
        .collect())
}

pub fn is_silting(sigma: &TwoTermComplex) -> DecisionReport {
    let partial = is_partial_silting(sigma);
    let (verdict, witness) = if !partial.holds {
        (
            Verdict::NotPartialSilting,
            Witness::Defect {
                defect: partial.defect,
            },
        )
    } else {
        match failing_fiber(sigma) {
            Some(fiber) => (Verdict::PartialNotSilting, Witness::Fiber { fiber }),
            None => (Verdict::Silting, Witness::None),
        }
    };
    DecisionReport {
        verdict,
        witness,
        thomason: thomason_set(sigma),
        filter: gabriel_filter(sigma),
    }
}

/// Whether two silting complexes define the same silting class.
pub fn silting_class_equal(sigma: &TwoTermComplex, rho: &TwoTermComplex) -> Result<bool, EngineError> {
    if sigma.ring() != rho.ring() {
        return Err(EngineError::Precondition(format!(
            "complexes over different rings: {} and {}",
            sigma.ring().descriptor(),
            rho.ring().descriptor()
        )));
    }
    for (name, s) in [("first", sigma), ("second", rho)] {
        if is_silting(s).verdict != Verdict::Silting {
            return Err(EngineError::Precondition(format!("{name} complex is not silting")));
        }
    }
    Ok(thomason_set(sigma) == thomason_set(rho))
}

/// All primes of the ring, with ℤ components restricted to `(0)` and `candidates`.
pub fn test_primes(ring: &Ring, candidates: &[u64]) -> Vec<PrimeIdeal> {
    ring.spectrum().points(candidates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{in_gen, in_t_sigma};
    use crate::ring::Scalars;

    fn z_sigma(rows: &[Vec<i128>], cols: usize) -> TwoTermComplex {
        TwoTermComplex::uniform(&Ring::integers(), rows, cols)
    }

    fn z6_split() -> TwoTermComplex {
        // 0 → 𝔽₂ on the first component, identity on 𝔽₃
        let z6 = Ring::zmod(6);
        TwoTermComplex::new(
            z6,
            vec![
                Matrix::zeros(Scalars::Modular(2), 1, 0),
                Matrix::identity(Scalars::Modular(3), 1),
            ],
        )
        .unwrap()
    }

    fn prime(c: usize, p: u64) -> PrimeIdeal {
        PrimeIdeal {
            component: c,
            point: PrimePoint::Maximal(p),
        }
    }

    #[test]
    fn fiber_examples() {
        let s = z_sigma(&[vec![1, 0], vec![0, 6]], 2);
        let f = fiber_report(&s, prime(0, 2));
        assert_eq!((f.dim_ker, f.dim_coker, f.generator_condition), (1, 1, true));
        let f = fiber_report(&s, prime(0, 5));
        assert_eq!((f.dim_ker, f.dim_coker, f.generator_condition), (0, 0, false));
        let z = TwoTermComplex::zero_to_free(&Ring::integers(), 1);
        for p in test_primes(&Ring::integers(), &[2, 3, 7]) {
            let f = fiber_report(&z, p);
            assert_eq!(f.dim_coker, 1);
            assert!(f.generator_condition);
        }
    }

    #[test]
    fn partial_silting_examples() {
        assert!(is_partial_silting(&TwoTermComplex::identity(&Ring::zmod(6), 2)).holds);
        let p = is_partial_silting(&z_sigma(&[vec![6]], 1));
        assert!(!p.holds);
        assert_eq!(p.defect.components[0].torsion, vec![6]);
        assert!(is_partial_silting(&TwoTermComplex::zero_to_free(&Ring::integers(), 1)).holds);
    }

    #[test]
    fn silting_examples() {
        let r = is_silting(&TwoTermComplex::zero_to_free(&Ring::zmod(6), 1));
        assert_eq!(r.verdict, Verdict::Silting);

        let r = is_silting(&TwoTermComplex::identity(&Ring::integers(), 1));
        assert_eq!(r.verdict, Verdict::PartialNotSilting);
        match r.witness {
            Witness::Fiber { fiber } => {
                assert_eq!(fiber.prime.point, PrimePoint::Generic);
                assert_eq!((fiber.dim_ker, fiber.dim_coker), (0, 0));
            }
            w => panic!("unexpected witness {w:?}"),
        }

        let r = is_silting(&z6_split());
        assert_eq!(r.verdict, Verdict::PartialNotSilting);
        match r.witness {
            Witness::Fiber { fiber } => assert_eq!(fiber.prime, prime(1, 3)),
            w => panic!("unexpected witness {w:?}"),
        }

        let r = is_silting(&z_sigma(&[vec![2], vec![3]], 1));
        assert_eq!(r.verdict, Verdict::Silting);
    }

    #[test]
    fn thomason_examples() {
        assert_eq!(
            thomason_set(&z_sigma(&[vec![6]], 1)).components[0],
            ComponentSubset::integer_primes(vec![2, 3])
        );
        assert_eq!(
            thomason_set(&TwoTermComplex::free_to_zero(&Ring::integers(), 1)).components[0],
            ComponentSubset::whole_integers()
        );
        assert!(thomason_set(&TwoTermComplex::identity(&Ring::zmod(12), 2)).is_empty());
        assert!(thomason_set(&TwoTermComplex::identity(&Ring::integers(), 2)).is_empty());
    }

    #[test]
    fn thomason_over_z_matches_fibers() {
        let cases = [
            (vec![vec![6]], 1),
            (vec![vec![2, 4], vec![6, 8]], 2),
            (vec![vec![1, 0], vec![0, 6]], 2),
            (vec![vec![3, 0, 0]], 3),
            (vec![vec![12], vec![18]], 1),
        ];
        for (rows, cols) in cases {
            let s = z_sigma(&rows, cols);
            let v = thomason_set(&s);
            for p in test_primes(&Ring::integers(), &[2, 3, 5, 7, 11]) {
                assert_eq!(v.contains(&p), fiber_report(&s, p).dim_ker > 0, "{rows:?} at {p}");
            }
        }
    }

    #[test]
    fn filter_examples() {
        let z4 = Ring::zmod(4);
        let f = gabriel_filter(&TwoTermComplex::zero_to_free(&z4, 1));
        assert_eq!(f.ideals.unwrap(), vec![Ideal { generators: vec![1] }]);
        let f = gabriel_filter(&TwoTermComplex::identity(&z4, 1));
        assert_eq!(f.ideals.as_ref().unwrap().len(), 3);

        let f = gabriel_filter(&z6_split());
        let gens: Vec<Vec<i128>> = f.ideals.unwrap().into_iter().map(|i| i.generators).collect();
        assert_eq!(gens, vec![vec![1, 1], vec![1, 0]]);

        let f = gabriel_filter(&z_sigma(&[vec![6]], 1));
        assert_eq!(f.components[0], ComponentFilter::ComaximalWith { d: 6 });
        assert!(f.ideals.is_none());
        assert!(gabriel_filter_explicit(&z_sigma(&[vec![6]], 1)).is_err());
    }

    #[test]
    fn filter_summary_matches_list_and_is_a_filter() {
        for n in [2u64, 4, 6, 8, 12, 30] {
            let ring = Ring::zmod(n);
            let all = enumerate_ideals(&ring).unwrap();
            for rank in 0..=2usize {
                for s in [
                    TwoTermComplex::zero_to_free(&ring, rank),
                    TwoTermComplex::identity(&ring, rank),
                    TwoTermComplex::uniform(&ring, &vec![vec![2]; rank], usize::from(rank > 0)),
                ] {
                    let f = gabriel_filter(&s);
                    let list = f.ideals.clone().unwrap();
                    for i in &all {
                        assert_eq!(f.contains(i), list.contains(i));
                    }
                    for a in &list {
                        for b in &all {
                            if ring.ideal_contained_in(a, b) {
                                assert!(list.contains(b));
                            }
                        }
                        for b in &list {
                            assert!(list.contains(&ring.ideal_product(a, b)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn class_equality() {
        let z6 = Ring::zmod(6);
        let a = TwoTermComplex::zero_to_free(&z6, 1);
        let b = TwoTermComplex::zero_to_free(&z6, 2);
        assert!(silting_class_equal(&a, &a).unwrap());
        assert!(silting_class_equal(&a, &b).unwrap());
        let c = TwoTermComplex::new(
            z6.clone(),
            vec![
                Matrix::zeros(Scalars::Modular(2), 1, 0),
                Matrix::zeros(Scalars::Modular(3), 0, 1),
            ],
        )
        .unwrap();
        assert_eq!(is_silting(&c).verdict, Verdict::Silting);
        assert!(!silting_class_equal(&a, &c).unwrap());
        // Gen-classes differ: the 𝔽₃-part is generated by one cokernel only
        let x = FpModule::from_cyclic_orders(&z6, &[vec![], vec![0]]);
        assert!(in_gen(&cokernel(&a), &x).unwrap());
        assert!(!in_gen(&cokernel(&c), &x).unwrap());
        assert!(silting_class_equal(&a, &z6_split()).is_err());
    }

    #[test]
    fn complement_of_thomason_set_is_t_sigma_on_residue_fields() {
        for n in [4u64, 6, 12] {
            let ring = Ring::zmod(n);
            for s in [
                TwoTermComplex::uniform(&ring, &[vec![2, 3]], 2),
                TwoTermComplex::uniform(&ring, &[vec![3], vec![0]], 1),
                TwoTermComplex::free_to_zero(&ring, 1),
            ] {
                let v = thomason_set(&s);
                for p in ring.spectrum().finite_points().unwrap() {
                    let kappa = FpModule::cyclic(
                        &ring,
                        &Ideal {
                            generators: ring
                                .components()
                                .iter()
                                .enumerate()
                                .map(|(c, comp)| {
                                    if c == p.component {
                                        comp.prime().unwrap() as i128
                                    } else {
                                        1
                                    }
                                })
                                .collect(),
                        },
                    );
                    assert_eq!(!v.contains(&p), in_t_sigma(&s, &kappa).unwrap());
                }
            }
        }
    }

    #[test]
    fn report_round_trips_through_json() {
        let r = is_silting(&z_sigma(&[vec![6]], 1));
        let s = serde_json::to_string(&r).unwrap();
        let back: DecisionReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        for k in ["verdict", "witness", "thomason", "filter"] {
            assert!(v.get(k).is_some());
        }
    }
}
