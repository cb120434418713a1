//! Brute-force cross-check over finite rings: compare `D_σ` with `Gen(T)` on
//! every direct sum of at most `bound` nonzero cyclic modules.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{ModuleError, RingError};
use crate::module::{cokernel, in_d_sigma, in_gen, tensor_modules, CanonicalForm, FpModule, TwoTermComplex};
use crate::ring::{enumerate_ideals, Ideal, Ring};

#[derive(Clone, Debug)]
pub struct ModuleFamily {
    pub ring: Ring,
    pub bound: usize,
    pub modules: Vec<FpModule>,
}

/// Every `⊕_{i ≤ bound} R/I_i` with `I_i` proper, up to isomorphism, starting with 0.
pub fn enumerate_modules(ring: &Ring, bound: usize) -> Result<ModuleFamily, RingError> {
    let cyclics: Vec<FpModule> = enumerate_ideals(ring)?
        .iter()
        .filter(|i| !i.is_unit())
        .map(|i| FpModule::cyclic(ring, i))
        .collect();
    let mut seen = BTreeSet::new();
    let mut modules = Vec::new();
    let zero = FpModule::zero(ring);
    seen.insert(zero.canonical());
    modules.push(zero);
    // multisets as non-decreasing index sequences, by size then lexicographically
    let mut layer: Vec<(usize, FpModule)> = vec![(0, FpModule::zero(ring))];
    for _ in 0..bound {
        let mut next = Vec::new();
        for (start, m) in &layer {
            for (i, c) in cyclics.iter().enumerate().skip(*start) {
                let sum = m.direct_sum(c).expect("same ring");
                if seen.insert(sum.canonical()) {
                    modules.push(sum.canonicalized());
                }
                next.push((i, sum));
            }
        }
        layer = next;
    }
    Ok(ModuleFamily {
        ring: ring.clone(),
        bound,
        modules,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub module: CanonicalForm,
    pub in_d_sigma: bool,
    pub in_gen: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub bound: usize,
    pub family_size: usize,
    pub t_in_d_sigma: bool,
    pub discrepancies: Vec<Discrepancy>,
    /// No discrepancy and `T ∈ D_σ`. Consistency is evidence, not proof.
    pub consistent: bool,
}

fn module_error(e: ModuleError) -> RingError {
    match e {
        ModuleError::Ring(r) => r,
        e => RingError::InvalidDescriptor(e.to_string()),
    }
}

pub fn oracle_silting_in(sigma: &TwoTermComplex, family: &ModuleFamily) -> Result<OracleReport, RingError> {
    let t = cokernel(sigma);
    let t_in_d = in_d_sigma(sigma, &t).map_err(module_error)?;
    let mut discrepancies = Vec::new();
    for x in &family.modules {
        let d = in_d_sigma(sigma, x).map_err(module_error)?;
        let g = in_gen(&t, x).map_err(module_error)?;
        if d != g {
            discrepancies.push(Discrepancy {
                module: x.canonical(),
                in_d_sigma: d,
                in_gen: g,
            });
        }
    }
    Ok(OracleReport {
        bound: family.bound,
        family_size: family.modules.len(),
        t_in_d_sigma: t_in_d,
        consistent: t_in_d && discrepancies.is_empty(),
        discrepancies,
    })
}

pub fn oracle_silting(sigma: &TwoTermComplex, bound: usize) -> Result<OracleReport, RingError> {
    oracle_silting_in(sigma, &enumerate_modules(sigma.ring(), bound)?)
}

/// `{I : I·X = X for every X in the family with X ∈ Gen(T)}`.
pub fn oracle_filter_in(sigma: &TwoTermComplex, family: &ModuleFamily) -> Result<Vec<Ideal>, RingError> {
    let ring = sigma.ring();
    let t = cokernel(sigma);
    let generated: Vec<&FpModule> = family
        .modules
        .iter()
        .filter(|x| in_gen(&t, x).expect("same ring"))
        .collect();
    Ok(enumerate_ideals(ring)?
        .into_iter()
        .filter(|i| {
            let quotient = FpModule::cyclic(ring, i);
            generated
                .iter()
                .all(|x| tensor_modules(x, &quotient).expect("same ring").is_zero())
        })
        .collect())
}

pub fn oracle_filter(sigma: &TwoTermComplex, bound: usize) -> Result<Vec<Ideal>, RingError> {
    oracle_filter_in(sigma, &enumerate_modules(sigma.ring(), bound)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::ring::Scalars;
    use crate::silting::{gabriel_filter, is_silting, Verdict};

    fn torsion_lists(f: &ModuleFamily) -> Vec<Vec<i128>> {
        f.modules
            .iter()
            .map(|m| m.canonical().components[0].torsion.clone())
            .collect()
    }

    #[test]
    fn family_examples() {
        let z4 = Ring::zmod(4);
        let f = enumerate_modules(&z4, 1).unwrap();
        assert_eq!(f.modules.len(), 3);
        let f = enumerate_modules(&z4, 2).unwrap();
        assert_eq!(f.modules.len(), 6);
        assert!(torsion_lists(&f).contains(&vec![2, 2]));

        let z6 = Ring::zmod(6);
        let f = enumerate_modules(&z6, 1).unwrap();
        assert_eq!(f.modules.len(), 4);
        assert!(f.modules[0].is_zero());
        assert!(f.modules.iter().any(|m| m.is_isomorphic(&FpModule::free(&z6, 1))));
        assert!(enumerate_modules(&Ring::integers(), 1).is_err());
    }

    #[test]
    fn family_is_duplicate_free() {
        for n in [2u64, 6, 12, 30] {
            let f = enumerate_modules(&Ring::zmod(n), 2).unwrap();
            let forms: BTreeSet<_> = f.modules.iter().map(FpModule::canonical).collect();
            assert_eq!(forms.len(), f.modules.len());
        }
    }

    #[test]
    fn oracle_examples() {
        let z4 = Ring::zmod(4);
        let r = oracle_silting(&TwoTermComplex::zero_to_free(&z4, 1), 2).unwrap();
        assert!(r.consistent);

        let r = oracle_silting(&TwoTermComplex::identity(&z4, 1), 2).unwrap();
        assert!(!r.consistent);
        assert_eq!(r.discrepancies.len(), 5);

        let r = oracle_silting(&TwoTermComplex::uniform(&z4, &[vec![2]], 1), 2).unwrap();
        assert!(!r.t_in_d_sigma);
        assert!(!r.consistent);
    }

    #[test]
    fn filter_examples() {
        let z4 = Ring::zmod(4);
        let s = TwoTermComplex::zero_to_free(&z4, 1);
        assert_eq!(oracle_filter(&s, 2).unwrap(), vec![Ideal { generators: vec![1] }]);

        let z6 = Ring::zmod(6);
        let s = TwoTermComplex::new(
            z6.clone(),
            vec![
                Matrix::zeros(Scalars::Modular(2), 1, 0),
                Matrix::zeros(Scalars::Modular(3), 0, 1),
            ],
        )
        .unwrap();
        assert_eq!(is_silting(&s).verdict, Verdict::Silting);
        let got = oracle_filter(&s, 2).unwrap();
        assert_eq!(Some(got.clone()), gabriel_filter(&s).ideals);
        assert!(got.iter().all(|i| i.generators[0] == 1));

        let s = TwoTermComplex::free_to_zero(&z6, 1);
        assert_eq!(oracle_filter(&s, 2).unwrap().len(), 4);
    }
}
