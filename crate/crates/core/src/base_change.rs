//! Base change of complexes along catalog homomorphisms, and the checks that
//! silting ascends along any λ and descends along faithfully flat λ.

use serde::{Deserialize, Serialize};

use crate::error::{EngineError, HomError, ModuleError};
use crate::hom::{classify_hom, HomClassification, RingHomomorphism};
use crate::linalg::Matrix;
use crate::module::{
    base_change_module, cokernel, defect, in_d_sigma, in_gen, in_t_sigma, restrict_scalars,
    CanonicalForm, FpModule, TwoTermComplex,
};
use crate::ring::{ComponentSubset, PrimeIdeal, Ring, RingDescriptor, Scalars, SpecSubset};
use crate::silting::{is_silting, thomason_set, ThomasonSet, Verdict};

/// `σ ⊗_R S`.
pub fn push_complex(sigma: &TwoTermComplex, lambda: &RingHomomorphism) -> Result<TwoTermComplex, HomError> {
    if sigma.ring() != lambda.source() {
        return Err(ModuleError::RingMismatch {
            left: sigma.ring().descriptor().to_string(),
            right: lambda.source().descriptor().to_string(),
        }
        .into());
    }
    let target = lambda.target();
    let parts = target
        .components()
        .iter()
        .enumerate()
        .map(|(t, comp)| sigma.part(lambda.source_component(t)).reduce_into(comp.scalars()))
        .collect();
    Ok(TwoTermComplex::new(target.clone(), parts)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AscentReport {
    pub push_verdict: Verdict,
    /// `λ⋆(T ⊗_R S) ∈ Gen(T)`.
    pub criterion: bool,
    pub violation: bool,
}

pub fn check_ascent(sigma: &TwoTermComplex, lambda: &RingHomomorphism) -> Result<AscentReport, EngineError> {
    if is_silting(sigma).verdict != Verdict::Silting {
        return Err(EngineError::Precondition("ascent needs a silting complex".into()));
    }
    let push = push_complex(sigma, lambda)?;
    let push_verdict = is_silting(&push).verdict;
    let t = cokernel(sigma);
    let restricted = restrict_scalars(lambda, &base_change_module(lambda, &t)?)?;
    let criterion = in_gen(&t, &restricted)?;
    let silting = push_verdict == Verdict::Silting;
    Ok(AscentReport {
        push_verdict,
        criterion,
        violation: !silting || !criterion,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DescentStatus {
    /// Push silting and source silting.
    Verified,
    /// Push not silting: the theorem makes no claim.
    HypothesisNotMet,
    /// λ is not faithfully flat.
    NotApplicable,
    /// Push silting, λ faithfully flat, source not silting.
    Violation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentReport {
    pub status: DescentStatus,
    pub classification: HomClassification,
    pub push_verdict: Verdict,
    pub source_verdict: Verdict,
}

pub fn check_descent(sigma: &TwoTermComplex, lambda: &RingHomomorphism) -> Result<DescentReport, EngineError> {
    let classification = classify_hom(lambda)?;
    let push_verdict = is_silting(&push_complex(sigma, lambda)?).verdict;
    let source_verdict = is_silting(sigma).verdict;
    let status = if !classification.faithfully_flat {
        DescentStatus::NotApplicable
    } else if push_verdict != Verdict::Silting {
        DescentStatus::HypothesisNotMet
    } else if source_verdict == Verdict::Silting {
        DescentStatus::Verified
    } else {
        DescentStatus::Violation
    };
    Ok(DescentReport {
        status,
        classification,
        push_verdict,
        source_verdict,
    })
}

/// The image of a subset of Spec(S) under Spec(λ).
pub fn spec_image(lambda: &RingHomomorphism, subset: &SpecSubset) -> SpecSubset {
    let source = lambda.source();
    let mut out = SpecSubset::empty(source);
    for (t, part) in subset.components.iter().enumerate() {
        let c = lambda.source_component(t);
        let image = match (part, &out.components[c]) {
            (ComponentSubset::Local { prime, included }, ComponentSubset::Integers { .. }) => {
                ComponentSubset::integer_primes(if *included { vec![*prime] } else { vec![] })
            }
            (part, _) => part.clone(),
        };
        out.components[c] = out.components[c].union(&image);
    }
    out
}

/// `λ⋆(𝔮)`: local maps are reductions, so the point keeps its label.
fn contract(lambda: &RingHomomorphism, q: PrimeIdeal) -> PrimeIdeal {
    PrimeIdeal {
        component: lambda.source_component(q.component),
        point: q.point,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub source_set: ThomasonSet,
    pub target_set: ThomasonSet,
    pub image: ThomasonSet,
    pub image_equal: bool,
    /// `𝔮 ∈ V_{σ⊗S}` iff `λ⋆(𝔮) ∈ V_σ` on every tested prime.
    pub pointwise: bool,
    pub violation: bool,
}

pub fn spectral_compare(sigma: &TwoTermComplex, lambda: &RingHomomorphism) -> Result<SpectralReport, EngineError> {
    if !classify_hom(lambda)?.faithfully_flat {
        return Err(EngineError::Precondition(format!("{lambda} is not faithfully flat")));
    }
    let source_set = thomason_set(sigma);
    let target_set = thomason_set(&push_complex(sigma, lambda)?);
    let image = spec_image(lambda, &target_set);
    let mut candidates = vec![2u64, 3, 5, 7];
    for s in [&source_set, &target_set] {
        for c in &s.components {
            if let ComponentSubset::Integers { primes, .. } = c {
                candidates.extend(primes);
            }
        }
    }
    let pointwise = lambda
        .target()
        .spectrum()
        .points(&candidates)
        .into_iter()
        .all(|q| target_set.contains(&q) == source_set.contains(&contract(lambda, q)));
    let image_equal = image == source_set;
    Ok(SpectralReport {
        source_set,
        target_set,
        image,
        image_equal,
        pointwise,
        violation: !(image_equal && pointwise),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferReport {
    pub in_d_source: bool,
    pub in_d_target: bool,
    pub in_t_source: bool,
    pub in_t_target: bool,
    pub holds: bool,
}

/// `N ∈ D_σ ⟺ N⊗S ∈ D_{σ⊗S}` and the same for `T_σ`, for an R-module N.
pub fn membership_transfer_check(
    sigma: &TwoTermComplex,
    lambda: &RingHomomorphism,
    module: &FpModule,
) -> Result<TransferReport, EngineError> {
    if !classify_hom(lambda)?.faithfully_flat {
        return Err(EngineError::Precondition(format!("{lambda} is not faithfully flat")));
    }
    if is_silting(sigma).verdict != Verdict::Silting {
        return Err(EngineError::Precondition("membership transfer needs a silting complex".into()));
    }
    let push = push_complex(sigma, lambda)?;
    let extended = base_change_module(lambda, module)?;
    let in_d_source = in_d_sigma(sigma, module)?;
    let in_d_target = in_d_sigma(&push, &extended)?;
    let in_t_source = in_t_sigma(sigma, module)?;
    let in_t_target = in_t_sigma(&push, &extended)?;
    Ok(TransferReport {
        in_d_source,
        in_d_target,
        in_t_source,
        in_t_target,
        holds: in_d_source == in_d_target && in_t_source == in_t_target,
    })
}

/// `M ∈ D_{σ⊗S} ⟺ λ⋆M ∈ D_σ` and the same for `T`, for an S-module M.
pub fn restriction_transfer_check(
    sigma: &TwoTermComplex,
    lambda: &RingHomomorphism,
    module: &FpModule,
) -> Result<TransferReport, EngineError> {
    let push = push_complex(sigma, lambda)?;
    let restricted = restrict_scalars(lambda, module)?;
    let in_d_source = in_d_sigma(sigma, &restricted)?;
    let in_d_target = in_d_sigma(&push, module)?;
    let in_t_source = in_t_sigma(sigma, &restricted)?;
    let in_t_target = in_t_sigma(&push, module)?;
    Ok(TransferReport {
        in_d_source,
        in_d_target,
        in_t_source,
        in_t_target,
        holds: in_d_source == in_d_target && in_t_source == in_t_target,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectTransfer {
    pub pushed_defect: CanonicalForm,
    pub defect_base_changed: CanonicalForm,
    pub holds: bool,
}

/// `Def_{σ⊗S}(N⊗S)` against `Def_σ(N)⊗S`.
pub fn defect_transfer_check(
    sigma: &TwoTermComplex,
    lambda: &RingHomomorphism,
    module: &FpModule,
) -> Result<DefectTransfer, EngineError> {
    let push = push_complex(sigma, lambda)?;
    let pushed_defect = defect(&push, &base_change_module(lambda, module)?)?.module.canonical();
    let defect_base_changed = base_change_module(lambda, &defect(sigma, module)?.module)?.canonical();
    Ok(DefectTransfer {
        holds: pushed_defect == defect_base_changed,
        pushed_defect,
        defect_base_changed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExhibitKind {
    DescentNeedsFaithful,
    AscentAnyHom,
}

#[derive(Clone, Debug)]
pub struct Exhibit {
    pub kind: ExhibitKind,
    pub sigma: TwoTermComplex,
    pub lambda: RingHomomorphism,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhibitReport {
    pub kind: ExhibitKind,
    pub hom: String,
    pub classification: HomClassification,
    pub source_verdict: Verdict,
    pub push_verdict: Verdict,
    /// The properties the exhibit is stored for were recomputed and hold.
    pub validated: bool,
}

/// The stored exhibits of each kind.
pub fn counterexample_exhibits(kind: ExhibitKind) -> Vec<Exhibit> {
    match kind {
        ExhibitKind::DescentNeedsFaithful => {
            let z6 = Ring::zmod(6);
            let sigma = TwoTermComplex::new(
                z6.clone(),
                vec![
                    Matrix::zeros(Scalars::Modular(2), 1, 0),
                    Matrix::identity(Scalars::Modular(3), 1),
                ],
            )
            .expect("two components");
            let lambda = RingHomomorphism::projection(&z6, &[0]).expect("catalog map");
            vec![Exhibit {
                kind,
                sigma,
                lambda,
            }]
        }
        ExhibitKind::AscentAnyHom => {
            let zz = Ring::integers();
            let quotient = |m| {
                RingHomomorphism::quotient(&RingDescriptor::Integers, &RingDescriptor::ModularRing(m))
                    .expect("catalog map")
            };
            vec![
                Exhibit {
                    kind,
                    sigma: TwoTermComplex::zero_to_free(&zz, 1),
                    lambda: quotient(6),
                },
                Exhibit {
                    kind,
                    sigma: TwoTermComplex::uniform(&zz, &[vec![2], vec![3]], 1),
                    lambda: quotient(4),
                },
            ]
        }
    }
}

/// The first stored exhibit of the given kind.
pub fn counterexample_exhibit(kind: ExhibitKind) -> Exhibit {
    counterexample_exhibits(kind).remove(0)
}

pub fn validate_exhibit(exhibit: &Exhibit) -> Result<ExhibitReport, EngineError> {
    let classification = classify_hom(&exhibit.lambda)?;
    let source_verdict = is_silting(&exhibit.sigma).verdict;
    let push_verdict = is_silting(&push_complex(&exhibit.sigma, &exhibit.lambda)?).verdict;
    let validated = match exhibit.kind {
        ExhibitKind::DescentNeedsFaithful => {
            classification.flat
                && !classification.faithfully_flat
                && push_verdict == Verdict::Silting
                && source_verdict != Verdict::Silting
        }
        ExhibitKind::AscentAnyHom => {
            !classification.flat
                && source_verdict == Verdict::Silting
                && push_verdict == Verdict::Silting
                && !check_ascent(&exhibit.sigma, &exhibit.lambda)?.violation
        }
    };
    Ok(ExhibitReport {
        kind: exhibit.kind,
        hom: exhibit.lambda.to_string(),
        classification,
        source_verdict,
        push_verdict,
        validated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_silting;

    fn quotient(m: u64) -> RingHomomorphism {
        RingHomomorphism::quotient(&RingDescriptor::Integers, &RingDescriptor::ModularRing(m)).unwrap()
    }

    #[test]
    fn push_examples() {
        let zz = Ring::integers();
        let p = push_complex(&TwoTermComplex::uniform(&zz, &[vec![6]], 1), &quotient(4)).unwrap();
        assert_eq!(p.part(0).to_rows(), vec![vec![2]]);

        let z5 = Ring::zmod(5);
        let s = TwoTermComplex::uniform(&z5, &[vec![1, 2], vec![3, 4]], 2);
        let p = push_complex(&s, &RingHomomorphism::diagonal(&z5, 2).unwrap()).unwrap();
        assert_eq!(p.parts().len(), 2);
        assert_eq!(p.part(0), s.part(0));
        assert_eq!(p.part(1), s.part(0));

        let s = TwoTermComplex::uniform(&zz, &[vec![1, 0], vec![0, 6]], 2);
        let p = push_complex(&s, &quotient(5)).unwrap();
        assert_eq!(p.part(0).to_rows(), vec![vec![1, 0], vec![0, 1]]);

        assert!(push_complex(&s, &RingHomomorphism::identity(&z5)).is_err());
    }

    #[test]
    fn ascent_examples() {
        let zz = Ring::integers();
        let r = check_ascent(&TwoTermComplex::zero_to_free(&zz, 1), &quotient(6)).unwrap();
        assert!(r.criterion && !r.violation);

        let s = TwoTermComplex::uniform(&zz, &[vec![2], vec![3]], 1);
        let r = check_ascent(&s, &quotient(4)).unwrap();
        assert_eq!(r.push_verdict, Verdict::Silting);
        assert!(oracle_silting(&push_complex(&s, &quotient(4)).unwrap(), 2).unwrap().consistent);

        let z5 = Ring::zmod(5);
        let r = check_ascent(&TwoTermComplex::zero_to_free(&z5, 2), &RingHomomorphism::diagonal(&z5, 2).unwrap())
            .unwrap();
        assert!(!r.violation);

        assert!(check_ascent(&TwoTermComplex::identity(&zz, 1), &quotient(6)).is_err());
    }

    #[test]
    fn descent_examples() {
        let z5 = Ring::zmod(5);
        let diag = RingHomomorphism::diagonal(&z5, 2).unwrap();
        let r = check_descent(&TwoTermComplex::uniform(&z5, &[vec![1, 0]], 2), &diag).unwrap();
        assert_eq!(r.status, DescentStatus::Verified);
        let r = check_descent(&TwoTermComplex::identity(&z5, 1), &diag).unwrap();
        assert_eq!(r.status, DescentStatus::HypothesisNotMet);

        let id = RingHomomorphism::identity(&Ring::integers());
        let s = TwoTermComplex::uniform(&Ring::integers(), &[vec![6]], 1);
        let r = check_descent(&s, &id).unwrap();
        assert_eq!(r.push_verdict, r.source_verdict);

        let ex = counterexample_exhibit(ExhibitKind::DescentNeedsFaithful);
        let r = check_descent(&ex.sigma, &ex.lambda).unwrap();
        assert_eq!(r.status, DescentStatus::NotApplicable);
        assert_eq!(r.push_verdict, Verdict::Silting);
        assert_eq!(r.source_verdict, Verdict::PartialNotSilting);
        assert!(!oracle_silting(&ex.sigma, 2).unwrap().consistent);
    }

    #[test]
    fn exhibits_validate() {
        for kind in [ExhibitKind::DescentNeedsFaithful, ExhibitKind::AscentAnyHom] {
            for ex in counterexample_exhibits(kind) {
                let r = validate_exhibit(&ex).unwrap();
                assert!(r.validated, "{r:?}");
            }
        }
    }

    #[test]
    fn spectral_examples() {
        let zz = Ring::integers();
        let s = TwoTermComplex::uniform(&zz, &[vec![6]], 1);
        let r = spectral_compare(&s, &RingHomomorphism::identity(&zz)).unwrap();
        assert!(!r.violation);
        assert_eq!(r.source_set.components[0], ComponentSubset::integer_primes(vec![2, 3]));

        for n in [5u64, 6] {
            let ring = Ring::zmod(n);
            let diag = RingHomomorphism::diagonal(&ring, 2).unwrap();
            for s in [
                TwoTermComplex::uniform(&ring, &[vec![2]], 1),
                TwoTermComplex::free_to_zero(&ring, 2),
                TwoTermComplex::zero_to_free(&ring, 1),
            ] {
                assert!(!spectral_compare(&s, &diag).unwrap().violation);
            }
        }
        let z6 = Ring::zmod(6);
        let proj = RingHomomorphism::projection(&z6, &[0]).unwrap();
        assert!(spectral_compare(&TwoTermComplex::identity(&z6, 1), &proj).is_err());
    }

    #[test]
    fn transfer_examples() {
        let z4 = Ring::zmod(4);
        let diag = RingHomomorphism::diagonal(&z4, 2).unwrap();
        let sigma = TwoTermComplex::uniform(&z4, &[vec![1], vec![2]], 1);
        assert_eq!(is_silting(&sigma).verdict, Verdict::Silting);
        let r = membership_transfer_check(&sigma, &diag, &FpModule::zero(&z4)).unwrap();
        assert!(r.holds && r.in_d_source && r.in_d_target);
        let t = cokernel(&sigma);
        let r = membership_transfer_check(&sigma, &diag, &t).unwrap();
        assert!(r.holds && r.in_d_source);
        for d in [0, 1, 2] {
            let n = FpModule::from_cyclic_orders(&z4, &[vec![d, 2]]);
            assert!(membership_transfer_check(&sigma, &diag, &n).unwrap().holds);
            assert!(defect_transfer_check(&sigma, &diag, &n).unwrap().holds);
        }
    }

    #[test]
    fn spec_image_over_integers() {
        let l = quotient(12);
        let t = SpecSubset {
            components: vec![
                ComponentSubset::Local { prime: 2, included: true },
                ComponentSubset::Local { prime: 3, included: false },
            ],
        };
        let img = spec_image(&l, &t);
        assert_eq!(img.components[0], ComponentSubset::integer_primes(vec![2]));
    }
}
