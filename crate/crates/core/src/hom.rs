//! Catalog ring homomorphisms λ: R → S and their flatness classification.
//!
//! Every catalog map is determined by its component map: each connected
//! component of S receives a ring map from exactly one component of R, and
//! that local map is reduction (ℤ → ℤ, ℤ → ℤ/p^j, or ℤ/p^k → ℤ/p^j with j ≤ k).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::prime_divisors;
use crate::error::HomError;
use crate::linalg::Matrix;
use crate::module::{base_change_map, base_change_module, FpModule, ModuleMap};
use crate::ring::{Component, Ideal, Ring, RingDescriptor, RingElement};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HomKind {
    Identity,
    Quotient,
    ComponentProjection { keep: Vec<usize> },
    DiagonalEmbedding { copies: usize },
    CrtIsomorphism,
    Composite { steps: Vec<HomKind> },
}

impl fmt::Display for HomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomKind::Identity => write!(f, "identity"),
            HomKind::Quotient => write!(f, "quotient"),
            HomKind::ComponentProjection { keep } => write!(f, "projection{keep:?}"),
            HomKind::DiagonalEmbedding { copies } => write!(f, "diagonal^{copies}"),
            HomKind::CrtIsomorphism => write!(f, "crt"),
            HomKind::Composite { steps } => {
                let s: Vec<String> = steps.iter().map(|k| k.to_string()).collect();
                write!(f, "{}", s.join(" ; "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingHomomorphism {
    source: Ring,
    target: Ring,
    kind: HomKind,
    /// For each target component, the source component it factors through.
    component_map: Vec<usize>,
}

fn local_map_ok(from: Component, to: Component) -> bool {
    match (from, to) {
        (Component::Integers, _) => true,
        (Component::PrimePower { .. }, Component::Integers) => false,
        (Component::PrimePower { p, k }, Component::PrimePower { p: q, k: j }) => p == q && j <= k,
    }
}

impl RingHomomorphism {
    fn build(
        source: Ring,
        target: Ring,
        kind: HomKind,
        component_map: Vec<usize>,
    ) -> Result<Self, HomError> {
        if component_map.len() != target.num_components() {
            return Err(HomError::NotInCatalog("component map has the wrong length".into()));
        }
        for (t, &c) in component_map.iter().enumerate() {
            let ok = c < source.num_components()
                && local_map_ok(source.component(c), target.component(t));
            if !ok {
                return Err(HomError::NotInCatalog(format!(
                    "no unital map sends component {c} of {} onto component {t} of {}",
                    source.descriptor(),
                    target.descriptor()
                )));
            }
        }
        Ok(RingHomomorphism {
            source,
            target,
            kind,
            component_map,
        })
    }

    pub fn identity(ring: &Ring) -> Self {
        RingHomomorphism {
            source: ring.clone(),
            target: ring.clone(),
            kind: HomKind::Identity,
            component_map: (0..ring.num_components()).collect(),
        }
    }

    /// ℤ → ℤ/m, ℤ/n → ℤ/m (m | n), or a field version of either.
    pub fn quotient(source: &RingDescriptor, target: &RingDescriptor) -> Result<Self, HomError> {
        let modulus = |d: &RingDescriptor| match d {
            RingDescriptor::ModularRing(n) | RingDescriptor::PrimeField(n) => Some(*n),
            _ => None,
        };
        let m = modulus(target).ok_or_else(|| {
            HomError::NotInCatalog(format!("quotient target must be Z/m, got {target}"))
        })?;
        match source {
            RingDescriptor::Integers => {}
            RingDescriptor::ModularRing(n) | RingDescriptor::PrimeField(n) if n % m == 0 => {}
            _ => {
                return Err(HomError::NotInCatalog(format!(
                    "no quotient map {source} -> {target}"
                )))
            }
        }
        let source = Ring::new(source.clone());
        let target = Ring::new(target.clone());
        let map = target
            .components()
            .iter()
            .map(|t| {
                source
                    .components()
                    .iter()
                    .position(|s| *s == Component::Integers || s.prime() == t.prime())
                    .expect("m divides n")
            })
            .collect();
        Self::build(source, target, HomKind::Quotient, map)
    }

    /// Keeps the listed CRT components of `source`, in the given order.
    pub fn projection(source: &Ring, keep: &[usize]) -> Result<Self, HomError> {
        if keep.is_empty() {
            return Err(HomError::NotInCatalog("projection onto the zero ring".into()));
        }
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != keep.len() || *sorted.last().unwrap() >= source.num_components() {
            return Err(HomError::NotInCatalog(format!(
                "projection indices {keep:?} invalid for {} components",
                source.num_components()
            )));
        }
        let comps: Vec<Component> = keep.iter().map(|&i| source.component(i)).collect();
        let target = Ring::from_components(&comps);
        Self::build(
            source.clone(),
            target,
            HomKind::ComponentProjection {
                keep: keep.to_vec(),
            },
            keep.to_vec(),
        )
    }

    /// R → R^copies, r ↦ (r, …, r).
    pub fn diagonal(source: &Ring, copies: usize) -> Result<Self, HomError> {
        if copies == 0 {
            return Err(HomError::NotInCatalog("diagonal with zero copies".into()));
        }
        let desc = RingDescriptor::product(vec![source.descriptor().clone(); copies])
            .map_err(|e| HomError::NotInCatalog(e.to_string()))?;
        let target = Ring::new(desc);
        let nc = source.num_components();
        let map = (0..copies * nc).map(|t| t % nc).collect();
        Self::build(
            source.clone(),
            target,
            HomKind::DiagonalEmbedding { copies },
            map,
        )
    }

    /// R ≅ product of its connected components.
    pub fn crt(source: &Ring) -> Self {
        let target = Ring::from_components(source.components());
        RingHomomorphism {
            source: source.clone(),
            target,
            kind: HomKind::CrtIsomorphism,
            component_map: (0..source.num_components()).collect(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &RingHomomorphism) -> Result<Self, HomError> {
        if self.target != other.source {
            return Err(HomError::NotInCatalog(format!(
                "cannot compose: {} is not {}",
                self.target.descriptor(),
                other.source.descriptor()
            )));
        }
        let mut steps = Vec::new();
        for k in [&self.kind, &other.kind] {
            match k {
                HomKind::Composite { steps: s } => steps.extend(s.iter().cloned()),
                k => steps.push(k.clone()),
            }
        }
        let map = other
            .component_map
            .iter()
            .map(|&s| self.component_map[s])
            .collect();
        Self::build(
            self.source.clone(),
            other.target.clone(),
            HomKind::Composite { steps },
            map,
        )
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn kind(&self) -> &HomKind {
        &self.kind
    }

    pub fn component_map(&self) -> &[usize] {
        &self.component_map
    }

    pub fn source_component(&self, target_component: usize) -> usize {
        self.component_map[target_component]
    }

    /// Target components that factor through source component `c`.
    pub fn targets_over(&self, c: usize) -> Vec<usize> {
        (0..self.component_map.len())
            .filter(|&t| self.component_map[t] == c)
            .collect()
    }

    pub fn apply(&self, elem: &RingElement) -> RingElement {
        let vals = self.source.project(elem);
        let out: Vec<i128> = self.component_map.iter().map(|&c| vals[c]).collect();
        self.target.recombine(&out)
    }
}

impl fmt::Display for RingHomomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} ({})",
            self.source.descriptor(),
            self.target.descriptor(),
            self.kind
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomClassification {
    pub surjective: bool,
    pub flat: bool,
    pub faithfully_flat: bool,
}

/// Classification read off the component map.
pub fn structural_classification(lambda: &RingHomomorphism) -> HomClassification {
    let src = &lambda.source;
    let tgt = &lambda.target;
    let flat = lambda
        .component_map
        .iter()
        .enumerate()
        .all(|(t, &c)| src.component(c) == tgt.component(t));
    let all_hit = (0..src.num_components()).all(|c| !lambda.targets_over(c).is_empty());
    let surjective = (0..src.num_components()).all(|c| {
        let over = lambda.targets_over(c);
        match src.component(c) {
            Component::PrimePower { .. } => over.len() <= 1,
            Component::Integers => {
                let comps: Vec<Component> = over.iter().map(|&t| tgt.component(t)).collect();
                if comps.contains(&Component::Integers) {
                    comps.len() == 1
                } else {
                    let mut ps: Vec<u64> = comps.iter().filter_map(Component::prime).collect();
                    ps.sort_unstable();
                    ps.dedup();
                    ps.len() == comps.len()
                }
            }
        }
    });
    HomClassification {
        surjective,
        flat,
        faithfully_flat: flat && all_hit,
    }
}

/// Module supported on a single component, zero elsewhere.
fn on_component(ring: &Ring, c: usize, orders: Vec<i128>) -> FpModule {
    let all = (0..ring.num_components())
        .map(|d| if d == c { orders.clone() } else { Vec::new() })
        .collect::<Vec<_>>();
    FpModule::from_cyclic_orders(ring, &all)
}

/// Injective maps of R-modules whose base change detects non-flatness.
fn flatness_battery(lambda: &RingHomomorphism) -> Vec<ModuleMap> {
    let src = &lambda.source;
    let mut out = Vec::new();
    for (c, comp) in src.components().iter().enumerate() {
        let scalars = comp.scalars();
        let zero_parts = |rows: usize, cols: usize, entry: i128| -> Vec<Matrix> {
            src.components()
                .iter()
                .enumerate()
                .map(|(d, dc)| {
                    if d == c {
                        let mut m = Matrix::zeros(scalars, rows, cols);
                        if rows > 0 && cols > 0 {
                            m.set(0, 0, entry);
                        }
                        m
                    } else {
                        Matrix::zeros(dc.scalars(), 0, 0)
                    }
                })
                .collect()
        };
        match *comp {
            Component::Integers => {
                let mut ds: Vec<u64> = vec![2, 3];
                for &t in &lambda.targets_over(c) {
                    if let Some(q) = lambda.target.component(t).modulus() {
                        ds.extend(prime_divisors(q as i128));
                    }
                }
                ds.sort_unstable();
                ds.dedup();
                for d in ds {
                    let r = on_component(src, c, vec![0]);
                    let map = ModuleMap::new(r.clone(), r, zero_parts(1, 1, d as i128))
                        .expect("battery map");
                    out.push(map);
                }
            }
            Component::PrimePower { p, k } => {
                for j in 1..k {
                    let sub = on_component(src, c, vec![(p as i128).pow(j)]);
                    let r = on_component(src, c, vec![0]);
                    let map = ModuleMap::new(sub, r, zero_parts(1, 1, (p as i128).pow(k - j)))
                        .expect("battery map");
                    out.push(map);
                }
            }
        }
    }
    out
}

/// Nonzero R-modules whose base change must stay nonzero under a faithful map.
fn faithfulness_battery(lambda: &RingHomomorphism) -> Vec<FpModule> {
    let src = &lambda.source;
    let mut out = Vec::new();
    for (c, comp) in src.components().iter().enumerate() {
        match *comp {
            Component::Integers => {
                out.push(on_component(src, c, vec![0]));
                for p in [2i128, 3, 5] {
                    out.push(on_component(src, c, vec![p]));
                }
            }
            Component::PrimePower { p, .. } => out.push(on_component(src, c, vec![p as i128])),
        }
    }
    out
}

/// Surjectivity by enumeration when both rings are small and finite.
fn enumerated_surjectivity(lambda: &RingHomomorphism) -> Option<bool> {
    let tgt_size: u128 = lambda
        .target
        .components()
        .iter()
        .map(|c| c.modulus().map(u128::from))
        .product::<Option<u128>>()?;
    let src_size: u128 = lambda
        .source
        .components()
        .iter()
        .map(|c| c.modulus().map(u128::from))
        .product::<Option<u128>>()?;
    if src_size > 4096 {
        return None;
    }
    let image: std::collections::BTreeSet<Vec<i128>> = lambda
        .source
        .elements()
        .ok()?
        .iter()
        .map(|e| lambda.apply(e).values)
        .collect();
    Some(image.len() as u128 == tgt_size)
}

/// Structural classification, cross-checked against exactness and
/// faithfulness batteries; any disagreement is an error.
pub fn classify_hom(lambda: &RingHomomorphism) -> Result<HomClassification, HomError> {
    let structural = structural_classification(lambda);
    let mut flat = true;
    for f in flatness_battery(lambda) {
        debug_assert!(f.is_injective());
        if !base_change_map(lambda, &f)?.is_injective() {
            flat = false;
            break;
        }
    }
    if flat != structural.flat {
        return Err(HomError::ClassificationMismatch(format!(
            "{lambda}: rule says flat = {}, battery says {flat}",
            structural.flat
        )));
    }
    let mut faithful = true;
    for m in faithfulness_battery(lambda) {
        if base_change_module(lambda, &m)?.is_zero() {
            faithful = false;
            break;
        }
    }
    if (flat && faithful) != structural.faithfully_flat {
        return Err(HomError::ClassificationMismatch(format!(
            "{lambda}: rule says faithfully flat = {}, battery says {}",
            structural.faithfully_flat,
            flat && faithful
        )));
    }
    if let Some(surj) = enumerated_surjectivity(lambda) {
        if surj != structural.surjective {
            return Err(HomError::ClassificationMismatch(format!(
                "{lambda}: rule says surjective = {}, enumeration says {surj}",
                structural.surjective
            )));
        }
    }
    Ok(structural)
}

/// The ideal of S generated by λ(I).
pub fn extend_ideal(lambda: &RingHomomorphism, ideal: &Ideal) -> Ideal {
    let generators = lambda
        .component_map
        .iter()
        .enumerate()
        .map(|(t, &c)| lambda.target.component(t).ideal_generator(ideal.generators[c]))
        .collect();
    Ideal { generators }
}
