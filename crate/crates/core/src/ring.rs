//! The ring catalog: ℤ, ℤ/n, 𝔽_p and finite products of these.
//!
//! Every catalog ring splits (by the Chinese remainder theorem) into connected
//! components, each of which is either ℤ or a local ring ℤ/p^k. All module and
//! matrix computations elsewhere in the crate run component by component.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{crt_combine, factorize, gcd, inv_mod, is_prime, mul_mod};
use crate::error::RingError;

/// A commutative ring from the supported catalog.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RingRepr", into = "RingRepr")]
pub enum RingDescriptor {
    Integers,
    ModularRing(u64),
    PrimeField(u64),
    /// Flattened: no factor is itself a product.
    Product(Vec<RingDescriptor>),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind")]
enum RingRepr {
    #[serde(rename = "Z")]
    Integers,
    #[serde(rename = "Zmod")]
    Modular { n: u64 },
    #[serde(rename = "Fp")]
    Field { p: u64 },
    #[serde(rename = "product")]
    Product { factors: Vec<RingRepr> },
}

impl TryFrom<RingRepr> for RingDescriptor {
    type Error = RingError;

    fn try_from(repr: RingRepr) -> Result<Self, RingError> {
        match repr {
            RingRepr::Integers => Ok(RingDescriptor::Integers),
            RingRepr::Modular { n } => RingDescriptor::modular(n),
            RingRepr::Field { p } => RingDescriptor::prime_field(p),
            RingRepr::Product { factors } => {
                let factors = factors
                    .into_iter()
                    .map(RingDescriptor::try_from)
                    .collect::<Result<Vec<_>, _>>()?;
                RingDescriptor::product(factors)
            }
        }
    }
}

impl From<RingDescriptor> for RingRepr {
    fn from(desc: RingDescriptor) -> Self {
        match desc {
            RingDescriptor::Integers => RingRepr::Integers,
            RingDescriptor::ModularRing(n) => RingRepr::Modular { n },
            RingDescriptor::PrimeField(p) => RingRepr::Field { p },
            RingDescriptor::Product(factors) => RingRepr::Product {
                factors: factors.into_iter().map(RingRepr::from).collect(),
            },
        }
    }
}

impl RingDescriptor {
    pub fn modular(n: u64) -> Result<Self, RingError> {
        if n < 2 {
            return Err(RingError::InvalidDescriptor(format!(
                "Zmod requires n >= 2, got {n}"
            )));
        }
        Ok(RingDescriptor::ModularRing(n))
    }

    pub fn prime_field(p: u64) -> Result<Self, RingError> {
        if !is_prime(p) {
            return Err(RingError::InvalidDescriptor(format!("Fp requires a prime, got {p}")));
        }
        Ok(RingDescriptor::PrimeField(p))
    }

    /// Builds a product, flattening nested products.
    pub fn product(factors: Vec<RingDescriptor>) -> Result<Self, RingError> {
        if factors.is_empty() {
            return Err(RingError::InvalidDescriptor("empty product".into()));
        }
        let mut flat = Vec::new();
        for f in factors {
            match f {
                RingDescriptor::Product(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        Ok(RingDescriptor::Product(flat))
    }

    /// The top-level factors; a non-product is its own single factor.
    pub fn factors(&self) -> &[RingDescriptor] {
        match self {
            RingDescriptor::Product(f) => f,
            other => std::slice::from_ref(other),
        }
    }

    /// Equality up to representation: ℤ/p and 𝔽_p compare equal, as do rings
    /// with the same ordered list of connected components.
    pub fn semantically_eq(&self, other: &RingDescriptor) -> bool {
        Ring::new(self.clone()).components == Ring::new(other.clone()).components
    }

    pub fn is_finite(&self) -> bool {
        self.factors()
            .iter()
            .all(|f| !matches!(f, RingDescriptor::Integers))
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Integers => write!(f, "Z"),
            RingDescriptor::ModularRing(n) => write!(f, "Z/{n}"),
            RingDescriptor::PrimeField(p) => write!(f, "F{p}"),
            RingDescriptor::Product(fs) => {
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " x ")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
        }
    }
}

/// A connected catalog ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Component {
    Integers,
    /// ℤ/p^k with `k >= 1`; a field when `k == 1`.
    PrimePower { p: u64, k: u32 },
}

impl Component {
    pub fn modulus(&self) -> Option<u64> {
        match *self {
            Component::Integers => None,
            Component::PrimePower { p, k } => Some(p.pow(k)),
        }
    }

    pub fn prime(&self) -> Option<u64> {
        match *self {
            Component::Integers => None,
            Component::PrimePower { p, .. } => Some(p),
        }
    }

    pub fn scalars(&self) -> Scalars {
        match self.modulus() {
            None => Scalars::Integers,
            Some(n) => Scalars::Modular(n),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Component::PrimePower { .. })
    }

    /// Canonical generator of the ideal `(x)`: `|x|` over ℤ, `p^v` (or 0) over ℤ/p^k.
    pub fn ideal_generator(&self, x: i128) -> i128 {
        match *self {
            Component::Integers => x.abs(),
            Component::PrimePower { .. } => {
                let n = self.modulus().unwrap() as i128;
                gcd(x.rem_euclid(n), n) % n
            }
        }
    }

    /// `a` as an element of `ℤ` for gcd purposes: the zero of ℤ/p^k becomes p^k.
    pub(crate) fn order_like(&self, a: i128) -> i128 {
        match self.modulus() {
            Some(n) if a.rem_euclid(n as i128) == 0 => n as i128,
            _ => a,
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Integers => write!(f, "Z"),
            Component::PrimePower { p, k: 1 } => write!(f, "F{p}"),
            Component::PrimePower { p, k } => write!(f, "Z/{}", p.pow(*k)),
        }
    }
}

/// Coefficient domain of a matrix: ℤ, ℤ/n (any n >= 2), or ℚ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scalars {
    Integers,
    Modular(u64),
    Rationals,
}

impl Scalars {
    #[inline]
    pub fn reduce(&self, x: i128) -> i128 {
        match *self {
            Scalars::Modular(n) => x.rem_euclid(n as i128),
            _ => x,
        }
    }

    #[inline]
    pub fn add(&self, a: i128, b: i128) -> i128 {
        self.reduce(a + b)
    }

    #[inline]
    pub fn sub(&self, a: i128, b: i128) -> i128 {
        self.reduce(a - b)
    }

    #[inline]
    pub fn neg(&self, a: i128) -> i128 {
        self.reduce(-a)
    }

    #[inline]
    pub fn mul(&self, a: i128, b: i128) -> i128 {
        match *self {
            Scalars::Modular(n) => mul_mod(a, b, n),
            _ => a * b,
        }
    }

    pub fn is_unit(&self, a: i128) -> bool {
        match *self {
            Scalars::Integers => a == 1 || a == -1,
            Scalars::Modular(n) => gcd(a, n as i128) == 1,
            Scalars::Rationals => a != 0,
        }
    }

    /// Multiplicative inverse of a unit. Over ℚ only the integer units ±1 have
    /// integer inverses; other elements return `None`.
    pub fn inverse(&self, a: i128) -> Option<i128> {
        match *self {
            Scalars::Modular(n) => inv_mod(a, n),
            _ if a == 1 || a == -1 => Some(a),
            _ => None,
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match *self {
            Scalars::Modular(n) => Some(n),
            _ => None,
        }
    }
}

/// A catalog ring together with its CRT decomposition.
#[derive(Clone, Debug)]
pub struct Ring {
    descriptor: RingDescriptor,
    components: Vec<Component>,
    /// For each component, the top-level descriptor factor it comes from.
    factor_of: Vec<usize>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl Eq for Ring {}

impl Ring {
    pub fn new(descriptor: RingDescriptor) -> Ring {
        let mut components = Vec::new();
        let mut factor_of = Vec::new();
        for (i, f) in descriptor.factors().iter().enumerate() {
            match *f {
                RingDescriptor::Integers => {
                    components.push(Component::Integers);
                    factor_of.push(i);
                }
                RingDescriptor::ModularRing(n) | RingDescriptor::PrimeField(n) => {
                    for (p, k) in factorize(n) {
                        components.push(Component::PrimePower { p, k });
                        factor_of.push(i);
                    }
                }
                RingDescriptor::Product(_) => unreachable!("products are flattened"),
            }
        }
        Ring {
            descriptor,
            components,
            factor_of,
        }
    }

    /// The ring `Π components`, written as a product of `Zmod`/`Fp`/`Z` factors.
    pub fn from_components(components: &[Component]) -> Ring {
        let factors: Vec<_> = components.iter().map(component_descriptor).collect();
        let desc = if factors.len() == 1 {
            factors.into_iter().next().unwrap()
        } else {
            RingDescriptor::Product(factors)
        };
        Ring::new(desc)
    }

    pub fn integers() -> Ring {
        Ring::new(RingDescriptor::Integers)
    }

    /// ℤ/n; panics for n < 2.
    pub fn zmod(n: u64) -> Ring {
        Ring::new(RingDescriptor::modular(n).expect("zmod: n >= 2"))
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.descriptor
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, i: usize) -> Component {
        self.components[i]
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(Component::is_finite)
    }

    pub fn factor_of(&self, component: usize) -> usize {
        self.factor_of[component]
    }

    /// Component values of an element (the CRT projections).
    pub fn project(&self, elem: &RingElement) -> Vec<i128> {
        self.components
            .iter()
            .zip(&self.factor_of)
            .map(|(c, &f)| c.scalars().reduce(elem.values[f]))
            .collect()
    }

    /// Inverse of [`Ring::project`].
    pub fn recombine(&self, values: &[i128]) -> RingElement {
        assert_eq!(values.len(), self.components.len());
        let nf = self.descriptor.factors().len();
        let mut out = Vec::with_capacity(nf);
        for f in 0..nf {
            let parts: Vec<(i128, u64)> = (0..self.components.len())
                .filter(|&c| self.factor_of[c] == f)
                .map(|c| {
                    let comp = self.components[c];
                    (comp.scalars().reduce(values[c]), comp.modulus().unwrap_or(0))
                })
                .collect();
            if parts.len() == 1 && parts[0].1 == 0 {
                out.push(parts[0].0);
            } else {
                out.push(crt_combine(&parts));
            }
        }
        RingElement { values: out }
    }

    pub fn element(&self, values: Vec<i128>) -> RingElement {
        assert_eq!(values.len(), self.descriptor.factors().len());
        let values = values
            .into_iter()
            .zip(self.descriptor.factors())
            .map(|(v, f)| factor_scalars(f).reduce(v))
            .collect();
        RingElement { values }
    }

    /// The image of an integer under ℤ → R.
    pub fn from_integer(&self, x: i128) -> RingElement {
        self.element(vec![x; self.descriptor.factors().len()])
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.zip_with(a, b, |s, x, y| s.add(x, y))
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.zip_with(a, b, |s, x, y| s.mul(x, y))
    }

    fn zip_with(
        &self,
        a: &RingElement,
        b: &RingElement,
        op: impl Fn(Scalars, i128, i128) -> i128,
    ) -> RingElement {
        let values = self
            .descriptor
            .factors()
            .iter()
            .zip(a.values.iter().zip(&b.values))
            .map(|(f, (&x, &y))| op(factor_scalars(f), x, y))
            .collect();
        RingElement { values }
    }

    /// All elements of a finite ring in lexicographic order of factor values.
    pub fn elements(&self) -> Result<Vec<RingElement>, RingError> {
        let mut sizes = Vec::new();
        for f in self.descriptor.factors() {
            match factor_scalars(f).modulus() {
                Some(n) => sizes.push(n as i128),
                None => return Err(RingError::InfiniteEnumeration),
            }
        }
        let mut out = vec![RingElement { values: Vec::new() }];
        for n in sizes {
            out = out
                .into_iter()
                .flat_map(|e| {
                    (0..n).map(move |v| {
                        let mut values = e.values.clone();
                        values.push(v);
                        RingElement { values }
                    })
                })
                .collect();
        }
        Ok(out)
    }

    /// Prime spectrum, component by component.
    pub fn spectrum(&self) -> SpectrumDescription {
        enumerate_spec(self)
    }

    pub fn unit_ideal(&self) -> Ideal {
        Ideal {
            generators: vec![1; self.components.len()],
        }
    }

    pub fn zero_ideal(&self) -> Ideal {
        Ideal {
            generators: vec![0; self.components.len()],
        }
    }

    /// The ideal generated by the given elements, normalized per component.
    pub fn ideal_generated_by(&self, elems: &[RingElement]) -> Ideal {
        let projected: Vec<Vec<i128>> = elems.iter().map(|e| self.project(e)).collect();
        let generators = self
            .components
            .iter()
            .enumerate()
            .map(|(c, comp)| {
                let g = projected
                    .iter()
                    .fold(0i128, |acc, v| gcd(acc, comp.order_like(v[c])));
                comp.ideal_generator(g)
            })
            .collect();
        Ideal { generators }
    }

    pub fn ideal_sum(&self, a: &Ideal, b: &Ideal) -> Ideal {
        let generators = self
            .components
            .iter()
            .zip(a.generators.iter().zip(&b.generators))
            .map(|(c, (&x, &y))| c.ideal_generator(gcd(c.order_like(x), c.order_like(y))))
            .collect();
        Ideal { generators }
    }

    pub fn ideal_product(&self, a: &Ideal, b: &Ideal) -> Ideal {
        let generators = self
            .components
            .iter()
            .zip(a.generators.iter().zip(&b.generators))
            .map(|(c, (&x, &y))| c.ideal_generator(c.scalars().mul(x, y)))
            .collect();
        Ideal { generators }
    }

    /// `a ⊆ b`.
    pub fn ideal_contained_in(&self, a: &Ideal, b: &Ideal) -> bool {
        self.ideal_sum(a, b) == *b
    }

    /// One canonical generator per top-level factor: a divisor of `n` for
    /// `Zmod(n)` (0 for the zero ideal), a non-negative integer over ℤ.
    pub fn ideal_factor_generators(&self, ideal: &Ideal) -> Vec<i128> {
        let nf = self.descriptor.factors().len();
        (0..nf)
            .map(|f| {
                let parts: Vec<(i128, u64)> = (0..self.components.len())
                    .filter(|&c| self.factor_of[c] == f)
                    .map(|c| (ideal.generators[c], self.components[c].modulus().unwrap_or(0)))
                    .collect();
                if parts.len() == 1 && parts[0].1 == 0 {
                    return parts[0].0;
                }
                let n: i128 = parts.iter().map(|&(_, m)| m as i128).product();
                gcd(crt_combine(&parts), n) % n
            })
            .collect()
    }
}

fn factor_scalars(f: &RingDescriptor) -> Scalars {
    match *f {
        RingDescriptor::Integers => Scalars::Integers,
        RingDescriptor::ModularRing(n) | RingDescriptor::PrimeField(n) => Scalars::Modular(n),
        RingDescriptor::Product(_) => unreachable!("products are flattened"),
    }
}

fn component_descriptor(c: &Component) -> RingDescriptor {
    match *c {
        Component::Integers => RingDescriptor::Integers,
        Component::PrimePower { p, k } => RingDescriptor::ModularRing(p.pow(k)),
    }
}

/// An element of a catalog ring: one canonical value per top-level factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingElement {
    pub values: Vec<i128>,
}

/// Projection of a ring onto one of its connected components.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Projection {
    pub component: usize,
}

impl Projection {
    pub fn apply(&self, ring: &Ring, elem: &RingElement) -> i128 {
        ring.project(elem)[self.component]
    }
}

/// Splits a ring into connected components. ℤ/p^k components are reported
/// as `Zmod(p^k)`, except that an `Fp` factor stays `Fp`.
pub fn crt_decompose(desc: &RingDescriptor) -> Vec<(RingDescriptor, Projection)> {
    let ring = Ring::new(desc.clone());
    ring.components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let d = match &desc.factors()[ring.factor_of[i]] {
                RingDescriptor::PrimeField(p) => RingDescriptor::PrimeField(*p),
                _ => component_descriptor(c),
            };
            (d, Projection { component: i })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimePoint {
    /// The zero ideal of a ℤ component.
    Generic,
    /// The ideal `(p)`. For a field component 𝔽_p this is its zero ideal.
    Maximal(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeIdeal {
    pub component: usize,
    pub point: PrimePoint,
}

impl PrimeIdeal {
    pub fn new(ring: &Ring, component: usize, point: PrimePoint) -> Result<Self, RingError> {
        let comp = *ring
            .components
            .get(component)
            .ok_or_else(|| RingError::NotAPrime(format!("no component {component}")))?;
        let ok = match (comp, point) {
            (Component::Integers, PrimePoint::Generic) => true,
            (Component::Integers, PrimePoint::Maximal(p)) => is_prime(p),
            (Component::PrimePower { p, .. }, PrimePoint::Maximal(q)) => p == q,
            (Component::PrimePower { .. }, PrimePoint::Generic) => false,
        };
        if ok {
            Ok(PrimeIdeal { component, point })
        } else {
            Err(RingError::NotAPrime(format!("{point:?} in component {comp}")))
        }
    }

    /// The unique prime of a finite local component.
    pub fn of_finite_component(ring: &Ring, component: usize) -> Self {
        let p = ring.components[component]
            .prime()
            .expect("finite component expected");
        PrimeIdeal {
            component,
            point: PrimePoint::Maximal(p),
        }
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.point {
            PrimePoint::Generic => write!(f, "(0)@{}", self.component),
            PrimePoint::Maximal(p) => write!(f, "({p})@{}", self.component),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentSpectrum {
    /// A finite local component: one point.
    Point(PrimeIdeal),
    /// Spec ℤ = {(0)} ∪ {(p)}; never materialized.
    Integers { component: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumDescription {
    pub components: Vec<ComponentSpectrum>,
}

impl SpectrumDescription {
    /// Every point of the spectrum, with ℤ components restricted to the generic
    /// point and the given candidate primes.
    pub fn points(&self, candidate_primes: &[u64]) -> Vec<PrimeIdeal> {
        let mut out = Vec::new();
        for c in &self.components {
            match *c {
                ComponentSpectrum::Point(p) => out.push(p),
                ComponentSpectrum::Integers { component } => {
                    out.push(PrimeIdeal {
                        component,
                        point: PrimePoint::Generic,
                    });
                    let mut ps: Vec<u64> =
                        candidate_primes.iter().copied().filter(|&p| is_prime(p)).collect();
                    ps.sort_unstable();
                    ps.dedup();
                    out.extend(ps.into_iter().map(|p| PrimeIdeal {
                        component,
                        point: PrimePoint::Maximal(p),
                    }));
                }
            }
        }
        out
    }

    /// `Some(points)` when the spectrum is finite.
    pub fn finite_points(&self) -> Option<Vec<PrimeIdeal>> {
        self.components
            .iter()
            .map(|c| match c {
                ComponentSpectrum::Point(p) => Some(*p),
                ComponentSpectrum::Integers { .. } => None,
            })
            .collect()
    }
}

pub fn enumerate_spec(ring: &Ring) -> SpectrumDescription {
    let components = ring
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| match c {
            Component::Integers => ComponentSpectrum::Integers { component: i },
            Component::PrimePower { .. } => {
                ComponentSpectrum::Point(PrimeIdeal::of_finite_component(ring, i))
            }
        })
        .collect();
    SpectrumDescription { components }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Prime(u64),
    Rationals,
}

/// κ(𝔭) with its reduction map from the component containing 𝔭.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidueField {
    pub prime: PrimeIdeal,
    pub field: FieldKind,
}

impl ResidueField {
    pub fn characteristic(&self) -> u64 {
        match self.field {
            FieldKind::Prime(p) => p,
            FieldKind::Rationals => 0,
        }
    }

    pub fn scalars(&self) -> Scalars {
        match self.field {
            FieldKind::Prime(p) => Scalars::Modular(p),
            FieldKind::Rationals => Scalars::Rationals,
        }
    }

    /// Reduction of a component value.
    pub fn reduce_value(&self, x: i128) -> i128 {
        self.scalars().reduce(x)
    }

    pub fn reduce(&self, ring: &Ring, elem: &RingElement) -> i128 {
        self.reduce_value(ring.project(elem)[self.prime.component])
    }
}

pub fn residue_field(ring: &Ring, prime: PrimeIdeal) -> ResidueField {
    let field = match (ring.components[prime.component], prime.point) {
        (_, PrimePoint::Maximal(p)) => FieldKind::Prime(p),
        (Component::Integers, PrimePoint::Generic) => FieldKind::Rationals,
        (c, PrimePoint::Generic) => panic!("component {c} has no generic point"),
    };
    ResidueField { prime, field }
}

/// A component-wise principal ideal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ideal {
    /// Canonical generator per CRT component: non-negative over ℤ, `p^j` or 0 over ℤ/p^k.
    #[serde(with = "crate::serde_int::vec")]
    pub generators: Vec<i128>,
}

impl Ideal {
    pub fn is_unit(&self) -> bool {
        self.generators.iter().all(|&g| g == 1)
    }
}

/// All ideals of a finite ring, lexicographic in (component, exponent).
pub fn enumerate_ideals(ring: &Ring) -> Result<Vec<Ideal>, RingError> {
    let mut per_component = Vec::new();
    for c in &ring.components {
        match *c {
            Component::Integers => return Err(RingError::InfiniteEnumeration),
            Component::PrimePower { p, k } => {
                let n = p.pow(k) as i128;
                per_component.push(
                    (0..=k)
                        .map(|j| (p as i128).pow(j) % n)
                        .collect::<Vec<_>>(),
                );
            }
        }
    }
    let mut out = vec![Vec::new()];
    for gens in per_component {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i128>| {
                gens.iter().map(move |&g| {
                    let mut v = prefix.clone();
                    v.push(g);
                    v
                })
            })
            .collect();
    }
    Ok(out.into_iter().map(|generators| Ideal { generators }).collect())
}

/// A subset of one connected component's spectrum.
///
/// Over ℤ only finite sets of maximal ideals and the whole spectrum occur:
/// supports of finitely generated modules and Thomason sets are of this shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentSubset {
    Local { prime: u64, included: bool },
    Integers { whole_spectrum: bool, primes: Vec<u64> },
}

impl ComponentSubset {
    pub fn whole_integers() -> Self {
        ComponentSubset::Integers {
            whole_spectrum: true,
            primes: Vec::new(),
        }
    }

    pub fn integer_primes(mut primes: Vec<u64>) -> Self {
        primes.sort_unstable();
        primes.dedup();
        ComponentSubset::Integers {
            whole_spectrum: false,
            primes,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            ComponentSubset::Local { included, .. } => !included,
            ComponentSubset::Integers {
                whole_spectrum,
                primes,
            } => !whole_spectrum && primes.is_empty(),
        }
    }

    pub fn contains(&self, point: PrimePoint) -> bool {
        match (self, point) {
            (ComponentSubset::Local { included, .. }, _) => *included,
            (ComponentSubset::Integers { whole_spectrum, .. }, PrimePoint::Generic) => {
                *whole_spectrum
            }
            (
                ComponentSubset::Integers {
                    whole_spectrum,
                    primes,
                },
                PrimePoint::Maximal(p),
            ) => *whole_spectrum || primes.binary_search(&p).is_ok(),
        }
    }

    pub fn union(&self, other: &ComponentSubset) -> ComponentSubset {
        match (self, other) {
            (
                ComponentSubset::Local { prime, included: a },
                ComponentSubset::Local { included: b, .. },
            ) => ComponentSubset::Local {
                prime: *prime,
                included: *a || *b,
            },
            (
                ComponentSubset::Integers {
                    whole_spectrum: wa,
                    primes: pa,
                },
                ComponentSubset::Integers {
                    whole_spectrum: wb,
                    primes: pb,
                },
            ) => {
                if *wa || *wb {
                    ComponentSubset::whole_integers()
                } else {
                    ComponentSubset::integer_primes(pa.iter().chain(pb).copied().collect())
                }
            }
            _ => panic!("union of subsets of different component kinds"),
        }
    }
}

/// A subset of Spec(R), one entry per CRT component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpecSubset {
    pub components: Vec<ComponentSubset>,
}

impl SpecSubset {
    pub fn empty(ring: &Ring) -> Self {
        let components = ring
            .components
            .iter()
            .map(|c| match *c {
                Component::Integers => ComponentSubset::integer_primes(Vec::new()),
                Component::PrimePower { p, .. } => ComponentSubset::Local {
                    prime: p,
                    included: false,
                },
            })
            .collect();
        SpecSubset { components }
    }

    pub fn is_empty(&self) -> bool {
        self.components.iter().all(ComponentSubset::is_empty)
    }

    pub fn contains(&self, prime: &PrimeIdeal) -> bool {
        self.components[prime.component].contains(prime.point)
    }
}

impl fmt::Display for SpecSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            match c {
                ComponentSubset::Local { prime, included: true } => parts.push(format!("({prime})@{i}")),
                ComponentSubset::Local { .. } => {}
                ComponentSubset::Integers { whole_spectrum: true, .. } => {
                    parts.push(format!("Spec Z@{i}"))
                }
                ComponentSubset::Integers { primes, .. } => {
                    parts.extend(primes.iter().map(|p| format!("({p})@{i}")))
                }
            }
        }
        if parts.is_empty() {
            write!(f, "{{}}")
        } else {
            write!(f, "{{{}}}", parts.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> RingDescriptor {
        RingDescriptor::ModularRing(n)
    }

    #[test]
    fn crt_decompose_examples() {
        let d: Vec<_> = crt_decompose(&z(6)).into_iter().map(|x| x.0).collect();
        assert_eq!(d, vec![z(2), z(3)]);
        let d: Vec<_> = crt_decompose(&RingDescriptor::Integers)
            .into_iter()
            .map(|x| x.0)
            .collect();
        assert_eq!(d, vec![RingDescriptor::Integers]);
        let r = RingDescriptor::product(vec![z(12), RingDescriptor::PrimeField(5)]).unwrap();
        let d: Vec<_> = crt_decompose(&r).into_iter().map(|x| x.0).collect();
        assert_eq!(d, vec![z(4), z(3), RingDescriptor::PrimeField(5)]);
    }

    #[test]
    fn crt_roundtrip_exhaustive() {
        let r = Ring::new(RingDescriptor::product(vec![z(12), z(10)]).unwrap());
        for e in r.elements().unwrap() {
            assert_eq!(r.recombine(&r.project(&e)), e);
        }
        let zr = Ring::new(RingDescriptor::product(vec![RingDescriptor::Integers, z(6)]).unwrap());
        for x in -20..20 {
            let e = zr.element(vec![x, x.rem_euclid(6)]);
            assert_eq!(zr.recombine(&zr.project(&e)), e);
        }
    }

    #[test]
    fn projections_are_ring_maps() {
        let r = Ring::zmod(12);
        let els = r.elements().unwrap();
        for a in &els {
            for b in &els {
                let (pa, pb) = (r.project(a), r.project(b));
                let ps = r.project(&r.add(a, b));
                let pm = r.project(&r.mul(a, b));
                for (c, comp) in r.components().iter().enumerate() {
                    let s = comp.scalars();
                    assert_eq!(ps[c], s.add(pa[c], pb[c]));
                    assert_eq!(pm[c], s.mul(pa[c], pb[c]));
                }
            }
        }
    }

    #[test]
    fn semantic_equality() {
        assert!(z(5).semantically_eq(&RingDescriptor::PrimeField(5)));
        assert_ne!(z(5), RingDescriptor::PrimeField(5));
        assert!(!z(4).semantically_eq(&z(2)));
        let prod = RingDescriptor::product(vec![z(2), z(3)]).unwrap();
        assert!(prod.semantically_eq(&z(6)));
    }

    #[test]
    fn product_flattens_and_json_schema() {
        let inner = RingDescriptor::product(vec![z(2), z(3)]).unwrap();
        let outer = RingDescriptor::product(vec![inner, RingDescriptor::Integers]).unwrap();
        assert_eq!(
            outer,
            RingDescriptor::Product(vec![z(2), z(3), RingDescriptor::Integers])
        );
        let parsed: RingDescriptor = serde_json::from_str(
            r#"{"kind":"product","factors":[{"kind":"Zmod","n":6},{"kind":"Fp","p":5},{"kind":"Z"}]}"#,
        )
        .unwrap();
        assert_eq!(
            parsed,
            RingDescriptor::Product(vec![z(6), RingDescriptor::PrimeField(5), RingDescriptor::Integers])
        );
        assert!(serde_json::from_str::<RingDescriptor>(r#"{"kind":"Fp","p":6}"#).is_err());
        assert!(serde_json::from_str::<RingDescriptor>(r#"{"kind":"Zmod","n":1}"#).is_err());
        let back = serde_json::to_string(&parsed).unwrap();
        assert_eq!(serde_json::from_str::<RingDescriptor>(&back).unwrap(), parsed);
    }

    #[test]
    fn spectrum_examples() {
        let s = enumerate_spec(&Ring::zmod(6));
        let pts = s.finite_points().unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].point, PrimePoint::Maximal(2));
        assert_eq!(pts[1].point, PrimePoint::Maximal(3));
        let f5 = Ring::new(RingDescriptor::PrimeField(5));
        assert_eq!(enumerate_spec(&f5).finite_points().unwrap().len(), 1);
        let zs = enumerate_spec(&Ring::integers());
        assert!(zs.finite_points().is_none());
        let pts = zs.points(&[4, 3, 2, 3]);
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[0].point, PrimePoint::Generic);
    }

    #[test]
    fn residue_field_examples() {
        let z4 = Ring::zmod(4);
        let k = residue_field(&z4, PrimeIdeal::of_finite_component(&z4, 0));
        assert_eq!(k.field, FieldKind::Prime(2));
        assert_eq!(k.reduce(&z4, &z4.from_integer(3)), 1);

        let zz = Ring::integers();
        let k = residue_field(&zz, PrimeIdeal::new(&zz, 0, PrimePoint::Generic).unwrap());
        assert_eq!(k.field, FieldKind::Rationals);
        assert_eq!(k.characteristic(), 0);
        assert_eq!(k.reduce(&zz, &zz.from_integer(6)), 6);

        // ℤ/6 at the prime of the ℤ/3 component: the quotient by the kernel
        // of reduction has three classes.
        let z6 = Ring::zmod(6);
        let k = residue_field(&z6, PrimeIdeal::of_finite_component(&z6, 1));
        assert_eq!(k.field, FieldKind::Prime(3));
        let els = z6.elements().unwrap();
        let kernel: Vec<_> = els.iter().filter(|e| k.reduce(&z6, e) == 0).collect();
        assert_eq!(kernel.iter().map(|e| e.values[0]).collect::<Vec<_>>(), vec![0, 3]);
        let mut classes: Vec<i128> = els.iter().map(|e| e.values[0] % 3).collect();
        classes.sort();
        classes.dedup();
        assert_eq!(els.len() / kernel.len(), 3);
        assert_eq!(classes.len(), 3);
    }

    #[test]
    fn residue_reduction_is_a_ring_map_with_prime_kernel() {
        for n in [4u64, 6, 12, 9, 2] {
            let r = Ring::zmod(n);
            let els = r.elements().unwrap();
            for pt in enumerate_spec(&r).finite_points().unwrap() {
                let k = residue_field(&r, pt);
                let s = k.scalars();
                for a in &els {
                    for b in &els {
                        assert_eq!(k.reduce(&r, &r.add(a, b)), s.add(k.reduce(&r, a), k.reduce(&r, b)));
                        assert_eq!(k.reduce(&r, &r.mul(a, b)), s.mul(k.reduce(&r, a), k.reduce(&r, b)));
                    }
                    // kernel = the prime: component value divisible by p
                    let p = k.characteristic() as i128;
                    let in_prime = r.project(a)[pt.component] % p == 0;
                    assert_eq!(k.reduce(&r, a) == 0, in_prime);
                }
            }
        }
        let zz = Ring::integers();
        for pt in enumerate_spec(&zz).points(&[2, 3, 5, 7]) {
            let k = residue_field(&zz, pt);
            let s = k.scalars();
            for x in -15i128..15 {
                for y in -15i128..15 {
                    let (a, b) = (zz.from_integer(x), zz.from_integer(y));
                    assert_eq!(k.reduce(&zz, &zz.mul(&a, &b)), s.mul(k.reduce(&zz, &a), k.reduce(&zz, &b)));
                    assert_eq!(k.reduce(&zz, &zz.add(&a, &b)), s.add(k.reduce(&zz, &a), k.reduce(&zz, &b)));
                }
                let in_prime = match pt.point {
                    PrimePoint::Generic => x == 0,
                    PrimePoint::Maximal(p) => x % p as i128 == 0,
                };
                assert_eq!(k.reduce(&zz, &zz.from_integer(x)) == 0, in_prime);
            }
        }
    }

    #[test]
    fn enumerate_ideals_examples() {
        let z4 = Ring::zmod(4);
        let ideals = enumerate_ideals(&z4).unwrap();
        let gens: Vec<_> = ideals.iter().map(|i| z4.ideal_factor_generators(i)[0]).collect();
        assert_eq!(gens, vec![1, 2, 0]);

        let z6 = Ring::zmod(6);
        let mut gens: Vec<_> = enumerate_ideals(&z6)
            .unwrap()
            .iter()
            .map(|i| z6.ideal_factor_generators(i)[0])
            .collect();
        gens.sort();
        assert_eq!(gens, vec![0, 1, 2, 3]);

        assert_eq!(
            enumerate_ideals(&Ring::integers()),
            Err(RingError::InfiniteEnumeration)
        );
    }

    /// Oracle: ideals of ℤ/n as additive subgroups closed under multiplication.
    fn brute_force_ideal_count(n: u64) -> usize {
        let n = n as i128;
        let mut sets = std::collections::BTreeSet::new();
        for g in 0..n {
            let set: std::collections::BTreeSet<i128> = (0..n).map(|r| (r * g) % n).collect();
            sets.insert(set);
        }
        sets.len()
    }

    #[test]
    fn ideal_enumeration_matches_subgroup_enumeration() {
        for n in [2u64, 4, 6, 8, 12, 30, 36] {
            assert_eq!(
                enumerate_ideals(&Ring::zmod(n)).unwrap().len(),
                brute_force_ideal_count(n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn ideal_lattice_closed_under_sum_and_product() {
        for desc in [
            z(4),
            z(12),
            RingDescriptor::product(vec![z(2), z(2)]).unwrap(),
            z(8),
        ] {
            let r = Ring::new(desc);
            let ideals = enumerate_ideals(&r).unwrap();
            for a in &ideals {
                for b in &ideals {
                    assert!(ideals.contains(&r.ideal_sum(a, b)));
                    assert!(ideals.contains(&r.ideal_product(a, b)));
                    assert!(r.ideal_contained_in(&r.ideal_product(a, b), a));
                    assert!(r.ideal_contained_in(a, &r.ideal_sum(a, b)));
                }
            }
        }
    }

    #[test]
    fn ideal_generated_by_uses_gcd() {
        let z = Ring::integers();
        let i = z.ideal_generated_by(&[z.from_integer(12), z.from_integer(-18)]);
        assert_eq!(i.generators, vec![6]);
        let r = Ring::zmod(12);
        let i = r.ideal_generated_by(&[r.from_integer(8)]);
        assert_eq!(r.ideal_factor_generators(&i), vec![4]);
        let i = r.ideal_generated_by(&[r.from_integer(9)]);
        assert_eq!(r.ideal_factor_generators(&i), vec![3]);
    }
}
