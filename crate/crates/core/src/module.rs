//! Finitely presented modules, 2-term complexes of free modules, and the
//! functors used by the decision procedures: Hom, tensor, defect, trace.
//!
//! A module over a catalog ring is stored component by component. On each
//! connected component it is `R^g / column-span(Q)` for a `g × r` relation
//! matrix `Q`.

use serde::{Deserialize, Serialize};

use crate::error::ModuleError;
use crate::hom::RingHomomorphism;
use crate::linalg::{kernel_generators, smith_normal_form, solve_linear, Matrix, SnfResult};
use crate::ring::{
    Component, ComponentSubset, Ideal, Ring, Scalars, SpecSubset,
};

/// `R^generators / column-span(relations)` over one connected component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: usize,
    relations: Matrix,
}

impl Presentation {
    pub fn new(generators: usize, relations: Matrix) -> Result<Self, ModuleError> {
        if relations.rows() != generators {
            return Err(ModuleError::Malformed(format!(
                "relation matrix has {} rows for {} generators",
                relations.rows(),
                generators
            )));
        }
        Ok(Presentation {
            generators,
            relations,
        })
    }

    pub fn free(scalars: Scalars, rank: usize) -> Self {
        Presentation {
            generators: rank,
            relations: Matrix::zeros(scalars, rank, 0),
        }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    fn snf(&self) -> SnfResult {
        smith_normal_form(&self.relations).expect("component scalars admit SNF")
    }

    /// Cyclic orders `a_i`, one per generator, in SNF coordinates.
    fn cyclic_orders(snf: &SnfResult, generators: usize) -> Vec<i128> {
        (0..generators)
            .map(|i| snf.invariant_factors.get(i).copied().unwrap_or(0))
            .collect()
    }

    pub fn decomposition(&self) -> CyclicDecomposition {
        let snf = self.snf();
        let mut torsion = Vec::new();
        let mut free_rank = 0;
        for a in Self::cyclic_orders(&snf, self.generators) {
            match a {
                0 => free_rank += 1,
                1 => {}
                a => torsion.push(a),
            }
        }
        CyclicDecomposition { torsion, free_rank }
    }
}

/// `⊕ R/(d_i) ⊕ R^free_rank` with `d_1 | d_2 | …` proper and nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicDecomposition {
    #[serde(with = "crate::serde_int::vec")]
    pub torsion: Vec<i128>,
    pub free_rank: usize,
}

impl CyclicDecomposition {
    pub fn is_zero(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }
}

/// Isomorphism invariant of a module: one cyclic decomposition per component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub components: Vec<CyclicDecomposition>,
}

impl CanonicalForm {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(CyclicDecomposition::is_zero)
    }
}

#[derive(Clone, Debug)]
pub struct FpModule {
    ring: Ring,
    parts: Vec<Presentation>,
}

impl FpModule {
    pub fn new(ring: Ring, parts: Vec<Presentation>) -> Result<Self, ModuleError> {
        if parts.len() != ring.num_components() {
            return Err(ModuleError::Malformed(format!(
                "{} component presentations for a ring with {} components",
                parts.len(),
                ring.num_components()
            )));
        }
        let parts = parts
            .into_iter()
            .zip(ring.components())
            .map(|(p, c)| {
                let relations = p.relations.reduce_into(c.scalars());
                Presentation { relations, ..p }
            })
            .collect();
        Ok(FpModule { ring, parts })
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::free_ranks(ring, &vec![0; ring.num_components()])
    }

    /// `R^rank`.
    pub fn free(ring: &Ring, rank: usize) -> Self {
        Self::free_ranks(ring, &vec![rank; ring.num_components()])
    }

    /// A projective module with the given free rank on each component.
    pub fn free_ranks(ring: &Ring, ranks: &[usize]) -> Self {
        assert_eq!(ranks.len(), ring.num_components());
        let parts = ring
            .components()
            .iter()
            .zip(ranks)
            .map(|(c, &r)| Presentation::free(c.scalars(), r))
            .collect();
        FpModule {
            ring: ring.clone(),
            parts,
        }
    }

    /// `R/I`.
    pub fn cyclic(ring: &Ring, ideal: &Ideal) -> Self {
        let parts = ring
            .components()
            .iter()
            .zip(&ideal.generators)
            .map(|(c, &g)| Presentation {
                generators: 1,
                relations: Matrix::new(c.scalars(), 1, 1, vec![g]),
            })
            .collect();
        FpModule {
            ring: ring.clone(),
            parts,
        }
    }

    /// The direct sum of cyclic modules `R/(d)` given per component as lists
    /// of component elements `d` (0 gives a free summand).
    pub fn from_cyclic_orders(ring: &Ring, orders: &[Vec<i128>]) -> Self {
        assert_eq!(orders.len(), ring.num_components());
        let parts = ring
            .components()
            .iter()
            .zip(orders)
            .map(|(c, ds)| {
                let g = ds.len();
                let mut q = Matrix::zeros(c.scalars(), g, g);
                for (i, &d) in ds.iter().enumerate() {
                    q.set(i, i, d);
                }
                Presentation {
                    generators: g,
                    relations: q,
                }
            })
            .collect();
        FpModule {
            ring: ring.clone(),
            parts,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn parts(&self) -> &[Presentation] {
        &self.parts
    }

    pub fn part(&self, c: usize) -> &Presentation {
        &self.parts[c]
    }

    pub fn canonical(&self) -> CanonicalForm {
        CanonicalForm {
            components: self.parts.iter().map(Presentation::decomposition).collect(),
        }
    }

    /// An SNF-diagonal presentation of the same module.
    pub fn canonicalized(&self) -> FpModule {
        let orders: Vec<Vec<i128>> = self
            .canonical()
            .components
            .iter()
            .map(|d| {
                d.torsion
                    .iter()
                    .copied()
                    .chain(std::iter::repeat_n(0, d.free_rank))
                    .collect()
            })
            .collect();
        FpModule::from_cyclic_orders(&self.ring, &orders)
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().is_zero()
    }

    pub fn is_isomorphic(&self, other: &FpModule) -> bool {
        self.ring == other.ring && self.canonical() == other.canonical()
    }

    pub fn direct_sum(&self, other: &FpModule) -> Result<FpModule, ModuleError> {
        same_ring(&self.ring, &other.ring)?;
        let parts = self
            .parts
            .iter()
            .zip(&other.parts)
            .map(|(a, b)| Presentation {
                generators: a.generators + b.generators,
                relations: a.relations.block_diag(&b.relations),
            })
            .collect();
        Ok(FpModule {
            ring: self.ring.clone(),
            parts,
        })
    }

    /// `X^k`.
    pub fn power(&self, k: usize) -> FpModule {
        let parts = self
            .parts
            .iter()
            .map(|p| Presentation {
                generators: p.generators * k,
                relations: Matrix::identity(p.relations.scalars(), k).kron(&p.relations),
            })
            .collect();
        FpModule {
            ring: self.ring.clone(),
            parts,
        }
    }

    /// The quotient of `self` by the submodule generated by the given columns.
    pub fn quotient(&self, generators: &[Matrix]) -> FpModule {
        let parts = self
            .parts
            .iter()
            .zip(generators)
            .map(|(p, g)| Presentation {
                generators: p.generators,
                relations: p.relations.hstack(g),
            })
            .collect();
        FpModule {
            ring: self.ring.clone(),
            parts,
        }
    }

    /// Whether each column of `vectors[c]` (coordinates on the generators)
    /// is zero in the module.
    pub fn vectors_vanish(&self, vectors: &[Matrix]) -> bool {
        self.parts.iter().zip(vectors).all(|(p, v)| {
            v.columns().iter().all(|col| {
                solve_linear(&p.relations, col)
                    .expect("dimensions agree")
                    .is_some()
            })
        })
    }
}

fn same_ring(a: &Ring, b: &Ring) -> Result<(), ModuleError> {
    if a == b {
        Ok(())
    } else {
        Err(ModuleError::RingMismatch {
            left: a.descriptor().to_string(),
            right: b.descriptor().to_string(),
        })
    }
}

/// σ: P⁻¹ → P⁰ between finitely generated projectives, one `n_c × m_c`
/// matrix per connected component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTermComplex {
    ring: Ring,
    parts: Vec<Matrix>,
}

impl TwoTermComplex {
    pub fn new(ring: Ring, parts: Vec<Matrix>) -> Result<Self, ModuleError> {
        if parts.len() != ring.num_components() {
            return Err(ModuleError::Malformed(format!(
                "{} component matrices for a ring with {} components",
                parts.len(),
                ring.num_components()
            )));
        }
        let parts = parts
            .into_iter()
            .zip(ring.components())
            .map(|(m, c)| m.reduce_into(c.scalars()))
            .collect();
        Ok(TwoTermComplex { ring, parts })
    }

    /// The same integer matrix (rows = rank of P⁰) on every component.
    pub fn uniform(ring: &Ring, rows: &[Vec<i128>], cols: usize) -> Self {
        let parts = ring
            .components()
            .iter()
            .map(|c| Matrix::from_rows(c.scalars(), rows, cols))
            .collect();
        TwoTermComplex {
            ring: ring.clone(),
            parts,
        }
    }

    pub fn identity(ring: &Ring, rank: usize) -> Self {
        let parts = ring
            .components()
            .iter()
            .map(|c| Matrix::identity(c.scalars(), rank))
            .collect();
        TwoTermComplex {
            ring: ring.clone(),
            parts,
        }
    }

    /// `0 → R^rank`.
    pub fn zero_to_free(ring: &Ring, rank: usize) -> Self {
        let parts = ring
            .components()
            .iter()
            .map(|c| Matrix::zeros(c.scalars(), rank, 0))
            .collect();
        TwoTermComplex {
            ring: ring.clone(),
            parts,
        }
    }

    /// `R^rank → 0`.
    pub fn free_to_zero(ring: &Ring, rank: usize) -> Self {
        let parts = ring
            .components()
            .iter()
            .map(|c| Matrix::zeros(c.scalars(), 0, rank))
            .collect();
        TwoTermComplex {
            ring: ring.clone(),
            parts,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn parts(&self) -> &[Matrix] {
        &self.parts
    }

    pub fn part(&self, c: usize) -> &Matrix {
        &self.parts[c]
    }

    /// Rank of P⁻¹ on component `c`.
    pub fn source_rank(&self, c: usize) -> usize {
        self.parts[c].cols()
    }

    /// Rank of P⁰ on component `c`.
    pub fn target_rank(&self, c: usize) -> usize {
        self.parts[c].rows()
    }

    /// `U·σ·V` on every component, for invertible `U`, `V`.
    pub fn change_basis(&self, u: &[Matrix], v: &[Matrix]) -> TwoTermComplex {
        let parts = self
            .parts
            .iter()
            .zip(u.iter().zip(v))
            .map(|(s, (u, v))| u.mul(s).mul(v))
            .collect();
        TwoTermComplex {
            ring: self.ring.clone(),
            parts,
        }
    }
}

/// A homomorphism of presented modules, given on generators.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: FpModule,
    pub target: FpModule,
    /// Per component: `target generators × source generators`.
    pub parts: Vec<Matrix>,
}

impl ModuleMap {
    pub fn new(source: FpModule, target: FpModule, parts: Vec<Matrix>) -> Result<Self, ModuleError> {
        same_ring(&source.ring, &target.ring)?;
        for (c, m) in parts.iter().enumerate() {
            if m.rows() != target.parts[c].generators || m.cols() != source.parts[c].generators {
                return Err(ModuleError::Malformed(format!(
                    "map matrix on component {c} is {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(ModuleMap {
            source,
            target,
            parts,
        })
    }

    /// Relations of the source are sent to zero in the target.
    pub fn is_well_defined(&self) -> bool {
        let images: Vec<Matrix> = self
            .parts
            .iter()
            .zip(&self.source.parts)
            .map(|(f, p)| f.mul(&p.relations))
            .collect();
        self.target.vectors_vanish(&images)
    }

    pub fn is_injective(&self) -> bool {
        self.parts.iter().enumerate().all(|(c, f)| {
            let src = &self.source.parts[c];
            let tgt = &self.target.parts[c];
            if src.generators == 0 {
                return true;
            }
            // x ↦ F x lands in im(Q_t) iff (x, y) ∈ ker [F | Q_t]
            let k = kernel_generators(&f.hstack(&tgt.relations)).expect("component scalars");
            k.columns().iter().all(|col| {
                solve_linear(&src.relations, &col[..src.generators])
                    .expect("dimensions agree")
                    .is_some()
            })
        })
    }

    pub fn cokernel(&self) -> FpModule {
        self.target.quotient(&self.parts)
    }

    pub fn image_generators(&self) -> &[Matrix] {
        &self.parts
    }
}

/// `T = Coker(σ)`.
pub fn cokernel(sigma: &TwoTermComplex) -> FpModule {
    let parts = sigma
        .parts
        .iter()
        .map(|m| Presentation {
            generators: m.rows(),
            relations: m.clone(),
        })
        .collect();
    FpModule {
        ring: sigma.ring.clone(),
        parts,
    }
}

/// A generating set of `Hom_R(M, N)`.
#[derive(Clone, Debug)]
pub struct HomSet {
    pub generators: Vec<ModuleMap>,
}

impl HomSet {
    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Generator of `Hom(R/(a), R/(b))` as multiplication by a scalar, if nonzero.
fn cyclic_hom_generator(comp: Component, a: i128, b: i128) -> Option<i128> {
    if a == 1 || b == 1 {
        return None;
    }
    match comp {
        Component::Integers => match (a, b) {
            (0, _) => Some(1),
            (_, 0) => None,
            (a, b) => {
                let c = b / crate::arith::gcd(a, b);
                (c != b).then_some(c)
            }
        },
        Component::PrimePower { .. } => {
            let (a, b) = (comp.order_like(a), comp.order_like(b));
            let c = b / crate::arith::gcd(a, b);
            (c != b).then_some(c)
        }
    }
}

pub fn hom_set(m: &FpModule, n: &FpModule) -> Result<HomSet, ModuleError> {
    same_ring(&m.ring, &n.ring)?;
    let mut generators = Vec::new();
    for (c, comp) in m.ring.components().iter().enumerate() {
        let (pm, pn) = (&m.parts[c], &n.parts[c]);
        let (sm, sn) = (pm.snf(), pn.snf());
        let am = Presentation::cyclic_orders(&sm, pm.generators);
        let bn = Presentation::cyclic_orders(&sn, pn.generators);
        for (i, &a) in am.iter().enumerate() {
            for (j, &b) in bn.iter().enumerate() {
                let Some(scalar) = cyclic_hom_generator(*comp, a, b) else {
                    continue;
                };
                // canonical coordinates: y = U_M x on M, z = U_N w on N
                let s = comp.scalars();
                let mut h = Matrix::zeros(s, pn.generators, pm.generators);
                h.set(j, i, scalar);
                let f = sn.u_inv.mul(&h).mul(&sm.u);
                let parts = m
                    .ring
                    .components()
                    .iter()
                    .enumerate()
                    .map(|(d, dc)| {
                        if d == c {
                            f.clone()
                        } else {
                            Matrix::zeros(dc.scalars(), n.parts[d].generators, m.parts[d].generators)
                        }
                    })
                    .collect();
                generators.push(ModuleMap {
                    source: m.clone(),
                    target: n.clone(),
                    parts,
                });
            }
        }
    }
    Ok(HomSet { generators })
}

/// `Def_σ(X) = Coker(Hom(σ, X))`, with the induced map `X^n → X^m`.
#[derive(Clone, Debug)]
pub struct Defect {
    pub module: FpModule,
    pub vanishes: bool,
}

pub fn defect(sigma: &TwoTermComplex, x: &FpModule) -> Result<Defect, ModuleError> {
    same_ring(&sigma.ring, &x.ring)?;
    let parts = sigma
        .parts
        .iter()
        .zip(&x.parts)
        .map(|(s, p)| {
            let (m, g) = (s.cols(), p.generators);
            let scal = s.scalars();
            // Hom(P⁰, X) = X^n → X^m = Hom(P⁻¹, X), f ↦ f∘σ, i.e. σᵀ on coordinates
            let induced = s.transpose().kron(&Matrix::identity(scal, g));
            let relations = Matrix::identity(scal, m).kron(&p.relations).hstack(&induced);
            Presentation {
                generators: m * g,
                relations,
            }
        })
        .collect();
    let module = FpModule {
        ring: x.ring.clone(),
        parts,
    };
    let vanishes = module.is_zero();
    Ok(Defect { module, vanishes })
}

/// `X ∈ D_σ`.
pub fn in_d_sigma(sigma: &TwoTermComplex, x: &FpModule) -> Result<bool, ModuleError> {
    Ok(defect(sigma, x)?.vanishes)
}

/// The trace of `T` in `X` and whether it is all of `X`.
#[derive(Clone, Debug)]
pub struct TraceReport {
    /// Per component: columns generating the trace, in `X`'s generator coordinates.
    pub trace: Vec<Matrix>,
    pub in_gen: bool,
}

pub fn trace_and_gen(t: &FpModule, x: &FpModule) -> Result<TraceReport, ModuleError> {
    let homs = hom_set(t, x)?;
    let trace: Vec<Matrix> = x
        .ring
        .components()
        .iter()
        .enumerate()
        .map(|(c, comp)| {
            let h = x.parts[c].generators;
            homs.generators
                .iter()
                .map(|f| f.parts[c].clone())
                .fold(Matrix::zeros(comp.scalars(), h, 0), |acc, f| acc.hstack(&f))
        })
        .collect();
    let in_gen = x.quotient(&trace).is_zero();
    Ok(TraceReport { trace, in_gen })
}

/// `X ∈ Gen(T)`.
pub fn in_gen(t: &FpModule, x: &FpModule) -> Result<bool, ModuleError> {
    Ok(trace_and_gen(t, x)?.in_gen)
}

pub fn tensor_modules(m: &FpModule, n: &FpModule) -> Result<FpModule, ModuleError> {
    same_ring(&m.ring, &n.ring)?;
    let parts = m
        .parts
        .iter()
        .zip(&n.parts)
        .map(|(a, b)| {
            let s = a.relations.scalars();
            let left = a.relations.kron(&Matrix::identity(s, b.generators));
            let right = Matrix::identity(s, a.generators).kron(&b.relations);
            Presentation {
                generators: a.generators * b.generators,
                relations: left.hstack(&right),
            }
        })
        .collect();
    Ok(FpModule {
        ring: m.ring.clone(),
        parts,
    })
}

/// The map `σ ⊗ M : M^m → M^n`.
pub fn sigma_tensor(sigma: &TwoTermComplex, module: &FpModule) -> Result<ModuleMap, ModuleError> {
    same_ring(&sigma.ring, &module.ring)?;
    let m_ranks: Vec<usize> = sigma.parts.iter().map(Matrix::cols).collect();
    let n_ranks: Vec<usize> = sigma.parts.iter().map(Matrix::rows).collect();
    let power = |ranks: &[usize]| {
        let parts = module
            .parts
            .iter()
            .zip(ranks)
            .map(|(p, &k)| Presentation {
                generators: p.generators * k,
                relations: Matrix::identity(p.relations.scalars(), k).kron(&p.relations),
            })
            .collect();
        FpModule {
            ring: module.ring.clone(),
            parts,
        }
    };
    let parts = sigma
        .parts
        .iter()
        .zip(&module.parts)
        .map(|(s, p)| s.kron(&Matrix::identity(s.scalars(), p.generators)))
        .collect();
    Ok(ModuleMap {
        source: power(&m_ranks),
        target: power(&n_ranks),
        parts,
    })
}

/// `M ∈ T_σ`: `σ ⊗ M` is a monomorphism.
pub fn in_t_sigma(sigma: &TwoTermComplex, module: &FpModule) -> Result<bool, ModuleError> {
    Ok(sigma_tensor(sigma, module)?.is_injective())
}

/// `supp(M) = {𝔭 : M ⊗ κ(𝔭) ≠ 0}`.
pub fn support(module: &FpModule) -> SpecSubset {
    let components = module
        .ring
        .components()
        .iter()
        .zip(module.canonical().components)
        .map(|(comp, d)| match *comp {
            Component::PrimePower { p, .. } => ComponentSubset::Local {
                prime: p,
                included: !d.is_zero(),
            },
            Component::Integers => {
                if d.free_rank > 0 {
                    ComponentSubset::whole_integers()
                } else {
                    let top = d.torsion.last().copied().unwrap_or(1);
                    ComponentSubset::integer_primes(crate::arith::prime_divisors(top))
                }
            }
        })
        .collect();
    SpecSubset { components }
}

/// `λ⋆ N`: an `S`-module viewed as an `R`-module through λ.
pub fn restrict_scalars(
    lambda: &RingHomomorphism,
    module: &FpModule,
) -> Result<FpModule, ModuleError> {
    same_ring(lambda.target(), &module.ring)?;
    let source = lambda.source();
    let parts = source
        .components()
        .iter()
        .enumerate()
        .map(|(c, comp)| {
            let s = comp.scalars();
            let mut acc = Presentation::free(s, 0);
            for t in lambda.targets_over(c) {
                let tcomp = lambda.target().component(t);
                let p = &module.parts[t];
                let lifted = p.relations.reduce_into(s);
                let relations = match tcomp.modulus() {
                    Some(q) if comp.modulus() != Some(q) => lifted
                        .hstack(&Matrix::identity(s, p.generators).scale(q as i128)),
                    Some(_) | None => lifted,
                };
                acc = Presentation {
                    generators: acc.generators + p.generators,
                    relations: acc.relations.block_diag(&relations),
                };
            }
            acc
        })
        .collect();
    Ok(FpModule {
        ring: source.clone(),
        parts,
    })
}

/// `N ⊗_R S`.
pub fn base_change_module(
    lambda: &RingHomomorphism,
    module: &FpModule,
) -> Result<FpModule, ModuleError> {
    same_ring(lambda.source(), &module.ring)?;
    let target = lambda.target();
    let parts = target
        .components()
        .iter()
        .enumerate()
        .map(|(t, comp)| {
            let p = &module.parts[lambda.source_component(t)];
            Presentation {
                generators: p.generators,
                relations: p.relations.reduce_into(comp.scalars()),
            }
        })
        .collect();
    Ok(FpModule {
        ring: target.clone(),
        parts,
    })
}

/// `f ⊗_R S` for a module map.
pub fn base_change_map(lambda: &RingHomomorphism, map: &ModuleMap) -> Result<ModuleMap, ModuleError> {
    let source = base_change_module(lambda, &map.source)?;
    let target = base_change_module(lambda, &map.target)?;
    let parts = lambda
        .target()
        .components()
        .iter()
        .enumerate()
        .map(|(t, comp)| map.parts[lambda.source_component(t)].reduce_into(comp.scalars()))
        .collect();
    Ok(ModuleMap {
        source,
        target,
        parts,
    })
}
