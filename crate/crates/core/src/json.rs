//! JSON input schemas: rings, complexes, modules and homomorphisms.

use serde::{Deserialize, Serialize};

use crate::error::InputError;
use crate::hom::RingHomomorphism;
use crate::linalg::Matrix;
use crate::module::{FpModule, Presentation, TwoTermComplex};
use crate::ring::{Ring, RingDescriptor};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexComponentJson {
    pub m: usize,
    pub n: usize,
    /// `n` rows of length `m`; may be empty when `m` or `n` is 0.
    #[serde(default)]
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub components: Vec<ComplexComponentJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationJson {
    pub generators: usize,
    /// Relation columns, each of length `generators`.
    #[serde(default)]
    pub relations: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModuleJson {
    PerComponent { components: Vec<PresentationJson> },
    Single(PresentationJson),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HomJson {
    Identity,
    Quotient {
        #[serde(default)]
        source: Option<RingDescriptor>,
        target: RingDescriptor,
    },
    Diagonal {
        copies: usize,
    },
    Projection {
        keep: Vec<usize>,
    },
    Crt,
    Composite {
        steps: Vec<HomJson>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputJson {
    pub ring: RingDescriptor,
    #[serde(default)]
    pub complex: Option<ComplexJson>,
    #[serde(default)]
    pub hom: Option<HomJson>,
    #[serde(default)]
    pub modules: Vec<ModuleJson>,
}

/// A parsed and validated input file.
#[derive(Clone, Debug)]
pub struct Input {
    pub ring: Ring,
    pub complex: Option<TwoTermComplex>,
    pub hom: Option<RingHomomorphism>,
    pub modules: Vec<FpModule>,
}

fn field(field: impl Into<String>, message: impl Into<String>) -> InputError {
    InputError::Field {
        field: field.into(),
        message: message.into(),
    }
}

fn grid(path: &str, rows: &[Vec<i64>], n: usize, m: usize) -> Result<Vec<Vec<i128>>, InputError> {
    if rows.is_empty() && (n == 0 || m == 0) {
        return Ok(vec![Vec::new(); n]);
    }
    if rows.len() != n {
        return Err(field(path, format!("expected {n} rows, found {}", rows.len())));
    }
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            if r.len() != m {
                Err(field(format!("{path}[{i}]"), format!("expected {m} entries, found {}", r.len())))
            } else {
                Ok(r.iter().map(|&x| i128::from(x)).collect())
            }
        })
        .collect()
}

pub fn complex_from_json(ring: &Ring, json: &ComplexJson) -> Result<TwoTermComplex, InputError> {
    if json.components.len() != ring.num_components() {
        return Err(field(
            "complex.components",
            format!(
                "{} has {} connected components, found {} entries",
                ring.descriptor(),
                ring.num_components(),
                json.components.len()
            ),
        ));
    }
    let parts = json
        .components
        .iter()
        .zip(ring.components())
        .enumerate()
        .map(|(c, (j, comp))| {
            let rows = grid(&format!("complex.components[{c}].matrix"), &j.matrix, j.n, j.m)?;
            Ok(Matrix::from_rows(comp.scalars(), &rows, j.m))
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    TwoTermComplex::new(ring.clone(), parts).map_err(|e| field("complex", e.to_string()))
}

pub fn complex_to_json(sigma: &TwoTermComplex) -> ComplexJson {
    ComplexJson {
        components: sigma
            .parts()
            .iter()
            .map(|m| ComplexComponentJson {
                m: m.cols(),
                n: m.rows(),
                matrix: m
                    .to_rows()
                    .into_iter()
                    .map(|r| r.into_iter().map(|x| x as i64).collect())
                    .collect(),
            })
            .collect(),
    }
}

pub fn module_from_json(ring: &Ring, json: &ModuleJson, path: &str) -> Result<FpModule, InputError> {
    let comps: &[PresentationJson] = match json {
        ModuleJson::PerComponent { components } => components,
        ModuleJson::Single(p) => std::slice::from_ref(p),
    };
    if comps.len() != ring.num_components() {
        return Err(field(
            path,
            format!(
                "{} connected components, found {} presentations",
                ring.num_components(),
                comps.len()
            ),
        ));
    }
    let parts = comps
        .iter()
        .zip(ring.components())
        .enumerate()
        .map(|(c, (p, comp))| {
            let cols = grid(&format!("{path}[{c}].relations"), &p.relations, p.relations.len(), p.generators)?;
            let m = Matrix::from_columns(comp.scalars(), p.generators, &cols);
            Presentation::new(p.generators, m).map_err(|e| field(path, e.to_string()))
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    FpModule::new(ring.clone(), parts).map_err(|e| field(path, e.to_string()))
}

pub fn hom_from_json(source: &Ring, json: &HomJson, path: &str) -> Result<RingHomomorphism, InputError> {
    let err = |e: crate::error::HomError| field(path, e.to_string());
    match json {
        HomJson::Identity => Ok(RingHomomorphism::identity(source)),
        HomJson::Quotient { source: s, target } => {
            if let Some(s) = s {
                if !s.semantically_eq(source.descriptor()) {
                    return Err(field(
                        format!("{path}.source"),
                        format!("{s} does not match the input ring {}", source.descriptor()),
                    ));
                }
            }
            RingHomomorphism::quotient(source.descriptor(), target).map_err(err)
        }
        HomJson::Diagonal { copies } => RingHomomorphism::diagonal(source, *copies).map_err(err),
        HomJson::Projection { keep } => RingHomomorphism::projection(source, keep).map_err(err),
        HomJson::Crt => Ok(RingHomomorphism::crt(source)),
        HomJson::Composite { steps } => {
            let mut acc = RingHomomorphism::identity(source);
            for (i, s) in steps.iter().enumerate() {
                let step = hom_from_json(acc.target(), s, &format!("{path}.steps[{i}]"))?;
                acc = if i == 0 { step } else { acc.then(&step).map_err(err)? };
            }
            Ok(acc)
        }
    }
}

pub fn parse_input(text: &str) -> Result<Input, InputError> {
    let raw: InputJson = serde_json::from_str(text)?;
    let ring = Ring::new(raw.ring);
    let complex = raw
        .complex
        .as_ref()
        .map(|c| complex_from_json(&ring, c))
        .transpose()?;
    let hom = raw.hom.as_ref().map(|h| hom_from_json(&ring, h, "hom")).transpose()?;
    let modules = raw
        .modules
        .iter()
        .enumerate()
        .map(|(i, m)| module_from_json(&ring, m, &format!("modules[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Input {
        ring,
        complex,
        hom,
        modules,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::HomKind;

    #[test]
    fn parses_a_full_input() {
        let text = r#"{
            "ring": {"kind": "Zmod", "n": 6},
            "complex": {"components": [{"m": 0, "n": 1, "matrix": []},
                                       {"m": 1, "n": 1, "matrix": [[1]]}]},
            "hom": {"kind": "projection", "keep": [0]},
            "modules": [{"components": [{"generators": 1, "relations": [[0]]},
                                        {"generators": 1, "relations": [[1]]}]}]
        }"#;
        let input = parse_input(text).unwrap();
        let sigma = input.complex.unwrap();
        assert_eq!(sigma.source_rank(0), 0);
        assert_eq!(sigma.target_rank(0), 1);
        assert_eq!(complex_to_json(&sigma).components[1].matrix, vec![vec![1]]);
        assert!(matches!(input.hom.unwrap().kind(), HomKind::ComponentProjection { .. }));
        let m = &input.modules[0];
        assert!(m.is_isomorphic(&FpModule::from_cyclic_orders(&input.ring, &[vec![0], vec![]])));
    }

    #[test]
    fn single_component_module_shorthand() {
        let text = r#"{"ring": {"kind": "Z"}, "modules": [{"generators": 2, "relations": [[2, 0], [0, 3]]}]}"#;
        let input = parse_input(text).unwrap();
        assert_eq!(input.modules[0].canonical().components[0].torsion, vec![6]);
    }

    #[test]
    fn composite_hom() {
        let text = r#"{"ring": {"kind": "Z"},
            "hom": {"kind": "composite", "steps": [
                {"kind": "quotient", "source": {"kind": "Z"}, "target": {"kind": "Zmod", "n": 12}},
                {"kind": "crt"}, {"kind": "projection", "keep": [1]}]}}"#;
        let hom = parse_input(text).unwrap().hom.unwrap();
        assert_eq!(hom.target().descriptor().to_string(), "Z/3");
    }

    #[test]
    fn errors_carry_positions_and_fields() {
        match parse_input("{\n  \"ring\": {\"kind\": \"Zmod\", \"n\": 6},\n  oops\n}") {
            Err(InputError::Json { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_input(r#"{"ring": {"kind": "Zmod", "n": 6}, "complex": {"components": [{"m": 1, "n": 1, "matrix": [[1]]}]}}"#) {
            Err(InputError::Field { field, .. }) => assert_eq!(field, "complex.components"),
            other => panic!("{other:?}"),
        }
        match parse_input(r#"{"ring": {"kind": "Z"}, "complex": {"components": [{"m": 2, "n": 1, "matrix": [[1]]}]}}"#) {
            Err(InputError::Field { field, .. }) => assert_eq!(field, "complex.components[0].matrix[0]"),
            other => panic!("{other:?}"),
        }
        assert!(parse_input(r#"{"ring": {"kind": "Fp", "p": 6}}"#).is_err());
        assert!(parse_input(r#"{"ring": {"kind": "Z"}, "hom": {"kind": "quotient", "target": {"kind": "Z"}}}"#).is_err());
    }
}
