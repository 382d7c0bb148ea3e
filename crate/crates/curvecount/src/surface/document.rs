use super::{CoxPresentation, Generator, Monomial, PicClass, MAX_GENERATORS};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Toml,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDocument {
    pub name: String,
    pub picard_rank: usize,
    pub basis_labels: Vec<String>,
    pub generators: Vec<GeneratorDoc>,
    pub relation: Vec<MonomialDoc>,
    pub incidence_maximal: Vec<Vec<String>>,
    pub effective_cone: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub label: String,
    pub class: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialDoc {
    pub linear: String,
    pub factors: Vec<FactorDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorDoc {
    pub label: String,
    pub exponent: i64,
}

/// Parse and validate a surface document.
pub fn load_surface(text: &str, format: Format) -> Result<CoxPresentation> {
    let doc: SurfaceDocument = match format {
        Format::Json => serde_json::from_str(text).map_err(|e| Error::input("document", e.to_string()))?,
        Format::Toml => toml::from_str(text).map_err(|e| Error::input("document", e.to_string()))?,
    };
    doc.into_presentation()
}

/// Format chosen by extension: `.json`, otherwise TOML.
pub fn load_surface_file(path: &Path) -> Result<CoxPresentation> {
    let text = std::fs::read_to_string(path)?;
    let format = match path.extension().and_then(|e| e.to_str()) {
        Some("json") => Format::Json,
        _ => Format::Toml,
    };
    load_surface(&text, format)
}

impl SurfaceDocument {
    pub fn into_presentation(self) -> Result<CoxPresentation> {
        let rho = self.picard_rank;
        if rho == 0 {
            return Err(Error::input("picard_rank", "must be positive"));
        }
        if self.basis_labels.len() != rho {
            return Err(Error::input("basis_labels", format!("expected {rho} labels")));
        }
        if self.generators.len() > MAX_GENERATORS {
            return Err(Error::input("generators", format!("at most {MAX_GENERATORS} generators supported")));
        }
        let mut generators = Vec::new();
        for (k, g) in self.generators.iter().enumerate() {
            if g.class.len() != rho {
                return Err(Error::input(format!("generators[{k}].class"), format!("expected length {rho}")));
            }
            if generators.iter().any(|x: &Generator| x.label == g.label) {
                return Err(Error::input(format!("generators[{k}].label"), "duplicate label"));
            }
            generators.push(Generator { label: g.label.clone(), class: PicClass(g.class.clone()) });
        }
        let find = |label: &str, path: String| -> Result<usize> {
            generators
                .iter()
                .position(|g| g.label == label)
                .ok_or_else(|| Error::input(path, format!("unknown generator label {label:?}")))
        };
        let mut relation = Vec::new();
        for (k, m) in self.relation.iter().enumerate() {
            let linear = find(&m.linear, format!("relation[{k}].linear"))?;
            let mut factors = Vec::new();
            for (f, fac) in m.factors.iter().enumerate() {
                let path = format!("relation[{k}].factors[{f}]");
                if fac.exponent < 1 {
                    return Err(Error::input(format!("{path}.exponent"), "exponent must be ≥ 1"));
                }
                factors.push((find(&fac.label, format!("{path}.label"))?, fac.exponent as u32));
            }
            relation.push(Monomial { linear, factors });
        }
        let mut incidence_maximal = Vec::new();
        for (k, face) in self.incidence_maximal.iter().enumerate() {
            let mut mask = 0u32;
            for (f, l) in face.iter().enumerate() {
                mask |= 1 << find(l, format!("incidence_maximal[{k}][{f}]"))?;
            }
            incidence_maximal.push(mask);
        }
        let cox = CoxPresentation {
            name: self.name,
            picard_rank: rho,
            basis_labels: self.basis_labels,
            generators,
            relation,
            incidence_maximal,
            effective_cone: self.effective_cone.into_iter().map(PicClass).collect(),
        };
        cox.validate()?;
        Ok(cox)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
        "name": "toy", "picard_rank": 1, "basis_labels": ["h"],
        "generators": [{"label":"a","class":[1]},{"label":"b","class":[1]},{"label":"c","class":[1]}],
        "relation": [{"linear":"a","factors":[{"label":"b","exponent":EXP}]}],
        "incidence_maximal": [["a","c"]],
        "effective_cone": [[1]]
    }"#;

    #[test]
    fn exponent_zero_rejected() {
        let err = load_surface(&SMALL.replace("EXP", "0"), Format::Json).unwrap_err();
        assert!(err.to_string().contains("exponent must be ≥ 1"), "{err}");
    }

    #[test]
    fn unequal_degrees_rejected() {
        let doc = r#"{
            "name": "bad", "picard_rank": 1, "basis_labels": ["h"],
            "generators": [{"label":"a","class":[1]},{"label":"b","class":[1]},
                           {"label":"c","class":[1]},{"label":"d","class":[2]}],
            "relation": [{"linear":"a","factors":[{"label":"b","exponent":1}]},
                         {"linear":"c","factors":[{"label":"d","exponent":1}]}],
            "incidence_maximal": [], "effective_cone": [[1]]
        }"#;
        let err = load_surface(doc, Format::Json).unwrap_err();
        assert!(err.to_string().starts_with("relation[1]"), "{err}");
    }

    #[test]
    fn unknown_label_has_path() {
        let doc = SMALL.replace("EXP", "1").replace(r#"["a","c"]"#, r#"["a","zz"]"#);
        let err = load_surface(&doc, Format::Json).unwrap_err();
        assert!(err.to_string().starts_with("incidence_maximal[0][1]"), "{err}");
    }
}
