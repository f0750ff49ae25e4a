//! JSON input files: parsing, validation into core types, and canonical output.

use std::collections::{BTreeMap, BTreeSet};

use ainf_core::ainfty::AInftyStructure;
use ainf_core::calibrated::cayley::FourPlane;
use ainf_core::calibrated::hodge::{Metric4, TwoForm};
use ainf_core::calibrated::lattice::IntMatrix;
use ainf_core::cyclic::CyclicPairing;
use ainf_core::graded::{Element, GradedModule};
use ainf_core::novikov::Nov;
use ainf_core::poly::Poly;
use ainf_core::rational::{format_energy, format_q, parse_energy, parse_q, Energy, Q};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> SpecError {
    SpecError::Invalid(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ops: Vec<OpEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<PairingSection>,
    /// A degree-1 element (bounding cochain candidate or twisting element).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometrySection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSection {
    pub energy_cutoff: String,
    pub arity_cutoff: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSection {
    pub basis: Vec<BasisEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub label: String,
    pub degree: i64,
}

/// `coeff · T^T · e^e · label`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub label: String,
    pub coeff: String,
    #[serde(rename = "T", default = "zero_energy")]
    pub t: String,
    #[serde(default)]
    pub e: i64,
}

fn zero_energy() -> String {
    "0".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpEntry {
    pub arity: usize,
    pub inputs: Vec<String>,
    pub output: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingSection {
    pub n: i64,
    pub entries: Vec<PairingEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingEntry {
    pub left: String,
    pub right: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane: Option<PlaneSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<IntMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneSpec {
    pub vectors: Vec<Vec<String>>,
    pub orientation: i8,
}

pub fn parse_spec(text: &str) -> Result<SpecFile, SpecError> {
    let spec: SpecFile = serde_json::from_str(text)
        .map_err(|e| SpecError::Syntax { line: e.line(), column: e.column(), message: strip_position(&e.to_string()) })?;
    if spec.format_version != FORMAT_VERSION {
        return Err(invalid(format!("unsupported format_version {} (expected {FORMAT_VERSION})", spec.format_version)));
    }
    spec.validate()?;
    Ok(spec)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// Canonical rendering: pretty JSON with two-space indent and a trailing newline.
pub fn serialize_spec(spec: &SpecFile) -> String {
    let mut s = serde_json::to_string_pretty(spec).expect("spec serializes");
    s.push('\n');
    s
}

fn rational(text: &str, what: &str) -> Result<Q, SpecError> {
    parse_q(text).map_err(|e| invalid(format!("{what}: {e}")))
}

fn energy_value(text: &str, what: &str) -> Result<Energy, SpecError> {
    let e = parse_energy(text).map_err(|e| invalid(format!("{what}: {e}")))?;
    if e < Energy::from_integer(0) {
        return Err(invalid(format!("{what}: negative energy exponent {}", format_energy(&e))));
    }
    Ok(e)
}

impl SpecFile {
    /// Checks everything that can be checked without building core structures.
    fn validate(&self) -> Result<(), SpecError> {
        if let Some(m) = &self.module {
            self.module_checked(m)?;
        }
        if self.module.is_some() && self.ring.is_some() {
            self.structure()?;
            self.pairing()?;
            self.point()?;
        } else if !self.ops.is_empty() || self.pairing.is_some() || self.point.is_some() {
            return Err(invalid("ops, pairing and point require both ring and module sections"));
        }
        if self.geometry.is_some() {
            self.metric()?;
            self.form()?;
            self.plane()?;
            self.lattice()?;
        }
        Ok(())
    }

    fn module_checked(&self, m: &ModuleSection) -> Result<GradedModule, SpecError> {
        if m.basis.is_empty() {
            return Err(invalid("no basis"));
        }
        GradedModule::new(m.basis.iter().map(|b| (b.label.clone(), b.degree)).collect())
            .map_err(|e| invalid(format!("module: {e}")))
    }

    pub fn energy_cutoff(&self) -> Result<Energy, SpecError> {
        let r = self.ring.as_ref().ok_or_else(|| invalid("missing ring section"))?;
        let e = energy_value(&r.energy_cutoff, "ring.energy_cutoff")?;
        if e <= Energy::from_integer(0) {
            return Err(invalid("ring.energy_cutoff must be positive"));
        }
        Ok(e)
    }

    pub fn arity_cutoff(&self) -> Result<usize, SpecError> {
        Ok(self.ring.as_ref().ok_or_else(|| invalid("missing ring section"))?.arity_cutoff)
    }

    pub fn graded_module(&self) -> Result<GradedModule, SpecError> {
        self.module_checked(self.module.as_ref().ok_or_else(|| invalid("missing module section"))?)
    }

    fn element(&self, module: &GradedModule, terms: &[Term], cutoff: Energy, what: &str) -> Result<Element, SpecError> {
        let mut out = Element::zero(cutoff);
        for (i, t) in terms.iter().enumerate() {
            let w = format!("{what}[{i}]");
            let idx = module.index_of(&t.label).map_err(|e| invalid(format!("{w}: {e}")))?;
            let c = rational(&t.coeff, &format!("{w}.coeff"))?;
            let l = energy_value(&t.t, &format!("{w}.T"))?;
            let s = Nov::try_term(Poly::constant(c), l, t.e, cutoff).map_err(|e| invalid(format!("{w}: {e}")))?;
            out.add_coeff(idx, &s);
        }
        Ok(out)
    }

    pub fn structure(&self) -> Result<AInftyStructure, SpecError> {
        let module = self.graded_module()?;
        let cutoff = self.energy_cutoff()?;
        let k_max = self.arity_cutoff()?;
        let mut s = AInftyStructure::new(module.clone(), k_max, cutoff);
        let mut seen = BTreeSet::new();
        for (i, op) in self.ops.iter().enumerate() {
            let w = format!("ops[{i}]");
            if op.arity != op.inputs.len() {
                return Err(invalid(format!("{w}: arity {} but {} inputs", op.arity, op.inputs.len())));
            }
            if op.arity > k_max {
                return Err(invalid(format!("{w}: arity {} exceeds arity_cutoff {k_max}", op.arity)));
            }
            let inputs = op
                .inputs
                .iter()
                .map(|l| module.index_of(l))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| invalid(format!("{w}.inputs: {e}")))?;
            if !seen.insert(inputs.clone()) {
                return Err(invalid(format!("{w}: duplicate op entry for inputs ({})", op.inputs.join(","))));
            }
            let value = self.element(&module, &op.output, cutoff, &format!("{w}.output"))?;
            if value.is_zero() {
                continue;
            }
            s.add_entry(op.arity, inputs, &value).map_err(|e| invalid(format!("{w}: {e}")))?;
        }
        Ok(s)
    }

    pub fn pairing(&self) -> Result<Option<CyclicPairing>, SpecError> {
        let Some(p) = &self.pairing else { return Ok(None) };
        let module = self.graded_module()?;
        let mut q = CyclicPairing::new(p.n);
        let mut seen = BTreeSet::new();
        for (i, e) in p.entries.iter().enumerate() {
            let w = format!("pairing.entries[{i}]");
            let a = module.index_of(&e.left).map_err(|err| invalid(format!("{w}.left: {err}")))?;
            let b = module.index_of(&e.right).map_err(|err| invalid(format!("{w}.right: {err}")))?;
            if !seen.insert((a, b)) {
                return Err(invalid(format!("{w}: duplicate entry ({},{})", e.left, e.right)));
            }
            q.set(a, b, rational(&e.value, &format!("{w}.value"))?);
        }
        Ok(Some(q))
    }

    pub fn point(&self) -> Result<Option<Element>, SpecError> {
        let Some(terms) = &self.point else { return Ok(None) };
        let module = self.graded_module()?;
        let x = self.element(&module, terms, self.energy_cutoff()?, "point")?;
        Ok(Some(x))
    }

    fn geometry(&self) -> Option<&GeometrySection> {
        self.geometry.as_ref()
    }

    pub fn metric(&self) -> Result<Option<Metric4>, SpecError> {
        let Some(m) = self.geometry().and_then(|g| g.metric.as_ref()) else { return Ok(None) };
        let g = m
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().enumerate().map(|(j, x)| rational(x, &format!("geometry.metric[{i}][{j}]"))).collect())
            .collect::<Result<Vec<Vec<Q>>, _>>()?;
        Metric4::new(g).map(Some).map_err(|e| invalid(format!("geometry.metric: {e}")))
    }

    pub fn form(&self) -> Result<Option<TwoForm>, SpecError> {
        let Some(f) = self.geometry().and_then(|g| g.form.as_ref()) else { return Ok(None) };
        if f.len() != 6 {
            return Err(invalid(format!("geometry.form: expected 6 coefficients, got {}", f.len())));
        }
        let v = f
            .iter()
            .enumerate()
            .map(|(i, x)| rational(x, &format!("geometry.form[{i}]")))
            .collect::<Result<Vec<Q>, _>>()?;
        Ok(Some(std::array::from_fn(|i| v[i].clone())))
    }

    pub fn plane(&self) -> Result<Option<FourPlane>, SpecError> {
        let Some(p) = self.geometry().and_then(|g| g.plane.as_ref()) else { return Ok(None) };
        if p.vectors.len() != 4 || p.vectors.iter().any(|v| v.len() != 8) {
            return Err(invalid("geometry.plane: expected 4 vectors of length 8"));
        }
        let mut vs: Vec<[Q; 8]> = Vec::new();
        for (a, v) in p.vectors.iter().enumerate() {
            let row = v
                .iter()
                .enumerate()
                .map(|(k, x)| rational(x, &format!("geometry.plane.vectors[{a}][{k}]")))
                .collect::<Result<Vec<Q>, _>>()?;
            vs.push(std::array::from_fn(|k| row[k].clone()));
        }
        let arr: [[Q; 8]; 4] = std::array::from_fn(|a| vs[a].clone());
        FourPlane::new(arr, p.orientation).map(Some).map_err(|e| invalid(format!("geometry.plane: {e}")))
    }

    pub fn lattice(&self) -> Result<Option<IntMatrix>, SpecError> {
        let Some(f) = self.geometry().and_then(|g| g.lattice.as_ref()) else { return Ok(None) };
        let n = f.len();
        if n == 0 || f.iter().any(|r| r.len() != n) {
            return Err(invalid("geometry.lattice: expected a nonempty square matrix"));
        }
        Ok(Some(f.clone()))
    }
}

fn nov_terms(label: &str, s: &Nov) -> Result<Vec<Term>, SpecError> {
    s.terms()
        .map(|(&(l, e), c)| {
            let q = c.as_constant().ok_or_else(|| invalid("symbolic coefficients cannot be written to a spec file"))?;
            Ok(Term { label: label.to_string(), coeff: format_q(&q), t: format_energy(&l), e })
        })
        .collect()
}

pub fn element_terms(module: &GradedModule, x: &Element) -> Result<Vec<Term>, SpecError> {
    let mut out = Vec::new();
    for (i, c) in x.coeffs() {
        out.extend(nov_terms(module.label(i), c)?);
    }
    Ok(out)
}

/// Spec file describing a structure, an optional pairing and an optional point.
pub fn spec_from_structure(
    s: &AInftyStructure,
    q: Option<&CyclicPairing>,
    point: Option<&Element>,
) -> Result<SpecFile, SpecError> {
    let module = s.module();
    let mut ops = Vec::new();
    for k in 0..=s.k_max() {
        let entries: BTreeMap<&Vec<usize>, &Element> = s.op(k).entries().collect();
        for (inputs, value) in entries {
            ops.push(OpEntry {
                arity: k,
                inputs: inputs.iter().map(|&i| module.label(i).to_string()).collect(),
                output: element_terms(module, value)?,
            });
        }
    }
    let pairing = q.map(|q| PairingSection {
        n: q.n(),
        entries: q
            .entries()
            .map(|(&(a, b), v)| PairingEntry {
                left: module.label(a).to_string(),
                right: module.label(b).to_string(),
                value: format_q(v),
            })
            .collect(),
    });
    Ok(SpecFile {
        format_version: FORMAT_VERSION,
        ring: Some(RingSection { energy_cutoff: format_energy(&s.cutoff()), arity_cutoff: s.k_max() }),
        module: Some(ModuleSection {
            basis: module
                .labels()
                .iter()
                .zip(module.degrees())
                .map(|(l, &d)| BasisEntry { label: l.clone(), degree: d })
                .collect(),
        }),
        ops,
        pairing,
        point: point.map(|x| element_terms(module, x)).transpose()?,
        geometry: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ainf_core::corpus;

    #[test]
    fn empty_module_rejected() {
        let text = r#"{"format_version": 1, "ring": {"energy_cutoff": "1", "arity_cutoff": 2}, "module": {"basis": []}}"#;
        assert_eq!(parse_spec(text), Err(SpecError::Invalid("no basis".into())));
    }

    #[test]
    fn negative_energy_rejected() {
        let text = r#"{"format_version": 1, "ring": {"energy_cutoff": "2", "arity_cutoff": 2},
            "module": {"basis": [{"label": "u", "degree": 1}, {"label": "v", "degree": 2}]},
            "ops": [{"arity": 0, "inputs": [], "output": [{"label": "v", "coeff": "1", "T": "-1/2", "e": 0}]}]}"#;
        let err = parse_spec(text).unwrap_err().to_string();
        assert!(err.contains("negative energy exponent"), "{err}");
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_spec("{\n  \"format_version\": 1,\n  oops\n}").unwrap_err();
        assert!(matches!(err, SpecError::Syntax { line: 3, .. }), "{err:?}");
        let err = parse_spec(r#"{"format_version": 1, "extra": 3}"#).unwrap_err();
        assert!(matches!(err, SpecError::Syntax { .. }));
    }

    #[test]
    fn dangling_and_duplicate_labels() {
        let base = |ops: &str| {
            format!(
                r#"{{"format_version": 1, "ring": {{"energy_cutoff": "2", "arity_cutoff": 2}},
                "module": {{"basis": [{{"label": "u", "degree": 1}}, {{"label": "v", "degree": 2}}]}}, "ops": [{ops}]}}"#
            )
        };
        let dangling = base(r#"{"arity": 2, "inputs": ["u", "w"], "output": []}"#);
        assert!(parse_spec(&dangling).unwrap_err().to_string().contains("unknown basis label"));
        let dup = base(
            r#"{"arity": 2, "inputs": ["u", "u"], "output": [{"label": "v", "coeff": "1"}]},
               {"arity": 2, "inputs": ["u", "u"], "output": [{"label": "v", "coeff": "2"}]}"#,
        );
        assert!(parse_spec(&dup).unwrap_err().to_string().contains("duplicate op entry"));
        let dup_label = r#"{"format_version": 1, "ring": {"energy_cutoff": "2", "arity_cutoff": 2},
            "module": {"basis": [{"label": "u", "degree": 1}, {"label": "u", "degree": 2}]}}"#;
        assert!(parse_spec(dup_label).unwrap_err().to_string().contains("duplicate basis label"));
    }

    #[test]
    fn torus_round_trip() {
        let cs = corpus::torus4(3, Energy::from_integer(2));
        let spec = spec_from_structure(&cs.s, Some(&cs.q), None).unwrap();
        let text = serialize_spec(&spec);
        let back = parse_spec(&text).unwrap();
        assert_eq!(back, spec);
        assert_eq!(serialize_spec(&back), text);
        assert_eq!(back.structure().unwrap(), cs.s);
        assert_eq!(back.pairing().unwrap().unwrap(), cs.q);
    }
}
