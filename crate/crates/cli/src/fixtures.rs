//! The shipped example spec files, generated from core constructions by the canonical serializer.

use ainf_core::ainfty::AInftyStructure;
use ainf_core::corpus;
use ainf_core::graded::GradedModule;
use ainf_core::novikov::Nov;
use ainf_core::rational::{q_int, Energy};

use crate::spec_file::{
    serialize_spec, spec_from_structure, GeometrySection, PlaneSpec, SpecFile, FORMAT_VERSION,
};

fn e(n: i64) -> Energy {
    Energy::from_integer(n)
}

/// u (deg 1), v (deg 2) with m₀ = T·v and m₂(u,u) = −v; κ(c·u) = (T − c²)v.
pub fn toy(cutoff: Energy) -> AInftyStructure {
    let m = GradedModule::new(vec![("u".into(), 1), ("v".into(), 2)]).expect("labels");
    let mut s = AInftyStructure::new(m, 2, cutoff);
    s.add_labeled(0, &[], "v", Nov::t_pow(e(1), cutoff)).expect("gapped");
    s.add_labeled(2, &["u", "u"], "v", Nov::constant(q_int(-1), cutoff)).expect("degree");
    s
}

/// m₀ = T·v + T·w, m₁(u) = v: the w-component of the curvature cannot be absorbed.
fn obstructed(cutoff: Energy) -> AInftyStructure {
    let m = GradedModule::new(vec![("u".into(), 1), ("v".into(), 2), ("w".into(), 2)]).expect("labels");
    let mut s = AInftyStructure::new(m, 2, cutoff);
    s.add_labeled(0, &[], "v", Nov::t_pow(e(1), cutoff)).expect("gapped");
    s.add_labeled(0, &[], "w", Nov::t_pow(e(1), cutoff)).expect("gapped");
    s.add_labeled(1, &["u"], "v", Nov::one(cutoff)).expect("degree");
    s.add_labeled(2, &["u", "u"], "v", Nov::one(cutoff)).expect("degree");
    s
}

fn geometry(g: GeometrySection) -> SpecFile {
    SpecFile { format_version: FORMAT_VERSION, ring: None, module: None, ops: vec![], pairing: None, point: None, geometry: Some(g) }
}

fn empty_geometry() -> GeometrySection {
    GeometrySection { metric: None, form: None, plane: None, lattice: None }
}

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn unit_vectors(idx: [usize; 4]) -> Vec<Vec<String>> {
    idx.iter().map(|&k| (0..8).map(|i| if i == k { "1" } else { "0" }.to_string()).collect()).collect()
}

/// `(file name, contents)` for every generated fixture.
pub fn generated() -> Vec<(String, String)> {
    let mut out: Vec<(&str, SpecFile)> = Vec::new();
    let cs = |c: &ainf_core::cyclic::CyclicStructure| spec_from_structure(&c.s, Some(&c.q), None).expect("constant");
    out.push(("torus4.json", cs(&corpus::torus4(6, e(3)))));
    out.push(("torus4_mutant.json", cs(&corpus::torus4_mutant(3, e(3), false))));
    out.push(("torus4_double_mutant.json", cs(&corpus::torus4_mutant(3, e(3), true))));
    out.push(("toy.json", spec_from_structure(&toy(e(3)), None, None).expect("constant")));
    let mut toy_point = spec_from_structure(&toy(e(3)), None, None).expect("constant");
    toy_point.point = Some(vec![crate::spec_file::Term { label: "u".into(), coeff: "1".into(), t: "1/2".into(), e: 0 }]);
    out.push(("toy_solution.json", toy_point));
    out.push(("obstructed.json", spec_from_structure(&obstructed(e(3)), None, None).expect("constant")));
    let zero = AInftyStructure::new(
        GradedModule::new(vec![("u".into(), 1), ("v".into(), 2)]).expect("labels"),
        2,
        e(1),
    );
    out.push(("zero.json", spec_from_structure(&zero, None, None).expect("constant")));
    out.push(("cp2.json", cs(&corpus::definite_model(&vec![vec![q_int(1)]], &vec![], 3, e(2)))));
    out.push((
        "massey.json",
        spec_from_structure(&corpus::massey_algebra(q_int(1), 3, e(2)), None, None).expect("constant"),
    ));
    out.push((
        "hodge.json",
        geometry(GeometrySection {
            metric: Some(vec![
                strings(&["4", "0", "0", "0"]),
                strings(&["0", "1", "0", "0"]),
                strings(&["0", "0", "1", "0"]),
                strings(&["0", "0", "0", "1"]),
            ]),
            form: Some(strings(&["1", "0", "0", "0", "0", "0"])),
            ..empty_geometry()
        }),
    ));
    out.push((
        "hodge_irrational.json",
        geometry(GeometrySection {
            metric: Some(vec![
                strings(&["2", "1", "0", "0"]),
                strings(&["1", "3", "0", "0"]),
                strings(&["0", "0", "1", "0"]),
                strings(&["0", "0", "0", "1/2"]),
            ]),
            form: Some(strings(&["1", "-2", "1/3", "0", "5", "-1"])),
            ..empty_geometry()
        }),
    ));
    out.push((
        "cayley_real_slice.json",
        geometry(GeometrySection { plane: Some(PlaneSpec { vectors: unit_vectors([0, 2, 4, 6]), orientation: 1 }), ..empty_geometry() }),
    ));
    out.push((
        "cayley_complex_plane.json",
        geometry(GeometrySection { plane: Some(PlaneSpec { vectors: unit_vectors([0, 1, 2, 3]), orientation: 1 }), ..empty_geometry() }),
    ));
    out.push((
        "lattice.json",
        geometry(GeometrySection { lattice: Some(vec![vec![2, 1], vec![1, 1]]), ..empty_geometry() }),
    ));
    out.push((
        "lattice_e8.json",
        geometry(GeometrySection { lattice: Some(ainf_core::calibrated::lattice::e8()), ..empty_geometry() }),
    ));
    out.push((
        "lattice_indefinite.json",
        geometry(GeometrySection { lattice: Some(vec![vec![0, 1], vec![1, 0]]), ..empty_geometry() }),
    ));
    out.into_iter().map(|(n, s)| (n.to_string(), serialize_spec(&s))).collect()
}

/// Hand-written fixtures that exercise input errors.
pub fn handwritten() -> Vec<(String, String)> {
    vec![
        (
            "bad_negative_energy.json".into(),
            r#"{
  "format_version": 1,
  "ring": { "energy_cutoff": "2", "arity_cutoff": 2 },
  "module": { "basis": [ { "label": "u", "degree": 1 }, { "label": "v", "degree": 2 } ] },
  "ops": [ { "arity": 0, "inputs": [], "output": [ { "label": "v", "coeff": "1", "T": "-1/2", "e": 0 } ] } ]
}
"#
            .into(),
        ),
        (
            "bad_empty_basis.json".into(),
            r#"{
  "format_version": 1,
  "ring": { "energy_cutoff": "1", "arity_cutoff": 2 },
  "module": { "basis": [] }
}
"#
            .into(),
        ),
        (
            "bad_syntax.json".into(),
            r#"{
  "format_version": 1,
  "ring": { "energy_cutoff": "1" "arity_cutoff": 2 }
}
"#
            .into(),
        ),
    ]
}

/// `(fixture, command, arguments after the input path, expected exit code)` for every shipped fixture.
pub const CLI_CASES: &[(&str, &str, &[&str], i32)] = &[
    ("zero.json", "validate", &[], 0),
    ("torus4.json", "cyclic-check", &["--arity", "3"], 0),
    ("torus4_mutant.json", "validate", &[], 1),
    ("torus4_mutant.json", "cyclic-check", &[], 1),
    ("torus4_double_mutant.json", "darboux-check", &[], 1),
    ("toy.json", "validate", &[], 0),
    ("toy.json", "kuranishi", &[], 0),
    ("toy.json", "mc-solve", &["--mode", "ansatz"], 0),
    ("toy.json", "mc-solve", &["--mode", "newton"], 3),
    ("toy_solution.json", "mc-verify", &[], 0),
    ("toy_solution.json", "twist", &[], 0),
    ("obstructed.json", "mc-solve", &[], 1),
    ("cp2.json", "lemma-check", &["--samples", "3"], 0),
    ("cp2.json", "darboux-check", &["--samples", "3"], 0),
    ("cp2.json", "certify-unobstructed", &["--samples", "5"], 0),
    ("massey.json", "complete", &[], 0),
    ("massey.json", "cyclic-check", &[], 2),
    ("hodge.json", "hodge", &[], 0),
    ("hodge_irrational.json", "hodge", &[], 0),
    ("cayley_real_slice.json", "cayley", &[], 0),
    ("cayley_complex_plane.json", "cayley", &[], 0),
    ("lattice.json", "lattice", &[], 0),
    ("lattice_e8.json", "lattice", &[], 1),
    ("lattice_indefinite.json", "lattice", &[], 2),
    ("bad_negative_energy.json", "validate", &[], 2),
    ("bad_empty_basis.json", "validate", &[], 2),
    ("bad_syntax.json", "validate", &[], 2),
];
