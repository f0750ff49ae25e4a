//! Finite-rank graded modules, elements, sign rules and sparse multilinear maps.

use std::collections::{BTreeMap, HashMap};

use num_traits::One;
use thiserror::Error;

use crate::novikov::Nov;
use crate::rational::{Energy, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("position {position} out of range 1..={max}")]
    PositionOutOfRange { position: usize, max: usize },
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown basis label {0:?}")]
    UnknownLabel(String),
    #[error("basis index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("arity mismatch: map has arity {expected}, got {got} arguments")]
    ArityMismatch { expected: usize, got: usize },
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("degree bookkeeping violation: inputs {inputs:?} have degree sum {input_sum}, shift {shift}, but output {output:?} has degree {output_degree}")]
    DegreeViolation { inputs: Vec<String>, input_sum: i64, shift: i64, output: String, output_degree: i64 },
    #[error("cutoff mismatch")]
    CutoffMismatch,
}

/// `(-1)^e` as ±1.
pub fn sign_of(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `(−1)^{deg x₁ + … + deg x_{i−1} + i − 1}` for a 1-based insertion slot `i`.
pub fn ainfty_insertion_sign(degrees: &[i64], i: usize) -> Result<i64, GradedError> {
    if i == 0 || i > degrees.len() + 1 {
        return Err(GradedError::PositionOutOfRange { position: i, max: degrees.len() + 1 });
    }
    let prefix: i64 = degrees[..i - 1].iter().sum();
    Ok(sign_of(prefix + i as i64 - 1))
}

/// `(−1)^{(deg x₀ + 1)(deg x₁ + … + deg x_k + k)}`.
pub fn cyclic_rotation_sign(deg_x0: i64, rest: &[i64]) -> i64 {
    let s: i64 = rest.iter().sum::<i64>() + rest.len() as i64;
    sign_of((deg_x0 + 1) * s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedModule {
    labels: Vec<String>,
    degrees: Vec<i64>,
    index: HashMap<String, usize>,
}

impl GradedModule {
    /// Basis in the given order. An empty basis is allowed (the zero module).
    pub fn new(basis: Vec<(String, i64)>) -> Result<Self, GradedError> {
        let mut index = HashMap::new();
        let mut labels = Vec::with_capacity(basis.len());
        let mut degrees = Vec::with_capacity(basis.len());
        for (i, (l, d)) in basis.into_iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(GradedError::DuplicateLabel(l));
            }
            labels.push(l);
            degrees.push(d);
        }
        Ok(GradedModule { labels, degrees, index })
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn index_of(&self, label: &str) -> Result<usize, GradedError> {
        self.index.get(label).copied().ok_or_else(|| GradedError::UnknownLabel(label.to_string()))
    }

    pub fn degree_ranks(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for &d in &self.degrees {
            *out.entry(d).or_insert(0) += 1;
        }
        out
    }

    /// Basis indices of the given degree, in basis order.
    pub fn basis_in_degree(&self, d: i64) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.degrees[i] == d).collect()
    }

    pub fn degrees_of(&self, idx: &[usize]) -> Vec<i64> {
        idx.iter().map(|&i| self.degrees[i]).collect()
    }
}

/// Sparse vector over Novikov scalars; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    coeffs: BTreeMap<usize, Nov>,
    cutoff: Energy,
}

impl Element {
    pub fn zero(cutoff: Energy) -> Self {
        Element { coeffs: BTreeMap::new(), cutoff }
    }

    pub fn basis(i: usize, s: Nov) -> Self {
        let mut e = Element::zero(s.cutoff());
        e.add_coeff(i, &s);
        e
    }

    pub fn cutoff(&self) -> Energy {
        self.cutoff
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Option<&Nov> {
        self.coeffs.get(&i)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (usize, &Nov)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_coeff(&mut self, i: usize, s: &Nov) {
        if s.is_zero() {
            return;
        }
        match self.coeffs.entry(i) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(s.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(s);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Element) {
        for (&i, c) in &other.coeffs {
            self.add_coeff(i, c);
        }
    }

    /// `self += s · other`.
    pub fn add_scaled(&mut self, other: &Element, s: &Nov) {
        if s.is_zero() {
            return;
        }
        for (&i, c) in &other.coeffs {
            self.add_coeff(i, &(c * s));
        }
    }

    pub fn add_scaled_q(&mut self, other: &Element, q: &Q) {
        for (&i, c) in &other.coeffs {
            self.add_coeff(i, &c.scale_q(q));
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_assign_ref(other);
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled_q(other, &-Q::one());
        out
    }

    pub fn neg(&self) -> Element {
        self.scale_q(&-Q::one())
    }

    pub fn scale(&self, s: &Nov) -> Element {
        let mut out = Element::zero(self.cutoff);
        out.add_scaled(self, s);
        out
    }

    pub fn scale_q(&self, q: &Q) -> Element {
        let mut out = Element::zero(self.cutoff);
        out.add_scaled_q(self, q);
        out
    }

    /// Common degree of a homogeneous element; `None` for zero.
    pub fn degree(&self, module: &GradedModule) -> Result<Option<i64>, GradedError> {
        let mut deg = None;
        for &i in self.coeffs.keys() {
            if i >= module.rank() {
                return Err(GradedError::IndexOutOfRange(i));
            }
            let d = module.degree(i);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return Err(GradedError::Inhomogeneous),
                _ => {}
            }
        }
        Ok(deg)
    }

    /// True iff every coefficient lies in the maximal ideal Λ⁺.
    pub fn is_plus(&self) -> bool {
        self.coeffs.values().all(Nov::is_plus)
    }

    pub fn is_concrete(&self) -> bool {
        self.coeffs.values().all(Nov::is_concrete)
    }

    pub fn truncate(&self, cutoff: Energy) -> Element {
        let mut out = Element::zero(cutoff);
        for (&i, c) in &self.coeffs {
            out.add_coeff(i, &c.truncate(cutoff).expect("truncate to a larger cutoff"));
        }
        out
    }

    pub fn lift_exact(&self, cutoff: Energy) -> Element {
        Element {
            coeffs: self.coeffs.iter().map(|(&i, c)| (i, c.lift_exact(cutoff))).collect(),
            cutoff,
        }
    }

    pub fn substitute(&self, values: &BTreeMap<u32, Q>) -> Element {
        let mut out = Element::zero(self.cutoff);
        for (&i, c) in &self.coeffs {
            out.add_coeff(i, &c.substitute(values));
        }
        out
    }

    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> Element {
        let mut out = Element::zero(self.cutoff);
        for (&i, c) in &self.coeffs {
            out.add_coeff(f(i), c);
        }
        out
    }

    pub fn display(&self, module: &GradedModule) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|(&i, c)| format!("({})·{}", c, module.label(i)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Sparse multilinear map `A^{⊗arity} → A` of fixed degree shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearMap {
    arity: usize,
    degree_shift: i64,
    entries: BTreeMap<Vec<usize>, Element>,
}

impl MultilinearMap {
    pub fn new(arity: usize, degree_shift: i64) -> Self {
        MultilinearMap { arity, degree_shift, entries: BTreeMap::new() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree_shift(&self) -> i64 {
        self.degree_shift
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Element)> {
        self.entries.iter()
    }

    pub fn get(&self, inputs: &[usize]) -> Option<&Element> {
        self.entries.get(inputs)
    }

    /// Adds `value` to the entry at `inputs`, checking degrees against `module`.
    pub fn add_entry(&mut self, module: &GradedModule, inputs: Vec<usize>, value: &Element) -> Result<(), GradedError> {
        if inputs.len() != self.arity {
            return Err(GradedError::ArityMismatch { expected: self.arity, got: inputs.len() });
        }
        self.check_entry(module, &inputs, value)?;
        self.add_entry_unchecked(inputs, value);
        Ok(())
    }

    /// Adds without degree validation; for internal constructions whose grading is known.
    pub(crate) fn add_entry_unchecked(&mut self, inputs: Vec<usize>, value: &Element) {
        if value.is_zero() {
            return;
        }
        match self.entries.entry(inputs) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(value.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(value);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn check_entry(&self, module: &GradedModule, inputs: &[usize], value: &Element) -> Result<(), GradedError> {
        for &i in inputs {
            if i >= module.rank() {
                return Err(GradedError::IndexOutOfRange(i));
            }
        }
        let input_sum: i64 = inputs.iter().map(|&i| module.degree(i)).sum();
        for o in value.support() {
            if o >= module.rank() {
                return Err(GradedError::IndexOutOfRange(o));
            }
            if module.degree(o) != input_sum + self.degree_shift {
                return Err(GradedError::DegreeViolation {
                    inputs: inputs.iter().map(|&i| module.label(i).to_string()).collect(),
                    input_sum,
                    shift: self.degree_shift,
                    output: module.label(o).to_string(),
                    output_degree: module.degree(o),
                });
            }
        }
        Ok(())
    }

    pub fn map_entries(&self, f: impl Fn(&Element) -> Element) -> MultilinearMap {
        let mut out = MultilinearMap::new(self.arity, self.degree_shift);
        for (k, v) in &self.entries {
            out.add_entry_unchecked(k.clone(), &f(v));
        }
        out
    }
}

/// Multilinear expansion of `m` on `args`. Scalars are even, so no signs arise.
pub fn apply_multilinear(
    module: &GradedModule,
    m: &MultilinearMap,
    args: &[&Element],
    cutoff: Energy,
) -> Result<Element, GradedError> {
    if args.len() != m.arity {
        return Err(GradedError::ArityMismatch { expected: m.arity, got: args.len() });
    }
    for a in args {
        a.degree(module)?;
    }
    let mut out = Element::zero(cutoff);
    if args.iter().any(|a| a.is_zero()) {
        return Ok(out);
    }
    'entries: for (inputs, value) in &m.entries {
        let mut prod = Nov::one(cutoff);
        for (slot, &i) in inputs.iter().enumerate() {
            match args[slot].coeff(i) {
                Some(c) => {
                    prod = &prod * c;
                    if prod.is_zero() {
                        continue 'entries;
                    }
                }
                None => continue 'entries,
            }
        }
        m.check_entry(module, inputs, value)?;
        out.add_scaled(value, &prod);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_int;
    use proptest::prelude::*;

    fn e3() -> Energy {
        Energy::from_integer(3)
    }

    #[test]
    fn insertion_sign_examples() {
        assert_eq!(ainfty_insertion_sign(&[], 1).unwrap(), 1);
        assert_eq!(ainfty_insertion_sign(&[1, 1], 2).unwrap(), 1);
        assert_eq!(ainfty_insertion_sign(&[2, 1, 1], 3).unwrap(), -1);
        assert!(ainfty_insertion_sign(&[1], 0).is_err());
        assert!(ainfty_insertion_sign(&[1], 3).is_err());
    }

    #[test]
    fn rotation_sign_examples() {
        assert_eq!(cyclic_rotation_sign(1, &[1, 1]), 1);
        assert_eq!(cyclic_rotation_sign(2, &[1]), 1);
        assert_eq!(cyclic_rotation_sign(2, &[2]), -1);
    }

    #[test]
    fn sign_table_matches_exponent_count() {
        // Independent oracle: count parity by repeated multiplication.
        for mask in 0u32..64 {
            let degrees: Vec<i64> = (0..6).map(|b| ((mask >> b) & 1) as i64 + 1).collect();
            for i in 1..=7 {
                let mut s = 1;
                for d in &degrees[..i - 1] {
                    for _ in 0..(*d + 1) {
                        s = -s;
                    }
                }
                assert_eq!(ainfty_insertion_sign(&degrees, i).unwrap(), s);
            }
        }
    }

    fn wedge_model() -> (GradedModule, MultilinearMap) {
        let m = GradedModule::new(vec![("e1".into(), 1), ("e2".into(), 1), ("e12".into(), 2)]).unwrap();
        let mut w = MultilinearMap::new(2, 0);
        let one = Nov::one(e3());
        w.add_entry(&m, vec![0, 1], &Element::basis(2, one.clone())).unwrap();
        w.add_entry(&m, vec![1, 0], &Element::basis(2, -&one)).unwrap();
        (m, w)
    }

    #[test]
    fn apply_examples() {
        let (m, w) = wedge_model();
        let one = Nov::one(e3());
        let e1 = Element::basis(0, one.clone());
        let e2 = Element::basis(1, one.clone());
        let z = Element::zero(e3());
        assert!(apply_multilinear(&m, &w, &[&z, &e2], e3()).unwrap().is_zero());
        assert_eq!(apply_multilinear(&m, &w, &[&e1, &e2], e3()).unwrap(), Element::basis(2, one.clone()));
        let mut m0 = MultilinearMap::new(0, 2);
        let c = Element::basis(2, Nov::t_pow(Energy::from_integer(1), e3()));
        m0.add_entry(&m, vec![], &c).unwrap();
        assert_eq!(apply_multilinear(&m, &m0, &[], e3()).unwrap(), c);
        assert!(apply_multilinear(&m, &w, &[&e1], e3()).is_err());
    }

    #[test]
    fn degree_violation_rejected() {
        let (m, mut w) = wedge_model();
        let one = Nov::one(e3());
        assert!(matches!(
            w.add_entry(&m, vec![0, 0], &Element::basis(0, one)),
            Err(GradedError::DegreeViolation { .. })
        ));
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(GradedModule::new(vec![("a".into(), 0), ("a".into(), 1)]).is_err());
    }

    proptest! {
        #[test]
        fn insertion_sign_multiplicative(a in proptest::collection::vec(-3i64..4, 0..5), b in proptest::collection::vec(-3i64..4, 0..5)) {
            // Splitting the prefix at the concatenation point factors the sign.
            let mut ab = a.clone();
            ab.extend(&b);
            let full = ainfty_insertion_sign(&ab, ab.len() + 1).unwrap();
            let left = ainfty_insertion_sign(&a, a.len() + 1).unwrap();
            let right = ainfty_insertion_sign(&b, b.len() + 1).unwrap();
            prop_assert_eq!(full, left * right);
        }

        #[test]
        fn apply_is_linear_in_each_slot(a in -5i64..6, c1 in -5i64..6, c2 in -5i64..6, d1 in -5i64..6, d2 in -5i64..6, slot in 0usize..2) {
            let (m, w) = wedge_model();
            let mk = |x: i64, y: i64| {
                let mut e = Element::basis(0, Nov::constant(q_int(x), e3()));
                e.add_coeff(1, &Nov::constant(q_int(y), e3()));
                e
            };
            let x = mk(c1, c2);
            let y = mk(d1, d2);
            let other = mk(1, 2);
            let combo = { let mut s = x.scale_q(&q_int(a)); s.add_assign_ref(&y); s };
            let args = |v: &Element| if slot == 0 { [v.clone(), other.clone()] } else { [other.clone(), v.clone()] };
            let f = |v: &Element| { let a = args(v); apply_multilinear(&m, &w, &[&a[0], &a[1]], e3()).unwrap() };
            let lhs = f(&combo);
            let mut rhs = f(&x).scale_q(&q_int(a));
            rhs.add_assign_ref(&f(&y));
            prop_assert_eq!(&lhs, &rhs);
            if !lhs.is_zero() {
                prop_assert_eq!(lhs.degree(&m).unwrap(), Some(2));
            }
        }
    }
}
