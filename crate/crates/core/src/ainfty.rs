//! Curved A∞ structures over the truncated Novikov ring.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;
use thiserror::Error;

use crate::graded::{ainfty_insertion_sign, apply_multilinear, Element, GradedError, GradedModule, MultilinearMap};
use crate::novikov::Nov;
use crate::poly::Poly;
use crate::rational::{format_energy, q_int, Energy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AInftyError {
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("curvature m0 must have positive valuation (offending coefficient on {0:?})")]
    NotGapped(String),
    #[error("arity {arity} exceeds the structure's arity cutoff {k_max}")]
    ArityExceeded { arity: usize, k_max: usize },
    #[error("energy bound {requested} exceeds the structure's cutoff {stored}")]
    EnergyExceeded { requested: String, stored: String },
    #[error("element cutoff {got} does not match the structure cutoff {expected}")]
    CutoffMismatch { expected: String, got: String },
    #[error("expected a homogeneous element of degree 1")]
    NotDegreeOne,
    #[error("element has a coefficient of valuation zero; it must lie in the maximal ideal")]
    NotPlus,
    #[error("no deformation variable supplied for degree-1 direction {0:?}")]
    MissingVariable(String),
    #[error("deformation variable weight must be positive")]
    NonPositiveWeight,
}

/// One nonvanishing instance of the A∞ relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationViolation {
    pub k: usize,
    pub inputs: Vec<usize>,
    pub residual: Element,
}

/// A formal coordinate `t_var · T^weight` along a degree-1 basis direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicDirection {
    pub basis: usize,
    pub var: u32,
    pub weight: Energy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AInftyStructure {
    module: GradedModule,
    ops: Vec<MultilinearMap>,
    cutoff: Energy,
}

impl AInftyStructure {
    /// The zero structure with maps of arity `0..=k_max`.
    pub fn new(module: GradedModule, k_max: usize, cutoff: Energy) -> Self {
        let ops = (0..=k_max).map(|k| MultilinearMap::new(k, 2 - k as i64)).collect();
        AInftyStructure { module, ops, cutoff }
    }

    pub fn module(&self) -> &GradedModule {
        &self.module
    }

    pub fn k_max(&self) -> usize {
        self.ops.len() - 1
    }

    pub fn cutoff(&self) -> Energy {
        self.cutoff
    }

    pub fn op(&self, k: usize) -> &MultilinearMap {
        &self.ops[k]
    }

    pub fn ops(&self) -> &[MultilinearMap] {
        &self.ops
    }

    /// Adds `value` to `m_k(inputs)`.
    pub fn add_entry(&mut self, k: usize, inputs: Vec<usize>, value: &Element) -> Result<(), AInftyError> {
        if k > self.k_max() {
            return Err(AInftyError::ArityExceeded { arity: k, k_max: self.k_max() });
        }
        self.check_cutoff(value)?;
        if k == 0 {
            if let Some((i, _)) = value.coeffs().find(|(_, c)| !c.is_plus()) {
                return Err(AInftyError::NotGapped(self.module.label(i).to_string()));
            }
        }
        self.ops[k].add_entry(&self.module, inputs, value)?;
        Ok(())
    }

    pub(crate) fn add_entry_unchecked(&mut self, k: usize, inputs: Vec<usize>, value: &Element) {
        self.ops[k].add_entry_unchecked(inputs, value);
    }

    /// Convenience: `m_k(labels) += s · output`.
    pub fn add_labeled(&mut self, k: usize, inputs: &[&str], output: &str, s: Nov) -> Result<(), AInftyError> {
        let idx = inputs.iter().map(|l| self.module.index_of(l)).collect::<Result<Vec<_>, _>>()?;
        let o = self.module.index_of(output)?;
        self.add_entry(k, idx, &Element::basis(o, s))
    }

    fn check_cutoff(&self, e: &Element) -> Result<(), AInftyError> {
        if e.cutoff() != self.cutoff {
            return Err(AInftyError::CutoffMismatch {
                expected: format_energy(&self.cutoff),
                got: format_energy(&e.cutoff()),
            });
        }
        Ok(())
    }

    /// Same maps with every constant truncated below `cutoff`.
    pub fn truncated(&self, cutoff: Energy) -> Result<AInftyStructure, AInftyError> {
        if cutoff > self.cutoff {
            return Err(AInftyError::EnergyExceeded {
                requested: format_energy(&cutoff),
                stored: format_energy(&self.cutoff),
            });
        }
        Ok(AInftyStructure {
            module: self.module.clone(),
            ops: self.ops.iter().map(|m| m.map_entries(|e| e.truncate(cutoff))).collect(),
            cutoff,
        })
    }

    /// Reinterprets the stored constants as exact data at a larger cutoff.
    pub fn lifted(&self, cutoff: Energy) -> AInftyStructure {
        AInftyStructure {
            module: self.module.clone(),
            ops: self.ops.iter().map(|m| m.map_entries(|e| e.lift_exact(cutoff))).collect(),
            cutoff,
        }
    }

    /// Same data with the arity cutoff raised (new maps are zero) or lowered (maps dropped).
    pub fn with_k_max(&self, k_max: usize) -> AInftyStructure {
        let mut ops: Vec<MultilinearMap> = self.ops.iter().take(k_max + 1).cloned().collect();
        while ops.len() <= k_max {
            let k = ops.len();
            ops.push(MultilinearMap::new(k, 2 - k as i64));
        }
        AInftyStructure { module: self.module.clone(), ops, cutoff: self.cutoff }
    }

    pub fn is_strict(&self) -> bool {
        self.ops[0].is_zero()
    }

    /// `m₀(1)`.
    pub fn curvature(&self) -> Element {
        self.ops[0].get(&[]).cloned().unwrap_or_else(|| Element::zero(self.cutoff))
    }

    /// All nonvanishing relation instances of total arity `k ≤ max_k`, modulo `T^energy`,
    /// sorted by `(k, inputs)`.
    pub fn check_relations(&self, max_k: usize, energy: Energy) -> Result<Vec<RelationViolation>, AInftyError> {
        let s = self.truncated(energy)?;
        let k_max = s.k_max();
        let degrees = s.module.degrees();

        let mut index: HashMap<(usize, usize, usize), Vec<&Vec<usize>>> = HashMap::new();
        for k1 in 1..=k_max {
            for (inputs, _) in s.ops[k1].entries() {
                for (slot, &l) in inputs.iter().enumerate() {
                    index.entry((k1, slot, l)).or_default().push(inputs);
                }
            }
        }

        let mut residual: BTreeMap<(usize, Vec<usize>), Element> = BTreeMap::new();
        for k2 in 0..=k_max {
            for (in2, out2) in s.ops[k2].entries() {
                for k1 in 1..=k_max {
                    let k = k1 + k2 - 1;
                    if k > max_k {
                        continue;
                    }
                    for slot in 0..k1 {
                        for (l, c) in out2.coeffs() {
                            let Some(list) = index.get(&(k1, slot, l)) else {
                                continue;
                            };
                            for in1 in list {
                                let out1 = s.ops[k1].get(in1).expect("indexed entry");
                                let prefix: Vec<i64> = in1[..slot].iter().map(|&i| degrees[i]).collect();
                                let sign = ainfty_insertion_sign(&prefix, slot + 1)?;
                                let mut tuple = Vec::with_capacity(k);
                                tuple.extend_from_slice(&in1[..slot]);
                                tuple.extend_from_slice(in2);
                                tuple.extend_from_slice(&in1[slot + 1..]);
                                let coef = c.scale_q(&q_int(sign));
                                residual
                                    .entry((k, tuple))
                                    .or_insert_with(|| Element::zero(energy))
                                    .add_scaled(out1, &coef);
                            }
                        }
                    }
                }
            }
        }
        Ok(residual
            .into_iter()
            .filter(|(_, r)| !r.is_zero())
            .map(|((k, inputs), residual)| RelationViolation { k, inputs, residual })
            .collect())
    }

    fn check_point(&self, x: &Element) -> Result<(), AInftyError> {
        self.check_cutoff(x)?;
        match x.degree(&self.module) {
            Ok(None) | Ok(Some(1)) => {}
            _ => return Err(AInftyError::NotDegreeOne),
        }
        if !x.is_plus() {
            return Err(AInftyError::NotPlus);
        }
        Ok(())
    }

    /// `[m₀(1), m₁(x), m₂(x,x), …]` up to the arity cutoff.
    pub fn kuranishi_terms(&self, x: &Element) -> Result<Vec<Element>, AInftyError> {
        self.check_point(x)?;
        let mut out = Vec::with_capacity(self.ops.len());
        for (k, m) in self.ops.iter().enumerate() {
            let args: Vec<&Element> = std::iter::repeat_n(x, k).collect();
            out.push(apply_multilinear(&self.module, m, &args, self.cutoff)?);
        }
        Ok(out)
    }

    /// `κ(x) = Σ_k m_k(x,…,x)` modulo `T^E`.
    pub fn kuranishi_eval(&self, x: &Element) -> Result<Element, AInftyError> {
        let mut total = Element::zero(self.cutoff);
        for t in self.kuranishi_terms(x)? {
            total.add_assign_ref(&t);
        }
        Ok(total)
    }

    /// The formal point `Σ t_var T^weight u_basis`, requiring a direction for every degree-1 basis vector.
    pub fn symbolic_point(&self, dirs: &[SymbolicDirection]) -> Result<Element, AInftyError> {
        let covered: BTreeSet<usize> = dirs.iter().map(|d| d.basis).collect();
        for i in self.module.basis_in_degree(1) {
            if !covered.contains(&i) {
                return Err(AInftyError::MissingVariable(self.module.label(i).to_string()));
            }
        }
        let mut x = Element::zero(self.cutoff);
        for d in dirs {
            if d.weight <= Energy::zero() {
                return Err(AInftyError::NonPositiveWeight);
            }
            if d.basis >= self.module.rank() || self.module.degree(d.basis) != 1 {
                return Err(AInftyError::NotDegreeOne);
            }
            x.add_coeff(d.basis, &Nov::term(Poly::var(d.var), d.weight, 0, self.cutoff));
        }
        Ok(x)
    }

    /// One variable per degree-1 basis direction (variable `j` for the `j`-th such direction).
    pub fn default_directions(&self, weight: Energy) -> Vec<SymbolicDirection> {
        self.module
            .basis_in_degree(1)
            .into_iter()
            .enumerate()
            .map(|(j, basis)| SymbolicDirection { basis, var: j as u32, weight })
            .collect()
    }

    /// κ at the formal point; κ ≡ 0 iff every polynomial coefficient vanishes.
    pub fn kuranishi_symbolic(&self, dirs: &[SymbolicDirection]) -> Result<Element, AInftyError> {
        let x = self.symbolic_point(dirs)?;
        self.kuranishi_eval(&x)
    }

    /// `m^b_k(x₁,…,x_k) = Σ m_n(b,…,b,x₁,b,…,b,x_k,b,…,b)` over all placements.
    pub fn twist(&self, b: &Element) -> Result<AInftyStructure, AInftyError> {
        self.check_point(b)?;
        let mut out = AInftyStructure::new(self.module.clone(), self.k_max(), self.cutoff);
        for (n, m) in self.ops.iter().enumerate() {
            for (inputs, value) in m.entries() {
                for mask in 0u32..(1 << n) {
                    let mut prod = Nov::one(self.cutoff);
                    let mut kept = Vec::new();
                    for (pos, &l) in inputs.iter().enumerate() {
                        if mask & (1 << pos) != 0 {
                            kept.push(l);
                        } else {
                            match b.coeff(l) {
                                Some(c) => prod = &prod * c,
                                None => {
                                    prod = Nov::zero(self.cutoff);
                                    break;
                                }
                            }
                        }
                        if prod.is_zero() {
                            break;
                        }
                    }
                    if prod.is_zero() {
                        continue;
                    }
                    let k = kept.len();
                    out.add_entry_unchecked(k, kept, &value.scale(&prod));
                }
            }
        }
        Ok(out)
    }

    pub fn display_violation(&self, v: &RelationViolation) -> String {
        let labels: Vec<&str> = v.inputs.iter().map(|&i| self.module.label(i)).collect();
        format!("k={} inputs=({}) residual={}", v.k, labels.join(","), v.residual.display(&self.module))
    }
}
