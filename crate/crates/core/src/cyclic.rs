//! Cyclic pairings: checking, the quadratic identities they imply, cyclic
//! completion by the shifted dual, and generators of strict cyclic models.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::ainfty::{AInftyError, AInftyStructure};
use crate::graded::{cyclic_rotation_sign, sign_of, Element, GradedError, GradedModule};
use crate::linalg::{rank, Matrix};
use crate::novikov::Nov;
use crate::rational::{format_energy, q_int, Energy, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclicError {
    #[error(transparent)]
    AInfty(#[from] AInftyError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("pairing dimension {n} is inconsistent with the module grading: no two basis degrees sum to it")]
    DegreeRange { n: i64 },
    #[error("this check pairs degree 2 with degree 2 and needs n = 4, got n = {0}")]
    NotFourDimensional(i64),
    #[error("dual label {0:?} collides with an existing basis label")]
    LabelCollision(String),
    #[error("input structure fails {0} A∞ relation instance(s)")]
    BaseFailsRelations(usize),
    #[error("completed structure failed verification ({relations} relation and {cyclicity} cyclicity violation(s))")]
    CompletionFailed { relations: usize, cyclicity: usize },
    #[error("generated structure failed verification ({relations} relation and {cyclicity} cyclicity violation(s))")]
    GeneratedFailed { relations: usize, cyclicity: usize },
    #[error("unit axiom fails on {0:?}")]
    NotUnital(String),
    #[error("associativity fails on ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("graded commutativity fails on ({0}, {1})")]
    NotGradedCommutative(String, String),
    #[error("pairing block between degrees {p} and {q} is degenerate")]
    DegenerateBlock { p: i64, q: i64 },
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
}

/// Graded bilinear form of degree `−n`, stored as a sparse basis matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicPairing {
    n: i64,
    entries: BTreeMap<(usize, usize), Q>,
}

/// The factor `s` in `Q(x,y) = s · Q(y,x)`.
pub fn antisymmetry_sign(deg_x: i64, deg_y: i64) -> i64 {
    sign_of((deg_x + 1) * (deg_y + 1) + 1)
}

impl CyclicPairing {
    pub fn new(n: i64) -> Self {
        CyclicPairing { n, entries: BTreeMap::new() }
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Q)> {
        self.entries.iter()
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    /// Sets a single matrix entry (no symmetry is imposed).
    pub fn set(&mut self, i: usize, j: usize, value: Q) {
        if value.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), value);
        }
    }

    /// Sets `Q(i,j)` and the entry `Q(j,i)` forced by graded antisymmetry.
    pub fn set_antisymmetric(&mut self, module: &GradedModule, i: usize, j: usize, value: Q) {
        let s = antisymmetry_sign(module.degree(i), module.degree(j));
        let back = &value * q_int(s);
        self.set(i, j, value);
        self.set(j, i, back);
    }

    /// `Q(x, y)` extended bilinearly.
    pub fn pair(&self, x: &Element, y: &Element) -> Nov {
        let mut out = Nov::zero(x.cutoff());
        for (i, a) in x.coeffs() {
            for (j, b) in y.coeffs() {
                if let Some(q) = self.entries.get(&(i, j)) {
                    out.add_scaled_q(&(a * b), q);
                }
            }
        }
        out
    }

    /// Matrix of `Q` restricted to degree `p` × degree `n − p`, in basis order.
    pub fn block(&self, module: &GradedModule, p: i64) -> Matrix<Q> {
        let rows = module.basis_in_degree(p);
        let cols = module.basis_in_degree(self.n - p);
        rows.iter().map(|&i| cols.iter().map(|&j| self.get(i, j)).collect()).collect()
    }

    /// True iff every block `A^p × A^{n−p}` is square and invertible.
    pub fn is_nondegenerate(&self, module: &GradedModule) -> bool {
        self.degenerate_block(module).is_none()
    }

    pub fn degenerate_block(&self, module: &GradedModule) -> Option<(i64, i64)> {
        for (&p, &r) in module.degree_ranks().iter() {
            let b = self.block(module, p);
            let cols = module.basis_in_degree(self.n - p).len();
            if cols != r || rank(&b) != r {
                return Some((p, self.n - p));
            }
        }
        None
    }

    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> CyclicPairing {
        CyclicPairing { n: self.n, entries: self.entries.iter().map(|(&(i, j), q)| ((f(i), f(j)), q.clone())).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CyclicViolation {
    /// `Q(x,y) ≠ 0` although `deg x + deg y ≠ n`.
    Degree { left: usize, right: usize },
    /// Graded antisymmetry fails on this pair.
    Antisymmetry { left: usize, right: usize },
    /// `Q(m_k(z₁…z_k), z₀) ≠ s · Q(m_k(z₀…z_{k−1}), z_k)` for `tuple = (z₀,…,z_k)`.
    Rotation { tuple: Vec<usize>, lhs: Nov, rhs: Nov },
}

impl CyclicViolation {
    pub fn display(&self, module: &GradedModule) -> String {
        match self {
            CyclicViolation::Degree { left, right } => {
                format!("degree: Q({},{}) nonzero off degree n", module.label(*left), module.label(*right))
            }
            CyclicViolation::Antisymmetry { left, right } => {
                format!("antisymmetry: Q({},{})", module.label(*left), module.label(*right))
            }
            CyclicViolation::Rotation { tuple, lhs, rhs } => {
                let l: Vec<&str> = tuple.iter().map(|&i| module.label(i)).collect();
                format!("rotation: tuple=({}) lhs={} rhs={}", l.join(","), lhs, rhs)
            }
        }
    }
}

/// Checks both conditions of n-cyclicity on every basis tuple with `1 ≤ k ≤ max_k`, modulo `T^energy`.
pub fn check_cyclicity(
    s: &AInftyStructure,
    q: &CyclicPairing,
    max_k: usize,
    energy: Energy,
) -> Result<Vec<CyclicViolation>, CyclicError> {
    let module = s.module();
    let degrees = module.degrees();
    if module.rank() > 0 {
        let ds: BTreeSet<i64> = degrees.iter().copied().collect();
        if !ds.iter().any(|d| ds.contains(&(q.n - d))) {
            return Err(CyclicError::DegreeRange { n: q.n });
        }
    }
    let s = s.truncated(energy)?;
    let mut out = Vec::new();

    for (&(i, j), v) in q.entries.iter() {
        if degrees[i] + degrees[j] != q.n {
            out.push(CyclicViolation::Degree { left: i, right: j });
        }
        let back = q.get(j, i);
        if *v != &back * q_int(antisymmetry_sign(degrees[i], degrees[j])) {
            out.push(CyclicViolation::Antisymmetry { left: i, right: j });
        }
    }

    let mut rows: BTreeMap<usize, Vec<(usize, &Q)>> = BTreeMap::new();
    for (&(i, j), v) in q.entries.iter() {
        rows.entry(i).or_default().push((j, v));
    }

    for k in 1..=max_k.min(s.k_max()) {
        // f[(z₀, z₁…z_k)] = Q(m_k(z₁…z_k), z₀)
        let mut f: BTreeMap<Vec<usize>, Nov> = BTreeMap::new();
        for (inputs, value) in s.op(k).entries() {
            for (l, c) in value.coeffs() {
                let Some(row) = rows.get(&l) else { continue };
                for &(z0, qv) in row {
                    let mut t = Vec::with_capacity(k + 1);
                    t.push(z0);
                    t.extend_from_slice(inputs);
                    let entry = f.entry(t).or_insert_with(|| Nov::zero(energy));
                    entry.add_scaled_q(c, qv);
                }
            }
        }
        f.retain(|_, v| !v.is_zero());
        let rot = |t: &[usize]| {
            let mut r = Vec::with_capacity(t.len());
            r.push(t[t.len() - 1]);
            r.extend_from_slice(&t[..t.len() - 1]);
            r
        };
        let mut candidates: BTreeSet<Vec<usize>> = BTreeSet::new();
        for t in f.keys() {
            candidates.insert(t.clone());
            let mut pre = t[1..].to_vec();
            pre.push(t[0]);
            candidates.insert(pre);
        }
        let zero = Nov::zero(energy);
        for t in candidates {
            let lhs = f.get(&t).unwrap_or(&zero).clone();
            let r = rot(&t);
            let rest: Vec<i64> = t[1..].iter().map(|&i| degrees[i]).collect();
            let sign = cyclic_rotation_sign(degrees[t[0]], &rest);
            let rhs = f.get(&r).unwrap_or(&zero).scale_q(&q_int(sign));
            if lhs != rhs {
                out.push(CyclicViolation::Rotation { tuple: t, lhs, rhs });
            }
        }
    }
    out.dedup();
    Ok(out)
}

/// `Σ_{k₁+k₂=k+1} Q(m_{k₁}(x^{⊗k₁}), m_{k₂}(x^{⊗k₂}))`.
pub fn lemma_sum(s: &AInftyStructure, q: &CyclicPairing, x: &Element, k: usize) -> Result<Nov, CyclicError> {
    let terms = s.kuranishi_terms(x)?;
    let mut out = Nov::zero(s.cutoff());
    for k1 in 0..=k + 1 {
        let k2 = k + 1 - k1;
        if k1 < terms.len() && k2 < terms.len() {
            out.add_assign_ref(&q.pair(&terms[k1], &terms[k2]));
        }
    }
    Ok(out)
}

/// `Q(κ(x),κ(x)) − Q(m₀(1),m₀(1))`.
pub fn darboux_defect(s: &AInftyStructure, q: &CyclicPairing, x: &Element) -> Result<Nov, CyclicError> {
    if q.n != 4 {
        return Err(CyclicError::NotFourDimensional(q.n));
    }
    let k = s.kuranishi_eval(x)?;
    let m0 = s.curvature();
    Ok(&q.pair(&k, &k) - &q.pair(&m0, &m0))
}

/// An A∞ structure together with a cyclic pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicStructure {
    pub s: AInftyStructure,
    pub q: CyclicPairing,
}

impl CyclicStructure {
    /// Relation violations up to arity `2·k_max` and cyclicity violations up to `k_max`.
    pub fn verify(&self) -> Result<(usize, usize), CyclicError> {
        let e = self.s.cutoff();
        let r = self.s.check_relations(2 * self.s.k_max(), e)?.len();
        let c = check_cyclicity(&self.s, &self.q, self.s.k_max(), e)?.len();
        Ok((r, c))
    }

    pub fn twist(&self, b: &Element) -> Result<CyclicStructure, CyclicError> {
        Ok(CyclicStructure { s: self.s.twist(b)?, q: self.q.clone() })
    }

    pub fn lifted(&self, cutoff: Energy) -> CyclicStructure {
        CyclicStructure { s: self.s.lifted(cutoff), q: self.q.clone() }
    }

    /// Degree-2 block of `Q` (for `n = 4`, a symmetric form).
    pub fn degree2_block(&self) -> Matrix<Q> {
        self.q.block(self.s.module(), 2)
    }
}

/// Extends `B` by its shifted dual `C^p = B^p ⊕ (B^{n−p})^∨` with the evaluation pairing.
pub fn cyclic_completion(b: &AInftyStructure, n: i64) -> Result<CyclicStructure, CyclicError> {
    let cutoff = b.cutoff();
    let base_violations = b.check_relations(2 * b.k_max(), cutoff)?.len();
    if base_violations > 0 {
        return Err(CyclicError::BaseFailsRelations(base_violations));
    }
    let bm = b.module();
    let r = bm.rank();
    let mut basis: Vec<(String, i64)> = bm.labels().iter().cloned().zip(bm.degrees().iter().copied()).collect();
    for i in 0..r {
        let dual = format!("{}*", bm.label(i));
        if bm.index_of(&dual).is_ok() {
            return Err(CyclicError::LabelCollision(dual));
        }
        basis.push((dual, n - bm.degree(i)));
    }
    let cm = GradedModule::new(basis).map_err(|e| match e {
        GradedError::DuplicateLabel(l) => CyclicError::LabelCollision(l),
        other => other.into(),
    })?;
    let dual = |i: usize| i + r;
    let degrees = cm.degrees().to_vec();

    let mut q = CyclicPairing::new(n);
    for i in 0..r {
        q.set_antisymmetric(&cm, i, dual(i), Q::one());
    }

    let mut c = AInftyStructure::new(cm.clone(), b.k_max(), cutoff);
    for (k, m) in b.ops().iter().enumerate() {
        for (inputs, value) in m.entries() {
            c.add_entry(k, inputs.clone(), value)?;
            if k == 0 {
                continue;
            }
            for (l, coef) in value.coeffs() {
                // Walk the rotation orbit of (l^∨; y₁…y_k), where F = Q(m_k(y), l^∨) = coef.
                let mut t: Vec<usize> = Vec::with_capacity(k + 1);
                t.push(dual(l));
                t.extend_from_slice(inputs);
                let mut f = coef.clone();
                for _ in 0..k {
                    let rest: Vec<i64> = t[1..].iter().map(|&i| degrees[i]).collect();
                    let sgn = cyclic_rotation_sign(degrees[t[0]], &rest);
                    f = f.scale_q(&q_int(sgn));
                    let last = t.pop().expect("nonempty tuple");
                    t.insert(0, last);
                    // Now Q(m_k(t₁…t_k), t₀) = f with t₀ ∈ B, so the output is f / Q(t₀^∨, t₀) · t₀^∨.
                    let z0 = t[0];
                    let qv = q.get(dual(z0), z0);
                    let out = Element::basis(dual(z0), f.scale_q(&qv.recip()));
                    c.add_entry(k, t[1..].to_vec(), &out)?;
                }
            }
        }
    }

    let cs = CyclicStructure { s: c, q };
    let (rel, cyc) = cs.verify()?;
    if rel > 0 || cyc > 0 {
        return Err(CyclicError::CompletionFailed { relations: rel, cyclicity: cyc });
    }
    Ok(cs)
}

/// Multiplication table of a graded-commutative unital Frobenius algebra over ℚ.
#[derive(Debug, Clone)]
pub struct FrobeniusTable {
    pub module: GradedModule,
    pub unit: usize,
    /// `x_i · x_j` as a sparse rational vector; absent pairs multiply to zero.
    pub products: BTreeMap<(usize, usize), BTreeMap<usize, Q>>,
    /// Trace on the top-degree basis.
    pub trace: BTreeMap<usize, Q>,
}

impl FrobeniusTable {
    fn product(&self, i: usize, j: usize) -> BTreeMap<usize, Q> {
        self.products.get(&(i, j)).cloned().unwrap_or_default()
    }

    fn mul_vec(&self, a: &BTreeMap<usize, Q>, b: &BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        let mut out: BTreeMap<usize, Q> = BTreeMap::new();
        for (&i, x) in a {
            for (&j, y) in b {
                for (o, z) in self.product(i, j) {
                    *out.entry(o).or_insert_with(Q::zero) += x * y * z;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    fn trace_of(&self, v: &BTreeMap<usize, Q>) -> Q {
        v.iter().map(|(i, c)| c * self.trace.get(i).cloned().unwrap_or_else(Q::zero)).sum()
    }
}

/// Strict cyclic structure with `m₂(x,y) = (−1)^{|x|} x·y` and `Q(x,y) = (−1)^{|x|} tr(x·y)`.
///
/// The sign twists make the graded-commutative product satisfy the A∞ and
/// cyclicity conventions used by the checkers; both are re-verified.
pub fn frobenius_cyclic(
    table: &FrobeniusTable,
    n: i64,
    k_max: usize,
    cutoff: Energy,
) -> Result<CyclicStructure, CyclicError> {
    let m = &table.module;
    let r = m.rank();
    let basis = |i: usize| -> BTreeMap<usize, Q> { [(i, Q::one())].into_iter().collect() };
    for i in 0..r {
        if table.product(table.unit, i) != basis(i) || table.product(i, table.unit) != basis(i) {
            return Err(CyclicError::NotUnital(m.label(i).to_string()));
        }
    }
    for i in 0..r {
        for j in 0..r {
            let ij = table.product(i, j);
            let ji: BTreeMap<usize, Q> = table
                .product(j, i)
                .into_iter()
                .map(|(o, c)| (o, c * q_int(sign_of(m.degree(i) * m.degree(j)))))
                .collect();
            if ij != ji {
                return Err(CyclicError::NotGradedCommutative(m.label(i).to_string(), m.label(j).to_string()));
            }
            for k in 0..r {
                let left = table.mul_vec(&ij, &basis(k));
                let right = table.mul_vec(&basis(i), &table.product(j, k));
                if left != right {
                    return Err(CyclicError::NotAssociative(
                        m.label(i).to_string(),
                        m.label(j).to_string(),
                        m.label(k).to_string(),
                    ));
                }
            }
        }
    }

    let mut q = CyclicPairing::new(n);
    for i in 0..r {
        for j in 0..r {
            let t = table.trace_of(&table.product(i, j));
            if !t.is_zero() {
                q.set(i, j, t * q_int(sign_of(m.degree(i))));
            }
        }
    }
    if let Some((p, qd)) = q.degenerate_block(m) {
        return Err(CyclicError::DegenerateBlock { p, q: qd });
    }

    let mut s = AInftyStructure::new(m.clone(), k_max, cutoff);
    for (&(i, j), out) in &table.products {
        let mut e = Element::zero(cutoff);
        for (&o, c) in out {
            e.add_coeff(o, &Nov::constant(c * q_int(sign_of(m.degree(i))), cutoff));
        }
        s.add_entry(2, vec![i, j], &e)?;
    }
    let cs = CyclicStructure { s, q };
    let (rel, cyc) = cs.verify()?;
    if rel > 0 || cyc > 0 {
        return Err(CyclicError::GeneratedFailed { relations: rel, cyclicity: cyc });
    }
    Ok(cs)
}

/// Labels used by [`poincare_model`] for the degree-`d` basis of rank `r`.
pub fn poincare_labels(d: usize, r: usize) -> Vec<String> {
    let stem = ["u", "a", "h", "c", "p"][d];
    match (d, r) {
        (0, 1) => vec!["1".to_string()],
        (4, 1) => vec!["pt".to_string()],
        _ => (1..=r).map(|i| format!("{stem}{i}")).collect(),
    }
}

/// Graded module with ranks `betti` and the `n = 4` pairing: identity between
/// degrees 0 and 4, `form` on degree 2, `deg13` as `Q(a_i, c_j)`, and the
/// remaining entries forced by graded antisymmetry.
pub fn poincare_model(
    betti: [usize; 5],
    form: &Matrix<Q>,
    deg13: &Matrix<Q>,
) -> Result<(GradedModule, CyclicPairing), CyclicError> {
    if betti[0] != betti[4] || betti[1] != betti[3] {
        return Err(CyclicError::RankMismatch(format!("betti numbers {betti:?} are not palindromic")));
    }
    let square = |m: &Matrix<Q>, r: usize| m.len() == r && m.iter().all(|row| row.len() == r);
    if !square(form, betti[2]) {
        return Err(CyclicError::RankMismatch("intersection form does not match b2".into()));
    }
    if !square(deg13, betti[1]) {
        return Err(CyclicError::RankMismatch("degree 1/3 pairing does not match b1".into()));
    }
    let mut basis = Vec::new();
    let mut offsets = [0usize; 5];
    for d in 0..5 {
        offsets[d] = basis.len();
        for l in poincare_labels(d, betti[d]) {
            basis.push((l, d as i64));
        }
    }
    let module = GradedModule::new(basis)?;
    let mut q = CyclicPairing::new(4);
    for i in 0..betti[0] {
        q.set_antisymmetric(&module, offsets[0] + i, offsets[4] + i, Q::one());
    }
    for i in 0..betti[1] {
        for j in 0..betti[1] {
            q.set_antisymmetric(&module, offsets[1] + i, offsets[3] + j, deg13[i][j].clone());
        }
    }
    for i in 0..betti[2] {
        for j in 0..betti[2] {
            q.set(offsets[2] + i, offsets[2] + j, form[i][j].clone());
        }
    }
    if let Some((p, qd)) = q.degenerate_block(&module) {
        return Err(CyclicError::DegenerateBlock { p, q: qd });
    }
    Ok((module, q))
}

/// Human-readable cutoff stamp used in reports.
pub fn cutoff_stamp(k: usize, e: Energy) -> String {
    format!("K={} E={}", k, format_energy(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn e(n: i64, d: i64) -> Energy {
        Energy::new(n, d)
    }

    #[test]
    fn zero_structure_is_cyclic_for_any_antisymmetric_pairing() {
        let m = GradedModule::new(vec![("a".into(), 1), ("b".into(), 3), ("h".into(), 2)]).unwrap();
        let mut q = CyclicPairing::new(4);
        q.set_antisymmetric(&m, 0, 1, q_int(3));
        q.set(2, 2, q_int(-2));
        let s = AInftyStructure::new(m, 3, e(2, 1));
        assert!(check_cyclicity(&s, &q, 3, e(2, 1)).unwrap().is_empty());
    }

    #[test]
    fn degree_range_error() {
        let m = GradedModule::new(vec![("a".into(), 1)]).unwrap();
        let s = AInftyStructure::new(m, 2, e(2, 1));
        assert!(matches!(check_cyclicity(&s, &CyclicPairing::new(4), 2, e(2, 1)), Err(CyclicError::DegreeRange { .. })));
    }

    #[test]
    fn torus_model_is_cyclic_and_doubling_breaks_rotation() {
        let cs = corpus::torus4(6, e(3, 1));
        assert!(check_cyclicity(&cs.s, &cs.q, 6, e(3, 1)).unwrap().is_empty());
        let m = cs.s.module();
        let mut q = cs.q.clone();
        let (i, j) = (m.index_of("e1").unwrap(), m.index_of("e234").unwrap());
        q.set_antisymmetric(m, i, j, &q.get(i, j) * q_int(2));
        let v = check_cyclicity(&cs.s, &q, 6, e(3, 1)).unwrap();
        assert!(v.iter().any(|x| matches!(x, CyclicViolation::Rotation { .. })));
        let mut q1 = cs.q.clone();
        q1.set(i, j, &q1.get(i, j) * q_int(2));
        let v1 = check_cyclicity(&cs.s, &q1, 6, e(3, 1)).unwrap();
        assert!(v1.iter().any(|x| matches!(x, CyclicViolation::Antisymmetry { .. })));
    }

    #[test]
    fn rank_one_completion() {
        let cut = e(3, 1);
        let m = GradedModule::new(vec![("1".into(), 0)]).unwrap();
        let mut b = AInftyStructure::new(m, 2, cut);
        b.add_labeled(2, &["1", "1"], "1", Nov::one(cut)).unwrap();
        let c = cyclic_completion(&b, 4).unwrap();
        let cm = c.s.module();
        assert_eq!(cm.degree_ranks(), [(0, 1), (4, 1)].into_iter().collect());
        assert_eq!(c.q.get(0, 1), Q::one());
        let one = cm.index_of("1").unwrap();
        let dual = cm.index_of("1*").unwrap();
        // Unitality extends to the dual: m₂(1, 1*) = 1* and m₂(1*, 1) = 1*.
        assert_eq!(c.s.op(2).get(&[one, dual]), Some(&Element::basis(dual, Nov::one(cut))));
        assert_eq!(c.s.op(2).get(&[dual, one]), Some(&Element::basis(dual, Nov::one(cut))));
    }

    #[test]
    fn zero_completion() {
        let m = GradedModule::new(vec![]).unwrap();
        let b = AInftyStructure::new(m, 2, e(3, 1));
        let c = cyclic_completion(&b, 4).unwrap();
        assert_eq!(c.s.module().rank(), 0);
    }

    #[test]
    fn truncated_polynomial_completion_signs() {
        let cut = e(3, 1);
        let b = corpus::truncated_polynomial(4, 3, cut);
        let c = cyclic_completion(&b, 4).unwrap();
        let cm = c.s.module();
        let a = cm.index_of("a").unwrap();
        let a3d = cm.index_of("a3*").unwrap();
        let a2d = cm.index_of("a2*").unwrap();
        assert_eq!(c.s.op(2).get(&[a, a3d]), Some(&Element::basis(a2d, Nov::one(cut))));
        assert_eq!(c.s.op(2).get(&[a3d, a]), Some(&Element::basis(a2d, Nov::constant(q_int(-1), cut))));
    }

    #[test]
    fn exterior_one_generator_completion_satisfies_lemma() {
        let cut = e(3, 1);
        let b = corpus::exterior(1, 3, cut);
        let c = cyclic_completion(&b, 4).unwrap();
        assert_eq!(c.s.module().rank(), 4);
        let mut rng = corpus::rng(7);
        for _ in 0..10 {
            let x = corpus::random_point(&mut rng, c.s.module(), cut, 2);
            for k in 0..=6 {
                assert!(lemma_sum(&c.s, &c.q, &x, k).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn label_collision_is_an_error() {
        let cut = e(3, 1);
        let m = GradedModule::new(vec![("x".into(), 0), ("x*".into(), 4)]).unwrap();
        let b = AInftyStructure::new(m, 2, cut);
        assert!(matches!(cyclic_completion(&b, 4), Err(CyclicError::LabelCollision(_))));
    }

    #[test]
    fn degenerate_trace_rejected() {
        let cut = e(3, 1);
        let m = GradedModule::new(vec![("1".into(), 0), ("h".into(), 2), ("pt".into(), 4)]).unwrap();
        let mut products = BTreeMap::new();
        for i in 0..3 {
            products.insert((0, i), [(i, Q::one())].into_iter().collect());
            products.insert((i, 0), [(i, Q::one())].into_iter().collect());
        }
        let table = FrobeniusTable { module: m, unit: 0, products, trace: [(2, Q::one())].into_iter().collect() };
        assert!(matches!(frobenius_cyclic(&table, 4, 3, cut), Err(CyclicError::DegenerateBlock { .. })));
    }

    #[test]
    fn poincare_model_examples() {
        let (m, q) = poincare_model([1, 0, 0, 0, 1], &vec![], &vec![]).unwrap();
        assert_eq!(q.entries().count(), 2);
        assert_eq!(m.rank(), 2);
        let (m, q) = poincare_model([1, 0, 1, 0, 1], &vec![vec![q_int(1)]], &vec![]).unwrap();
        assert_eq!(q.block(&m, 2), vec![vec![q_int(1)]]);
        let id = vec![vec![q_int(1), q_int(0)], vec![q_int(0), q_int(1)]];
        let (m, q) = poincare_model([1, 2, 1, 2, 1], &vec![vec![q_int(-1)]], &id).unwrap();
        let s = AInftyStructure::new(m.clone(), 2, e(2, 1));
        assert!(check_cyclicity(&s, &q, 2, e(2, 1)).unwrap().is_empty());
        let a1 = m.index_of("a1").unwrap();
        let c1 = m.index_of("c1").unwrap();
        assert_eq!(q.get(c1, a1), q_int(-1));
        assert!(poincare_model([1, 0, 1, 0, 1], &vec![vec![q_int(0)]], &vec![]).is_err());
        assert!(poincare_model([1, 1, 0, 0, 1], &vec![], &vec![]).is_err());
    }

    #[test]
    fn darboux_requires_n4() {
        let cut = e(2, 1);
        let m = GradedModule::new(vec![("a".into(), 1), ("b".into(), 2)]).unwrap();
        let s = AInftyStructure::new(m, 2, cut);
        let q = CyclicPairing::new(3);
        assert!(matches!(darboux_defect(&s, &q, &Element::zero(cut)), Err(CyclicError::NotFourDimensional(3))));
    }
}
