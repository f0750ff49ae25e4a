//! Maurer-Cartan verification, bounded solvers, and the unobstructedness
//! certificate for definite cyclic structures.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::ainfty::{AInftyError, AInftyStructure};
use crate::cyclic::{darboux_defect, CyclicError, CyclicStructure};
use crate::graded::Element;
use crate::linalg::{definiteness, solve, Definiteness, Matrix};
use crate::novikov::{Nov, TermKey};
use crate::poly::{Monomial, Poly};
use crate::rational::{format_energy, q_sqrt_exact, Energy, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McError {
    #[error(transparent)]
    AInfty(#[from] AInftyError),
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
    #[error("quadratic form is not definite ({0:?})")]
    NotDefinite(Definiteness),
    #[error("Q(v,v) = {0} is not zero; isotropy precondition fails")]
    NotIsotropic(String),
    #[error("linearization not surjective: m1 has no valuation-zero part covering the residual")]
    LinearizationNotSurjective,
    #[error("the supplied point does not satisfy the Maurer-Cartan equation")]
    NotMaurerCartan,
    #[error("energy grid must be nonempty, strictly increasing and positive")]
    InvalidGrid,
    #[error("input fails verification at doubled cutoff ({relations} relation and {cyclicity} cyclicity violation(s))")]
    InputInvalid { relations: usize, cyclicity: usize },
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum McResult {
    Solution { b: Element },
    /// The first leading residual class that the linearization cannot absorb.
    Obstruction { energy: Energy, e_power: i64, class_vector: Element },
    Exhausted { description: String },
}

/// `κ(b) = 0 mod T^E` at the structure's cutoff.
pub fn mc_verify(s: &AInftyStructure, b: &Element) -> Result<bool, McError> {
    Ok(s.kuranishi_eval(b)?.is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveMode {
    /// Filtration induction `b ← b − G(κ(b))` with `G` a right inverse of the valuation-0 part of `m₁`.
    Newton { max_iterations: usize },
    /// `b = Σ c_ij T^{λ_i} u_j` on the given energy grid, solved stage by stage.
    Ansatz { grid: Vec<Energy>, max_nodes: usize },
}

pub fn mc_solve(s: &AInftyStructure, mode: &SolveMode) -> Result<McResult, McError> {
    let result = match mode {
        SolveMode::Newton { max_iterations } => newton(s, *max_iterations)?,
        SolveMode::Ansatz { grid, max_nodes } => ansatz(s, grid, *max_nodes)?,
    };
    if let McResult::Solution { b } = &result {
        if !mc_verify(s, b)? {
            return Ok(McResult::Exhausted { description: "candidate failed re-verification".into() });
        }
    }
    Ok(result)
}

/// Rational matrix of the `T⁰e⁰` part of `m₁ : A¹ → A²` (rows: degree-2 basis, columns: degree-1 basis).
pub fn linearization(s: &AInftyStructure) -> Matrix<Q> {
    let m = s.module();
    let d1 = m.basis_in_degree(1);
    let d2 = m.basis_in_degree(2);
    let zero_key: TermKey = (Energy::zero(), 0);
    d2.iter()
        .map(|&o| {
            d1.iter()
                .map(|&i| {
                    s.op(1)
                        .get(&[i])
                        .and_then(|v| v.coeff(o))
                        .and_then(|c| c.coeff(&zero_key).as_constant())
                        .unwrap_or_else(Q::zero)
                })
                .collect()
        })
        .collect()
}

fn newton(s: &AInftyStructure, max_iterations: usize) -> Result<McResult, McError> {
    let m = s.module();
    let cutoff = s.cutoff();
    let d1 = m.basis_in_degree(1);
    let d2 = m.basis_in_degree(2);
    let l = linearization(s);
    let l_is_zero = l.iter().all(|row| row.iter().all(Zero::is_zero));
    let mut b = Element::zero(cutoff);
    for _ in 0..max_iterations {
        let r = s.kuranishi_eval(&b)?;
        if r.is_zero() {
            return Ok(McResult::Solution { b });
        }
        if l_is_zero {
            return Err(McError::LinearizationNotSurjective);
        }
        let key = r
            .coeffs()
            .map(|(_, c)| c.leading_term().map(|(l, e, _)| (l, e)).expect("nonzero"))
            .min()
            .expect("nonzero residual");
        let mut w = Vec::with_capacity(d2.len());
        for &o in &d2 {
            let c = r.coeff(o).map(|c| c.coeff(&key)).unwrap_or_default();
            match c.as_constant() {
                Some(q) => w.push(q),
                None => {
                    return Ok(McResult::Exhausted { description: "residual has symbolic coefficients".into() });
                }
            }
        }
        match solve(&l, &w) {
            None => {
                let mut class_vector = Element::zero(cutoff);
                for (&o, q) in d2.iter().zip(&w) {
                    class_vector.add_coeff(o, &Nov::q_term(q.clone(), key.0, key.1, cutoff));
                }
                return Ok(McResult::Obstruction { energy: key.0, e_power: key.1, class_vector });
            }
            Some(c) => {
                for (&i, q) in d1.iter().zip(&c) {
                    b.add_coeff(i, &Nov::q_term(-q.clone(), key.0, key.1, cutoff));
                }
            }
        }
    }
    Ok(McResult::Exhausted { description: format!("newton: no convergence within {max_iterations} iterations") })
}

/// Rational roots of a univariate polynomial whose nonzero part has degree ≤ 2, largest first.
/// `None` when the degree after removing a power of the variable exceeds 2.
fn rational_roots(p: &Poly, v: u32) -> Option<Vec<Q>> {
    let cs: Vec<Q> = p.coefficients_in(v).iter().map(|c| c.as_constant().expect("univariate")).collect();
    let low = cs.iter().position(|c| !c.is_zero())?;
    let high = cs.iter().rposition(|c| !c.is_zero())?;
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(Q::zero());
    }
    match high - low {
        0 => {}
        1 => roots.push(-&cs[low] / &cs[low + 1]),
        2 => {
            let (a, b, c) = (&cs[low + 2], &cs[low + 1], &cs[low]);
            let disc = b * b - Q::from_integer(4.into()) * a * c;
            if let Some(sq) = q_sqrt_exact(&disc) {
                let two_a = a * Q::from_integer(2.into());
                roots.push((-b + &sq) / &two_a);
                roots.push((-b - &sq) / &two_a);
            }
        }
        _ => return None,
    }
    roots.sort_by(|a, b| b.cmp(a));
    roots.dedup();
    Some(roots)
}

struct AnsatzSearch<'a> {
    equations: &'a [Poly],
    nodes: usize,
    max_nodes: usize,
    unsupported: bool,
}

impl AnsatzSearch<'_> {
    fn search(&mut self, assignment: &BTreeMap<u32, Q>) -> Option<BTreeMap<u32, Q>> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return None;
        }
        let live: Vec<Poly> =
            self.equations.iter().map(|e| e.substitute(assignment)).filter(|e| !e.is_zero()).collect();
        if live.is_empty() {
            return Some(assignment.clone());
        }
        if live.iter().any(Poly::is_constant) {
            return None;
        }
        // Lowest-energy univariate equation first; multivariate stages are deferred.
        if let Some(eq) = live.iter().find(|e| e.variables().len() == 1) {
            let v = *eq.variables().iter().next().expect("one variable");
            let Some(roots) = rational_roots(eq, v) else {
                self.unsupported = true;
                return None;
            };
            for r in roots {
                let mut next = assignment.clone();
                next.insert(v, r);
                if let Some(sol) = self.search(&next) {
                    return Some(sol);
                }
            }
            return None;
        }
        // Only coupled equations remain: try the remaining unknowns at zero.
        let mut next = assignment.clone();
        for e in &live {
            for v in e.variables() {
                next.entry(v).or_insert_with(Q::zero);
            }
        }
        let ok = self.equations.iter().all(|e| e.substitute(&next).is_zero());
        if ok {
            Some(next)
        } else {
            self.unsupported = true;
            None
        }
    }
}

fn ansatz(s: &AInftyStructure, grid: &[Energy], max_nodes: usize) -> Result<McResult, McError> {
    if grid.is_empty() || grid[0] <= Energy::zero() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(McError::InvalidGrid);
    }
    let m = s.module();
    let cutoff = s.cutoff();
    let d1 = m.basis_in_degree(1);
    let var = |gi: usize, j: usize| (gi * d1.len() + j) as u32;
    let mut x = Element::zero(cutoff);
    for (gi, &lam) in grid.iter().enumerate() {
        for (j, &i) in d1.iter().enumerate() {
            x.add_coeff(i, &Nov::term(Poly::var(var(gi, j)), lam, 0, cutoff));
        }
    }
    let k = s.kuranishi_eval(&x)?;
    // Equations ordered by energy, then by basis index.
    let mut by_key: BTreeMap<(TermKey, usize), Poly> = BTreeMap::new();
    for (o, c) in k.coeffs() {
        for (key, p) in c.terms() {
            by_key.insert((*key, o), p.clone());
        }
    }
    let equations: Vec<Poly> = by_key.into_values().collect();
    let mut search = AnsatzSearch { equations: &equations, nodes: 0, max_nodes, unsupported: false };
    let found = search.search(&BTreeMap::new());
    let Some(mut assignment) = found else {
        let why = if search.nodes > max_nodes {
            format!("node budget of {max_nodes} exceeded")
        } else if search.unsupported {
            "a stage needs more than per-unknown degree 2 or coupled solving".to_string()
        } else {
            "no rational solution on the grid".to_string()
        };
        let grid_s: Vec<String> = grid.iter().map(format_energy).collect();
        return Ok(McResult::Exhausted { description: format!("ansatz grid {{{}}}: {why}", grid_s.join(", ")) });
    };
    for gi in 0..grid.len() {
        for j in 0..d1.len() {
            assignment.entry(var(gi, j)).or_insert_with(Q::zero);
        }
    }
    Ok(McResult::Solution { b: x.substitute(&assignment) })
}

/// Outcome of the lex-leading-term induction on an isotropic vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropyCertificate {
    pub definiteness: Definiteness,
    /// Cutoff at which `Q(v,v) = 0` was observed.
    pub cutoff: Energy,
    /// Every component of `v` is certified zero below this energy (half the cutoff).
    pub certified_below: Energy,
    /// Distinct `(λ, e)` levels the induction visited below the bound (each forced to zero).
    pub levels_checked: usize,
    /// Terms of `v` at or above the bound, which `Q(v,v) mod T^E` cannot see.
    pub unreached_terms: usize,
}

/// Certifies `v ≡ 0 mod T^{E/2}` from `Q(v,v) = 0 mod T^E` and definiteness of `Q`.
///
/// The lowest `(λ,e)` component `w` of `v` contributes exactly `Q(w,w)` to the
/// `(2λ,2e)` component of `Q(v,v)`. For polynomial coefficients the grlex-leading
/// monomial `μ` of `w` gives the coefficient `cᵀQc` of `μ²`, so definiteness forces
/// `w = 0`.
pub fn zero_from_isotropy(q_block: &Matrix<Q>, v: &[Nov]) -> Result<IsotropyCertificate, McError> {
    let d = definiteness(q_block);
    if !matches!(d, Definiteness::Positive | Definiteness::Negative) {
        return Err(McError::NotDefinite(d));
    }
    let cutoff = v.first().map(Nov::cutoff).unwrap_or_else(|| Energy::from_integer(1));
    let mut qvv = Nov::zero(cutoff);
    for (i, a) in v.iter().enumerate() {
        for (j, b) in v.iter().enumerate() {
            if !q_block[i][j].is_zero() {
                qvv.add_scaled_q(&(a * b), &q_block[i][j]);
            }
        }
    }
    if !qvv.is_zero() {
        return Err(McError::NotIsotropic(qvv.to_string()));
    }
    let bound = cutoff / Energy::from_integer(2);
    let mut keys: Vec<TermKey> = v.iter().flat_map(|c| c.terms().map(|(k, _)| *k)).collect();
    keys.sort();
    keys.dedup();
    let mut levels_checked = 0;
    for key in keys.iter().filter(|k| k.0 < bound) {
        levels_checked += 1;
        let w: Vec<Poly> = v.iter().map(|c| c.coeff(key)).collect();
        let mu: Option<Monomial> = w.iter().filter_map(|p| p.leading().map(|(m, _)| m.clone())).max();
        let Some(mu) = mu else { continue };
        let c: Vec<Q> = w.iter().map(|p| p.coeff(&mu)).collect();
        let mut self_pairing = Q::zero();
        for i in 0..c.len() {
            for j in 0..c.len() {
                self_pairing += &c[i] * &q_block[i][j] * &c[j];
            }
        }
        let observed = qvv.coeff(&(key.0 + key.0, key.1 + key.1)).coeff(&mu.mul(&mu));
        return Err(McError::Internal(format!(
            "leading component at T^({}) e^{} has self-pairing {} but Q(v,v) has {} there",
            format_energy(&key.0),
            key.1,
            self_pairing,
            observed
        )));
    }
    let unreached_terms = v.iter().map(|c| c.terms().filter(|(k, _)| k.0 >= bound).count()).sum();
    Ok(IsotropyCertificate { definiteness: d, cutoff, certified_below: bound, levels_checked, unreached_terms })
}

/// One run of the chain `Q(κ,κ) = Q(m₀,m₀) = … = 0 ⇒ κ ≡ 0` on a structure at doubled cutoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    /// `Q(κ(x),κ(x)) − Q(m₀,m₀) = 0` at the formal point.
    pub darboux_symbolic: bool,
    /// `Q(m₀(1),m₀(1)) = 0` via the linked Darboux identities and the valuation of `κ(b)`.
    pub anchor: bool,
    pub isotropy: Option<IsotropyCertificate>,
    /// Independent route: the symbolic κ, expanded directly, vanishes mod `T^E`.
    pub direct: bool,
    /// Number of nonzero symbolic terms of κ below `E` (0 on success).
    pub residual_terms: usize,
}

impl ChainReport {
    pub fn ok(&self) -> bool {
        self.darboux_symbolic && self.anchor && self.isotropy.is_some() && self.direct
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnobstructednessReport {
    pub k_max: usize,
    pub cutoff: Energy,
    pub doubled_cutoff: Energy,
    pub definiteness: Definiteness,
    pub weight: Energy,
    pub part1: ChainReport,
    pub part2: Vec<(Element, ChainReport)>,
}

impl UnobstructednessReport {
    pub fn success(&self) -> bool {
        self.part1.ok() && self.part2.iter().all(|(_, r)| r.ok())
    }
}

fn chain(t: &CyclicStructure, anchor: bool, weight: Energy, cutoff: Energy) -> Result<ChainReport, McError> {
    let dirs = t.s.default_directions(weight);
    let x = t.s.symbolic_point(&dirs)?;
    let darboux_symbolic = darboux_defect(&t.s, &t.q, &x)?.is_zero();
    let k = t.s.kuranishi_eval(&x)?;
    let d2 = t.s.module().basis_in_degree(2);
    let v: Vec<Nov> = d2.iter().map(|&o| k.coeff(o).cloned().unwrap_or_else(|| Nov::zero(k.cutoff()))).collect();
    let isotropy = if darboux_symbolic && anchor {
        match zero_from_isotropy(&t.degree2_block(), &v) {
            Ok(c) => Some(c),
            Err(McError::NotIsotropic(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let low = k.truncate(cutoff);
    let residual_terms = low.coeffs().map(|(_, c)| c.num_terms()).sum();
    Ok(ChainReport { darboux_symbolic, anchor, isotropy, direct: low.is_zero(), residual_terms })
}

/// Certifies `κ ≡ 0` and `κ^{b′} ≡ 0` (for each sample) modulo `T^E` on a definite `n = 4` structure.
///
/// The stored structure constants are treated as exact, so all identities are
/// evaluated at cutoff `2E`; isotropy there yields vanishing below `E`.
pub fn unobstructedness_certificate(
    cs: &CyclicStructure,
    b: &Element,
    samples: &[Element],
    weight: Energy,
) -> Result<UnobstructednessReport, McError> {
    if cs.q.n() != 4 {
        return Err(CyclicError::NotFourDimensional(cs.q.n()).into());
    }
    let d = definiteness(&cs.degree2_block());
    if !matches!(d, Definiteness::Positive | Definiteness::Negative) {
        return Err(McError::NotDefinite(d));
    }
    if !mc_verify(&cs.s, b)? {
        return Err(McError::NotMaurerCartan);
    }
    let e = cs.s.cutoff();
    let e2 = e + e;
    let lifted = cs.lifted(e2);
    let (relations, cyclicity) = lifted.verify()?;
    if relations > 0 || cyclicity > 0 {
        return Err(McError::InputInvalid { relations, cyclicity });
    }
    let b2 = b.lift_exact(e2);
    // Q(κ(b),κ(b)) vanishes mod T^{2E} because κ(b) has valuation ≥ E.
    let kb = lifted.s.kuranishi_eval(&b2)?;
    if !kb.truncate(e).is_zero() {
        return Err(McError::Internal("MC point fails at doubled cutoff".into()));
    }
    let qbb = lifted.q.pair(&kb, &kb);
    let db = darboux_defect(&lifted.s, &lifted.q, &b2)?;
    // Q(m₀,m₀) = Q(κ(b),κ(b)) − defect(b).
    let anchor0 = qbb.is_zero() && db.is_zero();
    let part1 = chain(&lifted, anchor0, weight, e)?;

    let mut part2 = Vec::new();
    for bp in samples {
        let bp2 = bp.lift_exact(e2);
        let twisted = lifted.twist(&bp2)?;
        // m₀^{b′} = κ(b′) and Q(κ(b′),κ(b′)) = Q(m₀,m₀) by the Darboux identity at b′.
        let curvature_matches = twisted.s.curvature() == lifted.s.kuranishi_eval(&bp2)?;
        let dbp = darboux_defect(&lifted.s, &lifted.q, &bp2)?;
        let anchor = anchor0 && curvature_matches && dbp.is_zero();
        part2.push((bp.clone(), chain(&twisted, anchor, weight, e)?));
    }
    Ok(UnobstructednessReport { k_max: cs.s.k_max(), cutoff: e, doubled_cutoff: e2, definiteness: d, weight, part1, part2 })
}

/// `Q(v,v)` for a coefficient vector; exposed for tests and reports.
pub fn quadratic_value(q_block: &Matrix<Q>, v: &[Nov]) -> Nov {
    let cutoff = v.first().map(Nov::cutoff).unwrap_or_else(Energy::one);
    let mut out = Nov::zero(cutoff);
    for (i, a) in v.iter().enumerate() {
        for (j, b) in v.iter().enumerate() {
            if !q_block[i][j].is_zero() {
                out.add_scaled_q(&(a * b), &q_block[i][j]);
            }
        }
    }
    out
}

/// Sign of a definite block, or `None`.
pub fn definite_sign(q_block: &Matrix<Q>) -> Option<i64> {
    match definiteness(q_block) {
        Definiteness::Positive => Some(1),
        Definiteness::Negative => Some(-1),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::cyclic::cyclic_completion;
    use crate::graded::GradedModule;
    use crate::rational::{q_frac, q_int};

    fn e(n: i64, d: i64) -> Energy {
        Energy::new(n, d)
    }

    fn toy(cut: Energy) -> AInftyStructure {
        let m = GradedModule::new(vec![("u".into(), 1), ("v".into(), 2)]).unwrap();
        let mut s = AInftyStructure::new(m, 2, cut);
        s.add_labeled(0, &[], "v", Nov::t_pow(e(1, 1), cut)).unwrap();
        s.add_labeled(2, &["u", "u"], "v", Nov::constant(q_int(-1), cut)).unwrap();
        s
    }

    #[test]
    fn mc_verify_examples() {
        let cut = e(3, 1);
        let s = toy(cut);
        assert!(mc_verify(&s, &Element::basis(0, Nov::t_pow(e(1, 2), cut))).unwrap());
        assert!(!mc_verify(&s, &Element::basis(0, Nov::t_pow(e(1, 1), cut))).unwrap());
        let strict = corpus::torus4(3, cut);
        assert!(mc_verify(&strict.s, &Element::zero(cut)).unwrap());
    }

    #[test]
    fn mc_verify_matches_twisted_curvature() {
        let cut = e(3, 1);
        let s = toy(cut);
        for c in [-1i64, 0, 1, 2] {
            let b = Element::basis(0, Nov::q_term(q_int(c), e(1, 2), 0, cut));
            assert_eq!(mc_verify(&s, &b).unwrap(), s.twist(&b).unwrap().curvature().is_zero());
        }
    }

    #[test]
    fn ansatz_solves_toy() {
        let cut = e(3, 1);
        let s = toy(cut);
        let r = mc_solve(&s, &SolveMode::Ansatz { grid: vec![e(1, 2), e(1, 1)], max_nodes: 1000 }).unwrap();
        assert_eq!(r, McResult::Solution { b: Element::basis(0, Nov::t_pow(e(1, 2), cut)) });
    }

    #[test]
    fn newton_refuses_toy() {
        let s = toy(e(3, 1));
        assert_eq!(
            mc_solve(&s, &SolveMode::Newton { max_iterations: 50 }),
            Err(McError::LinearizationNotSurjective)
        );
    }

    #[test]
    fn zero_kappa_gives_zero_solution() {
        let cut = e(2, 1);
        let cs = corpus::torus4(3, cut);
        let r = mc_solve(&cs.s, &SolveMode::Newton { max_iterations: 5 }).unwrap();
        assert_eq!(r, McResult::Solution { b: Element::zero(cut) });
        let r = mc_solve(&cs.s, &SolveMode::Ansatz { grid: vec![e(1, 2)], max_nodes: 1000 }).unwrap();
        assert!(matches!(r, McResult::Solution { .. }));
    }

    fn linear_model(cut: Energy, obstructed: bool) -> AInftyStructure {
        let mut basis = vec![("u".to_string(), 1), ("v".to_string(), 2)];
        if obstructed {
            basis.push(("w".to_string(), 2));
        }
        let m = GradedModule::new(basis).unwrap();
        let mut s = AInftyStructure::new(m, 2, cut);
        s.add_labeled(0, &[], "v", Nov::t_pow(e(1, 1), cut)).unwrap();
        if obstructed {
            s.add_labeled(0, &[], "w", Nov::t_pow(e(1, 1), cut)).unwrap();
        }
        s.add_labeled(1, &["u"], "v", Nov::one(cut)).unwrap();
        s.add_labeled(2, &["u", "u"], "v", Nov::one(cut)).unwrap();
        s
    }

    #[test]
    fn newton_converges_on_linear_model() {
        let cut = e(4, 1);
        let s = linear_model(cut, false);
        assert!(s.check_relations(4, cut).unwrap().is_empty());
        let r = mc_solve(&s, &SolveMode::Newton { max_iterations: 50 }).unwrap();
        let McResult::Solution { b } = r else { panic!("expected a solution, got {r:?}") };
        assert!(mc_verify(&s, &b).unwrap());
        // Leading correction is −T·u.
        assert_eq!(b.coeff(0).unwrap().leading_term().unwrap().0, e(1, 1));
    }

    #[test]
    fn newton_reports_obstruction() {
        let cut = e(3, 1);
        let s = linear_model(cut, true);
        let r = mc_solve(&s, &SolveMode::Newton { max_iterations: 50 }).unwrap();
        let McResult::Obstruction { energy, class_vector, .. } = r else { panic!("{r:?}") };
        assert_eq!(energy, e(1, 1));
        assert_eq!(class_vector.len(), 2);
    }

    #[test]
    fn ansatz_exhausts_without_rational_root() {
        let cut = e(3, 1);
        let m = GradedModule::new(vec![("u".into(), 1), ("v".into(), 2)]).unwrap();
        let mut s = AInftyStructure::new(m, 2, cut);
        s.add_labeled(0, &[], "v", Nov::q_term(q_int(2), e(1, 1), 0, cut)).unwrap();
        s.add_labeled(2, &["u", "u"], "v", Nov::constant(q_int(-1), cut)).unwrap();
        let r = mc_solve(&s, &SolveMode::Ansatz { grid: vec![e(1, 2)], max_nodes: 100 }).unwrap();
        assert!(matches!(r, McResult::Exhausted { .. }));
    }

    #[test]
    fn roots_are_exact() {
        let x = Poly::var(0);
        let p = Poly::one().sub(&x.mul(&x));
        assert_eq!(rational_roots(&p, 0), Some(vec![q_int(1), q_int(-1)]));
        let mono = x.pow(3).scale(&q_int(5));
        assert_eq!(rational_roots(&mono, 0), Some(vec![q_int(0)]));
        let two = Poly::constant(q_int(2)).sub(&x.mul(&x));
        assert_eq!(rational_roots(&two, 0), Some(vec![]));
        let lin = x.scale(&q_int(3)).add(&Poly::constant(q_int(1)));
        assert_eq!(rational_roots(&lin, 0), Some(vec![q_frac(-1, 3)]));
    }

    #[test]
    fn isotropy_examples() {
        let cut = e(3, 1);
        let id1 = vec![vec![q_int(1)]];
        let c = zero_from_isotropy(&id1, &[Nov::zero(cut)]).unwrap();
        assert_eq!(c.unreached_terms, 0);
        assert!(matches!(
            zero_from_isotropy(&id1, &[Nov::t_pow(e(1, 2), cut)]),
            Err(McError::NotIsotropic(_))
        ));
        let indefinite = vec![vec![q_int(1), q_int(0)], vec![q_int(0), q_int(-1)]];
        assert!(matches!(
            zero_from_isotropy(&indefinite, &[Nov::zero(cut), Nov::zero(cut)]),
            Err(McError::NotDefinite(Definiteness::Indefinite))
        ));
        // Isotropic for the indefinite form but rejected for the definite one.
        let v = [Nov::t_pow(e(1, 2), cut), Nov::t_pow(e(1, 2), cut)];
        let id2 = vec![vec![q_int(1), q_int(0)], vec![q_int(0), q_int(1)]];
        assert!(quadratic_value(&indefinite, &v).is_zero());
        assert!(matches!(zero_from_isotropy(&id2, &v), Err(McError::NotIsotropic(_))));
    }

    #[test]
    fn isotropy_on_random_candidates() {
        use rand::Rng;
        let cut = e(3, 1);
        let id2 = vec![vec![q_int(1), q_int(0)], vec![q_int(0), q_int(1)]];
        let mut rng = corpus::rng(11);
        let energies = [e(1, 2), e(1, 1), e(3, 2), e(2, 1), e(5, 2)];
        for _ in 0..200 {
            let mut v = vec![Nov::zero(cut), Nov::zero(cut)];
            for comp in v.iter_mut() {
                for _ in 0..rng.gen_range(0..3) {
                    let lam = energies[rng.gen_range(0..energies.len())];
                    let p = Poly::var(rng.gen_range(0..2)).scale(&q_int(rng.gen_range(-2..=2)));
                    comp.add_assign_ref(&Nov::term(p, lam, rng.gen_range(-1..=1), cut));
                }
            }
            let low_zero = v.iter().all(|c| c.truncate(e(3, 2)).unwrap().is_zero());
            match zero_from_isotropy(&id2, &v) {
                Ok(cert) => {
                    assert!(low_zero);
                    assert_eq!(cert.certified_below, e(3, 2));
                }
                Err(McError::NotIsotropic(_)) => assert!(!low_zero),
                Err(other) => panic!("{other}"),
            }
        }
    }

    #[test]
    fn certificate_on_cp2_twists() {
        let cut = e(2, 1);
        let cs = corpus::definite_model(&vec![vec![q_int(1)]], &vec![], 3, cut);
        let mut rng = corpus::rng(2);
        let samples: Vec<Element> = (0..5).map(|_| corpus::random_point(&mut rng, cs.s.module(), cut, 2)).collect();
        let r = unobstructedness_certificate(&cs, &Element::zero(cut), &samples, e(1, 2)).unwrap();
        assert!(r.success(), "{r:?}");
    }

    #[test]
    fn certificate_rejects_hyperbolic_completion() {
        let cut = e(2, 1);
        let b = corpus::truncated_polynomial(3, 3, cut);
        let c = cyclic_completion(&b, 4).unwrap();
        assert!(matches!(
            unobstructedness_certificate(&c, &Element::zero(cut), &[], e(1, 2)),
            Err(McError::NotDefinite(_))
        ));
    }
}
