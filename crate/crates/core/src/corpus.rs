//! Generators of known-valid structures and random test data.
//!
//! Everything here is deterministic given a seed.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ainfty::AInftyStructure;
use crate::cyclic::{cyclic_completion, frobenius_cyclic, CyclicPairing, CyclicStructure, FrobeniusTable};
use crate::graded::{sign_of, Element, GradedModule};
use crate::linalg::{determinant, inverse, Matrix};
use crate::novikov::Nov;
use crate::rational::{q_frac, q_int, Energy, Q};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn one_hot(i: usize) -> BTreeMap<usize, Q> {
    [(i, Q::one())].into_iter().collect()
}

fn unit_products(products: &mut BTreeMap<(usize, usize), BTreeMap<usize, Q>>, unit: usize, rank: usize) {
    for i in 0..rank {
        products.insert((unit, i), one_hot(i));
        products.insert((i, unit), one_hot(i));
    }
}

fn subset_label(mask: u32, g: u32) -> String {
    if mask == 0 {
        return "1".into();
    }
    let digits: String = (0..g).filter(|b| mask & (1 << b) != 0).map(|b| char::from(b'1' + b as u8)).collect();
    format!("e{digits}")
}

/// Exterior algebra `Λ(e₁,…,e_g)` with `|e_i| = 1`, trace on the top class.
pub fn exterior_table(g: u32) -> FrobeniusTable {
    let mut masks: Vec<u32> = (0..1u32 << g).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let pos: BTreeMap<u32, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let basis = masks.iter().map(|&m| (subset_label(m, g), m.count_ones() as i64)).collect();
    let module = GradedModule::new(basis).expect("distinct labels");
    let mut products = BTreeMap::new();
    for &a in &masks {
        for &b in &masks {
            if a & b != 0 {
                continue;
            }
            // Sign of merging the sorted generator lists of a and b.
            let mut swaps = 0;
            for i in 0..g {
                if b & (1 << i) != 0 {
                    swaps += (a >> (i + 1)).count_ones();
                }
            }
            let c = q_int(sign_of(swaps as i64));
            products.insert((pos[&a], pos[&b]), [(pos[&(a | b)], c)].into_iter().collect());
        }
    }
    let top = pos[&((1u32 << g) - 1)];
    FrobeniusTable { module, unit: 0, products, trace: [(top, Q::one())].into_iter().collect() }
}

/// The exterior algebra as a strict (not necessarily cyclic-dimension-matching) A∞ structure.
pub fn exterior(g: u32, k_max: usize, cutoff: Energy) -> AInftyStructure {
    table_structure(&exterior_table(g), k_max, cutoff)
}

/// `m₂(x,y) = (−1)^{|x|} x·y` from any graded associative multiplication table.
pub fn table_structure(t: &FrobeniusTable, k_max: usize, cutoff: Energy) -> AInftyStructure {
    let m = &t.module;
    let mut s = AInftyStructure::new(m.clone(), k_max, cutoff);
    for (&(i, j), out) in &t.products {
        let mut e = Element::zero(cutoff);
        for (&o, c) in out {
            e.add_coeff(o, &Nov::constant(c * q_int(sign_of(m.degree(i))), cutoff));
        }
        s.add_entry(2, vec![i, j], &e).expect("graded table");
    }
    s
}

/// Cohomology model of T⁴: the exterior algebra on four degree-1 generators.
pub fn torus4(k_max: usize, cutoff: Energy) -> CyclicStructure {
    frobenius_cyclic(&exterior_table(4), 4, k_max, cutoff).expect("T4 model is cyclic")
}

/// The same model with the two constants `m₂(e1,e2)` and `m₂(e3,e4)` negated (or only the first).
pub fn torus4_mutant(k_max: usize, cutoff: Energy, both: bool) -> CyclicStructure {
    let cs = torus4(k_max, cutoff);
    let m = cs.s.module().clone();
    let mut s = cs.s.clone();
    let mut flip = |a: &str, b: &str| {
        let i = m.index_of(a).unwrap();
        let j = m.index_of(b).unwrap();
        let v = s.op(2).get(&[i, j]).unwrap().clone();
        s.add_entry(2, vec![i, j], &v.scale_q(&q_int(-2))).unwrap();
    };
    flip("e1", "e2");
    if both {
        flip("e3", "e4");
    }
    CyclicStructure { s, q: cs.q }
}

/// `ℚ[a]/(a^n)` with `|a| = 1` (graded associative, not graded commutative).
pub fn truncated_polynomial_table(n: usize) -> FrobeniusTable {
    let label = |i: usize| match i {
        0 => "1".to_string(),
        1 => "a".to_string(),
        _ => format!("a{i}"),
    };
    let module = GradedModule::new((0..n).map(|i| (label(i), i as i64)).collect()).unwrap();
    let mut products = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if i + j < n {
                products.insert((i, j), one_hot(i + j));
            }
        }
    }
    FrobeniusTable { module, unit: 0, products, trace: BTreeMap::new() }
}

pub fn truncated_polynomial(n: usize, k_max: usize, cutoff: Energy) -> AInftyStructure {
    table_structure(&truncated_polynomial_table(n), k_max, cutoff)
}

/// `ℚ[a]/(a⁵)`, `|a| = 1`, with central curvature `m₀ = c·T^λ·a²`.
pub fn curved_truncated_polynomial(c: Q, lambda: Energy, k_max: usize, cutoff: Energy) -> AInftyStructure {
    let mut s = truncated_polynomial(5, k_max, cutoff);
    let a2 = s.module().index_of("a2").unwrap();
    s.add_entry(0, vec![], &Element::basis(a2, Nov::q_term(c, lambda, 0, cutoff))).unwrap();
    s
}

/// Path algebra of the quiver `1 → 2` with a degree-1 arrow.
pub fn quiver_table() -> FrobeniusTable {
    let module = GradedModule::new(vec![("p1".into(), 0), ("p2".into(), 0), ("f".into(), 1)]).unwrap();
    let mut products = BTreeMap::new();
    products.insert((0, 0), one_hot(0));
    products.insert((1, 1), one_hot(1));
    products.insert((0, 2), one_hot(2));
    products.insert((2, 1), one_hot(2));
    FrobeniusTable { module, unit: 0, products, trace: BTreeMap::new() }
}

/// Basis `1, a, h, g` (degrees 0..3), unital, `a·h = h·a = g`, and `m₃(a,a,a) = c·h`.
pub fn massey_algebra(c: Q, k_max: usize, cutoff: Energy) -> AInftyStructure {
    let module = GradedModule::new(vec![("1".into(), 0), ("a".into(), 1), ("h".into(), 2), ("g".into(), 3)]).unwrap();
    let mut products = BTreeMap::new();
    unit_products(&mut products, 0, 4);
    products.insert((1, 2), one_hot(3));
    products.insert((2, 1), one_hot(3));
    let t = FrobeniusTable { module, unit: 0, products, trace: BTreeMap::new() };
    let mut s = table_structure(&t, k_max.max(3), cutoff);
    s.add_labeled(3, &["a", "a", "a"], "h", Nov::constant(c, cutoff)).unwrap();
    s
}

/// A Frobenius table with one generator of degree `d` squaring to zero, trace on it.
fn sphere_table(name: &str, d: i64) -> FrobeniusTable {
    let module = GradedModule::new(vec![("1".into(), 0), (name.to_string(), d)]).unwrap();
    let mut products = BTreeMap::new();
    unit_products(&mut products, 0, 2);
    FrobeniusTable { module, unit: 0, products, trace: [(1, Q::one())].into_iter().collect() }
}

/// Graded tensor product `(x⊗y)(x'⊗y') = (−1)^{|y||x'|} xx' ⊗ yy'`, trace `tr ⊗ tr`.
pub fn tensor_table(a: &FrobeniusTable, b: &FrobeniusTable) -> FrobeniusTable {
    let (ma, mb) = (&a.module, &b.module);
    let mut pairs: Vec<(usize, usize)> = (0..ma.rank()).flat_map(|i| (0..mb.rank()).map(move |j| (i, j))).collect();
    pairs.sort_by_key(|&(i, j)| (ma.degree(i) + mb.degree(j), i, j));
    let pos: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let label = |i: usize, j: usize| match (ma.label(i), mb.label(j)) {
        ("1", y) => y.to_string(),
        (x, "1") => x.to_string(),
        (x, y) => format!("{x}.{y}"),
    };
    let module =
        GradedModule::new(pairs.iter().map(|&(i, j)| (label(i, j), ma.degree(i) + mb.degree(j))).collect()).unwrap();
    let mut products = BTreeMap::new();
    for &(i, j) in &pairs {
        for &(k, l) in &pairs {
            let (Some(pa), Some(pb)) = (a.products.get(&(i, k)), b.products.get(&(j, l))) else {
                continue;
            };
            let s = q_int(sign_of(mb.degree(j) * ma.degree(k)));
            let mut out = BTreeMap::new();
            for (&o1, c1) in pa {
                for (&o2, c2) in pb {
                    out.insert(pos[&(o1, o2)], c1 * c2 * &s);
                }
            }
            products.insert((pos[&(i, j)], pos[&(k, l)]), out);
        }
    }
    let mut trace = BTreeMap::new();
    for (&i, ti) in &a.trace {
        for (&j, tj) in &b.trace {
            trace.insert(pos[&(i, j)], ti * tj);
        }
    }
    FrobeniusTable { module, unit: pos[&(a.unit, b.unit)], products, trace }
}

/// Model `(1, b₁, r, b₁, 1)`: `h_i h_j = F_ij pt`, `a_i c_j = −D_ij pt`, so that
/// the degree-2 pairing is `F` and `Q(a_i, c_j) = D_ij`.
pub fn definite_model_table(form: &Matrix<Q>, deg13: &Matrix<Q>) -> FrobeniusTable {
    let r = form.len();
    let b1 = deg13.len();
    let mut basis = vec![("1".to_string(), 0)];
    basis.extend((1..=b1).map(|i| (format!("a{i}"), 1)));
    basis.extend((1..=r).map(|i| (format!("h{i}"), 2)));
    basis.extend((1..=b1).map(|i| (format!("c{i}"), 3)));
    basis.push(("pt".into(), 4));
    let rank = basis.len();
    let module = GradedModule::new(basis).unwrap();
    let a = |i: usize| 1 + i;
    let h = |i: usize| 1 + b1 + i;
    let c = |i: usize| 1 + b1 + r + i;
    let pt = rank - 1;
    let mut products = BTreeMap::new();
    unit_products(&mut products, 0, rank);
    let mut put = |x: usize, y: usize, v: Q| {
        if !v.is_zero() {
            products.insert((x, y), [(pt, v)].into_iter().collect());
        }
    };
    for i in 0..r {
        for j in 0..r {
            put(h(i), h(j), form[i][j].clone());
        }
    }
    for i in 0..b1 {
        for j in 0..b1 {
            put(a(i), c(j), -deg13[i][j].clone());
            put(c(j), a(i), deg13[i][j].clone());
        }
    }
    FrobeniusTable { module, unit: 0, products, trace: [(pt, Q::one())].into_iter().collect() }
}

pub fn definite_model(form: &Matrix<Q>, deg13: &Matrix<Q>, k_max: usize, cutoff: Energy) -> CyclicStructure {
    frobenius_cyclic(&definite_model_table(form, deg13), 4, k_max, cutoff).expect("definite model is cyclic")
}

fn int_matrix(rows: &[&[i64]]) -> Matrix<Q> {
    rows.iter().map(|r| r.iter().map(|&x| q_int(x)).collect()).collect()
}

/// Random invertible integer matrix with small entries.
pub fn random_invertible(rng: &mut impl Rng, n: usize) -> Matrix<Q> {
    loop {
        let m: Matrix<Q> = (0..n).map(|_| (0..n).map(|_| q_int(rng.gen_range(-2..=2))).collect()).collect();
        if n == 0 || !determinant(&m).is_zero() {
            return m;
        }
    }
}

/// `±AᵀA` for a random invertible integer `A`.
pub fn random_definite(rng: &mut impl Rng, n: usize, negative: bool) -> Matrix<Q> {
    let a = random_invertible(rng, n);
    let mut f: Matrix<Q> = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let s: Q = (0..n).map(|k| &a[k][i] * &a[k][j]).sum();
            f[i][j] = if negative { -s } else { s };
        }
    }
    f
}

/// Random degree-preserving change of basis (block diagonal by degree).
pub fn random_basis_change(rng: &mut impl Rng, module: &GradedModule) -> Matrix<Q> {
    let r = module.rank();
    let mut p = vec![vec![Q::zero(); r]; r];
    for &d in module.degree_ranks().keys() {
        let idx = module.basis_in_degree(d);
        let block = random_invertible(rng, idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                p[i][j] = block[a][b].clone();
            }
        }
    }
    p
}

/// Transports maps and pairing to the basis `f_j = Σ_i P_ij e_i`.
pub fn transport(s: &AInftyStructure, p: &Matrix<Q>) -> AInftyStructure {
    let module = s.module().clone();
    let cutoff = s.cutoff();
    let pinv = inverse(p).expect("invertible basis change");
    let r = module.rank();
    // Old basis vector e_i expressed in the new basis: e_i = Σ_j (P⁻¹)_{ji} f_j.
    let old_in_new: Vec<Vec<(usize, Q)>> =
        (0..r).map(|i| (0..r).filter(|&j| !pinv[j][i].is_zero()).map(|j| (j, pinv[j][i].clone())).collect()).collect();
    // Rows of P: e_i appears in f_j with coefficient P_ij.
    let row: Vec<Vec<(usize, Q)>> =
        (0..r).map(|i| (0..r).filter(|&j| !p[i][j].is_zero()).map(|j| (j, p[i][j].clone())).collect()).collect();
    let mut out = AInftyStructure::new(module, s.k_max(), cutoff);
    for (k, m) in s.ops().iter().enumerate() {
        for (inputs, value) in m.entries() {
            let mut new_value = Element::zero(cutoff);
            for (o, c) in value.coeffs() {
                for (j, q) in &old_in_new[o] {
                    new_value.add_coeff(*j, &c.scale_q(q));
                }
            }
            // m(f_{j₁},…,f_{j_k}) collects P_{i₁j₁}⋯P_{i_kj_k} m(e_{i₁},…,e_{i_k}).
            let mut partial: Vec<(Vec<usize>, Q)> = vec![(Vec::new(), Q::one())];
            for &i in inputs {
                let mut next = Vec::new();
                for (js, c) in &partial {
                    for (j, pij) in &row[i] {
                        let mut js2 = js.clone();
                        js2.push(*j);
                        next.push((js2, c * pij));
                    }
                }
                partial = next;
            }
            for (js, c) in partial {
                out.add_entry_unchecked(k, js, &new_value.scale_q(&c));
            }
        }
    }
    out
}

pub fn transport_pairing(q: &CyclicPairing, p: &Matrix<Q>) -> CyclicPairing {
    let r = p.len();
    let mut out = CyclicPairing::new(q.n());
    let mut acc: BTreeMap<(usize, usize), Q> = BTreeMap::new();
    for (&(i, k), v) in q.entries() {
        for a in 0..r {
            if p[i][a].is_zero() {
                continue;
            }
            for b in 0..r {
                if p[k][b].is_zero() {
                    continue;
                }
                *acc.entry((a, b)).or_insert_with(Q::zero) += &p[i][a] * &p[k][b] * v;
            }
        }
    }
    for ((a, b), v) in acc {
        out.set(a, b, v);
    }
    out
}

pub fn transport_cyclic(cs: &CyclicStructure, p: &Matrix<Q>) -> CyclicStructure {
    CyclicStructure { s: transport(&cs.s, p), q: transport_pairing(&cs.q, p) }
}

const ENERGIES: [(i64, i64); 3] = [(1, 2), (1, 1), (3, 2)];

/// Random degree-1 element with `terms` Novikov terms per degree-1 direction, all in Λ⁺.
pub fn random_point(rng: &mut impl Rng, module: &GradedModule, cutoff: Energy, terms: usize) -> Element {
    let mut x = Element::zero(cutoff);
    for i in module.basis_in_degree(1) {
        for _ in 0..terms {
            let (n, d) = *ENERGIES.choose(rng).unwrap();
            let c = q_frac(rng.gen_range(-3..=3), rng.gen_range(1..=2));
            let e = rng.gen_range(-1..=1);
            x.add_coeff(i, &Nov::q_term(c, Energy::new(n, d), e, cutoff));
        }
    }
    x
}

/// A named member of the verification corpus.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub cs: CyclicStructure,
}

/// Frobenius models of closed 4-manifold cohomology rings (rank ≤ 12).
pub fn frobenius_models(k_max: usize, cutoff: Energy) -> Vec<CorpusEntry> {
    let fc = |t: &FrobeniusTable| frobenius_cyclic(t, 4, k_max, cutoff).expect("model is cyclic");
    let s = sphere_table;
    let pos = |n: usize| -> Matrix<Q> { (0..n).map(|i| (0..n).map(|j| q_int((i == j) as i64)).collect()).collect() };
    let neg = |n: usize| -> Matrix<Q> { (0..n).map(|i| (0..n).map(|j| q_int(-((i == j) as i64))).collect()).collect() };
    vec![
        CorpusEntry { name: "S4".into(), cs: fc(&s("pt", 4)) },
        CorpusEntry { name: "CP2".into(), cs: definite_model(&pos(1), &vec![], k_max, cutoff) },
        CorpusEntry { name: "CP2bar#CP2bar".into(), cs: definite_model(&neg(2), &vec![], k_max, cutoff) },
        CorpusEntry {
            name: "form[[2,1],[1,1]]".into(),
            cs: definite_model(&int_matrix(&[&[2, 1], &[1, 1]]), &vec![], k_max, cutoff),
        },
        CorpusEntry { name: "S1xS3".into(), cs: fc(&tensor_table(&s("a", 1), &s("c", 3))) },
        CorpusEntry { name: "b(1,2,1,2,1)".into(), cs: definite_model(&neg(1), &pos(2), k_max, cutoff) },
        CorpusEntry { name: "S2xS2".into(), cs: fc(&tensor_table(&s("x", 2), &s("y", 2))) },
        CorpusEntry { name: "T2xS2".into(), cs: fc(&tensor_table(&tensor_table(&s("a", 1), &s("b", 1)), &s("s", 2))) },
        CorpusEntry { name: "S1x(S1xS2)".into(), cs: fc(&tensor_table(&s("a", 1), &tensor_table(&s("b", 1), &s("s", 2)))) },
    ]
}

/// Cyclic completions (hyperbolic pairing, n = 4) of small non-cyclic algebras.
pub fn completion_models(k_max: usize, cutoff: Energy) -> Vec<CorpusEntry> {
    let k3 = k_max.max(3);
    let mut bases: Vec<(String, AInftyStructure)> = vec![
        ("Q".into(), truncated_polynomial(1, k_max, cutoff)),
        ("Lambda(a)".into(), exterior(1, k_max, cutoff)),
        ("quiver".into(), table_structure(&quiver_table(), k_max, cutoff)),
        ("massey".into(), massey_algebra(q_int(1), k3, cutoff)),
        ("massey(-2/3)".into(), massey_algebra(q_frac(-2, 3), k3, cutoff)),
        ("curved Q[a]/a^5".into(), curved_truncated_polynomial(q_int(1), Energy::new(1, 2), k_max, cutoff)),
    ];
    for n in 2..=5 {
        bases.push((format!("Q[a]/a^{n}"), truncated_polynomial(n, k_max, cutoff)));
    }
    bases
        .into_iter()
        .map(|(name, b)| CorpusEntry {
            name: format!("completion({name})"),
            cs: cyclic_completion(&b, 4).unwrap_or_else(|e| panic!("completion of {name}: {e}")),
        })
        .collect()
}

/// The verification corpus: base models, random basis changes, and random twists.
pub fn cyclic_corpus(seed: u64, k_max: usize, cutoff: Energy) -> Vec<CorpusEntry> {
    let mut rng = rng(seed);
    let mut base = frobenius_models(k_max, cutoff);
    base.extend(completion_models(k_max, cutoff));
    let mut out = base.clone();
    for e in &base {
        for round in 0..2 {
            let p = random_basis_change(&mut rng, e.cs.s.module());
            out.push(CorpusEntry { name: format!("{} / basis change {round}", e.name), cs: transport_cyclic(&e.cs, &p) });
        }
    }
    for e in &base {
        for round in 0..4 {
            let b = random_point(&mut rng, e.cs.s.module(), cutoff, 1 + round % 2);
            out.push(CorpusEntry { name: format!("{} / twist {round}", e.name), cs: e.cs.twist(&b).expect("twist") });
        }
    }
    out
}

/// Definite `n = 4` models with basis changes, for the unobstructedness suite.
pub fn definite_corpus(seed: u64, k_max: usize, cutoff: Energy) -> Vec<CorpusEntry> {
    let mut rng = rng(seed);
    let mut out = Vec::new();
    for i in 0..24 {
        let r = 1 + i % 3;
        let b1 = i % 3;
        let negative = i % 2 == 1;
        let f = random_definite(&mut rng, r, negative);
        let d = random_invertible(&mut rng, b1);
        let cs = definite_model(&f, &d, k_max, cutoff);
        let cs = if i % 4 >= 2 { transport_cyclic(&cs, &random_basis_change(&mut rng, cs.s.module())) } else { cs };
        out.push(CorpusEntry { name: format!("definite #{i} (b1={b1}, b2={r})"), cs });
    }
    out
}
