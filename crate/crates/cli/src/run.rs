//! Command dispatch: one function per subcommand, each producing a [`Report`].

use std::time::Instant;

use ainf_core::ainfty::AInftyStructure;
use ainf_core::calibrated::cayley::{cayley_check, CAYLEY_TOLERANCE};
use ainf_core::calibrated::hodge::{
    eigenspace_dims, hodge_star2, hodge_star2_surd, lift, sd_split, wedge_square_check, Metric4, SurdForm,
};
use ainf_core::calibrated::lattice::{congruence, diagonalize_definite, is_definite};
use ainf_core::calibrated::star4;
use ainf_core::calibrated::CalibratedError;
use ainf_core::corpus;
use ainf_core::cyclic::{check_cyclicity, cyclic_completion, darboux_defect, lemma_sum, CyclicError, CyclicPairing, CyclicStructure};
use ainf_core::graded::Element;
use ainf_core::linalg::Definiteness;
use ainf_core::maurer_cartan::{
    mc_solve, mc_verify, unobstructedness_certificate, ChainReport, McError, McResult, SolveMode,
};
use ainf_core::rational::{format_energy, parse_energy, Energy};
use serde_json::{json, Value};

use crate::report::{Format, Report, Verdict};
use crate::spec_file::{element_terms, parse_spec, spec_from_structure, SpecFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Validate,
    CyclicCheck,
    LemmaCheck,
    DarbouxCheck,
    Kuranishi,
    Twist,
    McSolve,
    McVerify,
    CertifyUnobstructed,
    Complete,
    Hodge,
    Cayley,
    Lattice,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::CyclicCheck => "cyclic-check",
            Command::LemmaCheck => "lemma-check",
            Command::DarbouxCheck => "darboux-check",
            Command::Kuranishi => "kuranishi",
            Command::Twist => "twist",
            Command::McSolve => "mc-solve",
            Command::McVerify => "mc-verify",
            Command::CertifyUnobstructed => "certify-unobstructed",
            Command::Complete => "complete",
            Command::Hodge => "hodge",
            Command::Cayley => "cayley",
            Command::Lattice => "lattice",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Newton,
    Ansatz,
}

/// Default seed for randomized sweeps.
pub const DEFAULT_SEED: u64 = 0;
/// Default number of random samples.
pub const DEFAULT_SAMPLES: usize = 10;
/// Default highest k for lemma sweeps.
pub const DEFAULT_LEMMA_ARITY: usize = 6;
/// Cap on witnesses listed in a report; the total count is always reported.
pub const MAX_WITNESSES: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct Flags {
    pub arity: Option<usize>,
    pub energy: Option<String>,
    pub seed: u64,
    pub samples: usize,
    pub format: Format,
    pub mode: Mode,
    pub grid: Option<String>,
    pub max_iterations: usize,
    pub max_nodes: usize,
    pub n: i64,
    pub weight: String,
    pub instance: Option<usize>,
    pub tuple: Option<String>,
    pub timing: bool,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            arity: None,
            energy: None,
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            format: Format::Text,
            mode: Mode::Newton,
            grid: None,
            max_iterations: 100,
            max_nodes: 10_000,
            n: 4,
            weight: "1/2".into(),
            instance: None,
            tuple: None,
            timing: false,
        }
    }
}

/// A failure that ends the command with the given verdict and message.
struct Stop(Verdict, String);

type Res<T> = Result<T, Stop>;

fn input<E: std::fmt::Display>(e: E) -> Stop {
    Stop(Verdict::Error, e.to_string())
}

struct Ctx<'a> {
    path: &'a str,
    flags: &'a Flags,
    spec: SpecFile,
}

impl Ctx<'_> {
    fn structure(&self) -> Res<AInftyStructure> {
        let s = self.spec.structure().map_err(input)?;
        match &self.flags.energy {
            None => Ok(s),
            Some(text) => {
                let e = parse_energy(text).map_err(|e| input(format!("--energy: {e}")))?;
                if e <= Energy::from_integer(0) {
                    return Err(input("--energy must be positive"));
                }
                s.truncated(e).map_err(input)
            }
        }
    }

    fn pairing(&self) -> Res<CyclicPairing> {
        self.spec.pairing().map_err(input)?.ok_or_else(|| input("this command needs a pairing section"))
    }

    fn cyclic(&self) -> Res<CyclicStructure> {
        Ok(CyclicStructure { s: self.structure()?, q: self.pairing()? })
    }

    fn point(&self, s: &AInftyStructure) -> Res<Option<Element>> {
        Ok(self.spec.point().map_err(input)?.map(|x| x.truncate(s.cutoff())))
    }

    fn weight(&self) -> Res<Energy> {
        parse_energy(&self.flags.weight).map_err(|e| input(format!("--weight: {e}")))
    }

    fn tuple_filter(&self, s: &AInftyStructure) -> Res<Option<Vec<usize>>> {
        let Some(t) = &self.flags.tuple else { return Ok(None) };
        if t.is_empty() {
            return Ok(Some(Vec::new()));
        }
        t.split(',').map(|l| s.module().index_of(l.trim()).map_err(input)).collect::<Res<Vec<_>>>().map(Some)
    }

    fn replay(&self, cmd: &str, extra: &str) -> String {
        let mut r = format!("ainf {cmd} {}", self.path);
        if let Some(e) = &self.flags.energy {
            r += &format!(" --energy {e}");
        }
        r + extra
    }

    fn samples(&self, s: &AInftyStructure) -> Vec<Element> {
        let mut rng = corpus::rng(self.flags.seed);
        (0..self.flags.samples).map(|_| corpus::random_point(&mut rng, s.module(), s.cutoff(), 2)).collect()
    }

    fn selected(&self, i: usize) -> bool {
        self.flags.instance.is_none_or(|j| j == i)
    }
}

/// Parses `spec_text` and runs `command`; never panics on bad input.
pub fn run(command: Command, path: &str, spec_text: &str, flags: &Flags) -> Report {
    let start = Instant::now();
    let mut report = Report::new(command.name());
    let outcome = parse_spec(spec_text).map_err(input).and_then(|spec| {
        let ctx = Ctx { path, flags, spec };
        if let Some(r) = &ctx.spec.ring {
            report.arity_cutoff = Some(r.arity_cutoff);
            report.energy_cutoff = Some(flags.energy.clone().unwrap_or_else(|| r.energy_cutoff.clone()));
        }
        dispatch(command, &ctx, &mut report)
    });
    if let Err(Stop(verdict, message)) = outcome {
        report.verdict = verdict;
        report.detail("error", message);
    }
    if flags.timing {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    report
}

fn dispatch(command: Command, ctx: &Ctx, r: &mut Report) -> Res<()> {
    match command {
        Command::Validate => validate(ctx, r, false),
        Command::CyclicCheck => validate(ctx, r, true),
        Command::LemmaCheck => lemma_check(ctx, r),
        Command::DarbouxCheck => darboux_check(ctx, r),
        Command::Kuranishi => kuranishi(ctx, r),
        Command::Twist => twist(ctx, r),
        Command::McSolve => solve(ctx, r),
        Command::McVerify => verify_point(ctx, r),
        Command::CertifyUnobstructed => certify(ctx, r),
        Command::Complete => complete(ctx, r),
        Command::Hodge => hodge(ctx, r),
        Command::Cayley => cayley(ctx, r),
        Command::Lattice => lattice(ctx, r),
    }
}

fn fail_if(r: &mut Report, failed: bool) {
    if failed {
        r.verdict = Verdict::Fail;
    }
}

fn labels(s: &AInftyStructure, idx: &[usize]) -> String {
    idx.iter().map(|&i| s.module().label(i)).collect::<Vec<_>>().join(",")
}

fn validate(ctx: &Ctx, r: &mut Report, require_pairing: bool) -> Res<()> {
    let s = ctx.structure()?;
    let max_k = ctx.flags.arity.unwrap_or(s.k_max());
    let e = s.cutoff();
    let filter = ctx.tuple_filter(&s)?;
    let keep = |t: &[usize]| filter.as_ref().is_none_or(|f| f.as_slice() == t);

    let relations: Vec<_> = s.check_relations(max_k, e).map_err(input)?.into_iter().filter(|v| keep(&v.inputs)).collect();
    r.detail("relations_checked_to_arity", max_k);
    r.detail("relation_violations", relations.len());
    for v in relations.iter().take(MAX_WITNESSES) {
        let replay = ctx.replay(r.command.as_str(), &format!(" --arity {} --tuple {}", v.k, labels(&s, &v.inputs)));
        r.witness(format!("relation {}", s.display_violation(v)), Some(replay));
    }
    let mut failed = !relations.is_empty();

    let pairing = if require_pairing { Some(ctx.pairing()?) } else { ctx.spec.pairing().map_err(input)? };
    if let Some(q) = pairing {
        let cyc: Vec<_> = check_cyclicity(&s, &q, max_k, e)
            .map_err(input)?
            .into_iter()
            .filter(|v| match v {
                ainf_core::cyclic::CyclicViolation::Rotation { tuple, .. } => keep(tuple),
                _ => filter.is_none(),
            })
            .collect();
        r.detail("cyclicity_checked_to_arity", max_k);
        r.detail("cyclicity_violations", cyc.len());
        for v in cyc.iter().take(MAX_WITNESSES) {
            let replay = match v {
                ainf_core::cyclic::CyclicViolation::Rotation { tuple, .. } => Some(ctx.replay(
                    "cyclic-check",
                    &format!(" --arity {} --tuple {}", tuple.len() - 1, labels(&s, tuple)),
                )),
                _ => Some(ctx.replay("cyclic-check", "")),
            };
            r.witness(format!("cyclicity {}", v.display(s.module())), replay);
        }
        failed |= !cyc.is_empty();
    }
    fail_if(r, failed);
    Ok(())
}

fn lemma_check(ctx: &Ctx, r: &mut Report) -> Res<()> {
    let cs = ctx.cyclic()?;
    let max_k = ctx.flags.arity.unwrap_or(DEFAULT_LEMMA_ARITY);
    let xs = ctx.samples(&cs.s);
    let mut checked = 0;
    let mut bad = 0;
    for (i, x) in xs.iter().enumerate() {
        if !ctx.selected(i) {
            continue;
        }
        for k in 0..=max_k {
            let v = lemma_sum(&cs.s, &cs.q, x, k).map_err(input)?;
            checked += 1;
            if !v.is_zero() {
                bad += 1;
                if r.witnesses.len() < MAX_WITNESSES {
                    let extra = format!(" --seed {} --samples {} --instance {i} --arity {max_k}", ctx.flags.seed, ctx.flags.samples);
                    r.witness(
                        format!("sample {i}, k={k}: sum={v}, x={}", x.display(cs.s.module())),
                        Some(ctx.replay("lemma-check", &extra)),
                    );
                }
            }
        }
    }
    r.detail("seed", ctx.flags.seed);
    r.detail("samples", xs.len());
    r.detail("max_k", max_k);
    r.detail("instances_checked", checked);
    r.detail("nonzero_sums", bad);
    fail_if(r, bad > 0);
    Ok(())
}

fn darboux_check(ctx: &Ctx, r: &mut Report) -> Res<()> {
    let cs = ctx.cyclic()?;
    if cs.q.n() != 4 {
        return Err(input(CyclicError::NotFourDimensional(cs.q.n())));
    }
    let replay_base = format!(" --seed {} --samples {}", ctx.flags.seed, ctx.flags.samples);
    let mut bad = 0;
    for (i, x) in ctx.samples(&cs.s).iter().enumerate() {
        if !ctx.selected(i) {
            continue;
        }
        let d = darboux_defect(&cs.s, &cs.q, x).map_err(input)?;
        if !d.is_zero() {
            bad += 1;
            if r.witnesses.len() < MAX_WITNESSES {
                r.witness(
                    format!("sample {i}: defect={d}, x={}", x.display(cs.s.module())),
                    Some(ctx.replay("darboux-check", &format!("{replay_base} --instance {i}"))),
                );
            }
        }
    }
    if let Some(b) = ctx.point(&cs.s)? {
        let d = darboux_defect(&cs.s, &cs.q, &b).map_err(input)?;
        r.detail("point_defect", d.to_string());
        if !d.is_zero() {
            bad += 1;
            r.witness(format!("supplied point: defect={d}"), Some(ctx.replay("darboux-check", " --samples 0")));
        }
    }
    let weight = ctx.weight()?;
    let x = cs.s.symbolic_point(&cs.s.default_directions(weight)).map_err(input)?;
    let d = darboux_defect(&cs.s, &cs.q, &x).map_err(input)?;
    r.detail("symbolic_point", x.display(cs.s.module()));
    r.detail("symbolic_defect", d.to_string());
    if !d.is_zero() {
        bad += 1;
        r.witness(format!("symbolic point: defect={d}"), Some(ctx.replay("darboux-check", " --samples 0")));
    }
    r.detail("seed", ctx.flags.seed);
    r.detail("samples", ctx.flags.samples);
    r.detail("nonzero_defects", bad);
    fail_if(r, bad > 0);
    Ok(())
}

fn kuranishi(ctx: &Ctx, r: &mut Report) -> Res<()> {
    let s = ctx.structure()?;
    let (x, k) = match ctx.point(&s)? {
        Some(b) => {
            let k = s.kuranishi_eval(&b).map_err(input)?;
            (b, k)
        }
        None => {
            let dirs = s.default_directions(ctx.weight()?);
            let x = s.symbolic_point(&dirs).map_err(input)?;
            let k = s.kuranishi_symbolic(&dirs).map_err(input)?;
            (x, k)
        }
    };
    let terms = s.kuranishi_terms(&x).map_err(input)?;
    r.detail("point", x.display(s.module()));
    r.detail("kappa", k.display(s.module()));
    r.detail("kappa_is_zero", k.is_zero());
    r.detail(
        "terms",
        Value::Array(terms.iter().map(|t| Value::String(t.display(s.module()))).collect()),
    );
    Ok(())
}

fn twist(ctx: &Ctx, r: &mut Report) -> Res<()> {
    let s = ctx.structure()?;
    let b = ctx.point(&s)?.ok_or_else(|| input("twist needs a point section"))?;
    let t = s.twist(&b).map_err(input)?;
    let max_k = ctx.flags.arity.unwrap_or(s.k_max());
    let rel = t.check_relations(max_k, t.cutoff()).map_err(input)?;
    let curvature_ok = t.curvature() == s.kuranishi_eval(&b).map_err(input)?;
    r.detail("point", b.display(s.module()));
    r.detail("twisted_curvature", t.curvature().display(s.module()));
    r.detail("curvature_equals_kappa", curvature_ok);
    r.detail("relation_violations", rel.len());
    for v in rel.iter().take(MAX_WITNESSES) {
        r.witness(format!("twisted relation {}", t.display_violation(v)), Some(ctx.replay("twist", "")));
    }
    let mut failed = !curvature_ok || !rel.is_empty();
    let q = ctx.spec.pairing().map_err(input)?;
    if let Some(q) = &q {
        let cyc = check_cyclicity(&t, q, max_k, t.cutoff()).map_err(input)?;
        r.detail("cyclicity_violations", cyc.len());
        for v in cyc.iter().take(MAX_WITNESSES) {
            r.witness(format!("twisted cyclicity {}", v.display(s.module())), Some(ctx.replay("twist", "")));
        }
        failed |= !cyc.is_empty();
    }
    let spec = spec_from_structure(&t, q.as_ref(), None).map_err(input)?;
    r.detail("twisted_spec", serde_json::to_value(&spec).expect("spec serializes"));
    fail_if(r, failed);
    Ok(())
}

fn default_grid(cutoff: Energy) -> Vec<Energy> {
    let half = Energy::new(1, 2);
    let mut g = Vec::new();
    let mut l = half;
    while l < cutoff {
        g.push(l);
        l += half;
    }
    g
}

fn solve(ctx: &Ctx, r: &mut Report) -> Res<()> {
    let s = ctx.structure()?;
    let mode = match ctx.flags.mode {
        Mode::Newton => SolveMode::Newton { max_iterations: ctx.flags.max_iterations },
        Mode::Ansatz => {
            let grid = match &ctx.flags.grid {
                Some(g) => g
                    .split(',')
                    .map(|t| parse_energy(t.trim()).map_err(|e| input(format!("--grid: {e}"))))
                    .collect::<Res<Vec<_>>>()?,
                None => default_grid(s.cutoff()),
            };
            r.detail("grid", grid.iter().map(format_energy).collect::<Vec<_>>().join(","));
            SolveMode::Ansatz { grid, max_nodes: ctx.flags.max_nodes }
        }
    };
    r.detail("mode", match ctx.flags.mode {
        Mode::Newton => "newton",
        Mode::Ansatz => "ansatz",
    });
    match mc_solve(&s, &mode) {
        Ok(McResult::Solution { b }) => {
            r.detail("result", "solution");
            r.detail("solution", b.display(s.module()));
            let terms = element_terms(s.module(), &b).map_err(input)?;
            r.detail("solution_terms", serde_json::to_value(terms).expect("terms serialize"));
        }
        Ok(McResult::Obstruction { energy, e_power, class_vector }) => {
            r.detail("result", "obstruction");
            r.verdict = Verdict::Fail;
            r.witness(
                format!(
                    "obstruction at T^({}) e^{}: class {}",
                    format_energy(&energy),
                    e_power,
                    class_vector.display(s.module())
                ),
                Some(ctx.replay("mc-solve", " --mode newton")),
            );
        }
        Ok(McResult::Exhausted { description }) => {
            r.detail("result", "exhausted");
            r.detail("reason", description);
            r.verdict = Verdict::Exhausted;
        }
        Err(McError::LinearizationNotSurjective) => {
            r.detail("result", "linearization-not-surjective");
            r.detail("reason", McError::LinearizationNotSurjective.to_string());
            r.verdict = Verdict::Exhausted;
        }
        Err(e) => return Err(input(e)),
    }
    Ok(())
}

fn verify_point(ctx: &Ctx, r: &mut Report) -> Res<()> {
    let s = ctx.structure()?;
    let b = ctx.point(&s)?.ok_or_else(|| input("mc-verify needs a point section"))?;
    let ok = mc_verify(&s, &b).map_err(input)?;
    r.detail("point", b.display(s.module()));
    if !ok {
        let k = s.kuranishi_eval(&b).map_err(input)?;
        r.detail("kappa", k.display(s.module()));
        r.witness(format!("kappa(b) = {}", k.display(s.module())), Some(ctx.replay("mc-verify", "")));
    }
    fail_if(r, !ok);
    Ok(())
}

fn chain_json(c: &ChainReport) -> Value {
    json!({
        "darboux_symbolic": c.darboux_symbolic,
        "anchor": c.anchor,
        "isotropy_certified_below": c.isotropy.as_ref().map(|i| format_energy(&i.certified_below)),
        "isotropy_levels_checked": c.isotropy.as_ref().map(|i| i.levels_checked),
        "direct_expansion_zero": c.direct,
        "residual_terms": c.residual_terms,
        "ok": c.ok(),
    })
}

fn certify(ctx: &Ctx, r: &mut Report) -> Res<()> {
    let cs = ctx.cyclic()?;
    let b = ctx.point(&cs.s)?.unwrap_or_else(|| Element::zero(cs.s.cutoff()));
    let samples = ctx.samples(&cs.s);
    let report = match unobstructedness_certificate(&cs, &b, &samples, ctx.weight()?) {
        Ok(rep) => rep,
        Err(e @ (McError::NotDefinite(_) | McError::NotMaurerCartan | McError::Cyclic(CyclicError::NotFourDimensional(_)))) => {
            return Err(Stop(Verdict::Error, format!("precondition fails: {e}")))
        }
        Err(e @ McError::InputInvalid { .. }) => return Err(Stop(Verdict::Fail, e.to_string())),
        Err(e) => return Err(input(e)),
    };
    r.detail("definiteness", format!("{:?}", report.definiteness));
    r.detail("doubled_cutoff", format_energy(&report.doubled_cutoff));
    r.detail("weight", format_energy(&report.weight));
    r.detail("scope", "symbolic coordinates at the fixed weight above; twists b' are sampled, not quantified over all energies");
    r.detail("seed", ctx.flags.seed);
    r.detail("kappa", chain_json(&report.part1));
    r.detail(
        "twisted",
        Value::Array(
            report
                .part2
                .iter()
                .map(|(bp, c)| {
                    let mut v = chain_json(c);
                    v["b_prime"] = Value::String(bp.display(cs.s.module()));
                    v
                })
                .collect(),
        ),
    );
    if !report.part1.ok() {
        r.witness("symbolic kappa not certified zero".into(), Some(ctx.replay("certify-unobstructed", " --samples 0")));
    }
    for (i, (bp, c)) in report.part2.iter().enumerate() {
        if !c.ok() {
            r.witness(
                format!("twist sample {i} not certified: b'={}", bp.display(cs.s.module())),
                Some(ctx.replay("certify-unobstructed", &format!(" --seed {} --samples {}", ctx.flags.seed, i + 1))),
            );
        }
    }
    fail_if(r, !report.success());
    Ok(())
}

fn complete(ctx: &Ctx, r: &mut Report) -> Res<()> {
    let s = ctx.structure()?;
    match cyclic_completion(&s, ctx.flags.n) {
        Ok(c) => {
            let (rel, cyc) = c.verify().map_err(input)?;
            r.detail("n", ctx.flags.n);
            r.detail("rank", c.s.module().rank());
            r.detail("relation_violations", rel);
            r.detail("cyclicity_violations", cyc);
            let spec = spec_from_structure(&c.s, Some(&c.q), None).map_err(input)?;
            r.detail("completed_spec", serde_json::to_value(&spec).expect("spec serializes"));
            fail_if(r, rel + cyc > 0);
            Ok(())
        }
        Err(e @ CyclicError::BaseFailsRelations(_)) => {
            r.witness(e.to_string(), Some(ctx.replay("validate", "")));
            r.verdict = Verdict::Fail;
            Ok(())
        }
        Err(e) => Err(input(e)),
    }
}

fn surd_strings(w: &SurdForm) -> Value {
    Value::Array(w.iter().map(|c| Value::String(c.to_string())).collect())
}

fn hodge(ctx: &Ctx, r: &mut Report) -> Res<()> {
    let g = ctx.spec.metric().map_err(input)?.unwrap_or_else(Metric4::identity);
    let w = ctx.spec.form().map_err(input)?.ok_or_else(|| input("hodge needs geometry.form"))?;
    let star = hodge_star2(&g, &w);
    let involution = hodge_star2_surd(&g, &star) == lift(&w);
    let (plus, minus) = sd_split(&g, &w);
    let wedge = wedge_square_check(&g, &w);
    let dims = eigenspace_dims(&g);
    r.detail("star", surd_strings(&star));
    r.detail("star_star_is_identity", involution);
    r.detail("w_plus", surd_strings(&plus));
    r.detail("w_minus", surd_strings(&minus));
    r.detail("eigenspace_dims", json!([dims.0, dims.1]));
    r.detail("wedge_coefficient", wedge.wedge_coefficient.to_string());
    r.detail("plus_norm_sq", wedge.plus_norm_sq.to_string());
    r.detail("minus_norm_sq", wedge.minus_norm_sq.to_string());
    r.detail("wedge_residual", wedge.wedge_residual.to_string());
    r.detail("energy_residual", wedge.energy_residual.to_string());
    let s4_involution = (0..6).all(|k| {
        let b = star4::basis02(k);
        star4::star4_flat(&star4::star4_flat(&b)) == b
    });
    let s4_dims = star4::real_eigenspace_dims();
    r.detail("star4_normalization", star4::normalization_constant().to_string());
    r.detail("star4_omega_norm", star4::OMEGA_NORM);
    r.detail("star4_involution", s4_involution);
    r.detail("star4_real_dims", json!([s4_dims.0, s4_dims.1]));
    let mut failed = false;
    for (ok, name) in [
        (involution, "star is not an involution"),
        (dims == (3, 3), "eigenspace dimensions differ from (3,3)"),
        (wedge.ok(), "wedge or energy identity residual is nonzero"),
        (s4_involution && s4_dims == (6, 6), "*4 check failed"),
    ] {
        if !ok {
            failed = true;
            r.witness(name.into(), Some(ctx.replay("hodge", "")));
        }
    }
    fail_if(r, failed);
    Ok(())
}

fn f64_text(x: f64) -> String {
    format!("{x:.12}")
}

fn cayley(ctx: &Ctx, r: &mut Report) -> Res<()> {
    let p = ctx.spec.plane().map_err(input)?.ok_or_else(|| input("cayley needs geometry.plane"))?;
    let rep = cayley_check(&p).map_err(input)?;
    r.detail("tolerance", format!("{CAYLEY_TOLERANCE:e}"));
    r.detail("orientation", p.orientation);
    r.detail("omega_plus_norm", f64_text(rep.omega_plus_norm));
    r.detail("im_omega_value", f64_text(rep.im_omega_value));
    r.detail("re_omega_value", f64_text(rep.re_omega_value));
    r.detail("calibration_value", f64_text(rep.calibration_value));
    r.detail("cayley_calibration_gap", f64_text(rep.cayley_calibration_gap));
    r.detail("is_cayley", rep.is_cayley());
    r.detail("is_special_asd", rep.is_special_asd());
    r.detail("literal_equivalence_holds", rep.biconditional_holds());
    r.detail("oriented_equivalence_holds", rep.oriented_biconditional_holds());
    if !rep.oriented_biconditional_holds() {
        r.witness("calibration gap and special ASD conditions disagree".into(), Some(ctx.replay("cayley", "")));
    }
    fail_if(r, !rep.oriented_biconditional_holds());
    Ok(())
}

fn lattice(ctx: &Ctx, r: &mut Report) -> Res<()> {
    let f = ctx.spec.lattice().map_err(input)?.ok_or_else(|| input("lattice needs geometry.lattice"))?;
    let d = is_definite(&f).map_err(input)?;
    r.detail("rank", f.len());
    r.detail("definiteness", format!("{d:?}"));
    if !matches!(d, Definiteness::Positive | Definiteness::Negative) {
        return Err(input("form is not definite"));
    }
    match diagonalize_definite(&f) {
        Ok(diag) => {
            r.detail("sign", diag.sign);
            r.detail("basis_change", json!(diag.u));
            r.detail("congruence", json!(congruence(&f, &diag.u)));
            Ok(())
        }
        Err(CalibratedError::NotFound) => {
            r.witness("no orthonormal basis of norm-one vectors".into(), Some(ctx.replay("lattice", "")));
            r.verdict = Verdict::Fail;
            Ok(())
        }
        Err(e) => Err(input(e)),
    }
}
