//! The property suite: every invariant of every layer, on seeded random inputs.

use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use essmod::algebra::{
    calculus, closed_subideal, ideal_from_projection, ideal_support_projection, is_essential_right_ideal,
    lower_approximants, spectral_projection, AlgebraElement,
};
use essmod::field::{
    commutative_limit_identity, essential_witness, inductive_witness_section, is_essential_field, non_essential_witness,
    residual_set, total_defect_set, FieldModuleSpec,
};
use essmod::module::{
    ideal_of_submodule, inner_product, is_essential_submodule, submodule_of_ideal, theta, theta_action, CompactOperator,
};
use essmod::numeric::{herm_eig, is_psd, op_norm, C64};
use essmod::Error;

use crate::commands::cmd_check;
use crate::gen::{generate, DefectMode, GenOptions};
use crate::instance::{Instance, Kind};
use crate::random;
use crate::report::{PropertyResult, Report};
use crate::rng::Rng;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    /// Negates the Θ nondegeneracy check.
    pub theta_fault: bool,
}

impl SuiteConfig {
    pub fn new(seed: u64, trials: usize) -> Self {
        Self { seed, trials, theta_fault: cfg!(feature = "inject-theta-fault") }
    }
}

type Outcome = Result<(), String>;
type Check = fn(&mut Rng, &SuiteConfig) -> Outcome;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core<T>(r: essmod::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

pub fn properties() -> Vec<(&'static str, Check)> {
    vec![
        ("numeric.reconstruction", numeric_reconstruction),
        ("numeric.submultiplicative", numeric_submultiplicative),
        ("numeric.psd_sandwich", numeric_psd_sandwich),
        ("algebra.calculus_homomorphism", algebra_calculus_homomorphism),
        ("algebra.monotone_convergence", algebra_monotone_convergence),
        ("algebra.subideal_pipeline", algebra_subideal_pipeline),
        ("algebra.ideal_roundtrip", algebra_ideal_roundtrip),
        ("algebra.essentiality_oracle", algebra_essentiality_oracle),
        ("module.theta_action", module_theta_action),
        ("module.theta_nondegenerate", module_theta_nondegenerate),
        ("module.theta_lipschitz", module_theta_lipschitz),
        ("module.theta_composition", module_theta_composition),
        ("module.operator_absorbs_theta", module_operator_absorbs_theta),
        ("module.correspondence", module_correspondence),
        ("field.set_algebra", field_set_algebra),
        ("field.residual_within_total", field_residual_within_total),
        ("field.criterion_coherence", field_criterion_coherence),
        ("field.inductive_witness", field_inductive_witness),
        ("field.limit_identity", field_limit_identity),
        ("cli.determinism", cli_determinism),
        ("cli.roundtrip", cli_roundtrip),
    ]
}

pub fn run_property(name: &str, check: Check, cfg: &SuiteConfig) -> PropertyResult {
    let root = Rng::new(cfg.seed);
    let outcomes: Vec<Outcome> =
        (0..cfg.trials).into_par_iter().map(|t| check(&mut root.child_index(name, t as u64), cfg)).collect();
    let failed = outcomes.iter().filter(|o| o.is_err()).count();
    let counterexample = outcomes.iter().enumerate().find_map(|(t, o)| o.as_ref().err().map(|e| format!("trial {t}: {e}")));
    PropertyResult { name: name.to_string(), trials: cfg.trials, passed: cfg.trials - failed, failed, counterexample }
}

pub fn cmd_suite(cfg: &SuiteConfig) -> Report {
    let start = Instant::now();
    let mut results: Vec<PropertyResult> =
        properties().into_par_iter().map(|(name, check)| run_property(name, check, cfg)).collect();
    results.sort_by(|a, b| a.name.cmp(&b.name));
    let mut report = Report::new("suite");
    report.passed = results.iter().all(|r| r.failed == 0);
    report.details = json!({
        "seed": cfg.seed,
        "trials": cfg.trials,
        "theta_fault": cfg.theta_fault,
        "failing": results.iter().filter(|r| r.failed > 0).map(|r| r.name.clone()).collect::<Vec<_>>(),
    });
    report.properties = results;
    report.seal(start.elapsed().as_secs_f64() * 1e3)
}

fn numeric_reconstruction(rng: &mut Rng, _: &SuiteConfig) -> Outcome {
    let n = 1 + rng.below(6) as usize;
    let a = random::hermitian(rng, n);
    let eig = core(herm_eig(&a, 1e-10))?;
    let err = (&eig.reassemble(|t| t) - &a).frobenius_norm();
    ensure(err <= 1e-10 * (1.0 + op_norm(&a)), || format!("n = {n}: reconstruction error {err:e}"))
}

fn numeric_submultiplicative(rng: &mut Rng, _: &SuiteConfig) -> Outcome {
    let n = 1 + rng.below(6) as usize;
    let a = random::matrix(rng, n, n);
    let b = random::matrix(rng, n, n);
    let lhs = op_norm(&(&a * &b));
    let rhs = op_norm(&a) * op_norm(&b);
    ensure(lhs <= rhs + 1e-10, || format!("‖ab‖ = {lhs} > ‖a‖‖b‖ = {rhs}"))
}

fn numeric_psd_sandwich(rng: &mut Rng, _: &SuiteConfig) -> Outcome {
    let n = 1 + rng.below(6) as usize;
    let scale = 10f64.powi(-(rng.below(14) as i32));
    let a = random::hermitian(rng, n).scale_real(scale);
    let tol = 1e-10;
    if core(is_psd(&a, tol))? && core(is_psd(&a.scale_real(-1.0), tol))? {
        ensure(op_norm(&a) <= 2.0 * tol, || format!("±a both PSD but ‖a‖ = {:e}", op_norm(&a)))
    } else {
        Ok(())
    }
}

fn poly(c: [f64; 3]) -> impl Fn(f64) -> f64 {
    move |t| c[0] + c[1] * t + c[2] * t * t
}

fn algebra_calculus_homomorphism(rng: &mut Rng, _: &SuiteConfig) -> Outcome {
    let shape = random::shape(rng, 3, 4);
    let a = random::hermitian_element(rng, &shape);
    let cf = [rng.signed_f64(), rng.signed_f64(), rng.signed_f64()];
    let cg = [rng.signed_f64(), rng.signed_f64(), rng.signed_f64()];
    let (f, g) = (poly(cf), poly(cg));
    let fg = core(calculus(&a, &|t: f64| f(t) * g(t)))?;
    let prod = core(calculus(&a, &f))?.mul(&core(calculus(&a, &g))?);
    let err = fg.sub(&prod).norm();
    ensure(err <= 1e-9, || format!("‖(fg)(a) − f(a)g(a)‖ = {err:e}"))
}

/// Ramp approximants increase to the spectral projection; the last step is
/// the `n = 10⁶` tolerance check.
fn algebra_monotone_convergence(rng: &mut Rng, _: &SuiteConfig) -> Outcome {
    let shape = random::shape(rng, 3, 6);
    let a = random::hermitian_element(rng, &shape);
    let eps = a.norm() / 2.0;
    let spec = core(essmod::algebra::spectrum(&a))?;
    if spec.iter().any(|l| (l - eps).abs() <= 1e-8) {
        return Ok(());
    }
    let chi = core(spectral_projection(&a, eps))?;
    let mut prev = core(lower_approximants(&a, eps, 1))?;
    let mut prev_err = prev.sub(&chi).norm();
    for n in [2u64, 10, 100, 1000, 10_000, 1_000_000] {
        let next = core(lower_approximants(&a, eps, n))?;
        for b in next.sub(&prev).blocks() {
            ensure(core(is_psd(b, 1e-12))?, || format!("g_{n} − previous is not PSD"))?;
        }
        let err = next.sub(&chi).norm();
        ensure(err <= prev_err + 1e-12, || format!("error grew at n = {n}: {prev_err:e} → {err:e}"))?;
        prev = next;
        prev_err = err;
    }
    ensure(prev_err <= 1e-5, || format!("‖g_1e6(a) − χ(a)‖ = {prev_err:e}"))
}

fn algebra_subideal_pipeline(rng: &mut Rng, _: &SuiteConfig) -> Outcome {
    let shape = random::shape(rng, 3, 6);
    let mut ranks: Vec<usize> = shape.block_dims().iter().map(|&n| rng.below(n as u64 + 1) as usize).collect();
    if ranks.iter().all(|&r| r == 0) {
        ranks[0] = 1;
    }
    let x = random::element_of_ranks(rng, &shape, &ranks);
    let k = core(closed_subideal(&x))?;
    ensure(k.verified(1e-9, 1e-8), || {
        format!("residuals fa·p {:e}, probe {:e}, factor {:e}", k.fa_p_residual, k.probe_residual, k.factor_residual)
    })?;
    let want: usize = ranks.iter().sum();
    ensure(k.ideal.rank() == want, || format!("rank(p) = {} but rank(x) = {want}", k.ideal.rank()))
}

fn algebra_ideal_roundtrip(rng: &mut Rng, _: &SuiteConfig) -> Outcome {
    let shape = random::shape(rng, 3, 5);
    let x = random::element(rng, &shape);
    let a = x.mul(&x.adjoint());
    let Ok(p) = spectral_projection(&a, a.norm() * (0.1 + 0.8 * rng.unit_f64())) else { return Ok(()) };
    let j = core(ideal_from_projection(&p))?;
    let again = core(ideal_support_projection(&j.spanning_set()))?;
    ensure(again.support_projection().approx_eq(&p, 1e-8), || "support projection changed".into())
}

/// Compares the decision with random rank-one ideals `qA`, `q = vv*`: a
/// random `v` misses `range(p)` unless `p` is the identity in that block.
fn algebra_essentiality_oracle(rng: &mut Rng, _: &SuiteConfig) -> Outcome {
    let shape = random::shape(rng, 3, 5);
    let ranks: Vec<usize> =
        shape.block_dims().iter().map(|&n| if rng.coin() { n } else { rng.below(n as u64 + 1) as usize }).collect();
    let x = random::element_of_ranks(rng, &shape, &ranks);
    let j = core(ideal_support_projection(std::slice::from_ref(&x)))?;
    let decision = is_essential_right_ideal(&j).essential;
    let mut falsified = false;
    for (b, &n) in shape.block_dims().iter().enumerate() {
        let v: Vec<C64> = (0..n).map(|_| random::complex(rng)).collect();
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let q = essmod::numeric::CMatrix::from_fn(n, n, |r, c| v[r] * v[c].conj() / norm2);
        let w = core(ideal_from_projection(&core(AlgebraElement::single_block(&shape, b, q))?))?;
        if j.intersection_dim(&w) == 0 {
            falsified = true;
        }
    }
    ensure(decision == !falsified, || format!("decision {decision} but rank-one falsifier says {}", !falsified))
}

fn module_setting(rng: &mut Rng) -> (essmod::algebra::AlgebraShape, usize) {
    (random::shape(rng, 2, 3), 1 + rng.below(4) as usize)
}

fn module_theta_action(rng: &mut Rng, _: &SuiteConfig) -> Outcome {
    let (s, k) = module_setting(rng);
    let (x, y, z) = (random::module_element(rng, &s, k), random::module_element(rng, &s, k), random::module_element(rng, &s, k));
    let lhs = core(core(theta(&x, &y))?.apply(&z))?;
    let rhs = core(theta_action(&x, &y, &z))?;
    let err = lhs.sub(&rhs).max_abs();
    ensure(err <= 1e-10, || format!("Θ_(x,y)z − x⟨y,z⟩ = {err:e}"))
}

fn module_theta_nondegenerate(rng: &mut Rng, cfg: &SuiteConfig) -> Outcome {
    let (s, k) = module_setting(rng);
    let x = random::unit_module_element(rng, &s, k);
    let t = core(theta(&x, &x))?.norm();
    let mut ok = t >= 1e-8;
    if cfg.theta_fault {
        ok = !ok;
    }
    ensure(ok, || format!("‖Θ_(x,x)‖ = {t:e} for ‖x‖ = 1"))
}

fn module_theta_lipschitz(rng: &mut Rng, _: &SuiteConfig) -> Outcome {
    let (s, k) = module_setting(rng);
    let x = random::module_element(rng, &s, k);
    let y = random::module_element(rng, &s, k);
    let x2 = random::module_element(rng, &s, k);
    let y2 = random::module_element(rng, &s, k);
    let lhs = core(theta(&x, &y))?.sub(&core(theta(&x2, &y2))?).norm();
    let rhs = x.norm() * y.sub(&y2).norm() + x.sub(&x2).norm() * y2.norm();
    ensure(lhs <= rhs + 1e-9, || format!("‖Θ − Θ'‖ = {lhs} > {rhs}"))
}

fn module_theta_composition(rng: &mut Rng, _: &SuiteConfig) -> Outcome {
    let (s, k) = module_setting(rng);
    let [x, y, u, v] = std::array::from_fn(|_| random::module_element(rng, &s, k));
    let lhs = core(theta(&x, &y))?.compose(&core(theta(&u, &v))?);
    let rhs = core(theta(&x.right_mul(&core(inner_product(&y, &u))?), &v))?;
    let err = lhs.sub(&rhs).max_abs();
    ensure(err <= 1e-9, || format!("Θ_(x,y)Θ_(u,v) − Θ_(x⟨y,u⟩,v) = {err:e}"))
}

fn module_operator_absorbs_theta(rng: &mut Rng, _: &SuiteConfig) -> Outcome {
    let (s, k) = module_setting(rng);
    let m = random::module_element(rng, &s, k);
    let a = random::element(rng, &s);
    let t = core(CompactOperator::from_algebra(&s, k, &random::element(rng, &s.amplify(k))))?;
    let ma = m.right_mul(&a);
    let tma = core(t.apply(&ma))?;
    let lhs = t.compose(&core(theta(&ma, &tma))?);
    let rhs = core(theta(&tma, &tma))?;
    let err = lhs.sub(&rhs).max_abs();
    ensure(err <= 1e-9 * (1.0 + rhs.max_abs()), || format!("TΘ_(ma,Tma) − Θ_(Tma,Tma) = {err:e}"))
}

fn module_correspondence(rng: &mut Rng, _: &SuiteConfig) -> Outcome {
    let s = random::shape(rng, 2, 3);
    let k = 1 + rng.below(4) as usize;
    let (n, count, kept) = random::submodule(rng, &s, k);
    let j = ideal_of_submodule(&n);
    let back = core(submodule_of_ideal(&j, &s, k))?;
    ensure(back.same_span(&n), || format!("roundtrip changed dim {} → {}", n.dim(), back.dim()))?;
    let e = core(is_essential_submodule(&n))?;
    let ideal_decision = is_essential_right_ideal(&j).essential;
    ensure(e.essential == ideal_decision, || format!("submodule says {}, ideal says {ideal_decision}", e.essential))?;
    let planted = s.block_dims().iter().zip(&kept).all(|(&ni, &ki)| count * ki >= k * ni);
    ensure(e.essential == planted, || format!("decision {} but generic rank says {planted}", e.essential))
}

fn field_set_algebra(rng: &mut Rng, _: &SuiteConfig) -> Outcome {
    let s = random::subset(rng, 12);
    let t = random::subset(rng, 12);
    let (int, clo) = (s.interior(), s.closure());
    ensure(int.subset_of(&s) && s.subset_of(&clo), || format!("interior/closure sandwich fails for {s}"))?;
    ensure(clo.closure() == clo && int.interior() == int, || format!("closure or interior not idempotent on {s}"))?;
    ensure(s.is_nowhere_dense() == s.is_nowhere_dense_via_closure(), || format!("nowhere-density routes disagree on {s}"))?;
    ensure(s.union(&t).complement() == s.complement().intersection(&t.complement()), || format!("De Morgan fails for {s}, {t}"))
}

fn field_instance(rng: &mut Rng, defect: DefectMode) -> Result<FieldModuleSpec, String> {
    let d = 1 + rng.below(2) as usize;
    let opts = GenOptions { d: Some(d), pieces: Some(1 + rng.below(4) as usize), defect, ..Default::default() };
    let inst = generate(Kind::Field, &opts, rng.next_u64()).map_err(|e| e.to_string())?;
    match inst.parse_payload().map_err(|e| e.to_string())? {
        crate::instance::Payload::Field(spec) => Ok(spec),
        _ => Err("generator produced a non-field instance".into()),
    }
}

fn random_defect(rng: &mut Rng) -> DefectMode {
    [DefectMode::None, DefectMode::Points, DefectMode::Interval][rng.below(3) as usize]
}

fn field_residual_within_total(rng: &mut Rng, _: &SuiteConfig) -> Outcome {
    let mode = random_defect(rng);
    let spec = field_instance(rng, mode)?;
    let y = core(total_defect_set(&spec))?.y;
    for _ in 0..2 {
        let m = random::combination(rng, &spec.generators);
        match residual_set(&m, &spec.subfield) {
            Ok(ym) => ensure(ym.subset_of(&y), || format!("Y_m = {ym} escapes Y = {y}"))?,
            Err(Error::IrrationalRoot { .. }) => {}
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(())
}

fn field_criterion_coherence(rng: &mut Rng, _: &SuiteConfig) -> Outcome {
    let mode = random_defect(rng);
    let spec = field_instance(rng, mode)?;
    let e = core(is_essential_field(&spec))?;
    ensure(e.essential == e.via_closure, || "the two nowhere-density routes disagree".into())?;
    if e.essential {
        let m = random::combination(rng, &spec.generators);
        if m.is_zero() {
            return Ok(());
        }
        match essential_witness(&m, &spec.subfield) {
            Ok(w) => ensure(w.verified(), || "essential witness failed its recheck".into()),
            Err(Error::IrrationalRoot { .. }) => Ok(()),
            Err(err) => Err(err.to_string()),
        }
    } else {
        for g in &spec.generators {
            if core(residual_set(g, &spec.subfield))?.closure().interior().is_empty() {
                continue;
            }
            let w = core(non_essential_witness(g, &spec.subfield))?;
            return ensure(w.verified(), || "non-essential witness failed its recheck".into());
        }
        Err(format!("no generator has a defect with interior although Y = {}", e.defect.y))
    }
}

fn field_inductive_witness(rng: &mut Rng, _: &SuiteConfig) -> Outcome {
    let spec = field_instance(rng, DefectMode::Interval)?;
    let y = core(total_defect_set(&spec))?.y;
    let iv = y.intervals()[0].clone();
    let w = core(inductive_witness_section(&spec, (&iv.lo, &iv.hi), None, 8))?;
    ensure(w.verified(), || format!("postcondition or coefficient bound fails: {:?}", w.steps))?;
    let ym = core(residual_set(&w.m, &spec.subfield))?;
    ensure(!ym.is_nowhere_dense(), || format!("Y_m = {ym} is nowhere dense"))
}

fn field_limit_identity(rng: &mut Rng, _: &SuiteConfig) -> Outcome {
    let d = 1 + rng.below(3) as usize;
    let deg = rng.below(3) as usize;
    let m = random::vector_section(rng, d, deg);
    let cdeg = 1 + rng.below(2) as usize;
    let c = random::scalar_section(rng, cdeg);
    let n = core(m.mul_scalar(&c))?;
    ensure(core(commutative_limit_identity(&m, &n))?, || "m⟨n,n⟩ ≠ n⟨n,m⟩ for n = m·c".into())
}

fn random_kind(rng: &mut Rng) -> Kind {
    [Kind::RightIdeal, Kind::ModuleSubmodule, Kind::Field][rng.below(3) as usize]
}

fn cli_determinism(rng: &mut Rng, _: &SuiteConfig) -> Outcome {
    let kind = random_kind(rng);
    let seed = rng.next_u64();
    let opts = GenOptions::default();
    let a = serde_json::to_string(&generate(kind, &opts, seed).map_err(|e| e.to_string())?).expect("serializable");
    let b = serde_json::to_string(&generate(kind, &opts, seed).map_err(|e| e.to_string())?).expect("serializable");
    ensure(a == b, || format!("{kind:?} seed {seed} generated different bytes"))
}

fn cli_roundtrip(rng: &mut Rng, _: &SuiteConfig) -> Outcome {
    let kind = random_kind(rng);
    let seed = rng.next_u64();
    let inst = generate(kind, &GenOptions::default(), seed).map_err(|e| e.to_string())?;
    let text = serde_json::to_string(&inst).expect("serializable");
    let back = Instance::from_json(&text).map_err(|e| e.to_string())?;
    let report = cmd_check(&back).map_err(|e| e.to_string())?;
    ensure(report.passed, || format!("{kind:?} seed {seed}: check disagrees with the planted answer"))
}
