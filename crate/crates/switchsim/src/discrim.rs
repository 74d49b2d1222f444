//! Discrimination strategy evaluation: the Helstrom bound, the three
//! reference single-query strategies (sequential, Choi-state, quantum
//! switch), the Gamma-state reduction for symmetric testers with its overlap
//! formula and numeric optimization, and the multi-pair switch check.
//!
//! Equal priors `(1/2, 1/2)` are used throughout.

use crate::channels::{
    build_mu, build_rotation, kraus_to_choi, Axis, ChoiFactors, ChoiOperator, KrausChannel,
};
use crate::haar::{exact_average_choi, exact_average_choi_tilde, exact_twirl, SU2Element};
use crate::linalg::{cr, ket_minus, ket_plus, CMatrix};
use crate::spincouple::{
    half_spin_operators, normalization_residual, xi_tilde_from, HalfSpinOps, SymmetricTester,
};
use crate::switch::{switch_choi_general, switch_output, CausalOrder, SwitchConfig};
use crate::{Error, Result};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

/// Optimal success probability for discriminating `rho0` (prior `p0`) from
/// `rho1` (prior `p1`): `1/2 + ||p0 rho0 - p1 rho1||_1 / 2`, clipped to
/// `[1/2, 1]`.
pub fn helstrom(rho0: &CMatrix, rho1: &CMatrix, p0: f64, p1: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p0) || !(0.0..=1.0).contains(&p1) || (p0 + p1 - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "priors ({p0}, {p1}) do not form a distribution"
        )));
    }
    if rho0.rows() != rho1.rows() {
        return Err(Error::DimensionMismatch(format!(
            "state dimensions {} != {}",
            rho0.rows(),
            rho1.rows()
        )));
    }
    let diff = &rho0.scale(cr(p0)) - &rho1.scale(cr(p1));
    let p = 0.5 + 0.5 * diff.trace_norm()?;
    Ok(p.clamp(0.5, 1.0))
}

/// Context of a [`StrategyResult`]: probe amplitudes, switch amplitudes and
/// sample counts where applicable.
#[derive(Debug, Clone, Default, Serialize)]
pub struct StrategyMetadata {
    /// Probe ket amplitudes as `[re, im]` pairs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

/// Outcome of evaluating one discrimination strategy: the two conditional
/// output states and the equal-prior Helstrom success probability.
#[derive(Debug, Clone)]
pub struct StrategyResult {
    pub name: String,
    pub success_probability: f64,
    pub rho0: CMatrix,
    pub rho1: CMatrix,
    pub metadata: StrategyMetadata,
}

impl StrategyResult {
    fn evaluate(
        name: &str,
        rho0: CMatrix,
        rho1: CMatrix,
        metadata: StrategyMetadata,
    ) -> Result<Self> {
        let success_probability = helstrom(&rho0, &rho1, 0.5, 0.5)?;
        Ok(StrategyResult {
            name: name.to_string(),
            success_probability,
            rho0,
            rho1,
            metadata,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let state = |m: &CMatrix| -> serde_json::Value {
            let rows: Vec<Vec<[f64; 2]>> = (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect())
                .collect();
            json!(rows)
        };
        json!({
            "strategy": self.name,
            "success_probability": self.success_probability,
            "rho0": state(&self.rho0),
            "rho1": state(&self.rho1),
            "metadata": serde_json::to_value(&self.metadata).expect("serializable"),
        })
    }
}

fn probe_metadata(probe: &CMatrix) -> Vec<[f64; 2]> {
    (0..probe.rows())
        .map(|i| [probe.get(i, 0).re, probe.get(i, 0).im])
        .collect()
}

fn check_qubit_probe(probe: &CMatrix) -> Result<()> {
    if probe.cols() != 1 || probe.rows() != 2 {
        return Err(Error::DimensionMismatch("probe must be a qubit ket".into()));
    }
    if (probe.frobenius_norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter("probe is not normalized".into()));
    }
    Ok(())
}

/// Parallel strategy with a maximally entangled probe: the two hypotheses
/// produce the Choi states `C_i / 4`.
pub fn strategy_choi() -> Result<StrategyResult> {
    let psi = crate::linalg::max_entangled(4).scale(cr(0.5));
    let mut states = Vec::new();
    for h in [0, 1] {
        let c = exact_average_choi(h)?;
        states.push(crate::switch::parallel_output(
            &psi.clone().with_shape(&[16], &[1]),
            &c,
        )?);
    }
    let rho1 = states.pop().expect("two states");
    let rho0 = states.pop().expect("two states");
    StrategyResult::evaluate(
        "choi",
        rho0,
        rho1,
        StrategyMetadata {
            probe: Some(probe_metadata(&psi.with_shape(&[16], &[1]))),
            ..Default::default()
        },
    )
}

/// Choi operator (on `in ⊗ out`) of the Haar-averaged composition of the two
/// local channels of hypothesis `h` in the given causal order.
fn averaged_sequential_choi(hypothesis: usize, order: CausalOrder) -> Result<ChoiOperator> {
    let composed = match hypothesis {
        0 => {
            let mu = build_mu(&SU2Element::identity())?;
            KrausChannel::compose(&mu, &mu)?
        }
        1 => {
            let x = build_rotation(&SU2Element::identity(), Axis::X)?;
            let y = build_rotation(&SU2Element::identity(), Axis::Y)?;
            match order {
                CausalOrder::AThenB => KrausChannel::compose(&y, &x)?,
                CausalOrder::BThenA => KrausChannel::compose(&x, &y)?,
            }
        }
        _ => {
            return Err(Error::InvalidParameter(format!(
                "hypothesis must be 0 or 1, got {hypothesis}"
            )))
        }
    };
    let choi = kraus_to_choi(&composed);
    let avg = exact_twirl(choi.matrix(), &[0])?;
    ChoiOperator::new(avg, ChoiFactors::InOut)
}

/// Single sequential circuit averaged over the unknown unitary: feeds the
/// probe through both local channels in the given order and evaluates the
/// Helstrom bound on the averaged outputs.
pub fn strategy_sequential(order: CausalOrder, probe: &CMatrix) -> Result<StrategyResult> {
    check_qubit_probe(probe)?;
    let phi = probe.outer(probe);
    let rho0 = averaged_sequential_choi(0, order)?.apply(&phi)?;
    let rho1 = averaged_sequential_choi(1, order)?.apply(&phi)?;
    let name = match order {
        CausalOrder::AThenB => "sequential-ab",
        CausalOrder::BThenA => "sequential-ba",
    };
    StrategyResult::evaluate(
        name,
        rho0,
        rho1,
        StrategyMetadata {
            probe: Some(probe_metadata(probe)),
            ..Default::default()
        },
    )
}

/// Superposition-of-causal-orders strategy on the averaged channels.
pub fn strategy_switch(
    probe: &CMatrix,
    alpha: Complex64,
    beta: Complex64,
) -> Result<StrategyResult> {
    check_qubit_probe(probe)?;
    let cfg = SwitchConfig::trivial(alpha, beta, probe)?;
    let rho0 = switch_choi_general(&cfg, &exact_average_choi(0)?)?;
    let rho1 = switch_choi_general(&cfg, &exact_average_choi(1)?)?;
    StrategyResult::evaluate(
        "switch",
        rho0,
        rho1,
        StrategyMetadata {
            probe: Some(probe_metadata(probe)),
            alpha: Some([alpha.re, alpha.im]),
            beta: Some([beta.re, beta.im]),
            ..Default::default()
        },
    )
}

/// Switch discrimination success for one concrete channel-pair instance:
/// hypothesis 0 uses `(M_U, M_U)`, hypothesis 1 uses `(X_V, Y_V)`.
pub fn switch_instance_success(
    u: &SU2Element,
    v: &SU2Element,
    probe: &CMatrix,
    alpha: Complex64,
    beta: Complex64,
) -> Result<f64> {
    check_qubit_probe(probe)?;
    let cfg = SwitchConfig::trivial(alpha, beta, probe)?;
    let mu = build_mu(u)?;
    let rho0 = switch_output(&cfg, &mu, &mu)?;
    let xv = build_rotation(v, Axis::X)?;
    let yv = build_rotation(v, Axis::Y)?;
    let rho1 = switch_output(&cfg, &xv, &yv)?;
    helstrom(&rho0, &rho1, 0.5, 0.5)
}

fn check_normalized(t: &SymmetricTester) -> Result<()> {
    let res = normalization_residual(t);
    if res > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "tester is not normalized (residual {res:e})"
        )));
    }
    Ok(())
}

fn xi_extended(t: &SymmetricTester, ops: &HalfSpinOps) -> Result<CMatrix> {
    Ok(xi_tilde_from(t, ops)?.kron(&CMatrix::identity(&[2])))
}

/// The two states `Gamma_i = (Xi~^{1/2} ⊗ I) C~_i (Xi~^{1/2} ⊗ I)` whose
/// discrimination is equivalent to the tester-based channel discrimination.
/// Requires a normalized tester.
pub fn gamma_states(t: &SymmetricTester) -> Result<(CMatrix, CMatrix)> {
    check_normalized(t)?;
    let ops = half_spin_operators();
    let root = xi_tilde_from(t, &ops)?.sqrt_psd()?.kron(&CMatrix::identity(&[2]));
    let g = |h: usize| -> Result<CMatrix> {
        let c = exact_average_choi_tilde(h)?;
        Ok(&(&root * &c) * &root)
    };
    Ok((g(0)?, g(1)?))
}

/// How [`overlap_symmetric`] computes `Tr[Gamma_0 Gamma_1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapMethod {
    /// Direct trace computation.
    Numeric,
    /// The `a = 0` closed form `4|b01|^2/9 + 4 b11^2/27`.
    ClosedForm,
}

/// `Tr[Gamma_0 Gamma_1]` for a symmetric tester (not required to be
/// normalized). Zero exactly when `a = b11 = b01 = 0`.
pub fn overlap_symmetric(t: &SymmetricTester, method: OverlapMethod) -> Result<f64> {
    match method {
        OverlapMethod::Numeric => {
            let ops = half_spin_operators();
            let xi = xi_extended(t, &ops)?;
            let c0 = exact_average_choi_tilde(0)?;
            let c1 = exact_average_choi_tilde(1)?;
            Ok((&(&(&c0 * &xi) * &c1) * &xi).trace().re)
        }
        OverlapMethod::ClosedForm => {
            if t.a.abs() > 1e-12 {
                return Err(Error::InvalidParameter(
                    "closed-form overlap requires a == 0".into(),
                ));
            }
            let b01 = t.b[0][1].norm_sqr();
            let b11 = t.b[1][1].re;
            Ok(4.0 * b01 / 9.0 + 4.0 * b11 * b11 / 27.0)
        }
    }
}

/// Precomputed quadratic form of the overlap in the five real tester
/// parameters `(a, b00, b11, Re b01, Im b01)`.
#[derive(Debug, Clone)]
pub struct OverlapForm {
    f: [[f64; 5]; 5],
}

impl OverlapForm {
    pub fn eval(&self, a: f64, b00: f64, b11: f64, re01: f64, im01: f64) -> f64 {
        let theta = [a, b00, b11, re01, im01];
        let mut sum = 0.0;
        for p in 0..5 {
            for q in 0..5 {
                sum += theta[p] * self.f[p][q] * theta[q];
            }
        }
        sum
    }
}

/// Builds the overlap quadratic form from the basis operators
/// `{P_{3/2}, T00, T11, T01 + T10, i(T01 - T10)}`.
pub fn overlap_form() -> Result<OverlapForm> {
    let ops = half_spin_operators();
    let i2 = CMatrix::identity(&[2]);
    let im = crate::linalg::c(0.0, 1.0);
    let basis = [
        ops.p_three_half.kron(&i2),
        ops.t[0][0].kron(&i2),
        ops.t[1][1].kron(&i2),
        (&ops.t[0][1] + &ops.t[1][0]).kron(&i2),
        (&ops.t[0][1].scale(im) - &ops.t[1][0].scale(im)).kron(&i2),
    ];
    let c0 = exact_average_choi_tilde(0)?;
    let c1 = exact_average_choi_tilde(1)?;
    let mut f = [[0.0; 5]; 5];
    for p in 0..5 {
        let left = &(&c0 * &basis[p]) * &c1;
        for q in 0..5 {
            let tr = (&left * &basis[q]).trace();
            f[p][q] = tr.re;
        }
    }
    // symmetrize (the trace form already is, up to roundoff)
    let mut sym = [[0.0; 5]; 5];
    for p in 0..5 {
        for q in 0..5 {
            sym[p][q] = 0.5 * (f[p][q] + f[q][p]);
        }
    }
    Ok(OverlapForm { f: sym })
}

/// Objective for [`optimize_symmetric_tester`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TesterObjective {
    /// Minimize `Tr[Gamma_0 Gamma_1]` over normalized symmetric testers.
    MinOverlap,
    /// Maximize the Helstrom bound on `(Gamma_0, Gamma_1)`.
    MaxHelstrom,
}

/// Builds a normalized symmetric tester from the free parameters
/// `(a, Re b01, Im b01)`; normalization fixes `b00 = 1/4` and
/// `b11 = 3/4 - 2a`.
pub fn tester_from_params(a: f64, re01: f64, im01: f64) -> Result<SymmetricTester> {
    let b11 = 0.75 - 2.0 * a;
    SymmetricTester::new(
        a,
        [
            [cr(0.25), crate::linalg::c(re01, im01)],
            [crate::linalg::c(re01, -im01), cr(b11)],
        ],
    )
}

const A_MAX: f64 = 0.375;

fn project(params: [f64; 3]) -> [f64; 3] {
    let a = params[0].clamp(0.0, A_MAX);
    let rmax = (0.25 * (0.75 - 2.0 * a)).sqrt().max(0.0);
    let r = params[1].hypot(params[2]);
    if r <= rmax || r == 0.0 {
        [a, params[1], params[2]]
    } else {
        let s = rmax / r;
        [a, params[1] * s, params[2] * s]
    }
}

fn pattern_search<F: Fn(&[f64; 3]) -> f64>(f: &F, start: [f64; 3]) -> ([f64; 3], f64) {
    let mut x = project(start);
    let mut fx = f(&x);
    let mut step = 0.05;
    while step > 1e-8 {
        let mut improved = false;
        for dim in 0..3 {
            for sign in [1.0, -1.0] {
                let mut y = x;
                y[dim] += sign * step;
                let y = project(y);
                let fy = f(&y);
                if fy < fx - 1e-15 {
                    x = y;
                    fx = fy;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, fx)
}

/// Numeric optimization over normalized symmetric testers. Deterministic:
/// pattern search from a fixed lattice of 27 starts, ties broken by value
/// then lexicographic parameters. Returns the optimizing tester and the
/// objective value (overlap for `MinOverlap`, success probability for
/// `MaxHelstrom`).
pub fn optimize_symmetric_tester(objective: TesterObjective) -> Result<(SymmetricTester, f64)> {
    let form = overlap_form()?;
    let ops = half_spin_operators();
    let c0 = exact_average_choi_tilde(0)?;
    let c1 = exact_average_choi_tilde(1)?;
    let eval = |p: &[f64; 3]| -> f64 {
        match objective {
            TesterObjective::MinOverlap => form.eval(p[0], 0.25, 0.75 - 2.0 * p[0], p[1], p[2]),
            TesterObjective::MaxHelstrom => {
                // minimize the negative success probability
                let t = tester_from_params(p[0], p[1], p[2]).expect("projected params");
                let root = xi_tilde_from(&t, &ops)
                    .and_then(|xi| xi.sqrt_psd())
                    .expect("PSD tester")
                    .kron(&CMatrix::identity(&[2]));
                let g0 = &(&root * &c0) * &root;
                let g1 = &(&root * &c1) * &root;
                -helstrom(&g0, &g1, 0.5, 0.5).expect("valid states")
            }
        }
    };
    let mut starts = Vec::new();
    for a in [0.0, 0.12, 0.24, 0.36] {
        for re in [-0.3, 0.0, 0.3] {
            for im in [-0.3, 0.0, 0.3] {
                starts.push([a, re, im]);
            }
        }
    }
    let mut best: Option<([f64; 3], f64)> = None;
    for s in starts {
        let (x, fx) = pattern_search(&eval, s);
        let better = match &best {
            None => true,
            Some((bx, bfx)) => {
                fx < bfx - 1e-13
                    || ((fx - bfx).abs() <= 1e-13
                        && x.iter()
                            .zip(bx.iter())
                            .find(|(p, q)| (*p - *q).abs() > 1e-12)
                            .map(|(p, q)| p < q)
                            .unwrap_or(false))
            }
        };
        if better {
            best = Some((x, fx));
        }
    }
    let (x, fx) = best.expect("at least one start");
    let t = tester_from_params(x[0], x[1], x[2])?;
    let value = match objective {
        TesterObjective::MinOverlap => fx,
        TesterObjective::MaxHelstrom => -fx,
    };
    Ok((t, value))
}

/// Multi-pair switch scheme: `n_pairs` independent channel pairs, each run
/// through its own switch, each control measured in the `|±⟩` basis. Returns
/// the joint success probability of identifying all `2^n_pairs` hypotheses,
/// averaged over uniform hypothesis priors, with random `(U, V)` per pair
/// drawn from `seed`.
///
/// When `alpha * beta == 0` there is no interference and the control
/// measurement is uninformative; the evaluation falls back to the averaged
/// sequential discrimination per pair, giving `(2/3)^n_pairs`.
pub fn multiplex_check(
    n_pairs: usize,
    alpha: Complex64,
    beta: Complex64,
    seed: u64,
) -> Result<f64> {
    if !(1..=2).contains(&n_pairs) {
        return Err(Error::InvalidParameter(format!(
            "n_pairs must be 1 or 2, got {n_pairs}"
        )));
    }
    if (alpha.norm_sqr() + beta.norm_sqr() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(
            "switch amplitudes are not normalized".into(),
        ));
    }
    let probe = crate::linalg::ket0();
    if (alpha * beta).norm() < 1e-12 {
        let per_pair = strategy_sequential(CausalOrder::AThenB, &probe)?.success_probability;
        return Ok(per_pair.powi(n_pairs as i32));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = SwitchConfig::trivial(alpha, beta, &probe)?;
    let plus = ket_plus();
    let minus = ket_minus();
    // per pair, per hypothesis: probability that the control measurement
    // reports the correct hypothesis
    let mut per_pair = Vec::new();
    for _ in 0..n_pairs {
        let u = crate::haar::sample_su2(&mut rng);
        let v = crate::haar::sample_su2(&mut rng);
        let mu = build_mu(&u)?;
        let ctrl0 = switch_output(&cfg, &mu, &mu)?.partial_trace(&[0])?;
        let xv = build_rotation(&v, Axis::X)?;
        let yv = build_rotation(&v, Axis::Y)?;
        let ctrl1 = switch_output(&cfg, &xv, &yv)?.partial_trace(&[0])?;
        let p0 = plus.inner(&(&ctrl0 * &plus)).re;
        let p1 = minus.inner(&(&ctrl1 * &minus)).re;
        per_pair.push([p0, p1]);
    }
    // average the joint success over the 2^n uniform hypotheses
    let n_hyp = 1usize << n_pairs;
    let mut total = 0.0;
    for hyp in 0..n_hyp {
        let mut joint = 1.0;
        for (pair, probs) in per_pair.iter().enumerate() {
            joint *= probs[(hyp >> pair) & 1];
        }
        total += joint;
    }
    Ok(total / n_hyp as f64)
}
