//! End-to-end acceptance suite. Each test checks one headline claim of the
//! toolkit and prints a single PASS line so the criteria can be audited from
//! the test log (`cargo test --test acceptance -- --nocapture`).

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use switchsim::channels::{build_mu, build_rotation, choi_to_kraus, lambda0, lambda1, Axis};
use switchsim::discrim::{
    helstrom, multiplex_check, optimize_symmetric_tester, overlap_symmetric, strategy_choi,
    strategy_sequential, strategy_switch, switch_instance_success, OverlapMethod, TesterObjective,
};
use switchsim::haar::{
    exact_average_choi, exact_average_choi_tilde, mc_average_hermitian, sample_su2, SU2Element,
};
use switchsim::linalg::{bloch_ket, cr, ket_minus, ket_plus, CMatrix};
use switchsim::spincouple::{
    coupled_basis, half_spin_operators, jone_operators, normalization_residual, pair_projector,
    SymmetricTester, Tree,
};
use switchsim::switch::{switch_output, CausalOrder, SwitchConfig};

fn balanced() -> Complex64 {
    cr(1.0 / 2f64.sqrt())
}

fn random_probe<R: Rng>(rng: &mut R) -> CMatrix {
    bloch_ket(
        rng.random::<f64>() * std::f64::consts::PI,
        rng.random::<f64>() * std::f64::consts::TAU,
    )
}

/// Criterion 1: the balanced switch discriminates perfectly for every
/// channel-pair instance, with control marginals |+><+| and |-><-|.
#[test]
fn c01_switch_perfection() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let plus = ket_plus();
    let minus = ket_minus();
    let pp = plus.outer(&plus);
    let mm = minus.outer(&minus);
    for _ in 0..100 {
        let u = sample_su2(&mut rng);
        let v = sample_su2(&mut rng);
        let probe = random_probe(&mut rng);
        let p = switch_instance_success(&u, &v, &probe, balanced(), balanced()).unwrap();
        assert!((p - 1.0).abs() < 1e-10, "instance success {p}");
        let cfg = SwitchConfig::trivial(balanced(), balanced(), &probe).unwrap();
        let mu = build_mu(&u).unwrap();
        let ctrl0 = switch_output(&cfg, &mu, &mu)
            .unwrap()
            .partial_trace(&[0])
            .unwrap();
        let xv = build_rotation(&v, Axis::X).unwrap();
        let yv = build_rotation(&v, Axis::Y).unwrap();
        let ctrl1 = switch_output(&cfg, &xv, &yv)
            .unwrap()
            .partial_trace(&[0])
            .unwrap();
        assert!(ctrl0.max_abs_diff(&pp) < 1e-12);
        assert!(ctrl1.max_abs_diff(&mm) < 1e-12);
    }
    println!("PASS criterion 1: switch perfection over 100 random instances");
}

/// Criterion 2: the fixed-order sequential strategy reaches exactly 2/3 for
/// both orders and any probe.
#[test]
fn c02_sequential_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let probe = random_probe(&mut rng);
        for order in [CausalOrder::AThenB, CausalOrder::BThenA] {
            let res = strategy_sequential(order, &probe).unwrap();
            assert!(
                (res.success_probability - 2.0 / 3.0).abs() < 1e-9,
                "sequential success {}",
                res.success_probability
            );
        }
    }
    println!("PASS criterion 2: sequential strategy = 2/3 for both orders, 10 probes");
}

/// Criterion 3: the Choi-state strategy reaches 11/12, consistent with the
/// trace-norm distance 20/3 between the averaged Choi operators.
#[test]
fn c03_choi_state_value() {
    let res = strategy_choi().unwrap();
    assert!(
        (res.success_probability - 11.0 / 12.0).abs() < 1e-9,
        "choi success {}",
        res.success_probability
    );
    let c0 = exact_average_choi_tilde(0).unwrap();
    let c1 = exact_average_choi_tilde(1).unwrap();
    let dist = (&c0 - &c1).trace_norm().unwrap();
    assert!((dist - 20.0 / 3.0).abs() < 1e-9, "trace norm {dist}");
    println!("PASS criterion 3: Choi strategy = 11/12, trace-norm distance = 20/3");
}

/// Criterion 4: the exact twirl of the two hypothesis operators matches the
/// closed projector combinations (rotated frame) to 1e-12, and a 1e5-sample
/// Monte Carlo average agrees within three standard errors.
#[test]
fn c04_exact_twirl_identities() {
    let ops = jone_operators();
    let sum_outer = |f: &[CMatrix; 3]| {
        let mut s = CMatrix::zeros(&[2, 2, 2, 2], &[2, 2, 2, 2]);
        for v in f.iter() {
            s = &s + &v.outer(v);
        }
        s
    };
    let p2_11 = pair_projector(2, 1, 1).unwrap();
    let p0_11 = pair_projector(0, 1, 1).unwrap();
    let p0_00 = pair_projector(0, 0, 0).unwrap();
    let closed1 = &p2_11.scale(cr(2.0 / 5.0)) + &sum_outer(&ops.z).scale(cr(2.0 / 3.0));
    let closed0 = &(&p2_11.scale(cr(2.0 / 15.0)) + &p0_11.scale(cr(1.0 / 3.0)))
        + &(&(&sum_outer(&ops.w) + &sum_outer(&ops.v)).scale(cr(1.0 / 3.0)) + &p0_00);
    let tilde0 = exact_average_choi_tilde(0).unwrap();
    let tilde1 = exact_average_choi_tilde(1).unwrap();
    assert!(tilde0.max_abs_diff(&closed0) < 1e-12);
    assert!(tilde1.max_abs_diff(&closed1) < 1e-12);

    // Monte Carlo cross-check of the raw averages at 1e5 samples; entrywise
    // fluctuations are O(1) per sample, so three standard errors is about
    // 3/sqrt(1e5) ~ 1e-2
    let samples = 100_000;
    let mc_tol = 3.0 / (samples as f64).sqrt() * 1.5;
    for (h, lambda) in [(0usize, lambda0()), (1, lambda1())] {
        let exact = exact_average_choi(h).unwrap();
        let mc = mc_average_hermitian(4 + h as u64, samples, |u: &SU2Element| {
            let um = u.matrix();
            let uc = um.conj();
            let g = uc.kron(&um).kron(&uc).kron(&um);
            &(&g * &lambda) * &g.dagger()
        });
        let dev = exact.matrix().max_abs_diff(&mc);
        assert!(dev < mc_tol, "MC twirl deviation {dev} for hypothesis {h}");
    }
    println!("PASS criterion 4: exact twirl matches closed forms (1e-12) and MC at 1e5 samples");
}

/// Criterion 5: partial traces of the invariant three-spin operators.
#[test]
fn c05_partial_trace_identities() {
    let ops = half_spin_operators();
    let basis = coupled_basis(2, Tree::Pair).unwrap();
    let two_spin = |j: i32| {
        let mut p = CMatrix::zeros(&[2, 2], &[2, 2]);
        for s in basis.states() {
            if s.tj == 2 * j {
                p = &p + &s.vector.outer(&s.vector);
            }
        }
        p
    };
    let p1 = two_spin(1);
    let p0 = two_spin(0);
    let tr3 = |m: &CMatrix| m.partial_trace(&[2]).unwrap();
    assert!(tr3(&ops.p_three_half).max_abs_diff(&p1.scale(cr(4.0 / 3.0))) < 1e-12);
    assert!(tr3(&ops.t[1][1]).max_abs_diff(&p1.scale(cr(2.0 / 3.0))) < 1e-12);
    assert!(tr3(&ops.t[0][0]).max_abs_diff(&p0.scale(cr(2.0))) < 1e-12);
    assert!(tr3(&ops.t[0][1]).frobenius_norm() < 1e-12);
    println!("PASS criterion 5: partial-trace identities for P_3/2, T11, T00, T01");
}

/// Criterion 6: the nine reference vector overlaps.
#[test]
fn c06_overlap_table() {
    let ops = jone_operators();
    let s3 = 3f64.sqrt();
    for k in 0..3 {
        let v0 = ops.psi[0][k].inner(&ops.v[k]);
        let vw = ops.psi[1][k].inner(&ops.w[k]);
        let vz = ops.psi[1][k].inner(&ops.z[k]);
        assert!((v0 - cr(1.0)).norm() < 1e-12);
        assert!((vw - cr(-1.0 / s3)).norm() < 1e-12);
        assert!((vz - cr((2f64 / 3.0).sqrt())).norm() < 1e-12);
    }
    println!("PASS criterion 6: nine vector overlaps match the closed values");
}

/// Criterion 7: the closed overlap formula for a = 0 testers, and the spot
/// value 1/12 at (b00, b11, b01) = (1/4, 3/4, 0).
#[test]
fn c07_overlap_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let b11 = rng.random::<f64>() * 0.75;
        let cap = (0.25 * b11).sqrt();
        let r = rng.random::<f64>() * cap;
        let ph = rng.random::<f64>() * std::f64::consts::TAU;
        let b01 = Complex64::from_polar(r, ph);
        let t = SymmetricTester::new(0.0, [[cr(0.25), b01], [b01.conj(), cr(b11)]]).unwrap();
        let num = overlap_symmetric(&t, OverlapMethod::Numeric).unwrap();
        let cf = overlap_symmetric(&t, OverlapMethod::ClosedForm).unwrap();
        assert!((num - cf).abs() < 1e-9, "numeric {num} vs closed {cf}");
    }
    let spot = SymmetricTester::diagonal(0.0, 0.25, 0.75).unwrap();
    let v = overlap_symmetric(&spot, OverlapMethod::Numeric).unwrap();
    assert!((v - 1.0 / 12.0).abs() < 1e-9, "spot overlap {v}");
    println!("PASS criterion 7: overlap formula on 50 random testers, spot value 1/12");
}

/// Criterion 8: the normalization residual vanishes exactly on the slice
/// 2a + b11 = 3/4, b00 = 1/4.
#[test]
fn c08_normalization_equivalence() {
    let steps = 22; // 22^3 > 1e4 grid points
    let mut checked = 0usize;
    for ia in 0..steps {
        for i00 in 0..steps {
            for i11 in 0..steps {
                let a = 0.4 * ia as f64 / (steps - 1) as f64;
                let b00 = 0.5 * i00 as f64 / (steps - 1) as f64;
                let b11 = 0.8 * i11 as f64 / (steps - 1) as f64;
                let t = SymmetricTester::diagonal(a, b00, b11).unwrap();
                let res = normalization_residual(&t);
                let on_slice = (2.0 * a + b11 - 0.75).abs() < 1e-12 && (b00 - 0.25).abs() < 1e-12;
                assert_eq!(
                    res < 1e-12,
                    on_slice,
                    "residual {res:e} at a={a}, b00={b00}, b11={b11}"
                );
                checked += 1;
            }
        }
    }
    assert!(checked >= 10_000);
    println!("PASS criterion 8: normalization iff 2a+b11=3/4 and b00=1/4 on {checked} grid points");
}

/// Criterion 9: no fixed-order single-query circuit discriminates perfectly:
/// the minimal Gamma-state overlap stays >= 0.01 and the maximal Helstrom
/// value stays < 1 - 1e-3. Exchange symmetry covers the B-before-A order.
#[test]
fn c09_impossibility_certificate() {
    let (t_min, min_overlap) = optimize_symmetric_tester(TesterObjective::MinOverlap).unwrap();
    assert!(
        min_overlap >= 0.01,
        "minimal overlap {min_overlap} below certificate threshold"
    );
    assert!(normalization_residual(&t_min) < 1e-9);
    let (t_max, max_success) = optimize_symmetric_tester(TesterObjective::MaxHelstrom).unwrap();
    assert!(
        max_success < 1.0 - 1e-3,
        "maximal success {max_success} too close to 1"
    );
    assert!(max_success > 2.0 / 3.0 - 1e-9);
    assert!(normalization_residual(&t_max) < 1e-9);
    // the hypotheses are exchange symmetric, so the same bound covers the
    // B-before-A causal structure
    let ex = |m: &CMatrix| m.permute_factors(&[2, 3, 0, 1]);
    let c0 = exact_average_choi(0).unwrap();
    let c1 = exact_average_choi(1).unwrap();
    assert!(ex(c0.matrix()).max_abs_diff(c0.matrix()) < 1e-12);
    assert!(ex(c1.matrix()).max_abs_diff(c1.matrix()) < 1e-12);
    println!(
        "PASS criterion 9: min overlap {min_overlap:.6} >= 0.01, max success {max_success:.6} < 1-1e-3"
    );
}

/// Criterion 10: commuting channel pairs set the control to |+>, and
/// anticommuting pairs to |->.
#[test]
fn c10_commuting_anticommuting() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let plus = ket_plus();
    let minus = ket_minus();
    let pp = plus.outer(&plus);
    let mm = minus.outer(&minus);
    for trial in 0..100 {
        let u = sample_su2(&mut rng);
        let probe = random_probe(&mut rng);
        let cfg = SwitchConfig::trivial(balanced(), balanced(), &probe).unwrap();
        if trial < 50 {
            // commuting pair: two measurements on the same basis
            let mu = build_mu(&u).unwrap();
            let ctrl = switch_output(&cfg, &mu, &mu)
                .unwrap()
                .partial_trace(&[0])
                .unwrap();
            assert!(ctrl.max_abs_diff(&pp) < 1e-12);
        } else {
            // anticommuting pair: orthogonal rotation axes in the same frame
            let a = build_rotation(&u, Axis::Y).unwrap();
            let b = build_rotation(&u, Axis::Z).unwrap();
            let ctrl = switch_output(&cfg, &a, &b)
                .unwrap()
                .partial_trace(&[0])
                .unwrap();
            assert!(ctrl.max_abs_diff(&mm) < 1e-12);
        }
    }
    println!("PASS criterion 10: 50 commuting and 50 anticommuting pairs set the control");
}

/// Criterion 11: the switch output depends only on the channels, not on the
/// chosen Kraus representation.
#[test]
fn c11_representation_independence() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let u = sample_su2(&mut rng);
        let v = sample_su2(&mut rng);
        let probe = random_probe(&mut rng);
        let cfg = SwitchConfig::trivial(balanced(), balanced(), &probe).unwrap();
        let ch_a = build_mu(&u).unwrap();
        let ch_b = build_rotation(&v, Axis::Y).unwrap();
        let reference = switch_output(&cfg, &ch_a, &ch_b).unwrap();
        // remix the Kraus operators of channel A by a random unitary
        let choi = switchsim::channels::kraus_to_choi(&ch_a);
        let remixed = choi_to_kraus(&choi).unwrap();
        let again = switch_output(&cfg, &remixed, &ch_b).unwrap();
        assert!(reference.max_abs_diff(&again) < 1e-10);
        let remix = switchsim::haar::random_unitary(remixed.kraus_ops().len(), &mut rng);
        let mixed: Vec<CMatrix> = (0..remixed.kraus_ops().len())
            .map(|i| {
                let mut k = CMatrix::zeros(&[2], &[2]);
                for (j, op) in remixed.kraus_ops().iter().enumerate() {
                    k = &k + &op.scale(remix.get(i, j));
                }
                k
            })
            .collect();
        let mixed_ch = switchsim::channels::KrausChannel::new(mixed).unwrap();
        let third = switch_output(&cfg, &mixed_ch, &ch_b).unwrap();
        assert!(reference.max_abs_diff(&third) < 1e-10);
    }
    println!("PASS criterion 11: switch invariant under Kraus remixing, 20 trials");
}

/// Criterion 12: two independent pairs are discriminated perfectly among the
/// four joint hypotheses.
#[test]
fn c12_multiplexing() {
    let v = multiplex_check(2, balanced(), balanced(), 12).unwrap();
    assert!((v - 1.0).abs() < 1e-10, "multiplex success {v}");
    println!("PASS criterion 12: two-pair multiplex success = 1");
}

/// Criterion 13: the CLI produces byte-identical reports for identical
/// seeds.
#[test]
fn c13_cli_determinism() {
    let bin = env!("CARGO_BIN_EXE_switchsim");
    let run = || {
        let out = std::process::Command::new(bin)
            .args(["switch-demo", "--seed", "42"])
            .output()
            .expect("CLI runs");
        assert!(out.status.success(), "CLI exited nonzero");
        out.stdout
    };
    let a = run();
    let b = run();
    assert!(!a.is_empty());
    assert_eq!(a, b, "reports differ between identical runs");
    println!("PASS criterion 13: byte-identical CLI reports for seed 42");
}

/// Cross-check retained alongside the criteria: the averaged strategies are
/// mutually consistent (switch at alpha=1 equals the sequential value, and
/// the balanced switch beats the Choi strategy).
#[test]
fn strategy_hierarchy() {
    let probe = bloch_ket(0.3, 1.1);
    let seq = strategy_sequential(CausalOrder::AThenB, &probe)
        .unwrap()
        .success_probability;
    let deg = strategy_switch(&probe, cr(1.0), cr(0.0))
        .unwrap()
        .success_probability;
    let choi = strategy_choi().unwrap().success_probability;
    let sw = strategy_switch(&probe, balanced(), balanced())
        .unwrap()
        .success_probability;
    assert!((seq - deg).abs() < 1e-9);
    assert!(seq < choi && choi < sw);
    // sanity: Helstrom on equal states is 1/2
    let rho = probe.outer(&probe);
    assert!((helstrom(&rho, &rho, 0.5, 0.5).unwrap() - 0.5).abs() < 1e-14);
    println!("PASS cross-check: 2/3 < 11/12 < 1 strategy hierarchy");
}
