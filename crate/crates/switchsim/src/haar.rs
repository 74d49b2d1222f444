//! Haar-uniform sampling on SU(2), Monte Carlo averaging, and exact twirls
//! over tensor-power representations.
//!
//! Exact twirling works in the coupled angular-momentum bases of
//! [`crate::spincouple`]: transforming to a coupled basis block-diagonalizes
//! `U ⊗ ... ⊗ U`, and Schur orthogonality reduces the Haar average to an
//! average over the magnetic quantum number within each isotypic block.
//! Twirls with `U*` on selected factors reduce to the plain case through the
//! SU(2) identity `U* = Y U Y†` (Pauli `Y`).

use crate::linalg::{c, cr, CMatrix, ONE};
use crate::spincouple::{coupled_basis, CoupledBasis, Tree};
use crate::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// An element of SU(2), stored as its unit quaternion `(w, x, y, z)`:
/// `U = w I - i (x X + y Y + z Z)` with `X, Y, Z` the Pauli matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SU2Element {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SU2Element {
    pub fn identity() -> Self {
        SU2Element {
            w: 1.0,
            x: 0.0,
            y: 0.0,
            z: 0.0,
        }
    }

    /// The 2x2 unitary matrix.
    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_rows(
            &[2],
            &[2],
            &[
                c(self.w, -self.z),
                c(self.y, -self.x),
                c(-self.y, -self.x),
                c(self.w, self.z),
            ],
        )
    }
}

/// One standard Gaussian via Box-Muller.
fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Samples a Haar-uniform element of SU(2) (normalized Gaussian quaternion).
pub fn sample_su2<R: Rng + ?Sized>(rng: &mut R) -> SU2Element {
    loop {
        let (w, x, y, z) = (
            gaussian(rng),
            gaussian(rng),
            gaussian(rng),
            gaussian(rng),
        );
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if n > 1e-8 {
            return SU2Element {
                w: w / n,
                x: x / n,
                y: y / n,
                z: z / n,
            };
        }
    }
}

/// Samples a Haar-uniform `n x n` unitary (complex Ginibre + Gram-Schmidt).
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    loop {
        let mut cols: Vec<Vec<Complex64>> = (0..n)
            .map(|_| (0..n).map(|_| c(gaussian(rng), gaussian(rng))).collect())
            .collect();
        let mut ok = true;
        for j in 0..n {
            for i in 0..j {
                let prev = cols[i].clone();
                let ov: Complex64 = prev
                    .iter()
                    .zip(cols[j].iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                for (k, p) in prev.iter().enumerate() {
                    cols[j][k] -= ov * p;
                }
            }
            let norm: f64 = cols[j].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for v in cols[j].iter_mut() {
                *v /= norm;
            }
        }
        if !ok {
            continue;
        }
        let mut u = CMatrix::zeros(&[n], &[n]);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                u.set(i, j, *v);
            }
        }
        return u;
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Monte Carlo Haar average of a matrix-valued function over SU(2).
///
/// Sample `i` draws from a fresh `ChaCha8` stream seeded by `(seed, i)`, so
/// the estimate depends only on `(seed, samples)` and not on any shared
/// generator state.
pub fn mc_average<F>(seed: u64, samples: usize, f: F) -> CMatrix
where
    F: Fn(&SU2Element) -> CMatrix,
{
    assert!(samples > 0, "mc_average needs at least one sample");
    let mut acc: Option<CMatrix> = None;
    for i in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(i as u64)));
        let u = sample_su2(&mut rng);
        let term = f(&u);
        acc = Some(match acc {
            None => term,
            Some(a) => &a + &term,
        });
    }
    acc.expect("samples > 0").scale(cr(1.0 / samples as f64))
}

/// [`mc_average`] followed by Hermitian symmetrization `(M + M†)/2`,
/// appropriate when the exact average is known to be Hermitian.
pub fn mc_average_hermitian<F>(seed: u64, samples: usize, f: F) -> CMatrix
where
    F: Fn(&SU2Element) -> CMatrix,
{
    let m = mc_average(seed, samples, f);
    m.hermitian_part()
}

fn tree_for(n: usize) -> Result<CoupledBasis> {
    let tree = match n {
        2 => Tree::Pair,
        3 => Tree::PairThenThird,
        4 => Tree::PairPair,
        _ => {
            return Err(Error::InvalidParameter(format!(
                "exact twirl supports 2 to 4 qubit factors, got {n}"
            )))
        }
    };
    coupled_basis(n, tree)
}

/// Projection of `m` onto the commutant of `U^{⊗n}`, i.e. the exact Haar
/// average of `U^{⊗n} m U^{†⊗n}`.
fn commutant_project(m: &CMatrix, basis: &CoupledBasis) -> CMatrix {
    let u = basis.unitary();
    let mc = &(&u.dagger() * m) * &u;
    let mut out = CMatrix::zeros(m.row_shape(), m.col_shape());
    let n = mc.rows();
    let mut outc = CMatrix::zeros(&[n], &[n]);
    for f1 in basis.families() {
        for f2 in basis.families() {
            if f1.tj != f2.tj {
                continue;
            }
            let dim = (f1.tj + 1) as usize;
            let mut avg = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                avg += mc.get(f1.col_start + k, f2.col_start + k);
            }
            avg /= dim as f64;
            for k in 0..dim {
                outc.set(f1.col_start + k, f2.col_start + k, avg);
            }
        }
    }
    let res = &(&u * &outc) * &u.dagger();
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, res.get(i, j));
        }
    }
    out
}

/// `⊗_k Y` on the factors listed in `conj_factors`, identity elsewhere.
fn y_mask(n: usize, conj_factors: &[usize]) -> CMatrix {
    let y = crate::linalg::pauli_y();
    let mut g = CMatrix::from_rows(&[1], &[1], &[ONE]);
    for k in 0..n {
        let f = if conj_factors.contains(&k) {
            y.clone()
        } else {
            CMatrix::identity(&[2])
        };
        g = g.kron(&f);
    }
    g.with_shape(&vec![2; n], &vec![2; n])
}

/// Exact Haar average of `(V_1 ⊗ ... ⊗ V_n) m (V_1 ⊗ ... ⊗ V_n)†` where
/// `V_k = U*` for factors listed in `conj_factors` and `V_k = U` otherwise.
///
/// All factors must be qubits; 2 to 4 factors are supported.
pub fn exact_twirl(m: &CMatrix, conj_factors: &[usize]) -> Result<CMatrix> {
    let n = m.row_shape().len();
    if m.row_shape() != m.col_shape() || m.row_shape().iter().any(|&d| d != 2) {
        return Err(Error::DimensionMismatch(
            "exact_twirl expects a square operator on qubit factors".into(),
        ));
    }
    for &k in conj_factors {
        if k >= n {
            return Err(Error::FactorOutOfRange {
                index: k,
                n_factors: n,
            });
        }
    }
    let basis = tree_for(n)?;
    if conj_factors.is_empty() {
        return Ok(commutant_project(m, &basis));
    }
    // U* = Y U Y†, so conjugating the starred factors by Y reduces to the
    // plain U^{⊗n} twirl.
    let g = y_mask(n, conj_factors);
    let gm = &(&g.dagger() * m) * &g;
    let tw = commutant_project(&gm, &basis);
    Ok(&(&g * &tw) * &g.dagger())
}

/// Exact Choi operator of the Haar-averaged channel pair for the given
/// hypothesis (`0`: correlated measure-and-flip, `1`: correlated rotations).
///
/// Factors are ascending `A ⊗ A' ⊗ B ⊗ B'` with `A`, `B` the inputs. The
/// average is the twirl of the instance Choi with `U*` on the input factors.
pub fn exact_average_choi(hypothesis: usize) -> Result<crate::channels::ChoiOperator> {
    let lambda = match hypothesis {
        0 => crate::channels::lambda0(),
        1 => crate::channels::lambda1(),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "hypothesis must be 0 or 1, got {hypothesis}"
            )))
        }
    };
    let avg = exact_twirl(&lambda, &[0, 2])?;
    crate::channels::ChoiOperator::new(avg, crate::channels::ChoiFactors::Bipartite)
}

/// The averaged Choi of [`exact_average_choi`] conjugated by Pauli `Y` on the
/// two input factors.
///
/// In this rotated frame the average is a plain `U^{⊗4}` twirl, so the result
/// is a combination of angular-momentum projectors:
/// `C~_1 = (2/5) P_{2;(1,1)} + (2/3) P_{1;(1,1)}` and
/// `C~_0 = (2/15) P_{2;(1,1)} + (1/3) P_{0;(1,1)}
///        + (1/3)(P_{1;(1,0)} + P_{1;(0,1)}) + P_{0;(0,0)}`.
/// The frame rotation is unitary, so all discrimination quantities can be
/// computed here.
pub fn exact_average_choi_tilde(hypothesis: usize) -> Result<CMatrix> {
    let c = exact_average_choi(hypothesis)?;
    let g = y_mask(4, &[0, 2]);
    Ok(&(&g * c.matrix()) * &g.dagger())
}
