//! Angular-momentum machinery: Clebsch-Gordan coefficients, coupled bases
//! for 2, 3 and 4 spin-1/2 systems, the invariant projector/operator families
//! built on them, and the symmetric tester.
//!
//! Conventions:
//!
//! - Condon-Shortley phases throughout.
//! - The computational `|0>` is the spin-up state `m = +1/2`.
//! - Multi-spin operators are stored with ascending factor order
//!   `H_1 ⊗ H_2 ⊗ ... ⊗ H_n`; partial traces name factors by 0-based index.
//! - The two-qubit double kets used in the explicit vector families are
//!   `|X>> = |10> + |01>` and `|Y>> = |10> - |01>` (the real, singlet-phase
//!   convention; both have norm sqrt(2)).

use crate::linalg::{c, cr, CMatrix, ONE, ZERO};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

fn fact(n: i32) -> f64 {
    assert!(n >= 0);
    (1..=n as u64).map(|k| k as f64).product()
}

fn halfint(x: f64, what: &str) -> Result<i32> {
    let t = (2.0 * x).round();
    if (2.0 * x - t).abs() > 1e-9 {
        return Err(Error::InvalidQuantumNumbers(format!(
            "{what} = {x} is not a half-integer"
        )));
    }
    Ok(t as i32)
}

/// Clebsch-Gordan coefficient `<j1 m1; j2 m2 | J M>` with Condon-Shortley
/// phases. Returns 0 when `M != m1 + m2` or the triangle rule fails.
pub fn cg_coefficient(j1: f64, m1: f64, j2: f64, m2: f64, jj: f64, mm: f64) -> Result<f64> {
    let tj1 = halfint(j1, "j1")?;
    let tm1 = halfint(m1, "m1")?;
    let tj2 = halfint(j2, "j2")?;
    let tm2 = halfint(m2, "m2")?;
    let tjj = halfint(jj, "J")?;
    let tmm = halfint(mm, "M")?;
    for (tj, tm, what) in [(tj1, tm1, "1"), (tj2, tm2, "2"), (tjj, tmm, "J")] {
        if tj < 0 || tm.abs() > tj || (tj + tm) % 2 != 0 {
            return Err(Error::InvalidQuantumNumbers(format!(
                "invalid (j, m) pair number {what}"
            )));
        }
    }
    Ok(cg_twice(tj1, tm1, tj2, tm2, tjj, tmm))
}

/// Same as [`cg_coefficient`] with all quantum numbers doubled (exact
/// integer arithmetic on the labels).
pub(crate) fn cg_twice(tj1: i32, tm1: i32, tj2: i32, tm2: i32, tjj: i32, tmm: i32) -> f64 {
    if tmm != tm1 + tm2 {
        return 0.0;
    }
    if tjj < (tj1 - tj2).abs() || tjj > tj1 + tj2 || (tj1 + tj2 + tjj) % 2 != 0 {
        return 0.0;
    }
    let delta = fact((tj1 + tj2 - tjj) / 2) * fact((tj1 - tj2 + tjj) / 2)
        * fact((-tj1 + tj2 + tjj) / 2)
        / fact((tj1 + tj2 + tjj) / 2 + 1);
    let pref = ((tjj + 1) as f64 * delta).sqrt();
    let root = (fact((tjj + tmm) / 2)
        * fact((tjj - tmm) / 2)
        * fact((tj1 - tm1) / 2)
        * fact((tj1 + tm1) / 2)
        * fact((tj2 - tm2) / 2)
        * fact((tj2 + tm2) / 2))
    .sqrt();
    let kmin = 0
        .max((tj2 - tjj - tm1) / 2)
        .max((tj1 - tjj + tm2) / 2);
    let kmax = ((tj1 + tj2 - tjj) / 2)
        .min((tj1 - tm1) / 2)
        .min((tj2 + tm2) / 2);
    let mut sum = 0.0;
    for k in kmin..=kmax {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign
            / (fact(k)
                * fact((tj1 + tj2 - tjj) / 2 - k)
                * fact((tj1 - tm1) / 2 - k)
                * fact((tj2 + tm2) / 2 - k)
                * fact((tjj - tj2 + tm1) / 2 + k)
                * fact((tjj - tj1 - tm2) / 2 + k));
    }
    pref * root * sum
}

/// Coupling trees supported by [`coupled_basis`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tree {
    /// Two spins coupled directly: `(1,2)`.
    Pair,
    /// Three spins: `((1,2),3)`.
    PairThenThird,
    /// Four spins: `((1,2),(3,4))`.
    PairPair,
}

/// One vector of a coupled basis. Quantum numbers are stored doubled.
#[derive(Debug, Clone)]
pub struct CoupledState {
    /// Intermediate total angular momenta (doubled), in tree order.
    pub intermediates: Vec<i32>,
    /// Total angular momentum, doubled.
    pub tj: i32,
    /// z-component, doubled.
    pub tm: i32,
    /// Column vector on `[2; n_spins]`.
    pub vector: CMatrix,
}

/// A family of `2j+1` states sharing all labels except `m`, stored as a
/// contiguous column range of [`CoupledBasis::unitary`].
#[derive(Debug, Clone)]
pub struct Family {
    pub tj: i32,
    pub intermediates: Vec<i32>,
    /// Starting column; the family occupies `2j+1` columns with `m`
    /// descending.
    pub col_start: usize,
}

/// Orthonormal coupled angular-momentum basis for `n` spin-1/2 systems.
#[derive(Debug, Clone)]
pub struct CoupledBasis {
    pub n_spins: usize,
    pub tree: Tree,
    states: Vec<CoupledState>,
    families: Vec<Family>,
}

/// `|k, mk>` for two spin-1/2 systems (doubled labels).
fn pair_state(tk: i32, tmk: i32) -> CMatrix {
    let mut v = CMatrix::zeros(&[2, 2], &[1]);
    for (i1, tm1) in [(0usize, 1i32), (1, -1)] {
        for (i2, tm2) in [(0usize, 1i32), (1, -1)] {
            let coeff = cg_twice(1, tm1, 1, tm2, tk, tmk);
            if coeff != 0.0 {
                v.set(i1 * 2 + i2, 0, cr(coeff));
            }
        }
    }
    v
}

/// Builds the full coupled basis for the given number of spins and tree.
pub fn coupled_basis(n_spins: usize, tree: Tree) -> Result<CoupledBasis> {
    let mut states = Vec::new();
    match (n_spins, tree) {
        (2, Tree::Pair) => {
            for tk in [2i32, 0] {
                for tm in (-tk..=tk).rev().step_by(2).chain((tk == 0).then_some(0)) {
                    // step_by on an empty-range guard for tk == 0
                    if tk == 0 && tm != 0 {
                        continue;
                    }
                    states.push(CoupledState {
                        intermediates: vec![],
                        tj: tk,
                        tm,
                        vector: pair_state(tk, tm),
                    });
                    if tk == 0 {
                        break;
                    }
                }
            }
        }
        (3, Tree::PairThenThird) => {
            for tk in [2i32, 0] {
                let tjs: Vec<i32> = ((tk - 1).abs()..=tk + 1).step_by(2).collect();
                for tj in tjs.into_iter().rev() {
                    let mut tm = tj;
                    while tm >= -tj {
                        let mut v = CMatrix::zeros(&[2, 2, 2], &[1]);
                        for tmk in (-tk..=tk).step_by(2) {
                            for (i3, tm3) in [(0usize, 1i32), (1, -1)] {
                                let coeff = cg_twice(tk, tmk, 1, tm3, tj, tm);
                                if coeff == 0.0 {
                                    continue;
                                }
                                let pv = pair_state(tk, tmk);
                                for idx in 0..4 {
                                    let amp = pv.get(idx, 0) * cr(coeff);
                                    if amp != ZERO {
                                        let old = v.get(idx * 2 + i3, 0);
                                        v.set(idx * 2 + i3, 0, old + amp);
                                    }
                                }
                            }
                        }
                        states.push(CoupledState {
                            intermediates: vec![tk],
                            tj,
                            tm,
                            vector: v,
                        });
                        tm -= 2;
                    }
                }
            }
        }
        (4, Tree::PairPair) => {
            for tk in [2i32, 0] {
                for tl in [2i32, 0] {
                    let tjs: Vec<i32> = ((tk - tl).abs()..=tk + tl).step_by(2).collect();
                    for tj in tjs.into_iter().rev() {
                        let mut tm = tj;
                        while tm >= -tj {
                            let mut v = CMatrix::zeros(&[2, 2, 2, 2], &[1]);
                            for tmk in (-tk..=tk).step_by(2) {
                                for tml in (-tl..=tl).step_by(2) {
                                    let coeff = cg_twice(tk, tmk, tl, tml, tj, tm);
                                    if coeff == 0.0 {
                                        continue;
                                    }
                                    let pk = pair_state(tk, tmk);
                                    let pl = pair_state(tl, tml);
                                    let prod = pk.kron(&pl).scale(cr(coeff));
                                    v = &v + &prod;
                                }
                            }
                            states.push(CoupledState {
                                intermediates: vec![tk, tl],
                                tj,
                                tm,
                                vector: v,
                            });
                            tm -= 2;
                        }
                    }
                }
            }
        }
        _ => {
            return Err(Error::InvalidParameter(format!(
                "unsupported coupling tree for {n_spins} spins"
            )))
        }
    }

    // group into families sorted by (j desc, intermediates)
    states.sort_by(|a, b| {
        b.tj
            .cmp(&a.tj)
            .then(a.intermediates.cmp(&b.intermediates))
            .then(b.tm.cmp(&a.tm))
    });
    let mut families = Vec::new();
    let mut col = 0;
    while col < states.len() {
        let s = &states[col];
        families.push(Family {
            tj: s.tj,
            intermediates: s.intermediates.clone(),
            col_start: col,
        });
        col += (s.tj + 1) as usize;
    }
    Ok(CoupledBasis {
        n_spins,
        tree,
        states,
        families,
    })
}

impl CoupledBasis {
    pub fn states(&self) -> &[CoupledState] {
        &self.states
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    /// Unitary whose columns are the coupled basis vectors in storage order.
    pub fn unitary(&self) -> CMatrix {
        let n = self.states.len();
        let shape = vec![2usize; self.n_spins];
        let mut u = CMatrix::zeros(&shape, &shape);
        for (j, s) in self.states.iter().enumerate() {
            for i in 0..n {
                u.set(i, j, s.vector.get(i, 0));
            }
        }
        u
    }

    /// Vector by label; `intermediates`, `tj`, `tm` doubled.
    pub fn state(&self, intermediates: &[i32], tj: i32, tm: i32) -> Option<&CoupledState> {
        self.states
            .iter()
            .find(|s| s.intermediates == intermediates && s.tj == tj && s.tm == tm)
    }
}

/// Projector onto the subspace of four spin-1/2 systems with total angular
/// momentum `j`, where spins (1,2) couple to `k` and spins (3,4) to `l`.
/// Labels are the plain (not doubled) integers `j ∈ {0,1,2}`, `k,l ∈ {0,1}`.
pub fn pair_projector(j: i32, k: i32, l: i32) -> Result<CMatrix> {
    let basis = coupled_basis(4, Tree::PairPair)?;
    let (tj, tk, tl) = (2 * j, 2 * k, 2 * l);
    if j < 0 || !(0..=1).contains(&k) || !(0..=1).contains(&l) || tj < (tk - tl).abs() || tj > tk + tl
    {
        return Err(Error::InvalidQuantumNumbers(format!(
            "inconsistent projector labels (j,k,l) = ({j},{k},{l})"
        )));
    }
    let mut p = CMatrix::zeros(&[2, 2, 2, 2], &[2, 2, 2, 2]);
    for s in basis.states() {
        if s.tj == tj && s.intermediates == [tk, tl] {
            p = &p + &s.vector.outer(&s.vector);
        }
    }
    Ok(p)
}

// ---------------------------------------------------------------------------
// Explicit vector families
// ---------------------------------------------------------------------------

/// Builds an n-qubit column vector as a product of parts, each part being a
/// vector placed on an ordered list of qubit positions (0-based).
fn tensor_at(n: usize, parts: &[(&[usize], &CMatrix)]) -> CMatrix {
    let shape = vec![2usize; n];
    let dim = 1usize << n;
    let mut out = CMatrix::zeros(&shape, &[1]);
    for idx in 0..dim {
        let bit = |pos: usize| (idx >> (n - 1 - pos)) & 1;
        let mut amp = ONE;
        for (positions, vec) in parts {
            let mut sub = 0usize;
            for &p in positions.iter() {
                sub = sub * 2 + bit(p);
            }
            amp *= vec.get(sub, 0);
            if amp == ZERO {
                break;
            }
        }
        out.set(idx, 0, amp);
    }
    out
}

/// `|X>> = |10> + |01>` (norm sqrt 2).
pub fn xket2() -> CMatrix {
    CMatrix::col_vector(&[2, 2], &[ZERO, ONE, ONE, ZERO])
}

/// `|Y>> = |10> - |01>` (norm sqrt 2, real singlet-phase convention).
pub fn yket2() -> CMatrix {
    CMatrix::col_vector(&[2, 2], &[ZERO, -ONE, ONE, ZERO])
}

fn ket(b: usize) -> CMatrix {
    CMatrix::basis_ket(&[2], b)
}

/// The three-qubit operators entering the symmetric tester: the projector
/// onto the `j = 3/2` subspace and the operator family
/// `T^{mn} = sum_k |Phi_k^{(m)}><Phi_k^{(n)}|`.
#[derive(Debug, Clone)]
pub struct HalfSpinOps {
    pub p_three_half: CMatrix,
    /// Indexed `t[m][n]`.
    pub t: [[CMatrix; 2]; 2],
    /// The explicit vectors `Phi_k^{(m)}`, indexed `phi[m][k]`.
    pub phi: [[CMatrix; 2]; 2],
}

/// Builds `P_{3/2}` and the `T^{mn}` family on three qubits (ascending
/// factor order `H_1 ⊗ H_2 ⊗ H_3`).
pub fn half_spin_operators() -> HalfSpinOps {
    let s6 = cr(1.0 / 6f64.sqrt());
    let s2 = cr(1.0 / 2f64.sqrt());
    let phi1 = |kb: usize| -> CMatrix {
        let k = ket(kb);
        let t1 = tensor_at(3, &[(&[0], &k), (&[1, 2], &yket2())]);
        let t2 = tensor_at(3, &[(&[0, 2], &yket2()), (&[1], &k)]);
        (&t1 + &t2).scale(s6)
    };
    let phi0 = |kb: usize| -> CMatrix {
        let k = ket(kb);
        tensor_at(3, &[(&[0, 1], &yket2()), (&[2], &k)]).scale(s2)
    };
    let phi = [[phi0(0), phi0(1)], [phi1(0), phi1(1)]];

    let basis = coupled_basis(3, Tree::PairThenThird).expect("supported tree");
    let mut p_three_half = CMatrix::zeros(&[2, 2, 2], &[2, 2, 2]);
    for s in basis.states() {
        if s.tj == 3 {
            p_three_half = &p_three_half + &s.vector.outer(&s.vector);
        }
    }

    let tmn = |m: usize, n: usize| -> CMatrix {
        let mut t = CMatrix::zeros(&[2, 2, 2], &[2, 2, 2]);
        for k in 0..2 {
            t = &t + &phi[m][k].outer(&phi[n][k]);
        }
        t
    };
    let t = [[tmn(0, 0), tmn(0, 1)], [tmn(1, 0), tmn(1, 1)]];
    HalfSpinOps {
        p_three_half,
        t,
        phi,
    }
}

/// The four-qubit `j = 1` machinery of the overlap computation: the vector
/// families `Psi^{(m)}_{1,k}`, `V_k`, `W_k`, `Z_k` (index order `k = 1, 0,
/// -1`) and the operators `S^{mn} = sum_k |Psi^{(m)}_{1,k}><Psi^{(n)}_{1,k}|`.
#[derive(Debug, Clone)]
pub struct JoneOps {
    /// `psi[m][ki]` with `ki = 0,1,2` for `k = 1, 0, -1`.
    pub psi: [[CMatrix; 3]; 2],
    pub v: [CMatrix; 3],
    pub w: [CMatrix; 3],
    pub z: [CMatrix; 3],
    /// `s[m][n]`.
    pub s: [[CMatrix; 2]; 2],
}

pub fn jone_operators() -> JoneOps {
    let s2 = cr(1.0 / 2f64.sqrt());
    let s6 = cr(1.0 / 6f64.sqrt());
    let half = cr(0.5);
    let q = cr(1.0 / (2.0 * 3f64.sqrt()));

    let psi0 = |kb: Option<usize>| -> CMatrix {
        match kb {
            Some(b) => {
                let k = ket(b);
                tensor_at(4, &[(&[0, 1], &yket2()), (&[2], &k), (&[3], &k)]).scale(s2)
            }
            None => tensor_at(4, &[(&[0, 1], &yket2()), (&[2, 3], &xket2())]).scale(half),
        }
    };
    let psi1 = |kb: Option<usize>| -> CMatrix {
        match kb {
            Some(b) => {
                let k = ket(b);
                let t1 = tensor_at(4, &[(&[0], &k), (&[1, 2], &yket2()), (&[3], &k)]);
                let t2 = tensor_at(4, &[(&[0, 2], &yket2()), (&[1], &k), (&[3], &k)]);
                (&t1 + &t2).scale(s6)
            }
            None => {
                let t1 = tensor_at(4, &[(&[0, 3], &xket2()), (&[1, 2], &yket2())]);
                let t2 = tensor_at(4, &[(&[0, 2], &yket2()), (&[1, 3], &xket2())]);
                (&t1 + &t2).scale(q)
            }
        }
    };
    // k = 1 carries |1>'s, k = -1 carries |0>'s
    let psi = [
        [psi0(Some(1)), psi0(None), psi0(Some(0))],
        [psi1(Some(1)), psi1(None), psi1(Some(0))],
    ];
    let v = [psi0(Some(1)), psi0(None), psi0(Some(0))];
    let wv = |kb: Option<usize>| -> CMatrix {
        match kb {
            Some(b) => {
                let k = ket(b);
                tensor_at(4, &[(&[0], &k), (&[1], &k), (&[2, 3], &yket2())]).scale(s2)
            }
            None => tensor_at(4, &[(&[0, 1], &xket2()), (&[2, 3], &yket2())]).scale(half),
        }
    };
    let w = [wv(Some(1)), wv(None), wv(Some(0))];
    let one = ket(1);
    let zero = ket(0);
    let z1 = (&tensor_at(4, &[(&[0], &one), (&[1], &one), (&[2, 3], &xket2())])
        - &tensor_at(4, &[(&[0, 1], &xket2()), (&[2], &one), (&[3], &one)]))
        .scale(half);
    let z0 = (&tensor_at(4, &[(&[0], &one), (&[1], &one), (&[2], &zero), (&[3], &zero)])
        - &tensor_at(4, &[(&[0], &zero), (&[1], &zero), (&[2], &one), (&[3], &one)]))
        .scale(s2);
    let zm1 = (&tensor_at(4, &[(&[0, 1], &xket2()), (&[2], &zero), (&[3], &zero)])
        - &tensor_at(4, &[(&[0], &zero), (&[1], &zero), (&[2, 3], &xket2())]))
        .scale(half);
    let z = [z1, z0, zm1];

    let smn = |m: usize, n: usize| -> CMatrix {
        let mut s = CMatrix::zeros(&[2, 2, 2, 2], &[2, 2, 2, 2]);
        for k in 0..3 {
            s = &s + &psi[m][k].outer(&psi[n][k]);
        }
        s
    };
    let s = [[smn(0, 0), smn(0, 1)], [smn(1, 0), smn(1, 1)]];
    JoneOps { psi, v, w, z, s }
}

// ---------------------------------------------------------------------------
// Symmetric tester
// ---------------------------------------------------------------------------

/// Parameters `(a, b)` of the invariant operator
/// `Xi~ = a P_{3/2} + sum_{mn} b_{mn} T^{mn}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTester {
    pub a: f64,
    /// 2x2 PSD matrix, `b[m][n] = b_{mn}`.
    pub b: [[Complex64; 2]; 2],
}

impl SymmetricTester {
    pub fn new(a: f64, b: [[Complex64; 2]; 2]) -> Result<Self> {
        let t = SymmetricTester { a, b };
        t.validate()?;
        Ok(t)
    }

    /// Diagonal-`b` convenience constructor.
    pub fn diagonal(a: f64, b00: f64, b11: f64) -> Result<Self> {
        SymmetricTester::new(
            a,
            [[cr(b00), ZERO], [ZERO, cr(b11)]],
        )
    }

    fn validate(&self) -> Result<()> {
        if self.a < -1e-12 {
            return Err(Error::InvalidParameter(format!("a = {} < 0", self.a)));
        }
        if (self.b[0][1] - self.b[1][0].conj()).norm() > 1e-12
            || self.b[0][0].im.abs() > 1e-12
            || self.b[1][1].im.abs() > 1e-12
        {
            return Err(Error::InvalidParameter("b is not Hermitian".into()));
        }
        // 2x2 PSD: nonnegative diagonal, nonnegative determinant
        let det = self.b[0][0].re * self.b[1][1].re - self.b[0][1].norm_sqr();
        if self.b[0][0].re < -1e-12 || self.b[1][1].re < -1e-12 || det < -1e-12 {
            return Err(Error::NotPsd { min_eig: det });
        }
        Ok(())
    }

    /// True when `2a + b11 == 3/4` and `b00 == 1/4` within 1e-12.
    pub fn is_normalized(&self) -> bool {
        (2.0 * self.a + self.b[1][1].re - 0.75).abs() <= 1e-12
            && (self.b[0][0].re - 0.25).abs() <= 1e-12
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SymmetricTesterSer::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let ser: SymmetricTesterSer = serde_json::from_str(s)?;
        SymmetricTester::new(
            ser.a,
            [
                [c(ser.b[0][0], ser.b[0][1]), c(ser.b[1][0], ser.b[1][1])],
                [c(ser.b[2][0], ser.b[2][1]), c(ser.b[3][0], ser.b[3][1])],
            ],
        )
    }
}

#[derive(Serialize, Deserialize)]
struct SymmetricTesterSer {
    a: f64,
    /// Row-major `[[re, im]; 4]`.
    b: [[f64; 2]; 4],
}

impl From<&SymmetricTester> for SymmetricTesterSer {
    fn from(t: &SymmetricTester) -> Self {
        SymmetricTesterSer {
            a: t.a,
            b: [
                [t.b[0][0].re, t.b[0][0].im],
                [t.b[0][1].re, t.b[0][1].im],
                [t.b[1][0].re, t.b[1][0].im],
                [t.b[1][1].re, t.b[1][1].im],
            ],
        }
    }
}

/// The 8x8 invariant operator `Xi~(a, b)` on three qubits.
pub fn xi_tilde(t: &SymmetricTester) -> Result<CMatrix> {
    t.validate()?;
    xi_tilde_from(t, &half_spin_operators())
}

/// Same as [`xi_tilde`] with precomputed constituents (hot loops).
pub fn xi_tilde_from(t: &SymmetricTester, ops: &HalfSpinOps) -> Result<CMatrix> {
    let mut xi = ops.p_three_half.scale(cr(t.a));
    for m in 0..2 {
        for n in 0..2 {
            if t.b[m][n] != ZERO {
                xi = &xi + &ops.t[m][n].scale(t.b[m][n]);
            }
        }
    }
    Ok(xi)
}

/// Operator norm of `Tr_3[Xi~(t)] - I_4/2`; zero exactly on normalized
/// testers.
pub fn normalization_residual(t: &SymmetricTester) -> f64 {
    let xi = xi_tilde_from(t, &half_spin_operators()).expect("validated tester");
    normalization_residual_of(&xi)
}

pub(crate) fn normalization_residual_of(xi: &CMatrix) -> f64 {
    let marg = xi.partial_trace(&[2]).expect("square 3-factor operator");
    let target = CMatrix::identity(&[2, 2]).scale(cr(0.5));
    (&marg - &target).operator_norm()
}
