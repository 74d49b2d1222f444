//! Quantum channels as Kraus families and Choi operators.
//!
//! Conventions used throughout the crate:
//!
//! - Unipartite Choi operators live on `in ⊗ out` with the input factor
//!   first: `C = sum_m |w_m><w_m|` with `|w_m> = sum_a |a> ⊗ K_m|a>`.
//!   Trace preservation then reads `Tr_out[C] = I_in`.
//! - Bipartite Choi operators live on `A ⊗ A' ⊗ B ⊗ B'` in ascending order,
//!   with `A, B` inputs and `A', B'` outputs.

use crate::haar::SU2Element;
use crate::linalg::{cr, double_ket, pauli_x, pauli_y, pauli_z, CMatrix};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Tolerance on the trace-preservation condition `sum_k K_k† K_k = I`.
pub const TP_TOL: f64 = 1e-10;

/// A channel written as a nonempty list of Kraus operators.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    kraus: Vec<CMatrix>,
    d_in: usize,
    d_out: usize,
}

impl KrausChannel {
    /// Builds a channel and checks trace preservation at construction.
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        assert!(!kraus.is_empty(), "empty Kraus family");
        let d_out = kraus[0].rows();
        let d_in = kraus[0].cols();
        for k in &kraus {
            if k.rows() != d_out || k.cols() != d_in {
                return Err(Error::DimensionMismatch(
                    "Kraus operators must share dimensions".into(),
                ));
            }
        }
        let mut sum = CMatrix::zeros(&[d_in], &[d_in]);
        for k in &kraus {
            sum = &sum + &(&k.dagger() * k);
        }
        let dev = sum.max_abs_diff(&CMatrix::identity(kraus[0].col_shape()));
        if dev > TP_TOL {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(KrausChannel { kraus, d_in, d_out })
    }

    pub fn identity(d: usize) -> Self {
        KrausChannel::new(vec![CMatrix::identity(&[d])]).unwrap()
    }

    /// Single-Kraus channel `rho -> U rho U†`.
    pub fn unitary(u: CMatrix) -> Result<Self> {
        KrausChannel::new(vec![u])
    }

    pub fn kraus_ops(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// `rho -> sum_k K_k rho K_k†`.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        if rho.rows() != self.d_in || rho.cols() != self.d_in {
            return Err(Error::DimensionMismatch(format!(
                "state dimension {} != channel input {}",
                rho.rows(),
                self.d_in
            )));
        }
        let mut out = CMatrix::zeros(self.kraus[0].row_shape(), self.kraus[0].row_shape());
        for k in &self.kraus {
            out = &out + &(&(k * rho) * &k.dagger());
        }
        Ok(out)
    }

    /// Sequential composition: `second` after `first`.
    pub fn compose(second: &KrausChannel, first: &KrausChannel) -> Result<KrausChannel> {
        if first.d_out != second.d_in {
            return Err(Error::DimensionMismatch(format!(
                "compose: first output {} != second input {}",
                first.d_out, second.d_in
            )));
        }
        let mut ops = Vec::with_capacity(first.kraus.len() * second.kraus.len());
        for k2 in &second.kraus {
            for k1 in &first.kraus {
                ops.push(k2 * k1);
            }
        }
        KrausChannel::new(ops)
    }

    /// Product channel with Kraus set `{A_k ⊗ B_l}`.
    pub fn tensor(ch_a: &KrausChannel, ch_b: &KrausChannel) -> KrausChannel {
        let mut ops = Vec::with_capacity(ch_a.kraus.len() * ch_b.kraus.len());
        for ka in &ch_a.kraus {
            for kb in &ch_b.kraus {
                ops.push(ka.kron(kb));
            }
        }
        KrausChannel::new(ops).expect("tensor of TP channels is TP")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&KrausChannelSer::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let ser: KrausChannelSer = serde_json::from_str(s)?;
        ser.try_into()
    }
}

#[derive(Serialize, Deserialize)]
struct KrausChannelSer {
    d_in: usize,
    d_out: usize,
    kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

impl From<&KrausChannel> for KrausChannelSer {
    fn from(ch: &KrausChannel) -> Self {
        let kraus = ch
            .kraus
            .iter()
            .map(|k| {
                (0..k.rows())
                    .map(|i| (0..k.cols()).map(|j| [k.get(i, j).re, k.get(i, j).im]).collect())
                    .collect()
            })
            .collect();
        KrausChannelSer {
            d_in: ch.d_in,
            d_out: ch.d_out,
            kraus,
        }
    }
}

impl TryFrom<KrausChannelSer> for KrausChannel {
    type Error = Error;
    fn try_from(ser: KrausChannelSer) -> Result<KrausChannel> {
        let ops = ser
            .kraus
            .iter()
            .map(|rows| {
                let entries: Vec<_> = rows
                    .iter()
                    .flat_map(|r| r.iter().map(|[re, im]| crate::linalg::c(*re, *im)))
                    .collect();
                CMatrix::from_rows(&[ser.d_out], &[ser.d_in], &entries)
            })
            .collect();
        KrausChannel::new(ops)
    }
}

/// Direction blocked by a no-signalling condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignallingDirection {
    /// No information flows from Bob's input to Alice's output.
    BToA,
    /// No information flows from Alice's input to Bob's output.
    AToB,
}

/// Labels for the four tensor factors of a bipartite Choi operator,
/// in the crate-wide ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChoiFactors {
    /// `in ⊗ out` for a unipartite channel.
    InOut,
    /// `A ⊗ A' ⊗ B ⊗ B'` for a bipartite channel (A, B inputs).
    Bipartite,
}

/// Choi operator with labeled factors.
#[derive(Debug, Clone)]
pub struct ChoiOperator {
    matrix: CMatrix,
    factors: ChoiFactors,
}

impl ChoiOperator {
    /// Wraps a matrix as a Choi operator, checking positivity and the
    /// trace-preservation marginal.
    pub fn new(matrix: CMatrix, factors: ChoiFactors) -> Result<Self> {
        let op = ChoiOperator { matrix, factors };
        let (vals, _) = op.matrix.hermitian_eigen();
        if let Some(&min) = vals.first() {
            if min < -TP_TOL {
                return Err(Error::NotPsd { min_eig: min });
            }
        }
        let marg = op.output_marginal()?;
        let dev = marg.max_abs_diff(&CMatrix::identity(marg.row_shape()));
        if dev > 1e-9 {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(op)
    }

    /// Wraps without validating; used for intermediate results.
    pub fn new_unchecked(matrix: CMatrix, factors: ChoiFactors) -> Self {
        ChoiOperator { matrix, factors }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn factors(&self) -> ChoiFactors {
        self.factors
    }

    fn output_marginal(&self) -> Result<CMatrix> {
        match self.factors {
            ChoiFactors::InOut => self.matrix.partial_trace(&[1]),
            ChoiFactors::Bipartite => self.matrix.partial_trace(&[1, 3]),
        }
    }

    /// Checks the Choi-marginal no-signalling condition in one direction,
    /// within tolerance 1e-9.
    pub fn is_no_signalling(&self, direction: SignallingDirection) -> Result<bool> {
        if self.factors != ChoiFactors::Bipartite {
            return Err(Error::DimensionMismatch(
                "no-signalling check needs a bipartite Choi".into(),
            ));
        }
        let shape = self.matrix.row_shape();
        let (d_b, d_a) = (shape[2], shape[0]);
        let ok = match direction {
            SignallingDirection::BToA => {
                // Tr_{B'}[C] == Tr_{B B'}[C]/d_B ⊗ I_B
                let lhs = self.matrix.partial_trace(&[3])?;
                let red = self.matrix.partial_trace(&[2, 3])?;
                let rhs = red.kron(&CMatrix::identity(&[d_b])).scale(cr(1.0 / d_b as f64));
                lhs.max_abs_diff(&rhs) <= 1e-9
            }
            SignallingDirection::AToB => {
                // Tr_{A'}[C] == I_A ⊗ Tr_{A A'}[C]/d_A
                let lhs = self.matrix.partial_trace(&[1])?;
                let red = self.matrix.partial_trace(&[0, 1])?;
                let rhs = CMatrix::identity(&[d_a]).kron(&red).scale(cr(1.0 / d_a as f64));
                lhs.max_abs_diff(&rhs) <= 1e-9
            }
        };
        Ok(ok)
    }

    /// Applies the channel encoded by a unipartite Choi operator:
    /// `C(rho) = Tr_in[(rho^T ⊗ I) C]`.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        let shape = self.matrix.row_shape();
        let (d_in, d_out) = match self.factors {
            ChoiFactors::InOut => (shape[0], shape[1]),
            ChoiFactors::Bipartite => (shape[0] * shape[2], shape[1] * shape[3]),
        };
        if rho.rows() != d_in {
            return Err(Error::DimensionMismatch(format!(
                "state dimension {} != channel input {}",
                rho.rows(),
                d_in
            )));
        }
        let m = match self.factors {
            ChoiFactors::InOut => self.matrix.clone(),
            // regroup A A' B B' -> (A B) (A' B')
            ChoiFactors::Bipartite => self
                .matrix
                .permute_factors(&[0, 2, 1, 3])
                .with_shape(&[d_in, d_out], &[d_in, d_out]),
        };
        let big = rho.transpose().kron(&CMatrix::identity(&[d_out]));
        (&big * &m).partial_trace(&[0])
    }
}

/// `C = sum_m |w_m><w_m|` with `|w_m> = sum_a |a> ⊗ K_m|a>`.
pub fn kraus_to_choi(ch: &KrausChannel) -> ChoiOperator {
    let d_in = ch.d_in();
    let d_out = ch.d_out();
    let mut m = CMatrix::zeros(&[d_in, d_out], &[d_in, d_out]);
    for k in ch.kraus_ops() {
        let mut w = CMatrix::zeros(&[d_in, d_out], &[1]);
        for a in 0..d_in {
            for o in 0..d_out {
                let mut v = w.get(a * d_out + o, 0);
                v += k.get(o, a);
                w.set(a * d_out + o, 0, v);
            }
        }
        m = &m + &w.outer(&w);
    }
    ChoiOperator::new_unchecked(m, ChoiFactors::InOut)
}

/// Bipartite Choi on `A ⊗ A' ⊗ B ⊗ B'` of a channel on `A ⊗ B` (all qubits
/// or any equal split given by `d_a`).
pub fn kraus_to_choi_bipartite(ch: &KrausChannel, d_a_in: usize, d_a_out: usize) -> ChoiOperator {
    let d_b_in = ch.d_in() / d_a_in;
    let d_b_out = ch.d_out() / d_a_out;
    let c = kraus_to_choi(ch);
    // (A B)(A' B') -> A A' B B'
    let m = c
        .matrix
        .with_shape(
            &[d_a_in, d_b_in, d_a_out, d_b_out],
            &[d_a_in, d_b_in, d_a_out, d_b_out],
        )
        .permute_factors(&[0, 2, 1, 3]);
    ChoiOperator::new_unchecked(m, ChoiFactors::Bipartite)
}

/// Canonical Kraus family from the eigendecomposition of a PSD Choi matrix.
/// Eigenvalues below 1e-10 are dropped.
pub fn choi_to_kraus(c: &ChoiOperator) -> Result<KrausChannel> {
    let m = match c.factors {
        ChoiFactors::InOut => c.matrix.clone(),
        ChoiFactors::Bipartite => {
            let s = c.matrix.row_shape().to_vec();
            c.matrix
                .permute_factors(&[0, 2, 1, 3])
                .with_shape(&[s[0] * s[2], s[1] * s[3]], &[s[0] * s[2], s[1] * s[3]])
        }
    };
    let shape = m.row_shape();
    let (d_in, d_out) = (shape[0], shape[1]);
    let (vals, vecs) = m.hermitian_eigen();
    if let Some(&min) = vals.first() {
        if min < -1e-10 {
            return Err(Error::NotPsd { min_eig: min });
        }
    }
    let mut ops = Vec::new();
    for (idx, &lam) in vals.iter().enumerate() {
        if lam <= 1e-10 {
            continue;
        }
        let v = vecs.column(idx);
        let mut k = CMatrix::zeros(&[d_out], &[d_in]);
        for a in 0..d_in {
            for o in 0..d_out {
                k.set(o, a, cr(lam.sqrt()) * v.get(a * d_out + o, 0));
            }
        }
        ops.push(k);
    }
    KrausChannel::new(ops)
}

fn check_unitary(u: &CMatrix) -> Result<()> {
    let dev = (&u.dagger() * u).max_abs_diff(&CMatrix::identity(u.col_shape()));
    if dev > 1e-10 {
        return Err(Error::NotUnitary(dev));
    }
    Ok(())
}

/// Von Neumann measurement channel on the basis `{U|0>, U|1>}`:
/// Kraus operators `{U|0><0|U†, U|1><1|U†}`.
pub fn build_mu(u: &SU2Element) -> Result<KrausChannel> {
    let um = u.matrix();
    check_unitary(&um)?;
    let mut ops = Vec::new();
    for k in 0..2 {
        let col = um.column(k);
        ops.push(col.outer(&col));
    }
    KrausChannel::new(ops)
}

/// Rotation axis for [`build_rotation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Unitary channel with the single Kraus operator `V sigma V†` for the chosen
/// Pauli `sigma`.
pub fn build_rotation(v: &SU2Element, axis: Axis) -> Result<KrausChannel> {
    let vm = v.matrix();
    check_unitary(&vm)?;
    let sigma = match axis {
        Axis::X => pauli_x(),
        Axis::Y => pauli_y(),
        Axis::Z => pauli_z(),
    };
    KrausChannel::unitary(&(&vm * &sigma) * &vm.dagger())
}

/// The two base operators of Eq.-style channel pair at fixed unitaries:
/// `Lambda_0` on `A A' B B'` (two dephasings) as an unaveraged Choi.
pub fn lambda0() -> CMatrix {
    let mut m = CMatrix::zeros(&[2, 2, 2, 2], &[2, 2, 2, 2]);
    for mm in 0..2 {
        for n in 0..2 {
            let pm = CMatrix::basis_ket(&[2], mm);
            let pn = CMatrix::basis_ket(&[2], n);
            let term = pm
                .outer(&pm)
                .kron(&pm.outer(&pm))
                .kron(&pn.outer(&pn))
                .kron(&pn.outer(&pn));
            m = &m + &term;
        }
    }
    m
}

/// `Lambda_1 = |X>><<X| ⊗ |Y>><<Y|` on `A A' B B'` (ascending order).
pub fn lambda1() -> CMatrix {
    let x = double_ket(&pauli_x());
    let y = double_ket(&pauli_y());
    x.outer(&x).kron(&y.outer(&y))
}

/// Maximally mixed state `I/d`.
pub fn maximally_mixed(d: usize) -> CMatrix {
    CMatrix::identity(&[d]).scale(cr(1.0 / d as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::{sample_su2, SU2Element};
    use crate::linalg::{ket0, ket1, ket_plus, max_entangled, I, ONE};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn density(v: &CMatrix) -> CMatrix {
        v.outer(v)
    }

    #[test]
    fn identity_choi_is_max_entangled() {
        let c = kraus_to_choi(&KrausChannel::identity(2));
        let w = max_entangled(2);
        assert!(c.matrix().max_abs_diff(&w.outer(&w)) < 1e-14);
    }

    #[test]
    fn unitary_x_choi() {
        let ch = KrausChannel::unitary(pauli_x()).unwrap();
        let c = kraus_to_choi(&ch);
        let w = double_ket(&pauli_x());
        assert!(c.matrix().max_abs_diff(&w.outer(&w)) < 1e-14);
    }

    #[test]
    fn mu_identity_choi_is_dephasing() {
        let ch = build_mu(&SU2Element::identity()).unwrap();
        let c = kraus_to_choi(&ch);
        let mut want = CMatrix::zeros(&[2, 2], &[2, 2]);
        for k in 0..2 {
            let v = CMatrix::basis_ket(&[2, 2], k * 2 + k);
            want = &want + &v.outer(&v);
        }
        assert!(c.matrix().max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn choi_kraus_round_trip_identity() {
        let c = kraus_to_choi(&KrausChannel::identity(2));
        let ch = choi_to_kraus(&c).unwrap();
        assert_eq!(ch.kraus_ops().len(), 1);
        // up to global phase
        let k = &ch.kraus_ops()[0];
        let phase = k.get(0, 0) / k.get(0, 0).norm();
        assert!(k.scale(phase.conj().into()).max_abs_diff(&CMatrix::identity(&[2])) < 1e-10);
    }

    #[test]
    fn choi_kraus_round_trip_random_channel() {
        // random 2-qubit CPTP channel from a Haar-ish isometry
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = crate::haar::random_unitary(8, &mut rng);
        // Kraus ops: two 4x8 blocks of a 8x... build from stacked blocks of u
        let mut ops = Vec::new();
        for b in 0..2 {
            let mut k = CMatrix::zeros(&[4], &[4]);
            for i in 0..4 {
                for j in 0..4 {
                    k.set(i, j, u.get(b * 4 + i, j));
                }
            }
            ops.push(k);
        }
        let ch = KrausChannel::new(ops).unwrap();
        let c = kraus_to_choi(&ch);
        let ch2 = choi_to_kraus(&c).unwrap();
        // identical channel action on a spanning set
        for idx in 0..4 {
            for jdx in 0..4 {
                let mut e = CMatrix::zeros(&[4], &[4]);
                e.set(idx, jdx, ONE);
                let a = ch.apply(&e).unwrap_or_else(|_| unreachable!());
                let b = ch2.apply(&e).unwrap();
                assert!(a.max_abs_diff(&b) < 1e-9);
            }
        }
        // and kraus_to_choi(choi_to_kraus(c)) == c
        assert!(kraus_to_choi(&ch2).matrix().max_abs_diff(c.matrix()) < 1e-9);
    }

    #[test]
    fn apply_dephasing_and_flip() {
        let mu = build_mu(&SU2Element::identity()).unwrap();
        let out = mu.apply(&density(&ket_plus())).unwrap();
        assert!(out.max_abs_diff(&maximally_mixed(2)) < 1e-14);
        let xv = build_rotation(&SU2Element::identity(), Axis::X).unwrap();
        let out = xv.apply(&density(&ket0())).unwrap();
        assert!(out.max_abs_diff(&density(&ket1())) < 1e-14);
        let zv = build_rotation(&SU2Element::identity(), Axis::Z).unwrap();
        let out = zv.apply(&density(&ket_plus())).unwrap();
        assert!(out.max_abs_diff(&density(&crate::linalg::ket_minus())) < 1e-14);
    }

    #[test]
    fn compose_identities_and_paulis() {
        let id = KrausChannel::identity(2);
        let mu = build_mu(&SU2Element::identity()).unwrap();
        let c = KrausChannel::compose(&id, &mu).unwrap();
        for rho in [density(&ket0()), density(&ket_plus())] {
            assert!(c.apply(&rho).unwrap().max_abs_diff(&mu.apply(&rho).unwrap()) < 1e-12);
        }
        // Y after X is the Z channel (YX = iZ, phase drops)
        let x = build_rotation(&SU2Element::identity(), Axis::X).unwrap();
        let y = build_rotation(&SU2Element::identity(), Axis::Y).unwrap();
        let z = build_rotation(&SU2Element::identity(), Axis::Z).unwrap();
        let yx = KrausChannel::compose(&y, &x).unwrap();
        for rho in [density(&ket0()), density(&ket_plus())] {
            assert!(yx.apply(&rho).unwrap().max_abs_diff(&z.apply(&rho).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn measurement_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let u = sample_su2(&mut rng);
            let mu = build_mu(&u).unwrap();
            let mm = KrausChannel::compose(&mu, &mu).unwrap();
            let rho = density(&crate::linalg::bloch_ket(1.1, 0.3));
            assert!(mm.apply(&rho).unwrap().max_abs_diff(&mu.apply(&rho).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn tensor_local_flips() {
        let x = build_rotation(&SU2Element::identity(), Axis::X).unwrap();
        let y = build_rotation(&SU2Element::identity(), Axis::Y).unwrap();
        let ch = KrausChannel::tensor(&x, &y);
        let rho = density(&ket0()).kron(&density(&ket0()));
        let want = density(&ket1()).kron(&density(&ket1()));
        assert!(ch.apply(&rho).unwrap().max_abs_diff(&want) < 1e-13);
    }

    #[test]
    fn tensor_choi_is_kron_of_chois() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = build_mu(&sample_su2(&mut rng)).unwrap();
        let b = build_rotation(&sample_su2(&mut rng), Axis::Y).unwrap();
        let joint = kraus_to_choi_bipartite(&KrausChannel::tensor(&a, &b), 2, 2);
        let want = kraus_to_choi(&a).matrix().kron(kraus_to_choi(&b).matrix());
        assert!(joint.matrix().max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn no_signalling_product_and_swap() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = build_mu(&sample_su2(&mut rng)).unwrap();
        let b = build_rotation(&sample_su2(&mut rng), Axis::X).unwrap();
        let prod = kraus_to_choi_bipartite(&KrausChannel::tensor(&a, &b), 2, 2);
        assert!(prod.is_no_signalling(SignallingDirection::BToA).unwrap());
        assert!(prod.is_no_signalling(SignallingDirection::AToB).unwrap());

        let mut swap = CMatrix::zeros(&[2, 2], &[2, 2]);
        for i in 0..2 {
            for j in 0..2 {
                swap.set(j * 2 + i, i * 2 + j, ONE);
            }
        }
        let sw = kraus_to_choi_bipartite(&KrausChannel::unitary(swap).unwrap(), 2, 2);
        assert!(!sw.is_no_signalling(SignallingDirection::BToA).unwrap());
        assert!(!sw.is_no_signalling(SignallingDirection::AToB).unwrap());
    }

    #[test]
    fn mu_kraus_projector_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let u = sample_su2(&mut rng);
            let mu = build_mu(&u).unwrap();
            let [p0, p1] = [&mu.kraus_ops()[0], &mu.kraus_ops()[1]];
            assert!((p0 * p0).max_abs_diff(p0) < 1e-12);
            assert!((p1 * p1).max_abs_diff(p1) < 1e-12);
            assert!((p0 * p1).frobenius_norm() < 1e-12);
            assert!((&(p0 + p1)).max_abs_diff(&CMatrix::identity(&[2])) < 1e-12);
            // projectors on the same basis commute
            assert!((p0 * p1).max_abs_diff(&(p1 * p0)) < 1e-12);
        }
    }

    #[test]
    fn rotation_pauli_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let v = sample_su2(&mut rng);
            let xv = build_rotation(&v, Axis::X).unwrap().kraus_ops()[0].clone();
            let yv = build_rotation(&v, Axis::Y).unwrap().kraus_ops()[0].clone();
            let zv = build_rotation(&v, Axis::Z).unwrap().kraus_ops()[0].clone();
            // XY = iZ conjugated
            assert!((&xv * &yv).max_abs_diff(&zv.scale(I)) < 1e-12);
            // anticommutation
            let anti = &(&xv * &yv) + &(&yv * &xv);
            assert!(anti.frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let ch = build_mu(&sample_su2(&mut rng)).unwrap();
        let s = ch.to_json();
        let back = KrausChannel::from_json(&s).unwrap();
        for (a, b) in ch.kraus_ops().iter().zip(back.kraus_ops()) {
            assert_eq!(a.max_abs_diff(b), 0.0, "exact float round-trip");
        }
    }
}
