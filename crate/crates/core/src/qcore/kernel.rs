//! In-place amplitude kernels. Qubit 0 is the most significant bit of a basis
//! index, so qubit `q` of an `n`-qubit register lives at bit `n - 1 - q`.

use crate::qcore::matrix::Matrix;
use crate::scalar::{czero, Real, C};

#[inline]
pub fn bit_position(qubit: usize, n_qubits: usize) -> usize {
    n_qubits - 1 - qubit
}

#[inline]
pub fn qubit_is_set(index: usize, qubit: usize, n_qubits: usize) -> bool {
    (index >> bit_position(qubit, n_qubits)) & 1 == 1
}

/// Enumerates basis indices whose target bits are zero, plus the offsets that
/// select each local basis state of the targets.
pub(crate) struct Layout {
    sorted_bits: Vec<usize>,
    offsets: Vec<usize>,
    n_bases: usize,
}

impl Layout {
    pub fn new(targets: &[usize], n_qubits: usize) -> Self {
        let k = targets.len();
        let bits: Vec<usize> = targets.iter().map(|&q| bit_position(q, n_qubits)).collect();
        let offsets = (0..1usize << k)
            .map(|local| {
                bits.iter()
                    .enumerate()
                    .filter(|(t, _)| (local >> (k - 1 - t)) & 1 == 1)
                    .fold(0usize, |o, (_, &b)| o | (1 << b))
            })
            .collect();
        let mut sorted_bits = bits;
        sorted_bits.sort_unstable();
        Self {
            sorted_bits,
            offsets,
            n_bases: 1usize << (n_qubits - k),
        }
    }

    #[inline]
    pub fn n_bases(&self) -> usize {
        self.n_bases
    }

    #[inline]
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// The `i`-th basis index with every target bit cleared.
    #[inline]
    pub fn base(&self, mut i: usize) -> usize {
        for &b in &self.sorted_bits {
            let low = i & ((1usize << b) - 1);
            i = ((i >> b) << (b + 1)) | low;
        }
        i
    }
}

/// Inserts a zero bit at position `b` of `i`.
#[inline]
fn insert_zero(i: usize, b: usize) -> usize {
    ((i >> b) << (b + 1)) | (i & ((1usize << b) - 1))
}

fn apply_two<T: Real>(amps: &mut [C<T>], n_qubits: usize, m: &Matrix<T>, q0: usize, q1: usize) {
    let (b0, b1) = (bit_position(q0, n_qubits), bit_position(q1, n_qubits));
    let (lo, hi) = (b0.min(b1), b0.max(b1));
    let off = [0, 1usize << b1, 1usize << b0, (1usize << b0) | (1usize << b1)];
    let mut u = [czero::<T>(); 16];
    u.copy_from_slice(m.as_slice());
    // Parity-preserving gates (e.g. XX+YY+ZZ rotations) pair 00↔11 and 01↔10.
    if [1, 2, 4, 7, 8, 11, 13, 14].iter().all(|&k| u[k] == czero()) {
        for j in 0..amps.len() >> 2 {
            let base = insert_zero(insert_zero(j, lo), hi);
            for (a, b) in [(0, 3), (1, 2)] {
                let (ia, ib) = (base | off[a], base | off[b]);
                let (xa, xb) = (amps[ia], amps[ib]);
                amps[ia] = u[5 * a] * xa + u[4 * a + b] * xb;
                amps[ib] = u[4 * b + a] * xa + u[5 * b] * xb;
            }
        }
        return;
    }
    for j in 0..amps.len() >> 2 {
        let base = insert_zero(insert_zero(j, lo), hi);
        let x = [amps[base], amps[base | off[1]], amps[base | off[2]], amps[base | off[3]]];
        for (r, &o) in off.iter().enumerate() {
            let row = &u[4 * r..4 * r + 4];
            amps[base | o] = row[0] * x[0] + row[1] * x[1] + row[2] * x[2] + row[3] * x[3];
        }
    }
}

pub fn apply_dense<T: Real>(amps: &mut [C<T>], n_qubits: usize, m: &Matrix<T>, targets: &[usize]) {
    let dim = m.dim();
    debug_assert_eq!(dim, 1 << targets.len());
    if let [q0, q1] = *targets {
        apply_two(amps, n_qubits, m, q0, q1);
        return;
    }
    let layout = Layout::new(targets, n_qubits);
    let mut buf = vec![czero(); dim];
    for i in 0..layout.n_bases() {
        let base = layout.base(i);
        for (slot, &o) in buf.iter_mut().zip(layout.offsets()) {
            *slot = amps[base | o];
        }
        for (r, &o) in layout.offsets().iter().enumerate() {
            amps[base | o] = m
                .row(r)
                .iter()
                .zip(&buf)
                .fold(czero(), |acc, (&a, &b)| acc + a * b);
        }
    }
}

/// Row-major 2×2 block `[m00, m01, m10, m11]`.
pub type Block<T> = [C<T>; 4];

pub fn apply_single<T: Real>(amps: &mut [C<T>], n_qubits: usize, qubit: usize, m: &Block<T>) {
    let stride = 1usize << bit_position(qubit, n_qubits);
    let len = amps.len();
    let mut start = 0;
    while start < len {
        for i in start..start + stride {
            let a0 = amps[i];
            let a1 = amps[i + stride];
            amps[i] = m[0] * a0 + m[1] * a1;
            amps[i + stride] = m[2] * a0 + m[3] * a1;
        }
        start += 2 * stride;
    }
}

pub fn apply_cnot<T: Real>(amps: &mut [C<T>], n_qubits: usize, control: usize, target: usize) {
    let cbit = 1usize << bit_position(control, n_qubits);
    let tbit = 1usize << bit_position(target, n_qubits);
    for i in 0..amps.len() {
        if i & cbit != 0 && i & tbit == 0 {
            amps.swap(i, i | tbit);
        }
    }
}

pub fn apply_cz<T: Real>(amps: &mut [C<T>], n_qubits: usize, a: usize, b: usize) {
    let mask = (1usize << bit_position(a, n_qubits)) | (1usize << bit_position(b, n_qubits));
    for (i, amp) in amps.iter_mut().enumerate() {
        if i & mask == mask {
            *amp = -*amp;
        }
    }
}

/// Uniformly controlled single-qubit gate: the target receives
/// `blocks[p]` where `p` is the bit pattern of `controls` (first control is
/// the most significant bit of `p`).
pub fn apply_multiplexed<T: Real>(
    amps: &mut [C<T>],
    n_qubits: usize,
    controls: &[usize],
    target: usize,
    blocks: &[Block<T>],
) {
    let k = controls.len();
    debug_assert_eq!(blocks.len(), 1 << k);
    let tpos = bit_position(target, n_qubits);
    if k > 0 && controls.windows(2).all(|w| w[1] == w[0] + 1) && (tpos > bit_position(controls[0], n_qubits) || tpos < bit_position(controls[k - 1], n_qubits)) {
        // Contiguous ascending controls read as one bit field.
        let shift = bit_position(controls[k - 1], n_qubits);
        let mask = (1usize << k) - 1;
        let tbit = 1usize << tpos;
        for j in 0..amps.len() >> 1 {
            let i = insert_zero(j, tpos);
            let m = &blocks[(i >> shift) & mask];
            let a0 = amps[i];
            let a1 = amps[i | tbit];
            amps[i] = m[0] * a0 + m[1] * a1;
            amps[i | tbit] = m[2] * a0 + m[3] * a1;
        }
        return;
    }
    let cbits: Vec<usize> = controls.iter().map(|&q| bit_position(q, n_qubits)).collect();
    let tbit = 1usize << bit_position(target, n_qubits);
    for i in 0..amps.len() {
        if i & tbit != 0 {
            continue;
        }
        let pattern = cbits
            .iter()
            .fold(0usize, |p, &b| (p << 1) | ((i >> b) & 1));
        let m = &blocks[pattern];
        let a0 = amps[i];
        let a1 = amps[i | tbit];
        amps[i] = m[0] * a0 + m[1] * a1;
        amps[i | tbit] = m[2] * a0 + m[3] * a1;
    }
}

/// Multiplies every amplitude by `phases[i]`.
pub fn apply_diagonal<T: Real>(amps: &mut [C<T>], phases: &[C<T>]) {
    for (a, &p) in amps.iter_mut().zip(phases) {
        *a = *a * p;
    }
}
