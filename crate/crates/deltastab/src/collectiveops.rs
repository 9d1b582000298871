//! Action of the local unitary Lie algebra `u(1) ⊕ su(2)ⁿ` on state vectors.
//!
//! Local su(2) parts are written in the anti-Hermitian basis
//! `{iσ_x, iσ_y, iσ_z}`, so the diagonal generator on a label set `K` is the
//! z-coordinate vector `(0, 0, 1)` on the qubits of `K`. Collective angular
//! momentum uses units with `ħ/2 ≡ 1`, i.e. `J_a = Σ_k σ_a^(k)`; on that
//! scale `J²|00⟩ = 8|00⟩` and the largest eigenvalue on `n` qubits is
//! `n(n+2)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::chordkit::MultiIndex;
use crate::statevec::StateVector;

/// Default relative singular-value threshold for kernel counting.
pub const DEFAULT_SVD_TOLERANCE: f64 = 1e-9;
/// Default cap on the qubit count for the dense J² kernel computation.
pub const DEFAULT_VDIM_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CollectiveError {
    #[error("qubit label {label} out of range 1..={max}")]
    LabelOutOfRange { label: usize, max: usize },
    #[error("element has {element} local parts, state has {state} qubits")]
    SizeMismatch { element: usize, state: usize },
    #[error("n = {n} exceeds the kernel computation cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("coordinate vector has length {got}, expected 1 + 3n = {expected}")]
    BadCoordinateLength { expected: usize, got: usize },
}

/// Axis of a Pauli matrix / su(2) coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    fn coord(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// An element `(it, A_1, ..., A_n)` of `u(1) ⊕ su(2)ⁿ`: a real phase
/// generator plus one su(2) element per qubit, `A_k = x·iσ_x + y·iσ_y + z·iσ_z`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalAlgebraElement {
    phase: f64,
    locals: Vec<[f64; 3]>,
}

impl LocalAlgebraElement {
    pub fn new(phase: f64, locals: Vec<[f64; 3]>) -> Self {
        Self { phase, locals }
    }

    pub fn zero(n: usize) -> Self {
        Self { phase: 0.0, locals: vec![[0.0; 3]; n] }
    }

    /// The generator with `iσ_axis` on every label in `labels` and zero
    /// elsewhere; with `Axis::Z` this is the diagonal generator of the
    /// eigenvalue formula `X|I⟩ = iα_I|I⟩`.
    pub fn axis_on_labels(n: usize, axis: Axis, labels: &[usize]) -> Result<Self, CollectiveError> {
        let mut e = Self::zero(n);
        for &label in labels {
            if label < 1 || label > n {
                return Err(CollectiveError::LabelOutOfRange { label, max: n });
            }
            e.locals[label - 1][axis.coord()] = 1.0;
        }
        Ok(e)
    }

    /// The diagonal generator `iσ_axis` on every qubit: a basis element of
    /// the Lie algebra of the diagonal subgroup.
    pub fn diagonal(n: usize, axis: Axis) -> Self {
        let labels: Vec<usize> = (1..=n).collect();
        Self::axis_on_labels(n, axis, &labels).expect("labels are in range by construction")
    }

    /// Pure phase generator `it` with all local parts zero.
    pub fn pure_phase(n: usize, t: f64) -> Self {
        Self { phase: t, locals: vec![[0.0; 3]; n] }
    }

    pub fn n(&self) -> usize {
        self.locals.len()
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn locals(&self) -> &[[f64; 3]] {
        &self.locals
    }

    /// Coordinates `[t, x_1, y_1, z_1, ..., x_n, y_n, z_n]` of length `1 + 3n`.
    pub fn to_coordinates(&self) -> Vec<f64> {
        let mut coords = Vec::with_capacity(1 + 3 * self.locals.len());
        coords.push(self.phase);
        for part in &self.locals {
            coords.extend_from_slice(part);
        }
        coords
    }

    pub fn from_coordinates(n: usize, coords: &[f64]) -> Result<Self, CollectiveError> {
        if coords.len() != 1 + 3 * n {
            return Err(CollectiveError::BadCoordinateLength {
                expected: 1 + 3 * n,
                got: coords.len(),
            });
        }
        let locals = (0..n)
            .map(|k| [coords[1 + 3 * k], coords[2 + 3 * k], coords[3 + 3 * k]])
            .collect();
        Ok(Self { phase: coords[0], locals })
    }

    /// Euclidean norm of the coordinate vector.
    pub fn coordinate_norm(&self) -> f64 {
        self.to_coordinates().iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// `α_I` over the labels in `K`: the number of 0-bits of `ix` at positions in
/// `K` minus the number of 1-bits there.
pub fn alpha(ix: MultiIndex, labels: &[usize]) -> Result<i64, CollectiveError> {
    let mut value = 0i64;
    for &label in labels {
        if label < 1 || label > ix.len() {
            return Err(CollectiveError::LabelOutOfRange { label, max: ix.len() });
        }
        value += if ix.bit(label) == 0 { 1 } else { -1 };
    }
    Ok(value)
}

/// Applies the diagonal generator on `K`: each amplitude `a_I` becomes
/// `i·α_I·a_I`, so exactly the balanced indices drop out of the support.
pub fn apply_diagonal_generator(
    s: &StateVector,
    labels: &[usize],
) -> Result<StateVector, CollectiveError> {
    let mut out = StateVector::zero(s.n()).expect("input state has a valid qubit count");
    for (ix, amp) in s.amplitudes() {
        let a = alpha(*ix, labels)?;
        if a != 0 {
            out.set_amplitude(*ix, Complex64::new(0.0, a as f64) * amp);
        }
    }
    Ok(out)
}

/// Applies `(it·Id + Σ_k A_k)` to `s`, each `A_k` acting on tensor slot `k`.
///
/// Per qubit with bit `b`: `iσ_z` contributes `±i` diagonally, `iσ_x`
/// contributes `i` to the bit-flipped index, and `iσ_y` contributes `∓1`
/// to the bit-flipped index (minus when `b = 0`).
pub fn apply_element(
    e: &LocalAlgebraElement,
    s: &StateVector,
) -> Result<StateVector, CollectiveError> {
    if e.n() != s.n() {
        return Err(CollectiveError::SizeMismatch { element: e.n(), state: s.n() });
    }
    let mut out = StateVector::zero(s.n()).expect("input state has a valid qubit count");
    let phase = Complex64::new(0.0, e.phase());
    for (ix, amp) in s.amplitudes() {
        if e.phase() != 0.0 {
            out.add_amplitude(*ix, phase * amp);
        }
        for (k, part) in e.locals().iter().enumerate() {
            let label = k + 1;
            let [x, y, z] = *part;
            let bit = ix.bit(label);
            if z != 0.0 {
                let sign = if bit == 0 { z } else { -z };
                out.add_amplitude(*ix, Complex64::new(0.0, sign) * amp);
            }
            if x != 0.0 {
                out.add_amplitude(ix.flipped(label), Complex64::new(0.0, x) * amp);
            }
            if y != 0.0 {
                let sign = if bit == 0 { -y } else { y };
                out.add_amplitude(ix.flipped(label), Complex64::new(sign, 0.0) * amp);
            }
        }
    }
    Ok(out)
}

/// Applies the collective Pauli `Σ_k σ_axis^(k)`.
fn apply_collective_pauli(s: &StateVector, axis: Axis) -> StateVector {
    let n = s.n();
    let mut out = StateVector::zero(n).expect("input state has a valid qubit count");
    for (ix, amp) in s.amplitudes() {
        match axis {
            Axis::X => {
                for label in 1..=n {
                    out.add_amplitude(ix.flipped(label), *amp);
                }
            }
            Axis::Y => {
                for label in 1..=n {
                    // σ_y|0⟩ = i|1⟩, σ_y|1⟩ = −i|0⟩
                    let factor = if ix.bit(label) == 0 {
                        Complex64::new(0.0, 1.0)
                    } else {
                        Complex64::new(0.0, -1.0)
                    };
                    out.add_amplitude(ix.flipped(label), factor * amp);
                }
            }
            Axis::Z => {
                let eigen = n as f64 - 2.0 * f64::from(ix.weight());
                if eigen != 0.0 {
                    out.add_amplitude(*ix, eigen * amp);
                }
            }
        }
    }
    out
}

/// Applies `J² = (Σ_k σ_x^(k))² + (Σ_k σ_y^(k))² + (Σ_k σ_z^(k))²`:
/// each collective operator applied twice, summed over the three axes.
/// Its kernel is the zero total angular momentum subspace.
pub fn j_squared_apply(s: &StateVector) -> StateVector {
    let mut out = StateVector::zero(s.n()).expect("input state has a valid qubit count");
    for axis in Axis::ALL {
        let once = apply_collective_pauli(s, axis);
        let twice = apply_collective_pauli(&once, axis);
        for (ix, amp) in twice.amplitudes() {
            out.add_amplitude(*ix, *amp);
        }
    }
    out
}

/// Upper bound `4n(n+2)` on the largest J² eigenvalue on `n` qubits, used to
/// scale membership tolerances. (The exact maximum is `n(n+2)`.)
pub fn j_squared_scale(n: usize) -> f64 {
    4.0 * n as f64 * (n as f64 + 2.0)
}

/// The `2^n × 2^n` matrix of J² in the computational basis; real symmetric
/// positive semidefinite.
pub fn j_squared_matrix(n: usize) -> DMatrix<f64> {
    let dim = 1usize << n;
    let mut mat = DMatrix::<f64>::zeros(dim, dim);
    for col in 0..dim {
        let basis = StateVector::basis_state(MultiIndex::from_bits(col as u64, n).unwrap())
            .expect("basis index is valid");
        let image = j_squared_apply(&basis);
        for (ix, amp) in image.amplitudes() {
            debug_assert_eq!(amp.im, 0.0);
            mat[(ix.value() as usize, col)] = amp.re;
        }
    }
    mat
}

/// Dimension of the kernel of J² on `(C²)^⊗n`, by dense SVD: the number of
/// singular values below `tol` times the largest one. This equals the mth
/// Catalan number for `n = 2m` and zero for odd `n`.
pub fn v_delta_dimension(n: usize, tol: f64) -> Result<usize, CollectiveError> {
    v_delta_dimension_capped(n, tol, DEFAULT_VDIM_CAP)
}

pub fn v_delta_dimension_capped(n: usize, tol: f64, cap: usize) -> Result<usize, CollectiveError> {
    if n > cap {
        return Err(CollectiveError::CapExceeded { n, cap });
    }
    let mat = j_squared_matrix(n);
    Ok(kernel_dimension(&mat, tol))
}

/// Counts singular values below `tol · max_singular_value`. A zero matrix has
/// full-dimensional kernel.
pub(crate) fn kernel_dimension(mat: &DMatrix<f64>, tol: f64) -> usize {
    let svd = mat.clone().svd(false, false);
    let max = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    if max == 0.0 {
        return mat.ncols();
    }
    svd.singular_values.iter().filter(|&&sv| sv < tol * max).count()
        + (mat.ncols().saturating_sub(svd.singular_values.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chordkit::{enumerate_all, parse_diagram};
    use crate::statevec::{linear_combination, singlet_product};
    use num_complex::Complex64;

    fn ix(s: &str) -> MultiIndex {
        MultiIndex::parse(s).unwrap()
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(ix("001011"), &[1, 2, 3]).unwrap(), 1);
        assert_eq!(alpha(ix("0000"), &[1, 2, 3, 4]).unwrap(), 4);
        assert_eq!(alpha(ix("01"), &[1, 2]).unwrap(), 0);
        assert!(matches!(
            alpha(ix("01"), &[3]),
            Err(CollectiveError::LabelOutOfRange { label: 3, max: 2 })
        ));
    }

    #[test]
    fn diagonal_generator_examples() {
        let singlet = singlet_product(&parse_diagram("1-2").unwrap());
        assert!(apply_diagonal_generator(&singlet, &[1, 2]).unwrap().is_zero());

        let zeros = StateVector::basis_state(ix("0000")).unwrap();
        let out = apply_diagonal_generator(&zeros, &[1, 2]).unwrap();
        assert_eq!(out.coefficient(ix("0000")).unwrap(), Complex64::new(0.0, 2.0));

        let fig1 = singlet_product(&parse_diagram("1-3 2-5 4-6").unwrap());
        let out = apply_diagonal_generator(&fig1, &[1, 2, 3]).unwrap();
        assert!(!out.is_zero());
        assert_eq!(out.coefficient(ix("001011")).unwrap(), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn diagonal_generator_kills_exactly_balanced_indices() {
        let fig1 = singlet_product(&parse_diagram("1-3 2-5 4-6").unwrap());
        let labels = [1usize, 2, 3];
        let out = apply_diagonal_generator(&fig1, &labels).unwrap();
        for (index, _) in fig1.amplitudes() {
            let balanced = alpha(*index, &labels).unwrap() == 0;
            assert_eq!(out.coefficient(*index).unwrap() == Complex64::ZERO, balanced);
        }
    }

    #[test]
    fn apply_element_cases() {
        let fig1 = singlet_product(&parse_diagram("1-3 2-5 4-6").unwrap());

        let zero_elem = LocalAlgebraElement::zero(6);
        assert!(apply_element(&zero_elem, &fig1).unwrap().is_zero());

        // z-axis locals on K reproduce the diagonal generator
        let labels = [1usize, 2, 3];
        let e = LocalAlgebraElement::axis_on_labels(6, Axis::Z, &labels).unwrap();
        assert_eq!(
            apply_element(&e, &fig1).unwrap(),
            apply_diagonal_generator(&fig1, &labels).unwrap()
        );

        // pure phase generator multiplies by i
        let phase = LocalAlgebraElement::pure_phase(6, 1.0);
        let out = apply_element(&phase, &fig1).unwrap();
        assert_eq!(out, fig1.scaled(Complex64::new(0.0, 1.0)));

        let wrong = LocalAlgebraElement::zero(4);
        assert!(matches!(
            apply_element(&wrong, &fig1),
            Err(CollectiveError::SizeMismatch { element: 4, state: 6 })
        ));
    }

    #[test]
    fn apply_element_is_linear() {
        let p = singlet_product(&parse_diagram("1-2 3-4").unwrap());
        let q = singlet_product(&parse_diagram("1-4 2-3").unwrap());
        let combo = linear_combination([
            (Complex64::new(0.5, -0.25), &p),
            (Complex64::new(-1.5, 2.0), &q),
        ])
        .unwrap();
        let e = LocalAlgebraElement::new(
            0.75,
            vec![[0.1, -0.2, 0.3], [0.0, 1.0, 0.0], [-0.4, 0.0, 0.9], [1.0, 1.0, 1.0]],
        );
        let lhs = apply_element(&e, &combo).unwrap();
        let rhs = linear_combination([
            (Complex64::new(0.5, -0.25), &apply_element(&e, &p).unwrap()),
            (Complex64::new(-1.5, 2.0), &apply_element(&e, &q).unwrap()),
        ])
        .unwrap();
        let diff = linear_combination([
            (Complex64::new(1.0, 0.0), &lhs),
            (Complex64::new(-1.0, 0.0), &rhs),
        ])
        .unwrap();
        assert!(diff.norm() < 1e-12);
    }

    #[test]
    fn j_squared_annihilates_singlet_products() {
        assert!(j_squared_apply(&singlet_product(&parse_diagram("1-2").unwrap())).is_zero());
        assert!(j_squared_apply(&singlet_product(&parse_diagram("1-3 2-4").unwrap())).is_zero());
        // every perfect matching, crossing or not
        for m in 1..=3 {
            for p in enumerate_all(m).unwrap() {
                assert!(j_squared_apply(&singlet_product(&p)).is_zero(), "{p}");
            }
        }
    }

    #[test]
    fn j_squared_on_00_is_eight() {
        let zeros = StateVector::basis_state(ix("00")).unwrap();
        let out = j_squared_apply(&zeros);
        assert_eq!(out.support_len(), 1);
        assert_eq!(out.coefficient(ix("00")).unwrap(), Complex64::new(8.0, 0.0));
    }

    // Independent dense construction from explicit Pauli matrices.
    fn j_squared_matrix_oracle(n: usize) -> DMatrix<f64> {
        let dim = 1usize << n;
        let paulis: [DMatrix<Complex64>; 3] = [
            DMatrix::from_row_slice(2, 2, &[
                Complex64::ZERO, Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0), Complex64::ZERO,
            ]),
            DMatrix::from_row_slice(2, 2, &[
                Complex64::ZERO, Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0), Complex64::ZERO,
            ]),
            DMatrix::from_row_slice(2, 2, &[
                Complex64::new(1.0, 0.0), Complex64::ZERO,
                Complex64::ZERO, Complex64::new(-1.0, 0.0),
            ]),
        ];
        let eye = DMatrix::<Complex64>::identity(2, 2);
        let mut total = DMatrix::<Complex64>::zeros(dim, dim);
        for pauli in &paulis {
            let mut collective = DMatrix::<Complex64>::zeros(dim, dim);
            for k in 0..n {
                let mut term = DMatrix::<Complex64>::identity(1, 1);
                for slot in 0..n {
                    let factor = if slot == k { pauli } else { &eye };
                    term = term.kronecker(factor);
                }
                collective += term;
            }
            total += &collective * &collective;
        }
        total.map(|z| {
            assert!(z.im.abs() < 1e-12);
            z.re
        })
    }

    #[test]
    fn j_squared_matrix_matches_kronecker_oracle() {
        for n in 1..=4 {
            let ours = j_squared_matrix(n);
            let oracle = j_squared_matrix_oracle(n);
            assert_eq!(ours, oracle, "n = {n}");
        }
    }

    #[test]
    fn largest_eigenvalue_matches_units() {
        // J² = 4·S² has top eigenvalue 4·(n/2)(n/2 + 1) = n(n+2), within the
        // 4n(n+2) bound used for tolerance scaling.
        for n in 1..=4 {
            let mat = j_squared_matrix(n);
            let top = mat.clone().svd(false, false).singular_values.max();
            let expected = (n * (n + 2)) as f64;
            assert!((top - expected).abs() < 1e-9, "n = {n}: top {top}");
            assert!(top <= j_squared_scale(n));
        }
    }

    #[test]
    fn kernel_dimensions_match_catalan() {
        assert_eq!(v_delta_dimension(4, DEFAULT_SVD_TOLERANCE).unwrap(), 2);
        assert_eq!(v_delta_dimension(3, DEFAULT_SVD_TOLERANCE).unwrap(), 0);
        assert_eq!(v_delta_dimension(8, DEFAULT_SVD_TOLERANCE).unwrap(), 14);
    }

    #[test]
    fn kernel_count_stable_across_tolerances() {
        for n in [2usize, 4, 5, 6] {
            let mat = j_squared_matrix(n);
            let expected = kernel_dimension(&mat, DEFAULT_SVD_TOLERANCE);
            for tol in [1e-10, 1e-9, 1e-8, 1e-7] {
                assert_eq!(kernel_dimension(&mat, tol), expected, "n = {n}, tol = {tol}");
            }
        }
    }

    #[test]
    fn vdim_cap() {
        assert!(matches!(
            v_delta_dimension(13, DEFAULT_SVD_TOLERANCE),
            Err(CollectiveError::CapExceeded { n: 13, cap: 12 })
        ));
        assert_eq!(v_delta_dimension_capped(13, 1e-9, 12).unwrap_err(),
            CollectiveError::CapExceeded { n: 13, cap: 12 });
    }
}
