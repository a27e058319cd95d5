//! Dense brute-force ground truth for the closed-form results.
//!
//! Everything in this module works on explicit `2^N x 2^N` real matrices in
//! the Kronecker computational basis (qubit 1 is the most significant bit of
//! the row index). Gates are applied as row/column operations: the Hadamard
//! on qubit 1 mixes row pairs, the fanout is a basis permutation.

mod jacobi;

use std::io::{Read, Write};
use std::path::Path;

pub use jacobi::{symmetric_eigen, symmetric_eigenvalues, SymmetricEigen, MAX_DIM, MAX_SWEEPS};

use crate::bipartition::{basis_bit, Bipartition};
use crate::error::{Error, Result};
use crate::polarization::PolarizationVector;
use crate::transforms::{log_partition_function, TransformKind};

/// Oracle paths refuse anything larger than a 12-qubit (4096 x 4096) matrix.
pub const MAX_DENSE_QUBITS: usize = 12;
/// Symmetry and unit-trace tolerance for [`DenseDensityMatrix`].
pub const MATRIX_TOL: f64 = 1e-12;
/// Most negative eigenvalue still accepted as a physical state.
pub const POSITIVITY_TOL: f64 = 1e-12;

/// Real symmetric, unit-trace `2^N x 2^N` matrix stored row-major.
///
/// Partial transposes of states are also held in this type, so positivity
/// is checked on demand ([`DenseDensityMatrix::check_positive`]) rather
/// than at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseDensityMatrix {
    n: usize,
    data: Vec<f64>,
}

fn check_dense_qubits(n: usize) -> Result<()> {
    if !(1..=MAX_DENSE_QUBITS).contains(&n) {
        return Err(Error::QubitCount {
            n,
            min: 1,
            max: MAX_DENSE_QUBITS,
        });
    }
    Ok(())
}

impl DenseDensityMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        check_dense_qubits(n)?;
        let dim = 1usize << n;
        if data.len() != dim * dim {
            return Err(Error::BadMatrixShape { len: data.len() });
        }
        if let Some(x) = data.iter().find(|x| !x.is_finite()) {
            return Err(Error::NotDensityMatrix(format!("non-finite entry {x}")));
        }
        for r in 0..dim {
            for c in r + 1..dim {
                let deviation = (data[r * dim + c] - data[c * dim + r]).abs();
                if deviation > MATRIX_TOL {
                    return Err(Error::NotSymmetric {
                        row: r,
                        col: c,
                        deviation,
                    });
                }
            }
        }
        let trace: f64 = (0..dim).map(|i| data[i * dim + i]).sum();
        if (trace - 1.0).abs() > MATRIX_TOL {
            return Err(Error::NotDensityMatrix(format!("trace {trace} differs from 1")));
        }
        Ok(Self { n, data })
    }

    /// Build from a square row-major buffer, inferring N from its length.
    pub fn from_square(data: Vec<f64>) -> Result<Self> {
        let len = data.len();
        let dim = (len as f64).sqrt().round() as usize;
        if dim * dim != len || !dim.is_power_of_two() || dim < 2 {
            return Err(Error::BadMatrixShape { len });
        }
        Self::new(dim.trailing_zeros() as usize, data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim() + col]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// `<v| rho |v>` for a real vector.
    pub fn expectation(&self, v: &[f64]) -> f64 {
        let dim = self.dim();
        assert_eq!(v.len(), dim);
        (0..dim)
            .filter(|&r| v[r] != 0.0)
            .map(|r| v[r] * (0..dim).map(|c| self.data[r * dim + c] * v[c]).sum::<f64>())
            .sum()
    }

    /// Sorted spectrum via the Jacobi solver.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        symmetric_eigenvalues(self.dim(), &self.data)
    }

    /// Error unless every eigenvalue is at least `-POSITIVITY_TOL`.
    pub fn check_positive(&self) -> Result<()> {
        let min = min_eigenvalue(self)?;
        if min < -POSITIVITY_TOL {
            return Err(Error::NotDensityMatrix(format!("negative eigenvalue {min}")));
        }
        Ok(())
    }

    /// Conjugate by the basis permutation `b -> perm(b)`.
    pub(crate) fn permuted(&self, perm: impl Fn(usize) -> usize) -> Self {
        let dim = self.dim();
        let mut out = vec![0.0; dim * dim];
        for r in 0..dim {
            let pr = perm(r);
            for c in 0..dim {
                out[pr * dim + perm(c)] = self.data[r * dim + c];
            }
        }
        Self { n: self.n, data: out }
    }

    /// `(H_q) rho (H_q)^T` for a Hadamard on qubit `qubit`.
    fn hadamard_conjugated(&self, qubit: usize) -> Self {
        let dim = self.dim();
        let bit = basis_bit(self.n, qubit);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut rows = self.data.clone();
        for r0 in (0..dim).filter(|r| r & bit == 0) {
            let r1 = r0 | bit;
            for c in 0..dim {
                let x = self.data[r0 * dim + c];
                let y = self.data[r1 * dim + c];
                rows[r0 * dim + c] = h * (x + y);
                rows[r1 * dim + c] = h * (x - y);
            }
        }
        let mut out = rows.clone();
        for r in 0..dim {
            for c0 in (0..dim).filter(|c| c & bit == 0) {
                let c1 = c0 | bit;
                let x = rows[r * dim + c0];
                let y = rows[r * dim + c1];
                out[r * dim + c0] = h * (x + y);
                out[r * dim + c1] = h * (x - y);
            }
        }
        Self { n: self.n, data: out }
    }

    /// Conjugation by the fanout gate: CNOT from qubit 1 onto every other qubit.
    fn fanout_conjugated(&self) -> Self {
        let control = basis_bit(self.n, 1);
        let targets = control - 1;
        self.permuted(|b| if b & control != 0 { b ^ targets } else { b })
    }

    /// Parse a CSV of `2^N` rows with `2^N` decimal fields each.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut data = Vec::new();
        let mut width = None;
        for (row, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Parse(format!("row {}: {e}", row + 1)))?;
            if *width.get_or_insert(record.len()) != record.len() {
                return Err(Error::Parse(format!("row {} has {} fields", row + 1, record.len())));
            }
            for field in record.iter() {
                data.push(
                    field
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("row {}: '{field}': {e}", row + 1)))?,
                );
            }
        }
        Self::from_square(data)
    }

    pub fn read_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }

    /// Write full-precision CSV; every field re-parses to the stored double.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
        let dim = self.dim();
        for r in 0..dim {
            wtr.write_record(self.data[r * dim..(r + 1) * dim].iter().map(|x| format!("{x:?}")))?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn write_csv_path(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

/// Diagonal Gibbs state `exp(-beta H)/Z` with entry `exp(-sum_i (-1)^{b_i} alpha_i)/Z`.
pub fn dense_thermal(pol: &PolarizationVector) -> Result<DenseDensityMatrix> {
    let n = pol.n();
    check_dense_qubits(n)?;
    let dim = 1usize << n;
    let ln_z = log_partition_function(pol);
    let mut data = vec![0.0; dim * dim];
    for b in 0..dim {
        let energy: f64 = (1..=n)
            .map(|q| {
                if b & basis_bit(n, q) == 0 {
                    pol.alpha(q)
                } else {
                    -pol.alpha(q)
                }
            })
            .sum();
        data[b * dim + b] = (-energy - ln_z).exp();
    }
    DenseDensityMatrix::new(n, data)
}

/// `U rho U^T` with `U_CH = U_fan (H_1 (x) I)` or `U_CF = U_CH U_fan`.
pub fn apply_transform_dense(kind: TransformKind, rho: &DenseDensityMatrix) -> Result<DenseDensityMatrix> {
    if rho.n() < 2 {
        return Err(Error::QubitCount {
            n: rho.n(),
            min: 2,
            max: MAX_DENSE_QUBITS,
        });
    }
    let out = match kind {
        TransformKind::Ch => rho.hadamard_conjugated(1).fanout_conjugated(),
        TransformKind::Cf => rho.fanout_conjugated().hadamard_conjugated(1).fanout_conjugated(),
    };
    Ok(out)
}

/// Transpose the party-B indices: entry `(r, c)` moves to the pair obtained
/// by swapping the B bits of `r` and `c`.
pub fn partial_transpose_dense(rho: &DenseDensityMatrix, bip: &Bipartition) -> Result<DenseDensityMatrix> {
    if rho.n() != bip.n() {
        return Err(Error::DimensionMismatch {
            expected: rho.n(),
            got: bip.n(),
        });
    }
    let dim = rho.dim();
    let mask = bip.basis_mask();
    let mut out = vec![0.0; dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            let r2 = (r & !mask) | (c & mask);
            let c2 = (c & !mask) | (r & mask);
            out[r2 * dim + c2] = rho.data[r * dim + c];
        }
    }
    Ok(DenseDensityMatrix { n: rho.n, data: out })
}

pub fn min_eigenvalue(rho: &DenseDensityMatrix) -> Result<f64> {
    Ok(rho.eigenvalues()?.first().copied().unwrap_or(f64::NAN))
}

/// Convenience: dense `U rho_th U^T`.
pub fn dense_transformed_thermal(kind: TransformKind, pol: &PolarizationVector) -> Result<DenseDensityMatrix> {
    apply_transform_dense(kind, &dense_thermal(pol)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartition::Sign;
    use crate::transforms::{generalized_ghz_vector, partition_function};
    use approx::assert_abs_diff_eq;

    fn pol(a: &[f64]) -> PolarizationVector {
        PolarizationVector::new(a.to_vec()).unwrap()
    }

    fn projector(v: &[f64]) -> DenseDensityMatrix {
        let data = v.iter().flat_map(|x| v.iter().map(move |y| x * y)).collect();
        DenseDensityMatrix::from_square(data).unwrap()
    }

    fn basis_state(n: usize, b: usize) -> DenseDensityMatrix {
        let mut v = vec![0.0; 1 << n];
        v[b] = 1.0;
        projector(&v)
    }

    #[test]
    fn thermal_examples() {
        let rho = dense_thermal(&pol(&[0.0, 0.0, 0.0])).unwrap();
        for r in 0..8 {
            for c in 0..8 {
                assert_abs_diff_eq!(rho.get(r, c), if r == c { 0.125 } else { 0.0 }, epsilon = 1e-16);
            }
        }
        let p = pol(&[1.0, 0.0]);
        let rho = dense_thermal(&p).unwrap();
        let z = 2.0 * 1f64.cosh() * 2.0;
        let e = (-1f64).exp();
        let expected = [e / z, e / z, 1f64.exp() / z, 1f64.exp() / z];
        for (i, x) in expected.iter().enumerate() {
            assert_abs_diff_eq!(rho.get(i, i), x, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(partition_function(&p), z, epsilon = 1e-14);
        assert_abs_diff_eq!(dense_thermal(&pol(&[0.3, -1.2, 2.0])).unwrap().trace(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn bell_transforms_on_ground_state() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let ghz = projector(&[r, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, r]);
        for kind in TransformKind::ALL {
            let out = apply_transform_dense(kind, &basis_state(3, 0)).unwrap();
            for (a, b) in out.data().iter().zip(ghz.data()) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn transforms_map_computational_states_onto_ghz_basis() {
        // U_CH |1 j> = |Psi_j^->, U_CF |1 j> = |Psi_jbar^->.
        let n = 3;
        for j in 0..4u64 {
            let g = crate::bipartition::GhzIndex::new(n, j).unwrap();
            let one_j = basis_bit(n, 1) | g.zero_branch();
            let ch = apply_transform_dense(TransformKind::Ch, &basis_state(n, one_j)).unwrap();
            let psi = generalized_ghz_vector(j, Sign::Minus, n).unwrap();
            assert_abs_diff_eq!(ch.expectation(&psi), 1.0, epsilon = 1e-14);
            let cf = apply_transform_dense(TransformKind::Cf, &basis_state(n, one_j)).unwrap();
            let psi_bar = generalized_ghz_vector(u64::from(g.bar().j()), Sign::Minus, n).unwrap();
            assert_abs_diff_eq!(cf.expectation(&psi_bar), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn maximally_mixed_is_invariant() {
        let mm = dense_thermal(&pol(&[0.0; 4])).unwrap();
        for kind in TransformKind::ALL {
            let out = apply_transform_dense(kind, &mm).unwrap();
            for (a, b) in out.data().iter().zip(mm.data()) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-16);
            }
        }
    }

    #[test]
    fn unitarity_preserves_spectrum() {
        let rho = dense_thermal(&pol(&[0.7, -0.4, 1.1])).unwrap();
        let before = rho.eigenvalues().unwrap();
        for kind in TransformKind::ALL {
            let after = apply_transform_dense(kind, &rho).unwrap();
            assert_abs_diff_eq!(after.trace(), 1.0, epsilon = 1e-14);
            for (a, b) in after.eigenvalues().unwrap().iter().zip(&before) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn partial_transpose_examples() {
        let diag = dense_thermal(&pol(&[0.2, 0.9, -0.5])).unwrap();
        for b in Bipartition::all(3).unwrap() {
            assert_eq!(partial_transpose_dense(&diag, &b).unwrap(), diag);
        }
        let rho = dense_transformed_thermal(TransformKind::Cf, &pol(&[0.2, 0.9, -0.5])).unwrap();
        for b in Bipartition::all(3).unwrap() {
            let pt = partial_transpose_dense(&rho, &b).unwrap();
            assert_eq!(pt.trace(), rho.trace());
            assert_eq!(partial_transpose_dense(&pt, &b).unwrap(), rho);
        }
        let bell = projector(&generalized_ghz_vector(0, Sign::Plus, 2).unwrap());
        let pt = partial_transpose_dense(&bell, &Bipartition::new(2, 1).unwrap()).unwrap();
        let ev = pt.eigenvalues().unwrap();
        for (a, b) in ev.iter().zip([-0.5, 0.5, 0.5, 0.5]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        assert!(partial_transpose_dense(&bell, &Bipartition::new(3, 1).unwrap()).is_err());
    }

    #[test]
    fn min_eigenvalue_examples() {
        let rho = dense_transformed_thermal(TransformKind::Ch, &pol(&[0.8, -0.3, 0.5])).unwrap();
        assert!(min_eigenvalue(&rho).unwrap() >= -POSITIVITY_TOL);
        let b = Bipartition::new(2, 1).unwrap();
        let ch = dense_transformed_thermal(TransformKind::Ch, &pol(&[1.0, 1.0])).unwrap();
        let min = min_eigenvalue(&partial_transpose_dense(&ch, &b).unwrap()).unwrap();
        assert_abs_diff_eq!(min, -0.27580, epsilon = 5e-6);
        let cf = dense_transformed_thermal(TransformKind::Cf, &pol(&[0.3, 0.3])).unwrap();
        assert!(min_eigenvalue(&partial_transpose_dense(&cf, &b).unwrap()).unwrap() >= 0.0);
    }

    #[test]
    fn construction_checks() {
        assert!(DenseDensityMatrix::from_square(vec![0.5, 0.1, 0.2, 0.5]).is_err());
        assert!(DenseDensityMatrix::from_square(vec![0.6, 0.0, 0.0, 0.6]).is_err());
        assert!(DenseDensityMatrix::from_square(vec![1.0; 3]).is_err());
        assert!(dense_thermal(&PolarizationVector::uniform(13, 0.1).unwrap()).is_err());
        let not_psd = DenseDensityMatrix::from_square(vec![1.5, 0.0, 0.0, -0.5]).unwrap();
        assert!(matches!(not_psd.check_positive(), Err(Error::NotDensityMatrix(_))));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let rho = dense_transformed_thermal(TransformKind::Cf, &pol(&[0.123456789, -1e-7, 3.3])).unwrap();
        let mut buf = Vec::new();
        rho.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 8);
        assert!(text.lines().all(|l| l.split(',').count() == 8));
        let back = DenseDensityMatrix::read_csv(&buf[..]).unwrap();
        assert_eq!(back, rho);
        assert!(DenseDensityMatrix::read_csv("0.5,0.5\n0.5".as_bytes()).is_err());
        assert!(DenseDensityMatrix::read_csv("0.5,x\n0,0.5".as_bytes()).is_err());
    }
}
