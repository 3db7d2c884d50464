//! Density-matrix word meanings: ambiguity as a sum of readings, and
//! hyponymy as containment of supports.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;
use thiserror::Error;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
pub const SUPPORT_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum DensityError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no states to mix")]
    Empty,
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix has negative eigenvalue {0:e}")]
    NotPositive(f64),
    #[error("weight {0} is negative or not finite")]
    BadWeight(f64),
}

/// Hermitian positive semidefinite matrix; the trace is left free.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self, DensityError> {
        if !matrix.is_square() {
            return Err(DensityError::NotSquare);
        }
        let dev = (&matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if dev > HERMITIAN_TOL {
            return Err(DensityError::NotHermitian(dev));
        }
        let rho = Self { matrix };
        let min = rho.eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(DensityError::NotPositive(min));
        }
        Ok(rho)
    }

    /// `|v⟩⟨v|`.
    pub fn pure(v: &DVector<C64>) -> Self {
        Self { matrix: v * v.adjoint() }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    fn eigen(&self) -> SymmetricEigen<C64, nalgebra::Dyn> {
        SymmetricEigen::new(self.matrix.clone())
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigen().eigenvalues.iter().copied().collect()
    }

    /// Number of eigenvalues above [`SUPPORT_TOL`].
    pub fn rank(&self) -> usize {
        self.eigenvalues().iter().filter(|&&l| l > SUPPORT_TOL).count()
    }

    /// Orthogonal projector onto the span of eigenvectors with eigenvalue
    /// above [`SUPPORT_TOL`].
    pub fn support_projector(&self) -> DMatrix<C64> {
        let e = self.eigen();
        let n = self.dim();
        let mut p = DMatrix::zeros(n, n);
        for (i, &l) in e.eigenvalues.iter().enumerate() {
            if l > SUPPORT_TOL {
                let v = e.eigenvectors.column(i);
                p += v * v.adjoint();
            }
        }
        p
    }
}

/// `Σ wᵢ |vᵢ⟩⟨vᵢ|`, all weights 1 when omitted.
pub fn mix_meanings(states: &[DVector<C64>], weights: Option<&[f64]>) -> Result<DensityMatrix, DensityError> {
    let first = states.first().ok_or(DensityError::Empty)?;
    let n = first.len();
    if let Some(w) = weights {
        if w.len() != states.len() {
            return Err(DensityError::DimensionMismatch {
                expected: states.len(),
                found: w.len(),
            });
        }
        if let Some(&x) = w.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(DensityError::BadWeight(x));
        }
    }
    let mut m = DMatrix::zeros(n, n);
    for (i, v) in states.iter().enumerate() {
        if v.len() != n {
            return Err(DensityError::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        let w = weights.map_or(1.0, |w| w[i]);
        m += v * v.adjoint() * C64::new(w, 0.0);
    }
    Ok(DensityMatrix { matrix: m })
}

/// Whether the support of `a` lies inside the support of `b`: the part of
/// `a` outside `b`'s support, `(1 − P_b) a (1 − P_b)`, vanishes.
pub fn is_hyponym(a: &DensityMatrix, b: &DensityMatrix) -> Result<bool, DensityError> {
    if a.dim() != b.dim() {
        return Err(DensityError::DimensionMismatch {
            expected: b.dim(),
            found: a.dim(),
        });
    }
    let n = b.dim();
    let outside = DMatrix::<C64>::identity(n, n) - b.support_projector();
    let residual = &outside * a.matrix() * &outside;
    Ok(residual.norm() <= SUPPORT_TOL)
}

/// Standard basis vector `|i⟩` in dimension `n`.
pub fn ket(i: usize, n: usize) -> DVector<C64> {
    let mut v = DVector::zeros(n);
    v[i] = C64::new(1.0, 0.0);
    v
}

/// `(|0⟩ ± |1⟩)/√2` in dimension `n`.
pub fn plus_minus(sign: f64, n: usize) -> DVector<C64> {
    (ket(0, n) + ket(1, n) * C64::new(sign, 0.0)) * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)
}

/// The animal hierarchy in a four-dimensional space, specific to general.
pub fn animal_hierarchy() -> Vec<(&'static str, DensityMatrix)> {
    let n = 4;
    let span = |k: usize| mix_meanings(&(0..k).map(|i| ket(i, n)).collect::<Vec<_>>(), None).unwrap();
    vec![
        ("lion", DensityMatrix::pure(&ket(0, n))),
        ("tiger", DensityMatrix::pure(&plus_minus(1.0, n))),
        ("cheetah", DensityMatrix::pure(&plus_minus(-1.0, n))),
        ("big cat", span(2)),
        ("mammal", span(3)),
        ("vertebrate", span(4)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_state_is_its_projector() {
        let rho = mix_meanings(&[ket(0, 2)], None).unwrap();
        assert_eq!(rho.matrix(), &DensityMatrix::pure(&ket(0, 2)).matrix().clone());
        assert_eq!(rho.rank(), 1);
    }

    #[test]
    fn three_readings_in_two_dimensions() {
        let states = [ket(0, 2), plus_minus(1.0, 2), plus_minus(-1.0, 2)];
        let rho = mix_meanings(&states, None).unwrap();
        // |0⟩⟨0| + |+⟩⟨+| + |−⟩⟨−| = 2|0⟩⟨0| + |1⟩⟨1|
        let expected = DMatrix::from_diagonal(&DVector::from_vec(vec![C64::new(2.0, 0.0), C64::new(1.0, 0.0)]));
        assert!((rho.matrix() - expected).norm() < 1e-15);
        assert_eq!(rho.rank(), 2);
    }

    #[test]
    fn errors() {
        assert_eq!(mix_meanings(&[], None), Err(DensityError::Empty));
        assert!(matches!(
            mix_meanings(&[ket(0, 2), ket(0, 3)], None),
            Err(DensityError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            mix_meanings(&[ket(0, 2)], Some(&[1.0, 2.0])),
            Err(DensityError::DimensionMismatch { .. })
        ));
        assert_eq!(mix_meanings(&[ket(0, 2)], Some(&[-1.0])), Err(DensityError::BadWeight(-1.0)));
        let a = DensityMatrix::pure(&ket(0, 2));
        let b = DensityMatrix::pure(&ket(0, 3));
        assert!(matches!(is_hyponym(&a, &b), Err(DensityError::DimensionMismatch { .. })));
        let neg = DMatrix::from_diagonal(&DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]));
        assert!(matches!(DensityMatrix::new(neg), Err(DensityError::NotPositive(_))));
        let skew = DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, 1.0), C64::new(1.0, 0.0)],
        );
        assert!(matches!(DensityMatrix::new(skew), Err(DensityError::NotHermitian(_))));
    }

    #[test]
    fn weights_scale_readings() {
        let rho = mix_meanings(&[ket(0, 2), ket(1, 2)], Some(&[0.25, 0.75])).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-15);
        let mut e = rho.eigenvalues();
        e.sort_by(f64::total_cmp);
        assert!((e[0] - 0.25).abs() < 1e-12 && (e[1] - 0.75).abs() < 1e-12);
    }
}
