//! The Hermitian sextic QES potential `V(x) = x^6 - (4J - 1)x^2`.
//!
//! Even solutions `exp(-x^4/4) sum_k c_k x^{2k}` truncate when
//! `4(J-k) c_{k-1} + E c_k + 2(k+1)(2k+1) c_{k+1} = 0` with `c_{-1} = c_J = 0`,
//! i.e. `(T + E) c = 0` for a tridiagonal `T`.

use crate::error::{QesError, Result};
use crate::linalg::Matrix;
use crate::ratpoly::{rat, Bound, Poly, Rational, SturmChain};
use crate::qescore::split_roots;

use num_traits::Zero;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SexticSpec {
    j: u32,
}

impl SexticSpec {
    pub fn new(j: u32) -> Result<Self> {
        if j == 0 {
            return Err(QesError::InvalidParameter("J must be >= 1".into()));
        }
        Ok(SexticSpec { j })
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    /// Coefficient of `x^2` in the potential, `-(4J - 1)`.
    pub fn quadratic_coupling(&self) -> f64 {
        -(4.0 * self.j as f64 - 1.0)
    }
}

/// The recursion matrix `T`; energies are the eigenvalues of `-T`.
pub fn sextic_operator(spec: SexticSpec) -> Matrix<Rational> {
    let j = spec.j as i64;
    Matrix::from_fn(spec.j as usize, |row, col| {
        let k = row as i64;
        match col as i64 - k {
            -1 => rat(4 * (j - k)),
            1 => rat(2 * (k + 1) * (2 * k + 1)),
            _ => Rational::zero(),
        }
    })
}

/// `det(E I + T)`.
pub fn sextic_char_poly(spec: SexticSpec) -> Poly {
    let neg = sextic_operator(spec).map(|x| -x);
    Poly::new(neg.hessenberg_char_poly())
}

/// The `J` even-parity QES energies, ascending, after certifying that every
/// root of the characteristic polynomial is real.
pub fn sextic_eigenvalues(spec: SexticSpec, tol: f64) -> Result<Vec<f64>> {
    let p = sextic_char_poly(spec);
    let chain = SturmChain::new(&p)?;
    let distinct = chain.count(&Bound::NegInf, &Bound::PosInf)?;
    let sf_degree = chain.head().degree().unwrap_or(0);
    if distinct != sf_degree {
        return Err(QesError::RealnessCertification(format!(
            "sextic J={}: {distinct} real roots of {sf_degree}",
            spec.j
        )));
    }
    let (real, pairs, _) = split_roots(&p, tol)?;
    if !pairs.is_empty() || real.len() != spec.j as usize {
        return Err(QesError::RealnessCertification(format!(
            "sextic J={}: complex roots present",
            spec.j
        )));
    }
    Ok(real)
}
