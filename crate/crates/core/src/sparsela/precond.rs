use super::csr::CsrMatrix;
use crate::real::Real;

pub trait Preconditioner<T> {
    /// `z = P^{-1} r`
    fn apply(&self, r: &[T], z: &mut [T]);
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityPreconditioner;

impl<T: Real> Preconditioner<T> for IdentityPreconditioner {
    fn apply(&self, r: &[T], z: &mut [T]) {
        z.copy_from_slice(r);
    }
}

#[derive(Debug, Clone)]
pub struct Jacobi<T> {
    inv_diag: Vec<T>,
}

impl<T: Real> Jacobi<T> {
    /// Zero diagonal entries fall back to the identity.
    pub fn new(a: &CsrMatrix<T>) -> Self {
        let inv_diag = a
            .diagonal()
            .into_iter()
            .map(|d| if d == T::zero() { T::one() } else { T::one() / d })
            .collect();
        Self { inv_diag }
    }
}

impl<T: Real> Preconditioner<T> for Jacobi<T> {
    fn apply(&self, r: &[T], z: &mut [T]) {
        for ((zi, &ri), &d) in z.iter_mut().zip(r).zip(&self.inv_diag) {
            *zi = ri * d;
        }
    }
}

/// Incomplete LU factorization with zero fill-in.
///
/// `L` (unit diagonal) and `U` share the pattern of the input matrix. For a
/// symmetric matrix the factorization is `L D L^T`, so the preconditioner is
/// symmetric and usable inside CG.
#[derive(Debug, Clone)]
pub struct Ilu0<T> {
    lu: CsrMatrix<T>,
    diag_pos: Vec<usize>,
}

impl<T: Real> Ilu0<T> {
    pub fn new(a: &CsrMatrix<T>) -> Self {
        let n = a.nrows();
        let mut lu = a.clone();
        let rp = lu.row_ptr().to_vec();
        let ci = lu.col_idx().to_vec();
        let diag_pos: Vec<usize> = (0..n)
            .map(|i| lu.find(i, i).expect("ILU(0) needs a stored diagonal"))
            .collect();
        let tiny = T::epsilon() * a.max_abs();
        let vals = lu.values_mut();
        // row-wise IKJ variant
        let mut pos_in_row = vec![usize::MAX; n];
        for i in 0..n {
            for k in rp[i]..rp[i + 1] {
                pos_in_row[ci[k]] = k;
            }
            for kk in rp[i]..rp[i + 1] {
                let k = ci[kk];
                if k >= i {
                    break;
                }
                let mut pivot = vals[diag_pos[k]];
                if pivot.abs() <= tiny {
                    pivot = if pivot < T::zero() { -tiny } else { tiny };
                }
                let lik = vals[kk] / pivot;
                vals[kk] = lik;
                for kj in (diag_pos[k] + 1)..rp[k + 1] {
                    let p = pos_in_row[ci[kj]];
                    if p != usize::MAX {
                        vals[p] -= lik * vals[kj];
                    }
                }
            }
            for k in rp[i]..rp[i + 1] {
                pos_in_row[ci[k]] = usize::MAX;
            }
            if vals[diag_pos[i]].abs() <= tiny {
                vals[diag_pos[i]] = if vals[diag_pos[i]] < T::zero() { -tiny } else { tiny };
            }
        }
        Self { lu, diag_pos }
    }
}

impl<T: Real> Preconditioner<T> for Ilu0<T> {
    fn apply(&self, r: &[T], z: &mut [T]) {
        let rp = self.lu.row_ptr();
        let ci = self.lu.col_idx();
        let v = self.lu.values();
        let n = r.len();
        for i in 0..n {
            let mut s = r[i];
            for k in rp[i]..self.diag_pos[i] {
                s -= v[k] * z[ci[k]];
            }
            z[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = z[i];
            for k in (self.diag_pos[i] + 1)..rp[i + 1] {
                s -= v[k] * z[ci[k]];
            }
            z[i] = s / v[self.diag_pos[i]];
        }
    }
}

/// Preconditioner choice, as exposed in run configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PreconditionerKind {
    None,
    #[default]
    Jacobi,
    Ilu0,
}

impl PreconditionerKind {
    pub fn build<T: Real>(self, a: &CsrMatrix<T>) -> Box<dyn Preconditioner<T> + Send + Sync> {
        match self {
            PreconditionerKind::None => Box::new(IdentityPreconditioner),
            PreconditionerKind::Jacobi => Box::new(Jacobi::new(a)),
            PreconditionerKind::Ilu0 => Box::new(Ilu0::new(a)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PreconditionerKind::None => "none",
            PreconditionerKind::Jacobi => "jacobi",
            PreconditionerKind::Ilu0 => "ilu0",
        }
    }
}

impl std::str::FromStr for PreconditionerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Self::None),
            "jacobi" => Ok(Self::Jacobi),
            "ilu0" => Ok(Self::Ilu0),
            other => Err(format!("unknown preconditioner '{other}' (none|jacobi|ilu0)")),
        }
    }
}
