use super::LindbladModel;
use crate::linalg::{self, c, CMat, CVec, I};

/// Linear map on vectorized `N×N` operators.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    pub matrix: CMat,
}

impl Superoperator {
    pub fn identity(dim: usize) -> Self {
        Superoperator { matrix: linalg::identity(dim * dim) }
    }

    /// `ρ ↦ UρU†`.
    pub fn conjugation(u: &CMat) -> Self {
        Superoperator { matrix: linalg::kron(&u.conjugate(), u) }
    }

    /// Underlying operator dimension `N`.
    pub fn dim(&self) -> usize {
        (self.matrix.nrows() as f64).sqrt().round() as usize
    }

    pub fn apply(&self, rho: &CMat) -> CMat {
        unvec(&(&self.matrix * vec(rho)), rho.nrows())
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Superoperator) -> Superoperator {
        Superoperator { matrix: &self.matrix * &first.matrix }
    }

    pub fn pow(&self, k: usize) -> Superoperator {
        let mut result = Superoperator::identity(self.dim());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.after(&base);
            }
            base = base.after(&base);
            e >>= 1;
        }
        result
    }

    pub fn exp(&self, t: f64) -> Superoperator {
        Superoperator { matrix: (&self.matrix * c(t)).exp() }
    }

    /// Row vector `⟨⟨I|`, so `⟨⟨I|vec(ρ)⟩⟩ = Tr ρ`.
    pub fn trace_row(dim: usize) -> CVec {
        let mut row = CVec::zeros(dim * dim);
        for i in 0..dim {
            row[i * dim + i] = linalg::ONE;
        }
        row
    }

    /// Deviation of `⟨⟨I|M` from `0` (generators) or from `⟨⟨I|` (channels).
    pub fn trace_defect(&self, generator: bool) -> f64 {
        let dim = self.dim();
        let row = Self::trace_row(dim);
        let image = self.matrix.transpose() * &row;
        let expected = if generator { CVec::zeros(dim * dim) } else { row };
        (image - expected).iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

pub(crate) fn vec(m: &CMat) -> CVec {
    CVec::from_column_slice(m.as_slice())
}

pub(crate) fn unvec(v: &CVec, dim: usize) -> CMat {
    CMat::from_column_slice(dim, dim, v.as_slice())
}

fn spre(a: &CMat) -> CMat {
    linalg::kron(&linalg::identity(a.nrows()), a)
}

fn spost(b: &CMat) -> CMat {
    linalg::kron(&b.transpose(), &linalg::identity(b.nrows()))
}

fn dissipator_matrix(l: &CMat, rate: f64) -> CMat {
    let ldl = l.adjoint() * l;
    (linalg::kron(&l.conjugate(), l) * c(2.0) - spre(&ldl) - spost(&ldl)) * c(rate)
}

/// Generator at time `t`, with control amplitudes evaluated at `t`.
pub fn build_liouvillian(model: &LindbladModel, t: f64) -> Superoperator {
    let dim = model.dim();
    let h = model.hamiltonian(t);
    let mut relax = CMat::zeros(dim * dim, dim * dim);
    for d in &model.dissipators {
        if d.rate > 0.0 {
            relax += dissipator_matrix(&d.op, d.rate);
        }
    }
    let mut gen = (spre(&h) - spost(&h)) * (-I) + &relax;
    if let Some(eq) = &model.equilibrium {
        let source = &relax * vec(eq.matrix());
        gen -= source * Superoperator::trace_row(dim).transpose();
    }
    Superoperator { matrix: gen }
}
