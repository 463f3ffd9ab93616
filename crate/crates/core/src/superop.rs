//! Elementary superoperators on dense matrices.
//!
//! `D_{lk}` is the dissipator for the jump |k⟩⟨l| (population flows l → k),
//! `h_{kl}` the coherent coupling −i[|k⟩⟨l| + |l⟩⟨k|, ρ]. Both annihilate
//! the trace and preserve Hermiticity; master-equation generators are built
//! as rate-weighted sums of them.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::{C64, CMatrix};

/// D_{lk}(ρ) = |k⟩⟨l| ρ |l⟩⟨k| − ½|l⟩⟨l|ρ − ½ρ|l⟩⟨l|
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dissipator {
    pub from: usize,
    pub to: usize,
    pub dim: usize,
}

impl Dissipator {
    /// `from` is the decaying level l, `to` the receiving level k.
    pub fn new(from: usize, to: usize, dim: usize) -> Result<Self> {
        if from >= dim {
            return Err(Error::IndexOutOfRange { index: from, dim });
        }
        if to >= dim {
            return Err(Error::IndexOutOfRange { index: to, dim });
        }
        if from == to {
            return Err(Error::InvalidParameter(
                "dissipator indices must differ".into(),
            ));
        }
        Ok(Self { from, to, dim })
    }

    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        if rho.nrows() != self.dim || rho.ncols() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: rho.nrows() });
        }
        let (l, k) = (self.from, self.to);
        let mut out: CMatrix = Array2::zeros((self.dim, self.dim));
        out[[k, k]] = rho[[l, l]];
        for j in 0..self.dim {
            out[[l, j]] -= 0.5 * rho[[l, j]];
            out[[j, l]] -= 0.5 * rho[[j, l]];
        }
        Ok(out)
    }
}

/// h_{kl}(ρ) = −i[|k⟩⟨l| + |l⟩⟨k|, ρ]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoherentCoupling {
    pub k: usize,
    pub l: usize,
    pub dim: usize,
}

impl CoherentCoupling {
    pub fn new(k: usize, l: usize, dim: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::IndexOutOfRange { index: k, dim });
        }
        if l >= dim {
            return Err(Error::IndexOutOfRange { index: l, dim });
        }
        if k == l {
            return Err(Error::InvalidParameter(
                "coupling indices must differ".into(),
            ));
        }
        Ok(Self { k, l, dim })
    }

    /// The coupling operator X = |k⟩⟨l| + |l⟩⟨k|.
    pub fn operator(&self) -> CMatrix {
        let mut x: CMatrix = Array2::zeros((self.dim, self.dim));
        x[[self.k, self.l]] = C64::new(1.0, 0.0);
        x[[self.l, self.k]] = C64::new(1.0, 0.0);
        x
    }

    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        if rho.nrows() != self.dim || rho.ncols() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: rho.nrows() });
        }
        let (k, l) = (self.k, self.l);
        let minus_i = C64::new(0.0, -1.0);
        let mut out: CMatrix = Array2::zeros((self.dim, self.dim));
        // X ρ: row k picks up row l of ρ and vice versa; ρ X likewise on
        // columns.
        for j in 0..self.dim {
            out[[k, j]] += minus_i * rho[[l, j]];
            out[[l, j]] += minus_i * rho[[k, j]];
        }
        for i in 0..self.dim {
            out[[i, l]] -= minus_i * rho[[i, k]];
            out[[i, k]] -= minus_i * rho[[i, l]];
        }
        Ok(out)
    }
}
