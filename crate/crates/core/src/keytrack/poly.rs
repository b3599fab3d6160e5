use std::fmt;
use std::ops::{BitXor, BitXorAssign};

use bitvec::prelude::*;

use crate::error::{Error, Result};

pub type Bits = BitVec<u64, Lsb0>;

/// `c ⊕ a₁x₁ ⊕ … ⊕ aₘxₘ` over GF(2).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gf2Affine {
    constant: bool,
    coeffs: Bits,
}

/// The object the subprotocols evaluate.
pub type LinearPoly = Gf2Affine;

impl Gf2Affine {
    pub fn zero(m: usize) -> Self {
        Self {
            constant: false,
            coeffs: bitvec![u64, Lsb0; 0; m],
        }
    }

    pub fn constant_poly(m: usize, c: bool) -> Self {
        let mut p = Self::zero(m);
        p.constant = c;
        p
    }

    /// The bare variable `x_i`.
    pub fn variable(m: usize, i: usize) -> Self {
        let mut p = Self::zero(m);
        p.coeffs.set(i, true);
        p
    }

    pub fn new(constant: bool, coeffs: Bits) -> Self {
        Self { constant, coeffs }
    }

    pub fn from_bools(constant: bool, coeffs: &[bool]) -> Self {
        Self {
            constant,
            coeffs: coeffs.iter().copied().collect(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn constant(&self) -> bool {
        self.constant
    }

    pub fn coeffs(&self) -> &BitSlice<u64, Lsb0> {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.coeffs[i]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.not_any()
    }

    pub fn flip_constant(&mut self, b: bool) {
        self.constant ^= b;
    }

    /// `self` if `b`, else zero.
    pub fn scaled(&self, b: bool) -> Self {
        if b {
            self.clone()
        } else {
            Self::zero(self.n_vars())
        }
    }

    pub fn eval(&self, x: &BitSlice<u64, Lsb0>) -> Result<bool> {
        if x.len() != self.coeffs.len() {
            return Err(Error::LengthMismatch {
                poly: self.coeffs.len(),
                vars: x.len(),
            });
        }
        let mut acc = self.coeffs.clone();
        acc &= x;
        Ok(self.constant ^ (acc.count_ones() % 2 == 1))
    }
}

impl BitXorAssign<&Gf2Affine> for Gf2Affine {
    fn bitxor_assign(&mut self, rhs: &Gf2Affine) {
        assert_eq!(self.n_vars(), rhs.n_vars(), "variable counts differ");
        self.constant ^= rhs.constant;
        self.coeffs ^= &rhs.coeffs;
    }
}

impl BitXor<&Gf2Affine> for &Gf2Affine {
    type Output = Gf2Affine;

    fn bitxor(self, rhs: &Gf2Affine) -> Gf2Affine {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl fmt::Display for Gf2Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = self.coeffs.iter_ones().map(|i| format!("x{i}")).collect();
        if self.constant || terms.is_empty() {
            terms.insert(0, u8::from(self.constant).to_string());
        }
        f.write_str(&terms.join(" + "))
    }
}
