//! Integer polynomials and integer lifts of GF(2^k)[t].
//!
//! `IntPoly` carries characteristic-0 models (integer coefficients only) so
//! they can be reduced mod p. `LiftPoly` lifts GF(2^k)[t] to
//! (Z/2^64)[w]/(m)[t], with `m` the monic integer lift of the field modulus;
//! since 2 divides 2^64, reduction mod 2 from there is a ring map, which lets
//! characteristic-free formulas be checked against characteristic-2 ones.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::field::{Fe, Field};
use crate::poly::{Ring, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> IntPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(cs: &[i64]) -> IntPoly {
        IntPoly::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficientwise reduction into a field of characteristic p.
    pub fn reduce(&self, field: &Field) -> UniPoly {
        let p = BigInt::from(field.characteristic());
        UniPoly::new(
            field,
            self.coeffs
                .iter()
                .map(|c| {
                    let r = c.mod_floor(&p);
                    field.from_int(r.to_i64().expect("residue fits"))
                })
                .collect(),
        )
    }

    pub fn format(&self, var: &str) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => c.to_string(),
                1 => format!("{c}*{var}"),
                _ => format!("{c}*{var}^{i}"),
            });
        }
        parts.join(" + ")
    }
}

impl Ring for IntPoly {
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }
    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return IntPoly::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
    fn constant(&self, n: i64) -> Self {
        IntPoly::from_i64(&[n])
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// An element of (Z/2^64)[w]/(m)[t].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftPoly {
    /// Lifted modulus tail: w^k = -(m_0 + m_1 w + ... + m_{k-1} w^{k-1}).
    modulus: Arc<Vec<u64>>,
    coeffs: Vec<Vec<u64>>,
}

impl LiftPoly {
    /// Lift with digits in {0, ..., p-1}. Only characteristic 2 fields are
    /// supported, because reduction from Z/2^64 is only defined mod 2.
    pub fn lift(f: &UniPoly) -> LiftPoly {
        let field = f.field();
        assert_eq!(field.characteristic(), 2, "lifts are only defined for characteristic 2");
        let k = field.degree() as usize;
        let modulus = Arc::new(field.modulus()[..k].iter().map(|&c| c as u64).collect());
        let coeffs = f
            .coeffs()
            .iter()
            .map(|&c| field.coeffs(c).iter().map(|&d| d as u64).collect())
            .collect();
        LiftPoly::normalized(modulus, coeffs)
    }

    fn normalized(modulus: Arc<Vec<u64>>, mut coeffs: Vec<Vec<u64>>) -> LiftPoly {
        while coeffs.last().is_some_and(|c| c.iter().all(|&x| x == 0)) {
            coeffs.pop();
        }
        LiftPoly { modulus, coeffs }
    }

    fn k(&self) -> usize {
        self.modulus.len()
    }

    fn zero_coeff(&self) -> Vec<u64> {
        vec![0; self.k()]
    }

    fn coeff(&self, j: usize) -> Vec<u64> {
        self.coeffs.get(j).cloned().unwrap_or_else(|| self.zero_coeff())
    }

    fn mul_coeff(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let k = self.k();
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = prod[i + j].wrapping_add(x.wrapping_mul(y));
            }
        }
        for deg in (k..prod.len()).rev() {
            let top = prod[deg];
            if top == 0 {
                continue;
            }
            prod[deg] = 0;
            for (j, &m) in self.modulus.iter().enumerate() {
                let idx = deg - k + j;
                prod[idx] = prod[idx].wrapping_sub(top.wrapping_mul(m));
            }
        }
        prod.truncate(k);
        prod
    }

    /// Reduce mod 2 into GF(2^k)[t].
    pub fn reduce(&self, field: &Field) -> UniPoly {
        assert_eq!(field.characteristic(), 2);
        UniPoly::new(
            field,
            self.coeffs
                .iter()
                .map(|c| {
                    let ds: Vec<u32> = c.iter().map(|&x| (x & 1) as u32).collect();
                    field.from_coeffs(&ds).unwrap_or(Fe::ZERO)
                })
                .collect(),
        )
    }
}

impl Ring for LiftPoly {
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let (a, b) = (self.coeff(i), other.coeff(i));
                a.iter().zip(&b).map(|(x, y)| x.wrapping_add(*y)).collect()
            })
            .collect();
        LiftPoly::normalized(self.modulus.clone(), coeffs)
    }
    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let (a, b) = (self.coeff(i), other.coeff(i));
                a.iter().zip(&b).map(|(x, y)| x.wrapping_sub(*y)).collect()
            })
            .collect();
        LiftPoly::normalized(self.modulus.clone(), coeffs)
    }
    fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return LiftPoly::normalized(self.modulus.clone(), Vec::new());
        }
        let mut out = vec![self.zero_coeff(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                let p = self.mul_coeff(a, b);
                for (slot, v) in out[i + j].iter_mut().zip(p) {
                    *slot = slot.wrapping_add(v);
                }
            }
        }
        LiftPoly::normalized(self.modulus.clone(), out)
    }
    fn constant(&self, n: i64) -> Self {
        let mut c = self.zero_coeff();
        c[0] = n as u64;
        LiftPoly::normalized(self.modulus.clone(), vec![c])
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}
