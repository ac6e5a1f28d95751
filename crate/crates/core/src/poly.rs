//! Univariate polynomials over an exact field.
//!
//! Eigenvalue statements in this crate are phrased as polynomial
//! identities, so no algebraic closure is ever constructed.

use crate::field::{Field, Rat};
use std::fmt;

/// Coefficients ascending by degree, normalized (no trailing zeros).
#[derive(Clone, PartialEq)]
pub struct Poly<K: Field> {
    ctx: K::Ctx,
    coeffs: Vec<K>,
}

impl<K: Field> Poly<K> {
    pub fn from_coeffs(ctx: K::Ctx, mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { ctx, coeffs }
    }

    pub fn from_i64(ctx: K::Ctx, coeffs: &[i64]) -> Self {
        Self::from_coeffs(ctx, coeffs.iter().map(|&c| K::from_i64(ctx, c)).collect())
    }

    pub fn zero(ctx: K::Ctx) -> Self {
        Poly {
            ctx,
            coeffs: vec![],
        }
    }

    pub fn constant(ctx: K::Ctx, c: K) -> Self {
        Self::from_coeffs(ctx, vec![c])
    }

    /// t^n
    pub fn monomial(ctx: K::Ctx, n: usize) -> Self {
        let mut coeffs = vec![K::zero(ctx); n + 1];
        coeffs[n] = K::one(ctx);
        Poly { ctx, coeffs }
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> K {
        self.coeffs.get(i).cloned().unwrap_or(K::zero(self.ctx))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::from_coeffs(self.ctx, (0..n).map(|i| self.coeff(i).add(&rhs.coeff(i))).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::from_coeffs(self.ctx, (0..n).map(|i| self.coeff(i).sub(&rhs.coeff(i))).collect())
    }

    pub fn scale(&self, k: &K) -> Self {
        Self::from_coeffs(self.ctx, self.coeffs.iter().map(|c| c.mul(k)).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::zero(self.ctx);
        }
        let mut out = vec![K::zero(self.ctx); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::from_coeffs(self.ctx, out)
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero(self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// (t^a - 1) / (t - 1) = 1 + t + ... + t^{a-1}
    pub fn cyclotomic_quotient(ctx: K::Ctx, a: usize) -> Self {
        Self::from_coeffs(ctx, vec![K::one(ctx); a])
    }
}

impl Poly<Rat> {
    /// Monic polynomial of degree n with prescribed power sums of its
    /// roots, via Newton's identities. Characteristic-zero only: the
    /// recurrence divides by k.
    pub fn from_power_sums(n: usize, sums: &[Rat]) -> Self {
        assert!(sums.len() >= n, "need n power sums");
        // e_0 = 1; k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i
        let mut e = vec![Rat::int(1)];
        for k in 1..=n {
            let mut acc = Rat::int(0);
            for i in 1..=k {
                let term = e[k - i].mul(&sums[i - 1]);
                if i % 2 == 1 {
                    acc = acc.add(&term);
                } else {
                    acc = acc.sub(&term);
                }
            }
            e.push(acc.mul(&Rat::frac(1, k as i64)));
        }
        // char poly = sum_{k} (-1)^k e_k t^{n-k}
        let mut coeffs = vec![Rat::int(0); n + 1];
        for (k, ek) in e.iter().enumerate() {
            let signed = if k % 2 == 0 { ek.clone() } else { ek.neg() };
            coeffs[n - k] = signed;
        }
        Self::from_coeffs((), coeffs)
    }
}

impl<K: Field> fmt::Display for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{i}")?,
            }
        }
        Ok(())
    }
}

impl<K: Field> fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let p = Poly::from_i64((), &[1, 1]); // 1 + t
        let q = Poly::from_i64((), &[-1, 1]); // -1 + t
        assert_eq!(p.mul(&q), Poly::from_i64((), &[-1, 0, 1]));
        assert_eq!(p.add(&q), Poly::from_i64((), &[0, 2]));
        assert_eq!(p.eval(&Rat::int(3)), Rat::int(4));
    }

    #[test]
    fn cyclotomic_quotient_shape() {
        assert_eq!(
            Poly::<Rat>::cyclotomic_quotient((), 3),
            Poly::from_i64((), &[1, 1, 1])
        );
    }

    #[test]
    fn newton_identities_recover_char_poly() {
        // roots {1, 2}: power sums 3, 5 -> t^2 - 3t + 2
        let p = Poly::from_power_sums(2, &[Rat::int(3), Rat::int(5)]);
        assert_eq!(p, Poly::from_i64((), &[2, -3, 1]));
    }
}
