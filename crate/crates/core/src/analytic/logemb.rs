//! The G-equivariant logarithmic embedding ℓ_K and regulators.
//!
//! Coordinates use v_∞(z) = −ln(z z̄) (squared-modulus convention): this is
//! twice the classical −ln|z|. For a totally imaginary field, the classical
//! regulator row at a complex place carries the factor 2, so for the rank-1
//! quartic fields here the regulator equals |v_∞(u)| on the nose; that is
//! the whole factor-of-2 reconciliation.

use crate::ball::{BallComplex, RealBall};
use crate::error::{Error, Result};

/// Image of an element under ℓ_K: one coordinate per Galois conjugate, in a
/// fixed caller-chosen order of the group elements.
#[derive(Clone, Debug)]
pub struct LogVector {
    pub coords: Vec<RealBall>,
}

impl LogVector {
    pub fn add(&self, o: &LogVector) -> LogVector {
        LogVector {
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }
    pub fn sub(&self, o: &LogVector) -> LogVector {
        LogVector {
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }
    pub fn scale_i64(&self, k: i64) -> LogVector {
        LogVector {
            coords: self.coords.iter().map(|a| a.mul_i64(k)).collect(),
        }
    }
    pub fn sum(&self) -> RealBall {
        let prec = self.coords[0].prec();
        let mut s = RealBall::zero(prec);
        for c in &self.coords {
            s = s.add(c);
        }
        s
    }
    /// Certified max |coordinate| upper bound.
    pub fn max_abs_upper(&self) -> f64 {
        self.coords
            .iter()
            .map(|c| c.abs_upper().to_f64())
            .fold(0.0, f64::max)
    }
}

/// ℓ_K of an element given its full tuple of conjugate embeddings:
/// coords[σ] = v_∞(x^σ) = −ln(x^σ · conj(x^σ)).
pub fn log_embedding(conjugates: &[BallComplex]) -> Result<LogVector> {
    let mut coords = vec![];
    for z in conjugates {
        let ln = z
            .ln_norm()
            .ok_or_else(|| Error::Precondition("embedding ball contains zero".into()))?;
        coords.push(ln.neg());
    }
    Ok(LogVector { coords })
}

/// Classical regulator of a rank-1 totally imaginary field from a
/// fundamental unit's conjugate tuple: |v_∞(u)| at one chosen place (the
/// complex-place factor 2 is already inside v_∞; see the module note).
pub fn regulator_rank1(unit_conjugates: &[BallComplex]) -> Result<RealBall> {
    let lv = log_embedding(unit_conjugates)?;
    Ok(lv.coords[0].abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int::rat;

    #[test]
    fn roots_of_unity_map_to_zero() {
        let p = 160;
        let z = BallComplex::e2pi(p, &rat(1, 12));
        let lv = log_embedding(&[z.clone(), z.powi(5)]).unwrap();
        for c in &lv.coords {
            assert!(c.certainly_below_pow2(-100));
        }
    }

    #[test]
    fn additivity() {
        let p = 160;
        let a = BallComplex::new(
            RealBall::from_rat(p, &rat(3, 2)),
            RealBall::from_rat(p, &rat(1, 3)),
        );
        let b = BallComplex::new(
            RealBall::from_rat(p, &rat(-2, 5)),
            RealBall::from_rat(p, &rat(7, 4)),
        );
        let lab = log_embedding(&[a.mul(&b)]).unwrap();
        let la = log_embedding(&[a]).unwrap();
        let lb = log_embedding(&[b]).unwrap();
        let diff = lab.coords[0].sub(&la.coords[0].add(&lb.coords[0]));
        assert!(diff.contains_rat(&rat(0, 1)));
        assert!(diff.abs_upper().to_f64() < 1e-40);
    }
}
