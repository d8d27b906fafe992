//! Exact arithmetic in cyclotomic fields Q(ζ_n): residue classes of Q[x]
//! modulo the n-th cyclotomic polynomial.

use super::int::{Int, Rat};
use super::poly::{cyclotomic, QPoly};
use num_integer::Integer;
use num_traits::{One, Zero};

/// The field Q(ζ_n).
#[derive(Clone, Debug)]
pub struct CycField {
    pub n: u64,
    pub phi: QPoly,
    pub degree: usize,
}

impl CycField {
    pub fn new(n: u64) -> Self {
        let phi = cyclotomic(n);
        let degree = phi.degree();
        CycField { n, phi, degree }
    }

    pub fn zero(&self) -> CycRat {
        CycRat(QPoly::zero())
    }
    pub fn one(&self) -> CycRat {
        CycRat(QPoly::one())
    }
    pub fn zeta(&self) -> CycRat {
        self.reduce(QPoly::x())
    }
    pub fn from_rat(&self, r: Rat) -> CycRat {
        CycRat(QPoly::constant(r))
    }
    pub fn reduce(&self, p: QPoly) -> CycRat {
        CycRat(p.rem(&self.phi))
    }
    pub fn add(&self, a: &CycRat, b: &CycRat) -> CycRat {
        CycRat(a.0.add(&b.0))
    }
    pub fn sub(&self, a: &CycRat, b: &CycRat) -> CycRat {
        CycRat(a.0.sub(&b.0))
    }
    pub fn mul(&self, a: &CycRat, b: &CycRat) -> CycRat {
        self.reduce(a.0.mul(&b.0))
    }
    pub fn inv(&self, a: &CycRat) -> Option<CycRat> {
        if a.0.is_zero() {
            return None;
        }
        let (g, s, _) = a.0.xgcd(&self.phi);
        if g.is_zero() || g.degree() != 0 {
            return None; // cannot happen: phi irreducible
        }
        Some(self.reduce(s))
    }
    pub fn pow(&self, a: &CycRat, e: i64) -> CycRat {
        if e < 0 {
            let inv = self.inv(a).expect("pow of zero");
            return self.pow(&inv, -e);
        }
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Galois automorphism ζ -> ζ^j (j coprime to n).
    pub fn galois(&self, a: &CycRat, j: u64) -> CycRat {
        assert!(Int::from(j).gcd(&Int::from(self.n)).is_one());
        let mut acc = self.zero();
        let zj = self.pow(&self.zeta(), j as i64);
        for (i, c) in a.0 .0.iter().enumerate() {
            let term = self.mul(&self.pow(&zj, i as i64), &self.from_rat(c.clone()));
            acc = self.add(&acc, &term);
        }
        acc
    }

    pub fn norm(&self, a: &CycRat) -> Rat {
        // Res(phi, a) up to sign of lc (phi monic)
        if a.0.is_zero() {
            return Rat::zero();
        }
        self.phi.resultant(&a.0)
    }

    /// Trace to Q: the sum of the Galois conjugates, which reduces to a
    /// rational constant.
    pub fn trace(&self, a: &CycRat) -> Rat {
        let mut acc = self.zero();
        for j in 1..=self.n {
            if Int::from(j).gcd(&Int::from(self.n)).is_one() {
                acc = self.add(&acc, &self.galois(a, j));
            }
        }
        assert!(acc.0.is_zero() || acc.0.degree() == 0, "trace not rational");
        acc.0.coeff(0)
    }
}

/// Element of Q(ζ_n), reduced mod Φ_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycRat(pub QPoly);

impl CycRat {
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    pub fn is_one(&self) -> bool {
        !self.0.is_zero() && self.0.degree() == 0 && self.0.coeff(0).is_one()
    }
    pub fn is_rational(&self) -> Option<Rat> {
        if self.0.is_zero() {
            Some(Rat::zero())
        } else if self.0.degree() == 0 {
            Some(self.0.coeff(0))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int::rat;

    #[test]
    fn q_i_arithmetic() {
        let f = CycField::new(4); // Q(i)
        let i = f.zeta();
        let m1 = f.mul(&i, &i);
        assert_eq!(m1.is_rational(), Some(rat(-1, 1)));
        let inv = f.inv(&i).unwrap();
        assert_eq!(f.mul(&i, &inv).is_rational(), Some(rat(1, 1)));
        assert_eq!(f.norm(&f.add(&i, &f.one())), rat(2, 1)); // N(1+i)=2
        assert_eq!(f.trace(&i), rat(0, 1));
        assert_eq!(f.trace(&f.one()), rat(2, 1));
    }

    #[test]
    fn zeta12_conjugation() {
        let f = CycField::new(12);
        let z = f.zeta();
        let c = f.galois(&z, 5);
        assert_eq!(c, f.pow(&z, 5));
        // norm of 1 - ζ12 is Φ12(1) = 1
        let one_minus = f.sub(&f.one(), &z);
        assert_eq!(f.norm(&one_minus), rat(1, 1));
    }
}
