//! Certified arbitrary-precision ball arithmetic.
//!
//! A [`RealBall`] is a midpoint at working precision together with an error
//! radius; every operation rounds the midpoint and grows the radius so that
//! the result ball contains the exact result whenever the input balls
//! contain theirs. [`BallComplex`] keeps one ball per component; its `rad`
//! is a bound for the distance to the exact complex value.
//!
//! Comparisons are only available through certified separation
//! ([`RealBall::certainly_positive`], [`RealBall::certified_lt`], ...).

use rug::float::{Constant, Round};
use rug::ops::{AddAssignRound, DivAssignRound, MulAssignRound, SubAssignRound};
use rug::Float;
use std::cmp::Ordering;
use std::fmt;

const RAD_PREC: u32 = 32;

fn rad_zero() -> Float {
    Float::with_val(RAD_PREC, 0)
}

/// Upper bound for 1 ulp of `x` at its own precision, valid for the rounding
/// error of a correctly rounded (nearest) operation.
fn ulp_bound(x: &Float) -> Float {
    if x.is_zero() {
        // Nearest-rounding of a nonzero exact value to zero cannot happen at
        // MPFR's exponent range for our magnitudes; still return a tiny
        // nonzero bound keyed to the minimum exponent we use.
        return Float::with_val(RAD_PREC, Float::parse("1e-300000").unwrap());
    }
    let exp = x.get_exp().unwrap();
    let prec = x.prec() as i32;
    Float::with_val(RAD_PREC, Float::i_exp(1, exp - prec))
}

fn abs_up(x: &Float) -> Float {
    let mut a = Float::with_val(RAD_PREC, 0);
    a.add_assign_round(&x.clone().abs(), Round::Up);
    a
}

fn add_up(a: &Float, b: &Float) -> Float {
    let mut r = a.clone();
    r.add_assign_round(b, Round::Up);
    r
}

fn mul_up(a: &Float, b: &Float) -> Float {
    let mut r = a.clone();
    r.mul_assign_round(b, Round::Up);
    r
}

/// Arbitrary-precision real number with a certified error radius.
#[derive(Clone)]
pub struct RealBall {
    pub mid: Float,
    pub rad: Float,
}

impl fmt::Debug for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e} ± {:e}]", self.mid.to_f64(), self.rad.to_f64())
    }
}

impl fmt::Display for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:e}", self.mid, self.rad.to_f64())
    }
}

impl RealBall {
    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    pub fn exact(prec: u32, v: i64) -> Self {
        RealBall {
            mid: Float::with_val(prec, v),
            rad: rad_zero(),
        }
    }

    pub fn from_float(mid: Float) -> Self {
        RealBall {
            mid,
            rad: rad_zero(),
        }
    }

    /// From an exact rational, with the conversion roundings accounted for;
    /// the radius is zero when the conversion is exact.
    pub fn from_rational(prec: u32, num: &num_bigint::BigInt, den: &num_bigint::BigInt) -> Self {
        let (n, o1) = Float::with_val_round(
            prec,
            Float::parse(num.to_string()).unwrap(),
            Round::Nearest,
        );
        let (d, o2) = Float::with_val_round(
            prec,
            Float::parse(den.to_string()).unwrap(),
            Round::Nearest,
        );
        let mut q = n;
        let o3 = q.div_assign_round(&d, Round::Nearest);
        if o1 == std::cmp::Ordering::Equal
            && o2 == std::cmp::Ordering::Equal
            && o3 == std::cmp::Ordering::Equal
        {
            return RealBall { mid: q, rad: rad_zero() };
        }
        // three nearest-roundings: 4 ulp of the quotient is a sound bound
        let mut rad = ulp_bound(&q);
        rad = mul_up(&rad, &Float::with_val(RAD_PREC, 4));
        RealBall { mid: q, rad }
    }

    pub fn from_rat(prec: u32, r: &crate::exact::Rat) -> Self {
        Self::from_rational(prec, r.numer(), r.denom())
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact(prec, 0)
    }
    pub fn one(prec: u32) -> Self {
        Self::exact(prec, 1)
    }

    pub fn pi(prec: u32) -> Self {
        let mid = Float::with_val(prec, Constant::Pi);
        let rad = ulp_bound(&mid);
        RealBall { mid, rad }
    }

    pub fn euler_gamma(prec: u32) -> Self {
        let mid = Float::with_val(prec, Constant::Euler);
        let rad = ulp_bound(&mid);
        RealBall { mid, rad }
    }

    fn wrap(mid: Float, rad: Float) -> Self {
        let rad = add_up(&rad, &ulp_bound(&mid));
        RealBall { mid, rad }
    }

    pub fn add(&self, o: &RealBall) -> RealBall {
        let mid = Float::with_val(self.prec(), &self.mid + &o.mid);
        Self::wrap(mid, add_up(&self.rad, &o.rad))
    }
    pub fn sub(&self, o: &RealBall) -> RealBall {
        let mid = Float::with_val(self.prec(), &self.mid - &o.mid);
        Self::wrap(mid, add_up(&self.rad, &o.rad))
    }
    pub fn neg(&self) -> RealBall {
        RealBall {
            mid: -self.mid.clone(),
            rad: self.rad.clone(),
        }
    }
    pub fn mul(&self, o: &RealBall) -> RealBall {
        let mid = Float::with_val(self.prec(), &self.mid * &o.mid);
        // |a||rb| + |b||ra| + ra rb
        let mut rad = mul_up(&abs_up(&self.mid), &o.rad);
        rad = add_up(&rad, &mul_up(&abs_up(&o.mid), &self.rad));
        rad = add_up(&rad, &mul_up(&self.rad, &o.rad));
        Self::wrap(mid, rad)
    }
    pub fn mul_i64(&self, k: i64) -> RealBall {
        let mid = Float::with_val(self.prec(), &self.mid * k);
        let rad = mul_up(&self.rad, &Float::with_val(RAD_PREC, k.unsigned_abs()));
        Self::wrap(mid, rad)
    }

    /// Lower bound of |self| over the ball (can be negative if ball spans 0).
    fn abs_lower(&self) -> Float {
        let mut l = abs_up(&self.mid); // upper bound of |mid|
        // |mid| could round up; compensate by one ulp then subtract rad.
        l.sub_assign_round(&self.rad, Round::Down);
        l.sub_assign_round(&ulp_bound(&self.mid), Round::Down);
        l
    }

    pub fn recip(&self) -> Option<RealBall> {
        let lower = self.abs_lower();
        if !(lower.is_sign_positive() && !lower.is_zero()) {
            return None;
        }
        let mid = Float::with_val(self.prec(), 1u32) / &self.mid;
        // |1/x - 1/m| <= r / (|m| (|m|-r)) <= r / lower^2
        let mut denom = lower.clone();
        denom.mul_assign_round(&lower, Round::Down);
        let mut rad = self.rad.clone();
        rad.div_assign_round(&denom, Round::Up);
        Some(Self::wrap(mid, rad))
    }

    pub fn div(&self, o: &RealBall) -> Option<RealBall> {
        Some(self.mul(&o.recip()?))
    }

    pub fn abs(&self) -> RealBall {
        RealBall {
            mid: self.mid.clone().abs(),
            rad: self.rad.clone(),
        }
    }

    /// Natural log; requires the ball to be certainly positive.
    pub fn ln(&self) -> Option<RealBall> {
        let lower = self.abs_lower();
        if !self.mid.is_sign_positive() || !(lower.is_sign_positive() && !lower.is_zero()) {
            return None;
        }
        let mid = self.mid.clone().ln();
        let mut rad = self.rad.clone();
        rad.div_assign_round(&lower, Round::Up);
        Some(Self::wrap(mid, rad))
    }

    pub fn exp(&self) -> RealBall {
        let mid = self.mid.clone().exp();
        // |e^x - e^m| <= e^(m + r) * r; bound e^(m+r) <= e^m * e^r
        let mut grow = Float::with_val(RAD_PREC, &self.rad);
        grow = grow.exp();
        let mut em = abs_up(&mid);
        em.add_assign_round(&ulp_bound(&mid), Round::Up); // e^m upper
        let mut rad = mul_up(&em, &grow);
        rad = mul_up(&rad, &self.rad);
        Self::wrap(mid, rad)
    }

    pub fn sin(&self) -> RealBall {
        let mid = self.mid.clone().sin();
        Self::wrap(mid, self.rad.clone()) // |sin'| <= 1
    }
    pub fn cos(&self) -> RealBall {
        let mid = self.mid.clone().cos();
        Self::wrap(mid, self.rad.clone())
    }

    /// Square root; requires certainly nonnegative midpoint-ball.
    pub fn sqrt(&self) -> Option<RealBall> {
        let lower = self.abs_lower();
        if !self.mid.is_sign_positive() || !(lower.is_sign_positive() && !lower.is_zero()) {
            return None;
        }
        let mid = self.mid.clone().sqrt();
        // |sqrt x - sqrt m| <= r / (2 sqrt(lower))
        let mut sl = lower;
        sl = sl.sqrt();
        let mut rad = self.rad.clone();
        rad.div_assign_round(&sl, Round::Up);
        rad = mul_up(&rad, &Float::with_val(RAD_PREC, 0.5f64));
        Some(Self::wrap(mid, rad))
    }

    pub fn powi(&self, e: u32) -> RealBall {
        let mut acc = RealBall::one(self.prec());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Upper incomplete gamma Γ(a, x) for exact integer `a` (possibly
    /// negative) and a certainly-positive ball `x`.
    pub fn gamma_upper(a: i32, x: &RealBall) -> Option<RealBall> {
        let lower = x.abs_lower();
        if !x.mid.is_sign_positive() || !(lower.is_sign_positive() && !lower.is_zero()) {
            return None;
        }
        let prec = x.prec();
        let af = Float::with_val(prec, a);
        let mid = af.gamma_inc(&x.mid);
        // |d/dx Γ(a,x)| = x^(a-1) e^(-x); bound over the ball.
        let deriv = if a <= 1 {
            // x^(a-1) decreasing: max at the lower end
            let mut p = Float::with_val(RAD_PREC, 1);
            for _ in 0..(1 - a) {
                p.div_assign_round(&lower, Round::Up);
            }
            let e = (-Float::with_val(RAD_PREC, &lower)).exp();
            mul_up(&p, &e)
        } else {
            // x^(a-1)e^(-x) peaks at x = a−1; evaluate at max(lower, a−1)
            let am1 = Float::with_val(RAD_PREC, a - 1);
            let at = if lower > am1 { lower.clone() } else { am1 };
            let mut p = Float::with_val(RAD_PREC, 1);
            for _ in 0..(a - 1) {
                p.mul_assign_round(&at, Round::Up);
            }
            let e = (-at).exp();
            mul_up(&p, &e)
        };
        let rad = mul_up(&deriv, &x.rad);
        Some(Self::wrap(mid, rad))
    }

    /// Grow the radius by an explicit nonnegative bound (e.g. a series tail).
    pub fn add_error(&self, bound: &Float) -> RealBall {
        RealBall {
            mid: self.mid.clone(),
            rad: add_up(&self.rad, &Float::with_val(RAD_PREC, bound)),
        }
    }

    pub fn contains_zero(&self) -> bool {
        let lower = self.abs_lower();
        !(lower.is_sign_positive() && !lower.is_zero())
    }

    pub fn certainly_positive(&self) -> bool {
        self.mid.is_sign_positive() && !self.contains_zero()
    }
    pub fn certainly_negative(&self) -> bool {
        self.mid.is_sign_negative() && !self.contains_zero()
    }

    /// Certified |self| < |bound as 2^e|, i.e. the whole ball is below.
    pub fn certainly_below_pow2(&self, e: i32) -> bool {
        let mut up = abs_up(&self.mid);
        up.add_assign_round(&self.rad, Round::Up);
        up < Float::with_val(RAD_PREC, Float::i_exp(1, e))
    }

    /// Upper bound of |self| over the ball.
    pub fn abs_upper(&self) -> Float {
        let mut up = abs_up(&self.mid);
        up.add_assign_round(&self.rad, Round::Up);
        up
    }

    pub fn certified_lt(&self, o: &RealBall) -> bool {
        o.sub(self).certainly_positive()
    }

    /// Does the ball contain the exact rational r?
    pub fn contains_rat(&self, r: &crate::exact::Rat) -> bool {
        // |mid − r| ≤ rad, with the difference taken at enough precision
        // that an exact cancellation stays exact.
        let extra = (r.numer().bits() + r.denom().bits()) as u32 + 64;
        let p = self.prec() + extra;
        let rr = RealBall::from_rat(p, r);
        let mut d = Float::with_val(p, &self.mid);
        let o = d.sub_assign_round(&rr.mid, Round::Nearest);
        let mut up = abs_up(&d);
        if o != std::cmp::Ordering::Equal {
            up.add_assign_round(&ulp_bound(&d), Round::Up);
        }
        up.add_assign_round(&rr.rad, Round::Up);
        up <= self.rad
    }

    /// Round the midpoint to the nearest rational with denominator dividing
    /// `den`, and certify it is the unique such rational in the ball and that
    /// it lies within the ball. Returns None when uncertifiable.
    pub fn round_to_rational(&self, den: &num_bigint::BigInt) -> Option<crate::exact::Rat> {
        // candidate = round(mid * den) / den
        let p = self.prec();
        let d = Float::with_val(p, Float::parse(den.to_string()).unwrap());
        let scaled = Float::with_val(p, &self.mid * &d);
        let rounded = scaled.round();
        let cand_num: num_bigint::BigInt = rounded
            .to_integer()
            .map(|z| z.to_string().parse().unwrap())?;
        let cand = crate::exact::Rat::new(cand_num, den.clone());
        if !self.contains_rat(&cand) {
            return None;
        }
        // Uniqueness: diameter must be < 1/den (the gap between adjacent
        // rationals with this denominator).
        let mut diam = add_up(&self.rad, &self.rad);
        diam.mul_assign_round(&d, Round::Up);
        if diam < Float::with_val(RAD_PREC, 1) {
            Some(cand)
        } else {
            None
        }
    }

    /// Midpoint as f64 (for reporting only).
    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }
    pub fn rad_f64(&self) -> f64 {
        self.rad.to_f64()
    }

    /// Decimal string of the midpoint with explicit radius, for reports.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        format!(
            "{} (radius <= {:e})",
            self.mid.to_string_radix(10, Some(digits)),
            self.rad.to_f64()
        )
    }
}

impl PartialEq for RealBall {
    fn eq(&self, other: &Self) -> bool {
        self.mid == other.mid && self.rad == other.rad
    }
}

/// Certified-order helper: `Some(ordering)` only when balls are disjoint.
pub fn certified_cmp(a: &RealBall, b: &RealBall) -> Option<Ordering> {
    if a.certified_lt(b) {
        Some(Ordering::Less)
    } else if b.certified_lt(a) {
        Some(Ordering::Greater)
    } else {
        None
    }
}

/// Complex ball: one real ball per component.
#[derive(Clone)]
pub struct BallComplex {
    pub re: RealBall,
    pub im: RealBall,
}

impl fmt::Debug for BallComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?} i)", self.re, self.im)
    }
}

impl BallComplex {
    pub fn prec(&self) -> u32 {
        self.re.prec()
    }
    pub fn zero(prec: u32) -> Self {
        BallComplex {
            re: RealBall::zero(prec),
            im: RealBall::zero(prec),
        }
    }
    pub fn one(prec: u32) -> Self {
        BallComplex {
            re: RealBall::one(prec),
            im: RealBall::zero(prec),
        }
    }
    pub fn from_real(re: RealBall) -> Self {
        let prec = re.prec();
        BallComplex {
            re,
            im: RealBall::zero(prec),
        }
    }
    pub fn new(re: RealBall, im: RealBall) -> Self {
        BallComplex { re, im }
    }
    pub fn i(prec: u32) -> Self {
        BallComplex {
            re: RealBall::zero(prec),
            im: RealBall::one(prec),
        }
    }

    /// Total error radius: |re.rad| + |im.rad| bounds the Euclidean error.
    pub fn rad(&self) -> Float {
        add_up(&self.re.rad, &self.im.rad)
    }

    pub fn add(&self, o: &BallComplex) -> BallComplex {
        BallComplex {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }
    pub fn sub(&self, o: &BallComplex) -> BallComplex {
        BallComplex {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }
    pub fn neg(&self) -> BallComplex {
        BallComplex {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }
    pub fn mul(&self, o: &BallComplex) -> BallComplex {
        BallComplex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
    pub fn conj(&self) -> BallComplex {
        BallComplex {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }
    /// |z|^2 = z z̄ as a real ball.
    pub fn abs_sq(&self) -> RealBall {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }
    pub fn recip(&self) -> Option<BallComplex> {
        let n = self.abs_sq();
        let inv = n.recip()?;
        Some(BallComplex {
            re: self.re.mul(&inv),
            im: self.im.neg().mul(&inv),
        })
    }
    pub fn div(&self, o: &BallComplex) -> Option<BallComplex> {
        Some(self.mul(&o.recip()?))
    }
    pub fn mul_i64(&self, k: i64) -> BallComplex {
        BallComplex {
            re: self.re.mul_i64(k),
            im: self.im.mul_i64(k),
        }
    }
    pub fn scale(&self, r: &RealBall) -> BallComplex {
        BallComplex {
            re: self.re.mul(r),
            im: self.im.mul(r),
        }
    }

    /// exp(z) = e^re (cos im + i sin im).
    pub fn exp(&self) -> BallComplex {
        let e = self.re.exp();
        BallComplex {
            re: e.mul(&self.im.cos()),
            im: e.mul(&self.im.sin()),
        }
    }

    /// e^(2πi t) for exact rational t.
    pub fn e2pi(prec: u32, t: &crate::exact::Rat) -> BallComplex {
        let pi = RealBall::pi(prec);
        let tb = RealBall::from_rat(prec, t);
        let ang = pi.mul(&tb).mul_i64(2);
        BallComplex {
            re: ang.cos(),
            im: ang.sin(),
        }
    }

    pub fn powi(&self, e: u32) -> BallComplex {
        let mut acc = BallComplex::one(self.prec());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn powi_signed(&self, e: i64) -> Option<BallComplex> {
        if e >= 0 {
            Some(self.powi(e as u32))
        } else {
            Some(self.recip()?.powi((-e) as u32))
        }
    }

    /// ln|z| in the classical single-modulus sense, as a real ball.
    pub fn ln_abs(&self) -> Option<RealBall> {
        let sq = self.abs_sq();
        let l = sq.ln()?;
        Some(l.mul(&RealBall::from_rat(self.prec(), &crate::exact::int::rat(1, 2))))
    }

    /// ln(z z̄): the paper-normalized logarithm of the squared modulus.
    pub fn ln_norm(&self) -> Option<RealBall> {
        self.abs_sq().ln()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn certainly_nonzero(&self) -> bool {
        !self.re.contains_zero() || !self.im.contains_zero()
    }

    /// Upper bound of |z| over the ball.
    pub fn abs_upper(&self) -> Float {
        // sqrt(re_up^2 + im_up^2) <= |re|_up + |im|_up (cheap, sound)
        add_up(&self.re.abs_upper(), &self.im.abs_upper())
    }

    pub fn add_error(&self, bound: &Float) -> BallComplex {
        BallComplex {
            re: self.re.add_error(bound),
            im: self.im.add_error(bound),
        }
    }

    pub fn to_string_radix(&self, digits: usize) -> String {
        format!(
            "{} + {}*I (radius <= {:e})",
            self.re.mid.to_string_radix(10, Some(digits)),
            self.im.mid.to_string_radix(10, Some(digits)),
            self.rad().to_f64()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int::rat;

    #[test]
    fn soundness_basics() {
        let p = 128;
        let a = RealBall::from_rat(p, &rat(1, 3));
        let b = RealBall::from_rat(p, &rat(1, 7));
        let s = a.add(&b); // 10/21
        assert!(s.contains_rat(&rat(10, 21)));
        let m = a.mul(&b);
        assert!(m.contains_rat(&rat(1, 21)));
        let d = a.div(&b).unwrap();
        assert!(d.contains_rat(&rat(7, 3)));
    }

    #[test]
    fn ln_exp_roundtrip() {
        let p = 192;
        let x = RealBall::from_rat(p, &rat(5, 2));
        let y = x.ln().unwrap().exp();
        assert!(y.contains_rat(&rat(5, 2)));
        assert!(y.rad_f64() < 1e-40);
    }

    #[test]
    fn complex_mul_and_abs() {
        let p = 128;
        let z = BallComplex::new(
            RealBall::from_rat(p, &rat(3, 1)),
            RealBall::from_rat(p, &rat(4, 1)),
        );
        assert!(z.abs_sq().contains_rat(&rat(25, 1)));
        let w = z.mul(&z.conj());
        assert!(w.re.contains_rat(&rat(25, 1)));
        assert!(w.im.contains_rat(&rat(0, 1)));
    }

    #[test]
    fn roots_of_unity() {
        let p = 160;
        let z = BallComplex::e2pi(p, &rat(1, 12));
        let z12 = z.powi(12);
        assert!(z12.re.contains_rat(&rat(1, 1)));
        assert!(z12.im.contains_rat(&rat(0, 1)));
        assert!(z12.re.rad_f64() < 1e-35);
    }

    #[test]
    fn gamma_upper_values() {
        let p = 160;
        // Γ(1, x) = e^-x
        let x = RealBall::from_rat(p, &rat(7, 3));
        let g1 = RealBall::gamma_upper(1, &x).unwrap();
        let e = x.neg().exp();
        assert!(g1.sub(&e).contains_rat(&rat(0, 1)));
        // Γ(0, x) positive and decreasing sanity
        let g0a = RealBall::gamma_upper(0, &RealBall::from_rat(p, &rat(1, 1))).unwrap();
        let g0b = RealBall::gamma_upper(0, &RealBall::from_rat(p, &rat(2, 1))).unwrap();
        assert!(g0b.certified_lt(&g0a));
        assert!(g0a.certainly_positive());
    }

    #[test]
    fn certified_rounding() {
        let p = 128;
        let x = RealBall::from_rat(p, &rat(22, 7));
        let r = x.round_to_rational(&crate::exact::int::int(7)).unwrap();
        assert_eq!(r, rat(22, 7));
        // A wide ball must refuse to round.
        let wide = x.add_error(&Float::with_val(32, 1.0));
        assert!(wide.round_to_rational(&crate::exact::int::int(7)).is_none());
    }
}
