//! Complex lattices attached to ideals of an imaginary quadratic field.
//!
//! A lattice carries an exact basis (elements of k), Gauss-reduced so that
//! τ = b1/b2 lies in the standard fundamental domain; reduction decisions
//! are made in exact rational arithmetic (N(z) is the squared modulus of
//! the complex embedding), so the reduced basis is canonical and
//! deterministic.

use crate::ball::{BallComplex, RealBall};
use crate::exact::int::{Int, Rat};
use crate::qfield::{Elt, IdealHNF, QuadField};
use num_traits::{Signed, Zero};

/// Exact lattice in C spanned by two elements of k, with Im(b1/b2) > 0 and
/// the quotient τ = b1/b2 reduced into the fundamental domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KLattice {
    pub b1: Elt,
    pub b2: Elt,
}

/// Exact real part of the complex embedding of z ∈ k.
pub fn re_exact(k: &QuadField, z: &Elt) -> Rat {
    // ω = (tr + i·s)/2-normalized: Re(ω) = tr/2
    &z.x + &z.y * Rat::new(k.omega_tr.clone(), Int::from(2))
}

/// Coefficient of the imaginary unit scale: Im(z) = im_coeff(z) · s_k where
/// s_k := sqrt(|d|) (d ≡ 1 mod 4: Im ω = s/2, else Im ω = s).
pub fn im_coeff(k: &QuadField, z: &Elt) -> Rat {
    if k.omega_tr.is_zero() {
        z.y.clone()
    } else {
        &z.y / Rat::from(Int::from(2))
    }
}

/// τ = a/b as an element of k (division in k).
fn div_k(k: &QuadField, a: &Elt, b: &Elt) -> Elt {
    let binv = k.inv(b).expect("division by zero element");
    k.mul(a, &binv)
}

impl KLattice {
    /// Reduce the basis (Gauss), fix orientation, and normalize boundary
    /// ties: Re(τ) ∈ (−1/2, 1/2], and if N(τ) = 1 then Re(τ) ≥ 0.
    pub fn new(k: &QuadField, b1: Elt, b2: Elt) -> KLattice {
        assert!(!b1.is_zero() && !b2.is_zero());
        let (mut b1, mut b2) = (b1, b2);
        // ensure Im(b1/b2) > 0
        let tau0 = div_k(k, &b1, &b2);
        if im_coeff(k, &tau0).is_negative() {
            b1 = k.sub(&Elt::from_int(0, 0), &b1);
        } else if im_coeff(k, &tau0).is_zero() {
            panic!("degenerate lattice basis");
        }
        loop {
            let tau = div_k(k, &b1, &b2);
            // shift Re(τ) into (−1/2, 1/2]: r = ceil(Re − 1/2)
            let re = re_exact(k, &tau);
            let half = Rat::new(Int::from(1), Int::from(2));
            let r = (&re - &half).ceil().numer().clone();
            if !r.is_zero() {
                let shift = k.mul(&b2, &Elt::from_ints(&r, &Int::zero()));
                b1 = k.sub(&b1, &shift);
            }
            // swap if |τ| < 1 (i.e. N(b1) < N(b2)): τ → −1/τ
            if k.norm(&b1) < k.norm(&b2) {
                let nb1 = b2;
                let nb2 = b1;
                b1 = nb1;
                b2 = nb2;
                // preserve orientation under τ → −1/τ
                b1 = k.sub(&Elt::from_int(0, 0), &b1);
                continue;
            }
            // boundary: |τ| = 1 with Re < 0 normalizes to Re ≥ 0; the swap
            // keeps N(b1) = N(b2), so this terminates immediately after.
            let tau = div_k(k, &b1, &b2);
            let re = re_exact(k, &tau);
            if k.norm(&tau) == Rat::from(Int::from(1)) && re.is_negative() {
                let nb1 = b2;
                let nb2 = b1;
                b1 = nb1;
                b2 = nb2;
                b1 = k.sub(&Elt::from_int(0, 0), &b1);
            }
            break;
        }
        KLattice { b1, b2 }
    }

    pub fn from_ideal(k: &QuadField, a: &IdealHNF) -> KLattice {
        let (x, y) = a.basis();
        // basis (c·a, c(b+ω)): order for orientation handled in new()
        KLattice::new(k, y, x)
    }

    /// τ = b1/b2 as an exact element of k.
    pub fn tau(&self, k: &QuadField) -> Elt {
        div_k(k, &self.b1, &self.b2)
    }

    /// Exact coordinates (a1, a2) of z on the basis: z = a1 b1 + a2 b2.
    pub fn coords(&self, _k: &QuadField, z: &Elt) -> (Rat, Rat) {
        // solve over Q: z = a1 b1 + a2 b2 in coordinates (1, ω)
        let det = &self.b1.x * &self.b2.y - &self.b1.y * &self.b2.x;
        assert!(!det.is_zero());
        let a1 = (&z.x * &self.b2.y - &z.y * &self.b2.x) / &det;
        let a2 = (&self.b1.x * &z.y - &self.b1.y * &z.x) / &det;
        (a1, a2)
    }

    /// Signed covolume coefficient: covol = |imcoef(conj(b1)·b2)| · s_k.
    pub fn covolume_coeff(&self, k: &QuadField) -> Rat {
        im_coeff(k, &k.mul(&k.conj(&self.b1), &self.b2)).abs()
    }

    /// Squared length (= norm) of the shortest nonzero vector: for a reduced
    /// basis this is N(b2).
    pub fn min_norm(&self, k: &QuadField) -> Rat {
        k.norm(&self.b2)
    }

    /// Ball embedding of an element of k.
    pub fn embed(k: &QuadField, z: &Elt, prec: u32) -> BallComplex {
        embed_elt(k, z, prec)
    }
}


/// sqrt(|d|) as a positive real ball.
pub fn sqrt_abs_d(k: &QuadField, prec: u32) -> RealBall {
    RealBall::from_rational(prec, &k.d.abs(), &Int::from(1))
        .sqrt()
        .expect("|d| > 0")
}

/// Complex-embedding of z = x + yω with ω = (tr + i√|d|)/2 or i√|d|.
pub fn embed_elt(k: &QuadField, z: &Elt, prec: u32) -> BallComplex {
    let s = sqrt_abs_d(k, prec);
    let re = RealBall::from_rat(prec, &re_exact(k, z));
    let im = RealBall::from_rat(prec, &im_coeff(k, z)).mul(&s);
    BallComplex::new(re, im)
}

/// Enumerate all points x = shift + m·b1 + n·b2 with N(x) ≤ bound (exact
/// rational bound), returning exact elements.
pub fn enumerate_shifted(
    k: &QuadField,
    lat: &KLattice,
    shift: &Elt,
    bound: &Rat,
) -> Vec<Elt> {
    // N(shift + m b1 + n b2) = quadratic form in (m, n):
    // Q(m,n) = A m² + B mn + C n² + D m + E n + F
    let b1 = &lat.b1;
    let b2 = &lat.b2;
    let tr = |a: &Elt, b: &Elt| -> Rat {
        // Tr(a · conj(b)) = 2·Re(a conj b): exact
        let p = k.mul(a, &k.conj(b));
        k.trace(&p)
    };
    let a_c = k.norm(b1);
    let b_c = tr(b1, b2);
    let c_c = k.norm(b2);
    let d_c = tr(b1, shift);
    let e_c = tr(b2, shift);
    let f_c = k.norm(shift);
    let mut out = vec![];
    // range of n: minimized over m: the form is positive definite with
    // discriminant Δ = 4AC − B² > 0; n range from
    // (C − B²/(4A)) n² + (E − BD/(2A)) n + (F − D²/(4A)) ≤ bound
    let four = Rat::from(Int::from(4));
    let two = Rat::from(Int::from(2));
    let cc = &c_c - &b_c * &b_c / (&four * &a_c);
    let ee = &e_c - &b_c * &d_c / (&two * &a_c);
    let ff = &f_c - &d_c * &d_c / (&four * &a_c);
    // cc n² + ee n + ff ≤ bound  =>  n ∈ [roots]
    let disc_n = &ee * &ee - &four * &cc * (&ff - bound);
    if disc_n.is_negative() {
        return out;
    }
    let sq = rat_sqrt_upper(&disc_n);
    let n_lo: Int = rat_floor(&((-&ee - &sq) / (&two * &cc))) - 1;
    let n_hi = rat_ceil(&((-&ee + &sq) / (&two * &cc))) + 1;
    let mut n = n_lo;
    while n <= n_hi {
        let nr = Rat::from(n.clone());
        // A m² + (B n + D) m + (C n² + E n + F − bound) ≤ 0
        let bm = &b_c * &nr + &d_c;
        let cm = &c_c * &nr * &nr + &e_c * &nr + &f_c - bound;
        let disc_m = &bm * &bm - &four * &a_c * &cm;
        if !disc_m.is_negative() {
            let sqm = rat_sqrt_upper(&disc_m);
            let m_lo = rat_floor(&((-&bm - &sqm) / (&two * &a_c))) - 1;
            let m_hi = rat_ceil(&((-&bm + &sqm) / (&two * &a_c))) + 1;
            let mut m = m_lo;
            while m <= m_hi {
                let x = k.add(
                    shift,
                    &k.add(
                        &k.mul(b1, &Elt::from_ints(&m, &Int::zero())),
                        &k.mul(b2, &Elt::from_ints(&n, &Int::zero())),
                    ),
                );
                if &k.norm(&x) <= bound {
                    out.push(x);
                }
                m += 1;
            }
        }
        n += 1;
    }
    out
}

fn rat_floor(r: &Rat) -> Int {
    r.floor().numer().clone()
}
fn rat_ceil(r: &Rat) -> Int {
    r.ceil().numer().clone()
}
/// Upper bound for sqrt of a nonnegative rational, as a rational.
fn rat_sqrt_upper(r: &Rat) -> Rat {
    assert!(!r.is_negative());
    if r.is_zero() {
        return Rat::zero();
    }
    // sqrt(n/d) <= (isqrt(n·d)+1)/d
    let nd = r.numer() * r.denom();
    let s = crate::exact::int::isqrt(&nd) + 1;
    Rat::new(s, r.denom().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int::{int, rat};
    use crate::qfield::make_field;

    #[test]
    fn reduction_is_fundamental() {
        let k = make_field(-1).unwrap();
        // lattice (3) over Z[i]: basis 3, 3i; reduced τ = i
        let three = IdealHNF::principal(&k, &Elt::from_int(3, 0)).unwrap();
        let lat = KLattice::from_ideal(&k, &three);
        let tau = lat.tau(&k);
        let re = re_exact(&k, &tau);
        assert!(re > rat(-1, 2) && re <= rat(1, 2));
        assert!(k.norm(&tau) >= Rat::from(int(1)));
        assert!(im_coeff(&k, &tau).is_positive());
        // covolume of (3): 9 × covol(O) = 9·1 (times s_k = 2... it is the
        // rational coefficient that matters here)
        let cov = lat.covolume_coeff(&k);
        let cov_o =
            KLattice::from_ideal(&k, &IdealHNF::one()).covolume_coeff(&k);
        assert_eq!(cov / cov_o, rat(9, 1));
    }

    #[test]
    fn coords_roundtrip() {
        let k = make_field(-7).unwrap();
        let m = IdealHNF::principal(&k, &Elt::from_int(3, 1)).unwrap();
        let lat = KLattice::from_ideal(&k, &m);
        let z = Elt::from_int(5, -2);
        let (a1, a2) = lat.coords(&k, &z);
        let back = k.add(
            &k.mul(&lat.b1, &Elt { x: a1, y: Rat::zero() }),
            &k.mul(&lat.b2, &Elt { x: a2, y: Rat::zero() }),
        );
        assert_eq!(back, z);
    }

    #[test]
    fn enumeration_counts() {
        let k = make_field(-1).unwrap();
        let lat = KLattice::from_ideal(&k, &IdealHNF::one());
        // points of Z[i] with N ≤ 2: 0, ±1, ±i, ±1±i = 9
        let pts = enumerate_shifted(&k, &lat, &Elt::from_int(0, 0), &rat(2, 1));
        assert_eq!(pts.len(), 9);
//
        
        let pts1 = enumerate_shifted(&k, &lat, &Elt::from_int(1, 0), &rat(1, 1));
        assert_eq!(pts1.len(), 5); // 0, 1, −1, i, −i
    }

    #[test]
    fn embedding_norm_consistency() {
        let k = make_field(-3).unwrap();
        let z = Elt::from_int(2, 3);
        let e = embed_elt(&k, &z, 128);
        let n2 = e.abs_sq();
        assert!(n2.contains_rat(&k.norm(&z)));
    }
}
