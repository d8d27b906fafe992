//! Klein forms, the discriminant form Δ, the Siegel–Ramachandra invariant,
//! and the Robert function Ψ(z; L, L'), all evaluated with certified balls
//! from q-products at a canonically reduced lattice basis.
//!
//! Conventions (L = Z b1 + Z b2 reduced, τ = b1/b2, q = e^{2πiτ}, u = z/b2,
//! q_u = e^{2πiu}):
//!
//!   σ(z; L)  = b2/(2πi) · e^{η̃ u²/2} (q_u^{1/2} − q_u^{−1/2})
//!              · Π_{n≥1} (1−qⁿq_u)(1−qⁿ/q_u)/(1−qⁿ)²,   η̃ = π²E₂(τ)/3
//!   t(z; L)  = e^{−η(z)z/2} σ(z; L)  (the Klein form; η(z) is the R-linear
//!              extension of the quasi-periods, η(b2) = η̃/b2,
//!              η(b1) = (2πi + η(b2)·b1)/b2)
//!   Δ(L)     = (2π/b2)^12 q Π (1−qⁿ)^24
//!   θ(z; L)  = t(z; L)^12 Δ(L)
//!
//! The Siegel–Ramachandra invariant of a ray class c mod m is
//! θ(1; m·c_rep^{-1})^{N(m)}; it is canonical (no 12th-root ambiguity).

use crate::ball::{BallComplex, RealBall};
use crate::exact::int::{int, Int, Rat};
use crate::qfield::{Elt, QuadField};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rug::Float;

use super::lattice::{embed_elt, KLattice};

/// Shared per-lattice evaluation data at a given precision.
pub struct LatticeEval {
    pub prec: u32,
    pub b1: BallComplex,
    pub b2: BallComplex,
    pub tau: BallComplex,
    pub q: BallComplex,
    /// |q| upper bound as float
    pub q_abs: Float,
    pub e2: BallComplex,
    /// η(b2; L) and η(b1; L)
    pub eta2: BallComplex,
    pub eta1: BallComplex,
    pub two_pi_i: BallComplex,
    pub delta: BallComplex,
}

fn n_terms(prec: u32, q_abs: &Float) -> usize {
    // smallest N with |q|^N < 2^-(prec+48)
    let lg = q_abs.to_f64().log2();
    assert!(lg < -2.0, "q not small enough; lattice not reduced?");
    (((prec as f64) + 48.0) / (-lg)).ceil() as usize + 2
}

impl LatticeEval {
    pub fn new(k: &QuadField, lat: &KLattice, prec: u32) -> LatticeEval {
        let b1 = embed_elt(k, &lat.b1, prec);
        let b2 = embed_elt(k, &lat.b2, prec);
        let tau_elt = lat.tau(k);
        let tau = embed_elt(k, &tau_elt, prec);
        let pi = RealBall::pi(prec);
        let two_pi_i = BallComplex::new(RealBall::zero(prec), pi.mul_i64(2));
        // q = e^{2πiτ}
        let q = two_pi_i.mul(&tau).exp();
        let q_abs = q.abs_upper();
        let nt = n_terms(prec, &q_abs);
        // E2(τ) = 1 − 24 Σ σ1(n) qⁿ
        let sigma1 = sigma1_sieve(nt + 1);
        let mut e2 = BallComplex::one(prec);
        let mut qn = BallComplex::one(prec);
        for n in 1..=nt {
            qn = qn.mul(&q);
            e2 = e2.sub(&qn.mul_i64(24 * sigma1[n] as i64));
        }
        // tail: 24 Σ_{n>nt} σ1(n)|q|ⁿ ≤ 96 (nt+2)² |q|^{nt+1}
        let mut tail = Float::with_val(32, (nt as f64 + 2.0) * (nt as f64 + 2.0) * 96.0);
        let mut qpow = Float::with_val(32, 1);
        for _ in 0..(nt + 1) {
            qpow *= &q_abs;
        }
        tail *= &qpow;
        let e2 = e2.add_error(&tail);
        // η(b2) = π² E2 / (3 b2)
        let pi2 = BallComplex::from_real(pi.mul(&pi));
        let eta2 = pi2
            .mul(&e2)
            .div(&b2.mul_i64(3))
            .expect("b2 nonzero");
        // Legendre relation in the orientation of the q-product used
        // below: η(b1)·b2 − η(b2)·b1 = −2πi when Im(b1/b2) > 0.
        let eta1 = eta2
            .mul(&b1)
            .sub(&two_pi_i)
            .div(&b2)
            .expect("b2 nonzero");
        // Δ(L) = (2π/b2)^{12} q Π(1−qⁿ)^{24}
        let mut prod = BallComplex::one(prec);
        let mut qn = BallComplex::one(prec);
        for _ in 1..=nt {
            qn = qn.mul(&q);
            prod = prod.mul(&BallComplex::one(prec).sub(&qn));
        }
        // tail of Π(1−qⁿ): relative error ≤ exp(2Σ_{n>nt}|q|ⁿ) − 1 ≤ 4|q|^{nt+1}
        let mut ptail = Float::with_val(32, 4);
        ptail *= &qpow;
        let rel = prod.abs_upper() * &ptail;
        let prod = prod.add_error(&rel);
        let two_pi_over_b2 = BallComplex::from_real(pi.mul_i64(2))
            .div(&b2)
            .expect("b2 nonzero");
        let delta = two_pi_over_b2.powi(12).mul(&q).mul(&prod.powi(24));
        LatticeEval {
            prec,
            b1,
            b2,
            tau,
            q,
            q_abs,
            e2,
            eta2,
            eta1,
            two_pi_i,
            delta,
        }
    }

    /// η(z) for z = r1 b1 + r2 b2 with exact rational coordinates (the
    /// R-linear extension of the quasi-period homomorphism).
    fn eta_of(&self, r1: &Rat, r2: &Rat) -> BallComplex {
        let p = self.prec;
        self.eta1
            .scale(&RealBall::from_rat(p, r1))
            .add(&self.eta2.scale(&RealBall::from_rat(p, r2)))
    }

    /// Klein form t(z; L) for exact z ∈ k, z ∉ L.
    pub fn klein(&self, k: &QuadField, lat: &KLattice, z: &Elt) -> BallComplex {
        let p = self.prec;
        let (a1, a2) = lat.coords(k, z);
        // reduce coordinates into [0,1) with the exact quasi-period factor:
        // t(z0 + λ) = (−1)^{m+n+mn} e^{η(λ)(z0 + λ/2)} t(z0)
        let m = a1.floor().numer().clone();
        let n = a2.floor().numer().clone();
        let r1 = &a1 - Rat::from(m.clone());
        let r2 = &a2 - Rat::from(n.clone());
        assert!(
            !(r1.is_zero() && r2.is_zero()),
            "Klein form evaluated at a lattice point"
        );
        let z0 = k.add(
            &k.mul(&lat.b1, &Elt { x: r1.clone(), y: Rat::zero() }),
            &k.mul(&lat.b2, &Elt { x: r2.clone(), y: Rat::zero() }),
        );
        let t0 = self.klein_reduced(k, lat, &z0, &r1, &r2);
        if m.is_zero() && n.is_zero() {
            return t0;
        }
        // t(z0 + λ) = ε(λ) e^{(η(λ)z0 − η(z0)λ)/2} t(z0) with λ = m b1 + n b2;
        // by the Legendre relation above the exponent is −πi(m r2 − n r1),
        // so the whole cocycle is the exact root of unity
        // e^{2πi·[−(m r2 − n r1) + (m + n + mn)]/2}.
        let mr = Rat::from(m.clone());
        let nr = Rat::from(n.clone());
        let sign = &m + &n + &m * &n;
        let mut turn = (&nr * &r1 - &mr * &r2) / Rat::from(int(2));
        if sign.is_odd() {
            turn += Rat::new(int(1), int(2));
        }
        turn -= turn.floor();
        let factor = BallComplex::e2pi(p, &turn);
        t0.mul(&factor)
    }

    /// Klein form at z0 = r1 b1 + r2 b2 with r1, r2 ∈ [0, 1).
    fn klein_reduced(
        &self,
        k: &QuadField,
        lat: &KLattice,
        z0: &Elt,
        r1: &Rat,
        r2: &Rat,
    ) -> BallComplex {
        let p = self.prec;
        // u = z0 / b2 = r1 τ + r2
        let u = self.tau.scale(&RealBall::from_rat(p, r1)).add(&BallComplex::from_real(
            RealBall::from_rat(p, r2),
        ));
        let pi_i_u = self.two_pi_i.mul(&u).scale(&RealBall::from_rat(
            p,
            &Rat::new(int(1), int(2)),
        ));
        let qu_half = pi_i_u.exp();
        let qu = qu_half.mul(&qu_half);
        let qu_inv = qu.recip().expect("q_u nonzero");
        let nt = n_terms(p, &self.q_abs);
        let mut prod = qu_half.sub(&qu_half.recip().expect("nonzero"));
        let mut qn = BallComplex::one(p);
        for _ in 1..=nt {
            qn = qn.mul(&self.q);
            let f1 = BallComplex::one(p).sub(&qn.mul(&qu));
            let f2 = BallComplex::one(p).sub(&qn.mul(&qu_inv));
            let f3 = BallComplex::one(p).sub(&qn);
            let f3i = f3.recip().expect("1−qⁿ nonzero");
            prod = prod.mul(&f1).mul(&f2).mul(&f3i).mul(&f3i);
        }
        // tail: factors for n > nt; |qⁿ q_u^{±1}| ≤ |q|^{n−1};
        // relative log-tail ≤ Σ_{n>nt} 5|q|^{n−1} ≤ 6|q|^{nt}
        let mut qpow = Float::with_val(32, 6);
        for _ in 0..nt {
            qpow *= &self.q_abs;
        }
        let rel = prod.abs_upper() * &qpow;
        let prod = prod.add_error(&rel);
        // σ(z0) = b2/(2πi) e^{η(b2) u² z0-normalized...}: exponent η̃ u²/2
        // with η̃ = η(1; Zτ+Z) = η(b2)·b2
        let eta_tilde = self.eta2.mul(&self.b2);
        let u2 = u.mul(&u);
        let half = RealBall::from_rat(p, &Rat::new(int(1), int(2)));
        let sigma = self
            .b2
            .div(&self.two_pi_i)
            .expect("2πi nonzero")
            .mul(&eta_tilde.mul(&u2).scale(&half).exp())
            .mul(&prod);
        // t(z0) = e^{−η(z0) z0 / 2} σ(z0)
        let z0_b = embed_elt(k, z0, p);
        let eta_z0 = self.eta_of(r1, r2);
        let expo = eta_z0.mul(&z0_b).scale(&half).neg().exp();
        let _ = lat;
        expo.mul(&sigma)
    }

    /// θ(z; L) = t(z; L)^12 Δ(L).
    pub fn theta(&self, k: &QuadField, lat: &KLattice, z: &Elt) -> BallComplex {
        self.klein(k, lat, z).powi(12).mul(&self.delta)
    }
}

/// σ1 values 1..n by sieve.
fn sigma1_sieve(n: usize) -> Vec<u64> {
    let mut s = vec![0u64; n + 1];
    for d in 1..=n {
        let mut m = d;
        while m <= n {
            s[m] += d as u64;
            m += d;
        }
    }
    s
}

/// Klein form of z on the lattice of an ideal, at a fresh evaluation.
pub fn klein_form(k: &QuadField, lat: &KLattice, z: &Elt, prec: u32) -> BallComplex {
    LatticeEval::new(k, lat, prec).klein(k, lat, z)
}

/// θ(z; L) — the 12th power Klein form times Δ; canonical in (z, L).
pub fn theta_value(k: &QuadField, lat: &KLattice, z: &Elt, prec: u32) -> BallComplex {
    LatticeEval::new(k, lat, prec).theta(k, lat, z)
}

/// Coset representatives of L'/L for lattices L ⊆ L' (exact).
pub fn coset_reps(k: &QuadField, sub: &KLattice, sup: &KLattice) -> Vec<Elt> {
    // coordinates of sub basis in sup basis must be integral
    let (a11, a12) = sup.coords(k, &sub.b1);
    let (a21, a22) = sup.coords(k, &sub.b2);
    let to_int = |r: &Rat| -> Int {
        assert!(r.denom().is_one(), "not a sublattice");
        r.numer().clone()
    };
    let t = vec![
        vec![to_int(&a11), to_int(&a12)],
        vec![to_int(&a21), to_int(&a22)],
    ];
    let h = crate::exact::mat::hnf(&t);
    let (h11, h22) = (h[0][0].clone(), h[1][1].clone());
    let mut reps = vec![];
    let mut i = Int::zero();
    while i < h11 {
        let mut j = Int::zero();
        while j < h22 {
            reps.push(k.add(
                &k.mul(&sup.b1, &Elt::from_ints(&i, &Int::zero())),
                &k.mul(&sup.b2, &Elt::from_ints(&j, &Int::zero())),
            ));
            j += 1;
        }
        i += 1;
    }
    reps
}

/// Robert function Ψ(z; L, L') = t(z; L)^n / Π_{t ∈ L'/L} t(z+t; L), with
/// n = [L':L] prime to 6; canonical given the deterministic reduced bases
/// and coset box.
pub fn robert_psi_value(
    k: &QuadField,
    sub: &KLattice,
    sup: &KLattice,
    z: &Elt,
    prec: u32,
) -> BallComplex {
    let ev = LatticeEval::new(k, sub, prec);
    let reps = coset_reps(k, sub, sup);
    let n = reps.len() as u32;
    assert!(
        Int::from(n).gcd(&int(6)).is_one(),
        "[L':L] must be prime to 6"
    );
    let num = ev.klein(k, sub, z).powi(n);
    let mut den = BallComplex::one(prec);
    for t in &reps {
        den = den.mul(&ev.klein(k, sub, &k.add(z, t)));
    }
    num.div(&den).expect("denominator nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int::rat;
    use crate::qfield::{make_field, IdealHNF};

    #[test]
    fn klein_form_oddness() {
        // t(−z) = −t(z)
        let k = make_field(-1).unwrap();
        let lat = KLattice::from_ideal(&k, &IdealHNF::principal(&k, &Elt::from_int(3, 0)).unwrap());
        let z = Elt::from_int(1, 0);
        let zn = Elt::from_int(-1, 0);
        let p = 192;
        let a = klein_form(&k, &lat, &z, p);
        let b = klein_form(&k, &lat, &zn, p);
        let s = a.add(&b);
        assert!(s.re.certainly_below_pow2(-120), "re {:?}", s.re);
        assert!(s.im.certainly_below_pow2(-120));
    }

    #[test]
    fn klein_quasi_periodicity_consistency() {
        // evaluating at z and z + lattice vector differs exactly by the
        // built-in cocycle; the invariant θ must agree at both
        let k = make_field(-1).unwrap();
        let m = IdealHNF::principal(&k, &Elt::from_int(3, 0)).unwrap();
        let lat = KLattice::from_ideal(&k, &m);
        let p = 192;
        let z = Elt::from_int(1, 0);
        let z_shift = k.add(&z, &Elt::from_int(3, 3)); // + 3 + 3i ∈ (3)
        let t1 = theta_value(&k, &lat, &z, p);
        let t2 = theta_value(&k, &lat, &z_shift, p);
        let d = t1.sub(&t2);
        let scale = t1.abs_upper().to_f64().abs().max(1.0);
        assert!(
            d.abs_upper().to_f64() < scale * 1e-45,
            "theta not periodic: {:?} vs {:?}",
            t1,
            t2
        );
    }

    #[test]
    fn delta_known_value() {
        // Δ(Z[i]) = (2π)^12 |η(i)|^24 with |η(i)|^24 = Γ(1/4)^24/(2^24 π^18);
        // reference value frozen from an independent 50-digit evaluation.
        let k = make_field(-1).unwrap();
        let lat = KLattice::from_ideal(&k, &IdealHNF::one());
        let ev = LatticeEval::new(&k, &lat, 192);
        let d = ev.delta;
        let expected = 6759064.906012797163;
        let got = d.re.to_f64();
        assert!(
            (got - expected).abs() < 1e-6,
            "Δ(Z[i]) = {got}, expected ≈ {expected}"
        );
        assert!(d.im.certainly_below_pow2(-100));
    }

    #[test]
    fn coset_reps_count() {
        let k = make_field(-1).unwrap();
        let m = IdealHNF::principal(&k, &Elt::from_int(3, 0)).unwrap();
        let g = IdealHNF::principal(&k, &Elt::from_int(2, 1)).unwrap(); // norm 5
        let sup_ideal = m.mul(&k, &g.inverse(&k)); // g^{-1} m ⊇ m
        let sub = KLattice::from_ideal(&k, &m);
        let sup = KLattice::from_ideal(&k, &sup_ideal);
        let reps = coset_reps(&k, &sub, &sup);
        assert_eq!(reps.len(), 5);
    }

    #[test]
    fn e2_value_at_i() {
        // E2(i) = 3/π (classical)
        let k = make_field(-1).unwrap();
        let lat = KLattice::from_ideal(&k, &IdealHNF::one());
        let ev = LatticeEval::new(&k, &lat, 160);
        let pi = RealBall::pi(160);
        let lhs = ev.e2.re.mul(&pi);
        assert!(lhs.contains_rat(&rat(3, 1)), "E2(i)·π = {:?}", lhs);
        assert!(ev.e2.im.certainly_below_pow2(-100));
    }
}
