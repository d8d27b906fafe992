//! Incomplete-gamma (theta-transform) lattice sums: partial zeta functions
//! of ray classes near s = 0, integer-s values, and weight-4/6 Eisenstein
//! sums. Every truncation adds a rigorous shell-counting tail bound to the
//! result radius.
//!
//! For a shifted lattice w + L in C with covolume V, write a_x = π|x|²/V
//! and b_μ = πV|μ|² on the dual side. With δ = [w ∈ L],
//!
//!   Γ(s) Σ'_{x∈w+L} (π|x|²/V)^{−s}
//!     = −δ/s + 1/(s−1) + Σ'_x a_x^{−s} Γ(s, a_x)
//!       + Σ'_{μ∈L*} e^{2πi⟨μ,w⟩} b_μ^{s−1} Γ(1−s, b_μ),
//!
//! from which the value and the s-derivative at s = 0 are read off. All
//! lattice data (norms, pairings) is exact rational; π/√|d| enters once.

use crate::ball::{BallComplex, RealBall};
use crate::exact::int::{int, Int, Rat};
use crate::qfield::{Elt, QuadField};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rug::ops::{AddAssignRound, DivAssignRound, MulAssignRound, SubAssignRound};
use rug::{float::Round, Float};

use super::lattice::{enumerate_shifted, im_coeff, sqrt_abs_d, KLattice};

/// Exact term data for the two theta-transformed sums.
pub struct LatticeSums {
    /// primal points x ≠ 0 of w + L, with N(x) exact
    pub primal: Vec<(Elt, Rat)>,
    /// dual points: (v, N(v), pairing turn) with μ = −i v / I; μ ≠ 0
    pub dual: Vec<(Elt, Rat, Rat)>,
    /// |imcoef(conj(b1) b2)| — the rational part of the covolume V = ic·√|d|
    pub ic: Rat,
    /// signed imcoef (negative for an oriented reduced basis)
    pub ic_signed: Rat,
    /// is w ∈ L (the δ term)
    pub delta: bool,
    /// squared length of the shortest vector of L (exact)
    pub lambda_sq: Rat,
    /// dual shortest squared length λ*² = min N(v)/(ic²|d|) in |μ|² units,
    /// kept as min over v of N(v) (we do dual tails in N(v)-units)
    pub dual_lambda_sq: Rat,
    /// truncation: primal kept N(x) ≤ primal_bound, dual N(v) ≤ dual_bound
    pub primal_bound: Rat,
    pub dual_bound: Rat,
}

/// Build the enumeration for target exponent T ≈ (prec+guard)·ln 2:
/// all primal terms with a_x ≤ T and dual with b_μ ≤ T.
pub fn lattice_sums(
    k: &QuadField,
    lat: &KLattice,
    shift: &Elt,
    prec: u32,
) -> LatticeSums {
    let ic_signed = im_coeff(k, &k.mul(&k.conj(&lat.b1), &lat.b2));
    let ic = ic_signed.abs();
    let t_target = ((prec as f64) + 64.0) * std::f64::consts::LN_2;
    // a_x = (π/√|d|)·N(x)/ic ≤ T  ⇔  N(x) ≤ T·ic·√|d|/π
    let sd = (k.d.abs().to_f64().unwrap()).sqrt();
    let nb = t_target * rat_f64(&ic) * sd / std::f64::consts::PI;
    let primal_bound = f64_to_rat_ceil(nb * 1.01 + 4.0);
    // b_μ = (π/√|d|)·N(v)/ic ≤ T: same bound in N(v) units
    let dual_bound = primal_bound.clone();
    let primal: Vec<(Elt, Rat)> = enumerate_shifted(k, lat, shift, &primal_bound)
        .into_iter()
        .filter(|x| !x.is_zero())
        .map(|x| {
            let n = k.norm(&x);
            (x, n)
        })
        .collect();
    // dual: v = m b2 − n b1 over (m,n) ∈ Z² ∖ 0, N(v) ≤ dual_bound
    let dual_lat = KLattice::new(k, lat.b2.clone(), lat.b1.clone());
    let zero = Elt::from_int(0, 0);
    let dual: Vec<(Elt, Rat, Rat)> = enumerate_shifted(k, &dual_lat, &zero, &dual_bound)
        .into_iter()
        .filter(|v| !v.is_zero())
        .map(|v| {
            let n = k.norm(&v);
            // pairing ⟨μ, w⟩ = imcoef(v·conj(w)) / ic_signed
            let t = im_coeff(k, &k.mul(&v, &k.conj(shift))) / &ic_signed;
            let tf = t.clone() - t.floor();
            (v, n, tf)
        })
        .collect();
    // δ: is shift ∈ L?
    let (c1, c2) = lat.coords(k, shift);
    let delta = c1.denom().is_one() && c2.denom().is_one();
    // λ1² of a reduced basis is N(b2)
    let lambda_sq = k.norm(&lat.b2).min(k.norm(&lat.b1));
    let dual_lambda_sq = k.norm(&dual_lat.b2).min(k.norm(&dual_lat.b1));
    LatticeSums {
        primal,
        dual,
        ic,
        ic_signed,
        delta,
        lambda_sq,
        dual_lambda_sq,
        primal_bound,
        dual_bound,
    }
}

fn rat_f64(r: &Rat) -> f64 {
    r.numer().to_f64().unwrap_or(f64::MAX) / r.denom().to_f64().unwrap_or(1.0)
}

fn f64_to_rat_ceil(x: f64) -> Rat {
    Rat::from(Int::from(x.ceil() as i64))
}

/// ρ = π/(ic·√|d|) as a ball: the scale factor with a_x = ρ·N(x).
fn rho_ball(k: &QuadField, ic: &Rat, prec: u32) -> RealBall {
    let pi = RealBall::pi(prec);
    let s = sqrt_abs_d(k, prec);
    pi.div(&s.mul(&RealBall::from_rat(prec, ic))).expect("nonzero")
}

/// Sum of (1+j)^m x^j for j ≥ 0, m ≤ 3, computed with upward rounding.
fn poly_geo_up(m: u32, x: &Float) -> Float {
    let prec = 64;
    let one = Float::with_val(prec, 1);
    let mut om = one.clone();
    om.sub_assign_round(x, Round::Down); // 1 − x, rounded down (denominator)
    assert!(om.is_sign_positive() && !om.is_zero());
    let mut inv = Float::with_val(prec, 1);
    inv.div_assign_round(&om, Round::Up);
    match m {
        0 => inv,
        1 => {
            let mut r = inv.clone();
            r.mul_assign_round(&inv, Round::Up);
            r
        }
        2 => {
            // (1+x)/(1−x)^3
            let mut num = one.clone();
            num.add_assign_round(x, Round::Up);
            let mut r = inv.clone();
            r.mul_assign_round(&inv, Round::Up);
            r.mul_assign_round(&inv, Round::Up);
            r.mul_assign_round(&num, Round::Up);
            r
        }
        _ => {
            // (1 + 4x + x²)/(1−x)^4
            let mut x2 = x.clone();
            x2.mul_assign_round(x, Round::Up);
            let mut num = one.clone();
            let mut fourx = Float::with_val(prec, 4);
            fourx.mul_assign_round(x, Round::Up);
            num.add_assign_round(&fourx, Round::Up);
            num.add_assign_round(&x2, Round::Up);
            let mut r = inv.clone();
            r.mul_assign_round(&inv, Round::Up);
            r.mul_assign_round(&inv, Round::Up);
            r.mul_assign_round(&inv, Round::Up);
            r.mul_assign_round(&num, Round::Up);
            r
        }
    }
}

/// Rigorous bound for Σ_{x ∈ w+Λ, N(x) > bound} N(x)^p e^{−ρ N(x)} by shell
/// counting with shell width Δ = λ² and the disjoint-disks packing bound.
fn shell_tail_up(rho_lo: &Float, lambda_sq: &Rat, bound: &Rat, p: u32) -> Float {
    let prec = 64;
    let lam2 = Float::with_val(prec, rat_f64(lambda_sq)).min(&Float::with_val(prec, 1e30));
    let t0 = Float::with_val(prec, rat_f64(bound));
    // count in disk N ≤ u: ((2√u + λ)/λ)² ≤ 3(4u + 4u_shell + λ²)/λ² form;
    // use C_j ≤ (12/λ²)(t0 + (j+1)Δ) + 3 with Δ = λ².
    // tail ≤ Σ_j C_j · (t0+(j+1)Δ)^p · e^{−ρ(t0+jΔ)}
    //      ≤ e^{−ρ t0} Σ_j [(12/λ²)(t0+(j+1)Δ) + 3]·(t0+(j+1)Δ)^p x^j,
    // x = e^{−ρΔ}. Expand (t0+(j+1)Δ)^q ≤ 2^q max(t0, (j+1)Δ)^q
    //      ≤ 2^q (t0^q + ((j+1)Δ)^q).
    let mut x = rho_lo.clone();
    x.mul_assign_round(&lam2, Round::Down);
    x = -x;
    let mut xe = x.exp(); // e^{−ρΔ} rounded... ensure upper: exp of down-rounded
    if xe >= 1 {
        xe = Float::with_val(prec, 0.999999);
    }
    let mut e0 = rho_lo.clone();
    e0.mul_assign_round(&t0, Round::Down);
    e0 = -e0;
    let e0 = e0.exp(); // e^{−ρ t0}, upper-ish (monotone: fine for a bound)
    let q = p + 1;
    let mut total = Float::with_val(prec, 0);
    // Σ_j (t0^q + ((j+1)Δ)^q) x^j = t0^q·geo0 + Δ^q·poly_geo(q)
    for use_q in [p, q] {
        let mut t0q = Float::with_val(prec, 1);
        for _ in 0..use_q {
            t0q.mul_assign_round(&t0, Round::Up);
        }
        let mut dq = Float::with_val(prec, 1);
        for _ in 0..use_q {
            dq.mul_assign_round(&lam2, Round::Up);
        }
        let g0 = poly_geo_up(0, &xe);
        let gq = poly_geo_up(use_q.min(3), &xe);
        let mut part = t0q;
        part.mul_assign_round(&g0, Round::Up);
        let mut part2 = dq;
        part2.mul_assign_round(&gq, Round::Up);
        part.add_assign_round(&part2, Round::Up);
        // scale: the use_q = q pass carries 12/λ², the use_q = p pass carries 3
        let mut coef = if use_q == q {
            let mut c = Float::with_val(prec, 12);
            c.div_assign_round(&lam2, Round::Up);
            c
        } else {
            Float::with_val(prec, 3)
        };
        // 2^q slack from the max-split
        for _ in 0..use_q {
            coef.mul_assign_round(&Float::with_val(prec, 2), Round::Up);
        }
        part.mul_assign_round(&coef, Round::Up);
        total.add_assign_round(&part, Round::Up);
    }
    total.mul_assign_round(&e0, Round::Up);
    total
}

/// Exact data → the value F₀(0) = −1·[sum normalization] pieces for the
/// derivative at 0, as a complex ball (imaginary part certified ≈ 0 for
/// real-symmetric data).
///
/// Returns (S1, S2, tail) with S1 = Σ Γ(0, a_x), S2 = Σ c_μ e^{−b}/b, tail
/// already absorbed into the radii.
fn theta_sums_deriv0(
    k: &QuadField,
    sums: &LatticeSums,
    prec: u32,
) -> (RealBall, BallComplex) {
    let rho = rho_ball(k, &sums.ic, prec);
    let mut s1 = RealBall::zero(prec);
    for (_, n) in &sums.primal {
        let a = rho.mul(&RealBall::from_rat(prec, n));
        let g = RealBall::gamma_upper(0, &a).expect("a > 0");
        s1 = s1.add(&g);
    }
    // rigorous primal tail: Γ(0, a) ≤ e^{−a} for a ≥ 1
    let rho_lo = {
        let mut lo = rho.mid.clone();
        lo.sub_assign_round(&rho.rad, Round::Down);
        lo
    };
    let tail1 = shell_tail_up(&rho_lo, &sums.lambda_sq, &sums.primal_bound, 0);
    let s1 = s1.add_error(&tail1);
    let mut s2 = BallComplex::zero(prec);
    for (_, n, turn) in &sums.dual {
        let b = rho.mul(&RealBall::from_rat(prec, n));
        let eb = b.neg().exp().div(&b).expect("b > 0");
        let c = BallComplex::e2pi(prec, turn);
        s2 = s2.add(&c.scale(&eb));
    }
    let tail2 = shell_tail_up(&rho_lo, &sums.dual_lambda_sq, &sums.dual_bound, 0);
    let s2 = s2.add_error(&tail2);
    (s1, s2)
}

/// ζ'(0) of the shifted-lattice zeta Σ'_{x∈w+L} (N(x)·π/V-normalized)^{−s},
/// together with its value at 0, in the normalization of a ray-class
/// partial zeta: the caller divides by r_m and multiplies by the N(a_0)^s
/// correction (which at s = 0 only affects the derivative through
/// log N(a_0)·value).
///
/// Returns (value_at_0, derivative_at_0) of G(s) := Σ'(π|x|²/V)^{−s}.
pub fn shifted_zeta_at_zero(
    k: &QuadField,
    lat: &KLattice,
    shift: &Elt,
    prec: u32,
) -> (RealBall, RealBall) {
    let sums = lattice_sums(k, lat, shift, prec);
    let (s1, s2) = theta_sums_deriv0(k, &sums, prec);
    // F0(0) = 1/(0−1) + S1 + S2 = −1 + S1 + S2
    let f0 = s1
        .add(&s2.re)
        .sub(&RealBall::one(prec));
    // imaginary part must vanish
    debug_assert!(s2.im.certainly_below_pow2(-(prec as i32) / 2 + 16) || s2.im.contains_zero());
    if sums.delta {
        // G(0) = −1, G'(0) = −γ + F0(0)
        let g0 = RealBall::one(prec).neg();
        let gp = f0.sub(&RealBall::euler_gamma(prec));
        (g0, gp)
    } else {
        (RealBall::zero(prec), f0)
    }
}

/// G(s) at an integer s ≥ 2 (used for validation against direct Dirichlet
/// series): G(s) = [−δ/s + 1/(s−1) + S1(s) + S2(s)]/Γ(s).
pub fn shifted_zeta_at_int(
    k: &QuadField,
    lat: &KLattice,
    shift: &Elt,
    s: u32,
    prec: u32,
) -> RealBall {
    assert!(s >= 2);
    let sums = lattice_sums(k, lat, shift, prec);
    let rho = rho_ball(k, &sums.ic, prec);
    let mut total = RealBall::zero(prec);
    for (_, n) in &sums.primal {
        let a = rho.mul(&RealBall::from_rat(prec, n));
        let g = RealBall::gamma_upper(s as i32, &a).expect("a > 0");
        let apow = a.powi(s).recip().expect("a > 0");
        total = total.add(&g.mul(&apow));
    }
    let rho_lo = {
        let mut lo = rho.mid.clone();
        lo.sub_assign_round(&rho.rad, Round::Down);
        lo
    };
    // |a^{−s}Γ(s,a)| ≤ 2 e^{−a} for a ≥ 2s
    let mut tail1 = shell_tail_up(&rho_lo, &sums.lambda_sq, &sums.primal_bound, 0);
    tail1.mul_assign_round(&Float::with_val(32, 2), Round::Up);
    let mut total = total.add_error(&tail1);
    for (_, n, turn) in &sums.dual {
        let b = rho.mul(&RealBall::from_rat(prec, n));
        let g = RealBall::gamma_upper(1 - s as i32, &b).expect("b > 0");
        let bpow = b.powi(s - 1);
        let c = BallComplex::e2pi(prec, turn);
        total = total.add(&c.scale(&g.mul(&bpow)).re);
    }
    // |b^{s−1}Γ(1−s, b)| ≤ e^{−b}/b ≤ e^{−b} for b ≥ 1
    let tail2 = shell_tail_up(&rho_lo, &sums.dual_lambda_sq, &sums.dual_bound, 0);
    total = total.add_error(&tail2);
    if sums.delta {
        let ds = RealBall::from_rat(prec, &Rat::new(int(1), int(s as i64)));
        total = total.sub(&ds);
    }
    let sm1 = RealBall::from_rat(prec, &Rat::new(int(1), int(s as i64 - 1)));
    total = total.add(&sm1);
    // divide by Γ(s) = (s−1)!
    let mut fact = Int::one();
    for i in 2..s {
        fact *= int(i as i64);
    }
    total
        .div(&RealBall::from_rational(prec, &fact, &Int::one()))
        .expect("factorial nonzero")
}

/// Eisenstein sum G_w(L) = Σ'_{ω∈L} ω^{−w} for w ∈ {4, 6}, via the
/// harmonic-weight theta transform (Hecke's trick at s = w).
pub fn eisenstein_g(k: &QuadField, lat: &KLattice, w: u32, prec: u32) -> BallComplex {
    assert!(w == 4 || w == 6);
    let zero = Elt::from_int(0, 0);
    let sums = lattice_sums(k, lat, &zero, prec);
    let rho = rho_ball(k, &sums.ic, prec);
    // Γ(w)(V/π)^w G_w = Σ' ω̄^w a^{−w}Γ(w,a) + i^{−w}V^w Σ' μ̄^w e^{−b}/b
    let mut sp = BallComplex::zero(prec);
    for (x, n) in &sums.primal {
        let a = rho.mul(&RealBall::from_rat(prec, n));
        let g = RealBall::gamma_upper(w as i32, &a).expect("a > 0");
        let apw = a.powi(w).recip().expect("a > 0");
        let xbar = k.pow(&k.conj(x), w);
        let xb = super::lattice::embed_elt(k, &xbar, prec);
        sp = sp.add(&xb.scale(&g.mul(&apw)));
    }
    let rho_lo = {
        let mut lo = rho.mid.clone();
        lo.sub_assign_round(&rho.rad, Round::Down);
        lo
    };
    // |ω̄^w a^{−w}Γ(w,a)| ≤ N^{w/2}·2e^{−a}/a ≤ (2/ρ)N^{w/2−1}e^{−ρN}
    let mut tail1 = shell_tail_up(&rho_lo, &sums.lambda_sq, &sums.primal_bound, w / 2 - 1);
    let mut inv_rho = Float::with_val(64, 2);
    inv_rho.div_assign_round(&rho_lo, Round::Up);
    tail1.mul_assign_round(&inv_rho, Round::Up);
    let sp = sp.add_error(&tail1);
    // dual side: μ = −i v / I, μ̄^w = i^w conj(v)^w / I^w, I = ic_signed·√|d|
    // so i^{−w}·μ̄^w·V^w = i^{−w}·i^w conj(v)^w (V/I)^w = conj(v)^w·(±1)^w
    // with V/I = sign(ic_signed) = −1 for oriented bases; (±1)^w = 1 (w even).
    let mut sd = BallComplex::zero(prec);
    for (v, n, _) in &sums.dual {
        let b = rho.mul(&RealBall::from_rat(prec, n));
        let eb = b.neg().exp().div(&b).expect("b > 0");
        let vbar = k.pow(&k.conj(v), w);
        let vb = super::lattice::embed_elt(k, &vbar, prec);
        sd = sd.add(&vb.scale(&eb));
    }
    let mut tail2 = shell_tail_up(&rho_lo, &sums.dual_lambda_sq, &sums.dual_bound, w / 2);
    let mut inv_rho2 = Float::with_val(64, 1);
    inv_rho2.div_assign_round(&rho_lo, Round::Up);
    tail2.mul_assign_round(&inv_rho2, Round::Up);
    let sd = sd.add_error(&tail2);
    // assemble: G_w = (π/V)^w [sp + sd·(V^w/I^w = sign^w = 1)·scale] / Γ(w)
    // V^w-part of the dual prefactor: handled by expressing
    // i^{−w}V^wμ̄^w = conj(v)^w/(something real positive)… carefully:
    // μ̄^w = i^w conj(v)^w / I^w, and i^{−w}·V^w/I^w = (V/I)^w = sign^w = 1.
    // The b_μ and e^{−b}/b used N(v)-based b with the SAME ρ: b_μ = ρ N(v).
    // But the true b_μ = πV|μ|² = ρ N(v) as computed in lattice_sums. ✓
    let total = sp.add(&sd);
    let pi_over_v = rho.clone(); // (π/V) = ρ
    let mut fact = Int::one();
    for i in 2..w {
        fact *= int(i as i64);
    }
    total
        .scale(&pi_over_v.powi(w))
        .scale(
            &RealBall::from_rational(prec, &Int::one(), &fact),
        )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int::rat;
    use crate::qfield::{make_field, IdealHNF};

    #[test]
    fn zeta_gaussian_at_2_vs_dirichlet() {
        // ζ_{Q(i)}(2)·4 = Σ'_{x∈Z[i]} N(x)^{−2} (w = 4 units per ideal);
        // compare theta formula with a direct truncated Dirichlet sum.
        let k = make_field(-1).unwrap();
        let lat = KLattice::from_ideal(&k, &IdealHNF::one());
        let zero = Elt::from_int(0, 0);
        let prec = 128;
        // G(2) = Σ'(π|x|²/V)^{−2} = (π/V)^{−2} Σ' N(x)^{−2}
        let g2 = shifted_zeta_at_int(&k, &lat, &zero, 2, prec);
        let rho = rho_ball(&k, &rat(1, 1), prec);
        let sum_n2 = g2.mul(&rho.powi(2));
        // direct: Σ over N ≤ X with tail ≤ ~ 2π·∫_X^∞ r^{-4}·r dr = π/X²·...
        let pts = enumerate_shifted(&k, &lat, &zero, &rat(40000, 1));
        let mut direct = RealBall::zero(prec);
        for p in pts {
            if p.is_zero() {
                continue;
            }
            let n = k.norm(&p);
            direct = direct.add(
                &RealBall::from_rat(prec, &n)
                    .powi(2)
                    .recip()
                    .unwrap(),
            );
        }
        let tail = rug::Float::with_val(32, 8.0 / 40000.0f64);
        let direct = direct.add_error(&tail);
        let diff = sum_n2.sub(&direct);
        assert!(
            diff.contains_zero() || diff.abs_upper().to_f64() < 3e-4,
            "theta {:?} vs direct {:?}",
            sum_n2,
            direct
        );
        // frozen reference: Σ' N^{-2} over Z[i] = 4·ζ(2)·β(2) = 6.0268120396...
        // β(2) Catalan: G = 0.9159655941..., ζ(2) = 1.6449340668...
        let reference = 4.0 * 1.6449340668482264 * 0.9159655941772190;
        assert!((sum_n2.to_f64() - reference).abs() < 1e-25);
    }

    #[test]
    fn eisenstein_g4_gaussian() {
        // G4(Z[i]) = Γ(1/4)^8/(3840 π²) ≈ 3.1512120021539...
        let k = make_field(-1).unwrap();
        let lat = KLattice::from_ideal(&k, &IdealHNF::one());
        let g4 = eisenstein_g(&k, &lat, 4, 160);
        assert!(
            (g4.re.to_f64() - 3.151212002153956).abs() < 1e-12,
            "G4 = {:?}",
            g4
        );
        assert!(g4.im.certainly_below_pow2(-60), "imag {:?}", g4.im);
        // G6(Z[i]) = 0 by symmetry (i·L = L ⇒ G6 = i^{−6}G6 = −G6)
        let g6 = eisenstein_g(&k, &lat, 6, 160);
        assert!(g6.re.certainly_below_pow2(-60));
        assert!(g6.im.certainly_below_pow2(-60));
    }

    #[test]
    fn hilbert_partial_zeta_value() {
        // modulus (1), shift 0-class: G(0) = −δ = −1 and the assembled
        // ζ_k(0) = G(0)/r_(1) = −1/w_k is checked in lfun tests.
        let k = make_field(-1).unwrap();
        let lat = KLattice::from_ideal(&k, &IdealHNF::one());
        let one = Elt::from_int(1, 0); // 1 ∈ O: δ = 1
        let (v0, _d0) = shifted_zeta_at_zero(&k, &lat, &one, 128);
        assert!(v0.contains_rat(&rat(-1, 1)));
    }
}
