//! Hecke L-functions of ray class characters at s = 0: the incomplete-gamma
//! partial-zeta route (independent of the Siegel machinery), the Kronecker
//! limit identity check against the Siegel–Ramachandra side, ζ_k(0), and the
//! Dirichlet-factorization oracle for decomposable quadratic characters.

use crate::ball::{BallComplex, RealBall};
use crate::error::{Error, Result};
use crate::exact::int::{int, kronecker_symbol, Int, Rat};
use crate::qfield::{factor_ideal, factor_rational_prime, splitting_type, IdealHNF, QuadField, Splitting};
use crate::rayclass::{conductor, RayCharacter, RayClassGroup, RayCtx};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::epstein::shifted_zeta_at_zero;
use super::lattice::KLattice;
use super::theta::theta_value;

/// Value and derivative of L_m(s, χ) at s = 0 (the imprimitive L attached to
/// the modulus of the group).
pub struct LAtZero {
    pub value: BallComplex,
    pub deriv: BallComplex,
}

/// ζ_m(·, c) partial-zeta value and derivative at 0 for one ray class.
fn partial_zeta_deriv0(
    k: &QuadField,
    g: &RayClassGroup,
    class_vec: &[Int],
    prec: u32,
) -> Result<(RealBall, RealBall)> {
    let a0 = g.class_representative(class_vec);
    let lat_ideal = g.modulus.mul(k, &a0.inverse(k));
    let lat = KLattice::from_ideal(k, &lat_ideal);
    let one = crate::qfield::Elt::from_int(1, 0);
    let (g0, gp) = shifted_zeta_at_zero(k, &lat, &one, prec);
    // ζ(s, c) = N(a0)^s (π/V)^s G(s)/r_m:
    //   value(0) = G(0)/r_m
    //   deriv(0) = [G'(0) + ln(N(a0)·π/V)·G(0)]/r_m
    let r = RealBall::from_rational(prec, &int(g.r_m as i64), &Int::one());
    let value = g0.div(&r).expect("r_m > 0");
    let deriv = if g0.contains_zero() && g0.rad_f64() == 0.0 {
        gp.div(&r).expect("r_m > 0")
    } else {
        // ln(N(a0)·π/V): V = ic·√|d| of the reduced lattice
        let ic = super::lattice::im_coeff(k, &k.mul(&k.conj(&lat.b1), &lat.b2)).abs();
        let s = super::lattice::sqrt_abs_d(k, prec);
        let v = RealBall::from_rat(prec, &ic).mul(&s);
        let na0 = RealBall::from_rat(prec, &a0.norm());
        let pi = RealBall::pi(prec);
        let arg = na0.mul(&pi).div(&v).expect("V > 0");
        let ln = arg.ln().ok_or_else(|| Error::Internal("ln of nonpositive".into()))?;
        gp.add(&ln.mul(&g0)).div(&r).expect("r_m > 0")
    };
    Ok((value, deriv))
}

/// L_m(0, χ) and L'_m(0, χ) for a nontrivial character, by summing partial
/// zetas over the ray classes. Computed WITHOUT any Siegel/Klein values.
pub fn hecke_l_at_zero(
    k: &QuadField,
    g: &RayClassGroup,
    chi: &RayCharacter,
    prec: u32,
) -> Result<LAtZero> {
    if chi.is_trivial() {
        return Err(Error::Precondition(
            "hecke_l_at_zero requires a nontrivial character".into(),
        ));
    }
    let mut value = BallComplex::zero(prec);
    let mut deriv = BallComplex::zero(prec);
    for c in g.classes() {
        let (zv, zd) = partial_zeta_deriv0(k, g, &c, prec)?;
        let cv = chi.value(g, &c, prec);
        value = value.add(&cv.scale(&zv));
        deriv = deriv.add(&cv.scale(&zd));
    }
    Ok(LAtZero { value, deriv })
}

/// ζ_k(0) = −h_k/w_k, exactly.
pub fn zeta_k_at_0(k: &QuadField) -> Rat {
    let h = crate::qfield::class_group(k).order;
    Rat::new(-h, int(k.w_k as i64))
}

/// ζ_k(0) recomputed through the lattice-sum machinery (sums the partial
/// zetas of all ideal classes mod (1)); used as a cross-check.
pub fn zeta_k_at_0_lattice(k: &QuadField, ctx: &RayCtx, prec: u32) -> Result<RealBall> {
    let g = ctx.group(&IdealHNF::one())?;
    let mut total = RealBall::zero(prec);
    for c in g.classes() {
        let (zv, _) = partial_zeta_deriv0(k, &g, &c, prec)?;
        total = total.add(&zv);
    }
    Ok(total)
}

/// The canonical Siegel–Ramachandra invariant of a ray class:
/// θ(1; m·c_rep^{-1})^{N(m)}.
pub fn siegel_invariant(
    k: &QuadField,
    g: &RayClassGroup,
    class_vec: &[Int],
    prec: u32,
) -> Result<BallComplex> {
    let a0 = g.class_representative(class_vec);
    let lat_ideal = g.modulus.mul(k, &a0.inverse(k));
    let lat = KLattice::from_ideal(k, &lat_ideal);
    let one = crate::qfield::Elt::from_int(1, 0);
    let th = theta_value(k, &lat, &one, prec);
    let n = g.modulus.norm_int()?;
    let e = n
        .to_u32()
        .ok_or_else(|| Error::CapExceeded("modulus norm too large".into()))?;
    Ok(th.powi(e))
}

/// ln(ε^σ · conj(ε^σ)) in the squared-modulus convention, for the Stark
/// unit conjugate labeled by a ray class: (w_m/12)·ln(θ θ̄)(1; L_c).
/// (The N(m)-th powers cancel between ε^{12N} = E^{w} and E = θ^{N}.)
pub fn stark_log_norm(
    k: &QuadField,
    g: &RayClassGroup,
    w_m: u32,
    class_vec: &[Int],
    prec: u32,
) -> Result<RealBall> {
    let a0 = g.class_representative(class_vec);
    let lat_ideal = g.modulus.mul(k, &a0.inverse(k));
    let lat = KLattice::from_ideal(k, &lat_ideal);
    let one = crate::qfield::Elt::from_int(1, 0);
    let th = theta_value(k, &lat, &one, prec);
    let ln = th
        .ln_norm()
        .ok_or_else(|| Error::Internal("theta value contains zero".into()))?;
    Ok(ln.mul(&RealBall::from_rat(prec, &Rat::new(int(w_m as i64), int(12)))))
}

/// Report of one Kronecker-limit verification.
pub struct KroneckerReport {
    pub lhs: BallComplex,
    pub rhs: BallComplex,
    /// certified upper bound for |lhs − rhs|
    pub residual: f64,
    pub l_value_at_0: BallComplex,
}

/// Verify L'_m(0, χ) = −(1/w_m) Σ_σ χ(σ) ln|ε^σ| (squared-modulus |·|),
/// with the left side from the incomplete-gamma route and the right side
/// from Siegel–Ramachandra theta invariants. The two routes share no code
/// beyond ball arithmetic.
pub fn verify_kronecker(
    ctx: &RayCtx,
    g: &RayClassGroup,
    chi: &RayCharacter,
    w_m: u32,
    prec: u32,
) -> Result<KroneckerReport> {
    let k = &ctx.k;
    let l = hecke_l_at_zero(k, g, chi, prec)?;
    // RHS = −(1/w_m) Σ_c χ(c)·(w_m/12)·ln(θθ̄)(c) = −(1/12) Σ_c χ(c) ln(θθ̄)
    let mut rhs = BallComplex::zero(prec);
    for c in g.classes() {
        let a0 = g.class_representative(&c);
        let lat_ideal = g.modulus.mul(k, &a0.inverse(k));
        let lat = KLattice::from_ideal(k, &lat_ideal);
        let one = crate::qfield::Elt::from_int(1, 0);
        let th = theta_value(k, &lat, &one, prec);
        let ln = th
            .ln_norm()
            .ok_or_else(|| Error::Internal("theta value contains zero".into()))?;
        let cv = chi.value(g, &c, prec);
        rhs = rhs.add(&cv.scale(&ln));
    }
    rhs = rhs.scale(&RealBall::from_rat(prec, &Rat::new(int(-1), int(12))));
    let diff = l.deriv.sub(&rhs);
    let residual = diff.abs_upper().to_f64();
    let _ = w_m; // the w_m factors cancel identically; kept in the signature
                 // because the identity is stated per-modulus with its w_m
    Ok(KroneckerReport {
        lhs: l.deriv,
        rhs,
        residual,
        l_value_at_0: l.value,
    })
}

// ---------------- Dirichlet-factorization oracle ----------------

/// For a Galois-stable quadratic ray character, the induced degree-2
/// L-function factors as L(s, χ_{D1})·L(s, χ_{D2}) for a pair of fundamental
/// discriminants with D1·D2 ≡ d_k·N(f_χ) up to squares and
/// |D1 D2| = |disc(k)|·N(f_χ). Returns (D_plus > 0, D_minus < 0) or None.
pub fn dirichlet_factorization(
    ctx: &RayCtx,
    g: &RayClassGroup,
    chi: &RayCharacter,
) -> Result<Option<(Int, Int)>> {
    let k = &ctx.k;
    if chi.order != int(2) {
        return Ok(None);
    }
    let f = conductor(ctx, g, chi)?;
    let gf = ctx.group(&f)?;
    let chi_f = restrict_to_conductor(ctx, g, chi, &gf)?;
    let target: Int = k.disc.clone().abs() * f.norm_int()?;
    // candidate factorizations |D1|·|D2| = target
    let mut candidates = vec![];
    let mut d1 = Int::one();
    while &d1 * &d1 <= &target * &target {
        if &d1 > &target {
            break;
        }
        if (&target % &d1).is_zero() {
            let d2 = &target / &d1;
            for (a, b) in [(d1.clone(), -d2.clone()), (d2.clone(), -d1.clone())] {
                if is_fundamental_discriminant(&a) && is_fundamental_discriminant(&b) {
                    // D1·D2/d_k must be a perfect square
                    let prod = &a * &b;
                    let quot_num = &prod / k.disc.clone().gcd(&prod);
                    let _ = quot_num;
                    let q = Rat::new(prod, k.disc.clone());
                    if q.denom().is_one() && crate::exact::int::perfect_sqrt(q.numer()).is_some() {
                        candidates.push((a, b));
                    }
                }
            }
        }
        d1 += 1;
    }
    candidates.sort();
    candidates.dedup();
    // verify against split/inert primes
    'cand: for (dp, dm) in candidates {
        for p in crate::exact::int::primes_up_to(500) {
            let pi = int(p as i64);
            if (&target % &pi).is_zero() || !IdealHNF::one().is_one() {
                if (&target % &pi).is_zero() {
                    continue;
                }
            }
            match splitting_type(k, &pi) {
                Splitting::Split => {
                    let pr = factor_rational_prime(k, &pi)[0].0.clone();
                    if !pr.is_coprime(k, &f) {
                        continue;
                    }
                    let t = chi_f.turn_of_ideal(&gf, &pr)?;
                    let chi_val = if t.is_zero() { 1 } else { -1 };
                    if kronecker_symbol(&dp, &pi) != chi_val
                        || kronecker_symbol(&dm, &pi) != chi_val
                    {
                        continue 'cand;
                    }
                }
                Splitting::Inert => {
                    if kronecker_symbol(&dp, &pi) * kronecker_symbol(&dm, &pi) != -1 {
                        continue 'cand;
                    }
                }
                Splitting::Ramified => {}
            }
        }
        return Ok(Some((dp, dm)));
    }
    Ok(None)
}

/// Restriction of χ (on Cl_m) to the group mod its conductor.
pub fn restrict_to_conductor(
    ctx: &RayCtx,
    g: &RayClassGroup,
    chi: &RayCharacter,
    gf: &RayClassGroup,
) -> Result<RayCharacter> {
    // χ_pr(g_f_i) := χ(any preimage): find preimages of each gf generator:
    // a generator ideal of gf is coprime to f but may not be coprime to m;
    // use: χ_pr determined by values on ideals coprime to m: for each gf
    // generator vector e_i pick an ideal b with dlog_f(b) = e_i and b
    // coprime to m: search small primes.
    let k = &ctx.k;
    let mut exps = vec![];
    for i in 0..gf.group.rank() {
        let mut target = gf.group.zero();
        target[i] = Int::one();
        let mut found: Option<Rat> = None;
        'scan: for p in crate::exact::int::primes_up_to(20000) {
            let pi = int(p as i64);
            for (pr, _) in factor_rational_prime(k, &pi) {
                if !pr.is_coprime(k, &g.modulus) {
                    continue;
                }
                let v = gf.dlog(&pr)?;
                if v == target {
                    let t = chi.turn_of_ideal(g, &pr)?;
                    found = Some(t);
                    break 'scan;
                }
            }
        }
        let t = found.ok_or_else(|| {
            Error::SearchExhausted("no coprime preimage prime for conductor restriction".into())
        })?;
        // exponent c with c/d = t
        let d = &gf.group.divisors[i];
        let c = (t * Rat::from(d.clone())).numer().clone();
        exps.push(c);
    }
    Ok(RayCharacter::new(gf, exps))
}

fn is_fundamental_discriminant(d: &Int) -> bool {
    if d.is_one() {
        return true; // trivial character
    }
    if d.is_zero() {
        return false;
    }
    let m4 = d.mod_floor(&int(4));
    if m4 == int(1) {
        return crate::exact::int::is_squarefree(d);
    }
    if m4.is_zero() {
        let q: Int = d / 4;
        let qm4 = q.mod_floor(&int(4));
        return crate::exact::int::is_squarefree(&q) && (qm4 == int(2) || qm4 == int(3));
    }
    false
}

/// L(0, χ_D) for an odd primitive quadratic character (D < 0):
/// −(1/|D|) Σ_{a=1}^{|D|−1} χ_D(a)·a, exactly.
pub fn dirichlet_l_at_0_odd(d: &Int) -> Rat {
    assert!(d.is_negative());
    let f = d.abs();
    let mut s = Int::zero();
    let mut a = Int::one();
    while a < f {
        s += int(kronecker_symbol(d, &a) as i64) * &a;
        a += 1;
    }
    Rat::new(-s, f)
}

/// L'(0, χ_D) for an even nontrivial primitive quadratic character (D > 1):
/// −(1/2) Σ_{a=1}^{D−1} χ_D(a)·ln sin(πa/D).
pub fn dirichlet_l_deriv0_even(d: &Int, prec: u32) -> RealBall {
    assert!(d > &Int::one());
    let pi = RealBall::pi(prec);
    let mut total = RealBall::zero(prec);
    let mut a = Int::one();
    while &a < d {
        let chi = kronecker_symbol(d, &a);
        if chi != 0 {
            let t = RealBall::from_rational(prec, &a, d);
            let s = pi.mul(&t).sin();
            let ln = s.ln().expect("sin(πa/D) > 0 for 0 < a < D");
            total = total.add(&ln.mul_i64(chi as i64));
        }
        a += 1;
    }
    total.mul(&RealBall::from_rat(prec, &Rat::new(int(-1), int(2))))
}

/// Independent evaluation of L'_m(0, χ) for a decomposable quadratic χ:
/// L'_pr(0) = L(0, χ_{D−})·L'(0, χ_{D+}) times the imprimitivity factor
/// Π_{p | m, p ∤ f}(1 − χ_pr(p)).
pub fn l_deriv0_via_dirichlet(
    ctx: &RayCtx,
    g: &RayClassGroup,
    chi: &RayCharacter,
    prec: u32,
) -> Result<Option<BallComplex>> {
    let Some((dp, dm)) = dirichlet_factorization(ctx, g, chi)? else {
        return Ok(None);
    };
    let k = &ctx.k;
    let f = conductor(ctx, g, chi)?;
    let gf = ctx.group(&f)?;
    let chi_f = restrict_to_conductor(ctx, g, chi, &gf)?;
    let l0_odd = dirichlet_l_at_0_odd(&dm);
    let lp_even = dirichlet_l_deriv0_even(&dp, prec);
    let mut result = BallComplex::from_real(
        RealBall::from_rat(prec, &l0_odd).mul(&lp_even),
    );
    // Euler factors at primes dividing m but not f
    for (p, _) in factor_ideal(k, &g.modulus)? {
        if p.divides(k, &f) {
            continue;
        }
        let t = chi_f.turn_of_ideal(&gf, &p)?;
        let factor = BallComplex::one(prec).sub(&BallComplex::e2pi(prec, &t));
        result = result.mul(&factor);
    }
    Ok(Some(result))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int::rat;
    use crate::qfield::{make_field, Elt};

    fn ideal_of(k: &QuadField, x: i64, y: i64) -> IdealHNF {
        IdealHNF::principal(k, &Elt::from_int(x, y)).unwrap()
    }

    #[test]
    fn zeta_k_values() {
        assert_eq!(zeta_k_at_0(&make_field(-1).unwrap()), rat(-1, 4));
        assert_eq!(zeta_k_at_0(&make_field(-3).unwrap()), rat(-1, 6));
        assert_eq!(zeta_k_at_0(&make_field(-5).unwrap()), rat(-1, 1));
        // lattice route reproduces −h/w
        for d in [-1i64, -3, -5] {
            let k = make_field(d).unwrap();
            let ctx = RayCtx::new(k.clone());
            let z = zeta_k_at_0_lattice(&k, &ctx, 128).unwrap();
            assert!(z.contains_rat(&zeta_k_at_0(&k)), "d={d}: {:?}", z);
        }
    }

    #[test]
    fn l_value_vanishes_at_zero() {
        let k = make_field(-1).unwrap();
        let ctx = RayCtx::new(k.clone());
        let g = ctx.group(&ideal_of(&k, 3, 0)).unwrap();
        let chi = RayCharacter::new(&g, vec![Int::one()]);
        let l = hecke_l_at_zero(&k, &g, &chi, 160).unwrap();
        assert!(l.value.re.certainly_below_pow2(-120), "{:?}", l.value.re);
        assert!(l.value.im.certainly_below_pow2(-120));
        // L'(0,χ) should be ~ 0.2206356919... (pinned later by the oracle);
        // here only: nonzero and real
        assert!(l.deriv.im.certainly_below_pow2(-100));
        assert!(l.deriv.re.certainly_positive());
    }

    #[test]
    fn dirichlet_oracle_agreement() {
        // Q(i), m=(3), χ order 2: the induced rep factors as χ_{−3}·χ_{12}
        let k = make_field(-1).unwrap();
        let ctx = RayCtx::new(k.clone());
        let g = ctx.group(&ideal_of(&k, 3, 0)).unwrap();
        let chi = RayCharacter::new(&g, vec![Int::one()]);
        let fac = dirichlet_factorization(&ctx, &g, &chi).unwrap();
        assert_eq!(fac, Some((int(12), int(-3))));
        let prec = 192;
        let oracle = l_deriv0_via_dirichlet(&ctx, &g, &chi, prec)
            .unwrap()
            .expect("decomposable");
        let route_a = hecke_l_at_zero(&k, &g, &chi, prec).unwrap().deriv;
        let diff = route_a.sub(&oracle);
        assert!(
            diff.abs_upper().to_f64() < 1e-25,
            "routes disagree: {:?} vs {:?}",
            route_a,
            oracle
        );
    }

    #[test]
    fn conjugate_symmetry() {
        // L'(0, χ̄) = conj L'(0, χ)
        let k = make_field(-1).unwrap();
        let ctx = RayCtx::new(k.clone());
        let g = ctx.group(&ideal_of(&k, 5, 0)).unwrap();
        let chi = RayCharacter::new(&g, vec![Int::one()]); // order 4
        assert_eq!(chi.order, int(4));
        let prec = 160;
        let a = hecke_l_at_zero(&k, &g, &chi, prec).unwrap().deriv;
        let b = hecke_l_at_zero(&k, &g, &chi.conjugate(&g), prec)
            .unwrap()
            .deriv;
        let diff = a.conj().sub(&b);
        assert!(diff.abs_upper().to_f64() < 1e-40, "{:?}", diff.abs_upper());
    }
}
