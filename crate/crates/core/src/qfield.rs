//! Exact arithmetic in an imaginary quadratic field k = Q(√d), its ring of
//! integers, its ideals in canonical Hermite normal form, and the ideal
//! class group computed by reduced binary quadratic forms.

use crate::error::{Error, Result};
use crate::exact::int::{int, is_prime, is_squarefree, isqrt, perfect_sqrt, Int, Rat};
use crate::exact::mat::{hnf, IMat};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// An imaginary quadratic field Q(√d), d < 0 squarefree.
///
/// The ring of integers is Z + Zω with ω = (1+√d)/2 when d ≡ 1 (mod 4) and
/// ω = √d otherwise; disc is d or 4d accordingly and w_k = #μ_k ∈ {2,4,6}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadField {
    pub d: Int,
    pub disc: Int,
    pub w_k: u32,
    /// trace of ω
    pub omega_tr: Int,
    /// norm of ω
    pub omega_nm: Int,
}

pub fn make_field(d: i64) -> Result<QuadField> {
    QuadField::new(&int(d))
}

impl QuadField {
    pub fn new(d: &Int) -> Result<QuadField> {
        if !d.is_negative() {
            return Err(Error::InvalidField(format!("d = {d} must be negative")));
        }
        if !is_squarefree(d) {
            return Err(Error::InvalidField(format!("d = {d} must be squarefree")));
        }
        let one_mod4 = d.mod_floor(&int(4)) == int(1);
        let disc = if one_mod4 { d.clone() } else { d * 4 };
        let w_k = if disc == int(-4) {
            4
        } else if disc == int(-3) {
            6
        } else {
            2
        };
        let (omega_tr, omega_nm) = if one_mod4 {
            (Int::one(), (Int::one() - d) / 4)
        } else {
            (Int::zero(), -d.clone())
        };
        Ok(QuadField {
            d: d.clone(),
            disc,
            w_k,
            omega_tr,
            omega_nm,
        })
    }

    pub fn omega_description(&self) -> &'static str {
        if self.omega_tr.is_one() {
            "(1+sqrt(d))/2"
        } else {
            "sqrt(d)"
        }
    }

    /// ω as element.
    pub fn omega(&self) -> Elt {
        Elt {
            x: Rat::zero(),
            y: Rat::one(),
        }
    }

    pub fn one(&self) -> Elt {
        Elt::from_int(1, 0)
    }

    /// A generator of μ_k: i for d = −1, ζ6 = ω for d = −3, else −1.
    pub fn torsion_generator(&self) -> Elt {
        match self.w_k {
            4 | 6 => self.omega(),
            _ => Elt::from_int(-1, 0),
        }
    }

    /// All w_k roots of unity.
    pub fn roots_of_unity(&self) -> Vec<Elt> {
        let g = self.torsion_generator();
        let mut v = vec![];
        let mut cur = self.one();
        for _ in 0..self.w_k {
            v.push(cur.clone());
            cur = self.mul(&cur, &g);
        }
        v
    }

    // ---- element arithmetic (x + y ω, rational coordinates) ----

    pub fn add(&self, a: &Elt, b: &Elt) -> Elt {
        Elt {
            x: &a.x + &b.x,
            y: &a.y + &b.y,
        }
    }
    pub fn sub(&self, a: &Elt, b: &Elt) -> Elt {
        Elt {
            x: &a.x - &b.x,
            y: &a.y - &b.y,
        }
    }
    pub fn mul(&self, a: &Elt, b: &Elt) -> Elt {
        // (x1 + y1 ω)(x2 + y2 ω) with ω² = tr·ω − nm
        let tr = Rat::from(self.omega_tr.clone());
        let nm = Rat::from(self.omega_nm.clone());
        let cross = &a.y * &b.y;
        Elt {
            x: &a.x * &b.x - &cross * nm,
            y: &a.x * &b.y + &a.y * &b.x + &cross * tr,
        }
    }
    pub fn conj(&self, a: &Elt) -> Elt {
        // conj(ω) = tr − ω
        Elt {
            x: &a.x + &a.y * Rat::from(self.omega_tr.clone()),
            y: -a.y.clone(),
        }
    }
    pub fn norm(&self, a: &Elt) -> Rat {
        let c = self.mul(a, &self.conj(a));
        debug_assert!(c.y.is_zero());
        c.x
    }
    pub fn trace(&self, a: &Elt) -> Rat {
        &a.x * Rat::from(int(2)) + &a.y * Rat::from(self.omega_tr.clone())
    }
    pub fn inv(&self, a: &Elt) -> Option<Elt> {
        let n = self.norm(a);
        if n.is_zero() {
            return None;
        }
        let c = self.conj(a);
        Some(Elt {
            x: &c.x / &n,
            y: &c.y / &n,
        })
    }
    pub fn pow(&self, a: &Elt, e: u32) -> Elt {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, a: &Elt) -> bool {
        a.is_integral() && self.norm(a).is_one()
    }
}

/// Element x + y·ω of k (rational coordinates on the integral basis).
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct Elt {
    pub x: Rat,
    pub y: Rat,
}

impl Elt {
    pub fn from_int(x: i64, y: i64) -> Elt {
        Elt {
            x: Rat::from(int(x)),
            y: Rat::from(int(y)),
        }
    }
    pub fn from_ints(x: &Int, y: &Int) -> Elt {
        Elt {
            x: Rat::from(x.clone()),
            y: Rat::from(y.clone()),
        }
    }
    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }
    pub fn is_integral(&self) -> bool {
        self.x.denom().is_one() && self.y.denom().is_one()
    }
    pub fn int_coords(&self) -> Option<(Int, Int)> {
        if self.is_integral() {
            Some((self.x.numer().clone(), self.y.numer().clone()))
        } else {
            None
        }
    }
}

impl fmt::Display for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*w", self.x, self.y)
    }
}

/// Fractional ideal of O_k in canonical form `c · (aZ + (b+ω)Z)` with
/// a > 0, 0 ≤ b < a, a | N(b+ω), and c a positive rational.
#[derive(Clone, PartialEq, Eq, Debug, PartialOrd, Ord, Hash)]
pub struct IdealHNF {
    pub a: Int,
    pub b: Int,
    pub c: Rat,
}

impl fmt::Display for IdealHNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*[{}, {}+w]", self.c, self.a, self.b)
    }
}

impl IdealHNF {
    pub fn one() -> IdealHNF {
        IdealHNF {
            a: Int::one(),
            b: Int::zero(),
            c: Rat::one(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_one()
    }

    /// Construct from raw HNF data, validating the O_k-module condition.
    pub fn new(k: &QuadField, a: Int, b: Int, c: Rat) -> Result<IdealHNF> {
        if !a.is_positive() || !c.is_positive() {
            return Err(Error::Ideal("a and c must be positive".into()));
        }
        let b = b.mod_floor(&a);
        let nb = &b * &b + &b * &k.omega_tr + &k.omega_nm;
        if !(&nb % &a).is_zero() {
            return Err(Error::Ideal(format!(
                "aZ + (b+w)Z is not an O_k-module: a={a}, b={b}"
            )));
        }
        Ok(IdealHNF { a, b, c })
    }

    /// The ideal spanned as Z-module by rows of an integer matrix in the
    /// basis (1, ω), scaled by `scale`. Rows must already be ω-closed.
    ///
    /// The HNF is taken in the column order (ω, 1), so the echelon shape is
    /// [[c, b], [0, a]], i.e. the module (b + cω)Z + aZ with c | a, c | b.
    fn from_lattice_rows(k: &QuadField, rows: &IMat, scale: Rat) -> Result<IdealHNF> {
        let swapped: IMat = rows
            .iter()
            .map(|r| vec![r[1].clone(), r[0].clone()])
            .collect();
        let h = hnf(&swapped);
        let nz: Vec<&Vec<Int>> = h.iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
        if nz.len() != 2 {
            return Err(Error::Ideal("lattice is degenerate".into()));
        }
        let (c_full, b_full, a_full) = (&nz[0][0], &nz[0][1], &nz[1][1]);
        if a_full.is_zero() || c_full.is_zero() || !nz[1][0].is_zero() {
            return Err(Error::Ideal("lattice not of full rank".into()));
        }
        if !(a_full % c_full).is_zero() || !(b_full % c_full).is_zero() {
            return Err(Error::Internal("lattice is not an O_k-module".into()));
        }
        let a = a_full / c_full;
        let b = (b_full / c_full).mod_floor(&a);
        IdealHNF::new(k, a, b, scale * Rat::from(c_full.clone()))
    }

    /// Principal ideal (x), x ≠ 0 (x may be non-integral).
    pub fn principal(k: &QuadField, x: &Elt) -> Result<IdealHNF> {
        if x.is_zero() {
            return Err(Error::Ideal("principal ideal of zero".into()));
        }
        let den = x.x.denom().lcm(x.y.denom());
        let xi = Elt {
            x: &x.x * Rat::from(den.clone()),
            y: &x.y * Rat::from(den.clone()),
        };
        let (u, v) = xi.int_coords().unwrap();
        let xo = k.mul(&xi, &k.omega());
        let (p, q) = xo.int_coords().unwrap();
        let rows = vec![vec![u, v], vec![p, q]];
        IdealHNF::from_lattice_rows(k, &rows, Rat::new(Int::one(), den))
    }

    pub fn from_generator_elts(k: &QuadField, gens: &[Elt]) -> Result<IdealHNF> {
        let mut den = Int::one();
        for g in gens {
            den = den.lcm(g.x.denom()).lcm(g.y.denom());
        }
        let mut rows: IMat = vec![];
        for g in gens {
            let gi = Elt {
                x: &g.x * Rat::from(den.clone()),
                y: &g.y * Rat::from(den.clone()),
            };
            let (u, v) = gi.int_coords().unwrap();
            let go = k.mul(&gi, &k.omega());
            let (p, q) = go.int_coords().unwrap();
            rows.push(vec![u, v]);
            rows.push(vec![p, q]);
        }
        IdealHNF::from_lattice_rows(k, &rows, Rat::new(Int::one(), den))
    }

    pub fn norm(&self) -> Rat {
        &self.c * &self.c * Rat::from(self.a.clone())
    }

    pub fn is_integral(&self) -> bool {
        self.c.denom().is_one()
    }

    /// Norm of an integral ideal as an integer.
    pub fn norm_int(&self) -> Result<Int> {
        let n = self.norm();
        if n.denom().is_one() {
            Ok(n.numer().clone())
        } else {
            Err(Error::Ideal("norm of fractional ideal".into()))
        }
    }

    /// Z-basis of the ideal as elements of k: (c·a, c·(b+ω)).
    pub fn basis(&self) -> (Elt, Elt) {
        (
            Elt {
                x: &self.c * Rat::from(self.a.clone()),
                y: Rat::zero(),
            },
            Elt {
                x: &self.c * Rat::from(self.b.clone()),
                y: self.c.clone(),
            },
        )
    }

    pub fn contains(&self, x: &Elt) -> bool {
        let xs = Elt {
            x: &x.x / &self.c,
            y: &x.y / &self.c,
        };
        if !xs.y.denom().is_one() {
            return false;
        }
        let n = xs.y.numer().clone();
        let rem = &xs.x - Rat::from(&n * &self.b);
        rem.denom().is_one() && (rem.numer() % &self.a).is_zero()
    }

    pub fn mul(&self, k: &QuadField, other: &IdealHNF) -> IdealHNF {
        let g1 = [
            Elt::from_ints(&self.a, &Int::zero()),
            Elt::from_ints(&self.b, &Int::one()),
        ];
        let g2 = [
            Elt::from_ints(&other.a, &Int::zero()),
            Elt::from_ints(&other.b, &Int::one()),
        ];
        let mut rows: IMat = vec![];
        for x in &g1 {
            for y in &g2 {
                let p = k.mul(x, y);
                let (u, v) = p.int_coords().unwrap();
                let po = k.mul(&p, &k.omega());
                let (s, t) = po.int_coords().unwrap();
                rows.push(vec![u, v]);
                rows.push(vec![s, t]);
            }
        }
        IdealHNF::from_lattice_rows(k, &rows, &self.c * &other.c)
            .expect("product of ideals is an ideal")
    }

    pub fn conj(&self, k: &QuadField) -> IdealHNF {
        let b = (-&self.b - &k.omega_tr).mod_floor(&self.a);
        IdealHNF::new(k, self.a.clone(), b, self.c.clone()).expect("conjugate ideal")
    }

    pub fn inverse(&self, k: &QuadField) -> IdealHNF {
        // primitive·conj(primitive) = (a), so inverse = conj scaled by 1/(a c)
        let conj = self.conj(k);
        IdealHNF {
            a: conj.a,
            b: conj.b,
            c: Rat::one() / (&self.c * Rat::from(self.a.clone())),
        }
    }

    pub fn pow(&self, k: &QuadField, e: i64) -> IdealHNF {
        if e < 0 {
            return self.inverse(k).pow(k, -e);
        }
        let mut acc = IdealHNF::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(k, &base);
            }
            base = base.mul(k, &base);
            e >>= 1;
        }
        acc
    }

    /// Sum (gcd) of two ideals.
    pub fn sum(&self, k: &QuadField, other: &IdealHNF) -> IdealHNF {
        let (a1, b1) = self.basis();
        let (a2, b2) = other.basis();
        IdealHNF::from_generator_elts(k, &[a1, b1, a2, b2]).expect("sum of ideals")
    }

    pub fn is_coprime(&self, k: &QuadField, other: &IdealHNF) -> bool {
        self.sum(k, other).is_one()
    }

    pub fn divides(&self, k: &QuadField, other: &IdealHNF) -> bool {
        let q = other.mul(k, &self.inverse(k));
        q.c.denom().is_one()
    }

    /// Exact valuation of a nonzero fractional ideal at a prime ideal.
    pub fn valuation(&self, k: &QuadField, prime: &IdealHNF) -> i64 {
        let den = self.c.denom();
        if !den.is_one() {
            // self = (self * den) / (den): both parts integral
            let scaled = IdealHNF {
                a: self.a.clone(),
                b: self.b.clone(),
                c: &self.c * Rat::from(den.clone()),
            };
            let den_ideal = IdealHNF {
                a: Int::one(),
                b: Int::zero(),
                c: Rat::from(den.clone()),
            };
            return scaled.valuation(k, prime) - den_ideal.valuation(k, prime);
        }
        let inv = prime.inverse(k);
        let mut v = 0i64;
        let mut cur = self.clone();
        loop {
            let next = cur.mul(k, &inv);
            if next.c.denom().is_one() {
                v += 1;
                cur = next;
            } else {
                break;
            }
        }
        v
    }

    /// Residue system of O_k modulo an integral ideal.
    pub fn residues(&self, _k: &QuadField) -> Vec<Elt> {
        assert!(self.c.denom().is_one());
        let ci = self.c.numer().clone();
        let a_full = &self.a * &ci;
        let mut out = vec![];
        let mut y = Int::zero();
        while y < ci {
            let mut x = Int::zero();
            while x < a_full {
                out.push(Elt::from_ints(&x, &y));
                x += 1;
            }
            y += 1;
        }
        out
    }

    /// Reduce an integral element modulo an integral ideal into the
    /// canonical residue representative.
    pub fn reduce_elt(&self, _k: &QuadField, e: &Elt) -> Elt {
        assert!(self.c.denom().is_one(), "reduce mod fractional ideal");
        let ci = self.c.numer().clone();
        let (x, y) = e.int_coords().expect("reduce of non-integral element");
        let q = y.div_floor(&ci);
        let y2 = &y - &q * &ci;
        let x2 = &x - &q * (&ci * &self.b);
        let a_full = &self.a * &ci;
        let x3 = x2.mod_floor(&a_full);
        Elt::from_ints(&x3, &y2)
    }

    /// Number of residues: the norm.
    pub fn residue_count(&self) -> Int {
        assert!(self.c.denom().is_one());
        let ci = self.c.numer();
        &self.a * ci * ci
    }
}

// -------- prime factorization --------

/// Splitting type of a rational prime in k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// Factor p·O_k: the primes above p with ramification indices.
pub fn factor_rational_prime(k: &QuadField, p: &Int) -> Vec<(IdealHNF, u32)> {
    assert!(is_prime(p), "factor_rational_prime on composite {p}");
    // roots of N(b+ω) = b² + tr·b + nm ≡ 0 (mod p) give primes (p, b+ω);
    // the quadratic has discriminant disc(k), solved by Tonelli–Shanks for
    // odd p and by scanning the two residues at p = 2.
    let mut roots = vec![];
    if p == &int(2) {
        for r in [Int::zero(), Int::one()] {
            let val = (&r * &r + &r * &k.omega_tr + &k.omega_nm).mod_floor(p);
            if val.is_zero() {
                roots.push(r);
            }
        }
    } else if let Some(s) = crate::exact::int::sqrt_mod_prime(&k.disc, p) {
        let inv2 = crate::exact::int::inv_mod(&int(2), p).unwrap();
        let r1 = ((-&k.omega_tr + &s) * &inv2).mod_floor(p);
        let r2 = ((-&k.omega_tr - &s) * &inv2).mod_floor(p);
        roots.push(r1.clone());
        if r2 != r1 {
            roots.push(r2);
        }
    }
    match roots.len() {
        0 => vec![(
            IdealHNF {
                a: Int::one(),
                b: Int::zero(),
                c: Rat::from(p.clone()),
            },
            1,
        )],
        1 => {
            let pr = IdealHNF::new(k, p.clone(), roots[0].clone(), Rat::one()).unwrap();
            vec![(pr, 2)]
        }
        2 => roots
            .into_iter()
            .map(|b| (IdealHNF::new(k, p.clone(), b, Rat::one()).unwrap(), 1))
            .collect(),
        _ => unreachable!("quadratic has at most 2 roots mod p"),
    }
}

pub fn splitting_type(k: &QuadField, p: &Int) -> Splitting {
    let f = factor_rational_prime(k, p);
    match (f.len(), f[0].1) {
        (2, _) => Splitting::Split,
        (1, 2) => Splitting::Ramified,
        _ => Splitting::Inert,
    }
}

/// Factor an integral ideal into primes with exponents, sorted by norm.
pub fn factor_ideal(k: &QuadField, a: &IdealHNF) -> Result<Vec<(IdealHNF, u32)>> {
    let n = a.norm_int()?;
    let mut out = vec![];
    for (p, _) in crate::exact::int::factor(&n) {
        for (pr, _) in factor_rational_prime(k, &p) {
            let v = a.valuation(k, &pr);
            if v > 0 {
                out.push((pr, v as u32));
            }
        }
    }
    out.sort_by_key(|x| (x.0.norm_int().unwrap(), x.0.b.clone()));
    Ok(out)
}

/// Find a generator of a principal integral ideal by bounded norm-form
/// search; None when the ideal is not principal.
pub fn principal_generator(k: &QuadField, a: &IdealHNF) -> Option<Elt> {
    let n = a.norm_int().ok()?;
    if n.is_zero() {
        return None;
    }
    // x = u + vω with N(x) = u² + tr·uv + nm·v² = n; v² ≤ 4n/|disc|
    let vbound: Int = isqrt(&(&n * 4 / k.disc.clone().abs())) + 1;
    let mut v = -vbound.clone();
    while v <= vbound {
        let b = &k.omega_tr * &v;
        let c = &k.omega_nm * &v * &v - &n;
        let disc_u: Int = &b * &b - c * 4;
        if !disc_u.is_negative() {
            if let Some(s) = perfect_sqrt(&disc_u) {
                for sign in [1i64, -1] {
                    let num = -&b + &s * int(sign);
                    if num.is_even() {
                        let u = num / 2;
                        let cand = Elt::from_ints(&u, &v);
                        if !cand.is_zero() {
                            if let Ok(ci) = IdealHNF::principal(k, &cand) {
                                if &ci == a {
                                    return Some(cand);
                                }
                            }
                        }
                    }
                }
            }
        }
        v += 1;
    }
    None
}

// -------- binary quadratic forms and the class group --------

/// Primitive positive-definite form (A, B, C) of discriminant disc(k).
#[derive(Clone, PartialEq, Eq, Debug, PartialOrd, Ord, Hash)]
pub struct QForm {
    pub a: Int,
    pub b: Int,
    pub c: Int,
}

impl QForm {
    pub fn disc(&self) -> Int {
        &self.b * &self.b - int(4) * &self.a * &self.c
    }

    pub fn reduce(&self) -> QForm {
        let disc = self.disc();
        let mut f = self.clone();
        loop {
            // normalize B into (−A, A]
            let two_a = &f.a * 2;
            let mut b = f.b.mod_floor(&two_a);
            if b > f.a {
                b -= &two_a;
            }
            let c = (&b * &b - &disc) / (int(4) * &f.a);
            f = QForm {
                a: f.a.clone(),
                b,
                c,
            };
            if f.a > f.c {
                f = QForm {
                    a: f.c.clone(),
                    b: -f.b.clone(),
                    c: f.a.clone(),
                };
                continue;
            }
            if (f.a == f.c || f.b.abs() == f.a) && f.b.is_negative() {
                f.b = -f.b;
            }
            break;
        }
        f
    }

    pub fn is_reduced(&self) -> bool {
        let babs = self.b.abs();
        babs <= self.a
            && self.a <= self.c
            && !(babs == self.a && self.b.is_negative())
            && !(self.a == self.c && self.b.is_negative())
    }
}

/// All reduced primitive forms of the field discriminant: one per class.
pub fn reduced_forms(k: &QuadField) -> Vec<QForm> {
    let disc = &k.disc;
    let mut out = vec![];
    let abound = isqrt(&(disc.abs() / 3)) + 1;
    let mut a = Int::one();
    while a <= abound {
        let mut b = -a.clone();
        while b <= a {
            let num: Int = &b * &b - disc;
            let den: Int = &a * 4;
            if (&num % &den).is_zero() {
                let c = num / den;
                let f = QForm {
                    a: a.clone(),
                    b: b.clone(),
                    c,
                };
                if f.is_reduced() && f.a.gcd(&f.b).gcd(&f.c).is_one() {
                    out.push(f);
                }
            }
            b += 1;
        }
        a += 1;
    }
    out.sort();
    out.dedup();
    out
}

/// form -> primitive ideal, via A·Z + ((−B+√disc)/2)·Z on the (1, ω) basis.
pub fn form_to_ideal(k: &QuadField, f: &QForm) -> IdealHNF {
    let b: Int = if k.omega_tr.is_one() {
        // √d = 2ω − 1: (−B+√d)/2 = (−B−1)/2 + ω
        (-&f.b - Int::one()) / 2
    } else {
        // √d = ω: (−B+2ω)/2 = −B/2 + ω
        -&f.b / 2
    };
    IdealHNF::new(k, f.a.clone(), b.mod_floor(&f.a), Rat::one()).expect("form ideal")
}

/// primitive integral ideal -> the reduced form of its class
/// (inverse of `form_to_ideal`: the ideal (a, b+ω) carries B = −(2b+tr))
pub fn ideal_to_form(k: &QuadField, a: &IdealHNF) -> QForm {
    let two_b: Int = &a.b * 2;
    let bq: Int = -(two_b + &k.omega_tr);
    let c = (&a.b * &a.b + &a.b * &k.omega_tr + &k.omega_nm) / &a.a;
    QForm {
        a: a.a.clone(),
        b: bq,
        c,
    }
    .reduce()
}

/// The ideal class group: elementary divisors, generator ideals, an explicit
/// generator of each 𝔞_i^{n_i}, and a discrete-log table on reduced forms.
#[derive(Clone, Debug)]
pub struct IdealClassGroup {
    pub order: Int,
    /// Elementary divisors > 1; the trivial group has none.
    pub divisors: Vec<Int>,
    pub generators: Vec<IdealHNF>,
    /// For each generator of order n_i, an x with g_i^{n_i} = (x).
    pub power_generators: Vec<Elt>,
    /// reduced form -> exponent vector on `generators`
    pub dlog: BTreeMap<QForm, Vec<i64>>,
}

impl IdealClassGroup {
    /// Class of an arbitrary nonzero ideal as an exponent vector.
    pub fn class_of(&self, k: &QuadField, a: &IdealHNF) -> Vec<i64> {
        let f = ideal_to_form(k, a);
        self.dlog.get(&f).expect("form not in class table").clone()
    }

    pub fn is_principal_class(&self, k: &QuadField, a: &IdealHNF) -> bool {
        self.class_of(k, a).iter().all(|&e| e == 0)
    }
}

/// Compute the class group by reduced-forms enumeration.
pub fn class_group(k: &QuadField) -> IdealClassGroup {
    let forms = reduced_forms(k);
    let h = forms.len();
    let id = ideal_to_form(k, &IdealHNF::one());
    let compose = |f: &QForm, g: &QForm| -> QForm {
        let prod = form_to_ideal(k, f).mul(k, &form_to_ideal(k, g));
        ideal_to_form(k, &prod)
    };
    // greedy generators + discrete logs by closure
    let mut gens: Vec<QForm> = vec![];
    let mut dlog: BTreeMap<QForm, Vec<i64>> = BTreeMap::new();
    dlog.insert(id.clone(), vec![]);
    for f in &forms {
        if dlog.contains_key(f) {
            continue;
        }
        gens.push(f.clone());
        let gi = gens.len() - 1;
        for v in dlog.values_mut() {
            v.push(0);
        }
        let subgroup: Vec<(QForm, Vec<i64>)> =
            dlog.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
        let mut power = id.clone();
        let mut e = 0i64;
        loop {
            power = compose(&power, f);
            e += 1;
            if dlog.contains_key(&power) {
                break;
            }
            for (base, vec0) in &subgroup {
                let nf = compose(base, &power);
                let mut v = vec0.clone();
                v[gi] = e;
                dlog.entry(nf).or_insert(v);
            }
        }
    }
    assert_eq!(dlog.len(), h, "closure must reach every reduced form");
    let r = gens.len();
    if r == 0 {
        return IdealClassGroup {
            order: int(h as i64),
            divisors: vec![],
            generators: vec![],
            power_generators: vec![],
            dlog,
        };
    }
    // relation rows: g_i^{m_i} falls back into the previous subgroup
    let mut rel_rows: IMat = vec![];
    for (i, g) in gens.iter().enumerate() {
        let mut power = id.clone();
        let mut m = 0i64;
        loop {
            power = compose(&power, g);
            m += 1;
            let v = dlog.get(&power).unwrap();
            if v[i] < m {
                let mut row = vec![Int::zero(); r];
                for (j, &e) in v.iter().enumerate() {
                    row[j] = int(-e);
                }
                row[i] += int(m);
                rel_rows.push(row);
                break;
            }
        }
    }
    let s = crate::exact::mat::snf(&rel_rows);
    let mut divisors = vec![];
    let mut generators = vec![];
    let mut power_generators = vec![];
    let mut transform: Vec<(Vec<i64>, Int)> = vec![];
    for j in 0..r {
        let d = s.d.get(j).cloned().unwrap_or_else(Int::zero);
        if d.is_one() {
            continue;
        }
        assert!(!d.is_zero(), "class group is finite");
        let mut gen_ideal = IdealHNF::one();
        for i in 0..r {
            let e = s.v_inv[j][i].to_i64().unwrap();
            if e != 0 {
                gen_ideal = gen_ideal.mul(k, &form_to_ideal(k, &gens[i]).pow(k, e));
            }
        }
        let gen_ideal = form_to_ideal(k, &ideal_to_form(k, &gen_ideal));
        let n_i = d.to_i64().unwrap();
        let pw = gen_ideal.pow(k, n_i);
        let x = principal_generator(k, &pw).expect("generator^order must be principal");
        divisors.push(d.clone());
        generators.push(gen_ideal);
        power_generators.push(x);
        transform.push(((0..r).map(|i| s.v[i][j].to_i64().unwrap()).collect(), d));
    }
    let new_dlog: BTreeMap<QForm, Vec<i64>> = dlog
        .into_iter()
        .map(|(f, v)| {
            let nv: Vec<i64> = transform
                .iter()
                .map(|(col, d)| {
                    let s: i64 = v.iter().zip(col.iter()).map(|(a, b)| a * b).sum();
                    s.rem_euclid(d.to_i64().unwrap())
                })
                .collect();
            (f, nv)
        })
        .collect();
    IdealClassGroup {
        order: int(h as i64),
        divisors,
        generators,
        power_generators,
        dlog: new_dlog,
    }
}

// -------- serialization (documented schema: keys "d", "a", "b", "c") --------

#[derive(Serialize, Deserialize)]
struct FieldJson {
    d: String,
}

#[derive(Serialize, Deserialize)]
struct IdealJson {
    d: String,
    a: String,
    b: String,
    c: String,
}

pub fn field_to_json(k: &QuadField) -> serde_json::Value {
    serde_json::to_value(FieldJson { d: k.d.to_string() }).unwrap()
}

pub fn field_from_json(v: &serde_json::Value) -> Result<QuadField> {
    let f: FieldJson =
        serde_json::from_value(v.clone()).map_err(|e| Error::InvalidField(e.to_string()))?;
    QuadField::new(&f.d.parse().map_err(|_| Error::InvalidField("bad d".into()))?)
}

pub fn ideal_to_json(k: &QuadField, a: &IdealHNF) -> serde_json::Value {
    serde_json::to_value(IdealJson {
        d: k.d.to_string(),
        a: a.a.to_string(),
        b: a.b.to_string(),
        c: a.c.to_string(),
    })
    .unwrap()
}

pub fn ideal_from_json(k: &QuadField, v: &serde_json::Value) -> Result<IdealHNF> {
    let f: IdealJson =
        serde_json::from_value(v.clone()).map_err(|e| Error::Ideal(e.to_string()))?;
    if f.d != k.d.to_string() {
        return Err(Error::Ideal("ideal belongs to a different field".into()));
    }
    let parse_rat = |s: &str| -> Result<Rat> {
        if let Some((n, d)) = s.split_once('/') {
            Ok(Rat::new(
                n.parse().map_err(|_| Error::Ideal("bad c".into()))?,
                d.parse().map_err(|_| Error::Ideal("bad c".into()))?,
            ))
        } else {
            Ok(Rat::from(
                s.parse::<Int>().map_err(|_| Error::Ideal("bad c".into()))?,
            ))
        }
    };
    IdealHNF::new(
        k,
        f.a.parse().map_err(|_| Error::Ideal("bad a".into()))?,
        f.b.parse().map_err(|_| Error::Ideal("bad b".into()))?,
        parse_rat(&f.c)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi() -> QuadField {
        make_field(-1).unwrap()
    }

    #[test]
    fn field_constants() {
        let k = qi();
        assert_eq!(k.disc, int(-4));
        assert_eq!(k.w_k, 4);
        let k3 = make_field(-3).unwrap();
        assert_eq!(k3.disc, int(-3));
        assert_eq!(k3.w_k, 6);
        let k7 = make_field(-7).unwrap();
        assert_eq!(k7.disc, int(-7));
        assert_eq!(k7.w_k, 2);
        assert!(make_field(4).is_err());
        assert!(make_field(-12).is_err());
    }

    #[test]
    fn torsion() {
        for d in [-1i64, -3, -7, -5] {
            let k = make_field(d).unwrap();
            let roots = k.roots_of_unity();
            assert_eq!(roots.len() as u32, k.w_k);
            for r in &roots {
                assert!(k.is_unit(r));
            }
            let g = k.torsion_generator();
            for e in 1..k.w_k {
                assert!(!k.pow(&g, e).is_one());
            }
            assert!(k.pow(&g, k.w_k).is_one());
        }
    }

    #[test]
    fn ideal_mul_norm() {
        let k = qi();
        let p1 = IdealHNF::principal(&k, &Elt::from_int(2, 1)).unwrap();
        let p2 = IdealHNF::principal(&k, &Elt::from_int(2, -1)).unwrap();
        let five = IdealHNF::principal(&k, &Elt::from_int(5, 0)).unwrap();
        assert_eq!(p1.mul(&k, &p2), five);
        assert_eq!(p1.norm(), Rat::from(int(5)));
        assert_eq!(p1.mul(&k, &IdealHNF::one()), p1);
    }

    #[test]
    fn prime_factorization_examples() {
        let k = qi();
        let f5 = factor_rational_prime(&k, &int(5));
        assert_eq!(f5.len(), 2);
        assert!(f5
            .iter()
            .all(|(p, e)| *e == 1 && p.norm() == Rat::from(int(5))));
        let prod = f5[0].0.mul(&k, &f5[1].0);
        assert_eq!(prod, IdealHNF::principal(&k, &Elt::from_int(5, 0)).unwrap());

        let f3 = factor_rational_prime(&k, &int(3));
        assert_eq!(f3.len(), 1);
        assert_eq!(f3[0].1, 1);
        assert_eq!(f3[0].0.norm(), Rat::from(int(9)));

        let f2 = factor_rational_prime(&k, &int(2));
        assert_eq!(f2.len(), 1);
        assert_eq!(f2[0].1, 2);
        let sq = f2[0].0.pow(&k, 2);
        assert_eq!(sq, IdealHNF::principal(&k, &Elt::from_int(2, 0)).unwrap());
    }

    #[test]
    fn product_of_primes_up_to_100() {
        for d in [-1i64, -3, -7, -5, -23] {
            let k = make_field(d).unwrap();
            for p in crate::exact::int::primes_up_to(100) {
                let pi = int(p as i64);
                let fac = factor_rational_prime(&k, &pi);
                let mut prod = IdealHNF::one();
                for (pr, e) in &fac {
                    prod = prod.mul(&k, &pr.pow(&k, *e as i64));
                }
                let p_ok = IdealHNF::principal(&k, &Elt::from_ints(&pi, &Int::zero())).unwrap();
                assert_eq!(prod, p_ok, "d={d}, p={p}");
            }
        }
    }

    #[test]
    fn class_groups() {
        let g = class_group(&qi());
        assert_eq!(g.order, int(1));
        assert!(g.divisors.is_empty());

        let k5 = make_field(-5).unwrap();
        let g5 = class_group(&k5);
        assert_eq!(g5.order, int(2));
        assert_eq!(g5.divisors, vec![int(2)]);
        let p2 = factor_rational_prime(&k5, &int(2))[0].0.clone();
        assert_eq!(g5.class_of(&k5, &p2), vec![1]);

        let k23 = make_field(-23).unwrap();
        let g23 = class_group(&k23);
        assert_eq!(g23.order, int(3));
        assert_eq!(g23.divisors, vec![int(3)]);
        for (gen, (n, x)) in g23
            .generators
            .iter()
            .zip(g23.divisors.iter().zip(g23.power_generators.iter()))
        {
            let pw = gen.pow(&k23, n.to_i64().unwrap());
            assert_eq!(IdealHNF::principal(&k23, x).unwrap(), pw);
        }
    }

    #[test]
    fn valuation_and_membership() {
        let k = qi();
        let p2 = factor_rational_prime(&k, &int(2))[0].0.clone();
        let two = IdealHNF::principal(&k, &Elt::from_int(2, 0)).unwrap();
        assert_eq!(two.valuation(&k, &p2), 2);
        let half = IdealHNF {
            a: Int::one(),
            b: Int::zero(),
            c: Rat::new(int(1), int(2)),
        };
        assert_eq!(half.valuation(&k, &p2), -2);
        assert!(p2.contains(&Elt::from_int(1, 1)));
        assert!(!p2.contains(&Elt::from_int(1, 0)));
    }

    #[test]
    fn residues_and_reduction() {
        let k = qi();
        let three = IdealHNF::principal(&k, &Elt::from_int(3, 0)).unwrap();
        let res = three.residues(&k);
        assert_eq!(res.len(), 9);
        let e = Elt::from_int(5, 7);
        let r = three.reduce_elt(&k, &e);
        let diff = k.sub(&e, &r);
        assert!(three.contains(&diff));
    }

    #[test]
    fn json_roundtrip() {
        let k = make_field(-7).unwrap();
        let p = factor_rational_prime(&k, &int(2))[0].0.clone();
        let v = ideal_to_json(&k, &p);
        assert_eq!(ideal_from_json(&k, &v).unwrap(), p);
        let fv = field_to_json(&k);
        assert_eq!(field_from_json(&fv).unwrap(), k);
    }
}
