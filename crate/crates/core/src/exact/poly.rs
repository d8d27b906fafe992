//! Exact polynomial arithmetic over Q and over F_p, with factorization
//! over Z (Berlekamp mod p + Hensel lifting + subset recombination).

use super::int::{int, inv_mod, Int, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Polynomial over Q, coefficient of degree `i` at index `i`, no trailing
/// zeros (the zero polynomial is the empty vector).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QPoly(pub Vec<Rat>);

impl QPoly {
    pub fn zero() -> Self {
        QPoly(vec![])
    }
    pub fn one() -> Self {
        QPoly(vec![Rat::one()])
    }
    pub fn x() -> Self {
        QPoly(vec![Rat::zero(), Rat::one()])
    }
    pub fn constant(c: Rat) -> Self {
        let mut p = QPoly(vec![c]);
        p.normalize();
        p
    }
    pub fn from_int_coeffs(c: &[i64]) -> Self {
        let mut p = QPoly(c.iter().map(|&x| Rat::from(int(x))).collect());
        p.normalize();
        p
    }
    pub fn from_ints(c: &[Int]) -> Self {
        let mut p = QPoly(c.iter().map(|x| Rat::from(x.clone())).collect());
        p.normalize();
        p
    }

    pub fn normalize(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    /// Degree; the zero polynomial has degree `usize::MAX` sentinel avoided:
    /// callers must check `is_zero` first.
    pub fn degree(&self) -> usize {
        assert!(!self.is_zero(), "degree of zero polynomial");
        self.0.len() - 1
    }
    pub fn lc(&self) -> &Rat {
        self.0.last().expect("lc of zero polynomial")
    }
    pub fn coeff(&self, i: usize) -> Rat {
        self.0.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        let mut p = QPoly(out);
        p.normalize();
        p
    }
    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        let mut p = QPoly(out);
        p.normalize();
        p
    }
    pub fn neg(&self) -> QPoly {
        QPoly(self.0.iter().map(|c| -c.clone()).collect())
    }
    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        let mut p = QPoly(out);
        p.normalize();
        p
    }
    pub fn scale(&self, c: &Rat) -> QPoly {
        let mut p = QPoly(self.0.iter().map(|a| a * c).collect());
        p.normalize();
        p
    }

    /// Euclidean division: returns (quotient, remainder).
    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.clone();
        let mut q = QPoly::zero();
        let dd = d.degree();
        let dlc = d.lc().clone();
        while !r.is_zero() && r.degree() >= dd {
            let shift = r.degree() - dd;
            let c = r.lc() / &dlc;
            let mut term = vec![Rat::zero(); shift + 1];
            term[shift] = c;
            let term = QPoly(term);
            q = q.add(&term);
            r = r.sub(&term.mul(d));
        }
        (q, r)
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> QPoly {
        assert!(!self.is_zero());
        self.scale(&self.lc().recip())
    }

    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Extended gcd: returns (g, s, t) with s*self + t*other = g (monic).
    pub fn xgcd(&self, other: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            (r0, s0, t0)
        } else {
            let c = r0.lc().recip();
            (r0.scale(&c), s0.scale(&c), t0.scale(&c))
        }
    }

    pub fn derivative(&self) -> QPoly {
        if self.0.len() <= 1 {
            return QPoly::zero();
        }
        let mut out = Vec::with_capacity(self.0.len() - 1);
        for (i, c) in self.0.iter().enumerate().skip(1) {
            out.push(c * Rat::from(int(i as i64)));
        }
        let mut p = QPoly(out);
        p.normalize();
        p
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn compose(&self, g: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for c in self.0.iter().rev() {
            acc = acc.mul(g).add(&QPoly::constant(c.clone()));
        }
        acc
    }

    /// Squarefree part: self / gcd(self, self').
    pub fn squarefree_part(&self) -> QPoly {
        let g = self.gcd(&self.derivative());
        if g.is_zero() || g.degree() == 0 {
            return self.monic();
        }
        self.divrem(&g).0.monic()
    }

    /// lcm of coefficient denominators.
    pub fn denominator(&self) -> Int {
        let mut d = Int::one();
        for c in &self.0 {
            d = d.lcm(c.denom());
        }
        d
    }

    /// Content-free integer coefficients: returns (coeffs, scale) with
    /// `self = (scale) * poly(coeffs)`, coeffs primitive with positive lc.
    pub fn primitive_int(&self) -> (Vec<Int>, Rat) {
        assert!(!self.is_zero());
        let den = self.denominator();
        let ints: Vec<Int> = self
            .0
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut content = Int::zero();
        for c in &ints {
            content = content.gcd(c);
        }
        if ints.last().unwrap().is_negative() {
            content = -content;
        }
        let prim: Vec<Int> = ints.iter().map(|c| c / &content).collect();
        (prim, Rat::new(content, den))
    }

    pub fn resultant(&self, other: &QPoly) -> Rat {
        // Euclidean resultant over Q.
        fn res(a: &QPoly, b: &QPoly) -> Rat {
            if b.is_zero() {
                return if !a.is_zero() && a.degree() == 0 {
                    Rat::one()
                } else {
                    Rat::zero()
                };
            }
            if a.is_zero() {
                return Rat::zero();
            }
            let da = a.degree();
            let db = b.degree();
            if da == 0 {
                return pow_rat(a.lc(), db);
            }
            if db == 0 {
                return pow_rat(b.lc(), da);
            }
            let r = a.rem(b);
            if r.is_zero() {
                return Rat::zero();
            }
            let dr = r.degree();
            let sign = if (da * db) % 2 == 1 {
                -Rat::one()
            } else {
                Rat::one()
            };
            sign * pow_rat(b.lc(), da - dr) * res(b, &r)
        }
        fn pow_rat(c: &Rat, e: usize) -> Rat {
            let mut acc = Rat::one();
            for _ in 0..e {
                acc *= c;
            }
            acc
        }
        res(self, other)
    }
}

/// n-th cyclotomic polynomial, by iterated exact division of x^n - 1.
pub fn cyclotomic(n: u64) -> QPoly {
    assert!(n >= 1);
    let mut num = vec![Rat::zero(); n as usize + 1];
    num[0] = -Rat::one();
    num[n as usize] = Rat::one();
    let mut num = QPoly(num);
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic(d);
            let (q, r) = num.divrem(&phi_d);
            assert!(r.is_zero());
            num = q;
        }
    }
    num
}

// ---------------- arithmetic mod p ----------------

/// Dense polynomial over F_p, coefficients reduced into [0, p).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PPoly {
    pub p: Int,
    pub c: Vec<Int>,
}

impl PPoly {
    pub fn new(p: &Int, coeffs: Vec<Int>) -> Self {
        let mut q = PPoly {
            p: p.clone(),
            c: coeffs.into_iter().map(|x| x.mod_floor(p)).collect(),
        };
        q.normalize();
        q
    }
    pub fn from_qpoly(f: &QPoly, p: &Int) -> Option<Self> {
        // Fails if a denominator vanishes mod p.
        let mut c = Vec::with_capacity(f.0.len());
        for r in &f.0 {
            let d = r.denom().mod_floor(p);
            let inv = inv_mod(&d, p)?;
            c.push((r.numer().mod_floor(p) * inv).mod_floor(p));
        }
        Some(PPoly::new(p, c))
    }
    pub fn zero(p: &Int) -> Self {
        PPoly {
            p: p.clone(),
            c: vec![],
        }
    }
    pub fn one(p: &Int) -> Self {
        PPoly {
            p: p.clone(),
            c: vec![Int::one()],
        }
    }
    pub fn x(p: &Int) -> Self {
        PPoly::new(p, vec![Int::zero(), Int::one()])
    }
    fn normalize(&mut self) {
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn degree(&self) -> usize {
        assert!(!self.is_zero());
        self.c.len() - 1
    }
    pub fn coeff(&self, i: usize) -> Int {
        self.c.get(i).cloned().unwrap_or_else(Int::zero)
    }
    pub fn add(&self, o: &PPoly) -> PPoly {
        let n = self.c.len().max(o.c.len());
        PPoly::new(
            &self.p,
            (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect(),
        )
    }
    pub fn sub(&self, o: &PPoly) -> PPoly {
        let n = self.c.len().max(o.c.len());
        PPoly::new(
            &self.p,
            (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect(),
        )
    }
    pub fn mul(&self, o: &PPoly) -> PPoly {
        if self.is_zero() || o.is_zero() {
            return PPoly::zero(&self.p);
        }
        let mut out = vec![Int::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PPoly::new(&self.p, out)
    }
    pub fn scale(&self, k: &Int) -> PPoly {
        PPoly::new(&self.p, self.c.iter().map(|x| x * k).collect())
    }
    pub fn divrem(&self, d: &PPoly) -> (PPoly, PPoly) {
        assert!(!d.is_zero());
        let dlc_inv = inv_mod(d.c.last().unwrap(), &self.p).expect("lc not invertible");
        let mut r = self.c.clone();
        let dd = d.degree();
        let mut q = vec![Int::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd {
            let lead = r.last().unwrap().mod_floor(&self.p);
            if lead.is_zero() {
                r.pop();
                continue;
            }
            let shift = r.len() - 1 - dd;
            let c = (&lead * &dlc_inv).mod_floor(&self.p);
            for i in 0..=dd {
                let t = (&c * &d.c[i]).mod_floor(&self.p);
                r[shift + i] = (&r[shift + i] - t).mod_floor(&self.p);
            }
            q[shift] = c;
            r.pop();
        }
        (PPoly::new(&self.p, q), PPoly::new(&self.p, r))
    }
    pub fn rem(&self, d: &PPoly) -> PPoly {
        self.divrem(d).1
    }
    pub fn monic(&self) -> PPoly {
        let inv = inv_mod(self.c.last().unwrap(), &self.p).expect("lc not invertible");
        self.scale(&inv)
    }
    pub fn gcd(&self, o: &PPoly) -> PPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }
    pub fn derivative(&self) -> PPoly {
        if self.c.len() <= 1 {
            return PPoly::zero(&self.p);
        }
        PPoly::new(
            &self.p,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }
    pub fn eval(&self, x: &Int) -> Int {
        let mut acc = Int::zero();
        for c in self.c.iter().rev() {
            acc = (acc * x + c).mod_floor(&self.p);
        }
        acc
    }
    /// self^e mod m.
    pub fn pow_mod(&self, e: &Int, m: &PPoly) -> PPoly {
        let mut base = self.rem(m);
        let mut acc = PPoly::one(&self.p);
        let mut e = e.clone();
        while e.is_positive() {
            if e.is_odd() {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e /= 2;
        }
        acc
    }
    pub fn is_squarefree(&self) -> bool {
        let d = self.derivative();
        if d.is_zero() {
            return false;
        }
        let g = self.gcd(&d);
        g.degree() == 0
    }
}

/// Does the squarefree image of `f` mod `p` split into distinct linear
/// factors? (I.e., x^p ≡ x mod (f, p) and f squarefree mod p.)
pub fn splits_completely_mod_p(f: &QPoly, p: &Int) -> bool {
    let Some(fp) = PPoly::from_qpoly(f, p) else {
        return false;
    };
    if fp.is_zero() || fp.degree() != f.degree() || !fp.is_squarefree() {
        return false;
    }
    let xp = PPoly::x(p).pow_mod(p, &fp);
    xp == PPoly::x(p).rem(&fp)
}

/// All roots of `f` mod p, by exhaustive evaluation (p desk-scale).
pub fn roots_mod_p(f: &PPoly, p: &Int) -> Vec<Int> {
    let mut roots = vec![];
    let mut x = Int::zero();
    while &x < p {
        if f.eval(&x).is_zero() {
            roots.push(x.clone());
        }
        x += 1;
    }
    roots
}

/// Berlekamp factorization of a squarefree monic polynomial mod p into
/// monic irreducible factors. Deterministic; intended for small p.
pub fn berlekamp(f: &PPoly) -> Vec<PPoly> {
    let p = f.p.clone();
    let f = f.monic();
    let n = f.degree();
    if n == 1 {
        return vec![f];
    }
    // Build the Berlekamp matrix Q: row i = x^(i*p) mod f.
    let xp = PPoly::x(&p).pow_mod(&p, &f);
    let mut rows: Vec<Vec<Int>> = Vec::with_capacity(n);
    let mut cur = PPoly::one(&p);
    for _ in 0..n {
        let mut r = vec![Int::zero(); n];
        for (i, c) in cur.c.iter().enumerate() {
            r[i] = c.clone();
        }
        rows.push(r);
        cur = cur.mul(&xp).rem(&f);
    }
    // Kernel of (Q - I) over F_p, row-vector convention v*(Q-I)=0 means
    // treating rows as images; transpose bookkeeping: we solve (Q^T - I)w=0
    // equivalently; implement Gaussian elimination on (Q - I) columns.
    let mut m: Vec<Vec<Int>> = vec![vec![Int::zero(); n]; n];
    for (i, row) in rows.iter().enumerate() {
        for j in 0..n {
            m[j][i] = row[j].clone(); // transpose: column i is x^(ip)
        }
    }
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = (&row[i] - Int::one()).mod_floor(&p);
    }
    // Find kernel basis of m (acting on column vectors v: m*v = 0).
    let kernel = fp_kernel(&m, &p);
    let r = kernel.len();
    if r == 1 {
        return vec![f];
    }
    let mut factors = vec![f.clone()];
    'outer: for basis_vec in kernel.iter() {
        let v = PPoly::new(&p, basis_vec.clone());
        if v.is_zero() || v.degree() == 0 {
            continue;
        }
        let mut next = vec![];
        for g in factors.drain(..) {
            if g.degree() == 1 {
                next.push(g);
                continue;
            }
            let mut remaining = g.clone();
            let mut c = Int::zero();
            while &c < &p {
                if remaining.degree() == 0 {
                    break;
                }
                let shifted = v.sub(&PPoly::new(&p, vec![c.clone()]));
                let h = remaining.gcd(&shifted);
                if !h.is_zero() && h.degree() > 0 && h.degree() < remaining.degree() {
                    let (q, rr) = remaining.divrem(&h);
                    debug_assert!(rr.is_zero());
                    next.push(h);
                    remaining = q;
                }
                c += 1;
            }
            if remaining.degree() > 0 {
                next.push(remaining);
            }
        }
        factors = next;
        if factors.len() == r {
            break 'outer;
        }
    }
    factors.sort_by(|a, b| (a.degree(), &a.c).cmp(&(b.degree(), &b.c)));
    factors
}

fn fp_kernel(m: &[Vec<Int>], p: &Int) -> Vec<Vec<Int>> {
    let n = m.len();
    let mut a: Vec<Vec<Int>> = m.to_vec();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut row = 0;
    for col in 0..n {
        let Some(r) = (row..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, r);
        let inv = inv_mod(&a[row][col], p).unwrap();
        for j in 0..n {
            a[row][j] = (&a[row][j] * &inv).mod_floor(p);
        }
        for rr in 0..n {
            if rr != row && !a[rr][col].is_zero() {
                let f = a[rr][col].clone();
                for j in 0..n {
                    let t = (&f * &a[row][j]).mod_floor(p);
                    a[rr][j] = (&a[rr][j] - t).mod_floor(p);
                }
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
    }
    let mut basis = vec![];
    for free in 0..n {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![Int::zero(); n];
        v[free] = Int::one();
        for col in 0..n {
            if let Some(pr) = pivot_of_col[col] {
                v[col] = (-a[pr][free].clone()).mod_floor(p);
            }
        }
        basis.push(v);
    }
    basis
}

/// Factor a squarefree monic polynomial mod p (wrapper over Berlekamp).
pub fn factor_mod_p(f: &QPoly, p: &Int) -> Option<Vec<PPoly>> {
    let fp = PPoly::from_qpoly(f, p)?;
    if fp.is_zero() || fp.degree() != f.degree() || !fp.is_squarefree() {
        return None;
    }
    Some(berlekamp(&fp.monic()))
}

// ---------------- factorization over Z ----------------

fn linf(c: &[Int]) -> Int {
    c.iter().map(|x| x.abs()).max().unwrap_or_else(Int::zero)
}

/// Hensel lift: given monic f in Z[x], coprime monic g0,h0 mod p with
/// f ≡ g0*h0 (mod p), lift to f ≡ g*h (mod p^k) with g ≡ g0, h ≡ h0 mod p.
fn hensel_lift_pair(f: &[Int], g0: &PPoly, h0: &PPoly, p: &Int, k: u32) -> (Vec<Int>, Vec<Int>) {
    // Work with integer coefficient vectors; linear lifting.
    let one = Int::one();
    // s*g0 + t*h0 = 1 mod p
    let (gg, ss, tt) = ppoly_xgcd(g0, h0);
    assert!(gg.degree() == 0);
    let ginv = inv_mod(&gg.c[0], p).unwrap();
    let s = ss.scale(&ginv);
    let t = tt.scale(&ginv);

    let mut g: Vec<Int> = (0..=g0.degree()).map(|i| g0.coeff(i)).collect();
    let mut h: Vec<Int> = (0..=h0.degree()).map(|i| h0.coeff(i)).collect();
    let mut modulus = p.clone();
    for _ in 1..k {
        let new_mod = &modulus * p;
        // e = f - g*h mod new_mod
        let gh = zmul(&g, &h);
        let mut e = zsub(f, &gh);
        for c in e.iter_mut() {
            *c = c.mod_floor(&new_mod);
        }
        // delta = e / modulus (exact mod new_mod since e ≡ 0 mod modulus)
        let delta: Vec<Int> = e.iter().map(|c| c / &modulus).collect();
        let dp = PPoly::new(p, delta);
        // g += modulus * (t*dp mod g0-ish); standard: a = t*dp mod g_lifted
        let gl = PPoly::new(p, g.clone());
        let hl = PPoly::new(p, h.clone());
        let a = t.mul(&dp).rem(&gl);
        let b_ = s.mul(&dp).rem(&hl);
        for (i, c) in a.c.iter().enumerate() {
            if i < g.len() {
                g[i] = (&g[i] + c * &modulus).mod_floor(&new_mod);
            }
        }
        for (i, c) in b_.c.iter().enumerate() {
            if i < h.len() {
                h[i] = (&h[i] + c * &modulus).mod_floor(&new_mod);
            }
        }
        // keep monic leading coefficients
        *g.last_mut().unwrap() = one.clone();
        *h.last_mut().unwrap() = one.clone();
        modulus = new_mod;
    }
    (g, h)
}

fn ppoly_xgcd(a: &PPoly, b: &PPoly) -> (PPoly, PPoly, PPoly) {
    let p = a.p.clone();
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (PPoly::one(&p), PPoly::zero(&p));
    let (mut t0, mut t1) = (PPoly::zero(&p), PPoly::one(&p));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let s = s0.sub(&q.mul(&s1));
        let t = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    (r0, s0, t0)
}

fn zmul(a: &[Int], b: &[Int]) -> Vec<Int> {
    let mut out = vec![Int::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}
fn zsub(a: &[Int], b: &[Int]) -> Vec<Int> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(Int::zero) - b.get(i).cloned().unwrap_or_else(Int::zero)
        })
        .collect()
}

/// Factor a monic squarefree polynomial with integer coefficients into monic
/// irreducible integer factors (Zassenhaus: Berlekamp mod p, Hensel lifting,
/// subset recombination).
pub fn factor_monic_squarefree_z(f: &QPoly) -> Vec<QPoly> {
    assert!(!f.is_zero() && f.lc().is_one());
    let n = f.degree();
    if n <= 1 {
        return vec![f.clone()];
    }
    let fz: Vec<Int> = (0..=n)
        .map(|i| {
            let c = f.coeff(i);
            assert!(c.denom().is_one(), "factor_monic_squarefree_z: non-integral input");
            c.numer().clone()
        })
        .collect();
    // Pick a prime where f stays squarefree.
    let mut p = int(3);
    let fp = loop {
        if let Some(fp) = PPoly::from_qpoly(f, &p) {
            if fp.degree() == n && fp.is_squarefree() {
                break fp;
            }
        }
        p = next_prime(&p);
    };
    let local = berlekamp(&fp.monic());
    if local.len() == 1 {
        return vec![f.clone()];
    }
    // Coefficient bound (crude Mignotte-style): factors of f have
    // sup-norm <= 2^n * (n+1) * |f|_inf.
    let bound = (Int::one() << n) * int((n + 1) as i64) * linf(&fz);
    let mut k = 1u32;
    let mut pk = p.clone();
    while pk <= &bound * 2 {
        pk *= &p;
        k += 1;
    }
    // Lift all local factors to mod p^k by peeling one at a time.
    let mut lifted: Vec<Vec<Int>> = Vec::with_capacity(local.len());
    {
        let mut rest_int: Vec<Int> = fz.clone();
        let mut rest_local: Vec<PPoly> = local.clone();
        while rest_local.len() > 1 {
            let g0 = rest_local.remove(0);
            let mut h0 = PPoly::one(&p);
            for q in &rest_local {
                h0 = h0.mul(q);
            }
            let (g, h) = hensel_lift_pair(&rest_int, &g0, &h0, &p, k);
            lifted.push(g);
            rest_int = h;
        }
        lifted.push(rest_int);
    }
    // Recombination over subsets.
    let center = |x: &Int, m: &Int| -> Int {
        let r = x.mod_floor(m);
        if &r * 2 > *m {
            r - m
        } else {
            r
        }
    };
    let mut remaining: Vec<Vec<Int>> = lifted;
    let mut rem_poly: Vec<Int> = fz;
    let mut out: Vec<QPoly> = vec![];
    let mut subset_size = 1usize;
    'outer: while 2 * subset_size <= remaining.len() {
        let idxs: Vec<usize> = (0..remaining.len()).collect();
        for subset in subsets(&idxs, subset_size) {
            // candidate = centered product of chosen lifted factors mod p^k
            let mut cand = vec![Int::one()];
            for &i in &subset {
                cand = zmul(&cand, &remaining[i]);
                for c in cand.iter_mut() {
                    *c = c.mod_floor(&pk);
                }
            }
            for c in cand.iter_mut() {
                *c = center(c, &pk);
            }
            let cq = QPoly::from_ints(&cand);
            let fq = QPoly::from_ints(&rem_poly);
            let (q, r) = fq.divrem(&cq);
            if r.is_zero() && q.0.iter().all(|c| c.denom().is_one()) {
                out.push(cq);
                let mut keep = vec![];
                for (i, fac) in remaining.drain(..).enumerate() {
                    if !subset.contains(&i) {
                        keep.push(fac);
                    }
                }
                remaining = keep;
                rem_poly = (0..=q.degree()).map(|i| q.coeff(i).numer().clone()).collect();
                continue 'outer;
            }
        }
        subset_size += 1;
    }
    if rem_poly.len() > 1 {
        out.push(QPoly::from_ints(&rem_poly));
    }
    out.sort_by_key(|g| g.degree());
    out
}

/// Factor an arbitrary nonzero polynomial over Q into (monic irreducible,
/// multiplicity) pairs, ignoring the overall constant.
pub fn factor_q(f: &QPoly) -> Vec<(QPoly, u32)> {
    assert!(!f.is_zero());
    let mut out: Vec<(QPoly, u32)> = vec![];
    let mut g = f.monic();
    while !g.is_zero() && g.degree() > 0 {
        let sf = g.squarefree_part();
        let sf_monic_int = to_monic_integer(&sf);
        for h in factor_monic_squarefree_z(&sf_monic_int.0) {
            // undo the substitution x -> x/c
            let hq = undo_monic_substitution(&h, &sf_monic_int.1);
            let mut mult = 0u32;
            loop {
                let (q, r) = g.divrem(&hq);
                if r.is_zero() {
                    g = q;
                    mult += 1;
                } else {
                    break;
                }
            }
            debug_assert!(mult > 0);
            out.push((hq, mult));
        }
    }
    out.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()));
    out
}

/// For monic-with-rational-coeffs f of degree n, produce the monic integer
/// polynomial g(y) = c^n f(y/c), returning (g, c).
fn to_monic_integer(f: &QPoly) -> (QPoly, Int) {
    let f = f.monic();
    let c = f.denominator();
    if c.is_one() {
        return (f, c);
    }
    let n = f.degree();
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut scale = Rat::one();
    for i in (0..=n).rev() {
        coeffs.push((f.coeff(i) * &scale, i));
        scale *= Rat::from(c.clone());
    }
    let mut v = vec![Rat::zero(); n + 1];
    for (val, i) in coeffs {
        v[i] = val;
    }
    let g = QPoly(v);
    debug_assert!(g.denominator().is_one());
    (g, c)
}

fn undo_monic_substitution(g: &QPoly, c: &Int) -> QPoly {
    if c.is_one() {
        return g.clone();
    }
    // h(x) = g(c x) / c^deg, monic again
    let n = g.degree();
    let mut v = vec![Rat::zero(); n + 1];
    let mut pow = Rat::one();
    for i in 0..=n {
        v[i] = g.coeff(i) * &pow;
        pow *= Rat::from(c.clone());
    }
    QPoly(v).monic()
}

pub fn is_irreducible_q(f: &QPoly) -> bool {
    if f.is_zero() || f.degree() == 0 {
        return false;
    }
    if f.degree() == 1 {
        return true;
    }
    let fac = factor_q(f);
    fac.len() == 1 && fac[0].1 == 1
}

fn next_prime(p: &Int) -> Int {
    let mut q = p + 1;
    while !super::int::is_prime(&q) {
        q += 1;
    }
    q
}

fn subsets(idxs: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let n = idxs.len();
    if k > n {
        return out;
    }
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        out.push(pick.iter().map(|&i| idxs[i]).collect());
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pick[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        pick[i] += 1;
        for j in (i + 1)..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_gcd() {
        let f = QPoly::from_int_coeffs(&[-1, 0, 1]); // x^2-1
        let g = QPoly::from_int_coeffs(&[1, 1]); // x+1
        let (q, r) = f.divrem(&g);
        assert!(r.is_zero());
        assert_eq!(q, QPoly::from_int_coeffs(&[-1, 1]));
        assert_eq!(f.gcd(&g), g.monic());
    }

    #[test]
    fn cyclotomic_basics() {
        assert_eq!(cyclotomic(1), QPoly::from_int_coeffs(&[-1, 1]));
        assert_eq!(cyclotomic(4), QPoly::from_int_coeffs(&[1, 0, 1]));
        assert_eq!(cyclotomic(12), QPoly::from_int_coeffs(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic(5), QPoly::from_int_coeffs(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn berlekamp_splits() {
        // x^2+1 mod 5 = (x+2)(x+3)
        let f = QPoly::from_int_coeffs(&[1, 0, 1]);
        let fac = factor_mod_p(&f, &int(5)).unwrap();
        assert_eq!(fac.len(), 2);
        assert!(fac.iter().all(|g| g.degree() == 1));
        // x^2+1 mod 3 irreducible
        let fac3 = factor_mod_p(&f, &int(3)).unwrap();
        assert_eq!(fac3.len(), 1);
        assert!(splits_completely_mod_p(&f, &int(5)));
        assert!(!splits_completely_mod_p(&f, &int(3)));
    }

    #[test]
    fn factor_z() {
        // (x^2+1)(x^2-2)
        let f = QPoly::from_int_coeffs(&[1, 0, 1]).mul(&QPoly::from_int_coeffs(&[-2, 0, 1]));
        let fac = factor_monic_squarefree_z(&f);
        assert_eq!(fac.len(), 2);
        assert!(is_irreducible_q(&QPoly::from_int_coeffs(&[1, 0, 1])));
        assert!(is_irreducible_q(&cyclotomic(12)));
        assert!(!is_irreducible_q(&QPoly::from_int_coeffs(&[-1, 0, 1])));
        // x^4+1 (irreducible over Q, reducible mod every p)
        assert!(is_irreducible_q(&QPoly::from_int_coeffs(&[1, 0, 0, 0, 1])));
    }

    #[test]
    fn resultant_values() {
        // Res(x^2+1, x^2-2) = (i^2-2)((-i)^2-2) = 9
        let f = QPoly::from_int_coeffs(&[1, 0, 1]);
        let g = QPoly::from_int_coeffs(&[-2, 0, 1]);
        assert_eq!(f.resultant(&g), Rat::from(int(9)));
    }

    #[test]
    fn factor_q_multiplicities() {
        let f = QPoly::from_int_coeffs(&[1, 1])
            .mul(&QPoly::from_int_coeffs(&[1, 1]))
            .mul(&QPoly::from_int_coeffs(&[1, 0, 1]));
        let fac = factor_q(&f);
        assert_eq!(fac.len(), 2);
        let lin = fac.iter().find(|(g, _)| g.degree() == 1).unwrap();
        assert_eq!(lin.1, 2);
    }
}
