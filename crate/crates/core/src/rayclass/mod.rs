//! Ray class groups Cl_m(k) of an imaginary quadratic field, the Artin map,
//! ray class characters with exact root-of-unity values, conductors, the
//! quantity r_m, and labels for the abelian extensions cut out by congruence
//! subgroups.
//!
//! Construction is by the exact sequence
//! O_k^× → (O_k/m)^× → Cl_m(k) → Cl(k) → 1:
//! the unit group of the residue ring is assembled by CRT over the
//! prime-power parts of m (each computed by explicit enumeration at desk
//! scale), the class group comes from reduced forms, and the glued relation
//! matrix is put in Smith normal form.

pub mod finab;

use crate::error::{Error, Result};
use crate::exact::int::{int, Int, Rat};
use crate::exact::mat::IMat;
use crate::qfield::{
    class_group, factor_ideal, principal_generator, Elt, IdealClassGroup, IdealHNF, QuadField,
};
use finab::FinAb;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

/// One prime-power component O/𝔭^e of the residue ring, with the structure
/// of its unit group and a discrete-log table over all coprime residues.
#[derive(Clone, Debug)]
pub struct LocalComponent {
    pub prime: IdealHNF,
    pub e: u32,
    pub power: IdealHNF,
    pub group: FinAb,
    /// generators as residues mod `power`
    pub gens: Vec<Elt>,
    dlog: HashMap<(Int, Int), Vec<Int>>,
    /// CRT idempotent: ≡ 1 mod power, ≡ 0 mod the other components
    pub idempotent: Elt,
}

/// The unit group (O_k/m)^× as a CRT product of local components.
#[derive(Clone, Debug)]
pub struct ResidueUnits {
    pub modulus: IdealHNF,
    pub components: Vec<LocalComponent>,
    pub group: FinAb,
}

impl ResidueUnits {
    pub fn order(&self) -> Int {
        self.group.order()
    }

    /// Discrete log of an integral element coprime to the modulus.
    pub fn dlog_elt(&self, k: &QuadField, x: &Elt) -> Result<Vec<Int>> {
        let mut out = vec![];
        for comp in &self.components {
            let r = comp.power.reduce_elt(k, x);
            let key = (r.x.numer().clone(), r.y.numer().clone());
            let Some(v) = comp.dlog.get(&key) else {
                return Err(Error::Precondition(format!(
                    "element {x} not coprime to modulus"
                )));
            };
            out.extend(v.clone());
        }
        Ok(out)
    }

    /// A residue representing the given exponent vector.
    pub fn rep_of(&self, k: &QuadField, v: &[Int]) -> Elt {
        let mut result = Elt::from_int(1, 0);
        let mut off = 0usize;
        for comp in &self.components {
            let r = comp.group.rank();
            let mut local = Elt::from_int(1, 0);
            for (g, e) in comp.gens.iter().zip(&v[off..off + r]) {
                let e = e.mod_floor(&comp.group.divisors[comp.gens.iter().position(|x| x == g).unwrap()]);
                let mut e = e.to_i64().unwrap();
                let mut base = g.clone();
                let mut acc = Elt::from_int(1, 0);
                while e > 0 {
                    if e & 1 == 1 {
                        acc = comp.power.reduce_elt(k, &k.mul(&acc, &base));
                    }
                    base = comp.power.reduce_elt(k, &k.mul(&base, &base));
                    e >>= 1;
                }
                local = comp.power.reduce_elt(k, &k.mul(&local, &acc));
            }
            // combine via idempotent: result ≡ local mod power, untouched elsewhere
            let diff = k.sub(&local, &result);
            result = self
                .modulus
                .reduce_elt(k, &k.add(&result, &k.mul(&diff, &comp.idempotent)));
            off += r;
        }
        result
    }

    /// Multiplicative inverse of a coprime residue.
    pub fn inverse(&self, k: &QuadField, x: &Elt) -> Result<Elt> {
        let v = self.dlog_elt(k, x)?;
        let neg: Vec<Int> = self.group.neg(&v);
        Ok(self.rep_of(k, &neg))
    }

    /// Reduce a possibly non-integral element with modulus-coprime
    /// denominator: x = num/den ↦ num·den^{-1} mod m.
    pub fn reduce_fraction(&self, k: &QuadField, x: &Elt) -> Result<Elt> {
        let den = x.x.denom().lcm(x.y.denom());
        let num = Elt {
            x: &x.x * Rat::from(den.clone()),
            y: &x.y * Rat::from(den.clone()),
        };
        if den.is_one() {
            return Ok(self.modulus.reduce_elt(k, &num));
        }
        let den_elt = Elt::from_ints(&den, &Int::zero());
        let inv = self.inverse(k, &den_elt)?;
        Ok(self
            .modulus
            .reduce_elt(k, &k.mul(&self.modulus.reduce_elt(k, &num), &inv)))
    }
}

/// Build the unit group of O/𝔭^e by explicit enumeration (desk scale).
fn local_component(k: &QuadField, prime: &IdealHNF, e: u32) -> LocalComponent {
    let power = prime.pow(k, e as i64);
    let residues = power.residues(k);
    // coprime = nonzero mod prime
    let units: Vec<Elt> = residues
        .into_iter()
        .filter(|r| !prime.contains(r))
        .collect();
    // black-box abelian group structure: greedy generators + closure
    let id = power.reduce_elt(k, &Elt::from_int(1, 0));
    let key = |x: &Elt| (x.x.numer().clone(), x.y.numer().clone());
    let mut gens: Vec<Elt> = vec![];
    let mut dlog: HashMap<(Int, Int), Vec<Int>> = HashMap::new();
    dlog.insert(key(&id), vec![]);
    for u in &units {
        if dlog.contains_key(&key(u)) {
            continue;
        }
        gens.push(u.clone());
        let gi = gens.len() - 1;
        for v in dlog.values_mut() {
            v.push(Int::zero());
        }
        let snapshot: Vec<((Int, Int), Vec<Int>)> =
            dlog.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
        let mut powv = id.clone();
        let mut e2 = 0i64;
        loop {
            powv = power.reduce_elt(k, &k.mul(&powv, u));
            e2 += 1;
            if dlog.contains_key(&key(&powv)) {
                break;
            }
            for (base_key, vec0) in &snapshot {
                let base = Elt::from_ints(&base_key.0, &base_key.1);
                let nf = power.reduce_elt(k, &k.mul(&base, &powv));
                dlog.entry(key(&nf)).or_insert_with(|| {
                    let mut v = vec0.clone();
                    v[gi] = int(e2);
                    v
                });
            }
        }
    }
    assert_eq!(dlog.len(), units.len(), "unit group closure incomplete");
    // relations g_i^{m_i} ∈ ⟨g_1..g_{i-1}⟩ read from the table
    let r = gens.len();
    let mut rel: IMat = vec![];
    for (i, g) in gens.iter().enumerate() {
        let mut powv = id.clone();
        let mut m = 0i64;
        loop {
            powv = power.reduce_elt(k, &k.mul(&powv, g));
            m += 1;
            let v = dlog.get(&key(&powv)).unwrap();
            if v[i] < int(m) {
                let mut row = vec![Int::zero(); r];
                for (j, e) in v.iter().enumerate() {
                    row[j] = -e.clone();
                }
                row[i] += int(m);
                rel.push(row);
                break;
            }
        }
    }
    let (group, to_new, from_new) = FinAb::from_presentation(r, &rel);
    // canonical generators for the SNF coordinates
    let new_gens: Vec<Elt> = from_new
        .iter()
        .map(|word| {
            let mut acc = id.clone();
            for (g, e) in gens.iter().zip(word.iter()) {
                let eo = e.mod_floor(&int(units.len() as i64)); // exponent mod group order
                let mut ee = eo.to_i64().unwrap();
                let mut base = g.clone();
                while ee > 0 {
                    if ee & 1 == 1 {
                        acc = power.reduce_elt(k, &k.mul(&acc, &base));
                    }
                    base = power.reduce_elt(k, &k.mul(&base, &base));
                    ee >>= 1;
                }
            }
            acc
        })
        .collect();
    // rewrite the dlog table in the new coordinates
    let new_dlog: HashMap<(Int, Int), Vec<Int>> = dlog
        .into_iter()
        .map(|(key, v)| (key, group.map_vector(&to_new, &v)))
        .collect();
    LocalComponent {
        prime: prime.clone(),
        e,
        power,
        group,
        gens: new_gens,
        dlog: new_dlog,
        idempotent: Elt::from_int(1, 0), // fixed up after CRT assembly
    }
}

/// Unit group of O/m via CRT over prime-power parts.
pub fn residue_units(k: &QuadField, m: &IdealHNF) -> Result<ResidueUnits> {
    if !m.is_integral() {
        return Err(Error::RayClass("modulus must be integral".into()));
    }
    let fac = factor_ideal(k, m)?;
    let mut components: Vec<LocalComponent> = fac
        .iter()
        .map(|(p, e)| local_component(k, p, *e))
        .collect();
    // CRT idempotents: for component i, find u ∈ Π_{j≠i} Q_j with u ≡ 1 mod Q_i.
    for i in 0..components.len() {
        let qi = components[i].power.clone();
        let mut rest = IdealHNF::one();
        for (j, c) in components.iter().enumerate() {
            if j != i {
                rest = rest.mul(k, &c.power);
            }
        }
        // solve u + v = 1, u ∈ rest, v ∈ qi
        let (r1, r2) = rest.basis();
        let (q1, q2) = qi.basis();
        let to_row = |e: &Elt| -> Vec<Int> {
            let (x, y) = e.int_coords().expect("integral basis");
            vec![x, y]
        };
        let a = vec![to_row(&r1), to_row(&r2), to_row(&q1), to_row(&q2)];
        let sol = crate::exact::mat::solve_left(&a, &[Int::one(), Int::zero()])
            .ok_or_else(|| Error::Internal("CRT: components not coprime".into()))?;
        let u = k.add(
            &k.mul(&r1, &Elt::from_ints(&sol[0], &Int::zero())),
            &k.mul(&r2, &Elt::from_ints(&sol[1], &Int::zero())),
        );
        components[i].idempotent = m.reduce_elt(k, &u);
    }
    let divisors: Vec<Int> = components
        .iter()
        .flat_map(|c| c.group.divisors.clone())
        .collect();
    Ok(ResidueUnits {
        modulus: m.clone(),
        components,
        group: FinAb::new(divisors),
    })
}

/// The ray class group Cl_m(k) with generators, discrete logs, and the
/// Artin-map bookkeeping.
#[derive(Clone, Debug)]
pub struct RayClassGroup {
    pub field: QuadField,
    pub modulus: IdealHNF,
    pub group: FinAb,
    /// ideal representative for each canonical generator
    pub generators: Vec<IdealHNF>,
    pub order: Int,
    pub units: ResidueUnits,
    pub cl: IdealClassGroup,
    /// class-group generator representatives chosen coprime to m
    cl_reps: Vec<IdealHNF>,
    /// β_j with rep_j^{n_j} = (β_j)
    cl_rep_powers: Vec<Elt>,
    /// old (units ⊕ cl) coordinates → canonical coordinates
    to_new: IMat,
    pub r_m: u32,
}

impl RayClassGroup {
    pub fn divisors(&self) -> &[Int] {
        &self.group.divisors
    }

    /// Discrete log of an integral ideal coprime to the modulus; this is the
    /// Artin map of H_m/k in the canonical coordinates.
    pub fn dlog(&self, a: &IdealHNF) -> Result<Vec<Int>> {
        let k = &self.field;
        if !a.is_integral() {
            return Err(Error::Precondition("dlog of non-integral ideal".into()));
        }
        if !a.is_coprime(k, &self.modulus) {
            return Err(Error::Precondition(
                "ideal not coprime to the modulus".into(),
            ));
        }
        // class part
        let f = self.cl.class_of(k, a);
        // Q = a · Π rep_j^{n_j - f_j} is principal, integral, coprime to m
        let mut q = a.clone();
        for (j, rep) in self.cl_reps.iter().enumerate() {
            let n = self.cl.divisors[j].to_i64().unwrap();
            let e = n - f[j];
            debug_assert!(e >= 0);
            q = q.mul(k, &rep.pow(k, e));
        }
        let x = principal_generator(k, &q)
            .ok_or_else(|| Error::Internal("class-corrected ideal must be principal".into()))?;
        let xres = self.units.reduce_fraction(k, &x)?;
        let du = self.units.dlog_elt(k, &xres)?;
        // [a] = δ(x) + Σ (f_j − n_j)[rep_j]
        let t = self.units.group.rank();
        let s = self.cl.divisors.len();
        let mut old = vec![Int::zero(); t + s];
        old[..t].clone_from_slice(&du);
        for j in 0..s {
            old[t + j] = int(f[j]) - &self.cl.divisors[j];
        }
        Ok(self.group.map_vector(&self.to_new, &old))
    }

    /// An integral ideal coprime to m representing the given class vector.
    pub fn class_representative(&self, v: &[Int]) -> IdealHNF {
        let k = &self.field;
        let mut acc = IdealHNF::one();
        for (g, (e, d)) in self
            .generators
            .iter()
            .zip(v.iter().zip(&self.group.divisors))
        {
            let e = e.mod_floor(d).to_i64().unwrap();
            acc = acc.mul(k, &g.pow(k, e));
        }
        acc
    }

    /// All class vectors (desk scale).
    pub fn classes(&self) -> Vec<Vec<Int>> {
        self.group.elements()
    }
}

/// Artin map: exponent vector of an ideal class (spec name).
pub fn artin(a: &IdealHNF, g: &RayClassGroup) -> Result<Vec<Int>> {
    g.dlog(a)
}

/// Order of the kernel of μ_k → (O_k/m)^×.
pub fn r_m(k: &QuadField, m: &IdealHNF) -> Result<u32> {
    if !m.is_integral() {
        return Err(Error::Precondition("r_m of non-integral modulus".into()));
    }
    if m.is_one() {
        return Ok(k.w_k);
    }
    let one = Elt::from_int(1, 0);
    let count = k
        .roots_of_unity()
        .iter()
        .filter(|z| m.contains(&k.sub(z, &one)))
        .count();
    Ok(count as u32)
}

/// Construct Cl_m(k).
pub fn ray_class_group(k: &QuadField, m: &IdealHNF) -> Result<RayClassGroup> {
    if !m.is_integral() || m.norm().is_zero() {
        return Err(Error::RayClass(
            "modulus must be a nonzero integral ideal".into(),
        ));
    }
    let units = residue_units(k, m)?;
    let cl = class_group(k);
    // choose class-group generator representatives coprime to m
    let mut cl_reps = vec![];
    let mut cl_rep_powers = vec![];
    for (j, g) in cl.generators.iter().enumerate() {
        let rep = if g.is_coprime(k, m) {
            g.clone()
        } else {
            coprime_representative(k, &cl, g, m)?
        };
        let n = cl.divisors[j].to_i64().unwrap();
        let pw = rep.pow(k, n);
        let beta = principal_generator(k, &pw)
            .ok_or_else(|| Error::Internal("rep^order must be principal".into()))?;
        cl_reps.push(rep);
        cl_rep_powers.push(beta);
    }
    let t = units.group.rank();
    let s = cl.divisors.len();
    // relations
    let mut rel: IMat = vec![];
    for (i, d) in units.group.divisors.iter().enumerate() {
        let mut row = vec![Int::zero(); t + s];
        row[i] = d.clone();
        rel.push(row);
    }
    // image of the torsion unit
    let zeta = k.torsion_generator();
    if !m.is_one() {
        let dz = units.dlog_elt(k, &m.reduce_elt(k, &zeta))?;
        let mut row = vec![Int::zero(); t + s];
        row[..t].clone_from_slice(&dz);
        rel.push(row);
    }
    // class relations: n_j·[rep_j] − δ(β_j) = 0
    for j in 0..s {
        let mut row = vec![Int::zero(); t + s];
        if !m.is_one() {
            let bres = units.reduce_fraction(k, &cl_rep_powers[j])?;
            let db = units.dlog_elt(k, &bres)?;
            for (i, e) in db.iter().enumerate() {
                row[i] = -e.clone();
            }
        }
        row[t + j] = cl.divisors[j].clone();
        rel.push(row);
    }
    let (group, to_new, from_new) = FinAb::from_presentation(t + s, &rel);
    // order invariant: |Cl_m| · #im(μ_k) = h · #(O/m)^×
    let rm = r_m(k, m)?;
    let im_mu = int(k.w_k as i64) / int(rm as i64);
    assert_eq!(
        group.order() * im_mu,
        &cl.order * units.order(),
        "ray class group order fails the exact-sequence count"
    );
    // ideal representatives of the old generators
    let mut old_ideals: Vec<IdealHNF> = vec![];
    for i in 0..t {
        let mut v = units.group.zero();
        v[i] = Int::one();
        let x = units.rep_of(k, &v);
        old_ideals.push(IdealHNF::principal(k, &x).expect("unit residue is nonzero"));
    }
    old_ideals.extend(cl_reps.clone());
    let order = group.order();
    let generators: Vec<IdealHNF> = from_new
        .iter()
        .map(|word| {
            let mut acc = IdealHNF::one();
            for (g, e) in old_ideals.iter().zip(word.iter()) {
                let e = e.mod_floor(&order).to_i64().unwrap();
                acc = acc.mul(k, &g.pow(k, e));
            }
            acc
        })
        .collect();
    let g = RayClassGroup {
        field: k.clone(),
        modulus: m.clone(),
        group,
        generators,
        order,
        units,
        cl,
        cl_reps,
        cl_rep_powers,
        to_new,
        r_m: rm,
    };
    // canonical self-checks: generator dlogs are unit vectors
    for (j, gi) in g.generators.iter().enumerate() {
        let v = g.dlog(gi)?;
        let mut expect = g.group.zero();
        if g.group.divisors[j] > Int::one() {
            expect[j] = Int::one();
        }
        if v != expect {
            return Err(Error::Internal(format!(
                "generator {j} dlog mismatch: {v:?}"
            )));
        }
    }
    Ok(g)
}

/// An ideal equivalent to `a` in Cl(k) and coprime to m.
fn coprime_representative(
    k: &QuadField,
    _cl: &IdealClassGroup,
    a: &IdealHNF,
    m: &IdealHNF,
) -> Result<IdealHNF> {
    // scan elements x ∈ a by increasing norm; (x)·a^{-1} is integral in the
    // inverse class; its conjugate-scaled form lands us back in [a]... use
    // instead: b = (x)·a^{-1} integral; then b̄·(N(a-part)) ... simplest: b
    // ranges over integral ideals in the class of a^{-1}; we want a coprime
    // representative of [a], so take x ∈ ā (conjugate) giving (x)ā^{-1}
    // integral ~ [ā]^{-1} = [a] (conjugate class is the inverse class).
    let abar = a.conj(k);
    let (b1, b2) = abar.basis();
    let bound = 60i64;
    for n in 1..bound {
        for i in -n..=n {
            for j in [-n, n] {
                for (u, v) in [(i, j), (j, i)] {
                    let x = k.add(
                        &k.mul(&b1, &Elt::from_int(u, 0)),
                        &k.mul(&b2, &Elt::from_int(v, 0)),
                    );
                    if x.is_zero() {
                        continue;
                    }
                    let cand = IdealHNF::principal(k, &x)?.mul(k, &abar.inverse(k));
                    if cand.is_integral() && cand.is_coprime(k, m) {
                        return Ok(cand);
                    }
                }
            }
        }
    }
    Err(Error::SearchExhausted(
        "no coprime class representative in search box".into(),
    ))
}

// ---------------- characters ----------------

/// A character of a ray class group, with exact root-of-unity values:
/// χ(g_i) = e^{2πi c_i / d_i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayCharacter {
    pub exponents: Vec<Int>,
    pub order: Int,
}

impl RayCharacter {
    pub fn new(g: &RayClassGroup, exponents: Vec<Int>) -> RayCharacter {
        assert_eq!(exponents.len(), g.group.rank());
        let exponents: Vec<Int> = exponents
            .iter()
            .zip(g.divisors())
            .map(|(c, d)| c.mod_floor(d))
            .collect();
        let mut order = Int::one();
        for (c, d) in exponents.iter().zip(g.divisors()) {
            if c.is_zero() {
                continue;
            }
            order = order.lcm(&(d / c.gcd(d)));
        }
        RayCharacter { exponents, order }
    }

    pub fn trivial(g: &RayClassGroup) -> RayCharacter {
        RayCharacter::new(g, g.group.zero())
    }

    pub fn is_trivial(&self) -> bool {
        self.order.is_one()
    }

    pub fn conjugate(&self, g: &RayClassGroup) -> RayCharacter {
        RayCharacter::new(g, self.exponents.iter().map(|c| -c.clone()).collect())
    }

    /// χ on a class vector, as an exact fraction of a full turn in [0, 1).
    pub fn turn(&self, g: &RayClassGroup, v: &[Int]) -> Rat {
        let mut t = Rat::zero();
        for ((c, x), d) in self.exponents.iter().zip(v.iter()).zip(g.divisors()) {
            t += Rat::new(c * x, d.clone());
        }
        let f = t.floor();
        t - f
    }

    /// χ(𝔞) as an exact turn.
    pub fn turn_of_ideal(&self, g: &RayClassGroup, a: &IdealHNF) -> Result<Rat> {
        Ok(self.turn(g, &g.dlog(a)?))
    }

    /// χ(class) as a complex ball.
    pub fn value(&self, g: &RayClassGroup, v: &[Int], prec: u32) -> crate::ball::BallComplex {
        crate::ball::BallComplex::e2pi(prec, &self.turn(g, v))
    }

    /// Is χ trivial on every one of the given class vectors?
    pub fn trivial_on(&self, g: &RayClassGroup, vs: &[Vec<Int>]) -> bool {
        vs.iter().all(|v| self.turn(g, v).is_zero())
    }
}

/// Every character of the group (desk scale).
pub fn all_characters(g: &RayClassGroup) -> Vec<RayCharacter> {
    g.group
        .elements()
        .into_iter()
        .map(|v| RayCharacter::new(g, v))
        .collect()
}

// ---------------- context with caching ----------------

/// Per-field context caching ray class groups by modulus.
pub struct RayCtx {
    pub k: QuadField,
    groups: RefCell<BTreeMap<IdealHNF, Rc<RayClassGroup>>>,
}

impl RayCtx {
    pub fn new(k: QuadField) -> Self {
        RayCtx {
            k,
            groups: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn group(&self, m: &IdealHNF) -> Result<Rc<RayClassGroup>> {
        if let Some(g) = self.groups.borrow().get(m) {
            return Ok(g.clone());
        }
        let g = Rc::new(ray_class_group(&self.k, m)?);
        self.groups.borrow_mut().insert(m.clone(), g.clone());
        Ok(g)
    }

    /// Projection matrix Cl_m → Cl_f on canonical generators (f | m).
    pub fn projection(&self, gm: &RayClassGroup, gf: &RayClassGroup) -> Result<IMat> {
        gm.generators.iter().map(|a| gf.dlog(a)).collect()
    }

    /// Generators of ker(Cl_m → Cl_f).
    pub fn projection_kernel(
        &self,
        gm: &RayClassGroup,
        gf: &RayClassGroup,
    ) -> Result<Vec<Vec<Int>>> {
        let m = self.projection(gm, gf)?;
        Ok(gm.group.hom_kernel_gens(&gf.group, &m))
    }
}

/// All integral divisors of m (including (1) and m), sorted by norm.
pub fn ideal_divisors(k: &QuadField, m: &IdealHNF) -> Result<Vec<IdealHNF>> {
    let fac = factor_ideal(k, m)?;
    let mut out = vec![IdealHNF::one()];
    for (p, e) in fac {
        let mut next = vec![];
        for d in &out {
            for i in 0..=e {
                next.push(d.mul(k, &p.pow(k, i as i64)));
            }
        }
        out = next;
    }
    out.sort_by_key(|a| (a.norm_int().unwrap(), a.a.clone(), a.b.clone()));
    Ok(out)
}

/// Conductor of a ray class character: the smallest divisor f of the modulus
/// such that χ factors through Cl_f.
pub fn conductor(ctx: &RayCtx, g: &RayClassGroup, chi: &RayCharacter) -> Result<IdealHNF> {
    let k = &ctx.k;
    for f in ideal_divisors(k, &g.modulus)? {
        let gf = ctx.group(&f)?;
        let ker = ctx.projection_kernel(g, &gf)?;
        if chi.trivial_on(g, &ker) {
            return Ok(f);
        }
    }
    Err(Error::Internal(
        "character does not factor through its own modulus".into(),
    ))
}

/// lcm of two integral ideals: A·B/(A+B).
pub fn ideal_lcm(k: &QuadField, a: &IdealHNF, b: &IdealHNF) -> IdealHNF {
    let s = a.sum(k, b);
    a.mul(k, b).mul(k, &s.inverse(k))
}

// ---------------- abelian extension labels ----------------

/// A finite abelian extension of k, labeled class-field-theoretically by its
/// conductor and a congruence subgroup of the ray class group mod the
/// conductor (whose quotient is the Galois group).
#[derive(Clone, Debug)]
pub struct AbelianExtensionLabel {
    pub conductor: IdealHNF,
    /// generators of the subgroup H ⊆ Cl_f with Gal(K/k) = Cl_f/H
    pub subgroup: Vec<Vec<Int>>,
    /// Galois group as a finite abelian group
    pub galois: FinAb,
    /// Cl_f-coordinates → Galois coordinates
    pub to_galois: IMat,
    pub degree: Int,
}

impl AbelianExtensionLabel {
    /// Build from a subgroup of Cl_m: computes the conductor (minimal
    /// modulus) and re-expresses the subgroup there.
    pub fn from_subgroup(
        ctx: &RayCtx,
        g: &RayClassGroup,
        subgroup: &[Vec<Int>],
    ) -> Result<AbelianExtensionLabel> {
        let k = &ctx.k;
        for f in ideal_divisors(k, &g.modulus)? {
            let gf = ctx.group(&f)?;
            let ker = ctx.projection_kernel(g, &gf)?;
            // the field sits inside H_f iff ker(proj) ⊆ H
            if ker.iter().all(|v| g.group.in_subgroup(subgroup, v)) {
                // image of H in Cl_f
                let proj = ctx.projection(g, &gf)?;
                let h_img: Vec<Vec<Int>> = subgroup
                    .iter()
                    .map(|v| gf.group.reduce(&crate::exact::mat::row_mat_mul(v, &proj)))
                    .collect();
                let (galois, to_galois) = gf.group.quotient(&h_img);
                let degree = galois.order();
                return Ok(AbelianExtensionLabel {
                    conductor: f,
                    subgroup: h_img,
                    galois,
                    to_galois,
                    degree,
                });
            }
        }
        unreachable!("subgroup always contains the kernel at f = m")
    }

    /// The full ray class field H_m.
    pub fn ray_field(ctx: &RayCtx, m: &IdealHNF) -> Result<AbelianExtensionLabel> {
        let g = ctx.group(m)?;
        AbelianExtensionLabel::from_subgroup(ctx, &g, &[])
    }

    /// Artin image of an ideal coprime to the conductor in Gal(K/k).
    pub fn artin(&self, ctx: &RayCtx, a: &IdealHNF) -> Result<Vec<Int>> {
        let gf = ctx.group(&self.conductor)?;
        let v = gf.dlog(a)?;
        Ok(self.galois.map_vector(&self.to_galois, &v))
    }

    pub fn is_identity(&self, v: &[Int]) -> bool {
        self.galois.is_zero(v)
    }
}

/// Frobenius of an unramified prime in Gal(F/k): the Artin image; errors on
/// ramified primes (those dividing the conductor).
pub fn frobenius(
    ctx: &RayCtx,
    ell: &IdealHNF,
    f: &AbelianExtensionLabel,
) -> Result<Vec<Int>> {
    if !ell.is_coprime(&ctx.k, &f.conductor) {
        return Err(Error::Precondition(format!(
            "prime {ell} ramifies in the extension (divides the conductor)"
        )));
    }
    f.artin(ctx, ell)
}

// ---------------- roots of unity in the ray class field ----------------

/// Number of roots of unity in H_m, computed class-field-theoretically:
/// ζ_n ∈ H_m iff the norm map kills ker(Cl_{lcm(m,(n))} → Cl_m) mod n.
pub fn ray_field_torsion_order(ctx: &RayCtx, m: &IdealHNF) -> Result<u32> {
    let k = &ctx.k;
    let gm = ctx.group(m)?;
    let h_m = gm.order.to_i64().unwrap();
    let mut w = int(k.w_k as i64);
    let nm = m.norm_int()?;
    for (q, _) in crate::exact::int::factor(&nm) {
        let _q64 = q.to_i64().unwrap();
        let mut a = 1u32;
        let mut best: Option<u32> = None;
        loop {
            let qa = q.pow(a);
            if crate::exact::int::euler_phi(qa.to_i64().unwrap() as u64) as i64 > 2 * h_m {
                break;
            }
            if zeta_in_ray_field(ctx, m, &qa)? {
                best = Some(a);
            } else if best.is_some() || a > 1 {
                break;
            }
            a += 1;
        }
        if let Some(a) = best {
            let qa = q.pow(a);
            let gcd_part = gcd_power_part(&w, &q);
            if qa > gcd_part {
                w = w / gcd_part * qa;
            }
        }
    }
    Ok(w.to_i64().unwrap() as u32)
}

fn gcd_power_part(w: &Int, q: &Int) -> Int {
    let mut part = Int::one();
    let mut rest = w.clone();
    while (&rest % q).is_zero() {
        part *= q;
        rest /= q;
    }
    part
}

/// Is ζ_n contained in H_m? (n a prime power here, but the test is general.)
fn zeta_in_ray_field(ctx: &RayCtx, m: &IdealHNF, n: &Int) -> Result<bool> {
    let k = &ctx.k;
    if int(k.w_k as i64).mod_floor(n).is_zero() {
        return Ok(true);
    }
    let n_ideal = IdealHNF::principal(k, &Elt::from_ints(n, &Int::zero()))?;
    let t = ideal_lcm(k, m, &n_ideal);
    // guard against runaway residue enumerations
    if t.norm_int()? > int(2_000_000) {
        return Err(Error::CapExceeded(format!(
            "torsion test modulus {t} beyond desk scale"
        )));
    }
    let gt = ctx.group(&t)?;
    let gm = ctx.group(m)?;
    let ker = ctx.projection_kernel(&gt, &gm)?;
    for v in ker {
        let rep = gt.class_representative(&v);
        let nr = rep.norm_int()?;
        if !(nr - Int::one()).mod_floor(n).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::{factor_rational_prime, make_field};

    fn qi() -> QuadField {
        make_field(-1).unwrap()
    }

    fn ideal_of(k: &QuadField, x: i64, y: i64) -> IdealHNF {
        IdealHNF::principal(k, &Elt::from_int(x, y)).unwrap()
    }

    #[test]
    fn ray_class_orders_qi() {
        let k = qi();
        let ctx = RayCtx::new(k.clone());
        let g3 = ctx.group(&ideal_of(&k, 3, 0)).unwrap();
        assert_eq!(g3.order, int(2));
        let g5 = ctx.group(&ideal_of(&k, 5, 0)).unwrap();
        assert_eq!(g5.order, int(4));
        // modulus (1): the class group
        let g1 = ctx.group(&IdealHNF::one()).unwrap();
        assert_eq!(g1.order, int(1));
    }

    #[test]
    fn brute_force_order_check() {
        // order = h · #(coprime residues) / #(unit image), for several moduli
        for (d, norms) in [(-1i64, vec![(3i64, 0i64), (5, 0), (1, 2), (4, 0)]), (-5, vec![(3, 0), (2, 1)])] {
            let k = make_field(d).unwrap();
            let cl = class_group(&k);
            let ctx = RayCtx::new(k.clone());
            for (x, y) in norms {
                let m = ideal_of(&k, x, y);
                if m.norm_int().unwrap() > int(200) {
                    continue;
                }
                let units: Vec<Elt> = m
                    .residues(&k)
                    .into_iter()
                    .filter(|r| IdealHNF::principal(&k, r).map(|i| i.is_coprime(&k, &m)).unwrap_or(false))
                    .collect();
                let mut unit_images = std::collections::HashSet::new();
                for z in k.roots_of_unity() {
                    let r = m.reduce_elt(&k, &z);
                    unit_images.insert((r.x.numer().clone(), r.y.numer().clone()));
                }
                let expected = &cl.order * int(units.len() as i64) / int(unit_images.len() as i64);
                let g = ctx.group(&m).unwrap();
                assert_eq!(g.order, expected, "d={d} m=({x},{y})");
            }
        }
    }

    #[test]
    fn artin_homomorphism_random_pairs() {
        let k = qi();
        let ctx = RayCtx::new(k.clone());
        let m = ideal_of(&k, 3, 0);
        let g = ctx.group(&m).unwrap();
        // artin((2+i)) has order dividing 2
        let p = ideal_of(&k, 2, 1);
        let v = g.dlog(&p).unwrap();
        let twice = g.group.smul(&int(2), &v);
        assert!(g.group.is_zero(&twice));
        // multiplicativity on pairs of coprime ideals
        let pairs = [((2i64, 1i64), (1, 1)), ((4, 1), (2, 3)), ((5, 2), (7, 0))];
        for ((a1, b1), (a2, b2)) in pairs {
            let x = ideal_of(&k, a1, b1);
            let y = ideal_of(&k, a2, b2);
            if !x.is_coprime(&k, &m) || !y.is_coprime(&k, &m) {
                continue;
            }
            let lhs = g.dlog(&x.mul(&k, &y)).unwrap();
            let rhs = g.group.add(&g.dlog(&x).unwrap(), &g.dlog(&y).unwrap());
            assert_eq!(lhs, rhs);
        }
        // principal (x), x ≡ 1 mod m → identity
        let x = Elt::from_int(4, 3); // 4+3i ≡ 1 mod 3
        let ideal = IdealHNF::principal(&k, &x).unwrap();
        assert!(g.group.is_zero(&g.dlog(&ideal).unwrap()));
    }

    #[test]
    fn r_m_examples() {
        let k = qi();
        assert_eq!(r_m(&k, &ideal_of(&k, 3, 0)).unwrap(), 1);
        assert_eq!(r_m(&k, &ideal_of(&k, 1, 1)).unwrap(), 4);
        let k7 = make_field(-7).unwrap();
        // odd-norm m for w_k = 2: r ∈ {1, 2} by testing −1 ≡ 1
        let m = ideal_of(&k7, 3, 0);
        let r = r_m(&k7, &m).unwrap();
        assert!(r == 1 || r == 2);
        assert_eq!(r, 1); // −2 ∉ (3)
    }

    #[test]
    fn character_orthogonality_exact() {
        let k = qi();
        let ctx = RayCtx::new(k.clone());
        let g = ctx.group(&ideal_of(&k, 5, 0)).unwrap(); // order 4
        let chars = all_characters(&g);
        assert_eq!(chars.len(), 4);
        for c in g.classes() {
            // Σ_χ χ(c): each value e^{2πi t}; collect exact turn counts
            let mut counts: BTreeMap<Rat, usize> = BTreeMap::new();
            for chi in &chars {
                *counts.entry(chi.turn(&g, &c)).or_insert(0) += 1;
            }
            if g.group.is_zero(&c) {
                assert_eq!(counts.len(), 1);
                assert_eq!(counts[&Rat::zero()], 4);
            } else {
                // uniform over a nontrivial cyclic subgroup: sums to zero
                let ord = g.group.element_order(&c).to_i64().unwrap() as usize;
                assert!(counts.len() >= 2);
                for v in counts.values() {
                    assert_eq!(*v, 4 / ord);
                }
            }
        }
        // separation: for each nonzero class some character is nontrivial
        for c in g.classes() {
            if !g.group.is_zero(&c) {
                assert!(chars.iter().any(|chi| !chi.turn(&g, &c).is_zero()));
            }
        }
    }

    #[test]
    fn conductor_examples() {
        let k = qi();
        let ctx = RayCtx::new(k.clone());
        let m15 = ideal_of(&k, 15, 0);
        let g15 = ctx.group(&m15).unwrap();
        // trivial character: conductor (1)
        let triv = RayCharacter::trivial(&g15);
        assert!(conductor(&ctx, &g15, &triv).unwrap().is_one());
        // a character pulled back from mod (3): conductor (3)
        let g3 = ctx.group(&ideal_of(&k, 3, 0)).unwrap();
        let proj = ctx.projection(&g15, &g3).unwrap();
        // character of Cl_3 of order 2
        let chi3 = RayCharacter::new(&g3, vec![Int::one()]);
        // pull back: χ(v) = χ3(proj(v))
        let pulled_exponents: Vec<Int> = {
            // χ_pull(g_i) = χ3(proj(g_i)); express as exponents over g15 divisors
            let mut exps = vec![];
            for row in &proj {
                let t = chi3.turn(&g3, row);
                // t = c/d with d | divisor of χ3; convert to exponent on g15
                // generator: e^{2πi t} = value on that generator
                exps.push(t);
            }
            // exponents c_i with c_i/d_i = t_i
            g15.divisors()
                .iter()
                .zip(exps)
                .map(|(d, t)| (t * Rat::from(d.clone())).numer().clone())
                .collect()
        };
        let chi = RayCharacter::new(&g15, pulled_exponents);
        assert!(!chi.is_trivial());
        let f = conductor(&ctx, &g15, &chi).unwrap();
        assert_eq!(f, ideal_of(&k, 3, 0));
        // a primitive character mod (5) has conductor (5)
        let g5 = ctx.group(&ideal_of(&k, 5, 0)).unwrap();
        let chi5 = RayCharacter::new(&g5, vec![Int::one()]);
        assert_eq!(chi5.order, int(4));
        let f5 = conductor(&ctx, &g5, &chi5).unwrap();
        assert_eq!(f5, ideal_of(&k, 5, 0));
    }

    #[test]
    fn extension_labels_and_frobenius() {
        let k = qi();
        let ctx = RayCtx::new(k.clone());
        let m = ideal_of(&k, 3, 0);
        let g = ctx.group(&m).unwrap();
        let lab = AbelianExtensionLabel::from_subgroup(&ctx, &g, &[]).unwrap();
        assert_eq!(lab.degree, int(2));
        assert_eq!(lab.conductor, m);
        // Frobenius of a split prime ≡ 1: (x) with x ≡ 1 mod 3
        let x = ideal_of(&k, 4, 3);
        assert!(lab.is_identity(&lab.artin(&ctx, &x).unwrap()));
        // ramified prime rejected
        let p3 = factor_rational_prime(&k, &int(3))[0].0.clone();
        assert!(frobenius(&ctx, &p3, &lab).is_err());
        // transitivity through a subfield: H_(15) → H_(3)
        let m15 = ideal_of(&k, 15, 0);
        let g15 = ctx.group(&m15).unwrap();
        let lab_sub = AbelianExtensionLabel::from_subgroup(
            &ctx,
            &g15,
            &ctx.projection_kernel(&g15, &g).unwrap(),
        )
        .unwrap();
        assert_eq!(lab_sub.conductor, m);
        assert_eq!(lab_sub.degree, int(2));
        for (a, b) in [(2i64, 1i64), (7, 0), (4, 1)] {
            let p = ideal_of(&k, a, b);
            if !p.is_coprime(&k, &m15) {
                continue;
            }
            assert_eq!(
                lab.artin(&ctx, &p).unwrap(),
                lab_sub.artin(&ctx, &p).unwrap()
            );
        }
    }

    #[test]
    fn torsion_order_of_ray_fields() {
        let k = qi();
        let ctx = RayCtx::new(k.clone());
        // H_(3) over Q(i) is Q(ζ12): 12 roots of unity
        assert_eq!(
            ray_field_torsion_order(&ctx, &ideal_of(&k, 3, 0)).unwrap(),
            12
        );
        // H_(4) = Q(ζ8): 8 roots of unity
        assert_eq!(
            ray_field_torsion_order(&ctx, &ideal_of(&k, 4, 0)).unwrap(),
            8
        );
        // H_(5) = Q(ζ20): 20
        assert_eq!(
            ray_field_torsion_order(&ctx, &ideal_of(&k, 5, 0)).unwrap(),
            20
        );
        let k3 = make_field(-3).unwrap();
        let ctx3 = RayCtx::new(k3.clone());
        // H_(4)(Q(√−3)) = Q(ζ12)
        assert_eq!(
            ray_field_torsion_order(&ctx3, &ideal_of(&k3, 4, 0)).unwrap(),
            12
        );
    }
}
