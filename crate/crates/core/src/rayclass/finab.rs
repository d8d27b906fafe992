//! Finite abelian groups presented by elementary divisors, with subgroup,
//! kernel and quotient machinery used throughout the class-field layer.

use crate::exact::int::{int, Int};
use crate::exact::mat::{self, IMat};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A finite abelian group ⊕ Z/d_i, elements are exponent vectors mod d_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAb {
    pub divisors: Vec<Int>,
}

impl FinAb {
    pub fn new(divisors: Vec<Int>) -> Self {
        assert!(divisors.iter().all(|d| d.is_positive()));
        FinAb { divisors }
    }

    pub fn trivial() -> Self {
        FinAb { divisors: vec![] }
    }

    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    pub fn order(&self) -> Int {
        self.divisors.iter().product()
    }

    pub fn zero(&self) -> Vec<Int> {
        vec![Int::zero(); self.rank()]
    }

    pub fn reduce(&self, v: &[Int]) -> Vec<Int> {
        v.iter()
            .zip(&self.divisors)
            .map(|(x, d)| x.mod_floor(d))
            .collect()
    }

    pub fn add(&self, a: &[Int], b: &[Int]) -> Vec<Int> {
        a.iter()
            .zip(b.iter())
            .zip(&self.divisors)
            .map(|((x, y), d)| (x + y).mod_floor(d))
            .collect()
    }

    pub fn neg(&self, a: &[Int]) -> Vec<Int> {
        a.iter()
            .zip(&self.divisors)
            .map(|(x, d)| (-x).mod_floor(d))
            .collect()
    }

    pub fn smul(&self, n: &Int, a: &[Int]) -> Vec<Int> {
        a.iter()
            .zip(&self.divisors)
            .map(|(x, d)| (x * n).mod_floor(d))
            .collect()
    }

    pub fn is_zero(&self, a: &[Int]) -> bool {
        a.iter().all(|x| x.is_zero())
    }

    /// Order of an element.
    pub fn element_order(&self, a: &[Int]) -> Int {
        let mut ord = Int::one();
        for (x, d) in a.iter().zip(&self.divisors) {
            if x.is_zero() {
                continue;
            }
            let o = d / x.gcd(d);
            ord = ord.lcm(&o);
        }
        ord
    }

    /// Enumerate the whole group (desk scale only).
    pub fn elements(&self) -> Vec<Vec<Int>> {
        let mut out = vec![self.zero()];
        for (i, d) in self.divisors.iter().enumerate() {
            let dn = d.to_i64().expect("desk-scale group");
            let mut next = Vec::with_capacity(out.len() * dn as usize);
            for v in &out {
                for e in 0..dn {
                    let mut w = v.clone();
                    w[i] = int(e);
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }

    /// From a presentation: `n` generators subject to relation rows.
    /// Returns the group together with the change-of-coordinates matrices:
    /// `to_new` (n × r): old exponent vectors map by v ↦ v·to_new;
    /// `from_new` (r × n): each new generator as a word in the old ones.
    pub fn from_presentation(n: usize, relations: &IMat) -> (FinAb, IMat, IMat) {
        let mut rel = relations.clone();
        if rel.is_empty() {
            rel.push(vec![Int::zero(); n]);
        }
        assert!(rel.iter().all(|r| r.len() == n));
        let s = mat::snf(&rel);
        // group = Z^n / rowspan(rel) ≅ ⊕ Z/d_j via x ↦ x·V
        let mut divisors = vec![];
        let mut keep: Vec<usize> = vec![];
        for j in 0..n {
            let d = s.d.get(j).cloned().unwrap_or_else(Int::zero);
            if d.is_one() {
                continue;
            }
            assert!(
                !d.is_zero(),
                "presentation does not define a finite group"
            );
            divisors.push(d);
            keep.push(j);
        }
        let to_new: IMat = (0..n)
            .map(|i| keep.iter().map(|&j| s.v[i][j].clone()).collect())
            .collect();
        let from_new: IMat = keep
            .iter()
            .map(|&j| (0..n).map(|i| s.v_inv[j][i].clone()).collect())
            .collect();
        (FinAb::new(divisors), to_new, from_new)
    }

    /// Apply the old→new coordinate map (v is an old-generator exponent
    /// vector, result is reduced into the group).
    pub fn map_vector(&self, to_new: &IMat, v: &[Int]) -> Vec<Int> {
        if self.rank() == 0 {
            return vec![];
        }
        if to_new.is_empty() {
            return self.zero();
        }
        let w = mat::row_mat_mul(v, to_new);
        self.reduce(&w)
    }

    /// Generators of the kernel of the homomorphism `self → target` whose
    /// matrix on generators is `m` (row i = image of generator i).
    pub fn hom_kernel_gens(&self, target: &FinAb, m: &IMat) -> Vec<Vec<Int>> {
        let r = self.rank();
        let s = target.rank();
        assert_eq!(m.len(), r);
        // x (len r) is in the kernel iff x·M ≡ 0 mod target divisors, and x
        // is taken mod self divisors. Solve over Z with slack variables:
        // rows: [M | I_r-part? ] — build (r+s) × s stacked matrix:
        // (x | y) · [[M], [diag(target.d)]] = 0.
        let mut stack: IMat = Vec::with_capacity(r + s);
        for row in m {
            stack.push(row.clone());
        }
        for j in 0..s {
            let mut row = vec![Int::zero(); s];
            row[j] = target.divisors[j].clone();
            stack.push(row);
        }
        let ker = mat::left_kernel(&stack);
        let mut gens: Vec<Vec<Int>> = ker
            .into_iter()
            .map(|row| self.reduce(&row[0..r].to_vec()))
            .collect();
        // also the divisor relations of the source (harmless, often redundant)
        for i in 0..r {
            let mut v = self.zero();
            v[i] = self.divisors[i].clone();
            gens.push(self.reduce(&v));
        }
        gens.retain(|g| !self.is_zero(g));
        gens
    }

    /// The subgroup generated by the given vectors, as a canonical HNF row
    /// basis of its preimage lattice in Z^r (including divisor rows).
    pub fn subgroup_lattice(&self, gens: &[Vec<Int>]) -> IMat {
        let r = self.rank();
        let mut rows: IMat = gens.to_vec();
        for i in 0..r {
            let mut v = vec![Int::zero(); r];
            v[i] = self.divisors[i].clone();
            rows.push(v);
        }
        mat::lattice_basis(&rows)
    }

    /// Is v in the subgroup generated by `gens`?
    pub fn in_subgroup(&self, gens: &[Vec<Int>], v: &[Int]) -> bool {
        let lat = self.subgroup_lattice(gens);
        mat::solve_left(&lat, v).is_some()
    }

    /// Index of the subgroup generated by `gens`.
    pub fn subgroup_index(&self, gens: &[Vec<Int>]) -> Int {
        let lat = self.subgroup_lattice(gens);
        // [Z^r : L] = product of diagonal of HNF; index in group = that
        // divided by ... actually [G : H] = [Z^r : L] / [Z^r : D] * |G| with
        // D the divisor lattice: [Z^r : D] = |G|. So index = det(L).
        let mut det = Int::one();
        for (i, row) in lat.iter().enumerate() {
            det *= &row[i];
        }
        det
    }

    /// Presentation of the quotient G/⟨gens⟩: returns (quotient group,
    /// to_new matrix mapping G-vectors to quotient coordinates).
    pub fn quotient(&self, gens: &[Vec<Int>]) -> (FinAb, IMat) {
        let r = self.rank();
        let mut rel: IMat = gens.to_vec();
        for i in 0..r {
            let mut v = vec![Int::zero(); r];
            v[i] = self.divisors[i].clone();
            rel.push(v);
        }
        let (q, to_new, _) = FinAb::from_presentation(r, &rel);
        (q, to_new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presentation_and_quotient() {
        // Z² / <(2,0),(0,4)> = Z/2 × Z/4
        let rel = vec![vec![int(2), int(0)], vec![int(0), int(4)]];
        let (g, to_new, from_new) = FinAb::from_presentation(2, &rel);
        assert_eq!(g.order(), int(8));
        // generators map to unit vectors
        for (j, row) in from_new.iter().enumerate() {
            let v = g.map_vector(&to_new, row);
            let mut expected = g.zero();
            expected[j] = Int::one();
            assert_eq!(v, expected);
        }
        // quotient by an order-2 element
        let elts = g.elements();
        let e2 = elts
            .iter()
            .find(|v| g.element_order(v) == int(2))
            .unwrap()
            .clone();
        let (q, _) = g.quotient(&[e2]);
        assert_eq!(q.order(), int(4));
    }

    #[test]
    fn kernel_of_hom() {
        // G = Z/4 → Z/2, g ↦ 1
        let g = FinAb::new(vec![int(4)]);
        let t = FinAb::new(vec![int(2)]);
        let m = vec![vec![int(1)]];
        let ker = g.hom_kernel_gens(&t, &m);
        // kernel = {0, 2}: generated by 2
        assert!(ker.iter().any(|v| v == &vec![int(2)]));
        assert!(g.in_subgroup(&ker, &[int(2)]));
        assert!(!g.in_subgroup(&ker, &[int(1)]));
        assert_eq!(g.subgroup_index(&ker), int(2));
    }

    #[test]
    fn element_orders() {
        let g = FinAb::new(vec![int(6), int(4)]);
        assert_eq!(g.element_order(&[int(2), int(0)]), int(3));
        assert_eq!(g.element_order(&[int(1), int(1)]), int(12));
        assert_eq!(g.elements().len(), 24);
    }
}
