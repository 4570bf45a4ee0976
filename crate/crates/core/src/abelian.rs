//! Finitely generated abelian groups `ℤ^s ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k` in canonical
//! (divisor chain) form, their elements, and homomorphisms given by integer
//! matrices on coordinates.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{to_i64, Rational};
use crate::error::{Error, Result};
use crate::linalg::{self, smith_normal_form, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub free_rank: usize,
    #[serde(rename = "torsion")]
    pub torsion_orders: Vec<i64>,
}

/// An element in canonical coordinates: free part first, then torsion parts
/// reduced into `[0, dᵢ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub free: Vec<i64>,
    pub torsion: Vec<i64>,
}

impl GroupElement {
    pub fn new(free: Vec<i64>, torsion: Vec<i64>) -> Self {
        GroupElement { free, torsion }
    }

    /// The bar map: image in the lattice `Λ = Γ/Γ_t ⊂ V`.
    pub fn bar(&self) -> &[i64] {
        &self.free
    }

    pub fn bar_rational(&self) -> Vec<Rational> {
        self.free.iter().map(|&x| Rational::from_integer(x.into())).collect()
    }

    pub fn bar_big(&self) -> Vec<BigInt> {
        self.free.iter().map(|&x| BigInt::from(x)).collect()
    }

    pub fn has_infinite_order(&self) -> bool {
        self.free.iter().any(|&x| x != 0)
    }

    fn coords(&self) -> Vec<BigInt> {
        self.free.iter().chain(self.torsion.iter()).map(|&x| BigInt::from(x)).collect()
    }
}

impl GroupPresentation {
    /// A presentation whose torsion orders already form a divisor chain of
    /// integers `≥ 2`.
    pub fn new(free_rank: usize, torsion_orders: Vec<i64>) -> Result<Self> {
        let ok = torsion_orders.iter().all(|&d| d >= 2)
            && torsion_orders.windows(2).all(|w| w[1] % w[0] == 0);
        if !ok {
            return Err(Error::InvalidInput(format!(
                "torsion orders {torsion_orders:?} are not a divisor chain of integers >= 2"
            )));
        }
        Ok(GroupPresentation { free_rank, torsion_orders })
    }

    pub fn free(free_rank: usize) -> Self {
        GroupPresentation { free_rank, torsion_orders: Vec::new() }
    }

    /// Canonicalizes `ℤ^s ⊕ ⊕ ℤ/nᵢ` for arbitrary orders `nᵢ ≥ 1`; the
    /// returned map sends elements written in the given coordinates to
    /// canonical coordinates.
    pub fn canonicalize(free_rank: usize, orders: &[i64]) -> Result<Homomorphism> {
        if orders.iter().any(|&d| d < 1) {
            return Err(Error::InvalidInput(format!("torsion orders must be positive: {orders:?}")));
        }
        let source = GroupPresentation { free_rank, torsion_orders: orders.to_vec() };
        Ok(quotient_map(&source, &[]))
    }

    pub fn dim(&self) -> usize {
        self.free_rank + self.torsion_orders.len()
    }

    pub fn torsion_size(&self) -> usize {
        self.torsion_orders.iter().product::<i64>() as usize
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion_orders.is_empty()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { free: vec![0; self.free_rank], torsion: vec![0; self.torsion_orders.len()] }
    }

    pub fn element(&self, free: Vec<i64>, torsion: Vec<i64>) -> Result<GroupElement> {
        let g = GroupElement { free, torsion };
        self.validate(&g)?;
        Ok(g)
    }

    pub fn free_element(&self, free: Vec<i64>) -> GroupElement {
        assert_eq!(free.len(), self.free_rank);
        GroupElement { free, torsion: vec![0; self.torsion_orders.len()] }
    }

    pub fn validate(&self, g: &GroupElement) -> Result<()> {
        if g.free.len() != self.free_rank || g.torsion.len() != self.torsion_orders.len() {
            return Err(Error::InvalidInput(format!("element {g:?} has the wrong shape for {self:?}")));
        }
        for (t, d) in g.torsion.iter().zip(&self.torsion_orders) {
            if *t < 0 || t >= d {
                return Err(Error::InvalidInput(format!("torsion entry {t} out of range [0, {d})")));
            }
        }
        Ok(())
    }

    /// Reduces raw coordinates into canonical form.
    pub fn reduce(&self, free: Vec<i64>, torsion: Vec<i64>) -> GroupElement {
        let torsion = torsion
            .into_iter()
            .zip(&self.torsion_orders)
            .map(|(t, &d)| t.rem_euclid(d))
            .collect();
        GroupElement { free, torsion }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x.checked_add(*y).expect("overflow")).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&b.torsion)
                .zip(&self.torsion_orders)
                .map(|((x, y), d)| (x + y) % d)
                .collect(),
        }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement {
            free: a.free.iter().map(|x| -x).collect(),
            torsion: a.torsion.iter().zip(&self.torsion_orders).map(|(x, d)| (d - x) % d).collect(),
        }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, k: i64, a: &GroupElement) -> GroupElement {
        GroupElement {
            free: a.free.iter().map(|x| x.checked_mul(k).expect("overflow")).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&self.torsion_orders)
                .map(|(x, d)| (x * k.rem_euclid(*d)) % d)
                .collect(),
        }
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a GroupElement>) -> GroupElement {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// All elements of the torsion subgroup `Γ_t`, in lexicographic order.
    pub fn torsion_elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &d in &self.torsion_orders {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |t| {
                        let mut p = prefix.clone();
                        p.push(t);
                        p
                    })
                })
                .collect();
        }
        out
    }

    /// The relation matrix columns `dᵢ·e_{s+i}` in raw coordinates.
    fn relation_columns(&self) -> Vec<Vec<BigInt>> {
        let n = self.dim();
        self.torsion_orders
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut c = vec![BigInt::zero(); n];
                c[self.free_rank + i] = BigInt::from(d);
                c
            })
            .collect()
    }
}

/// A homomorphism `source → target` given on raw coordinates by an integer
/// matrix followed by canonical reduction in the target. `section` maps
/// target coordinates back to a preimage, so quotient maps can enumerate
/// coset representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    pub source: GroupPresentation,
    pub target: GroupPresentation,
    pub matrix: IntMatrix,
    pub section: IntMatrix,
}

impl Homomorphism {
    pub fn apply(&self, g: &GroupElement) -> GroupElement {
        let image = self.matrix.mul_vec(&g.coords());
        let s = self.target.free_rank;
        let free = image[..s].iter().map(to_i64).collect();
        let torsion = image[s..]
            .iter()
            .zip(&self.target.torsion_orders)
            .map(|(x, &d)| to_i64(&x.mod_floor(&BigInt::from(d))))
            .collect();
        GroupElement { free, torsion }
    }

    /// Some preimage of `t` under a surjective map.
    pub fn lift(&self, t: &GroupElement) -> GroupElement {
        let v = self.section.mul_vec(&t.coords());
        let s = self.source.free_rank;
        let free: Vec<i64> = v[..s].iter().map(to_i64).collect();
        let torsion: Vec<i64> = v[s..].iter().map(to_i64).collect();
        self.source.reduce(free, torsion)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mat = |m: &IntMatrix| -> Vec<Vec<String>> {
            m.a.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
        };
        serde_json::json!({
            "source": self.source,
            "target": self.target,
            "matrix": mat(&self.matrix),
            "section": mat(&self.section),
        })
    }
}

/// The quotient map `G → G/⟨gens⟩` computed from the Smith form of the
/// relation matrix.
pub fn quotient_map(g: &GroupPresentation, gens: &[GroupElement]) -> Homomorphism {
    let n = g.dim();
    let mut cols = g.relation_columns();
    // relation columns of a non-canonical source may contain d = 1 entries;
    // they are still valid relations
    cols.extend(gens.iter().map(|x| x.coords()));
    let rel = IntMatrix::from_columns(&cols, n);
    let snf = smith_normal_form(&rel);
    let diag: Vec<BigInt> = (0..n)
        .map(|j| if j < rel.cols { snf.d.a[j][j].clone() } else { BigInt::zero() })
        .collect();

    let free_rows: Vec<usize> = (0..n).filter(|&j| diag[j].is_zero()).collect();
    let tors_rows: Vec<usize> = (0..n).filter(|&j| diag[j] > BigInt::one()).collect();
    let target = GroupPresentation {
        free_rank: free_rows.len(),
        torsion_orders: tors_rows.iter().map(|&j| to_i64(&diag[j])).collect(),
    };
    let order: Vec<usize> = free_rows.iter().chain(&tors_rows).copied().collect();
    let matrix = IntMatrix::from_rows(order.iter().map(|&j| snf.u.a[j].clone()).collect(), n);

    let u_inv = invert_unimodular(&snf.u);
    let mut section = IntMatrix::zeros(n, order.len());
    for (k, &j) in order.iter().enumerate() {
        for i in 0..n {
            section.a[i][k] = u_inv.a[i][j].clone();
        }
    }
    Homomorphism { source: g.clone(), target, matrix, section }
}

fn invert_unimodular(u: &IntMatrix) -> IntMatrix {
    let n = u.rows;
    let mut aug: Vec<Vec<Rational>> = linalg::to_rational_rows(u)
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    linalg::rref(&mut aug, 2 * n);
    let rows = aug
        .iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|q| {
                    assert!(q.is_integer(), "matrix is not unimodular");
                    q.to_integer()
                })
                .collect()
        })
        .collect();
    IntMatrix::from_rows(rows, n)
}

/// `Γ/ℤa` together with its projection; `a` must have infinite order.
pub fn quotient_by_element(g: &GroupPresentation, a: &GroupElement) -> Result<Homomorphism> {
    g.validate(a)?;
    if !a.has_infinite_order() {
        return Err(Error::FiniteOrderElement);
    }
    Ok(quotient_map(g, std::slice::from_ref(a)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Index {
    Finite(u64),
    Infinite,
}

pub fn index_of_subgroup(g: &GroupPresentation, gens: &[GroupElement]) -> Index {
    let q = quotient_map(g, gens);
    if q.target.free_rank > 0 {
        Index::Infinite
    } else {
        Index::Finite(q.target.torsion_size() as u64)
    }
}

/// One representative per coset of `⟨gens⟩`, preferring elements of small
/// norm; the zero coset is represented by zero.
pub fn coset_reps(g: &GroupPresentation, gens: &[GroupElement]) -> Result<Vec<GroupElement>> {
    let q = quotient_map(g, gens);
    if q.target.free_rank > 0 {
        return Err(Error::InfiniteIndex);
    }
    let index = q.target.torsion_size();
    let mut seen: HashSet<GroupElement> = HashSet::new();
    let mut reps = Vec::with_capacity(index);
    let torsion = g.torsion_elements();
    // beyond this radius every coset is reachable through the section
    let max_radius = (index as i64).max(1);
    let mut radius = 0i64;
    while reps.len() < index && radius <= max_radius {
        for free in shell(g.free_rank, radius) {
            for t in &torsion {
                let x = GroupElement { free: free.clone(), torsion: t.clone() };
                if seen.insert(q.apply(&x)) {
                    reps.push(x);
                }
            }
        }
        radius += 1;
    }
    if reps.len() < index {
        for t in q.target.torsion_elements() {
            let key = GroupElement { free: Vec::new(), torsion: t };
            if seen.insert(key.clone()) {
                reps.push(q.lift(&key));
            }
        }
    }
    Ok(reps)
}

/// Integer points of max-norm exactly `radius`, sorted by
/// (ℓ¹ norm, number of negative entries, lexicographic).
pub fn shell(dim: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut pts = Vec::new();
    let mut cur = vec![-radius; dim];
    if dim == 0 {
        return if radius == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    loop {
        if cur.iter().any(|x| x.abs() == radius) {
            pts.push(cur.clone());
        }
        let mut i = dim;
        loop {
            if i == 0 {
                pts.sort_by_key(|p| {
                    let l1: i64 = p.iter().map(|x| x.abs()).sum();
                    let neg = p.iter().filter(|&&x| x < 0).count();
                    (l1, neg, p.clone())
                });
                return pts;
            }
            i -= 1;
            if cur[i] < radius {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = -radius;
                }
                break;
            }
        }
    }
}

/// The canonical form of the subgroup `⟨gens⟩`: Hermite basis of its
/// preimage lattice in raw coordinates (relations included).
pub fn subgroup_key(g: &GroupPresentation, gens: &[GroupElement]) -> Vec<Vec<BigInt>> {
    let mut rows = g.relation_columns();
    rows.extend(gens.iter().map(|x| x.coords()));
    linalg::hermite_rows(&rows, g.dim())
}

/// Order of an element (None when infinite).
pub fn element_order(g: &GroupPresentation, a: &GroupElement) -> Option<u64> {
    if a.has_infinite_order() {
        return None;
    }
    let mut ord = 1u64;
    for (t, d) in a.torsion.iter().zip(&g.torsion_orders) {
        let o = (d / t.gcd(d)) as u64;
        ord = ord.lcm(&o);
    }
    Some(ord)
}

/// Map from elements to their coset index, for small finite quotients.
pub fn coset_labels(q: &Homomorphism, elems: &[GroupElement]) -> HashMap<GroupElement, usize> {
    let mut labels = HashMap::new();
    for e in elems {
        let n = labels.len();
        labels.entry(q.apply(e)).or_insert(n);
    }
    labels
}

pub fn big_to_i64_vec(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().expect("coordinate overflow")).collect()
}

pub fn abs_det_i64(cols: &[Vec<i64>]) -> BigInt {
    let rows = cols.first().map_or(0, |c| c.len());
    let m = IntMatrix::from_columns(
        &cols.iter().map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<_>>(),
        rows,
    );
    m.det().abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> GroupPresentation {
        GroupPresentation::free(n)
    }

    fn z_z2() -> GroupPresentation {
        GroupPresentation::new(1, vec![2]).unwrap()
    }

    #[test]
    fn canonical_chain_required() {
        assert!(GroupPresentation::new(0, vec![2, 3]).is_err());
        assert!(GroupPresentation::new(0, vec![1]).is_err());
        let h = GroupPresentation::canonicalize(0, &[2, 3]).unwrap();
        assert_eq!(h.target, GroupPresentation::new(0, vec![6]).unwrap());
        let h = GroupPresentation::canonicalize(1, &[4, 6, 1]).unwrap();
        assert_eq!(h.target, GroupPresentation::new(1, vec![2, 12]).unwrap());
    }

    #[test]
    fn canonicalize_is_an_isomorphism() {
        let src = GroupPresentation { free_rank: 0, torsion_orders: vec![2, 3] };
        let h = GroupPresentation::canonicalize(0, &[2, 3]).unwrap();
        let mut images = HashSet::new();
        for a in 0..2 {
            for b in 0..3 {
                images.insert(h.apply(&GroupElement::new(vec![], vec![a, b])));
            }
        }
        assert_eq!(images.len(), 6);
        let x = GroupElement::new(vec![], vec![1, 2]);
        let y = GroupElement::new(vec![], vec![1, 1]);
        let sum = GroupElement::new(vec![], vec![0, 0]);
        let _ = src;
        assert_eq!(h.target.add(&h.apply(&x), &h.apply(&y)), h.apply(&sum));
    }

    #[test]
    fn quotient_examples() {
        let q = quotient_by_element(&z(1), &z(1).free_element(vec![2])).unwrap();
        assert_eq!(q.target, GroupPresentation::new(0, vec![2]).unwrap());

        let q = quotient_by_element(&z(2), &z(2).free_element(vec![1, 0])).unwrap();
        assert_eq!(q.target, z(1));

        let g = z_z2();
        let a = g.element(vec![1], vec![1]).unwrap();
        let q = quotient_by_element(&g, &a).unwrap();
        assert_eq!(q.target, GroupPresentation::new(0, vec![2]).unwrap());
        // kernel is exactly {(n, n mod 2)}
        for n in -4..=4 {
            for t in 0..2 {
                let x = g.element(vec![n], vec![t]).unwrap();
                let in_kernel = (n - t).rem_euclid(2) == 0;
                assert_eq!(q.apply(&x) == q.target.zero(), in_kernel, "{x:?}");
            }
        }
    }

    #[test]
    fn quotient_rejects_torsion() {
        let g = z_z2();
        let e = g.element(vec![0], vec![1]).unwrap();
        assert_eq!(quotient_by_element(&g, &e), Err(Error::FiniteOrderElement));
    }

    #[test]
    fn index_examples() {
        let g = z(2);
        let gens = [g.free_element(vec![1, 0]), g.free_element(vec![1, 2])];
        assert_eq!(index_of_subgroup(&g, &gens), Index::Finite(2));
        assert_eq!(index_of_subgroup(&z(1), &[z(1).free_element(vec![1])]), Index::Finite(1));
        assert_eq!(index_of_subgroup(&g, &gens[..1]), Index::Infinite);

        let g = z_z2();
        let gens = [g.element(vec![2], vec![1]).unwrap(), g.element(vec![0], vec![1]).unwrap()];
        assert_eq!(index_of_subgroup(&g, &gens), Index::Finite(2));
    }

    #[test]
    fn coset_rep_examples() {
        let g = z(1);
        assert_eq!(
            coset_reps(&g, &[g.free_element(vec![2])]).unwrap(),
            vec![g.free_element(vec![0]), g.free_element(vec![1])]
        );
        assert_eq!(coset_reps(&g, &[g.free_element(vec![1])]).unwrap(), vec![g.zero()]);
        let g = z(2);
        let gens = [g.free_element(vec![1, 0]), g.free_element(vec![1, 2])];
        assert_eq!(
            coset_reps(&g, &gens).unwrap(),
            vec![g.free_element(vec![0, 0]), g.free_element(vec![0, 1])]
        );
        assert_eq!(coset_reps(&g, &gens[..1]), Err(Error::InfiniteIndex));
    }

    #[test]
    fn lift_is_a_section() {
        let g = GroupPresentation::new(2, vec![3]).unwrap();
        let a = g.element(vec![2, 1], vec![1]).unwrap();
        let q = quotient_by_element(&g, &a).unwrap();
        for x in [g.element(vec![5, -3], vec![2]).unwrap(), g.element(vec![0, 7], vec![0]).unwrap()] {
            let y = q.apply(&x);
            assert_eq!(q.apply(&q.lift(&y)), y);
        }
    }

    #[test]
    fn element_orders() {
        let g = GroupPresentation::new(0, vec![2, 6]).unwrap();
        assert_eq!(element_order(&g, &g.element(vec![], vec![1, 2]).unwrap()), Some(6));
        assert_eq!(element_order(&g, &g.zero()), Some(1));
    }
}
