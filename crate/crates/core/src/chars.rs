//! Combinatorics of a character list `X`: rational subspaces, cocircuits,
//! bases, zonotope lattice points, torsion points and big cells.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::abelian::{self, big_to_i64_vec, GroupElement, GroupPresentation};
use crate::arith::{format_rational, frac, rat, rat_int, to_i64, Rational};
use crate::error::{Error, Result};
use crate::fm::{self, Ineq};
use crate::linalg::{self, smith_normal_form, IntMatrix};

/// The list `X`, stored with all elements of infinite order first (input
/// order is otherwise kept).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawList", into = "RawList")]
pub struct CharacterList {
    pub group: GroupPresentation,
    pub elements: Vec<GroupElement>,
}

#[derive(Serialize, Deserialize)]
struct RawList {
    group: GroupPresentation,
    #[serde(rename = "X")]
    elements: Vec<GroupElement>,
}

impl TryFrom<RawList> for CharacterList {
    type Error = Error;
    fn try_from(r: RawList) -> Result<Self> {
        let g = GroupPresentation::new(r.group.free_rank, r.group.torsion_orders)?;
        CharacterList::new(g, r.elements)
    }
}

impl From<CharacterList> for RawList {
    fn from(x: CharacterList) -> Self {
        RawList { group: x.group, elements: x.elements }
    }
}

impl CharacterList {
    pub fn new(group: GroupPresentation, elements: Vec<GroupElement>) -> Result<Self> {
        for e in &elements {
            group.validate(e)?;
        }
        let (mut inf, fin): (Vec<_>, Vec<_>) =
            elements.into_iter().partition(|e| e.has_infinite_order());
        inf.extend(fin);
        Ok(CharacterList { group, elements: inf })
    }

    /// Convenience constructor for torsion-free groups `ℤ^s`.
    pub fn free(s: usize, vectors: &[Vec<i64>]) -> Self {
        let g = GroupPresentation::free(s);
        let el = vectors.iter().map(|v| g.free_element(v.clone())).collect();
        CharacterList::new(g, el).expect("valid free list")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The dimension `s` of `V`.
    pub fn rank(&self) -> usize {
        self.group.free_rank
    }

    pub fn bar(&self, i: usize) -> &[i64] {
        self.elements[i].bar()
    }

    pub fn bars(&self) -> Vec<Vec<i64>> {
        self.elements.iter().map(|e| e.free.clone()).collect()
    }

    pub fn sublist(&self, idx: &[usize]) -> CharacterList {
        let el = idx.iter().map(|&i| self.elements[i].clone()).collect();
        CharacterList::new(self.group.clone(), el).expect("sublist of a valid list")
    }

    pub fn without(&self, i: usize) -> CharacterList {
        let idx: Vec<usize> = (0..self.len()).filter(|&j| j != i).collect();
        self.sublist(&idx)
    }

    /// Whether `X̄` spans `V`.
    pub fn spans(&self) -> bool {
        let rows: Vec<Vec<Rational>> =
            self.elements.iter().map(|e| e.bar_rational()).collect();
        linalg::rank(&rows, self.rank()) == self.rank()
    }

    pub fn infinite_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.elements[i].has_infinite_order()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    fn fingerprint(&self, salt: u64) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(serde_json::to_vec(self).expect("serializable"));
        h.update(salt.to_le_bytes());
        h.finalize().into()
    }
}

/// A subspace of `V` spanned by a sublist of `X̄`, stored through the
/// Hermite basis of its saturated lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RationalSubspace {
    pub dim: usize,
    /// Rows form the canonical basis of `r ∩ ℤ^s`.
    pub lattice_basis: Vec<Vec<i64>>,
    /// Rows form a canonical basis of the integer annihilator of `r`.
    pub normals: Vec<Vec<i64>>,
    pub member_indices: Vec<usize>,
    pub orientation: i8,
}

impl RationalSubspace {
    /// The span of `gens` in `ℤ^s`, with members taken from `x`.
    pub fn span(x: &CharacterList, gens: &[Vec<i64>]) -> Self {
        let s = x.rank();
        let gens: Vec<Vec<BigInt>> = gens
            .iter()
            .filter(|g| g.iter().any(|&c| c != 0))
            .map(|g| g.iter().map(|&c| BigInt::from(c)).collect())
            .collect();
        let normals = if gens.is_empty() {
            IntMatrix::identity(s).a
        } else {
            linalg::integer_kernel(&IntMatrix::from_rows(gens, s))
        };
        let normals = linalg::hermite_rows(&normals, s);
        let lattice = linalg::integer_kernel(&IntMatrix::from_rows(normals.clone(), s));
        let lattice = linalg::hermite_rows(&lattice, s);
        let normals: Vec<Vec<i64>> = normals.iter().map(|v| big_to_i64_vec(v)).collect();
        let lattice_basis: Vec<Vec<i64>> = lattice.iter().map(|v| big_to_i64_vec(v)).collect();
        let mut r = RationalSubspace {
            dim: lattice_basis.len(),
            lattice_basis,
            normals,
            member_indices: Vec::new(),
            orientation: 1,
        };
        r.member_indices = (0..x.len()).filter(|&i| r.contains(x.bar(i))).collect();
        r
    }

    pub fn zero(x: &CharacterList) -> Self {
        RationalSubspace::span(x, &[])
    }

    pub fn whole(x: &CharacterList) -> Self {
        let s = x.rank();
        let e: Vec<Vec<i64>> =
            (0..s).map(|i| (0..s).map(|j| i64::from(i == j)).collect()).collect();
        RationalSubspace::span(x, &e)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.normals.iter().all(|n| n.iter().zip(v).map(|(a, b)| a * b).sum::<i64>() == 0)
    }

    pub fn contains_rational(&self, v: &[Rational]) -> bool {
        self.normals
            .iter()
            .all(|n| n.iter().zip(v).map(|(a, b)| rat_int(*a) * b).sum::<Rational>().is_zero())
    }

    pub fn contains_subspace(&self, other: &RationalSubspace) -> bool {
        other.lattice_basis.iter().all(|v| self.contains(v))
    }

    pub fn same_space(&self, other: &RationalSubspace) -> bool {
        self.lattice_basis == other.lattice_basis
    }

    pub fn with_orientation(mut self, sign: i8) -> Self {
        self.orientation = sign;
        self
    }

    /// The elements of `x` outside this subspace.
    pub fn complement(&self, x: &CharacterList) -> Vec<usize> {
        (0..x.len()).filter(|i| !self.member_indices.contains(i)).collect()
    }

    /// A functional on `V` that vanishes on `self`, is positive on vectors
    /// of `t ∖ self` that are positive for the orientations of `self` and
    /// `t`, and is the orthogonal extension of that orientation form.
    /// `t` must contain `self` with one more dimension.
    pub fn orientation_functional(&self, t: &RationalSubspace) -> Vec<Rational> {
        assert_eq!(t.dim, self.dim + 1);
        let s = t.lattice_basis.first().map_or(0, |v| v.len());
        let k1 = t.dim;
        let tb: Vec<Vec<Rational>> =
            t.lattice_basis.iter().map(|v| v.iter().map(|&c| rat_int(c)).collect()).collect();
        // coordinates of r's basis vectors in t's basis: solve Tᵀ c = v
        let tt: Vec<Vec<Rational>> =
            (0..s).map(|i| (0..k1).map(|j| tb[j][i].clone()).collect()).collect();
        let coords: Vec<Vec<Rational>> = self
            .lattice_basis
            .iter()
            .map(|v| {
                let v: Vec<Rational> = v.iter().map(|&c| rat_int(c)).collect();
                match linalg::solve(&tt, &v, k1) {
                    linalg::Solution::Unique(c) => c,
                    _ => panic!("subspace is not contained in its successor"),
                }
            })
            .collect();
        let one = Rational::one();
        let w: Vec<Rational> = (0..k1)
            .map(|j| {
                let mut m = coords.clone();
                m.push((0..k1).map(|i| if i == j { one.clone() } else { Rational::zero() }).collect());
                linalg::det(&m, &one)
            })
            .collect();
        // n = Tᵀ (T Tᵀ)⁻¹ w
        let gram: Vec<Vec<Rational>> = (0..k1)
            .map(|i| (0..k1).map(|j| (0..s).map(|l| &tb[i][l] * &tb[j][l]).sum()).collect())
            .collect();
        let y = match linalg::solve(&gram, &w, k1) {
            linalg::Solution::Unique(y) => y,
            _ => panic!("degenerate lattice basis"),
        };
        let sign = rat_int(i64::from(self.orientation * t.orientation));
        (0..s).map(|l| (0..k1).map(|j| &y[j] * &tb[j][l]).sum::<Rational>() * &sign).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dim": self.dim,
            "lattice_basis": self.lattice_basis,
            "normals": self.normals,
            "member_indices": self.member_indices,
            "orientation": self.orientation,
        })
    }
}

/// Every span of a sublist of `X̄`, grouped by dimension.
pub fn rational_subspaces(x: &CharacterList) -> BTreeMap<usize, Vec<RationalSubspace>> {
    let zero = RationalSubspace::zero(x);
    let mut seen: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
    seen.insert(zero.lattice_basis.clone());
    let mut all = vec![zero.clone()];
    let mut queue = VecDeque::from([zero]);
    while let Some(r) = queue.pop_front() {
        for i in x.complement_of(&r) {
            let mut gens = r.lattice_basis.clone();
            gens.push(x.bar(i).to_vec());
            let t = RationalSubspace::span(x, &gens);
            if seen.insert(t.lattice_basis.clone()) {
                all.push(t.clone());
                queue.push_back(t);
            }
        }
    }
    let mut out: BTreeMap<usize, Vec<RationalSubspace>> = BTreeMap::new();
    for r in all {
        out.entry(r.dim).or_default().push(r);
    }
    for v in out.values_mut() {
        v.sort();
    }
    out
}

impl CharacterList {
    fn complement_of(&self, r: &RationalSubspace) -> Vec<usize> {
        r.complement(self)
    }
}

/// Rational subspaces of dimension `dim` contained in `r`.
pub fn subspaces_within(
    x: &CharacterList,
    r: &RationalSubspace,
    dim: usize,
) -> Vec<RationalSubspace> {
    rational_subspaces(x)
        .remove(&dim)
        .unwrap_or_default()
        .into_iter()
        .filter(|t| r.contains_subspace(t))
        .collect()
}

/// Codimension-one rational subspaces (the hyperplanes of `X`).
pub fn hyperplanes(x: &CharacterList) -> Vec<RationalSubspace> {
    let s = x.rank();
    if s == 0 {
        return Vec::new();
    }
    rational_subspaces(x).remove(&(s - 1)).unwrap_or_default()
}

/// The cocircuits `X ∖ H`, as index lists.
pub fn cocircuits(x: &CharacterList) -> Result<Vec<Vec<usize>>> {
    if !x.spans() {
        return Err(Error::DegenerateList);
    }
    Ok(hyperplanes(x).iter().map(|h| h.complement(x)).collect())
}

/// Cocircuits of the list `X ∩ r` relative to the space `r`, as indices
/// into `x`.
pub fn cocircuits_within(x: &CharacterList, r: &RationalSubspace) -> Vec<Vec<usize>> {
    if r.dim == 0 {
        return Vec::new();
    }
    subspaces_within(x, r, r.dim - 1)
        .iter()
        .map(|h| r.member_indices.iter().copied().filter(|i| !h.member_indices.contains(i)).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Basis {
    pub indices: Vec<usize>,
    /// The index `d(b)` of `Γ_t × ℤ_b` in `Γ`.
    pub index: u64,
}

pub fn bases(x: &CharacterList) -> Vec<Basis> {
    let s = x.rank();
    let inf = x.infinite_indices();
    let mut out = Vec::new();
    for comb in combinations(&inf, s) {
        let cols: Vec<Vec<i64>> = comb.iter().map(|&i| x.bar(i).to_vec()).collect();
        let d = if s == 0 { BigInt::one() } else { abelian::abs_det_i64(&cols) };
        if !d.is_zero() {
            out.push(Basis { indices: comb, index: to_i64(&d) as u64 });
        }
    }
    out
}

pub fn delta(x: &CharacterList) -> u64 {
    bases(x).iter().map(|b| b.index).sum()
}

/// All `k`-element sublists of `items`, in lexicographic order.
pub fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::new(), &mut out);
    out
}

const GENERIC_PRIME: i64 = 1_000_003;
const GENERIC_ATTEMPTS: usize = 32;

fn dot_i(n: &[i64], v: &[Rational]) -> Rational {
    n.iter().zip(v).map(|(a, b)| rat_int(*a) * b).sum()
}

/// `u` is generic when no hyperplane of `X` translated by a lattice point
/// passes through it, so the boundary of `u − B(X)` misses `Λ`.
pub fn is_generic(x: &CharacterList, u: &[Rational]) -> bool {
    hyperplanes(x).iter().all(|h| !dot_i(&h.normals[0], u).is_integer())
}

/// A deterministic generic vector with coordinates in `(0, 1)`, derived
/// from a hash of `X` and `seed`.
pub fn generic_u(x: &CharacterList, seed: u64) -> Result<Vec<Rational>> {
    for attempt in 0..GENERIC_ATTEMPTS {
        let u = hashed_vector(x, seed.wrapping_mul(1 << 16) + attempt as u64, 1);
        if is_generic(x, &u) {
            return Ok(u);
        }
    }
    Err(Error::NonGeneric(GENERIC_ATTEMPTS))
}

pub fn hashed_vector(x: &CharacterList, salt: u64, scale: i64) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::from_seed(x.fingerprint(salt));
    (0..x.rank())
        .map(|_| rat(rng.gen_range(1..GENERIC_PRIME), GENERIC_PRIME * scale))
        .collect()
}

/// Makes `u` generic by deterministic small perturbations when needed.
pub fn make_generic(x: &CharacterList, u: &[Rational]) -> Result<Vec<Rational>> {
    if is_generic(x, u) {
        return Ok(u.to_vec());
    }
    for attempt in 0..GENERIC_ATTEMPTS {
        let eps = hashed_vector(x, attempt as u64, GENERIC_PRIME);
        let v: Vec<Rational> = u.iter().zip(&eps).map(|(a, b)| a + b).collect();
        if is_generic(x, &v) {
            return Ok(v);
        }
    }
    Err(Error::NonGeneric(GENERIC_ATTEMPTS))
}

/// Bounds `lo_n ≤ ⟨n, v⟩ ≤ hi_n` of the zonotope `B(X)` along a normal.
fn support_bounds(x: &CharacterList, n: &[i64]) -> (i64, i64) {
    let mut lo = 0;
    let mut hi = 0;
    for i in 0..x.len() {
        let d: i64 = n.iter().zip(x.bar(i)).map(|(a, b)| a * b).sum();
        if d > 0 {
            hi += d;
        } else {
            lo += d;
        }
    }
    (lo, hi)
}

/// The set `Γ ∩ (u − B(X))` for `u` (made generic if necessary). Returns the
/// `u` actually used together with the points, sorted.
pub fn zonotope_points(x: &CharacterList, u: &[Rational]) -> Result<(Vec<Rational>, Vec<GroupElement>)> {
    if u.len() != x.rank() {
        return Err(Error::InvalidInput(format!("u has length {} but s = {}", u.len(), x.rank())));
    }
    if !x.spans() {
        return Ok((u.to_vec(), Vec::new()));
    }
    let u = make_generic(x, u)?;
    let s = x.rank();
    let facets: Vec<(Vec<i64>, i64, i64)> = hyperplanes(x)
        .iter()
        .map(|h| {
            let n = h.normals[0].clone();
            let (lo, hi) = support_bounds(x, &n);
            (n, lo, hi)
        })
        .collect();
    let mut ranges = Vec::with_capacity(s);
    for i in 0..s {
        let pos: i64 = x.bars().iter().map(|b| b[i].max(0)).sum();
        let neg: i64 = x.bars().iter().map(|b| b[i].min(0)).sum();
        let lo = (&u[i] - rat_int(pos)).ceil().to_integer();
        let hi = (&u[i] - rat_int(neg)).floor().to_integer();
        ranges.push((to_i64(&lo), to_i64(&hi)));
    }
    let mut free_pts = Vec::new();
    for p in box_points(&ranges) {
        let inside = facets.iter().all(|(n, lo, hi)| {
            let v: Vec<Rational> = u.iter().zip(&p).map(|(a, b)| a - rat_int(*b)).collect();
            let d = dot_i(n, &v);
            rat_int(*lo) < d && d < rat_int(*hi)
        });
        if inside {
            free_pts.push(p);
        }
    }
    let mut out = Vec::new();
    for p in free_pts {
        for t in x.group.torsion_elements() {
            out.push(GroupElement::new(p.clone(), t));
        }
    }
    out.sort();
    Ok((u, out))
}

/// All integer points of a box given by inclusive ranges.
pub fn box_points(ranges: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &(lo, hi) in ranges {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

/// A homomorphism `Γ → ℚ/ℤ`, recorded by its values on the generators
/// (free generators first, then torsion generators).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionPoint {
    pub values: Vec<Rational>,
}

impl TorsionPoint {
    pub fn trivial(g: &GroupPresentation) -> Self {
        TorsionPoint { values: vec![Rational::zero(); g.dim()] }
    }

    /// `p(γ) ∈ [0, 1)`.
    pub fn eval(&self, g: &GroupElement) -> Rational {
        let sum: Rational = g
            .free
            .iter()
            .chain(&g.torsion)
            .zip(&self.values)
            .map(|(c, v)| rat_int(*c) * v)
            .sum();
        frac(&sum)
    }

    /// Whether `p^a = 1`.
    pub fn kills(&self, a: &GroupElement) -> bool {
        self.eval(a).is_zero()
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn order(&self) -> u64 {
        let l = crate::arith::lcm_all(self.values.iter().map(|v| v.denom()));
        to_i64(&l) as u64
    }

    /// Checks `dᵢ · p(gᵢ) ≡ 0` on torsion generators.
    pub fn is_well_defined(&self, g: &GroupPresentation) -> bool {
        self.values.len() == g.dim()
            && g.torsion_orders
                .iter()
                .enumerate()
                .all(|(i, &d)| (rat_int(d) * &self.values[g.free_rank + i]).is_integer())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.values.iter().map(|v| format_rational(v).into()).collect())
    }
}

/// The finite group `G(b) = {p : p(b) = 0 for b ∈ b}` for a sublist of
/// finite index.
pub fn annihilator_points(g: &GroupPresentation, gens: &[GroupElement]) -> Vec<TorsionPoint> {
    let n = g.dim();
    let mut cols: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|e| e.free.iter().chain(&e.torsion).map(|&c| BigInt::from(c)).collect())
        .collect();
    for (i, &d) in g.torsion_orders.iter().enumerate() {
        let mut c = vec![BigInt::zero(); n];
        c[g.free_rank + i] = BigInt::from(d);
        cols.push(c);
    }
    if n == 0 {
        return vec![TorsionPoint { values: Vec::new() }];
    }
    let m = IntMatrix::from_columns(&cols, n);
    let snf = smith_normal_form(&m);
    // y·M ≡ 0 ⇔ z = y·U⁻¹ satisfies z_j d_j ∈ ℤ; y = z·U
    let diag: Vec<i64> = (0..n)
        .map(|j| if j < m.cols { to_i64(&snf.d.a[j][j]) } else { 0 })
        .collect();
    assert!(diag.iter().all(|&d| d > 0), "subgroup of infinite index");
    let mut out = Vec::new();
    for ks in box_points(&diag.iter().map(|&d| (0, d - 1)).collect::<Vec<_>>()) {
        let z: Vec<Rational> = ks.iter().zip(&diag).map(|(&k, &d)| rat(k, d)).collect();
        let values = (0..n)
            .map(|col| {
                let y: Rational =
                    (0..n).map(|j| &z[j] * Rational::from_integer(snf.u.a[j][col].clone())).sum();
                frac(&y)
            })
            .collect();
        out.push(TorsionPoint { values });
    }
    out
}

/// The finite set `P(X) = ⋃_b G(b)`, sorted.
pub fn special_points(x: &CharacterList) -> Vec<TorsionPoint> {
    let mut set = BTreeSet::new();
    for b in bases(x) {
        let gens: Vec<GroupElement> = b.indices.iter().map(|&i| x.elements[i].clone()).collect();
        set.extend(annihilator_points(&x.group, &gens));
    }
    set.into_iter().collect()
}

/// Descriptor of a subgroup `G(b) ⊂ G` for an independent sublist `b` of
/// size `s − c`: a torus of dimension `c` times a finite component group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupDescriptor {
    pub sublist: Vec<usize>,
    pub torus_dim: usize,
    /// Orders of the cyclic factors of the component group.
    pub component_orders: Vec<i64>,
    /// Canonical key of `⟨b⟩` (Hermite rows in raw coordinates).
    pub lattice: Vec<Vec<String>>,
}

pub fn special_subgroups(x: &CharacterList, codim: usize) -> Vec<SubgroupDescriptor> {
    let s = x.rank();
    if codim > s {
        return Vec::new();
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for comb in combinations(&x.infinite_indices(), s - codim) {
        let rows: Vec<Vec<Rational>> = comb.iter().map(|&i| x.elements[i].bar_rational()).collect();
        if linalg::rank(&rows, s) < comb.len() {
            continue;
        }
        let gens: Vec<GroupElement> = comb.iter().map(|&i| x.elements[i].clone()).collect();
        let key: Vec<Vec<String>> = abelian::subgroup_key(&x.group, &gens)
            .iter()
            .map(|r| r.iter().map(|c| c.to_string()).collect())
            .collect();
        if !seen.insert(key.clone()) {
            continue;
        }
        let q = abelian::quotient_map(&x.group, &gens);
        out.push(SubgroupDescriptor {
            sublist: comb,
            torus_dim: q.target.free_rank,
            component_orders: q.target.torsion_orders.clone(),
            lattice: key,
        });
    }
    out
}

/// `X_p`: the elements with `p^a = 1`.
pub fn fixed_sublist(x: &CharacterList, p: &TorsionPoint) -> (Vec<usize>, CharacterList) {
    let idx: Vec<usize> = (0..x.len()).filter(|&i| p.kills(&x.elements[i])).collect();
    let sub = x.sublist(&idx);
    (idx, sub)
}

/// A connected component of `Cone(X)` minus the cones of non-spanning
/// sublists, described as a union of regions of the arrangement of all
/// rational hyperplanes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BigCell {
    #[serde(serialize_with = "ser_rationals")]
    pub interior_point: Vec<Rational>,
    /// Hyperplanes (normal, sign) on which the cell has constant sign.
    pub walls: Vec<(Vec<i64>, i8)>,
    /// All rational hyperplane normals, in the order used by `regions`.
    pub hyperplanes: Vec<Vec<i64>>,
    /// Sign vectors of the arrangement regions making up the cell.
    pub regions: Vec<Vec<i8>>,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for q in v {
        seq.serialize_element(&format_rational(q))?;
    }
    seq.end()
}

fn sign_vector(normals: &[Vec<i64>], v: &[Rational]) -> Vec<i8> {
    normals
        .iter()
        .map(|n| {
            let d = dot_i(n, v);
            if d.is_positive() {
                1
            } else if d.is_negative() {
                -1
            } else {
                0
            }
        })
        .collect()
}

impl BigCell {
    /// Whether `v` lies in the cell off every rational hyperplane.
    pub fn contains(&self, v: &[Rational]) -> bool {
        let sv = sign_vector(&self.hyperplanes, v);
        !sv.contains(&0) && self.regions.contains(&sv)
    }

    pub fn contains_point(&self, v: &[i64]) -> bool {
        let q: Vec<Rational> = v.iter().map(|&c| rat_int(c)).collect();
        self.contains(&q)
    }
}

/// Checks the preconditions shared by cone-based computations on `X`:
/// torsion-free group and pointed cone. Returns a positive functional.
pub fn pointed_functional(x: &CharacterList) -> Result<Vec<Rational>> {
    if !x.group.is_torsion_free() {
        return Err(Error::TorsionPresent);
    }
    let vs: Vec<Vec<Rational>> = x.elements.iter().map(|e| e.bar_rational()).collect();
    fm::positive_functional(&vs, x.rank()).ok_or(Error::UnpointedCone)
}

fn region_system(normals: &[Vec<i64>], sv: &[i8], skip: Option<usize>) -> Vec<Ineq> {
    let mut rows = Vec::new();
    for (j, (n, &sg)) in normals.iter().zip(sv).enumerate() {
        let c: Vec<Rational> = n.iter().map(|&a| rat_int(a * i64::from(sg))).collect();
        if Some(j) == skip {
            rows.push(Ineq::new(c.clone(), Rational::zero()));
            rows.push(Ineq::new(c.iter().map(|a| -a).collect(), Rational::zero()));
        } else {
            rows.push(Ineq::new(c, Rational::one()));
        }
    }
    rows
}

pub fn big_cells(x: &CharacterList) -> Result<Vec<BigCell>> {
    pointed_functional(x)?;
    if !x.spans() || x.rank() == 0 {
        return Ok(Vec::new());
    }
    let s = x.rank();
    let hyps = hyperplanes(x);
    let normals: Vec<Vec<i64>> = hyps.iter().map(|h| h.normals[0].clone()).collect();
    let bars: Vec<Vec<Rational>> = x.elements.iter().map(|e| e.bar_rational()).collect();
    // fixed signs for the facets of Cone(X)
    let facet_sign: Vec<Option<i8>> = normals
        .iter()
        .map(|n| {
            let ds: Vec<i64> =
                (0..x.len()).map(|i| n.iter().zip(x.bar(i)).map(|(a, b)| a * b).sum()).collect();
            if ds.iter().all(|&d| d >= 0) {
                Some(1)
            } else if ds.iter().all(|&d| d <= 0) {
                Some(-1)
            } else {
                None
            }
        })
        .collect();

    // a starting point off every hyperplane
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let start = loop {
        let mut p = vec![Rational::zero(); s];
        for b in &bars {
            let w = rat(rng.gen_range(1..1000), 97);
            for (pi, bi) in p.iter_mut().zip(b) {
                *pi += &w * bi;
            }
        }
        if !sign_vector(&normals, &p).contains(&0) {
            break p;
        }
    };
    let start_sv = sign_vector(&normals, &start);
    let mut regions: Vec<Vec<i8>> = vec![start_sv.clone()];
    let mut index: HashMap<Vec<i8>, usize> = HashMap::from([(start_sv, 0)]);
    let mut parent: Vec<usize> = vec![0];
    let mut queue = VecDeque::from([0usize]);
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut j = i;
        while parent[j] != r {
            let nx = parent[j];
            parent[j] = r;
            j = nx;
        }
        r
    }
    while let Some(ri) = queue.pop_front() {
        let sv = regions[ri].clone();
        for j in 0..normals.len() {
            if facet_sign[j].is_some() {
                continue;
            }
            let Some(wit) = fm::feasible_point(&region_system(&normals, &sv, Some(j)), s) else {
                continue;
            };
            let mut nsv = sv.clone();
            nsv[j] = -nsv[j];
            let ni = match index.get(&nsv) {
                Some(&k) => k,
                None => {
                    let k = regions.len();
                    regions.push(nsv.clone());
                    index.insert(nsv, k);
                    parent.push(k);
                    queue.push_back(k);
                    k
                }
            };
            let wall_gens: Vec<Vec<Rational>> =
                hyps[j].member_indices.iter().map(|&i| bars[i].clone()).collect();
            if !fm::in_cone(&wit, &wall_gens) {
                let (a, b) = (find(&mut parent, ri), find(&mut parent, ni));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Vec<i8>>> = BTreeMap::new();
    for i in 0..regions.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(regions[i].clone());
    }
    let mut cells = Vec::new();
    for (_, mut regs) in groups {
        regs.sort();
        let interior_point = fm::feasible_point(&region_system(&normals, &regs[0], None), s)
            .expect("region is nonempty");
        let walls = (0..normals.len())
            .filter(|&j| regs.iter().all(|r| r[j] == regs[0][j]))
            .map(|j| (normals[j].clone(), regs[0][j]))
            .collect();
        cells.push(BigCell { interior_point, walls, hyperplanes: normals.clone(), regions: regs });
    }
    cells.sort_by(|a, b| a.regions[0].cmp(&b.regions[0]).reverse());
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank6() -> CharacterList {
        let g = GroupPresentation::new(1, vec![2]).unwrap();
        CharacterList::new(
            g,
            vec![GroupElement::new(vec![1], vec![1]), GroupElement::new(vec![2], vec![1])],
        )
        .unwrap()
    }

    fn sizes(x: &CharacterList) -> Vec<(usize, usize)> {
        rational_subspaces(x).iter().map(|(k, v)| (*k, v.len())).collect()
    }

    #[test]
    fn subspace_counts() {
        let x = CharacterList::free(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(sizes(&x), vec![(0, 1), (1, 3), (2, 1)]);
        assert_eq!(sizes(&CharacterList::free(1, &[vec![1], vec![1]])), vec![(0, 1), (1, 1)]);
        assert_eq!(sizes(&rank6()), vec![(0, 1), (1, 1)]);
    }

    #[test]
    fn subspace_lattices_are_saturated() {
        let x = CharacterList::free(2, &[vec![2, 2], vec![0, 3]]);
        let subs = rational_subspaces(&x);
        let lines: Vec<Vec<Vec<i64>>> = subs[&1].iter().map(|r| r.lattice_basis.clone()).collect();
        assert!(lines.contains(&vec![vec![1, 1]]));
        assert!(lines.contains(&vec![vec![0, 1]]));
        assert_eq!(subs[&2][0].lattice_basis, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn cocircuit_lists() {
        let x = CharacterList::free(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        let mut c = cocircuits(&x).unwrap();
        c.sort();
        assert_eq!(c, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(cocircuits(&rank6()).unwrap(), vec![vec![0, 1]]);
        assert_eq!(
            cocircuits(&CharacterList::free(2, &[vec![1, 0]])),
            Err(Error::DegenerateList)
        );
    }

    #[test]
    fn bases_and_delta() {
        let x = CharacterList::free(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(bases(&x).len(), 3);
        assert!(bases(&x).iter().all(|b| b.index == 1));
        let b = bases(&rank6());
        assert_eq!(b.iter().map(|b| b.index).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(delta(&rank6()), 3);
        assert_eq!(delta(&CharacterList::free(1, &[vec![2]])), 2);
        assert_eq!(delta(&CharacterList::free(1, &[vec![1], vec![1]])), 2);
        assert_eq!(delta(&CharacterList::free(2, &[vec![1, 1]])), 0);
    }

    #[test]
    fn stored_order_puts_torsion_last() {
        let g = GroupPresentation::new(1, vec![2]).unwrap();
        let x = CharacterList::new(
            g,
            vec![GroupElement::new(vec![0], vec![1]), GroupElement::new(vec![3], vec![0])],
        )
        .unwrap();
        assert_eq!(x.elements[0].free, vec![3]);
    }

    #[test]
    fn zonotope_point_examples() {
        let x = CharacterList::free(1, &[vec![1], vec![1]]);
        let (_, pts) = zonotope_points(&x, &[rat(1, 2)]).unwrap();
        let got: Vec<Vec<i64>> = pts.iter().map(|p| p.free.clone()).collect();
        assert_eq!(got, vec![vec![-1], vec![0]]);

        let x = CharacterList::free(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        let (_, pts) = zonotope_points(&x, &[rat(1, 2), rat(1, 3)]).unwrap();
        assert_eq!(pts.len(), 3);

        let (_, pts) = zonotope_points(&rank6(), &[rat(1, 2)]).unwrap();
        assert_eq!(pts.len(), 6);
    }

    #[test]
    fn nongeneric_u_is_perturbed() {
        let x = CharacterList::free(1, &[vec![1], vec![1]]);
        let (u, pts) = zonotope_points(&x, &[rat(0, 1)]).unwrap();
        assert!(is_generic(&x, &u));
        assert_eq!(pts.len(), 2);
    }

    #[test]
    fn torsion_points() {
        let x = CharacterList::free(1, &[vec![2]]);
        let p = special_points(&x);
        assert_eq!(p.len(), 2);
        assert_eq!(p[1].values, vec![rat(1, 2)]);
        let x = CharacterList::free(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(special_points(&x), vec![TorsionPoint::trivial(&x.group)]);
        let p = special_points(&rank6());
        assert_eq!(p.len(), 5);
        assert!(p.iter().all(|q| q.is_well_defined(&rank6().group)));
    }

    #[test]
    fn fixed_sublists() {
        let x = CharacterList::free(1, &[vec![1], vec![2]]);
        let p = TorsionPoint { values: vec![rat(1, 2)] };
        assert_eq!(fixed_sublist(&x, &p).0, vec![1]);
        let p = TorsionPoint::trivial(&x.group);
        assert_eq!(fixed_sublist(&x, &p).0, vec![0, 1]);
    }

    #[test]
    fn cells() {
        let x = CharacterList::free(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        let c = big_cells(&x).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.iter().any(|c| c.contains_point(&[3, 1])));
        assert!(c.iter().any(|c| c.contains_point(&[1, 3])));
        assert!(!c.iter().any(|c| c.contains_point(&[-1, 3])));
        assert_eq!(big_cells(&CharacterList::free(1, &[vec![1], vec![1]])).unwrap().len(), 1);
        assert_eq!(big_cells(&CharacterList::free(2, &[vec![1, 0], vec![0, 1]])).unwrap().len(), 1);
        assert_eq!(
            big_cells(&CharacterList::free(1, &[vec![1], vec![-1]])),
            Err(Error::UnpointedCone)
        );
        assert_eq!(big_cells(&rank6()), Err(Error::TorsionPresent));
    }

    #[test]
    fn codim_descriptors() {
        let x = CharacterList::free(2, &[vec![1, 0], vec![0, 2]]);
        let d = special_subgroups(&x, 1);
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(|d| d.torus_dim == 1));
        assert!(d.iter().any(|d| d.component_orders == vec![2]));
        assert_eq!(special_subgroups(&x, 2).len(), 1);
    }

    #[test]
    fn orientation_functional_vanishes_on_subspace() {
        let x = CharacterList::free(2, &[vec![1, 1], vec![1, 0]]);
        let r = RationalSubspace::span(&x, &[vec![1, 1]]);
        let t = RationalSubspace::whole(&x);
        let n = r.orientation_functional(&t);
        assert!(dot_i(&[1, 1], &n).is_zero());
        assert!(!dot_i(&[1, 0], &n).is_zero());
        let flipped = r.clone().with_orientation(-1).orientation_functional(&t);
        assert_eq!(flipped, n.iter().map(|c| -c).collect::<Vec<_>>());
    }
}
