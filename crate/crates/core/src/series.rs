//! Integer-valued functions on `Γ` with cone-shaped supports: deltas,
//! Heaviside functions, translations, difference operators and the
//! convolutions `P^F`, `Q^t_r` and `Q_φ`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use parking_lot::RwLock;

use crate::abelian::{GroupElement, GroupPresentation};
use crate::arith::{rat_int, Rational};
use crate::chars::{self, CharacterList, RationalSubspace};
use crate::error::{Error, Result};
use crate::fm;
use crate::linalg;
use crate::window::{Table, Window};

pub type Evaluator = dyn Fn(&GroupElement) -> Result<i64> + Send + Sync;

/// Where a function may be nonzero.
#[derive(Clone, Debug, PartialEq)]
pub enum Support {
    FiniteSet(Vec<GroupElement>),
    /// `apex + C(generators)` (a superset in the torsion directions).
    PointedCone { apex: GroupElement, generators: Vec<GroupElement> },
    ConePair {
        first: (GroupElement, Vec<GroupElement>),
        second: (GroupElement, Vec<GroupElement>),
    },
    /// Points whose free part `v` has `N v` in `labels`, where the rows of
    /// `N` are the normals of a rational subspace.
    TranslatesOfSubspace { normals: Vec<Vec<i64>>, labels: Vec<Vec<i64>> },
    All,
}

fn in_shifted_cone(g: &GroupElement, apex: &GroupElement, gens: &[GroupElement]) -> bool {
    let v: Vec<Rational> = g.free.iter().zip(&apex.free).map(|(a, b)| rat_int(a - b)).collect();
    let gs: Vec<Vec<Rational>> = gens.iter().map(|e| e.bar_rational()).collect();
    fm::in_cone(&v, &gs)
}

fn apply_normals(normals: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    normals.iter().map(|n| n.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

impl Support {
    /// `false` means the function must vanish at `g`.
    pub fn admits(&self, g: &GroupElement) -> bool {
        match self {
            Support::FiniteSet(s) => s.contains(g),
            Support::PointedCone { apex, generators } => in_shifted_cone(g, apex, generators),
            Support::ConePair { first, second } => {
                in_shifted_cone(g, &first.0, &first.1) || in_shifted_cone(g, &second.0, &second.1)
            }
            Support::TranslatesOfSubspace { normals, labels } => {
                labels.contains(&apply_normals(normals, &g.free))
            }
            Support::All => true,
        }
    }
}

/// A function `Γ → ℤ` given by a lazy evaluator with a shared memo cache.
#[derive(Clone)]
pub struct GammaFunction {
    group: GroupPresentation,
    support: Support,
    eval: Arc<Evaluator>,
    cache: Arc<RwLock<HashMap<GroupElement, i64>>>,
}

impl fmt::Debug for GammaFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GammaFunction")
            .field("group", &self.group)
            .field("support", &self.support)
            .field("cached", &self.cache.read().len())
            .finish()
    }
}

impl GammaFunction {
    pub fn new(
        group: GroupPresentation,
        support: Support,
        f: impl Fn(&GroupElement) -> Result<i64> + Send + Sync + 'static,
    ) -> Self {
        GammaFunction { group, support, eval: Arc::new(f), cache: Arc::default() }
    }

    pub fn group(&self) -> &GroupPresentation {
        &self.group
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn value(&self, g: &GroupElement) -> Result<i64> {
        if let Some(v) = self.cache.read().get(g) {
            return Ok(*v);
        }
        let v = (self.eval)(g)?;
        self.cache.write().insert(g.clone(), v);
        Ok(v)
    }

    pub fn zero(group: &GroupPresentation) -> Self {
        GammaFunction::new(group.clone(), Support::FiniteSet(Vec::new()), |_| Ok(0))
    }

    pub fn delta(group: &GroupPresentation, at: &GroupElement) -> Self {
        let at = at.clone();
        let a2 = at.clone();
        GammaFunction::new(group.clone(), Support::FiniteSet(vec![at]), move |g| {
            Ok(i64::from(*g == a2))
        })
    }

    /// A finitely supported function from explicit values.
    pub fn from_values(group: &GroupPresentation, values: HashMap<GroupElement, i64>) -> Self {
        let pts = values.iter().filter(|(_, v)| **v != 0).map(|(k, _)| k.clone()).collect();
        GammaFunction::new(group.clone(), Support::FiniteSet(pts), move |g| {
            Ok(values.get(g).copied().unwrap_or(0))
        })
    }

    /// A function known only on a window; evaluation outside it fails with
    /// `WindowTooSmall` rather than guessing.
    pub fn from_table(group: &GroupPresentation, table: Table) -> Self {
        let values = table.values;
        GammaFunction::new(group.clone(), Support::All, move |g| {
            values.get(g).copied().ok_or_else(|| {
                Error::WindowTooSmall(format!("value at {:?} lies outside the supplied table", g))
            })
        })
    }

    pub fn tabulate(&self, window: &Window) -> Result<Table> {
        let mut values = std::collections::BTreeMap::new();
        for p in window.points(&self.group) {
            values.insert(p.clone(), self.value(&p)?);
        }
        Ok(Table { window: window.clone(), values })
    }

    /// `(δ_by * f)(γ) = f(γ − by)`.
    pub fn translate(&self, by: &GroupElement) -> GammaFunction {
        let g = self.group.clone();
        let by = by.clone();
        let support = match &self.support {
            Support::FiniteSet(s) => Support::FiniteSet(s.iter().map(|x| g.add(x, &by)).collect()),
            Support::PointedCone { apex, generators } => {
                Support::PointedCone { apex: g.add(apex, &by), generators: generators.clone() }
            }
            Support::ConePair { first, second } => Support::ConePair {
                first: (g.add(&first.0, &by), first.1.clone()),
                second: (g.add(&second.0, &by), second.1.clone()),
            },
            _ => Support::All,
        };
        let f = self.clone();
        let gg = g.clone();
        GammaFunction::new(g, support, move |x| f.value(&gg.sub(x, &by)))
    }

    /// `∇_Y f = Π_{a∈Y} (1 − τ_a) f`.
    pub fn nabla(&self, ys: &[GroupElement]) -> GammaFunction {
        if ys.is_empty() {
            return self.clone();
        }
        let g = self.group.clone();
        let stencil = difference_stencil(&g, ys);
        let f = self.clone();
        let gg = g.clone();
        GammaFunction::new(g, Support::All, move |x| {
            let mut acc = 0i64;
            for (off, c) in &stencil {
                acc += c * f.value(&gg.sub(x, off))?;
            }
            Ok(acc)
        })
    }

    /// `Σ cᵢ fᵢ`.
    pub fn combination(group: &GroupPresentation, terms: Vec<(i64, GammaFunction)>) -> GammaFunction {
        let terms: Vec<(i64, GammaFunction)> = terms.into_iter().filter(|(c, _)| *c != 0).collect();
        GammaFunction::new(group.clone(), Support::All, move |x| {
            let mut acc = 0i64;
            for (c, f) in &terms {
                acc += c * f.value(x)?;
            }
            Ok(acc)
        })
    }

    pub fn sub(&self, other: &GammaFunction) -> GammaFunction {
        GammaFunction::combination(&self.group, vec![(1, self.clone()), (-1, other.clone())])
    }

    /// The restriction to `Γ_r`, extended by zero.
    pub fn restrict(&self, r: &RationalSubspace) -> GammaFunction {
        let f = self.clone();
        let r2 = r.clone();
        let support = Support::TranslatesOfSubspace {
            normals: r.normals.clone(),
            labels: vec![vec![0; r.normals.len()]],
        };
        GammaFunction::new(self.group.clone(), support, move |x| {
            if r2.contains(&x.free) {
                f.value(x)
            } else {
                Ok(0)
            }
        })
    }
}

/// The offsets and coefficients of `∇_Y`: `(∇_Y f)(γ) = Σ c · f(γ − offset)`.
pub fn difference_stencil(group: &GroupPresentation, ys: &[GroupElement]) -> Vec<(GroupElement, i64)> {
    let mut stencil: HashMap<GroupElement, i64> = HashMap::from([(group.zero(), 1)]);
    for a in ys {
        let mut next = stencil.clone();
        for (off, c) in &stencil {
            *next.entry(group.add(off, a)).or_insert(0) -= c;
        }
        next.retain(|_, c| *c != 0);
        stencil = next;
    }
    let mut stencil: Vec<(GroupElement, i64)> = stencil.into_iter().collect();
    stencil.sort();
    stencil
}

/// Scales a rational functional by a positive integer to integer entries.
pub fn integer_functional(u: &[Rational]) -> Vec<i64> {
    let l = crate::arith::lcm_all(u.iter().map(|q| q.denom()));
    u.iter().map(|q| crate::arith::to_i64(&(q * Rational::from_integer(l.clone())).to_integer())).collect()
}

fn pair(phi: &[i64], v: &[i64]) -> i64 {
    phi.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// `H_A(γ) = #{(m_a) ≥ 0 : Σ m_a a = γ}`, evaluated as the convolution
/// chain `δ₀ * H_{a₁} * … * H_{a_k}` with per-stage memoization.
pub fn heaviside(group: &GroupPresentation, gens: &[GroupElement]) -> Result<GammaFunction> {
    if gens.iter().any(|a| !a.has_infinite_order()) {
        return Err(Error::UnpointedCone);
    }
    let bars: Vec<Vec<Rational>> = gens.iter().map(|a| a.bar_rational()).collect();
    let u = fm::positive_functional(&bars, group.free_rank).ok_or(Error::UnpointedCone)?;
    let phi = integer_functional(&u);
    let mut h = GammaFunction::delta(group, &group.zero());
    for (k, a) in gens.iter().enumerate() {
        let prev = h;
        let a = a.clone();
        let w = pair(&phi, &a.free);
        let phi = phi.clone();
        let g = group.clone();
        let support =
            Support::PointedCone { apex: group.zero(), generators: gens[..=k].to_vec() };
        h = GammaFunction::new(group.clone(), support, move |x| {
            let t = pair(&phi, &x.free);
            if t < 0 {
                return Ok(0);
            }
            let mut acc = 0;
            let mut y = x.clone();
            for _ in 0..=t / w {
                acc += prev.value(&y)?;
                y = g.sub(&y, &a);
            }
            Ok(acc)
        });
    }
    Ok(h)
}

/// A functional `u₀ ∈ U` selecting an open face; it splits a list into the
/// elements where it is positive (`A`) and negative (`B`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceSelector {
    pub functional: Vec<Rational>,
}

impl FaceSelector {
    pub fn new(functional: Vec<Rational>) -> Self {
        FaceSelector { functional }
    }

    pub fn negated(&self) -> Self {
        FaceSelector { functional: self.functional.iter().map(|c| -c).collect() }
    }

    /// `(A, B)` for the given indices of `x`.
    pub fn split(&self, x: &CharacterList, idx: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for &i in idx {
            let d: Rational =
                x.bar(i).iter().zip(&self.functional).map(|(c, u)| rat_int(*c) * u).sum();
            if d.is_positive() {
                a.push(i);
            } else if d.is_negative() {
                b.push(i);
            } else {
                return Err(Error::FaceVanishes);
            }
        }
        Ok((a, b))
    }

    /// A deterministic generic functional vanishing on `r`: a hashed vector
    /// projected onto the orthogonal complement of `r`.
    pub fn default_for(x: &CharacterList, r: &RationalSubspace) -> Result<Self> {
        let s = x.rank();
        let lb: Vec<Vec<Rational>> =
            r.lattice_basis.iter().map(|v| v.iter().map(|&c| rat_int(c)).collect()).collect();
        let k = lb.len();
        let gram: Vec<Vec<Rational>> = (0..k)
            .map(|i| (0..k).map(|j| (0..s).map(|l| &lb[i][l] * &lb[j][l]).sum()).collect())
            .collect();
        let complement = r.complement(x);
        for salt in 0..32u64 {
            let w = chars::hashed_vector(x, 0x5eed_0000 + salt, 1);
            let rhs: Vec<Rational> =
                (0..k).map(|i| (0..s).map(|l| &lb[i][l] * &w[l]).sum()).collect();
            let y = match linalg::solve(&gram, &rhs, k) {
                linalg::Solution::Unique(y) => y,
                _ => Vec::new(),
            };
            let u: Vec<Rational> = (0..s)
                .map(|l| &w[l] - (0..k).map(|j| &y[j] * &lb[j][l]).sum::<Rational>())
                .collect();
            let f = FaceSelector::new(u);
            if f.split(x, &complement).is_ok() {
                return Ok(f);
            }
        }
        Err(Error::NonGeneric(32))
    }
}

/// The signed cone kernel `sign · δ_{−shift} * H_{gens}` together with a
/// functional `phi` positive on `gens`, used to convolve against functions
/// whose support has finitely many `phi`-levels.
#[derive(Clone, Debug)]
pub struct ConeKernel {
    pub sign: i64,
    /// Added to the argument: the kernel is supported on `−shift + C(gens)`.
    pub shift: GroupElement,
    pub gens: Vec<GroupElement>,
    weights: Vec<i64>,
    pub phi: Vec<i64>,
}

impl ConeKernel {
    /// `(−1)^{|B|} δ_{−b_B} * H_A * H_{−B}` for the split `(A, B)` of `x`.
    pub fn from_split(x: &CharacterList, a: &[usize], b: &[usize], phi: &[i64]) -> Result<Self> {
        let g = &x.group;
        let mut gens: Vec<GroupElement> = a.iter().map(|&i| x.elements[i].clone()).collect();
        gens.extend(b.iter().map(|&i| g.neg(&x.elements[i])));
        let shift = g.sum(b.iter().map(|&i| &x.elements[i]));
        let weights: Vec<i64> = gens.iter().map(|e| pair(phi, &e.free)).collect();
        if weights.iter().any(|&w| w <= 0) {
            return Err(Error::ConvolutionDiverges);
        }
        let sign = if b.len().is_multiple_of(2) { 1 } else { -1 };
        Ok(ConeKernel { sign, shift, gens, weights, phi: phi.to_vec() })
    }

    /// `(kernel * inner)(γ)` where `inner` vanishes off the `phi`-levels
    /// listed in `levels`.
    pub fn convolve(
        &self,
        group: &GroupPresentation,
        x: &GroupElement,
        inner: &GammaFunction,
        levels: &[i64],
    ) -> Result<i64> {
        self.convolve_with(group, x, levels, &mut |y| inner.value(y))
    }

    /// As `convolve`, against an arbitrary (possibly partial) evaluator.
    pub fn convolve_with(
        &self,
        group: &GroupPresentation,
        x: &GroupElement,
        levels: &[i64],
        inner: &mut dyn FnMut(&GroupElement) -> Result<i64>,
    ) -> Result<i64> {
        let base = group.add(x, &self.shift);
        let t = pair(&self.phi, &base.free);
        let mut acc = 0i64;
        for &l in levels {
            self.visit(group, 0, base.clone(), t - l, inner, &mut acc)?;
        }
        Ok(self.sign * acc)
    }

    fn visit(
        &self,
        group: &GroupPresentation,
        k: usize,
        x: GroupElement,
        rem: i64,
        inner: &mut dyn FnMut(&GroupElement) -> Result<i64>,
        acc: &mut i64,
    ) -> Result<()> {
        if rem < 0 {
            return Ok(());
        }
        if k == self.gens.len() {
            if rem == 0 {
                *acc += inner(&x)?;
            }
            return Ok(());
        }
        let w = self.weights[k];
        if k + 1 == self.gens.len() {
            if !rem.is_multiple_of(&w) {
                return Ok(());
            }
            let y = group.sub(&x, &group.scale(rem / w, &self.gens[k]));
            *acc += inner(&y)?;
            return Ok(());
        }
        let mut y = x;
        let mut r = rem;
        while r >= 0 {
            self.visit(group, k + 1, y.clone(), r, inner, acc)?;
            r -= w;
            y = group.sub(&y, &self.gens[k]);
        }
        Ok(())
    }

    pub fn support(&self, group: &GroupPresentation) -> Support {
        Support::PointedCone { apex: group.neg(&self.shift), generators: self.gens.clone() }
    }
}

/// `P^F_{X∖r} = (−1)^{|B|} δ_{−b_B} * H_A * H_{−B}` for the split of `X ∖ r`
/// given by `face`.
pub fn p_face(x: &CharacterList, r: &RationalSubspace, face: &FaceSelector) -> Result<GammaFunction> {
    let (a, b) = face.split(x, &r.complement(x))?;
    signed_heaviside(x, &a, &b)
}

fn signed_heaviside(x: &CharacterList, a: &[usize], b: &[usize]) -> Result<GammaFunction> {
    let g = &x.group;
    let mut gens: Vec<GroupElement> = a.iter().map(|&i| x.elements[i].clone()).collect();
    gens.extend(b.iter().map(|&i| g.neg(&x.elements[i])));
    let shift = g.sum(b.iter().map(|&i| &x.elements[i]));
    let sign = if b.len().is_multiple_of(2) { 1 } else { -1 };
    let h = heaviside(g, &gens)?;
    let apex = g.neg(&shift);
    let gg = g.clone();
    Ok(GammaFunction::new(
        g.clone(),
        Support::PointedCone { apex, generators: gens },
        move |y| Ok(sign * h.value(&gg.add(y, &shift))?),
    ))
}

/// The split of `(X ∩ t) ∖ r` by the orientation of `r ⊂ t`, and the
/// integer orientation functional.
fn step_split(
    x: &CharacterList,
    r: &RationalSubspace,
    t: &RationalSubspace,
) -> Result<(Vec<usize>, Vec<usize>, Vec<i64>)> {
    let cross: Vec<usize> =
        t.member_indices.iter().copied().filter(|i| !r.member_indices.contains(i)).collect();
    if cross.is_empty() {
        return Err(Error::EmptyStep);
    }
    let phi = integer_functional(&r.orientation_functional(t));
    let face = FaceSelector::new(phi.iter().map(|&c| rat_int(c)).collect());
    let (a, b) = face.split(x, &cross)?;
    Ok((a, b, phi))
}

/// `Q^t_r = P^{t+}_r − P^{t−}_r`, built from Heaviside functions.
pub fn q_step(x: &CharacterList, r: &RationalSubspace, t: &RationalSubspace) -> Result<GammaFunction> {
    let (a, b, _) = step_split(x, r, t)?;
    let plus = signed_heaviside(x, &a, &b)?;
    let minus = signed_heaviside(x, &b, &a)?;
    let support = match (plus.support(), minus.support()) {
        (
            Support::PointedCone { apex: a1, generators: g1 },
            Support::PointedCone { apex: a2, generators: g2 },
        ) => Support::ConePair { first: (a1.clone(), g1.clone()), second: (a2.clone(), g2.clone()) },
        _ => Support::All,
    };
    let p = plus.clone();
    let m = minus.clone();
    Ok(GammaFunction::new(x.group.clone(), support, move |y| Ok(p.value(y)? - m.value(y)?)))
}

/// `Q_φ = Q₁ * … * Q_s` for the flag `0 ⊂ r₁ ⊂ … ⊂ r_s` (the zero space is
/// implicit; `flag[i]` has dimension `i + 1`).
pub fn q_flag(x: &CharacterList, flag: &[RationalSubspace]) -> Result<GammaFunction> {
    let g = x.group.clone();
    let mut f = GammaFunction::delta(&g, &g.zero());
    let mut prev = RationalSubspace::zero(x);
    for t in flag {
        if t.dim != prev.dim + 1 || !t.contains_subspace(&prev) {
            return Err(Error::InvalidInput("flag dimensions must increase by one".into()));
        }
        let (a, b, phi) = step_split(x, &prev, t)?;
        let plus = ConeKernel::from_split(x, &a, &b, &phi)?;
        let neg_phi: Vec<i64> = phi.iter().map(|c| -c).collect();
        let minus = ConeKernel::from_split(x, &b, &a, &neg_phi)?;
        let inner = f;
        let t2 = t.clone();
        let gg = g.clone();
        let support = Support::TranslatesOfSubspace {
            normals: t.normals.clone(),
            labels: vec![vec![0; t.normals.len()]],
        };
        f = GammaFunction::new(g.clone(), support, move |y| {
            if !t2.contains(&y.free) {
                return Ok(0);
            }
            Ok(plus.convolve(&gg, y, &inner, &[0])? - minus.convolve(&gg, y, &inner, &[0])?)
        });
        prev = t.clone();
    }
    Ok(f)
}

/// Whether two functions agree at every point of a window.
pub fn agree_on(f: &GammaFunction, h: &GammaFunction, window: &Window) -> Result<bool> {
    for p in window.points(f.group()) {
        if f.value(&p)? != h.value(&p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `f` vanishes at every point of a window.
pub fn vanishes_on(f: &GammaFunction, window: &Window) -> Result<bool> {
    for p in window.points(f.group()) {
        if !f.value(&p)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z1() -> GroupPresentation {
        GroupPresentation::free(1)
    }

    fn n(v: i64) -> GroupElement {
        GroupElement::new(vec![v], vec![])
    }

    fn table(f: &GammaFunction, r: std::ops::RangeInclusive<i64>) -> Vec<i64> {
        r.map(|k| f.value(&n(k)).unwrap()).collect()
    }

    #[test]
    fn heaviside_examples() {
        let h = heaviside(&z1(), &[n(1)]).unwrap();
        assert_eq!(h.value(&n(5)).unwrap(), 1);
        assert_eq!(h.value(&n(-1)).unwrap(), 0);
        let h = heaviside(&z1(), &[n(1), n(1)]).unwrap();
        assert_eq!(table(&h, 0..=4), vec![1, 2, 3, 4, 5]);
        let g2 = GroupPresentation::free(2);
        let e = |a, b| GroupElement::new(vec![a, b], vec![]);
        let h = heaviside(&g2, &[e(1, 0), e(0, 1), e(1, 1)]).unwrap();
        assert_eq!(h.value(&e(2, 1)).unwrap(), 2);
        assert_eq!(heaviside(&z1(), &[n(1), n(-1)]).unwrap_err(), Error::UnpointedCone);
    }

    #[test]
    fn nabla_examples() {
        let h = heaviside(&z1(), &[n(1)]).unwrap();
        let d = h.nabla(&[n(1)]);
        assert_eq!(table(&d, -3..=3), vec![0, 0, 0, 1, 0, 0, 0]);
        assert_eq!(table(&h.nabla(&[]), -2..=2), table(&h, -2..=2));
        let lin = GammaFunction::new(z1(), Support::All, |x| Ok(x.free[0] + 1));
        assert!(vanishes_on(&lin.nabla(&[n(1), n(1)]), &Window::cube(1, 6)).unwrap());
        let shifted = lin.translate(&n(2));
        assert_eq!(shifted.value(&n(5)).unwrap(), 4);
    }

    #[test]
    fn p_face_examples() {
        let x = CharacterList::free(1, &[vec![1], vec![1]]);
        let r = RationalSubspace::zero(&x);
        let pos = p_face(&x, &r, &FaceSelector::new(vec![rat_int(1)])).unwrap();
        assert_eq!(table(&pos, -2..=3), vec![0, 0, 1, 2, 3, 4]);
        let neg = p_face(&x, &r, &FaceSelector::new(vec![rat_int(-1)])).unwrap();
        assert_eq!(table(&neg, -4..=0), vec![3, 2, 1, 0, 0]);
        assert_eq!(
            p_face(&x, &r, &FaceSelector::new(vec![rat_int(0)])).unwrap_err(),
            Error::FaceVanishes
        );
    }

    #[test]
    fn q_step_examples() {
        let x = CharacterList::free(1, &[vec![1], vec![1]]);
        let r = RationalSubspace::zero(&x);
        let t = RationalSubspace::whole(&x);
        let q = q_step(&x, &r, &t).unwrap();
        assert_eq!(table(&q, -4..=3), (-4..=3).map(|k| k + 1).collect::<Vec<_>>());
        let flipped = q_step(&x, &r, &t.clone().with_orientation(-1)).unwrap();
        assert_eq!(table(&flipped, -4..=3), (-4..=3).map(|k| -k - 1).collect::<Vec<_>>());
        let x1 = CharacterList::free(1, &[vec![1]]);
        let q = q_step(&x1, &RationalSubspace::zero(&x1), &RationalSubspace::whole(&x1)).unwrap();
        assert_eq!(table(&q, -3..=3), vec![1; 7]);
        assert_eq!(q_step(&x, &t, &t).unwrap_err(), Error::EmptyStep);
    }

    #[test]
    fn q_flag_examples() {
        let x = CharacterList::free(1, &[vec![1], vec![1]]);
        let q = q_flag(&x, &[RationalSubspace::whole(&x)]).unwrap();
        assert_eq!(table(&q, -4..=3), (-4..=3).map(|k| k + 1).collect::<Vec<_>>());
        let x = CharacterList::free(2, &[vec![1, 0], vec![0, 1]]);
        let r1 = RationalSubspace::span(&x, &[vec![1, 0]]);
        let q = q_flag(&x, &[r1, RationalSubspace::whole(&x)]).unwrap();
        for p in Window::cube(2, 3).points(&x.group) {
            assert_eq!(q.value(&p).unwrap(), 1);
        }
    }

    #[test]
    fn period_two_flag_element() {
        let x = CharacterList::free(1, &[vec![2]]);
        let q = q_flag(&x, &[RationalSubspace::whole(&x)]).unwrap();
        assert_eq!(table(&q, -3..=3), vec![0, 1, 0, 1, 0, 1, 0]);
    }

    #[test]
    fn default_face_vanishes_on_subspace() {
        let x = CharacterList::free(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        let r = RationalSubspace::span(&x, &[vec![1, 1]]);
        let f = FaceSelector::default_for(&x, &r).unwrap();
        let d: Rational = f.functional.iter().sum();
        assert!(d.is_zero());
        assert!(f.split(&x, &r.complement(&x)).is_ok());
    }

    #[test]
    fn support_descriptor_admits() {
        let h = heaviside(&z1(), &[n(1)]).unwrap();
        assert!(h.support().admits(&n(3)));
        assert!(!h.support().admits(&n(-3)));
    }
}
