//! The space `DM(X)`: membership, the flag basis, window ranks, the
//! deletion–restriction sequence, the polynomial space `D(X)` and the local
//! decomposition over `P(X)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::abelian::{self, GroupElement};
use crate::arith::{rat_int, Field, Rational};
use crate::chars::{self, CharacterList, RationalSubspace, TorsionPoint};
use crate::cyclotomic::{Cyclo, CycloField};
use crate::error::{Error, Result};
use crate::linalg::{self, Solution};
use crate::poly::{monomials, Poly};
use crate::series::{self, GammaFunction};
use crate::window::Window;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// A translate `τ_rep Q_φ` of a flag element built on the sublist `X_b`.
    Flag { basis: Vec<usize>, sublist: Vec<usize>, flag: Vec<Vec<Vec<i64>>>, rep: GroupElement },
    Fitted { note: String },
    /// `i_a(f)` for a basis element of the quotient list.
    Lifted { a: usize, source: Box<Provenance> },
    /// `∇_a f`.
    Difference { a: usize, source: Box<Provenance> },
}

#[derive(Clone, Debug)]
pub struct DMElement {
    pub function: GammaFunction,
    pub provenance: Provenance,
}

impl DMElement {
    pub fn value(&self, g: &GroupElement) -> Result<i64> {
        self.function.value(g)
    }

    pub fn to_json(&self, window: &Window) -> Result<serde_json::Value> {
        Ok(serde_json::json!({
            "provenance": self.provenance,
            "table": self.function.tabulate(window)?.to_json(),
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub cocircuit: Vec<usize>,
    pub point: GroupElement,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    /// Number of (cocircuit, point) pairs checked.
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<Violation>,
}

/// The stencil of `∇_Y` for every cocircuit `Y` of `x`.
pub(crate) fn cocircuit_stencils(x: &CharacterList) -> Result<Vec<(Vec<usize>, Vec<(GroupElement, i64)>)>> {
    Ok(chars::cocircuits(x)?
        .into_iter()
        .map(|y| {
            let el: Vec<GroupElement> = y.iter().map(|&i| x.elements[i].clone()).collect();
            let st = series::difference_stencil(&x.group, &el);
            (y, st)
        })
        .collect())
}

pub(crate) fn stencil_fits(window: &Window, g: &GroupElement, stencil: &[(GroupElement, i64)]) -> bool {
    stencil.iter().all(|(off, _)| {
        g.free.iter().zip(&off.free).zip(window.lo.iter().zip(&window.hi)).all(|((a, b), (lo, hi))| {
            let v = a - b;
            *lo <= v && v <= *hi
        })
    })
}

pub(crate) fn apply_stencil(
    f: &GammaFunction,
    g: &GroupElement,
    stencil: &[(GroupElement, i64)],
) -> Result<i64> {
    let mut acc = 0;
    for (off, c) in stencil {
        acc += c * f.value(&f.group().sub(g, off))?;
    }
    Ok(acc)
}

/// Checks `∇_Y f = 0` at every window point where the stencil of the
/// cocircuit `Y` fits. For a list that does not span, `DM(X) = 0` and the
/// check is that `f` vanishes on the window.
pub fn is_member_dm(f: &GammaFunction, x: &CharacterList, window: &Window) -> Result<Membership> {
    window.validate(&x.group)?;
    let points = window.points(&x.group);
    if !x.spans() {
        for p in &points {
            let v = f.value(p)?;
            if v != 0 {
                let violation = Violation { cocircuit: Vec::new(), point: p.clone(), value: v };
                return Ok(Membership { member: false, checked: points.len(), violation: Some(violation) });
            }
        }
        return Ok(Membership { member: true, checked: points.len(), violation: None });
    }
    let need = chars::delta(x) as usize * x.group.torsion_size();
    let mut checked = 0;
    for (y, st) in cocircuit_stencils(x)? {
        let fitting: Vec<&GroupElement> = points.iter().filter(|p| stencil_fits(window, p, &st)).collect();
        if fitting.len() < need {
            return Err(Error::WindowTooSmall(format!(
                "the stencil of cocircuit {y:?} fits at {} points, fewer than {need}",
                fitting.len()
            )));
        }
        for p in fitting {
            checked += 1;
            let v = apply_stencil(f, p, &st)?;
            if v != 0 {
                let violation = Violation { cocircuit: y, point: p.clone(), value: v };
                return Ok(Membership { member: false, checked, violation: Some(violation) });
            }
        }
    }
    Ok(Membership { member: true, checked, violation: None })
}

/// The sublist `X_b`: the elements of `b` together with every `c ∉ b`
/// whose image is nonzero modulo the basis elements preceding it,
/// `c̄ ∉ ⟨b_j : pos(b_j) < pos(c)⟩`. This is the list produced by peeling off
/// least elements (deleting or quotienting), so that each flag element is
/// `∇_a`- or `i_a`-compatible with the smaller lists.
pub fn flag_sublist(x: &CharacterList, basis: &[usize]) -> Vec<usize> {
    (0..x.len())
        .filter(|&c| {
            if basis.contains(&c) {
                return true;
            }
            let earlier: Vec<Vec<i64>> =
                basis.iter().filter(|&&j| j < c).map(|&j| x.bar(j).to_vec()).collect();
            !RationalSubspace::span(x, &earlier).contains(x.bar(c))
        })
        .collect()
}

/// The flag element `Q^{X_b}_{φ_b}` of a basis, on the sublist `X_b`, with
/// the flag recorded by lattice bases.
pub fn flag_element(x: &CharacterList, basis: &[usize]) -> Result<(Vec<usize>, Vec<Vec<Vec<i64>>>, GammaFunction)> {
    let xb = flag_sublist(x, basis);
    let sub = x.sublist(&xb);
    let mut flag = Vec::new();
    for i in 1..=basis.len() {
        let gens: Vec<Vec<i64>> = basis[..i].iter().map(|&j| x.bar(j).to_vec()).collect();
        flag.push(RationalSubspace::span(&sub, &gens));
    }
    let q = series::q_flag(&sub, &flag)?;
    Ok((xb, flag.iter().map(|r| r.lattice_basis.clone()).collect(), q))
}

/// The flag basis: for each basis `b` (in lexicographic order of
/// positions) the element `Q^{X_b}_{φ_b}` and its translates by
/// representatives of `Γ / ℤb`. As a `ℤ`-basis it has `δ(X)·|Γ_t|`
/// elements.
pub fn dm_basis(x: &CharacterList) -> Result<Vec<DMElement>> {
    if !x.spans() {
        return Err(Error::DegenerateList);
    }
    let mut out = Vec::new();
    for b in chars::bases(x) {
        let (xb, flag, q) = flag_element(x, &b.indices)?;
        let gens: Vec<GroupElement> = b.indices.iter().map(|&i| x.elements[i].clone()).collect();
        for rep in abelian::coset_reps(&x.group, &gens)? {
            let function = if rep == x.group.zero() { q.clone() } else { q.translate(&rep) };
            let provenance = Provenance::Flag {
                basis: b.indices.clone(),
                sublist: xb.clone(),
                flag: flag.clone(),
                rep,
            };
            out.push(DMElement { function, provenance });
        }
    }
    Ok(out)
}

/// `dm_basis`, with `DM(X) = 0` for a list that does not span.
pub fn dm_basis_or_empty(x: &CharacterList) -> Result<Vec<DMElement>> {
    match dm_basis(x) {
        Err(Error::DegenerateList) => Ok(Vec::new()),
        r => r,
    }
}

/// Incremental row echelon form over `ℚ` with sparse rows.
#[derive(Default)]
struct SparseEchelon {
    pivots: HashMap<usize, BTreeMap<usize, Rational>>,
}

impl SparseEchelon {
    fn insert(&mut self, mut row: BTreeMap<usize, Rational>) {
        row.retain(|_, v| !Zero::is_zero(v));
        while let Some((&c, v)) = row.iter().next() {
            match self.pivots.get(&c) {
                Some(p) => {
                    let k = v.clone();
                    for (j, pv) in p {
                        let e = row.entry(*j).or_insert_with(Rational::zero);
                        *e -= &k * pv;
                        if Zero::is_zero(e) {
                            row.remove(j);
                        }
                    }
                }
                None => {
                    let lead = v.clone();
                    for val in row.values_mut() {
                        *val /= &lead;
                    }
                    self.pivots.insert(c, row);
                    return;
                }
            }
        }
    }
}

/// Dimension of the restriction to `core` of the functions on `outer`
/// satisfying every cocircuit equation wherever its stencil fits in `outer`.
pub fn window_projection_rank(x: &CharacterList, core: &Window, outer: &Window) -> Result<usize> {
    let pts = outer.points(&x.group);
    let (inner, rim): (Vec<_>, Vec<_>) = pts.iter().cloned().partition(|p| core.contains(p));
    let mut col: HashMap<GroupElement, usize> = HashMap::new();
    for p in rim.iter().chain(&inner) {
        let n = col.len();
        col.insert(p.clone(), n);
    }
    let first_core = rim.len();
    let mut ech = SparseEchelon::default();
    for (_, st) in cocircuit_stencils(x)? {
        for p in &pts {
            if !stencil_fits(outer, p, &st) {
                continue;
            }
            let mut row = BTreeMap::new();
            for (off, c) in &st {
                let q = x.group.sub(p, off);
                *row.entry(col[&q]).or_insert_with(Rational::zero) += rat_int(*c);
            }
            ech.insert(row);
        }
    }
    let core_pivots = ech.pivots.keys().filter(|&&c| c >= first_core).count();
    Ok(inner.len() - core_pivots)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankReport {
    /// Rank over `ℤ[Γ_t]`.
    pub rank: u64,
    /// Rank over `ℤ`.
    pub z_rank: usize,
    pub core: Option<Window>,
    pub windows: Vec<Window>,
}

/// The rank of `DM(X)` read off from window solutions: the space of
/// solutions on two nested windows is restricted to a core box around the
/// zonotope points; both must give the same dimension. `margin` overrides
/// the inner window's margin around the core.
pub fn dm_rank(x: &CharacterList, margin: Option<i64>) -> Result<RankReport> {
    if !x.spans() {
        return Ok(RankReport { rank: 0, z_rank: 0, core: None, windows: Vec::new() });
    }
    let u = chars::generic_u(x, 0)?;
    let (_, pts) = chars::zonotope_points(x, &u)?;
    let core = Window::bounding(x.rank(), &pts, 0);
    let norms: Vec<i64> =
        x.bars().iter().map(|b| b.iter().map(|c| c.abs()).max().unwrap_or(0)).collect();
    let m1 = margin.unwrap_or_else(|| norms.iter().sum());
    let m2 = m1 + norms.iter().max().copied().unwrap_or(0) + 1;
    let w1 = core.grow(m1);
    let w2 = core.grow(m2);
    let r1 = window_projection_rank(x, &core, &w1)?;
    let r2 = window_projection_rank(x, &core, &w2)?;
    if r1 != r2 {
        return Err(Error::WindowTooSmall(format!(
            "window ranks {r1} and {r2} disagree on margins {m1} and {m2}"
        )));
    }
    let t = x.group.torsion_size();
    Ok(RankReport { rank: (r1 / t) as u64, z_rank: r1, core: Some(core), windows: vec![w1, w2] })
}

fn values_matrix(fs: &[GammaFunction], pts: &[GroupElement]) -> Result<Vec<Vec<Rational>>> {
    pts.iter().map(|p| fs.iter().map(|f| f.value(p).map(rat_int)).collect()).collect()
}

/// Rank over `ℚ` of the matrix of values of `fs` at `pts`.
pub fn value_rank(fs: &[GammaFunction], pts: &[GroupElement]) -> Result<usize> {
    Ok(linalg::rank(&values_matrix(fs, pts)?, fs.len()))
}

/// Determinant of the square matrix of values of `fs` at `pts`.
pub fn value_det(fs: &[GammaFunction], pts: &[GroupElement]) -> Result<Rational> {
    if fs.len() != pts.len() {
        return Err(Error::InvalidInput("value matrix is not square".into()));
    }
    Ok(linalg::det(&values_matrix(fs, pts)?, &Rational::one()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactSequenceReport {
    pub a: usize,
    pub z_rank_x: usize,
    pub z_rank_deleted: usize,
    pub z_rank_quotient: usize,
    pub rank_identity: bool,
    /// Every lifted basis element of the quotient list lies in `DM(X)`.
    pub lifts_in_dm: bool,
    /// `∇_a ∘ i_a` vanishes on the window.
    pub composite_zero: bool,
    /// Every `∇_a` image of a basis element of `DM(X)` lies in `DM(X∖a)`.
    pub images_in_dm: bool,
    /// Rank of the `∇_a` images, measured on the zonotope points of `X∖a`.
    pub image_rank: usize,
    /// Dimension of the kernel of `∇_a` on `DM(X)`.
    pub kernel_dim: usize,
    pub exact: bool,
    pub window: Window,
}

/// Checks `0 → DM(Z̃) → DM(X) → DM(Z) → 0` for `Z = X∖a` and
/// `Z̃` the image of `Z` in `Γ/ℤa`, on the given window.
pub fn deletion_restriction(x: &CharacterList, a: usize, window: Option<&Window>) -> Result<ExactSequenceReport> {
    if a >= x.len() {
        return Err(Error::InvalidInput(format!("index {a} out of range")));
    }
    let ael = x.elements[a].clone();
    let q = abelian::quotient_by_element(&x.group, &ael)?;
    let z = x.without(a);
    let ztilde = CharacterList::new(
        q.target.clone(),
        z.elements.iter().map(|e| q.apply(e)).collect(),
    )?;
    let window = window.cloned().unwrap_or_else(|| Window::default_for(x));
    let zx = dm_rank(x, None)?.z_rank;
    let zz = dm_rank(&z, None)?.z_rank;
    let zt = dm_rank(&ztilde, None)?.z_rank;

    let mut lifts_in_dm = true;
    let mut composite_zero = true;
    for e in dm_basis_or_empty(&ztilde)? {
        let f = e.function.clone();
        let q2 = q.clone();
        let lifted = GammaFunction::new(x.group.clone(), series::Support::All, move |g| f.value(&q2.apply(g)));
        lifts_in_dm &= is_member_dm(&lifted, x, &window)?.member;
        composite_zero &= series::vanishes_on(&lifted.nabla(std::slice::from_ref(&ael)), &window)?;
    }

    let basis = dm_basis_or_empty(x)?;
    let images: Vec<GammaFunction> =
        basis.iter().map(|e| e.function.nabla(std::slice::from_ref(&ael))).collect();
    let mut images_in_dm = true;
    for f in &images {
        images_in_dm &= is_member_dm(f, &z, &window)?.member;
    }
    let image_rank = if z.spans() {
        let (_, pts) = chars::zonotope_points(&z, &chars::generic_u(&z, 0)?)?;
        value_rank(&images, &pts)?
    } else {
        0
    };
    let kernel_dim = basis.len() - image_rank;
    let rank_identity = zx == zz + zt;
    let exact = rank_identity
        && lifts_in_dm
        && composite_zero
        && images_in_dm
        && image_rank == zz
        && kernel_dim == zt
        && basis.len() == zx;
    Ok(ExactSequenceReport {
        a,
        z_rank_x: zx,
        z_rank_deleted: zz,
        z_rank_quotient: zt,
        rank_identity,
        lifts_in_dm,
        composite_zero,
        images_in_dm,
        image_rank,
        kernel_dim,
        exact,
        window,
    })
}

/// A basis of `D(X) = {q : ∂_Y q = 0 for every cocircuit Y}`, found by
/// linear algebra on coefficients of degree at most `#X_inf − s`.
pub fn d_space_basis(x: &CharacterList) -> Result<Vec<Poly<Rational>>> {
    let cocs = chars::cocircuits(x)?;
    let s = x.rank();
    let max_deg = (x.infinite_indices().len() - s) as u32;
    let monos = monomials(s, max_deg);
    let images: Vec<Vec<Poly<Rational>>> = monos
        .iter()
        .map(|m| {
            cocs.iter()
                .map(|y| {
                    y.iter().fold(Poly::monomial(m.clone(), Rational::one()), |p, &i| {
                        p.directional(&x.elements[i].bar_rational())
                    })
                })
                .collect()
        })
        .collect();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (k, _) in cocs.iter().enumerate() {
        let mut by_mono: BTreeMap<Vec<u32>, Vec<Rational>> = BTreeMap::new();
        for (j, img) in images.iter().enumerate() {
            for (e, c) in img[k].terms() {
                by_mono.entry(e.clone()).or_insert_with(|| vec![Rational::zero(); monos.len()])[j] = c.clone();
            }
        }
        rows.extend(by_mono.into_values());
    }
    let null = linalg::nullspace(&rows, monos.len(), &Rational::zero());
    Ok(null
        .into_iter()
        .map(|v| {
            let mut p = Poly::zero(s);
            for (m, c) in monos.iter().zip(v) {
                p = p.add(&Poly::monomial(m.clone(), c));
            }
            p
        })
        .collect())
}

/// `f(γ) = Σ_p p^{−γ} q_p(γ̄)` with `q_p ∈ D(X_p)` over `ℚ(ζ_N)`.
#[derive(Clone, Debug)]
pub struct QuasiPolynomial {
    pub field: Arc<CycloField>,
    pub terms: Vec<(TorsionPoint, Poly<Cyclo>)>,
}

impl QuasiPolynomial {
    fn character(&self, p: &TorsionPoint, g: &GroupElement) -> Cyclo {
        let k = p.eval(g) * Rational::from_integer(self.field.order().into());
        self.field.zeta_pow(-crate::arith::to_i64(&k.to_integer()))
    }

    pub fn eval(&self, g: &GroupElement) -> Cyclo {
        let v = g.bar_rational();
        self.terms.iter().fold(self.field.zero(), |acc, (p, q)| {
            acc.add(&self.character(p, g).mul(&q.eval(&v, &self.field.zero())))
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "order": self.field.order(),
            "terms": self.terms.iter().map(|(p, q)| serde_json::json!({
                "point": p.to_json(),
                "q": q.terms().map(|(e, c)| serde_json::json!({"exponents": e, "coeff": c.to_json()})).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Writes `f ∈ DM(X)` as `Σ_p p^{−γ} q_p(γ̄)` by a square exact solve at the
/// zonotope points, then verifies the reassembly on `window` and the
/// differential equations of `D(X_p)` for each `q_p`.
pub fn local_decomposition(f: &GammaFunction, x: &CharacterList, window: &Window) -> Result<QuasiPolynomial> {
    let m = is_member_dm(f, x, window)?;
    if !m.member {
        return Err(Error::NotInDM(format!("{:?}", m.violation)));
    }
    let points = chars::special_points(x);
    let order = points.iter().fold(1u64, |l, p| num_integer::lcm(l, p.order()));
    let field = CycloField::new(order);
    let qp = QuasiPolynomial { field: field.clone(), terms: Vec::new() };
    let mut unknowns: Vec<(usize, Poly<Rational>)> = Vec::new();
    let mut subs = Vec::new();
    for (k, p) in points.iter().enumerate() {
        let (_, xp) = chars::fixed_sublist(x, p);
        for b in d_space_basis(&xp)? {
            unknowns.push((k, b));
        }
        subs.push(xp);
    }
    let (_, zpts) = chars::zonotope_points(x, &chars::generic_u(x, 0)?)?;
    if zpts.len() != unknowns.len() {
        return Err(Error::SolveFailed(format!(
            "{} unknowns for {} interpolation points",
            unknowns.len(),
            zpts.len()
        )));
    }
    let zero = field.zero();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for g in &zpts {
        let v = g.bar_rational();
        rows.push(
            unknowns
                .iter()
                .map(|(k, b)| qp.character(&points[*k], g).mul(&zero.embed(&b.eval(&v, &Rational::zero()))))
                .collect::<Vec<Cyclo>>(),
        );
        rhs.push(field.from_rational(rat_int(f.value(g)?)));
    }
    let coeffs = match linalg::solve(&rows, &rhs, unknowns.len()) {
        Solution::Unique(c) => c,
        other => return Err(Error::SolveFailed(format!("interpolation system is not uniquely solvable: {}", match other {
            Solution::Inconsistent => "inconsistent",
            _ => "underdetermined",
        }))),
    };
    let mut terms = Vec::new();
    for (k, p) in points.iter().enumerate() {
        let mut q: Poly<Cyclo> = Poly::zero(x.rank());
        for ((kk, b), c) in unknowns.iter().zip(&coeffs) {
            if *kk == k {
                q = q.add(&b.map_coeffs(|r| zero.embed(r)).scale(c));
            }
        }
        if !q.is_zero() {
            for y in chars::cocircuits(&subs[k])? {
                let d = y.iter().fold(q.clone(), |acc, &i| acc.directional(&subs[k].elements[i].bar_rational()));
                if !d.is_zero() {
                    return Err(Error::SolveFailed(format!("component at {:?} fails a differential equation", p)));
                }
            }
            terms.push((p.clone(), q));
        }
    }
    let out = QuasiPolynomial { field, terms };
    for g in window.points(&x.group) {
        if out.eval(&g) != out.field.from_rational(rat_int(f.value(&g)?)) {
            return Err(Error::SolveFailed(format!("reassembly differs at {g:?}")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::GroupPresentation;
    use crate::series::Support;

    fn rank6() -> CharacterList {
        let g = GroupPresentation::new(1, vec![2]).unwrap();
        let el = vec![GroupElement::new(vec![1], vec![1]), GroupElement::new(vec![2], vec![1])];
        CharacterList::new(g, el).unwrap()
    }

    fn func(group: &GroupPresentation, f: impl Fn(&[i64]) -> i64 + Send + Sync + 'static) -> GammaFunction {
        GammaFunction::new(group.clone(), Support::All, move |g| Ok(f(&g.free)))
    }

    #[test]
    fn membership_examples() {
        let x = CharacterList::free(1, &[vec![1], vec![1], vec![1]]);
        let f = func(&x.group, |v| (v[0] + 1) * (v[0] + 2) / 2);
        assert!(is_member_dm(&f, &x, &Window::default_for(&x)).unwrap().member);
        let x = CharacterList::free(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        let f = func(&x.group, |v| v[0]);
        assert!(is_member_dm(&f, &x, &Window::default_for(&x)).unwrap().member);
        let x = CharacterList::free(1, &[vec![1], vec![1]]);
        let h = series::heaviside(&x.group, &[x.elements[0].clone()]).unwrap();
        let m = is_member_dm(&h, &x, &Window::default_for(&x)).unwrap();
        assert!(!m.member);
        assert!(m.violation.is_some());
        assert!(matches!(is_member_dm(&h, &x, &Window::cube(1, 1)), Err(Error::WindowTooSmall(_))));
    }

    #[test]
    fn basis_of_two_ones() {
        let x = CharacterList::free(1, &[vec![1], vec![1]]);
        let b = dm_basis(&x).unwrap();
        assert_eq!(b.len(), 2);
        for k in -4..=4 {
            let g = GroupElement::new(vec![k], vec![]);
            assert_eq!(b[0].value(&g).unwrap(), 1);
            assert_eq!(b[1].value(&g).unwrap(), k + 1);
        }
    }

    #[test]
    fn basis_of_two() {
        let x = CharacterList::free(1, &[vec![2]]);
        let b = dm_basis(&x).unwrap();
        assert_eq!(b.len(), 2);
        let vals = |e: &DMElement| (-2..=2).map(|k| e.value(&GroupElement::new(vec![k], vec![])).unwrap()).collect::<Vec<_>>();
        assert_eq!(vals(&b[0]), vec![1, 0, 1, 0, 1]);
        assert_eq!(vals(&b[1]), vec![0, 1, 0, 1, 0]);
    }

    #[test]
    fn rank_six_example() {
        let x = rank6();
        let b = dm_basis(&x).unwrap();
        assert_eq!(b.len(), 6);
        let w = Window::default_for(&x);
        for e in &b {
            assert!(is_member_dm(&e.function, &x, &w).unwrap().member);
        }
        let r = dm_rank(&x, None).unwrap();
        assert_eq!((r.rank, r.z_rank), (3, 6));
    }

    #[test]
    fn ranks() {
        let x = CharacterList::free(1, &[vec![1], vec![1]]);
        assert_eq!(dm_rank(&x, None).unwrap().rank, 2);
        let x = CharacterList::free(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(dm_rank(&x, None).unwrap().rank, 3);
        let x = CharacterList::free(2, &[vec![1, 0], vec![2, 0]]);
        assert_eq!(dm_rank(&x, None).unwrap().rank, 0);
        assert_eq!(dm_basis(&x).unwrap_err(), Error::DegenerateList);
    }

    #[test]
    fn basis_values_unimodular_on_zonotope() {
        let x = CharacterList::free(2, &[vec![1, 0], vec![0, 1], vec![1, 1], vec![1, -1]]);
        let b = dm_basis(&x).unwrap();
        assert_eq!(b.len() as u64, chars::delta(&x));
        let (_, pts) = chars::zonotope_points(&x, &chars::generic_u(&x, 3).unwrap()).unwrap();
        let fs: Vec<GammaFunction> = b.iter().map(|e| e.function.clone()).collect();
        let d = value_det(&fs, &pts).unwrap();
        assert!(d == rat_int(1) || d == rat_int(-1));
    }

    #[test]
    fn exact_sequence_examples() {
        let x = CharacterList::free(1, &[vec![1], vec![1]]);
        let r = deletion_restriction(&x, 0, None).unwrap();
        assert_eq!((r.z_rank_x, r.z_rank_deleted, r.z_rank_quotient), (2, 1, 1));
        assert!(r.exact);
        let x = CharacterList::free(2, &[vec![1, 0], vec![0, 1]]);
        let r = deletion_restriction(&x, 0, None).unwrap();
        assert_eq!((r.z_rank_x, r.z_rank_deleted, r.z_rank_quotient), (1, 0, 1));
        assert!(r.exact);
        let x = CharacterList::free(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        let r = deletion_restriction(&x, 2, None).unwrap();
        assert_eq!((r.z_rank_x, r.z_rank_deleted, r.z_rank_quotient), (3, 1, 2));
        assert!(r.exact);
    }

    #[test]
    fn d_space_examples() {
        let x = CharacterList::free(1, &[vec![1], vec![1]]);
        let d = d_space_basis(&x).unwrap();
        assert_eq!(d.len(), 2);
        let x = CharacterList::free(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        let d = d_space_basis(&x).unwrap();
        assert_eq!(d.len(), 3);
        assert!(d.iter().all(|p| p.degree().unwrap_or(0) <= 1));
        let x = CharacterList::free(1, &[vec![1]]);
        assert_eq!(d_space_basis(&x).unwrap().len(), 1);
    }

    #[test]
    fn local_decomposition_of_period_two() {
        let x = CharacterList::free(1, &[vec![2]]);
        let f = func(&x.group, |v| i64::from(v[0] % 2 == 0));
        let q = local_decomposition(&f, &x, &Window::default_for(&x)).unwrap();
        assert_eq!(q.terms.len(), 2);
        for (_, p) in &q.terms {
            let c: Vec<_> = p.terms().collect();
            assert_eq!(c.len(), 1);
            assert_eq!(c[0].1.to_rational(), Some(crate::arith::rat(1, 2)));
        }
        let zero = GammaFunction::zero(&x.group);
        assert!(local_decomposition(&zero, &x, &Window::default_for(&x)).unwrap().terms.is_empty());
    }

    #[test]
    fn local_decomposition_rank_six() {
        let x = rank6();
        let w = Window::default_for(&x);
        for e in dm_basis(&x).unwrap() {
            let q = local_decomposition(&e.function, &x, &w).unwrap();
            assert!(!q.terms.is_empty());
        }
    }
}
