//! The spaces `F(X)` and `F̃(X)`: membership certificates, the split
//! decomposition into `DM(X)` plus cone-convolved lower components, and the
//! face generators `P_X^F`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::abelian::{GroupElement, GroupPresentation};
use crate::arith::{format_rational, rat_int, Rational};
use crate::chars::{self, CharacterList, RationalSubspace};
use crate::dm::{self, DMElement};
use crate::error::{Error, Result};
use crate::fm::{self, Ineq};
use crate::linalg::{self, Solution};
use crate::series::{self, ConeKernel, FaceSelector, GammaFunction};
use crate::window::{Table, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `∇_{X∖r} f` supported on `Γ_r`.
    Strict,
    /// `∇_{X∖r} f` supported on finitely many translates of `Γ_r`.
    Translated,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Mode::Strict),
            "translated" => Ok(Mode::Translated),
            _ => Err(Error::InvalidInput(format!("unknown mode {s:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Translated => "translated",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubspaceCheck {
    pub subspace: Vec<Vec<i64>>,
    pub dim: usize,
    /// Labels `N γ̄` (rows of `N` = normals of `r`) of the translates of
    /// `Γ_r` met by the support of `∇_{X∖r} f`.
    pub translates: Vec<Vec<i64>>,
    pub nonzero: Vec<(GroupElement, i64)>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationCertificate {
    pub member: bool,
    pub mode: Mode,
    /// Translated-mode answers only describe the window.
    pub window_relative: bool,
    pub checks: Vec<SubspaceCheck>,
}

fn labels(r: &RationalSubspace, v: &[i64]) -> Vec<i64> {
    r.normals.iter().map(|n| n.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn proper_subspaces(x: &CharacterList) -> Vec<RationalSubspace> {
    chars::rational_subspaces(x)
        .into_iter()
        .filter(|(d, _)| *d < x.rank())
        .flat_map(|(_, v)| v)
        .collect()
}

/// Evaluates `∇_{X∖r} f` for every proper rational subspace `r` at the
/// window points where its stencil fits. Strict mode requires the support to
/// lie in `Γ_r`; translated mode requires the translates met to stay strictly
/// inside the range of labels seen on the window.
pub fn is_member_f(f: &GammaFunction, x: &CharacterList, window: &Window, mode: Mode) -> Result<FiltrationCertificate> {
    window.validate(&x.group)?;
    let points = window.points(&x.group);
    let mut checks = Vec::new();
    for r in proper_subspaces(x) {
        let ys: Vec<GroupElement> = r.complement(x).iter().map(|&i| x.elements[i].clone()).collect();
        let st = series::difference_stencil(&x.group, &ys);
        let fitting: Vec<&GroupElement> = points.iter().filter(|p| dm::stencil_fits(window, p, &st)).collect();
        if fitting.is_empty() {
            return Err(Error::WindowTooSmall(format!(
                "no window point fits the stencil of the complement of {:?}",
                r.lattice_basis
            )));
        }
        let mut nonzero = Vec::new();
        for p in &fitting {
            let v = dm::apply_stencil(f, p, &st)?;
            if v != 0 {
                nonzero.push(((*p).clone(), v));
            }
        }
        let translates: BTreeSet<Vec<i64>> = nonzero.iter().map(|(p, _)| labels(&r, &p.free)).collect();
        let ok = match mode {
            Mode::Strict => nonzero.iter().all(|(p, _)| r.contains(&p.free)),
            Mode::Translated => {
                let all: Vec<Vec<i64>> = fitting.iter().map(|p| labels(&r, &p.free)).collect();
                (0..r.normals.len()).all(|k| {
                    let lo = all.iter().map(|l| l[k]).min().unwrap_or(0);
                    let hi = all.iter().map(|l| l[k]).max().unwrap_or(0);
                    translates.iter().all(|l| lo < l[k] && l[k] < hi)
                })
            }
        };
        checks.push(SubspaceCheck {
            subspace: r.lattice_basis.clone(),
            dim: r.dim,
            translates: translates.into_iter().collect(),
            nonzero,
            ok,
        });
    }
    Ok(FiltrationCertificate {
        member: checks.iter().all(|c| c.ok),
        mode,
        window_relative: mode == Mode::Translated,
        checks,
    })
}

/// A lower component `g_r ∈ DM(X ∩ r)`, known on the part of `Γ_r` the
/// window determines, together with the face used to re-embed it.
#[derive(Clone, Debug)]
pub struct Component {
    pub subspace: RationalSubspace,
    pub face: FaceSelector,
    pub values: HashMap<GroupElement, i64>,
    kernel: ConeKernel,
}

impl Component {
    /// `(P^{F_r}_{X∖r} * g_r)(γ)`; `WindowTooSmall` when it needs values of
    /// `g_r` the window does not determine.
    pub fn embedded_value(&self, x: &CharacterList, g: &GroupElement) -> Result<i64> {
        let r = &self.subspace;
        let vals = &self.values;
        self.kernel.convolve_with(&x.group, g, &[0], &mut |y| {
            if !r.contains(&y.free) {
                return Ok(0);
            }
            vals.get(y).copied().ok_or_else(|| Error::WindowTooSmall(format!("component value at {y:?} undetermined")))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| *v == 0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut nonzero: Vec<(&GroupElement, &i64)> = self.values.iter().filter(|(_, v)| **v != 0).collect();
        nonzero.sort();
        serde_json::json!({
            "subspace": self.subspace.lattice_basis,
            "dim": self.subspace.dim,
            "face": self.face.functional.iter().map(format_rational).collect::<Vec<_>>(),
            "determined_points": self.values.len(),
            "values": nonzero,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundTrip {
    pub core: Window,
    pub points: usize,
    pub exact: bool,
    pub mismatch: Option<(GroupElement, i64, i64)>,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub group: GroupPresentation,
    pub components: Vec<Component>,
    pub dm_coords: Vec<i64>,
    pub dm_basis: Vec<DMElement>,
    pub window: Window,
    pub roundtrip: RoundTrip,
}

impl Decomposition {
    pub fn dm_value(&self, g: &GroupElement) -> Result<i64> {
        let mut acc = 0;
        for (c, e) in self.dm_coords.iter().zip(&self.dm_basis) {
            if *c != 0 {
                acc += c * e.value(g)?;
            }
        }
        Ok(acc)
    }

    /// `f(γ) = (DM part)(γ) + Σ_r (P^{F_r} * g_r)(γ)`.
    pub fn reassemble_at(&self, x: &CharacterList, g: &GroupElement) -> Result<i64> {
        let mut acc = self.dm_value(g)?;
        for c in &self.components {
            acc += c.embedded_value(x, g)?;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Result<serde_json::Value> {
        let mut remainder = std::collections::BTreeMap::new();
        for p in self.roundtrip.core.points(&self.group) {
            remainder.insert(p.clone(), self.dm_value(&p)?);
        }
        Ok(serde_json::json!({
            "components": self.components.iter().filter(|c| !c.is_zero()).map(|c| c.to_json()).collect::<Vec<_>>(),
            "dm_coords": self.dm_coords,
            "dm_remainder": Table { window: self.roundtrip.core.clone(), values: remainder }.to_json(),
            "roundtrip": self.roundtrip,
        }))
    }
}

fn face_for(x: &CharacterList, r: &RationalSubspace, faces: &HashMap<Vec<Vec<i64>>, FaceSelector>) -> Result<FaceSelector> {
    match faces.get(&r.lattice_basis) {
        Some(f) => Ok(f.clone()),
        None => FaceSelector::default_for(x, r),
    }
}

fn is_too_small(e: &Error) -> bool {
    matches!(e, Error::WindowTooSmall(_))
}

/// Splits `f ∈ F(X)` as `f = f_DM + Σ_r P^{F_r}_{X∖r} * g_r`, descending
/// through the dimensions of `r`; then checks the reassembly on the largest
/// centred sub-box of the window on which it is fully determined.
pub fn f_decompose(
    f: &GammaFunction,
    x: &CharacterList,
    faces: &HashMap<Vec<Vec<i64>>, FaceSelector>,
    window: &Window,
) -> Result<Decomposition> {
    let cert = is_member_f(f, x, window, Mode::Strict)?;
    if let Some(bad) = cert.checks.iter().find(|c| !c.ok) {
        return Err(Error::NotInF(format!(
            "∇ over the complement of {:?} does not vanish off the subspace: {:?}",
            bad.subspace, bad.nonzero
        )));
    }
    let mut known: HashMap<GroupElement, i64> = HashMap::new();
    for p in window.points(&x.group) {
        known.insert(p.clone(), f.value(&p)?);
    }
    let by_dim = chars::rational_subspaces(x);
    let mut components = Vec::new();
    for i in 0..x.rank() {
        let mut level = Vec::new();
        for r in by_dim.get(&i).cloned().unwrap_or_default() {
            let ys: Vec<GroupElement> = r.complement(x).iter().map(|&k| x.elements[k].clone()).collect();
            let st = series::difference_stencil(&x.group, &ys);
            let mut values = HashMap::new();
            for y in known.keys().filter(|y| r.contains(&y.free)) {
                let mut acc = Some(0i64);
                for (off, c) in &st {
                    match known.get(&x.group.sub(y, off)) {
                        Some(v) => acc = acc.map(|a| a + c * v),
                        None => acc = None,
                    }
                }
                if let Some(v) = acc {
                    values.insert(y.clone(), v);
                }
            }
            check_component(x, &r, &values)?;
            let face = face_for(x, &r, faces)?;
            let (a, b) = face.split(x, &r.complement(x))?;
            let kernel = ConeKernel::from_split(x, &a, &b, &series::integer_functional(&face.functional))?;
            level.push(Component { subspace: r, face, values, kernel });
        }
        let mut next = HashMap::new();
        'points: for (g, v) in &known {
            let mut val = *v;
            for c in &level {
                match c.embedded_value(x, g) {
                    Ok(w) => val -= w,
                    Err(e) if is_too_small(&e) => continue 'points,
                    Err(e) => return Err(e),
                }
            }
            next.insert(g.clone(), val);
        }
        known = next;
        components.extend(level);
    }

    let basis = dm::dm_basis_or_empty(x)?;
    let dm_coords = fit_coordinates(x, &basis, &known)?;
    let mut decomposition = Decomposition {
        group: x.group.clone(),
        components,
        dm_coords,
        dm_basis: basis,
        window: window.clone(),
        roundtrip: RoundTrip { core: window.clone(), points: 0, exact: false, mismatch: None },
    };
    for (g, v) in &known {
        let w = decomposition.dm_value(g)?;
        if w != *v {
            return Err(Error::ComponentNotInDM(format!(
                "the remainder is not in DM(X): {v} ≠ {w} at {g:?}"
            )));
        }
    }
    decomposition.roundtrip = roundtrip(f, x, &decomposition)?;
    Ok(decomposition)
}

/// `g_r` must satisfy the cocircuit equations of `X ∩ r` inside `r`
/// wherever the window determines them.
fn check_component(x: &CharacterList, r: &RationalSubspace, values: &HashMap<GroupElement, i64>) -> Result<()> {
    for y in chars::cocircuits_within(x, r) {
        let el: Vec<GroupElement> = y.iter().map(|&i| x.elements[i].clone()).collect();
        let st = series::difference_stencil(&x.group, &el);
        for p in values.keys() {
            let mut acc = Some(0i64);
            for (off, c) in &st {
                acc = match (acc, values.get(&x.group.sub(p, off))) {
                    (Some(a), Some(v)) => Some(a + c * v),
                    _ => None,
                };
            }
            if let Some(v) = acc {
                if v != 0 {
                    return Err(Error::ComponentNotInDM(format!(
                        "component on {:?} violates cocircuit {y:?} at {p:?}",
                        r.lattice_basis
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Integer coordinates of a function known at the zonotope points in the
/// flag basis.
fn fit_coordinates(x: &CharacterList, basis: &[DMElement], known: &HashMap<GroupElement, i64>) -> Result<Vec<i64>> {
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let (_, pts) = chars::zonotope_points(x, &chars::generic_u(x, 0)?)?;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for p in &pts {
        let v = known.get(p).ok_or_else(|| {
            Error::WindowTooSmall(format!("remainder undetermined at the zonotope point {p:?}"))
        })?;
        rows.push(basis.iter().map(|e| e.value(p).map(rat_int)).collect::<Result<Vec<Rational>>>()?);
        rhs.push(rat_int(*v));
    }
    match linalg::solve(&rows, &rhs, basis.len()) {
        Solution::Unique(c) => c
            .iter()
            .map(|q| {
                if q.is_integer() {
                    Ok(crate::arith::to_i64(&q.to_integer()))
                } else {
                    Err(Error::ComponentNotInDM(format!("non-integral coordinate {}", format_rational(q))))
                }
            })
            .collect(),
        _ => Err(Error::SolveFailed("basis values on zonotope points are singular".into())),
    }
}

/// Compares the reassembly with `f` on the largest centred sub-box where
/// every term is determined (at least the stencil diameter inside).
pub fn roundtrip(f: &GammaFunction, x: &CharacterList, d: &Decomposition) -> Result<RoundTrip> {
    let diam: i64 = x.bars().iter().map(|b| b.iter().map(|c| c.abs()).max().unwrap_or(0)).sum();
    let mut k = diam;
    'shrink: while let Some(core) = d.window.shrink(k) {
        let mut vals = Vec::new();
        for p in core.points(&x.group) {
            match d.reassemble_at(x, &p) {
                Ok(v) => vals.push((p, v)),
                Err(e) if is_too_small(&e) => {
                    k += 1;
                    continue 'shrink;
                }
                Err(e) => return Err(e),
            }
        }
        let points = vals.len();
        for (p, v) in vals {
            let w = f.value(&p)?;
            if v != w {
                return Ok(RoundTrip { core, points, exact: false, mismatch: Some((p, w, v)) });
            }
        }
        return Ok(RoundTrip { core, points, exact: true, mismatch: None });
    }
    Err(Error::WindowTooSmall("no sub-box of the window determines the reassembly".into()))
}

/// One `P_X^F = p_face(X, 0, F)` per chamber of the central arrangement of
/// the hyperplanes `ā^⊥`, with the chamber's witness as face functional.
pub fn generators_f(x: &CharacterList) -> Result<Vec<(FaceSelector, GammaFunction)>> {
    let mut dirs: BTreeSet<Vec<i64>> = BTreeSet::new();
    for b in x.bars() {
        if b.iter().all(|c| *c == 0) {
            return Err(Error::ZeroBarElement);
        }
        let g = b.iter().fold(0i64, |g, c| num_integer::gcd(g, *c));
        let mut d: Vec<i64> = b.iter().map(|c| c / g).collect();
        if d.iter().find(|c| **c != 0).copied().unwrap_or(0) < 0 {
            d.iter_mut().for_each(|c| *c = -*c);
        }
        dirs.insert(d);
    }
    let dirs: Vec<Vec<i64>> = dirs.into_iter().collect();
    let zero = RationalSubspace::zero(x);
    let mut out = Vec::new();
    for mask in 0..(1u64 << dirs.len()) {
        let rows: Vec<Ineq> = dirs
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let sign = if mask >> k & 1 == 1 { -1 } else { 1 };
                Ineq::new(d.iter().map(|c| rat_int(sign * c)).collect(), Rational::from_integer(1.into()))
            })
            .collect();
        if let Some(u) = fm::feasible_point(&rows, x.rank()) {
            let face = FaceSelector::new(u);
            let p = series::p_face(x, &zero, &face)?;
            out.push((face, p));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Support;

    fn el(v: &[i64]) -> GroupElement {
        GroupElement::new(v.to_vec(), vec![])
    }

    #[test]
    fn membership_examples() {
        let x = CharacterList::free(1, &[vec![1], vec![1]]);
        let w = Window::default_for(&x);
        let hh = series::heaviside(&x.group, &[el(&[1]), el(&[1])]).unwrap();
        assert!(is_member_f(&hh, &x, &w, Mode::Strict).unwrap().member);
        let h = series::heaviside(&x.group, &[el(&[1])]).unwrap();
        assert!(!is_member_f(&h, &x, &w, Mode::Strict).unwrap().member);
        let t = is_member_f(&h, &x, &w, Mode::Translated).unwrap();
        assert!(t.member && t.window_relative);
        assert_eq!(t.checks[0].translates, vec![vec![0], vec![1]]);
        let lin = GammaFunction::new(x.group.clone(), Support::All, |g| Ok(g.free[0]));
        let c = is_member_f(&lin, &x, &w, Mode::Strict).unwrap();
        assert!(c.member && c.checks.iter().all(|k| k.nonzero.is_empty()));
    }

    #[test]
    fn decompose_line() {
        let x = CharacterList::free(1, &[vec![1], vec![1]]);
        let hh = series::heaviside(&x.group, &[el(&[1]), el(&[1])]).unwrap();
        let f = GammaFunction::combination(
            &x.group,
            vec![(1, GammaFunction::new(x.group.clone(), Support::All, |g| Ok(g.free[0]))), (1, hh)],
        );
        let w = Window::cube(1, 10);
        let d = f_decompose(&f, &x, &HashMap::new(), &w).unwrap();
        assert!(d.roundtrip.exact);
        let nz: Vec<&Component> = d.components.iter().filter(|c| !c.is_zero()).collect();
        assert_eq!(nz.len(), 1);
        assert_eq!(nz[0].values.get(&el(&[0])), Some(&1));
        for k in -3..=3 {
            assert_eq!(d.dm_value(&el(&[k])).unwrap(), k);
        }
    }

    #[test]
    fn decompose_quadrant() {
        let x = CharacterList::free(2, &[vec![1, 0], vec![0, 1]]);
        let f = series::heaviside(&x.group, &[el(&[1, 0]), el(&[0, 1])]).unwrap();
        let d = f_decompose(&f, &x, &HashMap::new(), &Window::cube(2, 5)).unwrap();
        assert!(d.roundtrip.exact);
        assert!(d.dm_coords.iter().all(|c| *c == 0));
        let nz: Vec<&Component> = d.components.iter().filter(|c| !c.is_zero()).collect();
        assert_eq!(nz.len(), 1);
        assert_eq!(nz[0].subspace.dim, 0);
    }

    #[test]
    fn decompose_rejects_non_members() {
        let x = CharacterList::free(1, &[vec![1], vec![1]]);
        let h = series::heaviside(&x.group, &[el(&[1])]).unwrap();
        assert!(matches!(f_decompose(&h, &x, &HashMap::new(), &Window::cube(1, 6)), Err(Error::NotInF(_))));
    }

    #[test]
    fn generator_counts() {
        let count = |v: &[Vec<i64>]| generators_f(&CharacterList::free(v[0].len(), v)).unwrap().len();
        assert_eq!(count(&[vec![1], vec![1]]), 2);
        assert_eq!(count(&[vec![1, 0], vec![0, 1], vec![1, 1]]), 6);
        assert_eq!(count(&[vec![1, 0], vec![0, 1]]), 4);
        let x = CharacterList::free(1, &[vec![0], vec![1]]);
        assert_eq!(generators_f(&x).unwrap_err(), Error::ZeroBarElement);
    }

    #[test]
    fn generators_are_strict_members() {
        let x = CharacterList::free(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        let w = Window::default_for(&x);
        for (_, p) in generators_f(&x).unwrap() {
            assert!(is_member_f(&p, &x, &w, Mode::Strict).unwrap().member);
        }
    }
}
