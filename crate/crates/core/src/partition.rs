//! Vector partition functions: exact counting and the quasi-polynomial
//! `P_X^c ∈ DM(X)` agreeing with `P_X` on a big cell.

use crate::abelian::GroupElement;
use crate::arith::{format_rational, rat_int, Rational};
use crate::chars::{self, BigCell, CharacterList};
use crate::dm::{self, DMElement, Membership, Provenance};
use crate::error::{Error, Result};
use crate::linalg::{self, Solution};
use crate::series::{self, GammaFunction};
use crate::window::Window;

/// `#{(m_a) ≥ 0 : Σ m_a a = λ}` by depth-first search, largest functional
/// value first.
pub fn partition_count(x: &CharacterList, lambda: &[i64]) -> Result<u64> {
    let u = chars::pointed_functional(x)?;
    if lambda.len() != x.rank() {
        return Err(Error::InvalidInput(format!("λ has length {} but s = {}", lambda.len(), x.rank())));
    }
    let phi = series::integer_functional(&u);
    let dot = |v: &[i64]| -> i64 { phi.iter().zip(v).map(|(a, b)| a * b).sum() };
    let mut vecs: Vec<(i64, Vec<i64>)> = x.bars().into_iter().map(|b| (dot(&b), b)).collect();
    vecs.sort_by(|a, b| b.0.cmp(&a.0));

    fn rec(vecs: &[(i64, Vec<i64>)], rem: &mut Vec<i64>, level: i64) -> u64 {
        let Some(((w, v), rest)) = vecs.split_first() else {
            return u64::from(rem.iter().all(|c| *c == 0));
        };
        if rest.is_empty() {
            if level % w != 0 {
                return 0;
            }
            let m = level / w;
            return u64::from(rem.iter().zip(v).all(|(r, c)| *r == m * c));
        }
        let mut total = 0;
        let mut taken = 0;
        let mut l = level;
        while l >= 0 {
            total += rec(rest, rem, l);
            for (r, c) in rem.iter_mut().zip(v) {
                *r -= c;
            }
            taken += 1;
            l -= w;
        }
        for (r, c) in rem.iter_mut().zip(v) {
            *r += taken * c;
        }
        total
    }
    let level = dot(lambda);
    if level < 0 {
        return Ok(0);
    }
    Ok(rec(&vecs, &mut lambda.to_vec(), level))
}

#[derive(Clone, Debug)]
pub struct CellQuasiPolynomial {
    pub element: DMElement,
    /// Coordinates in the flag basis of `DM(X)`.
    pub coords: Vec<i64>,
    /// The generic point of the cell whose zonotope points pin the fit.
    pub u: Vec<Rational>,
    pub fit_points: Vec<GroupElement>,
    pub check_points: Vec<GroupElement>,
    pub membership: Membership,
}

impl CellQuasiPolynomial {
    pub fn to_json(&self, window: &Window) -> Result<serde_json::Value> {
        Ok(serde_json::json!({
            "coords": self.coords,
            "u": self.u.iter().map(format_rational).collect::<Vec<_>>(),
            "fit_points": self.fit_points,
            "check_points": self.check_points,
            "member": self.membership.member,
            "table": self.element.function.tabulate(window)?.to_json(),
        }))
    }
}

/// A generic point of the cell: a scaled interior point plus a small hashed
/// offset (all walls pass through the origin, so scaling moves away from them).
fn cell_point(x: &CharacterList, cell: &BigCell) -> Result<Vec<Rational>> {
    for t in 1..=16i64 {
        for salt in 0..8u64 {
            let eps = chars::hashed_vector(x, 0xce11_0000 + salt, 1000);
            let u: Vec<Rational> =
                cell.interior_point.iter().zip(&eps).map(|(p, e)| p * rat_int(t) + e).collect();
            if cell.contains(&u) && chars::is_generic(x, &u) {
                return Ok(u);
            }
        }
    }
    Err(Error::NonGeneric(128))
}

/// Lattice points strictly inside `cell`, near the rays `t · interior`,
/// excluding `skip`, until `want` are found.
fn deep_sample(cell: &BigCell, skip: &[GroupElement], want: usize) -> Vec<GroupElement> {
    let s = cell.interior_point.len();
    let mut out: Vec<GroupElement> = Vec::new();
    for t in 1..=64i64 {
        let centre: Vec<i64> = cell
            .interior_point
            .iter()
            .map(|p| crate::arith::to_i64(&(p * rat_int(t)).round().to_integer()))
            .collect();
        for off in chars::box_points(&vec![(-1, 1); s]) {
            let v: Vec<i64> = centre.iter().zip(&off).map(|(a, b)| a + b).collect();
            let g = GroupElement::new(v.clone(), Vec::new());
            if cell.contains_point(&v) && !skip.contains(&g) && !out.contains(&g) {
                out.push(g);
            }
        }
        if out.len() >= want {
            break;
        }
    }
    out
}

/// The element of `DM(X)` agreeing with `P_X` on the cell: fitted in the
/// flag basis at the zonotope points of a generic `u` in the cell, then
/// cross-checked against `partition_count` on a disjoint deep sample.
pub fn cell_quasipoly(x: &CharacterList, cell: &BigCell, window: &Window) -> Result<CellQuasiPolynomial> {
    chars::pointed_functional(x)?;
    let basis = dm::dm_basis(x)?;
    let u = cell_point(x, cell)?;
    let (u, pts) = chars::zonotope_points(x, &u)?;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for p in &pts {
        rows.push(basis.iter().map(|e| e.value(p).map(rat_int)).collect::<Result<Vec<Rational>>>()?);
        rhs.push(rat_int(partition_count(x, &p.free)? as i64));
    }
    let coords: Vec<i64> = match linalg::solve(&rows, &rhs, basis.len()) {
        Solution::Unique(c) if c.iter().all(|q| q.is_integer()) => {
            c.iter().map(|q| crate::arith::to_i64(&q.to_integer())).collect()
        }
        _ => return Err(Error::FitInconsistent("no integral fit at the zonotope points".into())),
    };
    let function = GammaFunction::combination(
        &x.group,
        coords.iter().zip(&basis).map(|(c, e)| (*c, e.function.clone())).collect(),
    );
    let want = 2 * chars::delta(x) as usize;
    let check_points = deep_sample(cell, &pts, want);
    if check_points.len() < want {
        return Err(Error::FitInconsistent(format!(
            "only {} held-out points found in the cell",
            check_points.len()
        )));
    }
    for p in &check_points {
        let expect = partition_count(x, &p.free)? as i64;
        let got = function.value(p)?;
        if got != expect {
            return Err(Error::FitInconsistent(format!("at {:?}: fitted {got}, count {expect}", p.free)));
        }
    }
    let membership = dm::is_member_dm(&function, x, window)?;
    let element = DMElement {
        function,
        provenance: Provenance::Fitted { note: format!("partition function on the cell through {:?}", u.iter().map(format_rational).collect::<Vec<_>>()) },
    };
    Ok(CellQuasiPolynomial { element, coords, u, fit_points: pts, check_points, membership })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn el(v: &[i64]) -> GroupElement {
        GroupElement::new(v.to_vec(), vec![])
    }

    #[test]
    fn counting_examples() {
        let x = CharacterList::free(1, &[vec![1], vec![1]]);
        assert_eq!(partition_count(&x, &[3]).unwrap(), 4);
        assert_eq!(partition_count(&x, &[0]).unwrap(), 1);
        assert_eq!(partition_count(&x, &[-1]).unwrap(), 0);
        let x = CharacterList::free(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(partition_count(&x, &[2, 1]).unwrap(), 2);
        let x = CharacterList::free(1, &[vec![1], vec![-1]]);
        assert_eq!(partition_count(&x, &[0]).unwrap_err(), Error::UnpointedCone);
    }

    #[test]
    fn counting_matches_heaviside() {
        let x = CharacterList::free(2, &[vec![1, 0], vec![1, 2], vec![0, 1], vec![1, 1]]);
        let h = series::heaviside(&x.group, &x.elements).unwrap();
        for v in Window::cube(2, 6).free_points() {
            assert_eq!(partition_count(&x, &v).unwrap() as i64, h.value(&el(&v)).unwrap());
        }
    }

    #[test]
    fn cell_examples() {
        let x = CharacterList::free(1, &[vec![1], vec![1]]);
        let cells = chars::big_cells(&x).unwrap();
        assert_eq!(cells.len(), 1);
        let q = cell_quasipoly(&x, &cells[0], &Window::default_for(&x)).unwrap();
        assert!(q.membership.member);
        for k in -5..=5 {
            assert_eq!(q.element.value(&el(&[k])).unwrap(), k + 1);
        }

        let x = CharacterList::free(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        let w = Window::default_for(&x);
        let below = chars::big_cells(&x)
            .unwrap()
            .into_iter()
            .find(|c| c.contains(&[rat(2, 1), rat(1, 1)]))
            .unwrap();
        let q = cell_quasipoly(&x, &below, &w).unwrap();
        for v in Window::cube(2, 3).free_points() {
            assert_eq!(q.element.value(&el(&v)).unwrap(), v[1] + 1);
        }

        let x = CharacterList::free(2, &[vec![1, 0], vec![0, 1]]);
        let cells = chars::big_cells(&x).unwrap();
        let q = cell_quasipoly(&x, &cells[0], &Window::default_for(&x)).unwrap();
        assert_eq!(q.element.value(&el(&[-4, 7])).unwrap(), 1);
    }
}
