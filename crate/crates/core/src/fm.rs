//! Exact polyhedral feasibility by Fourier–Motzkin elimination, and cone
//! membership tests.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::arith::Rational;
use crate::linalg::{self, Solution};

/// A constraint `coeffs · x ≥ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Ineq {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Ineq {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Ineq { coeffs, rhs }
    }

    fn normalized(mut self) -> Self {
        let scale = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs());
        if let Some(k) = scale {
            for c in self.coeffs.iter_mut() {
                *c /= &k;
            }
            self.rhs /= &k;
        }
        self
    }
}

/// Returns a point satisfying every inequality, or `None` if the system is
/// infeasible.
pub fn feasible_point(rows: &[Ineq], nvars: usize) -> Option<Vec<Rational>> {
    let rows: BTreeSet<Ineq> = rows.iter().cloned().map(Ineq::normalized).collect();
    solve(rows.into_iter().collect(), nvars)
}

fn solve(rows: Vec<Ineq>, nvars: usize) -> Option<Vec<Rational>> {
    if nvars == 0 {
        return rows.iter().all(|r| r.rhs <= Rational::zero()).then(Vec::new);
    }
    let k = nvars - 1;
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut rest = BTreeSet::new();
    for r in rows {
        let c = r.coeffs[k].clone();
        let mut head = r.coeffs;
        head.truncate(k);
        if c.is_zero() {
            rest.insert(Ineq::new(head, r.rhs).normalized());
        } else if c.is_positive() {
            lower.push((head, r.rhs, c));
        } else {
            upper.push((head, r.rhs, c));
        }
    }
    // x_k ≥ (rhs - head·x)/c for c > 0, x_k ≤ (rhs - head·x)/c for c < 0
    for (hp, bp, cp) in &lower {
        for (hq, bq, cq) in &upper {
            let coeffs = (0..k).map(|i| &hp[i] / cp - &hq[i] / cq).collect();
            rest.insert(Ineq::new(coeffs, bp / cp - bq / cq).normalized());
        }
    }
    let mut x = solve(rest.into_iter().collect(), k)?;
    let bound = |h: &[Rational], b: &Rational, c: &Rational| -> Rational {
        let dot: Rational = h.iter().zip(&x).map(|(a, v)| a * v).sum();
        (b - dot) / c
    };
    let lo = lower.iter().map(|(h, b, c)| bound(h, b, c)).max();
    let hi = upper.iter().map(|(h, b, c)| bound(h, b, c)).min();
    let v = match (lo, hi) {
        (Some(l), Some(h)) => {
            if l > h {
                return None;
            }
            (l + h) / Rational::from_integer(2.into())
        }
        (Some(l), None) => l,
        (None, Some(h)) => h,
        (None, None) => Rational::zero(),
    };
    x.push(v);
    Some(x)
}

/// A functional `u` with `⟨u, v⟩ ≥ 1` for every given vector, if one exists.
pub fn positive_functional(vectors: &[Vec<Rational>], dim: usize) -> Option<Vec<Rational>> {
    let rows: Vec<Ineq> = vectors.iter().map(|v| Ineq::new(v.clone(), Rational::one())).collect();
    feasible_point(&rows, dim)
}

/// Whether `x` is a nonnegative combination of `gens` (all vectors of the
/// same dimension). Uses Carathéodory: it suffices to test linearly
/// independent subsets.
pub fn in_cone(x: &[Rational], gens: &[Vec<Rational>]) -> bool {
    if x.iter().all(|c| c.is_zero()) {
        return true;
    }
    let n = gens.len();
    let dim = x.len();
    let mut subset = Vec::new();
    fn rec(
        start: usize,
        n: usize,
        dim: usize,
        subset: &mut Vec<usize>,
        x: &[Rational],
        gens: &[Vec<Rational>],
    ) -> bool {
        if !subset.is_empty() {
            // columns = chosen generators
            let rows: Vec<Vec<Rational>> =
                (0..dim).map(|i| subset.iter().map(|&j| gens[j][i].clone()).collect()).collect();
            if linalg::rank(&rows, subset.len()) < subset.len() {
                return false;
            }
            if let Solution::Unique(t) = linalg::solve(&rows, x, subset.len()) {
                if t.iter().all(|c| !c.is_negative()) {
                    return true;
                }
            }
        }
        if subset.len() == dim {
            return false;
        }
        for j in start..n {
            subset.push(j);
            let found = rec(j + 1, n, dim, subset, x, gens);
            subset.pop();
            if found {
                return true;
            }
        }
        false
    }
    rec(0, n, dim, &mut subset, x, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn feasible_box() {
        // 1 ≤ x ≤ 2, 0 ≤ y ≤ x - 1
        let rows = vec![
            Ineq::new(v(&[1, 0]), rat_int(1)),
            Ineq::new(v(&[-1, 0]), rat_int(-2)),
            Ineq::new(v(&[0, 1]), rat_int(0)),
            Ineq::new(v(&[1, -1]), rat_int(1)),
        ];
        let x = feasible_point(&rows, 2).unwrap();
        for r in &rows {
            let dot: Rational = r.coeffs.iter().zip(&x).map(|(a, b)| a * b).sum();
            assert!(dot >= r.rhs);
        }
    }

    #[test]
    fn infeasible_system() {
        let rows = vec![Ineq::new(v(&[1, 1]), rat_int(1)), Ineq::new(v(&[-1, -1]), rat_int(0))];
        assert!(feasible_point(&rows, 2).is_none());
    }

    #[test]
    fn pointedness() {
        assert!(positive_functional(&[v(&[1, 0]), v(&[1, 1]), v(&[0, 1])], 2).is_some());
        assert!(positive_functional(&[v(&[1, 0]), v(&[-1, 0])], 2).is_none());
    }

    #[test]
    fn cone_membership() {
        let gens = vec![v(&[1, 0]), v(&[1, 1])];
        assert!(in_cone(&[rat_int(2), rat(1, 2)], &gens));
        assert!(in_cone(&v(&[0, 0]), &gens));
        assert!(!in_cone(&v(&[0, 1]), &gens));
        assert!(!in_cone(&v(&[-1, 0]), &gens));
        assert!(in_cone(&v(&[3]), &[v(&[1]), v(&[-1])]));
    }
}
