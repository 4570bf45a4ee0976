//! Finite boxes of `Γ` (a box in the free coordinates times all of `Γ_t`)
//! and value tables over them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::abelian::{GroupElement, GroupPresentation};
use crate::chars::{box_points, CharacterList};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl Window {
    pub fn cube(s: usize, radius: i64) -> Self {
        Window { lo: vec![-radius; s], hi: vec![radius; s] }
    }

    /// Max-norm radius `Σ_a ‖ā‖₁ + 2`.
    pub fn default_radius(x: &CharacterList) -> i64 {
        x.bars().iter().map(|b| b.iter().map(|c| c.abs()).sum::<i64>()).sum::<i64>() + 2
    }

    pub fn default_for(x: &CharacterList) -> Self {
        Window::cube(x.rank(), Window::default_radius(x))
    }

    /// The smallest box containing the free parts of `points`, grown by
    /// `margin`.
    pub fn bounding(s: usize, points: &[GroupElement], margin: i64) -> Self {
        let mut lo = vec![0; s];
        let mut hi = vec![0; s];
        for (k, p) in points.iter().enumerate() {
            for i in 0..s {
                if k == 0 || p.free[i] < lo[i] {
                    lo[i] = p.free[i];
                }
                if k == 0 || p.free[i] > hi[i] {
                    hi[i] = p.free[i];
                }
            }
        }
        Window { lo, hi }.grow(margin)
    }

    pub fn grow(&self, m: i64) -> Self {
        Window {
            lo: self.lo.iter().map(|x| x - m).collect(),
            hi: self.hi.iter().map(|x| x + m).collect(),
        }
    }

    /// Shrinks by `m` on every side; `None` if nothing is left.
    pub fn shrink(&self, m: i64) -> Option<Self> {
        let w = self.grow(-m);
        w.lo.iter().zip(&w.hi).all(|(a, b)| a <= b).then_some(w)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains_free(&self, v: &[i64]) -> bool {
        v.iter().zip(self.lo.iter().zip(&self.hi)).all(|(x, (a, b))| a <= x && x <= b)
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.contains_free(&g.free)
    }

    pub fn free_points(&self) -> Vec<Vec<i64>> {
        let ranges: Vec<(i64, i64)> = self.lo.iter().copied().zip(self.hi.iter().copied()).collect();
        box_points(&ranges)
    }

    /// All elements of `Γ` in the window, sorted.
    pub fn points(&self, group: &GroupPresentation) -> Vec<GroupElement> {
        let tors = group.torsion_elements();
        let mut out = Vec::new();
        for p in self.free_points() {
            for t in &tors {
                out.push(GroupElement::new(p.clone(), t.clone()));
            }
        }
        out
    }

    pub fn validate(&self, group: &GroupPresentation) -> Result<()> {
        if self.lo.len() != group.free_rank || self.hi.len() != group.free_rank {
            return Err(Error::InvalidInput("window dimension does not match the group".into()));
        }
        if self.lo.iter().zip(&self.hi).any(|(a, b)| a > b) {
            return Err(Error::InvalidInput("window has lo > hi".into()));
        }
        Ok(())
    }
}

/// Values of a function on the points of a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub window: Window,
    pub values: BTreeMap<GroupElement, i64>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    window: Window,
    values: Vec<(GroupElement, i64)>,
}

impl Table {
    pub fn to_json(&self) -> serde_json::Value {
        let raw = RawTable {
            window: self.window.clone(),
            values: self.values.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        };
        serde_json::to_value(raw).expect("serializable")
    }

    /// Parses a table, checking that every point lies in the window and is a
    /// valid element of `group`. Missing window points are an error.
    pub fn from_json(v: &serde_json::Value, group: &GroupPresentation) -> Result<Self> {
        let raw: RawTable = serde_json::from_value(v.clone())
            .map_err(|e| Error::InvalidInput(format!("malformed table: {e}")))?;
        raw.window.validate(group)?;
        let mut values = BTreeMap::new();
        for (g, val) in raw.values {
            group.validate(&g)?;
            if !raw.window.contains(&g) {
                return Err(Error::InvalidInput(format!("table point {g:?} outside its window")));
            }
            values.insert(g, val);
        }
        for p in raw.window.points(group) {
            if !values.contains_key(&p) {
                return Err(Error::InvalidInput(format!("table is missing the point {p:?}")));
            }
        }
        Ok(Table { window: raw.window, values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_points_include_torsion() {
        let g = GroupPresentation::new(1, vec![2]).unwrap();
        let w = Window::cube(1, 1);
        assert_eq!(w.points(&g).len(), 6);
        assert_eq!(w.shrink(1).unwrap(), Window::cube(1, 0));
        assert!(w.shrink(2).is_none());
    }

    #[test]
    fn table_roundtrip() {
        let g = GroupPresentation::free(1);
        let w = Window::cube(1, 2);
        let values = w.points(&g).into_iter().map(|p| (p.clone(), p.free[0] * 3)).collect();
        let t = Table { window: w, values };
        assert_eq!(Table::from_json(&t.to_json(), &g).unwrap(), t);
    }

    #[test]
    fn incomplete_table_is_rejected() {
        let g = GroupPresentation::free(1);
        let v = serde_json::json!({"window": {"lo": [0], "hi": [1]}, "values": [[{"free": [0], "torsion": []}, 1]]});
        assert!(Table::from_json(&v, &g).is_err());
    }
}
