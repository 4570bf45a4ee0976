//! Named property suites: each runs a family of exact checks on fixed or
//! seeded random instances and reports one line per check.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::abelian::{GroupElement, GroupPresentation};
use crate::arith::rat_int;
use crate::chars::{self, CharacterList, RationalSubspace};
use crate::dm;
use crate::error::{Error, Result};
use crate::filtration;
use crate::partition;
use crate::series::{self, FaceSelector, GammaFunction, Support};
use crate::window::Window;

pub const SUITES: [&str; 10] = [
    "rank6",
    "homothety",
    "zonotope",
    "exact-seq",
    "unimodular",
    "oracle",
    "big-cell",
    "local",
    "filtration",
    "face-delta",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| format!("[{}] {}: {}{}", self.suite, c.label, if c.pass { "pass" } else { "FAIL" },
                if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) }))
            .collect()
    }
}

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn new() -> Self {
        Recorder { checks: Vec::new() }
    }

    fn check(&mut self, label: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { label: label.into(), pass, detail: detail.into() });
    }

    /// Records a computation that must succeed and satisfy `pred`.
    fn expect<T>(&mut self, label: impl Into<String>, r: Result<T>, pred: impl FnOnce(&T) -> (bool, String)) {
        match r {
            Ok(v) => {
                let (ok, d) = pred(&v);
                self.check(label, ok, d);
            }
            Err(e) => self.check(label, false, format!("error: {e}")),
        }
    }

    fn finish(self, suite: &str) -> SuiteReport {
        SuiteReport { suite: suite.into(), pass: self.checks.iter().all(|c| c.pass), checks: self.checks }
    }
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let r = match name {
        "rank6" => rank6(),
        "homothety" => homothety(),
        "zonotope" => zonotope(seed),
        "exact-seq" => exact_seq(seed),
        "unimodular" => unimodular(seed),
        "oracle" => oracle(seed),
        "big-cell" => big_cell(seed),
        "local" => local(seed),
        "filtration" => filtration_roundtrip(seed),
        "face-delta" => face_delta(seed),
        _ => return Err(Error::InvalidInput(format!("unknown suite {name:?}"))),
    };
    Ok(r.finish(name))
}

/// Shape of random instances.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_rank: usize,
    pub max_len: usize,
    pub max_entry: i64,
    /// Largest order of an optional cyclic torsion factor (1 = none).
    pub max_torsion: i64,
    pub pointed: bool,
    pub nonzero_bars: bool,
}

pub fn random_list(rng: &mut ChaCha8Rng, shape: Shape) -> CharacterList {
    loop {
        let s = rng.gen_range(1..=shape.max_rank);
        let t = rng.gen_range(1..=shape.max_torsion);
        let group = GroupPresentation::new(s, if t > 1 { vec![t] } else { vec![] }).expect("valid group");
        let n = rng.gen_range(s..=shape.max_len.max(s));
        let elements: Vec<GroupElement> = (0..n)
            .map(|_| {
                let free = (0..s).map(|_| rng.gen_range(-shape.max_entry..=shape.max_entry)).collect();
                let torsion = group.torsion_orders.iter().map(|&d| rng.gen_range(0..d)).collect();
                GroupElement::new(free, torsion)
            })
            .collect();
        let x = CharacterList::new(group, elements).expect("valid list");
        if !x.spans() {
            continue;
        }
        if shape.nonzero_bars && x.bars().iter().any(|b| b.iter().all(|c| *c == 0)) {
            continue;
        }
        if shape.pointed && (x.bars().iter().any(|b| b.iter().all(|c| *c == 0)) || chars::pointed_functional(&x).is_err()) {
            continue;
        }
        return x;
    }
}

fn describe(x: &CharacterList) -> String {
    let el: Vec<String> = x
        .elements
        .iter()
        .map(|e| if e.torsion.is_empty() { format!("{:?}", e.free) } else { format!("{:?}+{:?}", e.free, e.torsion) })
        .collect();
    format!("Z^{}{} X=[{}]", x.rank(), x.group.torsion_orders.iter().map(|d| format!("xZ/{d}")).collect::<String>(), el.join(","))
}

fn rank6() -> Recorder {
    let mut rec = Recorder::new();
    let g = GroupPresentation::new(1, vec![2]).expect("valid group");
    let x = CharacterList::new(g, vec![GroupElement::new(vec![1], vec![1]), GroupElement::new(vec![2], vec![1])])
        .expect("valid list");
    rec.check("delta = 3", chars::delta(&x) == 3, format!("delta = {}", chars::delta(&x)));
    rec.expect("dm_rank x |torsion| = 6", dm::dm_rank(&x, None), |r| {
        (r.rank as usize * x.group.torsion_size() == 6 && r.z_rank == 6, format!("rank {} z_rank {}", r.rank, r.z_rank))
    });
    match dm::dm_basis(&x) {
        Ok(b) => {
            rec.check("dm_basis has 6 elements", b.len() == 6, format!("{} elements", b.len()));
            let w = Window::default_for(&x);
            for (i, e) in b.iter().enumerate() {
                rec.expect(format!("basis element {i} in DM(X)"), dm::is_member_dm(&e.function, &x, &w), |m| {
                    (m.member, format!("{} stencil checks", m.checked))
                });
            }
        }
        Err(e) => rec.check("dm_basis", false, format!("error: {e}")),
    }
    rec
}

/// `n ↦ binom(n + k, k)` as an exact polynomial in `n`.
fn binomial_shift(n: i64, k: i64) -> i64 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 1..=k {
        num *= (n + i) as i128;
        den *= i as i128;
    }
    (num / den) as i64
}

fn homothety() -> Recorder {
    let mut rec = Recorder::new();
    for k in 1..=4i64 {
        let x = CharacterList::free(1, &vec![vec![1]; (k + 1) as usize]);
        rec.expect(format!("k={k}: dm_rank = {}", k + 1), dm::dm_rank(&x, None), |r| {
            (r.rank == (k + 1) as u64, format!("rank {}", r.rank))
        });
        let f = GammaFunction::new(x.group.clone(), Support::All, move |g| Ok(binomial_shift(g.free[0], k)));
        rec.expect(format!("k={k}: binom(n+k,k) in DM(X)"), dm::is_member_dm(&f, &x, &Window::default_for(&x)), |m| {
            (m.member, format!("{} stencil checks", m.checked))
        });
    }
    rec
}

fn zonotope(seed: u64) -> Recorder {
    let mut rec = Recorder::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x3003);
    let shape = Shape { max_rank: 3, max_len: 6, max_entry: 3, max_torsion: 3, pointed: false, nonzero_bars: false };
    for i in 0..25 {
        let x = random_list(&mut rng, shape);
        let want = chars::delta(&x) as usize * x.group.torsion_size();
        for j in 0..3u64 {
            let r = chars::generic_u(&x, j).and_then(|u| chars::zonotope_points(&x, &u));
            rec.expect(format!("instance {i} u#{j}"), r, |(_, pts)| {
                (pts.len() == want, format!("{} points, delta*|tors| = {want}, {}", pts.len(), describe(&x)))
            });
        }
    }
    rec
}

fn exact_seq(seed: u64) -> Recorder {
    let mut rec = Recorder::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4004);
    let shape = Shape { max_rank: 2, max_len: 4, max_entry: 2, max_torsion: 2, pointed: false, nonzero_bars: false };
    for i in 0..15 {
        let x = random_list(&mut rng, shape);
        for a in x.infinite_indices() {
            rec.expect(format!("instance {i} a={a}"), dm::deletion_restriction(&x, a, None), |r| {
                (
                    r.exact,
                    format!(
                        "z-ranks {} = {} + {}, image rank {}, kernel {}, {}",
                        r.z_rank_x, r.z_rank_deleted, r.z_rank_quotient, r.image_rank, r.kernel_dim, describe(&x)
                    ),
                )
            });
        }
    }
    rec
}

fn unimodular(seed: u64) -> Recorder {
    let mut rec = Recorder::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5005);
    let shape = Shape { max_rank: 3, max_len: 5, max_entry: 2, max_torsion: 1, pointed: false, nonzero_bars: false };
    for i in 0..10 {
        let x = random_list(&mut rng, shape);
        let r = (|| {
            let basis = dm::dm_basis(&x)?;
            let (_, pts) = chars::zonotope_points(&x, &chars::generic_u(&x, 1)?)?;
            let fs: Vec<GammaFunction> = basis.iter().map(|e| e.function.clone()).collect();
            dm::value_det(&fs, &pts)
        })();
        rec.expect(format!("instance {i}"), r, |d| {
            (*d == rat_int(1) || *d == rat_int(-1), format!("det {d}, {}", describe(&x)))
        });
    }
    rec
}

fn oracle(seed: u64) -> Recorder {
    let mut rec = Recorder::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6006);
    let shape = Shape { max_rank: 3, max_len: 5, max_entry: 2, max_torsion: 1, pointed: true, nonzero_bars: true };
    for i in 0..10 {
        let x = random_list(&mut rng, shape);
        let r = (|| {
            let h = series::heaviside(&x.group, &x.elements)?;
            let mut bad = None;
            for _ in 0..200 {
                let lambda: Vec<i64> = (0..x.rank()).map(|_| rng.gen_range(-4..=12)).collect();
                let c = partition::partition_count(&x, &lambda)? as i64;
                let v = h.value(&GroupElement::new(lambda.clone(), vec![]))?;
                if c != v && bad.is_none() {
                    bad = Some((lambda, c, v));
                }
            }
            Ok(bad)
        })();
        rec.expect(format!("instance {i}: 200 points"), r, |bad| {
            (bad.is_none(), match bad {
                None => describe(&x),
                Some((l, c, v)) => format!("λ={l:?}: count {c}, heaviside {v}"),
            })
        });
    }
    rec
}

fn big_cell(seed: u64) -> Recorder {
    let mut rec = Recorder::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7007);
    let shape = Shape { max_rank: 2, max_len: 4, max_entry: 2, max_torsion: 1, pointed: true, nonzero_bars: true };
    for i in 0..8 {
        let x = random_list(&mut rng, shape);
        let w = Window::default_for(&x);
        match chars::big_cells(&x) {
            Ok(cells) => {
                for (k, c) in cells.iter().enumerate() {
                    rec.expect(format!("instance {i} cell {k}"), partition::cell_quasipoly(&x, c, &w), |q| {
                        (q.membership.member, format!("{} held-out points, {}", q.check_points.len(), describe(&x)))
                    });
                }
            }
            Err(e) => rec.check(format!("instance {i}"), false, format!("error: {e}")),
        }
    }
    rec
}

fn local(seed: u64) -> Recorder {
    let mut rec = Recorder::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x8008);
    let shape = Shape { max_rank: 2, max_len: 3, max_entry: 2, max_torsion: 2, pointed: false, nonzero_bars: false };
    let mut found = 0;
    while found < 8 {
        let x = random_list(&mut rng, shape);
        if chars::special_points(&x).len() < 2 {
            continue;
        }
        let i = found;
        found += 1;
        let w = Window::default_for(&x);
        match dm::dm_basis(&x) {
            Ok(basis) => {
                for (j, e) in basis.iter().enumerate() {
                    let r = dm::local_decomposition(&e.function, &x, &w).and_then(|q| {
                        for g in w.points(&x.group) {
                            if q.eval(&g) != q.field.from_rational(rat_int(e.value(&g)?)) {
                                return Ok((false, q.terms.len()));
                            }
                        }
                        Ok((true, q.terms.len()))
                    });
                    rec.expect(format!("instance {i} element {j}"), r, |(ok, n)| {
                        (*ok, format!("{n} local terms, {}", describe(&x)))
                    });
                }
            }
            Err(e) => rec.check(format!("instance {i}"), false, format!("error: {e}")),
        }
    }
    rec
}

fn filtration_roundtrip(seed: u64) -> Recorder {
    let mut rec = Recorder::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9009);
    let shape = Shape { max_rank: 2, max_len: 4, max_entry: 2, max_torsion: 1, pointed: false, nonzero_bars: true };
    for i in 0..10 {
        let x = random_list(&mut rng, shape);
        let r = (|| {
            let gens = filtration::generators_f(&x)?;
            let basis = dm::dm_basis(&x)?;
            let mut terms = Vec::new();
            for (_, g) in &gens {
                terms.push((rng.gen_range(-2..=2), g.clone()));
            }
            for e in &basis {
                terms.push((rng.gen_range(-2..=2), e.function.clone()));
            }
            let f = GammaFunction::combination(&x.group, terms);
            let radius = 3 * x.bars().iter().map(|b| b.iter().map(|c| c.abs()).max().unwrap_or(0)).sum::<i64>() + 3;
            filtration::f_decompose(&f, &x, &HashMap::new(), &Window::cube(x.rank(), radius))
        })();
        rec.expect(format!("instance {i}"), r, |d| {
            (d.roundtrip.exact, format!("{} core points, {}", d.roundtrip.points, describe(&x)))
        });
    }
    rec
}

fn face_delta(seed: u64) -> Recorder {
    let mut rec = Recorder::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa00a);
    let shape = Shape { max_rank: 2, max_len: 4, max_entry: 2, max_torsion: 2, pointed: false, nonzero_bars: false };
    for i in 0..10 {
        let x = random_list(&mut rng, shape);
        let w = Window::default_for(&x);
        let subspaces: Vec<RationalSubspace> = chars::rational_subspaces(&x)
            .into_iter()
            .filter(|(d, _)| *d < x.rank())
            .flat_map(|(_, v)| v)
            .collect();
        let mut failures = Vec::new();
        let mut count = 0;
        let r = (|| {
            for r in &subspaces {
                let u0 = FaceSelector::default_for(&x, r)?;
                for face in [u0.clone(), u0.negated()] {
                    count += 1;
                    let p = series::p_face(&x, r, &face)?;
                    let ys: Vec<GroupElement> = r.complement(&x).iter().map(|&k| x.elements[k].clone()).collect();
                    let h = p.nabla(&ys);
                    let zero = x.group.zero();
                    for g in w.points(&x.group) {
                        let v = h.value(&g)?;
                        if v != i64::from(g == zero) {
                            failures.push(format!("r={:?} at {:?}", r.lattice_basis, g));
                            break;
                        }
                    }
                }
            }
            Ok(())
        })();
        rec.expect(format!("instance {i}"), r, |_| {
            (failures.is_empty(), format!("{count} (subspace, face) pairs, {} {}", describe(&x), failures.join("; ")))
        });
    }
    rec
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial_shift(3, 2), 10);
        assert_eq!(binomial_shift(-1, 2), 0);
        assert_eq!(binomial_shift(-3, 1), -2);
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope", 0).is_err());
    }

    #[test]
    fn random_lists_respect_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let shape = Shape { max_rank: 2, max_len: 4, max_entry: 2, max_torsion: 1, pointed: true, nonzero_bars: true };
        for _ in 0..20 {
            let x = random_list(&mut rng, shape);
            assert!(x.spans() && x.group.is_torsion_free() && x.len() <= 4);
            assert!(chars::pointed_functional(&x).is_ok());
        }
    }
}
