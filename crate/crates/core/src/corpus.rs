//! Built-in and randomly generated corpus instances.
//!
//! Random instances are always closed inverse subsemigroups of a symmetric
//! inverse monoid generated from seeded partial bijections, so the axioms
//! hold by construction; validation runs anyway.

use crate::error::{Error, Result};
use crate::semigroup::InverseSemigroup;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

pub const DEFAULT_CAP: usize = 200;

/// A partial injective map on `{0..n-1}`; `map[i] = Some(j)` means `i -> j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialBijection {
    pub map: Vec<Option<usize>>,
}

impl PartialBijection {
    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).map(Some).collect() }
    }

    pub fn empty(n: usize) -> Self {
        Self { map: vec![None; n] }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.map.len()];
        for v in self.map.iter().flatten() {
            if seen[*v] {
                return false;
            }
            seen[*v] = true;
        }
        true
    }

    /// `self` after `other`: (f g)(x) = f(g(x)).
    pub fn compose(&self, other: &Self) -> Self {
        let map = other
            .map
            .iter()
            .map(|v| v.and_then(|j| self.map[j]))
            .collect();
        Self { map }
    }

    pub fn inverse(&self) -> Self {
        let n = self.map.len();
        let mut map = vec![None; n];
        for (i, v) in self.map.iter().enumerate() {
            if let Some(j) = *v {
                map[j] = Some(i);
            }
        }
        Self { map }
    }

    pub fn rank(&self) -> usize {
        self.map.iter().flatten().count()
    }

    fn label(&self) -> String {
        let pairs: Vec<String> = self
            .map
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|j| format!("{i}>{j}")))
            .collect();
        if pairs.is_empty() {
            "0".into()
        } else if self.map.iter().enumerate().all(|(i, v)| *v == Some(i)) {
            "1".into()
        } else {
            pairs.join(",")
        }
    }
}

/// Build the inverse semigroup generated (with identity adjoined) by a set
/// of partial bijections on `n` points.
pub fn closure_of_partial_bijections(
    n: usize,
    generators: &[PartialBijection],
    cap: usize,
) -> Result<InverseSemigroup> {
    for g in generators {
        if g.map.len() != n || !g.is_injective() {
            return Err(Error::Input("generator is not a partial bijection".into()));
        }
    }
    let mut elems: Vec<PartialBijection> = vec![PartialBijection::identity(n)];
    for g in generators {
        if !elems.contains(g) {
            elems.push(g.clone());
        }
        let gi = g.inverse();
        if !elems.contains(&gi) {
            elems.push(gi);
        }
    }
    loop {
        let mut added = Vec::new();
        for a in &elems {
            for b in &elems {
                let c = a.compose(b);
                if !elems.contains(&c) && !added.contains(&c) {
                    added.push(c);
                }
            }
        }
        if added.is_empty() {
            break;
        }
        elems.extend(added);
        if elems.len() > cap {
            return Err(Error::TooLarge { n: elems.len(), cap });
        }
    }
    elems.sort();
    from_partial_bijections(&elems)
}

fn from_partial_bijections(elems: &[PartialBijection]) -> Result<InverseSemigroup> {
    let pos: HashMap<&PartialBijection, usize> =
        elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let n = elems[0].map.len();
    let unit = pos[&PartialBijection::identity(n)];
    let table: Vec<Vec<usize>> = elems
        .iter()
        .map(|a| elems.iter().map(|b| pos[&a.compose(b)]).collect())
        .collect();
    let labels = elems.iter().map(|e| e.label()).collect();
    InverseSemigroup::from_table(table, unit, Some(labels))
}

/// The full symmetric inverse monoid I_n (all partial bijections on n points).
pub fn symmetric_inverse_monoid(n: usize) -> Result<InverseSemigroup> {
    if n > 3 {
        return Err(Error::TooLarge { n: 1 << (2 * n), cap: DEFAULT_CAP });
    }
    let mut elems: Vec<PartialBijection> = Vec::new();
    // enumerate by choice of image per point, with injectivity filter
    let mut stack = vec![PartialBijection::empty(n)];
    for i in 0..n {
        let mut next = Vec::new();
        for pb in &stack {
            next.push(pb.clone());
            let mut used: Vec<usize> = pb.map.iter().flatten().copied().collect();
            used.sort_unstable();
            for j in 0..n {
                if !used.contains(&j) {
                    let mut q = pb.clone();
                    q.map[i] = Some(j);
                    next.push(q);
                }
            }
        }
        stack = next;
    }
    elems.extend(stack);
    elems.sort();
    elems.dedup();
    from_partial_bijections(&elems)
}

/// Brandt semigroup B(G, k) over a group table, with an adjoined unit.
/// Elements: unit, zero, and triples (i, g, j).
pub fn brandt_with_unit(group: &InverseSemigroup, k: usize) -> Result<InverseSemigroup> {
    let g_ord = group.order();
    let m = 2 + k * k * g_ord;
    if m > DEFAULT_CAP {
        return Err(Error::TooLarge { n: m, cap: DEFAULT_CAP });
    }
    // index 0 = unit, 1 = zero, then (i, g, j) at 2 + (i*g_ord + g)*k + j
    let idx = |i: usize, g: usize, j: usize| 2 + (i * g_ord + g) * k + j;
    let mut table = vec![vec![1usize; m]; m];
    for a in 0..m {
        table[0][a] = a;
        table[a][0] = a;
    }
    for i in 0..k {
        for g in 0..g_ord {
            for j in 0..k {
                for jj in 0..k {
                    for h in 0..g_ord {
                        for l in 0..k {
                            let prod = if j == jj { idx(i, group.mul(g, h), l) } else { 1 };
                            table[idx(i, g, j)][idx(jj, h, l)] = prod;
                        }
                    }
                }
            }
        }
    }
    let mut labels = vec!["1".to_string(), "0".to_string()];
    for i in 0..k {
        for g in 0..g_ord {
            for j in 0..k {
                let _ = idx(i, g, j);
                labels.push(format!("({i},{g},{j})"));
            }
        }
    }
    InverseSemigroup::from_table(table, 0, Some(labels))
}

/// Powerset of {0..n-1} under intersection; unit is the full set.
pub fn powerset_semilattice(n: usize) -> Result<InverseSemigroup> {
    if n > 4 {
        return Err(Error::TooLarge { n: 1 << n, cap: DEFAULT_CAP });
    }
    let m = 1usize << n;
    let table = (0..m).map(|a| (0..m).map(|b| a & b).collect()).collect();
    let labels = (0..m).map(|a| format!("{a:0width$b}", width = n.max(1))).collect();
    InverseSemigroup::from_table(table, m - 1, Some(labels))
}

/// Cyclic group Z/n.
pub fn cyclic_group(n: usize) -> Result<InverseSemigroup> {
    if n == 0 {
        return Err(Error::Empty);
    }
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    InverseSemigroup::from_table(table, 0, Some((0..n).map(|i| format!("g{i}")).collect()))
}

/// Symmetric group S_3 as permutations of 3 points.
pub fn symmetric_group_3() -> Result<InverseSemigroup> {
    let perms: Vec<Vec<usize>> = vec![
        vec![0, 1, 2],
        vec![1, 2, 0],
        vec![2, 0, 1],
        vec![1, 0, 2],
        vec![0, 2, 1],
        vec![2, 1, 0],
    ];
    let pos: HashMap<&Vec<usize>, usize> = perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let compose = |a: &Vec<usize>, b: &Vec<usize>| -> Vec<usize> {
        (0..3).map(|x| a[b[x]]).collect()
    };
    let table = perms
        .iter()
        .map(|a| perms.iter().map(|b| pos[&compose(a, b)]).collect())
        .collect();
    let labels = vec!["1", "(123)", "(132)", "(12)", "(23)", "(13)"]
        .into_iter()
        .map(String::from)
        .collect();
    InverseSemigroup::from_table(table, 0, Some(labels))
}

/// Seeded random closed inverse subsemigroup of I_n.
pub fn random_closure(n: usize, count: usize, seed: u64, cap: usize) -> Result<InverseSemigroup> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens = Vec::new();
    for _ in 0..count {
        gens.push(random_partial_bijection(&mut rng, n));
    }
    closure_of_partial_bijections(n, &gens, cap)
}

fn random_partial_bijection<R: Rng>(rng: &mut R, n: usize) -> PartialBijection {
    let dom_size = rng.gen_range(0..=n);
    let mut points: Vec<usize> = (0..n).collect();
    points.shuffle(rng);
    let dom = &points[..dom_size];
    let mut targets: Vec<usize> = (0..n).collect();
    targets.shuffle(rng);
    let mut map = vec![None; n];
    for (d, t) in dom.iter().zip(targets.iter()) {
        map[*d] = Some(*t);
    }
    PartialBijection { map }
}

/// Named instance lookup used by the CLI and the acceptance suite.
pub fn named(name: &str) -> Result<InverseSemigroup> {
    match name {
        "i1" => symmetric_inverse_monoid(1),
        "i2" => symmetric_inverse_monoid(2),
        "i3" => symmetric_inverse_monoid(3),
        "b2" => brandt_with_unit(&cyclic_group(1)?, 2),
        "powerset1" => powerset_semilattice(1),
        "powerset2" => powerset_semilattice(2),
        "powerset3" => powerset_semilattice(3),
        "z2" => cyclic_group(2),
        "z3" => cyclic_group(3),
        "s3" => symmetric_group_3(),
        other => Err(Error::UnknownCorpus(other.to_string())),
    }
}

/// The standard structural corpus: named instances plus 25 seeded closures in I_3.
pub fn structure_corpus() -> Vec<(String, InverseSemigroup)> {
    let mut out = Vec::new();
    for name in ["i1", "i2", "i3", "b2", "powerset1", "powerset2", "powerset3", "z2", "z3", "s3"] {
        out.push((name.to_string(), named(name).unwrap()));
    }
    for seed in 0..25u64 {
        let s = random_closure(3, 2, seed, DEFAULT_CAP).expect("closure in I_3 fits the cap");
        out.push((format!("rand3-{seed}"), s));
    }
    out
}
