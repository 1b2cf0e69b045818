//! Paterson's germ groupoid of a finite inverse semigroup, the convolution
//! C*-oracle with an independent orbit/isotropy assembly, and the Munn block
//! oracle for the semigroup algebra.

use crate::error::{Error, Result};
use crate::linalg::c64;
use crate::semigroup::{GroupTable, InverseSemigroup};
use crate::star_algebra::{cstar_envelope, unit_vec, CStarBlockAlgebra, StarAlgebra, Tol};
use ndarray::prelude::*;

/// A finite groupoid by arrow tables. Units are their own arrows; `source`
/// and `range` index into `units`.
#[derive(Debug, Clone)]
pub struct FiniteGroupoid {
    pub n: usize,
    /// arrow index of the unit at each unit-space point
    pub units: Vec<usize>,
    pub source: Vec<usize>,
    pub range: Vec<usize>,
    pub inverse: Vec<usize>,
    /// compose[g][h] = g∘h, defined iff source(g) = range(h)
    pub compose: Vec<Vec<Option<usize>>>,
}

impl FiniteGroupoid {
    /// Exhaustive axiom check: matching, units, inverses, associativity.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let bad = |msg: String| Err(Error::GroupoidAxiom(msg));
        for g in 0..n {
            for h in 0..n {
                let defined = self.compose[g][h].is_some();
                if defined != (self.source[g] == self.range[h]) {
                    return bad(format!("composability of ({g},{h}) mismatches source/range"));
                }
                if let Some(gh) = self.compose[g][h] {
                    if self.range[gh] != self.range[g] || self.source[gh] != self.source[h] {
                        return bad(format!("source/range of composite ({g},{h})"));
                    }
                }
            }
        }
        for (x, &u) in self.units.iter().enumerate() {
            if self.source[u] != x || self.range[u] != x {
                return bad(format!("unit arrow {u} not over point {x}"));
            }
            for g in 0..n {
                if self.range[g] == x && self.compose[u][g] != Some(g) {
                    return bad(format!("left unit law fails at ({u},{g})"));
                }
                if self.source[g] == x && self.compose[g][u] != Some(g) {
                    return bad(format!("right unit law fails at ({g},{u})"));
                }
            }
        }
        for g in 0..n {
            let gi = self.inverse[g];
            if self.source[gi] != self.range[g] || self.range[gi] != self.source[g] {
                return bad(format!("inverse of {g} has wrong endpoints"));
            }
            if self.compose[g][gi] != Some(self.units[self.range[g]])
                || self.compose[gi][g] != Some(self.units[self.source[g]])
            {
                return bad(format!("inverse law fails at {g}"));
            }
        }
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    let lhs = self.compose[g][h].and_then(|gh| self.compose[gh][k]);
                    let rhs = self.compose[h][k].and_then(|hk| self.compose[g][hk]);
                    if lhs != rhs {
                        return bad(format!("associativity fails at ({g},{h},{k})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Connected components of the unit space under arrows.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let m = self.units.len();
        let mut seen = vec![false; m];
        let mut out = Vec::new();
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            seen[start] = true;
            let mut members = Vec::new();
            while let Some(x) = stack.pop() {
                members.push(x);
                for g in 0..self.n {
                    let (s, r) = (self.source[g], self.range[g]);
                    if s == x && !seen[r] {
                        seen[r] = true;
                        stack.push(r);
                    }
                    if r == x && !seen[s] {
                        seen[s] = true;
                        stack.push(s);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Isotropy group at unit-space point `x`, as a reindexed group table
    /// over the arrow members.
    pub fn isotropy(&self, x: usize) -> GroupTable {
        let members: Vec<usize> =
            (0..self.n).filter(|&g| self.source[g] == x && self.range[g] == x).collect();
        let pos = |g: usize| members.iter().position(|&m| m == g).expect("closed under product");
        let table = members
            .iter()
            .map(|&g| members.iter().map(|&h| pos(self.compose[g][h].unwrap())).collect())
            .collect();
        GroupTable { members: members.clone(), table, unit: pos(self.units[x]) }
    }
}

/// Paterson's germ groupoid of a finite inverse semigroup. Germs `[s,e]`
/// with `e ≤ s*s` biject with elements `u = se` (then `u*u = e`), so the
/// arrow set is S itself; composition `u∘v = uv` is defined iff `u*u = vv*`.
pub fn paterson_groupoid(sg: &InverseSemigroup) -> FiniteGroupoid {
    let n = sg.order();
    let idx = |e: usize| sg.idempotent_index(e);
    let source: Vec<usize> = (0..n).map(|u| idx(sg.source(u))).collect();
    let range: Vec<usize> = (0..n).map(|u| idx(sg.range(u))).collect();
    let inverse: Vec<usize> = (0..n).map(|u| sg.inv(u)).collect();
    let compose = (0..n)
        .map(|u| {
            (0..n)
                .map(|v| if source[u] == range[v] { Some(sg.mul(u, v)) } else { None })
                .collect()
        })
        .collect();
    let units = sg.idempotents().to_vec();
    FiniteGroupoid { n, units, source, range, inverse, compose }
}

/// Group *-algebra of a reindexed group table: basis = group elements,
/// product from the table, star g ↦ g⁻¹.
pub fn group_algebra(gt: &GroupTable) -> StarAlgebra {
    let n = gt.order();
    let ginv = |i: usize| -> usize {
        (0..n).find(|&j| gt.table[i][j] == gt.unit).expect("group element has an inverse")
    };
    StarAlgebra::from_structure(
        n,
        |i, j| unit_vec(n, gt.table[i][j]),
        |i| unit_vec(n, ginv(i)),
        unit_vec(n, gt.unit),
        None,
    )
    .expect("group algebra is a valid *-algebra")
}

/// Enveloping C*-algebra of the groupoid convolution algebra, cross-checked
/// against the orbit/isotropy assembly ⊕_orbits M_|orbit|(C*(isotropy)).
pub fn groupoid_cstar(g: &FiniteGroupoid, seed: u64, tol: &Tol) -> Result<CStarBlockAlgebra> {
    g.validate()?;
    let n = g.n;
    let mut unit: Array1<c64> = Array1::zeros(n);
    for &u in &g.units {
        unit[u] = c64::new(1.0, 0.0);
    }
    let algebra = StarAlgebra::from_structure(
        n,
        |i, j| match g.compose[i][j] {
            Some(k) => unit_vec(n, k),
            None => Array1::zeros(n),
        },
        |i| unit_vec(n, g.inverse[i]),
        unit,
        None,
    )?;
    let env = cstar_envelope(&algebra, seed, tol)?;
    let convolution_blocks = env.target.block_multiset();

    // independent route: orbits and isotropy groups
    let mut assembled: Vec<usize> = Vec::new();
    for orbit in g.orbits() {
        let iso = g.isotropy(orbit[0]);
        let iso_env = cstar_envelope(&group_algebra(&iso), seed.wrapping_add(17), tol)?;
        for b in iso_env.target.block_multiset() {
            assembled.push(b * orbit.len());
        }
    }
    assembled.sort_unstable();
    if assembled != convolution_blocks {
        return Err(Error::GroupoidOracleMismatch(format!(
            "convolution gives {convolution_blocks:?}, orbit/isotropy gives {assembled:?}"
        )));
    }
    Ok(env.target)
}

/// Munn oracle: block multiset of ⊕_D M_{#idempotents(D)}(C*[G_D]) over the
/// D-classes of S.
pub fn munn_blocks(sg: &InverseSemigroup, seed: u64, tol: &Tol) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for class in sg.d_classes() {
        let env = cstar_envelope(&group_algebra(&class.subgroup), seed, tol)?;
        for b in env.target.block_multiset() {
            out.push(b * class.idempotent_count);
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn group_groupoid_is_the_group() {
        let s = corpus::cyclic_group(3).unwrap();
        let g = paterson_groupoid(&s);
        g.validate().unwrap();
        assert_eq!(g.units.len(), 1);
        assert_eq!(g.n, 3);
        assert_eq!(groupoid_cstar(&g, 0, &Tol::default()).unwrap().block_multiset(), vec![1, 1, 1]);
    }

    #[test]
    fn semilattice_groupoid_is_units_only() {
        let s = corpus::powerset_semilattice(2).unwrap();
        let g = paterson_groupoid(&s);
        g.validate().unwrap();
        assert_eq!(g.units.len(), 4);
        // every arrow is a unit: germs of idempotents collapse
        for u in 0..g.n {
            assert!(g.units.contains(&u));
        }
    }

    #[test]
    fn pair_groupoid_is_m2() {
        // two points, arrows {u0, u1, a: 0→1, a⁻¹}
        let g = FiniteGroupoid {
            n: 4,
            units: vec![0, 1],
            source: vec![0, 1, 0, 1],
            range: vec![0, 1, 1, 0],
            inverse: vec![0, 1, 3, 2],
            compose: vec![
                vec![Some(0), None, None, Some(3)],
                vec![None, Some(1), Some(2), None],
                vec![Some(2), None, None, Some(1)],
                vec![None, Some(3), Some(0), None],
            ],
        };
        g.validate().unwrap();
        assert_eq!(groupoid_cstar(&g, 0, &Tol::default()).unwrap().block_multiset(), vec![2]);
    }

    #[test]
    fn i2_groupoid_blocks() {
        let s = corpus::symmetric_inverse_monoid(2).unwrap();
        let g = paterson_groupoid(&s);
        g.validate().unwrap();
        let blocks = groupoid_cstar(&g, 0, &Tol::default()).unwrap().block_multiset();
        assert_eq!(blocks, vec![1, 1, 1, 2]);
    }

    #[test]
    fn munn_known_values() {
        let tol = Tol::default();
        let i2 = corpus::symmetric_inverse_monoid(2).unwrap();
        assert_eq!(munn_blocks(&i2, 0, &tol).unwrap(), vec![1, 1, 1, 2]);
        let b21 = corpus::named("b2").unwrap();
        assert_eq!(munn_blocks(&b21, 0, &tol).unwrap(), vec![1, 1, 2]);
        let s3 = corpus::symmetric_group_3().unwrap();
        assert_eq!(munn_blocks(&s3, 0, &tol).unwrap(), vec![1, 1, 2]);
    }

    #[test]
    fn munn_of_i3() {
        let s = corpus::symmetric_inverse_monoid(3).unwrap();
        let blocks = munn_blocks(&s, 0, &Tol::default()).unwrap();
        assert_eq!(blocks, vec![1, 1, 1, 2, 3, 3, 3]);
        let total: usize = blocks.iter().map(|b| b * b).sum();
        assert_eq!(total, s.order());
    }
}
