//! Finite unital inverse semigroups given by a Cayley table.
//!
//! Elements are dense indices `0..n-1`; the unit need not be index 0.
//! Validation is exhaustive: associativity, unique generalized inverses,
//! commuting idempotents, two-sided unit.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseSemigroup {
    n: usize,
    table: Vec<usize>,
    unit: usize,
    inv: Vec<usize>,
    idempotents: Vec<usize>,
    labels: Vec<String>,
}

/// The order isomorphism `e -> s e s*` from the down-set of `s*s`
/// onto the down-set of `s s*`.
#[derive(Debug, Clone)]
pub struct OrderIso {
    pub s: usize,
    /// Idempotents `e <= s*s`, paired with their images `s e s*`.
    pub pairs: Vec<(usize, usize)>,
}

impl OrderIso {
    pub fn apply(&self, e: usize) -> Option<usize> {
        self.pairs.iter().find(|(d, _)| *d == e).map(|(_, r)| *r)
    }
}

impl InverseSemigroup {
    /// Validate a Cayley table and derive inverses, idempotents and the order.
    pub fn from_table(table: Vec<Vec<usize>>, unit: usize, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut flat = vec![0usize; n * n];
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::EntryOutOfRange { row: i, col: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::EntryOutOfRange { row: i, col: j });
                }
                flat[i * n + j] = v;
            }
        }
        if unit >= n {
            return Err(Error::EntryOutOfRange { row: unit, col: 0 });
        }
        let m = |a: usize, b: usize| flat[a * n + b];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(Error::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let idempotents: Vec<usize> = (0..n).filter(|&e| m(e, e) == e).collect();
        for &e in &idempotents {
            for &f in &idempotents {
                if m(e, f) != m(f, e) {
                    return Err(Error::IdempotentsDontCommute { e, f });
                }
            }
        }
        for a in 0..n {
            if m(unit, a) != a || m(a, unit) != a {
                return Err(Error::UnitNotNeutral { unit, witness: a });
            }
        }
        let mut inv = vec![usize::MAX; n];
        for s in 0..n {
            let mut found = None;
            for t in 0..n {
                if m(m(s, t), s) == s && m(m(t, s), t) == t {
                    if found.is_some() {
                        return Err(Error::NoUniqueInverse { s });
                    }
                    found = Some(t);
                }
            }
            match found {
                Some(t) => inv[s] = t,
                None => return Err(Error::NoUniqueInverse { s }),
            }
        }
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| format!("e{i}")).collect());
        if labels.len() != n {
            return Err(Error::Input("label count does not match element count".into()));
        }
        Ok(Self { n, table: flat, unit, inv, idempotents, labels })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn inv(&self, s: usize) -> usize {
        self.inv[s]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Sorted idempotent indices.
    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    pub fn is_idempotent(&self, e: usize) -> bool {
        self.mul(e, e) == e
    }

    /// Natural partial order on idempotents: `e <= f` iff `ef = e`.
    pub fn leq(&self, e: usize, f: usize) -> bool {
        self.mul(e, f) == e
    }

    /// Position of idempotent `e` in `self.idempotents()`.
    pub fn idempotent_index(&self, e: usize) -> usize {
        self.idempotents.iter().position(|&x| x == e).expect("not an idempotent")
    }

    pub fn source(&self, s: usize) -> usize {
        self.mul(self.inv(s), s)
    }

    pub fn range(&self, s: usize) -> usize {
        self.mul(s, self.inv(s))
    }

    /// The bijection `e -> s e s*` on `{e in E : e <= s*s}`.
    pub fn gamma_iso(&self, s: usize) -> OrderIso {
        let ss = self.source(s);
        let pairs = self
            .idempotents
            .iter()
            .copied()
            .filter(|&e| self.leq(e, ss))
            .map(|e| (e, self.mul(self.mul(s, e), self.inv(s))))
            .collect();
        OrderIso { s, pairs }
    }

    /// D-classes with a representative idempotent, the idempotent count in
    /// the class, and the maximal subgroup at the representative.
    pub fn d_classes(&self) -> Vec<DClass> {
        let es = &self.idempotents;
        let k = es.len();
        // e ~ f iff some s has s*s = e, ss* = f
        let mut adj = vec![vec![false; k]; k];
        for i in 0..k {
            adj[i][i] = true;
        }
        for s in 0..self.n {
            let e = self.source(s);
            let f = self.range(s);
            let i = self.idempotent_index(e);
            let j = self.idempotent_index(f);
            adj[i][j] = true;
            adj[j][i] = true;
        }
        let mut seen = vec![false; k];
        let mut classes = Vec::new();
        for start in 0..k {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut members = Vec::new();
            seen[start] = true;
            while let Some(i) = stack.pop() {
                members.push(es[i]);
                for j in 0..k {
                    if adj[i][j] && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            members.sort_unstable();
            let rep = members[0];
            classes.push(DClass {
                representative: rep,
                idempotent_count: members.len(),
                idempotents: members,
                subgroup: self.maximal_subgroup(rep),
            });
        }
        classes.sort_by_key(|c| c.representative);
        classes
    }

    /// Maximal subgroup at idempotent `e`: elements with `ss* = s*s = e`,
    /// as (member element indices, reindexed group table).
    pub fn maximal_subgroup(&self, e: usize) -> GroupTable {
        let members: Vec<usize> = (0..self.n)
            .filter(|&s| self.source(s) == e && self.range(s) == e)
            .collect();
        let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let table = members
            .iter()
            .map(|&a| members.iter().map(|&b| pos[&self.mul(a, b)]).collect())
            .collect();
        GroupTable { members, table, unit: pos[&e] }
    }

    pub fn to_json(&self) -> CayleyJson {
        CayleyJson {
            elements: self.labels.clone(),
            unit: self.unit,
            table: (0..self.n)
                .map(|i| (0..self.n).map(|j| self.mul(i, j)).collect())
                .collect(),
        }
    }

    pub fn from_json(j: &CayleyJson) -> Result<Self> {
        Self::from_table(j.table.clone(), j.unit, Some(j.elements.clone()))
    }
}

#[derive(Debug, Clone)]
pub struct DClass {
    pub representative: usize,
    pub idempotent_count: usize,
    pub idempotents: Vec<usize>,
    pub subgroup: GroupTable,
}

/// A finite group by reindexed Cayley table; `members` are the original
/// element indices of the ambient semigroup.
#[derive(Debug, Clone)]
pub struct GroupTable {
    pub members: Vec<usize>,
    pub table: Vec<Vec<usize>>,
    pub unit: usize,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn to_semigroup(&self) -> InverseSemigroup {
        InverseSemigroup::from_table(self.table.clone(), self.unit, None)
            .expect("maximal subgroup is a group")
    }
}

/// Exact-round-trip JSON form of a Cayley table.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CayleyJson {
    pub elements: Vec<String>,
    pub unit: usize,
    pub table: Vec<Vec<usize>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_is_valid_group() {
        let s = InverseSemigroup::from_table(vec![vec![0, 1], vec![1, 0]], 0, None).unwrap();
        assert_eq!(s.idempotents(), &[0]);
        assert_eq!(s.inv(1), 1);
    }

    #[test]
    fn two_chain_semilattice() {
        // {1, e} with e*e = e
        let s = InverseSemigroup::from_table(vec![vec![0, 1], vec![1, 1]], 0, None).unwrap();
        assert_eq!(s.idempotents(), &[0, 1]);
        assert!(s.leq(1, 0));
        assert!(!s.leq(0, 1));
    }

    #[test]
    fn left_zero_rejected() {
        // xy = x: idempotents a,b do not commute
        let err = InverseSemigroup::from_table(vec![vec![0, 0], vec![1, 1]], 0, None).unwrap_err();
        match err {
            Error::IdempotentsDontCommute { .. } | Error::UnitNotNeutral { .. } => {}
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn gamma_iso_of_idempotent_is_identity() {
        let s = InverseSemigroup::from_table(vec![vec![0, 1], vec![1, 1]], 0, None).unwrap();
        let g = s.gamma_iso(1);
        assert_eq!(g.pairs, vec![(1, 1)]);
    }
}
