//! The spectrum X of C*(E): minimal projections in standard form, the
//! translation action `P -> u_s P u_{s*}`, and evaluation of a standard-form
//! projection on a concrete module.

use crate::error::{Error, Result};
use crate::linalg::{self, c64};
use crate::semigroup::InverseSemigroup;
use ndarray::Array2;

/// A point of X, stored by its anchor idempotent. The standard form makes
/// the anchor a complete invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    pub anchor: usize,
}

impl Character {
    /// Up-set {f in E : f >= anchor}.
    pub fn support(&self, s: &InverseSemigroup) -> Vec<usize> {
        s.idempotents()
            .iter()
            .copied()
            .filter(|&f| s.leq(self.anchor, f))
            .collect()
    }

    /// Idempotents strictly below the anchor.
    pub fn negatives(&self, s: &InverseSemigroup) -> Vec<usize> {
        s.idempotents()
            .iter()
            .copied()
            .filter(|&f| f != self.anchor && s.leq(f, self.anchor))
            .collect()
    }

    /// The character as a 0/1 function on E: 1 on the up-set of the anchor.
    pub fn evaluate(&self, s: &InverseSemigroup, e: usize) -> bool {
        s.leq(self.anchor, e)
    }
}

/// One character per idempotent, ordered like `idempotents()`.
pub fn spectrum(s: &InverseSemigroup) -> Vec<Character> {
    s.idempotents().iter().map(|&e| Character { anchor: e }).collect()
}

/// Result of translating a character by a semigroup element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Translated {
    Zero,
    Char(Character),
}

/// `P -> u_s P u_{s*}`; zero exactly when anchor(P) is not below s*s.
pub fn translate_character(sg: &InverseSemigroup, p: Character, s: usize) -> Translated {
    let source = sg.source(s);
    if !sg.leq(p.anchor, source) {
        return Translated::Zero;
    }
    let new_anchor = sg.mul(sg.mul(s, p.anchor), sg.inv(s));
    Translated::Char(Character { anchor: new_anchor })
}

/// Evaluate the standard-form projection of `p` on a module where the
/// idempotent `idempotents()[i]` acts by `ops[i]`.
///
/// Returns `prod_{f in support} op(f) * prod_{g not in support} (1 - op(g))`.
pub fn project_module(sg: &InverseSemigroup, p: Character, ops: &[Array2<c64>]) -> Array2<c64> {
    let dim = ops.first().map(|m| m.dim().0).unwrap_or(0);
    let mut out = linalg::eye(dim);
    let id = linalg::eye(dim);
    for (i, &e) in sg.idempotents().iter().enumerate() {
        if p.evaluate(sg, e) {
            out = out.dot(&ops[i]);
        } else {
            out = out.dot(&(&id - &ops[i]));
        }
    }
    out
}

/// Check that the supplied operators commute pairwise and are idempotent.
pub fn validate_idempotent_ops(sg: &InverseSemigroup, ops: &[Array2<c64>], tol: f64) -> Result<()> {
    let es = sg.idempotents();
    assert_eq!(ops.len(), es.len(), "one operator per idempotent expected");
    for i in 0..ops.len() {
        let sq = ops[i].dot(&ops[i]);
        if linalg::norm_max(&(&sq - &ops[i])) > tol {
            return Err(Error::NonCommutingIdempotentActions { e: es[i], f: es[i] });
        }
        for j in (i + 1)..ops.len() {
            let ab = ops[i].dot(&ops[j]);
            let ba = ops[j].dot(&ops[i]);
            if linalg::norm_max(&(&ab - &ba)) > tol {
                return Err(Error::NonCommutingIdempotentActions { e: es[i], f: es[j] });
            }
        }
    }
    Ok(())
}
