//! Actions of a finite inverse semigroup on a block C*-algebra by
//! *-endomorphisms whose idempotent parts are central multipliers.

use crate::error::{Error, Result};
use crate::linalg::{self, c64};
use crate::semigroup::InverseSemigroup;
use crate::spectrum::{self, Translated};
use crate::star_algebra::{unit_vec, CStarBlockAlgebra, Tol};
use ndarray::prelude::*;

/// A validated action `alpha: S -> End(A)`; `alpha[s]` is the matrix of the
/// linear endomorphism on flat coordinates of `algebra`.
#[derive(Debug, Clone)]
pub struct SAlgebraAction {
    pub sg: InverseSemigroup,
    pub algebra: CStarBlockAlgebra,
    pub alpha: Vec<Array2<c64>>,
}

impl SAlgebraAction {
    pub fn op(&self, s: usize) -> &Array2<c64> {
        &self.alpha[s]
    }

    pub fn apply(&self, s: usize, x: &Array1<c64>) -> Array1<c64> {
        self.alpha[s].dot(x)
    }

    /// The central projection `p_e = alpha_e(1)`.
    pub fn p(&self, e: usize) -> Array1<c64> {
        self.alpha[e].dot(&self.algebra.unit())
    }

    /// Which blocks of the algebra are supported by `p_{ss*}`.
    pub fn supported_blocks(&self, s: usize) -> Vec<bool> {
        let e = self.sg.range(s);
        let scalars = self
            .algebra
            .central_scalars(&self.p(e), 1e-8)
            .expect("p_e central by validation");
        scalars.iter().map(|z| (z - c64::new(1.0, 0.0)).norm() < 0.5).collect()
    }

    /// Flat coordinate indices of the corner `p_{ss*} A`.
    pub fn corner_basis(&self, s: usize) -> Vec<usize> {
        let supp = self.supported_blocks(s);
        let mut out = Vec::new();
        let mut off = 0;
        for (b, &n) in self.algebra.sizes.iter().enumerate() {
            if supp[b] {
                out.extend(off..off + n * n);
            }
            off += n * n;
        }
        out
    }
}

/// Validate the action axioms to `tol.axiom` and the derived central-projection
/// structure of the idempotent parts.
pub fn validate_s_action(
    sg: &InverseSemigroup,
    algebra: &CStarBlockAlgebra,
    alpha: Vec<Array2<c64>>,
    tol: &Tol,
) -> Result<SAlgebraAction> {
    let n = sg.order();
    let d = algebra.dim();
    assert_eq!(alpha.len(), n, "one endomorphism matrix per element expected");
    for m in &alpha {
        assert_eq!(m.dim(), (d, d), "endomorphism matrix has wrong shape");
    }

    // alpha_1 = id and alpha_s alpha_t = alpha_{st}
    let unit = sg.unit();
    let r = linalg::norm_max(&(&alpha[unit] - &linalg::eye(d)));
    if r > tol.axiom {
        return Err(Error::NotHomomorphism { s: unit, t: unit, residual: r });
    }
    for s in 0..n {
        for t in 0..n {
            let st = sg.mul(s, t);
            let r = linalg::norm_max(&(&alpha[s].dot(&alpha[t]) - &alpha[st]));
            if r > tol.axiom {
                return Err(Error::NotHomomorphism { s, t, residual: r });
            }
        }
    }
    // *-endomorphism: multiplicative and star-preserving on basis pairs
    for s in 0..n {
        let mut worst = 0.0f64;
        for i in 0..d {
            let ei = unit_vec(d, i);
            let r = linalg::vec_norm_max(
                &(&alpha[s].dot(&algebra.star(&ei)) - &algebra.star(&alpha[s].dot(&ei))),
            );
            worst = worst.max(r);
            for j in 0..d {
                let ej = unit_vec(d, j);
                let lhs = alpha[s].dot(&algebra.mul(&ei, &ej));
                let rhs = algebra.mul(&alpha[s].dot(&ei), &alpha[s].dot(&ej));
                worst = worst.max(linalg::vec_norm_max(&(&lhs - &rhs)));
            }
        }
        if worst > tol.axiom {
            return Err(Error::NotStarMap { s, residual: worst });
        }
    }
    // centrality: alpha_{ss*}(x) y = x alpha_{ss*}(y)
    for s in 0..n {
        let e = sg.mul(s, sg.inv(s));
        let mut worst = 0.0f64;
        for i in 0..d {
            let ei = unit_vec(d, i);
            let aei = alpha[e].dot(&ei);
            for j in 0..d {
                let ej = unit_vec(d, j);
                let lhs = algebra.mul(&aei, &ej);
                let rhs = algebra.mul(&ei, &alpha[e].dot(&ej));
                worst = worst.max(linalg::vec_norm_max(&(&lhs - &rhs)));
            }
        }
        if worst > tol.axiom {
            return Err(Error::CentralityFails { s, residual: worst });
        }
    }
    // derived: p_e is a central 0/1 projection and alpha_e = multiplication by p_e
    let action = SAlgebraAction { sg: sg.clone(), algebra: algebra.clone(), alpha };
    for &e in sg.idempotents() {
        let p = action.p(e);
        let scalars = match algebra.central_scalars(&p, tol.axiom.sqrt()) {
            Some(s) => s,
            None => return Err(Error::NotCentralProjection { e }),
        };
        for z in &scalars {
            if z.norm() > tol.axiom && (z - c64::new(1.0, 0.0)).norm() > tol.axiom {
                return Err(Error::NotCentralProjection { e });
            }
        }
        let lm = algebra.lmul_op(&p);
        if linalg::norm_max(&(&lm - &action.alpha[e])) > tol.axiom.sqrt() {
            return Err(Error::NotCentralProjection { e });
        }
    }
    Ok(action)
}

/// The trivial action `alpha_s = id`.
pub fn trivial_action(sg: &InverseSemigroup, algebra: &CStarBlockAlgebra) -> SAlgebraAction {
    let d = algebra.dim();
    SAlgebraAction {
        sg: sg.clone(),
        algebra: algebra.clone(),
        alpha: (0..sg.order()).map(|_| linalg::eye(d)).collect(),
    }
}

/// The canonical "spectral" action: one matrix block per character of X,
/// block sizes constant on D-classes of anchors, with `alpha_s` carrying the
/// block of `P` identically onto the block of `P_s` (and killing the rest).
///
/// `class_sizes` is indexed like `sg.d_classes()`.
pub fn spectral_action(sg: &InverseSemigroup, class_sizes: &[usize]) -> Result<SAlgebraAction> {
    let classes = sg.d_classes();
    assert_eq!(class_sizes.len(), classes.len(), "one size per D-class expected");
    let x = spectrum::spectrum(sg);
    let class_of = |e: usize| -> usize {
        classes
            .iter()
            .position(|c| c.idempotents.contains(&e))
            .expect("anchor belongs to some D-class")
    };
    let sizes: Vec<usize> = x.iter().map(|p| class_sizes[class_of(p.anchor)]).collect();
    let algebra = CStarBlockAlgebra::new(sizes.clone());
    let d = algebra.dim();
    let block_of_anchor = |a: usize| -> usize {
        x.iter().position(|p| p.anchor == a).expect("character per anchor")
    };
    let mut alpha = Vec::with_capacity(sg.order());
    for s in 0..sg.order() {
        let mut m = linalg::zeros(d, d);
        for (qi, q) in x.iter().enumerate() {
            // target block Q is hit iff anchor(Q) <= ss*; its source is Q_{s*}
            match spectrum::translate_character(sg, *q, sg.inv(s)) {
                Translated::Zero => {}
                Translated::Char(p) => {
                    if !sg.leq(q.anchor, sg.range(s)) {
                        continue;
                    }
                    let pi = block_of_anchor(p.anchor);
                    let n = algebra.sizes[qi];
                    debug_assert_eq!(n, algebra.sizes[pi]);
                    let to = algebra.block_offset(qi);
                    let from = algebra.block_offset(pi);
                    for t in 0..n * n {
                        m[[to + t, from + t]] = c64::new(1.0, 0.0);
                    }
                }
            }
        }
        alpha.push(m);
    }
    validate_s_action(sg, &algebra, alpha, &Tol::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::semigroup::InverseSemigroup;

    fn two_chain() -> InverseSemigroup {
        InverseSemigroup::from_table(vec![vec![0, 1], vec![1, 1]], 0, None).unwrap()
    }

    #[test]
    fn trivial_action_validates() {
        let s = corpus::symmetric_inverse_monoid(2).unwrap();
        let a = CStarBlockAlgebra::new(vec![1, 2]);
        let act = trivial_action(&s, &a);
        let act = validate_s_action(&s, &a, act.alpha, &Tol::default()).unwrap();
        for &e in s.idempotents() {
            assert!(linalg::vec_norm_max(&(&act.p(e) - &a.unit())) < 1e-12);
        }
    }

    #[test]
    fn spectral_action_on_two_chain() {
        let s = two_chain();
        // two D-classes (one per idempotent), both size 1: A = C^2
        let act = spectral_action(&s, &[1, 1]).unwrap();
        assert_eq!(act.algebra.sizes, vec![1, 1]);
        // p_e supports exactly the chi_e block (anchors <= e)
        let supp = act.supported_blocks(1);
        assert_eq!(supp, vec![false, true]);
        assert_eq!(act.corner_basis(1), vec![1]);
    }

    #[test]
    fn spectral_action_on_i2_composes() {
        let s = corpus::symmetric_inverse_monoid(2).unwrap();
        let sizes: Vec<usize> = s.d_classes().iter().map(|_| 1).collect();
        let act = spectral_action(&s, &sizes).unwrap();
        assert_eq!(act.algebra.sizes.len(), 4);
        // exhaustive re-validation happened inside spectral_action already;
        // spot-check that a rank-1 element moves the corresponding block
        for elt in 0..s.order() {
            let e = s.range(elt);
            let supp = act.supported_blocks(elt);
            let on: usize = supp.iter().filter(|&&b| b).count();
            let expect = s.idempotents().iter().filter(|&&f| s.leq(f, e)).count();
            assert_eq!(on, expect);
        }
    }

    #[test]
    fn noncentral_idempotent_action_rejected() {
        // A = C^2, alpha_e(x1,x2) = (x1,x1): a unital *-endomorphism with
        // idempotent square, but not multiplication by a central projection
        let s = two_chain();
        let a = CStarBlockAlgebra::new(vec![1, 1]);
        let mut m = linalg::zeros(2, 2);
        m[[0, 0]] = c64::new(1.0, 0.0);
        m[[1, 0]] = c64::new(1.0, 0.0);
        let err =
            validate_s_action(&s, &a, vec![linalg::eye(2), m], &Tol::default()).unwrap_err();
        match err {
            Error::CentralityFails { .. } | Error::NotCentralProjection { .. } => {}
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn non_homomorphism_rejected() {
        let s = two_chain();
        let a = CStarBlockAlgebra::new(vec![2]);
        // alpha_e = compression to the (1,1) corner: not multiplicative
        let mut m = linalg::zeros(4, 4);
        m[[0, 0]] = c64::new(1.0, 0.0);
        let err =
            validate_s_action(&s, &a, vec![linalg::eye(4), m], &Tol::default()).unwrap_err();
        match err {
            Error::NotHomomorphism { .. } | Error::NotStarMap { .. } => {}
            other => panic!("unexpected error {other:?}"),
        }
    }
}
