//! JSON serialization of actions and Kasparov cycles. Complex scalars are
//! written as `[re, im]` pairs and matrices row-major, so files round-trip
//! exactly and stay diffable.

use crate::action::{validate_s_action, SAlgebraAction};
use crate::cycle::{validate_cycle, KasparovCycle};
use crate::error::{Error, Result};
use crate::hilbert::{validate_bimodule, HilbertModule, SHilbertBimodule};
use crate::linalg::c64;
use crate::semigroup::{CayleyJson, InverseSemigroup};
use crate::star_algebra::{CStarBlockAlgebra, Tol};
use ndarray::prelude::*;
use serde::{Deserialize, Serialize};

pub type ScalarJson = [f64; 2];
pub type VecJson = Vec<ScalarJson>;
pub type MatJson = Vec<Vec<ScalarJson>>;

pub fn mat_to_json(m: &Array2<c64>) -> MatJson {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[[i, j]].re, m[[i, j]].im]).collect())
        .collect()
}

pub fn mat_from_json(j: &MatJson, rows: usize, cols: usize) -> Result<Array2<c64>> {
    if j.len() != rows || j.iter().any(|r| r.len() != cols) {
        return Err(Error::Input(format!("expected a {rows}x{cols} matrix")));
    }
    Ok(Array2::from_shape_fn((rows, cols), |(i, k)| c64::new(j[i][k][0], j[i][k][1])))
}

pub fn vec_to_json(v: &Array1<c64>) -> VecJson {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn vec_from_json(j: &VecJson, len: usize) -> Result<Array1<c64>> {
    if j.len() != len {
        return Err(Error::Input(format!("expected a vector of length {len}")));
    }
    Ok(Array1::from_iter(j.iter().map(|p| c64::new(p[0], p[1]))))
}

/// An action of an inverse semigroup on a block algebra, as data.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ActionJson {
    pub semigroup: CayleyJson,
    /// matrix block sizes of the coefficient algebra
    pub blocks: Vec<usize>,
    /// one endomorphism matrix per semigroup element, acting on flat
    /// coordinates of the algebra
    pub alpha: Vec<MatJson>,
}

pub fn action_to_json(a: &SAlgebraAction) -> ActionJson {
    ActionJson {
        semigroup: a.sg.to_json(),
        blocks: a.algebra.sizes.clone(),
        alpha: a.alpha.iter().map(mat_to_json).collect(),
    }
}

pub fn action_from_json(j: &ActionJson, tol: &Tol) -> Result<SAlgebraAction> {
    let sg = InverseSemigroup::from_json(&j.semigroup)?;
    if j.blocks.is_empty() || j.blocks.contains(&0) {
        return Err(Error::Input("algebra blocks must be nonempty positive sizes".into()));
    }
    let algebra = CStarBlockAlgebra::new(j.blocks.clone());
    if j.alpha.len() != sg.order() {
        return Err(Error::Input(format!(
            "expected {} endomorphism matrices, got {}",
            sg.order(),
            j.alpha.len()
        )));
    }
    let d = algebra.dim();
    let alpha = j
        .alpha
        .iter()
        .map(|m| mat_from_json(m, d, d))
        .collect::<Result<Vec<_>>>()?;
    validate_s_action(&sg, &algebra, alpha, tol)
}

/// A Kasparov cycle over (C, A): the action defining A and alpha, then the
/// carrier with its grading, the A-valued inner product, the right action of
/// A, the semigroup representation U, and the odd operator T.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CycleJson {
    pub action: ActionJson,
    pub dim: usize,
    /// 0 = even, 1 = odd, one entry per carrier basis vector
    pub parity: Vec<u8>,
    /// right action of A: one carrier matrix per flat coordinate of A
    pub act: Vec<MatJson>,
    /// A-valued inner products of basis vectors, row-major over (i, j)
    pub ip: Vec<VecJson>,
    /// one carrier matrix per semigroup element
    pub u: Vec<MatJson>,
    pub t: MatJson,
}

pub fn cycle_to_json(c: &KasparovCycle, action: &SAlgebraAction) -> CycleJson {
    let bm = &c.bimodule;
    CycleJson {
        action: action_to_json(action),
        dim: bm.dim(),
        parity: bm.base.parity.clone(),
        act: bm.base.act.iter().map(mat_to_json).collect(),
        ip: (0..bm.dim())
            .flat_map(|i| (0..bm.dim()).map(move |j| (i, j)))
            .map(|(i, j)| vec_to_json(bm.base.inner_basis(i, j)))
            .collect(),
        u: bm.u.iter().map(mat_to_json).collect(),
        t: mat_to_json(&c.t),
    }
}

pub fn cycle_from_json(j: &CycleJson, tol: &Tol) -> Result<(KasparovCycle, SAlgebraAction)> {
    let action = action_from_json(&j.action, tol)?;
    let sg = action.sg.clone();
    let n = j.dim;
    if j.parity.len() != n || j.parity.iter().any(|&p| p > 1) {
        return Err(Error::Input("parity must list one 0/1 entry per basis vector".into()));
    }
    let dc = action.algebra.dim();
    if j.act.len() != dc {
        return Err(Error::Input(format!(
            "expected {dc} right-action matrices (one per flat coordinate of A)"
        )));
    }
    let act = j.act.iter().map(|m| mat_from_json(m, n, n)).collect::<Result<Vec<_>>>()?;
    if j.ip.len() != n * n {
        return Err(Error::Input(format!("expected {} inner-product entries", n * n)));
    }
    let ip = j.ip.iter().map(|v| vec_from_json(v, dc)).collect::<Result<Vec<_>>>()?;
    if j.u.len() != sg.order() {
        return Err(Error::Input(format!(
            "expected {} representation matrices, got {}",
            sg.order(),
            j.u.len()
        )));
    }
    let u = j.u.iter().map(|m| mat_from_json(m, n, n)).collect::<Result<Vec<_>>>()?;
    let t = mat_from_json(&j.t, n, n)?;

    let base = HilbertModule {
        algebra: action.algebra.clone(),
        dim: n,
        parity: j.parity.clone(),
        act,
        ip,
    };
    base.validate(tol)?;
    let scalar = CStarBlockAlgebra::scalar();
    let bm: SHilbertBimodule = validate_bimodule(
        base,
        scalar.clone(),
        vec![crate::linalg::eye(n)],
        u,
        crate::action::trivial_action(&sg, &scalar),
        action.clone(),
        tol,
    )?;
    let cycle = validate_cycle(bm, t, tol)?;
    Ok((cycle, action))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::spectral_action;
    use crate::corpus;

    #[test]
    fn action_round_trips_exactly() {
        let sg = corpus::symmetric_inverse_monoid(2).unwrap();
        let tol = Tol::default();
        let sizes = vec![1; sg.d_classes().len()];
        let act = spectral_action(&sg, &sizes).unwrap();
        let j = action_to_json(&act);
        let s1 = serde_json::to_string(&j).unwrap();
        let back = action_from_json(&j, &tol).unwrap();
        let s2 = serde_json::to_string(&action_to_json(&back)).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn cycle_round_trips_and_validates() {
        let sg = corpus::cyclic_group(2).unwrap();
        let tol = Tol::default();
        let inst = crate::gen::random_instance(&sg, 7, 6).unwrap();
        let act = inst.action.clone();
        let cycle = validate_cycle(inst.module.clone(), inst.t_odd.clone(), &tol).unwrap();
        let j = cycle_to_json(&cycle, &act);
        let s1 = serde_json::to_string(&j).unwrap();
        let (back, act2) = cycle_from_json(&j, &tol).unwrap();
        let s2 = serde_json::to_string(&cycle_to_json(&back, &act2)).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(back.bimodule.dim(), cycle.bimodule.dim());
    }

    #[test]
    fn malformed_matrix_is_an_input_error() {
        let sg = corpus::cyclic_group(2).unwrap();
        let tol = Tol::default();
        let act = spectral_action(&sg, &[1]).unwrap();
        let mut j = action_to_json(&act);
        j.alpha[0][0].pop();
        match action_from_json(&j, &tol) {
            Err(Error::Input(_)) => {}
            other => panic!("expected an input error, got {other:?}"),
        }
    }
}
