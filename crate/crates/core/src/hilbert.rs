//! Finite-dimensional graded Hilbert modules over block C*-algebras, and
//! S-equivariant bimodules with left representation and inner product.

use crate::action::SAlgebraAction;
use crate::error::{Error, Result};
use crate::linalg::{self, c64};
use crate::spectrum::{self, Character};
use crate::star_algebra::{unit_vec, CStarBlockAlgebra, RightBlockModule, Tol};
use ndarray::prelude::*;

/// A graded right Hilbert module over `algebra`. The right action follows the
/// anti-homomorphism convention `op(x) op(y) = op(y x)` (apply y, then x);
/// `ip[i*dim + j]` is the algebra-valued inner product of basis vectors i, j,
/// conjugate-linear in the first slot.
#[derive(Debug, Clone)]
pub struct HilbertModule {
    pub algebra: CStarBlockAlgebra,
    pub dim: usize,
    /// 0 = even, 1 = odd, one entry per basis vector
    pub parity: Vec<u8>,
    pub act: Vec<Array2<c64>>,
    pub ip: Vec<Array1<c64>>,
}

impl HilbertModule {
    pub fn op(&self, x: &Array1<c64>) -> Array2<c64> {
        let mut out = Array2::zeros((self.dim, self.dim));
        for (k, m) in self.act.iter().enumerate() {
            if x[k].norm() > 0.0 {
                out = out + m.mapv(|z| z * x[k]);
            }
        }
        out
    }

    pub fn inner_basis(&self, i: usize, j: usize) -> &Array1<c64> {
        &self.ip[i * self.dim + j]
    }

    pub fn inner(&self, x: &Array1<c64>, y: &Array1<c64>) -> Array1<c64> {
        let mut out = Array1::zeros(self.algebra.dim());
        for i in 0..self.dim {
            for j in 0..self.dim {
                let c = x[i].conj() * y[j];
                if c.norm() > 0.0 {
                    out = out + self.inner_basis(i, j).mapv(|z| z * c);
                }
            }
        }
        out
    }

    /// Scalar inner product through the faithful block trace.
    pub fn scalar_gram(&self) -> Array2<c64> {
        Array2::from_shape_fn((self.dim, self.dim), |(i, j)| {
            self.algebra.trace(self.inner_basis(i, j))
        })
    }

    /// The grading operator (+1 on even, −1 on odd basis vectors).
    pub fn grading(&self) -> Array2<c64> {
        let mut g = linalg::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            g[[i, i]] = c64::new(if self.parity[i] == 0 { 1.0 } else { -1.0 }, 0.0);
        }
        g
    }

    fn axiom(axiom: &'static str, witness: String, residual: f64) -> Error {
        Error::BimoduleAxiom { axiom, witness, residual }
    }

    pub fn validate(&self, tol: &Tol) -> Result<()> {
        let d = self.algebra.dim();
        let m = self.dim;
        assert_eq!(self.act.len(), d);
        assert_eq!(self.ip.len(), m * m);
        assert_eq!(self.parity.len(), m);
        let module = RightBlockModule { dim: m, act: self.act.clone() };
        module.validate(&self.algebra, tol.axiom)?;
        let r = linalg::norm_max(&(&self.op(&self.algebra.unit()) - &linalg::eye(m)));
        if r > tol.axiom {
            return Err(Self::axiom("unit acts as identity", String::new(), r));
        }
        // module-linearity of the inner product: <xi_i, xi_j e_k> = <xi_i,xi_j> e_k
        for k in 0..d {
            let ek = unit_vec(d, k);
            for i in 0..m {
                for j in 0..m {
                    let mut lhs: Array1<c64> = Array1::zeros(d);
                    for l in 0..m {
                        let c = self.act[k][[l, j]];
                        if c.norm() > 0.0 {
                            lhs = lhs + self.inner_basis(i, l).mapv(|z| z * c);
                        }
                    }
                    let rhs = self.algebra.mul(self.inner_basis(i, j), &ek);
                    let r = linalg::vec_norm_max(&(&lhs - &rhs));
                    if r > tol.axiom {
                        return Err(Self::axiom("<x, y b> = <x,y> b", format!("({i},{j},{k})"), r));
                    }
                }
            }
        }
        // hermitian symmetry and grading orthogonality
        for i in 0..m {
            for j in 0..m {
                let r = linalg::vec_norm_max(
                    &(&self.algebra.star(self.inner_basis(i, j)) - self.inner_basis(j, i)),
                );
                if r > tol.axiom {
                    return Err(Self::axiom("<x,y>* = <y,x>", format!("({i},{j})"), r));
                }
                if self.parity[i] != self.parity[j] {
                    let r = linalg::vec_norm_max(self.inner_basis(i, j));
                    if r > tol.axiom {
                        return Err(Self::axiom("graded parts orthogonal", format!("({i},{j})"), r));
                    }
                }
            }
        }
        // positivity per block of the assembled Gram, nondegeneracy via the trace
        for (b, &n) in self.algebra.sizes.iter().enumerate() {
            let mut big = Array2::zeros((m * n, m * n));
            for i in 0..m {
                for j in 0..m {
                    let blocks = self.algebra.to_blocks(self.inner_basis(i, j));
                    for r in 0..n {
                        for c in 0..n {
                            big[[i * n + r, j * n + c]] = blocks[b][[r, c]];
                        }
                    }
                }
            }
            let scale = linalg::norm_max(&big).max(1.0);
            let herm = linalg::norm_max(&(&big - &linalg::dagger(&big)));
            if herm > tol.axiom * scale {
                return Err(Self::axiom("Gram hermitian", format!("block {b}"), herm));
            }
            let (vals, _) = linalg::herm_eig(&big);
            if let Some(&min) = vals.iter().min_by(|a, b| a.partial_cmp(b).unwrap()) {
                if min < -tol.hom * scale {
                    return Err(Self::axiom("Gram positive", format!("block {b}"), -min));
                }
            }
        }
        let g = self.scalar_gram();
        if m > 0 && linalg::rank(&g, tol.rank) != m {
            return Err(Self::axiom("inner product nondegenerate", String::new(), 0.0));
        }
        Ok(())
    }

    /// The unique adjoint of `t` with respect to the algebra-valued inner
    /// product, if `t` is adjointable.
    pub fn adjoint(&self, t: &Array2<c64>, tol: &Tol) -> Result<Array2<c64>> {
        let m = self.dim;
        let d = self.algebra.dim();
        // unknowns: entries of t*; equations over (i,j) pairs valued in A:
        //   sum_l conj(t[l,i]) ip[l,j] = sum_l t*[l,j] ip[i,l]
        let mut sys = Array2::zeros((m * m * d, m * m));
        let mut rhs = Array1::zeros(m * m * d);
        for i in 0..m {
            for j in 0..m {
                let row0 = (i * m + j) * d;
                for l in 0..m {
                    let v = self.inner_basis(i, l);
                    for k in 0..d {
                        sys[[row0 + k, l * m + j]] += v[k];
                    }
                    let c = t[[l, i]].conj();
                    if c.norm() > 0.0 {
                        let w = self.inner_basis(l, j);
                        for k in 0..d {
                            rhs[row0 + k] += c * w[k];
                        }
                    }
                }
            }
        }
        let sol = linalg::pinv(&sys, tol.rank).dot(&rhs);
        let resid = linalg::vec_norm_max(&(&sys.dot(&sol) - &rhs));
        if resid > tol.hom {
            return Err(Error::NotAdjointable { residual: resid });
        }
        Ok(Array2::from_shape_fn((m, m), |(l, j)| sol[l * m + j]))
    }
}

/// An S-equivariant A,B-bimodule: Hilbert module over B with a left
/// representation of A and a semigroup of operators U.
#[derive(Debug, Clone)]
pub struct SHilbertBimodule {
    pub base: HilbertModule,
    pub left: CStarBlockAlgebra,
    /// representation matrices per flat basis element of `left`
    pub pi: Vec<Array2<c64>>,
    /// one operator per semigroup element
    pub u: Vec<Array2<c64>>,
    pub act_a: SAlgebraAction,
    pub act_b: SAlgebraAction,
    pub compat: bool,
}

impl SHilbertBimodule {
    pub fn sg(&self) -> &crate::semigroup::InverseSemigroup {
        &self.act_b.sg
    }

    pub fn dim(&self) -> usize {
        self.base.dim
    }

    pub fn pi_op(&self, a: &Array1<c64>) -> Array2<c64> {
        let m = self.base.dim;
        let mut out = Array2::zeros((m, m));
        for (k, p) in self.pi.iter().enumerate() {
            if a[k].norm() > 0.0 {
                out = out + p.mapv(|z| z * a[k]);
            }
        }
        out
    }

    /// The idempotent operators, ordered like `sg().idempotents()`.
    pub fn idempotent_ops(&self) -> Vec<Array2<c64>> {
        self.sg().idempotents().iter().map(|&e| self.u[e].clone()).collect()
    }

    /// The operator of a character's standard-form projection.
    pub fn char_projection(&self, p: Character) -> Array2<c64> {
        spectrum::project_module(self.sg(), p, &self.idempotent_ops())
    }

    /// `Σ_P P = 1` and `P Q = 0` for distinct characters; a sanity check used
    /// by the validators and tests.
    pub fn resolution_residual(&self) -> f64 {
        let m = self.base.dim;
        let x = spectrum::spectrum(self.sg());
        let projections: Vec<Array2<c64>> = x.iter().map(|&p| self.char_projection(p)).collect();
        let mut total = linalg::zeros(m, m);
        let mut worst = 0.0f64;
        for (i, p) in projections.iter().enumerate() {
            total += p;
            for (j, q) in projections.iter().enumerate() {
                if i != j {
                    worst = worst.max(linalg::norm_max(&p.dot(q)));
                }
            }
        }
        worst.max(linalg::norm_max(&(&total - &linalg::eye(m))))
    }
}

fn check_parity_preserving(parity: &[u8], m: &Array2<c64>) -> f64 {
    let mut worst = 0.0f64;
    for (i, &pi) in parity.iter().enumerate() {
        for (j, &pj) in parity.iter().enumerate() {
            if pi != pj {
                worst = worst.max(m[[i, j]].norm());
            }
        }
    }
    worst
}

/// Validate all bimodule axioms to `tol.axiom` and compute the compat flag.
#[allow(clippy::too_many_arguments)]
pub fn validate_bimodule(
    base: HilbertModule,
    left: CStarBlockAlgebra,
    pi: Vec<Array2<c64>>,
    u: Vec<Array2<c64>>,
    act_a: SAlgebraAction,
    act_b: SAlgebraAction,
    tol: &Tol,
) -> Result<SHilbertBimodule> {
    let sg = act_b.sg.clone();
    assert_eq!(act_a.sg.order(), sg.order(), "A- and B-side actions share the semigroup");
    assert!(act_b.algebra.star_isomorphic(&base.algebra) && act_b.algebra.sizes == base.algebra.sizes);
    assert_eq!(pi.len(), left.dim());
    assert_eq!(u.len(), sg.order());
    base.validate(tol)?;
    let m = base.dim;
    let axiom = |a: &'static str, w: String, r: f64| Error::BimoduleAxiom { axiom: a, witness: w, residual: r };

    let bm = SHilbertBimodule { base, left, pi, u, act_a, act_b, compat: false };

    // U is a unital semigroup of operators
    let r = linalg::norm_max(&(&bm.u[sg.unit()] - &linalg::eye(m)));
    if r > tol.axiom {
        return Err(axiom("U_1 = id", String::new(), r));
    }
    for s in 0..sg.order() {
        for t in 0..sg.order() {
            let r = linalg::norm_max(&(&bm.u[s].dot(&bm.u[t]) - &bm.u[sg.mul(s, t)]));
            if r > tol.axiom {
                return Err(axiom("U_s U_t = U_st", format!("({s},{t})"), r));
            }
        }
    }
    // inner-product covariance <U_s x, y> = s(<x, U_s* y>)
    for s in 0..sg.order() {
        let si = sg.inv(s);
        let mut worst = 0.0f64;
        for i in 0..m {
            let ui = bm.u[s].column(i).to_owned();
            for j in 0..m {
                let lhs = bm.base.inner(&ui, &unit_vec(m, j));
                let usj = bm.u[si].column(j).to_owned();
                let rhs = bm.act_b.apply(s, &bm.base.inner(&unit_vec(m, i), &usj));
                worst = worst.max(linalg::vec_norm_max(&(&lhs - &rhs)));
            }
        }
        if worst > tol.hom {
            return Err(axiom("<U_s x, y> = s(<x, U_s* y>)", format!("s={s}"), worst));
        }
    }
    // U_{ss*} self-adjoint: <U_e x, y> = <x, U_e y> (follows from covariance
    // with s idempotent, but checked directly for a sharper witness)
    for &e in sg.idempotents() {
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                let uei = bm.u[e].column(i).to_owned();
                let uej = bm.u[e].column(j).to_owned();
                let lhs = bm.base.inner(&uei, &unit_vec(m, j));
                let rhs = bm.base.inner(&unit_vec(m, i), &uej);
                worst = worst.max(linalg::vec_norm_max(&(&lhs - &rhs)));
            }
        }
        if worst > tol.hom {
            return Err(axiom("U_e self-adjoint", format!("e={e}"), worst));
        }
    }
    // covariance with the right action: U_s op(b) = op(s(b)) U_s
    let bd = bm.act_b.algebra.dim();
    for s in 0..sg.order() {
        let mut worst = 0.0f64;
        for k in 0..bd {
            let ek = unit_vec(bd, k);
            let lhs = bm.u[s].dot(&bm.base.op(&ek));
            let rhs = bm.base.op(&bm.act_b.apply(s, &ek)).dot(&bm.u[s]);
            worst = worst.max(linalg::norm_max(&(&lhs - &rhs)));
        }
        if worst > tol.hom {
            return Err(axiom("U_s(x b) = U_s(x) s(b)", format!("s={s}"), worst));
        }
    }
    // pi is a grading-preserving *-homomorphism by adjointable operators
    let ad = bm.left.dim();
    for x in 0..ad {
        let ex = unit_vec(ad, x);
        for y in 0..ad {
            let ey = unit_vec(ad, y);
            let lhs = bm.pi_op(&ex).dot(&bm.pi_op(&ey));
            let rhs = bm.pi_op(&bm.left.mul(&ex, &ey));
            let r = linalg::norm_max(&(&lhs - &rhs));
            if r > tol.axiom {
                return Err(axiom("pi multiplicative", format!("({x},{y})"), r));
            }
        }
        // adjoint of pi(a) is pi(a*)
        let pa = bm.pi_op(&ex);
        let pastar = bm.pi_op(&bm.left.star(&ex));
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                let lhs = bm.base.inner(&pa.column(i).to_owned(), &unit_vec(m, j));
                let rhs = bm.base.inner(&unit_vec(m, i), &pastar.column(j).to_owned());
                worst = worst.max(linalg::vec_norm_max(&(&lhs - &rhs)));
            }
        }
        if worst > tol.hom {
            return Err(axiom("pi(a)* = pi(a*)", format!("a={x}"), worst));
        }
        // B-linearity (adjointable operators are module maps)
        let mut worst = 0.0f64;
        for k in 0..bd {
            let opk = bm.base.op(&unit_vec(bd, k));
            worst = worst.max(linalg::norm_max(&(&pa.dot(&opk) - &opk.dot(&pa))));
        }
        if worst > tol.hom {
            return Err(axiom("pi commutes with the right action", format!("a={x}"), worst));
        }
    }
    // equivariance of pi
    for s in 0..sg.order() {
        let e = sg.mul(s, sg.inv(s));
        let ue = &bm.u[e];
        let mut worst = 0.0f64;
        for x in 0..ad {
            let ex = unit_vec(ad, x);
            let lhs = bm.u[s].dot(&bm.pi_op(&ex)).dot(&bm.u[sg.inv(s)]);
            let rhs = bm.pi_op(&bm.act_a.apply(s, &ex)).dot(ue);
            worst = worst.max(linalg::norm_max(&(&lhs - &rhs)));
            let comm = ue.dot(&bm.pi_op(&ex)) - bm.pi_op(&ex).dot(ue);
            worst = worst.max(linalg::norm_max(&comm));
        }
        if worst > tol.hom {
            return Err(axiom("U_s pi(a) U_s* = pi(s(a)) U_s U_s*", format!("s={s}"), worst));
        }
    }
    // grading
    for s in 0..sg.order() {
        let r = check_parity_preserving(&bm.base.parity, &bm.u[s]);
        if r > tol.axiom {
            return Err(axiom("U grading-preserving", format!("s={s}"), r));
        }
    }
    for x in 0..ad {
        let r = check_parity_preserving(&bm.base.parity, &bm.pi_op(&unit_vec(ad, x)));
        if r > tol.axiom {
            return Err(axiom("pi grading-preserving", format!("a={x}"), r));
        }
    }
    for k in 0..bd {
        let r = check_parity_preserving(&bm.base.parity, &bm.base.op(&unit_vec(bd, k)));
        if r > tol.axiom {
            return Err(axiom("right action grading-preserving", format!("b={k}"), r));
        }
    }

    // compat flag: e(a) x = a U_e(x) and U_e(x) b = x e(b)
    let mut compat = true;
    'outer: for &e in sg.idempotents() {
        for x in 0..ad {
            let ex = unit_vec(ad, x);
            let lhs = bm.pi_op(&bm.act_a.apply(e, &ex));
            let rhs = bm.pi_op(&ex).dot(&bm.u[e]);
            if linalg::norm_max(&(&lhs - &rhs)) > tol.hom {
                compat = false;
                break 'outer;
            }
        }
        for k in 0..bd {
            let ek = unit_vec(bd, k);
            let lhs = bm.base.op(&ek).dot(&bm.u[e]);
            let rhs = bm.base.op(&bm.act_b.apply(e, &ek));
            if linalg::norm_max(&(&lhs - &rhs)) > tol.hom {
                compat = false;
                break 'outer;
            }
        }
    }
    let mut bm = bm;
    bm.compat = compat;
    Ok(bm)
}

/// Check that a linear map is a strict morphism of bimodules: it intertwines
/// grading, U, pi, the right action, and the inner products.
pub fn morphism_residual(src: &SHilbertBimodule, dst: &SHilbertBimodule, m: &Array2<c64>) -> f64 {
    let sg = src.sg();
    let mut worst = 0.0f64;
    for s in 0..sg.order() {
        worst = worst.max(linalg::norm_max(&(&m.dot(&src.u[s]) - &dst.u[s].dot(m))));
    }
    let ad = src.left.dim();
    for x in 0..ad {
        let ex = unit_vec(ad, x);
        worst = worst
            .max(linalg::norm_max(&(&m.dot(&src.pi_op(&ex)) - &dst.pi_op(&ex).dot(m))));
    }
    let bd = src.base.algebra.dim();
    for k in 0..bd {
        let ek = unit_vec(bd, k);
        worst = worst
            .max(linalg::norm_max(&(&m.dot(&src.base.op(&ek)) - &dst.base.op(&ek).dot(m))));
    }
    for i in 0..src.dim() {
        for j in 0..src.dim() {
            let mi = m.column(i).to_owned();
            let mj = m.column(j).to_owned();
            let lhs = dst.base.inner(&mi, &mj);
            worst = worst.max(linalg::vec_norm_max(&(&lhs - src.base.inner_basis(i, j))));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::trivial_action;
    use crate::corpus;

    /// B as a right module over itself: op = right multiplication,
    /// ip(x,y) = x* y, U_s = alpha_s, pi = left multiplication by B.
    fn regular_bimodule(act: &SAlgebraAction) -> SHilbertBimodule {
        let b = &act.algebra;
        let d = b.dim();
        let acts: Vec<Array2<c64>> = (0..d).map(|k| b.rmul_op(&unit_vec(d, k))).collect();
        let mut ip = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                ip.push(b.mul(&b.star(&unit_vec(d, i)), &unit_vec(d, j)));
            }
        }
        let base = HilbertModule {
            algebra: b.clone(),
            dim: d,
            parity: vec![0; d],
            act: acts,
            ip,
        };
        let pi: Vec<Array2<c64>> = (0..d).map(|k| b.lmul_op(&unit_vec(d, k))).collect();
        let u: Vec<Array2<c64>> = act.alpha.clone();
        validate_bimodule(base, b.clone(), pi, u, act.clone(), act.clone(), &Tol::default())
            .unwrap()
    }

    #[test]
    fn regular_module_is_compatible() {
        let s = corpus::symmetric_inverse_monoid(2).unwrap();
        let act = crate::action::spectral_action(&s, &[1, 1, 1]).unwrap();
        let bm = regular_bimodule(&act);
        assert!(bm.compat);
        assert!(bm.resolution_residual() < 1e-10);
    }

    #[test]
    fn trivial_group_regular_module() {
        let s = corpus::cyclic_group(2).unwrap();
        let b = CStarBlockAlgebra::new(vec![1, 1]);
        let act = trivial_action(&s, &b);
        let bm = regular_bimodule(&act);
        assert!(bm.compat);
    }

    #[test]
    fn adjoint_of_identity_and_projection() {
        let s = corpus::symmetric_inverse_monoid(1).unwrap();
        let act = crate::action::spectral_action(&s, &[1, 1]).unwrap();
        let bm = regular_bimodule(&act);
        let tol = Tol::default();
        let m = bm.dim();
        let id = linalg::eye(m);
        let adj = bm.base.adjoint(&id, &tol).unwrap();
        assert!(linalg::norm_max(&(&adj - &id)) < 1e-9);
        let zero = s.idempotents().iter().copied().find(|&e| e != s.unit()).unwrap();
        let ue = bm.u[zero].clone();
        let adj = bm.base.adjoint(&ue, &tol).unwrap();
        assert!(linalg::norm_max(&(&adj - &ue)) < 1e-9);
    }

    #[test]
    fn non_module_map_is_not_adjointable() {
        // B = C^2 as a module over itself; the coordinate swap is linear but
        // not B-linear, hence not adjointable
        let s = corpus::symmetric_inverse_monoid(1).unwrap();
        let act = crate::action::spectral_action(&s, &[1, 1]).unwrap();
        let bm = regular_bimodule(&act);
        let mut swap = linalg::zeros(2, 2);
        swap[[0, 1]] = c64::new(1.0, 0.0);
        swap[[1, 0]] = c64::new(1.0, 0.0);
        assert!(matches!(
            bm.base.adjoint(&swap, &Tol::default()),
            Err(Error::NotAdjointable { .. })
        ));
    }

    #[test]
    fn broken_projection_rejected() {
        // tamper with U_e so it is no longer idempotent/self-adjoint
        let s = corpus::symmetric_inverse_monoid(1).unwrap();
        let act = crate::action::spectral_action(&s, &[1, 1]).unwrap();
        let bm = regular_bimodule(&act);
        let zero = s.idempotents().iter().copied().find(|&e| e != s.unit()).unwrap();
        let mut u = bm.u.clone();
        u[zero] = linalg::eye(bm.dim()).mapv(|z| z * c64::new(0.5, 0.0));
        let err = validate_bimodule(
            bm.base.clone(),
            bm.left.clone(),
            bm.pi.clone(),
            u,
            bm.act_a.clone(),
            bm.act_b.clone(),
            &Tol::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::BimoduleAxiom { .. }));
    }
}
