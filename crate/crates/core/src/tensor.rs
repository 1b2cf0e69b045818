//! Internal tensor product of S-equivariant Hilbert bimodules over the middle
//! algebra, the diagonal projection over the spectrum, and its compatible
//! (range) sub-bimodule.

use crate::error::{Error, Result};
use crate::hilbert::{validate_bimodule, HilbertModule, SHilbertBimodule};
use crate::linalg::{self, c64};
use crate::spectrum;
use crate::star_algebra::Tol;
use ndarray::prelude::*;

/// The balanced tensor product E ⊗_B F realized as a quotient of the
/// algebraic tensor space by the null space of the C-valued semi-inner
/// product `<x⊗y, x'⊗y'> = <y, pi_F(<x,x'>_B) y'>_C`.
#[derive(Debug, Clone)]
pub struct InternalTensor {
    pub left_dim: usize,
    pub right_dim: usize,
    /// orthonormal columns: quotient basis embedded in the algebraic tensor
    pub q: Array2<c64>,
    /// orthonormal basis of the null space of the semi-inner product
    pub null: Array2<c64>,
    /// scalar (trace) Gram of the semi-inner product on the algebraic tensor
    pub gram: Array2<c64>,
    /// the quotient, as a validated bimodule over (A, C)
    pub module: SHilbertBimodule,
}

impl InternalTensor {
    pub fn big_dim(&self) -> usize {
        self.left_dim * self.right_dim
    }

    /// Quotient coordinates of a vector of the algebraic tensor space.
    pub fn to_quotient(&self, x: &Array1<c64>) -> Array1<c64> {
        linalg::dagger(&self.q).dot(x)
    }

    /// Quotient coordinates of a simple tensor xi ⊗ eta.
    pub fn simple_tensor(&self, xi: &Array1<c64>, eta: &Array1<c64>) -> Array1<c64> {
        let n = self.right_dim;
        let mut big: Array1<c64> = Array1::zeros(self.big_dim());
        for i in 0..self.left_dim {
            for k in 0..n {
                big[i * n + k] = xi[i] * eta[k];
            }
        }
        self.to_quotient(&big)
    }

    /// Push an operator of the algebraic tensor space down to the quotient,
    /// after verifying that it preserves the null space.
    pub fn induce(&self, t: &Array2<c64>, tol: &Tol) -> Result<Array2<c64>> {
        let scale = linalg::norm_max(&self.gram).max(1.0) * linalg::norm_max(t).max(1.0);
        if self.null.dim().1 > 0 {
            let leak = self.gram.dot(t).dot(&self.null);
            let r = linalg::norm_max(&leak);
            if r > tol.hom * scale {
                return Err(Error::DoesNotDescend { residual: r });
            }
        }
        Ok(linalg::dagger(&self.q).dot(&t.dot(&self.q)))
    }
}

/// Inner products of an algebraic tensor basis, as C-valued vectors indexed
/// by pairs of big indices.
fn big_inner(e: &SHilbertBimodule, f: &SHilbertBimodule) -> Vec<Array1<c64>> {
    let m = e.dim();
    let n = f.dim();
    let dc = f.base.algebra.dim();
    let big = m * n;
    let mut out = vec![Array1::zeros(dc); big * big];
    for i in 0..m {
        for j in 0..m {
            let w = f.pi_op(e.base.inner_basis(i, j));
            for k in 0..n {
                for l in 0..n {
                    let mut v: Array1<c64> = Array1::zeros(dc);
                    for lp in 0..n {
                        let c = w[[lp, l]];
                        if c.norm() > 0.0 {
                            v = v + f.base.inner_basis(k, lp).mapv(|z| z * c);
                        }
                    }
                    out[(i * n + k) * big + (j * n + l)] = v;
                }
            }
        }
    }
    out
}

/// Conjugate an indexed family of C-valued inner products by a (big × r)
/// coordinate map: ip'(a,b) = sum conj(q[x,a]) q[y,b] ip(x,y), done one
/// C-coordinate at a time.
fn conjugate_inner(ip: &[Array1<c64>], big: usize, dc: usize, q: &Array2<c64>) -> Vec<Array1<c64>> {
    let r = q.dim().1;
    let qd = linalg::dagger(q);
    let mut out = vec![Array1::zeros(dc); r * r];
    for c in 0..dc {
        let w = Array2::from_shape_fn((big, big), |(x, y)| ip[x * big + y][c]);
        let m = qd.dot(&w).dot(q);
        for a in 0..r {
            for b in 0..r {
                out[a * r + b][c] = m[[a, b]];
            }
        }
    }
    out
}

/// Build the internal tensor product of `e` (over A,B) and `f` (over B,C).
pub fn internal_tensor(
    e: &SHilbertBimodule,
    f: &SHilbertBimodule,
    tol: &Tol,
) -> Result<InternalTensor> {
    let bad = |axiom: &'static str, witness: String, residual: f64| Error::BimoduleAxiom {
        axiom,
        witness,
        residual,
    };
    // the middle algebra and its S-action must match
    if e.base.algebra.sizes != f.left.sizes {
        return Err(Error::Input("middle algebras of the tensor factors differ".into()));
    }
    for s in 0..e.sg().order() {
        let r = linalg::norm_max(&(e.act_b.op(s) - f.act_a.op(s)));
        if r > tol.axiom {
            return Err(bad("middle S-actions agree", format!("s={s}"), r));
        }
    }
    let m = e.dim();
    let n = f.dim();
    let big = m * n;
    let dc = f.base.algebra.dim();
    let ip_big = big_inner(e, f);
    let gram = Array2::from_shape_fn((big, big), |(x, y)| {
        f.base.algebra.trace(&ip_big[x * big + y])
    });
    let hscale = linalg::norm_max(&gram).max(1.0);

    // quotient and null bases, one parity sector at a time
    let parity_big: Vec<u8> =
        (0..big).map(|x| (e.base.parity[x / n] + f.base.parity[x % n]) % 2).collect();
    let mut q_cols: Vec<(Array1<c64>, u8)> = Vec::new();
    let mut n_cols: Vec<Array1<c64>> = Vec::new();
    for p in 0..2u8 {
        let idx: Vec<usize> = (0..big).filter(|&x| parity_big[x] == p).collect();
        if idx.is_empty() {
            continue;
        }
        let sub = Array2::from_shape_fn((idx.len(), idx.len()), |(a, b)| gram[[idx[a], idx[b]]]);
        let (vals, vecs) = linalg::herm_eig(&sub);
        for (k, &v) in vals.iter().enumerate() {
            if v < -tol.rank * hscale {
                return Err(bad("tensor Gram positive", format!("sector {p}"), -v));
            }
            let mut col: Array1<c64> = Array1::zeros(big);
            for (a, &x) in idx.iter().enumerate() {
                col[x] = vecs[[a, k]];
            }
            if v > tol.rank * hscale {
                q_cols.push((col, p));
            } else {
                n_cols.push(col);
            }
        }
    }
    let r = q_cols.len();
    let q = Array2::from_shape_fn((big, r), |(x, a)| q_cols[a].0[x]);
    let parity: Vec<u8> = q_cols.iter().map(|(_, p)| *p).collect();
    let null = Array2::from_shape_fn((big, n_cols.len()), |(x, a)| n_cols[a][x]);

    // balancing: (xb) ⊗ y − x ⊗ pi(b) y is null for every middle element
    let db = e.base.algebra.dim();
    for bidx in 0..db {
        let ek = crate::star_algebra::unit_vec(db, bidx);
        let bal =
            linalg::kron(&e.base.op(&ek), &linalg::eye(n)) - linalg::kron(&linalg::eye(m), &f.pi_op(&ek));
        let r = linalg::norm_max(&gram.dot(&bal));
        if r > tol.hom * hscale {
            return Err(bad("tensor is balanced over the middle", format!("b={bidx}"), r));
        }
    }

    let stub = InternalTensor {
        left_dim: m,
        right_dim: n,
        q,
        null,
        gram,
        // placeholder; replaced below once the induced structure exists
        module: e.clone(),
    };

    // induced structure on the quotient
    let mut u = Vec::with_capacity(e.sg().order());
    for s in 0..e.sg().order() {
        u.push(stub.induce(&linalg::kron(&e.u[s], &f.u[s]), tol)?);
    }
    let da = e.left.dim();
    let mut pi = Vec::with_capacity(da);
    for a in 0..da {
        let ea = crate::star_algebra::unit_vec(da, a);
        pi.push(stub.induce(&linalg::kron(&e.pi_op(&ea), &linalg::eye(n)), tol)?);
    }
    let mut act = Vec::with_capacity(dc);
    for k in 0..dc {
        let ek = crate::star_algebra::unit_vec(dc, k);
        act.push(stub.induce(&linalg::kron(&linalg::eye(m), &f.base.op(&ek)), tol)?);
    }
    let ip = conjugate_inner(&ip_big, big, dc, &stub.q);
    let base = HilbertModule { algebra: f.base.algebra.clone(), dim: r, parity, act, ip };
    let module = validate_bimodule(
        base,
        e.left.clone(),
        pi,
        u,
        e.act_a.clone(),
        f.act_b.clone(),
        tol,
    )?;
    Ok(InternalTensor { module, ..stub })
}

/// The diagonal projection over the spectrum, on the quotient:
/// D = sum_P P^E ⊗ P^F pushed through the quotient map.
pub fn diagonal_projection(
    e: &SHilbertBimodule,
    f: &SHilbertBimodule,
    t: &InternalTensor,
    tol: &Tol,
) -> Result<Array2<c64>> {
    let x = spectrum::spectrum(e.sg());
    let mut big = linalg::zeros(t.big_dim(), t.big_dim());
    for &p in &x {
        big = big + linalg::kron(&e.char_projection(p), &f.char_projection(p));
    }
    let d = t.induce(&big, tol)?;
    let r = linalg::norm_max(&(&d.dot(&d) - &d));
    if r > tol.hom {
        return Err(Error::BimoduleAxiom {
            axiom: "diagonal projection idempotent",
            witness: String::new(),
            residual: r,
        });
    }
    // middle compatibility: D(u_e x ⊗ y) = D(x ⊗ u_e y)
    for &idem in e.sg().idempotents() {
        let lhs = t.induce(&linalg::kron(&e.u[idem], &linalg::eye(t.right_dim)), tol)?;
        let rhs = t.induce(&linalg::kron(&linalg::eye(t.left_dim), &f.u[idem]), tol)?;
        let r = linalg::norm_max(&(&d.dot(&lhs) - &d.dot(&rhs)));
        if r > tol.hom {
            return Err(Error::BimoduleAxiom {
                axiom: "diagonal projection balances idempotents",
                witness: format!("e={idem}"),
                residual: r,
            });
        }
    }
    Ok(d)
}

/// The range of the diagonal projection inside the internal tensor product,
/// with its restricted (again validated) bimodule structure.
#[derive(Debug, Clone)]
pub struct CompatibleTensor {
    pub tensor: InternalTensor,
    /// the diagonal projection on the quotient
    pub d: Array2<c64>,
    /// orthonormal columns: range of `d` inside the quotient
    pub c: Array2<c64>,
    pub module: SHilbertBimodule,
}

impl CompatibleTensor {
    pub fn dim(&self) -> usize {
        self.c.dim().1
    }

    /// Coordinates of a quotient vector in the compatible range.
    pub fn compress(&self, x: &Array1<c64>) -> Array1<c64> {
        linalg::dagger(&self.c).dot(x)
    }

    /// Compatible-range coordinates of D(xi ⊗ eta).
    pub fn simple(&self, xi: &Array1<c64>, eta: &Array1<c64>) -> Array1<c64> {
        self.compress(&self.d.dot(&self.tensor.simple_tensor(xi, eta)))
    }

    /// Restrict a quotient operator to the range of `d`, verifying that the
    /// range is invariant.
    pub fn restrict(&self, t: &Array2<c64>, tol: &Tol) -> Result<Array2<c64>> {
        let tc = t.dot(&self.c);
        let inside = self.c.dot(&linalg::dagger(&self.c)).dot(&tc);
        let r = linalg::norm_max(&(&tc - &inside));
        if r > tol.hom * linalg::norm_max(t).max(1.0) {
            return Err(Error::DoesNotDescend { residual: r });
        }
        Ok(linalg::dagger(&self.c).dot(&tc))
    }
}

/// Build the compatible tensor product: internal tensor, diagonal projection,
/// and the restricted bimodule on its range.
pub fn compatible_tensor(
    e: &SHilbertBimodule,
    f: &SHilbertBimodule,
    tol: &Tol,
) -> Result<CompatibleTensor> {
    let tensor = internal_tensor(e, f, tol)?;
    let d = diagonal_projection(e, f, &tensor, tol)?;
    let r = tensor.module.dim();
    // range basis, per parity sector of the quotient
    let mut cols: Vec<(Array1<c64>, u8)> = Vec::new();
    for p in 0..2u8 {
        let idx: Vec<usize> = (0..r).filter(|&a| tensor.module.base.parity[a] == p).collect();
        if idx.is_empty() {
            continue;
        }
        let sub = Array2::from_shape_fn((idx.len(), idx.len()), |(a, b)| d[[idx[a], idx[b]]]);
        let cs = linalg::column_space(&sub, tol.rank);
        for k in 0..cs.dim().1 {
            let mut col: Array1<c64> = Array1::zeros(r);
            for (a, &x) in idx.iter().enumerate() {
                col[x] = cs[[a, k]];
            }
            cols.push((col, p));
        }
    }
    let kdim = cols.len();
    let c = Array2::from_shape_fn((r, kdim), |(x, a)| cols[a].0[x]);
    let parity: Vec<u8> = cols.iter().map(|(_, p)| *p).collect();
    let stub = CompatibleTensor { tensor, d, c, module: e.clone() };

    let sg_n = e.sg().order();
    let mut u = Vec::with_capacity(sg_n);
    for s in 0..sg_n {
        u.push(stub.restrict(&stub.tensor.module.u[s], tol)?);
    }
    let da = e.left.dim();
    let mut pi = Vec::with_capacity(da);
    for a in 0..da {
        let ea = crate::star_algebra::unit_vec(da, a);
        pi.push(stub.restrict(&stub.tensor.module.pi_op(&ea), tol)?);
    }
    let dc = f.base.algebra.dim();
    let mut act = Vec::with_capacity(dc);
    for k in 0..dc {
        let ek = crate::star_algebra::unit_vec(dc, k);
        act.push(stub.restrict(&stub.tensor.module.base.op(&ek), tol)?);
    }
    let ip = conjugate_inner(&stub.tensor.module.base.ip, r, dc, &stub.c);
    let base = HilbertModule { algebra: f.base.algebra.clone(), dim: kdim, parity, act, ip };
    let module = validate_bimodule(
        base,
        e.left.clone(),
        pi,
        u,
        e.act_a.clone(),
        f.act_b.clone(),
        tol,
    )?;
    Ok(CompatibleTensor { module, ..stub })
}
