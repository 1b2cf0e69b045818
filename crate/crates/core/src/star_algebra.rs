//! Finite-dimensional complex *-algebras by structure constants, their
//! radical, C*-envelope, and K0 bookkeeping for block algebras.

use crate::error::{Error, Result};
use crate::linalg::{self, c64};
use ndarray::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Numerical tolerances used throughout. Hard failure beats silent drift:
/// integer quantities must round within `int` or the operation errs.
#[derive(Debug, Clone, Copy)]
pub struct Tol {
    /// relative eigenvalue-gap threshold for clustering decisions
    pub eig_gap: f64,
    /// integer rounding tolerance for block sizes and multiplicities
    pub int: f64,
    /// axiom validation tolerance
    pub axiom: f64,
    /// *-homomorphism residual tolerance on envelope quotient maps
    pub hom: f64,
    /// rank / null-space cutoff
    pub rank: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol { eig_gap: 1e-9, int: 1e-6, axiom: 1e-10, hom: 1e-8, rank: 1e-9 }
    }
}

/// A finite-dimensional complex algebra with conjugate-linear involution,
/// given by left-multiplication matrices on a fixed basis.
#[derive(Debug, Clone)]
pub struct StarAlgebra {
    dim: usize,
    labels: Vec<String>,
    /// left_mult[i] * y = e_i * y in coordinates
    left_mult: Vec<Array2<c64>>,
    /// star(x) = star_mat . conj(x)
    star_mat: Array2<c64>,
    unit: Array1<c64>,
}

impl StarAlgebra {
    pub fn new(
        left_mult: Vec<Array2<c64>>,
        star_mat: Array2<c64>,
        unit: Array1<c64>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let dim = left_mult.len();
        let labels = labels.unwrap_or_else(|| (0..dim).map(|i| format!("b{i}")).collect());
        let alg = StarAlgebra { dim, labels, left_mult, star_mat, unit };
        alg.validate(1e-8)?;
        Ok(alg)
    }

    pub fn new_unchecked(
        left_mult: Vec<Array2<c64>>,
        star_mat: Array2<c64>,
        unit: Array1<c64>,
        labels: Option<Vec<String>>,
    ) -> Self {
        let dim = left_mult.len();
        let labels = labels.unwrap_or_else(|| (0..dim).map(|i| format!("b{i}")).collect());
        StarAlgebra { dim, labels, left_mult, star_mat, unit }
    }

    /// Build from a basis-level product and star map, then validate.
    pub fn from_structure<M, S>(
        dim: usize,
        mul: M,
        star: S,
        unit: Array1<c64>,
        labels: Option<Vec<String>>,
    ) -> Result<Self>
    where
        M: Fn(usize, usize) -> Array1<c64>,
        S: Fn(usize) -> Array1<c64>,
    {
        let mut left = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut l = Array2::zeros((dim, dim));
            for j in 0..dim {
                l.column_mut(j).assign(&mul(i, j));
            }
            left.push(l);
        }
        let mut star_mat = Array2::zeros((dim, dim));
        for i in 0..dim {
            star_mat.column_mut(i).assign(&star(i));
        }
        Self::new(left, star_mat, unit, labels)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &Array1<c64> {
        &self.unit
    }

    pub fn basis(&self, i: usize) -> Array1<c64> {
        let mut v = Array1::zeros(self.dim);
        v[i] = c64::new(1.0, 0.0);
        v
    }

    /// Left multiplication operator x -> a x.
    pub fn lmul_op(&self, a: &Array1<c64>) -> Array2<c64> {
        let mut out = Array2::zeros((self.dim, self.dim));
        for (i, l) in self.left_mult.iter().enumerate() {
            if a[i].norm() > 0.0 {
                out = out + l.mapv(|z| z * a[i]);
            }
        }
        out
    }

    /// Right multiplication operator x -> x a.
    pub fn rmul_op(&self, a: &Array1<c64>) -> Array2<c64> {
        // column j of R_a is e_j a = L_j a
        let mut out = Array2::zeros((self.dim, self.dim));
        for j in 0..self.dim {
            let col = self.left_mult[j].dot(a);
            out.column_mut(j).assign(&col);
        }
        out
    }

    pub fn mul(&self, a: &Array1<c64>, b: &Array1<c64>) -> Array1<c64> {
        self.lmul_op(a).dot(b)
    }

    pub fn star(&self, a: &Array1<c64>) -> Array1<c64> {
        self.star_mat.dot(&a.mapv(|z| z.conj()))
    }

    /// Exhaustive validation of associativity, unit, and the involution axioms.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let d = self.dim;
        // associativity: L_i L_j = L_{e_i e_j}
        for i in 0..d {
            let li = &self.left_mult[i];
            for j in 0..d {
                let prod = self.left_mult[i].column(j).to_owned(); // e_i e_j
                let lhs = li.dot(&self.left_mult[j]);
                let rhs = self.lmul_op(&prod);
                let r = linalg::norm_max(&(&lhs - &rhs));
                if r > tol {
                    return Err(Error::AlgebraNotAssociative { a: i, b: j, c: 0, residual: r });
                }
            }
        }
        // unit
        let mut worst = 0.0f64;
        for i in 0..d {
            let e = self.basis(i);
            let r1 = linalg::vec_norm_max(&(&self.mul(&self.unit, &e) - &e));
            let r2 = linalg::vec_norm_max(&(&self.mul(&e, &self.unit) - &e));
            worst = worst.max(r1).max(r2);
        }
        if worst > tol {
            return Err(Error::AlgebraUnitNotNeutral { residual: worst });
        }
        // star: involutive, antimultiplicative, fixes the unit
        for i in 0..d {
            let e = self.basis(i);
            let ss = self.star(&self.star(&e));
            let r = linalg::vec_norm_max(&(&ss - &e));
            if r > tol {
                return Err(Error::BadStar { detail: format!("not involutive on basis {i} (residual {r:.3e})") });
            }
        }
        for i in 0..d {
            for j in 0..d {
                let ei = self.basis(i);
                let ej = self.basis(j);
                let lhs = self.star(&self.mul(&ei, &ej));
                let rhs = self.mul(&self.star(&ej), &self.star(&ei));
                let r = linalg::vec_norm_max(&(&lhs - &rhs));
                if r > tol {
                    return Err(Error::BadStar {
                        detail: format!("not antimultiplicative on ({i},{j}) (residual {r:.3e})"),
                    });
                }
            }
        }
        let r = linalg::vec_norm_max(&(&self.star(&self.unit) - &self.unit));
        if r > tol {
            return Err(Error::BadStar { detail: format!("unit not star-fixed (residual {r:.3e})") });
        }
        Ok(())
    }

    /// Basis (columns) of the radical: the null space of the trace form
    /// of the left regular representation.
    pub fn radical(&self, tol: &Tol) -> Array2<c64> {
        let d = self.dim;
        let mut t = Array2::zeros((d, d));
        // trace form T[j][i] = tr(L_i L_j); x in rad iff sum_i x_i T[j][i] = 0 for all j
        for i in 0..d {
            for j in 0..d {
                let mut tr = c64::new(0.0, 0.0);
                for k in 0..d {
                    tr += self.left_mult[i].row(k).dot(&self.left_mult[j].column(k));
                }
                t[[j, i]] = tr;
            }
        }
        linalg::nullspace(&t, tol.rank)
    }
}

/// A finite-dimensional C*-algebra as a list of full matrix blocks.
/// Elements are flat coordinate vectors over the matrix-unit basis,
/// ordered block by block, row-major within each block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CStarBlockAlgebra {
    pub sizes: Vec<usize>,
}

impl CStarBlockAlgebra {
    pub fn new(sizes: Vec<usize>) -> Self {
        assert!(sizes.iter().all(|&n| n >= 1));
        CStarBlockAlgebra { sizes }
    }

    pub fn scalar() -> Self {
        CStarBlockAlgebra { sizes: vec![1] }
    }

    pub fn dim(&self) -> usize {
        self.sizes.iter().map(|n| n * n).sum()
    }

    pub fn block_offset(&self, b: usize) -> usize {
        self.sizes[..b].iter().map(|n| n * n).sum()
    }

    pub fn to_blocks(&self, x: &Array1<c64>) -> Vec<Array2<c64>> {
        let mut out = Vec::new();
        let mut off = 0;
        for &n in &self.sizes {
            let m = Array2::from_shape_fn((n, n), |(i, j)| x[off + i * n + j]);
            off += n * n;
            out.push(m);
        }
        out
    }

    pub fn from_blocks(&self, blocks: &[Array2<c64>]) -> Array1<c64> {
        let mut out = Array1::zeros(self.dim());
        let mut off = 0;
        for (b, &n) in self.sizes.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    out[off + i * n + j] = blocks[b][[i, j]];
                }
            }
            off += n * n;
        }
        out
    }

    pub fn unit(&self) -> Array1<c64> {
        let blocks: Vec<Array2<c64>> = self.sizes.iter().map(|&n| linalg::eye(n)).collect();
        self.from_blocks(&blocks)
    }

    pub fn mul(&self, x: &Array1<c64>, y: &Array1<c64>) -> Array1<c64> {
        let xb = self.to_blocks(x);
        let yb = self.to_blocks(y);
        let prod: Vec<Array2<c64>> = xb.iter().zip(yb.iter()).map(|(a, b)| a.dot(b)).collect();
        self.from_blocks(&prod)
    }

    pub fn star(&self, x: &Array1<c64>) -> Array1<c64> {
        let xb = self.to_blocks(x);
        let st: Vec<Array2<c64>> = xb.iter().map(linalg::dagger).collect();
        self.from_blocks(&st)
    }

    /// Standard faithful trace: sum of the matrix traces of the blocks.
    pub fn trace(&self, x: &Array1<c64>) -> c64 {
        self.to_blocks(x).iter().map(|b| b.diag().sum()).sum()
    }

    /// Central projection selecting block `b`.
    pub fn central_projection(&self, b: usize) -> Array1<c64> {
        let blocks: Vec<Array2<c64>> = self
            .sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| if i == b { linalg::eye(n) } else { linalg::zeros(n, n) })
            .collect();
        self.from_blocks(&blocks)
    }

    /// Per-block scalars of a central element; errs if not central.
    pub fn central_scalars(&self, x: &Array1<c64>, tol: f64) -> Option<Vec<c64>> {
        let blocks = self.to_blocks(x);
        let mut out = Vec::new();
        for b in blocks {
            let n = b.dim().0;
            let lambda = b.diag().sum() / c64::new(n as f64, 0.0);
            if linalg::norm_max(&(&b - &(linalg::eye(n).mapv(|z| z * lambda)))) > tol {
                return None;
            }
            out.push(lambda);
        }
        Some(out)
    }

    /// Left multiplication operator on flat coordinates.
    pub fn lmul_op(&self, x: &Array1<c64>) -> Array2<c64> {
        let d = self.dim();
        let xb = self.to_blocks(x);
        let mut out = Array2::zeros((d, d));
        let mut off = 0;
        for (b, &n) in self.sizes.iter().enumerate() {
            // (x y)_b = xb . yb: entry (i,j) of product depends on yb rows
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        out[[off + i * n + j, off + k * n + j]] += xb[b][[i, k]];
                    }
                }
            }
            off += n * n;
        }
        out
    }

    pub fn rmul_op(&self, x: &Array1<c64>) -> Array2<c64> {
        let d = self.dim();
        let xb = self.to_blocks(x);
        let mut out = Array2::zeros((d, d));
        let mut off = 0;
        for (b, &n) in self.sizes.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        // (y x)_{ij} = sum_k y_{ik} x_{kj}
                        out[[off + i * n + j, off + i * n + k]] += xb[b][[k, j]];
                    }
                }
            }
            off += n * n;
        }
        out
    }

    /// Sorted block multiset; a complete *-isomorphism invariant.
    pub fn block_multiset(&self) -> Vec<usize> {
        let mut s = self.sizes.clone();
        s.sort_unstable();
        s
    }

    pub fn star_isomorphic(&self, other: &CStarBlockAlgebra) -> bool {
        self.block_multiset() == other.block_multiset()
    }

    /// Re-encode as a StarAlgebra over the matrix-unit basis.
    pub fn to_star_algebra(&self) -> StarAlgebra {
        let d = self.dim();
        let mut left = Vec::with_capacity(d);
        for i in 0..d {
            let mut e = Array1::zeros(d);
            e[i] = c64::new(1.0, 0.0);
            left.push(self.lmul_op(&e));
        }
        let mut star_mat = Array2::zeros((d, d));
        for i in 0..d {
            let mut e: Array1<c64> = Array1::zeros(d);
            e[i] = c64::new(1.0, 0.0);
            let se = self.star(&e);
            star_mat.column_mut(i).assign(&se);
        }
        StarAlgebra::new_unchecked(left, star_mat, self.unit(), None)
    }
}

/// A finite-dimensional right module over a block algebra, stored as the
/// anti-homomorphism of action matrices: `act(x) act(y) = act(x y)` read as
/// "apply y then x", i.e. `v . x = act(x) v` and `act(x) act(y) = act(y x)`.
#[derive(Debug, Clone)]
pub struct RightBlockModule {
    pub dim: usize,
    /// one action matrix per flat basis element of the algebra
    pub act: Vec<Array2<c64>>,
}

impl RightBlockModule {
    pub fn op(&self, x: &Array1<c64>) -> Array2<c64> {
        let mut out = Array2::zeros((self.dim, self.dim));
        for (i, m) in self.act.iter().enumerate() {
            if x[i].norm() > 0.0 {
                out = out + m.mapv(|z| z * x[i]);
            }
        }
        out
    }

    pub fn validate(&self, alg: &CStarBlockAlgebra, tol: f64) -> Result<()> {
        let d = alg.dim();
        assert_eq!(self.act.len(), d);
        for i in 0..d {
            for j in 0..d {
                let ei = unit_vec(d, i);
                let ej = unit_vec(d, j);
                let prod = alg.mul(&ei, &ej);
                let lhs = self.op(&ej).dot(&self.op(&ei));
                let rhs = self.op(&prod);
                let r = linalg::norm_max(&(&lhs - &rhs));
                if r > tol {
                    return Err(Error::ModuleAxiomFails {
                        detail: format!("right action not multiplicative on ({i},{j})"),
                        residual: r,
                    });
                }
            }
        }
        Ok(())
    }
}

pub fn unit_vec(d: usize, i: usize) -> Array1<c64> {
    let mut v = Array1::zeros(d);
    v[i] = c64::new(1.0, 0.0);
    v
}

/// Integer multiplicity vector of a right module over the blocks of `alg`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K0Class {
    pub blocks: Vec<usize>,
    pub class: Vec<i64>,
}

impl K0Class {
    pub fn zero(alg: &CStarBlockAlgebra) -> Self {
        K0Class { blocks: alg.sizes.clone(), class: vec![0; alg.sizes.len()] }
    }

    pub fn add(&self, other: &K0Class) -> K0Class {
        assert_eq!(self.blocks, other.blocks);
        K0Class {
            blocks: self.blocks.clone(),
            class: self.class.iter().zip(&other.class).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &K0Class) -> K0Class {
        assert_eq!(self.blocks, other.blocks);
        K0Class {
            blocks: self.blocks.clone(),
            class: self.class.iter().zip(&other.class).map(|(a, b)| a - b).collect(),
        }
    }
}

/// m_i = dim(M q_i) / n_i for the central projections q_i.
pub fn k0_class_of_module(
    alg: &CStarBlockAlgebra,
    module: &RightBlockModule,
    tol: &Tol,
) -> Result<K0Class> {
    let mut class = Vec::new();
    for (b, &n) in alg.sizes.iter().enumerate() {
        let q = alg.central_projection(b);
        let r = linalg::rank(&module.op(&q), tol.rank) as f64;
        let m = r / n as f64;
        if (m - m.round()).abs() > tol.int || m.round() < 0.0 {
            return Err(Error::NonIntegerMultiplicity { block: b, value: m });
        }
        class.push(m.round() as i64);
    }
    Ok(K0Class { blocks: alg.sizes.clone(), class })
}

/// Result of computing the enveloping C*-algebra of a StarAlgebra.
#[derive(Debug, Clone)]
pub struct EnvelopeResult {
    pub source_dim: usize,
    pub target: CStarBlockAlgebra,
    /// quotient map on coordinates: target_flat = quotient . source
    pub quotient: Array2<c64>,
    /// linear right-inverse of `quotient`
    pub section: Array2<c64>,
    pub radical_dim: usize,
    /// simple-block sizes found in the semisimple quotient, with keep verdicts
    pub report: Vec<BlockVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockVerdict {
    Kept { size: usize },
    DroppedIndefinite { size: usize },
    DroppedSwappedPair { size: usize },
}

impl EnvelopeResult {
    pub fn apply(&self, x: &Array1<c64>) -> Array1<c64> {
        self.quotient.dot(x)
    }

    pub fn lift(&self, y: &Array1<c64>) -> Array1<c64> {
        self.section.dot(y)
    }

    /// Orthonormal basis of the kernel of the quotient map.
    pub fn kernel(&self, tol: &Tol) -> Array2<c64> {
        linalg::nullspace(&self.quotient, tol.rank)
    }
}

/// Compute the enveloping C*-algebra: kill the radical, split the semisimple
/// quotient into simple blocks by a random central element, transport the
/// involution per block (sigma(x) = g x^H g^{-1} with Hermitian g) and keep
/// exactly the blocks with definite g; star-swapped pairs of blocks are
/// dropped.
pub fn cstar_envelope(alg: &StarAlgebra, seed: u64, tol: &Tol) -> Result<EnvelopeResult> {
    let d = alg.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // 1. radical and semisimple quotient
    let rad = alg.radical(tol);
    let rad_dim = rad.dim().1;
    let comp = linalg::nullspace(&linalg::dagger(&rad), tol.rank); // orth complement
    let dq = comp.dim().1;
    if dq == 0 {
        // zero algebra
        return finish_envelope(alg, CStarBlockAlgebra { sizes: vec![] }, linalg::zeros(0, d), rad_dim, vec![], tol);
    }
    let proj = linalg::dagger(&comp); // class coordinates: p(x) = comp^H x
    let q_mul = |a: &Array1<c64>, b: &Array1<c64>| -> Array1<c64> {
        proj.dot(&alg.mul(&comp.dot(a), &comp.dot(b)))
    };
    let q_lmul = |a: &Array1<c64>| -> Array2<c64> {
        proj.dot(&alg.lmul_op(&comp.dot(a))).dot(&comp)
    };
    let q_star = |a: &Array1<c64>| -> Array1<c64> { proj.dot(&alg.star(&comp.dot(a))) };
    let q_unit = proj.dot(alg.unit());

    // 2. center of the quotient
    let mut comm_rows = Array2::zeros((dq * dq, dq));
    for j in 0..dq {
        let ej = unit_vec(dq, j);
        let lj = q_lmul(&ej);
        // z with e_j z - (z e_j) = 0; right mult: column i of R_j is e_i e_j
        let mut rj = Array2::zeros((dq, dq));
        for i in 0..dq {
            let ei = unit_vec(dq, i);
            rj.column_mut(i).assign(&q_mul(&ei, &ej));
        }
        let diff = &lj - &rj;
        for r in 0..dq {
            for c in 0..dq {
                comm_rows[[j * dq + r, c]] = diff[[r, c]];
            }
        }
    }
    let center = linalg::nullspace(&comm_rows, tol.rank);
    let k = center.dim().1;
    if k == 0 {
        return Err(Error::EnvelopeInconsistent("semisimple quotient has empty center".into()));
    }

    // 3. random central element with separated block scalars
    let mut lambdas: Vec<c64> = Vec::new();
    let mut z = Array1::zeros(dq);
    let mut ok = false;
    for _try in 0..8 {
        let coeff = linalg::random_vector(&mut rng, k);
        z = center.dot(&coeff);
        // eigenvalues of multiplication-by-z on the center
        let m = linalg::dagger(&center).dot(&q_lmul(&z)).dot(&center);
        let vals = linalg::general_eigvals(&m);
        let scale = vals.iter().map(|v| v.norm()).fold(1.0, f64::max);
        let clusters = linalg::cluster_scalars(vals.as_slice().unwrap(), 1e-6 * scale);
        if clusters.len() == k && clusters.iter().all(|c| c.len() == 1) {
            lambdas = clusters.iter().map(|c| vals[c[0]]).collect();
            // require a healthy pairwise gap
            let mut gap_ok = true;
            for i in 0..k {
                for j in (i + 1)..k {
                    if (lambdas[i] - lambdas[j]).norm() < tol.eig_gap.sqrt() * scale.max(1.0) {
                        gap_ok = false;
                    }
                }
            }
            if gap_ok {
                ok = true;
                break;
            }
        }
    }
    if !ok {
        return Err(Error::NumericalDegeneracy { retries: 8 });
    }

    // 4. primitive central idempotents by Lagrange interpolation in the algebra
    let mut centrals: Vec<Array1<c64>> = Vec::new();
    for i in 0..k {
        let mut c = q_unit.clone();
        for j in 0..k {
            if j == i {
                continue;
            }
            let shifted = &q_mul(&z, &c) - &c.mapv(|v| v * lambdas[j]);
            c = shifted.mapv(|v| v / (lambdas[i] - lambdas[j]));
        }
        let idem_res = linalg::vec_norm_max(&(&q_mul(&c, &c) - &c));
        if idem_res > 1e-6 {
            return Err(Error::EnvelopeInconsistent(format!(
                "central idempotent {i} fails idempotency (residual {idem_res:.3e})"
            )));
        }
        centrals.push(c);
    }
    let sum: Array1<c64> = centrals.iter().fold(Array1::zeros(dq), |acc, c| acc + c);
    if linalg::vec_norm_max(&(&sum - &q_unit)) > 1e-6 {
        return Err(Error::EnvelopeInconsistent("central idempotents do not sum to the unit".into()));
    }

    // 5. star pairing of blocks
    let mut star_partner = vec![usize::MAX; k];
    for i in 0..k {
        let sc = q_star(&centrals[i]);
        let mut best = (usize::MAX, f64::INFINITY);
        for j in 0..k {
            let r = linalg::vec_norm_max(&(&sc - &centrals[j]));
            if r < best.1 {
                best = (j, r);
            }
        }
        if best.1 > 1e-6 {
            return Err(Error::EnvelopeInconsistent(
                "involution does not permute the simple blocks".into(),
            ));
        }
        star_partner[i] = best.0;
    }

    // 6. analyze each block
    let mut report = Vec::new();
    let mut kept: Vec<(usize, Array2<c64>)> = Vec::new(); // (size, flat quotient rows for this block over source coords)
    let mut handled = vec![false; k];
    for bi in 0..k {
        if handled[bi] {
            continue;
        }
        let basis = linalg::column_space(&q_lmul(&centrals[bi]), tol.rank);
        let m = basis.dim().1;
        let nf = (m as f64).sqrt();
        let n = nf.round() as usize;
        if (nf - n as f64).abs() > tol.int || n * n != m {
            return Err(Error::EnvelopeInconsistent(format!(
                "simple block of dimension {m} is not a square"
            )));
        }
        if star_partner[bi] != bi {
            let bj = star_partner[bi];
            handled[bi] = true;
            handled[bj] = true;
            report.push(BlockVerdict::DroppedSwappedPair { size: n });
            report.push(BlockVerdict::DroppedSwappedPair { size: n });
            continue;
        }
        handled[bi] = true;

        // block-local algebra in `basis` coordinates
        let bproj = linalg::dagger(&basis);
        let w_lmul = |a: &Array1<c64>| -> Array2<c64> {
            bproj.dot(&q_lmul(&basis.dot(a))).dot(&basis)
        };
        let w_unit = bproj.dot(&centrals[bi]);
        let w_star = |a: &Array1<c64>| -> Array1<c64> { bproj.dot(&q_star(&basis.dot(a))) };

        // minimal idempotent via spectral Lagrange interpolation of a random element
        let mut p = Array1::zeros(m);
        let mut found = false;
        for _try in 0..8 {
            let w = linalg::random_vector(&mut rng, m);
            let lw = w_lmul(&w);
            let vals = linalg::general_eigvals(&lw);
            let scale = vals.iter().map(|v| v.norm()).fold(1.0, f64::max);
            let clusters = linalg::cluster_scalars(vals.as_slice().unwrap(), 1e-6 * scale);
            if clusters.len() != n || clusters.iter().any(|c| c.len() != n) {
                continue;
            }
            let mus: Vec<c64> = clusters.iter().map(|c| vals[c[0]]).collect();
            let mut cand = w_unit.clone();
            for j in 1..n {
                let shifted = &w_lmul(&w).dot(&cand) - &cand.mapv(|v| v * mus[j]);
                cand = shifted.mapv(|v| v / (mus[0] - mus[j]));
            }
            if linalg::vec_norm_max(&(&w_lmul(&cand).dot(&cand) - &cand)) < 1e-6 {
                p = cand;
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::NumericalDegeneracy { retries: 8 });
        }

        // irreducible module V = W p
        let mut rp = Array2::zeros((m, m));
        for i in 0..m {
            let ei = unit_vec(m, i);
            rp.column_mut(i).assign(&w_lmul(&ei).dot(&p));
        }
        let vb = linalg::column_space(&rp, tol.rank);
        if vb.dim().1 != n {
            return Err(Error::EnvelopeInconsistent(format!(
                "minimal left ideal has dimension {} (expected {n})",
                vb.dim().1
            )));
        }
        let vproj = linalg::dagger(&vb);
        let pi = |x: &Array1<c64>| -> Array2<c64> { vproj.dot(&w_lmul(x)).dot(&vb) };

        // linear inverse of pi
        let mut pmat = Array2::zeros((n * n, m));
        for i in 0..m {
            let img = pi(&unit_vec(m, i));
            for r in 0..n {
                for c in 0..n {
                    pmat[[r * n + c, i]] = img[[r, c]];
                }
            }
        }
        let pinv_mat = linalg::pinv(&pmat, tol.rank);

        // transported conjugate-linear involution S on M_n; solve S(x) g = g x^H
        let unvec = |v: &Array1<c64>| -> Array2<c64> {
            Array2::from_shape_fn((n, n), |(r, c)| v[r * n + c])
        };
        let s_of = |x: &Array2<c64>| -> Array2<c64> {
            let flat = Array1::from_shape_fn(n * n, |i| x[[i / n, i % n]]);
            let w = pinv_mat.dot(&flat);
            pi(&w_star(&w))
        };
        let mut sys = Array2::zeros((n * n * n * n, n * n));
        for a in 0..n {
            for b in 0..n {
                let mut eab = linalg::zeros(n, n);
                eab[[a, b]] = c64::new(1.0, 0.0);
                let sab = s_of(&eab);
                // row-major vec: vec(S_ab g) = (S_ab ⊗ I) vec(g); vec(g E_ab^H) = (I ⊗ conj(E_ab)) vec(g)
                let lhs = linalg::kron(&sab, &linalg::eye(n));
                let rhs = linalg::kron(&linalg::eye(n), &eab.mapv(|z| z.conj()));
                let block = &lhs - &rhs;
                let base = (a * n + b) * n * n;
                for r in 0..n * n {
                    for c in 0..n * n {
                        sys[[base + r, c]] = block[[r, c]];
                    }
                }
            }
        }
        let gns = linalg::nullspace(&sys, tol.rank);
        if gns.dim().1 != 1 {
            return Err(Error::EnvelopeInconsistent(format!(
                "Skolem-Noether system has null dimension {} (expected 1)",
                gns.dim().1
            )));
        }
        let g_raw = unvec(&gns.column(0).to_owned());
        // make g Hermitian by a phase
        let gd = linalg::dagger(&g_raw);
        let (mi, mj) = {
            let mut best = (0, 0);
            let mut bv = 0.0;
            for r in 0..n {
                for c in 0..n {
                    if g_raw[[r, c]].norm() > bv {
                        bv = g_raw[[r, c]].norm();
                        best = (r, c);
                    }
                }
            }
            best
        };
        let mu = gd[[mi, mj]] / g_raw[[mi, mj]];
        if linalg::norm_max(&(&gd - &g_raw.mapv(|z| z * mu))) > 1e-6 * linalg::norm_max(&g_raw) {
            return Err(Error::EnvelopeInconsistent("g is not Hermitian up to phase".into()));
        }
        let theta = mu.arg();
        let lambda = c64::from_polar(1.0, theta / 2.0);
        let mut g = g_raw.mapv(|z| z * lambda);
        // force exact Hermitianity
        g = (&g + &linalg::dagger(&g)).mapv(|z| z * c64::new(0.5, 0.0));
        let (gvals, _) = linalg::herm_eig(&g);
        let gscale = gvals.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let pos = gvals.iter().all(|&v| v > tol.eig_gap * gscale);
        let neg = gvals.iter().all(|&v| v < -tol.eig_gap * gscale);
        if !pos && !neg {
            report.push(BlockVerdict::DroppedIndefinite { size: n });
            continue;
        }
        if neg {
            g = g.mapv(|z| -z);
        }
        let gs = linalg::herm_sqrt(&g);
        let gsi = linalg::inv(&gs);

        // full quotient-map rows for this block: x -> g^{-1/2} pi(c_bi . class(x)) g^{1/2}
        let mut rows = Array2::zeros((n * n, d));
        for src in 0..d {
            let x = unit_vec(d, src);
            let xq = proj.dot(&x);
            let xc = q_mul(&centrals[bi], &xq);
            let wcoord = bproj.dot(&xc);
            let img = gsi.dot(&pi(&wcoord)).dot(&gs);
            for r in 0..n {
                for c in 0..n {
                    rows[[r * n + c, src]] = img[[r, c]];
                }
            }
        }
        report.push(BlockVerdict::Kept { size: n });
        kept.push((n, rows));
    }

    let sizes: Vec<usize> = kept.iter().map(|(n, _)| *n).collect();
    let target = CStarBlockAlgebra { sizes };
    let tdim = target.dim();
    let mut quotient = Array2::zeros((tdim, d));
    let mut off = 0;
    for (n, rows) in &kept {
        for r in 0..n * n {
            for c in 0..d {
                quotient[[off + r, c]] = rows[[r, c]];
            }
        }
        off += n * n;
    }
    finish_envelope(alg, target, quotient, rad_dim, report, tol)
}

fn finish_envelope(
    alg: &StarAlgebra,
    target: CStarBlockAlgebra,
    quotient: Array2<c64>,
    radical_dim: usize,
    report: Vec<BlockVerdict>,
    tol: &Tol,
) -> Result<EnvelopeResult> {
    let d = alg.dim();
    let section = linalg::pinv(&quotient, tol.rank);
    let result = EnvelopeResult {
        source_dim: d,
        target: target.clone(),
        quotient,
        section,
        radical_dim,
        report,
    };
    // self-checks: multiplicativity, star, unit, section
    let mut worst = 0.0f64;
    for i in 0..d {
        let ei = unit_vec(d, i);
        let qi = result.apply(&ei);
        let si = alg.star(&ei);
        let r = linalg::vec_norm_max(&(&result.apply(&si) - &target.star(&qi)));
        worst = worst.max(r);
        for j in 0..d {
            let ej = unit_vec(d, j);
            let qj = result.apply(&ej);
            let prod = alg.mul(&ei, &ej);
            let r =
                linalg::vec_norm_max(&(&result.apply(&prod) - &target.mul(&qi, &qj)));
            worst = worst.max(r);
        }
    }
    let ru = linalg::vec_norm_max(&(&result.apply(alg.unit()) - &target.unit()));
    worst = worst.max(ru);
    if worst > tol.hom {
        return Err(Error::EnvelopeInconsistent(format!(
            "quotient map residual {worst:.3e} above tolerance"
        )));
    }
    let tdim = target.dim();
    if tdim > 0 {
        let qs = result.quotient.dot(&result.section);
        if linalg::norm_max(&(&qs - &linalg::eye(tdim))) > tol.hom {
            return Err(Error::EnvelopeInconsistent("section is not a right inverse".into()));
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{norm_max, vec_norm_max};

    fn one(d: usize, i: usize) -> Array1<c64> {
        unit_vec(d, i)
    }

    /// C[t]/(t^2) with t* = t: basis {1, t}.
    fn dual_numbers() -> StarAlgebra {
        StarAlgebra::from_structure(
            2,
            |i, j| match (i, j) {
                (0, j) => one(2, j),
                (i, 0) => one(2, i),
                _ => Array1::zeros(2),
            },
            |i| one(2, i),
            one(2, 0),
            None,
        )
        .unwrap()
    }

    /// C^2 with the swap involution (a,b)* = (conj b, conj a).
    fn swap_plane() -> StarAlgebra {
        StarAlgebra::from_structure(
            2,
            |i, j| if i == j { one(2, i) } else { Array1::zeros(2) },
            |i| one(2, 1 - i),
            Array1::from_vec(vec![c64::new(1.0, 0.0), c64::new(1.0, 0.0)]),
            None,
        )
        .unwrap()
    }

    /// Group algebra C[Z/2].
    fn group_z2() -> StarAlgebra {
        StarAlgebra::from_structure(
            2,
            |i, j| one(2, (i + j) % 2),
            |i| one(2, i),
            one(2, 0),
            None,
        )
        .unwrap()
    }

    #[test]
    fn radical_of_dual_numbers_is_span_t() {
        let a = dual_numbers();
        let rad = a.radical(&Tol::default());
        assert_eq!(rad.dim().1, 1);
        // radical vector proportional to t = e_1
        assert!(rad[[0, 0]].norm() < 1e-9);
        assert!(rad[[1, 0]].norm() > 0.9);
    }

    #[test]
    fn radical_of_matrix_algebra_is_zero() {
        let m2 = CStarBlockAlgebra::new(vec![2]).to_star_algebra();
        m2.validate(1e-10).unwrap();
        assert_eq!(m2.radical(&Tol::default()).dim().1, 0);
    }

    #[test]
    fn radical_of_group_algebra_is_zero() {
        assert_eq!(group_z2().radical(&Tol::default()).dim().1, 0);
    }

    #[test]
    fn envelope_kills_radical_of_dual_numbers() {
        let env = cstar_envelope(&dual_numbers(), 0, &Tol::default()).unwrap();
        assert_eq!(env.target.sizes, vec![1]);
        assert_eq!(env.radical_dim, 1);
    }

    #[test]
    fn envelope_of_swap_plane_is_zero() {
        // oracle: x = (1,0) satisfies x* x = 0, so every *-representation kills it
        let a = swap_plane();
        let x = one(2, 0);
        let xx = a.mul(&a.star(&x), &x);
        assert!(vec_norm_max(&xx) < 1e-14);
        let env = cstar_envelope(&a, 0, &Tol::default()).unwrap();
        assert_eq!(env.target.sizes, Vec::<usize>::new());
        assert_eq!(env.target.dim(), 0);
    }

    #[test]
    fn envelope_of_group_z2_is_two_characters() {
        let env = cstar_envelope(&group_z2(), 0, &Tol::default()).unwrap();
        assert_eq!(env.target.block_multiset(), vec![1, 1]);
    }

    #[test]
    fn envelope_is_idempotent_on_block_algebras() {
        for sizes in [vec![1usize], vec![1, 2], vec![2, 3], vec![1, 1, 1]] {
            let alg = CStarBlockAlgebra::new(sizes.clone());
            let env = cstar_envelope(&alg.to_star_algebra(), 1, &Tol::default()).unwrap();
            assert_eq!(env.target.block_multiset(), alg.block_multiset());
            assert_eq!(env.radical_dim, 0);
        }
    }

    #[test]
    fn star_isomorphic_by_multiset() {
        assert!(CStarBlockAlgebra::new(vec![1, 2])
            .star_isomorphic(&CStarBlockAlgebra::new(vec![2, 1])));
        assert!(!CStarBlockAlgebra::new(vec![1, 1])
            .star_isomorphic(&CStarBlockAlgebra::new(vec![2])));
    }

    #[test]
    fn k0_of_regular_module() {
        let alg = CStarBlockAlgebra::new(vec![1, 2]);
        let d = alg.dim();
        // right regular module: act(x) = right multiplication
        let act: Vec<Array2<c64>> = (0..d).map(|i| alg.rmul_op(&unit_vec(d, i))).collect();
        let module = RightBlockModule { dim: d, act };
        module.validate(&alg, 1e-12).unwrap();
        let k = k0_class_of_module(&alg, &module, &Tol::default()).unwrap();
        assert_eq!(k.class, vec![1, 2]);
    }

    #[test]
    fn k0_of_first_coordinate_action() {
        // C + C acting on C^2 through the first coordinate on both summands
        let alg = CStarBlockAlgebra::new(vec![1, 1]);
        let mut a0 = linalg::eye(2);
        let a1 = linalg::zeros(2, 2);
        a0[[1, 1]] = c64::new(1.0, 0.0);
        let module = RightBlockModule { dim: 2, act: vec![a0, a1] };
        module.validate(&alg, 1e-12).unwrap();
        let k = k0_class_of_module(&alg, &module, &Tol::default()).unwrap();
        assert_eq!(k.class, vec![2, 0]);
    }

    #[test]
    fn zero_module_class_is_zero() {
        let alg = CStarBlockAlgebra::new(vec![1, 2]);
        let module = RightBlockModule {
            dim: 0,
            act: (0..alg.dim()).map(|_| linalg::zeros(0, 0)).collect(),
        };
        let k = k0_class_of_module(&alg, &module, &Tol::default()).unwrap();
        assert_eq!(k.class, vec![0, 0]);
    }

    #[test]
    fn block_mul_and_star_roundtrip() {
        let alg = CStarBlockAlgebra::new(vec![2, 1]);
        let sa = alg.to_star_algebra();
        sa.validate(1e-12).unwrap();
        // lmul/rmul consistency with block products
        let d = alg.dim();
        let x = unit_vec(d, 1);
        let y = unit_vec(d, 2);
        let xy = alg.mul(&x, &y);
        assert!(vec_norm_max(&(&alg.lmul_op(&x).dot(&y) - &xy)) < 1e-14);
        assert!(vec_norm_max(&(&alg.rmul_op(&y).dot(&x) - &xy)) < 1e-14);
        let diff = &alg.star(&alg.mul(&x, &y)) - &alg.mul(&alg.star(&y), &alg.star(&x));
        assert!(vec_norm_max(&diff) < 1e-14);
        let _ = norm_max(&linalg::eye(1));
    }
}
