//! The functors between S-equivariant (A,B)-bimodules and compatible
//! (A⋊E, B⋊E)-bimodules: the crossed-product factor module, F = − ⊗^X (B⋊E),
//! the character maps σ_P, the inverse functor G, and the natural unitaries
//! κ and λ.

use crate::crossed::CrossedByE;
use crate::error::{Error, Result};
use crate::hilbert::{morphism_residual, validate_bimodule, HilbertModule, SHilbertBimodule};
use crate::linalg::{self, c64};
use crate::spectrum::{self, Character};
use crate::star_algebra::{unit_vec, Tol};
use crate::tensor::{compatible_tensor, CompatibleTensor};
use ndarray::prelude::*;

/// The enveloping C*-algebra of B⋊E as a (B, B⋊E)-bimodule over itself:
/// right action by multiplication, U = the induced β-action, left action of B
/// through b ↦ b⋊1.
#[derive(Debug, Clone)]
pub struct CrossedFactor {
    pub cby: CrossedByE,
    pub module: SHilbertBimodule,
}

pub fn crossed_factor(cby: &CrossedByE, tol: &Tol) -> Result<CrossedFactor> {
    let env = &cby.product.envelope.target;
    let d = env.dim();
    let acts: Vec<Array2<c64>> = (0..d).map(|k| env.rmul_op(&unit_vec(d, k))).collect();
    let mut ip = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            ip.push(env.mul(&env.star(&unit_vec(d, i)), &unit_vec(d, j)));
        }
    }
    let base = HilbertModule { algebra: env.clone(), dim: d, parity: vec![0; d], act: acts, ip };
    let b = &cby.product.action.algebra;
    let unit_elt = cby.product.action.sg.unit();
    let pi: Vec<Array2<c64>> = (0..b.dim())
        .map(|k| env.lmul_op(&cby.product.embed_env(&unit_vec(b.dim(), k), unit_elt)))
        .collect();
    let u: Vec<Array2<c64>> = cby.beta.alpha.clone();
    let module = validate_bimodule(
        base,
        b.clone(),
        pi,
        u,
        cby.product.action.clone(),
        cby.beta.clone(),
        tol,
    )?;
    Ok(CrossedFactor { cby: cby.clone(), module })
}

/// F(ℰ) = ℰ ⊗^X_B (B⋊E) with the left action of Env(A⋊E) by
/// π̄(a⋊e) = (π(a)⊗1)Ū_e.
#[derive(Debug, Clone)]
pub struct FunctorImage {
    pub ct: CompatibleTensor,
    /// the image bimodule over (Env(A⋊E), Env(B⋊E))
    pub module: SHilbertBimodule,
}

impl FunctorImage {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }
}

/// The compatible-range operator of `(π(a)⊗1)Ū_e` for an ℓ¹ combination of
/// A⋊E given by coefficients over `cby_a.product.basis`.
fn pi_bar_of_l1(
    e: &SHilbertBimodule,
    factor: &CrossedFactor,
    cby_a: &CrossedByE,
    coeffs: &Array1<c64>,
) -> Array2<c64> {
    let m = e.dim();
    let n = factor.module.dim();
    let adim = e.left.dim();
    let mut big = linalg::zeros(m * n, m * n);
    for (i, &(ak, idem)) in cby_a.product.basis.iter().enumerate() {
        let c = coeffs[i];
        if c.norm() < 1e-15 {
            continue;
        }
        let left = e.pi_op(&unit_vec(adim, ak)).dot(&e.u[idem]);
        big = big + linalg::kron(&left, &factor.module.u[idem]).mapv(|z| z * c);
    }
    big
}

/// Apply the functor F to an object.
pub fn functor_f(
    e: &SHilbertBimodule,
    factor: &CrossedFactor,
    cby_a: &CrossedByE,
    tol: &Tol,
) -> Result<FunctorImage> {
    let ct = compatible_tensor(e, &factor.module, tol)?;
    let env_a = &cby_a.product.envelope;
    let da = env_a.target.dim();

    // the left action must kill the envelope kernel of A⋊E
    let ker = env_a.kernel(tol);
    for col in ker.columns() {
        let big = pi_bar_of_l1(e, factor, cby_a, &col.to_owned());
        let op = ct.restrict(&ct.tensor.induce(&big, tol)?, tol)?;
        let r = linalg::norm_max(&op);
        if r > tol.hom {
            return Err(Error::DoesNotDescend { residual: r });
        }
    }
    let mut pi = Vec::with_capacity(da);
    for k in 0..da {
        let rep = env_a.lift(&unit_vec(da, k));
        let big = pi_bar_of_l1(e, factor, cby_a, &rep);
        pi.push(ct.restrict(&ct.tensor.induce(&big, tol)?, tol)?);
    }
    let module = validate_bimodule(
        ct.module.base.clone(),
        env_a.target.clone(),
        pi,
        ct.module.u.clone(),
        cby_a.beta.clone(),
        factor.cby.beta.clone(),
        tol,
    )?;
    Ok(FunctorImage { ct, module })
}

/// The morphism part of F: F(μ) = (μ⊗1)𝔻 in compatible-range coordinates.
pub fn functor_f_mor(
    src: &FunctorImage,
    dst: &FunctorImage,
    mu: &Array2<c64>,
) -> Array2<c64> {
    let n = src.ct.tensor.right_dim;
    let big = linalg::kron(mu, &linalg::eye(n));
    let on_quot =
        linalg::dagger(&dst.ct.tensor.q).dot(&big).dot(&src.ct.tensor.q);
    linalg::dagger(&dst.ct.c).dot(&on_quot).dot(&src.ct.d).dot(&src.ct.c)
}

/// The character map σ_P : Env(B⋊E) → B with its defining projection
/// ρ = P(1_B⋊1).
#[derive(Debug, Clone)]
pub struct SigmaP {
    pub character: Character,
    /// matrix of σ_P on flat envelope coordinates
    pub matrix: Array2<c64>,
    /// P(1⋊1) as an element of Env(B⋊E)
    pub rho: Array1<c64>,
    pub hom_residual: f64,
    pub uniqueness_residual: f64,
}

impl SigmaP {
    pub fn apply(&self, x: &Array1<c64>) -> Array1<c64> {
        self.matrix.dot(x)
    }
}

/// Build σ_P for the crossed product B⋊E: on generators,
/// σ_P(b⋊e) = p_{anchor}·b when e ≥ anchor(P), else 0.
pub fn sigma_p(cby: &CrossedByE, p: Character, tol: &Tol) -> Result<SigmaP> {
    let sg = &cby.product.action.sg;
    let b = &cby.product.action.algebra;
    let env = &cby.product.envelope;
    let db = b.dim();
    let l1_dim = cby.product.dim();
    let p_anchor = cby.product.action.p(p.anchor);
    let mut on_l1 = linalg::zeros(db, l1_dim);
    for (i, &(bk, e)) in cby.product.basis.iter().enumerate() {
        if sg.leq(p.anchor, e) {
            on_l1.column_mut(i).assign(&b.mul(&p_anchor, &unit_vec(db, bk)));
        }
    }
    // descend through the envelope
    let ker = env.kernel(tol);
    if ker.dim().1 > 0 {
        let leak = linalg::norm_max(&on_l1.dot(&ker));
        if leak > tol.hom {
            return Err(Error::DoesNotDescend { residual: leak });
        }
    }
    let matrix = on_l1.dot(&env.section);

    // rho = P(1⋊1) evaluated in the envelope acting on itself
    let d = env.target.dim();
    let idem_ops: Vec<Array2<c64>> = sg
        .idempotents()
        .iter()
        .map(|&e| env.target.lmul_op(&cby.product.embed_env(&b.unit(), e)))
        .collect();
    let rho = spectrum::project_module(sg, p, &idem_ops).dot(&env.target.unit());

    // *-homomorphism residual on the envelope basis
    let mut hom = 0.0f64;
    for i in 0..d {
        let ei = unit_vec(d, i);
        let si = matrix.dot(&ei);
        hom = hom.max(linalg::vec_norm_max(
            &(&matrix.dot(&env.target.star(&ei)) - &b.star(&si)),
        ));
        for j in 0..d {
            let ej = unit_vec(d, j);
            let sj = matrix.dot(&ej);
            hom = hom.max(linalg::vec_norm_max(
                &(&matrix.dot(&env.target.mul(&ei, &ej)) - &b.mul(&si, &sj)),
            ));
        }
    }
    if hom > tol.hom {
        return Err(Error::BimoduleAxiom {
            axiom: "sigma_P is a *-homomorphism",
            witness: format!("anchor {}", p.anchor),
            residual: hom,
        });
    }
    // uniqueness relation: x·rho = (sigma_P(x)⋊1)·rho
    let unit_elt = sg.unit();
    let mut uni = 0.0f64;
    for i in 0..d {
        let ei = unit_vec(d, i);
        let lhs = env.target.mul(&ei, &rho);
        let back = cby.product.embed_env(&matrix.dot(&ei), unit_elt);
        let rhs = env.target.mul(&back, &rho);
        uni = uni.max(linalg::vec_norm_max(&(&lhs - &rhs)));
    }
    if uni > tol.hom {
        return Err(Error::BimoduleAxiom {
            axiom: "sigma_P uniqueness relation",
            witness: format!("anchor {}", p.anchor),
            residual: uni,
        });
    }
    Ok(SigmaP { character: p, matrix, rho, hom_residual: hom, uniqueness_residual: uni })
}

/// Apply the functor G to a compatible (Env(A⋊E), Env(B⋊E))-bimodule:
/// same carrier and U, coefficients pulled back along b ↦ b⋊1 and
/// a ↦ a⋊1, inner product ⟨ξ,η⟩ = Σ_P σ_P(⟨Pξ, Pη⟩).
pub fn functor_g(
    f: &SHilbertBimodule,
    cby_a: &CrossedByE,
    cby_b: &CrossedByE,
    tol: &Tol,
) -> Result<SHilbertBimodule> {
    let sg = &cby_b.product.action.sg;
    let a = &cby_a.product.action.algebra;
    let b = &cby_b.product.action.algebra;
    let m = f.dim();
    let unit_elt = sg.unit();

    let act: Vec<Array2<c64>> = (0..b.dim())
        .map(|k| f.base.op(&cby_b.product.embed_env(&unit_vec(b.dim(), k), unit_elt)))
        .collect();
    let pi: Vec<Array2<c64>> = (0..a.dim())
        .map(|k| f.pi_op(&cby_a.product.embed_env(&unit_vec(a.dim(), k), unit_elt)))
        .collect();

    let x = spectrum::spectrum(sg);
    let sigmas: Vec<SigmaP> =
        x.iter().map(|&p| sigma_p(cby_b, p, tol)).collect::<Result<_>>()?;
    let projections: Vec<Array2<c64>> = x.iter().map(|&p| f.char_projection(p)).collect();
    let mut ip = vec![Array1::zeros(b.dim()); m * m];
    for i in 0..m {
        for j in 0..m {
            let mut v: Array1<c64> = Array1::zeros(b.dim());
            for (proj, sigma) in projections.iter().zip(&sigmas) {
                let pi_col = proj.column(i).to_owned();
                let pj_col = proj.column(j).to_owned();
                v = v + sigma.apply(&f.base.inner(&pi_col, &pj_col));
            }
            ip[i * m + j] = v;
        }
    }
    let base = HilbertModule {
        algebra: b.clone(),
        dim: m,
        parity: f.base.parity.clone(),
        act,
        ip,
    };
    validate_bimodule(
        base,
        a.clone(),
        pi,
        f.u.clone(),
        cby_a.product.action.clone(),
        cby_b.product.action.clone(),
        tol,
    )
}

/// A verified natural unitary (κ or λ) together with its residuals.
#[derive(Debug, Clone)]
pub struct NaturalUnitary {
    pub matrix: Array2<c64>,
    pub morphism_residual: f64,
}

fn checked_unitary(
    src: &SHilbertBimodule,
    dst: &SHilbertBimodule,
    k: Array2<c64>,
    tol: &Tol,
) -> Result<NaturalUnitary> {
    if src.dim() != dst.dim() {
        return Err(Error::BimoduleAxiom {
            axiom: "natural map between modules of equal dimension",
            witness: format!("{} vs {}", src.dim(), dst.dim()),
            residual: (src.dim() as f64 - dst.dim() as f64).abs(),
        });
    }
    let r = morphism_residual(src, dst, &k);
    if r > tol.hom {
        return Err(Error::BimoduleAxiom {
            axiom: "natural map is a strict unitary morphism",
            witness: String::new(),
            residual: r,
        });
    }
    if src.dim() > 0 && linalg::rank(&k, tol.rank) != src.dim() {
        return Err(Error::BimoduleAxiom {
            axiom: "natural map bijective",
            witness: String::new(),
            residual: 0.0,
        });
    }
    Ok(NaturalUnitary { matrix: k, morphism_residual: r })
}

/// The map f(ξ) = 𝔻(ξ ⊗ (1⋊1)) into a compatible-range module.
fn insertion_matrix(img: &FunctorImage) -> Array2<c64> {
    let m = img.ct.tensor.left_dim;
    let unit = img.ct.module.base.algebra.unit().clone();
    let mut k = linalg::zeros(img.dim(), m);
    for i in 0..m {
        let mut xi: Array1<c64> = Array1::zeros(m);
        xi[i] = c64::new(1.0, 0.0);
        k.column_mut(i).assign(&img.ct.simple(&xi, &unit));
    }
    k
}

/// κ_ℰ : ℰ → G(F(ℰ)), verified unitary, equivariant, and bilinear.
pub fn kappa(
    e: &SHilbertBimodule,
    factor: &CrossedFactor,
    cby_a: &CrossedByE,
    tol: &Tol,
) -> Result<(FunctorImage, SHilbertBimodule, NaturalUnitary)> {
    let img = functor_f(e, factor, cby_a, tol)?;
    let gf = functor_g(&img.module, cby_a, &factor.cby, tol)?;
    let k = insertion_matrix(&img);
    let nat = checked_unitary(e, &gf, k, tol)?;
    Ok((img, gf, nat))
}

/// λ_ℱ : ℱ → F(G(ℱ)), verified unitary, equivariant, and bilinear.
pub fn lambda(
    f: &SHilbertBimodule,
    factor: &CrossedFactor,
    cby_a: &CrossedByE,
    tol: &Tol,
) -> Result<(SHilbertBimodule, FunctorImage, NaturalUnitary)> {
    let g = functor_g(f, cby_a, &factor.cby, tol)?;
    let img = functor_f(&g, factor, cby_a, tol)?;
    let k = insertion_matrix(&img);
    let nat = checked_unitary(f, &img.module, k, tol)?;
    Ok((g, img, nat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{spectral_action, trivial_action};
    use crate::corpus;
    use crate::crossed::crossed_by_e;
    use crate::gen::{random_instance, spectral_bimodule, ModuleSpec};
    use crate::star_algebra::CStarBlockAlgebra;

    #[test]
    fn sigma_p_two_chain_example() {
        // S = {1,e}, B = C^2, p_e = (0,1) in spectral coordinates:
        // sigma_{chi_e}(b⋊1) kills the chi_1 coordinate; sigma_{chi_1}(b'⋊e) = 0
        let s = crate::semigroup::InverseSemigroup::from_table(
            vec![vec![0, 1], vec![1, 1]],
            0,
            None,
        )
        .unwrap();
        let act = spectral_action(&s, &[1, 1]).unwrap();
        let cby = crossed_by_e(&act, 0, &Tol::default()).unwrap();
        let tol = Tol::default();
        let chi_e = Character { anchor: 1 };
        let chi_1 = Character { anchor: 0 };
        let se = sigma_p(&cby, chi_e, &tol).unwrap();
        let s1 = sigma_p(&cby, chi_1, &tol).unwrap();
        // b = (b1, b2) ⋊ 1
        let b = Array1::from(vec![c64::new(2.0, 0.0), c64::new(3.0, 0.0)]);
        let x = cby.product.embed_env(&b, s.unit());
        let img = se.apply(&x);
        let pe = act.p(1);
        let expect = act.algebra.mul(&pe, &b);
        assert!(linalg::vec_norm_max(&(&img - &expect)) < 1e-9);
        // b' ⋊ e dies under sigma_{chi_1}
        let y = cby.product.embed_env(&b, 1);
        assert!(linalg::vec_norm_max(&s1.apply(&y)) < 1e-9);
    }

    #[test]
    fn kappa_on_group_module() {
        // group case: E = {1}, F is plain tensoring with B, kappa the
        // canonical iso
        let s = corpus::cyclic_group(2).unwrap();
        let tol = Tol::default();
        let scalar = CStarBlockAlgebra::scalar();
        let cby_a = crossed_by_e(&trivial_action(&s, &scalar), 0, &tol).unwrap();
        let act = spectral_action(&s, &[2]).unwrap();
        let cby_b = crossed_by_e(&act, 0, &tol).unwrap();
        let factor = crossed_factor(&cby_b, &tol).unwrap();
        let spec = ModuleSpec { mult_even: vec![1], mult_odd: vec![1] };
        let e = spectral_bimodule(&act, &spec, &tol).unwrap();
        let (_img, _gf, nat) = kappa(&e, &factor, &cby_a, &tol).unwrap();
        assert!(nat.morphism_residual < 1e-9);
    }

    #[test]
    fn kappa_and_lambda_on_i1_instance() {
        let s = corpus::symmetric_inverse_monoid(1).unwrap();
        let tol = Tol::default();
        let inst = random_instance(&s, 4, 6).unwrap();
        let cby_b = crossed_by_e(&inst.action, 0, &tol).unwrap();
        let factor = crossed_factor(&cby_b, &tol).unwrap();
        let scalar = CStarBlockAlgebra::scalar();
        let cby_a = crossed_by_e(&trivial_action(&s, &scalar), 0, &tol).unwrap();
        let (img, _gf, nat) = kappa(&inst.module, &factor, &cby_a, &tol).unwrap();
        assert!(nat.morphism_residual < 1e-9);
        // lambda on the F-image
        let (_g, _img2, nat2) = lambda(&img.module, &factor, &cby_a, &tol).unwrap();
        assert!(nat2.morphism_residual < 1e-9);
    }

    #[test]
    fn functor_f_mor_of_identity_is_identity() {
        let s = corpus::symmetric_inverse_monoid(1).unwrap();
        let tol = Tol::default();
        let inst = random_instance(&s, 9, 5).unwrap();
        let cby_b = crossed_by_e(&inst.action, 0, &tol).unwrap();
        let factor = crossed_factor(&cby_b, &tol).unwrap();
        let scalar = CStarBlockAlgebra::scalar();
        let cby_a = crossed_by_e(&trivial_action(&s, &scalar), 0, &tol).unwrap();
        let img = functor_f(&inst.module, &factor, &cby_a, &tol).unwrap();
        let id = linalg::eye(inst.module.dim());
        let fid = functor_f_mor(&img, &img, &id);
        assert!(linalg::norm_max(&(&fid - &linalg::eye(img.dim()))) < 1e-9);
    }
}
