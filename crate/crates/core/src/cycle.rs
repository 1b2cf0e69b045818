//! Kasparov cycles, the maps δ^S and γ^S, the round-trip pinching identity,
//! integration of compatible modules over the Sieben crossed product, and the
//! Green–Julg class pipeline at the K₀ level.

use crate::crossed::{
    crossed_by_e, full_crossed_product, ks_gamma_check_parts, sieben_crossed_product,
    CrossedByE, KsGammaReport, SiebenCrossedProduct,
};
use crate::error::{Error, Result};
use crate::functors::{crossed_factor, functor_f, functor_g, kappa, FunctorImage};
use crate::gen::{random_equivariant_unitary, transport, RandomInstance};
use crate::hilbert::{validate_bimodule, HilbertModule, SHilbertBimodule};
use crate::linalg::{self, c64};
use crate::spectrum;
use crate::star_algebra::{k0_class_of_module, unit_vec, K0Class, RightBlockModule, Tol};
use ndarray::prelude::*;

/// A validated S-equivariant Kasparov cycle (ℰ, T): T odd and adjointable.
/// The remaining Kasparov conditions are vacuous in finite dimension, where
/// every operator is compact.
#[derive(Debug, Clone)]
pub struct KasparovCycle {
    pub bimodule: SHilbertBimodule,
    pub t: Array2<c64>,
    pub t_adjoint: Array2<c64>,
}

pub fn validate_cycle(
    bimodule: SHilbertBimodule,
    t: Array2<c64>,
    tol: &Tol,
) -> Result<KasparovCycle> {
    let g = bimodule.base.grading();
    let anti = &g.dot(&t) + &t.dot(&g);
    if linalg::norm_max(&anti) > tol.axiom * linalg::norm_max(&t).max(1.0) {
        return Err(Error::NotOdd);
    }
    let t_adjoint = bimodule.base.adjoint(&t, tol)?;
    Ok(KasparovCycle { bimodule, t, t_adjoint })
}

/// The operator 𝔻(T⊗1)𝔻 restricted to the compatible range.
pub fn delta_operator(img: &FunctorImage, t: &Array2<c64>, tol: &Tol) -> Result<Array2<c64>> {
    let big = linalg::kron(t, &linalg::eye(img.ct.tensor.right_dim));
    let on_quot = img.ct.tensor.induce(&big, tol)?;
    let sandwiched = img.ct.d.dot(&on_quot).dot(&img.ct.d);
    img.ct.restrict(&sandwiched, tol)
}

/// δ^S(ℰ,T) = (F(ℰ), 𝔻(T⊗1)𝔻).
pub fn delta_s(
    cycle: &KasparovCycle,
    factor: &crate::functors::CrossedFactor,
    cby_a: &CrossedByE,
    tol: &Tol,
) -> Result<(FunctorImage, KasparovCycle)> {
    let img = functor_f(&cycle.bimodule, factor, cby_a, tol)?;
    let t = delta_operator(&img, &cycle.t, tol)?;
    let out = validate_cycle(img.module.clone(), t, tol)?;
    Ok((img, out))
}

/// γ^S(ℱ,T) = (G(ℱ), T): same carrier, coefficients pulled back.
pub fn gamma_s(
    cycle: &KasparovCycle,
    cby_a: &CrossedByE,
    cby_b: &CrossedByE,
    tol: &Tol,
) -> Result<KasparovCycle> {
    let g = functor_g(&cycle.bimodule, cby_a, cby_b, tol)?;
    validate_cycle(g, cycle.t.clone(), tol)
}

/// Verify the round-trip pinching identity κ⁻¹ 𝔻(T⊗1)𝔻 κ = Σ_P P T P on ℰ
/// (and, along the way, that κ: ℰ → GF(ℰ) is a unitary isomorphism).
/// Returns the operator residual.
pub fn roundtrip_check(
    cycle: &KasparovCycle,
    factor: &crate::functors::CrossedFactor,
    cby_a: &CrossedByE,
    tol: &Tol,
) -> Result<f64> {
    let e = &cycle.bimodule;
    let (img, _gf, nat) = kappa(e, factor, cby_a, tol)?;
    let t_delta = delta_operator(&img, &cycle.t, tol)?;
    let kinv = linalg::pinv(&nat.matrix, tol.rank);
    let lhs = kinv.dot(&t_delta).dot(&nat.matrix);
    let x = spectrum::spectrum(e.sg());
    let mut rhs = linalg::zeros(e.dim(), e.dim());
    for &p in &x {
        let proj = e.char_projection(p);
        rhs = rhs + proj.dot(&cycle.t).dot(&proj);
    }
    let r = linalg::norm_max(&(&lhs - &rhs));
    if r > tol.hom {
        return Err(Error::PinchingMismatch { residual: r });
    }
    Ok(r)
}

/// The same module with the grading reversed.
pub fn opposite(bm: &SHilbertBimodule) -> SHilbertBimodule {
    let mut out = bm.clone();
    out.base.parity = bm.base.parity.iter().map(|&p| 1 - p).collect();
    out
}

/// Direct sum of two bimodules over the same pair of algebras and actions.
pub fn direct_sum(x: &SHilbertBimodule, y: &SHilbertBimodule, tol: &Tol) -> Result<SHilbertBimodule> {
    assert_eq!(x.base.algebra.sizes, y.base.algebra.sizes);
    assert_eq!(x.left.sizes, y.left.sizes);
    let (mx, my) = (x.dim(), y.dim());
    let m = mx + my;
    let block = |a: &Array2<c64>, b: &Array2<c64>| -> Array2<c64> {
        let mut out = linalg::zeros(m, m);
        out.slice_mut(s![..mx, ..mx]).assign(a);
        out.slice_mut(s![mx.., mx..]).assign(b);
        out
    };
    let dc = x.base.algebra.dim();
    let mut ip = vec![Array1::zeros(dc); m * m];
    for i in 0..mx {
        for j in 0..mx {
            ip[i * m + j] = x.base.inner_basis(i, j).clone();
        }
    }
    for i in 0..my {
        for j in 0..my {
            ip[(mx + i) * m + (mx + j)] = y.base.inner_basis(i, j).clone();
        }
    }
    let mut parity = x.base.parity.clone();
    parity.extend_from_slice(&y.base.parity);
    let base = HilbertModule {
        algebra: x.base.algebra.clone(),
        dim: m,
        parity,
        act: (0..dc).map(|k| block(&x.base.act[k], &y.base.act[k])).collect(),
        ip,
    };
    let pi = (0..x.left.dim()).map(|k| block(&x.pi[k], &y.pi[k])).collect();
    let u = (0..x.sg().order()).map(|st| block(&x.u[st], &y.u[st])).collect();
    validate_bimodule(base, x.left.clone(), pi, u, x.act_a.clone(), x.act_b.clone(), tol)
}

/// The even or odd part of a module, as a module with the same structure
/// restricted to one parity sector (all structure maps preserve the sector).
pub fn graded_part(bm: &SHilbertBimodule, parity: u8) -> SHilbertBimodule {
    let idx: Vec<usize> =
        (0..bm.dim()).filter(|&i| bm.base.parity[i] == parity).collect();
    let m = idx.len();
    let cut = |a: &Array2<c64>| -> Array2<c64> {
        Array2::from_shape_fn((m, m), |(i, j)| a[[idx[i], idx[j]]])
    };
    let dc = bm.base.algebra.dim();
    let mut ip = vec![Array1::zeros(dc); m * m];
    for i in 0..m {
        for j in 0..m {
            ip[i * m + j] = bm.base.inner_basis(idx[i], idx[j]).clone();
        }
    }
    SHilbertBimodule {
        base: HilbertModule {
            algebra: bm.base.algebra.clone(),
            dim: m,
            parity: vec![parity; m],
            act: bm.base.act.iter().map(&cut).collect(),
            ip,
        },
        left: bm.left.clone(),
        pi: bm.pi.iter().map(&cut).collect(),
        u: bm.u.iter().map(&cut).collect(),
        act_a: bm.act_a.clone(),
        act_b: bm.act_b.clone(),
        compat: bm.compat,
    }
}

/// Integrate a compatible right module over B = Env(A⋊E) to a right module
/// over the Sieben crossed product (A⋊E)⋊̂S, via ξ·(b⋊s) := U_{s*}(ξ·b).
pub fn integrate_compatible_module(
    m: &SHilbertBimodule,
    sieben: &SiebenCrossedProduct,
    tol: &Tol,
) -> Result<RightBlockModule> {
    let sg = &sieben.action.sg;
    assert_eq!(m.base.algebra.sizes, sieben.action.algebra.sizes);
    let dc = m.base.algebra.dim();
    // the compatibility relation op(b)U_e = op(β_e(b)) is exactly what makes
    // the Sieben relations hold; verify it rather than trusting a flag
    for &e in sg.idempotents() {
        for k in 0..dc {
            let ek = unit_vec(dc, k);
            let lhs = m.base.op(&ek).dot(&m.u[e]);
            let rhs = m.base.op(&sieben.action.apply(e, &ek));
            let r = linalg::norm_max(&(&lhs - &rhs));
            if r > tol.hom {
                return Err(Error::ModuleAxiomFails {
                    detail: format!("input not compatible at idempotent {e}"),
                    residual: r,
                });
            }
        }
    }
    let env = &sieben.envelope.target;
    let d = env.dim();
    let mut act = Vec::with_capacity(d);
    for k in 0..d {
        let l1 = sieben.lift_env(&unit_vec(d, k));
        let mut op = linalg::zeros(m.dim(), m.dim());
        for (i, &(bk, st)) in sieben.basis.iter().enumerate() {
            let c = l1[i];
            if c.norm() < 1e-15 {
                continue;
            }
            let part = m.u[sg.inv(st)].dot(&m.base.op(&unit_vec(dc, bk)));
            op = op + part.mapv(|z| z * c);
        }
        act.push(op);
    }
    let module = RightBlockModule { dim: m.dim(), act };
    let unit_res = linalg::norm_max(&(&module.op(&env.unit()) - &linalg::eye(m.dim())));
    if unit_res > tol.hom {
        return Err(Error::ModuleAxiomFails {
            detail: "unit does not act as identity".into(),
            residual: unit_res,
        });
    }
    module.validate(env, tol.hom)?;
    Ok(module)
}

/// Everything the Green–Julg pipeline produced, for downstream block
/// identification.
#[derive(Debug, Clone)]
pub struct GreenJulgResult {
    /// [even] − [odd] over the blocks of Env(A⋊S)
    pub class: K0Class,
    /// the per-part classes over the Sieben envelope
    pub even: K0Class,
    pub odd: K0Class,
    pub report: KsGammaReport,
    /// the full crossed product A⋊S used for the block order of `class`
    pub full: crate::crossed::CrossedProduct,
}

/// The Green–Julg class of a cycle over (ℂ, A): T is dropped (the linear
/// path tT is a homotopy in finite dimension), the module is pushed through
/// F, integrated part by part over the Sieben crossed product, and the
/// multiplicity vectors transported along γ to A⋊S.
pub fn green_julg_class(e: &SHilbertBimodule, seed: u64, tol: &Tol) -> Result<GreenJulgResult> {
    assert_eq!(e.left.dim(), 1, "Green-Julg pipeline expects a cycle over (C, A)");
    let action = &e.act_b;
    let cby = crossed_by_e(action, seed, tol)?;
    let sieben = sieben_crossed_product(&cby, seed.wrapping_add(1), tol)?;
    let full = full_crossed_product(action, seed.wrapping_add(2), tol)?;
    let report = ks_gamma_check_parts(&cby, &sieben, &full, tol)?;
    let factor = crossed_factor(&cby, tol)?;
    let ct = crate::tensor::compatible_tensor(e, &factor.module, tol)?;
    let senv = &sieben.envelope.target;

    let part_class = |parity: u8| -> Result<K0Class> {
        let part = graded_part(&ct.module, parity);
        if part.dim() == 0 {
            return Ok(K0Class::zero(senv));
        }
        let module = integrate_compatible_module(&part, &sieben, tol)?;
        k0_class_of_module(senv, &module, tol)
    };
    let even = part_class(0)?;
    let odd = part_class(1)?;

    let fenv = &full.envelope.target;
    let mut transported = vec![0i64; fenv.sizes.len()];
    for (bi, &target) in report.block_map.iter().enumerate() {
        transported[target] = even.class[bi] - odd.class[bi];
    }
    let class = K0Class { blocks: report.full_sizes.clone(), class: transported };
    Ok(GreenJulgResult { class, even, odd, report, full })
}

/// Report of the class-invariance suite on one instance.
#[derive(Debug, Clone)]
pub struct ClassInvarianceReport {
    pub class: K0Class,
    pub conjugation_checks: usize,
    pub degenerate_ok: bool,
    pub t_replacement_ok: bool,
}

/// Check that the Green–Julg class of an instance is invariant under
/// equivariant unitary conjugation, degenerate direct summands, and
/// replacement of the operator T.
pub fn class_invariance_suite(
    inst: &RandomInstance,
    conjugation_seeds: u64,
    tol: &Tol,
) -> Result<ClassInvarianceReport> {
    let base = green_julg_class(&inst.module, 0, tol)?.class;

    for k in 0..conjugation_seeds {
        let w = random_equivariant_unitary(inst, 0x517EB_u64.wrapping_add(k));
        let conj = transport(&inst.module, &w);
        let c = green_julg_class(&conj, 0, tol)?.class;
        if c != base {
            return Err(Error::ClassNotInvariant {
                operation: format!("equivariant unitary conjugation (seed {k})"),
            });
        }
    }

    // degenerate summand V ⊕ V^op with the odd swap: its class vanishes, so
    // adding it to the instance leaves the class unchanged
    let ds = direct_sum(&inst.module, &opposite(&inst.module), tol)?;
    let m = inst.module.dim();
    let mut swap = linalg::zeros(2 * m, 2 * m);
    for i in 0..m {
        swap[[i, m + i]] = c64::new(1.0, 0.0);
        swap[[m + i, i]] = c64::new(1.0, 0.0);
    }
    validate_cycle(ds.clone(), swap, tol)?;
    let ds_class = green_julg_class(&ds, 0, tol)?.class;
    let with_ds = direct_sum(&inst.module, &ds, tol)?;
    let c = green_julg_class(&with_ds, 0, tol)?.class;
    let degenerate_ok = ds_class.class.iter().all(|&x| x == 0) && c == base;
    if !degenerate_ok {
        return Err(Error::ClassNotInvariant { operation: "degenerate direct summand".into() });
    }

    // T-replacement: a different admissible odd operator on the same module
    validate_cycle(inst.module.clone(), inst.t_odd.clone(), tol)?;
    validate_cycle(inst.module.clone(), inst.t_odd.mapv(|z| -z), tol)?;
    let c = green_julg_class(&inst.module, 0, tol)?.class;
    let t_replacement_ok = c == base;
    if !t_replacement_ok {
        return Err(Error::ClassNotInvariant { operation: "operator replacement".into() });
    }

    Ok(ClassInvarianceReport {
        class: base,
        conjugation_checks: conjugation_seeds as usize,
        degenerate_ok,
        t_replacement_ok,
    })
}
