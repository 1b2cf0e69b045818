//! Seeded generators for S-equivariant module instances: spectral actions,
//! bimodules assembled from character pieces, odd operators, and equivariant
//! unitaries. Structures are valid by construction; validators run anyway.

use crate::action::{spectral_action, trivial_action, SAlgebraAction};
use crate::error::Result;
use crate::hilbert::{validate_bimodule, HilbertModule, SHilbertBimodule};
use crate::linalg::{self, c64};
use crate::semigroup::InverseSemigroup;
use crate::spectrum::{self, Translated};
use crate::star_algebra::{CStarBlockAlgebra, Tol};
use ndarray::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Even/odd multiplicities per character (same order as `spectrum`); both
/// must be constant on translation orbits of X.
#[derive(Debug, Clone)]
pub struct ModuleSpec {
    pub mult_even: Vec<usize>,
    pub mult_odd: Vec<usize>,
}

impl ModuleSpec {
    pub fn carrier_dim(&self, sizes: &[usize]) -> usize {
        self.mult_even
            .iter()
            .zip(&self.mult_odd)
            .zip(sizes)
            .map(|((&e, &o), &n)| (e + o) * n)
            .sum()
    }
}

/// Positions of the carrier basis vectors of a spectral module:
/// (character index, copy index, block coordinate).
fn layout(spec: &ModuleSpec, sizes: &[usize]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for p in 0..sizes.len() {
        let copies = spec.mult_even[p] + spec.mult_odd[p];
        for c in 0..copies {
            for r in 0..sizes[p] {
                out.push((p, c, r));
            }
        }
    }
    out
}

/// Build the canonical spectral bimodule over (C, B) for a spectral action:
/// the carrier is ⊕_P C^{mult_P} ⊗ C^{n_P}, block P of B acting on the second
/// leg, U_s translating the P-summands along the spectrum.
pub fn spectral_bimodule(act: &SAlgebraAction, spec: &ModuleSpec, tol: &Tol) -> Result<SHilbertBimodule> {
    let sg = &act.sg;
    let b = &act.algebra;
    let x = spectrum::spectrum(sg);
    assert_eq!(b.sizes.len(), x.len(), "spectral action expected (one block per character)");
    let sizes = &b.sizes;
    let lay = layout(spec, sizes);
    let m = lay.len();
    let pos = |p: usize, c: usize, r: usize| -> usize {
        lay.iter().position(|&t| t == (p, c, r)).unwrap()
    };
    let parity: Vec<u8> = lay
        .iter()
        .map(|&(p, c, _)| if c < spec.mult_even[p] { 0 } else { 1 })
        .collect();

    // right action of the flat matrix units: e_{(P,a,b)} sends (P,c,a) to (P,c,b)
    let mut acts = Vec::with_capacity(b.dim());
    for (blk, &n) in sizes.iter().enumerate() {
        for a in 0..n {
            for bb in 0..n {
                let mut mat = linalg::zeros(m, m);
                let copies = spec.mult_even[blk] + spec.mult_odd[blk];
                for c in 0..copies {
                    mat[[pos(blk, c, bb), pos(blk, c, a)]] = c64::new(1.0, 0.0);
                }
                acts.push(mat);
            }
        }
    }
    // inner product: <(P,c,r), (P,c,s)> = E^P_{rs}
    let mut ip = vec![Array1::zeros(b.dim()); m * m];
    for (i, &(p, c, r)) in lay.iter().enumerate() {
        for (j, &(q, d, s)) in lay.iter().enumerate() {
            if p == q && c == d {
                let mut v: Array1<c64> = Array1::zeros(b.dim());
                v[b.block_offset(p) + r * sizes[p] + s] = c64::new(1.0, 0.0);
                ip[i * m + j] = v;
            }
        }
    }
    // U_s: (P,c,r) -> (P_s,c,r) when anchor(P) <= s*s
    let mut u = Vec::with_capacity(sg.order());
    for s in 0..sg.order() {
        let mut mat = linalg::zeros(m, m);
        for (i, &(p, c, r)) in lay.iter().enumerate() {
            if let Translated::Char(q) = spectrum::translate_character(sg, x[p], s) {
                let qi = x.iter().position(|t| t.anchor == q.anchor).unwrap();
                mat[[pos(qi, c, r), i]] = c64::new(1.0, 0.0);
            }
        }
        u.push(mat);
    }
    let base = HilbertModule { algebra: b.clone(), dim: m, parity, act: acts, ip };
    let scalar = CStarBlockAlgebra::scalar();
    let pi = vec![linalg::eye(m)];
    validate_bimodule(
        base,
        scalar.clone(),
        pi,
        u,
        trivial_action(sg, &scalar),
        act.clone(),
        tol,
    )
}

/// Transport every piece of structure through an invertible parity-preserving
/// map `r` (carrier basis change). Axioms are preserved exactly.
pub fn transport(bm: &SHilbertBimodule, r: &Array2<c64>) -> SHilbertBimodule {
    let m = bm.dim();
    let rinv = linalg::inv(r);
    let conj = |t: &Array2<c64>| r.dot(t).dot(&rinv);
    let mut ip = vec![Array1::zeros(bm.base.algebra.dim()); m * m];
    for i in 0..m {
        for j in 0..m {
            let mut v: Array1<c64> = Array1::zeros(bm.base.algebra.dim());
            for k in 0..m {
                for l in 0..m {
                    let c = rinv[[k, i]].conj() * rinv[[l, j]];
                    if c.norm() > 0.0 {
                        v = v + bm.base.inner_basis(k, l).mapv(|z| z * c);
                    }
                }
            }
            ip[i * m + j] = v;
        }
    }
    SHilbertBimodule {
        base: HilbertModule {
            algebra: bm.base.algebra.clone(),
            dim: m,
            parity: bm.base.parity.clone(),
            act: bm.base.act.iter().map(&conj).collect(),
            ip,
        },
        left: bm.left.clone(),
        pi: bm.pi.iter().map(&conj).collect(),
        u: bm.u.iter().map(&conj).collect(),
        act_a: bm.act_a.clone(),
        act_b: bm.act_b.clone(),
        compat: bm.compat,
    }
}

/// A parity-preserving random unitary on a carrier with the given parities.
pub fn random_graded_unitary<R: Rng>(rng: &mut R, parity: &[u8]) -> Array2<c64> {
    let m = parity.len();
    let even: Vec<usize> = (0..m).filter(|&i| parity[i] == 0).collect();
    let odd: Vec<usize> = (0..m).filter(|&i| parity[i] == 1).collect();
    let mut out = linalg::zeros(m, m);
    for part in [even, odd] {
        if part.is_empty() {
            continue;
        }
        let u = linalg::random_unitary(rng, part.len());
        for (a, &i) in part.iter().enumerate() {
            for (b, &j) in part.iter().enumerate() {
                out[[i, j]] = u[[a, b]];
            }
        }
    }
    out
}

/// A seeded random S-equivariant cycle instance over (C, B).
#[derive(Debug, Clone)]
pub struct RandomInstance {
    pub action: SAlgebraAction,
    pub spec: ModuleSpec,
    /// the transported spectral bimodule
    pub module: SHilbertBimodule,
    /// an adjointable odd operator on the module
    pub t_odd: Array2<c64>,
    /// the basis change used (maps canonical coordinates to module coordinates)
    pub transport: Array2<c64>,
}

/// Multiplicities constant on translation orbits: orbits of X correspond to
/// D-classes of anchors.
fn orbit_of(sg: &InverseSemigroup) -> Vec<usize> {
    let x = spectrum::spectrum(sg);
    let classes = sg.d_classes();
    x.iter()
        .map(|p| classes.iter().position(|c| c.idempotents.contains(&p.anchor)).unwrap())
        .collect()
}

pub fn random_instance(sg: &InverseSemigroup, seed: u64, max_dim: usize) -> Result<RandomInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = sg.d_classes();
    let orbit = orbit_of(sg);
    let nx = orbit.len();
    for _attempt in 0..64 {
        // block sizes per D-class: mostly 1, occasionally 2
        let class_sizes: Vec<usize> =
            classes.iter().map(|_| if rng.gen_bool(0.2) { 2 } else { 1 }).collect();
        let me_class: Vec<usize> = classes.iter().map(|_| rng.gen_range(0..=2)).collect();
        let mo_class: Vec<usize> = classes.iter().map(|_| rng.gen_range(0..=1)).collect();
        let spec = ModuleSpec {
            mult_even: (0..nx).map(|p| me_class[orbit[p]]).collect(),
            mult_odd: (0..nx).map(|p| mo_class[orbit[p]]).collect(),
        };
        let action = spectral_action(sg, &class_sizes)?;
        let dim = spec.carrier_dim(&action.algebra.sizes);
        if dim == 0 || dim > max_dim {
            continue;
        }
        let canonical = spectral_bimodule(&action, &spec, &Tol::default())?;
        let r = random_graded_unitary(&mut rng, &canonical.base.parity);
        let module = transport(&canonical, &r);
        let t_odd = r.dot(&random_odd_commutant(&mut rng, &action, &spec)).dot(&linalg::dagger(&r));
        return Ok(RandomInstance { action, spec, module, t_odd, transport: r });
    }
    Err(crate::error::Error::Input(format!(
        "no admissible module spec of dimension <= {max_dim} found"
    )))
}

/// A random odd operator commuting with the right action, in canonical
/// coordinates: ⊕_P t_P ⊗ 1 with t_P swapping parity between the copies.
fn random_odd_commutant<R: Rng>(
    rng: &mut R,
    act: &SAlgebraAction,
    spec: &ModuleSpec,
) -> Array2<c64> {
    let sizes = &act.algebra.sizes;
    let lay = layout(spec, sizes);
    let m = lay.len();
    let mut out = linalg::zeros(m, m);
    for p in 0..sizes.len() {
        let me = spec.mult_even[p];
        let copies = me + spec.mult_odd[p];
        let t = linalg::random_matrix(rng, copies, copies);
        for c in 0..copies {
            for d in 0..copies {
                let odd_pair = (c < me) != (d < me);
                if !odd_pair {
                    continue;
                }
                for (i, &(pp, cc, rr)) in lay.iter().enumerate() {
                    if pp == p && cc == c {
                        let j = lay.iter().position(|&w| w == (p, d, rr)).unwrap();
                        out[[i, j]] = t[[c, d]];
                    }
                }
            }
        }
    }
    out
}

/// A random even unitary commuting with U, the right action, and pi, in the
/// instance's coordinates: ⊕_P w_P ⊗ 1 with w constant on orbits.
pub fn random_equivariant_unitary(inst: &RandomInstance, seed: u64) -> Array2<c64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sg = &inst.action.sg;
    let orbit = orbit_of(sg);
    let sizes = &inst.action.algebra.sizes;
    let lay = layout(&inst.spec, sizes);
    let m = lay.len();
    let n_orbits = orbit.iter().copied().max().map(|x| x + 1).unwrap_or(0);
    // one graded unitary on the copy space per orbit
    let mut per_orbit: Vec<Option<Array2<c64>>> = vec![None; n_orbits];
    for p in 0..sizes.len() {
        let o = orbit[p];
        if per_orbit[o].is_none() {
            let me = inst.spec.mult_even[p];
            let copies = me + inst.spec.mult_odd[p];
            let par: Vec<u8> = (0..copies).map(|c| u8::from(c >= me)).collect();
            per_orbit[o] = Some(random_graded_unitary(&mut rng, &par));
        }
    }
    let mut w = linalg::zeros(m, m);
    for (i, &(p, c, r)) in lay.iter().enumerate() {
        let wp = per_orbit[orbit[p]].as_ref().unwrap();
        let copies = inst.spec.mult_even[p] + inst.spec.mult_odd[p];
        for d in 0..copies {
            let j = lay.iter().position(|&t| t == (p, d, r)).unwrap();
            w[[i, j]] = wp[[c, d]];
        }
    }
    inst.transport.dot(&w).dot(&linalg::dagger(&inst.transport))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::hilbert::morphism_residual;

    #[test]
    fn random_instances_validate() {
        for (name, sg) in corpus::structure_corpus().into_iter().take(6) {
            if sg.order() > 10 {
                continue;
            }
            let inst = random_instance(&sg, 7, 6).unwrap();
            assert!(inst.module.resolution_residual() < 1e-10, "{name}");
            // t_odd is odd and adjointable
            let g = inst.module.base.grading();
            let anti = &g.dot(&inst.t_odd) + &inst.t_odd.dot(&g);
            assert!(linalg::norm_max(&anti) < 1e-10, "{name}");
            inst.module.base.adjoint(&inst.t_odd, &Tol::default()).unwrap();
        }
    }

    #[test]
    fn equivariant_unitary_is_a_morphism() {
        let sg = corpus::symmetric_inverse_monoid(2).unwrap();
        let inst = random_instance(&sg, 3, 6).unwrap();
        let w = random_equivariant_unitary(&inst, 11);
        let r = morphism_residual(&inst.module, &inst.module, &w);
        assert!(r < 1e-9, "residual {r}");
    }

    #[test]
    fn transport_preserves_validation() {
        let sg = corpus::named("b2").unwrap();
        let inst = random_instance(&sg, 5, 6).unwrap();
        let bm = &inst.module;
        validate_bimodule(
            bm.base.clone(),
            bm.left.clone(),
            bm.pi.clone(),
            bm.u.clone(),
            bm.act_a.clone(),
            bm.act_b.clone(),
            &Tol::default(),
        )
        .unwrap();
    }
}
