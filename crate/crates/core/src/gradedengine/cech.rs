use super::GradedModule;
use crate::error::{Error, Result};
use crate::exactlin::{FgAbGroup, GroupMap, IntMatrix, Kernel};

/// Highest degree the Čech computation at `d` reads, for a module generated
/// in degrees `≤ presentation_degree`.
pub fn cech_window_top(presentation_degree: i64, d: i64) -> i64 {
    let start = (presentation_degree - d).max(0);
    d + 2 * (start + super::stabilization_margin(presentation_degree)) + 2
}

struct Stage {
    kernel: Kernel,
    cokernel: FgAbGroup,
}

fn stage(m: &GradedModule, d: i64, k: usize) -> Result<Stage> {
    let c0 = m.component(d + k as i64)?;
    let c1 = m.component(d + 2 * k as i64)?;
    let x = m.monomial_map(d + k as i64, 0, k)?;
    let y = m.monomial_map(d + k as i64, k, 0)?.scale(&(-1).into());
    let delta = GroupMap::new(&FgAbGroup::direct_sum(&[&c0, &c0]), &c1, x.hstack(&y))?;
    Ok(Stage { kernel: delta.kernel(), cokernel: delta.cokernel() })
}

/// Map between kernel groups induced by an ambient map, lifted through the
/// target inclusion.
fn restrict(from: &Kernel, to: &Kernel, ambient: &IntMatrix) -> Result<GroupMap> {
    let incl = from.inclusion.matrix();
    let cols: Option<Vec<_>> = (0..incl.cols()).map(|j| to.inclusion.lift(&ambient.mul_vec(&incl.column(j)))).collect();
    let cols = cols.ok_or(Error::NotWellDefined)?;
    GroupMap::new(&from.group, &to.group, IntMatrix::from_columns(to.group.generators(), &cols))
}

fn transition_is_iso(m: &GradedModule, d: i64, k: usize, cur: &Stage, next: &Stage) -> Result<bool> {
    let lo = d + k as i64;
    let tr0 = IntMatrix::block_diagonal(&[&m.monomial_map(lo, 1, 0)?, &m.monomial_map(lo, 0, 1)?]);
    if !restrict(&cur.kernel, &next.kernel, &tr0)?.is_isomorphism() {
        return Ok(false);
    }
    let tr1 = m.monomial_map(d + 2 * k as i64, 1, 1)?;
    Ok(GroupMap::new(&cur.cokernel, &next.cokernel, tr1)?.is_isomorphism())
}

/// `H⁰(πM(d))` and `H¹(πM(d))` from the stabilized Čech complex
/// `M_{T0} ⊕ M_{T1} → M_{T0T1}` in degree `d`.
pub fn cech_cohomology(m: &GradedModule, d: i64) -> Result<(FgAbGroup, FgAbGroup)> {
    if !m.is_stable() {
        return Err(Error::NotStable);
    }
    let margin = m.margin() as usize;
    let mut k = (m.presentation_degree() - d).max(0) as usize;
    let mut cur = stage(m, d, k)?;
    let mut run = 0;
    let mut run_start = k;
    while d + 2 * (k as i64 + 1) <= m.d_max() {
        let next = stage(m, d, k + 1)?;
        if transition_is_iso(m, d, k, &cur, &next)? {
            run += 1;
            if run == margin {
                let s = stage(m, d, run_start)?;
                return Ok((s.kernel.group, s.cokernel));
            }
        } else {
            run = 0;
            run_start = k + 1;
        }
        cur = next;
        k += 1;
    }
    Err(Error::StabilizationNotDetected { degree: d + 2 * k as i64 })
}

/// `Γ(πM)_d = H⁰(πM(d))` over a range of degrees.
pub fn gamma_sections(m: &GradedModule, degrees: impl IntoIterator<Item = i64>) -> Result<Vec<(i64, FgAbGroup)>> {
    degrees.into_iter().map(|d| Ok((d, cech_cohomology(m, d)?.0))).collect()
}

/// Degreewise `ker(M_d → M_top ⊕ M_top)` under `(T0^K, T1^K)`, `K = top − d`.
fn torsion_kernels(m: &GradedModule) -> Result<Vec<Kernel>> {
    let top = m.d_max();
    (m.d_min()..=top)
        .map(|d| {
            let k = (top - d) as usize;
            let target = m.component(top)?;
            let map = m.monomial_map(d, k, 0)?.vstack(&m.monomial_map(d, 0, k)?);
            Ok(GroupMap::new(&m.component(d)?, &FgAbGroup::direct_sum(&[&target, &target]), map)?.kernel())
        })
        .collect()
}

/// `τ(M)`, checking that `M/τ(M)` has no torsion left.
pub fn torsion_submodule(m: &GradedModule) -> Result<GradedModule> {
    if !m.is_stable() {
        return Err(Error::NotStable);
    }
    let kernels = torsion_kernels(m)?;
    let (comps, t0, t1, action) = m.parts();
    let n = comps.len();
    let restrict_all = |maps: &[IntMatrix]| -> Result<Vec<IntMatrix>> {
        (0..n - 1).map(|k| Ok(restrict(&kernels[k], &kernels[k + 1], &maps[k])?.matrix().clone())).collect()
    };
    let sub_t0 = restrict_all(t0)?;
    let sub_t1 = restrict_all(t1)?;
    let sub_action = match action {
        Some(act) => Some(
            (0..n)
                .map(|k| {
                    act[k]
                        .iter()
                        .map(|a| Ok(restrict(&kernels[k], &kernels[k], a)?.matrix().clone()))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let groups = kernels.iter().map(|k| k.group.clone()).collect();
    let tau = m.rebuild(groups, sub_t0, sub_t1, sub_action)?;

    let quotient_groups = (0..n)
        .map(|k| FgAbGroup::new(comps[k].relations().hstack(kernels[k].inclusion.matrix())))
        .collect();
    let quotient = m.rebuild(quotient_groups, t0.to_vec(), t1.to_vec(), action.cloned())?;
    for (k, ker) in torsion_kernels(&quotient)?.iter().enumerate() {
        if !ker.group.is_trivial() {
            return Err(Error::StabilizationNotDetected { degree: m.d_min() + k as i64 });
        }
    }
    Ok(tau)
}
