use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::{FgAbGroup, GroupMap, IntMatrix};
use crate::p1cohomology::TwistSum;
use crate::zorder::{RightModule, ZOrder};

/// A graded right module over `R[T0, T1]` on a finite degree window.
/// Components below the window are zero; above it they are unknown and the
/// `stable` flag asserts the window reaches the eventual behaviour.
#[derive(Clone, Debug)]
pub struct GradedModule {
    order: Arc<ZOrder>,
    d_min: i64,
    components: Vec<FgAbGroup>,
    t0: Vec<IntMatrix>,
    t1: Vec<IntMatrix>,
    action: Option<Vec<Vec<IntMatrix>>>,
    presentation_degree: i64,
    stable: bool,
}

/// Consecutive degrees over which invariants must stay constant.
pub fn stabilization_margin(presentation_degree: i64) -> i64 {
    4.max(presentation_degree + 2)
}

impl GradedModule {
    /// `t0[k], t1[k]` map degree `d_min + k` to `d_min + k + 1`;
    /// `action[k][i]` is the right action of `e_i` in degree `d_min + k`.
    pub fn new(
        order: &Arc<ZOrder>,
        d_min: i64,
        components: Vec<FgAbGroup>,
        t0: Vec<IntMatrix>,
        t1: Vec<IntMatrix>,
        action: Option<Vec<Vec<IntMatrix>>>,
        presentation_degree: i64,
    ) -> Result<Self> {
        let len = components.len();
        if len == 0 {
            return Err(Error::WindowTooSmall("empty degree window".into()));
        }
        if t0.len() != len - 1 || t1.len() != len - 1 {
            return Err(Error::DimensionMismatch(format!("{len} components need {} multiplication maps", len - 1)));
        }
        for k in 0..len - 1 {
            GroupMap::new(&components[k], &components[k + 1], t0[k].clone())?;
            GroupMap::new(&components[k], &components[k + 1], t1[k].clone())?;
        }
        for k in 0..len.saturating_sub(2) {
            let a = &t1[k + 1] * &t0[k];
            let b = &t0[k + 1] * &t1[k];
            if !components[k + 2].maps_agree(&a, &b) {
                return Err(Error::InvalidModule(format!("T0 and T1 do not commute from degree {}", d_min + k as i64)));
            }
        }
        if let Some(act) = &action {
            if act.len() != len {
                return Err(Error::DimensionMismatch("order action missing in some degree".into()));
            }
            for (k, mats) in act.iter().enumerate() {
                RightModule::new(order, components[k].clone(), mats.clone())?;
                if k + 1 < len {
                    for (i, m) in mats.iter().enumerate() {
                        let next = &act[k + 1][i];
                        for t in [&t0[k], &t1[k]] {
                            if !components[k + 1].maps_agree(&(t * m), &(next * t)) {
                                return Err(Error::InvalidModule(format!(
                                    "order action of e{i} does not commute with multiplication in degree {}",
                                    d_min + k as i64
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(Self::assemble(order.clone(), d_min, components, t0, t1, action, presentation_degree))
    }

    fn assemble(
        order: Arc<ZOrder>,
        d_min: i64,
        components: Vec<FgAbGroup>,
        t0: Vec<IntMatrix>,
        t1: Vec<IntMatrix>,
        action: Option<Vec<Vec<IntMatrix>>>,
        presentation_degree: i64,
    ) -> Self {
        let d_max = d_min + components.len() as i64 - 1;
        let stable = presentation_degree <= d_max - stabilization_margin(presentation_degree);
        GradedModule { order, d_min, components, t0, t1, action, presentation_degree, stable }
    }

    /// `P ⊗ R[T0, T1][shift]` on `[d_min, d_max]`; its image in qgr is `P ⊗ O(shift)`.
    pub fn free(p: &RightModule, shift: i64, d_min: i64, d_max: i64) -> Result<Self> {
        if d_max < d_min {
            return Err(Error::WindowTooSmall(format!("[{d_min}, {d_max}]")));
        }
        let g = p.group().generators();
        let monomials = |d: i64| (d + shift + 1).max(0) as usize;
        let degrees: Vec<i64> = (d_min..=d_max).collect();
        let components = degrees.iter().map(|&d| p.group().power(monomials(d))).collect();
        let shifted = |d: i64, offset: usize| {
            let (src, dst) = (monomials(d), monomials(d + 1));
            IntMatrix::from_fn(dst * g, src * g, |row, col| {
                let (i, a) = (col / g, col % g);
                let (j, b) = (row / g, row % g);
                ((j == i + offset && a == b) as i64).into()
            })
        };
        let t0 = degrees[..degrees.len() - 1].iter().map(|&d| shifted(d, 0)).collect();
        let t1 = degrees[..degrees.len() - 1].iter().map(|&d| shifted(d, 1)).collect();
        let action = degrees
            .iter()
            .map(|&d| {
                (0..p.order().rank())
                    .map(|i| IntMatrix::block_diagonal(&vec![p.action(i); monomials(d)]))
                    .collect()
            })
            .collect();
        Ok(Self::assemble(p.order().clone(), d_min, components, t0, t1, Some(action), (-shift).max(d_min)))
    }

    /// Finitely many nonzero components with zero multiplication maps.
    pub fn finite_length(order: &Arc<ZOrder>, pieces: &[(i64, RightModule)], d_min: i64, d_max: i64) -> Result<Self> {
        if d_max < d_min {
            return Err(Error::WindowTooSmall(format!("[{d_min}, {d_max}]")));
        }
        let mut comps: Vec<Option<&RightModule>> = vec![None; (d_max - d_min + 1) as usize];
        for (d, p) in pieces {
            if *d < d_min || *d > d_max {
                return Err(Error::WindowTooSmall(format!("piece in degree {d} outside [{d_min}, {d_max}]")));
            }
            comps[(*d - d_min) as usize] = Some(p);
        }
        let groups: Vec<FgAbGroup> =
            comps.iter().map(|c| c.map_or_else(FgAbGroup::trivial, |p| p.group().clone())).collect();
        let zero = |k: usize| IntMatrix::zeros(groups[k + 1].generators(), groups[k].generators());
        let t0: Vec<IntMatrix> = (0..groups.len() - 1).map(zero).collect();
        let t1 = t0.clone();
        let action = comps
            .iter()
            .map(|c| {
                (0..order.rank())
                    .map(|i| c.map_or_else(|| IntMatrix::zeros(0, 0), |p| p.action(i).clone()))
                    .collect()
            })
            .collect();
        let top = pieces.iter().map(|(d, _)| *d).max().unwrap_or(d_min);
        Self::new(order, d_min, groups, t0, t1, Some(action), top)
    }

    pub fn direct_sum(parts: &[&GradedModule]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidModule("empty direct sum".into()))?;
        if parts.iter().any(|p| p.d_min != first.d_min || p.components.len() != first.components.len()) {
            return Err(Error::WindowTooSmall("direct sum of modules on different windows".into()));
        }
        if parts.iter().any(|p| p.order != first.order) {
            return Err(Error::InvalidModule("direct sum over different orders".into()));
        }
        let len = first.components.len();
        let components = (0..len)
            .map(|k| {
                let gs: Vec<&FgAbGroup> = parts.iter().map(|p| &p.components[k]).collect();
                FgAbGroup::direct_sum(&gs)
            })
            .collect();
        let blocks = |pick: &dyn Fn(&GradedModule) -> &IntMatrix| {
            let ms: Vec<&IntMatrix> = parts.iter().map(|p| pick(p)).collect();
            IntMatrix::block_diagonal(&ms)
        };
        let t0 = (0..len - 1).map(|k| blocks(&|p| &p.t0[k])).collect();
        let t1 = (0..len - 1).map(|k| blocks(&|p| &p.t1[k])).collect();
        let action = if parts.iter().all(|p| p.action.is_some()) {
            Some(
                (0..len)
                    .map(|k| {
                        (0..first.order.rank())
                            .map(|i| blocks(&|p| &p.action.as_ref().expect("checked")[k][i]))
                            .collect()
                    })
                    .collect(),
            )
        } else {
            None
        };
        let pd = parts.iter().map(|p| p.presentation_degree).max().expect("nonempty");
        Ok(Self::assemble(first.order.clone(), first.d_min, components, t0, t1, action, pd))
    }

    /// `⊕ P_i ⊗ R[T0, T1][n_i]`
    pub fn from_twist_sum(e: &TwistSum, d_min: i64, d_max: i64) -> Result<Self> {
        let parts: Result<Vec<GradedModule>> =
            e.summands().iter().map(|(p, n)| Self::free(p, *n, d_min, d_max)).collect();
        let parts = parts?;
        if parts.is_empty() {
            let comps = vec![FgAbGroup::trivial(); (d_max - d_min + 1).max(1) as usize];
            let maps = vec![IntMatrix::zeros(0, 0); comps.len() - 1];
            return Ok(Self::assemble(e.order().clone(), d_min, comps, maps.clone(), maps, None, d_min));
        }
        let refs: Vec<&GradedModule> = parts.iter().collect();
        Self::direct_sum(&refs)
    }

    pub fn order(&self) -> &Arc<ZOrder> {
        &self.order
    }

    pub fn d_min(&self) -> i64 {
        self.d_min
    }

    pub fn d_max(&self) -> i64 {
        self.d_min + self.components.len() as i64 - 1
    }

    pub fn presentation_degree(&self) -> i64 {
        self.presentation_degree
    }

    pub fn is_stable(&self) -> bool {
        self.stable
    }

    pub fn margin(&self) -> i64 {
        stabilization_margin(self.presentation_degree)
    }

    /// Override the stability assertion.
    pub fn with_stable(mut self, stable: bool) -> Self {
        self.stable = stable;
        self
    }

    fn index(&self, d: i64) -> Result<Option<usize>> {
        if d > self.d_max() {
            return Err(Error::WindowTooSmall(format!("degree {d} above window maximum {}", self.d_max())));
        }
        Ok((d >= self.d_min).then(|| (d - self.d_min) as usize))
    }

    pub fn component(&self, d: i64) -> Result<FgAbGroup> {
        Ok(self.index(d)?.map_or_else(FgAbGroup::trivial, |k| self.components[k].clone()))
    }

    pub fn gens(&self, d: i64) -> Result<usize> {
        Ok(self.component(d)?.generators())
    }

    /// `T0^a T1^b : M_d → M_{d+a+b}` on ambient generators.
    pub fn monomial_map(&self, d: i64, a: usize, b: usize) -> Result<IntMatrix> {
        let target = d + (a + b) as i64;
        let mut m = IntMatrix::identity(self.gens(d)?);
        let mut deg = d;
        for (count, which) in [(a, 0), (b, 1)] {
            for _ in 0..count {
                let next = self.gens(deg + 1)?;
                m = match self.index(deg)? {
                    Some(k) if k + 1 < self.components.len() => {
                        let t = if which == 0 { &self.t0[k] } else { &self.t1[k] };
                        t * &m
                    }
                    _ => IntMatrix::zeros(next, m.cols()),
                };
                deg += 1;
            }
        }
        debug_assert_eq!(deg, target);
        Ok(m)
    }

    /// `M_{≥d}`: components below `d` replaced by zero.
    pub fn truncate(&self, d: i64) -> Result<Self> {
        if d > self.d_max() {
            return Err(Error::WindowTooSmall(format!("truncation at {d} above window maximum {}", self.d_max())));
        }
        if d <= self.d_min {
            return Ok(self.clone());
        }
        let cut = (d - self.d_min) as usize;
        let mut components = self.components.clone();
        let mut t0 = self.t0.clone();
        let mut t1 = self.t1.clone();
        let mut action = self.action.clone();
        for k in 0..cut {
            components[k] = FgAbGroup::trivial();
            if let Some(act) = &mut action {
                act[k] = vec![IntMatrix::zeros(0, 0); self.order.rank()];
            }
        }
        for k in 0..cut {
            let rows = components[k + 1].generators();
            t0[k] = IntMatrix::zeros(rows, 0);
            t1[k] = IntMatrix::zeros(rows, 0);
        }
        Ok(Self::assemble(
            self.order.clone(),
            self.d_min,
            components,
            t0,
            t1,
            action,
            self.presentation_degree.max(d),
        )
        .with_stable(self.stable))
    }

    /// `M[k]` with `M[k]_i = M_{i+k}`.
    pub fn shift(&self, k: i64) -> Self {
        let mut m = self.clone();
        m.d_min -= k;
        m.presentation_degree -= k;
        m
    }

    pub fn ranks(&self) -> Vec<(i64, usize)> {
        self.components.iter().enumerate().map(|(k, g)| (self.d_min + k as i64, g.rank())).collect()
    }

    pub(crate) fn parts(&self) -> (&[FgAbGroup], &[IntMatrix], &[IntMatrix], Option<&Vec<Vec<IntMatrix>>>) {
        (&self.components, &self.t0, &self.t1, self.action.as_ref())
    }

    pub(crate) fn rebuild(
        &self,
        components: Vec<FgAbGroup>,
        t0: Vec<IntMatrix>,
        t1: Vec<IntMatrix>,
        action: Option<Vec<Vec<IntMatrix>>>,
    ) -> Result<Self> {
        Ok(Self::new(&self.order, self.d_min, components, t0, t1, action, self.presentation_degree)?
            .with_stable(self.stable))
    }
}
