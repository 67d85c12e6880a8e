//! Turning a parsed scenario into checked library objects.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use nc_arakelov::arithbundles::{ArithBundle, ArithLineBundle, OmegaChoice};
use nc_arakelov::exactlin::{FgAbGroup, IntMatrix, Matrix};
use nc_arakelov::p1cohomology::{AutData, InvertibleObject, TwistSum};
use nc_arakelov::scalar::render_rational;
use nc_arakelov::zorder::{dual_bimodule, validate_order, Bimodule, OrderElement, RightModule, ZOrder};
use nc_arakelov::Scalar;

use crate::error::CliError;
use crate::scenario::{AutSpec, BimoduleSpec, GroupSpec, Int, ModuleSpec, Num, OrderSpec, Scenario};

pub const STRUCTURE: &str = "A";
pub const OMEGA: &str = "omega";
pub const REGULAR: &str = "R";
pub const DUAL: &str = "dual";

pub struct Resolved<T: Scalar> {
    pub order: Arc<ZOrder>,
    pub modules: BTreeMap<String, RightModule>,
    pub bimodules: BTreeMap<String, Bimodule>,
    pub bundles: BTreeMap<String, ArithBundle<T>>,
    pub lines: BTreeMap<String, ArithLineBundle<T>>,
    pub omega: OmegaChoice<T>,
    /// Elements drawn for `random_unit` automorphisms, rendered.
    pub draws: BTreeMap<String, Vec<String>>,
    pub warnings: Vec<String>,
}

impl<T: Scalar> Resolved<T> {
    pub fn bundle(&self, name: &str) -> Result<ArithBundle<T>, CliError> {
        if let Some(b) = self.bundles.get(name) {
            return Ok(b.clone());
        }
        if let Some(l) = self.lines.get(name) {
            return Ok(l.as_bundle());
        }
        match name {
            STRUCTURE => Ok(ArithBundle::structure(&self.order)),
            OMEGA => Ok(self.omega.as_bundle()),
            _ => Err(CliError::validation(name, "no bundle or line bundle with this name")),
        }
    }

    pub fn line(&self, name: &str) -> Result<ArithLineBundle<T>, CliError> {
        if let Some(l) = self.lines.get(name) {
            return Ok(l.clone());
        }
        if name == STRUCTURE {
            return Ok(ArithLineBundle::structure(&self.order));
        }
        Err(CliError::validation(name, "no line bundle with this name"))
    }
}

pub fn build_order(spec: &OrderSpec) -> Result<ZOrder, CliError> {
    match spec {
        OrderSpec::Builtin(name) => ZOrder::builtin(name).ok_or_else(|| {
            CliError::validation(
                format!("order {name}"),
                format!("unknown built-in order; known: {}", ZOrder::BUILTIN_NAMES.join(", ")),
            )
        }),
        OrderSpec::Custom { name, constants, unit } => {
            let c: Vec<Vec<Vec<BigInt>>> =
                constants.iter().map(|row| row.iter().map(|v| ints(v)).collect()).collect();
            validate_order(name, &c, &ints(unit)).map_err(CliError::core(format!("order {name}")))
        }
    }
}

fn ints(v: &[Int]) -> Vec<BigInt> {
    v.iter().map(|i| i.0.clone()).collect()
}

fn int_matrix(entity: &str, rows: &[Vec<Int>], shape: (usize, usize)) -> Result<IntMatrix, CliError> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(CliError::validation(entity, format!("expected a {}x{} integer matrix", shape.0, shape.1)));
    }
    Ok(IntMatrix::from_fn(shape.0, shape.1, |i, j| rows[i][j].0.clone()))
}

fn group(spec: &GroupSpec) -> FgAbGroup {
    let n = spec.rank + spec.torsion.len();
    let mut rel = IntMatrix::zeros(n, spec.torsion.len());
    for (k, t) in spec.torsion.iter().enumerate() {
        rel.set(spec.rank + k, k, t.0.clone());
    }
    FgAbGroup::new(rel)
}

fn build_module(order: &Arc<ZOrder>, name: &str, spec: &ModuleSpec) -> Result<RightModule, CliError> {
    let entity = format!("module {name}");
    match spec {
        ModuleSpec::Regular => Ok(RightModule::regular(order)),
        ModuleSpec::Character { group: g, values } => {
            if values.len() != order.rank() {
                return Err(CliError::validation(entity, format!("needs {} character values", order.rank())));
            }
            RightModule::through_character(order, group(g), values).map_err(CliError::core(entity))
        }
        ModuleSpec::Explicit { generators, relations, action } => {
            let n = *generators;
            if relations.iter().any(|c| c.len() != n) {
                return Err(CliError::validation(entity, format!("relations must have length {n}")));
            }
            let rel = IntMatrix::from_fn(n, relations.len(), |i, j| relations[j][i].0.clone());
            if action.len() != order.rank() {
                return Err(CliError::validation(entity, format!("needs {} action matrices", order.rank())));
            }
            let maps: Result<Vec<IntMatrix>, CliError> =
                action.iter().map(|m| int_matrix(&entity, m, (n, n))).collect();
            RightModule::new(order, FgAbGroup::new(rel), maps?).map_err(CliError::core(entity))
        }
    }
}

fn build_bimodule(order: &Arc<ZOrder>, name: &str, spec: &BimoduleSpec) -> Result<Bimodule, CliError> {
    let entity = format!("bimodule {name}");
    let r = order.rank();
    match spec {
        BimoduleSpec::Regular => Ok(Bimodule::regular(order)),
        BimoduleSpec::Dual => Ok(dual_bimodule(order)),
        BimoduleSpec::Characters { left, right } => {
            if left.len() != r || right.len() != r {
                return Err(CliError::validation(entity, format!("needs {r} left and {r} right values")));
            }
            let m = RightModule::through_character(order, FgAbGroup::free(1), right)
                .map_err(CliError::core(entity.clone()))?;
            let l = left.iter().map(|&v| IntMatrix::diagonal(&[v])).collect();
            Bimodule::new(m, l).map_err(CliError::core(entity))
        }
        BimoduleSpec::Explicit { rank, left, right } => {
            if left.len() != r || right.len() != r {
                return Err(CliError::validation(entity, format!("needs {r} left and {r} right matrices")));
            }
            let lm: Result<Vec<_>, _> = left.iter().map(|m| int_matrix(&entity, m, (*rank, *rank))).collect();
            let rm: Result<Vec<_>, _> = right.iter().map(|m| int_matrix(&entity, m, (*rank, *rank))).collect();
            let m = RightModule::new(order, FgAbGroup::free(*rank), rm?).map_err(CliError::core(entity.clone()))?;
            Bimodule::new(m, lm?).map_err(CliError::core(entity))
        }
    }
}

/// Random element of `R ⊗ Q` with nonzero norm.
pub fn random_unit(order: &ZOrder, rng: &mut ChaCha8Rng, max: i64, denominator: i64) -> Vec<BigRational> {
    loop {
        let c: Vec<BigRational> = (0..order.rank())
            .map(|_| {
                let p = rng.gen_range(-max..=max);
                let q = rng.gen_range(1..=denominator.max(1));
                BigRational::new(p.into(), q.into())
            })
            .collect();
        if !order.norm(&OrderElement(c.clone())).is_zero() {
            return c;
        }
    }
}

fn to_scalar<T: Scalar>(n: &Num) -> T {
    T::from_rational(&n.to_rational())
}

/// Concrete form of an automorphism before it is attached to an object.
enum Aut {
    Identity,
    Scalar(Num),
    Matrix(Vec<Vec<Num>>),
    Element(Vec<Num>),
}

impl Aut {
    fn realize<T: Scalar>(&self, entity: &str, module: &RightModule, bimodule: Option<&Bimodule>) -> Result<Matrix<T>, CliError> {
        let n = module.rank();
        match self {
            Aut::Identity => Ok(Matrix::identity(n)),
            Aut::Scalar(c) => Ok(Matrix::scalar(n, to_scalar(c))),
            Aut::Matrix(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(CliError::validation(entity, format!("expected a {n}x{n} matrix")));
                }
                Ok(Matrix::from_fn(n, n, |i, j| to_scalar(&rows[i][j])))
            }
            Aut::Element(c) => {
                let b = bimodule.ok_or_else(|| {
                    CliError::validation(entity, "left multiplication needs a bimodule (regular, dual or a line bundle)")
                })?;
                if c.len() != b.order().rank() {
                    return Err(CliError::validation(entity, format!("element needs {} coordinates", b.order().rank())));
                }
                Ok(b.real_left_action(&OrderElement(c.iter().map(to_scalar).collect())))
            }
        }
    }
}

pub fn resolve<T: Scalar>(s: &Scenario, rng: &mut ChaCha8Rng) -> Result<Resolved<T>, CliError> {
    let order = Arc::new(build_order(&s.order)?);
    let mut warnings = Vec::new();

    let mut modules = BTreeMap::new();
    let mut module_bimodule: BTreeMap<String, Bimodule> = BTreeMap::new();
    modules.insert(REGULAR.to_string(), RightModule::regular(&order));
    module_bimodule.insert(REGULAR.to_string(), Bimodule::regular(&order));
    for (name, spec) in &s.modules {
        modules.insert(name.clone(), build_module(&order, name, spec)?);
        if matches!(spec, ModuleSpec::Regular) {
            module_bimodule.insert(name.clone(), Bimodule::regular(&order));
        } else {
            module_bimodule.remove(name);
        }
    }

    let mut bimodules = BTreeMap::new();
    bimodules.insert(REGULAR.to_string(), Bimodule::regular(&order));
    bimodules.insert(DUAL.to_string(), dual_bimodule(&order));
    for (name, spec) in &s.bimodules {
        bimodules.insert(name.clone(), build_bimodule(&order, name, spec)?);
    }

    let mut auts = BTreeMap::new();
    let mut draws = BTreeMap::new();
    for (name, spec) in &s.automorphisms {
        let aut = match spec {
            AutSpec::Identity => Aut::Identity,
            AutSpec::Scalar(c) => Aut::Scalar(c.clone()),
            AutSpec::Matrix(rows) => Aut::Matrix(rows.clone()),
            AutSpec::LeftMult(c) => Aut::Element(c.clone()),
            AutSpec::RandomUnit { max, denominator } => {
                if *max < 1 {
                    return Err(CliError::validation(format!("automorphism {name}"), "max must be positive"));
                }
                let c = random_unit(&order, rng, *max, *denominator);
                draws.insert(name.clone(), c.iter().map(render_rational).collect());
                Aut::Element(c.into_iter().map(Num::Exact).collect())
            }
        };
        auts.insert(name.clone(), aut);
    }
    let lookup = |name: &Option<String>, entity: &str| -> Result<&Aut, CliError> {
        match name {
            None => Ok(&Aut::Identity),
            Some(a) => auts
                .get(a)
                .ok_or_else(|| CliError::validation(entity, format!("unknown automorphism `{a}`"))),
        }
    };

    let dual = dual_bimodule(&order);
    let omega = match &s.omega {
        None => OmegaChoice::identity(&order),
        Some(o) => {
            let alpha = lookup(&Some(o.automorphism.clone()), OMEGA)?.realize(OMEGA, dual.as_right(), Some(&dual))?;
            OmegaChoice::new(&order, alpha).map_err(CliError::core(OMEGA))?
        }
    };

    let mut lines = BTreeMap::new();
    for (name, spec) in &s.line_bundles {
        let entity = format!("line bundle {name}");
        let j = bimodules
            .get(&spec.bimodule)
            .ok_or_else(|| CliError::validation(&entity, format!("unknown bimodule `{}`", spec.bimodule)))?;
        let k = match &spec.inverse {
            None => None,
            Some(k) => Some(
                bimodules
                    .get(k)
                    .ok_or_else(|| CliError::validation(&entity, format!("unknown bimodule `{k}`")))?
                    .clone(),
            ),
        };
        let line = InvertibleObject::new(j.clone(), spec.twist, k).map_err(CliError::core(entity.clone()))?;
        if !line.is_structure() {
            let report = line.necessary_conditions().map_err(CliError::core(entity.clone()))?;
            warnings.extend(report.warnings.iter().map(|w| format!("{entity}: {w}")));
        }
        let beta = lookup(&spec.automorphism, &entity)?.realize(&entity, j.as_right(), Some(j))?;
        lines.insert(name.clone(), ArithLineBundle::new(line, beta).map_err(CliError::core(entity))?);
    }

    let mut bundles = BTreeMap::new();
    for (name, spec) in &s.bundles {
        let entity = format!("bundle {name}");
        let mut summands = Vec::new();
        let mut blocks = Vec::new();
        for (i, sm) in spec.summands.iter().enumerate() {
            let p = modules
                .get(&sm.module)
                .ok_or_else(|| CliError::validation(&entity, format!("unknown module `{}`", sm.module)))?;
            let what = format!("{entity} summand {i}");
            blocks.push(lookup(&sm.automorphism, &what)?.realize::<T>(&what, p, module_bimodule.get(&sm.module))?);
            summands.push((p.clone(), sm.twist));
        }
        let e = TwistSum::new(&order, summands).map_err(CliError::core(entity.clone()))?;
        let gamma = AutData::from_summand_blocks(&e, &blocks).map_err(CliError::core(entity.clone()))?;
        bundles.insert(name.clone(), ArithBundle::new(e, gamma).map_err(CliError::core(entity))?);
    }

    Ok(Resolved { order, modules, bimodules, bundles, lines, omega, draws, warnings })
}
