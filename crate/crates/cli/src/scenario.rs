//! Scenario file format.
//!
//! Integers are JSON integers or decimal strings; rationals are integers or
//! `"p/q"` strings. A JSON float anywhere in an automorphism switches the
//! scenario to floating-point arithmetic unless `arithmetic` says otherwise.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use nc_arakelov::scalar::{parse_rational, render_rational};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Int;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
                v.trim().parse().map(Int).map_err(|_| E::custom(format!("`{v}` is not a decimal integer")))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Num {
    Exact(BigRational),
    Float(f64),
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Num::Exact(q) => s.serialize_str(&render_rational(q)),
            Num::Float(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Num;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number, or a rational string such as \"-3/4\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Num, E> {
                Ok(Num::Exact(BigRational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Num, E> {
                Ok(Num::Exact(BigRational::from_integer(v.into())))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Num, E> {
                Ok(Num::Float(v))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Num, E> {
                parse_rational(v).map(Num::Exact).ok_or_else(|| E::custom(format!("`{v}` is not a rational number")))
            }
        }
        d.deserialize_any(V)
    }
}

impl Num {
    pub fn is_float(&self) -> bool {
        matches!(self, Num::Float(_))
    }

    pub fn to_rational(&self) -> BigRational {
        match self {
            Num::Exact(q) => q.clone(),
            Num::Float(x) => BigRational::from_float(*x).unwrap_or_default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arithmetic {
    Exact,
    Float,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub order: OrderSpec,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleSpec>,
    #[serde(default)]
    pub bimodules: BTreeMap<String, BimoduleSpec>,
    #[serde(default)]
    pub automorphisms: BTreeMap<String, AutSpec>,
    #[serde(default)]
    pub bundles: BTreeMap<String, BundleSpec>,
    #[serde(default)]
    pub line_bundles: BTreeMap<String, LineSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<OmegaSpec>,
    pub tasks: Vec<TaskSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arithmetic: Option<Arithmetic>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum OrderSpec {
    Builtin(String),
    /// `constants[i][j]` lists the coordinates of `e_i·e_j`.
    Custom { name: String, constants: Vec<Vec<Vec<Int>>>, unit: Vec<Int> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default)]
    pub rank: usize,
    #[serde(default)]
    pub torsion: Vec<Int>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleSpec {
    Regular,
    /// `R` acts on the group through the ring map `e_i ↦ values[i]`.
    Character { group: GroupSpec, values: Vec<i64> },
    /// Action matrices on the generators of `Z^generators / relations`,
    /// relations given as columns.
    Explicit {
        generators: usize,
        #[serde(default)]
        relations: Vec<Vec<Int>>,
        action: Vec<Vec<Vec<Int>>>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BimoduleSpec {
    Regular,
    Dual,
    /// Rank-one lattice with `a·m·b = left(a)·right(b)·m`.
    Characters { left: Vec<i64>, right: Vec<i64> },
    /// Free lattice of the given rank with explicit action matrices.
    Explicit { rank: usize, left: Vec<Vec<Vec<Int>>>, right: Vec<Vec<Vec<Int>>> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AutSpec {
    Identity,
    Scalar(Num),
    Matrix(Vec<Vec<Num>>),
    /// Left multiplication by an element of `R ⊗ Q` (or `R ⊗ R`).
    LeftMult(Vec<Num>),
    /// Left multiplication by a seeded random element with nonzero norm and
    /// coordinates `p/q`, `|p| ≤ max`, `1 ≤ q ≤ denominator`.
    RandomUnit {
        #[serde(default = "default_max")]
        max: i64,
        #[serde(default = "default_denominator")]
        denominator: i64,
    },
}

fn default_max() -> i64 {
    5
}

fn default_denominator() -> i64 {
    3
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummandSpec {
    pub module: String,
    pub twist: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automorphism: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub summands: Vec<SummandSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineSpec {
    #[serde(default = "default_bimodule")]
    pub bimodule: String,
    pub twist: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automorphism: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<String>,
}

fn default_bimodule() -> String {
    "R".into()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaSpec {
    pub automorphism: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TaskSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(flatten)]
    pub task: Task,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Task {
    /// `H⁰` and `H¹` of `E(n)` for each `n` in the inclusive range.
    Cohomology { bundle: String, twists: [i64; 2] },
    Lambda {
        #[serde(default = "structure_name")]
        line: String,
        bundle: String,
    },
    Intersect { line: String, bundle: String },
    RrCheck {
        lines: Vec<String>,
        #[serde(default)]
        expect_violation: bool,
    },
    DualityCheck {
        lines: Vec<String>,
        #[serde(default)]
        expect_violation: bool,
    },
    SemisimpleCheck {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_central_simple: Option<bool>,
    },
    OracleCompare { bundle: String, twists: [i64; 2] },
    Selftest,
}

fn structure_name() -> String {
    "A".into()
}

impl Task {
    pub fn kind(&self) -> &'static str {
        match self {
            Task::Cohomology { .. } => "cohomology",
            Task::Lambda { .. } => "lambda",
            Task::Intersect { .. } => "intersect",
            Task::RrCheck { .. } => "rr-check",
            Task::DualityCheck { .. } => "duality-check",
            Task::SemisimpleCheck { .. } => "semisimple-check",
            Task::OracleCompare { .. } => "oracle-compare",
            Task::Selftest => "selftest",
        }
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn uses_floats(&self) -> bool {
        self.automorphisms.values().any(|a| match a {
            AutSpec::Scalar(x) => x.is_float(),
            AutSpec::Matrix(rows) => rows.iter().flatten().any(Num::is_float),
            AutSpec::LeftMult(c) => c.iter().any(Num::is_float),
            AutSpec::Identity | AutSpec::RandomUnit { .. } => false,
        })
    }

    pub fn arithmetic(&self) -> Arithmetic {
        self.arithmetic.unwrap_or(if self.uses_floats() { Arithmetic::Float } else { Arithmetic::Exact })
    }
}
