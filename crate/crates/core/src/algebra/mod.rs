//! Graded-algebra specifications and their Hilbert series.
//!
//! An [`AlgebraSpec`] is a free graded-commutative algebra described by indexed
//! families of generators. [`instantiate`] expands the families into concrete
//! generators through a degree bound, [`hilbert`] folds their factors into a
//! series, and [`oracle_hilbert`] recounts the same thing by enumerating
//! monomials one at a time.

mod dsl;
mod oracle;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

pub use dsl::{parse_spec, print_spec};
pub use oracle::{oracle_hilbert, ORACLE_MAX_TRUNC};

use crate::error::{Error, Result};
use crate::series::{apply_factor, TruncatedSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GeneratorKind {
    Polynomial,
    Exterior,
    /// `x^k = 0`, with `k >= 2`.
    Truncated(u32),
}

impl GeneratorKind {
    /// Largest usable exponent, `None` when unbounded.
    pub fn max_exponent(self) -> Option<u64> {
        match self {
            GeneratorKind::Polynomial => None,
            GeneratorKind::Exterior => Some(1),
            GeneratorKind::Truncated(k) => Some(u64::from(k.saturating_sub(1))),
        }
    }
}

/// Integer expression over `p` and index variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegreeExpr {
    Int(i64),
    Prime,
    Var(String),
    Add(Box<DegreeExpr>, Box<DegreeExpr>),
    Sub(Box<DegreeExpr>, Box<DegreeExpr>),
    Mul(Box<DegreeExpr>, Box<DegreeExpr>),
    Pow(Box<DegreeExpr>, Box<DegreeExpr>),
    Min(Box<DegreeExpr>, Box<DegreeExpr>),
}

impl DegreeExpr {
    /// Exact evaluation; `vars` binds index names to values.
    pub fn eval(&self, p: u64, vars: &[(&str, i64)]) -> Result<i128> {
        let overflow = || Error::invalid(format!("integer overflow evaluating `{self}`"));
        Ok(match self {
            DegreeExpr::Int(v) => i128::from(*v),
            DegreeExpr::Prime => i128::from(p),
            DegreeExpr::Var(name) => vars
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, v)| i128::from(*v))
                .ok_or_else(|| Error::invalid(format!("unbound index `{name}`")))?,
            DegreeExpr::Add(a, b) => a.eval(p, vars)?.checked_add(b.eval(p, vars)?).ok_or_else(overflow)?,
            DegreeExpr::Sub(a, b) => a.eval(p, vars)?.checked_sub(b.eval(p, vars)?).ok_or_else(overflow)?,
            DegreeExpr::Mul(a, b) => a.eval(p, vars)?.checked_mul(b.eval(p, vars)?).ok_or_else(overflow)?,
            DegreeExpr::Pow(a, b) => {
                let base = a.eval(p, vars)?;
                let exp = b.eval(p, vars)?;
                if exp < 0 {
                    return Err(Error::invalid(format!("negative exponent {exp} in `{self}`")));
                }
                let exp = u32::try_from(exp).map_err(|_| overflow())?;
                base.checked_pow(exp).ok_or_else(overflow)?
            }
            DegreeExpr::Min(a, b) => a.eval(p, vars)?.min(b.eval(p, vars)?),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexRange {
    pub name: String,
    pub lower: i64,
    /// `None` for an unbounded range.
    pub upper: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorFamily {
    pub kind: GeneratorKind,
    pub degree: DegreeExpr,
    pub multiplicity: DegreeExpr,
    pub ranges: Vec<IndexRange>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub p: u64,
    pub families: Vec<GeneratorFamily>,
    pub label: String,
}

impl AlgebraSpec {
    pub fn empty(p: u64) -> Self {
        AlgebraSpec {
            p,
            families: Vec::new(),
            label: String::new(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Tensor product: the union of the generator families.
    pub fn tensor(specs: &[AlgebraSpec]) -> Result<AlgebraSpec> {
        let p = specs
            .first()
            .map(|s| s.p)
            .ok_or_else(|| Error::invalid("empty tensor product"))?;
        if let Some(bad) = specs.iter().find(|s| s.p != p) {
            return Err(Error::invalid(format!("prime mismatch: {} vs {}", p, bad.p)));
        }
        Ok(AlgebraSpec {
            p,
            families: specs.iter().flat_map(|s| s.families.iter().cloned()).collect(),
            label: specs.iter().map(|s| s.label.as_str()).collect::<Vec<_>>().join(" ⊗ "),
        })
    }

    pub fn to_dsl(&self) -> String {
        print_spec(self)
    }
}

/// One concrete generator (with multiplicity) produced by [`instantiate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub degree: u64,
    pub multiplicity: u64,
    pub family: usize,
    pub indices: Vec<i64>,
}

/// Consecutive strictly increasing probes required past the window before an
/// unbounded index is considered exhausted.
const CONFIRM_PROBES: usize = 3;
/// Extra steps an unbounded index may take beyond `N` before the family is
/// declared not eventually increasing.
const STEP_SLACK: u64 = 64;

struct Walk<'a> {
    fam: &'a GeneratorFamily,
    family: usize,
    p: u64,
    max_degree: u64,
    assign: Vec<i64>,
    out: Vec<Generator>,
}

/// Result of walking a sub-box of indices: whether anything landed in the
/// window, and the smallest degree evaluated.
struct Probe {
    hit: bool,
    min_degree: i128,
}

impl Walk<'_> {
    fn fail(&self, reason: impl Into<String>) -> Error {
        Error::Family {
            family: self.family,
            source_line: dsl::print_family(self.fam),
            reason: reason.into(),
        }
    }

    fn bindings(&self) -> Vec<(&str, i64)> {
        self.fam
            .ranges
            .iter()
            .zip(&self.assign)
            .map(|(r, &v)| (r.name.as_str(), v))
            .collect()
    }

    fn leaf(&mut self, emit: bool) -> Result<Probe> {
        let vars = self.bindings();
        let degree = self
            .fam
            .degree
            .eval(self.p, &vars)
            .map_err(|e| self.fail(e.to_string()))?;
        if degree <= 0 {
            return Err(self.fail(format!("degree {degree} is not positive at indices {:?}", self.assign)));
        }
        let hit = degree <= i128::from(self.max_degree);
        if hit && emit {
            let mult = self
                .fam
                .multiplicity
                .eval(self.p, &vars)
                .map_err(|e| self.fail(e.to_string()))?;
            if mult < 0 {
                return Err(self.fail(format!("multiplicity {mult} is negative at indices {:?}", self.assign)));
            }
            if mult > 0 {
                self.out.push(Generator {
                    kind: self.fam.kind,
                    degree: degree as u64,
                    multiplicity: mult as u64,
                    family: self.family,
                    indices: self.assign.clone(),
                });
            }
        }
        Ok(Probe {
            hit,
            min_degree: degree,
        })
    }

    fn walk(&mut self, level: usize, emit: bool) -> Result<Probe> {
        if level == self.fam.ranges.len() {
            return self.leaf(emit);
        }
        let range = self.fam.ranges[level].clone();
        let mut acc = Probe {
            hit: false,
            min_degree: i128::MAX,
        };
        let absorb = |acc: &mut Probe, p: Probe| {
            acc.hit |= p.hit;
            acc.min_degree = acc.min_degree.min(p.min_degree);
        };
        match range.upper {
            Some(upper) => {
                for v in range.lower..=upper {
                    self.assign[level] = v;
                    let probe = self.walk(level + 1, emit)?;
                    absorb(&mut acc, probe);
                }
            }
            None => {
                let window = i128::from(self.max_degree);
                let mut prev: Option<i128> = None;
                let mut v = range.lower;
                let mut steps = 0u64;
                loop {
                    self.assign[level] = v;
                    let probe = self.walk(level + 1, emit)?;
                    let (hit, here) = (probe.hit, probe.min_degree);
                    absorb(&mut acc, probe);
                    if !hit && here > window && prev.is_some_and(|q| here > q) {
                        // Confirm the degrees keep climbing past the window.
                        let mut last = here;
                        for k in 1..=CONFIRM_PROBES as i64 {
                            self.assign[level] = v + k;
                            let ahead = self.walk(level + 1, false)?;
                            if ahead.hit || ahead.min_degree <= last {
                                return Err(self.fail(format!(
                                    "degree is not eventually increasing in `{}` (value {} at {} = {})",
                                    range.name,
                                    ahead.min_degree,
                                    range.name,
                                    v + k
                                )));
                            }
                            last = ahead.min_degree;
                        }
                        break;
                    }
                    prev = Some(here);
                    steps += 1;
                    if steps > self.max_degree + STEP_SLACK {
                        return Err(self.fail(format!(
                            "degree is not eventually increasing in `{}`: still inside the window after {steps} steps",
                            range.name
                        )));
                    }
                    v += 1;
                }
            }
        }
        Ok(acc)
    }
}

/// Every generator of degree `<= max_degree`, ordered by degree, then family,
/// then index tuple.
pub fn instantiate(spec: &AlgebraSpec, max_degree: u64) -> Result<Vec<Generator>> {
    let mut out = Vec::new();
    for (family, fam) in spec.families.iter().enumerate() {
        let mut walk = Walk {
            fam,
            family,
            p: spec.p,
            max_degree,
            assign: vec![0; fam.ranges.len()],
            out: Vec::new(),
        };
        walk.walk(0, true)?;
        out.append(&mut walk.out);
    }
    out.sort_by(|a, b| (a.degree, a.family, &a.indices).cmp(&(b.degree, b.family, &b.indices)));
    Ok(out)
}

/// Hilbert series through degree `max_degree`.
pub fn hilbert(spec: &AlgebraSpec, max_degree: u64) -> Result<TruncatedSeries> {
    let gens = instantiate(spec, max_degree)?;
    hilbert_of_generators(&gens, max_degree)
}

pub fn hilbert_of_generators(gens: &[Generator], max_degree: u64) -> Result<TruncatedSeries> {
    let len = usize::try_from(max_degree)
        .ok()
        .and_then(|n| n.checked_add(1))
        .ok_or_else(|| Error::ResourceGuard(format!("truncation {max_degree} does not fit in memory")))?;
    let mut coeffs = vec![BigUint::default(); len];
    coeffs[0] = BigUint::from(1u32);
    for g in gens {
        for _ in 0..g.multiplicity {
            apply_factor(&mut coeffs, g.kind, g.degree)?;
        }
    }
    TruncatedSeries::from_coeffs(coeffs)
}

/// Cumulative Hilbert series: coefficient `n` counts monomials of degree `<= n`.
pub fn hilbert_cumulative(spec: &AlgebraSpec, max_degree: u64) -> Result<TruncatedSeries> {
    Ok(hilbert(spec, max_degree)?.cumulative())
}

/// Cumulative rank of `spec` through degree `n`.
pub fn cumrank(spec: &AlgebraSpec, n: u64) -> Result<BigUint> {
    let s = hilbert_cumulative(spec, n)?;
    Ok(s.coeff(s.trunc()).clone())
}

/// Both sides of the containments
/// `(A^1 ⊗ ... ⊗ A^h)_{<=n} ⊆ A^1_{<=n} ⊗ ... ⊗ A^h_{<=n}` and
/// `A^1_{<=n_1} ⊗ ... ⊗ A^h_{<=n_h} ⊆ (A^1 ⊗ ... ⊗ A^h)_{<= sum n_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorBracket {
    /// `prod_i cumrank(A^i, n_i)`.
    #[serde(serialize_with = "crate::series::ser_decimal")]
    pub lower: BigUint,
    /// `cumrank(⊗ A^i, sum n_i)`, which must dominate `lower`.
    #[serde(serialize_with = "crate::series::ser_decimal")]
    pub lower_target: BigUint,
    /// `cumrank(⊗ A^i, max n_i)`.
    #[serde(serialize_with = "crate::series::ser_decimal")]
    pub middle: BigUint,
    /// `prod_i cumrank(A^i, max n_i)`, which must dominate `middle`.
    #[serde(serialize_with = "crate::series::ser_decimal")]
    pub upper: BigUint,
    pub ok: bool,
}

pub fn tensor_bracket(subspecs: &[AlgebraSpec], budgets: &[u64]) -> Result<TensorBracket> {
    if subspecs.len() != budgets.len() {
        return Err(Error::invalid(format!(
            "{} subspecs but {} budgets",
            subspecs.len(),
            budgets.len()
        )));
    }
    let product = AlgebraSpec::tensor(subspecs)?;
    let n = *budgets.iter().max().expect("nonempty after tensor()");
    let total = budgets.iter().try_fold(0u64, |acc, &b| acc.checked_add(b));
    let total = total.ok_or_else(|| Error::invalid("budget sum overflows"))?;

    let mut lower = BigUint::from(1u32);
    let mut upper = BigUint::from(1u32);
    for (a, &b) in subspecs.iter().zip(budgets) {
        let cum = hilbert_cumulative(a, n)?;
        lower *= cum.coeff(b as usize);
        upper *= cum.coeff(n as usize);
    }
    let big = hilbert_cumulative(&product, total)?;
    let lower_target = big.coeff(total as usize).clone();
    let middle = big.coeff(n as usize).clone();
    let ok = lower <= lower_target && middle <= upper;
    Ok(TensorBracket {
        lower,
        lower_target,
        middle,
        upper,
        ok,
    })
}
