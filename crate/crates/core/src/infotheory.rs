//! Discrete probability tables with dual arithmetic and Shannon quantities.
//!
//! Probabilities are mode-tagged: exact (arbitrary-precision rational) or
//! float (binary64). Feasibility-critical arithmetic stays exact; entropies
//! and mutual informations are always evaluated in binary64 because
//! logarithms of rationals are irrational anyway. The usual Shannon
//! conventions apply: `0 log 0 = 0`, and conditioning on a zero-probability
//! event contributes zero.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result, DEFAULT_TOLERANCE};

/// Arithmetic mode of a probability value or container.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Arbitrary-precision rational arithmetic.
    Exact,
    /// Binary64 arithmetic compared within a tolerance.
    Float,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Float => write!(f, "float"),
        }
    }
}

/// A probability in `[0, 1]`, either an exact rational or a binary64.
///
/// Rationals are kept in canonical reduced form with positive denominator
/// (guaranteed by `BigRational`). Mixing modes in arithmetic demotes the
/// result to float.
#[derive(Debug, Clone, PartialEq)]
pub enum Prob {
    Exact(BigRational),
    Float(f64),
}

impl Prob {
    /// Exact probability `numer/denom`. Errors unless `0 <= numer/denom <= 1`.
    pub fn exact(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidProbability(format!("{numer}/{denom}")));
        }
        Self::from_ratio(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    /// Wraps a rational, checking the `[0, 1]` range.
    pub fn from_ratio(r: BigRational) -> Result<Self> {
        if r.is_negative() || r > BigRational::one() {
            return Err(Error::InvalidProbability(r.to_string()));
        }
        Ok(Prob::Exact(r))
    }

    /// Wraps a float, checking finiteness and the `[0, 1]` range.
    pub fn from_f64(v: f64) -> Result<Self> {
        if !v.is_finite() || !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidProbability(v.to_string()));
        }
        Ok(Prob::Float(v))
    }

    pub fn zero(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Prob::Exact(BigRational::zero()),
            Mode::Float => Prob::Float(0.0),
        }
    }

    pub fn one(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Prob::Exact(BigRational::one()),
            Mode::Float => Prob::Float(1.0),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Prob::Exact(_) => Mode::Exact,
            Prob::Float(_) => Mode::Float,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Prob::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Prob::Float(v) => *v,
        }
    }

    /// The exact rational value, if this probability is exact.
    pub fn as_ratio(&self) -> Option<&BigRational> {
        match self {
            Prob::Exact(r) => Some(r),
            Prob::Float(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Prob::Exact(r) => r.is_zero(),
            Prob::Float(v) => *v == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Prob::Exact(r) => r.is_one(),
            Prob::Float(v) => *v == 1.0,
        }
    }

    /// Sum, staying exact only when both operands are exact.
    pub fn add(&self, other: &Prob) -> Prob {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) => Prob::Exact(a + b),
            _ => Prob::Float(self.as_f64() + other.as_f64()),
        }
    }

    /// Product, staying exact only when both operands are exact.
    pub fn mul(&self, other: &Prob) -> Prob {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) => Prob::Exact(a * b),
            _ => Prob::Float(self.as_f64() * other.as_f64()),
        }
    }

    /// Absolute difference as a float, usable across modes for reporting.
    pub fn abs_diff(&self, other: &Prob) -> f64 {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) => (a - b).abs().to_f64().unwrap_or(f64::NAN),
            _ => (self.as_f64() - other.as_f64()).abs(),
        }
    }

    /// Equality in the native arithmetic: exact rational equality when both
    /// sides are exact, `|a - b| <= tol` otherwise.
    pub fn matches(&self, other: &Prob, tol: f64) -> bool {
        match (self, other) {
            (Prob::Exact(a), Prob::Exact(b)) => a == b,
            _ => self.abs_diff(other) <= tol,
        }
    }
}

/// A named variable together with its ordered outcome alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub alphabet: Vec<String>,
}

impl Variable {
    pub fn new(name: impl Into<String>, alphabet: Vec<String>) -> Result<Self> {
        let name = name.into();
        if alphabet.is_empty() {
            return Err(Error::Empty("alphabet"));
        }
        check_unique(&alphabet)?;
        Ok(Variable { name, alphabet })
    }

    /// Binary variable with outcomes "0" and "1".
    pub fn binary(name: impl Into<String>) -> Self {
        Variable {
            name: name.into(),
            alphabet: vec!["0".to_string(), "1".to_string()],
        }
    }
}

fn check_unique(labels: &[String]) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateName(l.clone()));
        }
    }
    Ok(())
}

fn homogeneous_mode(values: &[Prob], what: &'static str) -> Result<Mode> {
    let mode = values.first().map(Prob::mode).unwrap_or(Mode::Exact);
    if values.iter().any(|p| p.mode() != mode) {
        return Err(Error::MixedMode(what));
    }
    Ok(mode)
}

/// A distribution over an ordered finite alphabet.
///
/// Construction checks only per-entry range and mode homogeneity;
/// normalization is asserted by the operations that require it, so that
/// deliberately broken inputs can be represented for validation reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct Dist {
    labels: Vec<String>,
    mass: Vec<Prob>,
    mode: Mode,
}

impl Dist {
    pub fn new(labels: Vec<String>, mass: Vec<Prob>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Empty("alphabet"));
        }
        check_unique(&labels)?;
        if labels.len() != mass.len() {
            return Err(Error::Structural(format!(
                "alphabet has {} symbols but {} masses were given",
                labels.len(),
                mass.len()
            )));
        }
        let mode = homogeneous_mode(&mass, "distribution")?;
        Ok(Dist { labels, mass, mode })
    }

    /// Uniform distribution; exact mode uses `1/n` exactly.
    pub fn uniform(labels: Vec<String>, mode: Mode) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Empty("alphabet"));
        }
        let p = match mode {
            Mode::Exact => Prob::Exact(BigRational::new(BigInt::one(), BigInt::from(n))),
            Mode::Float => Prob::Float(1.0 / n as f64),
        };
        Dist::new(labels, vec![p; n])
    }

    /// All mass on one symbol.
    pub fn point_mass(labels: Vec<String>, symbol: &str, mode: Mode) -> Result<Self> {
        let idx = labels.iter().position(|l| l == symbol).ok_or_else(|| Error::UnknownSymbol {
            what: "distribution".into(),
            symbol: symbol.into(),
        })?;
        let mass = (0..labels.len())
            .map(|i| if i == idx { Prob::one(mode) } else { Prob::zero(mode) })
            .collect();
        Dist::new(labels, mass)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn mass(&self, idx: usize) -> &Prob {
        &self.mass[idx]
    }

    pub fn masses(&self) -> &[Prob] {
        &self.mass
    }

    pub fn get(&self, label: &str) -> Option<&Prob> {
        self.index_of(label).map(|i| &self.mass[i])
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Total mass in the native arithmetic.
    pub fn total(&self) -> Prob {
        let mut acc = Prob::zero(self.mode);
        for p in &self.mass {
            acc = acc.add(p);
        }
        acc
    }

    /// Exact mode: total is exactly one. Float mode: `|total - 1| <= tol`.
    pub fn is_normalized(&self, tol: f64) -> bool {
        match self.total() {
            Prob::Exact(t) => t.is_one(),
            Prob::Float(t) => (t - 1.0).abs() <= tol,
        }
    }

    fn require_normalized(&self, what: &str) -> Result<()> {
        if !self.is_normalized(DEFAULT_TOLERANCE) {
            return Err(Error::NotNormalized {
                what: what.to_string(),
                sum: self.total().as_f64(),
            });
        }
        Ok(())
    }

    /// Same alphabet and entrywise agreement: exact equality for exact
    /// pairs, `tol` otherwise.
    pub fn matches(&self, other: &Dist, tol: f64) -> bool {
        self.labels == other.labels
            && self
                .mass
                .iter()
                .zip(&other.mass)
                .all(|(a, b)| a.matches(b, tol))
    }

    /// Largest entrywise absolute difference; infinite if alphabets differ.
    pub fn max_deviation(&self, other: &Dist) -> f64 {
        if self.labels != other.labels {
            return f64::INFINITY;
        }
        self.mass
            .iter()
            .zip(&other.mass)
            .map(|(a, b)| a.abs_diff(b))
            .fold(0.0, f64::max)
    }

    /// Rescales so the total is one. Errors if the total is zero.
    pub fn normalized(&self) -> Result<Dist> {
        let total = self.total();
        if total.is_zero() {
            return Err(Error::NotNormalized {
                what: "distribution".into(),
                sum: 0.0,
            });
        }
        let mass = self
            .mass
            .iter()
            .map(|p| match (p, &total) {
                (Prob::Exact(v), Prob::Exact(t)) => Prob::Exact(v / t),
                _ => Prob::Float(p.as_f64() / total.as_f64()),
            })
            .collect();
        Dist::new(self.labels.clone(), mass)
    }
}

/// A joint distribution over an ordered list of variables.
///
/// Cells are stored densely in row-major order with the last variable
/// varying fastest, so iteration order (and therefore every downstream
/// report) is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    vars: Vec<Variable>,
    cells: Vec<Prob>,
    mode: Mode,
}

impl JointTable {
    pub fn new(vars: Vec<Variable>, cells: Vec<Prob>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::Empty("variable list"));
        }
        check_unique(&vars.iter().map(|v| v.name.clone()).collect::<Vec<_>>())?;
        let expect: usize = vars.iter().map(|v| v.alphabet.len()).product();
        if cells.len() != expect {
            return Err(Error::Structural(format!(
                "expected {} cells for the given alphabets, got {}",
                expect,
                cells.len()
            )));
        }
        let mode = homogeneous_mode(&cells, "joint table")?;
        Ok(JointTable { vars, cells, mode })
    }

    /// Builds a table by evaluating `f` on every multi-index, row-major.
    pub fn from_fn(vars: Vec<Variable>, mut f: impl FnMut(&[usize]) -> Prob) -> Result<Self> {
        let shape: Vec<usize> = vars.iter().map(|v| v.alphabet.len()).collect();
        let count: usize = shape.iter().product();
        let mut idx = vec![0usize; shape.len()];
        let mut cells = Vec::with_capacity(count);
        for _ in 0..count {
            cells.push(f(&idx));
            advance(&mut idx, &shape);
        }
        JointTable::new(vars, cells)
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn shape(&self) -> Vec<usize> {
        self.vars.iter().map(|v| v.alphabet.len()).collect()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, indices: &[usize]) -> &Prob {
        &self.cells[self.linear_index(indices)]
    }

    pub fn cell_by_labels(&self, outcomes: &[&str]) -> Result<&Prob> {
        let mut idx = Vec::with_capacity(self.vars.len());
        for (var, sym) in self.vars.iter().zip(outcomes) {
            let i = var
                .alphabet
                .iter()
                .position(|a| a == sym)
                .ok_or_else(|| Error::UnknownSymbol {
                    what: var.name.clone(),
                    symbol: sym.to_string(),
                })?;
            idx.push(i);
        }
        Ok(self.cell(&idx))
    }

    fn linear_index(&self, indices: &[usize]) -> usize {
        debug_assert_eq!(indices.len(), self.vars.len());
        let mut lin = 0;
        for (i, var) in self.vars.iter().enumerate() {
            lin = lin * var.alphabet.len() + indices[i];
        }
        lin
    }

    /// Iterates `(multi_index, cell)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &Prob)> {
        let shape = self.shape();
        let mut idx = vec![0usize; shape.len()];
        self.cells.iter().map(move |p| {
            let out = idx.clone();
            advance(&mut idx, &shape);
            (out, p)
        })
    }

    pub fn total(&self) -> Prob {
        let mut acc = Prob::zero(self.mode);
        for p in &self.cells {
            acc = acc.add(p);
        }
        acc
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        match self.total() {
            Prob::Exact(t) => t.is_one(),
            Prob::Float(t) => (t - 1.0).abs() <= tol,
        }
    }

    fn require_normalized(&self, what: &str) -> Result<()> {
        if !self.is_normalized(DEFAULT_TOLERANCE) {
            return Err(Error::NotNormalized {
                what: what.to_string(),
                sum: self.total().as_f64(),
            });
        }
        Ok(())
    }

    /// Rescales cells so the total is one.
    pub fn normalized(&self) -> Result<JointTable> {
        let total = self.total();
        if total.is_zero() {
            return Err(Error::NotNormalized {
                what: "joint table".into(),
                sum: 0.0,
            });
        }
        let cells = self
            .cells
            .iter()
            .map(|p| match (p, &total) {
                (Prob::Exact(v), Prob::Exact(t)) => Prob::Exact(v / t),
                _ => Prob::Float(p.as_f64() / total.as_f64()),
            })
            .collect();
        JointTable::new(self.vars.clone(), cells)
    }

    /// Sums out every variable not listed in `keep`. The kept variables
    /// retain their order in this table (not the order of `keep`).
    pub fn marginalize(&self, keep: &[&str]) -> Result<JointTable> {
        if keep.is_empty() {
            return Err(Error::Empty("keep list"));
        }
        let mut keep_idx = Vec::with_capacity(keep.len());
        for name in keep {
            let i = self
                .var_index(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            if keep_idx.contains(&i) {
                return Err(Error::DuplicateName(name.to_string()));
            }
            keep_idx.push(i);
        }
        keep_idx.sort_unstable();

        let kept_vars: Vec<Variable> = keep_idx.iter().map(|&i| self.vars[i].clone()).collect();
        let kept_shape: Vec<usize> = kept_vars.iter().map(|v| v.alphabet.len()).collect();
        let kept_count: usize = kept_shape.iter().product();
        let mut out = vec![Prob::zero(self.mode); kept_count];

        for (idx, p) in self.iter() {
            let mut lin = 0;
            for (k, &vi) in keep_idx.iter().enumerate() {
                lin = lin * kept_shape[k] + idx[vi];
            }
            out[lin] = out[lin].add(p);
        }
        JointTable::new(kept_vars, out)
    }

    /// Views a single-variable table as a plain distribution.
    pub fn to_dist(&self) -> Result<Dist> {
        if self.vars.len() != 1 {
            return Err(Error::Structural(format!(
                "expected a single-variable table, got {} variables",
                self.vars.len()
            )));
        }
        Dist::new(self.vars[0].alphabet.clone(), self.cells.clone())
    }

    /// Probability of a partial assignment: sums all cells whose outcomes
    /// agree with `assignment` on the named variables.
    pub fn partial_mass(&self, assignment: &[(&str, &str)]) -> Result<Prob> {
        let mut constraints = Vec::with_capacity(assignment.len());
        for (name, sym) in assignment {
            let vi = self
                .var_index(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            let si = self.vars[vi]
                .alphabet
                .iter()
                .position(|a| a == sym)
                .ok_or_else(|| Error::UnknownSymbol {
                    what: name.to_string(),
                    symbol: sym.to_string(),
                })?;
            constraints.push((vi, si));
        }
        let mut acc = Prob::zero(self.mode);
        for (idx, p) in self.iter() {
            if constraints.iter().all(|&(vi, si)| idx[vi] == si) {
                acc = acc.add(p);
            }
        }
        Ok(acc)
    }
}

fn advance(idx: &mut [usize], shape: &[usize]) {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < shape[i] {
            return;
        }
        idx[i] = 0;
    }
}

/// Computed information quantities below this magnitude that come out
/// negative are rounded up to zero (floating-point noise on quantities that
/// are nonnegative by theory).
const NEG_CLAMP: f64 = 1e-12;

fn clamp_nonneg(bits: f64) -> f64 {
    if bits < 0.0 && bits > -NEG_CLAMP {
        0.0
    } else {
        bits
    }
}

fn entropy_of_masses<'a>(masses: impl Iterator<Item = &'a Prob>, base: f64) -> f64 {
    let mut acc = 0.0;
    for p in masses {
        let v = p.as_f64();
        if v > 0.0 {
            acc -= v * v.log2();
        }
    }
    if base == 2.0 {
        acc
    } else {
        acc / base.log2()
    }
}

fn check_base(base: f64) -> Result<()> {
    if !(base.is_finite() && base > 1.0) {
        return Err(Error::Structural(format!("log base must exceed 1, got {base}")));
    }
    Ok(())
}

/// Shannon entropy in bits (base 2).
pub fn entropy(d: &Dist) -> Result<f64> {
    entropy_in_base(d, 2.0)
}

/// Shannon entropy `-sum p log p` in the given base, with `0 log 0 = 0`.
pub fn entropy_in_base(d: &Dist, base: f64) -> Result<f64> {
    check_base(base)?;
    d.require_normalized("distribution")?;
    Ok(entropy_of_masses(d.masses().iter(), base))
}

/// Entropy of the full joint law of a table, in bits.
pub fn joint_entropy(t: &JointTable) -> Result<f64> {
    joint_entropy_in_base(t, 2.0)
}

pub fn joint_entropy_in_base(t: &JointTable, base: f64) -> Result<f64> {
    check_base(base)?;
    t.require_normalized("joint table")?;
    Ok(entropy_of_masses(t.cells.iter(), base))
}

/// Mutual information `I(X;Y) = H(X) + H(Y) - H(X,Y)` in bits.
pub fn mutual_information(t: &JointTable, x: &str, y: &str) -> Result<f64> {
    if x == y {
        return Err(Error::DuplicateName(x.to_string()));
    }
    let hx = joint_entropy(&t.marginalize(&[x])?)?;
    let hy = joint_entropy(&t.marginalize(&[y])?)?;
    let hxy = joint_entropy(&t.marginalize(&[x, y])?)?;
    Ok(clamp_nonneg(hx + hy - hxy))
}

/// Conditional mutual information
/// `I(X;Y|Z) = H(X,Z) + H(Y,Z) - H(X,Y,Z) - H(Z)` in bits.
///
/// Zero-probability slices of `Z` contribute nothing, by the `0 log 0`
/// convention baked into the entropies.
pub fn conditional_mutual_information(t: &JointTable, x: &str, y: &str, z: &str) -> Result<f64> {
    for (a, b) in [(x, y), (x, z), (y, z)] {
        if a == b {
            return Err(Error::DuplicateName(a.to_string()));
        }
    }
    let hxz = joint_entropy(&t.marginalize(&[x, z])?)?;
    let hyz = joint_entropy(&t.marginalize(&[y, z])?)?;
    let hxyz = joint_entropy(&t.marginalize(&[x, y, z])?)?;
    let hz = joint_entropy(&t.marginalize(&[z])?)?;
    Ok(clamp_nonneg(hxz + hyz - hxyz - hz))
}
