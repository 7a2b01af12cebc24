//! Dense signatures, matrix views and support analysis.
//!
//! Values are indexed big-endian: assignment (x₁…x_n) sits at position
//! Σ x_i·2^{n−i}. Variables are 1-based throughout the public API.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{HolantError, Result};
use crate::scalar::{imag_unit, CycloScalar, FloatScalar, Scalar};

static ARITY_CAP: AtomicUsize = AtomicUsize::new(16);

/// Largest arity a dense signature may have.
pub fn arity_cap() -> usize {
    ARITY_CAP.load(Ordering::Relaxed)
}

pub fn set_arity_cap(cap: usize) {
    ARITY_CAP.store(cap, Ordering::Relaxed);
}

/// Arity-n map ℤ₂ⁿ → S stored densely.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "RawSignature<S>",
    bound(deserialize = "S: Scalar + serde::de::DeserializeOwned")
)]
pub struct Signature<S> {
    arity: usize,
    values: Vec<S>,
}

#[derive(Deserialize)]
struct RawSignature<S> {
    arity: usize,
    values: Vec<S>,
}

impl<S: Scalar> TryFrom<RawSignature<S>> for Signature<S> {
    type Error = HolantError;

    fn try_from(raw: RawSignature<S>) -> Result<Self> {
        Signature::new(raw.arity, raw.values)
    }
}

pub type ExactSignature = Signature<CycloScalar>;
pub type FloatSignature = Signature<FloatScalar>;

/// Bit of variable `var` (1-based) in index `idx` of an arity-`n` signature.
#[inline]
pub fn bit(idx: usize, n: usize, var: usize) -> usize {
    (idx >> (n - var)) & 1
}

/// Index of the assignment given as a bit slice.
pub fn index_of(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Bits of index `idx` for arity `n`, x₁ first.
pub fn bits_of(idx: usize, n: usize) -> Vec<u8> {
    (1..=n).map(|v| bit(idx, n, v) as u8).collect()
}

pub(crate) fn check_vars(vars: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n + 1];
    for &v in vars {
        if v == 0 || v > n {
            return Err(HolantError::IndexOutOfRange {
                index: v,
                arity: n,
            });
        }
        if seen[v] {
            return Err(HolantError::DuplicateIndex(v));
        }
        seen[v] = true;
    }
    Ok(())
}

impl<S: Scalar> Signature<S> {
    pub fn new(arity: usize, values: Vec<S>) -> Result<Self> {
        if arity > arity_cap() {
            return Err(HolantError::ArityCap {
                arity,
                cap: arity_cap(),
            });
        }
        if values.len() != 1usize << arity {
            return Err(HolantError::LengthMismatch {
                arity,
                expected: 1 << arity,
                got: values.len(),
            });
        }
        Ok(Signature { arity, values })
    }

    /// Rank-0 record carrying a single scalar.
    pub fn scalar(value: S) -> Self {
        Signature {
            arity: 0,
            values: vec![value],
        }
    }

    pub fn zero(arity: usize) -> Result<Self> {
        Self::new(arity, vec![S::zero(); 1 << arity])
    }

    pub fn from_fn(arity: usize, f: impl FnMut(usize) -> S) -> Result<Self> {
        Self::new(arity, (0..1usize << arity).map(f).collect())
    }

    pub fn from_ints(arity: usize, values: &[i64]) -> Result<Self> {
        Self::new(arity, values.iter().map(|&v| S::from_i64(v)).collect())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    pub fn get(&self, idx: usize) -> &S {
        &self.values[idx]
    }

    pub fn at(&self, bits: &[u8]) -> &S {
        &self.values[index_of(bits)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.is_real())
    }

    /// Indices with nonzero value.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&i| !self.values[i].is_zero())
            .collect()
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.values.iter().position(|v| !v.is_zero())
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Signature {
            arity: self.arity,
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|v| v.times(c))
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    /// `(λ, g)` with `self = λ·g` and the first nonzero entry of `g` equal to 1.
    pub fn normalized(&self) -> Result<(S, Self)> {
        let i = self.first_nonzero().ok_or(HolantError::ZeroSignature)?;
        let lambda = self.values[i].clone();
        let inv = lambda.inv()?;
        let mut g = self.scale(&inv);
        g.values[i] = S::one();
        Ok((lambda, g))
    }

    /// `λ` with `self = λ·other`, when the two are proportional and `other` is nonzero.
    pub fn ratio_to(&self, other: &Self) -> Option<S> {
        if self.arity != other.arity {
            return None;
        }
        let i = other.first_nonzero()?;
        let lambda = self.values[i].div(&other.values[i]).ok()?;
        let ok = self
            .values
            .iter()
            .zip(other.values.iter())
            .all(|(a, b)| a.minus(&b.times(&lambda)).is_zero());
        ok.then_some(lambda)
    }

    /// True when one is a nonzero multiple of the other.
    pub fn proportional(&self, other: &Self) -> bool {
        self.ratio_to(other)
            .map(|l| !l.is_zero())
            .unwrap_or(false)
    }

    pub fn to_float(&self) -> FloatSignature {
        Signature {
            arity: self.arity,
            values: self
                .values
                .iter()
                .map(|v| FloatScalar(v.to_complex()))
                .collect(),
        }
    }

    /// Rows 𝐟_i^0 and 𝐟_i^1 of M_i(f).
    pub fn restriction_rows(&self, i: usize) -> Result<(Vec<S>, Vec<S>)> {
        let m = matrix_view(self, &[i])?;
        let mut rows = m.entries.into_iter();
        Ok((rows.next().unwrap(), rows.next().unwrap()))
    }
}

impl Signature<CycloScalar> {
    /// Key that is equal for equal signatures; entries are embedded into one order.
    pub fn exact_key(&self) -> Vec<Vec<(num_bigint::BigInt, num_bigint::BigInt)>> {
        let order = self
            .values
            .iter()
            .map(|v| v.order())
            .fold(8u32, |a, b| num_integer::Integer::lcm(&a, &b));
        self.values.iter().map(|v| v.key_at(order)).collect()
    }
}

// ---------------------------------------------------------------------------
// Builtins

/// The four Bell states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Bell {
    #[serde(rename = "phi+")]
    PhiPlus,
    #[serde(rename = "psi+")]
    PsiPlus,
    #[serde(rename = "phi-")]
    PhiMinus,
    #[serde(rename = "psi-")]
    PsiMinus,
}

impl Bell {
    pub const ALL: [Bell; 4] = [Bell::PhiPlus, Bell::PsiPlus, Bell::PhiMinus, Bell::PsiMinus];

    pub fn values(self) -> [i64; 4] {
        match self {
            Bell::PhiPlus => [1, 0, 0, 1],
            Bell::PsiPlus => [0, 1, 1, 0],
            Bell::PhiMinus => [1, 0, 0, -1],
            Bell::PsiMinus => [0, 1, -1, 0],
        }
    }

    pub fn signature<S: Scalar>(self) -> Signature<S> {
        Signature::from_ints(2, &self.values()).unwrap()
    }

    pub fn name(self) -> &'static str {
        match self {
            Bell::PhiPlus => "phi+",
            Bell::PsiPlus => "psi+",
            Bell::PhiMinus => "phi-",
            Bell::PsiMinus => "psi-",
        }
    }

    pub fn parse(s: &str) -> Option<Bell> {
        match s {
            "phi+" | "φ+" | "φ⁺" => Some(Bell::PhiPlus),
            "psi+" | "ψ+" | "ψ⁺" => Some(Bell::PsiPlus),
            "phi-" | "φ-" | "φ⁻" => Some(Bell::PhiMinus),
            "psi-" | "ψ-" | "ψ⁻" => Some(Bell::PsiMinus),
            _ => None,
        }
    }
}

/// Named signatures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Delta0,
    Delta1,
    Eq(usize),
    Neq2,
    Ghz(usize),
    Psi6,
    Psi6Formula,
    Psi8,
    Bell(Bell),
}

/// Rows of M_{123,456}(Ψ6) as printed.
pub const PSI6_MATRIX: [[i64; 8]; 8] = [
    [1, 0, 0, 1, 0, 1, 1, 0],
    [0, -1, 1, 0, 1, 0, 0, -1],
    [0, 1, -1, 0, 1, 0, 0, -1],
    [-1, 0, 0, -1, 0, 1, 1, 0],
    [0, 1, 1, 0, -1, 0, 0, -1],
    [-1, 0, 0, 1, 0, -1, 1, 0],
    [-1, 0, 0, 1, 0, 1, -1, 0],
    [0, 1, 1, 0, 1, 0, 0, 1],
];

/// The sixteen kets of Ψ8.
pub const PSI8_KETS: [&str; 16] = [
    "00000000", "00001111", "00110011", "00111100", "01010101", "01011010", "10011001",
    "10010110", "01101001", "01100110", "10100101", "10101010", "11000011", "11001100",
    "11110000", "11111111",
];

impl Builtin {
    /// Parses `delta0`, `eq3`, `eq(3)`, `ghz(4)`, `neq2`, `psi6`, `bell(phi+)`, `phi+`, ….
    pub fn parse(name: &str) -> Result<Builtin> {
        let s = name.trim().to_ascii_lowercase();
        let unknown = || HolantError::UnknownBuiltin(name.to_string());
        let arg = |prefix: &str| -> Option<String> {
            let rest = s.strip_prefix(prefix)?;
            let rest = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .unwrap_or(rest);
            Some(rest.to_string())
        };
        let b = match s.as_str() {
            "delta0" | "Δ0" => Builtin::Delta0,
            "delta1" | "Δ1" => Builtin::Delta1,
            "neq2" | "≠2" => Builtin::Neq2,
            "psi6" => Builtin::Psi6,
            "psi6-formula" => Builtin::Psi6Formula,
            "psi8" => Builtin::Psi8,
            _ => {
                if let Some(b) = Bell::parse(&s) {
                    Builtin::Bell(b)
                } else if let Some(a) = arg("bell") {
                    Builtin::Bell(Bell::parse(&a).ok_or_else(unknown)?)
                } else if let Some(a) = arg("eq") {
                    let k: usize = a.parse().map_err(|_| unknown())?;
                    if k < 1 {
                        return Err(unknown());
                    }
                    Builtin::Eq(k)
                } else if let Some(a) = arg("ghz") {
                    let n: usize = a.parse().map_err(|_| unknown())?;
                    if n < 2 {
                        return Err(unknown());
                    }
                    Builtin::Ghz(n)
                } else {
                    return Err(unknown());
                }
            }
        };
        Ok(b)
    }

    pub fn signature<S: Scalar>(self) -> Result<Signature<S>> {
        match self {
            Builtin::Delta0 => Signature::from_ints(1, &[1, 0]),
            Builtin::Delta1 => Signature::from_ints(1, &[0, 1]),
            Builtin::Neq2 => Signature::from_ints(2, &[0, 1, 1, 0]),
            Builtin::Eq(k) | Builtin::Ghz(k) => {
                let last = (1usize << k) - 1;
                Signature::from_fn(k, |i| {
                    if i == 0 || i == last {
                        S::one()
                    } else {
                        S::zero()
                    }
                })
            }
            Builtin::Psi6 => Signature::from_fn(6, |i| S::from_i64(PSI6_MATRIX[i >> 3][i & 7])),
            Builtin::Psi6Formula => Signature::from_fn(6, |i| {
                let x: Vec<usize> = (1..=6).map(|v| bit(i, 6, v)).collect();
                if x.iter().sum::<usize>() % 2 == 1 {
                    return S::zero();
                }
                let e = x[0] * x[3] + x[1] * x[4] + x[2] * x[5] + x[3] * x[4] + x[4] * x[5]
                    + x[3] * x[5];
                S::from_i64(if e % 2 == 0 { 1 } else { -1 })
            }),
            Builtin::Psi8 => {
                let mut v = vec![S::zero(); 256];
                for k in PSI8_KETS {
                    v[usize::from_str_radix(k, 2).unwrap()] = S::one();
                }
                Signature::new(8, v)
            }
            Builtin::Bell(b) => Ok(b.signature()),
        }
    }
}

/// Shorthand for [`Builtin::parse`] followed by [`Builtin::signature`].
pub fn builtin<S: Scalar>(name: &str) -> Result<Signature<S>> {
    Builtin::parse(name)?.signature()
}

/// `=_k`.
pub fn equality<S: Scalar>(k: usize) -> Signature<S> {
    Builtin::Eq(k).signature().unwrap()
}

pub fn delta0<S: Scalar>() -> Signature<S> {
    Builtin::Delta0.signature().unwrap()
}

pub fn delta1<S: Scalar>() -> Signature<S> {
    Builtin::Delta1.signature().unwrap()
}

pub fn neq2<S: Scalar>() -> Signature<S> {
    Builtin::Neq2.signature().unwrap()
}

/// Exact signature from small integers.
pub fn exact(arity: usize, values: &[i64]) -> ExactSignature {
    Signature::from_ints(arity, values).unwrap()
}

/// Exact signature whose entries are 𝔦^{k} (None for zero).
pub fn exact_i_powers(arity: usize, powers: &[Option<i64>]) -> Result<ExactSignature> {
    let i = imag_unit();
    Signature::new(
        arity,
        powers
            .iter()
            .map(|p| match p {
                None => CycloScalar::zero(),
                Some(k) => CycloScalar::from_i64(1).times(&pow(&i, k.rem_euclid(4) as u32)),
            })
            .collect(),
    )
}

fn pow<S: Scalar>(x: &S, e: u32) -> S {
    (0..e).fold(S::one(), |acc, _| acc.times(x))
}

// ---------------------------------------------------------------------------
// Matrix views

/// Lossless reshape of a signature into a matrix over chosen row variables.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixView<S> {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub entries: Vec<Vec<S>>,
}

/// Maps a (row, col) position of a view to the signature index.
fn interleave(n: usize, rows: &[usize], cols: &[usize], r: usize, c: usize) -> usize {
    let mut idx = 0usize;
    for (k, &v) in rows.iter().enumerate() {
        let b = (r >> (rows.len() - 1 - k)) & 1;
        idx |= b << (n - v);
    }
    for (k, &v) in cols.iter().enumerate() {
        let b = (c >> (cols.len() - 1 - k)) & 1;
        idx |= b << (n - v);
    }
    idx
}

/// View of `f` with `rows` (in the given order) as row variables and the
/// remaining variables, ascending, as columns.
pub fn matrix_view<S: Scalar>(f: &Signature<S>, rows: &[usize]) -> Result<MatrixView<S>> {
    let n = f.arity();
    check_vars(rows, n)?;
    let cols: Vec<usize> = (1..=n).filter(|v| !rows.contains(v)).collect();
    let entries = (0..1usize << rows.len())
        .map(|r| {
            (0..1usize << cols.len())
                .map(|c| f.values[interleave(n, rows, &cols, r, c)].clone())
                .collect()
        })
        .collect();
    Ok(MatrixView {
        rows: rows.to_vec(),
        cols,
        entries,
    })
}

impl<S: Scalar> MatrixView<S> {
    pub fn to_signature(&self) -> Result<Signature<S>> {
        let n = self.rows.len() + self.cols.len();
        let mut values = vec![S::zero(); 1 << n];
        for (r, row) in self.entries.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                values[interleave(n, &self.rows, &self.cols, r, c)] = v.clone();
            }
        }
        Signature::new(n, values)
    }

    /// True when the matrix has rank at most one.
    pub fn rank_at_most_one(&self) -> bool {
        let mut pivot = None;
        'outer: for (r, row) in self.entries.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    pivot = Some((r, c));
                    break 'outer;
                }
            }
        }
        let Some((r0, c0)) = pivot else {
            return true;
        };
        let p = &self.entries[r0][c0];
        for row in &self.entries {
            let rc0 = &row[c0];
            for (c, v) in row.iter().enumerate() {
                // 2×2 minor with the pivot
                let lhs = v.times(p);
                let rhs = rc0.times(&self.entries[r0][c]);
                if !lhs.minus(&rhs).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.entries.clone();
        let rows = m.len();
        let cols = if rows == 0 { 0 } else { m[0].len() };
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let inv = m[rank][c].inv().expect("nonzero pivot");
            for r in 0..rows {
                if r != rank && !m[r][c].is_zero() {
                    let factor = m[r][c].times(&inv);
                    for k in c..cols {
                        let t = m[rank][k].times(&factor);
                        m[r][k] = m[r][k].minus(&t);
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

// ---------------------------------------------------------------------------
// Support analysis

/// Sign of a variable inside its bundle: `+` if it equals the bundle's
/// combination of free variables, `−` if it equals its complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BundleSign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

/// Affine dependence of one variable on the free variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub var: usize,
    pub combination: Vec<usize>,
    pub constant: u8,
}

/// Result of Gaussian elimination over ℤ₂ on the support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportStructure {
    pub arity: usize,
    pub affine: bool,
    pub basis: Vec<Vec<u8>>,
    pub offset: Vec<u8>,
    pub rank: usize,
    pub free_vars: Vec<usize>,
    /// Relation of every variable to the free ones (affine case only).
    pub relations: Vec<Relation>,
    /// Bundle name (free-variable combination) ↦ member variables with signs.
    pub bundles: BTreeMap<Vec<usize>, Vec<(usize, BundleSign)>>,
    /// Variables that are constant on the support.
    pub constants: Vec<(usize, u8)>,
    /// Points a, b, c in the support with a+b+c outside it (non-affine case).
    pub witness: Option<[Vec<u8>; 3]>,
}

impl SupportStructure {
    /// Checks that a point satisfies every relation.
    pub fn satisfies(&self, point: &[u8]) -> bool {
        self.relations.iter().all(|rel| {
            let v = rel
                .combination
                .iter()
                .fold(rel.constant, |acc, &j| acc ^ point[j - 1]);
            point[rel.var - 1] == v
        })
    }
}

/// Gaussian elimination over ℤ₂ on the support of `f`.
pub fn support_structure<S: Scalar>(f: &Signature<S>) -> Result<SupportStructure> {
    let n = f.arity();
    let supp = f.support();
    if supp.is_empty() {
        return Err(HolantError::ZeroSignature);
    }
    let s0 = supp[0];
    // reduced row echelon basis, pivot at the most significant bit
    let mut basis: Vec<(usize, usize)> = Vec::new(); // (pivot bit, vector)
    for &s in &supp[1..] {
        let mut v = s ^ s0;
        for &(p, b) in &basis {
            if v >> p & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            let p = usize::BITS as usize - 1 - v.leading_zeros() as usize;
            for e in basis.iter_mut() {
                if e.1 >> p & 1 == 1 {
                    e.1 ^= v;
                }
            }
            basis.push((p, v));
        }
    }
    basis.sort_by(|a, b| b.0.cmp(&a.0));
    let rank = basis.len();
    let affine = supp.len() == 1usize << rank;
    let offset = bits_of(s0, n);
    if !affine {
        let in_supp: std::collections::HashSet<usize> = supp.iter().copied().collect();
        let mut witness = None;
        'search: for &b in &supp {
            for &c in &supp {
                if !in_supp.contains(&(s0 ^ b ^ c)) {
                    witness = Some([bits_of(s0, n), bits_of(b, n), bits_of(c, n)]);
                    break 'search;
                }
            }
        }
        return Ok(SupportStructure {
            arity: n,
            affine: false,
            basis: Vec::new(),
            offset,
            rank,
            free_vars: Vec::new(),
            relations: Vec::new(),
            bundles: BTreeMap::new(),
            constants: Vec::new(),
            witness,
        });
    }
    let free_vars: Vec<usize> = basis.iter().map(|&(p, _)| n - p).collect();
    let mut relations = Vec::with_capacity(n);
    let mut bundles: BTreeMap<Vec<usize>, Vec<(usize, BundleSign)>> = BTreeMap::new();
    let mut constants = Vec::new();
    for var in 1..=n {
        let pos = n - var;
        let mut combination = Vec::new();
        let mut constant = (s0 >> pos & 1) as u8;
        for &(p, b) in &basis {
            if b >> pos & 1 == 1 {
                combination.push(n - p);
                constant ^= (s0 >> p & 1) as u8;
            }
        }
        combination.sort_unstable();
        if combination.is_empty() {
            constants.push((var, constant));
        } else {
            let sign = if constant == 0 {
                BundleSign::Plus
            } else {
                BundleSign::Minus
            };
            bundles.entry(combination.clone()).or_default().push((var, sign));
        }
        relations.push(Relation {
            var,
            combination,
            constant,
        });
    }
    Ok(SupportStructure {
        arity: n,
        affine: true,
        basis: basis.iter().map(|&(_, b)| bits_of(b, n)).collect(),
        offset,
        rank,
        free_vars,
        relations,
        bundles,
        constants,
        witness: None,
    })
}

/// Restriction of an affine-supported `f` to the free variables `free`.
pub fn compressed<S: Scalar>(f: &Signature<S>, free: &[usize]) -> Result<Signature<S>> {
    let n = f.arity();
    check_vars(free, n)?;
    let st = support_structure(f)?;
    if !st.affine {
        return Err(HolantError::NotAffine);
    }
    if st.rank == 0 {
        return Err(HolantError::RankZero);
    }
    if free.len() != st.rank {
        return Err(HolantError::InvalidFreeSet(format!(
            "support has rank {}, got {} variables",
            st.rank,
            free.len()
        )));
    }
    let mut values: Vec<Option<S>> = vec![None; 1 << free.len()];
    for s in f.support() {
        let y = free
            .iter()
            .fold(0usize, |acc, &v| (acc << 1) | bit(s, n, v));
        if values[y].is_some() {
            return Err(HolantError::InvalidFreeSet(
                "projection onto the set is not injective".into(),
            ));
        }
        values[y] = Some(f.values[s].clone());
    }
    Signature::new(free.len(), values.into_iter().map(|v| v.unwrap()).collect())
}

/// Arrow-reversal symmetry: conj(f(α)) = f(ᾱ) for all α.
pub fn ars_check<S: Scalar>(f: &Signature<S>) -> bool {
    let mask = (1usize << f.arity()) - 1;
    (0..f.values.len()).all(|i| f.values[i].conj().minus(&f.values[i ^ mask]).is_zero())
}

/// Groups signatures by exact value, returning one representative per class.
pub fn dedupe_exact(sigs: Vec<ExactSignature>) -> Vec<ExactSignature> {
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    for s in sigs {
        let key = s.exact_key();
        if seen.insert(key, ()).is_none() {
            out.push(s);
        }
    }
    out
}
