//! Exact cyclotomic arithmetic and a tolerance-based complex backend.
//!
//! [`CycloScalar`] stores an element of ℚ(ζ_N) as its coordinates in the power
//! basis 1, ζ, …, ζ^{φ(N)−1} after reduction modulo Φ_N. The order is always a
//! multiple of 8, so 𝔦, α = ζ₈ and √2 are available in every field.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::HolantError;

/// Which numeric backend a value or signature lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

/// Common interface of the two scalar backends.
pub trait Scalar: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Exact constant mapped into this backend (approximated for floats).
    fn from_cyclo(c: &CycloScalar) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn conj(&self) -> Self;
    fn inv(&self) -> Result<Self, HolantError>;
    fn to_complex(&self) -> Complex64;
    /// The exact value, when this backend is exact.
    fn as_exact(&self) -> Option<&CycloScalar>;

    fn is_one(&self) -> bool {
        self.minus(&Self::one()).is_zero()
    }

    fn is_real(&self) -> bool {
        self.minus(&self.conj()).is_zero()
    }

    fn div(&self, other: &Self) -> Result<Self, HolantError> {
        Ok(self.times(&other.inv()?))
    }

    /// |x|² = x·conj(x).
    fn norm_sqr(&self) -> Self {
        self.times(&self.conj())
    }
}

// ---------------------------------------------------------------------------
// Cyclotomic field tables

struct CycloField {
    phi: usize,
    /// `powers[e]` lists the nonzero coordinates of ζ^e, for 0 ≤ e < order.
    powers: Vec<Vec<(usize, i64)>>,
}

fn field_cache() -> &'static Mutex<HashMap<u32, Arc<CycloField>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn poly_cache() -> &'static Mutex<HashMap<u32, Vec<i64>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<i64>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of Φ_n, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    if let Some(p) = poly_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let q = cyclotomic_polynomial(d);
            p = poly_div_monic(&p, &q);
        }
    }
    poly_cache().lock().unwrap().insert(n, p.clone());
    p
}

fn poly_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let nn = num.len() - 1;
    let mut quot = vec![0i64; nn - dn + 1];
    for k in (0..=nn - dn).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Euler's totient.
pub fn totient(n: u32) -> usize {
    let mut m = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result as usize
}

fn field(order: u32) -> Arc<CycloField> {
    if let Some(f) = field_cache().lock().unwrap().get(&order) {
        return f.clone();
    }
    let phi_poly = cyclotomic_polynomial(order);
    let phi = phi_poly.len() - 1;
    let mut powers = Vec::with_capacity(order as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..order {
        powers.push(
            cur.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i, c))
                .collect(),
        );
        // multiply by x and reduce with x^φ = −Σ Φ_k x^k
        let top = cur[phi - 1];
        for k in (1..phi).rev() {
            cur[k] = cur[k - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for k in 0..phi {
                cur[k] -= top * phi_poly[k];
            }
        }
    }
    let f = Arc::new(CycloField { phi, powers });
    field_cache().lock().unwrap().insert(order, f.clone());
    f
}

fn canonical_order(order: u32) -> u32 {
    order.lcm(&8)
}

// ---------------------------------------------------------------------------
// CycloScalar

/// Exact element of the cyclotomic field ℚ(ζ_N), N a multiple of 8.
#[derive(Clone)]
pub struct CycloScalar {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl CycloScalar {
    pub fn zero_of(order: u32) -> Self {
        let order = canonical_order(order);
        let phi = field(order).phi;
        CycloScalar {
            order,
            coeffs: vec![BigRational::zero(); phi],
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut z = Self::zero_of(8);
        z.coeffs[0] = r;
        z
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Builds a scalar from coordinates in ℚ(ζ_order); the order is canonicalized.
    pub fn from_coeffs(order: u32, coeffs: Vec<BigRational>) -> Result<Self, HolantError> {
        if order == 0 {
            return Err(HolantError::Parse("scalar order must be positive".into()));
        }
        let src = field(order);
        if coeffs.len() != src.phi {
            return Err(HolantError::Parse(format!(
                "order {} expects {} coefficients, got {}",
                order,
                src.phi,
                coeffs.len()
            )));
        }
        let raw = CycloScalar { order, coeffs };
        Ok(raw.embed(canonical_order(order)))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Re-expresses the value in ℚ(ζ_M); requires `self.order() | M`.
    pub fn embed(&self, target: u32) -> Self {
        if target == self.order {
            return self.clone();
        }
        assert!(
            target % self.order == 0,
            "cannot embed order {} into {}",
            self.order,
            target
        );
        let step = (target / self.order) as usize;
        let f = field(target);
        let mut out = vec![BigRational::zero(); f.phi];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(k, m) in &f.powers[i * step] {
                out[k] += c * BigRational::from_integer(BigInt::from(m));
            }
        }
        CycloScalar {
            order: target,
            coeffs: out,
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        if self.order == other.order {
            return (self.clone(), other.clone());
        }
        let m = self.order.lcm(&other.order);
        (self.embed(m), other.embed(m))
    }

    /// Rational value when the scalar lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn from_poly(order: u32, poly: &[BigRational]) -> Self {
        let f = field(order);
        let mut out = vec![BigRational::zero(); f.phi];
        for (e, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = e % order as usize;
            if e < f.phi {
                out[e] += c;
            } else {
                for &(k, m) in &f.powers[e] {
                    out[k] += c * BigRational::from_integer(BigInt::from(m));
                }
            }
        }
        CycloScalar { order, coeffs: out }
    }

    fn mul_same(&self, other: &Self) -> Self {
        let n = self.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] += a * b;
            }
        }
        Self::from_poly(self.order, &prod)
    }

    /// Multiplies by ζ_N^e for the scalar's own order N, which is a coordinate shift.
    pub fn mul_root(&self, exponent: i64) -> Self {
        let n = self.order as i64;
        let shift = exponent.rem_euclid(n) as usize;
        let mut poly = vec![BigRational::zero(); self.coeffs.len() + shift];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i + shift] = c.clone();
        }
        Self::from_poly(self.order, &poly)
    }

    /// Multiplies by 𝔦^k.
    pub fn mul_i_pow(&self, k: i64) -> Self {
        self.mul_root(k * self.order as i64 / 4)
    }

    /// Solves `self · y = 1` in the power basis.
    fn inverse(&self) -> Option<Self> {
        if let Some(r) = self.as_rational() {
            if r.is_zero() {
                return None;
            }
            let mut out = Self::zero_of(self.order);
            out.coeffs[0] = r.recip();
            return Some(out);
        }
        let mut nz = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero());
        if let (Some((e, c)), None) = (nz.next(), nz.next()) {
            let mut out = Self::zero_of(self.order);
            out.coeffs[0] = c.recip();
            return Some(out.mul_root(-(e as i64)));
        }
        let phi = self.coeffs.len();
        // column j = self · ζ^j
        let mut cols = Vec::with_capacity(phi);
        let mut cur = self.clone();
        for _ in 0..phi {
            cols.push(cur.coeffs.clone());
            cur = cur.mul_root(1);
        }
        // augmented matrix rows
        let mut m: Vec<Vec<BigRational>> = (0..phi)
            .map(|r| {
                let mut row: Vec<BigRational> = (0..phi).map(|c| cols[c][r].clone()).collect();
                row.push(if r == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                row
            })
            .collect();
        for col in 0..phi {
            let piv = (col..phi).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            let inv = m[col][col].recip();
            for v in m[col].iter_mut() {
                *v *= &inv;
            }
            for r in 0..phi {
                if r != col && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    for c in col..=phi {
                        let t = &m[col][c] * &factor;
                        m[r][c] -= t;
                    }
                }
            }
        }
        Some(CycloScalar {
            order: self.order,
            coeffs: m.into_iter().map(|row| row[phi].clone()).collect(),
        })
    }

    /// Numerical value with ζ_N ↦ e^{2π𝔦/N}.
    pub fn approx(&self) -> FloatScalar {
        FloatScalar(self.approx_complex())
    }

    fn approx_complex(&self) -> Complex64 {
        let n = self.order as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = rational_to_f64(c);
            let theta = 2.0 * std::f64::consts::PI * i as f64 / n;
            acc += Complex64::new(v * theta.cos(), v * theta.sin());
        }
        acc
    }

    /// Returns `e` with `self == ζ_N^e` for the scalar's order N, if any.
    pub fn root_of_unity_exponent(&self) -> Option<u32> {
        let c = self.approx_complex();
        if (c.norm() - 1.0).abs() > 1e-6 {
            return None;
        }
        let n = self.order as f64;
        let mut e = (c.arg() / (2.0 * std::f64::consts::PI) * n).round() as i64;
        e = e.rem_euclid(self.order as i64);
        let candidate = cyclo(self.order, e);
        if &candidate == self {
            Some(e as u32)
        } else {
            None
        }
    }

    /// Integer key usable for hashing after embedding into `order`.
    pub fn key_at(&self, order: u32) -> Vec<(BigInt, BigInt)> {
        self.embed(order)
            .coeffs
            .iter()
            .map(|c| (c.numer().clone(), c.denom().clone()))
            .collect()
    }

    /// Sign of a real value: −1, 0 or 1. Uses the float approximation away from zero.
    pub fn real_sign(&self) -> i32 {
        if Scalar::is_zero(self) {
            0
        } else if self.approx_complex().re > 0.0 {
            1
        } else {
            -1
        }
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // rescale huge numerators and denominators before converting
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900);
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

/// ζ_N^e as an element of ℚ(ζ_{lcm(N,8)}).
pub fn cyclo(order: u32, exponent: i64) -> CycloScalar {
    assert!(order >= 1, "order must be positive");
    let target = canonical_order(order);
    let step = (target / order) as i64;
    let e = (exponent * step).rem_euclid(target as i64) as usize;
    let f = field(target);
    let mut out = vec![BigRational::zero(); f.phi];
    for &(k, m) in &f.powers[e] {
        out[k] = BigRational::from_integer(BigInt::from(m));
    }
    CycloScalar {
        order: target,
        coeffs: out,
    }
}

/// 𝔦 = ζ₄.
pub fn imag_unit() -> CycloScalar {
    cyclo(4, 1)
}

/// α = ζ₈ = (1+𝔦)/√2.
pub fn alpha() -> CycloScalar {
    cyclo(8, 1)
}

/// √2 = ζ₈ + ζ₈⁻¹.
pub fn sqrt2() -> CycloScalar {
    cyclo(8, 1) + cyclo(8, 7)
}

/// 1/√2 = √2 / 2.
pub fn inv_sqrt2() -> CycloScalar {
    sqrt2() * CycloScalar::from_ratio(1, 2)
}

impl Scalar for CycloScalar {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        Self::zero_of(8)
    }

    fn one() -> Self {
        Self::from_ratio(1, 1)
    }

    fn from_i64(v: i64) -> Self {
        Self::from_ratio(v, 1)
    }

    fn from_cyclo(c: &CycloScalar) -> Self {
        c.clone()
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn plus(&self, other: &Self) -> Self {
        let (mut a, b) = self.aligned(other);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += y;
        }
        a
    }

    fn minus(&self, other: &Self) -> Self {
        let (mut a, b) = self.aligned(other);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x -= y;
        }
        a
    }

    fn times(&self, other: &Self) -> Self {
        if self.order == other.order {
            self.mul_same(other)
        } else {
            let (a, b) = self.aligned(other);
            a.mul_same(&b)
        }
    }

    fn negated(&self) -> Self {
        CycloScalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut poly = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[(n - i) % n] = c.clone();
        }
        Self::from_poly(self.order, &poly)
    }

    fn inv(&self) -> Result<Self, HolantError> {
        self.inverse().ok_or(HolantError::DivisionByZero)
    }

    fn to_complex(&self) -> Complex64 {
        self.approx_complex()
    }

    fn as_exact(&self) -> Option<&CycloScalar> {
        Some(self)
    }
}

impl PartialEq for CycloScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = self.aligned(other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for CycloScalar {}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("{}", c),
                1 => format!("{}·ζ{}", c, self.order),
                _ => format!("{}·ζ{}^{}", c, self.order, i),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

macro_rules! forward_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                self.plus(&rhs)
            }
        }
        impl<'a> Add<&'a $t> for &'a $t {
            type Output = $t;
            fn add(self, rhs: &'a $t) -> $t {
                self.plus(rhs)
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                self.minus(&rhs)
            }
        }
        impl<'a> Sub<&'a $t> for &'a $t {
            type Output = $t;
            fn sub(self, rhs: &'a $t) -> $t {
                self.minus(rhs)
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                self.times(&rhs)
            }
        }
        impl<'a> Mul<&'a $t> for &'a $t {
            type Output = $t;
            fn mul(self, rhs: &'a $t) -> $t {
                self.times(rhs)
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                self.negated()
            }
        }
    };
}

forward_ops!(CycloScalar);
forward_ops!(FloatScalar);

fn parse_rational(s: &str) -> Result<BigRational, HolantError> {
    let bad = || HolantError::Parse(format!("bad rational `{s}`"));
    let (p, q) = match s.trim().split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(HolantError::Parse("zero denominator".into()));
    }
    Ok(BigRational::new(p, q))
}

/// Accepts "3", "-1/2", "i", "-i", "2i", "1/2i".
impl std::str::FromStr for CycloScalar {
    type Err = HolantError;

    fn from_str(s: &str) -> Result<Self, HolantError> {
        let t = s.trim();
        if let Some(coef) = t.strip_suffix('i') {
            let r = match coef {
                "" | "+" => BigRational::one(),
                "-" => -BigRational::one(),
                c => parse_rational(c)?,
            };
            return Ok(CycloScalar::from_rational(r).times(&imag_unit()));
        }
        Ok(CycloScalar::from_rational(parse_rational(t)?))
    }
}

fn rational_json(r: &BigRational) -> serde_json::Value {
    match (r.is_integer(), r.numer().to_i64()) {
        (true, Some(i)) => i.into(),
        _ => r.to_string().into(),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Coeff {
    Int(i64),
    Text(String),
    Pair([String; 2]),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CycloRepr {
    Int(i64),
    Text(String),
    Poly { order: u32, coeffs: Vec<Coeff> },
}

/// Integers as numbers, other rationals as "p/q", pure imaginary values as
/// "bi", everything else as {"order", "coeffs"}.
impl Serialize for CycloScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if let Some(r) = self.as_rational() {
            return rational_json(&r).serialize(s);
        }
        if let Some(b) = self.times(&imag_unit()).negated().as_rational() {
            let coef = if b.is_one() {
                String::new()
            } else if (-b.clone()).is_one() {
                "-".into()
            } else {
                b.to_string()
            };
            return format!("{coef}i").serialize(s);
        }
        let coeffs: Vec<serde_json::Value> = self.coeffs.iter().map(rational_json).collect();
        serde_json::json!({"order": self.order, "coeffs": coeffs}).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match CycloRepr::deserialize(d)? {
            CycloRepr::Int(i) => Ok(CycloScalar::from_i64(i)),
            CycloRepr::Text(t) => t.parse().map_err(D::Error::custom),
            CycloRepr::Poly { order, coeffs } => {
                let coeffs = coeffs
                    .iter()
                    .map(|c| match c {
                        Coeff::Int(i) => Ok(BigRational::from_integer((*i).into())),
                        Coeff::Text(t) => parse_rational(t),
                        Coeff::Pair([p, q]) => parse_rational(&format!("{p}/{q}")),
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(D::Error::custom)?;
                CycloScalar::from_coeffs(order, coeffs).map_err(D::Error::custom)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// FloatScalar

static EPSILON_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Global comparison tolerance of the float backend.
pub fn epsilon() -> f64 {
    f64::from_bits(EPSILON_BITS.load(Ordering::Relaxed))
}

pub fn set_epsilon(eps: f64) {
    EPSILON_BITS.store(eps.to_bits(), Ordering::Relaxed);
}

/// Double-precision complex number compared up to [`epsilon`].
#[derive(Clone, Copy)]
pub struct FloatScalar(pub Complex64);

impl FloatScalar {
    pub fn new(re: f64, im: f64) -> Self {
        FloatScalar(Complex64::new(re, im))
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }
}

impl Scalar for FloatScalar {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        FloatScalar::new(0.0, 0.0)
    }

    fn one() -> Self {
        FloatScalar::new(1.0, 0.0)
    }

    fn from_i64(v: i64) -> Self {
        FloatScalar::new(v as f64, 0.0)
    }

    fn from_cyclo(c: &CycloScalar) -> Self {
        c.approx()
    }

    fn is_zero(&self) -> bool {
        self.0.norm() <= epsilon()
    }

    fn plus(&self, other: &Self) -> Self {
        FloatScalar(self.0 + other.0)
    }

    fn minus(&self, other: &Self) -> Self {
        FloatScalar(self.0 - other.0)
    }

    fn times(&self, other: &Self) -> Self {
        FloatScalar(self.0 * other.0)
    }

    fn negated(&self) -> Self {
        FloatScalar(-self.0)
    }

    fn conj(&self) -> Self {
        FloatScalar(self.0.conj())
    }

    fn inv(&self) -> Result<Self, HolantError> {
        if self.is_zero() {
            Err(HolantError::DivisionByZero)
        } else {
            Ok(FloatScalar(self.0.inv()))
        }
    }

    fn to_complex(&self) -> Complex64 {
        self.0
    }

    fn as_exact(&self) -> Option<&CycloScalar> {
        None
    }
}

impl PartialEq for FloatScalar {
    fn eq(&self, other: &Self) -> bool {
        (self.0 - other.0).norm() <= epsilon()
    }
}

impl fmt::Debug for FloatScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FloatScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.im == 0.0 {
            write!(f, "{}", self.0.re)
        } else {
            write!(f, "{}{:+}i", self.0.re, self.0.im)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FloatRepr {
    re: f64,
    im: f64,
}

impl Serialize for FloatScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FloatRepr {
            re: self.0.re,
            im: self.0.im,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FloatScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = FloatRepr::deserialize(d)?;
        Ok(FloatScalar::new(r.re, r.im))
    }
}

/// Exact square root of a rational of the form ±s² or ±2s², if it has one.
pub fn exact_sqrt_rational(q: &BigRational) -> Option<CycloScalar> {
    if q.is_zero() {
        return Some(CycloScalar::zero());
    }
    let neg = q.is_negative();
    let a = q.abs();
    let root = |x: &BigRational| -> Option<BigRational> {
        let n = x.numer().sqrt();
        let d = x.denom().sqrt();
        if &n * &n == *x.numer() && &d * &d == *x.denom() {
            Some(BigRational::new(n, d))
        } else {
            None
        }
    };
    let base = if let Some(r) = root(&a) {
        CycloScalar::from_rational(r)
    } else {
        let half = &a / BigRational::from_integer(BigInt::from(2));
        sqrt2() * CycloScalar::from_rational(root(&half)?)
    };
    Some(if neg { base * imag_unit() } else { base })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(totient(40), 16);
        assert_eq!(cyclotomic_polynomial(40).len(), 17);
    }

    #[test]
    fn i_squared_and_alpha() {
        let i = cyclo(4, 1);
        assert_eq!(i.order(), 8);
        assert_eq!(&i * &i, CycloScalar::from_i64(-1));
        let a = alpha();
        assert_eq!(&a * &a, i);
        let a4 = (&a * &a) * (&a * &a);
        assert_eq!(a4, CycloScalar::from_i64(-1));
    }

    #[test]
    fn sqrt2_squares_to_two() {
        let s = cyclo(8, 1) + cyclo(8, 1).conj();
        assert_eq!(&s * &s, CycloScalar::from_i64(2));
        assert_eq!(inv_sqrt2() * sqrt2(), CycloScalar::one());
    }

    #[test]
    fn norm_identity() {
        let x = CycloScalar::from_ratio(3, 2) + CycloScalar::from_ratio(-5, 7) * imag_unit();
        let n = x.norm_sqr();
        assert_eq!(
            n,
            CycloScalar::from_ratio(9, 4) + CycloScalar::from_ratio(25, 49)
        );
    }

    #[test]
    fn approximations() {
        let i = imag_unit().approx();
        assert!((i.re()).abs() < 1e-12 && (i.im() - 1.0).abs() < 1e-12);
        let a = alpha().approx();
        assert!((a.re() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        let z = cyclo(12, 1);
        assert_eq!(z.order(), 24);
        let c = z.approx();
        assert!((c.re() - (30f64).to_radians().cos()).abs() < 1e-12);
        assert!((c.im() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn embedding_is_consistent() {
        let x = alpha() + CycloScalar::from_ratio(1, 3);
        let y = x.embed(24);
        assert_eq!(x, y);
        assert_eq!(y.order(), 24);
        assert_eq!(cyclo(3, 1).times(&cyclo(3, 2)), CycloScalar::one());
    }

    #[test]
    fn inverse_and_division_by_zero() {
        let x = alpha() + CycloScalar::from_i64(2) + cyclo(12, 5);
        let y = x.inv().unwrap();
        assert_eq!(x * y, CycloScalar::one());
        assert!(matches!(
            CycloScalar::zero().inv(),
            Err(HolantError::DivisionByZero)
        ));
    }

    #[test]
    fn json_round_trip() {
        let x = alpha() + CycloScalar::from_ratio(-7, 3);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"coeffs":["-7/3",1,0,0],"order":8}"#);
        let y: CycloScalar = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        let legacy: CycloScalar = serde_json::from_str(r#"{"order":8,"coeffs":[["-7","3"],["1","1"],["0","1"],["0","1"]]}"#).unwrap();
        assert_eq!(legacy, x);
        assert_eq!(serde_json::to_string(&CycloScalar::from_ratio(3, 6)).unwrap(), "\"1/2\"");
        assert_eq!(serde_json::to_string(&imag_unit().negated()).unwrap(), "\"-i\"");
        let z: CycloScalar = serde_json::from_str("\"-3/2i\"").unwrap();
        assert_eq!(z, CycloScalar::from_ratio(-3, 2).times(&imag_unit()));
        let f: FloatScalar = serde_json::from_str("{\"re\":1.5,\"im\":-2}").unwrap();
        assert_eq!(f, FloatScalar::new(1.5, -2.0));
    }

    #[test]
    fn root_exponents_and_sqrt() {
        assert_eq!(cyclo(24, 5).root_of_unity_exponent(), Some(5));
        assert_eq!(sqrt2().root_of_unity_exponent(), None);
        let r = exact_sqrt_rational(&BigRational::from_integer(BigInt::from(-8))).unwrap();
        assert_eq!(&r * &r, CycloScalar::from_i64(-8));
        assert!(exact_sqrt_rational(&BigRational::from_integer(BigInt::from(3))).is_none());
    }
}
