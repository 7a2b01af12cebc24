//! Tractable-class membership tests and dichotomy verdicts.

use serde::{Deserialize, Serialize};

use crate::entangle::{self, OddHardness, ReductionTrace};
use crate::error::{HolantError, Result};
use crate::factor::upf;
use crate::gadget::{holo, holo_local, interpolation_predicates, Transform2x2};
use crate::scalar::{CycloScalar, Scalar};
use crate::signature::{
    bits_of, equality, neq2, support_structure, BundleSign, ExactSignature, Relation, Signature,
};

type T2 = Transform2x2<CycloScalar>;

/// Tractable classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name")]
pub enum ClassTag {
    T,
    T1,
    P,
    A,
    L,
    Akd { k: u32, d: i64 },
}

/// Polynomial witness λ·χ_{AX=0}·𝔦^{Q(X)} for membership in 𝒜.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineCertificate {
    pub arity: usize,
    pub lambda: CycloScalar,
    /// Rows over (x₁, …, x_n, 1); each row r asserts Σ r_j x_j + r_{n+1} ≡ 0 (mod 2).
    pub constraints: Vec<Vec<u8>>,
    pub free_vars: Vec<usize>,
    /// a₀ (mod 4).
    pub constant: u8,
    /// (k, a_k) with a_k ∈ ℤ₄ nonzero.
    pub linear: Vec<(usize, u8)>,
    /// (j, k, 2b_{jk}) with value 2 (mod 4); only nonzero cross terms are listed.
    pub cross: Vec<(usize, usize, u8)>,
}

impl AffineCertificate {
    pub fn q_at(&self, bits: &[u8]) -> u8 {
        let mut q = self.constant as u32;
        for &(k, a) in &self.linear {
            q += a as u32 * bits[k - 1] as u32;
        }
        for &(j, k, c) in &self.cross {
            q += c as u32 * (bits[j - 1] & bits[k - 1]) as u32;
        }
        (q % 4) as u8
    }

    pub fn in_support(&self, bits: &[u8]) -> bool {
        self.constraints.iter().all(|row| {
            let s = bits
                .iter()
                .zip(row.iter())
                .fold(row[self.arity], |acc, (x, r)| acc ^ (x & r));
            s == 0
        })
    }

    /// Rebuilds the signature described by the certificate.
    pub fn evaluate(&self) -> ExactSignature {
        Signature::from_fn(self.arity, |i| {
            let bits = bits_of(i, self.arity);
            if self.in_support(&bits) {
                self.lambda.mul_i_pow(self.q_at(&bits) as i64)
            } else {
                CycloScalar::zero()
            }
        })
        .expect("arity within cap")
    }

    /// Human-readable Q, e.g. `x1 + x2 + 2x1x2`.
    pub fn q_string(&self) -> String {
        let mut terms = Vec::new();
        if self.constant != 0 {
            terms.push(self.constant.to_string());
        }
        for &(k, a) in &self.linear {
            terms.push(if a == 1 { format!("x{k}") } else { format!("{a}x{k}") });
        }
        for &(j, k, c) in &self.cross {
            terms.push(format!("{c}x{j}x{k}"));
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// Evidence attached to a membership answer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    Zero,
    Factors { scopes: Vec<Vec<usize>> },
    AntipodalFactors { factors: Vec<AntipodalFactor> },
    Affine(AffineCertificate),
    LocalAffine { points: Vec<LocalPoint> },
    Violation { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AntipodalFactor {
    pub scope: Vec<usize>,
    pub pair: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalPoint {
    pub point: String,
    pub certificate: AffineCertificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassMembership {
    pub class: ClassTag,
    pub member: bool,
    pub certificate: Certificate,
}

impl ClassMembership {
    fn yes(class: ClassTag, certificate: Certificate) -> Self {
        ClassMembership {
            class,
            member: true,
            certificate,
        }
    }

    fn no(class: ClassTag, reason: impl Into<String>) -> Self {
        ClassMembership {
            class,
            member: false,
            certificate: Certificate::Violation {
                reason: reason.into(),
            },
        }
    }

    fn retag(mut self, class: ClassTag) -> Self {
        self.class = class;
        self
    }
}

fn bit_string(bits: &[u8]) -> String {
    bits.iter().map(|b| char::from(b'0' + b)).collect()
}

// ---------------------------------------------------------------------------
// Membership tests

pub fn in_t(f: &ExactSignature) -> Result<ClassMembership> {
    tensor_class(f, 2, ClassTag::T)
}

pub fn in_t1(f: &ExactSignature) -> Result<ClassMembership> {
    tensor_class(f, 1, ClassTag::T1)
}

fn tensor_class(f: &ExactSignature, max: usize, tag: ClassTag) -> Result<ClassMembership> {
    if f.is_zero() {
        return Ok(ClassMembership::yes(tag, Certificate::Zero));
    }
    let fac = upf(f)?;
    if let Some(big) = fac.factors.iter().find(|x| x.signature.arity() > max) {
        return Ok(ClassMembership::no(
            tag,
            format!("irreducible factor of arity {} on {:?}", big.signature.arity(), big.scope),
        ));
    }
    Ok(ClassMembership::yes(
        tag,
        Certificate::Factors {
            scopes: fac.factors.iter().map(|x| x.scope.clone()).collect(),
        },
    ))
}

/// f ∈ 𝒯 as a plain boolean.
pub fn is_t<S: Scalar>(f: &Signature<S>) -> bool {
    f.is_zero()
        || upf(f)
            .map(|fac| fac.factors.iter().all(|x| x.signature.arity() <= 2))
            .unwrap_or(true)
}

pub fn in_p(f: &ExactSignature) -> Result<ClassMembership> {
    if f.is_zero() {
        return Ok(ClassMembership::yes(ClassTag::P, Certificate::Zero));
    }
    let fac = upf(f)?;
    let mut factors = Vec::new();
    for x in &fac.factors {
        let g = &x.signature;
        let n = g.arity();
        let supp = g.support();
        let mask = (1usize << n) - 1;
        let ok = supp.len() == 1 || (supp.len() == 2 && supp[0] ^ supp[1] == mask);
        if !ok {
            return Ok(ClassMembership::no(
                ClassTag::P,
                format!(
                    "factor on {:?} has support of size {} outside an antipodal pair",
                    x.scope,
                    supp.len()
                ),
            ));
        }
        let a = supp[0];
        factors.push(AntipodalFactor {
            scope: x.scope.clone(),
            pair: [bit_string(&bits_of(a, n)), bit_string(&bits_of(a ^ mask, n))],
        });
    }
    Ok(ClassMembership::yes(
        ClassTag::P,
        Certificate::AntipodalFactors { factors },
    ))
}

pub fn in_a(f: &ExactSignature) -> Result<ClassMembership> {
    let n = f.arity();
    if f.is_zero() {
        return Ok(ClassMembership::yes(ClassTag::A, Certificate::Zero));
    }
    let st = support_structure(f)?;
    if !st.affine {
        let w = st.witness.as_ref().map(|[a, b, c]| {
            format!("{} + {} + {} lies outside", bit_string(a), bit_string(b), bit_string(c))
        });
        return Ok(ClassMembership::no(
            ClassTag::A,
            format!("support is not affine ({})", w.unwrap_or_default()),
        ));
    }
    let r = st.rank;
    let free = st.free_vars.clone();
    // support point for every free assignment y
    let point_of = |y: usize| -> Vec<u8> {
        let mut bits = vec![0u8; n];
        for (k, &v) in free.iter().enumerate() {
            bits[v - 1] = ((y >> (r - 1 - k)) & 1) as u8;
        }
        for rel in &st.relations {
            bits[rel.var - 1] = rel
                .combination
                .iter()
                .fold(rel.constant, |acc, &j| acc ^ bits[j - 1]);
        }
        bits
    };
    let lambda = f.at(&point_of(0)).clone();
    let mut e = vec![0i64; 1 << r];
    for (y, slot) in e.iter_mut().enumerate() {
        let p = point_of(y);
        let v = f.at(&p);
        match (0..4).find(|&k| &lambda.mul_i_pow(k) == v) {
            Some(k) => *slot = k,
            None => {
                return Ok(ClassMembership::no(
                    ClassTag::A,
                    format!("value at {} is not λ times a power of i", bit_string(&p)),
                ))
            }
        }
    }
    // finite differences at the origin (Möbius transform over ℤ)
    let mut c = e.clone();
    for b in 0..r {
        let m = 1usize << b;
        for i in 0..c.len() {
            if i & m != 0 {
                c[i] -= c[i ^ m];
            }
        }
    }
    let mut linear = Vec::new();
    let mut cross = Vec::new();
    for (s, &val) in c.iter().enumerate() {
        let v = val.rem_euclid(4) as u8;
        let vars: Vec<usize> = (0..r)
            .filter(|&k| s >> (r - 1 - k) & 1 == 1)
            .map(|k| free[k])
            .collect();
        match vars.len() {
            0 => {}
            1 if v != 0 => linear.push((vars[0], v)),
            2 if v % 2 == 1 => {
                return Ok(ClassMembership::no(
                    ClassTag::A,
                    format!("second-order difference in x{}, x{} is odd", vars[0], vars[1]),
                ))
            }
            2 if v != 0 => cross.push((vars[0], vars[1], v)),
            k if k >= 3 && v != 0 => {
                return Ok(ClassMembership::no(
                    ClassTag::A,
                    format!("order-{k} difference over {vars:?} is {v} mod 4"),
                ))
            }
            _ => {}
        }
    }
    linear.sort_unstable();
    cross.sort_unstable();
    let constraints = st
        .relations
        .iter()
        .filter(|rel| !(rel.combination.len() == 1 && rel.combination[0] == rel.var))
        .map(|rel| constraint_row(rel, n))
        .collect();
    let cert = AffineCertificate {
        arity: n,
        lambda,
        constraints,
        free_vars: free.clone(),
        constant: 0,
        linear,
        cross,
    };
    debug_assert_eq!(&cert.evaluate(), f);
    Ok(ClassMembership::yes(ClassTag::A, Certificate::Affine(cert)))
}

fn constraint_row(rel: &Relation, n: usize) -> Vec<u8> {
    let mut row = vec![0u8; n + 1];
    row[rel.var - 1] ^= 1;
    for &j in &rel.combination {
        row[j - 1] ^= 1;
    }
    row[n] = rel.constant;
    row
}

fn affine_cert(m: &ClassMembership) -> Option<AffineCertificate> {
    match &m.certificate {
        Certificate::Affine(c) => Some(c.clone()),
        _ => None,
    }
}

pub fn in_l(f: &ExactSignature) -> Result<ClassMembership> {
    if f.is_zero() {
        return Ok(ClassMembership::yes(ClassTag::L, Certificate::Zero));
    }
    let n = f.arity();
    let t_alpha = T2::t_alpha();
    let id = T2::identity();
    let mut points = Vec::new();
    for s in f.support() {
        let bits = bits_of(s, n);
        let ts: Vec<T2> = bits
            .iter()
            .map(|&b| if b == 1 { t_alpha.clone() } else { id.clone() })
            .collect();
        let g = holo_local(f, &ts);
        let m = in_a(&g)?;
        if !m.member {
            return Ok(ClassMembership::no(
                ClassTag::L,
                format!("transform at support point {} leaves 𝒜", bit_string(&bits)),
            ));
        }
        points.push(LocalPoint {
            point: bit_string(&bits),
            certificate: affine_cert(&m).expect("nonzero member has an affine certificate"),
        });
    }
    Ok(ClassMembership::yes(ClassTag::L, Certificate::LocalAffine { points }))
}

pub fn in_akd(f: &ExactSignature, k: u32, d: i64) -> Result<ClassMembership> {
    if k < 1 || d < 1 || d > k as i64 {
        return Err(HolantError::Precondition(format!("need k ≥ 1 and d ∈ [k], got k={k}, d={d}")));
    }
    let g = holo(f, &T2::t_k_d(k, d));
    Ok(in_a(&g)?.retag(ClassTag::Akd { k, d }))
}

/// The common μ of first-order orthogonality, if it holds.
pub fn first_order_orthogonality<S: Scalar>(f: &Signature<S>) -> Result<Option<S>> {
    let n = f.arity();
    if n < 2 {
        return Err(HolantError::Precondition("arity must be at least 2".into()));
    }
    let mut mu: Option<S> = None;
    for i in 1..=n {
        let (r0, r1) = f.restriction_rows(i)?;
        let norm = |r: &[S]| r.iter().fold(S::zero(), |acc, v| acc.plus(&v.norm_sqr()));
        let n0 = norm(&r0);
        let n1 = norm(&r1);
        let ip = r0
            .iter()
            .zip(r1.iter())
            .fold(S::zero(), |acc, (a, b)| acc.plus(&a.times(&b.conj())));
        if !ip.is_zero() || n0 != n1 || n0.is_zero() {
            return Ok(None);
        }
        match &mu {
            Some(m) if *m != n0 => return Ok(None),
            Some(_) => {}
            None => mu = Some(n0),
        }
    }
    Ok(mu)
}

// ---------------------------------------------------------------------------
// Monotone normal form

/// Flips every "−" bundle member so that all bundle types are "+".
pub fn monotone_normal_form(f: &ExactSignature) -> Result<(ExactSignature, Vec<usize>)> {
    let st = support_structure(f)?;
    if !st.affine {
        return Err(HolantError::NotAffine);
    }
    let mut flips: Vec<usize> = st
        .bundles
        .values()
        .flatten()
        .filter(|(_, s)| *s == BundleSign::Minus)
        .map(|(v, _)| *v)
        .collect();
    flips.sort_unstable();
    let ts: Vec<T2> = (1..=f.arity())
        .map(|v| {
            if flips.contains(&v) {
                T2::pauli_x()
            } else {
                T2::identity()
            }
        })
        .collect();
    Ok((holo_local(f, &ts), flips))
}

// ---------------------------------------------------------------------------
// Verdicts

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Problem {
    Csp,
    Csp2,
    Cspk { k: u32 },
    HolantC,
    HolantOdd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Tractable,
    Hard,
    Unknown,
}

/// One condition of a dichotomy theorem and how the set fared on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: String,
    pub holds: bool,
    /// Per-member memberships (all of them when the condition holds, the
    /// first failing one otherwise).
    pub memberships: Vec<(usize, ClassMembership)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Tractable {
        condition: String,
        transform: Option<String>,
        checks: Vec<ConditionCheck>,
    },
    Hard {
        failed: Vec<ConditionCheck>,
        traces: Vec<ReductionTrace>,
        handoff: Option<Box<DichotomyVerdict>>,
    },
    Unknown {
        reason: String,
        catalog_version: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DichotomyVerdict {
    pub problem: Problem,
    pub outcome: Outcome,
    pub witness: Witness,
}

type Test = fn(&ExactSignature) -> Result<ClassMembership>;

fn check_all(name: &str, set: &[ExactSignature], test: &dyn Fn(&ExactSignature) -> Result<ClassMembership>) -> Result<ConditionCheck> {
    let mut memberships = Vec::new();
    for (i, f) in set.iter().enumerate() {
        let m = test(f)?;
        let ok = m.member;
        memberships.push((i, m));
        if !ok {
            let last = memberships.pop().unwrap();
            return Ok(ConditionCheck {
                condition: name.into(),
                holds: false,
                memberships: vec![last],
            });
        }
    }
    Ok(ConditionCheck {
        condition: name.into(),
        holds: true,
        memberships,
    })
}

fn transformed(set: &[ExactSignature], t: &T2) -> Vec<ExactSignature> {
    set.iter().map(|f| holo(f, t)).collect()
}

fn decide(problem: Problem, conditions: Vec<(String, Vec<ExactSignature>, Test)>) -> Result<DichotomyVerdict> {
    let mut failed = Vec::new();
    for (name, set, test) in conditions {
        let c = check_all(&name, &set, &test)?;
        if c.holds {
            return Ok(DichotomyVerdict {
                problem,
                outcome: Outcome::Tractable,
                witness: Witness::Tractable {
                    condition: name,
                    transform: None,
                    checks: vec![c],
                },
            });
        }
        failed.push(c);
    }
    Ok(DichotomyVerdict {
        problem,
        outcome: Outcome::Hard,
        witness: Witness::Hard {
            failed,
            traces: Vec::new(),
            handoff: None,
        },
    })
}

/// #CSP(F): tractable iff F ⊆ 𝒜 or F ⊆ 𝒫.
pub fn verdict_csp(set: &[ExactSignature]) -> Result<DichotomyVerdict> {
    decide(
        Problem::Csp,
        vec![
            ("F ⊆ A".into(), set.to_vec(), in_a as Test),
            ("F ⊆ P".into(), set.to_vec(), in_p as Test),
        ],
    )
}

/// #CSP₂(F): tractable iff F ⊆ 𝒜, 𝒫, ℒ, or T_α F ⊆ 𝒜.
pub fn verdict_csp2(set: &[ExactSignature]) -> Result<DichotomyVerdict> {
    decide(
        Problem::Csp2,
        vec![
            ("F ⊆ A".into(), set.to_vec(), in_a as Test),
            ("F ⊆ P".into(), set.to_vec(), in_p as Test),
            ("F ⊆ L".into(), set.to_vec(), in_l as Test),
            ("T_α F ⊆ A".into(), transformed(set, &T2::t_alpha()), in_a as Test),
        ],
    )
}

/// #CSP_k(≠₂, F): tractable iff F ⊆ 𝒫 or F ∪ {≠₂} ⊆ 𝒜_k^d for some d ∈ [k].
pub fn verdict_cspk(set: &[ExactSignature], k: u32) -> Result<DichotomyVerdict> {
    if k < 1 {
        return Err(HolantError::Precondition("k must be at least 1".into()));
    }
    let problem = Problem::Cspk { k };
    let mut failed = Vec::new();
    let p = check_all("F ⊆ P", set, &in_p)?;
    if p.holds {
        return Ok(tractable(problem, "F ⊆ P", None, vec![p]));
    }
    failed.push(p);
    let mut with_neq = set.to_vec();
    with_neq.push(neq2());
    for d in 1..=k as i64 {
        let name = format!("F ∪ {{≠₂}} ⊆ A_{k}^{d}");
        let c = check_all(&name, &with_neq, &|f| in_akd(f, k, d))?;
        if c.holds {
            return Ok(tractable(problem, &name, None, vec![c]));
        }
        failed.push(c);
    }
    Ok(DichotomyVerdict {
        problem,
        outcome: Outcome::Hard,
        witness: Witness::Hard {
            failed,
            traces: Vec::new(),
            handoff: None,
        },
    })
}

fn tractable(problem: Problem, condition: &str, transform: Option<String>, checks: Vec<ConditionCheck>) -> DichotomyVerdict {
    DichotomyVerdict {
        problem,
        outcome: Outcome::Tractable,
        witness: Witness::Tractable {
            condition: condition.into(),
            transform,
            checks,
        },
    }
}

fn require_real(set: &[ExactSignature]) -> Result<()> {
    if set.iter().all(|f| f.is_real()) {
        Ok(())
    } else {
        Err(HolantError::Precondition("signature set must be real-valued".into()))
    }
}

/// Holant^c(F) for real F: the seven tractable conditions.
pub fn verdict_holantc(set: &[ExactSignature]) -> Result<DichotomyVerdict> {
    require_real(set)?;
    decide(
        Problem::HolantC,
        vec![
            ("F ⊆ T".into(), set.to_vec(), in_t as Test),
            ("F ⊆ A".into(), set.to_vec(), in_a as Test),
            ("F ⊆ P".into(), set.to_vec(), in_p as Test),
            ("F ⊆ L".into(), set.to_vec(), in_l as Test),
            ("HF ⊆ P".into(), transformed(set, &T2::hadamard()), in_p as Test),
            ("F̂ ⊆ P".into(), transformed(set, &T2::z_inv()), in_p as Test),
            ("T_α F ⊆ A".into(), transformed(set, &T2::t_alpha()), in_a as Test),
        ],
    )
}

/// Version tag of the transform catalog used by [`verdict_holant_odd`].
pub const CATALOG_VERSION: &str = "odd-catalog-v1";

/// Candidate transforms: fixed ones, then ones suggested by the members.
pub fn transform_catalog(set: &[ExactSignature]) -> Vec<(String, T2)> {
    let mut base: Vec<(String, T2)> = vec![
        ("I".into(), T2::identity()),
        ("H".into(), T2::hadamard()),
        ("Z^-1".into(), T2::z_inv()),
        ("T_alpha".into(), T2::t_alpha()),
        ("diag(1,i)".into(), T2::t_k_d(1, 1)),
        ("diag(1,-1)".into(), T2::pauli_z()),
    ];
    for (idx, f) in set.iter().enumerate() {
        if f.arity() == 1 && f.is_real() && !f.is_zero() {
            base.push((
                format!("rot(u{idx})"),
                T2::rotation(f.get(0).clone(), f.get(1).clone()),
            ));
        }
        if f.arity() == 2 && f.is_real() && f.get(1) == f.get(2) && !f.is_zero() {
            if let Ok(rep) = interpolation_predicates(f, None) {
                if let Some([l1, _]) = rep.exact_eigenvalues {
                    // eigenvector (b, λ−a) of [[a,b],[b,c]]
                    let v0 = f.get(1).clone();
                    let v1 = &l1 - f.get(0);
                    if !(v0.is_zero() && v1.is_zero()) && v1.is_real() {
                        base.push((format!("eig(b{idx})"), T2::rotation(v0, v1)));
                    }
                }
            }
        }
    }
    let zi = T2::z_inv();
    let mut out = base.clone();
    for (name, t) in base.iter().skip(1) {
        out.push((format!("Z^-1·{name}"), zi.compose(t)));
    }
    out
}

/// Holant(F) for real F containing a nonzero odd-arity signature.
pub fn verdict_holant_odd(set: &[ExactSignature]) -> Result<DichotomyVerdict> {
    require_real(set)?;
    if !set.iter().any(|f| f.arity() % 2 == 1 && !f.is_zero()) {
        return Err(HolantError::Precondition(
            "set must contain a nonzero odd-arity signature".into(),
        ));
    }
    let problem = Problem::HolantOdd;
    let t = check_all("F ⊆ T", set, &in_t)?;
    if t.holds {
        return Ok(tractable(problem, "F ⊆ T", Some("I".into()), vec![t]));
    }
    let eq2: ExactSignature = equality(2);
    for (name, tr) in transform_catalog(set) {
        let Ok(inv) = tr.inverse() else { continue };
        // (=₂)(T⁻¹)^{⊗2} as a column vector is ((T⁻¹)ᵀ)^{⊗2}(=₂)
        let edge = holo(&eq2, &inv.transpose());
        let image = transformed(set, &tr);
        for (cname, test) in [("P", in_p as Test), ("A", in_a as Test), ("L", in_l as Test)] {
            if !test(&edge)?.member {
                continue;
            }
            let c = check_all(&format!("{name} F ⊆ {cname}"), &image, &test)?;
            if c.holds {
                return Ok(tractable(
                    problem,
                    &format!("F is {cname}-transformable"),
                    Some(name),
                    vec![c],
                ));
            }
        }
    }
    match entangle::odd_hardness(set)? {
        OddHardness::Hard { traces, handoff } => Ok(DichotomyVerdict {
            problem,
            outcome: Outcome::Hard,
            witness: Witness::Hard {
                failed: vec![t],
                traces,
                handoff: Some(Box::new(handoff)),
            },
        }),
        OddHardness::Unknown { reason } => Ok(DichotomyVerdict {
            problem,
            outcome: Outcome::Unknown,
            witness: Witness::Unknown {
                reason,
                catalog_version: CATALOG_VERSION.into(),
            },
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cyclo, imag_unit};
    use crate::signature::{exact, exact_i_powers};

    #[test]
    fn tensor_classes() {
        assert!(!in_t(&equality(3)).unwrap().member);
        let f = crate::gadget::tensor(
            &crate::gadget::tensor(&equality(2), &equality(2)).unwrap(),
            &exact(1, &[1, 7]),
        )
        .unwrap();
        assert!(in_t(&f).unwrap().member);
        assert!(!in_t1(&equality(2)).unwrap().member);
    }

    #[test]
    fn product_type() {
        assert!(in_p(&neq2()).unwrap().member);
        assert!(in_p(&equality(3)).unwrap().member);
        assert!(!in_p(&exact(2, &[1, 1, 1, -1])).unwrap().member);
    }

    #[test]
    fn affine() {
        let m = in_a(&equality(3)).unwrap();
        assert!(m.member);
        let f = exact_i_powers(2, &[Some(0), Some(1), Some(1), Some(0)]).unwrap();
        let m = in_a(&f).unwrap();
        let Certificate::Affine(c) = &m.certificate else { panic!() };
        assert_eq!(c.q_string(), "x1 + x2 + 2x1x2");
        assert_eq!(c.evaluate(), f);
        let g = exact_i_powers(2, &[Some(0), Some(0), Some(0), Some(1)]).unwrap();
        assert!(!in_a(&g).unwrap().member);
    }

    #[test]
    fn local_affine() {
        assert!(!in_l(&neq2()).unwrap().member);
        assert!(in_l(&equality(2)).unwrap().member);
        assert!(in_l(&ExactSignature::zero(2).unwrap()).unwrap().member);
    }

    #[test]
    fn akd() {
        for d in 1..=3 {
            assert!(in_akd(&equality(3), 3, d).unwrap().member);
            assert!(in_akd(&neq2(), 3, d).unwrap().member);
            let f = Signature::new(
                2,
                vec![CycloScalar::one(), CycloScalar::one(), CycloScalar::one(), cyclo(12, 1)],
            )
            .unwrap();
            assert!(!in_akd(&f, 3, d).unwrap().member);
        }
        assert!(in_akd(&equality(3), 3, 4).is_err());
    }

    #[test]
    fn orthogonality() {
        assert_eq!(first_order_orthogonality(&equality::<CycloScalar>(2)).unwrap(), Some(CycloScalar::one()));
        assert_eq!(first_order_orthogonality(&equality::<CycloScalar>(5)).unwrap(), Some(CycloScalar::one()));
        assert_eq!(
            first_order_orthogonality(&exact(2, &[1, 1, 1, -1])).unwrap(),
            Some(CycloScalar::from_i64(2))
        );
        assert!(first_order_orthogonality(&exact(1, &[1, 0])).is_err());
    }

    #[test]
    fn monotone() {
        let (g, flips) = monotone_normal_form(&neq2()).unwrap();
        assert_eq!(flips, vec![2]);
        assert_eq!(g, equality(2));
        let (h, again) = monotone_normal_form(&g).unwrap();
        assert!(again.is_empty());
        assert_eq!(h, g);
    }

    #[test]
    fn verdicts() {
        let v = verdict_csp(&[equality(3), neq2()]).unwrap();
        assert_eq!(v.outcome, Outcome::Tractable);
        let v = verdict_csp(&[exact(2, &[1, 1, 1, -1])]).unwrap();
        assert_eq!(v.outcome, Outcome::Tractable);
        let f = Signature::new(2, vec![CycloScalar::one(), CycloScalar::one(), CycloScalar::one(), imag_unit()]).unwrap();
        assert_eq!(verdict_csp(&[f]).unwrap().outcome, Outcome::Hard);
        assert_eq!(verdict_cspk(&[equality(5)], 3).unwrap().outcome, Outcome::Tractable);
        assert_eq!(verdict_csp2(&[neq2()]).unwrap().outcome, Outcome::Tractable);
        assert_eq!(verdict_holantc(&[equality(2)]).unwrap().outcome, Outcome::Tractable);
        assert_eq!(verdict_holantc(&[equality(3)]).unwrap().outcome, Outcome::Tractable);
        let g = exact(3, &[3, 1, 4, 1, 5, 9, 2, 6]);
        assert_eq!(verdict_holantc(&[g]).unwrap().outcome, Outcome::Hard);
    }

    #[test]
    fn odd_verdicts() {
        let v = verdict_holant_odd(&[exact(1, &[1, 1]), equality(2)]).unwrap();
        assert_eq!(v.outcome, Outcome::Tractable);
        let v = verdict_holant_odd(&[exact(3, &[1, 0, 0, 0, 0, 0, 0, -1])]).unwrap();
        assert_eq!(v.outcome, Outcome::Tractable);
    }
}
