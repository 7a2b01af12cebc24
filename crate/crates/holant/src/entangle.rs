//! Entanglement analysis, Bell properties and the gadget reduction engine.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::classify::{
    first_order_orthogonality, is_t, verdict_csp, verdict_csp2, verdict_cspk, verdict_holantc,
    DichotomyVerdict, Outcome,
};
use crate::error::{HolantError, Result};
use crate::factor::{is_reducible_across, upf};
use crate::gadget::{connect, holo, mate, permute, pin, self_loop, Transform2x2};
use crate::scalar::{cyclo, CycloScalar, Scalar};
use crate::signature::{delta0, delta1, equality, neq2, Bell, ExactSignature, Signature};

type T2 = Transform2x2<CycloScalar>;

// ---------------------------------------------------------------------------
// Entanglement reports

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntanglementReport {
    pub arity: usize,
    pub entangled: bool,
    pub genuinely_entangled: bool,
    pub multipartite: bool,
    pub factor_scopes: Vec<Vec<usize>>,
}

pub fn analyze<S: Scalar>(f: &Signature<S>) -> Result<EntanglementReport> {
    let fac = upf(f)?;
    let n = f.arity();
    let max = fac.arities().into_iter().max().unwrap_or(0);
    Ok(EntanglementReport {
        arity: n,
        entangled: n > 1 && max >= 2,
        genuinely_entangled: n > 1 && fac.is_irreducible(),
        multipartite: max >= 3,
        factor_scopes: fac.factors.iter().map(|x| x.scope.clone()).collect(),
    })
}

/// First (i, c) in lexicographic order with f_i^c ∉ 𝒯.
pub fn find_preserving_pin<S: Scalar>(f: &Signature<S>) -> Result<Option<(usize, u8)>> {
    if f.arity() < 4 {
        return Err(HolantError::Precondition("arity must be at least 4".into()));
    }
    for i in 1..=f.arity() {
        for c in 0..=1u8 {
            if !is_t(&pin(f, i, c)?) {
                return Ok(Some((i, c)));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Bell states

pub fn bell_project<S: Scalar>(psi: &Signature<S>, i: usize, j: usize, which: Bell) -> Result<Signature<S>> {
    if psi.arity() < 3 {
        return Err(HolantError::Precondition("arity must be at least 3".into()));
    }
    self_loop(psi, i, j, &which.signature())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellPair {
    /// Variables of Ψ the factor acts on.
    pub vars: Vec<usize>,
    pub bell: Option<Bell>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellCase {
    pub i: usize,
    pub j: usize,
    pub bell: Bell,
    pub zero: bool,
    pub decomposition: Vec<BellPair>,
    pub scalar: Option<CycloScalar>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellReport {
    pub strong: bool,
    pub holds: bool,
    pub cases: Vec<BellCase>,
    /// Common scalar of the nonzero projections per Bell state, when constant.
    pub scalars: BTreeMap<String, Option<CycloScalar>>,
}

pub fn check_bell_property(psi: &ExactSignature, strong: bool) -> Result<BellReport> {
    let n = psi.arity();
    if n % 2 == 1 || n < 4 {
        return Err(HolantError::Precondition("arity must be even and at least 4".into()));
    }
    if psi.is_zero() || !upf(psi)?.is_irreducible() {
        return Err(HolantError::Precondition("state is not genuinely entangled".into()));
    }
    let bells: Vec<(Bell, ExactSignature)> = Bell::ALL.iter().map(|&b| (b, b.signature())).collect();
    let mut cases = Vec::new();
    let mut per_bell: BTreeMap<String, Vec<CycloScalar>> = BTreeMap::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let rest: Vec<usize> = (1..=n).filter(|&v| v != i && v != j).collect();
            for &(b, ref bs) in &bells {
                let p = self_loop(psi, i, j, bs)?;
                if p.is_zero() {
                    cases.push(BellCase {
                        i,
                        j,
                        bell: b,
                        zero: true,
                        decomposition: Vec::new(),
                        scalar: None,
                        ok: true,
                    });
                    continue;
                }
                let fac = upf(&p)?;
                let decomposition: Vec<BellPair> = fac
                    .factors
                    .iter()
                    .map(|x| BellPair {
                        vars: x.scope.iter().map(|&v| rest[v - 1]).collect(),
                        bell: (x.signature.arity() == 2)
                            .then(|| bells.iter().find(|(_, s)| *s == x.signature).map(|(k, _)| *k))
                            .flatten(),
                    })
                    .collect();
                let ok = decomposition
                    .iter()
                    .all(|d| d.bell.is_some() && (!strong || d.bell == Some(b)));
                per_bell
                    .entry(b.name().to_string())
                    .or_default()
                    .push(fac.global_scalar.clone());
                cases.push(BellCase {
                    i,
                    j,
                    bell: b,
                    zero: false,
                    decomposition,
                    scalar: Some(fac.global_scalar),
                    ok,
                });
            }
        }
    }
    let scalars = per_bell
        .into_iter()
        .map(|(k, v)| {
            let first = v[0].clone();
            let constant = v.iter().all(|s| *s == first).then_some(first);
            (k, constant)
        })
        .collect();
    Ok(BellReport {
        strong,
        holds: cases.iter().all(|c| c.ok),
        cases,
        scalars,
    })
}

/// Images of Ψ under all 4ⁿ Pauli tensors.
pub fn pauli_orbit(psi: &ExactSignature, dedupe_scalar: bool) -> Result<Vec<ExactSignature>> {
    let n = psi.arity();
    if n > 8 {
        return Err(HolantError::CapExceeded("Pauli orbit is limited to arity 8".into()));
    }
    let support = psi.support();
    let phases: Vec<CycloScalar> = (0..4).map(|k| CycloScalar::one().mul_i_pow(k)).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut ops = vec![0u8; n];
    for code in 0..1usize << (2 * n) {
        for (k, op) in ops.iter_mut().enumerate() {
            *op = ((code >> (2 * k)) & 3) as u8;
        }
        // 0 = I, 1 = X, 2 = Y, 3 = Z; flip mask on X and Y sites
        let mut flip = 0usize;
        for (k, &op) in ops.iter().enumerate() {
            if op == 1 || op == 2 {
                flip |= 1 << (n - 1 - k);
            }
        }
        let mut values = vec![CycloScalar::zero(); 1 << n];
        for &x in &support {
            let y = x ^ flip;
            let mut e = 0usize;
            for (k, &op) in ops.iter().enumerate() {
                let yk = (y >> (n - 1 - k)) & 1;
                match op {
                    2 => e += if yk == 1 { 1 } else { 3 },
                    3 => e += 2 * yk,
                    _ => {}
                }
            }
            values[y] = psi.get(x).times(&phases[e % 4]);
        }
        let mut g = Signature::new(n, values)?;
        if dedupe_scalar {
            g = g.normalized()?.1;
        }
        if seen.insert(g.exact_key()) {
            out.push(g);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Reduction traces

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Step {
    Pin { var: usize, bit: u8 },
    SelfLoop { i: usize, j: usize, bell: Bell },
    Mate { dangling: Vec<usize> },
    /// Connects `left[k]` of one copy with `right[k]` of another copy.
    JoinCopies { left: Vec<usize>, right: Vec<usize> },
    Holo { label: String, transform: T2 },
    Permute { order: Vec<usize> },
    FactorExtract { index: usize },
    ConnectUnary { var: usize, unary: ExactSignature, edge: Bell },
    /// Builds a second signature from a copy of the current one and connects it.
    Compose { var: usize, derived: Vec<Step>, other_var: usize, edge: Bell },
    Scale { factor: CycloScalar },
    /// Interpolates Δ₁ from the current binary signature.
    Interpolate { lemma: String },
    Cite { lemma: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Terminal {
    Delta0,
    Delta1,
    Eq3,
    Eq4,
    Ghz4,
    TernaryNonT,
    HatEquality { arity: usize, normalized: bool },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub input: ExactSignature,
    pub steps: Vec<Step>,
    pub terminal: Terminal,
    pub terminal_signature: ExactSignature,
    /// Replay result = scalar · terminal_signature.
    pub scalar: CycloScalar,
    /// Product of the holographic transforms applied, latest first.
    pub transform: T2,
}

impl ReductionTrace {
    pub fn replay(&self) -> Result<ExactSignature> {
        replay(&self.input, &self.steps)
    }

    /// Replays the steps and checks the declared terminal.
    pub fn validate(&self) -> Result<()> {
        let out = self.replay()?;
        if out != self.terminal_signature.scale(&self.scalar) {
            return Err(HolantError::Anomaly("replay does not reproduce the terminal".into()));
        }
        let expected = match &self.terminal {
            Terminal::Delta0 => Some(delta0()),
            Terminal::Delta1 => Some(delta1()),
            Terminal::Eq3 => Some(equality(3)),
            Terminal::Eq4 | Terminal::Ghz4 => Some(equality(4)),
            Terminal::HatEquality { arity, normalized: true } => Some(equality(*arity)),
            Terminal::TernaryNonT => {
                if self.terminal_signature.arity() != 3 || is_t(&self.terminal_signature) {
                    return Err(HolantError::Anomaly("terminal is not a ternary outside T".into()));
                }
                None
            }
            Terminal::HatEquality { .. } => None,
        };
        if let Some(e) = expected {
            if e != self.terminal_signature {
                return Err(HolantError::Anomaly("terminal signature mismatch".into()));
            }
        }
        Ok(())
    }
}

fn edge_sig(b: Bell) -> Option<ExactSignature> {
    (b != Bell::PhiPlus).then(|| b.signature())
}

pub fn replay(input: &ExactSignature, steps: &[Step]) -> Result<ExactSignature> {
    steps.iter().try_fold(input.clone(), |cur, s| apply(&cur, s))
}

fn apply(cur: &ExactSignature, step: &Step) -> Result<ExactSignature> {
    match step {
        Step::Pin { var, bit } => pin(cur, *var, *bit),
        Step::SelfLoop { i, j, bell } => self_loop(cur, *i, *j, &bell.signature()),
        Step::Mate { dangling } => Ok(mate(cur, dangling)?.signature),
        Step::JoinCopies { left, right } => {
            let pairs: Vec<(usize, usize)> = left.iter().copied().zip(right.iter().copied()).collect();
            connect(cur, cur, &pairs, None)
        }
        Step::Holo { transform, .. } => Ok(holo(cur, transform)),
        Step::Permute { order } => permute(cur, order),
        Step::FactorExtract { index } => upf(cur)?
            .factors
            .get(*index)
            .map(|f| f.signature.clone())
            .ok_or_else(|| HolantError::Anomaly("factor index out of range".into())),
        Step::ConnectUnary { var, unary, edge } => {
            connect(cur, unary, &[(*var, 1)], edge_sig(*edge).as_ref())
        }
        Step::Compose { var, derived, other_var, edge } => {
            let other = replay(cur, derived)?;
            connect(cur, &other, &[(*var, *other_var)], edge_sig(*edge).as_ref())
        }
        Step::Scale { factor } => Ok(cur.scale(factor)),
        Step::Interpolate { .. } => {
            if !interpolation_applies(cur)? {
                return Err(HolantError::Anomaly("interpolation hypotheses fail".into()));
            }
            Ok(delta1())
        }
        Step::Cite { .. } => Ok(cur.clone()),
    }
}

/// Hypotheses for realizing Δ₁ from the binary [[a,b],[b',c]] together with Δ₀.
fn interpolation_applies(g: &ExactSignature) -> Result<bool> {
    if g.arity() != 2 || g.is_zero() {
        return Ok(false);
    }
    let rep = crate::gadget::interpolation_predicates(g, Some(&delta0()))?;
    if rep.degenerate || !rep.eig_ratio_off_unit_circle {
        return Ok(false);
    }
    let diagonal = g.get(1).is_zero() && g.get(2).is_zero();
    Ok(diagonal || rep.h_not_eigenvector == Some(true))
}

struct Tracer {
    input: ExactSignature,
    cur: ExactSignature,
    steps: Vec<Step>,
    transform: T2,
}

impl Tracer {
    fn new(f: &ExactSignature) -> Self {
        Tracer {
            input: f.clone(),
            cur: f.clone(),
            steps: Vec::new(),
            transform: T2::identity(),
        }
    }

    fn push(&mut self, step: Step) -> Result<()> {
        self.cur = apply(&self.cur, &step)?;
        if let Step::Holo { transform, .. } = &step {
            self.transform = transform.compose(&self.transform);
        }
        self.steps.push(step);
        Ok(())
    }

    fn push_all(&mut self, steps: Vec<Step>) -> Result<()> {
        steps.into_iter().try_for_each(|s| self.push(s))
    }

    fn finish(self, terminal: Terminal, sig: ExactSignature) -> Result<ReductionTrace> {
        let scalar = self
            .cur
            .ratio_to(&sig)
            .ok_or_else(|| HolantError::Anomaly(format!("current signature is not a multiple of {terminal:?}")))?;
        let t = ReductionTrace {
            input: self.input,
            steps: self.steps,
            terminal,
            terminal_signature: sig,
            scalar,
            transform: self.transform,
        };
        debug_assert!(t.validate().is_ok());
        Ok(t)
    }

    /// Pins to 0 while the result stays nonzero; needs cur(0) = 0.
    fn by_pin(mut self) -> Result<ReductionTrace> {
        while self.cur.arity() > 1 {
            let n = self.cur.arity();
            let mut moved = false;
            for i in 1..=n {
                if !pin(&self.cur, i, 0)?.is_zero() {
                    self.push(Step::Pin { var: i, bit: 0 })?;
                    moved = true;
                    break;
                }
            }
            if !moved {
                // support is {1ⁿ}
                self.push(Step::FactorExtract { index: 0 })?;
            }
        }
        self.finish(Terminal::Delta1, delta1())
    }

    fn interpolate(mut self, i: usize) -> Result<ReductionTrace> {
        self.push(Step::Mate { dangling: vec![i] })?;
        let diagonal = self.cur.get(1).is_zero();
        let lemma = if diagonal { "2by2-interpolation" } else { "unary-interpolation" };
        self.push(Step::Interpolate { lemma: lemma.into() })?;
        self.finish(Terminal::Delta1, delta1())
    }
}

fn mu_identity(m: &ExactSignature) -> bool {
    m.get(1).is_zero() && m.get(2).is_zero() && m.get(0) == m.get(3)
}

/// A variable i with m_i f ≠ μI and no unary divisor on x_i.
fn inter_variable(f: &ExactSignature) -> Result<Option<usize>> {
    if f.arity() < 2 || f.is_zero() {
        return Ok(None);
    }
    for i in 1..=f.arity() {
        let m = mate(f, &[i])?.signature;
        if !mu_identity(&m) && !is_reducible_across(f, &[i])? && interpolation_applies(&m)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Signatures reachable by one pin to 0 or one =₂ self-loop.
fn one_step_gadgets(f: &ExactSignature) -> Result<Vec<(Step, ExactSignature)>> {
    let n = f.arity();
    let mut out = Vec::new();
    for i in 1..=n {
        out.push((Step::Pin { var: i, bit: 0 }, pin(f, i, 0)?));
    }
    if n >= 3 {
        for i in 1..=n {
            for j in i + 1..=n {
                out.push((Step::SelfLoop { i, j, bell: Bell::PhiPlus }, self_loop(f, i, j, &equality(2))?));
            }
        }
    }
    Ok(out)
}

/// Searches gadgets of depth ≤ `depth` for a Δ₁ route (zero origin or failed orthogonality).
fn delta1_route(f: &ExactSignature, depth: usize, zero_origin_only: bool) -> Result<Option<(Vec<Step>, Option<usize>)>> {
    let mut frontier = vec![(Vec::new(), f.clone())];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (path, g) in &frontier {
            if g.arity() < 2 {
                continue;
            }
            for (s, h) in one_step_gadgets(g)? {
                if h.is_zero() {
                    continue;
                }
                let mut p = path.clone();
                p.push(s);
                if h.get(0).is_zero() {
                    return Ok(Some((p, None)));
                }
                if !zero_origin_only {
                    if let Some(i) = inter_variable(&h)? {
                        return Ok(Some((p, Some(i))));
                    }
                }
                next.push((p, h));
            }
        }
        frontier = next;
    }
    Ok(None)
}

fn require_real(f: &ExactSignature) -> Result<()> {
    if f.is_real() {
        Ok(())
    } else {
        Err(HolantError::Precondition("signature must be real".into()))
    }
}

/// Inductive search from f ∉ 𝒯 down to Δ₁, =₄, GHZ₄ or a ternary outside 𝒯.
/// Uses only f and Δ₀: pins go to 0 and self-loops use =₂.
pub fn reduce_to_base(f: &ExactSignature) -> Result<ReductionTrace> {
    require_real(f)?;
    if f.arity() < 3 || is_t(f) {
        return Err(HolantError::Precondition("need arity ≥ 3 and f ∉ T".into()));
    }
    let mut t = Tracer::new(f);
    'outer: loop {
        let cur = t.cur.clone();
        let n = cur.arity();
        if n == 3 {
            return t.finish(Terminal::TernaryNonT, cur);
        }
        let eq4: ExactSignature = equality(4);
        if n == 4 && cur.proportional(&eq4) {
            let last_mate = matches!(t.steps.last(), Some(Step::Mate { .. }));
            let term = if last_mate { Terminal::Eq4 } else { Terminal::Ghz4 };
            return t.finish(term, eq4);
        }
        if cur.get(0).is_zero() {
            return t.by_pin();
        }
        for (s, g) in one_step_gadgets(&cur)? {
            if g.arity() >= 3 && !is_t(&g) {
                t.push(s)?;
                continue 'outer;
            }
        }
        let fac = upf(&cur)?;
        if !fac.is_irreducible() {
            let index = fac
                .factors
                .iter()
                .position(|x| x.signature.arity() >= 3)
                .ok_or_else(|| HolantError::Anomaly("reducible signature outside T without a large factor".into()))?;
            t.push(Step::FactorExtract { index })?;
            continue;
        }
        if let Some(i) = inter_variable(&cur)? {
            return t.interpolate(i);
        }
        if let Some((path, _)) = delta1_route(&cur, 1, true)? {
            t.push_all(path)?;
            return t.by_pin();
        }
        if n == 4 {
            if let Some(step) = unary_contraction(&cur)? {
                t.push(step)?;
                continue;
            }
            for a in 1..=4 {
                for b in a + 1..=4 {
                    let m = mate(&cur, &[a, b])?.signature;
                    if m.proportional(&eq4) {
                        t.push(Step::Mate { dangling: vec![a, b] })?;
                        continue 'outer;
                    }
                }
            }
        }
        if let Some((path, inter)) = delta1_route(&cur, 2, false)? {
            t.push_all(path)?;
            return match inter {
                Some(i) => t.interpolate(i),
                None => t.by_pin(),
            };
        }
        return Err(HolantError::Anomaly(format!(
            "reduction search exhausted at arity {n}: {:?}",
            cur.values()
        )));
    }
}

/// Contracts into variable v the unary obtained by pinning the other three variables to 0.
fn unary_contraction(f: &ExactSignature) -> Result<Option<Step>> {
    for v in 1..=4usize {
        let mut derived: Vec<Step> = (1..=4)
            .rev()
            .filter(|&w| w != v)
            .map(|w| Step::Pin { var: w, bit: 0 })
            .collect();
        let u = replay(f, &derived)?;
        if u.is_zero() || u.proportional(&delta0()) {
            continue;
        }
        let g = connect(f, &u, &[(v, 1)], None)?;
        if !is_t(&g) {
            derived.shrink_to_fit();
            return Ok(Some(Step::Compose {
                var: v,
                derived,
                other_var: 1,
                edge: Bell::PhiPlus,
            }));
        }
    }
    Ok(None)
}

/// Ternary base case: =₃, =₄ by mating, Hadamard-=₄, or hat-side =₃.
pub fn base_case_analysis(f: &ExactSignature) -> Result<ReductionTrace> {
    require_real(f)?;
    if f.arity() != 3 || f.is_zero() || !upf(f)?.is_irreducible() {
        return Err(HolantError::Precondition("need an irreducible ternary signature".into()));
    }
    let mut t = Tracer::new(f);
    if f.get(0).is_zero() {
        return t.by_pin();
    }
    if first_order_orthogonality(f)?.is_none() {
        if let Some(i) = inter_variable(f)? {
            return t.interpolate(i);
        }
    }
    let f0 = f.get(0).inv()?;
    if !f0.is_one() {
        t.push(Step::Scale { factor: f0 })?;
    }
    let mut orth = Vec::new();
    let mut red = Vec::new();
    for i in 1..=3 {
        let g = pin(&t.cur, i, 0)?;
        if first_order_orthogonality(&g)?.is_some() {
            orth.push(i);
        } else if upf(&g)?.is_irreducible() {
            t.push(Step::Pin { var: i, bit: 0 })?;
            return t.interpolate(1);
        } else {
            red.push(i);
        }
    }
    let eq3: ExactSignature = equality(3);
    let eq4: ExactSignature = equality(4);
    match orth.len() {
        0 => {
            if t.cur == eq3 {
                return t.finish(Terminal::Eq3, eq3);
            }
            let q = T2::from_ints(1, 0, 0, -1);
            if holo(&t.cur, &q) == eq3 {
                t.push(Step::Holo { label: "diag(1,-1)".into(), transform: q })?;
                return t.finish(Terminal::Eq3, eq3);
            }
        }
        1 => {
            t.push(Step::Permute { order: vec![orth[0], red[0], red[1]] })?;
            t.push(Step::Mate { dangling: vec![2, 3] })?;
            if t.cur.proportional(&eq4) {
                return t.finish(Terminal::Eq4, eq4);
            }
        }
        2 => {
            t.push(Step::Permute { order: vec![red[0], orth[0], orth[1]] })?;
            t.push(Step::Mate { dangling: vec![2, 3] })?;
            if let Some(s) = hadamard_to_eq4(&t.cur) {
                t.push(s)?;
                return t.finish(Terminal::Eq4, eq4);
            }
            t.push(Step::Permute { order: vec![1, 3, 2, 4] })?;
            t.push(Step::JoinCopies { left: vec![3, 4], right: vec![1, 2] })?;
            if let Some(s) = hadamard_to_eq4(&t.cur) {
                t.push(s)?;
                return t.finish(Terminal::Eq4, eq4);
            }
        }
        _ => {
            t.push(Step::Holo { label: "Z^-1".into(), transform: T2::z_inv() })?;
            if !generalized_equality(&t.cur) {
                let step = hat_equality_gadget(&t.cur)?
                    .ok_or_else(|| HolantError::Anomaly("no hat-side generalized equality found".into()))?;
                t.push(step)?;
            }
            return normalize_hat(t);
        }
    }
    Err(HolantError::Anomaly(format!(
        "ternary signature outside the base-case families (N = {}): {:?}",
        orth.len(),
        f.values()
    )))
}

fn hadamard_to_eq4(m: &ExactSignature) -> Option<Step> {
    let eq4: ExactSignature = equality(4);
    [("H'", T2::hadamard_rotation()), ("H", T2::hadamard())]
        .into_iter()
        .find(|(_, h)| holo(m, h).proportional(&eq4))
        .map(|(label, transform)| Step::Holo { label: label.into(), transform })
}

fn generalized_equality(f: &ExactSignature) -> bool {
    let last = (1usize << f.arity()) - 1;
    !f.get(0).is_zero() && !f.get(last).is_zero() && f.support().iter().all(|&s| s == 0 || s == last)
}

/// ĝ = f̂ joined to Δ̂₀ on v; ĥ = f̂ joined to ĝ on (w, t); all edges ≠₂.
fn hat_equality_gadget(fh: &ExactSignature) -> Result<Option<Step>> {
    let d0h = holo(&delta0(), &T2::z_inv());
    let ne = neq2();
    for v in 1..=3 {
        let g = connect(fh, &d0h, &[(v, 1)], Some(&ne))?;
        if g.is_zero() {
            continue;
        }
        for w in 1..=3 {
            for o in 1..=2 {
                let h = connect(fh, &g, &[(w, o)], Some(&ne))?;
                if generalized_equality(&h) {
                    return Ok(Some(Step::Compose {
                        var: w,
                        derived: vec![Step::ConnectUnary { var: v, unary: d0h.clone(), edge: Bell::PsiPlus }],
                        other_var: o,
                        edge: Bell::PsiPlus,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Applies diag(1, t) with tⁿ = u/v to u·e₀ + v·e₁ when u/v is a root of unity.
fn normalize_hat(mut t: Tracer) -> Result<ReductionTrace> {
    let n = t.cur.arity();
    let last = (1usize << n) - 1;
    let u = t.cur.get(0).clone();
    let v = t.cur.get(last).clone();
    let r = u.div(&v)?;
    match r.root_of_unity_exponent() {
        Some(e) => {
            let tt = cyclo(r.order() * n as u32, e as i64);
            if !tt.is_one() {
                t.push(Step::Holo {
                    label: "diag(1,t)".into(),
                    transform: T2::diag(CycloScalar::one(), tt),
                })?;
            }
            t.finish(Terminal::HatEquality { arity: n, normalized: true }, equality(n))
        }
        None => {
            let sig = t.cur.clone();
            t.finish(Terminal::HatEquality { arity: n, normalized: false }, sig)
        }
    }
}

/// Odd arity: self-loops down to a unary then rotate to Δ₀, or hat-side =ₙ.
pub fn odd_arity_normalize(f: &ExactSignature) -> Result<ReductionTrace> {
    require_real(f)?;
    if f.arity() % 2 == 0 || f.is_zero() {
        return Err(HolantError::Precondition("need a nonzero odd-arity signature".into()));
    }
    let mut t = Tracer::new(f);
    'outer: while t.cur.arity() >= 3 {
        let n = t.cur.arity();
        for i in 1..=n {
            for j in i + 1..=n {
                if !self_loop(&t.cur, i, j, &equality(2))?.is_zero() {
                    t.push(Step::SelfLoop { i, j, bell: Bell::PhiPlus })?;
                    continue 'outer;
                }
            }
        }
        t.push(Step::Holo { label: "Z^-1".into(), transform: T2::z_inv() })?;
        if !generalized_equality(&t.cur) {
            return Err(HolantError::Anomaly("vanishing self-loops without a hat-side equality".into()));
        }
        return normalize_hat(t);
    }
    let q = T2::rotation(t.cur.get(0).clone(), t.cur.get(1).clone());
    t.push(Step::Holo { label: "rotation".into(), transform: q })?;
    t.finish(Terminal::Delta0, delta0())
}

// ---------------------------------------------------------------------------
// Hardness side of the odd-arity dichotomy

pub enum OddHardness {
    Hard {
        traces: Vec<ReductionTrace>,
        handoff: DichotomyVerdict,
    },
    Unknown {
        reason: String,
    },
}

fn image(set: &[ExactSignature], t: &T2) -> Vec<ExactSignature> {
    set.iter().map(|f| holo(f, t)).collect()
}

/// Runs the reduction pipeline and hands off to a decidable counting CSP.
pub fn odd_hardness(set: &[ExactSignature]) -> Result<OddHardness> {
    let f = set
        .iter()
        .find(|f| f.arity() % 2 == 1 && !f.is_zero())
        .ok_or_else(|| HolantError::Precondition("no nonzero odd-arity signature".into()))?;
    let tr1 = odd_arity_normalize(f)?;
    let mut traces = vec![tr1.clone()];
    let handoff = match tr1.terminal {
        Terminal::HatEquality { arity, normalized: true } => verdict_cspk(&image(set, &tr1.transform), arity as u32)?,
        Terminal::Delta0 => {
            let qf = image(set, &tr1.transform);
            let Some(g) = qf.iter().find(|g| g.arity() >= 3 && !is_t(*g)) else {
                return Ok(OddHardness::Unknown {
                    reason: "every transformed signature of arity ≥ 3 lies in T".into(),
                });
            };
            let tr2 = reduce_to_base(g)?;
            traces.push(tr2.clone());
            match tr2.terminal {
                Terminal::Delta1 => verdict_holantc(&qf)?,
                Terminal::Eq4 | Terminal::Ghz4 => verdict_csp2(&image(&qf, &tr2.transform))?,
                Terminal::TernaryNonT => {
                    let tr3 = base_case_analysis(&tr2.terminal_signature)?;
                    traces.push(tr3.clone());
                    match tr3.terminal {
                        Terminal::Delta1 => verdict_holantc(&qf)?,
                        Terminal::Eq3 => verdict_csp(&image(&qf, &tr3.transform))?,
                        Terminal::Eq4 => verdict_csp2(&image(&qf, &tr3.transform))?,
                        Terminal::HatEquality { arity, normalized: true } => {
                            let mut with_d0 = qf.clone();
                            with_d0.push(delta0());
                            verdict_cspk(&image(&with_d0, &tr3.transform), arity as u32)?
                        }
                        other => {
                            return Ok(OddHardness::Unknown {
                                reason: format!("base case ended in {other:?} without an exact normalization"),
                            })
                        }
                    }
                }
                other => {
                    return Ok(OddHardness::Unknown {
                        reason: format!("unexpected reduction terminal {other:?}"),
                    })
                }
            }
        }
        other => {
            return Ok(OddHardness::Unknown {
                reason: format!("odd-arity normalization ended in {other:?} without an exact diagonal"),
            })
        }
    };
    if handoff.outcome == Outcome::Hard {
        Ok(OddHardness::Hard { traces, handoff })
    } else {
        Ok(OddHardness::Unknown {
            reason: format!("handoff {:?} is not hard", handoff.problem),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::tensor;
    use crate::signature::{builtin, exact};

    #[test]
    fn reports() {
        let r = analyze(&tensor(&delta0::<CycloScalar>(), &delta1()).unwrap()).unwrap();
        assert!(!r.entangled);
        let e2: ExactSignature = equality(2);
        let r = analyze(&tensor(&e2, &e2).unwrap()).unwrap();
        assert!(r.entangled && !r.multipartite && !r.genuinely_entangled);
        let r = analyze(&builtin::<CycloScalar>("psi6").unwrap()).unwrap();
        assert!(r.genuinely_entangled && r.multipartite);
    }

    #[test]
    fn preserving_pin() {
        let f = exact(4, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1]);
        assert_eq!(find_preserving_pin(&f).unwrap(), None);
        assert_eq!(find_preserving_pin(&equality::<CycloScalar>(5)).unwrap(), None);
        let g = exact(4, &[1, 0, 0, 1, 0, 1, 1, 0, 0, 1, 1, 0, 1, 0, 0, 2]);
        assert!(find_preserving_pin(&g).unwrap().is_some());
    }

    #[test]
    fn bell_projection() {
        let g4: ExactSignature = equality(4);
        assert_eq!(bell_project(&g4, 1, 2, Bell::PhiPlus).unwrap(), Bell::PhiPlus.signature());
        assert!(bell_project(&g4, 1, 2, Bell::PsiPlus).unwrap().is_zero());
        let r = check_bell_property(&equality(6), false).unwrap();
        assert!(!r.holds);
        assert!(check_bell_property(&equality(5), false).is_err());
    }

    #[test]
    fn orbit() {
        let e2: ExactSignature = equality(2);
        let orbit = pauli_orbit(&e2, true).unwrap();
        assert!(orbit.contains(&e2));
        assert_eq!(orbit.len(), 4);
    }

    #[test]
    fn ghz5_reduces_by_self_loop() {
        let t = reduce_to_base(&equality(5)).unwrap();
        t.validate().unwrap();
        assert!(matches!(t.steps[0], Step::SelfLoop { .. }));
        assert_eq!(t.terminal, Terminal::TernaryNonT);
        assert_eq!(t.terminal_signature, equality(3));
    }

    #[test]
    fn odd_normalization() {
        let t = odd_arity_normalize(&exact(1, &[3, 4])).unwrap();
        assert_eq!(t.terminal, Terminal::Delta0);
        assert_eq!(t.scalar, CycloScalar::from_i64(25));
        let t = odd_arity_normalize(&equality(5)).unwrap();
        assert_eq!(t.terminal, Terminal::Delta0);
        assert_eq!(t.steps.len(), 3);
        let fh: ExactSignature = equality(5);
        let f = holo(&fh, &T2::z());
        assert!(f.is_real());
        let t = odd_arity_normalize(&f).unwrap();
        assert_eq!(t.terminal, Terminal::HatEquality { arity: 5, normalized: true });
        t.validate().unwrap();
    }

    #[test]
    fn base_cases() {
        let t = base_case_analysis(&equality(3)).unwrap();
        assert_eq!(t.terminal, Terminal::Eq3);
        let t = base_case_analysis(&exact(3, &[1, 0, 0, 0, 0, 0, 0, -1])).unwrap();
        assert_eq!(t.terminal, Terminal::Eq3);
        t.validate().unwrap();
    }
}
