//! Gadget calculus: pinning, self-loops, mating, tensor products,
//! permutations and holographic transformations.

use serde::{Deserialize, Serialize};

use crate::error::{HolantError, Result};
use crate::scalar::{cyclo, exact_sqrt_rational, imag_unit, inv_sqrt2, CycloScalar, FloatScalar, Scalar};
use crate::signature::{bit, check_vars, equality, Signature};

/// A 2×2 matrix [[a, b], [c, d]].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transform2x2<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

/// Derived properties of a transform; recomputed on every call.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformFlags {
    pub invertible: bool,
    pub real: bool,
    pub orthogonal_up_to_scalar: bool,
    pub diagonal: bool,
    pub anti_diagonal: bool,
}

impl<S: Scalar> Transform2x2<S> {
    pub fn new(a: S, b: S, c: S, d: S) -> Self {
        Transform2x2 { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(S::from_i64(a), S::from_i64(b), S::from_i64(c), S::from_i64(d))
    }

    pub fn from_exact(t: &Transform2x2<CycloScalar>) -> Self {
        Self::new(
            S::from_cyclo(&t.a),
            S::from_cyclo(&t.b),
            S::from_cyclo(&t.c),
            S::from_cyclo(&t.d),
        )
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    pub fn diag(x: S, y: S) -> Self {
        Self::new(x, S::zero(), S::zero(), y)
    }

    /// [[a, b], [−b, a]].
    pub fn rotation(a: S, b: S) -> Self {
        let nb = b.negated();
        Self::new(a.clone(), b, nb, a)
    }

    /// Z⁻¹ = (1/√2)[[1, −𝔦], [1, 𝔦]].
    pub fn z_inv() -> Self {
        let s = inv_sqrt2();
        let i = imag_unit();
        Self::from_exact(&Transform2x2::new(s.clone(), -(&s * &i), s.clone(), &s * &i))
    }

    /// Z = (1/√2)[[1, 1], [𝔦, −𝔦]].
    pub fn z() -> Self {
        let s = inv_sqrt2();
        let i = imag_unit();
        Self::from_exact(&Transform2x2::new(s.clone(), s.clone(), &s * &i, -(&s * &i)))
    }

    /// H = (1/√2)[[1, 1], [1, −1]].
    pub fn hadamard() -> Self {
        let s = inv_sqrt2();
        Self::from_exact(&Transform2x2::new(s.clone(), s.clone(), s.clone(), -s))
    }

    /// (1/√2)[[1, 1], [−1, 1]], the Hadamard variant of the base-case analysis.
    pub fn hadamard_rotation() -> Self {
        let s = inv_sqrt2();
        Self::from_exact(&Transform2x2::new(s.clone(), s.clone(), -s.clone(), s))
    }

    /// T_α = diag(1, α).
    pub fn t_alpha() -> Self {
        Self::diag(S::one(), S::from_cyclo(&cyclo(8, 1)))
    }

    /// T_k^d = diag(1, ρ^d) with ρ = ζ_{4k}.
    pub fn t_k_d(k: u32, d: i64) -> Self {
        Self::diag(S::one(), S::from_cyclo(&cyclo(4 * k, d)))
    }

    pub fn pauli_x() -> Self {
        Self::from_ints(0, 1, 1, 0)
    }

    pub fn pauli_y() -> Self {
        let i = S::from_cyclo(&imag_unit());
        Self::new(S::zero(), i.negated(), i, S::zero())
    }

    pub fn pauli_z() -> Self {
        Self::from_ints(1, 0, 0, -1)
    }

    pub fn det(&self) -> S {
        self.a.times(&self.d).minus(&self.b.times(&self.c))
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self.det().inv()?;
        Ok(Self::new(
            self.d.times(&inv),
            self.b.negated().times(&inv),
            self.c.negated().times(&inv),
            self.a.times(&inv),
        ))
    }

    /// Matrix product self·other.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(
            self.a.times(&other.a).plus(&self.b.times(&other.c)),
            self.a.times(&other.b).plus(&self.b.times(&other.d)),
            self.c.times(&other.a).plus(&self.d.times(&other.c)),
            self.c.times(&other.b).plus(&self.d.times(&other.d)),
        )
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::new(self.a.times(s), self.b.times(s), self.c.times(s), self.d.times(s))
    }

    pub fn entries(&self) -> [&S; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_diagonal(&self) -> bool {
        self.b.is_zero() && self.c.is_zero()
    }

    pub fn is_anti_diagonal(&self) -> bool {
        self.a.is_zero() && self.d.is_zero()
    }

    /// True when the matrix is λ·R for a real orthogonal R and λ ≠ 0.
    pub fn is_orthogonal_up_to_scalar(&self) -> bool {
        let Some(q) = self.entries().into_iter().find(|e| !e.is_zero()).cloned() else {
            return false;
        };
        let Ok(qi) = q.inv() else { return false };
        let r = self.scale(&qi);
        if !r.entries().iter().all(|e| e.is_real()) {
            return false;
        }
        let g = r.compose(&r.transpose());
        g.b.is_zero() && g.c.is_zero() && g.a.minus(&g.d).is_zero() && !g.a.is_zero()
    }

    pub fn flags(&self) -> TransformFlags {
        TransformFlags {
            invertible: !self.det().is_zero(),
            real: self.entries().iter().all(|e| e.is_real()),
            orthogonal_up_to_scalar: self.is_orthogonal_up_to_scalar(),
            diagonal: self.is_diagonal(),
            anti_diagonal: self.is_anti_diagonal(),
        }
    }
}

// ---------------------------------------------------------------------------
// Basic gadgets

/// f_i^c: variable i fixed to c; remaining variables keep their order.
pub fn pin<S: Scalar>(f: &Signature<S>, i: usize, c: u8) -> Result<Signature<S>> {
    let n = f.arity();
    check_vars(&[i], n)?;
    let values = (0..1usize << (n - 1))
        .map(|r| f.get(insert_bit(r, n - 1, i, c as usize)).clone())
        .collect();
    Signature::new(n - 1, values)
}

/// Inserts `b` as variable `var` into index `r` of arity `m`, giving arity m+1.
fn insert_bit(r: usize, m: usize, var: usize, b: usize) -> usize {
    let low_bits = m + 1 - var; // number of variables after `var`
    let high = r >> low_bits;
    let low = r & ((1 << low_bits) - 1);
    (((high << 1) | b) << low_bits) | low
}

/// Σ_{a,c} conj(b(a,c))·f_{ij}^{ac}.
pub fn self_loop<S: Scalar>(
    f: &Signature<S>,
    i: usize,
    j: usize,
    b: &Signature<S>,
) -> Result<Signature<S>> {
    let n = f.arity();
    check_vars(&[i, j], n)?;
    if b.arity() != 2 {
        return Err(HolantError::Precondition("loop signature must be binary".into()));
    }
    let rest: Vec<usize> = (1..=n).filter(|&v| v != i && v != j).collect();
    let weights: Vec<S> = b.values().iter().map(|v| v.conj()).collect();
    let values = (0..1usize << (n - 2))
        .map(|r| {
            let base = spread(r, &rest, n);
            let mut acc = S::zero();
            for (k, w) in weights.iter().enumerate() {
                if w.is_zero() {
                    continue;
                }
                let idx = base | ((k >> 1) << (n - i)) | ((k & 1) << (n - j));
                acc = acc.plus(&w.times(f.get(idx)));
            }
            acc
        })
        .collect();
    Signature::new(n - 2, values)
}

/// Places the bits of `r` (big-endian over `vars`) at those variables' positions.
fn spread(r: usize, vars: &[usize], n: usize) -> usize {
    let m = vars.len();
    vars.iter()
        .enumerate()
        .fold(0, |acc, (k, &v)| acc | (((r >> (m - 1 - k)) & 1) << (n - v)))
}

/// Result of mating two copies of a signature.
#[derive(Clone, Debug, PartialEq)]
pub struct MateResult<S> {
    pub signature: Signature<S>,
    /// False when the input is not real, so the entries are not inner products.
    pub inner_product_interpretable: bool,
}

/// Joins two copies of `f` on every variable outside `dangling` with =₂.
/// Output variables: copy-1 dangling variables, then copy-2 dangling variables.
pub fn mate<S: Scalar>(f: &Signature<S>, dangling: &[usize]) -> Result<MateResult<S>> {
    let n = f.arity();
    check_vars(dangling, n)?;
    let mut dang = dangling.to_vec();
    dang.sort_unstable();
    let joined: Vec<usize> = (1..=n).filter(|v| !dang.contains(v)).collect();
    let pairs: Vec<(usize, usize)> = joined.iter().map(|&v| (v, v)).collect();
    let signature = connect(f, f, &pairs, None)?;
    Ok(MateResult {
        signature,
        inner_product_interpretable: f.is_real(),
    })
}

/// Connects variable `p.0` of `f` with variable `p.1` of `g` for every pair,
/// through the binary `edge` (None: plain =₂ identification).
/// Output variables: the remaining variables of `f` ascending, then those of `g`.
pub fn connect<S: Scalar>(
    f: &Signature<S>,
    g: &Signature<S>,
    pairs: &[(usize, usize)],
    edge: Option<&Signature<S>>,
) -> Result<Signature<S>> {
    let nf = f.arity();
    let ng = g.arity();
    let fv: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let gv: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    check_vars(&fv, nf)?;
    check_vars(&gv, ng)?;
    if let Some(e) = edge {
        if e.arity() != 2 {
            return Err(HolantError::Precondition("edge signature must be binary".into()));
        }
    }
    let f_rest: Vec<usize> = (1..=nf).filter(|v| !fv.contains(v)).collect();
    let g_rest: Vec<usize> = (1..=ng).filter(|v| !gv.contains(v)).collect();
    let p = pairs.len();
    let out_arity = f_rest.len() + g_rest.len();
    // For each joint assignment of the connected variables, precompute the
    // weight and the index offsets into f and g.
    let mut terms: Vec<(S, usize, usize)> = Vec::new();
    match edge {
        None => {
            for a in 0..1usize << p {
                terms.push((S::one(), spread(a, &fv, nf), spread(a, &gv, ng)));
            }
        }
        Some(e) => {
            for a in 0..1usize << p {
                for c in 0..1usize << p {
                    let mut w = S::one();
                    for k in 0..p {
                        let ak = (a >> (p - 1 - k)) & 1;
                        let ck = (c >> (p - 1 - k)) & 1;
                        w = w.times(e.get(ak * 2 + ck));
                        if w.is_zero() {
                            break;
                        }
                    }
                    if !w.is_zero() {
                        terms.push((w, spread(a, &fv, nf), spread(c, &gv, ng)));
                    }
                }
            }
        }
    }
    let g_bits = g_rest.len();
    let values = (0..1usize << out_arity)
        .map(|r| {
            let fbase = spread(r >> g_bits, &f_rest, nf);
            let gbase = spread(r & ((1 << g_bits) - 1), &g_rest, ng);
            let mut acc = S::zero();
            for (w, fo, go) in &terms {
                let x = f.get(fbase | fo);
                if x.is_zero() {
                    continue;
                }
                let y = g.get(gbase | go);
                if y.is_zero() {
                    continue;
                }
                acc = acc.plus(&w.times(&x.times(y)));
            }
            acc
        })
        .collect();
    Signature::new(out_arity, values)
}

/// f ⊗ g, with the variables of `f` first.
pub fn tensor<S: Scalar>(f: &Signature<S>, g: &Signature<S>) -> Result<Signature<S>> {
    let ng = g.arity();
    Signature::from_fn(f.arity() + ng, |i| {
        f.get(i >> ng).times(g.get(i & ((1 << ng) - 1)))
    })
}

/// Reindexes variables: variable k of the result is variable `perm[k−1]` of `f`.
pub fn permute<S: Scalar>(f: &Signature<S>, perm: &[usize]) -> Result<Signature<S>> {
    let n = f.arity();
    if perm.len() != n {
        return Err(HolantError::Precondition(format!(
            "permutation of length {} for arity {}",
            perm.len(),
            n
        )));
    }
    check_vars(perm, n)?;
    Signature::from_fn(n, |y| {
        let idx = (1..=n).fold(0usize, |acc, k| acc | (bit(y, n, k) << (n - perm[k - 1])));
        f.get(idx).clone()
    })
}

/// Tf = T^{⊗n} f.
pub fn holo<S: Scalar>(f: &Signature<S>, t: &Transform2x2<S>) -> Signature<S> {
    let ts = vec![t.clone(); f.arity()];
    holo_local(f, &ts)
}

/// (T₁ ⊗ … ⊗ T_n) f.
pub fn holo_local<S: Scalar>(f: &Signature<S>, ts: &[Transform2x2<S>]) -> Signature<S> {
    let n = f.arity();
    assert_eq!(ts.len(), n, "one transform per variable");
    let mut v = f.values().to_vec();
    for (k, t) in ts.iter().enumerate() {
        let stride = 1usize << (n - 1 - k);
        if t.is_diagonal() && t.a.is_one() && t.d.is_one() {
            continue;
        }
        for i in 0..v.len() {
            if i & stride != 0 {
                continue;
            }
            let (x0, x1) = (&v[i], &v[i | stride]);
            let y0 = t.a.times(x0).plus(&t.b.times(x1));
            let y1 = t.c.times(x0).plus(&t.d.times(x1));
            v[i] = y0;
            v[i | stride] = y1;
        }
    }
    Signature::new(n, v).expect("same arity")
}

/// f̂ = Z⁻¹ f.
pub fn hat<S: Scalar>(f: &Signature<S>) -> Signature<S> {
    holo(f, &Transform2x2::z_inv())
}

/// Shape of Q̂ = Z⁻¹ Q (Z⁻¹)ᵀ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrthogonalityKind {
    DiagonalHat,
    AntidiagonalHat,
    Neither,
}

pub fn orthogonality_kind<S: Scalar>(q: &Transform2x2<S>) -> OrthogonalityKind {
    if !q.is_orthogonal_up_to_scalar() {
        return OrthogonalityKind::Neither;
    }
    let zi = Transform2x2::<S>::z_inv();
    let qh = zi.compose(q).compose(&zi.transpose());
    if qh.is_diagonal() {
        OrthogonalityKind::DiagonalHat
    } else if qh.is_anti_diagonal() {
        OrthogonalityKind::AntidiagonalHat
    } else {
        OrthogonalityKind::Neither
    }
}

// ---------------------------------------------------------------------------
// Interpolation predicates

/// Which arithmetic produced the eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EigenPath {
    Exact,
    Float,
}

/// Hypotheses of the two interpolation lemmas, evaluated on M(g) and h.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterpolationReport {
    pub eigenvalues: [FloatScalar; 2],
    pub exact_eigenvalues: Option<[CycloScalar; 2]>,
    pub path: EigenPath,
    pub degenerate: bool,
    pub eig_ratio_off_unit_circle: bool,
    pub h_not_eigenvector: Option<bool>,
}

pub fn interpolation_predicates<S: Scalar>(
    g: &Signature<S>,
    h: Option<&Signature<S>>,
) -> Result<InterpolationReport> {
    if g.arity() != 2 {
        return Err(HolantError::Precondition("g must be binary".into()));
    }
    if g.is_zero() {
        return Err(HolantError::ZeroSignature);
    }
    if let Some(h) = h {
        if h.arity() != 1 {
            return Err(HolantError::Precondition("h must be unary".into()));
        }
    }
    let (a, b, c, d) = (g.get(0), g.get(1), g.get(2), g.get(3));
    let tr = a.plus(d);
    let det = a.times(d).minus(&b.times(c));
    let degenerate = det.is_zero();
    let h_flag = h.map(|h| {
        let (h0, h1) = (h.get(0), h.get(1));
        if h.is_zero() {
            return false;
        }
        let m0 = a.times(h0).plus(&b.times(h1));
        let m1 = c.times(h0).plus(&d.times(h1));
        !m0.times(h1).minus(&m1.times(h0)).is_zero()
    });

    // exact path: entries exact and discriminant a rational with an expressible root
    let exact = exact_eigen(g);
    if let Some([l1, l2]) = exact.clone() {
        let off = !degenerate && !l1.norm_sqr().minus(&l2.norm_sqr()).is_zero();
        return Ok(InterpolationReport {
            eigenvalues: [l1.approx(), l2.approx()],
            exact_eigenvalues: Some([l1, l2]),
            path: EigenPath::Exact,
            degenerate,
            eig_ratio_off_unit_circle: off,
            h_not_eigenvector: h_flag,
        });
    }
    let trc = tr.to_complex();
    let detc = det.to_complex();
    let disc = (trc * trc - 4.0 * detc).sqrt();
    let l1 = (trc + disc) / 2.0;
    let l2 = (trc - disc) / 2.0;
    let eps = crate::scalar::epsilon().max(1e-12);
    let off = !degenerate && (l1.norm() - l2.norm()).abs() > eps * (1.0 + l1.norm().max(l2.norm()));
    Ok(InterpolationReport {
        eigenvalues: [FloatScalar(l1), FloatScalar(l2)],
        exact_eigenvalues: None,
        path: EigenPath::Float,
        degenerate,
        eig_ratio_off_unit_circle: off,
        h_not_eigenvector: h_flag,
    })
}

fn exact_eigen<S: Scalar>(g: &Signature<S>) -> Option<[CycloScalar; 2]> {
    let vals: Vec<CycloScalar> = g
        .values()
        .iter()
        .map(|v| v.as_exact().cloned())
        .collect::<Option<Vec<_>>>()?;
    let (a, b, c, d) = (&vals[0], &vals[1], &vals[2], &vals[3]);
    let tr = a + d;
    let det = &(a * d) - &(b * c);
    let disc = &(&tr * &tr) - &(CycloScalar::from_i64(4) * det);
    let root = exact_sqrt_rational(&disc.as_rational()?)?;
    let half = CycloScalar::from_ratio(1, 2);
    Some([&(&tr + &root) * &half, &(&tr - &root) * &half])
}

/// =₂ as a loop or edge signature.
pub fn eq2<S: Scalar>() -> Signature<S> {
    equality(2)
}
