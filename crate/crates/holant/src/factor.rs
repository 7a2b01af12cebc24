//! Divisibility and unique prime factorization of signatures.

use itertools::Itertools;

use crate::error::{HolantError, Result};
use crate::gadget::{permute, tensor};
use crate::scalar::{epsilon, Backend, Scalar};
use crate::signature::{bit, check_vars, matrix_view, Signature};

/// A prime factor together with the variables of the input it acts on.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor<S> {
    pub signature: Signature<S>,
    pub scope: Vec<usize>,
}

/// f = global_scalar · ⊗ factors, each factor normalized to first nonzero entry 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization<S> {
    pub arity: usize,
    pub global_scalar: S,
    pub factors: Vec<Factor<S>>,
    /// Zero threshold used by the float backend.
    pub threshold: Option<f64>,
}

impl<S: Scalar> Factorization<S> {
    pub fn arities(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.signature.arity()).collect()
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1
    }

    /// Tensor of the factors, rearranged to the original variable order and scaled.
    pub fn reconstruct(&self) -> Result<Signature<S>> {
        let mut acc = Signature::scalar(self.global_scalar.clone());
        let mut order = Vec::with_capacity(self.arity);
        for f in &self.factors {
            acc = tensor(&acc, &f.signature)?;
            order.extend_from_slice(&f.scope);
        }
        let mut perm = vec![0; self.arity];
        for (pos, &v) in order.iter().enumerate() {
            perm[v - 1] = pos + 1;
        }
        permute(&acc, &perm)
    }
}

/// True iff M_{A,Ā}(f) has rank at most one.
pub fn is_reducible_across<S: Scalar>(f: &Signature<S>, a: &[usize]) -> Result<bool> {
    let n = f.arity();
    check_vars(a, n)?;
    if a.is_empty() || a.len() >= n {
        return Err(HolantError::Precondition(
            "cut must be a nonempty proper subset".into(),
        ));
    }
    if f.is_zero() {
        return Err(HolantError::ZeroSignature);
    }
    Ok(matrix_view(f, a)?.rank_at_most_one())
}

/// Splits `f = g ⊗ h` across rows `a` when the view has rank one.
fn split<S: Scalar>(f: &Signature<S>, a: &[usize]) -> Option<(Signature<S>, Signature<S>)> {
    let m = matrix_view(f, a).ok()?;
    if !m.rank_at_most_one() {
        return None;
    }
    let (r0, c0) = m
        .entries
        .iter()
        .enumerate()
        .find_map(|(r, row)| row.iter().position(|v| !v.is_zero()).map(|c| (r, c)))?;
    let pivot_inv = m.entries[r0][c0].inv().ok()?;
    let g = Signature::new(a.len(), m.entries.iter().map(|row| row[c0].clone()).collect()).ok()?;
    let h = Signature::new(
        m.cols.len(),
        m.entries[r0].iter().map(|v| v.times(&pivot_inv)).collect(),
    )
    .ok()?;
    Some((g, h))
}

/// Unique prime factorization.
pub fn upf<S: Scalar>(f: &Signature<S>) -> Result<Factorization<S>> {
    if f.is_zero() {
        return Err(HolantError::ZeroSignature);
    }
    let n = f.arity();
    let mut global = S::one();
    let mut factors = Vec::new();
    let mut remaining: Vec<usize> = (1..=n).collect();
    let mut cur = f.clone();
    while !remaining.is_empty() {
        let m = remaining.len();
        let mut found = None;
        'search: for size in 1..m {
            for rest in (2..=m).combinations(size - 1) {
                let mut a = vec![1];
                a.extend(rest);
                if let Some(parts) = split(&cur, &a) {
                    found = Some((a, parts));
                    break 'search;
                }
            }
        }
        let (local, g, h) = match found {
            Some((a, (g, h))) => (a, g, h),
            None => ((1..=m).collect(), cur.clone(), Signature::scalar(S::one())),
        };
        let (lambda, g) = g.normalized()?;
        global = global.times(&lambda);
        factors.push(Factor {
            signature: g,
            scope: local.iter().map(|&v| remaining[v - 1]).collect(),
        });
        remaining = (1..=m)
            .filter(|v| !local.contains(v))
            .map(|v| remaining[v - 1])
            .collect();
        if remaining.is_empty() {
            global = global.times(h.get(0));
        }
        cur = h;
    }
    Ok(Factorization {
        arity: n,
        global_scalar: global,
        factors,
        threshold: (S::BACKEND == Backend::Float).then(epsilon),
    })
}

/// Placement of a divisor inside a signature.
#[derive(Clone, Debug, PartialEq)]
pub struct Division<S> {
    /// Variable k of the divisor sits at variable `scope[k−1]` of the dividend.
    pub scope: Vec<usize>,
    /// Cofactor over the remaining variables, ascending (arity 0 when g uses all).
    pub cofactor: Signature<S>,
}

/// Finds a scope and cofactor h with f = g ⊗ h, if g divides f.
pub fn divides<S: Scalar>(g: &Signature<S>, f: &Signature<S>) -> Result<Option<Division<S>>> {
    if g.is_zero() {
        return Err(HolantError::ZeroSignature);
    }
    if f.is_zero() || g.arity() > f.arity() {
        return Ok(None);
    }
    let gf = upf(g)?;
    let ff = upf(f)?;
    let mut used = vec![false; ff.factors.len()];
    let mut scope = vec![0usize; g.arity()];
    Ok(match_factors(g, f, &gf, &ff, 0, &mut used, &mut scope))
}

fn match_factors<S: Scalar>(
    g: &Signature<S>,
    f: &Signature<S>,
    gf: &Factorization<S>,
    ff: &Factorization<S>,
    k: usize,
    used: &mut Vec<bool>,
    scope: &mut Vec<usize>,
) -> Option<Division<S>> {
    if k == gf.factors.len() {
        return cofactor_for(g, f, scope).map(|cofactor| Division {
            scope: scope.clone(),
            cofactor,
        });
    }
    let gk = &gf.factors[k];
    let a = gk.signature.arity();
    for j in 0..ff.factors.len() {
        if used[j] || ff.factors[j].signature.arity() != a {
            continue;
        }
        let fj = &ff.factors[j];
        for p in (1..=a).permutations(a) {
            let Ok(pf) = permute(&fj.signature, &p) else {
                continue;
            };
            if !pf.proportional(&gk.signature) {
                continue;
            }
            for (t, &gv) in gk.scope.iter().enumerate() {
                scope[gv - 1] = fj.scope[p[t] - 1];
            }
            used[j] = true;
            if let Some(d) = match_factors(g, f, gf, ff, k + 1, used, scope) {
                return Some(d);
            }
            used[j] = false;
        }
    }
    None
}

/// h(y) = f(x|scope = α, x|rest = y) / g(α), verified against f.
fn cofactor_for<S: Scalar>(g: &Signature<S>, f: &Signature<S>, scope: &[usize]) -> Option<Signature<S>> {
    let n = f.arity();
    let m = g.arity();
    let rest: Vec<usize> = (1..=n).filter(|v| !scope.contains(v)).collect();
    let place = |alpha: usize, y: usize| -> usize {
        let mut idx = 0;
        for (k, &v) in scope.iter().enumerate() {
            idx |= bit(alpha, m, k + 1) << (n - v);
        }
        for (k, &v) in rest.iter().enumerate() {
            idx |= bit(y, rest.len(), k + 1) << (n - v);
        }
        idx
    };
    let alpha = g.first_nonzero()?;
    let ginv = g.get(alpha).inv().ok()?;
    let h = Signature::from_fn(rest.len(), |y| f.get(place(alpha, y)).times(&ginv)).ok()?;
    for a in 0..1usize << m {
        for y in 0..1usize << rest.len() {
            if !f.get(place(a, y)).minus(&g.get(a).times(h.get(y))).is_zero() {
                return None;
            }
        }
    }
    Some(h)
}

/// UPF of a real reducible signature with every factor real.
pub fn real_factorization<S: Scalar>(f: &Signature<S>) -> Result<Factorization<S>> {
    if !f.is_real() {
        return Err(HolantError::Precondition("signature is not real".into()));
    }
    let fac = upf(f)?;
    if fac.is_irreducible() {
        return Err(HolantError::Precondition("signature is irreducible".into()));
    }
    // First-nonzero normalization already makes the factors of a real
    // signature real; anything else is an internal bug.
    for factor in &fac.factors {
        assert!(
            factor.signature.is_real(),
            "non-real factor in the factorization of a real signature"
        );
    }
    assert!(fac.global_scalar.is_real(), "non-real global scalar");
    Ok(fac)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::tensor;
    use crate::scalar::{imag_unit, CycloScalar};
    use crate::signature::{builtin, delta0, equality, exact, ExactSignature};

    #[test]
    fn reducibility() {
        let e2: ExactSignature = equality(2);
        assert!(!is_reducible_across(&e2, &[1]).unwrap());
        assert!(is_reducible_across(&exact(3, &[1, 0, 0, 1, 2, 0, 0, 2]), &[1]).unwrap());
        let g3: ExactSignature = equality(3);
        for v in 1..=3 {
            assert!(!is_reducible_across(&g3, &[v]).unwrap());
        }
        assert!(is_reducible_across(&exact(2, &[0, 0, 0, 0]), &[1]).is_err());
    }

    #[test]
    fn factorization_of_composite() {
        let f = tensor(
            &tensor(&exact(1, &[1, 2]), &equality(2)).unwrap(),
            &equality(3),
        )
        .unwrap();
        let shuffled = permute(&f, &[4, 2, 6, 1, 5, 3]).unwrap();
        let fac = upf(&shuffled).unwrap();
        assert_eq!(fac.factors.len(), 3);
        assert_eq!(fac.reconstruct().unwrap(), shuffled);
        let mut ar = fac.arities();
        ar.sort();
        assert_eq!(ar, vec![1, 2, 3]);
    }

    #[test]
    fn irreducible_builtins() {
        for name in ["psi6", "psi8"] {
            let s: ExactSignature = builtin(name).unwrap();
            let fac = upf(&s).unwrap();
            assert!(fac.is_irreducible());
            assert_eq!(fac.factors[0].signature.arity(), s.arity());
        }
    }

    #[test]
    fn division() {
        let d = divides(&delta0(), &exact(2, &[1, 0, 0, 0])).unwrap().unwrap();
        assert_eq!(d.scope, vec![1]);
        assert_eq!(d.cofactor, delta0());
        assert!(divides(&exact(1, &[1, 1]), &equality(3)).unwrap().is_none());
        let f = tensor(&equality(2), &exact(1, &[3, 5])).unwrap();
        let d = divides(&equality(2), &f).unwrap().unwrap();
        assert_eq!(d.scope, vec![1, 2]);
        assert_eq!(d.cofactor, exact(1, &[3, 5]));
    }

    #[test]
    fn real_factors() {
        let i = imag_unit();
        let a = Signature::new(1, vec![i.clone(), CycloScalar::zero()]).unwrap();
        let b = Signature::new(1, vec![CycloScalar::zero(), -i]).unwrap();
        let f = tensor(&a, &b).unwrap();
        assert!(f.is_real());
        let fac = real_factorization(&f).unwrap();
        assert!(fac.factors.iter().all(|x| x.signature.is_real()));
        assert!(real_factorization(&equality::<CycloScalar>(4)).is_err());
    }
}
