#![allow(dead_code)]

use holant::signature::Bell;
use holant::{CycloScalar, ExactSignature, Scalar, Signature};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(v: i64) -> CycloScalar {
    CycloScalar::from_i64(v)
}

/// Bit of 0-based variable `k` in a big-endian index over `n` variables.
pub fn bit_of(idx: usize, n: usize, k: usize) -> usize {
    (idx >> (n - 1 - k)) & 1
}

/// Sub-function on `keep` after fixing the other variables as in `base`.
fn slice<S: Scalar>(vals: &[S], n: usize, keep: &[usize], base: usize) -> Vec<S> {
    let m = keep.len();
    (0..1usize << m)
        .map(|j| {
            let mut idx = base;
            for (p, &k) in keep.iter().enumerate() {
                let b = bit_of(j, m, p);
                let mask = 1 << (n - 1 - k);
                idx = if b == 1 { idx | mask } else { idx & !mask };
            }
            vals[idx].clone()
        })
        .collect()
}

/// Membership in 𝒯 by peeling off a block of size one or two around the first
/// variable whenever the flattening across it has all 2×2 minors zero.
pub fn oracle_in_t<S: Scalar>(vals: &[S], n: usize) -> bool {
    if n <= 2 || vals.iter().all(|v| v.is_zero()) {
        return true;
    }
    let mut blocks = vec![vec![0usize]];
    blocks.extend((1..n).map(|p| vec![0, p]));
    for a in blocks {
        let rest: Vec<usize> = (0..n).filter(|k| !a.contains(k)).collect();
        let rows: Vec<Vec<S>> = (0..1usize << a.len())
            .map(|r| {
                let mut base = 0;
                for (p, &k) in a.iter().enumerate() {
                    base |= bit_of(r, a.len(), p) << (n - 1 - k);
                }
                slice(vals, n, &rest, base)
            })
            .collect();
        let cols = rows[0].len();
        let mut rank_one = true;
        'minor: for r1 in 0..rows.len() {
            for r2 in r1 + 1..rows.len() {
                for c1 in 0..cols {
                    for c2 in c1 + 1..cols {
                        let lhs = rows[r1][c1].times(&rows[r2][c2]);
                        let rhs = rows[r1][c2].times(&rows[r2][c1]);
                        if !lhs.minus(&rhs).is_zero() {
                            rank_one = false;
                            break 'minor;
                        }
                    }
                }
            }
        }
        if rank_one {
            let row = rows.iter().find(|r| r.iter().any(|v| !v.is_zero())).unwrap();
            return oracle_in_t(row, rest.len());
        }
    }
    false
}

/// ⟨φ|_{ij} ψ by direct summation, 1-based i < j.
pub fn oracle_project(psi: &ExactSignature, i: usize, j: usize, phi: Bell) -> Vec<CycloScalar> {
    let n = psi.arity();
    let b = phi.values();
    let rest: Vec<usize> = (0..n).filter(|&k| k != i - 1 && k != j - 1).collect();
    let m = rest.len();
    (0..1usize << m)
        .map(|r| {
            let mut base = 0;
            for (p, &k) in rest.iter().enumerate() {
                base |= bit_of(r, m, p) << (n - 1 - k);
            }
            let mut acc = CycloScalar::zero();
            for (ab, &w) in b.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                let idx = base | ((ab >> 1) << (n - i)) | ((ab & 1) << (n - j));
                acc = acc.plus(&psi.get(idx).times(&c(w)));
            }
            acc
        })
        .collect()
}

/// All perfect matchings of `vars`.
pub fn pairings(vars: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if vars.is_empty() {
        return vec![vec![]];
    }
    let first = vars[0];
    let mut out = Vec::new();
    for p in 1..vars.len() {
        let rest: Vec<usize> = vars[1..].iter().copied().filter(|&v| v != vars[p]).collect();
        for mut tail in pairings(&rest) {
            tail.insert(0, (first, vars[p]));
            out.push(tail);
        }
    }
    out
}

/// Π φ_t(x_u, x_v) over a matching of 0-based positions of an m-ary function.
pub fn bell_product(m: usize, pairs: &[(usize, usize)], states: &[Bell]) -> Vec<CycloScalar> {
    (0..1usize << m)
        .map(|r| {
            let mut v = 1;
            for (&(u, w), s) in pairs.iter().zip(states) {
                v *= s.values()[2 * bit_of(r, m, u) + bit_of(r, m, w)];
            }
            c(v)
        })
        .collect()
}

/// The s with a = s·b, if any.
pub fn ratio(a: &[CycloScalar], b: &[CycloScalar]) -> Option<CycloScalar> {
    let k = b.iter().position(|v| !v.is_zero())?;
    let s = a[k].div(&b[k]).ok()?;
    a.iter().zip(b).all(|(x, y)| *x == s.times(y)).then_some(s)
}

pub fn random_rational(rng: &mut ChaCha8Rng) -> CycloScalar {
    let p = rng.gen_range(-4i64..=4);
    let q = rng.gen_range(1i64..=3);
    CycloScalar::from_ratio(p, q)
}

/// A factor that no flattening splits: unary nonzero, binary of full rank,
/// ternary with every single-variable cut of rank two.
pub fn random_irreducible(rng: &mut ChaCha8Rng, arity: usize) -> ExactSignature {
    loop {
        let f = Signature::from_fn(arity, |_| c(rng.gen_range(-3..=3))).unwrap();
        let v = f.values();
        let ok = match arity {
            1 => !f.is_zero(),
            _ => (0..arity).all(|k| {
                let rest: Vec<usize> = (0..arity).filter(|&p| p != k).collect();
                let r0 = slice(v, arity, &rest, 0);
                let r1 = slice(v, arity, &rest, 1 << (arity - 1 - k));
                (0..r0.len()).any(|a| {
                    (a + 1..r0.len()).any(|b| !r0[a].times(&r1[b]).minus(&r0[b].times(&r1[a])).is_zero())
                })
            }),
        };
        if ok {
            return f;
        }
    }
}

/// Planted composite: factors with their target variable positions (0-based).
pub struct Composite {
    pub signature: ExactSignature,
    pub parts: Vec<(ExactSignature, Vec<usize>)>,
}

pub fn random_composite(rng: &mut ChaCha8Rng, max_arity: usize) -> Composite {
    let mut arities = Vec::new();
    let mut total = 0;
    loop {
        let a = rng.gen_range(1..=3);
        if total + a > max_arity {
            break;
        }
        arities.push(a);
        total += a;
        if total >= 2 && rng.gen_bool(0.3) {
            break;
        }
    }
    let mut positions: Vec<usize> = (0..total).collect();
    positions.shuffle(rng);
    let mut parts = Vec::new();
    let mut off = 0;
    for a in arities {
        let g = random_irreducible(rng, a);
        parts.push((g, positions[off..off + a].to_vec()));
        off += a;
    }
    let signature = Signature::from_fn(total, |idx| {
        parts.iter().fold(c(1), |acc, (g, pos)| {
            let j = pos.iter().fold(0, |j, &k| (j << 1) | bit_of(idx, total, k));
            acc.times(g.get(j))
        })
    })
    .unwrap();
    Composite { signature, parts }
}

/// Evaluates g whose variable t sits at position `scope[t]` of an assignment.
pub fn eval_on(g: &ExactSignature, scope: &[usize], assignment: &[usize]) -> CycloScalar {
    let j = scope.iter().fold(0, |j, &k| (j << 1) | assignment[k]);
    g.get(j).clone()
}

/// g over `a` and h over `b` agree up to a nonzero scalar as functions of the
/// shared variable set.
pub fn same_factor(g: &ExactSignature, a: &[usize], h: &ExactSignature, b: &[usize]) -> bool {
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }
    let top = sa.iter().max().copied().unwrap_or(0) + 1;
    let mut x = Vec::new();
    let mut y = Vec::new();
    for r in 0..1usize << sa.len() {
        let mut asg = vec![0usize; top];
        for (p, &k) in sa.iter().enumerate() {
            asg[k] = bit_of(r, sa.len(), p);
        }
        x.push(eval_on(g, a, &asg));
        y.push(eval_on(h, b, &asg));
    }
    ratio(&x, &y).is_some_and(|s| !s.is_zero())
}
