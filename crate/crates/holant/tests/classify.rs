mod common;

use common::*;
use holant::classify::{
    in_a, in_akd, in_l, in_p, in_t, in_t1, monotone_normal_form, verdict_csp, verdict_csp2, verdict_cspk,
    verdict_holant_odd, verdict_holantc, Certificate, Outcome, Witness,
};
use holant::signature::{builtin, equality, exact, neq2};
use holant::{CycloScalar, ExactSignature, HolantError, Scalar, Signature};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unit_entry(rng: &mut ChaCha8Rng) -> CycloScalar {
    match rng.gen_range(0..7) {
        0 | 1 => c(0),
        2 => c(2),
        k => c(1).mul_i_pow(k as i64),
    }
}

fn affine_support(supp: &[usize]) -> bool {
    supp.iter()
        .all(|&a| supp.iter().all(|&b| supp.iter().all(|&d| supp.contains(&(a ^ b ^ d)))))
}

/// Membership in 𝒜 by exhausting every quadratic form over ℤ₄ with even cross terms.
fn oracle_in_a(f: &ExactSignature) -> bool {
    let n = f.arity();
    let supp = f.support();
    if supp.is_empty() {
        return true;
    }
    if !affine_support(&supp) {
        return false;
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (j + 1..n).map(move |k| (j, k))).collect();
    let forms = 4usize.pow(n as u32) << pairs.len();
    (0..forms).any(|code| {
        let lin: Vec<i64> = (0..n).map(|k| ((code >> (2 * k)) & 3) as i64).collect();
        let cross: Vec<i64> = (0..pairs.len()).map(|p| ((code >> (2 * n + p)) & 1) as i64).collect();
        let target: Vec<CycloScalar> = supp
            .iter()
            .map(|&idx| {
                let x: Vec<i64> = (0..n).map(|k| bit_of(idx, n, k) as i64).collect();
                let mut q: i64 = lin.iter().zip(&x).map(|(a, b)| a * b).sum();
                for (p, &(j, k)) in pairs.iter().enumerate() {
                    q += 2 * cross[p] * x[j] * x[k];
                }
                c(1).mul_i_pow(q)
            })
            .collect();
        let vals: Vec<CycloScalar> = supp.iter().map(|&i| f.get(i).clone()).collect();
        ratio(&vals, &target).is_some()
    })
}

#[test]
fn affine_membership_matches_exhaustion() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut members = 0;
    for k in 0..600 {
        let n = if k % 3 == 0 { 3 } else { 2 };
        let f = Signature::from_fn(n, |_| unit_entry(&mut rng)).unwrap();
        let m = in_a(&f).unwrap();
        assert_eq!(m.member, oracle_in_a(&f), "{:?}", f.values());
        if m.member && !f.is_zero() {
            let Certificate::Affine(cert) = &m.certificate else { panic!() };
            assert_eq!(cert.evaluate(), f);
            members += 1;
        }
    }
    assert!(members > 50);
}

#[test]
fn product_membership_on_binaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..400 {
        let f = Signature::from_fn(2, |_| unit_entry(&mut rng)).unwrap();
        let v = f.values();
        let oracle = v[0].times(&v[3]) == v[1].times(&v[2])
            || (v[1].is_zero() && v[2].is_zero())
            || (v[0].is_zero() && v[3].is_zero());
        assert_eq!(in_p(&f).unwrap().member, oracle, "{:?}", v);
    }
}

#[test]
fn tensor_classes() {
    assert!(in_t(&equality(2)).unwrap().member);
    assert!(!in_t1(&equality(2)).unwrap().member);
    assert!(in_t1(&exact(2, &[1, 2, 3, 6])).unwrap().member);
    assert!(!in_t(&equality(3)).unwrap().member);
    let psi6: ExactSignature = builtin("psi6").unwrap();
    assert!(!in_t(&psi6).unwrap().member);
    let m = in_t(&exact(4, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1])).unwrap();
    let Certificate::Factors { scopes } = m.certificate else { panic!() };
    assert_eq!(scopes, vec![vec![1, 2], vec![3, 4]]);
}

#[test]
fn goldens() {
    let ne: ExactSignature = neq2();
    assert!(in_p(&ne).unwrap().member);
    assert!(!in_l(&ne).unwrap().member);
    assert!(!in_l(&equality(3)).unwrap().member);
    for d in 1..=3 {
        assert!(in_akd(&equality(3), 3, d).unwrap().member);
        assert!(in_akd(&ne, 3, d).unwrap().member);
    }
    assert!(matches!(in_akd(&ne, 3, 4), Err(HolantError::Precondition(_))));
    let psi6: ExactSignature = builtin("psi6").unwrap();
    assert!(in_a(&psi6).unwrap().member);
    assert!(!in_p(&psi6).unwrap().member);
}

#[test]
fn csp_verdicts() {
    let g = Signature::new(2, vec![c(1), c(1), c(1), c(1).mul_i_pow(1)]).unwrap();
    let v = verdict_csp(&[g.clone()]).unwrap();
    assert_eq!(v.outcome, Outcome::Hard);
    let v = verdict_cspk(&[g.clone()], 3).unwrap();
    assert_eq!(v.outcome, Outcome::Hard);
    let Witness::Hard { failed, .. } = &v.witness else { panic!() };
    assert_eq!(failed.len(), 4);

    let v = verdict_csp(&[equality(3), neq2()]).unwrap();
    assert_eq!(v.outcome, Outcome::Tractable);
    let t_alpha_member = Signature::new(2, vec![c(1), c(0), c(0), holant::scalar::alpha()]).unwrap();
    let v = verdict_csp2(&[t_alpha_member]).unwrap();
    assert_eq!(v.outcome, Outcome::Tractable);
}

#[test]
fn holant_verdicts() {
    let v = verdict_holantc(&[equality(3)]).unwrap();
    assert_eq!(v.outcome, Outcome::Tractable);
    let complex = Signature::new(1, vec![c(1), c(1).mul_i_pow(1)]).unwrap();
    assert!(verdict_holantc(&[complex]).is_err());
    let v = verdict_holant_odd(&[equality(3)]).unwrap();
    assert_eq!(v.outcome, Outcome::Tractable);
    assert!(verdict_holant_odd(&[equality(2)]).is_err());
    let v = verdict_holant_odd(&[exact(3, &[1, 1, 0, 2, 1, 0, 3, 1])]).unwrap();
    assert_ne!(v.outcome, Outcome::Tractable);
}

#[test]
fn monotone_form_flips_minus_bundles() {
    let (g, flips) = monotone_normal_form(&neq2()).unwrap();
    assert_eq!(g, equality(2));
    assert_eq!(flips, vec![2]);
}

#[test]
fn odd_verdict_tally() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut tally = [0usize; 3];
    for _ in 0..60 {
        let f = Signature::from_fn(3, |_| c(rng.gen_range(-2..=2))).unwrap();
        if f.is_zero() {
            continue;
        }
        let v = verdict_holant_odd(&[f]).unwrap();
        tally[v.outcome as usize] += 1;
    }
    eprintln!("holant-odd tally tractable/hard/unknown: {tally:?}");
    assert!(tally[1] > tally[2]);
}
