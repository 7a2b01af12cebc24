mod common;

use common::*;
use holant::factor::{divides, is_reducible_across, real_factorization, upf};
use holant::gadget::tensor;
use holant::signature::{builtin, equality, exact, Bell};
use holant::{ExactSignature, HolantError, Signature};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn planted_composites_come_back() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..150 {
        let comp = random_composite(&mut rng, 7);
        let fz = upf(&comp.signature).unwrap();
        assert_eq!(fz.factors.len(), comp.parts.len());
        assert_eq!(fz.reconstruct().unwrap(), comp.signature);
        for fac in &fz.factors {
            let scope: Vec<usize> = fac.scope.iter().map(|v| v - 1).collect();
            assert!(comp.parts.iter().any(|(g, pos)| same_factor(&fac.signature, &scope, g, pos)));
            assert!(fac.signature.first_nonzero().is_some());
            assert!(fac.signature.get(fac.signature.first_nonzero().unwrap()).clone() == c(1));
        }
    }
}

#[test]
fn bell_pairs_split() {
    let phi: ExactSignature = Bell::PhiPlus.signature();
    let psi: ExactSignature = Bell::PsiMinus.signature();
    let f = tensor(&phi, &psi).unwrap();
    let fz = upf(&f).unwrap();
    assert_eq!(fz.arities(), vec![2, 2]);
    assert!(is_reducible_across(&f, &[1, 2]).unwrap());
    assert!(!is_reducible_across(&f, &[1, 3]).unwrap());
    let psi8: ExactSignature = builtin("psi8").unwrap();
    assert!(upf(&psi8).unwrap().is_irreducible());
}

#[test]
fn division() {
    let g = exact(2, &[1, 2, 3, 5]);
    let u = exact(1, &[2, 7]);
    let f = tensor(&u, &g).unwrap();
    let d = divides(&g, &f).unwrap().expect("g divides f");
    assert_eq!(d.scope, vec![2, 3]);
    assert_eq!(d.cofactor, u);
    assert!(divides(&equality::<holant::CycloScalar>(2), &f).unwrap().is_none());
}

#[test]
fn errors() {
    let z: ExactSignature = Signature::zero(3).unwrap();
    assert!(matches!(upf(&z), Err(HolantError::ZeroSignature)));
    let f = exact(3, &[1, 0, 0, 0, 0, 0, 0, 1]);
    assert!(is_reducible_across(&f, &[]).is_err());
    assert!(is_reducible_across(&f, &[1, 2, 3]).is_err());
    assert!(real_factorization(&f).is_err());
    let r = real_factorization(&exact(2, &[1, -1, 2, -2])).unwrap();
    assert_eq!(r.arities(), vec![1, 1]);
}
