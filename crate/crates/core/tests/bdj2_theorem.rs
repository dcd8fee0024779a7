use serre_lab::bdj2::*;

const CASES: [(i64, u32); 8] = [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (5, 3), (7, 1), (7, 2)];

#[test]
fn theorem_holds_strict_and_weak() {
    for (p, f) in CASES {
        let ctx = Gl2Ctx::new(p, f).unwrap();
        for mode in [RextMode::Strict, RextMode::Weak] {
            let r = verify_bdj_theorem(&ctx, mode);
            assert!(r.checked > 0);
            assert!(r.passed, "p = {p}, f = {f}, {mode:?}: {:?}", r.counterexamples.first());
        }
    }
}

#[test]
fn empty_stretch_reading_breaks_f1() {
    for p in [3, 5, 7] {
        let ctx = Gl2Ctx::new(p, 1).unwrap();
        let r = verify_bdj_theorem_with(&ctx, RextMode::Strict, StretchReading::Empty);
        assert!(!r.passed);
        assert!(r.counterexamples.iter().all(|c| c.part == "ii"));
    }
}

/// The interval side never yields the empty set when the only candidate
/// interval is all of `Z/f` (alpha zero except for at most one 1); every
/// other digit string agrees.
#[test]
fn successors_match_except_full_cycle() {
    for p in [3, 5, 7] {
        for f in 1..=3usize {
            if p == 7 && f == 3 {
                continue;
            }
            let base = p as usize;
            let bad: Vec<Vec<i64>> = (0..base.pow(f as u32))
                .map(|code| (0..f).map(|i| ((code / base.pow(i as u32)) % base) as i64).collect::<Vec<_>>())
                .filter(|alpha| !successors_equivalence(alpha, p))
                .collect();
            let mut degenerate = vec![vec![0i64; f]];
            if f > 1 {
                for j in 0..f {
                    let mut e = vec![0i64; f];
                    e[j] = 1;
                    degenerate.push(e);
                }
            }
            let mut bad = bad;
            bad.sort();
            degenerate.sort();
            assert_eq!(bad, degenerate, "p = {p}, f = {f}");
        }
    }
}

#[test]
fn phi_is_a_bijection() {
    for (p, f) in [(3, 3), (5, 2), (5, 3), (7, 2)] {
        let l0 = enumerate_side(f, p, Side::L0);
        let l1: std::collections::BTreeSet<_> = enumerate_side(f, p, Side::L1).into_iter().collect();
        let image: std::collections::BTreeSet<_> = l0.iter().map(|s| phi(s, p).unwrap().0).collect();
        assert_eq!(image.len(), l0.len(), "p = {p}, f = {f}");
        assert_eq!(image, l1, "p = {p}, f = {f}");
        for s in &l1 {
            assert_eq!(&phi(&phi_inverse(s, p).unwrap(), p).unwrap().0, s);
        }
    }
}

#[test]
fn jantzen_agrees_with_diamond_for_gl2() {
    use serre_lab::jantzen::jantzen_virtual;
    use serre_lab::modreps::decompose_virtual_fp;
    use serre_lab::tametypes::{all_tame_types, good_pair_for};
    for p in [3i64, 5, 7, 11, 13] {
        let ctx = Gl2Ctx::new(p, 1).unwrap();
        for tau in all_tame_types(2, p).unwrap() {
            let rho = Gl2TameType::from_tame_type(&tau).unwrap();
            let v = jantzen_virtual(&good_pair_for(&tau)).unwrap();
            let dec = decompose_virtual_fp(&v, p).unwrap();
            let ours: std::collections::BTreeSet<_> =
                dec.keys().map(|w| Gl2Weight::from_serre(w).unwrap()).collect();
            assert_eq!(ours, diamond_constituents(&rho, &ctx), "{tau}");
            let mass: i64 = dec.iter().map(|(w, k)| k * Gl2Weight::from_serre(w).unwrap().dimension()).sum();
            assert_eq!(mass, v_p(&rho, &ctx).unwrap().dimension(&ctx), "{tau}");
        }
    }
}
