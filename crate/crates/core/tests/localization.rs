//! Torus localization on `Gr(2, O(a_1) + .. + O(a_e))` over `P^m` as an
//! independent oracle for line counts computed by the pipeline.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_ihc::contraction::enumerate_candidates;
use toric_ihc::pipeline::{ihc_verdict, verify_class};
use toric_ihc::{corpus, CurveClass, ToricVariety};

fn r(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// `int c_top(sum_i Sym^{d_i} S^* (x) O(l_i))` over `Gr(2, V)`, `V = sum O(a_k)`
/// on `P^m`, where `O(-1)` is the tautological line of `P^m`.
fn bott(m: usize, twists: &[i64], sym: &[(usize, i64)], seed: u64) -> BigRational {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: Vec<i64> = (0..=m).map(|_| rng.gen_range(-1000..1000)).collect();
    let v: Vec<i64> = twists.iter().map(|_| rng.gen_range(-1000..1000)).collect();
    let e = twists.len();
    let mut total = BigRational::zero();
    for i in 0..=m {
        let h = -w[i];
        let mut euler = BigRational::one();
        for (j, wj) in w.iter().enumerate() {
            if j != i {
                euler *= r(wj - w[i]);
            }
        }
        let vw: Vec<i64> = (0..e).map(|k| v[k] + twists[k] * h).collect();
        for p in 0..e {
            for q in p + 1..e {
                let (a, b) = (vw[p], vw[q]);
                let mut eu = euler.clone();
                for (c, &x) in vw.iter().enumerate() {
                    if c != p && c != q {
                        eu *= r((x - a) * (x - b));
                    }
                }
                let mut num = BigRational::one();
                for &(d, l) in sym {
                    for k in 0..=d as i64 {
                        num *= r(-(k * a + (d as i64 - k) * b) + l * h);
                    }
                }
                total += num / eu;
            }
        }
    }
    total
}

fn oracle(m: usize, twists: &[i64], sym: &[(usize, i64)]) -> BigInt {
    let a = bott(m, twists, sym, 1);
    assert_eq!(a, bott(m, twists, sym, 2), "localization sum depends on the weights");
    assert!(a.is_integer());
    a.to_integer()
}

fn pipeline_count(name: &str, h: &str, class: &CurveClass) -> BigInt {
    let entry = corpus::lookup(name).unwrap();
    let hs = vec![entry.parse_divisor(h).unwrap()];
    let v = ToricVariety::new(entry.fan).unwrap();
    let c = enumerate_candidates(&v).unwrap().into_iter().find(|c| &c.curve_class == class).unwrap();
    verify_class(&v, &hs, &c).unwrap().count().cloned().expect("rank equals dimension")
}

#[test]
fn oracle_sanity() {
    // trivial V: cubics containing a line have codimension 2 and degree 21
    assert_eq!(oracle(2, &[0, 0, 0], &[(3, 1)]), BigInt::from(21));
    assert_eq!(oracle(2, &[0, 0, 0], &[(3, 2)]), BigInt::from(84));
    // lines on a quintic threefold and on a cubic surface
    assert_eq!(oracle(0, &[0; 5], &[(5, 0)]), BigInt::from(2875));
    assert_eq!(oracle(0, &[0; 4], &[(3, 0)]), BigInt::from(27));
    // 16 lines on a quartic del Pezzo surface in P^4
    assert_eq!(oracle(0, &[0; 5], &[(2, 0), (2, 0)]), BigInt::from(16));
}

#[test]
fn blowup_of_p4_matches_localization() {
    // h - e: V = O^2 + O(-1) over P^2, cubics twisted by O(2)
    let hme = pipeline_count("BlP4_line", "5H-2E", &corpus::blowup_p4_line_class_h_minus_e());
    assert_eq!(hme, oracle(2, &[0, 0, -1], &[(3, 2)]));
    assert_eq!(hme, BigInt::from(186));
    // e: V = O^3 over P^1, conics twisted by O(3)
    let e = pipeline_count("BlP4_line", "5H-2E", &corpus::blowup_p4_line_class_e());
    assert_eq!(e, oracle(1, &[0, 0, 0], &[(2, 3)]));
    assert_eq!(e, BigInt::from(18));
}

#[test]
fn other_hypersurfaces_match_localization() {
    // X = aH - bE on the blow-up: degrees (a - b) on h - e, b on e
    for (a, b) in [(4i64, 1i64), (5, 1), (6, 3), (5, 2), (6, 2), (7, 2)] {
        let h = format!("{a}H-{b}E");
        let d = (a - b) as usize;
        if d + 1 == 4 {
            let got = pipeline_count("BlP4_line", &h, &corpus::blowup_p4_line_class_h_minus_e());
            assert_eq!(got, oracle(2, &[0, 0, -1], &[(d, b)]), "{h}");
        }
        if b == 2 {
            let got = pipeline_count("BlP4_line", &h, &corpus::blowup_p4_line_class_e());
            assert_eq!(got, oracle(1, &[0, 0, 0], &[(2, a - b)]), "{h}");
        }
    }
    let entry = corpus::lookup("P5").unwrap();
    let hs = vec![entry.parse_divisor("2H").unwrap(), entry.parse_divisor("3H").unwrap()];
    let rep = ihc_verdict(&entry.fan, &hs, &[]).unwrap();
    // rank 3 + 4 = 7 < 8: a curve of lines, no count
    assert!(rep.classes[0].count().is_none());
    let entry = corpus::lookup("P6").unwrap();
    let hs = vec![entry.parse_divisor("2H").unwrap(), entry.parse_divisor("2H").unwrap(), entry.parse_divisor("3H").unwrap()];
    let rep = ihc_verdict(&entry.fan, &hs, &[]).unwrap();
    // rank 3 + 3 + 4 = 10 = dim Gr(2, 7)
    assert_eq!(rep.classes[0].count().cloned(), Some(oracle(0, &[0; 7], &[(2, 0), (2, 0), (3, 0)])));
}
