mod common;

use common::coprime_samples;
use whitehead_core::reps::count_prep_classes;
use whitehead_core::roots::RootTolerances;
use whitehead_core::seminorm::{
    evaluate_norm, seifert_character_counts, seifert_norms, seminorm_profile, solve_linear_system, SystemRange,
};
use whitehead_core::slopes::Slope;

fn in_scope(p: i64, q: i64) -> bool {
    p % 2 != 0 && p != 3 * q
}

/// Boundary slopes `4, beta2, 0` as unreduced `(num, den)`.
fn boundary(p: i64, q: i64) -> [(i64, i64); 3] {
    let beta2 = if p < 0 {
        (4 * q, p)
    } else if p < 2 * q {
        (2 * p + 4 * q, p)
    } else if p < 4 * q {
        (-p + 6 * q, q)
    } else {
        (4 * q, p - 2 * q)
    };
    [(4, 1), beta2, (0, 1)]
}

fn delta(a: (i64, i64), b: (i64, i64)) -> i64 {
    let g = num_integer::Integer::gcd(&b.0, &b.1);
    (a.0 * (b.1 / g) - a.1 * (b.0 / g)).abs()
}

/// Number of p-rep classes for `p` odd.
fn table4(p: i64, q: i64) -> i64 {
    if p < 0 {
        3 * p.abs() + 4 * q - 3
    } else if p < 4 * q {
        p + 4 * q - 3
    } else {
        3 * p - 4 * q - 3
    }
}

/// All even non-negative `(a1, a2, a3)` with `sum a_j delta(sigma, beta_j) = s + offset(sigma)`
/// for `sigma = 1, 2, 3, 1/0`.
fn integer_solutions(p: i64, q: i64, s: i64) -> Vec<[i64; 3]> {
    let beta = boundary(p, q);
    let offsets = [2 * (p - 6 * q).abs() - 2, 3 * (p - 4 * q).abs() - 3, 4 * (p - 3 * q).abs() - 4];
    let row = |sigma: (i64, i64)| beta.map(|b| delta(sigma, b));
    let inf = row((1, 0));
    let mut out = Vec::new();
    for a1 in (0..=s).step_by(2) {
        for a2 in (0..=s).step_by(2) {
            let rest = s - a1 * inf[0] - a2 * inf[1];
            if rest < 0 || rest % inf[2] != 0 {
                continue;
            }
            let a = [a1, a2, rest / inf[2]];
            if a[2] % 2 != 0 {
                continue;
            }
            let ok = (1..=3).all(|k| {
                let r = row((k, 1));
                a[0] * r[0] + a[1] * r[1] + a[2] * r[2] == s + offsets[k as usize - 1]
            });
            if ok {
                out.push(a);
            }
        }
    }
    out
}

#[test]
fn brute_force_system_matches_solver() {
    let mut per_range = std::collections::BTreeMap::new();
    for (p, q) in coprime_samples(25, 8) {
        if !in_scope(p, q) {
            continue;
        }
        let s = table4(p, q);
        let sols = integer_solutions(p, q, s);
        assert_eq!(sols.len(), 1, "{p}/{q}: {sols:?}");
        let lin = solve_linear_system(p, q).unwrap();
        let [a1, a2, a3, smin] = lin.as_integers().unwrap();
        assert_eq!([a1, a2, a3], sols[0], "{p}/{q}");
        assert_eq!(smin, s);
        let profile = seminorm_profile(p, q).unwrap();
        assert_eq!(profile.a.map(|x| x as i64), sols[0]);
        assert_eq!(profile.s_min as i64, s);
        if matches!(lin.range, SystemRange::ThreeFour | SystemRange::FourSix) {
            let all: usize = (0..=s).map(|t| integer_solutions(p, q, t).len()).sum();
            assert_eq!(all, 1, "{p}/{q} should be determined without a count");
        }
        *per_range.entry(lin.range.label()).or_insert(0) += 1;
    }
    assert!(per_range.values().all(|&n| n >= 5), "{per_range:?}");
}

#[test]
fn two_three_range_needs_the_count() {
    // a second solution with a2 = 0 and smaller s survives parity
    assert_eq!(integer_solutions(5, 2, 6), vec![[6, 0, 0]]);
    assert_eq!(integer_solutions(5, 2, 10), vec![[0, 4, 2]]);
}

#[test]
fn minimal_norm_counts_preps() {
    for (p, q) in coprime_samples(15, 5) {
        if !in_scope(p, q) || p == 4 * q {
            continue;
        }
        let counts = count_prep_classes(p, q as u32, RootTolerances::default()).unwrap();
        assert_eq!(counts.total as i64, table4(p, q), "{p}/{q}");
        let profile = seminorm_profile(p, q).unwrap();
        assert_eq!(profile.s_min, counts.total);
        assert_eq!(evaluate_norm(&profile, &Slope::INFINITY), profile.s_min);
    }
}

#[test]
fn seifert_norms_from_character_counts() {
    for (p, q) in coprime_samples(25, 8) {
        if !in_scope(p, q) {
            continue;
        }
        let profile = seminorm_profile(p, q).unwrap();
        let norms = seifert_norms(p, q).unwrap();
        for sigma in 1..=3u8 {
            let direct = evaluate_norm(&profile, &Slope::integer(sigma as i64)) as i64;
            assert_eq!(direct, norms[sigma as usize - 1], "{p}/{q} at {sigma}");
            let exceptional = [6, 4, 3][sigma as usize - 1] * q == p;
            if !exceptional {
                let c = seifert_character_counts(p, q, sigma).unwrap();
                let a = c.sl2.unwrap().total;
                assert_eq!(direct, profile.s_min as i64 + 2 * a, "{p}/{q} at {sigma}");
            }
        }
    }
}

#[test]
fn spot_profiles() {
    for ((p, q), a, s) in
        [((-1, 1), [2, 2, 0], 4), ((1, 1), [0, 2, 0], 2), ((5, 1), [2, 2, 0], 8), ((7, 2), [2, 4, 2], 12)]
    {
        let profile = seminorm_profile(p, q).unwrap();
        assert_eq!((profile.a, profile.s_min), (a, s), "{p}/{q}");
    }
}
