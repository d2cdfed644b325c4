use super::*;
use crate::exactnum::linalg::nullspace;
use proptest::prelude::*;

fn r(v: i64) -> Rational {
    Rational::from(v)
}

fn ints(v: &[Rational]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().unwrap()).collect()
}

/// Roots predicted by factoring the generating function of `u`:
/// `s = m₀ + m₁ω + m₂ω²`, `t = conj(s)`, `m₀ + m₁ + m₂ = N`.
fn factorization_roots(degree: usize) -> BTreeSet<(HalfEisenstein, HalfEisenstein)> {
    let n = degree as i64;
    let mut out = BTreeSet::new();
    for m0 in 0..=n {
        for m1 in 0..=n - m0 {
            let m2 = n - m0 - m1;
            let s = HalfEisenstein::new(2 * m0 - m1 - m2, m1 - m2);
            out.insert((s, s.conj()));
        }
    }
    out
}

#[test]
fn secular_dets_examples() {
    assert_eq!(secular_dets(1, r(1), r(1)), (r(0), r(0)));
    assert_eq!(secular_dets(2, r(2), r(2)), (r(0), r(0)));
    // Both determinants vanish at the origin for N = 1 ...
    assert_eq!(secular_dets(1, r(0), r(0)), (r(0), r(0)));
    // ... but the full 3x2 system has no kernel there.
    let q0 = build_split(1, r(0), r(0)).q0_dense();
    assert_eq!(rank(&q0), 2);
    assert!(kernel_vector(1, &r(0), &r(0)).is_none());
}

#[test]
fn n1_blocks_are_explicit() {
    // top [[s,1],[t,s]], bottom [[t,s],[1,t]]
    let (d1, d2) = secular_dets(1, r(3), r(5));
    assert_eq!(d1, r(9 - 5));
    assert_eq!(d2, r(25 - 3));
}

#[test]
fn real_roots_examples() {
    let s_of = |n: usize| -> Vec<i64> {
        real_roots(n).unwrap().iter().map(|x| x.real_values().unwrap().0.to_i64().unwrap()).collect()
    };
    assert_eq!(s_of(4), vec![4, 1, -2]);
    assert_eq!(s_of(0), vec![0]);
    assert_eq!(s_of(6), vec![6, 3, 0, -3]);
    for root in real_roots(6).unwrap() {
        assert_eq!(root.s, root.t);
        assert!(root.branch.is_some());
    }
}

#[test]
fn enumerate_n1_gives_cube_roots_of_unity() {
    let roots = enumerate_roots(1).unwrap();
    let s: Vec<HalfEisenstein> = roots.iter().map(|x| x.s).collect();
    assert_eq!(
        s,
        vec![HalfEisenstein::new(2, 0), HalfEisenstein::new(-1, 1), HalfEisenstein::new(-1, -1)]
    );
    for x in &roots {
        let z = x.s.to_field();
        assert_eq!(&(&z * &z) * &z, EisensteinRational::real(r(1)));
    }
}

#[test]
fn enumerate_n2_matches_the_table() {
    let roots = enumerate_roots(2).unwrap();
    let pq: Vec<(i64, i64)> = roots.iter().map(|x| (x.s.p, x.s.q)).collect();
    assert_eq!(pq, vec![(4, 0), (1, 1), (1, -1), (-2, 0), (-2, 2), (-2, -2)]);
    for x in &roots {
        if x.is_real() {
            assert_eq!(x.s, x.t);
        }
    }
}

#[test]
fn root_counts_and_closed_form_structure() {
    for n in 0..=7 {
        let cert = certify_roots(n).unwrap();
        assert_eq!(cert.roots.len(), (n + 1) * (n + 2) / 2, "N = {n}");
        assert_eq!(cert.resultant_degree, cert.roots.len());
        let got: BTreeSet<_> = cert.roots.iter().map(|x| (x.s, x.t)).collect();
        assert_eq!(got, factorization_roots(n));
        for x in &cert.roots {
            assert!(cert.roots.contains(&x.conj()));
            let (d1, d2) = secular_dets(n, x.s.to_field(), x.t.to_field());
            assert!(d1.is_zero() && d2.is_zero());
        }
    }
}

#[test]
fn zero_coefficient_examples() {
    let u = |n, s: i64| {
        let root = RootPair::from_parts(n, HalfEisenstein::from_int(s), HalfEisenstein::from_int(s));
        ints(&zero_coefficients(&root).unwrap().entries)
    };
    assert_eq!(u(2, 2), vec![1, -2, 1]);
    assert_eq!(u(4, -2), vec![1, 2, 3, 2, 1]);
    assert_eq!(u(6, 0), vec![1, 0, 0, -2, 0, 0, 1]);
}

#[test]
fn zero_coefficients_rejects_non_roots() {
    let bogus = RootPair::from_parts(3, HalfEisenstein::from_int(1), HalfEisenstein::from_int(1));
    assert!(matches!(zero_coefficients(&bogus), Err(QesError::NotARoot { .. })));
    let complex = enumerate_roots(2).unwrap()[1];
    assert!(matches!(zero_coefficients(&complex), Err(QesError::InvalidArgument(_))));
    let u = zero_coefficients_complex(&complex).unwrap();
    let q = build_split(2, complex.s.to_field(), complex.t.to_field()).q0_dense();
    assert!(crate::exactnum::linalg::mat_vec(&q, &u).iter().all(|v| v.is_zero()));
}

#[test]
fn closed_form_examples() {
    let c = |n, k| ints(closed_form_wavefunction(n, k).unwrap().coeffs());
    assert_eq!(c(4, 1), vec![1, -1, 0, -1, 1]);
    assert_eq!(c(4, 2), vec![1, 2, 3, 2, 1]);
    assert_eq!(c(3, 0), vec![1, -3, 3, -1]);
    assert!(closed_form_wavefunction(3, 2).is_err());
}

#[test]
fn pascal_examples() {
    let rows = pascal_ground(6);
    let as_i64 = |row: &Vec<BigInt>| row.iter().map(|v| i64::try_from(v).unwrap()).collect::<Vec<_>>();
    assert_eq!(as_i64(&rows[0]), vec![1]);
    assert_eq!(as_i64(&rows[4]), vec![1, 4, 10, 16, 19, 16, 10, 4, 1]);
    assert_eq!(as_i64(&rows[6]), vec![1, 6, 21, 50, 90, 126, 141, 126, 90, 50, 21, 6, 1]);
    for (k, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), 2 * k + 1);
    }
}

#[test]
fn binomial_degeneration() {
    for n in 0..=10usize {
        let u = zero_coefficients(&RootPair::real(n, 0).unwrap()).unwrap();
        let mut binom = 1i64;
        for (k, e) in u.entries.iter().enumerate() {
            let sign = if (n + k) % 2 == 0 { 1 } else { -1 };
            // normalized with u₀ = 1, so the overall sign is (-1)^N
            let expect = sign * binom * if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(e, &r(expect));
            binom = binom * (n - k) as i64 / (k as i64 + 1);
        }
        // two-term rule: C(N,k) = C(N-1,k) + C(N-1,k-1) up to sign
        if n >= 1 {
            let prev = zero_coefficients(&RootPair::real(n - 1, 0).unwrap()).unwrap().entries;
            for k in 0..=n {
                let a = prev.get(k).cloned().unwrap_or_default();
                let b = if k >= 1 { prev[k - 1].clone() } else { r(0) };
                assert_eq!(u.entries[k], &a - &b);
            }
        }
    }
}

#[test]
fn reversal_structure_at_s_equals_t() {
    for n in 0..=8usize {
        for s in [-3i64, 0, 2, 7] {
            let q = build_split(n, r(s), r(s)).q0_dense();
            for i in 0..n + 2 {
                for j in 0..=n {
                    assert_eq!(q[n + 1 - i][n - j], q[i][j]);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn real_kernel_is_one_dimensional(n in 0usize..=12, pick in 0usize..7) {
        let branch = pick % (n / 2 + 1);
        let root = RootPair::real(n, branch).unwrap();
        let (s, t) = root.real_values().unwrap();
        let q = build_split(n, s, t).q0_dense();
        let kernel = nullspace(&q);
        prop_assert_eq!(kernel.len(), 1);
        let u = zero_coefficients(&root).unwrap();
        prop_assert!(crate::exactnum::linalg::mat_vec(&q, &u.entries).iter().all(|v| v.is_zero()));
        prop_assert_eq!(&u.entries[0], &r(1));
    }

    #[test]
    fn product_form_and_nodes(n in 0usize..=12, pick in 0usize..7) {
        let branch = pick % (n / 2 + 1);
        let u = zero_coefficients(&RootPair::real(n, branch).unwrap()).unwrap();
        let closed = closed_form_wavefunction(n, branch).unwrap();
        // both have u₀ = 1, so proportional means equal
        prop_assert_eq!(closed.coeffs(), &u.entries[..]);
        prop_assert_eq!(nodal_multiplicity(&closed), n - 2 * branch);
    }

    #[test]
    fn pascal_rows_are_ground_states(k in 0usize..=9) {
        let row = pascal_ground(k).pop().unwrap();
        let u = zero_coefficients(&RootPair::real(2 * k, k).unwrap()).unwrap();
        let expect: Vec<Rational> = row.iter().map(|v| Rational::from_integer(v.clone())).collect();
        prop_assert_eq!(&u.entries, &expect);
    }

    #[test]
    fn non_roots_have_full_rank(n in 1usize..=6, p in -12i64..=12, q in -6i64..=6) {
        let z = HalfEisenstein::new(p, q);
        let predicted = factorization_roots(n).iter().any(|(s, t)| *s == z && *t == z.conj());
        let has_kernel = kernel_vector(n, &z.to_field(), &z.conj().to_field()).is_some();
        prop_assert_eq!(predicted, has_kernel);
    }
}

#[test]
fn modular_partners_agree_with_exact_gcd() {
    for n in 0..=5usize {
        let (f, h) = consistency_rows(n);
        let modular = ModularRows::new(&f, &h);
        for root in enumerate_roots(n).unwrap() {
            let exact = exact_partners(&f, &h, root.s, 2 * n as i64, n).unwrap();
            assert_eq!(exact, vec![root.t]);
            let verdict = modular.verdict(root.s, 2 * n as i64);
            if n == 0 {
                // f = s loses its only coefficient at s = 0
                assert_eq!(verdict, ModularVerdict::Unclear);
            } else {
                assert_eq!(verdict, ModularVerdict::Single(root.t));
            }
        }
    }
}
