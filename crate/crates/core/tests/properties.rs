use momx::cmx::connected_moments;
use momx::expmatch::{match_expansion, reconstruct_taylor, SeriesCoefficients};
use momx::linalg::{hankel, is_positive_definite};
use momx::problems::{load_problem, serialize, ProblemSpec};
use momx::qstate::{apply_hamiltonian, inner_product, moment_sequence, rat};
use momx::real::format_rational_sig;
use momx::{Complex, Error, ExactRational, GaussianPolyState, PolynomialHamiltonian, PrecisionContext, Real};
use num_bigint::BigInt;
use proptest::prelude::*;

fn ctx() -> PrecisionContext {
    PrecisionContext::new(60).unwrap()
}

fn small_rat() -> impl Strategy<Value = ExactRational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn positive_rat() -> impl Strategy<Value = ExactRational> {
    (1i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn state() -> impl Strategy<Value = GaussianPolyState> {
    (prop::collection::vec(small_rat(), 1..=4), positive_rat())
        .prop_filter("nonzero", |(c, _)| c.iter().any(|x| *x != rat(0, 1)))
        .prop_map(|(c, a)| GaussianPolyState::new(c, a).unwrap())
}

/// Confining potentials `c0 + c1 x + c2 x² + c4 x⁴` with `c4 > 0`.
fn quartic() -> impl Strategy<Value = PolynomialHamiltonian> {
    (small_rat(), small_rat(), small_rat(), positive_rat())
        .prop_map(|(a, b, c, d)| PolynomialHamiltonian::new(vec![a, b, c, rat(0, 1), d]).unwrap())
}

fn with_alpha(s: &GaussianPolyState, alpha: &ExactRational) -> GaussianPolyState {
    GaussianPolyState::new(s.coeffs().to_vec(), alpha.clone()).unwrap()
}

/// Exact `F_k = Σ a_j x_j^k`, `k < 2n`.
fn forward(exps: &[ExactRational], amps: &[ExactRational]) -> Vec<ExactRational> {
    (0..2 * exps.len())
        .map(|k| exps.iter().zip(amps).map(|(x, a)| a * num_traits::pow(x.clone(), k)).sum())
        .collect()
}

fn rel_err(a: &Complex, b: &Complex) -> f64 {
    (a.dist(b) / b.abs()).to_f64()
}

/// Independent half-even rounding of `digits` (a decimal integer string
/// read as `d.ddd…`) to ten significant digits.
fn round_ten(digits: &str) -> String {
    let (head, tail) = digits.split_at(10);
    let mut n: u64 = head.parse().unwrap();
    let first = tail.as_bytes()[0] - b'0';
    let rest_zero = tail[1..].bytes().all(|b| b == b'0');
    if first > 5 || (first == 5 && !rest_zero) || (first == 5 && rest_zero && n % 2 == 1) {
        n += 1;
    }
    let s = n.to_string();
    if s.len() > 10 {
        "10.00000000".to_string()
    } else {
        format!("{}.{}", &s[..1], &s[1..])
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn inner_product_is_symmetric(a in state(), b in state()) {
        prop_assert_eq!(inner_product(&a, &b), inner_product(&b, &a));
    }

    #[test]
    fn hamiltonian_is_symmetric(h in quartic(), a in state(), b in state()) {
        let lhs = inner_product(&a, &apply_hamiltonian(&h, &b));
        let rhs = inner_product(&apply_hamiltonian(&h, &a), &b);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn harmonic_eigenstates_are_fixed(w in positive_rat(), c in small_rat()) {
        prop_assume!(c != rat(0, 1));
        // -d²/dx² + ω²x²: exp(-ωx²/2) and x·exp(-ωx²/2) with E = ω, 3ω
        let h = PolynomialHamiltonian::new(vec![rat(0, 1), rat(0, 1), &w * &w]).unwrap();
        let alpha = &w / rat(2, 1);
        let g = GaussianPolyState::new(vec![c.clone()], alpha.clone()).unwrap();
        prop_assert_eq!(apply_hamiltonian(&h, &g), g.scaled(&w));
        let e = GaussianPolyState::new(vec![rat(0, 1), c], alpha).unwrap();
        prop_assert_eq!(apply_hamiltonian(&h, &e), e.scaled(&(&w * rat(3, 1))));
    }

    #[test]
    fn moment_hankel_is_positive_definite(h in quartic(), s in state()) {
        let nu = moment_sequence(&h, &s, 8).unwrap().normalized();
        for n in 1..=4 {
            prop_assert!(is_positive_definite(&hankel(&nu, 0, n)), "order {}", n);
        }
    }

    #[test]
    fn shifting_the_potential_moves_only_the_first_cumulant(h in quartic(), s in state(), c in small_rat()) {
        let mut v = h.potential().to_vec();
        v[0] += &c;
        let shifted = PolynomialHamiltonian::new(v).unwrap();
        let i0 = connected_moments(&moment_sequence(&h, &s, 7).unwrap().normalized(), 7).unwrap();
        let i1 = connected_moments(&moment_sequence(&shifted, &s, 7).unwrap().normalized(), 7).unwrap();
        prop_assert_eq!(i1.get(1), &(i0.get(1) + &c));
        for k in 2..=7 {
            prop_assert_eq!(i1.get(k), i0.get(k));
        }
    }

    #[test]
    fn normalized_moments_ignore_trial_scale(h in quartic(), s in state(), c in small_rat()) {
        prop_assume!(c != rat(0, 1));
        let a = moment_sequence(&h, &s, 6).unwrap().normalized();
        let b = moment_sequence(&h, &s.scaled(&c), 6).unwrap().normalized();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn differing_exponents_inner_product_matches_shared(a in state(), b in state(), x in positive_rat()) {
        // Moving exponent mass between bra and ket leaves the integrand unchanged.
        let total = a.alpha() + b.alpha();
        let a2 = with_alpha(&a, &(&total * &x / (&x + rat(1, 1))));
        let b2 = with_alpha(&b, &(&total / (&x + rat(1, 1))));
        prop_assert_eq!(inner_product(&a, &b), inner_product(&a2, &b2));
    }

    #[test]
    fn forward_generation_round_trip(
        raw in prop::collection::btree_set(1i64..=200, 1..=4),
        amp in prop::collection::vec(1i64..=1000, 4),
    ) {
        let c = ctx();
        let exps: Vec<ExactRational> = raw.iter().map(|&x| rat(x, 10)).collect();
        let amps: Vec<ExactRational> = amp[..exps.len()].iter().map(|&a| rat(a, 100)).collect();
        let m = match_expansion(&SeriesCoefficients::exact(forward(&exps, &amps)).unwrap(), &c).unwrap();
        prop_assert_eq!(m.terms.len(), exps.len());
        for (t, (x, a)) in m.terms.iter().zip(exps.iter().zip(&amps)) {
            prop_assert!(rel_err(&t.exponent, &Complex::from_real(c.real(x))) < 1e-30);
            prop_assert!(rel_err(&t.amplitude, &Complex::from_real(c.real(a))) < 1e-30);
        }
    }

    #[test]
    fn taylor_reconstruction_reproduces_input(f in prop::collection::vec(small_rat(), 2..=8)) {
        let c = ctx();
        let n = f.len() / 2;
        let f = f[..2 * n].to_vec();
        let series = SeriesCoefficients::exact(f.clone()).unwrap();
        match match_expansion(&series, &c) {
            Ok(m) if m.effective_order == n => {
                let rec = reconstruct_taylor(&m, 2 * n - 1);
                let scale = f.iter().map(|x| c.real(x).abs()).fold(Real::one(c.bits()), Real::max);
                for (r, want) in rec.iter().zip(&f) {
                    let d = (r.dist(&Complex::from_real(c.real(want))) / scale.clone()).to_f64();
                    prop_assert!(d < 1e-40, "residual {:e}", d);
                }
            }
            Ok(_) | Err(Error::IllConditioned { .. }) | Err(Error::NoConvergence { .. }) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn complex_exponents_come_in_conjugate_pairs(f in prop::collection::vec(small_rat(), 6)) {
        let c = ctx();
        let Ok(m) = match_expansion(&SeriesCoefficients::exact(f).unwrap(), &c) else { return Ok(()) };
        for t in &m.terms {
            let partner = m.terms.iter().find(|u| u.exponent == t.exponent.conj());
            prop_assert!(partner.is_some(), "no conjugate for {:?}", t.exponent);
            prop_assert_eq!(&partner.unwrap().amplitude, &t.amplitude.conj());
        }
    }

    #[test]
    fn half_even_rounding(n in 10_000_000_000u64..100_000_000_000_000) {
        let digits = n.to_string();
        let scale = num_traits::pow(BigInt::from(10), digits.len() - 1);
        let q = ExactRational::new(BigInt::from(n), scale);
        let want = round_ten(&digits);
        prop_assert_eq!(format_rational_sig(&q, 10), want.clone());
        prop_assert_eq!(format_rational_sig(&-q, 10), format!("-{want}"));
    }

    #[test]
    fn problem_files_round_trip(h in quartic(), s in state(), name in "[a-z][a-z0-9_]{0,8}") {
        let spec = ProblemSpec { name, hamiltonian: h, trial: s, references: vec![] };
        let back = load_problem(&serialize(&spec)).unwrap();
        prop_assert_eq!(back.hamiltonian, spec.hamiltonian);
        prop_assert_eq!(back.trial, spec.trial);
        prop_assert_eq!(back.name, spec.name);
    }
}

#[test]
fn half_even_ties() {
    let q = |n: i64, d: i64| format_rational_sig(&rat(n, d), 10);
    assert_eq!(q(10_000_000_005, 10_000_000_000), "1.000000000");
    assert_eq!(q(10_000_000_015, 10_000_000_000), "1.000000002");
    assert_eq!(q(99_999_999_995, 10_000_000_000), "10.00000000");
}
