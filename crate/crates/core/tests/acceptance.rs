//! End-to-end acceptance checks. Each test prints one `criterion N: PASS|FAIL` line.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use telesum_core::asymptotics::{k_exponent, Constraint, Exponent};
use telesum_core::corpus::{builtin_record, verify_record};
use telesum_core::gamma::GammaQuotient;
use telesum_core::hyperterm::{HyperTerm, Poch, SeriesSpec};
use telesum_core::linarg::LinArg;
use telesum_core::numeric::complex::bits_for_digits;
use telesum_core::numeric::probe::{family_probe, ProbeTarget};
use telesum_core::numeric::series::Point;
use telesum_core::numeric::verify::{verify_identity, VerifyOptions};
use telesum_core::parse::{parse_gamma_quotient, parse_ratfunc, parse_series, parse_term};
use telesum_core::pipeline::{derive_identity, Strategy};
use telesum_core::proof::{check_proof, prove, ProofJson};
use telesum_core::ratfunc::RatFunc;
use telesum_core::symbol::Var;
use telesum_core::telescoper::{gosper, verify_certificate, verify_gosper, wz_certificate, zeilberger, Recurrence};
use telesum_core::Q;

fn report(n: u32, passed: bool, detail: impl AsRef<str>) {
    println!("criterion {n}: {} ({})", if passed { "PASS" } else { "FAIL" }, detail.as_ref());
    assert!(passed, "criterion {n} failed: {}", detail.as_ref());
}

fn rf(s: &str) -> RatFunc {
    parse_ratfunc(s).unwrap()
}

fn gq(s: &str) -> GammaQuotient {
    parse_gamma_quotient(s).unwrap()
}

fn var(name: &str) -> Var {
    Var::p(name)
}

/// True when `ours = λ · expected` componentwise for one λ free of `n` and `k`.
fn jointly_proportional(rec: &Recurrence, coeffs: &[RatFunc], cert: &RatFunc) -> bool {
    if rec.coeffs.len() != coeffs.len() || coeffs.iter().any(RatFunc::is_zero) {
        return false;
    }
    let lambda = &rec.coeffs[0] / &coeffs[0];
    if lambda.contains_var(Var::N) || lambda.contains_var(Var::K) {
        return false;
    }
    rec.coeffs.iter().zip(coeffs).all(|(c, e)| *c == &lambda * e) && rec.certificate == &lambda * cert
}

/// Equal as hypergeometric series: parameter lists compared as multisets.
fn same_series(x: &SeriesSpec, y: &SeriesSpec) -> bool {
    let sorted = |v: &[LinArg]| {
        let mut v = v.to_vec();
        v.sort();
        v
    };
    sorted(&x.upper) == sorted(&y.upper) && sorted(&x.lower) == sorted(&y.lower) && x.argument == y.argument
}

fn describe(rec: &Recurrence) -> String {
    let cs: Vec<String> = rec.coeffs.iter().map(|c| c.to_string()).collect();
    format!("coeffs [{}], certificate {}", cs.join(", "), rec.certificate)
}

const SAAL_TERM: &str = "poch(a,k)*poch(b,k)*poch(c+n,k)/(poch(e,k)*poch(a+b+c-e+1+n,k)*fac(k))";
const SAAL: &str = "pFq([a,b,c],[e,a+b+c-e+1],1)";

#[test]
fn criterion_1_saalschutzian_recurrence() {
    let t0 = Instant::now();
    let t = parse_term(SAAL_TERM).unwrap();
    let rec = zeilberger(&t, 3).unwrap();
    let elapsed = t0.elapsed();
    let expected = [rf("-(c-e+n+1)*(b+c-e+a+n+1)"), rf("(c-e+a+n+1)*(b+c-e+n+1)")];
    let cert = rf("(b+c-e+a+n+1)*(e+k-1)*k/(c+n)");
    let ok = jointly_proportional(&rec, &expected, &cert) && verify_certificate(&t, &rec) && elapsed < Duration::from_secs(10);
    report(1, ok, format!("{} in {elapsed:?}", describe(&rec)));
}

#[test]
fn criterion_2_gauss_wz_certificate() {
    let f = parse_term("poch(a,k)*poch(b,k)*poch(c-a,n)*poch(c-b,n)/(poch(c+n,k)*fac(k)*poch(c,n)*poch(c-a-b,n))").unwrap();
    let r = wz_certificate(&f).unwrap();
    let rec = Recurrence { coeffs: vec![RatFunc::int(-1), RatFunc::one()], certificate: r.clone() };
    let ok = r == rf("k/(c+n-a-b)") && verify_certificate(&f, &rec);
    report(2, ok, format!("R = {r}"));
}

#[test]
fn criterion_3_unit_upper_recurrence() {
    let t = parse_term("poch(a,k)*poch(b+n,k)/(poch(d+n,k)*poch(e,k))").unwrap();
    let rec = zeilberger(&t, 3).unwrap();
    // Coefficients of f(n,k) and f(n+1,k) as printed for this family.
    let expected = [rf("-(n+b-e+1)*(n+d)"), rf("(a-n-d)*(n+b)")];
    let cert = rf("-(n+d)*(e+k-1)");
    let printed_holds = verify_certificate(&t, &Recurrence { coeffs: expected.to_vec(), certificate: cert.clone() });
    let ok = verify_certificate(&t, &rec) && jointly_proportional(&rec, &expected, &cert);
    report(
        3,
        ok,
        format!("{}; printed triple satisfies the telescoping relation: {printed_holds}", describe(&rec)),
    );
}

#[test]
fn criterion_4_two_term_saalschutzian() {
    let t0 = Instant::now();
    let d = derive_identity(&parse_series(SAAL).unwrap(), var("c")).unwrap();
    let id = &d.identity;
    let lhs_expected: [(GammaQuotient, SeriesSpec); 2] = [
        (
            gq("Gamma(a+c-e+1)*Gamma(b+c-e+1)/(Gamma(c-e+1)*Gamma(a+b+c-e+1))"),
            parse_series(SAAL).unwrap(),
        ),
        (
            gq("Gamma(e)*Gamma(a+c-e+1)*Gamma(b+c-e+1)/(Gamma(a)*Gamma(b)*Gamma(c+1)*Gamma(c-e+2))"),
            parse_series("pFq([a+c-e+1,b+c-e+1,1],[c+1,c-e+2],1)").unwrap(),
        ),
    ];
    let structure = id.lhs.len() == 2
        && id.lhs.iter().zip(&lhs_expected).all(|((c, s), (ec, es))| same_series(s, es) && c.equivalent(ec))
        && id.rhs.equivalent(&gq("Gamma(e)*Gamma(e-a-b)/(Gamma(e-a)*Gamma(e-b))"))
        && id.constraints.contains(&Constraint::parse("Re(e - a - b) > 0").unwrap());
    let opts = VerifyOptions { digits: 40, tol: 1e-25, samples: 20, seed: 42, ..Default::default() };
    let r = verify_identity(id, &opts);
    let elapsed = t0.elapsed();
    let ok = structure && r.passed && r.points.len() == 20 && elapsed < Duration::from_secs(60);
    report(
        4,
        ok,
        format!("structure {structure}, 20 points max rel error {:e}, {elapsed:?}; {id}", r.max_rel_error),
    );
}

#[test]
fn criterion_5_gauss_constancy() {
    let d = derive_identity(&parse_series("pFq([a,b],[c],1)").unwrap(), var("c")).unwrap();
    let id = &d.identity;
    let trace = d.strategy == Strategy::Constancy
        && id.trace.has_rule("constancy")
        && id.trace.steps.iter().any(|s| s.detail.contains("delta_(k,0)"));
    let rhs = id.rhs.equivalent(&gq("Gamma(c)*Gamma(c-a-b)/(Gamma(c-a)*Gamma(c-b))"));
    let constrained = id.constraints.contains(&Constraint::parse("Re(c - a - b) > 0").unwrap());
    let r = verify_identity(id, &VerifyOptions { digits: 40, tol: 1e-25, samples: 20, ..Default::default() });
    report(
        5,
        trace && rhs && constrained && r.passed,
        format!("trace {trace}, rhs {rhs}, max rel error {:e} over {} points", r.max_rel_error, r.points.len()),
    );
}

#[test]
fn criterion_6_corpus() {
    let opts = VerifyOptions { digits: 40, tol: 1e-20, samples: 10, ..Default::default() };
    let expect_constraints: [(&str, &[&str]); 5] = [
        ("terminating-saalschutz", &["m in {0,1,2,...}"]),
        ("two-term-saalschutz", &[]),
        ("unit-upper-pair", &["Re(d + e - a - b - 1) > 0", "Re(a - e + 1) > 0"]),
        ("saalschutz-to-unit-upper", &["Re(a) > 0"]),
        ("chained-transform", &["Re(1 + b - e) > 0", "Re(e - a - b) > 0"]),
    ];
    let mut ok = true;
    let mut details = Vec::new();
    for (name, cs) in expect_constraints {
        let rec = builtin_record(name).expect("builtin record");
        let stated: Vec<Constraint> = cs.iter().map(|c| Constraint::parse(c).unwrap()).collect();
        let parsed = rec.identity.to_statement().unwrap().constraints;
        let res = verify_record(&rec, &opts).unwrap();
        let exact_ok = match (name, &res.exact) {
            ("terminating-saalschutz", Some(e)) => e.agreed == [0, 1, 2, 3, 4, 5],
            ("terminating-saalschutz", None) => false,
            _ => true,
        };
        let pass = res.passed && exact_ok && res.report.points.len() == 10 && parsed == stated;
        ok &= pass;
        details.push(format!("{name} {} (max rel {:e})", if pass { "ok" } else { "failed" }, res.report.max_rel_error));
    }
    report(6, ok, details.join(", "));
}

#[test]
fn criterion_7_limit_probes() {
    let p = bits_for_digits(30);
    let ns = [10, 100, 1000];
    let family = vec![(GammaQuotient::one(), parse_series("pFq([a,b,c+n],[e,a+b+c-e+1+n],1)").unwrap())];
    let target = ProbeTarget::Series(vec![(GammaQuotient::one(), parse_series("pFq([a,b],[e],1)").unwrap())]);
    // Re(e - a - b) > 0 at each point, and e - a - b != 1 so the family does
    // not collapse onto its limit.
    let points: [[(&str, f64); 4]; 5] = [
        [("a", 0.3), ("b", 0.4), ("c", 0.7), ("e", 2.0)],
        [("a", -0.5), ("b", 1.25), ("c", 1.5), ("e", 2.0)],
        [("a", 1.2), ("b", 0.3), ("c", -0.4), ("e", 2.6)],
        [("a", 0.75), ("b", -1.3), ("c", 2.2), ("e", 0.9)],
        [("a", 2.5), ("b", 0.5), ("c", 0.35), ("e", 3.8)],
    ];
    let mut ok = true;
    let mut details = Vec::new();
    for pt in &points {
        let r = family_probe(&family, &target, &Point::from_reals(pt), &ns, f64::INFINITY, p).unwrap();
        let strict = r.errors.windows(2).all(|e| e[1] < e[0]);
        ok &= strict;
        details.push(format!("{:.2e}/{:.2e}/{:.2e}", r.errors[0], r.errors[1], r.errors[2]));
    }
    let coef = gq("poch(b,n)*poch(d-a,n)/(poch(d,n)*poch(b-e+1,n))");
    let unit = vec![(coef, parse_series("pFq([a,b+n,1],[d+n,e],1)").unwrap())];
    let closed = ProbeTarget::Closed(gq(
        "Gamma(d)*Gamma(e)*Gamma(a-e+1)*Gamma(b-e+1)*Gamma(d+e-a-b-1)/(Gamma(a)*Gamma(b)*Gamma(d-a)*Gamma(d-b))",
    ));
    let pt = Point::from_reals(&[("a", 2.0), ("b", 0.5), ("d", 3.0), ("e", 1.1)]);
    let r = family_probe(&unit, &closed, &pt, &ns, 1e-3, p).unwrap();
    let unit_ok = r.errors.windows(2).all(|e| e[1] < e[0]) && r.passed;
    report(
        7,
        ok && unit_ok,
        format!("lemma errors {}; unit-upper errors {:?}", details.join(", "), r.errors),
    );
}

fn random_linear(rng: &mut ChaCha8Rng) -> String {
    let shift = rng.gen_range(-3..=3);
    if rng.gen_bool(0.4) {
        format!("(k+a+{shift})")
    } else {
        format!("(k+{shift})")
    }
}

fn random_ratio(rng: &mut ChaCha8Rng) -> RatFunc {
    loop {
        let num: Vec<String> = (0..rng.gen_range(0..=2)).map(|_| random_linear(rng)).collect();
        let den: Vec<String> = (0..rng.gen_range(0..=2)).map(|_| random_linear(rng)).collect();
        let scale = ["1", "2", "-1", "1/3", "-5/2"][rng.gen_range(0..5)];
        let prod = |fs: &[String]| if fs.is_empty() { "1".to_string() } else { fs.join("*") };
        let r = rf(&format!("{scale}*{}/({})", prod(&num), prod(&den)));
        let t_num = &r.shift(Var::K, 1) - &RatFunc::one();
        if !r.is_zero() && !(&r - &RatFunc::one()).is_zero() && !t_num.is_zero() {
            return r;
        }
    }
}

fn rand_shift(rng: &mut ChaCha8Rng) -> Q {
    loop {
        let q = Q::new(rng.gen_range(-12..=12).into(), 4.into());
        if !(q.is_integer() && q <= Q::from_integer(0.into())) {
            return q;
        }
    }
}

fn random_term(rng: &mut ChaCha8Rng, with_param: bool) -> HyperTerm {
    let count = rng.gen_range(1..=3);
    let mk = |rng: &mut ChaCha8Rng| {
        let mut arg = LinArg::constant(rand_shift(rng));
        if with_param && rng.gen_bool(0.5) {
            arg = &arg + &LinArg::param(var(["a", "b"][rng.gen_range(0..2)]));
        }
        Poch::k(arg)
    };
    let numer = (0..count).map(|_| mk(rng)).collect();
    let denom = (0..count).map(|_| mk(rng)).collect();
    HyperTerm::new(numer, denom, vec![], RatFunc::one())
}

/// `log|t(2K)/t(K)| / log 2`, accumulated in floating point.
fn loglog_slope(t: &HyperTerm, kk: i64) -> f64 {
    let r = t.shift_quotient(Var::K);
    let mut acc = 0.0;
    for k in kk..2 * kk {
        let q = r.substitute_rational(Var::K, &Q::from_integer(k.into())).unwrap().as_constant().unwrap();
        acc += (num_f64(&q)).abs().ln();
    }
    acc / 2f64.ln()
}

fn num_f64(q: &Q) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap()
}

#[test]
fn criterion_8_property_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);

    // (i) t = g(k+1) - g(k) for hypergeometric g with ratio rho has ratio rho(k)(rho(k+1)-1)/(rho(k)-1).
    let mut recovered = 0;
    for _ in 0..200 {
        let rho = random_ratio(&mut rng);
        let r = &(&rho * &(&rho.shift(Var::K, 1) - &RatFunc::one())) / &(&rho - &RatFunc::one());
        let g = gosper(&r);
        if g.summable && g.certificate.as_ref().is_some_and(|c| verify_gosper(&r, c)) {
            recovered += 1;
        }
    }
    let i_ok = recovered == 200;

    // (ii)
    let ii_ok = !gosper(&rf("(k+1)/(k+2)")).summable;

    // (iii)
    let mut iii_ok = true;
    let mut worst_slope = 0f64;
    for _ in 0..50 {
        let t1 = random_term(&mut rng, true);
        let t2 = random_term(&mut rng, true);
        let (e1, e2) = (k_exponent(&t1).unwrap(), k_exponent(&t2).unwrap());
        let e12 = k_exponent(&t1.mul(&t2)).unwrap();
        iii_ok &= e12.power == &e1.power + &e2.power && e12.exponent() == Exponent::Linear(&e1.power + &e2.power);

        let t = random_term(&mut rng, false);
        let Exponent::Linear(pw) = k_exponent(&t).unwrap().exponent() else {
            iii_ok = false;
            continue;
        };
        let expect = num_f64(pw.as_constant().unwrap());
        let dev = (loglog_slope(&t, 4000) - expect).abs();
        worst_slope = worst_slope.max(dev);
        iii_ok &= dev < 1e-2;
    }

    // (iv)
    let inputs = [
        ("pFq([a,b],[c],1)", "c"),
        (SAAL, "c"),
        (SAAL, "a"),
        ("pFq([-m,b,c],[e,-m+b+c-e+1],1)", "m"),
        ("pFq([a,b,1],[d,e],1)", "d"),
    ];
    let opts = VerifyOptions { digits: 30, tol: 1e-20, samples: 3, ..Default::default() };
    let mut iv_ok = true;
    for (series, shift) in inputs {
        let proof = prove(&parse_series(series).unwrap(), var(shift), Some(&opts)).unwrap();
        let json = proof.to_json();
        let back = ProofJson::from_json(&json).unwrap();
        let check = check_proof(&back);
        iv_ok &= check.passed && back.to_json() == json;
    }

    report(
        8,
        i_ok && ii_ok && iii_ok && iv_ok,
        format!(
            "(i) {recovered}/200 recovered, (ii) {ii_ok}, (iii) {iii_ok} worst slope deviation {worst_slope:.1e}, (iv) {iv_ok}"
        ),
    );
}
