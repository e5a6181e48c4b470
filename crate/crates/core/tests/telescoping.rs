use telesum_core::hyperterm::HyperTerm;
use telesum_core::poly::MultiPoly;
use telesum_core::parse::{parse_ratfunc, parse_term};
use telesum_core::ratfunc::RatFunc;
use telesum_core::symbol::Var;
use telesum_core::telescoper::{gosper, verify_certificate, verify_gosper, zeilberger, Recurrence};
use telesum_core::Q;

fn rf(s: &str) -> RatFunc {
    parse_ratfunc(s).unwrap()
}

fn at_a(r: &RatFunc, a: &Q) -> RatFunc {
    r.substitute_rational(Var::p("a"), a).unwrap()
}

fn value(r: &RatFunc, k: i64) -> Q {
    r.substitute_rational(Var::K, &Q::from_integer(k.into())).unwrap().as_constant().unwrap()
}

/// `Σ_{k≤K} t(k) = R(K+1) t(K+1) − R(0) t(0)` with `t(0) = 1`, at `a = 7/3`.
fn partial_sums_telescope(r: &RatFunc, cert: &RatFunc) {
    let a = Q::new(7.into(), 3.into());
    let (r, cert) = (at_a(r, &a), at_a(cert, &a));
    let mut t = Q::from_integer(1.into());
    let mut sum = Q::from_integer(0.into());
    let start = value(&cert, 0);
    for k in 0..=8 {
        sum += &t;
        t = &t * value(&r, k);
        assert_eq!(sum, value(&cert, k + 1) * &t - &start, "K = {k}");
    }
}

#[test]
fn gosper_on_differenced_terms_is_sound() {
    for rho in ["(k+a)/(k+a+2)", "2*(k+a)/(k+1)", "(k+a)*(k+1)/(k+a+3)", "-1/3*(k+2*a)"] {
        let rho = rf(rho);
        let one = RatFunc::one();
        let r = &(&rho * &(&rho.shift(Var::K, 1) - &one)) / &(&rho - &one);
        let g = gosper(&r);
        assert!(g.summable, "{r}");
        let cert = g.certificate.unwrap();
        assert!(verify_gosper(&r, &cert));
        partial_sums_telescope(&r, &cert);
    }
}

#[test]
fn gosper_factorial_multiple() {
    // Σ k·k! = (K+1)! − 1.
    let t = parse_term("k*fac(k)").unwrap();
    let r = t.shift_quotient(Var::K);
    let g = gosper(&r);
    assert_eq!(g.certificate, Some(rf("1/k")));
}

#[test]
fn gosper_rejects_non_summable() {
    for r in ["(k+1)/(k+2)", "1/(k+1)", "(k+a)*(k+b)/((k+1)*(k+c))"] {
        assert!(!gosper(&rf(r)).summable, "{r}");
    }
}

fn saalschutzian_family() -> HyperTerm {
    parse_term("poch(a,k)*poch(b,k)*poch(c+n,k)/(poch(e,k)*poch(a+b+c-e+1+n,k)*fac(k))").unwrap()
}

#[test]
fn saalschutzian_family_recurrence_is_deterministic() {
    let t = saalschutzian_family();
    let first = zeilberger(&t, 3).unwrap();
    let second = zeilberger(&t, 3).unwrap();
    assert_eq!(first, second);
    assert_eq!(first.order(), 1);
    assert!(verify_certificate(&t, &first));
}

#[test]
fn unit_upper_family_recurrence() {
    let t = parse_term("poch(a,k)*poch(b+n,k)/(poch(d+n,k)*poch(e,k))").unwrap();
    let rec = zeilberger(&t, 3).unwrap();
    assert!(verify_certificate(&t, &rec));
    assert_eq!(rec.coeffs, vec![rf("(n+b-e+1)*(n+d)"), rf("(a-n-d)*(n+b)")]);
    assert_eq!(rec.certificate, rf("(n+d)*(e+k-1)"));
    // The variant with first factor (a-n-d) and both signs flipped is not a recurrence.
    let flipped = Recurrence { coeffs: vec![rf("-(n+b-e+1)*(n+d)"), rf("(a-n-d)*(n+b)")], certificate: rf("-(n+d)*(e+k-1)") };
    assert!(!verify_certificate(&t, &flipped));
}

/// `Σ_k t(n,k)` at `n = m`, summed exactly at a rational parameter point.
fn finite_sum_at(t: &HyperTerm, m: i64, point: &[(&str, Q)]) -> Q {
    let mut acc = Q::from_integer(0.into());
    for k in 0..=m {
        acc += eval_at(&t.eval_exact(m, k).unwrap(), point);
    }
    acc
}

fn eval_at(r: &RatFunc, point: &[(&str, Q)]) -> Q {
    r.eval(&|v| point.iter().find(|(name, _)| Var::p(name) == v).map(|(_, q)| q.clone())).unwrap()
}

/// `(x)_m` as a polynomial.
fn poch(arg: &str, m: i64) -> MultiPoly {
    let x = rf(arg).num().clone();
    let mut acc = MultiPoly::one();
    for i in 0..m {
        acc = &acc * &(&x + &MultiPoly::constant(Q::from_integer(i.into())));
    }
    acc
}

#[test]
fn terminating_recurrence_iterates_to_closed_form() {
    let t = parse_term("poch(-n,k)*poch(b,k)*poch(c,k)/(poch(e,k)*poch(b+c-e-n+1,k)*fac(k))").unwrap();
    let rec = zeilberger(&t, 3).unwrap();
    assert_eq!(rec.order(), 1);
    let point = [("b", Q::new(2.into(), 7.into())), ("c", Q::new((-5).into(), 3.into())), ("e", Q::new(9.into(), 4.into()))];
    let mut s = RatFunc::one();
    for m in 0..=5 {
        // s = (e-b)_m (e-c)_m / ((e)_m (e-b-c)_m), cross-multiplied.
        let num = &poch("e-b", m) * &poch("e-c", m);
        let den = &poch("e", m) * &poch("e-b-c", m);
        assert_eq!(s.num() * &den, s.den() * &num, "m = {m}");
        assert_eq!(eval_at(&s, &point), finite_sum_at(&t, m, &point), "m = {m}");
        let n = Q::from_integer(m.into());
        let c0 = rec.coeffs[0].substitute_rational(Var::N, &n).unwrap();
        let c1 = rec.coeffs[1].substitute_rational(Var::N, &n).unwrap();
        s = -&(&(&c0 * &s) / &c1);
    }
}
