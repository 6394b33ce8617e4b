use proptest::prelude::*;

use toricproj::algebra::{ExpVec, Rat, RatFun, SparsePoly, UniPoly};
use toricproj::io::SystemFile;
use toricproj::pade::pade;
use toricproj::polytope::{mixed_volume, Support, SupportFamily};
use toricproj::series::{SeriesCtx, TruncSeries};

const NVARS: usize = 2;

fn rat() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rat::new(n, d).unwrap())
}

fn poly() -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec((prop::collection::vec(0u32..=3, NVARS), -9i64..=9), 0..5).prop_map(
        |terms| {
            let mut p = SparsePoly::zero(NVARS);
            for (e, c) in terms {
                p.add_term(ExpVec::new(e), &Rat::from_int(c));
            }
            p
        },
    )
}

fn upoly() -> impl Strategy<Value = UniPoly<Rat>> {
    prop::collection::vec(rat(), 0..6).prop_map(UniPoly::new)
}

fn support(dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(0i64..=2, dim), 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn exact_division_recovers_factor(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        let quotient = (&a * &b).div_exact(&b).unwrap();
        prop_assert_eq!(quotient, Some(a));
    }

    #[test]
    fn univariate_division(a in upoly(), b in upoly()) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.divrem(&b).unwrap();
        prop_assert_eq!(q.mul(&b).add(&r), a);
        prop_assert!(r.degree().is_none_or(|dr| dr < b.degree().unwrap()));
    }

    #[test]
    fn rational_functions_are_canonical(p in poly(), q in poly(), h in poly()) {
        prop_assume!(!q.is_zero() && !h.is_zero());
        let f = RatFun::new(p.clone(), q.clone()).unwrap();
        let g = RatFun::new(&p * &h, &q * &h).unwrap();
        prop_assert_eq!(&g, &f);
        let again = RatFun::new(f.num().clone(), f.den().clone()).unwrap();
        prop_assert_eq!(again, f);
    }

    #[test]
    fn mixed_volume_ignores_member_order(a in support(2), b in support(2)) {
        let family = |x: &[Vec<i64>], y: &[Vec<i64>]| {
            SupportFamily::new(
                2,
                vec![Support::new(2, x.to_vec()).unwrap(), Support::new(2, y.to_vec()).unwrap()],
            )
            .unwrap()
        };
        prop_assert_eq!(mixed_volume(&family(&a, &b)).unwrap(), mixed_volume(&family(&b, &a)).unwrap());
    }

    #[test]
    fn mixed_volume_is_monotone(a in support(2), b in support(2), extra in support(2)) {
        let small = SupportFamily::new(2, vec![
            Support::new(2, a.clone()).unwrap(),
            Support::new(2, b.clone()).unwrap(),
        ]).unwrap();
        let mut grown = a;
        grown.extend(extra);
        let large = SupportFamily::new(2, vec![
            Support::new(2, grown).unwrap(),
            Support::new(2, b).unwrap(),
        ]).unwrap();
        prop_assert!(mixed_volume(&small).unwrap() <= mixed_volume(&large).unwrap());
    }

    #[test]
    fn series_inverse(p in poly(), shift in prop::collection::vec(-2i64..=2, NVARS)) {
        let shift: Vec<Rat> = shift.into_iter().map(Rat::from_int).collect();
        prop_assume!(!p.eval(&shift).is_zero());
        let ctx = SeriesCtx::new(NVARS, (0..NVARS).collect(), shift, 6).unwrap();
        let s = TruncSeries::from_poly(&ctx, 6, &p).unwrap();
        let product = s.mul_trunc(&s.inv().unwrap(), 6);
        prop_assert_eq!(product, TruncSeries::one(&ctx, 6));
    }

    #[test]
    fn pade_recovers_rational_functions(
        p in poly(),
        q in poly(),
        shift in prop::collection::vec(-2i64..=2, NVARS),
    ) {
        prop_assume!(!q.is_zero());
        let f = RatFun::new(p, q).unwrap();
        let shift: Vec<Rat> = shift.into_iter().map(Rat::from_int).collect();
        prop_assume!(!f.den().eval(&shift).is_zero());
        let degree = [f.num(), f.den()].iter().filter_map(|x| x.total_degree()).max().unwrap_or(0);
        prop_assume!(degree <= 6);
        let precision = 2 * degree + 2;
        let ctx = SeriesCtx::new(NVARS, (0..NVARS).collect(), shift, precision).unwrap();
        let num = TruncSeries::from_poly(&ctx, precision, f.num()).unwrap();
        let den = TruncSeries::from_poly(&ctx, precision, f.den()).unwrap();
        let s = num.mul_trunc(&den.inv().unwrap(), precision);
        prop_assert_eq!(pade(&s, degree).unwrap(), f);
    }

    #[test]
    fn system_files_roundtrip(equations in prop::collection::vec(poly(), 1..3)) {
        prop_assume!(equations.iter().all(|f| !f.is_zero()));
        let mut text = format!("toricproj-system 1\nn {NVARS}\nell 1\n");
        for f in &equations {
            text.push_str("equation\n");
            for (e, c) in f.terms() {
                let exps: Vec<String> = e.as_slice().iter().map(u32::to_string).collect();
                text.push_str(&format!("{} : {c}\n", exps.join(" ")));
            }
            text.push_str("end\n");
        }
        let parsed = SystemFile::parse(&text).unwrap();
        prop_assert_eq!(&parsed.equations, &equations);
        let again = SystemFile::parse(&parsed.emit()).unwrap();
        prop_assert_eq!(again.emit(), parsed.emit());
        prop_assert_eq!(again.equations, equations);
    }
}
