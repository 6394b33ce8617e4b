//! End-to-end acceptance checks. Prints one pass/fail line per criterion
//! and exits nonzero if any fails.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use toricproj::algebra::text::{
    parse_poly, parse_upoly_rat, parse_upoly_ratfun, render_upoly_ratfun,
};
use toricproj::algebra::{ExpVec, Field, Rat, RatFun, SparsePoly, UniPoly};
use toricproj::io::{parse_resolution, parse_system, SystemFile};
use toricproj::pade::pade;
use toricproj::polytope::mixed_volume;
use toricproj::projection::{
    draw_form, q_projection, verify_parametric, verify_result, Pins, ProjectionOutput,
    ProjectionResult,
};
use toricproj::resolution::GeometricResolution;
use toricproj::series::{newton_hensel_lift, SeriesCtx, TruncSeries};
use toricproj::supports::{supports_of, trans_basis};
use toricproj::zerodim::solve_toric_0d;

type Outcome = Result<String, String>;

const WORKED_SYS: &str = include_str!("data/worked.sys");
const FIVE_VAR_SYS: &str = include_str!("data/five_var.sys");
const FIVE_VAR_SUPPORTS: &str = include_str!("data/five_var_supports.sys");
const WORKED_RES: &str = include_str!("data/worked.res");
const FIVE_VAR_RES: &str = include_str!("data/five_var.res");

const PROJECTED_Q: &str = "Y^5+(3/(2*X1*X2))*Y^4-((14*X1*X2^4+X1^2)/(3*X2^2))*Y^3+((-63*X2^4+10*X1)/(9*X2^3))*Y^2+((49*X1^2*X2^4+7*X1^3)/9)*Y+49*X1*X2^3/6";

fn check(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d).unwrap()
}

fn upoly(s: &str, n: usize) -> UniPoly<RatFun> {
    parse_upoly_ratfun(s, n).unwrap()
}

fn specialized_worked() -> Vec<SparsePoly> {
    vec![
        parse_poly("2+3*X2-X2*X3", 3).unwrap(),
        parse_poly("-1+3*X2*X3+2*X2^2", 3).unwrap(),
    ]
}

fn worked_system() -> Vec<SparsePoly> {
    parse_system(WORKED_SYS).unwrap().system
}

fn zero_dim_step() -> Outcome {
    let res = solve_toric_0d(&specialized_worked(), &[1, 2], &[0, 1]).map_err(|e| e.to_string())?;
    let q = res.q.map(|c| c.as_constant().unwrap());
    check(q == parse_upoly_rat("Y^2-12/5*Y-1/5").unwrap(), "q")?;
    check(
        res.params[0] == upoly("-5/4*Y-3/4", 3),
        "X2 parametrization",
    )?;
    check(res.params[1] == upoly("Y", 3), "X3 parametrization")?;
    Ok(format!("q = {}", render_upoly_ratfun(&res.q)))
}

fn lifting() -> Outcome {
    let base =
        solve_toric_0d(&specialized_worked(), &[1, 2], &[0, 1]).map_err(|e| e.to_string())?;
    let lr = newton_hensel_lift(&worked_system(), &base, &[0], &[Rat::one()], 12)
        .map_err(|e| e.to_string())?;
    let q1: Vec<Rat> = (0..=12).map(|k| lr.q.coeff(1).coeff_of(&[k])).collect();
    let expected = [
        r(-12, 5),
        r(-18, 5),
        r(18, 25),
        r(-24, 25),
        r(168, 125),
        r(-48, 25),
        r(1728, 625),
        r(-2496, 625),
        r(18048, 3125),
        r(-26112, 3125),
        r(188928, 15625),
        r(-273408, 15625),
        r(1978368, 78125),
    ];
    check(q1 == expected, "q1 series coefficients")?;
    let x2 = lr.param(1).ok_or("missing X2")?;
    let lin: Vec<Rat> = (0..3).map(|k| x2.coeff(1).coeff_of(&[k])).collect();
    let cst: Vec<Rat> = (0..2).map(|k| x2.coeff(0).coeff_of(&[k])).collect();
    check(
        lin == [r(-5, 4), r(-5, 2), r(-1, 1)],
        "X2 linear coefficients",
    )?;
    check(cst == [r(-3, 4), r(-3, 4)], "X2 constant coefficients")?;
    Ok("13 coefficients of q1 and the X2 parametrization match".into())
}

fn reconstruction() -> Outcome {
    let base =
        solve_toric_0d(&specialized_worked(), &[1, 2], &[0, 1]).map_err(|e| e.to_string())?;
    let lr = newton_hensel_lift(&worked_system(), &base, &[0], &[Rat::one()], 12)
        .map_err(|e| e.to_string())?;
    let rebuild = |u: &toricproj::series::SeriesPoly| -> Result<UniPoly<RatFun>, String> {
        let coeffs = (0..=u.degree().unwrap_or(0))
            .map(|k| pade(&u.coeff(k), 6))
            .collect::<Result<Vec<_>, _>>();
        Ok(UniPoly::new(coeffs.map_err(|e| e.to_string())?))
    };
    let q = rebuild(&lr.q)?;
    check(
        q == upoly(
            "Y^2+((-12*X1^3-6*X1^2+6*X1)/(4*X1^2+2*X1-1))*Y+(-9*X1^2+8)/(4*X1^2+2*X1-1)",
            3,
        ),
        "Q_X3",
    )?;
    check(
        rebuild(&lr.params[0])? == upoly("(-X1^2-1/2*X1+1/4)*Y-3/4*X1", 3),
        "W2",
    )?;
    check(rebuild(&lr.params[1])? == upoly("Y", 3), "W3")?;
    Ok(format!("Q_X3 = {}", render_upoly_ratfun(&q)))
}

fn five_var_projection(b: i64) -> Result<ProjectionResult, String> {
    let mut p = parse_system(FIVE_VAR_SYS).map_err(|e| e.to_string())?;
    p.pins = Pins {
        b: Some(vec![b]),
        lambda: Some(vec![0, 0, 0, 0, 1]),
        mu: Some(vec![0, 0, 1, 0, 0]),
        xi: None,
    };
    q_projection(&p).map_err(|e| e.to_string())
}

fn end_to_end() -> Outcome {
    let out = five_var_projection(1)?;
    let par = out.parametric.as_ref().ok_or("no parametric resolution")?;
    check(
        par.q == upoly("Y^10-(2*X1^2/5)*Y^8+((X1^4+30)/25)*Y^6+(2*X1^2/75)*Y^4-((4*X1^4-27+28*X1^3*X2^4)/75)*Y^2+4*X1^2/25", 5),
        "q_X5",
    )?;
    check(
        par.param(2) == Some(&upoly("(-5/(2*X1*X2))*Y^4+(X1/(2*X2))*Y^2-3/(2*X1*X2)", 5)),
        "w3",
    )?;
    check(par.param(4) == Some(&upoly("Y", 5)), "w5")?;
    let res = out.resolution().ok_or("dense image")?;
    check(res.q == upoly(PROJECTED_Q, 5), "q_X3")?;
    check(res.param(2) == Some(&upoly("Y", 5)), "v3")?;
    Ok(format!(
        "degree {} (mixed volume bound {})",
        res.degree(),
        out.mv_bound
    ))
}

fn mixed_volumes() -> Outcome {
    let worked = SystemFile::parse(WORKED_SYS).map_err(|e| e.to_string())?;
    let mv = mixed_volume(&worked.family.with_simplices(1)).map_err(|e| e.to_string())?;
    check(mv == 6, &format!("MV(S1, S2, simplex) = {mv}"))?;
    let fam = SystemFile::parse(FIVE_VAR_SUPPORTS)
        .map_err(|e| e.to_string())?
        .family;
    let tb: Vec<usize> = trans_basis(&fam)
        .map_err(|e| e.to_string())?
        .indices
        .iter()
        .map(|i| i + 1)
        .collect();
    check(tb == [1, 2, 4], &format!("transcendence basis {tb:?}"))?;
    Ok("MV = 6, basis {1, 2, 4}".into())
}

/// Generic square system in `n <= 3` variables with small random supports.
fn random_system(rng: &mut ChaCha8Rng) -> Vec<SparsePoly> {
    let n = rng.gen_range(1..=3usize);
    (0..n)
        .map(|_| {
            let size = rng.gen_range(2..=5usize.min(3usize.pow(n as u32)));
            let mut f = SparsePoly::zero(n);
            while f.terms().len() < size {
                let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
                let mut c = 0i64;
                while c == 0 {
                    c = rng.gen_range(-50..=50);
                }
                if f.coeff(&ExpVec::new(e.clone())).is_zero() {
                    f.add_term(ExpVec::new(e), &Rat::from_int(c));
                }
            }
            f
        })
        .collect()
}

struct ZeroDimTrial {
    system: Vec<SparsePoly>,
    mv: u64,
    result: Result<GeometricResolution, String>,
}

/// The random square systems shared by the root count and verification
/// criteria, solved once.
fn zero_dim_suite() -> &'static [ZeroDimTrial] {
    static SUITE: OnceLock<Vec<ZeroDimTrial>> = OnceLock::new();
    SUITE.get_or_init(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        (0..60)
            .map(|_| {
                let system = random_system(&mut rng);
                let n = system.len();
                let mv = mixed_volume(&supports_of(&system).unwrap()).unwrap();
                let lambda = draw_form(&mut rng, n, 20);
                let result = solve_toric_0d(&system, &(0..n).collect::<Vec<_>>(), &lambda)
                    .map_err(|e| e.to_string());
                ZeroDimTrial { system, mv, result }
            })
            .collect()
    })
}

fn bernstein() -> Outcome {
    let suite = zero_dim_suite();
    let mut matched = 0;
    let mut flagged = 0;
    let mut silent = Vec::new();
    for (i, t) in suite.iter().enumerate() {
        match &t.result {
            Ok(res) if res.multiplicity_warning => flagged += 1,
            Ok(res) if res.degree() as u64 == t.mv => matched += 1,
            Ok(res) => silent.push(format!("trial {i}: degree {} vs MV {}", res.degree(), t.mv)),
            Err(_) => flagged += 1,
        }
    }
    check(
        silent.is_empty(),
        &format!("unflagged mismatches: {}", silent.join("; ")),
    )?;
    check(
        matched * 100 >= suite.len() * 95,
        &format!("only {matched}/{} match", suite.len()),
    )?;
    Ok(format!(
        "{matched}/{} match, {flagged} flagged",
        suite.len()
    ))
}

/// Every single-coefficient perturbation of `res`, as (label, resolution).
fn mutations(res: &GeometricResolution) -> Vec<(String, GeometricResolution)> {
    let bump = |u: &UniPoly<RatFun>, k: usize| {
        let mut c = u.coeffs().to_vec();
        c.resize(c.len().max(k + 1), RatFun::zero(res.nvars));
        c[k] = c[k].add(&RatFun::one(res.nvars));
        UniPoly::new(c)
    };
    let d = res.degree();
    let mut out = Vec::new();
    for k in 0..=d {
        let mut m = res.clone();
        m.q = bump(&res.q, k);
        out.push((format!("q[{k}]"), m));
    }
    for j in 0..res.params.len() {
        for k in 0..d {
            let mut m = res.clone();
            m.params[j] = bump(&res.params[j], k);
            out.push((format!("X{}[{k}]", res.dependent_vars[j] + 1), m));
        }
    }
    out
}

fn verification() -> Outcome {
    let mut checked = 0;
    let mut mutants = 0;
    for (sys_text, res_text) in [(WORKED_SYS, WORKED_RES), (FIVE_VAR_SYS, FIVE_VAR_RES)] {
        let sys = SystemFile::parse(sys_text).map_err(|e| e.to_string())?;
        let stored = parse_resolution(res_text).map_err(|e| e.to_string())?;
        let report =
            verify_result(&sys.equations, &sys.family, &stored).map_err(|e| e.to_string())?;
        check(
            report.passed(),
            &format!("golden result fails: {:?}", report.failures()),
        )?;
        checked += 1;
        let par = stored.parametric.clone().ok_or("no parametric block")?;
        for (label, m) in mutations(&par) {
            let mut bad = stored.clone();
            bad.parametric = Some(m);
            let rep =
                verify_result(&sys.equations, &sys.family, &bad).map_err(|e| e.to_string())?;
            check(
                !rep.passed(),
                &format!("parametric mutation {label} undetected"),
            )?;
            mutants += 1;
        }
        if let ProjectionOutput::Resolution(res) = &stored.output {
            for (label, m) in mutations(res) {
                let mut bad = stored.clone();
                bad.output = ProjectionOutput::Resolution(m);
                let rep =
                    verify_result(&sys.equations, &sys.family, &bad).map_err(|e| e.to_string())?;
                check(
                    !rep.passed(),
                    &format!("projected mutation {label} undetected"),
                )?;
                mutants += 1;
            }
        }
    }
    for t in zero_dim_suite() {
        let Ok(res) = &t.result else { continue };
        if res.degree() == 0 {
            continue;
        }
        check(
            verify_parametric(&t.system, res).passed(),
            "random resolution fails verification",
        )?;
        checked += 1;
        for (label, m) in mutations(res) {
            check(
                !verify_parametric(&t.system, &m).passed(),
                &format!("random mutation {label} undetected"),
            )?;
            mutants += 1;
        }
    }
    Ok(format!(
        "{checked} resolutions verified, {mutants} mutants rejected"
    ))
}

fn random_poly(rng: &mut ChaCha8Rng, t: usize, max_deg: u32) -> SparsePoly {
    let mut p = SparsePoly::zero(t);
    for _ in 0..rng.gen_range(1..=4) {
        let deg = rng.gen_range(0..=max_deg);
        let mut e = vec![0u32; t];
        for _ in 0..deg {
            e[rng.gen_range(0..t)] += 1;
        }
        p.add_term(ExpVec::new(e), &Rat::from_int(rng.gen_range(-9..=9)));
    }
    p
}

fn pade_roundtrip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 100 {
        let t = rng.gen_range(1..=2usize);
        let num = random_poly(&mut rng, t, 4);
        let den = random_poly(&mut rng, t, 4);
        let Ok(f) = RatFun::new(num, den) else {
            continue;
        };
        let shift: Vec<Rat> = (0..t)
            .map(|_| Rat::from_int(rng.gen_range(-3..=3)))
            .collect();
        let at = f.den().eval(&shift);
        if at.is_zero() {
            continue;
        }
        let ctx = SeriesCtx::new(t, (0..t).collect(), shift.clone(), 8).unwrap();
        let n = TruncSeries::from_poly(&ctx, 8, f.num()).unwrap();
        let d = TruncSeries::from_poly(&ctx, 8, f.den()).unwrap();
        let s = n.mul_trunc(&d.inv().map_err(|e| e.to_string())?, 8);
        let back = pade(&s, 4).map_err(|e| format!("{f:?} around {shift:?}: {e}"))?;
        check(
            back == f,
            &format!("{f:?} around {shift:?} came back as {back:?}"),
        )?;
        done += 1;
    }
    Ok(format!("{done} rational functions recovered"))
}

fn specialization_independence() -> Outcome {
    let want = upoly(PROJECTED_Q, 5);
    for b in [2, 3, 5] {
        let out = five_var_projection(b)?;
        check(
            out.resolution().is_some_and(|r| r.q == want),
            &format!("b = {b} gives a different q_X3"),
        )?;
    }
    Ok("b = 2, 3, 5 agree".into())
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: Vec<Criterion> = vec![
        (
            1,
            "zero-dimensional step",
            Duration::from_secs(1),
            zero_dim_step,
        ),
        (2, "series lifting", Duration::from_secs(10), lifting),
        (
            3,
            "rational reconstruction",
            Duration::from_secs(5),
            reconstruction,
        ),
        (
            4,
            "five-variable projection end to end",
            Duration::from_secs(120),
            end_to_end,
        ),
        (
            5,
            "mixed volume and transcendence basis",
            Duration::from_secs(5),
            mixed_volumes,
        ),
        (
            6,
            "root count matches the mixed volume",
            Duration::from_secs(600),
            bernstein,
        ),
        (
            7,
            "verification and mutation detection",
            Duration::from_secs(600),
            verification,
        ),
        (
            8,
            "Pade roundtrip",
            Duration::from_secs(120),
            pade_roundtrip,
        ),
        (
            9,
            "independence from the specialization",
            Duration::from_secs(600),
            specialization_independence,
        ),
    ];
    // Numeric arguments select criteria; by default all run.
    let selected: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (n, name, limit, f) in criteria {
        if !selected.is_empty() && !selected.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        let (ok, detail) = match out {
            Ok(d) if t <= limit => (true, d),
            Ok(d) => (false, format!("{d}; took longer than {limit:?}")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {n}: {} [{:.2}s] {name}: {detail}",
            if ok { "PASS" } else { "FAIL" },
            t.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
