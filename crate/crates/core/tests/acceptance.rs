//! Acceptance suite. Runs as a plain binary and prints one PASS/FAIL line per
//! criterion; the process fails if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use hkdiff::ga::invert_block_triangular;
use hkdiff::random::random_polynomial;
use hkdiff::scalar::multinomial_weight_int;
use hkdiff::series::random_automorphism_with;
use hkdiff::symbolic::{derivative_label, generic_series_map, generic_taylor_polynomial, Label};
use hkdiff::*;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> std::result::Result<(), String> {
    let spent = start.elapsed();
    check(spent < limit, || format!("took {spent:?}, limit {limit:?}"))
}

fn deriv(multi_index: &[u32]) -> Symbolic {
    Symbolic::indeterminate(derivative_label(multi_index))
}

fn parse_label(name: &str) -> Symbolic {
    // "a1_10" -> component 1, index (1, 0); "a3" -> index (3)
    match name[1..].split_once('_') {
        Some((r, idx)) => {
            let digits: Vec<u32> = idx.chars().map(|c| c.to_digit(10).unwrap()).collect();
            Symbolic::indeterminate(Label::series_coefficient(Some(r.parse().unwrap()), &digits))
        }
        None => Symbolic::indeterminate(Label::series_coefficient(None, &[name[1..].parse().unwrap()])),
    }
}

fn spoly(num_vars: usize, terms: &[(Symbolic, &[u32])]) -> Polynomial<Symbolic> {
    let mut p = Polynomial::zero(num_vars);
    for (c, e) in terms {
        p.add_term(ExponentVector::new(e.to_vec()), c.clone());
    }
    p
}

fn int(n: i64) -> Symbolic {
    Symbolic::from_i64(n)
}

fn half() -> Symbolic {
    Symbolic::constant(num_rational::BigRational::new(1.into(), 2.into()))
}

fn sixth() -> Symbolic {
    Symbolic::constant(num_rational::BigRational::new(1.into(), 6.into()))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let phi = generic_series_map(1, 3).map_err(|e| e.to_string())?;
    let image = alpha(&phi).map_err(|e| e.to_string())?;
    let a = parse_label;
    let expected = [
        spoly(3, &[(a("a1"), &[1, 0, 0])]),
        spoly(3, &[(a("a1"), &[0, 1, 0]), (a("a2"), &[2, 0, 0])]),
        spoly(3, &[(a("a1"), &[0, 0, 1]), (a("a3"), &[3, 0, 0]), (int(2) * a("a2"), &[1, 1, 0])]),
    ];
    check(image.map().components() == &expected[..], || "symbolic image differs".into())?;
    let names = VarNames::jets(1, 3, JetStyle::Y, false);
    let rendered: Vec<String> = image.map().components().iter().map(|p| render_plain(p, &names)).collect();
    check(
        rendered == ["a1*y1", "a1*y2 + a2*y1^2", "a1*y3 + 2*a2*y1*y2 + a3*y1^3"],
        || format!("rendered {rendered:?}"),
    )?;
    check(image.map().is_triangular(), || "image not triangular".into())?;
    within(start, Duration::from_secs(1))?;
    Ok(rendered.join("; "))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let phi = generic_series_map(2, 2).map_err(|e| e.to_string())?;
    let image = alpha(&phi).map_err(|e| e.to_string())?;
    let a = parse_label;
    // slots: y11, y21, y12, y22. The coefficient a^r_{0,2} multiplies
    // y_{2,1}^2 (weight matrix with l_21 = 2), not y_{1,2}^2.
    let second = |r: u32| {
        spoly(
            4,
            &[
                (a(&format!("a{r}_10")), &[0, 0, 1, 0]),
                (a(&format!("a{r}_01")), &[0, 0, 0, 1]),
                (a(&format!("a{r}_20")), &[2, 0, 0, 0]),
                (a(&format!("a{r}_02")), &[0, 2, 0, 0]),
                (a(&format!("a{r}_11")), &[1, 1, 0, 0]),
            ],
        )
    };
    let first = |r: u32| {
        spoly(
            4,
            &[(a(&format!("a{r}_10")), &[1, 0, 0, 0]), (a(&format!("a{r}_01")), &[0, 1, 0, 0])],
        )
    };
    let expected = [first(1), first(2), second(1), second(2)];
    check(image.map().components() == &expected[..], || {
        let names = VarNames::jets(2, 2, JetStyle::Y, false);
        let got: Vec<String> = image.map().components().iter().map(|p| render_plain(p, &names)).collect();
        format!("image {got:?}")
    })?;
    let weights: Vec<_> = (1..=2)
        .flat_map(|s| enumerate_weight_matrices(2, s))
        .map(|l| multinomial_weight_int(&l))
        .collect();
    check(weights.iter().all(|w| w.is_one()), || format!("prefactors {weights:?}"))?;
    let all_unit = image
        .map()
        .components()
        .iter()
        .flat_map(|p| p.terms())
        .all(|(_, c)| c.num_terms() == 1 && c.to_string().starts_with('a'));
    check(all_unit, || "a coefficient carries a scalar factor".into())?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("{} prefactors all 1", weights.len()))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let ctx = DifferentialContext::new(2, 2).map_err(|e| e.to_string())?;
    let f = generic_taylor_polynomial(2, 3);
    let d2 = reduce_at_origin(&higher_differential(&f, 2, &ctx).map_err(|e| e.to_string())?, &ctx)
        .map_err(|e| e.to_string())?;
    let expected = spoly(
        4,
        &[
            (deriv(&[1, 0]), &[0, 0, 1, 0]),
            (deriv(&[0, 1]), &[0, 0, 0, 1]),
            (deriv(&[1, 1]), &[1, 1, 0, 0]),
            (half() * deriv(&[2, 0]), &[2, 0, 0, 0]),
            (half() * deriv(&[0, 2]), &[0, 2, 0, 0]),
        ],
    );
    let names = VarNames::jets(2, 2, JetStyle::D, false);
    check(d2 == expected, || format!("d2f = {}", render_plain(&d2, &names)))?;

    let ctx = DifferentialContext::new(1, 3).map_err(|e| e.to_string())?;
    let f = generic_taylor_polynomial(1, 4);
    let d3 = reduce_at_origin(&higher_differential(&f, 3, &ctx).map_err(|e| e.to_string())?, &ctx)
        .map_err(|e| e.to_string())?;
    let expected = spoly(
        3,
        &[
            (deriv(&[1]), &[0, 0, 1]),
            (sixth() * deriv(&[3]), &[3, 0, 0]),
            (deriv(&[2]), &[1, 1, 0]),
        ],
    );
    let names3 = VarNames::jets(1, 3, JetStyle::D, false);
    check(d3 == expected, || format!("d3f = {}", render_plain(&d3, &names3)))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("{} | {}", render_plain(&d2, &names), render_plain(&d3, &names3)))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut comparisons = 0;
    for k in 0..210 {
        let m = k % 3 + 1;
        let f = random_polynomial(&mut rng, m, 4, 9, 8);
        for order in 1..=4 {
            let ctx = DifferentialContext::new(m, order).unwrap();
            for n in 1..=order {
                let lhs = higher_differential(&f, n, &ctx).unwrap();
                let rhs = taylor_oracle(&f, n, &ctx).unwrap();
                check(lhs == rhs, || format!("f = {f}, n = {n}, N = {order}"))?;
                comparisons += 1;
            }
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("210 polynomials, {comparisons} comparisons"))
}

const GRID: [(usize, usize); 3] = [(1, 4), (2, 3), (3, 2)];
const PAIRS: usize = 100;

fn sample(m: usize, order: usize, salt: u64) -> Vec<(SeriesMap, SeriesMap)> {
    let mut rng = ChaCha8Rng::seed_from_u64(salt ^ ((m as u64) << 8) ^ order as u64);
    (0..PAIRS)
        .map(|_| {
            (
                random_automorphism_with(&mut rng, m, order, 3),
                random_automorphism_with(&mut rng, m, order, 3),
            )
        })
        .collect()
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    for (m, order) in GRID {
        let id = alpha(&SeriesMap::identity(m, order)).unwrap();
        check(id.map().is_identity(), || format!("alpha(id) != id at m={m} N={order}"))?;
        for (phi, psi) in sample(m, order, 5) {
            let a_phi = alpha(&phi).unwrap();
            let a_psi = alpha(&psi).unwrap();
            let lhs = alpha(&phi.compose(&psi).unwrap()).unwrap();
            let rhs = a_phi.map().compose(a_psi.map()).unwrap();
            check(lhs.map() == &rhs, || format!("homomorphism fails at m={m} N={order}"))?;
            let a_inv = alpha(&phi.invert().unwrap()).unwrap();
            let both = a_inv.map().compose(a_phi.map()).unwrap().is_identity()
                && a_phi.map().compose(a_inv.map()).unwrap().is_identity();
            check(both, || format!("inverse law fails at m={m} N={order}"))?;
        }
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{} pairs per grid point", PAIRS))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for (m, order) in GRID {
        for (phi, psi) in sample(m, order, 5) {
            for x in [phi, psi] {
                let back = recover_series(&alpha(&x).unwrap()).unwrap();
                check(back == x, || format!("round trip fails at m={m} N={order}"))?;
                count += 1;
            }
        }
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{count} maps recovered"))
}

fn random_triangular_series(rng: &mut ChaCha8Rng, m: usize, order: usize) -> SeriesMap {
    let phi = random_automorphism_with(rng, m, order, 3);
    let comps = phi
        .components()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut q = Polynomial::zero(m);
            for (e, c) in p.terms() {
                if (i + 1..m).all(|v| e[v] == 0) {
                    q.add_term(e.clone(), c.clone());
                }
            }
            // force a nonzero diagonal
            let unit = ExponentVector::unit(m, i);
            if q.coefficient_of(&unit).is_zero() {
                q.add_term(unit, Coefficient::from_i64(rng.gen_range(1..=3)));
            }
            q
        })
        .collect();
    formal_triangular(order, comps).unwrap()
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut block, mut tri, mut lin, mut jac) = (0, 0, 0, 0);
    for (m, order) in GRID {
        for (phi, _) in sample(m, order, 7) {
            let image = alpha(&phi).unwrap();
            check(image.map().is_block_triangular(m).unwrap(), || "not block triangular".into())?;
            block += 1;
            let det = image.map().jacobian_determinant();
            check(det.is_constant() && !det.is_zero(), || format!("jacobian {det}"))?;
            jac += 1;
        }
        for _ in 0..PAIRS {
            let phi = random_triangular_series(&mut rng, m, order);
            check(alpha(&phi).unwrap().map().is_triangular(), || "triangular image expected".into())?;
            tri += 1;
            let matrix: Vec<Vec<Coefficient>> = loop {
                let a: Vec<Vec<Coefficient>> = (0..m)
                    .map(|_| (0..m).map(|_| Coefficient::from_i64(rng.gen_range(-5..=5))).collect())
                    .collect();
                if !hkdiff::linalg::determinant(&a).is_zero() {
                    break a;
                }
            };
            let image = alpha(&linear_embed(&matrix, order).unwrap()).unwrap();
            check(image.map().is_linear(), || "linear image expected".into())?;
            lin += 1;
        }
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("block {block}, triangular {tri}, linear {lin}, jacobian {jac}"))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..120 {
        let m = k % 3 + 1;
        let ctx = DifferentialContext::new(m, 4).unwrap();
        let f = random_polynomial(&mut rng, m, 3, 9, 5);
        let g = random_polynomial(&mut rng, m, 3, 9, 5);
        let d = |p: &Poly, i: usize| {
            if i == 0 {
                ctx.embed_base(p).unwrap()
            } else {
                higher_differential(p, i, &ctx).unwrap()
            }
        };
        let fg = &f * &g;
        for n in 1..=4 {
            let mut rhs = Polynomial::zero(ctx.num_vars());
            for i in 0..=n {
                rhs = &rhs + &(&d(&f, i) * &d(&g, n - i));
            }
            check(d(&fg, n) == rhs, || format!("f = {f}, g = {g}, n = {n}"))?;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok("120 pairs, n <= 4".into())
}

fn random_triangular_automorphism(rng: &mut ChaCha8Rng) -> Automorphism {
    let nonzero = |rng: &mut ChaCha8Rng| loop {
        let v = rng.gen_range(-3i64..=3);
        if v != 0 {
            break Coefficient::from_i64(v);
        }
    };
    let mut c1 = Polynomial::zero(2);
    c1.add_term(ExponentVector::new(vec![1, 0]), nonzero(rng));
    c1.add_term(ExponentVector::new(vec![0, 0]), Coefficient::from_i64(rng.gen_range(-3..=3)));
    let mut c2 = Polynomial::zero(2);
    c2.add_term(ExponentVector::new(vec![0, 1]), nonzero(rng));
    for k in 0..=3u32 {
        c2.add_term(ExponentVector::new(vec![k, 0]), Coefficient::from_i64(rng.gen_range(-3..=3)));
    }
    invert_block_triangular(&Endo::new(vec![c1, c2]).unwrap(), 1).unwrap()
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for order in [1, 2] {
        check(
            embed_ga(&Automorphism::identity(2), order).unwrap().forward().is_identity(),
            || "embed_ga(id) != id".into(),
        )?;
        for _ in 0..60 {
            let phi = random_triangular_automorphism(&mut rng);
            let psi = random_triangular_automorphism(&mut rng);
            let lhs = embed_ga(&phi.compose(&psi).unwrap(), order).unwrap();
            let rhs = embed_ga(&phi, order).unwrap().compose(&embed_ga(&psi, order).unwrap()).unwrap();
            check(lhs.forward() == rhs.forward(), || format!("composition fails at N={order}"))?;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok("60 pairs at N = 1 and N = 2".into())
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for k in 0..1000 {
        let names = match k % 4 {
            0 => VarNames::coordinates(1),
            1 => VarNames::coordinates(3),
            2 => VarNames::jets(2, 2, JetStyle::Y, true),
            _ => VarNames::jets(1, 3, JetStyle::D, false),
        };
        let mut p = random_polynomial(&mut rng, names.len(), 5, 50, 6);
        if k % 5 == 0 {
            p = p.scale(&Coefficient::new(1.into(), rng.gen_range(2..=7).into()));
        }
        let text = render_plain(&p, &names);
        let back = parse_polynomial(&text, &names).map_err(|e| format!("{text}: {e}"))?;
        check(back == p, || format!("round trip changed {text}"))?;
    }
    let names = VarNames::jets(2, 2, JetStyle::Y, true);
    let alphabet = b"x123y_d^*+-()/ 0123456789";
    let hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let mut crashes = 0;
    let mut bad_positions = 0;
    for k in 0..100_000 {
        let len = rng.gen_range(0..24);
        let bytes: Vec<u8> = (0..len)
            .map(|_| {
                if k % 2 == 0 {
                    rng.gen()
                } else {
                    alphabet[rng.gen_range(0..alphabet.len())]
                }
            })
            .collect();
        let text = String::from_utf8_lossy(&bytes).into_owned();
        match panic::catch_unwind(AssertUnwindSafe(|| parse_polynomial(&text, &names))) {
            Err(_) => crashes += 1,
            Ok(Ok(_)) => {}
            Ok(Err(e)) => match e.position() {
                Some(pos) if pos <= text.len() => {}
                _ => bad_positions += 1,
            },
        }
    }
    let deep = "(".repeat(100_000);
    if panic::catch_unwind(AssertUnwindSafe(|| parse_polynomial(&deep, &names))).is_err() {
        crashes += 1;
    }
    panic::set_hook(hook);
    check(crashes == 0 && bad_positions == 0, || {
        format!("{crashes} crashes, {bad_positions} errors without position")
    })?;
    within(start, Duration::from_secs(60))?;
    Ok("1000 round trips, 100000 fuzz inputs".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("golden cubic example", criterion_1),
        ("golden quadratic example", criterion_2),
        ("golden differential displays", criterion_3),
        ("oracle equivalence", criterion_4),
        ("homomorphism suite", criterion_5),
        ("injectivity round trip", criterion_6),
        ("structural suite", criterion_7),
        ("higher leibniz", criterion_8),
        ("embed_ga homomorphism", criterion_9),
        ("parser round trip and fuzz", criterion_10),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.2}s): {detail}", k + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.2}s): {why}", k + 1);
            }
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
