//! Acceptance suite: one PASS/FAIL line per criterion, with wall time against its limit.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;

use geproci_core::concurrency::{concurrency_points, concurrency_scan, formula_points};
use geproci_core::construct::{assemble_pair, run_all_mu};
use geproci_core::exactalg::{cyclotomic_coeffs, euler_phi, rat_frac, CycElem, FieldContext, Rat};
use geproci_core::geproci::{is_geproci, GeprociCert};
use geproci_core::halfgrid::{
    detect_structure, f4_root_model, find_projective_equivalence, incidence_lines, standard_grid, standard_halfgrid,
    three_line_grid_check, Config, EquivCert, Equivalence, HalfGridVariant, Structure,
};
use geproci_core::perms::{
    admissible_sigma_sets, mobius_fixed_points, mobius_from_permutation, normalized_quadruple, FixedPointReport,
    Mobius, PermS4,
};
use geproci_core::projgeom::{cross_ratio, parse_line_ideal, ProjLine3, ProjPoint};
use geproci_core::tables::{check_table1, check_table2};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Certificates and lines produced along the way, re-checked by the last criterion.
#[derive(Default)]
struct Emitted {
    geproci: Vec<(Config, GeprociCert)>,
    equivalences: Vec<(Config, Config, EquivCert)>,
    lines: Vec<ProjLine3>,
}

impl Emitted {
    fn config_lines(&mut self, z: &Config) {
        self.lines.extend(z.lines().iter().map(|l| l.pluecker.clone()));
    }
}

const TABLE3: [&str; 6] = [
    "(y+z,x-w)",
    "(y-z,x+w)",
    "(y-z+w,x-z+2w)",
    "(y-2z+w,x-z+w)",
    "(y+z-w,x+z-2w)",
    "(y+2z-w,x+z-w)",
];

fn q1() -> Arc<FieldContext> {
    FieldContext::get(1)
}

fn gaussian(re: i64, im: i64) -> CycElem {
    let c4 = FieldContext::get(4);
    &CycElem::from_i64(&c4, re) + &CycElem::zeta_pow(&c4, 1).scale_i64(im)
}

fn p1(a: CycElem, b: CycElem) -> ProjPoint {
    ProjPoint::new(vec![a, b]).unwrap()
}

fn table3(em: &mut Emitted) -> Check {
    let report = run_all_mu().map_err(err)?;
    let ctx = q1();
    for (k, res) in report.results.iter().enumerate() {
        let want = parse_line_ideal(TABLE3[k], &ctx).map_err(err)?;
        ensure(res.external == want, || format!("row {}: got {}", k + 1, report.rows[k].external))?;
        ensure(report.rows[k].external == TABLE3[k], || format!("row {} prints as {}", k + 1, report.rows[k].external))?;
        em.lines.extend([res.external.clone(), res.l4.clone()]);
        em.config_lines(&res.z20);
    }
    ensure(report.results.len() == 6, || format!("{} rows", report.results.len()))?;
    Ok("six external lines equal as ideals".into())
}

fn first_row_points() -> Check {
    let ctx = q1();
    let pts = |v: [[i64; 4]; 4]| v.map(|p| ProjPoint::from_ints(&ctx, &p));
    let r = pts([[0, 1, -1, 0], [1, 0, 0, 1], [1, 1, -1, 1], [1, -1, 1, 1]]);
    let p4 = pts([[-1, 1, 0, 0], [0, 0, -1, 1], [-1, 1, -1, 1], [-1, 1, 1, -1]]);
    let l4 = parse_line_ideal("(x+y,z+w)", &ctx).map_err(err)?;
    let report = run_all_mu().map_err(err)?;
    let first = &report.results[0];
    ensure(first.r == r, || format!("R = {:?}", report.rows[0].r))?;
    ensure(first.p4 == p4, || format!("P4 = {:?}", report.rows[0].p4))?;
    ensure(first.l4 == l4, || format!("L4 = {}", report.rows[0].l4))?;
    Ok("R, P4 and L4 match in order".into())
}

fn pairing() -> Check {
    let report = run_all_mu().map_err(err)?;
    let expected = [(1, 2), (3, 5), (4, 6)];
    for i in 1..=6 {
        for j in i + 1..=6 {
            let shared = report.results[i - 1].l4 == report.results[j - 1].l4;
            ensure(shared == expected.contains(&(i, j)), || format!("rows {i} and {j}: shared = {shared}"))?;
        }
    }
    Ok("coincidences exactly {1,2} {3,5} {4,6}".into())
}

fn tables12() -> Check {
    for r in [check_table1().map_err(err)?, check_table2().map_err(err)?] {
        ensure(r.ok(), || r.mismatches.join("; "))?;
    }
    // the matrices move P_k to P_σ(k) for several rational q
    for (n, d) in [(5, 1), (-3, 1), (2, 7), (-1, 1)] {
        let pts = normalized_quadruple(&CycElem::from_rat(&q1(), &rat_frac(n, d)));
        for s in ["2143", "3412", "4321"] {
            let sigma: PermS4 = s.parse().map_err(err)?;
            let f = mobius_from_permutation(&pts, &sigma).map_err(err)?;
            for k in 1..=4 {
                ensure(f.apply(&pts[k - 1]).map_err(err)? == pts[sigma.apply(k) - 1], || format!("{s} at q={n}/{d}"))?;
            }
        }
    }
    let c4 = FieldContext::get(4);
    let harmonic = normalized_quadruple(&CycElem::from_i64(&c4, -1));
    let plus_minus_i = |fp: &FixedPointReport| match fp {
        FixedPointReport::InField([a, b]) => {
            let (i, mi) = (p1(gaussian(1, 0), gaussian(0, 1)), p1(gaussian(1, 0), gaussian(0, -1)));
            (*a == i && *b == mi) || (*a == mi && *b == i)
        }
        _ => false,
    };
    let symbolic = |fp: &FixedPointReport, c: i64, r: i64| {
        matches!(fp, FixedPointReport::Symbolic { center, radicand }
            if *center == CycElem::from_i64(&c4, c) && *radicand == CycElem::from_i64(&c4, r))
    };
    let cases: [(&str, [[i64; 2]; 2]); 5] = [
        ("2143", [[0, 1], [-1, 0]]),
        ("3412", [[-1, -1], [-1, 1]]),
        ("4321", [[1, -1], [-1, -1]]),
        ("3421", [[1, -1], [1, 1]]),
        ("4312", [[1, 1], [-1, 1]]),
    ];
    for (k, (s, m)) in cases.iter().enumerate() {
        let f = mobius_from_permutation(&harmonic, &s.parse().map_err(err)?).map_err(err)?;
        ensure(f == Mobius::from_ints(&c4, *m), || format!("{s}: matrix {f:?}"))?;
        let fp = mobius_fixed_points(&f).map_err(err)?;
        let ok = match k {
            1 => symbolic(&fp, -1, 2),
            2 => symbolic(&fp, 1, 2),
            _ => plus_minus_i(&fp),
        };
        ensure(ok, || format!("{s}: fixed points {fp:?}"))?;
    }
    Ok("five matrices and fixed-point data, q = -1 specializations".into())
}

fn admissible() -> Check {
    let c4 = FieldContext::get(4);
    let sets = admissible_sigma_sets(&CycElem::from_i64(&c4, -1)).map_err(err)?;
    let want: Vec<PermS4> = ["2143", "3421", "4312"].iter().map(|s| s.parse().unwrap()).collect();
    ensure(sets.len() == 1 && sets[0].perms == want, || format!("{} sets at q = -1", sets.len()))?;
    let i = p1(gaussian(1, 0), gaussian(0, 1));
    let mi = p1(gaussian(1, 0), gaussian(0, -1));
    ensure(
        matches!(&sets[0].fixed_points, FixedPointReport::InField([a, b]) if (*a == i && *b == mi) || (*a == mi && *b == i)),
        || "shared fixed points are not [1:±i]".into(),
    )?;
    for n in [1, 4] {
        let s = admissible_sigma_sets(&CycElem::from_i64(&FieldContext::get(n), 5)).map_err(err)?;
        ensure(s.is_empty(), || format!("q = 5 over conductor {n} gives {} sets", s.len()))?;
    }
    let c6 = FieldContext::get(6);
    for k in [1, 5] {
        let q = CycElem::zeta_pow(&c6, k);
        ensure((&(&q * &q) - &q + CycElem::one(&c6)).is_zero(), || "not anharmonic".into())?;
        ensure(admissible_sigma_sets(&q).map_err(err)?.is_empty(), || format!("anharmonic ζ6^{k}"))?;
    }
    Ok("harmonic triple with [1:±i]; q = 5 and anharmonic empty".into())
}

fn concurrency() -> Check {
    let rows = concurrency_scan(3, 11).map_err(err)?;
    ensure(rows.len() == 9, || format!("{} rows", rows.len()))?;
    let mut planes = 0;
    for m in 3..=11u32 {
        let row = &rows[(m - 3) as usize];
        ensure(row.count == 2 && row.spot_check_count == 2 && row.formula_points_found, || format!("m = {m}: {row:?}"))?;
        // every plane through a row and a column
        for i in 0..m {
            for j in 0..m {
                let pts: Vec<ProjPoint> = concurrency_points(m, i, j).map_err(err)?.into_iter().map(|p| p.q).collect();
                let f = formula_points(m, i, j);
                ensure(pts.len() == 2 && f.iter().all(|x| pts.contains(x)), || format!("m={m} i={i} j={j}: {pts:?}"))?;
                planes += 1;
            }
        }
    }
    Ok(format!("{planes} planes, each with exactly the two formula points"))
}

fn geproci(em: &mut Emitted) -> Check {
    let cases = [
        (3, HalfGridVariant::Y1, 3, 4),
        (4, HalfGridVariant::Full, 4, 6),
        (5, HalfGridVariant::Y1, 5, 6),
        (6, HalfGridVariant::Full, 6, 8),
    ];
    let mut done = Vec::new();
    for (m, v, a, b) in cases {
        let z = standard_halfgrid(m, v).map_err(err)?;
        em.config_lines(&z);
        for seed in [1, 2] {
            let verdict = is_geproci(&z, a, b, 5, seed).map_err(err)?;
            ensure(verdict.geproci, || format!("m={m} {v:?} seed {seed}: {:?}", verdict.failures))?;
            let cert = verdict.cert.ok_or("missing certificate")?;
            ensure(cert.trials.len() == 5, || "trial count".into())?;
            cert.validate_against(&z).map_err(err)?;
            em.geproci.push((z.clone(), cert));
        }
        done.push(format!("m={m} ({a},{b})"));
    }
    Ok(format!("{} with seeds 1, 2 and 5 trials each", done.join(", ")))
}

fn equivalences(em: &mut Emitted) -> Check {
    let full = standard_halfgrid(4, HalfGridVariant::Full).map_err(err)?;
    let f4 = f4_root_model();
    em.config_lines(&f4);
    let mut worst = Duration::ZERO;
    let mut check = |a: Config, b: &Config, what: String| -> Result<(), String> {
        let t = Instant::now();
        let Equivalence::Equivalent(cert) = find_projective_equivalence(&a, b).map_err(err)? else {
            return Err(format!("{what}: not equivalent"));
        };
        cert.validate(&a, b).map_err(err)?;
        worst = worst.max(t.elapsed());
        ensure(worst < Duration::from_secs(120), || format!("{what} took {worst:?}"))?;
        em.lines.extend(a.lines().iter().map(|l| l.pluecker.clone()));
        em.equivalences.push((a, b.clone(), cert));
        Ok(())
    };
    for rows in [[1, 2], [3, 5], [4, 6]] {
        check(assemble_pair(rows).map_err(err)?, &full, format!("pair {rows:?}"))?;
    }
    check(full.clone(), &f4, "full half grid vs F4".into())?;
    Ok(format!("three pairs and the F4 model, explicit matrices validated (slowest {:.2} s)", worst.as_secs_f64()))
}

fn three_lines() -> Check {
    let full = standard_halfgrid(4, HalfGridVariant::Full).map_err(err)?;
    let lines: Vec<&ProjLine3> = full.halfgrid_lines().into_iter().map(|l| &l.pluecker).collect();
    ensure(lines.len() == 6, || format!("{} half-grid lines", lines.len()))?;
    let mut n = 0;
    for a in 0..6 {
        for b in a + 1..6 {
            for c in b + 1..6 {
                three_line_grid_check(&full, [lines[a], lines[b], lines[c]]).map_err(|e| format!("{a},{b},{c}: {e}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} triples"))
}

fn structure(em: &mut Emitted) -> Check {
    for m in 3..=6u32 {
        let mu = m as usize;
        let g = standard_grid(m).map_err(err)?;
        ensure(matches!(detect_structure(&g, mu, mu).map_err(err)?, Structure::Grid(_)), || format!("grid m={m}"))?;
        em.config_lines(&g);
        for (v, b) in [(HalfGridVariant::Y1, mu + 1), (HalfGridVariant::Y2, mu + 1), (HalfGridVariant::Full, mu + 2)] {
            let z = standard_halfgrid(m, v).map_err(err)?;
            let s = detect_structure(&z, mu, b).map_err(err)?;
            ensure(matches!(s, Structure::HalfGrid(_)), || format!("{v:?} m={m}: {s:?}"))?;
            em.config_lines(&z);
            em.lines.extend(incidence_lines(&z, 3).into_iter().map(|l| l.line));
        }
    }
    Ok("grids are grids; Y1, Y2 and full half grids are half grids, m = 3..6".into())
}

fn mobius_value(n: u32) -> i64 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn random_elem(rng: &mut Pcg64, ctx: &Arc<FieldContext>) -> CycElem {
    let cs: Vec<Rat> = (0..ctx.degree()).map(|_| rat_frac(rng.random_range(-9..=9), rng.random_range(1..=5))).collect();
    CycElem::from_coeffs(ctx, &cs).unwrap()
}

/// Field axioms, cyclotomic identities and cross ratios on 10³ samples each,
/// then every recorded line and certificate.
fn properties(em: &mut Emitted) -> Check {
    let mut rng = Pcg64::seed_from_u64(2024);
    let samples = 1000;
    for s in 0..samples {
        let n = rng.random_range(1..=30u32);
        let ctx = FieldContext::get(n);
        let (a, b, c) = (random_elem(&mut rng, &ctx), random_elem(&mut rng, &ctx), random_elem(&mut rng, &ctx));
        let ok = &a + &b == &b + &a
            && &a * &b == &b * &a
            && &(&a * &b) * &c == &a * &(&b * &c)
            && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
            && (&a + &(-&a)).is_zero()
            && (a.is_zero() || (&a * &a.inv().unwrap()).is_one());
        ensure(ok, || format!("field axioms fail at sample {s}, N = {n}"))?;
        // Φ_N vanishes at ζ_N, ζ_N has order N, and the primitive roots sum to μ(N)
        let phi = cyclotomic_coeffs(n);
        let z = CycElem::zeta_pow(&ctx, 1);
        let at_zeta = phi.iter().enumerate().fold(CycElem::zero(&ctx), |acc, (k, &c)| &acc + &CycElem::zeta_pow(&ctx, k as i64).scale_i64(c));
        let order_ok = z.pow(n as i64).unwrap().is_one() && (1..n).all(|k| !z.pow(k as i64).unwrap().is_one());
        let primitive_sum = (1..=n)
            .filter(|&k| num_gcd(k, n) == 1)
            .fold(CycElem::zero(&ctx), |acc, k| &acc + &CycElem::zeta_pow(&ctx, k as i64));
        ensure(
            at_zeta.is_zero()
                && order_ok
                && phi.len() == euler_phi(n) + 1
                && primitive_sum == CycElem::from_i64(&ctx, mobius_value(n)),
            || format!("cyclotomic identity fails for N = {n}"),
        )?;
    }
    let c4 = FieldContext::get(4);
    let klein: Vec<PermS4> = ["2143", "3412", "4321"].iter().map(|s| s.parse().unwrap()).collect();
    let mut quads = 0;
    while quads < samples {
        let pts: Vec<ProjPoint> = (0..4)
            .map(|_| loop {
                let v = [random_elem(&mut rng, &c4), random_elem(&mut rng, &c4)];
                if let Ok(p) = ProjPoint::new(v.to_vec()) {
                    break p;
                }
            })
            .collect();
        if (0..4).any(|i| (i + 1..4).any(|j| pts[i] == pts[j])) {
            continue;
        }
        let base = cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]).map_err(err)?.value;
        for s in &klein {
            let q: Vec<&ProjPoint> = (1..=4).map(|k| &pts[s.apply(k) - 1]).collect();
            let v = cross_ratio(q[0], q[1], q[2], q[3]).map_err(err)?.value;
            ensure(v == base, || format!("cross ratio changes under {s}"))?;
        }
        quads += 1;
    }
    for l in &em.lines {
        ensure(l.pluecker_relation().is_zero(), || format!("Plücker relation fails on {l:?}"))?;
    }
    for (z, cert) in &em.geproci {
        let back = GeprociCert::from_json(&cert.to_json()).map_err(err)?;
        back.validate_against(z).map_err(err)?;
    }
    for (a, b, cert) in &em.equivalences {
        cert.validate(a, b).map_err(err)?;
    }
    Ok(format!(
        "{samples} field samples, {quads} quadruples, {} lines, {} certificates, 0 violations",
        em.lines.len(),
        em.geproci.len() + em.equivalences.len()
    ))
}

fn num_gcd(a: u32, b: u32) -> u32 {
    num_integer::gcd(a, b)
}

fn main() -> ExitCode {
    let mut em = Emitted::default();
    let mut failures = 0;
    let mut run = |n: u32, title: &str, limit: Option<u64>, f: &mut dyn FnMut(&mut Emitted) -> Check| {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(|| f(&mut em)));
        let t = start.elapsed();
        let (mut ok, mut detail) = match res {
            Ok(Ok(d)) => (true, d),
            Ok(Err(e)) => (false, e),
            Err(p) => (false, p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into())),
        };
        if let Some(l) = limit {
            if t > Duration::from_secs(l) {
                ok = false;
                detail = format!("over the {l} s limit; {detail}");
            }
        }
        let limit = limit.map(|l| format!(" / {l} s")).unwrap_or_default();
        println!("{} criterion {n:>2}: {title} [{:.2} s{limit}] {detail}", if ok { "PASS" } else { "FAIL" }, t.as_secs_f64());
        if !ok {
            failures += 1;
        }
    };
    run(1, "external lines", Some(5), &mut |em| table3(em));
    run(2, "first-row points", Some(5), &mut |_| first_row_points());
    run(3, "row pairing", Some(5), &mut |_| pairing());
    run(4, "Möbius tables", Some(5), &mut |_| tables12());
    run(5, "admissible permutation sets", Some(5), &mut |_| admissible());
    run(6, "concurrency points m = 3..11", Some(60), &mut |_| concurrency());
    run(7, "geproci certificates", Some(600), &mut |em| geproci(em));
    run(8, "projective equivalences", Some(480), &mut |em| equivalences(em));
    run(9, "three-line grid checks", Some(30), &mut |_| three_lines());
    run(10, "structure detection m = 3..6", Some(60), &mut |em| structure(em));
    run(11, "property suites", None, &mut |em| properties(em));
    println!("{} of 11 criteria pass", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
