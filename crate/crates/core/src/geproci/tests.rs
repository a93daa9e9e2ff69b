use super::*;
use crate::halfgrid::{standard_grid, standard_halfgrid, HalfGridVariant};

fn q() -> Arc<FieldContext> {
    FieldContext::get(1)
}

fn det3(p: &[CycElem], q: &[CycElem], r: &[CycElem]) -> CycElem {
    let m = vec![p.to_vec(), q.to_vec(), r.to_vec()];
    linalg::det(&m, p[0].context()).unwrap()
}

fn random_points(seed: u64, n: usize) -> Config {
    let pts = sample_centers(seed, n)
        .enumerate()
        .map(|(k, c)| (format!("Z[{k}]"), ProjPoint::from_ints(&q(), &c)))
        .collect();
    Config::new(1, pts, vec![]).unwrap()
}

fn plane() -> Plane3 {
    Plane3::from_ints(&q(), &IMAGE_PLANE)
}

/// Dense product of two forms, by brute-force expansion over monomials.
fn mul_forms(f: &[CycElem], df: usize, g: &[CycElem], dg: usize) -> Vec<CycElem> {
    let ctx = f[0].context().clone();
    let target = monomials(df + dg);
    let mut out = vec![CycElem::zero(&ctx); target.len()];
    for (c, m) in f.iter().zip(monomials(df)) {
        for (e, n) in g.iter().zip(monomials(dg)) {
            let k = target.iter().position(|t| *t == [m[0] + n[0], m[1] + n[1], m[2] + n[2]]).unwrap();
            out[k] = &out[k] + &(c * e);
        }
    }
    out
}

fn cross(p: &[CycElem], r: &[CycElem]) -> Vec<CycElem> {
    vec![
        &(&p[1] * &r[2]) - &(&p[2] * &r[1]),
        &(&p[2] * &r[0]) - &(&p[0] * &r[2]),
        &(&p[0] * &r[1]) - &(&p[1] * &r[0]),
    ]
}

#[test]
fn monomial_order() {
    assert_eq!(monomials(2), vec![[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]]);
    assert_eq!(monomials(6).len(), 28);
}

#[test]
fn projection_basics() {
    let ctx = q();
    let line_pts = Config::new(
        1,
        (0..4).map(|t| (format!("A[{t}]"), ProjPoint::from_ints(&ctx, &[1, t, 2 * t, 3]))).collect(),
        vec![],
    )
    .unwrap();
    let s = project(&line_pts, &ProjPoint::from_ints(&ctx, &[5, -1, 2, 9]), &plane()).unwrap();
    assert!(det3(&s.points[0], &s.points[1], &s.points[3]).is_zero());
    // center on the line through A[0] and A[1]
    let on_secant = ProjPoint::from_ints(&ctx, &[2, 1, 2, 6]);
    assert_eq!(project(&line_pts, &on_secant, &plane()), Err(Error::SecantCollision));
    assert_eq!(
        project(&line_pts, &ProjPoint::from_ints(&ctx, &[1, 0, 0, 0]).clone(), &Plane3::from_ints(&ctx, &[0, 1, 0, 0])),
        Err(Error::CenterOnPlane)
    );

    let full = standard_halfgrid(4, HalfGridVariant::Full).unwrap();
    let s = project(&full, &ProjPoint::from_ints(&ctx, &[17, -5, 3, 11]), &plane()).unwrap();
    assert_eq!(s.len(), 24);
    // the six half-grid lines stay lines
    for l in full.halfgrid_lines() {
        let idx: Vec<usize> = full
            .points_on(&l.pluecker)
            .iter()
            .map(|lab| full.points().iter().position(|p| p.label == *lab).unwrap())
            .collect();
        assert!(det3(&s.points[idx[0]], &s.points[idx[1]], &s.points[idx[3]]).is_zero());
    }
}

#[test]
fn degenerate_projection_from_a_grid_line() {
    let g = standard_grid(3).unwrap();
    let (a, b) = g.line("M[0]").unwrap().spanning_points();
    let ctx = g.context().clone();
    let c = ProjPoint::new(a.coords().iter().zip(b.coords()).map(|(x, y)| &(x * &CycElem::from_i64(&ctx, 7)) + y).collect()).unwrap();
    assert!(g.find(&c).is_none());
    assert_eq!(project(&g, &c, &plane()), Err(Error::SecantCollision));
}

#[test]
fn kernel_dimensions() {
    let two = PlanarConfig::from_ints(&[[1, 0, 0], [0, 1, 0]]).unwrap();
    assert_eq!(vanishing_forms(&two, 1).unwrap().len(), 1);
    let full = standard_halfgrid(4, HalfGridVariant::Full).unwrap();
    let s = project(&full, &ProjPoint::from_ints(&q(), &[17, -5, 3, 11]), &plane()).unwrap();
    let k4 = vanishing_forms(&s, 4).unwrap();
    let k6 = vanishing_forms(&s, 6).unwrap();
    // rank oracle: 15 - rank and 28 - rank of the evaluation matrices
    assert_eq!(k4.len(), 15 - linalg::rank(&evaluation_matrix(&s, 4)).unwrap());
    assert_eq!((k4.len(), k6.len()), (1, 7));
    for p in &s.points {
        assert!(eval_form(&k4[0], 4, p).is_zero());
    }
}

#[test]
fn planar_grid_certifies() {
    let s = PlanarConfig::from_ints(&[[0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1]]).unwrap();
    let rec = ci_certify(&s, 2, 2).unwrap();
    rec.validate(2, 2).unwrap();
    // x(x - z) is one of the line-pair conics
    let ctx = q();
    let xs = |v: &[i64]| v.iter().map(|&x| CycElem::from_i64(&ctx, x)).collect::<Vec<_>>();
    let pair = mul_forms(&xs(&[1, 0, 0]), 1, &xs(&[1, 0, -1]), 1);
    let k = vanishing_forms(&s, 2).unwrap();
    let mut m = k.clone();
    m.push(pair);
    assert_eq!(linalg::rank(&m).unwrap(), k.len());

    let generic = PlanarConfig::new(
        sample_centers(3, 24).map(|c| c[..3].iter().map(|&x| CycElem::from_i64(&ctx, x)).collect()).collect(),
    )
    .unwrap();
    assert!(matches!(ci_certify(&generic, 4, 6), Err(Error::NotCompleteIntersection(_))));
    assert!(ci_certify(&generic, 6, 4).is_err());
    // four points on a line: the conics through them all contain the line
    let collinear = PlanarConfig::from_ints(&[[1, 0, 0], [0, 1, 0], [1, 1, 0], [1, 2, 0]]).unwrap();
    assert!(matches!(ci_certify(&collinear, 2, 2), Err(Error::NotCompleteIntersection(_))));
}

#[test]
fn grid_line_products_lie_in_kernels() {
    let g = standard_grid(3).unwrap();
    let s = project(&g, &ProjPoint::from_ints(&q(), &[4, -7, 9, 2]), &plane()).unwrap();
    let index = |lab: &str| g.points().iter().position(|p| p.label == lab).unwrap();
    let k3 = vanishing_forms(&s, 3).unwrap();
    for family in ["M", "L"] {
        let mut prod: Option<Vec<CycElem>> = None;
        for r in 0..3 {
            let on = g.points_on(g.line(&format!("{family}[{r}]")).unwrap());
            let f = cross(&s.points[index(on[0])], &s.points[index(on[1])]);
            // r lines multiplied so far
            prod = Some(match prod {
                None => f,
                Some(p) => mul_forms(&p, r, &f, 1),
            });
        }
        let mut m = k3.clone();
        m.push(prod.unwrap());
        assert_eq!(linalg::rank(&m).unwrap(), k3.len(), "{family}");
    }
    assert!(ci_certify(&s, 3, 3).is_ok());
}

#[test]
fn geproci_verdicts() {
    let d4 = standard_halfgrid(3, HalfGridVariant::Y1).unwrap();
    let v = is_geproci(&d4, 3, 4, 5, 1).unwrap();
    assert!(v.geproci, "{:?}", v.failures);
    let cert = v.cert.unwrap();
    assert_eq!(cert.trials.len(), 5);
    cert.validate_against(&d4).unwrap();

    let full = standard_halfgrid(4, HalfGridVariant::Full).unwrap();
    for seed in [1, 2] {
        let v = is_geproci(&full, 4, 6, 5, seed).unwrap();
        assert!(v.geproci, "seed {seed}");
        let cert = v.cert.unwrap();
        let back = GeprociCert::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        back.validate_against(&full).unwrap();
    }

    let v = is_geproci(&random_points(5, 24), 4, 6, 2, 1).unwrap();
    assert!(!v.geproci && v.cert.is_none());
    assert_eq!(v.failures.len(), 2);
    assert!(is_geproci(&full, 4, 5, 1, 1).is_err());
}

#[test]
fn tampered_certificates_fail() {
    let g = standard_grid(3).unwrap();
    let cert = is_geproci(&g, 3, 3, 1, 9).unwrap().cert.unwrap();
    cert.validate().unwrap();
    let mut bad = cert.clone();
    bad.trials[0].f_a[0] = &bad.trials[0].f_a[0] + &CycElem::one(bad.trials[0].f_a[0].context());
    assert!(bad.validate().is_err());
    let mut bad = cert.clone();
    bad.trials[0].witness.value = &bad.trials[0].witness.value + &CycElem::one(bad.trials[0].witness.value.context());
    assert!(bad.validate().is_err());
    let mut bad = cert;
    bad.trials[0].image.pop();
    assert!(bad.validate().is_err());
}
