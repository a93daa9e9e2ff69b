use super::*;
use crate::exactalg::{CycElem, FieldContext};
use crate::projgeom::{line_through, ProjLine3, ProjPoint};

/// Orbit of p00 under the two generators, by brute force.
fn orbit_oracle(m: u32) -> Vec<ProjPoint> {
    let start = grid_point(m, 0, 0);
    let mut out = vec![start];
    let mut k = 0;
    while k < out.len() {
        let p = out[k].clone();
        let c = p.coords();
        let u = u_pow(m, 1);
        for img in [
            vec![c[0].clone(), c[1].clone(), &c[2] * &u, &c[3] * &u],
            vec![c[0].clone(), &c[1] * &u, c[2].clone(), &c[3] * &u],
        ] {
            let q = ProjPoint::new(img).unwrap();
            if !out.contains(&q) {
                out.push(q);
            }
        }
        k += 1;
    }
    out
}

#[test]
fn standard_grid_examples() {
    let g = standard_grid(3).unwrap();
    assert_eq!(g.len(), 9);
    let ctx = g.context().clone();
    assert_eq!(*g.point("p[0][0]").unwrap(), ProjPoint::from_ints(&ctx, &[1, 1, 1, 1]));
    let u = u_pow(3, 1);
    let p12 = ProjPoint::new(vec![CycElem::one(&ctx), &u * &u, u.clone(), CycElem::one(&ctx)]).unwrap();
    assert_eq!(*g.point("p[1][2]").unwrap(), p12);
    for m in 3..=5u32 {
        let g = standard_grid(m).unwrap();
        let orbit = orbit_oracle(m);
        assert_eq!(orbit.len(), (m * m) as usize);
        for p in &orbit {
            assert!(g.find(p).is_some());
        }
        for i in 0..m as i64 {
            let mi = g.line(&format!("M[{i}]")).unwrap();
            assert_eq!(g.points_on(mi).len(), m as usize);
            for j in 0..m as i64 {
                let lj = g.line(&format!("L[{j}]")).unwrap();
                let common: Vec<&str> = g.points_on(mi).into_iter().filter(|l| g.points_on(lj).contains(l)).collect();
                assert_eq!(common, vec![format!("p[{i}][{j}]")]);
            }
        }
    }
    assert!(standard_grid(2).is_err());
}

#[test]
fn y_set_examples() {
    let (y1, y2) = y_sets(4).unwrap();
    let ctx = FieldContext::get(4);
    assert_eq!(y1[0], ProjPoint::from_ints(&ctx, &[-1, 0, 0, 1]));
    let l = line_through(&y1[0], &y1[1]).unwrap();
    assert!(l.contains(&y1[2]));
    assert_eq!(l, y_lines(4)[0]);
    let l2 = line_through(&y2[0], &y2[1]).unwrap();
    assert!(l2.contains(&y2[3]));
    // Y1 meets the plane spanned by M_i and L_j in [-1:0:0:u^(i+j)]
    let m = 4;
    for i in 0..m as i64 {
        for j in 0..m as i64 {
            let (a, b) = (grid_row_line(m, i), grid_column_line(m, j));
            let (p, q) = b.spanning_points();
            let other = if a.contains(&p) { q } else { p };
            let plane = a.plane_through(&other).unwrap();
            let hits: Vec<&ProjPoint> = y1.iter().filter(|y| plane.contains(y)).collect();
            let expected = ProjPoint::new(vec![
                CycElem::from_i64(&ctx, -1),
                CycElem::zero(&ctx),
                CycElem::zero(&ctx),
                u_pow(m, i + j),
            ])
            .unwrap();
            assert_eq!(hits, vec![&expected]);
        }
    }
}

#[test]
fn standard_halfgrid_sizes() {
    let full = standard_halfgrid(4, HalfGridVariant::Full).unwrap();
    assert_eq!(full.len(), 24);
    assert_eq!(full.halfgrid_lines().len(), 6);
    for l in full.halfgrid_lines() {
        assert_eq!(full.points_on(&l.pluecker).len(), 4);
    }
    assert!(full.caveat.is_none());
    let d4 = standard_halfgrid(3, HalfGridVariant::Y1).unwrap();
    assert_eq!((d4.len(), d4.halfgrid_lines().len()), (12, 4));
    let five = standard_halfgrid(5, HalfGridVariant::Y1).unwrap();
    assert_eq!((five.len(), five.halfgrid_lines().len()), (30, 6));
    assert!(standard_halfgrid(5, HalfGridVariant::Full).unwrap().caveat.is_some());
}

#[test]
fn f4_model_points() {
    let f4 = f4_root_model();
    assert_eq!(f4.len(), 24);
    let ctx = FieldContext::get(1);
    assert!(f4.find(&ProjPoint::from_ints(&ctx, &[1, 0, 0, 0])).is_some());
    assert!(f4.find(&ProjPoint::from_ints(&ctx, &[1, 1, 0, 0])).is_some());
}

/// Number of 4-point subsets of rank 2; equals the number of 4-point lines
/// when no line carries five points.
fn collinear_quadruples(z: &Config) -> usize {
    let pts: Vec<Vec<CycElem>> = z.points().iter().map(|p| p.coords.coords().to_vec()).collect();
    let n = pts.len();
    let mut count = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let base = vec![pts[a].clone(), pts[b].clone(), pts[c].clone()];
                if crate::exactalg::linalg::rank(&base).unwrap() != 2 {
                    continue;
                }
                for p in &pts[c + 1..] {
                    let mut m = base.clone();
                    m.push(p.clone());
                    if crate::exactalg::linalg::rank(&m).unwrap() == 2 {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

#[test]
fn incidence_scan_counts() {
    let g3 = standard_grid(3).unwrap();
    assert_eq!(incidence_lines(&g3, 3).len(), 6);
    let full = standard_halfgrid(4, HalfGridVariant::Full).unwrap();
    let four = incidence_lines(&full, 4);
    assert_eq!(four.len(), collinear_quadruples(&full));
    assert_eq!(four.len(), 18);
    let f4 = f4_root_model();
    assert_eq!(incidence_lines(&f4, 4).len(), collinear_quadruples(&f4));
    let two = Config::new(1, vec![
        ("a".into(), ProjPoint::from_ints(&FieldContext::get(1), &[1, 0, 0, 0])),
        ("b".into(), ProjPoint::from_ints(&FieldContext::get(1), &[0, 1, 0, 0])),
    ], vec![]).unwrap();
    assert!(incidence_lines(&two, 3).is_empty());
}

#[test]
fn json_is_canonical() {
    let g = standard_halfgrid(3, HalfGridVariant::Y1).unwrap();
    let s = g.to_json();
    let back = Config::from_json(&s).unwrap();
    assert_eq!(back, g);
    assert_eq!(back.to_json(), s);
    let _: &ProjLine3 = g.line("T1").unwrap();
}

fn random_config(seed: u64, n: usize) -> Config {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_pcg::Pcg64::seed_from_u64(seed);
    let ctx = FieldContext::get(1);
    let pts = (0..n)
        .map(|k| {
            let c: Vec<i64> = (0..4).map(|_| rng.random_range(-50..=50)).collect();
            (format!("Z[{k}]"), ProjPoint::from_ints(&ctx, &c))
        })
        .collect();
    Config::new(1, pts, vec![]).unwrap()
}

#[test]
fn structure_detection() {
    let g = standard_grid(4).unwrap();
    let Structure::Grid(cert) = detect_structure(&g, 4, 4).unwrap() else { panic!("grid expected") };
    cert.validate(&g).unwrap();
    assert!(cert.incidence.iter().flatten().all(Option::is_some));

    let full = standard_halfgrid(4, HalfGridVariant::Full).unwrap();
    let Structure::HalfGrid(cert) = detect_structure(&full, 4, 6).unwrap() else { panic!("half grid expected") };
    assert_eq!(cert.lines.len(), 6);
    assert_eq!(cert.grid_refutation.points_per_line, 6);
    cert.validate(&full).unwrap();

    for m in 3..=6 {
        let z = standard_halfgrid(m, HalfGridVariant::Y1).unwrap();
        let s = detect_structure(&z, m as usize, m as usize + 1).unwrap();
        assert!(matches!(s, Structure::HalfGrid(_)), "m = {m}");
    }
    assert_eq!(detect_structure(&random_config(7, 24), 4, 6).unwrap(), Structure::Neither);
    assert!(detect_structure(&random_config(7, 23), 4, 6).is_err());
}

#[test]
fn f4_has_six_skew_four_point_lines() {
    let f4 = f4_root_model();
    let Structure::HalfGrid(cert) = detect_structure(&f4, 4, 6).unwrap() else { panic!() };
    assert_eq!(cert.lines.len(), 6);
}

#[test]
fn three_line_checks() {
    let full = standard_halfgrid(4, HalfGridVariant::Full).unwrap();
    let lines: Vec<&ProjLine3> = full.halfgrid_lines().iter().map(|l| &l.pluecker).collect();
    let mut triples = 0;
    for a in 0..6 {
        for b in a + 1..6 {
            for c in b + 1..6 {
                let cert = three_line_grid_check(&full, [lines[a], lines[b], lines[c]]).unwrap();
                assert_eq!(cert.b_lines.len(), 4);
                triples += 1;
            }
        }
    }
    assert_eq!(triples, 20);
    let g = standard_grid(4).unwrap();
    let l: Vec<&ProjLine3> = (0..3).map(|j| g.line(&format!("L[{j}]")).unwrap()).collect();
    assert_eq!(three_line_grid_check(&g, [l[0], l[1], l[2]]).unwrap().b_lines.len(), 4);

    // move p[0][0] along its column line: the row transversal now misses it
    let ctx = g.context().clone();
    let mut pts: Vec<(String, ProjPoint)> = g.points().iter().map(|p| (p.label.clone(), p.coords.clone())).collect();
    let (a, b) = l[0].spanning_points();
    let moved = ProjPoint::new(a.coords().iter().zip(b.coords()).map(|(x, y)| &(x * &CycElem::from_i64(&ctx, 3)) + y).collect()).unwrap();
    pts.retain(|(lab, _)| lab != "p[0][0]");
    pts.push(("p[0][0]".into(), moved));
    let bent = Config::new(g.conductor(), pts, vec![]).unwrap();
    assert!(three_line_grid_check(&bent, [l[0], l[1], l[2]]).is_err());
}

#[test]
fn equivalences() {
    let full = standard_halfgrid(4, HalfGridVariant::Full).unwrap();
    let Equivalence::Equivalent(cert) = find_projective_equivalence(&full, &full).unwrap() else { panic!() };
    cert.validate(&full, &full).unwrap();

    let f4 = f4_root_model();
    let Equivalence::Equivalent(cert) = find_projective_equivalence(&f4, &full).unwrap() else { panic!("F4 model") };
    cert.validate(&f4, &full).unwrap();

    // image under an invertible integer matrix
    let t = [[1, 2, 0, 1], [0, 1, 3, 0], [1, 0, 1, 1], [2, 1, 0, -1]];
    let ctx = f4.context().clone();
    let moved: Vec<(String, ProjPoint)> = f4
        .points()
        .iter()
        .map(|p| {
            let c = p.coords.coords();
            let img = t
                .iter()
                .map(|r| r.iter().zip(c).fold(CycElem::zero(&ctx), |acc, (&k, x)| &acc + &x.scale_i64(k)))
                .collect();
            (p.label.clone(), ProjPoint::new(img).unwrap())
        })
        .collect();
    let moved = Config::new(1, moved, vec![]).unwrap();
    let Equivalence::Equivalent(cert) = find_projective_equivalence(&f4, &moved).unwrap() else { panic!() };
    cert.validate(&f4, &moved).unwrap();
    assert_eq!(
        find_projective_equivalence(&f4, &random_config(3, 24)).unwrap(),
        Equivalence::NotEquivalent
    );
}
