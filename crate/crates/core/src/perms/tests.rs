use proptest::prelude::*;

use super::*;
use crate::exactalg::{rat_frac, CycElem, FieldContext};
use crate::projgeom::CrossRatioKind;

fn p(s: &str) -> PermS4 {
    s.parse().unwrap()
}

fn ints(n: u32, v: i64) -> CycElem {
    CycElem::from_i64(&FieldContext::get(n), v)
}

fn mob(a: &CycElem, b: &CycElem, c: &CycElem, d: &CycElem) -> Mobius {
    Mobius::new([[a.clone(), b.clone()], [c.clone(), d.clone()]]).unwrap()
}

#[test]
fn permutation_basics() {
    assert_eq!(p("(2,1,3,4)").fixed_points(), vec![3, 4]);
    let s = p("2143");
    assert!(s.fixed_points().is_empty() && s.is_involution());
    let c = p("(3,4,2,1)");
    assert!(c.fixed_points().is_empty() && !c.is_involution());
    // composing with itself gives (2,1,4,3), not the identity
    assert_eq!(c.compose(&c), p("2143"));
    assert_eq!(c.order(), 4);
    assert_eq!(c.compose(&c.inverse()), PermS4::identity());
    assert_eq!(PermS4::all().len(), 24);
    assert!("(1,1,2,3)".parse::<PermS4>().is_err());
    assert_eq!(serde_json::to_string(&c).unwrap(), "[3,4,2,1]");
    assert_eq!(serde_json::from_str::<PermS4>("[3,4,2,1]").unwrap(), c);
    assert_eq!(c.to_string(), "(3,4,2,1)");
}

#[test]
fn stabilizers() {
    let generic = normalized_quadruple(&ints(1, 5));
    let s = stabilizer_permutations(&generic).unwrap();
    assert_eq!(s, vec![p("1234"), p("2143"), p("3412"), p("4321")]);

    let harmonic = normalized_quadruple(&ints(1, -1));
    let s = stabilizer_permutations(&harmonic).unwrap();
    let mut expected = vec![
        p("1234"), p("2143"), p("3412"), p("4321"),
        p("2134"), p("1243"), p("3421"), p("4312"),
    ];
    expected.sort();
    assert_eq!(s, expected);

    // anharmonic: q with 1/q a primitive sixth root of unity
    let c6 = FieldContext::get(6);
    let q = CycElem::zeta_pow(&c6, 5);
    let quad = normalized_quadruple(&q);
    let cr = crate::projgeom::cross_ratio(&quad[0], &quad[1], &quad[2], &quad[3]).unwrap();
    assert_eq!(cr.kind, CrossRatioKind::Anharmonic);
    let s = stabilizer_permutations(&quad).unwrap();
    assert_eq!(s.len(), 12);
    // oracle: the defining formula on the permuted P¹ coordinates
    let coords: Vec<(CycElem, CycElem)> = quad.iter().map(|x| (x.coords()[0].clone(), x.coords()[1].clone())).collect();
    let j = |o: [usize; 4]| {
        let d = |a: usize, b: usize| &(&coords[a].0 * &coords[b].1) - &(&coords[a].1 * &coords[b].0);
        &(&d(o[0], o[2]) * &d(o[1], o[3])) / &(&d(o[0], o[3]) * &d(o[1], o[2]))
    };
    let base = j([0, 1, 2, 3]);
    let brute: Vec<PermS4> = PermS4::all()
        .into_iter()
        .filter(|s| j([0, 1, 2, 3].map(|k| s.apply(k + 1) - 1)) == base)
        .collect();
    assert_eq!(s, brute);
}

#[test]
fn table_one_matrices() {
    for qv in [5i64, -1, 7, -3] {
        let q = ints(1, qv);
        let pts = normalized_quadruple(&q);
        let (zero, one) = (ints(1, 0), ints(1, 1));
        let m = mobius_from_permutation(&pts, &p("2143")).unwrap();
        assert_eq!(m, mob(&zero, &one, &q, &zero));
        let m = mobius_from_permutation(&pts, &p("3412")).unwrap();
        assert_eq!(m, mob(&q, &-&one, &q, &-&q));
        let m = mobius_from_permutation(&pts, &p("4321")).unwrap();
        assert_eq!(m, mob(&one, &-&one, &q, &-&one));
    }
    let pts = normalized_quadruple(&ints(1, -1));
    assert_eq!(mobius_from_permutation(&pts, &p("3421")).unwrap(), Mobius::from_ints(&FieldContext::get(1), [[1, -1], [1, 1]]));
    assert_eq!(mobius_from_permutation(&pts, &p("4312")).unwrap(), Mobius::from_ints(&FieldContext::get(1), [[1, 1], [-1, 1]]));
    let generic = normalized_quadruple(&ints(1, 5));
    assert!(matches!(
        mobius_from_permutation(&generic, &p("3421")),
        Err(Error::NotCrossRatioPreserving(_))
    ));
}

#[test]
fn fixed_points() {
    let c4 = FieldContext::get(4);
    let i = CycElem::zeta_pow(&c4, 1);
    let one = CycElem::one(&c4);
    let pm_i = |report: FixedPointReport| match report {
        FixedPointReport::InField([a, b]) => {
            let pi = ProjPoint::new(vec![one.clone(), i.clone()]).unwrap();
            let mi = ProjPoint::new(vec![one.clone(), -&i]).unwrap();
            (a == pi && b == mi) || (a == mi && b == pi)
        }
        _ => false,
    };
    assert!(pm_i(mobius_fixed_points(&Mobius::from_ints(&c4, [[0, 1], [-1, 0]])).unwrap()));
    assert!(pm_i(mobius_fixed_points(&Mobius::from_ints(&c4, [[1, 1], [-1, 1]])).unwrap()));
    assert!(pm_i(mobius_fixed_points(&Mobius::from_ints(&c4, [[1, -1], [1, 1]])).unwrap()));
    // (3,4,1,2) at q = -1: [1:-1±√2]
    let f = Mobius::from_ints(&c4, [[-1, -1], [-1, 1]]);
    assert_eq!(
        mobius_fixed_points(&f).unwrap(),
        FixedPointReport::Symbolic {
            center: CycElem::from_i64(&c4, -1),
            radicand: CycElem::from_i64(&c4, 2)
        }
    );
    // over ζ8 the same map splits
    let c8 = FieldContext::get(8);
    assert!(matches!(
        mobius_fixed_points(&Mobius::from_ints(&c8, [[-1, -1], [-1, 1]])).unwrap(),
        FixedPointReport::InField(_)
    ));
    assert!(matches!(
        mobius_fixed_points(&Mobius::from_ints(&c4, [[2, 0], [0, 2]])),
        Err(Error::IdentityMap)
    ));
    // upper triangular: fixed points [0:1] and [a-d:c]
    let f = Mobius::from_ints(&c4, [[3, 0], [1, 1]]);
    let FixedPointReport::InField(pts) = mobius_fixed_points(&f).unwrap() else { panic!() };
    for x in &pts {
        assert_eq!(f.apply(x).unwrap(), *x);
    }
    assert_eq!(pts[1], ProjPoint::from_ints(&c4, &[2, 1]));
}

#[test]
fn admissible_sets() {
    let c4 = FieldContext::get(4);
    let sets = admissible_sigma_sets(&CycElem::from_i64(&c4, -1)).unwrap();
    assert_eq!(sets.len(), 1);
    assert_eq!(sets[0].perms, vec![p("2143"), p("3421"), p("4312")]);
    let i = CycElem::zeta_pow(&c4, 1);
    let FixedPointReport::InField(pts) = &sets[0].fixed_points else { panic!() };
    let one = CycElem::one(&c4);
    assert!(pts.contains(&ProjPoint::new(vec![one.clone(), i.clone()]).unwrap()));
    assert!(pts.contains(&ProjPoint::new(vec![one, -&i]).unwrap()));

    // together with the identity, a Latin square
    for k in 1..=4 {
        let mut col: Vec<usize> = std::iter::once(k).chain(sets[0].perms.iter().map(|s| s.apply(k))).collect();
        col.sort();
        assert_eq!(col, vec![1, 2, 3, 4]);
    }

    assert!(admissible_sigma_sets(&CycElem::from_i64(&c4, 5)).unwrap().is_empty());
    let c6 = FieldContext::get(6);
    assert!(admissible_sigma_sets(&CycElem::zeta_pow(&c6, 1)).unwrap().is_empty());
    assert!(admissible_sigma_sets(&CycElem::zeta_pow(&c6, 5)).unwrap().is_empty());
    assert!(admissible_sigma_sets(&CycElem::one(&c4)).is_err());
    assert!(admissible_sigma_sets(&CycElem::from_rat(&c4, &rat_frac(0, 1))).is_err());
}

proptest! {
    #[test]
    fn stabilizer_maps_are_exact(qn in -20i64..20, qd in 1i64..6) {
        let c4 = FieldContext::get(4);
        let q = CycElem::from_rat(&c4, &rat_frac(qn, qd));
        prop_assume!(!q.is_zero() && q != CycElem::one(&c4));
        let pts = normalized_quadruple(&q);
        for s in stabilizer_permutations(&pts).unwrap() {
            let f = mobius_from_permutation(&pts, &s).unwrap();
            for k in 1..=4 {
                prop_assert_eq!(f.apply(&pts[k - 1]).unwrap(), pts[s.apply(k) - 1].clone());
            }
            if s != PermS4::identity() {
                match mobius_fixed_points(&f).unwrap() {
                    FixedPointReport::InField(fp) => {
                        for x in &fp {
                            prop_assert_eq!(f.apply(x).unwrap(), x.clone());
                        }
                    }
                    FixedPointReport::Symbolic { radicand, .. } => {
                        prop_assert!(!matches!(sqrt_in_field(&radicand), SquareTest::Square(_)));
                    }
                }
            }
        }
    }
}

#[test]
fn admissible_report_explains() {
    let c1 = FieldContext::get(1);
    let r = admissible_report(&CycElem::from_i64(&c1, 5)).unwrap();
    assert_eq!(r.stabilizer.len(), 4);
    assert_eq!(r.with_fixed_points, vec![PermS4::identity()]);
    assert_eq!(r.groups.len(), 3);
    assert!(r.groups.iter().all(|g| g.verdict == GroupVerdict::Alone));

    let c4 = FieldContext::get(4);
    let r = admissible_report(&CycElem::from_i64(&c4, -1)).unwrap();
    assert_eq!(r.stabilizer.len(), 8);
    // identity, (2,1,3,4) and (1,2,4,3) fix something
    assert_eq!(r.with_fixed_points.len(), 3);
    let kept: Vec<&FixedPointGroup> = r.groups.iter().filter(|g| g.verdict == GroupVerdict::Kept).collect();
    assert_eq!(kept.len(), 1);
    assert_eq!(kept[0].perms, vec![p("2143"), p("3421"), p("4312")]);
}
