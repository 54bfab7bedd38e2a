use proptest::prelude::*;
use slcsurf_core::divisor::{frac, q};
use slcsurf_core::surface::{
    quotient_genus, Curve, DeclaredHypotheses, GluingInvolution, MarkedPoint, NormalComponent, Violation,
};
use slcsurf_core::{Error, Matrix, QDivisor, Rational, StableLogSurface};

/// The plane with a smooth curve of degree `d` glued to itself by an
/// involution with `fixed` fixed points, plus `swapped` exchanged pairs of
/// marked points. Names carry `prefix` so copies can be combined.
fn plane_curve(prefix: &str, d: i64, fixed: u32, swapped: u32) -> StableLogSurface {
    let genus = ((d - 1) * (d - 2) / 2) as u32;
    let c = format!("{prefix}C");
    let mut points = Vec::new();
    let mut point_map = Vec::new();
    for i in 0..fixed {
        let p = format!("{prefix}F{i}");
        points.push(MarkedPoint::new(&p).with_different(q(0)));
        point_map.push((p.clone(), p));
    }
    for i in 0..swapped {
        let (a, b) = (format!("{prefix}A{i}"), format!("{prefix}B{i}"));
        points.push(MarkedPoint::new(&a));
        points.push(MarkedPoint::new(&b));
        point_map.push((a, b));
    }
    StableLogSurface {
        components: vec![NormalComponent {
            id: format!("{prefix}P2"),
            chi: 1,
            classes: vec!["H".into()],
            form: Matrix::from_ints(&[vec![1]]),
            canonical: QDivisor::from_terms([("H", q(-3))]),
            curves: vec![Curve { name: c.clone(), class: QDivisor::from_terms([("H", q(d))]), genus, points }],
            conductor: vec![c.clone()],
            boundary: vec![],
            singular_points: vec![],
        }],
        gluing: GluingInvolution { pairing: vec![(c.clone(), c)], point_map },
        global_index: 1,
        declared: DeclaredHypotheses::default(),
    }
}

/// Degrees `d >= 4` (so that `K + D` is ample) with an admissible fixed-point count.
fn plane_curve_params() -> impl Strategy<Value = (i64, u32, u32)> {
    (4i64..=8).prop_flat_map(|d| {
        let g = ((d - 1) * (d - 2) / 2) as u32;
        let admissible: Vec<u32> = (0..=2 * g + 2).filter(|&r| quotient_genus(g, r).is_ok()).collect();
        (Just(d), prop::sample::select(admissible), 0u32..3)
    })
}

struct Xorshift(u64);

impl Xorshift {
    fn below(&mut self, k: usize) -> usize {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 % k as u64) as usize
    }

    fn shuffle<T>(&mut self, v: &mut [T]) {
        for i in (1..v.len()).rev() {
            let j = self.below(i + 1);
            v.swap(i, j);
        }
    }
}

fn shuffled(s: &StableLogSurface, seed: u64) -> StableLogSurface {
    let mut t = s.clone();
    let mut rng = Xorshift(seed | 1);
    for comp in &mut t.components {
        for c in &mut comp.curves {
            rng.shuffle(&mut c.points);
        }
    }
    rng.shuffle(&mut t.gluing.point_map);
    for pair in &mut t.gluing.point_map {
        if rng.below(2) == 0 {
            *pair = (pair.1.clone(), pair.0.clone());
        }
    }
    t
}

#[test]
fn plane_quartic_invariants() {
    let s = plane_curve("", 4, 4, 0);
    assert!(s.validate().is_empty());
    let inv = s.invariants().unwrap();
    assert_eq!(inv.k_squared, q(1));
    assert_eq!(inv.chi, 3);
    assert_eq!(inv.chi_conductor, -2);
    assert_eq!(inv.chi_non_normal_locus, 0);
}

#[test]
fn ramification_violation() {
    let s = plane_curve("", 4, 2, 0);
    assert!(s.validate().iter().any(|v| matches!(v, Violation::Ramification { fixed_points: 2, .. })));
    assert!(matches!(s.invariants(), Err(Error::InvalidTriple(_))));
}

#[test]
fn declared_flags_are_checked() {
    let mut s = plane_curve("", 4, 4, 0);
    s.declared.normal = Some(true);
    assert!(s.validate().iter().any(|v| matches!(v, Violation::Hypothesis { .. })));
    let mut s = plane_curve("", 4, 4, 0);
    s.declared.semi_canonical = Some(true);
    assert!(s.validate().is_empty());
    assert!(s.hypotheses().unwrap().semi_canonical);
}

#[test]
fn index_integrality() {
    // K + D = H/2: Cartier only at index 2.
    let mut s = plane_curve("", 4, 4, 0);
    s.components[0].canonical = QDivisor::from_terms([("H", frac(-7, 2))]);
    assert!(s.validate().iter().any(|v| matches!(v, Violation::NonIntegral { .. })));
    s.global_index = 2;
    assert!(!s.validate().iter().any(|v| matches!(v, Violation::NonIntegral { .. })));
}

proptest! {
    #[test]
    fn plane_curve_invariants((d, r, swapped) in plane_curve_params()) {
        let s = plane_curve("", d, r, swapped);
        prop_assert_eq!(s.validate(), vec![]);
        let inv = s.invariants().unwrap();
        let g = (d - 1) * (d - 2) / 2;
        // 2g - 2 = 2(2g' - 2) + r.
        let g_quotient = (2 * g + 2 - r as i64) / 4;
        prop_assert_eq!(inv.k_squared, q((d - 3) * (d - 3)));
        prop_assert_eq!(inv.chi_conductor, 1 - g);
        prop_assert_eq!(inv.chi_non_normal_locus, 1 - g_quotient);
        prop_assert_eq!(inv.chi, 1 + (1 - g_quotient) - (1 - g));
        let locus = s.non_normal_locus().unwrap();
        prop_assert_eq!(locus.components[0].degree.clone(), Rational::from_integer((d * (d - 3)).into()) / q(2));
    }

    #[test]
    fn validation_is_idempotent_and_order_independent((d, r, swapped) in plane_curve_params(), seed in any::<u64>(), bad in any::<bool>()) {
        let mut s = plane_curve("", d, r, swapped);
        let broken = bad && swapped > 0;
        if broken {
            s.components[0].curves[0].points[r as usize].different = Some(q(1));
        }
        let first = s.validate();
        prop_assert_eq!(&first, &s.validate());
        let mut sorted = first.clone();
        sorted.sort();
        prop_assert_eq!(&first, &sorted);
        prop_assert_eq!(&first, &shuffled(&s, seed).validate());
        prop_assert_eq!(first.is_empty(), !broken);
    }

    #[test]
    fn different_must_be_invariant(dx in 0i64..3, dy in 0i64..3) {
        let mut s = plane_curve("", 4, 4, 1);
        let pts = &mut s.components[0].curves[0].points;
        let n = pts.len();
        pts[n - 2].different = Some(frac(dx, 2));
        pts[n - 1].different = Some(frac(dy, 2));
        let flagged = s.validate().iter().any(|v| matches!(v, Violation::DiffNotInvariant { .. }));
        prop_assert_eq!(flagged, dx != dy);
    }

    #[test]
    fn invariants_add_over_disjoint_unions(a in plane_curve_params(), b in plane_curve_params()) {
        let x = plane_curve("x", a.0, a.1, a.2);
        let y = plane_curve("y", b.0, b.1, b.2);
        let u = x.disjoint_union(&y);
        prop_assert_eq!(u.validate(), vec![]);
        let (ix, iy, iu) = (x.invariants().unwrap(), y.invariants().unwrap(), u.invariants().unwrap());
        prop_assert_eq!(iu.k_squared, ix.k_squared + iy.k_squared);
        prop_assert_eq!(iu.chi, ix.chi + iy.chi);
        prop_assert_eq!(iu.chi_conductor, ix.chi_conductor + iy.chi_conductor);
        prop_assert_eq!(iu.chi_normalization, 2);
        prop_assert_eq!(u.non_normal_locus().unwrap().component_count(), 2);
    }
}
