//! Built-in examples, constructed in code.

use slcsurf_core::curves::MultiNodalCurve;
use slcsurf_core::divisor::q;
use slcsurf_core::surface::{Curve, GluingInvolution, MarkedPoint, NormalComponent};
use slcsurf_core::{Matrix, QDivisor, StableLogSurface};

use crate::CliError;

/// Largest `k` accepted for the `largeK2` family.
pub const MAX_LARGE_K2: u32 = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleName {
    Descend,
    LargeK2(u32),
    Multinode3,
}

impl ExampleName {
    /// Accepts `descend`, `multinode3`, `largeK2` (k = 2), `largeK2:k` and `largeK2(k)`.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let unknown = || CliError::UnknownExample(s.to_string());
        match s {
            "descend" => return Ok(ExampleName::Descend),
            "multinode3" => return Ok(ExampleName::Multinode3),
            "largeK2" => return Ok(ExampleName::LargeK2(2)),
            _ => {}
        }
        let rest = s.strip_prefix("largeK2").ok_or_else(unknown)?;
        let k = rest
            .strip_prefix(':')
            .or_else(|| rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')))
            .ok_or_else(unknown)?;
        let k: u32 = k.trim().parse().map_err(|_| unknown())?;
        if !(2..=MAX_LARGE_K2).contains(&k) {
            return Err(CliError::Argument(format!("largeK2 needs 2 <= k <= {MAX_LARGE_K2}, got {k}")));
        }
        Ok(ExampleName::LargeK2(k))
    }
}

/// The plane with a smooth quartic `x^4 + y^4 + z^4 = 0` glued to itself by
/// `(x, y, z) -> (-x, -y, z)`, which fixes the four points on `z = 0`.
pub fn descend() -> StableLogSurface {
    let points = (1..=4).map(|i| MarkedPoint::new(format!("Q{i}")).with_different(q(0))).collect();
    StableLogSurface {
        components: vec![NormalComponent {
            id: "P2".into(),
            chi: 1,
            classes: vec!["H".into()],
            form: Matrix::from_ints(&[vec![1]]),
            canonical: QDivisor::from_terms([("H", q(-3))]),
            curves: vec![Curve { name: "Q".into(), class: QDivisor::from_terms([("H", q(4))]), genus: 3, points }],
            conductor: vec!["Q".into()],
            boundary: vec![],
            singular_points: vec![],
        }],
        gluing: GluingInvolution {
            pairing: vec![("Q".into(), "Q".into())],
            point_map: (1..=4).map(|i| (format!("Q{i}"), format!("Q{i}"))).collect(),
        },
        global_index: 1,
        declared: Default::default(),
    }
}

/// `P^1 x P^1` with conductor `H_0 + H_1 + H_inf + sum_j (V_j + V_-j)`,
/// `j = 1..k`. The involution is `z -> -z` on `H_0`, the identity
/// `H_1 <-> H_inf`, and `z -> 1/(1-z)` from `V_j` to `V_-j`. Each pair
/// `{j, -j}` produces one point where six branches of the non-normal locus
/// meet.
pub fn large_k2(k: u32) -> StableLogSurface {
    let k = k as i64;
    let ys: Vec<i64> = (1..=k).flat_map(|j| [j, -j]).collect();
    let hs = ["0", "1", "inf"];
    let h_name = |x: &str| format!("H{x}");
    let v_name = |y: i64| format!("V{y}");
    let h_pt = |x: &str, y: i64| format!("H{x}@{y}");
    let v_pt = |y: i64, x: &str| format!("V{y}@{x}");

    let mut curves = Vec::new();
    for x in hs {
        let mut points: Vec<MarkedPoint> =
            ys.iter().map(|&y| MarkedPoint::new(h_pt(x, y)).with_partner(v_pt(y, x))).collect();
        if x == "0" {
            points.push(MarkedPoint::new("H0@0").with_different(q(0)));
            points.push(MarkedPoint::new("H0@inf").with_different(q(0)));
        }
        curves.push(Curve { name: h_name(x), class: QDivisor::prime("H"), genus: 0, points });
    }
    for &y in &ys {
        let points = hs.iter().map(|&x| MarkedPoint::new(v_pt(y, x)).with_partner(h_pt(x, y))).collect();
        curves.push(Curve { name: v_name(y), class: QDivisor::prime("V"), genus: 0, points });
    }

    let mut pairing = vec![("H0".to_string(), "H0".to_string()), ("H1".to_string(), "Hinf".to_string())];
    let mut point_map = vec![("H0@0".to_string(), "H0@0".to_string()), ("H0@inf".to_string(), "H0@inf".to_string())];
    for j in 1..=k {
        pairing.push((v_name(j), v_name(-j)));
        point_map.push((h_pt("0", j), h_pt("0", -j)));
        for y in [j, -j] {
            point_map.push((h_pt("1", y), h_pt("inf", y)));
        }
        for (a, b) in [("0", "1"), ("1", "inf"), ("inf", "0")] {
            point_map.push((v_pt(j, a), v_pt(-j, b)));
        }
    }

    StableLogSurface {
        components: vec![NormalComponent {
            id: "P1xP1".into(),
            chi: 1,
            classes: vec!["H".into(), "V".into()],
            form: Matrix::from_ints(&[vec![0, 1], vec![1, 0]]),
            canonical: QDivisor::from_terms([("H", q(-2)), ("V", q(-2))]),
            conductor: curves.iter().map(|c| c.name.clone()).collect(),
            curves,
            boundary: vec![],
            singular_points: vec![],
        }],
        gluing: GluingInvolution { pairing, point_map },
        global_index: 1,
        declared: Default::default(),
    }
}

/// A rational curve with a single point where three smooth branches meet.
pub fn multinode3_curve() -> MultiNodalCurve {
    MultiNodalCurve::from_parts(&[("B", 0)], &[("p", &[("B", 3)])]).expect("valid curve")
}
