//! Decision procedures for pluri-log-canonical maps.
//!
//! The threshold tables are plain data: each row pairs a hypothesis
//! predicate with the multiple `m` from which `omega(Delta)^[mI]` has the
//! property. The engine returns the most favourable applicable row.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::curves::{PolarizedCurve, DEFAULT_SUBCURVE_CAP};
use crate::cycles::LatticeCycle;
use crate::divisor::{format_rational, QDivisor, Rational};
use crate::error::{Error, Result};
use crate::graph::ExceptionalGraph;
use crate::surface::NonNormalLocusReport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypotheses {
    pub index: u32,
    pub kd_squared: Rational,
    /// `(K + Delta)^2` pulled back to each normal component.
    pub component_kd_squares: Vec<Rational>,
    pub d_union_delta_nodal: bool,
    pub normal: bool,
    pub conductor_smooth_normalization: bool,
    pub canonical_off_conductor: bool,
    pub semi_canonical: bool,
}

impl Hypotheses {
    /// Only the index and volume known; every other flag false.
    pub fn basic(index: u32, kd_squared: Rational) -> Self {
        Self {
            index,
            component_kd_squares: vec![kd_squared.clone()],
            kd_squared,
            d_union_delta_nodal: false,
            normal: false,
            conductor_smooth_normalization: false,
            canonical_off_conductor: false,
            semi_canonical: false,
        }
    }

    /// Semi-canonical singularities imply the three local conditions.
    pub fn normalized(mut self) -> Self {
        if self.semi_canonical {
            self.d_union_delta_nodal = true;
            self.conductor_smooth_normalization = true;
            self.canonical_off_conductor = true;
        }
        self
    }

    fn no_component_square_one(&self) -> bool {
        !self.component_kd_squares.iter().any(Rational::is_one)
    }

    fn index_and_volume_one(&self) -> bool {
        self.index == 1 && self.kd_squared.is_one()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    Bpf,
    Birational,
    VeryAmple,
    RingGen,
}

impl Property {
    pub fn as_str(self) -> &'static str {
        match self {
            Property::Bpf => "BPF",
            Property::Birational => "BIRATIONAL",
            Property::VeryAmple => "VERY_AMPLE",
            Property::RingGen => "RING_GEN",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A threshold multiple with the row that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub property: Property,
    pub threshold_m: u32,
    pub justification: String,
    pub notes: Vec<String>,
}

pub struct ThresholdRow {
    pub property: Property,
    pub threshold: u32,
    pub citation: &'static str,
    pub applies: fn(&Hypotheses) -> bool,
}

pub const BPF_ROWS: &[ThresholdRow] = &[
    ThresholdRow {
        property: Property::Bpf,
        threshold: 4,
        citation: "base-point-free for m >= 4: every stable log surface",
        applies: |_| true,
    },
    ThresholdRow {
        property: Property::Bpf,
        threshold: 3,
        citation: "base-point-free for m >= 3: global index I >= 2",
        applies: |h| h.index >= 2,
    },
    ThresholdRow {
        property: Property::Bpf,
        threshold: 3,
        citation: "base-point-free for m >= 3: no normal component with (K+Delta)^2 = 1, and D+Delta nodal",
        applies: |h| h.no_component_square_one() && h.d_union_delta_nodal,
    },
    ThresholdRow {
        property: Property::Bpf,
        threshold: 3,
        citation: "base-point-free for m >= 3: X normal and not I = (K+Delta)^2 = 1",
        applies: |h| h.normal && !h.index_and_volume_one(),
    },
];

pub const VERY_AMPLE_ROWS: &[ThresholdRow] = &[
    ThresholdRow {
        property: Property::VeryAmple,
        threshold: 8,
        citation: "very ample for m >= 8: every stable log surface",
        applies: |_| true,
    },
    ThresholdRow {
        property: Property::VeryAmple,
        threshold: 6,
        citation: "very ample for m >= 6: global index I >= 2",
        applies: |h| h.index >= 2,
    },
    ThresholdRow {
        property: Property::VeryAmple,
        threshold: 7,
        citation: "very ample for m >= 7: no normal component with (K+Delta)^2 = 1, and D+Delta nodal",
        applies: |h| h.no_component_square_one() && h.d_union_delta_nodal,
    },
    ThresholdRow {
        property: Property::VeryAmple,
        threshold: 7,
        citation: "very ample for m >= 7: X normal and (K+Delta)^2 != 1",
        applies: |h| h.normal && !h.kd_squared.is_one(),
    },
    ThresholdRow {
        property: Property::VeryAmple,
        threshold: 6,
        citation: "very ample for m >= 6: normalisation smooth along the conductor, canonical elsewhere",
        applies: |h| h.conductor_smooth_normalization && h.canonical_off_conductor,
    },
    ThresholdRow {
        property: Property::VeryAmple,
        threshold: 5,
        citation: "very ample for m >= 5: D+Delta nodal, normalisation smooth along the conductor, X \\ D canonical",
        applies: |h| h.d_union_delta_nodal && h.conductor_smooth_normalization && h.canonical_off_conductor,
    },
];

pub const BIRATIONAL_ROWS: &[ThresholdRow] = &[ThresholdRow {
    property: Property::Birational,
    threshold: 6,
    citation: "birational morphism for m >= 6: every stable log surface",
    applies: |_| true,
}];

fn best_row<'a>(rows: &'a [ThresholdRow], h: &Hypotheses) -> &'a ThresholdRow {
    rows.iter()
        .filter(|r| (r.applies)(h))
        .min_by_key(|r| r.threshold)
        .expect("the unconditional row always applies")
}

fn verdict_from(rows: &[ThresholdRow], h: &Hypotheses) -> Verdict {
    let row = best_row(rows, h);
    Verdict { property: row.property, threshold_m: row.threshold, justification: row.citation.to_string(), notes: vec![] }
}

pub fn bpf_threshold(h: &Hypotheses) -> Verdict {
    verdict_from(BPF_ROWS, &h.clone().normalized())
}

pub fn very_ample_threshold(h: &Hypotheses) -> Verdict {
    let mut v = verdict_from(VERY_AMPLE_ROWS, &h.clone().normalized());
    if v.threshold_m == 8 {
        v.notes.push(
            "length-two subschemes not separated by the 4I-th map are separated from 7I on; \
             whether 8 is sharp is open"
                .into(),
        );
    }
    v
}

/// The birational threshold: the unconditional row, or very ampleness if earlier.
pub fn birational_threshold(h: &Hypotheses) -> Verdict {
    let base = verdict_from(BIRATIONAL_ROWS, &h.clone().normalized());
    let va = very_ample_threshold(h);
    if va.threshold_m < base.threshold_m {
        Verdict {
            property: Property::Birational,
            threshold_m: va.threshold_m,
            justification: format!("birational since {}", va.justification),
            notes: vec![],
        }
    } else {
        base
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RingBounds {
    /// Multiplication by sections of degree `aI` is surjective from this degree on.
    pub surjectivity_from: u64,
    pub generated_in_degree: u64,
}

/// Bounds for the log canonical ring given that `omega(Delta)^[aI]` is
/// globally generated.
pub fn ring_generation_bound(index: u32, a: u32) -> RingBounds {
    let ai = a as u64 * index as u64;
    RingBounds { surjectivity_from: 2 + 2 * ai, generated_in_degree: 3 * ai + 1 }
}

pub fn ring_generation_verdict(h: &Hypotheses) -> Verdict {
    let bpf = bpf_threshold(h);
    let b = ring_generation_bound(h.index, bpf.threshold_m);
    Verdict {
        property: Property::RingGen,
        threshold_m: b.generated_in_degree as u32,
        justification: format!(
            "generated in degree <= 3aI+1 with a = {} ({}); multiplication surjective from degree {}",
            bpf.threshold_m, bpf.justification, b.surjectivity_from
        ),
        notes: vec![],
    }
}

/// The numerical conditions under which `mI(K+Delta)` is base-point-free
/// outside the exceptional locus: `(mI-1)^2 q > 4` and `(mI-1) d >= 2`.
pub fn kawachi_condition(index: u32, m: u32, kd_squared: &Rational, min_curve_degree: &Rational) -> bool {
    let t = Rational::from_integer(BigInt::from(m as i64 * index as i64 - 1));
    let four = Rational::from_integer(BigInt::from(4));
    let two = Rational::from_integer(BigInt::from(2));
    &t * &t * kd_squared > four && &t * min_curve_degree >= two
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectednessBound {
    /// `n - 1/M^2`, a lower bound for `C1 . C2`.
    pub bound: Rational,
    /// With `M^2 = 1` equality can occur and is characterised.
    pub equality_characterized: bool,
}

pub fn connectedness_bound(n: u32, m_squared: u32) -> ConnectednessBound {
    assert!(m_squared > 0, "M^2 must be positive");
    ConnectednessBound {
        bound: Rational::from_integer(BigInt::from(n)) - Rational::new(BigInt::one(), BigInt::from(m_squared)),
        equality_characterized: m_squared == 1,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionCorrection {
    /// `(Lambda - hat + star) . (hat - star)`.
    pub value: Rational,
    /// `(hat - star) . E_i <= 0` for every vertex.
    pub difference_nonpositive: bool,
    /// `hat - Lambda >= 0` on the support of `hat`.
    pub hat_dominates_codiscrepancy: bool,
}

pub fn adjunction_correction(
    g: &ExceptionalGraph,
    lambda: &QDivisor,
    hat: &LatticeCycle,
    star: &QDivisor,
) -> Result<AdjunctionCorrection> {
    let hat_ids: Vec<&str> = hat.iter().map(|(id, _)| id).collect();
    if !hat_ids.iter().copied().eq(g.ids()) {
        return Err(Error::GraphMismatch("cycle lives on a different graph".into()));
    }
    let l = g.divisor_vector(lambda)?;
    let h = g.divisor_vector(&hat.to_divisor())?;
    let s = g.divisor_vector(star)?;
    let m = g.matrix();
    let diff: Vec<Rational> = h.iter().zip(&s).map(|(a, b)| a - b).collect();
    let left: Vec<Rational> = l.iter().zip(&diff).map(|(a, b)| a - b).collect();
    let value = m.bilinear(&left, &diff);
    let difference_nonpositive = m.mul_vec(&diff).iter().all(|x| !x.is_positive());
    let hat_dominates_codiscrepancy = h.iter().zip(&l).all(|(a, b)| a.is_zero() || a >= b);
    Ok(AdjunctionCorrection { value, difference_nonpositive, hat_dominates_codiscrepancy })
}

/// Behaviour of the residue of a section of `omega(D)^m` along the conductor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Residue {
    Zero,
    Invariant,
    AntiInvariant,
}

/// Whether a section of `m(K + D)` on the normalisation descends: always for
/// vanishing residue, otherwise the residue must be invariant for even `m`
/// and anti-invariant for odd `m`.
pub fn descend_parity(m: u32, residue: Residue) -> bool {
    match residue {
        Residue::Zero => true,
        Residue::Invariant => m.is_multiple_of(2),
        Residue::AntiInvariant => m % 2 == 1,
    }
}

/// Properties of a line bundle of degree `deg` on a rational curve with a
/// single 3-multi-node (arithmetic genus 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultiNode3Row {
    pub degree: i64,
    pub h0: i64,
    pub h1: i64,
    pub is_morphism: bool,
    pub bpf: bool,
    pub birational: bool,
    pub embedding: bool,
}

pub fn multinode3_table(degree: i64) -> Result<MultiNode3Row> {
    if degree < 2 {
        return Err(Error::DegreeTooSmall(degree));
    }
    let bpf = degree >= 3;
    Ok(MultiNode3Row {
        degree,
        h0: degree - 1,
        h1: 0,
        is_morphism: bpf,
        bpf,
        birational: degree >= 4,
        embedding: degree >= 5,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CfhrVerdict {
    Inconclusive,
    BpfOk,
    VeryAmpleOk,
}

impl CfhrVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            CfhrVerdict::Inconclusive => "INCONCLUSIVE",
            CfhrVerdict::BpfOk => "BPF_OK",
            CfhrVerdict::VeryAmpleOk => "VERY_AMPLE_OK",
        }
    }
}

impl fmt::Display for CfhrVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Degree test over all subcurves: `deg >= 2 p_a` everywhere gives
/// base-point-freeness, strict inequality very ampleness. Failing it says
/// nothing.
pub fn cfhr_check(p: &PolarizedCurve) -> Result<CfhrVerdict> {
    cfhr_check_with_cap(p, DEFAULT_SUBCURVE_CAP)
}

pub fn cfhr_check_with_cap(p: &PolarizedCurve, cap: usize) -> Result<CfhrVerdict> {
    if let Some((c, d)) = p.degrees.iter().find(|(_, d)| !d.is_integer()) {
        return Err(Error::NonIntegralDegree(format!("{c}: {}", format_rational(d))));
    }
    let mut verdict = CfhrVerdict::VeryAmpleOk;
    for b in p.curve.subcurves_with_cap(cap)? {
        let deg = p.degree(&b);
        let two_pa = Rational::from_integer(BigInt::from(2 * b.arithmetic_genus));
        if deg < two_pa {
            return Ok(CfhrVerdict::Inconclusive);
        }
        if deg == two_pa {
            verdict = CfhrVerdict::BpfOk;
        }
    }
    Ok(verdict)
}

/// Verdict for `omega(Delta)^[mI]` restricted to `D + Delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionVerdict {
    pub m: u32,
    pub bpf: bool,
    pub very_ample: bool,
    pub birational: bool,
    /// Table rows that apply.
    pub rows: Vec<String>,
    /// Whether the per-subcurve degree lower bounds certify each property.
    pub certificate_bpf: bool,
    pub certificate_very_ample: bool,
    /// Degree test on the actual degrees of `mI(K+Delta)`.
    pub cfhr: CfhrVerdict,
    pub notes: Vec<String>,
}

impl RestrictionVerdict {
    pub fn summary(&self) -> String {
        if self.very_ample {
            return "VERY_AMPLE".into();
        }
        let mut parts = vec![];
        if self.bpf {
            parts.push("BPF");
        }
        if self.birational {
            parts.push("BIRATIONAL");
        }
        if parts.is_empty() {
            "INCONCLUSIVE".into()
        } else {
            parts.join("+")
        }
    }
}

pub fn restriction_to_d_verdict(report: &NonNormalLocusReport, index: u32, m: u32) -> Result<RestrictionVerdict> {
    let nodal = report.is_nodal();
    let mut rows = Vec::new();
    let (mut bpf, mut very_ample, mut birational) = (false, false, false);
    let table: [(bool, bool, u32, &str); 3] = [
        (m >= 4, true, 4, "m >= 4: base-point-free and birational on D+Delta"),
        (m >= 3 && index >= 2, false, 3, "m >= 3 and I >= 2: base-point-free on D+Delta"),
        (m >= 2 && nodal, false, 2, "m >= 2 and D+Delta nodal: base-point-free on D+Delta"),
    ];
    for (applies, gives_birational, bound, text) in table {
        if applies {
            bpf = true;
            birational |= gives_birational;
            if m > bound {
                very_ample = true;
                rows.push(format!("{text}; very ample since m > {bound}"));
            } else {
                rows.push(text.to_string());
            }
        }
    }

    let mi = Rational::from_integer(BigInt::from(m as i64 * index as i64));
    let index_q = Rational::from_integer(BigInt::from(index));
    let (mut cert_bpf, mut cert_va) = (true, true);
    for b in report.curve.curve.subcurves()? {
        let a = Rational::from_integer(BigInt::from(b.components.len()));
        let lower = Rational::from_integer(BigInt::from(b.degree_bounds().normalized));
        let x = std::cmp::max(lower, a / &index_q);
        let lhs = &mi * x;
        let two_pa = Rational::from_integer(BigInt::from(2 * b.arithmetic_genus));
        cert_bpf &= lhs >= two_pa;
        cert_va &= lhs > two_pa;
    }

    let mut notes = Vec::new();
    let scaled = report.curve.scaled(&mi);
    let cfhr = match cfhr_check(&scaled) {
        Ok(v) => v,
        Err(Error::NonIntegralDegree(what)) => {
            notes.push(format!("degree test skipped: non-integral degree {what}"));
            CfhrVerdict::Inconclusive
        }
        Err(e) => return Err(e),
    };

    bpf |= cert_bpf || cfhr >= CfhrVerdict::BpfOk;
    very_ample |= cert_va || cfhr == CfhrVerdict::VeryAmpleOk;
    birational |= very_ample;

    let mk = m as i64 * index as i64;
    for comp in report.curve.curve.components() {
        let b = report.curve.curve.subcurve(&[comp.id.as_str()])?;
        let singular: Vec<u32> = b.multiplicities.iter().map(|(_, mu, _)| *mu).filter(|&mu| mu >= 2).collect();
        if b.normalization_genus != 0 || singular != [3] {
            continue;
        }
        let deg = &scaled.degrees[&comp.id];
        if !deg.is_integer() {
            continue;
        }
        let d = deg.to_integer();
        let Ok(d) = i64::try_from(d) else { continue };
        if let Ok(row) = multinode3_table(d) {
            if !row.is_morphism {
                notes.push(format!("{mk}K not bpf on {} (deg {d} table: not a morphism)", comp.id));
            } else if !row.embedding {
                notes.push(format!("{mk}K not very ample on {} (deg {d} table: not an embedding)", comp.id));
            }
        }
    }
    Ok(RestrictionVerdict { m, bpf, very_ample, birational, rows, certificate_bpf: cert_bpf, certificate_very_ample: cert_va, cfhr, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::MultiNodalCurve;
    use crate::divisor::{frac, q};
    use std::collections::BTreeMap;

    fn tri_node(deg: i64) -> PolarizedCurve {
        let c = MultiNodalCurve::from_parts(&[("B", 0)], &[("p", &[("B", 3)])]).unwrap();
        PolarizedCurve::new(c, BTreeMap::from([("B".to_string(), q(deg))])).unwrap()
    }

    #[test]
    fn cfhr_on_tri_node() {
        assert_eq!(cfhr_check(&tri_node(5)).unwrap(), CfhrVerdict::VeryAmpleOk);
        assert_eq!(cfhr_check(&tri_node(4)).unwrap(), CfhrVerdict::BpfOk);
        assert_eq!(cfhr_check(&tri_node(3)).unwrap(), CfhrVerdict::Inconclusive);
        let half = tri_node(1).scaled(&frac(1, 2));
        assert!(matches!(cfhr_check(&half), Err(Error::NonIntegralDegree(_))));
    }

    #[test]
    fn kawachi() {
        assert!(kawachi_condition(1, 3, &q(2), &q(1)));
        assert!(!kawachi_condition(1, 3, &q(1), &q(1)));
        assert!(kawachi_condition(2, 3, &frac(1, 2), &frac(1, 2)));
    }

    #[test]
    fn connectedness() {
        assert_eq!(connectedness_bound(4, 1).bound, q(3));
        assert_eq!(connectedness_bound(3, 1).bound, q(2));
        assert_eq!(connectedness_bound(3, 2).bound, frac(5, 2));
        assert!(!connectedness_bound(3, 2).equality_characterized);
    }

    #[test]
    fn ring_bounds() {
        let b = |i, a| {
            let r = ring_generation_bound(i, a);
            (r.surjectivity_from, r.generated_in_degree)
        };
        assert_eq!(b(1, 4), (10, 13));
        assert_eq!(b(2, 3), (14, 19));
        assert_eq!(b(1, 3), (8, 10));
    }

    #[test]
    fn parity() {
        assert!(descend_parity(2, Residue::Invariant));
        assert!(!descend_parity(1, Residue::Invariant));
        assert!(descend_parity(7, Residue::Zero));
        assert!(descend_parity(3, Residue::AntiInvariant));
    }

    #[test]
    fn tri_node_table() {
        assert!(multinode3_table(1).is_err());
        let r2 = multinode3_table(2).unwrap();
        assert_eq!((r2.h0, r2.is_morphism), (1, false));
        let r4 = multinode3_table(4).unwrap();
        assert_eq!((r4.h0, r4.bpf, r4.birational, r4.embedding), (3, true, true, false));
        let r5 = multinode3_table(5).unwrap();
        assert_eq!((r5.h0, r5.embedding), (4, true));
    }

    #[test]
    fn thresholds() {
        let mut h = Hypotheses::basic(1, q(1));
        h.normal = true;
        assert_eq!(bpf_threshold(&h).threshold_m, 4);
        assert_eq!(bpf_threshold(&Hypotheses::basic(2, q(1))).threshold_m, 3);
        let mut nodal = Hypotheses::basic(1, q(2));
        nodal.d_union_delta_nodal = true;
        assert_eq!(bpf_threshold(&nodal).threshold_m, 3);
        assert_eq!(very_ample_threshold(&Hypotheses::basic(1, q(1))).threshold_m, 8);
        assert_eq!(very_ample_threshold(&Hypotheses::basic(2, q(1))).threshold_m, 6);
        let mut sc = Hypotheses::basic(1, q(1));
        sc.semi_canonical = true;
        assert_eq!(very_ample_threshold(&sc).threshold_m, 5);
        assert_eq!(birational_threshold(&sc).threshold_m, 5);
        assert_eq!(birational_threshold(&Hypotheses::basic(1, q(1))).threshold_m, 6);
    }

    #[test]
    fn adjunction_on_a2() {
        let g = ExceptionalGraph::a_n(2);
        let hat = crate::cycles::hat_transform(&g, &BTreeMap::from([("E1".to_string(), 1)])).unwrap();
        let star = QDivisor::from_terms([("E1", frac(2, 3)), ("E2", frac(1, 3))]);
        let c = adjunction_correction(&g, &QDivisor::new(), &hat, &star).unwrap();
        assert_eq!(c.value, frac(2, 3));
        assert!(c.difference_nonpositive);
        let zero = adjunction_correction(&g, &QDivisor::new(), &hat, &hat.to_divisor()).unwrap();
        assert!(zero.value.is_zero());
        let other = ExceptionalGraph::a_n(3);
        assert!(matches!(adjunction_correction(&other, &QDivisor::new(), &hat, &star), Err(Error::GraphMismatch(_))));
    }
}
