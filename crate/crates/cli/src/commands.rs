//! Report builders behind each subcommand.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::path::Path;

use slcsurf_core::criteria::{
    birational_threshold, bpf_threshold, cfhr_check, multinode3_table, restriction_to_d_verdict,
    ring_generation_bound, ring_generation_verdict, very_ample_threshold,
};
use slcsurf_core::curves::{PolarizedCurve, DEFAULT_SUBCURVE_CAP};
use slcsurf_core::cycles::{fundamental_cycle, hat_transform, semi_numerical_cycle};
use slcsurf_core::divisor::{format_rational, q};
use slcsurf_core::{Error, ExceptionalGraph, LatticeCycle, Rational, StableLogSurface};

use crate::document::{parse_graph, GraphDoc, SurfaceDocument};
use crate::examples::{descend, large_k2, multinode3_curve, ExampleName};
use crate::report::{Report, Section, Table};
use crate::ring::{graded_ring_dims, ring_generators};
use crate::CliError;

/// Ring degrees listed by the `descend` example.
const DESCEND_RING_DEGREES: u32 = 16;
/// Generators are searched up to this degree.
const GENERATOR_SEARCH_DEGREE: u32 = 13;
/// Multiples examined on `D + Delta` by the `largeK2` example.
const LARGE_K2_MULTIPLES: RangeInclusive<u32> = 2..=5;
/// The subcurve scan for restriction verdicts is skipped above this many components.
const EXAMPLE_SCAN_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum CycleMode {
    Semi,
    Fundamental,
    Hat,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Parses and validates a surface document.
pub fn load_surface(text: &str) -> Result<StableLogSurface, CliError> {
    let surface = SurfaceDocument::parse(text)?.to_surface()?;
    let violations = surface.validate();
    if violations.is_empty() {
        Ok(surface)
    } else {
        Err(Error::InvalidTriple(violations).into())
    }
}

pub fn load_surface_file(path: &Path) -> Result<StableLogSurface, CliError> {
    load_surface(&read(path)?)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn fmt_q(r: &Rational) -> String {
    format_rational(r)
}

/// Invariants and the multi-node structure of the non-normal locus.
pub fn invariants_sections(s: &StableLogSurface) -> Result<Vec<Section>, CliError> {
    let inv = s.invariants()?;
    let locus = s.non_normal_locus()?;
    let invariants = Section::new("invariants")
        .field("index", s.global_index)
        .field("K^2", fmt_q(&inv.k_squared))
        .field("chi(O_X)", inv.chi)
        .field("chi(O_normalization)", inv.chi_normalization)
        .field("chi(O_conductor)", inv.chi_conductor)
        .field("chi(O_D)", inv.chi_non_normal_locus);

    let mut comps = Table::new("components", &["id", "curves", "genus", "degree", "boundary"]);
    for c in &locus.components {
        comps.push(vec![c.id.clone(), c.curves.join(","), c.genus.to_string(), fmt_q(&c.degree), yes_no(c.boundary).into()]);
    }
    let mut points = Table::new("multi-nodes", &["id", "mu", "mu_D", "type", "nodes", "kind"]);
    for p in &locus.points {
        points.push(vec![
            p.id.clone(),
            p.multiplicity.to_string(),
            p.conductor_multiplicity.to_string(),
            p.point_type.to_string(),
            p.node_count.to_string(),
            p.kind.map(|k| k.to_string()).unwrap_or_else(|| "-".into()),
        ]);
    }
    let locus_section = Section::new("non-normal locus")
        .field("D components", locus.component_count())
        .field("boundary components", locus.components.len() - locus.component_count())
        .field("singular points", locus.singular_points().count())
        .field("D+Delta nodal", yes_no(locus.is_nodal()))
        .table(comps)
        .table(points);
    Ok(vec![invariants, locus_section])
}

pub fn invariants_report(s: &StableLogSurface, title: &str) -> Result<Report, CliError> {
    let mut r = Report::new(title);
    for sec in invariants_sections(s)? {
        r.push(sec);
    }
    Ok(r)
}

pub fn cmd_invariants(path: &Path) -> Result<Report, CliError> {
    let s = load_surface_file(path)?;
    invariants_report(&s, &format!("invariants of {}", path.display()))
}

fn checks_table(g: &ExceptionalGraph, z: &LatticeCycle, offset: &[i64], what: &str) -> (Table, bool) {
    let mut t = Table::new("checks", &["vertex", what, "<= 0"]);
    let products = z.products(g, offset);
    let mut all = true;
    for (id, p) in g.ids().zip(&products) {
        all &= *p <= 0;
        t.push(vec![id.to_string(), p.to_string(), yes_no(*p <= 0).into()]);
    }
    (t, all)
}

pub fn cycle_report(doc: &GraphDoc, mode: CycleMode) -> Result<Report, CliError> {
    let g = doc.to_graph()?;
    if !g.is_negative_definite() {
        return Err(Error::NotNegativeDefinite.into());
    }
    let mut r = Report::new("lattice cycle");
    let mut graph = Section::new("graph")
        .field("vertices", g.len())
        .field("type", g.classify())
        .field("|det|", g.determinant()?);
    if let Ok(lambda) = g.codiscrepancy() {
        graph = graph.field("codiscrepancy", divisor_string(&g, &lambda));
    }
    r.push(graph);

    let marks: Vec<i64> = g.marks().iter().map(|&m| m as i64).collect();
    let section = match mode {
        CycleMode::Semi | CycleMode::Fundamental => {
            let (z, offset, label) = if mode == CycleMode::Semi {
                (semi_numerical_cycle(&g)?, marks, "(Z+D).E")
            } else {
                (fundamental_cycle(&g)?, vec![0; g.len()], "Z.E")
            };
            let (t, ok) = checks_table(&g, &z, &offset, label);
            Section::new("cycle")
                .field("mode", if mode == CycleMode::Semi { "semi-numerical" } else { "fundamental" })
                .field("Z", &z)
                .field("coefficients", z.coefficient_list())
                .field("inequalities hold", yes_no(ok))
                .table(t)
        }
        CycleMode::Hat => {
            let mut offset = vec![0i64; g.len()];
            let mut incidence = BTreeMap::new();
            for (id, &c) in &doc.incidence {
                offset[g.position(id)?] = c as i64;
                incidence.insert(id.clone(), q(c as i64));
            }
            let hat = hat_transform(&g, &doc.incidence)?;
            let star = g.numerical_pullback(&incidence)?;
            let star_v = g.divisor_vector(&star)?;
            let dominates = hat.coefficients().iter().zip(&star_v).all(|(h, s)| &q(*h as i64) >= s);
            let cartier = star_v.iter().all(|x| x.is_integer());
            let (t, ok) = checks_table(&g, &hat, &offset, "(B+G).E");
            Section::new("cycle")
                .field("mode", "hat")
                .field("hat", &hat)
                .field("coefficients", hat.coefficient_list())
                .field("numerical pullback", divisor_string(&g, &star))
                .field("hat >= pullback", yes_no(dominates))
                .field("pullback integral", yes_no(cartier))
                .field("inequalities hold", yes_no(ok))
                .table(t)
        }
    };
    r.push(section);
    Ok(r)
}

fn divisor_string(g: &ExceptionalGraph, d: &slcsurf_core::QDivisor) -> String {
    let terms: Vec<String> = g
        .ids()
        .filter_map(|id| {
            let c = d.coefficient(id);
            (c != q(0)).then(|| format!("{} {id}", fmt_q(&c)))
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

pub fn cmd_cycle(path: &Path, mode: CycleMode) -> Result<Report, CliError> {
    cycle_report(&parse_graph(&read(path)?)?, mode)
}

/// Parses `a..b` (inclusive) or a single multiple.
pub fn parse_m_range(s: &str) -> Result<RangeInclusive<u32>, CliError> {
    let bad = || CliError::Argument(format!("expected a range a..b of positive integers, got `{s}`"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

/// Thresholds on `X`, per-multiple verdicts on `X` and `D + Delta`, and ring bounds.
pub fn criteria_sections(s: &StableLogSurface, range: RangeInclusive<u32>) -> Result<Vec<Section>, CliError> {
    let h = s.hypotheses()?;
    let hyp = Section::new("hypotheses")
        .field("index", h.index)
        .field("(K+Delta)^2", fmt_q(&h.kd_squared))
        .field("normal", yes_no(h.normal))
        .field("D+Delta nodal", yes_no(h.d_union_delta_nodal))
        .field("conductor smooth on normalisation", yes_no(h.conductor_smooth_normalization))
        .field("canonical off conductor", yes_no(h.canonical_off_conductor))
        .field("semi-canonical", yes_no(h.semi_canonical));

    let verdicts = [bpf_threshold(&h), birational_threshold(&h), very_ample_threshold(&h)];
    let mut thresholds = Table::new("thresholds", &["property", "from m", "justification"]);
    let mut th = Section::new("thresholds on X");
    for v in &verdicts {
        thresholds.push(vec![v.property.to_string(), v.threshold_m.to_string(), v.justification.clone()]);
        th = th.field(v.property.as_str(), v.threshold_m);
        for n in &v.notes {
            th = th.note(n.clone());
        }
    }
    th = th.table(thresholds);

    let mut on_x = Table::new("X", &["m", "BPF", "BIRATIONAL", "VERY_AMPLE"]);
    for m in range.clone() {
        let mut row = vec![m.to_string()];
        row.extend(verdicts.iter().map(|v| yes_no(m >= v.threshold_m).to_string()));
        on_x.push(row);
    }
    th = th.table(on_x);

    let locus = s.non_normal_locus()?;
    let mut on_d = Table::new("D+Delta", &["m", "verdict", "CFHR", "certificate", "justification"]);
    let mut d_section = Section::new("restriction to D+Delta");
    for m in range {
        let v = restriction_to_d_verdict(&locus, s.global_index, m)?;
        let cert = match (v.certificate_very_ample, v.certificate_bpf) {
            (true, _) => "very ample",
            (false, true) => "bpf",
            _ => "-",
        };
        let justification = if v.rows.is_empty() { "no table row applies".to_string() } else { v.rows.join("; ") };
        on_d.push(vec![m.to_string(), v.summary(), v.cfhr.to_string(), cert.into(), justification]);
        for n in v.notes {
            d_section = d_section.note(n);
        }
    }
    d_section = d_section.table(on_d);

    let ring = ring_generation_verdict(&h);
    let bounds = ring_generation_bound(h.index, bpf_threshold(&h).threshold_m);
    let ring_section = Section::new("ring generation")
        .field("multiplication surjective from degree", bounds.surjectivity_from)
        .field("generated in degree <=", bounds.generated_in_degree)
        .field("justification", ring.justification);
    Ok(vec![hyp, th, d_section, ring_section])
}

pub fn criteria_report(s: &StableLogSurface, range: RangeInclusive<u32>, title: &str) -> Result<Report, CliError> {
    let mut r = Report::new(title);
    for sec in criteria_sections(s, range)? {
        r.push(sec);
    }
    Ok(r)
}

pub fn cmd_criteria(path: &Path, range: &str) -> Result<Report, CliError> {
    let range = parse_m_range(range)?;
    let s = load_surface_file(path)?;
    criteria_report(&s, range, &format!("criteria for {}", path.display()))
}

pub fn ring_dims_report(max_k: u32) -> Result<Report, CliError> {
    let mut t = Table::new("dimensions", &["k", "dim R_k"]);
    for (k, d) in graded_ring_dims(max_k)? {
        t.push(vec![k.to_string(), d.to_string()]);
    }
    let mut r = Report::new("graded ring of the plane glued along a quartic");
    r.push(Section::new("ring").table(t));
    Ok(r)
}

/// The example as a surface document, for the surface examples.
pub fn example_document(name: &str) -> Result<SurfaceDocument, CliError> {
    match ExampleName::parse(name)? {
        ExampleName::Descend => Ok(SurfaceDocument::from_surface(&descend())),
        ExampleName::LargeK2(k) => Ok(SurfaceDocument::from_surface(&large_k2(k))),
        ExampleName::Multinode3 => {
            Err(CliError::Argument("multinode3 is a curve, not a surface; it has no surface document".into()))
        }
    }
}

pub fn cmd_example(name: &str) -> Result<Report, CliError> {
    match ExampleName::parse(name)? {
        ExampleName::Descend => descend_report(),
        ExampleName::LargeK2(k) => large_k2_report(k),
        ExampleName::Multinode3 => multinode3_report(),
    }
}

fn descend_report() -> Result<Report, CliError> {
    let s = descend();
    let mut r = invariants_report(&s, "descend: the plane glued along a quartic")?;
    let mut dims = Table::new("dimensions", &["k", "dim R_k"]);
    for (k, d) in graded_ring_dims(DESCEND_RING_DEGREES)? {
        dims.push(vec![k.to_string(), d.to_string()]);
    }
    let gens = ring_generators(GENERATOR_SEARCH_DEGREE);
    let degrees: Vec<String> = gens.iter().map(|(d, _)| d.to_string()).collect();
    let mut ring = Section::new("ring")
        .field("generators in degrees", degrees.join(","))
        .field("searched up to degree", GENERATOR_SEARCH_DEGREE);
    let mut gt = Table::new("generators", &["degree", "section"]);
    for (d, p) in gens {
        gt.push(vec![d.to_string(), p]);
    }
    ring = ring.table(dims).table(gt);
    r.push(ring);
    for sec in criteria_sections(&s, 1..=6)? {
        r.push(sec);
    }
    Ok(r)
}

fn large_k2_report(k: u32) -> Result<Report, CliError> {
    let s = large_k2(k);
    let mut r = invariants_report(&s, &format!("largeK2({k}): P1 x P1 glued along {} lines", 2 * k + 3))?;
    if s.non_normal_locus()?.curve.curve.component_count() <= EXAMPLE_SCAN_LIMIT {
        for sec in criteria_sections(&s, LARGE_K2_MULTIPLES)? {
            r.push(sec);
        }
    } else {
        r.push(Section::new("restriction to D+Delta").note(format!(
            "skipped: more than {EXAMPLE_SCAN_LIMIT} components; run `criteria` on the emitted document"
        )));
    }
    Ok(r)
}

fn multinode3_report() -> Result<Report, CliError> {
    let curve = multinode3_curve();
    let pa = curve.arithmetic_genus(&["B"])?;
    let mut t = Table::new(
        "degrees",
        &["deg", "h0", "h1", "morphism", "bpf", "birational", "embedding", "CFHR"],
    );
    for d in 2..=6 {
        let row = multinode3_table(d)?;
        let p = PolarizedCurve::new(curve.clone(), BTreeMap::from([("B".to_string(), q(d))]))?;
        let cfhr = cfhr_check(&p)?;
        t.push(vec![
            d.to_string(),
            row.h0.to_string(),
            row.h1.to_string(),
            yes_no(row.is_morphism).into(),
            yes_no(row.bpf).into(),
            yes_no(row.birational).into(),
            yes_no(row.embedding).into(),
            cfhr.to_string(),
        ]);
    }
    let mut r = Report::new("multinode3: rational curve with a 3-multi-node");
    r.push(
        Section::new("curve")
            .field("arithmetic genus", pa)
            .field("chi(O_B)", 1 - pa)
            .field("subcurve cap", DEFAULT_SUBCURVE_CAP)
            .table(t)
            .note("the degree test is sufficient only: degree 3 is base-point-free yet INCONCLUSIVE"),
    );
    Ok(r)
}
