//! Sub-command implementations. Each returns a JSON report and an exit code.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use super::report::{
    classification_json, degeneracy_json, family_json, signatures_json, slice_json,
    tolerances_json, two_sided_form_json, verdict_json, witness_json,
};
use super::spec::{complex_json, render, ConeSpec};
use super::{EXIT_DEGENERATE, EXIT_NO_SLICE, EXIT_OK, EXIT_SCHEMA, EXIT_VERIFICATION};
use crate::decider::{
    self, DiscPoint, Hyperplane, SupportKind, SupportWitness, TableOutcome, Verdict, JUMP_CONTINUITY_BOUND,
};
use crate::linalg::c;
use crate::normalform2::{self, Classification, DegeneracyReason, DegeneracyReport, NormalFormType};
use crate::quadform::QuadraticCone;
use crate::slicer::{self, SliceOptions, SliceSearch, TwoSidedForm};
use crate::tol::Tolerances;

/// Flags shared by the sub-commands.
#[derive(Debug, Clone)]
pub struct Settings {
    pub seed: u64,
    pub samples: usize,
    pub eps: Vec<f64>,
    pub budget: usize,
    pub tol: Tolerances,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 10_000,
            eps: vec![1e-3, 1e-2, 1e-1],
            budget: 256,
            tol: Tolerances::default(),
        }
    }
}

/// A finished command: report, exit code and optional point cloud.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub code: i32,
    pub points: Vec<DiscPoint>,
}

impl Outcome {
    fn new(report: Map<String, Value>, code: i32) -> Self {
        Self {
            report: Value::Object(report),
            code,
            points: Vec::new(),
        }
    }
}

fn header(command: &str, settings: &Settings) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool".into(), json!({"name": "quadcone", "version": crate::VERSION}));
    m.insert("command".into(), json!(command));
    m.insert("seed".into(), json!(settings.seed));
    m.insert(
        "settings".into(),
        json!({"samples": settings.samples, "eps": settings.eps, "budget": settings.budget}),
    );
    m.insert("tolerances".into(), tolerances_json(&settings.tol));
    m
}

fn input_json(spec: &ConeSpec) -> Value {
    let mut v = render(&spec.cone);
    let obj = v.as_object_mut().expect("object");
    obj.insert("source".into(), json!(spec.source));
    obj.insert(
        "symmetrization".into(),
        json!({"S": spec.s_adjustment, "H": spec.h_adjustment}),
    );
    v
}

fn with_input(command: &str, spec: &ConeSpec, settings: &Settings) -> Map<String, Value> {
    let mut m = header(command, settings);
    m.insert("input".into(), input_json(spec));
    m.insert("signatures".into(), signatures_json(&spec.cone, settings.tol.zero_eigen));
    m
}

fn error_json(e: &crate::Error) -> Value {
    json!({"error": e.to_string()})
}

/// Degenerate cones in any dimension: zero form, semidefinite or reducible.
pub fn degeneracy_nd(cone: &QuadraticCone, tol: &Tolerances) -> Option<DegeneracyReport> {
    let report = |reason, detail: String| Some(DegeneracyReport { reason, detail });
    if cone.is_zero() {
        return report(DegeneracyReason::ZeroForm, "ρ vanishes identically".into());
    }
    let rs = cone.real_signature(tol.zero_eigen);
    let dim = 2 * cone.n();
    if rs.p == 0 || rs.q == 0 {
        let reason = if rs.p + rs.q == dim {
            DegeneracyReason::PointCone
        } else {
            DegeneracyReason::DimensionDeficient
        };
        return report(reason, format!("ρ is semidefinite, real signature ({}, {})", rs.p, rs.q));
    }
    if rs.p == 1 && rs.q == 1 {
        return report(
            DegeneracyReason::Reducible,
            "real signature (1, 1): union of two real hyperplanes".into(),
        );
    }
    None
}

pub fn cmd_classify(spec: &ConeSpec, settings: &Settings) -> Outcome {
    let cone = &spec.cone;
    let mut m = with_input("classify", spec, settings);
    if cone.n() == 2 {
        let cls = normalform2::classify2_with(cone, &settings.tol);
        m.insert("classification".into(), classification_json(&cls));
        if let Some(inv) = normalform2::cone_invariants(cone) {
            m.insert("invariants".into(), json!(inv));
        }
        let code = match cls {
            Classification::Normal(_) => EXIT_OK,
            Classification::Degenerate(_) => EXIT_DEGENERATE,
        };
        return Outcome::new(m, code);
    }
    if let Some(d) = degeneracy_nd(cone, &settings.tol) {
        m.insert("classification".into(), json!({"degeneracy": degeneracy_json(&d)}));
        return Outcome::new(m, EXIT_DEGENERATE);
    }
    let form = slicer::classify_two_sided_nd(cone);
    m.insert(
        "classification".into(),
        json!({"note": "normal forms are defined for n = 2; n >= 3 cones are decided by slicing", "two_sided_form": two_sided_form_json(&form)}),
    );
    Outcome::new(m, EXIT_OK)
}

pub fn cmd_decide(spec: &ConeSpec, settings: &Settings) -> Outcome {
    decide_impl("decide", spec, settings, false)
}

/// `decide` plus cone sampling and an optional point cloud.
pub fn cmd_verify(spec: &ConeSpec, settings: &Settings) -> Outcome {
    let mut out = decide_impl("verify", spec, settings, true);
    let cone = &spec.cone;
    let cone_samples = match cone.sample_cone(settings.seed, settings.samples, 1.0) {
        Ok(pts) => {
            let worst = pts
                .iter()
                .map(|s| s.residual / (s.point.norm_squared() * cone.norm()).max(f64::MIN_POSITIVE))
                .fold(0.0f64, f64::max);
            json!({"count": pts.len(), "max_relative_residual": worst})
        }
        Err(e) => error_json(&e),
    };
    out.report
        .as_object_mut()
        .expect("object")
        .insert("cone_samples".into(), cone_samples);
    out
}

fn witness_points(cone: &QuadraticCone, w: &SupportWitness, samples: usize, seed: u64) -> Vec<DiscPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::new();
    for h in [&w.aplus, &w.aminus] {
        for z in decider::sample_hyperplane(h, samples, &mut rng) {
            pts.push(DiscPoint {
                eps: 0.0,
                rho: cone.evaluate(&z),
                z,
            });
        }
    }
    pts
}

fn decide_impl(command: &str, spec: &ConeSpec, settings: &Settings, keep: bool) -> Outcome {
    let cone = &spec.cone;
    let mut m = with_input(command, spec, settings);
    let mut points = Vec::new();
    let code = if cone.n() == 2 {
        decide_2(cone, settings, keep, &mut m, &mut points)
    } else {
        decide_nd(cone, settings, keep, &mut m, &mut points)
    };
    let mut out = Outcome::new(m, code);
    out.points = points;
    out
}

fn decide_2(
    cone: &QuadraticCone,
    settings: &Settings,
    keep: bool,
    m: &mut Map<String, Value>,
    points: &mut Vec<DiscPoint>,
) -> i32 {
    let cls = normalform2::classify2_with(cone, &settings.tol);
    m.insert("classification".into(), classification_json(&cls));
    let res = match cls {
        Classification::Normal(r) => r,
        Classification::Degenerate(d) => {
            m.insert("verdict".into(), verdict_json(&Verdict::Degenerate { report: d }));
            return EXIT_DEGENERATE;
        }
    };
    let verdict = decider::decide2(&res);
    m.insert("verdict".into(), verdict_json(&verdict));
    match &verdict {
        Verdict::OneSided { family, .. } => {
            match decider::verify_discs_points(cone, family, &settings.eps, settings.samples, settings.seed, keep) {
                Ok((rep, pts)) => {
                    m.insert("verification".into(), json!({"discs": rep}));
                    *points = pts;
                    EXIT_OK
                }
                Err(e) => {
                    m.insert("verification".into(), error_json(&e));
                    EXIT_VERIFICATION
                }
            }
        }
        Verdict::TwoSided { witness } => {
            if keep {
                *points = witness_points(cone, witness, settings.samples, settings.seed);
            }
            verify_witness(cone, witness, settings, m)
        }
        Verdict::Degenerate { .. } => EXIT_DEGENERATE,
    }
}

fn verify_witness(cone: &QuadraticCone, w: &SupportWitness, settings: &Settings, m: &mut Map<String, Value>) -> i32 {
    match decider::verify_support_with(cone, w, settings.samples, settings.seed, settings.tol.witness) {
        Ok(rep) => {
            m.insert("verification".into(), json!({"support": rep}));
            EXIT_OK
        }
        Err(e) => {
            m.insert("verification".into(), error_json(&e));
            EXIT_VERIFICATION
        }
    }
}

fn slice_options(settings: &Settings) -> SliceOptions {
    SliceOptions {
        seed: settings.seed,
        samples: settings.samples,
        eps: settings.eps.clone(),
    }
}

fn decide_nd(
    cone: &QuadraticCone,
    settings: &Settings,
    keep: bool,
    m: &mut Map<String, Value>,
    points: &mut Vec<DiscPoint>,
) -> i32 {
    if let Some(d) = degeneracy_nd(cone, &settings.tol) {
        m.insert("verdict".into(), verdict_json(&Verdict::Degenerate { report: d }));
        return EXIT_DEGENERATE;
    }
    match slicer::find_good_slice_with(cone, settings.budget, &slice_options(settings)) {
        SliceSearch::Found(res) => {
            let Verdict::OneSided { side, family } = &res.verdict else {
                unreachable!("accepted slices are one-sided");
            };
            m.insert(
                "verdict".into(),
                json!({"kind": "OneSided", "side": side, "via": "slice", "family_in_slice": family_json(family)}),
            );
            m.insert("slice".into(), slice_json(&res));
            m.insert("verification".into(), json!({"discs": res.discs}));
            if keep {
                if let Ok((_, pts)) =
                    decider::verify_discs_points(&res.restricted, family, &settings.eps, settings.samples, settings.seed, true)
                {
                    *points = pts
                        .into_iter()
                        .map(|p| {
                            let z = &res.slice.basis * &p.z;
                            DiscPoint {
                                eps: p.eps,
                                rho: cone.evaluate(&z),
                                z,
                            }
                        })
                        .collect();
                }
            }
            EXIT_OK
        }
        SliceSearch::NoSliceFound { reason, tried } => {
            m.insert("slice_search".into(), json!({"found": false, "reason": reason, "tried": tried}));
            two_sided_nd(cone, settings, keep, m, points)
        }
    }
}

fn two_sided_nd(
    cone: &QuadraticCone,
    settings: &Settings,
    keep: bool,
    m: &mut Map<String, Value>,
    points: &mut Vec<DiscPoint>,
) -> i32 {
    let form = slicer::classify_two_sided_nd(cone);
    m.insert("two_sided_form".into(), two_sided_form_json(&form));
    let witness = match &form {
        TwoSidedForm::ProductForm { inner, complement } => slicer::product_witness(inner, complement),
        TwoSidedForm::Ts2 { a, .. } => Some(SupportWitness {
            aplus: Hyperplane { ell: a.clone() },
            aminus: Hyperplane { ell: a.clone() },
            kind: SupportKind::NonMinimal,
            angles: None,
        }),
        TwoSidedForm::Ts1 { k, .. } => {
            m.insert(
                "verdict".into(),
                json!({"kind": "TwoSided", "witness": {"support": SupportKind::NonMinimal, "hypersurface": format!("quadric w1^2 + ... + w{k}^2 = 0")}}),
            );
            m.insert("verification".into(), json!({"form_residual": form_residual(&form)}));
            return EXIT_OK;
        }
        TwoSidedForm::Unknown => {
            m.insert("verdict".into(), json!({"kind": "Unknown"}));
            return EXIT_NO_SLICE;
        }
    };
    let Some(w) = witness else {
        m.insert("verdict".into(), json!({"kind": "Unknown"}));
        return EXIT_NO_SLICE;
    };
    m.insert("verdict".into(), json!({"kind": "TwoSided", "witness": witness_json(&w)}));
    if keep {
        *points = witness_points(cone, &w, settings.samples, settings.seed);
    }
    verify_witness(cone, &w, settings, m)
}

fn form_residual(f: &TwoSidedForm) -> f64 {
    match f {
        TwoSidedForm::Ts1 { residual, .. } | TwoSidedForm::Ts2 { residual, .. } => *residual,
        _ => 0.0,
    }
}

pub fn cmd_slice(spec: &ConeSpec, settings: &Settings) -> Outcome {
    let cone = &spec.cone;
    let mut m = with_input("slice", spec, settings);
    if cone.n() < 3 {
        m.insert("error".into(), json!("slicing needs n >= 3"));
        return Outcome::new(m, EXIT_SCHEMA);
    }
    if let Some(d) = degeneracy_nd(cone, &settings.tol) {
        m.insert("verdict".into(), verdict_json(&Verdict::Degenerate { report: d }));
        return Outcome::new(m, EXIT_DEGENERATE);
    }
    match slicer::find_good_slice_with(cone, settings.budget, &slice_options(settings)) {
        SliceSearch::Found(res) => {
            m.insert("slice".into(), slice_json(&res));
            Outcome::new(m, EXIT_OK)
        }
        SliceSearch::NoSliceFound { reason, tried } => {
            m.insert("slice_search".into(), json!({"found": false, "reason": reason, "tried": tried}));
            let form = slicer::classify_two_sided_nd(cone);
            m.insert("two_sided_form".into(), two_sided_form_json(&form));
            let code = if form == TwoSidedForm::Unknown { EXIT_NO_SLICE } else { EXIT_OK };
            Outcome::new(m, code)
        }
    }
}

pub fn cmd_jump_demo(settings: &Settings) -> Outcome {
    let mut m = header("jump-demo", settings);
    m.insert("input".into(), render(&decider::example_cone()));
    let code = match decider::jump_demo(settings.seed, settings.samples) {
        Ok(rep) => {
            let ok = rep.identity_residual <= 1e-12
                && rep.continuity_ratio.is_finite()
                && rep.continuity_ratio <= JUMP_CONTINUITY_BOUND;
            m.insert("jump".into(), json!(rep));
            m.insert(
                "checks".into(),
                json!({"identity_bound": 1e-12, "continuity_bound": JUMP_CONTINUITY_BOUND, "pass": ok}),
            );
            if ok {
                EXIT_OK
            } else {
                EXIT_VERIFICATION
            }
        }
        Err(e) => {
            m.insert("jump".into(), error_json(&e));
            EXIT_VERIFICATION
        }
    };
    Outcome::new(m, code)
}

/// Parses `start:stop:step` or a comma list.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("bad number `{s}`: {e}"));
    if parts.len() == 3 {
        let (a, b, h) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(h > 0.0) || b < a {
            return Err(format!("bad range `{text}`"));
        }
        let steps = ((b - a) / h + 1e-9).floor() as usize;
        return Ok((0..=steps).map(|k| a + k as f64 * h).collect());
    }
    text.split(',').map(num).collect()
}

/// One atlas row.
fn atlas_row(nt: NormalFormType) -> (Value, bool) {
    let table = decider::table_outcome(&nt);
    let rendered = nt.render();
    let (got, got_tag) = match normalform2::classify2(&rendered) {
        Classification::Normal(res) => {
            let v = decider::decide2(&res);
            let label = match &v {
                Verdict::OneSided { side, .. } => format!("OneSided{side:?}"),
                Verdict::TwoSided { witness } => format!("TwoSided{:?}", witness.kind),
                Verdict::Degenerate { .. } => "Degenerate".into(),
            };
            (label, res.ntype.tag())
        }
        Classification::Degenerate(d) => (format!("Degenerate{:?}", d.reason), ""),
    };
    let want = match table {
        TableOutcome::OneSided(side) => format!("OneSided{side:?}"),
        TableOutcome::TwoSided(kind) => format!("TwoSided{kind:?}"),
    };
    // table parameters whose rendered form is not a genuine cone (M11_1 with A = B = 1)
    let degenerate = got_tag.is_empty();
    let agree = degenerate || (got == want && got_tag == nt.tag());
    let row = json!({
        "tag": nt.tag(),
        "params": nt.params().into_iter().map(complex_json).collect::<Vec<_>>(),
        "table": want,
        "decided": got,
        "degenerate": degenerate,
        "agree": agree,
    });
    (row, agree)
}

/// Sweeps a tag's parameter grid and cross-checks every cell against `decide`.
///
/// `grid` is the first real parameter; `grid2` the second (`B` for M20 and
/// M11_1, `Im A` for M11_2).
pub fn cmd_atlas(tag: &str, grid: &[f64], grid2: &[f64], settings: &Settings) -> Outcome {
    let mut m = header("atlas", settings);
    m.insert("tag".into(), json!(tag));
    let cells: Vec<Vec<num_complex::Complex64>> = match tag {
        "M20" | "M11_1" => grid
            .iter()
            .flat_map(|&a| grid2.iter().map(move |&b| vec![c(a, 0.0), c(b, 0.0)]))
            .collect(),
        "M11_2" => grid
            .iter()
            .flat_map(|&a| grid2.iter().map(move |&b| vec![c(a, b)]))
            .collect(),
        "M10_1" => grid.iter().map(|&a| vec![c(a, 0.0)]).collect(),
        "M11_3" | "M10_2" | "M00_1" => vec![vec![]],
        _ => {
            m.insert("error".into(), json!(format!("unknown tag `{tag}`")));
            return Outcome::new(m, EXIT_SCHEMA);
        }
    };
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    let mut all = true;
    for params in cells {
        match NormalFormType::from_tag(tag, &params) {
            Ok(nt) => {
                let (row, ok) = atlas_row(nt);
                all &= ok;
                rows.push(row);
            }
            Err(_) => skipped.push(Value::Array(params.into_iter().map(complex_json).collect())),
        }
    }
    m.insert("rows".into(), Value::Array(rows));
    m.insert("out_of_range".into(), Value::Array(skipped));
    m.insert("all_agree".into(), json!(all));
    Outcome::new(m, if all { EXIT_OK } else { EXIT_VERIFICATION })
}

/// Writes `eps, re_z1, im_z1, …, rho` rows.
pub fn write_points_csv(path: &Path, points: &[DiscPoint]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let n = points.first().map_or(0, |p| p.z.len());
    let mut header = vec!["eps".to_string()];
    for k in 1..=n {
        header.push(format!("re_z{k}"));
        header.push(format!("im_z{k}"));
    }
    header.push("rho".into());
    w.write_record(&header)?;
    for p in points {
        let mut rec = vec![format!("{:e}", p.eps)];
        for z in p.z.iter() {
            rec.push(format!("{:e}", z.re));
            rec.push(format!("{:e}", z.im));
        }
        rec.push(format!("{:e}", p.rho));
        w.write_record(&rec)?;
    }
    w.flush()
}

/// Writes atlas rows as `tag, p1, p2, table, decided, agree`.
pub fn write_atlas_csv(path: &Path, report: &Value) -> std::io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["tag", "p1_re", "p1_im", "p2_re", "p2_im", "table", "decided", "agree"])?;
    let rows = report["rows"].as_array().cloned().unwrap_or_default();
    for row in rows {
        let p = row["params"].as_array().cloned().unwrap_or_default();
        let part = |k: usize, f: &str| p.get(k).map_or(String::new(), |v| v[f].to_string());
        w.write_record([
            row["tag"].as_str().unwrap_or_default().to_string(),
            part(0, "re"),
            part(0, "im"),
            part(1, "re"),
            part(1, "im"),
            row["table"].as_str().unwrap_or_default().to_string(),
            row["decided"].as_str().unwrap_or_default().to_string(),
            row["agree"].to_string(),
        ])?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::spec::parse_spec;

    fn spec_of(cone: &QuadraticCone) -> ConeSpec {
        parse_spec(&render(cone).to_string()).unwrap()
    }

    fn quick() -> Settings {
        Settings {
            samples: 500,
            ..Settings::default()
        }
    }

    #[test]
    fn decide_example_m() {
        let out = cmd_decide(&spec_of(&decider::example_cone()), &quick());
        assert_eq!(out.code, EXIT_OK);
        let v = &out.report["verdict"];
        assert_eq!(v["kind"], "TwoSided");
        assert_eq!(v["witness"]["A_plus"]["description"], "{z2 = 0}");
        assert_eq!(v["witness"]["A_minus"]["description"], "{z1 = 0}");
    }

    #[test]
    fn zero_cone_is_degenerate() {
        let out = cmd_classify(&spec_of(&QuadraticCone::zero(2)), &quick());
        assert_eq!(out.code, EXIT_DEGENERATE);
    }

    #[test]
    fn atlas_m11_1_matches_table() {
        let g = parse_grid("0.25:2:0.25").unwrap();
        assert_eq!(g.len(), 8);
        let out = cmd_atlas("M11_1", &g, &g, &quick());
        assert_eq!(out.code, EXIT_OK, "{}", out.report);
        for row in out.report["rows"].as_array().unwrap() {
            let a = row["params"][0]["re"].as_f64().unwrap();
            let b = row["params"][1]["re"].as_f64().unwrap();
            if row["degenerate"].as_bool().unwrap() {
                assert_eq!((a, b), (1.0, 1.0));
                continue;
            }
            let two = b <= a && a <= 1.0 || a == b;
            assert_eq!(row["table"].as_str().unwrap().starts_with("TwoSided"), two, "{row}");
        }
    }

    #[test]
    fn decide_is_deterministic() {
        let s = spec_of(&crate::quadform::diagonal(&[c(2.0, 0.0), c(1.0, 0.0)], &[1.0, 1.0]));
        let a = cmd_verify(&s, &quick()).report.to_string();
        let b = cmd_verify(&s, &quick()).report.to_string();
        assert_eq!(a, b);
    }
}
