//! JSON views of library results.

use serde_json::{json, Value};

use super::spec::{complex_json, matrix_json, render};
use crate::decider::{DiscFamily, DiscKind, Hyperplane, SupportWitness, Verdict};
use crate::linalg::{self, CVec, C64};
use crate::normalform2::{Classification, DegeneracyReport, NormalFormResult};
use crate::quadform::QuadraticCone;
use crate::slicer::{SliceResult, TwoSidedForm};
use crate::tol;

pub fn vector_json(v: &CVec) -> Value {
    Value::Array(v.iter().map(|&z| complex_json(z)).collect())
}

fn fmt_coeff(z: C64) -> String {
    let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re}")
    } else if re == 0.0 {
        format!("{im}i")
    } else {
        format!("({re}{}{}i)", if im < 0.0 { "-" } else { "+" }, im.abs())
    }
}

/// `{z2 = 0}`, `{z2 - 1i z1 = 0}`, …: the hyperplane scaled so its first
/// nonzero coefficient is 1.
pub fn describe_hyperplane(ell: &CVec) -> String {
    let scale = ell.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    let nz: Vec<usize> = (0..ell.len()).filter(|&k| ell[k].norm() > 1e-12 * scale).collect();
    let Some(&lead) = nz.first() else {
        return "{everything}".into();
    };
    let mut out = format!("z{}", lead + 1);
    for &k in &nz[1..] {
        let cf = ell[k] / ell[lead];
        let text = fmt_coeff(cf);
        if let Some(rest) = text.strip_prefix('-') {
            out.push_str(&format!(" - {rest} z{}", k + 1));
        } else {
            out.push_str(&format!(" + {text} z{}", k + 1));
        }
    }
    format!("{{{out} = 0}}")
}

pub fn hyperplane_json(h: &Hyperplane) -> Value {
    json!({"ell": vector_json(&h.ell), "description": describe_hyperplane(&h.ell)})
}

pub fn family_json(f: &DiscFamily) -> Value {
    let kind = match &f.kind {
        DiscKind::LevelSet { c } => json!({"kind": "LevelSet", "C": matrix_json(&linalg::to_dmat(c))}),
        DiscKind::AffineLine { ell, shift } => {
            json!({"kind": "AffineLine", "ell": vector_json(ell), "shift": complex_json(*shift)})
        }
    };
    json!({"shape": kind, "side": f.side, "radius": f.radius})
}

pub fn witness_json(w: &SupportWitness) -> Value {
    json!({
        "support": w.kind,
        "A_plus": hyperplane_json(&w.aplus),
        "A_minus": hyperplane_json(&w.aminus),
        "angles": w.angles.map(|(a, b)| json!([a, b])),
    })
}

pub fn degeneracy_json(d: &DegeneracyReport) -> Value {
    json!({"reason": d.reason, "detail": d.detail})
}

pub fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::OneSided { side, family } => {
            json!({"kind": "OneSided", "side": side, "family": family_json(family)})
        }
        Verdict::TwoSided { witness } => json!({"kind": "TwoSided", "witness": witness_json(witness)}),
        Verdict::Degenerate { report } => json!({"kind": "Degenerate", "degeneracy": degeneracy_json(report)}),
    }
}

pub fn normal_form_json(r: &NormalFormResult) -> Value {
    json!({
        "tag": r.ntype.tag(),
        "params": r.ntype.params().into_iter().map(complex_json).collect::<Vec<_>>(),
        "display": r.ntype.to_string(),
        "T": matrix_json(&linalg::to_dmat(&r.t)),
        "lambda": r.lambda,
        "sign": r.sign,
        "residual": r.residual,
        "boundary_margin": r.boundary_margin,
        "low_confidence": r.low_confidence,
    })
}

pub fn classification_json(c: &Classification) -> Value {
    match c {
        Classification::Normal(r) => json!({"normal_form": normal_form_json(r)}),
        Classification::Degenerate(d) => json!({"degeneracy": degeneracy_json(d)}),
    }
}

pub fn signatures_json(cone: &QuadraticCone, zero_eigen: f64) -> Value {
    let hs = cone.hermitian_signature(zero_eigen);
    let rs = cone.real_signature(zero_eigen);
    json!({"hermitian": hs, "real": rs})
}

pub fn slice_json(s: &SliceResult) -> Value {
    json!({
        "case": s.slice.case,
        "construction": s.slice.construction,
        "basis": matrix_json(&s.slice.basis),
        "restricted": render(&s.restricted),
        "classification": classification_json(&s.classification),
        "verdict": verdict_json(&s.verdict),
        "discs": s.discs,
        "tried": s.tried,
    })
}

pub fn two_sided_form_json(f: &TwoSidedForm) -> Value {
    match f {
        TwoSidedForm::ProductForm { inner, complement } => json!({
            "form": "ProductForm",
            "inner": normal_form_json(inner),
            "complement": matrix_json(complement),
        }),
        TwoSidedForm::Ts1 { k, t, residual } => json!({
            "form": "TS1",
            "k": k,
            "T": matrix_json(t),
            "residual": residual,
            "contained_hypersurface": format!("{{w1^2 + ... + w{k}^2 = 0}} in w = T^-1 z"),
        }),
        TwoSidedForm::Ts2 { a, l, m, t, residual } => json!({
            "form": "TS2",
            "alpha": vector_json(a),
            "lambda": vector_json(l),
            "mu": vector_json(m),
            "T": matrix_json(t),
            "residual": residual,
            "contained_hypersurface": describe_hyperplane(a),
        }),
        TwoSidedForm::Unknown => json!({"form": "Unknown"}),
    }
}

pub fn tolerances_json(t: &tol::Tolerances) -> Value {
    serde_json::to_value(t).expect("plain struct")
}
