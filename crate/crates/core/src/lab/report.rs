//! Deterministic JSON-lines and CSV emission.

use std::io::Write;

use serde_json::Value;

use super::config::Format;
use super::record::ResultRecord;
use crate::error::{Error, Result};

/// CSV columns per op: header name and JSON pointer into the payload.
pub fn csv_columns(op: &str) -> &'static [(&'static str, &'static str)] {
    match op {
        "relation" => &[
            ("outcome", "/outcome"),
            ("l", "/l"),
            ("max_norm", "/max_norm"),
            ("verified_exactly", "/verified_exactly"),
            ("exhaustive", "/exhaustive"),
            ("height", "/height"),
            ("precision", "/precision"),
        ],
        "genericity" => &[
            ("d", "/record/d"),
            ("subset", "/record/best/subset"),
            ("l", "/record/best/l"),
            ("log_min_lo", "/record/best/log_exp_value/lo"),
            ("log_min_hi", "/record/best/log_exp_value/hi"),
            ("threshold", "/record/threshold/lo"),
            ("verdict", "/record/pass"),
            ("approximate", "/record/best/approximate"),
        ],
        "bituple" => &[
            ("l_height", "/point/l_height"),
            ("r_height", "/point/r_height"),
            ("theta_l", "/point/theta_best/l"),
            ("kappa_r", "/point/kappa_best/l"),
            ("log_lo", "/point/log_exp_value/lo"),
            ("log_hi", "/point/log_exp_value/hi"),
            ("threshold", "/point/threshold/lo"),
            ("verdict", "/point/pass"),
        ],
        "schedule" => &[
            ("d", "/d"),
            ("k", "/k"),
            ("mu", "/mu"),
            ("nu", "/nu"),
            ("L", "/l"),
            ("R", "/r"),
            ("M", "/m"),
            ("M_closed_form", "/m_paper"),
            ("delta", "/delta"),
            ("U", "/u"),
            ("siegel_ok", "/siegel_ok"),
            ("feasible", "/feasible"),
        ],
        "frontier" => &[
            ("mu", "/mu"),
            ("nu", "/nu"),
            ("k", "/k"),
            ("d", "/d"),
            ("cap", "/cap"),
            ("eventually_feasible", "/eventually_feasible"),
            ("exact_scan", "/exact_scan"),
        ],
        "auxpoly" => &[
            ("d", "/schedule/d"),
            ("L", "/polynomial/L"),
            ("delta", "/siegel/delta"),
            ("u_target", "/siegel/u_target"),
            ("log_height", "/siegel/log_height"),
            ("achieved_u", "/siegel/achieved_u"),
            ("best_effort", "/siegel/best_effort"),
            ("grid_points", "/siegel/grid_points"),
        ],
        "omega" => &[("omega", "/omega"), ("points", "/points"), ("ambient_dim", "/ambient_dim"), ("rank_at_omega", "/rank_at_omega")],
        "zero_estimate" => &[
            ("order", "/order"),
            ("depth", "/depth"),
            ("degree", "/degree"),
            ("product_points", "/product_points"),
            ("omega", "/omega"),
            ("characters_searched", "/characters_searched"),
            ("character", "/found/character"),
            ("cosets", "/found/cosets"),
            ("subgroup_dim", "/found/subgroup/dim"),
        ],
        "distance_audit" => &[
            ("d", "/schedule/d"),
            ("s", "/s"),
            ("card_sigma", "/card_sigma"),
            ("hilbert_bound", "/hilbert_bound"),
            ("pigeonhole_applies", "/pigeonhole_applies"),
            ("log_distance_lo", "/log_distance/lo"),
            ("target", "/target/lo"),
            ("regf1_lower", "/regf1_lower/lo"),
            ("chain_upper", "/chain_upper/hi"),
            ("binding", "/binding"),
        ],
        "bounds" => &[
            ("m", "/m"),
            ("n", "/n"),
            ("theorem_t", "/theorem_t"),
            ("mu", "/witness/mu"),
            ("nu", "/witness/nu"),
            ("corollary_t", "/corollary_t"),
            ("conjecture_bound", "/conjecture_bound"),
            ("gap", "/gap"),
        ],
        "corollary_check" => &[
            ("n", "/n"),
            ("t", "/t"),
            ("mu", "/mu"),
            ("nu", "/nu"),
            ("ratio_ok", "/ratio_ok"),
            ("size_bound", "/size_bound"),
            ("size_ok", "/size_ok"),
            ("pass", "/pass"),
        ],
        "power_split" => &[
            ("m", "/m"),
            ("n", "/n"),
            ("theta_lo", "/theta/0"),
            ("theta_hi", "/theta/1"),
            ("kappa_lo", "/kappa/0"),
            ("kappa_hi", "/kappa/1"),
            ("bound", "/bound"),
            ("formula_bound", "/formula_bound"),
        ],
        "philippon_audit" => &[
            ("d", "/d"),
            ("case", "/case"),
            ("degree", "/degree"),
            ("norm", "/norm"),
            ("value", "/value"),
            ("distance", "/distance/status"),
            ("distance_certified", "/distance/certified"),
            ("log_distance", "/distance/log_distance"),
        ],
        _ => &[],
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Array(a)) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            a.iter().map(|x| cell(Some(x))).collect::<Vec<_>>().join(" ")
        }
        Some(v) => v.to_string(),
    }
}

/// Stable sort by `(D, subset, l)`.
pub fn sort_records(records: &mut [ResultRecord]) {
    records.sort_by(|a, b| a.key.cmp(&b.key));
}

fn check_schema(records: &[ResultRecord], op: &str) -> Result<()> {
    if let Some(r) = records.iter().find(|r| r.schema_version != records[0].schema_version) {
        return Err(Error::MixedSchema(format!("schema versions {} and {}", records[0].schema_version, r.schema_version)));
    }
    if let Some(r) = records.iter().find(|r| r.op != op) {
        return Err(Error::MixedSchema(format!("ops {op} and {}", r.op)));
    }
    Ok(())
}

pub fn write_report(records: &[ResultRecord], op: &str, format: Format, w: &mut impl Write) -> Result<()> {
    check_schema(records, op)?;
    let mut sorted = records.to_vec();
    sort_records(&mut sorted);
    match format {
        Format::Jsonl => {
            for r in &sorted {
                writeln!(w, "{}", r.to_line())?;
            }
        }
        Format::Csv => {
            let cols = csv_columns(op);
            let mut cw = csv::Writer::from_writer(w);
            let header = ["experiment_id", "seed", "precision", "approximate"].into_iter().chain(cols.iter().map(|c| c.0));
            cw.write_record(header).map_err(csv_err)?;
            for r in &sorted {
                let meta = [r.experiment_id.clone(), r.seed.to_string(), r.precision.to_string(), r.approximate.to_string()];
                let vals = cols.iter().map(|(_, p)| cell(r.payload.pointer(p)));
                cw.write_record(meta.into_iter().chain(vals)).map_err(csv_err)?;
            }
            cw.flush()?;
        }
    }
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::invalid(format!("csv: {other:?}")),
    }
}
