//! Machine-readable output: verdicts and networks as JSON values, with
//! rationals rendered as `num/den` strings.

use serde_json::{json, Value};

use qsr::boxes::Rectangle;
use qsr::interaction::JointNetwork;
use qsr::network::Network;
use qsr::solver::{Verdict, Witness};
use qsr::Rat;

use crate::format::{dir_spec, top_spec};

pub fn rat_str(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn rect_json(r: &Rectangle) -> Value {
    json!({
        "x": [rat_str(r.ix().lo()), rat_str(r.ix().hi())],
        "y": [rat_str(r.iy().lo()), rat_str(r.iy().hi())],
    })
}

fn side_json(net: &Network, vars: &[String], spec: fn(&qsr::algebra::Relation) -> String) -> Value {
    let entries: Vec<Value> = net
        .pairs()
        .map(|(i, j)| {
            json!({
                "from": vars[i],
                "to": vars[j],
                "rel": spec(&net.get(i, j)),
            })
        })
        .collect();
    Value::Array(entries)
}

fn witness_json(witness: &Witness, vars: &[String]) -> (Value, Value, Value) {
    let scenario_top = side_json(&witness.scenario_top, vars, top_spec);
    let scenario_dir = side_json(&witness.scenario_dir, vars, dir_spec);
    let rects: serde_json::Map<String, Value> = vars
        .iter()
        .zip(witness.rectangles.iter())
        .map(|(v, r)| (v.clone(), rect_json(r)))
        .collect();
    (scenario_top, scenario_dir, Value::Object(rects))
}

pub fn verdict_json(net: &JointNetwork, verdict: &Verdict, svg_path: Option<&str>) -> Value {
    let (scenario_top, scenario_dir, rectangles) = match &verdict.witness {
        Some(w) => witness_json(w, &net.vars),
        None => (Value::Null, Value::Null, Value::Null),
    };
    let chi = match &verdict.chi_report {
        None => Value::Null,
        Some(entries) => Value::Array(
            entries
                .iter()
                .map(|e| {
                    json!({
                        "i": net.vars[e.i],
                        "j": net.vars[e.j],
                        "axis": e.axis.token(),
                        "basic": e.basic.token(),
                        "chi": rat_str(&e.chi),
                    })
                })
                .collect(),
        ),
    };
    let mut obj = json!({
        "status": verdict.status.token(),
        "fragment": {
            "top_in_h8": match verdict.fragment.top_in_h8 {
                Some(b) => Value::Bool(b),
                None => Value::String("unknown".into()),
            },
            "dir_in_dir49": verdict.fragment.dir_in_dir49,
        },
        "scenario_top": scenario_top,
        "scenario_dir": scenario_dir,
        "rectangles": rectangles,
        "chi_report": chi,
        "trace": verdict.trace,
    });
    if let Some(path) = svg_path {
        obj["svg_path"] = Value::String(path.to_string());
    }
    obj
}

pub fn network_json(status: &str, net: &JointNetwork) -> Value {
    json!({
        "status": status,
        "vars": net.vars,
        "top": side_json(&net.top, &net.vars, top_spec),
        "dir": side_json(&net.dir, &net.vars, dir_spec),
    })
}

pub fn inconsistent_json(net: &JointNetwork, i: usize, j: usize) -> Value {
    json!({
        "status": "inconsistent",
        "pair": [net.vars[i], net.vars[j]],
    })
}
