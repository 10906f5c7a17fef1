//! Random chart specifications for property tests.

use proptest::prelude::*;
use serde_json::{json, Map, Value};

fn pick(options: &'static [&'static str]) -> impl Strategy<Value = String> {
    prop::sample::select(options).prop_map(str::to_string)
}

pub fn encoding() -> impl Strategy<Value = Value> {
    (
        prop::option::of(pick(&["Horsepower", "Origin", "Year", "Cylinders", "Horsepowr"])),
        prop::option::of(pick(&["quantitative", "ordinal", "nominal", "temporal", "nominl"])),
        prop::option::of(pick(&["count", "mean", "sum", "avg"])),
        prop::option::of(prop_oneof![
            Just(json!(true)),
            Just(json!(false)),
            (1i64..30).prop_map(|n| json!({"maxbins": n})),
            Just(json!({"maxbins": -2})),
        ]),
        prop::option::of((any::<bool>(), prop::option::of(any::<bool>()))),
        prop::option::of(prop_oneof![
            pick(&["zero", "normalize", "center", "sideways"]).prop_map(Value::String),
            Just(Value::Null),
        ]),
        prop::option::of(pick(&["A title", "Weight (lbs)"])),
    )
        .prop_map(|(field, ty, agg, bin, scale, stack, title)| {
            let mut m = Map::new();
            if let Some(f) = field {
                m.insert("field".into(), json!(f));
            }
            if let Some(t) = ty {
                m.insert("type".into(), json!(t));
            }
            if let Some(a) = agg {
                m.insert("aggregate".into(), json!(a));
            }
            if let Some(b) = bin {
                m.insert("bin".into(), b);
            }
            if let Some((log, zero)) = scale {
                let mut s = Map::new();
                if log {
                    s.insert("type".into(), json!("log"));
                }
                if let Some(z) = zero {
                    s.insert("zero".into(), json!(z));
                }
                m.insert("scale".into(), Value::Object(s));
            }
            if let Some(s) = stack {
                m.insert("stack".into(), s);
            }
            if let Some(t) = title {
                m.insert("title".into(), json!(t));
            }
            Value::Object(m)
        })
}

pub fn spec_json() -> impl Strategy<Value = String> {
    let channel = pick(&["x", "y", "color", "size", "shape", "text", "row", "detail", "colr"]);
    (
        prop_oneof![
            pick(&["point", "bar", "line", "area", "tick", "text", "rect", "pnt"]).prop_map(Value::String),
            Just(json!({"type": "bar", "opacity": 0.5})),
        ],
        prop::collection::vec((channel, encoding()), 0..5),
        any::<bool>(),
        prop::option::of(Just(json!(300))),
    )
        .prop_map(|(mark, encs, data, width)| {
            // Built as text so repeated channel keys survive.
            let body: Vec<String> = encs
                .iter()
                .map(|(k, v)| format!("{}:{}", json!(k), v))
                .collect();
            let mut parts = vec![format!("\"mark\":{mark}"), format!("\"encoding\":{{{}}}", body.join(","))];
            if data {
                parts.push("\"data\":{\"url\":\"data/cars.json\"}".into());
            }
            if let Some(w) = width {
                parts.push(format!("\"width\":{w}"));
            }
            format!("{{{}}}", parts.join(","))
        })
}
