//! JSON reading and writing for [`ChartSpec`].

use std::fmt;

use serde::de::{Deserialize, Deserializer, MapAccess, Visitor};
use serde_json::{Map, Value};

use super::{
    BinSpec, ChannelToken, ChartSpec, DataRef, Encoding, MaxBins, ScaleSpec, StackToken, Token,
};
use crate::error::SpecError;

/// A specification split into its top-level parts, with the encoding block
/// kept as an ordered list so duplicate channel keys survive.
#[derive(Debug, Clone, PartialEq, Default)]
pub(crate) struct DocParts {
    pub mark: Option<Value>,
    pub encoding: Option<Vec<(String, Value)>>,
    pub data: Option<Value>,
    pub passthrough: Map<String, Value>,
}

struct Entries(Vec<(String, Value)>);

impl<'de> Deserialize<'de> for Entries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct EntriesVisitor;
        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = Entries;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("`encoding` to be an object")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Entries, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, Value>()? {
                    out.push((k, v));
                }
                Ok(Entries(out))
            }
        }
        d.deserialize_map(EntriesVisitor)
    }
}

impl<'de> Deserialize<'de> for DocParts {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct DocVisitor;
        impl<'de> Visitor<'de> for DocVisitor {
            type Value = DocParts;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a specification object")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<DocParts, A::Error> {
                let mut doc = DocParts::default();
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "encoding" => doc.encoding = Some(map.next_value::<Entries>()?.0),
                        "mark" => doc.mark = Some(map.next_value()?),
                        "data" => doc.data = Some(map.next_value()?),
                        _ => {
                            let v: Value = map.next_value()?;
                            doc.passthrough.insert(key, v);
                        }
                    }
                }
                Ok(doc)
            }
        }
        d.deserialize_map(DocVisitor)
    }
}

/// Parses a Vega-Lite JSON document.
pub fn parse_spec(json_text: &str) -> Result<ChartSpec, SpecError> {
    let doc: DocParts = serde_json::from_str(json_text)?;
    from_parts(doc)
}

fn keyword(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub(crate) fn from_parts(doc: DocParts) -> Result<ChartSpec, SpecError> {
    let mark_value = doc.mark.ok_or(SpecError::MissingKey("mark"))?;
    let entries = doc.encoding.ok_or(SpecError::MissingKey("encoding"))?;

    let (mark, mark_props) = match mark_value {
        Value::Object(mut obj) => {
            let ty = obj.shift_remove("type").map(|v| keyword(&v)).unwrap_or_default();
            (Token::new(ty), obj)
        }
        other => (Token::new(keyword(&other)), Map::new()),
    };

    let encodings = entries
        .into_iter()
        .map(|(key, value)| parse_encoding(key, value))
        .collect::<Result<Vec<_>, _>>()?;

    let data = match doc.data {
        None => None,
        Some(Value::Object(mut obj)) => {
            let url = match obj.shift_remove("url") {
                Some(Value::String(s)) => Some(s),
                Some(other) => {
                    obj.insert("url".into(), other);
                    None
                }
                None => None,
            };
            let values = match obj.shift_remove("values") {
                Some(Value::Array(rows)) => Some(rows),
                Some(other) => {
                    obj.insert("values".into(), other);
                    None
                }
                None => None,
            };
            Some(DataRef {
                url,
                values,
                extra: obj,
            })
        }
        Some(other) => {
            return Err(SpecError::Structure(format!(
                "`data` must be an object, found {other}"
            )))
        }
    };

    Ok(ChartSpec {
        mark,
        mark_props,
        encodings,
        data,
        passthrough: doc.passthrough,
    })
}

fn parse_encoding(key: String, value: Value) -> Result<Encoding, SpecError> {
    let Value::Object(obj) = value else {
        return Err(SpecError::Structure(format!(
            "encoding `{key}` must be an object"
        )));
    };
    let mut enc = Encoding::new(ChannelToken::new(key));
    for (k, v) in obj {
        match (k.as_str(), v) {
            ("field", Value::String(s)) => enc.field = Some(s),
            ("type", v) => enc.field_type = Some(Token::new(keyword(&v))),
            ("aggregate", v) => enc.aggregate = Some(Token::new(keyword(&v))),
            ("bin", Value::Bool(true)) => enc.bin = Some(BinSpec::default()),
            ("bin", Value::Bool(false) | Value::Null) => enc.bin = None,
            ("bin", Value::Object(b)) => enc.bin = Some(parse_bin(b)),
            ("bin", other) => {
                enc.bin = Some(BinSpec {
                    maxbins: Some(MaxBins::Invalid(other)),
                    extra: Map::new(),
                })
            }
            ("scale", Value::Object(s)) => enc.scale = parse_scale(s),
            ("stack", v) => enc.stack = Some(StackToken::from_value(v)),
            (_, v) => {
                enc.extra.insert(k, v);
            }
        }
    }
    Ok(enc)
}

fn parse_bin(mut obj: Map<String, Value>) -> BinSpec {
    let maxbins = obj.shift_remove("maxbins").map(|v| match v.as_u64() {
        Some(n) if n > 0 && n <= u64::from(u32::MAX) => MaxBins::Valid(n as u32),
        _ => MaxBins::Invalid(v),
    });
    BinSpec {
        maxbins,
        extra: obj,
    }
}

fn parse_scale(obj: Map<String, Value>) -> ScaleSpec {
    let mut scale = ScaleSpec::default();
    for (k, v) in obj {
        match (k.as_str(), v) {
            ("type", Value::String(t)) if t == "log" => scale.log = true,
            ("zero", Value::Bool(z)) => scale.zero = Some(z),
            (_, v) => {
                scale.extra.insert(k, v);
            }
        }
    }
    scale
}

fn bin_value(bin: &BinSpec) -> Value {
    if bin.maxbins.is_none() && bin.extra.is_empty() {
        return Value::Bool(true);
    }
    let mut obj = Map::new();
    match &bin.maxbins {
        Some(MaxBins::Valid(n)) => {
            obj.insert("maxbins".into(), Value::from(*n));
        }
        Some(MaxBins::Invalid(v)) => {
            obj.insert("maxbins".into(), v.clone());
        }
        None => {}
    }
    obj.extend(bin.extra.clone());
    Value::Object(obj)
}

pub(crate) fn encoding_value(enc: &Encoding) -> Value {
    let mut obj = Map::new();
    if let Some(f) = &enc.field {
        obj.insert("field".into(), Value::String(f.clone()));
    }
    if let Some(t) = &enc.field_type {
        obj.insert("type".into(), Value::String(t.raw.clone()));
    }
    if let Some(a) = &enc.aggregate {
        obj.insert("aggregate".into(), Value::String(a.raw.clone()));
    }
    if let Some(b) = &enc.bin {
        obj.insert("bin".into(), bin_value(b));
    }
    if let Some(s) = &enc.stack {
        obj.insert("stack".into(), s.raw.clone());
    }
    if !enc.scale.is_empty() {
        let mut scale = Map::new();
        if enc.scale.log {
            scale.insert("type".into(), Value::String("log".into()));
        }
        if let Some(z) = enc.scale.zero {
            scale.insert("zero".into(), Value::Bool(z));
        }
        scale.extend(enc.scale.extra.clone());
        obj.insert("scale".into(), Value::Object(scale));
    }
    obj.extend(enc.extra.clone());
    Value::Object(obj)
}

pub(crate) fn mark_value(spec: &ChartSpec) -> Value {
    if spec.mark_props.is_empty() {
        Value::String(spec.mark.raw.clone())
    } else {
        let mut obj = Map::new();
        obj.insert("type".into(), Value::String(spec.mark.raw.clone()));
        obj.extend(spec.mark_props.clone());
        Value::Object(obj)
    }
}

fn data_value(data: &DataRef) -> Value {
    let mut obj = Map::new();
    if let Some(url) = &data.url {
        obj.insert("url".into(), Value::String(url.clone()));
    }
    if let Some(values) = &data.values {
        obj.insert("values".into(), Value::Array(values.clone()));
    }
    obj.extend(data.extra.clone());
    Value::Object(obj)
}

pub(crate) fn to_parts(spec: &ChartSpec) -> DocParts {
    DocParts {
        mark: Some(mark_value(spec)),
        encoding: Some(
            spec.encodings
                .iter()
                .map(|e| (e.key().to_string(), encoding_value(e)))
                .collect(),
        ),
        data: spec.data.as_ref().map(data_value),
        passthrough: spec.passthrough.clone(),
    }
}

fn pretty(v: &Value, indent: usize) -> String {
    let text = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    text.replace('\n', &format!("\n{}", " ".repeat(indent)))
}

fn quoted(key: &str) -> String {
    Value::String(key.to_string()).to_string()
}

/// Writes a specification as pretty-printed JSON with keys in the order
/// mark, encoding, data, then passthrough keys in source order.
pub fn serialize_spec(spec: &ChartSpec) -> String {
    let parts = to_parts(spec);
    let mut members: Vec<String> = Vec::new();
    if let Some(mark) = &parts.mark {
        members.push(format!("  \"mark\": {}", pretty(mark, 2)));
    }
    let encoding = parts.encoding.unwrap_or_default();
    if encoding.is_empty() {
        members.push("  \"encoding\": {}".to_string());
    } else {
        let inner: Vec<String> = encoding
            .iter()
            .map(|(k, v)| format!("    {}: {}", quoted(k), pretty(v, 4)))
            .collect();
        members.push(format!("  \"encoding\": {{\n{}\n  }}", inner.join(",\n")));
    }
    if let Some(data) = &parts.data {
        members.push(format!("  \"data\": {}", pretty(data, 2)));
    }
    for (k, v) in &parts.passthrough {
        members.push(format!("  {}: {}", quoted(k), pretty(v, 2)));
    }
    format!("{{\n{}\n}}\n", members.join(",\n"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{Aggregate, Channel, Mark};

    #[test]
    fn minimal_spec() {
        let spec = parse_spec(
            r#"{"mark":"point","encoding":{"x":{"field":"Horsepower","type":"quantitative"}}}"#,
        )
        .unwrap();
        assert_eq!(spec.mark.canonical, Some(Mark::Point));
        assert_eq!(spec.encodings.len(), 1);
        assert_eq!(spec.encodings[0].channel.canonical, Some(Channel::X));
        assert_eq!(spec.encodings[0].field.as_deref(), Some("Horsepower"));
    }

    #[test]
    fn typo_mark_is_not_an_error() {
        let spec = parse_spec(r#"{"mark":"poin","encoding":{}}"#).unwrap();
        assert_eq!(spec.mark.raw, "poin");
        assert_eq!(spec.mark.canonical, None);
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse_spec("{\n  \"mark\": \"point\",\n  \"encoding\": {,}\n}").unwrap_err();
        match err {
            SpecError::Json { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_keys_are_named() {
        assert_eq!(
            parse_spec(r#"{"encoding":{}}"#).unwrap_err(),
            SpecError::MissingKey("mark")
        );
        assert_eq!(
            parse_spec(r#"{"mark":"bar"}"#).unwrap_err(),
            SpecError::MissingKey("encoding")
        );
    }

    #[test]
    fn duplicate_channel_keys_survive() {
        let spec = parse_spec(
            r#"{"mark":"point","encoding":{"x":{"field":"a"},"x":{"field":"b"}}}"#,
        )
        .unwrap();
        assert_eq!(spec.encodings.len(), 2);
        let text = serialize_spec(&spec);
        assert_eq!(parse_spec(&text).unwrap(), spec);
    }

    #[test]
    fn mark_object_and_passthrough() {
        let text = r#"{"$schema":"https://vega.github.io/schema/vega-lite/v5.json",
            "title":"Cars","mark":{"type":"bar","tooltip":true},
            "encoding":{"y":{"aggregate":"count","type":"quantitative","axis":{"grid":false}}},
            "data":{"url":"data/cars.json"}}"#;
        let spec = parse_spec(text).unwrap();
        assert_eq!(spec.mark.canonical, Some(Mark::Bar));
        assert_eq!(spec.mark_props["tooltip"], Value::Bool(true));
        assert_eq!(
            spec.encodings[0].aggregate.as_ref().unwrap().canonical,
            Some(Aggregate::Count)
        );
        let out = serialize_spec(&spec);
        assert!(out.find("\"mark\"").unwrap() < out.find("\"encoding\"").unwrap());
        assert!(out.find("\"data\"").unwrap() < out.find("\"$schema\"").unwrap());
        assert!(out.contains("\"title\": \"Cars\""));
        assert_eq!(parse_spec(&out).unwrap(), spec);
    }

    #[test]
    fn bin_forms() {
        let spec = parse_spec(
            r#"{"mark":"bar","encoding":{
                "x":{"bin":true,"field":"a"},
                "y":{"bin":{"maxbins":-3}},
                "color":{"bin":{"maxbins":20,"extent":[0,5]}}}}"#,
        )
        .unwrap();
        assert_eq!(spec.encodings[0].bin, Some(BinSpec::default()));
        assert_eq!(
            spec.encodings[1].bin.as_ref().unwrap().maxbins,
            Some(MaxBins::Invalid(Value::from(-3)))
        );
        let c = spec.encodings[2].bin.as_ref().unwrap();
        assert_eq!(c.maxbins, Some(MaxBins::Valid(20)));
        assert!(c.extra.contains_key("extent"));
        assert_eq!(parse_spec(&serialize_spec(&spec)).unwrap(), spec);
    }

    #[test]
    fn log_scale_is_modelled() {
        let spec = parse_spec(
            r#"{"mark":"point","encoding":{"y":{"field":"a","scale":{"type":"log","domain":[1,10]}}}}"#,
        )
        .unwrap();
        assert!(spec.encodings[0].scale.log);
        assert!(spec.encodings[0].scale.extra.contains_key("domain"));
    }
}
