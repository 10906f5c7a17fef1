//! The supported subset of single-view Vega-Lite specifications.
//!
//! Parsing never rejects an unknown keyword: a misspelled mark, channel,
//! type or aggregate becomes a [`Token`] with no canonical value so the
//! linter can report it. Keys outside the modelled subset are carried as
//! passthrough and written back unchanged.

pub mod diff;
mod json;
pub mod vocab;

use serde_json::{Map, Value};

pub use self::diff::{apply_diff, diff_specs, DiffEntry, DiffKind, SpecDiff};
pub use self::json::{parse_spec, serialize_spec};
pub use self::vocab::{edit_distance, Aggregate, Channel, FieldType, Mark, StackMode, Vocabulary};

/// A keyword as written in the source, plus its vocabulary value when the
/// spelling is valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token<T> {
    pub raw: String,
    pub canonical: Option<T>,
}

impl<T: Vocabulary> Token<T> {
    pub fn new(raw: impl Into<String>) -> Self {
        let raw = raw.into();
        let canonical = T::from_keyword(&raw);
        Token { raw, canonical }
    }

    pub fn canonical(value: T) -> Self {
        Token {
            raw: value.as_str().to_string(),
            canonical: Some(value),
        }
    }

    pub fn is_typo(&self) -> bool {
        self.canonical.is_none()
    }
}

pub type MarkToken = Token<Mark>;
pub type ChannelToken = Token<Channel>;
pub type TypeToken = Token<FieldType>;
pub type AggregateToken = Token<Aggregate>;

/// `stack` accepts booleans and `null` besides the offset keywords, so the
/// raw form is kept as JSON.
#[derive(Debug, Clone, PartialEq)]
pub struct StackToken {
    pub raw: Value,
    pub canonical: Option<StackMode>,
}

impl StackToken {
    pub fn from_value(raw: Value) -> Self {
        let canonical = match &raw {
            Value::Bool(true) => Some(StackMode::Zero),
            Value::Bool(false) | Value::Null => Some(StackMode::None),
            Value::String(s) => StackMode::from_keyword(s),
            _ => None,
        };
        StackToken { raw, canonical }
    }

    pub fn mode(mode: StackMode) -> Self {
        StackToken {
            raw: Value::String(mode.as_str().to_string()),
            canonical: Some(mode),
        }
    }

    /// The raw value as text, for diagnostics.
    pub fn raw_text(&self) -> String {
        match &self.raw {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        }
    }
}

/// The `maxbins` parameter of a bin declaration.
#[derive(Debug, Clone, PartialEq)]
pub enum MaxBins {
    Valid(u32),
    /// Anything that is not a positive integer, kept verbatim.
    Invalid(Value),
}

/// `bin: true` is the default binning; an object may carry `maxbins` and
/// other parameters, which are kept verbatim.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BinSpec {
    pub maxbins: Option<MaxBins>,
    pub extra: Map<String, Value>,
}

impl BinSpec {
    pub fn with_maxbins(n: u32) -> Self {
        BinSpec {
            maxbins: Some(MaxBins::Valid(n)),
            extra: Map::new(),
        }
    }

    pub fn is_valid(&self) -> bool {
        !matches!(self.maxbins, Some(MaxBins::Invalid(_)))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScaleSpec {
    /// `scale.type == "log"`.
    pub log: bool,
    pub zero: Option<bool>,
    pub extra: Map<String, Value>,
}

impl ScaleSpec {
    pub fn is_empty(&self) -> bool {
        !self.log && self.zero.is_none() && self.extra.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Encoding {
    pub channel: ChannelToken,
    pub field: Option<String>,
    pub field_type: Option<TypeToken>,
    pub aggregate: Option<AggregateToken>,
    pub bin: Option<BinSpec>,
    pub scale: ScaleSpec,
    pub stack: Option<StackToken>,
    /// Encoding properties outside the modelled subset (`title`, `axis`, ...).
    pub extra: Map<String, Value>,
}

impl Encoding {
    pub fn new(channel: ChannelToken) -> Self {
        Encoding {
            channel,
            field: None,
            field_type: None,
            aggregate: None,
            bin: None,
            scale: ScaleSpec::default(),
            stack: None,
            extra: Map::new(),
        }
    }

    /// The channel key as written in the spec.
    pub fn key(&self) -> &str {
        &self.channel.raw
    }

    pub fn is_stacked(&self) -> bool {
        self.stack
            .as_ref()
            .is_some_and(|s| s.canonical != Some(StackMode::None))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DataRef {
    pub url: Option<String>,
    pub values: Option<Vec<Value>>,
    pub extra: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartSpec {
    pub mark: MarkToken,
    /// Mark properties when the mark is given as an object (`{"type": ..}`).
    pub mark_props: Map<String, Value>,
    /// Encodings in source order. Duplicate channel keys are kept so the
    /// linter can report them.
    pub encodings: Vec<Encoding>,
    pub data: Option<DataRef>,
    pub passthrough: Map<String, Value>,
}

impl ChartSpec {
    pub fn new(mark: Mark) -> Self {
        ChartSpec {
            mark: Token::canonical(mark),
            mark_props: Map::new(),
            encodings: Vec::new(),
            data: None,
            passthrough: Map::new(),
        }
    }

    /// Index of the encoding addressed by a channel key. With duplicate keys
    /// the last occurrence is addressed: it is the one a JSON reader keeps.
    pub fn position(&self, key: &str) -> Option<usize> {
        self.encodings.iter().rposition(|e| e.key() == key)
    }

    pub fn encoding(&self, key: &str) -> Option<&Encoding> {
        self.position(key).map(|i| &self.encodings[i])
    }

    pub fn encoding_mut(&mut self, key: &str) -> Option<&mut Encoding> {
        self.position(key).map(move |i| &mut self.encodings[i])
    }

    pub fn has_channel(&self, key: &str) -> bool {
        self.position(key).is_some()
    }

    /// Column names referenced by encodings, first-use order, deduplicated.
    pub fn fields(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for f in self.encodings.iter().filter_map(|e| e.field.as_deref()) {
            if !out.contains(&f) {
                out.push(f);
            }
        }
        out
    }
}
