//! The edit vocabulary of the fixer.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::spec::{Aggregate, Channel, FieldType, Mark, StackMode, Vocabulary};

macro_rules! action_kinds {
    ($($variant:ident => $name:literal),+ $(,)?) => {
        /// The 24 edit operations, in catalog order.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum ActionKind {
            $($variant),+
        }

        impl ActionKind {
            pub const ALL: &'static [ActionKind] = &[$(ActionKind::$variant),+];

            pub fn name(self) -> &'static str {
                match self {
                    $(ActionKind::$variant => $name),+
                }
            }
        }
    };
}

action_kinds! {
    ChangeMark => "CHANGE_MARK",
    AddChannel => "ADD_CHANNEL",
    ChangeChannel => "CHANGE_CHANNEL",
    RemoveChannel => "REMOVE_CHANNEL",
    AddField => "ADD_FIELD",
    ChangeField => "CHANGE_FIELD",
    RemoveField => "REMOVE_FIELD",
    ChangeType => "CHANGE_TYPE",
    Bin => "BIN",
    RemoveBin => "REMOVE_BIN",
    Aggregate => "AGGREGATE",
    ChangeAggregate => "CHANGE_AGGREGATE",
    RemoveAggregate => "REMOVE_AGGREGATE",
    Stack => "STACK",
    RemoveStack => "REMOVE_STACK",
    Log => "LOG",
    RemoveLog => "REMOVE_LOG",
    Zero => "ZERO",
    RemoveZero => "REMOVE_ZERO",
    CorrectMark => "CORRECT_MARK",
    CorrectChannel => "CORRECT_CHANNEL",
    CorrectType => "CORRECT_TYPE",
    CorrectAggregate => "CORRECT_AGGREGATE",
    CorrectBin => "CORRECT_BIN",
}

impl ActionKind {
    pub fn from_name(name: &str) -> Option<ActionKind> {
        ActionKind::ALL.iter().copied().find(|k| k.name() == name)
    }

    /// Whether the action edits an existing encoding (and so needs a channel).
    pub fn targets_encoding(self) -> bool {
        !matches!(self, ActionKind::ChangeMark | ActionKind::CorrectMark)
    }
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for ActionKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for ActionKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ActionKind::from_name(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown action `{s}`")))
    }
}

/// The parameter of an action.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActionValue {
    Mark(Mark),
    Channel(Channel),
    Field(String),
    /// A column together with the type it is encoded as.
    TypedField {
        field: String,
        field_type: FieldType,
    },
    Type(FieldType),
    Aggregate(Aggregate),
    Stack(StackMode),
    MaxBins(u32),
}

impl ActionValue {
    pub fn to_json(&self) -> Value {
        match self {
            ActionValue::Mark(m) => json!(m.as_str()),
            ActionValue::Channel(c) => json!(c.as_str()),
            ActionValue::Field(f) => json!(f),
            ActionValue::TypedField { field, field_type } => {
                json!({ "field": field, "type": field_type.as_str() })
            }
            ActionValue::Type(t) => json!(t.as_str()),
            ActionValue::Aggregate(a) => json!(a.as_str()),
            ActionValue::Stack(s) => json!(s.as_str()),
            ActionValue::MaxBins(n) => json!(n),
        }
    }

    /// Reads the value of an action of the given kind.
    pub fn from_json(kind: ActionKind, v: &Value) -> Result<ActionValue, String> {
        fn keyword<T: Vocabulary>(v: &Value) -> Result<T, String> {
            v.as_str()
                .and_then(T::from_keyword)
                .ok_or_else(|| format!("unexpected value {v}"))
        }
        use ActionKind as K;
        Ok(match kind {
            K::ChangeMark | K::CorrectMark => ActionValue::Mark(keyword(v)?),
            K::ChangeChannel | K::CorrectChannel => ActionValue::Channel(keyword(v)?),
            K::ChangeType | K::CorrectType => ActionValue::Type(keyword(v)?),
            K::Aggregate | K::ChangeAggregate | K::CorrectAggregate => {
                ActionValue::Aggregate(keyword(v)?)
            }
            K::Stack => ActionValue::Stack(keyword(v)?),
            K::CorrectBin => match v.as_u64() {
                Some(n) if n > 0 && n <= u64::from(u32::MAX) => ActionValue::MaxBins(n as u32),
                _ => return Err(format!("expected a positive bin count, found {v}")),
            },
            K::AddField => match v {
                Value::String(s) => ActionValue::Field(s.clone()),
                _ => return Err(format!("expected a field name, found {v}")),
            },
            K::AddChannel | K::ChangeField => {
                let field = v.get("field").and_then(Value::as_str);
                let ty = v.get("type").and_then(Value::as_str).and_then(FieldType::from_keyword);
                match (field, ty) {
                    (Some(field), Some(field_type)) => ActionValue::TypedField {
                        field: field.to_string(),
                        field_type,
                    },
                    _ => return Err(format!("expected {{field, type}}, found {v}")),
                }
            }
            _ => return Err(format!("{} takes no value", kind.name())),
        })
    }
}

impl fmt::Display for ActionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionValue::Mark(m) => write!(f, "{m}"),
            ActionValue::Channel(c) => write!(f, "{c}"),
            ActionValue::Field(s) => f.write_str(s),
            ActionValue::TypedField { field, .. } => f.write_str(field),
            ActionValue::Type(t) => write!(f, "{t}"),
            ActionValue::Aggregate(a) => write!(f, "{a}"),
            ActionValue::Stack(s) => write!(f, "{s}"),
            ActionValue::MaxBins(n) => write!(f, "{n}"),
        }
    }
}

/// A concrete edit: an operation, the channel key it targets (as written in
/// the spec) and its parameter. Two actions are equivalent exactly when all
/// three parts are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Action {
    pub kind: ActionKind,
    pub channel: Option<String>,
    pub value: Option<ActionValue>,
}

impl Action {
    pub fn new(kind: ActionKind, channel: Option<&str>, value: Option<ActionValue>) -> Self {
        Action {
            kind,
            channel: channel.map(str::to_string),
            value,
        }
    }

    pub fn on(kind: ActionKind, channel: &str) -> Self {
        Action::new(kind, Some(channel), None)
    }

    pub fn with(kind: ActionKind, channel: &str, value: ActionValue) -> Self {
        Action::new(kind, Some(channel), Some(value))
    }

    pub fn mark(kind: ActionKind, mark: Mark) -> Self {
        Action::new(kind, None, Some(ActionValue::Mark(mark)))
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.kind.name(),
            "channel": self.channel,
            "value": self.value.as_ref().map(ActionValue::to_json),
        })
    }
}

/// Channel precedence: mark-level actions first, then channels in vocabulary
/// order, then unknown keys alphabetically.
pub(crate) fn channel_rank(key: Option<&str>) -> (usize, &str) {
    match key {
        None => (0, ""),
        Some(k) => match Channel::from_keyword(k) {
            Some(c) => (1 + c as usize, ""),
            None => (1 + Channel::ALL.len(), k),
        },
    }
}

impl Ord for Action {
    fn cmp(&self, other: &Self) -> Ordering {
        self.kind
            .cmp(&other.kind)
            .then_with(|| channel_rank(self.channel.as_deref()).cmp(&channel_rank(other.channel.as_deref())))
            .then_with(|| self.value.cmp(&other.value))
    }
}

impl PartialOrd for Action {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.kind)?;
        match (&self.channel, &self.value) {
            (Some(c), Some(v)) => write!(f, "{c}→{v}")?,
            (Some(c), None) => f.write_str(c)?,
            (None, Some(v)) => write!(f, "{v}")?,
            (None, None) => {}
        }
        f.write_str(")")
    }
}

#[derive(Serialize, Deserialize)]
struct ActionRepr {
    name: ActionKind,
    #[serde(default)]
    channel: Option<String>,
    #[serde(default)]
    value: Option<Value>,
}

impl Serialize for Action {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ActionRepr {
            name: self.kind,
            channel: self.channel.clone(),
            value: self.value.as_ref().map(ActionValue::to_json),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Action {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = ActionRepr::deserialize(d)?;
        let value = match repr.value {
            None | Some(Value::Null) => None,
            Some(v) => Some(ActionValue::from_json(repr.name, &v).map_err(serde::de::Error::custom)?),
        };
        Ok(Action {
            kind: repr.name,
            channel: repr.channel,
            value,
        })
    }
}
