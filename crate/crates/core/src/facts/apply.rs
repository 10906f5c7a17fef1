use crate::error::ActionError;
use crate::fix::{Action, ActionKind, ActionValue};
use crate::spec::{
    BinSpec, ChartSpec, Encoding, MaxBins, StackToken, Token, Vocabulary,
};

fn not_applicable(action: &Action, reason: impl Into<String>) -> ActionError {
    ActionError::NotApplicable {
        action: action.to_string(),
        reason: reason.into(),
    }
}

fn target_key(action: &Action) -> Result<&str, ActionError> {
    action
        .channel
        .as_deref()
        .ok_or_else(|| not_applicable(action, "no target channel"))
}

fn bad_value(action: &Action) -> ActionError {
    not_applicable(action, "missing or mismatched value")
}

/// Applies a single edit, returning the edited copy.
///
/// Every edit checks its precondition (the property it adds is absent, the
/// property it removes or changes is present, the new value differs from the
/// current one) so an edit followed by its inverse restores the input.
pub fn apply_action_to_spec(spec: &ChartSpec, action: &Action) -> Result<ChartSpec, ActionError> {
    let mut out = spec.clone();
    match action.kind {
        ActionKind::ChangeMark => {
            let Some(ActionValue::Mark(m)) = &action.value else {
                return Err(bad_value(action));
            };
            if out.mark.canonical == Some(*m) {
                return Err(not_applicable(action, "mark is already set"));
            }
            out.mark = Token::canonical(*m);
            return Ok(out);
        }
        ActionKind::CorrectMark => {
            let Some(ActionValue::Mark(m)) = &action.value else {
                return Err(bad_value(action));
            };
            if !out.mark.is_typo() {
                return Err(not_applicable(action, "mark is valid"));
            }
            out.mark = Token::canonical(*m);
            return Ok(out);
        }
        ActionKind::AddChannel => {
            let key = target_key(action)?;
            let Some(ActionValue::TypedField { field, field_type }) = &action.value else {
                return Err(bad_value(action));
            };
            if out.has_channel(key) {
                return Err(ActionError::ChannelOccupied(key.to_string()));
            }
            let mut enc = Encoding::new(Token::new(key));
            enc.field = Some(field.clone());
            enc.field_type = Some(Token::canonical(*field_type));
            out.encodings.push(enc);
            return Ok(out);
        }
        _ => {}
    }

    let key = target_key(action)?;
    let pos = out
        .position(key)
        .ok_or_else(|| ActionError::NoSuchEncoding(key.to_string()))?;

    match action.kind {
        ActionKind::RemoveChannel => {
            out.encodings.remove(pos);
            return Ok(out);
        }
        ActionKind::ChangeChannel | ActionKind::CorrectChannel => {
            let Some(ActionValue::Channel(c)) = &action.value else {
                return Err(bad_value(action));
            };
            let enc = &out.encodings[pos];
            if action.kind == ActionKind::CorrectChannel && !enc.channel.is_typo() {
                return Err(not_applicable(action, "channel is valid"));
            }
            if enc.channel.canonical == Some(*c) {
                return Err(not_applicable(action, "channel is already set"));
            }
            if out.has_channel(c.as_str()) {
                return Err(ActionError::ChannelOccupied(c.as_str().to_string()));
            }
            out.encodings[pos].channel = Token::canonical(*c);
            return Ok(out);
        }
        _ => {}
    }

    let enc = &mut out.encodings[pos];
    match (action.kind, &action.value) {
        (ActionKind::AddField, Some(ActionValue::Field(f))) => {
            if enc.field.is_some() {
                return Err(not_applicable(action, "a field is already set"));
            }
            enc.field = Some(f.clone());
        }
        (ActionKind::ChangeField, Some(ActionValue::TypedField { field, field_type })) => {
            if enc.field.as_deref() == Some(field.as_str()) {
                return Err(not_applicable(action, "field is already set"));
            }
            enc.field = Some(field.clone());
            enc.field_type = Some(Token::canonical(*field_type));
        }
        (ActionKind::RemoveField, None) => {
            if enc.field.take().is_none() {
                return Err(not_applicable(action, "no field to remove"));
            }
        }
        (ActionKind::ChangeType, Some(ActionValue::Type(t))) => {
            if enc.field_type.as_ref().and_then(|t| t.canonical) == Some(*t) {
                return Err(not_applicable(action, "type is already set"));
            }
            enc.field_type = Some(Token::canonical(*t));
        }
        (ActionKind::CorrectType, Some(ActionValue::Type(t))) => {
            if !enc.field_type.as_ref().is_some_and(|t| t.is_typo()) {
                return Err(not_applicable(action, "type is valid"));
            }
            enc.field_type = Some(Token::canonical(*t));
        }
        (ActionKind::Bin, None) => {
            if enc.bin.is_some() {
                return Err(not_applicable(action, "already binned"));
            }
            enc.bin = Some(BinSpec::default());
        }
        (ActionKind::RemoveBin, None) => {
            if enc.bin.take().is_none() {
                return Err(not_applicable(action, "not binned"));
            }
        }
        (ActionKind::CorrectBin, Some(ActionValue::MaxBins(n))) => match &mut enc.bin {
            Some(bin) if !bin.is_valid() => bin.maxbins = Some(MaxBins::Valid(*n)),
            _ => return Err(not_applicable(action, "bin is valid")),
        },
        (ActionKind::Aggregate, Some(ActionValue::Aggregate(a))) => {
            if enc.aggregate.is_some() {
                return Err(not_applicable(action, "already aggregated"));
            }
            enc.aggregate = Some(Token::canonical(*a));
        }
        (ActionKind::ChangeAggregate, Some(ActionValue::Aggregate(a))) => {
            match enc.aggregate.as_ref().and_then(|t| t.canonical) {
                Some(cur) if cur != *a => enc.aggregate = Some(Token::canonical(*a)),
                _ => return Err(not_applicable(action, "no other aggregate to change")),
            }
        }
        (ActionKind::CorrectAggregate, Some(ActionValue::Aggregate(a))) => {
            if !enc.aggregate.as_ref().is_some_and(|t| t.is_typo()) {
                return Err(not_applicable(action, "aggregate is valid"));
            }
            enc.aggregate = Some(Token::canonical(*a));
        }
        (ActionKind::RemoveAggregate, None) => {
            if enc.aggregate.take().is_none() {
                return Err(not_applicable(action, "not aggregated"));
            }
        }
        (ActionKind::Stack, Some(ActionValue::Stack(m))) => {
            if enc.stack.is_some() {
                return Err(not_applicable(action, "stack is already declared"));
            }
            enc.stack = Some(StackToken::mode(*m));
        }
        (ActionKind::RemoveStack, None) => {
            if enc.stack.take().is_none() {
                return Err(not_applicable(action, "no stack declared"));
            }
        }
        (ActionKind::Log, None) => {
            if enc.scale.log {
                return Err(not_applicable(action, "already on a log scale"));
            }
            enc.scale.log = true;
        }
        (ActionKind::RemoveLog, None) => {
            if !enc.scale.log {
                return Err(not_applicable(action, "not on a log scale"));
            }
            enc.scale.log = false;
        }
        (ActionKind::Zero, None) => {
            if enc.scale.zero == Some(true) {
                return Err(not_applicable(action, "zero is already included"));
            }
            enc.scale.zero = Some(true);
        }
        (ActionKind::RemoveZero, None) => {
            if enc.scale.zero != Some(true) {
                return Err(not_applicable(action, "zero is not forced"));
            }
            enc.scale.zero = None;
        }
        _ => return Err(bad_value(action)),
    }
    Ok(out)
}
